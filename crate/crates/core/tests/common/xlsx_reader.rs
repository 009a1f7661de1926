//! Just enough of an xlsx reader to rebuild a workbook's cell grid.

use std::collections::BTreeMap;
use std::io::{Cursor, Read};

use ssmi_core::layout::{parse_a1, CellContent, WorkbookPlan};

const REL_NS: &str = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";

#[derive(Debug, Clone, PartialEq)]
pub enum ReadCell {
    Text(String),
    Number(f64),
    /// Formula text with its leading `=`, and the cached value text.
    Formula(String, Option<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadSheet {
    pub name: String,
    /// (row, column) → cell.
    pub cells: BTreeMap<(u32, u32), ReadCell>,
    /// (row, column) → style index.
    pub styles: BTreeMap<(u32, u32), u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadWorkbook {
    /// Archive part names in order.
    pub parts: Vec<String>,
    pub sheets: Vec<ReadSheet>,
    /// (name, target) in document order.
    pub defined_names: Vec<(String, String)>,
    pub full_calc_on_load: bool,
}

impl ReadWorkbook {
    pub fn sheet(&self, name: &str) -> &ReadSheet {
        self.sheets.iter().find(|s| s.name == name).unwrap_or_else(|| panic!("no sheet {name}"))
    }

    pub fn cell(&self, sheet: &str, a1: &str) -> Option<&ReadCell> {
        let (column, row) = parse_a1(a1)?;
        self.sheet(sheet).cells.get(&(row, column))
    }
}

/// Reads every part, checking each XML part parses.
pub fn unzip(bytes: &[u8]) -> Result<Vec<(String, String)>, String> {
    let mut archive = zip::ZipArchive::new(Cursor::new(bytes)).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for i in 0..archive.len() {
        let mut file = archive.by_index(i).map_err(|e| e.to_string())?;
        let mut body = String::new();
        file.read_to_string(&mut body).map_err(|e| e.to_string())?;
        roxmltree::Document::parse(&body).map_err(|e| format!("{}: {e}", file.name()))?;
        parts.push((file.name().to_string(), body));
    }
    Ok(parts)
}

pub fn read_xlsx(bytes: &[u8]) -> Result<ReadWorkbook, String> {
    let parts = unzip(bytes)?;
    let get = |name: &str| {
        parts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b.as_str())
            .ok_or_else(|| format!("missing part {name}"))
    };

    let rels_doc = roxmltree::Document::parse(get("xl/_rels/workbook.xml.rels")?).map_err(|e| e.to_string())?;
    let targets: BTreeMap<&str, &str> = rels_doc
        .descendants()
        .filter(|n| n.has_tag_name("Relationship"))
        .map(|n| (n.attribute("Id").unwrap_or(""), n.attribute("Target").unwrap_or("")))
        .collect();

    let workbook = roxmltree::Document::parse(get("xl/workbook.xml")?).map_err(|e| e.to_string())?;
    let mut sheets = Vec::new();
    for node in workbook.descendants().filter(|n| n.has_tag_name("sheet")) {
        let name = node.attribute("name").ok_or("sheet without name")?.to_string();
        let id = node.attribute((REL_NS, "id")).ok_or("sheet without r:id")?;
        let target = targets.get(id).ok_or_else(|| format!("dangling relationship {id}"))?;
        sheets.push(read_sheet(name, get(&format!("xl/{target}"))?)?);
    }
    let defined_names = workbook
        .descendants()
        .filter(|n| n.has_tag_name("definedName"))
        .map(|n| (n.attribute("name").unwrap_or("").to_string(), n.text().unwrap_or("").to_string()))
        .collect();
    let full_calc_on_load = workbook
        .descendants()
        .find(|n| n.has_tag_name("calcPr"))
        .and_then(|n| n.attribute("fullCalcOnLoad"))
        == Some("1");
    Ok(ReadWorkbook {
        parts: parts.into_iter().map(|(n, _)| n).collect(),
        sheets,
        defined_names,
        full_calc_on_load,
    })
}

fn read_sheet(name: String, xml: &str) -> Result<ReadSheet, String> {
    let doc = roxmltree::Document::parse(xml).map_err(|e| e.to_string())?;
    let mut cells = BTreeMap::new();
    let mut styles = BTreeMap::new();
    for c in doc.descendants().filter(|n| n.has_tag_name("c")) {
        let reference = c.attribute("r").ok_or("cell without r")?;
        let (column, row) = parse_a1(reference).ok_or_else(|| format!("bad reference {reference}"))?;
        let child = |tag: &str| c.children().find(|n| n.has_tag_name(tag));
        let cell = if let Some(f) = child("f") {
            let value = child("v").and_then(|v| v.text()).map(str::to_string);
            ReadCell::Formula(format!("={}", f.text().unwrap_or("")), value)
        } else if c.attribute("t") == Some("inlineStr") {
            let text: String = c
                .descendants()
                .filter(|n| n.has_tag_name("t"))
                .filter_map(|n| n.text())
                .collect();
            ReadCell::Text(text)
        } else {
            let v = child("v").and_then(|v| v.text()).ok_or_else(|| format!("{reference} has no value"))?;
            ReadCell::Number(v.parse().map_err(|_| format!("{reference}: bad number {v}"))?)
        };
        cells.insert((row, column), cell);
        let style = c.attribute("s").map_or(Ok(0), str::parse).map_err(|_| "bad style")?;
        styles.insert((row, column), style);
    }
    Ok(ReadSheet { name, cells, styles })
}

/// Sheet name with its cells, per sheet.
pub type Grid = Vec<(String, BTreeMap<(u32, u32), ReadCell>)>;

/// The grid a plan should read back as (cached values ignored).
pub fn plan_grid(plan: &WorkbookPlan) -> Grid {
    plan.sheets
        .iter()
        .map(|sheet| {
            let cells = sheet
                .cells
                .iter()
                .map(|(&key, cell)| {
                    let read = match &cell.content {
                        CellContent::Text(t) => ReadCell::Text(t.clone()),
                        CellContent::Number(v) => ReadCell::Number(*v),
                        CellContent::Formula { text, .. } => ReadCell::Formula(text.clone(), None),
                    };
                    (key, read)
                })
                .collect();
            (sheet.name.clone(), cells)
        })
        .collect()
}

/// The read grid with cached values dropped, for comparison with [`plan_grid`].
pub fn read_grid(book: &ReadWorkbook) -> Grid {
    book.sheets
        .iter()
        .map(|sheet| {
            let cells = sheet
                .cells
                .iter()
                .map(|(&key, cell)| {
                    let cell = match cell {
                        ReadCell::Formula(text, _) => ReadCell::Formula(text.clone(), None),
                        other => other.clone(),
                    };
                    (key, cell)
                })
                .collect();
            (sheet.name.clone(), cells)
        })
        .collect()
}
