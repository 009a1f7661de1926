//! SpreadsheetML serialization of a [`WorkbookPlan`]: inline strings,
//! formulas with cached values, defined names, and a style palette built
//! from the cells actually present.

mod package;
mod styles;

use std::fmt::Write;
use std::path::Path;

use thiserror::Error;

use crate::eval::Value;
use crate::layout::{column_letters, CellContent, PlanError, Sheet, WorkbookPlan};

pub use package::{package_bytes, package_zip};
pub use styles::StylePalette;

const XML_DECLARATION: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
const MAIN_NS: &str = "http://schemas.openxmlformats.org/spreadsheetml/2006/main";
const REL_NS: &str = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";
const PACKAGE_REL_NS: &str = "http://schemas.openxmlformats.org/package/2006/relationships";

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("empty package")]
    EmptyPackage,
    #[error("duplicate package part {0}")]
    DuplicatePart(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Zip(#[from] zip::result::ZipError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    /// Symbol shown after currency amounts.
    pub currency_symbol: String,
}

impl Default for EmitOptions {
    fn default() -> Self {
        Self {
            currency_symbol: "$".into(),
        }
    }
}

/// Writes the plan as an `.xlsx` file.
pub fn emit_xlsx(plan: &WorkbookPlan, destination: &Path, options: &EmitOptions) -> Result<(), EmitError> {
    package_zip(&workbook_parts(plan, options)?, destination)
}

/// The `.xlsx` file as bytes.
pub fn xlsx_bytes(plan: &WorkbookPlan, options: &EmitOptions) -> Result<Vec<u8>, EmitError> {
    package_bytes(&workbook_parts(plan, options)?)
}

/// Every package part, in archive order.
pub fn workbook_parts(plan: &WorkbookPlan, options: &EmitOptions) -> Result<Vec<(String, Vec<u8>)>, EmitError> {
    plan.check_invariants()?;
    let palette = StylePalette::for_plan(plan, &options.currency_symbol);
    let mut parts = vec![
        ("[Content_Types].xml".to_string(), content_types(plan)),
        ("_rels/.rels".to_string(), root_rels()),
        ("xl/workbook.xml".to_string(), workbook_xml(plan)),
        ("xl/_rels/workbook.xml.rels".to_string(), workbook_rels(plan)),
        ("xl/styles.xml".to_string(), palette.to_xml()),
    ];
    for (i, sheet) in plan.sheets.iter().enumerate() {
        parts.push((format!("xl/worksheets/sheet{}.xml", i + 1), sheet_xml(sheet, &palette)));
    }
    Ok(parts.into_iter().map(|(path, xml)| (path, xml.into_bytes())).collect())
}

fn content_types(plan: &WorkbookPlan) -> String {
    let mut xml = String::from(XML_DECLARATION);
    xml.push_str(concat!(
        r#"<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">"#,
        r#"<Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>"#,
        r#"<Default Extension="xml" ContentType="application/xml"/>"#,
        r#"<Override PartName="/xl/workbook.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml"/>"#,
        r#"<Override PartName="/xl/styles.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.styles+xml"/>"#,
    ));
    for i in 1..=plan.sheets.len() {
        write!(
            xml,
            r#"<Override PartName="/xl/worksheets/sheet{i}.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml"/>"#
        )
        .unwrap();
    }
    xml.push_str("</Types>");
    xml
}

fn root_rels() -> String {
    format!(
        r#"{XML_DECLARATION}<Relationships xmlns="{PACKAGE_REL_NS}"><Relationship Id="rId1" Type="{REL_NS}/officeDocument" Target="xl/workbook.xml"/></Relationships>"#
    )
}

fn workbook_xml(plan: &WorkbookPlan) -> String {
    let mut xml = String::from(XML_DECLARATION);
    write!(xml, r#"<workbook xmlns="{MAIN_NS}" xmlns:r="{REL_NS}"><sheets>"#).unwrap();
    for (i, sheet) in plan.sheets.iter().enumerate() {
        write!(
            xml,
            r#"<sheet name="{}" sheetId="{}" r:id="rId{}"/>"#,
            xml_escape(&sheet.name),
            i + 1,
            i + 1
        )
        .unwrap();
    }
    xml.push_str("</sheets>");
    if !plan.defined_names.is_empty() {
        xml.push_str("<definedNames>");
        for dn in &plan.defined_names {
            write!(
                xml,
                r#"<definedName name="{}">{}</definedName>"#,
                xml_escape(&dn.name),
                xml_escape(&dn.target.absolute())
            )
            .unwrap();
        }
        xml.push_str("</definedNames>");
    }
    xml.push_str(r#"<calcPr fullCalcOnLoad="1"/></workbook>"#);
    xml
}

fn workbook_rels(plan: &WorkbookPlan) -> String {
    let mut xml = String::from(XML_DECLARATION);
    write!(xml, r#"<Relationships xmlns="{PACKAGE_REL_NS}">"#).unwrap();
    for i in 1..=plan.sheets.len() {
        write!(
            xml,
            r#"<Relationship Id="rId{i}" Type="{REL_NS}/worksheet" Target="worksheets/sheet{i}.xml"/>"#
        )
        .unwrap();
    }
    write!(
        xml,
        r#"<Relationship Id="rId{}" Type="{REL_NS}/styles" Target="styles.xml"/></Relationships>"#,
        plan.sheets.len() + 1
    )
    .unwrap();
    xml
}

fn sheet_xml(sheet: &Sheet, palette: &StylePalette) -> String {
    let mut xml = String::from(XML_DECLARATION);
    write!(xml, r#"<worksheet xmlns="{MAIN_NS}" xmlns:r="{REL_NS}">"#).unwrap();
    if let Some(dimension) = dimension(sheet) {
        write!(xml, r#"<dimension ref="{dimension}"/>"#).unwrap();
    }
    if !sheet.column_widths.is_empty() {
        xml.push_str("<cols>");
        for (column, width) in &sheet.column_widths {
            write!(xml, r#"<col min="{column}" max="{column}" width="{width}" customWidth="1"/>"#).unwrap();
        }
        xml.push_str("</cols>");
    }
    xml.push_str("<sheetData>");
    let mut current_row = None;
    for (&(row, column), cell) in &sheet.cells {
        if current_row != Some(row) {
            if current_row.is_some() {
                xml.push_str("</row>");
            }
            write!(xml, r#"<row r="{row}">"#).unwrap();
            current_row = Some(row);
        }
        let reference = format!("{}{row}", column_letters(column));
        let style = palette.index_for(cell.style).expect("palette built from this plan");
        let s = if style == 0 { String::new() } else { format!(r#" s="{style}""#) };
        match &cell.content {
            CellContent::Text(text) => {
                let space = if text.trim() != text { r#" xml:space="preserve""# } else { "" };
                write!(
                    xml,
                    r#"<c r="{reference}"{s} t="inlineStr"><is><t{space}>{}</t></is></c>"#,
                    xml_escape(text)
                )
                .unwrap();
            }
            CellContent::Number(v) => {
                write!(xml, r#"<c r="{reference}"{s}><v>{v}</v></c>"#).unwrap();
            }
            CellContent::Formula { text, cached } => {
                let formula = xml_escape(text.strip_prefix('=').unwrap_or(text));
                let (kind, value) = match cached {
                    None => ("", None),
                    Some(Value::Number(v)) => ("", Some(v.to_string())),
                    Some(Value::Boolean(b)) => (r#" t="b""#, Some(u8::from(*b).to_string())),
                    Some(Value::Error(code)) => (r#" t="e""#, Some(code.spreadsheet_text().to_string())),
                };
                write!(xml, r#"<c r="{reference}"{s}{kind}><f>{formula}</f>"#).unwrap();
                if let Some(value) = value {
                    write!(xml, "<v>{}</v>", xml_escape(&value)).unwrap();
                }
                xml.push_str("</c>");
            }
        }
    }
    if current_row.is_some() {
        xml.push_str("</row>");
    }
    xml.push_str("</sheetData></worksheet>");
    xml
}

fn dimension(sheet: &Sheet) -> Option<String> {
    let first_row = sheet.cells.keys().next()?.0;
    let last_row = sheet.cells.keys().next_back()?.0;
    let first_column = sheet.cells.keys().map(|k| k.1).min()?;
    let last_column = sheet.cells.keys().map(|k| k.1).max()?;
    let start = format!("{}{first_row}", column_letters(first_column));
    let end = format!("{}{last_row}", column_letters(last_column));
    Some(if start == end { start } else { format!("{start}:{end}") })
}

pub(crate) fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
