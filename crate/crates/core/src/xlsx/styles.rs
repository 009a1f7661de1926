use std::collections::BTreeSet;
use std::fmt::Write;

use super::xml_escape;
use crate::layout::{CellStyle, WorkbookPlan};
use crate::model::NumberFormat;

const FIRST_CUSTOM_FORMAT_ID: u32 = 164;

/// Fonts, borders, number formats and the cell formats combining them, for
/// exactly the styles a plan uses.
#[derive(Debug, Clone, PartialEq)]
pub struct StylePalette {
    currency_symbol: String,
    /// Custom number formats in id order.
    number_formats: Vec<NumberFormat>,
    /// Cell formats; index 0 is the default style.
    cell_formats: Vec<CellStyle>,
}

impl StylePalette {
    pub fn for_plan(plan: &WorkbookPlan, currency_symbol: &str) -> Self {
        let used: BTreeSet<CellStyle> = plan
            .sheets
            .iter()
            .flat_map(|s| s.cells.values().map(|c| c.style))
            .collect();
        Self::from_styles(used, currency_symbol)
    }

    pub fn from_styles(styles: impl IntoIterator<Item = CellStyle>, currency_symbol: &str) -> Self {
        let styles: BTreeSet<CellStyle> = styles.into_iter().collect();
        let number_formats: BTreeSet<NumberFormat> = styles
            .iter()
            .map(|s| s.format)
            .filter(|f| *f != NumberFormat::General)
            .collect();
        let mut cell_formats = vec![CellStyle::default()];
        cell_formats.extend(styles.into_iter().filter(|s| *s != CellStyle::default()));
        Self {
            currency_symbol: currency_symbol.replace('"', ""),
            number_formats: number_formats.into_iter().collect(),
            cell_formats,
        }
    }

    /// Cell-format index for `style`, or `None` when the palette lacks it.
    pub fn index_for(&self, style: CellStyle) -> Option<u32> {
        self.cell_formats.iter().position(|s| *s == style).map(|i| i as u32)
    }

    pub fn number_format_id(&self, format: NumberFormat) -> u32 {
        match format {
            NumberFormat::General => 0,
            _ => {
                let i = self
                    .number_formats
                    .iter()
                    .position(|f| *f == format)
                    .expect("palette holds every format in use");
                FIRST_CUSTOM_FORMAT_ID + i as u32
            }
        }
    }

    pub fn format_code(&self, format: NumberFormat) -> String {
        match format {
            NumberFormat::General => "General".into(),
            NumberFormat::Integer => "#,##0".into(),
            NumberFormat::Currency(d) => format!("#,##0{}\\ \"{}\"", decimals(d), self.currency_symbol),
            NumberFormat::Percent(d) => format!("0{}%", decimals(d)),
        }
    }

    pub fn len(&self) -> usize {
        self.cell_formats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_formats.is_empty()
    }

    /// The `xl/styles.xml` part.
    pub fn to_xml(&self) -> String {
        let mut xml = String::from(super::XML_DECLARATION);
        xml.push_str(r#"<styleSheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main">"#);
        if !self.number_formats.is_empty() {
            write!(xml, r#"<numFmts count="{}">"#, self.number_formats.len()).unwrap();
            for &format in &self.number_formats {
                write!(
                    xml,
                    r#"<numFmt numFmtId="{}" formatCode="{}"/>"#,
                    self.number_format_id(format),
                    xml_escape(&self.format_code(format))
                )
                .unwrap();
            }
            xml.push_str("</numFmts>");
        }
        xml.push_str(concat!(
            r#"<fonts count="2">"#,
            r#"<font><sz val="11"/><name val="Calibri"/><family val="2"/></font>"#,
            r#"<font><b/><sz val="11"/><name val="Calibri"/><family val="2"/></font>"#,
            "</fonts>",
            r#"<fills count="2"><fill><patternFill patternType="none"/></fill><fill><patternFill patternType="gray125"/></fill></fills>"#,
            r#"<borders count="2">"#,
            "<border><left/><right/><top/><bottom/><diagonal/></border>",
            r#"<border><left/><right/><top style="thin"><color auto="1"/></top><bottom/><diagonal/></border>"#,
            "</borders>",
            r#"<cellStyleXfs count="1"><xf numFmtId="0" fontId="0" fillId="0" borderId="0"/></cellStyleXfs>"#,
        ));
        write!(xml, r#"<cellXfs count="{}">"#, self.cell_formats.len()).unwrap();
        for style in &self.cell_formats {
            let num_fmt = self.number_format_id(style.format);
            write!(
                xml,
                r#"<xf numFmtId="{num_fmt}" fontId="{}" fillId="0" borderId="{}" xfId="0""#,
                u8::from(style.bold),
                u8::from(style.top_border)
            )
            .unwrap();
            if num_fmt != 0 {
                xml.push_str(r#" applyNumberFormat="1""#);
            }
            if style.bold {
                xml.push_str(r#" applyFont="1""#);
            }
            if style.top_border {
                xml.push_str(r#" applyBorder="1""#);
            }
            xml.push_str("/>");
        }
        xml.push_str("</cellXfs>");
        xml.push_str(r#"<cellStyles count="1"><cellStyle name="Normal" xfId="0" builtinId="0"/></cellStyles>"#);
        xml.push_str("</styleSheet>");
        xml
    }
}

fn decimals(d: u8) -> String {
    if d == 0 {
        String::new()
    } else {
        format!(".{}", "0".repeat(d as usize))
    }
}
