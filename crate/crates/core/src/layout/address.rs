use std::fmt;

/// One cell of the workbook. Columns and rows are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddress {
    pub sheet: String,
    pub column: u32,
    pub row: u32,
}

impl CellAddress {
    pub fn new(sheet: impl Into<String>, column: u32, row: u32) -> Self {
        assert!(column >= 1 && row >= 1, "cell addresses are 1-based");
        Self {
            sheet: sheet.into(),
            column,
            row,
        }
    }

    /// Sheet-local A1 reference, e.g. `B20`.
    pub fn a1(&self) -> String {
        format!("{}{}", column_letters(self.column), self.row)
    }

    /// Absolute reference with sheet, as stored in defined names:
    /// `Model!$B$20`, or `'Model Distance'!$B$4` when quoting is needed.
    pub fn absolute(&self) -> String {
        format!(
            "{}!${}${}",
            quote_sheet_name(&self.sheet),
            column_letters(self.column),
            self.row
        )
    }
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}!{}", quote_sheet_name(&self.sheet), self.a1())
    }
}

pub fn quote_sheet_name(name: &str) -> String {
    if name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') && !name.is_empty() {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

pub fn column_letters(mut column: u32) -> String {
    let mut letters = Vec::new();
    while column > 0 {
        let rem = (column - 1) % 26;
        letters.push(b'A' + rem as u8);
        column = (column - 1) / 26;
    }
    letters.reverse();
    String::from_utf8(letters).expect("ascii")
}

/// Parses a sheet-local reference such as `B20` or `$B$20`.
pub fn parse_a1(text: &str) -> Option<(u32, u32)> {
    let text = text.strip_prefix('$').unwrap_or(text);
    let letters = text.bytes().take_while(u8::is_ascii_alphabetic).count();
    if !(1..=3).contains(&letters) {
        return None;
    }
    let (col_text, rest) = text.split_at(letters);
    let rest = rest.strip_prefix('$').unwrap_or(rest);
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    let column = col_text
        .bytes()
        .fold(0u32, |acc, b| acc * 26 + u32::from(b.to_ascii_uppercase() - b'A' + 1));
    let row = rest.parse().ok()?;
    Some((column, row))
}
