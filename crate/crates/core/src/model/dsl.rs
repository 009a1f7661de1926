//! Line-oriented model DSL.
//!
//! ```text
//! # comment
//! param Daily_Rate = 58 format currency(2)
//! input Nb_Days = 12 label "Nb Days"
//! var Daily_Cost = Nb_Days * Daily_Rate format currency(2)
//! output Rental_Cost = Daily_Cost
//! model Distance {
//!   var Total_Distance = End_Km - Start_Km
//! }
//! ```

use std::fmt::Write as _;

use super::{validate, Diagnostic, Location, Model, NumberFormat, VariableDecl, VariableKind};
use crate::formula::{parse_expression_prefix, render_canonical};
use crate::names::default_label;

/// A model that passed validation, with any warnings it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModel {
    pub model: Model,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses and validates. On any error every diagnostic (errors and
/// warnings, syntax and structural) is returned.
pub fn parse_model(source: &str) -> Result<ParsedModel, Vec<Diagnostic>> {
    let (model, mut diagnostics) = parse_model_unchecked(source);
    diagnostics.extend(validate(&model));
    if super::has_errors(&diagnostics) {
        Err(diagnostics)
    } else {
        Ok(ParsedModel { model, diagnostics })
    }
}

/// Parses without structural validation. Lines with syntax errors are
/// skipped and reported; the rest of the model is still returned.
pub fn parse_model_unchecked(source: &str) -> (Model, Vec<Diagnostic>) {
    let mut model = Model::default();
    let mut diagnostics = Vec::new();
    let mut current: Option<(String, usize)> = None;

    for (index, raw) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = strip_comment(raw);
        let mut cursor = Cursor::new(line, line_no);
        cursor.skip_ws();
        if cursor.at_end() {
            continue;
        }
        let result = if cursor.eat('}') {
            cursor.skip_ws();
            match (current.take(), cursor.at_end()) {
                (None, _) => Err(cursor.error("\"}\" without an open model block")),
                (Some(_), false) => Err(cursor.error("unexpected text after \"}\"")),
                (Some(_), true) => Ok(()),
            }
        } else {
            parse_statement(&mut cursor, &mut model, &mut current)
        };
        if let Err(diag) = result {
            diagnostics.push(diag);
        }
    }
    if let Some((name, line)) = current {
        diagnostics.push(
            Diagnostic::error("syntax", format!("model block {name} is never closed"))
                .at(Location { line, column: 1 }),
        );
    }
    (model, diagnostics)
}

fn parse_statement(
    cursor: &mut Cursor<'_>,
    model: &mut Model,
    current: &mut Option<(String, usize)>,
) -> Result<(), Diagnostic> {
    let start = cursor.location();
    let keyword = cursor
        .word()
        .ok_or_else(|| cursor.error("expected a declaration keyword"))?;

    if keyword == "model" {
        cursor.skip_ws();
        let name = cursor.word().ok_or_else(|| cursor.error("expected a sub-model name"))?;
        if !name.bytes().enumerate().all(|(i, b)| {
            b == b'_' || b.is_ascii_alphabetic() || (i > 0 && b.is_ascii_digit())
        }) {
            return Err(Diagnostic::error("syntax", format!("invalid sub-model name {name}")).at(start));
        }
        cursor.skip_ws();
        if !cursor.eat('{') {
            return Err(cursor.error("expected \"{\""));
        }
        cursor.skip_ws();
        if !cursor.at_end() {
            return Err(cursor.error("unexpected text after \"{\""));
        }
        if let Some((open, _)) = current {
            return Err(Diagnostic::error(
                "syntax",
                format!("model block {name} nested inside {open}"),
            )
            .at(start));
        }
        if !model.submodels.iter().any(|s| s == name) {
            model.submodels.push(name.to_string());
        }
        *current = Some((name.to_string(), start.line));
        return Ok(());
    }

    let kind = VariableKind::from_keyword(keyword).ok_or_else(|| {
        Diagnostic::error(
            "syntax",
            format!("unknown keyword {keyword:?}; expected param, input, var, output or model"),
        )
        .at(start)
    })?;
    cursor.skip_ws();
    let name_at = cursor.location();
    let name = cursor.word().ok_or_else(|| cursor.error("expected a variable name"))?;

    let mut decl = VariableDecl::new(name, kind);
    decl.location = Some(name_at);
    decl.submodel = current.as_ref().map(|(s, _)| s.clone());

    cursor.skip_ws();
    if cursor.eat('=') {
        cursor.skip_ws();
        let rest = cursor.rest();
        let (expr, used) = parse_expression_prefix(rest).map_err(|err| {
            Diagnostic::error("syntax", err.to_string()).at(Location {
                line: name_at.line,
                column: cursor.pos + err.offset() + 1,
            })
        })?;
        cursor.pos += used;
        match (kind.is_formula_bearing(), expr.as_constant()) {
            (false, Some(value)) => decl.initial_value = Some(value),
            _ => decl.formula = Some(expr),
        }
    }

    let mut seen_format = false;
    let mut seen_label = false;
    loop {
        cursor.skip_ws();
        if cursor.at_end() {
            break;
        }
        let clause_at = cursor.location();
        match cursor.word() {
            Some("format") if !seen_format => {
                seen_format = true;
                cursor.skip_ws();
                decl.format = parse_format(cursor)?;
            }
            Some("label") if !seen_label => {
                seen_label = true;
                cursor.skip_ws();
                decl.label = cursor.string_literal()?;
            }
            Some(word @ ("format" | "label")) => {
                return Err(Diagnostic::error("syntax", format!("duplicate {word} clause")).at(clause_at));
            }
            _ => return Err(cursor.error("expected \"format\" or \"label\" clause")),
        }
    }

    model.declarations.push(decl);
    Ok(())
}

fn parse_format(cursor: &mut Cursor<'_>) -> Result<NumberFormat, Diagnostic> {
    let at = cursor.location();
    let word = cursor.word().ok_or_else(|| cursor.error("expected a number format"))?;
    let with_decimals = |cursor: &mut Cursor<'_>, default: u8| -> Result<u8, Diagnostic> {
        cursor.skip_ws();
        if !cursor.eat('(') {
            return Ok(default);
        }
        cursor.skip_ws();
        let at = cursor.location();
        let digits = cursor.word().ok_or_else(|| cursor.error("expected decimal count"))?;
        let decimals: u8 = digits
            .parse()
            .ok()
            .filter(|d| *d <= NumberFormat::MAX_DECIMALS)
            .ok_or_else(|| {
                Diagnostic::error("syntax", format!("decimal count must be 0 to 4, got {digits}")).at(at)
            })?;
        cursor.skip_ws();
        if !cursor.eat(')') {
            return Err(cursor.error("expected \")\""));
        }
        Ok(decimals)
    };
    match word {
        "general" => Ok(NumberFormat::General),
        "integer" => Ok(NumberFormat::Integer),
        "currency" => Ok(NumberFormat::Currency(with_decimals(cursor, 2)?)),
        "percent" => Ok(NumberFormat::Percent(with_decimals(cursor, 0)?)),
        other => Err(Diagnostic::error(
            "syntax",
            format!("unknown format {other:?}; expected general, integer, currency or percent"),
        )
        .at(at)),
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_string => escaped = true,
            '"' => in_string = !in_string,
            '#' if !in_string => return &line[..i],
            _ => {}
        }
    }
    line
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self { text, pos: 0, line }
    }

    fn location(&self) -> Location {
        Location {
            line: self.line,
            column: self.pos + 1,
        }
    }

    fn error(&self, message: &str) -> Diagnostic {
        Diagnostic::error("syntax", message.to_string()).at(self.location())
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'.')
            .count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn string_literal(&mut self) -> Result<String, Diagnostic> {
        if !self.eat('"') {
            return Err(self.error("expected a quoted label"));
        }
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, e @ ('"' | '\\'))) => out.push(e),
                    _ => return Err(self.error("invalid escape in label")),
                },
                c => out.push(c),
            }
        }
        Err(self.error("unterminated label"))
    }
}

/// Writes a model back as DSL text that [`parse_model_unchecked`] reads
/// into an equal model (source locations aside).
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    let mut open: Option<&str> = None;
    for decl in &model.declarations {
        let wanted = decl.submodel.as_deref();
        if wanted != open {
            if open.is_some() {
                out.push_str("}\n");
            }
            if let Some(name) = wanted {
                let _ = writeln!(out, "model {name} {{");
            }
            open = wanted;
        }
        if open.is_some() {
            out.push_str("  ");
        }
        out.push_str(decl.kind.keyword());
        out.push(' ');
        out.push_str(&decl.name);
        if let Some(value) = decl.initial_value {
            let _ = write!(out, " = {value}");
        } else if let Some(formula) = &decl.formula {
            let _ = write!(out, " = {}", render_canonical(formula));
        }
        if decl.format != NumberFormat::General {
            let _ = write!(out, " format {}", decl.format);
        }
        if decl.label != default_label(&decl.name) {
            let escaped = decl.label.replace('\\', "\\\\").replace('"', "\\\"");
            let _ = write!(out, " label \"{escaped}\"");
        }
        out.push('\n');
    }
    if open.is_some() {
        out.push_str("}\n");
    }
    for sub in &model.submodels {
        if !model.declarations.iter().any(|d| d.submodel.as_deref() == Some(sub)) {
            let _ = writeln!(out, "model {sub} {{\n}}");
        }
    }
    out
}
