use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Number(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
    Ne,
    /// Anything the lexer does not recognize. Reported by the parser so a
    /// caller embedding formulas in a larger syntax can stop cleanly.
    Unknown(char),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(v) => write!(f, "number {v}"),
            Token::Ident(name) => write!(f, "identifier {name}"),
            Token::LParen => f.write_str("\"(\""),
            Token::RParen => f.write_str("\")\""),
            Token::Comma => f.write_str("\",\""),
            Token::Plus => f.write_str("\"+\""),
            Token::Minus => f.write_str("\"-\""),
            Token::Star => f.write_str("\"*\""),
            Token::Slash => f.write_str("\"/\""),
            Token::Caret => f.write_str("\"^\""),
            Token::Gt => f.write_str("\">\""),
            Token::Lt => f.write_str("\"<\""),
            Token::Ge => f.write_str("\">=\""),
            Token::Le => f.write_str("\"<=\""),
            Token::Eq => f.write_str("\"=\""),
            Token::Ne => f.write_str("\"<>\""),
            Token::Unknown(c) => write!(f, "character {c:?}"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub token: Token,
    pub start: usize,
    pub end: usize,
}

/// Splits formula text into tokens. Never fails: unrecognized characters
/// become [`Token::Unknown`].
pub(crate) fn tokenize(src: &str) -> Vec<Spanned> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            i = scan_number(bytes, i);
            // scan_number only accepts text that f64 parsing accepts
            Token::Number(src[start..i].parse().expect("scanned number literal"))
        } else if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.') {
                i += 1;
            }
            Token::Ident(src[start..i].to_string())
        } else {
            let next = bytes.get(i + 1).copied();
            let (token, len) = match (b, next) {
                (b'>', Some(b'=')) => (Token::Ge, 2),
                (b'<', Some(b'=')) => (Token::Le, 2),
                (b'<', Some(b'>')) => (Token::Ne, 2),
                (b'>', _) => (Token::Gt, 1),
                (b'<', _) => (Token::Lt, 1),
                (b'=', _) => (Token::Eq, 1),
                (b'(', _) => (Token::LParen, 1),
                (b')', _) => (Token::RParen, 1),
                (b',', _) => (Token::Comma, 1),
                (b'+', _) => (Token::Plus, 1),
                (b'-', _) => (Token::Minus, 1),
                (b'*', _) => (Token::Star, 1),
                (b'/', _) => (Token::Slash, 1),
                (b'^', _) => (Token::Caret, 1),
                _ => {
                    let c = src[i..].chars().next().expect("in bounds");
                    (Token::Unknown(c), c.len_utf8())
                }
            };
            i += len;
            token
        };
        out.push(Spanned { token, start, end: i });
    }
    out.push(Spanned {
        token: Token::Eof,
        start: bytes.len(),
        end: bytes.len(),
    });
    out
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}
