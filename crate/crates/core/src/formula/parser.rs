use thiserror::Error;

use super::lexer::{tokenize, Spanned, Token};
use super::{BinaryOperator, Expression, Function};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown function {name} at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("{function} takes {expected} argument(s), got {found} (at byte {offset})")]
    Arity {
        function: Function,
        expected: String,
        found: usize,
        offset: usize,
    },
}

impl FormulaError {
    pub fn offset(&self) -> usize {
        match self {
            FormulaError::Syntax { offset, .. }
            | FormulaError::UnknownFunction { offset, .. }
            | FormulaError::Arity { offset, .. } => *offset,
        }
    }
}

/// Parses a complete formula. Trailing input is an error.
pub fn parse_expression(src: &str) -> Result<Expression, FormulaError> {
    let mut parser = Parser::new(src);
    let expr = parser.expr()?;
    match parser.peek() {
        Token::Eof => Ok(expr),
        _ => Err(parser.unexpected("an operator or end of input")),
    }
}

/// Parses the longest formula at the start of `src` and returns it with the
/// byte offset just past its last token. Used by the model DSL, where
/// clauses can follow a formula on the same line.
pub fn parse_expression_prefix(src: &str) -> Result<(Expression, usize), FormulaError> {
    let mut parser = Parser::new(src);
    let expr = parser.expr()?;
    let end = parser.tokens[parser.pos - 1].end;
    Ok((expr, end))
}

/// Parses stored cell formula text, which carries a leading `=`.
pub fn parse_cell_formula(text: &str) -> Result<Expression, FormulaError> {
    let trimmed = text.trim_start();
    let Some(body) = trimmed.strip_prefix('=') else {
        return Err(FormulaError::Syntax {
            offset: text.len() - trimmed.len(),
            expected: "\"=\"".into(),
            found: trimmed.chars().next().map_or("end of input".into(), |c| format!("{c:?}")),
        });
    };
    let shift = text.len() - body.len();
    parse_expression(body).map_err(|e| shift_error(e, shift))
}

fn shift_error(err: FormulaError, by: usize) -> FormulaError {
    match err {
        FormulaError::Syntax { offset, expected, found } => FormulaError::Syntax {
            offset: offset + by,
            expected,
            found,
        },
        FormulaError::UnknownFunction { name, offset } => FormulaError::UnknownFunction {
            name,
            offset: offset + by,
        },
        FormulaError::Arity {
            function,
            expected,
            found,
            offset,
        } => FormulaError::Arity {
            function,
            expected,
            found,
            offset: offset + by,
        },
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            tokens: tokenize(src),
            pos: 0,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_at(&self, ahead: usize) -> &Token {
        let idx = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[idx].token
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].start
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].token.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        token
    }

    fn unexpected(&self, expected: &str) -> FormulaError {
        FormulaError::Syntax {
            offset: self.offset(),
            expected: expected.to_string(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<(), FormulaError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expression, FormulaError> {
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expression, FormulaError> {
        let left = self.additive()?;
        let op = match self.peek() {
            Token::Gt => BinaryOperator::Gt,
            Token::Lt => BinaryOperator::Lt,
            Token::Ge => BinaryOperator::Ge,
            Token::Le => BinaryOperator::Le,
            Token::Eq => BinaryOperator::Eq,
            Token::Ne => BinaryOperator::Ne,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.additive()?;
        Ok(Expression::binary(op, left, right))
    }

    fn additive(&mut self) -> Result<Expression, FormulaError> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinaryOperator::Add,
                Token::Minus => BinaryOperator::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.multiplicative()?;
            left = Expression::binary(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> Result<Expression, FormulaError> {
        let mut left = self.power()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinaryOperator::Mul,
                Token::Slash => BinaryOperator::Div,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.power()?;
            left = Expression::binary(op, left, right);
        }
    }

    fn power(&mut self) -> Result<Expression, FormulaError> {
        let base = self.unary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.power()?;
            return Ok(Expression::binary(BinaryOperator::Pow, base, exponent));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expression, FormulaError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expression::negate(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expression, FormulaError> {
        let start = self.offset();
        match self.peek().clone() {
            Token::Number(value) if !value.is_finite() => Err(self.unexpected("a finite number")),
            Token::Number(value) => {
                self.bump();
                Ok(Expression::Number(value))
            }
            Token::Ident(name) if *self.peek_at(1) == Token::LParen => {
                self.bump();
                self.bump();
                let function = Function::lookup(&name).ok_or(FormulaError::UnknownFunction {
                    name: name.clone(),
                    offset: start,
                })?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Token::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Token::RParen, "\",\" or \")\"")?;
                let arity = function.arity();
                if !arity.accepts(args.len()) {
                    return Err(FormulaError::Arity {
                        function,
                        expected: arity.to_string(),
                        found: args.len(),
                        offset: start,
                    });
                }
                Ok(Expression::Call { function, args })
            }
            Token::Ident(name) => {
                self.bump();
                Ok(Expression::Variable(name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen, "\")\"")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, name, function call or \"(\"")),
        }
    }
}
