//! A small parser for the DOT subset: `digraph ID { stmt* }` with node,
//! edge, attribute and subgraph statements.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Id(String),
    Arrow,
    Open,
    Close,
    OpenBracket,
    CloseBracket,
    Equals,
    Semicolon,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => {
                chars.next();
                tokens.push(match c {
                    '{' => Token::Open,
                    '}' => Token::Close,
                    '[' => Token::OpenBracket,
                    ']' => Token::CloseBracket,
                    '=' => Token::Equals,
                    ';' => Token::Semicolon,
                    _ => Token::Comma,
                });
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some('>') => tokens.push(Token::Arrow),
                    other => return Err(format!("expected -> but found -{other:?}")),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some('"') => s.push('"'),
                            Some(other) => {
                                s.push('\\');
                                s.push(other);
                            }
                            None => return Err("unterminated string".into()),
                        },
                        Some('"') => break,
                        Some(other) => s.push(other),
                        None => return Err("unterminated string".into()),
                    }
                }
                tokens.push(Token::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(tokens)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Graph {
    pub name: String,
    /// Node id → attributes.
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    /// Node declaration order.
    pub node_order: Vec<String>,
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
    /// Subgraph name → node ids declared inside it.
    pub subgraphs: BTreeMap<String, Vec<String>>,
}

impl Graph {
    pub fn shape_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for attrs in self.nodes.values() {
            *counts.entry(attrs.get("shape").cloned().unwrap_or_default()).or_default() += 1;
        }
        counts
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), String> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(format!("expected {want:?}, found {other:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Token::Id(s)) => Ok(s),
            other => Err(format!("expected identifier, found {other:?}")),
        }
    }

    fn attr_list(&mut self) -> Result<BTreeMap<String, String>, String> {
        let mut attrs = BTreeMap::new();
        while self.peek() == Some(&Token::OpenBracket) {
            self.next();
            while self.peek() != Some(&Token::CloseBracket) {
                let key = self.id()?;
                self.expect(Token::Equals)?;
                let value = self.id()?;
                attrs.insert(key, value);
                if matches!(self.peek(), Some(Token::Comma) | Some(Token::Semicolon)) {
                    self.next();
                }
            }
            self.expect(Token::CloseBracket)?;
        }
        Ok(attrs)
    }

    fn statements(&mut self, graph: &mut Graph, scope: Option<&str>) -> Result<(), String> {
        self.expect(Token::Open)?;
        loop {
            match self.peek() {
                Some(Token::Close) => {
                    self.next();
                    return Ok(());
                }
                Some(Token::Semicolon) => {
                    self.next();
                }
                None => return Err("missing }".into()),
                Some(Token::Id(word)) if word == "subgraph" => {
                    self.next();
                    let name = match self.peek() {
                        Some(Token::Id(_)) => self.id()?,
                        _ => String::new(),
                    };
                    graph.subgraphs.entry(name.clone()).or_default();
                    self.statements(graph, Some(&name))?;
                }
                Some(Token::Id(word)) if matches!(word.as_str(), "graph" | "node" | "edge") => {
                    self.next();
                    self.attr_list()?;
                }
                Some(Token::Id(_)) => {
                    let first = self.id()?;
                    if self.peek() == Some(&Token::Equals) {
                        self.next();
                        self.id()?;
                        continue;
                    }
                    let mut chain = vec![first];
                    while self.peek() == Some(&Token::Arrow) {
                        self.next();
                        chain.push(self.id()?);
                    }
                    let attrs = self.attr_list()?;
                    if chain.len() == 1 {
                        let id = chain.pop().unwrap();
                        if !graph.nodes.contains_key(&id) {
                            graph.node_order.push(id.clone());
                        }
                        graph.nodes.entry(id.clone()).or_default().extend(attrs);
                        if let Some(scope) = scope {
                            graph.subgraphs.get_mut(scope).unwrap().push(id);
                        }
                    } else {
                        for pair in chain.windows(2) {
                            graph.edges.push((pair[0].clone(), pair[1].clone(), attrs.clone()));
                        }
                    }
                }
                other => return Err(format!("unexpected token {other:?}")),
            }
        }
    }
}

pub fn parse_dot(text: &str) -> Result<Graph, String> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    match parser.next() {
        Some(Token::Id(word)) if word == "digraph" => {}
        other => return Err(format!("expected digraph, found {other:?}")),
    }
    let mut graph = Graph {
        name: parser.id()?,
        ..Graph::default()
    };
    parser.statements(&mut graph, None)?;
    if parser.pos != parser.tokens.len() {
        return Err("trailing tokens after graph".into());
    }
    for (from, to, _) in &graph.edges {
        for end in [from, to] {
            if !graph.nodes.contains_key(end) {
                return Err(format!("edge endpoint {end} is not a declared node"));
            }
        }
    }
    Ok(graph)
}
