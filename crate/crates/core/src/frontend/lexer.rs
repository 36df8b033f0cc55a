use std::fmt;

use crate::error::SourceDiagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Semicolon,
    Pipe,
    EqEq,
    Eq,
    Arrow,
    Assign,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Semicolon => f.write_str("`;`"),
            TokenKind::Pipe => f.write_str("`|`"),
            TokenKind::EqEq => f.write_str("`==`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::Assign => f.write_str("`:=`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.ident() == Some(kw)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `text` into tokens. `#` starts a comment running to the end of the line.
/// Positions are 1-based; `first_line` is the line number of the first line of `text`.
pub fn tokenize(text: &str, file: &str, first_line: usize) -> Result<Vec<Token>, SourceDiagnostic> {
    let mut out = Vec::new();
    for (k, line_text) in text.split('\n').enumerate() {
        let line = first_line + k;
        let chars: Vec<char> = line_text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (kind, width) = match (c, next) {
                ('=', Some('=')) => (TokenKind::EqEq, 2),
                ('-', Some('>')) => (TokenKind::Arrow, 2),
                (':', Some('=')) => (TokenKind::Assign, 2),
                ('=', _) => (TokenKind::Eq, 1),
                ('(', _) => (TokenKind::LParen, 1),
                (')', _) => (TokenKind::RParen, 1),
                (',', _) => (TokenKind::Comma, 1),
                ('.', _) => (TokenKind::Dot, 1),
                (':', _) => (TokenKind::Colon, 1),
                (';', _) => (TokenKind::Semicolon, 1),
                ('|', _) => (TokenKind::Pipe, 1),
                _ if is_ident_char(c) && c != '\'' => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    out.push(Token {
                        kind: TokenKind::Ident(s),
                        line,
                        column,
                    });
                    continue;
                }
                _ => {
                    return Err(SourceDiagnostic::error(
                        file,
                        line,
                        column,
                        format!("unexpected character `{c}`"),
                    ))
                }
            };
            out.push(Token { kind, line, column });
            i += width;
        }
    }
    Ok(out)
}

/// A cursor over a token slice with diagnostics anchored at the current token.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    file: &'a str,
    /// Location reported when the input runs out.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], file: &'a str, end: (usize, usize)) -> Self {
        Cursor {
            toks,
            pos: 0,
            file,
            end,
        }
    }

    pub fn file(&self) -> &'a str {
        self.file
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn error_here(&self, msg: impl Into<String>) -> SourceDiagnostic {
        match self.peek() {
            Some(t) => SourceDiagnostic::error(self.file, t.line, t.column, msg),
            None => SourceDiagnostic::error(self.file, self.end.0, self.end.1, msg),
        }
    }

    pub fn error_at(&self, t: &Token, msg: impl Into<String>) -> SourceDiagnostic {
        SourceDiagnostic::error(self.file, t.line, t.column, msg)
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_keyword(kw)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<&'a Token, SourceDiagnostic> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.error_at(t, format!("expected {kind}, found {}", t.kind))),
            None => Err(self.error_here(format!("expected {kind}, found end of input"))),
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(&'a str, &'a Token), SourceDiagnostic> {
        match self.peek() {
            Some(t) => match &t.kind {
                TokenKind::Ident(s) => {
                    self.pos += 1;
                    Ok((s.as_str(), t))
                }
                k => Err(self.error_at(t, format!("expected {what}, found {k}"))),
            },
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    pub fn expect_end(&self) -> Result<(), SourceDiagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error_at(t, format!("unexpected {}", t.kind))),
        }
    }
}
