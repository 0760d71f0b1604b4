use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    /// The direct-sum token `(+)`.
    Sum,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Semi,
    Star,
    Slash,
    Plus,
    Minus,
    Caret,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("number {s}"),
            Tok::Str(_) => "string".into(),
            Tok::Sum => "`(+)`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.col, offset: self.pos }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// `(` whitespace `+` whitespace `)`, without consuming anything otherwise.
    fn at_sum(&self) -> Option<usize> {
        let rest = &self.src[self.pos..];
        let inner = rest.strip_prefix('(')?.trim_start();
        let inner = inner.strip_prefix('+')?.trim_start();
        inner.starts_with(')').then(|| rest.len() - inner.len() + 1)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let span = self.here();
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, span });
        };
        if let Some(len) = self.at_sum() {
            let end = self.pos + len;
            while self.pos < end {
                self.bump();
            }
            return Ok(Token { tok: Tok::Sum, span });
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            Tok::Ident(self.src[start..self.pos].to_string())
        } else if c.is_ascii_digit() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            Tok::Int(self.src[start..self.pos].to_string())
        } else if c == '"' {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    None => return Err(ParseError::new("unterminated string", span)),
                    Some('"') => break,
                    Some('\\') => match self.bump() {
                        Some('n') => s.push('\n'),
                        Some(c @ ('"' | '\\')) => s.push(c),
                        _ => return Err(ParseError::new("unknown escape in string", span)),
                    },
                    Some(c) => s.push(c),
                }
            }
            Tok::Str(s)
        } else {
            self.bump();
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '^' => Tok::Caret,
                '=' => Tok::Eq,
                other => return Err(ParseError::new(format!("unexpected character `{other}`"), span)),
            }
        };
        Ok(Token { tok, span })
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer { src, pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        let t = lx.next()?;
        let done = t.tok == Tok::Eof;
        out.push(t);
        if done {
            return Ok(out);
        }
    }
}
