//! Tokenizer shared by the textual formats.

use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn word(&self) -> Option<&str> {
        match &self.tok {
            Tok::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn string(&self) -> Option<&str> {
        match &self.tok {
            Tok::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_sym(&self, c: char) -> bool {
        self.tok == Tok::Sym(c)
    }

    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(_) => "a string".to_string(),
            Tok::Sym(c) => format!("`{c}`"),
        }
    }

    pub fn diag(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.line, self.column, message)
    }
}

const SYMBOLS: &[char] = &['{', '}', ';', ':', '='];

/// Splits `text` into tokens. `#` starts a comment outside strings.
/// Strings are double-quoted, single-line, with `\"`, `\\`, `\n`, `\r`
/// and `\t` escapes. Lexical errors become diagnostics and the bad
/// token is dropped.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c.is_whitespace() {
            bump!();
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump!();
            }
        } else if SYMBOLS.contains(&c) {
            bump!();
            tokens.push(Token {
                tok: Tok::Sym(c),
                line: l,
                column: col,
            });
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            let mut ok = false;
            while let Some(&c) = chars.peek() {
                match c {
                    '\n' => break,
                    '"' => {
                        bump!();
                        ok = true;
                        break;
                    }
                    '\\' => {
                        let (el, ec) = (line, column);
                        bump!();
                        match bump!() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('r') => s.push('\r'),
                            Some('t') => s.push('\t'),
                            Some('\n') | None => break,
                            Some(other) => {
                                diags.push(Diagnostic::new(
                                    el,
                                    ec,
                                    format!("unknown escape `\\{other}`"),
                                ));
                            }
                        }
                    }
                    _ => {
                        s.push(c);
                        bump!();
                    }
                }
            }
            if ok {
                tokens.push(Token {
                    tok: Tok::Str(s),
                    line: l,
                    column: col,
                });
            } else {
                diags.push(Diagnostic::new(l, col, "unterminated string"));
            }
        } else {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '"' || c == '#' || SYMBOLS.contains(&c) {
                    break;
                }
                w.push(c);
                bump!();
            }
            tokens.push(Token {
                tok: Tok::Word(w),
                line: l,
                column: col,
            });
        }
    }
    (tokens, diags)
}

/// Tokens grouped by source line, empty lines dropped.
pub fn lines(tokens: Vec<Token>) -> Vec<Vec<Token>> {
    let mut out: Vec<Vec<Token>> = Vec::new();
    for t in tokens {
        match out.last_mut() {
            Some(last) if last[0].line == t.line => last.push(t),
            _ => out.push(vec![t]),
        }
    }
    out
}

/// Quotes `s` so that [`tokenize`] reads it back unchanged.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A cursor over one statement's tokens.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Where to point when the tokens run out.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        let end = toks
            .last()
            .map_or((1, 1), |t| (t.line, t.column + 1));
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn rest(&self) -> &'a [Token] {
        &self.toks[self.pos.min(self.toks.len())..]
    }

    fn missing(&self, what: &str) -> Diagnostic {
        Diagnostic::new(self.end.0, self.end.1, format!("expected {what}"))
    }

    pub fn expect_word(&mut self, what: &str) -> Result<&'a Token, Diagnostic> {
        match self.next() {
            Some(t) if t.word().is_some() => Ok(t),
            Some(t) => Err(t.diag(format!("expected {what}, found {}", t.describe()))),
            None => Err(self.missing(what)),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<&'a Token, Diagnostic> {
        match self.next() {
            Some(t) if t.word() == Some(kw) => Ok(t),
            Some(t) => Err(t.diag(format!("expected `{kw}`, found {}", t.describe()))),
            None => Err(self.missing(&format!("`{kw}`"))),
        }
    }

    pub fn expect_string(&mut self, what: &str) -> Result<(&'a Token, &'a str), Diagnostic> {
        match self.next() {
            Some(t) => match t.string() {
                Some(s) => Ok((t, s)),
                None => Err(t.diag(format!("expected {what}, found {}", t.describe()))),
            },
            None => Err(self.missing(what)),
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<&'a Token, Diagnostic> {
        match self.next() {
            Some(t) if t.is_sym(c) => Ok(t),
            Some(t) => Err(t.diag(format!("expected `{c}`, found {}", t.describe()))),
            None => Err(self.missing(&format!("`{c}`"))),
        }
    }

    /// Parses the next word with `FromStr`.
    pub fn parse_word<T: std::str::FromStr>(&mut self, what: &str) -> Result<(&'a Token, T), Diagnostic> {
        let t = self.expect_word(what)?;
        let w = t.word().unwrap_or_default();
        w.parse()
            .map(|v| (t, v))
            .map_err(|_| t.diag(format!("expected {what}, found `{w}`")))
    }

    pub fn expect_end(&mut self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(t.diag(format!("unexpected {}", t.describe()))),
        }
    }
}
