use super::PatternError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Real(f64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Plus,
    Star,
    Amp,
    Bar,
    Bang,
    Tilde,
    Dot,
    Arrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Real(r) => format!("`{r}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Bang => "!",
            Tok::Tilde => "~",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> PatternError {
    PatternError::Syntax { line, column, message: message.into() }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, PatternError> {
    let mut cur = Cursor { chars: src.chars().peekable(), line: 1, column: 1 };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.bump() else {
            out.push(Token { tok: Tok::Eof, line, column });
            return Ok(out);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '~' => Tok::Tilde,
            '.' => Tok::Dot,
            '=' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                }
                Tok::Eq
            }
            '!' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                    Tok::Ne
                } else {
                    Tok::Bang
                }
            }
            '<' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '-' => match cur.peek() {
                Some('>') => {
                    cur.bump();
                    Tok::Arrow
                }
                Some(d) if d.is_ascii_digit() => number(&mut cur, true, line, column)?,
                _ => return Err(err(line, column, "expected `->` or a number after `-`")),
            },
            '"' => Tok::Str(string(&mut cur, line, column)?),
            c if c.is_ascii_digit() => number_from(&mut cur, c, line, column)?,
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(c) = cur.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        s.push(c);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => return Err(err(line, column, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line, column });
    }
}

fn number(cur: &mut Cursor<'_>, negative: bool, line: usize, column: usize) -> Result<Tok, PatternError> {
    let first = cur.bump().expect("digit checked by caller");
    let tok = number_from(cur, first, line, column)?;
    Ok(match (tok, negative) {
        (Tok::Int(i), true) => Tok::Int(-i),
        (Tok::Real(r), true) => Tok::Real(-r),
        (t, _) => t,
    })
}

fn number_from(cur: &mut Cursor<'_>, first: char, line: usize, column: usize) -> Result<Tok, PatternError> {
    let mut s = String::from(first);
    let mut real = false;
    let digits = |cur: &mut Cursor<'_>, s: &mut String| {
        while let Some(c) = cur.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                cur.bump();
            } else {
                break;
            }
        }
    };
    digits(cur, &mut s);
    if cur.peek() == Some('.') {
        real = true;
        s.push('.');
        cur.bump();
        digits(cur, &mut s);
    }
    if let Some(e @ ('e' | 'E')) = cur.peek() {
        real = true;
        s.push(e);
        cur.bump();
        if let Some(sign @ ('+' | '-')) = cur.peek() {
            s.push(sign);
            cur.bump();
        }
        digits(cur, &mut s);
    }
    if real {
        s.parse::<f64>().map(Tok::Real).map_err(|_| err(line, column, format!("malformed number `{s}`")))
    } else {
        s.parse::<i64>().map(Tok::Int).map_err(|_| err(line, column, format!("integer `{s}` out of range")))
    }
}

fn string(cur: &mut Cursor<'_>, line: usize, column: usize) -> Result<String, PatternError> {
    let mut s = String::new();
    loop {
        match cur.bump() {
            None => return Err(err(line, column, "unterminated string literal")),
            Some('"') => return Ok(s),
            Some('\\') => match cur.bump() {
                Some('"') => s.push('"'),
                Some('\\') => s.push('\\'),
                Some('n') => s.push('\n'),
                Some('t') => s.push('\t'),
                Some('r') => s.push('\r'),
                Some('u') => {
                    if cur.bump() != Some('{') {
                        return Err(err(cur.line, cur.column, "expected `{` after `\\u`"));
                    }
                    let mut hex = String::new();
                    loop {
                        match cur.bump() {
                            Some('}') => break,
                            Some(h) if h.is_ascii_hexdigit() && hex.len() < 6 => hex.push(h),
                            _ => return Err(err(cur.line, cur.column, "malformed unicode escape")),
                        }
                    }
                    let ch = u32::from_str_radix(&hex, 16)
                        .ok()
                        .and_then(char::from_u32)
                        .ok_or_else(|| err(cur.line, cur.column, "invalid unicode scalar"))?;
                    s.push(ch);
                }
                _ => return Err(err(cur.line, cur.column, "unknown escape sequence")),
            },
            Some(c) => s.push(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_literals() {
        assert_eq!(
            toks("a.b >= -2.5 -> r1 # trailing"),
            vec![
                Tok::Ident("a".into()),
                Tok::Dot,
                Tok::Ident("b".into()),
                Tok::Ge,
                Tok::Real(-2.5),
                Tok::Arrow,
                Tok::Ident("r1".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks(r#""a\"b" != 3"#), vec![Tok::Str("a\"b".into()), Tok::Ne, Tok::Int(3), Tok::Eof]);
    }

    #[test]
    fn positions_count_lines_and_columns() {
        let t = tokenize("x\n  ;").unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
        assert!(matches!(tokenize("\"open"), Err(PatternError::Syntax { line: 1, .. })));
    }
}
