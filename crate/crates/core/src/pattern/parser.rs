use crate::algebra::{Arg, CmpOp, Condition, Operand, PredExpr, Predicate, PredicateLibrary, Register, Value};

use super::ast::{Pattern, Srem};
use super::lexer::{tokenize, Tok, Token};
use super::PatternError;

const KEYWORDS: &[&str] = &["pred", "TRUE", "EPS", "NONE", "within"];

/// Register names are `r` followed by a digit, then letters, digits or
/// underscores (`r1`, `r2_3`).
pub fn is_register_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('r')
        && chars.next().is_some_and(|c| c.is_ascii_digit())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    library: PredicateLibrary,
}

impl Parser {
    fn new(src: &str, library: PredicateLibrary) -> Result<Self, PatternError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, library })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> PatternError {
        let (line, column) = self.here();
        PatternError::Syntax { line, column, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> PatternError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), PatternError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, wanted: &str) -> Result<String, PatternError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    // ---- predicate declarations ----

    fn declaration(&mut self) -> Result<(), PatternError> {
        let (line, column) = self.here();
        self.bump();
        let name = self.ident("a predicate name")?;
        if is_register_name(&name) {
            return Err(PatternError::Syntax { line, column, message: format!("`{name}` is reserved for registers") });
        }
        self.expect(Tok::LParen, "`(`")?;
        let mut params = vec![self.ident("a parameter name")?];
        while *self.peek() == Tok::Comma {
            self.bump();
            params.push(self.ident("a parameter name")?);
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Colon, "`:`")?;
        let body = self.pred_or(&params)?;
        let pred = Predicate::from_parts(name, params, body).map_err(|e| PatternError::Predicate {
            line,
            column,
            source: e,
        })?;
        self.library.insert(pred).map_err(|e| PatternError::Predicate { line, column, source: e })?;
        Ok(())
    }

    fn pred_or(&mut self, params: &[String]) -> Result<PredExpr, PatternError> {
        let mut lhs = self.pred_and(params)?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = PredExpr::or(lhs, self.pred_and(params)?);
        }
        Ok(lhs)
    }

    fn pred_and(&mut self, params: &[String]) -> Result<PredExpr, PatternError> {
        let mut lhs = self.pred_not(params)?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = PredExpr::and(lhs, self.pred_not(params)?);
        }
        Ok(lhs)
    }

    fn pred_not(&mut self, params: &[String]) -> Result<PredExpr, PatternError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(PredExpr::negate(self.pred_not(params)?))
            }
            Tok::LParen => {
                self.bump();
                let e = self.pred_or(params)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => {
                let lhs = self.operand(params)?;
                let op = match self.peek() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Ne => CmpOp::Ne,
                    Tok::Lt => CmpOp::Lt,
                    Tok::Le => CmpOp::Le,
                    Tok::Gt => CmpOp::Gt,
                    Tok::Ge => CmpOp::Ge,
                    _ => return Err(self.unexpected("a comparison operator")),
                };
                self.bump();
                let rhs = self.operand(params)?;
                Ok(PredExpr::cmp(lhs, op, rhs))
            }
        }
    }

    fn operand(&mut self, params: &[String]) -> Result<Operand, PatternError> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Operand::Lit(Value::Int(i)))
            }
            Tok::Real(r) => {
                self.bump();
                Ok(Operand::Lit(Value::Real(r)))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Operand::Lit(Value::Text(s)))
            }
            Tok::Ident(p) => {
                let Some(param) = params.iter().position(|x| *x == p) else {
                    return Err(self.error(format!("`{p}` is not a parameter of this predicate")));
                };
                self.bump();
                self.expect(Tok::Dot, "`.` and an attribute name")?;
                let attr = match self.bump() {
                    Tok::Ident(a) => a,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("an attribute name"));
                    }
                };
                Ok(Operand::Attr { param, attr })
            }
            _ => Err(self.unexpected("an attribute reference or a literal")),
        }
    }

    // ---- expressions ----

    fn top(&mut self) -> Result<Srem, PatternError> {
        let body = self.alt()?;
        if self.is_keyword("within") {
            self.bump();
            let (line, column) = self.here();
            return match self.bump() {
                Tok::Int(w) if w >= 1 => Ok(Srem::window(body, w as usize)),
                _ => Err(PatternError::Syntax {
                    line,
                    column,
                    message: "window length must be a positive integer".into(),
                }),
            };
        }
        Ok(body)
    }

    fn alt(&mut self) -> Result<Srem, PatternError> {
        let mut lhs = self.seq()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = Srem::or(lhs, self.seq()?);
        }
        Ok(lhs)
    }

    fn seq(&mut self) -> Result<Srem, PatternError> {
        let mut lhs = self.post()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            lhs = Srem::concat(lhs, self.post()?);
        }
        Ok(lhs)
    }

    fn post(&mut self) -> Result<Srem, PatternError> {
        let mut e = self.cond_or()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    e = Srem::star(e);
                }
                Tok::Arrow => {
                    let at = self.here();
                    self.bump();
                    let reg = self.register()?;
                    e = match e {
                        Srem::Cond(c) => Srem::CondWrite(c, reg),
                        _ => {
                            return Err(PatternError::Syntax {
                                line: at.0,
                                column: at.1,
                                message: "`->` applies to a single condition only".into(),
                            })
                        }
                    };
                }
                _ => return Ok(e),
            }
        }
    }

    fn as_condition(&self, e: Srem, at: (usize, usize)) -> Result<Condition, PatternError> {
        match e {
            Srem::Cond(c) => Ok(c),
            _ => Err(PatternError::Syntax {
                line: at.0,
                column: at.1,
                message: "`&`, `|` and `!` combine conditions, not expressions".into(),
            }),
        }
    }

    fn cond_or(&mut self) -> Result<Srem, PatternError> {
        let start = self.here();
        let mut lhs = self.cond_and()?;
        while *self.peek() == Tok::Bar {
            let at = self.here();
            self.bump();
            let a = self.as_condition(lhs, start)?;
            let rhs = self.cond_and()?;
            let b = self.as_condition(rhs, at)?;
            lhs = Srem::Cond(Condition::or(a, b));
        }
        Ok(lhs)
    }

    fn cond_and(&mut self) -> Result<Srem, PatternError> {
        let start = self.here();
        let mut lhs = self.cond_not()?;
        while *self.peek() == Tok::Amp {
            let at = self.here();
            self.bump();
            let a = self.as_condition(lhs, start)?;
            let rhs = self.cond_not()?;
            let b = self.as_condition(rhs, at)?;
            lhs = Srem::Cond(Condition::and(a, b));
        }
        Ok(lhs)
    }

    fn cond_not(&mut self) -> Result<Srem, PatternError> {
        if *self.peek() == Tok::Bang {
            let at = self.here();
            self.bump();
            let inner = self.cond_not()?;
            let c = self.as_condition(inner, at)?;
            return Ok(Srem::Cond(Condition::not(c)));
        }
        self.prim()
    }

    fn prim(&mut self) -> Result<Srem, PatternError> {
        let (line, column) = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.alt()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "EPS" => {
                self.bump();
                Ok(Srem::Epsilon)
            }
            Tok::Ident(s) if s == "NONE" => {
                self.bump();
                Ok(Srem::Empty)
            }
            Tok::Ident(s) if s == "TRUE" => {
                self.bump();
                Ok(Srem::Cond(Condition::True))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && !is_register_name(&s) => {
                self.bump();
                let Some(pred) = self.library.get(&s).cloned() else {
                    return Err(PatternError::UnknownPredicate { name: s, line, column });
                };
                self.expect(Tok::LParen, "`(` after the predicate name")?;
                let mut args = vec![self.arg()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.arg()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Condition::atom(&pred, args).map(Srem::Cond).map_err(|e| PatternError::Predicate {
                    line,
                    column,
                    source: e,
                })
            }
            _ => Err(self.unexpected("a condition, `EPS`, `NONE` or `(`")),
        }
    }

    fn arg(&mut self) -> Result<Arg, PatternError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Arg::Current);
        }
        self.register().map(Arg::Reg)
    }

    fn register(&mut self) -> Result<Register, PatternError> {
        match self.peek() {
            Tok::Ident(s) if is_register_name(s) => {
                let r = Register::new(s);
                self.bump();
                Ok(r)
            }
            _ => Err(self.unexpected("`~` or a register such as `r1`")),
        }
    }

    fn finish(&self) -> Result<(), PatternError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a pattern file: predicate declarations followed by one
/// expression. Every register that is read must be written somewhere in the
/// expression.
pub fn parse_pattern(src: &str) -> Result<Pattern, PatternError> {
    let mut p = Parser::new(src, PredicateLibrary::new())?;
    while p.is_keyword("pred") {
        p.declaration()?;
    }
    let expr = p.top()?;
    p.finish()?;
    let written = expr.written_registers();
    if let Some(r) = expr.read_registers().into_iter().find(|r| !written.contains(r)) {
        return Err(PatternError::UnknownRegister(r.name().to_string()));
    }
    Ok(Pattern { library: p.library, expr })
}

/// Parses a bare expression against an existing library.
pub fn parse_expr(src: &str, library: &PredicateLibrary) -> Result<Srem, PatternError> {
    let mut p = Parser::new(src, library.clone())?;
    let e = p.top()?;
    p.finish()?;
    Ok(e)
}

/// Parses a single condition against an existing library.
pub fn parse_condition(src: &str, library: &PredicateLibrary) -> Result<Condition, PatternError> {
    let mut p = Parser::new(src, library.clone())?;
    let at = p.here();
    let e = p.cond_or()?;
    p.finish()?;
    p.as_condition(e, at)
}

/// Parses predicate declarations only.
pub fn parse_declarations(src: &str) -> Result<PredicateLibrary, PatternError> {
    let mut p = Parser::new(src, PredicateLibrary::new())?;
    while p.is_keyword("pred") {
        p.declaration()?;
    }
    p.finish()?;
    Ok(p.library)
}
