//! Line-oriented recursive-descent parser for the workbench DSL.
//!
//! One statement per line, `#` starts a comment. Polynomial text inside
//! `(...)` is taken verbatim and handed to the core polynomial parser at
//! evaluation time, once the ambient ring is known.

use std::collections::{HashMap, HashSet};

use motivic::poly::is_identifier;
use motivic::{FunctorTag, LaxRule};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::ast::*;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message} (at `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

const RESERVED: &[&str] = &[
    "field", "fatpoint", "chain", "scheme", "map", "sieve", "simplicial", "relative", "class", "count", "arc",
    "measure", "check", "at", "level", "on", "via", "with", "through", "lax", "horizon", "window", "rule", "Spec",
    "k", "L", "Q", "V", "D", "im", "h", "g", "n", "len", "trivial", "fiber", "sym", "graph", "indexed",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Ident,
    Int,
    Sym,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: Kind,
    text: String,
    start: usize,
    end: usize,
    column: usize,
}

fn tokenize(src: &str, line: usize) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    let mut column = 0;
    while let Some(&(start, c)) = it.peek() {
        column += 1;
        let col = column;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let (kind, end) = if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, d)) = it.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    end = i + d.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            (Kind::Ident, end)
        } else if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = it.peek() {
                if d.is_ascii_digit() {
                    end = i + 1;
                    it.next();
                } else {
                    break;
                }
            }
            (Kind::Int, end)
        } else if c == '-' && src[start..].starts_with("->") {
            it.next();
            it.next();
            (Kind::Sym, start + 2)
        } else if "=[](),|&+-*^/@:".contains(c) {
            it.next();
            (Kind::Sym, start + 1)
        } else {
            return Err(ParseError {
                line,
                column: col,
                token: c.to_string(),
                message: "unexpected character".into(),
            });
        };
        column += src[start..end].chars().count() - 1;
        out.push(Tok { kind, text: src[start..end].to_string(), start, end, column: col });
    }
    Ok(out)
}

struct LineParser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
    /// Identifier positions, for pointing diagnostics at references.
    seen: Vec<(String, usize)>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> LineParser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        let (token, column) = match self.toks.get(self.pos) {
            Some(t) => (t.text.clone(), t.column),
            None => ("end of line".to_string(), self.src.trim_end().chars().count() + 1),
        };
        ParseError { line: self.line, column, token, message: message.into() }
    }

    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn peek_at(&self, k: usize) -> Option<&str> {
        self.toks.get(self.pos + k).map(|t| t.text.as_str())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek() == Some(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn word(&mut self) -> PResult<String> {
        match self.toks.get(self.pos) {
            Some(t) if t.kind == Kind::Ident => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.error("expected a name")),
        }
    }

    /// A user name: an identifier that is not a keyword.
    fn name(&mut self) -> PResult<String> {
        let t = self.toks.get(self.pos).cloned();
        let w = self.word()?;
        if RESERVED.contains(&w.as_str()) || !is_identifier(&w) {
            self.pos -= 1;
            return Err(self.error(format!("`{w}` is reserved")));
        }
        if let Some(t) = t {
            self.seen.push((w.clone(), t.column));
        }
        Ok(w)
    }

    fn int(&mut self) -> PResult<u64> {
        match self.toks.get(self.pos) {
            Some(t) if t.kind == Kind::Int => {
                let v = t.text.parse().map_err(|_| self.error("integer out of range"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn usize(&mut self) -> PResult<usize> {
        let v = self.int()?;
        usize::try_from(v).map_err(|_| self.error("integer out of range"))
    }

    /// The verbatim text between an opening `(` and its partner, split at
    /// top-level commas, whitespace collapsed.
    fn raw_group(&mut self, allow_empty: bool) -> PResult<Vec<String>> {
        self.expect("(")?;
        let open = self.pos - 1;
        let mut depth = 1usize;
        let mut close = None;
        for j in self.pos..self.toks.len() {
            match self.toks[j].text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(j);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(close) = close else {
            self.pos = open;
            return Err(self.error("unbalanced parenthesis"));
        };
        let raw = &self.src[self.toks[open].end..self.toks[close].start];
        self.pos = close + 1;
        let mut parts = Vec::new();
        let (mut depth, mut last) = (0i32, 0);
        for (i, c) in raw.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&raw[last..i]);
                    last = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&raw[last..]);
        let parts: Vec<String> = parts.iter().map(|p| p.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
        if parts.len() == 1 && parts[0].is_empty() {
            if allow_empty {
                return Ok(Vec::new());
            }
            self.pos = close;
            return Err(self.error("expected at least one polynomial"));
        }
        if parts.iter().any(|p| p.is_empty()) {
            self.pos = close;
            return Err(self.error("empty polynomial"));
        }
        Ok(parts)
    }

    fn algebra(&mut self) -> PResult<Algebra> {
        if self.word()? != "k" {
            self.pos -= 1;
            return Err(self.error("expected `k`"));
        }
        let mut alg = Algebra::default();
        if !self.eat("[") {
            return Ok(alg);
        }
        loop {
            let v = self.word()?;
            if !is_identifier(&v) || alg.vars.contains(&v) {
                self.pos -= 1;
                return Err(self.error("bad or repeated variable"));
            }
            alg.vars.push(v);
            if self.eat("]") {
                break;
            }
            self.expect(",")?;
        }
        if self.eat("/") {
            alg.gens = self.raw_group(true)?;
        }
        Ok(alg)
    }

    fn chain(&mut self) -> PResult<ChainSpec> {
        if self.peek() == Some("rule") {
            self.pos += 1;
            let mut vars = Vec::new();
            loop {
                vars.push(self.word()?);
                self.expect("^")?;
                if self.word()? != "n" {
                    self.pos -= 1;
                    return Err(self.error("expected `n`"));
                }
                if !self.eat(",") {
                    return Ok(ChainSpec::Rule(vars));
                }
            }
        }
        self.expect("[")?;
        let mut algs = vec![self.algebra()?];
        while self.eat(",") {
            algs.push(self.algebra()?);
        }
        self.expect("]")?;
        Ok(ChainSpec::List(algs))
    }

    fn sieve_expr(&mut self) -> PResult<SieveAst> {
        let mut acc = self.sieve_inter()?;
        while self.eat("|") {
            acc = SieveAst::Union(Box::new(acc), Box::new(self.sieve_inter()?));
        }
        Ok(acc)
    }

    fn sieve_inter(&mut self) -> PResult<SieveAst> {
        let mut acc = self.sieve_atom()?;
        while self.eat("&") {
            acc = SieveAst::Inter(Box::new(acc), Box::new(self.sieve_atom()?));
        }
        Ok(acc)
    }

    fn sieve_atom(&mut self) -> PResult<SieveAst> {
        if self.eat("(") {
            let e = self.sieve_expr()?;
            self.expect(")")?;
            return Ok(SieveAst::Group(Box::new(e)));
        }
        match (self.peek(), self.peek_at(1)) {
            (Some("V"), Some("(")) => {
                self.pos += 1;
                Ok(SieveAst::Closed(self.raw_group(false)?))
            }
            (Some("D"), Some("(")) => {
                self.pos += 1;
                let mut g = self.raw_group(false)?;
                if g.len() != 1 {
                    self.pos -= 1;
                    return Err(self.error("`D` takes exactly one polynomial"));
                }
                Ok(SieveAst::Open(g.remove(0)))
            }
            (Some("im"), Some("(")) => {
                self.pos += 2;
                let n = self.name()?;
                self.expect(")")?;
                Ok(SieveAst::Image(n))
            }
            _ => Ok(SieveAst::Name(self.name()?)),
        }
    }

    fn tag(&mut self) -> PResult<FunctorTag> {
        match self.word()?.as_str() {
            "trivial" => Ok(FunctorTag::Trivial),
            "fiber" => Ok(FunctorTag::Fiber),
            "sym" => Ok(FunctorTag::Symmetric),
            _ => {
                self.pos -= 1;
                Err(self.error("expected `trivial`, `fiber` or `sym`"))
            }
        }
    }

    fn class_expr(&mut self) -> PResult<ClassAst> {
        let mut acc = self.class_term()?;
        loop {
            if self.eat("+") {
                acc = ClassAst::Add(Box::new(acc), Box::new(self.class_term()?));
            } else if self.eat("-") {
                acc = ClassAst::Sub(Box::new(acc), Box::new(self.class_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn class_term(&mut self) -> PResult<ClassAst> {
        let mut acc = self.class_unary()?;
        while self.eat("*") {
            acc = ClassAst::Mul(Box::new(acc), Box::new(self.class_unary()?));
        }
        Ok(acc)
    }

    fn class_unary(&mut self) -> PResult<ClassAst> {
        if self.eat("-") {
            return Ok(ClassAst::Neg(Box::new(self.class_unary()?)));
        }
        self.class_atom()
    }

    fn class_atom(&mut self) -> PResult<ClassAst> {
        if let Some(t) = self.toks.get(self.pos) {
            if t.kind == Kind::Int {
                let v: BigInt = t.text.parse().map_err(|_| self.error("bad integer"))?;
                self.pos += 1;
                return Ok(ClassAst::Int(v));
            }
        }
        if self.eat("(") {
            let e = self.class_expr()?;
            self.expect(")")?;
            return Ok(ClassAst::Group(Box::new(e)));
        }
        if self.eat("[") {
            let n = self.name()?;
            self.expect("]")?;
            return Ok(ClassAst::Bracket(n));
        }
        match (self.peek(), self.peek_at(1)) {
            (Some("L"), _) => {
                self.pos += 1;
                if !self.eat("^") {
                    return Ok(ClassAst::Lefschetz(1));
                }
                let neg = self.eat("-");
                let z = i64::try_from(self.int()?).map_err(|_| self.error("exponent out of range"))?;
                Ok(ClassAst::Lefschetz(if neg { -z } else { z }))
            }
            (Some("h"), Some("(")) => {
                self.pos += 2;
                let n = self.usize()?;
                self.expect(",")?;
                let e = self.class_expr()?;
                self.expect(")")?;
                Ok(ClassAst::Trunc(n, Box::new(e)))
            }
            (Some("g"), Some("(")) => {
                self.pos += 2;
                let tag = self.tag()?;
                self.expect(",")?;
                let e = self.class_expr()?;
                self.expect(",")?;
                let n = self.usize()?;
                self.expect(")")?;
                Ok(ClassAst::Lift(tag, Box::new(e), n))
            }
            _ => Ok(ClassAst::Name(self.name()?)),
        }
    }

    fn rational(&mut self) -> PResult<BigRational> {
        let neg = self.eat("-");
        let num = BigInt::from(self.int()?);
        let den = if self.eat("/") { BigInt::from(self.int()?) } else { BigInt::from(1) };
        if den == BigInt::from(0) {
            self.pos -= 1;
            return Err(self.error("zero denominator"));
        }
        let q = BigRational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    /// `[a, b, ...]`, or a sum of terms `c`, `c*n`, `n`, `c*len`, `len`.
    fn lax_rule(&mut self) -> PResult<LaxRule> {
        if self.eat("[") {
            let mut t = vec![self.int()?];
            while self.eat(",") {
                t.push(self.int()?);
            }
            self.expect("]")?;
            return Ok(LaxRule::Table(t));
        }
        let (mut slope, mut offset, mut len) = (0u64, 0u64, None::<u64>);
        let mut seen_n = false;
        loop {
            let coeff = if self.toks.get(self.pos).is_some_and(|t| t.kind == Kind::Int) {
                let c = self.int()?;
                if !self.eat("*") {
                    offset += c;
                    None
                } else {
                    Some(c)
                }
            } else {
                Some(1)
            };
            if let Some(c) = coeff {
                match self.word()?.as_str() {
                    "n" => {
                        slope += c;
                        seen_n = true;
                    }
                    "len" => len = Some(len.unwrap_or(0) + c),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected `n` or `len`"));
                    }
                }
            }
            if !self.eat("+") {
                break;
            }
        }
        match len {
            Some(factor) if !seen_n && offset == 0 => Ok(LaxRule::Length { factor }),
            Some(_) => Err(self.error("a `len` rule cannot mix with `n` or constants")),
            None => Ok(LaxRule::Affine { slope, offset }),
        }
    }

    fn opt_at(&mut self) -> PResult<Option<String>> {
        if self.eat("at") {
            Ok(Some(self.name()?))
        } else {
            Ok(None)
        }
    }

    fn check(&mut self) -> PResult<Check> {
        let which = self.word()?;
        let c = match which.as_str() {
            "adjunction" => {
                let scheme = self.name()?;
                self.expect("at")?;
                let at = self.name()?;
                let with = if self.eat("with") { Some(self.name()?) } else { None };
                Check::Adjunction { scheme, at, with }
            }
            "scissor" => Check::Scissor { a: self.name()?, b: self.name()?, at: self.opt_at()? },
            "continuity" => Check::Continuity {
                map: self.name()?,
                host: self.name()?,
                target: self.name()?,
                open: self.name()?,
                at: self.opt_at()?,
            },
            "tau" => {
                let y = self.name()?;
                let x = self.name()?;
                self.expect("level")?;
                Check::Tau { y, x, level: self.usize()?, at: self.opt_at()? }
            }
            "pushpull" => Check::PushPull { map: self.name()?, x: self.name()?, y: self.name()?, at: self.opt_at()? },
            "topo" => {
                let a = self.name()?;
                let b = if !self.at_end() && self.peek() != Some("at") { Some(self.name()?) } else { None };
                Check::Topo { a, b, at: self.opt_at()? }
            }
            "ring" => Check::Ring { count: if self.at_end() { None } else { Some(self.usize()?) } },
            _ => {
                self.pos -= 1;
                return Err(self.error(
                    "unknown check; expected adjunction, scissor, continuity, tau, pushpull, topo or ring",
                ));
            }
        };
        Ok(c)
    }

    fn measure(&mut self) -> PResult<MeasureSpec> {
        let subject = self.name()?;
        self.expect("on")?;
        let chain = self.name()?;
        if self.word()? != "Q" {
            self.pos -= 1;
            return Err(self.error("expected `Q=`"));
        }
        self.expect("=")?;
        let q = self.rational()?;
        let mut m = MeasureSpec {
            subject,
            chain,
            q,
            lax: None,
            horizon: None,
            window: None,
            through: None,
            relative: false,
            indexed: false,
        };
        while !self.at_end() {
            let opt = self.word()?;
            let dup = match opt.as_str() {
                "through" => m.through.replace(self.name()?).is_some(),
                "lax" => m.lax.replace(self.lax_rule()?).is_some(),
                "horizon" => m.horizon.replace(self.usize()?).is_some(),
                "window" => m.window.replace(self.usize()?).is_some(),
                "relative" => std::mem::replace(&mut m.relative, true),
                "indexed" => std::mem::replace(&mut m.indexed, true),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("unknown measure option"));
                }
            };
            if dup {
                return Err(self.error(format!("`{opt}` given twice")));
            }
        }
        Ok(m)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let kw = self.word()?;
        let stmt = match kw.as_str() {
            "field" => {
                let w = self.word()?;
                match w.as_str() {
                    "Q" => Stmt::Field(FieldSpec::Rationals),
                    "F" => Stmt::Field(FieldSpec::Prime(self.prime()?)),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected `Q` or `F p`"));
                    }
                }
            }
            "fatpoint" => {
                let name = self.name()?;
                self.expect("=")?;
                Stmt::FatPoint { name, algebra: self.algebra()? }
            }
            "chain" => {
                let name = self.name()?;
                self.expect("=")?;
                Stmt::Chain { name, spec: self.chain()? }
            }
            "scheme" => {
                let name = self.name()?;
                self.expect("=")?;
                if self.word()? != "Spec" {
                    self.pos -= 1;
                    return Err(self.error("expected `Spec`"));
                }
                Stmt::Scheme { name, algebra: self.algebra()? }
            }
            "map" => {
                let name = self.name()?;
                self.expect(":")?;
                let source = self.name()?;
                self.expect("->")?;
                let target = self.name()?;
                self.expect("=")?;
                Stmt::Map { name, source, target, images: self.raw_group(true)? }
            }
            "sieve" => {
                let name = self.name()?;
                self.expect("=")?;
                Stmt::Sieve { name, expr: self.sieve_expr()? }
            }
            "simplicial" => {
                let name = self.name()?;
                self.expect("=")?;
                let spec = if self.peek() == Some("graph") {
                    self.pos += 1;
                    self.expect("(")?;
                    let v = self.name()?;
                    self.expect(",")?;
                    let e = self.name()?;
                    self.expect(")")?;
                    SimplicialSpec::Graph(v, e)
                } else {
                    let tag = self.tag()?;
                    self.expect("(")?;
                    let s = self.name()?;
                    self.expect(")")?;
                    SimplicialSpec::Functor(tag, s)
                };
                let level = if self.eat("@") { Some(self.usize()?) } else { None };
                Stmt::Simplicial { name, spec, level }
            }
            "relative" => {
                let name = self.name()?;
                self.expect("=")?;
                let sieve = self.name()?;
                self.expect("via")?;
                Stmt::Relative { name, sieve, map: self.name()? }
            }
            "class" => {
                let name = self.name()?;
                self.expect("=")?;
                Stmt::Class { name, expr: self.class_expr()? }
            }
            "count" => {
                let subject = self.name()?;
                self.expect("at")?;
                let at = self.name()?;
                let level = if self.eat("level") { Some(self.usize()?) } else { None };
                Stmt::Count { subject, at, level }
            }
            "arc" => {
                let subject = self.name()?;
                self.expect("at")?;
                Stmt::Arc { subject, at: self.name()? }
            }
            "measure" => Stmt::Measure(self.measure()?),
            "check" => Stmt::Check(self.check()?),
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a declaration or query"));
            }
        };
        if !self.at_end() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(stmt)
    }

    fn prime(&mut self) -> PResult<u32> {
        let p = self.int()?;
        u32::try_from(p)
            .ok()
            .filter(|&p| motivic::field::is_prime(p) && p < motivic::field::MAX_CHARACTERISTIC)
            .ok_or_else(|| {
                self.pos -= 1;
                self.error("characteristic must be a prime below 65536")
            })
    }
}

/// Parses a script and enforces its static rules: single assignment,
/// declaration before use, and one field declaration ahead of everything
/// else.
pub fn parse(text: &str) -> Result<Script, ParseError> {
    let mut script = Script::default();
    let mut declared: HashMap<String, usize> = HashMap::new();
    let mut field_seen = false;
    for (i, src) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokenize(src, line)?;
        if toks.is_empty() {
            continue;
        }
        let column = toks[0].column;
        let mut p = LineParser { src, toks, pos: 0, line, seen: Vec::new() };
        let stmt = p.statement()?;
        let at = |name: &str| -> usize {
            p.seen.iter().find(|(n, _)| n == name).map_or(column, |(_, c)| *c)
        };
        let fail = |column: usize, token: &str, message: String| ParseError {
            line,
            column,
            token: token.to_string(),
            message,
        };
        if let Stmt::Field(_) = stmt {
            if field_seen {
                return Err(fail(column, "field", "only one field declaration is allowed".into()));
            }
            if !script.statements.is_empty() {
                return Err(fail(column, "field", "the field must be declared before any other statement".into()));
            }
            field_seen = true;
        }
        let mut checked = HashSet::new();
        for r in stmt.references() {
            if checked.insert(r.clone()) && !declared.contains_key(&r) {
                return Err(fail(at(&r), &r, format!("`{r}` is used before it is declared")));
            }
        }
        if let Some(name) = stmt.declares() {
            if let Some(prev) = declared.get(name) {
                return Err(fail(at(name), name, format!("`{name}` is already declared on line {prev}")));
            }
            declared.insert(name.to_string(), line);
        }
        script.statements.push(Located { line, column, stmt });
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(text: &str) {
        let a = parse(text).unwrap();
        let printed = a.to_string();
        let b = parse(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(a.stmts(), b.stmts(), "{printed}");
        assert_eq!(printed, b.to_string());
    }

    #[test]
    fn declarations_parse() {
        let s = parse(
            "field F 3\n\
             fatpoint m = k[t]/(t^2)\n\
             chain c = rule t^n\n\
             chain d = [k, k[t]/(t^2)]\n\
             scheme X = Spec k[x, y]/(x*y - 1)\n\
             sieve U = X & (V(x - 1) | D(y))\n\
             class a = [U] - 2 * L^-2",
        )
        .unwrap();
        assert_eq!(s.statements.len(), 7);
        let Stmt::Sieve { expr, .. } = &s.statements[5].stmt else { panic!() };
        assert!(matches!(expr, SieveAst::Inter(_, _)));
        let Stmt::Class { expr, .. } = &s.statements[6].stmt else { panic!() };
        assert_eq!(expr.to_string(), "[U] - 2 * L^-2");
    }

    #[test]
    fn roundtrips() {
        roundtrip("field Q\nscheme X = Spec k[x]\nsieve s = X & V( x^2 ,  x )  # comment\n");
        roundtrip("scheme X = Spec k[x]\nclass c = -(L + [X]) * L^0 - -3 + h(0, g(fiber, [X], 2))");
        roundtrip("scheme X = Spec k[x]\nchain c = rule t^n\nmeasure X on c Q=3/2 lax 2*n+1 window 4 horizon 9");
        roundtrip("scheme X = Spec k[x]\nchain c = rule t^n\nmeasure X on c Q=1 lax [0, 1, 5] relative indexed");
        roundtrip("scheme X = Spec k\nmap f : X -> X = ()\nsieve s = im(f) | X\nrelative r = s via f");
        roundtrip("scheme X = Spec k[x]\nsimplicial S = fiber(X) @ 2\nsimplicial G = graph(X, X)\ncheck topo S G");
    }

    #[test]
    fn lax_rules() {
        let rule = |t: &str| {
            let s = parse(&format!("scheme X = Spec k\nchain c = rule t^n\nmeasure X on c Q=0 lax {t}")).unwrap();
            let Stmt::Measure(m) = &s.statements[2].stmt else { panic!() };
            m.lax.clone().unwrap()
        };
        assert_eq!(rule("2*n"), LaxRule::Affine { slope: 2, offset: 0 });
        assert_eq!(rule("n + 3"), LaxRule::Affine { slope: 1, offset: 3 });
        assert_eq!(rule("0"), LaxRule::zero());
        assert_eq!(rule("len"), LaxRule::Length { factor: 1 });
        assert_eq!(rule("[1,2]"), LaxRule::Table(vec![1, 2]));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse("field F 2\nscheme X = Spec k[x]\ncount Y at m").unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (3, 7, "Y"));
        let e = parse("scheme X = Spec k[x] $").unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (1, 22, "$"));
        let e = parse("scheme X = Spec k\nscheme X = Spec k").unwrap_err();
        assert_eq!((e.line, e.token.as_str()), (2, "X"));
        assert!(parse("field F 4").is_err());
        assert!(parse("scheme X = Spec k\nfield F 2").is_err());
        assert!(parse("field F 2\nfield F 3").is_err());
        assert!(parse("sieve s = V(x").is_err());
        let e = parse("fatpoint m = k[t]/(t^2) extra").unwrap_err();
        assert_eq!(e.token, "extra");
    }

    #[test]
    fn empty_script() {
        let s = parse("\n  # nothing\n\n").unwrap();
        assert!(s.is_empty());
        assert_eq!(s.to_string(), "");
    }
}
