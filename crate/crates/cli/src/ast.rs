//! Script syntax tree and its canonical printer.
//!
//! Printing is the inverse of parsing up to whitespace: polynomial text is
//! kept verbatim with runs of blanks collapsed, and explicit parentheses
//! survive as [`SieveAst::Group`] / [`ClassAst::Group`] nodes.

use std::fmt;

use motivic::field::format_rational;
use motivic::{FunctorTag, LaxRule};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Script {
    pub statements: Vec<Located>,
}

impl Script {
    /// The statements without their source positions.
    pub fn stmts(&self) -> Vec<&Stmt> {
        self.statements.iter().map(|s| &s.stmt).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.stmt)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Located {
    pub line: usize,
    pub column: usize,
    pub stmt: Stmt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "F {p}"),
        }
    }
}

/// `k`, `k[x, y]` or `k[x, y]/(g1, g2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Algebra {
    pub vars: Vec<String>,
    pub gens: Vec<String>,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("k")?;
        if !self.vars.is_empty() {
            write!(f, "[{}]", self.vars.join(", "))?;
            if !self.gens.is_empty() {
                write!(f, "/({})", self.gens.join(", "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainSpec {
    /// `rule t^n` or `rule s^n, t^n`.
    Rule(Vec<String>),
    List(Vec<Algebra>),
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainSpec::Rule(vars) => {
                let parts: Vec<String> = vars.iter().map(|v| format!("{v}^n")).collect();
                write!(f, "rule {}", parts.join(", "))
            }
            ChainSpec::List(algs) => {
                let parts: Vec<String> = algs.iter().map(|a| a.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SieveAst {
    Union(Box<SieveAst>, Box<SieveAst>),
    Inter(Box<SieveAst>, Box<SieveAst>),
    Closed(Vec<String>),
    Open(String),
    Image(String),
    /// A scheme (its full sieve) or an earlier sieve.
    Name(String),
    Group(Box<SieveAst>),
}

impl SieveAst {
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            SieveAst::Union(a, b) | SieveAst::Inter(a, b) => {
                a.names(out);
                b.names(out);
            }
            SieveAst::Image(n) | SieveAst::Name(n) => out.push(n.clone()),
            SieveAst::Group(a) => a.names(out),
            SieveAst::Closed(_) | SieveAst::Open(_) => {}
        }
    }
}

impl fmt::Display for SieveAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SieveAst::Union(a, b) => write!(f, "{a} | {b}"),
            SieveAst::Inter(a, b) => write!(f, "{a} & {b}"),
            SieveAst::Closed(eqs) => write!(f, "V({})", eqs.join(", ")),
            SieveAst::Open(g) => write!(f, "D({g})"),
            SieveAst::Image(n) => write!(f, "im({n})"),
            SieveAst::Name(n) => f.write_str(n),
            SieveAst::Group(a) => write!(f, "({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicialSpec {
    Functor(FunctorTag, String),
    /// Reflexive graph with the given vertex and edge sieves.
    Graph(String, String),
}

impl fmt::Display for SimplicialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplicialSpec::Functor(tag, s) => write!(f, "{tag}({s})"),
            SimplicialSpec::Graph(v, e) => write!(f, "graph({v}, {e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassAst {
    Int(BigInt),
    Lefschetz(i64),
    Bracket(String),
    Name(String),
    /// `h(n, c)`: the level-`n` truncation of a simplicial class.
    Trunc(usize, Box<ClassAst>),
    /// `g(tag, c, N)`: a plain class pushed to the simplicial ring.
    Lift(FunctorTag, Box<ClassAst>, usize),
    Neg(Box<ClassAst>),
    Add(Box<ClassAst>, Box<ClassAst>),
    Sub(Box<ClassAst>, Box<ClassAst>),
    Mul(Box<ClassAst>, Box<ClassAst>),
    Group(Box<ClassAst>),
}

impl ClassAst {
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            ClassAst::Int(_) | ClassAst::Lefschetz(_) => {}
            ClassAst::Bracket(n) | ClassAst::Name(n) => out.push(n.clone()),
            ClassAst::Trunc(_, a) | ClassAst::Lift(_, a, _) | ClassAst::Neg(a) | ClassAst::Group(a) => a.names(out),
            ClassAst::Add(a, b) | ClassAst::Sub(a, b) | ClassAst::Mul(a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

impl fmt::Display for ClassAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassAst::Int(n) => write!(f, "{n}"),
            ClassAst::Lefschetz(1) => f.write_str("L"),
            ClassAst::Lefschetz(z) => write!(f, "L^{z}"),
            ClassAst::Bracket(n) => write!(f, "[{n}]"),
            ClassAst::Name(n) => f.write_str(n),
            ClassAst::Trunc(n, a) => write!(f, "h({n}, {a})"),
            ClassAst::Lift(tag, a, n) => write!(f, "g({tag}, {a}, {n})"),
            ClassAst::Neg(a) => write!(f, "-{a}"),
            ClassAst::Add(a, b) => write!(f, "{a} + {b}"),
            ClassAst::Sub(a, b) => write!(f, "{a} - {b}"),
            ClassAst::Mul(a, b) => write!(f, "{a} * {b}"),
            ClassAst::Group(a) => write!(f, "({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    pub subject: String,
    pub chain: String,
    pub q: BigRational,
    pub lax: Option<LaxRule>,
    pub horizon: Option<usize>,
    pub window: Option<usize>,
    /// Cylinder over the named sieve instead of the full arc space.
    pub through: Option<String>,
    /// Classes taken over the level schemes rather than over `k`.
    pub relative: bool,
    /// Each level run as its own sequence.
    pub indexed: bool,
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "measure {} on {} Q={}", self.subject, self.chain, format_rational(&self.q))?;
        if let Some(t) = &self.through {
            write!(f, " through {t}")?;
        }
        if let Some(l) = &self.lax {
            write!(f, " lax {l}")?;
        }
        if let Some(h) = self.horizon {
            write!(f, " horizon {h}")?;
        }
        if let Some(w) = self.window {
            write!(f, " window {w}")?;
        }
        if self.relative {
            f.write_str(" relative")?;
        }
        if self.indexed {
            f.write_str(" indexed")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    /// `check adjunction X at m [with a]`
    Adjunction { scheme: String, at: String, with: Option<String> },
    /// `check scissor a b [at m]`: inclusion–exclusion for two sieves, or
    /// equality of two classes.
    Scissor { a: String, b: String, at: Option<String> },
    /// `check continuity f s t u [at m]`
    Continuity { map: String, host: String, target: String, open: String, at: Option<String> },
    /// `check tau Y X level n [at m]`
    Tau { y: String, x: String, level: usize, at: Option<String> },
    /// `check pushpull f x y [at m]`
    PushPull { map: String, x: String, y: String, at: Option<String> },
    /// `check topo a [b] [at m]`
    Topo { a: String, b: Option<String>, at: Option<String> },
    /// `check ring [n]`: seeded random classes against the ring laws.
    Ring { count: Option<usize> },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Adjunction { .. } => "adjunction",
            Check::Scissor { .. } => "scissor",
            Check::Continuity { .. } => "continuity",
            Check::Tau { .. } => "tau",
            Check::PushPull { .. } => "pushpull",
            Check::Topo { .. } => "topo",
            Check::Ring { .. } => "ring",
        }
    }

    fn at(&self) -> Option<&String> {
        match self {
            Check::Scissor { at, .. }
            | Check::Continuity { at, .. }
            | Check::Tau { at, .. }
            | Check::PushPull { at, .. }
            | Check::Topo { at, .. } => at.as_ref(),
            Check::Adjunction { .. } | Check::Ring { .. } => None,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.name())?;
        match self {
            Check::Adjunction { scheme, at, with } => {
                write!(f, " {scheme} at {at}")?;
                if let Some(a) = with {
                    write!(f, " with {a}")?;
                }
            }
            Check::Scissor { a, b, .. } => write!(f, " {a} {b}")?,
            Check::Continuity { map, host, target, open, .. } => write!(f, " {map} {host} {target} {open}")?,
            Check::Tau { y, x, level, .. } => write!(f, " {y} {x} level {level}")?,
            Check::PushPull { map, x, y, .. } => write!(f, " {map} {x} {y}")?,
            Check::Topo { a, b, .. } => {
                write!(f, " {a}")?;
                if let Some(b) = b {
                    write!(f, " {b}")?;
                }
            }
            Check::Ring { count } => {
                if let Some(n) = count {
                    write!(f, " {n}")?;
                }
            }
        }
        if let Some(m) = self.at() {
            write!(f, " at {m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Field(FieldSpec),
    FatPoint { name: String, algebra: Algebra },
    Chain { name: String, spec: ChainSpec },
    Scheme { name: String, algebra: Algebra },
    Map { name: String, source: String, target: String, images: Vec<String> },
    Sieve { name: String, expr: SieveAst },
    Simplicial { name: String, spec: SimplicialSpec, level: Option<usize> },
    Relative { name: String, sieve: String, map: String },
    Class { name: String, expr: ClassAst },
    Count { subject: String, at: String, level: Option<usize> },
    Arc { subject: String, at: String },
    Measure(MeasureSpec),
    Check(Check),
}

impl Stmt {
    pub fn kind(&self) -> &'static str {
        match self {
            Stmt::Field(_) => "field",
            Stmt::FatPoint { .. } => "fatpoint",
            Stmt::Chain { .. } => "chain",
            Stmt::Scheme { .. } => "scheme",
            Stmt::Map { .. } => "map",
            Stmt::Sieve { .. } => "sieve",
            Stmt::Simplicial { .. } => "simplicial",
            Stmt::Relative { .. } => "relative",
            Stmt::Class { .. } => "class",
            Stmt::Count { .. } => "count",
            Stmt::Arc { .. } => "arc",
            Stmt::Measure(_) => "measure",
            Stmt::Check(_) => "check",
        }
    }

    /// The name a declaration binds.
    pub fn declares(&self) -> Option<&str> {
        match self {
            Stmt::FatPoint { name, .. }
            | Stmt::Chain { name, .. }
            | Stmt::Scheme { name, .. }
            | Stmt::Map { name, .. }
            | Stmt::Sieve { name, .. }
            | Stmt::Simplicial { name, .. }
            | Stmt::Relative { name, .. }
            | Stmt::Class { name, .. } => Some(name),
            _ => None,
        }
    }

    /// Every name the statement reads, in source order.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Stmt::Field(_) | Stmt::FatPoint { .. } | Stmt::Chain { .. } | Stmt::Scheme { .. } => {}
            Stmt::Map { source, target, .. } => out.extend([source.clone(), target.clone()]),
            Stmt::Sieve { expr, .. } => expr.names(&mut out),
            Stmt::Simplicial { spec, .. } => match spec {
                SimplicialSpec::Functor(_, s) => out.push(s.clone()),
                SimplicialSpec::Graph(v, e) => out.extend([v.clone(), e.clone()]),
            },
            Stmt::Relative { sieve, map, .. } => out.extend([sieve.clone(), map.clone()]),
            Stmt::Class { expr, .. } => expr.names(&mut out),
            Stmt::Count { subject, at, .. } | Stmt::Arc { subject, at } => out.extend([subject.clone(), at.clone()]),
            Stmt::Measure(m) => {
                out.extend([m.subject.clone(), m.chain.clone()]);
                out.extend(m.through.clone());
            }
            Stmt::Check(c) => {
                match c {
                    Check::Adjunction { scheme, at, with } => {
                        out.extend([scheme.clone(), at.clone()]);
                        out.extend(with.clone());
                    }
                    Check::Scissor { a, b, .. } => out.extend([a.clone(), b.clone()]),
                    Check::Continuity { map, host, target, open, .. } => {
                        out.extend([map.clone(), host.clone(), target.clone(), open.clone()])
                    }
                    Check::Tau { y, x, .. } => out.extend([y.clone(), x.clone()]),
                    Check::PushPull { map, x, y, .. } => out.extend([map.clone(), x.clone(), y.clone()]),
                    Check::Topo { a, b, .. } => {
                        out.push(a.clone());
                        out.extend(b.clone());
                    }
                    Check::Ring { .. } => {}
                }
                out.extend(c.at().cloned());
            }
        }
        out
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Field(spec) => write!(f, "field {spec}"),
            Stmt::FatPoint { name, algebra } => write!(f, "fatpoint {name} = {algebra}"),
            Stmt::Chain { name, spec } => write!(f, "chain {name} = {spec}"),
            Stmt::Scheme { name, algebra } => write!(f, "scheme {name} = Spec {algebra}"),
            Stmt::Map { name, source, target, images } => {
                write!(f, "map {name} : {source} -> {target} = ({})", images.join(", "))
            }
            Stmt::Sieve { name, expr } => write!(f, "sieve {name} = {expr}"),
            Stmt::Simplicial { name, spec, level } => {
                write!(f, "simplicial {name} = {spec}")?;
                if let Some(n) = level {
                    write!(f, " @ {n}")?;
                }
                Ok(())
            }
            Stmt::Relative { name, sieve, map } => write!(f, "relative {name} = {sieve} via {map}"),
            Stmt::Class { name, expr } => write!(f, "class {name} = {expr}"),
            Stmt::Count { subject, at, level } => {
                write!(f, "count {subject} at {at}")?;
                if let Some(n) = level {
                    write!(f, " level {n}")?;
                }
                Ok(())
            }
            Stmt::Arc { subject, at } => write!(f, "arc {subject} at {at}"),
            Stmt::Measure(m) => write!(f, "{m}"),
            Stmt::Check(c) => write!(f, "{c}"),
        }
    }
}
