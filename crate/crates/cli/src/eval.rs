//! Statement-by-statement evaluation of a parsed script.
//!
//! A failing statement poisons only the name it declares: later statements
//! that read it report an error, independent ones still run.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use motivic::arc::weil_restrict;
use motivic::battery::{fat_points, small_fat_points, Generator, DEFAULT_SEED};
use motivic::field::format_rational;
use motivic::kring::{f_adjunction_check, pushforward_pullback_check, scissor_defect, tau_adjunction_check};
use motivic::measure::{indexed_mode, limit_measure, BaseRing, DEFAULT_HORIZON, DEFAULT_WINDOW};
use motivic::scheme::count_points;
use motivic::sieve::{continuity_probe, ProbeVerdict};
use motivic::topo::{euler_battery, preservation_check};
use motivic::{
    adjunction_check, AffineScheme, Caps, FatPoint, FatPointRef, Field, FiniteSimplicialSet, KClass, LimitSieve,
    MeasureQuery, MemberRule, Morphism, PointSystem, RelativeSieve, SchemeRef, SieveExpr, SimplicialClass,
    SimplicialSieve, Verdict,
};
use thiserror::Error;

use crate::ast::*;
use crate::report::{Record, Report, Status};

/// Session settings; every field has a command-line flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Used when the script has no `field` declaration.
    pub field: Field,
    pub horizon: usize,
    pub window: usize,
    /// Fat points in the default battery, at most four.
    pub battery_size: usize,
    pub seed: u64,
    pub max_candidates: u64,
    /// Truncation for simplicial declarations without `@`.
    pub skeletal_level: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            field: Field::Prime(2),
            horizon: DEFAULT_HORIZON,
            window: DEFAULT_WINDOW,
            battery_size: 4,
            seed: DEFAULT_SEED,
            max_candidates: Caps::default().max_candidates,
            skeletal_level: 2,
        }
    }
}

impl Config {
    pub fn caps(&self) -> Caps {
        Caps { max_candidates: self.max_candidates, ..Caps::default() }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Core(#[from] motivic::Error),
    #[error("`{name}` is a {found}, expected {expected}")]
    Kind { name: String, found: &'static str, expected: &'static str },
    #[error("`{0}` could not be evaluated earlier")]
    Poisoned(String),
    #[error("{0}")]
    Invalid(String),
}

type EResult<T> = Result<T, EvalError>;

#[derive(Clone, Debug)]
pub enum ClassValue {
    Plain(KClass),
    Simplicial(SimplicialClass),
}

impl fmt::Display for ClassValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassValue::Plain(c) => write!(f, "{c}"),
            ClassValue::Simplicial(c) => write!(f, "{c}"),
        }
    }
}

impl ClassValue {
    fn lift(&self, truncation: usize) -> SimplicialClass {
        match self {
            ClassValue::Plain(c) => SimplicialClass::constant(c, truncation),
            ClassValue::Simplicial(c) => c.clone(),
        }
    }

    fn combine(
        self,
        other: ClassValue,
        plain: impl Fn(&KClass, &KClass) -> motivic::Result<KClass>,
        simp: impl Fn(&SimplicialClass, &SimplicialClass) -> motivic::Result<SimplicialClass>,
    ) -> EResult<ClassValue> {
        Ok(match (&self, &other) {
            (ClassValue::Plain(a), ClassValue::Plain(b)) => ClassValue::Plain(plain(a, b)?),
            (ClassValue::Simplicial(a), _) => ClassValue::Simplicial(simp(a, &other.lift(a.truncation()))?),
            (_, ClassValue::Simplicial(b)) => ClassValue::Simplicial(simp(&self.lift(b.truncation()), b)?),
        })
    }
}

#[derive(Clone, Debug)]
enum Value {
    FatPoint(FatPointRef),
    Chain(PointSystem),
    Scheme(SchemeRef),
    Map(Arc<Morphism>),
    Sieve(SieveExpr),
    Simplicial(SimplicialSieve),
    Relative(RelativeSieve),
    Class(ClassValue),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::FatPoint(_) => "fat point",
            Value::Chain(_) => "chain",
            Value::Scheme(_) => "scheme",
            Value::Map(_) => "map",
            Value::Sieve(_) => "sieve",
            Value::Simplicial(_) => "simplicial sieve",
            Value::Relative(_) => "relative sieve",
            Value::Class(_) => "class",
        }
    }
}

/// What a statement contributes to its record.
#[derive(Default)]
struct Outcome {
    fields: Vec<(String, String)>,
    /// `Some(false)` marks a failed check.
    passed: Option<bool>,
    value: Option<Value>,
}

impl Outcome {
    fn push(&mut self, k: impl Into<String>, v: impl fmt::Display) {
        self.fields.push((k.into(), v.to_string()));
    }

    fn bind(mut self, v: Value) -> Outcome {
        self.value = Some(v);
        self
    }

    fn verdict(&mut self, passed: bool) {
        self.push("verdict", if passed { "pass" } else { "fail" });
        self.passed = Some(passed);
    }
}

pub struct Session {
    config: Config,
    caps: Caps,
    field: Field,
    env: HashMap<String, Option<Value>>,
}

impl Session {
    pub fn new(config: Config) -> Session {
        Session { caps: config.caps(), field: config.field, config, env: HashMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn lookup(&self, name: &str) -> EResult<&Value> {
        match self.env.get(name) {
            Some(Some(v)) => Ok(v),
            Some(None) => Err(EvalError::Poisoned(name.to_string())),
            None => Err(EvalError::Invalid(format!("`{name}` is not declared"))),
        }
    }

    fn wrong(&self, name: &str, expected: &'static str) -> EvalError {
        let found = self.lookup(name).map(Value::kind).unwrap_or("missing value");
        EvalError::Kind { name: name.to_string(), found, expected }
    }

    fn fat_point(&self, name: &str) -> EResult<FatPointRef> {
        match self.lookup(name)? {
            Value::FatPoint(m) => Ok(m.clone()),
            _ => Err(self.wrong(name, "a fat point")),
        }
    }

    fn scheme(&self, name: &str) -> EResult<SchemeRef> {
        match self.lookup(name)? {
            Value::Scheme(x) => Ok(x.clone()),
            _ => Err(self.wrong(name, "a scheme")),
        }
    }

    fn map(&self, name: &str) -> EResult<Arc<Morphism>> {
        match self.lookup(name)? {
            Value::Map(f) => Ok(f.clone()),
            _ => Err(self.wrong(name, "a map")),
        }
    }

    fn chain(&self, name: &str) -> EResult<PointSystem> {
        match self.lookup(name)? {
            Value::Chain(c) => Ok(c.clone()),
            _ => Err(self.wrong(name, "a chain")),
        }
    }

    fn relative(&self, name: &str) -> EResult<RelativeSieve> {
        match self.lookup(name)? {
            Value::Relative(r) => Ok(r.clone()),
            _ => Err(self.wrong(name, "a relative sieve")),
        }
    }

    /// A sieve, reading a scheme as its full sieve.
    fn sieve(&self, name: &str) -> EResult<SieveExpr> {
        match self.lookup(name)? {
            Value::Sieve(s) => Ok(s.clone()),
            Value::Scheme(x) => Ok(SieveExpr::full(x.clone())),
            _ => Err(self.wrong(name, "a sieve or scheme")),
        }
    }

    /// A simplicial sieve, reading plain sieves as constant at `level`.
    fn simplicial(&self, name: &str, level: usize) -> EResult<SimplicialSieve> {
        match self.lookup(name)? {
            Value::Simplicial(s) => Ok(s.clone()),
            Value::Sieve(_) | Value::Scheme(_) => Ok(SimplicialSieve::constant(self.sieve(name)?, level)),
            _ => Err(self.wrong(name, "a simplicial sieve")),
        }
    }

    /// The named fat point, or the default battery.
    fn battery(&self, at: &Option<String>) -> EResult<Vec<FatPointRef>> {
        match at {
            Some(m) => Ok(vec![self.fat_point(m)?]),
            None => Ok(fat_points(self.field).into_iter().take(self.config.battery_size.clamp(1, 4)).collect()),
        }
    }

    /// Evaluates one statement into a report record.
    pub fn eval(&mut self, index: usize, located: &Located) -> Record {
        let mut record = Record::new();
        record.push("stmt", index);
        record.push("line", located.line);
        record.push("kind", located.stmt.kind());
        match &located.stmt {
            Stmt::Check(c) => record.push("check", c.name()),
            s => {
                if let Some(n) = s.declares() {
                    record.push("name", n);
                }
            }
        }
        let result = self.statement(&located.stmt);
        match result {
            Ok(outcome) => {
                for (k, v) in outcome.fields {
                    record.push(k, v);
                }
                if outcome.passed == Some(false) {
                    record.status = Status::Fail;
                }
                if let Some(name) = located.stmt.declares() {
                    self.env.insert(name.to_string(), outcome.value);
                }
            }
            Err(e) => {
                record.push("error", e);
                record.status = Status::Error;
                if let Some(name) = located.stmt.declares() {
                    self.env.insert(name.to_string(), None);
                }
            }
        }
        record
    }

    fn statement(&mut self, stmt: &Stmt) -> EResult<Outcome> {
        let caps = self.caps.clone();
        let field = self.field;
        let mut out = Outcome::default();
        match stmt {
            Stmt::Field(spec) => {
                self.field = match spec {
                    FieldSpec::Rationals => Field::Rationals,
                    FieldSpec::Prime(p) => Field::prime(*p)?,
                };
                out.push("value", self.field);
                Ok(out)
            }
            Stmt::FatPoint { algebra, .. } => {
                let m = if algebra.vars.is_empty() {
                    FatPoint::point(field)
                } else {
                    FatPoint::parse(field, &strs(&algebra.vars), &strs(&algebra.gens))?
                };
                out.push("value", &m);
                out.push("length", m.length());
                Ok(out.bind(Value::FatPoint(Arc::new(m))))
            }
            Stmt::Chain { spec, .. } => {
                let sys = match spec {
                    ChainSpec::Rule(vars) => PointSystem::powers(field, &strs(vars), self.config.horizon)?,
                    ChainSpec::List(algs) => {
                        let members = algs
                            .iter()
                            .map(|a| -> EResult<FatPointRef> {
                                Ok(Arc::new(if a.vars.is_empty() {
                                    FatPoint::point(field)
                                } else {
                                    FatPoint::parse(field, &strs(&a.vars), &strs(&a.gens))?
                                }))
                            })
                            .collect::<EResult<_>>()?;
                        PointSystem::explicit(field, members)?
                    }
                };
                if let motivic::fatpt::ChainVerdict::Failure { index, generator } = sys.chain_check()? {
                    return Err(motivic::Error::ChainFailure { index, generator }.into());
                }
                out.push("value", &sys);
                Ok(out.bind(Value::Chain(sys)))
            }
            Stmt::Scheme { name, algebra } => {
                let x = AffineScheme::parse(name, field, &strs(&algebra.vars), &strs(&algebra.gens))?;
                x.check_caps(&caps)?;
                out.push("value", &x);
                Ok(out.bind(Value::Scheme(Arc::new(x))))
            }
            Stmt::Map { source, target, images, .. } => {
                let f = Morphism::parse(self.scheme(source)?, self.scheme(target)?, &strs(images))?;
                let imgs: Vec<String> = f.images().iter().map(|p| p.to_string()).collect();
                out.push("value", format!("({})", imgs.join(", ")));
                Ok(out.bind(Value::Map(Arc::new(f))))
            }
            Stmt::Sieve { expr, .. } => {
                let amb = self.ambient(expr)?;
                let s = self.sieve_expr(expr, &amb)?;
                out.push("ambient", amb.name());
                out.push("value", &s);
                Ok(out.bind(Value::Sieve(s)))
            }
            Stmt::Simplicial { spec, level, .. } => {
                let n = level.unwrap_or(self.config.skeletal_level);
                let s = match spec {
                    SimplicialSpec::Functor(tag, name) => {
                        let base = self.sieve(name)?;
                        match tag {
                            motivic::FunctorTag::Trivial => SimplicialSieve::constant(base, n),
                            motivic::FunctorTag::Fiber => SimplicialSieve::fiber(base, n)?,
                            motivic::FunctorTag::Symmetric => SimplicialSieve::symmetric(base, n)?,
                        }
                    }
                    SimplicialSpec::Graph(v, e) => SimplicialSieve::graph(self.sieve(v)?, self.sieve(e)?, n)?,
                };
                out.push("shape", s.shape());
                out.push("truncation", s.truncation());
                Ok(out.bind(Value::Simplicial(s)))
            }
            Stmt::Relative { sieve, map, .. } => {
                let r = RelativeSieve::new(self.sieve(sieve)?, (*self.map(map)?).clone())?;
                out.push("base", r.base().name());
                out.push("value", r.sieve());
                Ok(out.bind(Value::Relative(r)))
            }
            Stmt::Class { expr, .. } => {
                let c = self.class_expr(expr)?;
                out.push("value", &c);
                Ok(out.bind(Value::Class(c)))
            }
            Stmt::Count { subject, at, level } => {
                let m = self.fat_point(at)?;
                out.push("subject", subject);
                out.push("at", &m);
                self.count(&mut out, subject, &m, *level)?;
                Ok(out)
            }
            Stmt::Arc { subject, at } => {
                let m = self.fat_point(at)?;
                out.push("subject", subject);
                out.push("at", &m);
                let s = self.sieve(subject)?;
                let arc = weil_restrict(s.ambient(), &m, &caps)?;
                out.push("coordinates", arc.scheme().nvars());
                out.push("relations", arc.scheme().equations().len());
                if matches!(self.lookup(subject)?, Value::Scheme(_)) {
                    out.push("value", &arc);
                } else {
                    out.push("value", s.arc(&arc, &caps)?);
                }
                Ok(out)
            }
            Stmt::Measure(spec) => {
                self.measure(&mut out, spec)?;
                Ok(out)
            }
            Stmt::Check(c) => {
                self.check(&mut out, c)?;
                Ok(out)
            }
        }
    }

    fn ambient(&self, expr: &SieveAst) -> EResult<SchemeRef> {
        let mut found: Option<SchemeRef> = None;
        let mut note = |x: SchemeRef| -> EResult<()> {
            match &found {
                Some(y) if !y.same_presentation(&x) => {
                    Err(EvalError::Invalid(format!("sieve mixes ambients `{}` and `{}`", y.name(), x.name())))
                }
                Some(_) => Ok(()),
                None => {
                    found = Some(x);
                    Ok(())
                }
            }
        };
        collect_ambients(self, expr, &mut note)?;
        found.ok_or_else(|| {
            EvalError::Invalid("cannot infer the ambient: name a scheme, sieve or image in the expression".into())
        })
    }

    fn sieve_expr(&self, expr: &SieveAst, amb: &SchemeRef) -> EResult<SieveExpr> {
        Ok(match expr {
            SieveAst::Union(a, b) => self.sieve_expr(a, amb)?.union(&self.sieve_expr(b, amb)?)?,
            SieveAst::Inter(a, b) => self.sieve_expr(a, amb)?.inter(&self.sieve_expr(b, amb)?)?,
            SieveAst::Closed(eqs) => SieveExpr::parse_closed(amb.clone(), &strs(eqs))?,
            SieveAst::Open(g) => SieveExpr::parse_open(amb.clone(), g)?,
            SieveAst::Image(f) => SieveExpr::image(amb.clone(), self.map(f)?)?,
            SieveAst::Name(n) => self.sieve(n)?,
            SieveAst::Group(a) => self.sieve_expr(a, amb)?,
        })
    }

    fn class_expr(&self, expr: &ClassAst) -> EResult<ClassValue> {
        let caps = &self.caps;
        let f = self.field;
        Ok(match expr {
            ClassAst::Int(n) => ClassValue::Plain(KClass::one(f).scale(n)),
            ClassAst::Lefschetz(z) => ClassValue::Plain(KClass::lefschetz(f, *z)),
            ClassAst::Bracket(n) => match self.lookup(n)? {
                Value::Scheme(x) => ClassValue::Plain(KClass::of_scheme(x, caps)?),
                Value::Sieve(s) => ClassValue::Plain(KClass::of_sieve(s, caps)?),
                Value::Simplicial(s) => ClassValue::Simplicial(SimplicialClass::of_sieve(s, caps)?),
                Value::Relative(r) => ClassValue::Plain(KClass::of_relative(r, caps)?),
                Value::Class(c) => c.clone(),
                _ => return Err(self.wrong(n, "something with a class")),
            },
            ClassAst::Name(n) => match self.lookup(n)? {
                Value::Class(c) => c.clone(),
                _ => return Err(self.wrong(n, "a class")),
            },
            ClassAst::Trunc(n, e) => match self.class_expr(e)? {
                ClassValue::Simplicial(c) => ClassValue::Plain(c.h(*n)?),
                ClassValue::Plain(_) => return Err(EvalError::Invalid("`h` applies to simplicial classes".into())),
            },
            ClassAst::Lift(tag, e, n) => match self.class_expr(e)? {
                ClassValue::Plain(c) => ClassValue::Simplicial(SimplicialClass::g(&c, *tag, *n, caps)?),
                ClassValue::Simplicial(_) => {
                    return Err(EvalError::Invalid("`g` applies to plain classes".into()))
                }
            },
            ClassAst::Neg(e) => match self.class_expr(e)? {
                ClassValue::Plain(c) => ClassValue::Plain(c.neg()),
                ClassValue::Simplicial(c) => ClassValue::Simplicial(c.neg()),
            },
            ClassAst::Add(a, b) => self.class_expr(a)?.combine(self.class_expr(b)?, |x, y| x.add(y), |x, y| x.add(y))?,
            ClassAst::Sub(a, b) => self.class_expr(a)?.combine(self.class_expr(b)?, |x, y| x.sub(y), |x, y| x.sub(y))?,
            ClassAst::Mul(a, b) => {
                self.class_expr(a)?.combine(self.class_expr(b)?, |x, y| x.mul(y, caps), |x, y| x.mul(y, caps))?
            }
            ClassAst::Group(e) => self.class_expr(e)?,
        })
    }

    fn count(&self, out: &mut Outcome, subject: &str, m: &FatPointRef, level: Option<usize>) -> EResult<()> {
        let caps = &self.caps;
        let levels = |top: usize| -> Vec<usize> {
            match level {
                Some(n) => vec![n],
                None => (0..=top).collect(),
            }
        };
        let value: String = match self.lookup(subject)? {
            Value::Scheme(x) => count_points(x, m, caps)?.to_string(),
            Value::Sieve(s) => s.count(m, caps)?.to_string(),
            Value::Relative(r) => r.count(m, caps)?.to_string(),
            Value::Simplicial(s) => {
                let counts: Vec<String> =
                    levels(s.truncation()).into_iter().map(|n| s.count(n, m, caps).map(|c| c.to_string())).collect::<motivic::Result<_>>()?;
                counts.join(",")
            }
            Value::Class(ClassValue::Plain(c)) => format_rational(&c.counting(m, caps)?),
            Value::Class(ClassValue::Simplicial(c)) => {
                let counts: Vec<String> = levels(c.truncation())
                    .into_iter()
                    .map(|n| c.counting(m, n, caps).map(|v| format_rational(&v)))
                    .collect::<motivic::Result<_>>()?;
                counts.join(",")
            }
            _ => return Err(self.wrong(subject, "a scheme, sieve or class")),
        };
        if let Some(n) = level {
            out.push("level", n);
        }
        out.push("value", value);
        Ok(())
    }

    fn measure(&self, out: &mut Outcome, spec: &MeasureSpec) -> EResult<()> {
        let caps = &self.caps;
        let base = self.simplicial(&spec.subject, 0)?;
        let horizon = spec.horizon.unwrap_or(self.config.horizon);
        let window = spec.window.unwrap_or(self.config.window);
        let system = self.chain(&spec.chain)?.with_horizon(horizon);
        let rule = match &spec.through {
            Some(t) => MemberRule::Cylinder(self.simplicial(t, base.truncation())?),
            None => MemberRule::FullArc,
        };
        let family = LimitSieve::new(base, system, motivic::FunctorTag::Trivial, rule, caps)?;
        let mut query = MeasureQuery::new(family).with_q(spec.q.clone())?.with_stability(horizon, window)?;
        if let Some(l) = &spec.lax {
            query = query.with_lax(l.clone());
        }
        if spec.relative {
            query = query.with_base(BaseRing::OverBase);
        }
        out.push("subject", &spec.subject);
        out.push("q", format_rational(&spec.q));
        out.push("horizon", horizon);
        out.push("window", window);
        let show = |c: &SimplicialClass| -> String {
            if c.truncation() == 0 {
                c.levels()[0].to_string()
            } else {
                c.to_string()
            }
        };
        let verdict = if spec.indexed {
            let r = indexed_mode(&query, caps)?;
            out.push("mode", "indexed");
            for (n, (seq, _)) in r.levels.iter().enumerate() {
                let parts: Vec<String> = seq.iter().map(|c| c.to_string()).collect();
                out.push(format!("sequence.{n}"), parts.join(" ; "));
            }
            r.verdict()
        } else {
            let r = limit_measure(&query, caps)?;
            out.push("mode", r.mode);
            if let Some(l) = &r.lax {
                out.push("lax", l);
            }
            let parts: Vec<String> = r.classes().into_iter().map(show).collect();
            out.push("sequence", parts.join(" ; "));
            r.verdict
        };
        match verdict {
            Verdict::Stabilized { value, since } => {
                out.push("verdict", "stabilized");
                out.push("since", since);
                out.push("value", show(&value));
            }
            Verdict::Indeterminate { horizon } => {
                out.push("verdict", "indeterminate");
                out.push("horizon_reached", horizon);
            }
        }
        Ok(())
    }

    fn check(&self, out: &mut Outcome, check: &Check) -> EResult<()> {
        let caps = &self.caps;
        match check {
            Check::Adjunction { scheme, at, with } => {
                let x = self.scheme(scheme)?;
                let m = self.fat_point(at)?;
                let tests = match with {
                    Some(a) => vec![self.fat_point(a)?],
                    None => small_fat_points(self.field),
                };
                let mut ok = true;
                for (i, a) in tests.iter().enumerate() {
                    let v = adjunction_check(&x, &m, a, caps)?;
                    out.push(
                        format!("case.{i}"),
                        format!("a={a} product_side={} arc_side={} bijection={}", v.product_side, v.arc_side, v.bijection),
                    );
                    ok &= v.holds();
                }
                out.verdict(ok);
            }
            Check::Scissor { a, b, at } => {
                let battery = self.battery(at)?;
                match (self.lookup(a)?, self.lookup(b)?) {
                    (Value::Class(x), Value::Class(y)) => self.class_equality(out, x, y, &battery)?,
                    _ => self.scissor(out, &self.sieve(a)?, &self.sieve(b)?, &battery)?,
                }
            }
            Check::Continuity { map, host, target, open, at } => {
                let f = self.map(map)?;
                let u = self.sieve(open)?;
                let battery: Vec<(FatPointRef, SieveExpr)> =
                    self.battery(at)?.into_iter().map(|m| (m, u.clone())).collect();
                match continuity_probe(&f, &self.sieve(host)?, &self.sieve(target)?, &battery, caps)? {
                    ProbeVerdict::Pass { checked } => {
                        out.push("checked", checked);
                        out.verdict(true);
                    }
                    ProbeVerdict::Counterexample { index, detail } => {
                        out.push("counterexample", format!("battery entry {index}: {detail}"));
                        out.verdict(false);
                    }
                }
            }
            Check::Tau { y, x, level, at } => {
                let ys = self.sieve(y)?;
                let xs = self.simplicial(x, self.config.skeletal_level)?;
                let mut ok = true;
                for (i, m) in self.battery(at)?.iter().enumerate() {
                    let r = tau_adjunction_check(&ys, &xs, *level, m, caps)?;
                    out.push(format!("case.{i}"), format!("at={m} left={} right={} bijection={}", r.left, r.right, r.bijection));
                    ok &= r.holds();
                }
                out.verdict(ok);
            }
            Check::PushPull { map, x, y, at } => {
                let f = self.map(map)?;
                let (xr, yr) = (self.relative(x)?, self.relative(y)?);
                let battery = self.battery(at)?;
                let mut ok = true;
                for (i, m) in battery.iter().enumerate() {
                    let r = f_adjunction_check(&f, &xr, &yr, m, caps)?;
                    out.push(format!("adjunction.{i}"), format!("at={m} left={} right={} bijection={}", r.left, r.right, r.bijection));
                    ok &= r.holds();
                }
                let pp = pushforward_pullback_check(&f, &[xr], &[yr], &battery, caps)?;
                out.push("push_matches_sieve", pp.push_matches_sieve);
                out.push("pull_matches_sieve", pp.pull_matches_sieve);
                out.push("push_additive", pp.push_additive);
                out.push("pull_ring_hom", pp.pull_ring_hom);
                out.push("push_counts_agree", pp.push_counts_agree);
                out.push("projection_formula", pp.projection_formula);
                out.push("push_multiplicative", pp.push_multiplicative);
                out.verdict(ok && pp.holds());
            }
            Check::Topo { a, b, at } => {
                let level = self.config.skeletal_level;
                let sa = self.simplicial(a, level)?;
                let battery = self.battery(at)?;
                let mut ok = true;
                match b {
                    None => {
                        for (i, m) in battery.iter().enumerate() {
                            let inv = FiniteSimplicialSet::from_sieve(&sa, m, caps)?.invariants(caps)?;
                            out.push(format!("invariants.{i}"), format!("at={m} {inv}"));
                            ok &= inv.alternating_rank_sum() == inv.euler_characteristic;
                        }
                    }
                    Some(b) => {
                        let sb = self.simplicial(b, sa.truncation())?;
                        for (i, m) in battery.iter().enumerate() {
                            let p = preservation_check(&sa, &sb, m, caps)?;
                            let chi = euler_battery(&sa, &sb, m, caps)?;
                            let parts: Vec<String> = chi.iter().map(|(k, v)| format!("{k}={v}")).collect();
                            out.push(format!("euler.{i}"), format!("at={m} {}", parts.join(" ")));
                            out.push(
                                format!("preservation.{i}"),
                                format!("union={} inter={} product={}", p.union, p.intersection, p.product),
                            );
                            ok &= p.holds()
                                && chi["union"] + chi["inter"] == chi["a"] + chi["b"]
                                && chi["product"] == chi["a"] * chi["b"];
                        }
                    }
                }
                out.verdict(ok);
            }
            Check::Ring { count } => self.ring(out, count.unwrap_or(8))?,
        }
        Ok(())
    }

    fn scissor(&self, out: &mut Outcome, a: &SieveExpr, b: &SieveExpr, battery: &[FatPointRef]) -> EResult<()> {
        let caps = &self.caps;
        let defect = scissor_defect(a, b, caps)?;
        out.push("defect", &defect);
        let mut ok = defect.is_zero();
        if self.field.is_finite() {
            let (u, i) = (a.union(b)?, a.inter(b)?);
            for (k, m) in battery.iter().enumerate() {
                let lhs = u.count(m, caps)? + i.count(m, caps)?;
                let rhs = a.count(m, caps)? + b.count(m, caps)?;
                out.push(format!("counts.{k}"), format!("at={m} {lhs} = {rhs}"));
                if lhs != rhs && ok {
                    out.push("counterexample", format!("at {m}: {lhs} != {rhs}"));
                    ok = false;
                }
            }
        }
        out.verdict(ok);
        Ok(())
    }

    /// Normal-form equality decides a match; a counting disagreement at a
    /// battery point decides a mismatch; otherwise the check is undecided
    /// and does not pass.
    fn class_equality(&self, out: &mut Outcome, x: &ClassValue, y: &ClassValue, battery: &[FatPointRef]) -> EResult<()> {
        let caps = &self.caps;
        let top = match (x, y) {
            (ClassValue::Plain(_), ClassValue::Plain(_)) => None,
            (ClassValue::Simplicial(c), _) | (_, ClassValue::Simplicial(c)) => Some(c.truncation()),
        };
        let (sx, sy) = (x.lift(top.unwrap_or(0)), y.lift(top.unwrap_or(0)));
        let (sx, sy) = match top {
            Some(n) => (sx.truncated(n.min(sx.truncation())), sy.truncated(n.min(sy.truncation()))),
            None => (sx, sy),
        };
        let diff = sx.sub(&sy)?;
        out.push("difference", if top.is_some() { diff.to_string() } else { diff.levels()[0].to_string() });
        if diff.levels().iter().all(KClass::is_zero) {
            out.verdict(true);
            return Ok(());
        }
        if self.field.is_finite() {
            for m in battery {
                for n in 0..=diff.truncation() {
                    let (l, r) = (sx.counting(m, n, caps)?, sy.counting(m, n, caps)?);
                    if l != r {
                        let at = if top.is_some() { format!("at {m} level {n}") } else { format!("at {m}") };
                        out.push("counterexample", format!("{at}: {} != {}", format_rational(&l), format_rational(&r)));
                        out.verdict(false);
                        return Ok(());
                    }
                }
            }
        }
        out.push("verdict", "undecided");
        out.passed = Some(false);
        Ok(())
    }

    fn ring(&self, out: &mut Outcome, count: usize) -> EResult<()> {
        let caps = &self.caps;
        let mut g = Generator::new(self.config.seed, self.field);
        let classes: Vec<KClass> = (0..count).map(|_| g.class(caps)).collect::<motivic::Result<_>>()?;
        let one = KClass::one(self.field);
        let battery = if self.field.is_finite() { self.battery(&None)? } else { Vec::new() };
        let mut failures = Vec::new();
        for (i, w) in classes.windows(3).enumerate() {
            let (a, b, c) = (&w[0], &w[1], &w[2]);
            let laws = [
                ("commutative", a.add(b)? == b.add(a)? && a.mul(b, caps)? == b.mul(a, caps)?),
                ("associative", a.add(b)?.add(c)? == a.add(&b.add(c)?)?
                    && a.mul(b, caps)?.mul(c, caps)? == a.mul(&b.mul(c, caps)?, caps)?),
                ("distributive", a.mul(&b.add(c)?, caps)? == a.mul(b, caps)?.add(&a.mul(c, caps)?)?),
                ("unit", one.mul(a, caps)? == *a && a.sub(a)?.is_zero()),
            ];
            for (law, holds) in laws {
                if !holds {
                    failures.push(format!("{law} at {i}"));
                }
            }
            for m in &battery {
                let (ca, cb) = (a.counting(m, caps)?, b.counting(m, caps)?);
                if a.add(b)?.counting(m, caps)? != &ca + &cb || a.mul(b, caps)?.counting(m, caps)? != &ca * &cb {
                    failures.push(format!("counting at {i}, {m}"));
                }
            }
        }
        out.push("classes", count);
        out.push("seed", self.config.seed);
        if let Some(f) = failures.first() {
            out.push("counterexample", f);
        }
        out.verdict(failures.is_empty());
        Ok(())
    }
}

fn collect_ambients(
    s: &Session,
    expr: &SieveAst,
    note: &mut impl FnMut(SchemeRef) -> EResult<()>,
) -> EResult<()> {
    match expr {
        SieveAst::Union(a, b) | SieveAst::Inter(a, b) => {
            collect_ambients(s, a, note)?;
            collect_ambients(s, b, note)
        }
        SieveAst::Group(a) => collect_ambients(s, a, note),
        SieveAst::Name(n) => note(s.sieve(n)?.ambient().clone()),
        SieveAst::Image(f) => note(s.map(f)?.target().clone()),
        SieveAst::Closed(_) | SieveAst::Open(_) => Ok(()),
    }
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Evaluates every statement in order.
pub fn run(script: &Script, config: &Config) -> Report {
    let mut session = Session::new(config.clone());
    let records = script.statements.iter().enumerate().map(|(i, s)| session.eval(i + 1, s)).collect();
    Report { records, parse_error: false }
}

/// Parses and evaluates; a parse error yields a single diagnostic record.
pub fn run_text(text: &str, config: &Config) -> Report {
    match crate::parser::parse(text) {
        Ok(script) => run(&script, config),
        Err(e) => Report::from_parse_error(&e),
    }
}
