//! Motivic measures: the class of an arc member at one fat point, and limits
//! of corrected member classes along a point system.
//!
//! A limit is only ever evaluated on an eventually constant sequence. The
//! sequence `s_m = [X_m] · L^{-⌈Q·dim ∇_m X⌉ - l(m)}` is materialized up to the
//! horizon and declared stabilized when its final window has one normal form.
//! Finite explicit systems have a greatest member, so their ultralimit is the
//! value there and the window shrinks to fit.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arc::{truncation_map, weil_restrict};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPoint, FatPointRef, PointSystemKind, SimplicialFatPoint};
use crate::kring::{KClass, SimplicialClass};
use crate::scheme::SchemeRef;
use crate::sieve::{LimitSieve, RelativeSieve, SieveExpr, SimplicialSieve};

pub const DEFAULT_HORIZON: usize = 8;
pub const DEFAULT_WINDOW: usize = 3;

/// The extra exponent `l(m_n)` of a lax measure, as a function of the
/// 1-based position `n` in the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LaxRule {
    /// `l(m_n) = slope · n + offset`.
    Affine { slope: u64, offset: u64 },
    /// `l(m_n) = factor · length(m_n)`.
    Length { factor: u64 },
    /// `l(m_n)` read from a table; positions past its end reuse the last entry.
    Table(Vec<u64>),
}

impl LaxRule {
    pub fn zero() -> LaxRule {
        LaxRule::Affine { slope: 0, offset: 0 }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LaxRule::Affine { slope, offset } => *slope == 0 && *offset == 0,
            LaxRule::Length { factor } => *factor == 0,
            LaxRule::Table(t) => t.iter().all(|&v| v == 0),
        }
    }

    pub fn value(&self, n: usize, m: &FatPoint) -> u64 {
        match self {
            LaxRule::Affine { slope, offset } => slope * n as u64 + offset,
            LaxRule::Length { factor } => factor * m.length() as u64,
            LaxRule::Table(t) => t.get(n - 1).or(t.last()).copied().unwrap_or(0),
        }
    }
}

impl fmt::Display for LaxRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaxRule::Affine { slope, offset } => write!(f, "{slope}*n+{offset}"),
            LaxRule::Length { factor } => write!(f, "{factor}*len"),
            LaxRule::Table(t) => {
                let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Which ring the sequence lives in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum BaseRing {
    #[default]
    Absolute,
    /// Each member is taken over the level scheme `X_n` through the
    /// truncation of arcs to their residue.
    OverBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMode {
    Finite,
    Limit,
    Lax,
    Relative,
    Indexed,
}

impl fmt::Display for MeasureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureMode::Finite => "finite",
            MeasureMode::Limit => "limit",
            MeasureMode::Lax => "lax",
            MeasureMode::Relative => "relative",
            MeasureMode::Indexed => "indexed",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct MeasureQuery {
    subject: LimitSieve,
    q: BigRational,
    lax: Option<LaxRule>,
    base: BaseRing,
    horizon: usize,
    window: usize,
}

impl MeasureQuery {
    pub fn new(subject: LimitSieve) -> MeasureQuery {
        MeasureQuery {
            subject,
            q: BigRational::zero(),
            lax: None,
            base: BaseRing::Absolute,
            horizon: DEFAULT_HORIZON,
            window: DEFAULT_WINDOW,
        }
    }

    pub fn with_q(mut self, q: BigRational) -> Result<MeasureQuery> {
        if q.is_negative() {
            return Err(Error::Invalid(format!("Q must be nonnegative, got {q}")));
        }
        self.q = q;
        Ok(self)
    }

    pub fn with_lax(mut self, rule: LaxRule) -> MeasureQuery {
        self.lax = Some(rule);
        self
    }

    pub fn with_base(mut self, base: BaseRing) -> MeasureQuery {
        self.base = base;
        self
    }

    pub fn with_stability(mut self, horizon: usize, window: usize) -> Result<MeasureQuery> {
        if window < 2 || horizon < window {
            return Err(Error::Invalid(format!("need horizon ≥ window ≥ 2, got horizon {horizon}, window {window}")));
        }
        self.horizon = horizon;
        self.window = window;
        Ok(self)
    }

    pub fn subject(&self) -> &LimitSieve {
        &self.subject
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn lax(&self) -> Option<&LaxRule> {
        self.lax.as_ref()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Constant from position `since` (1-based) to the end of the sequence.
    Stabilized { value: SimplicialClass, since: usize },
    Indeterminate { horizon: usize },
}

impl Verdict {
    pub fn value(&self) -> Option<&SimplicialClass> {
        match self {
            Verdict::Stabilized { value, .. } => Some(value),
            Verdict::Indeterminate { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub mode: MeasureMode,
    pub sequence: Vec<(FatPointRef, SimplicialClass)>,
    pub verdict: Verdict,
    pub lax: Option<LaxRule>,
}

impl PartialEq for MeasureReport {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.verdict == other.verdict
            && self.lax == other.lax
            && self.classes() == other.classes()
            && self.sequence.iter().zip(&other.sequence).all(|(a, b)| a.0.to_string() == b.0.to_string())
    }
}

impl MeasureReport {
    pub fn classes(&self) -> Vec<&SimplicialClass> {
        self.sequence.iter().map(|(_, c)| c).collect()
    }

    pub fn value(&self) -> Option<&SimplicialClass> {
        self.verdict.value()
    }

    /// The stabilized level-0 value, which is the whole value for
    /// level-constant subjects.
    pub fn value0(&self) -> Option<KClass> {
        self.value().map(|v| v.levels()[0].clone())
    }
}

/// `⌈Q·d⌉`, computed exactly.
pub fn ceil_rational(q: &BigRational, d: usize) -> BigInt {
    crate::field::ceil_rational(&(q * BigRational::from_integer(BigInt::from(d))))
}

/// `μ_{m,{m},0}(s) = [arc_m s]`.
pub fn finite_measure(s: &SieveExpr, m: &FatPointRef, caps: &Caps) -> Result<KClass> {
    let arc = weil_restrict(s.ambient(), m, caps)?;
    KClass::of_sieve(&s.arc(&arc, caps)?, caps)
}

/// `[arc_m X] · L^{-⌈Q·dim arc_m X⌉}`.
pub fn corrected_arc_class(x: &SchemeRef, m: &FatPointRef, q: &BigRational, caps: &Caps) -> Result<KClass> {
    let arc = weil_restrict(x, m, caps)?;
    let d = dimension(arc.scheme(), caps)?;
    Ok(KClass::of_scheme(arc.scheme(), caps)?.shift(-to_i64(&ceil_rational(q, d))?))
}

/// `∫ s d_m X = μ_{Spec k,{Spec k},0}(s) · μ_{m,{m},1}(X)`.
pub fn integral_form(s: &SieveExpr, x: &SchemeRef, m: &FatPointRef, caps: &Caps) -> Result<KClass> {
    let pt: FatPointRef = Arc::new(FatPoint::point(s.ambient().field()));
    let left = finite_measure(s, &pt, caps)?;
    let right = corrected_arc_class(x, m, &BigRational::from_integer(1.into()), caps)?;
    left.mul(&right, caps)
}

fn dimension(x: &SchemeRef, caps: &Caps) -> Result<usize> {
    x.ideal().try_basis(caps)?;
    let k = x.ideal().krull_dimension();
    Ok(if k.empty { 0 } else { k.dim })
}

fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::CapExceeded(format!("Lefschetz exponent {v} out of range")))
}

fn materialize(q: &MeasureQuery, caps: &Caps) -> Result<LimitSieve> {
    let system = q.subject.system();
    match system.kind() {
        PointSystemKind::Parametric(_) if system.horizon() != q.horizon => q.subject.with_horizon(q.horizon, caps),
        _ => Ok(q.subject.clone()),
    }
}

/// The corrected class of one member, levelwise.
fn term(
    lim: &LimitSieve,
    member: &SimplicialSieve,
    index: usize,
    m: &FatPointRef,
    query: &MeasureQuery,
    caps: &Caps,
) -> Result<SimplicialClass> {
    let top = member.truncation();
    let lax = query.lax.as_ref().map_or(0, |r| r.value(index + 1, m));
    let sfp = SimplicialFatPoint::new(lim.tag(), m.clone(), top);
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let sieve = member.level(n)?;
        let d = dimension(sieve.ambient(), caps)?;
        let e = to_i64(&ceil_rational(&query.q, d))? + lax as i64;
        let class = match query.base {
            BaseRing::Absolute => KClass::of_sieve(sieve, caps)?,
            BaseRing::OverBase => {
                let x = lim.base().ambient().level(n);
                let fat = sfp.level(n)?;
                let residue: FatPointRef = Arc::new(FatPoint::point(fat.field()));
                let pi = truncation_map(x, &fat, &residue, caps)?;
                KClass::of_relative(&RelativeSieve::new(sieve.clone(), pi)?, caps)?
            }
        };
        levels.push(class.shift(-e));
    }
    SimplicialClass::from_levels(levels)
}

fn verdict<T: Clone + PartialEq>(
    seq: &[T],
    window: usize,
    explicit: bool,
    wrap: impl Fn(&T) -> SimplicialClass,
) -> Verdict {
    let Some(last) = seq.last() else {
        return Verdict::Indeterminate { horizon: 0 };
    };
    let window = if explicit { window.min(seq.len()) } else { window };
    let run = seq.iter().rev().take_while(|s| *s == last).count();
    if run >= window {
        Verdict::Stabilized { value: wrap(last), since: seq.len() - run + 1 }
    } else {
        Verdict::Indeterminate { horizon: seq.len() }
    }
}

fn is_explicit(lim: &LimitSieve) -> bool {
    matches!(lim.system().kind(), PointSystemKind::Explicit(_))
}

/// The shared pipeline of the limit, lax and relative measures.
fn run(query: &MeasureQuery, caps: &Caps) -> Result<(Vec<(FatPointRef, SimplicialClass)>, bool)> {
    let lim = materialize(query, caps)?;
    let points = lim.system().members()?.to_vec();
    let mut seq = Vec::with_capacity(points.len());
    for (i, (m, member)) in points.iter().zip(lim.members()).enumerate() {
        seq.push((m.clone(), term(&lim, member, i, m, query, caps)?));
    }
    Ok((seq, is_explicit(&lim)))
}

fn mode_of(query: &MeasureQuery) -> MeasureMode {
    if query.base == BaseRing::OverBase {
        MeasureMode::Relative
    } else if query.lax.is_some() {
        MeasureMode::Lax
    } else {
        MeasureMode::Limit
    }
}

/// `μ_{p,x,Q}`: the eventual value of the corrected member classes.
pub fn limit_measure(query: &MeasureQuery, caps: &Caps) -> Result<MeasureReport> {
    let (sequence, explicit) = run(query, caps)?;
    let classes: Vec<SimplicialClass> = sequence.iter().map(|(_, c)| c.clone()).collect();
    let verdict = verdict(&classes, query.window, explicit, |c| c.clone());
    Ok(MeasureReport { mode: mode_of(query), sequence, verdict, lax: query.lax.clone() })
}

/// The lax variant with extra exponent `-l(m)`; `l ≡ 0` is the limit measure.
pub fn lax_measure(query: &MeasureQuery, rule: LaxRule, caps: &Caps) -> Result<MeasureReport> {
    let q = query.clone().with_lax(rule);
    limit_measure(&q, caps)
}

/// The measure of a truncation-compatible family of arc sieves, `Q = 1`.
pub fn stable_set_measure(family: LimitSieve, caps: &Caps) -> Result<MeasureReport> {
    if family.base().field().is_finite() {
        let pt: FatPointRef = Arc::new(FatPoint::point(family.base().field()));
        family.check(&[pt], caps)?;
    }
    let q = MeasureQuery::new(family).with_q(BigRational::from_integer(1.into()))?;
    limit_measure(&q, caps)
}

/// Same as [`stable_set_measure`] with explicit stability parameters.
pub fn stable_set_measure_with(family: LimitSieve, horizon: usize, window: usize, caps: &Caps) -> Result<MeasureReport> {
    let q = MeasureQuery::new(family).with_q(BigRational::from_integer(1.into()))?.with_stability(horizon, window)?;
    limit_measure(&q, caps)
}

/// One report per level, each computed without consulting faces or
/// degeneracies.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedReport {
    pub levels: Vec<(Vec<KClass>, Option<(KClass, usize)>)>,
}

impl IndexedReport {
    /// The combined verdict: stabilized when every level is, from the latest
    /// of the per-level positions.
    pub fn verdict(&self) -> Verdict {
        let mut values = Vec::new();
        let mut since = 1;
        for (seq, v) in &self.levels {
            match v {
                Some((c, s)) => {
                    values.push(c.clone());
                    since = since.max(*s);
                }
                None => return Verdict::Indeterminate { horizon: seq.len() },
            }
        }
        match SimplicialClass::from_levels(values) {
            Ok(value) => Verdict::Stabilized { value, since },
            Err(_) => Verdict::Indeterminate { horizon: 0 },
        }
    }
}

/// Forgets the simplicial maps and runs every level as its own sequence.
pub fn indexed_mode(query: &MeasureQuery, caps: &Caps) -> Result<IndexedReport> {
    let (sequence, explicit) = run(query, caps)?;
    let top = sequence.first().map_or(0, |(_, c)| c.truncation());
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let seq: Vec<KClass> = sequence.iter().map(|(_, c)| c.levels()[n].clone()).collect();
        let v = match verdict(&seq, query.window, explicit, |c| SimplicialClass::constant(c, 0)) {
            Verdict::Stabilized { value, since } => Some((value.levels()[0].clone(), since)),
            Verdict::Indeterminate { .. } => None,
        };
        levels.push((seq, v));
    }
    Ok(IndexedReport { levels })
}

/// Whether the subject is measurable for the query, i.e. its corrected
/// sequence stabilizes within the horizon.
pub fn supports(query: &MeasureQuery, caps: &Caps) -> Result<bool> {
    Ok(matches!(limit_measure(query, caps)?.verdict, Verdict::Stabilized { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpt::{FunctorTag, PointSystem};
    use crate::field::Field;
    use crate::scheme::AffineScheme;
    use crate::sieve::MemberRule;

    fn caps() -> Caps {
        Caps::default()
    }

    fn line(f: Field) -> SchemeRef {
        Arc::new(AffineScheme::affine_space(f, 1))
    }

    fn jets(f: Field, x: &SchemeRef, rule: MemberRule, horizon: usize) -> LimitSieve {
        let base = SimplicialSieve::constant(SieveExpr::full(x.clone()), 0);
        let sys = PointSystem::powers(f, &["t"], horizon).unwrap();
        LimitSieve::new(base, sys, FunctorTag::Trivial, rule, &caps()).unwrap()
    }

    #[test]
    fn ceilings_are_exact() {
        let q = BigRational::new(1.into(), 3.into());
        assert_eq!(ceil_rational(&q, 3), BigInt::from(1));
        assert_eq!(ceil_rational(&q, 4), BigInt::from(2));
        assert_eq!(ceil_rational(&BigRational::zero(), 7), BigInt::from(0));
    }

    #[test]
    fn finite_measures() {
        let f = Field::Prime(2);
        let x = line(f);
        let m: FatPointRef = Arc::new(FatPoint::jet(f, "t", 2).unwrap());
        assert_eq!(finite_measure(&SieveExpr::full(x.clone()), &m, &caps()).unwrap(), KClass::lefschetz(f, 2));
        let pt: SchemeRef = Arc::new(AffineScheme::point(f));
        assert_eq!(finite_measure(&SieveExpr::full(pt.clone()), &m, &caps()).unwrap(), KClass::one(f));
        assert!(finite_measure(&SieveExpr::empty(x.clone()), &m, &caps()).unwrap().is_zero());

        let spec: FatPointRef = Arc::new(FatPoint::point(f));
        assert_eq!(integral_form(&SieveExpr::full(pt.clone()), &pt, &spec, &caps()).unwrap(), KClass::one(f));
        assert_eq!(integral_form(&SieveExpr::full(x.clone()), &x, &spec, &caps()).unwrap(), KClass::lefschetz(f, 1));
        assert!(integral_form(&SieveExpr::empty(x.clone()), &x, &spec, &caps()).unwrap().is_zero());
    }

    #[test]
    fn full_arcs_have_measure_one() {
        let f = Field::Prime(2);
        for d in 1..=2 {
            let x: SchemeRef = Arc::new(AffineScheme::affine_space(f, d));
            let q = MeasureQuery::new(jets(f, &x, MemberRule::FullArc, 4))
                .with_q(BigRational::from_integer(1.into()))
                .unwrap()
                .with_stability(4, 3)
                .unwrap();
            let r = limit_measure(&q, &caps()).unwrap();
            assert_eq!(r.value0(), Some(KClass::one(f)));
            assert_eq!(r.verdict, Verdict::Stabilized { value: SimplicialClass::constant(&KClass::one(f), 0), since: 1 });
        }
    }

    #[test]
    fn origin_arcs_and_empty_family() {
        let f = Field::Prime(2);
        let x = line(f);
        let origin = SimplicialSieve::constant(SieveExpr::parse_closed(x.clone(), &["x"]).unwrap(), 0);
        let r = stable_set_measure_with(jets(f, &x, MemberRule::Cylinder(origin), 4), 4, 3, &caps()).unwrap();
        assert_eq!(r.value0(), Some(KClass::lefschetz(f, -1)));
        let r = stable_set_measure_with(jets(f, &x, MemberRule::Empty, 4), 4, 3, &caps()).unwrap();
        assert_eq!(r.value0(), Some(KClass::zero(f)));
    }

    #[test]
    fn lax_rules() {
        let f = Field::Prime(2);
        let x = line(f);
        let q = MeasureQuery::new(jets(f, &x, MemberRule::FullArc, 4)).with_stability(4, 3).unwrap();
        let plain = limit_measure(&q, &caps()).unwrap();
        assert!(plain.value().is_none());
        let zero = lax_measure(&q, LaxRule::zero(), &caps()).unwrap();
        assert_eq!(zero.classes(), plain.classes());
        assert_eq!(zero.verdict, plain.verdict);
        let cancel = lax_measure(&q, LaxRule::Affine { slope: 1, offset: 0 }, &caps()).unwrap();
        assert_eq!(cancel.value0(), Some(KClass::one(f)));
        let diverge = lax_measure(&q, LaxRule::Affine { slope: 2, offset: 0 }, &caps()).unwrap();
        assert_eq!(diverge.verdict, Verdict::Indeterminate { horizon: 4 });
        assert_eq!(diverge.sequence[2].1.levels()[0], KClass::lefschetz(f, -3));
    }

    #[test]
    fn singleton_system_is_the_finite_measure() {
        let f = Field::Prime(3);
        let x = line(f);
        let s = SieveExpr::parse_open(x.clone(), "x").unwrap();
        let m: FatPointRef = Arc::new(FatPoint::jet(f, "t", 2).unwrap());
        let lim = LimitSieve::new(
            SimplicialSieve::constant(s.clone(), 0),
            PointSystem::singleton(m.clone()),
            FunctorTag::Trivial,
            MemberRule::FullArc,
            &caps(),
        )
        .unwrap();
        let r = limit_measure(&MeasureQuery::new(lim), &caps()).unwrap();
        assert_eq!(r.value0().unwrap(), finite_measure(&s, &m, &caps()).unwrap());
    }

    #[test]
    fn indexed_mode_agrees() {
        let f = Field::Prime(2);
        let x = line(f);
        let base = SimplicialSieve::constant(SieveExpr::full(x), 1);
        let sys = PointSystem::powers(f, &["t"], 3).unwrap();
        let lim = LimitSieve::new(base, sys, FunctorTag::Trivial, MemberRule::FullArc, &caps()).unwrap();
        let q = MeasureQuery::new(lim).with_q(BigRational::from_integer(1.into())).unwrap().with_stability(3, 2).unwrap();
        let simp = limit_measure(&q, &caps()).unwrap();
        let idx = indexed_mode(&q, &caps()).unwrap();
        assert_eq!(idx.verdict(), simp.verdict);
        assert_eq!(idx.levels.len(), 2);
    }

    #[test]
    fn relative_mode_over_the_line() {
        let f = Field::Prime(2);
        let x = line(f);
        let q = MeasureQuery::new(jets(f, &x, MemberRule::FullArc, 3))
            .with_q(BigRational::from_integer(1.into()))
            .unwrap()
            .with_base(BaseRing::OverBase)
            .with_stability(3, 2)
            .unwrap();
        let r = limit_measure(&q, &caps()).unwrap();
        assert_eq!(r.mode, MeasureMode::Relative);
        // the jets over each point of the line contribute L^{n-1} · L^{-n}
        let v = r.value0().expect("stabilizes");
        let pt: FatPointRef = Arc::new(FatPoint::point(f));
        assert_eq!(v.counting(&pt, &caps()).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn bad_queries_are_rejected() {
        let f = Field::Prime(2);
        let q = MeasureQuery::new(jets(f, &line(f), MemberRule::FullArc, 2));
        assert!(q.clone().with_q(BigRational::from_integer((-1).into())).is_err());
        assert!(q.clone().with_stability(2, 3).is_err());
        assert!(q.with_stability(4, 1).is_err());
    }
}
