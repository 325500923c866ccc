//! Fat points, simplicial fat points, point systems and limit points.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::Ideal;
use crate::poly::{Poly, Ring, RingRef};

/// A local finite `k`-algebra with residue field `k`, certified by nilpotency
/// of every presented generator.
#[derive(Clone, Debug)]
pub struct FatPoint {
    algebra: QuotientAlgebra,
}

pub type FatPointRef = Arc<FatPoint>;

impl FatPoint {
    pub fn new(presentation: Ideal, field: Field) -> Result<FatPoint> {
        if presentation.ring().field() != field {
            return Err(Error::FieldMismatch(
                presentation.ring().field().to_string(),
                field.to_string(),
            ));
        }
        let algebra = QuotientAlgebra::new(presentation)?;
        if algebra.dim() == 0 {
            return Err(Error::Invalid("the zero algebra is not a fat point".into()));
        }
        for (i, v) in algebra.ring().vars().iter().enumerate() {
            let y = algebra.coords(&Poly::var(algebra.ring(), i))?;
            if !is_nilpotent(&algebra, y) {
                return Err(Error::NotLocal(v.clone()));
            }
        }
        Ok(FatPoint { algebra })
    }

    /// `Spec k`.
    pub fn point(field: Field) -> FatPoint {
        FatPoint { algebra: QuotientAlgebra::ground(field) }
    }

    /// `k[t]/(t^n)`.
    pub fn jet(field: Field, var: &str, n: u32) -> Result<FatPoint> {
        let ring = Ring::new(field, vec![var.to_string()])?;
        let gen = Poly::var(&ring, 0).pow(n);
        FatPoint::new(Ideal::new(&ring, vec![gen])?, field)
    }

    pub fn parse(field: Field, vars: &[&str], gens: &[&str]) -> Result<FatPoint> {
        let ring = Ring::new(field, vars.iter().map(|s| s.to_string()).collect())?;
        FatPoint::new(Ideal::parse(&ring, gens)?, field)
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        &self.algebra
    }

    pub fn ring(&self) -> &RingRef {
        self.algebra.ring()
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn length(&self) -> usize {
        self.algebra.dim()
    }

    pub fn ideal(&self) -> &Ideal {
        self.algebra.ideal()
    }

    pub fn tensor(&self, other: &FatPoint) -> Result<FatPoint> {
        // the tensor product of local algebras with residue field k is local,
        // and every generator stays nilpotent
        Ok(FatPoint { algebra: self.algebra.tensor(&other.algebra)? })
    }

    /// Number of elements of `O_m` over a finite field.
    pub fn cardinality(&self) -> Option<u64> {
        self.algebra.fp().map(|t| t.size())
    }
}

impl fmt::Display for FatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra)
    }
}

fn is_nilpotent(alg: &QuotientAlgebra, mut y: Vec<Scalar>) -> bool {
    // in a local algebra of dimension d every nilpotent satisfies y^d = 0
    let mut power = 1usize;
    loop {
        if y.iter().all(|c| num_traits::Zero::is_zero(c)) {
            return true;
        }
        if power >= alg.dim() {
            return false;
        }
        y = alg.mul(&y, &y);
        power *= 2;
    }
}

/// The three constructors turning a fat point into a simplicial one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorTag {
    Trivial,
    Fiber,
    Symmetric,
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctorTag::Trivial => "trivial",
            FunctorTag::Fiber => "fiber",
            FunctorTag::Symmetric => "sym",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialFatPoint {
    tag: FunctorTag,
    base: FatPointRef,
    truncation: usize,
    powers: Arc<OnceLock<Vec<FatPointRef>>>,
}

impl SimplicialFatPoint {
    pub fn new(tag: FunctorTag, base: FatPointRef, truncation: usize) -> Self {
        SimplicialFatPoint { tag, base, truncation, powers: Arc::new(OnceLock::new()) }
    }

    pub fn tag(&self) -> FunctorTag {
        self.tag
    }

    pub fn base(&self) -> &FatPointRef {
        &self.base
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `F(m)_n`: the base for the trivial functor, the `(n+1)`-fold tensor power for the fiber functor.
    pub fn level(&self, n: usize) -> Result<FatPointRef> {
        if n > self.truncation {
            return Err(Error::LevelOutOfRange { level: n, max: self.truncation });
        }
        match self.tag {
            FunctorTag::Trivial => Ok(self.base.clone()),
            FunctorTag::Symmetric => Err(Error::SymmetricUnsupported),
            FunctorTag::Fiber => {
                if let Some(p) = self.powers.get() {
                    return Ok(p[n].clone());
                }
                let mut levels = vec![self.base.clone()];
                for _ in 0..self.truncation {
                    let next = levels.last().unwrap().tensor(&self.base)?;
                    levels.push(Arc::new(next));
                }
                Ok(self.powers.get_or_init(|| levels)[n].clone())
            }
        }
    }
}

/// Images of the variables of `big` in the ring of `small` under `O_big ↠ O_small`:
/// shared names map to themselves, the rest to zero.
pub fn surjection_images(big: &FatPoint, small: &FatPoint) -> Result<Vec<Poly>> {
    let sr = small.ring();
    for v in sr.vars() {
        if big.ring().var_index(v).is_none() {
            return Err(Error::NotClosedImmersion(format!(
                "variable `{v}` of {small} is not a coordinate of {big}"
            )));
        }
    }
    Ok(big
        .ring()
        .vars()
        .iter()
        .map(|v| match sr.var_index(v) {
            Some(i) => Poly::var(sr, i),
            None => Poly::zero(sr),
        })
        .collect())
}

/// Checks `small ≤ big`, i.e. that `small` is a closed subscheme of `big`.
/// Returns the first generator of `big` that fails to vanish on `small`.
pub fn closed_immersion_witness(big: &FatPoint, small: &FatPoint) -> Result<Option<Poly>> {
    let images = surjection_images(big, small)?;
    for g in big.ideal().generators() {
        let mapped = g.compose(&images, small.ring());
        if !small.ideal().contains(&mapped)? {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainRule {
    /// `I_n = (y_1^n, ..., y_s^n)` for `n = 1, 2, ...`.
    Powers { vars: Vec<String> },
}

#[derive(Clone, Debug)]
pub enum PointSystemKind {
    Explicit(Vec<FatPointRef>),
    Parametric(ChainRule),
}

#[derive(Clone, Debug)]
pub struct PointSystem {
    field: Field,
    kind: PointSystemKind,
    horizon: usize,
    members: Arc<OnceLock<Vec<FatPointRef>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainVerdict {
    Ok,
    Failure { index: usize, generator: String },
}

impl PointSystem {
    pub fn explicit(field: Field, members: Vec<FatPointRef>) -> Result<PointSystem> {
        if members.is_empty() {
            return Err(Error::Invalid("a point system needs at least one member".into()));
        }
        for m in &members {
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().to_string(), field.to_string()));
            }
        }
        let horizon = members.len();
        Ok(PointSystem {
            field,
            kind: PointSystemKind::Explicit(members),
            horizon,
            members: Arc::new(OnceLock::new()),
        })
    }

    pub fn powers(field: Field, vars: &[&str], horizon: usize) -> Result<PointSystem> {
        if horizon == 0 {
            return Err(Error::Invalid("horizon must be at least 1".into()));
        }
        Ok(PointSystem {
            field,
            kind: PointSystemKind::Parametric(ChainRule::Powers {
                vars: vars.iter().map(|s| s.to_string()).collect(),
            }),
            horizon,
            members: Arc::new(OnceLock::new()),
        })
    }

    pub fn singleton(m: FatPointRef) -> PointSystem {
        let field = m.field();
        PointSystem::explicit(field, vec![m]).expect("nonempty")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &PointSystemKind {
        &self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The same system materialized to a different horizon (parametric only;
    /// explicit systems are returned unchanged).
    pub fn with_horizon(&self, horizon: usize) -> PointSystem {
        match &self.kind {
            PointSystemKind::Explicit(_) => self.clone(),
            PointSystemKind::Parametric(rule) => PointSystem {
                field: self.field,
                kind: PointSystemKind::Parametric(rule.clone()),
                horizon,
                members: Arc::new(OnceLock::new()),
            },
        }
    }

    /// The member ideal `I_n` (1-based) of a parametric rule.
    pub fn rule_ideal(&self, n: usize) -> Result<Ideal> {
        match &self.kind {
            PointSystemKind::Parametric(ChainRule::Powers { vars }) => {
                let ring = Ring::new(self.field, vars.clone())?;
                let gens = (0..vars.len()).map(|i| Poly::var(&ring, i).pow(n as u32)).collect();
                Ideal::new(&ring, gens)
            }
            PointSystemKind::Explicit(m) => Ok(m[n - 1].ideal().clone()),
        }
    }

    pub fn members(&self) -> Result<&[FatPointRef]> {
        if let Some(m) = self.members.get() {
            return Ok(m);
        }
        let list = match &self.kind {
            PointSystemKind::Explicit(m) => m.clone(),
            PointSystemKind::Parametric(_) => (1..=self.horizon)
                .map(|n| Ok(Arc::new(FatPoint::new(self.rule_ideal(n)?, self.field)?)))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(self.members.get_or_init(|| list))
    }

    /// Verifies `I_{n+1} ⊆ I_n` for every materialized consecutive pair.
    pub fn chain_check(&self) -> Result<ChainVerdict> {
        let members = self.members()?;
        for (i, pair) in members.windows(2).enumerate() {
            match closed_immersion_witness(&pair[1], &pair[0]) {
                Ok(None) => {}
                Ok(Some(g)) => {
                    return Ok(ChainVerdict::Failure { index: i, generator: g.to_string() })
                }
                Err(Error::NotClosedImmersion(msg)) => {
                    return Ok(ChainVerdict::Failure { index: i, generator: msg })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(ChainVerdict::Ok)
    }
}

impl fmt::Display for PointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PointSystemKind::Parametric(ChainRule::Powers { vars }) => {
                let parts: Vec<String> = vars.iter().map(|v| format!("{v}^n")).collect();
                write!(f, "rule {}", parts.join(","))
            }
            PointSystemKind::Explicit(m) => {
                let parts: Vec<String> = m.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// The formal direct limit of a point system that passed its chain check.
#[derive(Clone, Debug)]
pub struct LimitPoint {
    system: PointSystem,
}

impl LimitPoint {
    pub fn new(system: PointSystem) -> Result<LimitPoint> {
        match system.chain_check()? {
            ChainVerdict::Ok => Ok(LimitPoint { system }),
            ChainVerdict::Failure { index, generator } => {
                Err(Error::ChainFailure { index, generator })
            }
        }
    }

    pub fn system(&self) -> &PointSystem {
        &self.system
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_fat_point_examples() {
        let m = FatPoint::parse(Field::Rationals, &["t"], &["t^3"]).unwrap();
        assert_eq!(m.length(), 3);
        let e = FatPoint::parse(Field::Rationals, &["t"], &["t^2 - 1"]).unwrap_err();
        assert_eq!(e, Error::NotLocal("t".into()));
        assert_eq!(FatPoint::point(Field::Rationals).length(), 1);
        assert_eq!(
            FatPoint::parse(Field::Rationals, &["t"], &[]).unwrap_err(),
            Error::NotFinite
        );
    }

    #[test]
    fn nilpotent_but_not_pure_power() {
        // (x^2 - y, y^2): x^4 = 0, local of length 4
        let m = FatPoint::parse(Field::Prime(3), &["x", "y"], &["x^2 - y", "y^2"]).unwrap();
        assert_eq!(m.length(), 4);
    }

    #[test]
    fn simplicial_levels() {
        let m = Arc::new(FatPoint::jet(Field::Rationals, "t", 2).unwrap());
        let triv = SimplicialFatPoint::new(FunctorTag::Trivial, m.clone(), 5);
        assert!(Arc::ptr_eq(&triv.level(5).unwrap(), &m));
        let fib = SimplicialFatPoint::new(FunctorTag::Fiber, m.clone(), 4);
        assert_eq!(fib.level(0).unwrap().length(), 2);
        assert_eq!(fib.level(1).unwrap().length(), 4);
        for n in 0..=4 {
            assert_eq!(fib.level(n).unwrap().length(), 2usize.pow(n as u32 + 1));
        }
        assert!(fib.level(5).is_err());
        let sym = SimplicialFatPoint::new(FunctorTag::Symmetric, m, 2);
        assert_eq!(sym.level(1).unwrap_err(), Error::SymmetricUnsupported);
    }

    #[test]
    fn chain_checks() {
        for h in [1usize, 2, 8, 64] {
            let sys = PointSystem::powers(Field::Prime(2), &["t"], h).unwrap();
            assert_eq!(sys.chain_check().unwrap(), ChainVerdict::Ok);
        }
        let a = Arc::new(FatPoint::jet(Field::Rationals, "t", 3).unwrap());
        let b = Arc::new(FatPoint::jet(Field::Rationals, "t", 2).unwrap());
        let bad = PointSystem::explicit(Field::Rationals, vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(
            bad.chain_check().unwrap(),
            ChainVerdict::Failure { index: 0, generator: "t^2".into() }
        );
        assert!(LimitPoint::new(bad).is_err());
        let single = PointSystem::singleton(a.clone());
        assert_eq!(single.chain_check().unwrap(), ChainVerdict::Ok);
        let good = PointSystem::explicit(Field::Rationals, vec![b, a]).unwrap();
        assert!(LimitPoint::new(good).is_ok());
    }
}
