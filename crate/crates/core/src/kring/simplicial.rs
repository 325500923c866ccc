//! Simplicial classes: level-indexed classes with the truncations `h_n`,
//! the functor maps `g_F`, and the simplicial ring over a simplicial base.

use std::fmt;
use std::sync::Mutex;

use num_rational::BigRational;

use super::KClass;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPointRef, FunctorTag};
use crate::field::Field;
use crate::scheme::SimplicialScheme;
use crate::sieve::{SimplicialShape, SimplicialSieve};

/// `[X_•]` as the sequence of its level classes `[X_0], …, [X_N]`; sums and
/// products are levelwise, matching `(F+G)(σ)` and `(F·G)(σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialClass {
    levels: Vec<KClass>,
}

impl SimplicialClass {
    pub fn from_levels(levels: Vec<KClass>) -> Result<SimplicialClass> {
        let first = levels.first().ok_or_else(|| Error::Invalid("a simplicial class needs level 0".into()))?;
        if levels.iter().any(|c| c.field() != first.field() || c.is_relative() != first.is_relative()) {
            return Err(Error::StructureMismatch("levels live in different rings".into()));
        }
        Ok(SimplicialClass { levels })
    }

    /// `[X_•]` with level `n` the class of the level-`n` sieve. The symmetric
    /// functor has no ambient presentation of its levels and is rejected.
    pub fn of_sieve(s: &SimplicialSieve, caps: &Caps) -> Result<SimplicialClass> {
        if s.shape() == SimplicialShape::Symmetric {
            return Err(Error::SymmetricUnsupported);
        }
        if s.shape() == SimplicialShape::Constant {
            let c = KClass::of_sieve(&s.levels()[0], caps)?;
            return Ok(SimplicialClass { levels: vec![c; s.truncation() + 1] });
        }
        let levels = s.levels().iter().map(|l| KClass::of_sieve(l, caps)).collect::<Result<_>>()?;
        Ok(SimplicialClass { levels })
    }

    /// `g_•(c)`: the constant simplicial class.
    pub fn constant(c: &KClass, truncation: usize) -> SimplicialClass {
        SimplicialClass { levels: vec![c.clone(); truncation + 1] }
    }

    /// `g_F(c)`. The fiber functor sends `[X]` to `[n] ↦ [X^{n+1}] = [X]^{n+1}`,
    /// so it is multiplicative and unital but not additive. The symmetric
    /// functor is supported on integer multiples of `1` only.
    pub fn g(c: &KClass, tag: FunctorTag, truncation: usize, caps: &Caps) -> Result<SimplicialClass> {
        match tag {
            FunctorTag::Trivial => Ok(SimplicialClass::constant(c, truncation)),
            FunctorTag::Fiber => {
                let mut levels = Vec::with_capacity(truncation + 1);
                let mut acc = c.clone();
                for _ in 0..=truncation {
                    levels.push(acc.clone());
                    acc = acc.mul(c, caps)?;
                }
                Ok(SimplicialClass { levels })
            }
            FunctorTag::Symmetric => {
                if c.as_integer().is_some() {
                    // multisets of a finite set of rational points are not an
                    // integer combination in general; only 0 and 1 are fixed
                    let n = c.as_integer().unwrap();
                    if n == 0.into() || n == 1.into() {
                        return Ok(SimplicialClass::constant(c, truncation));
                    }
                }
                Err(Error::SymmetricUnsupported)
            }
        }
    }

    /// The simplicial Lefschetz class `[n] ↦ L^{q(n)}`; `q ≡ 1` is `L_•`.
    pub fn lefschetz_rule(field: Field, truncation: usize, q: impl Fn(usize) -> i64) -> SimplicialClass {
        SimplicialClass { levels: (0..=truncation).map(|n| KClass::lefschetz(field, q(n))).collect() }
    }

    pub fn lefschetz(field: Field, z: i64, truncation: usize) -> SimplicialClass {
        SimplicialClass::lefschetz_rule(field, truncation, |_| z)
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn field(&self) -> Field {
        self.levels[0].field()
    }

    pub fn levels(&self) -> &[KClass] {
        &self.levels
    }

    /// `h_n`: the level-`n` class.
    pub fn h(&self, n: usize) -> Result<KClass> {
        self.levels.get(n).cloned().ok_or(Error::LevelOutOfRange { level: n, max: self.truncation() })
    }

    pub fn truncated(&self, n: usize) -> SimplicialClass {
        SimplicialClass { levels: self.levels[..=n.min(self.truncation())].to_vec() }
    }

    fn zip(&self, other: &SimplicialClass, f: impl Fn(&KClass, &KClass) -> Result<KClass>) -> Result<SimplicialClass> {
        let top = self.truncation().min(other.truncation());
        let levels = (0..=top).map(|n| f(&self.levels[n], &other.levels[n])).collect::<Result<_>>()?;
        Ok(SimplicialClass { levels })
    }

    pub fn add(&self, other: &SimplicialClass) -> Result<SimplicialClass> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &SimplicialClass) -> Result<SimplicialClass> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &SimplicialClass, caps: &Caps) -> Result<SimplicialClass> {
        self.zip(other, |a, b| a.mul(b, caps))
    }

    pub fn neg(&self) -> SimplicialClass {
        SimplicialClass { levels: self.levels.iter().map(|c| c.neg()).collect() }
    }

    /// Whether the class lies in the image of `g_•`.
    pub fn is_constant(&self) -> bool {
        self.levels.windows(2).all(|w| w[0] == w[1])
    }

    pub fn counting(&self, m: &FatPointRef, n: usize, caps: &Caps) -> Result<BigRational> {
        self.h(n)?.counting(m, caps)
    }
}

impl fmt::Display for SimplicialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "({})_•@{}", self.levels[0], self.truncation());
        }
        let parts: Vec<String> = self.levels.iter().enumerate().map(|(n, c)| format!("{n}: {c}")).collect();
        write!(f, "<{}>", parts.join("; "))
    }
}

/// The rings `K(M_{S_n})` over the levels of a simplicial base, with the
/// covariant `(d_i)_*`, `(s_i)_*` and contravariant `(d_i)^*`, `(s_i)^*`.
#[derive(Clone, Debug)]
pub struct SimplicialKRing {
    base: SimplicialScheme,
}

impl SimplicialKRing {
    pub fn new(base: SimplicialScheme) -> SimplicialKRing {
        SimplicialKRing { base }
    }

    pub fn base(&self) -> &SimplicialScheme {
        &self.base
    }

    pub fn unit(&self, n: usize, caps: &Caps) -> Result<KClass> {
        self.check_level(n)?;
        KClass::unit_over(self.base.level(n), caps)
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n > self.base.truncation() {
            return Err(Error::LevelOutOfRange { level: n, max: self.base.truncation() });
        }
        Ok(())
    }

    pub fn face_push(&self, c: &KClass, n: usize, i: usize, caps: &Caps) -> Result<KClass> {
        self.check_level(n)?;
        c.push(self.base.face(n, i), caps)
    }

    pub fn degeneracy_push(&self, c: &KClass, n: usize, i: usize, caps: &Caps) -> Result<KClass> {
        self.check_level(n + 1)?;
        c.push(self.base.degeneracy(n, i), caps)
    }

    pub fn face_pull(&self, c: &KClass, n: usize, i: usize, caps: &Caps) -> Result<KClass> {
        self.check_level(n)?;
        c.pull(self.base.face(n, i), caps)
    }

    pub fn degeneracy_pull(&self, c: &KClass, n: usize, i: usize, caps: &Caps) -> Result<KClass> {
        self.check_level(n + 1)?;
        c.pull(self.base.degeneracy(n, i), caps)
    }

    /// Checks `d_i d_j = d_{j-1} d_i` (`i < j`) on the images of a class over
    /// `S_n`, for the covariant and the contravariant maps. Returns the
    /// first failing pair.
    pub fn check_face_identities(&self, c: &KClass, n: usize, caps: &Caps) -> Result<Option<(usize, usize)>> {
        if n < 2 {
            return Ok(None);
        }
        for j in 1..=n {
            for i in 0..j {
                let lhs = self.face_push(&self.face_push(c, n, j, caps)?, n - 1, i, caps)?;
                let rhs = self.face_push(&self.face_push(c, n, i, caps)?, n - 1, j - 1, caps)?;
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// The contravariant identity `(d_j)^* (d_i)^* = (d_i)^* (d_{j-1})^*` for
    /// a class over `S_{n-2}`.
    pub fn check_pull_identities(&self, c: &KClass, n: usize, caps: &Caps) -> Result<Option<(usize, usize)>> {
        if n < 2 {
            return Ok(None);
        }
        for j in 1..=n {
            for i in 0..j {
                let lhs = self.face_pull(&self.face_pull(c, n - 1, i, caps)?, n, j, caps)?;
                let rhs = self.face_pull(&self.face_pull(c, n - 1, j - 1, caps)?, n, i, caps)?;
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }
}

/// Append-only registry of declared simplicial symbols of one site.
#[derive(Debug, Default)]
pub struct SiteRegistry {
    entries: Mutex<Vec<(String, SimplicialClass)>>,
}

impl SiteRegistry {
    pub fn new() -> SiteRegistry {
        SiteRegistry::default()
    }

    pub fn register(&self, name: impl Into<String>, class: SimplicialClass) {
        self.entries.lock().unwrap().push((name.into(), class));
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.lock().unwrap().iter().map(|(n, _)| n.clone()).collect()
    }

    /// Every registered symbol lies in the image of `g_•`.
    pub fn is_strictly_schemic(&self) -> bool {
        self.entries.lock().unwrap().iter().all(|(_, c)| c.is_constant())
    }

    /// Surjectivity of `h_n` on generators holds by construction (`h_n ∘ g_• = id`).
    /// Injectivity is only claimed for strictly schemic sites: then distinct
    /// registered generators must have distinct level-`n` normal forms.
    /// Returns `None` when the site is not strictly schemic.
    pub fn h_injective_on_generators(&self, n: usize) -> Result<Option<bool>> {
        if !self.is_strictly_schemic() {
            return Ok(None);
        }
        let entries = self.entries.lock().unwrap();
        for (a, (_, ca)) in entries.iter().enumerate() {
            for (_, cb) in entries.iter().skip(a + 1) {
                if ca != cb && ca.h(n)? == cb.h(n)? {
                    return Ok(Some(false));
                }
            }
        }
        Ok(Some(true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpt::FatPoint;
    use crate::scheme::{AffineScheme, SchemeRef};
    use crate::sieve::SieveExpr;
    use std::sync::Arc;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn truncations_of_lefschetz_classes() {
        let f = Field::Prime(2);
        let l = SimplicialClass::lefschetz(f, 1, 4);
        for n in 0..=4 {
            assert_eq!(l.h(n).unwrap(), KClass::lefschetz(f, 1));
        }
        assert_eq!(SimplicialClass::lefschetz(f, 0, 2).h(1).unwrap(), KClass::one(f));
        let q = SimplicialClass::lefschetz_rule(f, 3, |n| n as i64);
        assert_eq!(q.h(0).unwrap(), KClass::one(f));
        assert_eq!(q.h(1).unwrap(), KClass::lefschetz(f, 1));
        assert!(matches!(q.h(4), Err(Error::LevelOutOfRange { .. })));
        // the constant functor on A^1 is L_•
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f, 1));
        let lx = SimplicialClass::of_sieve(&SimplicialSieve::constant(SieveExpr::full(x), 4), &caps()).unwrap();
        assert_eq!(lx, l);
    }

    #[test]
    fn functor_maps() {
        let f = Field::Prime(3);
        let x: SchemeRef = Arc::new(AffineScheme::parse("X", f, &["x", "y"], &["x*y"]).unwrap());
        let cx = KClass::of_scheme(&x, &caps()).unwrap();
        let g = SimplicialClass::g(&cx, FunctorTag::Trivial, 2, &caps()).unwrap();
        assert_eq!(g.h(2).unwrap(), cx);
        let fib = SimplicialClass::g(&cx, FunctorTag::Fiber, 2, &caps()).unwrap();
        assert_eq!(fib.h(1).unwrap(), cx.mul(&cx, &caps()).unwrap());
        let one = KClass::one(f);
        assert_eq!(SimplicialClass::g(&one, FunctorTag::Fiber, 3, &caps()).unwrap(), SimplicialClass::constant(&one, 3));
        assert_eq!(SimplicialClass::g(&one, FunctorTag::Symmetric, 1, &caps()).unwrap().h(1).unwrap(), one);
        assert!(SimplicialClass::g(&cx, FunctorTag::Symmetric, 1, &caps()).is_err());
        assert!(SimplicialClass::g(&KClass::zero(f), FunctorTag::Trivial, 1, &caps()).unwrap().h(0).unwrap().is_zero());

        // the fiber sieve agrees with g_fib levelwise
        let s = SimplicialSieve::fiber(SieveExpr::full(x), 2).unwrap();
        assert_eq!(SimplicialClass::of_sieve(&s, &caps()).unwrap(), fib);
        let m = Arc::new(FatPoint::point(f));
        assert_eq!(
            fib.counting(&m, 2, &caps()).unwrap(),
            BigRational::from_integer(s.count(2, &m, &caps()).unwrap().into())
        );
    }

    #[test]
    fn face_identities_on_the_nerve() {
        let f = Field::Prime(2);
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f, 1));
        let nerve = SimplicialScheme::nerve(x, 2).unwrap();
        let ring = SimplicialKRing::new(nerve.clone());
        let unit = ring.unit(2, &caps()).unwrap();
        let lifted = unit.shift(1);
        assert_eq!(ring.check_face_identities(&lifted, 2, &caps()).unwrap(), None);
        let base0 = ring.unit(0, &caps()).unwrap();
        assert_eq!(ring.check_pull_identities(&base0, 2, &caps()).unwrap(), None);
        // pulling back the unit gives the unit
        assert_eq!(ring.face_pull(&base0, 1, 0, &caps()).unwrap(), ring.unit(1, &caps()).unwrap());
    }

    #[test]
    fn registry_flags() {
        let f = Field::Prime(2);
        let reg = SiteRegistry::new();
        reg.register("L", SimplicialClass::lefschetz(f, 1, 2));
        reg.register("one", SimplicialClass::lefschetz(f, 0, 2));
        assert!(reg.is_strictly_schemic());
        assert_eq!(reg.h_injective_on_generators(1).unwrap(), Some(true));
        reg.register("q", SimplicialClass::lefschetz_rule(f, 2, |n| n as i64));
        assert!(!reg.is_strictly_schemic());
        assert_eq!(reg.h_injective_on_generators(1).unwrap(), None);
        assert_eq!(reg.names(), vec!["L", "one", "q"]);
    }
}
