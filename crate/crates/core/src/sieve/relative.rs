//! Sieves over a base scheme `S`, carried with their structure morphism.

use std::collections::HashMap;
use std::sync::Arc;

use super::SieveExpr;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::FatPointRef;
use crate::groebner::Ideal;
use crate::poly::Poly;
use crate::scheme::{AffineScheme, Morphism, SchemeRef};

#[derive(Clone, Debug)]
pub struct RelativeSieve {
    sieve: SieveExpr,
    structure: Morphism,
}

impl RelativeSieve {
    pub fn new(sieve: SieveExpr, structure: Morphism) -> Result<RelativeSieve> {
        if !structure.source().same_presentation(sieve.ambient()) {
            return Err(Error::StructureMismatch("structure morphism does not start at the ambient".into()));
        }
        Ok(RelativeSieve { sieve, structure })
    }

    /// `S` itself over `S`: the unit for the fiber product.
    pub fn unit(base: SchemeRef) -> RelativeSieve {
        RelativeSieve { sieve: SieveExpr::full(base.clone()), structure: Morphism::identity(base) }
    }

    /// A sieve on `S × A^k` over `S` by the first projection.
    pub fn over_product(base: &SchemeRef, sieve: SieveExpr) -> Result<RelativeSieve> {
        let amb = sieve.ambient().clone();
        if amb.nvars() < base.nvars() {
            return Err(Error::StructureMismatch("ambient is smaller than the base".into()));
        }
        let images = (0..base.nvars()).map(|i| Poly::var(amb.ring(), i)).collect();
        RelativeSieve::new(sieve, Morphism::new(amb, base.clone(), images)?)
    }

    pub fn sieve(&self) -> &SieveExpr {
        &self.sieve
    }

    pub fn structure(&self) -> &Morphism {
        &self.structure
    }

    pub fn base(&self) -> &SchemeRef {
        self.structure.target()
    }

    fn same_base(&self, other: &RelativeSieve) -> Result<()> {
        if self.base().same_presentation(other.base()) {
            Ok(())
        } else {
            Err(Error::BaseMismatch(format!("{} vs {}", self.base(), other.base())))
        }
    }

    /// `self ×_S other`, computed in `X × Y` cut out by `j_X = j_Y`.
    pub fn fiber_product(&self, other: &RelativeSieve) -> Result<RelativeSieve> {
        self.same_base(other)?;
        let (prod, ma, mb) = self.sieve.ambient().product(other.sieve.ambient())?;
        let ring = prod.ring().clone();
        let mut gens = prod.equations().to_vec();
        for (f, g) in self.structure.images().iter().zip(other.structure.images()) {
            let d = f.embed(&ring, &ma).sub(&g.embed(&ring, &mb));
            if !d.is_zero() {
                gens.push(d);
            }
        }
        let name = format!("{}x{}", self.sieve.ambient().name(), other.sieve.ambient().name());
        let amb: SchemeRef = Arc::new(AffineScheme::new(name, Ideal::new(&ring, gens)?)?);
        let a = self.sieve.reindex(amb.clone(), &ma)?;
        let b = other.sieve.reindex(amb.clone(), &mb)?;
        let images = self.structure.images().iter().map(|f| f.embed(&ring, &ma)).collect();
        let structure = Morphism::new(amb, self.base().clone(), images)?;
        RelativeSieve::new(a.inter(&b)?, structure)
    }

    /// `f_*`: the same sieve over `S'` through `f ∘ j`.
    pub fn push(&self, f: &Morphism) -> Result<RelativeSieve> {
        if !f.source().same_presentation(self.base()) {
            return Err(Error::StructureMismatch("pushforward along a map from another base".into()));
        }
        RelativeSieve::new(self.sieve.clone(), self.structure.then(f)?)
    }

    /// `f^*`: the base change `T ×_S X` for `f : T → S`.
    pub fn pull(&self, f: &Morphism) -> Result<RelativeSieve> {
        if !f.target().same_presentation(self.base()) {
            return Err(Error::StructureMismatch("pullback along a map into another base".into()));
        }
        let t = RelativeSieve::new(SieveExpr::full(f.source().clone()), f.clone())?;
        let fp = t.fiber_product(self)?;
        // re-anchor the structure on T
        let (_, ma, _) = f.source().product(self.sieve.ambient())?;
        let amb = fp.sieve.ambient().clone();
        let images = (0..f.source().nvars()).map(|i| Poly::var(amb.ring(), ma[i])).collect();
        RelativeSieve::new(fp.sieve, Morphism::new(amb, f.source().clone(), images)?)
    }

    /// Member points at `m` grouped by their image in `S`.
    pub fn fibers(&self, m: &FatPointRef, caps: &Caps) -> Result<HashMap<Vec<u32>, usize>> {
        let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
        let j = self.structure.compiled();
        let mut out = HashMap::new();
        for p in self.sieve.points(m, caps)? {
            *out.entry(j.apply(table, &p)).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn count(&self, m: &FatPointRef, caps: &Caps) -> Result<usize> {
        self.sieve.count(m, caps)
    }

    /// Checks that every member point maps into the base sieve.
    pub fn check_structure(&self, base: &SieveExpr, m: &FatPointRef, caps: &Caps) -> Result<bool> {
        let inside: std::collections::HashSet<Vec<u32>> = base.points(m, caps)?.into_iter().collect();
        Ok(self.fibers(m, caps)?.keys().all(|k| inside.contains(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpt::FatPoint;
    use crate::field::Field;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn fiber_product_examples() {
        let f3 = Field::Prime(3);
        let s: SchemeRef = Arc::new(AffineScheme::affine_space(f3, 1));
        let m = Arc::new(FatPoint::jet(f3, "t", 2).unwrap());
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f3, &["x", "y"], &[]).unwrap());
        let a = RelativeSieve::over_product(&s, SieveExpr::parse_closed(plane.clone(), &["y^2 - x"]).unwrap()).unwrap();
        let unit = RelativeSieve::unit(s.clone());
        assert_eq!(a.fiber_product(&unit).unwrap().count(&m, &caps()).unwrap(), a.count(&m, &caps()).unwrap());

        // pairs agreeing on S
        let b = RelativeSieve::over_product(&s, SieveExpr::parse_open(plane.clone(), "y").unwrap()).unwrap();
        let fa = a.fibers(&m, &caps()).unwrap();
        let fb = b.fibers(&m, &caps()).unwrap();
        let expected: usize = fa.iter().map(|(k, v)| v * fb.get(k).copied().unwrap_or(0)).sum();
        assert_eq!(a.fiber_product(&b).unwrap().count(&m, &caps()).unwrap(), expected);

        // graph of the identity over A^1: the diagonal has |S(m)| points
        let graph = RelativeSieve::over_product(&s, SieveExpr::parse_closed(plane, &["x - y"]).unwrap()).unwrap();
        assert_eq!(graph.fiber_product(&graph).unwrap().count(&m, &caps()).unwrap(), 9);

        // over a point the fiber product is the plain product
        let pt: SchemeRef = Arc::new(AffineScheme::point(f3));
        let line = RelativeSieve::new(
            SieveExpr::full(s.clone()),
            Morphism::new(s.clone(), pt.clone(), vec![]).unwrap(),
        )
        .unwrap();
        assert_eq!(line.fiber_product(&line).unwrap().count(&m, &caps()).unwrap(), 81);
    }

    #[test]
    fn push_and_pull() {
        let f2 = Field::Prime(2);
        let s: SchemeRef = Arc::new(AffineScheme::affine_space(f2, 1));
        let pt = Arc::new(FatPoint::point(f2));
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f2, &["x", "y"], &[]).unwrap());
        let a = RelativeSieve::over_product(&s, SieveExpr::parse_closed(plane, &["x*y"]).unwrap()).unwrap();
        let id = Morphism::identity(s.clone());
        assert_eq!(a.push(&id).unwrap().structure().images(), a.structure().images());
        let pulled = a.pull(&id).unwrap();
        assert_eq!(pulled.count(&pt, &caps()).unwrap(), a.count(&pt, &caps()).unwrap());
        let unit = RelativeSieve::unit(s.clone()).pull(&id).unwrap();
        assert_eq!(unit.count(&pt, &caps()).unwrap(), 2);
        assert!(a.check_structure(&SieveExpr::full(s), &pt, &caps()).unwrap());
    }
}
