//! Seeded generators for the test batteries: fat points, small schemes,
//! random sieves and random Grothendieck-ring classes.
//!
//! Every generator draws from a ChaCha stream, so a seed fixes the battery.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Caps;
use crate::error::Result;
use crate::fatpt::{FatPoint, FatPointRef};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::kring::KClass;
use crate::poly::{Monomial, Poly, Ring, RingRef};
use crate::scheme::{AffineScheme, SchemeRef};
use crate::sieve::{SieveExpr, SieveNode, SimplicialSieve};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// The finite fat points every check is evaluated at: `Spec k`, the jets of
/// length 2 and 3, and the first-order neighbourhood of the plane origin.
pub fn fat_points(field: Field) -> Vec<FatPointRef> {
    let mut out: Vec<FatPointRef> = vec![Arc::new(FatPoint::point(field))];
    for n in [2, 3] {
        out.push(Arc::new(FatPoint::jet(field, "t", n).expect("jet point")));
    }
    out.push(Arc::new(FatPoint::parse(field, &["s", "t"], &["s^2", "s*t", "t^2"]).expect("local algebra")));
    out
}

/// A small battery: `Spec k` and `k[t]/t^2`.
pub fn small_fat_points(field: Field) -> Vec<FatPointRef> {
    fat_points(field).into_iter().take(2).collect()
}

pub struct Generator {
    rng: ChaCha8Rng,
    field: Field,
}

impl Generator {
    pub fn new(seed: u64, field: Field) -> Generator {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), field }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn set_field(&mut self, field: Field) {
        self.field = field;
    }

    fn scalar(&mut self) -> i64 {
        let p = self.field.order().unwrap_or(5) as i64;
        self.rng.gen_range(1..p.max(2))
    }

    /// A random polynomial with at most `terms` terms of degree at most `deg`.
    pub fn poly(&mut self, ring: &RingRef, deg: u32, terms: usize) -> Poly {
        let n = ring.nvars();
        let count = self.rng.gen_range(1..=terms);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut m = Monomial::one(n);
            let d = self.rng.gen_range(0..=deg);
            for _ in 0..d {
                m = m.mul(&Monomial::var(n, self.rng.gen_range(0..n)));
            }
            let c = self.scalar();
            out.push((m, self.field.from_i64(c)));
        }
        Poly::from_terms(ring, out)
    }

    /// A non-constant polynomial.
    pub fn nonconstant(&mut self, ring: &RingRef, deg: u32, terms: usize) -> Poly {
        loop {
            let p = self.poly(ring, deg.max(1), terms);
            if !p.is_constant() {
                return p;
            }
        }
    }

    /// `A^d` with coordinates `x` or `x0, x1, …`.
    pub fn affine(&self, d: usize) -> SchemeRef {
        Arc::new(AffineScheme::affine_space(self.field, d))
    }

    /// A small scheme in at most two variables with at most one equation.
    pub fn scheme(&mut self) -> SchemeRef {
        let d = self.rng.gen_range(1..=2);
        let ring = self.affine(d).ring().clone();
        let gens = if self.rng.gen_bool(0.6) { vec![self.nonconstant(&ring, 2, 3)] } else { vec![] };
        let ideal = Ideal::new(&ring, gens).expect("same ring");
        Arc::new(AffineScheme::new("X", ideal).expect("valid scheme"))
    }

    /// A random leaf: closed or open, occasionally full.
    fn leaf(&mut self, ring: &RingRef) -> SieveNode {
        match self.rng.gen_range(0..10) {
            0 => SieveNode::Full,
            1..=5 => SieveNode::Closed(vec![self.nonconstant(ring, 2, 2)]),
            _ => SieveNode::Open(self.nonconstant(ring, 2, 2)),
        }
    }

    /// A lattice expression with at most `leaves` leaves over `ambient`.
    pub fn sieve(&mut self, ambient: &SchemeRef, leaves: usize) -> SieveExpr {
        let ring = ambient.ring().clone();
        let k = self.rng.gen_range(1..=leaves.max(1));
        let mut node = self.leaf(&ring);
        for _ in 1..k {
            let next = self.leaf(&ring);
            node = if self.rng.gen_bool(0.5) {
                SieveNode::Union(vec![node, next])
            } else {
                SieveNode::Inter(vec![node, next])
            };
        }
        SieveExpr::new(ambient.clone(), node).expect("leaves live on the ambient")
    }

    /// A sieve in `A^1` or `A^2`.
    pub fn plain_sieve(&mut self) -> SieveExpr {
        let d = self.rng.gen_range(1..=2);
        let amb = self.affine(d);
        self.sieve(&amb, 2)
    }

    /// `±[s] · L^z` for a random sieve `s`, or a bare `±L^z`.
    pub fn monomial_class(&mut self, caps: &Caps) -> Result<KClass> {
        let base = if self.rng.gen_bool(0.2) {
            KClass::one(self.field)
        } else {
            KClass::of_sieve(&self.plain_sieve(), caps)?
        };
        let z = self.rng.gen_range(-1..=1);
        let sign = if self.rng.gen_bool(0.8) { 1 } else { -1 };
        Ok(base.shift(z).scale(&sign.into()))
    }

    /// A sum of one to three monomial classes.
    pub fn class(&mut self, caps: &Caps) -> Result<KClass> {
        let k = self.rng.gen_range(1..=3);
        let mut acc = KClass::zero(self.field);
        for _ in 0..k {
            acc = acc.add(&self.monomial_class(caps)?)?;
        }
        Ok(acc)
    }

    /// A simplicial sieve with the shape of a constant functor or a graph,
    /// built from sieves with at most `leaves` leaves.
    pub fn simplicial_sieve(&mut self, truncation: usize, graph: bool, leaves: usize) -> Result<SimplicialSieve> {
        let line = self.affine(1);
        let vertices = self.sieve(&line, leaves);
        if !graph {
            return Ok(SimplicialSieve::constant(vertices, truncation));
        }
        let plane = Arc::new(AffineScheme::new("X2", Ideal::zero(&Ring::with_vars(self.field, &["a", "b"])))?);
        let edges = self.sieve(&(plane as SchemeRef), leaves);
        SimplicialSieve::graph(vertices, edges, truncation)
    }

    /// A pair of simplicial sieves over one ambient.
    pub fn simplicial_pair(&mut self, truncation: usize) -> Result<(SimplicialSieve, SimplicialSieve)> {
        self.simplicial_pair_with(truncation, 2)
    }

    pub fn simplicial_pair_with(
        &mut self,
        truncation: usize,
        leaves: usize,
    ) -> Result<(SimplicialSieve, SimplicialSieve)> {
        let graph = self.rng.gen_bool(0.5);
        Ok((self.simplicial_sieve(truncation, graph, leaves)?, self.simplicial_sieve(truncation, graph, leaves)?))
    }

    /// A scheme, an arc point and a test point for the Weil-restriction
    /// adjunction, kept small enough to enumerate.
    pub fn adjunction_triple(&mut self) -> (SchemeRef, FatPointRef, FatPointRef) {
        let points = small_fat_points(self.field);
        let x = self.scheme();
        let m = points.choose(&mut self.rng).expect("nonempty").clone();
        let a = points.choose(&mut self.rng).expect("nonempty").clone();
        (x, m, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let caps = Caps::default();
        let mut a = Generator::new(7, Field::Prime(2));
        let mut b = Generator::new(7, Field::Prime(2));
        for _ in 0..20 {
            assert_eq!(a.class(&caps).unwrap(), b.class(&caps).unwrap());
        }
        let (x, _, _) = a.adjunction_triple();
        let (y, _, _) = b.adjunction_triple();
        assert!(x.same_presentation(&y));
    }

    #[test]
    fn fat_point_battery() {
        let pts = fat_points(Field::Prime(3));
        let lengths: Vec<usize> = pts.iter().map(|p| p.length()).collect();
        assert_eq!(lengths, vec![1, 2, 3, 3]);
    }

    #[test]
    fn simplicial_pairs_share_an_ambient() {
        let mut g = Generator::new(3, Field::Prime(2));
        for _ in 0..10 {
            let (a, b) = g.simplicial_pair(2).unwrap();
            assert!(a.union(&b).is_ok());
        }
    }
}
