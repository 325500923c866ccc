//! Ideals, reduced Gröbner bases (Buchberger with the product and chain
//! criteria), normal forms, and Krull dimension.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, RingRef};

#[derive(Clone, Debug)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<Poly>,
    basis: OnceLock<Vec<Poly>>,
}

/// Krull dimension of `k[x]/I`; `empty` marks the unit ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KrullDim {
    pub dim: usize,
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    Infinite,
}

impl QuotientBasis {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            QuotientBasis::Finite(b) => Some(b.len()),
            QuotientBasis::Infinite => None,
        }
    }
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<Poly>) -> Result<Ideal> {
        for g in &generators {
            g.check_ring(ring)?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), generators, basis: OnceLock::new() })
    }

    pub fn zero(ring: &RingRef) -> Ideal {
        Ideal { ring: ring.clone(), generators: Vec::new(), basis: OnceLock::new() }
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Ideal> {
        let polys = gens.iter().map(|g| Poly::parse(ring, g)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// The reduced Gröbner basis, computed once with default caps.
    pub fn basis(&self) -> &[Poly] {
        self.basis.get_or_init(|| {
            groebner(&self.generators, &self.ring, &Caps::default())
                .expect("Gröbner basis within default caps")
        })
    }

    /// Computes and caches the basis, reporting cap violations instead of panicking.
    pub fn try_basis(&self, caps: &Caps) -> Result<&[Poly]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = groebner(&self.generators, &self.ring, caps)?;
        Ok(self.basis.get_or_init(|| b))
    }

    pub fn is_unit(&self) -> bool {
        self.basis().iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        p.check_ring(&self.ring)?;
        Ok(reduce(p, self.basis()))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn with_generators(&self, extra: &[Poly]) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis().iter().filter_map(|g| g.leading_monomial().cloned()).collect()
    }

    pub fn quotient_basis(&self) -> QuotientBasis {
        quotient_basis(self)
    }

    pub fn krull_dimension(&self) -> KrullDim {
        krull_dimension(self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Remainder of `p` under full reduction by a monic basis.
pub fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let ring = p.ring().clone();
    let field = ring.field();
    let mut work = p.clone();
    let mut rem = Poly::zero(&ring);
    while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().map(|lm| lm.divides(&m)).unwrap_or(false));
        match divisor {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let q = lm.quotient(&m);
                let factor = field.mul(&c, &field.inv(lc));
                work = work.sub(&g.mul_term(&q, &factor));
            }
            None => {
                work.add_term(m.clone(), field.neg(&c));
                rem.add_term(m, c);
            }
        }
    }
    rem
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (lf, cf) = f.leading().unwrap();
    let (lg, cg) = g.leading().unwrap();
    let field = f.field();
    let l = lf.lcm(lg);
    let a = f.mul_term(&lf.quotient(&l), &field.inv(cf));
    let b = g.mul_term(&lg.quotient(&l), &field.inv(cg));
    a.sub(&b)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by leading monomial.
pub fn groebner(gens: &[Poly], ring: &RingRef, caps: &Caps) -> Result<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        g.check_ring(ring)?;
        if !g.is_zero() {
            if g.is_constant() {
                return Ok(vec![Poly::one(ring)]);
            }
            basis.push(g.monic());
        }
    }
    if basis.is_empty() {
        return Ok(basis);
    }

    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            let d = lcm_degree(&basis[i], &basis[j]);
            pairs.insert((d, i, j));
        }
    }

    let mut processed = 0usize;
    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        done.insert((i, j));
        processed += 1;
        if processed > caps.max_pairs {
            return Err(Error::CapExceeded(format!("Buchberger exceeded {} pairs", caps.max_pairs)));
        }
        let li = basis[i].leading_monomial().unwrap().clone();
        let lj = basis[j].leading_monomial().unwrap().clone();
        if li.coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&l)
                && done.contains(&ordered(i, k))
                && done.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        let r = r.monic();
        let n = basis.len();
        for k in 0..n {
            pairs.insert((lcm_degree(&basis[k], &r), k, n));
        }
        basis.push(r);
    }

    Ok(interreduce(basis))
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn lcm_degree(a: &Poly, b: &Poly) -> u32 {
    a.leading_monomial().unwrap().lcm(b.leading_monomial().unwrap()).degree()
}

fn interreduce(mut basis: Vec<Poly>) -> Vec<Poly> {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if minimal.iter().any(|h| h.leading_monomial().unwrap().divides(lm)) {
            continue;
        }
        minimal.retain(|h| !lm.divides(h.leading_monomial().unwrap()));
        minimal.push(g);
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> =
            minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.clone()).collect();
        reduced.push(reduce(&minimal[i], &others).monic());
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    reduced
}

pub fn quotient_basis(ideal: &Ideal) -> QuotientBasis {
    let n = ideal.ring().nvars();
    if ideal.is_unit() {
        return QuotientBasis::Finite(Vec::new());
    }
    let lts = ideal.leading_monomials();
    let mut bounds = vec![0u32; n];
    for (v, bound) in bounds.iter_mut().enumerate() {
        let pure = lts
            .iter()
            .filter(|m| m.support().all(|i| i == v) && m.0[v] > 0)
            .map(|m| m.0[v])
            .min();
        match pure {
            Some(e) => *bound = e,
            None => return QuotientBasis::Infinite,
        }
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let m = Monomial(exps.clone());
        if !lts.iter().any(|lt| lt.divides(&m)) {
            out.push(m);
        }
        // odometer over the box of exponents below the pure-power bounds
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return QuotientBasis::Finite(out);
            }
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

pub fn krull_dimension(ideal: &Ideal) -> KrullDim {
    let n = ideal.ring().nvars();
    if ideal.is_unit() {
        return KrullDim { dim: 0, empty: true };
    }
    let supports: Vec<Vec<usize>> =
        ideal.leading_monomials().iter().map(|m| m.support().collect()).collect();
    let hit = min_hitting_set(&supports, n);
    KrullDim { dim: n - hit, empty: false }
}

/// Size of the smallest variable set meeting every support; its complement is
/// a maximal independent set modulo the leading-term ideal.
fn min_hitting_set(supports: &[Vec<usize>], n: usize) -> usize {
    fn go(supports: &[Vec<usize>], chosen: &mut Vec<bool>, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        let open = supports
            .iter()
            .filter(|s| !s.iter().any(|&v| chosen[v]))
            .min_by_key(|s| s.len());
        match open {
            None => *best = size,
            Some(s) => {
                for &v in s.clone().iter() {
                    chosen[v] = true;
                    go(supports, chosen, size + 1, best);
                    chosen[v] = false;
                }
            }
        }
    }
    let mut best = n + 1;
    let mut chosen = vec![false; n];
    go(supports, &mut chosen, 0, &mut best);
    best.min(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Ring;

    #[test]
    fn normal_form_examples() {
        let r = Ring::with_vars(Field::Rationals, &["x"]);
        let i = Ideal::parse(&r, &["x^2"]).unwrap();
        // single-step division: x^2 + x - 1*(x^2) = x
        assert_eq!(i.normal_form(&Poly::parse(&r, "x^2 + x").unwrap()).unwrap().to_string(), "x");
        assert!(i.normal_form(&Poly::zero(&r)).unwrap().is_zero());
        let r2 = Ring::with_vars(Field::Rationals, &["x", "y"]);
        let i2 = Ideal::parse(&r2, &["x"]).unwrap();
        assert_eq!(i2.normal_form(&Poly::parse(&r2, "y").unwrap()).unwrap().to_string(), "y");
    }

    #[test]
    fn normal_form_rejects_foreign_ring() {
        let r = Ring::with_vars(Field::Rationals, &["x"]);
        let s = Ring::with_vars(Field::Rationals, &["y"]);
        let i = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(matches!(
            i.normal_form(&Poly::parse(&s, "y").unwrap()),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_basis_is_reduced() {
        let r = Ring::with_vars(Field::Rationals, &["x", "y", "z"]);
        let i = Ideal::parse(&r, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]).unwrap();
        let b = i.basis();
        assert!(!i.is_unit());
        for (k, g) in b.iter().enumerate() {
            let others: Vec<Poly> =
                b.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
            assert_eq!(&reduce(g, &others), g);
        }
        // the quotient is the coordinate ring of 6 points (x,y,z permutations of roots)
        assert_eq!(i.quotient_basis().dimension(), Some(6));
    }

    #[test]
    fn quotient_basis_examples() {
        let r = Ring::with_vars(Field::Rationals, &["t"]);
        let i = Ideal::parse(&r, &["t^2"]).unwrap();
        let b = i.quotient_basis();
        assert_eq!(b, QuotientBasis::Finite(vec![Monomial(vec![0]), Monomial(vec![1])]));
        assert_eq!(Ideal::zero(&r).quotient_basis(), QuotientBasis::Infinite);
        let r2 = Ring::with_vars(Field::Rationals, &["y1", "y2"]);
        assert_eq!(Ideal::parse(&r2, &["y1", "y2"]).unwrap().quotient_basis().dimension(), Some(1));
    }

    #[test]
    fn krull_examples() {
        for d in 0..=8usize {
            let names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
            let r = Ring::with_vars(Field::Rationals, &names);
            assert_eq!(Ideal::zero(&r).krull_dimension(), KrullDim { dim: d, empty: false });
        }
        let r = Ring::with_vars(Field::Rationals, &["x", "y"]);
        assert_eq!(Ideal::parse(&r, &["x^2", "2*x*y"]).unwrap().krull_dimension().dim, 1);
        assert_eq!(
            Ideal::parse(&r, &["1"]).unwrap().krull_dimension(),
            KrullDim { dim: 0, empty: true }
        );
    }

    #[test]
    fn prime_field_basis() {
        let r = Ring::with_vars(Field::Prime(2), &["x", "y"]);
        let i = Ideal::parse(&r, &["x^2 + x", "y^2 + y", "x*y + 1"]).unwrap();
        // over F2 the only solution is x = y = 1, and the ideal is radical there
        assert_eq!(i.quotient_basis().dimension(), Some(1));
    }
}
