//! Finite-dimensional quotient algebras `k[y]/I` with a standard-monomial basis,
//! their structure constants, and a word-sized evaluation path over `F_p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::{Ideal, QuotientBasis};
use crate::poly::{Monomial, Poly, Ring, RingRef};

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    ideal: Ideal,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `table[i][j]` expresses `b_i * b_j` in the basis.
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
    fp: Option<Arc<FpTable>>,
}

impl QuotientAlgebra {
    pub fn new(ideal: Ideal) -> Result<QuotientAlgebra> {
        let basis = match ideal.quotient_basis() {
            QuotientBasis::Finite(b) => b,
            QuotientBasis::Infinite => return Err(Error::NotFinite),
        };
        let index: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let ring = ideal.ring().clone();
        let mut table = vec![vec![Vec::new(); basis.len()]; basis.len()];
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let prod = Poly::monomial(&ring, basis[i].mul(&basis[j]), Scalar::from_integer(1.into()));
                let nf = ideal.normal_form(&prod)?;
                let entry: Vec<(usize, Scalar)> =
                    nf.terms().map(|(m, c)| (index[m], c.clone())).collect();
                table[i][j] = entry.clone();
                table[j][i] = entry;
            }
        }
        let fp = match ring.field() {
            Field::Prime(p) => Some(Arc::new(FpTable::new(p, &table, ring.field()))),
            Field::Rationals => None,
        };
        Ok(QuotientAlgebra { ideal, basis, index, table, fp })
    }

    /// The ground field itself, with no variables.
    pub fn ground(field: Field) -> QuotientAlgebra {
        let ring = Ring::with_vars::<&str>(field, &[]);
        QuotientAlgebra::new(Ideal::zero(&ring)).expect("k is finite over k")
    }

    pub fn field(&self) -> Field {
        self.ideal.ring().field()
    }

    pub fn ring(&self) -> &RingRef {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    pub fn fp(&self) -> Option<&Arc<FpTable>> {
        self.fp.as_ref()
    }

    /// Coordinates of `p` modulo the presentation.
    pub fn coords(&self, p: &Poly) -> Result<Vec<Scalar>> {
        let nf = self.ideal.normal_form(p)?;
        let mut out = vec![Scalar::zero(); self.dim()];
        for (m, c) in nf.terms() {
            out[self.index[m]] = c.clone();
        }
        Ok(out)
    }

    pub fn to_poly(&self, coords: &[Scalar]) -> Poly {
        Poly::from_terms(
            self.ring(),
            coords.iter().zip(&self.basis).map(|(c, m)| (m.clone(), c.clone())),
        )
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = f.mul(ai, bj);
                for (k, c) in &self.table[i][j] {
                    out[*k] = f.add(&out[*k], &f.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Evaluates `p` with variable `i` sent to the algebra element `images[i]`.
    pub fn eval(&self, p: &Poly, images: &[Vec<Scalar>]) -> Vec<Scalar> {
        let f = self.field();
        let mut one = vec![Scalar::zero(); self.dim()];
        if !one.is_empty() {
            one[0] = f.one();
        }
        let mut acc = vec![Scalar::zero(); self.dim()];
        for (m, c) in p.terms() {
            let mut t: Vec<Scalar> = one.iter().map(|x| f.mul(x, c)).collect();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = self.mul(&t, &images[v]);
                }
            }
            for (a, b) in acc.iter_mut().zip(&t) {
                *a = f.add(a, b);
            }
        }
        acc
    }

    /// `A ⊗_k B`: disjoint union of variables, union of generators.
    /// Colliding names from `other` get primes appended.
    pub fn tensor(&self, other: &QuotientAlgebra) -> Result<QuotientAlgebra> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        let mut vars: Vec<String> = self.ring().vars().to_vec();
        let mut map_b = Vec::new();
        for v in other.ring().vars() {
            let mut name = v.clone();
            while vars.contains(&name) {
                name.push('\'');
            }
            map_b.push(vars.len());
            vars.push(name);
        }
        let ring = Ring::new(self.field(), vars)?;
        let map_a: Vec<usize> = (0..self.ring().nvars()).collect();
        let mut gens: Vec<Poly> =
            self.ideal.generators().iter().map(|g| g.embed(&ring, &map_a)).collect();
        gens.extend(other.ideal.generators().iter().map(|g| g.embed(&ring, &map_b)));
        QuotientAlgebra::new(Ideal::new(&ring, gens)?)
    }

    /// Index pairs `(i, j)` such that basis element `k` of `self ⊗ other` is `a_i ⊗ b_j`,
    /// assuming `product` was built by [`QuotientAlgebra::tensor`].
    pub fn tensor_pairs(&self, other: &QuotientAlgebra, product: &QuotientAlgebra) -> Vec<(usize, usize)> {
        let na = self.ring().nvars();
        product
            .basis()
            .iter()
            .map(|m| {
                let a = Monomial(m.0[..na].to_vec());
                let b = Monomial(m.0[na..].to_vec());
                (self.index[&a], other.index[&b])
            })
            .collect()
    }
}

impl fmt::Display for QuotientAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring().nvars() == 0 {
            return write!(f, "k");
        }
        write!(f, "k[{}]", self.ring().vars().join(","))?;
        if !self.ideal.generators().is_empty() {
            write!(f, "/{}", self.ideal)?;
        }
        Ok(())
    }
}

/// Structure constants reduced to machine words, for enumeration over `F_p`.
#[derive(Debug)]
pub struct FpTable {
    pub p: u32,
    pub dim: usize,
    mult: Vec<Vec<Vec<(u16, u32)>>>,
}

impl FpTable {
    fn new(p: u32, table: &[Vec<Vec<(usize, Scalar)>>], field: Field) -> FpTable {
        let mult = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(|(k, c)| (*k as u16, field.to_residue(c))).collect())
                    .collect()
            })
            .collect();
        FpTable { p, dim: table.len(), mult }
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        if self.dim > 0 {
            v[0] = 1;
        }
        v
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut acc = vec![0u64; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let ab = (ai as u64 * bj as u64) % p;
                for &(k, c) in &self.mult[i][j] {
                    acc[k as usize] = (acc[k as usize] + ab * c as u64) % p;
                }
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    pub fn add_into(&self, acc: &mut [u32], x: &[u32]) {
        for (a, b) in acc.iter_mut().zip(x) {
            *a = ((*a as u64 + *b as u64) % self.p as u64) as u32;
        }
    }

    pub fn scale(&self, x: &[u32], c: u32) -> Vec<u32> {
        x.iter().map(|v| ((*v as u64 * c as u64) % self.p as u64) as u32).collect()
    }

    /// Units of a local algebra are exactly the elements with nonzero residue.
    pub fn is_unit(&self, x: &[u32]) -> bool {
        x.first().map(|c| *c != 0).unwrap_or(false)
    }

    /// Number of elements, `p^dim`.
    pub fn size(&self) -> u64 {
        (self.p as u64).saturating_pow(self.dim as u32)
    }

    /// The `n`-th element in base-`p` digit order.
    pub fn element(&self, mut n: u64) -> Vec<u32> {
        let mut v = vec![0u32; self.dim];
        for slot in v.iter_mut() {
            *slot = (n % self.p as u64) as u32;
            n /= self.p as u64;
        }
        v
    }
}

/// A polynomial compiled for repeated evaluation on `F_p`-algebra elements.
#[derive(Clone, Debug)]
pub struct FpPoly {
    terms: Vec<(u32, Vec<(usize, u32)>)>,
    max_exp: Vec<u32>,
    /// Highest variable index used, if any.
    pub last_var: Option<usize>,
}

impl FpPoly {
    pub fn compile(p: &Poly) -> FpPoly {
        let field = p.field();
        let n = p.ring().nvars();
        let mut max_exp = vec![0u32; n];
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors: Vec<(usize, u32)> =
                    m.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (i, *e)).collect();
                for &(i, e) in &factors {
                    max_exp[i] = max_exp[i].max(e);
                }
                (field.to_residue(c), factors)
            })
            .collect();
        let last_var = (0..n).rev().find(|&i| max_exp[i] > 0);
        FpPoly { terms, max_exp, last_var }
    }

    pub fn eval(&self, alg: &FpTable, values: &[&[u32]]) -> Vec<u32> {
        let mut powers: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.max_exp.len()];
        for (i, &e) in self.max_exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut cur = values[i].to_vec();
            powers[i].push(cur.clone());
            for _ in 1..e {
                cur = alg.mul(&cur, values[i]);
                powers[i].push(cur.clone());
            }
        }
        let mut acc = vec![0u32; alg.dim];
        for (c, factors) in &self.terms {
            let mut t = alg.scale(&alg.one(), *c);
            for &(i, e) in factors {
                t = alg.mul(&t, &powers[i][e as usize - 1]);
            }
            alg.add_into(&mut acc, &t);
        }
        acc
    }

    pub fn is_zero_at(&self, alg: &FpTable, values: &[&[u32]]) -> bool {
        self.eval(alg, values).iter().all(|c| *c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(field: Field, vars: &[&str], gens: &[&str]) -> QuotientAlgebra {
        let r = Ring::with_vars(field, vars);
        QuotientAlgebra::new(Ideal::parse(&r, gens).unwrap()).unwrap()
    }

    #[test]
    fn tensor_dimensions() {
        let a = alg(Field::Rationals, &["t"], &["t^2"]);
        let b = alg(Field::Rationals, &["s"], &["s^2"]);
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.dim(), 4);
        let c = alg(Field::Rationals, &["t"], &["t^3"]);
        let ac = a.tensor(&c).unwrap();
        assert_eq!(ac.dim(), 6);
        assert_eq!(ac.ring().vars(), &["t".to_string(), "t'".to_string()]);
        let k = QuotientAlgebra::ground(Field::Rationals);
        assert_eq!(a.tensor(&k).unwrap().dim(), 2);
        assert_eq!(a.tensor(&k).unwrap().ring().vars(), a.ring().vars());
    }

    #[test]
    fn tensor_field_mismatch() {
        let a = alg(Field::Rationals, &["t"], &["t^2"]);
        let b = alg(Field::Prime(2), &["s"], &["s^2"]);
        assert!(matches!(a.tensor(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn infinite_is_rejected() {
        let r = Ring::with_vars(Field::Rationals, &["t"]);
        assert!(matches!(QuotientAlgebra::new(Ideal::zero(&r)), Err(Error::NotFinite)));
    }

    #[test]
    fn fp_multiplication_matches_symbolic() {
        let a = alg(Field::Prime(3), &["t", "s"], &["t^2 - s", "s^2"]);
        let fp = a.fp().unwrap();
        for x in 0..fp.size().min(81) {
            for y in [0u64, 1, 5, 17, 40] {
                let ex = fp.element(x);
                let ey = fp.element(y);
                let sx: Vec<Scalar> = ex.iter().map(|v| a.field().from_u32(*v)).collect();
                let sy: Vec<Scalar> = ey.iter().map(|v| a.field().from_u32(*v)).collect();
                let sym: Vec<u32> = a.mul(&sx, &sy).iter().map(|c| a.field().to_residue(c)).collect();
                assert_eq!(fp.mul(&ex, &ey), sym);
            }
        }
    }
}
