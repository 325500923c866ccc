//! Simplicial sieves: level-indexed sieves inside a truncated simplicial
//! ambient, evaluated levelwise on fat points.

use std::collections::HashMap;
use std::fmt;

use super::{disjoint_ambient, SieveExpr, SieveNode};
use crate::arc::simplicial_arc;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPointRef, FunctorTag, SimplicialFatPoint};
use crate::poly::Poly;
use crate::scheme::{Morphism, SchemeRef, SimplicialScheme};

/// How the levels were produced; drives fast point evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplicialShape {
    /// `(s)_•`: every level is `s`, all maps identities.
    Constant,
    /// Level `n` is `s^{n+1}` in the nerve ambient.
    Fiber,
    /// Level `n` is the set of `S_{n+1}`-orbits of `s^{n+1}`, kept as sorted tuples.
    Symmetric,
    /// The 1-skeletal simplicial set of a reflexive graph on `s`.
    Graph,
    General,
}

impl fmt::Display for SimplicialShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplicialShape::Constant => "trivial",
            SimplicialShape::Fiber => "fiber",
            SimplicialShape::Symmetric => "sym",
            SimplicialShape::Graph => "graph",
            SimplicialShape::General => "general",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialSieve {
    ambient: SimplicialScheme,
    levels: Vec<SieveExpr>,
    shape: SimplicialShape,
}

impl SimplicialSieve {
    /// Levels must sit in the matching ambient levels.
    pub fn from_parts(ambient: SimplicialScheme, levels: Vec<SieveExpr>) -> Result<SimplicialSieve> {
        if levels.len() != ambient.truncation() + 1 {
            return Err(Error::StructureMismatch("one sieve per ambient level is required".into()));
        }
        for (n, s) in levels.iter().enumerate() {
            if !s.ambient().same_presentation(ambient.level(n)) {
                return Err(Error::AmbientMismatch(format!("level {n} sieve is not in the ambient level")));
            }
        }
        Ok(SimplicialSieve { ambient, levels, shape: SimplicialShape::General })
    }

    pub fn constant(s: SieveExpr, truncation: usize) -> SimplicialSieve {
        let ambient = SimplicialScheme::constant(s.ambient().clone(), truncation);
        SimplicialSieve { ambient, levels: vec![s; truncation + 1], shape: SimplicialShape::Constant }
    }

    pub fn fiber(s: SieveExpr, truncation: usize) -> Result<SimplicialSieve> {
        let ambient = SimplicialScheme::nerve(s.ambient().clone(), truncation)?;
        let levels = power_levels(&s, &ambient)?;
        Ok(SimplicialSieve { ambient, levels, shape: SimplicialShape::Fiber })
    }

    /// Set-level symmetric functor; levels are presented as in [`Self::fiber`].
    pub fn symmetric(s: SieveExpr, truncation: usize) -> Result<SimplicialSieve> {
        let mut x = SimplicialSieve::fiber(s, truncation)?;
        x.shape = SimplicialShape::Symmetric;
        Ok(x)
    }

    /// The 1-skeletal simplicial set with vertices `vertices` and edges
    /// `edges ∩ (V × V)` plus the diagonal. `edges` lives on `X × X` with the
    /// coordinates of the first factor first.
    pub fn graph(vertices: SieveExpr, edges: SieveExpr, truncation: usize) -> Result<SimplicialSieve> {
        let x = vertices.ambient().clone();
        let nv = x.nvars();
        if edges.ambient().nvars() != 2 * nv || edges.ambient().field() != x.field() {
            return Err(Error::AmbientMismatch("edges must live on the square of the vertex ambient".into()));
        }
        let ambient = SimplicialScheme::nerve(x.clone(), truncation.max(1))?;
        let l1 = ambient.level(1).clone();
        let identity: Vec<usize> = (0..2 * nv).collect();
        let e = edges.reindex(l1.clone(), &identity)?;
        let ends = power_levels(&vertices, &ambient.truncated(1))?;
        let diag = SieveExpr::closed(
            l1.clone(),
            (0..nv).map(|v| Poly::var(l1.ring(), v).sub(&Poly::var(l1.ring(), nv + v))).collect(),
        )?;
        let reflexive = e.inter(&ends[1])?.union(&ends[1].inter(&diag)?)?;
        let mut levels = vec![vertices.clone()];
        for n in 1..=truncation.max(1) {
            let lvl = ambient.level(n).clone();
            let ring = lvl.ring().clone();
            let var = |k: usize, v: usize| Poly::var(&ring, k * nv + v);
            let outer: Vec<usize> = (0..nv).chain((0..nv).map(|v| n * nv + v)).collect();
            let edge_at_ends = reflexive.reindex(lvl.clone(), &outer)?;
            let mut branches = Vec::new();
            for k in 1..=n {
                let mut eqs = Vec::new();
                for j in 1..k {
                    eqs.extend((0..nv).map(|v| var(j, v).sub(&var(0, v))));
                }
                for j in k..n {
                    eqs.extend((0..nv).map(|v| var(j, v).sub(&var(n, v))));
                }
                branches.push(SieveNode::Inter(vec![SieveNode::Closed(eqs), edge_at_ends.node().clone()]));
            }
            levels.push(SieveExpr::new(lvl, SieveNode::Union(branches))?);
        }
        let ambient = ambient.truncated(truncation.max(1));
        let mut s = SimplicialSieve { ambient, levels, shape: SimplicialShape::Graph };
        if truncation == 0 {
            s = s.truncated(0);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> &SimplicialScheme {
        &self.ambient
    }

    pub fn level(&self, n: usize) -> Result<&SieveExpr> {
        self.levels.get(n).ok_or(Error::LevelOutOfRange { level: n, max: self.truncation() })
    }

    pub fn levels(&self) -> &[SieveExpr] {
        &self.levels
    }

    pub fn shape(&self) -> SimplicialShape {
        self.shape
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn truncated(&self, n: usize) -> SimplicialSieve {
        let n = n.min(self.truncation());
        SimplicialSieve { ambient: self.ambient.truncated(n), levels: self.levels[..=n].to_vec(), shape: self.shape }
    }

    fn check_pair(&self, other: &SimplicialSieve) -> Result<()> {
        if self.shape == SimplicialShape::Symmetric || other.shape == SimplicialShape::Symmetric {
            return Err(Error::SymmetricUnsupported);
        }
        Ok(())
    }

    fn combine(&self, other: &SimplicialSieve, union: bool) -> Result<SimplicialSieve> {
        self.check_pair(other)?;
        let top = self.truncation().min(other.truncation());
        let ambient = self.ambient.truncated(top);
        if !ambient.same_structure(&other.ambient.truncated(top)) {
            return Err(Error::AmbientMismatch("simplicial ambients differ".into()));
        }
        let levels = (0..=top)
            .map(|n| {
                if union {
                    self.levels[n].union(&other.levels[n])
                } else {
                    self.levels[n].inter(&other.levels[n])
                }
            })
            .collect::<Result<_>>()?;
        let shape = if self.shape == other.shape && self.shape == SimplicialShape::Constant {
            SimplicialShape::Constant
        } else {
            SimplicialShape::General
        };
        Ok(SimplicialSieve { ambient, levels, shape })
    }

    pub fn union(&self, other: &SimplicialSieve) -> Result<SimplicialSieve> {
        self.combine(other, true)
    }

    pub fn inter(&self, other: &SimplicialSieve) -> Result<SimplicialSieve> {
        self.combine(other, false)
    }

    pub fn product(&self, other: &SimplicialSieve) -> Result<SimplicialSieve> {
        self.check_pair(other)?;
        let ambient = self.ambient.product(&other.ambient)?;
        let levels = (0..=ambient.truncation())
            .map(|n| {
                let (_, ma, mb) = self.ambient.level(n).product(other.ambient.level(n))?;
                let lvl = ambient.level(n).clone();
                self.levels[n].reindex(lvl.clone(), &ma)?.inter(&other.levels[n].reindex(lvl, &mb)?)
            })
            .collect::<Result<_>>()?;
        let shape = if self.shape == other.shape && self.shape == SimplicialShape::Constant {
            SimplicialShape::Constant
        } else {
            SimplicialShape::General
        };
        Ok(SimplicialSieve { ambient, levels, shape })
    }

    /// Levelwise `⊔`, with maps `f ⊔ g` written as `e·f + (1-e)·g` on the tagged ambient.
    pub fn disjoint_union(&self, other: &SimplicialSieve) -> Result<SimplicialSieve> {
        self.check_pair(other)?;
        let top = self.truncation().min(other.truncation());
        let mut sums = Vec::with_capacity(top + 1);
        let mut levels = Vec::with_capacity(top + 1);
        for n in 0..=top {
            sums.push(disjoint_ambient(self.ambient.level(n), other.ambient.level(n))?);
            levels.push(self.levels[n].disjoint_union(&other.levels[n])?);
        }
        let glue = |f: &Morphism, g: &Morphism, src: usize, tgt: usize| -> Result<Morphism> {
            let s = &sums[src];
            let t = &sums[tgt];
            let ring = s.ambient.ring();
            let e = Poly::var(ring, s.ambient.nvars() - 1);
            let not_e = Poly::one(ring).sub(&e);
            let mut images = vec![Poly::zero(ring); t.ambient.nvars()];
            for (i, img) in f.images().iter().enumerate() {
                images[t.map_a[i]] = e.mul(&img.embed(ring, &s.map_a));
            }
            for (j, img) in g.images().iter().enumerate() {
                images[t.map_b[j]] = not_e.mul(&img.embed(ring, &s.map_b));
            }
            images[t.ambient.nvars() - 1] = e;
            Morphism::new(s.ambient.clone(), t.ambient.clone(), images)
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            faces.push(
                (0..=n)
                    .map(|i| glue(self.ambient.face(n, i), other.ambient.face(n, i), n, n - 1))
                    .collect::<Result<_>>()?,
            );
        }
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|i| glue(self.ambient.degeneracy(n, i), other.ambient.degeneracy(n, i), n, n + 1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let ambient = SimplicialScheme::from_parts_unchecked(
            sums.iter().map(|s| s.ambient.clone()).collect(),
            faces,
            degeneracies,
        );
        Ok(SimplicialSieve { ambient, levels, shape: SimplicialShape::General })
    }

    /// Levelwise pullback along a map of simplicial ambients given by one morphism per level.
    pub fn pullback(&self, maps: &[Morphism], source: SimplicialScheme) -> Result<SimplicialSieve> {
        if maps.len() != self.truncation() + 1 || source.truncation() != self.truncation() {
            return Err(Error::StructureMismatch("one morphism per level is required".into()));
        }
        let levels = self.levels.iter().zip(maps).map(|(s, f)| s.pullback(f)).collect::<Result<_>>()?;
        Ok(SimplicialSieve { ambient: source, levels, shape: SimplicialShape::General })
    }

    /// `∇^F_m` of this sieve: level `n` is the arc sieve of level `n` along `F(m)_n`.
    pub fn arc(&self, sfp: &SimplicialFatPoint, caps: &Caps) -> Result<SimplicialSieve> {
        let top = self.truncation();
        let arcs = simplicial_arc(&self.ambient, sfp, top, caps)?;
        let levels = (0..=top)
            .map(|n| self.levels[n].arc(arcs.level(n)?, caps))
            .collect::<Result<Vec<_>>>()?;
        let ambient = SimplicialScheme::from_parts_unchecked(
            arcs.levels().iter().map(|a| a.scheme().clone()).collect(),
            (0..=top)
                .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| arcs.face(n, i).clone()).collect() })
                .collect(),
            (0..top).map(|n| (0..=n).map(|i| arcs.degeneracy(n, i).clone()).collect()).collect(),
        );
        let shape = if self.shape == SimplicialShape::Constant && sfp.tag() == FunctorTag::Trivial {
            SimplicialShape::Constant
        } else {
            SimplicialShape::General
        };
        Ok(SimplicialSieve { ambient, levels, shape })
    }

    /// Member points at level `n`, as flat coordinates in the level ambient.
    /// Symmetric levels list one sorted representative per orbit.
    pub fn level_points(&self, n: usize, m: &FatPointRef, caps: &Caps) -> Result<Vec<Vec<u32>>> {
        if n > self.truncation() {
            return Err(Error::LevelOutOfRange { level: n, max: self.truncation() });
        }
        match self.shape {
            SimplicialShape::Constant => self.levels[0].points(m, caps),
            SimplicialShape::Fiber | SimplicialShape::Symmetric => {
                let base = self.levels[0].points(m, caps)?;
                let sorted = self.shape == SimplicialShape::Symmetric;
                let total = (base.len() as u128).saturating_pow(n as u32 + 1);
                if total > caps.max_candidates as u128 {
                    return Err(Error::CapExceeded(format!("level {n} has more than {} points", caps.max_candidates)));
                }
                Ok(tuples(&base, n + 1, sorted))
            }
            _ => self.levels[n].points(m, caps),
        }
    }

    pub fn count(&self, n: usize, m: &FatPointRef, caps: &Caps) -> Result<usize> {
        if self.shape == SimplicialShape::Symmetric {
            // multisets of size n+1 from the level-0 points
            let k = self.levels[0].count(m, caps)?;
            return Ok(multichoose(k, n + 1));
        }
        Ok(self.level_points(n, m, caps)?.len())
    }

    /// Checks on one fat point that every face and degeneracy sends member
    /// points to member points.
    pub fn check_maps(&self, m: &FatPointRef, caps: &Caps) -> Result<()> {
        let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
        let pts: Vec<Vec<Vec<u32>>> =
            (0..=self.truncation()).map(|n| self.level_points(n, m, caps)).collect::<Result<_>>()?;
        let index: Vec<HashMap<&[u32], usize>> = pts
            .iter()
            .map(|lvl| lvl.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect())
            .collect();
        for n in 1..=self.truncation() {
            for i in 0..=n {
                let f = self.ambient.face(n, i).compiled();
                for p in &pts[n] {
                    if !index[n - 1].contains_key(f.apply(table, p).as_slice()) {
                        return Err(Error::IdentityViolation(format!("d{i} leaves the sieve at level {n}")));
                    }
                }
            }
        }
        for n in 0..self.truncation() {
            for i in 0..=n {
                let s = self.ambient.degeneracy(n, i).compiled();
                for p in &pts[n] {
                    if !index[n + 1].contains_key(s.apply(table, p).as_slice()) {
                        return Err(Error::IdentityViolation(format!("s{i} leaves the sieve at level {n}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> crate::field::Field {
        self.ambient.field()
    }

    pub fn base_ambient(&self) -> &SchemeRef {
        self.ambient.level(0)
    }
}

/// Level `n` of the fiber construction: the conjunction of `s` on every factor of `X^{n+1}`.
fn power_levels(s: &SieveExpr, nerve: &SimplicialScheme) -> Result<Vec<SieveExpr>> {
    let nv = s.ambient().nvars();
    let mut out = vec![s.clone()];
    for n in 1..=nerve.truncation() {
        let lvl = nerve.level(n).clone();
        let mut nodes = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let map: Vec<usize> = (0..nv).map(|v| k * nv + v).collect();
            nodes.push(s.reindex(lvl.clone(), &map)?.node().clone());
        }
        out.push(SieveExpr::new(lvl, SieveNode::Inter(nodes))?);
    }
    Ok(out)
}

fn tuples(base: &[Vec<u32>], len: usize, sorted: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; len];
    if base.is_empty() {
        return out;
    }
    loop {
        out.push(idx.iter().flat_map(|&i| base[i].iter().copied()).collect());
        // odometer, last slot fastest; sorted tuples keep indices nondecreasing
        let mut k = len;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] + 1 < base.len() {
                idx[k] += 1;
                let fill = if sorted { idx[k] } else { 0 };
                for slot in idx.iter_mut().skip(k + 1) {
                    *slot = fill;
                }
                break;
            }
        }
    }
}

fn multichoose(k: usize, r: usize) -> usize {
    if k == 0 {
        return 0;
    }
    // C(k + r - 1, r)
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        acc = acc * (k as u128 + i) / (i + 1);
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;
    use super::*;
    use crate::fatpt::FatPoint;
    use crate::field::Field;
    use crate::scheme::AffineScheme;

    fn caps() -> Caps {
        Caps::default()
    }

    fn two_points(f: Field) -> SieveExpr {
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f, 1));
        SieveExpr::parse_closed(x, &["x^2 - x"]).unwrap()
    }

    #[test]
    fn functor_level_counts() {
        let f2 = Field::Prime(2);
        let pt = Arc::new(FatPoint::point(f2));
        let s = two_points(f2);
        let c = SimplicialSieve::constant(s.clone(), 3);
        let fib = SimplicialSieve::fiber(s.clone(), 3).unwrap();
        let sym = SimplicialSieve::symmetric(s.clone(), 3).unwrap();
        for n in 0..=3 {
            assert_eq!(c.count(n, &pt, &caps()).unwrap(), 2);
            assert_eq!(fib.count(n, &pt, &caps()).unwrap(), 1 << (n + 1));
            assert_eq!(sym.count(n, &pt, &caps()).unwrap(), n + 2);
            assert_eq!(sym.level_points(n, &pt, &caps()).unwrap().len(), n + 2);
        }
        // fiber levels enumerated through the presentation agree with the tuple shortcut
        let general = SimplicialSieve::from_parts(fib.ambient().clone(), fib.levels().to_vec()).unwrap();
        for n in 0..=2 {
            assert_eq!(general.level_points(n, &pt, &caps()).unwrap(), fib.level_points(n, &pt, &caps()).unwrap());
        }
        for x in [&c, &fib, &sym] {
            x.check_maps(&pt, &caps()).unwrap();
        }
    }

    #[test]
    fn symmetric_counts_orbits() {
        let f3 = Field::Prime(3);
        let pt = Arc::new(FatPoint::point(f3));
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f3, 1));
        let sym = SimplicialSieve::symmetric(SieveExpr::full(x), 2).unwrap();
        // orbits of S_3 on 3^3 tuples
        assert_eq!(sym.count(2, &pt, &caps()).unwrap(), 10);
        let fib = SimplicialSieve::fiber(sym.levels()[0].clone(), 2).unwrap();
        let mut orbits: Vec<Vec<u32>> = fib
            .level_points(2, &pt, &caps())
            .unwrap()
            .into_iter()
            .map(|mut p| {
                p.sort();
                p
            })
            .collect();
        orbits.sort();
        orbits.dedup();
        assert_eq!(orbits.len(), 10);
    }

    #[test]
    fn graph_levels() {
        let f2 = Field::Prime(2);
        let pt = Arc::new(FatPoint::point(f2));
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f2, 1));
        let v = SieveExpr::full(x.clone());
        let (sq, _, _) = x.product(&x).unwrap();
        let sq: SchemeRef = Arc::new(sq);
        // one directed edge 0 → 1
        let e = SieveExpr::parse_closed(sq, &["x", "x' - 1"]).unwrap();
        let g = SimplicialSieve::graph(v, e, 3).unwrap();
        assert_eq!(g.count(0, &pt, &caps()).unwrap(), 2);
        assert_eq!(g.count(1, &pt, &caps()).unwrap(), 3);
        // degenerate 2-simplices: two constants, (0,0,1), (0,1,1)
        assert_eq!(g.count(2, &pt, &caps()).unwrap(), 4);
        g.check_maps(&pt, &caps()).unwrap();
    }

    #[test]
    fn lattice_and_products() {
        let f3 = Field::Prime(3);
        let pt = Arc::new(FatPoint::point(f3));
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f3, 1));
        let a = SimplicialSieve::fiber(SieveExpr::parse_closed(x.clone(), &["x*(x-1)"]).unwrap(), 2).unwrap();
        let b = SimplicialSieve::fiber(SieveExpr::parse_closed(x.clone(), &["x*(x+1)"]).unwrap(), 2).unwrap();
        for n in 0..=2 {
            let u = a.union(&b).unwrap().count(n, &pt, &caps()).unwrap();
            let i = a.inter(&b).unwrap().count(n, &pt, &caps()).unwrap();
            let ca = a.count(n, &pt, &caps()).unwrap();
            let cb = b.count(n, &pt, &caps()).unwrap();
            assert_eq!(u + i, ca + cb);
            assert_eq!(a.product(&b).unwrap().count(n, &pt, &caps()).unwrap(), ca * cb);
            assert_eq!(a.disjoint_union(&b).unwrap().count(n, &pt, &caps()).unwrap(), ca + cb);
        }
        a.product(&b).unwrap().check_maps(&pt, &caps()).unwrap();
        a.disjoint_union(&b).unwrap().check_maps(&pt, &caps()).unwrap();
        let sym = SimplicialSieve::symmetric(a.levels()[0].clone(), 1).unwrap();
        assert!(matches!(sym.union(&a), Err(Error::SymmetricUnsupported)));
    }

    #[test]
    fn arc_of_constant_sieve() {
        let f2 = Field::Prime(2);
        let pt = Arc::new(FatPoint::point(f2));
        let m = Arc::new(FatPoint::jet(f2, "t", 2).unwrap());
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f2, 1));
        let s = SimplicialSieve::constant(SieveExpr::parse_open(x, "x").unwrap(), 2);
        let sfp = SimplicialFatPoint::new(FunctorTag::Trivial, m.clone(), 2);
        let arc = s.arc(&sfp, &caps()).unwrap();
        assert_eq!(arc.shape(), SimplicialShape::Constant);
        assert_eq!(arc.count(1, &pt, &caps()).unwrap(), s.count(1, &m, &caps()).unwrap());
    }
}
