//! Finite truncated simplicial sets and the invariants of their geometric
//! realizations: connected components, Euler characteristic and integral
//! homology of the normalized chain complex.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::FatPointRef;
use crate::sieve::SimplicialSieve;

/// Levels `0..=N` of a simplicial set, with faces and degeneracies as index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    sizes: Vec<usize>,
    /// `faces[n][i][x] = d_i x` for `x` in level `n ≥ 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][i][x] = s_i x` for `x` in level `n < N`.
    degeneracies: Vec<Vec<Vec<usize>>>,
}

impl FiniteSimplicialSet {
    pub fn new(
        sizes: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<FiniteSimplicialSet> {
        if sizes.is_empty() {
            return Err(Error::Invalid("a simplicial set needs level 0".into()));
        }
        let top = sizes.len() - 1;
        let ok_shape = faces.len() == top + 1
            && degeneracies.len() == top
            && (1..=top).all(|n| faces[n].len() == n + 1 && faces[n].iter().all(|f| f.len() == sizes[n]))
            && (0..top).all(|n| degeneracies[n].len() == n + 1 && degeneracies[n].iter().all(|s| s.len() == sizes[n]));
        if !ok_shape {
            return Err(Error::StructureMismatch("face/degeneracy tables do not match the level sizes".into()));
        }
        let bounds = (1..=top).all(|n| faces[n].iter().all(|f| f.iter().all(|&y| y < sizes[n - 1])))
            && (0..top).all(|n| degeneracies[n].iter().all(|s| s.iter().all(|&y| y < sizes[n + 1])));
        if !bounds {
            return Err(Error::StructureMismatch("a face or degeneracy leaves its level".into()));
        }
        let s = FiniteSimplicialSet { sizes, faces, degeneracies };
        if let Some(v) = s.identity_violation() {
            return Err(Error::IdentityViolation(v));
        }
        Ok(s)
    }

    pub fn truncation(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degeneracy(&self, n: usize, i: usize, x: usize) -> usize {
        self.degeneracies[n][i][x]
    }

    fn d(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    fn s(&self, n: usize, i: usize, x: usize) -> usize {
        self.degeneracies[n][i][x]
    }

    /// The first simplicial identity that fails, if any.
    pub fn identity_violation(&self) -> Option<String> {
        let top = self.truncation();
        for n in 2..=top {
            for x in 0..self.sizes[n] {
                for j in 1..=n {
                    for i in 0..j {
                        if self.d(n - 1, i, self.d(n, j, x)) != self.d(n - 1, j - 1, self.d(n, i, x)) {
                            return Some(format!("d{i} d{j} != d{} d{i} at level {n}", j - 1));
                        }
                    }
                }
            }
        }
        for n in 0..top {
            for x in 0..self.sizes[n] {
                for j in 0..=n {
                    let sx = self.s(n, j, x);
                    for i in 0..=n + 1 {
                        let lhs = self.d(n + 1, i, sx);
                        let ok = if i == j || i == j + 1 {
                            lhs == x
                        } else if i < j {
                            lhs == self.s(n - 1, j - 1, self.d(n, i, x))
                        } else {
                            lhs == self.s(n - 1, j, self.d(n, i - 1, x))
                        };
                        if !ok {
                            return Some(format!("d{i} s{j} identity fails at level {n}"));
                        }
                    }
                    if n + 1 < top {
                        for i in 0..=j {
                            if self.s(n + 1, i, sx) != self.s(n + 1, j + 1, self.s(n, i, x)) {
                                return Some(format!("s{i} s{j} != s{} s{i} at level {n}", j + 1));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// `Δ^0` truncated at `top`.
    pub fn point(top: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::discrete(1, top)
    }

    /// `k` points, all higher simplices degenerate.
    pub fn discrete(k: usize, top: usize) -> FiniteSimplicialSet {
        let id: Vec<usize> = (0..k).collect();
        FiniteSimplicialSet {
            sizes: vec![k; top + 1],
            faces: (0..=top).map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] }).collect(),
            degeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    /// `Δ^k` truncated at `top`: level `n` is the monotone maps `[n] → [k]`.
    pub fn simplex(k: usize, top: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::from_monotone(k, top, |_| true)
    }

    /// `∂Δ^k`: the non-surjective monotone maps.
    pub fn boundary(k: usize, top: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::from_monotone(k, top, |seq| (0..=k).any(|v| !seq.contains(&v)))
    }

    fn from_monotone(k: usize, top: usize, keep: impl Fn(&[usize]) -> bool) -> FiniteSimplicialSet {
        let levels: Vec<Vec<Vec<usize>>> = (0..=top)
            .map(|n| monotone_sequences(n + 1, k).into_iter().filter(|s| keep(s)).collect())
            .collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let faces = (0..=top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..=n)
                    .map(|i| {
                        levels[n]
                            .iter()
                            .map(|s| {
                                let mut t = s.clone();
                                t.remove(i);
                                index[n - 1][&t]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|i| {
                        levels[n]
                            .iter()
                            .map(|s| {
                                let mut t = s.clone();
                                t.insert(i, s[i]);
                                index[n + 1][&t]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FiniteSimplicialSet { sizes: levels.iter().map(|l| l.len()).collect(), faces, degeneracies }
    }

    /// The simplicial set `s(m)`: member points per level with the induced maps.
    pub fn from_sieve(s: &SimplicialSieve, m: &FatPointRef, caps: &Caps) -> Result<FiniteSimplicialSet> {
        let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
        let top = s.truncation();
        let pts: Vec<Vec<Vec<u32>>> = (0..=top).map(|n| s.level_points(n, m, caps)).collect::<Result<_>>()?;
        let index: Vec<HashMap<&[u32], usize>> = pts
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect())
            .collect();
        let sorted = s.shape() == crate::sieve::SimplicialShape::Symmetric;
        let lookup = |n: usize, mut p: Vec<u32>, what: &str| -> Result<usize> {
            if sorted {
                p = sort_blocks(&p, pts[0].first().map_or(1, |q| q.len()));
            }
            index[n].get(p.as_slice()).copied().ok_or_else(|| {
                Error::IdentityViolation(format!("{what} leaves the sieve at level {n}"))
            })
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            let mut row = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let f = s.ambient().face(n, i).compiled();
                row.push(
                    pts[n].iter().map(|p| lookup(n - 1, f.apply(table, p), &format!("d{i}"))).collect::<Result<_>>()?,
                );
            }
            faces.push(row);
        }
        let mut degeneracies = Vec::with_capacity(top);
        for n in 0..top {
            let mut row = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let f = s.ambient().degeneracy(n, i).compiled();
                row.push(
                    pts[n].iter().map(|p| lookup(n + 1, f.apply(table, p), &format!("s{i}"))).collect::<Result<_>>()?,
                );
            }
            degeneracies.push(row);
        }
        FiniteSimplicialSet::new(pts.iter().map(|l| l.len()).collect(), faces, degeneracies)
    }

    /// Levelwise disjoint union.
    pub fn disjoint_union(&self, other: &FiniteSimplicialSet) -> Result<FiniteSimplicialSet> {
        let top = self.truncation().min(other.truncation());
        let sizes: Vec<usize> = (0..=top).map(|n| self.sizes[n] + other.sizes[n]).collect();
        let join = |a: &[usize], b: &[usize], shift: usize| -> Vec<usize> {
            a.iter().copied().chain(b.iter().map(|&y| y + shift)).collect()
        };
        let faces = (0..=top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..=n).map(|i| join(&self.faces[n][i], &other.faces[n][i], self.sizes[n - 1])).collect()
            })
            .collect();
        let degeneracies = (0..top)
            .map(|n| (0..=n).map(|i| join(&self.degeneracies[n][i], &other.degeneracies[n][i], self.sizes[n + 1])).collect())
            .collect();
        FiniteSimplicialSet::new(sizes, faces, degeneracies)
    }

    /// Levelwise cartesian product; element `(a, b)` has index `a * |B_n| + b`.
    pub fn product(&self, other: &FiniteSimplicialSet) -> Result<FiniteSimplicialSet> {
        let top = self.truncation().min(other.truncation());
        let sizes: Vec<usize> = (0..=top).map(|n| self.sizes[n] * other.sizes[n]).collect();
        let pair = |fa: &[usize], fb: &[usize], nb_src: usize, nb_tgt: usize| -> Vec<usize> {
            (0..fa.len() * nb_src).map(|x| fa[x / nb_src] * nb_tgt + fb[x % nb_src]).collect()
        };
        let faces = (0..=top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..=n)
                    .map(|i| pair(&self.faces[n][i], &other.faces[n][i], other.sizes[n], other.sizes[n - 1]))
                    .collect()
            })
            .collect();
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|i| {
                        pair(&self.degeneracies[n][i], &other.degeneracies[n][i], other.sizes[n], other.sizes[n + 1])
                    })
                    .collect()
            })
            .collect();
        FiniteSimplicialSet::new(sizes, faces, degeneracies)
    }

    /// Indices of level-`n` elements outside the images of the degeneracies.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.sizes[0]).collect();
        }
        let degenerate: HashSet<usize> = self.degeneracies[n - 1].iter().flatten().copied().collect();
        (0..self.sizes[n]).filter(|x| !degenerate.contains(x)).collect()
    }

    pub fn components(&self) -> usize {
        let n0 = self.sizes[0];
        let mut parent: Vec<usize> = (0..n0).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        if self.truncation() >= 1 {
            for e in 0..self.sizes[1] {
                let (a, b) = (find(&mut parent, self.d(1, 0, e)), find(&mut parent, self.d(1, 1, e)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n0).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.truncation())
            .map(|n| {
                let c = self.nondegenerate(n).len() as i64;
                if n % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Boundary of the normalized complex in degree `n`, rows indexed by
    /// the non-degenerate `(n-1)`-cells and columns by the `n`-cells.
    fn boundary_matrix(&self, n: usize) -> Vec<Vec<BigInt>> {
        let rows = self.nondegenerate(n - 1);
        let cols = self.nondegenerate(n);
        let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (c, &x) in cols.iter().enumerate() {
            for i in 0..=n {
                if let Some(&r) = row_of.get(&self.d(n, i, x)) {
                    if i % 2 == 0 {
                        m[r][c] += 1;
                    } else {
                        m[r][c] -= 1;
                    }
                }
            }
        }
        m
    }

    pub fn invariants(&self, caps: &Caps) -> Result<RealizationInvariants> {
        let top = self.truncation();
        let cells: usize = (0..=top).map(|n| self.nondegenerate(n).len()).sum();
        if cells > caps.max_cells {
            return Err(Error::CapExceeded(format!("{cells} non-degenerate cells (cap {})", caps.max_cells)));
        }
        // invariant factors of ∂_n for n = 1..=top
        let mut factors: Vec<Vec<BigInt>> = vec![Vec::new()];
        for n in 1..=top {
            factors.push(smith_diagonal(self.boundary_matrix(n)));
        }
        let mut homology = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let dim = self.nondegenerate(n).len();
            let rank_out = if n == 0 { 0 } else { factors[n].len() };
            let rank_in = if n == top { 0 } else { factors[n + 1].len() };
            let torsion: Vec<BigInt> =
                if n == top { Vec::new() } else { factors[n + 1].iter().filter(|d| !d.is_one()).cloned().collect() };
            homology.push(HomologyGroup { rank: dim - rank_out - rank_in, torsion });
        }
        let inv = RealizationInvariants {
            components: self.components(),
            euler_characteristic: self.euler_characteristic(),
            homology,
        };
        if inv.alternating_rank_sum() != inv.euler_characteristic {
            return Err(Error::Invalid("Euler characteristic disagrees with the homology ranks".into()));
        }
        Ok(inv)
    }
}

fn monotone_sequences(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, k: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            go(len, k, v, cur, out);
            cur.pop();
        }
    }
    go(len, k, 0, &mut cur, &mut out);
    out
}

/// Sorts a flat tuple of equally sized blocks.
fn sort_blocks(p: &[u32], width: usize) -> Vec<u32> {
    if width == 0 {
        return p.to_vec();
    }
    let mut blocks: Vec<&[u32]> = p.chunks(width).collect();
    blocks.sort();
    blocks.concat()
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&p);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&p);
                for row in m.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // pivot must divide the rest for the invariant-factor chain
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &p).is_zero()));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = m[i][j].clone();
                            m[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of the pivot row/column into place
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealizationInvariants {
    pub components: usize,
    pub euler_characteristic: i64,
    pub homology: Vec<HomologyGroup>,
}

impl RealizationInvariants {
    pub fn alternating_rank_sum(&self) -> i64 {
        self.homology
            .iter()
            .enumerate()
            .map(|(n, h)| if n % 2 == 0 { h.rank as i64 } else { -(h.rank as i64) })
            .sum()
    }

    /// Coarse homotopy key: equal keys are necessary, never sufficient,
    /// for homotopy equivalence of realizations.
    pub fn key(&self) -> HomotopyKey {
        let mut homology = self.homology.clone();
        while homology.last().is_some_and(|h| h.rank == 0 && h.torsion.is_empty()) {
            homology.pop();
        }
        HomotopyKey { components: self.components, euler_characteristic: self.euler_characteristic, homology }
    }
}

impl fmt::Display for RealizationInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.homology.iter().map(|g| g.to_string()).collect();
        write!(f, "components={} chi={} H=[{}]", self.components, self.euler_characteristic, h.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomotopyKey {
    pub components: usize,
    pub euler_characteristic: i64,
    pub homology: Vec<HomologyGroup>,
}

impl fmt::Display for HomotopyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.homology.iter().map(|g| g.to_string()).collect();
        write!(f, "({}, {}, [{}])", self.components, self.euler_characteristic, h.join(", "))
    }
}

/// Compares two realizations by key, always flagging that equal keys are
/// only evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyVerdict {
    Distinct(HomotopyKey, HomotopyKey),
    EqualKeys(HomotopyKey),
}

impl KeyVerdict {
    pub fn compare(a: &RealizationInvariants, b: &RealizationInvariants) -> KeyVerdict {
        let (ka, kb) = (a.key(), b.key());
        if ka == kb {
            KeyVerdict::EqualKeys(ka)
        } else {
            KeyVerdict::Distinct(ka, kb)
        }
    }
}

/// Outcome of [`preservation_check`], one flag per operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preservation {
    pub union: bool,
    pub intersection: bool,
    pub product: bool,
}

impl Preservation {
    pub fn holds(&self) -> bool {
        self.union && self.intersection && self.product
    }
}

/// Checks levelwise that evaluation sends `∪`, `∩` and `×` of sieves to the
/// set-level operations on their point sets.
pub fn preservation_check(
    a: &SimplicialSieve,
    b: &SimplicialSieve,
    m: &FatPointRef,
    caps: &Caps,
) -> Result<Preservation> {
    let u = a.union(b)?;
    let i = a.inter(b)?;
    let p = a.product(b)?;
    let mut out = Preservation { union: true, intersection: true, product: true };
    for n in 0..=u.truncation() {
        let pa: HashSet<Vec<u32>> = a.level_points(n, m, caps)?.into_iter().collect();
        let pb: HashSet<Vec<u32>> = b.level_points(n, m, caps)?.into_iter().collect();
        let pu: HashSet<Vec<u32>> = u.level_points(n, m, caps)?.into_iter().collect();
        let pi: HashSet<Vec<u32>> = i.level_points(n, m, caps)?.into_iter().collect();
        out.union &= pu == pa.union(&pb).cloned().collect();
        out.intersection &= pi == pa.intersection(&pb).cloned().collect();
        // product coordinates are those of `a` followed by those of `b`
        let pp: HashSet<Vec<u32>> = p.level_points(n, m, caps)?.into_iter().collect();
        let pairs: HashSet<Vec<u32>> =
            pa.iter().flat_map(|x| pb.iter().map(move |y| [x.as_slice(), y.as_slice()].concat())).collect();
        out.product &= pp == pairs;
    }
    Ok(out)
}

/// Euler characteristics of `a`, `b`, `a∪b`, `a∩b`, `a×b` at `m`.
pub fn euler_battery(
    a: &SimplicialSieve,
    b: &SimplicialSieve,
    m: &FatPointRef,
    caps: &Caps,
) -> Result<BTreeMap<&'static str, i64>> {
    let chi = |s: &SimplicialSieve| -> Result<i64> { Ok(FiniteSimplicialSet::from_sieve(s, m, caps)?.euler_characteristic()) };
    Ok(BTreeMap::from([
        ("a", chi(a)?),
        ("b", chi(b)?),
        ("union", chi(&a.union(b)?)?),
        ("inter", chi(&a.inter(b)?)?),
        ("product", chi(&a.product(b)?)?),
    ]))
}
