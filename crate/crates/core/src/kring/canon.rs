//! Canonical forms for conjunctions of sieve leaves.
//!
//! A conjunction `V(I) ∩ D(g_1) ∩ … ∩ im(φ_1) ∩ …` is turned into a product
//! of connected blocks times a power of `L`. Each connected component is
//! processed in isolation, with its variables kept in their original relative
//! order, so a product of two sieves canonicalizes to the product of the
//! canonical forms of its factors.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use crate::config::Caps;
use crate::error::Result;
use crate::fatpt::FatPointRef;
use crate::field::Field;
use crate::groebner::{groebner, reduce, Ideal};
use crate::poly::{Monomial, Poly, Ring, RingRef};
use crate::scheme::{AffineScheme, SchemeRef};
use crate::sieve::{ImageLeaf, SieveExpr, SieveNode};

/// Leaves of one conjunction over a common ring. The first `nbase`
/// variables are base coordinates: never eliminated, always kept together.
#[derive(Clone, Debug)]
pub(crate) struct Conj {
    pub ring: RingRef,
    pub nbase: usize,
    pub eqs: Vec<Poly>,
    pub opens: Vec<Poly>,
    pub images: Vec<ImageLeaf>,
}

/// Result of canonicalizing a nonempty conjunction.
#[derive(Clone, Debug)]
pub(crate) struct Canon {
    pub base: Option<Block>,
    pub blocks: Vec<Block>,
    pub lef: i64,
}

/// A connected piece of a canonical conjunction, compared by its key.
#[derive(Clone, Debug)]
pub struct Block {
    nbase: usize,
    ring: RingRef,
    eqs: Vec<Poly>,
    opens: Vec<Poly>,
    images: Vec<ImageLeaf>,
    key: Arc<str>,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.nbase == other.nbase && self.key == other.key
    }
}

impl Eq for Block {}

impl Hash for Block {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nbase.hash(state);
        self.key.hash(state);
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.nbase, &self.key).cmp(&(other.nbase, &other.key))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key)
    }
}

impl Block {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn nbase(&self) -> usize {
        self.nbase
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn equations(&self) -> &[Poly] {
        &self.eqs
    }

    /// The block as a plain sieve, base coordinates included.
    pub fn to_sieve(&self) -> Result<SieveExpr> {
        let ambient: SchemeRef =
            Arc::new(AffineScheme::new(format!("B{}", self.ring.nvars()), Ideal::new(&self.ring, self.eqs.clone())?)?);
        let mut leaves: Vec<SieveNode> = self.opens.iter().cloned().map(SieveNode::Open).collect();
        leaves.extend(self.images.iter().cloned().map(SieveNode::Image));
        SieveExpr::new(ambient, SieveNode::Inter(leaves))
    }

    pub(crate) fn conj(&self) -> Conj {
        Conj {
            ring: self.ring.clone(),
            nbase: self.nbase,
            eqs: self.eqs.clone(),
            opens: self.opens.clone(),
            images: self.images.clone(),
        }
    }

    /// `|block(m)|`, memoized per fat point.
    pub fn count(&self, m: &FatPointRef, caps: &Caps) -> Result<usize> {
        let id = (self.key.to_string(), self.nbase, format!("{}@{}", m, m.field()));
        if let Some(&n) = count_cache().lock().unwrap().get(&id) {
            return Ok(n);
        }
        let n = self.to_sieve()?.count(m, caps)?;
        count_cache().lock().unwrap().insert(id, n);
        Ok(n)
    }

    /// Point counts grouped by the base coordinates.
    pub fn fiber_counts(&self, m: &FatPointRef, caps: &Caps) -> Result<HashMap<Vec<u32>, usize>> {
        let d = m.length();
        let mut out = HashMap::new();
        for p in self.to_sieve()?.points(m, caps)? {
            *out.entry(p[..self.nbase * d].to_vec()).or_insert(0) += 1;
        }
        Ok(out)
    }
}

type CountKey = (String, usize, String);

fn count_cache() -> &'static Mutex<HashMap<CountKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<CountKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn block_cache() -> &'static Mutex<HashMap<(Field, usize, String), Block>> {
    static CACHE: OnceLock<Mutex<HashMap<(Field, usize, String), Block>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn ring_for(field: Field, nbase: usize, nothers: usize) -> RingRef {
    let names: Vec<String> =
        (0..nbase).map(|i| format!("s{i}")).chain((0..nothers).map(|i| format!("u{i}"))).collect();
    Ring::with_vars(field, &names)
}

fn image_key(leaf: &ImageLeaf, vars: &[String]) -> String {
    let imgs: Vec<String> = leaf.map.images().iter().map(|p| p.to_string()).collect();
    let slots: Vec<&str> = leaf.slots.iter().map(|&s| vars[s].as_str()).collect();
    format!("im({} -> {} by [{}] at [{}])", leaf.map.source(), leaf.map.target(), imgs.join(", "), slots.join(","))
}

/// Sorted, deduplicated, monic open generators reduced modulo `gb`;
/// `None` if one of them vanishes.
fn normalize_opens(opens: &[Poly], gb: &[Poly]) -> Option<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::new();
    for g in opens {
        let r = reduce(g, gb);
        if r.is_zero() {
            return None;
        }
        if r.is_constant() {
            continue;
        }
        let r = r.monic();
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out.sort_by_cached_key(|p| p.to_string());
    Some(out)
}

fn dedup_images(images: &mut Vec<ImageLeaf>) {
    let mut seen: Vec<ImageLeaf> = Vec::new();
    images.retain(|l| {
        if seen.contains(l) {
            false
        } else {
            seen.push(l.clone());
            true
        }
    });
}

/// Whether `V(eqs) ∩ D(∏ opens)` is empty, by the Rabinowitsch trick.
fn rabinowitsch_empty(ring: &RingRef, eqs: &[Poly], opens: &[Poly], caps: &Caps) -> Result<bool> {
    if opens.is_empty() {
        return Ok(false);
    }
    let mut names = ring.vars().to_vec();
    let mut y = "rab".to_string();
    while names.contains(&y) {
        y.push('_');
    }
    names.push(y);
    let big = Ring::new(ring.field(), names)?;
    let map: Vec<usize> = (0..ring.nvars()).collect();
    let mut gens: Vec<Poly> = eqs.iter().map(|e| e.embed(&big, &map)).collect();
    let mut prod = Poly::var(&big, ring.nvars());
    for g in opens {
        prod = prod.mul(&g.embed(&big, &map));
    }
    gens.push(Poly::one(&big).sub(&prod));
    let gb = groebner(&gens, &big, caps)?;
    Ok(gb.iter().any(|g| g.is_constant() && !g.is_zero()))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups variables that share an equation, an open or an image leaf.
/// Returns components in order of their smallest variable; unused variables
/// are reported separately.
fn components(c: &Conj) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = c.ring.nvars();
    let mut uf = UnionFind::new(n);
    let mut used = vec![false; n];
    let mut link = |vars: &[usize], uf: &mut UnionFind| {
        for &v in vars {
            used[v] = true;
        }
        for w in vars.windows(2) {
            uf.union(w[0], w[1]);
        }
    };
    for p in c.eqs.iter().chain(&c.opens) {
        link(&p.support(), &mut uf);
    }
    for l in &c.images {
        link(&l.slots, &mut uf);
    }
    let base: Vec<usize> = (0..c.nbase).collect();
    link(&base, &mut uf);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: HashMap<usize, usize> = HashMap::new();
    let mut free = Vec::new();
    for v in 0..n {
        if !used[v] {
            free.push(v);
            continue;
        }
        let r = uf.find(v);
        let idx = *root_of.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[idx].push(v);
    }
    (groups, free)
}

/// The conjunction restricted to `vars`, renumbered in their original order.
fn restrict(c: &Conj, vars: &[usize], nbase: usize) -> Conj {
    let n = c.ring.nvars();
    let mut map = vec![0usize; n];
    for (k, &v) in vars.iter().enumerate() {
        map[v] = k;
    }
    let ring = ring_for(c.ring.field(), nbase, vars.len() - nbase);
    let inside = |p: &Poly| p.support().iter().all(|v| vars.contains(v));
    Conj {
        eqs: c.eqs.iter().filter(|p| inside(p)).map(|p| p.embed(&ring, &map)).collect(),
        opens: c.opens.iter().filter(|p| inside(p)).map(|p| p.embed(&ring, &map)).collect(),
        images: c
            .images
            .iter()
            .filter(|l| !l.slots.is_empty() && l.slots.iter().all(|s| vars.contains(s)))
            .map(|l| ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| map[s]).collect() })
            .collect(),
        ring,
        nbase,
    }
}

/// A variable that some equation determines linearly: it occurs in the
/// equation only through a degree-one term, and is neither a base coordinate
/// nor an image slot.
fn linear_pivot(c: &Conj, protected: &[bool]) -> Option<(usize, usize)> {
    let n = c.ring.nvars();
    for (gi, g) in c.eqs.iter().enumerate() {
        for v in (0..n).rev() {
            if protected[v] {
                continue;
            }
            let lin = Monomial::var(n, v);
            let mut hit = false;
            let mut ok = true;
            for (m, _) in g.terms() {
                if m.0[v] > 0 {
                    if *m == lin {
                        hit = true;
                    } else {
                        ok = false;
                        break;
                    }
                }
            }
            if hit && ok {
                return Some((gi, v));
            }
        }
    }
    None
}

/// Eliminates linear variables, returning the reduced conjunction over the
/// surviving variables and the number of unconstrained ones.
fn eliminate(mut c: Conj, caps: &Caps) -> Result<Option<(Conj, Vec<usize>)>> {
    let n = c.ring.nvars();
    let field = c.ring.field();
    let mut protected = vec![false; n];
    for v in 0..c.nbase {
        protected[v] = true;
    }
    for l in &c.images {
        for &s in &l.slots {
            protected[s] = true;
        }
    }
    let mut alive = vec![true; n];
    c.eqs = groebner(&c.eqs, &c.ring, caps)?;
    while let Some((gi, v)) = linear_pivot(&c, &protected) {
        let g = c.eqs.remove(gi);
        let coef = g.coeff(&Monomial::var(n, v));
        let rest = g.sub(&Poly::monomial(&c.ring, Monomial::var(n, v), coef.clone()));
        let value = rest.scale(&field.neg(&field.inv(&coef)));
        let images: Vec<Poly> =
            (0..n).map(|k| if k == v { value.clone() } else { Poly::var(&c.ring, k) }).collect();
        c.eqs = c.eqs.iter().map(|e| e.compose(&images, &c.ring)).filter(|e| !e.is_zero()).collect();
        c.opens = c.opens.iter().map(|e| e.compose(&images, &c.ring)).collect();
        alive[v] = false;
        protected[v] = true;
        c.eqs = groebner(&c.eqs, &c.ring, caps)?;
    }
    if c.eqs.iter().any(|g| g.is_constant()) {
        return Ok(None);
    }
    match normalize_opens(&c.opens, &c.eqs) {
        Some(o) => c.opens = o,
        None => return Ok(None),
    }
    let survivors = (0..n).filter(|&v| alive[v]).collect();
    Ok(Some((c, survivors)))
}

pub(crate) fn canonicalize(mut c: Conj, caps: &Caps) -> Result<Option<Canon>> {
    c.eqs = groebner(&c.eqs, &c.ring, caps)?;
    if c.eqs.iter().any(|g| g.is_constant()) {
        return Ok(None);
    }
    c.opens = match normalize_opens(&c.opens, &c.eqs) {
        Some(o) => o,
        None => return Ok(None),
    };
    if rabinowitsch_empty(&c.ring, &c.eqs, &c.opens, caps)? {
        return Ok(None);
    }
    dedup_images(&mut c.images);

    let mut out = Canon { base: None, blocks: Vec::new(), lef: 0 };
    // image leaves on no coordinates are conditions on Spec k alone
    for l in c.images.iter().filter(|l| l.slots.is_empty()) {
        let ring = ring_for(c.ring.field(), 0, 0);
        let leaf = Conj { ring, nbase: 0, eqs: vec![], opens: vec![], images: vec![l.clone()] };
        out.blocks.push(make_block(&leaf, caps)?);
    }
    let (groups, free) = components(&c);
    out.lef += free.iter().filter(|&&v| v >= c.nbase).count() as i64;
    for group in groups {
        let nbase = if group.first().is_some_and(|&v| v < c.nbase) { c.nbase } else { 0 };
        let part = restrict(&c, &group, nbase);
        let Some((reduced, survivors)) = eliminate(part, caps)? else {
            return Ok(None);
        };
        let reduced = restrict(&reduced, &survivors, nbase);
        let (sub, free) = components(&reduced);
        out.lef += free.iter().filter(|&&v| v >= nbase).count() as i64;
        for g in sub {
            let nb = if g.first().is_some_and(|&v| v < nbase) { nbase } else { 0 };
            let block = make_block(&restrict(&reduced, &g, nb), caps)?;
            if nb > 0 {
                out.base = Some(block);
            } else {
                out.blocks.push(block);
            }
        }
    }
    if c.nbase > 0 && out.base.is_none() {
        // base coordinates with no condition at all
        let ring = ring_for(c.ring.field(), c.nbase, 0);
        let empty = Conj { ring, nbase: c.nbase, eqs: vec![], opens: vec![], images: vec![] };
        out.base = Some(make_block(&empty, caps)?);
    }
    out.blocks.sort();
    Ok(Some(out))
}

/// Renders the block under a permutation of its non-base variables.
fn render(c: &Conj, perm: &[usize], caps: &Caps) -> Result<(String, Conj)> {
    let n = c.ring.nvars();
    let map: Vec<usize> = (0..n).map(|v| if v < c.nbase { v } else { c.nbase + perm[v - c.nbase] }).collect();
    let ring = c.ring.clone();
    let eqs: Vec<Poly> = c.eqs.iter().map(|p| p.embed(&ring, &map)).collect();
    let eqs = groebner(&eqs, &ring, caps)?;
    let opens: Vec<Poly> = c.opens.iter().map(|p| p.embed(&ring, &map)).collect();
    let opens = normalize_opens(&opens, &eqs).unwrap_or_default();
    let mut images: Vec<ImageLeaf> = c
        .images
        .iter()
        .map(|l| ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| map[s]).collect() })
        .collect();
    let vars = ring.vars();
    images.sort_by_cached_key(|l| image_key(l, vars));

    let mut parts = Vec::new();
    if !eqs.is_empty() {
        let e: Vec<String> = eqs.iter().map(|p| p.to_string()).collect();
        parts.push(format!("V({})", e.join(", ")));
    }
    parts.extend(opens.iter().map(|g| format!("D({g})")));
    parts.extend(images.iter().map(|l| image_key(l, vars)));
    let head = if c.nbase > 0 && c.nbase < n {
        format!("{}; {}", vars[..c.nbase].join(","), vars[c.nbase..].join(","))
    } else {
        vars.join(",")
    };
    let key = if parts.is_empty() { head } else { format!("{head} | {}", parts.join(" & ")) };
    Ok((key, Conj { ring, nbase: c.nbase, eqs, opens, images }))
}

fn make_block(c: &Conj, caps: &Caps) -> Result<Block> {
    let nothers = c.ring.nvars() - c.nbase;
    let identity: Vec<usize> = (0..nothers).collect();
    let (first, first_conj) = render(c, &identity, caps)?;
    let id = (c.ring.field(), c.nbase, first.clone());
    if let Some(b) = block_cache().lock().unwrap().get(&id) {
        return Ok(b.clone());
    }
    let mut best = (first, first_conj);
    if nothers > 1 && nothers <= caps.exhaustive_block_vars {
        for perm in (0..nothers).permutations(nothers).skip(1) {
            let cand = render(c, &perm, caps)?;
            if cand.0 < best.0 {
                best = cand;
            }
        }
    }
    let (key, conj) = best;
    let block = Block {
        nbase: c.nbase,
        ring: conj.ring,
        eqs: conj.eqs,
        opens: conj.opens,
        images: conj.images,
        key: Arc::from(key.as_str()),
    };
    block_cache().lock().unwrap().insert(id, block.clone());
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(field: Field, vars: &[&str], eqs: &[&str], opens: &[&str]) -> Conj {
        let ring = Ring::with_vars(field, vars);
        Conj {
            eqs: eqs.iter().map(|e| Poly::parse(&ring, e).unwrap()).collect(),
            opens: opens.iter().map(|e| Poly::parse(&ring, e).unwrap()).collect(),
            images: vec![],
            nbase: 0,
            ring,
        }
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn empty_conjunctions_vanish() {
        let f = Field::Prime(3);
        assert!(canonicalize(conj(f, &["x"], &["x", "x - 1"], &[]), &caps()).unwrap().is_none());
        assert!(canonicalize(conj(f, &["x"], &["x"], &["x"]), &caps()).unwrap().is_none());
        // x y = 1 with y = 0 forced through the open on x*y - 1
        assert!(canonicalize(conj(f, &["x", "y"], &["x^2"], &["x + 0*y"]), &caps()).unwrap().is_none());
        assert!(canonicalize(conj(f, &["x", "y"], &["x*y - 1"], &[]), &caps()).unwrap().is_some());
    }

    #[test]
    fn linear_equations_are_eliminated() {
        let f = Field::Rationals;
        let c = canonicalize(conj(f, &["x", "y", "z"], &["x - y^2", "z - 3"], &[]), &caps()).unwrap().unwrap();
        assert!(c.blocks.is_empty());
        assert_eq!(c.lef, 1);
        let point = canonicalize(conj(f, &["x"], &["2*x - 1"], &[]), &caps()).unwrap().unwrap();
        assert!(point.blocks.is_empty() && point.lef == 0);
    }

    #[test]
    fn blocks_are_invariant_under_renaming() {
        let f = Field::Prime(2);
        let a = canonicalize(conj(f, &["x", "y"], &["x^2 - y^3"], &[]), &caps()).unwrap().unwrap();
        let b = canonicalize(conj(f, &["p", "q"], &["q^2 - p^3"], &[]), &caps()).unwrap().unwrap();
        assert_eq!(a.blocks, b.blocks);
        let c = canonicalize(conj(f, &["x", "y", "z"], &["x^2", "z^3 - y*z"], &["y"]), &caps()).unwrap().unwrap();
        assert_eq!(c.blocks.len(), 2);
    }

    #[test]
    fn base_block_collects_the_base() {
        let f = Field::Prime(3);
        let ring = Ring::with_vars(f, &["s", "x", "y"]);
        let c = Conj {
            eqs: vec![Poly::parse(&ring, "s - x^2").unwrap(), Poly::parse(&ring, "y^2 - y").unwrap()],
            opens: vec![],
            images: vec![],
            nbase: 1,
            ring,
        };
        let out = canonicalize(c, &caps()).unwrap().unwrap();
        let base = out.base.unwrap();
        assert_eq!(base.nbase(), 1);
        assert_eq!(base.nvars(), 2);
        assert_eq!(out.blocks.len(), 1);
    }
}
