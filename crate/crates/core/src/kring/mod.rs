//! Grothendieck rings of motivic sites.
//!
//! A class is a finite integer combination of monomials. A monomial is a
//! sorted product of canonical blocks times `L^z` and, in a ring relative
//! to a base `S`, one distinguished block carrying the base coordinates.
//! Unions are removed by inclusion–exclusion before canonicalization, so
//! every class value is already in normal form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::FatPointRef;
use crate::field::Field;
use crate::poly::{Poly, Ring};
use crate::scheme::SchemeRef;
use crate::sieve::{ImageLeaf, RelativeSieve, SieveExpr, SieveNode};

mod adjoint;
mod canon;
mod relative;
mod simplicial;

pub use adjoint::{f_adjunction_check, tau_adjunction_check, AdjunctionReport};
pub use canon::Block;
pub use relative::{pushforward_pullback_check, PushPull};
pub use simplicial::{SimplicialClass, SimplicialKRing, SiteRegistry};

use canon::{canonicalize, Conj};

/// `base · blocks · L^lef`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KMonomial {
    base: Option<Block>,
    blocks: Vec<Block>,
    lef: i64,
}

impl KMonomial {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn base_block(&self) -> Option<&Block> {
        self.base.as_ref()
    }

    pub fn lefschetz_exponent(&self) -> i64 {
        self.lef
    }

    fn times_absolute(&self, other: &KMonomial) -> KMonomial {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        blocks.sort();
        KMonomial { base: self.base.clone(), blocks, lef: self.lef + other.lef }
    }
}

/// The base of a relative ring together with its unit block.
#[derive(Clone, Debug)]
pub struct RelBase {
    scheme: SchemeRef,
    unit: Block,
}

impl RelBase {
    pub fn scheme(&self) -> &SchemeRef {
        &self.scheme
    }
}

impl PartialEq for RelBase {
    fn eq(&self, other: &Self) -> bool {
        self.scheme.same_presentation(&other.scheme)
    }
}

/// An element of `K(M)[L^{-1}]`, or of `K(M_S)[L^{-1}]` when `base` is set.
#[derive(Clone, Debug)]
pub struct KClass {
    field: Field,
    base: Option<Arc<RelBase>>,
    terms: BTreeMap<KMonomial, BigInt>,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.base == other.base && self.terms == other.terms
    }
}

impl KClass {
    pub fn zero(field: Field) -> KClass {
        KClass { field, base: None, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> KClass {
        KClass::lefschetz(field, 0)
    }

    /// `L^z`; negative exponents are formal inverses.
    pub fn lefschetz(field: Field, z: i64) -> KClass {
        let mut terms = BTreeMap::new();
        terms.insert(KMonomial { base: None, blocks: Vec::new(), lef: z }, BigInt::one());
        KClass { field, base: None, terms }
    }

    pub fn integer(field: Field, n: i64) -> KClass {
        KClass::one(field).scale(&BigInt::from(n))
    }

    /// `[s]`, with unions expanded by inclusion–exclusion.
    pub fn of_sieve(s: &SieveExpr, caps: &Caps) -> Result<KClass> {
        let amb = s.ambient();
        let base = Conj {
            ring: amb.ring().clone(),
            nbase: 0,
            eqs: amb.equations().to_vec(),
            opens: Vec::new(),
            images: Vec::new(),
        };
        let mut out = KClass::zero(amb.field());
        expand(s.node(), &base, &mut out, None, caps)?;
        Ok(out)
    }

    pub fn of_scheme(x: &SchemeRef, caps: &Caps) -> Result<KClass> {
        KClass::of_sieve(&SieveExpr::full(x.clone()), caps)
    }

    /// The unit `[S → S]` of the ring relative to `S`.
    pub fn unit_over(s: &SchemeRef, caps: &Caps) -> Result<KClass> {
        let rb = rel_base(s, caps)?;
        let mut terms = BTreeMap::new();
        terms.insert(KMonomial { base: Some(rb.unit.clone()), blocks: Vec::new(), lef: 0 }, BigInt::one());
        Ok(KClass { field: s.field(), base: Some(rb), terms })
    }

    pub fn zero_over(s: &SchemeRef, caps: &Caps) -> Result<KClass> {
        Ok(KClass { field: s.field(), base: Some(rel_base(s, caps)?), terms: BTreeMap::new() })
    }

    /// `[X → S]` for a sieve with its structure morphism.
    pub fn of_relative(x: &RelativeSieve, caps: &Caps) -> Result<KClass> {
        let s = x.base();
        let rb = rel_base(s, caps)?;
        let conj = graph_conj(x, s)?;
        let d = s.nvars();
        let shift: Vec<usize> = (0..x.sieve().ambient().nvars()).map(|i| d + i).collect();
        let node = shift_node(x.sieve().node(), &conj.ring, &shift);
        let mut out = KClass { field: s.field(), base: Some(rb.clone()), terms: BTreeMap::new() };
        expand(&node, &conj, &mut out, Some(&rb), caps)?;
        Ok(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn base(&self) -> Option<&SchemeRef> {
        self.base.as_ref().map(|b| &b.scheme)
    }

    pub fn is_relative(&self) -> bool {
        self.base.is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The unit of the ring this class lives in.
    pub fn unit_like(&self) -> KClass {
        match &self.base {
            None => KClass::one(self.field),
            Some(rb) => {
                let mut terms = BTreeMap::new();
                terms.insert(KMonomial { base: Some(rb.unit.clone()), blocks: Vec::new(), lef: 0 }, BigInt::one());
                KClass { field: self.field, base: Some(rb.clone()), terms }
            }
        }
    }

    fn zero_like(&self) -> KClass {
        KClass { field: self.field, base: self.base.clone(), terms: BTreeMap::new() }
    }

    fn compatible(&self, other: &KClass) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        match (&self.base, &other.base) {
            (None, None) => Ok(()),
            (Some(a), Some(b)) if a == b => Ok(()),
            (a, b) => Err(Error::BaseMismatch(format!(
                "{} vs {}",
                a.as_ref().map_or("Spec k".to_string(), |r| r.scheme.to_string()),
                b.as_ref().map_or("Spec k".to_string(), |r| r.scheme.to_string())
            ))),
        }
    }

    fn add_term(&mut self, m: KMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &KClass) -> Result<KClass> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KClass) -> Result<KClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KClass {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> KClass {
        let mut out = self.zero_like();
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    /// `self · L^z`.
    pub fn shift(&self, z: i64) -> KClass {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.lef += z;
            out.terms.insert(m, c.clone());
        }
        out
    }

    /// Product; in a relative ring this is the fiber product over the base.
    pub fn mul(&self, other: &KClass, caps: &Caps) -> Result<KClass> {
        self.compatible(other)?;
        let mut out = self.zero_like();
        let mut cache: HashMap<(Block, Block), Option<(Block, Vec<Block>, i64)>> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match (&ma.base, &mb.base) {
                    (None, None) => out.add_term(ma.times_absolute(mb), c),
                    (Some(ba), Some(bb)) => {
                        let key = (ba.clone(), bb.clone());
                        if !cache.contains_key(&key) {
                            let merged = merge_bases(ba, bb, caps)?;
                            cache.insert(key.clone(), merged);
                        }
                        if let Some((base, extra, lef)) = &cache[&key] {
                            let mut blocks = ma.blocks.clone();
                            blocks.extend(mb.blocks.iter().cloned());
                            blocks.extend(extra.iter().cloned());
                            blocks.sort();
                            let m = KMonomial { base: Some(base.clone()), blocks, lef: ma.lef + mb.lef + lef };
                            out.add_term(m, c);
                        }
                    }
                    _ => unreachable!("compatible classes share their base"),
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32, caps: &Caps) -> Result<KClass> {
        let mut acc = self.unit_like();
        for _ in 0..e {
            acc = acc.mul(self, caps)?;
        }
        Ok(acc)
    }

    /// Rebuilds every block from its own sieve; the result must coincide
    /// with `self` (normal forms are fixed points).
    pub fn renormalize(&self, caps: &Caps) -> Result<KClass> {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let mut acc = match &m.base {
                None => KClass::lefschetz(self.field, m.lef),
                Some(b) => {
                    let rb = self.base.as_ref().expect("relative class").clone();
                    let mut cls = KClass { field: self.field, base: Some(rb.clone()), terms: BTreeMap::new() };
                    expand(&SieveNode::Full, &b.conj(), &mut cls, Some(&rb), caps)?;
                    cls.shift(m.lef)
                }
            };
            for b in &m.blocks {
                let mut cls = KClass::of_sieve(&b.to_sieve()?, caps)?;
                cls.base = acc.base.clone();
                if let Some(rb) = &acc.base {
                    // absolute factor inside a relative ring: X ×_k S
                    cls = lift_absolute(&cls, rb);
                }
                acc = acc.mul(&cls, caps)?;
            }
            out = out.add(&acc.scale(c))?;
        }
        Ok(out)
    }

    /// The counting homomorphism at a finite-field fat point: blocks are
    /// counted by enumeration and `L` by `|O_m| = q^ℓ`. Relative classes are
    /// counted on total spaces; see [`KClass::counting_fibers`] for the
    /// fiberwise version that is multiplicative over the base.
    pub fn counting(&self, m: &FatPointRef, caps: &Caps) -> Result<BigRational> {
        if self.base.is_some() {
            let fibers = self.counting_fibers(m, caps)?;
            return Ok(fibers.values().fold(BigRational::zero(), |a, b| a + b));
        }
        let ql = lefschetz_count(m)?;
        let mut total = BigRational::zero();
        for (mono, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            for b in &mono.blocks {
                v *= BigRational::from_integer(BigInt::from(b.count(m, caps)?));
                if v.is_zero() {
                    break;
                }
            }
            v *= rational_pow(&ql, mono.lef);
            total += v;
        }
        Ok(total)
    }

    /// Counts over each `m`-point of the base; only points with a nonzero
    /// value are listed.
    pub fn counting_fibers(&self, m: &FatPointRef, caps: &Caps) -> Result<BTreeMap<Vec<u32>, BigRational>> {
        let ql = lefschetz_count(m)?;
        let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut scale = BigRational::from_integer(c.clone()) * rational_pow(&ql, mono.lef);
            for b in &mono.blocks {
                scale *= BigRational::from_integer(BigInt::from(b.count(m, caps)?));
            }
            if scale.is_zero() {
                continue;
            }
            let fibers: HashMap<Vec<u32>, usize> = match &mono.base {
                Some(b) => b.fiber_counts(m, caps)?,
                None => HashMap::from([(Vec::new(), 1)]),
            };
            for (s, n) in fibers {
                let e = out.entry(s).or_insert_with(BigRational::zero);
                *e += &scale * BigRational::from_integer(BigInt::from(n));
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Integer value of the counting homomorphism, if it is one.
    pub fn count_integer(&self, m: &FatPointRef, caps: &Caps) -> Result<Option<BigInt>> {
        let v = self.counting(m, caps)?;
        Ok(v.is_integer().then(|| v.to_integer()))
    }

    /// Largest and smallest Lefschetz exponents present.
    pub fn lefschetz_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.lef);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), z| (lo.min(z), hi.max(z))))
    }

    /// `Some(z)` when the class is exactly `L^z`.
    pub fn as_lefschetz_power(&self) -> Option<i64> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let unit_base = match (&m.base, &self.base) {
            (None, None) => true,
            (Some(b), Some(rb)) => *b == rb.unit,
            _ => false,
        };
        (unit_base && m.blocks.is_empty() && c.is_one()).then_some(m.lef)
    }

    /// Integer multiples of the unit.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let scalar = self.unit_like();
        let (um, _) = scalar.terms.iter().next().unwrap();
        (m == um).then(|| c.clone())
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let unit = self.base.as_ref().map(|rb| &rb.unit);
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            if let Some(b) = &m.base {
                if Some(b) == unit {
                    factors.push("[S]".into());
                } else {
                    factors.push(format!("[S| {}]", b.key()));
                }
            }
            factors.extend(m.blocks.iter().map(|b| b.to_string()));
            match m.lef {
                0 => {}
                1 => factors.push("L".into()),
                z => factors.push(format!("L^{z}")),
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let only_unit = factors.is_empty() || (factors.len() == 1 && factors[0] == "[S]");
            if only_unit {
                if mag.is_one() && factors.is_empty() {
                    write!(f, "1")?;
                } else if mag.is_one() {
                    write!(f, "{}", factors[0])?;
                } else if factors.is_empty() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "{mag}*{}", factors[0])?;
                }
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn lefschetz_count(m: &FatPointRef) -> Result<BigRational> {
    let q = m.field().order().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
    Ok(BigRational::from_integer(BigInt::from(q).pow(m.length() as u32)))
}

fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

fn rel_base(s: &SchemeRef, caps: &Caps) -> Result<Arc<RelBase>> {
    let ring = s.ring().clone();
    let conj = Conj { ring, nbase: s.nvars(), eqs: s.equations().to_vec(), opens: vec![], images: vec![] };
    let canon = canonicalize(conj, caps)?.ok_or_else(|| Error::Invalid(format!("base {s} is empty")))?;
    if !canon.blocks.is_empty() || canon.lef != 0 {
        return Err(Error::Invalid("base canonicalization produced extra factors".into()));
    }
    Ok(Arc::new(RelBase { scheme: s.clone(), unit: canon.base.expect("base block") }))
}

/// `S × X` cut out by `s = j(x)` and the equations of both.
fn graph_conj(x: &RelativeSieve, s: &SchemeRef) -> Result<Conj> {
    let amb = x.sieve().ambient();
    let d = s.nvars();
    let names: Vec<String> =
        (0..d).map(|i| format!("s{i}")).chain((0..amb.nvars()).map(|i| format!("x{i}"))).collect();
    let ring = Ring::new(s.field(), names)?;
    let base_map: Vec<usize> = (0..d).collect();
    let shift: Vec<usize> = (0..amb.nvars()).map(|i| d + i).collect();
    let mut eqs: Vec<Poly> = s.equations().iter().map(|e| e.embed(&ring, &base_map)).collect();
    eqs.extend(amb.equations().iter().map(|e| e.embed(&ring, &shift)));
    for (i, j) in x.structure().images().iter().enumerate() {
        eqs.push(Poly::var(&ring, i).sub(&j.embed(&ring, &shift)));
    }
    Ok(Conj { ring, nbase: d, eqs, opens: vec![], images: vec![] })
}

fn shift_node(node: &SieveNode, ring: &crate::poly::RingRef, shift: &[usize]) -> SieveNode {
    match node {
        SieveNode::Closed(eqs) => SieveNode::Closed(eqs.iter().map(|e| e.embed(ring, shift)).collect()),
        SieveNode::Open(g) => SieveNode::Open(g.embed(ring, shift)),
        SieveNode::Image(l) => {
            SieveNode::Image(ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| shift[s]).collect() })
        }
        SieveNode::Union(xs) => SieveNode::Union(xs.iter().map(|x| shift_node(x, ring, shift)).collect()),
        SieveNode::Inter(xs) => SieveNode::Inter(xs.iter().map(|x| shift_node(x, ring, shift)).collect()),
        other => other.clone(),
    }
}

/// `X ×_k S` as a class over `S`.
fn lift_absolute(c: &KClass, rb: &Arc<RelBase>) -> KClass {
    let mut out = KClass { field: c.field, base: Some(rb.clone()), terms: BTreeMap::new() };
    for (m, k) in &c.terms {
        let mut m = m.clone();
        m.base = Some(rb.unit.clone());
        out.add_term(m, k.clone());
    }
    out
}

/// Joins two base blocks along the base coordinates.
fn merge_bases(a: &Block, b: &Block, caps: &Caps) -> Result<Option<(Block, Vec<Block>, i64)>> {
    let (ca, cb) = (a.conj(), b.conj());
    let d = ca.nbase;
    let na = ca.ring.nvars() - d;
    let nb = cb.ring.nvars() - d;
    let names: Vec<String> = (0..d)
        .map(|i| format!("s{i}"))
        .chain((0..na).map(|i| format!("a{i}")))
        .chain((0..nb).map(|i| format!("b{i}")))
        .collect();
    let ring = Ring::new(a.field(), names)?;
    let map_a: Vec<usize> = (0..d + na).collect();
    let map_b: Vec<usize> = (0..d).chain((0..nb).map(|i| d + na + i)).collect();
    let emb = |p: &Poly, map: &[usize]| p.embed(&ring, map);
    let mut eqs: Vec<Poly> = ca.eqs.iter().map(|p| emb(p, &map_a)).collect();
    eqs.extend(cb.eqs.iter().map(|p| emb(p, &map_b)));
    let mut opens: Vec<Poly> = ca.opens.iter().map(|p| emb(p, &map_a)).collect();
    opens.extend(cb.opens.iter().map(|p| emb(p, &map_b)));
    let mut images: Vec<ImageLeaf> = ca
        .images
        .iter()
        .map(|l| ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| map_a[s]).collect() })
        .collect();
    images.extend(
        cb.images
            .iter()
            .map(|l| ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| map_b[s]).collect() }),
    );
    let conj = Conj { ring, nbase: d, eqs, opens, images };
    Ok(canonicalize(conj, caps)?.map(|c| (c.base.expect("base block"), c.blocks, c.lef)))
}

/// Disjunctive normal form: a list of conjunctions of leaves.
fn dnf(node: &SieveNode, caps: &Caps) -> Result<Vec<Vec<SieveNode>>> {
    Ok(match node {
        SieveNode::Full => vec![vec![]],
        SieveNode::Empty => vec![],
        SieveNode::Union(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(dnf(x, caps)?);
            }
            out
        }
        SieveNode::Inter(xs) => {
            let mut acc = vec![vec![]];
            for x in xs {
                let d = dnf(x, caps)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &d {
                        let mut c: Vec<SieveNode> = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
                if acc.len() > caps.max_union_terms {
                    return Err(Error::CapExceeded(format!(
                        "disjunctive form has more than {} conjunctions",
                        caps.max_union_terms
                    )));
                }
            }
            acc
        }
        leaf => vec![vec![leaf.clone()]],
    })
}

fn conj_with(base: &Conj, leaves: &[&SieveNode]) -> Conj {
    let mut c = base.clone();
    for leaf in leaves {
        match leaf {
            SieveNode::Closed(eqs) => c.eqs.extend(eqs.iter().cloned()),
            SieveNode::Open(g) => c.opens.push(g.clone()),
            SieveNode::Image(l) => c.images.push(l.clone()),
            _ => unreachable!("dnf leaves are atomic"),
        }
    }
    c
}

/// Inclusion–exclusion over the disjuncts; subsets whose intersection is
/// already empty are pruned together with all their supersets.
fn expand(node: &SieveNode, base: &Conj, out: &mut KClass, rel: Option<&Arc<RelBase>>, caps: &Caps) -> Result<()> {
    let disjuncts = dnf(&node.simplify(), caps)?;
    if disjuncts.len() > caps.max_union_terms {
        return Err(Error::CapExceeded(format!("union of {} terms", disjuncts.len())));
    }
    let mut stack: Vec<(usize, Vec<usize>)> = (0..disjuncts.len()).map(|i| (i, vec![i])).collect();
    stack.reverse();
    while let Some((last, subset)) = stack.pop() {
        let leaves: Vec<&SieveNode> = subset.iter().flat_map(|&i| disjuncts[i].iter()).collect();
        let Some(canon) = canonicalize(conj_with(base, &leaves), caps)? else {
            continue;
        };
        let sign = if subset.len() % 2 == 1 { 1 } else { -1 };
        let m = KMonomial { base: canon.base, blocks: canon.blocks, lef: canon.lef };
        if let (Some(rb), None) = (rel, &m.base) {
            return Err(Error::Invalid(format!("relative symbol over {} lost its base", rb.scheme)));
        }
        out.add_term(m, BigInt::from(sign));
        for next in (last + 1..disjuncts.len()).rev() {
            let mut s = subset.clone();
            s.push(next);
            stack.push((next, s));
        }
    }
    Ok(())
}

/// Signed union count check used by tests and reports: `[a∪b] + [a∩b] − [a] − [b]`.
pub fn scissor_defect(a: &SieveExpr, b: &SieveExpr, caps: &Caps) -> Result<KClass> {
    let u = KClass::of_sieve(&a.union(b)?, caps)?;
    let i = KClass::of_sieve(&a.inter(b)?, caps)?;
    u.add(&i)?.sub(&KClass::of_sieve(a, caps)?)?.sub(&KClass::of_sieve(b, caps)?)
}

/// Small helper for reports: the value of an integral count as `i64`.
pub fn small_integer(v: &BigRational) -> Option<i64> {
    v.is_integer().then(|| v.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpt::FatPoint;
    use crate::scheme::AffineScheme;

    fn caps() -> Caps {
        Caps::default()
    }

    fn line(f: Field) -> SchemeRef {
        Arc::new(AffineScheme::affine_space(f, 1))
    }

    #[test]
    fn distinguished_classes() {
        let f = Field::Prime(3);
        let x = line(f);
        assert!(KClass::of_sieve(&SieveExpr::empty(x.clone()), &caps()).unwrap().is_zero());
        let pt: SchemeRef = Arc::new(AffineScheme::point(f));
        assert_eq!(KClass::of_scheme(&pt, &caps()).unwrap(), KClass::one(f));
        let two = SieveExpr::parse_closed(x.clone(), &["x"])
            .unwrap()
            .union(&SieveExpr::parse_closed(x.clone(), &["x - 1"]).unwrap())
            .unwrap();
        assert_eq!(KClass::of_sieve(&two, &caps()).unwrap(), KClass::integer(f, 2));
        assert_eq!(KClass::of_scheme(&x, &caps()).unwrap(), KClass::lefschetz(f, 1));
        let plane: SchemeRef = Arc::new(AffineScheme::affine_space(f, 2));
        let l = KClass::of_scheme(&x, &caps()).unwrap();
        assert_eq!(l.mul(&l, &caps()).unwrap(), KClass::of_scheme(&plane, &caps()).unwrap());
        assert_eq!(
            KClass::lefschetz(f, 1).mul(&KClass::lefschetz(f, -1), &caps()).unwrap(),
            KClass::one(f)
        );
    }

    #[test]
    fn counting_examples() {
        let f2 = Field::Prime(2);
        let m = Arc::new(FatPoint::jet(f2, "t", 2).unwrap());
        assert_eq!(KClass::lefschetz(f2, 1).counting(&m, &caps()).unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(KClass::one(f2).counting(&m, &caps()).unwrap(), BigRational::one());
        let f3 = Field::Prime(3);
        let x = line(f3);
        let two = SieveExpr::parse_closed(x.clone(), &["x"])
            .unwrap()
            .union(&SieveExpr::parse_closed(x, &["x - 1"]).unwrap())
            .unwrap();
        let pt = Arc::new(FatPoint::point(f3));
        assert_eq!(
            KClass::of_sieve(&two, &caps()).unwrap().counting(&pt, &caps()).unwrap(),
            BigRational::from_integer(2.into())
        );
        let half = KClass::lefschetz(f2, -1).counting(&m, &caps()).unwrap();
        assert_eq!(half, BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn counting_matches_enumeration() {
        let f = Field::Prime(3);
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f, &["x", "y"], &[]).unwrap());
        let cusp = SieveExpr::parse_closed(plane.clone(), &["y^2 - x^3"]).unwrap();
        let axis = SieveExpr::parse_open(plane.clone(), "x*y - 1").unwrap();
        let s = cusp.union(&axis).unwrap();
        let cls = KClass::of_sieve(&s, &caps()).unwrap();
        for m in [Arc::new(FatPoint::point(f)), Arc::new(FatPoint::jet(f, "t", 2).unwrap())] {
            let n = s.count(&m, &caps()).unwrap();
            assert_eq!(cls.counting(&m, &caps()).unwrap(), BigRational::from_integer(n.into()));
        }
        assert!(scissor_defect(&cusp, &axis, &caps()).unwrap().is_zero());
    }

    #[test]
    fn display_forms() {
        let f = Field::Prime(2);
        assert_eq!(KClass::zero(f).to_string(), "0");
        assert_eq!(KClass::integer(f, -3).to_string(), "-3");
        let c = KClass::lefschetz(f, 2).sub(&KClass::lefschetz(f, -1)).unwrap();
        assert_eq!(c.to_string(), "-L^-1 + L^2");
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f, &["x", "y"], &[]).unwrap());
        let node = KClass::of_sieve(&SieveExpr::parse_closed(plane, &["x*y"]).unwrap(), &caps()).unwrap();
        assert_eq!(node.to_string(), "[u0,u1 | V(u0*u1)]");
    }

    #[test]
    fn renormalize_is_identity() {
        let f = Field::Prime(3);
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f, &["x", "y"], &[]).unwrap());
        let s = SieveExpr::parse_closed(plane.clone(), &["x^2 - y^3"])
            .unwrap()
            .inter(&SieveExpr::parse_open(plane, "x").unwrap())
            .unwrap();
        let c = KClass::of_sieve(&s, &caps()).unwrap().shift(2).sub(&KClass::integer(f, 5)).unwrap();
        assert_eq!(c.renormalize(&caps()).unwrap(), c);
    }

    #[test]
    fn relative_unit_and_products() {
        let f = Field::Prime(2);
        let s = line(f);
        let plane: SchemeRef = Arc::new(AffineScheme::parse("P", f, &["x", "y"], &[]).unwrap());
        let a = RelativeSieve::over_product(&s, SieveExpr::parse_closed(plane.clone(), &["y^2 - x"]).unwrap()).unwrap();
        let ca = KClass::of_relative(&a, &caps()).unwrap();
        let unit = KClass::unit_over(&s, &caps()).unwrap();
        assert_eq!(ca.mul(&unit, &caps()).unwrap(), ca);
        assert_eq!(unit.mul(&ca, &caps()).unwrap(), ca);
        assert_eq!(unit.to_string(), "[S]");
        let id = RelativeSieve::unit(s.clone());
        assert_eq!(KClass::of_relative(&id, &caps()).unwrap(), unit);

        // fiberwise counting is multiplicative
        let b = RelativeSieve::over_product(&s, SieveExpr::parse_open(plane, "y").unwrap()).unwrap();
        let cb = KClass::of_relative(&b, &caps()).unwrap();
        let m = Arc::new(FatPoint::jet(f, "t", 2).unwrap());
        let prod = ca.mul(&cb, &caps()).unwrap();
        let fa = ca.counting_fibers(&m, &caps()).unwrap();
        let fb = cb.counting_fibers(&m, &caps()).unwrap();
        let fp = prod.counting_fibers(&m, &caps()).unwrap();
        for (k, v) in &fp {
            assert_eq!(v, &(&fa[k] * &fb[k]));
        }
        let direct = a.fiber_product(&b).unwrap().count(&m, &caps()).unwrap();
        assert_eq!(prod.counting(&m, &caps()).unwrap(), BigRational::from_integer(direct.into()));
    }
}
