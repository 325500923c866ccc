//! Sieves as computable subfunctors of `X° = Hom(-, X)`: finite `∪`/`∩`
//! lattice terms over closed subschemes, principal opens and morphism images.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{FpPoly, FpTable};
use crate::arc::{arc_components, arc_of_morphism, truncation_map, ArcScheme};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPoint, FatPointRef};
use crate::groebner::Ideal;
use crate::poly::{Poly, Ring};
use crate::scheme::{enumerate_flat, AffineScheme, Morphism, MorphismRef, SchemePoint, SchemeRef};

mod limit;
mod relative;
mod simplicial;

pub use limit::{LimitCheck, LimitSieve, MemberRule};
pub use relative::RelativeSieve;
pub use simplicial::{SimplicialShape, SimplicialSieve};

/// `im(φ)` for `φ : Z → T`, where coordinate `k` of `T` sits in ambient slot `slots[k]`.
#[derive(Clone, Debug)]
pub struct ImageLeaf {
    pub map: MorphismRef,
    pub slots: Vec<usize>,
}

impl PartialEq for ImageLeaf {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots
            && self.map.source().same_presentation(other.map.source())
            && self.map.target().same_presentation(other.map.target())
            && self.map.images() == other.map.images()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SieveNode {
    Full,
    Empty,
    Closed(Vec<Poly>),
    Open(Poly),
    Image(ImageLeaf),
    Union(Vec<SieveNode>),
    Inter(Vec<SieveNode>),
}

impl SieveNode {
    fn map_leaves(&self, f: &mut dyn FnMut(&SieveNode) -> Result<SieveNode>) -> Result<SieveNode> {
        Ok(match self {
            SieveNode::Union(xs) => SieveNode::Union(xs.iter().map(|x| x.map_leaves(f)).collect::<Result<_>>()?),
            SieveNode::Inter(xs) => SieveNode::Inter(xs.iter().map(|x| x.map_leaves(f)).collect::<Result<_>>()?),
            leaf => f(leaf)?,
        })
    }

    /// Flattens nested unions and intersections and absorbs `full` and `empty`.
    pub fn simplify(&self) -> SieveNode {
        match self {
            SieveNode::Union(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    match x.simplify() {
                        SieveNode::Empty => {}
                        SieveNode::Full => return SieveNode::Full,
                        SieveNode::Union(ys) => out.extend(ys),
                        y => out.push(y),
                    }
                }
                match out.len() {
                    0 => SieveNode::Empty,
                    1 => out.pop().unwrap(),
                    _ => SieveNode::Union(out),
                }
            }
            SieveNode::Inter(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    match x.simplify() {
                        SieveNode::Full => {}
                        SieveNode::Empty => return SieveNode::Empty,
                        SieveNode::Inter(ys) => out.extend(ys),
                        y => out.push(y),
                    }
                }
                match out.len() {
                    0 => SieveNode::Full,
                    1 => out.pop().unwrap(),
                    _ => SieveNode::Inter(out),
                }
            }
            SieveNode::Closed(eqs) if eqs.iter().all(|e| e.is_zero()) => SieveNode::Full,
            leaf => leaf.clone(),
        }
    }

    /// Top-level conjuncts after flattening.
    pub fn conjuncts(&self) -> Vec<SieveNode> {
        match self.simplify() {
            SieveNode::Inter(xs) => xs,
            SieveNode::Full => Vec::new(),
            x => vec![x],
        }
    }

    fn is_open_like(&self) -> bool {
        match self {
            SieveNode::Open(_) | SieveNode::Full => true,
            SieveNode::Union(xs) => xs.iter().all(|x| x.is_open_like()),
            _ => false,
        }
    }

    /// Number of union nodes in the tree.
    pub fn union_count(&self) -> usize {
        match self {
            SieveNode::Union(xs) => 1 + xs.iter().map(|x| x.union_count()).sum::<usize>(),
            SieveNode::Inter(xs) => xs.iter().map(|x| x.union_count()).sum(),
            _ => 0,
        }
    }

    pub fn has_image(&self) -> bool {
        match self {
            SieveNode::Image(_) => true,
            SieveNode::Union(xs) | SieveNode::Inter(xs) => xs.iter().any(|x| x.has_image()),
            _ => false,
        }
    }

    fn fmt_with(&self, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SieveNode::Full => write!(f, "full"),
            SieveNode::Empty => write!(f, "empty"),
            SieveNode::Closed(eqs) => {
                let parts: Vec<String> = eqs.iter().map(|e| e.to_string_with(vars)).collect();
                write!(f, "V({})", parts.join(", "))
            }
            SieveNode::Open(g) => write!(f, "D({})", g.to_string_with(vars)),
            SieveNode::Image(leaf) => {
                let slots: Vec<&str> = leaf.slots.iter().map(|&s| vars[s].as_str()).collect();
                write!(f, "im({} -> [{}])", leaf.map.source().name(), slots.join(","))
            }
            SieveNode::Union(xs) | SieveNode::Inter(xs) => {
                let op = if matches!(self, SieveNode::Union(_)) { " | " } else { " & " };
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    x.fmt_with(vars, f)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A sieve inside an affine ambient scheme.
#[derive(Clone, Debug)]
pub struct SieveExpr {
    ambient: SchemeRef,
    node: SieveNode,
}

impl PartialEq for SieveExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.same_presentation(&other.ambient) && self.node == other.node
    }
}

impl fmt::Display for SieveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.fmt_with(self.ambient.ring().vars(), f)
    }
}

impl SieveExpr {
    pub fn new(ambient: SchemeRef, node: SieveNode) -> Result<SieveExpr> {
        let expr = SieveExpr { ambient, node };
        expr.validate(&expr.node)?;
        Ok(expr)
    }

    fn validate(&self, node: &SieveNode) -> Result<()> {
        match node {
            SieveNode::Full | SieveNode::Empty => Ok(()),
            SieveNode::Closed(eqs) => eqs.iter().try_for_each(|e| e.check_ring(self.ambient.ring())),
            SieveNode::Open(g) => g.check_ring(self.ambient.ring()),
            SieveNode::Image(leaf) => {
                if leaf.slots.len() != leaf.map.target().nvars()
                    || leaf.slots.iter().any(|&s| s >= self.ambient.nvars())
                {
                    return Err(Error::AmbientMismatch("image leaf slots do not fit the ambient".into()));
                }
                if leaf.map.target().field() != self.ambient.field() {
                    return Err(Error::FieldMismatch(
                        leaf.map.target().field().to_string(),
                        self.ambient.field().to_string(),
                    ));
                }
                Ok(())
            }
            SieveNode::Union(xs) | SieveNode::Inter(xs) => xs.iter().try_for_each(|x| self.validate(x)),
        }
    }

    pub fn full(ambient: SchemeRef) -> SieveExpr {
        SieveExpr { ambient, node: SieveNode::Full }
    }

    pub fn empty(ambient: SchemeRef) -> SieveExpr {
        SieveExpr { ambient, node: SieveNode::Empty }
    }

    pub fn closed(ambient: SchemeRef, eqs: Vec<Poly>) -> Result<SieveExpr> {
        SieveExpr::new(ambient, SieveNode::Closed(eqs))
    }

    pub fn open(ambient: SchemeRef, g: Poly) -> Result<SieveExpr> {
        SieveExpr::new(ambient, SieveNode::Open(g))
    }

    /// `im(φ)` for a morphism into the ambient.
    pub fn image(ambient: SchemeRef, map: MorphismRef) -> Result<SieveExpr> {
        if !map.target().same_presentation(&ambient) {
            return Err(Error::AmbientMismatch(format!(
                "image of a morphism into {} used in {}",
                map.target().name(),
                ambient.name()
            )));
        }
        let slots = (0..ambient.nvars()).collect();
        SieveExpr::new(ambient, SieveNode::Image(ImageLeaf { map, slots }))
    }

    pub fn parse_closed(ambient: SchemeRef, eqs: &[&str]) -> Result<SieveExpr> {
        let polys = eqs.iter().map(|s| Poly::parse(ambient.ring(), s)).collect::<Result<_>>()?;
        SieveExpr::closed(ambient, polys)
    }

    pub fn parse_open(ambient: SchemeRef, g: &str) -> Result<SieveExpr> {
        let p = Poly::parse(ambient.ring(), g)?;
        SieveExpr::open(ambient, p)
    }

    pub fn ambient(&self) -> &SchemeRef {
        &self.ambient
    }

    pub fn node(&self) -> &SieveNode {
        &self.node
    }

    pub fn simplified(&self) -> SieveExpr {
        SieveExpr { ambient: self.ambient.clone(), node: self.node.simplify() }
    }

    fn same_ambient(&self, other: &SieveExpr) -> Result<()> {
        if self.ambient.same_presentation(&other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(format!("{} vs {}", self.ambient, other.ambient)))
        }
    }

    pub fn union(&self, other: &SieveExpr) -> Result<SieveExpr> {
        self.same_ambient(other)?;
        Ok(SieveExpr {
            ambient: self.ambient.clone(),
            node: SieveNode::Union(vec![self.node.clone(), other.node.clone()]),
        })
    }

    pub fn inter(&self, other: &SieveExpr) -> Result<SieveExpr> {
        self.same_ambient(other)?;
        Ok(SieveExpr {
            ambient: self.ambient.clone(),
            node: SieveNode::Inter(vec![self.node.clone(), other.node.clone()]),
        })
    }

    /// Moves the sieve into a larger ambient whose equations contain the
    /// embedded ones, sending variable `i` to `map[i]`.
    pub fn reindex(&self, ambient: SchemeRef, map: &[usize]) -> Result<SieveExpr> {
        let ring = ambient.ring().clone();
        let node = self.node.map_leaves(&mut |leaf| {
            Ok(match leaf {
                SieveNode::Closed(eqs) => SieveNode::Closed(eqs.iter().map(|e| e.embed(&ring, map)).collect()),
                SieveNode::Open(g) => SieveNode::Open(g.embed(&ring, map)),
                SieveNode::Image(l) => SieveNode::Image(ImageLeaf {
                    map: l.map.clone(),
                    slots: l.slots.iter().map(|&s| map[s]).collect(),
                }),
                other => other.clone(),
            })
        })?;
        SieveExpr::new(ambient, node)
    }

    /// `self × other` inside the product ambient.
    pub fn product(&self, other: &SieveExpr) -> Result<SieveExpr> {
        let (prod, map_a, map_b) = self.ambient.product(&other.ambient)?;
        let prod = Arc::new(prod);
        let a = self.reindex(prod.clone(), &map_a)?;
        let b = other.reindex(prod.clone(), &map_b)?;
        a.inter(&b)
    }

    /// `self ⊔ other` inside `Spec k[x, y, e]/(e^2 - e, e y, (1-e) x, e f(x), (1-e) g(y))`.
    pub fn disjoint_union(&self, other: &SieveExpr) -> Result<SieveExpr> {
        let sum = disjoint_ambient(&self.ambient, &other.ambient)?;
        let ambient = sum.ambient.clone();
        let ring = ambient.ring().clone();
        let one = Poly::one(&ring);
        let ev = Poly::var(&ring, ambient.nvars() - 1);
        // summand leaves keep their meaning once the tag e is fixed
        let left = self.reindex(ambient.clone(), &sum.map_a)?;
        let right = other.reindex(ambient.clone(), &sum.map_b)?;
        let tag_a = SieveNode::Closed(vec![ev.sub(&one)]);
        let tag_b = SieveNode::Closed(vec![ev.clone()]);
        SieveExpr::new(
            ambient,
            SieveNode::Union(vec![
                SieveNode::Inter(vec![tag_a, left.node]),
                SieveNode::Inter(vec![tag_b, right.node]),
            ]),
        )
    }

    /// `φ^{-1}(self)` for `φ : W → ambient`, computed leafwise.
    pub fn pullback(&self, phi: &Morphism) -> Result<SieveExpr> {
        if !phi.target().same_presentation(&self.ambient) {
            return Err(Error::AmbientMismatch("pullback along a morphism into another ambient".into()));
        }
        let node = self.node.map_leaves(&mut |leaf| {
            Ok(match leaf {
                SieveNode::Closed(eqs) => SieveNode::Closed(eqs.iter().map(|e| phi.pull(e)).collect()),
                SieveNode::Open(g) => SieveNode::Open(phi.pull(g)),
                SieveNode::Image(l) => SieveNode::Image(pull_image(l, phi)?),
                other => other.clone(),
            })
        })?;
        SieveExpr::new(phi.source().clone(), node)
    }

    /// The sieve of arcs `γ ∈ ∇_m X` with `γ` in `self` at `A ×_k m`.
    pub fn arc(&self, arc: &ArcScheme, caps: &Caps) -> Result<SieveExpr> {
        if !arc.source().same_presentation(&self.ambient) {
            return Err(Error::AmbientMismatch("arc of a sieve in another ambient".into()));
        }
        let len = arc.point().length();
        let node = self.node.map_leaves(&mut |leaf| {
            Ok(match leaf {
                SieveNode::Closed(eqs) => {
                    let mut all = Vec::new();
                    for e in eqs {
                        all.extend(arc_components(e, arc)?.into_iter().filter(|c| !c.is_zero()));
                    }
                    SieveNode::Closed(all)
                }
                SieveNode::Open(g) => SieveNode::Open(arc_components(g, arc)?.swap_remove(0)),
                SieveNode::Image(l) => {
                    let (_, _, map) = arc_of_morphism(&l.map, arc.point(), caps)?;
                    let slots = l.slots.iter().flat_map(|&s| (0..len).map(move |j| s * len + j)).collect();
                    SieveNode::Image(ImageLeaf { map: Arc::new(map), slots })
                }
                other => other.clone(),
            })
        })?;
        SieveExpr::new(arc.scheme().clone(), node)
    }

    /// The cylinder over `self`: arcs in `∇_m X` whose residue lies in `self`.
    pub fn cylinder(&self, m: &FatPointRef, caps: &Caps) -> Result<SieveExpr> {
        let pt = Arc::new(FatPoint::point(m.field()));
        let res = truncation_map(&self.ambient, m, &pt, caps)?;
        self.pullback(&res)
    }

    /// Membership of an `m`-valued point, valid over any field except for image leaves.
    pub fn member(&self, p: &SchemePoint, caps: &Caps) -> Result<bool> {
        if p.images.len() != self.ambient.nvars() {
            return Err(Error::Invalid("point has the wrong number of coordinates".into()));
        }
        member_node(&self.node, p, caps)
    }

    pub fn compile(&self, m: &FatPointRef, caps: &Caps) -> Result<CompiledSieve> {
        let table = m
            .algebra()
            .fp()
            .ok_or_else(|| Error::InfiniteField(m.field().to_string()))?
            .clone();
        Ok(CompiledSieve { root: compile_node(&self.node.simplify(), m, caps)?, table })
    }

    /// All member points at `m`, as flat coordinate vectors in enumeration order.
    pub fn points(&self, m: &FatPointRef, caps: &Caps) -> Result<Vec<Vec<u32>>> {
        if self.ambient.field() != m.field() {
            return Err(Error::FieldMismatch(self.ambient.field().to_string(), m.field().to_string()));
        }
        let node = self.node.simplify();
        if node == SieveNode::Empty {
            return Ok(Vec::new());
        }
        // closed conjuncts are pushed into the enumeration itself
        let mut eqs = self.ambient.equations().to_vec();
        for c in node.conjuncts() {
            if let SieveNode::Closed(more) = c {
                eqs.extend(more);
            }
        }
        let candidates = enumerate_flat(self.ambient.ring(), &eqs, m, caps)?;
        let compiled = self.compile(m, caps)?;
        Ok(candidates.into_iter().filter(|p| compiled.contains(p)).collect())
    }

    pub fn count(&self, m: &FatPointRef, caps: &Caps) -> Result<usize> {
        Ok(self.points(m, caps)?.len())
    }
}

/// The ambient of a disjoint union with its summand inclusions.
#[derive(Clone, Debug)]
pub struct DisjointAmbient {
    pub ambient: SchemeRef,
    pub inc_a: Morphism,
    pub inc_b: Morphism,
    pub map_a: Vec<usize>,
    pub map_b: Vec<usize>,
}

/// `Spec k[x, y, e]/(e^2 - e, e y, (1-e) x, e f(x), (1-e) g(y))`: over a local
/// algebra `e` is 0 or 1, selecting the summand.
pub fn disjoint_ambient(a: &SchemeRef, b: &SchemeRef) -> Result<DisjointAmbient> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let (prod, map_a, map_b) = a.product(b)?;
    let mut vars = prod.ring().vars().to_vec();
    let mut tag = "e".to_string();
    while vars.contains(&tag) {
        tag.push('\'');
    }
    vars.push(tag);
    let ring = Ring::new(a.field(), vars)?;
    let n = ring.nvars();
    let e = Poly::var(&ring, n - 1);
    let not_e = Poly::one(&ring).sub(&e);
    let mut gens = vec![e.mul(&e).sub(&e)];
    for &j in &map_b {
        gens.push(e.mul(&Poly::var(&ring, j)));
    }
    for &i in &map_a {
        gens.push(not_e.mul(&Poly::var(&ring, i)));
    }
    for f in a.equations() {
        gens.push(e.mul(&f.embed(&ring, &map_a)));
    }
    for g in b.equations() {
        gens.push(not_e.mul(&g.embed(&ring, &map_b)));
    }
    let ambient: SchemeRef =
        Arc::new(AffineScheme::new(format!("{}+{}", a.name(), b.name()), Ideal::new(&ring, gens)?)?);
    let inc = |src: &SchemeRef, map: &[usize], tag_value: i64| -> Result<Morphism> {
        let mut images = vec![Poly::zero(src.ring()); n];
        for (i, &slot) in map.iter().enumerate() {
            images[slot] = Poly::var(src.ring(), i);
        }
        images[n - 1] = Poly::from_i64(src.ring(), tag_value);
        Morphism::new(src.clone(), ambient.clone(), images)
    };
    let inc_a = inc(a, &map_a, 1)?;
    let inc_b = inc(b, &map_b, 0)?;
    Ok(DisjointAmbient { ambient, inc_a, inc_b, map_a, map_b })
}

/// Pulls `im(ψ)` back along `φ : W → A` to `im(Z ×_A W → W)`.
fn pull_image(leaf: &ImageLeaf, phi: &Morphism) -> Result<ImageLeaf> {
    let z = leaf.map.source();
    let w = phi.source();
    let (prod, map_z, map_w) = z.product(w)?;
    let ring = prod.ring().clone();
    let mut gens = prod.equations().to_vec();
    for (k, &slot) in leaf.slots.iter().enumerate() {
        let lhs = leaf.map.images()[k].embed(&ring, &map_z);
        let rhs = phi.images()[slot].embed(&ring, &map_w);
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            gens.push(diff);
        }
    }
    let fiber = Arc::new(AffineScheme::new(format!("{}x{}", z.name(), w.name()), Ideal::new(&ring, gens)?)?);
    let images = map_w.iter().map(|&j| Poly::var(&ring, j)).collect();
    let proj = Morphism::new(fiber, w.clone(), images)?;
    Ok(ImageLeaf { map: Arc::new(proj), slots: (0..w.nvars()).collect() })
}

fn member_node(node: &SieveNode, p: &SchemePoint, caps: &Caps) -> Result<bool> {
    let alg = p.target.algebra();
    Ok(match node {
        SieveNode::Full => true,
        SieveNode::Empty => false,
        SieveNode::Closed(eqs) => eqs.iter().all(|e| alg.eval(e, &p.images).iter().all(|c| c.is_zero())),
        SieveNode::Open(g) => !alg.eval(g, &p.images)[0].is_zero(),
        SieveNode::Image(leaf) => {
            let set = image_set(leaf, &p.target, caps)?;
            let flat = p.flat();
            let d = p.target.length();
            let sub: Vec<u32> = leaf.slots.iter().flat_map(|&s| flat[s * d..(s + 1) * d].to_vec()).collect();
            set.contains(&sub)
        }
        SieveNode::Union(xs) => {
            for x in xs {
                if member_node(x, p, caps)? {
                    return Ok(true);
                }
            }
            false
        }
        SieveNode::Inter(xs) => {
            for x in xs {
                if !member_node(x, p, caps)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

fn image_set(leaf: &ImageLeaf, m: &FatPointRef, caps: &Caps) -> Result<HashSet<Vec<u32>>> {
    let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
    let src = leaf.map.source();
    let pts = enumerate_flat(src.ring(), src.equations(), m, caps)?;
    let compiled = leaf.map.compiled();
    Ok(pts.iter().map(|p| compiled.apply(table, p)).collect())
}

enum CompiledNode {
    Full,
    Empty,
    Closed(Vec<FpPoly>),
    Open(FpPoly),
    Image { slots: Vec<usize>, set: HashSet<Vec<u32>> },
    Union(Vec<CompiledNode>),
    Inter(Vec<CompiledNode>),
}

fn compile_node(node: &SieveNode, m: &FatPointRef, caps: &Caps) -> Result<CompiledNode> {
    Ok(match node {
        SieveNode::Full => CompiledNode::Full,
        SieveNode::Empty => CompiledNode::Empty,
        SieveNode::Closed(eqs) => CompiledNode::Closed(eqs.iter().map(FpPoly::compile).collect()),
        SieveNode::Open(g) => CompiledNode::Open(FpPoly::compile(g)),
        SieveNode::Image(leaf) => CompiledNode::Image { slots: leaf.slots.clone(), set: image_set(leaf, m, caps)? },
        SieveNode::Union(xs) => CompiledNode::Union(xs.iter().map(|x| compile_node(x, m, caps)).collect::<Result<_>>()?),
        SieveNode::Inter(xs) => CompiledNode::Inter(xs.iter().map(|x| compile_node(x, m, caps)).collect::<Result<_>>()?),
    })
}

/// A sieve specialized to one finite-field fat point for fast membership tests.
pub struct CompiledSieve {
    root: CompiledNode,
    table: Arc<FpTable>,
}

impl CompiledSieve {
    pub fn contains(&self, flat: &[u32]) -> bool {
        let d = self.table.dim;
        let values: Vec<&[u32]> = flat.chunks(d.max(1)).collect();
        self.eval(&self.root, flat, &values)
    }

    fn eval(&self, node: &CompiledNode, flat: &[u32], values: &[&[u32]]) -> bool {
        match node {
            CompiledNode::Full => true,
            CompiledNode::Empty => false,
            CompiledNode::Closed(eqs) => eqs.iter().all(|e| e.is_zero_at(&self.table, values)),
            CompiledNode::Open(g) => self.table.is_unit(&g.eval(&self.table, values)),
            CompiledNode::Image { slots, set } => {
                let d = self.table.dim;
                let sub: Vec<u32> = slots.iter().flat_map(|&s| flat[s * d..(s + 1) * d].iter().copied()).collect();
                set.contains(&sub)
            }
            CompiledNode::Union(xs) => xs.iter().any(|x| self.eval(x, flat, values)),
            CompiledNode::Inter(xs) => xs.iter().all(|x| self.eval(x, flat, values)),
        }
    }
}

/// Whether `s` is syntactically `host ∩ (finite union of principal opens)`.
pub fn is_admissible_open(s: &SieveExpr, host: &SieveExpr) -> bool {
    if !s.ambient.same_presentation(&host.ambient) {
        return false;
    }
    let mut rest = s.node.conjuncts();
    for h in host.node.conjuncts() {
        match rest.iter().position(|c| *c == h) {
            Some(i) => {
                rest.remove(i);
            }
            None => return false,
        }
    }
    rest.iter().all(|c| c.is_open_like())
}

/// The conjuncts of `s` left after removing those of `host`.
fn residual_conjuncts(s: &SieveExpr, host: &SieveExpr) -> Vec<SieveNode> {
    let mut rest = s.node.conjuncts();
    for h in host.node.conjuncts() {
        if let Some(i) = rest.iter().position(|c| *c == h) {
            rest.remove(i);
        }
    }
    rest
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    Pass { checked: usize },
    Counterexample { index: usize, detail: String },
}

/// Semi-decides continuity of `φ : host → target` on a battery of admissible
/// opens `U` of `target`: each `host ∩ φ^{-1}(U)` must be an admissible open
/// of `host`, either syntactically or by agreeing at the battery fat point
/// with `host ∩ φ^{-1}(opens of U)`.
pub fn continuity_probe(
    phi: &Morphism,
    host: &SieveExpr,
    target: &SieveExpr,
    battery: &[(FatPointRef, SieveExpr)],
    caps: &Caps,
) -> Result<ProbeVerdict> {
    if !phi.source().same_presentation(&host.ambient) || !phi.target().same_presentation(&target.ambient) {
        return Err(Error::AmbientMismatch("probe morphism does not match the sieves".into()));
    }
    for (index, (m, u)) in battery.iter().enumerate() {
        if !is_admissible_open(u, target) {
            return Err(Error::Invalid(format!("battery entry {index} is not an admissible open of the target")));
        }
        let pulled = host.inter(&u.pullback(phi)?)?;
        if is_admissible_open(&pulled, host) {
            continue;
        }
        let opens = residual_conjuncts(u, target);
        let open_part = SieveExpr::new(u.ambient.clone(), SieveNode::Inter(opens))?;
        let candidate = host.inter(&open_part.pullback(phi)?)?;
        let lhs = pulled.points(m, caps)?;
        let rhs = candidate.points(m, caps)?;
        if lhs != rhs {
            return Ok(ProbeVerdict::Counterexample {
                index,
                detail: format!(
                    "at {m}: pullback has {} points, nearest admissible open has {}",
                    lhs.len(),
                    rhs.len()
                ),
            });
        }
    }
    Ok(ProbeVerdict::Pass { checked: battery.len() })
}
