//! Base change of relative classes: `f_*` recomposes the structure map with
//! `f`, `f^*` takes the fiber product with the source of `f`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use super::canon::{canonicalize, Conj};
use super::{rel_base, KClass, KMonomial};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::FatPointRef;
use crate::poly::{Poly, Ring};
use crate::scheme::Morphism;
use crate::sieve::{ImageLeaf, RelativeSieve};

impl KClass {
    fn require_base(&self, f_side: &crate::scheme::SchemeRef, what: &str) -> Result<()> {
        match self.base() {
            Some(b) if b.same_presentation(f_side) => Ok(()),
            Some(b) => Err(Error::StructureMismatch(format!("{what}: class lives over {b}, map touches {f_side}"))),
            None => Err(Error::StructureMismatch(format!("{what}: class is absolute"))),
        }
    }

    /// `f_*` for `f : S → S'`: every term keeps its blocks, its base block is
    /// re-anchored on `S'` through `s' = f(s)`.
    pub fn push(&self, f: &Morphism, caps: &Caps) -> Result<KClass> {
        self.require_base(f.source(), "pushforward")?;
        let target = rel_base(f.target(), caps)?;
        let mut out = KClass { field: self.field, base: Some(target), terms: BTreeMap::new() };
        let mut cache: HashMap<super::Block, Option<KMonomial>> = HashMap::new();
        for (m, c) in &self.terms {
            let b = m.base.as_ref().expect("relative term");
            if !cache.contains_key(b) {
                cache.insert(b.clone(), push_block(b, f, caps)?);
            }
            if let Some(pushed) = &cache[b] {
                out.add_term(combine(pushed, m), c.clone());
            }
        }
        Ok(out)
    }

    /// `f^*` for `f : T → S`: every base block `B → S` becomes `T ×_S B`.
    pub fn pull(&self, f: &Morphism, caps: &Caps) -> Result<KClass> {
        self.require_base(f.target(), "pullback")?;
        let source = rel_base(f.source(), caps)?;
        let mut out = KClass { field: self.field, base: Some(source), terms: BTreeMap::new() };
        let mut cache: HashMap<super::Block, Option<KMonomial>> = HashMap::new();
        for (m, c) in &self.terms {
            let b = m.base.as_ref().expect("relative term");
            if !cache.contains_key(b) {
                cache.insert(b.clone(), pull_block(b, f, caps)?);
            }
            if let Some(pulled) = &cache[b] {
                out.add_term(combine(pulled, m), c.clone());
            }
        }
        Ok(out)
    }
}

/// The canonical base part times the untouched absolute blocks of `m`.
fn combine(based: &KMonomial, m: &KMonomial) -> KMonomial {
    let mut blocks = based.blocks.clone();
    blocks.extend(m.blocks.iter().cloned());
    blocks.sort();
    KMonomial { base: based.base.clone(), blocks, lef: based.lef + m.lef }
}

fn shifted_images(images: &[ImageLeaf], map: &[usize]) -> Vec<ImageLeaf> {
    images.iter().map(|l| ImageLeaf { map: l.map.clone(), slots: l.slots.iter().map(|&s| map[s]).collect() }).collect()
}

/// Ring `(s'_0.., s_0.., u_0..)` with `s' = f(s)`; the new base is `s'`.
fn push_block(b: &super::Block, f: &Morphism, caps: &Caps) -> Result<Option<KMonomial>> {
    let c = b.conj();
    let (d_new, d_old) = (f.target().nvars(), c.nbase);
    let rest = c.ring.nvars() - d_old;
    let names: Vec<String> = (0..d_new)
        .map(|i| format!("t{i}"))
        .chain((0..d_old).map(|i| format!("s{i}")))
        .chain((0..rest).map(|i| format!("u{i}")))
        .collect();
    let ring = Ring::new(c.ring.field(), names)?;
    let map: Vec<usize> = (0..d_old + rest).map(|i| d_new + i).collect();
    let src_map: Vec<usize> = (0..d_old).map(|i| d_new + i).collect();
    let tgt_map: Vec<usize> = (0..d_new).collect();
    let mut eqs: Vec<Poly> = c.eqs.iter().map(|p| p.embed(&ring, &map)).collect();
    eqs.extend(f.target().equations().iter().map(|p| p.embed(&ring, &tgt_map)));
    for (i, img) in f.images().iter().enumerate() {
        eqs.push(Poly::var(&ring, i).sub(&img.embed(&ring, &src_map)));
    }
    let opens = c.opens.iter().map(|p| p.embed(&ring, &map)).collect();
    let conj = Conj { ring, nbase: d_new, eqs, opens, images: shifted_images(&c.images, &map) };
    finish(conj, caps)
}

/// Ring `(t_0.., s_0.., u_0..)` with `s = f(t)`; the new base is `t`.
fn pull_block(b: &super::Block, f: &Morphism, caps: &Caps) -> Result<Option<KMonomial>> {
    let c = b.conj();
    let (d_new, d_old) = (f.source().nvars(), c.nbase);
    let rest = c.ring.nvars() - d_old;
    let names: Vec<String> = (0..d_new)
        .map(|i| format!("t{i}"))
        .chain((0..d_old).map(|i| format!("s{i}")))
        .chain((0..rest).map(|i| format!("u{i}")))
        .collect();
    let ring = Ring::new(c.ring.field(), names)?;
    let map: Vec<usize> = (0..d_old + rest).map(|i| d_new + i).collect();
    let src_map: Vec<usize> = (0..d_new).collect();
    let mut eqs: Vec<Poly> = c.eqs.iter().map(|p| p.embed(&ring, &map)).collect();
    eqs.extend(f.source().equations().iter().map(|p| p.embed(&ring, &src_map)));
    for (i, img) in f.images().iter().enumerate() {
        eqs.push(Poly::var(&ring, d_new + i).sub(&img.embed(&ring, &src_map)));
    }
    let opens = c.opens.iter().map(|p| p.embed(&ring, &map)).collect();
    let conj = Conj { ring, nbase: d_new, eqs, opens, images: shifted_images(&c.images, &map) };
    finish(conj, caps)
}

fn finish(conj: Conj, caps: &Caps) -> Result<Option<KMonomial>> {
    Ok(canonicalize(conj, caps)?.map(|c| KMonomial { base: c.base, blocks: c.blocks, lef: c.lef }))
}

/// Outcome of the base-change checks on a battery of relative sieves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushPull {
    /// `f_*[X]` equals the class of `X` over `S'` through `f ∘ j`.
    pub push_matches_sieve: bool,
    /// `f^*[Y]` equals the class of `T ×_{S'} Y`.
    pub pull_matches_sieve: bool,
    /// `f_*` is additive on the battery.
    pub push_additive: bool,
    /// `f^*` is additive, multiplicative and unital on the battery.
    pub pull_ring_hom: bool,
    /// Fiberwise counts of `f_*[X]` are sums of the counts over `f^{-1}(s')`.
    pub push_counts_agree: bool,
    /// `f_*` is multiplicative on the battery; this fails in general since
    /// `X ×_S Y` and `X ×_{S'} Y` differ, so it is reported, not required.
    pub push_multiplicative: bool,
    /// Projection formula `f_*(f^*a · b) = a · f_*b`.
    pub projection_formula: bool,
}

impl PushPull {
    /// Every property that holds for all base changes.
    pub fn holds(&self) -> bool {
        self.push_matches_sieve
            && self.pull_matches_sieve
            && self.push_additive
            && self.pull_ring_hom
            && self.push_counts_agree
            && self.projection_formula
    }
}

/// Runs the base-change checks for `f : S → S'` on sieves `xs` over `S` and
/// `ys` over `S'`, counting fibers at every battery point.
pub fn pushforward_pullback_check(
    f: &Morphism,
    xs: &[RelativeSieve],
    ys: &[RelativeSieve],
    battery: &[FatPointRef],
    caps: &Caps,
) -> Result<PushPull> {
    let mut r = PushPull {
        push_matches_sieve: true,
        pull_matches_sieve: true,
        push_additive: true,
        pull_ring_hom: true,
        push_counts_agree: true,
        push_multiplicative: true,
        projection_formula: true,
    };
    let cx: Vec<KClass> = xs.iter().map(|x| KClass::of_relative(x, caps)).collect::<Result<_>>()?;
    let cy: Vec<KClass> = ys.iter().map(|y| KClass::of_relative(y, caps)).collect::<Result<_>>()?;
    let pushed: Vec<KClass> = cx.iter().map(|c| c.push(f, caps)).collect::<Result<_>>()?;
    let pulled: Vec<KClass> = cy.iter().map(|c| c.pull(f, caps)).collect::<Result<_>>()?;

    for (x, p) in xs.iter().zip(&pushed) {
        r.push_matches_sieve &= KClass::of_relative(&x.push(f)?, caps)? == *p;
    }
    for (y, p) in ys.iter().zip(&pulled) {
        r.pull_matches_sieve &= KClass::of_relative(&y.pull(f)?, caps)? == *p;
    }
    r.pull_ring_hom &= KClass::unit_over(f.target(), caps)?.pull(f, caps)? == KClass::unit_over(f.source(), caps)?;
    for (i, a) in cx.iter().enumerate() {
        for (j, b) in cx.iter().enumerate().skip(i) {
            r.push_additive &= a.add(b)?.push(f, caps)? == pushed[i].add(&pushed[j])?;
            r.push_multiplicative &= a.mul(b, caps)?.push(f, caps)? == pushed[i].mul(&pushed[j], caps)?;
        }
    }
    for (i, a) in cy.iter().enumerate() {
        for (j, b) in cy.iter().enumerate().skip(i) {
            r.pull_ring_hom &= a.add(b)?.pull(f, caps)? == pulled[i].add(&pulled[j])?;
            r.pull_ring_hom &= a.mul(b, caps)?.pull(f, caps)? == pulled[i].mul(&pulled[j], caps)?;
        }
    }
    for (a, fa) in cy.iter().zip(&pulled) {
        for (b, fb) in cx.iter().zip(&pushed) {
            let lhs = fa.mul(b, caps)?.push(f, caps)?;
            let rhs = a.mul(fb, caps)?;
            r.projection_formula &= lhs == rhs;
        }
    }
    if f.source().field().is_finite() {
        for m in battery {
            let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
            let fc = f.compiled();
            for (c, p) in cx.iter().zip(&pushed) {
                let mut expect: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
                for (s, v) in c.counting_fibers(m, caps)? {
                    *expect.entry(fc.apply(table, &s)).or_insert_with(BigRational::zero) += v;
                }
                expect.retain(|_, v| !v.is_zero());
                r.push_counts_agree &= p.counting_fibers(m, caps)? == expect;
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpt::FatPoint;
    use crate::field::Field;
    use crate::scheme::{AffineScheme, SchemeRef};
    use crate::sieve::SieveExpr;
    use std::sync::Arc;

    fn caps() -> Caps {
        Caps::default()
    }

    fn setup(f: Field) -> (SchemeRef, SchemeRef, Morphism) {
        let s: SchemeRef = Arc::new(AffineScheme::parse("S", f, &["a"], &[]).unwrap());
        let s2: SchemeRef = Arc::new(AffineScheme::parse("T", f, &["b"], &[]).unwrap());
        let sq = Morphism::parse(s.clone(), s2.clone(), &["a^2"]).unwrap();
        (s, s2, sq)
    }

    fn over(base: &SchemeRef, eqs: &[&str]) -> RelativeSieve {
        let amb: SchemeRef = Arc::new(AffineScheme::parse("E", base.field(), &["a", "y"], &[]).unwrap());
        RelativeSieve::over_product(base, SieveExpr::parse_closed(amb, eqs).unwrap()).unwrap()
    }

    #[test]
    fn identity_base_change_is_trivial() {
        let f = Field::Prime(3);
        let (s, _, _) = setup(f);
        let id = Morphism::identity(s.clone());
        let x = KClass::of_relative(&over(&s, &["y^2 - a"]), &caps()).unwrap();
        assert_eq!(x.push(&id, &caps()).unwrap(), x);
        assert_eq!(x.pull(&id, &caps()).unwrap(), x);
    }

    #[test]
    fn pullback_preserves_the_unit() {
        let f = Field::Prime(3);
        let (s, t, sq) = setup(f);
        let u = KClass::unit_over(&t, &caps()).unwrap();
        assert_eq!(u.pull(&sq, &caps()).unwrap(), KClass::unit_over(&s, &caps()).unwrap());
    }

    #[test]
    fn squaring_map_battery() {
        let f = Field::Prime(3);
        let (s, t, sq) = setup(f);
        let xs = vec![over(&s, &["y"]), over(&s, &["y^2 - a"]), over(&s, &["a*y - 1"])];
        let ys = vec![over(&t, &["y"]), over(&t, &["y^2 - a"])];
        let battery = vec![Arc::new(FatPoint::point(f)), Arc::new(FatPoint::jet(f, "t", 2).unwrap())];
        let r = pushforward_pullback_check(&sq, &xs, &ys, &battery, &caps()).unwrap();
        assert!(r.holds(), "{r:?}");
        // X ×_S X and X ×_{S'} X differ for a non-injective f
        assert!(!r.push_multiplicative);
    }
}
