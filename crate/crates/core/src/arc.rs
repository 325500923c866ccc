//! The arc operator `∇_m`, computed as Weil restriction along a fat point, and
//! the maps it induces: arc images of morphisms, truncations, simplicial arcs.
//!
//! For `X = Spec k[x_1..x_n]/(f_1..f_r)` and `O_m` with standard basis
//! `b_0 = 1, b_1, ..., b_{l-1}`, substituting `x_i = Σ_j x_{i,j} b_j` and
//! reducing `f_s` in `O_m` yields `l` coefficient polynomials per equation;
//! together they present the scheme representing `A ↦ Hom(A ×_k m, X)`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::QuotientAlgebra;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{surjection_images, FatPoint, FatPointRef, FunctorTag, SimplicialFatPoint};
use crate::groebner::{Ideal, KrullDim};
use crate::poly::{Monomial, Poly, Ring, RingRef};
use crate::scheme::{enumerate_flat, AffineScheme, Morphism, SchemeRef, SimplicialScheme};

#[derive(Clone, Debug)]
pub struct ArcScheme {
    scheme: SchemeRef,
    source: SchemeRef,
    point: FatPointRef,
    /// Equations emitted before pruning the identically zero ones.
    raw_equations: usize,
}

impl ArcScheme {
    pub fn scheme(&self) -> &SchemeRef {
        &self.scheme
    }

    pub fn source(&self) -> &SchemeRef {
        &self.source
    }

    pub fn point(&self) -> &FatPointRef {
        &self.point
    }

    pub fn basis(&self) -> &[Monomial] {
        self.point.algebra().basis()
    }

    pub fn raw_equation_count(&self) -> usize {
        self.raw_equations
    }

    /// Index of arc coordinate `x_{i,j}`.
    pub fn coord(&self, var: usize, basis_index: usize) -> usize {
        var * self.point.length() + basis_index
    }
}

impl fmt::Display for ArcScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scheme)
    }
}

/// Names of the arc coordinates of `x` along a point of length `len`.
/// Length one keeps the original names, so `∇_{Spec k} X = X` literally.
pub fn arc_variable_names(vars: &[String], len: usize) -> Vec<String> {
    if len == 1 {
        return vars.to_vec();
    }
    vars.iter().flat_map(|v| (0..len).map(move |j| format!("{v}_{j}"))).collect()
}

/// Polynomial-coefficient arithmetic in `R ⊗ O_m`, where `R` is the arc ring.
struct WeilExpander<'a> {
    alg: &'a QuotientAlgebra,
    ring: RingRef,
    len: usize,
}

impl<'a> WeilExpander<'a> {
    fn new(alg: &'a QuotientAlgebra, ring: RingRef) -> Self {
        WeilExpander { alg, ring, len: alg.dim() }
    }

    fn mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(&self.ring); self.len];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai.mul(bj);
                for (k, c) in self.alg.structure(i, j) {
                    out[*k] = out[*k].add(&prod.scale(c));
                }
            }
        }
        out
    }

    /// Components of `g(x_i = elems[i])` over the basis of `O_m`.
    fn expand(&self, g: &Poly, elems: &[Vec<Poly>]) -> Vec<Poly> {
        let mut powers: Vec<Vec<Vec<Poly>>> = vec![Vec::new(); elems.len()];
        let mut acc = vec![Poly::zero(&self.ring); self.len];
        for (m, c) in g.terms() {
            let mut t = vec![Poly::zero(&self.ring); self.len];
            t[0] = Poly::constant(&self.ring, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(elems[v].clone());
                }
                while cache.len() < e as usize {
                    let next = self.mul(cache.last().unwrap(), &elems[v]);
                    cache.push(next);
                }
                t = self.mul(&t, &cache[e as usize - 1]);
            }
            for (a, b) in acc.iter_mut().zip(&t) {
                *a = a.add(b);
            }
        }
        acc
    }

    /// The generic element `Σ_j x_{i,j} b_j` for each source variable.
    fn generic(&self, nvars: usize) -> Vec<Vec<Poly>> {
        (0..nvars)
            .map(|i| (0..self.len).map(|j| Poly::var(&self.ring, i * self.len + j)).collect())
            .collect()
    }
}

fn arc_ring(x: &AffineScheme, m: &FatPoint, caps: &Caps) -> Result<RingRef> {
    let coords = x.nvars() * m.length();
    if coords > caps.max_arc_coords {
        return Err(Error::CapExceeded(format!(
            "{coords} arc coordinates exceed the cap of {}",
            caps.max_arc_coords
        )));
    }
    Ring::new(x.field(), arc_variable_names(x.ring().vars(), m.length()))
}

/// `∇_m X` by Weil restriction.
pub fn weil_restrict(x: &SchemeRef, m: &FatPointRef, caps: &Caps) -> Result<ArcScheme> {
    if x.field() != m.field() {
        return Err(Error::FieldMismatch(x.field().to_string(), m.field().to_string()));
    }
    let ring = arc_ring(x, m, caps)?;
    let ex = WeilExpander::new(m.algebra(), ring.clone());
    let generic = ex.generic(x.nvars());
    let mut eqs = Vec::new();
    let mut raw = 0;
    for f in x.equations() {
        for comp in ex.expand(f, &generic) {
            raw += 1;
            if !comp.is_zero() {
                eqs.push(comp);
            }
        }
    }
    let name = if m.length() == 1 { x.name().to_string() } else { format!("arc({})", x.name()) };
    let scheme = AffineScheme::new(name, Ideal::new(&ring, eqs)?)?;
    Ok(ArcScheme { scheme: Arc::new(scheme), source: x.clone(), point: m.clone(), raw_equations: raw })
}

/// Components of a polynomial on `X` evaluated at the generic arc, as
/// polynomials on `∇_m X`.
pub fn arc_components(g: &Poly, arc: &ArcScheme) -> Result<Vec<Poly>> {
    g.check_ring(arc.source.ring())?;
    let ex = WeilExpander::new(arc.point.algebra(), arc.scheme.ring().clone());
    let generic = ex.generic(arc.source.nvars());
    Ok(ex.expand(g, &generic))
}

/// The morphism `∇_{from} X → ∇_{to} Y` sending `γ` to `φ ∘ γ ∘ ι`, where the
/// fat point map `ι : to → from` is given by `iota`, the images of the
/// variables of `from` in the ring of `to`.
pub fn arc_map(
    phi: &Morphism,
    from: &ArcScheme,
    to: &ArcScheme,
    iota: &[Poly],
) -> Result<Morphism> {
    if !from.source.same_presentation(phi.source()) || !to.source.same_presentation(phi.target()) {
        return Err(Error::InvalidMorphism("arc map between unrelated arc schemes".into()));
    }
    let from_alg = from.point.algebra();
    let to_alg = to.point.algebra();
    // change of basis O_from → O_to
    let mut basis_images = Vec::with_capacity(from_alg.dim());
    for b in from_alg.basis() {
        let as_poly = Poly::monomial(from_alg.ring(), b.clone(), num_traits::One::one());
        let img = as_poly.compose(iota, to_alg.ring());
        basis_images.push(to_alg.coords(&img)?);
    }
    let comps: Vec<Vec<Poly>> = phi
        .images()
        .iter()
        .map(|g| arc_components(g, from))
        .collect::<Result<_>>()?;
    let src_ring = from.scheme.ring();
    let mut images = Vec::with_capacity(to.scheme.nvars());
    for comp in &comps {
        for t in 0..to_alg.dim() {
            let mut acc = Poly::zero(src_ring);
            for (j, cj) in comp.iter().enumerate() {
                let coeff = &basis_images[j][t];
                if !num_traits::Zero::is_zero(coeff) {
                    acc = acc.add(&cj.scale(coeff));
                }
            }
            images.push(acc);
        }
    }
    Morphism::new(from.scheme.clone(), to.scheme.clone(), images)
}

/// `∇_m φ` for a morphism `φ : X → Y`.
pub fn arc_of_morphism(
    phi: &Morphism,
    m: &FatPointRef,
    caps: &Caps,
) -> Result<(ArcScheme, ArcScheme, Morphism)> {
    let from = weil_restrict(phi.source(), m, caps)?;
    let to = weil_restrict(phi.target(), m, caps)?;
    let iota: Vec<Poly> = (0..m.ring().nvars()).map(|i| Poly::var(m.ring(), i)).collect();
    let map = arc_map(phi, &from, &to, &iota)?;
    Ok((from, to, map))
}

/// The truncation `∇_{big} X → ∇_{small} X` induced by `O_big ↠ O_small`.
pub fn truncation_map(
    x: &SchemeRef,
    big: &FatPointRef,
    small: &FatPointRef,
    caps: &Caps,
) -> Result<Morphism> {
    if let Some(g) = crate::fatpt::closed_immersion_witness(big, small)? {
        return Err(Error::NotClosedImmersion(format!("generator `{g}` of {big} is nonzero on {small}")));
    }
    let from = weil_restrict(x, big, caps)?;
    let to = weil_restrict(x, small, caps)?;
    let iota = surjection_images(big, small)?;
    arc_map(&Morphism::identity(x.clone()), &from, &to, &iota)
}

pub fn arc_dimension(x: &SchemeRef, m: &FatPointRef, caps: &Caps) -> Result<KrullDim> {
    let arc = weil_restrict(x, m, caps)?;
    arc.scheme.ideal().try_basis(caps)?;
    Ok(arc.scheme.ideal().krull_dimension())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionVerdict {
    /// `|Hom(a ×_k m, X)|`
    pub product_side: usize,
    /// `|Hom(a, ∇_m X)|`
    pub arc_side: usize,
    /// The coefficient reindexing is a bijection between the two hom-sets.
    pub bijection: bool,
}

impl AdjunctionVerdict {
    pub fn holds(&self) -> bool {
        self.product_side == self.arc_side && self.bijection
    }
}

/// Enumerates both sides of `Hom(a ×_k m, X) ≅ Hom(a, ∇_m X)` over a finite
/// field and checks that reindexing coefficients is a bijection.
pub fn adjunction_check(
    x: &SchemeRef,
    m: &FatPointRef,
    a: &FatPointRef,
    caps: &Caps,
) -> Result<AdjunctionVerdict> {
    let am = a.tensor(m)?;
    let lhs = enumerate_flat(x.ring(), x.equations(), &am, caps)?;
    let arc = weil_restrict(x, m, caps)?;
    let rhs = enumerate_flat(arc.scheme.ring(), arc.scheme.equations(), a, caps)?;

    let pairs = a.algebra().tensor_pairs(m.algebra(), am.algebra());
    let (la, lm, lam) = (a.length(), m.length(), am.length());
    let rhs_set: HashSet<&[u32]> = rhs.iter().map(|p| p.as_slice()).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(lhs.len());
    let mut bijection = true;
    for p in &lhs {
        let mut image = vec![0u32; x.nvars() * lm * la];
        for i in 0..x.nvars() {
            for (k, &(alpha, beta)) in pairs.iter().enumerate() {
                image[(i * lm + beta) * la + alpha] = p[i * lam + k];
            }
        }
        if !rhs_set.contains(image.as_slice()) || !seen.insert(image) {
            bijection = false;
            break;
        }
    }
    bijection &= seen.len() == rhs.len();
    Ok(AdjunctionVerdict { product_side: lhs.len(), arc_side: rhs.len(), bijection })
}

/// Level-wise arcs of a simplicial scheme along a simplicial fat point, with
/// the face and degeneracy maps induced by the arc operator.
#[derive(Clone, Debug)]
pub struct SimplicialArc {
    levels: Vec<ArcScheme>,
    faces: Vec<Vec<Morphism>>,
    degeneracies: Vec<Vec<Morphism>>,
}

impl SimplicialArc {
    pub fn level(&self, n: usize) -> Result<&ArcScheme> {
        self.levels
            .get(n)
            .ok_or(Error::LevelOutOfRange { level: n, max: self.levels.len().saturating_sub(1) })
    }

    pub fn levels(&self) -> &[ArcScheme] {
        &self.levels
    }

    /// `d_i : level n → level n-1`.
    pub fn face(&self, n: usize, i: usize) -> &Morphism {
        &self.faces[n][i]
    }

    /// `s_i : level n → level n+1`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &Morphism {
        &self.degeneracies[n][i]
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }
}

/// `∇^F_m X_•` up to level `n_max`: level `n` is `∇_{F(m)_n} X_n`.
///
/// For the fiber functor the face `d_i` precomposes with the inclusion
/// `m^{n} → m^{n+1}` placing the base point of `m` in slot `i`, and `s_i`
/// with the projection deleting factor `i`. Faces then satisfy the face
/// identities and `d_i s_i = id`; the remaining mixed identities need not hold.
pub fn simplicial_arc(
    base: &SimplicialScheme,
    sfp: &SimplicialFatPoint,
    n_max: usize,
    caps: &Caps,
) -> Result<SimplicialArc> {
    if sfp.tag() == FunctorTag::Symmetric {
        return Err(Error::SymmetricUnsupported);
    }
    if n_max > base.truncation() {
        return Err(Error::LevelOutOfRange { level: n_max, max: base.truncation() });
    }
    let mut levels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let fat = sfp.level(n)?;
        levels.push(weil_restrict(base.level(n), &fat, caps)?);
    }
    let base_len = sfp.base().ring().nvars();
    let mut faces = vec![Vec::new()];
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let iota = match sfp.tag() {
                FunctorTag::Trivial => identity_images(levels[n].point()),
                _ => insertion_images(base_len, n, i, levels[n - 1].point()),
            };
            row.push(arc_map(base.face(n, i), &levels[n], &levels[n - 1], &iota)?);
        }
        faces.push(row);
    }
    let mut degeneracies = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let iota = match sfp.tag() {
                FunctorTag::Trivial => identity_images(levels[n].point()),
                _ => projection_images(base_len, n, i, levels[n + 1].point()),
            };
            row.push(arc_map(base.degeneracy(n, i), &levels[n], &levels[n + 1], &iota)?);
        }
        degeneracies.push(row);
    }
    Ok(SimplicialArc { levels, faces, degeneracies })
}

fn identity_images(m: &FatPoint) -> Vec<Poly> {
    (0..m.ring().nvars()).map(|i| Poly::var(m.ring(), i)).collect()
}

/// Images of the variables of `m^{⊗(n+1)}` in `m^{⊗n}` dual to inserting the
/// base point of `m` as factor `i`: factor `i` goes to zero, later ones shift down.
fn insertion_images(base_len: usize, n: usize, i: usize, target: &FatPoint) -> Vec<Poly> {
    let ring = target.ring();
    (0..=n)
        .flat_map(|factor| (0..base_len).map(move |v| (factor, v)))
        .map(|(factor, v)| match factor.cmp(&i) {
            std::cmp::Ordering::Less => Poly::var(ring, factor * base_len + v),
            std::cmp::Ordering::Equal => Poly::zero(ring),
            std::cmp::Ordering::Greater => Poly::var(ring, (factor - 1) * base_len + v),
        })
        .collect()
}

/// Images of the variables of `m^{⊗(n+1)}` in `m^{⊗(n+2)}` skipping factor `i`.
fn projection_images(base_len: usize, n: usize, i: usize, target: &FatPoint) -> Vec<Poly> {
    let ring = target.ring();
    (0..=n)
        .flat_map(|factor| {
            let dest = if factor < i { factor } else { factor + 1 };
            (0..base_len).map(move |v| (dest, v))
        })
        .map(|(dest, v)| Poly::var(ring, dest * base_len + v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn caps() -> Caps {
        Caps::default()
    }

    fn scheme(field: Field, vars: &[&str], gens: &[&str]) -> SchemeRef {
        Arc::new(AffineScheme::parse("X", field, vars, gens).unwrap())
    }

    fn jet(field: Field, n: u32) -> FatPointRef {
        Arc::new(FatPoint::jet(field, "t", n).unwrap())
    }

    #[test]
    fn weil_restrict_examples() {
        let a1 = Arc::new(AffineScheme::affine_space(Field::Rationals, 1));
        let arc = weil_restrict(&a1, &jet(Field::Rationals, 2), &caps()).unwrap();
        assert_eq!(arc.scheme().ring().vars(), &["x_0".to_string(), "x_1".to_string()]);
        assert!(arc.scheme().equations().is_empty());

        // (x_0 + x_1 t)^2 = x_0^2 + 2 x_0 x_1 t mod t^2
        let x = scheme(Field::Rationals, &["x"], &["x^2"]);
        let arc = weil_restrict(&x, &jet(Field::Rationals, 2), &caps()).unwrap();
        let eqs: Vec<String> = arc.scheme().equations().iter().map(|e| e.to_string()).collect();
        assert_eq!(eqs, vec!["x_0^2", "2*x_0*x_1"]);

        let y = scheme(Field::Rationals, &["x", "y"], &["x^2 - y^3", "x*y - 1"]);
        let pt = Arc::new(FatPoint::point(Field::Rationals));
        let arc = weil_restrict(&y, &pt, &caps()).unwrap();
        assert!(arc.scheme().same_presentation(&y));
    }

    #[test]
    fn coordinate_and_equation_counts() {
        let x = scheme(Field::Prime(3), &["x", "y"], &["x*y", "x^3 - y"]);
        for n in 1..=4 {
            let arc = weil_restrict(&x, &jet(Field::Prime(3), n), &caps()).unwrap();
            assert_eq!(arc.scheme().nvars(), 2 * n as usize);
            assert_eq!(arc.raw_equation_count(), 2 * n as usize);
        }
    }

    #[test]
    fn arc_cap() {
        let a = Arc::new(AffineScheme::affine_space(Field::Prime(2), 10));
        let small = Caps { max_arc_coords: 20, ..Caps::default() };
        assert!(matches!(
            weil_restrict(&a, &jet(Field::Prime(2), 3), &small),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn adjunction_examples() {
        let f2 = Field::Prime(2);
        let x = scheme(f2, &["x"], &["x^2"]);
        let m = jet(f2, 2);
        let v = adjunction_check(&x, &m, &m, &caps()).unwrap();
        assert!(v.holds(), "{v:?}");
        let k = Arc::new(FatPoint::point(f2));
        let v = adjunction_check(&x, &m, &k, &caps()).unwrap();
        assert_eq!(v.product_side, 2);
        assert!(v.holds());
        let f3 = Field::Prime(3);
        let a1 = Arc::new(AffineScheme::affine_space(f3, 1));
        let v = adjunction_check(&a1, &jet(f3, 2), &Arc::new(FatPoint::point(f3)), &caps()).unwrap();
        assert_eq!((v.product_side, v.arc_side), (9, 9));
        assert!(v.holds());
    }

    #[test]
    fn truncation_examples() {
        let q = Field::Rationals;
        let a1 = Arc::new(AffineScheme::affine_space(q, 1));
        let t = truncation_map(&a1, &jet(q, 3), &jet(q, 2), &caps()).unwrap();
        let imgs: Vec<String> = t.images().iter().map(|p| p.to_string()).collect();
        assert_eq!(imgs, vec!["x_0", "x_1"]);
        let id = truncation_map(&a1, &jet(q, 3), &jet(q, 3), &caps()).unwrap();
        assert!(id.is_identity());
        let pt = Arc::new(FatPoint::point(q));
        let r = truncation_map(&a1, &jet(q, 3), &pt, &caps()).unwrap();
        assert_eq!(r.images()[0].to_string(), "x_0");
        assert!(matches!(
            truncation_map(&a1, &jet(q, 2), &jet(q, 3), &caps()),
            Err(Error::NotClosedImmersion(_))
        ));
    }

    #[test]
    fn truncation_is_functorial() {
        let f = Field::Prime(3);
        let x = scheme(f, &["x", "y"], &["y^2 - x^3 - x"]);
        let (m3, m2, m1) = (jet(f, 4), jet(f, 3), jet(f, 2));
        let a = truncation_map(&x, &m3, &m2, &caps()).unwrap();
        let b = truncation_map(&x, &m2, &m1, &caps()).unwrap();
        let direct = truncation_map(&x, &m3, &m1, &caps()).unwrap();
        let composite = a.then(&b).unwrap();
        assert_eq!(composite.images(), direct.images());
    }

    #[test]
    fn arc_dimension_examples() {
        let q = Field::Rationals;
        for d in 1..=3 {
            let a = Arc::new(AffineScheme::affine_space(q, d));
            for l in 1..=3 {
                assert_eq!(arc_dimension(&a, &jet(q, l), &caps()).unwrap().dim, d * l as usize);
            }
        }
        let pt = Arc::new(AffineScheme::point(q));
        assert_eq!(arc_dimension(&pt, &jet(q, 3), &caps()).unwrap().dim, 0);
        let x = scheme(q, &["x"], &["x^2"]);
        assert_eq!(arc_dimension(&x, &jet(q, 2), &caps()).unwrap().dim, 1);
    }

    #[test]
    fn simplicial_arc_levels() {
        let q = Field::Rationals;
        let a1: SchemeRef = Arc::new(AffineScheme::affine_space(q, 1));
        let m = jet(q, 2);
        let constant = SimplicialScheme::constant(a1.clone(), 2);
        let triv = SimplicialFatPoint::new(FunctorTag::Trivial, m.clone(), 2);
        let arc = simplicial_arc(&constant, &triv, 2, &caps()).unwrap();
        for lvl in arc.levels() {
            assert_eq!(lvl.scheme().nvars(), 2);
        }
        assert!(arc.face(1, 0).is_identity());

        let fib = SimplicialFatPoint::new(FunctorTag::Fiber, m.clone(), 2);
        let arc = simplicial_arc(&constant, &fib, 2, &caps()).unwrap();
        assert_eq!(arc.level(1).unwrap().scheme().nvars(), 4);
        assert!(arc.level(1).unwrap().scheme().equations().is_empty());
        assert_eq!(arc.truncation(), 2);

        let single = simplicial_arc(&constant, &triv, 0, &caps()).unwrap();
        let direct = weil_restrict(&a1, &m, &caps()).unwrap();
        assert!(single.level(0).unwrap().scheme().same_presentation(direct.scheme()));

        let sym = SimplicialFatPoint::new(FunctorTag::Symmetric, m, 2);
        assert!(matches!(simplicial_arc(&constant, &sym, 1, &caps()), Err(Error::SymmetricUnsupported)));
    }

    #[test]
    fn simplicial_arc_face_identities() {
        let f = Field::Prime(2);
        let x: SchemeRef = Arc::new(AffineScheme::parse("X", f, &["x"], &["x^2 - x"]).unwrap());
        let nerve = SimplicialScheme::nerve(x, 2).unwrap();
        let m = jet(f, 2);
        for tag in [FunctorTag::Trivial, FunctorTag::Fiber] {
            let sfp = SimplicialFatPoint::new(tag, m.clone(), 2);
            let arc = simplicial_arc(&nerve, &sfp, 2, &caps()).unwrap();
            // d_i d_j = d_{j-1} d_i for i < j, as maps level 2 → level 0
            for j in 1..=2 {
                for i in 0..j {
                    let lhs = arc.face(2, j).then(arc.face(1, i)).unwrap();
                    let rhs = arc.face(2, i).then(arc.face(1, j - 1)).unwrap();
                    assert_eq!(lhs.images(), rhs.images(), "{tag} d{i} d{j}");
                }
            }
            // d_i s_i = id
            for i in 0..=1 {
                let c = arc.degeneracy(1, i).then(arc.face(2, i)).unwrap();
                assert!(c.is_identity(), "{tag} d{i} s{i}");
            }
        }
    }
}
