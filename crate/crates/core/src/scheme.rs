//! Affine schemes of finite type, morphisms between them, and their points
//! with values in fat points.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{FpPoly, FpTable};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPoint, FatPointRef};
use crate::field::{Field, Scalar};
use crate::groebner::Ideal;
use crate::poly::{Poly, Ring, RingRef};

#[derive(Clone, Debug)]
pub struct AffineScheme {
    name: String,
    ideal: Ideal,
}

pub type SchemeRef = Arc<AffineScheme>;

impl AffineScheme {
    pub fn new(name: impl Into<String>, ideal: Ideal) -> Result<AffineScheme> {
        for v in ideal.ring().vars() {
            if v.starts_with('_') {
                return Err(Error::Invalid(format!(
                    "variable `{v}`: names starting with `_` are reserved"
                )));
            }
        }
        Ok(AffineScheme { name: name.into(), ideal })
    }

    pub fn parse(name: &str, field: Field, vars: &[&str], gens: &[&str]) -> Result<AffineScheme> {
        let ring = Ring::new(field, vars.iter().map(|s| s.to_string()).collect())?;
        AffineScheme::new(name, Ideal::parse(&ring, gens)?)
    }

    /// `A^d` with coordinates `x0..x{d-1}` (or `x` when `d == 1`).
    pub fn affine_space(field: Field, d: usize) -> AffineScheme {
        let vars: Vec<String> = if d == 1 {
            vec!["x".to_string()]
        } else {
            (0..d).map(|i| format!("x{i}")).collect()
        };
        let ring = Ring::new(field, vars).expect("valid names");
        AffineScheme::new(format!("A{d}"), Ideal::zero(&ring)).expect("valid")
    }

    /// `Spec k`.
    pub fn point(field: Field) -> AffineScheme {
        let ring = Ring::with_vars::<&str>(field, &[]);
        AffineScheme::new("pt", Ideal::zero(&ring)).expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> AffineScheme {
        AffineScheme { name: name.into(), ideal: self.ideal.clone() }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &RingRef {
        self.ideal.ring()
    }

    pub fn field(&self) -> Field {
        self.ring().field()
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn equations(&self) -> &[Poly] {
        self.ideal.generators()
    }

    pub fn check_caps(&self, caps: &Caps) -> Result<()> {
        if self.nvars() > caps.max_vars {
            return Err(Error::CapExceeded(format!(
                "{} has {} variables (cap {})",
                self.name,
                self.nvars(),
                caps.max_vars
            )));
        }
        if let Some(g) = self.equations().iter().find(|g| g.total_degree() > caps.max_degree) {
            return Err(Error::CapExceeded(format!(
                "generator `{g}` exceeds degree cap {}",
                caps.max_degree
            )));
        }
        Ok(())
    }

    /// Same presentation (variables and generator set), ignoring the name.
    pub fn same_presentation(&self, other: &AffineScheme) -> bool {
        self.ring() == other.ring() && self.equations() == other.equations()
    }

    /// `X × Y` with the variables of `other` renamed on collision; returns the
    /// product and the variable maps of both factors.
    pub fn product(&self, other: &AffineScheme) -> Result<(AffineScheme, Vec<usize>, Vec<usize>)> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        let mut vars = self.ring().vars().to_vec();
        let map_a: Vec<usize> = (0..vars.len()).collect();
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
        let mut gens: Vec<Poly> = self.equations().iter().map(|g| g.embed(&ring, &map_a)).collect();
        gens.extend(other.equations().iter().map(|g| g.embed(&ring, &map_b)));
        let prod = AffineScheme::new(format!("{}*{}", self.name, other.name), Ideal::new(&ring, gens)?)?;
        Ok((prod, map_a, map_b))
    }
}

impl fmt::Display for AffineScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nvars() == 0 {
            return write!(f, "Spec k");
        }
        write!(f, "Spec k[{}]", self.ring().vars().join(","))?;
        if !self.equations().is_empty() {
            write!(f, "/{}", self.ideal)?;
        }
        Ok(())
    }
}

/// A morphism `source → target` given by polynomial images of the target coordinates.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: SchemeRef,
    target: SchemeRef,
    images: Vec<Poly>,
}

pub type MorphismRef = Arc<Morphism>;

impl Morphism {
    pub fn new(source: SchemeRef, target: SchemeRef, images: Vec<Poly>) -> Result<Morphism> {
        if images.len() != target.nvars() {
            return Err(Error::InvalidMorphism(format!(
                "{} images for {} target coordinates",
                images.len(),
                target.nvars()
            )));
        }
        for p in &images {
            p.check_ring(source.ring())?;
        }
        for f in target.equations() {
            let pulled = f.compose(&images, source.ring());
            if !source.ideal().contains(&pulled)? {
                return Err(Error::InvalidMorphism(format!(
                    "equation `{f}` of {} does not pull back into the ideal of {}",
                    target.name(),
                    source.name()
                )));
            }
        }
        Ok(Morphism { source, target, images })
    }

    pub fn parse(source: SchemeRef, target: SchemeRef, images: &[&str]) -> Result<Morphism> {
        let polys = images
            .iter()
            .map(|s| Poly::parse(source.ring(), s))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, polys)
    }

    pub fn identity(x: SchemeRef) -> Morphism {
        let images = (0..x.nvars()).map(|i| Poly::var(x.ring(), i)).collect();
        Morphism { source: x.clone(), target: x, images }
    }

    pub fn source(&self) -> &SchemeRef {
        &self.source
    }

    pub fn target(&self) -> &SchemeRef {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Pulls a polynomial on the target back to the source.
    pub fn pull(&self, g: &Poly) -> Poly {
        g.compose(&self.images, self.source.ring())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if !self.target.same_presentation(&other.source) {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        let images = other.images.iter().map(|g| self.pull(g)).collect();
        Ok(Morphism { source: self.source.clone(), target: other.target.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_presentation(&self.target)
            && self.images.iter().enumerate().all(|(i, p)| *p == Poly::var(self.source.ring(), i))
    }

    pub fn compiled(&self) -> CompiledMorphism {
        CompiledMorphism {
            images: self.images.iter().map(FpPoly::compile).collect(),
            source_vars: self.source.nvars(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledMorphism {
    images: Vec<FpPoly>,
    source_vars: usize,
}

impl CompiledMorphism {
    pub fn apply(&self, alg: &FpTable, point: &[u32]) -> Vec<u32> {
        let d = alg.dim;
        let values: Vec<&[u32]> = if d == 0 {
            vec![&[][..]; self.source_vars]
        } else {
            point.chunks(d).collect()
        };
        let mut out = Vec::with_capacity(self.images.len() * d);
        for img in &self.images {
            out.extend(img.eval(alg, &values));
        }
        out
    }
}

/// An `m`-valued point: coordinates of `x_i ↦ O_m` over the standard basis.
#[derive(Clone, Debug)]
pub struct SchemePoint {
    pub target: FatPointRef,
    pub images: Vec<Vec<Scalar>>,
}

impl SchemePoint {
    pub fn new(x: &AffineScheme, target: FatPointRef, images: Vec<Vec<Scalar>>) -> Result<SchemePoint> {
        if images.len() != x.nvars() || images.iter().any(|v| v.len() != target.length()) {
            return Err(Error::Invalid("point has the wrong shape".into()));
        }
        let alg = target.algebra();
        for f in x.equations() {
            if alg.eval(f, &images).iter().any(|c| !num_traits::Zero::is_zero(c)) {
                return Err(Error::Invalid(format!("equation `{f}` does not vanish at the point")));
            }
        }
        Ok(SchemePoint { target, images })
    }

    /// Builds from polynomials in the fat point's variables, one per coordinate.
    pub fn from_polys(x: &AffineScheme, target: FatPointRef, images: &[&str]) -> Result<SchemePoint> {
        let coords = images
            .iter()
            .map(|s| target.algebra().coords(&Poly::parse(target.ring(), s)?))
            .collect::<Result<Vec<_>>>()?;
        SchemePoint::new(x, target, coords)
    }

    pub fn flat(&self) -> Vec<u32> {
        let f = self.target.field();
        self.images.iter().flat_map(|v| v.iter().map(move |c| f.to_residue(c))).collect()
    }

    pub fn from_flat(target: FatPointRef, nvars: usize, flat: &[u32]) -> SchemePoint {
        let f = target.field();
        let d = target.length();
        let images = (0..nvars)
            .map(|i| flat[i * d..(i + 1) * d].iter().map(|c| f.from_u32(*c)).collect())
            .collect();
        SchemePoint { target, images }
    }

    pub fn format(&self) -> String {
        let alg = self.target.algebra();
        let parts: Vec<String> = self.images.iter().map(|v| alg.to_poly(v).to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

fn fp_table(m: &FatPoint) -> Result<&Arc<FpTable>> {
    m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))
}

/// Depth-first enumeration of `Hom(Spec O_m, X)` over `F_p`, rejecting each
/// equation as soon as all of its variables are assigned. Points come out as
/// flat coordinate vectors in lexicographic digit order.
pub fn enumerate_flat(
    ring: &RingRef,
    equations: &[Poly],
    m: &FatPoint,
    caps: &Caps,
) -> Result<Vec<Vec<u32>>> {
    let alg = fp_table(m)?;
    let n = ring.nvars();
    let d = alg.dim;
    let compiled: Vec<FpPoly> = equations.iter().map(FpPoly::compile).collect();
    if compiled.iter().zip(equations).any(|(c, e)| c.last_var.is_none() && !e.is_zero()) {
        return Ok(Vec::new());
    }
    let mut by_var: Vec<Vec<&FpPoly>> = vec![Vec::new(); n];
    for c in &compiled {
        if let Some(v) = c.last_var {
            by_var[v].push(c);
        }
    }
    let size = alg.size();
    let mut out = Vec::new();
    let mut current = vec![0u32; n * d];
    let mut visited = 0u64;
    let mut stack: Vec<u64> = vec![0; n];
    if n == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    // iterative DFS over variable slots
    let mut level = 0usize;
    loop {
        if stack[level] >= size {
            if level == 0 {
                break;
            }
            stack[level] = 0;
            level -= 1;
            stack[level] += 1;
            continue;
        }
        visited += 1;
        if visited > caps.max_candidates {
            return Err(Error::CapExceeded(format!(
                "point enumeration visited more than {} candidates",
                caps.max_candidates
            )));
        }
        let elem = alg.element(stack[level]);
        current[level * d..(level + 1) * d].copy_from_slice(&elem);
        let values: Vec<&[u32]> = if d == 0 { vec![&[][..]; n] } else { current.chunks(d).collect() };
        let ok = by_var[level].iter().all(|e| e.is_zero_at(alg, &values));
        if ok {
            if level + 1 == n {
                out.push(current.clone());
                stack[level] += 1;
            } else {
                level += 1;
                stack[level] = 0;
            }
        } else {
            stack[level] += 1;
        }
    }
    Ok(out)
}

/// All points of `X` with values in `m` (finite fields only).
pub fn points(x: &AffineScheme, m: &FatPointRef, caps: &Caps) -> Result<Vec<SchemePoint>> {
    if x.field() != m.field() {
        return Err(Error::FieldMismatch(x.field().to_string(), m.field().to_string()));
    }
    let flat = enumerate_flat(x.ring(), x.equations(), m, caps)?;
    Ok(flat.iter().map(|p| SchemePoint::from_flat(m.clone(), x.nvars(), p)).collect())
}

pub fn count_points(x: &AffineScheme, m: &FatPoint, caps: &Caps) -> Result<usize> {
    if x.field() != m.field() {
        return Err(Error::FieldMismatch(x.field().to_string(), m.field().to_string()));
    }
    Ok(enumerate_flat(x.ring(), x.equations(), m, caps)?.len())
}

/// A truncated simplicial affine scheme: levels `X_0..X_N` with face maps
/// `d_i : X_n → X_{n-1}` and degeneracies `s_i : X_n → X_{n+1}`.
#[derive(Clone, Debug)]
pub struct SimplicialScheme {
    levels: Vec<SchemeRef>,
    faces: Vec<Vec<Morphism>>,
    degeneracies: Vec<Vec<Morphism>>,
}

impl SimplicialScheme {
    /// Builds from explicit data after checking shapes and the simplicial identities.
    pub fn from_parts(
        levels: Vec<SchemeRef>,
        faces: Vec<Vec<Morphism>>,
        degeneracies: Vec<Vec<Morphism>>,
    ) -> Result<SimplicialScheme> {
        let n = levels.len();
        if n == 0 || faces.len() != n || degeneracies.len() + 1 != n {
            return Err(Error::StructureMismatch("simplicial data has the wrong number of levels".into()));
        }
        for (k, row) in faces.iter().enumerate() {
            let want = if k == 0 { 0 } else { k + 1 };
            if row.len() != want {
                return Err(Error::StructureMismatch(format!("level {k} needs {want} faces")));
            }
            for d in row {
                if !d.source().same_presentation(&levels[k]) || !d.target().same_presentation(&levels[k - 1]) {
                    return Err(Error::StructureMismatch(format!("face at level {k} has wrong endpoints")));
                }
            }
        }
        for (k, row) in degeneracies.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(Error::StructureMismatch(format!("level {k} needs {} degeneracies", k + 1)));
            }
            for s in row {
                if !s.source().same_presentation(&levels[k]) || !s.target().same_presentation(&levels[k + 1]) {
                    return Err(Error::StructureMismatch(format!("degeneracy at level {k} has wrong endpoints")));
                }
            }
        }
        let x = SimplicialScheme { levels, faces, degeneracies };
        if let Some(msg) = x.identity_violation() {
            return Err(Error::IdentityViolation(msg));
        }
        Ok(x)
    }

    /// The constant simplicial scheme on `x`, all maps identities.
    pub fn constant(x: SchemeRef, truncation: usize) -> SimplicialScheme {
        let id = Morphism::identity(x.clone());
        SimplicialScheme {
            levels: vec![x; truncation + 1],
            faces: (0..=truncation).map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] }).collect(),
            degeneracies: (0..truncation).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    /// The Čech nerve of `x → Spec k`: level `n` is `x^{n+1}` with coordinates
    /// `{v}_{k}` for factor `k`, faces delete a factor, degeneracies repeat one.
    pub fn nerve(x: SchemeRef, truncation: usize) -> Result<SimplicialScheme> {
        let nv = x.nvars();
        let mut levels: Vec<SchemeRef> = vec![x.clone()];
        for n in 1..=truncation {
            let vars: Vec<String> = (0..=n)
                .flat_map(|k| x.ring().vars().iter().map(move |v| format!("{v}_{k}")))
                .collect();
            let ring = Ring::new(x.field(), vars)?;
            let mut gens = Vec::new();
            for k in 0..=n {
                let map: Vec<usize> = (0..nv).map(|v| k * nv + v).collect();
                gens.extend(x.equations().iter().map(|g| g.embed(&ring, &map)));
            }
            levels.push(Arc::new(AffineScheme::new(format!("{}^{}", x.name(), n + 1), Ideal::new(&ring, gens)?)?));
        }
        let factor_map = |src: &SchemeRef, tgt: &SchemeRef, factors: Vec<usize>| {
            let images = factors
                .iter()
                .flat_map(|&f| (0..nv).map(move |v| f * nv + v))
                .map(|i| Poly::var(src.ring(), i))
                .collect();
            Morphism { source: src.clone(), target: tgt.clone(), images }
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=truncation {
            faces.push(
                (0..=n)
                    .map(|i| {
                        let fs = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
                        factor_map(&levels[n], &levels[n - 1], fs)
                    })
                    .collect(),
            );
        }
        let degeneracies = (0..truncation)
            .map(|n| {
                (0..=n)
                    .map(|i| {
                        let fs = (0..n + 2).map(|k| if k <= i { k } else { k - 1 }).collect();
                        factor_map(&levels[n], &levels[n + 1], fs)
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialScheme { levels, faces, degeneracies })
    }

    /// Builds from explicit data without checking the simplicial identities.
    pub fn from_parts_unchecked(
        levels: Vec<SchemeRef>,
        faces: Vec<Vec<Morphism>>,
        degeneracies: Vec<Vec<Morphism>>,
    ) -> SimplicialScheme {
        SimplicialScheme { levels, faces, degeneracies }
    }

    /// Levelwise product, with the face and degeneracy maps acting factorwise.
    pub fn product(&self, other: &SimplicialScheme) -> Result<SimplicialScheme> {
        let top = self.truncation().min(other.truncation());
        let mut levels = Vec::with_capacity(top + 1);
        let mut maps = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let (p, ma, mb) = self.levels[n].product(&other.levels[n])?;
            levels.push(Arc::new(p));
            maps.push((ma, mb));
        }
        let pair = |f: &Morphism, g: &Morphism, src: usize, tgt: usize| -> Morphism {
            let ring = levels[src].ring();
            let mut images = vec![Poly::zero(ring); levels[tgt].nvars()];
            for (i, img) in f.images().iter().enumerate() {
                images[maps[tgt].0[i]] = img.embed(ring, &maps[src].0);
            }
            for (j, img) in g.images().iter().enumerate() {
                images[maps[tgt].1[j]] = img.embed(ring, &maps[src].1);
            }
            Morphism { source: levels[src].clone(), target: levels[tgt].clone(), images }
        };
        let faces = (0..=top)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    (0..=n).map(|i| pair(&self.faces[n][i], &other.faces[n][i], n, n - 1)).collect()
                }
            })
            .collect();
        let degeneracies = (0..top)
            .map(|n| (0..=n).map(|i| pair(&self.degeneracies[n][i], &other.degeneracies[n][i], n, n + 1)).collect())
            .collect();
        Ok(SimplicialScheme { levels, faces, degeneracies })
    }

    /// Keeps levels `0..=n`.
    pub fn truncated(&self, n: usize) -> SimplicialScheme {
        let n = n.min(self.truncation());
        SimplicialScheme {
            levels: self.levels[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            degeneracies: self.degeneracies[..n].to_vec(),
        }
    }

    /// Whether both have the same level presentations and maps.
    pub fn same_structure(&self, other: &SimplicialScheme) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| a.same_presentation(b))
            && self.faces.iter().zip(&other.faces).all(|(a, b)| {
                a.iter().zip(b).all(|(f, g)| f.images() == g.images())
            })
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn field(&self) -> Field {
        self.levels[0].field()
    }

    pub fn level(&self, n: usize) -> &SchemeRef {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[SchemeRef] {
        &self.levels
    }

    pub fn face(&self, n: usize, i: usize) -> &Morphism {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &Morphism {
        &self.degeneracies[n][i]
    }

    /// First simplicial identity that fails, compared on coordinate images.
    pub fn identity_violation(&self) -> Option<String> {
        let same = |a: &Morphism, b: &Morphism| a.images() == b.images();
        let top = self.truncation();
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    let l = self.faces[n][j].then(&self.faces[n - 1][i]).ok()?;
                    let r = self.faces[n][i].then(&self.faces[n - 1][j - 1]).ok()?;
                    if !same(&l, &r) {
                        return Some(format!("d{i} d{j} at level {n}"));
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let ds = self.degeneracies[n][j].then(&self.faces[n + 1][i]).ok()?;
                    let ok = if i == j || i == j + 1 {
                        ds.is_identity() || same(&ds, &Morphism::identity(self.levels[n].clone()))
                    } else if i < j {
                        let r = self.faces[n][i].then(&self.degeneracies[n - 1][j - 1]).ok()?;
                        same(&ds, &r)
                    } else {
                        let r = self.faces[n][i - 1].then(&self.degeneracies[n - 1][j]).ok()?;
                        same(&ds, &r)
                    };
                    if !ok {
                        return Some(format!("d{i} s{j} at level {n}"));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let l = self.degeneracies[n][j].then(&self.degeneracies[n + 1][i]).ok()?;
                    let r = self.degeneracies[n][i].then(&self.degeneracies[n + 1][j + 1]).ok()?;
                    if !same(&l, &r) {
                        return Some(format!("s{i} s{j} at level {n}"));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::Prime(2)
    }

    #[test]
    fn points_examples() {
        let caps = Caps::default();
        let m = Arc::new(FatPoint::jet(f2(), "t", 2).unwrap());
        let a1 = AffineScheme::affine_space(f2(), 1);
        assert_eq!(points(&a1, &m, &caps).unwrap().len(), 4);

        let x = AffineScheme::parse("X", f2(), &["x"], &["x^2"]).unwrap();
        let pts = points(&x, &m, &caps).unwrap();
        let shown: Vec<String> = pts.iter().map(|p| p.format()).collect();
        assert_eq!(shown, vec!["(0)", "(t)"]);

        let pt = AffineScheme::point(f2());
        assert_eq!(points(&pt, &m, &caps).unwrap().len(), 1);
    }

    #[test]
    fn brute_force_agrees_with_dfs() {
        // oracle: test every tuple against every equation
        let caps = Caps::default();
        let m = Arc::new(FatPoint::parse(Field::Prime(3), &["t"], &["t^2"]).unwrap());
        let x = AffineScheme::parse("X", Field::Prime(3), &["x", "y"], &["x*y", "x^2 - y^3"]).unwrap();
        let alg = m.algebra();
        let mut brute = 0;
        for a0 in 0..3u32 {
            for a1 in 0..3u32 {
                for b0 in 0..3u32 {
                    for b1 in 0..3u32 {
                        let f = alg.field();
                        let img = vec![vec![f.from_u32(a0), f.from_u32(a1)], vec![f.from_u32(b0), f.from_u32(b1)]];
                        if x.equations().iter().all(|e| alg.eval(e, &img).iter().all(num_traits::Zero::is_zero)) {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count_points(&x, &m, &caps).unwrap(), brute);
    }

    #[test]
    fn rationals_cannot_enumerate() {
        let m = Arc::new(FatPoint::point(Field::Rationals));
        let a1 = AffineScheme::affine_space(Field::Rationals, 1);
        assert!(matches!(points(&a1, &m, &Caps::default()), Err(Error::InfiniteField(_))));
    }

    #[test]
    fn enumeration_cap() {
        let caps = Caps { max_candidates: 10, ..Caps::default() };
        let m = Arc::new(FatPoint::point(Field::Prime(5)));
        let a2 = AffineScheme::affine_space(Field::Prime(5), 2);
        assert!(matches!(points(&a2, &m, &caps), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn morphism_validation() {
        let a1: SchemeRef = Arc::new(AffineScheme::affine_space(f2(), 1));
        let x: SchemeRef = Arc::new(AffineScheme::parse("X", f2(), &["x"], &["x^2"]).unwrap());
        assert!(Morphism::parse(a1.clone(), x.clone(), &["x"]).is_err());
        assert!(Morphism::parse(x.clone(), a1.clone(), &["x"]).is_ok());
        let sq = Morphism::parse(a1.clone(), a1.clone(), &["x^2"]).unwrap();
        let comp = sq.then(&sq).unwrap();
        assert_eq!(comp.images()[0].to_string(), "x^4");
    }

    #[test]
    fn nerve_satisfies_identities() {
        let x: SchemeRef = Arc::new(AffineScheme::parse("X", f2(), &["x", "y"], &["x*y"]).unwrap());
        let nerve = SimplicialScheme::nerve(x.clone(), 3).unwrap();
        assert_eq!(nerve.level(2).nvars(), 6);
        assert_eq!(nerve.identity_violation(), None);
        let c = SimplicialScheme::constant(x, 3);
        assert_eq!(c.identity_violation(), None);
        let rebuilt = SimplicialScheme::from_parts(
            nerve.levels().to_vec(),
            nerve.faces.clone(),
            nerve.degeneracies.clone(),
        );
        assert!(rebuilt.is_ok());
    }

    #[test]
    fn broken_identities_are_reported() {
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f2(), 1));
        let mut nerve = SimplicialScheme::nerve(x, 2).unwrap();
        nerve.faces[1].swap(0, 1);
        assert!(nerve.identity_violation().is_some());
    }
}
