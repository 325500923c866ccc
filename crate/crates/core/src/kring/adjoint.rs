//! Enumerated hom-set bijections for the truncation adjunction
//! `τ ⊣ (–)_•` and the base-change adjunction `f_* ⊣ f^*`.
//!
//! Morphisms are compared on `m`-points: a morphism of sieves is a map of
//! member sets commuting with the structure, enumerated in full under a cap.

use std::collections::HashMap;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::FatPointRef;
use crate::scheme::Morphism;
use crate::sieve::{RelativeSieve, SieveExpr, SimplicialSieve};

/// Sizes of both hom-sets and whether the two canonical maps are mutually
/// inverse on every enumerated morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub left: u64,
    pub right: u64,
    pub bijection: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.bijection
    }
}

/// Every function `domain → codomain`, as index vectors, when there are at
/// most `cap` of them.
fn functions(domain: usize, codomain: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
    let total = (codomain as u128).checked_pow(domain as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::CapExceeded(format!("{codomain}^{domain} morphisms to enumerate")));
    }
    let mut out = vec![Vec::with_capacity(domain)];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..codomain).map(move |c| {
                    let mut g = f.clone();
                    g.push(c);
                    g
                })
            })
            .collect();
    }
    Ok(out)
}

fn index_of(points: &[Vec<u32>]) -> HashMap<&[u32], usize> {
    points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect()
}

/// Checks `Hom((Y)_•, X_•) ≅ Hom(Y, X_n)` on `m`-points.
///
/// The left side is enumerated as maps from `Y(m)` to the simplicial maps
/// `pt_• → X_•(m)`, i.e. tuples `(x_0, …, x_N)` compatible with every face
/// and degeneracy. Restriction takes `x_n`; extension sends `x` to the tuple
/// generated by `d_0^n x` under `s_0`. For `n = 0` these are inverse for
/// every `X`; for `n > 0` they are inverse exactly when every `m`-point of
/// `X_n` is degenerate from level 0, e.g. for constant `X`.
pub fn tau_adjunction_check(
    y: &SieveExpr,
    x: &SimplicialSieve,
    n: usize,
    m: &FatPointRef,
    caps: &Caps,
) -> Result<AdjunctionReport> {
    let top = x.truncation();
    if n > top {
        return Err(Error::LevelOutOfRange { level: n, max: top });
    }
    let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
    let ys = y.points(m, caps)?;
    let pts: Vec<Vec<Vec<u32>>> = (0..=top).map(|k| x.level_points(k, m, caps)).collect::<Result<_>>()?;
    let index: Vec<HashMap<&[u32], usize>> = pts.iter().map(|p| index_of(p)).collect();
    let amb = x.ambient();
    let face = |k: usize, i: usize, p: &[u32]| amb.face(k, i).compiled().apply(table, p);
    let degen = |k: usize, i: usize, p: &[u32]| amb.degeneracy(k, i).compiled().apply(table, p);

    // compatible tuples, built level by level
    let mut tuples: Vec<Vec<usize>> = (0..pts[0].len()).map(|i| vec![i]).collect();
    for k in 1..=top {
        let mut next = Vec::new();
        for t in &tuples {
            let below = &pts[k - 1][t[k - 1]];
            for (j, p) in pts[k].iter().enumerate() {
                let faces_ok = (0..=k).all(|i| face(k, i, p) == *below);
                let degens_ok = (0..k).all(|i| degen(k - 1, i, below) == *p);
                if faces_ok && degens_ok {
                    let mut u = t.clone();
                    u.push(j);
                    next.push(u);
                }
            }
        }
        tuples = next;
    }
    let tuple_index: HashMap<&[usize], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();

    let restrict = |t: usize| tuples[t][n];
    let extend = |xn: usize| -> Option<usize> {
        let mut p = pts[n][xn].clone();
        for k in (1..=n).rev() {
            p = face(k, 0, &p);
        }
        let mut t = vec![*index[0].get(p.as_slice())?];
        for k in 1..=top {
            p = degen(k - 1, 0, &p);
            t.push(*index[k].get(p.as_slice())?);
        }
        tuple_index.get(t.as_slice()).copied()
    };

    let left_maps = functions(ys.len(), tuples.len(), caps.max_candidates)?;
    let right_maps = functions(ys.len(), pts[n].len(), caps.max_candidates)?;
    let ext: Vec<Option<usize>> = (0..pts[n].len()).map(extend).collect();
    let mut bijection = true;
    for h in &left_maps {
        let r: Vec<usize> = h.iter().map(|&t| restrict(t)).collect();
        let back: Option<Vec<usize>> = r.iter().map(|&xn| ext[xn]).collect();
        bijection &= back.as_ref() == Some(h);
    }
    for g in &right_maps {
        let back: Option<Vec<usize>> = g.iter().map(|&xn| ext[xn]).collect();
        bijection &= match back {
            Some(b) => b.iter().map(|&t| restrict(t)).eq(g.iter().copied()),
            None => false,
        };
    }
    Ok(AdjunctionReport { left: left_maps.len() as u64, right: right_maps.len() as u64, bijection })
}

/// Checks `Hom_{S'}(f_* X, Y) ≅ Hom_S(X, f^* Y)` on `m`-points for
/// `f : S → S'`, `X` over `S` and `Y` over `S'`.
///
/// A left morphism is `h : X(m) → Y(m)` with `j_Y h = f j_X`; a right one is
/// `k : X(m) → (S ×_{S'} Y)(m)` with `pr_S k = j_X`. The maps are
/// `h ↦ (x ↦ (j_X x, h x))` and `k ↦ pr_Y k`.
pub fn f_adjunction_check(
    f: &Morphism,
    x: &RelativeSieve,
    y: &RelativeSieve,
    m: &FatPointRef,
    caps: &Caps,
) -> Result<AdjunctionReport> {
    if !f.source().same_presentation(x.base()) || !f.target().same_presentation(y.base()) {
        return Err(Error::StructureMismatch("adjunction data over the wrong bases".into()));
    }
    let table = m.algebra().fp().ok_or_else(|| Error::InfiniteField(m.field().to_string()))?;
    let fy = y.pull(f)?;
    let xs = x.sieve().points(m, caps)?;
    let ys = y.sieve().points(m, caps)?;
    let zs = fy.sieve().points(m, caps)?;
    let z_index = index_of(&zs);
    let (jx, jy, fc) = (x.structure().compiled(), y.structure().compiled(), f.compiled());
    let ds = f.source().nvars();
    let fx: Vec<Vec<u32>> = xs.iter().map(|p| fc.apply(table, &jx.apply(table, p))).collect();
    let jxs: Vec<Vec<u32>> = xs.iter().map(|p| jx.apply(table, p)).collect();
    let jys: Vec<Vec<u32>> = ys.iter().map(|p| jy.apply(table, p)).collect();
    let jzs: Vec<Vec<u32>> = zs.iter().map(|p| p[..ds * m.length()].to_vec()).collect();
    let y_index = index_of(&ys);

    let left: Vec<Vec<usize>> = functions(xs.len(), ys.len(), caps.max_candidates)?
        .into_iter()
        .filter(|h| h.iter().enumerate().all(|(i, &yi)| jys[yi] == fx[i]))
        .collect();
    let right: Vec<Vec<usize>> = functions(xs.len(), zs.len(), caps.max_candidates)?
        .into_iter()
        .filter(|k| k.iter().enumerate().all(|(i, &zi)| jzs[zi] == jxs[i]))
        .collect();

    let to_right = |h: &[usize]| -> Option<Vec<usize>> {
        h.iter()
            .enumerate()
            .map(|(i, &yi)| {
                let mut p = jxs[i].clone();
                p.extend_from_slice(&ys[yi]);
                z_index.get(p.as_slice()).copied()
            })
            .collect()
    };
    let to_left = |k: &[usize]| -> Option<Vec<usize>> {
        k.iter().map(|&zi| y_index.get(&zs[zi][ds * m.length()..]).copied()).collect()
    };
    let mut bijection = true;
    for h in &left {
        bijection &= to_right(h).and_then(|k| to_left(&k)).as_deref() == Some(h.as_slice());
    }
    for k in &right {
        bijection &= to_left(k).and_then(|h| to_right(&h)).as_deref() == Some(k.as_slice());
    }
    Ok(AdjunctionReport { left: left.len() as u64, right: right.len() as u64, bijection })
}
