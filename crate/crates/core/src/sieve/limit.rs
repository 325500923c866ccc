//! Limit simplicial sieves: truncation-compatible families of sieves inside
//! the arc spaces of a base along a point system.

use std::collections::HashSet;

use super::{SieveExpr, SimplicialSieve};
use crate::arc::truncation_map;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fatpt::{FatPointRef, FunctorTag, PointSystem, SimplicialFatPoint};

/// How the member at each fat point of the system is produced.
#[derive(Clone, Debug)]
pub enum MemberRule {
    /// The full arc sieve of the base.
    FullArc,
    /// Arcs of the base whose residue lies in the given sieve, levelwise:
    /// the cylinder over a constructible set.
    Cylinder(SimplicialSieve),
    Empty,
    /// One member per system element, in the ambient of the base's arc there.
    Explicit(Vec<SimplicialSieve>),
}

#[derive(Clone, Debug)]
pub struct LimitSieve {
    base: SimplicialSieve,
    system: PointSystem,
    tag: FunctorTag,
    rule: MemberRule,
    members: Vec<SimplicialSieve>,
    arcs: Vec<SimplicialSieve>,
}

/// Outcome of the battery checks; `None` when the field is infinite and
/// nothing could be enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCheck {
    pub inclusion: Option<bool>,
    pub compatible: Option<bool>,
}

impl LimitSieve {
    pub fn new(
        base: SimplicialSieve,
        system: PointSystem,
        tag: FunctorTag,
        rule: MemberRule,
        caps: &Caps,
    ) -> Result<LimitSieve> {
        if let crate::fatpt::ChainVerdict::Failure { index, generator } = system.chain_check()? {
            return Err(Error::ChainFailure { index, generator });
        }
        if system.field() != base.field() {
            return Err(Error::FieldMismatch(system.field().to_string(), base.field().to_string()));
        }
        let points = system.members()?.to_vec();
        let mut members = Vec::with_capacity(points.len());
        let mut arcs = Vec::with_capacity(points.len());
        for (i, m) in points.iter().enumerate() {
            let sfp = SimplicialFatPoint::new(tag, m.clone(), base.truncation());
            let full = base.arc(&sfp, caps)?;
            let member = match &rule {
                MemberRule::FullArc => full.clone(),
                MemberRule::Empty => {
                    let levels = full.levels().iter().map(|l| SieveExpr::empty(l.ambient().clone())).collect();
                    SimplicialSieve::from_parts(full.ambient().clone(), levels)?
                }
                MemberRule::Cylinder(c) => {
                    let levels = (0..=base.truncation())
                        .map(|n| {
                            let lvl = c.level(n)?;
                            let fat = sfp.level(n)?;
                            full.levels()[n].inter(&lvl.cylinder(&fat, caps)?)
                        })
                        .collect::<Result<_>>()?;
                    SimplicialSieve::from_parts(full.ambient().clone(), levels)?
                }
                MemberRule::Explicit(list) => {
                    let s = list.get(i).ok_or_else(|| {
                        Error::Invalid(format!("explicit family has no member for system index {i}"))
                    })?;
                    for n in 0..=base.truncation() {
                        if !s.level(n)?.ambient().same_presentation(full.level(n)?.ambient()) {
                            return Err(Error::AmbientMismatch(format!(
                                "explicit member {i} is not inside the arc space at level {n}"
                            )));
                        }
                    }
                    s.clone()
                }
            };
            members.push(member);
            arcs.push(full);
        }
        Ok(LimitSieve { base, system, tag, rule, members, arcs })
    }

    pub fn base(&self) -> &SimplicialSieve {
        &self.base
    }

    pub fn system(&self) -> &PointSystem {
        &self.system
    }

    pub fn tag(&self) -> FunctorTag {
        self.tag
    }

    pub fn rule(&self) -> &MemberRule {
        &self.rule
    }

    pub fn members(&self) -> &[SimplicialSieve] {
        &self.members
    }

    /// The same limit sieve along a longer or shorter chain.
    pub fn with_horizon(&self, horizon: usize, caps: &Caps) -> Result<LimitSieve> {
        LimitSieve::new(self.base.clone(), self.system.with_horizon(horizon), self.tag, self.rule.clone(), caps)
    }

    /// Checks inclusion into the arc spaces and truncation compatibility of
    /// consecutive members, levelwise, at every battery fat point.
    pub fn check(&self, battery: &[FatPointRef], caps: &Caps) -> Result<LimitCheck> {
        if !self.base.field().is_finite() {
            return Ok(LimitCheck { inclusion: None, compatible: None });
        }
        let chain = self.system.members()?;
        for a in battery {
            for (i, (member, arc)) in self.members.iter().zip(&self.arcs).enumerate() {
                for n in 0..=self.base.truncation() {
                    let inside: HashSet<Vec<u32>> = arc.level_points(n, a, caps)?.into_iter().collect();
                    if member.level_points(n, a, caps)?.iter().any(|p| !inside.contains(p)) {
                        return Err(Error::InclusionFailure { index: i, level: n });
                    }
                }
            }
            let table = a.algebra().fp().expect("finite field").clone();
            for i in 0..self.members.len().saturating_sub(1) {
                for n in 0..=self.base.truncation() {
                    let sfp_big = SimplicialFatPoint::new(self.tag, chain[i + 1].clone(), self.base.truncation());
                    let sfp_small = SimplicialFatPoint::new(self.tag, chain[i].clone(), self.base.truncation());
                    let x = self.base.ambient().level(n);
                    let pi = truncation_map(x, &sfp_big.level(n)?, &sfp_small.level(n)?, caps)?.compiled();
                    let lower: HashSet<Vec<u32>> =
                        self.members[i].level_points(n, a, caps)?.into_iter().collect();
                    for p in self.members[i + 1].level_points(n, a, caps)? {
                        if !lower.contains(&pi.apply(&table, &p)) {
                            return Err(Error::Incompatible(i, i + 1));
                        }
                    }
                }
            }
        }
        Ok(LimitCheck { inclusion: Some(true), compatible: Some(true) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use crate::fatpt::FatPoint;
    use crate::field::Field;
    use crate::scheme::{AffineScheme, SchemeRef};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn full_arc_family_is_compatible() {
        let f2 = Field::Prime(2);
        let x: SchemeRef = Arc::new(AffineScheme::parse("X", f2, &["x"], &["x^2 - x"]).unwrap());
        let base = SimplicialSieve::constant(SieveExpr::full(x), 0);
        let sys = PointSystem::powers(f2, &["t"], 3).unwrap();
        let lim = LimitSieve::new(base, sys, FunctorTag::Trivial, MemberRule::FullArc, &caps()).unwrap();
        let pt = Arc::new(FatPoint::point(f2));
        let check = lim.check(&[pt], &caps()).unwrap();
        assert_eq!(check, LimitCheck { inclusion: Some(true), compatible: Some(true) });
    }

    #[test]
    fn singleton_point_system_gives_base() {
        let f3 = Field::Prime(3);
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f3, 1));
        let s = SieveExpr::parse_open(x, "x").unwrap();
        let base = SimplicialSieve::constant(s.clone(), 1);
        let pt = Arc::new(FatPoint::point(f3));
        let lim = LimitSieve::new(base, PointSystem::singleton(pt.clone()), FunctorTag::Trivial, MemberRule::FullArc, &caps())
            .unwrap();
        assert_eq!(lim.members()[0].levels()[0], s);
    }

    #[test]
    fn cylinder_family_and_failures() {
        let f2 = Field::Prime(2);
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(f2, 1));
        let base = SimplicialSieve::constant(SieveExpr::full(x.clone()), 0);
        let origin = SimplicialSieve::constant(SieveExpr::parse_closed(x.clone(), &["x"]).unwrap(), 0);
        let sys = PointSystem::powers(f2, &["t"], 3).unwrap();
        let lim = LimitSieve::new(base.clone(), sys.clone(), FunctorTag::Trivial, MemberRule::Cylinder(origin), &caps())
            .unwrap();
        let pt = Arc::new(FatPoint::point(f2));
        assert!(lim.check(&[pt.clone()], &caps()).is_ok());
        assert_eq!(lim.members()[2].count(0, &pt, &caps()).unwrap(), 4);

        // a family that jumps in and out of the origin is incompatible
        let members: Vec<SimplicialSieve> = sys
            .members()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let sfp = SimplicialFatPoint::new(FunctorTag::Trivial, m.clone(), 0);
                let full = base.arc(&sfp, &caps()).unwrap();
                let amb = full.levels()[0].ambient().clone();
                let eq = if i % 2 == 0 { "x_0" } else { "x_0 - 1" };
                let eq = if i == 0 { "x" } else { eq };
                let lvl = SieveExpr::parse_closed(amb, &[eq]).unwrap();
                SimplicialSieve::from_parts(full.ambient().clone(), vec![lvl]).unwrap()
            })
            .collect();
        let bad = LimitSieve::new(base, sys, FunctorTag::Trivial, MemberRule::Explicit(members), &caps()).unwrap();
        assert!(matches!(bad.check(&[pt], &caps()), Err(Error::Incompatible(0, 1))));
    }

    #[test]
    fn chain_failure_is_rejected() {
        let q = Field::Rationals;
        let x: SchemeRef = Arc::new(AffineScheme::affine_space(q, 1));
        let base = SimplicialSieve::constant(SieveExpr::full(x), 0);
        let big = Arc::new(FatPoint::jet(q, "t", 3).unwrap());
        let small = Arc::new(FatPoint::jet(q, "t", 2).unwrap());
        let sys = PointSystem::explicit(q, vec![big, small]).unwrap();
        assert!(matches!(
            LimitSieve::new(base, sys, FunctorTag::Trivial, MemberRule::FullArc, &caps()),
            Err(Error::ChainFailure { index: 0, .. })
        ));
    }
}
