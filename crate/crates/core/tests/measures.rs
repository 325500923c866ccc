use std::sync::Arc;

use motivic::battery::{fat_points, Generator};
use motivic::measure::{finite_measure, indexed_mode, lax_measure, limit_measure, stable_set_measure, Verdict};
use motivic::{
    Caps, FatPoint, FatPointRef, Field, FunctorTag, KClass, LaxRule, LimitSieve, MeasureQuery, MemberRule,
    PointSystem, SieveExpr, SimplicialSieve,
};
use num_rational::BigRational;

fn caps() -> Caps {
    Caps::default()
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

fn jets(f: Field, base: SieveExpr, rule: MemberRule, horizon: usize) -> LimitSieve {
    let sys = PointSystem::powers(f, &["t"], horizon).unwrap();
    LimitSieve::new(SimplicialSieve::constant(base, 0), sys, FunctorTag::Trivial, rule, &caps()).unwrap()
}

#[test]
fn full_arcs_of_affine_space_have_measure_one() {
    let f = Field::Prime(2);
    let g = Generator::new(0, f);
    for d in 1..=3 {
        let lim = jets(f, SieveExpr::full(g.affine(d)), MemberRule::FullArc, 8);
        let r = limit_measure(&MeasureQuery::new(lim).with_q(one()).unwrap(), &caps()).unwrap();
        assert_eq!(r.value0(), Some(KClass::one(f)), "d = {d}");
        for (n, (_, s)) in r.sequence.iter().enumerate() {
            assert_eq!(s.levels()[0], KClass::one(f), "term {n}");
        }
    }
}

#[test]
fn origin_arcs_have_measure_inverse_lefschetz() {
    let f = Field::Prime(3);
    let line = Generator::new(0, f).affine(1);
    let origin = SimplicialSieve::constant(SieveExpr::parse_closed(line.clone(), &["x"]).unwrap(), 0);
    let r = stable_set_measure(jets(f, SieveExpr::full(line), MemberRule::Cylinder(origin), 8), &caps()).unwrap();
    assert_eq!(r.value0(), Some(KClass::lefschetz(f, -1)));
}

#[test]
fn stabilized_values_survive_longer_horizons() {
    let f = Field::Prime(2);
    let line = Generator::new(0, f).affine(1);
    let lim = jets(f, SieveExpr::parse_open(line, "x").unwrap(), MemberRule::FullArc, 5);
    let base = MeasureQuery::new(lim).with_q(one()).unwrap();
    let first = limit_measure(&base.clone().with_stability(5, 3).unwrap(), &caps()).unwrap();
    let value = first.value().cloned().expect("stabilizes");
    for k in 1..=4 {
        let r = limit_measure(&base.clone().with_stability(5 + k, 3).unwrap(), &caps()).unwrap();
        assert_eq!(r.value(), Some(&value));
    }
    // counting the value agrees with counting every term of the final window
    for m in fat_points(f) {
        let v = value.h(0).unwrap().counting(&m, &caps()).unwrap();
        for (_, s) in first.sequence.iter().rev().take(3) {
            assert_eq!(s.h(0).unwrap().counting(&m, &caps()).unwrap(), v);
        }
    }
}

#[test]
fn singleton_systems_reproduce_finite_measures() {
    let mut g = Generator::new(21, Field::Prime(2));
    for i in 0..20 {
        if i == 10 {
            g.set_field(Field::Prime(3));
        }
        let f = g.field();
        let s = g.plain_sieve();
        let m: FatPointRef = fat_points(f)[i % 3].clone();
        let lim = LimitSieve::new(
            SimplicialSieve::constant(s.clone(), 0),
            PointSystem::singleton(m.clone()),
            FunctorTag::Trivial,
            MemberRule::FullArc,
            &caps(),
        )
        .unwrap();
        let r = limit_measure(&MeasureQuery::new(lim), &caps()).unwrap();
        assert_eq!(r.value0().unwrap(), finite_measure(&s, &m, &caps()).unwrap());
    }
}

#[test]
fn zero_lax_rule_is_the_limit_measure() {
    let f = Field::Prime(2);
    let mut g = Generator::new(3, f);
    for _ in 0..5 {
        let lim = jets(f, g.plain_sieve(), MemberRule::FullArc, 4);
        let q = MeasureQuery::new(lim).with_q(one()).unwrap().with_stability(4, 3).unwrap();
        let plain = limit_measure(&q, &caps()).unwrap();
        let lax = lax_measure(&q, LaxRule::zero(), &caps()).unwrap();
        assert_eq!(plain.classes(), lax.classes());
        assert_eq!(plain.verdict, lax.verdict);
        let idx = indexed_mode(&q, &caps()).unwrap();
        assert_eq!(idx.verdict(), plain.verdict);
    }
}

#[test]
fn divergent_lax_rule_is_indeterminate() {
    let f = Field::Prime(2);
    let line = Generator::new(0, f).affine(1);
    let q = MeasureQuery::new(jets(f, SieveExpr::full(line), MemberRule::FullArc, 8));
    let r = lax_measure(&q, LaxRule::Affine { slope: 2, offset: 0 }, &caps()).unwrap();
    assert_eq!(r.verdict, Verdict::Indeterminate { horizon: 8 });
    let r = lax_measure(&q, LaxRule::Affine { slope: 1, offset: 0 }, &caps()).unwrap();
    assert_eq!(r.value0(), Some(KClass::one(f)));
}

#[test]
fn empty_family_has_measure_zero() {
    let f = Field::Prime(3);
    let pt: FatPointRef = Arc::new(FatPoint::point(f));
    let line = Generator::new(0, f).affine(1);
    let r = stable_set_measure(jets(f, SieveExpr::full(line.clone()), MemberRule::Empty, 8), &caps()).unwrap();
    assert_eq!(r.value0(), Some(KClass::zero(f)));
    assert!(finite_measure(&SieveExpr::empty(line), &pt, &caps()).unwrap().is_zero());
}
