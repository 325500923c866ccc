use motivic::battery::{fat_points, Generator};
use motivic::kring::{scissor_defect, KClass};
use motivic::{Caps, Field};
use num_rational::BigRational;
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

fn field_of(pick: bool) -> Field {
    if pick {
        Field::Prime(2)
    } else {
        Field::Prime(3)
    }
}

fn count(c: &KClass, field: Field) -> Vec<BigRational> {
    fat_points(field).iter().map(|m| c.counting(m, &caps()).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms_hold_in_normal_form(seed in any::<u64>(), pick in any::<bool>()) {
        let f = field_of(pick);
        let mut g = Generator::new(seed, f);
        let (a, b, c) = (g.class(&caps()).unwrap(), g.class(&caps()).unwrap(), g.class(&caps()).unwrap());
        let cp = caps();
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b, &cp).unwrap(), b.mul(&a, &cp).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b, &cp).unwrap().mul(&c, &cp).unwrap(),
            a.mul(&b.mul(&c, &cp).unwrap(), &cp).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap(), &cp).unwrap(),
            a.mul(&b, &cp).unwrap().add(&a.mul(&c, &cp).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&KClass::one(f), &cp).unwrap(), a.clone());
        prop_assert!(a.mul(&KClass::zero(f), &cp).unwrap().is_zero());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn counting_is_a_ring_homomorphism(seed in any::<u64>(), pick in any::<bool>()) {
        let f = field_of(pick);
        let mut g = Generator::new(seed, f);
        let (a, b) = (g.class(&caps()).unwrap(), g.class(&caps()).unwrap());
        let (ca, cb) = (count(&a, f), count(&b, f));
        let sum = count(&a.add(&b).unwrap(), f);
        let prod = count(&a.mul(&b, &caps()).unwrap(), f);
        for i in 0..ca.len() {
            prop_assert_eq!(&sum[i], &(&ca[i] + &cb[i]));
            prop_assert_eq!(&prod[i], &(&ca[i] * &cb[i]));
        }
    }

    #[test]
    fn scissor_relation_is_exact(seed in any::<u64>(), pick in any::<bool>()) {
        let f = field_of(pick);
        let mut g = Generator::new(seed, f);
        let a = g.plain_sieve();
        let b = g.sieve(a.ambient(), 2);
        prop_assert!(scissor_defect(&a, &b, &caps()).unwrap().is_zero());
    }

    #[test]
    fn class_counts_match_enumeration(seed in any::<u64>(), pick in any::<bool>()) {
        let f = field_of(pick);
        let mut g = Generator::new(seed, f);
        let s = g.plain_sieve();
        let c = KClass::of_sieve(&s, &caps()).unwrap();
        for m in fat_points(f) {
            let n = s.count(&m, &caps()).unwrap();
            prop_assert_eq!(c.counting(&m, &caps()).unwrap(), BigRational::from_integer(n.into()));
        }
    }

    #[test]
    fn normal_forms_are_fixed_points(seed in any::<u64>()) {
        let mut g = Generator::new(seed, Field::Prime(2));
        let a = g.class(&caps()).unwrap();
        prop_assert_eq!(a.renormalize(&caps()).unwrap(), a);
    }
}

#[test]
fn union_of_two_points_is_two() {
    let f = Field::Prime(3);
    let line = Generator::new(0, f).affine(1);
    let s = motivic::SieveExpr::parse_closed(line.clone(), &["x"])
        .unwrap()
        .union(&motivic::SieveExpr::parse_closed(line, &["x - 1"]).unwrap())
        .unwrap();
    assert_eq!(KClass::of_sieve(&s, &caps()).unwrap(), KClass::integer(f, 2));
}

#[test]
fn affine_plane_is_the_square_of_the_line() {
    let f = Field::Prime(2);
    let g = Generator::new(0, f);
    let a1 = KClass::of_scheme(&g.affine(1), &caps()).unwrap();
    let a2 = KClass::of_scheme(&g.affine(2), &caps()).unwrap();
    assert_eq!(a1.mul(&a1, &caps()).unwrap(), a2);
    assert_eq!(KClass::lefschetz(f, 1).mul(&KClass::lefschetz(f, -1), &caps()).unwrap(), KClass::one(f));
}
