use motivic::battery::{fat_points, Generator};
use motivic::kring::{SimplicialKRing, SiteRegistry};
use motivic::{Caps, Field, FunctorTag, KClass, SimplicialClass, SimplicialScheme, SimplicialSieve};
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn truncation_of_the_simplicial_lefschetz_motive() {
    for f in [Field::Prime(2), Field::Prime(3), Field::Rationals] {
        let l = SimplicialClass::lefschetz(f, 1, 4);
        for n in 0..=4 {
            assert_eq!(l.h(n).unwrap(), KClass::lefschetz(f, 1));
        }
    }
}

#[test]
fn truncation_splits_the_constant_functor() {
    let mut g = Generator::new(11, Field::Prime(2));
    for i in 0..100 {
        if i == 50 {
            g.set_field(Field::Prime(3));
        }
        let c = g.class(&caps()).unwrap();
        let s = SimplicialClass::g(&c, FunctorTag::Trivial, 3, &caps()).unwrap();
        for n in 0..=3 {
            assert_eq!(s.h(n).unwrap(), c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncation_is_a_ring_homomorphism(seed in any::<u64>()) {
        let f = Field::Prime(2);
        let mut g = Generator::new(seed, f);
        let (a, b) = g.simplicial_pair_with(2, 1).unwrap();
        let fib = SimplicialSieve::fiber(g.plain_sieve(), 2).unwrap();
        let ca = SimplicialClass::of_sieve(&a, &caps()).unwrap();
        let cb = SimplicialClass::of_sieve(&b, &caps()).unwrap();
        let cf = SimplicialClass::of_sieve(&fib, &caps()).unwrap();
        for (x, y) in [(&ca, &cb), (&ca, &cf), (&cf, &cf)] {
            let sum = x.add(y).unwrap();
            let prod = x.mul(y, &caps()).unwrap();
            for n in 0..=2 {
                let (hx, hy) = (x.h(n).unwrap(), y.h(n).unwrap());
                prop_assert_eq!(sum.h(n).unwrap(), hx.add(&hy).unwrap());
                prop_assert_eq!(prod.h(n).unwrap(), hx.mul(&hy, &caps()).unwrap());
            }
        }
        // levelwise classes count the levels of the sieve
        for m in fat_points(f).iter().take(2) {
            for n in 0..=2 {
                let k = a.count(n, m, &caps()).unwrap();
                prop_assert_eq!(ca.counting(m, n, &caps()).unwrap(), num_rational::BigRational::from_integer(k.into()));
            }
        }
    }

    #[test]
    fn fiber_functor_is_multiplicative(seed in any::<u64>()) {
        let f = Field::Prime(3);
        let mut g = Generator::new(seed, f);
        let (a, b) = (g.class(&caps()).unwrap(), g.class(&caps()).unwrap());
        let ga = SimplicialClass::g(&a, FunctorTag::Fiber, 2, &caps()).unwrap();
        let gb = SimplicialClass::g(&b, FunctorTag::Fiber, 2, &caps()).unwrap();
        let gab = SimplicialClass::g(&a.mul(&b, &caps()).unwrap(), FunctorTag::Fiber, 2, &caps()).unwrap();
        prop_assert_eq!(ga.mul(&gb, &caps()).unwrap(), gab);
    }
}

#[test]
fn functor_maps_fix_zero_and_one() {
    let f = Field::Prime(2);
    for tag in [FunctorTag::Trivial, FunctorTag::Fiber, FunctorTag::Symmetric] {
        let one = SimplicialClass::g(&KClass::one(f), tag, 3, &caps()).unwrap();
        let zero = SimplicialClass::g(&KClass::zero(f), tag, 3, &caps()).unwrap();
        for n in 0..=3 {
            assert_eq!(one.h(n).unwrap(), KClass::one(f));
            assert!(zero.h(n).unwrap().is_zero());
        }
    }
}

#[test]
fn face_maps_on_the_nerve_satisfy_the_identities() {
    let f = Field::Prime(2);
    let g = Generator::new(1, f);
    let nerve = SimplicialScheme::nerve(g.affine(1), 3).unwrap();
    let ring = SimplicialKRing::new(nerve);
    for n in 2..=3 {
        let u = ring.unit(n, &caps()).unwrap();
        for c in [u.clone(), u.shift(2), u.add(&u).unwrap()] {
            assert_eq!(ring.check_face_identities(&c, n, &caps()).unwrap(), None);
        }
        let low = ring.unit(n - 2, &caps()).unwrap();
        assert_eq!(ring.check_pull_identities(&low, n, &caps()).unwrap(), None);
    }
}

#[test]
fn strictly_schemic_sites_have_injective_truncations() {
    let f = Field::Prime(3);
    let reg = SiteRegistry::new();
    let mut g = Generator::new(5, f);
    for i in 0..6 {
        let c = g.class(&caps()).unwrap();
        reg.register(format!("c{i}"), SimplicialClass::constant(&c, 2));
    }
    assert!(reg.is_strictly_schemic());
    for n in 0..=2 {
        assert_eq!(reg.h_injective_on_generators(n).unwrap(), Some(true));
    }
}
