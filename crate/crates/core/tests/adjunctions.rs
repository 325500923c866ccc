use std::sync::Arc;

use motivic::battery::{small_fat_points, Generator};
use motivic::kring::{f_adjunction_check, pushforward_pullback_check, tau_adjunction_check};
use motivic::{
    adjunction_check, AffineScheme, Caps, FatPoint, FatPointRef, Field, Morphism, RelativeSieve, SchemeRef,
    SieveExpr, SimplicialSieve,
};

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn weil_restriction_adjunction_on_a_battery() {
    let mut checked = 0;
    for (seed, f) in [(1, Field::Prime(2)), (2, Field::Prime(3))] {
        let mut g = Generator::new(seed, f);
        for _ in 0..16 {
            let (x, m, a) = g.adjunction_triple();
            let v = adjunction_check(&x, &m, &a, &caps()).unwrap();
            assert!(v.holds(), "{x} at {m} tested on {a}: {v:?}");
            checked += 1;
        }
    }
    assert!(checked >= 30);
}

#[test]
fn tau_adjunction_at_level_zero_and_for_constant_targets() {
    let f = Field::Prime(2);
    let m: FatPointRef = Arc::new(FatPoint::point(f));
    let mut g = Generator::new(4, f);
    for _ in 0..10 {
        let y = g.sieve(&g.affine(1), 1);
        let (x, _) = g.simplicial_pair(2).unwrap();
        assert!(tau_adjunction_check(&y, &x, 0, &m, &caps()).unwrap().holds());
        let c = SimplicialSieve::constant(g.sieve(&g.affine(1), 2), 2);
        for n in 0..=2 {
            assert!(tau_adjunction_check(&y, &c, n, &m, &caps()).unwrap().holds());
        }
    }
}

fn squaring(f: Field) -> (SchemeRef, SchemeRef, Morphism) {
    let s: SchemeRef = Arc::new(AffineScheme::parse("S", f, &["a"], &[]).unwrap());
    let t: SchemeRef = Arc::new(AffineScheme::parse("T", f, &["b"], &[]).unwrap());
    let sq = Morphism::parse(s.clone(), t.clone(), &["a^2"]).unwrap();
    (s, t, sq)
}

fn over(base: &SchemeRef, eqs: &[&str]) -> RelativeSieve {
    let amb: SchemeRef = Arc::new(AffineScheme::parse("E", base.field(), &["a", "y"], &[]).unwrap());
    RelativeSieve::over_product(base, SieveExpr::parse_closed(amb, eqs).unwrap()).unwrap()
}

#[test]
fn base_change_adjunction_on_small_instances() {
    let xs = [&["y"][..], &["y - a"], &["y^2 - a"], &["a*y - 1"], &["y^2 + y"]];
    let ys = [&["y"][..], &["y^2 - a"], &["y - a"]];
    let mut count = 0;
    for f in [Field::Prime(2), Field::Prime(3)] {
        let (s, t, sq) = squaring(f);
        for m in small_fat_points(f).iter().take(1) {
            for xe in xs {
                for ye in ys {
                    let r = f_adjunction_check(&sq, &over(&s, xe), &over(&t, ye), m, &caps()).unwrap();
                    assert!(r.holds(), "{xe:?} / {ye:?}: {r:?}");
                    count += 1;
                }
            }
        }
    }
    assert!(count >= 10);
}

#[test]
fn base_change_is_compatible_with_classes() {
    let f = Field::Prime(3);
    let (s, t, sq) = squaring(f);
    let xs = vec![over(&s, &["y"]), over(&s, &["y^2 - a"])];
    let ys = vec![over(&t, &["y"]), over(&t, &["y^2 - a"])];
    let r = pushforward_pullback_check(&sq, &xs, &ys, &small_fat_points(f), &caps()).unwrap();
    assert!(r.holds(), "{r:?}");
    let id = Morphism::identity(s.clone());
    let r = pushforward_pullback_check(&id, &xs, &xs, &small_fat_points(f), &caps()).unwrap();
    assert!(r.holds() && r.push_multiplicative);
}
