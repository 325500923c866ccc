use motivic::battery::Generator;
use motivic::topo::{euler_battery, preservation_check, FiniteSimplicialSet, HomologyGroup};
use motivic::{Caps, FatPoint, FatPointRef, Field};
use std::sync::Arc;

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn boundary_of_the_triangle_is_a_circle() {
    let inv = FiniteSimplicialSet::boundary(2, 2).invariants(&caps()).unwrap();
    assert_eq!(inv.components, 1);
    assert_eq!(inv.euler_characteristic, 0);
    assert_eq!(inv.homology[1], HomologyGroup { rank: 1, torsion: vec![] });
}

#[test]
fn euler_characteristic_is_additive_and_multiplicative() {
    let f = Field::Prime(2);
    let m: FatPointRef = Arc::new(FatPoint::point(f));
    let mut g = Generator::new(9, f);
    for i in 0..50 {
        let (a, b) = g.simplicial_pair(2).unwrap();
        let chi = euler_battery(&a, &b, &m, &caps()).unwrap();
        assert_eq!(chi["union"] + chi["inter"], chi["a"] + chi["b"], "pair {i}");
        assert_eq!(chi["product"], chi["a"] * chi["b"], "pair {i}");
        assert!(preservation_check(&a, &b, &m, &caps()).unwrap().holds(), "pair {i}");
        for s in [&a, &b, &a.union(&b).unwrap()] {
            let inv = FiniteSimplicialSet::from_sieve(s, &m, &caps()).unwrap().invariants(&caps()).unwrap();
            assert_eq!(inv.alternating_rank_sum(), inv.euler_characteristic);
        }
    }
}
