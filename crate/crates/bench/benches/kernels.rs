use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use motivic::battery::Generator;
use motivic::groebner::groebner;
use motivic::measure::limit_measure;
use motivic::topo::FiniteSimplicialSet;
use motivic::{
    weil_restrict, AffineScheme, Caps, FatPoint, FatPointRef, Field, FunctorTag, Ideal, KClass, LimitSieve,
    MeasureQuery, MemberRule, PointSystem, SchemeRef, SieveExpr, SimplicialSieve,
};

fn kernels(c: &mut Criterion) {
    let caps = Caps::default();
    let f = Field::Prime(3);

    let cusp = AffineScheme::parse("C", f, &["x", "y", "z"], &["y^2 - x^3", "x*z - y", "z^2 - x"]).unwrap();
    let gens = Ideal::parse(cusp.ring(), &["y^2 - x^3", "x*z - y", "z^2 - x"]).unwrap().generators().to_vec();
    c.bench_function("groebner", |b| b.iter(|| groebner(black_box(&gens), cusp.ring(), &caps).unwrap()));

    let x: SchemeRef = Arc::new(AffineScheme::parse("X", f, &["x", "y"], &["x*y"]).unwrap());
    let m: FatPointRef = Arc::new(FatPoint::jet(f, "t", 4).unwrap());
    c.bench_function("weil_restrict", |b| b.iter(|| weil_restrict(black_box(&x), &m, &caps).unwrap()));

    let mut g = Generator::new(7, f);
    let sieves: Vec<SieveExpr> = (0..8).map(|_| g.plain_sieve()).collect();
    c.bench_function("class_of_sieve", |b| {
        b.iter(|| {
            for s in &sieves {
                black_box(KClass::of_sieve(s, &caps).unwrap());
            }
        })
    });

    let line = Generator::new(0, Field::Prime(2)).affine(1);
    let sys = PointSystem::powers(Field::Prime(2), &["t"], 8).unwrap();
    let open = SieveExpr::parse_open(line, "x").unwrap();
    let lim = LimitSieve::new(SimplicialSieve::constant(open, 0), sys, FunctorTag::Trivial, MemberRule::FullArc, &caps)
        .unwrap();
    let q = MeasureQuery::new(lim);
    c.bench_function("limit_measure", |b| b.iter(|| limit_measure(black_box(&q), &caps).unwrap()));

    let sphere = FiniteSimplicialSet::boundary(3, 3);
    c.bench_function("invariants", |b| b.iter(|| black_box(&sphere).invariants(&caps).unwrap()));
}

criterion_group!(benches, kernels);
criterion_main!(benches);
