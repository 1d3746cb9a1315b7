use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use stpro_core::coset::{todd_coxeter, Presentation};
use stpro_core::freegroup::{gen, inverse, reduce};
use stpro_core::gauss::{gauss_decompose, multiply_factors};
use stpro_core::gluing::HomotopeGroup;
use stpro_core::matrix::MatrixAlgebra;
use stpro_core::realize::Linear;
use stpro_core::ring::Ring;
use stpro_core::rootsys::RootSystem;

const RINGS: [&str; 6] = ["z2", "z4", "z12", "z8", "f3", "z2xz3"];

fn ring() -> impl Strategy<Value = Ring> {
    prop::sample::select(&RINGS[..]).prop_map(|t| Ring::parse(t).unwrap())
}

fn ring_and_elems(n: usize) -> impl Strategy<Value = (Ring, Vec<u64>)> {
    ring().prop_flat_map(move |r| {
        let q = r.order();
        (Just(r), prop::collection::vec(0..q, n))
    })
}

proptest! {
    #[test]
    fn ring_laws((r, x) in ring_and_elems(3)) {
        let (a, b, c) = (x[0], x[1], x[2]);
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.parse_elem(&r.format_elem(a)).unwrap(), a);
        if let Some(i) = r.inv(a) {
            prop_assert_eq!(r.mul(a, i), r.one());
        }
    }

    #[test]
    fn partition_of_unity_solves_its_equation((r, x) in ring_and_elems(3), m in 0u32..4) {
        let (s, ks) = (x[0], &x[1..]);
        if let Some(t) = r.partition_of_unity(s, ks, m) {
            let sum = t.iter().zip(ks).fold(r.zero(), |acc, (&ti, &k)| r.add(acc, r.mul(ti, r.pow(k, m as u64))));
            let shift = if m == 0 { 0 } else { (m as u64 - 1) * ks.len() as u64 + 1 };
            prop_assert_eq!(sum, r.pow(s, shift));
        }
    }

    #[test]
    fn inverse_and_literal_round_trip(r in ring(), n in 1usize..4, seed in any::<u64>()) {
        let alg = MatrixAlgebra::full(r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = alg.random_unit(&mut rng);
        let gi = alg.inverse(&g).unwrap();
        prop_assert_eq!(alg.mul(&g, &gi), alg.one());
        prop_assert_eq!(alg.parse(&alg.format(&g)).unwrap(), g);
    }

    #[test]
    fn gauss_factors_multiply_back(tag in prop::sample::select(&["z8", "z4", "z9", "f5"][..]), n in 2usize..5, seed in any::<u64>()) {
        let alg = MatrixAlgebra::full(Ring::parse(tag).unwrap(), n);
        let lin = Linear::new(alg.clone()).unwrap();
        let g = alg.random_unit(&mut ChaCha8Rng::seed_from_u64(seed));
        let fs = gauss_decompose(&lin, &g).unwrap();
        prop_assert_eq!(multiply_factors(&lin, &fs), g);
    }

    #[test]
    fn homotope_group_laws(label in 0u64..12, seed in any::<u64>()) {
        let alg = MatrixAlgebra::full(Ring::parse("z12").unwrap(), 3);
        let lin = Linear::new(alg.clone()).unwrap();
        let h = HomotopeGroup::new(&alg, label);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (h.random_word(&lin, &mut rng), h.random_word(&lin, &mut rng), h.random_word(&lin, &mut rng));
        prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        prop_assert_eq!(h.mul(&x, &h.inv(&x)), h.one());
        prop_assert_eq!(h.delta(&h.mul(&x, &y)), alg.mul(&h.delta(&x), &h.delta(&y)));
    }

    #[test]
    fn free_reduction_is_idempotent_and_inverts(w in prop::collection::vec(prop::sample::select(&[1, -1, 2, -2, 3, -3][..]), 0..20)) {
        let r = reduce(&w);
        prop_assert_eq!(reduce(&r), r.clone());
        let mut both = r.clone();
        both.extend(inverse(&r));
        prop_assert!(reduce(&both).is_empty());
    }

    #[test]
    fn cyclic_and_dihedral_orders(n in 1usize..30) {
        let mut c = Presentation::new(vec!["x".into()]);
        c.relate(&vec![gen(0); n]);
        prop_assert_eq!(todd_coxeter(&c, &[], 10_000).unwrap().index(), n);
        let mut d = Presentation::new(vec!["r".into(), "f".into()]);
        d.relate(&vec![gen(0); n]);
        d.relate(&[gen(1), gen(1)]);
        d.relate(&[gen(1), gen(0), gen(1), gen(0)]);
        prop_assert_eq!(todd_coxeter(&d, &[], 10_000).unwrap().index(), 2 * n);
    }

    #[test]
    fn root_systems_are_closed(tag in prop::sample::select(&["A1", "A4", "B3", "C3", "D4", "BC3", "G2", "F4"][..])) {
        let sys = RootSystem::parse(tag).unwrap();
        for i in 0..sys.len() {
            prop_assert_eq!(sys.neg(sys.neg(i)), i);
            let a = sys.root(i);
            for j in 0..sys.len() {
                let b = sys.root(j);
                let (ab, aa) = (a.dot(&b), a.dot(&a));
                prop_assert_eq!((2 * ab) % aa, 0);
                prop_assert!(sys.index_of(&b.add(&a.scale(-(2 * ab / aa) as i32))).is_some());
            }
        }
    }
}
