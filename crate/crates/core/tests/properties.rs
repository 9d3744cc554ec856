use proptest::prelude::*;
use tpsurf::bipoly::q_int;
use tpsurf::*;

fn form(m: u32, n: u32) -> impl Strategy<Value = BiPoly> {
    let d = BiDeg::new(m, n);
    proptest::collection::vec(-6i64..=6, d.dim()).prop_map(move |c| {
        BiPoly::from_terms(d, d.monomials().zip(c).map(|(k, x)| (k, q_int(x)))).unwrap()
    })
}

fn linear_form() -> impl Strategy<Value = XPoly> {
    proptest::array::uniform4(-5i64..=5).prop_map(|c| XPoly::linear(&c.map(q_int)))
}

fn point() -> impl Strategy<Value = [Q; 4]> {
    proptest::array::uniform4(-7i64..=7).prop_map(|c| c.map(q_int))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_evaluates_pointwise(f in form(2, 1), g in form(1, 2), pt in point()) {
        let h = &f * &g;
        prop_assert_eq!(h.deg(), BiDeg::new(3, 3));
        prop_assert_eq!(h.eval(&pt), f.eval(&pt) * g.eval(&pt));
    }

    #[test]
    fn exact_division_undoes_product(f in form(2, 2), g in form(1, 1)) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!((&f * &g).exact_div(&g).unwrap(), f);
    }

    #[test]
    fn display_round_trips(f in form(3, 2)) {
        let back: BiPoly = f.to_string().parse().unwrap();
        prop_assert_eq!(back.terms().collect::<Vec<_>>(), f.terms().collect::<Vec<_>>());
    }

    #[test]
    fn swap_is_an_involution(f in form(2, 3)) {
        prop_assert_eq!(f.swap_factors().deg(), BiDeg::new(3, 2));
        prop_assert_eq!(f.swap_factors().swap_factors(), f);
    }

    #[test]
    fn substitution_is_a_ring_map(e in linear_form(), g in linear_form(), q in proptest::array::uniform4(form(1, 1))) {
        let lhs = (&e * &g).substitute(&q);
        prop_assert_eq!(lhs, &e.substitute(&q) * &g.substitute(&q));
    }

    #[test]
    fn interpolated_det_matches_bareiss(entries in proptest::collection::vec(linear_form(), 16), seed in 0u64..100) {
        let m = MatX::from_rows(entries.chunks(4).map(|r| r.to_vec()).collect()).unwrap();
        prop_assert_eq!(det_interp(&m, 2, seed).unwrap(), det_poly(&m).unwrap());
    }

    #[test]
    fn symbolic_det_specializes(entries in proptest::collection::vec(linear_form(), 9), pt in point()) {
        let m = MatX::from_rows(entries.chunks(3).map(|r| r.to_vec()).collect()).unwrap();
        prop_assert_eq!(det_poly(&m).unwrap().eval(&pt), det_scalar(&m.eval(&pt)).unwrap());
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 6), 1..6)) {
        let m = MatQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect());
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len() + rank(&m), 6);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == q_int(0)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn generator_degrees_ignore_order(seed in 0u64..10_000, perm in Just([2usize, 0, 3, 1])) {
        let p = BiPoly::random_form(BiDeg::new(2, 1), seed);
        let gens = [
            &p * &BiPoly::u(),
            &p * &BiPoly::v(),
            BiPoly::random_form(BiDeg::new(2, 2), seed + 1),
            BiPoly::random_form(BiDeg::new(2, 2), seed + 2),
        ];
        let s = TPSurface::new(2, 2, gens).unwrap();
        let bx = BiDeg::new(4, 3);
        prop_assert_eq!(min_syz_generators(&s, bx), min_syz_generators(&s.permuted(perm), bx));
    }

    #[test]
    fn swapping_factors_swaps_orientation(seed in 0u64..10_000) {
        let p = BiPoly::random_form(BiDeg::new(2, 1), seed);
        let gens = [
            &p * &BiPoly::u(),
            &p * &BiPoly::v(),
            BiPoly::random_form(BiDeg::new(2, 2), seed + 1),
            BiPoly::random_form(BiDeg::new(2, 2), seed + 2),
        ];
        let s = TPSurface::new(2, 2, gens).unwrap();
        let a = implicitize(&s, &ImplicitOptions::default()).unwrap();
        let b = implicitize(&s.swap(), &ImplicitOptions::default()).unwrap();
        prop_assert_eq!(a.orientation, Some(Orientation::UV));
        prop_assert_eq!(b.orientation, Some(Orientation::ST));
        prop_assert_eq!(a.f, b.f);
    }

    /// The special pair together with `L` accounts for the whole strand:
    /// coefficient vectors of the three-syzygy columns have full rank.
    #[test]
    fn three_syzygy_columns_are_independent(seed in 0u64..10_000, ab in prop_oneof![Just((2u32, 2u32)), Just((2, 3)), Just((3, 2))]) {
        let (a, b) = ab;
        let p = BiPoly::random_form(BiDeg::new(a, b - 1), seed);
        let gens = [
            &p * &BiPoly::u(),
            &p * &BiPoly::v(),
            BiPoly::random_form(BiDeg::new(a, b), seed + 1),
            BiPoly::random_form(BiDeg::new(a, b), seed + 2),
        ];
        let s = TPSurface::new(a, b, gens).unwrap();
        let l = detect_linear_syzygy(&s).unwrap().unwrap();
        let n = normalize_linear(&s, &l).unwrap();
        let (s1, s2) = special_pair(&n).unwrap();
        let m = build_d1_nu(&n, &n.linear_syzygy(), &s1, &s2).unwrap();
        prop_assert_eq!(m.rows(), m.cols());
        prop_assert_eq!(rank(&m.coefficient_matrix()), m.cols());
    }
}
