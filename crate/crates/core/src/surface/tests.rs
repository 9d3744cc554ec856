use super::*;
use crate::bipoly::q_int;
use crate::exactla::det_poly;

fn bp(s: &str) -> BiPoly {
    s.parse().unwrap()
}

fn xp(s: &str) -> XPoly {
    s.parse().unwrap()
}

fn worked_example() -> TPSurface {
    TPSurface::new(
        2,
        2,
        [
            bp("t^2*u^2 + s^2*u*v"),
            bp("t^2*u*v + s^2*v^2"),
            bp("t^2*v^2"),
            bp("s^2*u^2"),
        ],
    )
    .unwrap()
}

fn worked_f() -> XPoly {
    xp("x0^3*x2 + x1^3*x3 - x0^2*x1^2")
}

#[test]
fn rejects_bad_input() {
    let p = bp("s*u");
    assert_eq!(
        TPSurface::new(1, 1, [p.clone(), p.clone(), bp("t*u"), bp("t*v")]),
        Err(Error::DependentGenerators)
    );
    assert!(matches!(
        TPSurface::new(1, 1, [p, bp("s^2*u"), bp("t*u"), bp("t*v")]),
        Err(Error::DegreeMismatch { .. })
    ));
}

#[test]
fn strands_of_example() {
    let s = worked_example();
    let l = syz_strand(&s, BiDeg::new(0, 1));
    assert_eq!(l.len(), 1);
    let want = [bp("v"), bp("-u"), BiPoly::zero(BiDeg::new(0, 1)), BiPoly::zero(BiDeg::new(0, 1))];
    assert_eq!(l[0].g, want);
    assert_eq!(syz_strand(&s, BiDeg::new(3, 1)).len(), 8);
    assert!(syz_strand(&s, BiDeg::new(0, 0)).is_empty());
    let koszul = SyzygyVector::new(
        s.deg(),
        [s.generators()[1].clone(), -&s.generators()[0], BiPoly::zero(s.deg()), BiPoly::zero(s.deg())],
    )
    .unwrap();
    assert!(koszul.is_syzygy_of(&s));
    let strand = syz_strand(&s, s.deg());
    let mut cols: Vec<Vec<Q>> = strand.iter().map(SyzygyVector::to_vector).collect();
    let r = rank(&MatQ::from_rows(cols.clone()));
    cols.push(koszul.to_vector());
    assert_eq!(rank(&MatQ::from_rows(cols)), r);
    for g in &strand {
        assert!(g.is_syzygy_of(&s));
    }
}

#[test]
fn multiplication_rank() {
    let m = worked_example().multiplication_matrix(BiDeg::new(3, 1));
    assert_eq!((m.rows(), m.cols()), (24, 32));
    assert_eq!(rank(&m), 24);
    let k = kernel_basis(&worked_example().multiplication_matrix(BiDeg::new(0, 1)));
    assert_eq!(k.len(), 1);
}

#[test]
fn example_generators() {
    let got = min_syz_generators(&worked_example(), BiDeg::new(6, 3));
    let want: Vec<BiDeg> = [(0, 1), (0, 3), (2, 1), (2, 1), (2, 2), (4, 1), (6, 0)]
        .iter()
        .map(|&(m, n)| BiDeg::new(m, n))
        .collect();
    assert_eq!(got, want);
    assert!(min_syz_generators(&worked_example(), BiDeg::new(0, 0)).is_empty());
}

#[test]
fn linear_pipeline_on_example() {
    let s = worked_example();
    let l = detect_linear_syzygy(&s).unwrap().unwrap();
    assert_eq!(l.orientation, Orientation::UV);
    let n = normalize_linear(&s, &l).unwrap();
    assert_eq!(n.p, bp("t^2*u + s^2*v"));
    assert_eq!(n.p2, bp("t^2*v^2"));
    assert_eq!(n.p3, bp("s^2*u^2"));
    assert_eq!(n.basis_change, MatQ::identity(4));
    let (s1, s2) = special_pair(&n).unwrap();
    let z = BiPoly::zero(BiDeg::new(2, 1));
    let p = bp("t^2*u + s^2*v");
    assert_eq!(s1.g, [z.clone(), bp("t^2*v"), -&p, z.clone()]);
    assert_eq!(s2.g, [bp("s^2*u"), z.clone(), z, -&p]);
    let m = build_d1_nu(&n, &n.linear_syzygy(), &s1, &s2).unwrap();
    assert_eq!((m.rows(), m.cols()), (8, 8));
    let d = det_poly(&m).unwrap();
    assert!(implicit::ratio(&d, &worked_f().pow(2)).is_some());
    let g = det_poly(&build_d1_nu_generic(&s).unwrap()).unwrap();
    assert!(implicit::ratio(&g, &d).is_some());
    // columns independent as vectors of linear forms
    assert_eq!(rank(&m.coefficient_matrix()), 8);
}

#[test]
fn reference_matrix_determinant() {
    let rows = [
        ["x0", "0", "0", "0", "x2", "0", "-x3", "0"],
        ["-x1", "0", "0", "0", "0", "0", "x0", "0"],
        ["0", "x0", "0", "0", "0", "x2", "0", "-x3"],
        ["0", "-x1", "0", "0", "0", "0", "0", "x0"],
        ["0", "0", "x0", "0", "-x1", "0", "0", "0"],
        ["0", "0", "-x1", "0", "x2", "0", "-x3", "0"],
        ["0", "0", "0", "x0", "0", "-x1", "0", "0"],
        ["0", "0", "0", "-x1", "0", "x2", "0", "-x3"],
    ];
    let m = MatX::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|e| if *e == "0" { XPoly::zero(1) } else { xp(e) }).collect())
            .collect(),
    )
    .unwrap();
    let d = det_poly(&m).unwrap();
    assert!(implicit::ratio(&d, &worked_f().pow(2)).is_some());
}

#[test]
fn implicitize_example() {
    let r = implicitize(
        &worked_example(),
        &ImplicitOptions {
            cross_check: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(r.f, worked_f());
    assert_eq!(r.k, 2);
    assert_eq!(r.route, Route::ThreeSyzygy);
    assert_eq!(r.cross_check, Some(true));
    assert_eq!(r.composition_verified, Some(true));
    let line = r.singular_line.unwrap();
    assert_eq!(line.forms, [xp("x0"), xp("x1")]);
    assert_eq!(line.det_order, 6);
    assert_eq!(line.f_order, 3);
    assert_eq!(line.bound, 4);
    assert_eq!(line_multiplicity(&xp("x2^3*x3"), (0, 1)).unwrap(), 0);
    assert_eq!(line_multiplicity(&XPoly::zero(2), (0, 1)), Err(Error::ZeroInput));
}

#[test]
fn uv_split_examples() {
    let z = BiPoly::zero(BiDeg::new(2, 1));
    assert_eq!(uv_split(&bp("t^2*v^2")).unwrap(), (z.clone(), bp("t^2*v")));
    assert_eq!(uv_split(&bp("s^2*u^2")).unwrap(), (bp("s^2*u"), z));
    assert_eq!(
        uv_split(&bp("s*u*v")).unwrap(),
        (bp("s*v"), BiPoly::zero(BiDeg::new(1, 1)))
    );
    assert!(matches!(uv_split(&bp("s^2")), Err(Error::DegreeTooLow(_))));
}

#[test]
fn st_orientation() {
    let p = BiPoly::random_form(BiDeg::new(1, 2), 4);
    let s = TPSurface::new(
        2,
        2,
        [
            &p * &BiPoly::s(),
            &p * &BiPoly::t(),
            BiPoly::random_form(BiDeg::new(2, 2), 5),
            BiPoly::random_form(BiDeg::new(2, 2), 6),
        ],
    )
    .unwrap();
    let l = detect_linear_syzygy(&s).unwrap().unwrap();
    assert_eq!(l.orientation, Orientation::ST);
    assert_eq!(l.syzygy.mu, BiDeg::new(1, 0));
    let n = normalize_linear(&s, &l).unwrap();
    assert!(n.p_original().primitive().0 == p.primitive().0);
    let r = implicitize(&s, &ImplicitOptions { cross_check: true, ..Default::default() }).unwrap();
    assert_eq!(r.k * r.f.deg(), 8);
    assert_eq!(r.cross_check, Some(true));
    assert_eq!(r.composition_verified, Some(true));
}

#[test]
fn dense_surface_uses_full_strand() {
    let s = TPSurface::new(2, 2, std::array::from_fn(|i| BiPoly::random_form(BiDeg::new(2, 2), 40 + i as u64))).unwrap();
    assert_eq!(detect_linear_syzygy(&s).unwrap(), None);
    let r = implicitize(&s, &ImplicitOptions::default()).unwrap();
    assert_eq!(r.route, Route::FullStrand);
    assert_eq!((r.k, r.f.deg()), (1, 8));
    assert_eq!(r.composition_verified, Some(true));
}

fn degenerate_family(seed: u64) -> TPSurface {
    let d = BiDeg::new(2, 1);
    let p = BiPoly::random_form(d, seed);
    let q = BiPoly::random_form(d, seed + 1000);
    TPSurface::new(2, 2, [&p * &BiPoly::u(), &p * &BiPoly::v(), &q * &BiPoly::u(), &q * &BiPoly::v()]).unwrap()
}

#[test]
fn basepoints_found() {
    let r = basepoint_check(&worked_example(), 0);
    assert!(r.free);
    assert!(matches!(r.certificate, Certificate::Surjective { .. }));
    let mono = TPSurface::new(2, 2, [bp("s^2*u^2"), bp("s^2*v^2"), bp("t^2*u^2"), bp("t^2*v^2")]).unwrap();
    assert!(basepoint_check(&mono, 0).free);
    let s = degenerate_family(1);
    let r = basepoint_check(&s, 9);
    assert!(!r.free);
    assert!(matches!(r.certificate, Certificate::Witness(_)), "{:?}", r.certificate);
    assert!(matches!(
        detect_linear_syzygy(&s),
        Err(Error::MultipleLinearSyzygies { uv: 2, st: 0 })
    ));
    assert!(build_d1_nu_generic(&s).map(|m| m.rows() != m.cols()).unwrap());
}

#[test]
fn basepoint_curve() {
    // s divides every generator
    let s = TPSurface::new(1, 1, [bp("s*u"), bp("s*v"), bp("t*u"), bp("s*u")]);
    assert!(s.is_err());
    let s = TPSurface::new(2, 1, [bp("s^2*u"), bp("s*t*u"), bp("s^2*v"), bp("s*t*v")]).unwrap();
    let r = basepoint_check(&s, 3);
    assert!(!r.free);
    assert!(matches!(r.certificate, Certificate::Witness(_)));
}

#[test]
fn classification() {
    assert_eq!(classify_p22(&bp("s^2*u + t^2*v")).unwrap(), P22Class::Irreducible);
    assert_eq!(classify_p22(&bp("s^2*u + 2*s*t*u + t^2*u + s^2*v + s*t*v")).unwrap(), P22Class::OnQ);
    assert_eq!(
        classify_p22(&bp("s^2*u + s*t*u + t^2*u + s^2*v + s*t*v + t^2*v")).unwrap(),
        P22Class::OnSegre
    );
    assert!(matches!(classify_p22(&bp("s*u")), Err(Error::DegreeMismatch { .. })));
    assert_eq!(classify_p22(&BiPoly::zero(BiDeg::new(2, 1))), Err(Error::ZeroInput));
    assert_eq!(intersection_number(BiDeg::new(2, 1), BiDeg::new(2, 1)), 4);
    assert_eq!(intersection_number(BiDeg::new(3, 2), BiDeg::new(0, 0)), 0);
    assert_eq!(intersection_number(BiDeg::new(1, 1), BiDeg::new(1, 1)), 2);
    let _ = q_int(0);
}
