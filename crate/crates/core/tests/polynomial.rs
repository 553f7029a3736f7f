use grq_core::constructions::FamilyLabel;
use grq_core::grmod::{contravariant_dual, is_isomorphic, is_valid, GradedModule};
use grq_core::polynomial::{
    almost_split_in_poly, ext_injective_in_poly, ext_projective_in_poly, is_polynomial, pd_in_poly,
    poly_injective_resolution, poly_projective_cover, poly_projective_resolution, quasi_hereditary_check, t_poly,
    u_poly,
};
use proptest::prelude::*;

mod common;
use common::small_label;

fn build(s: &str) -> GradedModule {
    s.parse::<FamilyLabel>().unwrap().build(3).unwrap()
}

fn iso(a: &GradedModule, b: &GradedModule) -> bool {
    is_isomorphic(a, b).is_some()
}

#[test]
fn verdicts() {
    assert!(is_polynomial(&build("V(3)")).is_polynomial);
    let v = is_polynomial(&build("V(3)+(-3,0)"));
    assert!(!v.is_polynomial);
    assert_eq!(v.offending_weights.len(), 3);
    assert_eq!(v.degree, Some(0));
}

#[test]
fn torsion_functor_identities() {
    for (s, a) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
        let d = 3 * s + a;
        let t = t_poly(&build(&format!("V({})+(-3,0)", d + 3))).0;
        assert!(iso(&t, &build(&format!("W({d})"))), "t V({})[(-3,0)]", d + 3);
        let t = t_poly(&build(&format!("V({})+(-3,-3)", d + 6))).0;
        let want = build(&format!("Vo({})+({},{})", d - 2 * a - 2, a + 1, a + 1));
        assert!(iso(&t, &want), "t V({})[(-3,-3)]", d + 6);
    }
}

#[test]
fn u_is_dual_to_t() {
    for s in ["V(6)+(-3,0)", "V(9)+(-3,-3)", "Vo(4)+(-2,1)", "Q(1)+(-1,2)"] {
        let m = build(s);
        let lhs = u_poly(&m).0;
        let rhs = contravariant_dual(&t_poly(&contravariant_dual(&m).unwrap()).0).unwrap();
        assert!(iso(&lhs, &rhs), "{s}");
    }
}

#[test]
fn ext_projectives_in_degree_three() {
    // projective objects of the degree 3 polynomial block
    assert!(ext_projective_in_poly(&build("W(3)")).unwrap());
    assert!(ext_projective_in_poly(&build("W(3)w0")).unwrap());
    assert!(!ext_projective_in_poly(&build("V(3)")).unwrap());
    assert!(ext_injective_in_poly(&build("Vo(3)")).is_ok());
    let (up, epi) = poly_projective_cover(&build("L(0)+(0,3)")).unwrap();
    assert!(is_polynomial(&up).is_polynomial);
    assert_eq!(epi.rank(), 1);
}

#[test]
fn resolutions_in_degree_three() {
    // W(3), W(3)w0 and Q(1)+(1,1) are the projectives of the block; the stable
    // part is tau-periodic, so the remaining modules have infinite projective dimension
    for s in ["W(3)", "W(3)w0", "Q(1)+(1,1)"] {
        assert_eq!(pd_in_poly(&build(s), 4).unwrap(), Some(0), "{s}");
    }
    for s in ["V(3)", "Vo(3)", "L(0)+(0,3)", "L(1)+(1,1)"] {
        assert_eq!(pd_in_poly(&build(s), 6).unwrap(), None, "{s}");
        let proj = poly_projective_resolution(&build(s), 6).unwrap();
        assert!(proj[1..].iter().all(|&d| d == 6), "{s}: {proj:?}");
    }
    assert_eq!(poly_injective_resolution(&build("W(3)"), 4).unwrap(), vec![6, 3, 0, 0]);
}

#[test]
fn almost_split_in_poly_ending_at_vo() {
    let seq = almost_split_in_poly(&build("Vo(3)")).unwrap();
    assert!(seq.is_exact());
    assert!(!seq.is_split());
    assert!(iso(&seq.left, &build("V(3)")));
}

#[test]
fn standard_modules_on_the_borel_side() {
    for d in 0..=5 {
        let r = quasi_hereditary_check(3, 1, d).unwrap();
        assert!(r.passed, "d={d}");
        assert_eq!(r.standards.len() as i64, d + 1);
    }
    assert!(quasi_hereditary_check(3, 2, 3).unwrap().passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn t_and_u_are_idempotent(l in small_label()) {
        let m = l.build(3).unwrap();
        let (t, j) = t_poly(&m);
        prop_assert!(is_valid(&t));
        prop_assert!(is_polynomial(&t).is_polynomial);
        prop_assert_eq!(j.rank(), t.dim());
        prop_assert_eq!(&t_poly(&t).0, &t);
        let (u, q) = u_poly(&m);
        prop_assert!(is_polynomial(&u).is_polynomial);
        prop_assert_eq!(q.rank(), u.dim());
        prop_assert!(iso(&u_poly(&u).0, &u));
    }
}
