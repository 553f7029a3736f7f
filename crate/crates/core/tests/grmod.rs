use grq_core::constructions::{weyl_hat, FamilyLabel};
use grq_core::gf::Matrix;
use grq_core::grmod::{
    self, contravariant_dual, decompose, degree_decompose, direct_sum, hom_space, is_indecomposable, is_isomorphic,
    is_valid, shift, socle, top, validate, weyl_twist, AlgebraKind, GradedModule, Weight,
};
use proptest::prelude::*;

mod common;
use common::{hom_dim, small_label, weight_multiset};

fn build(s: &str) -> GradedModule {
    s.parse::<FamilyLabel>().unwrap().build(3).unwrap()
}

#[test]
fn weyl_action_matches_formulas() {
    for p in [3u32, 5] {
        for d in 0..=2 * p as i64 + 1 {
            let v = weyl_hat(p, d);
            let n = (d + 1) as usize;
            let e = v.generator("E").unwrap();
            let f = v.generator("F").unwrap();
            let h = v.generator("H").unwrap();
            for i in 0..n {
                for j in 0..n {
                    let (ii, jj) = (i as i64, j as i64);
                    let ev = if ii == jj + 1 { ii } else { 0 };
                    let fv = if ii + 1 == jj { d - jj + 1 } else { 0 };
                    let hv = if i == j { 2 * jj - d } else { 0 };
                    assert_eq!(e.get(i, j) as i64, ev.rem_euclid(p as i64), "E p={p} d={d}");
                    assert_eq!(f.get(i, j) as i64, fv.rem_euclid(p as i64), "F p={p} d={d}");
                    assert_eq!(h.get(i, j) as i64, hv.rem_euclid(p as i64), "H p={p} d={d}");
                }
                assert_eq!(v.weights()[i], Weight::new(i as i64, d - i as i64));
            }
            assert!(validate(&v).is_empty());
        }
    }
}

#[test]
fn validate_flags_a_broken_h() {
    let v = weyl_hat(3, 2);
    let mut action = v.action().to_vec();
    action[2] = Matrix::identity(3, 3);
    let bad = GradedModule::new(AlgebraKind::sl2(3), v.weights().to_vec(), action).unwrap();
    assert!(!is_valid(&bad));
    assert!(!validate(&bad).is_empty());
}

#[test]
fn simples_have_trivial_socle_and_top() {
    for r in 0..3 {
        let l = build(&format!("L({r})"));
        assert_eq!(socle(&l).0.dim(), l.dim());
        assert_eq!(top(&l).0.dim(), l.dim());
        assert!(is_isomorphic(&contravariant_dual(&l).unwrap(), &l).is_some());
    }
}

#[test]
fn socle_of_projective_is_simple() {
    // Q(a) has simple socle and top, both of dimension a+1
    for a in 0..2 {
        let q = build(&format!("Q({a})"));
        assert_eq!(q.dim(), 6);
        assert_eq!(socle(&q).0.dim(), a as usize + 1);
        assert_eq!(top(&q).0.dim(), a as usize + 1);
    }
}

#[test]
fn decomposition_of_a_sum() {
    let parts = [build("W(3)"), build("L(1)+(3,0)"), build("V(4)")];
    let refs: Vec<&GradedModule> = parts.iter().collect();
    let sum = direct_sum(&refs).unwrap();
    let summands = decompose(&sum).unwrap();
    assert_eq!(summands.len(), 3);
    let mut got: Vec<_> = summands.iter().map(|s| weight_multiset(&s.module)).collect();
    let mut want: Vec<_> = parts.iter().map(weight_multiset).collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
    for s in &summands {
        assert!(is_indecomposable(&s.module));
        assert!(s.projection.mul(&s.inclusion).is_identity());
    }
}

#[test]
fn degree_decomposition() {
    let sum = direct_sum(&[&build("V(2)"), &build("V(3)")]).unwrap();
    assert_eq!(sum.degree(), None);
    let parts = degree_decompose(&sum);
    assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
    assert_eq!(parts[&3].dim(), 4);
}

#[test]
fn hom_dimensions_against_oracle() {
    let names = [
        "V(3)",
        "Vo(3)",
        "W(3)",
        "W(3)w0",
        "L(0)+(3,0)",
        "L(0)+(0,3)",
        "Q(1)+(1,1)",
        "V(4)",
        "W(4)",
    ];
    let mods: Vec<GradedModule> = names.iter().map(|s| build(s)).collect();
    for (a, m) in names.iter().zip(&mods) {
        for (b, n) in names.iter().zip(&mods) {
            assert_eq!(hom_space(m, n).len(), hom_dim(m, n), "Hom({a}, {b})");
        }
    }
}

#[test]
fn ungraded_hom_contains_graded() {
    let v = build("V(3)");
    let graded = hom_space(&v, &v).len();
    let ungraded = grmod::hom_space_ungraded(&v.forget(), &v.forget()).len();
    assert!(ungraded >= graded);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_roundtrip(l in small_label()) {
        let m = l.build(3).unwrap();
        let s = m.to_json();
        let back = GradedModule::from_json(&s).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json(), s);
    }

    #[test]
    fn dual_and_twist_are_involutions(l in small_label()) {
        let m = l.build(3).unwrap();
        let dd = contravariant_dual(&contravariant_dual(&m).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&dd, &m).is_some());
        let tt = weyl_twist(&weyl_twist(&m).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&tt, &m).is_some());
        prop_assert_eq!(contravariant_dual(&m).unwrap().dim(), m.dim());
    }

    #[test]
    fn shift_is_invertible_and_preserves_hom(l in small_label(), k in prop::sample::select(vec![(3i64, 0i64), (1, 1), (-2, 1), (0, -3)])) {
        let m = l.build(3).unwrap();
        let lam = Weight::new(k.0, k.1);
        prop_assert_eq!(shift(&shift(&m, lam), -lam), m.clone());
        let n = build("V(3)");
        prop_assert_eq!(
            hom_space(&shift(&m, lam), &shift(&n, lam)).len(),
            hom_space(&m, &n).len()
        );
        prop_assert!(is_valid(&shift(&m, lam)));
    }

    #[test]
    fn hom_matches_oracle(a in small_label(), b in small_label()) {
        let m = a.build(3).unwrap();
        let n = b.build(3).unwrap();
        prop_assert_eq!(hom_space(&m, &n).len(), hom_dim(&m, &n));
    }
}
