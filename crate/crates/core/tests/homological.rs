use grq_core::constructions::FamilyLabel;
use grq_core::grmod::{is_isomorphic, is_valid, shift, AlgebraKind, GradedModule, Weight};
use grq_core::homological::{
    almost_split_sequence, betti, classify_growth, ext1, injective_hull, is_projective, nakayama_shift, omega,
    omega_inv, projective_cover, rank_probe, tau, tau_inv, ungraded_betti, Complexity,
};
use proptest::prelude::*;

mod common;
use common::small_label;

fn build(s: &str) -> GradedModule {
    s.parse::<FamilyLabel>().unwrap().build(3).unwrap()
}

#[test]
fn syzygies_of_simples() {
    // ungraded U_0(sl2): P(r) has dimension 2p for r < p-1 and L(p-1) is projective,
    // so dim Ω L(r) = 2p - (r+1)
    for p in [3u32, 5] {
        let pi = p as i64;
        for r in 0..pi {
            let l = "L(0)".parse::<FamilyLabel>().unwrap();
            let l = FamilyLabel { d: r, ..l }.build(p).unwrap();
            let cover = projective_cover(&l).unwrap();
            if r == pi - 1 {
                assert_eq!(cover.projective.dim() as i64, pi);
                assert!(omega(&l).unwrap().is_zero());
            } else {
                assert_eq!(cover.projective.dim() as i64, 2 * pi);
                assert_eq!(omega(&l).unwrap().dim() as i64, 2 * pi - r - 1);
            }
        }
    }
}

#[test]
fn omega_inverse() {
    for s in ["V(3)", "W(4)", "L(0)", "Vo(4)+(1,1)"] {
        let m = build(s);
        let back = omega_inv(&omega(&m).unwrap()).unwrap();
        assert!(is_isomorphic(&back, &m).is_some(), "{s}");
        let (i, iota) = injective_hull(&m).unwrap();
        assert!(is_projective(&i).unwrap());
        assert_eq!(iota.rank(), m.dim());
    }
}

#[test]
fn tau_on_w_components_is_a_shift() {
    for s in ["W(3)", "W(4)", "W(6)", "W(7)"] {
        let w = build(s);
        let t = tau(&w).unwrap();
        assert!(is_isomorphic(&t, &shift(&w, Weight::new(3, -3))).is_some(), "tau {s}");
        let tw = build(&format!("{s}w0"));
        let t = tau(&tw).unwrap();
        assert!(
            is_isomorphic(&t, &shift(&tw, Weight::new(-3, 3))).is_some(),
            "tau {s}w0"
        );
    }
}

#[test]
fn tau_on_v_components() {
    for (d, i) in [(3, 0), (4, 1), (6, 0)] {
        let v = build(&format!("V({d})+({i},{i})"));
        let want = build(&format!("V({})+({},{})", d + 6, i - 3, i - 3));
        assert!(is_isomorphic(&tau(&v).unwrap(), &want).is_some(), "tau V({d})");
    }
}

#[test]
fn nakayama_shifts() {
    assert_eq!(nakayama_shift(AlgebraKind::sl2(3)), Weight::ZERO);
    // socle of k[X1..Xr]/(X^p) sits (p-1)(1 + p + ... + p^(r-1)) = p^r - 1 roots below the top
    for (p, r) in [(3u32, 1u32), (3, 2), (5, 1), (5, 2)] {
        let k = (p as i64).pow(r) - 1;
        assert_eq!(nakayama_shift(AlgebraKind::borel(p, r)), Weight::new(k, -k));
    }
}

#[test]
fn almost_split_sequence_ending_at_w() {
    let w = build("W(3)+(0,3)");
    let seq = almost_split_sequence(&w).unwrap();
    assert!(seq.is_exact());
    assert!(!seq.is_split());
    assert!(!seq.is_split_ungraded());
    assert!(is_isomorphic(&seq.middle, &build("W(6)")).is_some());
    assert!(is_isomorphic(&seq.left, &tau(&w).unwrap()).is_some());
    let json: serde_json::Value = serde_json::from_str(&seq.to_json()).unwrap();
    assert!(json.get("middle").is_some());
}

#[test]
fn ext_between_simples() {
    // L(0) and L(1) at p=3: Ω L(0) has dimension 5 with top L(1) twice
    let l0 = build("L(0)");
    let e = ext1(&l0, &l0).unwrap();
    assert_eq!(e.dim, 0);
    let l1 = build("L(1)+(1,-2)");
    let l1b = build("L(1)+(-2,1)");
    let total = ext1(&l0, &l1).unwrap().dim + ext1(&l0, &l1b).unwrap().dim;
    assert_eq!(total, 2);
}

#[test]
fn resolutions_of_simples_grow_linearly() {
    let l = build("L(0)");
    let b = betti(&l, 6).unwrap();
    assert_eq!(b, ungraded_betti(&l.forget(), 6).unwrap());
    assert_eq!(classify_growth(&b), Complexity::Two);
    assert_eq!(classify_growth(&betti(&build("W(3)"), 6).unwrap()), Complexity::One);
    assert_eq!(classify_growth(&betti(&build("Q(0)"), 4).unwrap()), Complexity::Zero);
}

#[test]
fn rank_varieties_of_w() {
    // on W(3) = <v1, v2, v3> at p=3, E kills v2 and v3 while F acts with rank 2
    let w = build("W(3)");
    assert!(!rank_probe(&w, (1, 0, 0)).unwrap().free);
    assert!(rank_probe(&w, (0, 1, 0)).unwrap().free);
    let tw = build("W(3)w0");
    assert!(rank_probe(&tw, (1, 0, 0)).unwrap().free);
    assert!(!rank_probe(&tw, (0, 1, 0)).unwrap().free);
    assert!(rank_probe(&w, (1, 1, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tau_inverse_roundtrip(l in small_label()) {
        let m = l.build(3).unwrap();
        prop_assume!(!is_projective(&m).unwrap());
        let t = tau(&m).unwrap();
        prop_assert!(is_valid(&t));
        prop_assert!(is_isomorphic(&tau_inv(&t).unwrap(), &m).is_some());
    }

    #[test]
    fn graded_and_ungraded_betti_agree(l in small_label()) {
        let m = l.build(3).unwrap();
        prop_assert_eq!(betti(&m, 4).unwrap(), ungraded_betti(&m.forget(), 4).unwrap());
    }
}
