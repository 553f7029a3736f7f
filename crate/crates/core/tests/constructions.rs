use grq_core::constructions::{
    borel_projective, induced_torus, outer_tensor, projective_indec, regular_graded, simple_hat, split_degree, w_hat,
    w_hat_twisted, weyl_hat, weyl_hat_dual, Family, FamilyLabel,
};
use grq_core::grmod::{decompose, hom_space, is_indecomposable, is_valid, AlgebraKind, Weight};
use grq_core::homological::is_projective;
use proptest::prelude::*;

mod common;
use common::{hom_dim, small_label};

#[test]
fn dimensions() {
    for p in [3u32, 5] {
        let pi = p as i64;
        for d in 0..=4 * pi {
            assert_eq!(weyl_hat(p, d).dim() as i64, d + 1);
            assert_eq!(weyl_hat_dual(p, d).dim() as i64, d + 1);
            let (s, a) = split_degree(p, d);
            match w_hat(p, d) {
                Ok(w) => {
                    assert!(s >= 1 && a <= pi - 2);
                    assert_eq!(w.dim() as i64, d - a);
                    let want: Vec<Weight> = (a + 1..=d).map(|i| Weight::new(i, d - i)).collect();
                    assert_eq!(w.weights(), &want[..]);
                    let tw = w_hat_twisted(p, d).unwrap();
                    let swapped: Vec<Weight> = want.iter().map(|w| w.swap()).collect();
                    let mut got = tw.weights().to_vec();
                    got.sort();
                    let mut sw = swapped;
                    sw.sort();
                    assert_eq!(got, sw);
                }
                Err(_) => assert!(s < 1 || a == pi - 1, "W({d}) should build at p={p}"),
            }
        }
        for r in 0..pi {
            assert_eq!(simple_hat(p, r).unwrap().dim() as i64, r + 1);
        }
        assert!(simple_hat(p, pi).is_err());
        for a in 0..pi - 1 {
            assert_eq!(projective_indec(p, a).unwrap().dim() as u32, 2 * p);
        }
        assert_eq!(induced_torus(p, 1).dim() as u32, p * p);
    }
}

#[test]
fn w_embeds_in_v() {
    for d in [3, 4, 6, 7, 9, 10] {
        let v = weyl_hat(3, d);
        let w = w_hat(3, d).unwrap();
        assert!(
            hom_space(&w, &v).iter().any(|m| m.rank() == w.dim()),
            "W({d}) -> V({d})"
        );
    }
}

#[test]
fn regular_module_splits_into_projective_covers() {
    // U_0(sl2) = sum over r of P(r)^(r+1): p(p+1)/2 summands and dimension p^3
    for p in [3u32, 5] {
        let reg = regular_graded(p);
        assert_eq!(reg.dim() as u32, p * p * p);
        assert!(is_valid(&reg));
        assert!(is_projective(&reg).unwrap());
        if p == 3 {
            let parts = decompose(&reg).unwrap();
            assert_eq!(parts.len() as u32, p * (p + 1) / 2);
            let mut dims: Vec<usize> = parts.iter().map(|s| s.module.dim()).collect();
            dims.sort();
            assert_eq!(dims, vec![3, 3, 3, 6, 6, 6]);
        }
    }
}

#[test]
fn projective_indecomposables_are_indecomposable() {
    for a in 0..2 {
        let q = projective_indec(3, a).unwrap();
        assert!(is_indecomposable(&q));
        assert!(is_projective(&q).unwrap());
        assert_eq!(hom_dim(&q, &q), hom_space(&q, &q).len());
    }
}

#[test]
fn borel_modules() {
    let alg = AlgebraKind::borel(3, 2);
    let z = borel_projective(alg, Weight::new(4, 4)).unwrap();
    assert_eq!(z.dim(), 9);
    assert!(is_valid(&z));
    assert_eq!(z.weights()[0], Weight::new(4, 4));
    // X1 lowers by alpha, X2 by p*alpha
    assert!(z.weights().contains(&Weight::new(4 - 2 - 3, 4 + 2 + 3)));
    let z1 = borel_projective(AlgebraKind::borel_range(3, 1, 1), Weight::new(1, 1)).unwrap();
    let z2 = borel_projective(AlgebraKind::borel_range(3, 2, 2), Weight::new(3, 3)).unwrap();
    let t = outer_tensor(&z1, &z2).unwrap();
    assert_eq!(t.dim(), 9);
    assert_eq!(t.algebra(), alg);
    assert!(is_valid(&t));
    assert!(outer_tensor(&z2, &z1).is_err());
    assert!(borel_projective(AlgebraKind::sl2(3), Weight::ZERO).is_err());
}

#[test]
fn label_parsing() {
    let l: FamilyLabel = "W(6)w0+(1,-2)".parse().unwrap();
    assert_eq!(l.family, Family::Ww0);
    assert_eq!(l.d, 6);
    assert_eq!(l.shift, Weight::new(1, -2));
    let z: FamilyLabel = "Z(2,1)@r=2".parse().unwrap();
    assert_eq!(z.r, 2);
    assert!(z.is_borel());
    let e = "V(3)+(1,".parse::<FamilyLabel>().unwrap_err();
    assert_eq!(e.pos, 8);
    assert!("X(3)".parse::<FamilyLabel>().is_err());
    assert!("W(2)".parse::<FamilyLabel>().unwrap().build(3).is_err());
    assert!("V(3)+(1,0)".parse::<FamilyLabel>().unwrap().build(3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn label_display_roundtrip(l in small_label()) {
        let back: FamilyLabel = l.to_string().parse().unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn labelled_modules_validate(l in small_label()) {
        let m = l.build(3).unwrap();
        prop_assert!(is_valid(&m));
        prop_assert!(is_indecomposable(&m));
    }
}
