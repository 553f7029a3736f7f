use grq_core::gf::{self, is_prime, EchelonSpace, Matrix, PrimeField};
use proptest::prelude::*;

mod common;
use common::naive_rank as oracle_rank;

#[test]
fn field_arithmetic() {
    assert!(PrimeField::new(4).is_err());
    assert!(PrimeField::new(2).is_err());
    let f = PrimeField::new(7).unwrap();
    assert_eq!(f.reduce(-1), 6);
    assert_eq!(f.mul(3, 5), 1);
    assert_eq!(f.inv(3), 5);
    assert_eq!(f.pow(3, 6), 1);
    assert_eq!(f.signed(6), -1);
    for a in 1..7 {
        assert_eq!(f.mul(a, f.inv(a)), 1);
    }
    assert_eq!(
        (0..30).filter(|&n| is_prime(n)).collect::<Vec<_>>(),
        vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    );
}

#[test]
fn known_rank_and_kernel() {
    // over F_3 the rows (1,1,1) and (1,2,0) and their sum (2,0,1) span a plane
    let m = Matrix::from_rows(3, &[vec![1, 1, 1], vec![1, 2, 0], vec![2, 0, 1]]);
    assert_eq!(m.rank(), 2);
    let k = gf::kernel_basis(&m);
    assert_eq!(k.cols(), 1);
    assert!(m.mul(&k).is_zero());
    assert!(m.inverse().is_none());
}

#[test]
fn echelon_space_membership() {
    let f = PrimeField::new(5).unwrap();
    let mut s = EchelonSpace::new(f, 3);
    assert!(s.insert(&[1, 2, 0]));
    assert!(s.insert(&[0, 1, 1]));
    assert!(!s.insert(&[1, 3, 1]));
    assert!(s.contains(&[2, 4, 0]));
    assert!(!s.contains(&[0, 0, 1]));
    assert_eq!(s.dim(), 2);
    assert_eq!(s.non_pivots().len(), 1);
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
    (prop::sample::select(vec![3u32, 5, 7]), 1..=max, 1..=max).prop_flat_map(|(p, r, c)| {
        (
            Just(p),
            prop::collection::vec(prop::collection::vec(0i64..p as i64, c), r),
        )
    })
}

proptest! {
    #[test]
    fn rank_matches_oracle((p, rows) in matrix_strategy(6)) {
        let m = Matrix::from_rows(p, &rows);
        prop_assert_eq!(m.rank(), oracle_rank(p as i64, &rows));
    }

    #[test]
    fn rref_is_idempotent((p, rows) in matrix_strategy(6)) {
        let r = gf::rref(&Matrix::from_rows(p, &rows));
        let again = gf::rref(&r.matrix);
        prop_assert_eq!(&again.matrix, &r.matrix);
        prop_assert_eq!(again.pivots, r.pivots);
    }

    #[test]
    fn kernel_is_annihilated_and_full((p, rows) in matrix_strategy(6)) {
        let m = Matrix::from_rows(p, &rows);
        let k = gf::kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(k.cols() + m.rank(), m.cols());
    }

    #[test]
    fn solve_recovers_consistent_rhs((p, rows) in matrix_strategy(6), seed in any::<u64>()) {
        let m = Matrix::from_rows(p, &rows);
        let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i * 3)) % p as u64) as u32).collect();
        let b = m.mul_vec(&x);
        let sol = gf::solve(&m, &b).unwrap().expect("b is in the column space");
        prop_assert_eq!(m.mul_vec(&sol), b);
    }

    #[test]
    fn inverse_roundtrip((p, rows) in matrix_strategy(5)) {
        let n = rows.len().min(rows[0].len());
        let sq: Vec<Vec<i64>> = rows.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let m = Matrix::from_rows(p, &sq);
        match m.inverse() {
            Some(inv) => {
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert!(inv.mul(&m).is_identity());
            }
            None => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn transpose_preserves_rank((p, rows) in matrix_strategy(6)) {
        let m = Matrix::from_rows(p, &rows);
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }
}
