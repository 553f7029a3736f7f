//! Independent oracles shared by the integration tests. Nothing here calls the
//! crate's own linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use grq_core::constructions::FamilyLabel;
use grq_core::grmod::GradedModule;
use proptest::prelude::*;

pub fn naive_rank(p: i64, rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let k = a[i][c] * inv % p;
                for j in 0..ncols {
                    a[i][j] = (a[i][j] - k * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// dim Hom(m, n) of degree-0 maps, from the linear system X A_g = B_g X
/// restricted to weight-preserving X.
pub fn hom_dim(m: &GradedModule, n: &GradedModule) -> usize {
    let p = m.p() as i64;
    let (dm, dn) = (m.dim(), n.dim());
    // unknowns: X[i][j] with weight(n_i) == weight(m_j)
    let mut var = vec![vec![None; dm]; dn];
    let mut nv = 0;
    for i in 0..dn {
        for j in 0..dm {
            if n.weights()[i] == m.weights()[j] {
                var[i][j] = Some(nv);
                nv += 1;
            }
        }
    }
    if nv == 0 {
        return 0;
    }
    let mut rows = Vec::new();
    for (a, b) in m.action().iter().zip(n.action()) {
        // (X A - B X)[i][j] = sum_k X[i][k] A[k][j] - sum_k B[i][k] X[k][j]
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![0i64; nv];
                for k in 0..dm {
                    if let Some(v) = var[i][k] {
                        row[v] += a.get(k, j) as i64;
                    }
                }
                for k in 0..dn {
                    if let Some(v) = var[k][j] {
                        row[v] -= b.get(i, k) as i64;
                    }
                }
                if row.iter().any(|x| x.rem_euclid(p) != 0) {
                    rows.push(row);
                }
            }
        }
    }
    nv - naive_rank(p, &rows)
}

pub fn weight_multiset(m: &GradedModule) -> Vec<(i64, i64)> {
    let mut w: Vec<(i64, i64)> = m.weights().iter().map(|w| (w.a, w.b)).collect();
    w.sort();
    w
}

/// Family labels that build at p = 3 with modest dimension.
pub fn small_label() -> impl Strategy<Value = FamilyLabel> {
    let base = prop::sample::select(vec![
        "V(0)", "V(1)", "V(2)", "V(3)", "V(4)", "V(6)", "Vo(3)", "Vo(4)", "W(3)", "W(4)", "W(6)", "W(7)", "W(3)w0",
        "W(6)w0", "L(0)", "L(1)", "L(2)", "Q(0)", "Q(1)",
    ]);
    (base, -3i64..=3, -1i64..=1).prop_map(|(s, a, k)| {
        let l: FamilyLabel = s.parse().unwrap();
        // shifts must have coordinates congruent mod 3
        l.shifted(grq_core::grmod::Weight::new(a, a + 3 * k))
    })
}
