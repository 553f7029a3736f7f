//! Polynomial modules: the torsion radical t (largest polynomial submodule),
//! the quotient functor u (largest polynomial quotient), Ext-projectivity,
//! almost split sequences inside the polynomial category, resolutions there,
//! and the standard-module checks on the Borel side.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constructions::borel_projective;
use crate::gf::{self, EchelonSpace, Matrix};
use crate::grmod::{
    self, contravariant_dual, hom_space, is_indecomposable, quotient, quotient_with_lift, restrict, span_closure,
    AlgebraKind, GradedModule, LeftInverse, Weight,
};
use crate::homological::{
    almost_split_sequence, injective_hull, is_projective, projective_cover, tau, HomologicalError, ShortExact,
};

type Result<T> = std::result::Result<T, HomologicalError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyVerdict {
    pub is_polynomial: bool,
    pub offending_weights: Vec<Weight>,
    pub degree: Option<i64>,
}

pub fn is_polynomial(m: &GradedModule) -> PolyVerdict {
    let offending: Vec<Weight> = grmod::support(m).into_iter().filter(|w| !w.is_polynomial()).collect();
    PolyVerdict {
        is_polynomial: offending.is_empty(),
        offending_weights: offending,
        degree: m.degree(),
    }
}

/// t(m): the largest submodule with polynomial support.
///
/// Start from the polynomial weight spaces and repeatedly drop vectors that
/// some generator moves outside the current subspace.
pub fn t_poly(m: &GradedModule) -> (GradedModule, Matrix) {
    let n = m.dim();
    let f = m.field();
    let p = m.p();
    let mut spaces: BTreeMap<Weight, Vec<Vec<u32>>> = BTreeMap::new();
    for (w, idx) in m.weight_index() {
        if w.is_polynomial() {
            let vecs = idx
                .iter()
                .map(|&j| {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    e
                })
                .collect();
            spaces.insert(w, vecs);
        }
    }
    loop {
        let mut all = EchelonSpace::new(f, n);
        for vs in spaces.values() {
            for v in vs {
                all.insert(v);
            }
        }
        let mut changed = false;
        let mut next = BTreeMap::new();
        for (w, vs) in &spaces {
            if vs.is_empty() {
                continue;
            }
            let blocks: Vec<Matrix> = m
                .action()
                .iter()
                .map(|g| {
                    let cols: Vec<Vec<u32>> = vs.iter().map(|v| all.reduce(&g.mul_vec(v))).collect();
                    Matrix::from_cols(p, n, &cols)
                })
                .collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            let ker = gf::kernel_basis(&Matrix::vstack(p, vs.len(), &refs));
            if ker.cols() < vs.len() {
                changed = true;
            }
            let new: Vec<Vec<u32>> = ker
                .to_cols()
                .iter()
                .map(|c| {
                    let mut acc = vec![0u32; n];
                    for (v, &x) in vs.iter().zip(c) {
                        if x != 0 {
                            for (a, &b) in acc.iter_mut().zip(v) {
                                *a = f.add(*a, f.mul(x, b));
                            }
                        }
                    }
                    acc
                })
                .collect();
            next.insert(*w, new);
        }
        spaces = next;
        if !changed {
            break;
        }
    }
    let basis: Vec<Vec<u32>> = spaces.into_values().flatten().collect();
    restrict(m, &basis).expect("fixpoint is a submodule")
}

fn non_polynomial_span(m: &GradedModule) -> Matrix {
    let n = m.dim();
    let seeds = m
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_polynomial())
        .map(|(j, _)| {
            let mut e = vec![0u32; n];
            e[j] = 1;
            e
        })
        .collect();
    let basis = span_closure(m, seeds);
    if basis.is_empty() {
        Matrix::zeros(m.p(), n, 0)
    } else {
        Matrix::from_cols(m.p(), n, &basis)
    }
}

/// u(m): the quotient by the submodule generated by non-polynomial weight spaces.
pub fn u_poly(m: &GradedModule) -> (GradedModule, Matrix) {
    quotient(m, &non_polynomial_span(m)).expect("generated submodule")
}

fn u_poly_with_lift(m: &GradedModule) -> (GradedModule, Matrix, Matrix) {
    quotient_with_lift(m, &non_polynomial_span(m)).expect("generated submodule")
}

/// Ext-projective in the polynomial category: projective, or t(τ v) = 0.
pub fn ext_projective_in_poly(v: &GradedModule) -> Result<bool> {
    if is_projective(v)? {
        return Ok(true);
    }
    Ok(t_poly(&tau(v)?).0.is_zero())
}

/// Ext-injective in the polynomial category, via the contravariant duality.
pub fn ext_injective_in_poly(v: &GradedModule) -> Result<bool> {
    if !v.algebra().is_sl2() {
        return Err(HomologicalError::Precondition(
            "Ext-injectivity is computed through sl2 duality".into(),
        ));
    }
    ext_projective_in_poly(&contravariant_dual(v)?)
}

/// 0 -> t(τ v) -> t(E) -> v -> 0, from the almost split sequence ending at v.
pub fn almost_split_in_poly(v: &GradedModule) -> Result<ShortExact> {
    if !is_polynomial(v).is_polynomial {
        return Err(HomologicalError::Precondition("module is not polynomial".into()));
    }
    let seq = almost_split_sequence(v)?;
    let (tl, jl) = t_poly(&seq.left);
    if tl.is_zero() {
        return Err(HomologicalError::Precondition(
            "module is Ext-projective among polynomial modules".into(),
        ));
    }
    let (te, je) = t_poly(&seq.middle);
    let li = LeftInverse::new(&je).expect("inclusion");
    let moved = seq.inj.mul(&jl);
    let inj = li.apply(&moved);
    if je.mul(&inj) != moved {
        return Err(HomologicalError::Invariant("t(τ v) does not land in t(E)".into()));
    }
    let out = ShortExact {
        left: tl,
        middle: te,
        right: v.clone(),
        inj,
        surj: seq.surj.mul(&je),
    };
    if !out.is_exact() {
        return Err(HomologicalError::Invariant(
            "polynomial part of the sequence is not exact".into(),
        ));
    }
    if out.is_split() {
        return Err(HomologicalError::Invariant("polynomial sequence splits".into()));
    }
    if !is_indecomposable(&out.left) {
        return Err(HomologicalError::Invariant("t(τ v) is decomposable".into()));
    }
    Ok(out)
}

/// Cover of a polynomial module by a projective object of the polynomial category.
pub fn poly_projective_cover(v: &GradedModule) -> Result<(GradedModule, Matrix)> {
    let c = projective_cover(v)?;
    let (up, q, lift) = u_poly_with_lift(&c.projective);
    let epi = c.epi.mul(&lift);
    if epi.mul(&q) != c.epi {
        return Err(HomologicalError::Invariant("cover does not factor through u(P)".into()));
    }
    Ok((up, epi))
}

/// Dimensions of the first `n` terms of the minimal projective resolution inside polynomial modules.
pub fn poly_projective_resolution(v: &GradedModule, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut x = v.clone();
    for _ in 0..n {
        if x.is_zero() {
            out.push(0);
            continue;
        }
        let (up, epi) = poly_projective_cover(&x)?;
        out.push(up.dim());
        x = grmod::kernel(&up, &epi)?.0;
    }
    Ok(out)
}

/// Projective dimension inside polynomial modules, `None` meaning at least `cap`.
pub fn pd_in_poly(v: &GradedModule, cap: usize) -> Result<Option<usize>> {
    let mut x = v.clone();
    for i in 0..cap {
        let (up, epi) = poly_projective_cover(&x)?;
        let k = grmod::kernel(&up, &epi)?.0;
        if k.is_zero() {
            return Ok(Some(i));
        }
        x = k;
    }
    Ok(None)
}

/// v -> t(I(v)) with its cokernel.
pub fn poly_injective_hull(v: &GradedModule) -> Result<(GradedModule, Matrix, GradedModule)> {
    let (i, iota) = injective_hull(v)?;
    let (ti, j) = t_poly(&i);
    let li = LeftInverse::new(&j).expect("inclusion");
    let into = li.apply(&iota);
    if j.mul(&into) != iota {
        return Err(HomologicalError::Invariant(
            "polynomial module does not embed in t(I)".into(),
        ));
    }
    let (cok, _) = quotient(&ti, &into)?;
    Ok((ti, into, cok))
}

/// Dimensions of the first `n` terms of the minimal injective resolution inside polynomial modules.
pub fn poly_injective_resolution(v: &GradedModule, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut x = v.clone();
    for _ in 0..n {
        if x.is_zero() {
            out.push(0);
            continue;
        }
        let (ti, _, cok) = poly_injective_hull(&x)?;
        out.push(ti.dim());
        x = cok;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardCheck {
    pub lambda: Weight,
    pub dim: usize,
    pub top_weight_one_dimensional: bool,
    pub lower_weights_only: bool,
    pub scalar_endomorphisms: bool,
}

impl StandardCheck {
    pub fn passed(&self) -> bool {
        self.top_weight_one_dimensional && self.lower_weights_only && self.scalar_endomorphisms
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiHereditaryReport {
    pub p: u32,
    pub r: u32,
    pub d: i64,
    pub standards: Vec<StandardCheck>,
    pub passed: bool,
}

/// For each polynomial λ of degree d, test Δ(λ) = u(Ẑ(λ)).
pub fn quasi_hereditary_check(p: u32, r: u32, d: i64) -> Result<QuasiHereditaryReport> {
    let alg = AlgebraKind::borel(p, r);
    let mut standards = Vec::new();
    for a in 0..=d {
        let lambda = Weight::new(a, d - a);
        let z = borel_projective(alg, lambda)?;
        let (delta, _) = u_poly(&z);
        let top = delta.weights().iter().filter(|&&w| w == lambda).count() == 1;
        let lower = delta.weights().iter().all(|&w| {
            let diff = lambda - w;
            w == lambda || (diff.a > 0 && diff.a == -diff.b)
        });
        let scalar = hom_space(&delta, &delta).len() == 1;
        standards.push(StandardCheck {
            lambda,
            dim: delta.dim(),
            top_weight_one_dimensional: top,
            lower_weights_only: lower,
            scalar_endomorphisms: scalar,
        });
    }
    let passed = standards.iter().all(|s| s.passed());
    Ok(QuasiHereditaryReport {
        p,
        r,
        d,
        standards,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::weyl_hat;
    use crate::grmod::shift;

    #[test]
    fn t_of_polynomial_is_identity() {
        let v = weyl_hat(3, 4);
        assert_eq!(t_poly(&v).0, v);
        assert_eq!(u_poly(&v).0, v);
    }

    #[test]
    fn t_of_far_negative_shift_vanishes() {
        let v = shift(&weyl_hat(3, 2), Weight::new(-3, -3));
        assert!(t_poly(&v).0.is_zero());
        assert!(u_poly(&v).0.is_zero());
    }
}
