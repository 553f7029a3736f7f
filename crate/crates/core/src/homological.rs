//! Projective covers, Heller shifts, the Auslander-Reiten translate, Ext^1 by
//! stable homomorphisms, almost split sequences, Betti numbers and rank probes.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{borel_projective, projective_indec, ConstructionError};
use crate::gf::{self, EchelonSpace, Matrix};
use crate::grmod::{
    self, borel_dual, contravariant_dual, direct_sum, endomorphism_radical, flatten, hom_space, hom_space_ungraded,
    kernel, quotient_with_lift, shift, AlgebraKind, GradedModule, LeftInverse, ModuleError, UngradedModule, Weight,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologicalError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("cover construction failed: {0}")]
    Cover(String),
    #[error("socle of Ext has dimension {0}, expected 1")]
    SocleDimension(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("precondition: {0}")]
    Precondition(String),
}

type Result<T> = std::result::Result<T, HomologicalError>;

/// A projective cover `epi: projective -> m`, with the indecomposable summands in order.
#[derive(Clone, Debug)]
pub struct Cover {
    pub projective: GradedModule,
    pub epi: Matrix,
    pub summands: Vec<GradedModule>,
}

/// Indecomposable projective covering the simple with highest weight `hw`.
fn indecomposable_projective(alg: AlgebraKind, hw: Weight) -> Result<GradedModule> {
    match alg {
        AlgebraKind::Sl2 { p } => {
            let r = (hw.a - hw.b).rem_euclid(p as i64);
            let q = projective_indec(p, r)?;
            Ok(shift(&q, hw - Weight::new(r, 0)))
        }
        AlgebraKind::Borel { .. } => Ok(borel_projective(alg, hw)?),
    }
}

/// Highest weights of the simple summands of the top of m, with multiplicities.
fn top_types(m: &GradedModule) -> BTreeMap<Weight, usize> {
    let (t, _) = grmod::top(m);
    let mut out = BTreeMap::new();
    for (w, idx) in t.weight_index() {
        let mult = match m.algebra() {
            AlgebraKind::Sl2 { .. } => idx.len() - t.action()[0].select_cols(&idx).rank(),
            AlgebraKind::Borel { .. } => idx.len(),
        };
        if mult > 0 {
            out.insert(w, mult);
        }
    }
    out
}

/// Greedy choice of maps from `q` whose images in the top are independent.
fn pick_maps(basis: Vec<Matrix>, top_proj: &Matrix, mult: usize, space: &mut EchelonSpace) -> Vec<Matrix> {
    let mut chosen = Vec::new();
    for psi in basis {
        if chosen.len() == mult {
            break;
        }
        let img = top_proj.mul(&psi);
        let mut grew = false;
        for c in img.to_cols() {
            grew |= space.insert(&c);
        }
        if grew {
            chosen.push(psi);
        }
    }
    chosen
}

pub fn projective_cover(m: &GradedModule) -> Result<Cover> {
    let alg = m.algebra();
    let p = m.p();
    if m.is_zero() {
        return Ok(Cover {
            projective: GradedModule::zero(alg),
            epi: Matrix::zeros(p, 0, 0),
            summands: Vec::new(),
        });
    }
    let (t, proj) = grmod::top(m);
    let mut space = EchelonSpace::new(m.field(), t.dim());
    let mut summands = Vec::new();
    let mut maps = Vec::new();
    for (hw, mult) in top_types(m) {
        let q = indecomposable_projective(alg, hw)?;
        let chosen = pick_maps(hom_space(&q, m), &proj, mult, &mut space);
        if chosen.len() != mult {
            return Err(HomologicalError::Cover(format!(
                "found {} of {mult} maps for top weight {hw}",
                chosen.len()
            )));
        }
        for psi in chosen {
            summands.push(q.clone());
            maps.push(psi);
        }
    }
    if space.dim() != t.dim() {
        return Err(HomologicalError::Cover("top not covered".into()));
    }
    let refs: Vec<&GradedModule> = summands.iter().collect();
    let projective = direct_sum(&refs)?;
    let mrefs: Vec<&Matrix> = maps.iter().collect();
    let epi = Matrix::hstack(p, m.dim(), &mrefs);
    if epi.rank() != m.dim() {
        return Err(HomologicalError::Invariant("cover map is not onto".into()));
    }
    Ok(Cover {
        projective,
        epi,
        summands,
    })
}

/// 0 -> Ω(m) -> P -> m -> 0.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cover: Cover,
    pub omega: GradedModule,
    pub iota: Matrix,
}

pub fn presentation(m: &GradedModule) -> Result<Presentation> {
    let cover = projective_cover(m)?;
    let (omega, iota) = kernel(&cover.projective, &cover.epi)?;
    Ok(Presentation { cover, omega, iota })
}

/// Kernel of the projective cover. A minimal cover over a self-injective
/// algebra leaves no projective summands in the kernel, so none are stripped.
pub fn omega(m: &GradedModule) -> Result<GradedModule> {
    Ok(presentation(m)?.omega)
}

/// Cokernel of the injective hull, computed through the duality.
pub fn omega_inv(m: &GradedModule) -> Result<GradedModule> {
    match m.algebra() {
        AlgebraKind::Sl2 { .. } => Ok(contravariant_dual(&omega(&contravariant_dual(m)?)?)?),
        AlgebraKind::Borel { .. } => Ok(borel_dual(&omega(&borel_dual(m)?)?)?),
    }
}

pub fn omega_pow(m: &GradedModule, k: i64) -> Result<GradedModule> {
    let mut x = m.clone();
    for _ in 0..k.unsigned_abs() {
        x = if k > 0 { omega(&x)? } else { omega_inv(&x)? };
    }
    Ok(x)
}

/// Shift by which the Nakayama functor acts: zero for sl2r1; for a truncated
/// polynomial ring with lowering generators, minus the degree of its socle.
pub fn nakayama_shift(alg: AlgebraKind) -> Weight {
    match alg {
        AlgebraKind::Sl2 { .. } => Weight::ZERO,
        AlgebraKind::Borel { p, .. } => {
            let total: i64 = alg.generator_degrees().iter().map(|d| -(p as i64 - 1) * d.a).sum();
            total * Weight::ALPHA
        }
    }
}

pub fn nakayama(m: &GradedModule) -> GradedModule {
    shift(m, nakayama_shift(m.algebra()))
}

pub fn nakayama_inv(m: &GradedModule) -> GradedModule {
    shift(m, -nakayama_shift(m.algebra()))
}

pub fn tau(m: &GradedModule) -> Result<GradedModule> {
    Ok(nakayama(&omega_pow(m, 2)?))
}

pub fn tau_inv(m: &GradedModule) -> Result<GradedModule> {
    omega_pow(&nakayama_inv(m), -2)
}

pub fn is_projective(m: &GradedModule) -> Result<bool> {
    Ok(projective_cover(m)?.projective.dim() == m.dim())
}

/// Injective hull `m -> I`, obtained by dualizing the projective cover of the dual.
pub fn injective_hull(m: &GradedModule) -> Result<(GradedModule, Matrix)> {
    let dual = match m.algebra() {
        AlgebraKind::Sl2 { .. } => contravariant_dual,
        AlgebraKind::Borel { .. } => borel_dual,
    };
    let c = projective_cover(&dual(m)?)?;
    Ok((dual(&c.projective)?, c.epi.transpose()))
}

// ---------------------------------------------------------------------------
// Ext^1

/// Subspace of Hom(Ω(v), w) of maps factoring through a projective, computed
/// two ways: through the cover of w, and by extension along Ω(v) -> P_v.
struct StableHom {
    basis: Vec<Matrix>,
    stable: EchelonSpace,
}

fn stable_hom(pv: &Presentation, w: &GradedModule) -> Result<StableHom> {
    let om = &pv.omega;
    let f = w.field();
    let len = w.dim() * om.dim();
    let basis = hom_space(om, w);
    let mut via_cover = EchelonSpace::new(f, len);
    let cw = projective_cover(w)?;
    for h in hom_space(om, &cw.projective) {
        via_cover.insert(&flatten(&cw.epi.mul(&h)));
    }
    let mut via_ext = EchelonSpace::new(f, len);
    for g in hom_space(&pv.cover.projective, w) {
        via_ext.insert(&flatten(&g.mul(&pv.iota)));
    }
    let same = via_cover.dim() == via_ext.dim() && via_cover.basis().iter().all(|v| via_ext.contains(v));
    if !same {
        return Err(HomologicalError::Invariant(format!(
            "the two descriptions of projectively-factoring maps disagree ({} vs {})",
            via_cover.dim(),
            via_ext.dim()
        )));
    }
    Ok(StableHom {
        basis,
        stable: via_cover,
    })
}

/// Ext^1(v, w) as Hom(Ω v, w) modulo maps factoring through projectives.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub dim: usize,
    /// Representatives Ω(v) -> w of a basis.
    pub reps: Vec<Matrix>,
    pub omega: GradedModule,
}

pub fn ext1(v: &GradedModule, w: &GradedModule) -> Result<Ext1> {
    if v.algebra() != w.algebra() {
        return Err(ModuleError::AlgebraMismatch(v.algebra(), w.algebra()).into());
    }
    let pv = presentation(v)?;
    if pv.omega.is_zero() || w.is_zero() {
        return Ok(Ext1 {
            dim: 0,
            reps: Vec::new(),
            omega: pv.omega,
        });
    }
    let sh = stable_hom(&pv, w)?;
    let mut space = sh.stable.clone();
    let mut reps = Vec::new();
    for h in sh.basis {
        if space.insert(&flatten(&h)) {
            reps.push(h);
        }
    }
    Ok(Ext1 {
        dim: reps.len(),
        reps,
        omega: pv.omega,
    })
}

// ---------------------------------------------------------------------------
// short exact and almost split sequences

#[derive(Clone, Debug, Serialize)]
pub struct ShortExact {
    #[serde(serialize_with = "ser_module")]
    pub left: GradedModule,
    #[serde(serialize_with = "ser_module")]
    pub middle: GradedModule,
    #[serde(serialize_with = "ser_module")]
    pub right: GradedModule,
    #[serde(serialize_with = "ser_matrix")]
    pub inj: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub surj: Matrix,
}

fn ser_module<S: serde::Serializer>(m: &GradedModule, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: serde_json::Value = serde_json::from_str(&m.to_json()).expect("module json");
    serde::Serialize::serialize(&v, s)
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.to_rows(), s)
}

impl ShortExact {
    pub fn is_exact(&self) -> bool {
        let (l, e, r) = (&self.left, &self.middle, &self.right);
        grmod::is_homomorphism(l, e, &self.inj)
            && grmod::is_homomorphism(e, r, &self.surj)
            && e.dim() == l.dim() + r.dim()
            && self.inj.rank() == l.dim()
            && self.surj.rank() == r.dim()
            && self.surj.mul(&self.inj).is_zero()
    }

    /// Whether a graded section of `surj` exists.
    pub fn is_split(&self) -> bool {
        has_section(&hom_space(&self.right, &self.middle), &self.surj)
    }

    /// Whether a section exists after forgetting the grading.
    pub fn is_split_ungraded(&self) -> bool {
        has_section(
            &hom_space_ungraded(&self.right.forget(), &self.middle.forget()),
            &self.surj,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }
}

fn has_section(basis: &[Matrix], surj: &Matrix) -> bool {
    let n = surj.rows();
    if n == 0 {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let cols: Vec<Vec<u32>> = basis.iter().map(|h| flatten(&surj.mul(h))).collect();
    let a = Matrix::from_cols(surj.p(), n * n, &cols);
    let target = flatten(&Matrix::identity(surj.p(), n));
    matches!(gf::solve(&a, &target), Ok(Some(_)))
}

type MatrixOp<'a> = Box<dyn Fn(&Matrix) -> Matrix + 'a>;

/// Basis (in `basis` coordinates) of {h : op(h) ∈ stable for every op}, as matrices.
fn socle_space(basis: &[Matrix], stable: &EchelonSpace, ops: &[MatrixOp<'_>]) -> Vec<Matrix> {
    if ops.is_empty() {
        return basis.to_vec();
    }
    let p = basis[0].p();
    let mut blocks = Vec::new();
    for op in ops {
        let cols: Vec<Vec<u32>> = basis.iter().map(|h| stable.reduce(&flatten(&op(h)))).collect();
        blocks.push(Matrix::from_cols(p, stable.ambient(), &cols));
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let stacked = Matrix::vstack(p, basis.len(), &refs);
    gf::kernel_basis(&stacked)
        .to_cols()
        .into_iter()
        .map(|c| {
            basis
                .iter()
                .zip(&c)
                .fold(Matrix::zeros(p, basis[0].rows(), basis[0].cols()), |acc, (h, &x)| {
                    acc.add_scaled(h, x)
                })
        })
        .collect()
}

fn span_of(mats: &[Matrix], len: usize, f: crate::gf::PrimeField) -> EchelonSpace {
    let mut s = EchelonSpace::new(f, len);
    for m in mats {
        s.insert(&flatten(m));
    }
    s
}

/// Lift an endomorphism φ of v to the kernel of the cover: the map Ω(φ).
fn omega_of_map(pv: &Presentation, v: &GradedModule, phi: &Matrix) -> Result<Matrix> {
    let p = v.p();
    let pp = &pv.cover.projective;
    let basis = hom_space(pp, pp);
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| flatten(&pv.cover.epi.mul(b))).collect();
    let a = Matrix::from_cols(p, v.dim() * pp.dim(), &cols);
    let rhs = flatten(&phi.mul(&pv.cover.epi));
    let c = gf::solve(&a, &rhs)
        .map_err(|e| HomologicalError::Invariant(e.to_string()))?
        .ok_or_else(|| HomologicalError::Invariant("endomorphism does not lift to the cover".into()))?;
    let lifted = basis
        .iter()
        .zip(&c)
        .fold(Matrix::zeros(p, pp.dim(), pp.dim()), |acc, (b, &x)| {
            acc.add_scaled(b, x)
        });
    let li = LeftInverse::new(&pv.iota).expect("inclusion is injective");
    let moved = lifted.mul(&pv.iota);
    let om = li.apply(&moved);
    if pv.iota.mul(&om) != moved {
        return Err(HomologicalError::Invariant("lifted map does not preserve Ω".into()));
    }
    Ok(om)
}

/// The almost split sequence 0 -> τ v -> E -> v -> 0.
///
/// The extension class spans the socle of Ext^1(v, τ v) under the left action
/// of End(τ v); the socle under the right action of End(v) is computed as well
/// and the two must coincide.
pub fn almost_split_sequence(v: &GradedModule) -> Result<ShortExact> {
    let f = v.field();
    let p = v.p();
    let pv = presentation(v)?;
    if pv.omega.is_zero() {
        return Err(HomologicalError::Precondition("module is projective".into()));
    }
    let omega2 = omega(&pv.omega)?;
    let tv = nakayama(&omega2);
    let sh = stable_hom(&pv, &tv)?;
    let len = tv.dim() * pv.omega.dim();

    let rad_left = endomorphism_radical(&tv)?;
    let left_ops: Vec<MatrixOp<'_>> = rad_left
        .iter()
        .map(|nu| Box::new(move |h: &Matrix| nu.mul(h)) as Box<dyn Fn(&Matrix) -> Matrix>)
        .collect();
    let k_left = socle_space(&sh.basis, &sh.stable, &left_ops);

    let rad_right = endomorphism_radical(v)?;
    let lifted: Vec<Matrix> = rad_right
        .iter()
        .map(|phi| omega_of_map(&pv, v, phi))
        .collect::<Result<_>>()?;
    let right_ops: Vec<MatrixOp<'_>> = lifted
        .iter()
        .map(|om| Box::new(move |h: &Matrix| h.mul(om)) as Box<dyn Fn(&Matrix) -> Matrix>)
        .collect();
    let k_right = socle_space(&sh.basis, &sh.stable, &right_ops);

    let sl = span_of(&k_left, len, f);
    let sr = span_of(&k_right, len, f);
    let socle_dim = sl.dim() - sh.stable.dim();
    if sl.dim() != sr.dim() || !sl.basis().iter().all(|x| sr.contains(x)) {
        return Err(HomologicalError::Invariant(format!(
            "left and right socles of Ext differ (dims {} and {})",
            sl.dim() - sh.stable.dim(),
            sr.dim() - sh.stable.dim()
        )));
    }
    if socle_dim != 1 {
        return Err(HomologicalError::SocleDimension(socle_dim));
    }
    let xi = k_left
        .into_iter()
        .find(|h| !sh.stable.contains(&flatten(h)))
        .expect("socle is nonzero");

    // pushout of 0 -> Ω v -> P_v -> v -> 0 along ξ
    let pvm = &pv.cover.projective;
    let sum = direct_sum(&[&tv, pvm])?;
    let sub = Matrix::vstack(p, pv.omega.dim(), &[&xi, &pv.iota.neg()]);
    let (middle, proj, lift) = quotient_with_lift(&sum, &sub)?;
    let inc_left = Matrix::vstack(
        p,
        tv.dim(),
        &[&Matrix::identity(p, tv.dim()), &Matrix::zeros(p, pvm.dim(), tv.dim())],
    );
    let inj = proj.mul(&inc_left);
    let onto = Matrix::hstack(p, v.dim(), &[&Matrix::zeros(p, v.dim(), tv.dim()), &pv.cover.epi]);
    let surj = onto.mul(&lift);
    let seq = ShortExact {
        left: tv,
        middle,
        right: v.clone(),
        inj,
        surj,
    };
    if !seq.is_exact() {
        return Err(HomologicalError::Invariant("pushout sequence is not exact".into()));
    }
    if seq.is_split() {
        return Err(HomologicalError::Invariant("almost split sequence splits".into()));
    }
    Ok(seq)
}

// ---------------------------------------------------------------------------
// resolutions

/// Dimensions of the first `n_terms` terms of a minimal projective resolution.
pub fn betti(m: &GradedModule, n_terms: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(n_terms);
    let mut x = m.clone();
    for _ in 0..n_terms {
        if x.is_zero() {
            out.push(0);
            continue;
        }
        let pr = presentation(&x)?;
        out.push(pr.cover.projective.dim());
        x = pr.omega;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Complexity {
    Zero,
    One,
    Two,
    Unknown,
}

/// Bounded-window growth heuristic on the Betti dimensions.
pub fn complexity_estimate(m: &GradedModule, window: usize) -> Result<Complexity> {
    let b = betti(m, window.max(4))?;
    Ok(classify_growth(&b))
}

pub fn classify_growth(b: &[usize]) -> Complexity {
    if b.contains(&0) {
        return Complexity::Zero;
    }
    let half = b.len() / 2;
    let max_first = *b[..half].iter().max().unwrap();
    let max_second = *b[half..].iter().max().unwrap();
    if max_second <= max_first {
        return Complexity::One;
    }
    let d: Vec<i64> = b.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    let hd = d.len() / 2;
    let dmax_first = d[..hd].iter().map(|x| x.abs()).max().unwrap();
    let dmax_second = d[hd..].iter().map(|x| x.abs()).max().unwrap();
    if dmax_second <= dmax_first && d[hd..].iter().any(|&x| x != 0) {
        return Complexity::Two;
    }
    Complexity::Unknown
}

// ---------------------------------------------------------------------------
// ungraded counterparts

fn ungraded_restrict(m: &UngradedModule, basis: &Matrix) -> UngradedModule {
    let li = LeftInverse::new(basis).expect("independent basis");
    UngradedModule {
        algebra: m.algebra,
        action: m.action.iter().map(|g| li.apply(&g.mul(basis))).collect(),
    }
}

/// Projective cover of an ungraded module, returned as (P, epi).
pub fn ungraded_cover(m: &UngradedModule) -> Result<(UngradedModule, Matrix)> {
    let p = m.algebra.p();
    let n = m.dim();
    let f = m.algebra.field();
    let rad = grmod::radical_ungraded(m);
    let mut rs = EchelonSpace::new(f, n);
    for c in rad.to_cols() {
        rs.insert(&c);
    }
    let comp = rs.non_pivots();
    let k = comp.len();
    let mut proj = Matrix::zeros(p, k, n);
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        let r = rs.reduce(&e);
        for (qi, &c) in comp.iter().enumerate() {
            proj.set(qi, j, r[c]);
        }
    }
    let lift = Matrix::from_fn(p, n, k, |i, j| i64::from(comp[j] == i));
    let top_action: Vec<Matrix> = m.action.iter().map(|g| proj.mul(&g.mul(&lift))).collect();
    let mut types: Vec<(GradedModule, usize)> = Vec::new();
    match m.algebra {
        AlgebraKind::Sl2 { .. } => {
            for r in 0..p as i64 {
                let hr = top_action[2].sub(&Matrix::identity(p, k).scale(f.reduce(r)));
                let stacked = Matrix::vstack(p, k, &[&top_action[0], &hr]);
                let mult = k - stacked.rank();
                if mult > 0 {
                    types.push((projective_indec(p, r)?, mult));
                }
            }
        }
        AlgebraKind::Borel { .. } => types.push((borel_projective(m.algebra, Weight::ZERO)?, k)),
    }
    let mut space = EchelonSpace::new(f, k);
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    for (q, mult) in types {
        let chosen = pick_maps(hom_space_ungraded(&q.forget(), m), &proj, mult, &mut space);
        if chosen.len() != mult {
            return Err(HomologicalError::Cover("ungraded cover incomplete".into()));
        }
        for psi in chosen {
            parts.push(q.clone());
            maps.push(psi);
        }
    }
    let refs: Vec<&GradedModule> = parts.iter().collect();
    let pm = if refs.is_empty() {
        GradedModule::zero(m.algebra)
    } else {
        direct_sum(&refs)?
    };
    let mrefs: Vec<&Matrix> = maps.iter().collect();
    let epi = if mrefs.is_empty() {
        Matrix::zeros(p, n, 0)
    } else {
        Matrix::hstack(p, n, &mrefs)
    };
    if epi.rank() != n {
        return Err(HomologicalError::Invariant("ungraded cover is not onto".into()));
    }
    Ok((pm.forget(), epi))
}

/// Betti dimensions computed without ever consulting weights.
pub fn ungraded_betti(m: &UngradedModule, n_terms: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(n_terms);
    let mut x = m.clone();
    for _ in 0..n_terms {
        if x.dim() == 0 {
            out.push(0);
            continue;
        }
        let (pm, epi) = ungraded_cover(&x)?;
        out.push(pm.dim());
        let ker = gf::kernel_basis(&epi);
        x = if ker.cols() == 0 {
            UngradedModule {
                algebra: x.algebra,
                action: vec![Matrix::zeros(x.algebra.p(), 0, 0); x.action.len()],
            }
        } else {
            ungraded_restrict(&pm, &ker)
        };
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// rank probes

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProbe {
    pub free: bool,
    pub rank: usize,
    pub free_rank: Option<usize>,
}

/// Restrict to k[x]/(x^p) for x = aE + bF + cH and test freeness by rank.
pub fn rank_probe(m: &GradedModule, coeffs: (i64, i64, i64)) -> Result<RankProbe> {
    if !m.algebra().is_sl2() {
        return Err(HomologicalError::Precondition("rank probes need sl2r1".into()));
    }
    let f = m.field();
    let (a, b, c) = (f.reduce(coeffs.0), f.reduce(coeffs.1), f.reduce(coeffs.2));
    if f.add(f.mul(c, c), f.mul(a, b)) != 0 || (a, b, c) == (0, 0, 0) {
        return Err(HomologicalError::Precondition(
            "element is not a nonzero nilpotent".into(),
        ));
    }
    let act = m.action();
    let x = act[0].scale(a).add(&act[1].scale(b)).add(&act[2].scale(c));
    let rank = x.rank();
    let p = m.p() as usize;
    let free_rank = m.dim().is_multiple_of(p).then(|| m.dim() / p * (p - 1));
    Ok(RankProbe {
        free: free_rank == Some(rank),
        rank,
        free_rank,
    })
}
