//! Z^2-graded modules over restricted sl2 and over truncated polynomial rings.
//!
//! Every module keeps a weight-homogeneous basis: basis vector `j` lives in
//! weight `weights[j]`, and each generator matrix acts on column vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, EchelonSpace, Matrix, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("operation not supported for this algebra: {0}")]
    Unsupported(String),
    #[error("algebras differ: {0} vs {1}")]
    AlgebraMismatch(AlgebraKind, AlgebraKind),
    #[error("vector is not weight-homogeneous")]
    NotHomogeneous,
    #[error("subspace is not closed under the action")]
    NotSubmodule,
    #[error("malformed module: {0}")]
    Shape(String),
    #[error("module fails validation: {0}")]
    Invalid(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    pub a: i64,
    pub b: i64,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };
    /// The positive root of GL2.
    pub const ALPHA: Weight = Weight { a: 1, b: -1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Weight { a, b }
    }

    pub fn degree(self) -> i64 {
        self.a + self.b
    }

    pub fn is_polynomial(self) -> bool {
        self.a >= 0 && self.b >= 0
    }

    pub fn swap(self) -> Weight {
        Weight { a: self.b, b: self.a }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(-self.a, -self.b)
    }
}

impl Mul<Weight> for i64 {
    type Output = Weight;
    fn mul(self, w: Weight) -> Weight {
        Weight::new(self * w.a, self * w.b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(d)?;
        Ok(Weight { a, b })
    }
}

/// The two supported algebras.
///
/// `Borel { lo, hi }` is k[X_lo..X_hi]/(X_i^p) with X_i lowering weights by
/// p^(i-1)(1,-1); the usual B_rT case is `lo = 1, hi = r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    Sl2 { p: u32 },
    Borel { p: u32, lo: u32, hi: u32 },
}

impl AlgebraKind {
    pub fn sl2(p: u32) -> Self {
        AlgebraKind::Sl2 { p }
    }

    pub fn borel(p: u32, r: u32) -> Self {
        AlgebraKind::Borel { p, lo: 1, hi: r }
    }

    pub fn borel_range(p: u32, lo: u32, hi: u32) -> Self {
        AlgebraKind::Borel { p, lo, hi }
    }

    pub fn p(self) -> u32 {
        match self {
            AlgebraKind::Sl2 { p } | AlgebraKind::Borel { p, .. } => p,
        }
    }

    pub fn field(self) -> PrimeField {
        PrimeField::new(self.p()).expect("algebra over a non-prime modulus")
    }

    pub fn is_sl2(self) -> bool {
        matches!(self, AlgebraKind::Sl2 { .. })
    }

    pub fn num_generators(self) -> usize {
        match self {
            AlgebraKind::Sl2 { .. } => 3,
            AlgebraKind::Borel { lo, hi, .. } => (hi + 1 - lo) as usize,
        }
    }

    pub fn generator_names(self) -> Vec<String> {
        match self {
            AlgebraKind::Sl2 { .. } => vec!["E".into(), "F".into(), "H".into()],
            AlgebraKind::Borel { lo, hi, .. } => (lo..=hi).map(|i| format!("X{i}")).collect(),
        }
    }

    pub fn generator_degrees(self) -> Vec<Weight> {
        match self {
            AlgebraKind::Sl2 { .. } => vec![Weight::new(1, -1), Weight::new(-1, 1), Weight::ZERO],
            AlgebraKind::Borel { p, lo, hi } => (lo..=hi).map(|i| -(p as i64).pow(i - 1) * Weight::ALPHA).collect(),
        }
    }

    /// Dimension of the algebra itself.
    pub fn dim(self) -> usize {
        let p = self.p() as usize;
        match self {
            AlgebraKind::Sl2 { .. } => p * p * p,
            AlgebraKind::Borel { .. } => p.pow(self.num_generators() as u32),
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Sl2 { p } => write!(f, "sl2r1(p={p})"),
            AlgebraKind::Borel { p, lo: 1, hi } => write!(f, "borel(p={p},r={hi})"),
            AlgebraKind::Borel { p, lo, hi } => write!(f, "borel(p={p},X{lo}..X{hi})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedModule {
    algebra: AlgebraKind,
    weights: Vec<Weight>,
    action: Vec<Matrix>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule[{}; dim {}; weights", self.algebra, self.dim())?;
        for w in &self.weights {
            write!(f, " {w}")?;
        }
        write!(f, "]")
    }
}

/// A degree-0 module homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: GradedModule, target: GradedModule, matrix: Matrix) -> Self {
        ModuleMap { source, target, matrix }
    }

    /// Checks shape, weight preservation and intertwining.
    pub fn is_homomorphism(&self) -> bool {
        is_homomorphism(&self.source, &self.target, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }
}

pub fn is_homomorphism(source: &GradedModule, target: &GradedModule, m: &Matrix) -> bool {
    if m.rows() != target.dim() || m.cols() != source.dim() || source.algebra != target.algebra {
        return false;
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j) != 0 && target.weights[i] != source.weights[j] {
                return false;
            }
        }
    }
    source
        .action
        .iter()
        .zip(&target.action)
        .all(|(gs, gt)| gt.mul(m) == m.mul(gs))
}

/// One failed invariant reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    Relation(String),
    Grading { generator: String, row: usize, col: usize },
    HScalar { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::Relation(s) => write!(f, "relation {s} fails"),
            Violation::Grading { generator, row, col } => {
                write!(f, "{generator} entry ({row},{col}) breaks the grading")
            }
            Violation::HScalar { index } => {
                write!(f, "H is not the weight scalar on basis vector {index}")
            }
        }
    }
}

impl GradedModule {
    /// Assemble a module, checking only matrix shapes.
    pub fn new(algebra: AlgebraKind, weights: Vec<Weight>, action: Vec<Matrix>) -> Result<Self, ModuleError> {
        let n = weights.len();
        if action.len() != algebra.num_generators() {
            return Err(ModuleError::Shape(format!(
                "expected {} generator matrices, got {}",
                algebra.num_generators(),
                action.len()
            )));
        }
        for (g, name) in action.iter().zip(algebra.generator_names()) {
            if g.rows() != n || g.cols() != n || g.p() != algebra.p() {
                return Err(ModuleError::Shape(format!(
                    "matrix {name} has the wrong shape or modulus"
                )));
            }
        }
        Ok(GradedModule {
            algebra,
            weights,
            action,
        })
    }

    pub fn zero(algebra: AlgebraKind) -> Self {
        let p = algebra.p();
        GradedModule {
            algebra,
            weights: Vec::new(),
            action: (0..algebra.num_generators()).map(|_| Matrix::zeros(p, 0, 0)).collect(),
        }
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn generator(&self, name: &str) -> Option<&Matrix> {
        self.algebra
            .generator_names()
            .iter()
            .position(|n| n == name)
            .map(|i| &self.action[i])
    }

    /// Basis indices grouped by weight.
    pub fn weight_index(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut m: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (j, &w) in self.weights.iter().enumerate() {
            m.entry(w).or_default().push(j);
        }
        m
    }

    /// Sorted multiset of weights.
    pub fn weight_multiset(&self) -> Vec<Weight> {
        let mut w = self.weights.clone();
        w.sort();
        w
    }

    /// Degree shared by all weights, if any.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.weights.iter().map(|w| w.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn forget(&self) -> UngradedModule {
        UngradedModule {
            algebra: self.algebra,
            action: self.action.clone(),
        }
    }

    /// Weight of a homogeneous vector; `Ok(None)` for the zero vector.
    pub fn vector_weight(&self, v: &[u32]) -> Result<Option<Weight>, ModuleError> {
        let mut w = None;
        for (j, &x) in v.iter().enumerate() {
            if x != 0 {
                match w {
                    None => w = Some(self.weights[j]),
                    Some(w0) if w0 != self.weights[j] => return Err(ModuleError::NotHomogeneous),
                    _ => {}
                }
            }
        }
        Ok(w)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModuleJson::from(self)).expect("module serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ModuleError> {
        let j: ModuleJson = serde_json::from_str(s).map_err(|e| ModuleError::Json(e.to_string()))?;
        j.into_module()
    }
}

/// The module with its weights forgotten.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UngradedModule {
    pub algebra: AlgebraKind,
    pub action: Vec<Matrix>,
}

impl UngradedModule {
    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, |m| m.rows())
    }
}

// ---------------------------------------------------------------------------
// validation

pub fn validate(m: &GradedModule) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = m.dim();
    let p = m.p();
    let f = m.field();
    if m.action.len() != m.algebra.num_generators() {
        out.push(Violation::Shape("wrong number of generators".into()));
        return out;
    }
    for g in &m.action {
        if g.rows() != n || g.cols() != n {
            out.push(Violation::Shape("generator matrix has the wrong size".into()));
            return out;
        }
    }
    let names = m.algebra.generator_names();
    for ((g, name), deg) in m.action.iter().zip(&names).zip(m.algebra.generator_degrees()) {
        for i in 0..n {
            for j in 0..n {
                if g.get(i, j) != 0 && m.weights[i] != m.weights[j] + deg {
                    out.push(Violation::Grading {
                        generator: name.clone(),
                        row: i,
                        col: j,
                    });
                }
            }
        }
    }
    match m.algebra {
        AlgebraKind::Sl2 { .. } => {
            let (e, fm, h) = (&m.action[0], &m.action[1], &m.action[2]);
            let pp = p as u64;
            if !e.pow(pp).is_zero() {
                out.push(Violation::Relation("E^p = 0".into()));
            }
            if !fm.pow(pp).is_zero() {
                out.push(Violation::Relation("F^p = 0".into()));
            }
            if h.pow(pp) != *h {
                out.push(Violation::Relation("H^p = H".into()));
            }
            if h.mul(e).sub(&e.mul(h)) != e.scale(2) {
                out.push(Violation::Relation("HE - EH = 2E".into()));
            }
            if h.mul(fm).sub(&fm.mul(h)) != fm.scale(2).neg() {
                out.push(Violation::Relation("HF - FH = -2F".into()));
            }
            if e.mul(fm).sub(&fm.mul(e)) != *h {
                out.push(Violation::Relation("EF - FE = H".into()));
            }
            for j in 0..n {
                let w = m.weights[j];
                let want = f.reduce(w.a - w.b);
                let ok = (0..n).all(|i| h.get(i, j) == if i == j { want } else { 0 });
                if !ok {
                    out.push(Violation::HScalar { index: j });
                }
            }
        }
        AlgebraKind::Borel { .. } => {
            for (x, name) in m.action.iter().zip(&names) {
                if !x.pow(p as u64).is_zero() {
                    out.push(Violation::Relation(format!("{name}^p = 0")));
                }
            }
            for i in 0..m.action.len() {
                for j in i + 1..m.action.len() {
                    if m.action[i].mul(&m.action[j]) != m.action[j].mul(&m.action[i]) {
                        out.push(Violation::Relation(format!(
                            "{}{} = {}{}",
                            names[i], names[j], names[j], names[i]
                        )));
                    }
                }
            }
        }
    }
    out
}

pub fn is_valid(m: &GradedModule) -> bool {
    validate(m).is_empty()
}

pub(crate) fn ensure_valid(m: &GradedModule) -> Result<(), ModuleError> {
    let v = validate(m);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ModuleError::Invalid(
            v.iter().take(4).map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        ))
    }
}

// ---------------------------------------------------------------------------
// structural operations

pub fn shift(m: &GradedModule, lambda: Weight) -> GradedModule {
    GradedModule {
        algebra: m.algebra,
        weights: m.weights.iter().map(|&w| w + lambda).collect(),
        action: m.action.clone(),
    }
}

pub fn support(m: &GradedModule) -> BTreeSet<Weight> {
    m.weights.iter().copied().collect()
}

/// Split by total degree; the summand of degree d keeps the basis vectors of that degree in order.
pub fn degree_decompose(m: &GradedModule) -> BTreeMap<i64, GradedModule> {
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (j, w) in m.weights.iter().enumerate() {
        groups.entry(w.degree()).or_default().push(j);
    }
    groups
        .into_iter()
        .map(|(d, idx)| {
            let sub = GradedModule {
                algebra: m.algebra,
                weights: idx.iter().map(|&j| m.weights[j]).collect(),
                action: m.action.iter().map(|g| g.submatrix(&idx, &idx)).collect(),
            };
            (d, sub)
        })
        .collect()
}

/// The contravariant dual m^o: E acts by F^T, F by E^T, H by H^T.
pub fn contravariant_dual(m: &GradedModule) -> Result<GradedModule, ModuleError> {
    if !m.algebra.is_sl2() {
        return Err(ModuleError::Unsupported("contravariant duality needs sl2r1".into()));
    }
    Ok(GradedModule {
        algebra: m.algebra,
        weights: m.weights.clone(),
        action: vec![
            m.action[1].transpose(),
            m.action[0].transpose(),
            m.action[2].transpose(),
        ],
    })
}

/// Twist by the Weyl group element: coordinates swap, E and F trade places, H changes sign.
pub fn weyl_twist(m: &GradedModule) -> Result<GradedModule, ModuleError> {
    if !m.algebra.is_sl2() {
        return Err(ModuleError::Unsupported("Weyl twist needs sl2r1".into()));
    }
    Ok(GradedModule {
        algebra: m.algebra,
        weights: m.weights.iter().map(|w| w.swap()).collect(),
        action: vec![m.action[1].clone(), m.action[0].clone(), m.action[2].neg()],
    })
}

pub fn direct_sum(parts: &[&GradedModule]) -> Result<GradedModule, ModuleError> {
    let Some(first) = parts.first() else {
        return Err(ModuleError::Shape("empty direct sum needs an algebra".into()));
    };
    let alg = first.algebra;
    for m in parts {
        if m.algebra != alg {
            return Err(ModuleError::AlgebraMismatch(alg, m.algebra));
        }
    }
    let p = alg.p();
    let weights = parts.iter().flat_map(|m| m.weights.iter().copied()).collect();
    let action = (0..alg.num_generators())
        .map(|g| {
            let blocks: Vec<&Matrix> = parts.iter().map(|m| &m.action[g]).collect();
            Matrix::block_diag(p, &blocks)
        })
        .collect();
    Ok(GradedModule {
        algebra: alg,
        weights,
        action,
    })
}

/// Restrict to the span of the given homogeneous, linearly independent vectors.
///
/// Returns the submodule in the given basis order and the inclusion matrix.
pub fn restrict(m: &GradedModule, basis: &[Vec<u32>]) -> Result<(GradedModule, Matrix), ModuleError> {
    let p = m.p();
    let n = m.dim();
    let k = basis.len();
    let mut weights = Vec::with_capacity(k);
    for v in basis {
        match m.vector_weight(v)? {
            Some(w) => weights.push(w),
            None => return Err(ModuleError::Shape("zero vector in basis".into())),
        }
    }
    let b = Matrix::from_cols(p, n, basis);
    let li = LeftInverse::new(&b).ok_or_else(|| ModuleError::Shape("basis is linearly dependent".into()))?;
    let mut action = Vec::with_capacity(m.action.len());
    for g in &m.action {
        let gb = g.mul(&b);
        let a = li.apply(&gb);
        if b.mul(&a) != gb {
            return Err(ModuleError::NotSubmodule);
        }
        action.push(a);
    }
    Ok((
        GradedModule {
            algebra: m.algebra,
            weights,
            action,
        },
        b,
    ))
}

/// Solves `B x = y` for `y` in the column space of a full-column-rank `B`.
pub(crate) struct LeftInverse {
    rows: Vec<usize>,
    inv: Matrix,
}

impl LeftInverse {
    pub(crate) fn new(b: &Matrix) -> Option<Self> {
        let k = b.cols();
        if k == 0 {
            return Some(LeftInverse {
                rows: Vec::new(),
                inv: Matrix::zeros(b.p(), 0, 0),
            });
        }
        let r = gf::rref(&b.transpose());
        if r.rank < k {
            return None;
        }
        let rows = r.pivots.clone();
        let inv = b.select_rows(&rows).inverse()?;
        Some(LeftInverse { rows, inv })
    }

    pub(crate) fn apply(&self, y: &Matrix) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(y.p(), 0, y.cols());
        }
        self.inv.mul(&y.select_rows(&self.rows))
    }
}

/// Smallest homogeneous submodule containing the given weight vectors.
pub fn submodule_span(m: &GradedModule, generators: &[Vec<u32>]) -> Result<(GradedModule, Matrix), ModuleError> {
    for g in generators {
        if g.len() != m.dim() {
            return Err(ModuleError::Shape("generator has the wrong length".into()));
        }
        m.vector_weight(g)?;
    }
    let basis = span_closure(m, generators.to_vec());
    restrict(m, &basis)
}

/// Closure of homogeneous vectors under the generators; basis sorted by weight.
pub(crate) fn span_closure(m: &GradedModule, seeds: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let f = m.field();
    let n = m.dim();
    let mut spaces: BTreeMap<Weight, EchelonSpace> = BTreeMap::new();
    let mut queue = seeds;
    while let Some(v) = queue.pop() {
        let Ok(Some(w)) = m.vector_weight(&v) else {
            continue;
        };
        let sp = spaces.entry(w).or_insert_with(|| EchelonSpace::new(f, n));
        if sp.insert(&v) {
            for g in &m.action {
                let gv = g.mul_vec(&v);
                if gv.iter().any(|&x| x != 0) {
                    queue.push(gv);
                }
            }
        }
    }
    spaces.into_values().flat_map(|s| s.basis().to_vec()).collect()
}

/// Homogeneous basis of the subspace spanned by the columns of `sub`, sorted by weight.
fn homogeneous_basis(m: &GradedModule, sub: &Matrix) -> Result<Vec<Vec<u32>>, ModuleError> {
    let f = m.field();
    let mut spaces: BTreeMap<Weight, EchelonSpace> = BTreeMap::new();
    for c in sub.to_cols() {
        if let Some(w) = m.vector_weight(&c)? {
            spaces
                .entry(w)
                .or_insert_with(|| EchelonSpace::new(f, m.dim()))
                .insert(&c);
        }
    }
    Ok(spaces.into_values().flat_map(|s| s.basis().to_vec()).collect())
}

/// Quotient by the submodule spanned by the (homogeneous) columns of `sub`.
///
/// The quotient basis is a set of standard basis vectors of `m`, ordered by
/// weight and then by index. Returns the quotient and the projection matrix.
pub fn quotient(m: &GradedModule, sub: &Matrix) -> Result<(GradedModule, Matrix), ModuleError> {
    quotient_with_lift(m, sub).map(|(q, proj, _)| (q, proj))
}

/// As [`quotient`], also returning the section sending each quotient basis
/// vector to the standard basis vector it came from.
pub fn quotient_with_lift(m: &GradedModule, sub: &Matrix) -> Result<(GradedModule, Matrix, Matrix), ModuleError> {
    let f = m.field();
    let n = m.dim();
    let p = m.p();
    let basis = homogeneous_basis(m, sub)?;
    let mut space = EchelonSpace::new(f, n);
    for v in &basis {
        space.insert(v);
    }
    for v in &basis {
        for g in &m.action {
            if !space.contains(&g.mul_vec(v)) {
                return Err(ModuleError::NotSubmodule);
            }
        }
    }
    let mut comp = space.non_pivots();
    comp.sort_by_key(|&j| (m.weights[j], j));
    let k = comp.len();
    let mut proj = Matrix::zeros(p, k, n);
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        let r = space.reduce(&e);
        for (qi, &c) in comp.iter().enumerate() {
            proj.set(qi, j, r[c]);
        }
    }
    let lift = Matrix::from_fn(p, n, k, |i, j| i64::from(comp[j] == i));
    let action = m.action.iter().map(|g| proj.mul(&g.mul(&lift))).collect();
    let weights = comp.iter().map(|&j| m.weights[j]).collect();
    Ok((
        GradedModule {
            algebra: m.algebra,
            weights,
            action,
        },
        proj,
        lift,
    ))
}

/// Kernel of a weight-preserving map out of `m`, with its inclusion.
pub fn kernel(m: &GradedModule, map: &Matrix) -> Result<(GradedModule, Matrix), ModuleError> {
    let n = m.dim();
    let mut basis = Vec::new();
    for idx in m.weight_index().into_values() {
        let ker = gf::kernel_basis(&map.select_cols(&idx));
        for c in ker.to_cols() {
            let mut v = vec![0u32; n];
            for (t, &j) in idx.iter().enumerate() {
                v[j] = c[t];
            }
            basis.push(v);
        }
    }
    restrict(m, &basis)
}

/// Image of a weight-preserving map `m -> target`, as a submodule of `target`.
pub fn image(target: &GradedModule, map: &Matrix) -> Result<(GradedModule, Matrix), ModuleError> {
    let basis = homogeneous_basis(target, &gf::column_space(map))?;
    restrict(target, &basis)
}

/// Standard dual of a Borel module: weights negate and each X_i acts by its transpose.
pub fn borel_dual(m: &GradedModule) -> Result<GradedModule, ModuleError> {
    if m.algebra.is_sl2() {
        return Err(ModuleError::Unsupported("borel_dual needs a Borel module".into()));
    }
    Ok(GradedModule {
        algebra: m.algebra,
        weights: m.weights.iter().map(|&w| -w).collect(),
        action: m.action.iter().map(|x| x.transpose()).collect(),
    })
}

// ---------------------------------------------------------------------------
// the radical of the algebra

/// Homogeneous basis of the Jacobson radical of U_0(sl2), as combinations of
/// PBW monomials f^i h^j e^k, computed as the joint annihilator of the simples.
struct Sl2Radical {
    elements: Vec<RadicalElement>,
}

struct RadicalElement {
    degree: Weight,
    terms: Vec<((usize, usize, usize), u32)>,
}

fn sl2_radical(p: u32) -> Arc<Sl2Radical> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Sl2Radical>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&p) {
        return r.clone();
    }
    let r = Arc::new(compute_sl2_radical(p));
    cache.lock().unwrap().insert(p, r.clone());
    r
}

fn compute_sl2_radical(p: u32) -> Sl2Radical {
    let pu = p as usize;
    let simples: Vec<[Matrix; 3]> = (0..pu).map(|r| weyl_matrices(p, r as i64)).collect();
    let mono = |s: &[Matrix; 3], i: usize, j: usize, k: usize| {
        s[1].pow(i as u64).mul(&s[2].pow(j as u64)).mul(&s[0].pow(k as u64))
    };
    let total: usize = (1..=pu).map(|d| d * d).sum();
    let mut elements = Vec::new();
    for deg in -(pu as i64 - 1)..=(pu as i64 - 1) {
        let monos: Vec<(usize, usize, usize)> = (0..pu)
            .flat_map(|i| (0..pu).flat_map(move |j| (0..pu).map(move |k| (i, j, k))))
            .filter(|&(i, _, k)| k as i64 - i as i64 == deg)
            .collect();
        let mut a = Matrix::zeros(p, total, monos.len());
        for (c, &(i, j, k)) in monos.iter().enumerate() {
            let mut row = 0;
            for s in &simples {
                let mm = mono(s, i, j, k);
                for x in 0..mm.rows() {
                    for y in 0..mm.cols() {
                        a.set(row, c, mm.get(x, y));
                        row += 1;
                    }
                }
            }
        }
        let ker = gf::kernel_basis(&a);
        for col in ker.to_cols() {
            let terms = col
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(c, &x)| (monos[c], x))
                .collect();
            elements.push(RadicalElement {
                degree: deg * Weight::ALPHA,
                terms,
            });
        }
    }
    Sl2Radical { elements }
}

/// Matrices (E, F, H) of the Weyl module of highest weight d in the basis v_0..v_d.
pub(crate) fn weyl_matrices(p: u32, d: i64) -> [Matrix; 3] {
    let n = (d + 1) as usize;
    let e = Matrix::from_fn(p, n, n, |i, j| if i == j + 1 { i as i64 } else { 0 });
    let f = Matrix::from_fn(p, n, n, |i, j| if j == i + 1 { d - j as i64 + 1 } else { 0 });
    let h = Matrix::from_fn(p, n, n, |i, j| if i == j { 2 * i as i64 - d } else { 0 });
    [e, f, h]
}

/// Matrices by which a homogeneous basis of the algebra radical acts, with their degrees.
fn radical_operators(alg: AlgebraKind, action: &[Matrix]) -> Vec<(Weight, Matrix)> {
    match alg {
        AlgebraKind::Borel { .. } => alg
            .generator_degrees()
            .into_iter()
            .zip(action.iter().cloned())
            .collect(),
        AlgebraKind::Sl2 { p } => {
            let pu = p as usize;
            let n = action[0].rows();
            let pw = |m: &Matrix| {
                let mut v = vec![Matrix::identity(p, n)];
                for _ in 1..pu {
                    let last = v.last().unwrap().mul(m);
                    v.push(last);
                }
                v
            };
            let (ep, fp, hp) = (pw(&action[0]), pw(&action[1]), pw(&action[2]));
            let mut cache: HashMap<(usize, usize, usize), Matrix> = HashMap::new();
            let rad = sl2_radical(p);
            rad.elements
                .iter()
                .map(|el| {
                    let mut acc = Matrix::zeros(p, n, n);
                    for &((i, j, k), c) in &el.terms {
                        let mm = cache.entry((i, j, k)).or_insert_with(|| fp[i].mul(&hp[j]).mul(&ep[k]));
                        acc = acc.add_scaled(mm, c);
                    }
                    (el.degree, acc)
                })
                .filter(|(_, m)| !m.is_zero())
                .collect()
        }
    }
}

/// Socle: the vectors killed by the radical of the algebra.
pub fn socle(m: &GradedModule) -> (GradedModule, Matrix) {
    let ops = radical_operators(m.algebra, &m.action);
    let p = m.p();
    let n = m.dim();
    let mut basis = Vec::new();
    for (_, idx) in m.weight_index() {
        let blocks: Vec<Matrix> = ops.iter().map(|(_, op)| op.select_cols(&idx)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let stacked = Matrix::vstack(p, idx.len(), &refs);
        let ker = gf::kernel_basis(&stacked);
        for c in ker.to_cols() {
            let mut v = vec![0u32; n];
            for (t, &j) in idx.iter().enumerate() {
                v[j] = c[t];
            }
            basis.push(v);
        }
    }
    restrict(m, &basis).expect("socle is a submodule")
}

/// Radical J(A)·m.
pub fn radical(m: &GradedModule) -> (GradedModule, Matrix) {
    let ops = radical_operators(m.algebra, &m.action);
    let f = m.field();
    let n = m.dim();
    let mut spaces: BTreeMap<Weight, EchelonSpace> = BTreeMap::new();
    for (_, op) in &ops {
        for j in 0..n {
            let v = op.col(j);
            if let Ok(Some(w)) = m.vector_weight(&v) {
                spaces.entry(w).or_insert_with(|| EchelonSpace::new(f, n)).insert(&v);
            }
        }
    }
    let basis: Vec<Vec<u32>> = spaces.into_values().flat_map(|s| s.basis().to_vec()).collect();
    restrict(m, &basis).expect("radical is a submodule")
}

/// Top m / rad(m) with its projection.
pub fn top(m: &GradedModule) -> (GradedModule, Matrix) {
    let (_, inc) = radical(m);
    quotient(m, &inc).expect("radical is a submodule")
}

/// Radical of an ungraded module, as a column-space basis.
pub fn radical_ungraded(m: &UngradedModule) -> Matrix {
    let ops = radical_operators(m.algebra, &m.action);
    let n = m.dim();
    let refs: Vec<&Matrix> = ops.iter().map(|(_, op)| op).collect();
    if refs.is_empty() {
        return Matrix::zeros(m.algebra.p(), n, 0);
    }
    gf::column_space(&Matrix::hstack(m.algebra.p(), n, &refs))
}

// ---------------------------------------------------------------------------
// Hom spaces

/// Basis of the degree-0 homomorphisms `m -> n`, each a `dim n x dim m` matrix.
pub fn hom_space(m: &GradedModule, n: &GradedModule) -> Vec<Matrix> {
    if m.algebra != n.algebra || m.is_zero() || n.is_zero() {
        return Vec::new();
    }
    let mi = m.weight_index();
    let ni = n.weight_index();
    let mut var = HashMap::new();
    let mut vars = Vec::new();
    for (w, ms) in &mi {
        if let Some(ns) = ni.get(w) {
            for &i in ns {
                for &j in ms {
                    var.insert((i, j), vars.len());
                    vars.push((i, j));
                }
            }
        }
    }
    if vars.is_empty() {
        return Vec::new();
    }
    let degs = m.algebra.generator_degrees();
    let empty = Vec::new();
    let eqs = hom_equations(
        m.p(),
        &m.action,
        &n.action,
        vars.len(),
        |gi, j| ni.get(&(m.weights[j] + degs[gi])).unwrap_or(&empty).clone(),
        |i, j| var.get(&(i, j)).copied(),
    );
    finish_hom(m.p(), n.dim(), m.dim(), &vars, &eqs)
}

/// Basis of all module homomorphisms between the underlying ungraded modules.
pub fn hom_space_ungraded(m: &UngradedModule, n: &UngradedModule) -> Vec<Matrix> {
    if m.algebra != n.algebra || m.dim() == 0 || n.dim() == 0 {
        return Vec::new();
    }
    let (dm, dn) = (m.dim(), n.dim());
    let vars: Vec<(usize, usize)> = (0..dn).flat_map(|i| (0..dm).map(move |j| (i, j))).collect();
    let all_rows: Vec<usize> = (0..dn).collect();
    let eqs = hom_equations(
        m.algebra.p(),
        &m.action,
        &n.action,
        vars.len(),
        |_, _| all_rows.clone(),
        |i, j| Some(i * dm + j),
    );
    finish_hom(m.algebra.p(), dn, dm, &vars, &eqs)
}

/// Equations g_n φ - φ g_m = 0, one per (generator, target row, source column).
fn hom_equations(
    p: u32,
    gm: &[Matrix],
    gn: &[Matrix],
    nvars: usize,
    rows_for: impl Fn(usize, usize) -> Vec<usize>,
    var: impl Fn(usize, usize) -> Option<usize>,
) -> Matrix {
    let f = PrimeField::new(p).unwrap();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let dm = gm.first().map_or(0, |x| x.rows());
    let dn = gn.first().map_or(0, |x| x.rows());
    for (gi, (a, b)) in gm.iter().zip(gn).enumerate() {
        for j in 0..dm {
            for i in rows_for(gi, j) {
                let mut row = vec![0u32; nvars];
                let mut any = false;
                for k in 0..dn {
                    let c = b.get(i, k);
                    if c != 0 {
                        if let Some(v) = var(k, j) {
                            row[v] = f.add(row[v], c);
                            any = true;
                        }
                    }
                }
                for l in 0..dm {
                    let c = a.get(l, j);
                    if c != 0 {
                        if let Some(v) = var(i, l) {
                            row[v] = f.sub(row[v], c);
                            any = true;
                        }
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(p, 0, nvars);
    }
    let r = rows.len();
    let mut m = Matrix::zeros(p, r, nvars);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 {
                m.set(i, j, x);
            }
        }
    }
    m
}

fn finish_hom(p: u32, rows: usize, cols: usize, vars: &[(usize, usize)], eqs: &Matrix) -> Vec<Matrix> {
    let ker = if eqs.rows() == 0 {
        Matrix::identity(p, vars.len())
    } else {
        gf::kernel_basis(eqs)
    };
    ker.to_cols()
        .into_iter()
        .map(|c| {
            let mut phi = Matrix::zeros(p, rows, cols);
            for (t, &(i, j)) in vars.iter().enumerate() {
                if c[t] != 0 {
                    phi.set(i, j, c[t]);
                }
            }
            phi
        })
        .collect()
}

// ---------------------------------------------------------------------------
// isomorphism and decomposition

fn combine(basis: &[Matrix], coeffs: &[u32]) -> Matrix {
    let mut acc = Matrix::zeros(basis[0].p(), basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add_scaled(b, c);
        }
    }
    acc
}

/// Invertibility of a weight-preserving map, tested block by block.
fn graded_invertible(phi: &Matrix, src: &BTreeMap<Weight, Vec<usize>>, tgt: &BTreeMap<Weight, Vec<usize>>) -> bool {
    if !phi.is_square() {
        return false;
    }
    src.iter().all(|(w, cols)| match tgt.get(w) {
        Some(rows) if rows.len() == cols.len() => phi.submatrix(rows, cols).is_invertible(),
        _ => false,
    })
}

pub fn is_isomorphic(m: &GradedModule, n: &GradedModule) -> Option<Matrix> {
    is_isomorphic_seeded(m, n, 0)
}

/// An isomorphism `m -> n`, or `None` when none exists.
///
/// Small Hom spaces (at most p^4 coefficient tuples) are searched exhaustively.
/// Otherwise 64 seeded random combinations are tried, and a refusal is then
/// certified structurally: for indecomposable `m` the non-isomorphisms form a
/// proper subspace, so testing a basis suffices; otherwise both sides are
/// decomposed and matched summand by summand.
pub fn is_isomorphic_seeded(m: &GradedModule, n: &GradedModule, seed: u64) -> Option<Matrix> {
    if m.algebra != n.algebra || m.dim() != n.dim() || m.weight_multiset() != n.weight_multiset() {
        return None;
    }
    if m.is_zero() {
        return Some(Matrix::zeros(m.p(), 0, 0));
    }
    let basis = hom_space(m, n);
    if basis.is_empty() {
        return None;
    }
    let (si, ti) = (m.weight_index(), n.weight_index());
    let p = m.p();
    let k = basis.len();
    if k <= 4 {
        let total = (p as u64).pow(k as u32);
        for code in 1..total {
            let mut c = code;
            let coeffs: Vec<u32> = (0..k)
                .map(|_| {
                    let x = (c % p as u64) as u32;
                    c /= p as u64;
                    x
                })
                .collect();
            let phi = combine(&basis, &coeffs);
            if graded_invertible(&phi, &si, &ti) {
                return Some(phi);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let phi = combine(&basis, &coeffs);
        if graded_invertible(&phi, &si, &ti) {
            return Some(phi);
        }
    }
    let parts_m = decompose(m).ok()?;
    if parts_m.len() == 1 {
        return basis.into_iter().find(|b| graded_invertible(b, &si, &ti));
    }
    let parts_n = decompose(n).ok()?;
    if parts_m.len() != parts_n.len() {
        return None;
    }
    let mut used = vec![false; parts_n.len()];
    let mut iso = Matrix::zeros(p, n.dim(), m.dim());
    for sm in &parts_m {
        let mut found = false;
        for (t, sn) in parts_n.iter().enumerate() {
            if used[t] {
                continue;
            }
            if let Some(phi) = is_isomorphic_seeded(&sm.module, &sn.module, seed) {
                iso = iso.add(&sn.inclusion.mul(&phi).mul(&sm.projection));
                used[t] = true;
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(iso)
}

/// An indecomposable direct summand with its inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GradedModule,
    pub inclusion: Matrix,
    pub projection: Matrix,
}

/// Bases of two complementary submodules.
type Splitting = (Vec<Vec<u32>>, Vec<Vec<u32>>);

/// Endomorphism basis split into block-diagonal form, with Fitting helpers.
struct Fitting<'a> {
    m: &'a GradedModule,
    blocks: Vec<Vec<usize>>,
}

impl<'a> Fitting<'a> {
    fn new(m: &'a GradedModule) -> Self {
        Fitting {
            m,
            blocks: m.weight_index().into_values().collect(),
        }
    }

    /// Generalized kernel and image of φ, as homogeneous vectors.
    fn split(&self, phi: &Matrix) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let n = self.m.dim();
        let mut ker = Vec::new();
        let mut im = Vec::new();
        for idx in &self.blocks {
            let b = phi.submatrix(idx, idx).pow(idx.len() as u64);
            let lift = |c: Vec<u32>| {
                let mut v = vec![0u32; n];
                for (t, &j) in idx.iter().enumerate() {
                    v[j] = c[t];
                }
                v
            };
            ker.extend(gf::kernel_basis(&b).to_cols().into_iter().map(lift));
            im.extend(gf::column_space(&b).to_cols().into_iter().map(lift));
        }
        (ker, im)
    }

    fn generalized_kernel_dim(&self, phi: &Matrix) -> usize {
        self.blocks
            .iter()
            .map(|idx| {
                let b = phi.submatrix(idx, idx);
                idx.len() - b.pow(idx.len() as u64).rank()
            })
            .sum()
    }

    /// Try ψ - c for every c; return a proper Fitting splitting if one exists.
    fn try_split(&self, psi: &Matrix) -> Option<Splitting> {
        let n = self.m.dim();
        let p = self.m.p();
        let id = Matrix::identity(p, n);
        for c in 0..p {
            let phi = psi.sub(&id.scale(c));
            let g = self.generalized_kernel_dim(&phi);
            if g > 0 && g < n {
                return Some(self.split(&phi));
            }
        }
        None
    }

    /// The eigenvalue c with ψ - c nilpotent, if any.
    fn single_eigenvalue(&self, psi: &Matrix) -> Option<u32> {
        let n = self.m.dim();
        let p = self.m.p();
        let id = Matrix::identity(p, n);
        (0..p).find(|&c| self.generalized_kernel_dim(&psi.sub(&id.scale(c))) == n)
    }
}

pub(crate) fn flatten(m: &Matrix) -> Vec<u32> {
    m.to_rows().concat()
}

enum LocalCheck {
    Local,
    Witness(Vec<Matrix>),
}

/// Certify that End(m) = k·1 ⊕ N with N a nilpotent ideal, or return elements to split with.
fn certify_local(fit: &Fitting, end: &[Matrix]) -> Result<LocalCheck, ModuleError> {
    let m = fit.m;
    let n = m.dim();
    let p = m.p();
    let f = m.field();
    let id = Matrix::identity(p, n);
    let mut nil = Vec::new();
    for psi in end {
        let c = fit.single_eigenvalue(psi).ok_or_else(|| {
            ModuleError::Decomposition("endomorphism without an F_p eigenvalue; End/rad is not F_p".into())
        })?;
        let nu = psi.sub(&id.scale(c));
        if !nu.is_zero() {
            nil.push(nu);
        }
    }
    let mut space = EchelonSpace::new(f, n * n);
    let mut nbasis = Vec::new();
    for nu in &nil {
        if space.insert(&flatten(nu)) {
            nbasis.push(nu.clone());
        }
    }
    let mut witnesses = Vec::new();
    for a in &nbasis {
        for b in &nbasis {
            let prod = a.mul(b);
            if !space.contains(&flatten(&prod)) {
                witnesses.push(prod);
            }
        }
    }
    if !witnesses.is_empty() {
        return Ok(LocalCheck::Witness(witnesses));
    }
    let mut power = nbasis.clone();
    let mut last_dim = power.len();
    while !power.is_empty() {
        let mut next = EchelonSpace::new(f, n * n);
        let mut nb = Vec::new();
        for x in &power {
            for y in &nbasis {
                let prod = x.mul(y);
                if next.insert(&flatten(&prod)) {
                    nb.push(prod);
                }
            }
        }
        if nb.len() >= last_dim {
            return Ok(LocalCheck::Witness(nb));
        }
        last_dim = nb.len();
        power = nb;
    }
    Ok(LocalCheck::Local)
}

/// A spanning set of rad End(m) for a module with local endomorphism ring.
pub fn endomorphism_radical(m: &GradedModule) -> Result<Vec<Matrix>, ModuleError> {
    let end = hom_space(m, m);
    let fit = Fitting::new(m);
    match certify_local(&fit, &end)? {
        LocalCheck::Local => {}
        LocalCheck::Witness(_) => return Err(ModuleError::Decomposition("endomorphism ring is not local".into())),
    }
    let id = Matrix::identity(m.p(), m.dim());
    let f = m.field();
    let mut space = EchelonSpace::new(f, m.dim() * m.dim());
    let mut out = Vec::new();
    for psi in &end {
        let c = fit.single_eigenvalue(psi).expect("certified local");
        let nu = psi.sub(&id.scale(c));
        if space.insert(&flatten(&nu)) {
            out.push(nu);
        }
    }
    Ok(out)
}

/// Fitting decomposition into indecomposable summands.
pub fn decompose(m: &GradedModule) -> Result<Vec<Summand>, ModuleError> {
    decompose_seeded(m, 0)
}

pub fn decompose_seeded(m: &GradedModule, seed: u64) -> Result<Vec<Summand>, ModuleError> {
    let p = m.p();
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces: Vec<(GradedModule, Matrix)> = Vec::new();
    let mut stack = vec![(m.clone(), Matrix::identity(p, n))];
    while let Some((mm, inc)) = stack.pop() {
        match split_module(&mm, &mut rng)? {
            Some((a, b)) => {
                let (ma, ia) = restrict(&mm, &a)?;
                let (mb, ib) = restrict(&mm, &b)?;
                stack.push((mb, inc.mul(&ib)));
                stack.push((ma, inc.mul(&ia)));
            }
            None => pieces.push((mm, inc)),
        }
    }
    let incs: Vec<&Matrix> = pieces.iter().map(|(_, i)| i).collect();
    let c = Matrix::hstack(p, n, &incs);
    let cinv = c
        .inverse()
        .ok_or_else(|| ModuleError::Decomposition("summands do not span".into()))?;
    let mut off = 0;
    let mut out = Vec::new();
    for (module, inclusion) in pieces {
        let k = module.dim();
        let rows: Vec<usize> = (off..off + k).collect();
        let projection = cinv.select_rows(&rows);
        off += k;
        out.push(Summand {
            module,
            inclusion,
            projection,
        });
    }
    Ok(out)
}

fn split_module(m: &GradedModule, rng: &mut ChaCha8Rng) -> Result<Option<Splitting>, ModuleError> {
    let end = hom_space(m, m);
    if end.len() <= 1 {
        return Ok(None);
    }
    let fit = Fitting::new(m);
    for psi in &end {
        if let Some(s) = fit.try_split(psi) {
            return Ok(Some(s));
        }
    }
    let p = m.p();
    for _ in 0..8 {
        let coeffs: Vec<u32> = (0..end.len()).map(|_| rng.gen_range(0..p)).collect();
        if let Some(s) = fit.try_split(&combine(&end, &coeffs)) {
            return Ok(Some(s));
        }
    }
    for _ in 0..4 {
        match certify_local(&fit, &end)? {
            LocalCheck::Local => return Ok(None),
            LocalCheck::Witness(ws) => {
                for w in &ws {
                    if let Some(s) = fit.try_split(w) {
                        return Ok(Some(s));
                    }
                }
                for _ in 0..16 {
                    let coeffs: Vec<u32> = (0..ws.len()).map(|_| rng.gen_range(0..p)).collect();
                    if let Some(s) = fit.try_split(&combine(&ws, &coeffs)) {
                        return Ok(Some(s));
                    }
                }
            }
        }
    }
    Err(ModuleError::Decomposition(
        "endomorphism ring neither splits nor certifies as local".into(),
    ))
}

/// Indecomposable summands grouped into isomorphism classes with multiplicities.
pub fn decompose_grouped(m: &GradedModule) -> Result<Vec<(GradedModule, usize)>, ModuleError> {
    let mut out: Vec<(GradedModule, usize)> = Vec::new();
    for s in decompose(m)? {
        match out.iter_mut().find(|(r, _)| is_isomorphic(r, &s.module).is_some()) {
            Some(entry) => entry.1 += 1,
            None => out.push((s.module, 1)),
        }
    }
    Ok(out)
}

pub fn is_indecomposable(m: &GradedModule) -> bool {
    matches!(decompose(m), Ok(v) if v.len() == 1)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    kind: String,
    p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lo: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    algebra: AlgebraJson,
    dim: usize,
    weights: Vec<Weight>,
    action: BTreeMap<String, Vec<Vec<i64>>>,
}

impl From<&GradedModule> for ModuleJson {
    fn from(m: &GradedModule) -> Self {
        let algebra = match m.algebra {
            AlgebraKind::Sl2 { p } => AlgebraJson {
                kind: "sl2r1".into(),
                p,
                r: None,
                lo: None,
            },
            AlgebraKind::Borel { p, lo, hi } => AlgebraJson {
                kind: "borel".into(),
                p,
                r: Some(hi),
                lo: (lo != 1).then_some(lo),
            },
        };
        let action = m
            .algebra
            .generator_names()
            .into_iter()
            .zip(&m.action)
            .map(|(name, g)| {
                let rows = g
                    .to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(i64::from).collect())
                    .collect();
                (name, rows)
            })
            .collect();
        ModuleJson {
            algebra,
            dim: m.dim(),
            weights: m.weights.clone(),
            action,
        }
    }
}

impl ModuleJson {
    fn into_module(self) -> Result<GradedModule, ModuleError> {
        let p = self.algebra.p;
        PrimeField::new(p).map_err(|e| ModuleError::Json(e.to_string()))?;
        let algebra = match self.algebra.kind.as_str() {
            "sl2r1" => AlgebraKind::Sl2 { p },
            "borel" => {
                let hi = self
                    .algebra
                    .r
                    .ok_or_else(|| ModuleError::Json("borel algebra needs r".into()))?;
                let lo = self.algebra.lo.unwrap_or(1);
                if lo == 0 || lo > hi {
                    return Err(ModuleError::Json("bad variable range".into()));
                }
                AlgebraKind::Borel { p, lo, hi }
            }
            k => return Err(ModuleError::Json(format!("unknown algebra kind {k:?}"))),
        };
        if self.weights.len() != self.dim {
            return Err(ModuleError::Json("weights length differs from dim".into()));
        }
        let mut action = Vec::new();
        for name in algebra.generator_names() {
            let rows = self
                .action
                .get(&name)
                .ok_or_else(|| ModuleError::Json(format!("missing generator {name}")))?;
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(ModuleError::Json(format!("generator {name} is not {0}x{0}", self.dim)));
            }
            action.push(if self.dim == 0 {
                Matrix::zeros(p, 0, 0)
            } else {
                Matrix::from_rows(p, rows)
            });
        }
        if self.action.len() != algebra.num_generators() {
            return Err(ModuleError::Json("unexpected generator names".into()));
        }
        let m = GradedModule::new(algebra, self.weights, action)?;
        ensure_valid(&m)?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(p: u32) -> GradedModule {
        GradedModule::new(
            AlgebraKind::sl2(p),
            vec![Weight::ZERO],
            vec![Matrix::zeros(p, 1, 1), Matrix::zeros(p, 1, 1), Matrix::zeros(p, 1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn zero_module_is_valid() {
        assert!(validate(&GradedModule::zero(AlgebraKind::sl2(3))).is_empty());
    }

    #[test]
    fn radical_dimension_matches_simples() {
        for p in [3u32, 5] {
            let r = sl2_radical(p);
            let simple_dims: usize = (1..=p as usize).map(|d| d * d).sum();
            assert_eq!(r.elements.len(), (p * p * p) as usize - simple_dims);
        }
    }

    #[test]
    fn hom_between_trivials() {
        let t = trivial(3);
        assert_eq!(hom_space(&t, &t).len(), 1);
        assert!(hom_space(&t, &shift(&t, Weight::new(3, 0))).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let t = trivial(5);
        let s = t.to_json();
        assert_eq!(GradedModule::from_json(&s).unwrap(), t);
        assert_eq!(GradedModule::from_json(&s).unwrap().to_json(), s);
    }
}
