//! Named modules: Weyl modules and their duals, the W-submodules, simples,
//! graded projectives of U_0(sl2), Borel projectives and characters.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::gf::Matrix;
use crate::grmod::{
    self, contravariant_dual, hom_space, shift, weyl_matrices, weyl_twist, AlgebraKind, GradedModule, ModuleError,
    Weight,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// V̂(d): basis v_0..v_d, v_i in weight (i, d-i).
pub fn weyl_hat(p: u32, d: i64) -> GradedModule {
    assert!(d >= 0, "weyl_hat needs d >= 0");
    let [e, f, h] = weyl_matrices(p, d);
    let weights = (0..=d).map(|i| Weight::new(i, d - i)).collect();
    GradedModule::new(AlgebraKind::sl2(p), weights, vec![e, f, h]).expect("shapes agree")
}

/// V̂(d)^o.
pub fn weyl_hat_dual(p: u32, d: i64) -> GradedModule {
    contravariant_dual(&weyl_hat(p, d)).expect("sl2 module")
}

/// Split d = sp + a with 0 <= a < p.
pub fn split_degree(p: u32, d: i64) -> (i64, i64) {
    (d.div_euclid(p as i64), d.rem_euclid(p as i64))
}

/// Ŵ(sp+a), the span of v_{a+1}..v_d inside V̂(d).
///
/// This span is not cyclic on v_{a+1} (e.v_{p-1} = 0), so it is built as the
/// coordinate subspace and checked for closure.
pub fn w_hat(p: u32, d: i64) -> Result<GradedModule, ConstructionError> {
    let (s, a) = split_degree(p, d);
    if d < 0 || s < 1 || a > p as i64 - 2 {
        return Err(ConstructionError::Domain(format!(
            "W({d}) needs d = sp+a with s >= 1 and 0 <= a <= p-2 (p = {p})"
        )));
    }
    let v = weyl_hat(p, d);
    let basis: Vec<Vec<u32>> = ((a + 1) as usize..=d as usize)
        .map(|i| {
            let mut e = vec![0u32; v.dim()];
            e[i] = 1;
            e
        })
        .collect();
    // restrict() rejects the span unless it is closed under E, F and H
    let (w, _) = grmod::restrict(&v, &basis)?;
    Ok(w)
}

/// Ŵ(d)^{w0}.
pub fn w_hat_twisted(p: u32, d: i64) -> Result<GradedModule, ConstructionError> {
    Ok(weyl_twist(&w_hat(p, d)?)?)
}

/// L̂(r) = V̂(r) for 0 <= r <= p-1.
pub fn simple_hat(p: u32, r: i64) -> Result<GradedModule, ConstructionError> {
    if !(0..p as i64).contains(&r) {
        return Err(ConstructionError::Domain(format!("L({r}) needs 0 <= r <= {}", p - 1)));
    }
    Ok(weyl_hat(p, r))
}

/// U_0(sl2) ⊗_{k[h]} k_c with generator in weight (c,0).
///
/// Basis f^i e^k ⊗ 1 (index i*p + k) in weight (c,0) + (k-i)(1,-1).
pub fn induced_torus(p: u32, c: i64) -> GradedModule {
    let pu = p as usize;
    let n = pu * pu;
    let idx = |i: usize, k: usize| i * pu + k;
    let mut e = Matrix::zeros(p, n, n);
    let mut f = Matrix::zeros(p, n, n);
    let mut h = Matrix::zeros(p, n, n);
    let fld = AlgebraKind::sl2(p).field();
    let mut weights = Vec::with_capacity(n);
    for i in 0..pu {
        for k in 0..pu {
            let j = idx(i, k);
            weights.push(Weight::new(c, 0) + (k as i64 - i as i64) * Weight::ALPHA);
            if i + 1 < pu {
                f.set(idx(i + 1, k), j, 1);
            }
            if k + 1 < pu {
                e.set(idx(i, k + 1), j, 1);
            }
            if i > 0 {
                let coef = fld.reduce(i as i64 * (c + 2 * k as i64 - i as i64 + 1));
                if coef != 0 {
                    e.set(idx(i - 1, k), j, coef);
                }
            }
            h.set(j, j, fld.reduce(c + 2 * k as i64 - 2 * i as i64));
        }
    }
    GradedModule::new(AlgebraKind::sl2(p), weights, vec![e, f, h]).expect("shapes agree")
}

/// The left regular module, as the sum of the modules induced from the torus characters.
pub fn regular_graded(p: u32) -> GradedModule {
    let parts: Vec<GradedModule> = (0..p as i64).map(|c| induced_torus(p, c)).collect();
    let refs: Vec<&GradedModule> = parts.iter().collect();
    grmod::direct_sum(&refs).expect("same algebra")
}

/// Q̂(a): the indecomposable graded projective with top L̂(a)[(0,0)].
pub fn projective_indec(p: u32, a: i64) -> Result<GradedModule, ConstructionError> {
    if !(0..p as i64).contains(&a) {
        return Err(ConstructionError::Domain(format!("Q({a}) needs 0 <= a <= {}", p - 1)));
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, i64), GradedModule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(p, a)) {
        return Ok(m.clone());
    }
    let simple = simple_hat(p, a)?;
    let induced = induced_torus(p, a);
    let parts = grmod::decompose(&induced)?;
    let found: Vec<_> = parts
        .into_iter()
        .filter(|s| !hom_space(&s.module, &simple).is_empty())
        .collect();
    if found.len() != 1 {
        return Err(ConstructionError::Domain(format!(
            "expected one summand with top L({a}), found {}",
            found.len()
        )));
    }
    let q = found.into_iter().next().unwrap().module;
    let want = if a == p as i64 - 1 { p as usize } else { 2 * p as usize };
    if q.dim() != want {
        return Err(ConstructionError::Domain(format!(
            "Q({a}) has dimension {} not {want}",
            q.dim()
        )));
    }
    cache.lock().unwrap().insert((p, a), q.clone());
    Ok(q)
}

/// Ẑ(λ): the free rank-one module over the truncated polynomial ring, generated in weight λ.
///
/// Basis monomials X^c in order of the mixed-radix index Σ c_i p^(i-lo).
pub fn borel_projective(alg: AlgebraKind, lambda: Weight) -> Result<GradedModule, ConstructionError> {
    let AlgebraKind::Borel { p, lo, hi } = alg else {
        return Err(ConstructionError::Domain(
            "borel_projective needs a Borel algebra".into(),
        ));
    };
    let pu = p as usize;
    let nv = (hi + 1 - lo) as usize;
    let n = pu.pow(nv as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0usize; nv];
        for t in d.iter_mut() {
            *t = x % pu;
            x /= pu;
        }
        d
    };
    let degs = alg.generator_degrees();
    let weights = (0..n)
        .map(|x| {
            let d = digits(x);
            d.iter().zip(&degs).fold(lambda, |w, (&c, &g)| w + (c as i64) * g)
        })
        .collect();
    let action = (0..nv)
        .map(|v| {
            let stride = pu.pow(v as u32);
            Matrix::from_fn(p, n, n, |i, j| i64::from(digits(j)[v] + 1 < pu && i == j + stride))
        })
        .collect();
    Ok(GradedModule::new(alg, weights, action)?)
}

/// The one-dimensional module k_λ.
pub fn borel_character(alg: AlgebraKind, lambda: Weight) -> GradedModule {
    let p = alg.p();
    GradedModule::new(
        alg,
        vec![lambda],
        (0..alg.num_generators()).map(|_| Matrix::zeros(p, 1, 1)).collect(),
    )
    .expect("shapes agree")
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (br, bc) = (b.rows(), b.cols());
    let f = a.field();
    Matrix::from_fn(a.p(), a.rows() * br, a.cols() * bc, |i, j| {
        f.mul(a.get(i / br, j / bc), b.get(i % br, j % bc)) as i64
    })
}

/// Outer tensor product of a module over X_lo..X_h and one over X_{h+1}..X_hi.
pub fn outer_tensor(m: &GradedModule, n: &GradedModule) -> Result<GradedModule, ConstructionError> {
    let (AlgebraKind::Borel { p, lo: l1, hi: h1 }, AlgebraKind::Borel { p: p2, lo: l2, hi: h2 }) =
        (m.algebra(), n.algebra())
    else {
        return Err(ConstructionError::Domain("outer tensor needs Borel modules".into()));
    };
    if p != p2 {
        return Err(ConstructionError::Domain("moduli differ".into()));
    }
    if h1 + 1 != l2 {
        return Err(ConstructionError::Domain(format!(
            "variable ranges X{l1}..X{h1} and X{l2}..X{h2} must be adjacent and disjoint"
        )));
    }
    let alg = AlgebraKind::borel_range(p, l1, h2);
    let (dm, dn) = (m.dim(), n.dim());
    let weights = m
        .weights()
        .iter()
        .flat_map(|&a| n.weights().iter().map(move |&b| a + b))
        .collect();
    let idm = Matrix::identity(p, dm);
    let idn = Matrix::identity(p, dn);
    let mut action: Vec<Matrix> = m.action().iter().map(|x| kron(x, &idn)).collect();
    action.extend(n.action().iter().map(|y| kron(&idm, y)));
    Ok(GradedModule::new(alg, weights, action)?)
}

// ---------------------------------------------------------------------------
// family labels

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    V,
    Vo,
    W,
    Ww0,
    L,
    Q,
    Z,
    K,
}

/// A named module: `family(d) + shift`, or for Z/K the weight λ and rank r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyLabel {
    pub family: Family,
    pub d: i64,
    pub shift: Weight,
    pub r: u32,
}

impl FamilyLabel {
    pub fn new(family: Family, d: i64, shift: Weight) -> Self {
        FamilyLabel { family, d, shift, r: 0 }
    }

    pub fn borel(family: Family, lambda: Weight, r: u32) -> Self {
        FamilyLabel {
            family,
            d: 0,
            shift: lambda,
            r,
        }
    }

    pub fn shifted(self, lambda: Weight) -> Self {
        FamilyLabel {
            shift: self.shift + lambda,
            ..self
        }
    }

    /// ql = s for W(sp+a) and its twist.
    pub fn quasi_length(&self, p: u32) -> Option<i64> {
        match self.family {
            Family::W | Family::Ww0 => Some(split_degree(p, self.d).0),
            _ => None,
        }
    }

    pub fn is_borel(&self) -> bool {
        matches!(self.family, Family::Z | Family::K)
    }

    pub fn build(&self, p: u32) -> Result<GradedModule, ConstructionError> {
        let base = match self.family {
            Family::V => {
                if self.d < 0 {
                    return Err(ConstructionError::Domain("V(d) needs d >= 0".into()));
                }
                weyl_hat(p, self.d)
            }
            Family::Vo => {
                if self.d < 0 {
                    return Err(ConstructionError::Domain("Vo(d) needs d >= 0".into()));
                }
                weyl_hat_dual(p, self.d)
            }
            Family::W => w_hat(p, self.d)?,
            Family::Ww0 => w_hat_twisted(p, self.d)?,
            Family::L => simple_hat(p, self.d)?,
            Family::Q => projective_indec(p, self.d)?,
            Family::Z => {
                if self.r == 0 {
                    return Err(ConstructionError::Domain("Z needs r >= 1".into()));
                }
                return borel_projective(AlgebraKind::borel(p, self.r), self.shift);
            }
            Family::K => {
                if self.r == 0 {
                    return Err(ConstructionError::Domain("K needs r >= 1".into()));
                }
                return Ok(borel_character(AlgebraKind::borel(p, self.r), self.shift));
            }
        };
        let lambda = self.shift;
        if (lambda.a - lambda.b).rem_euclid(p as i64) != 0 {
            return Err(ConstructionError::Domain(format!(
                "shift {lambda} breaks the H-scalar condition: its coordinates must agree mod {p}"
            )));
        }
        Ok(shift(&base, lambda))
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Z | Family::K => {
                let n = if self.family == Family::Z { "Z" } else { "K" };
                return write!(f, "{n}({},{})@r={}", self.shift.a, self.shift.b, self.r);
            }
            Family::V => write!(f, "V({})", self.d)?,
            Family::Vo => write!(f, "Vo({})", self.d)?,
            Family::W => write!(f, "W({})", self.d)?,
            Family::Ww0 => write!(f, "W({})w0", self.d)?,
            Family::L => write!(f, "L({})", self.d)?,
            Family::Q => write!(f, "Q({})", self.d)?,
        }
        if self.shift != Weight::ZERO {
            write!(f, "+{}", self.shift)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("label parse error at position {pos}: {msg}")]
pub struct LabelError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LabelError> {
        Err(LabelError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), LabelError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, LabelError> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        txt.parse().or_else(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn weight(&mut self) -> Result<Weight, LabelError> {
        self.expect(b'(')?;
        let a = self.int()?;
        self.expect(b',')?;
        let b = self.int()?;
        self.expect(b')')?;
        Ok(Weight::new(a, b))
    }
}

impl FromStr for FamilyLabel {
    type Err = LabelError;

    fn from_str(input: &str) -> Result<Self, LabelError> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut c = Cursor {
            s: compact.as_bytes(),
            pos: 0,
        };
        let family = match c.peek() {
            Some(b'V') => {
                c.pos += 1;
                if c.eat(b'o') {
                    Family::Vo
                } else {
                    Family::V
                }
            }
            Some(b'W') => {
                c.pos += 1;
                Family::W
            }
            Some(b'L') => {
                c.pos += 1;
                Family::L
            }
            Some(b'Q') => {
                c.pos += 1;
                Family::Q
            }
            Some(b'Z') => {
                c.pos += 1;
                Family::Z
            }
            Some(b'K') => {
                c.pos += 1;
                Family::K
            }
            _ => return c.err("expected a family name V, Vo, W, L, Q, Z or K"),
        };
        let mut label = if matches!(family, Family::Z | Family::K) {
            let lambda = c.weight()?;
            c.expect(b'@')?;
            c.expect(b'r')?;
            c.expect(b'=')?;
            let r = c.int()?;
            if r < 1 {
                return c.err("r must be positive");
            }
            FamilyLabel::borel(family, lambda, r as u32)
        } else {
            c.expect(b'(')?;
            let d = c.int()?;
            c.expect(b')')?;
            let mut fam = family;
            if fam == Family::W && c.eat(b'w') {
                c.expect(b'0')?;
                fam = Family::Ww0;
            }
            FamilyLabel::new(fam, d, Weight::ZERO)
        };
        while c.eat(b'+') {
            let w = c.weight()?;
            label = label.shifted(w);
        }
        if c.pos != c.s.len() {
            return c.err("unexpected trailing input");
        }
        Ok(label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in [
            "V(7)",
            "Vo(7)+(1,2)",
            "W(6)w0+(0,3)",
            "L(2)",
            "Q(0)",
            "Z(2,0)@r=1",
            "W(6)+(3,-3)",
        ] {
            let l: FamilyLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert_eq!("V(3)+(0,0)".parse::<FamilyLabel>().unwrap().to_string(), "V(3)");
    }

    #[test]
    fn label_errors_carry_positions() {
        let e = "X(3)".parse::<FamilyLabel>().unwrap_err();
        assert_eq!(e.pos, 0);
        let e = "V(3".parse::<FamilyLabel>().unwrap_err();
        assert_eq!(e.pos, 3);
        let e = "W(6)w1".parse::<FamilyLabel>().unwrap_err();
        assert_eq!(e.pos, 5);
    }

    #[test]
    fn induced_module_is_valid() {
        for p in [3, 5] {
            for c in 0..p as i64 {
                assert!(grmod::validate(&induced_torus(p, c)).is_empty());
            }
        }
    }
}
