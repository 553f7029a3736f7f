//! Auslander-Reiten quivers: bounded exploration of components of graded
//! modules, wings, polynomial parts, the quiver of a block of polynomial
//! modules of fixed degree, and matching against ZA_n / tau^m.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{split_degree, ConstructionError, Family, FamilyLabel};
use crate::grmod::{
    contravariant_dual, decompose_seeded, hom_space, is_isomorphic_seeded, quotient, radical, shift, socle,
    AlgebraKind, GradedModule, ModuleError, Weight,
};
use crate::homological::{almost_split_sequence, is_projective, tau_inv, HomologicalError};
use crate::polynomial::{almost_split_in_poly, ext_injective_in_poly, ext_projective_in_poly, pd_in_poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("outside the explored patch: {0}")]
    Patch(String),
}

type Result<T> = std::result::Result<T, QuiverError>;

// ---------------------------------------------------------------------------
// identification

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    Named(FamilyLabel),
    Opaque(u32),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Named(l) => write!(f, "{l}"),
            VertexLabel::Opaque(k) => write!(f, "X{k}"),
        }
    }
}

/// Matches modules against the named families, caching unshifted bases.
pub struct Identifier {
    p: u32,
    seed: u64,
    bases: HashMap<(Family, i64), Option<GradedModule>>,
}

fn lex_min(ws: &[Weight]) -> Weight {
    *ws.iter().min().expect("nonzero module")
}

fn lex_max(ws: &[Weight]) -> Weight {
    *ws.iter().max().expect("nonzero module")
}

impl Identifier {
    pub fn new(p: u32, seed: u64) -> Self {
        Identifier {
            p,
            seed,
            bases: HashMap::new(),
        }
    }

    fn base(&mut self, family: Family, d: i64) -> Option<GradedModule> {
        let p = self.p;
        self.bases
            .entry((family, d))
            .or_insert_with(|| FamilyLabel::new(family, d, Weight::ZERO).build(p).ok())
            .clone()
    }

    fn candidates(&self, n: usize) -> Vec<(Family, i64)> {
        let p = self.p as i64;
        let n = n as i64;
        let mut out = Vec::new();
        if n <= p {
            out.push((Family::L, n - 1));
        }
        let d = n - 1;
        if d >= p && d % p != p - 1 {
            out.push((Family::V, d));
            out.push((Family::Vo, d));
        }
        if n % p == 0 && n >= p {
            for a in 0..=p - 2 {
                out.push((Family::W, n + a));
                out.push((Family::Ww0, n + a));
            }
        }
        if n == 2 * p {
            for a in 0..=p - 2 {
                out.push((Family::Q, a));
            }
        }
        out
    }

    /// The canonical family label of `m`, certified by an isomorphism.
    pub fn identify(&mut self, m: &GradedModule) -> Option<FamilyLabel> {
        if m.is_zero() {
            return None;
        }
        let ws = m.weight_multiset();
        match m.algebra() {
            AlgebraKind::Sl2 { .. } => {
                for (family, d) in self.candidates(m.dim()) {
                    let Some(b) = self.base(family, d) else {
                        continue;
                    };
                    if b.dim() != m.dim() {
                        continue;
                    }
                    let lambda = lex_min(&ws) - lex_min(b.weights());
                    if (lambda.a - lambda.b).rem_euclid(self.p as i64) != 0 {
                        continue;
                    }
                    let moved = shift(&b, lambda);
                    if moved.weight_multiset() != ws {
                        continue;
                    }
                    if is_isomorphic_seeded(m, &moved, self.seed).is_some() {
                        return Some(FamilyLabel::new(family, d, lambda));
                    }
                }
                None
            }
            AlgebraKind::Borel { p, lo, hi } => {
                if lo != 1 {
                    return None;
                }
                let r = hi;
                let lambda = lex_max(&ws);
                let label = if m.dim() == 1 {
                    FamilyLabel::borel(Family::K, lambda, r)
                } else if m.dim() == (p as usize).pow(r) {
                    FamilyLabel::borel(Family::Z, lambda, r)
                } else {
                    return None;
                };
                let b = label.build(p).ok()?;
                is_isomorphic_seeded(m, &b, self.seed).map(|_| label)
            }
        }
    }
}

pub fn identify(m: &GradedModule) -> Option<FamilyLabel> {
    Identifier::new(m.p(), 0).identify(m)
}

// ---------------------------------------------------------------------------
// quivers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    /// all graded modules; projective means projective over the algebra
    Graded,
    /// polynomial modules of one degree; projective means Ext-projective there
    Polynomial,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub label: VertexLabel,
    pub module: GradedModule,
    pub polynomial: bool,
    pub projective: bool,
    pub injective: bool,
    pub simple: bool,
}

#[derive(Clone, Debug)]
pub struct ArQuiver {
    pub p: u32,
    pub category: Category,
    pub vertices: Vec<Vertex>,
    pub arrows: BTreeMap<(usize, usize), usize>,
    pub tau: BTreeMap<usize, usize>,
    pub ql: BTreeMap<usize, i64>,
    /// middle summands (with repetition) of the computed sequence ending at each key
    pub meshes: BTreeMap<usize, Vec<usize>>,
    pub arrow_conflicts: Vec<String>,
}

impl ArQuiver {
    fn empty(p: u32, category: Category) -> Self {
        ArQuiver {
            p,
            category,
            vertices: Vec::new(),
            arrows: BTreeMap::new(),
            tau: BTreeMap::new(),
            ql: BTreeMap::new(),
            meshes: BTreeMap::new(),
            arrow_conflicts: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.values().sum()
    }

    pub fn label(&self, i: usize) -> String {
        self.vertices[i].label.to_string()
    }

    pub fn find(&self, label: &FamilyLabel) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == VertexLabel::Named(*label))
    }

    pub fn find_str(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label.to_string() == label)
    }

    /// Vertex isomorphic to `m`, if any.
    pub fn locate(&self, m: &GradedModule) -> Option<usize> {
        if let Some(l) = identify(m) {
            return self.find(&l);
        }
        self.vertices
            .iter()
            .position(|v| matches!(v.label, VertexLabel::Opaque(_)) && is_isomorphic_seeded(&v.module, m, 0).is_some())
    }

    pub fn tau_inverse_of(&self, v: usize) -> Option<usize> {
        self.tau.iter().find(|(_, &t)| t == v).map(|(&u, _)| u)
    }

    pub fn successors(&self, v: usize) -> Vec<usize> {
        self.arrows.keys().filter(|(x, _)| *x == v).map(|&(_, y)| y).collect()
    }

    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        self.arrows.keys().filter(|(_, y)| *y == v).map(|&(x, _)| x).collect()
    }

    /// At every vertex with a computed sequence, arrows into v and out of τv must agree.
    pub fn mesh_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &v in self.meshes.keys() {
            let Some(&t) = self.tau.get(&v) else { continue };
            let mut into: Vec<usize> = Vec::new();
            let mut from: Vec<usize> = Vec::new();
            for (&(x, y), &k) in &self.arrows {
                if y == v {
                    into.extend(std::iter::repeat_n(x, k));
                }
                if x == t {
                    from.extend(std::iter::repeat_n(y, k));
                }
            }
            into.sort_unstable();
            from.sort_unstable();
            if into != from {
                out.push(format!("mesh at {} does not close", self.label(v)));
            }
        }
        out
    }

    /// All vertices share one degree.
    pub fn degree_constant(&self) -> bool {
        let ds: BTreeSet<Option<i64>> = self.vertices.iter().map(|v| v.module.degree()).collect();
        ds.len() <= 1 && !ds.contains(&None)
    }

    /// Induced subquiver on `keep`, reindexed in label order.
    pub fn subquiver(&self, keep: &BTreeSet<usize>) -> ArQuiver {
        let mut order: Vec<usize> = keep.iter().copied().collect();
        order.sort_by_key(|&i| self.vertices[i].label);
        let map: HashMap<usize, usize> = order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut q = ArQuiver::empty(self.p, self.category);
        q.vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        for (&(x, y), &k) in &self.arrows {
            if let (Some(&a), Some(&b)) = (map.get(&x), map.get(&y)) {
                q.arrows.insert((a, b), k);
            }
        }
        for (&v, &t) in &self.tau {
            if let (Some(&a), Some(&b)) = (map.get(&v), map.get(&t)) {
                q.tau.insert(a, b);
            }
        }
        for (&v, &l) in &self.ql {
            if let Some(&a) = map.get(&v) {
                q.ql.insert(a, l);
            }
        }
        for (&v, mids) in &self.meshes {
            if let Some(&a) = map.get(&v) {
                if mids.iter().all(|m| map.contains_key(m)) && self.tau.get(&v).is_some_and(|t| map.contains_key(t)) {
                    q.meshes.insert(a, mids.iter().map(|m| map[m]).collect());
                }
            }
        }
        q
    }

    fn canonicalize(&self) -> ArQuiver {
        let all: BTreeSet<usize> = (0..self.len()).collect();
        let mut q = self.subquiver(&all);
        q.arrow_conflicts = self.arrow_conflicts.clone();
        q
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            p: self.p,
            category: self.category,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| VertexJson {
                    label: v.label.to_string(),
                    dim: v.module.dim(),
                    degree: v.module.degree(),
                    polynomial: v.polynomial,
                    projective: v.projective,
                    injective: v.injective,
                    simple: v.simple,
                    ql: self.ql.get(&i).copied(),
                })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|(&(x, y), &k)| ArrowJson {
                    source: self.label(x),
                    target: self.label(y),
                    multiplicity: k,
                })
                .collect(),
            tau: self
                .tau
                .iter()
                .map(|(&v, &t)| TauJson {
                    vertex: self.label(v),
                    translate: self.label(t),
                })
                .collect(),
        }
    }

    /// DOT text; `header` lines are emitted as comments.
    pub fn to_dot(&self, header: &str) -> String {
        let mut s = String::new();
        for line in header.lines() {
            s.push_str(&format!("// {line}\n"));
        }
        s.push_str("digraph ar {\n");
        for v in &self.vertices {
            let mut attrs = Vec::new();
            if v.simple {
                attrs.push("shape=box".to_string());
            }
            if v.projective {
                attrs.push("peripheries=2".to_string());
            }
            if v.injective {
                attrs.push("style=bold".to_string());
            }
            if v.polynomial {
                attrs.push("color=blue".to_string());
            }
            let a = if attrs.is_empty() {
                String::new()
            } else {
                format!(" [{}]", attrs.join(", "))
            };
            s.push_str(&format!("  \"{}\"{a};\n", v.label));
        }
        for (&(x, y), &k) in &self.arrows {
            let a = if k > 1 {
                format!(" [label=\"{k}\"]")
            } else {
                String::new()
            };
            s.push_str(&format!("  \"{}\" -> \"{}\"{a};\n", self.label(x), self.label(y)));
        }
        for (&v, &t) in &self.tau {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [style=dashed, constraint=false];\n",
                self.label(v),
                self.label(t)
            ));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize)]
pub struct QuiverJson {
    pub p: u32,
    pub category: Category,
    pub vertices: Vec<VertexJson>,
    pub arrows: Vec<ArrowJson>,
    pub tau: Vec<TauJson>,
}

#[derive(Serialize)]
pub struct VertexJson {
    pub label: String,
    pub dim: usize,
    pub degree: Option<i64>,
    pub polynomial: bool,
    pub projective: bool,
    pub injective: bool,
    pub simple: bool,
    pub ql: Option<i64>,
}

#[derive(Serialize)]
pub struct ArrowJson {
    pub source: String,
    pub target: String,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct TauJson {
    pub vertex: String,
    pub translate: String,
}

struct Builder {
    q: ArQuiver,
    ident: Identifier,
    by_label: HashMap<FamilyLabel, usize>,
    opaque: Vec<usize>,
    seed: u64,
}

impl Builder {
    fn new(p: u32, category: Category, seed: u64) -> Self {
        Builder {
            q: ArQuiver::empty(p, category),
            ident: Identifier::new(p, seed),
            by_label: HashMap::new(),
            opaque: Vec::new(),
            seed,
        }
    }

    fn intern(&mut self, m: &GradedModule) -> Result<(usize, bool)> {
        let label = match self.ident.identify(m) {
            Some(l) => {
                if let Some(&i) = self.by_label.get(&l) {
                    return Ok((i, false));
                }
                VertexLabel::Named(l)
            }
            None => {
                for &i in &self.opaque {
                    if is_isomorphic_seeded(&self.q.vertices[i].module, m, self.seed).is_some() {
                        return Ok((i, false));
                    }
                }
                VertexLabel::Opaque(self.opaque.len() as u32)
            }
        };
        let (projective, injective) = match self.q.category {
            Category::Graded => {
                let pr = is_projective(m)?;
                (pr, pr)
            }
            Category::Polynomial => (ext_projective_in_poly(m)?, ext_injective_in_poly(m)?),
        };
        let idx = self.q.vertices.len();
        self.q.vertices.push(Vertex {
            label,
            module: m.clone(),
            polynomial: m.weights().iter().all(|w| w.is_polynomial()),
            projective,
            injective,
            simple: socle(m).0.dim() == m.dim(),
        });
        match label {
            VertexLabel::Named(l) => {
                self.by_label.insert(l, idx);
            }
            VertexLabel::Opaque(_) => self.opaque.push(idx),
        }
        Ok((idx, true))
    }

    fn add_arrow(&mut self, x: usize, y: usize, k: usize) {
        let e = self.q.arrows.entry((x, y)).or_insert(0);
        if *e != 0 && *e != k {
            let msg = format!(
                "arrow {} -> {} has multiplicity {} and {}",
                self.q.vertices[x].label, self.q.vertices[y].label, *e, k
            );
            self.q.arrow_conflicts.push(msg);
        }
        *e = (*e).max(k);
    }

    /// Interns the summands of `m` with multiplicities.
    fn summands(&mut self, m: &GradedModule) -> Result<Vec<(usize, usize)>> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for s in decompose_seeded(m, self.seed)? {
            let (i, _) = self.intern(&s.module)?;
            match out.iter_mut().find(|(j, _)| *j == i) {
                Some(e) => e.1 += 1,
                None => out.push((i, 1)),
            }
        }
        Ok(out)
    }

    fn add_mesh(&mut self, v: usize, t: usize, mids: &[(usize, usize)]) {
        self.q.tau.insert(v, t);
        for &(x, k) in mids {
            self.add_arrow(t, x, k);
            self.add_arrow(x, v, k);
        }
        let flat = mids.iter().flat_map(|&(x, k)| std::iter::repeat_n(x, k)).collect();
        self.q.meshes.insert(v, flat);
    }
}

// ---------------------------------------------------------------------------
// exploration of components of graded modules

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds {
    /// how many τ-steps (in either direction) away from the seed to expand
    pub max_tau: i64,
    /// modules above this dimension are recorded but not expanded
    pub max_dim: usize,
    /// graph distance from the seed beyond which vertices are not expanded
    pub radius: usize,
}

/// Breadth-first patch of the AR component containing `seed`.
pub fn explore_component(seed: &GradedModule, bounds: Bounds, rng_seed: u64) -> Result<ArQuiver> {
    if is_projective(seed)? {
        return Err(QuiverError::Precondition("seed is projective".into()));
    }
    let mut b = Builder::new(seed.p(), Category::Graded, rng_seed);
    let (s, _) = b.intern(seed)?;
    // position in half-steps: arrows advance by 1, τ goes back by 2
    let mut pos: HashMap<usize, i64> = HashMap::from([(s, 0)]);
    let mut queue = VecDeque::from([(s, 0usize)]);
    let mut done = BTreeSet::new();
    while let Some((v, hops)) = queue.pop_front() {
        if !done.insert(v) {
            continue;
        }
        let c = pos[&v];
        let vert = &b.q.vertices[v];
        if vert.projective
            || vert.module.dim() > bounds.max_dim
            || c.abs() > 2 * bounds.max_tau
            || hops >= bounds.radius
        {
            continue;
        }
        let m = vert.module.clone();
        let seq = almost_split_sequence(&m)?;
        let (t, _) = b.intern(&seq.left)?;
        pos.entry(t).or_insert(c - 2);
        let mids = b.summands(&seq.middle)?;
        for &(x, _) in &mids {
            pos.entry(x).or_insert(c - 1);
            queue.push_back((x, hops + 1));
        }
        b.add_mesh(v, t, &mids);
        queue.push_back((t, hops + 1));
        let (u, _) = b.intern(&tau_inv(&m)?)?;
        pos.entry(u).or_insert(c + 2);
        b.q.tau.entry(u).or_insert(v);
        queue.push_back((u, hops + 1));
    }
    let mut q = b.q;
    assign_quasi_lengths(&mut q);
    Ok(q.canonicalize())
}

/// Quasi-simples are the vertices whose outgoing sequence has an indecomposable middle.
fn assign_quasi_lengths(q: &mut ArQuiver) {
    for (&u, mids) in &q.meshes {
        if let Some(&v) = q.tau.get(&u) {
            if mids.len() == 1 && !q.vertices[mids[0]].projective {
                q.ql.insert(v, 1);
                q.ql.insert(u, 1);
            }
        }
    }
    if q.ql.is_empty() {
        return;
    }
    loop {
        let mut changed = false;
        let mut set = |ql: &mut BTreeMap<usize, i64>, v: usize, m: i64| {
            if let std::collections::btree_map::Entry::Vacant(e) = ql.entry(v) {
                e.insert(m);
                changed = true;
            }
        };
        for (&v, mids) in &q.meshes {
            let t = q.tau[&v];
            if let Some(&m) = q.ql.get(&t) {
                set(&mut q.ql, v, m);
            }
            let Some(&m) = q.ql.get(&v) else { continue };
            set(&mut q.ql, t, m);
            match mids.as_slice() {
                [x] if m == 1 => set(&mut q.ql, *x, 2),
                [x, y] if m >= 2 => {
                    for (a, b) in [(*x, *y), (*y, *x)] {
                        match q.ql.get(&a).copied() {
                            Some(k) if k == m - 1 => set(&mut q.ql, b, m + 1),
                            Some(k) if k == m + 1 => set(&mut q.ql, b, m - 1),
                            _ => {}
                        }
                    }
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
}

/// The common weight δ with τ(x) = x[δ] on every τ-pair of named vertices, if there is one.
pub fn tau_shift(q: &ArQuiver) -> Option<Weight> {
    let mut delta = None;
    for (&v, &t) in &q.tau {
        let (VertexLabel::Named(a), VertexLabel::Named(b)) = (q.vertices[v].label, q.vertices[t].label) else {
            return None;
        };
        if a.family != b.family || a.d != b.d {
            return None;
        }
        let d = b.shift - a.shift;
        match delta {
            None => delta = Some(d),
            Some(e) if e != d => return None,
            _ => {}
        }
    }
    delta
}

/// The wing below `v`: v, then the wings of its quasi-length m-1 predecessor C and of τ⁻¹C.
pub fn wing(q: &ArQuiver, v: usize) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    wing_into(q, v, &mut out)?;
    Ok(out)
}

fn wing_into(q: &ArQuiver, v: usize, out: &mut BTreeSet<usize>) -> Result<()> {
    out.insert(v);
    let m = *q
        .ql
        .get(&v)
        .ok_or_else(|| QuiverError::Patch(format!("quasi-length of {} unknown", q.label(v))))?;
    if m == 1 {
        return Ok(());
    }
    let mids = q
        .meshes
        .get(&v)
        .ok_or_else(|| QuiverError::Patch(format!("sequence ending at {} not computed", q.label(v))))?;
    let c1 = *mids
        .iter()
        .find(|x| q.ql.get(x) == Some(&(m - 1)))
        .ok_or_else(|| QuiverError::Patch(format!("no quasi-length {} predecessor of {}", m - 1, q.label(v))))?;
    let c2 = q
        .tau_inverse_of(c1)
        .ok_or_else(|| QuiverError::Patch(format!("τ⁻¹ of {} not explored", q.label(c1))))?;
    wing_into(q, c1, out)?;
    wing_into(q, c2, out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PolyShape {
    Empty,
    Wing { apex: String },
    Paths { from: String, to: String },
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyPart {
    pub vertices: Vec<String>,
    pub connected: bool,
    pub shape: PolyShape,
    #[serde(skip)]
    pub indices: BTreeSet<usize>,
}

fn reach(q: &ArQuiver, start: usize, forward: bool) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        let next = if forward { q.successors(x) } else { q.predecessors(x) };
        for y in next {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

pub fn polynomial_part(q: &ArQuiver) -> PolyPart {
    let set: BTreeSet<usize> = (0..q.len()).filter(|&i| q.vertices[i].polynomial).collect();
    let vertices = set.iter().map(|&i| q.label(i)).collect();
    if set.is_empty() {
        return PolyPart {
            vertices,
            connected: true,
            shape: PolyShape::Empty,
            indices: set,
        };
    }
    let first = *set.iter().next().unwrap();
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(x) = stack.pop() {
        for y in q.successors(x).into_iter().chain(q.predecessors(x)) {
            if set.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    let connected = seen == set;
    let mut shape = PolyShape::Other;
    if set.iter().all(|i| q.ql.contains_key(i)) {
        let top = set.iter().map(|i| q.ql[i]).max().unwrap();
        let apexes: Vec<usize> = set.iter().copied().filter(|i| q.ql[i] == top).collect();
        if let [apex] = apexes.as_slice() {
            if wing(q, *apex).ok().as_ref() == Some(&set) {
                shape = PolyShape::Wing { apex: q.label(*apex) };
            }
        }
    }
    if shape == PolyShape::Other {
        for &v in &set {
            let Ok(dual) = contravariant_dual(&q.vertices[v].module) else {
                continue;
            };
            let Some(w) = q.locate(&dual) else { continue };
            if w == v || !set.contains(&w) {
                continue;
            }
            let between: BTreeSet<usize> = reach(q, v, true).intersection(&reach(q, w, false)).copied().collect();
            if between == set {
                shape = PolyShape::Paths {
                    from: q.label(v),
                    to: q.label(w),
                };
                break;
            }
        }
    }
    PolyPart {
        vertices,
        connected,
        shape,
        indices: set,
    }
}

// ---------------------------------------------------------------------------
// columns and duality

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], x: usize, y: usize) {
    let (a, b) = (find(parent, x), find(parent, y));
    if a != b {
        parent[a.max(b)] = a.min(b);
    }
}

/// Columns: middle terms of one sequence share a column, and sequences sharing a term merge.
pub fn columns(q: &ArQuiver) -> Vec<BTreeSet<usize>> {
    let mut parent: Vec<usize> = (0..q.len()).collect();
    for mids in q.meshes.values() {
        let reg: Vec<usize> = mids.iter().copied().filter(|&x| !q.vertices[x].projective).collect();
        for w in reg.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..q.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert(i);
    }
    groups.into_values().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ColumnReport {
    pub applicable: bool,
    pub axis: Option<String>,
    pub column: Vec<String>,
    pub column_self_dual: bool,
    pub arrows_checked: usize,
    pub reversal_failures: Vec<String>,
    pub passed: bool,
}

pub fn column_symmetry_check(q: &ArQuiver) -> Result<ColumnReport> {
    let mut duals: Vec<Option<usize>> = Vec::with_capacity(q.len());
    for v in &q.vertices {
        duals.push(q.locate(&contravariant_dual(&v.module)?));
    }
    let mut order: Vec<usize> = (0..q.len()).filter(|&i| duals[i] == Some(i)).collect();
    order.sort_by_key(|&i| (!q.vertices[i].simple, q.vertices[i].label));
    let Some(&axis) = order.first() else {
        return Ok(ColumnReport {
            applicable: false,
            axis: None,
            column: Vec::new(),
            column_self_dual: false,
            arrows_checked: 0,
            reversal_failures: Vec::new(),
            passed: true,
        });
    };
    let col = columns(q).into_iter().find(|c| c.contains(&axis)).unwrap();
    let column_self_dual = col.iter().all(|&i| duals[i] == Some(i));
    let mut checked = 0;
    let mut failures = Vec::new();
    for (&(x, y), &k) in &q.arrows {
        let (Some(dx), Some(dy)) = (duals[x], duals[y]) else {
            continue;
        };
        if !q.meshes.contains_key(&y) || !q.meshes.contains_key(&dx) {
            continue;
        }
        checked += 1;
        if q.arrows.get(&(dy, dx)) != Some(&k) {
            failures.push(format!("{} -> {} has no reversed dual arrow", q.label(x), q.label(y)));
        }
    }
    let passed = column_self_dual && failures.is_empty();
    Ok(ColumnReport {
        applicable: true,
        axis: Some(q.label(axis)),
        column: col.iter().map(|&i| q.label(i)).collect(),
        column_self_dual,
        arrows_checked: checked,
        reversal_failures: failures,
        passed,
    })
}

// ---------------------------------------------------------------------------
// polynomial modules of fixed degree

/// Indecomposable polynomial modules of degree d from the named families, in label order.
pub fn polynomial_indecomposables(p: u32, d: i64) -> Result<Vec<(FamilyLabel, GradedModule)>> {
    let pi = p as i64;
    let mut bases: Vec<(Family, i64)> = Vec::new();
    for r in 0..pi.min(d + 1) {
        bases.push((Family::L, r));
    }
    for dd in pi..=d {
        if dd % pi != pi - 1 {
            bases.extend([(Family::V, dd), (Family::Vo, dd), (Family::W, dd), (Family::Ww0, dd)]);
        }
    }
    for a in 0..=pi - 2 {
        bases.push((Family::Q, a));
    }
    let mut out = Vec::new();
    for (family, dd) in bases {
        let base = FamilyLabel::new(family, dd, Weight::ZERO).build(p)?;
        let db = base.degree().expect("family modules are homogeneous");
        let rest = d - db;
        if rest < 0 {
            continue;
        }
        let reach = base.dim() as i64 + pi;
        for x in -reach..=rest + reach {
            let lambda = Weight::new(x, rest - x);
            if (lambda.a - lambda.b).rem_euclid(pi) != 0 {
                continue;
            }
            if base.weights().iter().all(|&w| (w + lambda).is_polynomial()) {
                out.push((FamilyLabel::new(family, dd, lambda), shift(&base, lambda)));
            }
        }
    }
    out.sort_by_key(|(l, _)| *l);
    Ok(out)
}

/// Blocks: connected components of the nonzero-Hom graph.
pub fn link_blocks(mods: &[GradedModule]) -> Vec<Vec<usize>> {
    let n = mods.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if !hom_space(&mods[i], &mods[j]).is_empty() || !hom_space(&mods[j], &mods[i]).is_empty() {
                union(&mut parent, i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockCensus {
    pub p: u32,
    pub d: i64,
    pub indecomposables: usize,
    pub blocks: usize,
    pub non_semisimple: usize,
    pub block_sizes: Vec<usize>,
}

pub fn block_census(p: u32, d: i64) -> Result<BlockCensus> {
    let cands = polynomial_indecomposables(p, d)?;
    let mods: Vec<GradedModule> = cands.into_iter().map(|(_, m)| m).collect();
    let blocks = link_blocks(&mods);
    let non_semisimple = blocks
        .iter()
        .filter(|b| b.iter().any(|&i| socle(&mods[i]).0.dim() != mods[i].dim()))
        .count();
    Ok(BlockCensus {
        p,
        d,
        indecomposables: mods.len(),
        blocks: blocks.len(),
        non_semisimple,
        block_sizes: blocks.iter().map(|b| b.len()).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct SchurBlock {
    pub quiver: ArQuiver,
    pub d: i64,
    pub seed: FamilyLabel,
    /// vertices added because a middle term fell outside the enumerated block
    pub extended: usize,
    /// Ext-projective exactly when the polynomial projective dimension is 0
    pub projectives_consistent: bool,
}

impl SchurBlock {
    pub fn projective_injective(&self) -> BTreeSet<usize> {
        (0..self.quiver.len())
            .filter(|&i| self.quiver.vertices[i].projective && self.quiver.vertices[i].injective)
            .collect()
    }

    /// The quiver with projective-injective vertices deleted.
    pub fn stable_part(&self) -> ArQuiver {
        let pi = self.projective_injective();
        let keep: BTreeSet<usize> = (0..self.quiver.len()).filter(|i| !pi.contains(i)).collect();
        self.quiver.subquiver(&keep)
    }
}

/// AR quiver of the block of degree-d polynomial modules containing `seed_label`.
pub fn schur_block_quiver(p: u32, d: i64, seed_label: &FamilyLabel, rng_seed: u64) -> Result<SchurBlock> {
    let seed = seed_label.build(p)?;
    if !seed.weights().iter().all(|w| w.is_polynomial()) || seed.degree() != Some(d) {
        return Err(QuiverError::Precondition(format!(
            "{seed_label} is not a polynomial module of degree {d}"
        )));
    }
    let cands = polynomial_indecomposables(p, d)?;
    let mods: Vec<GradedModule> = cands.iter().map(|(_, m)| m.clone()).collect();
    let blocks = link_blocks(&mods);
    let home = cands
        .iter()
        .position(|(_, m)| is_isomorphic_seeded(m, &seed, rng_seed).is_some())
        .ok_or_else(|| QuiverError::Precondition(format!("{seed_label} is not among the enumerated modules")))?;
    let block = blocks.into_iter().find(|b| b.contains(&home)).unwrap();

    let mut b = Builder::new(p, Category::Polynomial, rng_seed);
    let mut work = VecDeque::new();
    for &i in &block {
        let (v, _) = b.intern(&mods[i])?;
        work.push_back(v);
    }
    let enumerated = b.q.len();
    let mut done = BTreeSet::new();
    while let Some(v) = work.pop_front() {
        if !done.insert(v) {
            continue;
        }
        let vert = b.q.vertices[v].clone();
        if vert.projective {
            let (rad, _) = radical(&vert.module);
            for (x, k) in b.summands(&rad)? {
                b.add_arrow(x, v, k);
                work.push_back(x);
            }
            if vert.injective {
                let (_, inc) = socle(&vert.module);
                let (top, _) = quotient(&vert.module, &inc)?;
                for (y, k) in b.summands(&top)? {
                    b.add_arrow(v, y, k);
                    work.push_back(y);
                }
            }
            continue;
        }
        let seq = almost_split_in_poly(&vert.module)?;
        let (t, _) = b.intern(&seq.left)?;
        let mids = b.summands(&seq.middle)?;
        b.add_mesh(v, t, &mids);
        work.push_back(t);
        work.extend(mids.iter().map(|&(x, _)| x));
    }
    let extended = b.q.len() - enumerated;
    let mut consistent = true;
    for v in &b.q.vertices {
        let pd0 = pd_in_poly(&v.module, 1)? == Some(0);
        consistent &= pd0 == v.projective;
    }
    Ok(SchurBlock {
        quiver: b.q.canonicalize(),
        d,
        seed: *seed_label,
        extended,
        projectives_consistent: consistent,
    })
}

// ---------------------------------------------------------------------------
// templates

/// ZA_n / τ^m: vertices (k, i) with k mod m and 1 <= i <= n, indexed k*n + (i-1).
#[derive(Clone, Debug)]
pub struct Template {
    pub n: usize,
    pub m: usize,
    pub arrows: BTreeSet<(usize, usize)>,
}

impl Template {
    pub fn new(n: usize, m: usize) -> Self {
        let idx = |k: usize, i: usize| (k % m) * n + (i - 1);
        let mut arrows = BTreeSet::new();
        for k in 0..m {
            for i in 1..n {
                arrows.insert((idx(k, i), idx(k, i + 1)));
                arrows.insert((idx(k, i + 1), idx(k + 1, i)));
            }
        }
        Template { n, m, arrows }
    }

    pub fn len(&self) -> usize {
        self.n * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tau(&self, t: usize) -> usize {
        let (k, i) = (t / self.n, t % self.n);
        ((k + self.m - 1) % self.m) * self.n + i
    }

    fn mult(&self, x: usize, y: usize) -> usize {
        usize::from(self.arrows.contains(&(x, y)))
    }
}

/// A graph isomorphism onto the template commuting with τ wherever the quiver defines τ.
/// Entries are (vertex, k, i).
pub fn template_match(q: &ArQuiver, n: usize, m: usize) -> Option<Vec<(usize, usize, usize)>> {
    let t = Template::new(n, m);
    if q.len() != t.len() || q.arrow_count() != t.arrows.len() {
        return None;
    }
    if q.is_empty() {
        return Some(Vec::new());
    }
    let qdeg = |v: usize| (q.predecessors(v).len(), q.successors(v).len());
    let tdeg = |x: usize| {
        (
            t.arrows.iter().filter(|a| a.1 == x).count(),
            t.arrows.iter().filter(|a| a.0 == x).count(),
        )
    };
    // start at a vertex of minimal degree, then grow along arrows
    let start = (0..q.len()).min_by_key(|&v| (qdeg(v).0 + qdeg(v).1, v)).unwrap();
    let mut order = vec![start];
    let mut seen = BTreeSet::from([start]);
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        let mut nb: Vec<usize> = q.successors(v).into_iter().chain(q.predecessors(v)).collect();
        nb.sort_unstable();
        for y in nb {
            if seen.insert(y) {
                order.push(y);
            }
        }
        i += 1;
    }
    if order.len() != q.len() {
        return None;
    }
    let tinv: BTreeMap<usize, usize> = q.tau.iter().map(|(&v, &u)| (u, v)).collect();
    let mut assign: Vec<Option<usize>> = vec![None; q.len()];
    let mut used = vec![false; t.len()];

    fn fits(
        q: &ArQuiver,
        t: &Template,
        assign: &[Option<usize>],
        tinv: &BTreeMap<usize, usize>,
        v: usize,
        x: usize,
    ) -> bool {
        for (u, a) in assign.iter().enumerate() {
            let Some(y) = *a else { continue };
            if q.arrows.get(&(v, u)).copied().unwrap_or(0) != t.mult(x, y)
                || q.arrows.get(&(u, v)).copied().unwrap_or(0) != t.mult(y, x)
            {
                return false;
            }
        }
        if let Some(&w) = q.tau.get(&v) {
            if let Some(y) = assign[w] {
                if t.tau(x) != y {
                    return false;
                }
            }
        }
        if let Some(&w) = tinv.get(&v) {
            if let Some(y) = assign[w] {
                if t.tau(y) != x {
                    return false;
                }
            }
        }
        true
    }

    // in-degree and out-degree per vertex, for the quiver and for the template
    type DegreePairs = (Vec<(usize, usize)>, Vec<(usize, usize)>);

    #[allow(clippy::too_many_arguments)]
    fn go(
        q: &ArQuiver,
        t: &Template,
        order: &[usize],
        k: usize,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        tinv: &BTreeMap<usize, usize>,
        degs: &DegreePairs,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for x in 0..t.len() {
            if used[x] || degs.0[v] != degs.1[x] || !fits(q, t, assign, tinv, v, x) {
                continue;
            }
            assign[v] = Some(x);
            used[x] = true;
            if go(q, t, order, k + 1, assign, used, tinv, degs) {
                return true;
            }
            assign[v] = None;
            used[x] = false;
        }
        false
    }

    let degs = ((0..q.len()).map(qdeg).collect(), (0..t.len()).map(tdeg).collect());
    if !go(q, &t, &order, 0, &mut assign, &mut used, &tinv, &degs) {
        return None;
    }
    Some(
        assign
            .iter()
            .enumerate()
            .map(|(v, x)| {
                let x = x.unwrap();
                (v, x / n, x % n + 1)
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// shift equivalences between blocks

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub p: u32,
    pub d: i64,
    pub i: i64,
    pub base_vertices: usize,
    pub shifted_vertices: usize,
    pub isomorphic: bool,
    pub dims_preserved: bool,
    pub failures: Vec<String>,
}

/// Compares the block of V(d) with the block of V(d)[(i,i)] in degree d + 2i.
pub fn morita_shift_compare(p: u32, d: i64, i: i64, rng_seed: u64) -> Result<MoritaReport> {
    let (_, a) = split_degree(p, d);
    if i != 0 && !(1 <= i && i <= p as i64 - a - 2) {
        return Err(QuiverError::Precondition(format!(
            "shift {i} outside 1..={} for d = {d}",
            p as i64 - a - 2
        )));
    }
    let lam = Weight::new(i, i);
    let base_label = FamilyLabel::new(Family::V, d, Weight::ZERO);
    let base = schur_block_quiver(p, d, &base_label, rng_seed)?.quiver;
    let moved = schur_block_quiver(p, d + 2 * i, &base_label.shifted(lam), rng_seed)?.quiver;
    let mut failures = Vec::new();
    let mut map = vec![None; base.len()];
    let mut dims = true;
    for (x, v) in base.vertices.iter().enumerate() {
        let target = shift(&v.module, lam);
        match moved.locate(&target) {
            Some(y) => {
                dims &= moved.vertices[y].module.dim() == v.module.dim();
                map[x] = Some(y);
            }
            None => failures.push(format!("{} has no shifted counterpart", v.label)),
        }
    }
    let image: BTreeSet<usize> = map.iter().flatten().copied().collect();
    if image.len() != moved.len() {
        failures.push(format!(
            "{} vertices map onto {} of {}",
            base.len(),
            image.len(),
            moved.len()
        ));
    }
    if failures.is_empty() {
        let pushed: BTreeMap<(usize, usize), usize> = base
            .arrows
            .iter()
            .map(|(&(x, y), &k)| ((map[x].unwrap(), map[y].unwrap()), k))
            .collect();
        if pushed != moved.arrows {
            failures.push("arrows differ under the shift".into());
        }
        let tau: BTreeMap<usize, usize> = base
            .tau
            .iter()
            .map(|(&v, &t)| (map[v].unwrap(), map[t].unwrap()))
            .collect();
        if tau != moved.tau {
            failures.push("τ differs under the shift".into());
        }
    }
    Ok(MoritaReport {
        p,
        d,
        i,
        base_vertices: base.len(),
        shifted_vertices: moved.len(),
        isomorphic: failures.is_empty(),
        dims_preserved: dims,
        failures,
    })
}

// ---------------------------------------------------------------------------
// polynomial part of W-type components

#[derive(Clone, Debug, Serialize)]
pub struct WingScan {
    pub seed: String,
    pub tau_shift: Option<Weight>,
    pub wing: Vec<String>,
    pub polynomial_part: Vec<String>,
    pub outside_wing: Vec<String>,
    pub range: i64,
    pub passed: bool,
}

/// Explore the component of a W-family seed, compare its polynomial part with
/// the wing, and scan τ^i of every explored row representative for |i| <= range.
pub fn wing_scan(p: u32, label: &FamilyLabel, range: i64, rng_seed: u64) -> Result<WingScan> {
    let s = label
        .quasi_length(p)
        .ok_or_else(|| QuiverError::Precondition(format!("{label} is not in a W family")))?;
    let m = label.build(p)?;
    let bounds = Bounds {
        max_tau: s + 1,
        max_dim: ((s + 2) * p as i64) as usize,
        radius: 4 * (s as usize + 3),
    };
    let q = explore_component(&m, bounds, rng_seed)?;
    let seed_idx = q.find(label).expect("seed is a vertex");
    let delta = tau_shift(&q);
    let w = wing(&q, seed_idx)?;
    let poly = polynomial_part(&q);
    let mut outside = Vec::new();
    if let Some(delta) = delta {
        for (x, v) in q.vertices.iter().enumerate() {
            if q.ql.get(&x).is_none_or(|&l| l > s + 2) {
                continue;
            }
            let VertexLabel::Named(l) = v.label else {
                continue;
            };
            for k in -range..=range {
                let moved = k * delta;
                if v.module.weights().iter().all(|&u| (u + moved).is_polynomial()) {
                    let ok = q.find(&l.shifted(moved)).is_some_and(|y| w.contains(&y));
                    if !ok {
                        outside.push(l.shifted(moved).to_string());
                    }
                }
            }
        }
    }
    outside.sort();
    outside.dedup();
    let passed = delta.is_some() && poly.indices == w && outside.is_empty() && w.len() as i64 == s * (s + 1) / 2;
    Ok(WingScan {
        seed: label.to_string(),
        tau_shift: delta,
        wing: w.iter().map(|&i| q.label(i)).collect(),
        polynomial_part: poly.vertices,
        outside_wing: outside,
        range,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_counts() {
        let t = Template::new(3, 3);
        assert_eq!(t.len(), 9);
        assert_eq!(t.arrows.len(), 12);
        let t1 = Template::new(1, 1);
        assert_eq!(t1.len(), 1);
        assert!(t1.arrows.is_empty());
        assert_eq!(t1.tau(0), 0);
    }

    #[test]
    fn identifies_families() {
        let mut id = Identifier::new(3, 0);
        let l = FamilyLabel::new(Family::W, 4, Weight::new(3, 0));
        assert_eq!(id.identify(&l.build(3).unwrap()), Some(l));
        let v = FamilyLabel::new(Family::Vo, 6, Weight::new(1, 1));
        assert_eq!(id.identify(&v.build(3).unwrap()), Some(v));
    }
}
