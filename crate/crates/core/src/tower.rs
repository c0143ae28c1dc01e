//! Graded centralizers `L_j(t)`, fixed representatives of each level, the
//! freezing lookup, the centralizer property and the subring `Z`.
//!
//! Representatives are canonical: for a pattern `(i_1, ..., i_w)` and a value
//! `c`, the fixed tuple is the lexicographically least one when every entry is
//! written in coordinates of the echelon basis of its centralizer and field
//! elements are compared by encoding.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{Elem, Field};
use crate::frobenius::{FrobeniusAction, GradedDecomposition, Homogeneous};
use crate::lie::{LieRing, Nilpotency};
use crate::linalg::{self, Matrix, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("{what}: more than {budget} steps")]
    Budget { what: &'static str, budget: usize },
    #[error("entry {pos} has index 0")]
    ZeroIndex { pos: usize },
    #[error("indices sum to 0 mod n; theta needs a nonzero target index")]
    ZeroSum,
    #[error("indices sum to {sum} mod n, expected 0")]
    NonzeroSum { sum: u64 },
    #[error("entry {pos} is not in component {index}")]
    NotHomogeneous { pos: usize, index: u64 },
    #[error("entry {pos} is not a centralizer of level {level}")]
    NotCentralizer { pos: usize, level: usize },
    #[error("cannot freeze at level {s} below entry level {min}")]
    LevelTooHigh { s: usize, min: usize },
    #[error("level {0} was not built")]
    NoLevel(usize),
    #[error("weight {weight} is outside the built range 2..={cap}")]
    Weight { weight: usize, cap: usize },
    #[error("pattern {pattern:?} with this value is absent from the level {level} table")]
    Missing { pattern: Vec<u64>, level: usize },
}

/// `y -> [y, x_1, ..., x_k]` on `L_j`, with values in `L_0`.
#[derive(Debug, Clone)]
pub struct ThetaMap {
    pub j: u64,
    /// Row `b` is the image of the `b`-th echelon basis vector of `L_j`.
    pub matrix: Matrix,
    pub kernel: Subspace,
    pub codim: usize,
}

pub fn theta_map(ring: &LieRing, d: &GradedDecomposition, x: &[Homogeneous]) -> Result<ThetaMap, TowerError> {
    let f = &**ring.field();
    let n = d.n();
    check_homogeneous(f, d, x)?;
    let sum = x.iter().map(|h| h.index).sum::<u64>() % n;
    if sum == 0 {
        return Err(TowerError::ZeroSum);
    }
    let j = (n - sum) % n;
    let lj = d.component(j);
    let rows: Vec<Vector> = lj
        .basis()
        .iter()
        .map(|y| {
            let mut acc = y.clone();
            for h in x {
                acc = ring.bracket(&acc, &h.vector);
            }
            acc
        })
        .collect();
    let matrix = Matrix::from_rows(ring.dim(), &rows);
    let coeffs = matrix.left_kernel(f);
    let kernel = combine(f, ring.dim(), lj.basis(), coeffs.basis());
    let codim = lj.dim() - kernel.dim();
    assert!(codim <= d.component(0).dim(), "theta image leaves L_0");
    Ok(ThetaMap {
        j,
        matrix,
        kernel,
        codim,
    })
}

fn check_homogeneous(f: &Field, d: &GradedDecomposition, x: &[Homogeneous]) -> Result<(), TowerError> {
    for (pos, h) in x.iter().enumerate() {
        if h.index % d.n() == 0 {
            return Err(TowerError::ZeroIndex { pos });
        }
        if !d.component(h.index).contains(f, &h.vector) {
            return Err(TowerError::NotHomogeneous { pos, index: h.index });
        }
    }
    Ok(())
}

/// `span { sum_b c_b basis_b : c in coeffs }`
fn combine(f: &Field, ambient: usize, basis: &[Vector], coeffs: &[Vector]) -> Subspace {
    let vs: Vec<Vector> = coeffs
        .iter()
        .map(|c| {
            let mut v = linalg::zero_vec(ambient);
            for (b, &x) in basis.iter().zip(c) {
                linalg::axpy(f, &mut v, x, b);
            }
            v
        })
        .collect();
    Subspace::span(f, ambient, &vs)
}

/// Nonzero index sequences of length `2..=max_weight` summing to 0 mod `n`,
/// shortest first, then lexicographic.
pub fn zero_sum_patterns(n: u64, max_weight: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for w in 2..=max_weight {
        let mut cur = vec![1u64; w];
        loop {
            if cur.iter().sum::<u64>() % n == 0 {
                out.push(cur.clone());
            }
            let mut done = true;
            for pos in (0..w).rev() {
                if cur[pos] + 1 < n {
                    cur[pos] += 1;
                    done = false;
                    break;
                }
                cur[pos] = 1;
            }
            if done {
                break;
            }
        }
    }
    out
}

/// `(pattern, value) -> fixed entries`
pub type RepTable = BTreeMap<(Vec<u64>, Vector), Vec<Vector>>;

/// Every `(pattern, value)` pair realizable with entry `s` taken from
/// `spaces[pattern[s]]`, each with its canonical representation.
pub fn representation_table(
    ring: &LieRing,
    spaces: &[Subspace],
    patterns: &[Vec<u64>],
    budget: usize,
    exec: Exec,
) -> Result<RepTable, TowerError> {
    let per = exec.map(patterns, |p| realize(ring, spaces, p, budget));
    let mut table = RepTable::new();
    for (p, res) in patterns.iter().zip(per) {
        for (value, entries) in res? {
            table.insert((p.clone(), value), entries);
        }
    }
    Ok(table)
}

fn realize(
    ring: &LieRing,
    spaces: &[Subspace],
    pattern: &[u64],
    budget: usize,
) -> Result<Vec<(Vector, Vec<Vector>)>, TowerError> {
    let f = &**ring.field();
    let d = ring.dim();
    let w = pattern.len();
    let bases: Vec<&[Vector]> = pattern.iter().map(|&i| spaces[i as usize].basis()).collect();
    let mut found: BTreeMap<Vector, Vec<Vector>> = BTreeMap::new();
    found.insert(linalg::zero_vec(d), vec![linalg::zero_vec(d); w]);
    if bases.iter().any(|b| b.is_empty()) {
        return Ok(found.into_iter().collect());
    }
    // The values span a subspace reached on basis tuples; stop once it is covered.
    let mut target = Subspace::zero(d);
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut steps = 0usize;
    let mut pick = vec![0usize; w];
    loop {
        steps += 1;
        if steps > budget {
            return Err(TowerError::Budget {
                what: "basis tuples of a pattern",
                budget,
            });
        }
        let vs: Vec<Vector> = (0..w).map(|s| bases[s][pick[s]].clone()).collect();
        target.insert(f, &ring.left_normed(&vs));
        if !advance(&mut pick, &dims) {
            break;
        }
    }
    let goal = (f.order() as u128).checked_pow(target.dim() as u32).unwrap_or(u128::MAX);
    let last = bases[w - 1];
    let prefix_dims: Vec<usize> = dims[..w - 1].to_vec();
    let m: usize = prefix_dims.iter().sum();
    let size = f.order() as usize;
    let mut prefixes = SparseFirst::new(m, size);
    let mut steps = 0usize;
    while (found.len() as u128) < goal {
        let Some(coords) = prefixes.next() else {
            break;
        };
        steps += 1;
        if steps > budget {
            return Err(TowerError::Budget {
                what: "prefix tuples of a pattern",
                budget,
            });
        }
        let mut prefix = Vec::with_capacity(w - 1);
        let mut off = 0;
        for (s, &ds) in prefix_dims.iter().enumerate() {
            let mut v = linalg::zero_vec(d);
            for k in 0..ds {
                let c = Elem(coords[off + k] as u32);
                if !c.is_zero() {
                    linalg::axpy(f, &mut v, c, &bases[s][k]);
                }
            }
            off += ds;
            prefix.push(v);
        }
        let p = ring.left_normed(&prefix);
        if !linalg::is_zero(&p) {
            let cols: Vec<Vector> = last.iter().map(|b| ring.bracket(&p, b)).collect();
            let span = Subspace::span(f, d, &cols);
            for value in span_elements(f, &span) {
                if found.contains_key(&value) {
                    continue;
                }
                let x = lex_least_solution(f, &cols, &value);
                let mut tail = linalg::zero_vec(d);
                for (b, &c) in last.iter().zip(&x) {
                    linalg::axpy(f, &mut tail, c, b);
                }
                let mut entries = prefix.clone();
                entries.push(tail);
                found.insert(value, entries);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Coordinate vectors over `0..size` ordered by support size, then by support
/// positions, then by the values on the support.
struct SparseFirst {
    m: usize,
    size: usize,
    support: Vec<usize>,
    values: Vec<usize>,
    started: bool,
}

impl SparseFirst {
    fn new(m: usize, size: usize) -> Self {
        SparseFirst {
            m,
            size,
            support: Vec::new(),
            values: Vec::new(),
            started: false,
        }
    }

    fn coords(&self) -> Vec<usize> {
        let mut c = vec![0; self.m];
        for (&pos, &v) in self.support.iter().zip(&self.values) {
            c[pos] = v;
        }
        c
    }

    fn next_support(&mut self) -> bool {
        let k = self.support.len();
        for i in (0..k).rev() {
            if self.support[i] < self.m - k + i {
                self.support[i] += 1;
                for j in i + 1..k {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return true;
            }
        }
        if k == self.m {
            return false;
        }
        self.support = (0..=k).collect();
        true
    }
}

impl Iterator for SparseFirst {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(vec![0; self.m]);
        }
        if self.size < 2 {
            return None;
        }
        for s in (0..self.values.len()).rev() {
            self.values[s] += 1;
            if self.values[s] < self.size {
                return Some(self.coords());
            }
            self.values[s] = 1;
        }
        if !self.next_support() {
            return None;
        }
        self.values = vec![1; self.support.len()];
        Some(self.coords())
    }
}

fn advance(pick: &mut [usize], dims: &[usize]) -> bool {
    for s in (0..pick.len()).rev() {
        pick[s] += 1;
        if pick[s] < dims[s] {
            return true;
        }
        pick[s] = 0;
    }
    false
}

fn odometer(coords: &mut [usize], size: usize) -> bool {
    for s in (0..coords.len()).rev() {
        coords[s] += 1;
        if coords[s] < size {
            return true;
        }
        coords[s] = 0;
    }
    false
}

/// All elements of a subspace.
fn span_elements(f: &Field, s: &Subspace) -> Vec<Vector> {
    let size = f.order() as usize;
    let mut coords = vec![0usize; s.dim()];
    let mut out = Vec::new();
    loop {
        let mut v = linalg::zero_vec(s.ambient());
        for (b, &c) in s.basis().iter().zip(&coords) {
            linalg::axpy(f, &mut v, Elem(c as u32), b);
        }
        out.push(v);
        if !odometer(&mut coords, size) {
            break;
        }
    }
    out
}

/// Least `x` (lexicographically, by encoding) with `sum_k x_k cols_k = value`.
fn lex_least_solution(f: &Field, cols: &[Vector], value: &[Elem]) -> Vec<Elem> {
    let d = value.len();
    let mut suffix = vec![Subspace::zero(d); cols.len() + 1];
    for k in (0..cols.len()).rev() {
        let mut s = suffix[k + 1].clone();
        s.insert(f, &cols[k]);
        suffix[k] = s;
    }
    let mut rem = value.to_vec();
    let mut x = Vec::with_capacity(cols.len());
    for k in 0..cols.len() {
        let a = f
            .elements()
            .find(|&a| {
                let r = linalg::sub(f, &rem, &linalg::scale(f, a, &cols[k]));
                suffix[k + 1].contains(f, &r)
            })
            .expect("value lies in the span");
        rem = linalg::sub(f, &rem, &linalg::scale(f, a, &cols[k]));
        x.push(a);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TowerCaps {
    /// Longest pattern and longest `theta` tuple plus one, in place of `U`.
    pub u_used: usize,
    /// Highest level, in place of `T`.
    pub t_used: usize,
    pub budget: usize,
}

impl Default for TowerCaps {
    fn default() -> Self {
        TowerCaps {
            u_used: 2,
            t_used: 1,
            budget: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    /// `L_j(t)` indexed by `j`; entry 0 is the zero subspace.
    pub centralizers: Vec<Subspace>,
    /// Number of nonvanishing `theta` maps intersected to get each `L_j(t)`.
    pub tuples: Vec<usize>,
    pub table: RepTable,
    /// Nonzero representatives of this level with their `H`-orbits.
    pub representatives: Vec<Homogeneous>,
}

#[derive(Debug, Clone)]
pub struct CentralizerTower {
    action: FrobeniusAction,
    decomposition: GradedDecomposition,
    caps: TowerCaps,
    levels: Vec<Level>,
}

impl CentralizerTower {
    pub fn build(action: &FrobeniusAction, caps: TowerCaps, exec: Exec) -> Result<Self, TowerError> {
        let ring = &**action.ring();
        let f = &**action.field();
        let d = action.eigen_decompose();
        let shape = action.shape();
        let n = shape.n as usize;
        let dim = ring.dim();
        let patterns = zero_sum_patterns(shape.n, caps.u_used);
        let mut levels: Vec<Level> = Vec::new();
        let mut earlier: BTreeSet<(u64, Vector)> = BTreeSet::new();
        for t in 0..=caps.t_used {
            let (centralizers, tuples) = if t == 0 {
                let c = (0..n)
                    .map(|j| if j == 0 { Subspace::zero(dim) } else { d.component(j as u64).clone() })
                    .collect();
                (c, vec![0; n])
            } else {
                let mut spans = vec![Subspace::zero(dim); n];
                for (i, v) in &earlier {
                    spans[*i as usize].insert(f, v);
                }
                let res = exec.map_range(n, |j| {
                    if j == 0 {
                        return Ok((Subspace::zero(dim), 0));
                    }
                    kernel_over_tuples(ring, d.component(j as u64), j as u64, &spans, caps.u_used, caps.budget)
                });
                let mut c = Vec::with_capacity(n);
                let mut k = Vec::with_capacity(n);
                for r in res {
                    let (s, m) = r?;
                    c.push(s);
                    k.push(m);
                }
                (c, k)
            };
            let table = representation_table(ring, &centralizers, &patterns, caps.budget, exec)?;
            let mut reps: BTreeSet<(u64, Vector)> = BTreeSet::new();
            for ((pattern, _), entries) in &table {
                for (&i, v) in pattern.iter().zip(entries) {
                    if linalg::is_zero(v) {
                        continue;
                    }
                    let mut idx = i;
                    let mut w = v.clone();
                    for _ in 0..shape.q {
                        reps.insert((idx, w.clone()));
                        w = action.h().apply(f, &w);
                        idx = idx * shape.r % shape.n;
                    }
                }
            }
            earlier.extend(reps.iter().cloned());
            levels.push(Level {
                centralizers,
                tuples,
                table,
                representatives: reps
                    .into_iter()
                    .map(|(index, vector)| Homogeneous { index, vector })
                    .collect(),
            });
        }
        Ok(CentralizerTower {
            action: action.clone(),
            decomposition: d,
            caps,
            levels,
        })
    }

    pub fn action(&self) -> &FrobeniusAction {
        &self.action
    }

    pub fn decomposition(&self) -> &GradedDecomposition {
        &self.decomposition
    }

    pub fn caps(&self) -> TowerCaps {
        self.caps
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn centralizer(&self, t: usize, j: u64) -> &Subspace {
        &self.levels[t].centralizers[(j % self.decomposition.n()) as usize]
    }

    /// `dim L_j(t)` for `j = 0..n`, per level.
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.levels
            .iter()
            .map(|l| l.centralizers.iter().map(Subspace::dim).collect())
            .collect()
    }

    /// A copy with `L_j(t)` replaced; used to check that the verifiers notice.
    pub fn with_centralizer(&self, t: usize, j: u64, space: Subspace) -> Self {
        let mut out = self.clone();
        let n = self.decomposition.n();
        out.levels[t].centralizers[(j % n) as usize] = space;
        out
    }

    /// Representatives of all levels `< t`, tagged with their level.
    fn representatives_below(&self, t: usize) -> Vec<(usize, Homogeneous)> {
        self.levels[..t]
            .iter()
            .enumerate()
            .flat_map(|(l, lv)| lv.representatives.iter().map(move |r| (l, r.clone())))
            .collect()
    }

    pub fn checks(&self) -> TowerChecks {
        let f = &**self.action.field();
        let shape = self.action.shape();
        let n = shape.n;
        let l0 = self.decomposition.component(0).dim();
        let mut nesting = true;
        let mut h_levels = true;
        let mut h_reps = true;
        let mut codim_bound = true;
        for (t, lv) in self.levels.iter().enumerate() {
            for j in 1..n {
                let cur = &lv.centralizers[j as usize];
                if t > 0 && !cur.is_subspace_of(f, &self.levels[t - 1].centralizers[j as usize]) {
                    nesting = false;
                }
                if cur.image(f, self.action.h()) != lv.centralizers[(shape.r * j % n) as usize] {
                    h_levels = false;
                }
                let codim = self.decomposition.component(j).dim() - cur.dim();
                if codim > lv.tuples[j as usize] * l0 {
                    codim_bound = false;
                }
            }
            let set: BTreeSet<(u64, &Vector)> = lv.representatives.iter().map(|r| (r.index, &r.vector)).collect();
            for r in &lv.representatives {
                let img = self.action.h().apply(f, &r.vector);
                if !set.contains(&(r.index * shape.r % n, &img)) {
                    h_reps = false;
                }
                if !lv.centralizers[r.index as usize].contains(f, &r.vector) {
                    h_reps = false;
                }
            }
        }
        TowerChecks {
            nesting,
            h_stable_levels: h_levels,
            h_stable_representatives: h_reps,
            codim_bound,
            dims: self.dims(),
            tuples: self.levels.iter().map(|l| l.tuples.clone()).collect(),
            representatives: self.levels.iter().map(|l| l.representatives.len()).collect(),
            table_sizes: self.levels.iter().map(|l| l.table.len()).collect(),
        }
    }

    /// Replaces a zero-sum commutator `[y_1(k_1), ..., y_w(k_w)]` by the fixed
    /// commutator of the same pattern and value in representatives of level `s`.
    pub fn freeze(&self, entries: &[(Homogeneous, usize)], s: usize) -> Result<Frozen, TowerError> {
        let f = &**self.action.field();
        let ring = &**self.action.ring();
        let n = self.decomposition.n();
        let w = entries.len();
        if w < 2 || w > self.caps.u_used {
            return Err(TowerError::Weight {
                weight: w,
                cap: self.caps.u_used,
            });
        }
        let hs: Vec<Homogeneous> = entries.iter().map(|(h, _)| h.clone()).collect();
        check_homogeneous(f, &self.decomposition, &hs)?;
        let sum = hs.iter().map(|h| h.index).sum::<u64>() % n;
        if sum != 0 {
            return Err(TowerError::NonzeroSum { sum });
        }
        for (pos, (h, level)) in entries.iter().enumerate() {
            if *level >= self.levels.len() {
                return Err(TowerError::NoLevel(*level));
            }
            if !self.centralizer(*level, h.index).contains(f, &h.vector) {
                return Err(TowerError::NotCentralizer { pos, level: *level });
            }
        }
        let min = entries.iter().map(|(_, l)| *l).min().unwrap();
        if s > min {
            return Err(TowerError::LevelTooHigh { s, min });
        }
        let pattern: Vec<u64> = hs.iter().map(|h| h.index % n).collect();
        let vs: Vec<Vector> = hs.iter().map(|h| h.vector.clone()).collect();
        let value = ring.left_normed(&vs);
        let key = (pattern.clone(), value.clone());
        let fixed = self.levels[s]
            .table
            .get(&key)
            .ok_or(TowerError::Missing { pattern: pattern.clone(), level: s })?;
        assert_eq!(ring.left_normed(fixed), value, "fixed representation changed value");
        Ok(Frozen {
            entries: pattern
                .iter()
                .zip(fixed)
                .map(|(&index, v)| Homogeneous {
                    index,
                    vector: v.clone(),
                })
                .collect(),
            value,
        })
    }

    /// Checks `[y_j(t), x_1, ..., x_k] = 0` for basis vectors of every `L_j(t)`
    /// against tuples of representatives of lower levels with `k <= cap` and
    /// zero index sum, then the same with quasirepresentatives of lower levels
    /// as entries, total weight at most `cap + 1`.
    pub fn verify_centralizer_property(&self, cap: usize) -> CentralizerReport {
        let ring = &**self.action.ring();
        let n = self.decomposition.n();
        let budget = self.caps.budget;
        let mut report = CentralizerReport {
            checked: 0,
            quasi_checked: 0,
            violations: Vec::new(),
            exhaustive: true,
        };
        for t in 1..self.levels.len() {
            let reps = self.representatives_below(t);
            let mut items: Vec<Item> = reps
                .iter()
                .map(|(_, r)| Item {
                    index: r.index,
                    weight: 1,
                    vector: r.vector.clone(),
                })
                .collect();
            let (quasi, complete) = quasirepresentatives(ring, n, &reps, cap, budget);
            if !complete {
                report.exhaustive = false;
            }
            items.extend(quasi);
            for j in 1..n {
                for y in self.levels[t].centralizers[j as usize].basis() {
                    let mut st = Search {
                        ring,
                        n,
                        items: &items,
                        max_weight: cap + 1,
                        budget,
                        report: &mut report,
                        level: t,
                        j,
                        path: Vec::new(),
                    };
                    st.walk(y.clone(), j, 1, false);
                }
            }
        }
        report
    }

    /// `Z = <L_1(T), ..., L_{n-1}(T)>` at the top built level.
    pub fn z_report(&self) -> ZReport {
        let f = &**self.action.field();
        let ring = &**self.action.ring();
        let top = self.levels.last().expect("level 0 always exists");
        let gens: Vec<Vector> = top.centralizers.iter().flat_map(|s| s.basis().iter().cloned()).collect();
        let z = ring.generated_subring(&gens);
        let nilpotency = ring.nilpotency_of(&z);
        ZReport {
            dim: z.dim(),
            codim: z.codim(),
            nilpotency,
            phi_invariant: z.is_invariant(f, self.action.phi()),
            h_invariant: z.is_invariant(f, self.action.h()),
            z,
        }
    }
}

/// Intersection of `ker theta_x` on `L_j` over all tuples `x` of length
/// `1..=max_k` from the given spans with `j + sum = 0`. Multilinearity lets the
/// tuples range over span bases. Returns the kernel and the number of tuples
/// whose map did not vanish.
fn kernel_over_tuples(
    ring: &LieRing,
    lj: &Subspace,
    j: u64,
    spans: &[Subspace],
    max_k: usize,
    budget: usize,
) -> Result<(Subspace, usize), TowerError> {
    let f = &**ring.field();
    let n = spans.len() as u64;
    let kb = lj.basis();
    let m = kb.len();
    if m == 0 || max_k == 0 {
        return Ok((lj.clone(), 0));
    }
    struct Walk<'a> {
        ring: &'a LieRing,
        f: &'a Field,
        spans: &'a [Subspace],
        n: u64,
        max_k: usize,
        budget: usize,
        steps: usize,
        leaves: usize,
        cons: Subspace,
    }
    impl Walk<'_> {
        fn go(&mut self, rows: &[Vector], sum: u64, depth: usize) -> Result<(), TowerError> {
            if depth > 0 && sum % self.n == 0 {
                self.leaves += 1;
                let d = rows[0].len();
                for c in 0..d {
                    let col: Vector = rows.iter().map(|r| r[c]).collect();
                    self.cons.insert(self.f, &col);
                }
            }
            if depth == self.max_k || self.cons.is_full() {
                return Ok(());
            }
            for i in 1..self.n {
                for x in self.spans[i as usize].basis() {
                    self.steps += 1;
                    if self.steps > self.budget {
                        return Err(TowerError::Budget {
                            what: "theta tuples",
                            budget: self.budget,
                        });
                    }
                    let next: Vec<Vector> = rows.iter().map(|r| self.ring.bracket(r, x)).collect();
                    if next.iter().all(|r| linalg::is_zero(r)) {
                        continue;
                    }
                    self.go(&next, sum + i, depth + 1)?;
                }
            }
            Ok(())
        }
    }
    let mut w = Walk {
        ring,
        f,
        spans,
        n,
        max_k,
        budget,
        steps: 0,
        leaves: 0,
        cons: Subspace::zero(m),
    };
    w.go(kb, j, 0)?;
    let coeffs = Matrix::from_rows(m, w.cons.basis()).right_kernel(f);
    Ok((combine(f, ring.dim(), kb, coeffs.basis()), w.leaves))
}

#[derive(Debug, Clone)]
struct Item {
    index: u64,
    weight: usize,
    vector: Vector,
}

/// Nonzero left-normed commutators of weight `2..=cap` in representatives with
/// exactly one entry of the highest level present and the rest strictly lower.
fn quasirepresentatives(
    ring: &LieRing,
    n: u64,
    reps: &[(usize, Homogeneous)],
    cap: usize,
    budget: usize,
) -> (Vec<Item>, bool) {
    let mut out: BTreeSet<(u64, usize, Vector)> = BTreeSet::new();
    let mut steps = 0usize;
    let mut complete = true;
    let top = reps.iter().map(|(l, _)| *l).max();
    let Some(top) = top else {
        return (Vec::new(), true);
    };
    for k in 1..=top {
        let lower: Vec<&Homogeneous> = reps.iter().filter(|(l, _)| *l < k).map(|(_, r)| r).collect();
        let at: Vec<&Homogeneous> = reps.iter().filter(|(l, _)| *l == k).map(|(_, r)| r).collect();
        for w in 2..=cap {
            for pos in 0..w {
                // entries before `pos` and after it come from `lower`
                let mut stack: Vec<(Vector, u64, usize)> = Vec::new();
                let starts: Vec<&Homogeneous> = if pos == 0 { at.clone() } else { lower.clone() };
                for s in starts {
                    stack.push((s.vector.clone(), s.index, 1));
                }
                while let Some((v, idx, len)) = stack.pop() {
                    steps += 1;
                    if steps > budget {
                        complete = false;
                        break;
                    }
                    if len == w {
                        if !linalg::is_zero(&v) {
                            out.insert((idx % n, w, v));
                        }
                        continue;
                    }
                    let pool = if len == pos { &at } else { &lower };
                    for x in pool {
                        let nv = ring.bracket(&v, &x.vector);
                        if !linalg::is_zero(&nv) {
                            stack.push((nv, idx + x.index, len + 1));
                        }
                    }
                }
            }
        }
    }
    let items = out
        .into_iter()
        .map(|(index, weight, vector)| Item { index, weight, vector })
        .collect();
    (items, complete)
}

struct Search<'a> {
    ring: &'a LieRing,
    n: u64,
    items: &'a [Item],
    max_weight: usize,
    budget: usize,
    report: &'a mut CentralizerReport,
    level: usize,
    j: u64,
    path: Vec<usize>,
}

impl Search<'_> {
    fn walk(&mut self, v: Vector, sum: u64, weight: usize, quasi: bool) {
        if !self.path.is_empty() && sum % self.n == 0 {
            if quasi {
                self.report.quasi_checked += 1;
            } else {
                self.report.checked += 1;
            }
            if !linalg::is_zero(&v) {
                self.report.violations.push(CentralizerViolation {
                    level: self.level,
                    j: self.j,
                    quasi,
                    entries: self.path.iter().map(|&i| (self.items[i].index, self.items[i].weight)).collect(),
                });
            }
        }
        for (i, it) in self.items.iter().enumerate() {
            if weight + it.weight > self.max_weight {
                continue;
            }
            if self.report.checked + self.report.quasi_checked > self.budget {
                self.report.exhaustive = false;
                return;
            }
            let nv = self.ring.bracket(&v, &it.vector);
            if linalg::is_zero(&nv) {
                // every extension vanishes too; count the zero-sum ones as passed
                continue;
            }
            self.path.push(i);
            self.walk(nv, sum + it.index, weight + it.weight, quasi || it.weight > 1);
            self.path.pop();
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerChecks {
    pub nesting: bool,
    pub h_stable_levels: bool,
    pub h_stable_representatives: bool,
    pub codim_bound: bool,
    pub dims: Vec<Vec<usize>>,
    pub tuples: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub table_sizes: Vec<usize>,
}

impl TowerChecks {
    pub fn all_pass(&self) -> bool {
        self.nesting && self.h_stable_levels && self.h_stable_representatives && self.codim_bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frozen {
    pub entries: Vec<Homogeneous>,
    pub value: Vector,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerViolation {
    pub level: usize,
    pub j: u64,
    pub quasi: bool,
    /// `(index, weight)` of each entry after the centralizer.
    pub entries: Vec<(u64, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerReport {
    pub checked: usize,
    pub quasi_checked: usize,
    pub violations: Vec<CentralizerViolation>,
    pub exhaustive: bool,
}

impl CentralizerReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ZReport {
    pub z: Subspace,
    pub dim: usize,
    pub codim: usize,
    pub nilpotency: Nilpotency,
    pub phi_invariant: bool,
    pub h_invariant: bool,
}
