//! Lie rings given by structure constants.
//!
//! [`StructureTable`] is the unvalidated input form: any `(i, j)` pair may carry
//! an entry, so broken antisymmetry is representable and reportable.
//! [`LieRing`] is the validated form and stores only `i < j`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Elem, Field};
use crate::linalg::{self, zero_vec, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket entry ({i}, {j}) -> {k} is out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("vector of length {got} used in a ring of dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error("structure table violates the Lie axioms ({} violations, first: {})", .0.len(), .0[0])]
    NotLie(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `c_{ij}^k != -c_{ji}^k`
    Antisymmetry { i: usize, j: usize, k: usize },
    /// `c_{ii}^k != 0`
    Diagonal { i: usize, k: usize },
    /// Jacobi sum for the basis triple is nonzero in coordinate `k`.
    Jacobi { i: usize, j: usize, l: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => write!(f, "antisymmetry at ({i}, {j}, {k})"),
            Violation::Diagonal { i, k } => write!(f, "nonzero [b{i}, b{i}] in coordinate {k}"),
            Violation::Jacobi { i, j, l, k } => {
                write!(f, "Jacobi at ({i}, {j}, {l}) in coordinate {k}")
            }
        }
    }
}

/// Structure constants as read from input, before any axiom is checked.
#[derive(Clone, Debug)]
pub struct StructureTable {
    field: Arc<Field>,
    dim: usize,
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Elem>>,
}

impl StructureTable {
    pub fn new(field: Arc<Field>, dim: usize) -> Self {
        StructureTable {
            field,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `c_{ij}^k = c`, overwriting.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Elem) {
        let slot = self.entries.entry((i, j)).or_default();
        if c.is_zero() {
            slot.remove(&k);
        } else {
            slot.insert(k, c);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Elem {
        self.entries
            .get(&(i, j))
            .and_then(|m| m.get(&k))
            .copied()
            .unwrap_or(Elem::ZERO)
    }

    /// Sets `[b_i, b_j] = v` and `[b_j, b_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Elem]) {
        for (k, &c) in v.iter().enumerate() {
            let nc = self.field.neg(c);
            self.set(i, j, k, c);
            self.set(j, i, k, nc);
        }
    }

    /// Nonzero entries `(i, j, k, c)` in index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, Elem)> + '_ {
        self.entries
            .iter()
            .flat_map(|(&(i, j), m)| m.iter().map(move |(&k, &c)| (i, j, k, c)))
    }

    fn check_indices(&self) -> Result<(), LieError> {
        for (i, j, k, _) in self.entries() {
            if i >= self.dim || j >= self.dim || k >= self.dim {
                return Err(LieError::IndexOutOfRange {
                    i,
                    j,
                    k,
                    dim: self.dim,
                });
            }
        }
        Ok(())
    }

    /// Every antisymmetry and Jacobi violation. A structural error is returned
    /// instead when an entry refers to a basis index outside `0..dim`.
    pub fn validate(&self) -> Result<Vec<Violation>, LieError> {
        self.check_indices()?;
        let f = &*self.field;
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, k, _) in self.entries() {
            if i == j {
                if seen.insert((i, i, k)) {
                    out.push(Violation::Diagonal { i, k });
                }
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            if !seen.insert((a, b, k)) {
                continue;
            }
            if self.get(a, b, k) != f.neg(self.get(b, a, k)) {
                out.push(Violation::Antisymmetry { i: a, j: b, k });
            }
        }
        let d = self.dim;
        // dense [b_i, b_j] as given, one-sided entries included
        let mut dense = vec![zero_vec(d); d * d];
        for (i, j, k, c) in self.entries() {
            dense[i * d + j][k] = c;
        }
        let outer = |v: &[Elem], l: usize| -> Vector {
            let mut acc = zero_vec(d);
            for (m, &c) in v.iter().enumerate() {
                linalg::axpy(f, &mut acc, c, &dense[m * d + l]);
            }
            acc
        };
        for i in 0..d {
            for j in i + 1..d {
                for l in j + 1..d {
                    let s1 = outer(&dense[i * d + j], l);
                    let s2 = outer(&dense[j * d + l], i);
                    let s3 = outer(&dense[l * d + i], j);
                    for k in 0..d {
                        if !f.add(f.add(s1[k], s2[k]), s3[k]).is_zero() {
                            out.push(Violation::Jacobi { i, j, l, k });
                        }
                    }
                }
            }
        }
        out.sort_by_key(|v| match *v {
            Violation::Antisymmetry { i, j, k } => (0, i, j, 0, k),
            Violation::Diagonal { i, k } => (1, i, i, 0, k),
            Violation::Jacobi { i, j, l, k } => (2, i, j, l, k),
        });
        Ok(out)
    }

    pub fn into_lie_ring(self) -> Result<LieRing, LieError> {
        let violations = self.validate()?;
        if !violations.is_empty() {
            return Err(LieError::NotLie(violations));
        }
        let mut ring = LieRing::abelian(self.field.clone(), self.dim);
        for (i, j, k, c) in self.entries() {
            if i < j {
                ring.table[i * self.dim + j].push((k, c));
            }
        }
        Ok(ring)
    }
}

/// A simple or nested bracket of vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketExpr {
    Leaf(Vector),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn bracket(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// `[a_1, a_2, ..., a_s] = [...[[a_1, a_2], a_3], ..., a_s]`
    pub fn left_normed(vectors: &[Vector]) -> Self {
        let mut it = vectors.iter().cloned().map(BracketExpr::Leaf);
        let first = it.next().expect("empty commutator");
        it.fold(first, BracketExpr::bracket)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn class(self) -> Option<usize> {
        match self {
            Nilpotency::Class(c) => Some(c),
            Nilpotency::NotNilpotent => None,
        }
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Class(c) => write!(f, "class {c}"),
            Nilpotency::NotNilpotent => write!(f, "not nilpotent"),
        }
    }
}

/// A finite-dimensional Lie ring over `F_{p^e}`.
#[derive(Clone)]
pub struct LieRing {
    field: Arc<Field>,
    dim: usize,
    /// `table[i * dim + j]` for `i < j` holds `[b_i, b_j]` as sparse `(k, c)`.
    table: Vec<Vec<(usize, Elem)>>,
}

impl fmt::Debug for LieRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieRing(dim {} over {:?})", self.dim, self.field)
    }
}

impl LieRing {
    pub fn abelian(field: Arc<Field>, dim: usize) -> Self {
        LieRing {
            field,
            dim,
            table: vec![Vec::new(); dim * dim],
        }
    }

    /// Builds a ring from brackets `[b_i, b_j]` for `i < j` without checking
    /// Jacobi. Used for rings produced by constructions that are Lie by
    /// design (quotients, direct sums); tests validate them independently.
    pub(crate) fn from_upper_brackets(
        field: Arc<Field>,
        dim: usize,
        brackets: impl IntoIterator<Item = (usize, usize, Vector)>,
    ) -> Self {
        let mut ring = LieRing::abelian(field, dim);
        for (i, j, v) in brackets {
            debug_assert!(i < j);
            ring.table[i * dim + j] = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, &c)| (k, c))
                .collect();
        }
        ring
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_table(&self) -> StructureTable {
        let mut t = StructureTable::new(self.field.clone(), self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.basis_bracket(i, j);
                if !linalg::is_zero(&v) {
                    t.set_bracket(i, j, &v);
                }
            }
        }
        t
    }

    /// Upper-triangular brackets `(i, j, [b_i, b_j])` with nonzero value.
    pub fn upper_brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Elem)])> + '_ {
        (0..self.dim).flat_map(move |i| {
            (i + 1..self.dim).filter_map(move |j| {
                let e = &self.table[i * self.dim + j];
                (!e.is_empty()).then_some((i, j, e.as_slice()))
            })
        })
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let f = &*self.field;
        let mut out = zero_vec(self.dim);
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        for &(k, c) in &self.table[a * self.dim + b] {
            out[k] = if sign { f.neg(c) } else { c };
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|e| e.is_empty())
    }

    fn check_len(&self, v: &[Elem]) -> Result<(), LieError> {
        if v.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                dim: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `[u, v]`; panics on length mismatch.
    pub fn bracket(&self, u: &[Elem], v: &[Elem]) -> Vector {
        assert_eq!(u.len(), self.dim, "vector length does not match ring");
        assert_eq!(v.len(), self.dim, "vector length does not match ring");
        let f = &*self.field;
        let d = self.dim;
        let su: Vec<(usize, Elem)> = nonzeros(u);
        let sv: Vec<(usize, Elem)> = nonzeros(v);
        let mut out = zero_vec(d);
        for &(i, a) in &su {
            for &(j, b) in &sv {
                if i == j {
                    continue;
                }
                let (lo, hi, c) = if i < j {
                    (i, j, f.mul(a, b))
                } else {
                    (j, i, f.neg(f.mul(a, b)))
                };
                for &(k, x) in &self.table[lo * d + hi] {
                    out[k] = f.add(out[k], f.mul(c, x));
                }
            }
        }
        out
    }

    pub fn try_bracket(&self, u: &[Elem], v: &[Elem]) -> Result<Vector, LieError> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket(u, v))
    }

    pub fn bracket_eval(&self, expr: &BracketExpr) -> Result<Vector, LieError> {
        match expr {
            BracketExpr::Leaf(v) => {
                self.check_len(v)?;
                Ok(v.clone())
            }
            BracketExpr::Bracket(a, b) => {
                let x = self.bracket_eval(a)?;
                let y = self.bracket_eval(b)?;
                Ok(self.bracket(&x, &y))
            }
        }
    }

    /// `[v_1, ..., v_s]` left-normed.
    pub fn left_normed(&self, vectors: &[Vector]) -> Vector {
        let mut it = vectors.iter();
        let mut acc = it.next().expect("empty commutator").clone();
        for v in it {
            if linalg::is_zero(&acc) {
                break;
            }
            acc = self.bracket(&acc, v);
        }
        acc
    }

    /// Span of `[a, b]` for `a` in `s`, `b` in `t`.
    pub fn bracket_spaces(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let f = &*self.field;
        let mut out = Subspace::zero(self.dim);
        for a in s.basis() {
            for b in t.basis() {
                out.insert(f, &self.bracket(a, b));
            }
        }
        out
    }

    /// `gamma_1 = S, gamma_{i+1} = [gamma_i, S]`, ending at the first zero term
    /// or the first repeated term (which is not listed twice).
    pub fn lower_central_series_of(&self, s: &Subspace) -> Vec<Subspace> {
        let mut series = vec![s.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.bracket_spaces(last, s);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn lower_central_series(&self) -> Vec<Subspace> {
        self.lower_central_series_of(&Subspace::full(self.dim))
    }

    /// Nilpotency of the subring `s` (which must be bracket-closed).
    pub fn nilpotency_of(&self, s: &Subspace) -> Nilpotency {
        nilpotency_from_series(&self.lower_central_series_of(s))
    }

    pub fn nilpotency(&self) -> Nilpotency {
        self.nilpotency_of(&Subspace::full(self.dim))
    }

    pub fn is_subring(&self, s: &Subspace) -> bool {
        let f = &*self.field;
        let b = s.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| s.contains(f, &self.bracket(&b[i], &b[j]))))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let f = &*self.field;
        s.basis().iter().all(|a| {
            (0..self.dim).all(|k| s.contains(f, &self.bracket(a, &linalg::unit_vec(self.dim, k))))
        })
    }

    /// Least bracket-closed subspace containing `gens`.
    pub fn generated_subring(&self, gens: &[Vector]) -> Subspace {
        let f = &*self.field;
        let mut span = Subspace::zero(self.dim);
        let mut done: Vec<Vector> = Vec::new();
        let mut queue: Vec<Vector> = Vec::new();
        for g in gens {
            if span.insert(f, g) {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for w in &done {
                let b = self.bracket(&v, w);
                if span.insert(f, &b) {
                    queue.push(b);
                }
            }
            done.push(v);
        }
        span
    }

    /// Least ideal containing `gens`.
    pub fn generated_ideal(&self, gens: &[Vector]) -> Subspace {
        let f = &*self.field;
        let mut span = Subspace::zero(self.dim);
        let mut queue: Vec<Vector> = Vec::new();
        for g in gens {
            if span.insert(f, g) {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for k in 0..self.dim {
                let b = self.bracket(&v, &linalg::unit_vec(self.dim, k));
                if span.insert(f, &b) {
                    queue.push(b);
                }
            }
        }
        span
    }

    /// Quotient by an ideal on the complement spanned by the ideal's non-pivot
    /// coordinates.
    pub fn quotient(&self, ideal: &Subspace) -> Quotient {
        let f = &*self.field;
        let keep = ideal.non_pivots();
        let d = keep.len();
        let project = |v: &[Elem]| -> Vector {
            let r = ideal.reduce(f, v);
            keep.iter().map(|&c| r[c]).collect()
        };
        let mut brackets = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let v = project(&self.basis_bracket(keep[a], keep[b]));
                if !linalg::is_zero(&v) {
                    brackets.push((a, b, v));
                }
            }
        }
        Quotient {
            ring: LieRing::from_upper_brackets(self.field.clone(), d, brackets),
            ideal: ideal.clone(),
            keep,
        }
    }

    /// Structure constants of the subring `s` in its echelon basis.
    pub fn subring(&self, s: &Subspace) -> LieRing {
        let f = &*self.field;
        let b = s.basis();
        let mut brackets = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let v = s
                    .coords(f, &self.bracket(&b[i], &b[j]))
                    .expect("subspace is not bracket-closed");
                if !linalg::is_zero(&v) {
                    brackets.push((i, j, v));
                }
            }
        }
        LieRing::from_upper_brackets(self.field.clone(), b.len(), brackets)
    }

    /// External direct sum.
    pub fn direct_sum(&self, other: &LieRing) -> LieRing {
        assert_eq!(*self.field, *other.field, "direct sum over different fields");
        let d = self.dim + other.dim;
        let mut brackets = Vec::new();
        for (i, j, e) in self.upper_brackets() {
            let mut v = zero_vec(d);
            for &(k, c) in e {
                v[k] = c;
            }
            brackets.push((i, j, v));
        }
        for (i, j, e) in other.upper_brackets() {
            let mut v = zero_vec(d);
            for &(k, c) in e {
                v[self.dim + k] = c;
            }
            brackets.push((self.dim + i, self.dim + j, v));
        }
        LieRing::from_upper_brackets(self.field.clone(), d, brackets)
    }
}

/// `[x, y] = z` on the basis `x, y, z`.
pub fn heisenberg(field: Arc<Field>) -> LieRing {
    LieRing::from_upper_brackets(field, 3, [(0, 1, linalg::unit_vec(3, 2))])
}

pub fn nilpotency_from_series(series: &[Subspace]) -> Nilpotency {
    let last = series.last().expect("series is never empty");
    if last.is_zero() {
        Nilpotency::Class(series.len() - 1)
    } else {
        Nilpotency::NotNilpotent
    }
}

fn nonzeros(v: &[Elem]) -> Vec<(usize, Elem)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, &c)| (i, c))
        .collect()
}

/// A quotient ring together with the data to map into it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ring: LieRing,
    pub ideal: Subspace,
    /// Coordinates of the parent that index the quotient basis.
    pub keep: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, f: &Field, v: &[Elem]) -> Vector {
        let r = self.ideal.reduce(f, v);
        self.keep.iter().map(|&c| r[c]).collect()
    }
}
