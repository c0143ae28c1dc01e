//! Dense exact linear algebra over a [`Field`].
//!
//! Vectors are rows and matrices act on the right: the image of `v` under `M`
//! is `v * M`. Subspaces are kept in reduced row-echelon form so two spans are
//! equal exactly when their stored bases are equal.

use std::collections::BTreeMap;

use crate::field::{Elem, Field};

pub type Vector = Vec<Elem>;

pub fn zero_vec(d: usize) -> Vector {
    vec![Elem::ZERO; d]
}

pub fn unit_vec(d: usize, i: usize) -> Vector {
    let mut v = zero_vec(d);
    v[i] = Elem::ONE;
    v
}

pub fn is_zero(v: &[Elem]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale(f: &Field, c: Elem, a: &[Elem]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn neg(f: &Field, a: &[Elem]) -> Vector {
    a.iter().map(|&x| f.neg(x)).collect()
}

/// `acc += c * a`
pub fn axpy(f: &Field, acc: &mut [Elem], c: Elem, a: &[Elem]) {
    if c.is_zero() {
        return;
    }
    for (x, &y) in acc.iter_mut().zip(a) {
        if !y.is_zero() {
            *x = f.add(*x, f.mul(c, y));
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|e| e.code()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::ONE;
        }
        m
    }

    pub fn diagonal(diag: &[Elem]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from rows, which must share a length. `cols` is needed
    /// to describe the empty matrix.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `v * self`
    pub fn apply(&self, f: &Field, v: &[Elem]) -> Vector {
        assert_eq!(v.len(), self.rows, "vector length does not match matrix");
        let mut out = zero_vec(self.cols);
        for (r, &c) in v.iter().enumerate() {
            axpy(f, &mut out, c, self.row(r));
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = other.apply(f, self.row(r));
            out.row_mut(r).copy_from_slice(&row);
        }
        out
    }

    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add(f, &self.data, &other.data),
        }
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub(f, &self.data, &other.data),
        }
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale(f, c, &self.data),
        }
    }

    pub fn pow(&self, f: &Field, mut k: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| self.get(r, c) == if r == c { Elem::ONE } else { Elem::ZERO })
            })
    }

    /// Smallest `k >= 1` with `self^k = I`, searching up to `limit`.
    pub fn order(&self, f: &Field, limit: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(f, self);
        }
        None
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m);
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug.set(r, n + r, Elem::ONE);
        }
        let pivots = rref_in_place(f, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }

    /// `{ v : v * self = 0 }` as a subspace of `F^rows`.
    pub fn left_kernel(&self, f: &Field) -> Subspace {
        self.transpose().right_kernel(f)
    }

    /// `{ x : self * x^T = 0 }` as a subspace of `F^cols`.
    pub fn right_kernel(&self, f: &Field) -> Subspace {
        let (r, pivots) = self.rref(f);
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(n);
            v[free] = Elem::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        Subspace::span(f, n, &basis)
    }

    /// Row space.
    pub fn row_space(&self, f: &Field) -> Subspace {
        Subspace::span(f, self.cols, &self.to_rows())
    }
}

fn rref_in_place(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                m.data.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(m.get(r, c));
        for k in c..cols {
            let x = m.get(r, k);
            m.set(r, k, f.mul(inv, x));
        }
        let pivot_row: Vector = m.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor.is_zero() {
                continue;
            }
            let nf = f.neg(factor);
            axpy(f, &mut m.row_mut(i)[c..], nf, &pivot_row[c..]);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of `F^dim` stored as a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|e| e.code()).collect())
            .collect();
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, rows)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(f: &Field, ambient: usize, vectors: &[Vector]) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.insert(f, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient, &self.basis)
    }

    /// Coordinates outside the pivot set, in increasing order. The unit vectors
    /// on these coordinates span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Representative of `v` modulo the subspace with all pivot coordinates zero.
    pub fn reduce(&self, f: &Field, v: &[Elem]) -> Vector {
        let mut out = v.to_vec();
        self.reduce_in_place(f, &mut out);
        out
    }

    pub fn reduce_in_place(&self, f: &Field, v: &mut [Elem]) {
        assert_eq!(v.len(), self.ambient, "vector length does not match subspace");
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    pub fn contains(&self, f: &Field, v: &[Elem]) -> bool {
        is_zero(&self.reduce(f, v))
    }

    /// Coefficients of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coords(&self, f: &Field, v: &[Elem]) -> Option<Vector> {
        if !self.contains(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, f: &Field, v: &[Elem]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(inv, *x);
        }
        for row in self.basis.iter_mut() {
            let c = row[p];
            if !c.is_zero() {
                axpy(f, row, f.neg(c), &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, w);
        true
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|v| other.contains(f, v))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(f, v);
        }
        s
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        // a in self lies in other iff its residue modulo other vanishes; the
        // residue map is linear in the coefficients of a.
        let residues: Vec<Vector> = self.basis.iter().map(|b| other.reduce(f, b)).collect();
        let m = Matrix::from_rows(self.ambient, &residues);
        let ker = m.left_kernel(f);
        let vecs: Vec<Vector> = ker
            .basis
            .iter()
            .map(|coef| {
                let mut v = zero_vec(self.ambient);
                for (c, b) in coef.iter().zip(&self.basis) {
                    axpy(f, &mut v, *c, b);
                }
                v
            })
            .collect();
        Subspace::span(f, self.ambient, &vecs)
    }

    /// Image under `v -> v * m`.
    pub fn image(&self, f: &Field, m: &Matrix) -> Subspace {
        let vecs: Vec<Vector> = self.basis.iter().map(|b| m.apply(f, b)).collect();
        Subspace::span(f, m.cols(), &vecs)
    }

    /// Whether `v * m` stays inside for every basis vector.
    pub fn is_invariant(&self, f: &Field, m: &Matrix) -> bool {
        self.basis.iter().all(|b| self.contains(f, &m.apply(f, b)))
    }
}

/// An echelon basis whose rows remember how they were built from numbered
/// source vectors, so membership comes with an explicit combination.
#[derive(Clone, Debug)]
pub struct TrackedSpan {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    combos: Vec<BTreeMap<usize, Elem>>,
}

impl TrackedSpan {
    pub fn new(ambient: usize) -> Self {
        TrackedSpan {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` in place; returns the combination that was subtracted.
    fn reduce(&self, f: &Field, v: &mut [Elem]) -> BTreeMap<usize, Elem> {
        let mut used: BTreeMap<usize, Elem> = BTreeMap::new();
        for ((row, &p), combo) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            axpy(f, v, f.neg(c), row);
            for (&s, &x) in combo {
                let e = used.entry(s).or_insert(Elem::ZERO);
                *e = f.add(*e, f.mul(c, x));
            }
        }
        used.retain(|_, x| !x.is_zero());
        used
    }

    /// Adds source `id`; returns whether the rank grew.
    pub fn insert(&mut self, f: &Field, id: usize, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        let used = self.reduce(f, &mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(inv, *x);
        }
        // row = inv * (v - sum used)
        let mut combo: BTreeMap<usize, Elem> = BTreeMap::new();
        combo.insert(id, inv);
        for (s, x) in used {
            let e = combo.entry(s).or_insert(Elem::ZERO);
            *e = f.sub(*e, f.mul(inv, x));
        }
        combo.retain(|_, x| !x.is_zero());
        self.rows.push(w);
        self.pivots.push(p);
        self.combos.push(combo);
        true
    }

    /// Coefficients `c_s` with `v = sum c_s source_s`, if `v` is in the span.
    pub fn express(&self, f: &Field, v: &[Elem]) -> Option<BTreeMap<usize, Elem>> {
        let mut w = v.to_vec();
        let used = self.reduce(f, &mut w);
        is_zero(&w).then_some(used)
    }
}
