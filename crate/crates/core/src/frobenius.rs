//! Metacyclic Frobenius groups `FH` acting on Lie rings.
//!
//! `F = <phi>` has order `n`, `H = <h>` has order `q` and `h phi h^{-1} = phi^r`.
//! With maps acting on the right this reads `H * PHI * H^{-1} = PHI^r` for the
//! matrices, and it is exactly the relation that makes `h` carry the
//! `omega^i`-eigenspace of `phi` onto the `omega^{ri}`-eigenspace.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::{gcd, prime_factors, Elem, Field, FieldError};
use crate::lie::{LieRing, Nilpotency};
use crate::linalg::{self, Matrix, Subspace, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeError {
    #[error("n = {n} and q = {q} must both be at least 2")]
    TooSmall { n: u64, q: u64 },
    #[error("r = {r} is not in [1, n - 1] for n = {n}")]
    ROutOfRange { n: u64, r: u64 },
    #[error("r^q = {value} is not 1 mod n")]
    NotRoot { value: u64 },
    #[error("r has multiplicative order {order} mod n, not q")]
    WrongOrder { order: u64 },
    #[error("gcd(r^{j} - 1, n) = {gcd}, so h has fixed points on F")]
    NotFixedPointFree { j: u64, gcd: u64 },
}

/// The numerical data `(n, q, r)` of a metacyclic Frobenius group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FrobeniusShape {
    pub n: u64,
    pub q: u64,
    pub r: u64,
}

impl FrobeniusShape {
    pub fn new(n: u64, q: u64, r: u64) -> Result<Self, ShapeError> {
        Self::validate(n, q, r)?;
        Ok(FrobeniusShape { n, q, r })
    }

    /// Checks the conditions in order and names the first one that fails.
    pub fn validate(n: u64, q: u64, r: u64) -> Result<(), ShapeError> {
        if n < 2 || q < 2 {
            return Err(ShapeError::TooSmall { n, q });
        }
        if r == 0 || r >= n {
            return Err(ShapeError::ROutOfRange { n, r });
        }
        let value = pow_mod(r, q, n);
        if value != 1 % n {
            return Err(ShapeError::NotRoot { value });
        }
        let order = (1..=q).find(|&k| pow_mod(r, k, n) == 1).unwrap_or(q);
        if order != q {
            return Err(ShapeError::WrongOrder { order });
        }
        for j in 1..q {
            let g = gcd((pow_mod(r, j, n) + n - 1) % n, n);
            if g != 1 {
                return Err(ShapeError::NotFixedPointFree { j, gcd: g });
            }
        }
        Ok(())
    }

    /// `r^k mod n`
    pub fn r_pow(&self, k: u64) -> u64 {
        pow_mod(self.r, k, self.n)
    }

    /// `i, ri, r^2 i, ..., r^{q-1} i` modulo `n`.
    pub fn orbit(&self, i: u64) -> Vec<u64> {
        (0..self.q).map(|k| self.r_pow(k) * i % self.n).collect()
    }

    /// Representatives (smallest element) of the `H`-orbits on `Z/n \ {0}`.
    pub fn orbit_representatives(&self) -> Vec<u64> {
        (1..self.n)
            .filter(|&i| self.orbit(i).iter().all(|&j| j >= i))
            .collect()
    }
}

impl fmt::Display for FrobeniusShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.q, self.r)
    }
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = b % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Whether `m` has multiplicative order exactly `n` under `pow`.
pub(crate) fn has_exact_order<T>(n: u64, pow: impl Fn(u64) -> T, is_one: impl Fn(&T) -> bool) -> bool {
    is_one(&pow(n)) && prime_factors(n).iter().all(|&p| !is_one(&pow(n / p)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("{which} is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch {
        which: &'static str,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("action is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ActionViolation>),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    NotCoprime { p: u32, nq: u64 },
    OmegaOrder { n: u64 },
    PhiOrder { n: u64 },
    HOrder { q: u64 },
    Relation,
    NotAutomorphism { which: &'static str, i: usize, j: usize },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::NotCoprime { p, nq } => write!(f, "p = {p} divides n*q = {nq}"),
            ActionViolation::OmegaOrder { n } => write!(f, "omega does not have order {n}"),
            ActionViolation::PhiOrder { n } => write!(f, "phi does not have order {n}"),
            ActionViolation::HOrder { q } => write!(f, "h does not have order {q}"),
            ActionViolation::Relation => write!(f, "h phi h^-1 != phi^r"),
            ActionViolation::NotAutomorphism { which, i, j } => {
                write!(f, "{which} does not preserve [b{i}, b{j}]")
            }
        }
    }
}

/// `FH` acting on a Lie ring by the matrices `phi` and `h`.
#[derive(Clone, Debug)]
pub struct FrobeniusAction {
    ring: Arc<LieRing>,
    shape: FrobeniusShape,
    omega: Elem,
    phi: Matrix,
    h: Matrix,
}

impl FrobeniusAction {
    /// Validated construction.
    pub fn new(
        ring: Arc<LieRing>,
        shape: FrobeniusShape,
        omega: Elem,
        phi: Matrix,
        h: Matrix,
    ) -> Result<Self, FrobeniusError> {
        let a = Self::from_parts(ring, shape, omega, phi, h)?;
        let violations = a.validate();
        if violations.is_empty() {
            Ok(a)
        } else {
            Err(FrobeniusError::Invalid(violations))
        }
    }

    /// Shape-checked but otherwise unvalidated; see [`FrobeniusAction::validate`].
    pub fn from_parts(
        ring: Arc<LieRing>,
        shape: FrobeniusShape,
        omega: Elem,
        phi: Matrix,
        h: Matrix,
    ) -> Result<Self, FrobeniusError> {
        let d = ring.dim();
        for (which, m) in [("phi", &phi), ("h", &h)] {
            if m.rows() != d || m.cols() != d {
                return Err(FrobeniusError::DimensionMismatch {
                    which,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim: d,
                });
            }
        }
        FrobeniusShape::validate(shape.n, shape.q, shape.r)?;
        Ok(FrobeniusAction {
            ring,
            shape,
            omega,
            phi,
            h,
        })
    }

    pub fn ring(&self) -> &Arc<LieRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Field> {
        self.ring.field()
    }

    pub fn shape(&self) -> FrobeniusShape {
        self.shape
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Every violated hypothesis; empty iff the action is valid.
    pub fn validate(&self) -> Vec<ActionViolation> {
        let f = &**self.field();
        let FrobeniusShape { n, q, r } = self.shape;
        let mut out = Vec::new();
        let p = f.characteristic();
        if (n * q) % p as u64 == 0 {
            out.push(ActionViolation::NotCoprime { p, nq: n * q });
        }
        let omega_ok = !self.omega.is_zero()
            && has_exact_order(n, |k| f.pow(self.omega, k as i64), |x| *x == f.one());
        if !omega_ok {
            out.push(ActionViolation::OmegaOrder { n });
        }
        if !has_exact_order(n, |k| self.phi.pow(f, k), Matrix::is_identity) {
            out.push(ActionViolation::PhiOrder { n });
        }
        if !has_exact_order(q, |k| self.h.pow(f, k), Matrix::is_identity) {
            out.push(ActionViolation::HOrder { q });
        }
        match self.h.inverse(f) {
            Some(hinv) => {
                let lhs = self.h.mul(f, &self.phi).mul(f, &hinv);
                if lhs != self.phi.pow(f, r) {
                    out.push(ActionViolation::Relation);
                }
            }
            None => out.push(ActionViolation::Relation),
        }
        for (which, m) in [("phi", &self.phi), ("h", &self.h)] {
            if let Some((i, j)) = first_non_automorphism(&self.ring, m) {
                out.push(ActionViolation::NotAutomorphism { which, i, j });
            }
        }
        out
    }

    /// `v * phi^a * h^b`
    pub fn apply(&self, v: &[Elem], phi_pow: u64, h_pow: u64) -> Vector {
        let f = &**self.field();
        let mut w = v.to_vec();
        for _ in 0..phi_pow % self.shape.n {
            w = self.phi.apply(f, &w);
        }
        for _ in 0..h_pow % self.shape.q {
            w = self.h.apply(f, &w);
        }
        w
    }

    pub fn eigen_decompose(&self) -> GradedDecomposition {
        phi_grading(self.field(), self.shape, self.omega, &self.phi)
    }

    /// Fixed points of the chosen subgroup and their nilpotency.
    pub fn fixed_subring(&self, which: FixedBy) -> FixedSubring {
        let f = &**self.field();
        let d = self.dim();
        let fixed = |m: &Matrix| m.sub(f, &Matrix::identity(d)).left_kernel(f);
        let space = match which {
            FixedBy::F => fixed(&self.phi),
            FixedBy::H => fixed(&self.h),
            FixedBy::FH => fixed(&self.phi).intersect(f, &fixed(&self.h)),
        };
        assert!(self.ring.is_subring(&space), "fixed points are not a subring");
        let nilpotency = self.ring.nilpotency_of(&space);
        FixedSubring { space, nilpotency }
    }

    /// Whether a subspace is mapped into itself by `phi` and `h`.
    pub fn is_invariant(&self, s: &Subspace) -> bool {
        let f = &**self.field();
        s.is_invariant(f, &self.phi) && s.is_invariant(f, &self.h)
    }
}

fn first_non_automorphism(ring: &LieRing, m: &Matrix) -> Option<(usize, usize)> {
    let f = &**ring.field();
    let d = ring.dim();
    let images: Vec<Vector> = (0..d).map(|i| m.row(i).to_vec()).collect();
    for i in 0..d {
        for j in i + 1..d {
            let lhs = m.apply(f, &ring.basis_bracket(i, j));
            let rhs = ring.bracket(&images[i], &images[j]);
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedBy {
    F,
    H,
    FH,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSubring {
    pub space: Subspace,
    pub nilpotency: Nilpotency,
}

/// A vector tagged with the `phi`-component it lies in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homogeneous {
    pub index: u64,
    pub vector: Vector,
}

/// The `Z/n`-grading by `phi`-eigenspaces.
#[derive(Debug, Clone)]
pub struct GradedDecomposition {
    field: Arc<Field>,
    shape: FrobeniusShape,
    components: Vec<Subspace>,
    projections: Vec<Matrix>,
}

impl GradedDecomposition {
    pub fn shape(&self) -> FrobeniusShape {
        self.shape
    }

    pub fn n(&self) -> u64 {
        self.shape.n
    }

    pub fn component(&self, k: u64) -> &Subspace {
        &self.components[(k % self.shape.n) as usize]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn projection(&self, k: u64) -> &Matrix {
        &self.projections[(k % self.shape.n) as usize]
    }

    pub fn projections(&self) -> &[Matrix] {
        &self.projections
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }

    /// `pi_k(x)`
    pub fn project(&self, k: u64, x: &[Elem]) -> Vector {
        self.projection(k).apply(&self.field, x)
    }

    /// All nonzero `phi`-terms of `x`.
    pub fn split(&self, x: &[Elem]) -> Vec<Homogeneous> {
        (0..self.shape.n)
            .map(|k| Homogeneous {
                index: k,
                vector: self.project(k, x),
            })
            .filter(|h| !linalg::is_zero(&h.vector))
            .collect()
    }

    /// Tags `x` if it lies in a single component. Zero is tagged with `hint`.
    pub fn tag(&self, x: &[Elem], hint: u64) -> Option<Homogeneous> {
        if linalg::is_zero(x) {
            return Some(Homogeneous {
                index: hint % self.shape.n,
                vector: x.to_vec(),
            });
        }
        (0..self.shape.n)
            .find(|&k| self.component(k).contains(&self.field, x))
            .map(|index| Homogeneous {
                index,
                vector: x.to_vec(),
            })
    }

    /// Homogeneous basis: the echelon bases of all components, tagged.
    pub fn homogeneous_basis(&self) -> Vec<Homogeneous> {
        (0..self.shape.n)
            .flat_map(|k| {
                self.component(k).basis().iter().map(move |v| Homogeneous {
                    index: k,
                    vector: v.clone(),
                })
            })
            .collect()
    }
}

/// Eigenspaces of `phi` for the powers of `omega`, with the projections
/// `pi_k = (1/n) sum_s omega^{-ks} phi^s`. Needs only `phi`, so it also serves
/// subgroups that are not `h`-invariant.
pub fn phi_grading(field: &Arc<Field>, shape: FrobeniusShape, omega: Elem, phi: &Matrix) -> GradedDecomposition {
    let f = &**field;
    let n = shape.n;
    let d = phi.rows();
    let powers: Vec<Matrix> = (0..n).map(|s| phi.pow(f, s)).collect();
    let inv_n = f.inv(f.from_i64(n as i64));
    let mut projections = Vec::with_capacity(n as usize);
    let mut components = Vec::with_capacity(n as usize);
    for k in 0..n {
        let mut pk = Matrix::zeros(d, d);
        for (s, m) in powers.iter().enumerate() {
            let c = f.mul(inv_n, f.pow(omega, -((k * s as u64) as i64)));
            pk = pk.add(f, &m.scale(f, c));
        }
        projections.push(pk);
        let shifted = phi.sub(f, &Matrix::identity(d).scale(f, f.pow(omega, k as i64)));
        components.push(shifted.left_kernel(f));
    }
    GradedDecomposition {
        field: field.clone(),
        shape,
        components,
        projections,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GradingViolation {
    /// `[L_s, L_t]` leaves `L_{s+t}`.
    Grading { s: u64, t: u64 },
    /// `L_i * h != L_{ri}`
    Permutation { i: u64 },
    /// `sum_k pi_k` is not the identity.
    Sum,
    /// `pi_j pi_k != delta_{jk} pi_k`
    Orthogonality { j: u64, k: u64 },
    /// `pi_k h != h pi_{rk}`
    Equivariance { k: u64 },
}

/// Checks `[L_s, L_t] <= L_{s+t}` on component bases and `L_i h = L_{ri}`.
pub fn check_grading_laws(d: &GradedDecomposition, a: &FrobeniusAction) -> Vec<GradingViolation> {
    let f = &**a.field();
    let ring = a.ring();
    let n = d.n();
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let target = d.component(s + t);
            let ok = d.component(s).basis().iter().all(|x| {
                d.component(t)
                    .basis()
                    .iter()
                    .all(|y| target.contains(f, &ring.bracket(x, y)))
            });
            if !ok {
                out.push(GradingViolation::Grading { s, t });
            }
        }
    }
    for i in 0..n {
        if d.component(i).image(f, a.h()) != *d.component(a.shape().r * i) {
            out.push(GradingViolation::Permutation { i });
        }
    }
    out
}

/// `sum_k pi_k = 1`, `pi_j pi_k = delta_{jk} pi_k` and `pi_k(x) h = pi_{rk}(x h)`.
pub fn check_projection_laws(d: &GradedDecomposition, a: &FrobeniusAction) -> Vec<GradingViolation> {
    let f = &**a.field();
    let n = d.n();
    let dim = a.dim();
    let mut out = Vec::new();
    let mut sum = Matrix::zeros(dim, dim);
    for p in d.projections() {
        sum = sum.add(f, p);
    }
    if !sum.is_identity() {
        out.push(GradingViolation::Sum);
    }
    for j in 0..n {
        for k in 0..n {
            let prod = d.projection(j).mul(f, d.projection(k));
            let expected = if j == k { d.projection(k).clone() } else { Matrix::zeros(dim, dim) };
            if prod != expected {
                out.push(GradingViolation::Orthogonality { j, k });
            }
        }
    }
    for k in 0..n {
        let lhs = d.projection(k).mul(f, a.h());
        let rhs = a.h().mul(f, d.projection(a.shape().r * k));
        if lhs != rhs {
            out.push(GradingViolation::Equivariance { k });
        }
    }
    out
}

/// The standard worked example: Heisenberg ring over `F_7`, shape `(3, 2, 2)`,
/// `phi = diag(2, 4, 1)`, `h: x <-> y, z -> -z`.
pub fn heisenberg_example() -> FrobeniusAction {
    heisenberg_action(7, FrobeniusShape { n: 3, q: 2, r: 2 }).expect("worked example is valid")
}

/// Heisenberg ring `[x, y] = z` with `phi = diag(w, w^{-1}, 1)` and the swap
/// `h`. Valid for every shape with `q = 2` and `r = n - 1`, and any `p` with
/// `n | p - 1`.
pub fn heisenberg_action(p: u32, shape: FrobeniusShape) -> Result<FrobeniusAction, FrobeniusError> {
    let field = Arc::new(Field::prime(p)?);
    let omega = field.primitive_root_of_unity(shape.n)?;
    let ring = Arc::new(crate::lie::heisenberg(field.clone()));
    let f = &*field;
    let phi = Matrix::diagonal(&[omega, f.inv(omega), f.one()]);
    let mut h = Matrix::zeros(3, 3);
    h.set(0, 1, f.one());
    h.set(1, 0, f.one());
    h.set(2, 2, f.neg(f.one()));
    FrobeniusAction::new(ring, shape, omega, phi, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vec;

    #[test]
    fn shapes() {
        assert!(FrobeniusShape::new(3, 2, 2).is_ok());
        assert!(FrobeniusShape::new(7, 3, 2).is_ok());
        assert_eq!(
            FrobeniusShape::validate(4, 2, 3),
            Err(ShapeError::NotFixedPointFree { j: 1, gcd: 2 })
        );
        assert_eq!(
            FrobeniusShape::validate(7, 2, 2),
            Err(ShapeError::NotRoot { value: 4 })
        );
        assert_eq!(
            FrobeniusShape::validate(7, 6, 2),
            Err(ShapeError::WrongOrder { order: 3 })
        );
        let s = FrobeniusShape::new(7, 3, 2).unwrap();
        assert_eq!(s.orbit(1), vec![1, 2, 4]);
        assert_eq!(s.orbit_representatives(), vec![1, 3]);
    }

    #[test]
    fn heisenberg_decomposition() {
        let a = heisenberg_example();
        assert!(a.validate().is_empty());
        let d = a.eigen_decompose();
        assert_eq!(d.dims(), vec![1, 1, 1]);
        let f = a.field();
        assert!(d.component(0).contains(f, &unit_vec(3, 2)));
        assert!(d.component(1).contains(f, &unit_vec(3, 0)));
        assert!(d.component(2).contains(f, &unit_vec(3, 1)));
        let xy = linalg::add(f, &unit_vec(3, 0), &unit_vec(3, 1));
        assert_eq!(d.project(1, &xy), unit_vec(3, 0));
        assert_eq!(d.project(2, &xy), unit_vec(3, 1));
        assert_eq!(d.project(0, &unit_vec(3, 2)), unit_vec(3, 2));
        assert!(check_grading_laws(&d, &a).is_empty());
    }

    #[test]
    fn heisenberg_fixed_points() {
        let a = heisenberg_example();
        let f = a.field();
        let ch = a.fixed_subring(FixedBy::H);
        let xy = linalg::add(f, &unit_vec(3, 0), &unit_vec(3, 1));
        assert_eq!(ch.space, Subspace::span(f, 3, &[xy]));
        assert_eq!(ch.nilpotency, Nilpotency::Class(1));
        let cf = a.fixed_subring(FixedBy::F);
        assert_eq!(cf.space, Subspace::span(f, 3, &[unit_vec(3, 2)]));
        assert!(a.fixed_subring(FixedBy::FH).space.is_zero());
    }

    #[test]
    fn bad_actions_are_reported() {
        let a = heisenberg_example();
        let id = FrobeniusAction::from_parts(
            a.ring().clone(),
            a.shape(),
            a.omega(),
            Matrix::identity(3),
            a.h().clone(),
        )
        .unwrap();
        assert!(id.validate().contains(&ActionViolation::PhiOrder { n: 3 }));

        let f3 = Arc::new(Field::prime(3).unwrap());
        let ring = Arc::new(crate::lie::heisenberg(f3.clone()));
        let phi = Matrix::diagonal(&[f3.from_i64(2), f3.from_i64(4), f3.one()]);
        let bad = FrobeniusAction::from_parts(ring, a.shape(), f3.one(), phi, Matrix::identity(3))
            .unwrap();
        assert!(bad
            .validate()
            .contains(&ActionViolation::NotCoprime { p: 3, nq: 6 }));
    }
}
