//! JSON instance files and seeded instance generators.
//!
//! Keys are emitted in alphabetical order, scalars of `F_{p^e}` as length-`e`
//! coefficient arrays (lowest degree first), and matrices row-major acting on
//! row vectors from the right.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{Elem, Field, FieldError};
use crate::frobenius::{FrobeniusAction, FrobeniusError, FrobeniusShape, ShapeError};
use crate::group::{FiniteGroup, GroupAction, GroupError, DEFAULT_ORDER_CAP};
use crate::lie::{LieError, StructureTable};
use crate::linalg::{self, Matrix, Vector};
use crate::freelie::{FreeLieError, GeneratorSet};
use crate::universal::{default_prime, FreeQuotient, QuotientParams};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Field { path: String, source: FieldError },
    #[error("{path}: {source}")]
    Shape { path: String, source: ShapeError },
    #[error("{path}: expected {expected} entries, found {found}")]
    Length { path: String, expected: usize, found: usize },
    #[error("{path}: index {index} out of range for dimension {dim}")]
    Index { path: String, index: usize, dim: usize },
    #[error("{path}: entries must satisfy i < j (found i = {i}, j = {j})")]
    Order { path: String, i: usize, j: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error("infeasible family parameters: {0}")]
    Infeasible(String),
}

fn syntax(e: serde_json::Error) -> InstanceError {
    InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub p: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub n: u64,
    pub q: u64,
    pub r: u64,
}

impl From<FrobeniusShape> for ShapeSpec {
    fn from(s: FrobeniusShape) -> Self {
        ShapeSpec { n: s.n, q: s.q, r: s.r }
    }
}

impl ShapeSpec {
    pub fn shape(&self) -> Result<FrobeniusShape, InstanceError> {
        FrobeniusShape::new(self.n, self.q, self.r).map_err(|source| InstanceError::Shape {
            path: "/frobenius".into(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub c: Vec<u32>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub entries: Vec<Term>,
    pub i: usize,
    pub j: usize,
}

/// Provenance of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInfo {
    pub family: Family,
    pub scramble: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieInstanceFile {
    pub basis_names: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub dim: usize,
    pub field: FieldSpec,
    pub frobenius: ShapeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
    pub h: Vec<Vec<Vec<u32>>>,
    pub omega: Vec<u32>,
    pub phi: Vec<Vec<Vec<u32>>>,
}

/// A parsed instance whose parts have not been checked against the axioms.
#[derive(Debug, Clone)]
pub struct LoadedLie {
    pub field: Arc<Field>,
    pub shape: FrobeniusShape,
    pub table: StructureTable,
    pub omega: Elem,
    pub phi: Matrix,
    pub h: Matrix,
    pub names: Vec<String>,
}

impl LoadedLie {
    /// Lie axioms, then the action laws.
    pub fn into_action(self) -> Result<FrobeniusAction, InstanceError> {
        let ring = Arc::new(self.table.into_lie_ring()?);
        Ok(FrobeniusAction::new(ring, self.shape, self.omega, self.phi, self.h)?)
    }
}

fn scalar(f: &Field, c: &[u32], path: impl FnOnce() -> String) -> Result<Elem, InstanceError> {
    f.from_coeffs(c).map_err(|source| InstanceError::Field { path: path(), source })
}

fn matrix(f: &Field, rows: &[Vec<Vec<u32>>], dim: usize, name: &str) -> Result<Matrix, InstanceError> {
    if rows.len() != dim {
        return Err(InstanceError::Length {
            path: format!("/{name}"),
            expected: dim,
            found: rows.len(),
        });
    }
    let mut m = Matrix::zeros(dim, dim);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(InstanceError::Length {
                path: format!("/{name}/{r}"),
                expected: dim,
                found: row.len(),
            });
        }
        for (c, x) in row.iter().enumerate() {
            m.set(r, c, scalar(f, x, || format!("/{name}/{r}/{c}"))?);
        }
    }
    Ok(m)
}

fn emit_matrix(f: &Field, m: &Matrix) -> Vec<Vec<Vec<u32>>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| f.coeffs(m.get(r, c))).collect())
        .collect()
}

impl LieInstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(syntax)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn load(&self) -> Result<LoadedLie, InstanceError> {
        let fs = &self.field;
        let field = Arc::new(
            Field::new(fs.p, fs.e, fs.modulus.clone())
                .map_err(|source| InstanceError::Field { path: "/field".into(), source })?,
        );
        let f = &*field;
        let shape = self.frobenius.shape()?;
        let d = self.dim;
        if self.basis_names.len() != d {
            return Err(InstanceError::Length {
                path: "/basis_names".into(),
                expected: d,
                found: self.basis_names.len(),
            });
        }
        let mut table = StructureTable::new(field.clone(), d);
        for (b, entry) in self.brackets.iter().enumerate() {
            let path = format!("/brackets/{b}");
            for index in [entry.i, entry.j] {
                if index >= d {
                    return Err(InstanceError::Index { path, index, dim: d });
                }
            }
            if entry.i >= entry.j {
                return Err(InstanceError::Order {
                    path,
                    i: entry.i,
                    j: entry.j,
                });
            }
            let mut v = linalg::zero_vec(d);
            for (t, term) in entry.entries.iter().enumerate() {
                if term.k >= d {
                    return Err(InstanceError::Index {
                        path: format!("{path}/entries/{t}/k"),
                        index: term.k,
                        dim: d,
                    });
                }
                let c = scalar(f, &term.c, || format!("{path}/entries/{t}/c"))?;
                v[term.k] = f.add(v[term.k], c);
            }
            table.set_bracket(entry.i, entry.j, &v);
        }
        let omega = scalar(f, &self.omega, || "/omega".into())?;
        let phi = matrix(f, &self.phi, d, "phi")?;
        let h = matrix(f, &self.h, d, "h")?;
        Ok(LoadedLie {
            field,
            shape,
            table,
            omega,
            phi,
            h,
            names: self.basis_names.clone(),
        })
    }

    pub fn to_action(&self) -> Result<FrobeniusAction, InstanceError> {
        self.load()?.into_action()
    }

    /// Canonical file: brackets sorted by `(i, j)`, terms by `k`, zeros dropped.
    pub fn from_action(action: &FrobeniusAction, names: &[String], generator: Option<GeneratorInfo>) -> Self {
        let f = &**action.field();
        let ring = action.ring();
        let brackets = ring
            .upper_brackets()
            .map(|(i, j, e)| {
                let mut entries: Vec<Term> = e
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|&(k, c)| Term { c: f.coeffs(c), k })
                    .collect();
                entries.sort_by_key(|t| t.k);
                BracketEntry { entries, i, j }
            })
            .filter(|b| !b.entries.is_empty())
            .collect();
        LieInstanceFile {
            basis_names: names.to_vec(),
            brackets,
            dim: ring.dim(),
            field: FieldSpec {
                e: f.degree(),
                modulus: (f.degree() > 1).then(|| f.modulus().unwrap().to_vec()),
                p: f.characteristic(),
            },
            frobenius: action.shape().into(),
            generator,
            h: emit_matrix(f, action.h()),
            omega: f.coeffs(action.omega()),
            phi: emit_matrix(f, action.phi()),
        }
    }

    /// Parse and re-emit through the typed representation.
    pub fn canonicalize(&self) -> Result<Self, InstanceError> {
        let action = self.to_action()?;
        Ok(Self::from_action(&action, &self.basis_names, self.generator.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInstanceFile {
    pub frobenius: ShapeSpec,
    pub h: Vec<usize>,
    pub order: usize,
    pub phi: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

impl GroupInstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(syntax)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable") + "\n"
    }

    /// Structural checks only; the caller runs [`GroupAction::validate`].
    pub fn load(&self) -> Result<GroupAction, InstanceError> {
        if self.table.len() != self.order {
            return Err(InstanceError::Length {
                path: "/table".into(),
                expected: self.order,
                found: self.table.len(),
            });
        }
        let g = FiniteGroup::from_table(&self.table, DEFAULT_ORDER_CAP)?;
        let shape = self.frobenius.shape()?;
        Ok(GroupAction::from_parts(g, shape, self.phi.clone(), self.h.clone())?)
    }

    pub fn from_action(a: &GroupAction) -> Self {
        GroupInstanceFile {
            frobenius: a.shape.into(),
            h: a.h.clone(),
            order: a.group.order(),
            phi: a.phi.clone(),
            table: a.group.to_rows(),
        }
    }
}

/// Instance families. `heisenberg` puts `x` in `L_s` and `y` in `L_{-s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    Heisenberg {
        frobenius: ShapeSpec,
        p: u32,
        shift: u64,
    },
    /// The free Lie algebra on `orbits` `H`-orbits of generators, truncated
    /// above `class_cap`, optionally divided by `J` and by `I` for a class `c`.
    FreeNilpotent {
        c: Option<usize>,
        class_cap: usize,
        frobenius: ShapeSpec,
        kill_zero_component: bool,
        orbits: usize,
        p: Option<u32>,
    },
    DirectSum {
        parts: Vec<Family>,
    },
}

impl Family {
    pub fn heisenberg(p: u32, shape: FrobeniusShape) -> Self {
        Family::Heisenberg {
            frobenius: shape.into(),
            p,
            shift: 1,
        }
    }

    /// `copies` Heisenberg summands over the default prime, with shifts drawn
    /// from the seed.
    pub fn heisenberg_sum(shape: FrobeniusShape, copies: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = default_prime(shape);
        Family::DirectSum {
            parts: (0..copies)
                .map(|_| Family::Heisenberg {
                    frobenius: shape.into(),
                    p,
                    shift: rng.gen_range(1..shape.n),
                })
                .collect(),
        }
    }

    /// One Heisenberg summand and `copies - 1` copies of the universal
    /// quotient for class `c`, whose index-0 component vanishes.
    pub fn padded_sum(shape: FrobeniusShape, c: usize, copies: usize, class_cap: usize) -> Self {
        let p = default_prime(shape);
        let mut parts = vec![Family::Heisenberg {
            frobenius: shape.into(),
            p,
            shift: 1,
        }];
        parts.extend((1..copies).map(|_| Family::FreeNilpotent {
            c: Some(c),
            class_cap,
            frobenius: shape.into(),
            kill_zero_component: true,
            orbits: 1,
            p: Some(p),
        }));
        Family::DirectSum { parts }
    }
}

/// A generated instance with basis names.
#[derive(Debug, Clone)]
pub struct Generated {
    pub action: FrobeniusAction,
    pub names: Vec<String>,
}

impl Generated {
    pub fn to_file(&self, generator: Option<GeneratorInfo>) -> LieInstanceFile {
        LieInstanceFile::from_action(&self.action, &self.names, generator)
    }
}

pub fn generate(family: &Family, exec: Exec) -> Result<Generated, InstanceError> {
    match family {
        Family::Heisenberg { frobenius, p, shift } => {
            let shape = frobenius.shape()?;
            if shape.q != 2 || shape.r != shape.n - 1 {
                return Err(InstanceError::Infeasible(format!(
                    "the Heisenberg family needs q = 2 and r = n - 1, got {shape}"
                )));
            }
            if shift % shape.n == 0 {
                return Err(InstanceError::Infeasible("shift must be nonzero mod n".into()));
            }
            let field = Arc::new(Field::prime(*p).map_err(|source| InstanceError::Field {
                path: "/p".into(),
                source,
            })?);
            if (*p as u64 - 1) % shape.n != 0 {
                return Err(InstanceError::Infeasible(format!("n = {} does not divide p - 1 = {}", shape.n, p - 1)));
            }
            let f = &*field;
            let omega = f.primitive_root_of_unity(shape.n).map_err(|source| InstanceError::Field {
                path: "/p".into(),
                source,
            })?;
            let w = f.pow(omega, *shift as i64);
            let ring = Arc::new(crate::lie::heisenberg(field.clone()));
            let phi = Matrix::diagonal(&[w, f.inv(w), f.one()]);
            let mut h = Matrix::zeros(3, 3);
            h.set(0, 1, f.one());
            h.set(1, 0, f.one());
            h.set(2, 2, f.neg(f.one()));
            let action = FrobeniusAction::new(ring, shape, omega, phi, h)?;
            Ok(Generated {
                action,
                names: vec!["x".into(), "y".into(), "z".into()],
            })
        }
        Family::FreeNilpotent {
            c,
            class_cap,
            frobenius,
            kill_zero_component,
            orbits,
            p,
        } => {
            let shape = frobenius.shape()?;
            if *orbits == 0 || *class_cap == 0 {
                return Err(InstanceError::Infeasible("need at least one orbit and class cap 1".into()));
            }
            let params = QuotientParams {
                gens: GeneratorSet::with_orbits(shape, *orbits),
                max_weight: *class_cap,
                c: *c,
                kill_zero_component: *kill_zero_component,
                p: p.unwrap_or_else(|| default_prime(shape)),
                caps: Default::default(),
            };
            let q = FreeQuotient::build(params, exec)?;
            let ring = q.to_ring()?;
            Ok(Generated {
                action: ring.action,
                names: ring.names,
            })
        }
        Family::DirectSum { parts } => {
            let mut it = parts.iter();
            let first = it
                .next()
                .ok_or_else(|| InstanceError::Infeasible("a direct sum needs a summand".into()))?;
            let mut acc = generate(first, exec)?;
            for (s, part) in it.enumerate() {
                let next = generate(part, exec)?;
                acc = direct_sum(&acc, &next, s + 1)?;
            }
            Ok(acc)
        }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(m + n, m + n);
    for r in 0..m {
        for c in 0..m {
            out.set(r, c, a.get(r, c));
        }
    }
    for r in 0..n {
        for c in 0..n {
            out.set(m + r, m + c, b.get(r, c));
        }
    }
    out
}

fn direct_sum(a: &Generated, b: &Generated, tag: usize) -> Result<Generated, InstanceError> {
    let (x, y) = (&a.action, &b.action);
    if **x.field() != **y.field() || x.shape() != y.shape() || x.omega() != y.omega() {
        return Err(InstanceError::Infeasible(
            "direct summands need the same field, shape and root of unity".into(),
        ));
    }
    let ring = Arc::new(x.ring().direct_sum(y.ring()));
    let action = FrobeniusAction::new(
        ring,
        x.shape(),
        x.omega(),
        block_diag(x.phi(), y.phi()),
        block_diag(x.h(), y.h()),
    )?;
    let mut names = a.names.clone();
    names.extend(b.names.iter().map(|n| format!("{n}#{tag}")));
    Ok(Generated { action, names })
}

/// The same ring in a seeded random basis: `b'_i = sum_j P_ij b_j`.
pub fn scramble(g: &Generated, seed: u64) -> Generated {
    let a = &g.action;
    let f = &**a.field();
    let d = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, pinv) = loop {
        let rows: Vec<Vector> = (0..d)
            .map(|_| (0..d).map(|_| f.from_code(rng.gen_range(0..f.order())).unwrap()).collect())
            .collect();
        let p = Matrix::from_rows(d, &rows);
        if let Some(inv) = p.inverse(f) {
            break (p, inv);
        }
    };
    let ring = a.ring();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let v = ring.bracket(p.row(i), p.row(j));
            let w = pinv.apply(f, &v);
            if !linalg::is_zero(&w) {
                brackets.push((i, j, w));
            }
        }
    }
    let new_ring = Arc::new(crate::lie::LieRing::from_upper_brackets(a.field().clone(), d, brackets));
    let conj = |m: &Matrix| p.mul(f, m).mul(f, &pinv);
    let action = FrobeniusAction::new(new_ring, a.shape(), a.omega(), conj(a.phi()), conj(a.h()))
        .expect("a change of basis preserves validity");
    Generated {
        action,
        names: (0..d).map(|i| format!("b{i}")).collect(),
    }
}
