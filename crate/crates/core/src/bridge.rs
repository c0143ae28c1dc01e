//! The associated Lie ring `L(G) = sum_i gamma_i / gamma_{i+1}` of a group with
//! an `FH`-action, the group-side maps `theta_{v,a}` with kernels `K(v)`, the
//! generalized centralizers `A(t)` and the induction parameter `(m, m_bar, t)`.
//!
//! Only groups whose lower central factors are elementary abelian for one
//! prime `p` are supported, so that `L(G)` is a Lie algebra over `F_p`
//! (extended to contain a primitive `n`-th root of unity).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{prime_factors, Elem, Field, FieldError};
use crate::frobenius::{phi_grading, FrobeniusAction, FrobeniusError, GradedDecomposition};
use crate::group::{GroupAction, GroupError, Subgroup};
use crate::lie::LieRing;
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::tower::{representation_table, zero_sum_patterns, RepTable, TowerError};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("the subgroup is not nilpotent; its lower central series stops at order {order}")]
    NotNilpotent { order: usize },
    #[error("factor gamma_{weight} / gamma_{next} is not elementary abelian of exponent {p}", next = weight + 1)]
    NotElementaryAbelian { weight: usize, p: u64 },
    #[error("the lower central factors involve the primes {0:?}; one prime is required")]
    MixedPrimes(Vec<u64>),
    #[error("the subgroup is not phi-invariant")]
    NotPhiInvariant,
    #[error("the subgroup is not h-invariant")]
    NotHInvariant,
    #[error("tuple length {len} exceeds the cap {cap}")]
    TupleTooLong { len: usize, cap: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// `L(B)` for a `phi`-invariant nilpotent subgroup `B`, with the induced
/// matrices. `h` is present when `B` is also `h`-invariant.
#[derive(Debug, Clone)]
pub struct AssociatedLieRing {
    action: GroupAction,
    series: Vec<Subgroup>,
    p: u64,
    field: Arc<Field>,
    omega: Elem,
    ring: Arc<LieRing>,
    phi: Matrix,
    h: Option<Matrix>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    basis: Vec<usize>,
    /// per weight `i`, coordinates of every element of `gamma_i` modulo `gamma_{i+1}`
    coords: Vec<Vec<Option<Vec<u32>>>>,
    well_defined: bool,
}

impl AssociatedLieRing {
    pub fn of_group(action: &GroupAction, exec: Exec) -> Result<Self, BridgeError> {
        Self::new(action, &action.group.whole(), exec)
    }

    pub fn new(action: &GroupAction, sub: &Subgroup, exec: Exec) -> Result<Self, BridgeError> {
        let g = &action.group;
        if !action.is_phi_invariant(sub) {
            return Err(BridgeError::NotPhiInvariant);
        }
        let series = g.lower_central_series_of(sub);
        let last = series.last().unwrap();
        if !last.is_trivial() {
            return Err(BridgeError::NotNilpotent { order: last.order() });
        }
        let mut primes: BTreeSet<u64> = BTreeSet::new();
        for w in series.windows(2) {
            primes.extend(prime_factors((w[0].order() / w[1].order()) as u64));
        }
        let p = match primes.len() {
            0 => *prime_factors(g.order() as u64)
                .first()
                .ok_or_else(|| BridgeError::Unsupported("the trivial group has no associated prime".into()))?,
            1 => *primes.first().unwrap(),
            _ => return Err(BridgeError::MixedPrimes(primes.into_iter().collect())),
        };
        let class = series.len() - 1;
        let factor = |i: usize| -> (&Subgroup, &Subgroup) { (&series[i], &series[i + 1]) };
        // exponent p on every factor
        for i in 0..class {
            let (top, bottom) = factor(i);
            let ok = exec
                .map(top.elements(), |&x| bottom.contains(power(g, x, p)))
                .into_iter()
                .all(|b| b);
            if !ok {
                return Err(BridgeError::NotElementaryAbelian { weight: i + 1, p });
            }
        }
        let field = Arc::new(Field::with_root_of_unity(p as u32, action.shape.n)?);
        let omega = field.primitive_root_of_unity(action.shape.n)?;
        let f = &*field;

        let mut basis = Vec::new();
        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        let mut coords = Vec::new();
        for i in 0..class {
            let (top, bottom) = factor(i);
            let mut gens = Vec::new();
            let mut cur = bottom.clone();
            for &x in top.elements() {
                if !cur.contains(x) {
                    gens.push(x);
                    cur = g.join(&cur, &[x]);
                    if cur.order() == top.order() {
                        break;
                    }
                }
            }
            let d = gens.len();
            let mut table: Vec<Option<Vec<u32>>> = vec![None; g.order()];
            let mut e = vec![0u32; d];
            loop {
                let mut rep = g.identity();
                for (k, &b) in gens.iter().enumerate() {
                    rep = g.mul(rep, power(g, b, e[k] as u64));
                }
                for &z in bottom.elements() {
                    table[g.mul(rep, z)] = Some(e.clone());
                }
                let Some(k) = (0..d).rev().find(|&k| e[k] + 1 < p as u32) else {
                    break;
                };
                e[k] += 1;
                e[k + 1..].fill(0);
            }
            offsets.push(basis.len());
            dims.push(d);
            basis.extend_from_slice(&gens);
            coords.push(table);
        }
        let dim = basis.len();
        let weight_of: Vec<usize> = (0..class).flat_map(|i| std::iter::repeat(i + 1).take(dims[i])).collect();

        let embed = |weight: usize, x: usize| -> Option<Vector> {
            let mut v = linalg::zero_vec(dim);
            if weight > class {
                return Some(v);
            }
            let c = coords[weight - 1][x].as_ref()?;
            for (k, &a) in c.iter().enumerate() {
                v[offsets[weight - 1] + k] = f.from_i64(a as i64);
            }
            Some(v)
        };

        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
        let brackets = exec.map(&pairs, |&(i, j)| {
            let w = weight_of[i] + weight_of[j];
            embed(w, g.comm(basis[i], basis[j])).expect("commutator lies in the expected term")
        });
        let ring = Arc::new(LieRing::from_upper_brackets(
            field.clone(),
            dim,
            pairs.iter().zip(brackets).map(|(&(i, j), v)| (i, j, v)),
        ));

        // the bracket must not depend on coset representatives
        let well_defined = pairs.iter().all(|&(i, j)| {
            let w = weight_of[i] + weight_of[j];
            let base = embed(w, g.comm(basis[i], basis[j]));
            let shift_i = g.generating_set(&series[weight_of[i]]);
            let shift_j = g.generating_set(&series[weight_of[j]]);
            shift_i.iter().all(|&z| embed(w, g.comm(g.mul(basis[i], z), basis[j])) == base)
                && shift_j.iter().all(|&z| embed(w, g.comm(basis[i], g.mul(basis[j], z))) == base)
        });

        let induced = |perm: &[usize]| -> Matrix {
            let rows: Vec<Vector> = (0..dim)
                .map(|k| embed(weight_of[k], perm[basis[k]]).expect("invariant subgroup"))
                .collect();
            Matrix::from_rows(dim, &rows)
        };
        let phi = induced(&action.phi);
        let h = action.is_h_invariant(sub).then(|| induced(&action.h));
        Ok(AssociatedLieRing {
            action: action.clone(),
            series,
            p,
            field,
            omega,
            ring,
            phi,
            h,
            offsets,
            dims,
            basis,
            coords,
            well_defined,
        })
    }

    pub fn ring(&self) -> &Arc<LieRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn h(&self) -> Option<&Matrix> {
        self.h.as_ref()
    }

    pub fn series(&self) -> &[Subgroup] {
        &self.series
    }

    /// Nilpotency class of the subgroup.
    pub fn group_class(&self) -> usize {
        self.series.len() - 1
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.dims
    }

    /// Group elements whose images form the basis of `L(B)`.
    pub fn basis_elements(&self) -> &[usize] {
        &self.basis
    }

    pub fn well_defined(&self) -> bool {
        self.well_defined
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// `gamma_i` of the subgroup, trivial past the end of the series.
    pub fn gamma(&self, i: usize) -> Subgroup {
        self.series
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| self.action.group.trivial())
    }

    /// Image of `x in gamma_weight` in the factor of that weight.
    pub fn image(&self, weight: usize, x: usize) -> Option<Vector> {
        let f = &*self.field;
        let mut v = linalg::zero_vec(self.dim());
        if weight > self.group_class() {
            return Some(v);
        }
        let c = self.coords[weight - 1][x].as_ref()?;
        for (k, &a) in c.iter().enumerate() {
            v[self.offsets[weight - 1] + k] = f.from_i64(a as i64);
        }
        Some(v)
    }

    /// `x gamma_2` as an element of `L(B)`; zero for the trivial subgroup.
    pub fn weight_one(&self, x: usize) -> Vector {
        self.image(1, x).expect("element of the subgroup")
    }

    /// The weight-one part of `L(B)`.
    pub fn weight_one_space(&self) -> Subspace {
        let d = self.dim();
        let k = self.dims.first().copied().unwrap_or(0);
        Subspace::span(&self.field, d, &(0..k).map(|i| linalg::unit_vec(d, i)).collect::<Vec<_>>())
    }

    pub fn grading(&self) -> GradedDecomposition {
        phi_grading(&self.field, self.action.shape, self.omega, &self.phi)
    }

    pub fn action(&self) -> Result<FrobeniusAction, BridgeError> {
        let h = self.h.clone().ok_or(BridgeError::NotHInvariant)?;
        Ok(FrobeniusAction::new(
            self.ring.clone(),
            self.action.shape,
            self.omega,
            self.phi.clone(),
            h,
        )?)
    }

    /// `phi`-terms `x_0, ..., x_{n-1}` of `x`: the components of `x gamma_2`.
    pub fn phi_terms(&self, grading: &GradedDecomposition, x: usize) -> Vec<Vector> {
        let v = self.weight_one(x);
        (0..grading.n()).map(|k| grading.project(k, &v)).collect()
    }

    /// `|C_{L(B)}(phi)|`, counted over the prime field.
    pub fn fixed_phi_order(&self) -> BigUint {
        let f = &*self.field;
        let d = self.dim();
        let k = self.phi.sub(f, &Matrix::identity(d)).left_kernel(f).dim();
        BigUint::from(self.p).pow(k as u32)
    }

    /// `C_{L(B)}(h)` as a subspace.
    pub fn fixed_h_space(&self) -> Option<Subspace> {
        let f = &*self.field;
        let h = self.h.as_ref()?;
        Some(h.sub(f, &Matrix::identity(self.dim())).left_kernel(f))
    }
}

fn power(g: &crate::group::FiniteGroup, x: usize, k: u64) -> usize {
    let mut acc = g.identity();
    for _ in 0..k {
        acc = g.mul(acc, x);
    }
    acc
}

/// `K(v)` with its checks.
#[derive(Debug, Clone)]
pub struct KReport {
    pub subgroup: Subgroup,
    pub index: usize,
    pub bound: BigUint,
    pub within_bound: bool,
    pub phi_invariant: bool,
    pub h_compatible: bool,
    pub centralizer_property: bool,
}

impl KReport {
    pub fn all_pass(&self) -> bool {
        self.within_bound && self.phi_invariant && self.h_compatible && self.centralizer_property
    }
}

/// `(a_1, ..., a_k)` over `Z/n`, lexicographically.
fn exponent_tuples(n: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Group-side computations for `G` itself.
#[derive(Debug, Clone)]
pub struct GroupBridge {
    lie: AssociatedLieRing,
    grading: GradedDecomposition,
    weight_one: Vec<Vector>,
    tuple_cap: usize,
}

impl GroupBridge {
    pub fn new(action: &GroupAction, tuple_cap: usize, exec: Exec) -> Result<Self, BridgeError> {
        let lie = AssociatedLieRing::of_group(action, exec)?;
        let grading = lie.grading();
        let weight_one = exec.map_range(action.group.order(), |x| lie.weight_one(x));
        Ok(GroupBridge {
            lie,
            grading,
            weight_one,
            tuple_cap,
        })
    }

    pub fn lie(&self) -> &AssociatedLieRing {
        &self.lie
    }

    pub fn action(&self) -> &GroupAction {
        &self.lie.action
    }

    pub fn grading(&self) -> &GradedDecomposition {
        &self.grading
    }

    pub fn tuple_cap(&self) -> usize {
        self.tuple_cap
    }

    pub fn phi_term(&self, x: usize, k: u64) -> Vector {
        self.grading.project(k, &self.weight_one[x])
    }

    /// `theta_{v, a}(u)`, as an element of `G` representing its class modulo
    /// `gamma_{k+2}`.
    pub fn theta(&self, v: &[usize], a: &[u64], u: usize) -> usize {
        let act = self.action();
        let g = &act.group;
        let mut items = Vec::with_capacity(v.len() + 1);
        items.push(u);
        items.extend(v.iter().zip(a).map(|(&x, &s)| act.phi_pow(x, s)));
        let c = g.comm_left_normed(&items);
        let mut prod = g.identity();
        let mut term = c;
        for _ in 0..act.shape.n {
            prod = g.mul(prod, term);
            term = act.phi[term];
        }
        prod
    }

    /// Elements of `within` lying in `K(v)`.
    fn kernel_within(&self, v: &[usize], within: &Subgroup, exec: Exec) -> Subgroup {
        let g = &self.action().group;
        let target = self.lie.gamma(v.len() + 2);
        let tuples = exponent_tuples(self.action().shape.n, v.len());
        let keep = exec.map(within.elements(), |&u| {
            tuples.iter().all(|a| target.contains(self.theta(v, a, u)))
        });
        let mut mask = vec![false; g.order()];
        for (&u, k) in within.elements().iter().zip(keep) {
            mask[u] = k;
        }
        Subgroup::from_mask(mask)
    }

    pub fn k_subgroup(&self, v: &[usize], exec: Exec) -> Result<Subgroup, BridgeError> {
        if v.is_empty() || v.len() > self.tuple_cap {
            return Err(BridgeError::TupleTooLong {
                len: v.len(),
                cap: self.tuple_cap,
            });
        }
        Ok(self.kernel_within(v, &self.action().group.whole(), exec))
    }

    /// `K(v)` with the index bound `m^{n^k}`, `phi`-invariance,
    /// `K(v)^h = K(v^h)` and the Lie-side centralizer property
    /// `[u_j, x_{i_1}, ..., z_{i_k}] = 0` whenever `j + sum i = 0`.
    pub fn k_report(&self, v: &[usize], exec: Exec) -> Result<KReport, BridgeError> {
        let act = self.action();
        let g = &act.group;
        let k = self.k_subgroup(v, exec)?;
        let vh: Vec<usize> = v.iter().map(|&x| act.h[x]).collect();
        let kh = self.k_subgroup(&vh, exec)?;
        let m = act.fixed_phi(&g.whole()).order();
        let n = act.shape.n;
        let bound = BigUint::from(m).pow(n.pow(v.len() as u32) as u32);
        let index = g.order() / k.order();
        let ring = self.lie.ring();
        // linear in u, so the generators of K suffice
        let gens = g.generating_set(&k);
        let tuples = exponent_tuples(n, v.len());
        let centralizer_property = gens.iter().all(|&u| {
            tuples.iter().all(|idx| {
                let s: u64 = idx.iter().sum();
                let j = (n - s % n) % n;
                let mut items = vec![self.phi_term(u, j)];
                items.extend(v.iter().zip(idx).map(|(&x, &i)| self.phi_term(x, i)));
                linalg::is_zero(&ring.left_normed(&items))
            })
        });
        Ok(KReport {
            index,
            within_bound: BigUint::from(index) <= bound,
            bound,
            phi_invariant: act.is_phi_invariant(&k),
            h_compatible: act.image(&act.h, &k) == kh,
            centralizer_property,
            subgroup: k,
        })
    }

    /// `phi`-term spaces `pi_j(image of B)` inside the weight-one part.
    fn term_spaces(&self, b: &Subgroup) -> Vec<Subspace> {
        let f = &**self.lie.field();
        let g = &self.action().group;
        let images: Vec<Vector> = g.generating_set(b).iter().map(|&x| self.weight_one[x].clone()).collect();
        let w = Subspace::span(f, self.lie.dim(), &images);
        (0..self.grading.n()).map(|j| w.image(f, self.grading.projection(j))).collect()
    }

    fn require_prime_field(&self) -> Result<(), BridgeError> {
        if self.lie.field().degree() != 1 {
            return Err(BridgeError::Unsupported(format!(
                "phi-terms of group elements span an F_p-set, not a subspace, over F_{}^{}; n must divide p - 1",
                self.lie.prime(),
                self.lie.field().degree()
            )));
        }
        Ok(())
    }

    /// The induction parameter of a `phi`-invariant subgroup, with patterns of
    /// weight at most `weight_cap` standing in for `N`.
    pub fn parameter(&self, b: &Subgroup, weight_cap: usize, budget: usize, exec: Exec) -> Result<InductionParameter, BridgeError> {
        self.require_prime_field()?;
        let act = self.action();
        let lb = AssociatedLieRing::new(act, b, exec)?;
        let m = act.fixed_phi(b).order() as u64;
        let m_bar = (1..=weight_cap)
            .map(|j| act.fixed_in_quotient(&lb.gamma(j), &lb.gamma(j + 1)) as u64)
            .collect();
        let grading = lb.grading();
        let w = lb.weight_one_space();
        let f = &**lb.field();
        let spaces: Vec<Subspace> = (0..grading.n()).map(|j| w.image(f, grading.projection(j))).collect();
        let patterns = zero_sum_patterns(act.shape.n, weight_cap);
        let table = representation_table(lb.ring(), &spaces, &patterns, budget, exec)?;
        Ok(InductionParameter {
            m,
            m_bar,
            t: table.len() as u64,
        })
    }

    /// Generalized centralizers `A(0..=levels)` with their representatives.
    pub fn a_tower(&self, caps: ATowerCaps, exec: Exec) -> Result<ATower, BridgeError> {
        self.require_prime_field()?;
        let act = self.action();
        let g = &act.group;
        let ring = self.lie.ring();
        let patterns = zero_sum_patterns(act.shape.n, caps.weight_cap);
        let mut levels: Vec<ALevel> = Vec::new();
        let mut all_reps: Vec<usize> = Vec::new();
        for t in 0..=caps.levels {
            let subgroup = if t == 0 {
                g.whole()
            } else {
                let mut cur = levels[t - 1].subgroup.clone();
                'tuples: for len in 1..=caps.weight_cap {
                    for v in tuples_of(&all_reps, len) {
                        cur = self.kernel_within(&v, &cur, exec);
                        if cur.is_trivial() {
                            break 'tuples;
                        }
                    }
                }
                cur
            };
            let spaces = self.term_spaces(&subgroup);
            let table = representation_table(ring, &spaces, &patterns, caps.budget, exec)?;
            let mut reps: BTreeSet<usize> = BTreeSet::new();
            for ((pattern, _), entries) in &table {
                for (&j, x) in pattern.iter().zip(entries) {
                    if linalg::is_zero(x) {
                        continue;
                    }
                    let a = subgroup
                        .elements()
                        .iter()
                        .copied()
                        .find(|&a| &self.phi_term(a, j) == x)
                        .expect("entries are phi-terms of elements of the level");
                    for s in 0..act.shape.q {
                        reps.insert(act.h_pow(a, s));
                    }
                }
            }
            let representatives: Vec<usize> = reps.into_iter().collect();
            all_reps.extend(representatives.iter().copied().filter(|x| !all_reps.contains(x)).collect::<Vec<_>>());
            levels.push(ALevel {
                subgroup,
                table,
                representatives,
            });
        }
        Ok(ATower { caps, levels })
    }

    /// Parameters of `G` and each `A(i)`, with the inequality of each against `G`.
    pub fn tower_checks(&self, tower: &ATower, exec: Exec) -> Result<ATowerChecks, BridgeError> {
        let act = self.action();
        let caps = tower.caps;
        let levels = &tower.levels;
        let nesting = levels.windows(2).all(|w| w[1].subgroup.is_subgroup_of(&w[0].subgroup));
        let phi_invariant = levels.iter().all(|l| act.is_phi_invariant(&l.subgroup));
        let h_invariant = levels.iter().all(|l| act.is_h_invariant(&l.subgroup));
        let reps_h_closed = levels
            .iter()
            .all(|l| l.representatives.iter().all(|&x| l.representatives.contains(&act.h[x])));
        let parameters = levels
            .iter()
            .map(|l| self.parameter(&l.subgroup, caps.weight_cap, caps.budget, exec))
            .collect::<Result<Vec<_>, _>>()?;
        let nerav = parameters.iter().all(|p| p <= &parameters[0]);
        Ok(ATowerChecks {
            orders: levels.iter().map(|l| l.subgroup.order()).collect(),
            representatives: levels.iter().map(|l| l.representatives.len()).collect(),
            nesting,
            phi_invariant,
            h_invariant,
            reps_h_closed,
            parameters,
            nerav,
        })
    }

    /// Fixed points in `G / gamma_i` against the image of `C_G(phi)`, for every
    /// term of the lower central series.
    pub fn covering_holds(&self) -> bool {
        let act = self.action();
        self.lie.series().iter().all(|s| act.covering_holds(s))
    }
}

fn tuples_of(items: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ATowerCaps {
    /// Pattern weight and tuple length, in place of `N`.
    pub weight_cap: usize,
    pub levels: usize,
    pub budget: usize,
}

impl Default for ATowerCaps {
    fn default() -> Self {
        ATowerCaps {
            weight_cap: 2,
            levels: 1,
            budget: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ALevel {
    pub subgroup: Subgroup,
    pub table: RepTable,
    /// Group representatives, closed under `h`.
    pub representatives: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ATower {
    pub caps: ATowerCaps,
    pub levels: Vec<ALevel>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ATowerChecks {
    pub orders: Vec<usize>,
    pub representatives: Vec<usize>,
    pub nesting: bool,
    pub phi_invariant: bool,
    pub h_invariant: bool,
    pub reps_h_closed: bool,
    pub parameters: Vec<InductionParameter>,
    pub nerav: bool,
}

impl ATowerChecks {
    pub fn all_pass(&self) -> bool {
        self.nesting && self.phi_invariant && self.h_invariant && self.reps_h_closed && self.nerav
    }
}

/// `(m, m_bar, t)`, ordered by `m`, then `m_bar` inverse-lexicographically
/// (a larger entry at the first difference is smaller), then `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionParameter {
    pub m: u64,
    pub m_bar: Vec<u64>,
    pub t: u64,
}

impl Ord for InductionParameter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m
            .cmp(&other.m)
            .then_with(|| {
                self.m_bar
                    .iter()
                    .zip(&other.m_bar)
                    .map(|(a, b)| b.cmp(a))
                    .find(|o| o.is_ne())
                    .unwrap_or_else(|| self.m_bar.len().cmp(&other.m_bar.len()))
            })
            .then_with(|| self.t.cmp(&other.t))
    }
}

impl PartialOrd for InductionParameter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
