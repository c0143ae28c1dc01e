//! Quotients of truncated free Lie rings by the ideals `J` and `I`.
//!
//! `J` is the ideal generated by the index-0 component `K_0`. `I` is the least
//! `F`-invariant ideal containing `gamma_{c+1}(C_K(H))`. Everything is computed
//! block by block, a block being the span of basis elements with one
//! orbit-count vector; blocks are `phi`- and `h`-invariant and brackets add
//! orbit counts, so every ideal here splits along blocks.

use std::sync::Arc;

use serde::Serialize;

use crate::exec::Exec;
use crate::field::{is_prime, Elem, Field};
use crate::freelie::{Caps, FreeLieError, FreeLieTruncation, GeneratorSet};
use crate::frobenius::{FrobeniusAction, FrobeniusError, FrobeniusShape};
use crate::lie::LieRing;
use crate::linalg::{self, Matrix, Subspace, Vector};

/// Smallest prime `p` with `p` coprime to `n q` and `n | p - 1`.
pub fn default_prime(shape: FrobeniusShape) -> u32 {
    (2u32..)
        .find(|&p| {
            is_prime(p) && (shape.n * shape.q) % p as u64 != 0 && (p as u64 - 1) % shape.n == 0
        })
        .expect("Dirichlet")
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientParams {
    pub gens: GeneratorSet,
    pub max_weight: usize,
    /// Impose `gamma_{c+1}(C(H)) = 0` via the ideal `I`.
    pub c: Option<usize>,
    /// Quotient by `J`, making the index-0 component vanish.
    pub kill_zero_component: bool,
    pub p: u32,
    pub caps: Caps,
}

impl QuotientParams {
    /// The universal quotient `K / (J + I)`.
    pub fn universal(shape: FrobeniusShape, orbits: usize, c: usize, max_weight: usize) -> Self {
        QuotientParams {
            gens: GeneratorSet::with_orbits(shape, orbits),
            max_weight,
            c: Some(c),
            kill_zero_component: true,
            p: default_prime(shape),
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone)]
struct BlockData {
    /// Fixed points of `h`.
    fixed: Subspace,
    /// `gamma_1 .. gamma_{c+1}` of `C_K(H)` in this block.
    gamma: Vec<Subspace>,
    j: Subspace,
    i: Subspace,
    ji: Subspace,
}

/// `K / (J + I)` (either ideal optional) truncated at a weight.
#[derive(Debug, Clone)]
pub struct FreeQuotient {
    params: QuotientParams,
    trunc: Arc<FreeLieTruncation>,
    field: Arc<Field>,
    omega: Elem,
    blocks: Vec<BlockData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEstimate {
    /// Nilpotency class of the quotient if it stabilized, otherwise the
    /// truncation weight (a lower bound).
    pub class: usize,
    pub stabilized: bool,
    pub dims_by_weight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientChecks {
    /// Dimension of the image of `K_0` per weight.
    pub m0_dims: Vec<usize>,
    /// Dimension of `gamma_{c+1}(C_M(H))` per weight.
    pub gamma_dims: Vec<usize>,
    pub j_invariant: bool,
    pub i_invariant: bool,
    pub theta_invariant: bool,
}

impl QuotientChecks {
    pub fn all_pass(&self) -> bool {
        self.m0_dims.iter().all(|&d| d == 0)
            && self.gamma_dims.iter().all(|&d| d == 0)
            && self.j_invariant
            && self.i_invariant
            && self.theta_invariant
    }
}

impl FreeQuotient {
    pub fn build(params: QuotientParams, exec: Exec) -> Result<Self, FreeLieError> {
        let trunc = Arc::new(FreeLieTruncation::new(
            params.gens.clone(),
            params.max_weight,
            None,
            &params.caps,
        )?);
        Self::build_on(params, trunc, exec)
    }

    /// Builds on an existing truncation (which may carry an orbit box).
    pub fn build_on(
        params: QuotientParams,
        trunc: Arc<FreeLieTruncation>,
        exec: Exec,
    ) -> Result<Self, FreeLieError> {
        let shape = params.gens.shape;
        let field = Arc::new(
            Field::with_root_of_unity(params.p, shape.n)
                .expect("prime must admit an n-th root of unity"),
        );
        let omega = field.primitive_root_of_unity(shape.n).unwrap();
        let mut q = FreeQuotient {
            params,
            trunc,
            field,
            omega,
            blocks: Vec::new(),
        };
        let by_weight = q.trunc.blocks_by_weight();
        let mut slots: Vec<Option<BlockData>> = vec![None; q.trunc.blocks().len()];
        for layer in by_weight.iter() {
            let done = &slots;
            let results = exec.map(layer, |&b| q.compute_block(b, done));
            for (&b, data) in layer.iter().zip(results) {
                slots[b] = Some(data);
            }
        }
        q.blocks = slots.into_iter().map(|s| s.unwrap()).collect();
        Ok(q)
    }

    /// Blocks `(b1, b2)` with `counts(b1) + counts(b2) = counts(b)` and both nonzero.
    fn splittings(&self, b: usize) -> Vec<(usize, usize)> {
        let t = &*self.trunc;
        let target = &t.blocks()[b].counts;
        let mut out = Vec::new();
        for (b1, blk) in t.blocks().iter().enumerate() {
            if blk.weight >= t.blocks()[b].weight {
                continue;
            }
            if blk.counts.iter().zip(target).any(|(x, y)| x > y) {
                continue;
            }
            let rest: Vec<u8> = target.iter().zip(&blk.counts).map(|(y, x)| y - x).collect();
            if let Some(b2) = t.block(&rest) {
                out.push((b1, b2));
            }
        }
        out
    }

    /// `(generator block, generator local vector, lower block)` triples whose
    /// brackets land in block `b`: `[lower, y]`.
    fn generator_splittings(&self, b: usize) -> Vec<(usize, usize, usize)> {
        let t = &*self.trunc;
        let target = &t.blocks()[b].counts;
        let mut out = Vec::new();
        for g in 0..t.gens().len() {
            let o = t.gens().orbit(g);
            if target[o] == 0 {
                continue;
            }
            let mut rest = target.clone();
            rest[o] -= 1;
            if rest.iter().all(|&x| x == 0) {
                continue;
            }
            let gi = t.generator(g);
            if let Some(lower) = t.block(&rest) {
                out.push((t.block_of(gi), t.local_index(gi), lower));
            }
        }
        out
    }

    fn compute_block(&self, b: usize, done: &[Option<BlockData>]) -> BlockData {
        let f = &*self.field;
        let t = &*self.trunc;
        let dim = t.blocks()[b].dim();
        let hm = t.h_matrix(f, b);
        let fixed = hm.sub(f, &Matrix::identity(dim)).left_kernel(f);
        let levels = self.params.c.map_or(0, |c| c + 1);
        let mut gamma = Vec::with_capacity(levels);
        if levels > 0 {
            gamma.push(fixed.clone());
        }
        let splits = self.splittings(b);
        for k in 1..levels {
            let mut s = Subspace::zero(dim);
            for &(b1, b2) in &splits {
                let g1 = &done[b1].as_ref().unwrap().gamma[k - 1];
                let c2 = &done[b2].as_ref().unwrap().fixed;
                for x in g1.basis() {
                    for y in c2.basis() {
                        let (tb, v) = t.bracket_local(f, b1, x, b2, y).unwrap();
                        debug_assert_eq!(tb, b);
                        s.insert(f, &v);
                    }
                }
            }
            gamma.push(s);
        }
        let gen_splits = self.generator_splittings(b);
        let ideal_step = |seed: Subspace, pick: &dyn Fn(&BlockData) -> &Subspace| {
            let mut s = seed;
            for &(gb, gl, lower) in &gen_splits {
                let y = linalg::unit_vec(t.blocks()[gb].dim(), gl);
                for x in pick(done[lower].as_ref().unwrap()).basis() {
                    let (_, v) = t.bracket_local(f, lower, x, gb, &y).unwrap();
                    s.insert(f, &v);
                }
            }
            s
        };
        let j = if self.params.kill_zero_component {
            let seed: Vec<Vector> = t
                .index_positions(b, 0)
                .into_iter()
                .map(|l| linalg::unit_vec(dim, l))
                .collect();
            ideal_step(Subspace::span(f, dim, &seed), &|d| &d.j)
        } else {
            Subspace::zero(dim)
        };
        let i = if levels > 0 {
            let seed: Vec<Vector> = gamma[levels - 1]
                .basis()
                .iter()
                .flat_map(|v| self.index_parts(b, v))
                .collect();
            ideal_step(Subspace::span(f, dim, &seed), &|d| &d.i)
        } else {
            Subspace::zero(dim)
        };
        let ji = j.sum(f, &i);
        BlockData {
            fixed,
            gamma,
            j,
            i,
            ji,
        }
    }

    /// Nonzero index-homogeneous parts of a block vector (its `F`-closure).
    fn index_parts(&self, b: usize, v: &[Elem]) -> Vec<Vector> {
        let t = &*self.trunc;
        (0..t.gens().shape.n)
            .map(|k| {
                let mut w = linalg::zero_vec(v.len());
                for l in t.index_positions(b, k) {
                    w[l] = v[l];
                }
                w
            })
            .filter(|w| !linalg::is_zero(w))
            .collect()
    }

    pub fn params(&self) -> &QuotientParams {
        &self.params
    }

    pub fn truncation(&self) -> &Arc<FreeLieTruncation> {
        &self.trunc
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    pub fn shape(&self) -> FrobeniusShape {
        self.params.gens.shape
    }

    pub fn j(&self, b: usize) -> &Subspace {
        &self.blocks[b].j
    }

    pub fn i(&self, b: usize) -> &Subspace {
        &self.blocks[b].i
    }

    pub fn j_plus_i(&self, b: usize) -> &Subspace {
        &self.blocks[b].ji
    }

    pub fn fixed(&self, b: usize) -> &Subspace {
        &self.blocks[b].fixed
    }

    pub fn gamma_top(&self, b: usize) -> Option<&Subspace> {
        self.blocks[b].gamma.last()
    }

    pub fn m_dim(&self, b: usize) -> usize {
        self.blocks[b].ji.codim()
    }

    pub fn dims_by_weight(&self) -> Vec<usize> {
        let mut d = vec![0; self.params.max_weight];
        for (b, blk) in self.trunc.blocks().iter().enumerate() {
            d[blk.weight - 1] += self.m_dim(b);
        }
        d
    }

    /// The quotient is generated in weight 1, so its class is the last weight
    /// before the first vanishing component.
    pub fn class_estimate(&self) -> ClassEstimate {
        let dims = self.dims_by_weight();
        match dims.iter().position(|&d| d == 0) {
            Some(w) => {
                debug_assert!(dims[w..].iter().all(|&d| d == 0));
                ClassEstimate {
                    class: w,
                    stabilized: true,
                    dims_by_weight: dims,
                }
            }
            None => ClassEstimate {
                class: self.params.max_weight,
                stabilized: false,
                dims_by_weight: dims,
            },
        }
    }

    /// Independent checks of the defining properties of `J`, `I` and `M`.
    pub fn checks(&self, exec: Exec) -> QuotientChecks {
        let f = &*self.field;
        let t = &*self.trunc;
        let nb = t.blocks().len();
        let w = self.params.max_weight;
        let mut m0_dims = vec![0; w];
        for b in 0..nb {
            let dim = t.blocks()[b].dim();
            let mut s = Subspace::zero(dim);
            for l in t.index_positions(b, 0) {
                s.insert(f, &self.blocks[b].ji.reduce(f, &linalg::unit_vec(dim, l)));
            }
            m0_dims[t.blocks()[b].weight - 1] += s.dim();
        }

        let invariant = |pick: &(dyn Fn(&BlockData) -> &Subspace + Sync)| {
            exec.map_range(nb, |b| {
                let s = pick(&self.blocks[b]);
                s.is_invariant(f, &t.h_matrix(f, b))
                    && s.is_invariant(f, &t.phi_matrix(f, self.omega, b))
            })
            .into_iter()
            .all(|x| x)
        };
        let j_invariant = invariant(&|d| &d.j);
        let i_invariant = invariant(&|d| &d.i);
        let theta_invariant = (0..nb).all(|b| {
            let s = &self.blocks[b].i;
            let counts = &t.blocks()[b].counts;
            (0..t.gens().orbit_count()).all(|o| {
                s.basis().iter().all(|v| {
                    let img = if counts[o] > 0 {
                        linalg::zero_vec(v.len())
                    } else {
                        v.clone()
                    };
                    s.contains(f, &img)
                })
            })
        });

        let mut gamma_dims = vec![0; w];
        if let Some(c) = self.params.c {
            // fixed points of h computed in the quotient itself
            let cm: Vec<Subspace> = exec.map_range(nb, |b| self.quotient_fixed(b));
            let mut level = cm.clone();
            for _ in 0..c {
                let mut next = Vec::with_capacity(nb);
                for b in 0..nb {
                    let dim = t.blocks()[b].dim();
                    let mut s = Subspace::zero(dim);
                    for (b1, b2) in self.splittings(b) {
                        for x in level[b1].basis() {
                            for y in cm[b2].basis() {
                                let (_, v) = t.bracket_local(f, b1, x, b2, y).unwrap();
                                s.insert(f, &self.blocks[b].ji.reduce(f, &v));
                            }
                        }
                    }
                    next.push(s);
                }
                level = next;
            }
            for b in 0..nb {
                gamma_dims[t.blocks()[b].weight - 1] += level[b].dim();
            }
        }
        QuotientChecks {
            m0_dims,
            gamma_dims,
            j_invariant,
            i_invariant,
            theta_invariant,
        }
    }

    /// Fixed points of the induced `h` on the quotient block, lifted to reduced
    /// representatives.
    fn quotient_fixed(&self, b: usize) -> Subspace {
        let f = &*self.field;
        let t = &*self.trunc;
        let dim = t.blocks()[b].dim();
        let ji = &self.blocks[b].ji;
        let keep = ji.non_pivots();
        let hm = t.h_matrix(f, b);
        let rows: Vec<Vector> = keep
            .iter()
            .map(|&c| {
                let img = ji.reduce(f, &hm.apply(f, &linalg::unit_vec(dim, c)));
                keep.iter().map(|&k| img[k]).collect()
            })
            .collect();
        let induced = Matrix::from_rows(keep.len(), &rows);
        let fixed = induced
            .sub(f, &Matrix::identity(keep.len()))
            .left_kernel(f);
        let lifted: Vec<Vector> = fixed
            .basis()
            .iter()
            .map(|coef| {
                let mut v = linalg::zero_vec(dim);
                for (&k, &c) in keep.iter().zip(coef) {
                    v[k] = c;
                }
                v
            })
            .collect();
        Subspace::span(f, dim, &lifted)
    }

    /// The quotient as a Lie ring with its induced `FH`-action.
    pub fn to_ring(&self) -> Result<QuotientRing, FrobeniusError> {
        let f = &*self.field;
        let t = &*self.trunc;
        let mut offsets = Vec::new();
        let mut names = Vec::new();
        let mut keeps = Vec::new();
        let mut total = 0;
        for (b, blk) in t.blocks().iter().enumerate() {
            let keep = self.blocks[b].ji.non_pivots();
            offsets.push(total);
            for &l in &keep {
                names.push(t.tree(blk.members[l]).display(t.gens()));
            }
            total += keep.len();
            keeps.push(keep);
        }
        let to_global = |b: usize, v: &[Elem], out: &mut Vector| {
            let r = self.blocks[b].ji.reduce(f, v);
            for (a, &k) in keeps[b].iter().enumerate() {
                out[offsets[b] + a] = r[k];
            }
        };
        let mut elems: Vec<(usize, usize)> = Vec::new();
        for (b, keep) in keeps.iter().enumerate() {
            for &l in keep {
                elems.push((b, l));
            }
        }
        let mut brackets = Vec::new();
        for x in 0..total {
            for y in x + 1..total {
                let (b1, l1) = elems[x];
                let (b2, l2) = elems[y];
                let d1 = t.blocks()[b1].dim();
                let d2 = t.blocks()[b2].dim();
                if let Some((tb, v)) = t.bracket_local(
                    f,
                    b1,
                    &linalg::unit_vec(d1, l1),
                    b2,
                    &linalg::unit_vec(d2, l2),
                ) {
                    let mut out = linalg::zero_vec(total);
                    to_global(tb, &v, &mut out);
                    if !linalg::is_zero(&out) {
                        brackets.push((x, y, out));
                    }
                }
            }
        }
        let ring = Arc::new(LieRing::from_upper_brackets(
            self.field.clone(),
            total,
            brackets,
        ));
        let mut phi = Matrix::zeros(total, total);
        let mut h = Matrix::zeros(total, total);
        for (x, &(b, l)) in elems.iter().enumerate() {
            let d = t.blocks()[b].dim();
            let e = linalg::unit_vec(d, l);
            let mut row = linalg::zero_vec(total);
            to_global(b, &t.h_matrix(f, b).apply(f, &e), &mut row);
            h.row_mut(x).copy_from_slice(&row);
            let idx = t.index(t.blocks()[b].members[l]);
            phi.set(x, x, f.pow(self.omega, idx as i64));
        }
        let action = FrobeniusAction::new(ring, self.shape(), self.omega, phi, h)?;
        Ok(QuotientRing { action, names })
    }
}

/// A quotient realized as a concrete Lie ring with `FH`-action.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    pub action: FrobeniusAction,
    pub names: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes() {
        assert_eq!(default_prime(FrobeniusShape::new(3, 2, 2).unwrap()), 7);
        assert_eq!(default_prime(FrobeniusShape::new(7, 3, 2).unwrap()), 29);
    }

    #[test]
    fn universal_322_is_abelian() {
        let shape = FrobeniusShape::new(3, 2, 2).unwrap();
        let q = FreeQuotient::build(QuotientParams::universal(shape, 1, 1, 6), Exec::Sequential)
            .unwrap();
        let est = q.class_estimate();
        assert_eq!(est.dims_by_weight, vec![2, 0, 0, 0, 0, 0]);
        assert_eq!(est.class, 1);
        assert!(est.stabilized);
        assert!(q.checks(Exec::Sequential).all_pass());
    }

    #[test]
    fn without_ideals_the_quotient_is_the_truncation() {
        let shape = FrobeniusShape::new(3, 2, 2).unwrap();
        let params = QuotientParams {
            gens: GeneratorSet::with_orbits(shape, 1),
            max_weight: 4,
            c: None,
            kill_zero_component: false,
            p: 7,
            caps: Caps::default(),
        };
        let q = FreeQuotient::build(params, Exec::Sequential).unwrap();
        assert_eq!(q.dims_by_weight(), vec![2, 1, 2, 3]);
        let r = q.to_ring().unwrap();
        assert!(r.action.ring().to_table().validate().unwrap().is_empty());
        assert_eq!(r.action.ring().nilpotency().class(), Some(4));
    }
}
