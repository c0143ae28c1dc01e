//! Truncated free Lie rings on `H`-orbits of indexed generators.
//!
//! The basis is the Lyndon basis: Lyndon words ordered by length and then
//! lexicographically, each read as a bracket through its standard
//! factorization. Structure constants are integers and are reduced into a field
//! only when a computation needs one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Elem, Field};
use crate::frobenius::FrobeniusShape;
use crate::linalg::{zero_vec, Matrix, Vector};

/// Sparse integer combination of basis elements, sorted, no zero entries.
pub type ZCombo = Vec<(usize, i64)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeLieError {
    #[error("generator base index {0} is 0 mod n")]
    ZeroIndex(u64),
    #[error("{what} = {value} exceeds the cap {cap}; the truncation would have dimension {would_be_dim}")]
    ResourceCap {
        what: &'static str,
        value: u128,
        cap: u128,
        would_be_dim: u128,
    },
    #[error("weight must be at least 1")]
    ZeroWeight,
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("bracket leaves the truncation (weight {weight} > {max_weight} or outside the orbit box)")]
    OutsideTruncation { weight: usize, max_weight: usize },
}

/// Resource limits for free Lie computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_generators: usize,
    pub max_weight: usize,
    /// Bound on the number of Lyndon words enumerated before filtering.
    pub max_dim: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_generators: 6,
            max_weight: 12,
            max_dim: 1_000_000,
        }
    }
}

pub fn mobius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the weight-`w` component of the free Lie ring on `g` generators.
pub fn witt_dimension(g: u64, w: u64) -> u128 {
    if w == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for d in 1..=w {
        if w % d == 0 {
            total += mobius(d) as i128 * (g as i128).pow((w / d) as u32);
        }
    }
    (total / w as i128) as u128
}

/// All Lyndon words of length `1..=max_len` over `0..alphabet`, in lexicographic order.
pub fn lyndon_words(alphabet: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if alphabet == 0 || max_len == 0 {
        return out;
    }
    let top = (alphabet - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Generators `y_{r^k i_s}`: `q` per orbit, generator id `s * q + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub shape: FrobeniusShape,
    /// Base index `i_s` of each orbit.
    pub bases: Vec<u64>,
}

impl GeneratorSet {
    pub fn new(shape: FrobeniusShape, bases: Vec<u64>) -> Result<Self, FreeLieError> {
        if let Some(&b) = bases.iter().find(|&&b| b % shape.n == 0) {
            return Err(FreeLieError::ZeroIndex(b));
        }
        Ok(GeneratorSet {
            shape,
            bases: bases.into_iter().map(|b| b % shape.n).collect(),
        })
    }

    /// `count` orbits whose base indices cycle through the `H`-orbit
    /// representatives of `Z/n \ {0}`.
    pub fn with_orbits(shape: FrobeniusShape, count: usize) -> Self {
        let reps = shape.orbit_representatives();
        let bases = (0..count).map(|s| reps[s % reps.len()]).collect();
        GeneratorSet { shape, bases }
    }

    pub fn q(&self) -> usize {
        self.shape.q as usize
    }

    pub fn len(&self) -> usize {
        self.bases.len() * self.q()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.bases.len()
    }

    pub fn gen(&self, orbit: usize, k: usize) -> usize {
        orbit * self.q() + k % self.q()
    }

    pub fn orbit(&self, g: usize) -> usize {
        g / self.q()
    }

    pub fn position(&self, g: usize) -> usize {
        g % self.q()
    }

    pub fn index(&self, g: usize) -> u64 {
        self.shape.r_pow(self.position(g) as u64) * self.bases[self.orbit(g)] % self.shape.n
    }

    /// Image of a generator under `h` (next element of its orbit).
    pub fn h_image(&self, g: usize) -> usize {
        self.gen(self.orbit(g), self.position(g) + 1)
    }

    pub fn name(&self, g: usize) -> String {
        format!("y{}_{}", self.orbit(g), self.index(g))
    }
}

/// A bracket expression in generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Gen(usize),
    Br(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn br(a: Tree, b: Tree) -> Tree {
        Tree::Br(Box::new(a), Box::new(b))
    }

    /// `[g_1, ..., g_w]` left-normed.
    pub fn left_normed(gens: &[usize]) -> Tree {
        Self::left_normed_trees(gens.iter().map(|&g| Tree::Gen(g)).collect())
    }

    pub fn left_normed_trees(items: Vec<Tree>) -> Tree {
        let mut it = items.into_iter();
        let first = it.next().expect("empty commutator");
        it.fold(first, Tree::br)
    }

    pub fn weight(&self) -> usize {
        match self {
            Tree::Gen(_) => 1,
            Tree::Br(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Gen(g) => out.push(*g),
            Tree::Br(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// The head and arguments of the left spine: `t = [head, args...]`.
    pub fn spine(&self) -> (&Tree, Vec<&Tree>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Tree::Br(a, b) = cur {
            args.push(&**b);
            cur = a;
        }
        args.reverse();
        (cur, args)
    }

    pub fn index_sum(&self, gens: &GeneratorSet) -> u64 {
        self.leaves().iter().map(|&g| gens.index(g)).sum::<u64>() % gens.shape.n
    }

    pub fn orbit_counts(&self, gens: &GeneratorSet) -> Vec<u8> {
        let mut c = vec![0u8; gens.orbit_count()];
        for g in self.leaves() {
            c[gens.orbit(g)] += 1;
        }
        c
    }

    /// Substitutes generators.
    pub fn map_gens(&self, m: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Gen(g) => Tree::Gen(m(*g)),
            Tree::Br(a, b) => Tree::br(a.map_gens(m), b.map_gens(m)),
        }
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        match self {
            Tree::Gen(g) => gens.name(*g),
            Tree::Br(..) => {
                let (head, args) = self.spine();
                let mut parts = vec![head.display(gens)];
                parts.extend(args.iter().map(|a| a.display(gens)));
                format!("[{}]", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Gen(g) => write!(f, "g{g}"),
            Tree::Br(a, b) => write!(f, "[{a:?},{b:?}]"),
        }
    }
}

/// A set of basis elements sharing one orbit-count vector.
#[derive(Debug, Clone)]
pub struct Block {
    pub counts: Vec<u8>,
    pub weight: usize,
    /// Global basis indices, increasing.
    pub members: Vec<usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

/// The free Lie ring on a [`GeneratorSet`] modulo everything of weight above
/// `max_weight` and, optionally, everything whose orbit counts exceed a box.
#[derive(Debug, Clone)]
pub struct FreeLieTruncation {
    gens: GeneratorSet,
    max_weight: usize,
    orbit_box: Option<Vec<u8>>,
    words: Vec<Vec<u8>>,
    factor: Vec<Option<(usize, usize)>>,
    index: Vec<u64>,
    orbit_counts: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    table: HashMap<(usize, usize), ZCombo>,
    h_images: Vec<ZCombo>,
    blocks: Vec<Block>,
    block_of_counts: HashMap<Vec<u8>, usize>,
    block_of: Vec<usize>,
    local: Vec<usize>,
}

impl FreeLieTruncation {
    pub fn new(
        gens: GeneratorSet,
        max_weight: usize,
        orbit_box: Option<Vec<u8>>,
        caps: &Caps,
    ) -> Result<Self, FreeLieError> {
        if max_weight == 0 {
            return Err(FreeLieError::ZeroWeight);
        }
        let g = gens.len();
        let would_be: u128 = (1..=max_weight as u64)
            .map(|w| witt_dimension(g as u64, w))
            .sum();
        let cap_err = |what, value: u128, cap: u128| FreeLieError::ResourceCap {
            what,
            value,
            cap,
            would_be_dim: would_be,
        };
        if g > caps.max_generators {
            return Err(cap_err("generators", g as u128, caps.max_generators as u128));
        }
        if max_weight > caps.max_weight {
            return Err(cap_err("weight", max_weight as u128, caps.max_weight as u128));
        }
        if would_be > caps.max_dim {
            return Err(cap_err("dimension", would_be, caps.max_dim));
        }
        let counts_of = |w: &[u8]| {
            let mut c = vec![0u8; gens.orbit_count()];
            for &x in w {
                c[gens.orbit(x as usize)] += 1;
            }
            c
        };
        let in_box = |c: &[u8]| match &orbit_box {
            Some(b) => c.iter().zip(b).all(|(x, y)| x <= y),
            None => true,
        };
        let mut words: Vec<Vec<u8>> = lyndon_words(g, max_weight)
            .into_iter()
            .filter(|w| in_box(&counts_of(w)))
            .collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let lookup: HashMap<Vec<u8>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let factor = words
            .iter()
            .map(|w| {
                (1..w.len()).find_map(|i| {
                    lookup
                        .get(&w[i..])
                        .map(|&v| (lookup[&w[..i]], v))
                })
            })
            .collect();
        let index = words
            .iter()
            .map(|w| w.iter().map(|&x| gens.index(x as usize)).sum::<u64>() % gens.shape.n)
            .collect();
        let orbit_counts: Vec<Vec<u8>> = words.iter().map(|w| counts_of(w)).collect();

        let mut block_of_counts: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut blocks: Vec<Block> = Vec::new();
        let mut block_of = Vec::with_capacity(words.len());
        let mut local = Vec::with_capacity(words.len());
        for (i, c) in orbit_counts.iter().enumerate() {
            let b = *block_of_counts.entry(c.clone()).or_insert_with(|| {
                blocks.push(Block {
                    counts: c.clone(),
                    weight: c.iter().map(|&x| x as usize).sum(),
                    members: Vec::new(),
                });
                blocks.len() - 1
            });
            local.push(blocks[b].members.len());
            blocks[b].members.push(i);
            block_of.push(b);
        }

        let mut t = FreeLieTruncation {
            gens,
            max_weight,
            orbit_box,
            words,
            factor,
            index,
            orbit_counts,
            lookup,
            table: HashMap::new(),
            h_images: Vec::new(),
            blocks,
            block_of_counts,
            block_of,
            local,
        };
        t.build_table();
        t.build_h_images();
        Ok(t)
    }

    fn build_table(&mut self) {
        let n = self.words.len();
        let mut memo: HashMap<(usize, usize), ZCombo> = HashMap::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.words[a].len() + self.words[b].len() > self.max_weight {
                    break;
                }
                if !self.sum_in_box(a, b) {
                    continue;
                }
                let v = self.rewrite(a, b, &mut memo);
                if !v.is_empty() {
                    self.table.insert((a, b), v);
                }
            }
        }
    }

    fn sum_in_box(&self, a: usize, b: usize) -> bool {
        match &self.orbit_box {
            None => true,
            Some(bx) => self.orbit_counts[a]
                .iter()
                .zip(&self.orbit_counts[b])
                .zip(bx)
                .all(|((x, y), m)| x + y <= *m),
        }
    }

    /// `[a, b]` by Lyndon rewriting, before truncation tables exist.
    fn rewrite(&self, a: usize, b: usize, memo: &mut HashMap<(usize, usize), ZCombo>) -> ZCombo {
        if a == b {
            return Vec::new();
        }
        if self.words[a].len() + self.words[b].len() > self.max_weight || !self.sum_in_box(a, b) {
            return Vec::new();
        }
        if self.words[a] > self.words[b] {
            return negate(&self.rewrite(b, a, memo));
        }
        if let Some(v) = memo.get(&(a, b)) {
            return v.clone();
        }
        let direct = match self.factor[a] {
            None => true,
            Some((_, a2)) => self.words[a2] >= self.words[b],
        };
        let result = if direct {
            let mut w = self.words[a].clone();
            w.extend_from_slice(&self.words[b]);
            vec![(self.lookup[&w], 1)]
        } else {
            let (a1, a2) = self.factor[a].unwrap();
            // [[a1, a2], b] = [[a1, b], a2] + [a1, [a2, b]]
            let mut acc = BTreeMap::new();
            for (x, c) in self.rewrite(a1, b, memo) {
                for (y, d) in self.rewrite(x, a2, memo) {
                    *acc.entry(y).or_insert(0) += c * d;
                }
            }
            for (x, c) in self.rewrite(a2, b, memo) {
                for (y, d) in self.rewrite(a1, x, memo) {
                    *acc.entry(y).or_insert(0) += c * d;
                }
            }
            acc.into_iter().filter(|&(_, c)| c != 0).collect()
        };
        memo.insert((a, b), result.clone());
        result
    }

    fn build_h_images(&mut self) {
        let mut images: Vec<ZCombo> = Vec::with_capacity(self.words.len());
        for i in 0..self.words.len() {
            let img = match self.factor[i] {
                None => {
                    let g = self.words[i][0] as usize;
                    vec![(self.generator(self.gens.h_image(g)), 1)]
                }
                Some((a, b)) => self.bracket_combos(&images[a], &images[b]),
            };
            images.push(img);
        }
        self.h_images = images;
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn orbit_box(&self) -> Option<&[u8]> {
        self.orbit_box.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    /// Index sum mod `n`.
    pub fn index(&self, i: usize) -> u64 {
        self.index[i]
    }

    pub fn orbit_counts(&self, i: usize) -> &[u8] {
        &self.orbit_counts[i]
    }

    /// Multiplicity of each generator.
    pub fn content(&self, i: usize) -> Vec<u8> {
        let mut c = vec![0u8; self.gens.len()];
        for &x in &self.words[i] {
            c[x as usize] += 1;
        }
        c
    }

    pub fn standard_factorization(&self, i: usize) -> Option<(usize, usize)> {
        self.factor[i]
    }

    /// Basis index of a generator.
    pub fn generator(&self, g: usize) -> usize {
        self.lookup[&vec![g as u8]]
    }

    /// Basis element as a bracket tree.
    pub fn tree(&self, i: usize) -> Tree {
        match self.factor[i] {
            None => Tree::Gen(self.words[i][0] as usize),
            Some((a, b)) => Tree::br(self.tree(a), self.tree(b)),
        }
    }

    pub fn dims_by_weight(&self) -> Vec<usize> {
        let mut d = vec![0; self.max_weight];
        for w in &self.words {
            d[w.len() - 1] += 1;
        }
        d
    }

    /// `[b_a, b_b]` in the truncation.
    pub fn basis_bracket(&self, a: usize, b: usize) -> ZCombo {
        if a == b {
            return Vec::new();
        }
        if a < b {
            self.table.get(&(a, b)).cloned().unwrap_or_default()
        } else {
            negate(&self.table.get(&(b, a)).cloned().unwrap_or_default())
        }
    }

    pub fn bracket_combos(&self, x: &ZCombo, y: &ZCombo) -> ZCombo {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(a, c) in x {
            for &(b, d) in y {
                if a == b {
                    continue;
                }
                let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
                if let Some(v) = self.table.get(&(lo, hi)) {
                    for &(k, e) in v {
                        *acc.entry(k).or_insert(0) += s * c * d * e;
                    }
                }
            }
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// Value of a bracket tree. Trees leaving the truncation evaluate to 0.
    pub fn eval(&self, t: &Tree) -> ZCombo {
        match t {
            Tree::Gen(g) => vec![(self.generator(*g), 1)],
            Tree::Br(a, b) => {
                let x = self.eval(a);
                if x.is_empty() {
                    return x;
                }
                self.bracket_combos(&x, &self.eval(b))
            }
        }
    }

    /// Image of a basis element under `h`.
    pub fn h_image(&self, i: usize) -> &ZCombo {
        &self.h_images[i]
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, counts: &[u8]) -> Option<usize> {
        self.block_of_counts.get(counts).copied()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn local_index(&self, i: usize) -> usize {
        self.local[i]
    }

    /// Block-local dense vector of a combination lying in block `b`.
    pub fn to_local(&self, f: &Field, b: usize, x: &ZCombo) -> Vector {
        let mut v = zero_vec(self.blocks[b].dim());
        for &(i, c) in x {
            assert_eq!(self.block_of[i], b, "combination leaves its block");
            v[self.local[i]] = f.add(v[self.local[i]], f.from_i64(c));
        }
        v
    }

    /// `[x, y]` for `x` in block `bx` and `y` in block `by` (local coordinates).
    /// Returns `None` when the target block is outside the truncation.
    pub fn bracket_local(
        &self,
        f: &Field,
        bx: usize,
        x: &[Elem],
        by: usize,
        y: &[Elem],
    ) -> Option<(usize, Vector)> {
        let counts: Vec<u8> = self.blocks[bx]
            .counts
            .iter()
            .zip(&self.blocks[by].counts)
            .map(|(a, b)| a + b)
            .collect();
        let target = self.block(&counts)?;
        let mut out = zero_vec(self.blocks[target].dim());
        let mx = &self.blocks[bx].members;
        let my = &self.blocks[by].members;
        for (i, &cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (j, &cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                let (a, b) = (mx[i], my[j]);
                if a == b {
                    continue;
                }
                let (lo, hi, neg) = if a < b { (a, b, false) } else { (b, a, true) };
                let Some(v) = self.table.get(&(lo, hi)) else {
                    continue;
                };
                let mut c = f.mul(cx, cy);
                if neg {
                    c = f.neg(c);
                }
                for &(k, e) in v {
                    let l = self.local[k];
                    out[l] = f.add(out[l], f.mul(c, f.from_i64(e)));
                }
            }
        }
        Some((target, out))
    }

    /// Matrix of `h` on a block, acting on the right of local row vectors.
    pub fn h_matrix(&self, f: &Field, b: usize) -> Matrix {
        let rows: Vec<Vector> = self.blocks[b]
            .members
            .iter()
            .map(|&i| self.to_local(f, b, &self.h_images[i]))
            .collect();
        Matrix::from_rows(self.blocks[b].dim(), &rows)
    }

    /// Diagonal matrix of `phi` on a block: basis element of index `i` scales by `omega^i`.
    pub fn phi_matrix(&self, f: &Field, omega: Elem, b: usize) -> Matrix {
        let diag: Vec<Elem> = self.blocks[b]
            .members
            .iter()
            .map(|&i| f.pow(omega, self.index[i] as i64))
            .collect();
        Matrix::diagonal(&diag)
    }

    /// Members of block `b` with index sum `k`, as local positions.
    pub fn index_positions(&self, b: usize, k: u64) -> Vec<usize> {
        self.blocks[b]
            .members
            .iter()
            .enumerate()
            .filter(|(_, &i)| self.index[i] == k % self.gens.shape.n)
            .map(|(l, _)| l)
            .collect()
    }

    /// Blocks in order of weight, grouped by weight.
    pub fn blocks_by_weight(&self) -> Vec<Vec<usize>> {
        let mut by = vec![Vec::new(); self.max_weight + 1];
        for (b, blk) in self.blocks.iter().enumerate() {
            by[blk.weight].push(b);
        }
        by
    }
}

pub fn negate(x: &ZCombo) -> ZCombo {
    x.iter().map(|&(i, c)| (i, -c)).collect()
}
