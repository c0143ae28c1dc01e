//! KMS-transformations as certified linear algebra.
//!
//! A simple commutator in the generators is rewritten, modulo the ideal `I`, as
//! a combination of commutators of a target form with the same number of
//! entries from each `H`-orbit. The coefficients come from solving a membership
//! problem inside one orbit-count block; the equality is then re-checked by
//! expanding both sides in the Lyndon basis.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{Elem, Field};
use crate::freelie::{Caps, FreeLieError, FreeLieTruncation, GeneratorSet, Tree};
use crate::frobenius::{FrobeniusAction, FrobeniusShape};
use crate::linalg::{self, Subspace, TrackedSpan, Vector};
use crate::universal::{default_prime, FreeQuotient, QuotientParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KmsError {
    #[error("commutator has an entry with index 0 or an unknown generator")]
    BadEntry,
    #[error("commutator must have weight at least 2")]
    TooShort,
    #[error("initial segment length {t} is not in 2..={len}")]
    BadSegment { t: usize, len: usize },
    #[error("no target-form combination reaches the commutator modulo I in block {counts:?} (weight {weight})")]
    Infeasible { counts: Vec<u8>, weight: usize },
    #[error("equality modulo I failed to verify in block {counts:?}")]
    Unverified { counts: Vec<u8> },
    #[error("{targets} target commutators exceed the budget {budget}")]
    Budget { targets: usize, budget: usize },
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
}

/// A combination of bracket trees with field coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(Elem, Tree)>,
}

/// Free Lie ring on `orbits` generator orbits with the ideal `I` for class `c`.
#[derive(Debug, Clone)]
pub struct KmsEngine {
    quotient: FreeQuotient,
    /// Upper bound on target commutators per solve.
    pub budget: usize,
}

impl KmsEngine {
    pub fn new(
        gens: GeneratorSet,
        c: usize,
        max_weight: usize,
        orbit_box: Option<Vec<u8>>,
        p: Option<u32>,
        caps: Caps,
        exec: Exec,
    ) -> Result<Self, KmsError> {
        let shape = gens.shape;
        let params = QuotientParams {
            gens: gens.clone(),
            max_weight,
            c: Some(c),
            kill_zero_component: false,
            p: p.unwrap_or_else(|| default_prime(shape)),
            caps,
        };
        let trunc = Arc::new(FreeLieTruncation::new(gens, max_weight, orbit_box, &caps)?);
        let quotient = FreeQuotient::build_on(params, trunc, exec)?;
        Ok(KmsEngine {
            quotient,
            budget: 200_000,
        })
    }

    pub fn quotient(&self) -> &FreeQuotient {
        &self.quotient
    }

    pub fn gens(&self) -> &GeneratorSet {
        self.quotient.truncation().gens()
    }

    pub fn shape(&self) -> FrobeniusShape {
        self.gens().shape
    }

    pub fn field(&self) -> &Arc<Field> {
        self.quotient.field()
    }

    fn trunc(&self) -> &FreeLieTruncation {
        self.quotient.truncation()
    }

    fn check_word(&self, word: &[usize]) -> Result<(), KmsError> {
        if word.len() < 2 {
            return Err(KmsError::TooShort);
        }
        if word.iter().any(|&g| g >= self.gens().len()) {
            return Err(KmsError::BadEntry);
        }
        Ok(())
    }

    /// Block index and local vector of a tree's value.
    fn block_vector(&self, t: &Tree) -> Result<(usize, Vector), KmsError> {
        let tr = self.trunc();
        let counts = t.orbit_counts(self.gens());
        let weight = t.weight();
        let b = tr.block(&counts).ok_or(KmsError::FreeLie(FreeLieError::OutsideTruncation {
            weight,
            max_weight: tr.max_weight(),
        }))?;
        Ok((b, tr.to_local(self.field(), b, &tr.eval(t))))
    }

    /// Whether `lhs - sum(terms)` lies in `I`.
    pub fn congruent_mod_i(&self, lhs: &Tree, rhs: &Combination) -> Result<bool, KmsError> {
        let f = &**self.field();
        let (b, mut v) = self.block_vector(lhs)?;
        for (c, t) in &rhs.terms {
            let (bt, w) = self.block_vector(t)?;
            if bt != b {
                return Ok(false);
            }
            linalg::axpy(f, &mut v, f.neg(*c), &w);
        }
        Ok(self.quotient.i(b).contains(f, &v))
    }

    /// Solves `input = sum a_k targets_k (mod I)` preferring earlier targets.
    fn solve(&self, input: &Tree, targets: &[Tree]) -> Result<Combination, KmsError> {
        let f = &**self.field();
        let counts = input.orbit_counts(self.gens());
        let (b, v) = self.block_vector(input)?;
        let ideal: &Subspace = self.quotient.i(b);
        let dim = v.len();
        let mut span = TrackedSpan::new(dim);
        let offset = ideal.dim();
        for (k, x) in ideal.basis().iter().enumerate() {
            span.insert(f, k, x);
        }
        let mut done = span.express(f, &v).is_some();
        for (k, t) in targets.iter().enumerate() {
            if done || span.is_full() {
                break;
            }
            let (bt, w) = self.block_vector(t)?;
            debug_assert_eq!(bt, b);
            if span.insert(f, offset + k, &w) && k % 8 == 7 {
                done = span.express(f, &v).is_some();
            }
        }
        let combo = span.express(f, &v).ok_or(KmsError::Infeasible {
            counts: counts.clone(),
            weight: input.weight(),
        })?;
        let terms = combo
            .into_iter()
            .filter(|&(s, _)| s >= offset)
            .map(|(s, c)| (c, targets[s - offset].clone()))
            .collect();
        Ok(Combination { terms })
    }

    /// Rewrites `[y_{w_1}, ..., y_{w_l}]` as a combination of simple commutators
    /// over the same orbits, each with a zero-sum initial segment, modulo `I`.
    /// With `segment = Some(t)` only the first `t` entries are transformed and the
    /// rest are appended to every output term.
    pub fn kms_transform(&self, word: &[usize], segment: Option<usize>) -> Result<Combination, KmsError> {
        self.check_word(word)?;
        let gens = self.gens();
        if zero_prefixes(word, gens).next().is_some() {
            return Ok(Combination {
                terms: vec![(Elem::ONE, Tree::left_normed(word))],
            });
        }
        let t = segment.unwrap_or(word.len());
        if t < 2 || t > word.len() {
            return Err(KmsError::BadSegment { t, len: word.len() });
        }
        let (head, tail) = word.split_at(t);
        let counts = Tree::left_normed(head).orbit_counts(gens);
        let mut targets = Vec::new();
        for_each_arrangement(gens, &counts, &mut |w| {
            if w[0] != w[1] && zero_prefixes(w, gens).next().is_some() {
                targets.push(Tree::left_normed(w));
            }
        });
        if targets.len() > self.budget {
            return Err(KmsError::Budget {
                targets: targets.len(),
                budget: self.budget,
            });
        }
        let head_combo = self.solve(&Tree::left_normed(head), &targets)?;
        let terms = head_combo
            .terms
            .into_iter()
            .map(|(c, tr)| {
                let mut leaves = tr.leaves();
                leaves.extend_from_slice(tail);
                (c, Tree::left_normed(&leaves))
            })
            .collect();
        let out = Combination { terms };
        if !self.congruent_mod_i(&Tree::left_normed(word), &out)? {
            return Err(KmsError::Unverified {
                counts: Tree::left_normed(word).orbit_counts(gens),
            });
        }
        Ok(out)
    }

    /// Rewrites a simple commutator modulo `I` as a combination of terms each
    /// containing a subcommutator with `t1` zero-sum initial segments or one of
    /// the form `[u, c_1, ..., c_{t2}]` with zero-sum commutators `c_i`.
    pub fn iterated_kms(&self, word: &[usize], t1: usize, t2: usize) -> Result<Combination, KmsError> {
        self.check_word(word)?;
        if t1 <= 1 {
            return self.kms_transform(word, None);
        }
        let gens = self.gens();
        let input = Tree::left_normed(word);
        if scan(&input, gens, t1, t2).is_some_and(|w| w.is_strict()) {
            return Ok(Combination {
                terms: vec![(Elem::ONE, input)],
            });
        }
        let counts = input.orbit_counts(gens);
        let mut seen = BTreeSet::new();
        let mut targets = Vec::new();
        let mut overflow = false;
        for_each_arrangement(gens, &counts, &mut |w| {
            if overflow {
                return;
            }
            if w[0] != w[1] && zero_prefixes(w, gens).count() >= t1 {
                let t = Tree::left_normed(w);
                if seen.insert(t.clone()) {
                    targets.push(t);
                }
            }
            for t in f2_shapes(w, gens, t2) {
                if seen.insert(t.clone()) {
                    targets.push(t);
                }
            }
            overflow = targets.len() > self.budget;
        });
        if overflow {
            return Err(KmsError::Budget {
                targets: targets.len(),
                budget: self.budget,
            });
        }
        let out = self.solve(&input, &targets)?;
        if !self.congruent_mod_i(&input, &out)? {
            return Err(KmsError::Unverified { counts });
        }
        Ok(out)
    }
}

/// Lengths `l >= 1` at which the prefix of `word` has index sum 0.
pub fn zero_prefixes<'a>(word: &'a [usize], gens: &'a GeneratorSet) -> impl Iterator<Item = usize> + 'a {
    let n = gens.shape.n;
    word.iter()
        .scan(0u64, move |s, &g| {
            *s = (*s + gens.index(g)) % n;
            Some(*s)
        })
        .enumerate()
        .filter(|&(_, s)| s == 0)
        .map(|(i, _)| i + 1)
}

/// Calls `f` on every word whose per-orbit counts equal `counts`, entries
/// ranging over whole orbits, in lexicographic order of generator ids.
pub fn for_each_arrangement(gens: &GeneratorSet, counts: &[u8], f: &mut dyn FnMut(&[usize])) {
    let len: usize = counts.iter().map(|&c| c as usize).sum();
    let mut left = counts.to_vec();
    let mut word = Vec::with_capacity(len);
    fn rec(
        gens: &GeneratorSet,
        left: &mut [u8],
        word: &mut Vec<usize>,
        len: usize,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if word.len() == len {
            f(word);
            return;
        }
        for g in 0..gens.len() {
            let o = gens.orbit(g);
            if left[o] == 0 {
                continue;
            }
            left[o] -= 1;
            word.push(g);
            rec(gens, left, word, len, f);
            word.pop();
            left[o] += 1;
        }
    }
    rec(gens, &mut left, &mut word, len, f);
}

/// Trees `[g_1, ..., g_a, c_1, ..., c_{t2}, z_1, ..., z_b]` read off `word`,
/// where each `c_i` is a left-normed zero-sum segment of length at least 2.
fn f2_shapes(word: &[usize], gens: &GeneratorSet, t2: usize) -> Vec<Tree> {
    let n = gens.shape.n;
    let sum = |s: &[usize]| s.iter().map(|&g| gens.index(g)).sum::<u64>() % n;
    let mut out = Vec::new();
    fn segs(
        word: &[usize],
        pos: usize,
        left: usize,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        zero: &dyn Fn(&[usize]) -> bool,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for end in pos + 2..=word.len() {
            if zero(&word[pos..end]) {
                acc.push((pos, end));
                segs(word, end, left - 1, acc, out, zero);
                acc.pop();
            }
        }
    }
    for a in 1..word.len() {
        if a == 1 || word[0] != word[1] {
            let mut found = Vec::new();
            segs(word, a, t2, &mut Vec::new(), &mut found, &|s| sum(s) == 0);
            for cuts in found {
                let mut items: Vec<Tree> = word[..a].iter().map(|&g| Tree::Gen(g)).collect();
                let mut end = a;
                for &(s, e) in &cuts {
                    items.push(Tree::left_normed(&word[s..e]));
                    end = e;
                }
                items.extend(word[end..].iter().map(|&g| Tree::Gen(g)));
                out.push(Tree::left_normed_trees(items));
            }
        }
    }
    out
}

/// Which form a term was recognized as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A subcommutator with the required number of zero-sum initial segments.
    F1,
    /// A subcommutator `[u, c_1, ..., c_t]` with zero-sum `c_i`.
    F2,
    /// Only a zero-sum proper subcommutator.
    Degenerate,
}

impl Witness {
    pub fn is_strict(self) -> bool {
        !matches!(self, Witness::Degenerate)
    }
}

/// Syntactic scan of a tree for the `(f1)`/`(f2)` forms, falling back to the
/// degenerate zero-sum-subcommutator case.
pub fn scan(t: &Tree, gens: &GeneratorSet, t1: usize, t2: usize) -> Option<Witness> {
    let n = gens.shape.n;
    let mut nodes = Vec::new();
    collect_nodes(t, &mut nodes);
    let mut best: Option<Witness> = None;
    for node in &nodes {
        let (head, args) = node.spine();
        let mut s = head.index_sum(gens);
        let mut zero_prefixes = usize::from(s == 0);
        for a in &args {
            s = (s + a.index_sum(gens)) % n;
            if s == 0 {
                zero_prefixes += 1;
            }
        }
        if zero_prefixes >= t1.max(1) {
            return Some(Witness::F1);
        }
        let mut run = 0;
        for a in &args {
            if a.weight() >= 2 && a.index_sum(gens) == 0 {
                run += 1;
                if run >= t2.max(1) {
                    best = Some(Witness::F2);
                }
            } else {
                run = 0;
            }
        }
    }
    if best.is_some() {
        return best;
    }
    let proper_zero = nodes
        .iter()
        .any(|x| !std::ptr::eq(*x, t) && x.weight() >= 2 && x.index_sum(gens) == 0);
    proper_zero.then_some(Witness::Degenerate)
}

fn collect_nodes<'a>(t: &'a Tree, out: &mut Vec<&'a Tree>) {
    if let Tree::Br(a, b) = t {
        out.push(t);
        collect_nodes(a, out);
        collect_nodes(b, out);
    }
}

/// Per-orbit entry counts agree with the input's.
pub fn multiplicities_preserved(input: &Tree, out: &Combination, gens: &GeneratorSet) -> bool {
    let c = input.orbit_counts(gens);
    out.terms.iter().all(|(_, t)| t.orbit_counts(gens) == c)
}

/// The homomorphism `delta` from the free Lie ring into a concrete instance,
/// `y_{r^k i_s} -> x_s h^k` for homogeneous `x_s` of index `i_s`.
#[derive(Debug, Clone)]
pub struct Specialization {
    pub action: FrobeniusAction,
    /// Image of each generator.
    pub images: Vec<Vector>,
}

impl Specialization {
    /// `bases[s]` must lie in the component of index `i_s`.
    pub fn new(action: FrobeniusAction, gens: &GeneratorSet, bases: &[Vector]) -> Self {
        assert_eq!(bases.len(), gens.orbit_count());
        let mut images = Vec::with_capacity(gens.len());
        for x in bases {
            let mut cur = x.clone();
            for _ in 0..gens.q() {
                images.push(cur.clone());
                cur = action.h().apply(action.field(), &cur);
            }
        }
        Specialization { action, images }
    }

    pub fn eval(&self, t: &Tree) -> Vector {
        match t {
            Tree::Gen(g) => self.images[*g].clone(),
            Tree::Br(a, b) => self.action.ring().bracket(&self.eval(a), &self.eval(b)),
        }
    }

    pub fn eval_combination(&self, c: &Combination) -> Vector {
        let f = &**self.action.field();
        let mut acc = linalg::zero_vec(self.action.dim());
        for (x, t) in &c.terms {
            linalg::axpy(f, &mut acc, *x, &self.eval(t));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::heisenberg_example;

    fn engine(orbits: usize, w: usize) -> KmsEngine {
        let shape = FrobeniusShape::new(3, 2, 2).unwrap();
        KmsEngine::new(
            GeneratorSet::with_orbits(shape, orbits),
            1,
            w,
            None,
            None,
            Caps::default(),
            Exec::Sequential,
        )
        .unwrap()
    }

    #[test]
    fn normal_input_is_unchanged() {
        let e = engine(2, 3);
        // y0_1, y0_2 has index sum 0 at length 2
        let out = e.kms_transform(&[0, 1, 2], None).unwrap();
        assert_eq!(out.terms, vec![(Elem::ONE, Tree::left_normed(&[0, 1, 2]))]);
    }

    #[test]
    fn three_index_one_entries() {
        let e = engine(3, 3);
        let gens = e.gens().clone();
        // first element of each orbit: all index 1, sum 0 only at length 3
        let out = e.kms_transform(&[0, 2, 4], None).unwrap();
        assert_eq!(out.terms.len(), 1);
        let word = [0, 2];
        // [y0_1, y1_1] is the index-2 part of a bracket of two H-fixed points
        let out = e.kms_transform(&word, None).unwrap();
        assert!(out.terms.is_empty());
        assert!(e.congruent_mod_i(&Tree::left_normed(&word), &out).unwrap());
        assert!(multiplicities_preserved(&Tree::left_normed(&word), &out, &gens));
        for (_, t) in &out.terms {
            assert_eq!(scan(t, &gens, 1, 1), Some(Witness::F1));
        }
        let a = heisenberg_example();
        let f = a.field().clone();
        let x = linalg::unit_vec(3, 0);
        let bases = vec![x.clone(), linalg::scale(&f, f.from_i64(3), &x), x];
        let d = Specialization::new(a, &gens, &bases);
        assert_eq!(
            d.eval(&Tree::left_normed(&word)),
            d.eval_combination(&out)
        );
    }

    #[test]
    fn order_seven_shape_rewrites_nontrivially() {
        let shape = FrobeniusShape::new(7, 3, 2).unwrap();
        let e = KmsEngine::new(
            GeneratorSet::with_orbits(shape, 1),
            2,
            4,
            None,
            None,
            Caps::default(),
            Exec::Sequential,
        )
        .unwrap();
        let gens = e.gens().clone();
        // indices 1, 2, 1, 4 with partial sums 1, 3, 4, 1
        let word = [0, 1, 0, 2];
        let out = e.kms_transform(&word, None).unwrap();
        assert!(out.terms.len() > 1);
        let input = Tree::left_normed(&word);
        assert!(e.congruent_mod_i(&input, &out).unwrap());
        assert!(multiplicities_preserved(&input, &out, &gens));
        assert!(out.terms.iter().all(|(_, t)| scan(t, &gens, 1, 1) == Some(Witness::F1)));
    }

    #[test]
    fn arrangements_respect_counts() {
        let shape = FrobeniusShape::new(3, 2, 2).unwrap();
        let gens = GeneratorSet::with_orbits(shape, 2);
        let mut count = 0;
        for_each_arrangement(&gens, &[1, 2], &mut |w| {
            assert_eq!(Tree::left_normed(w).orbit_counts(&gens), vec![1, 2]);
            count += 1;
        });
        assert_eq!(count, 3 * 8);
    }

    #[test]
    fn scanner_forms() {
        let shape = FrobeniusShape::new(3, 2, 2).unwrap();
        let gens = GeneratorSet::with_orbits(shape, 3);
        // indices: g0=1 g1=2 g2=1 g3=2 g4=1 g5=2
        let two_segments = Tree::left_normed(&[0, 1, 2, 3]);
        assert_eq!(scan(&two_segments, &gens, 2, 2), Some(Witness::F1));
        let f2 = Tree::left_normed_trees(vec![
            Tree::Gen(0),
            Tree::left_normed(&[1, 2]),
            Tree::left_normed(&[3, 4]),
        ]);
        assert_eq!(scan(&f2, &gens, 3, 2), Some(Witness::F2));
        let none = Tree::left_normed(&[0, 2, 4]);
        assert_eq!(scan(&none, &gens, 2, 2), None);
    }
}
