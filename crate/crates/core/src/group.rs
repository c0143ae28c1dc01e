//! Finite groups given by Cayley tables, with a pair of automorphisms `phi`,
//! `h` forming a metacyclic Frobenius group `FH`.
//!
//! Elements are ids `0..N`. Permutations act on the right like the matrices in
//! [`crate::frobenius`]: `x^phi = phi[x]`, and the defining relation reads
//! "apply `h`, then `phi`, then `h^{-1}`" equals `phi^r`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{gcd, prime_factors};
use crate::frobenius::{pow_mod, FrobeniusShape};

pub const DEFAULT_ORDER_CAP: usize = 2000;
/// Above this order automorphisms are checked on `x * g` for generators `g`.
pub const EXHAUSTIVE_HOM_LIMIT: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("order {order} exceeds the cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("row {row} has length {len}, expected {order}")]
    Ragged { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is not an element id")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("{which} has length {len}, expected {order}")]
    PermutationLength { which: &'static str, len: usize, order: usize },
    #[error("invalid group data: {0:?}")]
    Invalid(Vec<GroupViolation>),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupViolation {
    NoIdentity,
    NoInverse { a: usize },
    NotAssociative { a: usize, b: usize, c: usize },
    NotPermutation { which: &'static str },
    NotHomomorphism { which: &'static str, a: usize, b: usize },
    PhiOrder { n: u64 },
    HOrder { q: u64 },
    Relation,
    NotCoprime { order: usize, nq: u64 },
}

/// A subgroup as a sorted element list plus a membership mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elems: Vec<usize>,
    mask: Vec<bool>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {})", self.elems.len())
    }
}

impl Subgroup {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let elems = (0..mask.len()).filter(|&i| mask[i]).collect();
        Subgroup { elems, mask }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_mask(self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: Option<usize>,
    inverses: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Structural checks only; see [`FiniteGroup::validate`] for the axioms.
    pub fn from_table(rows: &[Vec<usize>], cap: usize) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > cap {
            return Err(GroupError::TooLarge { order, cap });
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::Ragged {
                    row,
                    len: r.len(),
                    order,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::OutOfRange { row, col, value });
                }
                table.push(value as u32);
            }
        }
        let identity = (0..order).find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x));
        let inverses = match identity {
            Some(e) => (0..order)
                .map(|x| (0..order).find(|&y| table[x * order + y] as usize == e).unwrap_or(usize::MAX))
                .collect(),
            None => vec![usize::MAX; order],
        };
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverses,
        })
    }

    /// Validated construction from a multiplication closure on `0..order`.
    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
        let g = Self::from_table(&rows, DEFAULT_ORDER_CAP)?;
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(GroupError::Invalid(v))
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity.expect("validated group")
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `[a, b] = a^{-1} b^{-1} a b`
    pub fn comm(&self, a: usize, b: usize) -> usize {
        let x = self.mul(self.inv(a), self.inv(b));
        self.mul(self.mul(x, a), b)
    }

    /// Left-normed `[a_1, ..., a_k]`.
    pub fn comm_left_normed(&self, items: &[usize]) -> usize {
        let mut it = items.iter();
        let mut acc = *it.next().expect("empty commutator");
        for &b in it {
            acc = self.comm(acc, b);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(vec![true; self.order])
    }

    pub fn trivial(&self) -> Subgroup {
        let mut m = vec![false; self.order];
        m[self.identity()] = true;
        Subgroup::from_mask(m)
    }

    /// `<gens>`, by closing under right multiplication with the generators.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        let e = self.identity();
        mask[e] = true;
        let mut queue = vec![e];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push(y);
                }
            }
        }
        Subgroup::from_mask(mask)
    }

    /// `<s, extra>` for a subgroup `s`.
    pub fn join(&self, s: &Subgroup, extra: &[usize]) -> Subgroup {
        let mut gens = self.generating_set(s);
        gens.extend_from_slice(extra);
        self.generate(&gens)
    }

    /// A small generating set of `s`, chosen greedily by element id.
    pub fn generating_set(&self, s: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for &x in s.elements() {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate(&gens);
                if cur.order() == s.order() {
                    break;
                }
            }
        }
        gens
    }

    pub fn generators(&self) -> Vec<usize> {
        self.generating_set(&self.whole())
    }

    /// Group axioms. Associativity uses Light's test against a generating set
    /// of the magma, which is exhaustive.
    pub fn validate(&self) -> Vec<GroupViolation> {
        let mut out = Vec::new();
        let Some(e) = self.identity else {
            out.push(GroupViolation::NoIdentity);
            return out;
        };
        if let Some(a) = (0..self.order).find(|&x| self.inverses[x] == usize::MAX || self.mul(self.inverses[x], x) != e) {
            out.push(GroupViolation::NoInverse { a });
            return out;
        }
        // a magma generating set: close under right multiplication only
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order];
        reached[e] = true;
        for x in 0..self.order {
            if reached[x] {
                continue;
            }
            gens.push(x);
            let mut queue: Vec<usize> = (0..self.order).filter(|&y| reached[y]).collect();
            while let Some(y) = queue.pop() {
                for &g in &gens {
                    let z = self.mul(y, g);
                    if !reached[z] {
                        reached[z] = true;
                        queue.push(z);
                    }
                }
            }
        }
        'outer: for &g in &gens {
            for a in 0..self.order {
                let ag = self.mul(a, g);
                for c in 0..self.order {
                    if self.mul(ag, c) != self.mul(a, self.mul(g, c)) {
                        out.push(GroupViolation::NotAssociative { a, b: g, c });
                        break 'outer;
                    }
                }
            }
        }
        out
    }

    /// The subgroup generated by all `[a, b]` with `a` in `s`, `b` in `t`.
    pub fn commutator_subgroup(&self, s: &Subgroup, t: &Subgroup) -> Subgroup {
        let mut set = BTreeSet::new();
        for &a in s.elements() {
            for &b in t.elements() {
                set.insert(self.comm(a, b));
            }
        }
        let v: Vec<usize> = set.into_iter().collect();
        self.generate(&v)
    }

    /// `gamma_1 = s`, `gamma_{i+1} = [gamma_i, s]`, up to the first repeat or
    /// the trivial subgroup (included).
    pub fn lower_central_series_of(&self, s: &Subgroup) -> Vec<Subgroup> {
        let mut series = vec![s.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.commutator_subgroup(last, s);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        self.lower_central_series_of(&self.whole())
    }

    /// Nilpotency class of a subgroup, `None` if it is not nilpotent.
    pub fn class_of(&self, s: &Subgroup) -> Option<usize> {
        let series = self.lower_central_series_of(s);
        series.last().unwrap().is_trivial().then(|| series.len() - 1)
    }

    pub fn class(&self) -> Option<usize> {
        self.class_of(&self.whole())
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        let gens = self.generators();
        s.elements().iter().all(|&x| {
            gens.iter()
                .all(|&g| s.contains(self.mul(self.mul(self.inv(g), x), g)))
        })
    }

    pub fn normal_closure(&self, xs: &[usize]) -> Subgroup {
        let mut s = self.generate(xs);
        let gens = self.generators();
        loop {
            let conj: Vec<usize> = s
                .elements()
                .iter()
                .flat_map(|&x| gens.iter().map(move |&g| (x, g)))
                .map(|(x, g)| self.mul(self.mul(self.inv(g), x), g))
                .filter(|&y| !s.contains(y))
                .collect();
            if conj.is_empty() {
                return s;
            }
            s = self.join(&s, &conj);
        }
    }

    /// A Sylow `p`-subgroup, grown greedily from the trivial group. A maximal
    /// `p`-subgroup is Sylow, and a pass without growth certifies maximality.
    pub fn sylow(&self, p: u64) -> Subgroup {
        let p_elems: Vec<usize> = (0..self.order)
            .filter(|&x| is_power_of(self.element_order(x) as u64, p))
            .collect();
        let mut s = self.trivial();
        loop {
            let mut grew = false;
            for &x in &p_elems {
                if s.contains(x) {
                    continue;
                }
                let t = self.join(&s, &[x]);
                if is_power_of(t.order() as u64, p) {
                    s = t;
                    grew = true;
                }
            }
            if !grew {
                return s;
            }
        }
    }

    /// `O_p(G)`: the intersection of all conjugates of a Sylow `p`-subgroup.
    pub fn p_core(&self, p: u64) -> Subgroup {
        let sylow = self.sylow(p);
        let mut core = sylow.clone();
        for g in 0..self.order {
            let conj: Vec<bool> = (0..self.order)
                .map(|x| sylow.contains(self.mul(self.mul(g, x), self.inv(g))))
                .collect();
            core = core.intersect(&Subgroup::from_mask(conj));
            if core.is_trivial() {
                break;
            }
        }
        core
    }

    pub fn fitting(&self, exec: Exec) -> FittingReport {
        let primes = prime_factors(self.order as u64);
        let cores = exec.map(&primes, |&p| self.p_core(p));
        let gens: Vec<usize> = cores.iter().flat_map(|c| self.generating_set(c)).collect();
        let f = self.generate(&gens);
        let nilpotent = self.class_of(&f).is_some();
        let normal = self.is_normal(&f);
        // lattice of normal closures of single elements and pairwise joins
        let mut closures: Vec<Subgroup> = Vec::new();
        let mut seen = vec![false; self.order];
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let c = self.normal_closure(&[x]);
            for &y in c.elements() {
                if self.normal_closure(&[y]) == c {
                    seen[y] = true;
                }
            }
            if !closures.contains(&c) {
                closures.push(c);
            }
        }
        let mut lattice = closures.clone();
        for i in 0..closures.len() {
            for j in i + 1..closures.len() {
                let joined = self.join(&closures[i], &self.generating_set(&closures[j]));
                if !lattice.contains(&joined) {
                    lattice.push(joined);
                }
            }
        }
        let nilpotent_normals: Vec<&Subgroup> = lattice.iter().filter(|s| self.class_of(s).is_some()).collect();
        let contains_all = nilpotent_normals.iter().all(|s| s.is_subgroup_of(&f));
        FittingReport {
            index: self.order / f.order(),
            order: f.order(),
            nilpotent,
            normal,
            contains_lattice: contains_all,
            lattice_size: lattice.len(),
            cores: primes.iter().zip(&cores).map(|(&p, c)| (p, c.order())).collect(),
            subgroup: f,
        }
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let m = other.order;
        FiniteGroup::from_fn(self.order * m, |a, b| {
            self.mul(a / m, b / m) * m + other.mul(a % m, b % m)
        })
    }
}

fn is_power_of(mut x: u64, p: u64) -> bool {
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

#[derive(Debug, Clone)]
pub struct FittingReport {
    pub subgroup: Subgroup,
    pub order: usize,
    pub index: usize,
    pub nilpotent: bool,
    pub normal: bool,
    pub contains_lattice: bool,
    pub lattice_size: usize,
    pub cores: Vec<(u64, usize)>,
}

impl FittingReport {
    pub fn verified(&self) -> bool {
        self.nilpotent && self.normal && self.contains_lattice
    }
}

/// `G` with the automorphisms `phi` of order `n` and `h` of order `q`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub shape: FrobeniusShape,
    pub phi: Vec<usize>,
    pub h: Vec<usize>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, shape: FrobeniusShape, phi: Vec<usize>, h: Vec<usize>) -> Result<Self, GroupError> {
        let a = Self::from_parts(group, shape, phi, h)?;
        let v = a.validate();
        if v.is_empty() {
            Ok(a)
        } else {
            Err(GroupError::Invalid(v))
        }
    }

    /// Length checks only.
    pub fn from_parts(group: FiniteGroup, shape: FrobeniusShape, phi: Vec<usize>, h: Vec<usize>) -> Result<Self, GroupError> {
        for (which, p) in [("phi", &phi), ("h", &h)] {
            if p.len() != group.order() {
                return Err(GroupError::PermutationLength {
                    which,
                    len: p.len(),
                    order: group.order(),
                });
            }
        }
        Ok(GroupAction { group, shape, phi, h })
    }

    pub fn validate(&self) -> Vec<GroupViolation> {
        let g = &self.group;
        let mut out = g.validate();
        if !out.is_empty() {
            return out;
        }
        let n = g.order();
        let nq = self.shape.n * self.shape.q;
        if gcd(n as u64, nq) != 1 {
            out.push(GroupViolation::NotCoprime { order: n, nq });
        }
        let mut perms_ok = true;
        for (which, p) in [("phi", &self.phi), ("h", &self.h)] {
            let mut seen = vec![false; n];
            let ok = p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
            if !ok {
                out.push(GroupViolation::NotPermutation { which });
                perms_ok = false;
                continue;
            }
            if let Some((a, b)) = self.first_non_hom(p) {
                out.push(GroupViolation::NotHomomorphism { which, a, b });
            }
        }
        if !perms_ok {
            return out;
        }
        let id: Vec<usize> = (0..n).collect();
        let order_ok = |p: &[usize], k: u64| {
            prime_factors(k).iter().all(|&l| perm_pow(p, k / l) != id) && perm_pow(p, k) == id
        };
        if !order_ok(&self.phi, self.shape.n) {
            out.push(GroupViolation::PhiOrder { n: self.shape.n });
        }
        if !order_ok(&self.h, self.shape.q) {
            out.push(GroupViolation::HOrder { q: self.shape.q });
        }
        // x -> ((x^h)^phi)^{h^{-1}}
        let hinv = perm_pow(&self.h, self.shape.q - 1);
        let lhs: Vec<usize> = (0..n).map(|x| hinv[self.phi[self.h[x]]]).collect();
        if lhs != perm_pow(&self.phi, self.shape.r) {
            out.push(GroupViolation::Relation);
        }
        out
    }

    fn first_non_hom(&self, p: &[usize]) -> Option<(usize, usize)> {
        let g = &self.group;
        let n = g.order();
        let check = |a: usize, b: usize| p[g.mul(a, b)] == g.mul(p[a], p[b]);
        if n <= EXHAUSTIVE_HOM_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    if !check(a, b) {
                        return Some((a, b));
                    }
                }
            }
        } else {
            // a map with p(xg) = p(x)p(g) for all x and generators g is a
            // homomorphism, by induction on word length
            for &b in &g.generators() {
                for a in 0..n {
                    if !check(a, b) {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    pub fn phi_pow(&self, x: usize, k: u64) -> usize {
        let mut y = x;
        for _ in 0..k % self.shape.n {
            y = self.phi[y];
        }
        y
    }

    pub fn h_pow(&self, x: usize, k: u64) -> usize {
        let mut y = x;
        for _ in 0..k % self.shape.q {
            y = self.h[y];
        }
        y
    }

    pub fn is_phi_invariant(&self, s: &Subgroup) -> bool {
        s.elements().iter().all(|&x| s.contains(self.phi[x]))
    }

    pub fn is_h_invariant(&self, s: &Subgroup) -> bool {
        s.elements().iter().all(|&x| s.contains(self.h[x]))
    }

    pub fn image(&self, p: &[usize], s: &Subgroup) -> Subgroup {
        let mut m = vec![false; self.group.order()];
        for &x in s.elements() {
            m[p[x]] = true;
        }
        Subgroup::from_mask(m)
    }

    /// Fixed points of `phi` inside `s`.
    pub fn fixed_phi(&self, s: &Subgroup) -> Subgroup {
        let mut m = vec![false; self.group.order()];
        for &x in s.elements() {
            m[x] = self.phi[x] == x;
        }
        Subgroup::from_mask(m)
    }

    pub fn fixed_h(&self, s: &Subgroup) -> Subgroup {
        let mut m = vec![false; self.group.order()];
        for &x in s.elements() {
            m[x] = self.h[x] == x;
        }
        Subgroup::from_mask(m)
    }

    /// `|C_{A/B}(phi)|` for `phi`-invariant `B <= A` with `B` normal in `A`.
    pub fn fixed_in_quotient(&self, a: &Subgroup, b: &Subgroup) -> usize {
        let g = &self.group;
        let count = a
            .elements()
            .iter()
            .filter(|&&x| b.contains(g.mul(g.inv(x), self.phi[x])))
            .count();
        count / b.order()
    }

    /// Coprime covering on a normal `phi`-invariant `b`: the fixed points in
    /// `G/b` are the image of `C_G(phi)`.
    pub fn covering_holds(&self, b: &Subgroup) -> bool {
        let g = &self.group;
        let c = self.fixed_phi(&g.whole());
        let cb = g.join(b, &g.generating_set(&c));
        self.fixed_in_quotient(&g.whole(), b) == cb.order() / b.order()
    }
}

fn perm_pow(p: &[usize], k: u64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..p.len()).collect();
    for _ in 0..k {
        out = out.iter().map(|&x| p[x]).collect();
    }
    out
}

/// Unitriangular `UT(3, p)` as triples `(a, b, c)` with
/// `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`; id `a p^2 + b p + c`.
pub fn unitriangular(p: usize) -> Result<FiniteGroup, GroupError> {
    let dec = |x: usize| (x / (p * p), (x / p) % p, x % p);
    FiniteGroup::from_fn(p * p * p, |x, y| {
        let (a, b, c) = dec(x);
        let (a2, b2, c2) = dec(y);
        ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
    })
}

/// `UT(3, p)` with `phi(a, b, c) = (w a, w^{-1} b, c)` and
/// `h(a, b, c) = (b, a, a b - c)`, for a shape with `q = 2`, `r = n - 1`, `n | p - 1`.
pub fn unitriangular_action(p: usize, shape: FrobeniusShape) -> Result<GroupAction, GroupError> {
    if shape.q != 2 || shape.r != shape.n - 1 || (p as u64 - 1) % shape.n != 0 {
        return Err(GroupError::Unsupported(format!(
            "UT(3, {p}) swap action needs q = 2, r = n - 1 and n | p - 1; got {shape}"
        )));
    }
    let g = unitriangular(p)?;
    let w = smallest_of_order(p as u64, shape.n) as usize;
    let winv = pow_mod(w as u64, shape.n - 1, p as u64) as usize;
    let dec = |x: usize| (x / (p * p), (x / p) % p, x % p);
    let enc = |a: usize, b: usize, c: usize| a * p * p + b * p + c;
    let phi = (0..g.order())
        .map(|x| {
            let (a, b, c) = dec(x);
            enc(a * w % p, b * winv % p, c)
        })
        .collect();
    let h = (0..g.order())
        .map(|x| {
            let (a, b, c) = dec(x);
            enc(b, a, (a * b % p + p - c) % p)
        })
        .collect();
    GroupAction::new(g, shape, phi, h)
}

fn smallest_of_order(p: u64, n: u64) -> u64 {
    (2..p)
        .find(|&w| pow_mod(w, n, p) == 1 && prime_factors(n).iter().all(|&l| pow_mod(w, n / l, p) != 1))
        .expect("n divides p - 1")
}

/// `C_p x C_p` with `phi(a, b) = (w a, w^{-1} b)`, `h(a, b) = (b, a)`.
pub fn elementary_abelian_action(p: usize, shape: FrobeniusShape) -> Result<GroupAction, GroupError> {
    if shape.q != 2 || shape.r != shape.n - 1 || (p as u64 - 1) % shape.n != 0 {
        return Err(GroupError::Unsupported(format!(
            "C_{p}^2 swap action needs q = 2, r = n - 1 and n | p - 1; got {shape}"
        )));
    }
    let g = FiniteGroup::from_fn(p * p, |x, y| ((x / p + y / p) % p) * p + (x % p + y % p) % p)?;
    let w = smallest_of_order(p as u64, shape.n) as usize;
    let winv = pow_mod(w as u64, shape.n - 1, p as u64) as usize;
    let phi = (0..p * p).map(|x| (x / p * w % p) * p + x % p * winv % p).collect();
    let h = (0..p * p).map(|x| (x % p) * p + x / p).collect();
    GroupAction::new(g, shape, phi, h)
}

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_fn(n, |a, b| (a + b) % n)
}

/// Dihedral group of order `2m`: `r^i` is `i`, `r^i s` is `m + i`.
pub fn dihedral(m: usize) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_fn(2 * m, |x, y| {
        let (i, s) = (x % m, x >= m);
        let (j, t) = (y % m, y >= m);
        let k = if s { (i + m - j) % m } else { (i + j) % m };
        k + if s != t { m } else { 0 }
    })
}

/// Symmetric group on `k` points, permutations in lexicographic order,
/// composed left to right.
pub fn symmetric(k: usize) -> Result<FiniteGroup, GroupError> {
    let perms = permutations(k);
    let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    FiniteGroup::from_fn(perms.len(), |a, b| {
        let c: Vec<usize> = (0..k).map(|i| perms[b][perms[a][i]]).collect();
        index(&c)
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Inner automorphism `x -> g^{-1} x g`.
pub fn conjugation(g: &FiniteGroup, by: usize) -> Vec<usize> {
    (0..g.order()).map(|x| g.mul(g.mul(g.inv(by), x), by)).collect()
}
