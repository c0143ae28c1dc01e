#![allow(dead_code)]

use std::collections::HashMap;

use fhlie_core::exec::Exec;
use fhlie_core::field::{Elem, Field};
use fhlie_core::frobenius::{FrobeniusAction, FrobeniusShape};
use fhlie_core::instance::{generate, scramble, Family, Generated};
use fhlie_core::lie::StructureTable;
use fhlie_core::linalg::{self, Vector};

pub fn shape(n: u64, q: u64, r: u64) -> FrobeniusShape {
    FrobeniusShape::new(n, q, r).unwrap()
}

pub fn free_nilpotent(s: FrobeniusShape, orbits: usize, class_cap: usize, c: Option<usize>, kill: bool, p: Option<u32>) -> Family {
    Family::FreeNilpotent {
        c,
        class_cap,
        frobenius: s.into(),
        kill_zero_component: kill,
        orbits,
        p,
    }
}

/// Small generated instances over assorted families, half of them scrambled.
pub fn instance_pool(count: usize, seed: u64) -> Vec<(String, FrobeniusAction)> {
    let s322 = shape(3, 2, 2);
    let s732 = shape(7, 3, 2);
    let s524 = shape(5, 2, 4);
    let mut families = vec![
        ("heis-322".to_string(), Family::heisenberg(7, s322)),
        ("heis-524".to_string(), Family::heisenberg(11, s524)),
        ("heis-13".to_string(), Family::heisenberg(13, s322)),
        ("fn-322-c2".to_string(), free_nilpotent(s322, 1, 2, None, false, None)),
        ("fn-322-c3".to_string(), free_nilpotent(s322, 1, 3, None, false, None)),
        ("fn-322-c4".to_string(), free_nilpotent(s322, 1, 4, None, false, None)),
        ("fn-322-o2".to_string(), free_nilpotent(s322, 2, 2, None, false, None)),
        ("fn-322-ideal".to_string(), free_nilpotent(s322, 1, 4, Some(1), false, None)),
        ("fn-322-f25".to_string(), free_nilpotent(s322, 1, 3, None, false, Some(5))),
        ("fn-732-c2".to_string(), free_nilpotent(s732, 1, 2, None, false, None)),
        ("fn-732-c3".to_string(), free_nilpotent(s732, 1, 3, Some(2), false, None)),
        ("uq-322".to_string(), free_nilpotent(s322, 2, 4, Some(1), true, None)),
        ("pad-322".to_string(), Family::padded_sum(s322, 1, 3, 3)),
    ];
    for k in 1..=4 {
        families.push((format!("sum-322-{k}"), Family::heisenberg_sum(s322, k, seed + k as u64)));
        families.push((format!("sum-524-{k}"), Family::heisenberg_sum(s524, k, seed + 10 + k as u64)));
    }
    let base: Vec<(String, Generated)> = families
        .into_iter()
        .map(|(name, f)| {
            let g = generate(&f, Exec::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, g)
        })
        .collect();
    (0..count)
        .map(|i| {
            let (name, g) = &base[i % base.len()];
            if i < base.len() {
                (name.clone(), g.action.clone())
            } else {
                let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
                (format!("{name}/scrambled-{s}"), scramble(g, s).action)
            }
        })
        .collect()
}

/// Number of Lyndon words of length `w` over `g` letters, by listing every
/// word and keeping the strictly least rotations.
pub fn necklace_count(g: usize, w: usize) -> u64 {
    let total = g.pow(w as u32);
    let mut word = vec![0usize; w];
    let mut count = 0;
    for mut code in 0..total {
        for slot in word.iter_mut().rev() {
            *slot = code % g;
            code /= g;
        }
        if (1..w).all(|s| {
            let rot: Vec<usize> = word[s..].iter().chain(&word[..s]).copied().collect();
            word < rot
        }) {
            count += 1;
        }
    }
    count
}

/// Polynomials in non-commuting letters with coefficients mod `p`.
type Poly = HashMap<Vec<u8>, u64>;

fn poly_bracket(a: &Poly, b: &Poly, p: u64) -> Poly {
    let mut out = Poly::new();
    for (u, &x) in a {
        for (v, &y) in b {
            let c = x * y % p;
            let uv: Vec<u8> = u.iter().chain(v).copied().collect();
            let vu: Vec<u8> = v.iter().chain(u).copied().collect();
            *out.entry(uv).or_insert(0) += c;
            *out.entry(vu).or_insert(0) += p - c;
        }
    }
    out.retain(|_, c| {
        *c %= p;
        *c != 0
    });
    out
}

/// Every bracketing of every word of length `w`, expanded in the free
/// associative algebra.
fn all_bracketings(g: usize, w: usize, p: u64, memo: &mut HashMap<usize, Vec<Poly>>) -> Vec<Poly> {
    if let Some(v) = memo.get(&w) {
        return v.clone();
    }
    let out = if w == 1 {
        (0..g as u8).map(|x| Poly::from([(vec![x], 1)])).collect()
    } else {
        let mut out = Vec::new();
        for left in 1..w {
            let a = all_bracketings(g, left, p, memo);
            let b = all_bracketings(g, w - left, p, memo);
            for x in &a {
                for y in &b {
                    let z = poly_bracket(x, y, p);
                    if !z.is_empty() {
                        out.push(z);
                    }
                }
            }
        }
        out
    };
    memo.insert(w, out.clone());
    out
}

fn rank_mod_p(rows: Vec<Vec<u64>>, p: u64) -> usize {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut r in rows {
        for (piv, b) in &basis {
            let c = r[*piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        if let Some(piv) = r.iter().position(|&x| x != 0) {
            let inv = pow_mod(r[piv], p - 2, p);
            for x in r.iter_mut() {
                *x = *x * inv % p;
            }
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&r) {
                        *x = (*x + (p - c) * y) % p;
                    }
                }
            }
            basis.push((piv, r));
        }
    }
    basis.len()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dimension of the span of all bracketings of weight `w` on `g` letters
/// inside the free associative algebra over `F_p`.
pub fn bracketing_span_dim(g: usize, w: usize, p: u64) -> usize {
    let mut memo = HashMap::new();
    let polys = all_bracketings(g, w, p, &mut memo);
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    for poly in &polys {
        for word in poly.keys() {
            let next = index.len();
            index.entry(word.clone()).or_insert(next);
        }
    }
    let rows = polys
        .iter()
        .map(|poly| {
            let mut row = vec![0; index.len()];
            for (word, &c) in poly {
                row[index[word]] = c;
            }
            row
        })
        .collect();
    rank_mod_p(rows, p)
}

/// Dense structure constants over a prime field as residues.
pub fn dense_table(t: &StructureTable) -> (u64, Vec<u64>) {
    let f = t.field();
    assert_eq!(f.degree(), 1, "dense oracle works over prime fields");
    let p = f.characteristic() as u64;
    let d = t.dim();
    let mut c = vec![0u64; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                c[(i * d + j) * d + k] = f.coeffs(t.get(i, j, k))[0] as u64;
            }
        }
    }
    (p, c)
}

/// Antisymmetry, vanishing diagonal and Jacobi on basis triples, by direct
/// summation over the dense table.
pub fn dense_is_lie(t: &StructureTable) -> bool {
    let (p, c) = dense_table(t);
    let d = t.dim();
    let at = |i: usize, j: usize, k: usize| c[(i * d + j) * d + k];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if (at(i, j, k) + at(j, i, k)) % p != 0 || at(i, i, k) != 0 {
                    return false;
                }
            }
        }
    }
    // [[a, b], e] + [[b, e], a] + [[e, a], b]
    for a in 0..d {
        for b in a + 1..d {
            for e in b + 1..d {
                for out in 0..d {
                    let mut s = 0;
                    for m in 0..d {
                        s += at(a, b, m) * at(m, e, out) + at(b, e, m) * at(m, a, out) + at(e, a, m) * at(m, b, out);
                    }
                    if s % p != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `(1/n) sum_s omega^{-ks} x phi^s`, straight from the definition.
pub fn phi_term(a: &FrobeniusAction, x: &[Elem], k: u64) -> Vector {
    let f: &Field = a.field();
    let n = a.shape().n;
    let mut acc = linalg::zero_vec(x.len());
    let mut y = x.to_vec();
    for s in 0..n {
        let c = f.pow(a.omega(), -((k * s % n) as i64));
        linalg::axpy(f, &mut acc, c, &y);
        y = a.phi().apply(f, &y);
    }
    linalg::scale(f, f.inv(f.from_i64(n as i64)), &acc)
}

pub fn random_vector(f: &Field, d: usize, rng: &mut impl rand::Rng) -> Vector {
    (0..d).map(|_| f.from_code(rng.gen_range(0..f.order())).unwrap()).collect()
}
