//! The bound function `V(t1, t2, c, q)` and the derived constants `T`, `U`, `N`.
//!
//! `c` and `q` enter only through `f = f(c, q)`, which has no closed form; it
//! is supplied by the caller (usually an empirical class from a universal
//! quotient).

use num_bigint::BigUint;
use serde::Serialize;

/// `V = sum_{i=1}^{t1} ((f + 1)^2 t2)^i + 1`
pub fn v(t1: u64, t2: u64, f: u64) -> BigUint {
    let base = BigUint::from(f + 1).pow(2) * BigUint::from(t2);
    let mut term = BigUint::from(1u32);
    let mut acc = BigUint::from(1u32);
    for _ in 0..t1 {
        term *= &base;
        acc += &term;
    }
    acc
}

/// Paper-side constants next to the caps actually used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub c: u64,
    pub q: u64,
    pub n: u64,
    pub f: u64,
    pub f_source: FSource,
    pub t: u64,
    #[serde(serialize_with = "as_string")]
    pub u: BigUint,
    #[serde(serialize_with = "as_string")]
    pub n_bound: BigUint,
    pub u_used: usize,
    pub t_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FSource {
    Empirical { stabilized: bool },
    Supplied,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl BoundParams {
    /// `T = f + 1`, `U = V(T, T - 1)`, `N = V(T, 2(T - 1))`. The used caps are
    /// clamped to the paper values.
    pub fn new(c: u64, q: u64, n: u64, f: u64, f_source: FSource, u_used: usize, t_used: usize) -> Self {
        let t = f + 1;
        let u = v(t, t - 1, f);
        let n_bound = v(t, 2 * (t - 1), f);
        let u_used = if BigUint::from(u_used) > u {
            usize::try_from(&u).unwrap_or(usize::MAX)
        } else {
            u_used
        };
        BoundParams {
            c,
            q,
            n,
            f,
            f_source,
            t,
            u,
            n_bound,
            u_used,
            t_used: t_used.min(t as usize),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_value() {
        assert_eq!(v(3, 2, 2), BigUint::from(6175u32));
        assert_eq!(v(0, 5, 9), BigUint::from(1u32));
    }

    #[test]
    fn params_for_f_one() {
        // T = 2, U = V(2, 1) = 4 + 16 + 1, N = V(2, 2) = 8 + 64 + 1
        let b = BoundParams::new(1, 2, 3, 1, FSource::Supplied, 100, 5);
        assert_eq!(b.t, 2);
        assert_eq!(b.u, BigUint::from(21u32));
        assert_eq!(b.n_bound, BigUint::from(73u32));
        assert_eq!(b.u_used, 21);
        assert_eq!(b.t_used, 2);
    }
}
