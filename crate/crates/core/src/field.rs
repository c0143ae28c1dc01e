//! Finite fields `F_{p^e}` with table-driven arithmetic.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` where
//! `c_i` are the power-basis coordinates. The ordering of [`Elem`] is the
//! ordering of these encodings, which is what "smallest representative" means
//! throughout the crate.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order we are willing to tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    BadModulusLength { expected: usize, got: usize },
    #[error("modulus coefficient {0} is not reduced mod p")]
    BadModulusCoefficient(u32),
    #[error("modulus is reducible over F_p")]
    Reducible,
    #[error("a modulus is only meaningful when e > 1")]
    UnexpectedModulus,
    #[error("scalar has {got} coordinates, expected {expected}")]
    BadScalarLength { expected: usize, got: usize },
    #[error("scalar coordinate {0} is not reduced mod p")]
    BadScalarCoordinate(u32),
    #[error("no primitive {n}-th root of unity: {n} does not divide {order_minus_one}")]
    NoRootOfUnity { n: u64, order_minus_one: u64 },
}

/// A field element, meaningful only together with its [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The integer encoding of the element.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The finite field `F_{p^e}`.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    size: u32,
    /// Monic modulus, lowest degree first, length `e + 1`. Empty when `e == 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.e, self.modulus)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial helpers over F_p, coefficients lowest degree first.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let coef = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let idx = dr - dm + i;
            let sub = (coef as u64 * mi as u64 % p as u64) as u32;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_pow(mut b: u64, mut x: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while x > 0 {
        if x & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        x >>= 1;
    }
    acc
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

/// Monic polynomial with the given encoding of its lower coefficients.
fn monic_from_code(mut code: u64, degree: usize, p: u32) -> Vec<u32> {
    let mut m = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        m.push((code % p as u64) as u32);
        code /= p as u64;
    }
    m.push(1);
    m
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let f = monic_from_code(code, d, p);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// `F_{p^e}` defined by `modulus` (monic, lowest degree first), or by the
    /// smallest monic irreducible polynomial of degree `e` when `None`.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        let modulus = match (e, modulus) {
            (1, None) => Vec::new(),
            (1, Some(_)) => return Err(FieldError::UnexpectedModulus),
            (_, Some(m)) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(FieldError::BadModulusLength {
                        expected: e as usize + 1,
                        got: m.len(),
                    });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(FieldError::BadModulusCoefficient(c));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::Reducible);
                }
                m
            }
            (_, None) => Self::smallest_irreducible(p, e as usize),
        };
        let size = order as u32;
        let mut field = Field {
            p,
            e,
            size,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// Smallest `F_{p^e}` containing a primitive `n`-th root of unity.
    pub fn with_root_of_unity(p: u32, n: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 || n % p as u64 == 0 {
            return Err(FieldError::NoRootOfUnity {
                n,
                order_minus_one: p as u64 - 1,
            });
        }
        let mut e = 1u32;
        loop {
            let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
            if order > MAX_FIELD_ORDER {
                return Err(FieldError::TooLarge(order));
            }
            if (order - 1) % n == 0 {
                return Self::new(p, e, None);
            }
            e += 1;
        }
    }

    fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
        let count = (p as u64).pow(e as u32);
        (0..count)
            .map(|code| monic_from_code(code, e, p))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree")
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.undigits(&r)
    }

    fn build_tables(&mut self) {
        let n = self.size as usize;
        let group = n - 1;
        // find a generator of the multiplicative group
        let factors = prime_factors(group as u64);
        let mut gen = 0u32;
        'search: for g in 2..self.size.max(3) {
            if g >= self.size {
                break;
            }
            for &f in &factors {
                if self.slow_pow(g, group as u64 / f) == 1 {
                    continue 'search;
                }
            }
            gen = g;
            break;
        }
        if n == 2 {
            gen = 1;
        }
        let mut exp = vec![0u32; group.max(1)];
        let mut log = vec![0u32; n];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, gen);
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_pow(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, b);
            }
            b = self.slow_mul(b, b);
            k >>= 1;
        }
        acc
    }

    fn digits(&self, mut code: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(code % self.p);
            code /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.size
    }

    /// Monic modulus, lowest degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.e == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_code(&self, code: u32) -> Option<Elem> {
        (code < self.size).then_some(Elem(code))
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem, FieldError> {
        if c.len() != self.e as usize {
            return Err(FieldError::BadScalarLength {
                expected: self.e as usize,
                got: c.len(),
            });
        }
        if let Some(&bad) = c.iter().find(|&&x| x >= self.p) {
            return Err(FieldError::BadScalarCoordinate(bad));
        }
        Ok(Elem(self.undigits(c)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.e == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let group = self.size as usize - 1;
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elem(self.exp[if s >= group { s - group } else { s }])
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.add(a, self.mul(b, c))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let group = self.size as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Elem(self.exp[(group - l) % group])
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        if a.is_zero() {
            return if k == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let group = self.size as i64 - 1;
        let l = self.log[a.0 as usize] as i64;
        Elem(self.exp[(l * k.rem_euclid(group)).rem_euclid(group) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> u64 {
        assert!(!a.is_zero(), "order of zero");
        let group = self.size as u64 - 1;
        let l = self.log[a.0 as usize] as u64;
        group / gcd(group, l)
    }

    /// The smallest element (by encoding) of exact multiplicative order `n`.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<Elem, FieldError> {
        let group = self.size as u64 - 1;
        if n == 0 || group % n != 0 {
            return Err(FieldError::NoRootOfUnity {
                n,
                order_minus_one: group,
            });
        }
        Ok((1..self.size)
            .map(Elem)
            .find(|&a| self.mult_order(a) == n)
            .expect("cyclic group has elements of every order dividing its size"))
    }

    pub fn shared(self) -> Arc<Field> {
        Arc::new(self)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
