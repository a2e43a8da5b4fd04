//! Exact arithmetic in cyclotomic number fields Q(zeta_m).
//!
//! A [`Cyc`] is stored on the power basis `1, z, ..., z^(phi(m)-1)` of
//! `Q[x]/(Phi_m(x))` where `Phi_m` is the m-th cyclotomic polynomial and `z`
//! denotes the distinguished primitive m-th root of unity. Representations
//! are always reduced mod `Phi_m`, so equality of coefficient vectors at a
//! common conductor is exact value equality.
//!
//! Mixed-conductor operations promote both operands to the lcm of their
//! conductors via the compatible embeddings `zeta_m = zeta_N^(N/m)`; in
//! particular `zeta_power(m*l, l*j)` and `zeta_power(m, j)` are equal.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Rat};

/// Euler totient.
pub fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (ascending) of the m-th cyclotomic polynomial.
///
/// Computed as `(x^m - 1) / prod_{d|m, d<m} Phi_d` by exact integer
/// division, and memoized.
pub fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(p) = cyclo_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^m - 1
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        for d in 1..m {
            if m % d == 0 {
                num = int_poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    cyclo_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

/// Exact division of integer polynomials (ascending coefficients); panics if
/// the division is not exact. Divisor must be monic.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(rem.len() > dd);
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (i, dc) in den.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

// ---- rational polynomial helpers (ascending coefficient vectors) ----

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m` (over Q).
fn poly_rem(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = a.to_vec();
    poly_trim(&mut rem);
    let dm = m.len() - 1;
    while rem.len() > dm {
        let k = rem.len() - 1 - dm;
        let c = rem.last().unwrap().clone();
        for (i, mc) in m.iter().enumerate() {
            rem[k + i] -= &c * mc;
        }
        poly_trim(&mut rem);
    }
    rem
}

/// Quotient and remainder of `a` by nonzero `b` over Q.
fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / lead;
        quot[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            rem[k + i] -= &c * bc;
        }
        poly_trim(&mut rem);
    }
    (quot, rem)
}

/// Inverse of `a` modulo the monic irreducible `m`, via the extended
/// Euclidean algorithm. `None` if `a` reduces to zero.
fn poly_inv_mod(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    let a = poly_rem(a, m);
    if a.is_empty() {
        return None;
    }
    // Invariants: r0 = s0*a mod m, r1 = s1*a mod m.
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1 = a;
    let mut s0: Vec<Rat> = Vec::new();
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is now a nonzero constant gcd (m irreducible, a nonzero mod m).
    assert_eq!(r0.len(), 1, "cyclotomic modulus not coprime to operand");
    let c = r0[0].recip();
    let mut inv: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
    inv = poly_rem(&inv, m);
    Some(inv)
}

/// An element of the cyclotomic field of the given conductor, reduced on the
/// power basis of `Q[x]/(Phi_m)`. The coefficient vector always has exactly
/// `phi(conductor)` entries.
#[derive(Clone, Debug)]
pub struct Cyc {
    conductor: u32,
    coeffs: Vec<Rat>,
}

impl Cyc {
    /// The modulus as a rational monic polynomial.
    fn modulus(m: u32) -> Vec<Rat> {
        cyclotomic_poly(m)
            .into_iter()
            .map(Rat::from_integer)
            .collect()
    }

    fn from_poly(conductor: u32, poly: &[Rat]) -> Self {
        let modulus = Self::modulus(conductor);
        let mut coeffs = poly_rem(poly, &modulus);
        coeffs.resize(euler_phi(conductor) as usize, Rat::zero());
        Cyc { conductor, coeffs }
    }

    /// A rational number as a conductor-1 element.
    pub fn from_rational(q: Rat) -> Self {
        Cyc {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// The distinguished primitive m-th root of unity.
    pub fn zeta(m: u32) -> Self {
        Self::from_poly(m, &[Rat::zero(), Rat::one()])
    }

    /// `zeta_m^j` (j may be negative).
    pub fn zeta_power(m: u32, j: i64) -> Self {
        let e = j.rem_euclid(m as i64) as usize;
        let mut poly = vec![Rat::zero(); e + 1];
        poly[e] = Rat::one();
        Self::from_poly(m, &poly)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients on the power basis at the current conductor.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Re-express at conductor `n` (must be a multiple of the current one),
    /// using the embedding `zeta_m -> zeta_n^(n/m)`.
    pub fn promote(&self, n: u32) -> Self {
        assert!(
            n % self.conductor == 0,
            "cannot promote conductor {} to {}",
            self.conductor,
            n
        );
        if n == self.conductor {
            return self.clone();
        }
        let step = (n / self.conductor) as usize;
        let mut poly = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] = c.clone();
            }
        }
        Self::from_poly(n, &poly)
    }

    /// Both operands at the lcm of their conductors.
    fn aligned(&self, other: &Cyc) -> (Cyc, Cyc, u32) {
        let n = self.conductor.lcm(&other.conductor);
        (self.promote(n), other.promote(n), n)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyc {}

impl std::ops::Add for Cyc {
    type Output = Cyc;
    fn add(self, rhs: Cyc) -> Cyc {
        let (mut a, b, _) = self.aligned(&rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl std::ops::Sub for Cyc {
    type Output = Cyc;
    fn sub(self, rhs: Cyc) -> Cyc {
        let (mut a, b, _) = self.aligned(&rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl std::ops::Neg for Cyc {
    type Output = Cyc;
    fn neg(mut self) -> Cyc {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl std::ops::Mul for Cyc {
    type Output = Cyc;
    fn mul(self, rhs: Cyc) -> Cyc {
        let (a, b, n) = self.aligned(&rhs);
        let prod = poly_mul(&a.coeffs, &b.coeffs);
        Cyc::from_poly(n, &prod)
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc::from_rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::from_rational(Rat::one())
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rat() {
            return write!(f, "{q}");
        }
        let sym = format!("z{}", self.conductor);
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{sign}")?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if i == 1 {
                    write!(f, "{sym}")?;
                } else {
                    write!(f, "{sym}^{i}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Field for Cyc {
    fn from_rat(q: &Rat) -> Self {
        Cyc::from_rational(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        let modulus = Self::modulus(self.conductor);
        let inv = poly_inv_mod(&self.coeffs, &modulus)?;
        let mut coeffs = inv;
        coeffs.resize(euler_phi(self.conductor) as usize, Rat::zero());
        Some(Cyc {
            conductor: self.conductor,
            coeffs,
        })
    }

    fn root_of_unity(order: u32) -> Option<Self> {
        Some(Cyc::zeta(order))
    }

    fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}
