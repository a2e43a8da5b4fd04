//! Fractional Laurent rings `S_m = k[t^(1/m), t^(-1/m)]` with their canonical
//! Hasse–Schmidt derivation, viewed as commutative vertex rings.
//!
//! Elements are sparse maps from rational exponents (denominator dividing m)
//! to nonzero coefficients; the representation is canonical, so equality is
//! coefficient equality. The derivation acts by
//! `D_i(t^q) = binom(q, i) t^(q-i)`, and the vertex products of a commutative
//! vertex ring are `r_n s = D_(-n-1)(r) s` for `n <= -1`, zero otherwise.
//!
//! The Galois twist `galois_apply(j, f)` multiplies the `t^(r/m)` term by
//! `zeta_m^(j r)`; its fixed ring (over a scalar field containing `zeta_m`)
//! is the integral Laurent ring `S_1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{binom_frac, Field, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaurentError {
    #[error("exponent {0} does not lie in (1/{1})Z")]
    BadExponent(Rat, u32),
    #[error("scalar field has no root of unity of order {0}")]
    MissingRoot(u32),
    #[error("division by a non-unit: {0}")]
    NonUnitDivisor(String),
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
}

/// An element of `S_m` for `m = denom`: a finite k-linear combination of
/// `t^q` with `q` in `(1/m)Z`.
#[derive(Clone)]
pub struct FracLaurent<K> {
    denom: u32,
    terms: BTreeMap<Rat, K>,
}

impl<K: Field> FracLaurent<K> {
    pub fn zero(denom: u32) -> Self {
        assert!(denom >= 1);
        FracLaurent {
            denom,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(denom: u32) -> Self {
        Self::monomial(denom, Rat::zero(), K::one())
    }

    /// `c * t^q`; panics if `q` is not in `(1/denom)Z`.
    pub fn monomial(denom: u32, q: Rat, c: K) -> Self {
        let mut f = Self::zero(denom);
        f.add_term(q, c);
        f
    }

    /// `t^(r/m)` in `S_m`.
    pub fn t_pow_frac(m: u32, r: i64) -> Self {
        Self::monomial(m, Rat::new(BigInt::from(r), BigInt::from(m)), K::one())
    }

    /// The ambient fractional denominator `m`.
    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: &Rat) -> K {
        self.terms.get(q).cloned().unwrap_or_else(K::zero)
    }

    fn check_exponent(&self, q: &Rat) -> bool {
        // Canonical rationals have positive reduced denominators, so the
        // exponent lies in (1/m)Z iff its denominator divides m.
        u32::try_from(q.denom()).map_or(false, |d| self.denom % d == 0)
    }

    /// Add `c * t^q` in place, keeping the representation canonical.
    pub fn add_term(&mut self, q: Rat, c: K) {
        if c.is_zero() {
            return;
        }
        assert!(
            self.check_exponent(&q),
            "exponent {q} not in (1/{})Z",
            self.denom
        );
        let entry = self.terms.entry(q.clone()).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&q);
        }
    }

    /// Retag into `S_n`; `n` must be a common multiple of the current
    /// denominator (the value is unchanged).
    pub fn with_denom(&self, n: u32) -> Self {
        assert!(n % self.denom == 0, "cannot retag S_{} into S_{n}", self.denom);
        FracLaurent {
            denom: n,
            terms: self.terms.clone(),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let n = self.denom.lcm(&other.denom);
        (self.with_denom(n), other.with_denom(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.denom == other.denom {
            let mut a = self.clone();
            for (q, c) in &other.terms {
                a.add_term(q.clone(), c.clone());
            }
            return a;
        }
        let (mut a, b) = self.aligned(other);
        for (q, c) in b.terms {
            a.add_term(q, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        FracLaurent {
            denom: self.denom,
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.denom);
        }
        let mut out = Self::zero(self.denom);
        for (q, a) in &self.terms {
            out.add_term(q.clone(), c.clone() * a.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.denom != other.denom {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        let mut out = Self::zero(self.denom);
        for (qa, ca) in &self.terms {
            for (qb, cb) in &other.terms {
                out.add_term(qa + qb, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Inverse when the element is a unit (a single term with invertible
    /// coefficient); `None` otherwise.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (q, c) = self.terms.iter().next().unwrap();
        let ci = c.inv()?;
        Some(Self::monomial(self.denom, -q.clone(), ci))
    }

    /// The i-th Hasse–Schmidt component of the canonical derivation:
    /// `D_i(t^q) = binom(q, i) t^(q-i)`, extended linearly.
    pub fn apply_di(&self, i: u64) -> Self {
        if i == 0 {
            return self.clone();
        }
        let mut out = Self::zero(self.denom);
        for (q, c) in &self.terms {
            let coeff = binom_frac(q, i);
            if coeff.is_zero() {
                continue;
            }
            let shift = q - Rat::from_integer(BigInt::from(i));
            out.add_term(shift, K::from_rat(&coeff) * c.clone());
        }
        out
    }

    /// The n-th vertex product of the commutative vertex ring structure:
    /// `r_n s = D_(-n-1)(r) s` for `n <= -1`, and `0` for `n >= 0`.
    pub fn cvr_nproduct(&self, n: i64, other: &Self) -> Self {
        if n >= 0 {
            return Self::zero(self.denom.lcm(&other.denom));
        }
        let i = (-n - 1) as u64;
        // Monomial fast path: the result is a single term, so build it
        // directly instead of materializing the intermediate derivative.
        if self.denom == other.denom && self.terms.len() == 1 && other.terms.len() == 1 {
            let (qa, ca) = self.terms.iter().next().expect("one term");
            let (qb, cb) = other.terms.iter().next().expect("one term");
            let coeff = binom_frac(qa, i);
            if coeff.is_zero() {
                return Self::zero(self.denom);
            }
            let q = qa - Rat::from_integer(BigInt::from(i)) + qb;
            return Self::monomial(
                self.denom,
                q,
                K::from_rat(&coeff) * ca.clone() * cb.clone(),
            );
        }
        self.apply_di(i).mul(other)
    }

    /// True when the element is killed by every positive Hasse–Schmidt
    /// component, i.e. lies in the scalar field. Over characteristic zero
    /// `D_i = D_1^i / i!`, so testing `D_1` is exact and sufficient.
    pub fn vacuum_kernel_test(&self) -> bool {
        self.apply_di(1).is_zero()
    }

    /// The Galois twist by the j-th power of the distinguished generator:
    /// `t^(r/m) -> zeta_m^(j r) t^(r/m)` where `m` is the ambient
    /// denominator. Fails if the scalar field lacks `zeta_m` and a term
    /// actually needs it.
    pub fn galois_apply(&self, j: i64) -> Result<Self, LaurentError> {
        let m = self.denom;
        let mut out = Self::zero(m);
        for (q, c) in &self.terms {
            let r = (q * Rat::from_integer(BigInt::from(m))).to_integer();
            // exponent of zeta_m, reduced mod m
            let e = (BigInt::from(j) * r).mod_floor(&BigInt::from(m));
            let e: i64 = i64::try_from(e).expect("reduced exponent fits i64");
            if e == 0 {
                out.add_term(q.clone(), c.clone());
            } else {
                let zeta = K::root_of_unity(m).ok_or(LaurentError::MissingRoot(m))?;
                let mut phase = K::one();
                for _ in 0..e {
                    phase = phase * zeta.clone();
                }
                out.add_term(q.clone(), phase * c.clone());
            }
        }
        Ok(out)
    }

    /// Monomial basis `t^(r/m)` for `r/m` in `[-w, w]`, in exponent order.
    pub fn monomial_window(m: u32, w: i64) -> Vec<Self> {
        let mut out = Vec::new();
        for r in -(w * m as i64)..=(w * m as i64) {
            out.push(Self::t_pow_frac(m, r));
        }
        out
    }
}

impl<K: Field> PartialEq for FracLaurent<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K: Field> fmt::Debug for FracLaurent<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (in S_{})", self.denom)
    }
}

/// `S_m` viewed as a commutative vertex ring: vacuum `1`, products
/// `r_n s = D_(-n-1)(r) s` for `n <= -1` and zero for `n >= 0`.
pub struct LaurentRing<K> {
    m: u32,
    _marker: std::marker::PhantomData<K>,
}

impl<K: Field> LaurentRing<K> {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1);
        LaurentRing {
            m,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn fractional_denom(&self) -> u32 {
        self.m
    }
}

impl<K: Field> crate::vertex::VertexAlgebra<K> for LaurentRing<K> {
    type Elem = FracLaurent<K>;

    fn name(&self) -> String {
        format!("S_{}", self.m)
    }

    fn vacuum(&self) -> Self::Elem {
        FracLaurent::one(self.m)
    }

    fn zero_elem(&self) -> Self::Elem {
        FracLaurent::zero(self.m)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }

    fn scale(&self, c: &K, a: &Self::Elem) -> Self::Elem {
        a.scale(c)
    }

    fn nproduct(&self, u: &Self::Elem, n: i64, v: &Self::Elem) -> Self::Elem {
        u.cvr_nproduct(n, v)
    }

    fn regularity_bound(&self, _u: &Self::Elem, _v: &Self::Elem) -> i64 {
        0
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &Self::Elem) -> String {
        format!("{a}")
    }
}

/// A ring endomorphism of `S_m` given by the image of the generator
/// `t^(1/m)`; monomials map by `t^(r/m) -> image^r`, extended linearly.
pub struct RingMap<K> {
    m: u32,
    image_of_gen: FracLaurent<K>,
}

impl<K: Field> RingMap<K> {
    /// The image must be a unit, otherwise negative powers of the generator
    /// have nowhere to go.
    pub fn new(m: u32, image_of_gen: FracLaurent<K>) -> Result<Self, LaurentError> {
        if image_of_gen.unit_inverse().is_none() {
            return Err(LaurentError::NonUnitDivisor(format!("{image_of_gen}")));
        }
        Ok(RingMap {
            m,
            image_of_gen: image_of_gen.with_denom(m),
        })
    }

    /// The Galois generator power `gamma^j : t^(1/m) -> zeta_m^j t^(1/m)`.
    pub fn galois(m: u32, j: i64) -> Result<Self, LaurentError> {
        let zeta = K::root_of_unity(m).ok_or(LaurentError::MissingRoot(m))?;
        let mut phase = K::one();
        for _ in 0..j.rem_euclid(m as i64) {
            phase = phase * zeta.clone();
        }
        Self::new(m, FracLaurent::monomial(m, Rat::new(BigInt::one(), BigInt::from(m)), phase))
    }

    pub fn apply(&self, f: &FracLaurent<K>) -> FracLaurent<K> {
        let f = f.with_denom(self.m);
        let inv = self.image_of_gen.unit_inverse().expect("checked unit");
        let mut out = FracLaurent::zero(self.m);
        for (q, c) in f.terms() {
            let r = (q * Rat::from_integer(BigInt::from(self.m))).to_integer();
            let r: i64 = i64::try_from(r).expect("exponent numerator fits i64");
            let base = if r >= 0 { &self.image_of_gen } else { &inv };
            let mut pow = FracLaurent::one(self.m);
            for _ in 0..r.unsigned_abs() {
                pow = pow.mul(base);
            }
            out = out.add(&pow.scale(c));
        }
        out
    }
}

/// Check that a generator-specified ring map is an automorphism of the
/// differential ring structure at a bounded window: multiplicativity on
/// monomial pairs, unit image of `1`, invertibility of the generator image,
/// and `D_i`-equivariance, all for exponents `r/m` with `|r/m| <= w` and
/// `0 <= i <= imax`.
pub fn diffring_aut_test<K: Field>(
    map: &RingMap<K>,
    w: i64,
    imax: u64,
) -> Result<(), String> {
    let m = map.m;
    let window = FracLaurent::<K>::monomial_window(m, w);
    // h(1) = 1.
    let one = FracLaurent::one(m);
    if map.apply(&one) != one {
        return Err("h(1) != 1".to_string());
    }
    // Multiplicativity on monomial pairs.
    for x in &window {
        for y in &window {
            let lhs = map.apply(&x.mul(y));
            let rhs = map.apply(x).mul(&map.apply(y));
            if lhs != rhs {
                return Err(format!("h(x*y) != h(x)h(y) at x={x}, y={y}"));
            }
        }
    }
    // D_i-equivariance.
    for x in &window {
        for i in 0..=imax {
            let lhs = map.apply(&x.apply_di(i));
            let rhs = map.apply(x).apply_di(i);
            if lhs != rhs {
                return Err(format!("h(D_{i} x) != D_{i} h(x) at x={x}"));
            }
        }
    }
    Ok(())
}

// ---- display ----

impl<K: Field> fmt::Display for FracLaurent<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (q, c) in &self.terms {
            let (neg, mag) = display_split(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", term_string(&mag, q))?;
        }
        Ok(())
    }
}

/// Split a coefficient into (is-negative, magnitude-string); cyclotomic
/// values that are not plainly rational keep their own sign structure and
/// get parenthesized by `term_string` when needed.
fn display_split<K: Field>(c: &K) -> (bool, String) {
    if let Some(q) = c.as_rat() {
        if q.is_negative() {
            return (true, (-q).to_string());
        }
        return (false, q.to_string());
    }
    (false, c.to_string())
}

fn term_string(mag: &str, q: &Rat) -> String {
    let needs_parens = mag.contains('+') || mag.contains('-');
    let coeff = if needs_parens {
        format!("({mag})")
    } else {
        mag.to_string()
    };
    if q.is_zero() {
        return coeff;
    }
    let tpart = if q.is_integer() {
        if q.is_one() {
            "t".to_string()
        } else {
            format!("t^{q}")
        }
    } else {
        format!("t^({q})")
    };
    if coeff == "1" {
        tpart
    } else {
        format!("{coeff}*{tpart}")
    }
}

// ---- parsing ----

/// Tokenizer + recursive-descent parser for Laurent expressions like
/// `3/2*t^(-1/2) + (1+z4)*t^2 - 1`. `z<N>` denotes the distinguished
/// primitive N-th root of unity in the scalar field.
mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    pub enum Tok {
        Int(BigInt),
        T,
        Z(u32),
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
    }

    pub fn lex(s: &str) -> Result<Vec<(usize, Tok)>, LaurentError> {
        let b = s.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let c = b[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    out.push((i, Tok::Plus));
                    i += 1;
                }
                '-' => {
                    out.push((i, Tok::Minus));
                    i += 1;
                }
                '*' => {
                    out.push((i, Tok::Star));
                    i += 1;
                }
                '/' => {
                    out.push((i, Tok::Slash));
                    i += 1;
                }
                '^' => {
                    out.push((i, Tok::Caret));
                    i += 1;
                }
                '(' => {
                    out.push((i, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    out.push((i, Tok::RParen));
                    i += 1;
                }
                't' => {
                    out.push((i, Tok::T));
                    i += 1;
                }
                'z' => {
                    let start = i;
                    i += 1;
                    let ds = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ds == i {
                        return Err(LaurentError::Parse {
                            at: start,
                            msg: "z must be followed by an order".to_string(),
                        });
                    }
                    let n: u32 = s[ds..i].parse().map_err(|_| LaurentError::Parse {
                        at: ds,
                        msg: "root order out of range".to_string(),
                    })?;
                    out.push((start, Tok::Z(n)));
                }
                '0'..='9' => {
                    let start = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: BigInt = s[start..i].parse().expect("digits parse");
                    out.push((start, Tok::Int(n)));
                }
                _ => {
                    return Err(LaurentError::Parse {
                        at: i,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        Ok(out)
    }

    pub struct Parser<'a, K> {
        toks: &'a [(usize, Tok)],
        pos: usize,
        denom: u32,
        _marker: std::marker::PhantomData<K>,
    }

    impl<'a, K: Field> Parser<'a, K> {
        pub fn new(toks: &'a [(usize, Tok)], denom: u32) -> Self {
            Parser {
                toks,
                pos: 0,
                denom,
                _marker: std::marker::PhantomData,
            }
        }

        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos).map(|(_, t)| t)
        }

        fn at(&self) -> usize {
            self.toks
                .get(self.pos)
                .map(|(i, _)| *i)
                .unwrap_or(usize::MAX)
        }

        fn bump(&mut self) -> Option<Tok> {
            let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
            self.pos += 1;
            t
        }

        fn err(&self, msg: &str) -> LaurentError {
            LaurentError::Parse {
                at: self.at().min(1 << 20),
                msg: msg.to_string(),
            }
        }

        pub fn expr(&mut self) -> Result<FracLaurent<K>, LaurentError> {
            let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                self.term()?.neg()
            } else {
                self.term()?
            };
            loop {
                match self.peek() {
                    Some(Tok::Plus) => {
                        self.bump();
                        let t = self.term()?;
                        acc = acc.add(&t);
                    }
                    Some(Tok::Minus) => {
                        self.bump();
                        let t = self.term()?;
                        acc = acc.sub(&t);
                    }
                    _ => return Ok(acc),
                }
            }
        }

        fn term(&mut self) -> Result<FracLaurent<K>, LaurentError> {
            let mut acc = self.factor()?;
            loop {
                match self.peek() {
                    Some(Tok::Star) => {
                        self.bump();
                        let f = self.factor()?;
                        acc = acc.mul(&f);
                    }
                    Some(Tok::Slash) => {
                        self.bump();
                        let f = self.factor()?;
                        let inv = f
                            .unit_inverse()
                            .ok_or_else(|| self.err("division by non-unit"))?;
                        acc = acc.mul(&inv);
                    }
                    // implicit products like `2t` are not in the grammar
                    _ => return Ok(acc),
                }
            }
        }

        fn factor(&mut self) -> Result<FracLaurent<K>, LaurentError> {
            let base = self.atom()?;
            if matches!(self.peek(), Some(Tok::Caret)) {
                self.bump();
                let e = self.exponent()?;
                return self.power(base, e);
            }
            Ok(base)
        }

        fn power(&self, base: FracLaurent<K>, e: Rat) -> Result<FracLaurent<K>, LaurentError> {
            // General elements only take integer powers; single monomials
            // take any exponent in (1/m)Z.
            if base.num_terms() == 1 {
                let (q, c) = base.terms().next().unwrap();
                if e.is_integer() {
                    let n: i64 = i64::try_from(e.to_integer()).map_err(|_| self.err("power too large"))?;
                    let (qq, cc) = if n >= 0 {
                        (q.clone(), c.clone())
                    } else {
                        (
                            q.clone(),
                            c.inv().ok_or_else(|| self.err("inverse of zero"))?,
                        )
                    };
                    let mut out = FracLaurent::one(self.denom.lcm(&base.denom()));
                    for _ in 0..n.unsigned_abs() {
                        out = out.mul(&FracLaurent::monomial(base.denom(), qq.clone(), cc.clone()));
                    }
                    return Ok(out);
                }
                // fractional power: only of a bare t (coefficient 1, q=1)
                if c.is_one() && q.is_one() {
                    let m_needed = u32::try_from(e.denom().clone())
                        .map_err(|_| self.err("exponent denominator too large"))?;
                    let m = self.denom.lcm(&m_needed);
                    return Ok(FracLaurent::monomial(m, e, K::one()));
                }
                return Err(self.err("fractional power of a non-monomial"));
            }
            if !e.is_integer() || e.is_negative() {
                return Err(self.err("general elements only take nonnegative integer powers"));
            }
            let n: u64 = u64::try_from(e.to_integer()).map_err(|_| self.err("power too large"))?;
            let mut out = FracLaurent::one(base.denom());
            for _ in 0..n {
                out = out.mul(&base);
            }
            Ok(out)
        }

        /// Exponent after `^`: an integer, or a parenthesized rational with
        /// optional sign, e.g. `2`, `-1`, `(1/2)`, `(-3/2)`.
        fn exponent(&mut self) -> Result<Rat, LaurentError> {
            let neg_outer = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            let e = match self.bump() {
                Some(Tok::Int(n)) => Rat::from_integer(n),
                Some(Tok::LParen) => {
                    let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    let num = match self.bump() {
                        Some(Tok::Int(n)) => n,
                        _ => return Err(self.err("expected integer in exponent")),
                    };
                    let den = if matches!(self.peek(), Some(Tok::Slash)) {
                        self.bump();
                        match self.bump() {
                            Some(Tok::Int(n)) => n,
                            _ => return Err(self.err("expected denominator in exponent")),
                        }
                    } else {
                        BigInt::one()
                    };
                    if !matches!(self.bump(), Some(Tok::RParen)) {
                        return Err(self.err("expected ) in exponent"));
                    }
                    let q = Rat::new(num, den);
                    if neg {
                        -q
                    } else {
                        q
                    }
                }
                _ => return Err(self.err("expected exponent")),
            };
            Ok(if neg_outer { -e } else { e })
        }

        fn atom(&mut self) -> Result<FracLaurent<K>, LaurentError> {
            match self.bump() {
                Some(Tok::Int(n)) => Ok(FracLaurent::monomial(
                    self.denom,
                    Rat::zero(),
                    K::from_rat(&Rat::from_integer(n)),
                )),
                Some(Tok::T) => Ok(FracLaurent::monomial(self.denom, Rat::one(), K::one())),
                Some(Tok::Z(n)) => {
                    let z = K::root_of_unity(n)
                        .ok_or(LaurentError::MissingRoot(n))?;
                    Ok(FracLaurent::monomial(self.denom, Rat::zero(), z))
                }
                Some(Tok::LParen) => {
                    let e = self.expr()?;
                    if !matches!(self.bump(), Some(Tok::RParen)) {
                        return Err(self.err("expected )"));
                    }
                    Ok(e)
                }
                _ => Err(self.err("expected an atom")),
            }
        }

        pub fn finished(&self) -> bool {
            self.pos == self.toks.len()
        }
    }
}

/// Parse a Laurent expression into `S_m` for the smallest adequate `m`
/// that is a multiple of `denom_hint`.
pub fn parse_laurent<K: Field>(s: &str, denom_hint: u32) -> Result<FracLaurent<K>, LaurentError> {
    let toks = parse::lex(s)?;
    if toks.is_empty() {
        return Err(LaurentError::Parse {
            at: 0,
            msg: "empty expression".to_string(),
        });
    }
    let mut p = parse::Parser::<K>::new(&toks, denom_hint);
    let v = p.expr()?;
    if !p.finished() {
        return Err(LaurentError::Parse {
            at: 0,
            msg: "trailing input after expression".to_string(),
        });
    }
    Ok(v.with_denom(v.denom().lcm(&denom_hint)))
}

/// Parse a scalar (constant) expression.
pub fn parse_scalar<K: Field>(s: &str) -> Result<K, LaurentError> {
    let v: FracLaurent<K> = parse_laurent(s, 1)?;
    if v.is_zero() {
        return Ok(K::zero());
    }
    if v.num_terms() == 1 {
        let (q, c) = v.terms().next().unwrap();
        if q.is_zero() {
            return Ok(c.clone());
        }
    }
    Err(LaurentError::Parse {
        at: 0,
        msg: format!("expected a scalar, got {v}"),
    })
}
