//! Sparse multivariate polynomials over a scalar field, with the
//! degree-reverse-lexicographic order, multivariate division with
//! quotient tracking, and a resource-bounded Buchberger engine whose
//! membership answers are certified:
//!
//! - "yes" always carries cofactors with `f = Σ cofactor_μ · gen_μ`,
//!   re-verified by direct multiplication before being returned;
//! - "no" is only ever returned from a *completed* Gröbner basis;
//! - anything else is an honest "inconclusive" with the limit that bit.
//!
//! Monomials are exponent vectors of a fixed arity per ring context;
//! every polynomial in one computation must use the same arity (checked
//! in debug builds). Equality and ordering of monomials agree (both pad
//! missing positions with zero), which the term maps rely on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::scalar::{Field, Rat};

/// Exponent vector. Ordered by total degree, ties broken reverse
/// lexicographically from the last variable (degrevlex).
#[derive(Debug, Clone)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|e| *e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len(), "monomial arity mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Self) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len(), "monomial arity mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Self) -> Self {
        debug_assert!(self.divides(other));
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len(), "monomial arity mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Monomial {}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for k in (0..n).rev() {
                let a = self.0.get(k).copied().unwrap_or(0);
                let b = other.0.get(k).copied().unwrap_or(0);
                if a != b {
                    // Rightmost difference: the SMALLER exponent wins
                    // (reverse lexicographic).
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

/// A finite sum of scalar-coefficient monomials in canonical form.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<K: Field> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> MultiPoly<K> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(nvars, i), K::one());
        p
    }

    pub fn monomial(m: Monomial, c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        let dead: Vec<Monomial> = self
            .terms
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .collect();
        for k in dead {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-K::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        let mut out = Self::zero();
        for (mm, v) in &self.terms {
            out.add_term(mm.mul(m), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &other.terms {
            out = out.add(&self.mul_monomial(m, c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    /// Leading term in degrevlex (largest monomial).
    pub fn leading(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Scale so the leading coefficient is 1 (no-op on zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Whether every coefficient is an integer (used to certify results
    /// over the integers after computing over the rationals).
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| match c.as_rat() {
            Some(q) => q.is_integer(),
            None => false,
        })
    }

    /// Substitute values for the variables in any commutative algebra
    /// over the scalars, given by its operations.
    pub fn eval_with<T: Clone>(
        &self,
        one: T,
        vals: &[T],
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
        scale: impl Fn(&T, &K) -> T,
        zero: T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut term = one.clone();
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    term = mul(&term, &vals[i]);
                }
            }
            acc = add(&acc, &scale(&term, c));
        }
        acc
    }

    pub fn render(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        // Render leading term first (descending order reads naturally).
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            let coeff = format!("{c}");
            if factors.is_empty() {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(factors.join("*"));
            } else if coeff == "-1" {
                parts.push(format!("-{}", factors.join("*")));
            } else {
                parts.push(format!("{}*{}", coeff, factors.join("*")));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self
            .terms
            .keys()
            .map(|m| m.0.len())
            .next()
            .unwrap_or(0);
        let vars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.render(&vars))
    }
}

/// Result of multivariate division: `f = Σ quotients[i]·divisors[i] + remainder`,
/// and no remainder term is divisible by any divisor's leading monomial.
pub struct Reduction<K: Field> {
    pub quotients: Vec<MultiPoly<K>>,
    pub remainder: MultiPoly<K>,
}

/// Multivariate division with quotient tracking.
pub fn reduce<K: Field>(f: &MultiPoly<K>, divisors: &[MultiPoly<K>]) -> Reduction<K> {
    let mut quotients = vec![MultiPoly::zero(); divisors.len()];
    let mut remainder = MultiPoly::zero();
    let mut p = f.clone();
    'outer: while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for (i, g) in divisors.iter().enumerate() {
            if let Some((gm, gc)) = g.leading() {
                if gm.divides(&lm) {
                    let qm = gm.div_into(&lm);
                    let qc = lc.div_exact(gc).expect("leading coefficients are nonzero");
                    quotients[i].add_term(qm.clone(), qc.clone());
                    p = p.sub(&g.mul_monomial(&qm, &qc));
                    continue 'outer;
                }
            }
        }
        // No divisor applies: move the leading term to the remainder.
        remainder.add_term(lm.clone(), lc.clone());
        p.add_term(lm, -lc);
    }
    Reduction {
        quotients,
        remainder,
    }
}

/// Resource bounds for the Buchberger loop.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum number of S-pairs processed.
    pub max_pairs: usize,
    /// Maximum basis size.
    pub max_basis: usize,
    /// Maximum number of terms in any basis polynomial.
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pairs: 10_000,
            max_basis: 200,
            max_terms: 20_000,
        }
    }
}

/// A (possibly partial) Gröbner basis, with each element expressed in
/// terms of the original generators for certificate extraction.
pub struct GroebnerResult<K: Field> {
    pub basis: Vec<MultiPoly<K>>,
    /// `exprs[k][μ]`: basis[k] = Σ_μ exprs[k][μ] · gens[μ].
    pub exprs: Vec<Vec<MultiPoly<K>>>,
    /// Whether the loop ran to completion (all S-pairs reduced to zero).
    pub complete: bool,
    pub pairs_processed: usize,
}

/// Buchberger's algorithm with the coprime-leading-term criterion and
/// explicit resource bounds; never panics on big inputs, just reports
/// `complete: false`.
pub fn groebner<K: Field>(gens: &[MultiPoly<K>], limits: &Limits) -> GroebnerResult<K> {
    let ngens = gens.len();
    let mut basis: Vec<MultiPoly<K>> = Vec::new();
    let mut exprs: Vec<Vec<MultiPoly<K>>> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let lead = g.leading().expect("nonzero").1.clone();
        let inv = lead.inv().expect("field");
        basis.push(g.scale(&inv));
        let mut e = vec![MultiPoly::zero(); ngens];
        e[i] = MultiPoly::constant(arity_of(g), inv);
        exprs.push(e);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut processed = 0usize;
    let mut complete = true;
    while let Some((i, j)) = pairs.pop() {
        if processed >= limits.max_pairs {
            complete = false;
            break;
        }
        processed += 1;
        let (lm_i, _) = basis[i].leading().expect("basis is nonzero");
        let (lm_j, _) = basis[j].leading().expect("basis is nonzero");
        let lcm = lm_i.lcm(lm_j);
        // Coprime criterion: if lcm = lm_i · lm_j the S-pair reduces to 0.
        if lcm == lm_i.mul(lm_j) {
            continue;
        }
        let mi = lm_i.div_into(&lcm);
        let mj = lm_j.div_into(&lcm);
        let spoly = basis[i]
            .mul_monomial(&mi, &K::one())
            .sub(&basis[j].mul_monomial(&mj, &K::one()));
        let sexpr: Vec<MultiPoly<K>> = (0..ngens)
            .map(|mu| {
                exprs[i][mu]
                    .mul_monomial(&mi, &K::one())
                    .sub(&exprs[j][mu].mul_monomial(&mj, &K::one()))
            })
            .collect();
        let red = reduce(&spoly, &basis);
        if red.remainder.is_zero() {
            continue;
        }
        if red.remainder.num_terms() > limits.max_terms || basis.len() >= limits.max_basis {
            complete = false;
            break;
        }
        let mut rexpr = sexpr;
        for (k, q) in red.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for mu in 0..ngens {
                rexpr[mu] = rexpr[mu].sub(&q.mul(&exprs[k][mu]));
            }
        }
        let lead = red.remainder.leading().expect("nonzero").1.clone();
        let inv = lead.inv().expect("field");
        let new_poly = red.remainder.scale(&inv);
        let new_expr: Vec<MultiPoly<K>> = rexpr.iter().map(|e| e.scale(&inv)).collect();
        basis.push(new_poly);
        exprs.push(new_expr);
        let new_idx = basis.len() - 1;
        for k in 0..new_idx {
            pairs.push((k, new_idx));
        }
    }
    GroebnerResult {
        basis,
        exprs,
        complete,
        pairs_processed: processed,
    }
}

fn arity_of<K: Field>(p: &MultiPoly<K>) -> usize {
    p.terms.keys().map(|m| m.0.len()).next().unwrap_or(0)
}

/// Outcome of an ideal-membership query.
pub enum Membership<K: Field> {
    /// In the ideal, with verified cofactors: `f = Σ cofactors[μ]·gens[μ]`.
    Yes { cofactors: Vec<MultiPoly<K>> },
    /// Not in the ideal (certified by a completed Gröbner basis).
    No,
    /// Resource bounds prevented a definite answer.
    Inconclusive { reason: String },
}

/// Check a membership certificate by direct multiplication.
pub fn verify_certificate<K: Field>(
    f: &MultiPoly<K>,
    gens: &[MultiPoly<K>],
    cofactors: &[MultiPoly<K>],
) -> bool {
    if cofactors.len() != gens.len() {
        return false;
    }
    let mut acc = MultiPoly::zero();
    for (c, g) in cofactors.iter().zip(gens) {
        acc = acc.add(&c.mul(g));
    }
    acc == *f
}

/// Decide membership of `f` in the ideal generated by `gens`, within
/// resource bounds. Every "yes" is certificate-verified before return.
pub fn ideal_member<K: Field>(
    f: &MultiPoly<K>,
    gens: &[MultiPoly<K>],
    limits: &Limits,
) -> Membership<K> {
    if f.is_zero() {
        return Membership::Yes {
            cofactors: vec![MultiPoly::zero(); gens.len()],
        };
    }
    // Cheap path: direct division by the generators.
    let direct = reduce(f, gens);
    if direct.remainder.is_zero() && verify_certificate(f, gens, &direct.quotients) {
        return Membership::Yes {
            cofactors: direct.quotients,
        };
    }
    let gb = groebner(gens, limits);
    let red = reduce(f, &gb.basis);
    if red.remainder.is_zero() {
        // Assemble cofactors in terms of the original generators.
        let mut cof = vec![MultiPoly::zero(); gens.len()];
        for (k, q) in red.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for mu in 0..gens.len() {
                cof[mu] = cof[mu].add(&q.mul(&gb.exprs[k][mu]));
            }
        }
        if verify_certificate(f, gens, &cof) {
            return Membership::Yes { cofactors: cof };
        }
        return Membership::Inconclusive {
            reason: "certificate assembly failed verification".to_string(),
        };
    }
    if gb.complete {
        Membership::No
    } else {
        Membership::Inconclusive {
            reason: format!(
                "resource limit hit after {} S-pairs (basis size {})",
                gb.pairs_processed,
                gb.basis.len()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyParseError {
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Parse a polynomial over the given variable names. Grammar: sums and
/// differences of terms, `*` products, `^` nonnegative integer powers,
/// rational constants `a` or `a/b`, parentheses.
pub fn parse_poly<K: Field>(s: &str, vars: &[String]) -> Result<MultiPoly<K>, PolyParseError> {
    let tokens = lex(s)?;
    let mut p = PolyParser {
        tokens: &tokens,
        pos: 0,
        vars,
        _scalar: std::marker::PhantomData,
    };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(PolyParseError::Parse {
            at: p.tokens[p.pos].1,
            msg: "trailing input".to_string(),
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, PolyParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: num_bigint::BigInt = s[start..i].parse().expect("digits");
                // Optional /denominator.
                let mut den = num_bigint::BigInt::from(1);
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(PolyParseError::Parse {
                            at: i,
                            msg: "expected digits after /".to_string(),
                        });
                    }
                    den = s[dstart..j].parse().expect("digits");
                    i = j;
                }
                out.push((Tok::Num(Rat::new(num, den)), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(s[start..i].to_string()), start));
            }
            other => {
                return Err(PolyParseError::Parse {
                    at: i,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct PolyParser<'a, K: Field> {
    tokens: &'a [(Tok, usize)],
    pos: usize,
    vars: &'a [String],
    _scalar: std::marker::PhantomData<K>,
}

impl<'a, K: Field> PolyParser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn at(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, at)| *at)
            .unwrap_or(usize::MAX)
    }

    fn expr(&mut self) -> Result<MultiPoly<K>, PolyParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<K>, PolyParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly<K>, PolyParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(q)) if q.is_integer() && !q.is_negative() => {
                    self.pos += 1;
                    let e = u32::try_from(q.to_integer()).map_err(|_| {
                        PolyParseError::Parse {
                            at: self.at(),
                            msg: "exponent too large".to_string(),
                        }
                    })?;
                    let mut acc = MultiPoly::one(self.nvars());
                    for _ in 0..e {
                        acc = acc.mul(&base);
                    }
                    return Ok(acc);
                }
                _ => {
                    return Err(PolyParseError::Parse {
                        at: self.at(),
                        msg: "expected a nonnegative integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn base(&mut self) -> Result<MultiPoly<K>, PolyParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.nvars(), K::from_rat(&q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MultiPoly::var(self.nvars(), i)),
                    None => Err(PolyParseError::UnknownVariable(name)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(PolyParseError::Parse {
                        at: self.at(),
                        msg: "expected )".to_string(),
                    }),
                }
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            _ => Err(PolyParseError::Parse {
                at: self.at(),
                msg: "expected a number, variable, or (".to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_traits::One;

    type P = MultiPoly<Rat>;

    fn vars2() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    fn p(s: &str) -> P {
        parse_poly(s, &vars2()).unwrap()
    }

    #[test]
    fn degrevlex_order() {
        // x^3 > x^2 y > x y^2 > y^3 > x^2 > ...
        let x3 = Monomial(vec![3, 0]);
        let x2y = Monomial(vec![2, 1]);
        let xy2 = Monomial(vec![1, 2]);
        let y3 = Monomial(vec![0, 3]);
        let x2 = Monomial(vec![2, 0]);
        assert!(x3 > x2y);
        assert!(x2y > xy2);
        assert!(xy2 > y3);
        assert!(y3 > x2);
        // Leading term picks the max.
        let f = p("x^2*y + x^3 + y^3");
        assert_eq!(f.leading().unwrap().0, &x3);
    }

    #[test]
    fn arithmetic_and_parse_round_trip() {
        let f = p("(x + y)^2");
        let g = p("x^2 + 2*x*y + y^2");
        assert_eq!(f, g);
        assert_eq!(p("x - x"), P::zero());
        assert_eq!(p("2/3*x").scale(&rat(3, 2)), p("x"));
        // Render and reparse.
        let h = p("x^2*y - 1/2*y + 3");
        let rendered = h.render(&vars2());
        assert_eq!(parse_poly::<Rat>(&rendered, &vars2()).unwrap(), h);
        // Errors.
        assert!(parse_poly::<Rat>("x + z", &vars2()).is_err());
        assert!(parse_poly::<Rat>("x ^ -2", &vars2()).is_err());
        assert!(parse_poly::<Rat>("x +", &vars2()).is_err());
    }

    #[test]
    fn division_remainder_property() {
        // Divide f by {g1, g2} and verify f = q1 g1 + q2 g2 + r with no
        // remainder term divisible by a leading monomial.
        let f = p("x^2*y + x*y^2 + y^2");
        let g1 = p("x*y - 1");
        let g2 = p("y^2 - 1");
        let red = reduce(&f, &[g1.clone(), g2.clone()]);
        let recomposed = red.quotients[0]
            .mul(&g1)
            .add(&red.quotients[1].mul(&g2))
            .add(&red.remainder);
        assert_eq!(recomposed, f);
        for (m, _) in red.remainder.terms() {
            assert!(!g1.leading().unwrap().0.divides(m));
            assert!(!g2.leading().unwrap().0.divides(m));
        }
    }

    #[test]
    fn groebner_closes_the_classic_example() {
        // gens: x^3 − 2xy, x^2 y − 2y^2 + x. The reduced basis contains
        // x^2, xy, y^2 − x/2 up to scaling; membership queries below are
        // the real assertions.
        let g1 = p("x^3 - 2*x*y");
        let g2 = p("x^2*y - 2*y^2 + x");
        let gens = vec![g1, g2];
        let gb = groebner(&gens, &Limits::default());
        assert!(gb.complete);
        // Every basis element must be expressible in the generators:
        // verify the tracked expressions.
        for (k, b) in gb.basis.iter().enumerate() {
            let mut acc = P::zero();
            for (mu, e) in gb.exprs[k].iter().enumerate() {
                acc = acc.add(&e.mul(&gens[mu]));
            }
            assert_eq!(&acc, b, "expression tracking broke at basis[{k}]");
        }
        // x^2 ∈ I, and x ∉ I.
        match ideal_member(&p("x^2"), &gens, &Limits::default()) {
            Membership::Yes { cofactors } => {
                assert!(verify_certificate(&p("x^2"), &gens, &cofactors));
            }
            _ => panic!("x^2 should be a member"),
        }
        assert!(matches!(
            ideal_member(&p("x"), &gens, &Limits::default()),
            Membership::No
        ));
    }

    #[test]
    fn membership_cheap_path_and_zero() {
        let gens = vec![p("x*y - 1"), p("y^2 - 1")];
        // Direct multiple: no Gröbner needed.
        match ideal_member(&p("x*y^3 - y^2"), &gens, &Limits::default()) {
            Membership::Yes { cofactors } => {
                assert!(verify_certificate(&p("x*y^3 - y^2"), &gens, &cofactors));
            }
            _ => panic!("expected membership"),
        }
        assert!(matches!(
            ideal_member(&P::zero(), &gens, &Limits::default()),
            Membership::Yes { .. }
        ));
        // The unit ideal test: 1 ∈ ⟨x, x - 1⟩.
        let unit_gens = vec![p("x"), p("x - 1")];
        match ideal_member(&p("1"), &unit_gens, &Limits::default()) {
            Membership::Yes { cofactors } => {
                assert!(verify_certificate(&p("1"), &unit_gens, &cofactors));
            }
            _ => panic!("1 is in the unit ideal"),
        }
    }

    #[test]
    fn nonmembership_needs_a_complete_basis() {
        // With a starved pair budget the engine must say inconclusive,
        // never "no".
        let gens = vec![p("x^3 - 2*x*y"), p("x^2*y - 2*y^2 + x")];
        let starved = Limits {
            max_pairs: 0,
            ..Limits::default()
        };
        match ideal_member(&p("x"), &gens, &starved) {
            Membership::Inconclusive { .. } => {}
            Membership::No => panic!("claimed `no` without a complete basis"),
            Membership::Yes { .. } => panic!("x is not a member"),
        }
    }

    #[test]
    fn integrality_flag() {
        assert!(p("2*x + 3").is_integral());
        assert!(!p("1/2*x").is_integral());
    }

    #[test]
    fn eval_with_substitutes() {
        // Evaluate x^2 + 2y at x = 3, y = 1/2 in the scalars themselves.
        let f = p("x^2 + 2*y");
        let val = f.eval_with(
            Rat::one(),
            &[rat_int(3), rat(1, 2)],
            |a, b| a + b,
            |a, b| a * b,
            |a, c| a * c,
            rat_int(0),
        );
        assert_eq!(val, rat_int(10));
    }
}
