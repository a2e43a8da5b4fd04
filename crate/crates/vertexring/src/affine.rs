//! Universal affine vertex algebras attached to a Lie algebra presentation
//! with an invariant form, at a fixed scalar level.
//!
//! States live in the PBW basis: a monomial is a sorted list of creation
//! modes `a_(q)` with `q < 0` applied to the vacuum, kept with the most
//! negative mode leftmost (ties broken by generator index). The commutator
//!
//! ```text
//! [a_(q), b_(q1)] = [a,b]_(q+q1) + q (a,b) level delta_(q+q1,0)
//! ```
//!
//! drives the straightening of arbitrary mode applications, and all n-th
//! products reduce recursively to mode actions through the iterate identity
//! (the `m = 0` Borcherds specialization)
//!
//! ```text
//! (a_(p) v)_n w = sum_i (-1)^i binom(p,i)
//!     [ a_(p-i) (v_(n+i) w) - (-1)^p v_(p+n-i) (a_(i) w) ].
//! ```
//!
//! The degree (conformal weight) of a monomial is the sum of `-q` over its
//! modes; products satisfy `deg(u_n v) = deg u + deg v - n - 1`, which gives
//! the regularity bound used to truncate identity sums. Mode actions and
//! monomial products are memoized per algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::lie::LiePresentation;
use crate::scalar::{binom_int, Field, Rat};
use crate::vertex::VertexAlgebra;

/// Recursion guard for straightening; exceeding it indicates a bug, not a
/// big input.
const DEPTH_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AffineError {
    #[error("presentation is invalid: {0:?}")]
    InvalidPresentation(Vec<String>),
    #[error("straightening recursion exceeded depth {0} (internal bug)")]
    DepthExceeded(usize),
}

/// A PBW monomial: creation modes `(q, generator)` with `q < 0`, sorted
/// ascending (most negative mode leftmost, generator index breaking ties).
/// The empty monomial is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial(pub Vec<(i64, usize)>);

impl PbwMonomial {
    pub fn vacuum() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn single(q: i64, gen: usize) -> Self {
        assert!(q < 0, "creation modes are negative");
        PbwMonomial(vec![(q, gen)])
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    /// Conformal weight: sum of `-q`.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(q, _)| -q).sum()
    }

    /// Number of modes (the filtration degree).
    pub fn length(&self) -> usize {
        self.0.len()
    }

    fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

/// A finite K-linear combination of PBW monomials, canonically reduced
/// (no zero coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct State<K>(BTreeMap<PbwMonomial, K>);

impl<K: Field> State<K> {
    pub fn zero() -> Self {
        State(BTreeMap::new())
    }

    pub fn vacuum() -> Self {
        Self::monomial(PbwMonomial::vacuum(), K::one())
    }

    pub fn monomial(m: PbwMonomial, c: K) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: K) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.is_sorted(), "monomial not canonical: {m:?}");
        let e = self.0.entry(m.clone()).or_insert_with(K::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.0 {
            out.add_term(m.clone(), c.clone() * a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-K::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &K)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> K {
        self.0.get(m).cloned().unwrap_or_else(K::zero)
    }

    /// Maximum conformal weight over the support; `None` when zero.
    pub fn degree(&self) -> Option<i64> {
        self.0.keys().map(|m| m.degree()).max()
    }

    /// Maximum number of modes over the support; `None` when zero.
    pub fn length(&self) -> Option<usize> {
        self.0.keys().map(|m| m.length()).max()
    }
}

/// The universal affine vertex algebra of a presented Lie algebra at a
/// fixed level.
pub struct AffineAlgebra<K: Field> {
    pub lie: LiePresentation<K>,
    pub level: K,
    mode_cache: Mutex<HashMap<(usize, i64, PbwMonomial), State<K>>>,
    prod_cache: Mutex<HashMap<(PbwMonomial, i64, PbwMonomial), State<K>>>,
}

/// Validate the presentation, then build the algebra.
pub fn build_affine<K: Field>(
    lie: LiePresentation<K>,
    level: K,
) -> Result<AffineAlgebra<K>, AffineError> {
    let violations = lie.validate();
    if !violations.is_empty() {
        return Err(AffineError::InvalidPresentation(violations));
    }
    Ok(AffineAlgebra::new_unchecked(lie, level))
}

impl<K: Field> AffineAlgebra<K> {
    /// Build without validating the presentation (callers that already
    /// validated, or deliberately broken test data).
    pub fn new_unchecked(lie: LiePresentation<K>, level: K) -> Self {
        AffineAlgebra {
            lie,
            level,
            mode_cache: Mutex::new(HashMap::new()),
            prod_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    /// The state `a_(-1) vacuum` for generator index `g`.
    pub fn generator(&self, g: usize) -> State<K> {
        State::monomial(PbwMonomial::single(-1, g), K::one())
    }

    /// Apply the mode `a_(q)` of generator `a = gen` to a state.
    pub fn mode_action(&self, gen: usize, q: i64, v: &State<K>) -> State<K> {
        self.try_mode_action(gen, q, v)
            .expect("straightening depth exceeded")
    }

    pub fn try_mode_action(
        &self,
        gen: usize,
        q: i64,
        v: &State<K>,
    ) -> Result<State<K>, AffineError> {
        let mut out = State::zero();
        for (m, c) in v.terms() {
            let part = self.mode_on_monomial(gen, q, m, 0)?;
            out = out.add(&part.scale(c));
        }
        Ok(out)
    }

    /// Apply a coordinate vector of generators at one mode:
    /// `(sum_g x_g a_g)_(q) v`.
    pub fn vec_mode_action(&self, x: &[K], q: i64, v: &State<K>) -> State<K> {
        let mut out = State::zero();
        for (g, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.mode_action(g, q, v).scale(c));
            }
        }
        out
    }

    fn mode_on_monomial(
        &self,
        gen: usize,
        q: i64,
        m: &PbwMonomial,
        depth: usize,
    ) -> Result<State<K>, AffineError> {
        if depth > DEPTH_LIMIT {
            return Err(AffineError::DepthExceeded(DEPTH_LIMIT));
        }
        if m.is_vacuum() {
            if q >= 0 {
                return Ok(State::zero());
            }
            return Ok(State::monomial(PbwMonomial::single(q, gen), K::one()));
        }
        let key = (gen, q, m.clone());
        if let Some(hit) = self.mode_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let (q1, g1) = m.0[0];
        let result = if q < 0 && (q, gen) <= (q1, g1) {
            // Prepending keeps the canonical order.
            let mut modes = Vec::with_capacity(m.0.len() + 1);
            modes.push((q, gen));
            modes.extend_from_slice(&m.0);
            State::monomial(PbwMonomial(modes), K::one())
        } else {
            // Commute a_(q) past the head mode (g1)_(q1):
            // a_(q) (g1)_(q1) x = (g1)_(q1) a_(q) x + [a,g1]_(q+q1) x
            //                     + q (a,g1) level delta_(q+q1,0) x.
            let rest = PbwMonomial(m.0[1..].to_vec());
            let tail = self.mode_on_monomial(gen, q, &rest, depth + 1)?;
            let mut out = State::zero();
            for (mm, cc) in tail.terms() {
                let reapplied = self.mode_on_monomial(g1, q1, mm, depth + 1)?;
                out = out.add(&reapplied.scale(cc));
            }
            let br = self.lie.bracket(gen, g1).to_vec();
            for (g2, c) in br.into_iter().enumerate() {
                if !c.is_zero() {
                    let part = self.mode_on_monomial(g2, q + q1, &rest, depth + 1)?;
                    out = out.add(&part.scale(&c));
                }
            }
            if q + q1 == 0 {
                let central = K::from_int(q)
                    * self.lie.form_entry(gen, g1).clone()
                    * self.level.clone();
                out = out.add(&State::monomial(rest, K::one()).scale(&central));
            }
            out
        };
        self.mode_cache.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// The n-th product of two PBW monomials (memoized); the building block
    /// for every product on tensor and loop elements.
    pub fn monomial_nproduct(&self, m: &PbwMonomial, n: i64, w: &PbwMonomial) -> State<K> {
        if m.is_vacuum() {
            return if n == -1 {
                State::monomial(w.clone(), K::one())
            } else {
                State::zero()
            };
        }
        self.nproduct_mono_mono(m, n, w)
    }

    /// The n-th product of a PBW monomial with a state, via the iterate
    /// identity, memoized at the (monomial, n, monomial) level.
    fn nproduct_monomial(&self, m: &PbwMonomial, n: i64, w: &State<K>) -> State<K> {
        if m.is_vacuum() {
            // vacuum_n w = delta_(n,-1) w
            return if n == -1 { w.clone() } else { State::zero() };
        }
        let mut out = State::zero();
        for (wm, wc) in w.terms() {
            let part = self.nproduct_mono_mono(m, n, wm);
            out = out.add(&part.scale(wc));
        }
        out
    }

    fn nproduct_mono_mono(&self, m: &PbwMonomial, n: i64, wm: &PbwMonomial) -> State<K> {
        let key = (m.clone(), n, wm.clone());
        if let Some(hit) = self.prod_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let (p, a) = m.0[0];
        let v = PbwMonomial(m.0[1..].to_vec());
        let w = State::monomial(wm.clone(), K::one());
        let dv = v.degree();
        let dw = wm.degree();

        let mut acc = State::zero();
        // First sum: a_(p-i) (v_(n+i) w), truncated when v_(n+i) w
        // vanishes by regularity (n + i >= dv + dw).
        let mut i: i64 = 0;
        loop {
            if n + i >= dv + dw {
                break;
            }
            if p >= 0 && i > p {
                break;
            }
            let inner = self.nproduct_monomial(&v, n + i, &w);
            if !inner.is_zero() {
                let moved = self.mode_action(a, p - i, &inner);
                if !moved.is_zero() {
                    let c = self.binom_coeff(p, i);
                    let sign = if i % 2 == 0 { K::one() } else { -K::one() };
                    acc = acc.add(&moved.scale(&(sign * c)));
                }
            }
            i += 1;
        }
        // Second sum: -(-1)^p v_(p+n-i) (a_(i) w), truncated once a_(i) w
        // dies (i > dw kills every annihilation chain).
        let sign_p = if p.rem_euclid(2) == 0 {
            K::one()
        } else {
            -K::one()
        };
        let mut i: i64 = 0;
        loop {
            if i > dw {
                break;
            }
            if p >= 0 && i > p {
                break;
            }
            let aw = self.mode_action(a, i, &w);
            if !aw.is_zero() {
                let inner = self.nproduct_monomial(&v, p + n - i, &aw);
                if !inner.is_zero() {
                    let c = self.binom_coeff(p, i);
                    let sign = if i % 2 == 0 { K::one() } else { -K::one() };
                    let coeff = -(sign * c * sign_p.clone());
                    acc = acc.add(&inner.scale(&coeff));
                }
            }
            i += 1;
        }
        self.prod_cache.lock().unwrap().insert(key, acc.clone());
        acc
    }

    fn binom_coeff(&self, p: i64, i: i64) -> K {
        K::from_rat(&Rat::from_integer(binom_int(p, i as u64)))
    }

    /// All PBW monomials of exact conformal weight `d`.
    pub fn basis_of_degree(&self, d: i64) -> Vec<PbwMonomial> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        self.enumerate_basis(d, None, &mut acc, &mut out);
        out
    }

    fn enumerate_basis(
        &self,
        remaining: i64,
        min_pair: Option<(i64, usize)>,
        acc: &mut Vec<(i64, usize)>,
        out: &mut Vec<PbwMonomial>,
    ) {
        if remaining == 0 {
            out.push(PbwMonomial(acc.clone()));
            return;
        }
        for q in -remaining..=-1 {
            for g in 0..self.dim() {
                if let Some(mp) = min_pair {
                    if (q, g) < mp {
                        continue;
                    }
                }
                acc.push((q, g));
                self.enumerate_basis(remaining + q, Some((q, g)), acc, out);
                acc.pop();
            }
        }
    }

    /// All monomials with exactly `len` modes, each mode `q` in
    /// `[-qmax, -1]` (an enumeration window used by product sweeps).
    pub fn basis_of_length(&self, len: usize, qmax: i64) -> Vec<PbwMonomial> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        self.enumerate_length(len, qmax, None, &mut acc, &mut out);
        out
    }

    fn enumerate_length(
        &self,
        remaining: usize,
        qmax: i64,
        min_pair: Option<(i64, usize)>,
        acc: &mut Vec<(i64, usize)>,
        out: &mut Vec<PbwMonomial>,
    ) {
        if remaining == 0 {
            out.push(PbwMonomial(acc.clone()));
            return;
        }
        for q in -qmax..=-1 {
            for g in 0..self.dim() {
                if let Some(mp) = min_pair {
                    if (q, g) < mp {
                        continue;
                    }
                }
                acc.push((q, g));
                self.enumerate_length(remaining - 1, qmax, Some((q, g)), acc, out);
                acc.pop();
            }
        }
    }

    /// Render a monomial with generator labels, e.g. `e(-2)h(-1)1`.
    pub fn render_monomial(&self, m: &PbwMonomial) -> String {
        if m.is_vacuum() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (q, g) in &m.0 {
            s.push_str(&format!("{}({q})", self.lie.labels[*g]));
        }
        s.push('1');
        s
    }
}

impl<K: Field> VertexAlgebra<K> for AffineAlgebra<K> {
    type Elem = State<K>;

    fn name(&self) -> String {
        format!("V({}, level {})", self.lie.name, self.level)
    }

    fn vacuum(&self) -> State<K> {
        State::vacuum()
    }

    fn zero_elem(&self) -> State<K> {
        State::zero()
    }

    fn add(&self, a: &State<K>, b: &State<K>) -> State<K> {
        a.add(b)
    }

    fn scale(&self, c: &K, a: &State<K>) -> State<K> {
        a.scale(c)
    }

    fn nproduct(&self, u: &State<K>, n: i64, v: &State<K>) -> State<K> {
        let mut out = State::zero();
        for (m, c) in u.terms() {
            out = out.add(&self.nproduct_monomial(m, n, v).scale(c));
        }
        out
    }

    fn regularity_bound(&self, u: &State<K>, v: &State<K>) -> i64 {
        match (u.degree(), v.degree()) {
            (Some(du), Some(dv)) => du + dv,
            _ => 0,
        }
    }

    fn is_zero(&self, a: &State<K>) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &State<K>) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in a.terms() {
            parts.push(format!("{} {}", c, self.render_monomial(m)));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{heisenberg_rank, sl2};
    use crate::scalar::rat_int;
    use crate::vertex::{borcherds_check, canonical_hs, hs_derivation_check};
    use num_traits::One;

    fn heis1() -> AffineAlgebra<Rat> {
        build_affine(heisenberg_rank::<Rat>(1), Rat::one()).unwrap()
    }

    fn vsl2() -> AffineAlgebra<Rat> {
        build_affine(sl2::<Rat>(), Rat::one()).unwrap()
    }

    /// Independent partition-number oracle (Euler's pentagonal recurrence).
    fn partition_numbers(n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut total = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 as usize > m && g2 as usize > m {
                    break;
                }
                let sign = if k % 2 == 0 { -1 } else { 1 };
                if g1 as usize <= m {
                    total += sign * p[m - g1 as usize];
                }
                if g2 as usize <= m {
                    total += sign * p[m - g2 as usize];
                }
                k += 1;
            }
            p[m] = total;
        }
        p
    }

    #[test]
    fn heisenberg_graded_dimensions_match_partitions() {
        let alg = heis1();
        let oracle = partition_numbers(6);
        for d in 0..=6 {
            assert_eq!(
                alg.basis_of_degree(d as i64).len() as i64,
                oracle[d],
                "dimension mismatch at degree {d}"
            );
        }
    }

    #[test]
    fn sl2_low_degree_dimensions() {
        let alg = vsl2();
        assert_eq!(alg.basis_of_degree(0).len(), 1);
        assert_eq!(alg.basis_of_degree(1).len(), 3);
        // degree 2: single modes a(-2) (3) plus pairs a(-1)b(-1) with
        // multiplicity (3 choose 2 with repeats = 6): 9 total.
        assert_eq!(alg.basis_of_degree(2).len(), 9);
    }

    #[test]
    fn heisenberg_bracket_relation() {
        // a_(1) a_(-1) 1 = [a_(1), a_(-1)] 1 = (a,a) * level * 1.
        let alg = heis1();
        let v = alg.mode_action(0, -1, &State::vacuum());
        let w = alg.mode_action(0, 1, &v);
        assert_eq!(w, State::vacuum()); // (a,a) = 1, level = 1
        // a_(2) a_(-2) 1 = 2 * 1.
        let v2 = alg.mode_action(0, -2, &State::vacuum());
        let w2 = alg.mode_action(0, 2, &v2);
        assert_eq!(w2, State::vacuum().scale(&rat_int(2)));
        // a_(1) a_(-2) 1 = 0 (no bracket, no central term).
        let w3 = alg.mode_action(0, 1, &v2);
        assert!(w3.is_zero());
    }

    #[test]
    fn commutator_property_sweep() {
        // a_(m) b_(n) x - b_(n) a_(m) x
        //   = [a,b]_(m+n) x + m (a,b) level delta_(m+n,0) x
        // on every PBW monomial of degree <= 3 in V(sl2, 1).
        let alg = vsl2();
        let mut states = Vec::new();
        for d in 0..=3 {
            for m in alg.basis_of_degree(d) {
                states.push(State::monomial(m, Rat::one()));
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                for m in -2..=2i64 {
                    for n in -2..=2i64 {
                        for x in &states {
                            let lhs = alg
                                .mode_action(a, m, &alg.mode_action(b, n, x))
                                .sub(&alg.mode_action(b, n, &alg.mode_action(a, m, x)));
                            let mut rhs =
                                alg.vec_mode_action(&alg.lie.bracket(a, b).to_vec(), m + n, x);
                            if m + n == 0 {
                                let c = rat_int(m)
                                    * alg.lie.form_entry(a, b).clone()
                                    * alg.level.clone();
                                rhs = rhs.add(&x.scale(&c));
                            }
                            assert_eq!(lhs, rhs, "commutator fails at a={a}, b={b}, m={m}, n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn creation_property() {
        let alg = vsl2();
        for d in 0..=3 {
            for m in alg.basis_of_degree(d) {
                let u = State::monomial(m, Rat::one());
                assert_eq!(alg.nproduct(&u, -1, &State::vacuum()), u);
                for n in 0..=2 {
                    assert!(alg.is_zero(&alg.nproduct(&u, n, &State::vacuum())));
                }
            }
        }
    }

    #[test]
    fn product_degree_law() {
        // deg(u_n v) = deg u + deg v - n - 1 whenever nonzero.
        let alg = vsl2();
        let mut states = Vec::new();
        for d in 0..=3 {
            for m in alg.basis_of_degree(d) {
                states.push(State::monomial(m, Rat::one()));
            }
        }
        for u in &states {
            for v in &states {
                let du = u.degree().unwrap();
                let dv = v.degree().unwrap();
                for n in -3..(du + dv) {
                    let w = alg.nproduct(u, n, v);
                    if let Some(dw) = w.degree() {
                        assert_eq!(dw, du + dv - n - 1);
                        // homogeneous output: all monomials same degree
                        assert!(w.terms().all(|(m, _)| m.degree() == dw));
                    }
                }
            }
        }
    }

    #[test]
    fn regularity_bound_is_honest() {
        let alg = vsl2();
        for d in 0..=2 {
            for m1 in alg.basis_of_degree(d) {
                for d2 in 0..=2 {
                    for m2 in alg.basis_of_degree(d2) {
                        let u = State::monomial(m1.clone(), Rat::one());
                        let v = State::monomial(m2.clone(), Rat::one());
                        let b = alg.regularity_bound(&u, &v);
                        for n in b..(b + 3) {
                            assert!(alg.is_zero(&alg.nproduct(&u, n, &v)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn one_product_recovers_form_times_level() {
        // u_1 v = (u, v) * level * vacuum for generator states.
        for level in [rat_int(1), rat_int(2), rat_int(-3)] {
            let alg = build_affine(sl2::<Rat>(), level.clone()).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    let u = alg.generator(a);
                    let v = alg.generator(b);
                    let p = alg.nproduct(&u, 1, &v);
                    let expected = State::vacuum()
                        .scale(&(alg.lie.form_entry(a, b).clone() * level.clone()));
                    assert_eq!(p, expected);
                }
            }
        }
    }

    #[test]
    fn zero_product_recovers_bracket() {
        // u_0 v = [u, v]_(-1) 1 for generator states.
        let alg = vsl2();
        for a in 0..3 {
            for b in 0..3 {
                let p = alg.nproduct(&alg.generator(a), 0, &alg.generator(b));
                let br = alg.lie.bracket(a, b).to_vec();
                let expected = alg.vec_mode_action(&br, -1, &State::vacuum());
                assert_eq!(p, expected);
            }
        }
    }

    #[test]
    fn canonical_hs_translates_modes() {
        // D_1(a_(-1) 1) = a_(-2) 1; D_1(a_(-m) v) = m a_(-m-1) v + a_(-m) D_1 v.
        let alg = heis1();
        let a1 = alg.generator(0);
        let d1 = canonical_hs(&alg, &a1, 1);
        assert_eq!(d1, State::monomial(PbwMonomial::single(-2, 0), Rat::one()));
        for m in 1..=3i64 {
            for d in 0..=2 {
                for mono in alg.basis_of_degree(d) {
                    let v = State::monomial(mono, Rat::one());
                    let lhs = canonical_hs(&alg, &alg.mode_action(0, -m, &v), 1);
                    let rhs = alg
                        .mode_action(0, -m - 1, &v)
                        .scale(&rat_int(m))
                        .add(&alg.mode_action(0, -m, &canonical_hs(&alg, &v, 1)));
                    assert_eq!(lhs, rhs, "translation property fails at m={m}");
                }
            }
        }
    }

    #[test]
    fn hs_family_is_a_derivation() {
        let alg = vsl2();
        let u = alg.generator(0);
        let v = alg.mode_action(1, -2, &alg.generator(2));
        for n in [-2, -1, 0, 1] {
            hs_derivation_check(&alg, &u, n, &v, 3).unwrap();
        }
    }

    #[test]
    fn borcherds_documented_instance() {
        // (a, b, vacuum) with (m,n,p) = (1,-1,-1) in rank-1 Heisenberg.
        let alg = heis1();
        let a = alg.generator(0);
        borcherds_check(&alg, &a, &a, &State::vacuum(), 1, -1, -1).unwrap();
    }

    #[test]
    fn borcherds_small_sweep_sl2() {
        let alg = vsl2();
        let gens: Vec<State<Rat>> = (0..3).map(|g| alg.generator(g)).collect();
        for u in &gens {
            for v in &gens {
                for w in &gens {
                    for m in -2..=2 {
                        for n in -2..=2 {
                            for p in -2..=2 {
                                borcherds_check(&alg, u, v, w, m, n, p).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lie_bracket_and_symmetric_form_on_f1() {
        let alg = vsl2();
        // 0-product antisymmetry mod F_0: u_0 v + v_0 u is a multiple of
        // the vacuum for generator states (here it is exactly zero except
        // for the central correction, which lands on the vacuum).
        for a in 0..3 {
            for b in 0..3 {
                let u = alg.generator(a);
                let v = alg.generator(b);
                let s = alg.nproduct(&u, 0, &v).add(&alg.nproduct(&v, 0, &u));
                for (m, _) in s.terms() {
                    assert!(m.is_vacuum(), "u_0 v + v_0 u escapes F_0");
                }
                // 1-product symmetry.
                assert_eq!(alg.nproduct(&u, 1, &v), alg.nproduct(&v, 1, &u));
            }
        }
        // Associativity of the degenerate pairing:
        // (u, v_0 w) = (u_0 v, w), both sides read off as coefficients of
        // the vacuum in 1-products.
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let u = alg.generator(a);
                    let v = alg.generator(b);
                    let w = alg.generator(c);
                    let lhs = alg.nproduct(&u, 1, &alg.nproduct(&v, 0, &w));
                    let rhs = alg.nproduct(&alg.nproduct(&u, 0, &v), 1, &w);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn filtration_law_is_respected() {
        // The filtration associated to the weight grading:
        // F_i = span of monomials of degree <= i, so exact-degree layers
        // span and State::degree is the filtration degree.
        let alg = vsl2();
        crate::vertex::filtration_check(
            &alg,
            3,
            |d| {
                alg.basis_of_degree(d)
                    .into_iter()
                    .map(|m| State::monomial(m, Rat::one()))
                    .collect()
            },
            |s| s.degree(),
            -3,
        )
        .unwrap();
    }
}
