//! The vertex-algebra interface and the generic identity checkers.
//!
//! A [`VertexAlgebra`] exposes exact n-th products `u_n v` together with a
//! regularity bound (a stated `N` with `u_n v = 0` for all `n >= N`), which
//! is what makes every infinite identity sum below a finite exact
//! computation. The checkers verify, on concrete triples:
//!
//! * the component Borcherds identity,
//! * that the canonical Hasse–Schmidt family `D_i(v) = v_(-i-1) vacuum`
//!   satisfies the product rule and iterativity,
//! * the filtration law `(F_m V)_l (F_n V) <= F_(m+n-l-1) V`.
//!
//! Failures carry both sides of the identity for inspection; nothing is ever
//! compared approximately.

use crate::scalar::{binom_int, Field};

/// A vertex algebra (or commutative vertex ring) with exact arithmetic.
pub trait VertexAlgebra<K: Field> {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn name(&self) -> String;
    fn vacuum(&self) -> Self::Elem;
    fn zero_elem(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &K, a: &Self::Elem) -> Self::Elem;

    /// The n-th product `u_n v`.
    fn nproduct(&self, u: &Self::Elem, n: i64, v: &Self::Elem) -> Self::Elem;

    /// Some bound `N` such that `u_n v = 0` for all `n >= N`. Need not be
    /// tight, but must be correct: the identity checkers truncate sums here.
    fn regularity_bound(&self, u: &Self::Elem, v: &Self::Elem) -> i64;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Human-readable rendering (used in reports).
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(&-K::one(), b))
    }
}

/// Both sides of a failed identity, already rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityFailure {
    pub what: String,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: lhs = {} ; rhs = {}", self.what, self.lhs, self.rhs)
    }
}

/// The component Borcherds identity at `(m, n, p)`:
///
/// ```text
/// sum_i binom(m,i) (u_(p+i) v)_(m+n-i) w
///   = sum_i (-1)^i binom(p,i) [ u_(m+p-i) (v_(n+i) w)
///                               - (-1)^p v_(n+p-i) (u_(m+i) w) ]
/// ```
///
/// Both sums truncate by regularity (and by vanishing binomials when the
/// upper argument is a nonnegative integer).
pub fn borcherds_check<K: Field, V: VertexAlgebra<K>>(
    alg: &V,
    u: &V::Elem,
    v: &V::Elem,
    w: &V::Elem,
    m: i64,
    n: i64,
    p: i64,
) -> Result<(), IdentityFailure> {
    let lhs = borcherds_lhs(alg, u, v, w, m, n, p);
    let rhs = borcherds_rhs(alg, u, v, w, m, n, p);
    if lhs == rhs {
        Ok(())
    } else {
        Err(IdentityFailure {
            what: format!("borcherds(m={m}, n={n}, p={p})"),
            lhs: alg.render(&lhs),
            rhs: alg.render(&rhs),
        })
    }
}

fn borcherds_lhs<K: Field, V: VertexAlgebra<K>>(
    alg: &V,
    u: &V::Elem,
    v: &V::Elem,
    w: &V::Elem,
    m: i64,
    n: i64,
    p: i64,
) -> V::Elem {
    let mut acc = alg.zero_elem();
    let uv_bound = alg.regularity_bound(u, v);
    let mut i: i64 = 0;
    loop {
        if p + i >= uv_bound {
            break;
        }
        if m >= 0 && i > m {
            break;
        }
        let inner = alg.nproduct(u, p + i, v);
        if !alg.is_zero(&inner) {
            let outer = alg.nproduct(&inner, m + n - i, w);
            let c = K::from_rat(&crate::scalar::Rat::from_integer(binom_int(m, i as u64)));
            acc = alg.add(&acc, &alg.scale(&c, &outer));
        }
        i += 1;
    }
    acc
}

fn borcherds_rhs<K: Field, V: VertexAlgebra<K>>(
    alg: &V,
    u: &V::Elem,
    v: &V::Elem,
    w: &V::Elem,
    m: i64,
    n: i64,
    p: i64,
) -> V::Elem {
    let mut acc = alg.zero_elem();
    let vw_bound = alg.regularity_bound(v, w);
    let uw_bound = alg.regularity_bound(u, w);
    let sign_p = if p.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut i: i64 = 0;
    loop {
        if (n + i >= vw_bound) && (m + i >= uw_bound) {
            break;
        }
        if p >= 0 && i > p {
            break;
        }
        let mut term = alg.zero_elem();
        if n + i < vw_bound {
            let inner = alg.nproduct(v, n + i, w);
            if !alg.is_zero(&inner) {
                term = alg.add(&term, &alg.nproduct(u, m + p - i, &inner));
            }
        }
        if m + i < uw_bound {
            let inner = alg.nproduct(u, m + i, w);
            if !alg.is_zero(&inner) {
                let outer = alg.nproduct(v, n + p - i, &inner);
                let c = K::from_int(-sign_p);
                term = alg.add(&term, &alg.scale(&c, &outer));
            }
        }
        let sign_i = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        let c = K::from_rat(&crate::scalar::Rat::from_integer(
            binom_int(p, i as u64) * num_bigint::BigInt::from(sign_i),
        ));
        acc = alg.add(&acc, &alg.scale(&c, &term));
        i += 1;
    }
    acc
}

/// The canonical Hasse–Schmidt component: `D_i(v) = v_(-i-1) vacuum`.
pub fn canonical_hs<K: Field, V: VertexAlgebra<K>>(alg: &V, v: &V::Elem, i: u64) -> V::Elem {
    alg.nproduct(v, -(i as i64) - 1, &alg.vacuum())
}

/// Verify that the canonical family is a Hasse–Schmidt derivation on the
/// given pair, up to order `mmax`:
///
/// * product rule: `D_m(u_n v) = sum_(i+j=m) (D_i u)_n (D_j v)`,
/// * iterativity on `u`: `D_i(D_j u) = binom(i+j, i) D_(i+j) u`,
/// * normalization: `D_0 = id` on `u`.
pub fn hs_derivation_check<K: Field, V: VertexAlgebra<K>>(
    alg: &V,
    u: &V::Elem,
    n: i64,
    v: &V::Elem,
    mmax: u64,
) -> Result<(), IdentityFailure> {
    if canonical_hs(alg, u, 0) != *u {
        return Err(IdentityFailure {
            what: "D_0 != id".to_string(),
            lhs: alg.render(&canonical_hs(alg, u, 0)),
            rhs: alg.render(u),
        });
    }
    for m in 0..=mmax {
        let lhs = canonical_hs(alg, &alg.nproduct(u, n, v), m);
        let mut rhs = alg.zero_elem();
        for i in 0..=m {
            let j = m - i;
            let du = canonical_hs(alg, u, i);
            let dv = canonical_hs(alg, v, j);
            rhs = alg.add(&rhs, &alg.nproduct(&du, n, &dv));
        }
        if lhs != rhs {
            return Err(IdentityFailure {
                what: format!("product rule D_{m}(u_{n} v)"),
                lhs: alg.render(&lhs),
                rhs: alg.render(&rhs),
            });
        }
    }
    for i in 0..=mmax {
        for j in 0..=(mmax - i) {
            let lhs = canonical_hs(alg, &canonical_hs(alg, u, j), i);
            let c = K::from_rat(&crate::scalar::binom_frac(
                &crate::scalar::rat_int((i + j) as i64),
                i,
            ));
            let rhs = alg.scale(&c, &canonical_hs(alg, u, i + j));
            if lhs != rhs {
                return Err(IdentityFailure {
                    what: format!("iterativity D_{i} D_{j}"),
                    lhs: alg.render(&lhs),
                    rhs: alg.render(&rhs),
                });
            }
        }
    }
    Ok(())
}

/// Verify the filtration law `(F_m V)_l (F_n V) <= F_(m+n-l-1) V` on
/// spanning sets. `basis_of(d)` must span the degree-`d` homogeneous layer
/// (so `F_d` is the span of layers `<= d`), and `degree_of` must return the
/// exact filtration degree of an element (`None` for zero). Products are
/// swept over `l` from `mode_min` up to the regularity bound.
pub fn filtration_check<K: Field, V: VertexAlgebra<K>>(
    alg: &V,
    max_degree: i64,
    basis_of: impl Fn(i64) -> Vec<V::Elem>,
    degree_of: impl Fn(&V::Elem) -> Option<i64>,
    mode_min: i64,
) -> Result<(), IdentityFailure> {
    for dm in 0..=max_degree {
        for dn in 0..=max_degree {
            for u in basis_of(dm) {
                for v in basis_of(dn) {
                    let bound = alg.regularity_bound(&u, &v);
                    for l in mode_min..bound {
                        let w = alg.nproduct(&u, l, &v);
                        if let Some(dw) = degree_of(&w) {
                            if dw > dm + dn - l - 1 {
                                return Err(IdentityFailure {
                                    what: format!(
                                        "filtration: deg(u_{l} v) = {dw} > {} for deg(u)={dm}, deg(v)={dn}",
                                        dm + dn - l - 1
                                    ),
                                    lhs: alg.render(&w),
                                    rhs: format!("F_{}", dm + dn - l - 1),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
