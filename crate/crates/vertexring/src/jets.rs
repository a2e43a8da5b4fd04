//! Truncated jet (arc) rings of finitely presented differential rings,
//! with the divided-power derivation suite and the adjunction test for
//! maps into a fractional Laurent coefficient ring.
//!
//! A presentation gives a base ring (the rationals, or a polynomial ring
//! in `t` over the rationals or the integers), variables, and relation
//! polynomials. The jet ring at truncation order `N` adjoins variables
//! `x^(0), …, x^(N)` per presentation variable, and its defining ideal is
//! generated by all derivatives `D_i(f)`, `0 ≤ i ≤ N`, of the embedded
//! relations. The derivation components act by
//!
//! - `D_i(t) = t, 1, 0` for `i = 0, 1, ≥2`,
//! - `D_i(x^(j)) = C(i+j, i) · x^(i+j)` (an error past the truncation),
//! - scalars constant, products by the `Σ_{p+q=i} D_p·D_q` rule,
//!
//! so `D_i ∘ D_j = C(i+j, i) · D_{i+j}` holds wherever both sides are
//! representable, and the generating set is derivation-stable by
//! construction. Membership questions are answered by the certified
//! polynomial engine; over an integer base a rational certificate is
//! only reported as membership when its cofactors are integral, and is
//! downgraded to "inconclusive" otherwise.
//!
//! Extending a ring map along jets is obstruction-checked: the base map
//! fixes `t`, each `x^(j)` must go to the `j`-th derivative of the chosen
//! image, and every prolonged generator is evaluated in the target; the
//! full list of generators with nonzero image is reported, not just the
//! first.

use num_bigint::BigInt;

use crate::laurent::FracLaurent;
use crate::poly::{ideal_member, Limits, Membership, Monomial, MultiPoly, PolyParseError};
use crate::scalar::{Field, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseRing {
    /// The rational numbers (no distinguished variable).
    Rationals,
    /// Rational polynomials in `t`.
    RatPolyT,
    /// Integer polynomials in `t`.
    IntPolyT,
}

impl BaseRing {
    pub fn has_t(self) -> bool {
        !matches!(self, BaseRing::Rationals)
    }

    /// Whether membership certificates must have integral cofactors.
    pub fn integral_coefficients(self) -> bool {
        matches!(self, BaseRing::IntPolyT)
    }

    pub fn label(self) -> &'static str {
        match self {
            BaseRing::Rationals => "Q",
            BaseRing::RatPolyT => "Q[t]",
            BaseRing::IntPolyT => "Z[t]",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("derivative order {order} of {var} exceeds the truncation {max}")]
    Overflow { var: String, order: u64, max: u64 },
    #[error("invalid presentation: {}", .0.join("; "))]
    InvalidPresentation(Vec<String>),
    #[error("expected {want} variable image(s), found {found}")]
    BadImageCount { found: usize, want: usize },
    #[error(
        "the map does not extend: {} prolonged generator(s) have nonzero image",
        .0.len()
    )]
    Obstruction(Vec<(usize, u64, String)>),
    #[error("jet file error: {0}")]
    File(String),
    #[error(transparent)]
    Poly(#[from] PolyParseError),
}

/// A finitely presented differential ring: base, variables, relations.
/// Relation polynomials live in the presentation variables, ordered
/// `[t,] x_0, x_1, …` (the `t` slot only when the base has one).
#[derive(Debug, Clone)]
pub struct JetPresentation<K: Field> {
    pub base: BaseRing,
    pub vars: Vec<String>,
    pub relations: Vec<MultiPoly<K>>,
}

impl<K: Field> JetPresentation<K> {
    /// Number of presentation variables including `t` when present.
    pub fn arity(&self) -> usize {
        usize::from(self.base.has_t()) + self.vars.len()
    }

    /// Variable names in presentation order (for parsing and rendering).
    pub fn parse_vars(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.base.has_t() {
            v.push("t".to_string());
        }
        v.extend(self.vars.iter().cloned());
        v
    }

    pub fn validate(&self) -> Result<(), JetError> {
        let mut problems = Vec::new();
        for (i, name) in self.vars.iter().enumerate() {
            if name == "t" {
                problems.push("variable name `t` is reserved for the base".to_string());
            }
            if name.is_empty() {
                problems.push(format!("variable {i} has an empty name"));
            }
            if self.vars[..i].contains(name) {
                problems.push(format!("duplicate variable name `{name}`"));
            }
        }
        if self.base.integral_coefficients() {
            for (mu, rel) in self.relations.iter().enumerate() {
                if !rel.is_integral() {
                    problems.push(format!(
                        "relation {mu} has non-integer coefficients over {}",
                        self.base.label()
                    ));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(JetError::InvalidPresentation(problems))
        }
    }
}

/// Variable bookkeeping for a truncated jet ring: the ambient polynomial
/// ring has one slot for `t` (when the base carries it) followed by a
/// ladder `x^(0), …, x^(N)` per presentation variable.
#[derive(Debug, Clone)]
pub struct JetRing {
    pub base: BaseRing,
    pub var_names: Vec<String>,
    /// Truncation order `N`.
    pub order: u64,
}

impl JetRing {
    fn t_offset(&self) -> usize {
        usize::from(self.base.has_t())
    }

    fn ladder(&self) -> usize {
        (self.order + 1) as usize
    }

    /// Total number of jet variables.
    pub fn arity(&self) -> usize {
        self.t_offset() + self.var_names.len() * self.ladder()
    }

    /// Index of `x_lam^(j)` among the jet variables.
    pub fn var_index(&self, lam: usize, j: u64) -> usize {
        assert!(lam < self.var_names.len());
        assert!(j <= self.order);
        self.t_offset() + lam * self.ladder() + j as usize
    }

    /// Jet variable names for rendering: `t`, then `x^(0)`, `x^(1)`, …
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.base.has_t() {
            out.push("t".to_string());
        }
        for name in &self.var_names {
            for j in 0..=self.order {
                out.push(format!("{name}^({j})"));
            }
        }
        out
    }

    /// `D_i` on a single jet variable.
    fn hs_var<K: Field>(&self, i: u64, v: usize) -> Result<MultiPoly<K>, JetError> {
        let n = self.arity();
        if self.base.has_t() && v == 0 {
            return Ok(match i {
                0 => MultiPoly::var(n, 0),
                1 => MultiPoly::one(n),
                _ => MultiPoly::zero(),
            });
        }
        let off = v - self.t_offset();
        let lam = off / self.ladder();
        let j = (off % self.ladder()) as u64;
        if i == 0 {
            return Ok(MultiPoly::var(n, v));
        }
        let target = i + j;
        if target > self.order {
            return Err(JetError::Overflow {
                var: format!("{}^({j})", self.var_names[lam]),
                order: target,
                max: self.order,
            });
        }
        let b = num_integer::binomial(BigInt::from(target), BigInt::from(i));
        Ok(MultiPoly::monomial(
            Monomial::var(n, self.var_index(lam, target)),
            K::from_rat(&Rat::from_integer(b)),
        ))
    }

    fn hs_monomial<K: Field>(&self, i: u64, m: &Monomial) -> Result<MultiPoly<K>, JetError> {
        // Scalars are constant: D_0 = id, D_i = 0 for i > 0.
        let Some(v) = m.0.iter().position(|e| *e > 0) else {
            return Ok(if i == 0 {
                MultiPoly::one(self.arity())
            } else {
                MultiPoly::zero()
            });
        };
        if i == 0 {
            return Ok(MultiPoly::monomial(m.clone(), K::one()));
        }
        let mut rest = m.clone();
        rest.0[v] -= 1;
        let mut acc = MultiPoly::zero();
        for a in 0..=i {
            let da = self.hs_var::<K>(a, v)?;
            let db = self.hs_monomial::<K>(i - a, &rest)?;
            acc = acc.add(&da.mul(&db));
        }
        Ok(acc)
    }

    /// The `i`-th divided-power derivation component, extended to
    /// polynomials by linearity and the product rule.
    pub fn hs<K: Field>(&self, i: u64, p: &MultiPoly<K>) -> Result<MultiPoly<K>, JetError> {
        let mut acc = MultiPoly::zero();
        for (m, c) in p.terms() {
            acc = acc.add(&self.hs_monomial::<K>(i, m)?.scale(c));
        }
        Ok(acc)
    }
}

/// The defining ideal of a truncated jet ring, with each generator's
/// origin `(relation index, derivative order)` retained.
#[derive(Debug, Clone)]
pub struct JetIdeal<K: Field> {
    pub gens: Vec<MultiPoly<K>>,
    pub origins: Vec<(usize, u64)>,
}

impl<K: Field> JetIdeal<K> {
    /// Membership over the presentation's base: computed over the
    /// fraction field, with integral-cofactor certification when the
    /// base demands it.
    pub fn member(
        &self,
        base: BaseRing,
        f: &MultiPoly<K>,
        limits: &Limits,
    ) -> Membership<K> {
        match ideal_member(f, &self.gens, limits) {
            Membership::Yes { cofactors } => {
                if base.integral_coefficients()
                    && !cofactors.iter().all(|c| c.is_integral())
                {
                    Membership::Inconclusive {
                        reason: "membership holds over the rationals but the \
                                 certificate found is not integral"
                            .to_string(),
                    }
                } else {
                    Membership::Yes { cofactors }
                }
            }
            other => other,
        }
    }

    /// Does the ideal contain 1 (so the jet ring collapses to zero)?
    pub fn collapse_certificate(
        &self,
        ring: &JetRing,
        base: BaseRing,
        limits: &Limits,
    ) -> Membership<K> {
        self.member(base, &MultiPoly::one(ring.arity()), limits)
    }
}

/// Build the order-`N` jet ring of a presentation: embed each relation
/// (`x ↦ x^(0)`, `t ↦ t`) and take all derivatives up to the truncation.
/// Never overflows, because the embedded relations only involve `t` and
/// the bottom rung of each ladder.
pub fn prolong<K: Field>(
    p: &JetPresentation<K>,
    order: u64,
) -> Result<(JetRing, JetIdeal<K>), JetError> {
    p.validate()?;
    let ring = JetRing {
        base: p.base,
        var_names: p.vars.clone(),
        order,
    };
    let n = ring.arity();
    let t_off = ring.t_offset();
    let mut gens = Vec::new();
    let mut origins = Vec::new();
    for (mu, rel) in p.relations.iter().enumerate() {
        if rel.is_zero() {
            continue;
        }
        let mut embedded = MultiPoly::zero();
        for (m, c) in rel.terms() {
            let mut exps = vec![0u32; n];
            for (pos, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let jet_pos = if p.base.has_t() && pos == 0 {
                    0
                } else {
                    ring.var_index(pos - t_off, 0)
                };
                exps[jet_pos] = *e;
            }
            embedded.add_term(Monomial(exps), c.clone());
        }
        for i in 0..=order {
            let d = ring.hs::<K>(i, &embedded)?;
            if d.is_zero() {
                continue;
            }
            gens.push(d);
            origins.push((mu, i));
        }
    }
    Ok((ring, JetIdeal { gens, origins }))
}

/// The jet prolongation of a ring map into a fractional Laurent ring:
/// `images[lam][j]` is the image of `x_lam^(j)`, namely the `j`-th
/// derivative of the chosen image of `x_lam`.
#[derive(Debug, Clone)]
pub struct JetMap<K: Field> {
    pub images: Vec<Vec<FracLaurent<K>>>,
}

/// Extend a base-fixing ring map along jets. `images[lam]` is the image
/// of `x_lam` in the target; `t` (when present) must map to itself. Each
/// prolonged generator is evaluated in the target, and the extension
/// exists exactly when all of them vanish; otherwise every violating
/// generator is reported as `(relation, derivative order, image)`.
pub fn adjunction_extend<K: Field>(
    p: &JetPresentation<K>,
    order: u64,
    images: &[FracLaurent<K>],
) -> Result<(JetRing, JetMap<K>), JetError> {
    let (ring, ideal) = prolong(p, order)?;
    if images.len() != p.vars.len() {
        return Err(JetError::BadImageCount {
            found: images.len(),
            want: p.vars.len(),
        });
    }
    let mut denom = 1u32;
    for img in images {
        denom = num_integer::lcm(denom, img.denom());
    }
    let mut table: Vec<Vec<FracLaurent<K>>> = Vec::with_capacity(images.len());
    for img in images {
        let img = img.with_denom(denom);
        table.push((0..=order).map(|j| img.apply_di(j)).collect());
    }
    // Substitution vector in jet-variable order.
    let mut vals: Vec<FracLaurent<K>> = Vec::with_capacity(ring.arity());
    if p.base.has_t() {
        vals.push(FracLaurent::t_pow_frac(denom, denom as i64));
    }
    for ladder in &table {
        vals.extend(ladder.iter().cloned());
    }
    let mut violations = Vec::new();
    for (g, (mu, i)) in ideal.gens.iter().zip(&ideal.origins) {
        let value = g.eval_with(
            FracLaurent::one(denom),
            &vals,
            |a, b| a.add(b),
            |a, b| a.mul(b),
            |a, c| a.scale(c),
            FracLaurent::zero(denom),
        );
        if !value.is_zero() {
            violations.push((*mu, *i, format!("{value}")));
        }
    }
    if !violations.is_empty() {
        return Err(JetError::Obstruction(violations));
    }
    Ok((ring, JetMap { images: table }))
}

/// Parse a jet presentation from text. Directives, one per line:
///
/// ```text
/// # comment
/// base Q | Q[t] | Z[t]
/// vars x y          (optional; may list no names)
/// rel x^2 - 1       (zero or more)
/// ```
pub fn parse_jet<K: Field>(text: &str) -> Result<JetPresentation<K>, JetError> {
    let mut base: Option<BaseRing> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut rel_lines: Vec<String> = Vec::new();
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (head, tail) = match line.split_once(char::is_whitespace) {
            Some((h, t)) => (h, t.trim()),
            None => (line, ""),
        };
        match head {
            "base" => {
                let b = match tail {
                    "Q" => BaseRing::Rationals,
                    "Q[t]" => BaseRing::RatPolyT,
                    "Z[t]" => BaseRing::IntPolyT,
                    other => {
                        return Err(JetError::File(format!(
                            "unknown base ring `{other}` (expected Q, Q[t], or Z[t])"
                        )))
                    }
                };
                if base.replace(b).is_some() {
                    return Err(JetError::File("duplicate `base` directive".to_string()));
                }
            }
            "vars" => {
                let names: Vec<String> =
                    tail.split_whitespace().map(|s| s.to_string()).collect();
                if vars.replace(names).is_some() {
                    return Err(JetError::File("duplicate `vars` directive".to_string()));
                }
            }
            "rel" => {
                if tail.is_empty() {
                    return Err(JetError::File("`rel` with no polynomial".to_string()));
                }
                rel_lines.push(tail.to_string());
            }
            other => {
                return Err(JetError::File(format!("unknown directive `{other}`")));
            }
        }
    }
    let base = base.ok_or_else(|| JetError::File("missing `base` directive".to_string()))?;
    let pres = JetPresentation {
        base,
        vars: vars.unwrap_or_default(),
        relations: Vec::new(),
    };
    let parse_vars = pres.parse_vars();
    let mut relations = Vec::new();
    for line in &rel_lines {
        relations.push(crate::poly::parse_poly::<K>(line, &parse_vars)?);
    }
    let pres = JetPresentation { relations, ..pres };
    pres.validate()?;
    Ok(pres)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    type P = MultiPoly<Rat>;

    fn free_x(base: BaseRing) -> JetPresentation<Rat> {
        JetPresentation {
            base,
            vars: vec!["x".to_string()],
            relations: Vec::new(),
        }
    }

    fn pres(text: &str) -> JetPresentation<Rat> {
        parse_jet(text).unwrap()
    }

    #[test]
    fn free_jets_have_no_relations_and_full_ladders() {
        let (ring, ideal) = prolong(&free_x(BaseRing::Rationals), 2).unwrap();
        assert_eq!(ring.arity(), 3);
        assert!(ideal.gens.is_empty());
        assert_eq!(ring.names(), vec!["x^(0)", "x^(1)", "x^(2)"]);
        // D_1(x^(0)) = x^(1), D_1(x^(1)) = 2 x^(2), D_2(x^(0)) = x^(2).
        let x0 = P::var(3, 0);
        let x1 = P::var(3, 1);
        let x2 = P::var(3, 2);
        assert_eq!(ring.hs(1, &x0).unwrap(), x1);
        assert_eq!(ring.hs(1, &x1).unwrap(), x2.scale(&rat_int(2)));
        assert_eq!(ring.hs(2, &x0).unwrap(), x2);
        // Past the truncation the derivation overflows rather than lying.
        assert!(matches!(
            ring.hs(1, &x2),
            Err(JetError::Overflow { order: 3, max: 2, .. })
        ));
    }

    #[test]
    fn collapse_is_detected_with_an_integral_certificate() {
        // Base Z[t] with the relation t: the derivatives are {t, 1}, so
        // the jet ring collapses, certified by 1 = 0·t + 1·1.
        let p = pres("base Z[t]\nvars\nrel t");
        let (ring, ideal) = prolong(&p, 1).unwrap();
        assert_eq!(ring.arity(), 1);
        assert_eq!(ideal.origins, vec![(0, 0), (0, 1)]);
        assert_eq!(ideal.gens[0], P::var(1, 0));
        assert_eq!(ideal.gens[1], P::one(1));
        match ideal.collapse_certificate(&ring, p.base, &Limits::default()) {
            Membership::Yes { cofactors } => {
                assert!(cofactors.iter().all(|c| c.is_integral()));
                assert_eq!(cofactors[0], P::zero());
                assert_eq!(cofactors[1], P::one(1));
            }
            _ => panic!("the zero-locus jet ring must collapse"),
        }
    }

    #[test]
    fn square_relation_prolongs_by_the_product_rule() {
        let p = pres("base Q\nvars x\nrel x^2");
        let (ring, ideal) = prolong(&p, 1).unwrap();
        // gens: (x^(0))^2 and 2 x^(0) x^(1).
        let x0 = P::var(2, 0);
        let x1 = P::var(2, 1);
        assert_eq!(ideal.gens[0], x0.mul(&x0));
        assert_eq!(ideal.gens[1], x0.mul(&x1).scale(&rat_int(2)));
        // x^(0)·x^(1) is a member with cofactor 1/2 on the second
        // generator; over Q that certificate is accepted.
        let f = x0.mul(&x1);
        match ideal.member(p.base, &f, &Limits::default()) {
            Membership::Yes { cofactors } => {
                assert_eq!(cofactors[0], P::zero());
                assert_eq!(cofactors[1], P::constant(2, rat(1, 2)));
            }
            _ => panic!("x0*x1 is half the second generator"),
        }
        let _ = ring;
    }

    #[test]
    fn integral_base_downgrades_rational_certificates() {
        // Same relation over Z[t]-style integrality: the only certificate
        // for x^(0)x^(1) has a 1/2, so membership over the integers is
        // honestly inconclusive rather than claimed.
        let p: JetPresentation<Rat> = JetPresentation {
            base: BaseRing::IntPolyT,
            vars: vec!["x".to_string()],
            relations: vec![parse_poly_rel("x^2")],
        };
        let (ring, ideal) = prolong(&p, 1).unwrap();
        let f = P::var(ring.arity(), ring.var_index(0, 0))
            .mul(&P::var(ring.arity(), ring.var_index(0, 1)));
        match ideal.member(p.base, &f, &Limits::default()) {
            Membership::Inconclusive { reason } => {
                assert!(reason.contains("not integral"), "reason: {reason}");
            }
            Membership::Yes { .. } => panic!("must not certify over Z with a 1/2"),
            Membership::No => panic!("it IS a member over Q"),
        }
    }

    fn parse_poly_rel(s: &str) -> P {
        crate::poly::parse_poly(
            s,
            &["t".to_string(), "x".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn derivation_components_iterate_with_binomial_weights() {
        // D_i ∘ D_j = C(i+j, i) D_{i+j} on a spread of monomials.
        let p = pres("base Q[t]\nvars x\n");
        let (ring, _) = prolong(&p, 4).unwrap();
        let n = ring.arity();
        let t = P::var(n, 0);
        let x0 = P::var(n, ring.var_index(0, 0));
        let x1 = P::var(n, ring.var_index(0, 1));
        let samples = vec![
            t.clone(),
            x0.clone(),
            x1.clone(),
            t.mul(&x0),
            x0.mul(&x0),
            x0.mul(&x1),
            t.mul(&x0).mul(&x0),
            x0.mul(&x0).mul(&x0),
        ];
        let mut checked = 0;
        for f in &samples {
            for i in 0..=4u64 {
                for j in 0..=4u64 {
                    if i + j > 4 {
                        continue;
                    }
                    let rhs = match ring.hs::<Rat>(i + j, f) {
                        Ok(r) => r,
                        Err(_) => continue,
                    };
                    let inner = ring.hs::<Rat>(j, f).unwrap();
                    let lhs = ring.hs::<Rat>(i, &inner).unwrap();
                    let b = num_integer::binomial(BigInt::from(i + j), BigInt::from(i));
                    assert_eq!(
                        lhs,
                        rhs.scale(&Rat::from_integer(b)),
                        "iterativity failed at i={i}, j={j}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "only {checked} cases ran");
    }

    #[test]
    fn prolonged_generators_are_derivation_stable() {
        // D_k of the (mu, i) generator is C(i+k, i) times the (mu, i+k)
        // generator, and in particular stays in the ideal.
        let p = pres("base Q\nvars x\nrel x^2 - 1");
        let (ring, ideal) = prolong(&p, 3).unwrap();
        for (g, (mu, i)) in ideal.gens.iter().zip(&ideal.origins) {
            for k in 1..=3u64 {
                if i + k > 3 {
                    continue;
                }
                let d = ring.hs::<Rat>(k, g).unwrap();
                let target_idx = ideal
                    .origins
                    .iter()
                    .position(|o| *o == (*mu, i + k))
                    .expect("ladder generator exists");
                let b = num_integer::binomial(BigInt::from(i + k), BigInt::from(k));
                assert_eq!(d, ideal.gens[target_idx].scale(&Rat::from_integer(b)));
                match ideal.member(p.base, &d, &Limits::default()) {
                    Membership::Yes { .. } => {}
                    _ => panic!("derivative of a generator left the ideal"),
                }
            }
        }
    }

    #[test]
    fn higher_leibniz_product_rule() {
        let p = pres("base Q[t]\nvars x y\n");
        let (ring, _) = prolong(&p, 3).unwrap();
        let n = ring.arity();
        let f = P::var(n, 0)
            .mul(&P::var(n, ring.var_index(0, 0)))
            .add(&P::var(n, ring.var_index(1, 1)));
        let g = P::var(n, ring.var_index(0, 1)).add(&P::constant(n, rat(1, 3)));
        for i in 0..=2u64 {
            let lhs = ring.hs::<Rat>(i, &f.mul(&g)).unwrap();
            let mut rhs = P::zero();
            for a in 0..=i {
                rhs = rhs.add(
                    &ring
                        .hs::<Rat>(a, &f)
                        .unwrap()
                        .mul(&ring.hs::<Rat>(i - a, &g).unwrap()),
                );
            }
            assert_eq!(lhs, rhs, "product rule failed at i={i}");
        }
    }

    #[test]
    fn adjunction_extends_the_free_variable_to_t() {
        // x ↦ t in Q[t]: the ladder is t, 1, 0.
        let p = pres("base Q[t]\nvars x\n");
        let image = FracLaurent::<Rat>::t_pow_frac(1, 1);
        let (ring, map) = adjunction_extend(&p, 2, &[image.clone()]).unwrap();
        assert_eq!(ring.order, 2);
        assert_eq!(map.images[0][0], image);
        assert_eq!(map.images[0][1], FracLaurent::one(1));
        assert!(map.images[0][2].is_zero());
    }

    #[test]
    fn adjunction_respects_relations() {
        // x ↦ 1 satisfies x^2 − 1 and all of its derivatives.
        let p = pres("base Q[t]\nvars x\nrel x^2 - 1");
        let image = FracLaurent::<Rat>::one(1);
        let (_, map) = adjunction_extend(&p, 2, &[image]).unwrap();
        assert!(map.images[0][1].is_zero());
        // x ↦ t does not: already the order-0 generator evaluates to
        // t^2 − 1 ≠ 0.
        let bad = adjunction_extend(&p, 2, &[FracLaurent::<Rat>::t_pow_frac(1, 1)]);
        match bad {
            Err(JetError::Obstruction(v)) => {
                assert!(v.iter().any(|(mu, i, _)| (*mu, *i) == (0, 0)));
            }
            _ => panic!("x ↦ t must be obstructed by x^2 - 1"),
        }
    }

    #[test]
    fn collapsing_presentations_obstruct_every_map() {
        // Relation t over Z[t]: D_0 forces t ↦ 0 (impossible, the base
        // map fixes t) and D_1 evaluates to the unit 1. Both violations
        // are reported, with the derivative of the relation rendering
        // as "1".
        let p = pres("base Z[t]\nvars\nrel t");
        match adjunction_extend(&p, 1, &[]) {
            Err(JetError::Obstruction(v)) => {
                assert_eq!(v.len(), 2);
                assert!(v.contains(&(0usize, 0u64, "t".to_string())));
                assert!(v.contains(&(0usize, 1u64, "1".to_string())));
            }
            _ => panic!("the collapsing presentation admits no maps"),
        }
    }

    #[test]
    fn fractional_images_work_through_the_laurent_derivation() {
        // x ↦ t^(1/2) in S_2: D_1(t^(1/2)) = (1/2) t^(-1/2), and the
        // relation x^2 − t is respected at every order.
        let p = pres("base Q[t]\nvars x\nrel x^2 - t");
        let image = FracLaurent::<Rat>::t_pow_frac(2, 1);
        let (_, map) = adjunction_extend(&p, 3, &[image]).unwrap();
        assert_eq!(
            map.images[0][1],
            FracLaurent::monomial(2, rat(-1, 2), rat(1, 2))
        );
    }

    #[test]
    fn jet_files_parse_and_validate() {
        let p = pres("# a comment\nbase Q[t]\nvars x y\nrel x*y - t\nrel x^2");
        assert_eq!(p.base, BaseRing::RatPolyT);
        assert_eq!(p.vars, vec!["x", "y"]);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.arity(), 3);
        // Errors: missing base, bad base, duplicate directives, unknown
        // variables, reserved name, non-integral relation over Z[t].
        assert!(matches!(
            parse_jet::<Rat>("vars x"),
            Err(JetError::File(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base R[t]"),
            Err(JetError::File(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base Q\nbase Q"),
            Err(JetError::File(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base Q\nvars x\nrel x + w"),
            Err(JetError::Poly(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base Q\nrel t"),
            Err(JetError::Poly(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base Q[t]\nvars t"),
            Err(JetError::InvalidPresentation(_))
        ));
        assert!(matches!(
            parse_jet::<Rat>("base Z[t]\nvars x\nrel 1/2*x"),
            Err(JetError::InvalidPresentation(_))
        ));
    }

    #[test]
    fn laurent_derivation_matches_the_t_ladder() {
        // The target's derivation agrees with the jet table on t itself
        // and satisfies the product rule across fractional powers.
        let t = FracLaurent::<Rat>::t_pow_frac(1, 1);
        assert_eq!(t.apply_di(0), t);
        assert_eq!(t.apply_di(1), FracLaurent::one(1));
        assert!(t.apply_di(2).is_zero());
        let h = FracLaurent::<Rat>::t_pow_frac(2, 1);
        let prod = h.mul(&h);
        assert_eq!(prod, t.with_denom(2));
        let direct = prod.apply_di(1);
        let leibniz = h.apply_di(1).mul(&h).add(&h.mul(&h.apply_di(1)));
        assert_eq!(direct, leibniz);
        assert_eq!(direct, FracLaurent::one(2));
    }
}
