//! Twisted Fock modules for abelian (Heisenberg) vertex algebras and the
//! pullback of module structures along loop-algebra maps.
//!
//! For an orthogonal automorphism `g` of exact order `M` on abelian Lie
//! data `h`, eigenvectors of class `r` (convention `g v = ζ_M^{-r} v`, as
//! in the loop algebra) carry modes `a_q` indexed by `q ∈ r/M + ℤ`. The
//! module is generated by a highest-weight vector `w₊` with
//!
//! - `a_q w₊ = 0` for `q ≥ 0` (zero modes annihilate — the simplest
//!   highest-weight normalization),
//! - creation modes `q < 0` acting freely (canonical sorted monomials),
//! - commutation `[a_p, b_q] = p (a,b) δ_{p,−q} ℓ` with fractional `p`.
//!
//! A map of twisted loop algebras given on generator modes extends to all
//! modes by the integer shift law `φ(a_(n+ℓ)) = Σ_j a^j_(n_j+ℓ)` (ring
//! linearity in `t^ℓ`), and pulling a module back along it reassigns each
//! generator mode to the operator sum of the image modes. Pullback is
//! contravariantly functorial on the nose at generator level:
//! `(ψ∘φ)* = φ* ∘ ψ*`, which [`compose`](PullbackMap::compose) makes
//! checkable as an exact equality of mode assignments.
//!
//! Scope: only the abelian case gets concrete modules here; the
//! non-abelian twisted theory needs machinery outside this crate's remit.
//! Full twisted-operator identities are correspondingly replaced by
//! generator-level commutator and support checks.

use std::collections::BTreeMap;

use num_traits::{Euclid, Signed, Zero};

use crate::affine::{PbwMonomial, State};
use crate::lie::{aut_order, eigen_decompose, is_lie_automorphism, LieError, LiePresentation};
use crate::linalg::Matrix;
use crate::loopalg::LoopAlgebra;
use crate::scalar::{rat_int, Field, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TwistedError {
    #[error("lie error: {0}")]
    Lie(#[from] LieError),
    #[error("twisted modules need abelian Lie data")]
    NotAbelian,
    #[error("the automorphism does not preserve the form")]
    NotOrthogonal,
    #[error("automorphism order is {found}, expected {want}")]
    WrongOrder { found: u32, want: u32 },
    #[error("change of basis is singular")]
    BadBasis,
    #[error("presentation is invalid after base change: {0:?}")]
    InvalidPresentation(Vec<String>),
    #[error("mode {q} of generator {gen} (class {class}) is not in class/M + Z")]
    ClassMismatch { gen: usize, q: Rat, class: u32 },
    #[error("image of generator {gen} hits generator {target} at exponent {q}, violating its eigenclass")]
    BadSupport { gen: usize, target: usize, q: Rat },
}

/// A sorted sequence of creation modes `(q, generator)` with `q < 0`,
/// applied to `w₊`. Ordering and canonical form mirror the PBW monomials
/// of the affine module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwistedMono(pub Vec<(Rat, usize)>);

impl TwistedMono {
    pub fn vacuum() -> Self {
        TwistedMono(Vec::new())
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Total weight `Σ (−q)` of the creation modes.
    pub fn weight(&self) -> Rat {
        let mut w = rat_int(0);
        for (q, _) in &self.0 {
            w -= q;
        }
        w
    }

    fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1]) && self.0.iter().all(|(q, _)| q.is_negative())
    }
}

/// A finite scalar combination of twisted monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedState<K: Field>(BTreeMap<TwistedMono, K>);

impl<K: Field> TwistedState<K> {
    pub fn zero() -> Self {
        TwistedState(BTreeMap::new())
    }

    /// The highest-weight vector `w₊`.
    pub fn vacuum() -> Self {
        Self::monomial(TwistedMono::vacuum(), K::one())
    }

    pub fn monomial(m: TwistedMono, c: K) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn add_term(&mut self, m: TwistedMono, c: K) {
        debug_assert!(m.is_sorted(), "twisted monomials are kept sorted");
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(m).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            let dead: Vec<TwistedMono> = self
                .0
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.0.remove(&k);
            }
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
        for (m, v) in &self.0 {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-K::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TwistedMono, &K)> {
        self.0.iter()
    }
}

/// The twisted Fock module of an orthogonal automorphism of abelian Lie
/// data, presented in an eigenbasis so that each generator carries an
/// eigenclass.
pub struct TwistedFock<K: Field> {
    /// Abelian Lie data in the eigenbasis of the automorphism.
    pub lie: LiePresentation<K>,
    /// Eigenclass of each generator.
    pub classes: Vec<u32>,
    /// Order `M`; generator modes live in `class/M + ℤ`.
    pub order: u32,
    /// Central level `ℓ` in the commutator `[a_p, b_q] = p(a,b)δ_{p,−q}ℓ`.
    pub level: K,
}

/// Build the twisted Fock module. The automorphism must preserve the
/// form (brackets are trivially preserved on abelian data) and have exact
/// order `m`.
pub fn twisted_fock_build<K: Field>(
    h: &LiePresentation<K>,
    g: &Matrix<K>,
    m: u32,
    level: K,
) -> Result<TwistedFock<K>, TwistedError> {
    if !h.abelian {
        return Err(TwistedError::NotAbelian);
    }
    if is_lie_automorphism(h, g).is_err() {
        return Err(TwistedError::NotOrthogonal);
    }
    let found = aut_order(g, m.max(1) + 1)?;
    if found != m {
        return Err(TwistedError::WrongOrder { found, want: m });
    }
    let eigen = eigen_decompose(h, g, m)?;
    let dim = h.dim();
    let (p, classes) = eigen.basis_matrix(dim);
    let labels: Vec<String> = classes
        .iter()
        .enumerate()
        .map(|(i, r)| format!("x{i}r{r}"))
        .collect();
    let new_lie = h.change_basis(&p, labels).ok_or(TwistedError::BadBasis)?;
    let errs = new_lie.validate();
    if !errs.is_empty() {
        return Err(TwistedError::InvalidPresentation(errs));
    }
    Ok(TwistedFock {
        lie: new_lie,
        classes,
        order: m,
        level,
    })
}

impl<K: Field> TwistedFock<K> {
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    /// Check that `q ∈ class(gen)/M + ℤ`.
    pub fn check_class(&self, gen: usize, q: &Rat) -> Result<(), TwistedError> {
        let scaled = q * rat_int(self.order as i64);
        let ok = scaled.is_integer() && {
            let r = scaled
                .to_integer()
                .rem_euclid(&num_bigint::BigInt::from(self.order));
            r == num_bigint::BigInt::from(self.classes[gen])
        };
        if ok {
            Ok(())
        } else {
            Err(TwistedError::ClassMismatch {
                gen,
                q: q.clone(),
                class: self.classes[gen],
            })
        }
    }

    /// Apply the mode `a_q` of generator `gen` to a state.
    pub fn mode_action(
        &self,
        gen: usize,
        q: &Rat,
        x: &TwistedState<K>,
    ) -> Result<TwistedState<K>, TwistedError> {
        self.check_class(gen, q)?;
        let mut out = TwistedState::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.mode_on_mono(gen, q, m).scale(c));
        }
        Ok(out)
    }

    /// Apply a linear combination of modes.
    pub fn op_action(
        &self,
        op: &ModeOp<K>,
        x: &TwistedState<K>,
    ) -> Result<TwistedState<K>, TwistedError> {
        let mut out = TwistedState::zero();
        for (c, gen, q) in &op.terms {
            out = out.add(&self.mode_action(*gen, q, x)?.scale(c));
        }
        Ok(out)
    }

    fn mode_on_mono(&self, gen: usize, q: &Rat, m: &TwistedMono) -> TwistedState<K> {
        if m.is_vacuum() {
            if !q.is_negative() {
                return TwistedState::zero();
            }
            return TwistedState::monomial(TwistedMono(vec![(q.clone(), gen)]), K::one());
        }
        let (q1, g1) = m.0[0].clone();
        if q.is_negative() && (q.clone(), gen) <= (q1.clone(), g1) {
            let mut modes = Vec::with_capacity(m.0.len() + 1);
            modes.push((q.clone(), gen));
            modes.extend_from_slice(&m.0);
            return TwistedState::monomial(TwistedMono(modes), K::one());
        }
        // Commute a_q past the head mode (g1)_(q1): the data is abelian,
        // so a_q (g1)_(q1) x = (g1)_(q1) a_q x + q (a,g1) ℓ δ_(q+q1,0) x.
        let rest = TwistedMono(m.0[1..].to_vec());
        let tail = self.mode_on_mono(gen, q, &rest);
        let mut out = TwistedState::zero();
        for (mm, cc) in tail.terms() {
            out = out.add(&self.mode_on_mono(g1, &q1, mm).scale(cc));
        }
        if (q + &q1).is_zero() {
            let central =
                K::from_rat(q) * self.lie.form_entry(gen, g1).clone() * self.level.clone();
            out = out.add(&TwistedState::monomial(rest, K::one()).scale(&central));
        }
        out
    }

    /// Spanning monomials of depth <= `depth` with every exponent in
    /// `[qmin, 0)` (class-compatible), sorted canonically.
    pub fn basis(&self, depth: usize, qmin: &Rat) -> Vec<TwistedMono> {
        let mut out = vec![TwistedMono::vacuum()];
        let mut frontier = vec![TwistedMono::vacuum()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for m in &frontier {
                let head = m.0.first().cloned();
                for gen in 0..self.dim() {
                    // Exponents a/M with a ≡ class (mod M), qmin <= a/M < 0.
                    let mbig = rat_int(self.order as i64);
                    let lo = (qmin * &mbig).ceil().to_integer();
                    let mut a = lo.clone();
                    while a < num_bigint::BigInt::from(0) {
                        let rem = a.rem_euclid(&num_bigint::BigInt::from(self.order));
                        if rem == num_bigint::BigInt::from(self.classes[gen]) {
                            let q = Rat::new(a.clone(), self.order.into());
                            let cand = (q.clone(), gen);
                            if head.as_ref().is_none_or(|h| cand <= *h) {
                                let mut modes = vec![cand];
                                modes.extend_from_slice(&m.0);
                                next.push(TwistedMono(modes));
                            }
                        }
                        a += 1;
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Verify `[a_p, b_q] = p (a,b) δ_{p,−q} ℓ` on all generator pairs,
    /// class-compatible exponents in `[qlo, qhi]`, against every state of
    /// the given depth window. Returns human-readable violations.
    pub fn commutator_violations(
        &self,
        qlo: &Rat,
        qhi: &Rat,
        depth: usize,
    ) -> Vec<String> {
        let mut out = Vec::new();
        let states: Vec<TwistedState<K>> = self
            .basis(depth, qlo)
            .into_iter()
            .map(|m| TwistedState::monomial(m, K::one()))
            .collect();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for p in self.exponents_in(a, qlo, qhi) {
                    for q in self.exponents_in(b, qlo, qhi) {
                        for x in &states {
                            let lhs = self
                                .mode_action(a, &p, &self.mode_action(b, &q, x).unwrap())
                                .unwrap()
                                .sub(
                                    &self
                                        .mode_action(b, &q, &self.mode_action(a, &p, x).unwrap())
                                        .unwrap(),
                                );
                            let rhs = if (&p + &q).is_zero() {
                                x.scale(
                                    &(K::from_rat(&p)
                                        * self.lie.form_entry(a, b).clone()
                                        * self.level.clone()),
                                )
                            } else {
                                TwistedState::zero()
                            };
                            if lhs != rhs {
                                out.push(format!(
                                    "[{}_({p}), {}_({q})] deviates from the central term",
                                    self.lie.labels[a], self.lie.labels[b]
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Class-compatible exponents of a generator in `[qlo, qhi]`.
    pub fn exponents_in(&self, gen: usize, qlo: &Rat, qhi: &Rat) -> Vec<Rat> {
        let mbig = rat_int(self.order as i64);
        let lo = (qlo * &mbig).ceil().to_integer();
        let hi = (qhi * &mbig).floor().to_integer();
        let mut out = Vec::new();
        let mut a = lo.clone();
        while a <= hi {
            let rem = a.rem_euclid(&num_bigint::BigInt::from(self.order));
            if rem == num_bigint::BigInt::from(self.classes[gen]) {
                out.push(Rat::new(a.clone(), self.order.into()));
            }
            a += 1;
        }
        out
    }

    /// Canonical residue representative `class/M ∈ [0, 1)` used as the
    /// base exponent of generator maps.
    pub fn base_exponent(&self, gen: usize) -> Rat {
        Rat::new(self.classes[gen].into(), self.order.into())
    }

    pub fn render_mono(&self, m: &TwistedMono) -> String {
        if m.is_vacuum() {
            return "w+".to_string();
        }
        let mut s = String::new();
        for (q, g) in &m.0 {
            s.push_str(&format!("{}({})", self.lie.labels[*g], q));
        }
        s.push_str("w+");
        s
    }

    pub fn render(&self, x: &TwistedState<K>) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.terms()
            .map(|(m, c)| format!("{} {}", c, self.render_mono(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A finite sum of generator modes `Σ c · a^gen_(q)` acting on the module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOp<K: Field> {
    pub terms: Vec<(K, usize, Rat)>,
}

impl<K: Field> ModeOp<K> {
    /// Merge duplicate `(gen, q)` entries and drop zeros, sorting by
    /// `(gen, q)` so equal operators compare equal.
    pub fn canonical(mut self) -> Self {
        let mut map: BTreeMap<(usize, Rat), K> = BTreeMap::new();
        for (c, g, q) in self.terms.drain(..) {
            let entry = map.entry((g, q)).or_insert_with(K::zero);
            *entry = entry.clone() + c;
        }
        ModeOp {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((g, q), c)| (c, g, q))
                .collect(),
        }
    }
}

/// A map of twisted loop algebras given on generator modes at their base
/// exponents; all other modes follow by the integer shift law. The map
/// must respect eigenclasses (validated on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackMap<K: Field> {
    /// `images[a]` expands `φ(a_(base_a))` as `Σ (c, target, exponent)`.
    pub images: Vec<Vec<(K, usize, Rat)>>,
}

impl<K: Field> PullbackMap<K> {
    pub fn identity(fock: &TwistedFock<K>) -> Self {
        PullbackMap {
            images: (0..fock.dim())
                .map(|a| vec![(K::one(), a, fock.base_exponent(a))])
                .collect(),
        }
    }

    /// Validate and wrap raw image data.
    pub fn new(
        fock: &TwistedFock<K>,
        images: Vec<Vec<(K, usize, Rat)>>,
    ) -> Result<Self, TwistedError> {
        if images.len() != fock.dim() {
            return Err(TwistedError::InvalidPresentation(vec![format!(
                "expected {} generator images, got {}",
                fock.dim(),
                images.len()
            )]));
        }
        for (a, img) in images.iter().enumerate() {
            for (_, j, q) in img {
                if fock.check_class(*j, q).is_err() {
                    return Err(TwistedError::BadSupport {
                        gen: a,
                        target: *j,
                        q: q.clone(),
                    });
                }
                // The shift law pins every image exponent to the source
                // generator's residue: base_a + ℤ must contain q.
                let diff = q - &fock.base_exponent(a);
                if !diff.is_integer() {
                    return Err(TwistedError::BadSupport {
                        gen: a,
                        target: *j,
                        q: q.clone(),
                    });
                }
            }
        }
        Ok(PullbackMap { images })
    }

    /// Diagonal map scaling each generator by a constant.
    pub fn diagonal(fock: &TwistedFock<K>, scales: &[K]) -> Self {
        PullbackMap {
            images: (0..fock.dim())
                .map(|a| vec![(scales[a].clone(), a, fock.base_exponent(a))])
                .collect(),
        }
    }

    /// The operator assigned to `a_(q)`: expand `φ(a_(q))` by the shift
    /// law and sum the image modes.
    pub fn assign(
        &self,
        fock: &TwistedFock<K>,
        gen: usize,
        q: &Rat,
    ) -> Result<ModeOp<K>, TwistedError> {
        fock.check_class(gen, q)?;
        let shift = q - &fock.base_exponent(gen);
        debug_assert!(shift.is_integer());
        let terms = self.images[gen]
            .iter()
            .map(|(c, j, nj)| (c.clone(), *j, nj + &shift))
            .collect();
        Ok(ModeOp { terms }.canonical())
    }

    /// Composition `self ∘ other` (apply `other` first), again a
    /// generator-level map; pullback reverses the order:
    /// `(self ∘ other)* = other* ∘ self*`.
    pub fn compose(&self, fock: &TwistedFock<K>, other: &Self) -> Result<Self, TwistedError> {
        let mut images = Vec::with_capacity(other.images.len());
        for a in 0..other.images.len() {
            let mut img: Vec<(K, usize, Rat)> = Vec::new();
            for (c, j, nj) in &other.images[a] {
                let op = self.assign(fock, *j, nj)?;
                for (d, k, qk) in op.terms {
                    img.push((c.clone() * d, k, qk));
                }
            }
            images.push(
                ModeOp { terms: img }
                    .canonical()
                    .terms,
            );
        }
        PullbackMap::new(fock, images)
    }

    /// Whether the map preserves loop products on generator pairs: for
    /// classes-compatible exponents in `[qlo, qhi]` and `l ∈ [0, lmax]`,
    /// `φ(x)_l φ(y) = φ(x_l y)` inside the given loop algebra (whose
    /// eigenbasis presentation must match the module's). Products with
    /// `l < 0` leave the generator span and are out of scope here.
    pub fn loop_product_violations(
        &self,
        fock: &TwistedFock<K>,
        lp: &LoopAlgebra<K>,
        qlo: &Rat,
        qhi: &Rat,
        lmax: i64,
    ) -> Vec<String> {
        let mut out = Vec::new();
        let gen_elem = |gen: usize, q: &Rat| {
            lp.element(
                q.clone(),
                State::monomial(PbwMonomial::single(-1, gen), K::one()),
            )
            .expect("class-compatible generator mode")
        };
        let map_elem = |gen: usize, q: &Rat| {
            let op = self.assign(fock, gen, q).expect("class-checked");
            let mut acc = lp.zero();
            for (c, j, qj) in &op.terms {
                acc = lp.add(&acc, &lp.scale(c, &gen_elem(*j, qj)));
            }
            acc
        };
        for a in 0..fock.dim() {
            for b in 0..fock.dim() {
                for p in fock.exponents_in(a, qlo, qhi) {
                    for q in fock.exponents_in(b, qlo, qhi) {
                        for l in 0..=lmax {
                            // Products of degree-1 generators at l >= 0 are
                            // vacuum multiples, which every unital ring-linear
                            // map fixes.
                            let lhs = lp.loop_nproduct(&gen_elem(a, &p), l, &gen_elem(b, &q));
                            let rhs =
                                lp.loop_nproduct(&map_elem(a, &p), l, &map_elem(b, &q));
                            if lhs != rhs {
                                out.push(format!(
                                    "product preservation fails: gens ({a}, {b}), exponents ({p}, {q}), l = {l}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// The pulled-back module structure: assigns to each generator mode of
/// the source the operator of its image, acting on the original module.
pub struct PulledModule<'a, K: Field> {
    pub fock: &'a TwistedFock<K>,
    pub map: PullbackMap<K>,
}

impl<'a, K: Field> PulledModule<'a, K> {
    pub fn new(fock: &'a TwistedFock<K>, map: PullbackMap<K>) -> Self {
        PulledModule { fock, map }
    }

    /// Act by the pulled-back mode `(φ* a)_q`.
    pub fn act(
        &self,
        gen: usize,
        q: &Rat,
        x: &TwistedState<K>,
    ) -> Result<TwistedState<K>, TwistedError> {
        let op = self.map.assign(self.fock, gen, q)?;
        self.fock.op_action(&op, x)
    }

    /// Verify the commutator law for the pulled-back modes on states of
    /// bounded depth (exponents in `[qlo, qhi]`): a product-preserving
    /// map transfers `[a_p, b_q] = p (a,b) δ_{p,−q} ℓ` verbatim (the form
    /// is preserved because 1-st products are), so the pulled-back
    /// assignment must satisfy the original law — and a map that is not
    /// product-preserving shows up here as a violation.
    pub fn commutator_violations(&self, qlo: &Rat, qhi: &Rat, depth: usize) -> Vec<String> {
        let fock = self.fock;
        let mut out = Vec::new();
        let states: Vec<TwistedState<K>> = fock
            .basis(depth, qlo)
            .into_iter()
            .map(|m| TwistedState::monomial(m, K::one()))
            .collect();
        for a in 0..fock.dim() {
            for b in 0..fock.dim() {
                for p in fock.exponents_in(a, qlo, qhi) {
                    for q in fock.exponents_in(b, qlo, qhi) {
                        for x in &states {
                            let ab = self.act(a, &p, &self.act(b, &q, x).unwrap()).unwrap();
                            let ba = self.act(b, &q, &self.act(a, &p, x).unwrap()).unwrap();
                            let lhs = ab.sub(&ba);
                            let rhs = if (&p + &q).is_zero() {
                                x.scale(
                                    &(K::from_rat(&p)
                                        * fock.lie.form_entry(a, b).clone()
                                        * fock.level.clone()),
                                )
                            } else {
                                TwistedState::zero()
                            };
                            if lhs != rhs {
                                out.push(format!(
                                    "pulled-back commutator fails: gens ({a}, {b}), exponents ({p}, {q})"
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
