//! Base change of a universal affine vertex algebra along a fractional
//! Laurent ring: elements of `V ⊗ S_m` with the derivation-twisted product
//!
//! ```text
//! (u ⊗ s)_n (v ⊗ t) = sum_{j >= 0} u_(n+j) v ⊗ D_j(s) t,
//! ```
//!
//! finite by regularity of `V`. The Hasse–Schmidt family acts by
//! `D_n(v ⊗ s) = sum_{i+j=n} D_i(v) ⊗ D_j(s)`, and the ring acts through
//! the vacuum: `r · x = (1 ⊗ r)_(-1) x`, multiplication of coefficients.
//!
//! [`F1Map`] represents a vertex-algebra endomorphism of `V ⊗ S_m` by the
//! images of the degree-one generator states. Such a map is legal when it
//! fixes the vacuum and respects every `i`-th product of generators for
//! `i >= 0` (checked exactly); it then extends to all states by sending
//! `a_(q) x` to `Phi(a)_(q) Phi(x)`, which is how every automorphism in
//! this crate is evaluated — the infinite-dimensional space is never
//! represented by a matrix.

use std::collections::BTreeMap;

use crate::affine::{AffineAlgebra, PbwMonomial, State};
use crate::laurent::FracLaurent;
use crate::scalar::Field;
use crate::vertex::VertexAlgebra;

/// An element of `V ⊗ S_m`: a finite sum of PBW monomials with fractional
/// Laurent coefficients, canonically collected (no zero coefficients).
#[derive(Clone)]
pub struct TensorElement<K: Field> {
    denom: u32,
    terms: BTreeMap<PbwMonomial, FracLaurent<K>>,
}

impl<K: Field> PartialEq for TensorElement<K> {
    fn eq(&self, other: &Self) -> bool {
        // Value equality; the ring tag is bookkeeping.
        self.terms == other.terms
    }
}

impl<K: Field> std::fmt::Debug for TensorElement<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (in V (x) S_{})", self.denom);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, s)| format!("({s}) {m:?}"))
            .collect();
        write!(f, "{} (in V (x) S_{})", parts.join(" + "), self.denom)
    }
}

impl<K: Field> TensorElement<K> {
    pub fn zero(denom: u32) -> Self {
        TensorElement {
            denom,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(denom: u32) -> Self {
        Self::monomial_term(denom, PbwMonomial::vacuum(), FracLaurent::one(denom))
    }

    pub fn monomial_term(denom: u32, m: PbwMonomial, s: FracLaurent<K>) -> Self {
        let mut x = Self::zero(denom);
        x.add_term(m, s);
        x
    }

    /// Embed a plain state as `x ⊗ 1`.
    pub fn from_state(denom: u32, x: &State<K>) -> Self {
        let mut out = Self::zero(denom);
        for (m, c) in x.terms() {
            out.add_term(m.clone(), FracLaurent::one(denom).scale(c));
        }
        out
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn add_term(&mut self, m: PbwMonomial, s: FracLaurent<K>) {
        if s.is_zero() {
            return;
        }
        let s = s.with_denom(lcm_u32(self.denom, s.denom()));
        assert!(
            s.denom() == self.denom,
            "coefficient ring S_{} does not embed in S_{}",
            s.denom(),
            self.denom
        );
        let entry = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| FracLaurent::zero(self.denom));
        *entry = entry.add(&s);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.add_term(m.clone(), s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.denom);
        for (m, s) in &self.terms {
            out.add_term(m.clone(), s.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_k(&self, c: &K) -> Self {
        let mut out = Self::zero(self.denom);
        for (m, s) in &self.terms {
            out.add_term(m.clone(), s.scale(c));
        }
        out
    }

    /// The ring action: multiply every coefficient by `r` (this is
    /// `(1 ⊗ r)_(-1) x`).
    pub fn scale_ring(&self, r: &FracLaurent<K>) -> Self {
        let mut out = Self::zero(self.denom);
        for (m, s) in &self.terms {
            out.add_term(m.clone(), s.mul(r));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &FracLaurent<K>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> FracLaurent<K> {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| FracLaurent::zero(self.denom))
    }

    /// Maximum conformal weight of the state factor; `None` when zero.
    pub fn affine_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

/// `V ⊗ S_m` as a vertex algebra over the scalar field.
pub struct TensorAlgebra<K: Field> {
    pub affine: AffineAlgebra<K>,
    m: u32,
}

impl<K: Field> TensorAlgebra<K> {
    pub fn new(affine: AffineAlgebra<K>, m: u32) -> Self {
        assert!(m >= 1);
        TensorAlgebra { affine, m }
    }

    pub fn fractional_denom(&self) -> u32 {
        self.m
    }

    /// The generator state `a ⊗ 1` for generator index `g`.
    pub fn generator(&self, g: usize) -> TensorElement<K> {
        TensorElement::from_state(self.m, &self.affine.generator(g))
    }

    /// Apply the mode `x_(n)` of a tensor element `x` to `y` — the same
    /// sum as the n-th product, exposed for evaluators that walk modes.
    pub fn mode_apply(
        &self,
        x: &TensorElement<K>,
        n: i64,
        y: &TensorElement<K>,
    ) -> TensorElement<K> {
        self.nproduct(x, n, y)
    }
}

impl<K: Field> VertexAlgebra<K> for TensorAlgebra<K> {
    type Elem = TensorElement<K>;

    fn name(&self) -> String {
        format!("{} (x) S_{}", self.affine.name(), self.m)
    }

    fn vacuum(&self) -> TensorElement<K> {
        TensorElement::vacuum(self.m)
    }

    fn zero_elem(&self) -> TensorElement<K> {
        TensorElement::zero(self.m)
    }

    fn add(&self, a: &TensorElement<K>, b: &TensorElement<K>) -> TensorElement<K> {
        a.add(b)
    }

    fn scale(&self, c: &K, a: &TensorElement<K>) -> TensorElement<K> {
        a.scale_k(c)
    }

    fn nproduct(
        &self,
        u: &TensorElement<K>,
        n: i64,
        v: &TensorElement<K>,
    ) -> TensorElement<K> {
        let mut out = TensorElement::zero(self.m);
        for (m1, s) in u.terms() {
            for (m2, t) in v.terms() {
                let d = m1.degree() + m2.degree();
                let mut j: i64 = 0;
                while n + j < d {
                    let ds = s.apply_di(j as u64);
                    if !ds.is_zero() {
                        let inner = self.affine.monomial_nproduct(m1, n + j, m2);
                        if !inner.is_zero() {
                            let coeff = ds.mul(t);
                            for (mm, cc) in inner.terms() {
                                out.add_term(mm.clone(), coeff.scale(cc));
                            }
                        }
                    }
                    j += 1;
                }
            }
        }
        out
    }

    fn regularity_bound(&self, u: &TensorElement<K>, v: &TensorElement<K>) -> i64 {
        match (u.affine_degree(), v.affine_degree()) {
            (Some(du), Some(dv)) => du + dv,
            _ => 0,
        }
    }

    fn is_zero(&self, a: &TensorElement<K>) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &TensorElement<K>) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, s) in a.terms() {
            parts.push(format!("({}) {}", s, self.affine.render_monomial(m)));
        }
        parts.join(" + ")
    }
}

/// The Hasse–Schmidt family on the tensor algebra in closed form:
/// `D_n(v ⊗ s) = sum_{i+j=n} D_i(v) ⊗ D_j(s)`. Agrees with the canonical
/// family `x_(-n-1) vacuum` (tested), but costs less.
pub fn tensor_hs<K: Field>(
    alg: &TensorAlgebra<K>,
    x: &TensorElement<K>,
    n: u64,
) -> TensorElement<K> {
    let mut out = TensorElement::zero(x.denom());
    for (m, s) in x.terms() {
        let state = State::monomial(m.clone(), K::one());
        for i in 0..=n {
            let j = n - i;
            let ds = s.apply_di(j);
            if ds.is_zero() {
                continue;
            }
            let dv = crate::vertex::canonical_hs(&alg.affine, &state, i);
            for (mm, cc) in dv.terms() {
                out.add_term(mm.clone(), ds.scale(cc));
            }
        }
    }
    out
}

/// A vertex-algebra endomorphism of `V ⊗ S_m` presented by the images of
/// the generator states `a ⊗ 1` (the vacuum is always fixed). Evaluation
/// extends by `Phi(a_(q) x) = Phi(a)_(q) Phi(x)` and ring-linearity.
#[derive(Clone)]
pub struct F1Map<K: Field> {
    pub images: Vec<TensorElement<K>>,
}

impl<K: Field> F1Map<K> {
    pub fn identity(alg: &TensorAlgebra<K>) -> Self {
        F1Map {
            images: (0..alg.affine.dim()).map(|g| alg.generator(g)).collect(),
        }
    }

    /// Build from a matrix action plus a vacuum row: the generator `a_j`
    /// maps to `sum_i phi[i][j] (a_i ⊗ 1) + vac[j] (1 ⊗ 1)`. Columns of
    /// `phi` are images; `phi[i][j]` and `vac[j]` are ring elements.
    pub fn from_phi_vac(
        alg: &TensorAlgebra<K>,
        phi: &[Vec<FracLaurent<K>>],
        vac: &[FracLaurent<K>],
    ) -> Self {
        let dim = alg.affine.dim();
        assert_eq!(phi.len(), dim);
        assert_eq!(vac.len(), dim);
        let m = alg.fractional_denom();
        let mut images = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut img = TensorElement::zero(m);
            for (i, row) in phi.iter().enumerate() {
                assert_eq!(row.len(), dim);
                img.add_term(PbwMonomial::single(-1, i), row[j].clone());
            }
            img.add_term(PbwMonomial::vacuum(), vac[j].clone());
            images.push(img);
        }
        F1Map { images }
    }

    /// Check the degree-one compatibility conditions that make the images
    /// extendable: for all generators `a, b` the images must satisfy
    /// `Phi(a)_0 Phi(b) = Phi([a,b])`, `Phi(a)_1 Phi(b) = (a,b) level 1`,
    /// and `Phi(a)_i Phi(b) = 0` for `i >= 2`. Returns the violations.
    pub fn compat_violations(&self, alg: &TensorAlgebra<K>) -> Vec<String> {
        let dim = alg.affine.dim();
        assert_eq!(self.images.len(), dim, "one image per generator");
        let mut bad = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                let ia = &self.images[a];
                let ib = &self.images[b];
                // 0-th product vs the bracket pushed through the map.
                let lhs0 = alg.nproduct(ia, 0, ib);
                let mut rhs0 = TensorElement::zero(alg.fractional_denom());
                for (c, coeff) in alg.affine.lie.bracket(a, b).iter().enumerate() {
                    if !coeff.is_zero() {
                        rhs0 = rhs0.add(&self.images[c].scale_k(coeff));
                    }
                }
                if lhs0 != rhs0 {
                    bad.push(format!(
                        "0-th product not respected on generators ({a}, {b})"
                    ));
                }
                // 1-st product vs (a,b) * level on the vacuum.
                let lhs1 = alg.nproduct(ia, 1, ib);
                let c1 = alg.affine.lie.form_entry(a, b).clone() * alg.affine.level.clone();
                let rhs1 = alg.vacuum().scale_k(&c1);
                if lhs1 != rhs1 {
                    bad.push(format!(
                        "1-st product not respected on generators ({a}, {b})"
                    ));
                }
                // Higher products of degree-one images must vanish.
                let bound = alg.regularity_bound(ia, ib);
                for i in 2..bound.max(2) {
                    if !alg.is_zero(&alg.nproduct(ia, i, ib)) {
                        bad.push(format!(
                            "{i}-th product of generator images ({a}, {b}) is nonzero"
                        ));
                    }
                }
            }
        }
        bad
    }

    /// Apply the extension to an arbitrary element.
    pub fn apply(&self, alg: &TensorAlgebra<K>, x: &TensorElement<K>) -> TensorElement<K> {
        let mut out = TensorElement::zero(x.denom());
        for (m, s) in x.terms() {
            let img = self.apply_monomial(alg, m);
            out = out.add(&img.scale_ring(s));
        }
        out
    }

    fn apply_monomial(&self, alg: &TensorAlgebra<K>, m: &PbwMonomial) -> TensorElement<K> {
        if m.is_vacuum() {
            return alg.vacuum();
        }
        let (q, g) = m.0[0];
        let rest = PbwMonomial(m.0[1..].to_vec());
        let tail = self.apply_monomial(alg, &rest);
        alg.mode_apply(&self.images[g], q, &tail)
    }

    /// Compose as maps: `self` after `other`.
    pub fn compose(&self, alg: &TensorAlgebra<K>, other: &F1Map<K>) -> F1Map<K> {
        F1Map {
            images: other
                .images
                .iter()
                .map(|img| self.apply(alg, img))
                .collect(),
        }
    }

    /// Verify multiplicativity `Phi(u_n v) = Phi(u)_n Phi(v)` on all PBW
    /// basis pairs of total degree <= `dmax` with `n` in
    /// `[mode_min, mode_max]`. The computational content of extending a
    /// degree-one map to the whole algebra.
    pub fn product_preservation_violations(
        &self,
        alg: &TensorAlgebra<K>,
        dmax: i64,
        mode_min: i64,
        mode_max: i64,
    ) -> Vec<String> {
        let mut bad = Vec::new();
        for du in 0..=dmax {
            for dv in 0..=(dmax - du) {
                for mu in alg.affine.basis_of_degree(du) {
                    for mv in alg.affine.basis_of_degree(dv) {
                        let u = TensorElement::monomial_term(
                            alg.fractional_denom(),
                            mu.clone(),
                            FracLaurent::one(alg.fractional_denom()),
                        );
                        let v = TensorElement::monomial_term(
                            alg.fractional_denom(),
                            mv.clone(),
                            FracLaurent::one(alg.fractional_denom()),
                        );
                        let fu = self.apply(alg, &u);
                        let fv = self.apply(alg, &v);
                        for n in mode_min..=mode_max {
                            let lhs = self.apply(alg, &alg.nproduct(&u, n, &v));
                            let rhs = alg.nproduct(&fu, n, &fv);
                            if lhs != rhs {
                                bad.push(format!(
                                    "product not preserved: ({})_{n} ({})",
                                    alg.affine.render_monomial(&mu),
                                    alg.affine.render_monomial(&mv),
                                ));
                            }
                        }
                    }
                }
            }
        }
        bad
    }

    /// Whether the map fixes every generator (and hence everything).
    pub fn is_identity(&self, alg: &TensorAlgebra<K>) -> bool {
        (0..alg.affine.dim()).all(|g| self.images[g] == alg.generator(g))
    }
}
