//! Coding of filtered vertex-algebra automorphisms of `V ⊗ S_m` by their
//! degree-one data: a matrix `phi` acting on the generator span plus a
//! vacuum row `vac`, meaning the generator `a_j` maps to
//! `sum_i phi[i][j] (a_i ⊗ 1) + vac[j] (1 ⊗ 1)`.
//!
//! In functional normalization the pair is `(f, phi)` with
//! `f = vac ∘ phi^{-1}`; we store `vac = f ∘ phi` instead so that nothing
//! ever inverts a matrix over the Laurent ring: the composition law
//! `(g, psi)(f, phi) = (g + f psi^{-1}, psi phi)` becomes
//!
//! ```text
//! (vac2, phi2) ∘ (vac1, phi1) = (vac2 · phi1 + vac1, phi2 · phi1).
//! ```
//!
//! The obstruction to extending `(vac, phi)` to the whole algebra is the
//! bilinear map `alpha(x, y) 1 = j(x)_0 j(y) − j([x,y])` (computed here by
//! actual tensor products; in closed form `alpha(a ⊗ r, b ⊗ s) =
//! level (a,b) D(r) s`). A pair extends iff `phi` preserves bracket and
//! form over the ring and the compatibility identity
//!
//! ```text
//! alpha(phi x, phi y) − alpha(x, y) = vac([x, y])
//! ```
//!
//! holds on generator pairs (the functional-normalization identity
//! `alpha(x,y) − alpha(phi^{-1}x, phi^{-1}y) = f[xy]` after substituting
//! `x ↦ phi x`, `y ↦ phi y`). Because `alpha` vanishes on constant
//! vectors, constant matrices need `vac ≡ 0` on brackets, while matrices
//! with genuinely ring-valued entries are obstructed unless the identity
//! can be solved — for a ring with trivial derivation kernel this is what
//! confines orthogonal parts to constant matrices.

use crate::laurent::FracLaurent;
use crate::lie::LiePresentation;
use crate::linalg::{solve_linear, LinearSolution, Matrix};
use crate::scalar::{Field, Rat};
use crate::tensor::{F1Map, TensorAlgebra, TensorElement};
use crate::affine::PbwMonomial;
use crate::vertex::VertexAlgebra;

/// Degree-one coding of a filtered automorphism of `V ⊗ S_m`.
#[derive(Clone)]
pub struct AutPair<K: Field> {
    pub m: u32,
    /// `phi[i][j]` = coefficient of generator `i` in the image of `j`.
    pub phi: Vec<Vec<FracLaurent<K>>>,
    /// Vacuum coefficient of the image of each generator.
    pub vac: Vec<FracLaurent<K>>,
}

impl<K: Field> PartialEq for AutPair<K> {
    fn eq(&self, other: &Self) -> bool {
        self.phi == other.phi && self.vac == other.vac
    }
}

impl<K: Field> std::fmt::Debug for AutPair<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "AutPair over S_{} (dim {})", self.m, self.vac.len())?;
        for (i, row) in self.phi.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            writeln!(f, "  phi[{i}] = [{}]", cells.join(", "))?;
        }
        let cells: Vec<String> = self.vac.iter().map(|x| format!("{x}")).collect();
        write!(f, "  vac = [{}]", cells.join(", "))
    }
}

impl<K: Field> AutPair<K> {
    pub fn identity(dim: usize, m: u32) -> Self {
        AutPair {
            m,
            phi: smat_id(dim, m),
            vac: vec![FracLaurent::zero(m); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.vac.len()
    }

    /// A pair with no translation part.
    pub fn from_matrix(phi: Vec<Vec<FracLaurent<K>>>, m: u32) -> Self {
        let dim = phi.len();
        AutPair {
            m,
            phi,
            vac: vec![FracLaurent::zero(m); dim],
        }
    }

    /// A constant matrix (over the scalar field) with no translation part.
    pub fn from_constant_matrix(g: &Matrix<K>, m: u32) -> Self {
        assert_eq!(g.rows(), g.cols());
        let dim = g.rows();
        let phi = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| FracLaurent::one(m).scale(&g[(i, j)]))
                    .collect()
            })
            .collect();
        Self::from_matrix(phi, m)
    }

    /// Read the degree-one data off a generator-image map. Errors when an
    /// image leaves degree one (the map does not restrict to a coding).
    pub fn encode(alg: &TensorAlgebra<K>, map: &F1Map<K>) -> Result<Self, String> {
        let dim = alg.affine.dim();
        let m = alg.fractional_denom();
        let mut phi = vec![vec![FracLaurent::zero(m); dim]; dim];
        let mut vac = vec![FracLaurent::zero(m); dim];
        for (j, img) in map.images.iter().enumerate() {
            for (mono, s) in img.terms() {
                if mono.is_vacuum() {
                    vac[j] = s.clone();
                } else if mono.0.len() == 1 && mono.0[0].0 == -1 {
                    phi[mono.0[0].1][j] = s.clone();
                } else {
                    return Err(format!(
                        "image of generator {j} is not of degree one (monomial {mono:?})"
                    ));
                }
            }
        }
        Ok(AutPair { m, phi, vac })
    }

    /// The generator-image map this pair codes.
    pub fn to_f1map(&self, alg: &TensorAlgebra<K>) -> F1Map<K> {
        F1Map::from_phi_vac(alg, &self.phi, &self.vac)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        let m = num_integer::lcm(self.m, other.m);
        let phi = smat_mul(&self.phi, &other.phi, m);
        let dim = self.dim();
        let mut vac = Vec::with_capacity(dim);
        for j in 0..dim {
            // vac2 · phi1 + vac1, column j.
            let mut s = other.vac[j].with_denom(m);
            for i in 0..dim {
                s = s.add(&self.vac[i].mul(&other.phi[i][j]).with_denom(m));
            }
            vac.push(s);
        }
        AutPair { m, phi, vac }
    }

    pub fn is_identity(&self) -> bool {
        let dim = self.dim();
        for j in 0..dim {
            if !self.vac[j].is_zero() {
                return false;
            }
            for i in 0..dim {
                let expect_one = i == j;
                let cell = &self.phi[i][j];
                if expect_one {
                    if *cell != FracLaurent::one(cell.denom()) {
                        return false;
                    }
                } else if !cell.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Violations of the degree-one compatibility identity
    /// `alpha(phi x, phi y) − alpha(x, y) = vac([x, y])` on generator
    /// pairs, together with bracket/form preservation of `phi` over the
    /// ring. Empty output = the pair codes an automorphism of the
    /// degree-one structure.
    pub fn extension_violations(&self, alg: &TensorAlgebra<K>) -> Vec<String> {
        let mut bad = lie_endo_violations(&alg.affine.lie, &self.phi, self.m);
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let ea = unit_column::<K>(dim, a, self.m);
                let eb = unit_column::<K>(dim, b, self.m);
                let pa = apply_smat(&self.phi, &ea, self.m);
                let pb = apply_smat(&self.phi, &eb, self.m);
                let lhs = alpha(alg, &pa, &pb).sub(&alpha(alg, &ea, &eb));
                let mut rhs = FracLaurent::zero(self.m);
                for (c, coeff) in alg.affine.lie.bracket(a, b).iter().enumerate() {
                    if !coeff.is_zero() {
                        rhs = rhs.add(&self.vac[c].scale(coeff));
                    }
                }
                if lhs != rhs {
                    bad.push(format!(
                        "translation identity fails on generators ({a}, {b}): \
                         alpha difference {lhs} != vac on bracket {rhs}"
                    ));
                }
            }
        }
        bad
    }
}

/// Identity matrix over the ring.
pub fn smat_id<K: Field>(dim: usize, m: u32) -> Vec<Vec<FracLaurent<K>>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        FracLaurent::one(m)
                    } else {
                        FracLaurent::zero(m)
                    }
                })
                .collect()
        })
        .collect()
}

/// Matrix product over the ring, retagged to `S_m`.
pub fn smat_mul<K: Field>(
    a: &[Vec<FracLaurent<K>>],
    b: &[Vec<FracLaurent<K>>],
    m: u32,
) -> Vec<Vec<FracLaurent<K>>> {
    let n = a.len();
    let p = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let mut s = FracLaurent::zero(m);
                    for (k, brow) in b.iter().enumerate().take(inner) {
                        s = s.add(&a[i][k].mul(&brow[j]).with_denom(m));
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Matrix–vector product over the ring.
pub fn apply_smat<K: Field>(
    a: &[Vec<FracLaurent<K>>],
    x: &[FracLaurent<K>],
    m: u32,
) -> Vec<FracLaurent<K>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let mut s = FracLaurent::zero(m);
            for (k, xk) in x.iter().enumerate() {
                s = s.add(&a[i][k].mul(xk).with_denom(m));
            }
            s
        })
        .collect()
}

fn unit_column<K: Field>(dim: usize, idx: usize, m: u32) -> Vec<FracLaurent<K>> {
    (0..dim)
        .map(|i| {
            if i == idx {
                FracLaurent::one(m)
            } else {
                FracLaurent::zero(m)
            }
        })
        .collect()
}

/// Bracket and form preservation of a ring-valued matrix on the Lie data:
/// `[phi a, phi b] = phi [a, b]` and `(phi a, phi b) = (a, b)` with all
/// products taken in the ring. Empty output = preserved.
pub fn lie_endo_violations<K: Field>(
    lie: &LiePresentation<K>,
    phi: &[Vec<FracLaurent<K>>],
    m: u32,
) -> Vec<String> {
    let dim = lie.dim();
    let mut bad = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            // [phi e_a, phi e_b]_c = sum_{ i j } phi[i][a] phi[j][b] B^c_{i j}.
            for c in 0..dim {
                let mut lhs = FracLaurent::zero(m);
                for i in 0..dim {
                    if phi[i][a].is_zero() {
                        continue;
                    }
                    for j in 0..dim {
                        let bc = &lie.bracket(i, j)[c];
                        if !bc.is_zero() && !phi[j][b].is_zero() {
                            lhs = lhs.add(&phi[i][a].mul(&phi[j][b]).scale(bc));
                        }
                    }
                }
                let mut rhs = FracLaurent::zero(m);
                for (d, coeff) in lie.bracket(a, b).iter().enumerate() {
                    if !coeff.is_zero() {
                        rhs = rhs.add(&phi[c][d].scale(coeff));
                    }
                }
                if lhs != rhs {
                    bad.push(format!("bracket not preserved at ({a}, {b}) -> {c}"));
                }
            }
            // (phi e_a, phi e_b) = (e_a, e_b).
            let mut lhs = FracLaurent::zero(m);
            for i in 0..dim {
                if phi[i][a].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let fe = lie.form_entry(i, j);
                    if !fe.is_zero() && !phi[j][b].is_zero() {
                        lhs = lhs.add(&phi[i][a].mul(&phi[j][b]).scale(fe));
                    }
                }
            }
            let rhs = FracLaurent::one(m).scale(lie.form_entry(a, b));
            if lhs != rhs {
                bad.push(format!("form not preserved at ({a}, {b})"));
            }
        }
    }
    bad
}

/// The obstruction form on degree one, by actual products:
/// `alpha(x, y) 1 = j(x)_0 j(y) − j([x, y])` for coordinate vectors `x, y`
/// over the ring. The non-vacuum part of the 0-product always equals
/// `j([x, y])`; the vacuum coefficient is `alpha`.
pub fn alpha<K: Field>(
    alg: &TensorAlgebra<K>,
    x: &[FracLaurent<K>],
    y: &[FracLaurent<K>],
) -> FracLaurent<K> {
    let m = alg.fractional_denom();
    let dim = alg.affine.dim();
    let jx = embed_column(alg, x);
    let jy = embed_column(alg, y);
    let p = alg.nproduct(&jx, 0, &jy);
    // j([x, y]): S-bilinear bracket.
    let mut z = vec![FracLaurent::zero(m); dim];
    for i in 0..dim {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..dim {
            if y[j].is_zero() {
                continue;
            }
            let xy = x[i].mul(&y[j]);
            for (c, coeff) in alg.affine.lie.bracket(i, j).iter().enumerate() {
                if !coeff.is_zero() {
                    z[c] = z[c].add(&xy.scale(coeff));
                }
            }
        }
    }
    let jz = embed_column(alg, &z);
    let diff = p.sub(&jz);
    // The difference must be a multiple of the vacuum.
    let mut out = FracLaurent::zero(m);
    for (mono, s) in diff.terms() {
        assert!(
            mono.is_vacuum(),
            "0-product of degree-one elements left a non-vacuum remainder"
        );
        out = out.add(s);
    }
    out
}

/// Embed a ring-coordinate vector on the generators as a degree-one
/// element with no vacuum part.
pub fn embed_column<K: Field>(
    alg: &TensorAlgebra<K>,
    x: &[FracLaurent<K>],
) -> TensorElement<K> {
    let m = alg.fractional_denom();
    let mut out = TensorElement::zero(m);
    for (i, s) in x.iter().enumerate() {
        if !s.is_zero() {
            out.add_term(PbwMonomial::single(-1, i), s.clone());
        }
    }
    out
}

/// Solve the translation identity for `vac` given the matrix part:
/// find a row with `vac([a, b]) = alpha(phi a, phi b) − alpha(a, b)` on
/// all generator pairs. Returns the particular solution with free
/// coordinates set to zero, or an error when the identity is unsolvable
/// (the matrix admits no translation part at all). Uniqueness holds
/// exactly when brackets span the Lie algebra (e.g. simple algebras);
/// [`translation_is_unique`] reports that.
pub fn solve_translation<K: Field>(
    alg: &TensorAlgebra<K>,
    phi: &[Vec<FracLaurent<K>>],
) -> Result<Vec<FracLaurent<K>>, String> {
    let dim = alg.affine.dim();
    let m = alg.fractional_denom();
    // Rows: ordered generator pairs; unknowns: vac coordinates.
    let mut rows: Vec<Vec<K>> = Vec::new();
    let mut rhs: Vec<FracLaurent<K>> = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            rows.push(alg.affine.lie.bracket(a, b).to_vec());
            let ea = unit_column::<K>(dim, a, m);
            let eb = unit_column::<K>(dim, b, m);
            let pa = apply_smat(phi, &ea, m);
            let pb = apply_smat(phi, &eb, m);
            rhs.push(alpha(alg, &pa, &pb).sub(&alpha(alg, &ea, &eb)));
        }
    }
    let a_mat = Matrix::from_rows(rows).expect("bracket rows have uniform length");
    // Decompose the right-hand side by exponent and solve per exponent.
    let mut exponents: Vec<Rat> = Vec::new();
    for s in &rhs {
        for (q, _) in s.terms() {
            if !exponents.contains(q) {
                exponents.push(q.clone());
            }
        }
    }
    let mut vac = vec![FracLaurent::zero(m); dim];
    for e in exponents {
        let b: Vec<K> = rhs.iter().map(|s| s.coeff(&e)).collect();
        match solve_linear(&a_mat, &b).expect("system dimensions agree by construction") {
            LinearSolution::Inconsistent => {
                return Err(format!(
                    "no translation part exists: the identity is unsolvable at exponent {e}"
                ));
            }
            LinearSolution::Solved { particular, .. } => {
                for (j, w) in particular.into_iter().enumerate() {
                    if !w.is_zero() {
                        vac[j] = vac[j].add(&FracLaurent::monomial(m, e.clone(), w));
                    }
                }
            }
        }
    }
    Ok(vac)
}

/// Whether the translation part is determined by the matrix part: true
/// exactly when the span of all brackets is the whole algebra.
pub fn translation_is_unique<K: Field>(lie: &LiePresentation<K>) -> bool {
    let dim = lie.dim();
    let rows: Vec<Vec<K>> = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| lie.bracket(a, b).to_vec()))
        .collect();
    Matrix::from_rows(rows)
        .expect("bracket rows have uniform length")
        .rank()
        == dim
}
