//! Finite-dimensional Lie algebra presentations with invariant bilinear
//! forms, their automorphisms, and eigendecompositions of finite-order
//! automorphisms.
//!
//! A presentation is dense structure-constant data over the scalar field:
//! `bracket(i, j)` is the coefficient vector of `[x_i, x_j]`. Validation
//! checks antisymmetry, the Jacobi identity, symmetry and invariance of the
//! form, and nondegeneracy — nothing is assumed from the input.
//!
//! Eigencomponents follow the convention `V^(g,r) = { v : g v = zeta^(-r) v }`
//! (note the inverse), so that component `r` pairs with fractional exponents
//! in `r/m + Z` downstream.

use crate::laurent::{parse_scalar, LaurentError};
use crate::linalg::Matrix;
use crate::scalar::{Field, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("index {0} out of range for dimension {1}")]
    BadIndex(usize, usize),
    #[error("scalar field has no root of unity of order {0}")]
    MissingRoot(u32),
    #[error("matrix is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism order exceeds bound {0}")]
    OrderTooLarge(u32),
    #[error("eigenspace dimensions sum to {got}, expected {want}")]
    NotDiagonalizable { got: usize, want: usize },
}

/// A Lie algebra given by structure constants and an invariant form.
#[derive(Clone)]
pub struct LiePresentation<K> {
    pub name: String,
    pub labels: Vec<String>,
    /// `brackets[i][j]` = coefficients of `[x_i, x_j]` over the basis.
    brackets: Vec<Vec<Vec<K>>>,
    pub form: Matrix<K>,
    pub abelian: bool,
    pub dual_coxeter: Option<Rat>,
}

impl<K: Field> std::fmt::Debug for LiePresentation<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LiePresentation({}, dim {}, labels {:?})",
            self.name,
            self.dim(),
            self.labels
        )
    }
}

impl<K: Field> LiePresentation<K> {
    pub fn new(
        name: &str,
        labels: Vec<String>,
        brackets: Vec<Vec<Vec<K>>>,
        form: Matrix<K>,
        abelian: bool,
        dual_coxeter: Option<Rat>,
    ) -> Self {
        let dim = labels.len();
        assert_eq!(brackets.len(), dim);
        assert!(brackets.iter().all(|row| row.len() == dim));
        assert!(brackets
            .iter()
            .all(|row| row.iter().all(|v| v.len() == dim)));
        assert_eq!(form.rows(), dim);
        assert_eq!(form.cols(), dim);
        LiePresentation {
            name: name.to_string(),
            labels,
            brackets,
            form,
            abelian,
            dual_coxeter,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coefficients of `[x_i, x_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[K] {
        &self.brackets[i][j]
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket_vec(&self, x: &[K], y: &[K]) -> Vec<K> {
        let dim = self.dim();
        let mut out = vec![K::zero(); dim];
        for i in 0..dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = x[i].clone() * y[j].clone();
                for (k, b) in self.brackets[i][j].iter().enumerate() {
                    if !b.is_zero() {
                        out[k] = out[k].clone() + c.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    /// `(x, y)` for coordinate vectors.
    pub fn form_vec(&self, x: &[K], y: &[K]) -> K {
        let mut out = K::zero();
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if !y[j].is_zero() && !self.form[(i, j)].is_zero() {
                    out = out + x[i].clone() * self.form[(i, j)].clone() * y[j].clone();
                }
            }
        }
        out
    }

    /// `(x_i, x_j)`.
    pub fn form_entry(&self, i: usize, j: usize) -> &K {
        &self.form[(i, j)]
    }

    /// Validate all the declared laws; returns the list of violations
    /// (empty = valid).
    pub fn validate(&self) -> Vec<String> {
        let dim = self.dim();
        let mut out = Vec::new();
        // Antisymmetry (includes [x,x] = 0 on the diagonal).
        'anti: for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let sum = self.brackets[i][j][k].clone() + self.brackets[j][i][k].clone();
                    if !sum.is_zero() {
                        out.push(format!(
                            "antisymmetry fails: [{}, {}] + [{}, {}] has {} component {}",
                            self.labels[i], self.labels[j], self.labels[j], self.labels[i],
                            self.labels[k], sum
                        ));
                        break 'anti;
                    }
                }
            }
        }
        // Jacobi.
        'jacobi: for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let a = self.bracket_vec(self.bracket(i, j), &unit(dim, k));
                    let b = self.bracket_vec(self.bracket(j, k), &unit(dim, i));
                    let c = self.bracket_vec(self.bracket(k, i), &unit(dim, j));
                    let total: Vec<K> = (0..dim)
                        .map(|t| a[t].clone() + b[t].clone() + c[t].clone())
                        .collect();
                    if total.iter().any(|v| !v.is_zero()) {
                        out.push(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                        break 'jacobi;
                    }
                }
            }
        }
        // Form symmetric.
        if self.form != self.form.transpose() {
            out.push("form is not symmetric".to_string());
        }
        // Form invariant: ([x_i, x_j], x_k) = (x_i, [x_j, x_k]).
        'inv: for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let lhs = self.form_vec(self.bracket(i, j), &unit(dim, k));
                    let rhs = self.form_vec(&unit(dim, i), self.bracket(j, k));
                    if lhs != rhs {
                        out.push(format!(
                            "form invariance fails on ({}, {}, {}): {} vs {}",
                            self.labels[i], self.labels[j], self.labels[k], lhs, rhs
                        ));
                        break 'inv;
                    }
                }
            }
        }
        // Nondegeneracy.
        if self.form.rank() < dim {
            out.push(format!(
                "form is degenerate (rank {} < {dim})",
                self.form.rank()
            ));
        }
        // Abelian flag consistency.
        let all_zero = (0..dim).all(|i| {
            (0..dim).all(|j| self.brackets[i][j].iter().all(|c| c.is_zero()))
        });
        if self.abelian && !all_zero {
            out.push("declared abelian but has a nonzero bracket".to_string());
        }
        if !self.abelian && all_zero {
            out.push("all brackets vanish but not declared abelian".to_string());
        }
        out
    }

    /// Re-express over the basis whose j-th vector is the j-th column of
    /// `p` (coordinates in the old basis). `p` must be invertible.
    pub fn change_basis(&self, p: &Matrix<K>, labels: Vec<String>) -> Option<Self> {
        let dim = self.dim();
        let pinv = p.inverse()?;
        let mut brackets = vec![vec![vec![K::zero(); dim]; dim]; dim];
        let col = |m: &Matrix<K>, j: usize| -> Vec<K> { (0..dim).map(|i| m[(i, j)].clone()).collect() };
        for u in 0..dim {
            for v in 0..dim {
                let old = self.bracket_vec(&col(p, u), &col(p, v));
                brackets[u][v] = pinv.apply(&old).expect("dimension preserved");
            }
        }
        let form = p.transpose().mul(&self.form).unwrap().mul(p).unwrap();
        Some(LiePresentation::new(
            &self.name,
            labels,
            brackets,
            form,
            self.abelian,
            self.dual_coxeter.clone(),
        ))
    }
}

fn unit<K: Field>(dim: usize, k: usize) -> Vec<K> {
    let mut v = vec![K::zero(); dim];
    v[k] = K::one();
    v
}

// ---- automorphisms ----

/// Check that `g` is an automorphism of the presented Lie algebra
/// preserving the form: invertible, `g[x_i, x_j] = [g x_i, g x_j]`, and
/// `(g x, g y) = (x, y)`.
pub fn is_lie_automorphism<K: Field>(
    lie: &LiePresentation<K>,
    g: &Matrix<K>,
) -> Result<(), LieError> {
    let dim = lie.dim();
    if g.rows() != dim || g.cols() != dim {
        return Err(LieError::NotAutomorphism(format!(
            "matrix is {}x{}, algebra has dimension {dim}",
            g.rows(),
            g.cols()
        )));
    }
    if g.inverse().is_none() {
        return Err(LieError::NotAutomorphism("matrix is singular".to_string()));
    }
    let col = |j: usize| -> Vec<K> { (0..dim).map(|i| g[(i, j)].clone()).collect() };
    for i in 0..dim {
        for j in 0..dim {
            let lhs = g.apply(lie.bracket(i, j)).unwrap();
            let rhs = lie.bracket_vec(&col(i), &col(j));
            if lhs != rhs {
                return Err(LieError::NotAutomorphism(format!(
                    "bracket not preserved on ({}, {})",
                    lie.labels[i], lie.labels[j]
                )));
            }
            if lie.form_vec(&col(i), &col(j)) != *lie.form_entry(i, j) {
                return Err(LieError::NotAutomorphism(format!(
                    "form not preserved on ({}, {})",
                    lie.labels[i], lie.labels[j]
                )));
            }
        }
    }
    Ok(())
}

/// Smallest `k >= 1` with `g^k = id`, or an error past the bound.
pub fn aut_order<K: Field>(g: &Matrix<K>, max: u32) -> Result<u32, LieError> {
    let n = g.rows();
    let id = Matrix::identity(n);
    let mut pow = g.clone();
    for k in 1..=max {
        if pow == id {
            return Ok(k);
        }
        pow = pow.mul(g).expect("square");
    }
    Err(LieError::OrderTooLarge(max))
}

/// The eigencomponent decomposition of a finite-order automorphism.
#[derive(Debug, Clone)]
pub struct EigenDecomp<K> {
    pub order: u32,
    /// `components[r]` is a basis of `V^(g,r) = ker(g - zeta_order^(-r))`,
    /// each vector in old-basis coordinates.
    pub components: Vec<Vec<Vec<K>>>,
}

impl<K: Field> EigenDecomp<K> {
    /// Total dimension (sanity: must equal the algebra dimension).
    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }

    /// Flatten into a change-of-basis matrix (columns = eigenvectors,
    /// ordered by residue) plus the residue class of each column.
    pub fn basis_matrix(&self, dim: usize) -> (Matrix<K>, Vec<u32>) {
        let mut cols: Vec<Vec<K>> = Vec::new();
        let mut classes = Vec::new();
        for (r, comp) in self.components.iter().enumerate() {
            for v in comp {
                cols.push(v.clone());
                classes.push(r as u32);
            }
        }
        let m = Matrix::from_fn(dim, cols.len(), |i, j| cols[j][i].clone());
        (m, classes)
    }
}

/// Decompose under `g` of exact order `m`: `V^(g,r) = ker(g - zeta_m^(-r))`
/// for `r = 0..m`. Errors if `g` does not have order `m`, the scalar field
/// lacks `zeta_m`, or the eigenspaces fail to span (impossible for a true
/// finite-order matrix over a field containing `zeta_m`, so reaching that
/// error means the input was not an order-`m` automorphism).
pub fn eigen_decompose<K: Field>(
    lie: &LiePresentation<K>,
    g: &Matrix<K>,
    m: u32,
) -> Result<EigenDecomp<K>, LieError> {
    let dim = lie.dim();
    let order = aut_order(g, m)?;
    if m % order != 0 {
        return Err(LieError::NotAutomorphism(format!(
            "order {order} does not divide requested period {m}"
        )));
    }
    let zeta = K::root_of_unity(m).ok_or(LieError::MissingRoot(m))?;
    let mut components = Vec::new();
    for r in 0..m {
        // eigenvalue zeta^(-r)
        let mut ev = K::one();
        for _ in 0..((m - r) % m) {
            ev = ev * zeta.clone();
        }
        let shifted = Matrix::from_fn(dim, dim, |i, j| {
            let d = if i == j { ev.clone() } else { K::zero() };
            g[(i, j)].clone() - d
        });
        components.push(shifted.nullspace());
    }
    let decomp = EigenDecomp {
        order: m,
        components,
    };
    if decomp.total_dim() != dim {
        return Err(LieError::NotDiagonalizable {
            got: decomp.total_dim(),
            want: dim,
        });
    }
    Ok(decomp)
}

// ---- built-in presentations ----

/// The abelian Lie algebra of the given rank with a chosen symmetric form.
pub fn abelian<K: Field>(rank: usize, form: Matrix<K>) -> LiePresentation<K> {
    let labels = (0..rank).map(|i| format!("a{i}")).collect::<Vec<_>>();
    let brackets = vec![vec![vec![K::zero(); rank]; rank]; rank];
    LiePresentation::new("abelian", labels, brackets, form, true, None)
}

/// Rank-n abelian with the identity form.
pub fn heisenberg_rank<K: Field>(rank: usize) -> LiePresentation<K> {
    abelian(rank, Matrix::identity(rank))
}

/// `sl_2` with basis `e, h, f`, brackets `[e,f]=h, [h,e]=2e, [h,f]=-2f`,
/// and the trace form of the defining representation
/// (`(e,f)=1, (h,h)=2`).
pub fn sl2<K: Field>() -> LiePresentation<K> {
    let labels = vec!["e".to_string(), "h".to_string(), "f".to_string()];
    let dim = 3;
    let mut brackets = vec![vec![vec![K::zero(); dim]; dim]; dim];
    let set = |b: &mut Vec<Vec<Vec<K>>>, i: usize, j: usize, k: usize, c: i64| {
        b[i][j][k] = K::from_int(c);
        b[j][i][k] = K::from_int(-c);
    };
    // indices: e=0, h=1, f=2
    set(&mut brackets, 1, 0, 0, 2); // [h,e] = 2e
    set(&mut brackets, 1, 2, 2, -2); // [h,f] = -2f
    set(&mut brackets, 0, 2, 1, 1); // [e,f] = h
    let mut form = Matrix::zero(dim, dim);
    form[(0, 2)] = K::one();
    form[(2, 0)] = K::one();
    form[(1, 1)] = K::from_int(2);
    LiePresentation::new(
        "sl2",
        labels,
        brackets,
        form,
        false,
        Some(crate::scalar::rat_int(2)),
    )
}

/// The Chevalley involution of [`sl2`]: `e -> -f, h -> -h, f -> -e`.
pub fn sl2_chevalley<K: Field>() -> Matrix<K> {
    let mut g = Matrix::zero(3, 3);
    g[(2, 0)] = -K::one(); // image of e is -f
    g[(1, 1)] = -K::one(); // image of h is -h
    g[(0, 2)] = -K::one(); // image of f is -e
    g
}

/// `sl_3` with basis `e12, e23, e13, f21, f32, f31, h1, h2`, structure
/// constants computed from 3x3 matrix units, and the defining trace form.
pub fn sl3<K: Field>() -> LiePresentation<K> {
    // Represent basis elements as 3x3 rational matrices and compute
    // everything from commutators.
    let unit_m = |i: usize, j: usize| -> [[i64; 3]; 3] {
        let mut m = [[0i64; 3]; 3];
        m[i][j] = 1;
        m
    };
    let sub = |a: [[i64; 3]; 3], b: [[i64; 3]; 3]| -> [[i64; 3]; 3] {
        let mut m = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i][j] - b[i][j];
            }
        }
        m
    };
    let basis: Vec<[[i64; 3]; 3]> = vec![
        unit_m(0, 1),                      // e12
        unit_m(1, 2),                      // e23
        unit_m(0, 2),                      // e13
        unit_m(1, 0),                      // f21
        unit_m(2, 1),                      // f32
        unit_m(2, 0),                      // f31
        sub(unit_m(0, 0), unit_m(1, 1)),   // h1
        sub(unit_m(1, 1), unit_m(2, 2)),   // h2
    ];
    let labels: Vec<String> = ["e12", "e23", "e13", "f21", "f32", "f31", "h1", "h2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mat_mul = |a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]| -> [[i64; 3]; 3] {
        let mut m = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        m
    };
    // Coordinates of a traceless matrix over the basis above.
    let coords = |x: &[[i64; 3]; 3]| -> Vec<i64> {
        assert_eq!(x[0][0] + x[1][1] + x[2][2], 0, "not traceless");
        vec![
            x[0][1],
            x[1][2],
            x[0][2],
            x[1][0],
            x[2][1],
            x[2][0],
            x[0][0],
            x[0][0] + x[1][1],
        ]
    };
    let dim = 8;
    let mut brackets = vec![vec![vec![K::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let comm = sub(
                mat_mul(&basis[i], &basis[j]),
                mat_mul(&basis[j], &basis[i]),
            );
            for (k, c) in coords(&comm).into_iter().enumerate() {
                brackets[i][j][k] = K::from_int(c);
            }
        }
    }
    let trace = |a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]| -> i64 {
        let m = mat_mul(a, b);
        m[0][0] + m[1][1] + m[2][2]
    };
    let form = Matrix::from_fn(dim, dim, |i, j| K::from_int(trace(&basis[i], &basis[j])));
    LiePresentation::new(
        "sl3",
        labels,
        brackets,
        form,
        false,
        Some(crate::scalar::rat_int(3)),
    )
}

// ---- file formats ----

fn scalar_on_line<K: Field>(tok: &str, line: usize) -> Result<K, LieError> {
    parse_scalar::<K>(tok).map_err(|e: LaurentError| LieError::Parse {
        line,
        msg: format!("bad scalar {tok:?}: {e}"),
    })
}

/// Parse the line-oriented presentation format:
///
/// ```text
/// # comment
/// name sl2
/// labels e h f
/// abelian false
/// dualcoxeter 2
/// bracket 0 1 0 -2     # [x_0, x_1] += -2 * x_0
/// form 0 2 1           # (x_0, x_2) = 1
/// ```
///
/// Both bracket orientations must be listed; nothing is symmetrized for
/// you (validation then has real content).
pub fn parse_lie<K: Field>(text: &str) -> Result<LiePresentation<K>, LieError> {
    let mut name = String::from("unnamed");
    let mut labels: Option<Vec<String>> = None;
    let mut abelian = false;
    let mut dual_coxeter = None;
    let mut bracket_lines: Vec<(usize, usize, usize, usize, K)> = Vec::new();
    let mut form_lines: Vec<(usize, usize, usize, K)> = Vec::new();

    for (lno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap();
        let rest: Vec<&str> = it.collect();
        let lno = lno + 1;
        match key {
            "name" => {
                name = rest.join(" ");
            }
            "labels" => {
                labels = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "abelian" => {
                abelian = match rest.as_slice() {
                    ["true"] => true,
                    ["false"] => false,
                    _ => {
                        return Err(LieError::Parse {
                            line: lno,
                            msg: "abelian takes true or false".to_string(),
                        })
                    }
                };
            }
            "dualcoxeter" => {
                let v: K = scalar_on_line(&rest.join(" "), lno)?;
                let q = v.as_rat().ok_or(LieError::Parse {
                    line: lno,
                    msg: "dualcoxeter must be rational".to_string(),
                })?;
                dual_coxeter = Some(q);
            }
            "bracket" => {
                if rest.len() < 4 {
                    return Err(LieError::Parse {
                        line: lno,
                        msg: "bracket needs: i j k value".to_string(),
                    });
                }
                let idx: Vec<usize> = rest[..3]
                    .iter()
                    .map(|s| {
                        s.parse::<usize>().map_err(|_| LieError::Parse {
                            line: lno,
                            msg: format!("bad index {s:?}"),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let v: K = scalar_on_line(&rest[3..].join(" "), lno)?;
                bracket_lines.push((lno, idx[0], idx[1], idx[2], v));
            }
            "form" => {
                if rest.len() < 3 {
                    return Err(LieError::Parse {
                        line: lno,
                        msg: "form needs: i j value".to_string(),
                    });
                }
                let i = rest[0].parse::<usize>().map_err(|_| LieError::Parse {
                    line: lno,
                    msg: format!("bad index {:?}", rest[0]),
                })?;
                let j = rest[1].parse::<usize>().map_err(|_| LieError::Parse {
                    line: lno,
                    msg: format!("bad index {:?}", rest[1]),
                })?;
                let v: K = scalar_on_line(&rest[2..].join(" "), lno)?;
                form_lines.push((lno, i, j, v));
            }
            other => {
                return Err(LieError::Parse {
                    line: lno,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }

    let labels = labels.ok_or(LieError::Parse {
        line: 0,
        msg: "missing labels line".to_string(),
    })?;
    let dim = labels.len();
    let mut brackets = vec![vec![vec![K::zero(); dim]; dim]; dim];
    for (lno, i, j, k, v) in bracket_lines {
        if i >= dim || j >= dim || k >= dim {
            return Err(LieError::Parse {
                line: lno,
                msg: format!("index out of range (dimension {dim})"),
            });
        }
        brackets[i][j][k] = brackets[i][j][k].clone() + v;
    }
    let mut form = Matrix::zero(dim, dim);
    for (lno, i, j, v) in form_lines {
        if i >= dim || j >= dim {
            return Err(LieError::Parse {
                line: lno,
                msg: format!("index out of range (dimension {dim})"),
            });
        }
        form[(i, j)] = v;
    }
    Ok(LiePresentation::new(
        &name,
        labels,
        brackets,
        form,
        abelian,
        dual_coxeter,
    ))
}

/// Parse a matrix file: one `row ...` line per matrix row, entries are
/// scalar expressions. Columns are images of basis vectors.
pub fn parse_aut<K: Field>(text: &str, dim: usize) -> Result<Matrix<K>, LieError> {
    let mut rows: Vec<Vec<K>> = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap();
        if key != "row" {
            return Err(LieError::Parse {
                line: lno + 1,
                msg: format!("expected row, got {key:?}"),
            });
        }
        let entries: Vec<K> = it
            .map(|tok| scalar_on_line(tok, lno + 1))
            .collect::<Result<_, _>>()?;
        if entries.len() != dim {
            return Err(LieError::Parse {
                line: lno + 1,
                msg: format!("expected {dim} entries, got {}", entries.len()),
            });
        }
        rows.push(entries);
    }
    if rows.len() != dim {
        return Err(LieError::Parse {
            line: 0,
            msg: format!("expected {dim} rows, got {}", rows.len()),
        });
    }
    Matrix::from_rows(rows).map_err(|e| LieError::Parse {
        line: 0,
        msg: format!("{e}"),
    })
}
