//! Named verification suites: bounded, deterministic sweeps of the
//! library's identities, shared by the command-line driver and the
//! integration tests.
//!
//! Each runner returns one structured record per check (aggregating a box
//! of integer mode parameters into a single record per element tuple);
//! failing records carry both sides of the first mismatch. Iteration is
//! over canonical bases in canonical order, so reports are deterministic
//! given the configuration. Runners distinguish input errors (bad
//! presentations) from resource exhaustion (a solver gave up within its
//! budget); the latter carries the partial report produced so far.

use crate::affine::{build_affine, State};
use crate::autpair::AutPair;
use crate::descent::{cocycle_check, descent_fixed_points, gamma_hat, SpanTester};
use crate::jets::{adjunction_extend, prolong, JetError, JetPresentation};
use crate::laurent::{FracLaurent, LaurentRing};
use crate::lie::LiePresentation;
use crate::linalg::Matrix;
use crate::loopalg::loop_build;
use crate::poly::{Limits, Membership, MultiPoly};
use crate::report::{CheckRecord, SuiteReport};
use crate::scalar::{rat_int, Field, Rat};
use crate::twisted::{twisted_fock_build, PullbackMap, PulledModule, TwistedState};
use crate::vertex::{borcherds_check, hs_derivation_check, VertexAlgebra};

#[derive(Debug)]
pub enum SuiteError {
    /// The inputs do not define the requested structure.
    Input(String),
    /// A bounded solver gave up; the partial report is preserved.
    Resource {
        message: String,
        partial: SuiteReport,
    },
}

impl std::fmt::Display for SuiteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteError::Input(m) => write!(f, "input error: {m}"),
            SuiteError::Resource { message, .. } => {
                write!(f, "resource limit: {message}")
            }
        }
    }
}

fn agg(
    suite: &str,
    algebra: &str,
    check: &str,
    inputs: String,
    failures: Vec<String>,
) -> CheckRecord {
    if failures.is_empty() {
        CheckRecord::pass(suite, algebra, check, inputs)
    } else {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join(" | ");
        let more = failures.len().saturating_sub(3);
        let detail = if more > 0 {
            format!("{shown} | … and {more} more")
        } else {
            shown
        };
        CheckRecord::fail(suite, algebra, check, inputs, detail)
    }
}

/// Vertex-ring axioms for the fractional Laurent ring `S_m`: creation,
/// vacuum identity, commutativity, the Borcherds identity on monomial
/// triples with exponents in `[-expw, expw]` and modes in the given box,
/// and the canonical derivation laws up to order `hs_max`.
pub fn axioms_suite<K: Field>(
    m: u32,
    expw: i64,
    nlo: i64,
    nhi: i64,
    hs_max: u64,
) -> SuiteReport {
    let alg = LaurentRing::<K>::new(m);
    let name = alg.name();
    let window = FracLaurent::<K>::monomial_window(m, expw);
    let mut rep = SuiteReport::new();

    // Creation: x_(-1) 1 = x and x_(n) 1 = 0 for n >= 0.
    for x in &window {
        let mut bad = Vec::new();
        let created = alg.nproduct(x, -1, &alg.vacuum());
        if created != *x {
            bad.push(format!("x_(-1) 1 = {created} != {x}"));
        }
        for n in 0..=nhi.max(0) {
            let v = alg.nproduct(x, n, &alg.vacuum());
            if !v.is_zero() {
                bad.push(format!("x_({n}) 1 = {v} != 0"));
            }
        }
        rep.push(agg("axioms", &name, "creation", format!("x = {x}"), bad));
    }

    // Vacuum identity: 1_(-1) x = x, and 1_(n) x = 0 for n != -1.
    for x in &window {
        let mut bad = Vec::new();
        let v = alg.nproduct(&alg.vacuum(), -1, x);
        if v != *x {
            bad.push(format!("1_(-1) x = {v} != {x}"));
        }
        for n in nlo..=nhi {
            if n == -1 {
                continue;
            }
            let v = alg.nproduct(&alg.vacuum(), n, x);
            if !v.is_zero() {
                bad.push(format!("1_({n}) x = {v} != 0"));
            }
        }
        rep.push(agg("axioms", &name, "vacuum identity", format!("x = {x}"), bad));
    }

    // Commutativity: the (-1)-product is the ring product (symmetric),
    // and all nonnegative products vanish.
    for x in &window {
        for y in &window {
            let mut bad = Vec::new();
            let xy = alg.nproduct(x, -1, y);
            let yx = alg.nproduct(y, -1, x);
            if xy != yx {
                bad.push(format!("x_(-1) y = {xy} != {yx} = y_(-1) x"));
            }
            for n in 0..=nhi.max(0) {
                let v = alg.nproduct(x, n, y);
                if !v.is_zero() {
                    bad.push(format!("x_({n}) y = {v} != 0"));
                }
            }
            rep.push(agg(
                "axioms",
                &name,
                "commutativity",
                format!("x = {x}, y = {y}"),
                bad,
            ));
        }
    }

    // Borcherds identity over the mode box.
    for x in &window {
        for y in &window {
            for z in &window {
                let mut bad = Vec::new();
                'modes: for mm in nlo..=nhi {
                    for nn in nlo..=nhi {
                        for pp in nlo..=nhi {
                            if let Err(e) = borcherds_check(&alg, x, y, z, mm, nn, pp) {
                                bad.push(format!("{e}"));
                                break 'modes;
                            }
                        }
                    }
                }
                rep.push(agg(
                    "axioms",
                    &name,
                    "borcherds box",
                    format!("x = {x}, y = {y}, z = {z}, modes in [{nlo},{nhi}]^3"),
                    bad,
                ));
            }
        }
    }

    // Canonical derivation: product rule and iterativity.
    for x in &window {
        for y in &window {
            let mut bad = Vec::new();
            for n in nlo..=nhi {
                if let Err(e) = hs_derivation_check(&alg, x, n, y, hs_max) {
                    bad.push(format!("n = {n}: {e}"));
                    break;
                }
            }
            rep.push(agg(
                "axioms",
                &name,
                "derivation laws",
                format!("u = {x}, v = {y}, orders <= {hs_max}"),
                bad,
            ));
        }
    }

    rep
}

/// Universal affine algebra identities: graded dimensions (informational),
/// bracket and form reproduction on generators, the Borcherds identity on
/// PBW triples of bounded **total** degree, derivation laws, and the
/// weight filtration law.
pub fn affine_suite<K: Field>(
    lie: &LiePresentation<K>,
    level: K,
    degree: i64,
    nlo: i64,
    nhi: i64,
) -> Result<SuiteReport, SuiteError> {
    let alg = build_affine(lie.clone(), level.clone())
        .map_err(|e| SuiteError::Input(format!("{e}")))?;
    let name = alg.name();
    let mut rep = SuiteReport::new();
    let dim = alg.dim();

    // Graded dimensions (recorded so reports pin them).
    let layers: Vec<Vec<State<K>>> = (0..=degree)
        .map(|d| {
            alg.basis_of_degree(d)
                .into_iter()
                .map(|m| State::monomial(m, K::one()))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = layers.iter().map(|l| l.len()).collect();
    rep.push(CheckRecord::pass(
        "affine",
        &name,
        "graded dimensions",
        format!("degrees 0..={degree}: {dims:?}"),
    ));

    // 0-th product on generators reproduces the bracket.
    for a in 0..dim {
        for b in 0..dim {
            let mut bad = Vec::new();
            let prod = alg.nproduct(&alg.generator(a), 0, &alg.generator(b));
            let mut want = State::zero();
            let bracket = lie.bracket(a, b);
            for (k, c) in bracket.iter().enumerate() {
                if !c.is_zero() {
                    want = want.add(&alg.generator(k).scale(c));
                }
            }
            if prod != want {
                bad.push(format!(
                    "a_(0) b = {} != {}",
                    alg.render(&prod),
                    alg.render(&want)
                ));
            }
            rep.push(agg(
                "affine",
                &name,
                "bracket reproduction",
                format!("a = {}, b = {}", lie.labels[a], lie.labels[b]),
                bad,
            ));
        }
    }

    // 1-st product on generators is level * form * vacuum.
    for a in 0..dim {
        for b in 0..dim {
            let mut bad = Vec::new();
            let prod = alg.nproduct(&alg.generator(a), 1, &alg.generator(b));
            let want =
                State::vacuum().scale(&(level.clone() * lie.form_entry(a, b).clone()));
            if prod != want {
                bad.push(format!(
                    "a_(1) b = {} != {}",
                    alg.render(&prod),
                    alg.render(&want)
                ));
            }
            rep.push(agg(
                "affine",
                &name,
                "form reproduction",
                format!("a = {}, b = {}", lie.labels[a], lie.labels[b]),
                bad,
            ));
        }
    }

    // Borcherds identity on PBW triples of bounded total degree.
    for du in 0..=degree {
        for dv in 0..=(degree - du) {
            for dw in 0..=(degree - du - dv) {
                for u in &layers[du as usize] {
                    for v in &layers[dv as usize] {
                        for w in &layers[dw as usize] {
                            let mut bad = Vec::new();
                            'modes: for mm in nlo..=nhi {
                                for nn in nlo..=nhi {
                                    for pp in nlo..=nhi {
                                        if let Err(e) =
                                            borcherds_check(&alg, u, v, w, mm, nn, pp)
                                        {
                                            bad.push(format!("{e}"));
                                            break 'modes;
                                        }
                                    }
                                }
                            }
                            rep.push(agg(
                                "affine",
                                &name,
                                "borcherds box",
                                format!(
                                    "u = {}, v = {}, w = {}, modes in [{nlo},{nhi}]^3",
                                    alg.render(u),
                                    alg.render(v),
                                    alg.render(w)
                                ),
                                bad,
                            ));
                        }
                    }
                }
            }
        }
    }

    // Derivation laws on low-degree pairs.
    let low: Vec<&State<K>> = layers
        .iter()
        .take(3)
        .flat_map(|l| l.iter())
        .collect();
    for u in &low {
        for v in &low {
            let mut bad = Vec::new();
            for n in nlo..=nhi {
                if let Err(e) = hs_derivation_check(&alg, u, n, v, 2) {
                    bad.push(format!("n = {n}: {e}"));
                    break;
                }
            }
            rep.push(agg(
                "affine",
                &name,
                "derivation laws",
                format!("u = {}, v = {}", alg.render(u), alg.render(v)),
                bad,
            ));
        }
    }

    // Weight filtration law on the bounded layers.
    let filt = crate::vertex::filtration_check(
        &alg,
        degree,
        |d| {
            alg.basis_of_degree(d)
                .into_iter()
                .map(|m| State::monomial(m, K::one()))
                .collect()
        },
        |s| s.degree(),
        nlo,
    );
    rep.push(CheckRecord::from_result(
        "affine",
        &name,
        "filtration law",
        format!("degrees <= {degree}, modes from {nlo}"),
        filt,
    ));

    Ok(rep)
}

/// Twisted loop algebra coherence: every bounded-slice product agrees with
/// the trivialization-conjugated tensor product, and lands back inside the
/// eigenspace/exponent-compatible subspace.
pub fn loop_suite<K: Field>(
    lie: &LiePresentation<K>,
    g: &Matrix<K>,
    m: u32,
    level: K,
    degree: i64,
    expw: i64,
    nlo: i64,
    nhi: i64,
) -> Result<SuiteReport, SuiteError> {
    let lp = loop_build(lie, level, g, m).map_err(|e| SuiteError::Input(format!("{e}")))?;
    let name = format!("L({}, g) order {}", lie.name, m);
    let mut rep = SuiteReport::new();
    let qlo = rat_int(-expw);
    let qhi = rat_int(expw);
    let slice = lp.slice_basis(degree, &qlo, &qhi);
    rep.push(CheckRecord::pass(
        "loop",
        &name,
        "slice dimensions",
        format!(
            "degree <= {degree}, exponents in [{}, {}]: {} elements",
            -expw,
            expw,
            slice.len()
        ),
    ));

    let trivs: Vec<_> = slice.iter().map(|x| lp.to_tensor(x)).collect();
    for (i, x) in slice.iter().enumerate() {
        for (j, y) in slice.iter().enumerate() {
            let mut bad = Vec::new();
            for l in nlo..=nhi {
                let prod = lp.loop_nproduct(x, l, y);
                let tprod = lp.tensor.nproduct(&trivs[i], l, &trivs[j]);
                if lp.to_tensor(&prod) != tprod {
                    bad.push(format!(
                        "l = {l}: loop product {} trivializes differently from \
                         the tensor product {}",
                        lp.render(&prod),
                        lp.tensor.render(&tprod)
                    ));
                    break;
                }
                // Eigenspace/exponent compatibility of the tensor product.
                if let Err(e) = lp.from_tensor(&tprod) {
                    bad.push(format!("l = {l}: product leaves the loop subspace: {e}"));
                    break;
                }
            }
            rep.push(agg(
                "loop",
                &name,
                "trivialization coherence",
                format!(
                    "x = {}, y = {}, l in [{nlo},{nhi}]",
                    lp.render(x),
                    lp.render(y)
                ),
                bad,
            ));
        }
    }
    Ok(rep)
}

/// Galois descent against the loop algebra: the constant cocycle `g ⊗ 1`
/// (written in the eigenbasis) has fixed-point slices that match the loop
/// algebra slice for slice, with mutual span inclusion and products
/// transported by the trivialization.
pub fn descent_suite<K: Field>(
    lie: &LiePresentation<K>,
    g: &Matrix<K>,
    m: u32,
    level: K,
    degree: i64,
    expw: i64,
    nlo: i64,
    nhi: i64,
) -> Result<SuiteReport, SuiteError> {
    let lp = loop_build(lie, level, g, m).map_err(|e| SuiteError::Input(format!("{e}")))?;
    let name = format!("descent({}, g) order {}", lie.name, m);
    let mut rep = SuiteReport::new();

    // The automorphism is diagonal in the eigenbasis: class r has
    // eigenvalue zeta^(m - r).
    let zeta = K::root_of_unity(m).ok_or_else(|| {
        SuiteError::Input(format!(
            "scalar field has no primitive root of unity of order {m}"
        ))
    })?;
    let kpow = |e: u32| -> K {
        (0..e).fold(K::one(), |acc, _| acc * zeta.clone())
    };
    let dim = lp.tensor.affine.dim();
    let diag = Matrix::from_fn(dim, dim, |i, j| {
        if i == j {
            kpow((m - lp.classes[i] % m) % m)
        } else {
            K::zero()
        }
    });
    let z = AutPair::from_constant_matrix(&diag, m);
    rep.push(CheckRecord::from_result(
        "descent",
        &name,
        "cocycle condition",
        "z = g ⊗ 1".to_string(),
        match cocycle_check(&z, m) {
            Ok(true) => Ok(()),
            Ok(false) => Err("norm(z) != id".to_string()),
            Err(e) => Err(format!("{e}")),
        },
    ));

    let qlo = rat_int(-expw);
    let qhi = rat_int(expw);
    let fixed = descent_fixed_points(&lp.tensor, &z, degree, &qlo, &qhi, nlo, nhi)
        .map_err(SuiteError::Input)?;
    rep.push(agg(
        "descent",
        &name,
        "fixed slice closure",
        format!(
            "{} fixed vectors, {} closure products tested, {} out of window",
            fixed.basis.len(),
            fixed.closure_tested,
            fixed.closure_untested
        ),
        fixed.violations.clone(),
    ));

    let slice = lp.slice_basis(degree, &qlo, &qhi);
    rep.push(agg(
        "descent",
        &name,
        "slice dimensions match",
        format!("descent {} vs loop {}", fixed.basis.len(), slice.len()),
        if fixed.basis.len() == slice.len() {
            Vec::new()
        } else {
            vec![format!(
                "fixed-point slice has dimension {}, loop slice {}",
                fixed.basis.len(),
                slice.len()
            )]
        },
    ));

    // Trivialized loop vectors are fixed and span-equal to the descent
    // basis.
    let zmap = z.to_f1map(&lp.tensor);
    let trivs: Vec<_> = slice.iter().map(|x| lp.to_tensor(x)).collect();
    let mut bad_fix = Vec::new();
    for (x, t) in slice.iter().zip(&trivs) {
        let moved = gamma_hat(t, 1)
            .map_err(|e| SuiteError::Input(format!("{e}")))?;
        if zmap.apply(&lp.tensor, &moved) != *t {
            bad_fix.push(format!("{} is not fixed by σ_z", lp.render(x)));
        }
    }
    rep.push(agg(
        "descent",
        &name,
        "loop slice is fixed",
        format!("{} trivialized vectors", trivs.len()),
        bad_fix,
    ));

    let mut bad_span = Vec::new();
    let fixed_span = SpanTester::new(&fixed.basis);
    let triv_span = SpanTester::new(&trivs);
    for (x, t) in slice.iter().zip(&trivs) {
        if !fixed_span.contains(t) {
            bad_span.push(format!(
                "{} is outside the descent fixed slice",
                lp.render(x)
            ));
        }
    }
    for b in &fixed.basis {
        if !triv_span.contains(b) {
            bad_span.push(format!(
                "{} is outside the trivialized loop slice",
                lp.tensor.render(b)
            ));
        }
    }
    rep.push(agg(
        "descent",
        &name,
        "mutual span inclusion",
        format!("{} + {} vectors", trivs.len(), fixed.basis.len()),
        bad_span,
    ));

    // The trivialization is the product-preserving bijection: loop
    // products transport to tensor products of the corresponding vectors.
    for (i, x) in slice.iter().enumerate() {
        for (j, y) in slice.iter().enumerate() {
            let mut bad = Vec::new();
            for l in nlo..=nhi {
                let prod = lp.loop_nproduct(x, l, y);
                let tprod = lp.tensor.nproduct(&trivs[i], l, &trivs[j]);
                if lp.to_tensor(&prod) != tprod {
                    bad.push(format!(
                        "l = {l}: {} vs {}",
                        lp.render(&prod),
                        lp.tensor.render(&tprod)
                    ));
                    break;
                }
            }
            rep.push(agg(
                "descent",
                &name,
                "bijection preserves products",
                format!(
                    "x = {}, y = {}, l in [{nlo},{nhi}]",
                    lp.render(x),
                    lp.render(y)
                ),
                bad,
            ));
        }
    }
    Ok(rep)
}

/// Twisted module checks for abelian data: construction, the fractional
/// commutation law on a bounded window, and pullback legality (identity
/// and global sign flip, with loop-level product preservation and the
/// contravariant composition law).
pub fn twistedmod_suite<K: Field>(
    lie: &LiePresentation<K>,
    g: &Matrix<K>,
    m: u32,
    level: K,
    depth: usize,
    expw: i64,
    lmax: i64,
) -> Result<SuiteReport, SuiteError> {
    let fock = twisted_fock_build(lie, g, m, level.clone())
        .map_err(|e| SuiteError::Input(format!("{e}")))?;
    let name = format!("twisted Fock({}, g) order {}", lie.name, m);
    let mut rep = SuiteReport::new();
    rep.push(CheckRecord::pass(
        "twistedmod",
        &name,
        "construction",
        format!("classes {:?}, order {}", fock.classes, fock.order),
    ));

    let qlo = rat_int(-expw);
    let qhi = rat_int(expw);
    rep.push(agg(
        "twistedmod",
        &name,
        "commutator sweep",
        format!("modes in [{}, {}], depth <= {depth}", -expw, expw),
        fock.commutator_violations(&qlo, &qhi, depth),
    ));

    // Identity pullback acts as the original module.
    let idm = PullbackMap::identity(&fock);
    let pulled_id = PulledModule::new(&fock, idm);
    let states: Vec<TwistedState<K>> = fock
        .basis(depth.min(2), &qlo)
        .into_iter()
        .map(|mono| TwistedState::monomial(mono, K::one()))
        .collect();
    let mut bad_id = Vec::new();
    'idcheck: for gen in 0..fock.dim() {
        for q in fock.exponents_in(gen, &qlo, &qhi) {
            for x in &states {
                let via_pull = pulled_id
                    .act(gen, &q, x)
                    .map_err(|e| SuiteError::Input(format!("{e}")))?;
                let direct = fock
                    .mode_action(gen, &q, x)
                    .map_err(|e| SuiteError::Input(format!("{e}")))?;
                if via_pull != direct {
                    bad_id.push(format!(
                        "a{gen}_({q}) on {}: {} vs {}",
                        fock.render(x),
                        fock.render(&via_pull),
                        fock.render(&direct)
                    ));
                    break 'idcheck;
                }
            }
        }
    }
    rep.push(agg(
        "twistedmod",
        &name,
        "identity pullback is the module",
        format!("{} states", states.len()),
        bad_id,
    ));

    // Global sign flip: legal for any abelian data.
    let flip = PullbackMap::diagonal(&fock, &vec![-K::one(); fock.dim()]);
    let lp = loop_build(lie, level, g, m).map_err(|e| SuiteError::Input(format!("{e}")))?;
    rep.push(agg(
        "twistedmod",
        &name,
        "sign flip preserves loop products",
        format!("l in [0, {lmax}]"),
        flip.loop_product_violations(&fock, &lp, &qlo, &qhi, lmax),
    ));
    let pulled_flip = PulledModule::new(&fock, flip.clone());
    rep.push(agg(
        "twistedmod",
        &name,
        "sign flip commutator sweep",
        format!("modes in [{}, {}], depth <= {depth}", -expw, expw),
        pulled_flip.commutator_violations(&qlo, &qhi, depth),
    ));

    // Contravariant functoriality: flip ∘ flip = identity as operators.
    let comp = flip
        .compose(&fock, &flip)
        .map_err(|e| SuiteError::Input(format!("{e}")))?;
    let idm = PullbackMap::identity(&fock);
    let mut bad_comp = Vec::new();
    for gen in 0..fock.dim() {
        for q in fock.exponents_in(gen, &qlo, &qhi) {
            let lhs = comp
                .assign(&fock, gen, &q)
                .map_err(|e| SuiteError::Input(format!("{e}")))?
                .canonical();
            let rhs = idm
                .assign(&fock, gen, &q)
                .map_err(|e| SuiteError::Input(format!("{e}")))?
                .canonical();
            if lhs.terms != rhs.terms {
                bad_comp.push(format!("a{gen}_({q}): {:?} vs {:?}", lhs.terms, rhs.terms));
            }
        }
    }
    rep.push(agg(
        "twistedmod",
        &name,
        "flip ∘ flip is the identity",
        "composition law".to_string(),
        bad_comp,
    ));

    Ok(rep)
}

/// Arc/jet checks: prolongation shape, derivation stability of the
/// generating set, the collapse question with a verified certificate,
/// and (optionally) the adjunction test for a chosen variable image list.
pub fn arc_suite<K: Field>(
    pres: &JetPresentation<K>,
    source: &str,
    order: u64,
    limits: &Limits,
    images: Option<&[FracLaurent<K>]>,
) -> Result<SuiteReport, SuiteError> {
    let (ring, ideal) =
        prolong(pres, order).map_err(|e| SuiteError::Input(format!("{e}")))?;
    let name = format!("jets({source}, N = {order})");
    let mut rep = SuiteReport::new();
    let vars = ring.names();
    rep.push(CheckRecord::pass(
        "arc",
        &name,
        "prolongation",
        format!(
            "base {}, {} jet variables, {} generators",
            pres.base.label(),
            ring.arity(),
            ideal.gens.len()
        ),
    ));

    // Derivation stability of the prolonged generating set.
    for (g, (mu, i)) in ideal.gens.iter().zip(&ideal.origins) {
        let mut bad = Vec::new();
        for k in 1..=order {
            if i + k > order {
                continue;
            }
            match ring.hs::<K>(k, g) {
                Ok(d) => {
                    let pos = ideal.origins.iter().position(|o| *o == (*mu, i + k));
                    let expect = pos.map(|p| {
                        let b = num_integer::binomial(
                            num_bigint::BigInt::from(i + k),
                            num_bigint::BigInt::from(k),
                        );
                        ideal.gens[p].scale(&K::from_rat(&Rat::from_integer(b)))
                    });
                    let ok = match &expect {
                        Some(e) => d == *e,
                        // The ladder entry was dropped as zero; the
                        // derivative must then vanish too.
                        None => d.is_zero(),
                    };
                    if !ok {
                        bad.push(format!(
                            "D_{k} of generator ({mu}, {i}) is {} — not the expected \
                             ladder multiple",
                            d.render(&vars)
                        ));
                    }
                }
                Err(e) => bad.push(format!("D_{k} failed: {e}")),
            }
        }
        rep.push(agg(
            "arc",
            &name,
            "derivation stability",
            format!("generator ({mu}, {i}): {}", g.render(&vars)),
            bad,
        ));
    }

    // Collapse question, certificate verified.
    match ideal.collapse_certificate(&ring, pres.base, limits) {
        Membership::Yes { cofactors } => {
            let cert = cofactors
                .iter()
                .zip(&ideal.gens)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, g)| format!("({}) * ({})", c.render(&vars), g.render(&vars)))
                .collect::<Vec<_>>()
                .join(" + ");
            rep.push(CheckRecord::pass(
                "arc",
                &name,
                "collapses: 1 ∈ I",
                format!("certificate: 1 = {cert}"),
            ));
        }
        Membership::No => {
            rep.push(CheckRecord::pass(
                "arc",
                &name,
                "does not collapse: 1 ∉ I",
                "complete basis computed".to_string(),
            ));
        }
        Membership::Inconclusive { reason } => {
            return Err(SuiteError::Resource {
                message: format!("collapse question unresolved: {reason}"),
                partial: rep,
            });
        }
    }

    // Optional adjunction test.
    if let Some(imgs) = images {
        let rendered = imgs
            .iter()
            .zip(&pres.vars)
            .map(|(f, v)| format!("{v} ↦ {f}"))
            .collect::<Vec<_>>()
            .join(", ");
        match adjunction_extend(pres, order, imgs) {
            Ok(_) => {
                rep.push(CheckRecord::pass(
                    "arc",
                    &name,
                    "adjunction extends",
                    rendered,
                ));
            }
            Err(JetError::Obstruction(v)) => {
                let detail = v
                    .iter()
                    .map(|(mu, i, img)| {
                        format!("generator ({mu}, {i}) has image {img}")
                    })
                    .collect::<Vec<_>>()
                    .join(" | ");
                rep.push(CheckRecord::fail(
                    "arc",
                    &name,
                    "adjunction extends",
                    rendered,
                    detail,
                ));
            }
            Err(e) => return Err(SuiteError::Input(format!("{e}"))),
        }
    }

    Ok(rep)
}

/// Membership summary used by drivers to phrase an ideal query record.
pub fn membership_record<K: Field>(
    name: &str,
    question: &str,
    f: &MultiPoly<K>,
    vars: &[String],
    outcome: &Membership<K>,
) -> Result<CheckRecord, SuiteError> {
    match outcome {
        Membership::Yes { cofactors } => Ok(CheckRecord::pass(
            "arc",
            name,
            question,
            format!(
                "member: {} with {} nonzero cofactors",
                f.render(vars),
                cofactors.iter().filter(|c| !c.is_zero()).count()
            ),
        )),
        Membership::No => Ok(CheckRecord::pass(
            "arc",
            name,
            question,
            format!("not a member: {}", f.render(vars)),
        )),
        Membership::Inconclusive { reason } => Err(SuiteError::Resource {
            message: reason.clone(),
            partial: SuiteReport::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::parse_jet;
    use crate::lie::{heisenberg_rank, sl2, sl2_chevalley};
    use num_traits::One;

    #[test]
    fn axioms_suite_passes_on_s2() {
        let rep = axioms_suite::<Rat>(2, 1, -2, 1, 2);
        assert!(rep.all_pass(), "{}", rep.text_summary());
        assert!(rep.total() > 10);
    }

    #[test]
    fn affine_suite_passes_on_sl2_level_one() {
        let rep = affine_suite(&sl2::<Rat>(), Rat::one(), 2, -2, 1).unwrap();
        assert!(rep.all_pass(), "{}", rep.text_summary());
        // The dimension record is pinned and deterministic.
        let dims = rep
            .records
            .iter()
            .find(|r| r.check == "graded dimensions")
            .unwrap();
        assert_eq!(dims.inputs, "degrees 0..=2: [1, 3, 9]");
    }

    #[test]
    fn loop_suite_passes_on_small_slices() {
        let rep = loop_suite(
            &heisenberg_rank::<Rat>(1),
            &Matrix::from_fn(1, 1, |_, _| -Rat::one()),
            2,
            Rat::one(),
            1,
            1,
            -2,
            1,
        )
        .unwrap();
        assert!(rep.all_pass(), "{}", rep.text_summary());
    }

    #[test]
    fn descent_suite_matches_loop_for_the_involution() {
        let rep = descent_suite(
            &sl2::<Rat>(),
            &sl2_chevalley::<Rat>(),
            2,
            Rat::one(),
            1,
            1,
            -2,
            2,
        )
        .unwrap();
        assert!(rep.all_pass(), "{}", rep.text_summary());
    }

    #[test]
    fn twistedmod_suite_passes_on_half_twist() {
        let rep = twistedmod_suite(
            &heisenberg_rank::<Rat>(1),
            &Matrix::from_fn(1, 1, |_, _| -Rat::one()),
            2,
            Rat::one(),
            2,
            2,
            2,
        )
        .unwrap();
        assert!(rep.all_pass(), "{}", rep.text_summary());
    }

    #[test]
    fn arc_suite_reports_the_collapse_string() {
        let pres = parse_jet::<Rat>("base Z[t]\nvars\nrel t").unwrap();
        let rep = arc_suite(&pres, "zero-locus", 1, &Limits::default(), None).unwrap();
        assert!(rep.all_pass(), "{}", rep.text_summary());
        assert!(rep.text_summary().contains("collapses: 1 ∈ I"));
        assert!(rep.to_jsonl().contains("collapses: 1 ∈ I"));
    }

    #[test]
    fn arc_suite_flags_obstructed_adjunctions() {
        let pres = parse_jet::<Rat>("base Z[t]\nvars\nrel t").unwrap();
        let rep = arc_suite(&pres, "zero-locus", 1, &Limits::default(), Some(&[]))
            .unwrap();
        assert!(!rep.all_pass());
        let fail = rep.failures().next().unwrap();
        assert!(fail.detail.as_ref().unwrap().contains("(0, 1) has image 1"));
    }

    #[test]
    fn resource_limits_become_suite_errors() {
        let pres = parse_jet::<Rat>("base Q\nvars x y\nrel x^3 - 2*x*y\nrel x^2*y - 2*y^2 + x")
            .unwrap();
        let starved = Limits {
            max_pairs: 0,
            ..Limits::default()
        };
        match arc_suite(&pres, "classic", 1, &starved, None) {
            Err(SuiteError::Resource { partial, .. }) => {
                assert!(partial.total() > 0, "partial report preserved");
            }
            other => panic!("expected a resource error, got {other:?}"),
        }
    }
}
