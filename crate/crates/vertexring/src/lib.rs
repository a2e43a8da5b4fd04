//! Exact computer algebra for vertex algebras over differential commutative rings.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals or
//! elements of cyclotomic number fields, and every identity check is an exact
//! equality of canonical forms. No floating point anywhere.

pub mod affine;
pub mod autpair;
pub mod cyclotomic;
pub mod descent;
pub mod laurent;
pub mod lie;
pub mod linalg;
pub mod jets;
pub mod loopalg;
pub mod poly;
pub mod report;
pub mod suites;
pub mod tensor;
pub mod twisted;
pub mod vertex;
pub mod scalar;

pub use affine::{build_affine, AffineAlgebra, AffineError, PbwMonomial, State};
pub use autpair::{
    alpha, lie_endo_violations, solve_translation, translation_is_unique, AutPair,
};
pub use cyclotomic::Cyc;
pub use descent::{
    assemble_cocycle, cocycle_check, cocycle_norm, cohomologous_verify, descent_fixed_points,
    galois_twist, gamma_hat, heisenberg_norm_solve, heisenberg_pair, parse_cocycle, CocycleCase,
    CocycleFile, DescentSlice,
};
pub use jets::{
    adjunction_extend, parse_jet, prolong, BaseRing, JetError, JetIdeal, JetMap,
    JetPresentation, JetRing,
};
pub use lie::{aut_order, eigen_decompose, is_lie_automorphism, parse_aut, parse_lie, EigenDecomp, LiePresentation};
pub use laurent::{diffring_aut_test, parse_laurent, parse_scalar, FracLaurent, LaurentRing, RingMap};
pub use poly::{
    groebner, ideal_member, parse_poly, reduce, verify_certificate, GroebnerResult, Limits,
    Membership, Monomial, MultiPoly, PolyParseError, Reduction,
};
pub use report::{CheckRecord, SuiteReport};
pub use suites::{
    affine_suite, arc_suite, axioms_suite, descent_suite, loop_suite, twistedmod_suite,
    SuiteError,
};
pub use tensor::{tensor_hs, F1Map, TensorAlgebra, TensorElement};
pub use twisted::{
    twisted_fock_build, ModeOp, PullbackMap, PulledModule, TwistedError, TwistedFock,
    TwistedMono, TwistedState,
};
pub use vertex::{borcherds_check, canonical_hs, filtration_check, hs_derivation_check, VertexAlgebra};
pub use linalg::{solve_linear, LinearSolution, Matrix};
pub use loopalg::{loop_build, LoopAlgebra, LoopElement, LoopError, LoopTensor};
pub use scalar::{binom_frac, binom_int, Field, Rat};
