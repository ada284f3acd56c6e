//! Finite-truncation laboratory for Hardy spaces under rotationally
//! symmetric norms.

pub mod analytic;
pub mod circle;
pub mod error;
pub mod fixtures;
pub mod laurent;
pub mod linalg;
pub mod literal;
pub mod modn;
pub mod norms;
pub mod probe;
pub mod report;
pub mod subspaces;

pub use circle::{analyze, synthesize, CircleFunction, CircleGrid, FourierSeries};
pub use error::{Error, Result};
pub use laurent::{LaurentPoly, Window};
pub use literal::{FunctionLiteral, MetricLiteral, SubspaceFixture, TupleFixture};
pub use norms::{
    continuity_probe, dominance_check, module_inequality_check, orlicz_norm, orlicz_solve, p_norm,
    sup_norm, verify_axioms, NormDescriptor, NormFunctional, OrliczFunction, RotationNorm,
};
pub use report::{CheckReport, SuiteReport};
pub use modn::{
    check_orthonormal_family, check_rows_orthonormal, decompose_mod_n, is_n_unimodular, kernel_space,
    matrix_of, ModMatrix, ModN, ModNDecomposition, UnimodularTuple,
};
pub use analytic::{
    divide, flattening_multiplier, harmonic_conjugate, outer_exp, riesz_projection, Flattening, OuterWitness,
};
pub use subspaces::{
    beurling_extract, build_invariant, is_simply_invariant, shift, span, verify_structure_membership,
    wandering_space, wold_decompose, BeurlingExtraction, BeurlingOptions, InnerProductSpace, InvarianceReport,
    InvarianceStatus, Membership, StructureFit, TruncatedSubspace, WoldReport,
};
pub use probe::{merge_reports, run_probe, FixtureResult, ProbeConfig, ProbeReport, PROBES};
