//! Exact Briot-Bouquet solver and enumeration of holomorphic center
//! manifolds for 2- and 3-dimensional holomorphic vector fields.
//!
//! Coefficients live in the Gaussian rationals, so every vanishing test in
//! the classification is exact. Floating point only appears in [`verify`].

#![allow(clippy::needless_range_loop)]

pub mod bb;
pub mod center;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod series;
pub mod spectra;
pub mod verify;

pub use bb::{
    classify, formal_solve_nonresonant, reduction_step, residual, BbClassification, BbError, BbSystem, FormalSolution,
    FreeParameter, ObstructionConstant, ReductionStep, ResonancePattern, SolutionKind, DEFAULT_ORDER,
};
pub use center::{
    chart_reduce, enumerate_centers, graph_residual, manifold_graph, CenterError, CenterManifoldReport, ChartReduction,
    FreeSlot, HoloSystem, Multiplicity, Period, POINCARE_TAG,
};
pub use io::{emit_report, emit_system, parse_bb, parse_system, Format, IoError, ReportDocument, SystemDocument};
pub use matrix::{LinearSolve, MatrixError, SmallMatrix};
pub use scalar::ExactComplex;
pub use series::{arith, ArithOp, MultiSeries, SeriesError};
pub use spectra::{
    classify_spectrum, classify_spectrum_numeric, normal_form_of, normalizing_basis, NormalFormTag, NumericSpectrum,
    SpectrumError, SpectrumInfo,
};
pub use verify::{
    check_isochronous, check_residual_numeric, integrate, Trajectory, VerifyConfig, VerifyError, VerifyResult,
};

/// `normal_form_check` on a whole system.
pub fn normal_form_check(h: &HoloSystem) -> NormalFormTag {
    normal_form_of(h.linear())
}
