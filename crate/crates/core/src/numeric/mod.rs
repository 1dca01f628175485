//! Arbitrary-precision ball arithmetic and rigorous evaluation of ψ_s,
//! the cotangent zeta function and their relatives.

mod ball;
mod descent;
mod eval;
mod hurwitz;
mod lemma;
mod mag;
mod recognize;
mod series;

use thiserror::Error;

use crate::diophantine::DiophantineError;
use crate::exact::ExactError;
use crate::modular::ModularError;

pub use ball::BigReal;
pub use descent::{cot_descent, cot_law_polynomial, psi_descent};
pub use eval::{
    cosecant_series, cotangent_zeta, psi_numeric, psi_over_pi_power, tangent_series, working_bits, TwoPath,
    DIRECT_MAX_LOG2_TERMS,
};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_prec, psi_rational_point, psi_rational_point_prec};
pub use lemma::{lemma_ladder, lemma_residual, lemma_slack};
pub use mag::Mag;
pub use recognize::{conjecture1_scan, recognize_rational, recognize_with_tolerance, ScanRecord};
pub use series::{direct_sum, direct_sum_adaptive, liouville_constant, tail_bound, Exponent, TrigKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("paths disagree: direct {direct}, identity {identity}")]
    PathMismatch { direct: String, identity: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
}
