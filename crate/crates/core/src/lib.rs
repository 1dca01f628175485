//! Exact and high-precision evaluation of the secant zeta function
//! ψ_s(z) = Σ sec(πnz)/n^s, together with the continued-fraction,
//! modular-group and polynomial machinery around it.

pub mod closed_forms;
pub mod diophantine;
pub mod exact;
pub mod modular;
pub mod numeric;
pub mod unimodular;
