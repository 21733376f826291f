//! Exact truncated power-series kernel.
//!
//! Everything downstream (diastasis normalization, coefficient matrices,
//! cone lifts, curvature) is built from the four layers here:
//! coefficients ([`coeff`]), monomial bookkeeping ([`index`]), mixed series
//! with window tracking ([`mixed`], [`hermitian`]), and the constructions
//! that produce or transform them ([`holo`], [`substitute`]).

pub mod coeff;
pub mod hermitian;
pub mod holo;
pub mod index;
pub mod mixed;
pub mod substitute;

pub use coeff::Coefficient;
pub use hermitian::HermitianSeries;
pub use holo::{gram_from_factors, gram_from_weighted_factors, HoloSeries};
pub use index::{binomial, GradedOrder, MultiIndex};
pub use mixed::MixedSeries;
pub use substitute::{laurent_substitute, laurent_substitute_hermitian};
