//! Exact-arithmetic toolkit for deciding, up to a truncation order, whether a
//! real-analytic Kähler potential is projectively induced, together with the
//! cone, homothety, and curvature machinery that surrounds that question.

pub mod calabi;
pub mod cli;
pub mod cone;
pub mod corpus;
pub mod curvature;
pub mod error;
pub mod oracle;
pub mod report;
pub mod selftest;
pub mod series;

pub use error::{Error, Result};
