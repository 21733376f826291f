//! Hermitian mixed series: truncated series of real-analytic, real-valued
//! functions, i.e. `c[k,j] = conj(c[j,k])` with a square window.
//!
//! Invariants:
//! - both window bounds agree (`order_bound`),
//! - Hermitian symmetry is re-validated after every constructing operation;
//!   a violation coming out of an operation that preserves symmetry in
//!   principle would indicate a kernel bug, so nothing downstream ever
//!   needs to re-check,
//! - real scalars only: multiplying by a non-real scalar would break
//!   symmetry, so the API does not offer it.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::series::coeff::Coefficient;
use crate::series::index::MultiIndex;
use crate::series::mixed::MixedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSeries {
    inner: MixedSeries,
}

impl HermitianSeries {
    /// Validate and wrap. Fails when the window is not square or a
    /// coefficient pair breaks `c[k,j] = conj(c[j,k])`.
    pub fn try_new(inner: MixedSeries) -> Result<Self> {
        if inner.holo_bound() != inner.anti_bound() {
            return Err(Error::DimensionMismatch {
                expected: inner.holo_bound() as usize,
                got: inner.anti_bound() as usize,
            });
        }
        let order = inner.order();
        for (&(j, k), c) in inner.position_terms() {
            let mirror = inner.coeff_at_positions(k, j);
            if mirror != c.conj() {
                return Err(Error::NotHermitian {
                    j: order.monomial_at(j).to_string(),
                    k: order.monomial_at(k).to_string(),
                });
            }
        }
        Ok(HermitianSeries { inner })
    }

    pub fn zero(vars: usize, order_bound: u32) -> Self {
        HermitianSeries {
            inner: MixedSeries::zero(vars, order_bound, order_bound),
        }
    }

    pub fn constant_real(vars: usize, order_bound: u32, value: BigRational) -> Self {
        HermitianSeries {
            inner: MixedSeries::constant(
                vars,
                order_bound,
                order_bound,
                Coefficient::from_rational(value),
            ),
        }
    }

    pub fn from_terms<I>(vars: usize, order_bound: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, Coefficient)>,
    {
        HermitianSeries::try_new(MixedSeries::from_terms(vars, order_bound, order_bound, terms)?)
    }

    pub fn as_mixed(&self) -> &MixedSeries {
        &self.inner
    }

    pub fn into_mixed(self) -> MixedSeries {
        self.inner
    }

    pub fn vars(&self) -> usize {
        self.inner.vars()
    }

    /// The common holomorphic/antiholomorphic window bound.
    pub fn order_bound(&self) -> u32 {
        self.inner.holo_bound()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.inner.term_count()
    }

    pub fn constant_term(&self) -> Coefficient {
        self.inner.constant_term()
    }

    pub fn coeff(&self, m: &MultiIndex, k: &MultiIndex) -> Result<Coefficient> {
        self.inner.coeff(m, k)
    }

    pub fn coeff_at_positions(&self, holo: usize, anti: usize) -> Coefficient {
        self.inner.coeff_at_positions(holo, anti)
    }

    pub fn term_triples(&self) -> Vec<(MultiIndex, MultiIndex, Coefficient)> {
        self.inner.term_triples()
    }

    pub fn add(&self, other: &HermitianSeries) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.add(&other.inner)?)
    }

    pub fn sub(&self, other: &HermitianSeries) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.sub(&other.inner)?)
    }

    pub fn neg(&self) -> HermitianSeries {
        HermitianSeries {
            inner: self.inner.neg(),
        }
    }

    pub fn mul(&self, other: &HermitianSeries) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.mul(&other.inner)?)
    }

    pub fn scalar_mul_rational(&self, r: &BigRational) -> HermitianSeries {
        HermitianSeries {
            inner: self.inner.scalar_mul_rational(r),
        }
    }

    pub fn exp(&self) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.exp()?)
    }

    pub fn log(&self) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.log()?)
    }

    pub fn truncated(&self, order_bound: u32) -> HermitianSeries {
        HermitianSeries {
            inner: self.inner.truncated(order_bound, order_bound),
        }
    }

    /// Wirtinger derivative; the result is a plain [`MixedSeries`] because a
    /// single derivative destroys Hermitian symmetry.
    pub fn wirtinger(&self, var: usize, conjugate: bool) -> Result<MixedSeries> {
        self.inner.wirtinger(var, conjugate)
    }

    pub fn embed(&self, vars: usize, offset: usize) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.embed(vars, offset)?)
    }

    pub fn recenter(&self, centers: &[Coefficient]) -> Result<HermitianSeries> {
        HermitianSeries::try_new(self.inner.recenter(centers)?)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        self.inner.evaluate(point)
    }

    /// Equality of the underlying germ: same variables and identical
    /// coefficients on the common window, ignoring how far each side happens
    /// to be truncated beyond it.
    pub fn same_germ(&self, other: &HermitianSeries) -> bool {
        if self.vars() != other.vars() {
            return false;
        }
        let d = self.order_bound().min(other.order_bound());
        self.truncated(d) == other.truncated(d)
    }
}
