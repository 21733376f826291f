//! Purely holomorphic truncated series and Gram-type constructions.
//!
//! `sum_i w_i |f_i(z)|^2` with positive rational weights `w_i` is the basic
//! recipe for manifestly positive semidefinite Hermitian data; the weighted
//! form keeps everything rational even when the natural factor would carry an
//! irrational normalization (store `f = z^2` with weight `1/2` instead of
//! `z^2/sqrt(2)`).

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::series::coeff::Coefficient;
use crate::series::hermitian::HermitianSeries;
use crate::series::index::{GradedOrder, MultiIndex};
use crate::series::mixed::MixedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoloSeries {
    vars: usize,
    bound: u32,
    terms: BTreeMap<usize, Coefficient>,
}

impl HoloSeries {
    pub fn zero(vars: usize, bound: u32) -> Self {
        GradedOrder::new(vars);
        HoloSeries {
            vars,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(vars: usize, bound: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Coefficient)>,
    {
        let order = GradedOrder::new(vars);
        let mut s = HoloSeries::zero(vars, bound);
        for (m, c) in terms {
            if m.len() != vars {
                return Err(Error::IndexLength {
                    expected: vars,
                    got: m.len(),
                });
            }
            if m.degree() > bound || c.is_zero() {
                continue;
            }
            let key = order.position(&m)?;
            let entry = s.terms.entry(key).or_insert_with(Coefficient::zero);
            *entry = &*entry + &c;
            if entry.is_zero() {
                s.terms.remove(&key);
            }
        }
        Ok(s)
    }

    pub fn monomial(vars: usize, m: MultiIndex, c: Coefficient) -> Result<Self> {
        let bound = m.degree();
        HoloSeries::from_terms(vars, bound, [(m, c)])
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_pairs(&self) -> Vec<(MultiIndex, Coefficient)> {
        let order = GradedOrder::new(self.vars);
        self.terms
            .iter()
            .map(|(&p, c)| (order.monomial_at(p), c.clone()))
            .collect()
    }

    pub fn mul(&self, other: &HoloSeries) -> Result<HoloSeries> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: other.vars,
            });
        }
        let bound = self.bound.min(other.bound);
        let pairs = self
            .term_pairs()
            .into_iter()
            .flat_map(|(m1, c1)| {
                other
                    .term_pairs()
                    .into_iter()
                    .map(move |(m2, c2)| (m1.add(&m2), &c1 * &c2))
            })
            .collect::<Vec<_>>();
        HoloSeries::from_terms(self.vars, bound, pairs)
    }

    /// The mixed series `f(z) * conj(g(w))` read on the diagonal, i.e. the
    /// Hermitian-pairing product with holomorphic part from `self` and
    /// antiholomorphic part from `g`.
    pub fn pair_with(&self, g: &HoloSeries) -> Result<MixedSeries> {
        if self.vars != g.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: g.vars,
            });
        }
        let triples = self
            .term_pairs()
            .into_iter()
            .flat_map(|(m, c)| {
                g.term_pairs()
                    .into_iter()
                    .map(move |(k, d)| (m.clone(), k, &c * &d.conj()))
            })
            .collect::<Vec<_>>();
        MixedSeries::from_terms(self.vars, self.bound, g.bound, triples)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in self.term_pairs() {
            let mut v = c.to_complex64();
            for (i, z) in point.iter().enumerate() {
                v *= z.powu(m.exponent(i));
            }
            total += v;
        }
        Ok(total)
    }
}

/// `sum_i |f_i|^2` as a Hermitian series; window = min factor bound.
pub fn gram_from_factors(factors: &[HoloSeries]) -> Result<HermitianSeries> {
    let weighted: Vec<(BigRational, HoloSeries)> = factors
        .iter()
        .map(|f| (BigRational::from_integer(1.into()), f.clone()))
        .collect();
    gram_from_weighted_factors(&weighted)
}

/// `sum_i w_i |f_i|^2` with strictly positive rational weights.
pub fn gram_from_weighted_factors(
    factors: &[(BigRational, HoloSeries)],
) -> Result<HermitianSeries> {
    if factors.is_empty() {
        return Err(Error::EmptyFactors);
    }
    let vars = factors[0].1.vars();
    let bound = factors
        .iter()
        .map(|(_, f)| f.bound())
        .min()
        .expect("nonempty");
    let mut acc = MixedSeries::zero(vars, bound, bound);
    for (w, f) in factors {
        if !w.is_positive() {
            return Err(Error::non_positive("gram weight", w));
        }
        if f.vars() != vars {
            return Err(Error::DimensionMismatch {
                expected: vars,
                got: f.vars(),
            });
        }
        let sq = f.pair_with(f)?.truncated(bound, bound);
        acc = acc.add(&sq.scalar_mul_rational(w))?;
    }
    HermitianSeries::try_new(acc)
}
