//! The projective-inducibility criterion.
//!
//! A real-analytic Kähler potential is projectively induced exactly when the
//! coefficient matrix of `exp(diastasis) - 1` over graded monomial pairs is
//! positive semidefinite (of rank at most the target dimension, which the
//! truncated test leaves open). Because the order-`d` matrix is a principal
//! submatrix of every higher-order one,
//!
//! - a negative answer at order `d` is definitive and stays negative for all
//!   `d' >= d`, while
//! - a positive answer only says "consistent up to order d"; it also yields
//!   a lower bound on the rank, hence on the dimension of any target space.
//!
//! Integer multiples of a potential can become induced when the potential
//! itself is not; [`find_inducing_multiple`] scans for the smallest
//! consistent multiple.

pub mod matrix;
pub mod psd;

use num_rational::BigRational;

pub use matrix::{
    calabi_matrix, coefficient_matrix, diastasis_normalize, first_pure_term, is_normalized,
    CalabiMatrix, DenseHermitian,
};
pub use psd::{is_positive_definite, psd_check, psd_factorize, PsdCertificate, PsdOutcome};

use crate::error::{Error, Result};
use crate::series::{Coefficient, GradedOrder, HermitianSeries, MultiIndex};

/// Verdict of the truncated criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InducibilityVerdict {
    /// Definitive: no multiple-free embedding exists at any order.
    NotInduced {
        order: u32,
        /// Gaussian-integer coefficient vector over graded monomials with a
        /// negative form value against the criterion matrix.
        witness: Vec<Coefficient>,
        value: BigRational,
    },
    /// Inconclusive by design: the criterion holds on the order-`d` window.
    ConsistentUpTo {
        order: u32,
        /// Any inducing target space must have dimension at least this.
        rank_lower_bound: usize,
    },
}

impl InducibilityVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, InducibilityVerdict::ConsistentUpTo { .. })
    }

    /// Same outcome class, ignoring witnesses and ranks. Used by metamorphic
    /// checks that compare two routes to the same decision.
    pub fn same_class(&self, other: &InducibilityVerdict) -> bool {
        self.is_consistent() == other.is_consistent()
    }
}

/// Full result of one criterion run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducibilityReport {
    pub verdict: InducibilityVerdict,
    pub matrix_dim: usize,
    /// Present exactly when the verdict is consistent.
    pub certificate: Option<PsdCertificate>,
}

impl InducibilityReport {
    /// Nonzero witness entries labelled by their graded monomials.
    pub fn witness_support(&self, vars: usize) -> Vec<(MultiIndex, Coefficient)> {
        match &self.verdict {
            InducibilityVerdict::NotInduced { witness, .. } => {
                let order = GradedOrder::new(vars);
                witness
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (order.monomial_at(i), c.clone()))
                    .collect()
            }
            InducibilityVerdict::ConsistentUpTo { .. } => Vec::new(),
        }
    }
}

/// Check that the potential defines a genuine metric at the origin: the
/// quadratic coefficient block must be Hermitian positive definite.
pub fn kahler_at_origin(potential: &HermitianSeries) -> Result<()> {
    let n = potential.vars();
    if potential.order_bound() < 1 {
        return Err(Error::InsufficientOrder {
            what: "quadratic coefficient block".to_string(),
            needed: 1,
            have: potential.order_bound(),
        });
    }
    let mut g = DenseHermitian::zeros(n);
    for a in 0..n {
        for b in 0..n {
            g.set(
                a,
                b,
                potential.coeff(&MultiIndex::unit(n, a), &MultiIndex::unit(n, b))?,
            );
        }
    }
    if !is_positive_definite(&g)? {
        return Err(Error::DegenerateMetric {
            detail: "quadratic coefficient block is not positive definite".to_string(),
        });
    }
    Ok(())
}

/// Run the truncated criterion on a potential (normalization is applied
/// internally; the potential must be Kähler at the origin).
pub fn inducibility(potential: &HermitianSeries, order: u32) -> Result<InducibilityReport> {
    kahler_at_origin(potential)?;
    let normalized = diastasis_normalize(potential);
    let cm = calabi_matrix(&normalized, order)?;
    let report = match psd_factorize(cm.matrix())? {
        PsdOutcome::Psd { rank, certificate } => InducibilityReport {
            verdict: InducibilityVerdict::ConsistentUpTo {
                order,
                rank_lower_bound: rank,
            },
            matrix_dim: cm.dim(),
            certificate: Some(certificate),
        },
        PsdOutcome::NotPsd { witness, value } => InducibilityReport {
            verdict: InducibilityVerdict::NotInduced {
                order,
                witness,
                value,
            },
            matrix_dim: cm.dim(),
            certificate: None,
        },
    };
    Ok(report)
}

/// One entry of the multiple scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipleAttempt {
    pub multiple: u32,
    pub verdict: InducibilityVerdict,
}

/// Result of scanning integer multiples `k * potential` for `k = 1..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducingMultipleSearch {
    /// Smallest `k` whose multiple is consistent at the requested order;
    /// every smaller `k` is definitively not induced.
    pub minimal: Option<u32>,
    pub attempts: Vec<MultipleAttempt>,
}

/// Scan `k * potential` for `k = 1..=max_multiple`, stopping at the first
/// consistent multiple.
pub fn find_inducing_multiple(
    potential: &HermitianSeries,
    max_multiple: u32,
    order: u32,
) -> Result<InducingMultipleSearch> {
    if max_multiple == 0 {
        return Err(Error::NonPositive {
            what: "maximal multiple".to_string(),
            got: "0".to_string(),
        });
    }
    let mut attempts = Vec::new();
    let mut minimal = None;
    for k in 1..=max_multiple {
        let scaled = potential.scalar_mul_rational(&BigRational::from_integer(k.into()));
        let report = inducibility(&scaled, order)?;
        let consistent = report.verdict.is_consistent();
        attempts.push(MultipleAttempt {
            multiple: k,
            verdict: report.verdict,
        });
        if consistent {
            minimal = Some(k);
            break;
        }
    }
    Ok(InducingMultipleSearch { minimal, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_expand, OracleExpr};
    use crate::series::MixedSeries;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn rat(n: i64, d: i64) -> Coefficient {
        Coefficient::from_ints(n, d)
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// q * log(1 + |z1|^2 + ... + |zn|^2) on a window of order `d`.
    fn fs_potential(n: usize, q: BigRational, d: u32) -> HermitianSeries {
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), rat(1, 1))];
        for i in 0..n {
            terms.push((MultiIndex::unit(n, i), MultiIndex::unit(n, i), rat(1, 1)));
        }
        let one_plus_u = MixedSeries::from_terms(n, d, d, terms).unwrap();
        HermitianSeries::try_new(one_plus_u.log().unwrap().scalar_mul_rational(&q)).unwrap()
    }

    fn perturbed_quartic(d: u32) -> HermitianSeries {
        HermitianSeries::from_terms(
            1,
            d,
            [
                (mi(&[1]), mi(&[1]), rat(1, 1)),
                (mi(&[2]), mi(&[2]), rat(-1, 4)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flat_potential_is_consistent_with_full_rank() {
        let u = HermitianSeries::from_terms(1, 4, [(mi(&[1]), mi(&[1]), rat(1, 1))]).unwrap();
        let report = inducibility(&u, 4).unwrap();
        match report.verdict {
            InducibilityVerdict::ConsistentUpTo {
                order,
                rank_lower_bound,
            } => {
                assert_eq!(order, 4);
                // degrees 1..4 all carry positive inverse-factorial weights
                assert_eq!(rank_lower_bound, 4);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn fubini_study_rank_counts_coordinates() {
        let report = inducibility(&fs_potential(2, rational(1, 1), 4), 4).unwrap();
        match report.verdict {
            InducibilityVerdict::ConsistentUpTo {
                rank_lower_bound, ..
            } => assert_eq!(rank_lower_bound, 2),
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn perturbed_quartic_rejected_with_witness() {
        let report = inducibility(&perturbed_quartic(3), 3).unwrap();
        match &report.verdict {
            InducibilityVerdict::NotInduced {
                order,
                witness,
                value,
            } => {
                assert_eq!(*order, 3);
                assert_eq!(*witness, vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
                assert_eq!(*value, rational(-1, 12));
            }
            other => panic!("unexpected verdict {other:?}"),
        }
        assert_eq!(
            report.witness_support(1),
            vec![(mi(&[3]), rat(1, 1))]
        );
    }

    #[test]
    fn rejection_is_monotone_in_order() {
        for d in 3..=6 {
            let report = inducibility(&perturbed_quartic(d), d).unwrap();
            assert!(
                !report.verdict.is_consistent(),
                "negative verdict must persist at order {d}"
            );
        }
    }

    #[test]
    fn criterion_matrix_agrees_with_brute_expansion() {
        // independent route: expand exp(u - u^2/4) - 1 with the oracle and
        // extract the same matrix entries
        let phi = perturbed_quartic(3);
        let expr = OracleExpr::Sum(vec![
            OracleExpr::Exp(Box::new(OracleExpr::Terms(phi.term_triples()))),
            OracleExpr::Constant(rat(-1, 1)),
        ]);
        let expanded = brute_expand(&expr, 1, 3).unwrap();
        let by_kernel = calabi_matrix(&phi, 3).unwrap();
        let by_oracle = coefficient_matrix(&expanded, 3).unwrap();
        assert_eq!(by_kernel.matrix(), &by_oracle);
    }

    #[test]
    fn half_fubini_study_needs_multiple_two() {
        let half = fs_potential(1, rational(1, 2), 4);
        // (1+u)^(1/2) - 1 = u/2 - u^2/8 + u^3/16 - 5 u^4/128
        let cm = calabi_matrix(&diastasis_normalize(&half), 4).unwrap();
        assert_eq!(*cm.matrix().get(1, 1), rat(1, 2));
        assert_eq!(*cm.matrix().get(2, 2), rat(-1, 8));
        assert_eq!(*cm.matrix().get(3, 3), rat(1, 16));
        assert_eq!(*cm.matrix().get(4, 4), rat(-5, 128));

        let search = find_inducing_multiple(&half, 4, 4).unwrap();
        assert_eq!(search.minimal, Some(2));
        assert_eq!(search.attempts.len(), 2);
        assert!(!search.attempts[0].verdict.is_consistent());
        assert!(search.attempts[1].verdict.is_consistent());
    }

    #[test]
    fn quartic_multiples_turn_around_at_higher_order() {
        // 2 * (u - u^2/4): exp(2u - u^2/2) - 1 at order 3 has diagonal
        // 2, 3/2, 1/3 -- consistent there -- but fails at order 4.
        let two = perturbed_quartic(4).scalar_mul_rational(&rational(2, 1));
        let cm = calabi_matrix(&two, 4).unwrap();
        assert_eq!(*cm.matrix().get(1, 1), rat(2, 1));
        assert_eq!(*cm.matrix().get(2, 2), rat(3, 2));
        assert_eq!(*cm.matrix().get(3, 3), rat(1, 3));
        assert_eq!(*cm.matrix().get(4, 4), rat(-5, 24));

        let search_low = find_inducing_multiple(&perturbed_quartic(3), 5, 3).unwrap();
        assert_eq!(search_low.minimal, Some(2));
        let search_high = find_inducing_multiple(&perturbed_quartic(4), 5, 4).unwrap();
        assert_ne!(search_high.minimal, Some(2));
    }

    #[test]
    fn degenerate_metric_rejected() {
        // quartic-only potential: quadratic block is zero
        let phi = HermitianSeries::from_terms(1, 3, [(mi(&[2]), mi(&[2]), rat(1, 1))]).unwrap();
        assert!(matches!(
            inducibility(&phi, 3),
            Err(Error::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn hyperbolic_scalings_stay_consistent() {
        // -q log(1 - u): exp of the normalized part is (1-u)^(-q), all of
        // whose diagonal coefficients are positive for q > 0
        for (qn, qd) in [(1i64, 1i64), (1, 2), (3, 1)] {
            let mut terms = vec![(mi(&[0]), mi(&[0]), rat(1, 1)), (mi(&[1]), mi(&[1]), rat(-1, 1))];
            terms.truncate(2);
            let one_minus_u = MixedSeries::from_terms(1, 6, 6, terms).unwrap();
            let phi = HermitianSeries::try_new(
                one_minus_u
                    .log()
                    .unwrap()
                    .scalar_mul_rational(&rational(-qn, qd)),
            )
            .unwrap();
            let report = inducibility(&phi, 6).unwrap();
            assert!(report.verdict.is_consistent(), "q = {qn}/{qd}");
        }
    }

    #[test]
    fn half_hyperbolic_diagonal_values() {
        // (1-u)^(-1/2) - 1: diagonal 1/2, 3/8, 5/16, 35/128, 63/256, 231/1024
        let one_minus_u = MixedSeries::from_terms(
            1,
            6,
            6,
            [
                (mi(&[0]), mi(&[0]), rat(1, 1)),
                (mi(&[1]), mi(&[1]), rat(-1, 1)),
            ],
        )
        .unwrap();
        let phi = HermitianSeries::try_new(
            one_minus_u
                .log()
                .unwrap()
                .scalar_mul_rational(&rational(-1, 2)),
        )
        .unwrap();
        let cm = calabi_matrix(&phi, 6).unwrap();
        let expect = [
            rat(1, 2),
            rat(3, 8),
            rat(5, 16),
            rat(35, 128),
            rat(63, 256),
            rat(231, 1024),
        ];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(cm.matrix().get(i + 1, i + 1), e, "degree {}", i + 1);
        }
    }
}
