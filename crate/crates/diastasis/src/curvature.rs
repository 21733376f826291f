//! Metrics, Ricci potentials, Einstein detection, and the cone bridge.
//!
//! Conventions: the metric of a potential is the mixed Hessian
//! `g_ab = d^2 phi / (dz_a dzbar_b)`; the Ricci potential is
//! `-2 log det g`, reported in diastasis-normalized form so that
//! Ricci-flatness is simply "the normalized Ricci potential vanishes"; the
//! Einstein condition compares the Ricci potential against `lambda` times
//! the normalized input potential.
//!
//! Cone apexes make `det g` vanish at the origin. Since the determinant of a
//! Hermitian Hessian has symmetric monomial content `z^a zbar^a`, and
//! `log(z^a zbar^a)` is pluriharmonic, the content is factored out exactly
//! before taking the logarithm; the Ricci form off the apex is unaffected.
//!
//! Window bookkeeping: a Hessian costs one order per side, content division
//! costs its degree, so every entry point states exactly how much window it
//! needs and fails with `InsufficientOrder` instead of under-reporting.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::calabi::{diastasis_normalize, kahler_at_origin};
use crate::cone::ConePotential;
use crate::error::{Error, Result};
use crate::series::{Coefficient, GradedOrder, HermitianSeries, MixedSeries, MultiIndex};

/// Mixed Hessian of a potential, row-major `n x n`; entry `(a, b)` is
/// `d^2 phi / (dz_a dzbar_b)` on a window one order smaller than the input.
pub fn hessian(potential: &HermitianSeries) -> Result<Vec<MixedSeries>> {
    let n = potential.vars();
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        let da = potential.wirtinger(a, false)?;
        for b in 0..n {
            entries.push(da.wirtinger(b, true)?);
        }
    }
    Ok(entries)
}

/// Determinant of an `n x n` matrix of series by cofactor expansion along
/// the first row. Zero entries are kept in the sum so the result window
/// stays the honest minimum over all contributing products.
pub fn determinant(entries: &[MixedSeries], n: usize) -> Result<MixedSeries> {
    assert_eq!(entries.len(), n * n, "square matrix required");
    if n == 1 {
        return Ok(entries[0].clone());
    }
    let mut acc: Option<MixedSeries> = None;
    for j in 0..n {
        let minor: Vec<MixedSeries> = (1..n)
            .flat_map(|r| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(move |c| entries[r * n + c].clone())
            })
            .collect();
        let sub = determinant(&minor, n - 1)?;
        let term = entries[j].mul(&sub)?;
        let signed = if j % 2 == 0 { term } else { term.neg() };
        acc = Some(match acc {
            None => signed,
            Some(s) => s.add(&signed)?,
        });
    }
    Ok(acc.expect("n >= 1"))
}

/// Truncated metric of a Kähler potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSeries {
    vars: usize,
    order: u32,
    entries: Vec<MixedSeries>,
}

impl MetricSeries {
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entry(&self, a: usize, b: usize) -> &MixedSeries {
        &self.entries[a * self.vars + b]
    }

    pub fn determinant(&self) -> Result<MixedSeries> {
        determinant(&self.entries, self.vars)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        let mut rows = Vec::with_capacity(self.vars);
        for a in 0..self.vars {
            let mut row = Vec::with_capacity(self.vars);
            for b in 0..self.vars {
                row.push(self.entry(a, b).evaluate(point)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Metric of `potential` to the given order; needs one extra order of window
/// and a positive-definite quadratic block.
pub fn metric_from_potential(potential: &HermitianSeries, order: u32) -> Result<MetricSeries> {
    kahler_at_origin(potential)?;
    if potential.order_bound() < order + 1 {
        return Err(Error::InsufficientOrder {
            what: "metric".to_string(),
            needed: order + 1,
            have: potential.order_bound(),
        });
    }
    let entries = hessian(potential)?
        .into_iter()
        .map(|e| e.truncated(order, order))
        .collect();
    Ok(MetricSeries {
        vars: potential.vars(),
        order,
        entries,
    })
}

/// Normalized Ricci potential `-2 log det Hess(potential)`, with symmetric
/// monomial content factored out of the determinant first. The result
/// window is one order below the input, minus the content degree.
pub fn ricci_potential_core(potential: &HermitianSeries) -> Result<HermitianSeries> {
    let n = potential.vars();
    let det = determinant(&hessian(potential)?, n)?;
    if det.is_zero() {
        return Err(Error::DegenerateMetric {
            detail: "metric determinant vanishes on the available window".to_string(),
        });
    }
    let (m_min, k_min) = det.min_support_exponents().expect("nonzero series");
    if m_min != k_min {
        return Err(Error::Internal(
            "Hermitian determinant has asymmetric monomial content".into(),
        ));
    }
    let reduced = if m_min.degree() > 0 {
        det.div_by_monomial(&m_min, &k_min)?
    } else {
        det
    };
    let u0 = reduced.constant_term();
    if !u0.is_real() || !u0.re.is_positive() {
        return Err(Error::DegenerateMetric {
            detail: format!(
                "determinant content coefficient {u0} is not a positive real"
            ),
        });
    }
    let unit = reduced.scalar_mul_rational(&u0.re.recip());
    let ricci = unit
        .log()?
        .scalar_mul_rational(&BigRational::from_integer((-2).into()));
    let hermitian = HermitianSeries::try_new(ricci)
        .map_err(|e| Error::Internal(format!("Ricci potential lost symmetry: {e}")))?;
    Ok(diastasis_normalize(&hermitian))
}

/// First stored term in `(total degree, holomorphic rank, antiholomorphic
/// rank)` order.
fn first_term(series: &HermitianSeries) -> Option<(MultiIndex, MultiIndex, Coefficient)> {
    let graded = GradedOrder::new(series.vars());
    series
        .as_mixed()
        .position_terms()
        .map(|(&(j, k), c)| {
            let m = graded.monomial_at(j);
            let km = graded.monomial_at(k);
            ((m.degree() + km.degree(), j, k), (m, km, c.clone()))
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, t)| t)
}

#[derive(Debug, Clone)]
pub struct RicciReport {
    pub order: u32,
    /// Candidate Einstein constant, from the first nonzero term of the
    /// normalized potential; `None` if the ratio is not real.
    pub lambda: Option<BigRational>,
    /// Whether `ricci = lambda * potential` holds exactly on the window.
    pub einstein: bool,
    pub residual_terms: usize,
    pub first_mismatch: Option<(MultiIndex, MultiIndex, Coefficient)>,
    /// Normalized Ricci potential, truncated to `order`.
    pub ricci_potential: HermitianSeries,
}

/// Einstein analysis of a Kähler potential: detect `lambda` and verify the
/// proportionality exactly. Needs window `order + 1`.
pub fn ricci_report(potential: &HermitianSeries, order: u32) -> Result<RicciReport> {
    kahler_at_origin(potential)?;
    if potential.order_bound() < order + 1 {
        return Err(Error::InsufficientOrder {
            what: "Ricci report".to_string(),
            needed: order + 1,
            have: potential.order_bound(),
        });
    }
    let ricci = ricci_potential_core(potential)?.truncated(order);
    let base = diastasis_normalize(potential).truncated(order);
    let (lambda, residual) = match first_term(&base) {
        Some((m, k, c)) => {
            let ratio = &ricci.coeff(&m, &k)? / &c;
            if ratio.is_real() {
                let lam = ratio.re;
                let res = ricci.sub(&base.scalar_mul_rational(&lam))?;
                (Some(lam), res)
            } else {
                (None, ricci.clone())
            }
        }
        None => (None, ricci.clone()),
    };
    let einstein = lambda.is_some() && residual.is_zero();
    Ok(RicciReport {
        order,
        lambda,
        einstein,
        residual_terms: residual.term_count(),
        first_mismatch: if einstein { None } else { first_term(&residual) },
        ricci_potential: ricci,
    })
}

#[derive(Debug, Clone)]
pub struct RicciFlatReport {
    pub order: u32,
    pub flat: bool,
    pub first_obstruction: Option<(MultiIndex, MultiIndex, Coefficient)>,
    /// Window the Ricci potential was actually computed on (>= `order`).
    pub achieved_order: u32,
}

/// Ricci-flatness of a possibly apex-degenerate potential (no positivity
/// requirement). The window left after the Hessian and content division
/// must still cover `order`.
pub fn ricci_flat_check(potential: &HermitianSeries, order: u32) -> Result<RicciFlatReport> {
    let ricci = ricci_potential_core(potential)?;
    if ricci.order_bound() < order {
        return Err(Error::InsufficientOrder {
            what: "Ricci-flatness check".to_string(),
            needed: order,
            have: ricci.order_bound(),
        });
    }
    let truncated = ricci.truncated(order);
    Ok(RicciFlatReport {
        order,
        flat: truncated.is_zero(),
        first_obstruction: first_term(&truncated),
        achieved_order: ricci.order_bound(),
    })
}

#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub base_vars: usize,
    /// `2(n+1)` for an `n`-variable base.
    pub einstein_target: BigRational,
    pub base_report: RicciReport,
    pub base_is_einstein_target: bool,
    pub cone_report: RicciFlatReport,
    pub cone_ricci_flat: bool,
    /// The two sides must agree; disagreement indicates an internal defect.
    pub consistent: bool,
}

/// Compare the two sides of the cone correspondence for `chi = psi / a`:
/// the base metric of `chi` has Einstein constant `2(n+1)` exactly when the
/// unit-weight cone `|z0|^2 exp(chi)` is Ricci-flat. Needs window
/// `order + n` on `psi`.
pub fn sasaki_einstein_bridge(
    psi: &HermitianSeries,
    a: u32,
    order: u32,
) -> Result<BridgeReport> {
    if a == 0 {
        return Err(Error::NonPositive {
            what: "bridge parameter".to_string(),
            got: "0".to_string(),
        });
    }
    let n = psi.vars();
    let needed = order + n as u32;
    if psi.order_bound() < needed {
        return Err(Error::InsufficientOrder {
            what: "cone bridge".to_string(),
            needed,
            have: psi.order_bound(),
        });
    }
    let chi = psi.scalar_mul_rational(&BigRational::new(1.into(), a.into()));
    let base_report = ricci_report(&chi, order)?;
    let einstein_target = BigRational::from_integer((2 * n as i64 + 2).into());
    let base_is_einstein_target =
        base_report.einstein && base_report.lambda.as_ref() == Some(&einstein_target);
    let cone = ConePotential::new(BigRational::one(), chi)?;
    let cone_report = ricci_flat_check(&cone.ambient_series()?, order)?;
    let cone_ricci_flat = cone_report.flat;
    Ok(BridgeReport {
        base_vars: n,
        einstein_target,
        base_report,
        base_is_einstein_target,
        cone_report,
        cone_ricci_flat,
        consistent: base_is_einstein_target == cone_ricci_flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::flat_potential;
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

    fn fs(n: usize, d: u32) -> HermitianSeries {
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), rat(1, 1))];
        for i in 0..n {
            terms.push((MultiIndex::unit(n, i), MultiIndex::unit(n, i), rat(1, 1)));
        }
        let one_plus_u = MixedSeries::from_terms(n, d, d, terms).unwrap();
        HermitianSeries::try_new(one_plus_u.log().unwrap()).unwrap()
    }

    fn hyperbolic(n: usize, d: u32) -> HermitianSeries {
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), rat(1, 1))];
        for i in 0..n {
            terms.push((MultiIndex::unit(n, i), MultiIndex::unit(n, i), rat(-1, 1)));
        }
        let one_minus_u = MixedSeries::from_terms(n, d, d, terms).unwrap();
        HermitianSeries::try_new(
            one_minus_u
                .log()
                .unwrap()
                .scalar_mul_rational(&rational(-1, 1)),
        )
        .unwrap()
    }

    #[test]
    fn flat_metric_is_identity() {
        let m = metric_from_potential(&flat_potential(2, 3), 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let e = m.entry(a, b);
                if a == b {
                    assert_eq!(e.constant_term(), rat(1, 1));
                    assert_eq!(e.term_count(), 1);
                } else {
                    assert!(e.is_zero());
                }
            }
        }
        assert_eq!(m.determinant().unwrap().constant_term(), rat(1, 1));
    }

    #[test]
    fn fubini_study_metric_series() {
        // d^2/dz dzbar log(1+u) = 1 - 2u + 3u^2 - 4u^3
        let m = metric_from_potential(&fs(1, 5), 4).unwrap();
        let g = m.entry(0, 0);
        assert_eq!(g.coeff(&mi(&[0]), &mi(&[0])).unwrap(), rat(1, 1));
        assert_eq!(g.coeff(&mi(&[1]), &mi(&[1])).unwrap(), rat(-2, 1));
        assert_eq!(g.coeff(&mi(&[2]), &mi(&[2])).unwrap(), rat(3, 1));
        assert_eq!(g.coeff(&mi(&[3]), &mi(&[3])).unwrap(), rat(-4, 1));
    }

    #[test]
    fn fubini_study_determinant_two_variables() {
        // det Hess log(1+u) = (1+u)^(-3) for n = 2
        let h = hessian(&fs(2, 5)).unwrap();
        let det = determinant(&h, 2).unwrap();
        assert_eq!(det.coeff(&mi(&[0, 0]), &mi(&[0, 0])).unwrap(), rat(1, 1));
        assert_eq!(det.coeff(&mi(&[1, 0]), &mi(&[1, 0])).unwrap(), rat(-3, 1));
        assert_eq!(det.coeff(&mi(&[2, 0]), &mi(&[2, 0])).unwrap(), rat(6, 1));
        assert_eq!(det.coeff(&mi(&[1, 1]), &mi(&[1, 1])).unwrap(), rat(12, 1));
    }

    #[test]
    fn einstein_constants_of_model_metrics() {
        for n in 1..=3usize {
            let report = ricci_report(&fs(n, 5), 4).unwrap();
            assert!(report.einstein, "FS n={n}");
            assert_eq!(report.lambda, Some(rational(2 * n as i64 + 2, 1)));
        }
        let flat = ricci_report(&flat_potential(2, 5), 4).unwrap();
        assert!(flat.einstein);
        assert_eq!(flat.lambda, Some(rational(0, 1)));
        assert!(flat.ricci_potential.is_zero());

        let hyp = ricci_report(&hyperbolic(1, 5), 4).unwrap();
        assert!(hyp.einstein);
        assert_eq!(hyp.lambda, Some(rational(-4, 1)));
    }

    #[test]
    fn perturbed_quartic_is_not_einstein() {
        let phi = HermitianSeries::from_terms(
            1,
            5,
            [
                (mi(&[1]), mi(&[1]), rat(1, 1)),
                (mi(&[2]), mi(&[2]), rat(-1, 4)),
            ],
        )
        .unwrap();
        let report = ricci_report(&phi, 4).unwrap();
        assert_eq!(report.lambda, Some(rational(2, 1)));
        assert!(!report.einstein);
        let (m, k, c) = report.first_mismatch.unwrap();
        assert_eq!((m, k), (mi(&[2]), mi(&[2])));
        assert_eq!(c, rat(3, 2));
    }

    #[test]
    fn cone_determinant_content() {
        // det Hess(|z0|^2 (1 + |z1|^2)) = z0 zbar0 exactly
        let cp = ConePotential::lift(&fs(1, 4), 1).unwrap();
        let ambient = cp.ambient_series().unwrap();
        let det = determinant(&hessian(&ambient).unwrap(), 2).unwrap();
        assert_eq!(
            det.coeff(&mi(&[1, 0]), &mi(&[1, 0])).unwrap(),
            rat(1, 1)
        );
        assert_eq!(det.term_count(), 1);
    }

    #[test]
    fn hyperbolic_cone_determinant_formula() {
        // det Hess(|z0|^2 (1-u)^(-1)) = z0 zbar0 (1-u)^(-4) for n = 1
        let cp = ConePotential::lift(&hyperbolic(1, 5), 1).unwrap();
        let ambient = cp.ambient_series().unwrap();
        let det = determinant(&hessian(&ambient).unwrap(), 2).unwrap();
        let one_minus_u = MixedSeries::from_terms(
            1,
            5,
            5,
            [
                (mi(&[0]), mi(&[0]), rat(1, 1)),
                (mi(&[1]), mi(&[1]), rat(-1, 1)),
            ],
        )
        .unwrap();
        let expect_base = one_minus_u
            .log()
            .unwrap()
            .scalar_mul_rational(&rational(-4, 1))
            .exp()
            .unwrap();
        let reduced = det
            .div_by_monomial(&mi(&[1, 0]), &mi(&[1, 0]))
            .unwrap();
        for (m, k, c) in expect_base.term_triples() {
            let lifted_m = MultiIndex(vec![0, m.exponent(0)]);
            let lifted_k = MultiIndex(vec![0, k.exponent(0)]);
            if lifted_m.degree() <= reduced.holo_bound() && lifted_k.degree() <= reduced.anti_bound()
            {
                assert_eq!(
                    reduced.coeff(&lifted_m, &lifted_k).unwrap(),
                    c,
                    "coefficient at {m}|{k}"
                );
            }
        }
    }

    #[test]
    fn flat_cone_is_ricci_flat_and_flat_base_cone_is_not() {
        let cp = ConePotential::lift(&fs(1, 5), 1).unwrap();
        let report = ricci_flat_check(&cp.ambient_series().unwrap(), 3).unwrap();
        assert!(report.flat);
        assert!(report.first_obstruction.is_none());

        let flat_base = ConePotential::lift(&flat_potential(1, 5), 1).unwrap();
        let report2 = ricci_flat_check(&flat_base.ambient_series().unwrap(), 3).unwrap();
        assert!(!report2.flat);
        assert!(report2.first_obstruction.is_some());
    }

    #[test]
    fn bridge_agrees_on_models() {
        for n in 1..=2usize {
            let report = sasaki_einstein_bridge(&fs(n, 6), 1, 3).unwrap();
            assert!(report.consistent);
            assert!(report.base_is_einstein_target, "FS n={n}");
            assert!(report.cone_ricci_flat);
            assert_eq!(
                report.einstein_target,
                rational(2 * n as i64 + 2, 1)
            );
        }
        let hyp = sasaki_einstein_bridge(&hyperbolic(1, 6), 1, 3).unwrap();
        assert!(hyp.consistent);
        assert!(!hyp.base_is_einstein_target);
        assert!(!hyp.cone_ricci_flat);

        let flat = sasaki_einstein_bridge(&flat_potential(1, 6), 1, 3).unwrap();
        assert!(flat.consistent);
        assert!(!flat.base_is_einstein_target);
        assert!(!flat.cone_ricci_flat);
    }

    #[test]
    fn window_requirements_enforced() {
        assert!(matches!(
            metric_from_potential(&fs(1, 3), 3),
            Err(Error::InsufficientOrder { .. })
        ));
        assert!(matches!(
            ricci_report(&fs(1, 3), 3),
            Err(Error::InsufficientOrder { .. })
        ));
        assert!(matches!(
            sasaki_einstein_bridge(&fs(2, 4), 1, 3),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn degenerate_determinant_rejected() {
        // potential in 2 variables depending only on z1: det Hess = 0
        let phi = HermitianSeries::from_terms(2, 3, [(mi(&[1, 0]), mi(&[1, 0]), rat(1, 1))])
            .unwrap();
        assert!(matches!(
            ricci_flat_check(&phi, 2),
            Err(Error::DegenerateMetric { .. })
        ));
    }
}
