//! The acceptance battery: eight end-to-end criteria the tool must satisfy.
//!
//! Each criterion is an independent function returning a pass/fail outcome
//! with a one-line detail; `run_all` executes all eight. The same battery
//! backs the `selftest` subcommand and the acceptance test target, so a
//! regression fails in both places. Tolerances for the numeric criteria are
//! pinned here as constants; everything else is exact.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calabi::{
    calabi_matrix, diastasis_normalize, find_inducing_multiple, inducibility, InducibilityVerdict,
};
use crate::cone::ConePotential;
use crate::corpus::{standard_corpus, PotentialSpec};
use crate::curvature::{ricci_flat_check, ricci_report, sasaki_einstein_bridge};
use crate::error::{Error, Result};
use crate::oracle::{brute_expand, cross_check, OracleExpr, SamplePlan};
use crate::series::{Coefficient, HermitianSeries, MultiIndex};

/// Numeric tolerance for the finite-difference radial identity check.
const RADIAL_TOLERANCE: f64 = 1e-6;
/// Step used by the finite-difference stencils.
const RADIAL_STEP: f64 = 1e-4;
/// Numeric tolerance for oracle point evaluations.
const ORACLE_TOLERANCE: f64 = 1e-6;
/// Seed for the property battery; fixed so failures are reproducible.
const BATTERY_SEED: u64 = 0x5eed_cafe;
/// Cases per property family; five families make 1000 cases.
const BATTERY_CASES: usize = 200;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    /// One line suitable for terminal output.
    pub fn display_line(&self) -> String {
        format!(
            "criterion {}: {} ... {} ({})",
            self.index,
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(Error::Internal(format!($($arg)*)));
        }
    };
}

fn outcome(index: u32, name: &'static str, run: impl FnOnce() -> Result<String>) -> CriterionOutcome {
    match run() {
        Ok(detail) => CriterionOutcome {
            index,
            name,
            passed: true,
            detail,
        },
        Err(e) => CriterionOutcome {
            index,
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn coeff(n: i64, d: i64) -> Coefficient {
    Coefficient::from_ints(n, d)
}

/// Criterion 1: classical verdicts. Fubini-Study is consistent with the
/// known rank, the flat potential is consistent with full rank, and the
/// perturbed quartic is definitively rejected with the frozen witness.
pub fn criterion_1() -> CriterionOutcome {
    outcome(1, "classical_verdicts", || {
        let fs2 = PotentialSpec::parse("fs:2")?.realize(4)?;
        let r = inducibility(&fs2, 4)?;
        ensure!(
            matches!(
                r.verdict,
                InducibilityVerdict::ConsistentUpTo {
                    order: 4,
                    rank_lower_bound: 2
                }
            ),
            "fs:2 expected consistent with rank 2, got {:?}",
            r.verdict
        );

        let flat1 = PotentialSpec::parse("flat:1")?.realize(4)?;
        let rf = inducibility(&flat1, 4)?;
        ensure!(
            matches!(
                rf.verdict,
                InducibilityVerdict::ConsistentUpTo {
                    order: 4,
                    rank_lower_bound: 4
                }
            ),
            "flat:1 expected consistent with rank 4, got {:?}",
            rf.verdict
        );

        let pq = PotentialSpec::PerturbedQuartic.realize(3)?;
        let rp = inducibility(&pq, 3)?;
        match &rp.verdict {
            InducibilityVerdict::NotInduced { witness, value, .. } => {
                ensure!(
                    witness
                        == &vec![
                            Coefficient::zero(),
                            Coefficient::zero(),
                            Coefficient::zero(),
                            Coefficient::one()
                        ],
                    "perturbed quartic witness changed: {witness:?}"
                );
                ensure!(
                    value == &rat(-1, 12),
                    "perturbed quartic witness value changed: {value}"
                );
            }
            other => ensure!(false, "perturbed quartic expected rejection, got {other:?}"),
        }
        Ok("fs:2 rank 2, flat:1 rank 4, perturbed_quartic rejected at -1/12".to_string())
    })
}

/// Criterion 2: cone-base equivalence. Over the whole corpus, weights, and
/// orders, the cone verdict class equals the base verdict class of the
/// weighted potential.
pub fn criterion_2() -> CriterionOutcome {
    outcome(2, "cone_base_equivalence", || {
        let corpus = standard_corpus(6)?;
        let weights = [rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
        let orders = [3u32, 4, 5, 6];
        let mut cases = 0usize;
        let mut rejections = 0usize;
        for member in &corpus {
            for c in &weights {
                let scaled = member.potential.scalar_mul_rational(c);
                let cone = ConePotential::new(c.clone(), member.potential.clone())?;
                for &d in &orders {
                    let base_verdict = inducibility(&scaled, d)?.verdict;
                    let cone_verdict = cone.cone_inducibility(4, d)?.verdict;
                    ensure!(
                        base_verdict.is_consistent() == cone_verdict.is_consistent(),
                        "verdict mismatch for {} at weight {c}, order {d}",
                        member.name
                    );
                    if !base_verdict.is_consistent() {
                        rejections += 1;
                    }
                    cases += 1;
                }
            }
        }
        ensure!(rejections > 0, "battery never exercised a rejection");
        Ok(format!(
            "{cases} cases agree ({rejections} rejections, {} consistent)",
            cases - rejections
        ))
    })
}

/// Criterion 3: slice-family convergence. The recentered slice matrices
/// approach the weighted-exponential limit matrix monotonically in the
/// exact deviation as the slice position shrinks.
pub fn criterion_3() -> CriterionOutcome {
    outcome(3, "slice_family_convergence", || {
        let mut details = Vec::new();
        for name in ["fs:1", "flat:1", "hyperbolic:1"] {
            let psi = PotentialSpec::parse(name)?.realize(4)?;
            let cone = ConePotential::new(BigRational::one(), psi)?;
            let limit = cone.epsilon_limit_matrix(4)?;
            let mut last: Option<BigRational> = None;
            for eps in [rat(1, 10), rat(1, 100), rat(1, 1000)] {
                let sub = cone.epsilon_submatrix(&eps, 4)?;
                let dev = sub.max_abs_sq_deviation(&limit)?;
                ensure!(dev.is_positive(), "{name}: deviation vanished at eps={eps}");
                if let Some(prev) = &last {
                    ensure!(
                        &dev < prev,
                        "{name}: deviation not strictly decreasing at eps={eps}"
                    );
                }
                last = Some(dev);
            }
            details.push(format!("{name} final dev {}", last.unwrap()));
        }
        Ok(details.join("; "))
    })
}

/// Criterion 4: radial derivative identity. The exact slice family matches
/// a finite-difference second Wirtinger derivative of the ambient cone
/// potential at rational off-axis points.
pub fn criterion_4() -> CriterionOutcome {
    outcome(4, "radial_derivative_identity", || {
        let configs: [(&str, BigRational, BigRational); 3] = [
            ("fs:1", rat(1, 1), rat(1, 2)),
            ("flat:1", rat(2, 1), rat(1, 3)),
            ("hyperbolic:1", rat(1, 1), rat(1, 2)),
        ];
        let mut worst: f64 = 0.0;
        for (name, c, eps) in configs {
            let psi = PotentialSpec::parse(name)?.realize(6)?;
            let cone = ConePotential::new(c.clone(), psi)?;
            let points = vec![
                vec![Coefficient::from_complex_ints(1, 8, 0, 1)],
                vec![Coefficient::from_complex_ints(-1, 10, 3, 20)],
                vec![Coefficient::from_complex_ints(1, 5, -1, 10)],
            ];
            let plan = SamplePlan::new(points, RADIAL_STEP, RADIAL_TOLERANCE, 0.25)?;
            let report = cone.verify_radial_derivative_identity(&eps, &plan)?;
            ensure!(
                report.max_rel_error <= RADIAL_TOLERANCE,
                "{name}: max relative error {} above tolerance",
                report.max_rel_error
            );
            worst = worst.max(report.max_rel_error);
        }
        Ok(format!(
            "3 configurations within {RADIAL_TOLERANCE:.0e}; worst relative error {worst:.2e}"
        ))
    })
}

/// Criterion 5: Einstein constants of the model metrics come out exactly.
pub fn criterion_5() -> CriterionOutcome {
    outcome(5, "einstein_constants", || {
        for n in 1..=3usize {
            let fs = PotentialSpec::parse(&format!("fs:{n}"))?.realize(5)?;
            let r = ricci_report(&fs, 4)?;
            let expect = BigRational::from_integer((2 * n as i64 + 2).into());
            ensure!(
                r.einstein && r.lambda == Some(expect.clone()),
                "fs:{n} expected Einstein constant {expect}, got {:?}",
                r.lambda
            );
        }
        let hyp = ricci_report(&PotentialSpec::parse("hyperbolic:1")?.realize(5)?, 4)?;
        ensure!(
            hyp.einstein && hyp.lambda == Some(rat(-4, 1)),
            "hyperbolic:1 expected Einstein constant -4, got {:?}",
            hyp.lambda
        );
        let flat = ricci_report(&PotentialSpec::parse("flat:2")?.realize(5)?, 4)?;
        ensure!(
            flat.einstein && flat.lambda == Some(BigRational::zero()),
            "flat:2 expected vanishing Einstein constant, got {:?}",
            flat.lambda
        );
        let pq = ricci_report(&PotentialSpec::PerturbedQuartic.realize(5)?, 4)?;
        ensure!(
            !pq.einstein,
            "perturbed_quartic must not be Einstein on the window"
        );
        Ok("fs:1..3 give 4, 6, 8; hyperbolic -4; flat 0; quartic rejected".to_string())
    })
}

/// Criterion 6: cones over the round models are Ricci-flat, consistent for
/// the criterion, and flat by explicit rescaling witness; a negative-curved
/// base yields none of the three.
pub fn criterion_6() -> CriterionOutcome {
    outcome(6, "ricci_flat_cones", || {
        for n in 1..=3usize {
            let psi = PotentialSpec::parse(&format!("fs:{n}"))?.realize(4 + n as u32)?;
            let cone = ConePotential::lift(&psi, 1)?;
            let flat_report = ricci_flat_check(&cone.ambient_series()?, 4)?;
            ensure!(flat_report.flat, "fs:{n} cone is not Ricci-flat");
            let verdict = cone.cone_inducibility(3, 4)?.verdict;
            ensure!(verdict.is_consistent(), "fs:{n} cone criterion failed");
            let witness = cone.flatness_witness()?;
            ensure!(witness.is_flat, "fs:{n} cone flatness witness missing");
        }
        let hyp = PotentialSpec::parse("hyperbolic:1")?.realize(5)?;
        let cone = ConePotential::lift(&hyp, 1)?;
        let flat_report = ricci_flat_check(&cone.ambient_series()?, 4)?;
        ensure!(!flat_report.flat, "hyperbolic cone must not be Ricci-flat");
        ensure!(
            flat_report.first_obstruction.is_some(),
            "missing obstruction term"
        );
        let witness = cone.flatness_witness()?;
        ensure!(!witness.is_flat, "hyperbolic cone must not be flat");

        let bridge_ok = sasaki_einstein_bridge(
            &PotentialSpec::parse("fs:2")?.realize(6)?,
            1,
            3,
        )?;
        ensure!(
            bridge_ok.consistent && bridge_ok.base_is_einstein_target,
            "fs:2 bridge inconsistent"
        );
        let bridge_neg = sasaki_einstein_bridge(&hyp, 1, 3)?;
        ensure!(
            bridge_neg.consistent && !bridge_neg.base_is_einstein_target,
            "hyperbolic bridge inconsistent"
        );
        Ok("fs:1..3 cones Ricci-flat, consistent, flat by witness; hyperbolic control fails all; bridges agree".to_string())
    })
}

/// Criterion 7: homotheties change the verdict. The half Fubini-Study
/// potential needs multiple 2, and scaling the cone weight by 2 turns the
/// rejected cone into a consistent one.
pub fn criterion_7() -> CriterionOutcome {
    outcome(7, "homothety_multiples", || {
        let half_fs = PotentialSpec::parse("fs:1:1/2")?.realize(4)?;
        let search = find_inducing_multiple(&half_fs, 4, 4)?;
        ensure!(
            search.minimal == Some(2),
            "fs:1:1/2 expected minimal multiple 2, got {:?}",
            search.minimal
        );
        ensure!(
            search.attempts.len() == 2 && !search.attempts[0].verdict.is_consistent(),
            "multiple scan shape changed"
        );

        let fs1 = PotentialSpec::parse("fs:1")?.realize(4)?;
        let cone = ConePotential::new(rat(1, 2), fs1)?;
        let before = cone.cone_inducibility(3, 4)?.verdict;
        ensure!(!before.is_consistent(), "weight 1/2 cone unexpectedly passed");
        let after = cone
            .homothety(&rat(2, 1))?
            .cone_inducibility(3, 4)?
            .verdict;
        ensure!(after.is_consistent(), "weight 1 cone unexpectedly failed");
        Ok("minimal multiple 2 found; homothety by 2 flips the cone verdict".to_string())
    })
}

fn random_rational(rng: &mut ChaCha8Rng, max_abs_numer: i64, max_denom: i64) -> BigRational {
    let numer = rng.gen_range(-max_abs_numer..=max_abs_numer);
    let denom = rng.gen_range(1..=max_denom);
    rat(numer, denom)
}

fn random_positive_rational(rng: &mut ChaCha8Rng, max_numer: i64, max_denom: i64) -> BigRational {
    rat(rng.gen_range(1..=max_numer), rng.gen_range(1..=max_denom))
}

/// Certificate discipline for one analysis: a consistent verdict must carry
/// a certificate that reconstructs the criterion matrix exactly; a
/// rejection's witness must evaluate to its negative value exactly.
fn verify_analysis(potential: &HermitianSeries, order: u32) -> Result<bool> {
    let report = inducibility(potential, order)?;
    let matrix = calabi_matrix(&diastasis_normalize(potential), order)?;
    match &report.verdict {
        InducibilityVerdict::ConsistentUpTo { .. } => {
            let cert = report
                .certificate
                .as_ref()
                .ok_or_else(|| Error::Internal("consistent verdict without certificate".into()))?;
            let rebuilt = cert.reconstruct(matrix.dim());
            let dev = matrix.matrix().max_abs_sq_deviation(&rebuilt)?;
            ensure!(dev.is_zero(), "certificate does not reconstruct the matrix");
            Ok(true)
        }
        InducibilityVerdict::NotInduced { witness, value, .. } => {
            let form = matrix.matrix().quadratic_form(witness)?;
            ensure!(
                form.is_real() && &form.re == value && value.is_negative(),
                "witness value mismatch: form {form}, reported {value}"
            );
            Ok(false)
        }
    }
}

fn battery_diagonal_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let mut terms = vec![(MultiIndex(vec![1]), MultiIndex(vec![1]), coeff(1, 1))];
    for k in 2..=4u32 {
        let a = random_rational(rng, 3, 6);
        if !a.is_zero() {
            terms.push((
                MultiIndex(vec![k]),
                MultiIndex(vec![k]),
                Coefficient::from_rational(a),
            ));
        }
    }
    let phi = HermitianSeries::from_terms(1, 4, terms)?;
    verify_analysis(&phi, 4)?;
    Ok(())
}

fn battery_hermitian_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let mut terms = vec![
        (MultiIndex(vec![1, 0]), MultiIndex(vec![1, 0]), coeff(1, 1)),
        (MultiIndex(vec![0, 1]), MultiIndex(vec![0, 1]), coeff(1, 1)),
    ];
    let push_pair = |m: &[u32], k: &[u32], c: Coefficient, terms: &mut Vec<_>| {
        if !c.is_zero() {
            terms.push((MultiIndex(m.to_vec()), MultiIndex(k.to_vec()), c.clone()));
            terms.push((MultiIndex(k.to_vec()), MultiIndex(m.to_vec()), c.conj()));
        }
    };
    // off-diagonal quadratic coupling, kept strictly inside the unit disc:
    // (p + qi)/8 with |p|, |q| <= 3 has modulus at most sqrt(18)/8 < 1
    let a = Coefficient::new(
        rat(rng.gen_range(-3..=3), 8),
        rat(rng.gen_range(-3..=3), 8),
    );
    push_pair(&[1, 0], &[0, 1], a, &mut terms);
    let b = Coefficient::new(random_rational(rng, 2, 6), random_rational(rng, 2, 6));
    push_pair(&[2, 0], &[1, 1], b, &mut terms);
    let c0 = random_rational(rng, 3, 6);
    if !c0.is_zero() {
        terms.push((
            MultiIndex(vec![1, 1]),
            MultiIndex(vec![1, 1]),
            Coefficient::from_rational(c0),
        ));
    }
    // quadratic block [[1, a], [conj a, 1]] is positive definite since |a| < 1
    let phi = HermitianSeries::from_terms(2, 3, terms)?;
    verify_analysis(&phi, 3)?;
    Ok(())
}

fn battery_homothety_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let c = random_positive_rational(rng, 5, 5);
    let f = random_positive_rational(rng, 5, 5);
    let psi = PotentialSpec::parse("fs:1")?.realize(4)?;
    let composed = ConePotential::new(c.clone(), psi.clone())?.homothety(&f)?;
    let direct = ConePotential::new(&c * &f, psi)?;
    ensure!(
        composed.weight() == direct.weight(),
        "homothety weight mismatch"
    );
    ensure!(
        composed.exp_cache().same_germ(direct.exp_cache()),
        "homothety cache mismatch for c={c}, f={f}"
    );
    Ok(())
}

fn battery_oracle_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let q = random_positive_rational(rng, 4, 4);
    let qf = q.to_f64().expect("small rational");
    let family = rng.gen_range(0..3u32);
    let (series, vars, radius): (HermitianSeries, usize, f64) = match family {
        0 => (
            PotentialSpec::FubiniStudy {
                vars: 1,
                scale: q.clone(),
            }
            .realize(12)?,
            1,
            0.5,
        ),
        1 => (
            PotentialSpec::Hyperbolic {
                vars: 1,
                scale: q.clone(),
            }
            .realize(12)?,
            1,
            0.5,
        ),
        _ => (
            PotentialSpec::FubiniStudy {
                vars: 2,
                scale: q.clone(),
            }
            .realize(8)?,
            2,
            0.25,
        ),
    };
    let denom: i64 = if vars == 1 { 16 } else { 32 };
    let range: i64 = if vars == 1 { 4 } else { 3 };
    let mut points = Vec::new();
    for _ in 0..2 {
        let point: Vec<Coefficient> = (0..vars)
            .map(|_| {
                Coefficient::new(
                    rat(rng.gen_range(-range..=range), denom),
                    rat(rng.gen_range(-range..=range), denom),
                )
            })
            .collect();
        points.push(point);
    }
    let plan = SamplePlan::new(points, radius * 1e-4, ORACLE_TOLERANCE, radius)?;
    let reference = move |z: &[Complex64]| -> Complex64 {
        let u: f64 = z.iter().map(|w| w.norm_sqr()).sum();
        match family {
            0 | 2 => Complex64::new(qf * (1.0 + u).ln(), 0.0),
            _ => Complex64::new(-qf * (1.0 - u).ln(), 0.0),
        }
    };
    let report = cross_check(series.as_mixed(), &reference, &plan)?;
    ensure!(
        report.pass,
        "oracle cross-check failed: max relative error {}",
        report.max_rel_error
    );
    Ok(())
}

fn battery_brute_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let a = random_rational(rng, 3, 4);
    let b = random_rational(rng, 3, 4);
    let u_terms = vec![(MultiIndex(vec![1]), MultiIndex(vec![1]), coeff(1, 1))];
    let expr = OracleExpr::Product(vec![
        OracleExpr::Exp(Box::new(OracleExpr::Scale(
            a.clone(),
            Box::new(OracleExpr::Terms(u_terms.clone())),
        ))),
        OracleExpr::Exp(Box::new(OracleExpr::Scale(
            b.clone(),
            Box::new(OracleExpr::Terms(u_terms.clone())),
        ))),
    ]);
    let brute = brute_expand(&expr, 1, 6)?;
    let u = HermitianSeries::from_terms(1, 6, u_terms)?;
    let kernel =
        HermitianSeries::try_new(u.as_mixed().scalar_mul_rational(&(&a + &b)).exp()?)?;
    ensure!(
        brute.same_germ(&kernel),
        "brute expansion e^(au) e^(bu) disagrees with kernel e^((a+b)u) for a={a}, b={b}"
    );
    Ok(())
}

/// Criterion 8: the seeded property battery. Five families, two hundred
/// cases each; every case must hold.
pub fn criterion_8() -> CriterionOutcome {
    outcome(8, "seeded_property_battery", || {
        let mut rng = ChaCha8Rng::seed_from_u64(BATTERY_SEED);
        let families: [(&str, fn(&mut ChaCha8Rng) -> Result<()>); 5] = [
            ("diagonal-analysis", battery_diagonal_case),
            ("hermitian-analysis", battery_hermitian_case),
            ("homothety-composition", battery_homothety_case),
            ("oracle-cross-check", battery_oracle_case),
            ("brute-expansion", battery_brute_case),
        ];
        let mut total = 0usize;
        for (name, family) in families {
            for case in 0..BATTERY_CASES {
                family(&mut rng).map_err(|e| {
                    Error::Internal(format!("family {name}, case {case}: {e}"))
                })?;
                total += 1;
            }
        }
        Ok(format!("{total}/1000 seeded cases passed"))
    })
}

/// Run the whole battery in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        for c in [criterion_1(), criterion_3(), criterion_5(), criterion_7()] {
            assert!(c.passed, "{}", c.display_line());
        }
    }

    #[test]
    fn display_line_shape() {
        let c = CriterionOutcome {
            index: 9,
            name: "sample",
            passed: false,
            detail: "broken".to_string(),
        };
        assert_eq!(c.display_line(), "criterion 9: sample ... FAIL (broken)");
    }
}
