//! Independent numeric and symbolic cross-checks.
//!
//! Two deliberately separate implementations live here so that the exact
//! kernel can be tested against something that shares none of its code
//! paths:
//!
//! - finite-difference Wirtinger derivatives of black-box `C^n -> C`
//!   functions (nested central differences), and
//! - a brute-force expander for closed-form expressions over a naive flat
//!   term list, with its own multiplication, exponential, and logarithm
//!   loops.
//!
//! Both honour the same two-sided truncation window as the kernel, so
//! agreement is expected bit-for-bit on the symbolic side and to a stated
//! tolerance on the numeric side. Floating point lives only here and in
//! `evaluate`; nothing feeds back into certification.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{Coefficient, HermitianSeries, MixedSeries, MultiIndex};

// ---------------------------------------------------------------------------
// sample plans

/// A validated set of sample points for numeric comparison.
#[derive(Debug, Clone)]
pub struct SamplePlan {
    points: Vec<Vec<Coefficient>>,
    step: f64,
    tolerance: f64,
    radius: f64,
}

impl SamplePlan {
    /// Points must be nonempty, lie inside the stated radius (Euclidean
    /// norm), and the finite-difference step must be positive and at most
    /// `radius / 1000` so the difference stencil stays well inside the
    /// region where the series converges.
    pub fn new(
        points: Vec<Vec<Coefficient>>,
        step: f64,
        tolerance: f64,
        radius: f64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSamplePlan("no sample points".to_string()));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidSamplePlan(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if !(step > 0.0) || step > radius * 1e-3 {
            return Err(Error::InvalidSamplePlan(format!(
                "step {step} outside (0, radius/1000 = {}]",
                radius * 1e-3
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidSamplePlan(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        let arity = points[0].len();
        for p in &points {
            if p.len() != arity {
                return Err(Error::InvalidSamplePlan(format!(
                    "point arity mismatch: {} vs {}",
                    p.len(),
                    arity
                )));
            }
            let norm_sq: f64 = p.iter().map(|c| c.to_complex64().norm_sqr()).sum();
            if norm_sq.sqrt() > radius {
                return Err(Error::InvalidSamplePlan(format!(
                    "point norm {} exceeds radius {radius}",
                    norm_sq.sqrt()
                )));
            }
        }
        Ok(SamplePlan {
            points,
            step,
            tolerance,
            radius,
        })
    }

    pub fn points(&self) -> &[Vec<Coefficient>] {
        &self.points
    }

    pub fn points_complex(&self) -> Vec<Vec<Complex64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(Coefficient::to_complex64).collect())
            .collect()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

// ---------------------------------------------------------------------------
// finite-difference Wirtinger derivatives

/// First Wirtinger derivative by central differences:
/// `d/dz = (d/dx - i d/dy)/2`, or the conjugate version with `+ i`.
pub fn fd_wirtinger_first<F>(
    f: &F,
    point: &[Complex64],
    var: usize,
    conjugate: bool,
    h: f64,
) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let mut p = point.to_vec();
    let base = p[var];
    let eval = |p: &mut Vec<Complex64>, dz: Complex64| {
        p[var] = base + dz;
        f(p)
    };
    let dx = (eval(&mut p, Complex64::new(h, 0.0)) - eval(&mut p, Complex64::new(-h, 0.0)))
        / (2.0 * h);
    let dy = (eval(&mut p, Complex64::new(0.0, h)) - eval(&mut p, Complex64::new(0.0, -h)))
        / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    if conjugate {
        (dx + i * dy) * 0.5
    } else {
        (dx - i * dy) * 0.5
    }
}

/// Mixed second derivative `d^2/(dz_i dzbar_j)` by nesting the first
/// derivative stencil (sixteen evaluations of `f`).
pub fn fd_mixed_second<F>(
    f: &F,
    point: &[Complex64],
    var_i: usize,
    var_j: usize,
    h: f64,
) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let inner = |q: &[Complex64]| fd_wirtinger_first(f, q, var_i, false, h);
    fd_wirtinger_first(&inner, point, var_j, true, h)
}

// ---------------------------------------------------------------------------
// brute-force symbolic expansion

/// Closed-form expression tree for the brute expander.
#[derive(Debug, Clone)]
pub enum OracleExpr {
    /// Explicit `z^m zbar^k` terms.
    Terms(Vec<(MultiIndex, MultiIndex, Coefficient)>),
    Constant(Coefficient),
    Sum(Vec<OracleExpr>),
    Product(Vec<OracleExpr>),
    Scale(BigRational, Box<OracleExpr>),
    Exp(Box<OracleExpr>),
    Log(Box<OracleExpr>),
    IntPow(Box<OracleExpr>, u32),
}

const ORACLE_MAX_NODES: usize = 10_000;
const ORACLE_MAX_TERMS: usize = 2_000_000;

/// Naive flat term list: exponent-vector keys, no ranking, no sharing with
/// the kernel's sparse map. Only the window rule is common, by design.
#[derive(Debug, Clone)]
struct BrutePoly {
    terms: Vec<(Vec<u32>, Vec<u32>, Coefficient)>,
}

impl BrutePoly {
    fn constant(c: Coefficient, vars: usize) -> Self {
        if c.is_zero() {
            BrutePoly { terms: Vec::new() }
        } else {
            BrutePoly {
                terms: vec![(vec![0; vars], vec![0; vars], c)],
            }
        }
    }

    fn normalize(mut self) -> Result<Self> {
        self.terms
            .sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        let mut out: Vec<(Vec<u32>, Vec<u32>, Coefficient)> = Vec::new();
        for (m, k, c) in self.terms {
            match out.last_mut() {
                Some((lm, lk, lc)) if *lm == m && *lk == k => {
                    *lc = &*lc + &c;
                }
                _ => out.push((m, k, c)),
            }
        }
        out.retain(|(_, _, c)| !c.is_zero());
        if out.len() > ORACLE_MAX_TERMS {
            return Err(Error::OracleLimit(format!(
                "term list grew to {}",
                out.len()
            )));
        }
        Ok(BrutePoly { terms: out })
    }

    fn add(mut self, other: BrutePoly) -> Result<Self> {
        self.terms.extend(other.terms);
        self.normalize()
    }

    fn scale(mut self, r: &Coefficient) -> Self {
        if r.is_zero() {
            return BrutePoly { terms: Vec::new() };
        }
        for (_, _, c) in &mut self.terms {
            *c = &*c * r;
        }
        self
    }

    fn mul(&self, other: &BrutePoly, d: u32) -> Result<Self> {
        let mut terms = Vec::new();
        for (m1, k1, c1) in &self.terms {
            for (m2, k2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let k: Vec<u32> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                if m.iter().sum::<u32>() > d || k.iter().sum::<u32>() > d {
                    continue;
                }
                terms.push((m, k, c1 * c2));
            }
            if terms.len() > ORACLE_MAX_TERMS {
                return Err(Error::OracleLimit(format!(
                    "product term list grew past {ORACLE_MAX_TERMS}"
                )));
            }
        }
        BrutePoly { terms }.normalize()
    }

    fn constant_term(&self) -> Coefficient {
        self.terms
            .iter()
            .find(|(m, k, _)| m.iter().all(|&e| e == 0) && k.iter().all(|&e| e == 0))
            .map(|(_, _, c)| c.clone())
            .unwrap_or_default()
    }

    fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn brute_eval(expr: &OracleExpr, vars: usize, d: u32, nodes: &mut usize) -> Result<BrutePoly> {
    *nodes += 1;
    if *nodes > ORACLE_MAX_NODES {
        return Err(Error::OracleLimit(format!(
            "expression has more than {ORACLE_MAX_NODES} nodes"
        )));
    }
    match expr {
        OracleExpr::Terms(list) => {
            let mut terms = Vec::new();
            for (m, k, c) in list {
                if m.len() != vars || k.len() != vars {
                    return Err(Error::IndexLength {
                        expected: vars,
                        got: if m.len() != vars { m.len() } else { k.len() },
                    });
                }
                if m.degree() > d || k.degree() > d {
                    continue;
                }
                terms.push((m.0.clone(), k.0.clone(), c.clone()));
            }
            BrutePoly { terms }.normalize()
        }
        OracleExpr::Constant(c) => Ok(BrutePoly::constant(c.clone(), vars)),
        OracleExpr::Sum(parts) => {
            let mut acc = BrutePoly::constant(Coefficient::zero(), vars);
            for p in parts {
                acc = acc.add(brute_eval(p, vars, d, nodes)?)?;
            }
            Ok(acc)
        }
        OracleExpr::Product(parts) => {
            let mut acc = BrutePoly::constant(Coefficient::one(), vars);
            for p in parts {
                acc = acc.mul(&brute_eval(p, vars, d, nodes)?, d)?;
            }
            Ok(acc)
        }
        OracleExpr::Scale(r, inner) => Ok(brute_eval(inner, vars, d, nodes)?
            .scale(&Coefficient::from_rational(r.clone()))),
        OracleExpr::Exp(inner) => {
            let base = brute_eval(inner, vars, d, nodes)?;
            if !base.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            let mut acc = BrutePoly::constant(Coefficient::one(), vars);
            let mut power = BrutePoly::constant(Coefficient::one(), vars);
            let mut factorial = BigRational::one();
            for k in 1..=(2 * d + 1) {
                power = power.mul(&base, d)?;
                if power.is_empty() {
                    break;
                }
                factorial *= BigRational::from_integer(k.into());
                acc = acc.add(
                    power
                        .clone()
                        .scale(&Coefficient::from_rational(factorial.recip())),
                )?;
            }
            Ok(acc)
        }
        OracleExpr::Log(inner) => {
            let base = brute_eval(inner, vars, d, nodes)?;
            if !base.constant_term().is_one() {
                return Err(Error::ConstantTermNotOne {
                    found: base.constant_term().to_string(),
                });
            }
            let shifted = base.add(BrutePoly::constant(-&Coefficient::one(), vars))?;
            let mut acc = BrutePoly::constant(Coefficient::zero(), vars);
            let mut power = BrutePoly::constant(Coefficient::one(), vars);
            for k in 1..=(2 * d + 1) {
                power = power.mul(&shifted, d)?;
                if power.is_empty() {
                    break;
                }
                let sign = if k % 2 == 1 { 1i64 } else { -1 };
                let factor = BigRational::new(sign.into(), i64::from(k).into());
                acc = acc.add(power.clone().scale(&Coefficient::from_rational(factor)))?;
            }
            Ok(acc)
        }
        OracleExpr::IntPow(inner, e) => {
            let base = brute_eval(inner, vars, d, nodes)?;
            let mut acc = BrutePoly::constant(Coefficient::one(), vars);
            for _ in 0..*e {
                acc = acc.mul(&base, d)?;
            }
            Ok(acc)
        }
    }
}

/// Expand a closed-form expression to a Hermitian series on the two-sided
/// window of order `d`, using arithmetic independent of the kernel.
pub fn brute_expand(expr: &OracleExpr, vars: usize, d: u32) -> Result<HermitianSeries> {
    let mut nodes = 0usize;
    let poly = brute_eval(expr, vars, d, &mut nodes)?;
    let triples = poly
        .terms
        .into_iter()
        .map(|(m, k, c)| (MultiIndex(m), MultiIndex(k), c));
    HermitianSeries::try_new(MixedSeries::from_terms(vars, d, d, triples)?)
}

// ---------------------------------------------------------------------------
// numeric cross-checks

#[derive(Debug, Clone)]
pub struct PointCheck {
    pub point: Vec<Complex64>,
    pub series_value: Complex64,
    pub reference_value: Complex64,
    pub rel_error: f64,
}

#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub per_point: Vec<PointCheck>,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Relative error with an absolute floor so near-zero references do not
/// blow up the quotient.
pub fn relative_error(got: Complex64, reference: Complex64) -> f64 {
    (got - reference).norm() / reference.norm().max(1e-9)
}

/// Evaluate `series` at each plan point and compare against the reference
/// function. A failed comparison is a reported outcome, not an error.
pub fn cross_check<F>(series: &MixedSeries, reference: &F, plan: &SamplePlan) -> Result<CrossCheckReport>
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let mut per_point = Vec::with_capacity(plan.points.len());
    let mut max_rel: f64 = 0.0;
    for p in plan.points_complex() {
        let series_value = series.evaluate(&p)?;
        let reference_value = reference(&p);
        let rel_error = relative_error(series_value, reference_value);
        max_rel = max_rel.max(rel_error);
        per_point.push(PointCheck {
            point: p,
            series_value,
            reference_value,
            rel_error,
        });
    }
    Ok(CrossCheckReport {
        per_point,
        max_rel_error: max_rel,
        tolerance: plan.tolerance,
        pass: max_rel <= plan.tolerance,
    })
}
