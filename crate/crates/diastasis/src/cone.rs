//! Cone lifts, homotheties, radial blocks, and the slice family of
//! submatrices.
//!
//! A cone potential is `|z0|^(2c) * exp(c * psi)` over a normalized base
//! potential `psi` in the remaining variables, stored as the pair
//! `(weight c, psi)` so fractional weights stay exact. The criterion matrix
//! of the cone, organized by powers of the apex variable, is block diagonal
//! with radial blocks `B_k = (1/k!) * [coefficients of exp(k c psi)]`
//! (including the `(0,0)` entry `1/k!`), so cone inducibility reduces to a
//! finite sweep of base-variable matrices.
//!
//! Invariants:
//! - the base is diastasis-normalized (no pure terms); positivity of the
//!   base metric is deliberately not required, so degenerate bases such as
//!   `psi = 0` remain expressible,
//! - `exp(c * psi)` is cached on the base window and reused everywhere,
//! - the slice-family matrix uses the exact value of `epsilon^(2c)`; when
//!   that power is irrational the construction refuses rather than rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive};

use crate::calabi::matrix::{coefficient_matrix, first_pure_term, DenseHermitian};
use crate::calabi::psd::{psd_factorize, PsdOutcome};
use crate::error::{Error, Result};
use crate::oracle::{fd_mixed_second, relative_error, PointCheck, SamplePlan};
use crate::series::{
    laurent_substitute_hermitian, Coefficient, GradedOrder, HermitianSeries, MultiIndex,
};

/// `base ^ exponent` as an exact rational, or [`Error::IrrationalPower`].
pub fn rational_power(base: &BigRational, exponent: &BigRational) -> Result<BigRational> {
    if !base.is_positive() {
        return Err(Error::non_positive("power base", base));
    }
    let numer = exponent
        .numer()
        .to_i32()
        .ok_or_else(|| Error::Internal("power exponent numerator out of range".into()))?;
    let denom = exponent
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Internal("power exponent denominator out of range".into()))?;
    let powered: BigRational = Pow::pow(base.clone(), numer);
    if denom == 1 {
        return Ok(powered);
    }
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = v.nth_root(denom);
        if Pow::pow(&r, denom as usize) == *v {
            Some(r)
        } else {
            None
        }
    };
    match (root(powered.numer()), root(powered.denom())) {
        (Some(n), Some(d)) => Ok(BigRational::new(n, d)),
        _ => Err(Error::IrrationalPower {
            epsilon: base.to_string(),
            weight: exponent.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePotential {
    weight: BigRational,
    base: HermitianSeries,
    /// `exp(weight * base)` on the base window.
    exp_cache: HermitianSeries,
}

impl ConePotential {
    /// Build `|z0|^(2c) exp(c psi)` from a positive weight and a normalized
    /// base potential.
    pub fn new(weight: BigRational, base: HermitianSeries) -> Result<Self> {
        if !weight.is_positive() {
            return Err(Error::non_positive("cone weight", &weight));
        }
        if let Some((m, k)) = first_pure_term(&base) {
            return Err(Error::NotNormalized {
                j: m.to_string(),
                k: k.to_string(),
            });
        }
        let exp_cache = base.scalar_mul_rational(&weight).exp()?;
        Ok(ConePotential {
            weight,
            base,
            exp_cache,
        })
    }

    /// The lift with parameter `a >= 1`: weight `c = 1/a`.
    pub fn lift(base: &HermitianSeries, a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::NonPositive {
                what: "lift parameter".to_string(),
                got: "0".to_string(),
            });
        }
        ConePotential::new(BigRational::new(1.into(), a.into()), base.clone())
    }

    /// Scale the cone exponent: weight `c -> c * factor`.
    pub fn homothety(&self, factor: &BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::non_positive("homothety factor", factor));
        }
        ConePotential::new(&self.weight * factor, self.base.clone())
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    pub fn base(&self) -> &HermitianSeries {
        &self.base
    }

    pub fn base_vars(&self) -> usize {
        self.base.vars()
    }

    pub fn exp_cache(&self) -> &HermitianSeries {
        &self.exp_cache
    }

    /// The ambient potential `|z0|^(2c) exp(c psi)` as a series in
    /// `1 + base_vars` variables (apex variable first). Requires an integer
    /// weight; a fractional power of `|z0|` is not a power series.
    pub fn ambient_series(&self) -> Result<HermitianSeries> {
        if !self.weight.is_integer() {
            return Err(Error::FractionalWeight {
                weight: self.weight.to_string(),
            });
        }
        let c = self
            .weight
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::Internal("cone weight out of range".into()))?;
        let vars = self.base_vars() + 1;
        let embedded = self.exp_cache.embed(vars, 1)?;
        let apex = MultiIndex(
            std::iter::once(c)
                .chain(std::iter::repeat(0).take(self.base_vars()))
                .collect(),
        );
        HermitianSeries::try_new(embedded.as_mixed().mul_by_monomial(&apex, &apex)?)
    }

    /// Radial blocks `B_k = (1/k!) [coefficients of exp(k c psi)]` for
    /// `k = 1..=max_block`, each over base monomials of degree `<= order`.
    pub fn radial_blocks(&self, max_block: u32, order: u32) -> Result<Vec<RadialBlock>> {
        if max_block == 0 {
            return Err(Error::NonPositive {
                what: "block count".to_string(),
                got: "0".to_string(),
            });
        }
        let mut blocks = Vec::with_capacity(max_block as usize);
        let mut power = self.exp_cache.clone();
        let mut factorial = BigRational::one();
        for k in 1..=max_block {
            factorial *= BigRational::from_integer(k.into());
            let scaled = power.scalar_mul_rational(&factorial.recip());
            blocks.push(RadialBlock {
                block: k,
                matrix: coefficient_matrix(&scaled, order)?,
            });
            if k < max_block {
                power = power.mul(&self.exp_cache)?;
            }
        }
        Ok(blocks)
    }

    /// Sweep the radial blocks for the truncated cone criterion.
    pub fn cone_inducibility(&self, max_block: u32, order: u32) -> Result<ConeInducibilityReport> {
        let blocks = self.radial_blocks(max_block, order)?;
        let mut summaries = Vec::with_capacity(blocks.len());
        let mut total_rank = 0usize;
        for b in blocks {
            match psd_factorize(&b.matrix)? {
                PsdOutcome::Psd { rank, .. } => {
                    total_rank += rank;
                    summaries.push(BlockSummary {
                        block: b.block,
                        dim: b.matrix.dim(),
                        rank: Some(rank),
                    });
                }
                PsdOutcome::NotPsd { witness, value } => {
                    summaries.push(BlockSummary {
                        block: b.block,
                        dim: b.matrix.dim(),
                        rank: None,
                    });
                    return Ok(ConeInducibilityReport {
                        verdict: ConeVerdict::NotInduced {
                            order,
                            block: b.block,
                            witness,
                            value,
                        },
                        blocks: summaries,
                    });
                }
            }
        }
        Ok(ConeInducibilityReport {
            verdict: ConeVerdict::ConsistentUpTo {
                order,
                rank_lower_bound: total_rank,
            },
            blocks: summaries,
        })
    }

    /// Series `F` whose coefficient matrix is the slice-family member at
    /// `t = epsilon^(2c)`:
    /// `F = exp(t (E - 1)) * (t (E - 1)^2 + E)` with `E = exp(c psi)`.
    /// Up to the positive factor `c^2 t / epsilon^2` this is the
    /// apex-direction second-derivative block of `exp(diastasis)` along the
    /// slice through `(epsilon, 0)`.
    fn slice_series(&self, t: &BigRational) -> Result<HermitianSeries> {
        let d = self.base.order_bound();
        let one = HermitianSeries::constant_real(self.base_vars(), d, BigRational::one());
        let e_minus_1 = self.exp_cache.sub(&one)?;
        let diastasis = e_minus_1.scalar_mul_rational(t);
        let exp_diastasis = diastasis.exp()?;
        let bracket = e_minus_1
            .mul(&e_minus_1)?
            .scalar_mul_rational(t)
            .add(&self.exp_cache)?;
        exp_diastasis.mul(&bracket)
    }

    /// Member of the slice family of submatrices at radial position
    /// `epsilon`. Exact: requires `epsilon^(2c)` to be rational.
    pub fn epsilon_submatrix(&self, epsilon: &BigRational, order: u32) -> Result<DenseHermitian> {
        if !epsilon.is_positive() {
            return Err(Error::non_positive("epsilon", epsilon));
        }
        let two_c = &self.weight * BigRational::from_integer(2.into());
        let t = rational_power(epsilon, &two_c)?;
        coefficient_matrix(&self.slice_series(&t)?, order)
    }

    /// The `epsilon -> 0` limit of the slice family: the coefficient matrix
    /// of `exp(c psi)` itself (constant entry 1 included).
    pub fn epsilon_limit_matrix(&self, order: u32) -> Result<DenseHermitian> {
        coefficient_matrix(&self.exp_cache, order)
    }

    /// Numerically confirm that the slice-family series really is the
    /// apex-direction second derivative of `exp(diastasis)`: compare
    /// `c^2 epsilon^(2c-2) F(z)` against a finite-difference
    /// `d^2/(dz0 dz0bar) exp(D((z0, z), (epsilon, 0)))` at `z0 = epsilon`
    /// for every plan point `z`.
    pub fn verify_radial_derivative_identity(
        &self,
        epsilon: &BigRational,
        plan: &SamplePlan,
    ) -> Result<RadialIdentityReport> {
        if !epsilon.is_positive() {
            return Err(Error::non_positive("epsilon", epsilon));
        }
        let two_c = &self.weight * BigRational::from_integer(2.into());
        let t = rational_power(epsilon, &two_c)?;
        let f_series = self.slice_series(&t)?;
        // prefactor c^2 epsilon^(2c - 2) = c^2 t / epsilon^2, kept exact
        let prefactor = &(&self.weight * &self.weight) * &(&t / &(epsilon * epsilon));

        let c_f = self.weight.to_f64().unwrap_or(f64::NAN);
        let t_f = t.to_f64().unwrap_or(f64::NAN);
        let eps_f = epsilon.to_f64().unwrap_or(f64::NAN);
        let prefactor_f = prefactor.to_f64().unwrap_or(f64::NAN);

        let mut per_point = Vec::with_capacity(plan.points().len());
        let mut max_rel: f64 = 0.0;
        for z in plan.points_complex() {
            let p = self.exp_cache.evaluate(&z)?;
            // diastasis D((z0, z), (epsilon, 0)) as a function of z0 alone:
            // |z0|^(2c) P(z) + epsilon^(2c) - 2 Re[(z0 epsilon)^c]
            let g = move |w: &[num_complex::Complex64]| {
                let z0 = w[0];
                let radial = z0.norm_sqr().powf(c_f);
                let cross = (z0 * eps_f).powf(c_f);
                (radial * p + t_f - cross - cross.conj()).exp()
            };
            let eps_point = [num_complex::Complex64::new(eps_f, 0.0)];
            let numeric = fd_mixed_second(&g, &eps_point, 0, 0, plan.step());
            let series_value = f_series.evaluate(&z)? * prefactor_f;
            let rel = relative_error(series_value, numeric);
            max_rel = max_rel.max(rel);
            per_point.push(PointCheck {
                point: z,
                series_value,
                reference_value: numeric,
                rel_error: rel,
            });
        }
        if max_rel > plan.tolerance() {
            return Err(Error::ToleranceBreach {
                max_rel,
                tolerance: plan.tolerance(),
            });
        }
        Ok(RadialIdentityReport {
            epsilon: epsilon.clone(),
            weight: self.weight.clone(),
            prefactor,
            per_point,
            max_rel_error: max_rel,
            tolerance: plan.tolerance(),
        })
    }

    /// Try to exhibit the ambient potential as the flat one via the
    /// canonical cone rescaling `w0 = z0`, `w_i = z0 z_i`. A substitution
    /// that leaves negative exponents, or lands on anything other than the
    /// flat potential, is a negative report, not an error.
    pub fn flatness_witness(&self) -> Result<FlatnessReport> {
        let ambient = self.ambient_series()?;
        let n = self.base_vars();
        // inverse map: z0 -> w0, z_i -> w_i / w0
        let mut rules = vec![vec![0i64; n + 1]; n + 1];
        rules[0][0] = 1;
        for i in 1..=n {
            rules[i][0] = -1;
            rules[i][i] = 1;
        }
        match laurent_substitute_hermitian(&ambient, &rules) {
            Ok(substituted) => {
                let flat = flat_potential(n + 1, substituted.order_bound());
                let is_flat = substituted.same_germ(&flat);
                let note = if is_flat {
                    "rescaling w_i = z0 z_i carries the ambient potential to the flat one"
                        .to_string()
                } else {
                    "rescaling w_i = z0 z_i does not produce the flat potential".to_string()
                };
                Ok(FlatnessReport {
                    is_flat,
                    substituted: Some(substituted),
                    note,
                })
            }
            Err(Error::ResidualNegativeExponent { monomial }) => Ok(FlatnessReport {
                is_flat: false,
                substituted: None,
                note: format!(
                    "rescaling w_i = z0 z_i leaves a negative exponent on {monomial}"
                ),
            }),
            Err(e) => Err(e),
        }
    }
}

/// `|z_1|^2 + ... + |z_n|^2` on the given window.
pub fn flat_potential(vars: usize, order_bound: u32) -> HermitianSeries {
    let terms = (0..vars).map(|i| {
        (
            MultiIndex::unit(vars, i),
            MultiIndex::unit(vars, i),
            Coefficient::one(),
        )
    });
    HermitianSeries::from_terms(vars, order_bound, terms).expect("diagonal data is Hermitian")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialBlock {
    pub block: u32,
    pub matrix: DenseHermitian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSummary {
    pub block: u32,
    pub dim: usize,
    /// `None` when the block failed the PSD check.
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeVerdict {
    NotInduced {
        order: u32,
        /// Index of the first failing radial block.
        block: u32,
        witness: Vec<Coefficient>,
        value: BigRational,
    },
    ConsistentUpTo {
        order: u32,
        /// Sum of the block ranks: a lower bound on the dimension any
        /// inducing target must have.
        rank_lower_bound: usize,
    },
}

impl ConeVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConeVerdict::ConsistentUpTo { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeInducibilityReport {
    pub verdict: ConeVerdict,
    pub blocks: Vec<BlockSummary>,
}

impl ConeInducibilityReport {
    /// Nonzero witness entries labelled by base monomials.
    pub fn witness_support(&self, vars: usize) -> Vec<(MultiIndex, Coefficient)> {
        match &self.verdict {
            ConeVerdict::NotInduced { witness, .. } => {
                let order = GradedOrder::new(vars);
                witness
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (order.monomial_at(i), c.clone()))
                    .collect()
            }
            ConeVerdict::ConsistentUpTo { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialIdentityReport {
    pub epsilon: BigRational,
    pub weight: BigRational,
    pub prefactor: BigRational,
    pub per_point: Vec<PointCheck>,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct FlatnessReport {
    pub is_flat: bool,
    pub substituted: Option<HermitianSeries>,
    pub note: String,
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn fs(n: usize, q: BigRational, d: u32) -> HermitianSeries {
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), rat(1, 1))];
        for i in 0..n {
            terms.push((MultiIndex::unit(n, i), MultiIndex::unit(n, i), rat(1, 1)));
        }
        let one_plus_u = MixedSeries::from_terms(n, d, d, terms).unwrap();
        HermitianSeries::try_new(one_plus_u.log().unwrap().scalar_mul_rational(&q)).unwrap()
    }

    fn hyperbolic(n: usize, q: BigRational, d: u32) -> HermitianSeries {
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), rat(1, 1))];
        for i in 0..n {
            terms.push((MultiIndex::unit(n, i), MultiIndex::unit(n, i), rat(-1, 1)));
        }
        let one_minus_u = MixedSeries::from_terms(n, d, d, terms).unwrap();
        HermitianSeries::try_new(one_minus_u.log().unwrap().scalar_mul_rational(&-q)).unwrap()
    }

    #[test]
    fn rational_power_exact_cases() {
        assert_eq!(
            rational_power(&rational(1, 2), &rational(2, 1)).unwrap(),
            rational(1, 4)
        );
        assert_eq!(
            rational_power(&rational(1, 16), &rational(1, 2)).unwrap(),
            rational(1, 4)
        );
        assert_eq!(
            rational_power(&rational(8, 27), &rational(2, 3)).unwrap(),
            rational(4, 9)
        );
        assert_eq!(
            rational_power(&rational(1, 4), &rational(-1, 2)).unwrap(),
            rational(2, 1)
        );
        assert!(matches!(
            rational_power(&rational(1, 2), &rational(1, 2)),
            Err(Error::IrrationalPower { .. })
        ));
    }

    #[test]
    fn unnormalized_base_rejected() {
        let base = HermitianSeries::from_terms(
            1,
            2,
            [
                (mi(&[0]), mi(&[0]), rat(1, 1)),
                (mi(&[1]), mi(&[1]), rat(1, 1)),
            ],
        )
        .unwrap();
        assert!(matches!(
            ConePotential::new(BigRational::one(), base),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn zero_base_blocks_are_inverse_factorials() {
        let cp = ConePotential::lift(&HermitianSeries::zero(1, 3), 1).unwrap();
        let blocks = cp.radial_blocks(3, 3).unwrap();
        for (k, b) in blocks.iter().enumerate() {
            let k = (k + 1) as i64;
            let kfact: i64 = (1..=k).product();
            assert_eq!(*b.matrix.get(0, 0), rat(1, kfact));
            for j in 1..b.matrix.dim() {
                assert!(b.matrix.get(j, j).is_zero());
            }
        }
        let report = cp.cone_inducibility(3, 3).unwrap();
        assert!(matches!(
            report.verdict,
            ConeVerdict::ConsistentUpTo {
                rank_lower_bound: 3,
                ..
            }
        ));
    }

    #[test]
    fn fubini_study_block_two_values() {
        // c = 1 over log(1+u): B_2 = (1+u)^2/2 with diagonal 1/2, 1, 1/2
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 2), 1).unwrap();
        let blocks = cp.radial_blocks(2, 2).unwrap();
        let b2 = &blocks[1].matrix;
        assert_eq!(*b2.get(0, 0), rat(1, 2));
        assert_eq!(*b2.get(1, 1), rat(1, 1));
        assert_eq!(*b2.get(2, 2), rat(1, 2));
    }

    #[test]
    fn half_fubini_study_cone_fails_at_block_one() {
        let cp = ConePotential::lift(&fs(1, rational(1, 2), 4), 1).unwrap();
        let report = cp.cone_inducibility(3, 4).unwrap();
        match &report.verdict {
            ConeVerdict::NotInduced { block, value, .. } => {
                assert_eq!(*block, 1);
                // (1+u)^(1/2) has u^2 coefficient -1/8
                assert_eq!(*value, rational(-1, 8));
            }
            other => panic!("expected NotInduced, got {other:?}"),
        }
        // doubling the weight cures it: exp(2 * psi_half) = 1 + u
        let doubled = cp.homothety(&rational(2, 1)).unwrap();
        let report2 = doubled.cone_inducibility(3, 4).unwrap();
        assert!(report2.verdict.is_consistent());
    }

    #[test]
    fn cone_verdict_matches_base_verdict() {
        // metamorphic: cone inducibility with weight c equals plain
        // inducibility of c * psi (plus flat quadratic to make it Kähler --
        // here the bases are already Kähler)
        use crate::calabi::{inducibility, InducibilityVerdict};
        let cases: Vec<(BigRational, HermitianSeries)> = vec![
            (rational(1, 1), fs(1, rational(1, 1), 4)),
            (rational(1, 1), fs(1, rational(1, 2), 4)),
            (rational(2, 1), fs(1, rational(1, 2), 4)),
            (rational(1, 2), fs(2, rational(2, 1), 4)),
            (rational(1, 1), hyperbolic(1, rational(1, 1), 4)),
            (rational(3, 1), hyperbolic(2, rational(1, 3), 4)),
        ];
        for (c, psi) in cases {
            let cp = ConePotential::new(c.clone(), psi.clone()).unwrap();
            let cone = cp.cone_inducibility(4, 4).unwrap();
            let base = inducibility(&psi.scalar_mul_rational(&c), 4).unwrap();
            let base_consistent =
                matches!(base.verdict, InducibilityVerdict::ConsistentUpTo { .. });
            assert_eq!(
                cone.verdict.is_consistent(),
                base_consistent,
                "weight {c} disagrees"
            );
        }
    }

    #[test]
    fn slice_matrix_constant_tracks_weight() {
        // c = 1: F(0) = 1 and the u-coefficient is 1 + epsilon^2
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 4), 1).unwrap();
        let m = cp.epsilon_submatrix(&rational(1, 2), 2).unwrap();
        assert_eq!(*m.get(0, 0), rat(1, 1));
        assert_eq!(*m.get(1, 1), rat(5, 4));
        // c = 2 over the same base: the additive constant becomes
        // epsilon^4 = 1/16, so the u-coefficient is 2 + 2/16
        let cp2 = ConePotential::new(rational(2, 1), fs(1, rational(1, 1), 4)).unwrap();
        let m2 = cp2.epsilon_submatrix(&rational(1, 2), 2).unwrap();
        assert_eq!(*m2.get(0, 0), rat(1, 1));
        assert_eq!(*m2.get(1, 1), rat(17, 8));
    }

    #[test]
    fn slice_family_converges_to_limit_matrix() {
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 4), 1).unwrap();
        let limit = cp.epsilon_limit_matrix(3).unwrap();
        // limit is the coefficient matrix of 1 + u
        assert_eq!(*limit.get(0, 0), rat(1, 1));
        assert_eq!(*limit.get(1, 1), rat(1, 1));
        assert!(limit.get(2, 2).is_zero());
        let mut last = None;
        for eps_den in [10i64, 100, 1000] {
            let m = cp.epsilon_submatrix(&rational(1, eps_den), 3).unwrap();
            let dev = m.max_abs_sq_deviation(&limit).unwrap();
            assert!(dev.is_positive());
            if let Some(prev) = last {
                assert!(dev < prev, "deviation must shrink with epsilon");
            }
            last = Some(dev);
        }
    }

    #[test]
    fn irrational_slice_position_refused() {
        // c = 1/4 makes epsilon^(2c) = sqrt(epsilon); epsilon = 1/2 is not a
        // perfect square
        let cp = ConePotential::new(rational(1, 4), fs(1, rational(1, 1), 3)).unwrap();
        assert!(matches!(
            cp.epsilon_submatrix(&rational(1, 2), 2),
            Err(Error::IrrationalPower { .. })
        ));
        // while epsilon = 1/16 is exact: t = 1/4
        assert!(cp.epsilon_submatrix(&rational(1, 16), 2).is_ok());
    }

    #[test]
    fn radial_identity_holds_numerically() {
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 6), 1).unwrap();
        let plan = SamplePlan::new(
            vec![
                vec![Coefficient::from_complex_ints(1, 8, 0, 1)],
                vec![Coefficient::from_complex_ints(-1, 10, 1, 10)],
            ],
            1e-4,
            1e-6,
            0.25,
        )
        .unwrap();
        let report = cp
            .verify_radial_derivative_identity(&rational(1, 2), &plan)
            .unwrap();
        assert!(report.max_rel_error <= 1e-6);
        // prefactor c^2 eps^(2c-2) = 1 at c = 1
        assert_eq!(report.prefactor, rational(1, 1));
    }

    #[test]
    fn fubini_study_cone_is_flat() {
        let cp = ConePotential::lift(&fs(2, rational(1, 1), 4), 1).unwrap();
        let report = cp.flatness_witness().unwrap();
        assert!(report.is_flat, "{}", report.note);
        let sub = report.substituted.unwrap();
        assert!(sub.same_germ(&flat_potential(3, sub.order_bound())));
    }

    #[test]
    fn hyperbolic_cone_is_not_flat() {
        let cp = ConePotential::lift(&hyperbolic(1, rational(1, 1), 4), 1).unwrap();
        let report = cp.flatness_witness().unwrap();
        assert!(!report.is_flat);
        assert!(report.substituted.is_none());
        assert!(report.note.contains("negative exponent"));
    }

    #[test]
    fn fractional_weight_has_no_ambient_series() {
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 3), 2).unwrap();
        assert!(matches!(
            cp.ambient_series(),
            Err(Error::FractionalWeight { .. })
        ));
        assert!(matches!(
            cp.flatness_witness(),
            Err(Error::FractionalWeight { .. })
        ));
    }

    #[test]
    fn ambient_series_of_unit_lift() {
        // |z0|^2 (1 + |z1|^2): exact polynomial
        let cp = ConePotential::lift(&fs(1, rational(1, 1), 3), 1).unwrap();
        let amb = cp.ambient_series().unwrap();
        assert_eq!(amb.vars(), 2);
        assert_eq!(amb.coeff(&mi(&[1, 0]), &mi(&[1, 0])).unwrap(), rat(1, 1));
        assert_eq!(amb.coeff(&mi(&[1, 1]), &mi(&[1, 1])).unwrap(), rat(1, 1));
        assert_eq!(amb.term_count(), 2);
    }
}
