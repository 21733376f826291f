//! Exact positive-semidefiniteness via Hermitian LDL* elimination.
//!
//! Pivots are chosen as the largest remaining diagonal entry (ties to the
//! smallest index), which for a PSD matrix is always admissible: if the
//! largest diagonal of a Hermitian matrix is zero and some off-diagonal
//! entry is not, the matrix is indefinite and a 2x2 witness exists. Negative
//! answers therefore always come with an explicit vector `w`, normalized to
//! Gaussian integers, whose form value `w* M w` is recomputed against the
//! original matrix and is negative. Positive answers come with a weighted
//! Gram certificate `M = sum_i d_i u_i u_i*` (positive rational weights,
//! unit-pivot rows), which avoids the irrational square roots a Cholesky
//! factor would need.
//!
//! Everything here is exact; no tolerance appears anywhere.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::calabi::matrix::DenseHermitian;
use crate::series::Coefficient;

/// Weighted Gram certificate of positive semidefiniteness:
/// `M = sum_i weights[i] * rows[i] rows[i]*` with `weights[i] > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdCertificate {
    pub weights: Vec<BigRational>,
    pub rows: Vec<Vec<Coefficient>>,
}

impl PsdCertificate {
    /// Rebuild the matrix the certificate claims to decompose.
    pub fn reconstruct(&self, dim: usize) -> DenseHermitian {
        let mut m = DenseHermitian::zeros(dim);
        for (w, u) in self.weights.iter().zip(&self.rows) {
            for j in 0..dim {
                if u[j].is_zero() {
                    continue;
                }
                for k in 0..dim {
                    if u[k].is_zero() {
                        continue;
                    }
                    let add = (&u[j] * &u[k].conj()).mul_rational(w);
                    let cur = m.get(j, k).clone();
                    m.set(j, k, &cur + &add);
                }
            }
        }
        m
    }
}

/// Outcome of the exact factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdOutcome {
    Psd {
        rank: usize,
        certificate: PsdCertificate,
    },
    NotPsd {
        /// Gaussian-integer vector with `witness* M witness = value < 0`.
        witness: Vec<Coefficient>,
        value: BigRational,
    },
}

struct Step {
    pivot: usize,
    weight: BigRational,
    /// Column of the unit triangular factor in original coordinates:
    /// `col[pivot] = 1`, `col[j] = A[j][pivot] / weight` for later-active j.
    col: Vec<Coefficient>,
}

/// Decide PSD-ness exactly, producing a certificate either way.
pub fn psd_factorize(m: &DenseHermitian) -> Result<PsdOutcome> {
    m.validate_hermitian()?;
    let dim = m.dim();
    let mut a: Vec<Vec<Coefficient>> = (0..dim)
        .map(|j| (0..dim).map(|k| m.get(j, k).clone()).collect())
        .collect();
    let mut active: Vec<usize> = (0..dim).collect();
    let mut steps: Vec<Step> = Vec::new();

    loop {
        if active.is_empty() {
            return finish_psd(m, steps);
        }
        // largest remaining diagonal; strict comparison keeps the smallest
        // index on ties
        let mut pivot = active[0];
        let mut best = a[pivot][pivot].re.clone();
        for &q in &active[1..] {
            if a[q][q].re > best {
                best = a[q][q].re.clone();
                pivot = q;
            }
        }

        if best.is_positive() {
            let weight = best;
            let inv_w = weight.recip();
            let pivot_row: Vec<Coefficient> = a[pivot].clone();
            let pivot_col: Vec<Coefficient> = (0..dim).map(|j| a[j][pivot].clone()).collect();
            let mut col = vec![Coefficient::zero(); dim];
            col[pivot] = Coefficient::one();
            for &j in &active {
                if j != pivot {
                    col[j] = pivot_col[j].mul_rational(&inv_w);
                }
            }
            // Schur complement on the remaining block
            for &j in &active {
                if j == pivot {
                    continue;
                }
                for &k in &active {
                    if k == pivot {
                        continue;
                    }
                    let delta = (&pivot_col[j] * &pivot_row[k]).mul_rational(&inv_w);
                    a[j][k] = &a[j][k] - &delta;
                }
            }
            active.retain(|&q| q != pivot);
            steps.push(Step { pivot, weight, col });
            continue;
        }

        // No positive diagonal remains. A strictly negative one is a
        // coordinate witness in the current complement.
        if let Some(&q) = active.iter().find(|&&q| a[q][q].re.is_negative()) {
            let mut w = vec![Coefficient::zero(); dim];
            w[q] = Coefficient::one();
            return finish_not_psd(m, &steps, w);
        }

        // All remaining diagonals are zero: any nonzero off-diagonal entry
        // gives an explicit indefinite 2x2 block.
        let mut found: Option<(usize, usize)> = None;
        'outer: for (i, &j) in active.iter().enumerate() {
            for &k in &active[i + 1..] {
                if !a[j][k].is_zero() {
                    found = Some((j, k));
                    break 'outer;
                }
            }
        }
        match found {
            Some((j, k)) => {
                let mut w = vec![Coefficient::zero(); dim];
                w[j] = a[j][k].clone();
                w[k] = -&Coefficient::one();
                return finish_not_psd(m, &steps, w);
            }
            None => return finish_psd(m, steps),
        }
    }
}

fn finish_psd(m: &DenseHermitian, steps: Vec<Step>) -> Result<PsdOutcome> {
    let rank = steps.len();
    let certificate = PsdCertificate {
        weights: steps.iter().map(|s| s.weight.clone()).collect(),
        rows: steps.into_iter().map(|s| s.col).collect(),
    };
    if cfg!(debug_assertions) && certificate.reconstruct(m.dim()) != *m {
        return Err(Error::Internal(
            "PSD certificate does not reconstruct its matrix".into(),
        ));
    }
    Ok(PsdOutcome::Psd { rank, certificate })
}

fn finish_not_psd(m: &DenseHermitian, steps: &[Step], mut w: Vec<Coefficient>) -> Result<PsdOutcome> {
    // Pull the complement witness back through the elimination steps in
    // reverse: each pivot coordinate is chosen to cancel its cross terms,
    // leaving the form value unchanged.
    for step in steps.iter().rev() {
        let mut s = Coefficient::zero();
        for (j, wj) in w.iter().enumerate() {
            if j != step.pivot && !step.col[j].is_zero() && !wj.is_zero() {
                s = &s + &(&step.col[j].conj() * wj);
            }
        }
        w[step.pivot] = -&s;
    }
    let w = normalize_witness(w);
    let value = m.quadratic_form(&w)?;
    if !value.im.is_zero() || !value.re.is_negative() {
        return Err(Error::Internal(format!(
            "witness form value {value} is not a negative real"
        )));
    }
    Ok(PsdOutcome::NotPsd {
        witness: w,
        value: value.re,
    })
}

/// Scale a rational vector to coprime Gaussian integers with a canonical
/// sign: the first nonzero entry has positive real part, or zero real part
/// and positive imaginary part.
fn normalize_witness(w: Vec<Coefficient>) -> Vec<Coefficient> {
    let mut denom_lcm = BigInt::one();
    for c in &w {
        denom_lcm = denom_lcm.lcm(c.re.denom());
        denom_lcm = denom_lcm.lcm(c.im.denom());
    }
    let scale = BigRational::from_integer(denom_lcm);
    let mut ints: Vec<Coefficient> = w.iter().map(|c| c.mul_rational(&scale)).collect();

    let mut gcd = BigUint::zero();
    for c in &ints {
        gcd = gcd.gcd(&c.re.numer().magnitude().clone());
        gcd = gcd.gcd(&c.im.numer().magnitude().clone());
    }
    if !gcd.is_zero() && !gcd.is_one() {
        let shrink = BigRational::new(BigInt::one(), BigInt::from(gcd));
        for c in &mut ints {
            *c = c.mul_rational(&shrink);
        }
    }

    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        let flip = first.re.is_negative() || (first.re.is_zero() && first.im.is_negative());
        if flip {
            for c in &mut ints {
                *c = -&*c;
            }
        }
    }
    ints
}

/// Convenience predicate: PSD or not, discarding certificates.
pub fn psd_check(m: &DenseHermitian) -> Result<bool> {
    Ok(matches!(psd_factorize(m)?, PsdOutcome::Psd { .. }))
}

/// PSD with full rank.
pub fn is_positive_definite(m: &DenseHermitian) -> Result<bool> {
    Ok(match psd_factorize(m)? {
        PsdOutcome::Psd { rank, .. } => rank == m.dim(),
        PsdOutcome::NotPsd { .. } => false,
    })
}
