//! Diastasis normalization and coefficient matrices.
//!
//! The diastasis of a potential differs from the potential by the pure
//! (holomorphic + antiholomorphic) part of its expansion; normalizing means
//! dropping every term whose holomorphic or antiholomorphic index is zero.
//! From a normalized potential the criterion matrix collects the
//! coefficients of `exp(potential) - 1` over pairs of graded monomials.
//!
//! Invariants:
//! - a criterion matrix always has zero row 0 and column 0 (normalization
//!   kills pure terms, and products of normalized series stay normalized),
//! - matrices are Hermitian and validated on construction,
//! - everything is exact.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{Coefficient, GradedOrder, HermitianSeries, MultiIndex};

/// Drop every term with a zero holomorphic or antiholomorphic index. The
/// result is the expansion of the diastasis centered at the origin.
pub fn diastasis_normalize(potential: &HermitianSeries) -> HermitianSeries {
    let kept = potential
        .term_triples()
        .into_iter()
        .filter(|(m, k, _)| m.degree() > 0 && k.degree() > 0);
    HermitianSeries::from_terms(potential.vars(), potential.order_bound(), kept)
        .expect("dropping mirror-paired terms preserves symmetry")
}

/// Whether the potential has no pure terms (and hence equals its diastasis).
pub fn is_normalized(potential: &HermitianSeries) -> bool {
    potential
        .term_triples()
        .iter()
        .all(|(m, k, _)| m.degree() > 0 && k.degree() > 0)
}

/// Return the first pure term of an unnormalized potential, for error
/// messages.
pub fn first_pure_term(potential: &HermitianSeries) -> Option<(MultiIndex, MultiIndex)> {
    potential
        .term_triples()
        .into_iter()
        .find(|(m, k, _)| m.degree() == 0 || k.degree() == 0)
        .map(|(m, k, _)| (m, k))
}

// ---------------------------------------------------------------------------

/// Dense Hermitian matrix over exact Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseHermitian {
    dim: usize,
    data: Vec<Coefficient>,
}

impl DenseHermitian {
    pub fn zeros(dim: usize) -> Self {
        DenseHermitian {
            dim,
            data: vec![Coefficient::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Coefficient>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        let m = DenseHermitian { dim, data };
        m.validate_hermitian()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> &Coefficient {
        &self.data[j * self.dim + k]
    }

    pub fn set(&mut self, j: usize, k: usize, c: Coefficient) {
        self.data[j * self.dim + k] = c;
    }

    pub fn validate_hermitian(&self) -> Result<()> {
        for j in 0..self.dim {
            for k in j..self.dim {
                if *self.get(j, k) != self.get(k, j).conj() {
                    return Err(Error::NotHermitian {
                        j: j.to_string(),
                        k: k.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `w* M w`, exact. The result of a Hermitian form is real; the
    /// imaginary part is returned so callers can assert it vanished.
    pub fn quadratic_form(&self, w: &[Coefficient]) -> Result<Coefficient> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: w.len(),
            });
        }
        let mut acc = Coefficient::zero();
        for j in 0..self.dim {
            if w[j].is_zero() {
                continue;
            }
            for k in 0..self.dim {
                if w[k].is_zero() {
                    continue;
                }
                acc = &acc + &(&(&w[j].conj() * self.get(j, k)) * &w[k]);
            }
        }
        Ok(acc)
    }

    /// Largest entrywise squared deviation from `other`; exact, used to
    /// compare convergence of matrix families without square roots.
    pub fn max_abs_sq_deviation(&self, other: &DenseHermitian) -> Result<BigRational> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut max = BigRational::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            let dev = (a - b).abs_sq();
            if dev > max {
                max = dev;
            }
        }
        Ok(max)
    }

    pub fn principal_submatrix(&self, dim: usize) -> DenseHermitian {
        assert!(dim <= self.dim);
        let mut out = DenseHermitian::zeros(dim);
        for j in 0..dim {
            for k in 0..dim {
                out.set(j, k, self.get(j, k).clone());
            }
        }
        out
    }
}

/// Collect the coefficients of a Hermitian series over all pairs of graded
/// monomials of degree at most `order` into a dense matrix. The series
/// window must cover the requested order.
pub fn coefficient_matrix(series: &HermitianSeries, order: u32) -> Result<DenseHermitian> {
    if series.order_bound() < order {
        return Err(Error::InsufficientOrder {
            what: "coefficient matrix".to_string(),
            needed: order,
            have: series.order_bound(),
        });
    }
    let graded = GradedOrder::new(series.vars());
    let dim = graded.dimension(order);
    let mut m = DenseHermitian::zeros(dim);
    for (&(j, k), c) in series.as_mixed().position_terms() {
        if j < dim && k < dim {
            m.set(j, k, c.clone());
        }
    }
    m.validate_hermitian()
        .map_err(|_| Error::Internal("coefficient matrix of Hermitian series not Hermitian".into()))?;
    Ok(m)
}

/// The criterion matrix of a normalized potential at a given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalabiMatrix {
    vars: usize,
    order_bound: u32,
    matrix: DenseHermitian,
}

impl CalabiMatrix {
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order_bound(&self) -> u32 {
        self.order_bound
    }

    pub fn matrix(&self) -> &DenseHermitian {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Monomial labelling the given row/column.
    pub fn monomial(&self, position: usize) -> MultiIndex {
        GradedOrder::new(self.vars).monomial_at(position)
    }
}

/// Build the criterion matrix: coefficients of `exp(potential) - 1` over
/// graded monomial pairs up to `order`. The potential must be normalized;
/// its window must cover `order`.
pub fn calabi_matrix(normalized: &HermitianSeries, order: u32) -> Result<CalabiMatrix> {
    if let Some((m, k)) = first_pure_term(normalized) {
        return Err(Error::NotNormalized {
            j: m.to_string(),
            k: k.to_string(),
        });
    }
    if normalized.order_bound() < order {
        return Err(Error::InsufficientOrder {
            what: "criterion matrix".to_string(),
            needed: order,
            have: normalized.order_bound(),
        });
    }
    let one = HermitianSeries::constant_real(
        normalized.vars(),
        normalized.order_bound(),
        BigRational::from_integer(1.into()),
    );
    let expm1 = normalized.exp()?.sub(&one)?;
    let matrix = coefficient_matrix(&expm1, order)?;
    // normalization is preserved by exp - 1, so row/column 0 must vanish
    for i in 0..matrix.dim() {
        if !matrix.get(0, i).is_zero() || !matrix.get(i, 0).is_zero() {
            return Err(Error::Internal(
                "criterion matrix has a nonzero entry in row/column 0".into(),
            ));
        }
    }
    Ok(CalabiMatrix {
        vars: normalized.vars(),
        order_bound: order,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn rat(n: i64, d: i64) -> Coefficient {
        Coefficient::from_ints(n, d)
    }

    #[test]
    fn normalization_drops_pure_terms() {
        // |z|^2 + z + zbar + 1 -> |z|^2
        let phi = HermitianSeries::from_terms(
            1,
            3,
            [
                (mi(&[0]), mi(&[0]), rat(1, 1)),
                (mi(&[1]), mi(&[0]), rat(1, 1)),
                (mi(&[0]), mi(&[1]), rat(1, 1)),
                (mi(&[1]), mi(&[1]), rat(1, 1)),
            ],
        )
        .unwrap();
        let n = diastasis_normalize(&phi);
        assert_eq!(n.term_count(), 1);
        assert_eq!(n.coeff(&mi(&[1]), &mi(&[1])).unwrap(), rat(1, 1));
        assert!(is_normalized(&n));
        assert!(!is_normalized(&phi));
    }

    #[test]
    fn flat_matrix_is_inverse_factorials() {
        // exp(|z|^2) - 1 has diagonal 1, 1/2, 1/6, 1/24 on degrees 1..4
        let u = HermitianSeries::from_terms(1, 4, [(mi(&[1]), mi(&[1]), rat(1, 1))]).unwrap();
        let cm = calabi_matrix(&u, 4).unwrap();
        assert_eq!(cm.dim(), 5);
        let expect = [rat(0, 1), rat(1, 1), rat(1, 2), rat(1, 6), rat(1, 24)];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(cm.matrix().get(i, i), e, "diagonal {i}");
            for j in 0..5 {
                if j != i {
                    assert!(cm.matrix().get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn perturbed_quartic_matrix_entries() {
        // potential |z|^2 - |z|^4/4; exp(.) - 1 = u + u^2/4 - u^3/12 + ...
        let phi = HermitianSeries::from_terms(
            1,
            3,
            [
                (mi(&[1]), mi(&[1]), rat(1, 1)),
                (mi(&[2]), mi(&[2]), rat(-1, 4)),
            ],
        )
        .unwrap();
        let cm = calabi_matrix(&phi, 3).unwrap();
        assert_eq!(cm.dim(), 4);
        assert_eq!(*cm.matrix().get(1, 1), rat(1, 1));
        assert_eq!(*cm.matrix().get(2, 2), rat(1, 4));
        assert_eq!(*cm.matrix().get(3, 3), rat(-1, 12));
    }

    #[test]
    fn unnormalized_input_rejected() {
        let phi = HermitianSeries::from_terms(
            1,
            2,
            [
                (mi(&[0]), mi(&[0]), rat(1, 1)),
                (mi(&[1]), mi(&[1]), rat(1, 1)),
            ],
        )
        .unwrap();
        assert!(matches!(
            calabi_matrix(&phi, 2),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn window_must_cover_order() {
        let u = HermitianSeries::from_terms(1, 2, [(mi(&[1]), mi(&[1]), rat(1, 1))]).unwrap();
        assert!(matches!(
            calabi_matrix(&u, 3),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn quadratic_form_and_deviation() {
        let m = DenseHermitian::from_rows(vec![
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1)],
        ])
        .unwrap();
        let v = m
            .quadratic_form(&[rat(1, 1), rat(-1, 1)])
            .unwrap();
        assert_eq!(v, rat(-2, 1));
        let z = DenseHermitian::zeros(2);
        assert_eq!(
            m.max_abs_sq_deviation(&z).unwrap(),
            BigRational::from_integer(1.into())
        );
    }
}
