//! Gaussian rational coefficients: exact complex numbers `re + im*i` with
//! arbitrary-precision rational parts.
//!
//! Invariants:
//! - all arithmetic is exact; no rounding ever occurs,
//! - `conj` is an involution and a ring anti-automorphism is not needed
//!   (multiplication is commutative), so `conj(a*b) = conj(a)*conj(b)`,
//! - `abs_sq` is a nonnegative rational, zero iff the coefficient is zero.
//!
//! Floating point enters only through [`Coefficient::to_complex64`], used by
//! numeric evaluation; nothing in the certification path calls it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coefficient {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coefficient {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coefficient { re, im }
    }

    pub fn zero() -> Self {
        Coefficient {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Coefficient {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Coefficient {
            re,
            im: BigRational::zero(),
        }
    }

    /// Exact rational from an integer pair; panics if `den == 0`.
    pub fn from_ints(num: i64, den: i64) -> Self {
        Coefficient::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_complex_ints(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Coefficient {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|c|^2 = re^2 + im^2`, an exact nonnegative rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        Coefficient {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl From<BigRational> for Coefficient {
    fn from(re: BigRational) -> Self {
        Coefficient::from_rational(re)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &Coefficient {
    type Output = Coefficient;
    /// Exact complex division; panics if `rhs` is zero (callers must check).
    fn div(self, rhs: &Coefficient) -> Coefficient {
        let denom = rhs.abs_sq();
        assert!(!denom.is_zero(), "division by zero coefficient");
        let num = self * &rhs.conj();
        Coefficient {
            re: num.re / denom.clone(),
            im: num.im / denom,
        }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}
