//! The scalar abstraction used by the Γ-ratio kernels and by series coefficients.
//!
//! Exact computations use [`crate::Q`] (`BigRational`); the kernels also run on
//! `Rational64`, `f64`, `f32`, and on [`Dual`] numbers, which carry a first-order
//! infinitesimal and are used to differentiate Frobenius coefficients in `r`.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// A field-like number type usable by the hypergeometric kernels.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + 'static
{
    /// Returns `Some(n)` when the value is exactly the integer `n`.
    fn exact_integer(&self) -> Option<i64>;

    /// True when the value cannot be divided by (zero, or a pure infinitesimal).
    fn is_singular(&self) -> bool {
        self.is_zero()
    }

    /// Embeds a small integer.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar embeds small integers")
    }
}

impl Scalar for BigRational {
    fn exact_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Scalar for Rational64 {
    fn exact_integer(&self) -> Option<i64> {
        if self.is_integer() {
            Some(self.to_integer())
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    fn exact_integer(&self) -> Option<i64> {
        if self.fract() == 0.0 && self.abs() < 9.0e15 {
            Some(*self as i64)
        } else {
            None
        }
    }
}

impl Scalar for f32 {
    fn exact_integer(&self) -> Option<i64> {
        if self.fract() == 0.0 && self.abs() < 1.6e7 {
            Some(*self as i64)
        } else {
            None
        }
    }
}

/// A dual number `re + eps·ε` with `ε² = 0`.
///
/// Evaluating a rational function at `r + ε` yields its value and its first
/// derivative at `r` in one pass.
#[derive(Clone, PartialEq, Debug)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    /// A constant (zero infinitesimal part).
    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    /// The variable `re + ε`.
    pub fn variable(re: T) -> Self {
        Dual { re, eps: T::one() }
    }
}

impl<T: Scalar + Display> Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.eps)
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { re: self.re + o.re, eps: self.eps + o.eps }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { re: self.re - o.re, eps: self.eps - o.eps }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual {
            eps: self.re.clone() * o.eps + self.eps * o.re.clone(),
            re: self.re * o.re,
        }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    /// Division requires an invertible real part; dividing by a pure
    /// infinitesimal is a pole and panics.
    fn div(self, o: Self) -> Self {
        assert!(!o.re.is_zero(), "dual division by a pure infinitesimal (pole)");
        let re = self.re.clone() / o.re.clone();
        let eps = (self.eps * o.re.clone() - self.re * o.eps) / (o.re.clone() * o.re);
        Dual { re, eps }
    }
}

impl<T: Scalar> Rem for Dual<T> {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Dual::constant(T::zero())
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, eps: -self.eps }
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

impl<T: Scalar> Num for Dual<T> {
    type FromStrRadixErr = ();
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ()> {
        T::from_str_radix(s, radix).map(Dual::constant).map_err(|_| ())
    }
}

impl<T: Scalar> FromPrimitive for Dual<T> {
    fn from_i64(n: i64) -> Option<Self> {
        T::from_i64(n).map(Dual::constant)
    }
    fn from_u64(n: u64) -> Option<Self> {
        T::from_u64(n).map(Dual::constant)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn is_singular(&self) -> bool {
        self.re.is_singular()
    }

    fn exact_integer(&self) -> Option<i64> {
        if self.eps.is_zero() {
            self.re.exact_integer()
        } else {
            None
        }
    }
}

/// Convenience: the exact rational `n/d`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience: the exact integer `n` as a rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fractional part ⟨x⟩ = x − ⌊x⌋ ∈ [0,1).
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// ⌊x⌋ as a machine integer.
pub fn floor_i64(x: &BigRational) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits in i64")
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_q(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p` into a rational in lowest terms.
pub fn parse_q(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let bad = || crate::Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
