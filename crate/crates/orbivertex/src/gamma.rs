//! Γ-function ratios under the x → 0 limit convention, Pochhammer symbols, and
//! the ψ/Γ limit at non-positive integers.
//!
//! A ratio Γ(z₁)/Γ(z₂) with z₁ − z₂ = d ∈ ℤ is read as lim_{x→0} Γ(x+z₁)/Γ(x+z₂),
//! which is the finite product z₂(z₂+1)⋯(z₁−1) for d ≥ 0 and the reciprocal of
//! z₁(z₁+1)⋯(z₂−1) for d < 0.

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Outcome of a Γ-ratio evaluation that distinguishes divergence.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaRatio<T> {
    /// The limit exists and equals the contained value (possibly zero).
    Finite(T),
    /// The numerator has a pole that the denominator does not cancel.
    Pole,
}

/// A validated pair of Γ arguments with integral difference.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRatioArg<T> {
    pub z1: T,
    pub z2: T,
    /// The integer z₁ − z₂.
    pub diff: i64,
}

impl<T: Scalar> GammaRatioArg<T> {
    /// Validates that `z1 - z2` is an integer.
    pub fn new(z1: T, z2: T) -> Result<Self> {
        let diff = (z1.clone() - z2.clone())
            .exact_integer()
            .ok_or_else(|| Error::NonIntegerDifference(format!("{z1:?}"), format!("{z2:?}")))?;
        Ok(GammaRatioArg { z1, z2, diff })
    }

    /// Evaluates the ratio, reporting divergence explicitly.
    pub fn classify(&self) -> GammaRatio<T> {
        if self.diff >= 0 {
            let mut p = T::one();
            for k in 0..self.diff {
                p = p * (self.z2.clone() + T::int(k));
            }
            GammaRatio::Finite(p)
        } else {
            let mut p = T::one();
            for k in 0..(-self.diff) {
                let f = self.z1.clone() + T::int(k);
                if f.is_singular() {
                    return GammaRatio::Pole;
                }
                p = p * f;
            }
            GammaRatio::Finite(T::one() / p)
        }
    }

    /// Evaluates the ratio with the library convention that a divergent
    /// (pole-over-finite) ratio is reported as 0.
    pub fn value(&self) -> T {
        match self.classify() {
            GammaRatio::Finite(v) => v,
            GammaRatio::Pole => T::zero(),
        }
    }
}

/// Γ(z₁)/Γ(z₂) for z₁ − z₂ ∈ ℤ; a pole-over-finite ratio is returned as 0.
pub fn gamma_ratio<T: Scalar>(z1: &T, z2: &T) -> Result<T> {
    Ok(GammaRatioArg::new(z1.clone(), z2.clone())?.value())
}

/// Γ(z₁)/Γ(z₂) with divergence reported as [`GammaRatio::Pole`].
pub fn gamma_ratio_classified<T: Scalar>(z1: &T, z2: &T) -> Result<GammaRatio<T>> {
    Ok(GammaRatioArg::new(z1.clone(), z2.clone())?.classify())
}

/// Γ(z₁)/Γ(z₂), failing with [`Error::Divergent`] on a pole-over-finite ratio.
///
/// Used inside series whose summation domains must never meet that case.
pub fn gamma_ratio_strict<T: Scalar>(z1: &T, z2: &T) -> Result<T> {
    match gamma_ratio_classified(z1, z2)? {
        GammaRatio::Finite(v) => Ok(v),
        GammaRatio::Pole => Err(Error::Divergent(format!("{z1:?}"), format!("{z2:?}"))),
    }
}

/// 1/Γ(1+n) for an integer n: 1/n! if n ≥ 0 and 0 otherwise.
pub fn inv_gamma_one_plus<T: Scalar>(n: i64) -> T {
    if n < 0 {
        T::zero()
    } else {
        let mut p = T::one();
        for k in 2..=n {
            p = p * T::int(k);
        }
        T::one() / p
    }
}

/// The falling factorial (x)_n = x(x−1)⋯(x−n+1), with (x)₀ = 1.
pub fn falling_factorial<T: Scalar>(x: &T, n: u32) -> T {
    let mut p = T::one();
    for k in 0..n {
        p = p * (x.clone() - T::int(k as i64));
    }
    p
}

/// The limit of ψ(z)/Γ(z) at z = −n, namely (−1)^{n+1} n!.
pub fn psi_gamma_limit<T: Scalar>(n: u32) -> T {
    let mut p = T::one();
    for k in 2..=n as i64 {
        p = p * T::int(k);
    }
    if n.is_multiple_of(2) {
        -p
    } else {
        p
    }
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut p = BigInt::one();
    for k in 2..=n {
        p *= k;
    }
    p
}

/// (−1)^n for an integer n, as a scalar.
pub fn sign_pow<T: Scalar>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Dual};
    use crate::Q;
    use num_rational::Rational64;

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio(&qi(0), &qi(-1)).unwrap(), qi(-1));
        assert_eq!(gamma_ratio(&qi(2), &qi(-1)).unwrap(), qi(0));
        assert_eq!(gamma_ratio(&q(2, 7), &q(2, 7)).unwrap(), qi(1));
        assert_eq!(gamma_ratio(&qi(5), &qi(2)).unwrap(), qi(24));
        assert_eq!(gamma_ratio(&q(4, 3), &q(1, 3)).unwrap(), q(1, 3));
        assert!(gamma_ratio(&q(1, 2), &qi(0)).is_err());
    }

    #[test]
    fn pole_over_finite_is_classified() {
        assert_eq!(gamma_ratio_classified(&qi(-1), &qi(2)).unwrap(), GammaRatio::Pole);
        assert_eq!(gamma_ratio(&qi(-1), &qi(2)).unwrap(), qi(0));
        assert!(gamma_ratio_strict(&qi(-1), &qi(2)).is_err());
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&qi(7), 0), qi(1));
        assert_eq!(falling_factorial(&qi(5), 3), qi(60));
        assert_eq!(falling_factorial(&q(1, 2), 2), q(-1, 4));
    }

    #[test]
    fn psi_gamma_examples() {
        assert_eq!(psi_gamma_limit::<Q>(0), qi(-1));
        assert_eq!(psi_gamma_limit::<Q>(1), qi(1));
        assert_eq!(psi_gamma_limit::<Q>(3), qi(6));
    }

    #[test]
    fn psi_gamma_matches_dual_number_oracle() {
        // Ψ/Γ = −d/dz (1/Γ(z)); near z = −n, 1/Γ(−n+ε) = Γ(1+ε)/Γ(−n+ε) / Γ(1+ε),
        // and Γ(1+ε) = 1 + O(ε) multiplies a quantity that vanishes at ε = 0.
        for n in 0..=10u32 {
            let r = gamma_ratio(&Dual::variable(qi(1)), &Dual::variable(qi(-(n as i64)))).unwrap();
            assert_eq!(r.re, qi(0));
            assert_eq!(-r.eps, psi_gamma_limit::<Q>(n), "n = {n}");
        }
    }

    #[test]
    fn kernels_are_scalar_generic() {
        assert_eq!(gamma_ratio(&5.0f64, &2.0f64).unwrap(), 24.0);
        assert_eq!(gamma_ratio(&5.0f32, &2.0f32).unwrap(), 24.0);
        assert_eq!(
            falling_factorial(&Rational64::new(1, 2), 2),
            Rational64::new(-1, 4)
        );
        // d/dx [Γ(x+2)/Γ(x)] at x = 0 is d/dx [x(x+1)] = 1.
        let r = gamma_ratio(&Dual::variable(qi(2)), &Dual::variable(qi(0))).unwrap();
        assert_eq!(r, Dual { re: qi(0), eps: qi(1) });
        // Γ(ε)/Γ(1+ε) diverges.
        let p = gamma_ratio_classified(&Dual::variable(qi(0)), &Dual::variable(qi(1))).unwrap();
        assert_eq!(p, GammaRatio::Pole);
    }
}
