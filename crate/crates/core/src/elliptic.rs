//! Complete elliptic integrals via the arithmetic-geometric mean.
//!
//! `K(k) = ∫_0^{π/2} dθ / sqrt(1 - k^2 sin^2 θ)` and
//! `E(k) = ∫_0^{π/2} sqrt(1 - k^2 sin^2 θ) dθ`, computed through Gauss's
//! relation `K(k) = π / (2 AGM(1, sqrt(1 - k^2)))` and the descending AGM
//! sequence with accumulated `c_n^2` sums for `E`.
//!
//! Internally everything is parameterized by the complementary parameter
//! `mc = 1 - k^2`: near `k = 1` the modulus loses absolute resolution in
//! `f64`, while `mc` keeps full relative precision.

use std::f64::consts::PI;

use crate::{Error, Result};

/// AGM iteration cap; quadratic convergence reaches f64 precision in
/// well under 32 steps for any positive arguments.
const MAX_ITER: usize = 64;

/// `K(k)` and `E(k)` at one modulus value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub k: f64,
    /// Complete elliptic integral of the first kind K(k).
    pub big_k: f64,
    /// Complete elliptic integral of the second kind E(k).
    pub big_e: f64,
}

/// Arithmetic-geometric mean of two positive reals: the common limit of
/// `(x, y) -> (sqrt(xy), (x+y)/2)`.
pub fn agm(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!("agm requires positive arguments, got ({x}, {y})")));
    }
    let (mut a, mut b) = (0.5 * (x + y), (x * y).sqrt());
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(0.5 * (a + b))
}

/// Complementary parameter `mc = 1 - k^2`, computed as `(1-k)(1+k)` so the
/// subtraction near `k = 1` stays exact.
pub fn complementary_parameter(k: f64) -> f64 {
    (1.0 - k) * (1.0 + k)
}

/// `K` and `E` as functions of the complementary parameter `mc = 1 - k^2`.
///
/// This is the precision-preserving core: `mc` may be as small as the f64
/// subnormal range while `k` itself would round to 1.
pub fn complete_elliptic_mc(mc: f64) -> Result<(f64, f64)> {
    if !(mc > 0.0) || mc > 1.0 {
        return Err(Error::Domain(format!("complementary parameter must lie in (0, 1], got {mc}")));
    }
    let mut a = 1.0_f64;
    let mut b = mc.sqrt();
    // c_0^2 = k^2 = 1 - mc; the E-sum is Σ 2^{n-1} c_n^2.
    let mut sum = 0.5 * (1.0 - mc);
    let mut pow2 = 0.5;
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    let big_k = PI / (2.0 * a);
    let big_e = big_k * (1.0 - sum);
    Ok((big_k, big_e))
}

/// Complete elliptic integrals of the first and second kind for
/// `0 <= k < 1`.
pub fn complete_elliptic(k: f64) -> Result<EllipticPair> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    let (big_k, big_e) = complete_elliptic_mc(complementary_parameter(k))?;
    Ok(EllipticPair { k, big_k, big_e })
}

/// Derivatives `dK/dk = (E - (1-k^2)K) / (k(1-k^2))` and
/// `dE/dk = (E - K) / k`, singular at the endpoints.
pub fn elliptic_derivatives(k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("derivatives require 0 < k < 1, got {k}")));
    }
    let mc = complementary_parameter(k);
    let (big_k, big_e) = complete_elliptic_mc(mc)?;
    let dk = (big_e - mc * big_k) / (k * mc);
    let de = (big_e - big_k) / k;
    Ok((dk, de))
}

/// The auxiliary integral `∫_0^1 (1 + k^2 u^2) / (sqrt(1-u^2) (1-k^2 u^2)^{3/2}) du`,
/// in closed form `2E/(1-k^2) - K`.
pub fn aux_integral(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    let mc = complementary_parameter(k);
    let (big_k, big_e) = complete_elliptic_mc(mc)?;
    Ok(2.0 * big_e / mc - big_k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn agm_fixed_point_and_domain() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        assert!(matches!(agm(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(agm(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn k_zero_endpoint() {
        let p = complete_elliptic(0.0).unwrap();
        assert!((p.big_k - PI / 2.0).abs() < 1e-15);
        assert!((p.big_e - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn e_tends_to_one_at_k_one() {
        let p = complete_elliptic(0.999999).unwrap();
        assert!((p.big_e - 1.0).abs() < 1e-4);
        assert!(p.big_k > 7.0);
    }

    #[test]
    fn domain_errors() {
        assert!(complete_elliptic(1.0).is_err());
        assert!(complete_elliptic(-0.1).is_err());
        assert!(elliptic_derivatives(0.0).is_err());
        assert!(elliptic_derivatives(1.0).is_err());
    }

    #[test]
    fn k_asymptotics_near_one() {
        // |K - |log(1-k^2)|/2| stays bounded (the gap tends to log 4)
        for &mc in &[1e-2_f64, 1e-6, 1e-9, 1e-12] {
            let (big_k, _) = complete_elliptic_mc(mc).unwrap();
            let gap = (big_k - 0.5 * mc.ln().abs()).abs();
            assert!(gap <= 2.0, "gap {gap} at mc = {mc}");
        }
    }

    proptest! {
        #[test]
        fn ordering_and_ek_inequality(k in 1e-3..0.999f64) {
            let p = complete_elliptic(k).unwrap();
            prop_assert!(p.big_e < PI / 2.0);
            prop_assert!(p.big_k > PI / 2.0);
            // E > (1 - k^2) K
            prop_assert!(p.big_e > (1.0 - k * k) * p.big_k);
        }

        #[test]
        fn agm_homogeneous(x in 0.1..10.0f64, y in 0.1..10.0f64, s in 0.1..10.0f64) {
            let lhs = agm(s * x, s * y).unwrap();
            let rhs = s * agm(x, y).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
        }

        #[test]
        fn derivative_signs(k in 1e-3..0.999f64) {
            let (dk, de) = elliptic_derivatives(k).unwrap();
            prop_assert!(dk > 0.0, "K must be strictly increasing");
            prop_assert!(de < 0.0, "E must be strictly decreasing");
        }
    }
}
