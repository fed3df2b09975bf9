//! Gamma, log-gamma and log-beta for positive real arguments.
//!
//! `gamma_fn` uses the Lanczos approximation (g = 7, nine terms); large
//! arguments of `ln_gamma` and `log_beta` go through Stirling's series so that
//! ratios such as B(beta + s, gamma) / B(beta, gamma) never overflow.

#![allow(clippy::excessive_precision)]

use super::{SpecValue, Status};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Arguments at or above this value use Stirling's series in `ln_gamma`.
const STIRLING_CUTOFF: f64 = 10.0;

fn check_positive<T: Scalar>(func: &'static str, x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("argument must be finite and > 0, got {x}")))
    }
}

/// Lanczos sum for x >= 0.5.
fn lanczos<T: Scalar>(x: T) -> T {
    let xm1 = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (xm1 + T::from_usize_lossy(i));
    }
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    // t^(x - 1/2) split in two halves so that x near 171 does not overflow early.
    let half = t.powf((xm1 + T::lit(0.5)) / T::lit(2.0));
    T::lit(2.0 * std::f64::consts::PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// Gamma function on x > 0.
///
/// Overflow returns the largest finite value with status
/// [`Status::OverflowSaturated`] (x above ~171.62 for `f64`).
pub fn gamma_fn<T: Scalar>(x: T) -> Result<SpecValue<T>> {
    check_positive("gamma_fn", x)?;
    let value = if x < T::lit(0.5) { lanczos(x + T::one()) / x } else { lanczos(x) };
    if value.is_finite() {
        Ok(SpecValue::ok(value))
    } else {
        Ok(SpecValue { value: T::max_value(), status: Status::OverflowSaturated })
    }
}

/// Remainder of Stirling's series: ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)].
pub(crate) fn stirling_correction<T: Scalar>(x: T) -> T {
    // Bernoulli-number coefficients B_{2k} / (2k (2k - 1)).
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut acc = T::zero();
    for &c in COEFFS.iter().rev() {
        acc = acc * inv2 + T::lit(c);
    }
    acc * inv
}

/// Natural log of the gamma function on x > 0.
pub fn ln_gamma<T: Scalar>(x: T) -> Result<T> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked<T: Scalar>(x: T) -> T {
    if x < T::lit(STIRLING_CUTOFF) {
        let g = if x < T::lit(0.5) { lanczos(x + T::one()) / x } else { lanczos(x) };
        g.ln()
    } else {
        (x - T::lit(0.5)) * x.ln() - x + T::lit(LN_SQRT_2PI) + stirling_correction(x)
    }
}

/// Natural log of the beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
///
/// Large arguments are combined through Stirling corrections and `ln_1p` so the
/// huge log-gamma terms cancel analytically rather than numerically.
pub fn log_beta<T: Scalar>(a: T, b: T) -> Result<T> {
    check_positive("log_beta", a)?;
    check_positive("log_beta", b)?;
    Ok(log_beta_unchecked(a, b))
}

pub(crate) fn log_beta_unchecked<T: Scalar>(a: T, b: T) -> T {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let cut = T::lit(STIRLING_CUTOFF);
    let sum = p + q;
    if p >= cut {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(sum);
        -T::lit(0.5) * q.ln() + T::lit(LN_SQRT_2PI) + corr
            + (p - T::lit(0.5)) * (p / sum).ln()
            + q * (-p / sum).ln_1p()
    } else if q >= cut {
        let corr = stirling_correction(q) - stirling_correction(sum);
        ln_gamma_unchecked(p) + corr + p - p * sum.ln() + (q - T::lit(0.5)) * (-p / sum).ln_1p()
    } else {
        let gp = if p < T::lit(0.5) { lanczos(p + T::one()) / p } else { lanczos(p) };
        let gq = lanczos(q);
        let gs = lanczos(sum);
        (gp * (gq / gs)).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert!(rel(gamma_fn(1.0).unwrap().value, 1.0) < 1e-14);
        assert!(rel(gamma_fn(0.5).unwrap().value, std::f64::consts::PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(5.0).unwrap().value, 24.0) < 1e-14);
        assert!(rel(gamma_fn(1e-3).unwrap().value, 999.423_772_484_595_5) < 1e-12);
    }

    #[test]
    fn gamma_overflow_saturates() {
        let g = gamma_fn(172.0).unwrap();
        assert_eq!(g.status, Status::OverflowSaturated);
        assert_eq!(g.value, f64::MAX);
        assert_eq!(gamma_fn(171.0).unwrap().status, Status::Ok);
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
        assert!(log_beta(0.0, 1.0).is_err());
        assert!(log_beta(1.0, -2.0).is_err());
        assert!(ln_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn log_beta_identities() {
        assert!(log_beta(1.0f64, 1.0).unwrap().abs() < 1e-14);
        assert!((log_beta(2.0, 3.0).unwrap() - (1.0f64 / 12.0).ln()).abs() < 1e-14);
        assert!((log_beta(0.5, 0.5).unwrap() - std::f64::consts::PI.ln()).abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_is_continuous_across_stirling_cutoff() {
        let below: f64 = ln_gamma(10.0 - 1e-9).unwrap();
        let above = ln_gamma(10.0).unwrap();
        assert!((above - below - 1e-9 * 2.251_752_589_066_721).abs() < 1e-13);
    }

    #[test]
    fn single_precision_works() {
        let g: f32 = gamma_fn(5.0f32).unwrap().value;
        assert!((g - 24.0).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn recurrence_holds(x in 0.1f64..80.0) {
            let g = gamma_fn(x).unwrap().value;
            let g1 = gamma_fn(x + 1.0).unwrap().value;
            prop_assert!(rel(g1, x * g) <= 1e-11);
        }

        #[test]
        fn log_beta_is_symmetric(a in 0.01f64..500.0, b in 0.01f64..500.0) {
            let ab = log_beta(a, b).unwrap();
            let ba = log_beta(b, a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-14 * ab.abs().max(1.0));
        }
    }
}
