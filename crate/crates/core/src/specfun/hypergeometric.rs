//! Confluent hypergeometric functions M(a, b, z) and U(a, b, z).
//!
//! `kummer_m` is only needed for z <= 0. Kummer's transformation
//! M(a, b, z) = e^z M(b - a, b, -z) turns it into a series with positive
//! terms, summed with periodic rescaling so |z| up to several hundred does
//! not overflow.
//!
//! `tricomi_u` uses the Laplace integral
//! U(a, b, z) = 1/Gamma(a) * int_0^inf e^{-z t} t^{a-1} (1+t)^{b-a-1} dt
//! after the substitution t = e^v. The resulting integrand on the real line is
//! smooth and unimodal, so the trapezoid rule around its mode converges
//! geometrically. The integral is continuous in b, including non-positive
//! integers where the textbook connection formula with M breaks down.

use super::bessel::exp_with_status;
use super::gamma::{ln_gamma_unchecked, log_beta_unchecked};
use super::SpecValue;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_TERMS: usize = 200_000;
const RESCALE_AT: f64 = 1e200;

/// ln M(a, b, x) for a > 0, b > 0 and x >= 0, where every series term is positive.
pub(crate) fn ln_hyp1f1_positive<T: Scalar>(a: T, b: T, x: T) -> T {
    let eps = T::epsilon();
    let rescale = T::lit(RESCALE_AT);
    let mut term = T::one();
    let mut sum = T::one();
    let mut ln_scale = T::zero();
    for n in 0..MAX_TERMS {
        let fnn = T::from_usize_lossy(n);
        let ratio = (a + fnn) / (b + fnn) * x / (fnn + T::one());
        term = term * ratio;
        sum = sum + term;
        if sum > rescale {
            sum = sum / rescale;
            term = term / rescale;
            ln_scale = ln_scale + rescale.ln();
        }
        // Past the peak the remaining tail is dominated by a geometric series.
        if ratio < T::one() {
            let tail = term * ratio / (T::one() - ratio);
            if tail <= eps * sum {
                break;
            }
        }
    }
    ln_scale + sum.ln()
}

/// Kummer's confluent hypergeometric function M(a, b, z) for a > 0, b > a and
/// z <= 0. The result lies in (0, 1].
pub fn kummer_m<T: Scalar>(a: T, b: T, z: T) -> Result<SpecValue<T>> {
    if !(a.is_finite() && a > T::zero()) {
        return Err(Error::domain("kummer_m", format!("a must be finite and > 0, got {a}")));
    }
    if !(b.is_finite() && b > a) {
        return Err(Error::domain("kummer_m", format!("b must exceed a, got a = {a}, b = {b}")));
    }
    if !(z.is_finite() && z <= T::zero()) {
        return Err(Error::domain("kummer_m", format!("z must be finite and <= 0, got {z}")));
    }
    Ok(clamp_unit(exp_with_status(ln_kummer_m_nonpositive(a, b, z))))
}

pub(crate) fn ln_kummer_m_nonpositive<T: Scalar>(a: T, b: T, z: T) -> T {
    if z == T::zero() {
        return T::zero();
    }
    z + ln_hyp1f1_positive(b - a, b, -z)
}

fn clamp_unit<T: Scalar>(mut v: SpecValue<T>) -> SpecValue<T> {
    // Rounding can push values a few ulps past the analytic bound of 1.
    v.value = v.value.min(T::one());
    v
}

/// ln of int_R exp(g(v)) dv with g(v) = -z e^v + a v + (b - a - 1) ln(1 + e^v),
/// i.e. Gamma(a) U(a, b, z). Requires a > 0 and either z > 0, or z = 0 with b < 1.
pub(crate) fn ln_tricomi_integral<T: Scalar>(a: T, b: T, z: T) -> T {
    let c = b - a - T::one();
    let softplus = |v: T| if v > T::zero() { v + (-v).exp().ln_1p() } else { v.exp().ln_1p() };
    let logistic = |v: T| if v > T::zero() { (T::one() + (-v).exp()).recip() } else { v.exp() / (T::one() + v.exp()) };
    let g = |v: T| -z * v.exp() + a * v + c * softplus(v);
    let dg = |v: T| -z * v.exp() + a + c * logistic(v);
    let d2g = |v: T| {
        let s = logistic(v);
        -z * v.exp() + c * s * (T::one() - s)
    };

    // dg starts at a > 0 as v -> -inf and ends negative, crossing zero once.
    let mut lo = -T::one();
    while dg(lo) <= T::zero() {
        lo = lo * T::lit(2.0);
    }
    let mut hi = T::one();
    while dg(hi) >= T::zero() {
        hi = hi * T::lit(2.0);
    }
    let mut mode = (lo + hi) / T::lit(2.0);
    for _ in 0..200 {
        let slope = dg(mode);
        if slope > T::zero() {
            lo = mode;
        } else {
            hi = mode;
        }
        let curv = d2g(mode);
        let newton = mode - slope / curv;
        mode = if curv < T::zero() && newton > lo && newton < hi { newton } else { (lo + hi) / T::lit(2.0) };
        if (hi - lo) < T::lit(1e-12) * (T::one() + mode.abs()) || slope == T::zero() {
            break;
        }
    }
    let g_max = g(mode);

    let curv = d2g(mode);
    let width = if curv < T::zero() { (-curv).sqrt().recip() } else { T::one() };
    // Truncate where the integrand falls below e^-50 of its peak.
    let drop = T::lit(50.0);
    let reach = |dir: T| {
        let mut dist = width;
        while g(mode + dir * dist) - g_max > -drop {
            dist = dist * T::lit(2.0);
        }
        dist
    };
    let left = mode - reach(-T::one());
    let right = mode + reach(T::one());

    let f = |v: T| (g(v) - g_max).exp();
    let mut n = 2usize;
    let mut h = (right - left) / T::from_usize_lossy(n);
    while h > width / T::lit(2.0) {
        n *= 2;
        h = h / T::lit(2.0);
    }
    let mut sum = (0..=n).map(|i| f(left + h * T::from_usize_lossy(i))).fold(T::zero(), |s, x| s + x);
    let mut estimate = sum * h;
    // The trapezoid error on an analytic integrand shrinks geometrically with
    // each halving, so once successive estimates agree to 1e-9 the latest one
    // is accurate to rounding.
    for _ in 0..16 {
        // Halve the step, reusing the existing nodes.
        let mids = (0..n).map(|i| f(left + h * (T::from_usize_lossy(i) + T::lit(0.5)))).fold(T::zero(), |s, x| s + x);
        sum = sum + mids;
        n *= 2;
        h = h / T::lit(2.0);
        let refined = sum * h;
        let converged = (refined - estimate).abs() <= T::lit(1e-9) * refined;
        estimate = refined;
        if converged {
            break;
        }
    }
    g_max + estimate.ln()
}

/// Tricomi's confluent hypergeometric function U(a, b, z) for a > 0 and z > 0.
///
/// z = 0 is accepted when b < 1 and returns the limit Gamma(1 - b) / Gamma(a - b + 1).
pub fn tricomi_u<T: Scalar>(a: T, b: T, z: T) -> Result<SpecValue<T>> {
    if !(a.is_finite() && a > T::zero()) {
        return Err(Error::domain("tricomi_u", format!("a must be finite and > 0, got {a}")));
    }
    if !b.is_finite() {
        return Err(Error::domain("tricomi_u", format!("b must be finite, got {b}")));
    }
    if !(z.is_finite() && z >= T::zero()) {
        return Err(Error::domain("tricomi_u", format!("z must be finite and >= 0, got {z}")));
    }
    if z == T::zero() && b >= T::one() {
        return Err(Error::domain("tricomi_u", format!("U(a, b, 0) diverges for b = {b} >= 1")));
    }
    Ok(exp_with_status(ln_tricomi_integral(a, b, z) - ln_gamma_unchecked(a)))
}

/// Gamma(beta + gamma) / Gamma(gamma) * U(beta, 1 - gamma, z): the Laplace
/// transform at z of a beta-prime(beta, gamma) variable. Lies in (0, 1].
pub(crate) fn tricomi_profile<T: Scalar>(beta: T, gamma: T, z: T) -> T {
    let ln_value = ln_tricomi_integral(beta, T::one() - gamma, z) - log_beta_unchecked(beta, gamma);
    ln_value.exp().min(T::one())
}
