//! Real-valued special functions behind the closed-form kernels.
//!
//! | function | method |
//! |----------|--------|
//! | [`gamma_fn`], [`ln_gamma`] | Lanczos (g = 7); Stirling series for x >= 10 |
//! | [`log_beta`] | Stirling corrections with `ln_1p` for large arguments |
//! | [`bessel_k`] | Temme series (x < 2), Steed CF2 (x >= 2), forward recurrence in order |
//! | [`kummer_m`] | positive-term series after Kummer's transformation |
//! | [`tricomi_u`] | trapezoid rule on the log-transformed Laplace integral |
//!
//! All functions are pure and safe to call from any thread.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::bessel_k;
pub use gamma::{gamma_fn, ln_gamma, log_beta};
pub use hypergeometric::{kummer_m, tricomi_u};

pub(crate) use bessel::ln_bessel_k;
pub(crate) use gamma::{ln_gamma_unchecked, log_beta_unchecked};
pub(crate) use hypergeometric::{ln_kummer_m_nonpositive, tricomi_profile};

/// Range status attached to a special-function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The value is finite and carries full accuracy.
    Ok,
    /// The true value is below the smallest normal number; `value` is exactly 0.
    UnderflowToZero,
    /// The true value exceeds the largest finite number; `value` is that maximum.
    OverflowSaturated,
}

/// A special-function value together with its range status.
///
/// Domain errors are reported through [`crate::Error::Domain`] instead of a
/// status, so a `SpecValue` always holds a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecValue<T> {
    pub value: T,
    pub status: Status,
}

impl<T> SpecValue<T> {
    pub(crate) fn ok(value: T) -> Self {
        SpecValue { value, status: Status::Ok }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}
