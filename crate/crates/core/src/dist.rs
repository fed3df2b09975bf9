//! Seedable random variate generators for the mixing laws of the kernel table.
//!
//! Every stream is a ChaCha20 generator keyed by the 64-bit seed and
//! positioned on the 64-bit ChaCha stream `stream_id`, so independent streams
//! need no coordination and a `(seed, stream_id)` pair reproduces the same
//! sequence on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::specfun;

/// A single-owner random stream identified by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    block: Option<u64>,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream { seed, stream_id, block: None, rng }
    }

    /// Independent stream for work partition `block` of `(seed, stream_id)`.
    ///
    /// The block index is folded into the ChaCha key, so block streams never
    /// overlap with each other or with the parent stream.
    pub fn block(seed: u64, stream_id: u64, block: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"spectral-rff block key");
        hasher.update(seed.to_le_bytes());
        hasher.update(block.to_le_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(stream_id);
        RandomStream { seed, stream_id, block: Some(block), rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn block_index(&self) -> Option<u64> {
        self.block
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.sample(Open01);
            if u > 0.0 && u < 1.0 {
                return u;
            }
        }
    }

    pub fn std_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// ln G for G ~ Gamma(shape, 1). Small shapes use G_shape = G_{shape+1} U^{1/shape}
    /// in log form so the draw never underflows to zero.
    fn ln_gamma_variate(&mut self, shape: f64) -> f64 {
        if shape >= 1.0 {
            let g = Gamma::new(shape, 1.0).expect("shape validated").sample(&mut self.rng);
            g.ln()
        } else {
            let boosted = Gamma::new(shape + 1.0, 1.0).expect("shape validated").sample(&mut self.rng);
            boosted.ln() + self.uniform_open().ln() / shape
        }
    }
}

fn positive_f64<T: Scalar>(name: &'static str, v: T) -> Result<f64> {
    let x = v.as_f64();
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::NonPositiveParameter { name, value: x })
    }
}

pub fn sample_uniform_open<T: Scalar>(stream: &mut RandomStream) -> T {
    T::lit(stream.uniform_open())
}

pub fn sample_std_normal<T: Scalar>(stream: &mut RandomStream) -> T {
    T::lit(stream.std_normal())
}

/// Gamma(shape, 1) draw, density x^{shape-1} e^{-x} / Gamma(shape).
pub fn sample_gamma<T: Scalar>(stream: &mut RandomStream, shape: T) -> Result<T> {
    let shape = positive_f64("beta", shape)?;
    Ok(T::lit(stream.ln_gamma_variate(shape).exp()))
}

/// Distribution of the nonnegative mixing radius R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixtureLaw<T> {
    /// R = 1.
    ConstantOne,
    /// R = G_beta.
    Gamma { beta: T },
    /// R = 1 / G_beta.
    InverseGamma { beta: T },
    /// R = G_beta / (G_beta + G_gamma).
    Beta { beta: T, gamma: T },
    /// R = -log of a Beta(beta, gamma) draw.
    BetaExponential { beta: T, gamma: T },
    /// R = gamma G_beta / (beta G_gamma), Fisher-Snedecor with (2 beta, 2 gamma) degrees of freedom.
    FisherF { beta: T, gamma: T },
}

impl<T: Scalar> MixtureLaw<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MixtureLaw::ConstantOne => Ok(()),
            MixtureLaw::Gamma { beta } | MixtureLaw::InverseGamma { beta } => positive_f64("beta", beta).map(drop),
            MixtureLaw::Beta { beta, gamma }
            | MixtureLaw::BetaExponential { beta, gamma }
            | MixtureLaw::FisherF { beta, gamma } => {
                positive_f64("beta", beta)?;
                positive_f64("gamma", gamma).map(drop)
            }
        }
    }

    /// Whether drawing R consumes randomness (false only for the constant law).
    pub fn is_random(&self) -> bool {
        !matches!(self, MixtureLaw::ConstantOne)
    }

    /// Laplace transform E[exp(-s R)] for s >= 0, in closed form.
    pub fn laplace_transform(&self, s: T) -> T {
        if s <= T::zero() {
            return T::one();
        }
        match *self {
            MixtureLaw::ConstantOne => (-s).exp(),
            MixtureLaw::Gamma { beta } => (-beta * s.ln_1p()).exp(),
            MixtureLaw::InverseGamma { beta } => {
                // 2 s^{beta/2} K_beta(2 sqrt(s)) / Gamma(beta)
                let two = T::lit(2.0);
                let ln_value = two.ln() + beta / two * s.ln() + specfun::ln_bessel_k(beta, two * s.sqrt())
                    - specfun::ln_gamma_unchecked(beta);
                ln_value.exp().min(T::one())
            }
            MixtureLaw::Beta { beta, gamma } => {
                specfun::ln_kummer_m_nonpositive(beta, beta + gamma, -s).exp().min(T::one())
            }
            MixtureLaw::BetaExponential { beta, gamma } => {
                let ln_value = specfun::log_beta_unchecked(beta + s, gamma) - specfun::log_beta_unchecked(beta, gamma);
                ln_value.exp().min(T::one())
            }
            MixtureLaw::FisherF { beta, gamma } => specfun::tricomi_profile(beta, gamma, gamma / beta * s),
        }
    }
}

/// One draw of the mixing radius R >= 0.
pub fn sample_mixture<T: Scalar>(stream: &mut RandomStream, law: &MixtureLaw<T>) -> Result<T> {
    law.validate()?;
    Ok(T::lit(ln_mixture_draw(stream, law).exp()))
}

/// ln R for one draw of a validated law. Working in logs keeps heavy-tailed
/// draws finite when R is later raised to the power 1/alpha.
pub(crate) fn ln_mixture_draw<T: Scalar>(stream: &mut RandomStream, law: &MixtureLaw<T>) -> f64 {
    match *law {
        MixtureLaw::ConstantOne => 0.0,
        MixtureLaw::Gamma { beta } => stream.ln_gamma_variate(beta.as_f64()),
        MixtureLaw::InverseGamma { beta } => -stream.ln_gamma_variate(beta.as_f64()),
        MixtureLaw::Beta { beta, gamma } => {
            let lb = stream.ln_gamma_variate(beta.as_f64());
            let lg = stream.ln_gamma_variate(gamma.as_f64());
            -ln_1p_exp(lg - lb)
        }
        MixtureLaw::BetaExponential { beta, gamma } => {
            // -ln(Gb / (Gb + Gg)) = ln(1 + Gg / Gb)
            let lb = stream.ln_gamma_variate(beta.as_f64());
            let lg = stream.ln_gamma_variate(gamma.as_f64());
            ln_1p_exp(lg - lb).ln()
        }
        MixtureLaw::FisherF { beta, gamma } => {
            let (b, g) = (beta.as_f64(), gamma.as_f64());
            let lb = stream.ln_gamma_variate(b);
            let lg = stream.ln_gamma_variate(g);
            (g / b).ln() + lb - lg
        }
    }
}

/// ln(1 + e^x) without overflow.
fn ln_1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
