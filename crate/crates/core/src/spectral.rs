//! Spectral sampling: random projections whose characteristic function is the kernel.
//!
//! A symmetric alpha-stable vector is drawn as `S = sqrt(2 A) N` with a
//! positive stable factor `A` and a standard normal vector `N`; scaling by
//! `(lambda R)^(1/alpha)` with R from the family's mixing law gives
//! `E[cos(eta . u)] = K(u)`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::dist::{self, RandomStream};
use crate::error::{Error, Result};
use crate::kernels::{Kernel, Mode};
use crate::scalar::Scalar;

/// Rows sampled from one block stream.
pub const BLOCK_ROWS: usize = 256;

const CSV_MAGIC: &str = "# spectral-rff v1";

/// Stable factor A = sin(a pi/4 + a theta/2) / cos(theta)^(2/a) * (cos(a pi/4 + (a/2 - 1) theta) / w)^(2/a - 1).
///
/// `theta` must lie in (-pi/2, pi/2) and `w > 0`. Returns exactly 1 at alpha = 2.
pub fn stable_factor_a<T: Scalar>(alpha: T, theta: T, w: T) -> Result<T> {
    let a = alpha.as_f64();
    if !(a > 0.0 && a <= 2.0) {
        return Err(Error::AlphaOutOfRange(a));
    }
    let (th, w) = (theta.as_f64(), w.as_f64());
    if !(th.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain("stable_factor_a", format!("theta = {th} outside (-pi/2, pi/2)")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::domain("stable_factor_a", format!("w = {w} must be positive")));
    }
    if a == 2.0 {
        return Ok(T::one());
    }
    Ok(T::lit(ln_stable_factor(a, th, w).exp()))
}

/// ln A, evaluated in logs so small alpha does not overflow the powers.
fn ln_stable_factor(a: f64, theta: f64, w: f64) -> f64 {
    let base = a * std::f64::consts::FRAC_PI_4;
    let p = 2.0 / a;
    (base + 0.5 * a * theta).sin().ln() - p * theta.cos().ln() + (p - 1.0) * ((base + (0.5 * a - 1.0) * theta).cos().ln() - w.ln())
}

/// ln A from two fresh uniforms, or 0 at alpha = 2 without consuming randomness.
fn draw_ln_stable_factor(stream: &mut RandomStream, alpha: f64) -> Option<f64> {
    if alpha == 2.0 {
        return None;
    }
    let w = -stream.uniform_open().ln();
    let theta = std::f64::consts::PI * (stream.uniform_open() - 0.5);
    Some(ln_stable_factor(alpha, theta, w))
}

/// One symmetric alpha-stable vector: a single A shared by d fresh normals.
pub fn sample_stable_vector<T: Scalar>(stream: &mut RandomStream, alpha: T, d: usize) -> Result<Vec<T>> {
    let a = alpha.as_f64();
    if !(a > 0.0 && a <= 2.0) {
        return Err(Error::AlphaOutOfRange(a));
    }
    if d == 0 {
        return Err(Error::Empty("dimension"));
    }
    let scale = match draw_ln_stable_factor(stream, a) {
        Some(ln_a) => (0.5 * (std::f64::consts::LN_2 + ln_a)).exp(),
        None => std::f64::consts::SQRT_2,
    };
    Ok((0..d).map(|_| T::lit(scale * stream.std_normal())).collect())
}

/// Scalar random variates consumed while sampling, by kind.
///
/// Only draws that carry randomness are counted: the radius of the
/// exponential power family is the constant 1 and the stable factor at
/// alpha = 2 is the constant 1, so neither is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VariateCounts {
    pub normals: u64,
    pub stable_factors: u64,
    pub radii: u64,
}

impl VariateCounts {
    pub fn total(&self) -> u64 {
        self.normals + self.stable_factors + self.radii
    }

    fn add(self, other: VariateCounts) -> VariateCounts {
        VariateCounts {
            normals: self.normals + other.normals,
            stable_factors: self.stable_factors + other.stable_factors,
            radii: self.radii + other.radii,
        }
    }
}

/// M sampled spectral vectors in R^d with the provenance that regenerates them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet<T> {
    dim: usize,
    count: usize,
    vectors: Vec<T>,
    seed: u64,
    stream_id: u64,
    fingerprint: String,
    mode: Mode,
}

impl<T: Scalar> ProjectionSet<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn row(&self, m: usize) -> &[T] {
        &self.vectors[m * self.dim..(m + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.vectors.chunks_exact(self.dim)
    }

    /// Row-major M x d entries.
    pub fn vectors(&self) -> &[T] {
        &self.vectors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Keeps the first `m` rows; a prefix of a sample is itself a sample.
    pub fn truncated(&self, m: usize) -> ProjectionSet<T> {
        let m = m.min(self.count);
        ProjectionSet { count: m, vectors: self.vectors[..m * self.dim].to_vec(), fingerprint: self.fingerprint.clone(), ..*self }
    }

    pub fn header(&self) -> String {
        format!(
            "{CSV_MAGIC}; kernel={}; seed={}; stream={}; mode={}",
            self.fingerprint, self.seed, self.stream_id, self.mode
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.header())?;
        let mut line = String::new();
        for row in self.rows() {
            line.clear();
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                write!(line, "{x:.16e}").expect("write to String");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or(Error::Empty("projection file"))??;
        let fields = header
            .strip_prefix(CSV_MAGIC)
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("expected `{CSV_MAGIC}` header") })?;
        let (mut fingerprint, mut seed, mut stream_id, mut mode) = (None, None, None, None);
        for field in fields.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let bad = || Error::Parse { line: 1, msg: format!("bad header field `{field}`") };
            let (k, v) = field.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "kernel" => fingerprint = Some(v.trim().to_string()),
                "seed" => seed = Some(v.trim().parse().map_err(|_| bad())?),
                "stream" => stream_id = Some(v.trim().parse().map_err(|_| bad())?),
                "mode" => mode = Some(v.trim().parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let missing = |name: &str| Error::Parse { line: 1, msg: format!("header lacks `{name}`") };
        let mut vectors = Vec::new();
        let mut dim = 0;
        let mut count = 0;
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<T> = line
                .split(',')
                .map(|c| {
                    let c = c.trim();
                    match c.parse::<T>() {
                        Ok(x) if x.is_finite() => Ok(x),
                        _ => Err(Error::Parse { line: lineno, msg: format!("bad entry `{c}`") }),
                    }
                })
                .collect::<Result<_>>()?;
            if count == 0 {
                dim = row.len();
            } else if row.len() != dim {
                return Err(Error::Parse { line: lineno, msg: format!("expected {dim} columns, got {}", row.len()) });
            }
            vectors.extend(row);
            count += 1;
        }
        if count == 0 {
            return Err(Error::Empty("projection file"));
        }
        Ok(ProjectionSet {
            dim,
            count,
            vectors,
            seed: seed.ok_or_else(|| missing("seed"))?,
            stream_id: stream_id.ok_or_else(|| missing("stream"))?,
            fingerprint: fingerprint.ok_or_else(|| missing("kernel"))?,
            mode: mode.ok_or_else(|| missing("mode"))?,
        })
    }
}

/// Samples M projection vectors for a validated kernel in dimension `dim`.
///
/// Rows are generated in blocks of [`BLOCK_ROWS`], each from its own
/// `RandomStream::block(seed, stream_id, b)`, so the result does not depend on
/// the number of worker threads.
pub fn sample_projections<T: Scalar>(kernel: &Kernel<T>, dim: usize, count: usize, seed: u64, stream_id: u64) -> Result<ProjectionSet<T>> {
    sample_projections_counted(kernel, dim, count, seed, stream_id).map(|(p, _)| p)
}

/// As [`sample_projections`], also returning the number of variates drawn.
pub fn sample_projections_counted<T: Scalar>(
    kernel: &Kernel<T>,
    dim: usize,
    count: usize,
    seed: u64,
    stream_id: u64,
) -> Result<(ProjectionSet<T>, VariateCounts)> {
    if dim == 0 {
        return Err(Error::Empty("dimension"));
    }
    if count == 0 {
        return Err(Error::Empty("projection count"));
    }
    if let Some(expected) = kernel.required_dim() {
        if expected != dim {
            return Err(Error::DimensionMismatch { expected, got: dim });
        }
    }
    let sampler = RowSampler::new(kernel, dim);
    let blocks = count.div_ceil(BLOCK_ROWS);
    let parts: Vec<(Vec<T>, VariateCounts)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let rows = BLOCK_ROWS.min(count - b * BLOCK_ROWS);
            let mut stream = RandomStream::block(seed, stream_id, b as u64);
            let mut out = Vec::with_capacity(rows * dim);
            let mut counts = VariateCounts::default();
            let mut row = vec![0.0; dim];
            for _ in 0..rows {
                sampler.fill_row(&mut stream, &mut row, &mut counts);
                out.extend(row.iter().map(|&x| T::lit(x)));
            }
            (out, counts)
        })
        .collect();
    let mut vectors = Vec::with_capacity(count * dim);
    let mut counts = VariateCounts::default();
    for (v, c) in parts {
        vectors.extend(v);
        counts = counts.add(c);
    }
    if vectors.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("sample_projections", "a projection overflowed; alpha or the mixing law is too heavy-tailed for this precision"));
    }
    let set = ProjectionSet { dim, count, vectors, seed, stream_id, fingerprint: kernel.fingerprint(), mode: kernel.mode() };
    Ok((set, counts))
}

/// Per-row sampling recipe with the kernel parameters lowered to f64.
struct RowSampler<'a, T> {
    kernel: &'a Kernel<T>,
    dim: usize,
    alpha: f64,
    ln_lambda: f64,
    inv_lengthscale: f64,
    sigma_sqrt: Option<Vec<f64>>,
}

impl<'a, T: Scalar> RowSampler<'a, T> {
    fn new(kernel: &'a Kernel<T>, dim: usize) -> Self {
        RowSampler {
            kernel,
            dim,
            alpha: kernel.alpha().as_f64(),
            ln_lambda: kernel.lambda().as_f64().ln(),
            inv_lengthscale: 1.0 / kernel.lengthscale().as_f64(),
            sigma_sqrt: kernel.sigma_sqrt().map(|s| s.iter().map(|x| x.as_f64()).collect()),
        }
    }

    /// (lambda R)^(1/alpha) sqrt(2 A) / lengthscale for one fresh (R, A) pair.
    fn draw_scale(&self, stream: &mut RandomStream, counts: &mut VariateCounts) -> f64 {
        let law = self.kernel.mixture_law();
        let ln_r = dist::ln_mixture_draw(stream, law);
        if law.is_random() {
            counts.radii += 1;
        }
        let ln_lr = self.ln_lambda + ln_r;
        let scale = match draw_ln_stable_factor(stream, self.alpha) {
            Some(ln_a) => {
                counts.stable_factors += 1;
                (ln_lr / self.alpha + 0.5 * (std::f64::consts::LN_2 + ln_a)).exp()
            }
            // alpha = 2: (lambda R)^(1/2) sqrt(2) = sqrt(2 lambda R), exact for the Gaussian preset.
            None if ln_r == 0.0 => (2.0 * self.kernel.lambda().as_f64()).sqrt(),
            None => (0.5 * (std::f64::consts::LN_2 + ln_lr)).exp(),
        };
        scale * self.inv_lengthscale
    }

    fn fill_row(&self, stream: &mut RandomStream, row: &mut [f64], counts: &mut VariateCounts) {
        match self.kernel.mode() {
            Mode::Isotropic => {
                let scale = self.draw_scale(stream, counts);
                for x in row.iter_mut() {
                    *x = scale * stream.std_normal();
                }
                counts.normals += self.dim as u64;
                if let Some(root) = &self.sigma_sqrt {
                    let d = self.dim;
                    let z = row.to_vec();
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = (0..d).map(|i| z[i] * root[i * d + j]).sum();
                    }
                }
            }
            Mode::Tensor => {
                for x in row.iter_mut() {
                    let scale = self.draw_scale(stream, counts);
                    *x = scale * stream.std_normal();
                    counts.normals += 1;
                }
            }
        }
    }
}
