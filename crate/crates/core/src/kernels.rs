//! Closed-form isotropic kernels built from nonnegative mixing laws.
//!
//! Each family pairs a mixing radius R with a scale lambda and an exponent
//! alpha in (0, 2]; the kernel profile is the Laplace transform of R,
//!
//! ```text
//! K(u) = E[exp(-lambda R r^alpha)],   r = |u| / lengthscale  (or sqrt(u' S u) / lengthscale)
//! ```
//!
//! | family | R | default lambda | K(u) at default lambda |
//! |--------|---|----------------|------------------------|
//! | exponential power | 1 | 1 | exp(-r^a) |
//! | generalized Cauchy | G_b | 1/(2b) | (1 + r^a / (2b))^-b |
//! | generalized Matern | 1/G_b | b/2 | x^b K_b(x) / (Gamma(b) 2^(b-1)), x = sqrt(2b) r^(a/2) |
//! | Kummer | Beta(b, g) | 1 | M(b, b+g, -r^a) |
//! | Beta | -log Beta(b, g) | 1 | B(b + r^a, g) / B(b, g) |
//! | Tricomi | F(2b, 2g) | 1 | Gamma(b+g)/Gamma(g) U(b, 1-g, (g/b) r^a) |
//!
//! A profile written as k(|u|^a) with a in (0, 1] (rather than k(|u|^2)) is
//! the same family with exponent 2a; no separate parameterization is exposed.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::dist::MixtureLaw;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Below this radius the Matern profile returns its analytic limit 1.
const MATERN_ORIGIN_CUTOFF: f64 = 1e-12;
/// Eigenvalues of sigma below `-SIGMA_NEG_TOL * trace` are rejected; others are clamped at 0.
const SIGMA_NEG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    ExponentialPower,
    GeneralizedCauchy,
    GeneralizedMatern,
    Kummer,
    Beta,
    Tricomi,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::ExponentialPower,
        Family::GeneralizedCauchy,
        Family::GeneralizedMatern,
        Family::Kummer,
        Family::Beta,
        Family::Tricomi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ExponentialPower => "exponential_power",
            Family::GeneralizedCauchy => "generalized_cauchy",
            Family::GeneralizedMatern => "generalized_matern",
            Family::Kummer => "kummer",
            Family::Beta => "beta",
            Family::Tricomi => "tricomi",
        }
    }

    fn needs_beta(self) -> bool {
        self != Family::ExponentialPower
    }

    fn needs_gamma(self) -> bool {
        matches!(self, Family::Kummer | Family::Beta | Family::Tricomi)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown kernel family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Isotropic,
    /// Product of univariate kernels, one per coordinate.
    Tensor,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Isotropic => "isotropic",
            Mode::Tensor => "tensor",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isotropic" => Ok(Mode::Isotropic),
            "tensor" => Ok(Mode::Tensor),
            other => Err(Error::InvalidSpec(format!("unknown mode `{other}` (expected isotropic or tensor)"))),
        }
    }
}

/// Symmetric d x d anisotropy matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SigmaMatrix<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidSigma(format!("expected {dim}x{dim} entries, got {}", data.len())));
        }
        Ok(SigmaMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        SigmaMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Parses rows separated by newlines or `;`, entries by commas or whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<T>> = text
            .split(['\n', ';'])
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, line)| {
                line.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|c| !c.is_empty())
                    .map(|c| {
                        c.parse::<T>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad sigma entry `{c}`") })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidSigma("matrix must be square".into()));
        }
        SigmaMatrix::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn to_inline(&self) -> String {
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// u' S u
    fn quadratic_form(&self, u: &[T]) -> T {
        let d = self.dim;
        (0..d).fold(T::zero(), |acc, i| acc + u[i] * (0..d).fold(T::zero(), |s, j| s + self.data[i * d + j] * u[j]))
    }
}

/// Family tag plus parameters: the single description shared by analytic
/// evaluation and spectral sampling. Call [`KernelSpec::validate`] to obtain a
/// usable [`Kernel`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<T> {
    pub family: Family,
    pub alpha: T,
    pub beta: Option<T>,
    pub gamma: Option<T>,
    /// `None` selects the family default.
    pub lambda: Option<T>,
    pub lengthscale: T,
    pub sigma: Option<SigmaMatrix<T>>,
    pub mode: Mode,
}

impl<T: Scalar> KernelSpec<T> {
    fn base(family: Family, alpha: T, beta: Option<T>, gamma: Option<T>) -> Self {
        KernelSpec { family, alpha, beta, gamma, lambda: None, lengthscale: T::one(), sigma: None, mode: Mode::Isotropic }
    }

    pub fn exponential_power(alpha: T) -> Self {
        Self::base(Family::ExponentialPower, alpha, None, None)
    }

    pub fn generalized_cauchy(alpha: T, beta: T) -> Self {
        Self::base(Family::GeneralizedCauchy, alpha, Some(beta), None)
    }

    pub fn generalized_matern(alpha: T, beta: T) -> Self {
        Self::base(Family::GeneralizedMatern, alpha, Some(beta), None)
    }

    pub fn kummer(alpha: T, beta: T, gamma: T) -> Self {
        Self::base(Family::Kummer, alpha, Some(beta), Some(gamma))
    }

    pub fn beta_kernel(alpha: T, beta: T, gamma: T) -> Self {
        Self::base(Family::Beta, alpha, Some(beta), Some(gamma))
    }

    pub fn tricomi(alpha: T, beta: T, gamma: T) -> Self {
        Self::base(Family::Tricomi, alpha, Some(beta), Some(gamma))
    }

    /// Generic constructor from a family tag; parameters the family does not use must be `None`.
    pub fn family(family: Family, alpha: T, beta: Option<T>, gamma: Option<T>) -> Self {
        Self::base(family, alpha, beta, gamma)
    }

    /// exp(-|u|)
    pub fn laplace() -> Self {
        Self::exponential_power(T::one()).with_lambda(T::one())
    }

    /// exp(-|u|^2 / 2)
    pub fn gaussian() -> Self {
        Self::exponential_power(T::lit(2.0)).with_lambda(T::lit(0.5))
    }

    /// Matern-nu: generalized Matern with alpha = 2 and lambda = nu / 2.
    pub fn matern(nu: T) -> Self {
        Self::generalized_matern(T::lit(2.0), nu).with_lambda(nu / T::lit(2.0))
    }

    /// 1 / (1 + |u|^alpha)
    pub fn power(alpha: T) -> Self {
        Self::generalized_cauchy(alpha, T::one()).with_lambda(T::one())
    }

    /// (1 + |u|^2 / (2 beta))^-beta, also known as the rational quadratic kernel.
    pub fn student(beta: T) -> Self {
        Self::generalized_cauchy(T::lit(2.0), beta).with_lambda((T::lit(2.0) * beta).recip())
    }

    pub fn rational_quadratic(beta: T) -> Self {
        Self::student(beta)
    }

    /// (1 + lambda |u|^alpha)^-beta with lambda = 1/(2 beta) when `table_scaling`
    /// is set and lambda = 1 otherwise.
    pub fn cauchy_generalized(alpha: T, beta: T, table_scaling: bool) -> Self {
        let lambda = if table_scaling { (T::lit(2.0) * beta).recip() } else { T::one() };
        Self::generalized_cauchy(alpha, beta).with_lambda(lambda)
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_lengthscale(mut self, lengthscale: T) -> Self {
        self.lengthscale = lengthscale;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_sigma(mut self, sigma: SigmaMatrix<T>) -> Self {
        self.sigma = Some(sigma);
        self
    }

    /// Family default for lambda.
    pub fn default_lambda(family: Family, beta: Option<T>) -> T {
        let beta = beta.unwrap_or_else(T::one);
        match family {
            Family::GeneralizedCauchy => (T::lit(2.0) * beta).recip(),
            Family::GeneralizedMatern => beta / T::lit(2.0),
            _ => T::one(),
        }
    }

    /// Checks every parameter and fills in the default lambda.
    pub fn validate(&self) -> Result<Kernel<T>> {
        let alpha = self.alpha.as_f64();
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let check = |name: &'static str, v: T| {
            let x = v.as_f64();
            if x.is_finite() && x > 0.0 {
                Ok(v)
            } else {
                Err(Error::NonPositiveParameter { name, value: x })
            }
        };
        let family = self.family;
        let beta = match (family.needs_beta(), self.beta) {
            (true, Some(b)) => Some(check("beta", b)?),
            (true, None) => return Err(Error::InvalidSpec(format!("{family} requires beta"))),
            (false, Some(_)) => return Err(Error::InvalidSpec(format!("{family} takes no beta parameter"))),
            (false, None) => None,
        };
        let gamma = match (family.needs_gamma(), self.gamma) {
            (true, Some(g)) => Some(check("gamma", g)?),
            (true, None) => return Err(Error::InvalidSpec(format!("{family} requires gamma"))),
            (false, Some(_)) => return Err(Error::InvalidSpec(format!("{family} takes no gamma parameter"))),
            (false, None) => None,
        };
        let lambda = check("lambda", self.lambda.unwrap_or_else(|| Self::default_lambda(family, beta)))?;
        check("lengthscale", self.lengthscale)?;

        let sigma_sqrt = match &self.sigma {
            None => None,
            Some(_) if self.mode == Mode::Tensor => {
                return Err(Error::InvalidSigma("an anisotropy matrix only applies to isotropic mode".into()))
            }
            Some(sigma) => {
                let d = sigma.dim;
                let scale = sigma.data.iter().fold(T::zero(), |m, x| m.max(x.abs()));
                for i in 0..d {
                    for j in 0..i {
                        let (a, b) = (sigma.data[i * d + j], sigma.data[j * d + i]);
                        if (a - b).abs() > T::lit(1e-12) * scale {
                            return Err(Error::InvalidSigma(format!("not symmetric at ({i},{j})")));
                        }
                    }
                }
                if sigma.data.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidSigma("entries must be finite".into()));
                }
                let root = linalg::symmetric_sqrt(d, &sigma.data, SIGMA_NEG_TOL)
                    .map_err(|l| Error::InvalidSigma(format!("not positive semidefinite (eigenvalue {l})")))?;
                Some(root)
            }
        };

        let law = match family {
            Family::ExponentialPower => MixtureLaw::ConstantOne,
            Family::GeneralizedCauchy => MixtureLaw::Gamma { beta: beta.unwrap() },
            Family::GeneralizedMatern => MixtureLaw::InverseGamma { beta: beta.unwrap() },
            Family::Kummer => MixtureLaw::Beta { beta: beta.unwrap(), gamma: gamma.unwrap() },
            Family::Beta => MixtureLaw::BetaExponential { beta: beta.unwrap(), gamma: gamma.unwrap() },
            Family::Tricomi => MixtureLaw::FisherF { beta: beta.unwrap(), gamma: gamma.unwrap() },
        };
        let spec = KernelSpec { lambda: Some(lambda), beta, gamma, ..self.clone() };
        Ok(Kernel { spec, lambda, law, sigma_sqrt })
    }

    /// Flat `key=value` text. The anisotropy matrix is written inline.
    pub fn to_kv(&self) -> String {
        let mut out = format!("family={}\nalpha={}\n", self.family, self.alpha);
        if let Some(b) = self.beta {
            out += &format!("beta={b}\n");
        }
        if let Some(g) = self.gamma {
            out += &format!("gamma={g}\n");
        }
        if let Some(l) = self.lambda {
            out += &format!("lambda={l}\n");
        }
        out += &format!("lengthscale={}\nmode={}\n", self.lengthscale, self.mode);
        if let Some(s) = &self.sigma {
            out += &format!("sigma={}\n", s.to_inline());
        }
        out
    }

    /// Parses the `key=value` form. `sigma=` holds an inline matrix; `sigma_file=`
    /// names a file, resolved against `base_dir` when relative.
    pub fn from_kv(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut family = None;
        let mut spec = KernelSpec::base(Family::ExponentialPower, T::one(), None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || value.parse::<T>().map_err(|_| err(format!("`{key}` is not a number: `{value}`")));
            match key {
                "family" => family = Some(value.parse::<Family>()?),
                "alpha" => spec.alpha = num()?,
                "beta" => spec.beta = Some(num()?),
                "gamma" => spec.gamma = Some(num()?),
                "lambda" => spec.lambda = Some(num()?),
                "lengthscale" => spec.lengthscale = num()?,
                "mode" => spec.mode = value.parse()?,
                "sigma" => spec.sigma = Some(SigmaMatrix::parse(value)?),
                "sigma_file" => {
                    let path = match base_dir {
                        Some(dir) if Path::new(value).is_relative() => dir.join(value),
                        _ => value.into(),
                    };
                    spec.sigma = Some(SigmaMatrix::read(&path)?);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        spec.family = family.ok_or_else(|| Error::InvalidSpec("missing `family`".into()))?;
        Ok(spec)
    }
}

/// A validated kernel: normalized spec, mixing law and precomputed sigma root.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T> {
    spec: KernelSpec<T>,
    lambda: T,
    law: MixtureLaw<T>,
    sigma_sqrt: Option<Vec<T>>,
}

impl<T: Scalar> Kernel<T> {
    /// The normalized spec (lambda filled in).
    pub fn spec(&self) -> &KernelSpec<T> {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn alpha(&self) -> T {
        self.spec.alpha
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn lengthscale(&self) -> T {
        self.spec.lengthscale
    }

    pub fn mode(&self) -> Mode {
        self.spec.mode
    }

    pub fn mixture_law(&self) -> &MixtureLaw<T> {
        &self.law
    }

    pub(crate) fn sigma_sqrt(&self) -> Option<&[T]> {
        self.sigma_sqrt.as_deref()
    }

    /// Input dimension fixed by the anisotropy matrix, if any.
    pub fn required_dim(&self) -> Option<usize> {
        self.spec.sigma.as_ref().map(SigmaMatrix::dim)
    }

    /// First 16 hex digits of the SHA-256 of the canonical serialization.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.spec.to_kv().as_bytes());
        hex::encode(&digest[..8])
    }

    /// Univariate profile k(r) = E[exp(-lambda R r^alpha)] at a scaled radius r >= 0.
    pub fn profile(&self, r: T) -> T {
        if r <= T::zero() {
            return T::one();
        }
        if self.spec.family == Family::GeneralizedMatern && r < T::lit(MATERN_ORIGIN_CUTOFF) {
            return T::one();
        }
        self.law.laplace_transform(self.lambda * r.powf(self.spec.alpha))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self.required_dim() {
            Some(expected) if expected != d => Err(Error::DimensionMismatch { expected, got: d }),
            _ if d == 0 => Err(Error::Empty("input vector")),
            _ => Ok(()),
        }
    }

    /// Scaled isotropic radius |u| / lengthscale, or sqrt(u' S u) / lengthscale.
    pub fn radius(&self, u: &[T]) -> Result<T> {
        self.check_dim(u.len())?;
        let sq = match &self.spec.sigma {
            Some(sigma) => sigma.quadratic_form(u).max(T::zero()),
            None => u.iter().fold(T::zero(), |s, &x| s + x * x),
        };
        Ok(sq.sqrt() / self.spec.lengthscale)
    }

    /// Analytic kernel value K(u) with K(0) = 1.
    pub fn evaluate(&self, u: &[T]) -> Result<T> {
        match self.spec.mode {
            Mode::Isotropic => Ok(self.profile(self.radius(u)?)),
            Mode::Tensor => {
                self.check_dim(u.len())?;
                Ok(u.iter().fold(T::one(), |acc, &x| acc * self.profile(x.abs() / self.spec.lengthscale)))
            }
        }
    }

    /// Analytic Gram matrix over `points`, with its smallest eigenvalue.
    pub fn gram(&self, points: &[Vec<T>]) -> Result<GramSummary<T>> {
        let n = points.len();
        if n == 0 {
            return Err(Error::Empty("point set"));
        }
        let d = points[0].len();
        if let Some(bad) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: bad.len() });
        }
        self.check_dim(d)?;
        let rows: Vec<Vec<T>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            return T::one();
                        }
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        let diff: Vec<T> = points[a].iter().zip(&points[b]).map(|(x, y)| *x - *y).collect();
                        self.evaluate(&diff).expect("dimension checked")
                    })
                    .collect()
            })
            .collect();
        Ok(GramSummary::new(n, rows.into_iter().flatten().collect()))
    }
}

/// Gram matrix (row-major) with eigenvalue diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSummary<T> {
    pub n: usize,
    pub matrix: Vec<T>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl<T: Scalar> GramSummary<T> {
    pub fn new(n: usize, matrix: Vec<T>) -> Self {
        let eig = linalg::symmetric_eigenvalues(n, &matrix);
        GramSummary { n, matrix, min_eigenvalue: eig[0], max_eigenvalue: eig[n - 1] }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix[i * self.n + j]
    }
}

/// A named kernel configuration.
#[derive(Debug, Clone)]
pub struct NamedPreset<T> {
    pub name: &'static str,
    pub spec: KernelSpec<T>,
}

/// The named special cases of the kernel families, at representative parameters.
pub fn presets<T: Scalar>() -> Vec<NamedPreset<T>> {
    let h = T::lit(1.5);
    vec![
        NamedPreset { name: "laplace", spec: KernelSpec::laplace() },
        NamedPreset { name: "gaussian", spec: KernelSpec::gaussian() },
        NamedPreset { name: "matern12", spec: KernelSpec::matern(T::lit(0.5)) },
        NamedPreset { name: "matern32", spec: KernelSpec::matern(h) },
        NamedPreset { name: "matern52", spec: KernelSpec::matern(T::lit(2.5)) },
        NamedPreset { name: "power", spec: KernelSpec::power(h) },
        NamedPreset { name: "student", spec: KernelSpec::student(h) },
        NamedPreset { name: "rational_quadratic", spec: KernelSpec::rational_quadratic(h) },
        NamedPreset { name: "cauchy_generalized", spec: KernelSpec::cauchy_generalized(h, h, false) },
    ]
}
