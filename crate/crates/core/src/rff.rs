//! Random Fourier features: the Monte Carlo kernel estimator, its explicit
//! feature map, approximation diagnostics and ridge regression on the features.
//!
//! With projections `eta_1..eta_M`,
//!
//! ```text
//! K_M(u) = (1/M) sum_m cos(eta_m . u)
//! phi(x) = sqrt(1/M) [cos(eta_1 . x) .. cos(eta_M . x), sin(eta_1 . x) .. sin(eta_M . x)]
//! ```
//!
//! so that `phi(x) . phi(y) = K_M(x - y)` term by term.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{GramSummary, Kernel, KernelSpec};
use crate::linalg;
use crate::scalar::Scalar;
use crate::spectral::{sample_projections, ProjectionSet};

const MODEL_MAGIC: &str = "# spectral-rff model v1";

fn dot<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.as_f64() * y.as_f64()).sum()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Monte Carlo kernel estimate K_M(u); exactly 1 at u = 0 and even in u.
pub fn approx_kernel<T: Scalar>(pset: &ProjectionSet<T>, u: &[T]) -> Result<T> {
    check_dim(pset.dim(), u.len())?;
    let sum: f64 = pset.rows().map(|eta| dot(eta, u).cos()).sum();
    Ok(T::lit(sum / pset.count() as f64))
}

/// The 2M-dimensional cosine/sine embedding of a projection set.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap<T> {
    projections: ProjectionSet<T>,
    scale: f64,
}

impl<T: Scalar> FeatureMap<T> {
    pub fn new(projections: ProjectionSet<T>) -> Self {
        let scale = (1.0 / projections.count() as f64).sqrt();
        FeatureMap { projections, scale }
    }

    pub fn projections(&self) -> &ProjectionSet<T> {
        &self.projections
    }

    pub fn input_dim(&self) -> usize {
        self.projections.dim()
    }

    /// 2M
    pub fn output_dim(&self) -> usize {
        2 * self.projections.count()
    }

    pub fn scale(&self) -> T {
        T::lit(self.scale)
    }

    pub fn embed(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.embed_f64(x)?.into_iter().map(T::lit).collect())
    }

    fn embed_f64(&self, x: &[T]) -> Result<Vec<f64>> {
        check_dim(self.input_dim(), x.len())?;
        let m = self.projections.count();
        let mut out = vec![0.0; 2 * m];
        for (i, eta) in self.projections.rows().enumerate() {
            let (s, c) = dot(eta, x).sin_cos();
            out[i] = self.scale * c;
            out[m + i] = self.scale * s;
        }
        Ok(out)
    }

    /// Embeds every point, in parallel over points.
    pub fn embed_batch(&self, points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        points.par_iter().map(|x| self.embed(x)).collect()
    }

    fn design_matrix(&self, points: &[Vec<T>]) -> Result<Vec<Vec<f64>>> {
        points.par_iter().map(|x| self.embed_f64(x)).collect()
    }

    /// Gram matrix phi(x_i) . phi(x_j) over `points`.
    pub fn gram(&self, points: &[Vec<T>]) -> Result<GramSummary<T>> {
        if points.is_empty() {
            return Err(Error::Empty("point set"));
        }
        let phi = self.design_matrix(points)?;
        let n = points.len();
        let matrix = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| T::lit(dot_f64(&phi[i], &phi[j]))).collect();
        Ok(GramSummary::new(n, matrix))
    }
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Analytic vs Monte Carlo values at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointError<T> {
    pub u: Vec<T>,
    pub analytic: T,
    pub approx: T,
    pub diff: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub points: Vec<PointError<T>>,
    pub sup: T,
    pub rms: T,
    /// Nominal per-point tolerance 4 / sqrt(M).
    pub band: T,
    pub features: usize,
}

impl<T: Scalar> ErrorReport<T> {
    pub fn within_band(&self) -> bool {
        self.sup <= self.band
    }
}

/// Compares K_M against the analytic kernel over `grid`.
pub fn error_report<T: Scalar>(kernel: &Kernel<T>, pset: &ProjectionSet<T>, grid: &[Vec<T>]) -> Result<ErrorReport<T>> {
    if pset.fingerprint() != kernel.fingerprint() {
        return Err(Error::InvalidSpec(format!(
            "projections were sampled for kernel {}, not {}",
            pset.fingerprint(),
            kernel.fingerprint()
        )));
    }
    if grid.is_empty() {
        return Err(Error::Empty("evaluation grid"));
    }
    let points: Vec<PointError<T>> = grid
        .par_iter()
        .map(|u| {
            let analytic = kernel.evaluate(u)?;
            let approx = approx_kernel(pset, u)?;
            Ok(PointError { u: u.clone(), analytic, approx, diff: approx - analytic })
        })
        .collect::<Result<_>>()?;
    let sup = points.iter().map(|p| p.diff.as_f64().abs()).fold(0.0, f64::max);
    let rms = (points.iter().map(|p| p.diff.as_f64().powi(2)).sum::<f64>() / points.len() as f64).sqrt();
    let m = pset.count();
    Ok(ErrorReport { points, sup: T::lit(sup), rms: T::lit(rms), band: T::lit(4.0 / (m as f64).sqrt()), features: m })
}

/// Least-squares slope of ln(mean sup error) against ln M.
///
/// For each M the sup error over `grid` is averaged across `seeds`; a Monte
/// Carlo rate gives a slope near -1/2.
pub fn convergence_slope<T: Scalar>(kernel: &Kernel<T>, dim: usize, grid: &[Vec<T>], counts: &[usize], seeds: &[u64]) -> Result<f64> {
    if counts.len() < 2 || seeds.is_empty() {
        return Err(Error::Empty("convergence sweep"));
    }
    let mut xs = Vec::with_capacity(counts.len());
    let mut ys = Vec::with_capacity(counts.len());
    for &m in counts {
        let mut total = 0.0;
        for &seed in seeds {
            let pset = sample_projections(kernel, dim, m, seed, 0)?;
            total += error_report(kernel, &pset, grid)?.sup.as_f64();
        }
        xs.push((m as f64).ln());
        ys.push((total / seeds.len() as f64).ln());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Ridge regression on random features. Targets are centred by their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel<T> {
    spec: KernelSpec<T>,
    features: FeatureMap<T>,
    weights: Vec<T>,
    ridge: T,
    y_mean: T,
}

impl<T: Scalar> RidgeModel<T> {
    pub fn spec(&self) -> &KernelSpec<T> {
        &self.spec
    }

    pub fn feature_map(&self) -> &FeatureMap<T> {
        &self.features
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn ridge(&self) -> T {
        self.ridge
    }

    pub fn y_mean(&self) -> T {
        self.y_mean
    }

    pub fn input_dim(&self) -> usize {
        self.features.input_dim()
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let p = self.features.projections();
        writeln!(out, "{MODEL_MAGIC}")?;
        writeln!(out, "fingerprint={}", p.fingerprint())?;
        writeln!(out, "seed={}", p.seed())?;
        writeln!(out, "stream={}", p.stream_id())?;
        writeln!(out, "features={}", p.count())?;
        writeln!(out, "dim={}", p.dim())?;
        writeln!(out, "ridge={}", self.ridge)?;
        writeln!(out, "y_mean={}", self.y_mean)?;
        write!(out, "{}", self.spec.to_kv())?;
        writeln!(out, "weights")?;
        for w in &self.weights {
            writeln!(out, "{w}")?;
        }
        Ok(())
    }

    /// Reads a model and regenerates its projections from the stored seed.
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let first = lines.next().map(|(_, l)| l).transpose()?;
        if first.as_deref().map(str::trim) != Some(MODEL_MAGIC) {
            return Err(Error::Parse { line: 1, msg: format!("expected `{MODEL_MAGIC}`") });
        }
        let mut spec_text = String::new();
        let (mut fingerprint, mut seed, mut stream, mut count, mut dim, mut ridge, mut y_mean) =
            (None, None, None, None, None, None, None);
        let mut weights = Vec::new();
        let mut in_weights = false;
        for (i, line) in lines {
            let line = line?;
            let line = line.trim();
            let lineno = i + 1;
            let err = |msg: String| Error::Parse { line: lineno, msg };
            if line.is_empty() {
                continue;
            }
            if in_weights {
                weights.push(line.parse::<T>().map_err(|_| err(format!("bad weight `{line}`")))?);
                continue;
            }
            if line == "weights" {
                in_weights = true;
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let int = || v.parse::<u64>().map_err(|_| err(format!("`{k}` must be an integer")));
            let real = || v.parse::<T>().map_err(|_| err(format!("`{k}` must be a number")));
            match k {
                "fingerprint" => fingerprint = Some(v.to_string()),
                "seed" => seed = Some(int()?),
                "stream" => stream = Some(int()?),
                "features" => count = Some(int()? as usize),
                "dim" => dim = Some(int()? as usize),
                "ridge" => ridge = Some(real()?),
                "y_mean" => y_mean = Some(real()?),
                _ => {
                    spec_text.push_str(line);
                    spec_text.push('\n');
                }
            }
        }
        let missing = |name: &str| Error::InvalidSpec(format!("model file lacks `{name}`"));
        let spec = KernelSpec::<T>::from_kv(&spec_text, None)?;
        let kernel = spec.validate()?;
        let fingerprint = fingerprint.ok_or_else(|| missing("fingerprint"))?;
        if fingerprint != kernel.fingerprint() {
            return Err(Error::InvalidSpec(format!(
                "model fingerprint {fingerprint} does not match its kernel ({})",
                kernel.fingerprint()
            )));
        }
        let count = count.ok_or_else(|| missing("features"))?;
        if weights.len() != 2 * count {
            return Err(Error::DimensionMismatch { expected: 2 * count, got: weights.len() });
        }
        let pset = sample_projections(
            &kernel,
            dim.ok_or_else(|| missing("dim"))?,
            count,
            seed.ok_or_else(|| missing("seed"))?,
            stream.ok_or_else(|| missing("stream"))?,
        )?;
        Ok(RidgeModel {
            spec: kernel.spec().clone(),
            features: FeatureMap::new(pset),
            weights,
            ridge: ridge.ok_or_else(|| missing("ridge"))?,
            y_mean: y_mean.ok_or_else(|| missing("y_mean"))?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = std::io::BufWriter::new(file);
        self.write(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Fits ridge weights w minimizing |Phi w - (y - mean y)|^2 + ridge |w|^2.
///
/// Solved in the 2M x 2M primal form, or through the equivalent N x N dual
/// `w = Phi' (Phi Phi' + ridge I)^-1 y` when there are fewer points than features.
pub fn krr_fit<T: Scalar>(kernel: &Kernel<T>, features: FeatureMap<T>, x: &[Vec<T>], y: &[T], ridge: T) -> Result<RidgeModel<T>> {
    if x.is_empty() {
        return Err(Error::Empty("training set"));
    }
    check_dim(x.len(), y.len())?;
    let lam = ridge.as_f64();
    if !(lam > 0.0 && lam.is_finite()) {
        return Err(Error::NonPositiveParameter { name: "ridge", value: lam });
    }
    if features.projections().fingerprint() != kernel.fingerprint() {
        return Err(Error::InvalidSpec("feature map was sampled for a different kernel".into()));
    }
    let phi = features.design_matrix(x)?;
    let n = x.len();
    let p = features.output_dim();
    let y_mean = y.iter().map(|v| v.as_f64()).sum::<f64>() / n as f64;
    let yc: Vec<f64> = y.iter().map(|v| v.as_f64() - y_mean).collect();
    let singular = || Error::domain("krr_fit", "normal equations are not positive definite");

    let weights = if n < p {
        let mut a: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| dot_f64(&phi[i], &phi[j])).collect();
        for i in 0..n {
            a[i * n + i] += lam;
        }
        let alpha = linalg::cholesky_solve(n, a, yc).ok_or_else(singular)?;
        (0..p).map(|k| (0..n).map(|i| phi[i][k] * alpha[i]).sum()).collect()
    } else {
        let rows: Vec<Vec<f64>> = (0..p)
            .into_par_iter()
            .map(|k| (0..p).map(|l| (0..n).map(|i| phi[i][k] * phi[i][l]).sum()).collect())
            .collect();
        let mut a: Vec<f64> = rows.into_iter().flatten().collect();
        for k in 0..p {
            a[k * p + k] += lam;
        }
        let b: Vec<f64> = (0..p).map(|k| (0..n).map(|i| phi[i][k] * yc[i]).sum()).collect();
        linalg::cholesky_solve(p, a, b).ok_or_else(singular)?
    };
    let weights: Vec<T> = weights.into_iter().map(T::lit).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("krr_fit", "non-finite weights"));
    }
    Ok(RidgeModel { spec: kernel.spec().clone(), features, weights, ridge, y_mean: T::lit(y_mean) })
}

/// phi(x) . w + mean y for each row of `x`.
pub fn krr_predict<T: Scalar>(model: &RidgeModel<T>, x: &[Vec<T>]) -> Result<Vec<T>> {
    let w: Vec<f64> = model.weights.iter().map(|v| v.as_f64()).collect();
    let mean = model.y_mean.as_f64();
    x.par_iter().map(|row| Ok(T::lit(dot_f64(&model.features.embed_f64(row)?, &w) + mean))).collect()
}

/// Root mean squared difference between two equally long slices.
pub fn rmse<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    let n = a.len().min(b.len()).max(1) as f64;
    (a.iter().zip(b).map(|(x, y)| (x.as_f64() - y.as_f64()).powi(2)).sum::<f64>() / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::RandomStream;
    use proptest::prelude::*;

    fn gaussian_set(dim: usize, m: usize, seed: u64) -> (Kernel<f64>, ProjectionSet<f64>) {
        let k = KernelSpec::gaussian().validate().unwrap();
        let p = sample_projections(&k, dim, m, seed, 0).unwrap();
        (k, p)
    }

    #[test]
    fn approx_kernel_at_origin_is_one() {
        let k = KernelSpec::<f64>::tricomi(0.6, 1.0, 0.5).validate().unwrap();
        let p = sample_projections(&k, 3, 777, 1, 0).unwrap();
        assert_eq!(approx_kernel(&p, &[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!(matches!(approx_kernel(&p, &[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gaussian_estimate_at_unit_norm() {
        let (_, p) = gaussian_set(2, 100_000, 3);
        let v = approx_kernel(&p, &[0.6, 0.8]).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 4.0 / (1e5f64).sqrt());
    }

    #[test]
    fn embedding_layout() {
        let (_, p) = gaussian_set(2, 10, 1);
        let fm = FeatureMap::new(p);
        assert_eq!(fm.output_dim(), 20);
        let z = fm.embed(&[0.0, 0.0]).unwrap();
        let s = (0.1f64).sqrt();
        assert!(z[..10].iter().all(|&c| (c - s).abs() < 1e-16));
        assert!(z[10..].iter().all(|&c| c == 0.0));
    }

    fn vec2() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, 2)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn feature_products_reproduce_estimator(x in vec2(), y in vec2(), shift in vec2()) {
            let k = KernelSpec::<f64>::generalized_cauchy(1.1, 0.8).validate().unwrap();
            let fm = FeatureMap::new(sample_projections(&k, 2, 200, 2, 0).unwrap());
            let (px, py) = (fm.embed(&x).unwrap(), fm.embed(&y).unwrap());
            let u: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let km = approx_kernel(fm.projections(), &u).unwrap();
            prop_assert!((dot_f64(&px, &py) - km).abs() <= 1e-12);
            prop_assert!((dot_f64(&px, &px) - 1.0).abs() <= 1e-12);
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            prop_assert_eq!(approx_kernel(fm.projections(), &neg).unwrap(), km);
            let xs: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let ys: Vec<f64> = y.iter().zip(&shift).map(|(a, b)| a + b).collect();
            prop_assert!((dot_f64(&fm.embed(&xs).unwrap(), &fm.embed(&ys).unwrap()) - km).abs() <= 1e-12);
        }
    }

    #[test]
    fn feature_gram_is_psd_and_consistent() {
        let k = KernelSpec::<f64>::laplace().validate().unwrap();
        let fm = FeatureMap::new(sample_projections(&k, 3, 20, 4, 0).unwrap());
        let mut s = RandomStream::new(1, 0);
        let pts: Vec<Vec<f64>> = (0..40).map(|_| (0..3).map(|_| 4.0 * s.uniform_open() - 2.0).collect()).collect();
        let g = fm.gram(&pts).unwrap();
        assert!(g.min_eigenvalue >= -1e-10);
        for i in 0..40 {
            for j in 0..40 {
                let u: Vec<f64> = pts[i].iter().zip(&pts[j]).map(|(a, b)| a - b).collect();
                assert!((g.get(i, j) - approx_kernel(fm.projections(), &u).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn report_has_zero_difference_at_origin() {
        let (k, p) = gaussian_set(1, 1000, 2);
        let grid = vec![vec![-1.0], vec![0.0], vec![2.0]];
        let r = error_report(&k, &p, &grid).unwrap();
        assert_eq!(r.points[1].diff, 0.0);
        assert_eq!(r.band, 4.0 / 1000f64.sqrt());
        assert!(r.sup >= r.rms);
        assert_eq!(r, error_report(&k, &p, &grid).unwrap());
        let other = KernelSpec::<f64>::laplace().validate().unwrap();
        assert!(error_report(&other, &p, &grid).is_err());
    }

    #[test]
    fn slope_is_monte_carlo_rate() {
        let k = KernelSpec::<f64>::gaussian().validate().unwrap();
        let grid: Vec<Vec<f64>> = (0..21).map(|i| vec![-5.0 + 0.5 * i as f64]).collect();
        let slope = convergence_slope(&k, 1, &grid, &[1000, 10_000, 100_000], &[1, 2, 3, 4, 5]).unwrap();
        assert!((-0.65..=-0.35).contains(&slope), "{slope}");
    }

    #[test]
    fn constant_targets_are_reproduced() {
        let (k, p) = gaussian_set(1, 50, 1);
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64 * 0.1]).collect();
        let y = vec![2.5; 30];
        let model = krr_fit(&k, FeatureMap::new(p), &x, &y, 1e-10).unwrap();
        for v in krr_predict(&model, &x).unwrap() {
            assert!((v - 2.5).abs() <= 1e-6);
        }
    }

    #[test]
    fn primal_and_dual_solutions_agree() {
        let (k, p) = gaussian_set(1, 20, 6);
        let fm = FeatureMap::new(p);
        let mut s = RandomStream::new(2, 0);
        let x_small: Vec<Vec<f64>> = (0..25).map(|_| vec![4.0 * s.uniform_open() - 2.0]).collect();
        let x_big: Vec<Vec<f64>> = x_small.iter().cloned().chain((0..30).map(|_| vec![4.0 * s.uniform_open() - 2.0])).collect();
        let y: Vec<f64> = x_big.iter().map(|v| v[0].sin()).collect();
        // 25 points < 40 features goes through the dual; check it against a direct primal solve.
        let dual = krr_fit(&k, fm.clone(), &x_small, &y[..25], 0.1).unwrap();
        let phi = fm.design_matrix(&x_small).unwrap();
        let mean = y[..25].iter().sum::<f64>() / 25.0;
        let p40 = 40;
        let mut a = vec![0.0; p40 * p40];
        let mut b = vec![0.0; p40];
        for (i, row) in phi.iter().enumerate() {
            for k1 in 0..p40 {
                b[k1] += row[k1] * (y[i] - mean);
                for k2 in 0..p40 {
                    a[k1 * p40 + k2] += row[k1] * row[k2];
                }
            }
        }
        for k1 in 0..p40 {
            a[k1 * p40 + k1] += 0.1;
        }
        let w = linalg::cholesky_solve(p40, a, b).unwrap();
        for (u, v) in dual.weights().iter().zip(&w) {
            assert!((u - v).abs() < 1e-10);
        }
        let primal = krr_fit(&k, fm, &x_big, &y, 0.1).unwrap();
        assert_eq!(primal.weights().len(), 40);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let (k, p) = gaussian_set(1, 10, 1);
        let fm = FeatureMap::new(p);
        assert!(matches!(krr_fit(&k, fm.clone(), &[], &[], 1.0), Err(Error::Empty(_))));
        assert!(krr_fit(&k, fm.clone(), &[vec![0.0]], &[1.0], 0.0).is_err());
        assert!(krr_fit(&k, fm, &[vec![0.0, 1.0]], &[1.0], 1.0).is_err());
    }

    #[test]
    fn prediction_is_row_wise_and_survives_serialization() {
        let k = KernelSpec::<f64>::matern(2.5).with_lengthscale(0.5).validate().unwrap();
        let fm = FeatureMap::new(sample_projections(&k, 2, 64, 10, 1).unwrap());
        let mut s = RandomStream::new(3, 0);
        let x: Vec<Vec<f64>> = (0..60).map(|_| vec![s.uniform_open(), s.uniform_open()]).collect();
        let y: Vec<f64> = x.iter().map(|v| (3.0 * v[0]).sin() + v[1]).collect();
        let model = krr_fit(&k, fm, &x, &y, 1e-3).unwrap();
        let pred = krr_predict(&model, &x).unwrap();
        let rev: Vec<Vec<f64>> = x.iter().rev().cloned().collect();
        let pred_rev = krr_predict(&model, &rev).unwrap();
        assert!(pred.iter().rev().zip(&pred_rev).all(|(a, b)| a == b));
        let mut buf = Vec::new();
        model.write(&mut buf).unwrap();
        let back = RidgeModel::<f64>::read(&buf[..]).unwrap();
        assert_eq!(back, model);
        assert_eq!(krr_predict(&back, &x).unwrap(), pred);
    }

    #[test]
    fn tampered_model_is_rejected() {
        let (k, p) = gaussian_set(1, 4, 1);
        let model = krr_fit(&k, FeatureMap::new(p), &[vec![0.0], vec![1.0]], &[0.0, 1.0], 0.1).unwrap();
        let mut buf = Vec::new();
        model.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("alpha=2", "alpha=1.5");
        assert!(RidgeModel::<f64>::read(text.as_bytes()).is_err());
    }
}
