//! Independent reference computations for the random-feature pipeline.

use nalgebra::{DMatrix, DVector};
use spectral_rff::dist::RandomStream;
use spectral_rff::kernels::Kernel;

/// x ~ U(-2, 2), y = sin(3x) + N(0, 0.1^2).
pub fn sin3x_task(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut s = RandomStream::new(seed, 99);
    let x: Vec<Vec<f64>> = (0..n).map(|_| vec![4.0 * s.uniform_open() - 2.0]).collect();
    let y = x.iter().map(|v| (3.0 * v[0]).sin() + 0.1 * s.std_normal()).collect();
    (x, y)
}

/// Fitted training values of exact kernel ridge regression:
/// f = K (K + ridge I)^-1 (y - mean y) + mean y.
pub fn exact_krr_fitted(kernel: &Kernel<f64>, x: &[Vec<f64>], y: &[f64], ridge: f64) -> Vec<f64> {
    let n = x.len();
    let k = DMatrix::from_fn(n, n, |i, j| {
        let u: Vec<f64> = x[i].iter().zip(&x[j]).map(|(a, b)| a - b).collect();
        kernel.evaluate(&u).unwrap()
    });
    let mean = y.iter().sum::<f64>() / n as f64;
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - mean));
    let a = (&k + DMatrix::identity(n, n) * ridge).cholesky().expect("K + ridge I is positive definite");
    let fitted = &k * a.solve(&yc);
    fitted.iter().map(|v| v + mean).collect()
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}
