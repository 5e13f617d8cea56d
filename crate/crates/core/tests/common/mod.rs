#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use tlsfit::linalg::{householder_qr, Matrix, Vector};
use tlsfit::PointCloud;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gauss(rng: &mut StdRng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_matrix(rng: &mut StdRng, m: usize, n: usize) -> Matrix {
    let data: Vec<f64> = (0..m * n).map(|_| gauss(rng)).collect();
    Matrix::new(m, n, data).unwrap()
}

pub fn uniform_matrix(rng: &mut StdRng, m: usize, n: usize, lo: f64, hi: f64) -> Matrix {
    let data: Vec<f64> = (0..m * n).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::new(m, n, data).unwrap()
}

pub fn random_vector(rng: &mut StdRng, n: usize) -> Vector {
    Vector::new((0..n).map(|_| gauss(rng)).collect()).unwrap()
}

pub fn random_orthogonal(rng: &mut StdRng, n: usize) -> Matrix {
    householder_qr(&random_matrix(rng, n, n)).unwrap().q
}

/// Points scattered around a random hyperplane, unit scale.
pub fn random_cloud(rng: &mut StdRng, m: usize, n: usize) -> PointCloud {
    let mut pts = random_matrix(rng, m, n);
    let squash = rng.random_range(0.05..0.5);
    let q = random_orthogonal(rng, n);
    let mut scaled = Vec::with_capacity(m * n);
    for j in 0..n {
        let f = if j == n - 1 { squash } else { 1.0 };
        scaled.extend(pts.column(j).iter().map(|x| x * f));
    }
    pts = Matrix::new(m, n, scaled).unwrap();
    let shift = random_vector(rng, n);
    let rotated = pts.mul(&q.transpose()).unwrap();
    let mut out = Vec::with_capacity(m * n);
    for j in 0..n {
        out.extend(rotated.column(j).iter().map(|x| x + shift[j]));
    }
    PointCloud::new(Matrix::new(m, n, out).unwrap()).unwrap()
}

pub fn orthogonality_error(q: &Matrix) -> f64 {
    q.transpose()
        .mul(q)
        .unwrap()
        .sub(&Matrix::identity(q.cols()))
        .unwrap()
        .frobenius_norm()
}

/// Triple-loop product, independent of the library's kernel.
pub fn naive_product(a: &Matrix, b: &Matrix) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; b.cols()]; a.rows()];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            for k in 0..a.cols() {
                *o += a[(i, k)] * b[(k, j)];
            }
        }
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Distance between two vectors up to a global sign flip.
pub fn diff_up_to_sign(a: &[f64], b: &[f64]) -> f64 {
    let plus = max_abs_diff(a, b);
    let neg: Vec<f64> = b.iter().map(|x| -x).collect();
    plus.min(max_abs_diff(a, &neg))
}

pub fn sum_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}
