//! Brute-force and closed-form checkers.
//!
//! These are deliberately naive and touch the solver types only to read their
//! entries: no SVD, no QR, no shared helpers. Tests use them as independent
//! references for the solvers.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{dim_err, Result};
use crate::geometry::PointCloud;
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSearchResult {
    /// Angle in `[0, π)` of the best line through the centroid.
    pub best_angle: f64,
    pub best_objective: f64,
    /// Number of uniform grid angles evaluated before refinement.
    pub samples: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn centered_xy(cloud: &PointCloud) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = cloud.points();
    if p.cols() != 2 {
        return dim_err(format!("angle search needs planar points, got dimension {}", p.cols()));
    }
    let m = p.rows();
    let (mut sx, mut sy) = (0.0, 0.0);
    for i in 0..m {
        sx += p[(i, 0)];
        sy += p[(i, 1)];
    }
    let (mx, my) = (sx / m as f64, sy / m as f64);
    Ok((
        (0..m).map(|i| p[(i, 0)] - mx).collect(),
        (0..m).map(|i| p[(i, 1)] - my).collect(),
    ))
}

fn angle_objective(dx: &[f64], dy: &[f64], phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    dx.iter()
        .zip(dy)
        .map(|(x, y)| {
            let d = s * x - c * y;
            d * d
        })
        .sum()
}

/// Sum of squared distances from the points to the line through their
/// centroid with direction angle `phi`.
pub fn line_angle_objective(cloud: &PointCloud, phi: f64) -> Result<f64> {
    let (dx, dy) = centered_xy(cloud)?;
    Ok(angle_objective(&dx, &dy, phi))
}

/// Grid search over line directions followed by golden-section refinement
/// around the best grid cell.
pub fn line_angle_search(cloud: &PointCloud, samples: usize) -> Result<AngleSearchResult> {
    if samples < 360 {
        return dim_err(format!("at least 360 samples required, got {samples}"));
    }
    let (dx, dy) = centered_xy(cloud)?;
    let f = |phi: f64| angle_objective(&dx, &dy, phi);
    let step = std::f64::consts::PI / samples as f64;

    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..samples {
        let v = f(i as f64 * step);
        if v < best {
            best = v;
            best_i = i;
        }
    }

    // the objective has period π, so the bracket may straddle 0
    let mut lo = (best_i as f64 - 1.0) * step;
    let mut hi = (best_i as f64 + 1.0) * step;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let (angle, value) = [(mid, f(mid)), (x1, f1), (x2, f2), (best_i as f64 * step, best)]
        .into_iter()
        .fold((0.0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });

    Ok(AngleSearchResult {
        best_angle: angle.rem_euclid(std::f64::consts::PI),
        best_objective: value,
        samples,
    })
}

/// Eigenvalues of a symmetric 2×2 or 3×3 matrix, descending, from the
/// characteristic polynomial.
pub fn sym_eigen_closed_form(s: &Matrix) -> Result<Vector> {
    let n = s.rows();
    if s.cols() != n || !(n == 2 || n == 3) {
        return dim_err(format!("expected a 2x2 or 3x3 matrix, got {:?}", s.shape()));
    }
    let scale = s.max_abs().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (s[(i, j)] - s[(j, i)]).abs() > 1e-12 * scale {
                return dim_err(format!("matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    let mut ev = if n == 2 {
        let (a, b, d) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        vec![mean + rad, mean - rad]
    } else {
        // trigonometric solution of the characteristic cubic
        let (a11, a22, a33) = (s[(0, 0)], s[(1, 1)], s[(2, 2)]);
        let (a12, a13, a23) = (s[(0, 1)], s[(0, 2)], s[(1, 2)]);
        let p1 = a12 * a12 + a13 * a13 + a23 * a23;
        if p1 == 0.0 {
            vec![a11, a22, a33]
        } else {
            let q = (a11 + a22 + a33) / 3.0;
            let p2 = (a11 - q).powi(2) + (a22 - q).powi(2) + (a33 - q).powi(2) + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let (b11, b22, b33) = ((a11 - q) / p, (a22 - q) / p, (a33 - q) / p);
            let (b12, b13, b23) = (a12 / p, a13 / p, a23 / p);
            let det_b = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13)
                + b13 * (b12 * b23 - b22 * b13);
            let r = (det_b / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            let e2 = 3.0 * q - e1 - e3;
            vec![e1, e2, e3]
        }
    };
    ev.sort_by(|a, b| b.total_cmp(a));
    Vector::new(ev)
}

/// `true` iff `objective(point) ≤ objective(point + δ) + 1e-12` for `trials`
/// random directions `δ` of length `radius`.
pub fn perturbation_probe<F>(objective: F, point: &Vector, trials: usize, radius: f64, seed: u64) -> bool
where
    F: Fn(&Vector) -> f64,
{
    let mut rng = StdRng::seed_from_u64(seed);
    let base = objective(point);
    let n = point.len();
    for _ in 0..trials {
        let mut d: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        for (di, pi) in d.iter_mut().zip(point.iter()) {
            *di = pi + *di * radius / len;
        }
        let moved = Vector::new(d).expect("finite perturbation");
        if base > objective(&moved) + 1e-12 {
            return false;
        }
    }
    true
}
