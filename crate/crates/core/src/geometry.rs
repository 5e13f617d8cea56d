//! Orthogonal-distance (total least squares) fitting of lines and hyperplanes.
//!
//! The optimal hyperplane passes through the centroid of the cloud. After
//! shifting the centroid to the origin, its unit normal is the right singular
//! vector of the centered data matrix for the smallest singular value, and the
//! sum of squared distances equals that singular value squared.

use crate::error::{dim_err, Result};
use crate::linalg::{jacobi_svd, Matrix, Vector};
use crate::{separated, COMPONENT_TOL};

/// `m` points in `Rⁿ`, one per row.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Matrix,
}

impl PointCloud {
    pub fn new(points: Matrix) -> Result<Self> {
        let (m, n) = points.shape();
        if m < 1 {
            return dim_err("a point cloud needs at least one point");
        }
        if n < 2 {
            return dim_err(format!("points must have at least 2 coordinates, got {n}"));
        }
        Ok(Self { points })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }
}

/// Result of a TLS hyperplane fit `{z : rᵀ(z − z̄) = 0}`.
#[derive(Debug, Clone)]
pub struct HyperplaneFit {
    pub centroid: Vector,
    /// Unit normal `r`.
    pub normal: Vector,
    /// Sum of squared orthogonal distances of the points to the hyperplane.
    pub objective: f64,
    /// `false` when the two smallest singular values coincide, so that every
    /// unit vector in their span is an equally good normal.
    pub unique: bool,
    /// Whether the last coordinate can be written as an explicit function of
    /// the others (`|r_n|` above tolerance).
    pub expressible: bool,
    /// `(c₀, c₁, …, c_{n−1})` of `z_n = c₀ + Σ cₖ zₖ`, present iff expressible.
    pub explicit_coeffs: Option<Vector>,
    /// Singular values of the centered data matrix.
    pub sigma: Vector,
}

pub fn centroid(cloud: &PointCloud) -> Vector {
    let p = cloud.points();
    let m = p.rows() as f64;
    Vector::from_vec_unchecked(
        (0..p.cols())
            .map(|j| p.column(j).iter().sum::<f64>() / m)
            .collect(),
    )
}

/// Data matrix with the centroid subtracted from every row.
pub fn center_matrix(cloud: &PointCloud) -> Matrix {
    let c = centroid(cloud);
    let p = cloud.points();
    let mut b = p.clone();
    for j in 0..p.cols() {
        let cj = c[j];
        for x in b.column_mut(j) {
            *x -= cj;
        }
    }
    b
}

/// Fits the hyperplane minimizing the sum of squared orthogonal distances.
///
/// A fit is always returned; degenerate situations are reported through
/// `unique` and `expressible` rather than as errors.
pub fn fit_hyperplane_tls(cloud: &PointCloud) -> Result<HyperplaneFit> {
    let (m, n) = cloud.points().shape();
    if m < n {
        return dim_err(format!(
            "{m} points cannot determine a hyperplane fit in R^{n}; need at least {n}"
        ));
    }
    let centroid = centroid(cloud);
    let b = center_matrix(cloud);
    let svd = jacobi_svd(&b)?;
    let normal = svd.v.column_vector(n - 1);

    let residuals = b.mul_vec(&normal)?;
    let objective = residuals.dot(&residuals);
    let unique = separated(svd.sigma.as_slice(), n - 1);

    let rn = normal[n - 1];
    let expressible = rn.abs() > COMPONENT_TOL;
    let explicit_coeffs = if expressible {
        let mut c = vec![0.0; n];
        let mut c0 = centroid[n - 1];
        for k in 0..n - 1 {
            c[k + 1] = -normal[k] / rn;
            c0 -= c[k + 1] * centroid[k];
        }
        c[0] = c0;
        Some(Vector::new(c)?)
    } else {
        None
    };

    Ok(HyperplaneFit {
        centroid,
        normal,
        objective,
        unique,
        expressible,
        explicit_coeffs,
        sigma: svd.sigma,
    })
}

/// `|rᵀ(z − z̄)|`
pub fn point_hyperplane_distance(fit: &HyperplaneFit, z: &Vector) -> Result<f64> {
    let n = fit.normal.len();
    if z.len() != n {
        return dim_err(format!("point has {} coordinates, expected {n}", z.len()));
    }
    Ok(fit.normal.dot(&z.sub(&fit.centroid)?).abs())
}

impl HyperplaneFit {
    /// Evaluates the explicit form `c₀ + Σ cₖ xₖ` at the leading coordinates
    /// `x` (length n−1). `None` when the hyperplane is not expressible.
    pub fn predict(&self, x: &[f64]) -> Option<f64> {
        let c = self.explicit_coeffs.as_ref()?;
        if x.len() + 1 != c.len() {
            return None;
        }
        Some(c[0] + x.iter().enumerate().map(|(k, xk)| c[k + 1] * xk).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> PointCloud {
        PointCloud::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]).unwrap()
    }

    #[test]
    fn example_one_centroid_and_centering() {
        let cloud = example_one();
        assert_eq!(centroid(&cloud).as_slice(), &[0.0, 0.0]);
        assert_eq!(&center_matrix(&cloud), cloud.points());
    }

    #[test]
    fn repeated_point_centroid() {
        let cloud = PointCloud::from_rows(&[[2.5, -1.0, 4.0]; 5]).unwrap();
        assert_eq!(centroid(&cloud).as_slice(), &[2.5, -1.0, 4.0]);
    }

    #[test]
    fn example_one_is_not_unique() {
        let fit = fit_hyperplane_tls(&example_one()).unwrap();
        assert!((fit.objective - 4.0).abs() < 1e-10);
        assert!(!fit.unique);
        assert!((fit.normal.norm() - 1.0).abs() < 1e-12);
        let d1 = point_hyperplane_distance(&fit, &Vector::new(vec![1.0, 1.0]).unwrap()).unwrap();
        let d2 = point_hyperplane_distance(&fit, &Vector::new(vec![1.0, -1.0]).unwrap()).unwrap();
        assert!((d1 * d1 + d2 * d2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_points() {
        let cloud = PointCloud::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        let fit = fit_hyperplane_tls(&cloud).unwrap();
        assert!(fit.objective < 1e-28);
        let h = 0.5f64.sqrt();
        let sign = fit.normal[0].signum();
        assert!((fit.normal[0] - sign * h).abs() < 1e-14);
        assert!((fit.normal[1] + sign * h).abs() < 1e-14);
        let c = fit.explicit_coeffs.as_ref().unwrap();
        assert!(c[0].abs() < 1e-14 && (c[1] - 1.0).abs() < 1e-14);
        assert!(fit.unique);
    }

    #[test]
    fn vertical_line_is_not_expressible() {
        let cloud = PointCloud::from_rows(&[[0.0, 0.0], [0.0, 1.0], [0.0, 2.0], [0.0, 3.0]]).unwrap();
        let fit = fit_hyperplane_tls(&cloud).unwrap();
        assert!(!fit.expressible);
        assert!(fit.explicit_coeffs.is_none());
        assert_eq!(fit.normal[0].abs(), 1.0);
        assert_eq!(fit.normal[1], 0.0);
        assert_eq!(fit.objective, 0.0);
        assert!(fit.predict(&[0.0]).is_none());
    }

    #[test]
    fn too_few_points() {
        let cloud = PointCloud::from_rows(&[[0.0, 0.0, 1.0], [1.0, 2.0, 3.0]]).unwrap();
        assert!(fit_hyperplane_tls(&cloud).is_err());
        assert!(PointCloud::from_rows(&[[1.0], [2.0]]).is_err());
    }

    #[test]
    fn distance_at_centroid_is_zero() {
        let cloud = PointCloud::from_rows(&[[0.0, 1.0], [2.0, 2.5], [3.0, 5.0], [4.0, 4.0]]).unwrap();
        let fit = fit_hyperplane_tls(&cloud).unwrap();
        assert_eq!(point_hyperplane_distance(&fit, &fit.centroid).unwrap(), 0.0);
        assert!(point_hyperplane_distance(&fit, &Vector::zeros(3)).is_err());
    }
}
