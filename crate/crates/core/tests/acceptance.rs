//! End-to-end acceptance checks. Run with
//! `cargo test -p tlsfit --test acceptance -- --nocapture` to see one line per
//! criterion.

// checks are written as `!cond` on purpose so NaN comparisons fail
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use tlsfit::extensions::{frozen_objective, solve_tls_fixed, solve_tls_multi};
use tlsfit::geometry::{center_matrix, fit_hyperplane_tls, point_hyperplane_distance, PointCloud};
use tlsfit::linalg::{householder_qr, jacobi_svd, Matrix, Vector};
use tlsfit::ols::{simple_regression, solve_ols, OlsMethod};
use tlsfit::oracles::{line_angle_objective, line_angle_search, sym_eigen_closed_form};
use tlsfit::system::solve_tls_system;
use tlsfit::FitError;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn example_one_points() -> PointCloud {
    PointCloud::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]).unwrap()
}

fn example_one() -> Result<(), String> {
    let cloud = example_one_points();
    let p = cloud.points();
    let ols = simple_regression(&p.column_vector(0), &p.column_vector(1)).map_err(|e| e.to_string())?;
    ensure!(ols.coefficients.as_slice() == [0.0, 0.0], "OLS line {:?}", ols.coefficients);

    let fit = fit_hyperplane_tls(&cloud).map_err(|e| e.to_string())?;
    let s = fit.sigma.as_slice();
    ensure!((s[0] - 2.0).abs() <= 1e-12 && (s[1] - 2.0).abs() <= 1e-12, "sigma {s:?}");
    ensure!(!fit.unique, "fit reported as unique");
    ensure!((fit.objective - 4.0).abs() <= 1e-10, "objective {}", fit.objective);

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..3600 {
        let phi = std::f64::consts::PI * i as f64 / 3600.0;
        let v = line_angle_objective(&cloud, phi).map_err(|e| e.to_string())?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    ensure!(hi - lo <= 1e-10, "angle objective spread {}", hi - lo);
    Ok(())
}

fn example_two() -> Result<(), String> {
    let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]).unwrap();
    let b = Vector::new(vec![1.0, 1.0, 1.0]).unwrap();
    let ols = solve_ols(&a, &b, OlsMethod::Svd).map_err(|e| e.to_string())?;
    ensure!(ols.coefficients.as_slice() == [1.0, 0.0], "OLS {:?}", ols.coefficients);
    ensure!(ols.rank_deficient, "rank deficiency not flagged");

    match solve_tls_system(&a, &b) {
        Err(FitError::NoTlsSolution { null_vector, sigma }) => {
            let d = diff_up_to_sign(null_vector.as_slice(), &[0.0, 1.0, 0.0]);
            ensure!(d <= 1e-10, "null vector {null_vector:?}");
            let r2 = 2f64.sqrt();
            let expected = [(2.0 + r2).sqrt(), (2.0 - r2).sqrt(), 0.0];
            ensure!(max_abs_diff(sigma.as_slice(), &expected) <= 1e-10, "sigma {sigma:?}");
            Ok(())
        }
        other => Err(format!("expected NoTlsSolution, got {other:?}")),
    }
}

fn centroid_lemma() -> Result<(), String> {
    let mut r = rng(1001);
    for trial in 0..500 {
        let n = r.random_range(2..=5);
        let m = r.random_range(n + 1..=50);
        let cloud = random_cloud(&mut r, m, n);
        let fit = fit_hyperplane_tls(&cloud).map_err(|e| e.to_string())?;

        // centroid recomputed here, independent of the fit
        let p = cloud.points();
        let mean: Vec<f64> = (0..n).map(|j| p.column(j).iter().sum::<f64>() / m as f64).collect();
        let scale = 1.0 + mean.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let offset = point_hyperplane_distance(&fit, &Vector::new(mean).unwrap()).map_err(|e| e.to_string())?;
        ensure!(offset <= 1e-10 * scale, "trial {trial}: centroid off the plane by {offset}");

        let s_min = jacobi_svd(&center_matrix(&cloud)).map_err(|e| e.to_string())?.sigma_min();
        let distances: f64 = p
            .to_rows()
            .into_iter()
            .map(|z| point_hyperplane_distance(&fit, &Vector::new(z).unwrap()).unwrap().powi(2))
            .sum();
        ensure!(rel_close(fit.objective, s_min * s_min, 1e-9), "trial {trial}: objective {} vs {}", fit.objective, s_min * s_min);
        ensure!(rel_close(distances, s_min * s_min, 1e-9), "trial {trial}: distances {distances} vs {}", s_min * s_min);
    }
    Ok(())
}

fn oracle_equivalence() -> Result<(), String> {
    let mut r = rng(1002);
    for trial in 0..200 {
        let m = r.random_range(3..=50);
        let cloud = random_cloud(&mut r, m, 2);
        let fit = fit_hyperplane_tls(&cloud).map_err(|e| e.to_string())?;
        let oracle = line_angle_search(&cloud, 3600).map_err(|e| e.to_string())?;
        let d = (fit.objective - oracle.best_objective).abs();
        ensure!(d <= 1e-6, "trial {trial}: svd {} vs oracle {}", fit.objective, oracle.best_objective);
    }
    Ok(())
}

fn multiple_rhs() -> Result<(), String> {
    let mut r = rng(1003);
    for trial in 0..50 {
        let a = random_matrix(&mut r, 8, 3);
        let x0 = random_matrix(&mut r, 3, 2);
        let clean = a.mul(&x0).unwrap();
        let b = clean.add(&random_matrix(&mut r, 8, 2).scale(0.1)).unwrap();
        let s = solve_tls_multi(&a, &b).map_err(|e| e.to_string())?;
        let scale = s.nearest_system.frobenius_norm();
        let fx_g = s.f().mul(&s.x).unwrap().sub(&s.g()).unwrap().frobenius_norm();
        ensure!(fx_g <= 1e-8 * scale, "trial {trial}: ‖FX − G‖ = {fx_g}");
        let gap2 = a.hstack(&b).unwrap().sub(&s.nearest_system).unwrap().frobenius_norm().powi(2);
        let tail = s.sigma[3].powi(2) + s.sigma[4].powi(2);
        ensure!(rel_close(gap2, tail, 1e-9), "trial {trial}: {gap2} vs {tail}");
    }

    let a = random_matrix(&mut r, 8, 3);
    let x0 = random_matrix(&mut r, 3, 2);
    let direction = random_matrix(&mut r, 8, 2);
    for level in [1e-2, 1e-4, 1e-6, 1e-8] {
        let noise = direction.scale(level);
        let b = a.mul(&x0).unwrap().add(&noise).unwrap();
        let s = solve_tls_multi(&a, &b).map_err(|e| e.to_string())?;
        let err = s.x.sub(&x0).unwrap().frobenius_norm();
        ensure!(err <= 10.0 * noise.frobenius_norm(), "noise {level}: error {err}");
    }
    Ok(())
}

fn fixed_columns() -> Result<(), String> {
    let mut r = rng(1004);
    for trial in 0..30 {
        let a2 = random_matrix(&mut r, 10, 3);
        let b = random_matrix(&mut r, 10, 2);
        let fixed = solve_tls_fixed(&Matrix::zeros(10, 0), &a2, &b).map_err(|e| e.to_string())?;
        let multi = solve_tls_multi(&a2, &b).map_err(|e| e.to_string())?;
        let d = fixed.x2.sub(&multi.x).unwrap().max_abs();
        ensure!(d <= 1e-10, "trial {trial}: j = 0 differs by {d}");

        let a1 = random_matrix(&mut r, 10, 3);
        let y = random_vector(&mut r, 10);
        let fixed = solve_tls_fixed(&a1, &Matrix::zeros(10, 0), &Matrix::from_vector(&y)).map_err(|e| e.to_string())?;
        let ols = solve_ols(&a1, &y, OlsMethod::Qr).map_err(|e| e.to_string())?;
        let d = max_abs_diff(fixed.x1.column(0), ols.coefficients.as_slice());
        ensure!(d <= 1e-8 * ols.coefficients.norm().max(1.0), "trial {trial}: k = 0 differs by {d}");
    }

    for trial in 0..50 {
        let m = r.random_range(4..=40);
        let cloud = random_cloud(&mut r, m, 2);
        let p = cloud.points();
        let ones = Matrix::from_columns(m, &[&vec![1.0; m]]).unwrap();
        let fixed = solve_tls_fixed(&ones, &p.block(0..m, 0..1), &p.block(0..m, 1..2)).map_err(|e| e.to_string())?;
        let fit = fit_hyperplane_tls(&cloud).map_err(|e| e.to_string())?;
        let c = fit.explicit_coeffs.ok_or("vertical line")?;
        let d = (fixed.x1[(0, 0)] - c[0]).abs().max((fixed.x2[(0, 0)] - c[1]).abs());
        ensure!(d <= 1e-8 * c[0].abs().max(c[1].abs()).max(1.0), "trial {trial}: line differs by {d}");
    }

    for trial in 0..30 {
        let a1 = random_matrix(&mut r, 12, 2).mul(&random_matrix(&mut r, 2, 3)).unwrap();
        let a2 = random_matrix(&mut r, 12, 2);
        let b = random_matrix(&mut r, 12, 2);
        let s = solve_tls_fixed(&a1, &a2, &b).map_err(|e| e.to_string())?;
        ensure!(!s.x1_unique && s.x1_null_space.cols() == 1, "trial {trial}: null space not reported");
        let base = frozen_objective(&a1, &a2, &b, &s.perturbed_a2, &s.x1, &s.x2).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let w = random_matrix(&mut r, 1, 2).scale(10.0);
            let x1 = s.x1.add(&s.x1_null_space.mul(&w).unwrap()).unwrap();
            let v = frozen_objective(&a1, &a2, &b, &s.perturbed_a2, &x1, &s.x2).map_err(|e| e.to_string())?;
            ensure!((v - base).abs() <= 1e-10 * base.max(1.0), "trial {trial}: {v} vs {base}");
        }
    }
    Ok(())
}

fn kernel_quality() -> Result<(), String> {
    let mut r = rng(1005);
    for trial in 0..1000 {
        let m = r.random_range(1..=20);
        let n = r.random_range(1..=10);
        let a = random_matrix(&mut r, m, n);
        let svd = jacobi_svd(&a).map_err(|e| e.to_string())?;
        let s = svd.sigma.as_slice();
        ensure!(s.windows(2).all(|w| w[0] >= w[1]) && s.iter().all(|&x| x >= 0.0), "trial {trial}: ordering {s:?}");
        ensure!(orthogonality_error(&svd.u) <= 1e-12 * m as f64, "trial {trial}: U not orthogonal");
        ensure!(orthogonality_error(&svd.v) <= 1e-12 * n as f64, "trial {trial}: V not orthogonal");
        let rec = svd.reconstruct().sub(&a).unwrap().frobenius_norm();
        ensure!(rec <= 1e-11 * a.frobenius_norm().max(1.0), "trial {trial}: reconstruction {rec}");

        if m >= n {
            let qr = householder_qr(&a).map_err(|e| e.to_string())?;
            let rec = qr.q.mul(&qr.r_upper).unwrap().sub(&a).unwrap().frobenius_norm();
            ensure!(rec <= 1e-12 * a.frobenius_norm().max(1.0), "trial {trial}: QR reconstruction {rec}");
        }

        if trial % 2 == 0 {
            let k = 2 + trial % 4 / 2;
            let small = random_matrix(&mut r, k, k);
            let gram = small.transpose().mul(&small).unwrap();
            let eig = sym_eigen_closed_form(&gram).map_err(|e| e.to_string())?;
            let sv = jacobi_svd(&small).map_err(|e| e.to_string())?.sigma;
            for i in 0..k {
                let closed = eig[i].max(0.0).sqrt();
                ensure!((closed - sv[i]).abs() <= 1e-9 * sv[0].max(1.0), "trial {trial}: σ{i} {} vs {closed}", sv[i]);
            }
        }
    }
    Ok(())
}

fn cli_conformance() -> Result<(), String> {
    let cases = [
        ("tls-line", "1,1\n-1,1\n1,-1\n-1,-1\n", 0),
        ("tls-system", "1,0,1\n0,0,1\n0,0,1\n", 2),
    ];
    for (mode, text, code) in cases {
        let mut f = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
        f.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_fit"))
                .args([mode, "--input", f.path().to_str().unwrap()])
                .output()
                .unwrap()
        };
        let (first, second) = (run(), run());
        ensure!(first.status.code() == Some(code), "{mode}: exit {:?}", first.status.code());
        ensure!(first.stdout == second.stdout, "{mode}: output differs between runs");
        let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
        ensure!(parsed["mode"] == mode, "{mode}: report mode {}", parsed["mode"]);
    }
    Ok(())
}

fn timed(check: Check) -> (Result<(), String>, Duration) {
    let start = Instant::now();
    let out = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    (out, start.elapsed())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check, Option<Duration>); 8] = [
        ("example 1: symmetric square", example_one, Some(Duration::from_secs(1))),
        ("example 2: no TLS solution", example_two, Some(Duration::from_secs(1))),
        ("centroid lemma on 500 clouds", centroid_lemma, None),
        ("angle oracle on 200 line fits", oracle_equivalence, None),
        ("multiple right-hand sides", multiple_rhs, None),
        ("fixed-column reductions", fixed_columns, None),
        ("kernel quality on 1000 matrices", kernel_quality, None),
        ("CLI conformance", cli_conformance, None),
    ];
    let suite = Instant::now();
    let mut failures = Vec::new();
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let (mut result, took) = timed(check);
        if let (Ok(()), Some(limit)) = (&result, limit) {
            if took > limit {
                result = Err(format!("took {took:?}, limit {limit:?}"));
            }
        }
        let status = if result.is_ok() { "PASS" } else { "FAIL" };
        let detail = result.as_ref().err().map(|e| format!(": {e}")).unwrap_or_default();
        println!("[{status}] {}. {name} ({:.1} ms){detail}", i + 1, took.as_secs_f64() * 1e3);
        if result.is_err() {
            failures.push(i + 1);
        }
    }
    let total = suite.elapsed();
    println!("suite finished in {:.2} s", total.as_secs_f64());
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
    assert!(total < Duration::from_secs(30), "suite took {total:?}");
}
