//! Ridge-regularized least squares and Hermitian eigen extraction.
//!
//! Ridge parameters are relative: the effective penalty is ridge·σ_max²
//! (σ_max = largest singular value of the design), so solutions scale
//! exactly with the data. Solves go through the SVD filter
//! z = V diag(σ/(σ²+λ)) Uᴴ y rather than the normal equations, which would
//! square the condition number.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition threshold beyond which an unregularized solve is refused.
pub const ILL_POSED_CONDITION: f64 = 1e14;

/// Output of a ridge least-squares solve.
#[derive(Debug, Clone)]
pub struct RidgeSolution {
    pub coefficients: Vec<Complex64>,
    /// Condition number of the normal system, (σ_max/σ_min)² of the design
    /// (∞ when rank-deficient).
    pub condition: f64,
    /// Relative data misfit ‖Az - y‖/‖y‖ (0 for zero data).
    pub residual: f64,
}

/// Solves min ‖Az - y‖² + ridge·σ_max²·‖z‖² for complex A.
pub fn solve_ridge_complex(
    design: &DMatrix<Complex64>,
    rhs: &[Complex64],
    ridge: f64,
) -> Result<RidgeSolution> {
    ComplexRidgeSolver::new(design.clone()).solve(rhs, ridge)
}

/// A factored complex design, reusable across right-hand sides.
pub struct ComplexRidgeSolver {
    design: DMatrix<Complex64>,
    u: DMatrix<Complex64>,
    vt: DMatrix<Complex64>,
    singular_values: Vec<f64>,
    pub condition: f64,
}

impl ComplexRidgeSolver {
    pub fn new(design: DMatrix<Complex64>) -> Self {
        let svd = design.clone().svd(true, true);
        let s: Vec<f64> = svd.singular_values.as_slice().to_vec();
        let condition = condition_of(&s, design.ncols());
        Self {
            design,
            u: svd.u.expect("svd with u"),
            vt: svd.v_t.expect("svd with v_t"),
            singular_values: s,
            condition,
        }
    }

    pub fn solve(&self, rhs: &[Complex64], ridge: f64) -> Result<RidgeSolution> {
        guard_ill_posed(self.condition, ridge)?;
        let s = &self.singular_values;
        let smax = s.iter().cloned().fold(0.0, f64::max);
        let lambda = ridge * smax * smax;
        let y = DVector::from_column_slice(rhs);
        let uy = self.u.adjoint() * &y;
        let mut filtered = DVector::<Complex64>::zeros(s.len());
        for i in 0..s.len() {
            let den = s[i] * s[i] + lambda;
            if den > 0.0 {
                filtered[i] = uy[i] * Complex64::new(s[i] / den, 0.0);
            }
        }
        let z = self.vt.adjoint() * filtered;
        let residual = relative_residual(&(&self.design * &z - &y), &y);
        Ok(RidgeSolution {
            coefficients: z.as_slice().to_vec(),
            condition: self.condition,
            residual,
        })
    }
}

/// Solves min ‖Az - y‖² + ridge·σ_max²·‖z‖² for real A and complex y
/// (the real SVD is applied to the real and imaginary parts).
pub fn solve_ridge_real(
    design: &DMatrix<f64>,
    rhs: &[Complex64],
    ridge: f64,
) -> Result<RidgeSolution> {
    solve_real_with(design, rhs, None, ridge)
}

/// Same solve with a fixed absolute penalty, for experiments that compare
/// fits across dictionaries and must share one regularizer.
pub fn solve_ridge_real_abs(
    design: &DMatrix<f64>,
    rhs: &[Complex64],
    lambda: f64,
) -> Result<RidgeSolution> {
    solve_real_with(design, rhs, Some(lambda), 0.0)
}

/// Largest singular value of a real design matrix.
pub fn largest_singular_value(design: &DMatrix<f64>) -> f64 {
    design
        .clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

fn solve_real_with(
    design: &DMatrix<f64>,
    rhs: &[Complex64],
    lambda_abs: Option<f64>,
    ridge: f64,
) -> Result<RidgeSolution> {
    let svd = design.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let s = &svd.singular_values;
    let condition = condition_of(s.as_slice(), design.ncols());
    let lambda = lambda_abs.unwrap_or(ridge * s[0] * s[0]);
    if lambda == 0.0 {
        guard_ill_posed(condition, 0.0)?;
    }
    let re = DVector::from_iterator(rhs.len(), rhs.iter().map(|v| v.re));
    let im = DVector::from_iterator(rhs.len(), rhs.iter().map(|v| v.im));
    let mut z = DVector::<Complex64>::zeros(design.ncols());
    for (part, sel) in [(u.transpose() * &re, 0), (u.transpose() * &im, 1)] {
        let mut filtered = DVector::<f64>::zeros(s.len());
        for i in 0..s.len() {
            let den = s[i] * s[i] + lambda;
            if den > 0.0 {
                filtered[i] = part[i] * s[i] / den;
            }
        }
        let zi = vt.transpose() * filtered;
        for j in 0..z.len() {
            if sel == 0 {
                z[j].re = zi[j];
            } else {
                z[j].im = zi[j];
            }
        }
    }
    let y = DVector::from_column_slice(rhs);
    let a_c = design.map(|v| Complex64::new(v, 0.0));
    let residual = relative_residual(&(&a_c * &z - &y), &y);
    Ok(RidgeSolution {
        coefficients: z.as_slice().to_vec(),
        condition,
        residual,
    })
}

fn condition_of(s: &[f64], ncols: usize) -> f64 {
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 {
        1.0
    } else if smin == 0.0 || s.len() < ncols {
        // fewer singular values than unknowns: the normal matrix is singular
        f64::INFINITY
    } else {
        (smax / smin) * (smax / smin)
    }
}

fn guard_ill_posed(condition: f64, ridge: f64) -> Result<()> {
    if ridge == 0.0 && condition > ILL_POSED_CONDITION {
        return Err(Error::IllPosed(format!(
            "condition {condition:.3e} exceeds {ILL_POSED_CONDITION:.0e}; supply a ridge > 0"
        )));
    }
    Ok(())
}

fn relative_residual(diff: &DVector<Complex64>, y: &DVector<Complex64>) -> f64 {
    let ny = y.norm();
    if ny > 0.0 {
        diff.norm() / ny
    } else {
        0.0
    }
}

/// Leading eigenpair of a Hermitian matrix by power iteration.
///
/// The start vector is the column with the largest diagonal entry (already
/// aligned with the top eigenvector of a near-rank-one Gram), falling back to
/// the all-ones vector.
pub fn hermitian_leading_pair(
    k: &DMatrix<Complex64>,
    tol: f64,
    max_iter: usize,
) -> Option<(f64, DVector<Complex64>)> {
    let n = k.nrows();
    let j0 = (0..n).max_by(|&a, &b| {
        k[(a, a)]
            .re
            .partial_cmp(&k[(b, b)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    })?;
    let mut v: DVector<Complex64> = k.column(j0).into();
    if v.norm() == 0.0 {
        v = DVector::from_element(n, Complex64::ONE);
    }
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let kv = k * &v;
        lambda = kv.dotc(&v).re;
        let defect = (&kv - &v * Complex64::new(lambda, 0.0)).norm();
        let norm = kv.norm();
        if norm == 0.0 {
            return Some((0.0, v));
        }
        v = kv / Complex64::new(norm, 0.0);
        if defect <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Some((lambda, v))
}

/// Modulus of the dominant eigenvalue after deflating the leading pair;
/// used for the rank-one quality ratio λ₂/λ₁.
pub fn deflated_spectral_radius(
    k: &DMatrix<Complex64>,
    lambda1: f64,
    v1: &DVector<Complex64>,
    tol: f64,
    max_iter: usize,
) -> f64 {
    let n = k.nrows();
    let deflated = k - v1 * v1.adjoint() * Complex64::new(lambda1, 0.0);
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0, (i as f64 + 1.0).recip()));
    // remove the v1 component so the iteration cannot drift back
    let proj = v1.dotc(&v);
    v -= v1 * proj;
    if v.norm() == 0.0 {
        return 0.0;
    }
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let kv = &deflated * &v;
        lambda = kv.dotc(&v).re;
        let norm = kv.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let defect = (&kv - &v * Complex64::new(lambda, 0.0)).norm();
        v = kv / Complex64::new(norm, 0.0);
        if defect <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    lambda.abs()
}
