//! Numerical radius via an angle sweep over Hermitian parts, plus the
//! classical half-norm sandwich check.

use num_complex::Complex64;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::report::{CheckMode, CheckReport, Provenance, SubCheck};

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Numerical radius estimate together with the maximizing rotation angle.
#[derive(Clone, Copy, Debug)]
pub struct RadiusEstimate {
    pub value: f64,
    pub theta: f64,
}

/// Hermitian part of `e^{i theta} A`, assembled entrywise so the result is
/// Hermitian to the bit.
fn rotated_real_part(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let phase = Complex64::from_polar(1.0, theta);
    let n = a.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let b_ij = phase * a.get(i, j);
        let b_ji = phase * a.get(j, i);
        (b_ij + b_ji.conj()) * 0.5
    })
}

fn top_eigenvalue(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    let h = rotated_real_part(a, theta);
    let eig = h.herm_eig()?;
    Ok(*eig.eigenvalues.last().expect("non-empty spectrum"))
}

/// Numerical radius `w(A) = max_theta lambda_max(Re(e^{i theta} A))`,
/// computed with `sweep` equally spaced angles followed by `refine`
/// golden-section shrink steps around the incumbent.
pub fn numerical_radius(a: &ComplexMatrix, sweep: usize, refine: usize) -> Result<RadiusEstimate> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} not square",
            a.rows(),
            a.cols()
        )));
    }
    let sweep = sweep.max(4);
    let mut best = RadiusEstimate {
        value: f64::NEG_INFINITY,
        theta: 0.0,
    };
    for j in 0..sweep {
        let theta = TWO_PI * j as f64 / sweep as f64;
        let v = top_eigenvalue(a, theta)?;
        if v > best.value {
            best = RadiusEstimate { value: v, theta };
        }
    }
    // The objective is 1-D and smooth between eigenvalue crossings, so a
    // bracket of one sweep cell on either side of the incumbent suffices.
    let cell = TWO_PI / sweep as f64;
    let mut lo = best.theta - cell;
    let mut hi = best.theta + cell;
    let mut x1 = hi - GOLDEN_INV * (hi - lo);
    let mut x2 = lo + GOLDEN_INV * (hi - lo);
    let offer = |theta: f64, best: &mut RadiusEstimate| -> Result<f64> {
        let v = top_eigenvalue(a, theta)?;
        if v > best.value {
            *best = RadiusEstimate { value: v, theta };
        }
        Ok(v)
    };
    let mut f1 = offer(x1, &mut best)?;
    let mut f2 = offer(x2, &mut best)?;
    for _ in 0..refine {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN_INV * (hi - lo);
            f2 = offer(x2, &mut best)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN_INV * (hi - lo);
            f1 = offer(x1, &mut best)?;
        }
    }
    best.theta = best.theta.rem_euclid(TWO_PI);
    Ok(best)
}

/// Verifies the sandwich `||A||/2 <= w(A) <= ||A||` and reports both sides.
pub fn half_norm_check(a: &ComplexMatrix) -> Result<CheckReport> {
    const TOL: f64 = 1e-7;
    let w = numerical_radius(a, 360, 40)?.value;
    let norm = a.operator_norm();
    let parts = vec![
        SubCheck::new("half_norm_le_w", 0.5 * norm, w, TOL),
        SubCheck::new("w_le_norm", w, norm, TOL),
    ];
    Ok(CheckReport::from_parts(
        "half_norm",
        parts,
        TOL,
        CheckMode::Certified,
        Provenance {
            dims: vec![a.rows()],
            ..Provenance::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_radius_is_one() {
        let est = numerical_radius(&ComplexMatrix::identity(3), 360, 40).unwrap();
        assert!((est.value - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn jordan_block_radius_is_half() {
        // Re(e^{i theta} A) has eigenvalues +-1/2 for every theta.
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let est = numerical_radius(&a, 360, 40).unwrap();
        assert!((est.value - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn normal_radius_is_max_eigenvalue_modulus() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let est = numerical_radius(&a, 360, 40).unwrap();
        assert!((est.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn estimate_is_consistent_at_stored_angle() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(0.3, -1.0), c(0.8, 0.2), c(-0.1, 0.4), c(0.0, 0.6)],
        )
        .unwrap();
        let est = numerical_radius(&a, 360, 40).unwrap();
        let v = top_eigenvalue(&a, est.theta).unwrap();
        assert!((v - est.value).abs() <= 1e-10);
    }

    #[test]
    fn radius_of_adjoint_matches() {
        let a = ComplexMatrix::new(
            3,
            3,
            vec![
                c(0.3, -1.0),
                c(0.8, 0.2),
                c(0.0, 0.0),
                c(-0.1, 0.4),
                c(0.0, 0.6),
                c(1.2, 0.0),
                c(0.5, 0.5),
                c(0.0, -0.2),
                c(-0.7, 0.1),
            ],
        )
        .unwrap();
        let w1 = numerical_radius(&a, 360, 40).unwrap().value;
        let w2 = numerical_radius(&a.adjoint(), 360, 40).unwrap().value;
        assert!((w1 - w2).abs() <= 1e-8);
    }

    #[test]
    fn refinement_never_decreases_the_sweep() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(0.2, 0.1), c(1.0, -0.3), c(0.0, 0.0), c(-0.4, 0.0)],
        )
        .unwrap();
        let sweep_only = numerical_radius(&a, 90, 0).unwrap().value;
        let refined = numerical_radius(&a, 90, 40).unwrap().value;
        assert!(refined >= sweep_only);
    }

    #[test]
    fn half_norm_examples() {
        // Nilpotent: the lower bound is tight.
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let r = half_norm_check(&a).unwrap();
        assert!(r.pass);
        assert!(
            r.slack.abs() <= 1e-8,
            "lower bound should be tight, slack {}",
            r.slack
        );

        assert!(half_norm_check(&ComplexMatrix::identity(2)).unwrap().pass);
        assert!(half_norm_check(&ComplexMatrix::zeros(3, 3)).unwrap().pass);
    }
}
