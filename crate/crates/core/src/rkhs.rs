//! Finite-dimensional reproducing-kernel Hilbert space models.
//!
//! A space is described by an orthonormal basis evaluated on its domain:
//! truncated Hardy and Bergman spaces on the closed unit disk, or an explicit
//! feature table over a finite point set. Operators are matrices in that
//! basis and kernel vectors are coefficient vectors, so every inner product
//! is a plain complex dot product.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::vec_norm;
use crate::error::{Error, Result};

/// Slack admitted when testing membership in the closed unit disk.
const DISK_TOL: f64 = 1e-12;

/// A point in a space's domain: a complex number in the closed unit disk for
/// the polynomial models, or an index into the point list of a finite model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainPoint {
    Disk { re: f64, im: f64 },
    Index { index: usize },
}

impl DomainPoint {
    pub fn disk(z: Complex64) -> Self {
        DomainPoint::Disk { re: z.re, im: z.im }
    }

    pub fn index(index: usize) -> Self {
        DomainPoint::Index { index }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            DomainPoint::Disk { re, im } => Some(Complex64::new(*re, *im)),
            DomainPoint::Index { .. } => None,
        }
    }
}

/// One finite-dimensional space model.
#[derive(Clone, Debug)]
pub enum SpaceModel {
    /// Polynomials of degree `< dim` with the Hardy pairing; basis `z^n`.
    TruncatedHardy { dim: usize },
    /// Same span with Bergman weights; basis `sqrt(n+1) z^n`.
    TruncatedBergman { dim: usize },
    /// Explicit feature table: `features[point][basis]`.
    FiniteSet {
        labels: Vec<String>,
        features: Vec<Vec<Complex64>>,
    },
}

impl SpaceModel {
    pub fn hardy(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadSpec("space dimension must be at least 1".into()));
        }
        Ok(SpaceModel::TruncatedHardy { dim })
    }

    pub fn bergman(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadSpec("space dimension must be at least 1".into()));
        }
        Ok(SpaceModel::TruncatedBergman { dim })
    }

    /// Builds a finite model; every point needs a feature row of equal
    /// length with at least one nonzero entry (so k_lambda != 0).
    pub fn finite(labels: Vec<String>, features: Vec<Vec<Complex64>>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::BadSpec(
                "finite space needs at least one point".into(),
            ));
        }
        if labels.len() != features.len() {
            return Err(Error::BadSpec("label/feature row count mismatch".into()));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::BadSpec("feature rows must be non-empty".into()));
        }
        for row in &features {
            if row.len() != dim {
                return Err(Error::BadSpec("feature rows must have equal length".into()));
            }
            if row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if row.iter().all(|z| z.norm_sqr() == 0.0) {
                return Err(Error::BadSpec("all-zero feature row".into()));
            }
        }
        Ok(SpaceModel::FiniteSet { labels, features })
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceModel::TruncatedHardy { dim } | SpaceModel::TruncatedBergman { dim } => *dim,
            SpaceModel::FiniteSet { features, .. } => features[0].len(),
        }
    }

    /// Number of domain points for finite models.
    pub fn point_count(&self) -> Option<usize> {
        match self {
            SpaceModel::FiniteSet { features, .. } => Some(features.len()),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            SpaceModel::TruncatedHardy { dim } => format!("hardy:{dim}"),
            SpaceModel::TruncatedBergman { dim } => format!("bergman:{dim}"),
            SpaceModel::FiniteSet { features, .. } => {
                format!("finite:{}x{}", features.len(), features[0].len())
            }
        }
    }

    fn check_point(&self, point: &DomainPoint) -> Result<()> {
        match (self, point) {
            (
                SpaceModel::TruncatedHardy { .. } | SpaceModel::TruncatedBergman { .. },
                DomainPoint::Disk { re, im },
            ) => {
                if (re * re + im * im).sqrt() > 1.0 + DISK_TOL {
                    Err(Error::OutOfDomain)
                } else {
                    Ok(())
                }
            }
            (SpaceModel::FiniteSet { features, .. }, DomainPoint::Index { index }) => {
                if *index < features.len() {
                    Ok(())
                } else {
                    Err(Error::OutOfDomain)
                }
            }
            _ => Err(Error::OutOfDomain),
        }
    }

    /// Coefficients of the kernel vector `k_lambda`: `conj(e_n(lambda))`.
    pub fn kernel_vec(&self, point: &DomainPoint) -> Result<KernelVector> {
        self.check_point(point)?;
        let coeffs: Vec<Complex64> = match (self, point) {
            (SpaceModel::TruncatedHardy { dim }, DomainPoint::Disk { re, im }) => {
                let lam = Complex64::new(*re, *im);
                let mut pow = Complex64::new(1.0, 0.0);
                (0..*dim)
                    .map(|n| {
                        if n > 0 {
                            pow *= lam;
                        }
                        pow.conj()
                    })
                    .collect()
            }
            (SpaceModel::TruncatedBergman { dim }, DomainPoint::Disk { re, im }) => {
                let lam = Complex64::new(*re, *im);
                let mut pow = Complex64::new(1.0, 0.0);
                (0..*dim)
                    .map(|n| {
                        if n > 0 {
                            pow *= lam;
                        }
                        pow.conj() * ((n + 1) as f64).sqrt()
                    })
                    .collect()
            }
            (SpaceModel::FiniteSet { features, .. }, DomainPoint::Index { index }) => {
                features[*index].iter().map(|z| z.conj()).collect()
            }
            _ => unreachable!("check_point filtered incompatible points"),
        };
        let norm = vec_norm(&coeffs);
        debug_assert!(norm > 0.0);
        Ok(KernelVector { coeffs, norm })
    }

    /// `k_lambda / ||k_lambda||`.
    pub fn normalized_kernel(&self, point: &DomainPoint) -> Result<Vec<Complex64>> {
        let kv = self.kernel_vec(point)?;
        let inv = 1.0 / kv.norm;
        Ok(kv.coeffs.iter().map(|z| z * inv).collect())
    }
}

/// Kernel vector coefficients with their norm.
#[derive(Clone, Debug)]
pub struct KernelVector {
    pub coeffs: Vec<Complex64>,
    pub norm: f64,
}

/// Ordered direct sum of at least two space models.
#[derive(Clone, Debug)]
pub struct DirectSumSpace {
    components: Vec<SpaceModel>,
}

impl DirectSumSpace {
    pub fn new(components: Vec<SpaceModel>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::ArityMismatch(format!(
                "direct sum needs at least 2 components, got {}",
                components.len()
            )));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[SpaceModel] {
        &self.components
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(SpaceModel::dim).sum()
    }

    /// Cumulative dimension offsets of the components in the stacked basis.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for c in &self.components {
            offsets.push(acc);
            acc += c.dim();
        }
        offsets
    }

    pub fn descriptor(&self) -> String {
        self.components
            .iter()
            .map(SpaceModel::descriptor)
            .collect::<Vec<_>>()
            .join(" (+) ")
    }

    /// Stacked kernel tuple `(k_{l1}, ..., k_{ln})` normalized jointly so the
    /// whole vector is a unit vector.
    pub fn direct_sum_kernel(&self, points: &[DomainPoint]) -> Result<Vec<Complex64>> {
        if points.len() != self.components.len() {
            return Err(Error::ArityMismatch(format!(
                "{} points for {} components",
                points.len(),
                self.components.len()
            )));
        }
        let mut stacked = Vec::with_capacity(self.total_dim());
        let mut norm_sq = 0.0;
        for (space, point) in self.components.iter().zip(points) {
            let kv = space.kernel_vec(point)?;
            norm_sq += kv.norm * kv.norm;
            stacked.extend_from_slice(&kv.coeffs);
        }
        let inv = 1.0 / norm_sq.sqrt();
        for z in &mut stacked {
            *z *= inv;
        }
        Ok(stacked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk(re: f64, im: f64) -> DomainPoint {
        DomainPoint::Disk { re, im }
    }

    #[test]
    fn hardy_kernel_at_origin() {
        let h = SpaceModel::hardy(2).unwrap();
        let kv = h.kernel_vec(&disk(0.0, 0.0)).unwrap();
        assert_eq!(kv.coeffs, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((kv.norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hardy_kernel_half() {
        // Norm squared by direct summation: 1 + 0.25.
        let h = SpaceModel::hardy(2).unwrap();
        let kv = h.kernel_vec(&disk(0.5, 0.0)).unwrap();
        assert_eq!(kv.coeffs, vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!((kv.norm * kv.norm - 1.25).abs() < 1e-15);
    }

    #[test]
    fn bergman_kernel_half() {
        // Norm squared by direct summation: 1 + 2 * 0.25.
        let b = SpaceModel::bergman(2).unwrap();
        let kv = b.kernel_vec(&disk(0.5, 0.0)).unwrap();
        assert!((kv.coeffs[1] - c(2f64.sqrt() * 0.5, 0.0)).norm() < 1e-15);
        assert!((kv.norm * kv.norm - 1.5).abs() < 1e-15);
    }

    #[test]
    fn normalized_kernel_examples() {
        let h = SpaceModel::hardy(2).unwrap();
        assert_eq!(
            h.normalized_kernel(&disk(0.0, 0.0)).unwrap(),
            vec![c(1.0, 0.0), c(0.0, 0.0)]
        );
        let k = h.normalized_kernel(&disk(0.5, 0.0)).unwrap();
        let s = 1.25f64.sqrt();
        assert!((k[0] - c(1.0 / s, 0.0)).norm() < 1e-15);
        assert!((k[1] - c(0.5 / s, 0.0)).norm() < 1e-15);

        let f = SpaceModel::finite(vec!["p".into()], vec![vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let k = f.normalized_kernel(&DomainPoint::index(0)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((k[0] - c(r, 0.0)).norm() < 1e-15 && (k[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn out_of_domain_rejected() {
        let h = SpaceModel::hardy(3).unwrap();
        assert!(matches!(
            h.kernel_vec(&disk(1.1, 0.0)),
            Err(Error::OutOfDomain)
        ));
        let f = SpaceModel::finite(vec!["p".into()], vec![vec![c(1.0, 0.0)]]).unwrap();
        assert!(matches!(
            f.kernel_vec(&DomainPoint::index(1)),
            Err(Error::OutOfDomain)
        ));
        assert!(matches!(
            f.kernel_vec(&disk(0.0, 0.0)),
            Err(Error::OutOfDomain)
        ));
    }

    #[test]
    fn finite_rejects_zero_row() {
        let r = SpaceModel::finite(vec!["p".into()], vec![vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(r.is_err());
    }

    #[test]
    fn reproducing_property() {
        // <f, k_lambda> recovers sum_n f_n e_n(lambda) for random coefficients.
        let spaces = [
            SpaceModel::hardy(5).unwrap(),
            SpaceModel::bergman(4).unwrap(),
        ];
        for space in &spaces {
            let dim = space.dim();
            let coeffs: Vec<Complex64> = (0..dim)
                .map(|n| c(0.3 * n as f64 - 0.5, 0.1 * n as f64))
                .collect();
            for step in 0..32 {
                let angle = 2.0 * std::f64::consts::PI * step as f64 / 32.0;
                let r = 0.97 * (step as f64 / 31.0);
                let lam = Complex64::from_polar(r, angle);
                let kv = space.kernel_vec(&DomainPoint::disk(lam)).unwrap();
                let got = crate::cmatrix::inner(&coeffs, &kv.coeffs);
                let mut expected = Complex64::new(0.0, 0.0);
                let mut pow = Complex64::new(1.0, 0.0);
                for (n, f_n) in coeffs.iter().enumerate() {
                    if n > 0 {
                        pow *= lam;
                    }
                    let basis = match space {
                        SpaceModel::TruncatedBergman { .. } => pow * ((n + 1) as f64).sqrt(),
                        _ => pow,
                    };
                    expected += f_n * basis;
                }
                assert!((got - expected).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn hardy_norm_identity() {
        let h = SpaceModel::hardy(6).unwrap();
        for &r in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let kv = h.kernel_vec(&disk(r, 0.0)).unwrap();
            let expected: f64 = (0..6).map(|n| r.powi(2 * n as i32)).sum();
            let got = kv.norm * kv.norm;
            assert!((got - expected).abs() <= 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn kernel_norm_monotone_in_radius() {
        for space in [
            SpaceModel::hardy(8).unwrap(),
            SpaceModel::bergman(8).unwrap(),
        ] {
            let mut prev = 0.0;
            for step in 0..=20 {
                let r = step as f64 / 20.0;
                let norm = space.kernel_vec(&disk(r, 0.0)).unwrap().norm;
                assert!(norm >= prev - 1e-12);
                prev = norm;
            }
        }
    }

    #[test]
    fn direct_sum_kernel_examples() {
        let two_hardy = DirectSumSpace::new(vec![
            SpaceModel::hardy(2).unwrap(),
            SpaceModel::hardy(2).unwrap(),
        ])
        .unwrap();
        let k = two_hardy
            .direct_sum_kernel(&[disk(0.0, 0.0), disk(0.0, 0.0)])
            .unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((k[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((k[2] - c(r, 0.0)).norm() < 1e-15);

        let k = two_hardy
            .direct_sum_kernel(&[disk(0.5, 0.0), disk(0.0, 0.0)])
            .unwrap();
        let s = 2.25f64.sqrt();
        for (got, want) in k.iter().zip([1.0, 0.5, 1.0, 0.0]) {
            assert!((got - c(want / s, 0.0)).norm() < 1e-15);
        }

        let one = || SpaceModel::finite(vec!["p".into()], vec![vec![c(1.0, 0.0)]]).unwrap();
        let three = DirectSumSpace::new(vec![one(), one(), one()]).unwrap();
        let k = three
            .direct_sum_kernel(&[
                DomainPoint::index(0),
                DomainPoint::index(0),
                DomainPoint::index(0),
            ])
            .unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!(k.iter().all(|z| (z - c(r, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn direct_sum_kernel_is_unit() {
        let sum = DirectSumSpace::new(vec![
            SpaceModel::hardy(3).unwrap(),
            SpaceModel::bergman(4).unwrap(),
        ])
        .unwrap();
        for step in 0..16 {
            let a = step as f64 / 15.0;
            let k = sum
                .direct_sum_kernel(&[disk(a, 0.0), disk(0.0, 0.9 * a)])
                .unwrap();
            assert!((vec_norm(&k) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn block_offsets_examples() {
        let h = |n| SpaceModel::hardy(n).unwrap();
        let s = DirectSumSpace::new(vec![h(2), h(2)]).unwrap();
        assert_eq!(s.block_offsets(), vec![0, 2]);
        let s = DirectSumSpace::new(vec![h(1), h(3), h(2)]).unwrap();
        assert_eq!(s.block_offsets(), vec![0, 1, 4]);
        assert_eq!(s.total_dim(), 6);
        assert!(matches!(
            DirectSumSpace::new(vec![h(5)]),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn arity_mismatch_on_wrong_tuple() {
        let sum = DirectSumSpace::new(vec![
            SpaceModel::hardy(2).unwrap(),
            SpaceModel::hardy(2).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            sum.direct_sum_kernel(&[disk(0.0, 0.0)]),
            Err(Error::ArityMismatch(_))
        ));
    }
}
