//! Cross-module invariants on seeded ensembles and randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use berlab::harness::Rng64;
use berlab::{
    berezin_number, berezin_set_sample, euclid_berezin_number, gen_operator, numerical_radius,
    BlockOperator, CheckMode, ComplexMatrix, CompressMode, DirectSumSpace, InstanceSpec,
    OperatorKind, SearchConfig, SpaceModel,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hermitian(seed: u64, dim: usize) -> ComplexMatrix {
    gen_operator(&InstanceSpec::new(seed, dim, OperatorKind::Hermitian)).unwrap()
}

fn general(seed: u64, dim: usize) -> ComplexMatrix {
    gen_operator(&InstanceSpec::new(seed, dim, OperatorKind::General)).unwrap()
}

#[test]
fn herm_eig_residuals_over_seeded_ensemble() {
    // 200 random Hermitian matrices, dims 1..=16.
    for i in 0..200u64 {
        let dim = 1 + (i % 16) as usize;
        let m = hermitian(1000 + i, dim);
        let eig = m.herm_eig().unwrap();
        let scale = m.frobenius_norm().max(1.0);
        let recon = (&eig.reconstruct() - &m).frobenius_norm();
        assert!(recon <= 1e-10 * scale, "seed {i}: reconstruction {recon}");
        let v = &eig.eigenvectors;
        let ortho = (&(&v.adjoint() * v) - &ComplexMatrix::identity(dim)).frobenius_norm();
        assert!(ortho <= 1e-10, "seed {i}: orthogonality {ortho}");
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}

#[test]
fn abs_op_eigenvalues_match_singular_values() {
    // Independent route: the eigenvalues of [[0, X], [X*, 0]] are plus and
    // minus the singular values of X.
    for i in 0..60u64 {
        let dim = 1 + (i % 6) as usize;
        let x = general(2000 + i, dim);
        let abs_eigs = x.abs_op().unwrap().herm_eig().unwrap().eigenvalues;

        let n = 2 * dim;
        let embed = ComplexMatrix::from_fn(n, n, |r, cidx| {
            if r < dim && cidx >= dim {
                x.get(r, cidx - dim)
            } else if r >= dim && cidx < dim {
                x.get(cidx, r - dim).conj()
            } else {
                c(0.0, 0.0)
            }
        });
        let mut top: Vec<f64> = embed.herm_eig().unwrap().eigenvalues[dim..].to_vec();
        top.sort_by(f64::total_cmp);
        for (a, b) in abs_eigs.iter().zip(&top) {
            assert!((a - b).abs() <= 1e-8, "seed {i}: |Δ| = {}", (a - b).abs());
        }
    }
}

#[test]
fn apply_fn_spectral_mapping_is_monotone() {
    for i in 0..50u64 {
        let dim = 1 + (i % 8) as usize;
        let m = gen_operator(&InstanceSpec::new(3000 + i, dim, OperatorKind::Positive)).unwrap();
        let f = |t: f64| (t + 0.5).ln_1p();
        let mapped = m.apply_fn(f).unwrap();
        let original = m.herm_eig().unwrap().eigenvalues;
        let got = mapped.herm_eig().unwrap().eigenvalues;
        for (lam, g) in original.iter().zip(&got) {
            assert!((f(lam.max(0.0)) - g).abs() <= 1e-9, "seed {i}");
        }
    }
}

#[test]
fn gelfand_on_constructed_diagonalizable_matrices() {
    // Normal matrices with known spectrum, plus triangular matrices whose
    // eigenvalues sit on the diagonal.
    let tol = 1e-3;
    for i in 0..50u64 {
        let dim = 2 + (i % 6) as usize;
        let mut rng = Rng64::from_parts(&[7000 + i]);
        let radius_expected;
        let m = if i % 2 == 0 {
            let u = gen_operator(&InstanceSpec::new(4000 + i, dim, OperatorKind::Unitary)).unwrap();
            let eigs: Vec<Complex64> = (0..dim)
                .map(|_| c(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0))
                .collect();
            radius_expected = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            &(&u * &ComplexMatrix::diag(&eigs)) * &u.adjoint()
        } else {
            let diag: Vec<f64> = (0..dim)
                .map(|k| 0.2 + 0.3 * k as f64 + rng.unit() * 0.05)
                .collect();
            radius_expected = diag.iter().cloned().fold(0.0, f64::max);
            ComplexMatrix::from_fn(dim, dim, |r, cc| {
                if r == cc {
                    c(diag[r], 0.0)
                } else if r < cc {
                    c(rng.unit() - 0.5, rng.unit() - 0.5)
                } else {
                    c(0.0, 0.0)
                }
            })
        };
        let got = m.gelfand_spectral_radius(tol).unwrap();
        let rel = (got - radius_expected).abs() / radius_expected.max(1e-12);
        assert!(
            rel <= tol,
            "seed {i}: expected {radius_expected}, got {got}"
        );
    }
}

#[test]
fn berezin_homogeneity_and_subadditivity() {
    let cfg = SearchConfig::default();
    for i in 0..200u64 {
        let dim = 1 + (i % 6) as usize;
        let space = SpaceModel::hardy(dim).unwrap();
        let a = general(5000 + i, dim);
        let b = general(6000 + i, dim);
        let mut rng = Rng64::from_parts(&[42, i]);
        let alpha = c(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0);

        let ber_a = berezin_number(&a, &space, &cfg).unwrap().value;
        let scaled = berezin_number(&a.scale(alpha), &space, &cfg).unwrap().value;
        let expected = alpha.norm() * ber_a;
        assert!(
            (scaled - expected).abs() <= 1e-9 * expected.max(1.0),
            "seed {i}: homogeneity {scaled} vs {expected}"
        );

        let ber_b = berezin_number(&b, &space, &cfg).unwrap().value;
        let ber_sum = berezin_number(&(&a + &b), &space, &cfg).unwrap().value;
        assert!(ber_sum <= ber_a + ber_b + 1e-7, "seed {i}: subadditivity");
    }
}

#[test]
fn euclid_berezin_homogeneity_and_subadditivity() {
    let cfg = SearchConfig::default();
    for i in 0..60u64 {
        let dim = 1 + (i % 4) as usize;
        let space = SpaceModel::bergman(dim).unwrap();
        let t1 = general(7100 + i, dim);
        let t2 = general(7200 + i, dim);
        let s1 = general(7300 + i, dim);
        let s2 = general(7400 + i, dim);
        let p = [1.0, 1.5, 2.0][(i % 3) as usize];
        let mut rng = Rng64::from_parts(&[43, i]);
        let alpha = c(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0);

        let base = euclid_berezin_number(&[t1.clone(), t2.clone()], p, &space, &cfg)
            .unwrap()
            .value;
        let scaled = euclid_berezin_number(&[t1.scale(alpha), t2.scale(alpha)], p, &space, &cfg)
            .unwrap()
            .value;
        assert!(
            (scaled - alpha.norm() * base).abs() <= 1e-9 * (alpha.norm() * base).max(1.0),
            "seed {i}: homogeneity"
        );

        let shifted = euclid_berezin_number(&[&t1 + &s1, &t2 + &s2], p, &space, &cfg)
            .unwrap()
            .value;
        let other = euclid_berezin_number(&[s1, s2], p, &space, &cfg)
            .unwrap()
            .value;
        assert!(shifted <= base + other + 1e-7, "seed {i}: subadditivity");
    }
}

#[test]
fn sandwich_ber_le_radius_le_norm() {
    // 500 seeded operators of mixed kind.
    let cfg = SearchConfig::default();
    let kinds = [
        OperatorKind::General,
        OperatorKind::Hermitian,
        OperatorKind::Positive,
        OperatorKind::Contraction,
        OperatorKind::Unitary,
    ];
    for i in 0..500u64 {
        let dim = 1 + (i % 8) as usize;
        let kind = kinds[(i % 5) as usize];
        let op = gen_operator(&InstanceSpec::new(8000 + i, dim, kind)).unwrap();
        let space = if i % 2 == 0 {
            SpaceModel::hardy(dim).unwrap()
        } else {
            SpaceModel::bergman(dim).unwrap()
        };
        let ber = berezin_number(&op, &space, &cfg).unwrap().value;
        let w = numerical_radius(&op, 360, 40).unwrap().value;
        let norm = op.operator_norm();
        assert!(ber <= w + 1e-7, "seed {i}: ber {ber} vs w {w}");
        assert!(w <= norm + 1e-7, "seed {i}: w {w} vs norm {norm}");
    }
}

#[test]
fn berezin_set_stays_inside_radius() {
    for i in 0..40u64 {
        let dim = 1 + (i % 8) as usize;
        let op = general(9000 + i, dim);
        let space = SpaceModel::hardy(dim).unwrap();
        let w = numerical_radius(&op, 360, 40).unwrap().value;
        for v in berezin_set_sample(&op, &space, 128).unwrap() {
            assert!(v.norm() <= w + 1e-8, "seed {i}");
        }
    }
}

#[test]
fn numerical_radius_scaling_and_normality() {
    for i in 0..60u64 {
        let dim = 1 + (i % 6) as usize;
        let a = general(10_000 + i, dim);
        let w = numerical_radius(&a, 360, 40).unwrap().value;
        let mut rng = Rng64::from_parts(&[44, i]);
        let s = 0.1 + 3.0 * rng.unit();
        let ws = numerical_radius(&a.scale(c(s, 0.0)), 360, 40)
            .unwrap()
            .value;
        assert!(
            (ws - s * w).abs() <= 1e-8 * (s * w).max(1.0),
            "seed {i}: real scaling"
        );
        let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.unit());
        let wp = numerical_radius(&a.scale(phase), 360, 40).unwrap().value;
        assert!(
            (wp - w).abs() <= 1e-8 * w.max(1.0),
            "seed {i}: phase invariance"
        );
    }

    // Normal matrices: w equals the largest eigenvalue modulus.
    for i in 0..30u64 {
        let dim = 2 + (i % 5) as usize;
        let u = gen_operator(&InstanceSpec::new(11_000 + i, dim, OperatorKind::Unitary)).unwrap();
        let mut rng = Rng64::from_parts(&[45, i]);
        let eigs: Vec<Complex64> = (0..dim)
            .map(|_| c(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0))
            .collect();
        let expected = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let m = &(&u * &ComplexMatrix::diag(&eigs)) * &u.adjoint();
        let w = numerical_radius(&m, 360, 40).unwrap().value;
        assert!(
            (w - expected).abs() <= 1e-6 * expected.max(1.0),
            "seed {i}: {w} vs {expected}"
        );
    }
}

#[test]
fn hou_chain_on_seeded_block_operators() {
    let cfg = SearchConfig::default();
    for i in 0..25u64 {
        let mut rng = Rng64::from_parts(&[12_000 + i]);
        let ncomp = 2 + rng.range(2);
        let comps: Vec<SpaceModel> = (0..ncomp)
            .map(|_| SpaceModel::hardy(1 + rng.range(4)).unwrap())
            .collect();
        let dims: Vec<usize> = comps.iter().map(|s| s.dim()).collect();
        let blocks: Vec<Vec<ComplexMatrix>> = (0..ncomp)
            .map(|bi| {
                (0..ncomp)
                    .map(|bj| {
                        let seed = rng.next_u64();
                        let mut local = Rng64::from_parts(&[seed]);
                        ComplexMatrix::from_fn(dims[bi], dims[bj], |_, _| {
                            c(local.normal() * 0.4, local.normal() * 0.4)
                        })
                    })
                    .collect()
            })
            .collect();
        let t = BlockOperator::assemble(blocks, DirectSumSpace::new(comps).unwrap()).unwrap();
        let m = t.compress(CompressMode::HouNorm, &cfg).unwrap();

        let r_flat = t.flat().gelfand_spectral_radius(1e-4).unwrap();
        let r_comp = m.gelfand_spectral_radius(1e-4).unwrap();
        assert!(
            r_flat <= r_comp + 1e-3,
            "seed {i}: spectral radii {r_flat} vs {r_comp}"
        );

        let w_flat = numerical_radius(t.flat(), 360, 40).unwrap().value;
        let w_comp = numerical_radius(&m, 360, 40).unwrap().value;
        assert!(
            w_flat <= w_comp + 1e-6,
            "seed {i}: radii {w_flat} vs {w_comp}"
        );

        let n_flat = t.flat().operator_norm();
        let n_comp = m.operator_norm();
        assert!(
            n_flat <= n_comp + 1e-8,
            "seed {i}: norms {n_flat} vs {n_comp}"
        );
    }
}

#[test]
fn certified_suite_smoke_run() {
    // A miniature version of the zero-violation gate on every catalog entry.
    let checkers: Vec<String> = berlab::CATALOG.iter().map(|s| s.to_string()).collect();
    let result = berlab::run_suite(&checkers, 6, 2024, CheckMode::Certified).unwrap();
    assert_eq!(
        result.total_fail,
        0,
        "worst slacks: {:?}",
        result
            .results
            .iter()
            .map(|r| (r.checker.clone(), r.worst_slack))
            .collect::<Vec<_>>()
    );
}

// Randomized structural properties.

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn matrix_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim).prop_flat_map(|n| {
        let ea = proptest::collection::vec(small_complex(), n * n);
        let eb = proptest::collection::vec(small_complex(), n * n);
        (ea, eb).prop_map(move |(ea, eb)| {
            (
                ComplexMatrix::new(n, n, ea).unwrap(),
                ComplexMatrix::new(n, n, eb).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_antihomomorphism((a, b) in matrix_pair(5)) {
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn adjoint_is_involutive((a, _) in matrix_pair(6)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn gelfand_never_exceeds_norm((a, _) in matrix_pair(5)) {
        let tol = 1e-3;
        if let Ok(r) = a.gelfand_spectral_radius(tol) {
            prop_assert!(r <= a.operator_norm() + tol);
        }
    }

    #[test]
    fn hermitian_part_eigendecomposes((a, _) in matrix_pair(6)) {
        let h = (&a + &a.adjoint()).scale(c(0.5, 0.0));
        let eig = h.herm_eig().unwrap();
        let resid = (&eig.reconstruct() - &h).frobenius_norm();
        prop_assert!(resid <= 1e-10 * h.frobenius_norm().max(1.0));
    }

    #[test]
    fn direct_sum_kernels_are_unit(re in -0.7..0.7f64, im in -0.7..0.7f64, n in 1usize..5) {
        let sum = DirectSumSpace::new(vec![
            SpaceModel::hardy(n).unwrap(),
            SpaceModel::bergman(n + 1).unwrap(),
        ]).unwrap();
        let k = sum.direct_sum_kernel(&[
            berlab::DomainPoint::Disk { re, im },
            berlab::DomainPoint::Disk { re: im, im: re },
        ]).unwrap();
        prop_assert!((berlab::vec_norm(&k) - 1.0).abs() <= 1e-12);
    }
}
