//! Deterministic seeded instance generation, batch suite execution, and a
//! tightness search over each checker's instance family.
//!
//! Generation is counter-based (splitmix streams keyed on seed, checker, and
//! instance index), so instances are bit-reproducible regardless of worker
//! count or execution order.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::berezin::{splitmix64, unit_f64, SearchConfig};
use crate::cmatrix::{vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_basic_order, check_block_bound, check_embed_monotone, check_euclid_blocks,
    check_euclid_offdiag, check_mccarty, check_mixed_schwarz, check_offdiag_fg,
    check_offdiag_power, check_product, check_sums, check_two_by_two, ExponentSet, FGPair,
    ProductVariant,
};
use crate::opmatrix::BlockOperator;
use crate::report::{CheckMode, CheckReport};
use crate::rkhs::{DirectSumSpace, SpaceModel};

/// The checker catalog run by a full suite.
pub const CATALOG: [&str; 11] = [
    "basic_order",
    "mccarty",
    "mixed_schwarz",
    "block_bound",
    "two_by_two",
    "offdiag_fg",
    "product",
    "sums",
    "euclid_offdiag",
    "euclid_blocks",
    "embed_monotone",
];

/// Every checker id the harness can run. The power-family checker
/// delegates to the f,g form, so it is runnable on its own but not an
/// extra catalog member.
pub const ALL_CHECKERS: [&str; 12] = [
    "basic_order",
    "mccarty",
    "mixed_schwarz",
    "block_bound",
    "two_by_two",
    "offdiag_fg",
    "offdiag_power",
    "product",
    "sums",
    "euclid_offdiag",
    "euclid_blocks",
    "embed_monotone",
];

pub fn known_checker(id: &str) -> bool {
    ALL_CHECKERS.contains(&id)
}

/// Deterministic stream of pseudo-random draws.
#[derive(Clone, Debug)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn from_parts(parts: &[u64]) -> Self {
        let mut state = 0x5555_5555_5555_5555u64;
        for &p in parts {
            state ^= p;
            splitmix64(&mut state);
        }
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    pub fn range(&mut self, n: usize) -> usize {
        (self.next_u64() % n.max(1) as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.unit().max(1e-18);
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.range(items.len())]
    }
}

/// Operator ensemble kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    General,
    Hermitian,
    Positive,
    Contraction,
    Unitary,
}

pub const OPERATOR_KINDS: [OperatorKind; 5] = [
    OperatorKind::General,
    OperatorKind::Hermitian,
    OperatorKind::Positive,
    OperatorKind::Contraction,
    OperatorKind::Unitary,
];

/// Knobs for one generated operator.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub kind: OperatorKind,
}

impl InstanceSpec {
    pub fn new(seed: u64, dim: usize, kind: OperatorKind) -> Self {
        Self { seed, dim, kind }
    }
}

/// Complex Gaussian matrix scaled so the operator norm stays desk-scale.
fn ginibre(rng: &mut Rng64, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = 1.0 / (2.0 * rows.max(cols) as f64).sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal() * scale)
}

/// Deterministic operator for a spec. Positive operators are Gram matrices,
/// contractions are norm-scaled, Hermitian operators are symmetrized so
/// `A = A*` holds bit-exactly, and unitaries come from twice-through
/// Gram-Schmidt.
pub fn gen_operator(spec: &InstanceSpec) -> Result<ComplexMatrix> {
    if spec.dim == 0 || spec.dim > 64 {
        return Err(Error::BadSpec(format!("dim {} outside [1, 64]", spec.dim)));
    }
    let mut rng = Rng64::from_parts(&[spec.seed, spec.dim as u64, spec.kind as u64]);
    let g = ginibre(&mut rng, spec.dim, spec.dim);
    Ok(match spec.kind {
        OperatorKind::General => g,
        OperatorKind::Hermitian => {
            let adj = g.adjoint();
            (&g + &adj).scale(Complex64::new(0.5, 0.0))
        }
        OperatorKind::Positive => &g.adjoint() * &g,
        OperatorKind::Contraction => {
            let norm = g.operator_norm();
            g.scale(Complex64::new(1.0 / (norm + 1e-12), 0.0))
        }
        OperatorKind::Unitary => orthonormalize(&g),
    })
}

/// Modified Gram-Schmidt, applied twice for orthogonality at roundoff level.
fn orthonormalize(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g.get(i, j)).collect())
        .collect();
    for _round in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let proj = crate::cmatrix::inner(&cols[j], &cols[k]);
                for i in 0..n {
                    let correction = proj * cols[k][i];
                    cols[j][i] -= correction;
                }
            }
            let norm = vec_norm(&cols[j]);
            if norm < 1e-12 {
                // A degenerate draw: fall back to the matching basis vector.
                for i in 0..n {
                    cols[j][i] = Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0);
                }
            } else {
                for i in 0..n {
                    cols[j][i] /= norm;
                }
            }
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn random_vector(rng: &mut Rng64, dim: usize, norm: f64) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| rng.complex_normal()).collect();
    let current = vec_norm(&v).max(1e-300);
    for z in &mut v {
        *z *= norm / current;
    }
    v
}

fn sample_space(rng: &mut Rng64, max_dim: usize) -> SpaceModel {
    match rng.range(3) {
        0 => SpaceModel::hardy(1 + rng.range(max_dim)).expect("valid dim"),
        1 => SpaceModel::bergman(1 + rng.range(max_dim)).expect("valid dim"),
        _ => {
            let points = 1 + rng.range(12);
            let dim = 1 + rng.range(max_dim.min(8));
            sample_finite_space(rng, points, dim)
        }
    }
}

fn sample_finite_space(rng: &mut Rng64, points: usize, dim: usize) -> SpaceModel {
    let features: Vec<Vec<Complex64>> = (0..points)
        .map(|_| {
            let mut row: Vec<Complex64> = (0..dim).map(|_| rng.complex_normal()).collect();
            if vec_norm(&row) < 1e-9 {
                row[0] = Complex64::new(1.0, 0.0);
            }
            row
        })
        .collect();
    let labels = (0..points).map(|k| format!("p{k}")).collect();
    SpaceModel::finite(labels, features).expect("generated rows are nonzero")
}

/// A space of the same dimension, any kind; used for matched components.
fn sample_space_of_dim(rng: &mut Rng64, dim: usize) -> SpaceModel {
    match rng.range(3) {
        0 => SpaceModel::hardy(dim).expect("valid dim"),
        1 => SpaceModel::bergman(dim).expect("valid dim"),
        _ => {
            let points = 1 + rng.range(12);
            sample_finite_space(rng, points, dim)
        }
    }
}

fn sample_exponents(rng: &mut Rng64) -> ExponentSet {
    let r = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
    let lo = (2.0 / r).max(1.0 + 1e-3);
    let q = if lo >= 2.0 {
        2.0
    } else {
        lo + rng.unit() * (2.0 - lo)
    };
    let alpha = *rng.pick(&[0.0f64, 0.25, 0.5, 0.75, 1.0]);
    ExponentSet::conjugate(r, q, alpha).expect("sampled exponents satisfy the constraints")
}

fn sample_pair(rng: &mut Rng64) -> FGPair {
    let alpha = *rng.pick(&[0.0f64, 0.25, 0.5, 0.75, 1.0]);
    FGPair::power(alpha).expect("alpha in range")
}

fn sample_kind(rng: &mut Rng64) -> OperatorKind {
    *rng.pick(&OPERATOR_KINDS)
}

fn gen(rng: &mut Rng64, dim: usize, kind: OperatorKind) -> ComplexMatrix {
    gen_operator(&InstanceSpec::new(rng.next_u64(), dim, kind)).expect("dim in range")
}

fn gen_rect(rng: &mut Rng64, rows: usize, cols: usize) -> ComplexMatrix {
    let seed = rng.next_u64();
    let mut local = Rng64::from_parts(&[seed, rows as u64, cols as u64]);
    ginibre(&mut local, rows, cols)
}

fn instance_seed(base: u64, checker: &str, index: usize) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in checker.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    let mut state = base ^ h ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    splitmix64(&mut state)
}

/// Runs one seeded instance of a checker.
pub fn run_instance(id: &str, seed: u64, mode: CheckMode) -> Result<CheckReport> {
    let mut rng = Rng64::from_parts(&[seed]);
    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let mut report = build_and_check(id, &mut rng, &cfg, mode)?;
    report.provenance.seed = Some(seed);
    Ok(report)
}

fn build_and_check(
    id: &str,
    rng: &mut Rng64,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    match id {
        "basic_order" => {
            let space = sample_space(rng, 16);
            let kind = sample_kind(rng);
            let op = gen(rng, space.dim(), kind);
            check_basic_order(&op, &space, cfg, mode)
        }
        "mccarty" => {
            let dim = 1 + rng.range(8);
            let t = gen(rng, dim, OperatorKind::Positive);
            let norm = if rng.range(3) == 0 { 1.0 } else { rng.unit() };
            let x = random_vector(rng, dim, norm);
            let r = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
            check_mccarty(&t, &x, r, mode)
        }
        "mixed_schwarz" => {
            let dim = 1 + rng.range(8);
            let t = gen(rng, dim, OperatorKind::General);
            let nx = 0.2 + rng.unit();
            let x = random_vector(rng, dim, nx);
            let ny = 0.2 + rng.unit();
            let y = random_vector(rng, dim, ny);
            let pair = sample_pair(rng);
            check_mixed_schwarz(&t, &x, &y, &pair, mode)
        }
        "block_bound" => {
            let ncomp = 2 + rng.range(2);
            let comps: Vec<SpaceModel> = (0..ncomp).map(|_| sample_space(rng, 8)).collect();
            let dims: Vec<usize> = comps.iter().map(|c| c.dim()).collect();
            let blocks: Vec<Vec<ComplexMatrix>> = (0..ncomp)
                .map(|i| {
                    (0..ncomp)
                        .map(|j| gen_rect(rng, dims[i], dims[j]))
                        .collect()
                })
                .collect();
            let t = BlockOperator::assemble(blocks, DirectSumSpace::new(comps)?)?;
            check_block_bound(&t, cfg, mode)
        }
        "two_by_two" => {
            let comps: Vec<SpaceModel> = (0..2).map(|_| sample_space(rng, 8)).collect();
            let dims: Vec<usize> = comps.iter().map(|c| c.dim()).collect();
            let diagonal_only = rng.range(4) == 0;
            let kind_a = sample_kind(rng);
            let kind_d = sample_kind(rng);
            let a = gen(rng, dims[0], kind_a);
            let b = if diagonal_only {
                ComplexMatrix::zeros(dims[0], dims[1])
            } else {
                gen_rect(rng, dims[0], dims[1])
            };
            let c = if diagonal_only {
                ComplexMatrix::zeros(dims[1], dims[0])
            } else {
                gen_rect(rng, dims[1], dims[0])
            };
            let d = gen(rng, dims[1], kind_d);
            let blocks = vec![vec![a, b], vec![c, d]];
            let t = BlockOperator::assemble(blocks, DirectSumSpace::new(comps)?)?;
            check_two_by_two(&t, cfg, mode)
        }
        "offdiag_fg" => {
            let dim = 1 + rng.range(8);
            let spaces = DirectSumSpace::new(vec![
                sample_space_of_dim(rng, dim),
                sample_space_of_dim(rng, dim),
            ])?;
            let x = gen(rng, dim, OperatorKind::General);
            let y = gen(rng, dim, OperatorKind::General);
            let pair = sample_pair(rng);
            let r = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
            check_offdiag_fg(&x, &y, &pair, r, &spaces, cfg, mode)
        }
        "offdiag_power" => {
            let dim = 1 + rng.range(8);
            let spaces = DirectSumSpace::new(vec![
                sample_space_of_dim(rng, dim),
                sample_space_of_dim(rng, dim),
            ])?;
            let x = gen(rng, dim, OperatorKind::General);
            let y = gen(rng, dim, OperatorKind::General);
            let alpha = *rng.pick(&[0.0f64, 0.25, 0.5, 0.75, 1.0]);
            let r = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
            check_offdiag_power(&x, &y, alpha, r, &spaces, cfg, mode)
        }
        "product" => {
            let space = sample_space(rng, 16);
            let dim = space.dim();
            let exps = sample_exponents(rng);
            let pair = sample_pair(rng);
            let contraction = rng.range(3) == 0;
            let (a, b, variant) = if contraction {
                (
                    gen(rng, dim, OperatorKind::Contraction),
                    gen(rng, dim, OperatorKind::Contraction),
                    ProductVariant::Contraction,
                )
            } else {
                (
                    gen(rng, dim, OperatorKind::General),
                    gen(rng, dim, OperatorKind::General),
                    ProductVariant::Standard,
                )
            };
            let x = gen(rng, dim, OperatorKind::General);
            check_product(&a, &b, &x, &pair, &exps, &space, cfg, mode, variant)
        }
        "sums" => {
            let space = sample_space(rng, 16);
            let dim = space.dim();
            let n = 1 + rng.range(3);
            let exps = sample_exponents(rng);
            let pair = sample_pair(rng);
            let contraction = rng.range(3) == 0;
            let variant = if contraction {
                ProductVariant::Contraction
            } else {
                ProductVariant::Standard
            };
            let scale = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            let mut a_list = Vec::new();
            let mut b_list = Vec::new();
            let mut x_list = Vec::new();
            for _ in 0..n {
                if contraction {
                    // Unitary columns scaled by 1/sqrt(n) keep the Gram sums
                    // exactly at the identity.
                    a_list.push(gen(rng, dim, OperatorKind::Unitary).scale(scale));
                    b_list.push(gen(rng, dim, OperatorKind::Unitary).scale(scale));
                } else {
                    a_list.push(gen(rng, dim, OperatorKind::General));
                    b_list.push(gen(rng, dim, OperatorKind::General));
                }
                x_list.push(gen(rng, dim, OperatorKind::General));
            }
            check_sums(
                &a_list, &b_list, &x_list, &pair, &exps, &space, cfg, mode, variant,
            )
        }
        "euclid_offdiag" => {
            let dim = 1 + rng.range(8);
            let spaces = DirectSumSpace::new(vec![
                sample_space_of_dim(rng, dim),
                sample_space_of_dim(rng, dim),
            ])?;
            let n = 1 + rng.range(3);
            let xs: Vec<ComplexMatrix> = (0..n)
                .map(|_| gen(rng, dim, OperatorKind::General))
                .collect();
            let ys: Vec<ComplexMatrix> = (0..n)
                .map(|_| gen(rng, dim, OperatorKind::General))
                .collect();
            let pair = sample_pair(rng);
            let p = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
            check_euclid_offdiag(&xs, &ys, &pair, p, &spaces, cfg, mode)
        }
        "euclid_blocks" => {
            let comps: Vec<SpaceModel> = (0..2).map(|_| sample_space(rng, 8)).collect();
            let dims: Vec<usize> = comps.iter().map(|c| c.dim()).collect();
            let spaces = DirectSumSpace::new(comps)?;
            let n = 1 + rng.range(2);
            let ts: Vec<BlockOperator> = (0..n)
                .map(|_| {
                    let kind_a = sample_kind(rng);
                    let kind_d = sample_kind(rng);
                    let a = gen(rng, dims[0], kind_a);
                    let b = gen_rect(rng, dims[0], dims[1]);
                    let c = gen_rect(rng, dims[1], dims[0]);
                    let d = gen(rng, dims[1], kind_d);
                    BlockOperator::assemble(vec![vec![a, b], vec![c, d]], spaces.clone())
                })
                .collect::<Result<_>>()?;
            let p = *rng.pick(&[1.0f64, 1.5, 2.0, 3.0]);
            check_euclid_blocks(&ts, p, cfg, mode)
        }
        "embed_monotone" => {
            let space = sample_space(rng, 8);
            let pad = sample_space(rng, 8);
            let kind_x = sample_kind(rng);
            let x = gen(rng, space.dim(), kind_x);
            let kind_y = sample_kind(rng);
            let y = gen(rng, space.dim(), kind_y);
            check_embed_monotone(&x, &y, &space, &pad, cfg, mode)
        }
        other => Err(Error::UnknownChecker(other.into())),
    }
}

/// Known equality instances, used by the tightness sweep.
fn run_equality_instance(id: &str, seed: u64, mode: CheckMode) -> Result<CheckReport> {
    let mut rng = Rng64::from_parts(&[seed]);
    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let dim = 2 + rng.range(4);
    let id_mat = ComplexMatrix::identity(dim);
    let zero = ComplexMatrix::zeros(dim, dim);
    let hardy2 = DirectSumSpace::new(vec![SpaceModel::hardy(dim)?, SpaceModel::hardy(dim)?])?;
    let sqrt_pair = FGPair::power(0.5)?;
    let mut report = match id {
        "two_by_two" => {
            let t = BlockOperator::assemble(
                vec![vec![id_mat.clone(), zero.clone()], vec![zero, id_mat]],
                hardy2,
            )?;
            check_two_by_two(&t, &cfg, mode)
        }
        "offdiag_fg" | "offdiag_power" => {
            check_offdiag_fg(&id_mat, &id_mat, &sqrt_pair, 1.0, &hardy2, &cfg, mode)
        }
        "block_bound" => {
            let t = BlockOperator::assemble(
                vec![vec![id_mat.clone(), zero.clone()], vec![zero, id_mat]],
                hardy2,
            )?;
            check_block_bound(&t, &cfg, mode)
        }
        "mccarty" => {
            let t = ComplexMatrix::diag(
                &(0..dim)
                    .map(|k| Complex64::new(1.0 + k as f64, 0.0))
                    .collect::<Vec<_>>(),
            );
            let mut x = vec![Complex64::new(0.0, 0.0); dim];
            x[dim - 1] = Complex64::new(1.0, 0.0);
            check_mccarty(&t, &x, 3.0, mode)
        }
        "mixed_schwarz" => {
            let t = ComplexMatrix::new(
                2,
                2,
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(2.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            )?;
            let e1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
            let e2 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
            check_mixed_schwarz(&t, &e2, &e1, &sqrt_pair, mode)
        }
        "product" => {
            let space = SpaceModel::hardy(dim)?;
            let x = ComplexMatrix::diag(
                &(0..dim)
                    .map(|k| Complex64::new(1.0 + k as f64, 0.0))
                    .collect::<Vec<_>>(),
            );
            let exps = ExponentSet::new(1.0, 2.0, 2.0, 0.5)?;
            check_product(
                &id_mat,
                &id_mat,
                &x,
                &sqrt_pair,
                &exps,
                &space,
                &cfg,
                mode,
                ProductVariant::Standard,
            )
        }
        "sums" => {
            let space = SpaceModel::hardy(dim)?;
            let x = ComplexMatrix::diag(
                &(0..dim)
                    .map(|k| Complex64::new(1.0 + k as f64, 0.0))
                    .collect::<Vec<_>>(),
            );
            let half = id_mat.scale(Complex64::new(1.0 / 2f64.sqrt(), 0.0));
            let exps = ExponentSet::new(1.0, 2.0, 2.0, 0.5)?;
            check_sums(
                &[half.clone(), half.clone()],
                &[half.clone(), half],
                &[x.clone(), x],
                &sqrt_pair,
                &exps,
                &space,
                &cfg,
                mode,
                ProductVariant::Standard,
            )
        }
        "euclid_offdiag" => check_euclid_offdiag(
            &[id_mat.clone()],
            &[id_mat],
            &sqrt_pair,
            1.0,
            &hardy2,
            &cfg,
            mode,
        ),
        "euclid_blocks" => {
            let t = BlockOperator::assemble(
                vec![vec![id_mat.clone(), zero.clone()], vec![zero, id_mat]],
                hardy2,
            )?;
            check_euclid_blocks(&[t], 1.0, &cfg, mode)
        }
        "basic_order" => check_basic_order(&id_mat, &SpaceModel::hardy(dim)?, &cfg, mode),
        "embed_monotone" => check_embed_monotone(
            &id_mat,
            &id_mat,
            &SpaceModel::hardy(dim)?,
            &SpaceModel::hardy(dim)?,
            &cfg,
            mode,
        ),
        other => Err(Error::UnknownChecker(other.into())),
    }?;
    report.provenance.seed = Some(seed);
    Ok(report)
}

/// Per-checker slice of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckerResult {
    pub checker: String,
    pub pass_count: usize,
    pub fail_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<f64>,
    pub reports: Vec<CheckReport>,
}

/// Full suite outcome. Wall time is informational and excluded from the
/// serialized form so identical arguments serialize byte-identically.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub seed: u64,
    pub mode: CheckMode,
    pub n_per_checker: usize,
    pub total_pass: usize,
    pub total_fail: usize,
    pub results: Vec<CheckerResult>,
    #[serde(skip)]
    pub wall: Duration,
}

/// Executes each checker on `n` seeded instances, in instance-index order.
pub fn run_suite(
    checkers: &[String],
    n: usize,
    base_seed: u64,
    mode: CheckMode,
) -> Result<SuiteResult> {
    for id in checkers {
        if !known_checker(id) {
            return Err(Error::UnknownChecker(id.clone()));
        }
    }
    let started = Instant::now();
    let mut results = Vec::with_capacity(checkers.len());
    for id in checkers {
        let reports: Vec<CheckReport> = (0..n)
            .into_par_iter()
            .map(|i| run_instance(id, instance_seed(base_seed, id, i), mode))
            .collect::<Result<Vec<_>>>()?;
        let pass_count = reports.iter().filter(|r| r.pass).count();
        let worst_slack = reports.iter().map(|r| r.slack).min_by(f64::total_cmp);
        results.push(CheckerResult {
            checker: id.clone(),
            pass_count,
            fail_count: reports.len() - pass_count,
            worst_slack,
            reports,
        });
    }
    let total_pass = results.iter().map(|r| r.pass_count).sum();
    let total_fail = results.iter().map(|r| r.fail_count).sum();
    Ok(SuiteResult {
        seed: base_seed,
        mode,
        n_per_checker: n,
        total_pass,
        total_fail,
        results,
        wall: started.elapsed(),
    })
}

/// Which instance family a tightness sweep draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceFamily {
    Random,
    Equality,
}

/// Best lhs/rhs ratio found over a budget of seeded instances.
#[derive(Clone, Debug, Serialize)]
pub struct TightnessOutcome {
    pub checker: String,
    pub budget: usize,
    pub ratio: f64,
    /// Ratios beyond `1 + 1e-6` indicate a numerical violation.
    pub violation: bool,
    pub best: CheckReport,
}

/// Scans seeded instances for the one that comes closest to equality.
pub fn tightness_search(
    id: &str,
    budget: usize,
    base_seed: u64,
    family: InstanceFamily,
) -> Result<TightnessOutcome> {
    if !known_checker(id) {
        return Err(Error::UnknownChecker(id.into()));
    }
    if budget == 0 {
        return Err(Error::BadSpec("budget must be at least 1".into()));
    }
    let reports: Vec<CheckReport> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(base_seed, id, i);
            match family {
                InstanceFamily::Random => run_instance(id, seed, CheckMode::Tight),
                InstanceFamily::Equality => run_equality_instance(id, seed, CheckMode::Tight),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio_of = |r: &CheckReport| -> f64 {
        if r.rhs.abs() <= 1e-300 {
            if r.lhs.abs() <= 1e-300 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            r.lhs / r.rhs
        }
    };
    let best = reports
        .into_iter()
        .max_by(|a, b| ratio_of(a).total_cmp(&ratio_of(b)))
        .expect("budget >= 1");
    let ratio = ratio_of(&best);
    Ok(TightnessOutcome {
        checker: id.into(),
        budget,
        ratio,
        violation: ratio > 1.0 + 1e-6,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_operator_is_deterministic() {
        let spec = InstanceSpec::new(42, 6, OperatorKind::General);
        let a = gen_operator(&spec).unwrap();
        let b = gen_operator(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gen_operator_kind_contracts() {
        for seed in 0..20 {
            let spec = InstanceSpec::new(seed, 5, OperatorKind::Contraction);
            let m = gen_operator(&spec).unwrap();
            assert!(m.operator_norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn gen_operator_kind_positive() {
        for seed in 0..20 {
            let spec = InstanceSpec::new(seed, 5, OperatorKind::Positive);
            let m = gen_operator(&spec).unwrap();
            let min = m.herm_eig().unwrap().eigenvalues[0];
            assert!(min >= -1e-12, "min eigenvalue {min}");
        }
    }

    #[test]
    fn gen_operator_kind_hermitian_bit_exact() {
        let spec = InstanceSpec::new(7, 8, OperatorKind::Hermitian);
        let m = gen_operator(&spec).unwrap();
        assert_eq!((&m - &m.adjoint()).frobenius_norm(), 0.0);
    }

    #[test]
    fn gen_operator_kind_unitary() {
        let spec = InstanceSpec::new(9, 6, OperatorKind::Unitary);
        let m = gen_operator(&spec).unwrap();
        let gram = &m.adjoint() * &m;
        let dev = (&gram - &ComplexMatrix::identity(6)).frobenius_norm();
        assert!(dev <= 1e-12, "unitarity deviation {dev}");
    }

    #[test]
    fn gen_operator_rejects_bad_dims() {
        assert!(gen_operator(&InstanceSpec::new(1, 0, OperatorKind::General)).is_err());
        assert!(gen_operator(&InstanceSpec::new(1, 65, OperatorKind::General)).is_err());
    }

    #[test]
    fn run_suite_empty_checker_list() {
        let result = run_suite(&[], 5, 1, CheckMode::Certified).unwrap();
        assert_eq!(result.total_pass, 0);
        assert_eq!(result.total_fail, 0);
        assert!(result.results.is_empty());
    }

    #[test]
    fn run_suite_rejects_unknown_checker() {
        let err = run_suite(&["nope".into()], 1, 1, CheckMode::Certified);
        assert!(matches!(err, Err(Error::UnknownChecker(_))));
    }

    #[test]
    fn run_suite_single_instance_reproducible() {
        let ids = vec!["mccarty".to_string()];
        let a = run_suite(&ids, 1, 99, CheckMode::Certified).unwrap();
        let b = run_suite(&ids, 1, 99, CheckMode::Certified).unwrap();
        assert_eq!(
            a.results[0].reports[0].slack.to_bits(),
            b.results[0].reports[0].slack.to_bits()
        );
        assert_eq!(a.total_pass, 1);
    }

    #[test]
    fn suite_serialization_is_deterministic() {
        let ids: Vec<String> = vec!["mccarty".into(), "mixed_schwarz".into()];
        let a = run_suite(&ids, 4, 5, CheckMode::Certified).unwrap();
        let b = run_suite(&ids, 4, 5, CheckMode::Certified).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn every_checker_id_runs_in_both_modes() {
        for id in ALL_CHECKERS {
            for mode in [CheckMode::Certified, CheckMode::Tight] {
                let report = run_instance(id, 321, mode).unwrap();
                assert_eq!(report.checker, id);
                assert!(report.pass, "{id} in {mode:?}: slack {}", report.slack);
                assert_eq!(report.provenance.seed, Some(321));
            }
        }
    }

    #[test]
    fn tightness_equality_families_reach_one() {
        for id in ["two_by_two", "offdiag_fg"] {
            let out = tightness_search(id, 3, 11, InstanceFamily::Equality).unwrap();
            assert!((out.ratio - 1.0).abs() <= 1e-6, "{id} ratio {}", out.ratio);
            assert!(!out.violation);
        }
    }

    #[test]
    fn tightness_random_family_stays_below_one() {
        let out = tightness_search("block_bound", 6, 3, InstanceFamily::Random).unwrap();
        assert!(out.ratio <= 1.0 + 1e-6, "ratio {}", out.ratio);
        assert!(!out.violation);
    }

    #[test]
    fn tightness_rejects_bad_args() {
        assert!(matches!(
            tightness_search("nope", 5, 1, InstanceFamily::Random),
            Err(Error::UnknownChecker(_))
        ));
        assert!(tightness_search("mccarty", 0, 1, InstanceFamily::Random).is_err());
    }
}
