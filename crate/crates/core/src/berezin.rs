//! Berezin symbols and the supremum searches behind the Berezin number, the
//! Berezin set, and the generalized Euclidean Berezin number.
//!
//! The supremum over a disk domain is realized in two stages: a polar grid
//! scan, then cyclic coordinate golden-section refinement around the
//! incumbent. Finite point sets are enumerated exhaustively. Every reported
//! value is a lower estimate of the true supremum; the search never loses an
//! incumbent, so refinement can only improve on the grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::{inner, ComplexMatrix};
use crate::error::{Error, Result};
use crate::rkhs::{DirectSumSpace, DomainPoint, SpaceModel};

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;
/// Cyclic passes of coordinate refinement after the grid stage.
const REFINE_PASSES: usize = 2;

/// Budget knobs for the two-stage supremum search.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Radial grid count per disk component.
    pub radial: usize,
    /// Angular grid count per disk component.
    pub angular: usize,
    /// Golden-section shrink iterations per coordinate line search.
    pub refine: usize,
    /// Seeded multi-starts on product domains.
    pub multistart: usize,
    /// Width goal for the golden-section bracket.
    pub tol: f64,
    /// Seed for the multi-start stream, recorded in every estimate.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 128,
            refine: 40,
            multistart: 16,
            tol: 1e-6,
            seed: 0xBE12E5,
        }
    }
}

impl SearchConfig {
    /// A larger budget for right-hand sides kept as search estimates.
    pub fn boosted(&self) -> Self {
        Self {
            radial: self.radial * 2,
            angular: self.angular * 2,
            refine: self.refine + 20,
            multistart: self.multistart * 2,
            ..*self
        }
    }
}

/// Outcome of a supremum search. The value is a lower estimate of the true
/// supremum and equals the objective at `argmax` exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BerezinEstimate {
    pub value: f64,
    pub argmax: Vec<DomainPoint>,
    /// Always "lower-estimate": grid-plus-refinement cannot overshoot.
    pub mode: String,
    pub seed: u64,
}

/// A search domain: either one space or a direct sum searched over the
/// product of the component domains.
#[derive(Clone, Copy, Debug)]
pub enum KernelSpace<'a> {
    Single(&'a SpaceModel),
    Sum(&'a DirectSumSpace),
}

impl<'a> KernelSpace<'a> {
    pub fn components(&self) -> &'a [SpaceModel] {
        match self {
            KernelSpace::Single(s) => std::slice::from_ref(*s),
            KernelSpace::Sum(s) => s.components(),
        }
    }

    pub fn total_dim(&self) -> usize {
        match self {
            KernelSpace::Single(s) => s.dim(),
            KernelSpace::Sum(s) => s.total_dim(),
        }
    }

    /// Unit kernel direction at a tuple of domain points (one per component).
    pub fn normalized_at(&self, points: &[DomainPoint]) -> Result<Vec<Complex64>> {
        match self {
            KernelSpace::Single(s) => {
                if points.len() != 1 {
                    return Err(Error::ArityMismatch(format!(
                        "{} points for a single space",
                        points.len()
                    )));
                }
                s.normalized_kernel(&points[0])
            }
            KernelSpace::Sum(s) => s.direct_sum_kernel(points),
        }
    }
}

impl<'a> From<&'a SpaceModel> for KernelSpace<'a> {
    fn from(s: &'a SpaceModel) -> Self {
        KernelSpace::Single(s)
    }
}

impl<'a> From<&'a DirectSumSpace> for KernelSpace<'a> {
    fn from(s: &'a DirectSumSpace) -> Self {
        KernelSpace::Sum(s)
    }
}

fn check_dim(op: &ComplexMatrix, space: &KernelSpace<'_>) -> Result<()> {
    if !op.is_square() || op.rows() != space.total_dim() {
        return Err(Error::DimMismatch {
            op: op.rows(),
            space: space.total_dim(),
        });
    }
    Ok(())
}

/// Berezin symbol at a point tuple: `<A k, k>` with the unit kernel `k`.
pub fn berezin_symbol<'a>(
    op: &ComplexMatrix,
    space: impl Into<KernelSpace<'a>>,
    points: &[DomainPoint],
) -> Result<Complex64> {
    let space = space.into();
    check_dim(op, &space)?;
    let k = space.normalized_at(points)?;
    Ok(inner(&op.mul_vec(&k), &k))
}

/// Berezin number: `sup |<A k, k>|` over the domain, as a lower estimate.
pub fn berezin_number<'a>(
    op: &ComplexMatrix,
    space: impl Into<KernelSpace<'a>>,
    cfg: &SearchConfig,
) -> Result<BerezinEstimate> {
    let space = space.into();
    check_dim(op, &space)?;
    let objective = |k: &[Complex64]| inner(&op.mul_vec(k), k).norm();
    Ok(supremum_search(&space, cfg, &objective))
}

/// Berezin symbol values on a coarse domain sample of roughly `grid` points.
pub fn berezin_set_sample<'a>(
    op: &ComplexMatrix,
    space: impl Into<KernelSpace<'a>>,
    grid: usize,
) -> Result<Vec<Complex64>> {
    let space = space.into();
    check_dim(op, &space)?;
    let m = space.components().len();
    // Split the total budget into roughly `grid` product points.
    let per_budget = per_component(grid.max(8), m);
    let radial = ((per_budget as f64 / 2.0).sqrt().round() as usize).max(2);
    let angular = (per_budget / radial).max(4);
    let grids: Vec<ComponentGrid> = space
        .components()
        .iter()
        .map(|c| ComponentGrid::build(c, radial, angular))
        .collect();
    let mut out = Vec::new();
    for_each_tuple(&grids, &mut |points| {
        let k = space
            .normalized_at(points)
            .expect("grid points are in-domain");
        out.push(inner(&op.mul_vec(&k), &k));
    });
    Ok(out)
}

/// Generalized Euclidean Berezin number:
/// `sup (sum_i |<T_i k, k>|^p)^(1/p)` over the domain, as a lower estimate.
pub fn euclid_berezin_number<'a>(
    ops: &[ComplexMatrix],
    p: f64,
    space: impl Into<KernelSpace<'a>>,
    cfg: &SearchConfig,
) -> Result<BerezinEstimate> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent(format!("p = {p} must be at least 1")));
    }
    if ops.is_empty() {
        return Err(Error::ArityMismatch("need at least one operator".into()));
    }
    let space = space.into();
    for op in ops {
        check_dim(op, &space)?;
    }
    let objective = |k: &[Complex64]| {
        ops.iter()
            .map(|op| inner(&op.mul_vec(k), k).norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    };
    Ok(supremum_search(&space, cfg, &objective))
}

/// Rank-one projection `e_k e_k*` in the orthonormal basis.
pub fn basis_projection(dim: usize, k: usize) -> ComplexMatrix {
    assert!(k < dim);
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == k && j == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

// --- search internals ---------------------------------------------------

/// Candidate coordinates for one component in stage one.
enum ComponentGrid {
    Disk { radii: Vec<f64>, angles: Vec<f64> },
    Finite { count: usize },
}

impl ComponentGrid {
    fn build(space: &SpaceModel, radial: usize, angular: usize) -> Self {
        match space {
            SpaceModel::FiniteSet { features, .. } => ComponentGrid::Finite {
                count: features.len(),
            },
            _ => {
                let radial = radial.max(2);
                let angular = angular.max(1);
                let radii = (0..radial)
                    .map(|i| i as f64 / (radial - 1) as f64)
                    .collect();
                let angles = (0..angular)
                    .map(|j| 2.0 * std::f64::consts::PI * j as f64 / angular as f64)
                    .collect();
                ComponentGrid::Disk { radii, angles }
            }
        }
    }

    fn cell_count(&self) -> usize {
        match self {
            ComponentGrid::Disk { radii, angles } => radii.len() * angles.len(),
            ComponentGrid::Finite { count } => *count,
        }
    }

    fn point(&self, idx: usize) -> DomainPoint {
        match self {
            ComponentGrid::Disk { radii, angles } => {
                let r = radii[idx / angles.len()];
                let a = angles[idx % angles.len()];
                DomainPoint::disk(Complex64::from_polar(r, a))
            }
            ComponentGrid::Finite { .. } => DomainPoint::index(idx),
        }
    }
}

fn per_component(budget: usize, m: usize) -> usize {
    if m <= 1 {
        budget
    } else {
        (budget.max(1) as f64).powf(1.0 / m as f64).ceil() as usize
    }
}

/// Odometer over the product of component grids.
fn for_each_tuple(grids: &[ComponentGrid], f: &mut impl FnMut(&[DomainPoint])) {
    let counts: Vec<usize> = grids.iter().map(ComponentGrid::cell_count).collect();
    let mut idx = vec![0usize; grids.len()];
    let mut points: Vec<DomainPoint> = grids.iter().map(|g| g.point(0)).collect();
    loop {
        f(&points);
        let mut k = grids.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < counts[k] {
                points[k] = grids[k].point(idx[k]);
                break;
            }
            idx[k] = 0;
            points[k] = grids[k].point(0);
        }
    }
}

struct Incumbent {
    value: f64,
    points: Vec<DomainPoint>,
}

impl Incumbent {
    /// Strict improvement only, so the first argmax in scan order wins ties.
    fn offer(&mut self, value: f64, points: &[DomainPoint]) {
        if value > self.value {
            self.value = value;
            self.points = points.to_vec();
        }
    }
}

fn supremum_search(
    space: &KernelSpace<'_>,
    cfg: &SearchConfig,
    objective: &dyn Fn(&[Complex64]) -> f64,
) -> BerezinEstimate {
    let components = space.components();
    let m = components.len();
    let radial = per_component(cfg.radial.max(2), m).max(4);
    let angular = per_component(cfg.angular.max(1), m).max(8);
    let grids: Vec<ComponentGrid> = components
        .iter()
        .map(|c| ComponentGrid::build(c, radial, angular))
        .collect();

    let eval = |points: &[DomainPoint]| -> f64 {
        let k = space
            .normalized_at(points)
            .expect("search points stay in-domain");
        objective(&k)
    };

    // Stage 1: exhaustive scan of the product grid.
    let mut best = Incumbent {
        value: f64::NEG_INFINITY,
        points: Vec::new(),
    };
    for_each_tuple(&grids, &mut |points| {
        best.offer(eval(points), points);
    });

    // Stage 2: cyclic coordinate golden-section around the incumbent.
    let delta_r = 1.0 / (radial - 1) as f64;
    let delta_a = 2.0 * std::f64::consts::PI / angular as f64;
    refine_tuple(components, &eval, &mut best, cfg, delta_r, delta_a);

    // Multi-starts fight the coarsened grid on product domains.
    if m >= 2 && cfg.multistart > 0 {
        let mut state = cfg.seed;
        for _ in 0..cfg.multistart {
            let start: Vec<DomainPoint> = components
                .iter()
                .map(|c| random_point(c, &mut state))
                .collect();
            let mut candidate = Incumbent {
                value: eval(&start),
                points: start,
            };
            refine_tuple(components, &eval, &mut candidate, cfg, delta_r, delta_a);
            best.offer(candidate.value, &candidate.points);
        }
    }

    BerezinEstimate {
        value: best.value,
        argmax: best.points,
        mode: "lower-estimate".into(),
        seed: cfg.seed,
    }
}

fn random_point(space: &SpaceModel, state: &mut u64) -> DomainPoint {
    match space {
        SpaceModel::FiniteSet { features, .. } => {
            DomainPoint::index((splitmix64(state) % features.len() as u64) as usize)
        }
        _ => {
            let r = unit_f64(splitmix64(state));
            let a = 2.0 * std::f64::consts::PI * unit_f64(splitmix64(state));
            DomainPoint::disk(Complex64::from_polar(r, a))
        }
    }
}

fn refine_tuple(
    components: &[SpaceModel],
    eval: &dyn Fn(&[DomainPoint]) -> f64,
    best: &mut Incumbent,
    cfg: &SearchConfig,
    delta_r: f64,
    delta_a: f64,
) {
    for _pass in 0..REFINE_PASSES {
        for (ci, comp) in components.iter().enumerate() {
            match comp {
                SpaceModel::FiniteSet { features, .. } => {
                    // Exact coordinate step: try every point of this component.
                    let snapshot = best.points.clone();
                    for idx in 0..features.len() {
                        let mut pts = snapshot.clone();
                        pts[ci] = DomainPoint::index(idx);
                        best.offer(eval(&pts), &pts);
                    }
                }
                _ => {
                    let z = best.points[ci].as_complex().expect("disk component");
                    let (r0, a0) = (z.norm(), z.arg());
                    golden_line(
                        best,
                        cfg,
                        |x, inc| {
                            let mut pts = inc.to_vec();
                            pts[ci] =
                                DomainPoint::disk(Complex64::from_polar(x.clamp(0.0, 1.0), a0));
                            let v = eval(&pts);
                            (pts, v)
                        },
                        (r0 - delta_r).max(0.0),
                        (r0 + delta_r).min(1.0),
                    );
                    let z = best.points[ci].as_complex().expect("disk component");
                    let (r1, a1) = (z.norm(), z.arg());
                    golden_line(
                        best,
                        cfg,
                        |x, inc| {
                            let mut pts = inc.to_vec();
                            pts[ci] = DomainPoint::disk(Complex64::from_polar(r1, x));
                            let v = eval(&pts);
                            (pts, v)
                        },
                        a1 - delta_a,
                        a1 + delta_a,
                    );
                }
            }
        }
    }
}

/// Golden-section line search that maximizes along one coordinate. Every
/// evaluated point is offered to the incumbent, so the result can never be
/// worse than what the grid already found.
fn golden_line(
    best: &mut Incumbent,
    cfg: &SearchConfig,
    probe: impl Fn(f64, &[DomainPoint]) -> (Vec<DomainPoint>, f64),
    mut lo: f64,
    mut hi: f64,
) {
    if hi <= lo {
        return;
    }
    let base = best.points.clone();
    let offer = |x: f64, best: &mut Incumbent| -> f64 {
        let (pts, v) = probe(x, &base);
        best.offer(v, &pts);
        v
    };
    let mut x1 = hi - GOLDEN_INV * (hi - lo);
    let mut x2 = lo + GOLDEN_INV * (hi - lo);
    let mut f1 = offer(x1, best);
    let mut f2 = offer(x2, best);
    for _ in 0..cfg.refine {
        if hi - lo < cfg.tol * 1e-3 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN_INV * (hi - lo);
            f2 = offer(x2, best);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN_INV * (hi - lo);
            f1 = offer(x1, best);
        }
    }
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}
