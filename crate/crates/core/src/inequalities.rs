//! One checker per Berezin-number inequality. Every checker evaluates both
//! sides of its bound on a concrete instance and returns a [`CheckReport`].
//!
//! Search estimates of Berezin numbers are lower bounds, which is sound on a
//! left-hand side but not on a right-hand side. In certified mode every
//! right-hand-side Berezin number is therefore replaced by the operator norm
//! (never smaller), so a certified check cannot fail through an undershot
//! search; tight mode keeps the estimates, runs them on a larger budget, and
//! widens the tolerance.

use std::sync::Arc;

use num_complex::Complex64;

use crate::berezin::{berezin_number, berezin_set_sample, euclid_berezin_number, SearchConfig};
use crate::cmatrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::opmatrix::{BlockOperator, CompressMode};
use crate::radii::numerical_radius;
use crate::report::{CheckMode, CheckReport, Provenance, SubCheck};
use crate::rkhs::{DirectSumSpace, DomainPoint, SpaceModel};

/// Exact-arithmetic checks (no search on either side).
const TOL_EXACT: f64 = 1e-9;
/// Sound search arrangements: estimates only strengthen the inequality.
const TOL_SOUND: f64 = 1e-7;
/// Search estimates embedded on the right-hand side (tight mode only).
const TOL_TIGHT_RHS: f64 = 1e-5;
/// The numerical-radius/spectral-radius identity behind the 2x2 bound.
const TOL_HORN: f64 = 1e-6;
/// Eigenvalues below this are snapped to zero before fractional powers.
const POWER_SNAP: f64 = 1e-14;
/// Spectral values are saturated here after a power is applied. Conjugate
/// exponents near 1 drive `r p / 2` into the hundreds, where the true
/// right-hand side leaves f64 range entirely; capping keeps every report
/// finite and still dwarfs any desk-scale left-hand side, so the check
/// stays sound. The fourth power of the cap must stay below f64::MAX for
/// the Gram-based norm downstream.
const POWER_CAP: f64 = 1e60;
/// Slack admitted on contraction hypotheses.
const CONTRACTION_TOL: f64 = 1e-9;

/// A pair of nonnegative scalar functions with `f(t) g(t) = t`, validated on
/// a log-spaced grid at construction.
#[derive(Clone)]
pub struct FGPair {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
}

impl std::fmt::Debug for FGPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FGPair({})", self.label)
    }
}

impl FGPair {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        let pair = Self {
            f: Arc::new(f),
            g: Arc::new(g),
            label,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// The canonical family `f = t^alpha`, `g = t^(1-alpha)`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::BadExponent(format!(
                "alpha = {alpha} outside [0, 1]"
            )));
        }
        Self::new(
            move |t: f64| t.powf(alpha),
            move |t: f64| t.powf(1.0 - alpha),
            format!("power:{alpha}"),
        )
    }

    pub fn f(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn g(&self, t: f64) -> f64 {
        (self.g)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn validate(&self) -> Result<()> {
        let fail = |reason: String| Error::InvalidPair {
            label: self.label.clone(),
            reason,
        };
        let mut grid = vec![0.0f64];
        let lo: f64 = 1e-6;
        let hi: f64 = 1e3;
        let ratio = (hi / lo).powf(1.0 / 62.0);
        let mut t = lo;
        for _ in 0..63 {
            grid.push(t);
            t *= ratio;
        }
        for &t in &grid {
            let ft = self.f(t);
            let gt = self.g(t);
            if !ft.is_finite() || !gt.is_finite() {
                return Err(fail(format!("non-finite value at t = {t}")));
            }
            if ft < 0.0 || gt < 0.0 {
                return Err(fail(format!("negative value at t = {t}")));
            }
            if (ft * gt - t).abs() > 1e-9 * t.max(1.0) {
                return Err(fail(format!("f(t) g(t) != t at t = {t}")));
            }
        }
        Ok(())
    }
}

/// Validated exponent tuple for the product-form bounds: `r >= 1`, conjugate
/// `(p, q)`, `p r >= q r >= 2`, and a power-family `alpha` in `[0, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct ExponentSet {
    pub r: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl ExponentSet {
    pub fn new(r: f64, p: f64, q: f64, alpha: f64) -> Result<Self> {
        if !r.is_finite() || r < 1.0 {
            return Err(Error::BadExponent(format!("r = {r} must be at least 1")));
        }
        if !p.is_finite()
            || !q.is_finite()
            || p <= 1.0
            || q <= 1.0
            || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12
        {
            return Err(Error::BadExponent(format!(
                "(p, q) = ({p}, {q}) are not conjugate"
            )));
        }
        if q * r < 2.0 - 1e-12 || p < q - 1e-12 {
            return Err(Error::BadExponent(format!(
                "need p r >= q r >= 2, got p = {p}, q = {q}, r = {r}"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::BadExponent(format!(
                "alpha = {alpha} outside [0, 1]"
            )));
        }
        Ok(Self { r, p, q, alpha })
    }

    /// Builds the conjugate exponent from `q` alone.
    pub fn conjugate(r: f64, q: f64, alpha: f64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::BadExponent(format!("q = {q} must exceed 1")));
        }
        Self::new(r, q / (q - 1.0), q, alpha)
    }

    fn provenance(&self) -> Provenance {
        Provenance {
            r: Some(self.r),
            p: Some(self.p),
            q: Some(self.q),
            alpha: Some(self.alpha),
            ..Provenance::default()
        }
    }
}

/// Whether the product-form checks use the plain bound or the contraction
/// refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductVariant {
    Standard,
    Contraction,
}

fn tol_for(mode: CheckMode, certified: f64, tight: f64) -> f64 {
    match mode {
        CheckMode::Certified => certified,
        CheckMode::Tight => tight,
    }
}

/// Right-hand-side value of a Berezin number: search estimate in tight mode
/// (with a boosted budget), operator norm in certified mode.
fn rhs_ber(
    m: &ComplexMatrix,
    space: &SpaceModel,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<f64> {
    match mode {
        CheckMode::Certified => Ok(m.operator_norm()),
        CheckMode::Tight => Ok(berezin_number(m, space, &cfg.boosted())?.value),
    }
}

/// Functional calculus `h(|X|)` with tiny eigenvalues snapped to zero so
/// fractional exponents cannot amplify roundoff, and huge values saturated.
fn calculus(x: &ComplexMatrix, h: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    x.abs_op()?
        .apply_fn(|lam| if lam < POWER_SNAP { h(0.0) } else { h(lam) }.min(POWER_CAP))
}

/// PSD fractional power with the same snapping and saturation.
fn psd_power(m: &ComplexMatrix, e: f64) -> Result<ComplexMatrix> {
    m.apply_fn(|lam| {
        if lam < POWER_SNAP {
            0.0
        } else {
            lam.powf(e).min(POWER_CAP)
        }
    })
}

fn real_form(m: &ComplexMatrix, v: &[Complex64]) -> f64 {
    inner(&m.mul_vec(v), v).re
}

// --- checkers ------------------------------------------------------------

/// `<T x, x>^r <= <T^r x, x>` for PSD `T`, `||x|| <= 1`, `r >= 1`.
pub fn check_mccarty(
    t: &ComplexMatrix,
    x: &[Complex64],
    r: f64,
    mode: CheckMode,
) -> Result<CheckReport> {
    if !r.is_finite() || r < 1.0 {
        return Err(Error::BadExponent(format!("r = {r} must be at least 1")));
    }
    if vec_norm(x) > 1.0 + 1e-12 {
        return Err(Error::BadSpec("vector must lie in the unit ball".into()));
    }
    let eig = t.herm_eig()?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -1e-10 {
        return Err(Error::NegativeSpectrum(min));
    }
    let lhs = real_form(t, x).max(0.0).powf(r);
    let t_r = t.apply_fn(|lam| lam.powf(r))?;
    let rhs = real_form(&t_r, x);
    Ok(CheckReport::single(
        "mccarty",
        lhs,
        rhs,
        TOL_EXACT,
        mode,
        Provenance {
            dims: vec![t.rows()],
            r: Some(r),
            ..Provenance::default()
        },
    ))
}

/// `|<T x, y>|^2 <= <f^2(|T|) x, x> <g^2(|T*|) y, y>`.
pub fn check_mixed_schwarz(
    t: &ComplexMatrix,
    x: &[Complex64],
    y: &[Complex64],
    pair: &FGPair,
    mode: CheckMode,
) -> Result<CheckReport> {
    if x.len() != t.cols() || y.len() != t.rows() {
        return Err(Error::DimMismatch {
            op: t.rows(),
            space: x.len(),
        });
    }
    let lhs = inner(&t.mul_vec(x), y).norm_sqr();
    let f2 = calculus(t, |lam| pair.f(lam).powi(2))?;
    let g2 = calculus(&t.adjoint(), |lam| pair.g(lam).powi(2))?;
    let rhs = real_form(&f2, x).max(0.0) * real_form(&g2, y).max(0.0);
    Ok(CheckReport::single(
        "mixed_schwarz",
        lhs,
        rhs,
        TOL_EXACT,
        mode,
        Provenance {
            dims: vec![t.rows()],
            pair: Some(pair.label().into()),
            ..Provenance::default()
        },
    ))
}

/// Berezin number of a block operator against the numerical radius of its
/// scalar compression.
pub fn check_block_bound(
    t: &BlockOperator,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    let lhs = berezin_number(t.flat(), t.spaces(), cfg)?.value;
    let compression = match mode {
        CheckMode::Certified => t.compress(CompressMode::HouNorm, cfg)?,
        CheckMode::Tight => t.compress(CompressMode::BerDiag, &cfg.boosted())?,
    };
    let rhs = numerical_radius(&compression, 360, 40)?.value;
    Ok(CheckReport::single(
        "block_bound",
        lhs,
        rhs,
        tol_for(mode, 1e-9, TOL_SOUND),
        mode,
        Provenance {
            dims: t.spaces().components().iter().map(|c| c.dim()).collect(),
            space: Some(t.spaces().descriptor()),
            ..Provenance::default()
        },
    ))
}

/// Spectral radius of a real symmetric 2x2, by the closed form.
fn sym2_radius(a: f64, b: f64, d: f64) -> f64 {
    let mid = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    (mid + rad).abs().max((mid - rad).abs())
}

/// The 2x2 closed-form bound, the diagonal max rule, and the
/// numerical-radius identity the closed form rests on.
pub fn check_two_by_two(
    t: &BlockOperator,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    if t.block_count() != 2 {
        return Err(Error::ShapeMismatch("expected a 2x2 block operator".into()));
    }
    let comps = t.spaces().components();
    let rhs_cfg = cfg.boosted();
    let diag_val = |block: &ComplexMatrix, space: &SpaceModel| -> Result<f64> {
        rhs_ber(block, space, &rhs_cfg, mode)
    };
    let a_val = diag_val(t.block(0, 0), &comps[0])?;
    let d_val = diag_val(t.block(1, 1), &comps[1])?;
    let b_norm = t.block(0, 1).operator_norm();
    let c_norm = t.block(1, 0).operator_norm();

    let lhs = berezin_number(t.flat(), t.spaces(), cfg)?.value;
    let rhs =
        0.5 * (a_val + d_val) + 0.5 * ((a_val - d_val).powi(2) + (b_norm + c_norm).powi(2)).sqrt();
    let tol = tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS);

    let mut parts = vec![SubCheck::new("closed_form", lhs, rhs, tol)];
    if t.block(0, 1).max_abs() == 0.0 && t.block(1, 0).max_abs() == 0.0 {
        parts.push(SubCheck::new("max_rule", lhs, a_val.max(d_val), tol));
    }
    // Identity behind the closed form: the numerical radius of the scalar
    // compression equals half the spectral radius of its symmetrization.
    let m = ComplexMatrix::from_real(2, 2, &[a_val, b_norm, c_norm, d_val])?;
    let w_m = numerical_radius(&m, 360, 40)?.value;
    let half_r = 0.5 * sym2_radius(2.0 * a_val, b_norm + c_norm, 2.0 * d_val);
    parts.push(SubCheck::new(
        "radius_identity",
        (w_m - half_r).abs(),
        0.0,
        TOL_HORN,
    ));

    Ok(CheckReport::from_parts(
        "two_by_two",
        parts,
        tol,
        mode,
        Provenance {
            dims: comps.iter().map(|c| c.dim()).collect(),
            space: Some(t.spaces().descriptor()),
            ..Provenance::default()
        },
    ))
}

/// Shared core of the off-diagonal f,g bound, reused verbatim by the
/// power-family checker.
#[allow(clippy::too_many_arguments)]
fn offdiag_fg_core(
    checker: &str,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    pair: &FGPair,
    r: f64,
    spaces: &DirectSumSpace,
    cfg: &SearchConfig,
    mode: CheckMode,
    alpha: Option<f64>,
) -> Result<CheckReport> {
    if !r.is_finite() || r < 1.0 {
        return Err(Error::BadExponent(format!("r = {r} must be at least 1")));
    }
    let comps = spaces.components();
    if comps.len() != 2 {
        return Err(Error::ShapeMismatch(
            "off-diagonal form needs two components".into(),
        ));
    }
    let t = BlockOperator::off_diag(x.clone(), y.clone(), spaces.clone())?;
    let lhs = berezin_number(t.flat(), spaces, cfg)?.value.powf(r);

    let e = 2.0 * r;
    let first = &calculus(x, |lam| pair.f(lam).powf(e))?
        + &calculus(&y.adjoint(), |lam| pair.g(lam).powf(e))?;
    let second = &calculus(y, |lam| pair.f(lam).powf(e))?
        + &calculus(&x.adjoint(), |lam| pair.g(lam).powf(e))?;
    // `first` acts on the second summand, `second` on the first.
    let rhs_cfg = cfg.boosted();
    let v1 = rhs_ber(&first, &comps[1], &rhs_cfg, mode)?.max(0.0);
    let v2 = rhs_ber(&second, &comps[0], &rhs_cfg, mode)?.max(0.0);
    let rhs = 2f64.powf(r - 2.0) * v1.sqrt() * v2.sqrt();

    Ok(CheckReport::single(
        checker,
        lhs,
        rhs,
        tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS),
        mode,
        Provenance {
            dims: comps.iter().map(|c| c.dim()).collect(),
            space: Some(spaces.descriptor()),
            r: Some(r),
            alpha,
            pair: Some(pair.label().into()),
            ..Provenance::default()
        },
    ))
}

/// Off-diagonal bound through an arbitrary valid f,g pair.
pub fn check_offdiag_fg(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    pair: &FGPair,
    r: f64,
    spaces: &DirectSumSpace,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    offdiag_fg_core("offdiag_fg", x, y, pair, r, spaces, cfg, mode, None)
}

/// Power-family instantiation of the off-diagonal bound.
pub fn check_offdiag_power(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    alpha: f64,
    r: f64,
    spaces: &DirectSumSpace,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    let pair = FGPair::power(alpha)?;
    offdiag_fg_core(
        "offdiag_power",
        x,
        y,
        &pair,
        r,
        spaces,
        cfg,
        mode,
        Some(alpha),
    )
}

/// `ber^r(A* X B)` against the Young-split functional-calculus bound, with
/// the sharper form available under contraction hypotheses.
#[allow(clippy::too_many_arguments)]
pub fn check_product(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    pair: &FGPair,
    exps: &ExponentSet,
    space: &SpaceModel,
    cfg: &SearchConfig,
    mode: CheckMode,
    variant: ProductVariant,
) -> Result<CheckReport> {
    let n = space.dim();
    for m in [a, b, x] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimMismatch {
                op: m.rows(),
                space: n,
            });
        }
    }
    let combo = product_rhs_matrix(&[(a.clone(), b.clone(), x.clone())], pair, exps, variant)?;
    let product = &(&a.adjoint() * x) * b;
    let lhs = berezin_number(&product, space, cfg)?.value.powf(exps.r);
    let rhs = rhs_ber(&combo, space, &cfg.boosted(), mode)?;
    let pair_label = match variant {
        ProductVariant::Standard => pair.label().to_string(),
        ProductVariant::Contraction => format!("{}+contraction", pair.label()),
    };
    Ok(CheckReport::single(
        "product",
        lhs,
        rhs,
        tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS),
        mode,
        Provenance {
            dims: vec![n],
            space: Some(space.descriptor()),
            pair: Some(pair_label),
            ..exps.provenance()
        },
    ))
}

/// Builds the PSD right-hand-side matrix shared by the product and sums
/// bounds; `terms` holds `(A_i, B_i, X_i)` triples.
fn product_rhs_matrix(
    terms: &[(ComplexMatrix, ComplexMatrix, ComplexMatrix)],
    pair: &FGPair,
    exps: &ExponentSet,
    variant: ProductVariant,
) -> Result<ComplexMatrix> {
    let n = terms[0].0.rows();
    let (r, p, q) = (exps.r, exps.p, exps.q);
    let congruence = |m: &ComplexMatrix, s: &ComplexMatrix| &(&s.adjoint() * m) * s;
    match variant {
        ProductVariant::Standard => {
            let mut sum_b = ComplexMatrix::zeros(n, n);
            let mut sum_a = ComplexMatrix::zeros(n, n);
            for (a, b, x) in terms {
                let f2 = calculus(x, |lam| pair.f(lam).powi(2))?;
                let g2 = calculus(&x.adjoint(), |lam| pair.g(lam).powi(2))?;
                sum_b = &sum_b + &congruence(&f2, b);
                sum_a = &sum_a + &congruence(&g2, a);
            }
            let left = psd_power(&sum_b, r * p / 2.0)?.scale(Complex64::new(1.0 / p, 0.0));
            let right = psd_power(&sum_a, r * q / 2.0)?.scale(Complex64::new(1.0 / q, 0.0));
            Ok(&left + &right)
        }
        ProductVariant::Contraction => {
            let id = ComplexMatrix::identity(n);
            let mut gram_a = ComplexMatrix::zeros(n, n);
            let mut gram_b = ComplexMatrix::zeros(n, n);
            for (a, b, _) in terms {
                gram_a = &gram_a + &(&a.adjoint() * a);
                gram_b = &gram_b + &(&b.adjoint() * b);
            }
            for (gram, name) in [(&gram_a, "A"), (&gram_b, "B")] {
                let min = (&id - gram).herm_eig()?.eigenvalues[0];
                if min < -CONTRACTION_TOL {
                    return Err(Error::ContractionRequired(format!(
                        "sum of {name}* {name} exceeds the identity by {:.3e}",
                        -min
                    )));
                }
            }
            let mut sum_b = ComplexMatrix::zeros(n, n);
            let mut sum_a = ComplexMatrix::zeros(n, n);
            for (a, b, x) in terms {
                let frp = calculus(x, |lam| pair.f(lam).powf(r * p))?;
                let grq = calculus(&x.adjoint(), |lam| pair.g(lam).powf(r * q))?;
                sum_b = &sum_b + &congruence(&frp, b);
                sum_a = &sum_a + &congruence(&grq, a);
            }
            Ok(&sum_b.scale(Complex64::new(1.0 / p, 0.0))
                + &sum_a.scale(Complex64::new(1.0 / q, 0.0)))
        }
    }
}

/// `ber^r(sum_i A_i* X_i B_i)` against the summed functional-calculus bound.
#[allow(clippy::too_many_arguments)]
pub fn check_sums(
    a_list: &[ComplexMatrix],
    b_list: &[ComplexMatrix],
    x_list: &[ComplexMatrix],
    pair: &FGPair,
    exps: &ExponentSet,
    space: &SpaceModel,
    cfg: &SearchConfig,
    mode: CheckMode,
    variant: ProductVariant,
) -> Result<CheckReport> {
    if a_list.is_empty() || a_list.len() != b_list.len() || a_list.len() != x_list.len() {
        return Err(Error::ShapeMismatch(format!(
            "need equal non-empty lists, got {}/{}/{}",
            a_list.len(),
            b_list.len(),
            x_list.len()
        )));
    }
    let n = space.dim();
    for m in a_list.iter().chain(b_list).chain(x_list) {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimMismatch {
                op: m.rows(),
                space: n,
            });
        }
    }
    let terms: Vec<_> = (0..a_list.len())
        .map(|i| (a_list[i].clone(), b_list[i].clone(), x_list[i].clone()))
        .collect();
    let combo = product_rhs_matrix(&terms, pair, exps, variant)?;
    let mut sum = ComplexMatrix::zeros(n, n);
    for (a, b, x) in &terms {
        sum = &sum + &(&(&a.adjoint() * x) * b);
    }
    let lhs = berezin_number(&sum, space, cfg)?.value.powf(exps.r);
    let rhs = rhs_ber(&combo, space, &cfg.boosted(), mode)?;
    Ok(CheckReport::single(
        "sums",
        lhs,
        rhs,
        tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS),
        mode,
        Provenance {
            dims: vec![n, a_list.len()],
            space: Some(space.descriptor()),
            pair: Some(pair.label().into()),
            ..exps.provenance()
        },
    ))
}

/// Euclidean Berezin number of off-diagonal tuples against the summed
/// square-root bound.
#[allow(clippy::too_many_arguments)]
pub fn check_euclid_offdiag(
    xs: &[ComplexMatrix],
    ys: &[ComplexMatrix],
    pair: &FGPair,
    p: f64,
    spaces: &DirectSumSpace,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::ShapeMismatch(format!(
            "need equal non-empty lists, got {}/{}",
            xs.len(),
            ys.len()
        )));
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent(format!("p = {p} must be at least 1")));
    }
    let comps = spaces.components();
    let flats: Vec<ComplexMatrix> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            BlockOperator::off_diag(x.clone(), y.clone(), spaces.clone()).map(|t| t.flat().clone())
        })
        .collect::<Result<_>>()?;
    let lhs = euclid_berezin_number(&flats, p, spaces, cfg)?.value.powf(p);

    let e = 2.0 * p;
    let rhs_cfg = cfg.boosted();
    let mut total = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let first = &calculus(x, |lam| pair.f(lam).powf(e))?
            + &calculus(&y.adjoint(), |lam| pair.g(lam).powf(e))?;
        let second = &calculus(y, |lam| pair.f(lam).powf(e))?
            + &calculus(&x.adjoint(), |lam| pair.g(lam).powf(e))?;
        let v1 = rhs_ber(&first, &comps[1], &rhs_cfg, mode)?.max(0.0);
        let v2 = rhs_ber(&second, &comps[0], &rhs_cfg, mode)?.max(0.0);
        total += v1.sqrt() * v2.sqrt();
    }
    let rhs = 2f64.powf(p - 2.0) * total;
    Ok(CheckReport::single(
        "euclid_offdiag",
        lhs,
        rhs,
        tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS),
        mode,
        Provenance {
            dims: comps.iter().map(|c| c.dim()).collect(),
            space: Some(spaces.descriptor()),
            p: Some(p),
            pair: Some(pair.label().into()),
            ..Provenance::default()
        },
    ))
}

/// Euclidean Berezin number of full 2x2 block tuples against the closed-form
/// per-block bound.
pub fn check_euclid_blocks(
    ts: &[BlockOperator],
    p: f64,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    if ts.is_empty() {
        return Err(Error::ShapeMismatch(
            "need at least one block operator".into(),
        ));
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent(format!("p = {p} must be at least 1")));
    }
    let spaces = ts[0].spaces();
    let dims: Vec<usize> = spaces.components().iter().map(|c| c.dim()).collect();
    for t in ts {
        let tdims: Vec<usize> = t.spaces().components().iter().map(|c| c.dim()).collect();
        if t.block_count() != 2 || tdims != dims {
            return Err(Error::ShapeMismatch(
                "tuple members live on different sums".into(),
            ));
        }
    }
    let flats: Vec<ComplexMatrix> = ts.iter().map(|t| t.flat().clone()).collect();
    let lhs = euclid_berezin_number(&flats, p, spaces, cfg)?.value.powf(p);

    let rhs_cfg = cfg.boosted();
    let mut total = 0.0;
    for t in ts {
        let comps = t.spaces().components();
        let a_val = rhs_ber(t.block(0, 0), &comps[0], &rhs_cfg, mode)?;
        let d_val = rhs_ber(t.block(1, 1), &comps[1], &rhs_cfg, mode)?;
        let off = t.block(0, 1).operator_norm() + t.block(1, 0).operator_norm();
        total += (a_val + d_val + ((a_val - d_val).powi(2) + off * off).sqrt()).powf(p);
    }
    let rhs = 2f64.powf(-p) * total;
    Ok(CheckReport::single(
        "euclid_blocks",
        lhs,
        rhs,
        tol_for(mode, TOL_SOUND, TOL_TIGHT_RHS),
        mode,
        Provenance {
            dims,
            space: Some(spaces.descriptor()),
            p: Some(p),
            ..Provenance::default()
        },
    ))
}

/// The basic order chain: `ber <= w <= norm`, and every sampled symbol value
/// stays inside the numerical radius.
pub fn check_basic_order(
    op: &ComplexMatrix,
    space: &SpaceModel,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    let ber = berezin_number(op, space, cfg)?.value;
    let w = numerical_radius(op, 360, 40)?.value;
    let norm = op.operator_norm();
    let samples = berezin_set_sample(op, space, 256)?;
    let max_sample = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let parts = vec![
        SubCheck::new("ber_le_w", ber, w, TOL_SOUND),
        SubCheck::new("w_le_norm", w, norm, TOL_SOUND),
        SubCheck::new("set_in_radius", max_sample, w, TOL_SOUND),
    ];
    Ok(CheckReport::from_parts(
        "basic_order",
        parts,
        TOL_SOUND,
        mode,
        Provenance {
            dims: vec![op.rows()],
            space: Some(space.descriptor()),
            ..Provenance::default()
        },
    ))
}

/// The two unconditional facts behind corner-embedding monotonicity, verified
/// for both operators: embedding never increases the Berezin number, and the
/// symbol is preserved under zero-padding the kernel direction.
pub fn check_embed_monotone(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    space: &SpaceModel,
    pad: &SpaceModel,
    cfg: &SearchConfig,
    mode: CheckMode,
) -> Result<CheckReport> {
    let n = space.dim();
    for m in [x, y] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimMismatch {
                op: m.rows(),
                space: n,
            });
        }
    }
    let mut parts = Vec::new();
    for (op, tag) in [(x, "x"), (y, "y")] {
        let spaces = DirectSumSpace::new(vec![space.clone(), pad.clone()])?;
        let embedded = BlockOperator::embed_corner(op.clone(), spaces.clone())?;
        let lhs = berezin_number(embedded.flat(), &spaces, cfg)?.value;
        let rhs = rhs_ber(op, space, &cfg.boosted(), mode)?;
        parts.push(SubCheck::new(
            format!("embed_le_ber_{tag}"),
            lhs,
            rhs,
            TOL_SOUND,
        ));

        // Symbol identity on a fixed sample: pad the unit kernel with zeros.
        let mut max_diff = 0.0f64;
        let sample = symbol_sample_points(space);
        for point in &sample {
            let k = space.normalized_kernel(point)?;
            let direct = inner(&op.mul_vec(&k), &k);
            let mut padded = k.clone();
            padded.resize(n + pad.dim(), Complex64::new(0.0, 0.0));
            let lifted = inner(&embedded.flat().mul_vec(&padded), &padded);
            max_diff = max_diff.max((direct - lifted).norm());
        }
        parts.push(SubCheck::new(
            format!("symbol_identity_{tag}"),
            max_diff,
            0.0,
            TOL_SOUND,
        ));
    }
    Ok(CheckReport::from_parts(
        "embed_monotone",
        parts,
        TOL_SOUND,
        mode,
        Provenance {
            dims: vec![n, pad.dim()],
            space: Some(format!("{} pad {}", space.descriptor(), pad.descriptor())),
            ..Provenance::default()
        },
    ))
}

fn symbol_sample_points(space: &SpaceModel) -> Vec<DomainPoint> {
    match space {
        SpaceModel::FiniteSet { features, .. } => {
            (0..features.len()).map(DomainPoint::index).collect()
        }
        _ => {
            let mut pts = Vec::new();
            for i in 0..4 {
                let r = i as f64 / 3.0;
                for j in 0..6 {
                    let a = 2.0 * std::f64::consts::PI * j as f64 / 6.0;
                    pts.push(DomainPoint::disk(Complex64::from_polar(r, a)));
                }
            }
            pts
        }
    }
}
