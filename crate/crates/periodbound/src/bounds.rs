//! Closed-form constants and inequalities behind the period lower bounds.
//!
//! For the semilinear equation `u' = -Au + f(u)` with `f` Lipschitz from
//! `D(A^α)` to `H` with constant `L`, every periodic orbit satisfies
//! `T ≥ K_α · L^{−1/(1−α)}`. The constant comes from a two-parameter
//! family of estimates indexed by a splitting level `δ ∈ (0, 1/2)` and a
//! Hölder exponent `p > 1` with `αp < 1`:
//!
//! ```text
//! B(α, δ, p) = 2^{1−2α} / (1 − (2δ)^q)^{1/q}  +  γ M_α / (1 − αp)^{1/p}
//! ```
//!
//! with `q` the conjugate of `p`, `M_α = α^α e^{−α}` and
//! `γ = (1 − e^{−1/2})^{−1}`. Each member gives `B · L · T^{1−α} ≥ 1`;
//! the family's infimum is its `p → 1` limit `2^{1−2α} + γ M_α/(1−α)`,
//! and `K_α` is that limit raised to the power `−1/(1−α)`.
//!
//! The module also carries the classical ODE comparisons (`T ≥ 2π/L` in
//! Hilbert space, `T ≥ 6/L` in Banach space) and a discrete check of the
//! Wirtinger inequality `∫‖f‖² ≤ (T/2π)² ∫‖f'‖²` for zero-mean periodic
//! paths, which is where the `2π/L` bound comes from.

use crate::error::{Error, Result};
use crate::spectral::StateVector;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Below this value of `q ln(2δ)` the term `(2δ)^q` is flushed to zero:
/// `e^{−700}` is already below the smallest normal f64.
const LOG_UNDERFLOW_CUTOFF: f64 = -700.0;

/// `M_α = α^α e^{−α}` for `α ∈ [0, 1]`, with `M_0 = 1` by the `0^0 = 1`
/// convention. This is the operator norm envelope of `(At)^α e^{−At}`.
pub fn m_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::parameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(alpha.powf(alpha) * (-alpha).exp())
}

/// `γ = (1 − e^{−1/2})^{−1} ≈ 2.5415`.
///
/// This is the value of `(1 − e^{−δ})^{−1}` at `δ = 1/2`. The map
/// `δ ↦ (1 − e^{−δ})^{−1}` is strictly decreasing, so over `δ ∈ (0, 1/2]`
/// the constant `γ` is its minimum, attained at the right endpoint.
pub fn gamma_constant() -> f64 {
    1.0 / (-(-0.5f64).exp_m1())
}

/// Admissible parameters of the bracket family: `α ∈ [0,1)`,
/// `δ ∈ (0, 1/2)`, `p > 1` with `αp < 1`, and `q` the Hölder conjugate
/// of `p`. Validation happens here, so a constructed value is always
/// safe to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    alpha: f64,
    delta: f64,
    p: f64,
    q: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, delta: f64, p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::parameter(format!(
                "alpha must lie in [0, 1), got {alpha}"
            )));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::parameter(format!(
                "delta must lie in (0, 1/2), got {delta}"
            )));
        }
        if !(p > 1.0) {
            return Err(Error::parameter(format!("p must be > 1, got {p}")));
        }
        if alpha * p >= 1.0 {
            return Err(Error::parameter(format!(
                "alpha * p must be < 1, got {}",
                alpha * p
            )));
        }
        let q = p / (p - 1.0);
        // q > 1/(1-alpha) is equivalent to alpha*p < 1 for alpha in (0,1);
        // checked explicitly so the conjugate-exponent invariant is visible.
        if q * (1.0 - alpha) <= 1.0 {
            return Err(Error::parameter(format!(
                "conjugate exponent q = {q} must exceed 1/(1 - alpha)"
            )));
        }
        Ok(Self { alpha, delta, p, q })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Which member of the bracket family produced a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BracketParams {
    /// The `p → 1` limit bracket `2^{1−2α} + γ M_α/(1−α)`.
    Limit,
    /// A finite member `B(α, δ, p)`.
    Finite(BoundParams),
}

/// A period-bound constant together with the bracket it came from.
/// Invariant: `k_value = bracket^{−1/(1−α)} > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub alpha: f64,
    pub k_value: f64,
    pub bracket: f64,
    pub params: BracketParams,
    /// Set by [`optimize_bracket`]: whether the search ended on the edge
    /// of the admissible region rather than at an interior minimum.
    pub boundary_attained: Option<bool>,
}

/// The limit constant `K_α = [2^{1−2α} + γ M_α/(1−α)]^{−1/(1−α)}` for
/// `α ∈ [0, 1)`.
///
/// `K_0 = (2 + γ)^{−1}` exactly. The value decays to zero rapidly as
/// `α → 1` (it is below `1e−190` already at `α = 0.99`) and may underflow
/// for `α` extremely close to 1.
pub fn k_alpha(alpha: f64) -> Result<BoundResult> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::parameter(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let bracket = limit_bracket(alpha);
    Ok(BoundResult {
        alpha,
        k_value: bracket.powf(-1.0 / (1.0 - alpha)),
        bracket,
        params: BracketParams::Limit,
        boundary_attained: None,
    })
}

fn limit_bracket(alpha: f64) -> f64 {
    2f64.powf(1.0 - 2.0 * alpha)
        + gamma_constant() * alpha.powf(alpha) * (-alpha).exp() / (1.0 - alpha)
}

/// Low-block coefficient of the bracket: `2^{1−2α}/(1−(2δ)^q)^{1/q}`.
///
/// `(2δ)^q` is computed in log-space; once `q ln(2δ)` drops below the
/// underflow cutoff the term is treated as exactly zero, which is the
/// correct rounding of a subnormal-or-smaller quantity.
pub fn p_part_coefficient(params: &BoundParams) -> f64 {
    let BoundParams { alpha, delta, q, .. } = *params;
    let log_two_delta_q = q * (2.0 * delta).ln();
    let two_delta_q = if log_two_delta_q < LOG_UNDERFLOW_CUTOFF {
        0.0
    } else {
        log_two_delta_q.exp()
    };
    // (1 - x)^{1/q} via log1p keeps accuracy for x near 0 and q large.
    let denom = ((-two_delta_q).ln_1p() / q).exp();
    2f64.powf(1.0 - 2.0 * alpha) / denom
}

/// High-block coefficient of the bracket: `γ M_α/(1−αp)^{1/p}`.
pub fn q_part_coefficient(params: &BoundParams) -> f64 {
    let BoundParams { alpha, p, .. } = *params;
    let m = alpha.powf(alpha) * (-alpha).exp();
    gamma_constant() * m / (1.0 - alpha * p).powf(1.0 / p)
}

/// Evaluates the bracket `B(α, δ, p)`, the sum of the two coefficients
/// above, for an admissible parameter set.
pub fn bracket_family(params: &BoundParams) -> f64 {
    p_part_coefficient(params) + q_part_coefficient(params)
}

/// Search margins for [`optimize_bracket`]. The admissible region is open
/// on every side, so the search box stops short of each edge.
const OPT_DELTA_MARGIN: f64 = 1e-6;
const OPT_P_MARGIN: f64 = 1e-6;
const OPT_GRID: usize = 32;
const OPT_TOL: f64 = 1e-8;

/// Minimizes the bracket over admissible `(δ, p)` for a fixed `α`, i.e.
/// maximizes the resulting period constant.
///
/// Strategy: a 32×32 coarse grid over the (slightly shrunk) admissible
/// box, then a few sweeps of golden-section refinement per coordinate.
/// The objective is smooth and increasing in both `δ` and `p`, so the
/// minimum sits in the `p → 1` corner; `boundary_attained` records that
/// the search ended on an edge of the box. The returned constant can
/// never beat the limit constant [`k_alpha`] by more than solver
/// tolerance, because the limit is the family's infimum.
pub fn optimize_bracket(alpha: f64) -> Result<BoundResult> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::parameter(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let d_lo = OPT_DELTA_MARGIN;
    let d_hi = 0.5 - OPT_DELTA_MARGIN;
    let p_lo = 1.0 + OPT_P_MARGIN;
    let p_hi = if alpha > 0.0 {
        // Keep alpha * p strictly below 1.
        ((1.0 - 1e-9) / alpha).max(p_lo * (1.0 + 1e-9))
    } else {
        64.0
    };
    let p_hi = p_hi.min(64.0);

    let eval = |delta: f64, p: f64| -> f64 {
        let params = BoundParams::new(alpha, delta, p).expect("search stays inside the domain");
        bracket_family(&params)
    };

    // Coarse grid pass.
    let mut best = (d_lo, p_lo, eval(d_lo, p_lo));
    for i in 0..OPT_GRID {
        let d = d_lo + (d_hi - d_lo) * i as f64 / (OPT_GRID - 1) as f64;
        for j in 0..OPT_GRID {
            let p = p_lo + (p_hi - p_lo) * j as f64 / (OPT_GRID - 1) as f64;
            let v = eval(d, p);
            if v < best.2 {
                best = (d, p, v);
            }
        }
    }

    // Coordinate refinement over the full range of each variable.
    let (mut d, mut p, mut v) = best;
    for _ in 0..3 {
        d = golden_min(d_lo, d_hi, OPT_TOL, |x| eval(x, p));
        p = golden_min(p_lo, p_hi, OPT_TOL, |x| eval(d, x));
        v = eval(d, p);
    }

    let edge = 10.0 * OPT_TOL;
    let boundary = (d - d_lo) < edge || (d_hi - d) < edge || (p - p_lo) < edge || (p_hi - p) < edge;

    let params = BoundParams::new(alpha, d, p)?;
    Ok(BoundResult {
        alpha,
        k_value: v.powf(-1.0 / (1.0 - alpha)),
        bracket: v,
        params: BracketParams::Finite(params),
        boundary_attained: Some(boundary),
    })
}

/// Golden-section minimization on `[lo, hi]`. On a monotone objective it
/// converges to the cheaper endpoint, which is exactly what the bracket
/// search needs.
fn golden_min(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Hilbert-space ODE bound `T ≥ 2π/L` for `u' = f(u)` with Lipschitz
/// constant `L`.
pub fn yorke_bound(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::parameter(format!(
            "Lipschitz constant must be > 0, got {l}"
        )));
    }
    Ok(2.0 * PI / l)
}

/// Banach-space ODE bound `T ≥ 6/L`.
pub fn busenberg_banach_bound(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::parameter(format!(
            "Lipschitz constant must be > 0, got {l}"
        )));
    }
    Ok(6.0 / l)
}

/// Outcome of a discrete Wirtinger inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct WirtingerReport {
    /// Norm of the discrete mean of the samples.
    pub mean_norm: f64,
    /// `∫₀ᵀ ‖f‖² dt` by the spectrally exact quadrature.
    pub l2_energy: f64,
    /// `∫₀ᵀ ‖f'‖² dt` with `f'` from spectral differentiation.
    pub derivative_energy: f64,
    /// `l2_energy / derivative_energy`.
    pub ratio: f64,
    /// `(T/2π)²`, the sharp constant.
    pub bound: f64,
    /// Whether `ratio ≤ bound` up to a `1e−9` relative tolerance.
    pub pass: bool,
}

/// Threshold on the discrete mean below which a path counts as zero-mean.
const WIRTINGER_MEAN_TOL: f64 = 1e-8;
/// Fraction of total energy allowed at the Nyquist frequency. The
/// derivative of the Nyquist mode is not determined by the samples, so
/// signals concentrated there are rejected as under-resolved.
const WIRTINGER_NYQUIST_TOL: f64 = 1e-8;

/// Checks `∫‖f‖² ≤ (T/2π)² ∫‖f'‖²` for a zero-mean periodic path given
/// by uniform samples `f(jT/n)`, `j = 0, …, n−1` (the wrap-around sample
/// at `t = T` must be omitted).
///
/// Differentiation is spectral: the DFT coefficient at signed frequency
/// `s` is scaled by `i·2πs/T`, which is exact for trigonometric
/// polynomials below the Nyquist frequency. Both integrals are then read
/// off in the frequency domain via Parseval, so the first-harmonic
/// equality case holds to rounding.
pub fn wirtinger_check(samples: &[StateVector], period: f64) -> Result<WirtingerReport> {
    if !(period > 0.0) {
        return Err(Error::parameter(format!(
            "period must be > 0, got {period}"
        )));
    }
    let n = samples.len();
    if n < 16 {
        return Err(Error::Resolution(format!(
            "wirtinger check needs at least 16 samples per period, got {n}"
        )));
    }
    let dim = samples[0].len();
    if dim == 0 {
        return Err(Error::parameter("samples must have positive dimension"));
    }
    for s in samples {
        if s.len() != dim {
            return Err(Error::Alignment {
                expected: dim,
                got: s.len(),
            });
        }
        if !s.is_finite() {
            return Err(Error::parameter("samples must be finite"));
        }
    }

    let mut mean = vec![0.0; dim];
    for s in samples {
        for (m, c) in mean.iter_mut().zip(s.coefficients()) {
            *m += c;
        }
    }
    let mean_norm = mean
        .iter()
        .map(|m| (m / n as f64).powi(2))
        .sum::<f64>()
        .sqrt();
    if mean_norm > WIRTINGER_MEAN_TOL {
        return Err(Error::Precondition(format!(
            "samples must have zero mean: |mean| = {mean_norm:.3e} exceeds {WIRTINGER_MEAN_TOL:.0e}"
        )));
    }

    // Per-bin spectral energy summed over components.
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut energy = vec![0.0; n];
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for d in 0..dim {
        for (b, s) in buf.iter_mut().zip(samples) {
            *b = Complex::new(s.coefficients()[d], 0.0);
        }
        fft.process(&mut buf);
        for (e, b) in energy.iter_mut().zip(&buf) {
            *e += b.norm_sqr();
        }
    }

    let total: f64 = energy.iter().sum();
    if total <= f64::MIN_POSITIVE {
        return Err(Error::Precondition(
            "signal is identically zero; the inequality is vacuous".into(),
        ));
    }
    if n % 2 == 0 && energy[n / 2] > WIRTINGER_NYQUIST_TOL * total {
        return Err(Error::Resolution(format!(
            "significant spectral energy at the Nyquist frequency ({:.3e} of total); \
             increase the sampling rate",
            energy[n / 2] / total
        )));
    }

    // Parseval: sum_j |f_j|^2 = (1/n) sum_k |c_k|^2, and the rectangle
    // rule over one period has weight T/n, giving T/n^2 per bin.
    let weight = period / (n as f64 * n as f64);
    let l2_energy = weight * total;
    let mut derivative_energy = 0.0;
    for (k, e) in energy.iter().enumerate() {
        let signed = if 2 * k > n {
            k as f64 - n as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64
        };
        let omega = 2.0 * PI * signed / period;
        derivative_energy += weight * omega * omega * e;
    }
    if derivative_energy <= f64::MIN_POSITIVE {
        return Err(Error::Precondition(
            "signal has no resolvable oscillating component".into(),
        ));
    }

    let ratio = l2_energy / derivative_energy;
    let bound = (period / (2.0 * PI)).powi(2);
    Ok(WirtingerReport {
        mean_norm,
        l2_energy,
        derivative_energy,
        ratio,
        bound,
        pass: ratio <= bound * (1.0 + 1e-9),
    })
}
