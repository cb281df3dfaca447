//! Periodic orbits with exactly known data, orbit detection and
//! refinement, and numerical audits of the period lower bound and of the
//! estimate chain behind it.
//!
//! The workhorse is a constructed rotation family: on a spectrum model
//! with two equal eigenvalues `λ` (the active block) take
//! `f = (A + ωJ)Π₂`, with `J` the quarter-turn on the block and `Π₂` the
//! orthogonal projection onto it. On the block the linear drift `−Au`
//! cancels against the `Au` inside `f`, leaving rigid rotation at rate
//! `ω`, so the period is exactly `T = 2π/ω`. The Lipschitz constant of
//! `f: D(A^α) → H` is exactly `L = √(λ²+ω²)·λ^{−α}`: for any `w`,
//! `‖f w‖ = √(λ²+ω²)·‖Π₂ w‖` and `‖Π₂ w‖ ≤ λ^{−α}‖A^α w‖`, with equality
//! when `w` lies in the block. This gives certificates with computable
//! `(T, α, L)` against which the bound `T ≥ K_α L^{−1/(1−α)}` and every
//! intermediate inequality of its derivation can be checked.

use crate::bounds::{k_alpha, p_part_coefficient, q_part_coefficient, BoundParams};
use crate::error::{Error, Result};
use crate::evolution::{flow_etdrk4, lipschitz_estimate, SemilinearSystem, Trajectory};
use crate::spectral::{apply_fractional, split_at, SpectrumModel, StateVector};
use std::f64::consts::PI;

/// How an orbit certificate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form construction; `T` and `L` are exact.
    Analytic,
    /// Period measured from a trajectory section.
    Detected,
    /// Newton-refined fixed point of the time-`T` map.
    Refined,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Detected => "detected",
            Provenance::Refined => "refined",
        }
    }
}

/// Parameters of the constructed rotation orbit: active eigenvalue `λ`,
/// rotation rate `ω`, orbit radius, and the ambient spectrum (the two
/// active copies of `λ` plus any inert modes).
#[derive(Debug, Clone, PartialEq)]
pub struct RotationOrbitSpec {
    lambda: f64,
    omega: f64,
    radius: f64,
    ambient: SpectrumModel,
    active: (usize, usize),
}

impl RotationOrbitSpec {
    /// Builds the family description from `λ`, `ω`, radius and extra inert
    /// eigenvalues.
    /// `λ` must be strictly positive: the `λ^{−α}` factor of the
    /// Lipschitz certificate degenerates at `λ = 0`.
    pub fn new(lambda: f64, omega: f64, radius: f64, inert: &[f64]) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::parameter(format!(
                "active eigenvalue must be > 0, got {lambda}"
            )));
        }
        if !(omega > 0.0) {
            return Err(Error::parameter(format!(
                "rotation rate must be > 0, got {omega}"
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::parameter(format!(
                "radius must be > 0, got {radius}"
            )));
        }
        let mut eigenvalues = vec![lambda, lambda];
        eigenvalues.extend_from_slice(inert);
        let ambient = SpectrumModel::new(eigenvalues)?;
        // The model sorts eigenvalues; the active block is the first two
        // slots holding exactly lambda.
        let slots: Vec<usize> = ambient
            .eigenvalues()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == lambda)
            .map(|(k, _)| k)
            .collect();
        let active = (slots[0], slots[1]);
        Ok(Self {
            lambda,
            omega,
            radius,
            ambient,
            active,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn ambient(&self) -> &SpectrumModel {
        &self.ambient
    }

    /// Exact period of the constructed orbit.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Exact Lipschitz constant of `f: D(A^α) → H`.
    pub fn lipschitz(&self, alpha: f64) -> f64 {
        (self.lambda * self.lambda + self.omega * self.omega).sqrt() * self.lambda.powf(-alpha)
    }
}

/// An orbit with its period bound data. `bound = K_α · L^{−1/(1−α)}` and
/// `slack = T/bound`; a certificate the suite accepts has `slack ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbitCertificate {
    pub period: f64,
    pub alpha: f64,
    pub lipschitz: f64,
    pub bound: f64,
    pub slack: f64,
    pub provenance: Provenance,
}

impl PeriodicOrbitCertificate {
    pub fn new(period: f64, alpha: f64, lipschitz: f64, provenance: Provenance) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::parameter(format!(
                "period must be > 0 and finite, got {period}"
            )));
        }
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::parameter(format!(
                "Lipschitz constant must be > 0 and finite, got {lipschitz}"
            )));
        }
        let bound = period_lower_bound(alpha, lipschitz)?;
        Ok(Self {
            period,
            alpha,
            lipschitz,
            bound,
            slack: period / bound,
            provenance,
        })
    }
}

/// `K_α · L^{−1/(1−α)}`, the certified period lower bound.
pub fn period_lower_bound(alpha: f64, lipschitz: f64) -> Result<f64> {
    if !(lipschitz > 0.0) {
        return Err(Error::parameter(format!(
            "Lipschitz constant must be > 0, got {lipschitz}"
        )));
    }
    let k = k_alpha(alpha)?;
    Ok(k.k_value * lipschitz.powf(-1.0 / (1.0 - alpha)))
}

/// Builds the rotation system for a spec at smoothing exponent `α`:
/// the semilinear system, the initial state on the circle (inert modes
/// zero), and the analytic certificate.
pub fn make_rotation_system(
    spec: &RotationOrbitSpec,
    alpha: f64,
) -> Result<(SemilinearSystem, StateVector, PeriodicOrbitCertificate)> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::parameter(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let (i, j) = spec.active;
    let (lambda, omega) = (spec.lambda, spec.omega);
    let dim = spec.ambient.dimension();
    let system = SemilinearSystem::new(spec.ambient.clone(), move |u: &StateVector| {
        // f = (A + omega J) Pi_2: on the block A acts as lambda I.
        let c = u.coefficients();
        let mut out = vec![0.0; dim];
        out[i] = lambda * c[i] - omega * c[j];
        out[j] = lambda * c[j] + omega * c[i];
        StateVector::new(out)
    })
    .with_lipschitz_certificate(alpha, spec.lipschitz(alpha));

    let mut u0 = vec![0.0; dim];
    u0[i] = spec.radius;
    let cert = PeriodicOrbitCertificate::new(
        spec.period(),
        alpha,
        spec.lipschitz(alpha),
        Provenance::Analytic,
    )?;
    Ok((system, StateVector::new(u0), cert))
}

/// The planar ODE `(ẋ, ẏ) = (y, −x)` as a semilinear system with `A = 0`:
/// unit Lipschitz constant, period exactly `2π`, so it attains the
/// Hilbert-space ODE bound `T = 2π/L` with equality.
pub fn make_planar_ode_system() -> (SemilinearSystem, StateVector, PeriodicOrbitCertificate) {
    let model = SpectrumModel::new(vec![0.0, 0.0]).expect("valid model");
    let system = SemilinearSystem::new(model, |u: &StateVector| {
        let c = u.coefficients();
        StateVector::new(vec![c[1], -c[0]])
    })
    .with_lipschitz_certificate(0.0, 1.0);
    let cert = PeriodicOrbitCertificate::new(2.0 * PI, 0.0, 1.0, Provenance::Analytic)
        .expect("valid certificate");
    (system, StateVector::new(vec![1.0, 0.0]), cert)
}

/// Minimum sine of the crossing angle before a section is rejected.
const SECTION_ANGLE_TOL: f64 = 1e-3;
/// Crossing states within this fraction of the orbit diameter count as
/// returns to the same orbit point.
const RETURN_MATCH_TOL: f64 = 1e-3;

/// Estimates the minimal period of a sampled orbit from transversal
/// crossings of the hyperplane through `reference` normal to the flow
/// direction there.
///
/// Upward crossings are located with linear interpolation between
/// samples (period accuracy `O(dt²)` on smooth orbits). The last
/// crossing anchors the estimate; the latest earlier crossing whose
/// interpolated state matches it within a small fraction of the orbit
/// diameter gives the first return, which by uniqueness of trajectories
/// is the minimal period (returns at `T/k` would make `T/k` the period).
pub fn detect_period(traj: &Trajectory, reference: &StateVector) -> Result<f64> {
    let states = traj.states();
    let n = states.len();
    if n < 4 {
        return Err(Error::NotPeriodic(format!(
            "trajectory with {n} samples is too short to contain a return"
        )));
    }
    let dim = states[0].len();
    if reference.len() != dim {
        return Err(Error::Alignment {
            expected: dim,
            got: reference.len(),
        });
    }

    // Flow direction at the sample nearest the reference point.
    let mut nearest = 0;
    let mut best = f64::INFINITY;
    for (k, s) in states.iter().enumerate() {
        let d = s.distance(reference);
        if d < best {
            best = d;
            nearest = k;
        }
    }
    let pivot = nearest.clamp(1, n - 2);
    let chord = states[pivot + 1].sub(&states[pivot - 1]);
    if chord.norm() < 1e-12 * (1.0 + reference.norm()) {
        return Err(Error::NotPeriodic(
            "flow direction at the reference is numerically zero; \
             the trajectory looks like an equilibrium"
                .into(),
        ));
    }
    let normal = chord.scale(1.0 / chord.norm());

    // Bounding-box diagonal as a cheap diameter proxy for the match
    // tolerance.
    let mut diameter_sq = 0.0;
    for k in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in states {
            let c = s.coefficients()[k];
            lo = lo.min(c);
            hi = hi.max(c);
        }
        diameter_sq += (hi - lo) * (hi - lo);
    }
    let match_tol = RETURN_MATCH_TOL * diameter_sq.sqrt();

    // Upward transversal crossings of g(u) = <u - reference, normal>.
    let g: Vec<f64> = states.iter().map(|s| s.sub(reference).dot(&normal)).collect();
    let mut crossings: Vec<(f64, StateVector)> = Vec::new();
    for k in 0..n - 1 {
        if g[k] < 0.0 && g[k + 1] >= 0.0 {
            let step = states[k + 1].sub(&states[k]);
            let step_norm = step.norm();
            if step_norm == 0.0 {
                continue;
            }
            let angle = (g[k + 1] - g[k]).abs() / step_norm;
            if angle < SECTION_ANGLE_TOL {
                return Err(Error::IllConditionedSection {
                    angle,
                    threshold: SECTION_ANGLE_TOL,
                });
            }
            let theta = g[k] / (g[k] - g[k + 1]);
            let t_cross = traj.times()[k] + theta * traj.dt();
            let state = states[k].axpy(theta, &step);
            crossings.push((t_cross, state));
        }
    }

    if crossings.len() < 2 {
        return Err(Error::NotPeriodic(format!(
            "found {} transversal section crossing(s); need at least 2 returns",
            crossings.len()
        )));
    }

    let (t_anchor, anchor_state) = crossings.last().expect("nonempty").clone();
    for (t_prev, prev_state) in crossings.iter().rev().skip(1) {
        if prev_state.distance(&anchor_state) <= match_tol {
            return Ok(t_anchor - t_prev);
        }
    }
    Err(Error::NotPeriodic(
        "section crossings never revisit the same orbit point; \
         the trajectory does not close up"
            .into(),
    ))
}

/// Number of fourth-order steps in the shooting flow map. Fixed so the
/// map is smooth in `T` and its fixed-point residual floor sits near
/// rounding level.
const REFINE_FLOW_STEPS: usize = 4096;
/// Newton stopping tolerance on the orbit-closure residual.
const REFINE_TOL: f64 = 1e-11;
const REFINE_MAX_ITER: usize = 50;
/// Relative finite-difference step for the shooting Jacobian.
const REFINE_FD_STEP: f64 = 1e-6;

/// Refines a periodic-orbit guess by Newton shooting on the discrete
/// time-`T` flow map, augmented with the phase condition that pins the
/// fastest-moving coordinate of the guess.
///
/// The period is first pre-aligned by a one-dimensional Newton solve on
/// `T ↦ ‖Φ_T(u) − u‖²`. Families of non-isolated orbits (the rotation
/// construction: every radius is periodic) make the shooting Jacobian
/// singular along the solution set, and with a misaligned period the
/// full Newton direction slides along the family instead of closing the
/// orbit; aligning `T` first removes the mismatch that drives the slide.
///
/// Converges when `‖Φ_T(u) − u‖ ≤ 1e−11` (checked before the first step,
/// so refinement is idempotent). The Jacobian uses central differences
/// with step `1e−6·(1+‖u‖)` and is solved by partially pivoted
/// elimination; a vanishing pivot reports a degenerate orbit.
pub fn refine_orbit(
    system: &SemilinearSystem,
    u_guess: &StateVector,
    t_guess: f64,
) -> Result<(StateVector, f64)> {
    if !(t_guess > 0.0 && t_guess.is_finite()) {
        return Err(Error::parameter(format!(
            "period guess must be > 0, got {t_guess}"
        )));
    }
    let n = system.model().dimension();
    if u_guess.len() != n {
        return Err(Error::Alignment {
            expected: n,
            got: u_guess.len(),
        });
    }

    // Phase anchor: coordinate with the largest velocity at the guess.
    let velocity = velocity_at(system, u_guess)?;
    let (phase_idx, speed) = velocity
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if speed < 1e-12 * (1.0 + u_guess.norm()) {
        return Err(Error::DegenerateOrbit(
            "the guess is an equilibrium; no phase condition can be anchored".into(),
        ));
    }
    let phase_value = u_guess.coefficients()[phase_idx];

    let flow = |u: &StateVector, t: f64| flow_etdrk4(system, u, t, REFINE_FLOW_STEPS);

    let mut u = u_guess.clone();
    let mut t = presolve_period(&flow, &u, t_guess)?;
    let mut history = Vec::new();
    loop {
        let phi = flow(&u, t)?;
        let closure = phi.sub(&u);
        let residual = closure.norm();
        history.push(residual);
        if residual <= REFINE_TOL {
            return Ok((u, t));
        }
        if history.len() > REFINE_MAX_ITER {
            return Err(Error::Convergence {
                iterations: REFINE_MAX_ITER,
                final_residual: residual,
                residual_history: history,
            });
        }

        // F(u, T) = [Phi_T(u) - u ; u_phase - c], Jacobian by central
        // differences in each of the n state coordinates and in T.
        let h_u = REFINE_FD_STEP * (1.0 + u.norm());
        let h_t = REFINE_FD_STEP * (1.0 + t.abs());
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for k in 0..n {
            let mut up = u.clone();
            up.coefficients_mut()[k] += h_u;
            let mut dn = u.clone();
            dn.coefficients_mut()[k] -= h_u;
            let fp = flow(&up, t)?.sub(&up);
            let fm = flow(&dn, t)?.sub(&dn);
            for r in 0..n {
                jac[r][k] = (fp.coefficients()[r] - fm.coefficients()[r]) / (2.0 * h_u);
            }
            jac[n][k] = if k == phase_idx { 1.0 } else { 0.0 };
        }
        let fp = flow(&u, t + h_t)?.sub(&u);
        let fm = flow(&u, t - h_t)?.sub(&u);
        for r in 0..n {
            jac[r][n] = (fp.coefficients()[r] - fm.coefficients()[r]) / (2.0 * h_t);
        }
        jac[n][n] = 0.0;

        let mut rhs = vec![0.0; n + 1];
        for r in 0..n {
            rhs[r] = -closure.coefficients()[r];
        }
        rhs[n] = -(u.coefficients()[phase_idx] - phase_value);

        let delta = solve_dense(&mut jac, &mut rhs).ok_or_else(|| {
            Error::DegenerateOrbit(
                "singular shooting Jacobian; the orbit family is degenerate at this guess".into(),
            )
        })?;
        for k in 0..n {
            u.coefficients_mut()[k] += delta[k];
        }
        t += delta[n];
        if !(t > 0.0) || !u.is_finite() {
            return Err(Error::DegenerateOrbit(format!(
                "refinement left the admissible region (period became {t})"
            )));
        }
    }
}

/// One-dimensional pre-alignment of the period: Newton steps on the
/// derivative of `T ↦ ‖Φ_T(u) − u‖²` with finite-difference curvature.
/// Best effort: on any sign of trouble (non-convex stretch, step leaving
/// `T > 0`) the search stops, and the result is kept only if it actually
/// reduced the return gap.
fn presolve_period<F>(flow: &F, u: &StateVector, t_guess: f64) -> Result<f64>
where
    F: Fn(&StateVector, f64) -> Result<StateVector>,
{
    let gap_sq = |t: f64| -> Result<f64> {
        let d = flow(u, t)?.sub(u);
        Ok(d.dot(&d))
    };
    let start_gap = gap_sq(t_guess)?;
    let mut t = t_guess;
    for _ in 0..12 {
        let h = REFINE_FD_STEP * (1.0 + t.abs());
        if t - h <= 0.0 {
            break;
        }
        let (gp, g0, gm) = (gap_sq(t + h)?, gap_sq(t)?, gap_sq(t - h)?);
        let slope = (gp - gm) / (2.0 * h);
        let curvature = (gp - 2.0 * g0 + gm) / (h * h);
        if !(curvature > 0.0) || !slope.is_finite() {
            break;
        }
        let step = slope / curvature;
        let t_new = t - step;
        if !(t_new > 0.0) || !t_new.is_finite() {
            break;
        }
        t = t_new;
        if step.abs() < 1e-12 * (1.0 + t.abs()) {
            break;
        }
    }
    if t != t_guess && gap_sq(t)? < start_gap {
        Ok(t)
    } else {
        Ok(t_guess)
    }
}

/// `u̇ = −Au + f(u)` at a state.
fn velocity_at(system: &SemilinearSystem, u: &StateVector) -> Result<StateVector> {
    let fu = system.apply_nonlinearity(u)?;
    let au = apply_fractional(system.model(), 1.0, u)?;
    Ok(fu.sub(&au))
}

/// Gaussian elimination with partial pivoting; `None` on a vanishing
/// pivot. Solves in place and returns the solution vector.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        if a[pivot_row][col].abs() <= 1e-12 * scale.max(1.0) {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Verdict of a period-bound check. The bound is recomputed from the
/// certificate's `(α, L)`; cached fields are not trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub pass: bool,
    pub bound: f64,
    pub slack: f64,
}

/// Checks `T ≥ K_α L^{−1/(1−α)}` with a `1e−9` relative grace for
/// rounding.
pub fn verify_bound(cert: &PeriodicOrbitCertificate) -> Result<BoundCheck> {
    let bound = period_lower_bound(cert.alpha, cert.lipschitz)?;
    Ok(BoundCheck {
        pass: cert.period >= bound * (1.0 - 1e-9),
        bound,
        slack: cert.period / bound,
    })
}

/// Sides of the three audited inequalities and the parameters they were
/// evaluated at. Each `(lhs, rhs)` must satisfy `lhs ≤ rhs` up to
/// quadrature tolerance for `pass` to hold; `degenerate` marks the
/// `τ → 0` case where every side vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofChainReport {
    pub tau: f64,
    pub mu: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub p_part: (f64, f64),
    pub q_part: (f64, f64),
    pub combined: (f64, f64),
    pub degenerate: bool,
    pub pass: bool,
}

/// Minimum trajectory samples per period for the quadrature audit.
const CHAIN_MIN_SAMPLES: usize = 256;
/// Relative grace on each `lhs ≤ rhs` comparison.
const CHAIN_TOL: f64 = 1e-6;
/// Above this exponent the `L^q` norm is evaluated as its `q → ∞` limit,
/// the max norm, avoiding overflow of high powers.
const LQ_MAX_SURROGATE: f64 = 64.0;

/// Audits the intermediate estimates behind the period bound on a
/// sampled orbit.
///
/// The trajectory must cover `[0, 2T]` uniformly (the period is inferred
/// as half the span); the offset `τ ∈ (0, T)` is snapped to the sample
/// grid. With `D(t) = u(t) − u(t+τ)`, `μ = δ/T` and the spectrum split at
/// `μ`, the report compares, in `L^q(0,T)`:
///
/// * low block: `‖A^α P D‖_q ≤ [2^{1−2α}/(1−(2δ)^q)^{1/q}]·T^{1−α} L ‖A^α D‖_q`,
/// * high block: `‖A^α Q D‖_q ≤ [γ M_α/(1−αp)^{1/p}]·T^{1−α} L ‖A^α D‖_q`,
/// * combined:  `‖A^α D‖_q ≤ bracket·T^{1−α} L ‖A^α D‖_q`.
///
/// `L` comes from the system's analytic certificate when its exponent
/// matches, otherwise from a pair estimate over the sampled states.
pub fn verify_proof_chain(
    system: &SemilinearSystem,
    traj: &Trajectory,
    tau: f64,
    params: &BoundParams,
) -> Result<ProofChainReport> {
    let n = traj.len();
    if n < 3 || (n - 1) % 2 != 0 {
        return Err(Error::Resolution(format!(
            "trajectory must cover two periods with an even step count, got {} steps",
            n.saturating_sub(1)
        )));
    }
    let m = (n - 1) / 2;
    if m < CHAIN_MIN_SAMPLES {
        return Err(Error::Resolution(format!(
            "{m} samples per period is below the quadrature minimum of {CHAIN_MIN_SAMPLES}"
        )));
    }
    let dt = traj.dt();
    let period = m as f64 * dt;
    if !(tau > 0.0 && tau < period) {
        return Err(Error::parameter(format!(
            "tau must lie in (0, T) = (0, {period}), got {tau}"
        )));
    }

    let alpha = params.alpha();
    let delta = params.delta();
    let (p, q) = (params.p(), params.q());
    let mu = delta / period;
    let model = system.model();
    let split = split_at(model, mu)?;

    let lipschitz = match system.analytic_lipschitz() {
        Some((a, l)) if (a - alpha).abs() < 1e-12 => l,
        _ => {
            // Subsample one period to keep the pair count manageable.
            let stride = (m / 64).max(1);
            let sample: Vec<StateVector> = traj.states()[..=m]
                .iter()
                .step_by(stride)
                .cloned()
                .collect();
            lipschitz_estimate(system, &sample, alpha)?
        }
    };

    let j_tau = (tau / dt).round() as usize;
    let states = traj.states();
    let mut full = Vec::with_capacity(m + 1);
    let mut low = Vec::with_capacity(m + 1);
    let mut high = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let d = states[j].sub(&states[j + j_tau]);
        let ad = apply_fractional(model, alpha, &d)?;
        full.push(ad.norm());
        low.push(split.project_low(&ad).norm());
        high.push(split.project_high(&ad).norm());
    }

    let full_q = lq_norm(&full, dt, q);
    let low_q = lq_norm(&low, dt, q);
    let high_q = lq_norm(&high, dt, q);

    let scale = period.powf(1.0 - alpha) * lipschitz * full_q;
    let p_rhs = p_part_coefficient(params) * scale;
    let q_rhs = q_part_coefficient(params) * scale;
    let combined_rhs = (p_part_coefficient(params) + q_part_coefficient(params)) * scale;

    let degenerate = j_tau == 0 || full_q == 0.0;
    let holds = |lhs: f64, rhs: f64| lhs <= rhs * (1.0 + CHAIN_TOL) + f64::MIN_POSITIVE;
    let pass =
        holds(low_q, p_rhs) && holds(high_q, q_rhs) && holds(full_q, combined_rhs);

    Ok(ProofChainReport {
        tau: j_tau as f64 * dt,
        mu,
        delta,
        p,
        q,
        p_part: (low_q, p_rhs),
        q_part: (high_q, q_rhs),
        combined: (full_q, combined_rhs),
        degenerate,
        pass,
    })
}

/// Trapezoid `L^q(0, T)` norm of sampled values, max-normalized for
/// stability. For `q` beyond the surrogate threshold the `q → ∞` limit
/// (the max norm) is returned.
fn lq_norm(values: &[f64], dt: f64, q: f64) -> f64 {
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    if q > LQ_MAX_SURROGATE {
        return peak;
    }
    let mut acc = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let w = if j == 0 || j == values.len() - 1 { 0.5 } else { 1.0 };
        acc += w * (v / peak).powf(q);
    }
    peak * (acc * dt).powf(1.0 / q)
}
