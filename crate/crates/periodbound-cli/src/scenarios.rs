//! The eight scenario runners. Each validates its parameter block up
//! front (structural problems are fatal), then executes cases; an error
//! inside a case becomes a failed record instead of aborting the run,
//! so a sweep always reports every cell of its grid.

use crate::config::SectionReader;
use crate::report::{Case, Value};
use anyhow::{bail, Result};
use periodbound::applications::{
    lv_infinity_bound, lv_infinity_lipschitz, lv_lipschitz, lv_period_bound, nse_lipschitz_ratio,
    nse_period_bound, rd_alpha, LotkaVolterraParams, NseField, ReactionDiffusionGrowth,
};
use periodbound::bounds::{
    bracket_family, gamma_constant, k_alpha, optimize_bracket, wirtinger_check, BoundParams,
    BracketParams,
};
use periodbound::evolution::{integrate, IntegratorConfig, Scheme, Trajectory};
use periodbound::orbits::{
    detect_period, make_planar_ode_system, make_rotation_system, refine_orbit, verify_bound,
    verify_proof_chain, PeriodicOrbitCertificate, Provenance, RotationOrbitSpec,
};
use periodbound::spectral::{smoothing_norm, split_at, tail_resolvent_norm};
use periodbound::{SpectrumModel, StateVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

fn num(key: &str, x: f64) -> (String, Value) {
    (key.to_string(), Value::Num(x))
}

fn int(key: &str, n: u64) -> (String, Value) {
    (key.to_string(), Value::Int(n))
}

fn text(key: &str, s: impl Into<String>) -> (String, Value) {
    (key.to_string(), Value::Text(s.into()))
}

fn flag(key: &str, b: bool) -> (String, Value) {
    (key.to_string(), Value::Flag(b))
}

/// Uniform draw in `[lo, hi)` from the raw generator; keeps the CLI's
/// sampling reproducible from the `--seed` flag alone.
fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + unit * (hi - lo)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        bail!("delta must lie in (0, 1/2), got {delta}");
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        bail!("alpha must lie in [0, 1), got {alpha}");
    }
    Ok(())
}

// ---------------------------------------------------------------------
// bound

pub fn run_bound(params: &SectionReader) -> Result<Vec<Case>> {
    let alphas = match params.get_f64_list("alphas")? {
        Some(list) => list,
        None => vec![params.require_f64("alpha")?],
    };
    for &alpha in &alphas {
        check_alpha(alpha)?;
    }
    let finite = match (params.get_f64("delta")?, params.get_f64("p")?) {
        (Some(delta), Some(p)) => {
            check_delta(delta)?;
            Some((delta, p))
        }
        (None, None) => None,
        _ => bail!("delta and p must be given together"),
    };
    let optimize = params.get_bool("optimize")?.unwrap_or(false);
    params.finish()?;

    let mut cases = Vec::new();
    for &alpha in &alphas {
        let inputs = vec![num("alpha", alpha), text("route", "limit")];
        match k_alpha(alpha) {
            Ok(result) => cases.push(Case::new(
                inputs,
                vec![num("k_value", result.k_value), num("bracket", result.bracket)],
                true,
            )),
            Err(e) => cases.push(Case::failed(inputs, e)),
        }
        if let Some((delta, p)) = finite {
            let inputs = vec![
                num("alpha", alpha),
                text("route", "finite"),
                num("delta", delta),
                num("p", p),
            ];
            match BoundParams::new(alpha, delta, p) {
                Ok(bp) => {
                    let bracket = bracket_family(&bp);
                    cases.push(Case::new(
                        inputs,
                        vec![
                            num("k_value", bracket.powf(-1.0 / (1.0 - alpha))),
                            num("bracket", bracket),
                            num("q", bp.q()),
                        ],
                        true,
                    ));
                }
                Err(e) => cases.push(Case::failed(inputs, e)),
            }
        }
        if optimize {
            let inputs = vec![num("alpha", alpha), text("route", "optimized")];
            match optimize_bracket(alpha) {
                Ok(result) => {
                    let mut outputs = vec![
                        num("k_value", result.k_value),
                        num("bracket", result.bracket),
                    ];
                    if let BracketParams::Finite(bp) = result.params {
                        outputs.push(num("delta", bp.delta()));
                        outputs.push(num("p", bp.p()));
                    }
                    if let Some(edge) = result.boundary_attained {
                        outputs.push(flag("boundary_attained", edge));
                    }
                    cases.push(Case::new(inputs, outputs, true));
                }
                Err(e) => cases.push(Case::failed(inputs, e)),
            }
        }
    }
    Ok(cases)
}

// ---------------------------------------------------------------------
// sweep

pub fn run_sweep(params: &SectionReader) -> Result<Vec<Case>> {
    let lambdas = params.require_f64_list("lambdas")?;
    let omegas = params.require_f64_list("omegas")?;
    let alphas = params.require_f64_list("alphas")?;
    let radius = params.get_f64("radius")?.unwrap_or(1.0);
    params.finish()?;

    let mut grid = Vec::new();
    for &lambda in &lambdas {
        for &omega in &omegas {
            for &alpha in &alphas {
                grid.push((lambda, omega, alpha));
            }
        }
    }
    let cases = grid
        .par_iter()
        .map(|&(lambda, omega, alpha)| {
            let inputs = vec![num("lambda", lambda), num("omega", omega), num("alpha", alpha)];
            match sweep_case(lambda, omega, alpha, radius) {
                Ok((outputs, pass)) => Case::new(inputs, outputs, pass),
                Err(e) => Case::failed(inputs, e),
            }
        })
        .collect();
    Ok(cases)
}

fn sweep_case(
    lambda: f64,
    omega: f64,
    alpha: f64,
    radius: f64,
) -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let spec = RotationOrbitSpec::new(lambda, omega, radius, &[])?;
    let cert = PeriodicOrbitCertificate::new(
        spec.period(),
        alpha,
        spec.lipschitz(alpha),
        Provenance::Analytic,
    )?;
    let check = verify_bound(&cert)?;
    Ok((
        vec![
            num("period", cert.period),
            num("lipschitz", cert.lipschitz),
            num("bound", check.bound),
            num("slack", check.slack),
            text("provenance", cert.provenance.as_str()),
        ],
        check.pass,
    ))
}

// ---------------------------------------------------------------------
// orbit

pub fn run_orbit(params: &SectionReader) -> Result<Vec<Case>> {
    let lambda = params.require_f64("lambda")?;
    let omega = params.require_f64("omega")?;
    let alpha = params.require_f64("alpha")?;
    check_alpha(alpha)?;
    let radius = params.get_f64("radius")?.unwrap_or(1.0);
    let perturbation = params.get_f64("perturbation")?.unwrap_or(0.0);
    let steps = params.get_usize("steps_per_period")?.unwrap_or(4096);
    let periods = params.get_usize("periods")?.unwrap_or(3);
    if periods < 2 {
        bail!("periods must be at least 2 so the detector can see a full return");
    }
    params.finish()?;

    let inputs = vec![
        num("lambda", lambda),
        num("omega", omega),
        num("alpha", alpha),
        num("radius", radius),
        num("perturbation", perturbation),
    ];
    let body = || -> periodbound::Result<(Vec<(String, Value)>, bool)> {
        let spec = RotationOrbitSpec::new(lambda, omega, radius, &[])?;
        let (system, u0, exact) = make_rotation_system(&spec, alpha)?;
        let period = spec.period();
        let config = IntegratorConfig::new(
            period / steps as f64,
            periods as f64 * period,
            Scheme::ExponentialMidpoint,
        )?;
        let traj = integrate(&system, &u0, &config)?;
        let detected = detect_period(&traj, &u0)?;
        let guess = u0.scale(1.0 + perturbation);
        let (refined_u, refined_t) = refine_orbit(&system, &guess, detected)?;
        let cert = PeriodicOrbitCertificate::new(
            refined_t,
            alpha,
            spec.lipschitz(alpha),
            Provenance::Refined,
        )?;
        let check = verify_bound(&cert)?;
        Ok((
            vec![
                num("exact_period", exact.period),
                num("detected_period", detected),
                num("refined_period", refined_t),
                num("refined_radius", refined_u.norm()),
                num("lipschitz", cert.lipschitz),
                num("bound", check.bound),
                num("slack", check.slack),
                text("provenance", cert.provenance.as_str()),
            ],
            check.pass,
        ))
    };
    Ok(vec![match body() {
        Ok((outputs, pass)) => Case::new(inputs, outputs, pass),
        Err(e) => Case::failed(inputs, e),
    }])
}

// ---------------------------------------------------------------------
// proof-chain

pub fn run_proof_chain(params: &SectionReader) -> Result<Vec<Case>> {
    let lambda = params.require_f64("lambda")?;
    let omega = params.require_f64("omega")?;
    let alpha = params.require_f64("alpha")?;
    check_alpha(alpha)?;
    let delta = params.require_f64("delta")?;
    check_delta(delta)?;
    let p = params.require_f64("p")?;
    let tau_fraction = params.get_f64("tau_fraction")?.unwrap_or(0.5);
    if !(tau_fraction > 0.0 && tau_fraction < 1.0) {
        bail!("tau_fraction must lie in (0, 1), got {tau_fraction}");
    }
    let samples = params.get_usize("samples_per_period")?.unwrap_or(1024);
    if samples < 256 {
        bail!("samples_per_period must be at least 256 for the quadrature audit");
    }
    let radius = params.get_f64("radius")?.unwrap_or(1.0);
    params.finish()?;

    let inputs = vec![
        num("lambda", lambda),
        num("omega", omega),
        num("alpha", alpha),
        num("delta", delta),
        num("p", p),
        num("tau_fraction", tau_fraction),
    ];
    let body = || -> periodbound::Result<(Vec<(String, Value)>, bool)> {
        let bound_params = BoundParams::new(alpha, delta, p)?;
        let spec = RotationOrbitSpec::new(lambda, omega, radius, &[])?;
        let (system, _, _) = make_rotation_system(&spec, alpha)?;
        let period = spec.period();
        let dt = period / samples as f64;
        let states: Vec<StateVector> = (0..=2 * samples)
            .map(|j| {
                let t = omega * dt * j as f64;
                StateVector::new(vec![radius * t.cos(), radius * t.sin()])
            })
            .collect();
        let traj = Trajectory::from_uniform_samples(dt, states)?;
        let report = verify_proof_chain(&system, &traj, tau_fraction * period, &bound_params)?;
        Ok((
            vec![
                num("tau", report.tau),
                num("mu", report.mu),
                num("q", report.q),
                num("low_lhs", report.p_part.0),
                num("low_rhs", report.p_part.1),
                num("high_lhs", report.q_part.0),
                num("high_rhs", report.q_part.1),
                num("combined_lhs", report.combined.0),
                num("combined_rhs", report.combined.1),
                flag("degenerate", report.degenerate),
            ],
            report.pass,
        ))
    };
    Ok(vec![match body() {
        Ok((outputs, pass)) => Case::new(inputs, outputs, pass),
        Err(e) => Case::failed(inputs, e),
    }])
}

// ---------------------------------------------------------------------
// lv

pub fn run_lv(params: &SectionReader) -> Result<Vec<Case>> {
    let dimension = params.get_u32("dimension")?.unwrap_or(1);
    let lambda_sup = params.require_f64("lambda_sup")?;
    let mu_sup = params.require_f64("mu_sup")?;
    let a_sup = params.require_f64("a_sup")?;
    let b_sup = params.require_f64("b_sup")?;
    let c_sup = params.require_f64("c_sup")?;
    let d_sup = params.require_f64("d_sup")?;
    let c_alpha = params.require_f64("c_alpha")?;
    let radius = params.require_f64("radius")?;
    let orbit_sup = params.get_f64("orbit_sup")?;
    let front_constant = params.get_f64("front_constant")?.unwrap_or(1.0);
    params.finish()?;

    let inputs = vec![
        int("dimension", u64::from(dimension)),
        num("c_alpha", c_alpha),
        num("radius", radius),
    ];
    let mut cases = Vec::new();
    let build = || -> periodbound::Result<LotkaVolterraParams> {
        let base = LotkaVolterraParams::new(
            dimension, lambda_sup, mu_sup, a_sup, b_sup, c_sup, d_sup, c_alpha, radius,
        )?;
        match orbit_sup {
            Some(m) => base.with_orbit_sup(m),
            None => Ok(base),
        }
    };
    match build() {
        Ok(lv) => {
            let mut finite_inputs = inputs.clone();
            finite_inputs.push(text("variant", "fractional-ball"));
            match lv_period_bound(&lv) {
                Ok(bound) => {
                    let mut outputs = vec![
                        num("alpha", bound.alpha),
                        num("lipschitz", bound.lipschitz),
                        num("embedding_form", bound.embedding_form),
                    ];
                    if let Some(k_form) = bound.k_alpha_form {
                        outputs.push(num("k_alpha_form", k_form));
                    }
                    if let Some(warning) = &bound.range_warning {
                        outputs.push(text("range_warning", warning.clone()));
                    }
                    cases.push(Case::new(finite_inputs, outputs, true));
                }
                Err(e) => cases.push(Case::failed(finite_inputs, e)),
            }
            if orbit_sup.is_some() {
                let mut sup_inputs = inputs.clone();
                sup_inputs.push(text("variant", "essential-sup"));
                sup_inputs.push(num("front_constant", front_constant));
                let body = || -> periodbound::Result<Vec<(String, Value)>> {
                    let l_inf = lv_infinity_lipschitz(&lv)?;
                    let bound = lv_infinity_bound(&lv, front_constant)?;
                    Ok(vec![
                        num("infinity_lipschitz", l_inf),
                        num("infinity_bound", bound),
                    ])
                };
                match body() {
                    Ok(outputs) => cases.push(Case::new(sup_inputs, outputs, true)),
                    Err(e) => cases.push(Case::failed(sup_inputs, e)),
                }
            }
        }
        Err(e) => cases.push(Case::failed(inputs, e)),
    }
    Ok(cases)
}

// ---------------------------------------------------------------------
// rd

pub fn run_rd(params: &SectionReader) -> Result<Vec<Case>> {
    let dimension = params.get_u32("dimension")?.unwrap_or(1);
    let p = params.require_f64("p")?;
    let q = params.require_f64("q")?;
    params.finish()?;

    let inputs = vec![
        int("dimension", u64::from(dimension)),
        num("p", p),
        num("q", q),
    ];
    Ok(vec![match ReactionDiffusionGrowth::new(dimension, p, q) {
        Ok(growth) => {
            let (alpha, valid) = rd_alpha(&growth);
            Case::new(
                inputs,
                vec![
                    num("alpha", alpha),
                    flag("valid", valid),
                    flag("p_valid", growth.p_valid()),
                    flag("q_valid", growth.q_valid()),
                ],
                true,
            )
        }
        Err(e) => Case::failed(inputs, e),
    }])
}

// ---------------------------------------------------------------------
// nse-estimate

pub fn run_nse(params: &SectionReader, seed: u64) -> Result<Vec<Case>> {
    let grid = params.get_usize("grid")?.unwrap_or(32);
    if grid < 4 || grid % 2 != 0 {
        bail!("grid must be even and at least 4, got {grid}");
    }
    let pair_count = params.get_usize("pairs")?.unwrap_or(20);
    if pair_count < 10 {
        bail!("pairs must be at least 10 for a meaningful constant, got {pair_count}");
    }
    let grashofs = params
        .get_f64_list("grashofs")?
        .unwrap_or_else(|| vec![2.0, 8.0, 32.0, 128.0]);
    for &g in &grashofs {
        if !(g > 1.0) {
            bail!("every Grashof value must exceed 1 (so log G > 0), got {g}");
        }
    }
    let front_constant = params.get_f64("front_constant")?;
    params.finish()?;

    let mut cases: Vec<Case> = grashofs
        .par_iter()
        .enumerate()
        .map(|(index, &g)| {
            let inputs = vec![num("grashof", g), int("grid", grid as u64)];
            match nse_case(grid, pair_count, g, seed.wrapping_add(index as u64), front_constant) {
                Ok(outputs) => Case::new(inputs, outputs, true),
                Err(e) => Case::failed(inputs, e),
            }
        })
        .collect();

    // Stability summary: the measured constant across the sweep.
    let measured: Vec<f64> = cases
        .iter()
        .filter_map(|case| match case.field("measured_c") {
            Some(Value::Num(c)) => Some(*c),
            _ => None,
        })
        .collect();
    if measured.len() == grashofs.len() && measured.len() > 1 {
        let c_max = measured.iter().cloned().fold(f64::MIN, f64::max);
        let c_min = measured.iter().cloned().fold(f64::MAX, f64::min);
        let ratio = c_max / c_min;
        cases.push(Case::new(
            vec![text("variant", "stability-summary")],
            vec![
                num("c_min", c_min),
                num("c_max", c_max),
                num("spread", ratio),
            ],
            ratio <= 4.0,
        ));
    }
    Ok(cases)
}

fn nse_case(
    grid: usize,
    pair_count: usize,
    g: f64,
    seed: u64,
    front_constant: Option<f64>,
) -> periodbound::Result<Vec<(String, Value)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(NseField, NseField)> = (0..pair_count)
        .map(|_| -> periodbound::Result<(NseField, NseField)> {
            let u = NseField::random_solenoidal(grid, &mut rng)?;
            let v = NseField::random_solenoidal(grid, &mut rng)?;
            Ok((
                u.scale(g / u.derivative_norm()),
                v.scale(g / v.derivative_norm()),
            ))
        })
        .collect::<periodbound::Result<_>>()?;
    let measured = nse_lipschitz_ratio(&pairs, g)?;
    let c_eff = front_constant.unwrap_or(measured);
    let bound = nse_period_bound(g, c_eff)?;
    Ok(vec![
        num("measured_c", measured),
        num("front_constant", c_eff),
        text(
            "constant_source",
            if front_constant.is_some() { "configured" } else { "measured" },
        ),
        num("period_bound", bound),
    ])
}

// ---------------------------------------------------------------------
// verify-all

/// Compact self-check battery mirroring the library's acceptance gate.
/// Always returns one case per check; a thrown error fails that case.
pub fn run_verify_all(seed: u64) -> Vec<Case> {
    type Body = Box<dyn Fn() -> periodbound::Result<(Vec<(String, Value)>, bool)> + Send + Sync>;
    let checks: Vec<(&str, Body)> = vec![
        ("constants", Box::new(check_constants)),
        ("ode-sharpness", Box::new(check_ode_sharpness)),
        ("rotation-sweep", Box::new(check_rotation_sweep)),
        ("proof-chain", Box::new(check_proof_chain)),
        ("wirtinger", Box::new(move || check_wirtinger(seed.wrapping_add(5)))),
        ("spectral-fuzz", Box::new(move || check_spectral_fuzz(seed.wrapping_add(6)))),
        ("smoothing", Box::new(move || check_smoothing(seed.wrapping_add(7)))),
        ("applications", Box::new(move || check_applications(seed.wrapping_add(8)))),
        ("integrator-orders", Box::new(check_integrator_orders)),
    ];
    checks
        .into_par_iter()
        .map(|(name, body)| {
            let inputs = vec![text("check", name)];
            match body() {
                Ok((outputs, pass)) => Case::new(inputs, outputs, pass),
                Err(e) => Case::failed(inputs, e),
            }
        })
        .collect()
}

fn check_constants() -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let gamma = gamma_constant();
    let k0 = k_alpha(0.0)?.k_value;
    let pass = (gamma - 2.541).abs() < 5e-4 && (k0 - 1.0 / (2.0 + gamma)).abs() <= 1e-12;
    Ok((vec![num("gamma", gamma), num("k0", k0)], pass))
}

fn check_ode_sharpness() -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let (system, u0, cert) = make_planar_ode_system();
    let config = IntegratorConfig::new(
        cert.period / 8192.0,
        3.0 * cert.period,
        Scheme::ExponentialMidpoint,
    )?;
    let traj = integrate(&system, &u0, &config)?;
    let measured = detect_period(&traj, &u0)?;
    let pass = (measured - TAU).abs() <= 1e-4 * TAU;
    Ok((vec![num("measured_period", measured)], pass))
}

fn check_rotation_sweep() -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let mut grid = Vec::new();
    for &lambda in &[0.5, 1.0, 2.0, 4.0, 8.0] {
        for &omega in &[0.5, 1.0, 2.0, 4.0] {
            for &alpha in &[0.0, 0.25, 0.5, 0.75, 0.9] {
                grid.push((lambda, omega, alpha));
            }
        }
    }
    let mut certified = 0usize;
    for &(lambda, omega, alpha) in &grid {
        let spec = RotationOrbitSpec::new(lambda, omega, 1.0, &[])?;
        let cert = PeriodicOrbitCertificate::new(
            spec.period(),
            alpha,
            spec.lipschitz(alpha),
            Provenance::Analytic,
        )?;
        if verify_bound(&cert)?.pass {
            certified += 1;
        }
    }
    let remeasured = grid
        .par_iter()
        .step_by(5)
        .map(|&(lambda, omega, alpha)| -> periodbound::Result<bool> {
            let spec = RotationOrbitSpec::new(lambda, omega, 1.0, &[])?;
            let (system, u0, _) = make_rotation_system(&spec, alpha)?;
            let period = spec.period();
            let config = IntegratorConfig::new(
                period / 16384.0,
                3.0 * period,
                Scheme::ExponentialMidpoint,
            )?;
            let traj = integrate(&system, &u0, &config)?;
            let measured = detect_period(&traj, &u0)?;
            let cert = PeriodicOrbitCertificate::new(
                measured,
                alpha,
                spec.lipschitz(alpha),
                Provenance::Detected,
            )?;
            Ok((measured - period).abs() <= 1e-4 * period && verify_bound(&cert)?.pass)
        })
        .collect::<periodbound::Result<Vec<bool>>>()?
        .iter()
        .filter(|ok| **ok)
        .count();
    let pass = certified == 100 && remeasured == 20;
    Ok((
        vec![
            int("certified", certified as u64),
            int("remeasured", remeasured as u64),
        ],
        pass,
    ))
}

fn check_proof_chain() -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let orbit_settings = [(1.0, 1.0, 0.0), (4.0, 2.0, 0.25), (0.3, 1.0, 0.3)];
    let tau_fractions = [0.25, 0.5, 0.75];
    let holder = [(0.1, 1.2), (0.25, 1.5), (0.4, 3.0)];
    let samples = 1024usize;
    let mut audited = 0u64;
    let mut pass = true;
    for &(lambda, omega, alpha) in &orbit_settings {
        let spec = RotationOrbitSpec::new(lambda, omega, 1.0, &[])?;
        let (system, _, _) = make_rotation_system(&spec, alpha)?;
        let period = spec.period();
        let dt = period / samples as f64;
        let states: Vec<StateVector> = (0..=2 * samples)
            .map(|j| {
                let t = omega * dt * j as f64;
                StateVector::new(vec![t.cos(), t.sin()])
            })
            .collect();
        let traj = Trajectory::from_uniform_samples(dt, states)?;
        for &fraction in &tau_fractions {
            for &(delta, p) in &holder {
                let params = BoundParams::new(alpha, delta, p)?;
                let report = verify_proof_chain(&system, &traj, fraction * period, &params)?;
                pass &= report.pass && !report.degenerate;
                audited += 1;
            }
        }
    }
    Ok((vec![int("audited", audited)], pass && audited == 27))
}

fn check_wirtinger(seed: u64) -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let n = 64usize;
    let first_harmonic: Vec<StateVector> = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            StateVector::new(vec![t.cos(), t.sin()])
        })
        .collect();
    let sharp = wirtinger_check(&first_harmonic, 5.0)?;
    let sharp_gap = (sharp.ratio / sharp.bound - 1.0).abs();
    let mut pass = sharp_gap <= 1e-10;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    for _ in 0..1000 {
        let dim = 1 + (rng.next_u64() % 3) as usize;
        let harmonics = 1 + (rng.next_u64() % 10) as usize;
        let period = uniform(&mut rng, 0.5, 20.0);
        let coeffs: Vec<Vec<(f64, f64)>> = (0..dim)
            .map(|_| {
                (0..harmonics)
                    .map(|_| (uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)))
                    .collect()
            })
            .collect();
        let samples: Vec<StateVector> = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                let coords = coeffs
                    .iter()
                    .map(|comp| {
                        comp.iter()
                            .enumerate()
                            .map(|(h, &(a, b))| {
                                let phase = (h + 1) as f64 * t;
                                a * phase.cos() + b * phase.sin()
                            })
                            .sum()
                    })
                    .collect();
                StateVector::new(coords)
            })
            .collect();
        let report = wirtinger_check(&samples, period)?;
        if !report.pass {
            violations += 1;
        }
    }
    pass &= violations == 0;
    Ok((
        vec![num("sharp_gap", sharp_gap), int("violations", violations)],
        pass,
    ))
}

fn check_spectral_fuzz(seed: u64) -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    for _ in 0..10_000 {
        let dim = 1 + (rng.next_u64() % 8) as usize;
        let eigs: Vec<f64> = (0..dim).map(|_| uniform(&mut rng, 0.0, 50.0)).collect();
        let model = SpectrumModel::new(eigs)?;
        let mu = uniform(&mut rng, 1e-3, 60.0);
        let t = uniform(&mut rng, 0.01, 5.0);
        let split = split_at(&model, mu)?;
        if split.ap_norm() > mu {
            violations += 1;
        }
        if !split.high_indices().is_empty() {
            let norm = tail_resolvent_norm(&split, &model, t)?;
            if norm > (1.0 + 1e-12) / (1.0 - (-mu * t).exp()) {
                violations += 1;
            }
        }
    }
    Ok((vec![int("violations", violations)], violations == 0))
}

fn check_smoothing(seed: u64) -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_excess: f64 = 0.0;
    let mut peak_gap: f64 = 0.0;
    for _ in 0..100 {
        let alpha = uniform(&mut rng, 0.05, 0.95);
        let t = uniform(&mut rng, 0.05, 10.0);
        let model = SpectrumModel::new(vec![0.0, alpha / t])?;
        let envelope = alpha.powf(alpha) * (-alpha).exp() * t.powf(-alpha);
        let norm = smoothing_norm(&model, alpha, t)?;
        peak_gap = peak_gap.max((norm - envelope).abs() / envelope);
    }
    for _ in 0..1000 {
        let alpha = uniform(&mut rng, 0.0, 0.999);
        let t = uniform(&mut rng, 0.01, 10.0);
        let dim = 1 + (rng.next_u64() % 6) as usize;
        let eigs: Vec<f64> = (0..dim).map(|_| uniform(&mut rng, 0.0, 100.0)).collect();
        let model = SpectrumModel::new(eigs)?;
        let envelope = alpha.powf(alpha) * (-alpha).exp() * t.powf(-alpha);
        let norm = smoothing_norm(&model, alpha, t)?;
        max_excess = max_excess.max(norm / envelope - 1.0);
    }
    let pass = peak_gap <= 1e-12 && max_excess <= 1e-12;
    Ok((
        vec![num("peak_gap", peak_gap), num("max_excess", max_excess)],
        pass,
    ))
}

fn check_applications(seed: u64) -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let lv = LotkaVolterraParams::new(1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)?;
    let lv_gap = (lv_lipschitz(&lv) - 10f64.sqrt()).abs();
    let rd = ReactionDiffusionGrowth::new(2, 2.0, 1.5)?;
    let (rd_value, rd_valid) = rd_alpha(&rd);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = NseField::random_solenoidal(16, &mut rng)?;
    let advection = periodbound::applications::nse_bilinear(&field, &field)?;
    let pairing = advection.dot(&field)?.abs()
        / (1.0 + advection.l2_norm() * field.l2_norm());

    let mut measured = Vec::new();
    for (index, &g) in [2.0, 8.0, 32.0, 128.0].iter().enumerate() {
        let mut sweep_rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1 + index as u64));
        let pairs: Vec<(NseField, NseField)> = (0..20)
            .map(|_| -> periodbound::Result<(NseField, NseField)> {
                let u = NseField::random_solenoidal(32, &mut sweep_rng)?;
                let v = NseField::random_solenoidal(32, &mut sweep_rng)?;
                Ok((
                    u.scale(g / u.derivative_norm()),
                    v.scale(g / v.derivative_norm()),
                ))
            })
            .collect::<periodbound::Result<_>>()?;
        measured.push(nse_lipschitz_ratio(&pairs, g)?);
    }
    let spread = measured.iter().cloned().fold(f64::MIN, f64::max)
        / measured.iter().cloned().fold(f64::MAX, f64::min);

    let pass = lv_gap <= 1e-12
        && (rd_value - 0.75).abs() <= 1e-15
        && rd_valid
        && pairing <= 1e-12
        && spread <= 4.0;
    Ok((
        vec![
            num("lv_gap", lv_gap),
            num("rd_alpha", rd_value),
            num("energy_pairing", pairing),
            num("c_spread", spread),
        ],
        pass,
    ))
}

fn check_integrator_orders() -> periodbound::Result<(Vec<(String, Value)>, bool)> {
    let spec = RotationOrbitSpec::new(1.0, 1.0, 1.0, &[])?;
    let (system, u0, cert) = make_rotation_system(&spec, 0.5)?;
    let mut slopes = Vec::new();
    for scheme in [Scheme::ExponentialEuler, Scheme::ExponentialMidpoint] {
        let mut logs = Vec::new();
        for k in 8..=12 {
            let dt = cert.period / (1u32 << k) as f64;
            let config = IntegratorConfig::new(dt, cert.period, scheme)?;
            let traj = integrate(&system, &u0, &config)?;
            logs.push((dt.ln(), traj.final_state().distance(&u0).ln()));
        }
        let n = logs.len() as f64;
        let sx: f64 = logs.iter().map(|(x, _)| x).sum();
        let sy: f64 = logs.iter().map(|(_, y)| y).sum();
        let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
        slopes.push((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
    let pass = (slopes[0] - 1.0).abs() <= 0.2 && (slopes[1] - 2.0).abs() <= 0.2;
    Ok((
        vec![
            num("euler_slope", slopes[0]),
            num("midpoint_slope", slopes[1]),
        ],
        pass,
    ))
}
