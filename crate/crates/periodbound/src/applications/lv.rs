//! Lipschitz and period-bound arithmetic for diffusive Lotka-Volterra
//! systems on an `N`-dimensional domain, `N ∈ {1,2,3}`, with smoothing
//! exponent `α = N/2`.
//!
//! The reaction term `F(U) = (u(λ − au − bv), v(μ − cu − dv))` is
//! Lipschitz from the radius-`R` ball of `Ḣ^α × Ḣ^α` into `L² × L²`
//! with `|L(R)|² = max{B₁, B₂}`,
//! `B₁ = 2[‖λ‖²_∞ + C⁴_α R²(2‖a‖²_∞ + ‖b‖²_∞ + ‖c‖²_∞)]` and `B₂` the
//! same with `μ` and `d` in place of `λ` and `a`; `C_α` is the constant
//! of the embedding `Ḣ^α ⊂ L⁴`. Two period bounds follow and are
//! reported side by side (they come from different estimates and are
//! not equivalent): the embedding form `T > (L(R)·C_α)^{−1/(1−α)}`, and
//! the constant form `T ≥ K_α·L(R)^{−1/(1−α)}`, the latter only for
//! `α < 1` (so only for `N = 1`).
//!
//! When the orbit is additionally bounded in `L^∞` by `M`, the reaction
//! term is Lipschitz on the orbit as a map `L² → L²` with the same `B`
//! shapes, `M` replacing `C²_α R`; that variant's bound is `T > c/L`
//! with a front constant `c` supplied by the caller.

use crate::bounds::k_alpha;
use crate::error::{Error, Result};

/// Sup-norm data of the reaction coefficients plus the geometry of the
/// ball the orbit lives in. The smoothing exponent is `N/2`, fixed by
/// the spatial dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LotkaVolterraParams {
    dimension: u32,
    lambda_sup: f64,
    mu_sup: f64,
    a_sup: f64,
    b_sup: f64,
    c_sup: f64,
    d_sup: f64,
    c_alpha: f64,
    radius: f64,
    orbit_sup: Option<f64>,
}

impl LotkaVolterraParams {
    /// Coefficient sup-norms in the order `(λ, μ, a, b, c, d)`, the
    /// `Ḣ^α ⊂ L⁴` embedding constant, and the ball radius. The radius
    /// may be zero (the quadratic terms then drop out); everything else
    /// follows the type's invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dimension: u32,
        lambda_sup: f64,
        mu_sup: f64,
        a_sup: f64,
        b_sup: f64,
        c_sup: f64,
        d_sup: f64,
        c_alpha: f64,
        radius: f64,
    ) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::parameter(format!(
                "spatial dimension must be 1, 2, or 3, got {dimension}"
            )));
        }
        for (name, value) in [
            ("lambda_sup", lambda_sup),
            ("mu_sup", mu_sup),
            ("a_sup", a_sup),
            ("b_sup", b_sup),
            ("c_sup", c_sup),
            ("d_sup", d_sup),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::parameter(format!(
                    "{name} must be >= 0 and finite, got {value}"
                )));
            }
        }
        if !(c_alpha > 0.0 && c_alpha.is_finite()) {
            return Err(Error::parameter(format!(
                "embedding constant must be > 0 and finite, got {c_alpha}"
            )));
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::parameter(format!(
                "ball radius must be >= 0 and finite, got {radius}"
            )));
        }
        Ok(Self {
            dimension,
            lambda_sup,
            mu_sup,
            a_sup,
            b_sup,
            c_sup,
            d_sup,
            c_alpha,
            radius,
            orbit_sup: None,
        })
    }

    /// Attaches an `L^∞` bound `M` on the orbit, enabling the
    /// essential-supremum Lipschitz variant.
    pub fn with_orbit_sup(mut self, orbit_sup: f64) -> Result<Self> {
        if !(orbit_sup >= 0.0 && orbit_sup.is_finite()) {
            return Err(Error::parameter(format!(
                "orbit sup bound must be >= 0 and finite, got {orbit_sup}"
            )));
        }
        self.orbit_sup = Some(orbit_sup);
        Ok(self)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Smoothing exponent `N/2`.
    pub fn alpha(&self) -> f64 {
        self.dimension as f64 / 2.0
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn orbit_sup(&self) -> Option<f64> {
        self.orbit_sup
    }

    /// `max{B₁, B₂}` with quadratic weight `w²` standing in for
    /// `C⁴_α R²` (ball variant) or `M²` (sup variant).
    fn b_max(&self, weight_sq: f64) -> f64 {
        let shared = self.b_sup * self.b_sup + self.c_sup * self.c_sup;
        let b1 = 2.0
            * (self.lambda_sup * self.lambda_sup
                + weight_sq * (2.0 * self.a_sup * self.a_sup + shared));
        let b2 = 2.0
            * (self.mu_sup * self.mu_sup
                + weight_sq * (2.0 * self.d_sup * self.d_sup + shared));
        b1.max(b2)
    }
}

/// Lipschitz constant `L(R) = √max{B₁(R), B₂(R)}` of the reaction term
/// on the radius-`R` ball; strictly increasing in `R` whenever any
/// quadratic coefficient norm is positive.
pub fn lv_lipschitz(params: &LotkaVolterraParams) -> f64 {
    let w = params.c_alpha * params.c_alpha * params.radius;
    params.b_max(w * w).sqrt()
}

/// Lipschitz constant of the reaction term along an orbit that is
/// bounded by `M` in `L^∞`, viewed as a map `L² → L²`. Requires the
/// orbit bound to be attached.
pub fn lv_infinity_lipschitz(params: &LotkaVolterraParams) -> Result<f64> {
    let m = params.orbit_sup.ok_or_else(|| {
        Error::Precondition(
            "the essential-supremum variant needs an L-infinity orbit bound; \
             attach one with with_orbit_sup"
                .into(),
        )
    })?;
    Ok(params.b_max(m * m).sqrt())
}

/// The two period bounds for the ball variant.
#[derive(Debug, Clone, PartialEq)]
pub struct LvPeriodBound {
    /// Smoothing exponent `N/2` the bounds were evaluated at.
    pub alpha: f64,
    /// `L(R)`, shared by both forms.
    pub lipschitz: f64,
    /// `(L(R)·C_α)^{−1/(1−α)}`, read directly off the embedding
    /// estimate `T^{1−α} > 1/(L(R)C_α)`. For `α ≥ 1` the exponent flips
    /// sign and the value is only the formal evaluation of the display;
    /// `range_warning` is set in that case.
    pub embedding_form: f64,
    /// `K_α·L(R)^{−1/(1−α)}`; `None` when `α ≥ 1` (outside the range
    /// the constant is defined on).
    pub k_alpha_form: Option<f64>,
    /// Present when `α ≥ 1`: explains why `k_alpha_form` is suppressed
    /// and that `embedding_form` is formal.
    pub range_warning: Option<String>,
}

/// Evaluates both period-bound forms for the ball variant. Errors only
/// when the Lipschitz constant vanishes (no bound exists for a constant
/// reaction term).
pub fn lv_period_bound(params: &LotkaVolterraParams) -> Result<LvPeriodBound> {
    let lipschitz = lv_lipschitz(params);
    if lipschitz <= 0.0 {
        return Err(Error::parameter(
            "all coefficient norms vanish; the Lipschitz constant is zero and \
             no period bound applies",
        ));
    }
    let alpha = params.alpha();
    let exponent = -1.0 / (1.0 - alpha);
    let embedding_form = (lipschitz * params.c_alpha).powf(exponent);
    let (k_alpha_form, range_warning) = if alpha < 1.0 {
        let k = k_alpha(alpha)?;
        (Some(k.k_value * lipschitz.powf(exponent)), None)
    } else {
        (
            None,
            Some(format!(
                "alpha = {alpha} lies outside the smoothing range [0, 1); the \
                 constant-based form is suppressed and the embedding form is \
                 the formal evaluation of its display only"
            )),
        )
    };
    Ok(LvPeriodBound {
        alpha,
        lipschitz,
        embedding_form,
        k_alpha_form,
        range_warning,
    })
}

/// Period bound `T > c/L` for the essential-supremum variant, with the
/// front constant `c` supplied by the caller (the underlying estimate
/// leaves it unnamed, so it is configuration, not a result).
pub fn lv_infinity_bound(params: &LotkaVolterraParams, front_constant: f64) -> Result<f64> {
    if !(front_constant > 0.0 && front_constant.is_finite()) {
        return Err(Error::parameter(format!(
            "front constant must be > 0 and finite, got {front_constant}"
        )));
    }
    let lipschitz = lv_infinity_lipschitz(params)?;
    if lipschitz <= 0.0 {
        return Err(Error::parameter(
            "all coefficient norms vanish; the Lipschitz constant is zero and \
             no period bound applies",
        ));
    }
    Ok(front_constant / lipschitz)
}
