//! Growth-exponent arithmetic for reaction-diffusion nonlinearities
//! `f(u, u_x)` on an `n`-dimensional domain.
//!
//! With polynomial growth of order `p` in `u` and `q` in `u_x`, the
//! substitution operator of `f` maps `D(A^α) → H` for
//! `α = max{n(p−1)/4, 1/2 + n(q−1)/4}`, which lands inside the bound's
//! `α < 1` range exactly when `p < 1 + 4/n` and `q < 1 + 2/n`.

use crate::error::{Error, Result};

/// Spatial dimension and growth exponents of a reaction-diffusion
/// nonlinearity. The two admissible-range conditions are carried as
/// explicit flags so boundary cases are reported, not rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionDiffusionGrowth {
    dimension: u32,
    p: f64,
    q: f64,
}

impl ReactionDiffusionGrowth {
    /// Requires `dimension ≥ 1` and both exponents `> 1` (at or below 1
    /// the growth condition degenerates to plain Lipschitz).
    pub fn new(dimension: u32, p: f64, q: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::parameter("spatial dimension must be >= 1"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::parameter(format!(
                "growth exponent p must be > 1 and finite, got {p}"
            )));
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::parameter(format!(
                "growth exponent q must be > 1 and finite, got {q}"
            )));
        }
        Ok(Self { dimension, p, q })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p < 1 + 4/n`: the `u`-growth term stays below exponent 1.
    pub fn p_valid(&self) -> bool {
        self.p < 1.0 + 4.0 / self.dimension as f64
    }

    /// `q < 1 + 2/n`: the `u_x`-growth term stays below exponent 1.
    pub fn q_valid(&self) -> bool {
        self.q < 1.0 + 2.0 / self.dimension as f64
    }
}

/// Smoothing exponent of the substitution operator and whether it lies
/// in the admissible range (`valid` is equivalent to `alpha < 1`).
pub fn rd_alpha(growth: &ReactionDiffusionGrowth) -> (f64, bool) {
    let n = growth.dimension as f64;
    let from_p = n * (growth.p - 1.0) / 4.0;
    let from_q = 0.5 + n * (growth.q - 1.0) / 4.0;
    (from_p.max(from_q), growth.p_valid() && growth.q_valid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(ReactionDiffusionGrowth::new(0, 2.0, 1.5).is_err());
        assert!(ReactionDiffusionGrowth::new(1, 1.0, 1.5).is_err());
        assert!(ReactionDiffusionGrowth::new(1, 2.0, 0.5).is_err());
        assert!(ReactionDiffusionGrowth::new(1, f64::INFINITY, 1.5).is_err());
    }

    #[test]
    fn gradient_term_dominates_near_unit_q() {
        // n=1, p=2, q -> 1: the u-term gives 1/4, the gradient term 1/2.
        let growth = ReactionDiffusionGrowth::new(1, 2.0, 1.0 + 1e-12).unwrap();
        let (alpha, valid) = rd_alpha(&growth);
        assert_abs_diff_eq!(alpha, 0.5, epsilon = 1e-12);
        assert!(valid);
    }

    #[test]
    fn planar_quadratic_example() {
        let growth = ReactionDiffusionGrowth::new(2, 2.0, 1.5).unwrap();
        let (alpha, valid) = rd_alpha(&growth);
        assert_abs_diff_eq!(alpha, 0.75, epsilon = 1e-15);
        assert!(valid);
        assert!(growth.p_valid() && growth.q_valid());
    }

    #[test]
    fn critical_p_flags_invalid() {
        // p = 1 + 4/n exactly: the strict inequality fails.
        let growth = ReactionDiffusionGrowth::new(1, 5.0, 1.5).unwrap();
        let (alpha, valid) = rd_alpha(&growth);
        assert!(!growth.p_valid());
        assert!(!valid);
        assert!(alpha >= 1.0);
    }

    #[test]
    fn validity_is_exactly_alpha_below_one() {
        for &n in &[1u32, 2, 3] {
            for &p in &[1.1, 1.5, 2.0, 3.0, 5.0, 6.0] {
                for &q in &[1.05, 1.2, 1.5, 2.0, 3.0] {
                    let growth = ReactionDiffusionGrowth::new(n, p, q).unwrap();
                    let (alpha, valid) = rd_alpha(&growth);
                    assert_eq!(
                        valid,
                        alpha < 1.0,
                        "flag mismatch at n={n}, p={p}, q={q}: alpha={alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_each_argument() {
        let grid_p = [1.2, 1.5, 1.8, 2.1];
        let grid_q = [1.1, 1.3, 1.5, 1.7];
        for &n in &[1u32, 2, 3] {
            for w in grid_p.windows(2) {
                for &q in &grid_q {
                    let lo = rd_alpha(&ReactionDiffusionGrowth::new(n, w[0], q).unwrap()).0;
                    let hi = rd_alpha(&ReactionDiffusionGrowth::new(n, w[1], q).unwrap()).0;
                    assert!(hi >= lo);
                }
            }
            for &p in &grid_p {
                for w in grid_q.windows(2) {
                    let lo = rd_alpha(&ReactionDiffusionGrowth::new(n, p, w[0]).unwrap()).0;
                    let hi = rd_alpha(&ReactionDiffusionGrowth::new(n, p, w[1]).unwrap()).0;
                    assert!(hi >= lo);
                }
            }
        }
        // Increasing in the dimension as well (both exponents exceed 1).
        for &p in &grid_p {
            for &q in &grid_q {
                let a1 = rd_alpha(&ReactionDiffusionGrowth::new(1, p, q).unwrap()).0;
                let a2 = rd_alpha(&ReactionDiffusionGrowth::new(2, p, q).unwrap()).0;
                let a3 = rd_alpha(&ReactionDiffusionGrowth::new(3, p, q).unwrap()).0;
                assert!(a1 <= a2 && a2 <= a3);
            }
        }
    }
}
