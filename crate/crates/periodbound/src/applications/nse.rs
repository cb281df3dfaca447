//! Desk-scale pseudo-spectral machinery for the 2D incompressible flow
//! application: divergence-free velocity fields on a 2π-periodic grid,
//! the projected advection term `B(u, v) = Π[(u·∇)v]` with 2/3-rule
//! dealiasing, a measured constant for the estimate
//! `‖B(u,u) − B(v,v)‖ ≤ c·G(1+log G)^{1/2}‖D(u−v)‖`, and the period
//! bound that follows from it at smoothing exponent `1/2`.
//!
//! Conventions: fields are stored as Fourier coefficients `û(k)` with
//! `u(x) = Σ_k û(k)e^{ik·x}`, and all norms are plain `ℓ²` sums over
//! coefficients; the `(2π)²` volume factor of the physical `L²` norm
//! cancels in every ratio this module computes. The Grashof number `G`
//! normalizes forcing as `‖f‖/(ν²κ₁²)` with unit viscosity and lowest
//! wavenumber `κ₁ = 1`; it enters only as a supplied scale, so the
//! convention is configuration, not computation.

use crate::bounds::k_alpha;
use crate::error::{Error, Result};
use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::io::{BufRead, Write};
use std::sync::Arc;

type C64 = Complex<f64>;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest retained wavenumber under the 2/3 rule: with inputs and
/// outputs truncated to `|k_i| ≤ ⌊N/3⌋`, aliased images of quadratic
/// products land outside the band and the pseudo-spectral product
/// equals the exact truncated convolution.
pub fn dealias_cutoff(n: usize) -> i64 {
    (n / 3) as i64
}

fn wavenumber(n: usize, idx: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

fn index_of(n: usize, k: i64) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Real divergence-free velocity field on an `N×N` 2π-periodic grid,
/// stored as Fourier coefficients. Invariants: zero mean mode,
/// conjugate symmetry `û(−k) = conj(û(k))`, and `k·û(k) = 0` for every
/// wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct NseField {
    n: usize,
    ux: Vec<C64>,
    uy: Vec<C64>,
}

impl NseField {
    /// Empty field on an `n×n` grid; `n` must be even and at least 4.
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::parameter(format!(
                "grid size must be even and at least 4, got {n}"
            )));
        }
        Ok(Self {
            n,
            ux: vec![ZERO; n * n],
            uy: vec![ZERO; n * n],
        })
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// Sets the coefficient at `(kx, ky)` together with its conjugate
    /// mirror at `(−kx, −ky)`, so reality holds by construction. The
    /// mode must be solenoidal (`k·û = 0`), nonzero in wavenumber, and
    /// strictly inside the representable range (Nyquist lines are
    /// excluded: their conjugate pairing is ambiguous).
    pub fn set_mode(&mut self, kx: i64, ky: i64, ux: C64, uy: C64) -> Result<()> {
        if kx == 0 && ky == 0 {
            return Err(Error::parameter("the mean mode must stay zero"));
        }
        let half = (self.n / 2) as i64;
        if kx.abs() >= half || ky.abs() >= half {
            return Err(Error::parameter(format!(
                "mode ({kx}, {ky}) is outside the representable range |k| < {half}"
            )));
        }
        if !(ux.re.is_finite() && ux.im.is_finite() && uy.re.is_finite() && uy.im.is_finite()) {
            return Err(Error::parameter("mode amplitudes must be finite"));
        }
        let defect = (kx as f64 * ux + ky as f64 * uy).norm();
        let scale = (kx.abs() + ky.abs()) as f64 * (ux.norm() + uy.norm());
        if defect > 1e-12 * scale {
            return Err(Error::parameter(format!(
                "mode ({kx}, {ky}) is not solenoidal: k.u = {defect:e}"
            )));
        }
        let idx = index_of(self.n, ky) * self.n + index_of(self.n, kx);
        let mirror = index_of(self.n, -ky) * self.n + index_of(self.n, -kx);
        self.ux[idx] = ux;
        self.uy[idx] = uy;
        self.ux[mirror] = ux.conj();
        self.uy[mirror] = uy.conj();
        Ok(())
    }

    /// Coefficient pair at `(kx, ky)`.
    pub fn mode(&self, kx: i64, ky: i64) -> Result<(C64, C64)> {
        let half = (self.n / 2) as i64;
        if kx.abs() >= half || ky.abs() >= half {
            return Err(Error::parameter(format!(
                "mode ({kx}, {ky}) is outside the representable range |k| < {half}"
            )));
        }
        let idx = index_of(self.n, ky) * self.n + index_of(self.n, kx);
        Ok((self.ux[idx], self.uy[idx]))
    }

    /// Random solenoidal field with an `|k|^{−2}` spectral envelope,
    /// supported inside the dealiased band. Deterministic in the RNG.
    pub fn random_solenoidal(n: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut field = Self::zeros(n)?;
        let cutoff = dealias_cutoff(n);
        for kx in 0..=cutoff {
            for ky in -cutoff..=cutoff {
                // Half lattice: the mirror is written by set_mode.
                if kx == 0 && ky <= 0 {
                    continue;
                }
                let ksq = (kx * kx + ky * ky) as f64;
                let envelope = 1.0 / ksq;
                let raw_x = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let raw_y = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                // Keep only the k-perpendicular component.
                let s = (-(ky as f64) * raw_x + kx as f64 * raw_y) * (envelope / ksq);
                field.set_mode(kx, ky, -(ky as f64) * s, kx as f64 * s)?;
            }
        }
        Ok(field)
    }

    /// `ℓ²` norm of the coefficient array.
    pub fn l2_norm(&self) -> f64 {
        self.ux
            .iter()
            .zip(&self.uy)
            .map(|(x, y)| x.norm_sqr() + y.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖Du‖`: the `ℓ²` norm weighted by `|k|²`.
    pub fn derivative_norm(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for j in 0..n {
            let ky = wavenumber(n, j) as f64;
            for i in 0..n {
                let kx = wavenumber(n, i) as f64;
                let idx = j * n + i;
                acc += (kx * kx + ky * ky)
                    * (self.ux[idx].norm_sqr() + self.uy[idx].norm_sqr());
            }
        }
        acc.sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            ux: self.ux.iter().map(|c| c * s).collect(),
            uy: self.uy.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Alignment {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            ux: self
                .ux
                .iter()
                .zip(&other.ux)
                .map(|(a, b)| a - b)
                .collect(),
            uy: self
                .uy
                .iter()
                .zip(&other.uy)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Real `L²` pairing `Re Σ û·conj(v̂)`.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Alignment {
                expected: self.n,
                got: other.n,
            });
        }
        let mut acc = 0.0;
        for idx in 0..self.n * self.n {
            acc += (self.ux[idx] * other.ux[idx].conj()).re
                + (self.uy[idx] * other.uy[idx].conj()).re;
        }
        Ok(acc)
    }

    /// Largest `|k·û(k)|` over the grid; zero for a field satisfying the
    /// divergence-free invariant exactly.
    pub fn divergence_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let ky = wavenumber(n, j) as f64;
            for i in 0..n {
                let kx = wavenumber(n, i) as f64;
                let idx = j * n + i;
                worst = worst.max((kx * self.ux[idx] + ky * self.uy[idx]).norm());
            }
        }
        worst
    }

    /// Largest `|û(k) − conj(û(−k))|` over the grid.
    pub fn reality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let idx = j * n + i;
                let mirror = ((n - j) % n) * n + (n - i) % n;
                worst = worst
                    .max((self.ux[idx] - self.ux[mirror].conj()).norm())
                    .max((self.uy[idx] - self.uy[mirror].conj()).norm());
            }
        }
        worst
    }

    pub fn mean_mode(&self) -> (C64, C64) {
        (self.ux[0], self.uy[0])
    }

    /// Writes the nonzero modes as CSV: a `n,{N}` line, a column header
    /// `kx,ky,re_ux,im_ux,re_uy,im_uy`, then one row per stored mode.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "n,{}", self.n)?;
        writeln!(out, "kx,ky,re_ux,im_ux,re_uy,im_uy")?;
        let n = self.n;
        for j in 0..n {
            let ky = wavenumber(n, j);
            for i in 0..n {
                let kx = wavenumber(n, i);
                let idx = j * n + i;
                let (x, y) = (self.ux[idx], self.uy[idx]);
                if x == ZERO && y == ZERO {
                    continue;
                }
                writeln!(
                    out,
                    "{kx},{ky},{:.14e},{:.14e},{:.14e},{:.14e}",
                    x.re, x.im, y.re, y.im
                )?;
            }
        }
        Ok(())
    }

    /// Reads a field written by [`write_csv`](Self::write_csv) and
    /// re-validates all three invariants.
    pub fn read_csv(reader: &mut impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parameter("empty field file"))?;
        let first = first.map_err(|e| Error::parameter(format!("read failure: {e}")))?;
        let n: usize = first
            .strip_prefix("n,")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                Error::parameter(format!("line 1: expected `n,<grid size>`, got `{first}`"))
            })?;
        let mut field = Self::zeros(n)?;
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parameter("missing column header"))?;
        let header = header.map_err(|e| Error::parameter(format!("read failure: {e}")))?;
        if header.trim() != "kx,ky,re_ux,im_ux,re_uy,im_uy" {
            return Err(Error::parameter(format!(
                "line 2: unexpected column header `{header}`"
            )));
        }
        for (lineno, line) in lines {
            let line = line.map_err(|e| Error::parameter(format!("read failure: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::parameter(format!(
                    "line {}: expected 6 comma-separated values, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| {
                    Error::parameter(format!("line {}: malformed number `{s}`", lineno + 1))
                })
            };
            let kx = parse(fields[0])? as i64;
            let ky = parse(fields[1])? as i64;
            let half = (n / 2) as i64;
            if kx.abs() >= half || ky.abs() >= half || (kx == 0 && ky == 0) {
                return Err(Error::parameter(format!(
                    "line {}: wavenumber ({kx}, {ky}) out of range",
                    lineno + 1
                )));
            }
            let idx = index_of(n, ky) * n + index_of(n, kx);
            field.ux[idx] = C64::new(parse(fields[2])?, parse(fields[3])?);
            field.uy[idx] = C64::new(parse(fields[4])?, parse(fields[5])?);
        }
        let scale = field.l2_norm().max(1.0);
        if field.reality_defect() > 1e-12 * scale {
            return Err(Error::Precondition(
                "loaded field violates conjugate symmetry".into(),
            ));
        }
        if field.divergence_defect() > 1e-12 * scale {
            return Err(Error::Precondition(
                "loaded field is not divergence-free".into(),
            ));
        }
        Ok(field)
    }
}

fn fft2(fft: &Arc<dyn Fft<f64>>, data: &mut [C64], n: usize) {
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut column = vec![ZERO; n];
    for i in 0..n {
        for j in 0..n {
            column[j] = data[j * n + i];
        }
        fft.process(&mut column);
        for j in 0..n {
            data[j * n + i] = column[j];
        }
    }
}

fn apply_mask(data: &mut [C64], n: usize, cutoff: i64) {
    for j in 0..n {
        let ky = wavenumber(n, j);
        for i in 0..n {
            let kx = wavenumber(n, i);
            if kx.abs() > cutoff || ky.abs() > cutoff {
                data[j * n + i] = ZERO;
            }
        }
    }
}

/// Projected advection term `Π[(u·∇)v]`, computed pseudo-spectrally:
/// inputs are truncated to the 2/3 band, transformed to physical space,
/// multiplied, transformed back, truncated again, and projected onto
/// divergence-free fields in Fourier space. The projection writes the
/// output as a multiple of `k^⊥`, so the divergence-free invariant
/// holds at rounding level, and conjugate mirrors are averaged so the
/// reality invariant holds exactly.
pub fn nse_bilinear(u: &NseField, v: &NseField) -> Result<NseField> {
    let n = u.n;
    if v.n != n {
        return Err(Error::Alignment {
            expected: n,
            got: v.n,
        });
    }
    let cutoff = dealias_cutoff(n);
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut ax = u.ux.clone();
    let mut ay = u.uy.clone();
    apply_mask(&mut ax, n, cutoff);
    apply_mask(&mut ay, n, cutoff);

    // Spectral derivatives of the advected field, truncated at source.
    let mut dxvx = vec![ZERO; n * n];
    let mut dyvx = vec![ZERO; n * n];
    let mut dxvy = vec![ZERO; n * n];
    let mut dyvy = vec![ZERO; n * n];
    for j in 0..n {
        let ky = wavenumber(n, j);
        for i in 0..n {
            let kx = wavenumber(n, i);
            if kx.abs() > cutoff || ky.abs() > cutoff {
                continue;
            }
            let idx = j * n + i;
            let ikx = C64::new(0.0, kx as f64);
            let iky = C64::new(0.0, ky as f64);
            dxvx[idx] = ikx * v.ux[idx];
            dyvx[idx] = iky * v.ux[idx];
            dxvy[idx] = ikx * v.uy[idx];
            dyvy[idx] = iky * v.uy[idx];
        }
    }

    for spectrum in [
        &mut ax, &mut ay, &mut dxvx, &mut dyvx, &mut dxvy, &mut dyvy,
    ] {
        fft2(&inverse, spectrum, n);
    }

    let mut w1 = vec![ZERO; n * n];
    let mut w2 = vec![ZERO; n * n];
    for m in 0..n * n {
        w1[m] = ax[m] * dxvx[m] + ay[m] * dyvx[m];
        w2[m] = ax[m] * dxvy[m] + ay[m] * dyvy[m];
    }
    fft2(&forward, &mut w1, n);
    fft2(&forward, &mut w2, n);
    let scale = 1.0 / (n * n) as f64;
    for m in 0..n * n {
        w1[m] *= scale;
        w2[m] *= scale;
    }

    apply_mask(&mut w1, n, cutoff);
    apply_mask(&mut w2, n, cutoff);
    w1[0] = ZERO;
    w2[0] = ZERO;

    // Leray projection: w <- k_perp (k_perp . w)/|k|^2 with
    // k_perp = (-ky, kx), identical to w - k(k.w)/|k|^2 in 2D but with
    // the divergence killed by construction.
    for j in 0..n {
        let ky = wavenumber(n, j) as f64;
        for i in 0..n {
            let kx = wavenumber(n, i) as f64;
            if kx == 0.0 && ky == 0.0 {
                continue;
            }
            let idx = j * n + i;
            let s = (-ky * w1[idx] + kx * w2[idx]) / (kx * kx + ky * ky);
            w1[idx] = -ky * s;
            w2[idx] = kx * s;
        }
    }

    // Average conjugate mirrors so reality holds exactly.
    for j in 0..n {
        for i in 0..n {
            let idx = j * n + i;
            let mirror = ((n - j) % n) * n + (n - i) % n;
            if idx < mirror {
                for w in [&mut w1, &mut w2] {
                    let avg = (w[idx] + w[mirror].conj()) * 0.5;
                    w[idx] = avg;
                    w[mirror] = avg.conj();
                }
            }
        }
    }

    Ok(NseField {
        n,
        ux: w1,
        uy: w2,
    })
}

/// Measured front constant of the advective Lipschitz estimate: the
/// largest `‖B(u,u) − B(v,v)‖/[G(1+log G)^{1/2}‖D(u−v)‖]` over the
/// sample pairs. The constant is measured, never asserted against a
/// target; its only claimed property is stability across a `G`-sweep.
pub fn nse_lipschitz_ratio(pairs: &[(NseField, NseField)], g: f64) -> Result<f64> {
    if !(g > 1.0 && g.is_finite()) {
        return Err(Error::parameter(format!(
            "the Grashof scale must be > 1 (so log G > 0), got {g}"
        )));
    }
    if pairs.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 sample pairs, got {}",
            pairs.len()
        )));
    }
    let weight = g * (1.0 + g.ln()).sqrt();
    let mut best: Option<f64> = None;
    for (u, v) in pairs {
        for field in [u, v] {
            let norm = field.derivative_norm();
            if norm > g * (1.0 + 1e-9) {
                return Err(Error::Precondition(format!(
                    "sample field has derivative norm {norm}, above the stated scale {g}"
                )));
            }
        }
        let diff_norm = u.sub(v)?.derivative_norm();
        if diff_norm <= 1e-13 * g {
            // Degenerate pair: no information about the quotient.
            continue;
        }
        let image_gap = nse_bilinear(u, u)?.sub(&nse_bilinear(v, v)?)?.l2_norm();
        let ratio = image_gap / (weight * diff_norm);
        best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
    }
    best.ok_or_else(|| {
        Error::InsufficientData("every sample pair was degenerate".into())
    })
}

/// Period bound `K_{1/2}·[cG(1+log G)^{1/2}]^{−2}
/// = K_{1/2}·c^{−2}G^{−2}(1+log G)^{−1}` from the advective Lipschitz
/// estimate with front constant `c` (measured or configured).
pub fn nse_period_bound(g: f64, c: f64) -> Result<f64> {
    if !(g > 1.0 && g.is_finite()) {
        return Err(Error::parameter(format!(
            "the Grashof scale must be > 1 (so log G > 0), got {g}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::parameter(format!(
            "front constant must be > 0 and finite, got {c}"
        )));
    }
    let k = k_alpha(0.5)?;
    Ok(k.k_value / (c * c * g * g * (1.0 + g.ln())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force truncated convolution with the same masking and
    /// projection conventions: the independent check for the
    /// pseudo-spectral path.
    fn oracle_bilinear(u: &NseField, v: &NseField) -> NseField {
        let n = u.grid_size();
        let cutoff = dealias_cutoff(n);
        let collect = |f: &NseField| -> Vec<(i64, i64, C64, C64)> {
            let mut modes = Vec::new();
            for j in 0..n {
                let ky = wavenumber(n, j);
                for i in 0..n {
                    let kx = wavenumber(n, i);
                    if kx.abs() > cutoff || ky.abs() > cutoff {
                        continue;
                    }
                    let idx = j * n + i;
                    if f.ux[idx] != ZERO || f.uy[idx] != ZERO {
                        modes.push((kx, ky, f.ux[idx], f.uy[idx]));
                    }
                }
            }
            modes
        };
        let u_modes = collect(u);
        let v_modes = collect(v);
        let mut w1 = vec![ZERO; n * n];
        let mut w2 = vec![ZERO; n * n];
        for &(ax, ay, ux, uy) in &u_modes {
            for &(bx, by, vx, vy) in &v_modes {
                let (kx, ky) = (ax + bx, ay + by);
                if kx.abs() > cutoff || ky.abs() > cutoff || (kx == 0 && ky == 0) {
                    continue;
                }
                // u(a) . (i b) applied to v(b).
                let advect = C64::new(0.0, 1.0) * (ux * bx as f64 + uy * by as f64);
                let idx = index_of(n, ky) * n + index_of(n, kx);
                w1[idx] += advect * vx;
                w2[idx] += advect * vy;
            }
        }
        for j in 0..n {
            let ky = wavenumber(n, j) as f64;
            for i in 0..n {
                let kx = wavenumber(n, i) as f64;
                if kx == 0.0 && ky == 0.0 {
                    continue;
                }
                let idx = j * n + i;
                let s = (-ky * w1[idx] + kx * w2[idx]) / (kx * kx + ky * ky);
                w1[idx] = -ky * s;
                w2[idx] = kx * s;
            }
        }
        NseField { n, ux: w1, uy: w2 }
    }

    fn taylor_green(n: usize) -> NseField {
        // (cos x sin y, -sin x cos y): modes at (±1, ±1).
        let mut field = NseField::zeros(n).unwrap();
        let quarter = C64::new(0.0, -0.25);
        field.set_mode(1, 1, quarter, -quarter).unwrap();
        field.set_mode(1, -1, -quarter, -quarter).unwrap();
        field
    }

    fn max_mode_gap(a: &NseField, b: &NseField) -> f64 {
        a.ux
            .iter()
            .zip(&b.ux)
            .chain(a.uy.iter().zip(&b.uy))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn grid_validation() {
        assert!(NseField::zeros(2).is_err());
        assert!(NseField::zeros(7).is_err());
        assert!(NseField::zeros(16).is_ok());
    }

    #[test]
    fn set_mode_enforces_invariants() {
        let mut f = NseField::zeros(16).unwrap();
        assert!(f.set_mode(0, 0, ZERO, ZERO).is_err());
        assert!(f
            .set_mode(8, 0, C64::new(0.0, 1.0), ZERO)
            .is_err());
        // k.u != 0 rejected.
        assert!(f
            .set_mode(1, 0, C64::new(1.0, 0.0), ZERO)
            .is_err());
        // A legal solenoidal mode and its conjugate mirror.
        f.set_mode(1, 2, C64::new(2.0, 1.0), C64::new(-1.0, -0.5))
            .unwrap();
        let (ux, uy) = f.mode(-1, -2).unwrap();
        assert_eq!(ux, C64::new(2.0, -1.0));
        assert_eq!(uy, C64::new(-1.0, 0.5));
        assert_eq!(f.reality_defect(), 0.0);
        assert!(f.divergence_defect() <= 1e-15);
    }

    #[test]
    fn taylor_green_is_valid_and_named_right() {
        let f = taylor_green(16);
        assert_eq!(f.reality_defect(), 0.0);
        assert!(f.divergence_defect() <= 1e-15);
        assert_eq!(f.mean_mode(), (ZERO, ZERO));
        // Energy: four modes of modulus 1/4 in each component.
        assert_relative_eq!(f.l2_norm(), (8.0f64 * 0.0625).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn taylor_green_advection_is_a_pure_gradient() {
        // The advection term of this steady flow is a gradient, so the
        // projection annihilates it.
        let f = taylor_green(16);
        let b = nse_bilinear(&f, &f).unwrap();
        assert!(b.l2_norm() <= 1e-13);
        // And the oracle agrees.
        let reference = oracle_bilinear(&f, &f);
        assert!(max_mode_gap(&b, &reference) <= 1e-12);
    }

    #[test]
    fn shear_mode_is_steady() {
        let mut f = NseField::zeros(16).unwrap();
        f.set_mode(0, 1, C64::new(0.5, -0.25), ZERO).unwrap();
        let b = nse_bilinear(&f, &f).unwrap();
        assert_eq!(b.l2_norm(), 0.0);
    }

    #[test]
    fn pseudo_spectral_matches_convolution_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..3 {
            let u = NseField::random_solenoidal(16, &mut rng).unwrap();
            let v = NseField::random_solenoidal(16, &mut rng).unwrap();
            let fast = nse_bilinear(&u, &v).unwrap();
            let slow = oracle_bilinear(&u, &v);
            assert!(
                max_mode_gap(&fast, &slow) <= 1e-12,
                "pseudo-spectral and direct convolution disagree"
            );
        }
    }

    #[test]
    fn bilinear_output_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        let u = NseField::random_solenoidal(32, &mut rng).unwrap();
        let v = NseField::random_solenoidal(32, &mut rng).unwrap();
        let b = nse_bilinear(&u, &v).unwrap();
        assert_eq!(b.reality_defect(), 0.0);
        assert!(b.divergence_defect() <= 1e-13 * b.l2_norm().max(1.0));
        assert_eq!(b.mean_mode(), (ZERO, ZERO));
        // Dealiased support.
        let cutoff = dealias_cutoff(32);
        for j in 0..32 {
            for i in 0..32 {
                let (kx, ky) = (wavenumber(32, i), wavenumber(32, j));
                if kx.abs() > cutoff || ky.abs() > cutoff {
                    assert_eq!(b.ux[j * 32 + i], ZERO);
                    assert_eq!(b.uy[j * 32 + i], ZERO);
                }
            }
        }
    }

    #[test]
    fn bilinear_in_first_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
        let u = NseField::random_solenoidal(16, &mut rng).unwrap();
        let v = NseField::random_solenoidal(16, &mut rng).unwrap();
        let twice = nse_bilinear(&u.scale(2.0), &v).unwrap();
        let reference = nse_bilinear(&u, &v).unwrap().scale(2.0);
        assert!(max_mode_gap(&twice, &reference) <= 1e-14);
    }

    #[test]
    fn grid_mismatch_is_an_alignment_error() {
        let u = NseField::zeros(16).unwrap();
        let v = NseField::zeros(32).unwrap();
        assert!(matches!(
            nse_bilinear(&u, &v),
            Err(Error::Alignment {
                expected: 16,
                got: 32
            })
        ));
        assert!(u.sub(&v).is_err());
        assert!(u.dot(&v).is_err());
    }

    #[test]
    fn energy_orthogonality() {
        // <B(u,u), u> = 0: the standard canary for projection plus
        // dealiasing, exact for fields supported in the band.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        for n in [16, 32] {
            let u = NseField::random_solenoidal(n, &mut rng).unwrap();
            let b = nse_bilinear(&u, &u).unwrap();
            let pairing = b.dot(&u).unwrap().abs();
            assert!(
                pairing <= 1e-12 * (1.0 + b.l2_norm() * u.l2_norm()),
                "energy pairing {pairing} too large at n={n}"
            );
        }
    }

    #[test]
    fn raw_quotient_scales_linearly() {
        // Before the G(1+log G)^{1/2} normalization the quotient is
        // homogeneous of degree one in a simultaneous rescale.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
        let u = NseField::random_solenoidal(16, &mut rng).unwrap();
        let v = NseField::random_solenoidal(16, &mut rng).unwrap();
        let raw = |u: &NseField, v: &NseField| -> f64 {
            let gap = nse_bilinear(u, u)
                .unwrap()
                .sub(&nse_bilinear(v, v).unwrap())
                .unwrap()
                .l2_norm();
            gap / u.sub(v).unwrap().derivative_norm()
        };
        let base = raw(&u, &v);
        let scaled = raw(&u.scale(3.0), &v.scale(3.0));
        assert_relative_eq!(scaled, 3.0 * base, max_relative = 1e-6);
    }

    fn sample_pairs(n: usize, count: usize, g: f64, seed: u64) -> Vec<(NseField, NseField)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let u = NseField::random_solenoidal(n, &mut rng).unwrap();
                let v = NseField::random_solenoidal(n, &mut rng).unwrap();
                (
                    u.scale(g / u.derivative_norm()),
                    v.scale(g / v.derivative_norm()),
                )
            })
            .collect()
    }

    #[test]
    fn lipschitz_ratio_validates_inputs() {
        let pairs = sample_pairs(16, 10, 8.0, 0x5eed_0007);
        assert!(matches!(
            nse_lipschitz_ratio(&pairs, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            nse_lipschitz_ratio(&pairs[..5], 8.0),
            Err(Error::InsufficientData(_))
        ));
        // Norm above the stated scale.
        assert!(matches!(
            nse_lipschitz_ratio(&pairs, 4.0),
            Err(Error::Precondition(_))
        ));
        let c = nse_lipschitz_ratio(&pairs, 8.0).unwrap();
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn degenerate_pairs_are_skipped() {
        let mut pairs = sample_pairs(16, 10, 8.0, 0x5eed_0008);
        let copy = pairs[0].0.clone();
        pairs.push((copy.clone(), copy));
        let with_degenerate = nse_lipschitz_ratio(&pairs, 8.0).unwrap();
        let without = nse_lipschitz_ratio(&pairs[..10], 8.0).unwrap();
        assert_eq!(with_degenerate, without);
        // All pairs degenerate: no quotient to measure.
        let u = pairs[0].0.clone();
        let all_same: Vec<_> = (0..10).map(|_| (u.clone(), u.clone())).collect();
        assert!(matches!(
            nse_lipschitz_ratio(&all_same, 8.0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn measured_constant_is_stable_across_grashof_sweep() {
        let sweep = [2.0, 8.0, 32.0, 128.0];
        let mut measured = Vec::new();
        for (case, &g) in sweep.iter().enumerate() {
            let pairs = sample_pairs(32, 20, g, 0x5eed_1000 + case as u64);
            measured.push(nse_lipschitz_ratio(&pairs, g).unwrap());
        }
        let max = measured.iter().cloned().fold(f64::MIN, f64::max);
        let min = measured.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            max / min <= 4.0,
            "measured constants {measured:?} drift by more than a factor 4"
        );
    }

    #[test]
    fn period_bound_frozen_value() {
        // K_{1/2}/(100 (1+ln 10)).
        let bound = nse_period_bound(10.0, 1.0).unwrap();
        assert_abs_diff_eq!(bound, 2.994_271_949_026_981e-4, epsilon = 1e-15);
    }

    #[test]
    fn period_bound_scalings() {
        let base = nse_period_bound(10.0, 1.0).unwrap();
        let doubled_c = nse_period_bound(10.0, 2.0).unwrap();
        assert_relative_eq!(doubled_c * 4.0, base, max_relative = 1e-12);
        // Boundary sanity just above G = 1.
        let near_edge = nse_period_bound(std::f64::consts::E - 1.0, 1.0).unwrap();
        assert!(near_edge.is_finite() && near_edge > 0.0);
        assert!(nse_period_bound(1.0, 1.0).is_err());
        assert!(nse_period_bound(10.0, 0.0).is_err());
    }

    #[test]
    fn random_fields_are_deterministic_and_valid() {
        let mut rng_a = ChaCha8Rng::seed_from_u64(42);
        let mut rng_b = ChaCha8Rng::seed_from_u64(42);
        let a = NseField::random_solenoidal(16, &mut rng_a).unwrap();
        let b = NseField::random_solenoidal(16, &mut rng_b).unwrap();
        assert_eq!(max_mode_gap(&a, &b), 0.0);
        assert_eq!(a.reality_defect(), 0.0);
        assert!(a.divergence_defect() <= 1e-14 * a.l2_norm().max(1.0));
        assert_eq!(a.mean_mode(), (ZERO, ZERO));
        assert!(a.l2_norm() > 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
        let field = NseField::random_solenoidal(16, &mut rng).unwrap();
        let mut buffer = Vec::new();
        field.write_csv(&mut buffer).unwrap();
        let restored = NseField::read_csv(&mut buffer.as_slice()).unwrap();
        assert_eq!(restored.grid_size(), 16);
        assert!(max_mode_gap(&field, &restored) <= 1e-13 * field.l2_norm());
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(NseField::read_csv(&mut "".as_bytes()).is_err());
        assert!(NseField::read_csv(&mut "n,16\nwrong,header\n".as_bytes()).is_err());
        assert!(NseField::read_csv(&mut "n,5\nkx,ky,re_ux,im_ux,re_uy,im_uy\n".as_bytes())
            .is_err());
        let bad_row = "n,16\nkx,ky,re_ux,im_ux,re_uy,im_uy\n1,0,not_a_number,0,0,0\n";
        assert!(NseField::read_csv(&mut bad_row.as_bytes()).is_err());
        // A non-solenoidal payload is rejected on load.
        let bad_div = "n,16\nkx,ky,re_ux,im_ux,re_uy,im_uy\n\
                       1,0,1.0,0,0,0\n-1,0,1.0,0,0,0\n";
        assert!(matches!(
            NseField::read_csv(&mut bad_div.as_bytes()),
            Err(Error::Precondition(_))
        ));
    }
}
