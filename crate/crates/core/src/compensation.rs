//! Phase bookkeeping for a single thermally excited eigenmode.
//!
//! A surface displacement `q₀` shifts the reflected phase by the piston term
//! `δθ = −2kq₀`. The same mode strains the coating by `ε = ζ·q₀`, which
//! shifts the reflection phase (referenced to the coating's front surface)
//! by `δβ = (dΓ/dε)·ζ·q₀`. Wavevectors where `δΦ = δθ + δβ = 0` make the
//! reflected phase blind to the mode.
//!
//! Scans report values normalized by `|δθ(k0)| = 2k0q₀` for `q₀ > 0`, so
//! `δθ = −k/k0` and `δβ = (dΓ/dε)·ζ/(2k0)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{invalid, CoatingStack, EigenmodeSpec};
use crate::roots;
use crate::tmm::{self, StrainModel, STRAIN_LIMIT};
use crate::BOLTZMANN;

/// Piston phase `−2kq₀`, radians.
pub fn piston_phase(k: f64, q0: f64) -> f64 {
    -2.0 * k * q0
}

/// Coating phase `δβ = (dΓ/dε)·ζ·q₀`, radians.
pub fn coating_phase(
    stack: &CoatingStack,
    k: f64,
    zeta: f64,
    q0: f64,
    model: StrainModel,
) -> Result<f64> {
    let strain = zeta * q0;
    if !(strain.is_finite() && strain.abs() < STRAIN_LIMIT) {
        return Err(Error::StrainOutOfRange {
            strain,
            bound: STRAIN_LIMIT,
        });
    }
    if strain == 0.0 {
        return Ok(0.0);
    }
    Ok(tmm::dgamma_deps(stack, k, model)? * strain)
}

/// One normalized point of a total-phase scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub k_over_k0: f64,
    /// `δθ/|δθ(k0)| = −k/k0`.
    pub delta_theta: f64,
    pub delta_beta: f64,
    /// `delta_theta + delta_beta`.
    pub delta_phi: f64,
    pub transmission: f64,
}

fn phase_point(
    stack: &CoatingStack,
    zeta: f64,
    x: f64,
    transmission: f64,
    model: StrainModel,
) -> Result<PhasePoint> {
    let delta_theta = -x;
    let delta_beta = if zeta == 0.0 {
        0.0
    } else {
        tmm::dgamma_deps(stack, x * stack.k0, model)? * zeta / (2.0 * stack.k0)
    };
    Ok(PhasePoint {
        k_over_k0: x,
        delta_theta,
        delta_beta,
        delta_phi: delta_theta + delta_beta,
        transmission,
    })
}

/// Normalized total phase at a single `k/k0`.
pub fn total_phase_at(
    stack: &CoatingStack,
    zeta: f64,
    k_over_k0: f64,
    model: StrainModel,
) -> Result<PhasePoint> {
    let t = tmm::stack_reflectance(stack, k_over_k0 * stack.k0).transmission;
    phase_point(stack, zeta, k_over_k0, t, model)
}

/// Normalized `δθ`, `δβ`, `δΦ` and `T` along a grid of `k/k0` values.
///
/// The grid must be dense enough for [`tmm::reflection_phase_scan`] to
/// unwrap the reflection phase.
pub fn scan_total_phase(
    stack: &CoatingStack,
    zeta: f64,
    k_over_k0: &[f64],
    model: StrainModel,
) -> Result<Vec<PhasePoint>> {
    let ks: Vec<f64> = k_over_k0.iter().map(|x| x * stack.k0).collect();
    let phases = tmm::reflection_phase_scan(stack, &ks)?;
    k_over_k0
        .iter()
        .zip(&phases)
        .map(|(&x, p)| phase_point(stack, zeta, x, p.transmission, model))
        .collect()
}

/// Uniform grid on `[lo, hi]` in units of `k0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for ScanWindow {
    fn default() -> Self {
        ScanWindow {
            lo: 0.995,
            hi: 1.005,
            points: 4096,
        }
    }
}

impl ScanWindow {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(invalid("window", lo, "window must satisfy 0 < lo < hi"));
        }
        if points < 2 {
            return Err(invalid("points", points as f64, "need at least 2 points"));
        }
        Ok(ScanWindow { lo, hi, points })
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64) / (n as f64)
                }
            })
            .collect()
    }

    /// Same window with every cell split in two.
    pub fn doubled(&self) -> Self {
        ScanWindow {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

/// Wavevectors where the reflected phase is insensitive to surface motion.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicWavevectors {
    /// Ascending roots of `δΦ`, in units of `k0`.
    pub roots: Vec<f64>,
    pub window: ScanWindow,
    /// Grid actually used for bracketing (after any automatic doubling).
    pub grid_points: usize,
}

/// Smallest grid used for bracketing roots.
pub const MIN_ROOT_GRID: usize = 2048;
/// Root tolerance in units of `k0`.
pub const ROOT_TOL: f64 = 1e-9;

/// Full width at half maximum, in grid cells, of the narrowest interior
/// transmission peak; `None` when the scan has no interior peak.
pub fn narrowest_resonance_cells(points: &[PhasePoint]) -> Option<usize> {
    let t: Vec<f64> = points.iter().map(|p| p.transmission).collect();
    let mut narrowest: Option<usize> = None;
    for i in 1..t.len().saturating_sub(1) {
        if !(t[i] > t[i - 1] && t[i] >= t[i + 1]) {
            continue;
        }
        let half = t[i] / 2.0;
        let left = (0..i).rev().find(|&j| t[j] < half);
        let right = (i + 1..t.len()).find(|&j| t[j] < half);
        if let (Some(l), Some(r)) = (left, right) {
            let width = r - l - 1;
            narrowest = Some(narrowest.map_or(width, |w| w.min(width)));
        }
    }
    narrowest
}

/// Roots of the normalized `δΦ(k)` in `window`.
///
/// The window is scanned on at least [`MIN_ROOT_GRID`] points; if a
/// transmission resonance is narrower than four grid cells the grid is
/// doubled once. Each sign change is refined with Brent's method to
/// [`ROOT_TOL`].
pub fn find_magic_wavevectors(
    stack: &CoatingStack,
    zeta: f64,
    window: ScanWindow,
    model: StrainModel,
) -> Result<MagicWavevectors> {
    let mut grid_window = ScanWindow {
        points: window.points.max(MIN_ROOT_GRID),
        ..window
    };
    let mut grid = grid_window.grid();
    let mut scan = scan_total_phase(stack, zeta, &grid, model)?;
    if narrowest_resonance_cells(&scan).is_some_and(|w| w < 4) {
        grid_window = grid_window.doubled();
        grid = grid_window.grid();
        scan = scan_total_phase(stack, zeta, &grid, model)?;
    }
    let values: Vec<f64> = scan.iter().map(|p| p.delta_phi).collect();
    let mut found = Vec::new();
    for i in roots::sign_changes(&values) {
        let root = roots::brent(
            |x| Ok(total_phase_at(stack, zeta, x, model)?.delta_phi),
            grid[i],
            grid[i + 1],
            ROOT_TOL,
        )?;
        found.push(root);
    }
    Ok(MagicWavevectors {
        roots: found,
        window,
        grid_points: grid.len(),
    })
}

/// Outcome of operating two mirrors at each other's nulling wavevectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationReport {
    /// Smallest magic root of mirror B, units of `k0`.
    pub k_minus_b: f64,
    /// Largest magic root of mirror A, units of `k0`.
    pub k_plus_a: f64,
    /// `|δΦ_A(k₋^B)|/|δθ(k0)|`: mirror A's noise while B is nulled.
    pub cross_noise_a_at_kb: f64,
    /// `|δΦ_B(k₊^A)|/|δθ(k0)|`.
    pub cross_noise_b_at_ka: f64,
    pub residual_a_at_k0: f64,
    pub residual_b_at_k0: f64,
}

/// Nulls each mirror in turn and reports the other mirror's remaining
/// phase noise.
pub fn discrimination_report(
    stack_a: &CoatingStack,
    stack_b: &CoatingStack,
    zeta: f64,
    window: ScanWindow,
    model: StrainModel,
) -> Result<DiscriminationReport> {
    if stack_a.k0 != stack_b.k0 {
        return Err(invalid("k0", stack_b.k0, "both mirrors must share k0"));
    }
    let roots_a = find_magic_wavevectors(stack_a, zeta, window, model)?;
    let roots_b = find_magic_wavevectors(stack_b, zeta, window, model)?;
    let k_plus_a = *roots_a
        .roots
        .last()
        .ok_or(Error::NoMagicRoot { mirror: "A" })?;
    let k_minus_b = *roots_b
        .roots
        .first()
        .ok_or(Error::NoMagicRoot { mirror: "B" })?;
    let phi = |s: &CoatingStack, x: f64| -> Result<f64> {
        Ok(total_phase_at(s, zeta, x, model)?.delta_phi.abs())
    };
    Ok(DiscriminationReport {
        k_minus_b,
        k_plus_a,
        cross_noise_a_at_kb: phi(stack_a, k_minus_b)?,
        cross_noise_b_at_ka: phi(stack_b, k_plus_a)?,
        residual_a_at_k0: phi(stack_a, 1.0)?,
        residual_b_at_k0: phi(stack_b, 1.0)?,
    })
}

/// Equipartition rms surface displacement `√(k_B T/(M₀ω₀²))`, m.
pub fn eigenmode_rms(mode: &EigenmodeSpec, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(invalid("temperature", temperature, "must be >= 0"));
    }
    Ok(libm::sqrt(BOLTZMANN * temperature / (mode.effective_mass * mode.omega0 * mode.omega0)))
}
