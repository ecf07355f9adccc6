//! Front coating plus a reflector embedded at depth `z₂` in the substrate.
//!
//! The pair acts as a Gires–Tournois etalon: with `R₂ = 1` the reflected
//! amplitude has unit modulus and a phase `Γ(φ)` that depends on the
//! round-trip internal phase `φ = 2 n_s k z₂`. Strain between the surfaces
//! enters the reflected phase with weight `α(k)`, and the residual phase
//! noise relative to the bare piston noise is
//!
//! ```text
//! Ϝ(z₂; α) = (1−α)² + 2α(1−α) N(0,z₂) + α² N(z₂,z₂)
//! ```

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fdt::{self, QuadratureSettings};
use crate::model::{invalid, BeamSubstrate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeMirror {
    /// Front-surface power reflectivity, `0 ≤ R0 < 1`.
    pub r0: f64,
    /// Embedded-surface power reflectivity, `0 < R2 ≤ 1`.
    pub r2: f64,
    /// Depth of the embedded reflector, m.
    pub z2: f64,
    pub n_s: f64,
    pub p12: f64,
}

impl CompositeMirror {
    pub fn new(r0: f64, r2: f64, z2: f64, n_s: f64, p12: f64) -> Result<Self> {
        check_reflectivities(r0, r2)?;
        if r2 == 0.0 {
            return Err(invalid("R2", r2, "embedded reflectivity must be > 0"));
        }
        if !(z2.is_finite() && z2 > 0.0) {
            return Err(invalid("z2", z2, "embedded depth must be > 0"));
        }
        if !(n_s.is_finite() && n_s >= 1.0) {
            return Err(invalid("n_s", n_s, "substrate index must be >= 1"));
        }
        Ok(CompositeMirror {
            r0,
            r2,
            z2,
            n_s,
            p12,
        })
    }

    /// Wavevector spacing over which `α(k)` repeats, `π/(n_s z₂)`.
    pub fn alpha_period(&self) -> f64 {
        PI / (self.n_s * self.z2)
    }
}

fn check_reflectivities(r0: f64, r2: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r0) {
        return Err(invalid("R0", r0, "front reflectivity must lie in [0, 1)"));
    }
    if !(0.0..=1.0).contains(&r2) {
        return Err(invalid("R2", r2, "embedded reflectivity must lie in [0, 1]"));
    }
    Ok(())
}

/// Amplitude reflectance `(−√R0 + √R2 e^{iφ}) / (1 − √(R0R2) e^{iφ})`.
pub fn gt_reflection(r0: f64, r2: f64, phi: f64) -> Result<Complex64> {
    check_reflectivities(r0, r2)?;
    let a = libm::sqrt(r0);
    let b = libm::sqrt(r2);
    let e = Complex64::from_polar(1.0, phi);
    Ok((e * b - a) / (Complex64::new(1.0, 0.0) - e * (a * b)))
}

/// `dΓ/dφ` of [`gt_reflection`], analytically.
///
/// Uses `d/dφ arg(c + d e^{iφ}) = Re(d e^{iφ}/(c + d e^{iφ}))` for numerator
/// and denominator; positive at resonance (`φ = 0`).
pub fn gamma_slope(r0: f64, r2: f64, phi0: f64) -> Result<f64> {
    check_reflectivities(r0, r2)?;
    let a = libm::sqrt(r0);
    let b = libm::sqrt(r2);
    if b == 0.0 {
        return Ok(0.0);
    }
    let e = Complex64::from_polar(1.0, phi0);
    let num = e * b;
    let den = e * (-a * b);
    Ok((num / (num - a)).re - (den / (den + 1.0)).re)
}

/// `α(k)` with the internal phase and the near-field check that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEvaluation {
    pub alpha: f64,
    /// `2 n_s k z₂` reduced to `[0, 2π)`.
    pub phi0: f64,
    pub slope: f64,
    /// Set when `z₂ ≥ n_s k w₀²/2`: the embedded reflector is no longer
    /// well inside the beam's Rayleigh range and a fixed `w₀` is a poor
    /// approximation.
    pub beyond_rayleigh: bool,
}

/// Strain sensitivity `α(k) = n_s (1 − n_s² p12/2) |dΓ(φ₀)/dφ|` at vacuum
/// wavevector `k`, for a beam of radius `w0`.
pub fn strain_sensitivity_alpha(m: &CompositeMirror, k: f64, w0: f64) -> Result<AlphaEvaluation> {
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", k, "wavevector must be > 0"));
    }
    let phi0 = libm::fmod(2.0 * m.n_s * k * m.z2, 2.0 * PI);
    let slope = gamma_slope(m.r0, m.r2, phi0)?;
    let alpha = m.n_s * (1.0 - m.n_s * m.n_s * m.p12 / 2.0) * slope.abs();
    Ok(AlphaEvaluation {
        alpha,
        phi0,
        slope,
        beyond_rayleigh: m.z2 >= m.n_s * k * w0 * w0 / 2.0,
    })
}

fn bracket(alpha: f64, n0z: f64, nzz: f64) -> f64 {
    (1.0 - alpha) * (1.0 - alpha) + 2.0 * alpha * (1.0 - alpha) * n0z + alpha * alpha * nzz
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(invalid("alpha", alpha, "must be finite"));
    }
    Ok(())
}

/// `Ϝ(z₂; α)` with `z₂` in units of `w₀`.
pub fn noise_ratio_scaled(z2: f64, alpha: f64, sigma: f64, q: &QuadratureSettings) -> Result<f64> {
    check_alpha(alpha)?;
    let n0z = fdt::correlation_n_scaled(0.0, z2, sigma, q)?.value;
    let nzz = fdt::correlation_n_scaled(z2, z2, sigma, q)?.value;
    Ok(bracket(alpha, n0z, nzz))
}

/// `Ϝ(z₂; α)` with `z₂` in meters.
pub fn noise_ratio_f(z2: f64, alpha: f64, beam: &BeamSubstrate, q: &QuadratureSettings) -> Result<f64> {
    noise_ratio_scaled(z2 / beam.w0, alpha, beam.sigma(), q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalCompensation {
    pub alpha_min: f64,
    pub f_min: f64,
    /// `true` when the quadratic in `α` is flat (only at `z₂ = 0`, where
    /// `Ϝ ≡ 1`); `alpha_min` is then 0 by convention.
    pub degenerate: bool,
}

const DEGENERATE_CURVATURE: f64 = 1e-12;

/// Minimizer of the quadratic `Ϝ(z₂; α)` in `α`, `z₂` in units of `w₀`:
/// `α_min = (1 − N(0,z₂)) / (1 − 2N(0,z₂) + N(z₂,z₂))`.
pub fn optimal_alpha_scaled(z2: f64, sigma: f64, q: &QuadratureSettings) -> Result<OptimalCompensation> {
    let n0z = fdt::correlation_n_scaled(0.0, z2, sigma, q)?.value;
    let nzz = fdt::correlation_n_scaled(z2, z2, sigma, q)?.value;
    let curvature = 1.0 - 2.0 * n0z + nzz;
    if curvature.abs() < DEGENERATE_CURVATURE {
        return Ok(OptimalCompensation {
            alpha_min: 0.0,
            f_min: bracket(0.0, n0z, nzz),
            degenerate: true,
        });
    }
    let alpha_min = (1.0 - n0z) / curvature;
    Ok(OptimalCompensation {
        alpha_min,
        f_min: bracket(alpha_min, n0z, nzz),
        degenerate: false,
    })
}

/// [`optimal_alpha_scaled`] with `z₂` in meters.
pub fn optimal_alpha(z2: f64, beam: &BeamSubstrate, q: &QuadratureSettings) -> Result<OptimalCompensation> {
    optimal_alpha_scaled(z2 / beam.w0, beam.sigma(), q)
}

/// Heuristic incoherent contribution of transverse strains, `coeff·z₂/w₀`.
///
/// Only the linear growth at `z₂ ≫ w₀` is modeled; `coeff` has no default
/// and must come from the caller.
pub fn transverse_penalty(z2: f64, w0: f64, coeff: f64) -> Result<f64> {
    if !(coeff.is_finite() && coeff >= 0.0) {
        return Err(invalid("transverse coefficient", coeff, "must be >= 0"));
    }
    if !(w0.is_finite() && w0 > 0.0) {
        return Err(invalid("w0", w0, "beam radius must be > 0"));
    }
    Ok(coeff * z2 / w0)
}

/// `Ϝ` along a depth grid for one fixed `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRatioCurve {
    pub alpha: f64,
    pub sigma: f64,
    /// `(z₂/w₀, Ϝ)` pairs.
    pub points: Vec<(f64, f64)>,
}

pub fn noise_ratio_curve(
    z2_grid: &[f64],
    alpha: f64,
    sigma: f64,
    q: &QuadratureSettings,
) -> Result<NoiseRatioCurve> {
    let points = z2_grid
        .iter()
        .map(|&z| noise_ratio_scaled(z, alpha, sigma, q).map(|f| (z, f)))
        .collect::<Result<Vec<_>>>()?;
    Ok(NoiseRatioCurve {
        alpha,
        sigma,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn gt_limits() {
        for phi in [0.0, 0.7, 2.0, 4.5] {
            let r = gt_reflection(0.0, 1.0, phi).unwrap();
            assert!((r - Complex64::from_polar(1.0, phi)).norm() < 1e-15);
            let r = gt_reflection(0.81, 1.0, phi).unwrap();
            assert!((r.norm() - 1.0).abs() < 1e-12);
            let r = gt_reflection(0.81, 0.0, phi).unwrap();
            assert!((r - Complex64::new(-0.9, 0.0)).norm() < 1e-15);
        }
        assert!(gt_reflection(1.0, 1.0, 0.0).is_err());
        assert!(gt_reflection(0.5, 1.5, 0.0).is_err());
    }

    #[test]
    fn slope_values() {
        for phi in [0.0, 1.0, 3.0] {
            assert!((gamma_slope(0.0, 1.0, phi).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((gamma_slope(0.81, 1.0, 0.0).unwrap() - 19.0).abs() < 1e-12);
        assert!((gamma_slope(0.81, 1.0, PI).unwrap() - 0.1 / 1.9).abs() < 1e-12);
        assert!((0.1f64 / 1.9 - 0.05263).abs() < 1e-5);
    }

    #[test]
    fn alpha_substitution() {
        let m = CompositeMirror::new(0.0, 1.0, 1e-3, 1.45, 0.0).unwrap();
        let a = strain_sensitivity_alpha(&m, 5.9e6, 1e-4).unwrap();
        assert!((a.alpha - 1.45).abs() < 1e-14);
        let m = CompositeMirror::new(0.0, 1.0, 1e-3, 1.45, 0.27).unwrap();
        let a = strain_sensitivity_alpha(&m, 5.9e6, 1e-4).unwrap();
        assert!((a.alpha - 1.45 * (1.0 - 1.45 * 1.45 * 0.27 / 2.0)).abs() < 1e-14);
        assert!((a.alpha - 1.0384).abs() < 1e-4);
    }

    #[test]
    fn rayleigh_warning() {
        let k = 5.9e6;
        let w0 = 1e-4;
        let limit = 1.45 * k * w0 * w0 / 2.0;
        let near = CompositeMirror::new(0.5, 1.0, 0.5 * limit, 1.45, 0.27).unwrap();
        let far = CompositeMirror::new(0.5, 1.0, 2.0 * limit, 1.45, 0.27).unwrap();
        assert!(!strain_sensitivity_alpha(&near, k, w0).unwrap().beyond_rayleigh);
        assert!(strain_sensitivity_alpha(&far, k, w0).unwrap().beyond_rayleigh);
    }

    #[test]
    fn noise_ratio_reductions() {
        for alpha in [0.3, 0.7, 1.0, 1.5] {
            let f = noise_ratio_scaled(0.0, alpha, 0.2, &q()).unwrap();
            assert!((f - 1.0).abs() < 1e-8);
        }
        for z in [0.5, 3.0, 10.0] {
            assert!((noise_ratio_scaled(z, 0.0, 0.2, &q()).unwrap() - 1.0).abs() < 1e-15);
            let nzz = fdt::correlation_n_scaled(z, z, 0.2, &q()).unwrap().value;
            assert!((noise_ratio_scaled(z, 1.0, 0.2, &q()).unwrap() - nzz).abs() < 1e-15);
        }
    }

    #[test]
    fn optimum_at_zero_depth_is_degenerate() {
        let o = optimal_alpha_scaled(0.0, 0.2, &q()).unwrap();
        assert!(o.degenerate);
        assert_eq!(o.alpha_min, 0.0);
        assert!((o.f_min - 1.0).abs() < 1e-8);
    }

    #[test]
    fn deep_optimum_approaches_analytic_limit() {
        let o = optimal_alpha_scaled(50.0, 0.2, &q()).unwrap();
        let limit: f64 = 1.0 / (1.0 + 2.2 / 5.12);
        assert!((limit - 0.6994).abs() < 1e-4);
        assert!((o.alpha_min - limit).abs() < 0.01, "{}", o.alpha_min);
    }

    #[test]
    fn transverse_hook() {
        assert_eq!(transverse_penalty(3e-4, 1e-4, 0.0).unwrap(), 0.0);
        let a = transverse_penalty(2e-4, 1e-4, 0.05).unwrap();
        let b = transverse_penalty(4e-4, 1e-4, 0.05).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-15);
        assert_eq!(transverse_penalty(1e-4, 1e-4, 0.05).unwrap(), 0.05);
        assert!(transverse_penalty(1e-4, 1e-4, -1.0).is_err());
        assert!(transverse_penalty(1e-4, 1e-4, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn slope_matches_finite_difference(phi in 0.0f64..(2.0 * PI), idx in 0usize..4) {
            let r0 = [0.0, 0.25, 0.81, 0.99][idx];
            let h = 1e-6;
            let p = gt_reflection(r0, 1.0, phi + h).unwrap();
            let m = gt_reflection(r0, 1.0, phi - h).unwrap();
            let fd = (p / m).arg() / (2.0 * h);
            let an = gamma_slope(r0, 1.0, phi).unwrap();
            prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "{} vs {}", fd, an);
        }

        #[test]
        fn modulus_bounded(r0 in 0.0f64..0.999, r2 in 0.0f64..=1.0, phi in -10.0f64..10.0) {
            prop_assert!(gt_reflection(r0, r2, phi).unwrap().norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn alpha_is_periodic(x in 0.5f64..2.0, r0 in 0.0f64..0.95) {
            let m = CompositeMirror::new(r0, 1.0, 1e-3, 1.45, 0.27).unwrap();
            let k = 5.9e6 * x;
            let a = strain_sensitivity_alpha(&m, k, 1e-4).unwrap().alpha;
            let b = strain_sensitivity_alpha(&m, k + m.alpha_period(), 1e-4).unwrap().alpha;
            prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "{} vs {}", a, b);
        }
    }
}
