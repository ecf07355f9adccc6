//! Quasi-static thermal displacement statistics of an elastic half space
//! probed by a Gaussian beam.
//!
//! The beam-averaged axial displacement `q̃(z)` at depth `z` has spectral
//! correlation `⟨q̃(z₂)q̃(z₁)⟩ = ⟨q̃₀q̃₀⟩·N(z₂, z₁)`, with
//!
//! ```text
//! N(z₂,z₁) = w₀ / (8√π (1−σ)²) ∫₀^∞ dk e^{−k²w₀²/4} f(z₂,z₁;k)
//! ```
//!
//! Substituting `u = k·w₀/2` turns the weight into `e^{−u²}`; the integral
//! is truncated at `u_max` and evaluated with adaptive Gauss–Kronrod. `N`
//! depends on depths only through `z/w₀`, so all internal work is in units
//! of `w₀`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::BeamSubstrate;
use crate::quad::{self, Estimate};
use crate::BOLTZMANN;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Cutoff of `u = k·w₀/2`; `e^{−u_max²}` must be negligible.
    pub u_max: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-9,
            u_max: 10.0,
            max_panels: 400,
        }
    }
}

/// A correlation value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub value: f64,
    pub est_error: f64,
}

/// Kernel `f(z₂,z₁;k)` of the displacement correlation.
pub fn kernel_f(z1: f64, z2: f64, k: f64, sigma: f64) -> f64 {
    let zm = (z1 - z2).abs();
    let zp = z1 + z2;
    let a = 3.0 - 4.0 * sigma;
    libm::exp(-k * zm) * (a + k * zm)
        + libm::exp(-k * zp)
            * (5.0 - 12.0 * sigma + 8.0 * sigma * sigma + k * a * zp + 2.0 * k * k * z1 * z2)
}

fn prefactor(sigma: f64) -> f64 {
    1.0 / (4.0 * libm::sqrt(PI) * (1.0 - sigma) * (1.0 - sigma))
}

fn check_depth(name: &'static str, z: f64) -> Result<()> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::InvalidParameter {
            name,
            value: z,
            reason: "depth must be >= 0",
        });
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..0.5).contains(&sigma) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "Poisson ratio must lie in [0, 0.5)",
        });
    }
    Ok(())
}

/// `prefactor · ∫₀^{u_max} e^{−u²} g(2u) du` for a kernel combination `g`
/// expressed in units of `w₀`.
fn weighted_integral<G: Fn(f64) -> f64>(
    g: G,
    sigma: f64,
    q: &QuadratureSettings,
    abs_tol: f64,
) -> Result<Estimate> {
    let c = prefactor(sigma);
    let est = quad::integrate(
        |u| libm::exp(-u * u) * g(2.0 * u),
        0.0,
        q.u_max,
        q.rel_tol,
        abs_tol / c,
        q.max_panels,
    )?;
    Ok(Estimate {
        value: c * est.value,
        error: c * est.error,
    })
}

/// `N(z₁, z₂)` with depths given in units of `w₀`.
pub fn correlation_n_scaled(
    z1: f64,
    z2: f64,
    sigma: f64,
    q: &QuadratureSettings,
) -> Result<CorrelationResult> {
    check_depth("z1", z1)?;
    check_depth("z2", z2)?;
    check_sigma(sigma)?;
    let est = weighted_integral(|k| kernel_f(z1, z2, k, sigma), sigma, q, 0.0)?;
    Ok(CorrelationResult {
        value: est.value,
        est_error: est.error,
    })
}

/// `N(z₁, z₂)` for depths in meters.
pub fn correlation_n(
    z1: f64,
    z2: f64,
    beam: &BeamSubstrate,
    q: &QuadratureSettings,
) -> Result<CorrelationResult> {
    correlation_n_scaled(z1 / beam.w0, z2 / beam.w0, beam.sigma(), q)
}

/// Surface displacement spectral density
/// `⟨q̃₀q̃₀⟩_ω = 2k_BT(1−σ²)φ_s / (π^{3/2} w₀ E ω)`, in m²/(rad/s).
pub fn surface_psd(omega: f64, beam: &BeamSubstrate) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "angular frequency must be > 0",
        });
    }
    let m = &beam.substrate;
    let e = m.require(m.young_modulus, "Young's modulus")?;
    let phi = m.require(m.loss_angle, "loss angle")?;
    let sigma = beam.sigma();
    Ok(2.0 * BOLTZMANN * beam.temperature * (1.0 - sigma * sigma) * phi
        / (PI * libm::sqrt(PI) * beam.w0 * e * omega))
}

/// `C(z₁,z₂) = N(z₁,z₂)/√(N(z₁,z₁)·N(z₂,z₂))`, depths in units of `w₀`.
pub fn normalized_correlation_c_scaled(
    z1: f64,
    z2: f64,
    sigma: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    let n12 = correlation_n_scaled(z1, z2, sigma, q)?.value;
    let n11 = correlation_n_scaled(z1, z1, sigma, q)?.value;
    let n22 = correlation_n_scaled(z2, z2, sigma, q)?.value;
    Ok(n12 / libm::sqrt(n11 * n22))
}

/// Normalized displacement correlation for depths in meters.
pub fn normalized_correlation_c(
    z1: f64,
    z2: f64,
    beam: &BeamSubstrate,
    q: &QuadratureSettings,
) -> Result<f64> {
    normalized_correlation_c_scaled(z1 / beam.w0, z2 / beam.w0, beam.sigma(), q)
}

/// Largest slice thickness, in units of `w₀`, accepted by the strain ratio.
pub const MAX_SLICE: f64 = 1e-2;

/// Coherent and total axial strain, in units of `⟨q̃₀q̃₀⟩^{1/2}/w₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainCorrelation {
    pub coherent: f64,
    pub total: f64,
    /// `Q = coherent/total`.
    pub ratio: f64,
}

/// Ratio `Q(z₁; z₂, Δz₂)` of the strain in the slice `[z₂, z₂+Δz₂]` that is
/// correlated with `q̃(z₁)` to the total strain in that slice, all lengths in
/// units of `w₀`.
///
/// Strains are forward differences over the slice. Both differences are
/// integrated as single difference kernels so the subtraction happens
/// inside the integrand rather than between two rounded integrals.
pub fn strain_correlation_scaled(
    z1: f64,
    z2: f64,
    dz2: f64,
    sigma: f64,
    q: &QuadratureSettings,
) -> Result<StrainCorrelation> {
    check_depth("z1", z1)?;
    check_depth("z2", z2)?;
    check_sigma(sigma)?;
    if !(dz2 > 0.0 && dz2 <= MAX_SLICE) {
        return Err(Error::InvalidParameter {
            name: "dz2",
            value: dz2,
            reason: "slice must satisfy 0 < dz2 <= 1e-2 w0",
        });
    }
    let z3 = z2 + dz2;
    let n11 = correlation_n_scaled(z1, z1, sigma, q)?.value;
    let n22 = correlation_n_scaled(z2, z2, sigma, q)?.value;
    // Difference integrands cannot be resolved below the rounding of their
    // terms, so both integrals are only asked for down to that floor; a
    // vanishing slice then shows up as a radicand buried in its own error.
    let radicand_floor = 8.0 * f64::EPSILON * n22;
    let cross = weighted_integral(
        |k| kernel_f(z1, z3, k, sigma) - kernel_f(z1, z2, k, sigma),
        sigma,
        q,
        8.0 * f64::EPSILON * libm::sqrt(n11 * n22),
    )?;
    let radicand = weighted_integral(
        |k| {
            kernel_f(z3, z3, k, sigma) - 2.0 * kernel_f(z2, z3, k, sigma)
                + kernel_f(z2, z2, k, sigma)
        },
        sigma,
        q,
        radicand_floor,
    )?;
    if radicand.value < 1e3 * radicand.error {
        return Err(Error::CatastrophicCancellation {
            radicand: radicand.value,
            error: radicand.error,
        });
    }
    let coherent = cross.value / (dz2 * libm::sqrt(n11));
    let total = libm::sqrt(radicand.value) / dz2;
    Ok(StrainCorrelation {
        coherent,
        total,
        ratio: coherent / total,
    })
}

/// `Q(z₁; z₂, Δz₂)` for lengths in meters.
pub fn strain_correlation_q(
    z1: f64,
    z2: f64,
    dz2: f64,
    beam: &BeamSubstrate,
    q: &QuadratureSettings,
) -> Result<f64> {
    let w = beam.w0;
    Ok(strain_correlation_scaled(z1 / w, z2 / w, dz2 / w, beam.sigma(), q)?.ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials;
    use crate::model::Material;
    use alloc::sync::Arc;
    use proptest::prelude::*;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn n(z1: f64, z2: f64, s: f64) -> f64 {
        correlation_n_scaled(z1, z2, s, &q()).unwrap().value
    }

    #[test]
    fn kernel_at_surface() {
        for k in [0.0, 0.3, 7.0] {
            let f = kernel_f(0.0, 0.0, k, 0.2);
            assert!((f - 5.12).abs() < 1e-14);
            assert!((f - 8.0 * 0.8 * 0.8).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_deep_limit() {
        let f = kernel_f(40.0, 40.0, 10.0, 0.2);
        assert!((f - 2.2).abs() < 1e-12);
    }

    #[test]
    fn n_at_origin_is_one() {
        for s in [0.0, 0.17, 0.2, 0.3, 0.45] {
            let r = correlation_n_scaled(0.0, 0.0, s, &q()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "sigma {s}: {}", r.value);
            assert!(r.est_error <= 1e-9 * r.value);
        }
    }

    #[test]
    fn n_deep_diagonal_limit() {
        let limit: f64 = 2.2 / (8.0 * 0.64);
        assert!((limit - 0.42969).abs() < 1e-5);
        let v = n(50.0, 50.0, 0.2);
        assert!((v - limit).abs() < 0.02 * limit, "{v}");
    }

    #[test]
    fn correlation_c_bounds_and_far_value() {
        for z in [0.0, 1.0, 3.0, 10.0] {
            let c = normalized_correlation_c_scaled(z, z, 0.2, &q()).unwrap();
            assert!((c - 1.0).abs() < 1e-8);
        }
        // Large-separation estimate N(0,z) ≈ (1/√π z)(1 + 1/(2(1−σ))).
        let c = normalized_correlation_c_scaled(0.0, 10.0, 0.2, &q()).unwrap();
        let estimate = (1.0 / (libm::sqrt(PI) * 10.0)) * (1.0 + 1.0 / 1.6) / n(10.0, 10.0, 0.2).sqrt();
        assert!((c - estimate).abs() < 0.01, "{c} vs {estimate}");
        assert!((c - 0.133_526_948_6).abs() < 1e-8, "{c}");
    }

    #[test]
    fn meters_match_scaled_units() {
        let sub = Arc::new(materials::silica());
        let beam = BeamSubstrate::new(2.5e-4, sub, 300.0).unwrap();
        let a = correlation_n(2.5e-4, 5e-4, &beam, &q()).unwrap().value;
        let b = n(1.0, 2.0, beam.sigma());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn surface_strain_anticorrelates() {
        for dz in [1e-3, 1e-4] {
            let s = strain_correlation_scaled(0.0, 0.0, dz, 0.2, &q()).unwrap();
            assert!(s.ratio < 0.0);
            assert!(s.ratio.abs() <= 1.0);
        }
    }

    #[test]
    fn slice_bound_enforced() {
        assert!(strain_correlation_scaled(0.0, 0.0, 0.05, 0.2, &q()).is_err());
        assert!(strain_correlation_scaled(0.0, 0.0, 0.0, 0.2, &q()).is_err());
    }

    #[test]
    fn cancellation_is_flagged() {
        let coarse = QuadratureSettings {
            rel_tol: 1e-2,
            ..QuadratureSettings::default()
        };
        let r = strain_correlation_scaled(0.0, 0.0, 1e-14, 0.2, &coarse);
        assert!(matches!(r, Err(Error::CatastrophicCancellation { .. })), "{r:?}");
        let r = strain_correlation_scaled(1.0, 2.0, 1e-13, 0.2, &QuadratureSettings::default());
        assert!(matches!(r, Err(Error::CatastrophicCancellation { .. })), "{r:?}");
    }

    #[test]
    fn psd_scaling() {
        let sub = Arc::new(materials::silica());
        let beam = BeamSubstrate::new(1e-4, sub, 300.0).unwrap();
        let a = surface_psd(100.0, &beam).unwrap();
        let b = surface_psd(200.0, &beam).unwrap();
        assert_eq!(a, 2.0 * b);
        let lossless = Arc::new(Material::new("x", 1.45).with_elastic(72e9, 0.17, 0.0));
        let beam = BeamSubstrate::new(1e-4, lossless, 300.0).unwrap();
        assert_eq!(surface_psd(100.0, &beam).unwrap(), 0.0);
        let no_e = Arc::new({
            let mut m = Material::new("x", 1.45);
            m.poisson_ratio = Some(0.2);
            m
        });
        let beam = BeamSubstrate::new(1e-4, no_e, 300.0).unwrap();
        assert!(matches!(surface_psd(1.0, &beam), Err(Error::MissingConstant { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetric_and_bounded(z1 in 0.0f64..5.0, z2 in 0.0f64..5.0, s in 0.0f64..0.49) {
            let a = n(z1, z2, s);
            let b = n(z2, z1, s);
            prop_assert!((a - b).abs() < 1e-8);
            let c = a / (n(z1, z1, s) * n(z2, z2, s)).sqrt();
            prop_assert!(c.abs() <= 1.0 + 1e-8);
        }

        #[test]
        fn scale_invariant(z1 in 0.0f64..4.0, z2 in 0.0f64..4.0, w in 1e-5f64..1e-2) {
            let mut m = materials::silica();
            m.poisson_ratio = Some(0.2);
            let beam = BeamSubstrate::new(w, Arc::new(m), 300.0).unwrap();
            let a = correlation_n(z1 * w, z2 * w, &beam, &q()).unwrap().value;
            prop_assert!((a - n(z1, z2, 0.2)).abs() < 1e-9);
        }
    }
}
