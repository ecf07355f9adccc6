//! Thermally driven phase noise of interferometer mirrors and two ways of
//! compensating it.
//!
//! The crate covers two regimes:
//!
//! * **Single eigenmode** ([`compensation`]): a multilayer coating with an
//!   embedded Fabry–Perot layer converts the strain that accompanies surface
//!   motion into a reflection phase `δβ` that can cancel the piston phase
//!   `δθ = −2kq₀` at "magic" wavevectors. Reflectance is computed with the
//!   characteristic-matrix method in [`tmm`].
//! * **Quasi-static** ([`fdt`], [`composite`]): correlations of beam-averaged
//!   axial displacements at two depths of an elastic half space, and the
//!   residual phase noise of a mirror with a second reflector embedded in the
//!   substrate.
//!
//! Everything here is pure computation on `alloc` types; configuration files,
//! the CLI and plotting live in the `thermophase` companion crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod compensation;
pub mod composite;
pub mod error;
pub mod fdt;
pub mod materials;
pub mod model;
pub mod quad;
pub mod roots;
pub mod tmm;

pub use error::{Error, Result};
pub use model::{BeamSubstrate, CoatingStack, EigenmodeSpec, FpStackDesign, Layer, Material};
pub use tmm::StrainModel;

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Default reference vacuum wavelength (m) used when a configuration does not
/// name one.
pub const DEFAULT_REFERENCE_WAVELENGTH: f64 = 1.064e-6;

/// Vacuum wavevector `2π/λ` for a wavelength in meters.
pub fn wavevector(wavelength: f64) -> f64 {
    2.0 * core::f64::consts::PI / wavelength
}
