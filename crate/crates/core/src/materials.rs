//! Built-in material constants.
//!
//! Indices of the coating materials are the values used for the embedded
//! Fabry–Perot designs. Every other number here (strain-optic coefficients,
//! elastic constants, loss angles, densities, the sapphire index) is an
//! external literature constant, not a property of the designs themselves;
//! all of them can be overridden from a configuration file.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::Material;

/// Fused silica, `n = 1.45`.
///
/// External constants: p12 = 0.27, E = 72 GPa, σ = 0.17, φ = 1e-6,
/// ρ = 2200 kg/m³.
pub fn silica() -> Material {
    Material::new("SiO2", 1.45)
        .with_p12(0.27)
        .with_elastic(72.0e9, 0.17, 1.0e-6)
        .with_density(2200.0)
}

/// Amorphous tantala, `n = 2.03`.
///
/// External constants: p12 = 0.09 (rough estimate; the photoelastic response
/// of sputtered tantala is poorly characterized), E = 140 GPa, σ = 0.23,
/// φ = 4e-4, ρ = 8200 kg/m³.
pub fn tantala() -> Material {
    Material::new("Ta2O5", 2.03)
        .with_p12(0.09)
        .with_elastic(140.0e9, 0.23, 4.0e-4)
        .with_density(8200.0)
}

/// Sapphire treated as isotropic.
///
/// External constants: n = 1.75, p12 = −0.03, E = 400 GPa, σ = 0.29,
/// φ = 3e-9, ρ = 3980 kg/m³.
pub fn sapphire() -> Material {
    Material::new("sapphire", 1.75)
        .with_p12(-0.03)
        .with_elastic(400.0e9, 0.29, 3.0e-9)
        .with_density(3980.0)
}

/// All built-in materials, vacuum included.
pub fn defaults() -> Vec<Material> {
    vec![Material::vacuum(), silica(), tantala(), sapphire()]
}

/// Built-in material by name.
pub fn lookup(name: &str) -> Option<Material> {
    defaults().into_iter().find(|m| m.name == name)
}
