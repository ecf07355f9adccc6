//! Domain records: materials, layers, coating stacks, the beam/substrate
//! context and single-eigenmode parameters.
//!
//! Stacks are described by single-pass phase thickness at the reference
//! wavevector `k0`; physical thickness is derived as `η₀/(n·k0)`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Optical and elastic constants of one homogeneous medium.
///
/// Elastic constants are optional because coating layers only need `n` and
/// `p12`; operations that need the rest report [`Error::MissingConstant`].
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Refractive index.
    pub n: f64,
    /// Strain-optic coefficient `p12`.
    pub p12: f64,
    /// Young's modulus, Pa.
    pub young_modulus: Option<f64>,
    pub poisson_ratio: Option<f64>,
    /// Mechanical loss angle `φ_s`.
    pub loss_angle: Option<f64>,
    /// kg/m³
    pub density: Option<f64>,
}

impl Material {
    pub fn new(name: impl Into<String>, n: f64) -> Self {
        Material {
            name: name.into(),
            n,
            p12: 0.0,
            young_modulus: None,
            poisson_ratio: None,
            loss_angle: None,
            density: None,
        }
    }

    pub fn vacuum() -> Self {
        Material::new("vacuum", 1.0)
    }

    pub fn with_p12(mut self, p12: f64) -> Self {
        self.p12 = p12;
        self
    }

    pub fn with_elastic(mut self, young_modulus: f64, poisson_ratio: f64, loss_angle: f64) -> Self {
        self.young_modulus = Some(young_modulus);
        self.poisson_ratio = Some(poisson_ratio);
        self.loss_angle = Some(loss_angle);
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = Some(density);
        self
    }

    /// Checks `n ≥ 1`, `0 ≤ σ < 0.5`, `φ_s ≥ 0`, `E > 0` and `ρ > 0` for the
    /// constants that are present.
    pub fn validate(&self) -> Result<()> {
        if !(self.n.is_finite() && self.n >= 1.0) {
            return Err(invalid("n", self.n, "refractive index must be >= 1"));
        }
        if !self.p12.is_finite() {
            return Err(invalid("p12", self.p12, "must be finite"));
        }
        if let Some(s) = self.poisson_ratio {
            if !(0.0..0.5).contains(&s) {
                return Err(invalid("sigma", s, "Poisson ratio must lie in [0, 0.5)"));
            }
        }
        if let Some(phi) = self.loss_angle {
            if !(phi.is_finite() && phi >= 0.0) {
                return Err(invalid("phi_s", phi, "loss angle must be >= 0"));
            }
        }
        if let Some(e) = self.young_modulus {
            if !(e.is_finite() && e > 0.0) {
                return Err(invalid("E", e, "Young's modulus must be > 0"));
            }
        }
        if let Some(rho) = self.density {
            if !(rho.is_finite() && rho > 0.0) {
                return Err(invalid("density", rho, "density must be > 0"));
            }
        }
        Ok(())
    }

    pub(crate) fn require(&self, value: Option<f64>, constant: &'static str) -> Result<f64> {
        value.ok_or_else(|| Error::MissingConstant {
            material: self.name.clone(),
            constant,
        })
    }
}

/// One homogeneous film, described by its single-pass phase at `k0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub material: Arc<Material>,
    pub eta0: f64,
}

impl Layer {
    pub fn new(material: Arc<Material>, eta0: f64) -> Result<Self> {
        if !(eta0.is_finite() && eta0 > 0.0) {
            return Err(invalid("eta0", eta0, "layer phase thickness must be > 0"));
        }
        Ok(Layer { material, eta0 })
    }

    /// Physical thickness `η₀/(n·k0)` in meters.
    pub fn thickness(&self, k0: f64) -> f64 {
        self.eta0 / (self.material.n * k0)
    }
}

/// Layers between an ambient medium and a semi-infinite substrate; the first
/// layer faces the ambient side.
#[derive(Debug, Clone, PartialEq)]
pub struct CoatingStack {
    pub ambient: Arc<Material>,
    pub layers: Vec<Layer>,
    pub substrate: Arc<Material>,
    /// Reference vacuum wavevector, 1/m.
    pub k0: f64,
}

impl CoatingStack {
    pub fn new(
        ambient: Arc<Material>,
        layers: Vec<Layer>,
        substrate: Arc<Material>,
        k0: f64,
    ) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(invalid("k0", k0, "reference wavevector must be > 0"));
        }
        Ok(CoatingStack {
            ambient,
            layers,
            substrate,
            k0,
        })
    }

    /// Bare interface between vacuum and `substrate`.
    pub fn bare(substrate: Arc<Material>, k0: f64) -> Result<Self> {
        CoatingStack::new(Arc::new(Material::vacuum()), Vec::new(), substrate, k0)
    }

    /// Total physical thickness of the coating, m.
    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness(self.k0)).sum()
    }

    /// Whether the coating is thin compared to the beam (`d ≤ w0/10`), the
    /// regime in which coating strain equals substrate surface strain.
    pub fn is_thin_for(&self, w0: f64) -> bool {
        self.total_thickness() <= 0.1 * w0
    }
}

/// Parameters of the embedded Fabry–Perot coating
/// `n0 (LH)^l L (j·η_FP) (LH)^(p−l) n_s`, with `L`/`H` quarter-wave layers
/// of the low/high index material at `k0` and the resonant layer made of
/// the low index material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpStackDesign {
    /// Total number of `(LH)` pairs, `p`.
    pub pairs: u32,
    /// Pairs in front of the resonant layer, `l`.
    pub front_pairs: u32,
    /// Mode order `j` of the resonant layer.
    pub mode_order: u32,
    /// Single-pass phase `η_FP` at `k0`, radians.
    pub eta_fp: f64,
}

impl FpStackDesign {
    pub fn layer_count(&self) -> usize {
        2 * self.pairs as usize + 2
    }

    /// Index of the resonant layer, counted from the ambient side.
    pub fn resonant_layer_index(&self) -> usize {
        2 * self.front_pairs as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.front_pairs > self.pairs {
            return Err(invalid(
                "l",
                f64::from(self.front_pairs),
                "front pair count exceeds total pair count p",
            ));
        }
        if self.mode_order == 0 {
            return Err(invalid("j", 0.0, "mode order must be >= 1"));
        }
        if !(self.eta_fp.is_finite() && self.eta_fp > 0.0) {
            return Err(invalid("eta_fp", self.eta_fp, "must be > 0"));
        }
        Ok(())
    }
}

/// Builds the embedded Fabry–Perot coating described by `design`, with a
/// vacuum ambient.
pub fn build_stack(
    design: &FpStackDesign,
    low: Arc<Material>,
    high: Arc<Material>,
    substrate: Arc<Material>,
    k0: f64,
) -> Result<CoatingStack> {
    design.validate()?;
    let pair = |layers: &mut Vec<Layer>| -> Result<()> {
        layers.push(Layer::new(low.clone(), FRAC_PI_2)?);
        layers.push(Layer::new(high.clone(), FRAC_PI_2)?);
        Ok(())
    };
    let mut layers = Vec::with_capacity(design.layer_count());
    for _ in 0..design.front_pairs {
        pair(&mut layers)?;
    }
    layers.push(Layer::new(low.clone(), FRAC_PI_2)?);
    layers.push(Layer::new(
        low.clone(),
        f64::from(design.mode_order) * design.eta_fp,
    )?);
    for _ in design.front_pairs..design.pairs {
        pair(&mut layers)?;
    }
    CoatingStack::new(Arc::new(Material::vacuum()), layers, substrate, k0)
}

/// Beam radius and substrate: the context of every quasi-static noise
/// quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSubstrate {
    /// 1/e² intensity radius, m.
    pub w0: f64,
    pub substrate: Arc<Material>,
    /// Kelvin.
    pub temperature: f64,
    sigma: f64,
}

impl BeamSubstrate {
    /// The substrate must carry a Poisson ratio; every correlation function
    /// depends on it.
    pub fn new(w0: f64, substrate: Arc<Material>, temperature: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 > 0.0) {
            return Err(invalid("w0", w0, "beam radius must be > 0"));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(invalid("temperature", temperature, "must be > 0"));
        }
        substrate.validate()?;
        let sigma = substrate.require(substrate.poisson_ratio, "Poisson ratio")?;
        Ok(BeamSubstrate {
            w0,
            substrate,
            temperature,
            sigma,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Same beam with the substrate's Poisson ratio replaced.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        let mut material = (*self.substrate).clone();
        material.poisson_ratio = Some(sigma);
        BeamSubstrate::new(self.w0, Arc::new(material), self.temperature)
    }
}

/// A single mechanical eigenmode, as produced by an external finite-element
/// analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenmodeSpec {
    /// Angular eigenfrequency, rad/s.
    pub omega0: f64,
    /// Effective mass, kg.
    pub effective_mass: f64,
    /// Axial strain per unit surface displacement `ε_zz/u_z`, 1/m.
    pub zeta: f64,
}

impl EigenmodeSpec {
    pub fn new(omega0: f64, effective_mass: f64, zeta: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(invalid("omega0", omega0, "must be > 0"));
        }
        if !(effective_mass.is_finite() && effective_mass > 0.0) {
            return Err(invalid("M0", effective_mass, "must be > 0"));
        }
        if !zeta.is_finite() {
            return Err(invalid("zeta", zeta, "must be finite"));
        }
        Ok(EigenmodeSpec {
            omega0,
            effective_mass,
            zeta,
        })
    }
}

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn mats() -> (Arc<Material>, Arc<Material>, Arc<Material>) {
        (
            Arc::new(materials::silica()),
            Arc::new(materials::tantala()),
            Arc::new(materials::sapphire()),
        )
    }

    fn design(p: u32, l: u32, j: u32, eta_fp: f64) -> FpStackDesign {
        FpStackDesign {
            pairs: p,
            front_pairs: l,
            mode_order: j,
            eta_fp,
        }
    }

    #[test]
    fn fig2_stack_has_68_layers_and_16pi_cavity() {
        let (lo, hi, sub) = mats();
        let d = design(33, 8, 16, PI);
        let stack = build_stack(&d, lo.clone(), hi, sub, 1.0e7).unwrap();
        assert_eq!(stack.layers.len(), 68);
        let fp = &stack.layers[d.resonant_layer_index()];
        assert_eq!(fp.eta0, 16.0 * PI);
        assert_eq!(fp.material.name, lo.name);
        assert_eq!(stack.layers[d.resonant_layer_index() - 1].eta0, FRAC_PI_2);
        assert_eq!(stack.ambient.n, 1.0);
    }

    #[test]
    fn mirror_a_stack() {
        let (lo, hi, sub) = mats();
        let d = design(33, 7, 8, 0.9995 * PI);
        let stack = build_stack(&d, lo, hi, sub, 1.0e7).unwrap();
        assert_eq!(stack.layers.len(), 68);
        assert_eq!(stack.layers[15].eta0, 8.0 * 0.9995 * PI);
    }

    #[test]
    fn smallest_stack_is_quarter_plus_half_wave() {
        let (lo, hi, sub) = mats();
        let stack = build_stack(&design(0, 0, 1, PI), lo, hi, sub, 1.0e7).unwrap();
        assert_eq!(stack.layers.len(), 2);
        assert_eq!(stack.layers[0].eta0, FRAC_PI_2);
        assert_eq!(stack.layers[1].eta0, PI);
        assert!(stack.layers.iter().all(|l| l.material.name == "SiO2"));
    }

    #[test]
    fn build_stack_rejects_bad_designs() {
        let (lo, hi, sub) = mats();
        for d in [design(3, 4, 1, PI), design(3, 1, 0, PI), design(3, 1, 1, 0.0)] {
            assert!(build_stack(&d, lo.clone(), hi.clone(), sub.clone(), 1.0e7).is_err());
        }
    }

    #[test]
    fn material_bounds() {
        let bad = Material::new("x", 1.5).with_elastic(1e9, 0.6, 0.0);
        match bad.validate() {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "sigma"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Material::new("x", 0.9).validate().is_err());
        assert!(Material::vacuum().validate().is_ok());
    }

    #[test]
    fn beam_requires_poisson_ratio() {
        let m = Arc::new(Material::new("glass", 1.5));
        assert!(matches!(
            BeamSubstrate::new(1e-4, m, 300.0),
            Err(Error::MissingConstant { .. })
        ));
        let (_, _, sub) = mats();
        assert!(BeamSubstrate::new(0.0, sub.clone(), 300.0).is_err());
        assert!(BeamSubstrate::new(1e-4, sub.clone(), -1.0).is_err());
        let b = BeamSubstrate::new(1e-4, sub, 300.0).unwrap().with_sigma(0.2).unwrap();
        assert_eq!(b.sigma(), 0.2);
    }

    #[test]
    fn physical_thickness_from_phase() {
        let (lo, _, _) = mats();
        let k0 = crate::wavevector(1.064e-6);
        let layer = Layer::new(lo, FRAC_PI_2).unwrap();
        let quarter = 1.064e-6 / (4.0 * 1.45);
        assert!((layer.thickness(k0) - quarter).abs() < 1e-18);
    }

    proptest! {
        #[test]
        fn layer_count_is_2p_plus_2(p in 0u32..60, l_frac in 0.0f64..=1.0, j in 1u32..32) {
            let (lo, hi, sub) = mats();
            let l = (f64::from(p) * l_frac).floor() as u32;
            let d = design(p, l, j, PI);
            let stack = build_stack(&d, lo, hi.clone(), sub, 1.0e7).unwrap();
            prop_assert_eq!(stack.layers.len(), 2 * p as usize + 2);
            let before = stack.layers[..d.resonant_layer_index()]
                .iter().filter(|x| x.material.name == hi.name).count();
            let after = stack.layers[d.resonant_layer_index() + 1..]
                .iter().filter(|x| x.material.name == hi.name).count();
            prop_assert_eq!(before as u32, l);
            prop_assert_eq!((before + after) as u32, p);
        }
    }
}
