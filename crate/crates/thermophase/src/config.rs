//! JSON configuration: materials, coating designs, the beam and mechanical
//! eigenmodes.
//!
//! ```json
//! {
//!   "materials": [{"name": "SiO2", "n": 1.45, "p12": 0.27}],
//!   "stacks": [{"name": "fp-j16", "p": 33, "l": 8, "j": 16, "eta_fp_over_pi": 1.0,
//!               "low": "SiO2", "high": "Ta2O5", "substrate": "sapphire"}],
//!   "beam": {"w0_m": 1e-4, "substrate": "fused-silica", "temperature_K": 300.0},
//!   "modes": [{"name": "drum", "omega0_rad_s": 1.39e7, "M0_kg": 7.6e-5, "zeta_per_m": -1600.0}],
//!   "reference_wavelength_m": 1.064e-6
//! }
//! ```
//!
//! Only declared materials can be referenced (`vacuum` is always
//! available). A declared material whose name matches a built-in entry
//! inherits the built-in value of every constant it leaves out.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thermophase_core::model::build_stack;
use thermophase_core::{
    materials, wavevector, BeamSubstrate, CoatingStack, EigenmodeSpec, FpStackDesign, Material,
    DEFAULT_REFERENCE_WAVELENGTH,
};

/// The example configuration shipped with the binary.
pub const BUNDLED: &str = include_str!("../data/example.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub materials: Vec<MaterialEntry>,
    #[serde(default)]
    pub stacks: Vec<StackEntry>,
    pub beam: BeamEntry,
    #[serde(default)]
    pub modes: Vec<ModeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_wavelength_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialEntry {
    pub name: String,
    pub n: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p12: Option<f64>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub young_modulus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackEntry {
    pub name: String,
    pub p: u32,
    pub l: u32,
    pub j: u32,
    pub eta_fp_over_pi: f64,
    pub low: String,
    pub high: String,
    pub substrate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamEntry {
    pub w0_m: f64,
    pub substrate: String,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub name: String,
    pub omega0_rad_s: f64,
    #[serde(rename = "M0_kg")]
    pub m0_kg: f64,
    pub zeta_per_m: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: unknown material `{name}`")]
    UnresolvedMaterial { path: String, name: String },
    #[error("{path}: duplicate name `{name}`")]
    Duplicate { path: String, name: String },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        source: thermophase_core::Error,
    },
    #[error("no {kind} named `{name}` in the configuration")]
    UnknownName { kind: &'static str, name: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedStack {
    pub name: String,
    pub design: FpStackDesign,
    pub stack: CoatingStack,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedMode {
    pub name: String,
    pub mode: EigenmodeSpec,
}

/// A validated configuration with every reference resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub source: ConfigFile,
    /// Reference vacuum wavevector, 1/m.
    pub k0: f64,
    pub materials: Vec<Arc<Material>>,
    pub stacks: Vec<NamedStack>,
    pub beam: BeamSubstrate,
    pub modes: Vec<NamedMode>,
}

/// Maps a core parameter name onto the config key that carries it.
fn config_key(name: &str) -> &str {
    match name {
        "eta_fp" => "eta_fp_over_pi",
        "omega0" => "omega0_rad_s",
        "M0" => "M0_kg",
        "zeta" => "zeta_per_m",
        "w0" => "w0_m",
        "temperature" => "temperature_K",
        other => other,
    }
}

fn invalid_at(prefix: &str, err: thermophase_core::Error) -> ConfigError {
    let path = match &err {
        thermophase_core::Error::InvalidParameter { name, .. } => {
            format!("{prefix}.{}", config_key(name))
        }
        _ => prefix.to_string(),
    };
    ConfigError::Invalid { path, source: err }
}

fn resolve_material(entry: &MaterialEntry) -> Material {
    let base = materials::lookup(&entry.name);
    let inherit = |own: Option<f64>, f: fn(&Material) -> Option<f64>| own.or(base.as_ref().and_then(f));
    Material {
        name: entry.name.clone(),
        n: entry.n,
        p12: inherit(entry.p12, |m| Some(m.p12)).unwrap_or(0.0),
        young_modulus: inherit(entry.young_modulus, |m| m.young_modulus),
        poisson_ratio: inherit(entry.sigma, |m| m.poisson_ratio),
        loss_angle: inherit(entry.phi_s, |m| m.loss_angle),
        density: inherit(entry.density, |m| m.density),
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::Schema {
                path: if path == "." { "<root>".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Config::resolve(ConfigFile::parse(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Config::from_json(&text)
    }

    pub fn bundled() -> Self {
        Config::from_json(BUNDLED).expect("bundled configuration is valid")
    }

    pub fn to_json(&self) -> String {
        self.source.to_json()
    }

    pub fn resolve(source: ConfigFile) -> Result<Self, ConfigError> {
        let wavelength = source
            .reference_wavelength_m
            .unwrap_or(DEFAULT_REFERENCE_WAVELENGTH);
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(ConfigError::Schema {
                path: "reference_wavelength_m".into(),
                message: format!("must be > 0, got {wavelength}"),
            });
        }
        let k0 = wavevector(wavelength);

        let mut by_name: BTreeMap<String, Arc<Material>> = BTreeMap::new();
        by_name.insert("vacuum".into(), Arc::new(Material::vacuum()));
        let mut declared = Vec::with_capacity(source.materials.len());
        for (i, entry) in source.materials.iter().enumerate() {
            let path = format!("materials[{i}]");
            if declared.iter().any(|m: &Arc<Material>| m.name == entry.name) {
                return Err(ConfigError::Duplicate {
                    path: format!("{path}.name"),
                    name: entry.name.clone(),
                });
            }
            let m = resolve_material(entry);
            m.validate().map_err(|e| invalid_at(&path, e))?;
            let m = Arc::new(m);
            by_name.insert(m.name.clone(), m.clone());
            declared.push(m);
        }
        let lookup = |path: String, name: &str| {
            by_name
                .get(name)
                .cloned()
                .ok_or_else(|| ConfigError::UnresolvedMaterial {
                    path,
                    name: name.to_string(),
                })
        };

        let mut stacks: Vec<NamedStack> = Vec::with_capacity(source.stacks.len());
        for (i, s) in source.stacks.iter().enumerate() {
            let path = format!("stacks[{i}]");
            if stacks.iter().any(|t| t.name == s.name) {
                return Err(ConfigError::Duplicate {
                    path: format!("{path}.name"),
                    name: s.name.clone(),
                });
            }
            let low = lookup(format!("{path}.low"), &s.low)?;
            let high = lookup(format!("{path}.high"), &s.high)?;
            let substrate = lookup(format!("{path}.substrate"), &s.substrate)?;
            let design = FpStackDesign {
                pairs: s.p,
                front_pairs: s.l,
                mode_order: s.j,
                eta_fp: s.eta_fp_over_pi * PI,
            };
            let mut stack =
                build_stack(&design, low, high, substrate, k0).map_err(|e| invalid_at(&path, e))?;
            if let Some(name) = &s.ambient {
                stack.ambient = lookup(format!("{path}.ambient"), name)?;
            }
            stacks.push(NamedStack {
                name: s.name.clone(),
                design,
                stack,
            });
        }

        let b = &source.beam;
        let substrate = lookup("beam.substrate".into(), &b.substrate)?;
        let beam = BeamSubstrate::new(b.w0_m, substrate, b.temperature_k)
            .map_err(|e| invalid_at("beam", e))?;

        let mut modes: Vec<NamedMode> = Vec::with_capacity(source.modes.len());
        for (i, m) in source.modes.iter().enumerate() {
            let path = format!("modes[{i}]");
            if modes.iter().any(|t| t.name == m.name) {
                return Err(ConfigError::Duplicate {
                    path: format!("{path}.name"),
                    name: m.name.clone(),
                });
            }
            let mode = EigenmodeSpec::new(m.omega0_rad_s, m.m0_kg, m.zeta_per_m)
                .map_err(|e| invalid_at(&path, e))?;
            modes.push(NamedMode {
                name: m.name.clone(),
                mode,
            });
        }

        Ok(Config {
            source,
            k0,
            materials: declared,
            stacks,
            beam,
            modes,
        })
    }

    pub fn stack(&self, name: &str) -> Result<&NamedStack, ConfigError> {
        self.stacks
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| ConfigError::UnknownName {
                kind: "stack",
                name: name.into(),
            })
    }

    pub fn mode(&self, name: &str) -> Result<&NamedMode, ConfigError> {
        self.modes
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| ConfigError::UnknownName {
                kind: "mode",
                name: name.into(),
            })
    }

    pub fn material(&self, name: &str) -> Result<&Arc<Material>, ConfigError> {
        self.materials
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| ConfigError::UnknownName {
                kind: "material",
                name: name.into(),
            })
    }
}
