//! Characteristic-matrix reflectance of a lossless dielectric stack at
//! normal incidence, and its response to axial strain.
//!
//! Convention: a layer of index `n` and phase `η` has matrix
//! `[[cos η, i sin η / n], [i n sin η, cos η]]`, the stack admittance is
//! `Y = C/B` with `[B, C]ᵀ = M₁⋯M_q [1, n_s]ᵀ`, and `r = (n₀B − C)/(n₀B + C)`.
//! A bare vacuum/dielectric interface then has `Γ = arg r = π`, and adding
//! optical path behind the front surface lowers `Γ` (a mirror behind a
//! vacuum gap `η` reflects with `−e^{−2iη}`), the same sign as the piston
//! phase `−2kq₀`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{CoatingStack, Layer, Material};

/// Largest |ε| accepted by strain operations.
pub const STRAIN_LIMIT: f64 = 1.0e-2;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// 2×2 complex characteristic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicMatrix(pub [[Complex64; 2]; 2]);

impl CharacteristicMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        CharacteristicMatrix([[one, zero], [zero, one]])
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }
}

impl Mul for CharacteristicMatrix {
    type Output = CharacteristicMatrix;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CharacteristicMatrix(out)
    }
}

fn film_matrix(n: f64, eta: f64) -> CharacteristicMatrix {
    let (s, c) = libm::sincos(eta);
    let c = Complex64::new(c, 0.0);
    CharacteristicMatrix([[c, I * (s / n)], [I * (n * s), c]])
}

/// Characteristic matrix of `layer` at vacuum wavevector `k`; the phase is
/// `η = η₀·k/k0`.
pub fn layer_matrix(layer: &Layer, k: f64, k0: f64) -> CharacteristicMatrix {
    film_matrix(layer.material.n, layer.eta0 * (k / k0))
}

/// Ordered product of all layer matrices, ambient side first.
pub fn stack_matrix(stack: &CoatingStack, k: f64) -> CharacteristicMatrix {
    stack
        .layers
        .iter()
        .fold(CharacteristicMatrix::identity(), |acc, l| {
            acc * layer_matrix(l, k, stack.k0)
        })
}

/// Reflectance of a stack at one wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexReflectance {
    /// Amplitude reflectance seen from the ambient side.
    pub r: Complex64,
    /// `arg r`, in `(−π, π]` unless produced by an unwrapped scan.
    pub gamma: f64,
    /// Power transmission into the substrate.
    pub transmission: f64,
}

/// How axial strain `ε` changes a layer's single-pass phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrainModel {
    /// Thickness scales by `1 + ε`, index fixed.
    Geometric,
    /// Phase scales by `1 + ε(1 − n²p12/2)`: thickness change plus the
    /// strain-optic index change.
    #[default]
    Photoelastic,
}

impl StrainModel {
    /// Phase change per unit strain, relative to the unstrained phase.
    pub fn phase_coefficient(self, material: &Material) -> f64 {
        match self {
            StrainModel::Geometric => 1.0,
            StrainModel::Photoelastic => 1.0 - material.n * material.n * material.p12 / 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrainModel::Geometric => "geometric",
            StrainModel::Photoelastic => "photoelastic",
        }
    }
}

impl core::str::FromStr for StrainModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(StrainModel::Geometric),
            "photoelastic" => Ok(StrainModel::Photoelastic),
            _ => Err(Error::InvalidParameter {
                name: "strain model",
                value: f64::NAN,
                reason: "expected `geometric` or `photoelastic`",
            }),
        }
    }
}

/// `[B, C]` for the stack with every layer phase scaled by
/// `1 + eps·coefficient`.
fn admittance_vector(stack: &CoatingStack, k: f64, eps: f64, model: StrainModel) -> [Complex64; 2] {
    let x = k / stack.k0;
    let mut v = [
        Complex64::new(1.0, 0.0),
        Complex64::new(stack.substrate.n, 0.0),
    ];
    for layer in stack.layers.iter().rev() {
        let scale = if eps == 0.0 {
            1.0
        } else {
            1.0 + eps * model.phase_coefficient(&layer.material)
        };
        v = film_matrix(layer.material.n, layer.eta0 * x * scale).apply(v);
    }
    v
}

fn reflectance_from(stack: &CoatingStack, v: [Complex64; 2]) -> ComplexReflectance {
    let n0 = stack.ambient.n;
    let front = v[0] * n0;
    let denom = front + v[1];
    let r = (front - v[1]) / denom;
    let transmission = 4.0 * n0 * stack.substrate.n / denom.norm_sqr();
    ComplexReflectance {
        r,
        gamma: principal_arg(r),
        transmission,
    }
}

/// `arg z` in `(−π, π]`; a negative real axis with `−0.0` imaginary part maps
/// to `π`, not `−π`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Reflectance of `stack` at vacuum wavevector `k` (must be > 0).
pub fn stack_reflectance(stack: &CoatingStack, k: f64) -> ComplexReflectance {
    reflectance_from(stack, admittance_vector(stack, k, 0.0, StrainModel::Geometric))
}

fn strained_reflectance(stack: &CoatingStack, k: f64, eps: f64, model: StrainModel) -> Complex64 {
    reflectance_from(stack, admittance_vector(stack, k, eps, model)).r
}

/// One point of a reflection-phase scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub k: f64,
    /// Unwrapped `Γ(k)`, continuous along the grid.
    pub gamma: f64,
    pub transmission: f64,
}

const UNWRAP_SUSPICIOUS: f64 = FRAC_PI_2;
const UNWRAP_REFINEMENT: usize = 16;

pub(crate) fn check_grid(k_grid: &[f64]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::InvalidGrid { reason: "empty" });
    }
    if k_grid.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
        return Err(Error::InvalidGrid {
            reason: "wavevectors must be finite and > 0",
        });
    }
    if k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid {
            reason: "not strictly ascending",
        });
    }
    Ok(())
}

/// `Γ(k)` and `T(k)` along an ascending grid, with `Γ` unwrapped by
/// continuity from the principal value at the first point.
///
/// A neighbor step larger than π/2 is refined once into 16 sub-steps; if a
/// sub-step still exceeds π/2 the grid is too coarse to unwrap and
/// [`Error::UnwrapAmbiguity`] is returned.
pub fn reflection_phase_scan(stack: &CoatingStack, k_grid: &[f64]) -> Result<Vec<PhaseSample>> {
    check_grid(k_grid)?;
    let mut out = Vec::with_capacity(k_grid.len());
    let first = stack_reflectance(stack, k_grid[0]);
    out.push(PhaseSample {
        k: k_grid[0],
        gamma: first.gamma,
        transmission: first.transmission,
    });
    let mut prev = first.r;
    let mut gamma = first.gamma;
    for w in k_grid.windows(2) {
        let (k_lo, k_hi) = (w[0], w[1]);
        let here = stack_reflectance(stack, k_hi);
        let mut step = (here.r / prev).arg();
        if step.abs() > UNWRAP_SUSPICIOUS {
            step = 0.0;
            let mut sub_prev = prev;
            for s in 1..=UNWRAP_REFINEMENT {
                let ks = if s == UNWRAP_REFINEMENT {
                    k_hi
                } else {
                    k_lo + (k_hi - k_lo) * (s as f64) / (UNWRAP_REFINEMENT as f64)
                };
                let rs = stack_reflectance(stack, ks).r;
                let ds = (rs / sub_prev).arg();
                if ds.abs() > UNWRAP_SUSPICIOUS {
                    return Err(Error::UnwrapAmbiguity {
                        k_lo,
                        k_hi,
                        step: ds,
                    });
                }
                step += ds;
                sub_prev = rs;
            }
        }
        gamma += step;
        prev = here.r;
        out.push(PhaseSample {
            k: k_hi,
            gamma,
            transmission: here.transmission,
        });
    }
    Ok(out)
}

fn check_strain(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps.abs() < STRAIN_LIMIT) {
        return Err(Error::StrainOutOfRange {
            strain: eps,
            bound: STRAIN_LIMIT,
        });
    }
    Ok(())
}

/// Copy of `stack` with every layer phase scaled for axial strain `eps`.
/// Ambient and substrate are unchanged.
pub fn apply_axial_strain(
    stack: &CoatingStack,
    eps: f64,
    model: StrainModel,
) -> Result<CoatingStack> {
    check_strain(eps)?;
    let mut strained = stack.clone();
    for layer in &mut strained.layers {
        layer.eta0 *= 1.0 + eps * model.phase_coefficient(&layer.material);
    }
    Ok(strained)
}

const DERIV_START_STEP: f64 = 1.0e-7;
const DERIV_REL_TOL: f64 = 1.0e-6;
const DERIV_ABS_FLOOR: f64 = 1.0e-9;
const DERIV_MAX_HALVINGS: usize = 8;

/// `dΓ/dε` (radians per unit strain) at vacuum wavevector `k`, with the front
/// surface of the coating as phase reference.
///
/// Central differences `(Γ(+h) − Γ(−h))/2h` starting at `h = 1e-7` are
/// halved until two successive estimates agree to 1e-6 relative, or to the
/// rounding level of the reflectances when that is larger (weakly
/// reflecting stacks); the returned value is their Richardson extrapolation.
pub fn dgamma_deps(stack: &CoatingStack, k: f64, model: StrainModel) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            reason: "wavevector must be > 0",
        });
    }
    let central = |h: f64| {
        let plus = strained_reflectance(stack, k, h, model);
        let minus = strained_reflectance(stack, k, -h, model);
        (plus / minus).arg() / (2.0 * h)
    };
    // Rounding in the two reflectances, amplified by 1/(2h|r|), bounds how
    // well successive estimates can agree.
    let r0 = stack_reflectance(stack, k).r.norm().max(f64::MIN_POSITIVE);
    let rounding = 16.0 * f64::EPSILON * (stack.layers.len() + 2) as f64 / r0;
    let mut h = DERIV_START_STEP;
    let mut previous = central(h);
    for _ in 0..DERIV_MAX_HALVINGS {
        h /= 2.0;
        let current = central(h);
        let scale = current.abs().max(previous.abs());
        let floor = DERIV_ABS_FLOOR.max(rounding / h);
        if (current - previous).abs() <= DERIV_REL_TOL * scale + floor {
            return Ok((4.0 * current - previous) / 3.0);
        }
        previous = current;
    }
    Err(Error::DerivativeNotConverged {
        previous,
        last: central(h),
    })
}
