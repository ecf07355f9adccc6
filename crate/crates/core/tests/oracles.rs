//! Cross-checks of the core routines against independently coded references.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use thermophase_core::fdt::{self, QuadratureSettings};
use thermophase_core::model::build_stack;
use thermophase_core::tmm::{self, StrainModel};
use thermophase_core::{materials, BeamSubstrate, CoatingStack, FpStackDesign, Layer, Material};

const K0: f64 = 5.905_249_348_852_994e6;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let k = k as f64;
                        (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                    }
                    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    return (x, 2.0 / ((1.0 - x * x) * dp * dp));
                }
            }
        })
        .collect()
}

/// N(z1, z2) in units of w0: 40 panels of 10-point Gauss–Legendre over
/// k ∈ [0, 20/w0], kernel written out from scratch.
fn n_oracle(z1: f64, z2: f64, s: f64) -> f64 {
    let rule = gauss_legendre(10);
    let f = |k: f64| {
        let zm = (z1 - z2).abs();
        let zp = z1 + z2;
        (-k * zm).exp() * (3.0 - 4.0 * s + k * zm)
            + (-k * zp).exp()
                * (5.0 - 12.0 * s + 8.0 * s * s + k * (3.0 - 4.0 * s) * zp + 2.0 * k * k * z1 * z2)
    };
    let (a, b, panels) = (0.0, 20.0, 40);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            let k = mid + 0.5 * h * x;
            sum += 0.5 * h * w * (-k * k / 4.0).exp() * f(k);
        }
    }
    sum / (8.0 * PI.sqrt() * (1.0 - s) * (1.0 - s))
}

#[test]
fn legendre_rule_is_exact_for_polynomials() {
    let rule = gauss_legendre(10);
    let total: f64 = rule.iter().map(|&(_, w)| w).sum();
    assert!((total - 2.0).abs() < 1e-14);
    let x18: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
    assert!((x18 - 2.0 / 19.0).abs() < 1e-14);
}

#[test]
fn correlation_matches_gauss_legendre() {
    let q = QuadratureSettings::default();
    for s in [0.0, 0.2, 0.45] {
        for (z1, z2) in [(0.0, 0.0), (0.0, 1.0), (0.5, 2.0), (3.0, 3.0), (0.0, 10.0), (7.0, 10.0)] {
            let n = fdt::correlation_n_scaled(z1, z2, s, &q).unwrap().value;
            let o = n_oracle(z1, z2, s);
            assert!((n - o).abs() < 1e-8, "N({z1},{z2};{s}) = {n}, oracle {o}");
        }
    }
}

#[test]
fn correlation_surface_value_is_exactly_one_analytically() {
    // f(0,0;k) = 8(1−σ)² and ∫ e^{−u²} = √π/2 give N(0,0) = 1.
    for s in [0.0, 0.17, 0.2, 0.3, 0.45] {
        assert!((n_oracle(0.0, 0.0, s) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn normalized_correlation_reference_value() {
    let c = fdt::normalized_correlation_c_scaled(0.0, 10.0, 0.2, &QuadratureSettings::default())
        .unwrap();
    assert!((c - 0.133_526_948_649_532_13).abs() < 1e-9, "{c}");
}

#[test]
fn self_correlation_decreases_with_depth() {
    let q = QuadratureSettings::default();
    let mut last = f64::INFINITY;
    for i in 0..=100 {
        let z = 0.1 * i as f64;
        let n = fdt::correlation_n_scaled(z, z, 0.2, &q).unwrap().value;
        assert!(n < last, "N({z},{z}) = {n} >= {last}");
        last = n;
    }
}

/// Eigenvalues of a symmetric 3×3 matrix (trigonometric closed form).
fn sym3_eigenvalues(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        return [a[0][0], a[1][1], a[2][2]];
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = a;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= q;
        for v in row.iter_mut() {
            *v /= p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // A correlation matrix of three depths is a covariance and must be
    // positive semidefinite.
    #[test]
    fn correlation_matrix_is_positive(
        z in prop::array::uniform3(0.0f64..6.0),
        s in 0.0f64..0.49,
    ) {
        let q = QuadratureSettings::default();
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = fdt::correlation_n_scaled(z[i], z[j], s, &q).unwrap().value;
            }
        }
        for e in sym3_eigenvalues(m) {
            prop_assert!(e > -1e-9, "eigenvalue {}", e);
        }
    }

    #[test]
    fn normalized_correlation_is_bounded(z1 in 0.0f64..10.0, z2 in 0.0f64..10.0) {
        let c = fdt::normalized_correlation_c_scaled(z1, z2, 0.2, &QuadratureSettings::default())
            .unwrap();
        prop_assert!(c.abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn eigenvalue_helper_on_known_matrix() {
    let mut e = sym3_eigenvalues([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]);
    e.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip([1.0, 3.0, 5.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn strain_ratio_scales_with_root_slice() {
    let q = QuadratureSettings::default();
    for z1 in [0.0, 1.0, 3.0, 10.0] {
        let a = fdt::strain_correlation_scaled(z1, 2.0, 1e-3, 0.2, &q).unwrap().ratio / 1e-3f64.sqrt();
        let b = fdt::strain_correlation_scaled(z1, 2.0, 1e-4, 0.2, &q).unwrap().ratio / 1e-4f64.sqrt();
        assert!((a - b).abs() <= 0.02 * b.abs(), "z1 = {z1}: {a} vs {b}");
    }
}

#[test]
fn surface_psd_matches_direct_arithmetic() {
    let silica = Arc::new(Material::new("fused silica", 1.45).with_elastic(72e9, 0.17, 1e-6));
    let beam = BeamSubstrate::new(1e-4, silica, 300.0).unwrap();
    let v = fdt::surface_psd(2.0 * PI * 100.0, &beam).unwrap();
    // Independent evaluation, written as π^{3/2}.
    let direct = 2.0 * 1.380649e-23 * 300.0 * (1.0 - 0.17f64 * 0.17) * 1e-6
        / (PI.powf(1.5) * 1e-4 * 72e9 * 2.0 * PI * 100.0);
    assert!((v - direct).abs() <= 4.0 * f64::EPSILON * direct);
    assert!((v - 3.193_458_769_249_298_3e-37).abs() <= 4.0 * f64::EPSILON * v);
}

/// Closed-form `dΓ/dε` for one film of index `n1` and phase `eta` between
/// ambient `n0` and substrate `ns`; `c` is the phase-per-strain coefficient.
fn single_film_dgamma(n0: f64, n1: f64, ns: f64, eta: f64, c: f64) -> f64 {
    let r01 = (n0 - n1) / (n0 + n1);
    let r12 = (n1 - ns) / (n1 + ns);
    let e = Complex64::from_polar(1.0, -2.0 * eta);
    let num = r12 * e / (r01 + r12 * e);
    let den = r01 * r12 * e / (1.0 + r01 * r12 * e);
    let dgamma_deta = -2.0 * num.re + 2.0 * den.re;
    dgamma_deta * eta * c
}

fn single_film(n1: f64, p12: f64, eta0: f64, ns: f64) -> CoatingStack {
    let film = Arc::new(Material::new("film", n1).with_p12(p12));
    CoatingStack::new(
        Arc::new(Material::vacuum()),
        vec![Layer::new(film, eta0).unwrap()],
        Arc::new(Material::new("sub", ns)),
        K0,
    )
    .unwrap()
}

#[test]
fn single_film_reflectance_matches_airy_sum() {
    let s = single_film(2.03, 0.0, 1.1, 1.75);
    let x = 1.03;
    let (r01, r12) = ((1.0 - 2.03) / 3.03, (2.03 - 1.75) / 3.78);
    let e = Complex64::from_polar(1.0, -2.0 * 1.1 * x);
    let airy = (r01 + r12 * e) / (1.0 + r01 * r12 * e);
    let r = tmm::stack_reflectance(&s, K0 * x).r;
    assert!((r - airy).norm() < 1e-14);
}

proptest! {
    #[test]
    fn single_film_strain_derivative(
        n1 in 1.2f64..3.0,
        p12 in -0.1f64..0.3,
        eta0 in 0.2f64..6.0,
        ns in 1.2f64..2.0,
        x in 0.9f64..1.1,
    ) {
        let s = single_film(n1, p12, eta0, ns);
        for model in [StrainModel::Geometric, StrainModel::Photoelastic] {
            let c = model.phase_coefficient(&s.layers[0].material);
            let exact = single_film_dgamma(1.0, n1, ns, eta0 * x, c);
            let d = tmm::dgamma_deps(&s, K0 * x, model).unwrap();
            // Central differences at h ~ 1e-7 resolve the phase to ~ε/(h|r|).
            let r = tmm::stack_reflectance(&s, K0 * x).r.norm();
            prop_assert!((d - exact).abs() <= 1e-6 * exact.abs() + 1e-8 / r, "{} vs {}", d, exact);
        }
    }

    #[test]
    fn energy_conservation_on_resonant_stacks(j in 1u32..20, x in 0.99f64..1.01) {
        let s = build_stack(
            &FpStackDesign { pairs: 33, front_pairs: 8, mode_order: j, eta_fp: PI },
            Arc::new(materials::silica()),
            Arc::new(materials::tantala()),
            Arc::new(materials::sapphire()),
            K0,
        ).unwrap();
        let r = tmm::stack_reflectance(&s, K0 * x);
        prop_assert!((r.r.norm_sqr() + r.transmission - 1.0).abs() < 1e-12);
    }
}
