use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use ravol::numerics::{
    eq8_lhs, eq9_lhs, ideal_tet_volume, lobachevsky, lobachevsky_fourier, lobachevsky_hp,
    signed_tet_volume, v_tet_f64, Hp, Real,
};

/// Λ(θ) = −∫₀^θ log|2 sin t| dt by composite Simpson, after splitting off the
/// logarithmic singularity: log(2 sin t) = log(2t) + log(sin t / t).
fn lob_quadrature(theta: f64) -> f64 {
    let singular = theta * (2.0 * theta).ln() - theta;
    let g = |t: f64| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() };
    let n = 20_000;
    let h = theta / n as f64;
    let mut s = g(0.0) + g(theta);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    -(singular + s * h / 3.0)
}

#[test]
fn quadrature_oracle() {
    let v = lobachevsky(PI / 3.0);
    assert!((v - lob_quadrature(PI / 3.0)).abs() < 1e-12);
    assert!((v - 0.338314).abs() < 5e-7);
    for t in [0.1, 0.5, 1.0, 1.4, 2.0, 3.0] {
        assert!(
            (lobachevsky(t) - lob_quadrature(t)).abs() < 1e-11,
            "θ = {t}"
        );
    }
}

#[test]
fn fourier_agrees_on_grid() {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let t = 0.05 + (PI - 0.1) * i as f64 / 999.0;
        worst = worst.max((lobachevsky(t) - lobachevsky_fourier(t)).abs());
    }
    assert!(worst < 1e-12, "largest difference {worst:e}");
}

#[test]
fn identity_sides_at_high_precision() {
    let u = Hp::with_digits(1, 60);
    let a = ravol::numerics::antiprism4_side(&u);
    assert!(eq8_lhs(&u).agreeing_digits(&a) >= 55);
    assert!(eq9_lhs(&u).agreeing_digits(&a) >= 55);
    let t = Hp::parse("0.7", u.precision_bits());
    let x = lobachevsky_hp(&t);
    assert!((x.to_f64() - lobachevsky(0.7)).abs() < 1e-15);
}

#[test]
fn tetrahedron_maximum_is_regular() {
    let regular = Complex64::from_polar(1.0, PI / 3.0);
    let best = ideal_tet_volume(regular).unwrap().value;
    assert!((best - v_tet_f64()).abs() < 1e-14);
    for i in 1..60 {
        for j in 1..60 {
            let z = Complex64::new(-2.0 + 5.0 * i as f64 / 60.0, 3.0 * j as f64 / 60.0);
            assert!(signed_tet_volume(z) <= best + 1e-14, "z = {z}");
        }
    }
}

proptest! {
    #[test]
    fn odd(t in -10.0..10.0f64) {
        prop_assert!((lobachevsky(-t) + lobachevsky(t)).abs() < 1e-14);
    }

    #[test]
    fn periodic(t in -10.0..10.0f64, k in -5i32..5) {
        let s = t + k as f64 * PI;
        prop_assert!((lobachevsky(s) - lobachevsky(t)).abs() < 1e-12);
    }

    #[test]
    fn duplication(t in 0.01..3.1f64) {
        let lhs = lobachevsky(2.0 * t);
        let rhs = 2.0 * lobachevsky(t) + 2.0 * lobachevsky(t + FRAC_PI_2);
        prop_assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn tet_shape_symmetries(re in -3.0..3.0f64, im in 0.01..3.0f64) {
        let z = Complex64::new(re, im);
        let v = signed_tet_volume(z);
        let one = Complex64::new(1.0, 0.0);
        prop_assert!((signed_tet_volume(one / (one - z)) - v).abs() < 1e-12);
        prop_assert!((signed_tet_volume(one - one / z) - v).abs() < 1e-12);
        prop_assert!((signed_tet_volume(z.conj()) + v).abs() < 1e-12);
        prop_assert!(v > 0.0 && v <= v_tet_f64() + 1e-14);
    }
}
