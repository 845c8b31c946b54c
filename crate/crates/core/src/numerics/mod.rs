//! The Lobachevsky function at double and arbitrary precision, the constants
//! built from it, ideal tetrahedron volumes and two high-precision identities.

pub mod bernoulli;
mod hp;
mod identities;
mod tet;

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hp::{bits_for_digits, Hp, Real};
pub use identities::{
    antiprism4_side, check_identity_eq8, check_identity_eq9, eq8_lhs, eq9_lhs, IdentityVerdict,
    Verdict,
};
pub use tet::{ideal_tet_volume, signed_tet_volume, TetVolume};

/// Largest number of decimal digits accepted by the arbitrary-precision path.
pub const MAX_DIGITS: u32 = 400;

/// Decimal places served by plain `f64` arithmetic; values up to a few
/// hundred keep every printed digit correct.
pub const DOUBLE_DIGITS: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{requested} digits requested, at most {max} supported")]
    PrecisionUnattainable { requested: u32, max: u32 },
    #[error("degenerate tetrahedron shape {0}")]
    DegenerateShape(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionSpec {
    pub digits: u32,
}

impl PrecisionSpec {
    pub fn new(digits: u32) -> Result<Self, NumericsError> {
        if digits > MAX_DIGITS {
            return Err(NumericsError::PrecisionUnattainable {
                requested: digits,
                max: MAX_DIGITS,
            });
        }
        Ok(PrecisionSpec { digits })
    }

    pub fn double() -> Self {
        PrecisionSpec {
            digits: DOUBLE_DIGITS,
        }
    }

    pub fn is_double(&self) -> bool {
        self.digits <= DOUBLE_DIGITS
    }

    /// A unit at the working precision (requested digits plus ten guard digits).
    pub fn unit(&self) -> Hp {
        Hp::with_digits(1, self.digits + 10)
    }
}

/// A real result with its decimal rendering at the requested precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Value {
    pub value: f64,
    pub digits: u32,
    pub decimal: String,
}

impl Value {
    pub fn from_f64(x: f64, digits: u32) -> Self {
        let d = digits.min(DOUBLE_DIGITS) as usize;
        Value {
            value: x,
            digits: d as u32,
            decimal: format!("{x:.d$}"),
        }
    }

    pub fn from_hp(x: &Hp, digits: u32) -> Self {
        Value {
            value: x.to_f64(),
            digits,
            decimal: x.to_fixed(digits as usize),
        }
    }
}

/// Evaluates a formula at `prec`, using `f64` when that suffices.
pub fn evaluate(
    prec: PrecisionSpec,
    f64_path: impl FnOnce() -> f64,
    hp_path: impl FnOnce(&Hp) -> Hp,
) -> Value {
    if prec.is_double() {
        Value::from_f64(f64_path(), prec.digits)
    } else {
        Value::from_hp(&hp_path(&prec.unit()), prec.digits)
    }
}

fn double_coefficients() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        bernoulli::lobachevsky_coefficients(40)
            .iter()
            .map(|c| num_traits::ToPrimitive::to_f64(c).unwrap())
            .collect()
    })
}

fn hp_coefficients(bits: usize) -> Arc<Vec<Hp>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Hp>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&bits) {
        return c.clone();
    }
    // |c_n θ^{2n+1}| < 4^{-n} for |θ| ≤ π/2
    let terms = bits / 2 + 8;
    let proto = Hp::from_i64(1, bits);
    let c: Arc<Vec<Hp>> = Arc::new(
        bernoulli::lobachevsky_coefficients(terms)
            .iter()
            .map(|r| proto.ratio(r))
            .collect(),
    );
    cache.lock().unwrap().insert(bits, c.clone());
    c
}

/// Series evaluation for |θ| ≤ π/2 (approximately).
fn series<R: Real>(theta: &R, coeffs: &[R]) -> R {
    if theta.is_zero() {
        return theta.int(0);
    }
    let two_abs = theta.abs() * theta.int(2);
    let mut sum = theta.clone() - theta.clone() * two_abs.ln();
    let t2 = theta.clone() * theta.clone();
    let mut power = theta.clone() * t2.clone();
    for c in coeffs {
        sum = sum + c.clone() * power.clone();
        power = power * t2.clone();
    }
    sum
}

/// Λ(θ) = −∫₀^θ log|2 sin t| dt at double precision.
pub fn lobachevsky(theta: f64) -> f64 {
    assert!(
        theta.is_finite(),
        "Lobachevsky function needs a finite angle"
    );
    let k = (theta / PI).round();
    let mut t = theta - k * PI;
    if t > FRAC_PI_2 {
        t -= PI;
    } else if t < -FRAC_PI_2 {
        t += PI;
    }
    series(&t, double_coefficients())
}

/// Λ(θ) at the precision of `theta`.
pub fn lobachevsky_hp(theta: &Hp) -> Hp {
    let pi = theta.pi();
    let k = (theta.to_f64() / PI).round() as i64;
    let t = theta.clone() - pi * theta.int(k);
    series(&t, &hp_coefficients(theta.precision_bits()))
}

/// Λ for any supported real type.
pub trait Lobachevsky: Real {
    fn lob(&self) -> Self;
}

impl Lobachevsky for f64 {
    fn lob(&self) -> Self {
        lobachevsky(*self)
    }
}

impl Lobachevsky for Hp {
    fn lob(&self) -> Self {
        lobachevsky_hp(self)
    }
}

/// Λ(θ) to the requested precision; the angle is taken as the exact binary
/// value of `theta`.
pub fn lobachevsky_at(theta: f64, prec: PrecisionSpec) -> Result<Value, NumericsError> {
    let prec = PrecisionSpec::new(prec.digits)?;
    Ok(evaluate(
        prec,
        || lobachevsky(theta),
        |u| lobachevsky_hp(&Hp::from_f64(theta, u.precision_bits())),
    ))
}

/// Independent evaluator: the Fourier series ½ Σ sin(2nθ)/n², summed directly
/// up to a cutoff and completed by repeated summation by parts. Accurate to
/// about 1e-13 when θ stays at least 0.05 away from multiples of π.
pub fn lobachevsky_fourier(theta: f64) -> f64 {
    const CUTOFF: usize = 20_000;
    const ROUNDS: usize = 4;
    let z = Complex64::from_polar(1.0, 2.0 * theta);
    if (z - 1.0).norm() < 1e-12 {
        return 0.0;
    }
    let mut head = 0.0;
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 1..=CUTOFF {
        zn *= z;
        head += zn.im / (n * n) as f64;
    }
    // Σ_{n≥m} z^n a_n = −a_m z^m/(z−1) − z/(z−1) Σ_{n≥m} z^n (Δa)_n
    let m = CUTOFF + 1;
    let zm = zn * z;
    let ratio = z / (z - 1.0);
    let a = |n: usize| 1.0 / (n * n) as f64;
    // forward differences of a at m, computed from a short table
    let mut table: Vec<f64> = (0..=ROUNDS).map(|j| a(m + j)).collect();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut factor = Complex64::new(1.0, 0.0);
    for _ in 0..ROUNDS {
        tail += -factor * table[0] * zm / (z - 1.0);
        factor *= -ratio;
        for j in 0..table.len() - 1 {
            table[j] = table[j + 1] - table[j];
        }
        table.pop();
    }
    0.5 * (head + tail.im)
}

/// v_oct = 8Λ(π/4), volume of the regular ideal octahedron.
pub fn v_oct_in<R: Lobachevsky>(u: &R) -> R {
    let t = u.pi() / u.int(4);
    t.lob() * u.int(8)
}

/// v_tet = 3Λ(π/3), volume of the regular ideal tetrahedron.
pub fn v_tet_in<R: Lobachevsky>(u: &R) -> R {
    let t = u.pi() / u.int(3);
    t.lob() * u.int(3)
}

pub fn v_oct(prec: PrecisionSpec) -> Result<Value, NumericsError> {
    let prec = PrecisionSpec::new(prec.digits)?;
    Ok(evaluate(prec, || v_oct_in(&1.0), v_oct_in))
}

pub fn v_tet(prec: PrecisionSpec) -> Result<Value, NumericsError> {
    let prec = PrecisionSpec::new(prec.digits)?;
    Ok(evaluate(prec, || v_tet_in(&1.0), v_tet_in))
}

/// Double-precision v_oct.
pub fn v_oct_f64() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| v_oct_in(&1.0))
}

/// Double-precision v_tet.
pub fn v_tet_f64() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| v_tet_in(&1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(FRAC_PI_2).abs() < 1e-15);
        assert!((lobachevsky(PI / 4.0) - 0.457_982_797_088_609_4).abs() < 1e-15);
        // Λ(π/6) = 3/2 Λ(π/3)
        assert!((lobachevsky(PI / 6.0) - 1.5 * lobachevsky(PI / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn hp_matches_double() {
        let u = Hp::with_digits(1, 40);
        for &t in &[0.1, 0.5, 1.0, 1.5, 2.5, -0.7] {
            let h = lobachevsky_hp(&Hp::from_f64(t, u.precision_bits()));
            assert!((h.to_f64() - lobachevsky(t)).abs() < 1e-15, "θ = {t}");
        }
    }

    #[test]
    fn fourier_agrees() {
        for i in 0..50 {
            let t = 0.05 + (PI - 0.1) * i as f64 / 49.0;
            let d = (lobachevsky_fourier(t) - lobachevsky(t)).abs();
            assert!(d < 1e-12, "θ = {t}: {d:e}");
        }
    }

    #[test]
    fn constants_to_many_digits() {
        let p = PrecisionSpec::new(40).unwrap();
        assert_eq!(&v_oct(p).unwrap().decimal[..20], "3.663862376708876060");
        assert_eq!(&v_tet(p).unwrap().decimal[..20], "1.014941606409653625");
        assert!(PrecisionSpec::new(MAX_DIGITS + 1).is_err());
    }
}
