//! Closed-form volumes of antiprisms, Löbell polyhedra and towers, normalized
//! volumes, Atkinson's bounds and the landmark constants of the spectra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{
    evaluate, v_oct_f64, v_oct_in, v_tet_f64, v_tet_in, Lobachevsky, NumericsError, PrecisionSpec,
    Real, Value,
};
use crate::Kind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    ClosedForm,
    Additive,
    Realized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeValue {
    pub value: f64,
    pub method: VolumeMethod,
    pub digits: u32,
    pub decimal: String,
}

impl VolumeValue {
    fn from_value(v: Value, method: VolumeMethod) -> Self {
        VolumeValue {
            value: v.value,
            method,
            digits: v.digits,
            decimal: v.decimal,
        }
    }

    pub fn realized(value: f64) -> Self {
        VolumeValue::from_value(Value::from_f64(value, 10), VolumeMethod::Realized)
    }
}

/// 2n[Λ(π/4 + π/2n) + Λ(π/4 − π/2n)].
pub fn antiprism_formula<R: Lobachevsky>(u: &R, n: u64) -> R {
    let pi = u.pi();
    let q = pi.clone() / u.int(4);
    let s = pi / u.int(2 * n as i64);
    let sum = (q.clone() + s.clone()).lob() + (q - s).lob();
    sum * u.int(2 * n as i64)
}

/// θ_n = π/2 − arccos(1/(2 cos(π/n))).
pub fn lobell_angle<R: Lobachevsky>(u: &R, n: u64) -> R {
    let pi = u.pi();
    let c = (pi.clone() / u.int(n as i64)).cos() * u.int(2);
    pi / u.int(2) - (u.int(1) / c).acos()
}

/// (n/2)[2Λ(θ_n) + Λ(θ_n + π/n) + Λ(θ_n − π/n) − Λ(2θ_n − π/2)].
pub fn lobell_formula<R: Lobachevsky>(u: &R, n: u64) -> R {
    let pi = u.pi();
    let theta = lobell_angle(u, n);
    let t = theta.to_f64();
    assert!(
        t > 0.0 && t < std::f64::consts::FRAC_PI_2,
        "θ_{n} = {t} outside (0, π/2)"
    );
    let step = pi.clone() / u.int(n as i64);
    let sum = theta.lob() * u.int(2)
        + (theta.clone() + step.clone()).lob()
        + (theta.clone() - step).lob()
        - (theta * u.int(2) - pi / u.int(2)).lob();
    sum * u.int(n as i64) / u.int(2)
}

fn checked(prec: PrecisionSpec) -> Result<PrecisionSpec, VolumeError> {
    Ok(PrecisionSpec::new(prec.digits)?)
}

/// Volume of the ideal right-angled n-antiprism A(n).
pub fn antiprism_volume(n: u64, prec: PrecisionSpec) -> Result<VolumeValue, VolumeError> {
    if n < 3 {
        return Err(VolumeError::BadParameter(format!(
            "antiprism needs n >= 3, got {n}"
        )));
    }
    let prec = checked(prec)?;
    let v = evaluate(
        prec,
        || antiprism_formula(&1.0, n),
        |u| antiprism_formula(u, n),
    );
    Ok(VolumeValue::from_value(v, VolumeMethod::ClosedForm))
}

/// Volume of the compact Löbell polyhedron L(n).
pub fn lobell_volume(n: u64, prec: PrecisionSpec) -> Result<VolumeValue, VolumeError> {
    if n < 5 {
        return Err(VolumeError::BadParameter(format!(
            "Löbell polyhedron needs n >= 5, got {n}"
        )));
    }
    let prec = checked(prec)?;
    let v = evaluate(prec, || lobell_formula(&1.0, n), |u| lobell_formula(u, n));
    Ok(VolumeValue::from_value(v, VolumeMethod::ClosedForm))
}

/// Volume of the tower of k Löbell polyhedra L(n) glued along n-gons.
pub fn tower_volume(n: u64, k: u64, prec: PrecisionSpec) -> Result<VolumeValue, VolumeError> {
    if n < 5 || k < 1 {
        return Err(VolumeError::BadParameter(format!(
            "tower needs n >= 5 and k >= 1, got n={n}, k={k}"
        )));
    }
    let prec = checked(prec)?;
    let v = evaluate(
        prec,
        || lobell_formula(&1.0, n) * k as f64,
        |u| lobell_formula(u, n) * u.int(k as i64),
    );
    Ok(VolumeValue::from_value(v, VolumeMethod::Additive))
}

/// ω = vol/ver and the modified ω̃ = vol/(ver − 3) (ideal) or vol/(ver − 10)
/// (compact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedVolume {
    pub omega: f64,
    pub omega_tilde: Option<f64>,
    pub ver: usize,
    pub kind: Kind,
}

/// Offset subtracted from the vertex count in the modified normalized volume.
pub fn modified_offset(kind: Kind) -> Option<usize> {
    match kind {
        Kind::Ideal => Some(3),
        Kind::Compact => Some(10),
        _ => None,
    }
}

pub fn normalized(vol: f64, ver: usize, kind: Kind) -> Result<NormalizedVolume, VolumeError> {
    if ver == 0 || !(vol > 0.0) {
        return Err(VolumeError::BadParameter(format!(
            "need vol > 0 and ver > 0, got vol={vol}, ver={ver}"
        )));
    }
    let offset = modified_offset(kind).ok_or_else(|| {
        VolumeError::BadParameter(format!("{kind} polyhedra have no normalized volume here"))
    })?;
    let omega_tilde = (ver > offset).then(|| vol / (ver - offset) as f64);
    Ok(NormalizedVolume {
        omega: vol / ver as f64,
        omega_tilde,
        ver,
        kind,
    })
}

/// Atkinson's lower and upper volume bounds in terms of the vertex count.
pub fn atkinson_bounds(ver: usize, kind: Kind) -> Result<(f64, f64), VolumeError> {
    let v = ver as f64;
    match kind {
        Kind::Ideal if ver >= 6 => {
            Ok((v_oct_f64() * (v - 2.0) / 4.0, v_oct_f64() * (v - 4.0) / 2.0))
        }
        Kind::Compact if ver >= 20 => Ok((
            v_oct_f64() * (v - 8.0) / 32.0,
            5.0 * v_tet_f64() * (v - 10.0) / 8.0,
        )),
        Kind::Ideal | Kind::Compact => Err(VolumeError::BadParameter(format!(
            "{kind} polyhedra have at least {} vertices",
            if kind == Kind::Ideal { 6 } else { 20 }
        ))),
        _ => Err(VolumeError::BadParameter(format!(
            "no bounds for {kind} polyhedra"
        ))),
    }
}

/// Volume density of a fully augmented link whose decomposition polyhedron
/// has normalized volume ω.
pub fn vd_from_omega(omega: f64) -> f64 {
    assert!(omega >= 0.0, "normalized volume must be nonnegative");
    6.0 * omega
}

/// The named constants a..k bounding and separating the spectra, as
/// rational multiples of v_oct and v_tet.
pub fn landmark_constants(prec: PrecisionSpec) -> Result<BTreeMap<char, Value>, VolumeError> {
    let prec = checked(prec)?;
    let table: [(char, bool, i64, i64); 9] = [
        ('a', true, 5, 192),
        ('b', true, 1, 32),
        ('c', false, 5, 16),
        ('d', true, 1, 6),
        ('e', false, 5, 8),
        ('f', true, 1, 4),
        ('g', true, 1, 3),
        ('h', false, 5, 3),
        ('k', true, 1, 2),
    ];
    Ok(table
        .iter()
        .map(|&(name, oct, a, b)| {
            let v = evaluate(
                prec,
                || if oct { v_oct_f64() } else { v_tet_f64() } * a as f64 / b as f64,
                |u| if oct { v_oct_in(u) } else { v_tet_in(u) } * u.int(a) / u.int(b),
            );
            (name, v)
        })
        .collect())
}
