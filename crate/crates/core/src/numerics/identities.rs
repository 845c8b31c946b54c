//! Two Lobachevsky-function identities evaluated at high precision. Both have
//! the volume of the ideal 4-antiprism on their right-hand side.

use serde::{Deserialize, Serialize};

use super::{Hp, Lobachevsky, NumericsError, PrecisionSpec, Real, DOUBLE_DIGITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Agree,
    Differ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityVerdict {
    pub lhs: String,
    pub rhs: String,
    pub digits: u32,
    /// Decimal places to which the sides agree, capped at `digits`.
    pub agree_digits: u32,
    pub verdict: Verdict,
}

/// 8Λ(3π/8) + 8Λ(π/8).
pub fn antiprism4_side<R: Lobachevsky>(u: &R) -> R {
    let pi = u.pi();
    let a = (pi.clone() * u.int(3) / u.int(8)).lob();
    let b = (pi / u.int(8)).lob();
    (a + b) * u.int(8)
}

/// 3[2Λ(θ) + Λ(θ + π/6) + Λ(θ − π/6) + Λ(π/2 − 2θ)] with θ = π/2 − arccos(1/√3).
pub fn eq8_lhs<R: Lobachevsky>(u: &R) -> R {
    let pi = u.pi();
    let half = pi.clone() / u.int(2);
    let sixth = pi / u.int(6);
    let theta = half.clone() - (u.int(1) / u.int(3).sqrt()).acos();
    let s = theta.lob() * u.int(2)
        + (theta.clone() + sixth.clone()).lob()
        + (theta.clone() - sixth).lob()
        + (half - theta * u.int(2)).lob();
    s * u.int(3)
}

/// 4Λ(π/2 − φ) + 8Λ(φ) − 3Λ(2φ) + ½Λ(4φ) with φ = arctan √2.
pub fn eq9_lhs<R: Lobachevsky>(u: &R) -> R {
    let half = u.pi() / u.int(2);
    let phi = u.int(2).sqrt().atan();
    (half - phi.clone()).lob() * u.int(4) + phi.lob() * u.int(8)
        - (phi.clone() * u.int(2)).lob() * u.int(3)
        + (phi * u.int(4)).lob() / u.int(2)
}

fn verdict(digits: u32, lhs: impl Fn(&Hp) -> Hp) -> Result<IdentityVerdict, NumericsError> {
    PrecisionSpec::new(digits)?;
    let u = PrecisionSpec {
        digits: digits.max(DOUBLE_DIGITS),
    }
    .unit();
    let l = lhs(&u);
    let r = antiprism4_side(&u);
    let one = u.int(1);
    let scale = if l.abs() > one { l.abs() } else { one };
    let tol = Hp::parse(&format!("1e-{digits}"), u.precision_bits()) * scale;
    let agree = (l.clone() - r.clone()).abs() < tol;
    Ok(IdentityVerdict {
        lhs: l.to_fixed(digits as usize),
        rhs: r.to_fixed(digits as usize),
        digits,
        agree_digits: l.agreeing_digits(&r).min(digits),
        verdict: if agree {
            Verdict::Agree
        } else {
            Verdict::Differ
        },
    })
}

/// Compares the two sides of the θ-identity to `digits` decimal places.
pub fn check_identity_eq8(digits: u32) -> Result<IdentityVerdict, NumericsError> {
    verdict(digits, eq8_lhs)
}

/// Compares the φ = arctan √2 (cuboctahedral) identity to `digits` places.
pub fn check_identity_eq9(digits: u32) -> Result<IdentityVerdict, NumericsError> {
    verdict(digits, eq9_lhs)
}
