//! Normalized-volume spectra: table rows over a census, the weighted-average
//! behaviour of connected sums, discreteness bounds, density schedules and the
//! classification of the number line by the landmark constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::CensusResult;
use crate::numerics::{v_oct_f64, PrecisionSpec};
use crate::polyhedron::{CanonicalCode, Kind};
use crate::realization::{ideal_volume, RealizationError};
use crate::volumes::{
    antiprism_formula, landmark_constants, modified_offset, VolumeMethod, VolumeValue,
};

/// Normalized volumes closer than this count as equal.
pub const DISTINCT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("{0} polyhedra lack volumes")]
    MissingVolumes(usize),
    #[error("value {value} outside [{lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("target {t} outside [{lo}, {hi}]")]
    Unreachable { t: f64, lo: f64, hi: f64 },
    #[error("no convergent within {0} terms reaches the tolerance")]
    TermBudget(usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub code: CanonicalCode,
    pub ver: usize,
    pub vol: Option<VolumeValue>,
    pub omega: Option<f64>,
    pub omega_tilde: Option<f64>,
}

impl SpectrumPoint {
    pub fn new(code: CanonicalCode, kind: Kind, vol: Option<VolumeValue>) -> Self {
        let ver = code.vertex_count();
        let omega = vol.as_ref().map(|v| v.value / ver as f64);
        let omega_tilde = match (vol.as_ref(), modified_offset(kind)) {
            (Some(v), Some(off)) if ver > off => Some(v.value / (ver - off) as f64),
            _ => None,
        };
        SpectrumPoint {
            code,
            ver,
            vol,
            omega,
            omega_tilde,
        }
    }
}

/// Spectrum points of every census member. Ideal members are realized;
/// compact members carry the volumes known from closed forms and isometric
/// gluings, if any.
pub fn spectrum_points(
    census: &CensusResult,
    tol: f64,
) -> Result<Vec<SpectrumPoint>, SpectraError> {
    let members: Vec<_> = census.members().collect();
    let kind = census.kind;
    let points: Result<Vec<SpectrumPoint>, SpectraError> = members
        .par_iter()
        .map(|m| {
            let vol = match kind {
                Kind::Ideal => {
                    let p = m.code.decode().expect("census codes decode");
                    Some(ideal_volume(&p, tol)?)
                }
                _ => m.volume.map(|v| {
                    let method = if m.origin.seed.is_some() {
                        VolumeMethod::ClosedForm
                    } else {
                        VolumeMethod::Additive
                    };
                    VolumeValue {
                        value: v,
                        method,
                        digits: 10,
                        decimal: format!("{v:.10}"),
                    }
                }),
            };
            Ok(SpectrumPoint::new(m.code.clone(), kind, vol))
        })
        .collect();
    let mut points = points?;
    points.sort_by(|a, b| {
        let w = |p: &SpectrumPoint| p.omega.unwrap_or(f64::INFINITY);
        a.ver
            .cmp(&b.ver)
            .then(w(a).total_cmp(&w(b)))
            .then_with(|| a.code.cmp(&b.code))
    });
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub kind: Kind,
    pub n: usize,
    pub count: usize,
    pub distinct: usize,
    pub min_omega: Option<f64>,
    pub max_omega: Option<f64>,
    /// Some members have no known volume, so min/max are only witnesses.
    pub partial: bool,
}

/// Number of values after merging those closer than `tol`.
pub fn count_distinct(values: &[f64], tol: f64) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for x in v {
        if x - last > tol {
            count += 1;
        }
        last = x;
    }
    count
}

/// The row (count, distinct ω, min ω, max ω) for polyhedra with `n` vertices.
pub fn spectrum_table(
    kind: Kind,
    n: usize,
    points: &[SpectrumPoint],
) -> Result<SpectrumRow, SpectraError> {
    let at_n: Vec<&SpectrumPoint> = points.iter().filter(|p| p.ver == n).collect();
    let omegas: Vec<f64> = at_n.iter().filter_map(|p| p.omega).collect();
    let missing = at_n.len() - omegas.len();
    if kind == Kind::Ideal && missing > 0 {
        return Err(SpectraError::MissingVolumes(missing));
    }
    Ok(SpectrumRow {
        kind,
        n,
        count: at_n.len(),
        distinct: count_distinct(&omegas, DISTINCT_TOL),
        min_omega: omegas.iter().copied().reduce(f64::min),
        max_omega: omegas.iter().copied().reduce(f64::max),
        partial: missing > 0,
    })
}

/// Modified vertex count ṽer and modified normalized volume ω̃ of a summand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummandStats {
    pub ver_tilde: u64,
    pub omega_tilde: f64,
}

impl SummandStats {
    pub fn from_volume(vol: f64, ver: usize, kind: Kind) -> Result<Self, SpectraError> {
        let off = modified_offset(kind)
            .ok_or_else(|| SpectraError::BadParameter(format!("no modified volume for {kind}")))?;
        if ver <= off {
            return Err(SpectraError::BadParameter(format!(
                "need more than {off} vertices, got {ver}"
            )));
        }
        let ver_tilde = (ver - off) as u64;
        Ok(SummandStats {
            ver_tilde,
            omega_tilde: vol / ver_tilde as f64,
        })
    }
}

/// ω̃ of a connected sum: the ṽer-weighted average of the summands' ω̃.
pub fn weighted_average_check(p1: SummandStats, p2: SummandStats) -> f64 {
    let (v1, v2) = (p1.ver_tilde as f64, p2.ver_tilde as f64);
    (v1 * p1.omega_tilde + v2 * p2.omega_tilde) / (v1 + v2)
}

/// Largest vertex count of a polyhedron of `kind` with ω ≤ C.
pub fn discreteness_bound(c: f64, kind: Kind) -> Result<u64, SpectraError> {
    let v = v_oct_f64();
    let (lo, hi, bound) = match kind {
        Kind::Ideal => (v / 6.0, v / 4.0, 2.0 * v / (v - 4.0 * c)),
        Kind::Compact => (5.0 * v / 192.0, v / 32.0, 8.0 * v / (v - 32.0 * c)),
        other => {
            return Err(SpectraError::BadParameter(format!(
                "no bound for {other} polyhedra"
            )))
        }
    };
    // a relative slack keeps exact integer cases such as C = v_oct/6 on the integer
    if !(c >= lo * (1.0 - 1e-12) && c < hi) {
        return Err(SpectraError::OutOfRange { value: c, lo, hi });
    }
    Ok((bound * (1.0 + 1e-12)).floor() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingSchedule {
    pub p1: SummandStats,
    pub p2: SummandStats,
    pub target: f64,
    /// Copies (k, m) of the two summands, one pair per convergent.
    pub pairs: Vec<(u64, u64)>,
    pub predicted: f64,
}

/// ω̃ of k copies of the first summand glued to m copies of the second.
pub fn predicted_limit(p1: SummandStats, p2: SummandStats, k: u64, m: u64) -> f64 {
    let (a, b) = (
        k as f64 * p1.ver_tilde as f64,
        m as f64 * p2.ver_tilde as f64,
    );
    (a * p1.omega_tilde + b * p2.omega_tilde) / (a + b)
}

impl GluingSchedule {
    /// The prediction for the final pair in exact rational arithmetic, from the
    /// binary values of the inputs.
    pub fn predicted_exact(&self) -> BigRational {
        let (k, m) = *self.pairs.last().expect("schedules are never empty");
        let q = |x: f64| BigRational::from_float(x).expect("finite");
        let a = BigRational::from_integer(BigInt::from(k) * BigInt::from(self.p1.ver_tilde));
        let b = BigRational::from_integer(BigInt::from(m) * BigInt::from(self.p2.ver_tilde));
        (&a * q(self.p1.omega_tilde) + &b * q(self.p2.omega_tilde)) / (a + b)
    }
}

/// Continued-fraction convergents (h, k) of a nonnegative rational.
fn convergents(x: &BigRational, max_terms: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..max_terms {
        let a = rest.floor().to_integer();
        let h = &a * &h1 + &h0;
        let k = &a * &k1 + &k0;
        out.push((h.clone(), k.clone()));
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// Integer pairs (k, m) whose mixtures of `p1` and `p2` approach the target ω̃
/// `t`, generated by the convergents of the required copy ratio.
pub fn approximation_schedule(
    t: f64,
    p1: SummandStats,
    p2: SummandStats,
    eps: f64,
    max_terms: usize,
) -> Result<GluingSchedule, SpectraError> {
    if !(eps > 0.0) {
        return Err(SpectraError::BadParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let (a, b) = (p1.omega_tilde, p2.omega_tilde);
    let (lo, hi) = (a.min(b), a.max(b));
    let done = |pairs: Vec<(u64, u64)>, predicted: f64| GluingSchedule {
        p1,
        p2,
        target: t,
        pairs,
        predicted,
    };
    if t == a {
        return Ok(done(vec![(1, 0)], a));
    }
    if t == b {
        return Ok(done(vec![(0, 1)], b));
    }
    if !(t > lo && t < hi) {
        return Err(SpectraError::Unreachable { t, lo, hi });
    }
    let alpha = (b - t) / (b - a);
    let ratio = alpha * p2.ver_tilde as f64 / ((1.0 - alpha) * p1.ver_tilde as f64);
    let exact = BigRational::from_float(ratio).expect("finite ratio");
    let mut pairs = Vec::new();
    for (h, k) in convergents(&exact, max_terms) {
        if h.is_zero() || k.is_zero() || h.is_negative() {
            continue;
        }
        let (Some(h), Some(k)) = (h.to_u64(), k.to_u64()) else {
            break;
        };
        pairs.push((h, k));
        let predicted = predicted_limit(p1, p2, h, k);
        if (predicted - t).abs() <= eps {
            return Ok(done(pairs, predicted));
        }
    }
    Err(SpectraError::TermBudget(max_terms))
}

/// The smallest antiprism A(n) whose ω̃ exceeds v_oct/4 by less than
/// `margin`, with its summand stats.
pub fn antiprism_summand(margin: f64) -> Result<(u64, SummandStats), SpectraError> {
    if !(margin > 0.0) {
        return Err(SpectraError::BadParameter(format!(
            "margin must be positive, got {margin}"
        )));
    }
    let f = v_oct_f64() / 4.0;
    for n in 3..=1_000_000u64 {
        let s = SummandStats::from_volume(antiprism_formula(&1.0, n), 2 * n as usize, Kind::Ideal)?;
        if s.omega_tilde - f < margin {
            return Ok((n, s));
        }
    }
    Err(SpectraError::BadParameter(format!(
        "margin {margin} needs an antiprism beyond n = 10^6"
    )))
}

/// ω of the connected sum of m copies of a polyhedron with the given stats.
pub fn repeated_sum_omega(p: SummandStats, kind: Kind, m: u64) -> f64 {
    let off = modified_offset(kind).expect("ideal or compact") as f64;
    let v = (m * p.ver_tilde) as f64;
    p.omega_tilde * v / (v + off)
}

/// ω(#_m P) for m = 1..=m_max; increases towards ω̃(P).
pub fn repeated_sum_convergence(p: SummandStats, kind: Kind, m_max: u64) -> Vec<f64> {
    (1..=m_max)
        .map(|m| repeated_sum_omega(p, kind, m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Below,
    Discrete,
    UnknownGap,
    Dense,
    Above,
}

/// Where ω falls relative to the known structure of the spectrum.
pub fn classify(omega: f64, kind: Kind) -> Result<Region, SpectraError> {
    if !(omega >= 0.0) {
        return Err(SpectraError::BadParameter(format!(
            "ω must be nonnegative, got {omega}"
        )));
    }
    let lm = landmark_constants(PrecisionSpec::double()).expect("double precision is available");
    let c = |x: char| lm[&x].value;
    let region = match kind {
        Kind::Ideal => match omega {
            w if w < c('d') => Region::Below,
            w if w < c('f') => Region::Discrete,
            w if w <= c('k') => Region::Dense,
            _ => Region::Above,
        },
        Kind::Compact => match omega {
            w if w < c('a') => Region::Below,
            w if w < c('b') => Region::Discrete,
            w if w < c('c') => Region::UnknownGap,
            w if w <= c('e') => Region::Dense,
            _ => Region::Above,
        },
        other => {
            return Err(SpectraError::BadParameter(format!(
                "no spectrum for {other} polyhedra"
            )))
        }
    };
    Ok(region)
}
