//! Volumes of ideal tetrahedra from their cross-ratio shape parameter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{lobachevsky, NumericsError};

/// Volume of an ideal tetrahedron, with a flag for flat shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TetVolume {
    pub value: f64,
    pub degenerate: bool,
}

/// Λ(arg z) + Λ(arg 1/(1−z)) + Λ(arg(1 − 1/z)): positive when Im z > 0,
/// negative for the mirror shape.
pub fn signed_tet_volume(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    lobachevsky(z.arg()) + lobachevsky((one / (one - z)).arg()) + lobachevsky((one - one / z).arg())
}

/// Unsigned volume of the ideal tetrahedron with shape `z`. Real shapes give
/// a flat tetrahedron of volume zero and are flagged.
pub fn ideal_tet_volume(z: Complex64) -> Result<TetVolume, NumericsError> {
    if !z.re.is_finite()
        || !z.im.is_finite()
        || z == Complex64::new(0.0, 0.0)
        || z == Complex64::new(1.0, 0.0)
    {
        return Err(NumericsError::DegenerateShape(z));
    }
    if z.im == 0.0 {
        return Ok(TetVolume {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(TetVolume {
        value: signed_tet_volume(z).abs(),
        degenerate: false,
    })
}
