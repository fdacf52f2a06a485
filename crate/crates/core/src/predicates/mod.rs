//! Exact-sign geometric predicates.
//!
//! Coordinates are doubles interpreted as exact rationals. Every predicate
//! first evaluates a floating-point expression with a forward error bound
//! (Shewchuk's static filter); when the bound cannot certify the sign it
//! falls back to exact dyadic-rational arithmetic, and the `*_perturbed`
//! variants additionally resolve exact zeros by symbolic perturbation keyed
//! on global vertex indices so that all answers in one run are mutually
//! consistent.

mod exact;
mod sos;

pub(crate) use exact::{cross_diff, dot_diff_sign, incircle_coplanar_sign, Dyadic};

use serde::{Deserialize, Serialize};

/// A point in R^3. Coordinates must be finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    /// Panics on non-finite coordinates; file parsers and cloud constructors
    /// validate first and report errors instead.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        assert!(
            x.is_finite() && y.is_finite() && z.is_finite(),
            "non-finite coordinate"
        );
        Point3 { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }

    pub fn dist2(self, other: Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn dist(self, other: Point3) -> f64 {
        self.dist2(other).sqrt()
    }

    /// Bit pattern with -0.0 normalized, for exact-equality hashing.
    pub(crate) fn key_bits(self) -> [u64; 3] {
        let norm = |v: f64| if v == 0.0 { 0.0f64.to_bits() } else { v.to_bits() };
        [norm(self.x), norm(self.y), norm(self.z)]
    }
}

/// Sign of an exact determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn from_i8(v: i8) -> Self {
        match v.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

// Static filter constants (Shewchuk). EPS is the rounding unit for f64.
const EPS: f64 = f64::EPSILON / 2.0;
const O3D_BOUND: f64 = (7.0 + 56.0 * EPS) * EPS;
const ISP_BOUND: f64 = (16.0 + 224.0 * EPS) * EPS;

/// Floating-point orientation determinant with certainty flag.
/// Returns `Some(sign)` when the static error bound certifies it.
fn orient3d_filter(a: Point3, b: Point3, c: Point3, d: Point3) -> Option<Sign> {
    let bax = b.x - a.x;
    let bay = b.y - a.y;
    let baz = b.z - a.z;
    let cax = c.x - a.x;
    let cay = c.y - a.y;
    let caz = c.z - a.z;
    let dax = d.x - a.x;
    let day = d.y - a.y;
    let daz = d.z - a.z;

    let cxdy = cax * day;
    let dxcy = dax * cay;
    let bxdy = bax * day;
    let dxby = dax * bay;
    let bxcy = bax * cay;
    let cxby = cax * bay;

    let det = baz * (cxdy - dxcy) - caz * (bxdy - dxby) + daz * (bxcy - cxby);
    let permanent = baz.abs() * (cxdy.abs() + dxcy.abs())
        + caz.abs() * (bxdy.abs() + dxby.abs())
        + daz.abs() * (bxcy.abs() + cxby.abs());
    let errbound = O3D_BOUND * permanent;
    if det > errbound {
        Some(Sign::Positive)
    } else if -det > errbound {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Floating-point raw insphere determinant (rows `p_i - e` with lifted
/// column) with certainty flag.
fn insphere_filter(a: Point3, b: Point3, c: Point3, d: Point3, e: Point3) -> Option<Sign> {
    let aex = a.x - e.x;
    let bex = b.x - e.x;
    let cex = c.x - e.x;
    let dex = d.x - e.x;
    let aey = a.y - e.y;
    let bey = b.y - e.y;
    let cey = c.y - e.y;
    let dey = d.y - e.y;
    let aez = a.z - e.z;
    let bez = b.z - e.z;
    let cez = c.z - e.z;
    let dez = d.z - e.z;

    let aexbey = aex * bey;
    let bexaey = bex * aey;
    let ab = aexbey - bexaey;
    let bexcey = bex * cey;
    let cexbey = cex * bey;
    let bc = bexcey - cexbey;
    let cexdey = cex * dey;
    let dexcey = dex * cey;
    let cd = cexdey - dexcey;
    let dexaey = dex * aey;
    let aexdey = aex * dey;
    let da = dexaey - aexdey;
    let aexcey = aex * cey;
    let cexaey = cex * aey;
    let ac = aexcey - cexaey;
    let bexdey = bex * dey;
    let dexbey = dex * bey;
    let bd = bexdey - dexbey;

    let abc = aez * bc - bez * ac + cez * ab;
    let bcd = bez * cd - cez * bd + dez * bc;
    let cda = cez * da + dez * ac + aez * cd;
    let dab = dez * ab + aez * bd + bez * da;

    let alift = aex * aex + aey * aey + aez * aez;
    let blift = bex * bex + bey * bey + bez * bez;
    let clift = cex * cex + cey * cey + cez * cez;
    let dlift = dex * dex + dey * dey + dez * dez;

    let det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

    let permanent = ((cexdey.abs() + dexcey.abs()) * bez.abs()
        + (dexbey.abs() + bexdey.abs()) * cez.abs()
        + (bexcey.abs() + cexbey.abs()) * dez.abs())
        * alift
        + ((dexaey.abs() + aexdey.abs()) * cez.abs()
            + (aexcey.abs() + cexaey.abs()) * dez.abs()
            + (cexdey.abs() + dexcey.abs()) * aez.abs())
            * blift
        + ((aexbey.abs() + bexaey.abs()) * dez.abs()
            + (bexdey.abs() + dexbey.abs()) * aez.abs()
            + (dexaey.abs() + aexdey.abs()) * bez.abs())
            * clift
        + ((bexcey.abs() + cexbey.abs()) * aez.abs()
            + (cexaey.abs() + aexcey.abs()) * bez.abs()
            + (aexbey.abs() + bexaey.abs()) * cez.abs())
            * dlift;
    let errbound = ISP_BOUND * permanent;
    if det > errbound {
        Some(Sign::Positive)
    } else if -det > errbound {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Exact sign of the orientation determinant of `(b-a, c-a, d-a)`.
/// Positive iff `d` lies on the positive side of the plane through
/// `(a, b, c)` (the side from which the triangle winds counterclockwise).
pub fn orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> Sign {
    if let Some(s) = orient3d_filter(a, b, c, d) {
        return s;
    }
    Sign::from_i8(exact::orient3d_sign(&[
        a.to_array(),
        b.to_array(),
        c.to_array(),
        d.to_array(),
    ]))
}

/// Orientation resolved by symbolic perturbation; never `Zero`.
/// `ids` are the global vertex indices of `(a, b, c, d)` and must be
/// pairwise distinct.
pub fn orient3d_perturbed(a: Point3, b: Point3, c: Point3, d: Point3, ids: [u32; 4]) -> Sign {
    debug_assert!(distinct(&ids));
    if let Some(s) = orient3d_filter(a, b, c, d) {
        return s;
    }
    Sign::from_i8(sos::orient3d_perturbed_sign(
        [a.to_array(), b.to_array(), c.to_array(), d.to_array()],
        ids,
    ))
}

/// Exact sign of the 5x5 insphere determinant, normalized so that
/// `Positive` means `e` lies strictly inside the circumsphere of a
/// positively oriented `(a, b, c, d)`.
pub fn insphere(a: Point3, b: Point3, c: Point3, d: Point3, e: Point3) -> Sign {
    if let Some(s) = insphere_filter(a, b, c, d, e) {
        return s.flip();
    }
    Sign::from_i8(exact::insphere_det_sign(&[
        a.to_array(),
        b.to_array(),
        c.to_array(),
        d.to_array(),
        e.to_array(),
    ]))
    .flip()
}

/// Insphere resolved by symbolic perturbation ordered by vertex index;
/// never `Zero`. Same normalization as [`insphere`].
pub fn insphere_perturbed(
    a: Point3,
    b: Point3,
    c: Point3,
    d: Point3,
    e: Point3,
    ids: [u32; 5],
) -> Sign {
    debug_assert!(distinct(&ids));
    if let Some(s) = insphere_filter(a, b, c, d, e) {
        return s.flip();
    }
    Sign::from_i8(sos::insphere_perturbed_sign(
        [
            a.to_array(),
            b.to_array(),
            c.to_array(),
            d.to_array(),
            e.to_array(),
        ],
        ids,
    ))
    .flip()
}

fn distinct<const N: usize>(ids: &[u32; N]) -> bool {
    let mut v = *ids;
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// Result of evaluating the pitch-identity display for five helix
/// parameters: the full lifted determinant, the pitch-free one, and whether
/// the `alpha^3` ratio holds to relative tolerance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PitchIdentity {
    pub full_det: f64,
    pub reduced_det: f64,
    pub ratio_ok: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum PitchIdentityError {
    #[error("pitch must be positive, got {0}")]
    NonPositivePitch(f64),
    #[error("pitch-identity inputs must be finite")]
    NonFinite,
}

/// Relative tolerance for the pitch-identity harness (floating-point check,
/// not a predicate: the entries are transcendental).
pub const PITCH_IDENTITY_REL_TOL: f64 = 1e-9;

/// Evaluates both determinants of the insphere pitch identity for five
/// points on the helix `(alpha*t, cos t, sin t)` and checks
/// `full == alpha^3 * reduced` to [`PITCH_IDENTITY_REL_TOL`].
pub fn verify_pitch_identity(t: [f64; 5], alpha: f64) -> Result<PitchIdentity, PitchIdentityError> {
    if !(alpha > 0.0) {
        return Err(PitchIdentityError::NonPositivePitch(alpha));
    }
    if !alpha.is_finite() || t.iter().any(|v| !v.is_finite()) {
        return Err(PitchIdentityError::NonFinite);
    }
    let mut full = [[0.0f64; 5]; 5];
    let mut reduced = [[0.0f64; 5]; 5];
    for (i, &ti) in t.iter().enumerate() {
        let (s, c) = ti.sin_cos();
        full[i] = [
            1.0,
            alpha * ti,
            c,
            s,
            alpha * alpha * ti * ti + c * c + s * s,
        ];
        reduced[i] = [1.0, ti, c, s, ti * ti];
    }
    let full_det = det5(full);
    let reduced_det = det5(reduced);
    let scaled = alpha * alpha * alpha * reduced_det;
    let ratio_ok =
        (full_det - scaled).abs() <= PITCH_IDENTITY_REL_TOL * full_det.abs().max(scaled.abs());
    Ok(PitchIdentity {
        full_det,
        reduced_det,
        ratio_ok,
    })
}

/// 5x5 determinant by LU with partial pivoting.
fn det5(mut m: [[f64; 5]; 5]) -> f64 {
    let mut det = 1.0;
    for k in 0..5 {
        let mut piv = k;
        for r in k + 1..5 {
            if m[r][k].abs() > m[piv][k].abs() {
                piv = r;
            }
        }
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        for r in k + 1..5 {
            let f = m[r][k] / m[k][k];
            for c in k..5 {
                m[r][c] -= f * m[k][c];
            }
        }
    }
    det
}
