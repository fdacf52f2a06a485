//! Exact arithmetic over the dyadic rationals.
//!
//! Every finite `f64` is `mantissa * 2^exponent` for integer mantissa and
//! exponent, and determinants are polynomials, so predicate signs can be
//! decided exactly with big-integer mantissas and a shared power-of-two
//! scale. No division, no gcd.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// An exact dyadic rational `mant * 2^exp`.
#[derive(Clone, Debug)]
pub(crate) struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Splits a finite double into `(mantissa, exponent)` with
/// `x == mantissa * 2^exponent` exactly.
fn decode(x: f64) -> (i64, i64) {
    debug_assert!(x.is_finite());
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), biased - 1075)
    };
    (if negative { -mant } else { mant }, exp)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        let (m, e) = decode(x);
        Dyadic {
            mant: BigInt::from(m),
            exp: e,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// -1, 0, or +1.
    pub fn signum(&self) -> i8 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Exact doubling (used for the 2x/2y/2z factors of the lifted column).
    pub fn twice(&self) -> Self {
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + 1,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << u64::try_from(self.exp - exp).expect("exponent underflow");
        let b = &other.mant << u64::try_from(other.exp - exp).expect("exponent underflow");
        Dyadic { mant: a + b, exp }
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }
}

fn det2(a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic) -> Dyadic {
    a.mul(d).sub(&b.mul(c))
}

fn det3(m: &[[Dyadic; 3]; 3]) -> Dyadic {
    let c0 = det2(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let c1 = det2(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let c2 = det2(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    m[0][0].mul(&c0).sub(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
}

fn det4(m: &[[Dyadic; 4]; 4]) -> Dyadic {
    let mut acc = Dyadic::zero();
    for col in 0..4 {
        if m[0][col].is_zero() {
            continue;
        }
        let mut minor: [[Dyadic; 3]; 3] =
            core::array::from_fn(|_| core::array::from_fn(|_| Dyadic::zero()));
        for (i, row) in m.iter().enumerate().skip(1) {
            let mut jj = 0;
            for (j, v) in row.iter().enumerate() {
                if j != col {
                    minor[i - 1][jj] = v.clone();
                    jj += 1;
                }
            }
        }
        let term = m[0][col].mul(&det3(&minor));
        acc = if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Exact sign of `det [b-a; c-a; d-a]`.
pub(crate) fn orient3d_sign(p: &[[f64; 3]; 4]) -> i8 {
    let d = |i: usize, j: usize| Dyadic::from_f64(p[i][j]).sub(&Dyadic::from_f64(p[0][j]));
    let m = [
        [d(1, 0), d(1, 1), d(1, 2)],
        [d(2, 0), d(2, 1), d(2, 2)],
        [d(3, 0), d(3, 1), d(3, 2)],
    ];
    det3(&m).signum()
}

/// Exact sign of the raw insphere determinant: rows `(p_i - e, |p_i - e|^2)`
/// for the first four points, `e` being the fifth. Negative means `e` lies
/// strictly inside the circumsphere of a positively oriented quadruple.
pub(crate) fn insphere_det_sign(p: &[[f64; 3]; 5]) -> i8 {
    let diff = |i: usize, j: usize| Dyadic::from_f64(p[i][j]).sub(&Dyadic::from_f64(p[4][j]));
    let mut m: [[Dyadic; 4]; 4] =
        core::array::from_fn(|_| core::array::from_fn(|_| Dyadic::zero()));
    for (i, row) in m.iter_mut().enumerate() {
        let x = diff(i, 0);
        let y = diff(i, 1);
        let z = diff(i, 2);
        let lift = x.square().add(&y.square()).add(&z.square());
        *row = [x, y, z, lift];
    }
    det4(&m).signum()
}

/// Exact sign of a dot product `(a-p) . (b-p)`; used by the degenerate
/// (lower-dimensional) Delaunay path for diametral-ball tests.
pub(crate) fn dot_diff_sign(a: [f64; 3], b: [f64; 3], p: [f64; 3]) -> i8 {
    let mut acc = Dyadic::zero();
    for j in 0..3 {
        let u = Dyadic::from_f64(a[j]).sub(&Dyadic::from_f64(p[j]));
        let v = Dyadic::from_f64(b[j]).sub(&Dyadic::from_f64(p[j]));
        acc = acc.add(&u.mul(&v));
    }
    acc.signum()
}

/// Exact cross product `(b-a) x (c-a)` as dyadics.
pub(crate) fn cross_diff(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [Dyadic; 3] {
    let u: Vec<Dyadic> = (0..3)
        .map(|j| Dyadic::from_f64(b[j]).sub(&Dyadic::from_f64(a[j])))
        .collect();
    let v: Vec<Dyadic> = (0..3)
        .map(|j| Dyadic::from_f64(c[j]).sub(&Dyadic::from_f64(a[j])))
        .collect();
    [
        det2(&u[1], &u[2], &v[1], &v[2]),
        det2(&u[2], &u[0], &v[2], &v[0]),
        det2(&u[0], &u[1], &v[0], &v[1]),
    ]
}

/// In-plane in-circle test for coplanar points: sign of the insphere
/// determinant of `(a, b, c, a + n)` against `d`, where `n = (b-a) x (c-a)`
/// is taken exactly. The sphere through those four points cuts the common
/// plane exactly in the circumcircle of `(a, b, c)`, and `orient(a,b,c,a+n)`
/// is `|n|^2 > 0`, so `d` lies strictly inside the circumcircle iff the
/// returned sign is negative.
pub(crate) fn incircle_coplanar_sign(
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
) -> i8 {
    let n = cross_diff(a, b, c);
    let row = |p: [f64; 3]| -> [Dyadic; 4] {
        let x = Dyadic::from_f64(p[0]).sub(&Dyadic::from_f64(d[0]));
        let y = Dyadic::from_f64(p[1]).sub(&Dyadic::from_f64(d[1]));
        let z = Dyadic::from_f64(p[2]).sub(&Dyadic::from_f64(d[2]));
        let lift = x.square().add(&y.square()).add(&z.square());
        [x, y, z, lift]
    };
    let ra = row(a);
    let rb = row(b);
    let rc = row(c);
    // q = a + n, so q - d = (a - d) + n, all exact.
    let qx = ra[0].add(&n[0]);
    let qy = ra[1].add(&n[1]);
    let qz = ra[2].add(&n[2]);
    let qlift = qx.square().add(&qy.square()).add(&qz.square());
    let m = [ra, rb, rc, [qx, qy, qz, qlift]];
    det4(&m).signum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_round_trips() {
        for &x in &[0.0, 1.0, -1.5, 0.1, 1e-300, -3.7e208, f64::MIN_POSITIVE] {
            let (m, e) = decode(x);
            // Reconstruct via exact arithmetic at small exponents only.
            if (-60..=60).contains(&e) {
                let back = (m as f64) * 2f64.powi(e as i32);
                assert_eq!(back, x);
            } else {
                assert_ne!(m, 0, "nonzero input must have nonzero mantissa");
            }
        }
    }

    #[test]
    fn dyadic_ring_ops() {
        let a = Dyadic::from_f64(0.1);
        let b = Dyadic::from_f64(0.2);
        // 0.1 + 0.2 != 0.3 exactly in binary; the exact sum minus the
        // rounded 0.3 must be nonzero with a definite sign.
        let s = a.add(&b).sub(&Dyadic::from_f64(0.3));
        assert_eq!(s.signum(), 1);
        assert_eq!(a.mul(&b).sub(&b.mul(&a)).signum(), 0);
        assert_eq!(a.twice().sub(&a.add(&a)).signum(), 0);
    }

    #[test]
    fn orient_exact_signs() {
        let pos = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(orient3d_sign(&pos), 1);
        let flat = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert_eq!(orient3d_sign(&flat), 0);
    }
}
