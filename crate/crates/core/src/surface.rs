//! Analytic surface models with known local feature size.
//!
//! Each generator that samples a surface tags its cloud with one of these
//! models; all of them have constant lfs, so the sample measure
//! `mu = integral of lfs^-2` reduces to `area / lfs^2` in closed form.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::predicates::Point3;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SurfaceModel {
    /// Right circular cylinder around the x-axis with hemispherical caps
    /// (a capsule). The medial axis is the axis segment, so lfs == radius
    /// everywhere.
    CylinderCapped { radius: f64, x0: f64, x1: f64 },
    /// Two unit-radius sausages (Minkowski sum of a unit sphere and a
    /// segment): one with axis from (-w,0,d+1) to (w,0,d+1), one from
    /// (0,-w,-d-1) to (0,w,-d-1). Far apart relative to their radius, so
    /// lfs == 1 on both components.
    SausagePair { half_length: f64, offset: f64 },
    /// Union of well-separated spheres of a common radius; lfs == radius.
    SphereUnion { centers: Vec<Point3>, radius: f64 },
}

impl SurfaceModel {
    /// Local feature size; constant for every supported model.
    pub fn lfs(&self, _p: Point3) -> f64 {
        match self {
            SurfaceModel::CylinderCapped { radius, .. } => *radius,
            SurfaceModel::SausagePair { .. } => 1.0,
            SurfaceModel::SphereUnion { radius, .. } => *radius,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            SurfaceModel::CylinderCapped { radius, x0, x1 } => {
                TAU * radius * (x1 - x0) + 4.0 * PI * radius * radius
            }
            SurfaceModel::SausagePair { half_length, .. } => {
                // Two capsules: cylinder 2*pi*(2w) plus sphere 4*pi each.
                2.0 * (TAU * 2.0 * half_length + 4.0 * PI)
            }
            SurfaceModel::SphereUnion { centers, radius } => {
                4.0 * PI * radius * radius * centers.len() as f64
            }
        }
    }

    /// Sample measure `area / lfs^2` (lfs is constant).
    pub fn sample_measure(&self) -> f64 {
        let lfs = self.lfs(Point3::new(0.0, 0.0, 0.0));
        self.area() / (lfs * lfs)
    }

    /// Draws one area-uniform point on the surface.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point3 {
        match self {
            SurfaceModel::CylinderCapped { radius, x0, x1 } => {
                sample_capsule(rng, *radius, [*x0, 0.0, 0.0], [*x1, 0.0, 0.0])
            }
            SurfaceModel::SausagePair {
                half_length,
                offset,
            } => {
                let w = *half_length;
                let d = *offset;
                if rng.gen_bool(0.5) {
                    sample_capsule(rng, 1.0, [-w, 0.0, d + 1.0], [w, 0.0, d + 1.0])
                } else {
                    sample_capsule(rng, 1.0, [0.0, -w, -d - 1.0], [0.0, w, -d - 1.0])
                }
            }
            SurfaceModel::SphereUnion { centers, radius } => {
                let c = centers[rng.gen_range(0..centers.len())];
                let u = unit_sphere(rng);
                Point3::new(
                    c.x + radius * u[0],
                    c.y + radius * u[1],
                    c.z + radius * u[2],
                )
            }
        }
    }
}

/// Uniform point on the unit sphere (Archimedes: axial coordinate uniform).
fn unit_sphere<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let theta: f64 = rng.gen_range(0.0..TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * theta.cos(), r * theta.sin(), z]
}

/// Area-uniform point on a capsule with the given axis endpoints.
fn sample_capsule<R: Rng>(rng: &mut R, radius: f64, a: [f64; 3], b: [f64; 3]) -> Point3 {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2) + (b[2] - a[2]).powi(2)).sqrt();
    let axis = [(b[0] - a[0]) / len, (b[1] - a[1]) / len, (b[2] - a[2]) / len];
    let cyl_area = TAU * radius * len;
    let cap_area = 4.0 * PI * radius * radius;
    // Orthonormal frame (axis, u, v).
    let ref_dir = if axis[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u = cross(axis, ref_dir);
    let un = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u = [u[0] / un, u[1] / un, u[2] / un];
    let v = cross(axis, u);
    if rng.gen_range(0.0..cyl_area + cap_area) < cyl_area {
        let t: f64 = rng.gen_range(0.0..len);
        let phi: f64 = rng.gen_range(0.0..TAU);
        let (s, c) = phi.sin_cos();
        Point3::new(
            a[0] + axis[0] * t + radius * (c * u[0] + s * v[0]),
            a[1] + axis[1] * t + radius * (c * u[1] + s * v[1]),
            a[2] + axis[2] * t + radius * (c * u[2] + s * v[2]),
        )
    } else {
        // Hemisphere at one end, bulging away from the segment.
        let (center, sign) = if rng.gen_bool(0.5) { (b, 1.0) } else { (a, -1.0) };
        let h: f64 = rng.gen_range(0.0..=1.0); // axial component, uniform
        let phi: f64 = rng.gen_range(0.0..TAU);
        let rr = (1.0 - h * h).max(0.0).sqrt();
        let (s, c) = phi.sin_cos();
        Point3::new(
            center[0] + radius * (sign * h * axis[0] + rr * (c * u[0] + s * v[0])),
            center[1] + radius * (sign * h * axis[1] + rr * (c * u[1] + s * v[1])),
            center[2] + radius * (sign * h * axis[2] + rr * (c * u[2] + s * v[2])),
        )
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_union_measure() {
        let m = SurfaceModel::SphereUnion {
            centers: vec![Point3::new(0.0, 0.0, 0.0); 1],
            radius: 1.0,
        };
        assert!((m.sample_measure() - 4.0 * PI).abs() < 1e-12);
        let m7 = SurfaceModel::SphereUnion {
            centers: (0..7).map(|i| Point3::new(10.0 * i as f64, 0.0, 0.0)).collect(),
            radius: 1.0,
        };
        assert!((m7.sample_measure() - 28.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn samples_lie_on_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let caps = SurfaceModel::CylinderCapped {
            radius: 1.0,
            x0: 0.0,
            x1: 2.0,
        };
        for _ in 0..2000 {
            let p = caps.sample(&mut rng);
            // Distance to the axis segment must equal the radius.
            let ax = p.x.clamp(0.0, 2.0);
            let d = ((p.x - ax).powi(2) + p.y * p.y + p.z * p.z).sqrt();
            assert!((d - 1.0).abs() < 1e-12, "off-surface sample {p:?}");
        }
        let pair = SurfaceModel::SausagePair {
            half_length: 3.0,
            offset: 8.0,
        };
        for _ in 0..2000 {
            let p = pair.sample(&mut rng);
            let d1 = dist_to_segment(p, [-3.0, 0.0, 9.0], [3.0, 0.0, 9.0]);
            let d2 = dist_to_segment(p, [0.0, -3.0, -9.0], [0.0, 3.0, -9.0]);
            let d = d1.min(d2);
            assert!((d - 1.0).abs() < 1e-12, "off-surface sample {p:?}");
        }
    }

    fn dist_to_segment(p: Point3, a: [f64; 3], b: [f64; 3]) -> f64 {
        let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let ap = [p.x - a[0], p.y - a[1], p.z - a[2]];
        let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
        let t = ((ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2).clamp(0.0, 1.0);
        let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
        ((p.x - q[0]).powi(2) + (p.y - q[1]).powi(2) + (p.z - q[2]).powi(2)).sqrt()
    }
}
