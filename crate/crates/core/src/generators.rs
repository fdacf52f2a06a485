//! Deterministic constructors for the adversarial-but-structured point-set
//! families: helical cylinder samples, the helix-lattice "mattress", skew
//! seam rows, and rows of sampled unit spheres. Each cloud carries its full
//! parameter record and, where it samples an analytic surface, the surface
//! model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cloud::{CloudError, PointCloud, Provenance};
use crate::predicates::Point3;
use crate::surface::SurfaceModel;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("{0}")]
    BadParams(String),
    #[error("generator emitted an invalid cloud: {0}")]
    Cloud(#[from] CloudError),
}

fn require(cond: bool, msg: &str) -> Result<(), GenError> {
    if cond {
        Ok(())
    } else {
        Err(GenError::BadParams(msg.to_string()))
    }
}

/// Helix sample parameters: points advance `1/angular_rate` radians and
/// `axial_step` along the axis per step, giving pitch
/// `axial_step * angular_rate`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct HelixParams {
    pub n: usize,
    pub angular_rate: f64,
    pub axial_step: f64,
}

impl HelixParams {
    pub fn pitch(&self) -> f64 {
        self.axial_step * self.angular_rate
    }
}

/// The square-root-spread cylinder sample: n points
/// `(t/n, cos(t/sqrt n), sin(t/sqrt n))` for `t = 1..=n`.
pub fn gen_helix_sqrt(n: usize) -> Result<PointCloud, GenError> {
    gen_helix_sqrt_opts(n, false)
}

/// As [`gen_helix_sqrt`], optionally adding spiral-sampled hemispherical
/// caps at both cylinder ends (the complexity claim is carried by the helix
/// alone, so caps default off).
pub fn gen_helix_sqrt_opts(n: usize, caps: bool) -> Result<PointCloud, GenError> {
    require(n >= 2, "helix needs n >= 2")?;
    let rate = (n as f64).sqrt();
    let mut pts = helix_points(n, rate, 1.0 / n as f64);
    let (x0, x1) = (1.0 / n as f64, 1.0);
    if caps {
        // Match the cylinder's per-area density: the lateral area 2*pi*(x1-x0)
        // holds n points; each unit-radius hemisphere has area 2*pi.
        let per_cap = (n as f64 / (x1 - x0)).round() as usize;
        for p in hemisphere_spiral(per_cap, [x1, 0.0, 0.0], 1.0) {
            pts.push(p);
        }
        for p in hemisphere_spiral(per_cap, [x0, 0.0, 0.0], -1.0) {
            pts.push(p);
        }
    }
    let prov = Provenance::new(
        "helix_sqrt",
        json!({ "n": n, "angular_rate": rate, "axial_step": 1.0 / n as f64, "caps": caps }),
        0,
    );
    let cloud = PointCloud::new(pts, prov)?;
    Ok(if caps {
        cloud.with_surface(SurfaceModel::CylinderCapped {
            radius: 1.0,
            x0,
            x1,
        })
    } else {
        cloud
    })
}

/// The general-spread helix `(t/n, cos(t/delta), sin(t/delta))`,
/// `t = 1..=n`, valid for `sqrt(n) <= delta <= n`.
pub fn gen_helix_spread(n: usize, delta: f64) -> Result<PointCloud, GenError> {
    require(n >= 2, "helix needs n >= 2")?;
    let lo = (n as f64).sqrt();
    let hi = n as f64;
    require(
        delta >= lo && delta <= hi,
        "spread target must satisfy sqrt(n) <= delta <= n",
    )?;
    let pts = helix_points(n, delta, 1.0 / n as f64);
    let prov = Provenance::new(
        "helix_spread",
        json!({ "n": n, "delta": delta, "angular_rate": delta, "axial_step": 1.0 / n as f64 }),
        0,
    );
    Ok(PointCloud::new(pts, prov)?)
}

fn helix_points(n: usize, angular_rate: f64, axial_step: f64) -> Vec<Point3> {
    (1..=n)
        .map(|t| {
            let tf = t as f64;
            let (s, c) = (tf / angular_rate).sin_cos();
            Point3::new(tf * axial_step, c, s)
        })
        .collect()
}

/// Derived mattress lattice parameters.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MattressParams {
    /// Lattice width (w x w helices).
    pub w: usize,
    /// Points per turn squared; each helix carries w*r points.
    pub r: usize,
    /// Emitted point count w^3 * r.
    pub emitted: usize,
}

impl MattressParams {
    /// Rounds the asymptotic recipes w ~ n/delta^2, r ~ delta^6/n^2 to
    /// integers >= 1.
    pub fn derive(n: usize, delta: f64) -> Result<Self, GenError> {
        let nf = n as f64;
        let w = (nf / (delta * delta)).round();
        let r = (delta.powi(6) / (nf * nf)).round();
        require(w >= 1.0, "mattress width rounds to zero")?;
        require(r >= 1.0, "mattress turn density rounds to zero")?;
        let (w, r) = (w as usize, r as usize);
        Ok(MattressParams {
            w,
            r,
            emitted: w * w * w * r,
        })
    }
}

/// A w x w square lattice of helices ("mattress"): points
/// `(t/r, 4i + cos(t/sqrt r), 4j + sin(t/sqrt r))` for `t = 1..=w*r`,
/// `i, j = 1..=w`. Valid for `n^(1/3) <= delta <= sqrt(n)`.
pub fn gen_mattress(n: usize, delta: f64) -> Result<PointCloud, GenError> {
    require(n >= 8, "mattress needs n >= 8")?;
    let nf = n as f64;
    require(
        delta >= nf.cbrt() * (1.0 - 1e-9) && delta <= nf.sqrt() * (1.0 + 1e-9),
        "spread target must satisfy n^(1/3) <= delta <= sqrt(n)",
    )?;
    let params = MattressParams::derive(n, delta)?;
    let (w, r) = (params.w, params.r);
    let rate = (r as f64).sqrt();
    let mut pts = Vec::with_capacity(params.emitted);
    for i in 1..=w {
        for j in 1..=w {
            for t in 1..=w * r {
                let tf = t as f64;
                let (s, c) = (tf / rate).sin_cos();
                pts.push(Point3::new(
                    tf / r as f64,
                    4.0 * i as f64 + c,
                    4.0 * j as f64 + s,
                ));
            }
        }
    }
    let prov = Provenance::new(
        "mattress",
        json!({ "n": n, "delta": delta, "w": w, "r": r, "emitted": params.emitted }),
        0,
    );
    Ok(PointCloud::new(pts, prov)?)
}

/// Spacing rule for single-turn helix samples.
#[derive(Clone, Copy, Debug)]
pub enum Spacing {
    Even,
    Random { seed: u64 },
}

/// Margin keeping single-turn parameters strictly inside (-pi, pi).
pub const SINGLE_TURN_MARGIN: f64 = 1e-3;

/// n points on `h(t) = (t, cos t, sin t)` with all parameters strictly
/// inside one turn `(-pi, pi)`.
pub fn gen_helix_single_turn(n: usize, spacing: Spacing) -> Result<PointCloud, GenError> {
    require(n >= 2, "single-turn helix needs n >= 2")?;
    let lo = -PI + SINGLE_TURN_MARGIN;
    let hi = PI - SINGLE_TURN_MARGIN;
    let (ts, seed, kind) = match spacing {
        Spacing::Even => {
            let step = (hi - lo) / (n - 1) as f64;
            let ts: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
            (ts, 0u64, "even")
        }
        Spacing::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ts: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (ts, seed, "random")
        }
    };
    let pts: Vec<Point3> = ts
        .iter()
        .map(|&t| {
            let (s, c) = t.sin_cos();
            Point3::new(t, c, s)
        })
        .collect();
    let prov = Provenance::new(
        "helix_single_turn",
        json!({ "n": n, "spacing": kind, "margin": SINGLE_TURN_MARGIN }),
        seed,
    );
    Ok(PointCloud::new(pts, prov)?)
}

/// Derived seam-row parameters for [`gen_seams`].
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SeamParams {
    /// Points per seam (odd).
    pub m: usize,
    /// Sampling density.
    pub eps: f64,
    /// Seam half-length w = (m-1) * eps / 2 = n * eps^2.
    pub w_extent: f64,
    /// Seam plane offset d = 4 * n * eps = 2 * (m - 1).
    pub d: f64,
}

impl SeamParams {
    pub fn derive(m: usize, eps: f64) -> Result<Self, GenError> {
        require(m >= 3 && m % 2 == 1, "seams need odd m >= 3")?;
        require(eps > 0.0 && eps.is_finite(), "eps must be positive")?;
        let w_extent = (m - 1) as f64 * eps / 2.0;
        let d = 2.0 * (m - 1) as f64;
        Ok(SeamParams {
            m,
            eps,
            w_extent,
            d,
        })
    }
}

/// Default sampling density for seam rows.
pub const SEAM_DEFAULT_EPS: f64 = 0.1;

/// Two skew seam rows: `p_i = (i*eps, 0, d)` and `q_j = (0, j*eps, -d)` for
/// `|i|, |j| <= (m-1)/2`. Only the seam skeletons of the two sausage
/// surfaces are emitted; in the triangulation every cross pair (p_i, q_j)
/// is an edge.
pub fn gen_seams(m: usize, eps: f64) -> Result<PointCloud, GenError> {
    let params = SeamParams::derive(m, eps)?;
    let h = (m as i64 - 1) / 2;
    let mut pts = Vec::with_capacity(2 * m);
    for i in -h..=h {
        pts.push(Point3::new(i as f64 * eps, 0.0, params.d));
    }
    for j in -h..=h {
        pts.push(Point3::new(0.0, j as f64 * eps, -params.d));
    }
    let prov = Provenance::new(
        "seams",
        json!({ "m": m, "eps": eps, "w_extent": params.w_extent, "d": params.d }),
        0,
    );
    Ok(PointCloud::new(pts, prov)?.with_surface(SurfaceModel::SausagePair {
        half_length: params.w_extent,
        offset: params.d,
    }))
}

/// First point index of each seam and the per-seam count: points
/// `[0, m)` lie on the +d seam, `[m, 2m)` on the -d seam.
pub fn seam_rows(m: usize) -> (std::ops::Range<u32>, std::ops::Range<u32>) {
    (0..m as u32, m as u32..2 * m as u32)
}

fn ball_row_centers(k: u32) -> Vec<Point3> {
    let h = (k / 4) as i64;
    let kf = k as f64;
    let mut centers = Vec::with_capacity(2 * (2 * h as usize + 1));
    for i in -h..=h {
        centers.push(Point3::new(i as f64 * kf, 0.0, kf * kf));
    }
    for j in -h..=h {
        centers.push(Point3::new(0.0, j as f64 * kf, -kf * kf));
    }
    centers
}

/// Unit spheres centered along two far-apart perpendicular rows
/// (`p_i = (ik, 0, k^2)`, `q_j = (0, jk, -k^2)`), each sphere carrying
/// `per_sphere` points of a deterministic low-discrepancy spiral; the seed
/// rotates the spiral per sphere. Every surface point has lfs = 1.
pub fn gen_ball_rows(k: u32, per_sphere: usize, seed: u64) -> Result<PointCloud, GenError> {
    require(k >= 8, "ball rows need k >= 8")?;
    require(per_sphere >= 1, "per_sphere must be at least 1")?;
    let centers = ball_row_centers(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(centers.len() * per_sphere);
    let mut sphere_of = Vec::with_capacity(pts.capacity());
    for (s, c) in centers.iter().enumerate() {
        let rot = random_rotation(&mut rng);
        for u in unit_spiral(per_sphere) {
            let v = mat_apply(&rot, u);
            pts.push(Point3::new(c.x + v[0], c.y + v[1], c.z + v[2]));
            sphere_of.push(s as u32);
        }
    }
    let prov = Provenance::new(
        "ball_rows",
        json!({
            "k": k,
            "per_sphere": per_sphere,
            "rows": centers.len() / 2,
            "sphere_of": sphere_of,
        }),
        seed,
    );
    Ok(PointCloud::new(pts, prov)?.with_surface(SurfaceModel::SphereUnion {
        centers,
        radius: 1.0,
    }))
}

/// n points drawn area-uniformly over the union of the ball-row spheres.
pub fn gen_random_ball_rows(k: u32, n: usize, seed: u64) -> Result<PointCloud, GenError> {
    require(k >= 4, "ball rows need k >= 4")?;
    require(n >= 10 * k as usize, "random sampling needs n >= 10k")?;
    let centers = ball_row_centers(k);
    let surface = SurfaceModel::SphereUnion {
        centers: centers.clone(),
        radius: 1.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    let mut sphere_of = Vec::with_capacity(n);
    for _ in 0..n {
        let s = rng.gen_range(0..centers.len());
        let c = centers[s];
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let theta: f64 = rng.gen_range(0.0..TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        pts.push(Point3::new(
            c.x + r * theta.cos(),
            c.y + r * theta.sin(),
            c.z + z,
        ));
        sphere_of.push(s as u32);
    }
    let prov = Provenance::new(
        "random_ball_rows",
        json!({ "k": k, "n": n, "rows": centers.len() / 2, "sphere_of": sphere_of }),
        seed,
    );
    Ok(PointCloud::new(pts, prov)?.with_surface(surface))
}

/// Per-point sphere index for ball-row clouds (from provenance).
pub fn sphere_assignments(cloud: &PointCloud) -> Option<Vec<u32>> {
    cloud
        .provenance()
        .params
        .get("sphere_of")
        .and_then(|v| serde_json::from_value(v.clone()).ok())
}

/// Golden-angle spiral on the unit sphere; deterministic and roughly
/// area-uniform (mesh norm ~ sqrt(4*pi/m)).
fn unit_spiral(m: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..m)
        .map(|s| {
            let z = 1.0 - (2.0 * s as f64 + 1.0) / m as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * s as f64;
            [r * theta.cos(), r * theta.sin(), z]
        })
        .collect()
}

/// Spiral sample of a unit hemisphere bulging in `side * +x` from `center`.
fn hemisphere_spiral(m: usize, center: [f64; 3], side: f64) -> Vec<Point3> {
    unit_spiral(2 * m)
        .into_iter()
        .filter(|u| u[2] > 0.0)
        .map(|u| {
            // Swing the spiral's +z pole onto the +/-x axis.
            let v = [side * u[2], u[1], -side * u[0]];
            Point3::new(center[0] + v[0], center[1] + v[1], center[2] + v[2])
        })
        .collect()
}

/// Uniform random rotation (Shoemake quaternion method).
fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let u1: f64 = rng.gen_range(0.0..1.0);
    let u2: f64 = rng.gen_range(0.0..TAU);
    let u3: f64 = rng.gen_range(0.0..TAU);
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (x, y, z, w) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

fn mat_apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_sqrt_formula() {
        // t = 1 of n = 4: (1/4, cos(1/2), sin(1/2)).
        let c = gen_helix_sqrt(4).unwrap();
        let p = c.points()[0];
        assert_eq!(p.x, 0.25);
        assert_eq!(p.y, 0.5f64.cos());
        assert_eq!(p.z, 0.5f64.sin());
    }

    #[test]
    fn helix_spread_specializes_to_sqrt() {
        let n = 1000;
        let a = gen_helix_sqrt(n).unwrap();
        let b = gen_helix_spread(n, (n as f64).sqrt()).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn helix_spread_rejects_out_of_range() {
        assert!(gen_helix_spread(64, 4.0).is_err()); // below sqrt(64)
        assert!(gen_helix_spread(64, 65.0).is_err()); // above n
        assert!(gen_helix_spread(64, 8.0).is_ok());
        assert!(gen_helix_spread(64, 64.0).is_ok());
    }

    #[test]
    fn mattress_params_examples() {
        let p = MattressParams::derive(4096, 16.0).unwrap();
        assert_eq!((p.w, p.r), (16, 1));
        assert_eq!(p.emitted, 4096);
        // r = 64, w = 4: n = w^3 r = 4096, delta = w sqrt(r) = 32.
        let p = MattressParams::derive(4096, 32.0).unwrap();
        assert_eq!((p.w, p.r), (4, 64));
        assert_eq!(p.emitted, 4096);
    }

    #[test]
    fn mattress_single_column_is_a_helix() {
        let c = gen_mattress(8, 2.0).unwrap();
        // w = 2, r = 1 at (8, 2.0); force w = 1 via direct params instead.
        let p = MattressParams::derive(27, 9.0 * 3.0f64.sqrt()).ok();
        // Not all (n, delta) give w = 1; just check the emitted count here.
        assert_eq!(c.len(), c.provenance().params["emitted"].as_u64().unwrap() as usize);
        let _ = p;
    }

    #[test]
    fn single_turn_inside_open_interval() {
        for spacing in [Spacing::Even, Spacing::Random { seed: 9 }] {
            let c = gen_helix_single_turn(48, spacing).unwrap();
            assert_eq!(c.len(), 48);
            for p in c.points() {
                assert!(p.x > -PI && p.x < PI);
                assert!((p.y - p.x.cos()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn seams_layout() {
        let c = gen_seams(65, SEAM_DEFAULT_EPS).unwrap();
        assert_eq!(c.len(), 130);
        let d = 2.0 * 64.0;
        for (i, p) in c.points().iter().enumerate() {
            if i < 65 {
                assert_eq!(p.y, 0.0);
                assert_eq!(p.z, d);
            } else {
                assert_eq!(p.x, 0.0);
                assert_eq!(p.z, -d);
            }
        }
        // d = 4 * n * eps with n = (m-1)/(2 eps).
        let params = SeamParams::derive(65, SEAM_DEFAULT_EPS).unwrap();
        let n_impl = (65.0 - 1.0) / (2.0 * SEAM_DEFAULT_EPS);
        assert!((params.d - 4.0 * n_impl * SEAM_DEFAULT_EPS).abs() < 1e-12);
        assert!((params.w_extent - n_impl * SEAM_DEFAULT_EPS * SEAM_DEFAULT_EPS).abs() < 1e-12);
    }

    #[test]
    fn ball_rows_deterministic_and_on_spheres() {
        let a = gen_ball_rows(8, 64, 3).unwrap();
        let b = gen_ball_rows(8, 64, 3).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.len(), 10 * 64); // 2 * (2*2+1) = 10 spheres for k = 8
        let assign = sphere_assignments(&a).unwrap();
        let centers = match a.surface().unwrap() {
            SurfaceModel::SphereUnion { centers, .. } => centers.clone(),
            _ => panic!(),
        };
        for (p, &s) in a.points().iter().zip(&assign) {
            let c = centers[s as usize];
            assert!((p.dist(c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_ball_rows_deterministic() {
        let a = gen_random_ball_rows(16, 640, 11).unwrap();
        let b = gen_random_ball_rows(16, 640, 11).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(gen_random_ball_rows(16, 100, 11).is_err()); // n < 10k
    }

    #[test]
    fn capped_helix_has_surface_and_more_points() {
        let plain = gen_helix_sqrt(64).unwrap();
        let capped = gen_helix_sqrt_opts(64, true).unwrap();
        assert!(plain.surface().is_none());
        assert!(capped.surface().is_some());
        assert!(capped.len() > plain.len() + 64);
    }
}
