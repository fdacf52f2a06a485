//! Spread, sampling-quality, and neighbor-law measurements.

use rayon::prelude::*;
use serde::Serialize;

use crate::cloud::PointCloud;
use crate::delaunay::Triangulation;
use crate::predicates::Point3;
use crate::surface::SurfaceModel;

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("spread needs at least two points")]
    TooFewPoints,
    #[error("probe sampling needs at least 1000 probes, got {0}")]
    TooFewProbes(usize),
    #[error("cloud surface tag does not match the surface argument")]
    SurfaceMismatch,
    #[error("radius must be positive")]
    BadRadius,
}

/// Closest pair, diameter, and their ratio (the spread).
#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub closest_pair: (u32, u32),
    pub closest_dist: f64,
    pub diameter_pair: (u32, u32),
    pub diameter: f64,
    pub spread: f64,
    /// spread / n^(1/3): reported against the packing minimum, not asserted.
    pub cuberoot_ratio: f64,
}

/// Exact closest pair by uniform-grid hashing at cell size = current best
/// (expected linear) and exact diameter by brute force.
pub fn spread(cloud: &PointCloud) -> Result<SpreadReport, MetricsError> {
    let pts = cloud.points();
    let n = pts.len();
    if n < 2 {
        return Err(MetricsError::TooFewPoints);
    }
    let (closest_pair, closest_d2) = closest_pair_grid(pts);
    let (diameter_pair, diam_d2) = diameter_brute(pts);
    let closest_dist = closest_d2.sqrt();
    let diameter = diam_d2.sqrt();
    let spread = diameter / closest_dist;
    Ok(SpreadReport {
        closest_pair,
        closest_dist,
        diameter_pair,
        diameter,
        spread,
        cuberoot_ratio: spread / (n as f64).cbrt(),
    })
}

fn cell_of(p: Point3, cell: f64) -> (i64, i64, i64) {
    (
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    )
}

fn closest_pair_grid(pts: &[Point3]) -> ((u32, u32), f64) {
    use std::collections::HashMap;
    let mut best = pts[0].dist2(pts[1]);
    let mut pair = (0u32, 1u32);
    let mut cell = best.sqrt().max(f64::MIN_POSITIVE);
    let mut grid: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
    grid.entry(cell_of(pts[0], cell)).or_default().push(0);

    let mut i = 1;
    while i < pts.len() {
        let p = pts[i];
        let (cx, cy, cz) = cell_of(p, cell);
        let mut shrunk = false;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &j in bucket {
                            let d2 = p.dist2(pts[j as usize]);
                            if d2 < best {
                                best = d2;
                                pair = (j.min(i as u32), j.max(i as u32));
                                shrunk = true;
                            }
                        }
                    }
                }
            }
        }
        if shrunk {
            // Rebuild at the new scale with everything seen so far.
            cell = best.sqrt().max(f64::MIN_POSITIVE);
            grid.clear();
            for j in 0..=i {
                grid.entry(cell_of(pts[j], cell)).or_default().push(j as u32);
            }
        } else {
            grid.entry((cx, cy, cz)).or_default().push(i as u32);
        }
        i += 1;
    }
    (pair, best)
}

fn diameter_brute(pts: &[Point3]) -> ((u32, u32), f64) {
    let n = pts.len();
    let best = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut loc = (0.0f64, (0u32, 0u32));
            for j in i + 1..n {
                let d2 = pts[i].dist2(pts[j]);
                if d2 > loc.0 {
                    loc = (d2, (i as u32, j as u32));
                }
            }
            loc
        })
        .reduce(
            || (0.0, (0, 0)),
            |a, b| {
                if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) {
                    b
                } else {
                    a
                }
            },
        );
    (best.1, best.0)
}

/// Sample measure `mu = integral of lfs^-2` over the surface; closed form
/// since every supported model has constant lfs.
pub fn sample_measure(surface: &SurfaceModel) -> f64 {
    surface.sample_measure()
}

/// Probe-based sampling-quality report.
#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    /// max over probes of (distance to nearest sample) / lfs.
    pub eps_measured: f64,
    /// Range of the second-nearest sampling density over probes.
    pub sd2_min: f64,
    pub sd2_max: f64,
    /// eps/4 <= sd2 <= eps held at every probe.
    pub uniform_ok: bool,
    /// n * eps^2 / mu(surface).
    pub parsimony_ratio: f64,
    /// The cloud passes as an eps-sample: eps_measured <= eps.
    pub passes: bool,
    pub probes: usize,
    pub seed: u64,
}

/// Draws seeded area-uniform probes on the surface and measures how well
/// the cloud covers it relative to the target density `eps`.
pub fn check_sample(
    cloud: &PointCloud,
    surface: &SurfaceModel,
    eps: f64,
    probes: usize,
    seed: u64,
) -> Result<SampleReport, MetricsError> {
    use rand::SeedableRng;
    if probes < 1000 {
        return Err(MetricsError::TooFewProbes(probes));
    }
    if let Some(tag) = cloud.surface() {
        let same = serde_json::to_value(tag).unwrap() == serde_json::to_value(surface).unwrap();
        if !same {
            return Err(MetricsError::SurfaceMismatch);
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let probe_pts: Vec<Point3> = (0..probes).map(|_| surface.sample(&mut rng)).collect();
    let pts = cloud.points();
    let stats: Vec<(f64, f64)> = probe_pts
        .par_iter()
        .map(|&x| {
            let mut d1 = f64::INFINITY;
            let mut d2 = f64::INFINITY;
            for p in pts {
                let d = x.dist2(*p);
                if d < d1 {
                    d2 = d1;
                    d1 = d;
                } else if d < d2 {
                    d2 = d;
                }
            }
            let lfs = surface.lfs(x);
            (d1.sqrt() / lfs, d2.sqrt() / lfs)
        })
        .collect();
    let eps_measured = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let sd2_min = stats.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let sd2_max = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(SampleReport {
        eps_measured,
        sd2_min,
        sd2_max,
        uniform_ok: sd2_min >= eps / 4.0 && sd2_max <= eps,
        parsimony_ratio: pts.len() as f64 * eps * eps / surface.sample_measure(),
        passes: eps_measured <= eps,
        probes,
        seed,
    })
}

/// Delaunay adjacency with coordinates rescaled so the closest pair is at
/// distance 2, the normalization the degree and reach monitors are stated in.
pub struct NeighborGeometry {
    adj: Vec<Vec<u32>>,
    scaled: Vec<Point3>,
}

pub fn neighbor_geometry(tri: &Triangulation) -> Result<NeighborGeometry, MetricsError> {
    let rep = spread(tri.cloud())?;
    let scale = 2.0 / rep.closest_dist;
    let pts = tri.cloud().points();
    let scaled: Vec<Point3> = pts
        .iter()
        .map(|p| Point3::new(p.x * scale, p.y * scale, p.z * scale))
        .collect();
    let mut adj = vec![Vec::new(); pts.len()];
    for (a, b) in tri.edge_set() {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    Ok(NeighborGeometry { adj, scaled })
}

impl NeighborGeometry {
    /// Per-vertex count of Delaunay neighbors within normalized distance r.
    pub fn counts_within(&self, r: f64) -> Vec<u32> {
        let r2 = r * r;
        self.adj
            .par_iter()
            .enumerate()
            .map(|(v, nb)| {
                nb.iter()
                    .filter(|&&w| self.scaled[v].dist2(self.scaled[w as usize]) <= r2)
                    .count() as u32
            })
            .collect()
    }

    pub fn max_within(&self, r: f64) -> u32 {
        self.counts_within(r).into_iter().max().unwrap_or(0)
    }

    /// Number of vertices whose longest Delaunay edge reaches at least r.
    pub fn far_reaching_count(&self, r: f64) -> usize {
        let r2 = r * r;
        self.adj
            .par_iter()
            .enumerate()
            .filter(|(v, nb)| {
                nb.iter()
                    .any(|&w| self.scaled[*v].dist2(self.scaled[w as usize]) >= r2)
            })
            .count()
    }
}

/// Per-vertex Delaunay-neighbor counts within normalized distance r
/// (closest pair rescaled to 2).
pub fn neighbors_within(tri: &Triangulation, r: f64) -> Result<Vec<u32>, MetricsError> {
    if !(r > 0.0) {
        return Err(MetricsError::BadRadius);
    }
    Ok(neighbor_geometry(tri)?.counts_within(r))
}

/// Number of vertices with a Delaunay neighbor at normalized distance >= r.
pub fn far_reaching_count(tri: &Triangulation, r: f64) -> Result<usize, MetricsError> {
    if !(r > 0.0) {
        return Err(MetricsError::BadRadius);
    }
    Ok(neighbor_geometry(tri)?.far_reaching_count(r))
}

/// Upper-bound monitor: edges against spread^4 (reported; the constant is
/// unspecified) and against n^2 (hard bound).
#[derive(Clone, Debug, Serialize)]
pub struct EdgeBoundMonitor {
    pub n_edges: usize,
    pub spread: f64,
    pub delta4_bound: f64,
    pub within_delta4: bool,
    pub n_squared_ok: bool,
}

pub fn monitor_edge_bounds(tri: &Triangulation) -> Result<EdgeBoundMonitor, MetricsError> {
    let rep = spread(tri.cloud())?;
    let edges = tri.edge_set().len();
    let n = tri.cloud().len();
    let delta4 = rep.spread.powi(4);
    Ok(EdgeBoundMonitor {
        n_edges: edges,
        spread: rep.spread,
        delta4_bound: delta4,
        within_delta4: (edges as f64) <= delta4,
        n_squared_ok: edges as u64 <= (n as u64) * (n as u64),
    })
}
