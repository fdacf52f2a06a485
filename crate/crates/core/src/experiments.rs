//! Scaling studies and claim verifications: log-log exponent fits over the
//! generator families, the bitangent-sphere exclusion check, pitch/axis
//! scaling invariance, and seam bipartiteness.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::delaunay::{triangulate, Triangulation};
use crate::generators::{
    self, gen_helix_spread, gen_helix_sqrt, gen_seams, seam_rows, GenError, SEAM_DEFAULT_EPS,
};
use crate::metrics;
use crate::predicates::Point3;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("scaling runs need at least 3 sizes, got {0}")]
    TooFewSizes(usize),
    #[error("time budget exhausted after {got} of {want} sizes (need >= 3 records to fit)")]
    BudgetTooTight { got: usize, want: usize },
    #[error("unknown experiment family {0:?}")]
    UnknownFamily(String),
    #[error("parameter out of range: {0}")]
    BadParams(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("triangulation failed: {0}")]
    Triangulate(String),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
}

/// One measured triangulation in a scaling study.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingRecord {
    /// The requested size parameter (n, m, or k depending on family).
    pub size: usize,
    pub n: usize,
    /// The fitted abscissa (n, m, or row count depending on family).
    pub abscissa: f64,
    pub spread: f64,
    pub n_edges: usize,
    /// Wall time is recorded but never asserted and never serialized into
    /// deterministic outputs.
    #[serde(skip)]
    pub wall_secs: f64,
}

/// Least-squares log-log fit of edge counts.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub family: String,
    pub records: Vec<ScalingRecord>,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// True when the time budget cut the run short (>= 3 records kept).
    pub partial: bool,
}

/// Generator family for scaling runs.
#[derive(Clone, Debug)]
pub enum Family {
    /// Sizes are point counts n of the sqrt-spread helix.
    HelixSqrt,
    /// Sizes are n; the spread target is n * ratio (abscissa n).
    HelixSpreadRatio { ratio: f64 },
    /// Sizes are odd per-seam counts m (abscissa m).
    Seams { eps: f64 },
    /// Sizes are scale parameters k (abscissa = points per row).
    BallRows { per_sphere: usize, seed: u64 },
}

impl Family {
    pub fn id(&self) -> &'static str {
        match self {
            Family::HelixSqrt => "helix_sqrt",
            Family::HelixSpreadRatio { .. } => "helix_spread_ratio",
            Family::Seams { .. } => "seams",
            Family::BallRows { .. } => "ball_rows",
        }
    }

    fn generate(&self, size: usize) -> Result<(PointCloud, f64), ExperimentError> {
        match self {
            Family::HelixSqrt => Ok((gen_helix_sqrt(size)?, size as f64)),
            Family::HelixSpreadRatio { ratio } => {
                let delta = size as f64 * ratio;
                Ok((gen_helix_spread(size, delta)?, size as f64))
            }
            Family::Seams { eps } => Ok((gen_seams(size, *eps)?, size as f64)),
            Family::BallRows { per_sphere, seed } => {
                let k = size as u32;
                let rows = (2 * (k / 4) + 1) as f64;
                Ok((generators::gen_ball_rows(k, *per_sphere, *seed)?, rows))
            }
        }
    }
}

/// Generates, triangulates, and fits the log-log edge-count slope over the
/// given sizes. Aborts (keeping partial records) when `budget_secs` is
/// exceeded between sizes.
pub fn run_scaling(
    family: &Family,
    sizes: &[usize],
    seed: u64,
    budget_secs: f64,
) -> Result<ScalingFit, ExperimentError> {
    if sizes.len() < 3 {
        return Err(ExperimentError::TooFewSizes(sizes.len()));
    }
    let start = Instant::now();
    let mut records = Vec::with_capacity(sizes.len());
    let mut partial = false;
    for &size in sizes {
        if start.elapsed().as_secs_f64() > budget_secs {
            partial = true;
            break;
        }
        let (cloud, abscissa) = family.generate(size)?;
        let t0 = Instant::now();
        let tri = triangulate(&cloud, seed)
            .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
            .unwrap_full();
        let wall_secs = t0.elapsed().as_secs_f64();
        let rep = metrics::spread(&cloud)?;
        records.push(ScalingRecord {
            size,
            n: cloud.len(),
            abscissa,
            spread: rep.spread,
            n_edges: tri.edge_set().len(),
            wall_secs,
        });
    }
    if records.len() < 3 {
        return Err(ExperimentError::BudgetTooTight {
            got: records.len(),
            want: sizes.len(),
        });
    }
    let (slope, intercept, residual) = fit_loglog(&records);
    Ok(ScalingFit {
        family: family.id().to_string(),
        records,
        slope,
        intercept,
        residual,
        partial,
    })
}

fn fit_loglog(records: &[ScalingRecord]) -> (f64, f64, f64) {
    let xs: Vec<f64> = records.iter().map(|r| r.abscissa.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| (r.n_edges as f64).ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, residual)
}

/// True iff the cloud's Delaunay triangulation is the complete graph.
pub fn verify_neighborly(cloud: &PointCloud) -> Result<bool, ExperimentError> {
    let n = cloud.len();
    if n > 128 {
        return Err(ExperimentError::BadParams(format!(
            "neighborly check capped at 128 points, got {n}"
        )));
    }
    let tri = triangulate(cloud, 1)
        .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
        .unwrap_full();
    Ok(tri.edge_set().len() == n * (n - 1) / 2)
}

/// The unique sphere through `h(t)` and `h(-t)` tangent to the helix
/// `h(t) = (t, cos t, sin t)` at both points. Symmetry pins the center to
/// the y-axis; the tangency condition `(h(t) - c) . h'(t) = 0` gives
/// `a = -t / sin t`, and the radius follows from `|h(t) - c|`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BitangentSphere {
    pub t: f64,
    pub center_y: f64,
    pub radius: f64,
}

impl BitangentSphere {
    pub fn new(t: f64) -> Result<Self, ExperimentError> {
        if !(t > 0.0 && t < PI - 1e-3) {
            return Err(ExperimentError::BadParams(format!(
                "bitangent parameter must lie in (0, pi - 1e-3), got {t}"
            )));
        }
        let a = -t / t.sin();
        let r2 = t * t + a * a + 1.0 - 2.0 * a * t.cos();
        Ok(BitangentSphere {
            t,
            center_y: a,
            radius: r2.sqrt(),
        })
    }

    fn center(&self) -> Point3 {
        Point3::new(0.0, self.center_y, 0.0)
    }

    /// | |h(+/-t) - center| - radius |, maximized over the two tangencies.
    pub fn tangency_residual(&self) -> f64 {
        let c = self.center();
        [self.t, -self.t]
            .iter()
            .map(|&s| (helix(s).dist(c) - self.radius).abs())
            .fold(0.0, f64::max)
    }

    /// First-order contact: |(h(t) - c) . h'(t)| / (|h(t) - c| |h'(t)|).
    pub fn first_order_residual(&self) -> f64 {
        let c = self.center();
        [self.t, -self.t]
            .iter()
            .map(|&s| {
                let p = helix(s);
                let d = [p.x - c.x, p.y - c.y, p.z - c.z];
                let tang = [1.0, -s.sin(), s.cos()];
                let dot = d[0] * tang[0] + d[1] * tang[1] + d[2] * tang[2];
                let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                let tn = (tang[0] * tang[0] + tang[1] * tang[1] + tang[2] * tang[2]).sqrt();
                (dot / (dn * tn)).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn helix(t: f64) -> Point3 {
    Point3::new(t, t.cos(), t.sin())
}

#[derive(Clone, Debug, Serialize)]
pub struct BitangentReport {
    pub t: f64,
    pub center_y: f64,
    pub radius: f64,
    pub samples: usize,
    pub tangency_residual: f64,
    pub first_order_residual: f64,
    /// Minimum of |h(s) - c|^2 - r^2 outside the tangency windows
    /// (positive = the sphere excludes the rest of the helix).
    pub min_margin: f64,
    pub pass: bool,
}

/// Half-width of the parameter window around each tangency that is exempt
/// from the strict-exclusion check.
pub const BITANGENT_WINDOW: f64 = 1e-6;

/// Samples `h(s)` at `samples` points of `(-pi, pi)` and verifies the
/// bitangent sphere at `t` keeps all of them strictly outside, except
/// within the tangency windows.
pub fn verify_bitangent(t: f64, samples: usize) -> Result<BitangentReport, ExperimentError> {
    let sphere = BitangentSphere::new(t)?;
    let c = sphere.center();
    let r2 = sphere.radius * sphere.radius;
    let mut min_margin = f64::INFINITY;
    let mut pass = true;
    for i in 0..samples {
        let s = -PI + (2.0 * PI) * (i as f64 + 0.5) / samples as f64;
        if (s - t).abs() <= BITANGENT_WINDOW || (s + t).abs() <= BITANGENT_WINDOW {
            continue;
        }
        let p = helix(s);
        let margin = p.dist2(c) - r2;
        if margin <= 0.0 {
            pass = false;
        }
        if margin < min_margin {
            min_margin = margin;
        }
    }
    let tangency_residual = sphere.tangency_residual();
    let first_order_residual = sphere.first_order_residual();
    pass = pass && tangency_residual <= 1e-9 && first_order_residual <= 1e-7;
    Ok(BitangentReport {
        t,
        center_y: sphere.center_y,
        radius: sphere.radius,
        samples,
        tangency_residual,
        first_order_residual,
        min_margin,
        pass,
    })
}

/// Parameter range for seeded pitch-invariance helix samples: several turns
/// so the triangulation is structured but not complete.
const PITCH_T_RANGE: f64 = 4.0 * PI;

/// Builds seeded helix samples `(alpha t, cos t, sin t)` for each pitch and
/// reports whether every pitch yields the same Delaunay edge set.
pub fn verify_pitch_invariance(
    n: usize,
    alphas: &[f64],
    seed: u64,
) -> Result<bool, ExperimentError> {
    use rand::{Rng, SeedableRng};
    if n > 4096 {
        return Err(ExperimentError::BadParams(format!(
            "pitch invariance capped at 4096 points, got {n}"
        )));
    }
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(ExperimentError::BadParams("pitch must be positive".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ts: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(-PITCH_T_RANGE..PITCH_T_RANGE))
        .collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut reference: Option<Vec<(u32, u32)>> = None;
    for &alpha in alphas {
        let pts: Vec<Point3> = ts
            .iter()
            .map(|&t| {
                let (s, c) = t.sin_cos();
                Point3::new(alpha * t, c, s)
            })
            .collect();
        let cloud = PointCloud::new(
            pts,
            crate::cloud::Provenance::new(
                "pitch_invariance",
                serde_json::json!({ "n": n, "alpha": alpha }),
                seed,
            ),
        )
        .map_err(|e| ExperimentError::Triangulate(e.to_string()))?;
        let edges = triangulate(&cloud, seed)
            .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
            .unwrap_full()
            .edge_set();
        match &reference {
            None => reference = Some(edges),
            Some(r) => {
                if *r != edges {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Edge sets before and after scaling all x-coordinates must coincide for
/// any point set on coaxial circular cylinders.
pub fn verify_axis_scaling(
    cloud: &PointCloud,
    factors: &[f64],
    seed: u64,
) -> Result<bool, ExperimentError> {
    let reference = triangulate(cloud, seed)
        .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
        .unwrap_full()
        .edge_set();
    for &f in factors {
        if !(f > 0.0) {
            return Err(ExperimentError::BadParams("scale must be positive".into()));
        }
        let scaled = cloud
            .scaled_x(f)
            .map_err(|e| ExperimentError::Triangulate(e.to_string()))?;
        let edges = triangulate(&scaled, seed)
            .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
            .unwrap_full()
            .edge_set();
        if edges != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff all m^2 cross-seam pairs appear as Delaunay edges of the seam
/// cloud.
pub fn verify_seam_bipartite(m: usize, eps: f64) -> Result<bool, ExperimentError> {
    if !(3..=65).contains(&m) || m % 2 == 0 {
        return Err(ExperimentError::BadParams(format!(
            "seam check needs odd m in [3, 65], got {m}"
        )));
    }
    let cloud = gen_seams(m, eps)?;
    let tri = triangulate(&cloud, 1)
        .map_err(|e| ExperimentError::Triangulate(e.to_string()))?
        .unwrap_full();
    Ok(count_cross_seam_edges(&tri, m) == m * m)
}

/// Number of Delaunay edges joining the two seams.
pub fn count_cross_seam_edges(tri: &Triangulation, m: usize) -> usize {
    let (row_p, row_q) = seam_rows(m);
    tri.edge_set()
        .iter()
        .filter(|(a, b)| {
            (row_p.contains(a) && row_q.contains(b)) || (row_q.contains(a) && row_p.contains(b))
        })
        .count()
}

/// Number of Delaunay edges whose endpoints lie on spheres of opposite
/// rows in a ball-rows triangulation.
pub fn cross_row_edge_count(tri: &Triangulation, cloud: &PointCloud) -> Option<usize> {
    let assign = generators::sphere_assignments(cloud)?;
    let spheres = 1 + *assign.iter().max()? as usize;
    let row_len = spheres / 2;
    let count = tri
        .edge_set()
        .iter()
        .filter(|(a, b)| {
            let (sa, sb) = (assign[*a as usize] as usize, assign[*b as usize] as usize);
            (sa < row_len) != (sb < row_len)
        })
        .count();
    Some(count)
}

/// Fraction of cross-row sphere pairs realizing at least one Delaunay edge
/// in a ball-rows triangulation.
pub fn cross_pair_coverage(tri: &Triangulation, cloud: &PointCloud) -> Option<f64> {
    let assign = generators::sphere_assignments(cloud)?;
    let spheres = 1 + *assign.iter().max()? as usize;
    let row_len = spheres / 2;
    let mut seen = vec![false; spheres * spheres];
    for (a, b) in tri.edge_set() {
        let (sa, sb) = (assign[a as usize] as usize, assign[b as usize] as usize);
        seen[sa * spheres + sb] = true;
        seen[sb * spheres + sa] = true;
    }
    let mut hit = 0usize;
    for p in 0..row_len {
        for q in row_len..spheres {
            if seen[p * spheres + q] {
                hit += 1;
            }
        }
    }
    Some(hit as f64 / (row_len * (spheres - row_len)) as f64)
}

/// Declarative experiment configuration (JSON file).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: String,
    pub sizes: Vec<usize>,
    pub seed: u64,
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub per_sphere: Option<usize>,
    pub tolerances: Tolerances,
    #[serde(default = "default_budget")]
    pub time_budget_secs: f64,
}

fn default_budget() -> f64 {
    300.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    pub expected_slope: f64,
    pub slope_tol: f64,
    /// Optional per-size floor: n_edges >= coeff * n^exponent.
    #[serde(default)]
    pub min_edges_coeff: Option<f64>,
    #[serde(default)]
    pub min_edges_exponent: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutcome {
    /// The config that produced this outcome, echoed for provenance.
    pub config: ExperimentConfig,
    pub fit: ScalingFit,
    pub slope_ok: bool,
    pub floor_ok: bool,
    pub pass: bool,
}

/// Runs a configured scaling experiment and checks its tolerances.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, ExperimentError> {
    let family = match config.family.as_str() {
        "helix_sqrt" => Family::HelixSqrt,
        "helix_spread_ratio" => Family::HelixSpreadRatio {
            ratio: config.ratio.ok_or_else(|| {
                ExperimentError::BadParams("helix_spread_ratio needs \"ratio\"".into())
            })?,
        },
        "seams" => Family::Seams {
            eps: config.eps.unwrap_or(SEAM_DEFAULT_EPS),
        },
        "ball_rows" => Family::BallRows {
            per_sphere: config.per_sphere.unwrap_or(64),
            seed: config.seed,
        },
        other => return Err(ExperimentError::UnknownFamily(other.to_string())),
    };
    let fit = run_scaling(&family, &config.sizes, config.seed, config.time_budget_secs)?;
    let slope_ok = (fit.slope - config.tolerances.expected_slope).abs()
        <= config.tolerances.slope_tol;
    let floor_ok = match (
        config.tolerances.min_edges_coeff,
        config.tolerances.min_edges_exponent,
    ) {
        (Some(c), Some(e)) => fit
            .records
            .iter()
            .all(|r| r.n_edges as f64 >= c * (r.n as f64).powf(e)),
        _ => true,
    };
    Ok(ExperimentOutcome {
        config: config.clone(),
        slope_ok,
        floor_ok,
        pass: slope_ok && floor_ok,
        fit,
    })
}
