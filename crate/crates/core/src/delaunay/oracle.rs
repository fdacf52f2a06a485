//! Brute-force Delaunay edge oracle.
//!
//! Enumerates all point quadruples, keeps those whose (perturbed)
//! circumsphere is empty, and returns the union of their edges. This is the
//! empty-sphere definition taken literally and serves as ground truth for
//! the incremental engine on small instances.

use rayon::prelude::*;

use super::VertexId;
use crate::cloud::PointCloud;
use crate::predicates::{insphere_perturbed, orient3d, orient3d_perturbed, Sign};

pub const ORACLE_MAX_POINTS: usize = 128;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("oracle needs at least 4 points, got {0}")]
    TooFew(usize),
    #[error("oracle is capped at {ORACLE_MAX_POINTS} points (O(n^5) cost), got {0}")]
    TooLarge(usize),
    #[error("oracle requires full-dimensional input (points are all coplanar)")]
    Coplanar,
}

/// Sorted unique Delaunay edges of `cloud` by exhaustive search.
pub fn oracle_edges(cloud: &PointCloud) -> Result<Vec<(VertexId, VertexId)>, OracleError> {
    let pts = cloud.points();
    let n = pts.len();
    if n < 4 {
        return Err(OracleError::TooFew(n));
    }
    if n > ORACLE_MAX_POINTS {
        return Err(OracleError::TooLarge(n));
    }
    if !full_dimensional(cloud) {
        return Err(OracleError::Coplanar);
    }

    let mut packed: Vec<u64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local: Vec<u64> = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let quad = [i as u32, j as u32, k as u32, l as u32];
                        let orient = orient3d_perturbed(
                            pts[i], pts[j], pts[k], pts[l],
                            quad,
                        );
                        let mut empty = true;
                        for (m, &pm) in pts.iter().enumerate() {
                            if m == i || m == j || m == k || m == l {
                                continue;
                            }
                            let s = insphere_perturbed(
                                pts[i], pts[j], pts[k], pts[l], pm,
                                [quad[0], quad[1], quad[2], quad[3], m as u32],
                            );
                            // Inside the perturbed circumsphere iff the
                            // insphere sign matches the orientation sign.
                            if s == orient {
                                empty = false;
                                break;
                            }
                        }
                        if empty {
                            for a in 0..4 {
                                for b in a + 1..4 {
                                    let (x, y) = (quad[a].min(quad[b]), quad[a].max(quad[b]));
                                    local.push((x as u64) << 32 | y as u64);
                                }
                            }
                        }
                    }
                }
            }
            local
        })
        .collect();
    packed.sort_unstable();
    packed.dedup();
    Ok(packed
        .into_iter()
        .map(|p| ((p >> 32) as u32, (p & 0xffff_ffff) as u32))
        .collect())
}

fn full_dimensional(cloud: &PointCloud) -> bool {
    let pts = cloud.points();
    let n = pts.len();
    let mut tri = None;
    'outer: for j in 1..n {
        for k in j + 1..n {
            if !super::collinear(pts, 0, j as u32, k as u32) {
                tri = Some((j, k));
                break 'outer;
            }
        }
    }
    let Some((j, k)) = tri else { return false };
    (1..n).any(|l| {
        l != j && l != k && orient3d(pts[0], pts[j], pts[k], pts[l]) != Sign::Zero
    })
}
