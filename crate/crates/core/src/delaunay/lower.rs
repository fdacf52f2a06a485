//! Lower-dimensional Delaunay complexes.
//!
//! Collinear and coplanar clouds cannot be tetrahedralized; their edges are
//! still well defined by the empty-sphere rule (a pair is joined iff some
//! sphere through both has no other point strictly inside), which for a
//! planar set reduces to empty circles in the common plane and for a
//! collinear set to consecutive pairs. Everything here is exact.

use super::{TriangulateError, VertexId};
use crate::cloud::PointCloud;
use crate::predicates::{cross_diff, dot_diff_sign, incircle_coplanar_sign, Dyadic};

/// Edge enumeration for coplanar clouds is O(n^4) exact arithmetic.
pub const LOWER_RANK2_CAP: usize = 64;

/// A degenerate complex of affine rank < 3, flagged as lower-dimensional.
#[derive(Clone, Debug)]
pub struct LowerComplex {
    /// 0 = single point, 1 = collinear, 2 = coplanar.
    pub rank: u8,
    /// Sorted unique unordered pairs per the empty-sphere definition.
    pub edges: Vec<(VertexId, VertexId)>,
}

pub(super) fn build(cloud: &PointCloud, rank: u8) -> Result<LowerComplex, TriangulateError> {
    let edges = match rank {
        0 => Vec::new(),
        1 => collinear_edges(cloud),
        2 => coplanar_edges(cloud)?,
        _ => unreachable!(),
    };
    Ok(LowerComplex { rank, edges })
}

/// Consecutive pairs along the common line, ordered exactly.
fn collinear_edges(cloud: &PointCloud) -> Vec<(VertexId, VertexId)> {
    let pts = cloud.points();
    let p0 = pts[0].to_array();
    let dir: Vec<Dyadic> = (0..3)
        .map(|j| Dyadic::from_f64(pts[1].to_array()[j]).sub(&Dyadic::from_f64(p0[j])))
        .collect();
    // Exact projection parameter (p_i - p_0) . dir.
    let mut keyed: Vec<(usize, Dyadic)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let a = p.to_array();
            let mut acc = Dyadic::zero();
            for j in 0..3 {
                let d = Dyadic::from_f64(a[j]).sub(&Dyadic::from_f64(p0[j]));
                acc = acc.add(&d.mul(&dir[j]));
            }
            (i, acc)
        })
        .collect();
    keyed.sort_by(|a, b| match a.1.sub(&b.1).signum() {
        -1 => std::cmp::Ordering::Less,
        1 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal, // distinct collinear points never tie
    });
    let mut edges: Vec<(VertexId, VertexId)> = keyed
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].0 as VertexId, w[1].0 as VertexId);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Delaunay-graph edges of a coplanar set: a pair is joined iff its
/// diametral disk is empty or some circumcircle through the pair and a
/// witness point is empty (the minimal empty disk through a pair is either
/// diametral or pinned by a third point).
fn coplanar_edges(cloud: &PointCloud) -> Result<Vec<(VertexId, VertexId)>, TriangulateError> {
    let pts = cloud.points();
    let n = pts.len();
    if n > LOWER_RANK2_CAP {
        return Err(TriangulateError::DegenerateTooLarge {
            rank: 2,
            n,
            cap: LOWER_RANK2_CAP,
        });
    }
    let arr: Vec<[f64; 3]> = pts.iter().map(|p| p.to_array()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        'pair: for j in i + 1..n {
            // Diametral disk.
            let diametral_empty = (0..n)
                .filter(|&m| m != i && m != j)
                .all(|m| dot_diff_sign(arr[i], arr[j], arr[m]) >= 0);
            if diametral_empty {
                edges.push((i as VertexId, j as VertexId));
                continue 'pair;
            }
            // Pinned disks through a witness.
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if cross_diff(arr[i], arr[j], arr[k]).iter().all(|d| d.is_zero()) {
                    continue; // collinear witness defines no circle
                }
                let empty = (0..n).filter(|&m| m != i && m != j && m != k).all(|m| {
                    // Negative = strictly inside the circumcircle.
                    incircle_coplanar_sign(arr[i], arr[j], arr[k], arr[m]) >= 0
                });
                if empty {
                    edges.push((i as VertexId, j as VertexId));
                    continue 'pair;
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}
