//! Structural and geometric validation of a triangulation.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use super::{Tet, TetId, Triangulation, VertexId, GHOST};
use crate::predicates::{insphere_perturbed, orient3d, orient3d_perturbed, Sign};

#[derive(Clone, Debug, Serialize)]
pub struct ValidationOptions {
    /// Full empty-circumsphere scan (every tet against every vertex) is run
    /// up to this many vertices; above it, a seeded sample of pairs.
    pub full_scan_cap: usize,
    pub sample_pairs: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            full_scan_cap: 20_000,
            sample_pairs: 1000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Violation {
    NeighborLink { tet: TetId, detail: String },
    Orientation { tet: TetId, detail: String },
    GhostStructure { detail: String },
    EulerFinite { detail: String },
    EulerHull { detail: String },
    EmptySphere { tet: TetId, vertex: VertexId },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violation: Option<Violation>,
    pub full_scan: bool,
    pub pairs_checked: u64,
}

impl ValidationReport {
    fn fail(v: Violation) -> Self {
        ValidationReport {
            ok: false,
            violation: Some(v),
            full_scan: false,
            pairs_checked: 0,
        }
    }
}

impl Triangulation {
    /// Checks every invariant: mutual neighbor links with matching shared
    /// faces, positive (perturbed) orientation of finite tets, Euler
    /// identities for the solid complex and its hull, and the
    /// empty-circumsphere property. Returns the first violation found.
    pub fn validate(&self, opts: &ValidationOptions) -> ValidationReport {
        if let Some(v) = self.check_links() {
            return ValidationReport::fail(v);
        }
        if let Some(v) = self.check_orientation() {
            return ValidationReport::fail(v);
        }
        if let Some(v) = self.check_euler() {
            return ValidationReport::fail(v);
        }
        self.check_delaunay(opts)
    }

    fn check_links(&self) -> Option<Violation> {
        for (id, t) in self.live_tets() {
            if t.verts.iter().filter(|&&v| v == GHOST).count() > 1 {
                return Some(Violation::GhostStructure {
                    detail: format!("tet {id} has several ghost vertices"),
                });
            }
            for k in 0..4 {
                let nb = t.neighbors[k];
                if nb == super::NO_TET || !self.alive[nb as usize] {
                    return Some(Violation::NeighborLink {
                        tet: id,
                        detail: format!("slot {k} points at a dead or unset tet"),
                    });
                }
                let other = &self.tets[nb as usize];
                let Some(back) = other.neighbors.iter().position(|&x| x == id) else {
                    return Some(Violation::NeighborLink {
                        tet: id,
                        detail: format!("neighbor {nb} does not link back"),
                    });
                };
                let mut mine = face_set(t, k);
                let mut theirs = face_set(other, back);
                mine.sort_unstable();
                theirs.sort_unstable();
                if mine != theirs {
                    return Some(Violation::NeighborLink {
                        tet: id,
                        detail: format!("shared face mismatch with tet {nb}"),
                    });
                }
            }
        }
        None
    }

    fn check_orientation(&self) -> Option<Violation> {
        for (id, t) in self.live_tets() {
            if t.is_ghost() {
                continue;
            }
            let v = t.verts;
            let p = |i: usize| self.point(v[i]);
            if orient3d_perturbed(p(0), p(1), p(2), p(3), v) != Sign::Positive {
                return Some(Violation::Orientation {
                    tet: id,
                    detail: "negative perturbed orientation".into(),
                });
            }
            if orient3d(p(0), p(1), p(2), p(3)) == Sign::Negative {
                return Some(Violation::Orientation {
                    tet: id,
                    detail: "strictly inverted tet".into(),
                });
            }
        }
        None
    }

    fn check_euler(&self) -> Option<Violation> {
        // Finite complex: V - E + F - T = 1 (a 3-ball).
        let edges = self.edge_set();
        let tris = self.triangle_set();
        let tets = self.tets();
        let mut used = vec![false; self.cloud().len()];
        for t in &tets {
            for &v in t {
                used[v as usize] = true;
            }
        }
        let v = used.iter().filter(|&&u| u).count();
        if v != self.cloud().len() {
            return Some(Violation::EulerFinite {
                detail: format!("{} of {} vertices unused", self.cloud().len() - v, v),
            });
        }
        let chi = v as i64 - edges.len() as i64 + tris.len() as i64 - tets.len() as i64;
        if chi != 1 {
            return Some(Violation::EulerFinite {
                detail: format!("V-E+F-T = {chi}, expected 1"),
            });
        }
        // Hull: V - E + F = 2 and every hull edge on exactly two faces.
        let hull = self.hull_faces();
        let mut hull_verts: Vec<VertexId> = hull.iter().flatten().copied().collect();
        hull_verts.sort_unstable();
        hull_verts.dedup();
        let mut edge_count: HashMap<(VertexId, VertexId), u32> = HashMap::new();
        for f in &hull {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        if let Some((e, c)) = edge_count.iter().find(|(_, &c)| c != 2) {
            return Some(Violation::EulerHull {
                detail: format!("hull edge {e:?} lies on {c} faces"),
            });
        }
        let chi_h = hull_verts.len() as i64 - edge_count.len() as i64 + hull.len() as i64;
        if chi_h != 2 {
            return Some(Violation::EulerHull {
                detail: format!("hull V-E+F = {chi_h}, expected 2"),
            });
        }
        None
    }

    fn check_delaunay(&self, opts: &ValidationOptions) -> ValidationReport {
        let n = self.cloud().len();
        let pts = self.cloud().points();
        let finite: Vec<&Tet> = self
            .live_tets()
            .filter(|(_, t)| !t.is_ghost())
            .map(|(_, t)| t)
            .collect();
        if n <= opts.full_scan_cap {
            let pairs = (finite.len() as u64) * (n as u64 - 4);
            let bad = finite.par_iter().find_map_first(|t| {
                let v = t.verts;
                let p = |i: VertexId| self.point(i);
                // Guaranteed-outside prefilter: vertices beyond the tet's
                // floating-point circumsphere inflated by a forward error
                // bound cannot be inside the exact circumsphere.
                let ball = certified_circumball(
                    p(v[0]).to_array(),
                    p(v[1]).to_array(),
                    p(v[2]).to_array(),
                    p(v[3]).to_array(),
                );
                for (m, pm) in pts.iter().enumerate() {
                    let m = m as VertexId;
                    if v.contains(&m) {
                        continue;
                    }
                    if let Some((c, reach2)) = ball {
                        let dx = pm.x - c[0];
                        let dy = pm.y - c[1];
                        let dz = pm.z - c[2];
                        if dx * dx + dy * dy + dz * dz > reach2 {
                            continue;
                        }
                    }
                    if insphere_perturbed(
                        p(v[0]),
                        p(v[1]),
                        p(v[2]),
                        p(v[3]),
                        *pm,
                        [v[0], v[1], v[2], v[3], m],
                    ) == Sign::Positive
                    {
                        return Some((v, m));
                    }
                }
                None
            });
            match bad {
                Some((tet, vertex)) => ValidationReport {
                    ok: false,
                    violation: Some(Violation::EmptySphere {
                        tet: self
                            .live_tets()
                            .find(|(_, t)| t.verts == tet)
                            .map(|(id, _)| id)
                            .unwrap_or(0),
                        vertex,
                    }),
                    full_scan: true,
                    pairs_checked: pairs,
                },
                None => ValidationReport {
                    ok: true,
                    violation: None,
                    full_scan: true,
                    pairs_checked: pairs,
                },
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
            let mut checked = 0u64;
            for _ in 0..opts.sample_pairs {
                let t = finite[rng.gen_range(0..finite.len())];
                let m = rng.gen_range(0..n) as VertexId;
                if t.verts.contains(&m) {
                    continue;
                }
                checked += 1;
                let v = t.verts;
                let p = |i: VertexId| self.point(i);
                if insphere_perturbed(
                    p(v[0]),
                    p(v[1]),
                    p(v[2]),
                    p(v[3]),
                    p(m),
                    [v[0], v[1], v[2], v[3], m],
                ) == Sign::Positive
                {
                    return ValidationReport {
                        ok: false,
                        violation: Some(Violation::EmptySphere { tet: 0, vertex: m }),
                        full_scan: false,
                        pairs_checked: checked,
                    };
                }
            }
            ValidationReport {
                ok: true,
                violation: None,
                full_scan: false,
                pairs_checked: checked,
            }
        }
    }
}

fn face_set(t: &Tet, k: usize) -> [VertexId; 3] {
    let s = super::OUTWARD[k];
    [t.verts[s[0]], t.verts[s[1]], t.verts[s[2]]]
}

/// Floating-point circumcenter of a tet together with a certified squared
/// reach: any point whose squared distance to the center exceeds the reach
/// is guaranteed strictly outside the exact circumsphere. Returns `None`
/// when the error bound cannot certify anything useful (near-flat tets).
///
/// The center solves `M (c - p0) = b` with rows `M_i = 2 (p_i - p0)` and
/// `b_i = |p_i - p0|^2`, via Cramer. Each 3x3 determinant `d` computed in
/// f64 satisfies `|d - d*| <= GAMMA * perm(d)` where `perm` replaces every
/// subtraction by an addition of magnitudes; propagating through the
/// quotient bounds `|c - c*|` componentwise, and the exact circumradius is
/// at most `max_i |p_i - c| + |c - c*|`.
fn certified_circumball(
    p0: [f64; 3],
    p1: [f64; 3],
    p2: [f64; 3],
    p3: [f64; 3],
) -> Option<([f64; 3], f64)> {
    // Forward error coefficient for a 3x3 determinant evaluated by
    // cofactor expansion in f64 (generous).
    const GAMMA: f64 = 16.0 * f64::EPSILON;

    let row = |p: [f64; 3]| {
        [
            2.0 * (p[0] - p0[0]),
            2.0 * (p[1] - p0[1]),
            2.0 * (p[2] - p0[2]),
        ]
    };
    let rhs = |p: [f64; 3]| {
        let d = [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]];
        d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
    };
    let m = [row(p1), row(p2), row(p3)];
    let b = [rhs(p1), rhs(p2), rhs(p3)];

    let det3 = |a: &[[f64; 3]; 3]| -> (f64, f64) {
        let minors = [
            (a[1][1] * a[2][2], a[1][2] * a[2][1]),
            (a[1][0] * a[2][2], a[1][2] * a[2][0]),
            (a[1][0] * a[2][1], a[1][1] * a[2][0]),
        ];
        let det = a[0][0] * (minors[0].0 - minors[0].1) - a[0][1] * (minors[1].0 - minors[1].1)
            + a[0][2] * (minors[2].0 - minors[2].1);
        let perm = a[0][0].abs() * (minors[0].0.abs() + minors[0].1.abs())
            + a[0][1].abs() * (minors[1].0.abs() + minors[1].1.abs())
            + a[0][2].abs() * (minors[2].0.abs() + minors[2].1.abs());
        (det, perm)
    };

    let (d, d_perm) = det3(&m);
    let d_err = GAMMA * d_perm;
    if !(d.abs() > 4.0 * d_err) {
        return None;
    }
    let mut c = [0.0f64; 3];
    let mut c_err = 0.0f64;
    for j in 0..3 {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = b[i];
        }
        let (dj, dj_perm) = det3(&mj);
        let cj = dj / d;
        // |dj/d - dj*/d*| <= (|dj - dj*| + |cj| |d - d*|) / (|d| - |d - d*|)
        let ej = (GAMMA * dj_perm + cj.abs() * d_err) / (d.abs() - d_err);
        c[j] = p0[j] + cj;
        c_err += ej * ej;
    }
    let c_err = c_err.sqrt();
    let dist = |p: [f64; 3]| {
        let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    };
    let r_max = dist(p0).max(dist(p1)).max(dist(p2)).max(dist(p3));
    // Exact circumradius <= r_max + c_err; a query point q with
    // |q - c| > r_max + 2*c_err (plus rounding headroom) has
    // |q - c*| > r*, i.e. lies strictly outside.
    let reach = (r_max + 2.0 * c_err) * (1.0 + 1e-12);
    if !reach.is_finite() {
        return None;
    }
    Some((c, reach * reach))
}
