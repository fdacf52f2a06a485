//! Incremental 3D Delaunay triangulation.
//!
//! Bowyer-Watson insertion with cavity re-triangulation. The convex hull is
//! closed by ghost tetrahedra sharing a symbolic vertex at infinity, so
//! every face has exactly two incident tets and insertion is uniform inside
//! and outside the hull. All geometric questions go through the perturbed
//! exact predicates, so degenerate inputs (collinear seams, cospherical
//! lattices) triangulate verbatim and the result is independent of
//! insertion order.

mod lower;
mod oracle;
mod stats;
mod validate;

pub use lower::LowerComplex;
pub use oracle::{oracle_edges, OracleError, ORACLE_MAX_POINTS};
pub use stats::ComplexityStats;
pub use validate::{ValidationOptions, ValidationReport, Violation};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use crate::cloud::PointCloud;
use crate::predicates::{insphere_perturbed, orient3d, orient3d_perturbed, Point3, Sign};

pub type VertexId = u32;
pub type TetId = u32;

/// Symbolic vertex at infinity closing the hull.
pub const GHOST: VertexId = u32::MAX;
const NO_TET: TetId = u32::MAX;

/// `OUTWARD[k]` lists the slots of the face opposite slot `k`, ordered so
/// the face winds counterclockwise seen from outside a positively oriented
/// tet (equivalently, `orient3d(face, verts[k])` is negative).
const OUTWARD: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

#[derive(Clone, Copy, Debug)]
pub struct Tet {
    /// Vertex ids, possibly one `GHOST`. Finite tets are positively
    /// oriented under the perturbed orientation predicate.
    pub verts: [VertexId; 4],
    /// `neighbors[k]` is the tet across the face opposite `verts[k]`.
    pub neighbors: [TetId; 4],
}

impl Tet {
    pub fn is_ghost(&self) -> bool {
        self.verts.contains(&GHOST)
    }

    fn ghost_slot(&self) -> Option<usize> {
        self.verts.iter().position(|&v| v == GHOST)
    }

    fn slot_of(&self, v: VertexId) -> usize {
        self.verts.iter().position(|&w| w == v).expect("vertex in tet")
    }

    fn outward_face(&self, k: usize) -> [VertexId; 3] {
        let s = OUTWARD[k];
        [self.verts[s[0]], self.verts[s[1]], self.verts[s[2]]]
    }

    /// Hull face of a ghost tet, wound counterclockwise seen from outside.
    /// `outward_face` at the ghost slot points into the hull (that reversal
    /// is what keeps shared-face orientations consistent between
    /// neighbors), so the outward hull face is its reverse.
    fn hull_face(&self) -> [VertexId; 3] {
        let g = self.ghost_slot().expect("ghost tet");
        let f = self.outward_face(g);
        [f[0], f[2], f[1]]
    }
}

/// Result of triangulating a cloud: a full-dimensional tetrahedral complex
/// or a lower-dimensional one (all points collinear or coplanar), whose
/// edges are still reported via the empty-sphere definition.
pub enum DelaunayComplex {
    Full(Triangulation),
    Lower(LowerComplex),
}

impl DelaunayComplex {
    pub fn edge_set(&self) -> Vec<(VertexId, VertexId)> {
        match self {
            DelaunayComplex::Full(t) => t.edge_set(),
            DelaunayComplex::Lower(l) => l.edges.clone(),
        }
    }

    pub fn as_full(&self) -> Option<&Triangulation> {
        match self {
            DelaunayComplex::Full(t) => Some(t),
            DelaunayComplex::Lower(_) => None,
        }
    }

    pub fn unwrap_full(self) -> Triangulation {
        match self {
            DelaunayComplex::Full(t) => t,
            DelaunayComplex::Lower(l) => {
                panic!("expected a full-dimensional triangulation, got rank {}", l.rank)
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TriangulateError {
    #[error(
        "cloud is degenerate (affine rank {rank}) and has {n} points; \
         the lower-dimensional edge enumeration is capped at {cap}"
    )]
    DegenerateTooLarge { rank: u8, n: usize, cap: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub struct Triangulation {
    cloud: PointCloud,
    tets: Vec<Tet>,
    alive: Vec<bool>,
    free: Vec<TetId>,
    mark: Vec<u32>,
    generation: u32,
    hint: TetId,
}

/// Builds the Delaunay triangulation of `cloud`, inserting points in a
/// seeded-shuffle order. Collinear and coplanar clouds yield a
/// lower-dimensional complex instead.
pub fn triangulate(cloud: &PointCloud, seed: u64) -> Result<DelaunayComplex, TriangulateError> {
    let n = cloud.len();
    let mut order: Vec<VertexId> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    match Triangulation::bootstrap(cloud, &order) {
        Ok((mut tri, rest)) => {
            for v in rest {
                tri.insert(v);
            }
            Ok(DelaunayComplex::Full(tri))
        }
        Err(rank) => Ok(DelaunayComplex::Lower(lower::build(cloud, rank)?)),
    }
}

impl Triangulation {
    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn point(&self, v: VertexId) -> Point3 {
        self.cloud.points()[v as usize]
    }

    /// Finite tets, each positively oriented.
    pub fn tets(&self) -> Vec<[VertexId; 4]> {
        self.live_tets()
            .filter(|(_, t)| !t.is_ghost())
            .map(|(_, t)| t.verts)
            .collect()
    }

    /// Hull faces with outward (counterclockwise from outside) orientation.
    pub fn hull_faces(&self) -> Vec<[VertexId; 3]> {
        self.live_tets()
            .filter(|(_, t)| t.is_ghost())
            .map(|(_, t)| t.hull_face())
            .collect()
    }

    pub(crate) fn live_tets(&self) -> impl Iterator<Item = (TetId, &Tet)> {
        self.tets
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i])
            .map(|(i, t)| (i as TetId, t))
    }

    /// Sorted unique unordered edge pairs over finite vertices.
    pub fn edge_set(&self) -> Vec<(VertexId, VertexId)> {
        let mut packed: Vec<u64> = Vec::new();
        for (_, t) in self.live_tets() {
            if t.is_ghost() {
                continue;
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    let (a, b) = (t.verts[i].min(t.verts[j]), t.verts[i].max(t.verts[j]));
                    packed.push((a as u64) << 32 | b as u64);
                }
            }
        }
        packed.sort_unstable();
        packed.dedup();
        packed
            .into_iter()
            .map(|p| ((p >> 32) as u32, (p & 0xffff_ffff) as u32))
            .collect()
    }

    /// Sorted unique triangles over finite vertices.
    pub(crate) fn triangle_set(&self) -> Vec<[VertexId; 3]> {
        let mut tris: Vec<[VertexId; 3]> = Vec::new();
        for (_, t) in self.live_tets() {
            if t.is_ghost() {
                continue;
            }
            for k in 0..4 {
                let mut f = t.outward_face(k);
                f.sort_unstable();
                tris.push(f);
            }
        }
        tris.sort_unstable();
        tris.dedup();
        tris
    }

    // ----- construction -----

    /// Picks the first four affinely independent points of `order` and
    /// builds the initial tet plus its four ghosts. Returns the remaining
    /// insertion order. `Err(rank)` when the cloud has affine rank < 3.
    fn bootstrap(cloud: &PointCloud, order: &[VertexId]) -> Result<(Self, Vec<VertexId>), u8> {
        let pts = cloud.points();
        let n = order.len();
        if n == 1 {
            return Err(0);
        }
        let v0 = order[0];
        let v1 = order[1];
        let mut v2 = None;
        for &w in &order[2..] {
            if !collinear(pts, v0, v1, w) {
                v2 = Some(w);
                break;
            }
        }
        let Some(v2) = v2 else { return Err(1) };
        let mut v3 = None;
        for &w in &order[2..] {
            if w == v2 {
                continue;
            }
            if orient3d(pts[v0 as usize], pts[v1 as usize], pts[v2 as usize], pts[w as usize])
                != Sign::Zero
            {
                v3 = Some(w);
                break;
            }
        }
        let Some(v3) = v3 else { return Err(2) };

        let (a, b) = match orient3d(
            pts[v0 as usize],
            pts[v1 as usize],
            pts[v2 as usize],
            pts[v3 as usize],
        ) {
            Sign::Positive => (v0, v1),
            Sign::Negative => (v1, v0),
            Sign::Zero => unreachable!("v3 chosen non-coplanar"),
        };
        let base = [a, b, v2, v3];

        let mut tri = Triangulation {
            cloud: cloud.clone(),
            tets: Vec::with_capacity(4 * n),
            alive: Vec::with_capacity(4 * n),
            free: Vec::new(),
            mark: Vec::with_capacity(4 * n),
            generation: 0,
            hint: 0,
        };
        let t0 = tri.alloc(Tet {
            verts: base,
            neighbors: [NO_TET; 4],
        });
        let mut ghosts = [NO_TET; 4];
        for k in 0..4 {
            let f = tri.tets[t0 as usize].outward_face(k);
            let g = tri.alloc(Tet {
                verts: [f[0], f[1], f[2], GHOST],
                neighbors: [NO_TET, NO_TET, NO_TET, t0],
            });
            ghosts[k] = g;
            tri.tets[t0 as usize].neighbors[k] = g;
        }
        // Ghost-to-ghost adjacency: ghosts k and j share the hull edge
        // omitting base[k] and base[j]; within ghost k the non-shared finite
        // vertex is base[j].
        for k in 0..4 {
            for j in 0..4 {
                if k == j {
                    continue;
                }
                let slot = tri.tets[ghosts[k] as usize].slot_of(base[j]);
                tri.tets[ghosts[k] as usize].neighbors[slot] = ghosts[j];
            }
        }
        tri.hint = t0;

        let rest: Vec<VertexId> = order
            .iter()
            .copied()
            .filter(|v| !base.contains(v))
            .collect();
        Ok((tri, rest))
    }

    fn alloc(&mut self, t: Tet) -> TetId {
        if let Some(id) = self.free.pop() {
            self.tets[id as usize] = t;
            self.alive[id as usize] = true;
            self.mark[id as usize] = 0;
            id
        } else {
            self.tets.push(t);
            self.alive.push(true);
            self.mark.push(0);
            (self.tets.len() - 1) as TetId
        }
    }

    /// True iff `v` lies strictly inside the (perturbed) circumsphere of
    /// tet `t`; for ghost tets, strictly beyond the hull face plane.
    fn in_conflict(&self, t: TetId, v: VertexId) -> bool {
        let tet = &self.tets[t as usize];
        let p = self.cloud.points();
        if tet.is_ghost() {
            let f = tet.hull_face();
            orient3d_perturbed(
                p[f[0] as usize],
                p[f[1] as usize],
                p[f[2] as usize],
                p[v as usize],
                [f[0], f[1], f[2], v],
            ) == Sign::Positive
        } else {
            let t4 = tet.verts;
            insphere_perturbed(
                p[t4[0] as usize],
                p[t4[1] as usize],
                p[t4[2] as usize],
                p[t4[3] as usize],
                p[v as usize],
                [t4[0], t4[1], t4[2], t4[3], v],
            ) == Sign::Positive
        }
    }

    /// Walks from the hint to a tet in conflict with `v` (the containing
    /// tet, or a ghost whose hull face sees `v`).
    fn locate(&self, v: VertexId) -> TetId {
        let p = self.cloud.points();
        let mut t = if self.alive[self.hint as usize] {
            self.hint
        } else {
            self.live_tets().next().expect("nonempty triangulation").0
        };
        let cap = 12 * self.cloud.len() + 1000;
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > cap {
                // Exhaustive fallback; the visibility walk provably
                // terminates on Delaunay complexes, so this is a safety net.
                return self
                    .live_tets()
                    .find(|&(id, _)| self.in_conflict(id, v))
                    .expect("some tet must conflict with a new point")
                    .0;
            }
            let tet = &self.tets[t as usize];
            if let Some(g) = tet.ghost_slot() {
                if self.in_conflict(t, v) {
                    return t;
                }
                t = tet.neighbors[g];
                continue;
            }
            for k in 0..4 {
                let f = tet.outward_face(k);
                if orient3d_perturbed(
                    p[f[0] as usize],
                    p[f[1] as usize],
                    p[f[2] as usize],
                    p[v as usize],
                    [f[0], f[1], f[2], v],
                ) == Sign::Positive
                {
                    t = tet.neighbors[k];
                    continue 'walk;
                }
            }
            return t; // inside this tet
        }
    }

    fn insert(&mut self, v: VertexId) {
        let seed = self.locate(v);
        debug_assert!(self.in_conflict(seed, v));

        // Grow the conflict region.
        self.generation += 1;
        let generation = self.generation;
        let mut cavity: Vec<TetId> = Vec::new();
        let mut stack = vec![seed];
        self.mark[seed as usize] = generation;
        while let Some(t) = stack.pop() {
            cavity.push(t);
            for k in 0..4 {
                let nb = self.tets[t as usize].neighbors[k];
                if self.mark[nb as usize] != generation && self.in_conflict(nb, v) {
                    self.mark[nb as usize] = generation;
                    stack.push(nb);
                }
            }
        }

        // Boundary faces, each taken from its surviving side so the face is
        // oriented toward the cavity (and hence toward v).
        let mut boundary: Vec<(TetId, usize)> = Vec::new();
        for &t in &cavity {
            for k in 0..4 {
                let nb = self.tets[t as usize].neighbors[k];
                if self.mark[nb as usize] != generation {
                    let back = self.tets[nb as usize]
                        .neighbors
                        .iter()
                        .position(|&x| x == t)
                        .expect("mutual neighbor link");
                    boundary.push((nb, back));
                }
            }
        }

        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }

        // Fill the cavity: one tet per boundary face, v in slot 3.
        let mut edge_map: HashMap<(VertexId, VertexId), TetId> =
            HashMap::with_capacity(boundary.len() * 3);
        let mut created: Vec<TetId> = Vec::with_capacity(boundary.len());
        for &(surv, back) in &boundary {
            let f = self.tets[surv as usize].outward_face(back);
            let nt = self.alloc(Tet {
                verts: [f[0], f[1], f[2], v],
                neighbors: [NO_TET, NO_TET, NO_TET, surv],
            });
            self.tets[surv as usize].neighbors[back] = nt;
            edge_map.insert((f[0], f[1]), nt);
            edge_map.insert((f[1], f[2]), nt);
            edge_map.insert((f[2], f[0]), nt);
            created.push(nt);
        }
        for &nt in &created {
            let f = self.tets[nt as usize].verts;
            // Faces opposite f0/f1/f2 join the sibling built on the
            // boundary face that traverses the shared edge in reverse.
            let n0 = edge_map[&(f[2], f[1])];
            let n1 = edge_map[&(f[0], f[2])];
            let n2 = edge_map[&(f[1], f[0])];
            let t = &mut self.tets[nt as usize];
            t.neighbors[0] = n0;
            t.neighbors[1] = n1;
            t.neighbors[2] = n2;
        }
        self.hint = *created.last().expect("cavity has boundary faces");
    }
}

fn collinear(pts: &[Point3], a: VertexId, b: VertexId, c: VertexId) -> bool {
    let n = crate::predicates::cross_diff(
        pts[a as usize].to_array(),
        pts[b as usize].to_array(),
        pts[c as usize].to_array(),
    );
    n.iter().all(|d| d.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::Provenance;

    fn cloud_of(points: Vec<Point3>) -> PointCloud {
        PointCloud::new(points, Provenance::new("test", serde_json::json!({}), 0)).unwrap()
    }

    #[test]
    fn single_tet() {
        let c = cloud_of(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ]);
        let tri = triangulate(&c, 1).unwrap().unwrap_full();
        assert_eq!(tri.tets().len(), 1);
        assert_eq!(tri.edge_set().len(), 6);
        assert_eq!(tri.hull_faces().len(), 4);
        assert!(tri.validate(&ValidationOptions::default()).ok);
    }

    #[test]
    fn tet_plus_centroid_stars() {
        let c = cloud_of(vec![
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(1.0, -1.0, -1.0),
            Point3::new(-1.0, 1.0, -1.0),
            Point3::new(-1.0, -1.0, 1.0),
            Point3::new(0.0, 0.0, 0.0),
        ]);
        for seed in [1u64, 2, 3] {
            let tri = triangulate(&c, seed).unwrap().unwrap_full();
            assert_eq!(tri.tets().len(), 4, "interior point stars the simplex");
            assert_eq!(tri.edge_set().len(), 10);
            assert!(tri.validate(&ValidationOptions::default()).ok);
        }
    }

    #[test]
    fn two_points_lower_rank() {
        let c = cloud_of(vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 2.0, 3.0)]);
        match triangulate(&c, 0).unwrap() {
            DelaunayComplex::Lower(l) => {
                assert_eq!(l.rank, 1);
                assert_eq!(l.edges, vec![(0, 1)]);
            }
            DelaunayComplex::Full(_) => panic!("two points are not full-dimensional"),
        }
    }

    #[test]
    fn seed_independence_random_cloud() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let pts: Vec<Point3> = (0..60)
            .map(|_| {
                Point3::new(
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..1.0),
                )
            })
            .collect();
        let c = cloud_of(pts);
        let e1 = triangulate(&c, 11).unwrap().unwrap_full().edge_set();
        let e2 = triangulate(&c, 2222).unwrap().unwrap_full().edge_set();
        assert_eq!(e1, e2, "edge set must not depend on insertion order");
    }

    #[test]
    fn degenerate_lattice_consistent_with_oracle() {
        // A 3x3x3 integer lattice is saturated with cospherical and coplanar
        // subsets; oracle agreement exercises the consistency of the
        // symbolic perturbation across both code paths.
        let mut pts = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    pts.push(Point3::new(x as f64, y as f64, z as f64));
                }
            }
        }
        let c = cloud_of(pts);
        let tri = triangulate(&c, 5).unwrap().unwrap_full();
        assert!(tri.validate(&ValidationOptions::default()).ok);
        let oracle = oracle_edges(&c).unwrap();
        assert_eq!(tri.edge_set(), oracle);
    }
}
