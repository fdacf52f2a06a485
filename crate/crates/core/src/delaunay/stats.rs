//! Complexity accounting: counts, degree histogram, Euler-style bounds.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Triangulation;

/// Simplex counts over finite simplices plus the vertex degree histogram.
/// Edges are the headline complexity metric; Euler's formula bounds the
/// rest (at most `2e - 2n` triangles and `e - n` tetrahedra).
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityStats {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_triangles: usize,
    pub n_tets: usize,
    pub degree_histogram: BTreeMap<u32, u32>,
    pub max_edge_length: f64,
}

impl ComplexityStats {
    /// The section-1 bounds: triangles <= 2e - 2n and tets <= e - n.
    pub fn euler_bounds_ok(&self) -> bool {
        let e = self.n_edges as i64;
        let n = self.n_vertices as i64;
        (self.n_triangles as i64) <= 2 * e - 2 * n && (self.n_tets as i64) <= e - n
    }

    pub fn degree_sum(&self) -> u64 {
        self.degree_histogram
            .iter()
            .map(|(d, c)| *d as u64 * *c as u64)
            .sum()
    }
}

impl Triangulation {
    pub fn stats(&self) -> ComplexityStats {
        let edges = self.edge_set();
        let n_triangles = self.triangle_set().len();
        let n_tets = self.tets().len();
        let mut degree = vec![0u32; self.cloud().len()];
        let mut max_len2 = 0.0f64;
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
            let d2 = self.point(a).dist2(self.point(b));
            if d2 > max_len2 {
                max_len2 = d2;
            }
        }
        let mut degree_histogram: BTreeMap<u32, u32> = BTreeMap::new();
        for d in degree {
            *degree_histogram.entry(d).or_insert(0) += 1;
        }
        ComplexityStats {
            n_vertices: self.cloud().len(),
            n_edges: edges.len(),
            n_triangles,
            n_tets,
            degree_histogram,
            max_edge_length: max_len2.sqrt(),
        }
    }
}
