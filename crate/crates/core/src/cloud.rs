//! Point clouds with generator provenance.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::predicates::Point3;
use crate::surface::SurfaceModel;

/// Where a cloud came from: generator name, its full parameter record, and
/// the RNG seed (always materialized, even for deterministic generators).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: u64,
}

impl Provenance {
    pub fn new(generator: &str, params: serde_json::Value, seed: u64) -> Self {
        Provenance {
            generator: generator.to_string(),
            params,
            seed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CloudError {
    #[error("point cloud must contain at least one point")]
    Empty,
    #[error("duplicate points at indices {0} and {1}")]
    Duplicate(usize, usize),
}

/// An ordered set of distinct 3D points.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Vec<Point3>,
    provenance: Provenance,
    surface: Option<SurfaceModel>,
}

impl PointCloud {
    /// Validates non-emptiness and pairwise distinctness (exact coordinate
    /// comparison, reporting the first offending pair).
    pub fn new(points: Vec<Point3>, provenance: Provenance) -> Result<Self, CloudError> {
        if points.is_empty() {
            return Err(CloudError::Empty);
        }
        let mut seen: HashMap<[u64; 3], usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(&p.key_bits()) {
                return Err(CloudError::Duplicate(j, i));
            }
            seen.insert(p.key_bits(), i);
        }
        Ok(PointCloud {
            points,
            provenance,
            surface: None,
        })
    }

    pub fn with_surface(mut self, surface: SurfaceModel) -> Self {
        self.surface = Some(surface);
        self
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: size >= 1
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn surface(&self) -> Option<&SurfaceModel> {
        self.surface.as_ref()
    }

    /// Copy with every x-coordinate multiplied by `factor` (axis scaling of
    /// cylinder-family constructions). Provenance records the scaling.
    pub fn scaled_x(&self, factor: f64) -> Result<Self, CloudError> {
        let pts = self
            .points
            .iter()
            .map(|p| Point3::new(p.x * factor, p.y, p.z))
            .collect();
        let mut prov = self.provenance.clone();
        prov.params = serde_json::json!({
            "base": prov.params,
            "x_scale": factor,
        });
        PointCloud::new(pts, prov)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        let prov = Provenance::new("test", serde_json::json!({}), 0);
        assert!(matches!(
            PointCloud::new(vec![], prov.clone()),
            Err(CloudError::Empty)
        ));
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, -0.0, 0.0), // -0.0 == 0.0 exactly
        ];
        assert!(matches!(
            PointCloud::new(pts, prov),
            Err(CloudError::Duplicate(0, 2))
        ));
    }
}
