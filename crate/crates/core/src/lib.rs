//! 3D Delaunay triangulation engine with exact predicates, generators for
//! structured point sets with provably large triangulations, and a
//! measurement harness for spread-vs-complexity experiments.
//!
//! The triangulator is incremental Bowyer-Watson over ghost tetrahedra,
//! driven entirely by exact-sign predicates with symbolic perturbation, so
//! degenerate inputs (collinear seam rows, cospherical lattices)
//! triangulate verbatim and the result is independent of insertion order.
//!
//! ```
//! use dt3::generators::{gen_helix_single_turn, Spacing};
//! use dt3::{triangulate, ValidationOptions};
//!
//! // Points on a single helix turn are pairwise adjacent in the
//! // triangulation: 16 points give a complete graph of 120 edges.
//! let cloud = gen_helix_single_turn(16, Spacing::Even).unwrap();
//! let tri = triangulate(&cloud, 7).unwrap().unwrap_full();
//! assert_eq!(tri.edge_set().len(), 120);
//! assert!(tri.validate(&ValidationOptions::default()).ok);
//! ```

pub mod cloud;
pub mod delaunay;
pub mod experiments;
pub mod generators;
pub mod io;
pub mod metrics;
pub mod predicates;
pub mod surface;

pub use cloud::{CloudError, PointCloud, Provenance};
pub use delaunay::{
    oracle_edges, triangulate, ComplexityStats, DelaunayComplex, LowerComplex, Triangulation,
    ValidationOptions, ValidationReport,
};
pub use predicates::{insphere, insphere_perturbed, orient3d, orient3d_perturbed};
pub use predicates::{Point3, Sign};
pub use surface::SurfaceModel;
