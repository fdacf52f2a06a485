//! File formats: xyz point clouds (with a provenance sidecar), tetrahedra
//! lists, OFF hull meshes, and JSON reports.
//!
//! xyz uses Rust's shortest round-trip decimal formatting, so
//! file -> memory -> file is lossless.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cloud::{CloudError, PointCloud, Provenance};
use crate::delaunay::Triangulation;
use crate::predicates::Point3;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected three floats, got {text:?}")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("{path}:{line}: non-finite coordinate")]
    NonFinite { path: PathBuf, line: usize },
    #[error("invalid cloud in {path}: {source}")]
    Cloud {
        path: PathBuf,
        source: CloudError,
    },
    #[error("bad provenance sidecar {path}: {detail}")]
    Sidecar { path: PathBuf, detail: String },
}

fn open_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File {
        path: path.to_path_buf(),
        source,
    }
}

/// Provenance sidecar path: `foo.xyz` -> `foo.provenance.json`.
pub fn sidecar_path(xyz: &Path) -> PathBuf {
    xyz.with_extension("provenance.json")
}

/// Writes one `x y z` line per point plus the provenance sidecar.
pub fn write_xyz(path: &Path, cloud: &PointCloud) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path).map_err(open_err(path))?);
    for p in cloud.points() {
        writeln!(out, "{} {} {}", p.x, p.y, p.z).map_err(open_err(path))?;
    }
    out.flush().map_err(open_err(path))?;
    let side = sidecar_path(path);
    write_json(&side, cloud.provenance())
}

/// Reads an xyz file; provenance comes from the sidecar when present,
/// otherwise records the file path.
pub fn read_xyz(path: &Path) -> Result<PointCloud, IoError> {
    let file = File::open(path).map_err(open_err(path))?;
    let mut points = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(open_err(path))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut it = text.split_whitespace();
        let mut coord = [0.0f64; 3];
        for c in coord.iter_mut() {
            *c = it
                .next()
                .and_then(|tok| tok.parse().ok())
                .ok_or_else(|| IoError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    text: text.to_string(),
                })?;
        }
        if it.next().is_some() {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                text: text.to_string(),
            });
        }
        if coord.iter().any(|c| !c.is_finite()) {
            return Err(IoError::NonFinite {
                path: path.to_path_buf(),
                line: idx + 1,
            });
        }
        points.push(Point3::new(coord[0], coord[1], coord[2]));
    }
    let side = sidecar_path(path);
    let provenance = if side.exists() {
        let text = std::fs::read_to_string(&side).map_err(open_err(&side))?;
        serde_json::from_str(&text).map_err(|e| IoError::Sidecar {
            path: side.clone(),
            detail: e.to_string(),
        })?
    } else {
        Provenance::new(
            "file",
            serde_json::json!({ "path": path.display().to_string() }),
            0,
        )
    };
    PointCloud::new(points, provenance).map_err(|source| IoError::Cloud {
        path: path.to_path_buf(),
        source,
    })
}

/// One tetrahedron per line: four vertex indices.
pub fn write_tets(path: &Path, tri: &Triangulation) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path).map_err(open_err(path))?);
    for t in tri.tets() {
        writeln!(out, "{} {} {} {}", t[0], t[1], t[2], t[3]).map_err(open_err(path))?;
    }
    out.flush().map_err(open_err(path))
}

/// OFF mesh of the vertices and hull faces.
pub fn write_off(path: &Path, tri: &Triangulation) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path).map_err(open_err(path))?);
    let pts = tri.cloud().points();
    let faces = tri.hull_faces();
    writeln!(out, "OFF").map_err(open_err(path))?;
    writeln!(out, "{} {} 0", pts.len(), faces.len()).map_err(open_err(path))?;
    for p in pts {
        writeln!(out, "{} {} {}", p.x, p.y, p.z).map_err(open_err(path))?;
    }
    for f in faces {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2]).map_err(open_err(path))?;
    }
    out.flush().map_err(open_err(path))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path).map_err(open_err(path))?);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| IoError::File {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })?;
    writeln!(out).map_err(open_err(path))?;
    out.flush().map_err(open_err(path))
}

/// Stats file schema: versioned envelope around [`ComplexityStats`],
/// carrying the input cloud's provenance and the insertion seed.
#[derive(serde::Serialize)]
pub struct StatsFile<'a> {
    pub schema: u32,
    pub seed: u64,
    pub provenance: &'a Provenance,
    #[serde(flatten)]
    pub stats: &'a crate::delaunay::ComplexityStats,
}

pub const STATS_SCHEMA: u32 = 1;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::Provenance;

    #[test]
    fn xyz_round_trip_exact() {
        let dir = std::env::temp_dir().join("dt3_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cloud.xyz");
        let pts = vec![
            Point3::new(0.1, -2.5e-17, 3.0),
            Point3::new(1.0 / 3.0, 2.0f64.sqrt(), -1e300),
            Point3::new(-0.0, 5.0, f64::MIN_POSITIVE),
        ];
        let cloud = PointCloud::new(
            pts.clone(),
            Provenance::new("t", serde_json::json!({"k": 1}), 7),
        )
        .unwrap();
        write_xyz(&path, &cloud).unwrap();
        let back = read_xyz(&path).unwrap();
        for (a, b) in pts.iter().zip(back.points()) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
            assert_eq!(a.z.to_bits(), b.z.to_bits());
        }
        assert_eq!(back.provenance().generator, "t");
        assert_eq!(back.provenance().seed, 7);
    }

    #[test]
    fn xyz_parse_errors_name_the_line() {
        let dir = std::env::temp_dir().join("dt3_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.xyz");
        std::fs::write(&path, "0 0 0\n1 2\n").unwrap();
        match read_xyz(&path) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
