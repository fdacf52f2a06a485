//! C ABI for the triangulation engine.
//!
//! Conventions: every constructor returns a status code and writes an owned
//! opaque handle through an out-pointer on success; handles are released
//! with the matching `_free` function; no call unwinds across the boundary.
//! The header `include/dt3.h` mirrors this surface and is checked against
//! the ABI by a compiled C smoke test.

use std::panic::{catch_unwind, AssertUnwindSafe};

use dt3::delaunay::{triangulate, DelaunayComplex, Triangulation, ValidationOptions};
use dt3::generators;
use dt3::{metrics, CloudError, PointCloud, Point3, Provenance};

/// Status codes shared with the C header.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dt3Status {
    Ok = 0,
    BadParams = 1,
    DuplicatePoints = 2,
    Degenerate = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque cloud handle.
pub struct Dt3Cloud {
    inner: PointCloud,
}

/// Opaque triangulation handle.
pub struct Dt3Triangulation {
    inner: Triangulation,
}

fn guard<F: FnOnce() -> Dt3Status>(f: F) -> Dt3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => Dt3Status::Panic,
    }
}

fn emit_cloud(out: *mut *mut Dt3Cloud, cloud: PointCloud) -> Dt3Status {
    unsafe {
        *out = Box::into_raw(Box::new(Dt3Cloud { inner: cloud }));
    }
    Dt3Status::Ok
}

/// # Safety
/// `xyz` must point to `3 * n` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dt3_cloud_from_points(
    xyz: *const f64,
    n: usize,
    out: *mut *mut Dt3Cloud,
) -> Dt3Status {
    if xyz.is_null() || out.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        let coords = unsafe { std::slice::from_raw_parts(xyz, 3 * n) };
        if coords.iter().any(|c| !c.is_finite()) {
            return Dt3Status::BadParams;
        }
        let pts: Vec<Point3> = coords
            .chunks_exact(3)
            .map(|c| Point3::new(c[0], c[1], c[2]))
            .collect();
        match PointCloud::new(
            pts,
            Provenance::new("ffi_points", serde_json_value(n), 0),
        ) {
            Ok(cloud) => emit_cloud(out, cloud),
            Err(CloudError::Duplicate(_, _)) => Dt3Status::DuplicatePoints,
            Err(CloudError::Empty) => Dt3Status::BadParams,
        }
    })
}

fn serde_json_value(n: usize) -> serde_json::Value {
    serde_json::json!({ "n": n })
}

macro_rules! gen_entry {
    ($name:ident, ($($arg:ident : $ty:ty),*), $call:expr) => {
        /// # Safety
        /// `out` must be a valid pointer.
        #[no_mangle]
        pub unsafe extern "C" fn $name($($arg: $ty,)* out: *mut *mut Dt3Cloud) -> Dt3Status {
            if out.is_null() {
                return Dt3Status::NullPointer;
            }
            guard(|| match $call {
                Ok(cloud) => emit_cloud(out, cloud),
                Err(_) => Dt3Status::BadParams,
            })
        }
    };
}

gen_entry!(dt3_cloud_helix_sqrt, (n: usize), generators::gen_helix_sqrt(n));
gen_entry!(
    dt3_cloud_helix_spread,
    (n: usize, delta: f64),
    generators::gen_helix_spread(n, delta)
);
gen_entry!(
    dt3_cloud_single_turn,
    (n: usize),
    generators::gen_helix_single_turn(n, generators::Spacing::Even)
);
gen_entry!(
    dt3_cloud_mattress,
    (n: usize, delta: f64),
    generators::gen_mattress(n, delta)
);
gen_entry!(dt3_cloud_seams, (m: usize, eps: f64), generators::gen_seams(m, eps));
gen_entry!(
    dt3_cloud_ball_rows,
    (k: u32, per_sphere: usize, seed: u64),
    generators::gen_ball_rows(k, per_sphere, seed)
);

/// # Safety
/// `cloud` must be a live handle from a `dt3_cloud_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn dt3_cloud_len(cloud: *const Dt3Cloud) -> usize {
    if cloud.is_null() {
        return 0;
    }
    unsafe { (*cloud).inner.len() }
}

/// # Safety
/// `cloud` must be a live handle (or null, which is a no-op); it is
/// invalidated by this call.
#[no_mangle]
pub unsafe extern "C" fn dt3_cloud_free(cloud: *mut Dt3Cloud) {
    if !cloud.is_null() {
        drop(unsafe { Box::from_raw(cloud) });
    }
}

/// # Safety
/// `cloud` must be a live cloud handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dt3_triangulate(
    cloud: *const Dt3Cloud,
    seed: u64,
    out: *mut *mut Dt3Triangulation,
) -> Dt3Status {
    if cloud.is_null() || out.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        let cloud = unsafe { &(*cloud).inner };
        match triangulate(cloud, seed) {
            Ok(DelaunayComplex::Full(tri)) => {
                unsafe {
                    *out = Box::into_raw(Box::new(Dt3Triangulation { inner: tri }));
                }
                Dt3Status::Ok
            }
            Ok(DelaunayComplex::Lower(_)) => Dt3Status::Degenerate,
            Err(_) => Dt3Status::Degenerate,
        }
    })
}

/// # Safety
/// `tri` must be a live triangulation handle.
#[no_mangle]
pub unsafe extern "C" fn dt3_edge_count(tri: *const Dt3Triangulation) -> usize {
    if tri.is_null() {
        return 0;
    }
    unsafe { (*tri).inner.edge_set().len() }
}

/// # Safety
/// `tri` must be a live triangulation handle.
#[no_mangle]
pub unsafe extern "C" fn dt3_tet_count(tri: *const Dt3Triangulation) -> usize {
    if tri.is_null() {
        return 0;
    }
    unsafe { (*tri).inner.tets().len() }
}

/// Copies edges as flat `(a, b)` index pairs. `cap` counts u32 slots.
///
/// # Safety
/// `tri` live; `buf` points to at least `cap` u32s; `written` valid.
#[no_mangle]
pub unsafe extern "C" fn dt3_edges(
    tri: *const Dt3Triangulation,
    buf: *mut u32,
    cap: usize,
    written: *mut usize,
) -> Dt3Status {
    if tri.is_null() || buf.is_null() || written.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        let edges = unsafe { (*tri).inner.edge_set() };
        let need = edges.len() * 2;
        unsafe {
            *written = need;
        }
        if need > cap {
            return Dt3Status::BufferTooSmall;
        }
        let out = unsafe { std::slice::from_raw_parts_mut(buf, need) };
        for (i, (a, b)) in edges.into_iter().enumerate() {
            out[2 * i] = a;
            out[2 * i + 1] = b;
        }
        Dt3Status::Ok
    })
}

/// Copies tetrahedra as flat quadruples of vertex indices.
///
/// # Safety
/// `tri` live; `buf` points to at least `cap` u32s; `written` valid.
#[no_mangle]
pub unsafe extern "C" fn dt3_tets(
    tri: *const Dt3Triangulation,
    buf: *mut u32,
    cap: usize,
    written: *mut usize,
) -> Dt3Status {
    if tri.is_null() || buf.is_null() || written.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        let tets = unsafe { (*tri).inner.tets() };
        let need = tets.len() * 4;
        unsafe {
            *written = need;
        }
        if need > cap {
            return Dt3Status::BufferTooSmall;
        }
        let out = unsafe { std::slice::from_raw_parts_mut(buf, need) };
        for (i, t) in tets.into_iter().enumerate() {
            out[4 * i..4 * i + 4].copy_from_slice(&t);
        }
        Dt3Status::Ok
    })
}

/// Runs the full validation report; writes 1 for a valid complex, 0 for a
/// violation.
///
/// # Safety
/// `tri` live; `valid` valid.
#[no_mangle]
pub unsafe extern "C" fn dt3_validate(
    tri: *const Dt3Triangulation,
    valid: *mut i32,
) -> Dt3Status {
    if tri.is_null() || valid.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        let rep = unsafe { (*tri).inner.validate(&ValidationOptions::default()) };
        unsafe {
            *valid = rep.ok as i32;
        }
        Dt3Status::Ok
    })
}

/// Closest pair distance, diameter, and their ratio.
///
/// # Safety
/// `cloud` live; output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn dt3_spread(
    cloud: *const Dt3Cloud,
    closest: *mut f64,
    diameter: *mut f64,
    spread: *mut f64,
) -> Dt3Status {
    if cloud.is_null() || closest.is_null() || diameter.is_null() || spread.is_null() {
        return Dt3Status::NullPointer;
    }
    guard(|| {
        match metrics::spread(unsafe { &(*cloud).inner }) {
            Ok(rep) => {
                unsafe {
                    *closest = rep.closest_dist;
                    *diameter = rep.diameter;
                    *spread = rep.spread;
                }
                Dt3Status::Ok
            }
            Err(_) => Dt3Status::BadParams,
        }
    })
}

/// # Safety
/// `tri` must be a live handle (or null); it is invalidated by this call.
#[no_mangle]
pub unsafe extern "C" fn dt3_triangulation_free(tri: *mut Dt3Triangulation) {
    if !tri.is_null() {
        drop(unsafe { Box::from_raw(tri) });
    }
}

/// Exact orientation sign: +1 when `d` sees `(a, b, c)` counterclockwise,
/// -1 mirrored, 0 coplanar.
///
/// # Safety
/// All pointers must reference 3 doubles each.
#[no_mangle]
pub unsafe extern "C" fn dt3_orient3d(
    a: *const f64,
    b: *const f64,
    c: *const f64,
    d: *const f64,
) -> i32 {
    let p = |q: *const f64| unsafe { Point3::new(*q, *q.add(1), *q.add(2)) };
    match dt3::orient3d(p(a), p(b), p(c), p(d)) {
        dt3::Sign::Negative => -1,
        dt3::Sign::Zero => 0,
        dt3::Sign::Positive => 1,
    }
}

/// Exact insphere sign: +1 when `e` lies strictly inside the circumsphere
/// of a positively oriented `(a, b, c, d)`, -1 outside, 0 on the sphere.
///
/// # Safety
/// All pointers must reference 3 doubles each.
#[no_mangle]
pub unsafe extern "C" fn dt3_insphere(
    a: *const f64,
    b: *const f64,
    c: *const f64,
    d: *const f64,
    e: *const f64,
) -> i32 {
    let p = |q: *const f64| unsafe { Point3::new(*q, *q.add(1), *q.add(2)) };
    match dt3::insphere(p(a), p(b), p(c), p(d), p(e)) {
        dt3::Sign::Negative => -1,
        dt3::Sign::Zero => 0,
        dt3::Sign::Positive => 1,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dt3_version() -> *const std::os::raw::c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const _
}
