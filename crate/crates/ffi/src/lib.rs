//! C interface: opaque handles for sets, node sequences and extremal solvers.
//!
//! Every call returns a [`PaStatus`]; on failure [`pa_last_error`] holds a message for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use potapprox::cli::parse_spec_file;
use potapprox::extremal::{green_estimate, leja_points, ExtremalSolver, NodeSequence};
use potapprox::sets::{build_mesh, green_oracle, CompactSetSpec, MeshRole};
use potapprox::{Complex, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OracleUnavailable = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

/// A compact set.
pub struct PaSet(CompactSetSpec);

/// A Leja sequence on a boundary mesh.
pub struct PaNodes(Arc<NodeSequence>);

/// Extremal-function solver on a fixed boundary mesh.
pub struct PaSolver(ExtremalSolver);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(err: &Error) -> PaStatus {
    match err {
        Error::OracleUnavailable => PaStatus::OracleUnavailable,
        Error::Io(_) | Error::CacheRejected { .. } => PaStatus::Io,
        Error::InvalidArgument(_)
        | Error::DegenerateSet(_)
        | Error::SpecParse { .. }
        | Error::MissingField { .. }
        | Error::MeshInadequate(_)
        | Error::MeshExhausted { .. } => PaStatus::InvalidArgument,
        _ => PaStatus::Numerical,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PaStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            PaStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            PaStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, what: &'static str, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

unsafe fn new_set(out: *mut *mut PaSet, spec: CompactSetSpec) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    spec.validate()?;
    out.write(Box::into_raw(Box::new(PaSet(spec))));
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated, truncated to
/// `len`) and returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pa_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Closed disk with the given center and radius.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_set_disk(center_re: f64, center_im: f64, radius: f64, out: *mut *mut PaSet) -> PaStatus {
    guard(|| new_set(out, CompactSetSpec::disk(Complex::new(center_re, center_im), radius)))
}

/// Segment from `a` to `b`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_set_segment(a_re: f64, a_im: f64, b_re: f64, b_im: f64, out: *mut *mut PaSet) -> PaStatus {
    guard(|| new_set(out, CompactSetSpec::segment(Complex::new(a_re, a_im), Complex::new(b_re, b_im))))
}

/// Star of `arms` unit segments from the origin.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_set_star(arms: u32, out: *mut *mut PaSet) -> PaStatus {
    guard(|| new_set(out, CompactSetSpec::star(arms)))
}

/// The set called `name` in a spec file given as text.
///
/// # Safety
/// `spec_text` and `name` must be null or NUL-terminated; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_set_from_spec(spec_text: *const c_char, name: *const c_char, out: *mut *mut PaSet) -> PaStatus {
    guard(|| {
        let text = str_arg(spec_text, "spec_text")?;
        let name = str_arg(name, "name")?;
        let file = parse_spec_file(text)?;
        let set = file
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no set named `{name}`")))?;
        new_set(out, set.spec.clone())
    })
}

/// # Safety
/// `set` must be null or come from a `pa_set_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pa_set_free(set: *mut PaSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_set_diameter(set: *const PaSet, out: *mut f64) -> PaStatus {
    guard(|| put(out, "out", get(set, "set")?.0.diameter()))
}

/// Closed-form Green's function with pole at infinity; `PA_STATUS_ORACLE_UNAVAILABLE`
/// when the set has none.
///
/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_green_oracle(set: *const PaSet, re: f64, im: f64, out: *mut f64) -> PaStatus {
    guard(|| {
        let g = green_oracle(&get(set, "set")?.0, Complex::new(re, im))?;
        put(out, "out", g)
    })
}

/// Leja sequence of `degree + 1` points on the boundary mesh at `resolution`.
///
/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_nodes_leja(set: *const PaSet, resolution: f64, degree: usize, out: *mut *mut PaNodes) -> PaStatus {
    guard(|| {
        let mesh = build_mesh(&get(set, "set")?.0, MeshRole::Boundary, resolution)?;
        let ns = leja_points(&mesh, degree)?;
        put(out, "out", Box::into_raw(Box::new(PaNodes(Arc::new(ns)))))
    })
}

/// # Safety
/// `nodes` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_nodes_len(nodes: *const PaNodes, out: *mut usize) -> PaStatus {
    guard(|| put(out, "out", get(nodes, "nodes")?.0.nodes.len()))
}

/// # Safety
/// `nodes` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_nodes_get(nodes: *const PaNodes, index: usize, re: *mut f64, im: *mut f64) -> PaStatus {
    guard(|| {
        let ns = &get(nodes, "nodes")?.0;
        let z = *ns
            .nodes
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("index {index} out of range 0..{}", ns.nodes.len())))?;
        put(re, "re", z.re)?;
        put(im, "im", z.im)
    })
}

/// Green's function estimated from the nodes' nodal polynomial.
///
/// # Safety
/// `nodes` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_green_nodal(nodes: *const PaNodes, re: f64, im: f64, out: *mut f64) -> PaStatus {
    guard(|| put(out, "out", green_estimate(&get(nodes, "nodes")?.0, Complex::new(re, im))))
}

/// # Safety
/// `nodes` must be null or come from `pa_nodes_leja` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pa_nodes_free(nodes: *mut PaNodes) {
    if !nodes.is_null() {
        drop(Box::from_raw(nodes));
    }
}

/// Solver for degrees up to `max_degree` on the boundary mesh at `resolution`, which needs
/// at least `8·max_degree` points.
///
/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_solver_new(set: *const PaSet, resolution: f64, max_degree: usize, out: *mut *mut PaSolver) -> PaStatus {
    guard(|| {
        let mesh = build_mesh(&get(set, "set")?.0, MeshRole::Boundary, resolution)?;
        let solver = ExtremalSolver::new(&mesh, max_degree)?;
        put(out, "out", Box::into_raw(Box::new(PaSolver(solver))))
    })
}

/// `Φₙ(z)` on the mesh: `value` is attained by a witness polynomial, `upper` is a certified
/// upper bound. Either output pointer may be null.
///
/// # Safety
/// `solver` must be a live handle; non-null outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pa_solver_phi(solver: *const PaSolver, n: usize, re: f64, im: f64, value: *mut f64, upper: *mut f64) -> PaStatus {
    guard(|| {
        let v = get(solver, "solver")?.0.phi(n, Complex::new(re, im))?;
        if !value.is_null() {
            value.write(v.value);
        }
        if !upper.is_null() {
            upper.write(v.upper);
        }
        Ok(())
    })
}

/// # Safety
/// `solver` must be null or come from `pa_solver_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pa_solver_free(solver: *mut PaSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}
