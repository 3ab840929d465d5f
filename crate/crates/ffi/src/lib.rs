//! C ABI over `drg_norton`.
//!
//! Handles are opaque pointers created by `drg_*_new`/`drg_graph_from_*`
//! and released with the matching `*_free`. Every fallible call returns a
//! [`DrgStatus`]; the message of the last failure on the calling thread is
//! available from [`drg_last_error_message`]. Output arrays are caller-owned
//! and their length is passed explicitly; a short buffer yields
//! `DRG_STATUS_BUFFER_TOO_SMALL` and nothing is written.
//!
//! All vertex and idempotent indices are zero-based.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use drg_norton::edgelist::parse_edge_list;
use drg_norton::families::{generate_with_limit, FamilySpec, DEFAULT_MAX_VERTICES};
use drg_norton::report::{Analysis, AnalysisOptions};
use drg_norton::{Error, Graph, Tolerance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Disconnected = 4,
    NotDistanceRegular = 5,
    DiameterTooSmall = 6,
    NoQOrdering = 7,
    NumericalFailure = 8,
    IndexOutOfRange = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque graph handle.
pub struct DrgGraph {
    graph: Graph,
}

/// Opaque handle to a completed analysis of a distance-regular graph.
pub struct DrgAnalysis {
    analysis: Analysis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> DrgStatus {
    match err {
        Error::Parse(_) | Error::Io { .. } => DrgStatus::ParseError,
        Error::InvalidGraph(_) | Error::InvalidFamilyParams(_) | Error::TooManyVertices { .. } => {
            DrgStatus::InvalidArgument
        }
        Error::DisconnectedGraph { .. } => DrgStatus::Disconnected,
        Error::NotDistanceRegular(_) => DrgStatus::NotDistanceRegular,
        Error::DiameterTooSmall { .. } => DrgStatus::DiameterTooSmall,
        Error::SameVertex(_) | Error::VertexOutOfRange { .. } => DrgStatus::IndexOutOfRange,
        Error::InvalidOrdering(_) => DrgStatus::InvalidArgument,
        _ => DrgStatus::NumericalFailure,
    }
}

struct Fail(DrgStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        Fail(status_of(&err), err.to_string())
    }
}

fn fail<T>(status: DrgStatus, message: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, message.into()))
}

/// Runs `body`, recording failures and converting panics.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> DrgStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DrgStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal panic: {message}"));
            DrgStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().map_or_else(|| fail(DrgStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return fail(DrgStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(DrgStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn out_slice<'a, T>(p: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if p.is_null() {
        return fail(DrgStatus::NullPointer, format!("{what} is null"));
    }
    if len < needed {
        return fail(DrgStatus::BufferTooSmall, format!("{what} holds {len} entries, {needed} needed"));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn in_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(DrgStatus::NullPointer, format!("{what} is null"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return fail(DrgStatus::NullPointer, "output handle pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn ordering_index(a: &Analysis, k: usize) -> Result<(), Fail> {
    if a.structures.is_empty() {
        return fail(DrgStatus::NoQOrdering, "graph has no Q-polynomial ordering");
    }
    if k >= a.structures.len() {
        let count = a.structures.len();
        return fail(DrgStatus::IndexOutOfRange, format!("ordering {k} requested, {count} available"));
    }
    Ok(())
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn drg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn drg_status_name(status: DrgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        DrgStatus::Ok => c"ok",
        DrgStatus::NullPointer => c"null pointer",
        DrgStatus::InvalidArgument => c"invalid argument",
        DrgStatus::ParseError => c"parse error",
        DrgStatus::Disconnected => c"disconnected graph",
        DrgStatus::NotDistanceRegular => c"not distance-regular",
        DrgStatus::DiameterTooSmall => c"diameter too small",
        DrgStatus::NoQOrdering => c"no Q-polynomial ordering",
        DrgStatus::NumericalFailure => c"numerical failure",
        DrgStatus::IndexOutOfRange => c"index out of range",
        DrgStatus::BufferTooSmall => c"buffer too small",
        DrgStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` entries).
#[no_mangle]
pub unsafe extern "C" fn drg_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut DrgGraph,
) -> DrgStatus {
    guard(|| {
        let Some(len) = edge_count.checked_mul(2) else {
            return fail(DrgStatus::InvalidArgument, "edge_count overflows");
        };
        let flat = in_slice(edges, len, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|e| (e[0], e[1])).collect();
        let graph = Graph::from_edges(n, &pairs)?;
        store(out, DrgGraph { graph })
    })
}

/// Parses edge-list text (`n m` header, then `m` lines `u v`).
#[no_mangle]
pub unsafe extern "C" fn drg_graph_parse_edge_list(text: *const c_char, out: *mut *mut DrgGraph) -> DrgStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        let graph = parse_edge_list(text, None)?;
        store(out, DrgGraph { graph })
    })
}

/// Generates a named family member: `cycle`, `hamming`, `johnson`,
/// `petersen` or `hypercube`. `max_vertices == 0` selects the default cap.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_from_family(
    name: *const c_char,
    params: *const usize,
    param_count: usize,
    max_vertices: usize,
    out: *mut *mut DrgGraph,
) -> DrgStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        let params = in_slice(params, param_count, "params")?;
        let spec = FamilySpec::from_name(name, params)?;
        let limit = if max_vertices == 0 { DEFAULT_MAX_VERTICES } else { max_vertices };
        let graph = generate_with_limit(&spec, limit)?;
        store(out, DrgGraph { graph })
    })
}

#[no_mangle]
pub unsafe extern "C" fn drg_graph_free(graph: *mut DrgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Vertex count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_vertex_count(graph: *const DrgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.vertex_count())
}

#[no_mangle]
pub unsafe extern "C" fn drg_graph_edge_count(graph: *const DrgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Runs the full pipeline. Non-positive `tolerance` or negative
/// `nz_relative` select the defaults. A graph without Q-polynomial ordering
/// still yields a handle and `DRG_STATUS_OK`; ordering queries on it
/// return `DRG_STATUS_NO_Q_ORDERING`.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_new(
    graph: *const DrgGraph,
    tolerance: f64,
    nz_relative: f64,
    out: *mut *mut DrgAnalysis,
) -> DrgStatus {
    guard(|| {
        let graph = borrow(graph, "graph")?;
        let defaults = AnalysisOptions::default();
        let tol = if tolerance > 0.0 { Tolerance(tolerance) } else { defaults.tolerance };
        let nz = if nz_relative >= 0.0 { nz_relative } else { defaults.nz_relative };
        let analysis = Analysis::run(&graph.graph, tol, nz)?;
        store(out, DrgAnalysis { analysis })
    })
}

#[no_mangle]
pub unsafe extern "C" fn drg_analysis_free(analysis: *mut DrgAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

#[no_mangle]
pub unsafe extern "C" fn drg_analysis_vertex_count(analysis: *const DrgAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.graph.vertex_count())
}

/// Diameter d, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_diameter(analysis: *const DrgAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.intersection.diameter())
}

/// Writes c_i, a_i, b_i for i = 0..d into three arrays of length >= d+1.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_intersection_numbers(
    analysis: *const DrgAnalysis,
    c: *mut u64,
    a: *mut u64,
    b: *mut u64,
    len: usize,
) -> DrgStatus {
    guard(|| {
        let idata = &borrow(analysis, "analysis")?.analysis.intersection;
        let m = idata.diameter() + 1;
        let (c, a, b) = (out_slice(c, len, m, "c")?, out_slice(a, len, m, "a")?, out_slice(b, len, m, "b")?);
        for i in 0..m {
            c[i] = idata.c(i);
            a[i] = idata.a(i);
            b[i] = idata.b(i);
        }
        Ok(())
    })
}

/// Eigenvalues θ_0 > θ_1 > ... > θ_d in natural (decreasing) order.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_eigenvalues(analysis: *const DrgAnalysis, out: *mut f64, len: usize) -> DrgStatus {
    guard(|| {
        let theta = borrow(analysis, "analysis")?.analysis.spectral.theta();
        out_slice(out, len, theta.len(), "out")?.copy_from_slice(theta);
        Ok(())
    })
}

/// Multiplicities m_i = rank E_i, in the same order as the eigenvalues.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_multiplicities(
    analysis: *const DrgAnalysis,
    out: *mut u64,
    len: usize,
) -> DrgStatus {
    guard(|| {
        let traces = borrow(analysis, "analysis")?.analysis.spectral.multiplicities();
        for (dst, t) in out_slice(out, len, traces.len(), "out")?.iter_mut().zip(traces) {
            *dst = t.round() as u64;
        }
        Ok(())
    })
}

/// Krein parameter q^h_{ij} with indices in natural eigenvalue order.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_krein(
    analysis: *const DrgAnalysis,
    h: usize,
    i: usize,
    j: usize,
    out: *mut f64,
) -> DrgStatus {
    guard(|| {
        let krein = &borrow(analysis, "analysis")?.analysis.krein;
        let m = krein.diameter() + 1;
        if h >= m || i >= m || j >= m {
            return fail(DrgStatus::IndexOutOfRange, format!("index ({h},{i},{j}) outside 0..{m}"));
        }
        let out = out_slice(out, 1, 1, "out")?;
        out[0] = krein.get(h, i, j);
        Ok(())
    })
}

/// Number of Q-polynomial orderings found.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_ordering_count(analysis: *const DrgAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.structures.len())
}

/// Natural indices of E_1, ..., E_d under ordering `k` (d entries).
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_ordering(
    analysis: *const DrgAnalysis,
    k: usize,
    out: *mut usize,
    len: usize,
) -> DrgStatus {
    guard(|| {
        let a = &borrow(analysis, "analysis")?.analysis;
        ordering_index(a, k)?;
        let order = a.structures[k].ordering().nontrivial();
        out_slice(out, len, order.len(), "out")?.copy_from_slice(order);
        Ok(())
    })
}

/// Dual eigenvalues θ*_0, ..., θ*_d of E_1 under ordering `k`.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_dual_eigenvalues(
    analysis: *const DrgAnalysis,
    k: usize,
    out: *mut f64,
    len: usize,
) -> DrgStatus {
    guard(|| {
        let a = &borrow(analysis, "analysis")?.analysis;
        ordering_index(a, k)?;
        let dual = a.structures[k].dual_theta();
        out_slice(out, len, dual.len(), "out")?.copy_from_slice(dual);
        Ok(())
    })
}

unsafe fn norton_product(
    analysis: *const DrgAnalysis,
    k: usize,
    x: usize,
    y: usize,
    out: *mut f64,
    len: usize,
    closed_form: bool,
) -> Result<(), Fail> {
    let a = &borrow(analysis, "analysis")?.analysis;
    ordering_index(a, k)?;
    let ctx = &a.contexts[k];
    ctx.check_vertex(x)?;
    ctx.check_vertex(y)?;
    let v = if closed_form { ctx.product_formula(x, y) } else { ctx.column_product(x, y) };
    out_slice(out, len, v.len(), "out")?.copy_from_slice(v.as_slice());
    Ok(())
}

/// Norton product Ex̂ ⋆ Eŷ for ordering `k`, computed directly as
/// E(Ex̂ ∘ Eŷ). Writes n coordinates.
#[no_mangle]
pub unsafe extern "C" fn drg_norton_product(
    analysis: *const DrgAnalysis,
    k: usize,
    x: usize,
    y: usize,
    out: *mut f64,
    len: usize,
) -> DrgStatus {
    guard(|| norton_product(analysis, k, x, y, out, len, false))
}

/// Norton product Ex̂ ⋆ Eŷ from the closed-form expansion in Ex̂, Eŷ and
/// the vectors of the local split of (x, y).
#[no_mangle]
pub unsafe extern "C" fn drg_norton_product_formula(
    analysis: *const DrgAnalysis,
    k: usize,
    x: usize,
    y: usize,
    out: *mut f64,
    len: usize,
) -> DrgStatus {
    guard(|| norton_product(analysis, k, x, y, out, len, true))
}

/// Full JSON report as a newly allocated string; release with
/// [`drg_string_free`]. `source` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn drg_analysis_report_json(
    analysis: *const DrgAnalysis,
    source: *const c_char,
    out: *mut *mut c_char,
) -> DrgStatus {
    guard(|| {
        let a = &borrow(analysis, "analysis")?.analysis;
        let source = if source.is_null() { "ffi" } else { c_str(source, "source")? };
        if out.is_null() {
            return fail(DrgStatus::NullPointer, "out is null");
        }
        let json = a.report(source, &AnalysisOptions { tolerance: a.tolerance, ..AnalysisOptions::default() })?;
        let c = CString::new(json.to_json()).or_else(|_| fail(DrgStatus::NumericalFailure, "report contains NUL"))?;
        *out = c.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn drg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
