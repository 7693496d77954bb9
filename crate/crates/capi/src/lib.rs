//! C ABI over the core decisions: opaque handles, status codes, and
//! caller-freed buffers, so non-Rust clients can parse graphs, decide
//! arrowing, and extract derived colorings.
//!
//! Ownership: every handle returned through an out-pointer goes back
//! through its matching `*_free`; strings through [`sr_string_free`]; id
//! buffers through [`sr_ids_free`]. All functions may run concurrently as
//! long as no handle is freed while another call still uses it.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use star_ramsey::arrowing::{arrows, ArrowingCertificate, ArrowingInstance, SearchBudget};
use star_ramsey::error::{ProofError, SearchError};
use star_ramsey::graph::Graph;
use star_ramsey::{canonical_form, construct_upper, m_min, parse_graph6, proof_color, to_graph6};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidGraph6 = 2,
    InvalidEdgeList = 3,
    InvalidInstance = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    ProofPrecondition = 7,
    ProofFailed = 8,
    Internal = 9,
}

/// Opaque simple graph handle (at most 64 vertices).
pub struct SrGraph {
    inner: Graph,
}

/// Opaque arrowing certificate handle.
pub struct SrCertificate {
    inner: ArrowingCertificate,
}

/// Panics must not unwind across the boundary; they become `Internal`.
fn guarded(f: impl FnOnce() -> SrStatus + UnwindSafe) -> SrStatus {
    catch_unwind(f).unwrap_or(SrStatus::Internal)
}

unsafe fn hand_out<T>(out: *mut *mut T, value: T) -> SrStatus {
    *out = Box::into_raw(Box::new(value));
    SrStatus::Ok
}

unsafe fn hand_out_string(out: *mut *mut c_char, s: String) -> SrStatus {
    // graph6 and JSON are NUL-free by construction
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SrStatus::Ok
        }
        Err(_) => SrStatus::Internal,
    }
}

/// Parse a graph6 string into a new graph handle.
///
/// # Safety
/// `g6` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_parse_g6(g6: *const c_char, out: *mut *mut SrGraph) -> SrStatus {
    if g6.is_null() || out.is_null() {
        return SrStatus::NullArgument;
    }
    guarded(|| {
        let Ok(text) = CStr::from_ptr(g6).to_str() else {
            return SrStatus::InvalidGraph6;
        };
        match parse_graph6(text) {
            Ok(g) => hand_out(out, SrGraph { inner: g }),
            Err(_) => SrStatus::InvalidGraph6,
        }
    })
}

/// Build a graph from `edge_count` pairs of endpoints laid out as
/// `[a0, b0, a1, b1, ...]`.
///
/// # Safety
/// `endpoints` must point to `2 * edge_count` readable entries (it may be
/// NULL when `edge_count` is 0); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_from_edge_list(
    vertex_count: usize,
    endpoints: *const u32,
    edge_count: usize,
    out: *mut *mut SrGraph,
) -> SrStatus {
    if out.is_null() || (endpoints.is_null() && edge_count > 0) {
        return SrStatus::NullArgument;
    }
    guarded(|| {
        let flat = if edge_count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(endpoints, 2 * edge_count)
        };
        let edges: Vec<(usize, usize)> = flat
            .chunks_exact(2)
            .map(|ab| (ab[0] as usize, ab[1] as usize))
            .collect();
        match Graph::from_edge_list(vertex_count, &edges) {
            Ok(g) => hand_out(out, SrGraph { inner: g }),
            Err(_) => SrStatus::InvalidEdgeList,
        }
    })
}

/// # Safety
/// `g` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_free(g: *mut SrGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_vertex_count(g: *const SrGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_edge_count(g: *const SrGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Graph6 encoding of the graph as given.
///
/// # Safety
/// `g` must be a live handle; `out` must be a valid pointer. Free the
/// result with [`sr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_graph_to_g6(g: *const SrGraph, out: *mut *mut c_char) -> SrStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return SrStatus::NullArgument;
    };
    guarded(|| hand_out_string(out, to_graph6(&g.inner)))
}

/// Canonical graph6 form: equal strings exactly for isomorphic graphs.
///
/// # Safety
/// Same contract as [`sr_graph_to_g6`].
#[no_mangle]
pub unsafe extern "C" fn sr_graph_canonical_g6(
    g: *const SrGraph,
    out: *mut *mut c_char,
) -> SrStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return SrStatus::NullArgument;
    };
    guarded(|| hand_out_string(out, canonical_form(&g.inner)))
}

/// # Safety
/// `s` must have been returned by this library and not freed already.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Smallest m for which the n(m+p)-1 bound applies; 0 for degenerate
/// parameters.
#[no_mangle]
pub extern "C" fn sr_m_min(n: usize, p: usize) -> usize {
    if n == 0 || p == 0 {
        return 0;
    }
    m_min(n, p)
}

/// Build the n(m+p)-1-edge arrowing construction.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_construct_upper(
    n: usize,
    p: usize,
    m: usize,
    out: *mut *mut SrGraph,
) -> SrStatus {
    if out.is_null() {
        return SrStatus::NullArgument;
    }
    guarded(|| {
        if ArrowingInstance::new(n, p, m).is_err() {
            return SrStatus::InvalidInstance;
        }
        match construct_upper(n, p, m) {
            Ok(g) => hand_out(out, SrGraph { inner: g }),
            Err(_) => SrStatus::Unsupported,
        }
    })
}

/// Decide whether the host arrows (n K_{1,p}, K_{1,m}). `max_nodes` bounds
/// the search; pass 0 for the default budget.
///
/// # Safety
/// `g` must be a live handle; `out` must be a valid pointer. Free the
/// certificate with [`sr_cert_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_arrows(
    g: *const SrGraph,
    n: usize,
    p: usize,
    m: usize,
    max_nodes: u64,
    out: *mut *mut SrCertificate,
) -> SrStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return SrStatus::NullArgument;
    };
    guarded(|| {
        let Ok(inst) = ArrowingInstance::new(n, p, m) else {
            return SrStatus::InvalidInstance;
        };
        let budget = if max_nodes == 0 {
            SearchBudget::default()
        } else {
            SearchBudget { max_nodes }
        };
        match arrows(&g.inner, inst, budget) {
            Ok(cert) => hand_out(out, SrCertificate { inner: cert }),
            Err(SearchError::BudgetExceeded { .. }) => SrStatus::BudgetExceeded,
            Err(_) => SrStatus::Unsupported,
        }
    })
}

/// 1 when the certified verdict is "arrows", 0 when refuted, -1 for NULL.
///
/// # Safety
/// `c` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_cert_arrows(c: *const SrCertificate) -> i32 {
    c.as_ref().map_or(-1, |c| i32::from(c.inner.arrows))
}

/// Serialize the certificate to its JSON interchange form.
///
/// # Safety
/// `c` must be a live handle; `out` must be a valid pointer. Free the
/// result with [`sr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_cert_to_json(
    c: *const SrCertificate,
    out: *mut *mut c_char,
) -> SrStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return SrStatus::NullArgument;
    };
    guarded(|| hand_out_string(out, c.inner.to_json()))
}

/// # Safety
/// `c` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sr_cert_free(c: *mut SrCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Derive a good coloring of a connected sub-budget host. On success,
/// `*red_ids_out` points at `*len_out` edge ids (host edge order) that are
/// red; every other edge is blue.
///
/// # Safety
/// `g` must be a live handle; `red_ids_out` and `len_out` must be valid
/// pointers. Free the buffer with [`sr_ids_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_proof_color(
    g: *const SrGraph,
    n: usize,
    p: usize,
    m: usize,
    red_ids_out: *mut *mut usize,
    len_out: *mut usize,
) -> SrStatus {
    let (Some(g), false) = (g.as_ref(), red_ids_out.is_null() || len_out.is_null()) else {
        return SrStatus::NullArgument;
    };
    guarded(|| {
        let Ok(inst) = ArrowingInstance::new(n, p, m) else {
            return SrStatus::InvalidInstance;
        };
        match proof_color(&g.inner, inst) {
            Ok((col, _trace)) => {
                let ids = col.red_edge_ids();
                let len = ids.len();
                let ptr = Box::into_raw(ids.into_boxed_slice()) as *mut usize;
                *red_ids_out = ptr;
                *len_out = len;
                SrStatus::Ok
            }
            Err(
                ProofError::Disconnected
                | ProofError::EdgeBudget { .. }
                | ProofError::MBelowThreshold { .. },
            ) => SrStatus::ProofPrecondition,
            Err(_) => SrStatus::ProofFailed,
        }
    })
}

/// # Safety
/// `ids` and `len` must be exactly what [`sr_proof_color`] handed out.
#[no_mangle]
pub unsafe extern "C" fn sr_ids_free(ids: *mut usize, len: usize) {
    if !ids.is_null() {
        drop(Box::from_raw(std::ptr::slice_from_raw_parts_mut(ids, len)));
    }
}
