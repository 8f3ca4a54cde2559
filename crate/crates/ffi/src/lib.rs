//! C ABI over `cascade-influence`.
//!
//! Trees live behind an opaque [`CiTree`] handle created by one of the
//! `ci_tree_*` constructors and released with [`ci_tree_free`]. Labellings
//! cross the boundary as byte arrays holding 0 or 1 per node. Every function
//! returns a [`CiStatus`]; panics are caught and reported as
//! `CI_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cascade_influence::greedy::greedy_placement;
use cascade_influence::optimal::optimal_summary;
use cascade_influence::seed::rng_from_seed;
use cascade_influence::synth::random_tree;
use cascade_influence::{influence, DirectedTree, Error, Labelling};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidTree = 2,
    SizeMismatch = 3,
    InvalidArgument = 4,
    InvalidBudget = 5,
    Panic = 6,
}

/// Opaque tree handle.
pub struct CiTree {
    inner: DirectedTree,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: CiStatus, msg: impl Into<String>) -> CiStatus {
    set_last_error(msg.into());
    status
}

fn from_error(err: Error) -> CiStatus {
    let status = match &err {
        Error::Tree(_) => CiStatus::InvalidTree,
        Error::LabelLength { .. } => CiStatus::SizeMismatch,
        Error::InvalidBudget { .. } => CiStatus::InvalidBudget,
        _ => CiStatus::InvalidArgument,
    };
    fail(status, err.to_string())
}

fn guarded(f: impl FnOnce() -> CiStatus) -> CiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CiStatus::Panic, "internal panic"))
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if data.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

unsafe fn store_tree(tree: DirectedTree, out: *mut *mut CiTree) -> CiStatus {
    *out = Box::into_raw(Box::new(CiTree { inner: tree }));
    CiStatus::Ok
}

unsafe fn write_labels(labels: &Labelling, out: *mut u8, len: usize) -> CiStatus {
    if len != labels.len() {
        return fail(
            CiStatus::SizeMismatch,
            format!("label buffer holds {len} entries, tree has {} nodes", labels.len()),
        );
    }
    if out.is_null() {
        return fail(CiStatus::NullPointer, "labels_out is null");
    }
    let buf = std::slice::from_raw_parts_mut(out, len);
    for (dst, &b) in buf.iter_mut().zip(labels.bits()) {
        *dst = u8::from(b);
    }
    CiStatus::Ok
}

unsafe fn write_opt(out: *mut usize, value: usize) {
    if !out.is_null() {
        *out = value;
    }
}

/// Builds a tree from a parent array; `-1` marks the root.
///
/// # Safety
/// `parents` must point to `node_count` readable values and `out` must be a
/// valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ci_tree_from_parents(
    parents: *const i64,
    node_count: usize,
    out: *mut *mut CiTree,
) -> CiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CiStatus::NullPointer, "out is null");
        }
        let Some(raw) = slice(parents, node_count) else {
            return fail(CiStatus::NullPointer, "parents is null");
        };
        let mut parents = Vec::with_capacity(raw.len());
        for (v, &p) in raw.iter().enumerate() {
            parents.push(match p {
                -1 => None,
                p if p >= 0 => Some(p as usize),
                p => return fail(CiStatus::InvalidTree, format!("node {v} has parent {p}")),
            });
        }
        match DirectedTree::from_parents(&parents) {
            Ok(t) => store_tree(t, out),
            Err(e) => from_error(e.into()),
        }
    })
}

/// Builds a tree on `node_count` nodes from `edge_count` `(parent, child)`
/// pairs given as two parallel arrays.
///
/// # Safety
/// `parents` and `children` must each point to `edge_count` readable values
/// and `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ci_tree_from_edges(
    node_count: usize,
    parents: *const usize,
    children: *const usize,
    edge_count: usize,
    out: *mut *mut CiTree,
) -> CiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CiStatus::NullPointer, "out is null");
        }
        let (Some(ps), Some(cs)) = (slice(parents, edge_count), slice(children, edge_count)) else {
            return fail(CiStatus::NullPointer, "edge array is null");
        };
        let edges: Vec<(usize, usize)> = ps.iter().copied().zip(cs.iter().copied()).collect();
        match DirectedTree::from_edges(node_count, &edges) {
            Ok(t) => store_tree(t, out),
            Err(e) => from_error(e.into()),
        }
    })
}

/// Uniform random recursive tree on `node_count` nodes.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ci_random_tree(node_count: usize, seed: u64, out: *mut *mut CiTree) -> CiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CiStatus::NullPointer, "out is null");
        }
        match random_tree(node_count, &mut rng_from_seed(seed)) {
            Ok(t) => store_tree(t, out),
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `tree` must be null or a handle returned by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn ci_tree_free(tree: *mut CiTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ci_tree_node_count(tree: *const CiTree) -> usize {
    tree.as_ref().map_or(0, |t| t.inner.node_count())
}

/// Influence of the labelling `labels` (one byte per node, 0 or 1).
///
/// # Safety
/// `tree` must be a live handle, `labels` must point to `len` readable bytes
/// and `out_influence` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ci_influence(
    tree: *const CiTree,
    labels: *const u8,
    len: usize,
    out_influence: *mut usize,
) -> CiStatus {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            return fail(CiStatus::NullPointer, "tree is null");
        };
        if out_influence.is_null() {
            return fail(CiStatus::NullPointer, "out_influence is null");
        }
        let Some(raw) = slice(labels, len) else {
            return fail(CiStatus::NullPointer, "labels is null");
        };
        let mut bits = Vec::with_capacity(len);
        for (v, &b) in raw.iter().enumerate() {
            match b {
                0 | 1 => bits.push(b == 1),
                b => return fail(CiStatus::InvalidArgument, format!("label of node {v} is {b}, expected 0 or 1")),
            }
        }
        match influence(&tree.inner, &Labelling::from_bits(bits)) {
            Ok(i) => {
                *out_influence = i;
                CiStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Maximum influence and a labelling attaining it with the fewest 1-nodes.
/// `labels_out` must hold exactly one byte per node; `out_influence` and
/// `out_k` may be null.
///
/// # Safety
/// `tree` must be a live handle and `labels_out` must point to `len`
/// writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ci_optimal(
    tree: *const CiTree,
    labels_out: *mut u8,
    len: usize,
    out_influence: *mut usize,
    out_k: *mut usize,
) -> CiStatus {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            return fail(CiStatus::NullPointer, "tree is null");
        };
        let n = tree.inner.node_count();
        let report = optimal_summary(&tree.inner);
        let labels = match Labelling::from_ones(n, report.one_nodes.iter().copied()) {
            Ok(l) => l,
            Err(e) => return from_error(e),
        };
        let status = write_labels(&labels, labels_out, len);
        if status == CiStatus::Ok {
            write_opt(out_influence, report.influence);
            write_opt(out_k, report.k);
        }
        status
    })
}

/// Greedy placement of exactly `k` 1-nodes, seeded by `seed`.
///
/// # Safety
/// `tree` must be a live handle, `labels_out` must point to `len` writable
/// bytes and `out_influence` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ci_greedy(
    tree: *const CiTree,
    k: usize,
    seed: u64,
    labels_out: *mut u8,
    len: usize,
    out_influence: *mut usize,
) -> CiStatus {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            return fail(CiStatus::NullPointer, "tree is null");
        };
        let outcome = match greedy_placement(&tree.inner, k, &mut rng_from_seed(seed)) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        let status = write_labels(&outcome.labels, labels_out, len);
        if status == CiStatus::Ok {
            write_opt(out_influence, outcome.influence);
        }
        status
    })
}

/// Static description of a status code. Takes the raw integer so any value
/// a C caller passes is safe.
#[no_mangle]
pub extern "C" fn ci_status_message(status: i32) -> *const c_char {
    let msg: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"input is not a rooted directed tree\0",
        3 => b"buffer length does not match node count\0",
        4 => b"invalid argument value\0",
        5 => b"budget exceeds node count\0",
        6 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    msg.as_ptr().cast()
}

/// Detail of the last failure on this thread, or null. Valid until the next
/// call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ci_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
