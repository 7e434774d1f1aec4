//! C ABI for the overlay search simulator.
//!
//! Networks, experiment configurations, and experiment results are exposed as
//! opaque handles. Every fallible call returns an [`OsimStatus`]; the message
//! for the most recent failure on the calling thread is available from
//! [`osim_last_error_message`]. Strings returned by this library must be
//! released with [`osim_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use overlay_sim::csv::render_csv;
use overlay_sim::{
    distance, export_dot, run_experiment, run_search, AllowableError, Error, ExperimentOutput,
    Invocation, LinkUpdate, NodeId, OverlayNetwork, ResourceDescription, SearchMode, SearchRequest,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownNode = 3,
    SelfLoop = 4,
    /// A well-formed link mutation was refused (duplicate, degree cap, or
    /// isolation guard). The network is unchanged.
    Rejected = 5,
    EmptyReport = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsimMode {
    Flooding = 1,
    Guided = 2,
    Adaptive = 3,
}

impl From<OsimMode> for SearchMode {
    fn from(m: OsimMode) -> Self {
        match m {
            OsimMode::Flooding => SearchMode::Flooding,
            OsimMode::Guided => SearchMode::Guided,
            OsimMode::Adaptive => SearchMode::Adaptive,
        }
    }
}

/// Result of one search. `matched_node` and `achieved_distance` are only
/// meaningful when `success` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OsimSearchOutcome {
    pub success: bool,
    pub matched_node: usize,
    pub achieved_distance: u8,
    pub hops: u32,
    pub messages_sent: u64,
    pub swaps: u32,
}

/// Opaque overlay network.
pub struct OsimNetwork(OverlayNetwork);

/// Opaque experiment configuration, including output settings.
pub struct OsimConfig(Invocation);

/// Opaque experiment result.
pub struct OsimReport(ExperimentOutput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| c"error message contained NUL".into());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: OsimStatus, msg: impl Into<Vec<u8>>) -> OsimStatus {
    set_error(msg);
    status
}

fn from_error(err: Error) -> OsimStatus {
    let status = match &err {
        Error::UnknownNode(_) => OsimStatus::UnknownNode,
        Error::SelfLoop(_) => OsimStatus::SelfLoop,
        Error::EmptyReport => OsimStatus::EmptyReport,
        _ => OsimStatus::InvalidArgument,
    };
    fail(status, err.to_string())
}

fn guard(f: impl FnOnce() -> OsimStatus) -> OsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(OsimStatus::Internal, "panic inside overlay-sim"),
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn description(elements: *const u8) -> Result<ResourceDescription, OsimStatus> {
    if elements.is_null() {
        return Err(fail(OsimStatus::NullPointer, "description pointer is NULL"));
    }
    let e = std::slice::from_raw_parts(elements, 3);
    ResourceDescription::new([e[0] as i64, e[1] as i64, e[2] as i64]).map_err(from_error)
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn osim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn osim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Manhattan distance between two 3-element descriptions (elements 0..=4).
#[no_mangle]
pub unsafe extern "C" fn osim_distance(a: *const u8, b: *const u8, out: *mut u8) -> OsimStatus {
    guard(|| {
        let (a, b) = match (description(a), description(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        *out = distance(&a, &b).value();
        OsimStatus::Ok
    })
}

/// Similarity percentage in [0, 100] between two descriptions.
#[no_mangle]
pub unsafe extern "C" fn osim_similarity(a: *const u8, b: *const u8, out: *mut f64) -> OsimStatus {
    guard(|| {
        let (a, b) = match (description(a), description(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        *out = overlay_sim::similarity(&a, &b).percent();
        OsimStatus::Ok
    })
}

/// Generates a random network. Release it with [`osim_network_free`].
#[no_mangle]
pub unsafe extern "C" fn osim_network_generate(
    num_nodes: usize,
    max_connections: usize,
    seed: u64,
    out: *mut *mut OsimNetwork,
) -> OsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match OverlayNetwork::generate(num_nodes, max_connections, &mut rng) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(OsimNetwork(net)));
                OsimStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn osim_network_free(net: *mut OsimNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Deep copy of a network, caches included.
#[no_mangle]
pub unsafe extern "C" fn osim_network_clone(net: *const OsimNetwork) -> *mut OsimNetwork {
    match net.as_ref() {
        Some(n) => Box::into_raw(Box::new(OsimNetwork(n.0.clone()))),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn osim_network_node_count(net: *const OsimNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn osim_network_edge_count(net: *const OsimNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.edge_count())
}

/// Writes the node's three description elements to `out`.
#[no_mangle]
pub unsafe extern "C" fn osim_network_description(
    net: *const OsimNetwork,
    node: usize,
    out: *mut u8,
) -> OsimStatus {
    guard(|| {
        let Some(net) = net.as_ref() else {
            return fail(OsimStatus::NullPointer, "network is NULL");
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        match net.0.description(NodeId(node)) {
            Ok(d) => {
                ptr::copy_nonoverlapping(d.elements().as_ptr(), out, 3);
                OsimStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Copies the node's neighbor ids, ascending, into `buf`. `len` always
/// receives the neighbor count; a buffer smaller than that yields
/// `BUFFER_TOO_SMALL` with nothing written.
#[no_mangle]
pub unsafe extern "C" fn osim_network_neighbors(
    net: *const OsimNetwork,
    node: usize,
    buf: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> OsimStatus {
    guard(|| {
        let Some(net) = net.as_ref() else {
            return fail(OsimStatus::NullPointer, "network is NULL");
        };
        if len.is_null() {
            return fail(OsimStatus::NullPointer, "len is NULL");
        }
        let neighbors = match net.0.neighbors(NodeId(node)) {
            Ok(n) => n,
            Err(e) => return from_error(e),
        };
        *len = neighbors.len();
        if neighbors.len() > capacity {
            return fail(
                OsimStatus::BufferTooSmall,
                format!("{} neighbors", neighbors.len()),
            );
        }
        if buf.is_null() && !neighbors.is_empty() {
            return fail(OsimStatus::NullPointer, "buf is NULL");
        }
        for (i, m) in neighbors.iter().enumerate() {
            *buf.add(i) = m.index();
        }
        OsimStatus::Ok
    })
}

fn link_status(result: overlay_sim::Result<LinkUpdate>) -> OsimStatus {
    match result {
        Ok(LinkUpdate::Applied) => OsimStatus::Ok,
        Ok(other) => fail(OsimStatus::Rejected, format!("{other:?}")),
        Err(e) => from_error(e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn osim_network_add_link(
    net: *mut OsimNetwork,
    a: usize,
    b: usize,
) -> OsimStatus {
    guard(|| match net.as_mut() {
        Some(net) => link_status(net.0.add_link(NodeId(a), NodeId(b))),
        None => fail(OsimStatus::NullPointer, "network is NULL"),
    })
}

#[no_mangle]
pub unsafe extern "C" fn osim_network_remove_link(
    net: *mut OsimNetwork,
    a: usize,
    b: usize,
) -> OsimStatus {
    guard(|| match net.as_mut() {
        Some(net) => link_status(net.0.remove_link(NodeId(a), NodeId(b))),
        None => fail(OsimStatus::NullPointer, "network is NULL"),
    })
}

/// Mean semantic distance over all links.
#[no_mangle]
pub unsafe extern "C" fn osim_network_mean_link_distance(
    net: *const OsimNetwork,
    out: *mut f64,
) -> OsimStatus {
    guard(|| {
        let Some(net) = net.as_ref() else {
            return fail(OsimStatus::NullPointer, "network is NULL");
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        match net.0.mean_link_distance() {
            Some(m) => {
                *out = m;
                OsimStatus::Ok
            }
            None => fail(OsimStatus::InvalidArgument, "network has no links"),
        }
    })
}

/// DOT rendering of the network; free with [`osim_string_free`].
#[no_mangle]
pub unsafe extern "C" fn osim_network_export_dot(net: *const OsimNetwork) -> *mut c_char {
    match net.as_ref() {
        Some(n) => into_c_string(export_dot(&n.0)),
        None => ptr::null_mut(),
    }
}

/// Runs one search. Guided and adaptive modes update peer caches, and the
/// adaptive mode may rewire the network.
#[no_mangle]
pub unsafe extern "C" fn osim_search(
    net: *mut OsimNetwork,
    mode: OsimMode,
    originator: usize,
    target: *const u8,
    allowable_error: f64,
    hop_limit: u32,
    out: *mut OsimSearchOutcome,
) -> OsimStatus {
    guard(|| {
        let Some(net) = net.as_mut() else {
            return fail(OsimStatus::NullPointer, "network is NULL");
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        let target = match description(target) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let req = match AllowableError::new(allowable_error)
            .and_then(|e| SearchRequest::new(NodeId(originator), target, e, hop_limit))
        {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        match run_search(&mut net.0, mode.into(), &req) {
            Ok(run) => {
                let o = run.outcome;
                *out = OsimSearchOutcome {
                    success: o.success(),
                    matched_node: o.matched_node().map_or(0, NodeId::index),
                    achieved_distance: o.achieved_distance().map_or(0, |d| d.value()),
                    hops: o.hops(),
                    messages_sent: o.messages_sent(),
                    swaps: run.rewirings.len() as u32,
                };
                OsimStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// A configuration holding the default experiment settings.
#[no_mangle]
pub extern "C" fn osim_config_new() -> *mut OsimConfig {
    Box::into_raw(Box::new(OsimConfig(Invocation::default())))
}

#[no_mangle]
pub unsafe extern "C" fn osim_config_free(cfg: *mut OsimConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets one option using the command-line key names, e.g.
/// `osim_config_set(cfg, "num-nodes", "200")`.
#[no_mangle]
pub unsafe extern "C" fn osim_config_set(
    cfg: *mut OsimConfig,
    key: *const c_char,
    value: *const c_char,
) -> OsimStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return fail(OsimStatus::NullPointer, "config is NULL");
        };
        if key.is_null() || value.is_null() {
            return fail(OsimStatus::NullPointer, "key or value is NULL");
        }
        let (Ok(key), Ok(value)) = (CStr::from_ptr(key).to_str(), CStr::from_ptr(value).to_str())
        else {
            return fail(OsimStatus::InvalidArgument, "key and value must be UTF-8");
        };
        match cfg.0.set(key, value) {
            Ok(()) => OsimStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Runs the configured sweep. Release the result with [`osim_report_free`].
#[no_mangle]
pub unsafe extern "C" fn osim_run_experiment(
    cfg: *const OsimConfig,
    out: *mut *mut OsimReport,
) -> OsimStatus {
    guard(|| {
        let Some(cfg) = cfg.as_ref() else {
            return fail(OsimStatus::NullPointer, "config is NULL");
        };
        if out.is_null() {
            return fail(OsimStatus::NullPointer, "out is NULL");
        }
        match run_experiment(&cfg.0.config) {
            Ok(output) => {
                *out = Box::into_raw(Box::new(OsimReport(output)));
                OsimStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn osim_report_free(report: *mut OsimReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Metrics table in the CLI's CSV format; free with [`osim_string_free`].
/// NULL if the report is empty.
#[no_mangle]
pub unsafe extern "C" fn osim_report_csv(report: *const OsimReport) -> *mut c_char {
    let Some(report) = report.as_ref() else {
        return ptr::null_mut();
    };
    match report.0.report.finalize() {
        Ok(rows) => into_c_string(render_csv(&rows)),
        Err(e) => {
            from_error(e);
            ptr::null_mut()
        }
    }
}

/// DOT text of the snapshot topology: `adapted` selects the post-run network.
/// NULL when the configuration disabled snapshots.
#[no_mangle]
pub unsafe extern "C" fn osim_report_snapshot_dot(
    report: *const OsimReport,
    adapted: bool,
) -> *mut c_char {
    let Some(snap) = report.as_ref().and_then(|r| r.0.snapshot.as_ref()) else {
        return ptr::null_mut();
    };
    into_c_string(export_dot(if adapted {
        &snap.adapted
    } else {
        &snap.initial
    }))
}
