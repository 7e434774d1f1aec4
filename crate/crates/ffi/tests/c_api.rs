use std::ffi::{CStr, CString};
use std::ptr;

use overlay_sim_ffi::*;

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    osim_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(osim_last_error_message())
        .to_string_lossy()
        .into_owned()
}

unsafe fn generate(n: usize, cap: usize, seed: u64) -> *mut OsimNetwork {
    let mut net = ptr::null_mut();
    assert_eq!(
        osim_network_generate(n, cap, seed, &mut net),
        OsimStatus::Ok
    );
    net
}

#[test]
fn formulas() {
    unsafe {
        let (a, b) = ([1u8, 2, 3], [3u8, 0, 4]);
        let mut d = 0u8;
        assert_eq!(
            osim_distance(a.as_ptr(), b.as_ptr(), &mut d),
            OsimStatus::Ok
        );
        assert_eq!(d, 5);
        let mut s = 0.0;
        assert_eq!(
            osim_similarity([0, 0, 0].as_ptr(), [4, 4, 4].as_ptr(), &mut s),
            OsimStatus::Ok
        );
        assert_eq!(s, 0.0);
        assert_eq!(
            osim_distance([5, 0, 0].as_ptr(), b.as_ptr(), &mut d),
            OsimStatus::InvalidArgument
        );
        assert!(last_error().contains("outside 0..=4"));
        assert_eq!(
            osim_distance(ptr::null(), b.as_ptr(), &mut d),
            OsimStatus::NullPointer
        );
    }
}

#[test]
fn network_lifecycle() {
    unsafe {
        let net = generate(50, 15, 3);
        assert_eq!(osim_network_node_count(net), 50);
        let edges = osim_network_edge_count(net);

        let mut len = 0usize;
        assert_eq!(
            osim_network_neighbors(net, 0, ptr::null_mut(), 0, &mut len),
            OsimStatus::BufferTooSmall
        );
        assert!(len >= 1);
        let mut buf = vec![0usize; len];
        assert_eq!(
            osim_network_neighbors(net, 0, buf.as_mut_ptr(), buf.len(), &mut len),
            OsimStatus::Ok
        );
        assert!(buf.windows(2).all(|w| w[0] < w[1]));

        let mut desc = [9u8; 3];
        assert_eq!(
            osim_network_description(net, 49, desc.as_mut_ptr()),
            OsimStatus::Ok
        );
        assert!(desc.iter().all(|&e| e <= 4));
        assert_eq!(
            osim_network_description(net, 50, desc.as_mut_ptr()),
            OsimStatus::UnknownNode
        );

        let dot = take_string(osim_network_export_dot(net));
        assert_eq!(dot.matches(" -- ").count(), edges);

        let copy = osim_network_clone(net);
        assert_eq!(take_string(osim_network_export_dot(copy)), dot);
        osim_network_free(copy);
        osim_network_free(net);
        osim_network_free(ptr::null_mut());
    }
}

#[test]
fn link_mutation_codes() {
    unsafe {
        let net = generate(2, 15, 0);
        assert_eq!(osim_network_add_link(net, 0, 0), OsimStatus::SelfLoop);
        assert_eq!(osim_network_add_link(net, 0, 1), OsimStatus::Rejected);
        assert_eq!(osim_network_remove_link(net, 0, 1), OsimStatus::Rejected);
        assert!(last_error().contains("WouldIsolate"));
        assert_eq!(osim_network_add_link(net, 0, 7), OsimStatus::UnknownNode);
        osim_network_free(net);

        let net = generate(3, 15, 1);
        let before = osim_network_edge_count(net);
        let status = if before == 2 {
            // Path: close the triangle, then open it again.
            let mut pairs = vec![];
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                if osim_network_add_link(net, a, b) == OsimStatus::Ok {
                    pairs.push((a, b));
                }
            }
            assert_eq!(pairs.len(), 1);
            osim_network_remove_link(net, pairs[0].0, pairs[0].1)
        } else {
            osim_network_remove_link(net, 0, 1)
        };
        assert_eq!(status, OsimStatus::Ok);
        osim_network_free(net);
    }
}

#[test]
fn searches() {
    unsafe {
        let net = generate(60, 15, 8);
        let target = [2u8, 2, 2];
        let mut out = OsimSearchOutcome::default();
        assert_eq!(
            osim_search(
                net,
                OsimMode::Flooding,
                0,
                target.as_ptr(),
                12.0,
                10,
                &mut out
            ),
            OsimStatus::Ok
        );
        assert!(out.success);
        assert_eq!(out.hops, 1);

        let mut guided = OsimSearchOutcome::default();
        assert_eq!(
            osim_search(
                net,
                OsimMode::Guided,
                0,
                target.as_ptr(),
                1.0,
                10,
                &mut guided
            ),
            OsimStatus::Ok
        );
        assert!(guided.hops <= 10);
        assert_eq!(guided.messages_sent, guided.hops as u64);

        let mut adaptive = OsimSearchOutcome::default();
        for origin in 0..60 {
            assert_eq!(
                osim_search(
                    net,
                    OsimMode::Adaptive,
                    origin,
                    target.as_ptr(),
                    0.0,
                    10,
                    &mut adaptive
                ),
                OsimStatus::Ok
            );
        }

        assert_eq!(
            osim_search(
                net,
                OsimMode::Guided,
                0,
                target.as_ptr(),
                13.0,
                10,
                &mut out
            ),
            OsimStatus::InvalidArgument
        );
        assert_eq!(
            osim_search(net, OsimMode::Guided, 0, target.as_ptr(), 1.0, 0, &mut out),
            OsimStatus::InvalidArgument
        );
        assert_eq!(
            osim_search(net, OsimMode::Guided, 99, target.as_ptr(), 1.0, 3, &mut out),
            OsimStatus::UnknownNode
        );
        osim_network_free(net);
    }
}

#[test]
fn experiment_round_trip() {
    unsafe {
        let cfg = osim_config_new();
        for (k, v) in [
            ("num-nodes", "40"),
            ("requests-per-node", "4"),
            ("seed", "11"),
            ("snapshot-nodes", "20"),
        ] {
            let (k, v) = (CString::new(k).unwrap(), CString::new(v).unwrap());
            assert_eq!(osim_config_set(cfg, k.as_ptr(), v.as_ptr()), OsimStatus::Ok);
        }
        let bad = (CString::new("fanout").unwrap(), CString::new("3").unwrap());
        assert_eq!(
            osim_config_set(cfg, bad.0.as_ptr(), bad.1.as_ptr()),
            OsimStatus::InvalidArgument
        );
        assert!(last_error().contains("fanout"));

        let mut report = ptr::null_mut();
        assert_eq!(osim_run_experiment(cfg, &mut report), OsimStatus::Ok);
        let csv = take_string(osim_report_csv(report));
        assert_eq!(csv.lines().count(), 22);
        assert!(csv.starts_with("config,allowable_error,"));
        let initial = take_string(osim_report_snapshot_dot(report, false));
        let adapted = take_string(osim_report_snapshot_dot(report, true));
        assert_eq!(initial.matches("[label=").count(), 20);
        assert_eq!(adapted.matches("[label=").count(), 20);

        let mut again = ptr::null_mut();
        assert_eq!(osim_run_experiment(cfg, &mut again), OsimStatus::Ok);
        assert_eq!(take_string(osim_report_csv(again)), csv);
        osim_report_free(again);
        osim_report_free(report);

        let n1 = (
            CString::new("num-nodes").unwrap(),
            CString::new("1").unwrap(),
        );
        assert_eq!(
            osim_config_set(cfg, n1.0.as_ptr(), n1.1.as_ptr()),
            OsimStatus::Ok
        );
        let mut failed = ptr::null_mut();
        assert_eq!(
            osim_run_experiment(cfg, &mut failed),
            OsimStatus::InvalidArgument
        );
        assert!(failed.is_null());
        osim_config_free(cfg);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/overlay_sim.h");
    for name in [
        "osim_last_error_message",
        "osim_string_free",
        "osim_distance",
        "osim_similarity",
        "osim_network_generate",
        "osim_network_free",
        "osim_network_clone",
        "osim_network_node_count",
        "osim_network_edge_count",
        "osim_network_description",
        "osim_network_neighbors",
        "osim_network_add_link",
        "osim_network_remove_link",
        "osim_network_mean_link_distance",
        "osim_network_export_dot",
        "osim_search",
        "osim_config_new",
        "osim_config_free",
        "osim_config_set",
        "osim_run_experiment",
        "osim_report_free",
        "osim_report_csv",
        "osim_report_snapshot_dot",
    ] {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct OsimNetwork OsimNetwork;"));
}
