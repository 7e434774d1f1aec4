mod common;

use std::collections::HashSet;

use overlay_sim::{
    adapt_node, bfs_search, guided_search, AllowableError, NodeId, OverlayNetwork,
    ResourceDescription, SearchRequest, SwapWorstForBest,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn request(origin: usize, target: ResourceDescription, err: f64, hops: u32) -> SearchRequest {
    SearchRequest::new(
        NodeId(origin),
        target,
        AllowableError::new(err).unwrap(),
        hops,
    )
    .unwrap()
}

/// Warms peer caches with some adaptive traffic so rewiring has candidates.
fn warmed(seed: u64, n: usize, cap: usize) -> OverlayNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = OverlayNetwork::generate(n, cap, &mut rng).unwrap();
    for _ in 0..3 * n {
        let r = request(
            rng.gen_range(0..n),
            ResourceDescription::random(&mut rng),
            1.0,
            6,
        );
        guided_search(&mut net, &r, Some(&SwapWorstForBest)).unwrap();
    }
    net
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flooding_matches_shortest_path_oracle(
        seed in any::<u64>(),
        n in 2usize..40,
        origin_pick in any::<prop::sample::Index>(),
        target in prop::array::uniform3(0i64..=4),
        err in 0.0f64..=12.0,
        hop_limit in 1u32..=10,
    ) {
        let net = OverlayNetwork::generate(n, 15, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let hops = common::all_pairs_hops(&net);
        let origin = origin_pick.index(n);
        let target = ResourceDescription::new(target).unwrap();
        let out = bfs_search(&net, &request(origin, target, err, hop_limit)).unwrap();
        let want = common::flooding_oracle(&net, &hops, origin, &target, err, hop_limit);
        prop_assert_eq!(out.success(), want.is_some());
        if let Some((h, m)) = want {
            prop_assert_eq!(out.hops(), h);
            prop_assert_eq!(out.matched_node(), Some(NodeId(m)));
            prop_assert!(out.achieved_distance().unwrap().value() as f64 <= err);
        }
    }

    #[test]
    fn guided_walk_is_simple_and_bounded(
        seed in any::<u64>(),
        adaptive in any::<bool>(),
        target in prop::array::uniform3(0i64..=4),
        err in 0.0f64..=3.0,
        hop_limit in 1u32..=10,
    ) {
        let mut net = warmed(seed, 30, 4);
        let r = request((seed % 30) as usize, ResourceDescription::new(target).unwrap(), err, hop_limit);
        let policy = adaptive.then_some(&SwapWorstForBest as &dyn overlay_sim::AdaptationPolicy);
        let run = guided_search(&mut net, &r, policy).unwrap();
        let o = run.outcome;
        prop_assert!(o.hops() <= hop_limit);
        prop_assert_eq!(run.path.len() as u32, o.hops() + 1);
        prop_assert_eq!(o.messages_sent(), o.hops() as u64);
        let unique: HashSet<_> = run.path.iter().collect();
        prop_assert_eq!(unique.len(), run.path.len());
        prop_assert_eq!(o.success(), o.matched_node().is_some());
        prop_assert_eq!(o.success(), o.achieved_distance().is_some());
        if let Some(d) = o.achieved_distance() {
            prop_assert!(d.value() as f64 <= err);
            prop_assert_eq!(o.matched_node(), run.path.last().copied());
        }
        for w in run.path.windows(2) {
            prop_assert!(net.has_link(w[0], w[1]) || run.rewirings.iter().any(|a| a.node == w[0] || a.node == w[1]));
        }
        prop_assert!(net.audit().is_empty());
    }

    #[test]
    fn flooding_is_monotone_in_threshold(
        seed in any::<u64>(),
        target in prop::array::uniform3(0i64..=4),
        lo in 0.0f64..=12.0,
        hi in 0.0f64..=12.0,
    ) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let net = OverlayNetwork::generate(40, 15, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let target = ResourceDescription::new(target).unwrap();
        let a = bfs_search(&net, &request(0, target, lo, 4)).unwrap();
        let b = bfs_search(&net, &request(0, target, hi, 4)).unwrap();
        prop_assert!(!a.success() || b.success());
        if a.success() {
            prop_assert!(b.hops() <= a.hops());
        }
    }

    /// Without adaptation the greedy route does not depend on the threshold:
    /// the lower-threshold walk follows the higher-threshold walk until the
    /// higher one stops on a match.
    #[test]
    fn guided_route_is_threshold_independent(
        seed in any::<u64>(),
        target in prop::array::uniform3(0i64..=4),
        lo in 0.0f64..=12.0,
        hi in 0.0f64..=12.0,
    ) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let base = OverlayNetwork::generate(40, 15, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let target = ResourceDescription::new(target).unwrap();
        let low = guided_search(&mut base.clone(), &request(3, target, lo, 10), None).unwrap();
        let high = guided_search(&mut base.clone(), &request(3, target, hi, 10), None).unwrap();
        let shared = if high.outcome.success() { high.path.len() - 1 } else { high.path.len() };
        let shared = shared.min(low.path.len());
        prop_assert_eq!(&low.path[..shared], &high.path[..shared]);
        if !high.outcome.success() {
            prop_assert_eq!(&low.path, &high.path);
        }
    }

    #[test]
    fn searches_are_deterministic(seed in any::<u64>(), target in prop::array::uniform3(0i64..=4)) {
        let target = ResourceDescription::new(target).unwrap();
        let r = request(1, target, 1.0, 10);
        let mut a = warmed(seed, 25, 5);
        let mut b = a.clone();
        prop_assert_eq!(bfs_search(&a, &r).unwrap(), bfs_search(&b, &r).unwrap());
        let ra = guided_search(&mut a, &r, Some(&SwapWorstForBest)).unwrap();
        let rb = guided_search(&mut b, &r, Some(&SwapWorstForBest)).unwrap();
        prop_assert_eq!(ra, rb);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn adaptation_preserves_degree_and_improves_locally(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let mut net = warmed(seed, 30, 4);
        let a = NodeId(pick.index(30));
        let own = net.description(a).unwrap();
        let mean = |net: &OverlayNetwork| {
            let ns = net.neighbors(a).unwrap();
            ns.iter().map(|m| common::manhattan(&own, &net.description(*m).unwrap()) as f64).sum::<f64>() / ns.len() as f64
        };
        let degree = net.degree(a).unwrap();
        let before_mean = mean(&net);
        let before_links = net.mean_link_distance().unwrap();
        let protected = net.neighbors(a).unwrap().iter().next().copied();
        let action = adapt_node(&mut net, a, protected).unwrap();
        prop_assert_eq!(net.degree(a).unwrap(), degree);
        prop_assert!(net.audit().is_empty());
        if let Some(act) = action {
            prop_assert!(mean(&net) < before_mean);
            prop_assert!(net.mean_link_distance().unwrap() < before_links);
            prop_assert!(Some(act.dropped) != protected);
            prop_assert!(protected.is_none_or(|p| net.has_link(a, p)));
            prop_assert!(act.dropped != act.added);
        } else {
            prop_assert_eq!(mean(&net), before_mean);
        }
    }
}
