#![allow(dead_code, clippy::needless_range_loop)]

use overlay_sim::{NodeId, OverlayNetwork, ResourceDescription};

/// All-pairs hop distances by Floyd–Warshall; `u32::MAX` marks unreachable.
pub fn all_pairs_hops(net: &OverlayNetwork) -> Vec<Vec<u32>> {
    let n = net.len();
    let inf = u32::MAX;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for m in net.neighbors(NodeId(i)).unwrap() {
            d[i][m.0] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == inf {
                continue;
            }
            for j in 0..n {
                if d[k][j] != inf && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Brute-force Manhattan distance, written independently of the library.
pub fn manhattan(a: &ResourceDescription, b: &ResourceDescription) -> u32 {
    let (x, y) = (a.elements(), b.elements());
    (0..3)
        .map(|k| (x[k].max(y[k]) - x[k].min(y[k])) as u32)
        .sum()
}

/// Expected flooding result: (hops, lowest matching id at that depth), or
/// `None` when nothing matches within `hop_limit`.
pub fn flooding_oracle(
    net: &OverlayNetwork,
    hops: &[Vec<u32>],
    origin: usize,
    target: &ResourceDescription,
    allowable: f64,
    hop_limit: u32,
) -> Option<(u32, usize)> {
    (0..net.len())
        .filter(|&m| m != origin)
        .filter(|&m| hops[origin][m] <= hop_limit)
        .filter(|&m| manhattan(target, &net.description(NodeId(m)).unwrap()) as f64 <= allowable)
        .map(|m| (hops[origin][m], m))
        .min()
}
