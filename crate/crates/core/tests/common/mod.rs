#![allow(dead_code)]

use graphcode_core::WeightedGraph;
use rand::Rng;

/// A random graph on `n` vertices, weights drawn from `weights` per pair,
/// with the given input set.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    weights: &[i64],
    inputs: &[usize],
) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let w = weights[rng.gen_range(0..weights.len())];
            if w != 0 {
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::from_edges(n, inputs, &edges).expect("valid random graph")
}

/// Every subset of `outputs`, smallest first.
pub fn all_subsets(outputs: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << outputs.len())
        .map(|mask| {
            outputs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    out
}
