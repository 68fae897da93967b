use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph, GraphError, VertexId, NO_EDGE};

fn pair_key(a: VertexId, b: VertexId) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (u64::from(lo) << 32) | u64::from(hi)
}

/// Generates a connected simple graph with `n` vertices and exactly
/// `⌊n·avg_degree/2⌋` edges.
///
/// Construction: a random spanning tree (vertex `i` of a shuffled labelling
/// attaches to a uniformly chosen earlier vertex), then uniformly random
/// extra edges without duplicates or self-loops. The edge list is shuffled
/// and the weights are a random permutation of `1..=m`, so they are
/// distinct by construction.
///
/// The PRNG is ChaCha8 seeded through `seed_from_u64`, so a given
/// `(n, avg_degree, seed)` always yields the same edge list.
pub fn generate_graph(n: usize, avg_degree: u32, seed: u64) -> Result<Graph, GraphError> {
    let m = (n as u64) * u64::from(avg_degree) / 2;
    let max_edges = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if n < 2 || m < n as u64 - 1 || m > max_edges {
        return Err(GraphError::InfeasibleDegree { n, m });
    }
    if n > VertexId::MAX as usize || m >= u64::from(NO_EDGE) {
        return Err(GraphError::TooLarge(format!("n={n}, m={m}")));
    }
    let m = m as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut labels: Vec<VertexId> = (0..n as VertexId).collect();
    labels.shuffle(&mut rng);

    let mut pairs: Vec<(VertexId, VertexId)> = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.random_range(0..i);
        pairs.push((labels[i], labels[j]));
    }

    let extra = m - (n - 1);
    let free = max_edges as usize - (n - 1);
    if extra > 0 {
        let mut seen: HashSet<u64> = pairs.iter().map(|&(a, b)| pair_key(a, b)).collect();
        if extra * 2 > free {
            // Dense: draw from the explicit complement instead of rejecting.
            let mut rest = Vec::with_capacity(free);
            for a in 0..n as VertexId {
                for b in a + 1..n as VertexId {
                    if !seen.contains(&pair_key(a, b)) {
                        rest.push((a, b));
                    }
                }
            }
            rest.shuffle(&mut rng);
            pairs.extend_from_slice(&rest[..extra]);
        } else {
            seen.reserve(extra);
            while pairs.len() < m {
                let a = rng.random_range(0..n as VertexId);
                let b = rng.random_range(0..n as VertexId);
                if a != b && seen.insert(pair_key(a, b)) {
                    pairs.push((a, b));
                }
            }
        }
    }

    pairs.shuffle(&mut rng);
    let mut weights: Vec<u64> = (1..=m as u64).collect();
    weights.shuffle(&mut rng);

    let edges = pairs
        .into_iter()
        .zip(weights)
        .map(|((a, b), w)| {
            if rng.random::<bool>() {
                Edge::new(b, a, w)
            } else {
                Edge::new(a, b, w)
            }
        })
        .collect();
    Ok(Graph::from_parts_unchecked(n, edges))
}
