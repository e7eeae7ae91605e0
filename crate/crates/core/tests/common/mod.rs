#![allow(dead_code)]

use fibernet::network::{Edge, Network, VertexId, VertexKind};
use fibernet::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::frac(rng.gen_range(1..=100), rng.gen_range(1..=100))
}

/// Connected network on 2..=8 vertices with at least one boundary vertex and
/// conductivities p/q, 1 <= p, q <= 100. A random spanning tree guarantees
/// every interior vertex reaches the boundary.
pub fn random_network(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: u32 = rng.gen_range(2..=8);
    let ids: Vec<u32> = (1..=n).map(|i| i * 3 + rng.gen_range(0..3)).collect();
    let mut kinds: Vec<VertexKind> = ids
        .iter()
        .map(|_| if rng.gen_bool(0.5) { VertexKind::Boundary } else { VertexKind::Interior })
        .collect();
    let forced = rng.gen_range(0..kinds.len());
    kinds[forced] = VertexKind::Boundary;
    let mut order = ids.clone();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for k in 1..order.len() {
        let parent = order[rng.gen_range(0..k)];
        edges.push(Edge::star(order[k], parent, random_rational(&mut rng)));
    }
    let extra = rng.gen_range(0..=n as usize);
    for _ in 0..extra {
        let a = ids[rng.gen_range(0..ids.len())];
        let b = ids[rng.gen_range(0..ids.len())];
        if a != b {
            edges.push(Edge::star(a, b, random_rational(&mut rng)));
        }
    }
    Network::build(ids.iter().map(|&i| VertexId(i)).zip(kinds), edges).expect("generated network is valid")
}
