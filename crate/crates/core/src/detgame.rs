//! The determination game: an orange edge is removed once its endpoints are
//! joined by a path of white edges.

use std::collections::{BTreeMap, BTreeSet};

use crate::cactus::CactusTopology;
use crate::gadgets::populate_multiplexor;
use crate::exact::Rational;

pub type Pair = (u32, u32);

fn norm((a, b): Pair) -> Pair {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub vertices: BTreeSet<u32>,
    pub white: BTreeSet<Pair>,
    pub orange: BTreeSet<Pair>,
    pub removed: Vec<Pair>,
}

impl GameState {
    /// Builds a state from edge lists; endpoints are added to the vertex set
    /// and pairs are stored with the smaller id first.
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        white: impl IntoIterator<Item = Pair>,
        orange: impl IntoIterator<Item = Pair>,
    ) -> Self {
        let white: BTreeSet<Pair> = white.into_iter().map(norm).collect();
        let orange: BTreeSet<Pair> = orange.into_iter().map(norm).filter(|p| !white.contains(p)).collect();
        let mut vertices: BTreeSet<u32> = vertices.into_iter().collect();
        for &(a, b) in white.iter().chain(&orange) {
            vertices.insert(a);
            vertices.insert(b);
        }
        GameState {
            vertices,
            white,
            orange,
            removed: Vec::new(),
        }
    }

    pub fn all_orange_removed(&self) -> bool {
        self.orange.is_empty()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Plays the game to a fixpoint. Each pass removes, in lexicographic order,
/// every orange edge whose endpoints share a white component. With
/// `promote`, removed edges turn white before the next pass.
pub fn run_game(state: &GameState, promote: bool) -> GameState {
    let mut state = state.clone();
    let index: BTreeMap<u32, usize> = state.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    loop {
        let mut uf = UnionFind::new(index.len());
        for (a, b) in &state.white {
            uf.union(index[a], index[b]);
        }
        let removable: Vec<Pair> = state
            .orange
            .iter()
            .filter(|(a, b)| uf.find(index[a]) == uf.find(index[b]))
            .copied()
            .collect();
        if removable.is_empty() {
            return state;
        }
        for p in removable {
            state.orange.remove(&p);
            state.removed.push(p);
            if promote {
                state.white.insert(p);
            }
        }
        if !promote {
            // white edges are unchanged, so a second pass removes nothing
            return state;
        }
    }
}

/// The multiplexor star on hub 1 with leaves 2..=7 and its five chords.
pub fn multiplexor_game() -> GameState {
    let unit = Rational::one();
    let gadget = populate_multiplexor(&unit, &unit, &unit).expect("unit parameters");
    let leaf: BTreeMap<_, u32> = gadget
        .weights
        .iter()
        .enumerate()
        .map(|(i, (slot, _))| (*slot, i as u32 + 2))
        .collect();
    GameState::new(
        1..=7,
        leaf.values().map(|&v| (1, v)),
        gadget.chords.iter().map(|(a, b)| (leaf[a], leaf[b])),
    )
}

/// Star edges white, auxiliary edges orange.
pub fn cactus_game(topology: &CactusTopology) -> GameState {
    GameState::new(
        topology.interior.iter().chain(&topology.boundary).copied(),
        topology.star_edges(),
        topology.auxiliary.iter().copied(),
    )
}
