//! Seeded generators for random test instances.
//!
//! All generators draw from a caller-supplied RNG, so a fixed seed reproduces
//! the same instances on every platform.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsys::FiniteDynSys;
use crate::observe::{Measurement, ObservedSystem};
use crate::sbc::{all_blocks, SlidingBlockCode};
use crate::shift::{Edge, SubshiftPresentation};
use crate::symbol::{StateId, Symbol, VertexId};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over the `n^n` total maps on states `0..n`.
pub fn random_system<R: Rng>(rng: &mut R, n: usize) -> FiniteDynSys {
    FiniteDynSys::from_pairs((0..n).map(|i| (i.to_string(), rng.random_range(0..n).to_string())))
        .expect("integer names are valid ids")
}

/// `count` systems, sizes uniform in `1..=max_states`.
pub fn random_systems(seed: u64, count: usize, max_states: usize) -> Vec<FiniteDynSys> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_states.max(1));
            random_system(&mut rng, n)
        })
        .collect()
}

/// Symbols `s0, s1, …`.
pub fn alphabet(size: usize) -> BTreeSet<Symbol> {
    (0..size).map(|i| Symbol::Atom(format!("s{i}"))).collect()
}

/// A nonempty pruned presentation with at most `max_vertices` vertices, one or
/// two outgoing edges per vertex and labels from `alphabet`.
pub fn random_presentation<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    alphabet: &BTreeSet<Symbol>,
) -> SubshiftPresentation {
    let labels: Vec<&Symbol> = alphabet.iter().collect();
    loop {
        let n = rng.random_range(1..=max_vertices.max(1));
        let vid = |i: usize| VertexId::new(format!("v{i}")).unwrap();
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for _ in 0..rng.random_range(1..=2) {
                edges.insert(Edge {
                    from: vid(i),
                    to: vid(rng.random_range(0..n)),
                    label: (*labels.choose(rng).expect("nonempty alphabet")).clone(),
                });
            }
        }
        let p = SubshiftPresentation::new((0..n).map(vid).collect(), alphabet.clone(), edges)
            .expect("edges use known vertices and labels");
        if !p.is_empty() {
            return p;
        }
    }
}

/// Generator chosen uniformly on every block over `source`.
pub fn random_code<R: Rng>(
    rng: &mut R,
    window: usize,
    source: &BTreeSet<Symbol>,
    target: &BTreeSet<Symbol>,
) -> SlidingBlockCode {
    let outs: Vec<&Symbol> = target.iter().collect();
    let gen = all_blocks(source, window + 1)
        .into_iter()
        .map(|w| (w, (*outs.choose(rng).expect("nonempty target")).clone()))
        .collect();
    SlidingBlockCode::new(window, source.clone(), target.clone(), gen).expect("well-formed generator")
}

/// A random system with a random measurement into `alphabet(symbols)` and a
/// random nonempty set of initial points.
pub fn random_observed<R: Rng>(rng: &mut R, max_states: usize, symbols: usize) -> ObservedSystem {
    let n = rng.random_range(1..=max_states.max(1));
    let sys = random_system(rng, n);
    let alpha = alphabet(symbols.max(1));
    let labels: Vec<&Symbol> = alpha.iter().collect();
    let phi: BTreeMap<StateId, Symbol> =
        sys.states().iter().map(|s| (s.clone(), (*labels.choose(rng).unwrap()).clone())).collect();
    let mut initial: Vec<StateId> = sys.states().iter().filter(|_| rng.random_bool(0.4)).cloned().collect();
    if initial.is_empty() {
        initial.push(sys.states()[rng.random_range(0..n)].clone());
    }
    let meas = Measurement::new(alpha, phi).expect("labels come from the alphabet");
    ObservedSystem::new(sys, meas, initial).expect("initial points are states")
}
