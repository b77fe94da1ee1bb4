//! Inputs shared by the pipeline benchmarks.

use std::collections::BTreeMap;

use shiftrecon_core::random::{random_system, rng};
use shiftrecon_core::{FiniteDynSys, StateId};

/// A random system on `n` states and a copy with every state renamed and the
/// names shuffled, so the conjugacy search cannot rely on matching ids.
pub fn relabeled_pair(n: usize, seed: u64) -> (FiniteDynSys, FiniteDynSys) {
    let mut r = rng(seed);
    let a = random_system(&mut r, n);
    // reversed index order breaks any accidental alignment of sorted names
    let rename = |s: &StateId| StateId::new(format!("r{}", n - s.as_str().parse::<usize>().unwrap())).unwrap();
    let step: BTreeMap<StateId, StateId> = a.step_map().iter().map(|(s, t)| (rename(s), rename(t))).collect();
    let b = FiniteDynSys::new(step).expect("renaming keeps the map total");
    (a, b)
}
