//! Finite discrete-time dynamical systems and semiconjugacies.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::symbol::StateId;

/// A finite state set with a total self-map.
///
/// States are kept sorted; internally the step is an index table into that
/// sorted list, so iteration order is deterministic everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteDynSys {
    states: Vec<StateId>,
    step: Vec<usize>,
}

impl FiniteDynSys {
    /// Build from a step table. Every key is a state; every value must also be a key.
    pub fn new(step: BTreeMap<StateId, StateId>) -> Result<Self> {
        let states: Vec<StateId> = step.keys().cloned().collect();
        let mut table = Vec::with_capacity(states.len());
        for next in step.values() {
            let j = states.binary_search(next).map_err(|_| Error::StateNotFound(next.to_string()))?;
            table.push(j);
        }
        Ok(FiniteDynSys { states, step: table })
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            map.insert(StateId::new(a.as_ref())?, StateId::new(b.as_ref())?);
        }
        Self::new(map)
    }

    /// Build from sorted, distinct states and an index step table.
    pub(crate) fn from_parts(states: Vec<StateId>, step: Vec<usize>) -> Self {
        debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(states.len(), step.len());
        debug_assert!(step.iter().all(|&j| j < states.len()));
        FiniteDynSys { states, step }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The cycle `0 → 1 → … → n-1 → 0` on integer-named states.
    pub fn cycle(n: usize) -> Self {
        Self::from_pairs((0..n).map(|i| (i.to_string(), ((i + 1) % n).to_string())))
            .expect("integer names are valid ids")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn contains(&self, s: &StateId) -> bool {
        self.index_of(s).is_some()
    }

    pub fn index_of(&self, s: &StateId) -> Option<usize> {
        self.states.binary_search(s).ok()
    }

    pub(crate) fn require(&self, s: &StateId) -> Result<usize> {
        self.index_of(s).ok_or_else(|| Error::StateNotFound(s.to_string()))
    }

    pub fn step_indices(&self) -> &[usize] {
        &self.step
    }

    pub fn step(&self, s: &StateId) -> Result<&StateId> {
        let i = self.require(s)?;
        Ok(&self.states[self.step[i]])
    }

    pub fn step_map(&self) -> BTreeMap<StateId, StateId> {
        self.states.iter().zip(&self.step).map(|(s, &j)| (s.clone(), self.states[j].clone())).collect()
    }

    /// `step^n(i)` on indices. Walks at most `len` steps before reducing
    /// `n` modulo the cycle the orbit falls into.
    pub(crate) fn iterate_index(&self, i: usize, n: u64) -> usize {
        let mut seen = vec![u64::MAX; self.len()];
        let mut cur = i;
        let mut t = 0u64;
        while t < n {
            if seen[cur] != u64::MAX {
                let period = t - seen[cur];
                let rest = (n - t) % period;
                for _ in 0..rest {
                    cur = self.step[cur];
                }
                return cur;
            }
            seen[cur] = t;
            cur = self.step[cur];
            t += 1;
        }
        cur
    }

    /// `step^n(s)`.
    pub fn iterate(&self, s: &StateId, n: u64) -> Result<StateId> {
        let i = self.require(s)?;
        Ok(self.states[self.iterate_index(i, n)].clone())
    }

    /// Same states, step replaced by `step^dt`.
    pub fn subsample(&self, dt: u64) -> Result<Self> {
        if dt == 0 {
            return Err(Error::InvalidStride);
        }
        let step = (0..self.len()).map(|i| self.iterate_index(i, dt)).collect();
        Ok(FiniteDynSys::from_parts(self.states.clone(), step))
    }

    /// Indices of the forward-orbit closure of `seeds`, sorted.
    pub(crate) fn closure_indices(&self, seeds: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.len()];
        let mut stack: Vec<usize> = seeds.to_vec();
        while let Some(i) = stack.pop() {
            if !mark[i] {
                mark[i] = true;
                stack.push(self.step[i]);
            }
        }
        (0..self.len()).filter(|&i| mark[i]).collect()
    }

    /// Sub-system on the given step-closed index set.
    pub(crate) fn restrict_to(&self, keep: &[usize]) -> Self {
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &i) in keep.iter().enumerate() {
            new_index[i] = k;
        }
        let states = keep.iter().map(|&i| self.states[i].clone()).collect();
        let step = keep
            .iter()
            .map(|&i| {
                let j = new_index[self.step[i]];
                debug_assert_ne!(j, usize::MAX, "restriction set is not step-closed");
                j
            })
            .collect();
        FiniteDynSys::from_parts(states, step)
    }

    /// Smallest step-closed sub-system containing `seeds`, with its inclusion.
    pub fn reachable_restriction<'a, I>(&self, seeds: I) -> Result<(Self, DynMorphism)>
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        let seeds = seeds.into_iter().map(|s| self.require(s)).collect::<Result<Vec<_>>>()?;
        let keep = self.closure_indices(&seeds);
        let sub = self.restrict_to(&keep);
        let map = sub.states.iter().map(|s| (s.clone(), s.clone())).collect();
        let inclusion = DynMorphism::new(sub.clone(), self.clone(), map);
        Ok((sub, inclusion))
    }

    /// States with their in-degree, cycle length and distance to the cycle.
    pub(crate) fn state_profile(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &j in &self.step {
            indeg[j] += 1;
        }
        (0..n)
            .map(|i| {
                let mut pos = vec![usize::MAX; n];
                let mut cur = i;
                let mut t = 0;
                while pos[cur] == usize::MAX {
                    pos[cur] = t;
                    cur = self.step[cur];
                    t += 1;
                }
                let tail = pos[cur];
                let cycle = t - pos[cur];
                (indeg[i], cycle, tail)
            })
            .collect()
    }
}

/// A candidate semiconjugacy: a state map from `source` to `target`.
///
/// The map is stored as given; [`DynMorphism::check_semiconjugacy`] decides
/// whether it is total and commutes with the two steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynMorphism {
    pub source: FiniteDynSys,
    pub target: FiniteDynSys,
    pub map: BTreeMap<StateId, StateId>,
}

impl DynMorphism {
    pub fn new(source: FiniteDynSys, target: FiniteDynSys, map: BTreeMap<StateId, StateId>) -> Self {
        DynMorphism { source, target, map }
    }

    pub fn identity(sys: &FiniteDynSys) -> Self {
        let map = sys.states().iter().map(|s| (s.clone(), s.clone())).collect();
        DynMorphism::new(sys.clone(), sys.clone(), map)
    }

    /// The map as a table of target indices, one per source state.
    pub fn index_map(&self) -> Result<Vec<usize>> {
        self.source
            .states()
            .iter()
            .map(|s| {
                let t = self.map.get(s).ok_or_else(|| Error::MapNotTotal(s.to_string()))?;
                self.target.require(t)
            })
            .collect()
    }

    pub fn apply(&self, s: &StateId) -> Result<&StateId> {
        self.map.get(s).ok_or_else(|| Error::MapNotTotal(s.to_string()))
    }

    /// True iff `map ∘ step_source = step_target ∘ map` on every source state.
    pub fn check_semiconjugacy(&self) -> Result<bool> {
        let h = self.index_map()?;
        Ok(commutes(&self.source, &self.target, &h))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DynMorphism) -> Result<DynMorphism> {
        let mut map = BTreeMap::new();
        for s in self.source.states() {
            let mid = self.apply(s)?;
            map.insert(s.clone(), next.apply(mid)?.clone());
        }
        Ok(DynMorphism::new(self.source.clone(), next.target.clone(), map))
    }

    pub fn is_bijective(&self) -> Result<bool> {
        let h = self.index_map()?;
        let image: BTreeSet<usize> = h.iter().copied().collect();
        Ok(image.len() == h.len() && h.len() == self.target.len())
    }
}

/// Index-level semiconjugacy test.
pub(crate) fn commutes(src: &FiniteDynSys, tgt: &FiniteDynSys, h: &[usize]) -> bool {
    (0..src.len()).all(|i| h[src.step[i]] == tgt.step[h[i]])
}
