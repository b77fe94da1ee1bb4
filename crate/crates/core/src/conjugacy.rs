//! Exact conjugacy search between small systems.

use std::collections::BTreeMap;

use crate::dynsys::FiniteDynSys;
use crate::symbol::StateId;

/// Find a bijection `h` with `h ∘ step_a = step_b ∘ h`.
///
/// Backtracking over candidate images, pruned by each state's in-degree,
/// cycle length and distance to its cycle; an assignment forces the whole
/// forward orbit, which is propagated before branching again. Exact, and fast
/// enough for a dozen or so states.
pub fn find_conjugacy(a: &FiniteDynSys, b: &FiniteDynSys) -> Option<BTreeMap<StateId, StateId>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let pa = a.state_profile();
    let pb = b.state_profile();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }

    let mut search = Search {
        a: a.step_indices(),
        b: b.step_indices(),
        pa: &pa,
        pb: &pb,
        h: vec![usize::MAX; n],
        used: vec![false; n],
        trail: Vec::new(),
    };
    if !search.solve(0) {
        return None;
    }
    Some((0..n).map(|i| (a.states()[i].clone(), b.states()[search.h[i]].clone())).collect())
}

struct Search<'a> {
    a: &'a [usize],
    b: &'a [usize],
    pa: &'a [(usize, usize, usize)],
    pb: &'a [(usize, usize, usize)],
    h: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl Search<'_> {
    fn solve(&mut self, from: usize) -> bool {
        let Some(i) = (from..self.h.len()).find(|&i| self.h[i] == usize::MAX) else {
            return true;
        };
        for j in 0..self.h.len() {
            if self.used[j] || self.pa[i] != self.pb[j] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(i, j) && self.solve(i + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    /// Assign `i ↦ j` and everything it forces along the forward orbit.
    fn assign(&mut self, mut i: usize, mut j: usize) -> bool {
        loop {
            if self.h[i] != usize::MAX {
                return self.h[i] == j;
            }
            if self.used[j] || self.pa[i] != self.pb[j] {
                return false;
            }
            self.h[i] = j;
            self.used[j] = true;
            self.trail.push(i);
            i = self.a[i];
            j = self.b[j];
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.used[self.h[i]] = false;
            self.h[i] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::DynMorphism;
    use proptest::prelude::*;

    fn is_conjugacy(a: &FiniteDynSys, b: &FiniteDynSys, h: &BTreeMap<StateId, StateId>) -> bool {
        let fwd = DynMorphism::new(a.clone(), b.clone(), h.clone());
        let inv: BTreeMap<_, _> = h.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let back = DynMorphism::new(b.clone(), a.clone(), inv);
        fwd.is_bijective().unwrap() && fwd.check_semiconjugacy().unwrap() && back.check_semiconjugacy().unwrap()
    }

    #[test]
    fn self_conjugacy_is_identity() {
        let t = FiniteDynSys::from_pairs([("a", "b"), ("b", "c"), ("c", "c"), ("d", "c")]).unwrap();
        let h = find_conjugacy(&t, &t).unwrap();
        // profiles single out every state here, so the identity is forced
        assert!(h.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn relabelled_cycles_are_conjugate() {
        let a = FiniteDynSys::cycle(3);
        let b = FiniteDynSys::from_pairs([("x", "z"), ("z", "y"), ("y", "x")]).unwrap();
        let h = find_conjugacy(&a, &b).unwrap();
        assert!(is_conjugacy(&a, &b, &h));
    }

    #[test]
    fn cycle_vs_fixed_point_plus_two_cycle() {
        let a = FiniteDynSys::cycle(3);
        let b = FiniteDynSys::from_pairs([("p", "p"), ("q", "r"), ("r", "q")]).unwrap();
        assert!(find_conjugacy(&a, &b).is_none());
        // exhaust the six bijections independently
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            let h: BTreeMap<_, _> = (0..3).map(|i| (a.states()[i].clone(), b.states()[p[i]].clone())).collect();
            assert!(!is_conjugacy(&a, &b, &h));
        }
    }

    #[test]
    fn size_mismatch_and_empty() {
        assert!(find_conjugacy(&FiniteDynSys::cycle(2), &FiniteDynSys::cycle(3)).is_none());
        let e = FiniteDynSys::empty();
        assert_eq!(find_conjugacy(&e, &e), Some(BTreeMap::new()));
    }

    #[test]
    fn same_profiles_different_wiring() {
        // Two fixed points with in-degrees 3 and 2; the length-2 chain hangs
        // under the first in `a` and under the second in `b`.
        let a =
            FiniteDynSys::from_pairs([("f", "f"), ("g", "g"), ("a", "f"), ("b", "a"), ("c", "f"), ("d", "g")]).unwrap();
        let b =
            FiniteDynSys::from_pairs([("f", "f"), ("g", "g"), ("a", "f"), ("c", "f"), ("d", "g"), ("b", "d")]).unwrap();
        let (mut pa, mut pb) = (a.state_profile(), b.state_profile());
        pa.sort();
        pb.sort();
        assert_eq!(pa, pb);
        assert!(find_conjugacy(&a, &b).is_none());
    }

    fn arb_perm_pair() -> impl Strategy<Value = (FiniteDynSys, FiniteDynSys)> {
        (1usize..10).prop_flat_map(|n| {
            (prop::collection::vec(0..n, n), Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(
                move |(table, perm)| {
                    let a =
                        FiniteDynSys::from_pairs((0..n).map(|i| (format!("a{i}"), format!("a{}", table[i])))).unwrap();
                    // b is a relabelled copy of a: b_{perm i} -> b_{perm table i}
                    let b = FiniteDynSys::from_pairs(
                        (0..n).map(|i| (format!("b{}", perm[i]), format!("b{}", perm[table[i]]))),
                    )
                    .unwrap();
                    (a, b)
                },
            )
        })
    }

    proptest! {
        #[test]
        fn relabelled_copies_are_found((a, b) in arb_perm_pair()) {
            let h = find_conjugacy(&a, &b);
            prop_assert!(h.is_some());
            prop_assert!(is_conjugacy(&a, &b, &h.unwrap()));
        }
    }
}
