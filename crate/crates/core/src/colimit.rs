//! Colimits of finite diagrams of dynamical systems.
//!
//! Computed pointwise: quotient the disjoint union of the node state sets by
//! the equivalence generated by `x ~ arrow(x)`, then read the step off any
//! representative.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use crate::dynsys::{commutes, DynMorphism, FiniteDynSys};
use crate::error::{Error, Result};
use crate::symbol::StateId;

/// One arrow of a diagram: a state map from node `from` to node `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramArrow {
    pub from: usize,
    pub to: usize,
    pub map: BTreeMap<StateId, StateId>,
}

/// A finite diagram of systems and semiconjugacies.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DynDiagram {
    pub nodes: Vec<FiniteDynSys>,
    pub arrows: Vec<DiagramArrow>,
}

/// A colimit object together with its cocone, one leg per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    pub system: FiniteDynSys,
    pub legs: Vec<DynMorphism>,
}

impl DynDiagram {
    pub fn new(nodes: Vec<FiniteDynSys>, arrows: Vec<DiagramArrow>) -> Result<Self> {
        let d = DynDiagram { nodes, arrows };
        d.validate()?;
        Ok(d)
    }

    /// The arrow as a morphism between its nodes.
    pub fn arrow_morphism(&self, k: usize) -> Result<DynMorphism> {
        let a = &self.arrows[k];
        let node = |i: usize| {
            self.nodes.get(i).cloned().ok_or_else(|| Error::InvalidDiagram(format!("arrow {k} names missing node {i}")))
        };
        Ok(DynMorphism::new(node(a.from)?, node(a.to)?, a.map.clone()))
    }

    /// Every arrow must be a total semiconjugacy between the nodes it names.
    pub fn validate(&self) -> Result<()> {
        for k in 0..self.arrows.len() {
            let m = self.arrow_morphism(k)?;
            if m.map.keys().any(|s| !m.source.contains(s)) {
                return Err(Error::InvalidDiagram(format!(
                    "arrow {k} maps states outside node {}",
                    self.arrows[k].from
                )));
            }
            let ok = m.check_semiconjugacy().map_err(|e| Error::InvalidDiagram(format!("arrow {k}: {e}")))?;
            if !ok {
                return Err(Error::InvalidDiagram(format!(
                    "arrow {k} ({} -> {}) is not a semiconjugacy",
                    self.arrows[k].from, self.arrows[k].to
                )));
            }
        }
        Ok(())
    }

    pub fn colimit(&self) -> Result<Colimit> {
        self.validate()?;
        let offsets: Vec<usize> = self
            .nodes
            .iter()
            .scan(0, |acc, n| {
                let o = *acc;
                *acc += n.len();
                Some(o)
            })
            .collect();
        let total: usize = self.nodes.iter().map(FiniteDynSys::len).sum();
        let owner: Vec<(usize, usize)> =
            self.nodes.iter().enumerate().flat_map(|(k, n)| (0..n.len()).map(move |i| (k, i))).collect();

        let mut uf = UnionFind::<usize>::new(total);
        for k in 0..self.arrows.len() {
            let a = &self.arrows[k];
            let h = self.arrow_morphism(k)?.index_map()?;
            for (i, &j) in h.iter().enumerate() {
                uf.union(offsets[a.from] + i, offsets[a.to] + j);
            }
        }
        let labels = uf.into_labeling();

        // Members of each class, in (node, id) order.
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, &root) in labels.iter().enumerate() {
            classes.entry(root).or_default().push(x);
        }
        let mut names: BTreeMap<usize, StateId> = BTreeMap::new();
        for (&root, members) in &classes {
            let mut parts: Vec<(usize, &StateId)> = members
                .iter()
                .map(|&x| {
                    let (k, i) = owner[x];
                    (k, &self.nodes[k].states()[i])
                })
                .collect();
            parts.sort();
            let body: Vec<String> = parts.iter().map(|(k, s)| format!("{k}:{s}")).collect();
            names.insert(root, StateId::new(format!("{{{}}}", body.join("|")))?);
        }

        let global_step = |x: usize| {
            let (k, i) = owner[x];
            offsets[k] + self.nodes[k].step_indices()[i]
        };
        let mut step = BTreeMap::new();
        for (&root, members) in &classes {
            let next = labels[global_step(members[0])];
            if let Some(&bad) = members.iter().find(|&&x| labels[global_step(x)] != next) {
                let (k, i) = owner[bad];
                return Err(Error::InvalidDiagram(format!(
                    "induced step is not well defined at {k}:{}",
                    self.nodes[k].states()[i]
                )));
            }
            step.insert(names[&root].clone(), names[&next].clone());
        }
        let system = FiniteDynSys::new(step)?;

        let legs = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let map = n
                    .states()
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), names[&labels[offsets[k] + i]].clone()))
                    .collect();
                DynMorphism::new(n.clone(), system.clone(), map)
            })
            .collect();
        Ok(Colimit { system, legs })
    }
}

impl Colimit {
    /// The unique map out of the colimit that factors a competing cocone,
    /// or `None` if the cocone legs disagree on some identified pair.
    /// Each cocone leg must start at the matching diagram node.
    pub fn mediate(&self, cocone: &[DynMorphism]) -> Result<Option<DynMorphism>> {
        if cocone.len() != self.legs.len() {
            return Err(Error::InvalidDiagram(format!(
                "cocone has {} legs, diagram has {} nodes",
                cocone.len(),
                self.legs.len()
            )));
        }
        let Some(target) = cocone.first().map(|c| c.target.clone()) else {
            // empty diagram: the colimit is empty and maps uniquely anywhere
            return Ok(Some(DynMorphism::new(self.system.clone(), FiniteDynSys::empty(), BTreeMap::new())));
        };
        let mut map: BTreeMap<StateId, StateId> = BTreeMap::new();
        for (leg, c) in self.legs.iter().zip(cocone) {
            for s in leg.source.states() {
                let q = leg.apply(s)?;
                let z = c.apply(s)?;
                match map.get(q) {
                    Some(prev) if prev != z => return Ok(None),
                    Some(_) => {}
                    None => {
                        map.insert(q.clone(), z.clone());
                    }
                }
            }
        }
        let m = DynMorphism::new(self.system.clone(), target, map);
        let h = m.index_map()?;
        Ok(commutes(&m.source, &m.target, &h).then_some(m))
    }
}
