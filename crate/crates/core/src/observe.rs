//! Measured systems with initial points, and the sequences they generate.

use std::collections::{BTreeMap, BTreeSet};

use crate::dynsys::{DynMorphism, FiniteDynSys};
use crate::error::{Error, Result};
use crate::shift::{Edge, SubshiftPresentation};
use crate::symbol::{StateId, Symbol, VertexId};

/// A total map from states into a finite alphabet. Unused symbols are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    pub alphabet: BTreeSet<Symbol>,
    pub phi: BTreeMap<StateId, Symbol>,
}

impl Measurement {
    pub fn new(alphabet: BTreeSet<Symbol>, phi: BTreeMap<StateId, Symbol>) -> Result<Self> {
        if let Some((s, y)) = phi.iter().find(|(_, y)| !alphabet.contains(y)) {
            return Err(Error::AlphabetMismatch(format!("phi({s}) = {y} is not in the alphabet")));
        }
        Ok(Measurement { alphabet, phi })
    }

    pub fn domain(&self) -> impl Iterator<Item = &StateId> {
        self.phi.keys()
    }

    pub fn measure(&self, s: &StateId) -> Result<&Symbol> {
        self.phi.get(s).ok_or_else(|| Error::StateNotFound(s.to_string()))
    }
}

/// A system, a measurement of its states and an ordered list of initial points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedSystem {
    sys: FiniteDynSys,
    meas: Measurement,
    initial: Vec<StateId>,
}

impl ObservedSystem {
    /// Validating constructor. Duplicate initial points are dropped, keeping
    /// first occurrences in order.
    pub fn new(sys: FiniteDynSys, meas: Measurement, initial: Vec<StateId>) -> Result<Self> {
        if let Some(s) = sys.states().iter().find(|s| !meas.phi.contains_key(s)) {
            return Err(Error::DomainMismatch(format!("state {s} has no measurement")));
        }
        if let Some(s) = meas.domain().find(|s| !sys.contains(s)) {
            return Err(Error::DomainMismatch(format!("{s} is measured but is not a state")));
        }
        let mut seen = BTreeSet::new();
        let mut dedup = Vec::with_capacity(initial.len());
        for s in initial {
            sys.require(&s)?;
            if seen.insert(s.clone()) {
                dedup.push(s);
            }
        }
        Ok(ObservedSystem { sys, meas, initial: dedup })
    }

    /// Measurement is the identity (each state read as the symbol of the same
    /// name); every state is an initial point, in sorted order.
    pub fn identity_observation(sys: &FiniteDynSys) -> Self {
        let phi: BTreeMap<_, _> = sys.states().iter().map(|s| (s.clone(), s.to_symbol())).collect();
        let alphabet = phi.values().cloned().collect();
        ObservedSystem { sys: sys.clone(), meas: Measurement { alphabet, phi }, initial: sys.states().to_vec() }
    }

    pub fn sys(&self) -> &FiniteDynSys {
        &self.sys
    }

    pub fn meas(&self) -> &Measurement {
        &self.meas
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.meas.alphabet
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    /// `[φ(s), φ(step^dt s), …]`, `len` symbols.
    pub fn observe_orbit(&self, s: &StateId, len: usize, dt: u64) -> Result<Vec<Symbol>> {
        if dt == 0 {
            return Err(Error::InvalidStride);
        }
        let mut i = self.sys.require(s)?;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.meas.phi[&self.sys.states()[i]].clone());
            i = self.sys.iterate_index(i, dt);
        }
        Ok(out)
    }

    fn orbit_indices(&self, dt: u64) -> Result<(FiniteDynSys, Vec<usize>)> {
        let strided = self.sys.subsample(dt)?;
        let seeds: Vec<usize> =
            self.initial.iter().map(|s| strided.index_of(s).expect("validated initial point")).collect();
        let keep = strided.closure_indices(&seeds);
        Ok((strided, keep))
    }

    /// Presentation of every shifted observation sequence of every initial
    /// point at stride `dt`: one vertex per state of the orbit closure, one
    /// edge `v → step^dt(v)` labelled `φ(v)`.
    pub fn generate_subshift(&self, dt: u64) -> Result<SubshiftPresentation> {
        let (strided, keep) = self.orbit_indices(dt)?;
        let states = strided.states();
        let vertices = keep.iter().map(|&i| VertexId::from(&states[i])).collect();
        let edges = keep
            .iter()
            .map(|&i| Edge {
                from: VertexId::from(&states[i]),
                to: VertexId::from(&states[strided.step_indices()[i]]),
                label: self.meas.phi[&states[i]].clone(),
            })
            .collect();
        SubshiftPresentation::new(vertices, self.meas.alphabet.clone(), edges)
    }

    /// The `dt`-subsampled system restricted to the forward closure of the
    /// initial points. The alphabet is kept whole.
    pub fn orbit_system(&self, dt: u64) -> Result<ObservedSystem> {
        let (strided, keep) = self.orbit_indices(dt)?;
        let sys = strided.restrict_to(&keep);
        let phi = sys.states().iter().map(|s| (s.clone(), self.meas.phi[s].clone())).collect();
        Ok(ObservedSystem {
            sys,
            meas: Measurement { alphabet: self.meas.alphabet.clone(), phi },
            initial: self.initial.clone(),
        })
    }

    /// Replace φ by `s ↦ (φ(s), φ(step^dt s), …, φ(step^{(k-1)dt} s))`. The new
    /// alphabet holds only the tuples that occur.
    pub fn delay_embed(&self, k: usize, dt: u64) -> Result<ObservedSystem> {
        if k == 0 {
            return Err(Error::InvalidWindow);
        }
        let mut phi = BTreeMap::new();
        for s in self.sys.states() {
            phi.insert(s.clone(), Symbol::Tuple(self.observe_orbit(s, k, dt)?));
        }
        let alphabet = phi.values().cloned().collect();
        Ok(ObservedSystem { sys: self.sys.clone(), meas: Measurement { alphabet, phi }, initial: self.initial.clone() })
    }
}

/// A candidate morphism of observed systems: a state map and an alphabet map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsMorphism {
    pub h: BTreeMap<StateId, StateId>,
    pub a: BTreeMap<Symbol, Symbol>,
}

impl ObsMorphism {
    pub fn identity(x: &ObservedSystem) -> Self {
        ObsMorphism {
            h: x.sys.states().iter().map(|s| (s.clone(), s.clone())).collect(),
            a: x.alphabet().iter().map(|y| (y.clone(), y.clone())).collect(),
        }
    }

    /// Every reason the pair fails to be a morphism `x → y`; empty iff valid.
    pub fn violations(&self, x: &ObservedSystem, y: &ObservedSystem) -> Result<Vec<String>> {
        if let Some(y0) = x.alphabet().iter().find(|s| !self.a.contains_key(s)) {
            return Err(Error::MapNotTotal(y0.to_string()));
        }
        let dm = DynMorphism::new(x.sys.clone(), y.sys.clone(), self.h.clone());
        let mut out = Vec::new();
        if !dm.check_semiconjugacy()? {
            out.push("state map does not commute with the steps".to_string());
        }
        for s in x.sys.states() {
            let lhs = &self.a[&x.meas.phi[s]];
            let rhs = y.meas.measure(&self.h[s])?;
            if lhs != rhs {
                out.push(format!("measurement square fails at {s}: A(phi(s)) = {lhs}, phi'(h(s)) = {rhs}"));
            }
        }
        let targets: BTreeSet<&StateId> = y.initial.iter().collect();
        for s in &x.initial {
            if !targets.contains(&self.h[s]) {
                out.push(format!("initial point {s} maps to {}, not an initial point of the target", self.h[s]));
            }
        }
        Ok(out)
    }

    /// Semiconjugacy, measurement square and initial-point containment.
    pub fn check(&self, x: &ObservedSystem, y: &ObservedSystem) -> Result<bool> {
        Ok(self.violations(x, y)?.is_empty())
    }
}
