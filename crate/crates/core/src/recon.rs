//! Reconstruction of dynamics from timeseries data.
//!
//! The order-`d` reconstruction is the de Bruijn graph of level `d`: one vertex
//! per observed word of length `d + 1`, an edge `w → w'` labelled by the first
//! symbol of `w` whenever `w` without its first symbol equals `w'` without its
//! last. Dead ends are pruned. If every remaining vertex has exactly one
//! successor, the graph is a deterministic system and is returned as one,
//! measured by the first symbol of each state's word.
//!
//! From fully observed data at order 1 this recovers the original system up to
//! conjugacy, which [`consistency_check`] verifies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::conjugacy::find_conjugacy;
use crate::dynsys::{DynMorphism, FiniteDynSys};
use crate::error::{Error, Result};
use crate::observe::{Measurement, ObservedSystem};
use crate::shift::{Edge, SubshiftPresentation};
use crate::symbol::{StateId, Symbol, VertexId, Word};
use crate::tsd::{data_functor, TimeSeriesData, TsdMorphism};

/// Why a reconstruction came out empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// The level used for reconstruction has no words.
    EmptyData,
    /// Every vertex was a dead end.
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconResult {
    pub order: usize,
    pub presentation: SubshiftPresentation,
    /// Present iff the pruned graph has exactly one successor per vertex.
    pub system: Option<ObservedSystem>,
    /// The observed word each surviving state stands for.
    pub state_words: BTreeMap<StateId, Word>,
    pub empty: Option<EmptyReason>,
}

impl ReconResult {
    pub fn is_deterministic(&self) -> bool {
        self.system.is_some()
    }

    pub fn state_of_word(&self, w: &Word) -> Option<&StateId> {
        self.state_words.iter().find(|(_, v)| *v == w).map(|(s, _)| s)
    }
}

/// De Bruijn reconstruction at `order` (default: highest nonempty level).
pub fn reconstruct(x: &TimeSeriesData, order: Option<usize>) -> Result<ReconResult> {
    let order = order.unwrap_or_else(|| x.top_nonempty().unwrap_or(0));
    if order > x.horizon() {
        return Err(Error::OrderTooLarge { order, horizon: x.horizon() });
    }
    let words: Vec<&Word> = x.levels()[order].iter().collect();
    let width = words.len().saturating_sub(1).to_string().len();
    let names: Vec<VertexId> =
        (0..words.len()).map(|i| VertexId::new(format!("w{i:0width$}"))).collect::<Result<_>>()?;

    let mut by_prefix: BTreeMap<&[Symbol], Vec<usize>> = BTreeMap::new();
    for (j, w) in words.iter().enumerate() {
        by_prefix.entry(&w.symbols()[..order]).or_default().push(j);
    }
    let mut edges = BTreeSet::new();
    for (i, w) in words.iter().enumerate() {
        for &j in by_prefix.get(&w.symbols()[1..]).into_iter().flatten() {
            edges.insert(Edge { from: names[i].clone(), to: names[j].clone(), label: w.first().clone() });
        }
    }
    let presentation = SubshiftPresentation::new(names.iter().cloned().collect(), x.alphabet().clone(), edges)?;

    let word_of: BTreeMap<&VertexId, &Word> = names.iter().zip(&words).map(|(n, &w)| (n, w)).collect();
    let state_words: BTreeMap<StateId, Word> = presentation
        .vertices()
        .iter()
        .map(|v| Ok((StateId::new(v.as_str())?, word_of[v].clone())))
        .collect::<Result<_>>()?;

    let mut succ: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
    for e in presentation.edges() {
        succ.entry(&e.from).or_default().push(&e.to);
    }
    let system = if succ.values().all(|s| s.len() == 1) {
        let step = succ
            .iter()
            .map(|(a, b)| Ok((StateId::new(a.as_str())?, StateId::new(b[0].as_str())?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let sys = FiniteDynSys::new(step)?;
        let phi = state_words.iter().map(|(s, w)| (s.clone(), w.first().clone())).collect();
        let meas = Measurement::new(x.alphabet().clone(), phi)?;
        let initial = sys.states().to_vec();
        Some(ObservedSystem::new(sys, meas, initial)?)
    } else {
        None
    };

    let empty = if words.is_empty() {
        Some(EmptyReason::EmptyData)
    } else if presentation.is_empty() {
        Some(EmptyReason::Pruned)
    } else {
        None
    };
    Ok(ReconResult { order, presentation, system, state_words, empty })
}

/// Outcome of reconstructing a fully observed system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub recon: ReconResult,
    /// Reconstructed state ↦ original state.
    pub bijection: Option<BTreeMap<StateId, StateId>>,
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.consistent { "PASS" } else { "FAIL" })?;
        match &self.bijection {
            Some(h) => {
                let pairs: Vec<String> = h.iter().map(|(s, t)| format!("{}->{t}", self.recon.state_words[s])).collect();
                write!(f, " [{}]", pairs.join(" "))
            }
            None if self.recon.system.is_none() => f.write_str(" (reconstruction not deterministic)"),
            None => f.write_str(" (no conjugacy)"),
        }
    }
}

/// Reconstruct `sys` from its own fully observed order-1 data and look for a
/// conjugacy back to it.
pub fn consistency_check(sys: &FiniteDynSys) -> Result<ConsistencyReport> {
    let data = data_functor(&ObservedSystem::identity_observation(sys), 1, 1)?;
    let recon = reconstruct(&data, Some(1))?;
    let bijection = recon.system.as_ref().and_then(|r| find_conjugacy(r.sys(), sys));
    Ok(ConsistencyReport { consistent: bijection.is_some(), recon, bijection })
}

/// Result of transporting a data morphism to reconstructed systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Induced {
    Present(DynMorphism),
    Absent(String),
}

impl Induced {
    pub fn morphism(&self) -> Option<&DynMorphism> {
        match self {
            Induced::Present(m) => Some(m),
            Induced::Absent(_) => None,
        }
    }
}

/// Map each state word of `x`'s reconstruction through `m` and look the image
/// up among `y`'s state words.
pub fn induced_recon_morphism(
    m: &TsdMorphism,
    x: &TimeSeriesData,
    y: &TimeSeriesData,
    order: usize,
) -> Result<Induced> {
    if m.jump() != 0 {
        return Err(Error::InvalidTsdMorphism(format!("jump {} morphism; reduce it to jump 0 first", m.jump())));
    }
    let rx = reconstruct(x, Some(order))?;
    let ry = reconstruct(y, Some(order))?;
    let (Some(sx), Some(sy)) = (&rx.system, &ry.system) else {
        let side = if rx.system.is_none() { "source" } else { "target" };
        return Err(Error::NondeterministicReconstruction(format!("{side} at order {order}")));
    };
    let mut map = BTreeMap::new();
    for (s, w) in &rx.state_words {
        let img = match m.extend(order, w) {
            Ok(img) => img,
            Err(e) => return Ok(Induced::Absent(format!("state {s} ({w}): {e}"))),
        };
        match ry.state_of_word(&img) {
            Some(t) => {
                map.insert(s.clone(), t.clone());
            }
            None => {
                return Ok(Induced::Absent(format!(
                    "image {img} of state {s} ({w}) is not a state of the target reconstruction"
                )))
            }
        }
    }
    let dm = DynMorphism::new(sx.sys().clone(), sy.sys().clone(), map);
    if !dm.check_semiconjugacy()? {
        return Ok(Induced::Absent("induced state map does not commute with the steps".into()));
    }
    Ok(Induced::Present(dm))
}

/// For a jump-0 morphism from the order-1 data of `src` into the fully
/// observed data of `tgt_sys`, the state map `s ↦ gen(φ(s))` on the orbit
/// system of `src` is a semiconjugacy into `tgt_sys`.
pub fn semiconjugacy_from_tsd_morphism(
    m: &TsdMorphism,
    src: &ObservedSystem,
    tgt_sys: &FiniteDynSys,
    dt: u64,
) -> Result<DynMorphism> {
    if m.jump() != 0 {
        return Err(Error::InvalidTsdMorphism(format!("jump is {}, expected 0", m.jump())));
    }
    let x = data_functor(src, dt, 1)?;
    let y = data_functor(&ObservedSystem::identity_observation(tgt_sys), 1, 1)?;
    let violations = m.violations(&x, &y).map_err(|e| Error::InvalidTsdMorphism(e.to_string()))?;
    if !violations.is_empty() {
        return Err(Error::InvalidTsdMorphism(violations.join("; ")));
    }
    let orbit = src.orbit_system(dt)?;
    let mut map = BTreeMap::new();
    for s in orbit.sys().states() {
        let y0 = &orbit.meas().phi[s];
        let img = m
            .generator()
            .get(&Word::from(y0.clone()))
            .and_then(Symbol::to_state)
            .ok_or_else(|| Error::InvalidTsdMorphism(format!("no target state for {y0}")))?;
        map.insert(s.clone(), img);
    }
    let h = DynMorphism::new(orbit.sys().clone(), tgt_sys.clone(), map);
    if !h.check_semiconjugacy()? {
        return Err(Error::InvalidTsdMorphism("extracted map is not a semiconjugacy".into()));
    }
    Ok(h)
}

/// Trade a jump-`k` morphism out of `data(src, dt, horizon)` for a jump-0
/// morphism out of the data of the `(k+1)`-delay embedding of `src`, whose
/// level `n` corresponds to the original level `n + k`.
pub fn jump_reduction(m: &TsdMorphism, src: &ObservedSystem, dt: u64, horizon: usize) -> Result<TsdMorphism> {
    let k = m.jump();
    if k == 0 {
        return Err(Error::NothingToReduce);
    }
    if horizon < k {
        return Err(Error::InvalidTsdMorphism(format!("horizon {horizon} is below jump {k}")));
    }
    let embedded = src.delay_embed(k + 1, dt)?;
    let tuples = data_functor(&embedded, dt, 0)?;
    let mut gen = BTreeMap::new();
    for t in &tuples.levels()[0] {
        let coords = t.first().coords().expect("delay embedding yields tuples");
        let window = Word::from_slice(coords);
        let out = m.generator().get(&window).ok_or_else(|| Error::UnknownWord(window.to_string()))?;
        gen.insert(t.clone(), out.clone());
    }
    TsdMorphism::new(0, gen)
}

/// Source data of the reduced morphism from [`jump_reduction`].
pub fn jump_reduction_source(src: &ObservedSystem, k: usize, dt: u64, horizon: usize) -> Result<TimeSeriesData> {
    if horizon < k {
        return Err(Error::InvalidTsdMorphism(format!("horizon {horizon} is below jump {k}")));
    }
    data_functor(&src.delay_embed(k + 1, dt)?, dt, horizon - k)
}

/// Collapse a word of overlapping delay tuples back to the plain word it
/// encodes: first coordinates, then the tail of the last tuple.
pub fn flatten_delay_word(w: &Word) -> Option<Word> {
    let mut out: Vec<Symbol> = Vec::new();
    for t in w.symbols() {
        out.push(t.coords()?.first()?.clone());
    }
    out.extend_from_slice(&w.last().coords()?[1..]);
    Some(Word::from_vec(out))
}
