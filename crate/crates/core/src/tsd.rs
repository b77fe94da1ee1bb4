//! Timeseries data: towers of word sets closed under dropping an end symbol.
//!
//! Level `i` holds words of length `i + 1`. Levels are stored up to a finite
//! horizon, and any level may be empty.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::observe::ObservedSystem;
use crate::sbc::extend_blocks;
use crate::shift::SubshiftPresentation;
use crate::symbol::{Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSeriesData {
    alphabet: BTreeSet<Symbol>,
    levels: Vec<BTreeSet<Word>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// Level `i` words have length `i + 1`.
    Length,
    /// Symbols come from the alphabet.
    Alphabet,
    /// Dropping the first symbol lands in the level below.
    Start,
    /// Dropping the last symbol lands in the level below.
    Finish,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub level: usize,
    pub word: Word,
    pub axiom: Axiom,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.axiom {
            Axiom::Length => format!("has length {}, expected {}", self.word.len(), self.level + 1),
            Axiom::Alphabet => "uses a symbol outside the alphabet".to_string(),
            Axiom::Start => format!("start({}) is missing from level {}", self.word, self.level.saturating_sub(1)),
            Axiom::Finish => format!("finish({}) is missing from level {}", self.word, self.level.saturating_sub(1)),
        };
        write!(f, "level {}: word {} {what}", self.level, self.word)
    }
}

impl TimeSeriesData {
    /// `levels[i]` is level `i`; the horizon is `levels.len() - 1`. No axiom
    /// checking happens here, see [`TimeSeriesData::validate`].
    pub fn new(alphabet: BTreeSet<Symbol>, levels: Vec<BTreeSet<Word>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Format("timeseries data needs at least level 0".into()));
        }
        Ok(TimeSeriesData { alphabet, levels })
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[BTreeSet<Word>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> Option<&BTreeSet<Word>> {
        self.levels.get(i)
    }

    /// Largest index with a nonempty level.
    pub fn top_nonempty(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }

    pub fn truncate(&self, horizon: usize) -> TimeSeriesData {
        let keep = (horizon + 1).min(self.levels.len());
        TimeSeriesData { alphabet: self.alphabet.clone(), levels: self.levels[..keep].to_vec() }
    }

    /// All axiom violations; empty iff the data is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            for w in level {
                let v = |axiom| Violation { level: i, word: w.clone(), axiom };
                if w.len() != i + 1 {
                    out.push(v(Axiom::Length));
                    continue;
                }
                if w.symbols().iter().any(|s| !self.alphabet.contains(s)) {
                    out.push(v(Axiom::Alphabet));
                }
                if i == 0 {
                    continue;
                }
                let below = &self.levels[i - 1];
                if !below.contains(&w.start().unwrap()) {
                    out.push(v(Axiom::Start));
                }
                if !below.contains(&w.finish().unwrap()) {
                    out.push(v(Axiom::Finish));
                }
            }
        }
        out
    }

    /// Word sets of a presentation, levels `0..=horizon`.
    pub fn from_presentation(p: &SubshiftPresentation, horizon: usize) -> TimeSeriesData {
        TimeSeriesData { alphabet: p.alphabet().clone(), levels: p.words_up_to(horizon) }
    }

    /// All contiguous windows of one stream. The alphabet is the set of
    /// symbols that occur.
    pub fn from_sequence(s: &[Symbol], horizon: usize) -> TimeSeriesData {
        let levels = (0..=horizon).map(|i| s.windows(i + 1).map(Word::from_slice).collect()).collect();
        TimeSeriesData { alphabet: s.iter().cloned().collect(), levels }
    }

    /// Observe orbits at stride `dt`, collect their sequences, take words.
    pub fn from_observed(x: &ObservedSystem, dt: u64, horizon: usize) -> Result<TimeSeriesData> {
        Ok(Self::from_presentation(&x.generate_subshift(dt)?, horizon))
    }
}

/// The word functor on objects.
pub fn word_functor(p: &SubshiftPresentation, horizon: usize) -> TimeSeriesData {
    TimeSeriesData::from_presentation(p, horizon)
}

pub fn tsd_from_sequence(s: &[Symbol], horizon: usize) -> TimeSeriesData {
    TimeSeriesData::from_sequence(s, horizon)
}

/// Words of the subshift generated by `x` at stride `dt`.
pub fn data_functor(x: &ObservedSystem, dt: u64, horizon: usize) -> Result<TimeSeriesData> {
    TimeSeriesData::from_observed(x, dt, horizon)
}

/// A morphism of timeseries data with jump `k`, stored by its generator on
/// words of length `k + 1`. Level `n` of the morphism maps words of length
/// `n + k + 1` to words of length `n + 1` by sliding the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsdMorphism {
    jump: usize,
    gen: BTreeMap<Word, Symbol>,
}

impl TsdMorphism {
    pub fn new(jump: usize, gen: BTreeMap<Word, Symbol>) -> Result<Self> {
        if let Some(w) = gen.keys().find(|w| w.len() != jump + 1) {
            return Err(Error::LengthMismatch { expected: jump + 1, found: w.len() });
        }
        Ok(TsdMorphism { jump, gen })
    }

    /// Jump-0 morphism generated by a symbol map.
    pub fn relabel(map: &BTreeMap<Symbol, Symbol>) -> Self {
        TsdMorphism { jump: 0, gen: map.iter().map(|(a, b)| (Word::from(a.clone()), b.clone())).collect() }
    }

    pub fn identity(alphabet: &BTreeSet<Symbol>) -> Self {
        Self::relabel(&alphabet.iter().map(|s| (s.clone(), s.clone())).collect())
    }

    pub fn jump(&self) -> usize {
        self.jump
    }

    pub fn generator(&self) -> &BTreeMap<Word, Symbol> {
        &self.gen
    }

    /// Level-`n` component applied to `w` (length `n + jump + 1`).
    pub fn extend(&self, n: usize, w: &Word) -> Result<Word> {
        let expected = n + self.jump + 1;
        if w.len() != expected {
            return Err(Error::LengthMismatch { expected, found: w.len() });
        }
        let out = w
            .windows(self.jump + 1)
            .map(|b| self.gen.get(&b).cloned().ok_or_else(|| Error::UnknownWord(b.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_vec(out))
    }

    /// Every commutation or containment failure from `x` to `y`, on the levels
    /// both objects carry. Errors if the generator misses a word of `x`'s
    /// level `jump`.
    pub fn violations(&self, x: &TimeSeriesData, y: &TimeSeriesData) -> Result<Vec<String>> {
        if let Some(base) = x.level(self.jump) {
            if let Some(w) = base.iter().find(|w| !self.gen.contains_key(w)) {
                return Err(Error::UnknownWord(w.to_string()));
            }
        }
        let mut out = Vec::new();
        for n in 0..=y.horizon() {
            let Some(src) = x.level(n + self.jump) else { break };
            for w in src {
                let img = self.extend(n, w)?;
                if !y.levels[n].contains(&img) {
                    out.push(format!("level {n}: image {img} of {w} is not in the target"));
                }
                if n == 0 {
                    continue;
                }
                let (s, f) = (w.start().unwrap(), w.finish().unwrap());
                if self.extend(n - 1, &s)? != img.start().unwrap() {
                    out.push(format!("level {n}: start does not commute at {w}"));
                }
                if self.extend(n - 1, &f)? != img.finish().unwrap() {
                    out.push(format!("level {n}: finish does not commute at {w}"));
                }
            }
        }
        Ok(out)
    }

    pub fn check(&self, x: &TimeSeriesData, y: &TimeSeriesData) -> Result<bool> {
        Ok(self.violations(x, y)?.is_empty())
    }

    /// Apply `inner` then `outer`; jumps add.
    pub fn then(&self, outer: &TsdMorphism) -> Result<TsdMorphism> {
        compose_tsd_morphisms(outer, self)
    }
}

/// `outer ∘ inner`, generator on words of length `outer.jump + inner.jump + 1`.
/// Defined wherever both stages are.
pub fn compose_tsd_morphisms(outer: &TsdMorphism, inner: &TsdMorphism) -> Result<TsdMorphism> {
    let outer_symbols: BTreeSet<&Symbol> = outer.gen.keys().flat_map(|w| w.symbols()).collect();
    if let Some(s) = inner.gen.values().find(|s| !outer_symbols.contains(s)) {
        return Err(Error::AlphabetMismatch(format!("inner output {s} never occurs in the outer generator's domain")));
    }
    let mut gen = BTreeMap::new();
    for w in extend_blocks(inner.gen.keys().cloned().collect(), outer.jump) {
        let mid = inner.extend(outer.jump, &w)?;
        if let Some(out) = outer.gen.get(&mid) {
            gen.insert(w, out.clone());
        }
    }
    TsdMorphism::new(outer.jump + inner.jump, gen)
}

/// The identity-generated inclusion `x → y`, if every level of `x` is
/// contained in `y` on the common horizon.
pub fn tsd_inclusion(x: &TimeSeriesData, y: &TimeSeriesData) -> Result<Option<TsdMorphism>> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch("inclusion needs equal alphabets".into()));
    }
    let contained = x.levels.iter().zip(&y.levels).all(|(a, b)| a.is_subset(b));
    Ok(contained.then(|| TsdMorphism::identity(&x.alphabet)))
}
