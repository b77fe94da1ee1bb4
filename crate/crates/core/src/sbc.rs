//! Sliding block codes: shift-commuting maps given by a generator on blocks.
//!
//! A code of window `n` reads `n + 1` consecutive symbols and writes one.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::shift::{Edge, SubshiftPresentation};
use crate::symbol::{Symbol, VertexId, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlidingBlockCode {
    window: usize,
    source_alphabet: BTreeSet<Symbol>,
    target_alphabet: BTreeSet<Symbol>,
    gen: BTreeMap<Word, Symbol>,
}

impl SlidingBlockCode {
    pub fn new(
        window: usize,
        source_alphabet: BTreeSet<Symbol>,
        target_alphabet: BTreeSet<Symbol>,
        gen: BTreeMap<Word, Symbol>,
    ) -> Result<Self> {
        for (w, out) in &gen {
            if w.len() != window + 1 {
                return Err(Error::LengthMismatch { expected: window + 1, found: w.len() });
            }
            if let Some(s) = w.symbols().iter().find(|s| !source_alphabet.contains(s)) {
                return Err(Error::AlphabetMismatch(format!("{s} (in {w}) is not a source symbol")));
            }
            if !target_alphabet.contains(out) {
                return Err(Error::AlphabetMismatch(format!("{out} is not a target symbol")));
            }
        }
        Ok(SlidingBlockCode { window, source_alphabet, target_alphabet, gen })
    }

    /// Generator defined on every block over the source alphabet.
    pub fn from_fn<F>(
        window: usize,
        source_alphabet: BTreeSet<Symbol>,
        target_alphabet: BTreeSet<Symbol>,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(&[Symbol]) -> Symbol,
    {
        let gen = all_blocks(&source_alphabet, window + 1)
            .into_iter()
            .map(|w| {
                let out = f(w.symbols());
                (w, out)
            })
            .collect();
        Self::new(window, source_alphabet, target_alphabet, gen)
    }

    pub fn identity(alphabet: BTreeSet<Symbol>) -> Self {
        Self::from_fn(0, alphabet.clone(), alphabet, |w| w[0].clone()).expect("identity is well formed")
    }

    /// The left shift as a window-1 code: `x₀x₁ ↦ x₁`.
    pub fn shift(alphabet: BTreeSet<Symbol>) -> Self {
        Self::from_fn(1, alphabet.clone(), alphabet, |w| w[1].clone()).expect("shift is well formed")
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn source_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.source_alphabet
    }

    pub fn target_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.target_alphabet
    }

    pub fn generator(&self) -> &BTreeMap<Word, Symbol> {
        &self.gen
    }

    fn gen_at(&self, block: &[Symbol]) -> Result<&Symbol> {
        // BTreeMap<Word, _> lookups need an owned Word
        let w = Word::from_slice(block);
        self.gen.get(&w).ok_or_else(|| Error::UnknownWord(w.to_string()))
    }

    /// `out_j = gen(s_j … s_{j+window})`; output is `window` symbols shorter.
    pub fn apply(&self, s: &[Symbol]) -> Result<Vec<Symbol>> {
        if s.len() < self.window + 1 {
            return Err(Error::SequenceTooShort { len: s.len(), window: self.window });
        }
        s.windows(self.window + 1).map(|b| self.gen_at(b).cloned()).collect()
    }

    /// Induced map from words of length `m + window + 1` to words of length `m + 1`.
    pub fn induced_word_map(&self, m: usize, input: &Word) -> Result<Word> {
        let expected = m + self.window + 1;
        if input.len() != expected {
            return Err(Error::LengthMismatch { expected, found: input.len() });
        }
        Ok(Word::from_vec(self.apply(input.symbols())?))
    }

    /// `true` iff, for every `m ≤ depth`, the induced map sends
    /// `words(src, m + window)` into `words(tgt, m)`.
    pub fn is_valid(&self, src: &SubshiftPresentation, tgt: &SubshiftPresentation, depth: usize) -> Result<bool> {
        let from = src.words_up_to(depth + self.window);
        let into = tgt.words_up_to(depth);
        for m in 0..=depth {
            for w in &from[m + self.window] {
                if !into[m].contains(&self.induced_word_map(m, w)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Presentation of the image subshift (higher-block construction): vertices
    /// are paths of `window` edges in `src`, edges are paths of `window + 1`
    /// edges, labelled by the generator.
    pub fn image_presentation(&self, src: &SubshiftPresentation) -> Result<SubshiftPresentation> {
        let edge_list: Vec<&Edge> = src.edges().iter().collect();
        // paths of `window + 1` edges, as edge-index lists
        let mut out_of: BTreeMap<&VertexId, Vec<usize>> = BTreeMap::new();
        for (k, e) in edge_list.iter().enumerate() {
            out_of.entry(&e.from).or_default().push(k);
        }
        let mut paths: Vec<Vec<usize>> = (0..edge_list.len()).map(|k| vec![k]).collect();
        for _ in 0..self.window {
            paths = paths
                .into_iter()
                .flat_map(|p| {
                    let end = &edge_list[*p.last().unwrap()].to;
                    out_of
                        .get(end)
                        .into_iter()
                        .flatten()
                        .map(move |&k| {
                            let mut q = p.clone();
                            q.push(k);
                            q
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }

        let node = |ks: &[usize], tail: bool| -> Result<VertexId> {
            if self.window == 0 {
                let e = edge_list[ks[0]];
                return Ok(if tail { e.to.clone() } else { e.from.clone() });
            }
            let ks = if tail { &ks[1..] } else { &ks[..ks.len() - 1] };
            let name: Vec<String> = ks.iter().map(|k| format!("e{k}")).collect();
            VertexId::new(name.join("."))
        };

        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for p in &paths {
            let labels: Vec<Symbol> = p.iter().map(|&k| edge_list[k].label.clone()).collect();
            let from = node(p, false)?;
            let to = node(p, true)?;
            vertices.insert(from.clone());
            vertices.insert(to.clone());
            edges.insert(Edge { from, to, label: self.gen_at(&labels)?.clone() });
        }
        SubshiftPresentation::new(vertices, self.target_alphabet.clone(), edges)
    }
}

/// Composite code: apply `inner`, then `outer`. Window is the sum of windows.
///
/// The generator is defined on every block all of whose inner windows are in
/// `inner`'s domain and whose inner image lies in `outer`'s domain.
pub fn compose_sbc(outer: &SlidingBlockCode, inner: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    if !inner.target_alphabet.is_subset(&outer.source_alphabet) {
        return Err(Error::AlphabetMismatch(format!(
            "inner target alphabet {:?} is not contained in outer source alphabet {:?}",
            names(&inner.target_alphabet),
            names(&outer.source_alphabet)
        )));
    }
    let window = outer.window + inner.window;
    let blocks = extend_blocks(inner.gen.keys().cloned().collect(), outer.window);
    let mut gen = BTreeMap::new();
    for b in blocks {
        let mid = inner.apply(b.symbols())?;
        if let Some(out) = outer.gen.get(&Word::from_vec(mid)) {
            gen.insert(b, out.clone());
        }
    }
    SlidingBlockCode::new(window, inner.source_alphabet.clone(), outer.target_alphabet.clone(), gen)
}

/// Blocks obtained by gluing `extra` more base blocks with maximal overlap:
/// every window of the result is one of `base`.
pub(crate) fn extend_blocks(base: BTreeSet<Word>, extra: usize) -> BTreeSet<Word> {
    let Some(first) = base.iter().next() else {
        return BTreeSet::new();
    };
    let k = first.len();
    let mut by_prefix: BTreeMap<&[Symbol], Vec<&Symbol>> = BTreeMap::new();
    for w in &base {
        by_prefix.entry(&w.symbols()[..k - 1]).or_default().push(w.last());
    }
    let mut cur = base.clone();
    for _ in 0..extra {
        let mut next = BTreeSet::new();
        for w in &cur {
            let s = w.symbols();
            if let Some(lasts) = by_prefix.get(&s[s.len() - (k - 1)..]) {
                for &l in lasts {
                    let mut v = s.to_vec();
                    v.push(l.clone());
                    next.insert(Word::from_vec(v));
                }
            }
        }
        cur = next;
    }
    cur
}

/// Every word of length `len ≥ 1` over `alphabet`.
pub(crate) fn all_blocks(alphabet: &BTreeSet<Symbol>, len: usize) -> Vec<Word> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |s| {
                    let mut v = w.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().filter(|w| !w.is_empty()).map(Word::from_vec).collect()
}

fn names(a: &BTreeSet<Symbol>) -> Vec<String> {
    a.iter().map(Symbol::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::sym;
    use proptest::prelude::*;

    fn bin() -> BTreeSet<Symbol> {
        [sym("0"), sym("1")].into()
    }

    fn seq(s: &str) -> Vec<Symbol> {
        Word::from_chars(s).unwrap().into_symbols()
    }

    fn xor() -> SlidingBlockCode {
        SlidingBlockCode::from_fn(1, bin(), bin(), |w| if w[0] == w[1] { sym("0") } else { sym("1") }).unwrap()
    }

    #[test]
    fn apply_examples() {
        let abc: BTreeSet<Symbol> = [sym("a"), sym("b"), sym("c")].into();
        assert_eq!(SlidingBlockCode::identity(abc).apply(&seq("abc")).unwrap(), seq("abc"));
        assert_eq!(SlidingBlockCode::shift(bin()).apply(&seq("0110")).unwrap(), seq("110"));
        assert_eq!(xor().apply(&seq("0110")).unwrap(), seq("101"));
    }

    #[test]
    fn apply_errors() {
        assert_eq!(xor().apply(&seq("0")), Err(Error::SequenceTooShort { len: 1, window: 1 }));
        let partial =
            SlidingBlockCode::new(0, bin(), bin(), [(Word::from_chars("0").unwrap(), sym("1"))].into()).unwrap();
        assert_eq!(partial.apply(&seq("01")), Err(Error::UnknownWord("1".into())));
    }

    #[test]
    fn constructor_checks() {
        let bad_len = [(Word::from_chars("01").unwrap(), sym("0"))].into();
        assert!(matches!(
            SlidingBlockCode::new(0, bin(), bin(), bad_len),
            Err(Error::LengthMismatch { expected: 1, found: 2 })
        ));
        let bad_out = [(Word::from_chars("0").unwrap(), sym("7"))].into();
        assert!(matches!(SlidingBlockCode::new(0, bin(), bin(), bad_out), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn induced_word_map_examples() {
        let abc: BTreeSet<Symbol> = [sym("a"), sym("b"), sym("c")].into();
        let sh = SlidingBlockCode::shift(abc.clone());
        assert_eq!(sh.induced_word_map(1, &Word::from_chars("abc").unwrap()).unwrap(), Word::from_chars("bc").unwrap());
        let id = SlidingBlockCode::identity(abc);
        for m in 0..3 {
            let w = Word::new(seq(&"abc"[..m + 1])).unwrap();
            assert_eq!(id.induced_word_map(m, &w).unwrap(), w);
        }
        assert_eq!(
            xor().induced_word_map(2, &Word::from_chars("0110").unwrap()).unwrap(),
            Word::from_chars("101").unwrap()
        );
        assert_eq!(
            xor().induced_word_map(1, &Word::from_chars("0110").unwrap()),
            Err(Error::LengthMismatch { expected: 3, found: 4 })
        );
    }

    #[test]
    fn composition_examples() {
        let sh = SlidingBlockCode::shift(bin());
        let twice = compose_sbc(&sh, &sh).unwrap();
        assert_eq!(twice.window(), 2);
        assert_eq!(twice.apply(&seq("0110")).unwrap(), seq("10"));

        let id = SlidingBlockCode::identity(bin());
        assert_eq!(compose_sbc(&id, &xor()).unwrap(), xor());
        assert_eq!(compose_sbc(&xor(), &id).unwrap(), xor());

        let xs = compose_sbc(&xor(), &sh).unwrap();
        assert_eq!(sh.apply(&seq("01101")).unwrap(), seq("1101"));
        assert_eq!(xor().apply(&seq("1101")).unwrap(), seq("011"));
        assert_eq!(xs.apply(&seq("01101")).unwrap(), seq("011"));
    }

    #[test]
    fn composition_alphabet_mismatch() {
        let abc: BTreeSet<Symbol> = [sym("a"), sym("b"), sym("c")].into();
        let to_abc = SlidingBlockCode::from_fn(0, bin(), abc, |_| sym("c")).unwrap();
        assert!(matches!(compose_sbc(&xor(), &to_abc), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn validity_examples() {
        let g = SubshiftPresentation::golden_mean();
        let full = SubshiftPresentation::full_shift(bin());
        assert!(SlidingBlockCode::identity(bin()).is_valid(&g, &g, 8).unwrap());
        assert!(SlidingBlockCode::shift(bin()).is_valid(&g, &g, 6).unwrap());
        let ones = SlidingBlockCode::from_fn(0, bin(), bin(), |_| sym("1")).unwrap();
        assert!(!ones.is_valid(&full, &g, 1).unwrap());
        // depth 0 only sees single symbols, and "1" is allowed
        assert!(ones.is_valid(&full, &g, 0).unwrap());
        let partial =
            SlidingBlockCode::new(0, bin(), bin(), [(Word::from_chars("0").unwrap(), sym("0"))].into()).unwrap();
        assert!(matches!(partial.is_valid(&full, &full, 2), Err(Error::UnknownWord(_))));
    }

    #[test]
    fn image_presentations() {
        let g = SubshiftPresentation::golden_mean();
        let full = SubshiftPresentation::full_shift(bin());
        let id_img = SlidingBlockCode::identity(bin()).image_presentation(&g).unwrap();
        assert!(id_img.same_language(&g, 6));
        let sh_img = SlidingBlockCode::shift(bin()).image_presentation(&g).unwrap();
        assert!(sh_img.same_language(&g, 6));
        let xor_img = xor().image_presentation(&full).unwrap();
        assert!(xor_img.same_language(&full, 6));
    }

    #[test]
    fn distinct_generators_behave_differently() {
        // every generator on the 4 binary 2-blocks; behaviour on length-2 inputs
        let blocks = all_blocks(&bin(), 2);
        let codes: Vec<SlidingBlockCode> = (0..16u32)
            .map(|bits| {
                let gen = blocks
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (b.clone(), sym(if bits >> i & 1 == 1 { "1" } else { "0" })))
                    .collect();
                SlidingBlockCode::new(1, bin(), bin(), gen).unwrap()
            })
            .collect();
        for (i, a) in codes.iter().enumerate() {
            for b in &codes[i + 1..] {
                assert!(blocks.iter().any(|w| a.apply(w.symbols()).unwrap() != b.apply(w.symbols()).unwrap()));
            }
        }
    }

    fn arb_code(window: usize) -> impl Strategy<Value = SlidingBlockCode> {
        let n = 1usize << (window + 1);
        prop::collection::vec(0u8..2, n).prop_map(move |outs| {
            let gen =
                all_blocks(&bin(), window + 1).into_iter().zip(outs).map(|(w, o)| (w, sym(&o.to_string()))).collect();
            SlidingBlockCode::new(window, bin(), bin(), gen).unwrap()
        })
    }

    proptest! {
        #[test]
        fn apply_agrees_with_induced_map(c in (0usize..3).prop_flat_map(arb_code), s in prop::collection::vec(0u8..2, 3..12)) {
            let s: Vec<Symbol> = s.iter().map(|b| sym(&b.to_string())).collect();
            let m = s.len() - c.window() - 1;
            let w = Word::new(s.clone()).unwrap();
            prop_assert_eq!(c.induced_word_map(m, &w).unwrap().into_symbols(), c.apply(&s).unwrap());
        }

        #[test]
        fn composition_square(a in (0usize..3).prop_flat_map(arb_code), b in (0usize..3).prop_flat_map(arb_code), s in prop::collection::vec(0u8..2, 5..14)) {
            let s: Vec<Symbol> = s.iter().map(|x| sym(&x.to_string())).collect();
            let ba = compose_sbc(&b, &a).unwrap();
            let m = s.len() - ba.window() - 1;
            let w = Word::new(s).unwrap();
            let direct = ba.induced_word_map(m, &w).unwrap();
            let staged = b.induced_word_map(m, &a.induced_word_map(m + b.window(), &w).unwrap()).unwrap();
            prop_assert_eq!(direct, staged);
        }
    }
}
