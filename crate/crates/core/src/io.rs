//! JSON file formats.
//!
//! Every format is written in canonical form: pretty-printed, object keys
//! sorted, lists in their canonical order. Unknown fields are rejected, which
//! also makes the formats distinguishable by shape alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::colimit::{DiagramArrow, DynDiagram};
use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::observe::{Measurement, ObsMorphism, ObservedSystem};
use crate::recon::{EmptyReason, ReconResult};
use crate::sbc::SlidingBlockCode;
use crate::shift::{Edge, SubshiftPresentation};
use crate::symbol::{StateId, Symbol, VertexId, Word};
use crate::tsd::{TimeSeriesData, TsdMorphism};

/// A domain value with a JSON document form.
pub trait Document: Sized {
    type Doc: Serialize + DeserializeOwned;
    const KIND: FileKind;

    fn to_doc(&self) -> Self::Doc;
    fn from_doc(doc: Self::Doc) -> Result<Self>;
}

/// Canonical JSON text, newline-terminated.
pub fn to_json<T: Document>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(&value.to_doc()).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json<T: Document>(text: &str) -> Result<T> {
    let doc: T::Doc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    T::from_doc(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    System,
    Observed,
    Presentation,
    Code,
    Tsd,
    Recon,
    Diagram,
    TsdMorphism,
    ObsMorphism,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::System => "system",
            FileKind::Observed => "observed-system",
            FileKind::Presentation => "presentation",
            FileKind::Code => "code",
            FileKind::Tsd => "tsd",
            FileKind::Recon => "recon",
            FileKind::Diagram => "diagram",
            FileKind::TsdMorphism => "tsd-morphism",
            FileKind::ObsMorphism => "obs-morphism",
        })
    }
}

fn recanon<T: Document>(text: &str) -> Result<String> {
    Ok(to_json(&from_json::<T>(text)?))
}

/// Identify the format of `text` and return its canonical form.
pub fn canonicalize(text: &str) -> Result<(FileKind, String)> {
    type Canon = fn(&str) -> Result<String>;
    let attempts: [(FileKind, Canon); 9] = [
        (FileKind::System, recanon::<FiniteDynSys>),
        (FileKind::Observed, recanon::<ObservedSystem>),
        (FileKind::Presentation, recanon::<SubshiftPresentation>),
        (FileKind::Code, recanon::<SlidingBlockCode>),
        (FileKind::Tsd, recanon::<TimeSeriesData>),
        (FileKind::Recon, recanon::<ReconResult>),
        (FileKind::Diagram, recanon::<DynDiagram>),
        (FileKind::TsdMorphism, recanon::<TsdMorphism>),
        (FileKind::ObsMorphism, recanon::<ObsMorphism>),
    ];
    let mut errors = Vec::new();
    for (kind, f) in attempts {
        match f(text) {
            Ok(s) => return Ok((kind, s)),
            Err(e) => errors.push(format!("{kind}: {e}")),
        }
    }
    Err(Error::Format(format!("not a recognised document ({})", errors.join("; "))))
}

/// A raw symbol stream: one symbol per line, or a single comma-separated line.
pub fn parse_sequence(text: &str) -> Result<Vec<Symbol>> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let items: Vec<&str> = match lines.as_slice() {
        [] => vec![],
        [one] => one.split(',').map(str::trim).collect(),
        many => many.to_vec(),
    };
    items.into_iter().map(str::parse).collect()
}

fn word_keys<V: Clone>(m: &BTreeMap<Word, V>) -> BTreeMap<String, V> {
    m.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parse_word_keys<V>(m: BTreeMap<String, V>) -> Result<BTreeMap<Word, V>> {
    m.into_iter().map(|(k, v)| Ok((k.parse()?, v))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub states: Vec<StateId>,
    pub step: BTreeMap<StateId, StateId>,
}

impl Document for FiniteDynSys {
    type Doc = SystemDoc;
    const KIND: FileKind = FileKind::System;

    fn to_doc(&self) -> SystemDoc {
        SystemDoc { states: self.states().to_vec(), step: self.step_map() }
    }

    fn from_doc(doc: SystemDoc) -> Result<Self> {
        let listed: BTreeSet<&StateId> = doc.states.iter().collect();
        if listed.len() != doc.states.len() {
            return Err(Error::Format("duplicate state ids".into()));
        }
        if !doc.step.keys().eq(listed.iter().copied()) {
            return Err(Error::Format("every state must appear exactly once as a step key".into()));
        }
        FiniteDynSys::new(doc.step)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservedDoc {
    pub system: SystemDoc,
    pub alphabet: Vec<Symbol>,
    pub phi: BTreeMap<StateId, Symbol>,
    pub initial: Vec<StateId>,
}

impl Document for ObservedSystem {
    type Doc = ObservedDoc;
    const KIND: FileKind = FileKind::Observed;

    fn to_doc(&self) -> ObservedDoc {
        ObservedDoc {
            system: self.sys().to_doc(),
            alphabet: self.alphabet().iter().cloned().collect(),
            phi: self.meas().phi.clone(),
            initial: self.initial().to_vec(),
        }
    }

    fn from_doc(doc: ObservedDoc) -> Result<Self> {
        let sys = FiniteDynSys::from_doc(doc.system)?;
        let meas = Measurement::new(doc.alphabet.into_iter().collect(), doc.phi)?;
        ObservedSystem::new(sys, meas, doc.initial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: VertexId,
    pub to: VertexId,
    pub label: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub vertices: Vec<VertexId>,
    pub alphabet: Vec<Symbol>,
    pub edges: Vec<EdgeDoc>,
}

impl Document for SubshiftPresentation {
    type Doc = PresentationDoc;
    const KIND: FileKind = FileKind::Presentation;

    fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            vertices: self.vertices().iter().cloned().collect(),
            alphabet: self.alphabet().iter().cloned().collect(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeDoc { from: e.from.clone(), to: e.to.clone(), label: e.label.clone() })
                .collect(),
        }
    }

    fn from_doc(doc: PresentationDoc) -> Result<Self> {
        SubshiftPresentation::new(
            doc.vertices.into_iter().collect(),
            doc.alphabet.into_iter().collect(),
            doc.edges.into_iter().map(|e| Edge { from: e.from, to: e.to, label: e.label }).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    pub window: usize,
    pub source_alphabet: Vec<Symbol>,
    pub target_alphabet: Vec<Symbol>,
    pub gen: BTreeMap<String, Symbol>,
}

impl Document for SlidingBlockCode {
    type Doc = CodeDoc;
    const KIND: FileKind = FileKind::Code;

    fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            window: self.window(),
            source_alphabet: self.source_alphabet().iter().cloned().collect(),
            target_alphabet: self.target_alphabet().iter().cloned().collect(),
            gen: word_keys(self.generator()),
        }
    }

    fn from_doc(doc: CodeDoc) -> Result<Self> {
        SlidingBlockCode::new(
            doc.window,
            doc.source_alphabet.into_iter().collect(),
            doc.target_alphabet.into_iter().collect(),
            parse_word_keys(doc.gen)?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TsdDoc {
    pub alphabet: Vec<Symbol>,
    pub horizon: usize,
    pub levels: Vec<Vec<String>>,
}

impl Document for TimeSeriesData {
    type Doc = TsdDoc;
    const KIND: FileKind = FileKind::Tsd;

    fn to_doc(&self) -> TsdDoc {
        TsdDoc {
            alphabet: self.alphabet().iter().cloned().collect(),
            horizon: self.horizon(),
            levels: self
                .levels()
                .iter()
                .map(|l| {
                    let mut ws: Vec<String> = l.iter().map(Word::to_string).collect();
                    ws.sort();
                    ws
                })
                .collect(),
        }
    }

    fn from_doc(doc: TsdDoc) -> Result<Self> {
        if doc.levels.len() != doc.horizon + 1 {
            return Err(Error::Format(format!(
                "horizon {} needs {} levels, found {}",
                doc.horizon,
                doc.horizon + 1,
                doc.levels.len()
            )));
        }
        let levels = doc
            .levels
            .into_iter()
            .map(|l| l.iter().map(|w| w.parse()).collect::<Result<BTreeSet<Word>>>())
            .collect::<Result<_>>()?;
        TimeSeriesData::new(doc.alphabet.into_iter().collect(), levels)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconDoc {
    pub order: usize,
    pub presentation: PresentationDoc,
    pub system: Option<ObservedDoc>,
    pub state_words: BTreeMap<StateId, Word>,
}

impl Document for ReconResult {
    type Doc = ReconDoc;
    const KIND: FileKind = FileKind::Recon;

    fn to_doc(&self) -> ReconDoc {
        ReconDoc {
            order: self.order,
            presentation: self.presentation.to_doc(),
            system: self.system.as_ref().map(Document::to_doc),
            state_words: self.state_words.clone(),
        }
    }

    /// The empty-reason flag is not part of the format; an empty presentation
    /// reads back as [`EmptyReason::Pruned`].
    fn from_doc(doc: ReconDoc) -> Result<Self> {
        let presentation = SubshiftPresentation::from_doc(doc.presentation)?;
        let system = doc.system.map(ObservedSystem::from_doc).transpose()?;
        let empty = presentation.is_empty().then_some(EmptyReason::Pruned);
        Ok(ReconResult { order: doc.order, presentation, system, state_words: doc.state_words, empty })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub from: usize,
    pub to: usize,
    pub map: BTreeMap<StateId, StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub nodes: Vec<SystemDoc>,
    pub arrows: Vec<ArrowDoc>,
}

impl Document for DynDiagram {
    type Doc = DiagramDoc;
    const KIND: FileKind = FileKind::Diagram;

    fn to_doc(&self) -> DiagramDoc {
        DiagramDoc {
            nodes: self.nodes.iter().map(Document::to_doc).collect(),
            arrows: self.arrows.iter().map(|a| ArrowDoc { from: a.from, to: a.to, map: a.map.clone() }).collect(),
        }
    }

    fn from_doc(doc: DiagramDoc) -> Result<Self> {
        let nodes = doc.nodes.into_iter().map(FiniteDynSys::from_doc).collect::<Result<_>>()?;
        let arrows = doc.arrows.into_iter().map(|a| DiagramArrow { from: a.from, to: a.to, map: a.map }).collect();
        // structural load only; validity is reported by the colimit itself
        Ok(DynDiagram { nodes, arrows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TsdMorphismDoc {
    pub jump: usize,
    pub gen: BTreeMap<String, Symbol>,
}

impl Document for TsdMorphism {
    type Doc = TsdMorphismDoc;
    const KIND: FileKind = FileKind::TsdMorphism;

    fn to_doc(&self) -> TsdMorphismDoc {
        TsdMorphismDoc { jump: self.jump(), gen: word_keys(self.generator()) }
    }

    fn from_doc(doc: TsdMorphismDoc) -> Result<Self> {
        TsdMorphism::new(doc.jump, parse_word_keys(doc.gen)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObsMorphismDoc {
    pub h: BTreeMap<StateId, StateId>,
    pub a: BTreeMap<String, Symbol>,
}

impl Document for ObsMorphism {
    type Doc = ObsMorphismDoc;
    const KIND: FileKind = FileKind::ObsMorphism;

    fn to_doc(&self) -> ObsMorphismDoc {
        ObsMorphismDoc { h: self.h.clone(), a: self.a.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }

    fn from_doc(doc: ObsMorphismDoc) -> Result<Self> {
        let a = doc.a.into_iter().map(|(k, v)| Ok((k.parse()?, v))).collect::<Result<_>>()?;
        Ok(ObsMorphism { h: doc.h, a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recon::reconstruct;
    use crate::symbol::sym;
    use crate::tsd::data_functor;

    #[test]
    fn system_canonicalises_key_order() {
        let text = r#"{"step": {"c": "a", "a": "b", "b": "c"}, "states": ["c", "b", "a"]}"#;
        let sys: FiniteDynSys = from_json(text).unwrap();
        let canon = to_json(&sys);
        assert_eq!(
            canon,
            "{\n  \"states\": [\n    \"a\",\n    \"b\",\n    \"c\"\n  ],\n  \"step\": {\n    \"a\": \"b\",\n    \"b\": \"c\",\n    \"c\": \"a\"\n  }\n}\n"
        );
        assert_eq!(canonicalize(&canon).unwrap(), (FileKind::System, canon.clone()));
    }

    #[test]
    fn system_rejects_missing_keys_and_junk() {
        assert!(from_json::<FiniteDynSys>(r#"{"states": ["a", "b"], "step": {"a": "a"}}"#).is_err());
        assert!(from_json::<FiniteDynSys>(r#"{"states": ["a"], "step": {"a": "a"}, "x": 1}"#).is_err());
        assert!(from_json::<FiniteDynSys>("{\"states\": [").is_err());
        assert!(canonicalize("[1, 2").is_err());
    }

    #[test]
    fn every_format_is_recognised() {
        let c3 = FiniteDynSys::cycle(3);
        let obs = ObservedSystem::identity_observation(&c3);
        let tsd = data_functor(&obs, 1, 2).unwrap();
        let recon = reconstruct(&tsd, Some(1)).unwrap();
        let code = SlidingBlockCode::shift([sym("0"), sym("1")].into());
        let tm = TsdMorphism::identity(obs.alphabet());
        let om = ObsMorphism::identity(&obs);
        let diagram = DynDiagram::new(vec![c3.clone()], vec![]).unwrap();
        let cases = [
            (to_json(&c3), FileKind::System),
            (to_json(&obs), FileKind::Observed),
            (to_json(&SubshiftPresentation::golden_mean()), FileKind::Presentation),
            (to_json(&code), FileKind::Code),
            (to_json(&tsd), FileKind::Tsd),
            (to_json(&recon), FileKind::Recon),
            (to_json(&diagram), FileKind::Diagram),
            (to_json(&tm), FileKind::TsdMorphism),
            (to_json(&om), FileKind::ObsMorphism),
        ];
        for (text, kind) in cases {
            let (k, canon) = canonicalize(&text).unwrap();
            assert_eq!(k, kind);
            assert_eq!(canon, text, "{kind} is not stable");
        }
    }

    #[test]
    fn code_generator_keys_are_comma_joined() {
        let code = SlidingBlockCode::shift([sym("0"), sym("1")].into());
        let doc = code.to_doc();
        assert_eq!(doc.gen.keys().collect::<Vec<_>>(), ["0,0", "0,1", "1,0", "1,1"]);
        assert_eq!(doc.gen["0,1"], sym("1"));
    }

    #[test]
    fn tsd_horizon_must_match_levels() {
        let text = r#"{"alphabet": ["0"], "horizon": 2, "levels": [["0"]]}"#;
        assert!(matches!(from_json::<TimeSeriesData>(text), Err(Error::Format(_))));
    }

    #[test]
    fn sequences() {
        let per_line = parse_sequence("0\n1\n\n1\n0\n").unwrap();
        let one_line = parse_sequence("0,1,1,0\n").unwrap();
        assert_eq!(per_line, one_line);
        assert_eq!(per_line.len(), 4);
        assert!(parse_sequence("").unwrap().is_empty());
        assert_eq!(parse_sequence("(a;b),(b;a)").unwrap()[1].to_string(), "(b;a)");
        assert!(parse_sequence("a,(b").is_err());
    }
}
