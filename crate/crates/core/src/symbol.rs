//! Identifiers, symbols and words.
//!
//! State ids, vertex ids and atomic symbols share one character rule: they are
//! nonempty and contain none of `,` `;` `(` `)`. Those four characters are
//! reserved for the text forms of words (`a,b,c`) and compound symbols
//! (`(a;b)`), so every value here prints and parses back unambiguously.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const RESERVED: [char; 4] = [',', ';', '(', ')'];

fn check_ident(s: &str) -> Result<()> {
    if s.is_empty() || s.contains(RESERVED) {
        return Err(Error::InvalidIdentifier(s.to_string()));
    }
    Ok(())
}

macro_rules! ident_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Result<Self> {
                let id = id.into();
                check_ident(&id)?;
                Ok(Self(id))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                Self::new(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                Self::new(s).map_err(serde::de::Error::custom)
            }
        }
    };
}

ident_type!(
    /// Opaque name of a state, unique within one system.
    StateId
);

ident_type!(
    /// Opaque name of a vertex in a subshift presentation.
    VertexId
);

impl StateId {
    /// The atomic symbol with the same name.
    pub fn to_symbol(&self) -> Symbol {
        Symbol::Atom(self.0.clone())
    }
}

impl From<&StateId> for VertexId {
    fn from(s: &StateId) -> Self {
        VertexId(s.0.clone())
    }
}

/// A measurement value. Compound symbols are ordered tuples produced by delay
/// embedding; their text form is `(s0;s1;...)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Atom(String),
    Tuple(Vec<Symbol>),
}

impl Symbol {
    pub fn atom(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_ident(&name)?;
        Ok(Symbol::Atom(name))
    }

    /// Tuple coordinates, or `None` for an atom.
    pub fn coords(&self) -> Option<&[Symbol]> {
        match self {
            Symbol::Atom(_) => None,
            Symbol::Tuple(c) => Some(c),
        }
    }

    /// The state with the same name, if this is an atom.
    pub fn to_state(&self) -> Option<StateId> {
        match self {
            Symbol::Atom(a) => Some(StateId(a.clone())),
            Symbol::Tuple(_) => None,
        }
    }

    fn parse_at(src: &str, pos: &mut usize) -> Result<Symbol> {
        let bytes = src.as_bytes();
        if bytes.get(*pos) == Some(&b'(') {
            *pos += 1;
            let mut coords = Vec::new();
            loop {
                coords.push(Self::parse_at(src, pos)?);
                match bytes.get(*pos) {
                    Some(b';') => *pos += 1,
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Symbol::Tuple(coords));
                    }
                    _ => return Err(Error::InvalidIdentifier(src.to_string())),
                }
            }
        }
        let start = *pos;
        while *pos < bytes.len() && !matches!(bytes[*pos], b',' | b';' | b'(' | b')') {
            *pos += 1;
        }
        Symbol::atom(&src[start..*pos]).map_err(|_| Error::InvalidIdentifier(src.to_string()))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Atom(a) => f.write_str(a),
            Symbol::Tuple(coords) => {
                f.write_str("(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut pos = 0;
        let sym = Symbol::parse_at(s, &mut pos)?;
        if pos != s.len() {
            return Err(Error::InvalidIdentifier(s.to_string()));
        }
        Ok(sym)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A nonempty finite block of symbols. `Word` values of length `n + 1` make up
/// level `n` of timeseries data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    /// Caller guarantees `symbols` is nonempty.
    pub(crate) fn from_vec(symbols: Vec<Symbol>) -> Self {
        debug_assert!(!symbols.is_empty());
        Word(symbols)
    }

    pub(crate) fn from_slice(symbols: &[Symbol]) -> Self {
        Self::from_vec(symbols.to_vec())
    }

    /// Convenience for tests and fixtures: each char of `s` is one atom.
    pub fn from_chars(s: &str) -> Result<Self> {
        Word::new(s.chars().map(|c| Symbol::atom(c.to_string())).collect::<Result<_>>()?)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> &Symbol {
        &self.0[0]
    }

    pub fn last(&self) -> &Symbol {
        &self.0[self.0.len() - 1]
    }

    /// Drop the first symbol; `None` for a single-symbol word.
    pub fn start(&self) -> Option<Word> {
        (self.0.len() > 1).then(|| Word::from_slice(&self.0[1..]))
    }

    /// Drop the last symbol; `None` for a single-symbol word.
    pub fn finish(&self) -> Option<Word> {
        (self.0.len() > 1).then(|| Word::from_slice(&self.0[..self.0.len() - 1]))
    }

    /// All contiguous sub-words of length `len`.
    pub fn windows(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        self.0.windows(len.max(1)).map(Word::from_slice)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut pos = 0;
        loop {
            symbols.push(Symbol::parse_at(s, &mut pos)?);
            match s.as_bytes().get(pos) {
                None => break,
                Some(b',') => pos += 1,
                Some(_) => return Err(Error::InvalidIdentifier(s.to_string())),
            }
        }
        Word::new(symbols)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Symbol> for Word {
    fn from(s: Symbol) -> Self {
        Word(vec![s])
    }
}

/// Shorthand used throughout the tests: `sym("a")`.
pub fn sym(name: &str) -> Symbol {
    Symbol::atom(name).expect("valid atom")
}

/// Shorthand: `sid("a")`.
pub fn sid(name: &str) -> StateId {
    StateId::new(name).expect("valid state id")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_reserved_characters() {
        assert!(StateId::new("a,b").is_err());
        assert!(Symbol::atom("(x").is_err());
        assert!(VertexId::new("").is_err());
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn tuple_text_form() {
        let t = Symbol::Tuple(vec![sym("a"), Symbol::Tuple(vec![sym("b"), sym("c")])]);
        assert_eq!(t.to_string(), "(a;(b;c))");
        assert_eq!("(a;(b;c))".parse::<Symbol>().unwrap(), t);
        let w = Word::new(vec![t.clone(), sym("d")]).unwrap();
        assert_eq!(w.to_string(), "(a;(b;c)),d");
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn start_and_finish() {
        let w = Word::from_chars("011").unwrap();
        assert_eq!(w.start().unwrap(), Word::from_chars("11").unwrap());
        assert_eq!(w.finish().unwrap(), Word::from_chars("01").unwrap());
        assert_eq!(Word::from_chars("0").unwrap().start(), None);
    }

    fn arb_symbol() -> impl Strategy<Value = Symbol> {
        let leaf = "[a-z0-9_.:|+-]{1,3}".prop_map(Symbol::Atom);
        leaf.prop_recursive(3, 12, 3, |inner| prop::collection::vec(inner, 1..4).prop_map(Symbol::Tuple))
    }

    proptest! {
        #[test]
        fn word_text_roundtrip(w in prop::collection::vec(arb_symbol(), 1..6)) {
            let w = Word::new(w).unwrap();
            prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }
}
