//! Degree-truncated noncommutative power series over a coefficient ring.

mod series;
mod shuffle;
mod subst;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::coeffring::CoeffError;

pub use series::TruncatedSeries;
pub use shuffle::{all_words, shuffle_words, ShuffleReport};
pub use subst::SubstTarget;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("word of length {len} is beyond the truncation cap {cap}")]
    OutOfCap { len: usize, cap: usize },
    #[error("mismatched series: {0}")]
    Mismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Ordered list of distinct letter names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, SeriesError> {
        if names.is_empty() {
            return Err(SeriesError::Domain("empty alphabet".into()));
        }
        if names.len() > u8::MAX as usize {
            return Err(SeriesError::Domain("alphabet too large".into()));
        }
        let letters: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].contains(a) {
                return Err(SeriesError::Domain(format!("duplicate letter {a:?}")));
            }
        }
        Ok(Arc::new(Alphabet { letters }))
    }

    /// Letters named `{prefix}0, {prefix}1, ...`.
    pub fn indexed(prefix: &str, n: usize) -> Arc<Self> {
        let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        Self::new(&names).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, i: u8) -> &str {
        &self.letters[i as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.letters.iter().position(|l| l == name).map(|i| i as u8)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join("·")
    }
}

/// A word in letter indices. Ordered by length, then lexicographically.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub SmallVec<[u8; 12]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_slice(s: &[u8]) -> Self {
        Word(SmallVec::from_slice(s))
    }

    pub fn letter(l: u8) -> Self {
        Word::from_slice(&[l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u8> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn push(&mut self, l: u8) {
        self.0.push(l)
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.as_slice().cmp(o.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word::from_slice(s)
    }
}

impl<const N: usize> From<[u8; N]> for Word {
    fn from(s: [u8; N]) -> Self {
        Word::from_slice(&s)
    }
}
