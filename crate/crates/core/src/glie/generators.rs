use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A free generator with its homological degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    /// The same generator with its degree moved by `by` (suspension for `by = 1`).
    pub fn shifted(&self, by: i32) -> Self {
        Generator {
            name: self.name.clone(),
            degree: self.degree + by,
        }
    }
}

/// Computation window: degrees `<= max_degree` and word lengths `<= max_word_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub max_degree: i32,
    pub max_word_length: Option<usize>,
}

impl Window {
    pub fn degree(max_degree: i32) -> Self {
        Window {
            max_degree,
            max_word_length: None,
        }
    }
}

/// Ordered generators of a free graded Lie algebra together with its window.
///
/// Declaration order fixes letter order, and with it every canonical basis
/// and tie-break downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
    max_degree: i32,
    max_word_length: usize,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl GeneratorSet {
    /// Builds a generator set. Without an explicit window the degree bound is
    /// `3 * max generator degree + 1`. Degree-0 generators require an explicit
    /// word-length bound.
    pub fn new(generators: Vec<Generator>, window: Option<Window>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !valid_identifier(&g.name) {
                return Err(Error::InvalidGenerators(format!(
                    "`{}` is not an identifier",
                    g.name
                )));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidGenerators(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
            if g.degree < 0 {
                return Err(Error::InvalidGenerators(format!(
                    "generator `{}` has negative degree {}",
                    g.name, g.degree
                )));
            }
        }
        if generators.len() > usize::from(u16::MAX) {
            return Err(Error::InvalidGenerators("too many generators".into()));
        }
        let has_degree_zero = generators.iter().any(|g| g.degree == 0);
        let top = generators.iter().map(|g| g.degree).max().unwrap_or(0);
        let max_degree = window.map(|w| w.max_degree).unwrap_or(3 * top + 1);
        let max_word_length = match window.and_then(|w| w.max_word_length) {
            Some(w) => w,
            None if has_degree_zero => {
                return Err(Error::InvalidGenerators(
                    "degree-0 generators need an explicit word-length bound".into(),
                ))
            }
            None => usize::try_from(max_degree.max(0)).unwrap_or(0),
        };
        Ok(GeneratorSet {
            generators,
            max_degree,
            max_word_length,
        })
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, i32)], window: Option<Window>) -> Result<Self> {
        GeneratorSet::new(
            pairs.iter().map(|&(n, d)| Generator::new(n, d)).collect(),
            window,
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn max_degree(&self) -> i32 {
        self.max_degree
    }

    pub fn max_word_length(&self) -> usize {
        self.max_word_length
    }

    pub fn degree(&self, letter: usize) -> i32 {
        self.generators[letter].degree
    }

    pub fn name(&self, letter: usize) -> &str {
        &self.generators[letter].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).min()
    }

    pub fn top_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).max()
    }

    /// All degrees are at least one (the simply connected regime).
    pub fn is_positive(&self) -> bool {
        self.generators.iter().all(|g| g.degree >= 1)
    }

    /// A copy with every degree moved by `by` and the same window offsets.
    pub fn shifted(&self, by: i32) -> Result<Self> {
        GeneratorSet::new(
            self.generators.iter().map(|g| g.shifted(by)).collect(),
            Some(Window {
                max_degree: self.max_degree + by,
                max_word_length: Some(self.max_word_length),
            }),
        )
    }

    pub fn with_window(&self, window: Window) -> Result<Self> {
        GeneratorSet::new(self.generators.clone(), Some(window))
    }

    pub(crate) fn word_degree(&self, word: &[u16]) -> i32 {
        word.iter().map(|&l| self.generators[usize::from(l)].degree).sum()
    }

    pub(crate) fn in_window(&self, word: &[u16]) -> bool {
        word.len() <= self.max_word_length && self.word_degree(word) <= self.max_degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sets() {
        assert!(GeneratorSet::from_pairs(&[("x", 2), ("x", 3)], None).is_err());
        assert!(GeneratorSet::from_pairs(&[("x", 0)], None).is_err());
        assert!(GeneratorSet::from_pairs(&[("1x", 2)], None).is_err());
        assert!(GeneratorSet::from_pairs(&[("x", -1)], None).is_err());
        let w = Window {
            max_degree: 4,
            max_word_length: Some(3),
        };
        assert!(GeneratorSet::from_pairs(&[("x", 0), ("y", 1)], Some(w)).is_ok());
    }

    #[test]
    fn default_window() {
        let g = GeneratorSet::from_pairs(&[("x", 3), ("v", 18)], None).unwrap();
        assert_eq!(g.max_degree(), 55);
        assert_eq!(g.max_word_length(), 55);
        let s = g.shifted(1).unwrap();
        assert_eq!(s.degree(1), 19);
        assert_eq!(s.max_degree(), 56);
    }
}
