use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Lookup tables for slang normalization, stopword removal and stemmer
/// dictionary checks. Immutable after construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizationLexicon {
    slang: BTreeMap<String, String>,
    stopwords: BTreeSet<String>,
    roots: BTreeSet<String>,
}

const MAX_CHAIN: usize = 16;

fn is_word(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl NormalizationLexicon {
    /// Builds a lexicon, validating every table.
    ///
    /// Slang chains (`a -> b`, `b -> c`) are resolved so that no canonical
    /// word is itself a slang key; a cycle is an error. Canonical forms may
    /// hold several space-separated words.
    pub fn new(
        slang: impl IntoIterator<Item = (String, String)>,
        stopwords: impl IntoIterator<Item = String>,
        roots: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in slang {
            if !is_word(&k) || k.chars().any(char::is_uppercase) {
                return Err(Error::InvalidLexicon(format!(
                    "slang key {k:?} must be lowercase without whitespace"
                )));
            }
            let v = v.split_whitespace().collect::<Vec<_>>().join(" ");
            if v.is_empty() {
                return Err(Error::InvalidLexicon(format!("slang key {k:?} has an empty canonical form")));
            }
            if v == k {
                return Err(Error::InvalidLexicon(format!("slang key {k:?} maps to itself")));
            }
            map.insert(k, v);
        }
        let resolved = resolve_chains(&map)?;

        let mut stop = BTreeSet::new();
        for w in stopwords {
            if !is_word(&w) || w.chars().any(char::is_uppercase) {
                return Err(Error::InvalidLexicon(format!("stopword {w:?} must be a lowercase word")));
            }
            stop.insert(w);
        }
        let mut root_set = BTreeSet::new();
        for w in roots {
            if !is_word(&w) {
                return Err(Error::InvalidLexicon(format!("root word {w:?} must be a single word")));
            }
            root_set.insert(w.to_lowercase());
        }
        Ok(Self {
            slang: resolved,
            stopwords: stop,
            roots: root_set,
        })
    }

    /// Parses the three text formats: `slang<TAB>canonical` lines and
    /// one-word-per-line lists; `#` starts a comment, blank lines are skipped.
    pub fn from_texts(slang: &str, stopwords: &str, roots: &str) -> Result<Self> {
        Self::new(parse_slang_map(slang)?, parse_word_list(stopwords), parse_word_list(roots))
    }

    pub fn slang(&self, word: &str) -> Option<&str> {
        self.slang.get(word).map(String::as_str)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn is_root(&self, word: &str) -> bool {
        self.roots.contains(word)
    }

    pub fn has_roots(&self) -> bool {
        !self.roots.is_empty()
    }

    pub fn slang_len(&self) -> usize {
        self.slang.len()
    }

    pub fn stopword_len(&self) -> usize {
        self.stopwords.len()
    }

    pub fn root_len(&self) -> usize {
        self.roots.len()
    }

    pub fn slang_entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.slang.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn stopwords(&self) -> impl Iterator<Item = &str> {
        self.stopwords.iter().map(String::as_str)
    }

    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.roots.iter().map(String::as_str)
    }
}

fn resolve_chains(map: &BTreeMap<String, String>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let mut words: Vec<String> = v.split(' ').map(ToString::to_string).collect();
        let mut rounds = 0;
        while words.iter().any(|w| map.contains_key(w) && w != k) {
            rounds += 1;
            if rounds > MAX_CHAIN {
                return Err(Error::InvalidLexicon(format!("slang cycle starting at {k:?}")));
            }
            words = words
                .into_iter()
                .flat_map(|w| match map.get(&w) {
                    Some(next) => next.split(' ').map(ToString::to_string).collect::<Vec<_>>(),
                    None => alloc::vec![w],
                })
                .collect();
        }
        if words.iter().any(|w| w == k) {
            return Err(Error::InvalidLexicon(format!("slang cycle starting at {k:?}")));
        }
        out.insert(k.clone(), words.join(" "));
    }
    Ok(out)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses `slang<TAB>canonical` lines.
pub fn parse_slang_map(text: &str) -> Result<Vec<(String, String)>> {
    content_lines(text)
        .map(|(n, line)| {
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::InvalidLexicon(format!("slang map line {n}: expected slang<TAB>canonical")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Parses a one-word-per-line list, lowercasing each entry.
pub fn parse_word_list(text: &str) -> Vec<String> {
    content_lines(text).map(|(_, l)| l.to_lowercase()).collect()
}
