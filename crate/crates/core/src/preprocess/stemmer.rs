//! Dictionary-checked confix stripping for Indonesian words.
//!
//! The procedure for a word `w`:
//!
//! 1. `w` is a root word: return it.
//! 2. Strip one inflectional suffix (particle or possessive); check.
//! 3. Strip one derivational suffix; check.
//! 4. Strip up to three derivational prefixes, trying every matching prefix
//!    rule and each of its surface forms (recodings), checking after each
//!    removal. Bases are tried suffix-stripped first, then with the
//!    derivational suffix kept, then with both suffixes kept.
//! 5. No dictionary hit: return `w` unchanged ([`UnknownWordPolicy::Keep`])
//!    or the greedy rule-only candidate ([`UnknownWordPolicy::Strip`]).
//!
//! Without a root dictionary only the greedy rule-only path runs. No rule
//! may leave fewer than `min_stem_length` characters.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexicon::NormalizationLexicon;
use crate::error::{Error, Result};

/// A candidate produced by removing a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixForm {
    /// The remainder as is.
    Plain,
    /// Letters prepended to the remainder when it starts with a vowel
    /// (`meny` + `apu` -> `s` + `apu`).
    Recode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixRule {
    pub surface: String,
    /// Tried in order; the first applicable form is the rule-only choice.
    pub forms: Vec<PrefixForm>,
    /// When set, only prefixes in this list may be stripped after this one.
    pub allowed_next: Option<Vec<String>>,
}

/// What to return when no dictionary check succeeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownWordPolicy {
    Keep,
    Strip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemmerRules {
    pub inflectional_suffixes: Vec<String>,
    pub derivational_suffixes: Vec<String>,
    pub prefix_rules: Vec<PrefixRule>,
    pub min_stem_length: usize,
    pub unknown_word: UnknownWordPolicy,
    pub max_prefixes: usize,
}

/// The shipped rule file.
pub const DEFAULT_RULES: &str = include_str!("default_rules.txt");

impl Default for StemmerRules {
    fn default() -> Self {
        StemmerRules::parse(DEFAULT_RULES).expect("shipped stemmer rules parse")
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

impl StemmerRules {
    /// Parses the rule format:
    ///
    /// ```text
    /// min_stem_length 3
    /// max_prefixes 3
    /// unknown_word keep|strip
    /// inflectional lah kah tah pun nya ku mu
    /// derivational kan an i
    /// prefix <surface> <form>... [> <next-prefix>...]
    /// ```
    ///
    /// A form is `_` (plain remainder) or `x_` (prepend `x` when the
    /// remainder starts with a vowel). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = StemmerRules {
            inflectional_suffixes: Vec::new(),
            derivational_suffixes: Vec::new(),
            prefix_rules: Vec::new(),
            min_stem_length: 3,
            unknown_word: UnknownWordPolicy::Keep,
            max_prefixes: 3,
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::InvalidRules { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let args: Vec<&str> = parts.collect();
            let number = |args: &[&str]| -> Result<usize> {
                match args {
                    [v] => v.parse().map_err(|_| err(format!("expected a number, got {v:?}"))),
                    _ => Err(err("expected exactly one value".into())),
                }
            };
            match key {
                "min_stem_length" => rules.min_stem_length = number(&args)?,
                "max_prefixes" => rules.max_prefixes = number(&args)?,
                "unknown_word" => {
                    rules.unknown_word = match args.as_slice() {
                        ["keep"] => UnknownWordPolicy::Keep,
                        ["strip"] => UnknownWordPolicy::Strip,
                        _ => return Err(err("unknown_word takes keep or strip".into())),
                    }
                }
                "inflectional" => rules.inflectional_suffixes = words(&args, &err)?,
                "derivational" => rules.derivational_suffixes = words(&args, &err)?,
                "prefix" => {
                    let (surface, rest) = args
                        .split_first()
                        .ok_or_else(|| err("prefix needs a surface form".into()))?;
                    check_letters(surface, &err)?;
                    let (forms_part, next_part) = match rest.iter().position(|a| *a == ">") {
                        Some(p) => (&rest[..p], Some(&rest[p + 1..])),
                        None => (rest, None),
                    };
                    if forms_part.is_empty() {
                        return Err(err(format!("prefix {surface} lists no forms")));
                    }
                    let forms = forms_part
                        .iter()
                        .map(|f| match f.strip_suffix('_') {
                            Some("") => Ok(PrefixForm::Plain),
                            Some(letters) => {
                                check_letters(letters, &err)?;
                                Ok(PrefixForm::Recode(letters.to_string()))
                            }
                            None => Err(err(format!("bad prefix form {f:?}; use _ or x_"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let allowed_next = next_part.map(|n| words(n, &err)).transpose()?;
                    rules.prefix_rules.push(PrefixRule {
                        surface: surface.to_string(),
                        forms,
                        allowed_next,
                    });
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        if rules.min_stem_length == 0 {
            return Err(Error::InvalidRules {
                line: 0,
                message: "min_stem_length must be positive".into(),
            });
        }
        Ok(rules)
    }

    fn strip_suffix<'a>(&self, word: &'a str, suffixes: &[String]) -> Option<&'a str> {
        suffixes.iter().find_map(|s| {
            word.strip_suffix(s.as_str())
                .filter(|rest| rest.chars().count() >= self.min_stem_length)
        })
    }

    fn prefix_candidates<'r>(&'r self, word: &str, previous: Option<&'r PrefixRule>, used: &[&str]) -> Vec<(&'r PrefixRule, String)> {
        let mut out = Vec::new();
        for rule in &self.prefix_rules {
            if used.contains(&rule.surface.as_str()) {
                continue;
            }
            if let Some(prev) = previous {
                if let Some(allowed) = &prev.allowed_next {
                    if !allowed.contains(&rule.surface) {
                        continue;
                    }
                }
            }
            let Some(rest) = word.strip_prefix(rule.surface.as_str()) else {
                continue;
            };
            for form in &rule.forms {
                let cand = match form {
                    PrefixForm::Plain => rest.to_string(),
                    PrefixForm::Recode(letters) => {
                        if !rest.chars().next().is_some_and(is_vowel) {
                            continue;
                        }
                        let mut s = letters.clone();
                        s.push_str(rest);
                        s
                    }
                };
                if cand.chars().count() >= self.min_stem_length {
                    out.push((rule, cand));
                }
            }
        }
        out
    }

    fn search_prefixes<'r>(
        &'r self,
        word: &str,
        lexicon: &NormalizationLexicon,
        previous: Option<&'r PrefixRule>,
        used: &mut Vec<&'r str>,
    ) -> Option<String> {
        if used.len() >= self.max_prefixes {
            return None;
        }
        for (rule, cand) in self.prefix_candidates(word, previous, used) {
            if lexicon.is_root(&cand) {
                return Some(cand);
            }
            used.push(&rule.surface);
            let found = self.search_prefixes(&cand, lexicon, Some(rule), used);
            used.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Greedy stripping without dictionary checks. Returns the candidate and
    /// the number of rules applied.
    pub fn strip_rule_only(&self, word: &str) -> (String, usize) {
        let mut applied = 0;
        let mut w = word.to_string();
        if let Some(r) = self.strip_suffix(&w, &self.inflectional_suffixes) {
            w = r.to_string();
            applied += 1;
        }
        if let Some(r) = self.strip_suffix(&w, &self.derivational_suffixes) {
            w = r.to_string();
            applied += 1;
        }
        let mut used: Vec<&str> = Vec::new();
        let mut previous = None;
        while used.len() < self.max_prefixes {
            let cands = self.prefix_candidates(&w, previous, &used);
            let Some((rule, cand)) = cands.into_iter().next() else {
                break;
            };
            used.push(&rule.surface);
            previous = Some(rule);
            w = cand;
            applied += 1;
        }
        (w, applied)
    }

    /// Reduces a lowercase word to its root form.
    pub fn stem(&self, word: &str, lexicon: &NormalizationLexicon) -> String {
        if !lexicon.has_roots() {
            return self.strip_rule_only(word).0;
        }
        if lexicon.is_root(word) {
            return word.to_string();
        }
        let after_infl = self.strip_suffix(word, &self.inflectional_suffixes).unwrap_or(word);
        if lexicon.is_root(after_infl) {
            return after_infl.to_string();
        }
        let after_deriv = self.strip_suffix(after_infl, &self.derivational_suffixes).unwrap_or(after_infl);
        if lexicon.is_root(after_deriv) {
            return after_deriv.to_string();
        }
        let mut bases: Vec<&str> = Vec::with_capacity(3);
        for b in [after_deriv, after_infl, word] {
            if !bases.contains(&b) {
                bases.push(b);
            }
        }
        for base in bases {
            let mut used = Vec::new();
            if let Some(root) = self.search_prefixes(base, lexicon, None, &mut used) {
                return root;
            }
        }
        match self.unknown_word {
            UnknownWordPolicy::Keep => word.to_string(),
            UnknownWordPolicy::Strip => self.strip_rule_only(word).0,
        }
    }
}

fn check_letters(s: &str, err: &dyn Fn(String) -> Error) -> Result<()> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_lowercase()) {
        return Err(err(format!("{s:?} must be lowercase letters")));
    }
    Ok(())
}

fn words(args: &[&str], err: &dyn Fn(String) -> Error) -> Result<Vec<String>> {
    args.iter()
        .map(|a| check_letters(a, err).map(|_| a.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lex(roots: &[&str]) -> NormalizationLexicon {
        NormalizationLexicon::new(vec![], vec![], roots.iter().map(|r| r.to_string())).unwrap()
    }

    #[test]
    fn default_rules_parse() {
        let r = StemmerRules::default();
        assert_eq!(r.min_stem_length, 3);
        assert!(r.inflectional_suffixes.iter().any(|s| s == "nya"));
        assert_eq!(r.derivational_suffixes, vec!["kan", "an", "i"]);
        assert!(r.prefix_rules.iter().any(|p| p.surface == "meny"));
    }

    #[test]
    fn dictionary_examples() {
        let r = StemmerRules::default();
        let l = lex(&["makan", "bilang", "jelek", "pukul", "sapu", "tulis", "ajar", "baik", "main"]);
        assert_eq!(r.stem("makanan", &l), "makan");
        assert_eq!(r.stem("dibilang", &l), "bilang");
        assert_eq!(r.stem("jelek", &l), "jelek");
        assert_eq!(r.stem("memukul", &l), "pukul");
        assert_eq!(r.stem("menyapu", &l), "sapu");
        assert_eq!(r.stem("menulis", &l), "tulis");
        assert_eq!(r.stem("pelajaran", &l), "ajar");
        assert_eq!(r.stem("memperbaiki", &l), "baik");
        assert_eq!(r.stem("dimakan", &l), "makan");
        assert_eq!(r.stem("jeleknya", &l), "jelek");
        assert_eq!(r.stem("dipermainkan", &l), "main");
    }

    #[test]
    fn unknown_words() {
        let r = StemmerRules::default();
        let l = lex(&["jelek"]);
        assert_eq!(r.stem("kerennya", &l), "kerennya");
        let strip = StemmerRules {
            unknown_word: UnknownWordPolicy::Strip,
            ..StemmerRules::default()
        };
        assert_eq!(strip.stem("jeleknya", &lex(&["cantik"])), "jelek");
        // Rule-only stripping over-reaches on unknown roots.
        assert_eq!(strip.stem("kerennya", &l), "ren");
    }

    #[test]
    fn rule_only_mode() {
        let r = StemmerRules::default();
        let empty = lex(&[]);
        assert_eq!(r.stem("makanan", &empty), "makan");
        assert_eq!(r.stem("memukul", &empty), "pukul");
        assert_eq!(r.stem("menyapu", &empty), "sapu");
        assert_eq!(r.stem("dibilang", &empty), "bilang");
        // Nothing may drop below three characters.
        assert_eq!(r.stem("dia", &empty), "dia");
        assert_eq!(r.stem("diam", &empty), "diam");
    }

    #[test]
    fn allowed_next_constraint() {
        let r = StemmerRules::parse("prefix di _ > ber\nprefix ke _\nprefix ber _\n").unwrap();
        let l = lex(&["lupa", "main"]);
        assert_eq!(r.stem("dikelupa", &l), "dikelupa");
        assert_eq!(r.stem("diberlupa", &l), "lupa");
        assert_eq!(r.strip_rule_only("dikemain").0, "kemain");
    }

    #[test]
    fn parse_errors_name_lines() {
        match StemmerRules::parse("min_stem_length 3\nprefix me X_\n") {
            Err(Error::InvalidRules { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(StemmerRules::parse("bogus 1").is_err());
        assert!(StemmerRules::parse("min_stem_length 0").is_err());
        assert!(StemmerRules::parse("prefix me").is_err());
    }
}
