//! Annotated comments, dataset statistics and seeded partitioning.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::SeededRng;

/// Binary annotation of a comment. Class ids: Bullying = 0, NonBullying = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Bullying,
    NonBullying,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Bullying, Label::NonBullying];

    pub fn id(self) -> usize {
        match self {
            Label::Bullying => 0,
            Label::NonBullying => 1,
        }
    }

    pub fn from_id(id: usize) -> Label {
        if id == 0 {
            Label::Bullying
        } else {
            Label::NonBullying
        }
    }

    /// The spelling used when writing CSV files.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Bullying => "Bullying",
            Label::NonBullying => "Non-bullying",
        }
    }

    /// Accepts `Bullying` / `Non-bullying` in any case, with `-`, `_` or a
    /// space (or nothing) between "non" and "bullying".
    pub fn parse(s: &str) -> Option<Label> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "bullying" => Some(Label::Bullying),
            "nonbullying" => Some(Label::NonBullying),
            _ => None,
        }
    }

    pub fn other(self) -> Label {
        Label::from_id(1 - self.id())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One annotated Instagram comment with the six source attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CommentRecord {
    pub index: u64,
    pub commenter_handle: String,
    pub text: String,
    pub label: Label,
    /// Kept as the source string; dates never feed a model.
    pub posted_date: String,
    pub target_handle: String,
}

/// True for `YYYY-MM-DD`, optionally followed by a time part.
pub fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() < 10 {
        return false;
    }
    let digits = |r: core::ops::Range<usize>| b[r].iter().all(u8::is_ascii_digit);
    if !(digits(0..4) && b[4] == b'-' && digits(5..7) && b[7] == b'-' && digits(8..10)) {
        return false;
    }
    let month = (b[5] - b'0') * 10 + (b[6] - b'0');
    let day = (b[8] - b'0') * 10 + (b[9] - b'0');
    (1..=12).contains(&month) && (1..=31).contains(&day) && (b.len() == 10 || matches!(b[10], b' ' | b'T'))
}

/// A row as read from disk, before any field is interpreted. Field order is
/// index, commenter, text, label, date, target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    /// 1-based line number in the source file (0 when unknown).
    pub line: usize,
    pub fields: [String; 6],
}

impl From<&CommentRecord> for RawRecord {
    fn from(r: &CommentRecord) -> Self {
        RawRecord {
            line: 0,
            fields: [
                r.index.to_string(),
                r.commenter_handle.clone(),
                r.text.clone(),
                r.label.as_str().to_string(),
                r.posted_date.clone(),
                r.target_handle.clone(),
            ],
        }
    }
}

pub const FIELD_NAMES: [&str; 6] = ["index", "commenter", "text", "label", "date", "target"];

impl RawRecord {
    /// Interprets the row. Errors name the line and the offending value.
    pub fn to_record(&self) -> core::result::Result<CommentRecord, String> {
        let [index, commenter, text, label, date, target] = &self.fields;
        let index = index
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("line {}: invalid index {:?}", self.line, index))?;
        if text.trim().is_empty() {
            return Err(format!("line {}: empty comment text", self.line));
        }
        let label = Label::parse(label)
            .ok_or_else(|| format!("line {}: unknown label {:?}", self.line, label))?;
        Ok(CommentRecord {
            index,
            commenter_handle: commenter.clone(),
            text: text.clone(),
            label,
            posted_date: date.clone(),
            target_handle: target.clone(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub n_records: usize,
    /// Pairs `(i, j)`, `i < j`, of rows whose raw text is identical; `i` is
    /// the first occurrence.
    pub duplicates: Vec<(usize, usize)>,
    /// Rows with at least one empty field.
    pub missing_fields: Vec<usize>,
    /// Rows whose (non-empty) label is neither class.
    pub unknown_labels: Vec<(usize, String)>,
    /// Rows whose date is not `YYYY-MM-DD`. Informational only.
    pub nonstandard_dates: Vec<usize>,
    /// Counts indexed by [`Label::id`].
    pub class_counts: [usize; 2],
    /// Class counts differ by at most one.
    pub balanced: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.duplicates.is_empty() && self.missing_fields.is_empty() && self.unknown_labels.is_empty()
    }
}

/// Checks rows for duplicates (exact raw text), empty fields and bad labels.
/// Indices in the report are positions in `rows`.
pub fn validate_corpus(rows: &[RawRecord]) -> ValidationReport {
    let mut report = ValidationReport {
        n_records: rows.len(),
        ..Default::default()
    };
    let mut first_seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        if row.fields.iter().any(|f| f.trim().is_empty()) {
            report.missing_fields.push(i);
        }
        let text = row.fields[2].as_str();
        if !text.trim().is_empty() {
            match first_seen.get(text) {
                Some(&j) => report.duplicates.push((j, i)),
                None => {
                    first_seen.insert(text, i);
                }
            }
        }
        let label = row.fields[3].trim();
        if !label.is_empty() {
            match Label::parse(label) {
                Some(l) => report.class_counts[l.id()] += 1,
                None => report.unknown_labels.push((i, label.to_string())),
            }
        }
        let date = row.fields[4].trim();
        if !date.is_empty() && !is_iso_date(date) {
            report.nonstandard_dates.push(i);
        }
    }
    let [a, b] = report.class_counts;
    report.balanced = a + b > 0 && a.abs_diff(b) <= 1;
    report
}

/// Which divisor to use for the character-length standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdDevKind {
    /// Divide by N.
    #[default]
    Population,
    /// Divide by N - 1.
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorpusStats {
    pub n_total: usize,
    /// Indexed by [`Label::id`].
    pub n_per_class: [usize; 2],
    pub char_len_min: usize,
    pub char_len_max: usize,
    pub char_len_median: f64,
    pub char_len_mean: f64,
    pub char_len_stddev: f64,
    /// Mean whitespace-token count of the raw text, indexed by
    /// [`Label::id`]; zero for an absent class.
    pub avg_words_per_class: [f64; 2],
}

impl CorpusStats {
    pub fn count(&self, label: Label) -> usize {
        self.n_per_class[label.id()]
    }

    pub fn avg_words(&self, label: Label) -> f64 {
        self.avg_words_per_class[label.id()]
    }
}

/// Descriptive statistics on the raw comment text (characters are Unicode
/// scalar values).
pub fn compute_stats(records: &[CommentRecord], kind: StdDevKind) -> Result<CorpusStats> {
    if records.is_empty() {
        return Err(Error::EmptyInput("compute_stats needs at least one record"));
    }
    let mut lens: Vec<usize> = records.iter().map(|r| r.text.chars().count()).collect();
    let as_f64: Vec<f64> = lens.iter().map(|&l| l as f64).collect();
    let mean = math::mean(&as_f64);
    let stddev = math::std_dev(
        &as_f64,
        match kind {
            StdDevKind::Population => 0,
            StdDevKind::Sample => 1,
        },
    );
    lens.sort_unstable();
    let n = lens.len();
    let median = if n % 2 == 1 {
        lens[n / 2] as f64
    } else {
        (lens[n / 2 - 1] + lens[n / 2]) as f64 / 2.0
    };

    let mut n_per_class = [0usize; 2];
    let mut words = [0usize; 2];
    for r in records {
        n_per_class[r.label.id()] += 1;
        words[r.label.id()] += r.text.split_whitespace().count();
    }
    let avg = |c: usize| {
        if n_per_class[c] == 0 {
            0.0
        } else {
            words[c] as f64 / n_per_class[c] as f64
        }
    };
    Ok(CorpusStats {
        n_total: n,
        n_per_class,
        char_len_min: lens[0],
        char_len_max: lens[n - 1],
        char_len_median: median,
        char_len_mean: mean,
        char_len_stddev: stddev,
        avg_words_per_class: [avg(0), avg(1)],
    })
}

/// Fractions for a train/validation/test partition.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            val_fraction: 0.1,
            test_fraction: 0.1,
            seed: 42,
            stratified: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let fr = [self.train_fraction, self.val_fraction, self.test_fraction];
        if fr.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
            return Err(Error::InvalidSplit(format!("fractions must lie in (0, 1), got {fr:?}")));
        }
        let sum: f64 = fr.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSplit(format!("fractions sum to {sum}, expected 1")));
        }
        Ok(())
    }
}

/// Index sets of a three-way partition, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Splits `0..labels.len()` into train/validation/test.
///
/// Partition sizes are `round(N * train)`, `round(N * val)` and the rest.
/// With `stratified`, each class is shuffled separately (class 0 first, one
/// generator for the whole call) and every partition receives its
/// proportional share of each class; fractional shares are settled by
/// largest remainder, ties to the lower class id. Without it, all indices
/// are shuffled together and sliced.
pub fn stratified_split(labels: &[Label], spec: &SplitSpec) -> Result<Split> {
    spec.validate()?;
    let n = labels.len();
    let n_train = libm::round(n as f64 * spec.train_fraction) as usize;
    let n_val = (libm::round(n as f64 * spec.val_fraction) as usize).min(n - n_train.min(n));
    let n_train = n_train.min(n);
    let mut rng = SeededRng::new(spec.seed);

    let mut split = Split {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    if !spec.stratified {
        let mut idx: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut idx);
        split.train = idx[..n_train].to_vec();
        split.val = idx[n_train..n_train + n_val].to_vec();
        split.test = idx[n_train + n_val..].to_vec();
    } else {
        let mut per_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, l) in labels.iter().enumerate() {
            per_class[l.id()].push(i);
        }
        for members in per_class.iter_mut() {
            rng.shuffle(members);
        }
        let counts = [per_class[0].len(), per_class[1].len()];
        let train_share = apportion(&counts, n_train, n, &[0, 0]);
        let val_share = apportion(&counts, n_val, n, &train_share);
        for c in 0..2 {
            let m = &per_class[c];
            let (a, b) = (train_share[c], train_share[c] + val_share[c]);
            split.train.extend_from_slice(&m[..a]);
            split.val.extend_from_slice(&m[a..b]);
            split.test.extend_from_slice(&m[b..]);
        }
    }
    split.train.sort_unstable();
    split.val.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

/// Largest-remainder apportionment of `target` items across classes in
/// proportion to `counts`, never exceeding what is left after `used`.
fn apportion(counts: &[usize; 2], target: usize, n: usize, used: &[usize; 2]) -> [usize; 2] {
    if n == 0 {
        return [0, 0];
    }
    let mut share = [0usize; 2];
    let mut rem = [0f64; 2];
    for c in 0..2 {
        let q = counts[c] as f64 * target as f64 / n as f64;
        share[c] = (libm::floor(q) as usize).min(counts[c] - used[c]);
        rem[c] = q - libm::floor(q);
    }
    let mut left = target.saturating_sub(share[0] + share[1]);
    let mut order = [0usize, 1];
    if rem[1] > rem[0] {
        order = [1, 0];
    }
    while left > 0 {
        let mut placed = false;
        for &c in &order {
            if left > 0 && share[c] + used[c] < counts[c] {
                share[c] += 1;
                left -= 1;
                placed = true;
            }
        }
        if !placed {
            break;
        }
    }
    share
}

/// One cross-validation fold; both index lists sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// K-fold partition of `0..labels.len()`.
///
/// Indices are shuffled (per class when `stratified`, class 0 first) and
/// dealt round-robin into folds; the dealing position carries over from one
/// class to the next, so fold sizes differ by at most one overall and within
/// each class.
pub fn kfold_split(labels: &[Label], k: usize, seed: u64, stratified: bool) -> Result<Vec<Fold>> {
    let n = labels.len();
    if k < 2 {
        return Err(Error::InvalidSplit(format!("k must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidSplit(format!("k = {k} exceeds the number of records ({n})")));
    }
    let mut rng = SeededRng::new(seed);
    let order: Vec<usize> = if stratified {
        let mut per_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, l) in labels.iter().enumerate() {
            per_class[l.id()].push(i);
        }
        for (c, members) in per_class.iter().enumerate() {
            if !members.is_empty() && members.len() < k {
                return Err(Error::InvalidSplit(format!(
                    "class {} has {} records, fewer than k = {k}",
                    Label::from_id(c),
                    members.len()
                )));
            }
        }
        let mut all = Vec::with_capacity(n);
        for mut members in per_class {
            rng.shuffle(&mut members);
            all.extend(members);
        }
        all
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut idx);
        idx
    };

    let mut assignment = alloc::vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % k;
    }
    Ok((0..k)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| assignment[i] == f);
            Fold { train, test }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rec(i: u64, text: &str, label: Label) -> CommentRecord {
        CommentRecord {
            index: i,
            commenter_handle: "user".into(),
            text: text.into(),
            label,
            posted_date: "2024-01-05".into(),
            target_handle: "artist".into(),
        }
    }

    fn balanced(n: usize) -> Vec<Label> {
        (0..n).map(|i| Label::from_id(i % 2)).collect()
    }

    #[test]
    fn label_parsing() {
        assert_eq!(Label::parse("Bullying"), Some(Label::Bullying));
        assert_eq!(Label::parse("Non-bullying"), Some(Label::NonBullying));
        assert_eq!(Label::parse(" non_Bullying "), Some(Label::NonBullying));
        assert_eq!(Label::parse("spam"), None);
        assert_eq!(Label::parse(""), None);
    }

    #[test]
    fn raw_row_maps_fields() {
        let raw = RawRecord {
            line: 2,
            fields: ["1", "userA", "dasar jelek banget", "Bullying", "2024-01-05", "artistX"].map(String::from),
        };
        let r = raw.to_record().unwrap();
        assert_eq!(r.label, Label::Bullying);
        assert_eq!(r.text, "dasar jelek banget");
        assert_eq!(r.target_handle, "artistX");

        let bad = RawRecord {
            line: 3,
            fields: ["1", "u", "x", "Maybe", "2024-01-05", "t"].map(String::from),
        };
        let err = bad.to_record().unwrap_err();
        assert!(err.contains("Maybe") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn validation_finds_duplicates_and_missing() {
        let mut rows: Vec<RawRecord> = vec![
            rec(1, "sama", Label::Bullying),
            rec(2, "beda", Label::NonBullying),
            rec(3, "sama", Label::NonBullying),
        ]
        .iter()
        .map(RawRecord::from)
        .collect();
        rows[1].fields[3] = String::new();
        let report = validate_corpus(&rows);
        assert_eq!(report.duplicates, vec![(0, 2)]);
        assert_eq!(report.missing_fields, vec![1]);
        assert_eq!(report.class_counts, [1, 1]);
        assert!(!report.is_clean());
    }

    #[test]
    fn validation_case_sensitive_duplicates() {
        let rows: Vec<RawRecord> = [rec(1, "Sama", Label::Bullying), rec(2, "sama", Label::Bullying)]
            .iter()
            .map(RawRecord::from)
            .collect();
        assert!(validate_corpus(&rows).duplicates.is_empty());
    }

    #[test]
    fn balanced_325_each() {
        let rows: Vec<RawRecord> = (0..650)
            .map(|i| RawRecord::from(&rec(i as u64, &format!("teks {i}"), Label::from_id(i % 2))))
            .collect();
        let report = validate_corpus(&rows);
        assert_eq!(report.class_counts, [325, 325]);
        assert!(report.balanced);
        assert!(report.is_clean());
    }

    #[test]
    fn stats_hand_example() {
        let records = [rec(1, "ab cd", Label::Bullying), rec(2, "abcdef", Label::NonBullying)];
        let s = compute_stats(&records, StdDevKind::Population).unwrap();
        assert_eq!(s.char_len_mean, 5.5);
        assert_eq!(s.char_len_median, 5.5);
        assert_eq!((s.char_len_min, s.char_len_max), (5, 6));
        assert_eq!(s.char_len_stddev, 0.5);
        assert_eq!(s.avg_words_per_class, [2.0, 1.0]);
        let sample = compute_stats(&records, StdDevKind::Sample).unwrap();
        assert!((sample.char_len_stddev - libm::sqrt(0.5)).abs() < 1e-12);
    }

    #[test]
    fn stats_single_record() {
        let s = compute_stats(&[rec(1, "halo kak", Label::Bullying)], StdDevKind::Population).unwrap();
        assert_eq!(s.char_len_stddev, 0.0);
        assert_eq!(s.n_total, 1);
        assert_eq!(s.avg_words(Label::NonBullying), 0.0);
        assert!(compute_stats(&[], StdDevKind::Population).is_err());
    }

    #[test]
    fn split_650_balanced() {
        let labels = balanced(650);
        let s = stratified_split(&labels, &SplitSpec::default()).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (520, 65, 65));
        for part in [&s.train, &s.val, &s.test] {
            let bullying = part.iter().filter(|&&i| labels[i] == Label::Bullying).count();
            let expected = part.len() as f64 / 2.0;
            assert!((bullying as f64 - expected).abs() <= 1.0);
        }
        assert_eq!(s, stratified_split(&labels, &SplitSpec::default()).unwrap());
    }

    #[test]
    fn split_ten_records() {
        let s = stratified_split(&balanced(10), &SplitSpec::default()).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (8, 1, 1));
        let s = stratified_split(&balanced(10), &SplitSpec { stratified: false, ..Default::default() }).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (8, 1, 1));
    }

    #[test]
    fn split_rejects_bad_fractions() {
        let spec = SplitSpec {
            train_fraction: 0.7,
            ..Default::default()
        };
        assert!(stratified_split(&balanced(10), &spec).is_err());
        let spec = SplitSpec {
            train_fraction: 1.0,
            val_fraction: 0.0,
            test_fraction: 0.0,
            ..Default::default()
        };
        assert!(stratified_split(&balanced(10), &spec).is_err());
    }

    #[test]
    fn kfold_partition() {
        let folds = kfold_split(&balanced(10), 5, 42, false).unwrap();
        assert_eq!(folds.len(), 5);
        let mut seen = vec![0; 10];
        for f in &folds {
            assert_eq!(f.test.len(), 2);
            assert_eq!(f.train.len(), 8);
            for &i in &f.test {
                seen[i] += 1;
                assert!(!f.train.contains(&i));
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn kfold_stratified_two_per_class() {
        let labels = balanced(20);
        for f in kfold_split(&labels, 5, 42, true).unwrap() {
            let b = f.test.iter().filter(|&&i| labels[i] == Label::Bullying).count();
            assert_eq!((b, f.test.len() - b), (2, 2));
        }
    }

    #[test]
    fn kfold_errors() {
        assert!(kfold_split(&balanced(10), 11, 42, false).is_err());
        assert!(kfold_split(&balanced(10), 1, 42, false).is_err());
        let skewed = [vec![Label::Bullying; 9], vec![Label::NonBullying; 2]].concat();
        assert!(kfold_split(&skewed, 3, 42, true).is_err());
    }

    #[test]
    fn iso_dates() {
        assert!(is_iso_date("2024-01-05"));
        assert!(is_iso_date("2024-01-05 10:22:01"));
        assert!(!is_iso_date("05/01/2024"));
        assert!(!is_iso_date("2024-13-05"));
    }
}
