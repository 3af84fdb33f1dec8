//! Plain-text and JSON renderings for command output.

use std::fmt::Write as _;
use std::path::Path;

use rundung_core::corpus::{CorpusStats, ValidationReport};
use rundung_core::eval::{ConfusionMatrix, MetricsReport};
use rundung_core::linear::GridSearchResult;
use rundung_core::Label;
use serde::Serialize;

use crate::error::{AppError, AppResult};

fn list<T: std::fmt::Debug>(xs: &[T]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        format!("{} {xs:?}", xs.len())
    }
}

pub fn stats_text(stats: Option<&CorpusStats>, v: &ValidationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "records: {}", v.n_records);
    for l in [Label::Bullying, Label::NonBullying] {
        let _ = writeln!(s, "{l}: {}", v.class_counts[l.id()]);
    }
    let _ = writeln!(s, "balanced: {}", if v.balanced { "yes" } else { "no" });
    if let Some(st) = stats {
        let _ = writeln!(
            s,
            "chars: min {} max {} median {:.1} mean {:.2} stddev {:.2}",
            st.char_len_min, st.char_len_max, st.char_len_median, st.char_len_mean, st.char_len_stddev
        );
        for l in [Label::Bullying, Label::NonBullying] {
            let _ = writeln!(s, "avg words {l}: {:.2}", st.avg_words(l));
        }
    }
    // row numbers are 1-based data lines
    let dups: Vec<(usize, usize)> = v.duplicates.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    let missing: Vec<usize> = v.missing_fields.iter().map(|i| i + 1).collect();
    let unknown: Vec<(usize, &str)> = v.unknown_labels.iter().map(|(i, l)| (i + 1, l.as_str())).collect();
    let dates: Vec<usize> = v.nonstandard_dates.iter().map(|i| i + 1).collect();
    let _ = writeln!(s, "duplicates: {}", list(&dups));
    let _ = writeln!(s, "missing fields: {}", list(&missing));
    let _ = writeln!(s, "unknown labels: {}", list(&unknown));
    let _ = writeln!(s, "nonstandard dates: {}", list(&dates));
    let _ = writeln!(s, "valid: {}", if v.is_clean() { "yes" } else { "no" });
    s
}

pub fn grid_text(r: &GridSearchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<36} {:>8}  folds", "#", "params", r.objective.name());
    for (i, c) in r.per_candidate.iter().enumerate() {
        let folds: Vec<String> = c.fold_scores.iter().map(|f| format!("{f:.4}")).collect();
        let mark = if i == r.best_index { "*" } else { " " };
        let _ = writeln!(s, "{:<3}{mark} {:<36} {:>8.4}  {}", i + 1, c.params.to_string(), c.mean_score, folds.join(" "));
    }
    s
}

pub fn metrics_text(family: &str, cm: &ConfusionMatrix, m: &MetricsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {family}");
    let _ = writeln!(s, "records: {}", cm.total());
    let _ = writeln!(s, "{:<14} {:>9} {:>9} {:>9} {:>8}", "class", "precision", "recall", "f1", "support");
    for l in [Label::Bullying, Label::NonBullying] {
        let i = l.id();
        let _ = writeln!(s, "{:<14} {:>9.4} {:>9.4} {:>9.4} {:>8}", l.as_str(), m.precision[i], m.recall[i], m.f1[i], m.support[i]);
    }
    let _ = writeln!(s, "{:<14} {:>9.4} {:>9.4} {:>9.4}", "macro", m.macro_precision, m.macro_recall, m.macro_f1);
    let _ = writeln!(s, "{:<14} {:>9.4} {:>9.4} {:>9.4}", "weighted", m.weighted_precision, m.weighted_recall, m.weighted_f1);
    let _ = writeln!(s, "accuracy: {:.4}", m.accuracy);
    // rows are the true label, columns the predicted one
    let c = &cm.counts;
    let _ = writeln!(s, "confusion: [[{}, {}], [{}, {}]]", c[0][0], c[0][1], c[1][0], c[1][1]);
    s
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> AppResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| AppError::Format(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| AppError::io(path, e))
}
