//! Character-level stages: case folding, cleaning, elongation collapse and
//! whitespace tokenization.

use alloc::string::String;
use alloc::vec::Vec;

/// Unicode lowercasing.
pub fn case_fold(text: &str) -> String {
    text.to_lowercase()
}

fn starts_url(rest: &str) -> bool {
    rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.")
}

fn is_handle_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

/// Removes URLs, `@mentions` and `#hashtags`, then turns every character
/// outside `a-z` and space into a space, collapses space runs and trims.
///
/// URLs (`http://`, `https://`, `www.`) run to the next whitespace. A
/// mention or hashtag is the marker plus the following run of letters,
/// digits, `_` and `.`.
pub fn clean(text: &str) -> String {
    let mut stripped = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if starts_url(rest) {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            rest = &rest[end..];
            stripped.push(' ');
        } else if c == '@' || c == '#' {
            let body = &rest[1..];
            let end = body.find(|ch: char| !is_handle_char(ch)).unwrap_or(body.len());
            rest = &body[end..];
            stripped.push(' ');
        } else {
            stripped.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }

    let mut out = String::with_capacity(stripped.len());
    for c in stripped.chars() {
        let c = if c.is_ascii_lowercase() { c } else { ' ' };
        if c == ' ' && (out.is_empty() || out.ends_with(' ')) {
            continue;
        }
        out.push(c);
    }
    if out.ends_with(' ') {
        out.pop();
    }
    out
}

/// Collapses every run of at least `threshold` identical letters to a
/// single letter. Shorter runs are kept, so `maaf` survives with the
/// default threshold of 3.
pub fn collapse_elongation(word: &str, threshold: usize) -> String {
    let threshold = threshold.max(2);
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::with_capacity(word.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let run = j - i;
        if run >= threshold && c.is_alphabetic() {
            out.push(c);
        } else {
            out.extend(core::iter::repeat_n(c, run));
        }
        i = j;
    }
    out
}

/// Splits on runs of whitespace; never yields empty tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(String::from).collect()
}
