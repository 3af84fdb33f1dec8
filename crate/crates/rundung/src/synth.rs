//! Seeded generator for a small synthetic comment corpus in the source
//! format. Bullying comments always contain an insult from a fixed list and
//! non-bullying ones never do, so the classes are separable by keyword, but
//! both share particles, intensifiers, slang spellings, mentions, emoji and
//! elongations so the preprocessing stages have work to do.

use std::collections::BTreeSet;

use rundung_core::rng::SeededRng;
use rundung_core::{CommentRecord, Label};

const INSULTS: &[&str] = &[
    "bodoh", "jelek", "goblok", "tolol", "norak", "alay", "sampah", "munafik", "bego", "lebay", "kampungan", "dekil", "sombong",
    "menjijikkan",
];
const PRAISE: &[&str] = &[
    "cantik", "keren", "bagus", "mantap", "hebat", "lucu", "ramah", "kece", "manis", "berbakat", "inspiratif", "sukses", "rapi",
    "indah",
];
const SUBJECTS: &[&str] = &["kamu", "lo", "lu", "km", "dia", "situ", "kakak"];
const INTENSIFIERS: &[&str] = &["bgt", "banget", "bngt", "sekali", "amat", "parah"];
const PARTICLES: &[&str] = &["sih", "deh", "dong", "kok", "ya", "nih"];
const LAUGHS: &[&str] = &["wkwk", "wkwkwk", "haha", "hahaha"];
const EMOJI_BAD: &[&str] = &["🤮", "😡", "🙄", "😂", "💩"];
const EMOJI_GOOD: &[&str] = &["😍", "🔥", "🙏", "👏", "❤️", "✨"];
const THINGS: &[&str] = &["foto", "video", "suara", "lagu", "gaya", "konten", "outfit", "senyum"];
const WISHES: &[&str] = &["sehat selalu", "makin sukses", "lancar terus", "bahagia selalu", "dimudahkan semua urusannya"];
const GO_AWAY: &[&str] = &[
    "mending ga usah tampil",
    "pergi aja sana",
    "ga usah sok cantik",
    "malu maluin aja",
    "gak pantes jadi artis",
    "bikin sakit mata",
];
const TARGETS: &[&str] = &["ayutingting92", "raffinagita1717", "lambe_turah", "rachelvennya", "awkarin", "jessicaiskandar"];
const SYLLABLES: &[&str] = &["ra", "di", "ku", "sa", "to", "ni", "ma", "yu", "an", "ta", "ri", "lo", "wi", "na", "be", "gu"];

fn pick<'a>(rng: &mut SeededRng, xs: &[&'a str]) -> &'a str {
    xs[rng.below(xs.len() as u64) as usize]
}

fn chance(rng: &mut SeededRng, p: f64) -> bool {
    rng.next_f64() < p
}

/// Repeats the last letter a few times ("jelek" -> "jelekkk").
fn elongate(rng: &mut SeededRng, word: &str) -> String {
    let last = word.chars().last().unwrap_or('a');
    let extra = 2 + rng.below(3) as usize;
    format!("{word}{}", last.to_string().repeat(extra))
}

fn handle(rng: &mut SeededRng) -> String {
    let n = 2 + rng.below(2) as usize;
    let mut h: String = (0..n).map(|_| pick(rng, SYLLABLES)).collect();
    if chance(rng, 0.5) {
        h.push('_');
    }
    h.push_str(&rng.below(100).to_string());
    h
}

fn date(rng: &mut SeededRng) -> String {
    const DAYS: [u64; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    let mut d = rng.below(365);
    let mut m = 0;
    while d >= DAYS[m] {
        d -= DAYS[m];
        m += 1;
    }
    format!("2023-{:02}-{:02}", m + 1, d + 1)
}

fn decorate(rng: &mut SeededRng, mut text: String, emoji: &[&str]) -> String {
    if chance(rng, 0.35) {
        text = format!("@{} {text}", handle(rng));
    }
    if chance(rng, 0.4) {
        text.push(' ');
        text.push_str(pick(rng, emoji));
    }
    if chance(rng, 0.3) {
        text.push_str(["!!", "!", "...", "?"][rng.below(4) as usize]);
    }
    if chance(rng, 0.2) {
        text = capitalize(&text);
    }
    if chance(rng, 0.05) {
        text.push_str(" #");
        text.push_str(pick(rng, TARGETS));
    }
    text
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn bullying(rng: &mut SeededRng) -> String {
    let insult = pick(rng, INSULTS);
    let insult = if chance(rng, 0.25) { elongate(rng, insult) } else { insult.to_string() };
    let s = match rng.below(6) {
        0 => format!("{} {insult} {} {}", pick(rng, SUBJECTS), pick(rng, INTENSIFIERS), pick(rng, PARTICLES)),
        1 => format!("dasar {insult} {}", pick(rng, INSULTS)),
        2 => format!("{} tuh {insult} {}, {}", pick(rng, SUBJECTS), pick(rng, INTENSIFIERS), pick(rng, GO_AWAY)),
        3 => format!("muka {insult} gitu {} {}", pick(rng, PARTICLES), pick(rng, LAUGHS)),
        4 => format!("{} {} {insult}, {}", pick(rng, THINGS), pick(rng, SUBJECTS), pick(rng, GO_AWAY)),
        _ => format!("{} orang {insult} kayak {} {}", pick(rng, LAUGHS), pick(rng, SUBJECTS), pick(rng, PARTICLES)),
    };
    decorate(rng, s, EMOJI_BAD)
}

fn friendly(rng: &mut SeededRng) -> String {
    let praise = pick(rng, PRAISE);
    let praise = if chance(rng, 0.25) { elongate(rng, praise) } else { praise.to_string() };
    let s = match rng.below(6) {
        0 => format!("{praise} {} kak {}", pick(rng, INTENSIFIERS), pick(rng, PARTICLES)),
        1 => format!("semoga {} ya kak, {praise}", pick(rng, WISHES)),
        2 => format!("suka {}nya, {praise} {}", pick(rng, THINGS), pick(rng, INTENSIFIERS)),
        3 => format!("ditunggu {} {praise} berikutnya {}", pick(rng, THINGS), pick(rng, PARTICLES)),
        4 => format!("{} {praise} {} {}", pick(rng, SUBJECTS), pick(rng, INTENSIFIERS), pick(rng, LAUGHS)),
        _ => format!("makasih kak {}nya {praise}, {}", pick(rng, THINGS), pick(rng, WISHES)),
    };
    decorate(rng, s, EMOJI_GOOD)
}

/// `n` records, half of each class (bullying gets the odd one), in shuffled
/// order with distinct texts and indices `1..=n`.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<CommentRecord> {
    let mut rng = SeededRng::new(seed);
    let mut labels: Vec<Label> = (0..n).map(|i| if i < n.div_ceil(2) { Label::Bullying } else { Label::NonBullying }).collect();
    rng.shuffle(&mut labels);
    let mut seen = BTreeSet::new();
    labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let text = loop {
                let t = match label {
                    Label::Bullying => bullying(&mut rng),
                    Label::NonBullying => friendly(&mut rng),
                };
                if seen.insert(t.clone()) {
                    break t;
                }
            };
            CommentRecord {
                index: i as u64 + 1,
                commenter_handle: handle(&mut rng),
                text,
                label,
                posted_date: date(&mut rng),
                target_handle: pick(&mut rng, TARGETS).to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_unique_and_deterministic() {
        let c = synthetic_corpus(200, 42);
        assert_eq!(c.len(), 200);
        assert_eq!(c.iter().filter(|r| r.label == Label::Bullying).count(), 100);
        let texts: BTreeSet<&str> = c.iter().map(|r| r.text.as_str()).collect();
        assert_eq!(texts.len(), 200);
        assert_eq!(c, synthetic_corpus(200, 42));
        assert_ne!(c, synthetic_corpus(200, 43));
        assert!(c.iter().all(|r| rundung_core::corpus::is_iso_date(&r.posted_date)));
    }

    #[test]
    fn keyword_separable() {
        for r in synthetic_corpus(200, 42) {
            let lower = r.text.to_lowercase();
            let has_insult = INSULTS.iter().any(|w| lower.contains(w));
            assert_eq!(has_insult, r.label == Label::Bullying, "{}", r.text);
        }
    }
}
