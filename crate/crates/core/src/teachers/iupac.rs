//! Rule-based dissection of IUPAC names into functional-group tokens.
//!
//! Rules, applied left to right:
//! 1. parentheses, substituent brackets, hyphens and spaces separate words;
//!    fusion and von Baeyer descriptors (`[d]`, `[1,3]`, `[2.2.1]`) stay inside
//!    their word;
//! 2. words made only of locants or stereo descriptors are dropped, as are the
//!    bare multipliers `bis`, `tris`, `tetrakis`;
//! 3. a `di`/`tri`/`tetra`/`penta`/`hexa` head is stripped from substituent words;
//! 4. a suffix word following `parent-locant-` (`…an-2-ol`, `…in-1-yl`) is
//!    merged into its parent, as is a trailing `acid`.

/// Role of one span of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanKind {
    Fragment,
    /// Merged into the previous fragment.
    Suffix,
    Locant,
    /// Stripped multiplier, either a whole word or a word head.
    Multiplier,
    Separator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub kind: SpanKind,
    pub text: String,
}

const SEPARATORS: &[char] = &['(', ')', '[', ']', '{', '}', '-', ' '];
const MULTIPLIERS: &[&str] = &["tetra", "penta", "hexa", "tri", "di"];
const WORD_MULTIPLIERS: &[&str] = &["bis", "tris", "tetrakis", "pentakis", "hexakis"];
const STEREO_WORDS: &[&str] = &["rac", "rel", "cis", "trans", "endo", "exo", "meso", "abs"];
const JOINED_MODIFIERS: &[&str] = &["tert", "sec", "iso", "neo"];
const SUBSTITUENT_STEMS: &[&str] = &[
    "methyl", "ethyl", "propyl", "butyl", "pentyl", "hexyl", "phenyl", "benzyl", "chloro", "fluoro", "bromo",
    "iodo", "hydroxy", "methoxy", "ethoxy", "amino", "nitro", "oxo", "hydro", "cyano", "sulfanyl", "carbonyl",
    "sulfonyl", "acetyl", "vinyl", "allyl", "formyl", "carboxy",
];
const SUBSTITUENT_ENDINGS: &[&str] = &["yl", "o", "oxy", "ylidene"];
const SUFFIXES: &[&str] = &[
    "ol", "one", "al", "an", "en", "yn", "in", "amine", "amide", "imine", "oic", "ene", "yne", "ium", "ide",
    "nitrile", "carbonitrile", "carboxamide", "carboxylic", "carbaldehyde", "carboxylate", "carbothioamide",
    "sulfonamide", "sulfonic", "sulfonate", "thiol", "thione", "oate", "olate", "ate", "imidamide", "hydrazide",
    "ylidene", "aminium", "olide", "amidine",
];

fn is_locant_item(item: &str) -> bool {
    let s = item.trim_end_matches(['\'', '*']);
    if s.is_empty() {
        return false;
    }
    if STEREO_WORDS.contains(&s) {
        return true;
    }
    let digits = s.chars().take_while(|c| c.is_ascii_digit()).count();
    let rest = &s[digits..];
    if digits > 0 {
        // 4a, 1H, 2R, 10b
        return rest.is_empty()
            || (rest.chars().count() == 1 && rest.chars().all(|c| c.is_ascii_alphabetic()))
            || rest == "RS"
            || rest == "SR";
    }
    // N, N1, O2, RS
    let mut chars = rest.chars();
    let first = chars.next().unwrap();
    let tail: String = chars.collect();
    matches!(first, 'N' | 'O' | 'S' | 'P' | 'H' | 'R' | 'E' | 'Z' | 'C' | 'B' | 'X')
        && (tail.chars().all(|c| c.is_ascii_digit()) || tail == "S")
}

fn is_locant_word(word: &str) -> bool {
    !word.is_empty() && word.split(',').all(is_locant_item)
}

/// Fusion locants (`d`, `1,3`, `4,3-a`) and ring descriptors (`2.2.1`).
fn is_fusion_content(inner: &str) -> bool {
    !inner.is_empty()
        && inner.len() <= 12
        && inner
            .chars()
            .all(|c| c.is_ascii_digit() || c.is_ascii_lowercase() || matches!(c, ',' | '.' | '-' | '\'' | '~'))
        && !inner
            .as_bytes()
            .windows(2)
            .any(|w| w[0].is_ascii_lowercase() && w[1].is_ascii_lowercase())
}

fn split_multiplier(word: &str) -> (&str, &str) {
    for m in MULTIPLIERS {
        if let Some(rest) = word.strip_prefix(m) {
            return (m, rest);
        }
    }
    ("", word)
}

fn strip_multiplier(word: &str) -> (&str, &str) {
    let (m, rest) = split_multiplier(word);
    if m.is_empty() || rest.len() < 3 {
        return ("", word);
    }
    let stem = SUBSTITUENT_STEMS.iter().any(|s| rest.starts_with(s));
    let ending = !rest.contains('[') && SUBSTITUENT_ENDINGS.iter().any(|e| rest.ends_with(e));
    if stem || ending {
        (m, rest)
    } else {
        ("", word)
    }
}

/// Whether `word` is a concatenation of suffix morphemes (`enoic`, `dione`)
/// or starts with `yl` (`ylmethyl`, `yloxy`).
fn is_suffix_word(word: &str) -> bool {
    fn segments(w: &str) -> bool {
        w.is_empty()
            || SUFFIXES
                .iter()
                .chain(MULTIPLIERS)
                .any(|m| w.strip_prefix(m).is_some_and(segments))
    }
    word.starts_with("yl") || (!MULTIPLIERS.contains(&word) && segments(word) && !word.is_empty())
}

/// Split the input into words and separators, keeping fusion brackets inside
/// words.
fn lex(name: &str) -> Vec<(bool, String)> {
    let chars: Vec<char> = name.chars().collect();
    let mut out: Vec<(bool, String)> = Vec::new();
    let mut word = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '[' {
            if let Some(len) = chars[i + 1..].iter().position(|&d| d == ']') {
                let inner: String = chars[i + 1..i + 1 + len].iter().collect();
                let glued = !word.is_empty()
                    || chars.get(i + len + 2).is_some_and(|d| d.is_alphabetic() || *d == '[');
                if glued && is_fusion_content(&inner) {
                    word.push('[');
                    word.push_str(&inner);
                    word.push(']');
                    i += len + 2;
                    continue;
                }
            }
        }
        if SEPARATORS.contains(&c) {
            if !word.is_empty() {
                out.push((true, std::mem::take(&mut word)));
            }
            out.push((false, c.to_string()));
        } else {
            word.push(c);
        }
        i += 1;
    }
    if !word.is_empty() {
        out.push((true, word));
    }
    out
}

/// Lossless classification of every character of `name`.
pub fn dissect(name: &str) -> Vec<Span> {
    let mut spans: Vec<Span> = Vec::new();
    let span = |kind, text: &str| Span {
        kind,
        text: text.to_string(),
    };
    for (is_word, text) in lex(name) {
        if !is_word {
            spans.push(span(SpanKind::Separator, &text));
            continue;
        }
        if is_locant_word(&text) {
            spans.push(span(SpanKind::Locant, &text));
            continue;
        }
        if WORD_MULTIPLIERS.contains(&text.as_str()) {
            spans.push(span(SpanKind::Multiplier, &text));
            continue;
        }
        if suffix_position(&spans, &text) {
            spans.push(span(SpanKind::Suffix, &text));
            continue;
        }
        let (m, rest) = strip_multiplier(&text);
        if !m.is_empty() {
            spans.push(span(SpanKind::Multiplier, m));
        }
        spans.push(span(SpanKind::Fragment, rest));
    }
    spans
}

/// True when `word` sits in a `parent-locant-suffix` or `parent acid` slot.
fn suffix_position(spans: &[Span], word: &str) -> bool {
    let significant: Vec<&Span> = spans.iter().rev().take(4).collect();
    if word == "acid" {
        return matches!(significant.as_slice(), [sep, prev, ..]
            if sep.text == " " && matches!(prev.kind, SpanKind::Fragment | SpanKind::Suffix));
    }
    if !is_suffix_word(word) {
        return false;
    }
    matches!(significant.as_slice(), [s1, loc, s2, parent, ..]
        if s1.text == "-" && s2.text == "-"
            && loc.kind == SpanKind::Locant
            && matches!(parent.kind, SpanKind::Fragment | SpanKind::Suffix))
}

/// Functional-group tokens of an IUPAC name, in order, duplicates retained.
pub fn iupac_fragments(name: &str) -> Vec<String> {
    let spans = dissect(name);
    let mut out: Vec<String> = Vec::new();
    let mut modifier: Option<String> = None;
    for (k, s) in spans.iter().enumerate() {
        match s.kind {
            SpanKind::Fragment => {
                let joined = JOINED_MODIFIERS.contains(&s.text.as_str())
                    && spans.get(k + 1).is_some_and(|n| n.text == "-")
                    && spans.get(k + 2).is_some_and(|n| n.kind == SpanKind::Fragment);
                if joined {
                    modifier = Some(format!("{}-", s.text));
                } else {
                    out.push(format!("{}{}", modifier.take().unwrap_or_default(), s.text));
                }
            }
            SpanKind::Suffix => {
                let spaced = k > 0 && spans[k - 1].text == " ";
                match out.last_mut() {
                    Some(last) if spaced => {
                        last.push(' ');
                        last.push_str(&s.text);
                    }
                    Some(last) => last.push_str(&s.text),
                    None => out.push(s.text.clone()),
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frags(name: &str) -> Vec<String> {
        iupac_fragments(name)
    }

    #[test]
    fn worked_example() {
        assert_eq!(
            frags("(2-methyl-5-methylsulfonylphenyl)methanamine"),
            ["methyl", "methylsulfonylphenyl", "methanamine"]
        );
        assert_eq!(frags("methane"), ["methane"]);
        assert_eq!(frags("2-methoxybenzamide"), ["methoxybenzamide"]);
    }

    #[test]
    fn suffix_merging() {
        assert_eq!(frags("propane-1,2-diol"), ["propanediol"]);
        assert_eq!(frags("butan-2-one"), ["butanone"]);
        assert_eq!(frags("N-(pyridin-2-ylmethyl)acetamide"), ["pyridinylmethyl", "acetamide"]);
        assert_eq!(frags("2-hydroxybenzoic acid"), ["hydroxybenzoic acid"]);
        assert_eq!(frags("tert-butyl"), ["tert-butyl"]);
    }

    #[test]
    fn fusion_brackets_stay() {
        assert_eq!(frags("1,3-benzodioxol-5-yl"), ["benzodioxolyl"]);
        assert_eq!(frags("bicyclo[2.2.1]heptane"), ["bicyclo[2.2.1]heptane"]);
        assert_eq!(frags("N,N-dimethylformamide"), ["methylformamide"]);
    }

    #[test]
    fn lossless() {
        for name in ["(2-methyl-5-methylsulfonylphenyl)methanamine", "4-[bis(2-chloroethyl)amino]phenol"] {
            let joined: String = dissect(name).iter().map(|s| s.text.as_str()).collect();
            assert_eq!(joined, name);
        }
    }
}
