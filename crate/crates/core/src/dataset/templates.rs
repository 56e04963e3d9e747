//! Prompt templates and slot rendering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::teachers::{Fact, FactKind, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Style {
    T0,
    T1,
    T2,
}

pub const STYLES: [Style; 3] = [Style::T0, Style::T1, Style::T2];

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::T0 => "T0",
            Style::T1 => "T1",
            Style::T2 => "T2",
        })
    }
}

impl FromStr for Style {
    type Err = DatasetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T0" => Ok(Style::T0),
            "T1" => Ok(Style::T1),
            "T2" => Ok(Style::T2),
            _ => Err(DatasetError::UnknownStyle(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub task_id: &'static str,
    pub text: &'static str,
    pub style: Style,
}

const fn t(task_id: &'static str, style: Style, text: &'static str) -> PromptTemplate {
    PromptTemplate { task_id, text, style }
}

use Style::{T0, T1, T2};

pub const TEMPLATES: &[PromptTemplate] = &[
    t("FG", T0, "The molecule contains [FG]."),
    t("2FG", T0, "The molecule contains [FG1],[FG2]."),
    t("FG+LogP", T0, "The molecule contains [FG], its LogP is [VALUE]"),
    t("FG+QED", T0, "The molecule contains [FG], it has a high qed score."),
    t("FG+SA", T0, "The molecule contains [FG], it has good synthetic accessibility."),
    t("FG+DRD2", T0, "The molecule contains [FG], it can bind to DRD2."),
    t("FG+GSK3", T0, "The molecule contains [FG], it can bind to GSK3."),
    t("FG+BBB", T0, "The molecule contains [FG], it can pass through the blood-brain barrier."),
    t("FG+HIA", T0, "The molecule contains [FG], it can be absorbed by the human intestinal tract."),
    t("FG+DRD2+QED", T0, "The molecule contains [FG], it has a high qed score and can bind to DRD2"),
    t("FG+GSK3+QED", T0, "The molecule contains [FG], it has a high qed score and can bind to GSK3"),
    t(
        "FG+BBB+QED",
        T0,
        "The molecule contains [FG], it has a high qed score and can pass through the blood-brain barrier.",
    ),
    t(
        "FG+HIA+QED",
        T0,
        "The molecule contains [FG], it has a high qed score and can be absorbed by the human intestinal tract.",
    ),
    t(
        "FG+DRD2+QED+SAs",
        T0,
        "The molecule contains [FG], it has a high qed score, good synthetic accessibility, and can bind to DRD2",
    ),
    t(
        "FG+GSK3+QED+SAs",
        T0,
        "The molecule contains [FG], it has a high qed score, good synthetic accessibility, and can bind to GSK3",
    ),
    t(
        "FG+BBB+QED+SAs",
        T0,
        "The molecule contains [FG], it has a high qed score, good synthetic accessibility, and can pass through the blood-brain barrier.",
    ),
    t(
        "FG+HIA+QED+SAs",
        T0,
        "The molecule contains [FG], it has a high qed score, good synthetic accessibility, and can be absorbed by the human intestinal.",
    ),
    t("BTK", T0, "The molecule can bind to BTK."),
    t("FGFR4", T0, "The molecule can bind to FGFR4"),
    t("KPCD3", T0, "The molecule can bind to KPCD3."),
    t("3CL", T0, "The molecule can bind to 3CL."),
    t("FG+DRD2", T1, "I want a molecule that contains [FG] and can bind to DRD2."),
    t("FG+DRD2", T2, "Give me a molecule which contains [FG] and can bind to DRD2."),
    t("FG+GSK3", T1, "I want a molecule that contains [FG] and can bind to GSK3."),
    t("FG+GSK3", T2, "Give me a molecule which contains [FG] and can bind to GSK3."),
    t("FG+BBB", T1, "I want a molecule that contains [FG] and can pass through the blood-brain barrier."),
    t("FG+BBB", T2, "Give me a molecule which contains [FG] and can pass through the blood-brain barrier."),
    t("FG+HIA", T1, "I want a molecule that contains [FG] and can be absorbed by human intestinal"),
    t("FG+HIA", T2, "Give me a molecule which contains [FG] and can be absorbed by human intestinal."),
];

pub fn template(task_id: &str, style: Style) -> Option<&'static PromptTemplate> {
    TEMPLATES.iter().find(|t| t.task_id == task_id && t.style == style)
}

pub fn task_ids() -> Vec<&'static str> {
    let mut v: Vec<&str> = Vec::new();
    for t in TEMPLATES {
        if !v.contains(&t.task_id) {
            v.push(t.task_id);
        }
    }
    v
}

pub fn styles_for(task_id: &str) -> Vec<Style> {
    TEMPLATES.iter().filter(|t| t.task_id == task_id).map(|t| t.style).collect()
}

/// Sorted slot multiset a task expects: `2FG` is two FG slots, `SA`/`SAs` the
/// SA slot, any other component a named target or flag.
pub fn task_signature(task_id: &str) -> Vec<Slot> {
    let mut v = Vec::new();
    for part in task_id.split('+') {
        match part {
            "FG" => v.push(Slot::FunctionalGroup),
            "2FG" => v.extend([Slot::FunctionalGroup, Slot::FunctionalGroup]),
            "LogP" => v.push(Slot::LogP),
            "QED" => v.push(Slot::Qed),
            "SA" | "SAs" => v.push(Slot::Sa),
            other => v.push(Slot::Named(other.to_ascii_uppercase())),
        }
    }
    v.sort();
    v
}

/// The unique task whose signature equals the slots of `facts`.
pub fn route(facts: &[Fact]) -> Option<&'static str> {
    let mut sig: Vec<Slot> = facts.iter().map(|f| f.slot()).collect();
    sig.sort();
    task_ids().into_iter().find(|t| task_signature(t) == sig)
}

/// One decimal place, without a negative zero.
pub fn format_value(v: f64) -> String {
    let s = format!("{v:.1}");
    if s == "-0.0" {
        "0.0".to_string()
    } else {
        s
    }
}

pub fn render_template(task_id: &str, style: Style, facts: &[Fact]) -> Result<String, DatasetError> {
    let tpl = template(task_id, style).ok_or_else(|| DatasetError::UnknownTask {
        task: task_id.to_string(),
        style,
    })?;
    let fgs: Vec<String> = facts
        .iter()
        .filter_map(|f| f.functional_group())
        .map(|n| n.to_lowercase())
        .collect();
    let value = facts.iter().find_map(|f| match f.kind {
        FactKind::LogP { value } => Some(value),
        _ => None,
    });
    let missing = |slot: &str| DatasetError::MissingSlotFact {
        task: task_id.to_string(),
        slot: slot.to_string(),
    };
    let mut text = tpl.text.to_string();
    if text.contains("[FG1]") || text.contains("[FG2]") {
        let (a, b) = match fgs.as_slice() {
            [a, b, ..] => (a, b),
            _ => return Err(missing("[FG2]")),
        };
        text = text.replace("[FG1]", a).replace("[FG2]", b);
    }
    if text.contains("[FG]") {
        let fg = fgs.first().ok_or_else(|| missing("[FG]"))?;
        text = text.replace("[FG]", fg);
    }
    if text.contains("[VALUE]") {
        let v = value.ok_or_else(|| missing("[VALUE]"))?;
        text = text.replace("[VALUE]", &format_value(v));
    }
    Ok(text)
}

/// Exact-match lookup of a free-text prompt: the task and style whose
/// template, with slots as wildcards, matches the whole prompt. When several
/// match (a wildcard can swallow `a,b` or a literal tail), the one with the
/// most literal text wins.
pub fn match_prompt(prompt: &str) -> Option<(&'static str, Style)> {
    fn matches(tpl: &str, text: &str) -> bool {
        let Some(start) = tpl.find('[') else {
            return tpl == text;
        };
        let end = start + tpl[start..].find(']').unwrap() + 1;
        let (lit, rest) = (&tpl[..start], &tpl[end..]);
        let Some(text) = text.strip_prefix(lit) else {
            return false;
        };
        (1..=text.len())
            .filter(|&k| text.is_char_boundary(k))
            .any(|k| matches(rest, &text[k..]))
    }
    fn literal_len(tpl: &str) -> usize {
        tpl.split('[').map(|p| p.split_once(']').map_or(p, |x| x.1).len()).sum()
    }
    let mut best: Option<&PromptTemplate> = None;
    for t in TEMPLATES.iter().filter(|t| matches(t.text, prompt)) {
        if best.map_or(true, |b| literal_len(t.text) > literal_len(b.text)) {
            best = Some(t);
        }
    }
    best.map(|t| (t.task_id, t.style))
}
