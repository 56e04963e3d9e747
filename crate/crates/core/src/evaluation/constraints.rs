use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dataset::{task_ids, task_signature};
use crate::descriptors::{crippen_logp, qed, sa_score_with};
use crate::smiles::{parse_smiles, substructure_match, MolGraph};
use crate::teachers::{is_admet_flag, Slot, TeacherSet, QED_HIGH_THRESHOLD, SA_GOOD_THRESHOLD, SCORE_THRESHOLD};

pub const LOGP_MARGIN: f64 = 1.0;
/// Target used by a bare `LogP` constraint.
pub const DEFAULT_LOGP_TARGET: f64 = 1.0;

/// One requirement on a generated molecule. Thresholds are strict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Constraint {
    #[serde(rename = "FG")]
    FunctionalGroup { name: String },
    LogP { target: f64, margin: f64 },
    #[serde(rename = "QEDAbove")]
    QedAbove { threshold: f64 },
    #[serde(rename = "SABelow")]
    SaBelow { threshold: f64 },
    Target { name: String, threshold: f64 },
    Admet { name: String, threshold: f64 },
}

impl Constraint {
    pub fn fg(name: &str) -> Self {
        Constraint::FunctionalGroup {
            name: name.to_lowercase(),
        }
    }

    pub fn logp(target: f64) -> Self {
        Constraint::LogP {
            target,
            margin: LOGP_MARGIN,
        }
    }

    pub fn qed_above() -> Self {
        Constraint::QedAbove {
            threshold: QED_HIGH_THRESHOLD,
        }
    }

    pub fn sa_below() -> Self {
        Constraint::SaBelow {
            threshold: SA_GOOD_THRESHOLD,
        }
    }

    /// A target affinity or, for BBB/HIA, an ADMET flag, at threshold 0.5.
    pub fn named(name: &str) -> Self {
        let name = name.to_ascii_uppercase();
        if is_admet_flag(&name) {
            Constraint::Admet {
                name,
                threshold: SCORE_THRESHOLD,
            }
        } else {
            Constraint::Target {
                name,
                threshold: SCORE_THRESHOLD,
            }
        }
    }

    pub fn slot(&self) -> Slot {
        match self {
            Constraint::FunctionalGroup { .. } => Slot::FunctionalGroup,
            Constraint::LogP { .. } => Slot::LogP,
            Constraint::QedAbove { .. } => Slot::Qed,
            Constraint::SaBelow { .. } => Slot::Sa,
            Constraint::Target { name, .. } | Constraint::Admet { name, .. } => Slot::Named(name.to_ascii_uppercase()),
        }
    }

    fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::InvalidSpec(m));
        match self {
            Constraint::FunctionalGroup { name } if name.is_empty() => bad("empty functional group name".into()),
            Constraint::LogP { margin, target } if !(*margin > 0.0) || !target.is_finite() => {
                bad(format!("LogP margin must be > 0, got {margin}"))
            }
            Constraint::QedAbove { threshold } if !(0.0..=1.0).contains(threshold) => {
                bad(format!("QED threshold {threshold} outside [0, 1]"))
            }
            Constraint::SaBelow { threshold } if !(1.0..=10.0).contains(threshold) => {
                bad(format!("SA threshold {threshold} outside [1, 10]"))
            }
            Constraint::Target { threshold, name } | Constraint::Admet { threshold, name }
                if !(0.0..=1.0).contains(threshold) =>
            {
                bad(format!("{name} threshold {threshold} outside [0, 1]"))
            }
            _ => Ok(()),
        }
    }

    /// Fail early when the teachers cannot check this constraint.
    fn check_context(&self, teachers: &TeacherSet) -> Result<(), EvalError> {
        match self {
            Constraint::FunctionalGroup { name } => teachers
                .lexicon
                .as_ref()
                .and_then(|l| l.get(name))
                .map(|_| ())
                .ok_or_else(|| EvalError::UnknownFGName(name.clone())),
            Constraint::Target { name, .. } | Constraint::Admet { name, .. } => {
                let known = teachers.classifier(name).is_some()
                    || teachers.scores.targets().any(|t| t.eq_ignore_ascii_case(name));
                if known {
                    Ok(())
                } else {
                    Err(EvalError::MissingModel(name.clone()))
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::FunctionalGroup { name } => write!(f, "FG:{name}"),
            Constraint::LogP { target, margin } => write!(f, "LogP:{target}:{margin}"),
            Constraint::QedAbove { threshold } => write!(f, "QED:{threshold}"),
            Constraint::SaBelow { threshold } => write!(f, "SA:{threshold}"),
            Constraint::Target { name, threshold } | Constraint::Admet { name, threshold } => {
                write!(f, "{name}:{threshold}")
            }
        }
    }
}

impl FromStr for Constraint {
    type Err = EvalError;

    /// `FG:name`, `LogP[:target[:margin]]`, `QED[:t]`, `SA[:t]`, or a target
    /// or ADMET name with optional `:threshold`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| EvalError::InvalidSpec(format!("bad number {v:?} in {s:?}")))
        };
        let c = match (head.to_ascii_uppercase().as_str(), arg) {
            ("FG", Some(name)) => Constraint::fg(name),
            ("FG", None) => return Err(EvalError::InvalidSpec("FG needs a name, as in FG:benzamide".into())),
            ("LOGP", Some(a)) => match a.split_once(':') {
                Some((t, m)) => Constraint::LogP {
                    target: num(t)?,
                    margin: num(m)?,
                },
                None => Constraint::logp(num(a)?),
            },
            ("LOGP", None) => Constraint::logp(DEFAULT_LOGP_TARGET),
            ("QED", a) => Constraint::QedAbove {
                threshold: a.map(num).transpose()?.unwrap_or(QED_HIGH_THRESHOLD),
            },
            ("SA" | "SAS", a) => Constraint::SaBelow {
                threshold: a.map(num).transpose()?.unwrap_or(SA_GOOD_THRESHOLD),
            },
            ("", _) => return Err(EvalError::InvalidSpec(format!("empty constraint in {s:?}"))),
            (name, a) => {
                let threshold = a.map(num).transpose()?.unwrap_or(SCORE_THRESHOLD);
                match Constraint::named(name) {
                    Constraint::Admet { name, .. } => Constraint::Admet { name, threshold },
                    Constraint::Target { name, .. } => Constraint::Target { name, threshold },
                    _ => unreachable!(),
                }
            }
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub task_id: String,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSpec {
    /// Spec whose task id is the template task with the same slot signature,
    /// or the `+`-joined slot names when no template task matches.
    pub fn new(constraints: Vec<Constraint>) -> Result<Self, EvalError> {
        if constraints.is_empty() {
            return Err(EvalError::InvalidSpec("no constraints".into()));
        }
        for c in &constraints {
            c.validate()?;
        }
        let mut sig: Vec<Slot> = constraints.iter().map(Constraint::slot).collect();
        sig.sort();
        let task_id = task_ids()
            .into_iter()
            .find(|t| task_signature(t) == sig)
            .map(str::to_string)
            .unwrap_or_else(|| {
                let names: Vec<String> = sig
                    .iter()
                    .map(|s| match s {
                        Slot::FunctionalGroup => "FG".to_string(),
                        Slot::LogP => "LogP".to_string(),
                        Slot::Qed => "QED".to_string(),
                        Slot::Sa => "SA".to_string(),
                        Slot::Named(n) => n.clone(),
                    })
                    .collect();
                names.join("+")
            });
        Ok(ConstraintSpec { task_id, constraints })
    }

    /// A spec with an explicit task id; the constraint slots must match the
    /// task's signature.
    pub fn for_task(task_id: &str, constraints: Vec<Constraint>) -> Result<Self, EvalError> {
        let spec = Self::new(constraints)?;
        let mut sig: Vec<Slot> = spec.constraints.iter().map(Constraint::slot).collect();
        sig.sort();
        if task_signature(task_id) != sig {
            return Err(EvalError::InvalidSpec(format!(
                "constraints do not match the slots of task {task_id}"
            )));
        }
        Ok(ConstraintSpec {
            task_id: task_id.to_string(),
            ..spec
        })
    }

    /// `+`-separated constraints, e.g. `FG:benzamide+QED+DRD2`.
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let constraints = text.split('+').map(str::parse).collect::<Result<Vec<_>, _>>()?;
        Self::new(constraints)
    }

    pub fn check_context(&self, teachers: &TeacherSet) -> Result<(), EvalError> {
        self.constraints.iter().try_for_each(|c| c.check_context(teachers))
    }
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Check a parsed molecule against one constraint.
pub fn check_mol(mol: &MolGraph, constraint: &Constraint, teachers: &TeacherSet) -> Result<bool, EvalError> {
    constraint.check_context(teachers)?;
    Ok(match constraint {
        Constraint::FunctionalGroup { name } => {
            let entry = teachers.lexicon.as_ref().and_then(|l| l.get(name)).expect("checked");
            substructure_match(&entry.pattern, mol)
        }
        Constraint::LogP { target, margin } => (crippen_logp(mol)? - target).abs() <= *margin,
        Constraint::QedAbove { threshold } => qed(mol)? > *threshold,
        Constraint::SaBelow { threshold } => sa_score_with(mol, teachers.fragment_table())? < *threshold,
        Constraint::Target { name, threshold } | Constraint::Admet { name, threshold } => {
            teachers.named_score(name, mol).is_some_and(|s| s > *threshold)
        }
    })
}

/// Invalid SMILES satisfy nothing.
pub fn check_constraint(smiles: &str, constraint: &Constraint, teachers: &TeacherSet) -> Result<bool, EvalError> {
    constraint.check_context(teachers)?;
    match parse_smiles(smiles) {
        Ok(mol) => check_mol(&mol, constraint, teachers),
        Err(_) => Ok(false),
    }
}

/// Whether a parsed molecule meets every constraint of `spec`.
pub fn constraints_satisfied(mol: &MolGraph, spec: &ConstraintSpec, teachers: &TeacherSet) -> Result<bool, EvalError> {
    for c in &spec.constraints {
        if !check_mol(mol, c, teachers)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// 100 x (valid samples meeting every constraint) / (all samples); 0 for an
/// empty batch.
pub fn success_rate<S: AsRef<str> + Sync>(
    samples: &[S],
    spec: &ConstraintSpec,
    teachers: &TeacherSet,
) -> Result<f64, EvalError> {
    spec.check_context(teachers)?;
    if samples.is_empty() {
        return Ok(0.0);
    }
    let hits: Vec<bool> = samples
        .par_iter()
        .map(|s| match parse_smiles(s.as_ref()) {
            Ok(mol) => constraints_satisfied(&mol, spec, teachers),
            Err(_) => Ok(false),
        })
        .collect::<Result<_, _>>()?;
    Ok(100.0 * hits.iter().filter(|&&h| h).count() as f64 / samples.len() as f64)
}
