//! Derivation traces from saturation provenance.

use std::collections::HashSet;
use std::fmt;

use super::stages::{Provenance, Rule, TruthSets};
use crate::syntax::Sentence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Nesting depth in the derivation tree.
    pub depth: usize,
    pub member: usize,
    pub sentence: Sentence,
    pub provenance: Provenance,
    /// The member's derivation was already printed higher up.
    pub repeated: bool,
}

/// Why a sentence is decided: the derivation of its own code when true, or
/// of its negation's code when false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub sentence: Sentence,
    pub value: bool,
    pub steps: Vec<TraceStep>,
}

pub fn rule_name(rule: &Rule) -> String {
    match rule {
        Rule::Seed => "W".into(),
        Rule::TruthOf { .. } => "D1(U)".into(),
        Rule::FalsityOf { .. } => "D2(U)".into(),
        Rule::Constant(k) => format!("D{k}"),
        Rule::Closure { rule, .. } => format!("G^{rule}"),
    }
}

fn premises(rule: &Rule) -> Vec<usize> {
    match rule {
        Rule::Seed | Rule::Constant(_) => Vec::new(),
        Rule::TruthOf { referent } => vec![*referent],
        Rule::FalsityOf { negated_referent } => vec![*negated_referent],
        Rule::Closure { premises, .. } => premises.clone(),
    }
}

/// Explains fragment member `i`; `None` when it is outside `ℒ⁰`.
pub fn explain(sets: &TruthSets<'_>, i: usize) -> Option<Explanation> {
    let f = sets.fragment();
    let (root, value) = if sets.is_true(i) {
        (i, true)
    } else if sets.is_false(i) {
        (f.negation_of(i)?, false)
    } else {
        return None;
    };
    let mut steps = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![(root, 0usize)];
    while let Some((m, depth)) = stack.pop() {
        let provenance = sets.provenance(m)?.clone();
        let repeated = !seen.insert(m);
        if !repeated {
            for p in premises(&provenance.rule).into_iter().rev() {
                stack.push((p, depth + 1));
            }
        }
        steps.push(TraceStep {
            depth,
            member: m,
            sentence: f.member(m).sentence.clone(),
            provenance,
            repeated,
        });
    }
    Some(Explanation {
        sentence: f.member(i).sentence.clone(),
        value,
        steps,
    })
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value {
            writeln!(f, "{} is true:", self.sentence)?;
        } else {
            writeln!(f, "{} is false, its negation is in G(U):", self.sentence)?;
        }
        for s in &self.steps {
            let p = &s.provenance;
            let how = match &p.rule {
                Rule::Seed => "true object sentence in W".to_string(),
                Rule::TruthOf { .. } => "D1(U), referent in U".to_string(),
                Rule::FalsityOf { .. } => "D2(U), negated referent in U".to_string(),
                Rule::Constant(k) => format!("constant set D{k}"),
                Rule::Closure { rule, .. } => format!("rule G^{rule} at level {}", p.level),
            };
            write!(
                f,
                "{:indent$}{}  [{how}, stage {}]",
                "",
                s.sentence,
                p.stage,
                indent = 2 * s.depth
            )?;
            if s.repeated {
                write!(f, " (see above)")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
