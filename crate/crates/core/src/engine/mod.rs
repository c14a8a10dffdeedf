//! The truth engine: fragments, stage sets, the least fixed point and
//! demand-driven evaluation.

mod eval;
mod explain;
mod fragment;
mod stages;

use std::collections::BTreeSet;

use crate::syntax::{decode, negation_code, GodelCode};

pub use eval::{evaluate, Evaluator, Semantics, Verdict};
pub use explain::{explain, rule_name, Explanation, TraceStep};
pub use fragment::{build_fragment, Fragment, FragmentConfig, Member};
pub use stages::{
    d_sets, f_of, fixed_point, g0, g_of, step, DSets, Provenance, Rule, SaturationReport, TruthSets,
};

/// A set of sentence codes.
pub type CodeSet = BTreeSet<GodelCode>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("fragment depth must be at least 1, got {0}")]
    InvalidDepth(u32),
    #[error("fragment exceeds the cap of {cap} sentences")]
    FragmentTooLarge { cap: usize },
    #[error("sentence mentions vocabulary the model lacks: {0}")]
    Vocabulary(String),
    #[error("inconsistency detected: {0}")]
    InconsistencyDetected(String),
    #[error("{0} is not a sentence code")]
    NotACode(GodelCode),
}

/// True iff no sentence and its negation are both coded in `u`.
pub fn is_consistent(u: &CodeSet) -> Result<bool, EngineError> {
    for c in u {
        decode(c).map_err(|_| EngineError::NotACode(c.clone()))?;
    }
    Ok(u.iter().all(|c| !u.contains(&negation_code(c))))
}
