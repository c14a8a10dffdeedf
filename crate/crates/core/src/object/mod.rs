//! The fully interpreted object language.
//!
//! The truth engine only talks to [`ObjectLanguage`]; [`ObjectModel`] is the
//! shipped implementation, a finite first-order structure with explicit
//! predicate tables.

mod model;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::syntax::{encode, Connective, GodelCode, Name, Sentence, Vocabulary};

pub use model::{ModelError, ObjectModel};

/// Classification of a predicate by its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PredicateClass {
    /// True at every element of its domain.
    P1,
    /// False at every element of its domain.
    P2,
    /// True at some but not all elements.
    P3,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObjectError {
    #[error("unknown predicate {0}")]
    UnknownPredicate(Name),
    #[error("{elem} is not in the domain of {pred}")]
    UnknownElement { pred: Name, elem: Name },
    #[error("not a sentence of the object language: {0}")]
    NotObjectSentence(String),
}

/// Contract for a fully interpreted object language without a truth
/// predicate. Implementors supply the predicates, their finite domains and
/// their tables; valuation and classification follow.
pub trait ObjectLanguage: Send + Sync {
    /// Predicates in a fixed order.
    fn predicates(&self) -> Vec<Name>;

    /// `X_P`, in a fixed order.
    fn domain_of(&self, pred: &Name) -> Option<&[Name]>;

    /// Table lookup for `P(x)`; `None` when `x ∉ X_P` or `P` is unknown.
    fn holds(&self, pred: &Name, elem: &Name) -> Option<bool>;

    /// Connective depth bound for generated object sentences.
    fn object_depth(&self) -> u32;

    /// Classical valuation of a truth-free sentence.
    fn valuate(&self, s: &Sentence) -> Result<bool, ObjectError> {
        match s {
            Sentence::ObjAtom { pred, elem } => {
                self.domain_of(pred)
                    .ok_or_else(|| ObjectError::UnknownPredicate(pred.clone()))?;
                self.holds(pred, elem)
                    .ok_or_else(|| ObjectError::UnknownElement {
                        pred: pred.clone(),
                        elem: elem.clone(),
                    })
            }
            Sentence::ObjForall(p) => Ok(self.classify(p)? == PredicateClass::P1),
            Sentence::ObjExists(p) => Ok(self.classify(p)? != PredicateClass::P2),
            Sentence::TAtom(_) | Sentence::Form(_) => {
                Err(ObjectError::NotObjectSentence(s.to_string()))
            }
            Sentence::Not(a) => Ok(!self.valuate(a)?),
            Sentence::Binary(op, a, b) => {
                let (a, b) = (self.valuate(a)?, self.valuate(b)?);
                Ok(match op {
                    Connective::Or => a || b,
                    Connective::And => a && b,
                    Connective::Implies => !a || b,
                    Connective::Iff => a == b,
                })
            }
        }
    }

    fn classify(&self, pred: &Name) -> Result<PredicateClass, ObjectError> {
        let dom = self
            .domain_of(pred)
            .ok_or_else(|| ObjectError::UnknownPredicate(pred.clone()))?;
        let trues = dom
            .iter()
            .filter(|x| self.holds(pred, x) == Some(true))
            .count();
        Ok(if trues == dom.len() {
            PredicateClass::P1
        } else if trues == 0 {
            PredicateClass::P2
        } else {
            PredicateClass::P3
        })
    }

    /// Object primes: every `P(x)` with `x ∈ X_P`, then `∀xP(x)` and
    /// `∃xP(x)`, predicate by predicate.
    fn object_primes(&self) -> Vec<Sentence> {
        let mut out = Vec::new();
        for p in self.predicates() {
            for x in self.domain_of(&p).unwrap_or_default() {
                out.push(Sentence::atom(&p, x));
            }
            out.push(Sentence::ObjForall(p.clone()));
            out.push(Sentence::ObjExists(p));
        }
        out
    }
}

/// Predicates and elements of an object language, for checked parsing.
pub struct LanguageVocabulary<'a>(pub &'a dyn ObjectLanguage);

impl Vocabulary for LanguageVocabulary<'_> {
    fn has_predicate(&self, pred: &Name) -> bool {
        self.0.domain_of(pred).is_some()
    }

    fn has_element(&self, pred: &Name, elem: &Name) -> bool {
        self.0.holds(pred, elem).is_some()
    }
}

/// `W` restricted to a set of sentences: codes of its true object sentences.
pub fn true_object_codes<'a>(
    lang: &dyn ObjectLanguage,
    sentences: impl IntoIterator<Item = &'a Sentence>,
) -> BTreeSet<GodelCode> {
    sentences
        .into_iter()
        .filter(|s| s.is_object() && lang.valuate(s) == Ok(true))
        .map(encode)
        .collect()
}

/// All object sentences of connective depth at most `depth` over the primes,
/// closed under `¬` and the binary connectives. Fails when the closure would
/// exceed `limit` sentences.
pub fn object_sentences(
    lang: &dyn ObjectLanguage,
    depth: u32,
    limit: usize,
) -> Result<Vec<Sentence>, usize> {
    let mut all = lang.object_primes();
    // `frontier_start` marks the sentences of exactly the previous depth.
    let mut frontier_start = 0;
    for _ in 0..depth {
        let prev = all.len();
        let mut next = Vec::new();
        for s in &all[frontier_start..prev] {
            next.push(Sentence::negate(s.clone()));
        }
        for (i, a) in all[..prev].iter().enumerate() {
            for (j, b) in all[..prev].iter().enumerate() {
                if i < frontier_start && j < frontier_start {
                    continue;
                }
                for op in Connective::ALL {
                    next.push(Sentence::binary(op, a.clone(), b.clone()));
                }
            }
            if prev + next.len() > limit {
                return Err(prev + next.len());
            }
        }
        if prev + next.len() > limit {
            return Err(prev + next.len());
        }
        all.extend(next);
        frontier_start = prev;
    }
    Ok(all)
}
