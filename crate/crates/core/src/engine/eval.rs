//! Demand-driven evaluation by recursion on rank.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::object::{ObjectLanguage, PredicateClass};
use crate::syntax::{decode, Connective, GodelCode, Sentence, TruthForm};

/// Interpretation of one sentence: true or false with the least stage at
/// which it is decided, or outside `ℒ⁰`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    True(u32),
    False(u32),
    OutsideL0,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        matches!(self, Verdict::True(_))
    }

    pub fn is_false(self) -> bool {
        matches!(self, Verdict::False(_))
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::OutsideL0
    }

    pub fn stage(self) -> Option<u32> {
        match self {
            Verdict::True(k) | Verdict::False(k) => Some(k),
            Verdict::OutsideL0 => None,
        }
    }

    /// Truth value, forgetting the stage.
    pub fn value(self) -> Option<bool> {
        match self {
            Verdict::True(_) => Some(true),
            Verdict::False(_) => Some(false),
            Verdict::OutsideL0 => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True(k) => write!(f, "True (stage {k})"),
            Verdict::False(k) => write!(f, "False (stage {k})"),
            Verdict::OutsideL0 => f.write_str("OutsideL0"),
        }
    }
}

/// Anything that assigns verdicts to sentences. The law checks run against
/// this trait so that deliberately broken engines can be tested.
pub trait Semantics: Sync {
    fn verdict(&self, s: &Sentence) -> Verdict;

    fn language(&self) -> &dyn ObjectLanguage;
}

/// Entries kept before the memo is flushed; codes of nested sentences run
/// to thousands of bits.
const MEMO_LIMIT: usize = 1 << 16;

/// The reference evaluator. Verdicts of truth-atom referents are memoized
/// by code; the memo is shared across threads behind a mutex.
pub struct Evaluator<'a> {
    lang: &'a dyn ObjectLanguage,
    memo: Mutex<HashMap<GodelCode, Verdict>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(lang: &'a dyn ObjectLanguage) -> Self {
        Evaluator {
            lang,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    fn referent(&self, code: GodelCode) -> Verdict {
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&code) {
            return v;
        }
        let v = match decode(&code) {
            Ok(a) => self.eval(&a),
            Err(_) => Verdict::OutsideL0,
        };
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(code, v);
        v
    }

    fn eval(&self, s: &Sentence) -> Verdict {
        if s.is_object() {
            return match self.lang.valuate(s) {
                Ok(true) => Verdict::True(0),
                Ok(false) => Verdict::False(0),
                Err(_) => Verdict::OutsideL0,
            };
        }
        match s {
            Sentence::ObjAtom { .. } | Sentence::ObjForall(_) | Sentence::ObjExists(_) => {
                unreachable!("object primes handled above")
            }
            Sentence::Form(form) => self.form(form),
            Sentence::TAtom(n) => match self.referent(n.as_code()) {
                Verdict::True(k) => Verdict::True(k + 1),
                Verdict::False(k) => Verdict::False(k + 1),
                Verdict::OutsideL0 => Verdict::OutsideL0,
            },
            Sentence::Not(a) => match self.eval(a) {
                Verdict::True(k) => Verdict::False(k),
                Verdict::False(k) => Verdict::True(k),
                Verdict::OutsideL0 => Verdict::OutsideL0,
            },
            // Mixed compounds enter at stage 1 at the earliest: W holds only
            // object sentences.
            Sentence::Binary(op, a, b) => match combine(*op, self.eval(a), self.eval(b)) {
                Verdict::True(k) => Verdict::True(k.max(1)),
                Verdict::False(k) => Verdict::False(k.max(1)),
                Verdict::OutsideL0 => Verdict::OutsideL0,
            },
        }
    }

    fn form(&self, form: &TruthForm) -> Verdict {
        let by_class = |p, when: fn(PredicateClass) -> bool| match self.lang.classify(p) {
            Ok(c) if when(c) => Verdict::True(1),
            Ok(_) => Verdict::False(1),
            Err(_) => Verdict::OutsideL0,
        };
        match form {
            TruthForm::ExistsT | TruthForm::ExistsTT => Verdict::True(1),
            TruthForm::ForallT | TruthForm::ForallTT => Verdict::False(1),
            TruthForm::ForallTP(p) => by_class(p, |c| c == PredicateClass::P1),
            TruthForm::ExistsTP(p) => by_class(p, |c| c != PredicateClass::P2),
        }
    }
}

/// Strong-Kleene combination with least stages: a true disjunction is
/// decided as soon as its earliest true disjunct, a false one once both are
/// false, and dually for the other connectives.
pub(crate) fn combine(op: Connective, a: Verdict, b: Verdict) -> Verdict {
    use Verdict::{False as F, OutsideL0 as O, True as T};
    let earliest = |x: Option<u32>, y: Option<u32>| match (x, y) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let t = |v: Verdict| if let T(k) = v { Some(k) } else { None };
    let f = |v: Verdict| if let F(k) = v { Some(k) } else { None };
    match op {
        Connective::Or => match (a, b) {
            (F(x), F(y)) => F(x.max(y)),
            _ => earliest(t(a), t(b)).map_or(O, T),
        },
        Connective::And => match (a, b) {
            (T(x), T(y)) => T(x.max(y)),
            _ => earliest(f(a), f(b)).map_or(O, F),
        },
        Connective::Implies => match (a, b) {
            (T(x), F(y)) => F(x.max(y)),
            _ => earliest(f(a), t(b)).map_or(O, T),
        },
        Connective::Iff => match (a, b) {
            (T(x), T(y)) | (F(x), F(y)) => T(x.max(y)),
            (T(x), F(y)) | (F(x), T(y)) => F(x.max(y)),
            _ => O,
        },
    }
}

impl Semantics for Evaluator<'_> {
    fn verdict(&self, s: &Sentence) -> Verdict {
        self.eval(s)
    }

    fn language(&self) -> &dyn ObjectLanguage {
        self.lang
    }
}

/// One-shot evaluation with a private memo.
pub fn evaluate(s: &Sentence, lang: &dyn ObjectLanguage) -> Verdict {
    Evaluator::new(lang).verdict(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::ObjectModel;
    use crate::syntax::parse;

    fn model() -> ObjectModel {
        ObjectModel::from_json_str(include_str!("../../../../models/example.json")).unwrap()
    }

    fn ev(text: &str) -> Verdict {
        evaluate(&parse(text).unwrap(), &model())
    }

    #[test]
    fn quantified_forms() {
        assert_eq!(ev("existsT"), Verdict::True(1));
        assert_eq!(ev("forallT"), Verdict::False(1));
        assert_eq!(ev("existsTT"), Verdict::True(1));
        assert_eq!(ev("forallTT"), Verdict::False(1));
        assert_eq!(ev("forallTP P.refl"), Verdict::True(1));
        assert_eq!(ev("existsTP P.never"), Verdict::False(1));
        assert_eq!(ev("forallTP P.ev"), Verdict::False(1));
        assert_eq!(ev("existsTP P.ev"), Verdict::True(1));
    }

    #[test]
    fn non_code_truth_atom_is_outside() {
        assert_eq!(ev("T[17]"), Verdict::OutsideL0);
        assert_eq!(ev("!T[17]"), Verdict::OutsideL0);
        assert_eq!(ev("(T[17] & existsT)"), Verdict::OutsideL0);
    }

    #[test]
    fn strong_kleene_absorbs_undecided_constituents() {
        assert_eq!(ev("(T[17] | P.ev(2))"), Verdict::True(1));
        assert_eq!(ev("(T[17] & P.ev(1))"), Verdict::False(1));
        assert_eq!(ev("(P.ev(1) -> T[17])"), Verdict::True(1));
    }

    #[test]
    fn truth_atoms_add_one_stage() {
        assert_eq!(ev("T[#'P.ev(2)']"), Verdict::True(1));
        assert_eq!(ev("T[#'T[#'P.ev(1)']']"), Verdict::False(2));
        assert_eq!(ev("T[#'existsT']"), Verdict::True(2));
        assert_eq!(ev("!T[#'forallT']"), Verdict::True(2));
    }

    #[test]
    fn connective_stages() {
        assert_eq!(ev("(P.ev(2) <-> T[#'P.ev(2)'])"), Verdict::True(1));
        assert_eq!(ev("(forallT | T[#'existsT'])"), Verdict::True(2));
        assert_eq!(ev("(forallT | T[#'forallT'])"), Verdict::False(2));
        assert_eq!(ev("!!existsT"), Verdict::True(1));
        assert_eq!(ev("(!(ex P.ev) | P.ev(0))"), Verdict::True(0));
    }

    #[test]
    fn unknown_vocabulary_is_outside() {
        assert_eq!(ev("forallTP P.odd"), Verdict::OutsideL0);
        assert_eq!(ev("T[#'P.ev(9)']"), Verdict::OutsideL0);
    }

    #[test]
    fn memo_is_keyed_by_referent_code() {
        let m = model();
        let e = Evaluator::new(&m);
        e.verdict(&parse("(T[#'P.ev(2)'] & T[#'T[#'P.ev(2)']'])").unwrap());
        assert_eq!(e.memo_len(), 2);
    }
}
