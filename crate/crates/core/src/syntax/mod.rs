//! Sentences of the extended language: object-language sentences, the truth
//! atom `T(x)` over numerals, the six quantified truth forms, and connective
//! combinations of all of these.

mod godel;
mod parse;
mod print;

use std::fmt;

use serde::{Deserialize, Serialize};

pub(crate) use godel::{binary_code, negation_code, truth_atom_code};
pub use godel::{decode, encode, DecodeError, GodelCode, Numeral};
pub use parse::{parse, parse_checked, ParseError, ParseErrorKind, Vocabulary};
pub use print::print;

/// Identifier of a predicate or of a domain element.
///
/// Names are non-empty runs of ASCII letters, digits and `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Result<Self, InvalidName> {
        let s = s.into();
        if Self::is_valid(&s) {
            Ok(Name(s))
        } else {
            Err(InvalidName(s))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        !s.is_empty() && s.bytes().all(is_name_byte)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid name {0:?}: expected ASCII letters, digits or '_'")]
pub struct InvalidName(pub String);

impl TryFrom<String> for Name {
    type Error = InvalidName;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Name::new(s)
    }
}

impl From<Name> for String {
    fn from(n: Name) -> String {
        n.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Binary connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Or,
    And,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::Or,
        Connective::And,
        Connective::Implies,
        Connective::Iff,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Or => "|",
            Connective::And => "&",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }
}

/// The six quantified truth forms, in the shape they take in the language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthForm {
    /// `∀x T(x)`
    ForallT,
    /// `∃x T(x)`
    ExistsT,
    /// `∀x T(⌈T(x)⌉)`
    ForallTT,
    /// `∃x T(⌈T(x)⌉)`
    ExistsTT,
    /// `∀x T(⌈P(x)⌉)`
    ForallTP(Name),
    /// `∃x T(⌈P(x)⌉)`
    ExistsTP(Name),
}

/// A sentence of the extended language.
///
/// Quantified sentences only occur in the eight fixed shapes below; there is
/// no variable binding. `TAtom` carries a raw numeral, which may or may not be
/// the numeral of a sentence code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentence {
    /// `P(x)` for an element `x` of the predicate's domain.
    ObjAtom {
        pred: Name,
        elem: Name,
    },
    /// `∀x P(x)`
    ObjForall(Name),
    /// `∃x P(x)`
    ObjExists(Name),
    /// `T(x)` with `x` a numeral.
    TAtom(Numeral),
    Form(TruthForm),
    Not(Box<Sentence>),
    Binary(Connective, Box<Sentence>, Box<Sentence>),
}

impl Sentence {
    pub fn atom(pred: &Name, elem: &Name) -> Sentence {
        Sentence::ObjAtom {
            pred: pred.clone(),
            elem: elem.clone(),
        }
    }

    /// `T(⌈a⌉)`.
    pub fn truth_of(a: &Sentence) -> Sentence {
        Sentence::TAtom(encode(a).numeral())
    }

    pub fn negate(a: Sentence) -> Sentence {
        Sentence::Not(Box::new(a))
    }

    pub fn binary(op: Connective, a: Sentence, b: Sentence) -> Sentence {
        Sentence::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn or(a: Sentence, b: Sentence) -> Sentence {
        Self::binary(Connective::Or, a, b)
    }

    pub fn and(a: Sentence, b: Sentence) -> Sentence {
        Self::binary(Connective::And, a, b)
    }

    pub fn implies(a: Sentence, b: Sentence) -> Sentence {
        Self::binary(Connective::Implies, a, b)
    }

    pub fn iff(a: Sentence, b: Sentence) -> Sentence {
        Self::binary(Connective::Iff, a, b)
    }

    pub fn forall_t() -> Sentence {
        Sentence::Form(TruthForm::ForallT)
    }

    pub fn exists_t() -> Sentence {
        Sentence::Form(TruthForm::ExistsT)
    }

    pub fn forall_tt() -> Sentence {
        Sentence::Form(TruthForm::ForallTT)
    }

    pub fn exists_tt() -> Sentence {
        Sentence::Form(TruthForm::ExistsTT)
    }

    pub fn forall_tp(p: &Name) -> Sentence {
        Sentence::Form(TruthForm::ForallTP(p.clone()))
    }

    pub fn exists_tp(p: &Name) -> Sentence {
        Sentence::Form(TruthForm::ExistsTP(p.clone()))
    }

    /// True when the sentence contains no truth symbol, i.e. it belongs to the
    /// object language.
    pub fn is_object(&self) -> bool {
        match self {
            Sentence::ObjAtom { .. } | Sentence::ObjForall(_) | Sentence::ObjExists(_) => true,
            Sentence::TAtom(_) | Sentence::Form(_) => false,
            Sentence::Not(a) => a.is_object(),
            Sentence::Binary(_, a, b) => a.is_object() && b.is_object(),
        }
    }

    /// The referent of a truth atom whose numeral is a sentence code.
    pub fn referent(&self) -> Option<Sentence> {
        match self {
            Sentence::TAtom(n) => decode(&n.as_code()).ok(),
            _ => None,
        }
    }

    /// Reference depth. Object primes are 0, the quantified truth forms 1,
    /// a truth atom one more than its referent (1 for non-codes), and a
    /// connective node one more than its deepest child.
    pub fn rank(&self) -> u32 {
        match self {
            Sentence::ObjAtom { .. } | Sentence::ObjForall(_) | Sentence::ObjExists(_) => 0,
            Sentence::Form(_) => 1,
            Sentence::TAtom(_) => self.referent().map_or(1, |r| r.rank() + 1),
            Sentence::Not(a) => a.rank() + 1,
            Sentence::Binary(_, a, b) => a.rank().max(b.rank()) + 1,
        }
    }

    /// Node count, where a truth atom over a code also counts its referent.
    pub fn unfolded_size(&self) -> u32 {
        match self {
            Sentence::ObjAtom { .. }
            | Sentence::ObjForall(_)
            | Sentence::ObjExists(_)
            | Sentence::Form(_) => 1,
            Sentence::TAtom(_) => self.referent().map_or(1, |r| r.unfolded_size() + 1),
            Sentence::Not(a) => a.unfolded_size() + 1,
            Sentence::Binary(_, a, b) => a.unfolded_size() + b.unfolded_size() + 1,
        }
    }

    /// Predicates mentioned anywhere in the tree (not through truth atoms).
    pub fn predicates(&self) -> Vec<&Name> {
        let mut out = Vec::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates<'a>(&'a self, out: &mut Vec<&'a Name>) {
        match self {
            Sentence::ObjAtom { pred, .. }
            | Sentence::ObjForall(pred)
            | Sentence::ObjExists(pred) => out.push(pred),
            Sentence::Form(TruthForm::ForallTP(p)) | Sentence::Form(TruthForm::ExistsTP(p)) => {
                out.push(p)
            }
            Sentence::Form(_) | Sentence::TAtom(_) => {}
            Sentence::Not(a) => a.collect_predicates(out),
            Sentence::Binary(_, a, b) => {
                a.collect_predicates(out);
                b.collect_predicates(out);
            }
        }
    }
}

/// Free-function form of [`Sentence::rank`].
pub fn rank(s: &Sentence) -> u32 {
    s.rank()
}
