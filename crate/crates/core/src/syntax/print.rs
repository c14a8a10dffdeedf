//! Canonical, fully parenthesized printing. Truth atoms over sentence codes
//! print with the quoting sugar `T[#'...']`; other numerals print raw.

use std::fmt;

use super::{decode, Sentence, TruthForm};

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::ObjAtom { pred, elem } => write!(f, "P.{pred}({elem})"),
            Sentence::ObjForall(p) => write!(f, "all P.{p}"),
            Sentence::ObjExists(p) => write!(f, "ex P.{p}"),
            Sentence::TAtom(n) => match decode(&n.as_code()) {
                Ok(inner) => write!(f, "T[#'{inner}']"),
                Err(_) => write!(f, "T[{n}]"),
            },
            Sentence::Form(form) => match form {
                TruthForm::ForallT => f.write_str("forallT"),
                TruthForm::ExistsT => f.write_str("existsT"),
                TruthForm::ForallTT => f.write_str("forallTT"),
                TruthForm::ExistsTT => f.write_str("existsTT"),
                TruthForm::ForallTP(p) => write!(f, "forallTP P.{p}"),
                TruthForm::ExistsTP(p) => write!(f, "existsTP P.{p}"),
            },
            Sentence::Not(a) => write!(f, "!{a}"),
            Sentence::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// Canonical text of a sentence.
pub fn print(s: &Sentence) -> String {
    s.to_string()
}
