//! Recursive-descent parser for the ASCII sentence grammar.
//!
//! ```text
//! sentence := '!' sentence
//!           | '(' sentence binop sentence ')'      binop: | & -> <->
//!           | '(' sentence ')'
//!           | 'P.' name '(' name ')'
//!           | 'all' 'P.' name | 'ex' 'P.' name
//!           | 'T[' nat ']' | 'T[#\'' sentence '\']'
//!           | 'forallT' | 'existsT' | 'forallTT' | 'existsTT'
//!           | 'forallTP' 'P.' name | 'existsTP' 'P.' name
//! ```

use std::fmt;

use num_bigint::BigUint;

use super::{is_name_byte, Connective, Name, Numeral, Sentence, TruthForm};

/// Predicates and elements a parsed sentence may mention.
pub trait Vocabulary {
    fn has_predicate(&self, pred: &Name) -> bool;
    fn has_element(&self, pred: &Name, elem: &Name) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEnd,
    Unexpected { found: char, expected: &'static str },
    TrailingInput,
    UnknownPredicate(Name),
    UnknownElement { pred: Name, elem: Name },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at {}", self.pos),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected} at {}, found {found:?}", self.pos)
            }
            ParseErrorKind::TrailingInput => write!(f, "trailing input at {}", self.pos),
            ParseErrorKind::UnknownPredicate(p) => {
                write!(f, "unknown predicate {p} at {}", self.pos)
            }
            ParseErrorKind::UnknownElement { pred, elem } => write!(
                f,
                "element {elem} is not in the domain of {pred} at {}",
                self.pos
            ),
        }
    }
}

/// Parses a sentence without checking predicate or element names.
pub fn parse(text: &str) -> Result<Sentence, ParseError> {
    Parser::new(text, None).parse_all()
}

/// Parses a sentence and rejects predicates or elements the vocabulary lacks,
/// including inside quoted sentences.
pub fn parse_checked(text: &str, vocab: &dyn Vocabulary) -> Result<Sentence, ParseError> {
    Parser::new(text, Some(vocab)).parse_all()
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    vocab: Option<&'a dyn Vocabulary>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vocab: Option<&'a dyn Vocabulary>) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
            vocab,
        }
    }

    fn parse_all(mut self) -> Result<Sentence, ParseError> {
        let s = self.sentence()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.err(ParseErrorKind::TrailingInput));
        }
        Ok(s)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: self.pos,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.text[self.pos..].chars().next() {
            Some(found) => self.err(ParseErrorKind::Unexpected { found, expected }),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &'static str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.unexpected(lit))
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && is_name_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let start = self.pos;
        let w = self.word();
        if w.is_empty() {
            self.pos = start;
            return Err(self.unexpected("a name"));
        }
        Ok(Name(w.to_string()))
    }

    fn check_predicate(&self, pred: &Name, at: usize) -> Result<(), ParseError> {
        match self.vocab {
            Some(v) if !v.has_predicate(pred) => Err(ParseError {
                pos: at,
                kind: ParseErrorKind::UnknownPredicate(pred.clone()),
            }),
            _ => Ok(()),
        }
    }

    /// `P.<name>`
    fn predicate_ref(&mut self) -> Result<Name, ParseError> {
        self.skip_ws();
        let at = self.pos;
        self.expect("P.")?;
        let pred = self.name()?;
        self.check_predicate(&pred, at)?;
        Ok(pred)
    }

    fn sentence(&mut self) -> Result<Sentence, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'!') => {
                self.pos += 1;
                Ok(Sentence::negate(self.sentence()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.sentence()?;
                self.skip_ws();
                if self.eat(")") {
                    return Ok(left);
                }
                let op = self.connective()?;
                let right = self.sentence()?;
                self.skip_ws();
                self.expect(")")?;
                Ok(Sentence::binary(op, left, right))
            }
            Some(_) => {
                let w = self.word();
                match w {
                    "P" if self.peek() == Some(b'.') => {
                        self.pos = start;
                        let pred = self.predicate_ref()?;
                        self.expect("(")?;
                        let elem_at = self.pos;
                        let elem = self.name()?;
                        self.expect(")")?;
                        if let Some(v) = self.vocab {
                            if !v.has_element(&pred, &elem) {
                                return Err(ParseError {
                                    pos: elem_at,
                                    kind: ParseErrorKind::UnknownElement { pred, elem },
                                });
                            }
                        }
                        Ok(Sentence::ObjAtom { pred, elem })
                    }
                    "T" if self.peek() == Some(b'[') => {
                        self.pos += 1;
                        let n = if self.eat("#'") {
                            let quoted = self.sentence()?;
                            self.skip_ws();
                            self.expect("'")?;
                            super::encode(&quoted).numeral()
                        } else {
                            self.numeral()?
                        };
                        self.expect("]")?;
                        Ok(Sentence::TAtom(n))
                    }
                    "all" => Ok(Sentence::ObjForall(self.predicate_ref()?)),
                    "ex" => Ok(Sentence::ObjExists(self.predicate_ref()?)),
                    "forallT" => Ok(Sentence::Form(TruthForm::ForallT)),
                    "existsT" => Ok(Sentence::Form(TruthForm::ExistsT)),
                    "forallTT" => Ok(Sentence::Form(TruthForm::ForallTT)),
                    "existsTT" => Ok(Sentence::Form(TruthForm::ExistsTT)),
                    "forallTP" => Ok(Sentence::Form(TruthForm::ForallTP(self.predicate_ref()?))),
                    "existsTP" => Ok(Sentence::Form(TruthForm::ExistsTP(self.predicate_ref()?))),
                    _ => {
                        self.pos = start;
                        Err(self.unexpected("a sentence"))
                    }
                }
            }
        }
    }

    fn connective(&mut self) -> Result<Connective, ParseError> {
        if self.eat("<->") {
            Ok(Connective::Iff)
        } else if self.eat("->") {
            Ok(Connective::Implies)
        } else if self.eat("|") {
            Ok(Connective::Or)
        } else if self.eat("&") {
            Ok(Connective::And)
        } else {
            Err(self.unexpected("a connective or ')'"))
        }
    }

    fn numeral(&mut self) -> Result<Numeral, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("a numeral or #'...'"));
        }
        let digits = &self.text[start..self.pos];
        // Digits only, so this cannot fail.
        let v: BigUint = digits.parse().expect("decimal digits");
        Ok(Numeral::new(v))
    }
}
