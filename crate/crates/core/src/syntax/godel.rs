//! Gödel numbering.
//!
//! A code is `pair(tag, payload)` where `pair(a, b)` is the natural number
//! whose binary expansion is `1 · γ(a) · γ(b)` and `γ(n)` is the Elias gamma
//! code of `n + 1`. `pair` is injective and strictly increasing in both
//! arguments, and its value always exceeds both arguments, so the code of a
//! compound exceeds the codes of its parts and `#T(⌈A⌉) > #A`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{is_name_byte, Connective, Name, Sentence, TruthForm};

/// Natural-number code of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelCode(BigUint);

/// A numeral, the argument sort of the truth symbol. Not every numeral names
/// a sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Numeral(BigUint);

impl GodelCode {
    pub fn new(value: BigUint) -> Self {
        GodelCode(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// `⌈A⌉` for the sentence carrying this code.
    pub fn numeral(&self) -> Numeral {
        Numeral(self.0.clone())
    }
}

impl Numeral {
    pub fn new(value: BigUint) -> Self {
        Numeral(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Reads the numeral's value as a (candidate) code.
    pub fn as_code(&self) -> GodelCode {
        GodelCode(self.0.clone())
    }
}

impl From<u32> for Numeral {
    fn from(v: u32) -> Self {
        Numeral(BigUint::from(v))
    }
}

impl From<u32> for GodelCode {
    fn from(v: u32) -> Self {
        GodelCode(BigUint::from(v))
    }
}

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for GodelCode {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(GodelCode)
    }
}

impl serde::Serialize for GodelCode {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("{0} is not the code of a sentence")]
    NotACode(GodelCode),
}

pub(crate) const TAG_ATOM: u32 = 0;
pub(crate) const TAG_FORALL: u32 = 1;
pub(crate) const TAG_EXISTS: u32 = 2;
pub(crate) const TAG_T: u32 = 3;
pub(crate) const TAG_FORALL_T: u32 = 4;
pub(crate) const TAG_EXISTS_T: u32 = 5;
pub(crate) const TAG_FORALL_TT: u32 = 6;
pub(crate) const TAG_EXISTS_TT: u32 = 7;
pub(crate) const TAG_FORALL_TP: u32 = 8;
pub(crate) const TAG_EXISTS_TP: u32 = 9;
pub(crate) const TAG_NOT: u32 = 10;
const TAG_OR: u32 = 11;
const TAG_AND: u32 = 12;
const TAG_IMPLIES: u32 = 13;
const TAG_IFF: u32 = 14;

fn gamma_len(v: &BigUint) -> u64 {
    2 * v.bits() - 1
}

/// `1 · γ(a) · γ(b)` read as a binary number.
pub(crate) fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let ga = a + 1u32;
    let gb = b + 1u32;
    let la = gamma_len(&ga);
    let lb = gamma_len(&gb);
    (((BigUint::one() << la) | ga) << lb) | gb
}

/// Inverse of [`pair`]; `None` when `c` is not in its image.
pub(crate) fn unpair(c: &BigUint) -> Option<(BigUint, BigUint)> {
    if c.is_zero() {
        return None;
    }
    let words = c.to_u64_digits();
    // Bits below the leading marker bit, read from the top.
    let mut remaining = c.bits() - 1;
    let a = read_gamma(&words, &mut remaining)?;
    let b = read_gamma(&words, &mut remaining)?;
    (remaining == 0).then_some((a, b))
}

/// Index of the highest set bit strictly below `p`.
fn highest_one_below(words: &[u64], p: u64) -> Option<u64> {
    if p == 0 {
        return None;
    }
    let top = p - 1;
    let mut w = (top / 64) as usize;
    let mut mask = if top % 64 == 63 {
        u64::MAX
    } else {
        (1u64 << (top % 64 + 1)) - 1
    };
    loop {
        let v = words.get(w).copied().unwrap_or(0) & mask;
        if v != 0 {
            return Some(w as u64 * 64 + 63 - u64::from(v.leading_zeros()));
        }
        if w == 0 {
            return None;
        }
        w -= 1;
        mask = u64::MAX;
    }
}

/// Bits `lo .. lo + width` as a number.
fn extract(words: &[u64], lo: u64, width: u64) -> BigUint {
    let n = width.div_ceil(64) as usize;
    let mut out = vec![0u64; n];
    let (skip, off) = ((lo / 64) as usize, lo % 64);
    for (i, slot) in out.iter_mut().enumerate() {
        let lo_word = words.get(skip + i).copied().unwrap_or(0);
        let hi_word = words.get(skip + i + 1).copied().unwrap_or(0);
        *slot = if off == 0 {
            lo_word
        } else {
            (lo_word >> off) | (hi_word << (64 - off))
        };
    }
    if !width.is_multiple_of(64) {
        out[n - 1] &= (1u64 << (width % 64)) - 1;
    }
    BigUint::new(
        out.into_iter()
            .flat_map(|w| [w as u32, (w >> 32) as u32])
            .collect(),
    )
}

/// Reads one gamma code from the `remaining` low bits of `words`.
fn read_gamma(words: &[u64], remaining: &mut u64) -> Option<BigUint> {
    let one = highest_one_below(words, *remaining)?;
    let zeros = *remaining - 1 - one;
    let width = zeros + 1;
    if one + 1 < width {
        return None;
    }
    let shift = one + 1 - width;
    let value = extract(words, shift, width);
    *remaining = shift;
    Some(value - 1u32)
}

fn small(v: u32) -> BigUint {
    BigUint::from(v)
}

fn name_code(n: &Name) -> BigUint {
    let mut bytes = Vec::with_capacity(n.as_str().len() + 1);
    bytes.push(1u8);
    bytes.extend_from_slice(n.as_str().as_bytes());
    BigUint::from_bytes_be(&bytes)
}

fn name_decode(v: &BigUint) -> Option<Name> {
    let bytes = v.to_bytes_be();
    let (&marker, rest) = bytes.split_first()?;
    if marker != 1 || rest.is_empty() || !rest.iter().all(|&b| is_name_byte(b)) {
        return None;
    }
    // All bytes are ASCII.
    Some(Name(String::from_utf8(rest.to_vec()).ok()?))
}

fn connective_tag(op: Connective) -> u32 {
    match op {
        Connective::Or => TAG_OR,
        Connective::And => TAG_AND,
        Connective::Implies => TAG_IMPLIES,
        Connective::Iff => TAG_IFF,
    }
}

fn encode_raw(s: &Sentence) -> BigUint {
    match s {
        Sentence::ObjAtom { pred, elem } => {
            pair(&small(TAG_ATOM), &pair(&name_code(pred), &name_code(elem)))
        }
        Sentence::ObjForall(p) => pair(&small(TAG_FORALL), &name_code(p)),
        Sentence::ObjExists(p) => pair(&small(TAG_EXISTS), &name_code(p)),
        Sentence::TAtom(n) => pair(&small(TAG_T), n.value()),
        Sentence::Form(form) => match form {
            TruthForm::ForallT => pair(&small(TAG_FORALL_T), &BigUint::zero()),
            TruthForm::ExistsT => pair(&small(TAG_EXISTS_T), &BigUint::zero()),
            TruthForm::ForallTT => pair(&small(TAG_FORALL_TT), &BigUint::zero()),
            TruthForm::ExistsTT => pair(&small(TAG_EXISTS_TT), &BigUint::zero()),
            TruthForm::ForallTP(p) => pair(&small(TAG_FORALL_TP), &name_code(p)),
            TruthForm::ExistsTP(p) => pair(&small(TAG_EXISTS_TP), &name_code(p)),
        },
        Sentence::Not(a) => pair(&small(TAG_NOT), &encode_raw(a)),
        Sentence::Binary(op, a, b) => pair(
            &small(connective_tag(*op)),
            &pair(&encode_raw(a), &encode_raw(b)),
        ),
    }
}

/// `#s`.
pub fn encode(s: &Sentence) -> GodelCode {
    GodelCode(encode_raw(s))
}

/// The unique sentence with code `c`.
pub fn decode(c: &GodelCode) -> Result<Sentence, DecodeError> {
    decode_raw(&c.0).ok_or_else(|| DecodeError::NotACode(c.clone()))
}

fn decode_raw(c: &BigUint) -> Option<Sentence> {
    let (tag, payload) = unpair(c)?;
    let tag = u32::try_from(&tag).ok()?;
    let nullary = |form: TruthForm| payload.is_zero().then_some(Sentence::Form(form));
    match tag {
        TAG_ATOM => {
            let (p, e) = unpair(&payload)?;
            Some(Sentence::ObjAtom {
                pred: name_decode(&p)?,
                elem: name_decode(&e)?,
            })
        }
        TAG_FORALL => Some(Sentence::ObjForall(name_decode(&payload)?)),
        TAG_EXISTS => Some(Sentence::ObjExists(name_decode(&payload)?)),
        TAG_T => Some(Sentence::TAtom(Numeral(payload))),
        TAG_FORALL_T => nullary(TruthForm::ForallT),
        TAG_EXISTS_T => nullary(TruthForm::ExistsT),
        TAG_FORALL_TT => nullary(TruthForm::ForallTT),
        TAG_EXISTS_TT => nullary(TruthForm::ExistsTT),
        TAG_FORALL_TP => Some(Sentence::Form(TruthForm::ForallTP(name_decode(&payload)?))),
        TAG_EXISTS_TP => Some(Sentence::Form(TruthForm::ExistsTP(name_decode(&payload)?))),
        TAG_NOT => Some(Sentence::negate(decode_raw(&payload)?)),
        TAG_OR | TAG_AND | TAG_IMPLIES | TAG_IFF => {
            let op = match tag {
                TAG_OR => Connective::Or,
                TAG_AND => Connective::And,
                TAG_IMPLIES => Connective::Implies,
                _ => Connective::Iff,
            };
            let (a, b) = unpair(&payload)?;
            Some(Sentence::binary(op, decode_raw(&a)?, decode_raw(&b)?))
        }
        _ => None,
    }
}

/// `#[¬A]` from `#A`, without decoding.
pub(crate) fn negation_code(c: &GodelCode) -> GodelCode {
    GodelCode(pair(&small(TAG_NOT), &c.0))
}

/// `#T(⌈A⌉)` from `#A`.
pub(crate) fn truth_atom_code(c: &GodelCode) -> GodelCode {
    GodelCode(pair(&small(TAG_T), &c.0))
}

/// `#(A op B)` from `#A` and `#B`.
pub(crate) fn binary_code(op: Connective, a: &GodelCode, b: &GodelCode) -> GodelCode {
    GodelCode(pair(&small(connective_tag(op)), &pair(&a.0, &b.0)))
}

/// `#A` when `c = #[¬A]`.
#[cfg(test)]
fn negated_body(c: &GodelCode) -> Option<GodelCode> {
    let (tag, payload) = unpair(&c.0)?;
    (tag == small(TAG_NOT)).then_some(GodelCode(payload))
}
