//! Finite, premise-closed windows onto the set of all sentences.
//!
//! A fragment has a *core*: every sentence within the rank and size bounds,
//! closed under the premises the stage rules can consult (constituents and
//! their negations, truth-atom referents and their negations). The *ring*
//! adds the negation of every core sentence that lacks one, so `F(U)` is
//! exact on the core.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{CodeSet, EngineError};
use crate::object::ObjectLanguage;
use crate::syntax::{
    binary_code, encode, negation_code, truth_atom_code, Connective, GodelCode, Sentence, TruthForm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    /// Object prime: `P(x)`, `∀xP(x)` or `∃xP(x)`.
    Prime,
    Form,
    /// Truth atom; the referent's index when the numeral is a member's code.
    Truth(Option<usize>),
    Not(usize),
    Binary(Connective, usize, usize),
}

#[derive(Debug, Clone)]
pub struct Member {
    pub sentence: Sentence,
    pub code: GodelCode,
    pub rank: u32,
    pub size: u32,
    /// Truth-free sentence of the object language.
    pub object: bool,
    /// Member of the bounded core rather than the negation ring.
    pub core: bool,
    pub(crate) shape: Shape,
    pub(crate) object_depth: u32,
    pub(crate) valuation: Option<bool>,
}

/// Bounds for [`Fragment::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentConfig {
    /// Maximum rank of generated sentences.
    pub depth: u32,
    /// Maximum unfolded size of generated sentences.
    pub max_size: u32,
    /// Maximum number of members, ring included.
    pub cap: usize,
}

impl Default for FragmentConfig {
    fn default() -> Self {
        FragmentConfig {
            depth: 3,
            max_size: 4,
            cap: 2_000_000,
        }
    }
}

impl FragmentConfig {
    pub fn with_depth(depth: u32) -> Self {
        FragmentConfig {
            depth,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fragment {
    members: Vec<Member>,
    index: HashMap<GodelCode, usize>,
    neg: Vec<Option<usize>>,
    t_atom: Vec<Option<usize>>,
    deps: Vec<Vec<usize>>,
    w: FixedBitSet,
    constants: [Vec<usize>; 4],
    depth: u32,
    core_len: usize,
}

/// All sentences of rank ≤ `depth` over the model, with the default size
/// bound and cap.
pub fn build_fragment(lang: &dyn ObjectLanguage, depth: u32) -> Result<Fragment, EngineError> {
    Fragment::build(lang, &FragmentConfig::with_depth(depth))
}

impl Fragment {
    pub fn build(
        lang: &dyn ObjectLanguage,
        config: &FragmentConfig,
    ) -> Result<Fragment, EngineError> {
        if config.depth < 1 {
            return Err(EngineError::InvalidDepth(config.depth));
        }
        let mut b = Builder::new(lang, config.cap);
        b.seed()?;
        let max_obj = lang.object_depth();
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); config.max_size as usize + 1];
        let mut bucketed = 0;
        for w in 2..=config.max_size {
            // Members join their size bucket once; closure can add members
            // smaller than the current level, which then serve later levels.
            for i in bucketed..b.members.len() {
                if let Some(bucket) = by_size.get_mut(b.members[i].size as usize) {
                    bucket.push(i);
                }
            }
            bucketed = b.members.len();
            for &i in &by_size[w as usize - 1] {
                let m = &b.members[i];
                if m.rank + 1 > config.depth {
                    continue;
                }
                if !(m.object && m.object_depth + 1 > max_obj) {
                    b.node(Node::Not(i), true)?;
                }
                b.node(Node::Truth(i), true)?;
            }
            for wa in 1..w - 1 {
                let wb = w - 1 - wa;
                for &i in &by_size[wa as usize] {
                    for &j in &by_size[wb as usize] {
                        let (mi, mj) = (&b.members[i], &b.members[j]);
                        if mi.rank.max(mj.rank) + 1 > config.depth {
                            continue;
                        }
                        if mi.object
                            && mj.object
                            && mi.object_depth.max(mj.object_depth) + 1 > max_obj
                        {
                            continue;
                        }
                        for op in Connective::ALL {
                            b.node(Node::Binary(op, i, j), true)?;
                        }
                    }
                }
            }
            b.close()?;
        }
        b.finish(config.depth)
    }

    /// The premise closure of `sentences` with the ring added. Every
    /// predicate's primes and truth forms are included.
    pub fn from_sentences<'a>(
        lang: &dyn ObjectLanguage,
        sentences: impl IntoIterator<Item = &'a Sentence>,
        cap: usize,
    ) -> Result<Fragment, EngineError> {
        let mut b = Builder::new(lang, cap);
        b.seed()?;
        let mut depth = 1;
        for s in sentences {
            let i = b.add_sentence(s)?;
            depth = depth.max(b.members[i].rank);
            b.close()?;
        }
        b.finish(depth)
    }

    /// A fragment with no members.
    pub fn empty() -> Fragment {
        Fragment {
            members: Vec::new(),
            index: HashMap::new(),
            neg: Vec::new(),
            t_atom: Vec::new(),
            deps: Vec::new(),
            w: FixedBitSet::new(),
            constants: Default::default(),
            depth: 0,
            core_len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of core members; they occupy indices `0..core_len()`.
    pub fn core_len(&self) -> usize {
        self.core_len
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Member {
        &self.members[i]
    }

    pub fn index_of(&self, code: &GodelCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn index_of_sentence(&self, s: &Sentence) -> Option<usize> {
        self.index_of(&encode(s))
    }

    pub fn codes(&self) -> CodeSet {
        self.members.iter().map(|m| m.code.clone()).collect()
    }

    /// Index of `¬A` for the member `A`.
    pub fn negation_of(&self, i: usize) -> Option<usize> {
        self.neg[i]
    }

    /// Index of `T(⌈A⌉)` for the member `A`.
    pub fn truth_atom_of(&self, i: usize) -> Option<usize> {
        self.t_atom[i]
    }

    /// Referent index of a truth-atom member.
    pub fn referent_of(&self, i: usize) -> Option<usize> {
        match self.members[i].shape {
            Shape::Truth(r) => r,
            _ => None,
        }
    }

    /// `W` on the fragment.
    pub fn w(&self) -> &FixedBitSet {
        &self.w
    }

    /// Members of `D₁…D₄` (indexed 0..4) present in the fragment.
    pub fn constant_members(&self, k: usize) -> &[usize] {
        &self.constants[k]
    }

    pub(crate) fn shape(&self, i: usize) -> Shape {
        self.members[i].shape
    }

    pub(crate) fn dependents(&self, i: usize) -> &[usize] {
        &self.deps[i]
    }

    pub fn to_bits(&self, set: &CodeSet) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for c in set {
            if let Some(i) = self.index_of(c) {
                bits.insert(i);
            }
        }
        bits
    }

    pub fn to_codes(&self, bits: &FixedBitSet) -> CodeSet {
        bits.ones().map(|i| self.members[i].code.clone()).collect()
    }
}

enum Node {
    Leaf(Sentence),
    Not(usize),
    Truth(usize),
    Binary(Connective, usize, usize),
}

struct Builder<'a> {
    lang: &'a dyn ObjectLanguage,
    cap: usize,
    members: Vec<Member>,
    index: HashMap<GodelCode, usize>,
    neg: Vec<Option<usize>>,
    t_atom: Vec<Option<usize>>,
    pending: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn new(lang: &'a dyn ObjectLanguage, cap: usize) -> Self {
        Builder {
            lang,
            cap,
            members: Vec::new(),
            index: HashMap::new(),
            neg: Vec::new(),
            t_atom: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn seed(&mut self) -> Result<(), EngineError> {
        for s in self.lang.object_primes() {
            self.node(Node::Leaf(s), true)?;
        }
        let mut forms = vec![
            Sentence::forall_t(),
            Sentence::exists_t(),
            Sentence::forall_tt(),
            Sentence::exists_tt(),
        ];
        for p in self.lang.predicates() {
            forms.push(Sentence::forall_tp(&p));
            forms.push(Sentence::exists_tp(&p));
        }
        for s in forms {
            self.node(Node::Leaf(s), true)?;
        }
        Ok(())
    }

    fn add_sentence(&mut self, s: &Sentence) -> Result<usize, EngineError> {
        let node = match s {
            Sentence::ObjAtom { pred, elem } => {
                if self.lang.holds(pred, elem).is_none() {
                    return Err(EngineError::Vocabulary(s.to_string()));
                }
                Node::Leaf(s.clone())
            }
            Sentence::ObjForall(p)
            | Sentence::ObjExists(p)
            | Sentence::Form(TruthForm::ForallTP(p))
            | Sentence::Form(TruthForm::ExistsTP(p)) => {
                if self.lang.domain_of(p).is_none() {
                    return Err(EngineError::Vocabulary(s.to_string()));
                }
                Node::Leaf(s.clone())
            }
            Sentence::Form(_) => Node::Leaf(s.clone()),
            Sentence::TAtom(_) => match s.referent() {
                Some(r) => Node::Truth(self.add_sentence(&r)?),
                None => Node::Leaf(s.clone()),
            },
            Sentence::Not(a) => Node::Not(self.add_sentence(a)?),
            Sentence::Binary(op, a, b) => {
                let a = self.add_sentence(a)?;
                let b = self.add_sentence(b)?;
                Node::Binary(*op, a, b)
            }
        };
        self.node(node, true)
    }

    /// Interns a node; new core nodes are queued for premise closure.
    fn node(&mut self, node: Node, core: bool) -> Result<usize, EngineError> {
        let code = match &node {
            Node::Leaf(s) => encode(s),
            Node::Not(a) => negation_code(&self.members[*a].code),
            Node::Truth(a) => truth_atom_code(&self.members[*a].code),
            Node::Binary(op, a, b) => {
                binary_code(*op, &self.members[*a].code, &self.members[*b].code)
            }
        };
        if let Some(&i) = self.index.get(&code) {
            return Ok(i);
        }
        if self.members.len() >= self.cap {
            return Err(EngineError::FragmentTooLarge { cap: self.cap });
        }
        let m = |i: usize| &self.members[i];
        let member = match node {
            Node::Leaf(s) => {
                let object = s.is_object();
                let valuation = if object {
                    self.lang.valuate(&s).ok()
                } else {
                    None
                };
                let shape = match &s {
                    Sentence::TAtom(_) => Shape::Truth(None),
                    Sentence::Form(_) => Shape::Form,
                    _ => Shape::Prime,
                };
                let rank = if object { 0 } else { 1 };
                Member {
                    sentence: s,
                    code: code.clone(),
                    rank,
                    size: 1,
                    object,
                    core,
                    shape,
                    object_depth: 0,
                    valuation,
                }
            }
            Node::Not(a) => {
                let ma = m(a);
                Member {
                    sentence: Sentence::negate(ma.sentence.clone()),
                    code: code.clone(),
                    rank: ma.rank + 1,
                    size: ma.size + 1,
                    object: ma.object,
                    core,
                    shape: Shape::Not(a),
                    object_depth: ma.object_depth + 1,
                    valuation: ma.valuation.map(|v| !v),
                }
            }
            Node::Truth(a) => {
                let ma = m(a);
                Member {
                    sentence: Sentence::TAtom(ma.code.numeral()),
                    code: code.clone(),
                    rank: ma.rank + 1,
                    size: ma.size + 1,
                    object: false,
                    core,
                    shape: Shape::Truth(Some(a)),
                    object_depth: 0,
                    valuation: None,
                }
            }
            Node::Binary(op, a, b) => {
                let (ma, mb) = (m(a), m(b));
                let valuation = match (ma.valuation, mb.valuation) {
                    (Some(x), Some(y)) => Some(match op {
                        Connective::Or => x || y,
                        Connective::And => x && y,
                        Connective::Implies => !x || y,
                        Connective::Iff => x == y,
                    }),
                    _ => None,
                };
                Member {
                    sentence: Sentence::binary(op, ma.sentence.clone(), mb.sentence.clone()),
                    code: code.clone(),
                    rank: ma.rank.max(mb.rank) + 1,
                    size: ma.size + mb.size + 1,
                    object: ma.object && mb.object,
                    core,
                    shape: Shape::Binary(op, a, b),
                    object_depth: ma.object_depth.max(mb.object_depth) + 1,
                    valuation,
                }
            }
        };
        let i = self.members.len();
        match member.shape {
            Shape::Not(a) => self.neg[a] = Some(i),
            Shape::Truth(Some(a)) => self.t_atom[a] = Some(i),
            _ => {}
        }
        self.members.push(member);
        self.index.insert(code, i);
        self.neg.push(None);
        self.t_atom.push(None);
        if core {
            self.pending.push(i);
        }
        Ok(i)
    }

    /// Adds the premises every pending member needs.
    fn close(&mut self) -> Result<(), EngineError> {
        while let Some(i) = self.pending.pop() {
            match self.members[i].shape {
                Shape::Prime | Shape::Form | Shape::Truth(None) => {}
                Shape::Truth(Some(a)) => {
                    self.node(Node::Not(a), true)?;
                }
                Shape::Binary(_, a, b) => {
                    self.node(Node::Not(a), true)?;
                    self.node(Node::Not(b), true)?;
                }
                Shape::Not(x) => match self.members[x].shape {
                    Shape::Binary(_, a, b) => {
                        self.node(Node::Not(a), true)?;
                        self.node(Node::Not(b), true)?;
                    }
                    Shape::Truth(Some(a)) => {
                        self.node(Node::Not(a), true)?;
                    }
                    _ => {}
                },
            }
        }
        Ok(())
    }

    fn finish(mut self, depth: u32) -> Result<Fragment, EngineError> {
        self.close()?;
        let core_len = self.members.len();
        for i in 0..core_len {
            if self.neg[i].is_none() {
                self.node(Node::Not(i), false)?;
            }
        }
        let n = self.members.len();
        let mut deps = vec![Vec::new(); n];
        let neg = &self.neg;
        let link = |deps: &mut Vec<Vec<usize>>, c: usize, a: usize, b: usize| {
            let mut ps: Vec<usize> = [Some(a), Some(b), neg[a], neg[b]]
                .into_iter()
                .flatten()
                .collect();
            ps.sort_unstable();
            ps.dedup();
            for p in ps {
                deps[p].push(c);
            }
        };
        for c in 0..n {
            match self.members[c].shape {
                Shape::Binary(_, a, b) => link(&mut deps, c, a, b),
                Shape::Not(x) => match self.members[x].shape {
                    Shape::Not(a) => deps[a].push(c),
                    Shape::Binary(_, a, b) => link(&mut deps, c, a, b),
                    _ => {}
                },
                _ => {}
            }
        }
        let mut w = FixedBitSet::with_capacity(n);
        for (i, m) in self.members.iter().enumerate() {
            if m.valuation == Some(true) {
                w.insert(i);
            }
        }
        let constants = self.constant_sets();
        Ok(Fragment {
            members: self.members,
            index: self.index,
            neg: self.neg,
            t_atom: self.t_atom,
            deps,
            w,
            constants,
            depth,
            core_len,
        })
    }

    fn constant_sets(&self) -> [Vec<usize>; 4] {
        use crate::object::PredicateClass;
        let find = |s: &Sentence| self.index.get(&encode(s)).copied();
        let not = |s: Sentence| Sentence::negate(s);
        let d1 = [
            not(Sentence::forall_t()),
            Sentence::exists_t(),
            not(Sentence::forall_tt()),
            Sentence::exists_tt(),
        ];
        let mut sets: [Vec<usize>; 4] = Default::default();
        sets[0] = d1.iter().filter_map(find).collect();
        for p in self.lang.predicates() {
            let (all, ex) = (Sentence::forall_tp(&p), Sentence::exists_tp(&p));
            let (k, list) = match self.lang.classify(&p) {
                Ok(PredicateClass::P1) => (1, [all, ex]),
                Ok(PredicateClass::P2) => (2, [not(all), not(ex)]),
                Ok(PredicateClass::P3) => (3, [not(all), ex]),
                Err(_) => continue,
            };
            sets[k].extend(list.iter().filter_map(find));
        }
        sets
    }
}
