//! `D`-sets, `G₀`, the closure rules `Gₙᵏ`, `G(U)`, `F(U)` and the least
//! fixed point, computed over a fragment.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::fragment::{Fragment, Shape};
use super::{CodeSet, EngineError, Verdict};
use crate::syntax::{Connective, Numeral};

/// How a member entered a stage set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// A true object sentence, member of `W`.
    Seed,
    /// `T(⌈A⌉)` from `#A ∈ U`; carries the index of `A`.
    TruthOf { referent: usize },
    /// `¬T(⌈A⌉)` from `#[¬A] ∈ U`; carries the index of `¬A`.
    FalsityOf { negated_referent: usize },
    /// Member of the constant set `D₁…D₄` (1-based).
    Constant(u8),
    /// Closure rule `Gⁿᵏ` for `k` in `0..=8`, with its premises.
    Closure { rule: u8, premises: Vec<usize> },
}

/// The derivation that first admitted a member to `U_stage`: the rule and the
/// inner level `n` of `G_n(U_{stage-1})` at which it fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub stage: u32,
    pub level: u32,
    pub rule: Rule,
}

/// The six `D`-sets restricted to a fragment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DSets {
    pub d1u: CodeSet,
    pub d2u: CodeSet,
    pub d1: CodeSet,
    pub d2: CodeSet,
    pub d3: CodeSet,
    pub d4: CodeSet,
}

pub fn d_sets(u: &CodeSet, fragment: &Fragment) -> DSets {
    let bits = fragment.to_bits(u);
    let mut d1u = FixedBitSet::with_capacity(fragment.len());
    let mut d2u = FixedBitSet::with_capacity(fragment.len());
    for i in bits.ones() {
        if let Some(t) = fragment.truth_atom_of(i) {
            d1u.insert(t);
        }
        if let Some(nt) = falsity_atom(fragment, i) {
            d2u.insert(nt);
        }
    }
    let constant = |k: usize| {
        fragment
            .constant_members(k)
            .iter()
            .map(|&i| fragment.member(i).code.clone())
            .collect()
    };
    DSets {
        d1u: fragment.to_codes(&d1u),
        d2u: fragment.to_codes(&d2u),
        d1: constant(0),
        d2: constant(1),
        d3: constant(2),
        d4: constant(3),
    }
}

/// For a member `¬A`, the index of `¬T(⌈A⌉)`.
fn falsity_atom(fragment: &Fragment, i: usize) -> Option<usize> {
    match fragment.shape(i) {
        Shape::Not(a) => fragment
            .truth_atom_of(a)
            .and_then(|t| fragment.negation_of(t)),
        _ => None,
    }
}

pub fn g0(u: &CodeSet, fragment: &Fragment) -> CodeSet {
    let (bits, _) = g0_bits(fragment, &fragment.to_bits(u), false);
    fragment.to_codes(&bits)
}

/// One application of the nine closure rules, united with the input.
pub fn step(gn: &CodeSet, fragment: &Fragment) -> CodeSet {
    let cur = fragment.to_bits(gn);
    let mut next = cur.clone();
    for c in 0..fragment.len() {
        if !cur.contains(c) && derive(fragment, c, &cur).is_some() {
            next.insert(c);
        }
    }
    fragment.to_codes(&next)
}

pub fn g_of(u: &CodeSet, fragment: &Fragment) -> CodeSet {
    fragment.to_codes(&g_of_bits(fragment, &fragment.to_bits(u), false).set)
}

/// `F(U)` from `G(U)`: codes of `A` with `#[¬A] ∈ G`.
pub fn f_of(g: &CodeSet, fragment: &Fragment) -> CodeSet {
    fragment.to_codes(&f_bits(fragment, &fragment.to_bits(g)))
}

pub(crate) fn f_bits(fragment: &Fragment, g: &FixedBitSet) -> FixedBitSet {
    let mut f = FixedBitSet::with_capacity(fragment.len());
    for i in 0..fragment.len() {
        if fragment.negation_of(i).is_some_and(|n| g.contains(n)) {
            f.insert(i);
        }
    }
    f
}

fn g0_bits(fragment: &Fragment, u: &FixedBitSet, track: bool) -> (FixedBitSet, Vec<Option<Rule>>) {
    let n = fragment.len();
    let mut set = fragment.w().clone();
    set.grow(n);
    let mut why: Vec<Option<Rule>> = Vec::new();
    if track {
        why = vec![None; n];
        for i in set.ones() {
            why[i] = Some(Rule::Seed);
        }
    }
    if u.is_clear() {
        return (set, why);
    }
    let mut admit = |set: &mut FixedBitSet, i: usize, rule: Rule| {
        if !set.put(i) && track {
            why[i] = Some(rule);
        }
    };
    for i in u.ones() {
        if let Some(t) = fragment.truth_atom_of(i) {
            admit(&mut set, t, Rule::TruthOf { referent: i });
        }
        if let Some(nt) = falsity_atom(fragment, i) {
            admit(
                &mut set,
                nt,
                Rule::FalsityOf {
                    negated_referent: i,
                },
            );
        }
    }
    for k in 0..4 {
        for &i in fragment.constant_members(k) {
            admit(&mut set, i, Rule::Constant(k as u8 + 1));
        }
    }
    (set, why)
}

/// Checks whether one of `G⁰…G⁸` puts member `c` into the next inner
/// level given the current one.
pub(crate) fn derive(fragment: &Fragment, c: usize, set: &FixedBitSet) -> Option<(u8, Vec<usize>)> {
    let has = |i: Option<usize>| i.is_some_and(|i| set.contains(i));
    let neg = |i: usize| fragment.negation_of(i);
    match fragment.shape(c) {
        Shape::Binary(op, a, b) => {
            let (ta, tb, fa, fb) = (has(Some(a)), has(Some(b)), has(neg(a)), has(neg(b)));
            match op {
                Connective::Or if ta => Some((1, vec![a])),
                Connective::Or if tb => Some((1, vec![b])),
                Connective::And if ta && tb => Some((2, vec![a, b])),
                Connective::Implies if fa => Some((3, vec![neg(a)?])),
                Connective::Implies if tb => Some((3, vec![b])),
                Connective::Iff if ta && tb => Some((4, vec![a, b])),
                Connective::Iff if fa && fb => Some((4, vec![neg(a)?, neg(b)?])),
                _ => None,
            }
        }
        Shape::Not(x) => match fragment.shape(x) {
            Shape::Not(a) if set.contains(a) => Some((0, vec![a])),
            Shape::Binary(op, a, b) => {
                let (ta, tb, fa, fb) = (has(Some(a)), has(Some(b)), has(neg(a)), has(neg(b)));
                match op {
                    Connective::Or if fa && fb => Some((5, vec![neg(a)?, neg(b)?])),
                    Connective::And if fa => Some((6, vec![neg(a)?])),
                    Connective::And if fb => Some((6, vec![neg(b)?])),
                    Connective::Implies if ta && fb => Some((7, vec![a, neg(b)?])),
                    Connective::Iff if ta && fb => Some((8, vec![a, neg(b)?])),
                    Connective::Iff if fa && tb => Some((8, vec![neg(a)?, b])),
                    _ => None,
                }
            }
            _ => None,
        },
        _ => None,
    }
}

pub(crate) struct Closure {
    pub set: FixedBitSet,
    /// Per member: inner level and rule, when tracked.
    pub why: Vec<Option<(u32, Rule)>>,
}

/// `G(U)` by semi-naive iteration: only members added in the previous level
/// can make a dependent derivable in the next one.
pub(crate) fn g_of_bits(fragment: &Fragment, u: &FixedBitSet, track: bool) -> Closure {
    let (mut set, seeds) = g0_bits(fragment, u, track);
    let mut why: Vec<Option<(u32, Rule)>> = seeds.into_iter().map(|r| r.map(|r| (0, r))).collect();
    let mut delta: Vec<usize> = set.ones().collect();
    let mut queued = FixedBitSet::with_capacity(fragment.len());
    let mut level = 0;
    while !delta.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &m in &delta {
            for &c in fragment.dependents(m) {
                if set.contains(c) || queued.contains(c) {
                    continue;
                }
                if let Some((rule, premises)) = derive(fragment, c, &set) {
                    queued.insert(c);
                    next.push(c);
                    if track {
                        why[c] = Some((level, Rule::Closure { rule, premises }));
                    }
                }
            }
        }
        for &c in &next {
            set.insert(c);
        }
        delta = next;
    }
    Closure { set, why }
}

/// Result of saturating a fragment: the stages `U₀ ⊆ U₁ ⊆ …`, `G(U)`,
/// `F(U)` and per-member stage indices and provenance.
#[derive(Debug, Clone)]
pub struct TruthSets<'f> {
    fragment: &'f Fragment,
    stages: Vec<FixedBitSet>,
    false_set: FixedBitSet,
    stage_of: Vec<Option<u32>>,
    provenance: Vec<Option<Provenance>>,
    fixed_point_stage: u32,
}

/// Iterates `U₀ = W`, `U_{k+1} = G(U_k)` until `U_{k+1} = U_k`.
pub fn fixed_point(fragment: &Fragment) -> Result<TruthSets<'_>, EngineError> {
    let n = fragment.len();
    let mut u = fragment.w().clone();
    u.grow(n);
    let mut stage_of = vec![None; n];
    let mut provenance = vec![None; n];
    for i in u.ones() {
        stage_of[i] = Some(0);
        provenance[i] = Some(Provenance {
            stage: 0,
            level: 0,
            rule: Rule::Seed,
        });
    }
    check_consistent(fragment, &u, 0)?;
    let mut stages = vec![u];
    loop {
        let k = stages.len() as u32 - 1;
        let current = &stages[k as usize];
        let Closure { set: next, why } = g_of_bits(fragment, current, true);
        check_consistent(fragment, &next, k + 1)?;
        if !current.is_subset(&next) {
            return Err(EngineError::InconsistencyDetected(format!(
                "stage {} is not contained in stage {}",
                k,
                k + 1
            )));
        }
        if next == *current {
            stages.push(next);
            let final_set = &stages[stages.len() - 1];
            let false_set = f_bits(fragment, final_set);
            return Ok(TruthSets {
                fragment,
                stages,
                false_set,
                stage_of,
                provenance,
                fixed_point_stage: k,
            });
        }
        for i in next.difference(current) {
            stage_of[i] = Some(k + 1);
            let (level, rule) = why[i].clone().expect("every new member has a derivation");
            provenance[i] = Some(Provenance {
                stage: k + 1,
                level,
                rule,
            });
        }
        stages.push(next);
    }
}

fn check_consistent(fragment: &Fragment, set: &FixedBitSet, stage: u32) -> Result<(), EngineError> {
    for i in set.ones() {
        if let Some(n) = fragment.negation_of(i) {
            if set.contains(n) {
                return Err(EngineError::InconsistencyDetected(format!(
                    "{} and its negation both in stage {stage}",
                    fragment.member(i).sentence
                )));
            }
        }
    }
    Ok(())
}

/// Saturation summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub schema_version: u32,
    pub fragment_size: usize,
    pub core_size: usize,
    pub stages: Vec<usize>,
    pub fixed_point_stage: u32,
    pub g_size: usize,
    pub f_size: usize,
    /// Core members in neither `G(U)` nor `F(U)`.
    pub outside_l0: usize,
    pub consistent: bool,
}

impl<'f> TruthSets<'f> {
    pub fn fragment(&self) -> &'f Fragment {
        self.fragment
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    pub fn stage_bits(&self, k: usize) -> &FixedBitSet {
        &self.stages[k]
    }

    pub fn stage(&self, k: usize) -> CodeSet {
        self.fragment.to_codes(&self.stages[k])
    }

    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.count_ones(..)).collect()
    }

    /// The least `k` with `U_{k+1} = U_k`.
    pub fn fixed_point_stage(&self) -> u32 {
        self.fixed_point_stage
    }

    pub fn final_bits(&self) -> &FixedBitSet {
        &self.stages[self.stages.len() - 1]
    }

    pub fn false_bits(&self) -> &FixedBitSet {
        &self.false_set
    }

    /// `G(U)` at the fixed point.
    pub fn final_codes(&self) -> CodeSet {
        self.fragment.to_codes(self.final_bits())
    }

    /// `F(U)` at the fixed point.
    pub fn false_codes(&self) -> CodeSet {
        self.fragment.to_codes(&self.false_set)
    }

    pub fn is_true(&self, i: usize) -> bool {
        self.final_bits().contains(i)
    }

    pub fn is_false(&self, i: usize) -> bool {
        self.false_set.contains(i)
    }

    /// First stage at which member `i` is in `U_k`.
    pub fn stage_of(&self, i: usize) -> Option<u32> {
        self.stage_of[i]
    }

    pub fn provenance(&self, i: usize) -> Option<&Provenance> {
        self.provenance[i].as_ref()
    }

    /// Membership verdict: `True(k)` when in `G(U)`, `False(k)` when in
    /// `F(U)` (with `k` the stage of the negation), else `OutsideL0`.
    pub fn verdict_of(&self, i: usize) -> Verdict {
        if let Some(k) = self.stage_of[i] {
            Verdict::True(k)
        } else if self.is_false(i) {
            let n = self
                .fragment
                .negation_of(i)
                .expect("false members have a negation");
            Verdict::False(self.stage_of[n].expect("negation is in G(U)"))
        } else {
            Verdict::OutsideL0
        }
    }

    /// `X_T`: numerals of codes in `G(U) ∪ F(U)`.
    pub fn x_t(&self) -> Vec<Numeral> {
        let mut decided = self.final_bits().clone();
        decided.union_with(&self.false_set);
        decided
            .ones()
            .map(|i| self.fragment.member(i).code.numeral())
            .collect()
    }

    /// Core members in neither `G(U)` nor `F(U)`.
    pub fn outside_l0(&self) -> usize {
        (0..self.fragment.core_len())
            .filter(|&i| !self.is_true(i) && !self.is_false(i))
            .count()
    }

    pub fn is_consistent(&self) -> bool {
        check_consistent(self.fragment, self.final_bits(), 0).is_ok()
            && self.final_bits().is_disjoint(&self.false_set)
    }

    pub fn report(&self) -> SaturationReport {
        SaturationReport {
            schema_version: 1,
            fragment_size: self.fragment.len(),
            core_size: self.fragment.core_len(),
            stages: self.stage_sizes(),
            fixed_point_stage: self.fixed_point_stage,
            g_size: self.final_bits().count_ones(..),
            f_size: self.false_set.count_ones(..),
            outside_l0: self.outside_l0(),
            consistent: self.is_consistent(),
        }
    }

    /// Replays a provenance record against the stored stages: the rule's
    /// premises must be present where the rule requires them and the rule
    /// must produce member `i`.
    pub fn replay(&self, i: usize, p: &Provenance) -> bool {
        let f = self.fragment;
        let stage = p.stage as usize;
        if stage >= self.stages.len() || !self.stages[stage].contains(i) {
            return false;
        }
        match &p.rule {
            Rule::Seed => f.w().contains(i),
            _ if stage == 0 => false,
            Rule::TruthOf { referent } => {
                self.stages[stage - 1].contains(*referent) && f.truth_atom_of(*referent) == Some(i)
            }
            Rule::FalsityOf { negated_referent } => {
                self.stages[stage - 1].contains(*negated_referent)
                    && falsity_atom(f, *negated_referent) == Some(i)
            }
            Rule::Constant(k) => {
                (1..=4).contains(k) && f.constant_members(*k as usize - 1).contains(&i)
            }
            Rule::Closure { rule, premises } => {
                let mut only = FixedBitSet::with_capacity(f.len());
                for &q in premises {
                    if !self.stages[stage].contains(q) {
                        return false;
                    }
                    only.insert(q);
                }
                derive(f, i, &only).is_some_and(|(r, _)| r == *rule)
            }
        }
    }
}
