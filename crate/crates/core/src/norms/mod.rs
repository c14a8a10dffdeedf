//! Mechanical checks of the truth rules, the compositionality laws and the
//! norms they support, run against any [`Semantics`] over a saturated
//! fragment.

mod report;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::engine::{Semantics, TruthSets, Verdict};
use crate::syntax::{Connective, Numeral, Sentence, TruthForm};

pub use report::{NormStatus, NormsReport};

/// Every check the suite runs, in report order.
pub const CHECK_IDS: [&str; 28] = [
    "t0",
    "t1",
    "t2",
    "t3",
    "t4",
    "t5",
    "t6",
    "t7",
    "tt6",
    "tt7",
    "tp6",
    "tp7",
    "a1",
    "a2",
    "a3",
    "a4",
    "a5",
    "a6",
    "a7",
    "a8",
    "a9",
    "biconditionals",
    "conservativity",
    "disjointness",
    "xt_totality",
    "untyped",
    "oracle",
    "stages",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Pair checks run exhaustively when the number of ordered pairs is at
    /// most this, and on `samples` seeded pairs otherwise.
    pub pair_threshold: usize,
    pub samples: usize,
    pub max_counterexamples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            pair_threshold: 200_000,
            samples: 100_000,
            max_counterexamples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormsError {
    #[error("the fragment has no decided sentences to check")]
    EmptyUniverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// Number of instances checked.
    pub universe: usize,
    pub pass: bool,
    /// Failing instances, rank-minimal first.
    #[serde(serialize_with = "as_text")]
    pub counterexamples: Vec<Sentence>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn as_text<S: Serializer>(v: &[Sentence], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(ToString::to_string))
}

/// The checks over one saturated fragment.
pub struct Suite<'a, 'f> {
    sem: &'a dyn Semantics,
    sets: &'a TruthSets<'f>,
    config: SuiteConfig,
    /// Members in `G(U) ∪ F(U)`, in fragment order.
    decided: Vec<Sentence>,
    x_t: Vec<Numeral>,
}

fn t(v: Verdict) -> bool {
    v.is_true()
}

fn f(v: Verdict) -> bool {
    v.is_false()
}

impl<'a, 'f> Suite<'a, 'f> {
    pub fn new(
        sem: &'a dyn Semantics,
        sets: &'a TruthSets<'f>,
        config: SuiteConfig,
    ) -> Result<Self, NormsError> {
        let fragment = sets.fragment();
        let decided: Vec<Sentence> = (0..fragment.len())
            .filter(|&i| sets.is_true(i) || sets.is_false(i))
            .map(|i| fragment.member(i).sentence.clone())
            .collect();
        if decided.is_empty() {
            return Err(NormsError::EmptyUniverse);
        }
        Ok(Suite {
            sem,
            sets,
            config,
            decided,
            x_t: sets.x_t(),
        })
    }

    fn v(&self, s: &Sentence) -> Verdict {
        self.sem.verdict(s)
    }

    /// Whether the rule `id` holds at `instance`; `None` for an unknown id
    /// or an instance of the wrong shape.
    pub fn holds(&self, id: &str, instance: &Sentence) -> Option<bool> {
        let not = |s: &Sentence| Sentence::negate(s.clone());
        let tr = Sentence::truth_of;
        let iff = |a: Sentence, b: Sentence| Sentence::iff(a, b);
        let pair = |op: Connective| match instance {
            Sentence::Binary(o, a, b) if *o == op => Some((&**a, &**b)),
            _ => None,
        };
        Some(match id {
            "t0" => t(self.v(&not(&not(instance)))) == t(self.v(instance)),
            "t1" => {
                let (a, n) = (self.v(instance), self.v(&not(instance)));
                t(a) == f(n) && f(a) == t(n)
            }
            "t2" | "t3" | "t4" | "t5" => {
                let op = match id {
                    "t2" => Connective::Or,
                    "t3" => Connective::And,
                    "t4" => Connective::Implies,
                    _ => Connective::Iff,
                };
                let (a, b) = pair(op)?;
                let (a, b, c) = (self.v(a), self.v(b), self.v(instance));
                let (want_t, want_f) = match op {
                    Connective::Or => (t(a) || t(b), f(a) && f(b)),
                    Connective::And => (t(a) && t(b), f(a) || f(b)),
                    Connective::Implies => (f(a) || t(b), t(a) && f(b)),
                    Connective::Iff => (
                        (t(a) && t(b)) || (f(a) && f(b)),
                        (t(a) && f(b)) || (f(a) && t(b)),
                    ),
                };
                t(c) == want_t && f(c) == want_f
            }
            "t6" | "t7" | "tt6" | "tt7" | "tp6" | "tp7" => {
                let (existential, form_ok) = match (id, instance) {
                    ("t6", Sentence::Form(TruthForm::ExistsT)) => (true, true),
                    ("t7", Sentence::Form(TruthForm::ForallT)) => (false, true),
                    ("tt6", Sentence::Form(TruthForm::ExistsTT)) => (true, true),
                    ("tt7", Sentence::Form(TruthForm::ForallTT)) => (false, true),
                    ("tp6", Sentence::Form(TruthForm::ExistsTP(_))) => (true, true),
                    ("tp7", Sentence::Form(TruthForm::ForallTP(_))) => (false, true),
                    _ => (false, false),
                };
                if !form_ok {
                    return None;
                }
                let vals: Vec<Verdict> = self
                    .instances_of(instance)?
                    .iter()
                    .map(|s| self.v(s))
                    .collect();
                let c = self.v(instance);
                if existential {
                    t(c) == vals.iter().any(|&x| t(x)) && f(c) == vals.iter().all(|&x| f(x))
                } else {
                    t(c) == vals.iter().all(|&x| t(x)) && f(c) == vals.iter().any(|&x| f(x))
                }
            }
            "a1" => t(self.v(&iff(tr(&not(instance)), not(&tr(instance))))),
            "a2" | "a3" | "a4" | "a5" => {
                let op = match id {
                    "a2" => Connective::Or,
                    "a3" => Connective::And,
                    "a4" => Connective::Implies,
                    _ => Connective::Iff,
                };
                let (a, b) = pair(op)?;
                t(self.v(&iff(tr(instance), Sentence::binary(op, tr(a), tr(b)))))
            }
            "a6" | "a7" | "a8" | "a9" => {
                let rhs = match (id, instance) {
                    ("a6", Sentence::ObjForall(p)) => Sentence::forall_tp(p),
                    ("a7", Sentence::ObjExists(p)) => Sentence::exists_tp(p),
                    ("a8", Sentence::Form(TruthForm::ForallT)) => Sentence::forall_tt(),
                    ("a9", Sentence::Form(TruthForm::ExistsT)) => Sentence::exists_tt(),
                    _ => return None,
                };
                t(self.v(&iff(tr(instance), rhs)))
            }
            "biconditionals" => {
                t(self.v(&iff(instance.clone(), tr(instance))))
                    && f(self.v(&iff(instance.clone(), not(&tr(instance)))))
            }
            "conservativity" => {
                let lang = self.sem.language();
                match (lang.valuate(instance), self.v(instance)) {
                    (Ok(true), Verdict::True(_)) | (Ok(false), Verdict::False(_)) => true,
                    (Err(_), _) => return None,
                    _ => false,
                }
            }
            "disjointness" => {
                let fragment = self.sets.fragment();
                let by_sets = fragment
                    .index_of_sentence(instance)
                    .is_some_and(|i| self.sets.is_true(i) && self.sets.is_false(i));
                !by_sets && !(t(self.v(instance)) && t(self.v(&not(instance))))
            }
            "xt_totality" => self.v(instance).is_decided(),
            "untyped" => {
                let a = self.v(instance).value();
                let once = tr(instance);
                a.is_some() && self.v(&once).value() == a && self.v(&tr(&once)).value() == a
            }
            "oracle" => {
                let fragment = self.sets.fragment();
                let i = fragment.index_of_sentence(instance)?;
                if !fragment.member(i).core {
                    return None;
                }
                self.v(instance) == self.sets.verdict_of(i)
            }
            "stages" => {
                // The stage a verdict reports is the first stage set holding
                // the sentence (true) or its negation (false).
                let fragment = self.sets.fragment();
                let i = fragment.index_of_sentence(instance)?;
                let v = self.v(instance);
                let at = match v {
                    Verdict::True(k) => Some((i, k)),
                    Verdict::False(k) => fragment.negation_of(i).map(|n| (n, k)),
                    Verdict::OutsideL0 => None,
                };
                match at {
                    Some((j, k)) => {
                        let k = k as usize;
                        k < self.sets.stage_count()
                            && self.sets.stage_bits(k).contains(j)
                            && (k == 0 || !self.sets.stage_bits(k - 1).contains(j))
                    }
                    None => true,
                }
            }
            _ => return None,
        })
    }

    /// Instances a quantified truth form ranges over: `T(x)` or
    /// `T(⌈T(x)⌉)` for `x ∈ X_T`, `T(⌈P(x)⌉)` for `x ∈ X_P`.
    fn instances_of(&self, form: &Sentence) -> Option<Vec<Sentence>> {
        Some(match form {
            Sentence::Form(TruthForm::ExistsT | TruthForm::ForallT) => self
                .x_t
                .iter()
                .map(|x| Sentence::TAtom(x.clone()))
                .collect(),
            Sentence::Form(TruthForm::ExistsTT | TruthForm::ForallTT) => self
                .x_t
                .iter()
                .map(|x| Sentence::truth_of(&Sentence::TAtom(x.clone())))
                .collect(),
            Sentence::Form(TruthForm::ExistsTP(p) | TruthForm::ForallTP(p)) => self
                .sem
                .language()
                .domain_of(p)?
                .iter()
                .map(|x| Sentence::truth_of(&Sentence::atom(p, x)))
                .collect(),
            _ => return None,
        })
    }

    fn pairs(&self, op: Connective, stream: u64) -> Vec<Sentence> {
        let n = self.decided.len();
        let d = &self.decided;
        let exhaustive = n
            .checked_mul(n)
            .is_some_and(|pairs| pairs <= self.config.pair_threshold);
        if exhaustive {
            let mut out = Vec::with_capacity(n * n);
            for a in d {
                for b in d {
                    out.push(Sentence::binary(op, a.clone(), b.clone()));
                }
            }
            out
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
            rng.set_stream(stream);
            (0..self.config.samples)
                .map(|_| {
                    let a = &d[rng.random_range(0..n)];
                    let b = &d[rng.random_range(0..n)];
                    Sentence::binary(op, a.clone(), b.clone())
                })
                .collect()
        }
    }

    fn predicates(&self) -> Vec<crate::syntax::Name> {
        self.sem.language().predicates()
    }

    /// Instance sentences for a check and the number of evaluations they
    /// stand for.
    fn universe(&self, id: &str) -> (Vec<Sentence>, usize) {
        let stream = CHECK_IDS.iter().position(|&c| c == id).unwrap_or(0) as u64;
        let fragment = self.sets.fragment();
        let unary = || (self.decided.clone(), self.decided.len());
        let single = |s: Sentence| {
            let n = self.instances_of(&s).map_or(0, |v| v.len());
            (vec![s], n)
        };
        let per_predicate = |mk: fn(&crate::syntax::Name) -> Sentence| {
            let forms: Vec<Sentence> = self.predicates().iter().map(mk).collect();
            let n = forms
                .iter()
                .map(|s| self.instances_of(s).map_or(0, |v| v.len()))
                .sum();
            (forms, n)
        };
        let sized = |v: Vec<Sentence>| {
            let n = v.len();
            (v, n)
        };
        match id {
            "t0" | "t1" | "a1" | "untyped" => unary(),
            "t2" | "a2" => sized(self.pairs(Connective::Or, stream)),
            "t3" | "a3" => sized(self.pairs(Connective::And, stream)),
            "t4" | "a4" => sized(self.pairs(Connective::Implies, stream)),
            "t5" | "a5" => sized(self.pairs(Connective::Iff, stream)),
            "t6" => single(Sentence::exists_t()),
            "t7" => single(Sentence::forall_t()),
            "tt6" => single(Sentence::exists_tt()),
            "tt7" => single(Sentence::forall_tt()),
            "tp6" => per_predicate(Sentence::exists_tp),
            "tp7" => per_predicate(Sentence::forall_tp),
            "a6" => sized(
                self.predicates()
                    .into_iter()
                    .map(Sentence::ObjForall)
                    .collect(),
            ),
            "a7" => sized(
                self.predicates()
                    .into_iter()
                    .map(Sentence::ObjExists)
                    .collect(),
            ),
            "a8" => sized(vec![Sentence::forall_t()]),
            "a9" => sized(vec![Sentence::exists_t()]),
            "biconditionals" => {
                let max_rank = fragment.depth().saturating_sub(2);
                sized(
                    self.decided
                        .iter()
                        .filter(|s| s.rank() <= max_rank)
                        .cloned()
                        .collect(),
                )
            }
            "conservativity" => sized(
                fragment
                    .members()
                    .iter()
                    .filter(|m| m.object)
                    .map(|m| m.sentence.clone())
                    .collect(),
            ),
            "disjointness" | "stages" => sized(
                fragment
                    .members()
                    .iter()
                    .map(|m| m.sentence.clone())
                    .collect(),
            ),
            "xt_totality" => sized(
                self.x_t
                    .iter()
                    .map(|x| Sentence::TAtom(x.clone()))
                    .collect(),
            ),
            "oracle" => sized(
                fragment
                    .members()
                    .iter()
                    .filter(|m| m.core)
                    .map(|m| m.sentence.clone())
                    .collect(),
            ),
            _ => (Vec::new(), 0),
        }
    }

    /// Runs one check.
    pub fn run(&self, id: &str) -> CheckResult {
        let start = Instant::now();
        let (instances, universe) = self.universe(id);
        let mut failures: Vec<Sentence> = instances
            .into_iter()
            .filter(|s| self.holds(id, s) == Some(false))
            .collect();
        failures.sort_by_cached_key(|s| (s.rank(), s.unfolded_size(), s.to_string()));
        failures.dedup();
        failures.truncate(self.config.max_counterexamples);
        CheckResult {
            id: id.to_string(),
            universe,
            pass: failures.is_empty(),
            counterexamples: failures,
            elapsed: start.elapsed(),
        }
    }

    pub fn run_all(&self) -> Vec<CheckResult> {
        CHECK_IDS.iter().map(|id| self.run(id)).collect()
    }

    /// `(t0)`–`(t5)`.
    pub fn connective_rules(&self) -> Vec<CheckResult> {
        ["t0", "t1", "t2", "t3", "t4", "t5"]
            .iter()
            .map(|id| self.run(id))
            .collect()
    }

    /// `(t6)`, `(t7)`, `(tt6)`, `(tt7)`, `(tp6)`, `(tp7)`.
    pub fn quantifier_rules(&self) -> Vec<CheckResult> {
        ["t6", "t7", "tt6", "tt7", "tp6", "tp7"]
            .iter()
            .map(|id| self.run(id))
            .collect()
    }

    /// `(a1)`–`(a9)`.
    pub fn compositionality(&self) -> Vec<CheckResult> {
        ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"]
            .iter()
            .map(|id| self.run(id))
            .collect()
    }

    pub fn biconditionals(&self) -> CheckResult {
        self.run("biconditionals")
    }

    pub fn conservativity(&self) -> CheckResult {
        self.run("conservativity")
    }

    /// Runs every check and maps the outcomes to norms.
    pub fn report(&self) -> NormsReport {
        NormsReport::from_checks(self.run_all())
    }
}

/// Convenience: the full report for `sem` over `sets`.
pub fn norms_report(
    sem: &dyn Semantics,
    sets: &TruthSets<'_>,
    config: SuiteConfig,
) -> Result<NormsReport, NormsError> {
    Ok(Suite::new(sem, sets, config)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{fixed_point, Evaluator, Fragment, FragmentConfig};
    use crate::object::{ObjectLanguage, ObjectModel};

    fn model() -> ObjectModel {
        ObjectModel::from_json_str(include_str!("../../../../models/example.json")).unwrap()
    }

    struct FlippedImplication<'a>(Evaluator<'a>);

    impl Semantics for FlippedImplication<'_> {
        fn verdict(&self, s: &Sentence) -> Verdict {
            match s {
                Sentence::Binary(Connective::Implies, a, b) => {
                    self.0.verdict(&Sentence::or((**a).clone(), (**b).clone()))
                }
                _ => self.0.verdict(s),
            }
        }

        fn language(&self) -> &dyn ObjectLanguage {
            self.0.language()
        }
    }

    fn small() -> Fragment {
        let cfg = FragmentConfig {
            depth: 2,
            max_size: 3,
            ..FragmentConfig::default()
        };
        Fragment::build(&model(), &cfg).unwrap()
    }

    #[test]
    fn reference_engine_passes_everything() {
        let m = model();
        let f = small();
        let sets = fixed_point(&f).unwrap();
        let e = Evaluator::new(&m);
        let report = norms_report(&e, &sets, SuiteConfig::default()).unwrap();
        let failed: Vec<&str> = report.failed_checks().map(|c| c.id.as_str()).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(report.status("n4"), Some(NormStatus::Verified));
        assert_eq!(report.status("n2"), Some(NormStatus::Asserted));
        assert_eq!(report.checks.len(), CHECK_IDS.len());
    }

    #[test]
    fn flipped_implication_is_caught_with_rank_minimal_counterexamples() {
        let m = model();
        let f = small();
        let sets = fixed_point(&f).unwrap();
        let mutant = FlippedImplication(Evaluator::new(&m));
        let suite = Suite::new(&mutant, &sets, SuiteConfig::default()).unwrap();
        let t4 = suite.run("t4");
        assert!(!t4.pass);
        let ranks: Vec<u32> = t4.counterexamples.iter().map(Sentence::rank).collect();
        assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(ranks[0], 1, "object pairs fail first");
        for c in &t4.counterexamples {
            assert_eq!(suite.holds("t4", c), Some(false));
        }
        let report = suite.report();
        assert_eq!(report.status("n7"), Some(NormStatus::Failed));
        assert!(!report.all_verified());
    }

    #[test]
    fn empty_fragment_has_no_universe() {
        let m = model();
        let f = Fragment::empty();
        let sets = fixed_point(&f).unwrap();
        let e = Evaluator::new(&m);
        assert_eq!(
            Suite::new(&e, &sets, SuiteConfig::default()).err(),
            Some(NormsError::EmptyUniverse)
        );
    }

    #[test]
    fn json_shape() {
        let m = model();
        let f = small();
        let sets = fixed_point(&f).unwrap();
        let e = Evaluator::new(&m);
        let report = norms_report(&e, &sets, SuiteConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["norms"]["n10"], "ASSERTED");
        assert_eq!(v["norms"]["n1"], "VERIFIED");
        let keys: Vec<&String> = v["norms"].as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 10);
        assert_eq!(v["checks"][0]["id"], "t0");
        assert!(v["checks"][0]["counterexamples"]
            .as_array()
            .unwrap()
            .is_empty());
    }
}
