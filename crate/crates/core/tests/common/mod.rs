#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use truthpred_core::object::{ObjectLanguage, ObjectModel, PredicateClass};
use truthpred_core::syntax::{Connective, Sentence, TruthForm};

pub fn model() -> ObjectModel {
    ObjectModel::from_json_str(include_str!("../../../../models/example.json")).unwrap()
}

/// One predicate on five elements.
pub fn one_predicate_model() -> ObjectModel {
    ObjectModel::from_json_str(
        r#"{"domain": ["0","1","2","3","4"],
            "predicates": {"ev": {"dom": ["0","1","2","3","4"], "true_at": ["0","2","4"]}},
            "object_depth": 2}"#,
    )
    .unwrap()
}

#[derive(Clone, Copy)]
struct Info {
    rank: u32,
    size: u32,
    object: bool,
    odepth: u32,
}

/// Brute-force core of a fragment: primes and truth forms, grown by `¬`,
/// `T⌈·⌉` and the four connectives inside the bounds, then closed under
/// the premises the stage rules consult, repeated until nothing changes.
pub fn brute_force_core(lang: &dyn ObjectLanguage, depth: u32, max_size: u32) -> HashSet<Sentence> {
    let max_obj = lang.object_depth();
    let mut info: HashMap<Sentence, Info> = HashMap::new();
    let leaf = |object: bool| Info {
        rank: if object { 0 } else { 1 },
        size: 1,
        object,
        odepth: 0,
    };
    for s in lang.object_primes() {
        info.insert(s, leaf(true));
    }
    let mut forms = vec![
        TruthForm::ForallT,
        TruthForm::ExistsT,
        TruthForm::ForallTT,
        TruthForm::ExistsTT,
    ];
    for p in lang.predicates() {
        forms.push(TruthForm::ForallTP(p.clone()));
        forms.push(TruthForm::ExistsTP(p));
    }
    for f in forms {
        info.insert(Sentence::Form(f), leaf(false));
    }
    // Referent of each truth atom added here.
    let mut referent: HashMap<Sentence, Sentence> = HashMap::new();
    loop {
        let before = info.len();
        let items: Vec<(Sentence, Info)> = info.iter().map(|(s, i)| (s.clone(), *i)).collect();
        let mut add: Vec<(Sentence, Info)> = Vec::new();
        for (s, i) in &items {
            if i.rank < depth && i.size < max_size {
                if !(i.object && i.odepth + 1 > max_obj) {
                    add.push((Sentence::negate(s.clone()), not_info(i)));
                }
                let t = Sentence::truth_of(s);
                referent.insert(t.clone(), s.clone());
                add.push((
                    t,
                    Info {
                        rank: i.rank + 1,
                        size: i.size + 1,
                        object: false,
                        odepth: 0,
                    },
                ));
            }
        }
        for (a, ia) in &items {
            for (b, ib) in &items {
                if ia.size + ib.size + 1 > max_size || ia.rank.max(ib.rank) + 1 > depth {
                    continue;
                }
                if ia.object && ib.object && ia.odepth.max(ib.odepth) + 1 > max_obj {
                    continue;
                }
                for op in Connective::ALL {
                    add.push((
                        Sentence::binary(op, a.clone(), b.clone()),
                        Info {
                            rank: ia.rank.max(ib.rank) + 1,
                            size: ia.size + ib.size + 1,
                            object: ia.object && ib.object,
                            odepth: ia.odepth.max(ib.odepth) + 1,
                        },
                    ));
                }
            }
        }
        for (s, i) in add {
            info.entry(s).or_insert(i);
        }
        // Premises.
        loop {
            let items: Vec<Sentence> = info.keys().cloned().collect();
            let mut add = Vec::new();
            for s in &items {
                let inner = match s {
                    Sentence::Not(x) => &**x,
                    other => other,
                };
                let needs: Vec<&Sentence> = match inner {
                    Sentence::Binary(_, a, b) => vec![&**a, &**b],
                    t @ Sentence::TAtom(_) => referent.get(t).into_iter().collect(),
                    _ => Vec::new(),
                };
                for n in needs {
                    let ni = not_info(&info[n]);
                    add.push((Sentence::negate(n.clone()), ni));
                }
            }
            let before = info.len();
            for (s, i) in add {
                info.entry(s).or_insert(i);
            }
            if info.len() == before {
                break;
            }
        }
        if info.len() == before {
            return info.into_keys().collect();
        }
    }
}

fn not_info(i: &Info) -> Info {
    Info {
        rank: i.rank + 1,
        size: i.size + 1,
        object: i.object,
        odepth: i.odepth + 1,
    }
}

/// The constant sets written out from their definition.
pub fn constants(lang: &dyn ObjectLanguage) -> Vec<Sentence> {
    let not = Sentence::negate;
    let mut out = vec![
        not(Sentence::forall_t()),
        Sentence::exists_t(),
        not(Sentence::forall_tt()),
        Sentence::exists_tt(),
    ];
    for p in lang.predicates() {
        match lang.classify(&p).unwrap() {
            PredicateClass::P1 => {
                out.push(Sentence::forall_tp(&p));
                out.push(Sentence::exists_tp(&p));
            }
            PredicateClass::P2 => {
                out.push(not(Sentence::forall_tp(&p)));
                out.push(not(Sentence::exists_tp(&p)));
            }
            PredicateClass::P3 => {
                out.push(not(Sentence::forall_tp(&p)));
                out.push(Sentence::exists_tp(&p));
            }
        }
    }
    out
}

/// `G(U)` computed naively over `universe`: `G₀(U)` from its definition,
/// then whole-universe passes of the nine closure rules until stable.
pub fn naive_g(
    lang: &dyn ObjectLanguage,
    universe: &[Sentence],
    u: &HashSet<Sentence>,
) -> HashSet<Sentence> {
    let in_universe: HashSet<&Sentence> = universe.iter().collect();
    let mut g: HashSet<Sentence> = universe
        .iter()
        .filter(|s| s.is_object() && lang.valuate(s) == Ok(true))
        .cloned()
        .collect();
    if !u.is_empty() {
        for s in universe {
            let (t, negated) = match s {
                Sentence::Not(x) => (&**x, true),
                other => (other, false),
            };
            if let Some(a) = t.referent() {
                let need = if negated { Sentence::negate(a) } else { a };
                if u.contains(&need) {
                    g.insert(s.clone());
                }
            }
        }
        for c in constants(lang) {
            if in_universe.contains(&c) {
                g.insert(c);
            }
        }
    }
    loop {
        let next: Vec<Sentence> = universe
            .iter()
            .filter(|c| !g.contains(*c) && closure_rule(c, &g))
            .cloned()
            .collect();
        if next.is_empty() {
            return g;
        }
        g.extend(next);
    }
}

fn closure_rule(c: &Sentence, g: &HashSet<Sentence>) -> bool {
    let t = |s: &Sentence| g.contains(s);
    let f = |s: &Sentence| g.contains(&Sentence::negate(s.clone()));
    match c {
        Sentence::Binary(op, a, b) => match op {
            Connective::Or => t(a) || t(b),
            Connective::And => t(a) && t(b),
            Connective::Implies => f(a) || t(b),
            Connective::Iff => (t(a) && t(b)) || (f(a) && f(b)),
        },
        Sentence::Not(x) => match &**x {
            Sentence::Not(a) => t(a),
            Sentence::Binary(op, a, b) => match op {
                Connective::Or => f(a) && f(b),
                Connective::And => f(a) || f(b),
                Connective::Implies => t(a) && f(b),
                Connective::Iff => (t(a) && f(b)) || (f(a) && t(b)),
            },
            _ => false,
        },
        _ => false,
    }
}
