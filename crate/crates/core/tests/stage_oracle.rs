mod common;

use std::collections::HashSet;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use truthpred_core::engine::{
    explain, f_of, fixed_point, g_of, CodeSet, Fragment, FragmentConfig, Rule,
};
use truthpred_core::object::ObjectLanguage;
use truthpred_core::syntax::{decode, encode, Sentence};

use common::{model, naive_g};

fn fragment() -> Fragment {
    Fragment::build(
        &model(),
        &FragmentConfig {
            depth: 2,
            max_size: 3,
            ..FragmentConfig::default()
        },
    )
    .unwrap()
}

fn sentences(codes: &CodeSet) -> HashSet<Sentence> {
    codes.iter().map(|c| decode(c).unwrap()).collect()
}

fn codes(s: &HashSet<Sentence>) -> CodeSet {
    s.iter().map(encode).collect()
}

#[test]
fn g_of_matches_naive_closure() {
    let m = model();
    let f = fragment();
    let universe: Vec<Sentence> = f.members().iter().map(|m| m.sentence.clone()).collect();
    let sets = fixed_point(&f).unwrap();
    let mut inputs: Vec<CodeSet> = vec![CodeSet::new()];
    inputs.extend((0..sets.stage_count()).map(|k| sets.stage(k)));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1, 10, 200, 2_000] {
        let pick = f
            .members()
            .iter()
            .map(|m| m.code.clone())
            .choose_multiple(&mut rng, n);
        inputs.push(pick.into_iter().collect());
    }
    for u in inputs {
        let expected = naive_g(&m, &universe, &sentences(&u));
        assert_eq!(g_of(&u, &f), codes(&expected), "|U| = {}", u.len());
    }
}

#[test]
fn naive_iteration_reaches_the_same_fixed_point() {
    let m = model();
    let f = fragment();
    let universe: Vec<Sentence> = f.members().iter().map(|m| m.sentence.clone()).collect();
    let sets = fixed_point(&f).unwrap();
    let mut u: HashSet<Sentence> = universe
        .iter()
        .filter(|s| s.is_object() && m.valuate(s) == Ok(true))
        .cloned()
        .collect();
    let mut k = 0;
    loop {
        assert_eq!(codes(&u), sets.stage(k), "stage {k}");
        let next = naive_g(&m, &universe, &u);
        if next == u {
            break;
        }
        u = next;
        k += 1;
    }
    assert_eq!(k as u32, sets.fixed_point_stage());
    let false_set: HashSet<Sentence> = universe
        .iter()
        .filter(|s| u.contains(&Sentence::negate((*s).clone())))
        .cloned()
        .collect();
    assert_eq!(f_of(&sets.final_codes(), &f), codes(&false_set));
    assert_eq!(sets.false_codes(), codes(&false_set));
}

#[test]
fn stage_indices_are_least() {
    let f = fragment();
    let sets = fixed_point(&f).unwrap();
    for i in 0..f.len() {
        match sets.stage_of(i) {
            Some(k) => {
                assert!(sets.stage_bits(k as usize).contains(i));
                if k > 0 {
                    assert!(!sets.stage_bits(k as usize - 1).contains(i));
                }
            }
            None => assert!(!sets.is_true(i)),
        }
    }
}

#[test]
fn every_trace_step_replays() {
    let f = fragment();
    let sets = fixed_point(&f).unwrap();
    let mut rules = HashSet::new();
    for i in 0..f.len() {
        let Some(e) = explain(&sets, i) else {
            assert!(!sets.is_true(i) && !sets.is_false(i));
            continue;
        };
        let last = e.steps.iter().map(|s| s.depth).max().unwrap();
        for st in &e.steps {
            assert!(sets.replay(st.member, &st.provenance), "{}", st.sentence);
            rules.insert(std::mem::discriminant(&st.provenance.rule));
            if st.depth == last {
                assert!(
                    matches!(st.provenance.rule, Rule::Seed | Rule::Constant(_)) || st.repeated
                );
            }
        }
    }
    assert_eq!(rules.len(), 5);
}
