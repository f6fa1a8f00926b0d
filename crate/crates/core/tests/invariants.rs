//! Cross-module invariants: equivalence as a congruence, its soundness in
//! every small model, separation of normal forms, and the family checks at
//! the remaining small ambient sizes.

use clonelab_core::clones::{clone_closure, is_clone, t_of, verify_family_closed, LengthSet};
use clonelab_core::free::{canonical_term, enumerate_free, equivalent, eval_term, star};
use clonelab_core::models::{enumerate_models, eval_in_model, induced_map, Assignment};
use clonelab_core::{Element, Term};
use rand::prelude::*;
use std::collections::BTreeMap;

fn random_term(rng: &mut StdRng, stars: usize) -> Term {
    if stars == 0 {
        return match rng.gen_range(0..5) {
            0 => Term::Zero,
            1 => Term::P,
            i => Term::var(i - 1),
        };
    }
    let left = rng.gen_range(0..stars);
    Term::star(random_term(rng, left), random_term(rng, stars - 1 - left))
}

#[test]
fn equivalence_is_a_congruence_on_a_random_sample() {
    let mut rng = StdRng::seed_from_u64(17);
    let terms: Vec<Term> = (0..60)
        .map(|_| {
            let stars = rng.gen_range(0..=5);
            random_term(&mut rng, stars)
        })
        .collect();

    for t in &terms {
        assert!(equivalent(t, t));
    }
    for a in &terms {
        for b in &terms {
            assert_eq!(equivalent(a, b), equivalent(b, a));
        }
    }
    // transitivity and congruence via normal-form representatives
    for a in &terms {
        for b in &terms {
            if !equivalent(a, b) {
                continue;
            }
            for c in &terms {
                if equivalent(b, c) {
                    assert!(equivalent(a, c));
                }
                let left = Term::star(a.clone(), c.clone());
                let right = Term::star(b.clone(), c.clone());
                assert!(equivalent(&left, &right), "left congruence at {a} ~ {b}");
                let left = Term::star(c.clone(), a.clone());
                let right = Term::star(c.clone(), b.clone());
                assert!(equivalent(&left, &right), "right congruence at {a} ~ {b}");
            }
        }
    }
}

#[test]
fn equivalent_terms_agree_in_every_small_model() {
    let mut rng = StdRng::seed_from_u64(18);
    let mut buckets: BTreeMap<Element, Vec<Term>> = BTreeMap::new();
    for _ in 0..400 {
        let stars = rng.gen_range(0..=6);
        let t = random_term(&mut rng, stars);
        buckets.entry(eval_term(&t)).or_default().push(t);
    }

    let models: Vec<_> = (1..=3).flat_map(|k| enumerate_models(k).unwrap()).collect();
    let mut pairs = 0;
    for group in buckets.values() {
        let Some((first, rest)) = group.split_first() else {
            continue;
        };
        for other in rest {
            assert!(equivalent(first, other));
            pairs += 1;
            for model in &models {
                for a in Assignment::all(3, model.size()) {
                    assert_eq!(
                        eval_in_model(first, model, &a).unwrap(),
                        eval_in_model(other, model, &a).unwrap(),
                        "{first} vs {other} in a model of size {}",
                        model.size()
                    );
                }
            }
        }
    }
    assert!(pairs > 50, "sample produced only {pairs} equivalent pairs");
}

#[test]
fn distinct_normal_forms_are_distinct_term_functions() {
    for n in 0..=2 {
        let carrier = enumerate_free(n).unwrap();
        for (i, e1) in carrier.iter().enumerate() {
            for e2 in carrier.iter().skip(i + 1) {
                // identity assignment: evaluate the canonical terms in the
                // free algebra itself
                let v1 = eval_term(&canonical_term(e1));
                let v2 = eval_term(&canonical_term(e2));
                assert_ne!(v1, v2, "n={n}: [{e1}] and [{e2}] collapse");
            }
        }
    }
}

#[test]
fn identity_embedding_of_the_empty_carrier() {
    // the 3-element model whose table is the 0-generator free algebra
    let model = enumerate_models(3)
        .unwrap()
        .into_iter()
        .find(|m| m.zero_elem() == 0 && m.p_elem() == 1 && m.product(1, 1) == 2)
        .expect("the word-algebra table is among the size-3 models");
    let h = induced_map(0, &model, &Assignment::new(Vec::new())).unwrap();
    assert!(h.report.pass);
    let images: Vec<usize> = h.images.values().map(|c| c.0).collect();
    assert_eq!(images.len(), 3);
    assert_eq!(h.images[&Element::Zero].0, 0);
    assert_eq!(h.images[&Element::p()].0, 1);
}

#[test]
fn family_checks_hold_at_every_small_ambient_size() {
    for m in 0..=2 {
        for mask in 0u32..16 {
            let picked = [2usize, 3, 4, 5]
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &n)| n);
            let a = LengthSet::new(picked).unwrap();
            let report = verify_family_closed(&a, m).unwrap();
            assert!(report.pass, "A={{{a}}} m={m}: {report}");
        }
    }
    // the generator-extended member over a single admissible length in one
    // variable is a clone
    let t = t_of(&LengthSet::new([2]).unwrap(), 1).unwrap();
    assert!(is_clone(&t).pass);
}

#[test]
fn composition_is_exhaustive_over_the_two_generator_algebra() {
    use clonelab_core::subst::{substitute, Substitution};
    let carrier = enumerate_free(2).unwrap();
    let pool = [
        Element::Zero,
        Element::p(),
        Element::var(1),
        Element::var(2),
        Element::word(clonelab_core::Letter::P, [clonelab_core::Letter::var(1)]),
    ];
    let substitutions: Vec<Substitution> = pool
        .iter()
        .flat_map(|v1| {
            pool.iter()
                .map(|v2| Substitution::new([(1, v1.clone()), (2, v2.clone())]))
        })
        .collect();
    for w in &carrier {
        for s in &substitutions {
            for r in &substitutions {
                assert_eq!(
                    substitute(&substitute(w, s), r),
                    substitute(w, &s.then(r)),
                    "w=[{w}] s=[{s}] r=[{r}]"
                );
            }
        }
    }
}

#[test]
fn substitution_never_changes_a_family_word_head() {
    use clonelab_core::clones::s_of;
    use clonelab_core::subst::{substitute, Substitution};
    for m in 1..=2 {
        let a = LengthSet::new([2, 3]).unwrap();
        let raw = s_of(&a, m).unwrap();
        let values = t_of(&a, m).unwrap();
        for w in raw.members() {
            let Element::Word { head, .. } = w else {
                continue;
            };
            assert_eq!(*head, clonelab_core::Letter::P);
            for v in values.members() {
                for var in w.variables() {
                    let s = Substitution::new([(var, v.clone())]);
                    match substitute(w, &s) {
                        Element::Zero => {}
                        Element::Word {
                            head: clonelab_core::Letter::P,
                            ..
                        } => {}
                        other => panic!("substituting into [{w}] produced [{other}]"),
                    }
                }
            }
        }
    }
}

#[test]
fn closure_is_monotone_on_random_generator_pairs() {
    let pool = enumerate_free(2).unwrap();
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..25 {
        let small: Vec<Element> = (0..rng.gen_range(0..=2))
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let mut large = small.clone();
        for _ in 0..rng.gen_range(0..=2) {
            large.push(pool[rng.gen_range(0..pool.len())].clone());
        }
        let closed_small = clone_closure(&small, 2).unwrap();
        let closed_large = clone_closure(&large, 2).unwrap();
        assert!(
            closed_small.members().is_subset(closed_large.members()),
            "{small:?} vs {large:?}"
        );
    }
}

#[test]
fn products_in_the_free_algebra_match_model_products() {
    // the free algebra on one generator, tabulated, is itself a model
    let carrier = enumerate_free(1).unwrap();
    let index: BTreeMap<&Element, usize> =
        carrier.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table: Vec<Vec<usize>> = carrier
        .iter()
        .map(|a| carrier.iter().map(|b| index[&star(a, b)]).collect())
        .collect();
    let model = clonelab_core::models::FiniteModel::new(
        carrier.len(),
        index[&Element::Zero],
        index[&Element::p()],
        table,
    )
    .unwrap();
    assert!(clonelab_core::models::check_laws(&model).pass);
}
