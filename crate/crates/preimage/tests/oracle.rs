use std::collections::BTreeSet;

use ca_core::{Rule, State};
use preimage::word::words_of_length;
use preimage::{limit_language_window, InverseIndex, OrphanEngine};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn image(rule: &Rule, u: &[State]) -> Vec<State> {
    u.windows(rule.width()).map(|nb| rule.apply_local(nb).unwrap()).collect()
}

// independent of the de Bruijn search: try every candidate word
fn brute_preimages(rule: &Rule, w: &[State]) -> BTreeSet<Vec<State>> {
    words_of_length(rule.state_count(), w.len() + 2 * rule.radius())
        .unwrap()
        .into_iter()
        .filter(|u| image(rule, u) == w)
        .collect()
}

fn brute_orphan(rule: &Rule, w: &[State], order: usize) -> bool {
    let len = w.len() + 2 * rule.radius() * order;
    !words_of_length(rule.state_count(), len).unwrap().into_iter().any(|mut u| {
        for _ in 0..order {
            u = image(rule, &u);
        }
        u == w
    })
}

#[test]
fn preimages_match_brute_force_on_sample() {
    for number in [0u8, 30, 90, 110, 128, 150, 184, 204, 255] {
        let rule = Rule::elementary(number);
        let idx = InverseIndex::build(&rule).unwrap();
        for len in 1..=5 {
            for w in words_of_length(2, len).unwrap() {
                assert_eq!(idx.preimages(&w), brute_preimages(&rule, &w), "rule {number} {w:?}");
            }
        }
    }
}

#[test]
fn three_state_rule_matches_brute_force() {
    let rule = Rule::from_fn(3, 1, |nb| (nb[0] * nb[1] + nb[2]) % 3);
    let idx = InverseIndex::build(&rule).unwrap();
    for len in 1..=4 {
        for w in words_of_length(3, len).unwrap() {
            assert_eq!(idx.preimages(&w), brute_preimages(&rule, &w));
            assert_eq!(idx.count_preimages(&w), brute_preimages(&rule, &w).len() as u128);
        }
    }
}

#[test]
fn orphan_engines_match_brute_force() {
    for number in [1u8, 18, 54, 128, 232] {
        let rule = Rule::elementary(number);
        for order in 1..=2 {
            let e = OrphanEngine::auto(&rule, order).unwrap();
            for len in 1..=4 {
                for w in words_of_length(2, len).unwrap() {
                    assert_eq!(e.is_orphan(&w), brute_orphan(&rule, &w, order), "rule {number} {w:?}");
                }
            }
        }
    }
}

#[test]
fn anti_monotone_and_factor_closed() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let rule = Rule::elementary(rng.gen());
        for len in 2..=5 {
            for k in 0..3 {
                let lk = limit_language_window(&rule, len, k).unwrap();
                let lk1 = limit_language_window(&rule, len, k + 1).unwrap();
                assert!(lk1.is_subset(&lk));
                let shorter = limit_language_window(&rule, len - 1, k).unwrap();
                for w in &lk.words {
                    assert!(shorter.words.contains(&w[1..]) && shorter.words.contains(&w[..len - 1]));
                }
            }
        }
    }
}

#[test]
fn orphans_extend() {
    for number in [0u8, 128, 232, 160] {
        let rule = Rule::elementary(number);
        let e = OrphanEngine::auto(&rule, 1).unwrap();
        for len in 1..=3 {
            for w in words_of_length(2, len).unwrap().into_iter().filter(|w| e.is_orphan(w)) {
                for extra in 1..=2 {
                    for ctx in words_of_length(2, extra).unwrap() {
                        let mut left = ctx.clone();
                        left.extend(&w);
                        let mut right = w.clone();
                        right.extend(&ctx);
                        assert!(e.is_orphan(&left) && e.is_orphan(&right));
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn returned_preimages_map_back(number in 0u8..=255, w in proptest::collection::vec(0u32..2, 1..8)) {
        let rule = Rule::elementary(number);
        for u in InverseIndex::build(&rule).unwrap().preimages(&w) {
            prop_assert_eq!(image(&rule, &u), w.clone());
        }
    }
}
