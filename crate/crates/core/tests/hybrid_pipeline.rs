use proptest::prelude::*;
use symq::adversary::{adversary_bound, chop_relation, embed_set_equality, ChopMove, Labeling};
use symq::chopper::{chop_pair, chop_sequence, chopub_check};
use symq::estimator::{find_hard_core, hard_core_bound_holds};
use symq::rng::trial_rng;
use symq::types::{all_equal_vs_balanced, collision_function, random_profile, type_of};
use symq::{Exponent, TypeProfile};

fn prof(p: &[usize]) -> TypeProfile {
    TypeProfile::new(p.to_vec()).unwrap()
}

#[test]
fn every_step_of_a_sequence_is_a_chop_move() {
    let c = Exponent::two_sevenths();
    for n in [8, 16, 24] {
        let core = find_hard_core(&collision_function(n, n as u32).unwrap(), c).unwrap();
        let pair = chop_pair(&core.one_type, &core.zero_type).unwrap();
        for seq in [&pair.a, &pair.b] {
            for level in 1..=seq.steps.len() {
                let mv = ChopMove::from_step(seq, level).unwrap();
                assert_eq!(mv.next(), seq.profiles[level], "N={n} level {level}");
                assert_eq!(mv.distance(), seq.steps[level - 1].distance);
            }
        }
    }
}

#[test]
fn set_equality_walks_the_ladder() {
    // Equal sets stay on A_{ℓ−1}, disjoint sets land on A_ℓ, at every level
    // that chops one or two rows.
    let seq = chop_sequence(&prof(&[6, 5, 3, 1, 1]), &prof(&[1; 16])).unwrap();
    let mut checked = 0;
    for level in 1..=seq.steps.len() {
        let mv = ChopMove::from_step(&seq, level).unwrap();
        let r = mv.rows_chopped();
        if r == 0 || r > 2 {
            continue;
        }
        let y: Vec<u32> = (1..=r as u32).collect();
        let z: Vec<u32> = (11..11 + r as u32).collect();
        let fresh: Vec<u32> = (21..21 + mv.prev.len() as u32).collect();
        let same = embed_set_equality(&y, &y, &mv, &fresh, 40).unwrap();
        let apart = embed_set_equality(&y, &z, &mv, &fresh, 40).unwrap();
        assert_eq!(type_of(&same), seq.profiles[level - 1]);
        assert_eq!(type_of(&apart), seq.profiles[level]);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn hard_cores_are_maximal_and_satisfy_small_level_bounds() {
    let c = Exponent::two_sevenths();
    for n in (4..=40).step_by(4) {
        for f in [collision_function(n, n as u32).unwrap(), all_equal_vs_balanced(n).unwrap()] {
            let core = find_hard_core(&f, c).unwrap();
            assert!(hard_core_bound_holds(&core.one_type, &core.zero_type, core.t, c).unwrap());
            // one step above the hard core no pair meets the bound
            let above = core.t + 1;
            for a in f.one_types() {
                for b in f.zero_types() {
                    assert!(core.t == 3 * n as u64 || !hard_core_bound_holds(a, b, above, c).unwrap());
                }
            }
            let pair = chop_pair(&core.one_type, &core.zero_type).unwrap();
            assert_eq!(chopub_check(&pair.a, core.t, c).violations(), 0);
            assert_eq!(chopub_check(&pair.b, core.t, c).violations(), 0);
        }
    }
}

#[test]
fn chop_relation_from_a_real_sequence() {
    let seq = chop_sequence(&prof(&[4]), &prof(&[1, 1, 1, 1])).unwrap();
    let mv = ChopMove::from_step(&seq, 1).unwrap();
    let cr = chop_relation(&mv, 2, Labeling::Canonical, 10_000).unwrap();
    let adv = adversary_bound(&cr.relation).unwrap();
    assert_eq!(adv.alpha, symq::exact::frac(1, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_pairs_converge(n in 2usize..=48, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let a = random_profile(n, &mut rng);
        let b = random_profile(n, &mut rng);
        let pair = chop_pair(&a, &b).unwrap();
        prop_assert!(pair.converged());
        prop_assert!(pair.a.invariant_violations().is_empty());
        prop_assert!(pair.b.invariant_violations().is_empty());
        prop_assert_eq!(pair.final_configuration.n(), n);
    }

    #[test]
    fn random_profiles_sum_to_n(n in 1usize..=100, seed in any::<u64>()) {
        let p = random_profile(n, &mut trial_rng(seed, 1));
        prop_assert_eq!(p.n(), n);
    }
}
