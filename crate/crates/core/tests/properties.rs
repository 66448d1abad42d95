#[path = "support/props.rs"]
#[allow(dead_code)]
mod props;

use latwalk::stepset::StepSet;
use latwalk::Rational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(20_261_016), failure_persistence: None, ..Config::default() }
}

fn step_sets(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = StepSet> {
    (dims, prop::collection::vec((0usize..100, 1u32..=3), 2..=5))
        .prop_filter_map("not a valid covered step set", |(d, picks)| props::symmetric_closure(d, &picks))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scaling_multiplies_counts_and_rate(s in step_sets(2..=3), num in 1i64..5, den in 1i64..4) {
        let lambda = Rational::new(num.into(), den.into());
        let asymptotics = s.dim() == 2;
        prop_assert_eq!(props::check_scaling(&s, &lambda, asymptotics), Ok(()));
    }

    #[test]
    fn reflections_respect_symmetry(s in step_sets(2..=3)) {
        prop_assert_eq!(props::check_reflection(&s), Ok(()));
    }

    #[test]
    fn relabeling_axes_is_harmless(s in step_sets(2..=3), shift in 0usize..3) {
        let mut perm: Vec<usize> = (0..s.dim()).collect();
        perm.rotate_left(shift % s.dim());
        let asymptotics = s.dim() == 2;
        prop_assert_eq!(props::check_relabeling(&s, &perm, asymptotics), Ok(()));
    }

    #[test]
    fn orbit_sum_is_antisymmetric(s in step_sets(2..=3)) {
        prop_assert_eq!(props::check_orbit_antisymmetry(&s), Ok(()));
    }

    #[test]
    fn endpoint_filters_nest(s in step_sets(2..=3)) {
        prop_assert_eq!(props::check_filter_nesting(&s, props::COUNT_N), Ok(()));
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn contributions_pair_up_and_fold_to_nonnegative_constants(s in step_sets(2..=2)) {
        prop_assert_eq!(props::check_conjugate_pairs_and_signs(&s), Ok(()));
    }
}

#[test]
fn corpus_covers_both_dimensions() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let corpus: Vec<StepSet> = (0..50).map(|_| props::random_step_set(&mut rng)).collect();
    assert!(corpus.iter().any(|s| s.dim() == 2) && corpus.iter().any(|s| s.dim() == 3));
    let planar: Vec<&StepSet> = corpus.iter().filter(|s| s.dim() == 2).collect();
    let expanded = planar.iter().filter(|s| props::expansion(s).is_some()).count();
    eprintln!("{expanded} of {} planar models have a leading expansion", planar.len());
    assert!(expanded * 2 >= planar.len());
}
