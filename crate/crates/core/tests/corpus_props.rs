mod common;

use neogate_core::corpus::{aligned_tag_labels, cohen_kappa, validate_corpus, write_corpus, Severity};
use neogate_core::{parse_corpus, TagsetDefinition};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fixtures_validate_without_errors() {
    for corpus in [common::sample(), common::dev_sample()] {
        let issues = validate_corpus(&corpus);
        assert!(issues.iter().all(|i| i.severity != Severity::Error), "{issues:#?}");
    }
}

#[test]
fn fixture_stats() {
    let s = common::sample().stats();
    assert_eq!((s.entries, s.tags, s.content, s.function, s.singular, s.plural), (5, 13, 8, 5, 7, 6));
}

#[test]
fn kappa_symmetric_on_random_label_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let labels = ["DARTS", "DARTP", "ENDS", "ENDP", "POSS1P"];
    for _ in 0..100 {
        let n = rng.gen_range(2..50);
        let a: Vec<&str> = (0..n).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
        let b: Vec<&str> = (0..n).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
        assert_eq!(cohen_kappa(&a, &b), cohen_kappa(&b, &a));
    }
}

#[test]
fn self_agreement_over_tags_is_perfect() {
    let corpus = common::sample();
    let (a, b) = aligned_tag_labels(&corpus, &corpus).unwrap();
    assert_eq!(a.len(), 13);
    assert_eq!(cohen_kappa(&a, &b), Ok(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_then_parse_is_identity(seed in any::<u64>(), n in 1usize..30) {
        let (corpus, _) = common::synth::corpus(n, seed);
        let text = write_corpus(&corpus);
        let parsed = parse_corpus(text.as_bytes(), &TagsetDefinition::neo_gate()).unwrap();
        prop_assert_eq!(&parsed, &corpus);
        prop_assert_eq!(write_corpus(&parsed), text);
        prop_assert!(validate_corpus(&parsed).iter().all(|i| i.severity != Severity::Error));
    }
}
