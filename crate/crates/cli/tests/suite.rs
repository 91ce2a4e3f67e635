use koszul_cli::suite::{pbw_lie_dims, random_filtered_sample, run_suite, CRITERIA};
use koszul_cli::{parse_input, InputFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn pbw_oracle_on_two_even_letters() {
    // Witt's formula: 2, 1, 2, 3
    let dims = pbw_lie_dims(&[0, 0], 4);
    let by_weight: Vec<i128> = (1..=4).map(|n| dims.iter().filter(|((m, _), _)| *m == n).map(|(_, c)| *c).sum()).collect();
    assert_eq!(by_weight, vec![2, 1, 2, 3]);
}

#[test]
fn pbw_oracle_on_one_odd_letter() {
    // x odd: x and [x, x], nothing above
    let dims = pbw_lie_dims(&[1], 4);
    assert_eq!(dims.into_iter().collect::<Vec<_>>(), vec![((1, 1), 1), ((2, 2), 1)]);
}

#[test]
fn random_filtered_samples_stay_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..30 {
        let s = random_filtered_sample(&mut rng);
        assert!(s.total_dim() <= 40);
        for ls in s.src.levels.values().chain(s.tgt.levels.values()) {
            assert!(ls.windows(2).all(|w| w[0] <= w[1]));
        }
        s.src.filtered(s.num_levels).unwrap();
        s.map().unwrap();
    }
}

#[test]
fn suite_is_complete_and_passes() {
    let r = run_suite();
    assert_eq!(r.len(), CRITERIA.len());
    for c in &r {
        assert!(c.passed, "criterion {} failed: {}", c.id, c.details);
    }
}

#[test]
fn inputs_require_a_schema_version() {
    assert!(parse_input(r#"{"kind": "builtin", "name": "homotopy_unital"}"#, "x").is_err());
    let ok = parse_input(r#"{"schema_version": 1, "kind": "builtin", "name": "homotopy_unital"}"#, "x").unwrap();
    assert!(matches!(ok, InputFile::Builtin(_)));
    assert!(parse_input(r#"{"schema_version": 1, "kind": "builtin", "name": "x", "extra": 1}"#, "x").is_err());
}
