use proptest::prelude::*;
use qsd_cli::table::format_sig12;
use qsd_cli::{QSweep, RunConfig};

proptest! {
    #[test]
    fn sig12_keeps_twelve_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = format_sig12(x).parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-12);
        prop_assert_eq!(format_sig12(back), format_sig12(x));
    }

    #[test]
    fn config_survives_toml(
        alpha in 0.01f64..1.57,
        v in prop::collection::vec(0.0f64..1.0, 1..4),
        q in 0.0f64..=1.0,
        sweep in prop::option::of((0.0f64..0.5, 0.5f64..1.0, 2usize..50)),
        copies in prop::collection::vec(1usize..5, 1..3),
        seed in 0..=i64::MAX as u64,
        scales in prop::collection::vec(0.0f64..3.0, 1..5),
    ) {
        let cfg = RunConfig {
            alpha,
            v,
            q,
            q_sweep: sweep.map(|(start, stop, count)| QSweep { start, stop, count }),
            copies,
            seed,
            scales,
            ..RunConfig::default()
        };
        cfg.validate().unwrap();
        prop_assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}

#[test]
fn seeds_beyond_toml_range_are_rejected() {
    let cfg = RunConfig { seed: u64::MAX, ..RunConfig::default() };
    assert!(matches!(cfg.validate(), Err(qsd_cli::CliError::Field { field, .. }) if field == "seed"));
}
