use k3kummer_core::fibration::{audit, parse_fibers, shioda_tate_rank, FiberConfiguration, KodairaType, EULER_K3};
use k3kummer_core::golden::reference_configurations;
use proptest::prelude::*;

fn config(s: &str, rho: u32, n: Option<u64>) -> FiberConfiguration {
    FiberConfiguration::new(parse_fibers(s).unwrap(), rho).with_section(n)
}

#[test]
fn d_fibration() {
    let c = config("6I2,I5*,I1", 17, Some(2));
    assert_eq!(c.euler_sum(), 24);
    assert_eq!(shioda_tate_rank(&c).unwrap(), 0);
    let a = audit(&c, Some(64));
    assert!(a.pass, "{a}");
    assert_eq!(a.items.iter().map(|i| i.value.as_str()).collect::<Vec<_>>(), ["24", "0", "64"]);
}

#[test]
fn b_fibration() {
    let a = audit(&config("4I2,I2*,I1*,I1", 17, Some(2)), Some(64));
    assert!(a.pass, "{a}");
    assert_eq!(a.fibers, "4I2+I2*+I1*+I1");
}

#[test]
fn pullback_euler_only() {
    let c = FiberConfiguration::new(parse_fibers("4I1,I4*,I2*,I2").unwrap(), 17);
    let a = audit(&c, None);
    assert_eq!(a.items.len(), 1);
    assert!(a.pass);
}

#[test]
fn x0_printed_and_corrected() {
    let printed = audit(&config("I2,I10*,6I2", 17, Some(2)), Some(2));
    assert!(!printed.pass);
    assert_eq!(printed.items[0].value, "30");
    let corrected = audit(&config("6I1,I2,I10*", 17, Some(2)), Some(2));
    assert!(corrected.pass, "{corrected}");
    let configs = reference_configurations().unwrap();
    assert_eq!(configs.len(), 5);
}

#[test]
fn wrong_discriminant_fails() {
    let a = audit(&config("6I2,I5*,I1", 17, Some(1)), Some(64));
    assert!(!a.pass);
    assert_eq!(a.items[2].value, "256");
    let a = audit(&config("6I2,I5*,I1", 17, Some(3)), None);
    assert_eq!(a.items[2].value, "256/9");
    assert!(!a.items[2].pass);
}

#[test]
fn text_report() {
    let text = audit(&config("6I2,I5*,I1", 17, Some(2)), Some(64)).to_string();
    assert!(text.starts_with("fibers 6I2+I5*+I1\n"));
    assert!(text.ends_with("overall pass"));
}

fn kodaira() -> impl Strategy<Value = KodairaType> {
    prop_oneof![
        (1u32..20).prop_map(KodairaType::I),
        (0u32..15).prop_map(KodairaType::IStar),
        prop::sample::select(KodairaType::ADDITIVE_EXCEPTIONAL.to_vec()),
    ]
}

proptest! {
    #[test]
    fn fiber_display_parses_back(fs in proptest::collection::vec(kodaira(), 1..8)) {
        let c = FiberConfiguration::new(fs.clone(), 20);
        let text = c.describe().replace('+', ",");
        prop_assert_eq!(parse_fibers(&text).unwrap(), fs);
    }

    #[test]
    fn euler_and_components(k in kodaira()) {
        prop_assert!(k.simple_components() <= k.components());
        prop_assert!(k.components() <= k.chi());
        prop_assert_eq!(k.to_string().parse::<KodairaType>().unwrap(), k);
    }

    #[test]
    fn rank_plus_trivial_lattice_is_rho(fs in proptest::collection::vec(kodaira(), 0..6), rho in 2u32..=20) {
        let c = FiberConfiguration::new(fs.clone(), rho).with_section(None);
        let trivial: i64 = fs.iter().map(|f| f.components() as i64 - 1).sum();
        prop_assert_eq!(shioda_tate_rank(&c).unwrap() + trivial + 2, rho as i64);
        prop_assert_eq!(audit(&c, None).items[0].pass, c.euler_sum() == EULER_K3);
    }
}
