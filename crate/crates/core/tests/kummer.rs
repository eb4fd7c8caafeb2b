use k3kummer_core::arith::{int, rat, Rat};
use k3kummer_core::kummer::{build_sy, e5_as_printed, printed_half_sum, DivisorClass, KummerNS, BASIS_NAMES, RANK};
use k3kummer_core::lattice::{determinant, signature, Signature};
use proptest::prelude::*;
use std::sync::OnceLock;

fn ns() -> &'static KummerNS {
    static NS: OnceLock<KummerNS> = OnceLock::new();
    NS.get_or_init(|| build_sy().unwrap())
}

fn c(name: &str) -> &'static DivisorClass {
    ns().class(name).unwrap()
}

#[test]
fn lattice_invariants() {
    let l = ns().lattice();
    assert_eq!(l.rank(), 17);
    assert!(l.is_even());
    assert_eq!(signature(l), Signature::new(1, 16));
    assert_eq!(determinant(l).magnitude(), &num_bigint::BigUint::from(64u32));
    assert!(ns().incidence_16_6());
    assert!(ns().alpha_is_isometry());
}

#[test]
fn generator_action_of_alpha() {
    assert_eq!(ns().alpha(c("L")).to_string(), "3L - 4E0");
    assert_eq!(ns().alpha(c("E0")).to_string(), "2L - 3E0");
    for name in BASIS_NAMES.iter().skip(2) {
        assert_eq!(&ns().alpha(c(name)), c(name));
    }
    let x = ns().eval("L + C0 - 2E12").unwrap();
    assert_eq!(ns().alpha(&ns().alpha(&x)), x);
}

#[test]
fn pairings() {
    assert_eq!(ns().square(c("L")), rat(4, 1));
    assert_eq!(ns().square(c("C0")), rat(-2, 1));
    assert_eq!(ns().pairing(c("L"), c("E0")), rat(0, 1));
    assert_eq!(ns().pairing(c("e5"), c("E34")), rat(2, 1));
    assert_eq!(ns().pairing(c("e1"), c("e6")), rat(0, 1));
    assert_eq!(ns().square(c("D")), rat(0, 1));
    assert_eq!(ns().square(c("B")), rat(0, 1));
    assert_eq!(ns().pairing(c("C14"), c("D")), rat(1, 1));
    assert_eq!(ns().pairing(c("C16"), c("B")), rat(1, 1));
}

#[test]
fn even_eights() {
    for fam in ["e", "a", "b"] {
        let v = ns().is_even_eight(&ns().even_eight(fam).unwrap()).unwrap();
        assert!(v.is_even_eight && v.self_products_ok && v.disjoint, "{fam}");
        assert!(v.witness.is_some());
    }
    let b = DivisorClass::sum(&ns().even_eight("b").unwrap()).half();
    assert_eq!(b, printed_half_sum(ns(), "b").unwrap());
    let a = DivisorClass::sum(&ns().even_eight("a").unwrap()).half();
    let printed = printed_half_sum(ns(), "a").unwrap();
    assert_ne!(a, printed);
    assert_eq!(&a - &printed, ns().eval("-E24 - E25 - E45 + E46 - E56").unwrap());
    assert!(ns().contains(&printed));
    assert!(printed_half_sum(ns(), "x").is_none());
}

#[test]
fn non_even_eights() {
    let mut e = ns().even_eight("e").unwrap();
    e[7] = c("E34").clone();
    assert!(!ns().is_even_eight(&e).unwrap().is_even_eight);
    let nodes: Vec<DivisorClass> = ["E12", "E13", "E14", "E15", "E16", "E23", "E24"].iter().map(|n| c(n).clone()).collect();
    assert!(ns().is_even_eight(&nodes).is_err() || !ns().is_even_eight(&nodes).unwrap().is_even_eight);
    assert!(!ns().contains(&c("E0").half()));
}

#[test]
fn printed_e5_sign() {
    let printed = e5_as_printed();
    assert_eq!(ns().pairing(&printed, c("E34")), rat(-2, 1));
    assert_ne!(&(&printed + c("E34")), c("D"));
    assert_eq!(&(c("e5") + c("E34")), c("D"));
}

#[test]
fn fibers_of_d_and_b() {
    for i in 1..=7 {
        assert_eq!(c(&format!("san1_F{i}")), c("D"), "F{i}");
    }
    for i in [1, 2, 3, 4, 6] {
        assert_eq!(c(&format!("san6_F{i}")), c("B"), "F{i}");
    }
    assert_eq!(c("B") - c("san6_F5"), ns().eval("E34 - E14").unwrap());
}

#[test]
fn twist_embedding() {
    let t = ns().twist_check().unwrap();
    assert_eq!(t.twist_det, "-4");
    assert_eq!(t.complement_rank, 9);
    assert_eq!(t.complement_det.trim_start_matches('-'), "4");
    assert!(t.pool_solution.is_none());
    let sol = t.extended_solution.as_ref().unwrap();
    assert_eq!(sol.len(), 8);
    let n = ns().nikulin_lattice().unwrap();
    for x in sol {
        for b in n.basis() {
            let v = DivisorClass::from_coords(b.clone()).unwrap();
            assert_eq!(ns().pairing(&x.class, &v), rat(0, 1));
        }
    }
    let g = k3kummer_core::kummer::twist_gram();
    for (i, x) in sol.iter().enumerate() {
        for (j, y) in sol.iter().enumerate() {
            assert_eq!(ns().pairing(&x.class, &y.class), rat(g[i][j], 1));
        }
    }
    assert!(t.extended_primitive);
    assert_eq!(t.completion.as_deref(), Some("E14"));
    assert_eq!(t.discrepancy.id, "twist-generators");
}

#[test]
fn expression_errors() {
    for bad in ["", "L +", "X12", "2 *", "(L", "alpha(L", "1/0 L"] {
        assert!(ns().eval(bad).is_err(), "{bad:?}");
    }
    assert_eq!(ns().eval("1/2 * (2L - 2E0)").unwrap(), ns().eval("L - E0").unwrap());
    assert_eq!(ns().eval("alpha(E0)").unwrap(), ns().eval("2L - 3E0").unwrap());
}

fn class() -> impl Strategy<Value = DivisorClass> {
    proptest::collection::vec(-5i64..=5, RANK)
        .prop_map(|v| DivisorClass::from_coords(v.into_iter().map(|x| Rat::from_integer(int(x))).collect()).unwrap())
}

proptest! {
    #[test]
    fn pairing_is_symmetric_bilinear(a in class(), b in class(), x in class()) {
        let s = ns();
        prop_assert_eq!(s.pairing(&a, &b), s.pairing(&b, &a));
        prop_assert_eq!(s.pairing(&(&a + &b), &x), s.pairing(&a, &x) + s.pairing(&b, &x));
        prop_assert_eq!(s.pairing(&s.alpha(&a), &s.alpha(&b)), s.pairing(&a, &b));
        prop_assert_eq!(s.alpha(&s.alpha(&a)), a);
    }

    #[test]
    fn display_parses_back(a in class(), halve in any::<bool>()) {
        let a = if halve { a.half() } else { a };
        prop_assert_eq!(ns().eval(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn node_lattice_classes_are_members(a in class()) {
        prop_assert!(ns().contains(&a));
        prop_assert!((ns().square(&a) / rat(2, 1)).is_integer());
    }
}
