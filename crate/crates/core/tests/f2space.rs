use std::collections::BTreeSet;

use k3kummer_core::f2space::{
    enumerate_subspaces, orbit_of, orbits, orthogonal_group, polar, quad_value, F2Matrix, F2Subspace, F2Vector,
    OrbitInvariants,
};
use k3kummer_core::golden::ORBIT_SIZES;
use proptest::prelude::*;

#[test]
fn subspace_counts_are_gaussian_binomials() {
    let subs = enumerate_subspaces();
    assert_eq!(subs.len(), 374);
    let by_dim: Vec<usize> = (0..=5).map(|d| subs.iter().filter(|s| s.dim() == d).count()).collect();
    assert_eq!(by_dim, [1, 31, 155, 155, 31, 1]);
    let masks: BTreeSet<u32> = subs.iter().map(F2Subspace::mask).collect();
    assert_eq!(masks.len(), subs.len());
    assert!(subs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn group_order_by_exhaustive_scan() {
    let group = orthogonal_group();
    assert_eq!(group.order(), 720);
    let mut count = 0usize;
    for word in 0u32..1 << 25 {
        let images = std::array::from_fn(|i| F2Vector::new(((word >> (5 * i)) & 31) as u8));
        let m = F2Matrix::from_images(images);
        if m.is_invertible() && m.preserves_q() {
            assert!(group.contains(&m));
            count += 1;
        }
    }
    assert_eq!(count, 720);
}

#[test]
fn group_is_closed_and_fixes_radical() {
    let g = orthogonal_group();
    let e5 = F2Vector::unit(5);
    for a in g.elements().iter().step_by(7) {
        assert_eq!(a.apply(e5), e5);
        for b in g.elements().iter().step_by(11) {
            assert!(g.contains(&a.compose(b)));
        }
    }
    assert!(g.contains(&F2Matrix::identity()));
}

#[test]
fn orbit_partition() {
    let subs = enumerate_subspaces();
    let g = orthogonal_group();
    let orb = orbits(&subs, &g);
    assert_eq!(orb.len(), 17);
    let mut sizes: Vec<usize> = orb.iter().map(|o| o.size).collect();
    let mut expected = ORBIT_SIZES.to_vec();
    sizes.sort_unstable();
    expected.sort_unstable();
    assert_eq!(sizes, expected);
    assert_eq!(orb.iter().map(|o| o.size).sum::<usize>(), 373);
    for d in 1..=5 {
        let total: usize = orb.iter().filter(|o| o.dim() == d).map(|o| o.size).sum();
        assert_eq!(total, subs.iter().filter(|s| s.dim() == d).count());
    }
    for o in &orb {
        assert_eq!(720 % o.size, 0);
        let members = orbit_of(&o.rep, &g);
        assert_eq!(members.len(), o.size);
        let least = subs.iter().find(|s| members.contains(&s.mask())).unwrap();
        assert_eq!(least, &o.rep);
        for s in subs.iter().filter(|s| members.contains(&s.mask())) {
            assert_eq!(OrbitInvariants::of(s), o.invariants);
        }
    }
    assert!(orb.windows(2).all(|w| w[0].dim() > w[1].dim() || (w[0].dim() == w[1].dim() && w[0].rep < w[1].rep)));
}

#[test]
fn orbit_json_shape() {
    let orb = orbits(&enumerate_subspaces(), &orthogonal_group());
    let whole = &orb[0];
    assert_eq!((whole.dim(), whole.size, whole.alpha()), (5, 1, 0));
    let json = serde_json::to_value(&whole.rep).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 5);
    assert_eq!(json[0], "10000");
}

fn vector() -> impl Strategy<Value = F2Vector> {
    (0u8..32).prop_map(F2Vector::new)
}

proptest! {
    #[test]
    fn polar_is_bilinear_form_of_q(u in vector(), v in vector(), w in vector()) {
        prop_assert_eq!(polar(u, v), quad_value(u + v) ^ quad_value(u) ^ quad_value(v));
        prop_assert_eq!(polar(u + v, w), polar(u, w) ^ polar(v, w));
        prop_assert_eq!(polar(u, v), polar(v, u));
    }

    #[test]
    fn display_round_trips(v in vector()) {
        prop_assert_eq!(F2Vector::parse(&v.to_string()), Some(v));
    }

    #[test]
    fn span_is_closed(vs in proptest::collection::vec(vector(), 0..5)) {
        let s = F2Subspace::span(&vs);
        prop_assert!(vs.iter().all(|&v| s.contains(v)));
        let elems: Vec<F2Vector> = s.elements().collect();
        prop_assert_eq!(elems.len(), 1 << s.dim());
        for &a in &elems {
            for &b in &elems {
                prop_assert!(s.contains(a + b));
            }
        }
        prop_assert_eq!(&F2Subspace::span(s.basis()), &s);
    }

    #[test]
    fn group_preserves_q(i in 0usize..720, v in vector()) {
        let g = orthogonal_group();
        let m = g.elements()[i];
        prop_assert_eq!(quad_value(m.apply(v)), quad_value(v));
    }
}
