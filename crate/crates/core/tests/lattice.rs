use k3kummer_core::arith::{int, Int, Rat};
use k3kummer_core::classifier::{block_gram, e8_gram, t_a, Block};
use k3kummer_core::lattice::{
    determinant, direct_sum, index_in, lattice_from_generators, orthogonal_complement, rescale, saturation, signature,
    Lattice, Signature,
};
use k3kummer_core::matrix::{self, det_bareiss, from_i64, mul_int, mul_rat, smith, to_rat, IntMat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn gram(blocks: &[Block]) -> Lattice {
    Lattice::from_gram(&block_gram(blocks)).unwrap()
}

fn same(a: &Lattice, b: &Lattice) -> bool {
    a.contains(b) && b.contains(a)
}

#[test]
fn table_determinants() {
    assert_eq!(determinant(&t_a()), int(-2));
    assert_eq!(determinant(&gram(&[Block::N])), int(8));
    assert_eq!(determinant(&gram(&[Block::U(4), Block::U(4), Block::Diag(-2)])), int(-512));
    assert_eq!(determinant(&gram(&[Block::U(1), Block::N])), int(-8));
    assert_eq!(determinant(&Lattice::from_gram(&e8_gram(1)).unwrap()), int(1));
    assert_eq!(determinant(&Lattice::from_gram(&e8_gram(2)).unwrap()), int(256));
}

#[test]
fn table_signatures() {
    assert_eq!(signature(&gram(&[Block::U(1)])), Signature::new(1, 1));
    assert_eq!(signature(&Lattice::from_gram(&e8_gram(1)).unwrap()), Signature::new(0, 8));
    assert_eq!(signature(&t_a()), Signature::new(2, 3));
    assert_eq!(signature(&gram(&[Block::N])), Signature::new(1, 2));
}

#[test]
fn rescale_and_index() {
    assert_eq!(determinant(&rescale(&t_a(), 2).unwrap()), int(-64));
    let t = t_a();
    let two: Vec<Vec<Rat>> = matrix::to_rat(&from_i64(&(0..5).map(|i| (0..5).map(|j| 2 * (i == j) as i64).collect()).collect::<Vec<_>>()));
    let sub = lattice_from_generators(t.space(), &two).unwrap();
    assert_eq!(index_in(&sub, &t).unwrap(), int(32));
    assert!(rescale(&t, 0).is_err());
}

#[test]
fn odd_generators_are_rejected() {
    let u = gram(&[Block::U(1)]);
    let half = vec![vec![Rat::new(int(1), int(2)), Rat::new(int(1), int(2))]];
    assert!(lattice_from_generators(u.space(), &half).is_err());
}

#[test]
fn complement_in_unimodular_sum() {
    let u = gram(&[Block::U(1)]);
    let uu = direct_sum(&u, &u);
    let first = lattice_from_generators(uu.space(), &to_rat(&from_i64(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]))).unwrap();
    let perp = orthogonal_complement(&first, &uu).unwrap();
    assert_eq!(perp.rank(), 2);
    assert_eq!(determinant(&perp), int(-1));
}

fn even_gram(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let x = if i == j { 2 * v[i * n + j] } else { v[i * n + j] };
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        g
    })
}

fn nondegenerate_lattice() -> impl Strategy<Value = Lattice> {
    (1usize..=5)
        .prop_flat_map(even_gram)
        .prop_filter("nondegenerate", |g| !det_bareiss(&from_i64(g)).is_zero())
        .prop_map(|g| Lattice::from_gram(&g).unwrap())
}

fn square_matrix(n: usize) -> impl Strategy<Value = IntMat> {
    proptest::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| v.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect())
}

fn sublattice(l: &Lattice, m: &IntMat) -> Lattice {
    lattice_from_generators(l.space(), &mul_rat(&to_rat(m), l.basis())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_normal_form_law(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| v.chunks(c).map(|x| x.to_vec()).collect::<Vec<_>>()))) {
        let a = from_i64(&m);
        let s = smith(&a);
        let d = mul_int(&mul_int(&s.u, &a), &s.v);
        prop_assert_eq!(det_bareiss(&s.u).abs(), Int::one());
        prop_assert_eq!(det_bareiss(&s.v).abs(), Int::one());
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j && i < s.divisors.len() { s.divisors[i].clone() } else { Int::zero() };
                prop_assert_eq!(x, &expected);
            }
        }
        for w in s.divisors.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn index_square_law(l in nondegenerate_lattice(), m in square_matrix(5)) {
        let n = l.rank();
        let m: IntMat = m.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let dm = det_bareiss(&m);
        prop_assume!(!dm.is_zero());
        let sub = sublattice(&l, &m);
        let idx = index_in(&sub, &l).unwrap();
        prop_assert_eq!(&idx, &dm.abs());
        prop_assert_eq!(determinant(&sub), &idx * &idx * determinant(&l));
    }

    #[test]
    fn signature_is_additive(a in nondegenerate_lattice(), b in nondegenerate_lattice()) {
        let (sa, sb) = (signature(&a), signature(&b));
        let s = signature(&direct_sum(&a, &b));
        prop_assert_eq!(s, Signature::new(sa.plus + sb.plus, sa.minus + sb.minus));
        prop_assert_eq!(determinant(&direct_sum(&a, &b)), determinant(&a) * determinant(&b));
    }

    #[test]
    fn rescale_law(l in nondegenerate_lattice(), m in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let r = rescale(&l, m).unwrap();
        let expected = determinant(&l) * Int::from(m).pow(l.rank() as u32);
        prop_assert_eq!(determinant(&r), expected);
        let (s, sr) = (signature(&l), signature(&r));
        if m > 0 {
            prop_assert_eq!(sr, s);
        } else {
            prop_assert_eq!(sr, Signature::new(s.minus, s.plus));
        }
    }

    #[test]
    fn double_complement_is_saturation(l in nondegenerate_lattice(), k in 1usize..=3, m in square_matrix(5)) {
        let n = l.rank();
        let k = k.min(n);
        let rows: IntMat = m.iter().take(k).map(|r| r[..n].to_vec()).collect();
        let sub = sublattice(&l, &rows);
        prop_assume!(sub.rank() > 0 && !determinant(&sub).is_zero());
        let perp = orthogonal_complement(&sub, &l).unwrap();
        let back = orthogonal_complement(&perp, &l).unwrap();
        prop_assert!(same(&back, &saturation(&sub, &l).unwrap()));
        prop_assert_eq!(perp.rank() + sub.rank(), n);
    }

    #[test]
    fn hermite_basis_is_canonical(l in nondegenerate_lattice(), m in square_matrix(5)) {
        let n = l.rank();
        let rows: IntMat = m.iter().take(n).map(|r| r[..n].to_vec()).collect();
        prop_assume!(!det_bareiss(&rows).is_zero());
        let a = sublattice(&l, &rows);
        let doubled: IntMat = rows.iter().chain(rows.iter()).cloned().collect();
        let b = sublattice(&l, &doubled);
        prop_assert_eq!(a.basis(), b.basis());
    }
}
