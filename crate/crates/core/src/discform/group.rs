use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::ELEMENT_LIMIT;
use crate::arith::{fmt_rat64, prime_factors, rat64_mod};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMat};

/// Coordinates with respect to the generators, each reduced modulo its order.
pub type Element = Vec<u64>;

/// A finite abelian group `⊕ Z/dᵢ` with a quadratic form valued in `Q/2Z`
/// and its bilinear form valued in `Q/Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    q: Vec<Rational64>,
    b: Vec<Vec<Rational64>>,
    scale: i64,
    qs: Vec<i64>,
    bs: Vec<Vec<i64>>,
}

impl FiniteQuadraticForm {
    /// Validates and canonicalizes: `q` is reduced into `[0,2)` and `b` into
    /// `[0,1)`.
    pub fn new(orders: Vec<u64>, q: Vec<Rational64>, b: Vec<Vec<Rational64>>) -> Result<Self> {
        let k = orders.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidForm("orders, q and b have inconsistent sizes".into()));
        }
        if let Some(d) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidForm(format!("generator order {d} < 2")));
        }
        let size = orders.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        if size.is_none_or(|s| s > ELEMENT_LIMIT * ELEMENT_LIMIT) {
            return Err(Error::InvalidForm("group order overflows".into()));
        }
        let q: Vec<Rational64> = q.into_iter().map(|x| rat64_mod(x, 2)).collect();
        let b: Vec<Vec<Rational64>> =
            b.into_iter().map(|r| r.into_iter().map(|x| rat64_mod(x, 1)).collect()).collect();
        for i in 0..k {
            let di = Rational64::from_integer(orders[i] as i64);
            if rat64_mod(q[i], 1) != b[i][i] {
                return Err(Error::InvalidForm(format!("q({i}) and b({i},{i}) disagree mod 1")));
            }
            if !rat64_mod(q[i] * di * di, 2).is_zero() {
                return Err(Error::InvalidForm(format!("q is not well defined on generator {i}")));
            }
            for j in 0..k {
                if b[i][j] != b[j][i] {
                    return Err(Error::InvalidForm(format!("b is not symmetric at ({i},{j})")));
                }
                if !rat64_mod(b[i][j] * di, 1).is_zero() {
                    return Err(Error::InvalidForm(format!("b({i},{j}) is not killed by the order {}", orders[i])));
                }
            }
        }
        let scale = orders.iter().fold(1i64, |acc, &d| acc.lcm(&(d as i64)));
        let sr = Rational64::from_integer(scale);
        let qs = q.iter().map(|x| (x * sr).to_integer()).collect();
        let bs = b.iter().map(|r| r.iter().map(|x| (x * sr).to_integer()).collect()).collect();
        Ok(FiniteQuadraticForm { orders, q, b, scale, qs, bs })
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm::new(Vec::new(), Vec::new(), Vec::new()).unwrap()
    }

    /// Cyclic group `Z/d` with `q(g) = value`.
    pub fn cyclic(d: u64, value: Rational64) -> Result<Self> {
        FiniteQuadraticForm::new(vec![d], vec![value], vec![vec![value]])
    }

    /// The discriminant form of `U(2^k)`, `(Z/2^k)²` with `q = 2x₁x₂/2^k`.
    pub fn u(k: u32) -> Self {
        let d = 1u64 << k;
        let off = Rational64::new(1, d as i64);
        FiniteQuadraticForm::new(
            vec![d, d],
            vec![Rational64::zero(), Rational64::zero()],
            vec![vec![Rational64::zero(), off], vec![off, Rational64::zero()]],
        )
        .unwrap()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn q_values(&self) -> &[Rational64] {
        &self.q
    }

    pub fn b_matrix(&self) -> &[Vec<Rational64>] {
        &self.b
    }

    /// Common denominator used by the scaled integer evaluations.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn ensure_enumerable(&self) -> Result<()> {
        let size = self.size();
        if size > ELEMENT_LIMIT {
            return Err(Error::TooLarge { size, limit: ELEMENT_LIMIT });
        }
        Ok(())
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1 % self.orders[i];
        e
    }

    /// Mixed-radix index with the first coordinate varying fastest.
    pub fn index(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, d) in x.iter().zip(&self.orders).rev() {
            idx = idx * (*d as usize) + *c as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Element {
        self.orders
            .iter()
            .map(|&d| {
                let c = idx % d as usize;
                idx /= d as usize;
                c as u64
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size() as usize).map(move |i| self.element(i))
    }

    pub fn reduce(&self, coords: &[i64]) -> Element {
        coords.iter().zip(&self.orders).map(|(&c, &d)| c.mod_floor(&(d as i64)) as u64).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, d)| (d - a) % d).collect()
    }

    pub fn mul(&self, k: u64, x: &[u64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(a, d)| ((*a as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn order_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / c.gcd(&d))))
    }

    /// `q(x)·scale`, reduced into `[0, 2·scale)`.
    pub fn q_scaled(&self, x: &[u64]) -> i64 {
        let m = 2 * self.scale as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            acc += self.qs[i] as i128 * xi * xi;
            for j in i + 1..x.len() {
                acc += 2 * self.bs[i][j] as i128 * xi * x[j] as i128;
            }
            acc %= m;
        }
        acc.rem_euclid(m) as i64
    }

    /// `b(x,y)·scale`, reduced into `[0, scale)`.
    pub fn b_scaled(&self, x: &[u64], y: &[u64]) -> i64 {
        let m = self.scale as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                acc += self.bs[i][j] as i128 * x[i] as i128 * y[j] as i128;
            }
            acc %= m;
        }
        acc.rem_euclid(m) as i64
    }

    pub fn value(&self, x: &[u64]) -> Rational64 {
        Rational64::new(self.q_scaled(x), self.scale)
    }

    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> Rational64 {
        Rational64::new(self.b_scaled(x, y), self.scale)
    }

    /// `b(x, gⱼ)·scale` for every generator `gⱼ`.
    pub fn pairing_row(&self, x: &[u64]) -> Vec<i64> {
        (0..self.orders.len())
            .map(|j| {
                let acc: i128 = x.iter().enumerate().map(|(i, &c)| self.bs[i][j] as i128 * c as i128).sum();
                acc.rem_euclid(self.scale as i128) as i64
            })
            .collect()
    }

    /// The same group with `-q`.
    pub fn negated(&self) -> Self {
        FiniteQuadraticForm::new(
            self.orders.clone(),
            self.q.iter().map(|x| -x).collect(),
            self.b.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        )
        .unwrap()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.orders.len(), other.orders.len());
        let mut b = vec![vec![Rational64::zero(); n + m]; n + m];
        for i in 0..n {
            b[i][..n].copy_from_slice(&self.b[i]);
        }
        for i in 0..m {
            b[n + i][n..].copy_from_slice(&other.b[i]);
        }
        FiniteQuadraticForm::new(
            self.orders.iter().chain(&other.orders).copied().collect(),
            self.q.iter().chain(&other.q).copied().collect(),
            b,
        )
        .unwrap()
    }

    /// Direct sum of `n` copies.
    pub fn power(&self, n: usize) -> Self {
        (0..n).fold(FiniteQuadraticForm::trivial(), |acc, _| acc.direct_sum(self))
    }

    /// The form restricted to the subgroup generated by `gens`, presented by
    /// invariant-factor generators; also returns those generators.
    pub fn restrict(&self, gens: &[Element]) -> (FiniteQuadraticForm, Vec<Element>) {
        self.subquotient(gens, &[])
    }

    /// The form induced on `⟨big⟩/⟨small⟩`. The caller guarantees that
    /// `⟨small⟩ ⊆ ⟨big⟩` and that `⟨small⟩` is isotropic and orthogonal to
    /// `⟨big⟩`, so the induced form is well defined.
    pub fn subquotient(&self, big: &[Element], small: &[Element]) -> (FiniteQuadraticForm, Vec<Element>) {
        let gens = quotient_generators(&self.orders, big, small);
        let orders: Vec<u64> = gens.iter().map(|(_, d)| *d).collect();
        let reps: Vec<Element> = gens.into_iter().map(|(g, _)| g).collect();
        let q = reps.iter().map(|g| self.value(g)).collect();
        let b = reps.iter().map(|g| reps.iter().map(|h| self.bilinear(g, h)).collect()).collect();
        let form = FiniteQuadraticForm::new(orders, q, b).expect("subquotient of a valid form is valid");
        (form, reps)
    }

    /// Generators of the p-primary component.
    pub fn p_part_generators(&self, p: u64) -> Vec<Element> {
        (0..self.orders.len())
            .map(|i| {
                let mut m = self.orders[i];
                while m.is_multiple_of(p) {
                    m /= p;
                }
                self.mul(m, &self.generator(i))
            })
            .filter(|g| !self.is_zero(g))
            .collect()
    }

    /// Restriction to the p-primary component.
    pub fn p_part(&self, p: u64) -> FiniteQuadraticForm {
        self.restrict(&self.p_part_generators(p)).0
    }

    /// Invariant factors of the underlying group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let diag: IntMat = (0..self.orders.len())
            .map(|i| {
                (0..self.orders.len())
                    .map(|j| if i == j { self.orders[i].into() } else { 0.into() })
                    .collect()
            })
            .collect();
        matrix::smith(&diag)
            .divisors
            .iter()
            .map(|d| d.to_u64().unwrap())
            .filter(|&d| d > 1)
            .collect()
    }

    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Number of cyclic factors of the p-primary component.
    pub fn length_p(&self, p: u64) -> usize {
        self.invariant_factors().iter().filter(|&&d| d % p == 0).count()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.orders.iter().flat_map(|&d| prime_factors(d)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// True when `b` is nondegenerate.
    pub fn is_nondegenerate(&self) -> bool {
        self.radical_generators().is_empty()
    }

    /// Generators of `{x : b(x, ·) = 0}`.
    pub fn radical_generators(&self) -> Vec<Element> {
        let all: Vec<Element> = (0..self.orders.len()).map(|i| self.generator(i)).collect();
        quotient_generators(&self.orders, &self.orthogonal_lattice_generators(&all), &[])
            .into_iter()
            .map(|(g, _)| g)
            .collect()
    }

    /// Generators of the subgroup of elements orthogonal to all of `hs`.
    pub fn orthogonal_lattice_generators(&self, hs: &[Element]) -> Vec<Element> {
        let k = self.orders.len();
        if hs.is_empty() {
            return (0..k).map(|i| self.generator(i)).collect();
        }
        let m = hs.len();
        // rows: generator pairings with each h, then scale·I; left kernel
        let mut a: IntMat = (0..k)
            .map(|i| {
                let g = self.generator(i);
                hs.iter().map(|h| self.b_scaled(&g, h).into()).collect()
            })
            .collect();
        for t in 0..m {
            a.push((0..m).map(|s| if s == t { self.scale.into() } else { 0.into() }).collect());
        }
        matrix::left_kernel(&a)
            .iter()
            .map(|row| {
                let c: Vec<i64> = row[..k].iter().map(|x| (x % self.scale).to_i64().unwrap()).collect();
                self.reduce(&c)
            })
            .filter(|g| !self.is_zero(g))
            .collect()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .orders
            .iter()
            .zip(&self.q)
            .map(|(d, q)| format!("Z/{d}[q={}]", fmt_rat64(q)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Invariant-factor generators of `⟨big⟩/⟨small⟩` inside `⊕ Z/dᵢ`, as
/// `(representative, order)` pairs with order > 1.
pub(crate) fn quotient_generators(orders: &[u64], big: &[Element], small: &[Element]) -> Vec<(Element, u64)> {
    let k = orders.len();
    if k == 0 {
        return Vec::new();
    }
    let relations = |gens: &[Element]| -> IntMat {
        let mut rows: IntMat = gens.iter().map(|g| g.iter().map(|&c| c.into()).collect()).collect();
        for (i, &d) in orders.iter().enumerate() {
            rows.push((0..k).map(|j| if i == j { d.into() } else { 0.into() }).collect());
        }
        matrix::hermite(&rows)
    };
    let l_big = relations(big);
    let l_small = relations(small);
    let inv = matrix::inverse_rat(&matrix::to_rat(&l_big)).expect("relation lattice has full rank");
    let c_rat = matrix::mul_rat(&matrix::to_rat(&l_small), &inv);
    let c: IntMat = c_rat
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.is_integer(), "small subgroup is not contained in big subgroup");
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    let s = matrix::smith(&c);
    let v_inv = matrix::inverse_rat(&matrix::to_rat(&s.v)).expect("unimodular");
    let new_basis = matrix::mul_rat(&v_inv, &matrix::to_rat(&l_big));
    s.divisors
        .iter()
        .zip(new_basis)
        .filter(|(d, _)| d.to_u64().unwrap() > 1)
        .map(|(d, row)| {
            let g = row
                .iter()
                .zip(orders)
                .map(|(x, &o)| x.to_integer().mod_floor(&o.into()).to_u64().unwrap())
                .collect();
            (g, d.to_u64().unwrap())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn validation() {
        assert!(FiniteQuadraticForm::cyclic(2, r(1, 2)).is_ok());
        assert!(FiniteQuadraticForm::cyclic(2, r(1, 4)).is_err());
        assert!(FiniteQuadraticForm::cyclic(3, r(1, 3)).is_err());
        assert!(FiniteQuadraticForm::cyclic(3, r(2, 3)).is_ok());
        assert!(FiniteQuadraticForm::cyclic(1, r(0, 1)).is_err());
        let q = FiniteQuadraticForm::cyclic(2, r(-1, 2)).unwrap();
        assert_eq!(q.q_values()[0], r(3, 2));
    }

    #[test]
    fn values_and_indices() {
        let u = FiniteQuadraticForm::u(1);
        let vals: Vec<Rational64> = u.elements().map(|x| u.value(&x)).collect();
        assert_eq!(vals, vec![r(0, 1), r(0, 1), r(0, 1), r(1, 1)]);
        for i in 0..u.size() as usize {
            assert_eq!(u.index(&u.element(i)), i);
        }
        assert_eq!(u.length(), 2);
    }

    #[test]
    fn p_parts_and_lengths() {
        let z6 = FiniteQuadraticForm::cyclic(6, r(1, 6) * 2).unwrap();
        assert_eq!(z6.p_part(3).size(), 3);
        assert_eq!(z6.p_part(2).size(), 2);
        let z8 = FiniteQuadraticForm::cyclic(8, r(3, 8)).unwrap();
        assert_eq!(z8.p_part(2), z8);
        assert!(z8.p_part(3).is_trivial());
        let row10 = FiniteQuadraticForm::u(2).direct_sum(&FiniteQuadraticForm::u(1)).direct_sum(
            &FiniteQuadraticForm::cyclic(2, r(3, 2)).unwrap(),
        );
        assert_eq!(row10.length(), 5);
        assert_eq!(FiniteQuadraticForm::trivial().length(), 0);
        assert_eq!(FiniteQuadraticForm::u(1).power(2).direct_sum(&FiniteQuadraticForm::cyclic(2, r(1, 2)).unwrap()).length(), 5);
    }

    #[test]
    fn orthogonal_and_radical() {
        let u = FiniteQuadraticForm::u(1);
        let perp = u.orthogonal_lattice_generators(&[vec![1, 0]]);
        let (f, _) = u.restrict(&perp);
        assert_eq!(f.size(), 2);
        assert!(u.is_nondegenerate());
        let deg = FiniteQuadraticForm::cyclic(2, r(1, 1)).unwrap();
        assert!(!deg.is_nondegenerate());
    }
}
