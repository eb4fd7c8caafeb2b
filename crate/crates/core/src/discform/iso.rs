use num_rational::Rational64;

use super::group::{Element, FiniteQuadraticForm};
use crate::arith::prime_factors;
use crate::error::Result;

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMap {
    pub images: Vec<Element>,
}

impl FormMap {
    pub fn apply(&self, target: &FiniteQuadraticForm, x: &[u64]) -> Element {
        x.iter()
            .zip(&self.images)
            .fold(target.zero(), |acc, (&c, img)| target.add(&acc, &target.mul(c, img)))
    }

    /// Exhaustive check that the map is a well-defined injective homomorphism
    /// preserving `q`.
    pub fn is_embedding(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm) -> bool {
        if self.images.len() != source.num_generators() {
            return false;
        }
        for (i, img) in self.images.iter().enumerate() {
            if !target.is_zero(&target.mul(source.orders()[i], img)) {
                return false;
            }
        }
        let mut seen = vec![false; target.size() as usize];
        for x in source.elements() {
            let y = self.apply(target, &x);
            let idx = target.index(&y);
            if seen[idx] || source.value(&x) != target.value(&y) {
                return false;
            }
            seen[idx] = true;
        }
        true
    }

    pub fn is_isomorphism(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm) -> bool {
        source.size() == target.size() && self.is_embedding(source, target)
    }
}

/// An isomorphism of finite quadratic forms, or `None` if none exists.
pub fn form_iso(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Result<Option<FormMap>> {
    a.ensure_enumerable()?;
    b.ensure_enumerable()?;
    if a.size() != b.size() || a.invariant_factors() != b.invariant_factors() {
        return Ok(None);
    }
    if value_profile(a) != value_profile(b) {
        return Ok(None);
    }
    Ok(Search::new(a, b).run())
}

/// An injective `q`-preserving homomorphism `a → b`, or `None`.
pub fn form_embedding(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Result<Option<FormMap>> {
    a.ensure_enumerable()?;
    b.ensure_enumerable()?;
    if !b.size().is_multiple_of(a.size()) {
        return Ok(None);
    }
    Ok(Search::new(a, b).run())
}

fn value_profile(q: &FiniteQuadraticForm) -> Vec<(u64, Rational64)> {
    let mut v: Vec<(u64, Rational64)> = q.elements().map(|x| (q.order_of(&x), q.value(&x))).collect();
    v.sort_unstable();
    v
}

struct Search<'a> {
    target: &'a FiniteQuadraticForm,
    elems: Vec<Element>,
    pairing_rows: Vec<Vec<i64>>,
    /// Source generators in processing order (largest order first).
    order: Vec<usize>,
    src_orders: Vec<u64>,
    /// `b(gᵢ, gⱼ)` scaled to the target's denominator, in processing order.
    src_b: Vec<Vec<Option<i64>>>,
    candidates: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(source: &'a FiniteQuadraticForm, target: &'a FiniteQuadraticForm) -> Self {
        let k = source.num_generators();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(source.orders()[i]));
        let elems: Vec<Element> = target.elements().collect();
        let pairing_rows = elems.iter().map(|x| target.pairing_row(x)).collect();
        let ts = Rational64::from_integer(target.scale());
        let src_b = order
            .iter()
            .map(|&i| {
                order
                    .iter()
                    .map(|&j| {
                        let v = source.b_matrix()[i][j] * ts;
                        v.is_integer().then(|| v.to_integer())
                    })
                    .collect()
            })
            .collect();
        let values: Vec<(u64, Rational64)> = elems.iter().map(|x| (target.order_of(x), target.value(x))).collect();
        let candidates = order
            .iter()
            .map(|&i| {
                let want = (source.orders()[i], source.q_values()[i]);
                (0..elems.len()).filter(|&t| values[t] == want).collect()
            })
            .collect();
        Search {
            target,
            elems,
            pairing_rows,
            src_orders: order.iter().map(|&i| source.orders()[i]).collect(),
            order,
            src_b,
            candidates,
        }
    }

    fn run(&self) -> Option<FormMap> {
        let mut span = vec![false; self.elems.len()];
        span[0] = true;
        let mut chosen = Vec::with_capacity(self.order.len());
        if !self.extend(&mut chosen, &span) {
            return None;
        }
        let mut images = vec![Vec::new(); self.order.len()];
        for (pos, &gen) in self.order.iter().enumerate() {
            images[gen] = self.elems[chosen[pos]].clone();
        }
        Some(FormMap { images })
    }

    fn b_scaled(&self, x: usize, y: usize) -> i64 {
        let row = &self.pairing_rows[x];
        let acc: i128 = self.elems[y].iter().zip(row).map(|(&c, &r)| c as i128 * r as i128).sum();
        acc.rem_euclid(self.target.scale() as i128) as i64
    }

    fn extend(&self, chosen: &mut Vec<usize>, span: &[bool]) -> bool {
        let depth = chosen.len();
        if depth == self.order.len() {
            return true;
        }
        let d = self.src_orders[depth];
        let primes = prime_factors(d);
        'cand: for &y in &self.candidates[depth] {
            for (j, &prev) in chosen.iter().enumerate() {
                match self.src_b[depth][j] {
                    Some(want) if want.rem_euclid(self.target.scale()) == self.b_scaled(y, prev) => {}
                    _ => continue 'cand,
                }
            }
            let ey = &self.elems[y];
            for &p in &primes {
                let z = self.target.mul(d / p, ey);
                if span[self.target.index(&z)] {
                    continue 'cand;
                }
            }
            let mut next = span.to_vec();
            for (idx, &inside) in span.iter().enumerate() {
                if !inside {
                    continue;
                }
                let mut x = self.elems[idx].clone();
                for _ in 1..d {
                    x = self.target.add(&x, ey);
                    next[self.target.index(&x)] = true;
                }
            }
            chosen.push(y);
            if self.extend(chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}
