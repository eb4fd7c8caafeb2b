use std::collections::BTreeSet;

use super::group::{quotient_generators, Element, FiniteQuadraticForm};
use crate::error::Result;

/// A subgroup of a finite quadratic form, stored by invariant-factor
/// generators and its sorted element indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    gens: Vec<Element>,
    gen_orders: Vec<u64>,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn generated(parent: &FiniteQuadraticForm, gens: &[Element]) -> Result<Subgroup> {
        parent.ensure_enumerable()?;
        let structure = quotient_generators(parent.orders(), gens, &[]);
        let gen_orders: Vec<u64> = structure.iter().map(|(_, d)| *d).collect();
        let gens: Vec<Element> = structure.into_iter().map(|(g, _)| g).collect();
        let elements = span_indices(parent, &gens, &gen_orders);
        Ok(Subgroup { gens, gen_orders, elements })
    }

    pub fn trivial(parent: &FiniteQuadraticForm) -> Result<Subgroup> {
        Subgroup::generated(parent, &[])
    }

    pub fn whole(parent: &FiniteQuadraticForm) -> Result<Subgroup> {
        let all: Vec<Element> = (0..parent.num_generators()).map(|i| parent.generator(i)).collect();
        Subgroup::generated(parent, &all)
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.gen_orders
    }

    pub fn size(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Sorted indices of the elements in the parent.
    pub fn element_indices(&self) -> &[usize] {
        &self.elements
    }

    pub fn elements(&self, parent: &FiniteQuadraticForm) -> Vec<Element> {
        self.elements.iter().map(|&i| parent.element(i)).collect()
    }

    pub fn contains(&self, parent: &FiniteQuadraticForm, x: &[u64]) -> bool {
        self.elements.binary_search(&parent.index(x)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|i| other.elements.binary_search(i).is_ok())
    }

    pub fn is_isotropic(&self, parent: &FiniteQuadraticForm) -> bool {
        self.gens.iter().enumerate().all(|(i, g)| {
            parent.q_scaled(g) == 0 && self.gens[..i].iter().all(|h| parent.b_scaled(g, h) == 0)
        })
    }

    /// The restricted form, on the invariant-factor generators.
    pub fn form(&self, parent: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        parent.restrict(&self.gens).0
    }

    /// `H^⊥ = {x : b(x, h) = 0 for all h ∈ H}`.
    pub fn orthogonal(&self, parent: &FiniteQuadraticForm) -> Result<Subgroup> {
        Subgroup::generated(parent, &parent.orthogonal_lattice_generators(&self.gens))
    }

    /// Length, i.e. the number of invariant factors.
    pub fn length(&self) -> usize {
        self.gens.len()
    }
}

fn span_indices(parent: &FiniteQuadraticForm, gens: &[Element], orders: &[u64]) -> Vec<usize> {
    let mut elems = vec![parent.zero()];
    for (g, &d) in gens.iter().zip(orders) {
        let mut next = Vec::with_capacity(elems.len() * d as usize);
        for e in &elems {
            let mut x = e.clone();
            for _ in 0..d {
                next.push(x.clone());
                x = parent.add(&x, g);
            }
        }
        elems = next;
    }
    let mut idx: Vec<usize> = elems.iter().map(|e| parent.index(e)).collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// All isotropic subgroups of order at most `max_order`, sorted by order and
/// then by element indices.
pub fn isotropic_subgroups(q: &FiniteQuadraticForm, max_order: u64) -> Result<Vec<Subgroup>> {
    q.ensure_enumerable()?;
    let isotropic: Vec<Element> = q.elements().filter(|x| !q.is_zero(x) && q.q_scaled(x) == 0).collect();
    let trivial = Subgroup::trivial(q)?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(trivial.elements.clone());
    let mut found = vec![trivial.clone()];
    let mut frontier = vec![trivial];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for x in &isotropic {
                if s.contains(q, x) || s.gens.iter().any(|g| q.b_scaled(g, x) != 0) {
                    continue;
                }
                let ord = q.order_of(x);
                let closure = extend_indices(q, &s.elements, x, ord);
                if closure.len() as u64 > max_order || seen.contains(&closure) {
                    continue;
                }
                seen.insert(closure);
                let mut gens = s.gens.clone();
                gens.push(x.clone());
                let t = Subgroup::generated(q, &gens)?;
                next.push(t.clone());
                found.push(t);
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| (a.size(), &a.elements).cmp(&(b.size(), &b.elements)));
    Ok(found)
}

fn extend_indices(q: &FiniteQuadraticForm, base: &[usize], x: &[u64], ord: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(base.len() * ord as usize);
    let mut shift = q.zero();
    for _ in 0..ord {
        for &i in base {
            out.push(q.index(&q.add(&q.element(i), &shift)));
        }
        shift = q.add(&shift, x);
    }
    out.sort_unstable();
    out.dedup();
    out
}
