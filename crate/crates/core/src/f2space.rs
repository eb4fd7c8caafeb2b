//! The quadratic space `(F₂⁵, q = x₁x₂ + x₃x₄ + x₅²)`, its subspaces and
//! orthogonal group.
//!
//! A vector is a 5-bit word with `x₁` in the most significant bit, so numeric
//! order on words agrees with lexicographic order on the strings `x₁…x₅`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

pub const DIM: usize = 5;
const FULL: u8 = (1 << DIM) - 1;

/// A vector of `F₂⁵`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Vector(u8);

impl F2Vector {
    pub fn new(bits: u8) -> Self {
        assert!(bits <= FULL, "F2Vector has five coordinates");
        F2Vector(bits)
    }

    /// The unit vector `eᵢ`, `1 ≤ i ≤ 5`.
    pub fn unit(i: usize) -> Self {
        assert!((1..=DIM).contains(&i));
        F2Vector(1 << (DIM - i))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Coordinate `xᵢ`, `1 ≤ i ≤ 5`.
    pub fn coord(self, i: usize) -> u8 {
        (self.0 >> (DIM - i)) & 1
    }

    pub fn coords(self) -> [u8; DIM] {
        std::array::from_fn(|k| self.coord(k + 1))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s.len() != DIM {
            return None;
        }
        s.bytes().try_fold(0u8, |acc, c| match c {
            b'0' => Some(acc << 1),
            b'1' => Some((acc << 1) | 1),
            _ => None,
        })
        .map(F2Vector)
    }
}

impl std::ops::Add for F2Vector {
    type Output = F2Vector;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: F2Vector) -> F2Vector {
        F2Vector(self.0 ^ o.0)
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.coords() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for F2Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn quad_value(v: F2Vector) -> u8 {
    let x = v.coords();
    (x[0] & x[1]) ^ (x[2] & x[3]) ^ x[4]
}

/// The polar form `b(u, v) = q(u+v) + q(u) + q(v)`.
pub fn polar(u: F2Vector, v: F2Vector) -> u8 {
    quad_value(u + v) ^ quad_value(u) ^ quad_value(v)
}

fn all_vectors() -> impl Iterator<Item = F2Vector> {
    (0..=FULL).map(F2Vector)
}

/// Membership bitset of the span of `vs`: bit `w` is set iff the word `w` lies in it.
fn span_mask(vs: &[F2Vector]) -> u32 {
    let mut mask = 1u32;
    for &v in vs {
        let mut next = mask;
        for w in 0..=FULL {
            if mask >> w & 1 == 1 {
                next |= 1 << (w ^ v.0);
            }
        }
        mask = next;
    }
    mask
}

/// A subspace stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Subspace {
    basis: Vec<F2Vector>,
    mask: u32,
}

impl F2Subspace {
    pub fn span(vs: &[F2Vector]) -> Self {
        let mask = span_mask(vs);
        F2Subspace { basis: rref(vs), mask }
    }

    pub fn zero() -> Self {
        F2Subspace::span(&[])
    }

    pub fn whole() -> Self {
        F2Subspace::span(&(1..=DIM).map(F2Vector::unit).collect::<Vec<_>>())
    }

    /// The canonical basis: reduced row echelon form, pivots left to right.
    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Bit `w` is set iff the word `w` is an element.
    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, v: F2Vector) -> bool {
        self.mask >> v.0 & 1 == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = F2Vector> + '_ {
        all_vectors().filter(|&v| self.contains(v))
    }

    pub fn intersection(&self, o: &F2Subspace) -> F2Subspace {
        let common: Vec<F2Vector> = all_vectors().filter(|&v| self.contains(v) && o.contains(v)).collect();
        F2Subspace::span(&common)
    }

    /// Number of elements with `q = 1`.
    pub fn odd_count(&self) -> usize {
        self.elements().filter(|&v| quad_value(v) == 1).count()
    }
}

impl PartialOrd for F2Subspace {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Ordered by dimension, then lexicographically by canonical basis.
impl Ord for F2Subspace {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.dim(), &self.basis).cmp(&(o.dim(), &o.basis))
    }
}

impl fmt::Display for F2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(F2Vector::to_string).collect();
        write!(f, "<{}>", rows.join(","))
    }
}

/// Serialized as its reduced basis, e.g. `["10000", "01001"]`.
impl Serialize for F2Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.basis)
    }
}

fn rref(vs: &[F2Vector]) -> Vec<F2Vector> {
    let mut rows: Vec<u8> = vs.iter().map(|v| v.0).filter(|&b| b != 0).collect();
    let mut out: Vec<u8> = Vec::new();
    for bit in (0..DIM).rev() {
        let m = 1u8 << bit;
        let Some(pos) = rows.iter().position(|&r| r & m != 0) else { continue };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if *r & m != 0 {
                *r ^= pivot;
            }
        }
        rows.retain(|&r| r != 0);
        out.push(pivot);
    }
    out.into_iter().map(F2Vector).collect()
}

/// All subspaces of `F₂⁵`, ordered by dimension and canonical basis.
pub fn enumerate_subspaces() -> Vec<F2Subspace> {
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut layer = vec![F2Subspace::zero()];
    let mut out = Vec::new();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            for v in all_vectors().filter(|&v| !s.contains(v)) {
                let mut gens = s.basis.clone();
                gens.push(v);
                let t = F2Subspace::span(&gens);
                if seen.insert(t.mask) {
                    next.push(t);
                }
            }
        }
        out.append(&mut layer);
        layer = next;
    }
    out.sort();
    out
}

/// An invertible linear map, stored by the images of `e₁, …, e₅`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Matrix([F2Vector; DIM]);

impl F2Matrix {
    pub fn identity() -> Self {
        F2Matrix(std::array::from_fn(|k| F2Vector::unit(k + 1)))
    }

    pub fn from_images(images: [F2Vector; DIM]) -> Self {
        F2Matrix(images)
    }

    pub fn images(&self) -> &[F2Vector; DIM] {
        &self.0
    }

    pub fn apply(&self, v: F2Vector) -> F2Vector {
        (1..=DIM).filter(|&i| v.coord(i) == 1).fold(F2Vector(0), |acc, i| acc + self.0[i - 1])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &F2Matrix) -> F2Matrix {
        F2Matrix(other.0.map(|v| self.apply(v)))
    }

    pub fn is_invertible(&self) -> bool {
        rref(&self.0).len() == DIM
    }

    pub fn preserves_q(&self) -> bool {
        all_vectors().all(|v| quad_value(self.apply(v)) == quad_value(v))
    }

    pub fn apply_subspace(&self, s: &F2Subspace) -> F2Subspace {
        let imgs: Vec<F2Vector> = s.basis.iter().map(|&v| self.apply(v)).collect();
        F2Subspace::span(&imgs)
    }
}

/// `O(F₂⁵, q)`.
#[derive(Clone, Debug)]
pub struct F2OrthogonalGroup {
    elements: Vec<F2Matrix>,
}

impl F2OrthogonalGroup {
    pub fn elements(&self) -> &[F2Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &F2Matrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }
}

/// All invertible maps preserving `q`, in sorted order.
///
/// Images of the unit vectors are chosen one at a time with the right
/// `q`-value and polar pairings against the earlier images, which is
/// equivalent to preserving `q` on all of `F₂⁵`.
pub fn orthogonal_group() -> F2OrthogonalGroup {
    let units: Vec<F2Vector> = (1..=DIM).map(F2Vector::unit).collect();
    let mut elements = Vec::new();
    let mut chosen: Vec<F2Vector> = Vec::with_capacity(DIM);
    fn extend(units: &[F2Vector], chosen: &mut Vec<F2Vector>, out: &mut Vec<F2Matrix>) {
        let k = chosen.len();
        if k == DIM {
            out.push(F2Matrix(std::array::from_fn(|i| chosen[i])));
            return;
        }
        let span = span_mask(chosen);
        for v in all_vectors() {
            if span >> v.0 & 1 == 1 || quad_value(v) != quad_value(units[k]) {
                continue;
            }
            if (0..k).any(|j| polar(v, chosen[j]) != polar(units[k], units[j])) {
                continue;
            }
            chosen.push(v);
            extend(units, chosen, out);
            chosen.pop();
        }
    }
    extend(&units, &mut chosen, &mut elements);
    elements.sort();
    F2OrthogonalGroup { elements }
}

/// Cross-check invariants of an orbit: every member shares them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInvariants {
    pub dim: usize,
    pub radical_dim: usize,
    pub odd_count: usize,
}

impl OrbitInvariants {
    pub fn of(s: &F2Subspace) -> Self {
        let radical = F2Subspace::span(&[F2Vector::unit(5)]);
        OrbitInvariants { dim: s.dim(), radical_dim: s.intersection(&radical).dim(), odd_count: s.odd_count() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// The least member in the subspace order.
    pub rep: F2Subspace,
    pub size: usize,
    pub invariants: OrbitInvariants,
}

impl Orbit {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn alpha(&self) -> usize {
        DIM - self.dim()
    }
}

/// Orbit partition of the nonzero subspaces, ordered by decreasing dimension
/// and then by representative.
pub fn orbits(subspaces: &[F2Subspace], group: &F2OrthogonalGroup) -> Vec<Orbit> {
    let mut done: BTreeSet<u32> = BTreeSet::new();
    let mut out = Vec::new();
    for s in subspaces.iter().filter(|s| s.dim() > 0) {
        if done.contains(&s.mask) {
            continue;
        }
        let members: BTreeSet<F2Subspace> = group.elements.iter().map(|g| g.apply_subspace(s)).collect();
        let invariants = OrbitInvariants::of(s);
        debug_assert!(members.iter().all(|m| OrbitInvariants::of(m) == invariants));
        done.extend(members.iter().map(F2Subspace::mask));
        let rep = members.iter().next().unwrap().clone();
        out.push(Orbit { rep, size: members.len(), invariants });
    }
    out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.rep.cmp(&b.rep)));
    out
}

/// Orbit of a subspace, as the set of member masks.
pub fn orbit_of(s: &F2Subspace, group: &F2OrthogonalGroup) -> BTreeSet<u32> {
    group.elements.iter().map(|g| g.apply_subspace(s).mask).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_values() {
        assert_eq!(quad_value(F2Vector::unit(1)), 0);
        assert_eq!(quad_value(F2Vector::unit(5)), 1);
        assert_eq!(quad_value(F2Vector::new(0b11111)), 1);
        assert_eq!(F2Vector::parse("01001"), Some(F2Vector::new(0b01001)));
        assert_eq!(F2Vector::new(0b01001).to_string(), "01001");
    }

    #[test]
    fn rref_is_canonical() {
        let a = F2Subspace::span(&[F2Vector::new(0b11000), F2Vector::new(0b01100)]);
        let b = F2Subspace::span(&[F2Vector::new(0b10100), F2Vector::new(0b11000)]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[F2Vector::new(0b10100), F2Vector::new(0b01100)]);
    }

    #[test]
    fn matrix_action() {
        let m = F2Matrix::from_images([
            F2Vector::unit(2),
            F2Vector::unit(1),
            F2Vector::unit(3),
            F2Vector::unit(4),
            F2Vector::unit(5),
        ]);
        assert!(m.preserves_q());
        assert_eq!(m.compose(&m), F2Matrix::identity());
        assert_eq!(m.apply(F2Vector::new(0b10001)), F2Vector::new(0b01001));
    }
}
