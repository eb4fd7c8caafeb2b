use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::group::{Element, FiniteQuadraticForm};
use super::subgroup::Subgroup;
use crate::arith::{rat64_mod, to_rat64, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{direct_sum, lattice_from_generators, Lattice};
use crate::matrix::{self, IntMat, RatMat};

/// `L*/L` together with lifting and reduction maps to the ambient space.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    lattice: Lattice,
    form: FiniteQuadraticForm,
    /// Ambient lifts of the generators.
    lifts: RatMat,
    /// Columns of the Smith transform `V` kept for the nontrivial factors.
    v_cols: Vec<usize>,
    v: IntMat,
    orders: Vec<Int>,
}

impl DiscriminantGroup {
    pub fn new(l: &Lattice) -> Result<Self> {
        if !l.is_even() {
            return Err(Error::OddNorm("discriminant forms need an even lattice".into()));
        }
        let g = l.gram();
        if l.rank() == 0 || matrix::det_bareiss(g).is_zero() {
            return Err(Error::DegenerateSpace);
        }
        let s = matrix::smith(g);
        let gr = matrix::to_rat(g);
        let mut lifts = Vec::new();
        let mut coords = Vec::new();
        let mut v_cols = Vec::new();
        let mut orders = Vec::new();
        for (i, d) in s.divisors.iter().enumerate() {
            if d.to_u64() == Some(1) {
                continue;
            }
            let dr = Rat::from_integer(d.clone());
            let z: Vec<Rat> = s.u[i].iter().map(|x| Rat::from_integer(x.clone()) / &dr).collect();
            lifts.push(l.vector(&z));
            coords.push(z);
            v_cols.push(i);
            orders.push(d.clone());
        }
        let mut q = Vec::new();
        let mut b = vec![Vec::new(); coords.len()];
        for (i, zi) in coords.iter().enumerate() {
            q.push(to_rat64(&matrix::bilinear(zi, &gr, zi))?);
            for zj in &coords {
                b[i].push(to_rat64(&matrix::bilinear(zi, &gr, zj))?);
            }
        }
        let ord_u64 = orders
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::Overflow(d.to_string())))
            .collect::<Result<Vec<u64>>>()?;
        let form = FiniteQuadraticForm::new(ord_u64, q, b)?;
        Ok(DiscriminantGroup { lattice: l.clone(), form, lifts, v_cols, v: s.v, orders })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    /// An ambient vector of `L*` representing `x`.
    pub fn lift(&self, x: &[u64]) -> Vec<Rat> {
        let dim = self.lattice.space().dim();
        let mut out = vec![Rat::zero(); dim];
        for (c, g) in x.iter().zip(&self.lifts) {
            if *c == 0 {
                continue;
            }
            let c = Rat::from_integer(Int::from(*c));
            for (o, y) in out.iter_mut().zip(g) {
                *o += &c * y;
            }
        }
        out
    }

    /// The class of an ambient vector of `L*`.
    pub fn reduce(&self, v: &[Rat]) -> Result<Element> {
        let z = self
            .lattice
            .coordinates(v)
            .ok_or_else(|| Error::NotSublattice("vector is outside the span of the lattice".into()))?;
        let w = matrix::vec_mul_rat(&z, &matrix::to_rat(self.lattice.gram()));
        if !w.iter().all(Rat::is_integer) {
            return Err(Error::NotSublattice("vector is not in the dual lattice".into()));
        }
        let w: Vec<Int> = w.iter().map(Rat::to_integer).collect();
        Ok(self
            .v_cols
            .iter()
            .zip(&self.orders)
            .map(|(&col, d)| {
                let a = w.iter().zip(&self.v).fold(Int::zero(), |acc, (x, row)| acc + x * &row[col]);
                a.mod_floor(d).to_u64().unwrap()
            })
            .collect())
    }

    /// Subgroup of the classes of the given ambient vectors.
    pub fn subgroup_of(&self, vectors: &RatMat) -> Result<Subgroup> {
        let gens = vectors.iter().map(|v| self.reduce(v)).collect::<Result<Vec<_>>>()?;
        Subgroup::generated(&self.form, &gens)
    }
}

pub fn discriminant_form(l: &Lattice) -> Result<FiniteQuadraticForm> {
    Ok(DiscriminantGroup::new(l)?.form)
}

/// The even overlattice `L ⊆ L' ⊆ L*` with `L'/L = H`.
pub fn overlattice(dg: &DiscriminantGroup, h: &Subgroup) -> Result<Lattice> {
    if !h.is_isotropic(dg.form()) {
        return Err(Error::NotIsotropic);
    }
    let mut gens = dg.lattice.basis().clone();
    gens.extend(h.generators().iter().map(|g| dg.lift(g)));
    lattice_from_generators(dg.lattice.space(), &gens)
}

/// The overlattice of `T ⊕ S` defined by `Γ = {h + ξ(h)}`, where `ξ` sends
/// the generators of `H ⊆ D_T` to `images` in `D_S`.
pub fn glue(t: &DiscriminantGroup, s: &DiscriminantGroup, h: &Subgroup, images: &[Element]) -> Result<Lattice> {
    let (qt, qs) = (t.form(), s.form());
    if images.len() != h.generators().len() {
        return Err(Error::NotEmbedding("one image per generator of H is required".into()));
    }
    for (d, img) in h.generator_orders().iter().zip(images) {
        if img.len() != qs.num_generators() || !qs.is_zero(&qs.mul(*d, img)) {
            return Err(Error::NotEmbedding(format!("image of a generator of order {d} has the wrong order")));
        }
    }
    let hform = h.form(qt);
    let map = |x: &[u64]| -> Element {
        x.iter().zip(images).fold(qs.zero(), |acc, (&c, img)| qs.add(&acc, &qs.mul(c, img)))
    };
    let mut seen = std::collections::BTreeSet::new();
    for x in hform.elements() {
        let hx: Element = x
            .iter()
            .zip(h.generators())
            .fold(qt.zero(), |acc, (&c, g)| qt.add(&acc, &qt.mul(c, g)));
        let y = map(&x);
        if !seen.insert(qs.index(&y)) {
            return Err(Error::NotEmbedding("map is not injective".into()));
        }
        if !rat64_mod(qt.value(&hx) + qs.value(&y), 2).is_zero() {
            return Err(Error::NotEmbedding("q_S(ξ(h)) ≠ -q_T(h)".into()));
        }
    }
    let sum = direct_sum(t.lattice(), s.lattice());
    let (nt, ns) = (t.lattice().space().dim(), s.lattice().space().dim());
    let mut gens = sum.basis().clone();
    for (g, img) in h.generators().iter().zip(images) {
        let mut v = t.lift(g);
        v.extend(s.lift(img));
        debug_assert_eq!(v.len(), nt + ns);
        gens.push(v);
    }
    lattice_from_generators(sum.space(), &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::isotropic_subgroups;
    use crate::lattice::determinant;
    use num_rational::Rational64;
    use num_traits::One;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn small_discriminant_forms() {
        let u = Lattice::from_gram(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(discriminant_form(&u).unwrap().is_trivial());
        let u2 = Lattice::from_gram(&[vec![0, 2], vec![2, 0]]).unwrap();
        let q = discriminant_form(&u2).unwrap();
        assert_eq!(q.orders(), &[2, 2]);
        assert!(crate::discform::form_iso(&q, &FiniteQuadraticForm::u(1)).unwrap().is_some());
        let m2 = Lattice::from_gram(&[vec![-2]]).unwrap();
        let q = discriminant_form(&m2).unwrap();
        assert_eq!(q.q_values(), &[r(3, 2)]);
    }

    #[test]
    fn reduce_inverts_lift() {
        let n = Lattice::from_gram(&[vec![2, 1, 2], vec![1, -2, 0], vec![2, 0, 0]]).unwrap();
        let dg = DiscriminantGroup::new(&n).unwrap();
        assert_eq!(dg.form().size(), 8);
        for x in dg.form().elements() {
            assert_eq!(dg.reduce(&dg.lift(&x)).unwrap(), x);
        }
    }

    #[test]
    fn nikulin_lattice_as_overlattice() {
        let diag: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| if i == j { -2 } else { 0 }).collect()).collect();
        let a = Lattice::from_gram(&diag).unwrap();
        let dg = DiscriminantGroup::new(&a).unwrap();
        let half: Vec<Rat> = vec![Rat::new(Int::one(), Int::from(2)); 8];
        let h = dg.subgroup_of(&vec![half]).unwrap();
        let n = overlattice(&dg, &h).unwrap();
        assert_eq!(determinant(&n), Int::from(64));
        let isos = isotropic_subgroups(dg.form(), 1 << 8).unwrap();
        assert!(isos.contains(&h));
    }

    #[test]
    fn glue_trivial_is_direct_sum() {
        let t = Lattice::from_gram(&[vec![-2]]).unwrap();
        let s = Lattice::from_gram(&[vec![2]]).unwrap();
        let (dt, ds) = (DiscriminantGroup::new(&t).unwrap(), DiscriminantGroup::new(&s).unwrap());
        let h0 = Subgroup::trivial(dt.form()).unwrap();
        let m = glue(&dt, &ds, &h0, &[]).unwrap();
        assert_eq!(determinant(&m), Int::from(-4));
        let h = Subgroup::whole(dt.form()).unwrap();
        let m = glue(&dt, &ds, &h, &[vec![1]]).unwrap();
        assert_eq!(determinant(&m), Int::from(-1));
    }
}
