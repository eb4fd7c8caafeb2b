use num_rational::Rational64;
use serde::Serialize;

use super::group::{Element, FiniteQuadraticForm};
use super::iso::form_iso;
use super::lattice_link::discriminant_form;
use crate::arith::{split_valuation, Int, UnitClass};
use crate::error::{Error, Result};
use crate::lattice::{determinant, Lattice};

/// Determinant of a p-adic lattice modulo squares of p-adic units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PadicDetClass {
    pub p: u64,
    pub valuation: u32,
    pub unit: UnitClass,
    /// Set for 2-adic forms with an odd order-2 summand: such forms have
    /// realizations whose units differ by 5, so the unit is only defined
    /// modulo 5.
    pub up_to_five: bool,
}

impl PadicDetClass {
    pub fn one(p: u64) -> Self {
        PadicDetClass { p, valuation: 0, unit: UnitClass::one(p), up_to_five: false }
    }

    pub fn of_integer(n: &Int, p: u64) -> Self {
        let (valuation, u) = split_valuation(n, p);
        PadicDetClass { p, valuation, unit: UnitClass::of_unit(&u, p), up_to_five: false }
    }

    pub fn mul(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "classes at different primes");
        PadicDetClass {
            p: self.p,
            valuation: self.valuation + o.valuation,
            unit: self.unit.mul(o.unit),
            up_to_five: self.up_to_five || o.up_to_five,
        }
    }

    pub fn neg(self) -> Self {
        PadicDetClass { unit: self.unit.mul(UnitClass::minus_one(self.p)), ..self }
    }

    /// Equality of classes, modulo 5 when either side is only defined so.
    pub fn same_class(self, o: Self) -> bool {
        if self.p != o.p || self.valuation != o.valuation {
            return false;
        }
        if self.up_to_five || o.up_to_five {
            self.unit == o.unit || self.unit == o.unit.mul(UnitClass::Dyadic(5))
        } else {
            self.unit == o.unit
        }
    }

    /// `self ≡ ±other`.
    pub fn same_up_to_sign(self, o: Self) -> bool {
        self.same_class(o) || self.same_class(o.neg())
    }
}

impl std::fmt::Display for PadicDetClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}·[{}]", self.p, self.valuation, self.unit)?;
        if self.up_to_five {
            write!(f, " (mod 5)")?;
        }
        Ok(())
    }
}

/// Determinant class of `K(q_p)`, the p-adic lattice of rank `l(q_p)` with
/// discriminant form `q_p`.
///
/// The form is split into orthogonal blocks of rank at most 2. Each block is
/// realized by an even integral lattice found by bounded search, checked by
/// recomputing its discriminant form, and the determinants are multiplied.
pub fn kq_det(q: &FiniteQuadraticForm, p: u64) -> Result<PadicDetClass> {
    let qp = q.p_part(p);
    qp.ensure_enumerable()?;
    let mut class = PadicDetClass::one(p);
    for block in jordan_blocks(&qp, p)? {
        let n = realize_block(&block, p)?;
        class = class.mul(PadicDetClass::of_integer(&n, p));
    }
    if p == 2 && has_odd_order2_summand(&qp)? {
        class.up_to_five = true;
    }
    Ok(class)
}

/// Orthogonal splitting of a nondegenerate p-primary form into blocks of
/// rank 1 (and, for p = 2, rank 2).
fn jordan_blocks(q: &FiniteQuadraticForm, p: u64) -> Result<Vec<FiniteQuadraticForm>> {
    let mut blocks = Vec::new();
    let mut rest = q.clone();
    while !rest.is_trivial() {
        if !rest.is_nondegenerate() {
            return Err(Error::InvalidForm(format!("degenerate bilinear form: {}", rest.describe())));
        }
        let e = *rest.orders().iter().max().unwrap();
        let elems: Vec<Element> = rest.elements().filter(|x| rest.order_of(x) == e).collect();
        let unit = |bs: i64| -> bool {
            // b·e is an integer because b has denominator dividing e
            let v = bs as i128 * e as i128 / rest.scale() as i128;
            v.rem_euclid(p as i128) != 0
        };
        let split: Vec<Element> = if let Some(g) = elems.iter().find(|g| unit(rest.b_scaled(g, g))) {
            vec![g.clone()]
        } else if p == 2 {
            let pair = elems.iter().enumerate().find_map(|(i, g)| {
                elems[i + 1..].iter().find(|h| unit(rest.b_scaled(g, h))).map(|h| vec![g.clone(), h.clone()])
            });
            pair.ok_or_else(|| Error::InvalidForm(format!("no Jordan block found in {}", rest.describe())))?
        } else {
            return Err(Error::InvalidForm(format!("no Jordan block found in {}", rest.describe())));
        };
        let (block, _) = rest.restrict(&split);
        let (complement, _) = rest.restrict(&rest.orthogonal_lattice_generators(&split));
        if block.size() * complement.size() != rest.size() {
            return Err(Error::InvalidForm("block does not split off orthogonally".into()));
        }
        blocks.push(block);
        rest = complement;
    }
    Ok(blocks)
}

/// Search bound on the unit part of realizing Gram entries.
const SEARCH_BOUND: i64 = 16;

/// Determinant of an even lattice whose p-part of the discriminant form is
/// isomorphic to `block`.
fn realize_block(block: &FiniteQuadraticForm, p: u64) -> Result<Int> {
    let pk = *block.orders().iter().max().unwrap() as i64;
    let matches = |gram: &[Vec<i64>]| -> Result<Option<Int>> {
        let Ok(l) = Lattice::from_gram(gram) else { return Ok(None) };
        let q = discriminant_form(&l)?.p_part(p);
        Ok(form_iso(&q, block)?.map(|_| determinant(&l)))
    };
    match block.num_generators() {
        1 => {
            let base = if p == 2 { pk } else { 2 * pk };
            for u in 1..=2 * SEARCH_BOUND {
                if u % p as i64 == 0 {
                    continue;
                }
                for s in [1, -1] {
                    if let Some(d) = matches(&[vec![s * base * u]])? {
                        return Ok(d);
                    }
                }
            }
        }
        2 if p == 2 => {
            let alternating = |start: i64, step: i64| {
                (0..).map(move |i| if i % 2 == 0 { start + step * (i / 2) } else { -(start + step * (i / 2)) })
            };
            for b in alternating(1, 2).take_while(|b| b.abs() <= SEARCH_BOUND) {
                for a in std::iter::once(0).chain(alternating(2, 2).take_while(|a| a.abs() <= SEARCH_BOUND)) {
                    for c in std::iter::once(0).chain(alternating(2, 2).take_while(|c| c.abs() <= SEARCH_BOUND)) {
                        if let Some(d) = matches(&[vec![pk * a, pk * b], vec![pk * b, pk * c]])? {
                            return Ok(d);
                        }
                    }
                }
            }
        }
        _ => {}
    }
    Err(Error::RealizationNotFound(block.describe()))
}

/// Whether the form splits off an orthogonal summand `Z/2` with `q = ±1/2`.
pub fn has_odd_order2_summand(q: &FiniteQuadraticForm) -> Result<bool> {
    q.ensure_enumerable()?;
    let half = Rational64::new(1, 2);
    let three_halves = Rational64::new(3, 2);
    for g in q.elements() {
        if q.order_of(&g) != 2 {
            continue;
        }
        let v = q.value(&g);
        if v != half && v != three_halves {
            continue;
        }
        let (perp, _) = q.restrict(&q.orthogonal_lattice_generators(std::slice::from_ref(&g)));
        let g_in_perp = q.b_scaled(&g, &g) == 0;
        if !g_in_perp && 2 * perp.size() == q.size() {
            return Ok(true);
        }
    }
    Ok(false)
}
