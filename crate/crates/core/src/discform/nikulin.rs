use serde::Serialize;

use super::group::FiniteQuadraticForm;
use super::padic::{has_odd_order2_summand, kq_det, PadicDetClass};
use super::subgroup::Subgroup;
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionTrace {
    pub id: u8,
    pub triggered: bool,
    pub holds: bool,
}

/// Verdict of the primitive embedding criterion with its per-condition
/// trace. `notes` explain the arithmetic and are not serialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVerdict {
    pub embeds: bool,
    pub conditions: Vec<ConditionTrace>,
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl EmbeddingVerdict {
    pub fn condition(&self, id: u8) -> &ConditionTrace {
        &self.conditions[id as usize - 1]
    }
}

/// Decides whether an even lattice with signature `sig` and discriminant
/// form `q` embeds primitively into the even unimodular lattice of
/// signature `target`.
///
/// Condition (4) is excluded when `q₂ ≅ ⟨θ/2⟩ ⊕ q₂'`, read as: `q₂` splits
/// off an orthogonal `Z/2` with value `±1/2`.
pub fn nikulin_embedding_exists(
    sig: Signature,
    q: &FiniteQuadraticForm,
    target: Signature,
) -> Result<EmbeddingVerdict> {
    let (lp, lm) = (target.plus as i64, target.minus as i64);
    let (tp, tm) = (sig.plus as i64, sig.minus as i64);
    let mut notes = Vec::new();
    let slack = lp + lm - tp - tm;
    let size = q.size();

    let c1 = (lp - lm).rem_euclid(8) == 0;
    notes.push(format!("(1) l+ - l- = {} (mod 8 = {})", lp - lm, (lp - lm).rem_euclid(8)));

    let l = q.length() as i64;
    let c2 = lm >= tm && lp >= tp && slack >= l;
    notes.push(format!("(2) l- - t- = {}, l+ - t+ = {}, slack {} vs l(D) = {}", lm - tm, lp - tp, slack, l));

    let mut c3_triggered = false;
    let mut c3_holds = true;
    for p in q.primes().into_iter().filter(|&p| p != 2) {
        if slack != q.length_p(p) as i64 {
            continue;
        }
        c3_triggered = true;
        let mut d = Int::from(size);
        if (lp - tp).rem_euclid(2) == 1 {
            d = -d;
        }
        let lhs = PadicDetClass::of_integer(&d, p);
        let k = kq_det(q, p)?;
        let ok = lhs.same_up_to_sign(k);
        notes.push(format!("(3) p = {p}: (-1)^(l+-t+)|D| = {lhs}, |K(q_p)| = {k}, holds = {ok}"));
        c3_holds &= ok;
    }

    let q2 = q.p_part(2);
    let rank_equal = slack == q.length_p(2) as i64;
    let mut c4_triggered = false;
    let mut c4_holds = true;
    if rank_equal {
        if has_odd_order2_summand(&q2)? {
            notes.push("(4) vacuous: q_2 splits off Z/2 with q = ±1/2".into());
        } else {
            c4_triggered = true;
            let lhs = PadicDetClass::of_integer(&Int::from(size), 2);
            let k = kq_det(&q2, 2)?;
            c4_holds = lhs.same_up_to_sign(k);
            notes.push(format!("(4) |D| = {lhs}, |K(q_2)| = {k}, holds = {c4_holds}"));
        }
    }

    let conditions = vec![
        ConditionTrace { id: 1, triggered: true, holds: c1 },
        ConditionTrace { id: 2, triggered: true, holds: c2 },
        ConditionTrace { id: 3, triggered: c3_triggered, holds: c3_holds },
        ConditionTrace { id: 4, triggered: c4_triggered, holds: c4_holds },
    ];
    let embeds = conditions.iter().all(|c| c.holds);
    Ok(EmbeddingVerdict { embeds, conditions, notes })
}

/// Lengths entering the inequality `l(D) - 2 l(H) ≤ l(H^⊥/H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub l_d: usize,
    pub l_h: usize,
    pub l_quotient: usize,
    pub holds: bool,
}

pub fn technical_lemma_check(q: &FiniteQuadraticForm, h: &Subgroup) -> Result<LemmaReport> {
    if !h.is_isotropic(q) {
        return Err(Error::NotIsotropic);
    }
    let perp = h.orthogonal(q)?;
    let (quotient, _) = q.subquotient(perp.generators(), h.generators());
    let (l_d, l_h, l_quotient) = (q.length(), h.length(), quotient.length());
    Ok(LemmaReport { l_d, l_h, l_quotient, holds: l_d as i64 - 2 * l_h as i64 <= l_quotient as i64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn row_one_glue_embeds_with_vacuous_fourth_condition() {
        let q = FiniteQuadraticForm::cyclic(2, Rational64::new(3, 2))
            .unwrap()
            .direct_sum(&FiniteQuadraticForm::u(1).power(4));
        let v = nikulin_embedding_exists(Signature::new(2, 11), &q, Signature::new(3, 19)).unwrap();
        assert!(v.embeds);
        assert!(!v.condition(4).triggered);
        assert!(v.notes.iter().any(|n| n.contains("vacuous")));
    }

    #[test]
    fn bad_target_fails_first_condition() {
        let v = nikulin_embedding_exists(Signature::new(0, 1), &FiniteQuadraticForm::trivial(), Signature::new(3, 18))
            .unwrap();
        assert!(!v.embeds);
        assert!(!v.condition(1).holds);
    }

    #[test]
    fn e8_minus_two_has_room() {
        let q = FiniteQuadraticForm::u(1).power(4);
        let v = nikulin_embedding_exists(Signature::new(0, 8), &q, Signature::new(3, 19)).unwrap();
        assert!(v.embeds);
        assert!(!v.condition(3).triggered && !v.condition(4).triggered);
    }

    #[test]
    fn lemma_on_u2() {
        let u = FiniteQuadraticForm::u(1);
        let h = Subgroup::generated(&u, &[vec![1, 0]]).unwrap();
        let r = technical_lemma_check(&u, &h).unwrap();
        assert_eq!((r.l_d, r.l_h, r.l_quotient, r.holds), (2, 1, 0, true));
        let h0 = Subgroup::trivial(&u).unwrap();
        assert!(technical_lemma_check(&u, &h0).unwrap().holds);
    }
}
