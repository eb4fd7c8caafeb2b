//! Sublattices `2T_A ⊆ T_U ⊆ T_A` attached to subspaces of `T_A/2T_A`, the
//! arithmetic embedding condition, and identification against the table.

mod catalog;

use serde::Serialize;

pub use catalog::{block_gram, Block, CatalogRow, PrintedForm, RowSelfCheck, TableCatalog, N_GRAM};

use crate::arith::{int, rat_int, Int};
use crate::discform::{
    discriminant_form, form_embedding, form_iso, glue, has_odd_order2_summand, kq_det, nikulin_embedding_exists,
    DiscriminantGroup, EmbeddingVerdict, FiniteQuadraticForm, PadicDetClass,
};
use crate::error::{Error, Result};
use crate::f2space::{enumerate_subspaces, orbits, orthogonal_group, F2Subspace, Orbit, DIM};
use crate::lattice::{determinant, lattice_from_generators, signature, Lattice, QuadSpace, Signature};
use crate::matrix::RatMat;
use crate::report::Discrepancy;

/// Gram matrix of `T_A = U ⊕ U ⊕ ⟨-2⟩`.
pub const T_A_GRAM: [[i64; 5]; 5] =
    [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, -2]];

pub fn t_a_space() -> QuadSpace {
    let g: Vec<Vec<i64>> = T_A_GRAM.iter().map(|r| r.to_vec()).collect();
    QuadSpace::from_int(&g).expect("T_A is nondegenerate")
}

pub fn t_a() -> Lattice {
    Lattice::from_gram(&T_A_GRAM.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("T_A is even")
}

/// `T_U`, generated by `2T_A` and the 0/1 lifts of a basis of `U`.
pub fn sublattice_from_subspace(u: &F2Subspace) -> Lattice {
    let lifts: Vec<Vec<Int>> = u.basis().iter().map(|v| v.coords().iter().map(|&c| int(c as i64)).collect()).collect();
    sublattice_from_lifts(&lifts).expect("0/1 lifts generate an even sublattice")
}

/// `T_U` from arbitrary integral lifts of a spanning set of `U`.
pub fn sublattice_from_lifts(lifts: &[Vec<Int>]) -> Result<Lattice> {
    let mut gens: RatMat =
        (0..DIM).map(|i| (0..DIM).map(|j| rat_int(&int(if i == j { 2 } else { 0 }))).collect()).collect();
    for l in lifts {
        if l.len() != DIM {
            return Err(Error::Dimension { expected: DIM, found: l.len() });
        }
        gens.push(l.iter().map(rat_int).collect());
    }
    lattice_from_generators(&t_a_space(), &gens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Vacuous,
    Fail,
}

impl std::fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Vacuous => "vacuous",
            ConditionStatus::Fail => "fail",
        })
    }
}

/// Trace of the arithmetic condition `|D| ≡ ±|K(q₂)|`, required when
/// `α = (rank + l(D₂))/2 - 3` unless `q₂ ⊕ u(2)^{4-α}` splits off `⟨θ/2⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition3Trace {
    pub alpha: usize,
    pub rank: usize,
    pub l2: usize,
    pub triggered: bool,
    pub excluded: bool,
    /// `(|D| class, K(q₂) class)` when compared.
    pub classes: Option<(String, String)>,
    pub status: ConditionStatus,
}

pub fn condition3_check(t: &Lattice, alpha: usize) -> Result<Condition3Trace> {
    let rank = t.rank();
    let q = discriminant_form(t)?;
    let q2 = q.p_part(2);
    let l2 = q2.length();
    let triggered = 2 * alpha + 6 == rank + l2;
    let mut trace = Condition3Trace {
        alpha,
        rank,
        l2,
        triggered,
        excluded: false,
        classes: None,
        status: ConditionStatus::Vacuous,
    };
    if !triggered {
        return Ok(trace);
    }
    let padded = q2.direct_sum(&FiniteQuadraticForm::u(1).power(4usize.saturating_sub(alpha)));
    if has_odd_order2_summand(&padded)? {
        trace.excluded = true;
        return Ok(trace);
    }
    let lhs = PadicDetClass::of_integer(&Int::from(q.size()), 2);
    let k = kq_det(&q2, 2)?;
    trace.classes = Some((lhs.to_string(), k.to_string()));
    trace.status = if lhs.same_up_to_sign(k) { ConditionStatus::Pass } else { ConditionStatus::Fail };
    Ok(trace)
}

/// The catalog row with equal rank, signature and isomorphic discriminant form.
pub fn match_row(t: &Lattice, catalog: &TableCatalog) -> Result<Option<usize>> {
    let q = discriminant_form(t)?;
    let sig = signature(t);
    let mut hits = Vec::new();
    for row in catalog.rows() {
        if row.lattice.rank() == t.rank() && row.signature == sig && form_iso(&q, &row.computed)?.is_some() {
            hits.push(row.id);
        }
    }
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(Error::AmbiguousMatch(hits)),
    }
}

#[derive(Clone, Debug)]
pub struct ClassRow {
    pub orbit: Orbit,
    pub lattice: Lattice,
    pub disc: FiniteQuadraticForm,
    pub matched_row: Option<usize>,
    pub condition3: Condition3Trace,
}

impl ClassRow {
    pub fn rep(&self) -> &F2Subspace {
        &self.orbit.rep
    }

    pub fn size(&self) -> usize {
        self.orbit.size
    }

    pub fn alpha(&self) -> usize {
        self.orbit.alpha()
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub rows: Vec<ClassRow>,
    pub subspace_count: usize,
    pub group_order: usize,
    pub total: usize,
    pub catalog_checks: Vec<RowSelfCheck>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Classification {
    /// Discrepancies other than printed-form divergences of the catalog.
    pub fn structural_discrepancies(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| !d.id.ends_with("-q-sign"))
    }
}

pub const EXPECTED_ORBITS: usize = 17;
pub const EXPECTED_TOTAL: usize = 373;

/// Orbits, sublattices, condition (3) and table matching, with every
/// deviation from the table recorded as a discrepancy.
pub fn classify(catalog: &TableCatalog) -> Result<Classification> {
    let subspaces = enumerate_subspaces();
    let group = orthogonal_group();
    let orbit_list = orbits(&subspaces, &group);
    let (catalog_checks, mut discrepancies) = catalog.self_check()?;
    let mut rows = Vec::new();
    for orbit in orbit_list {
        let lattice = sublattice_from_subspace(&orbit.rep);
        let disc = discriminant_form(&lattice)?;
        let condition3 = condition3_check(&lattice, orbit.alpha())?;
        let matched_row = match_row(&lattice, catalog)?;
        rows.push(ClassRow { orbit, lattice, disc, matched_row, condition3 });
    }
    rows.sort_by_key(|r| (r.matched_row.unwrap_or(usize::MAX), r.orbit.rep.clone()));

    let total: usize = rows.iter().map(ClassRow::size).sum();
    if rows.len() != EXPECTED_ORBITS || total != EXPECTED_TOTAL {
        discrepancies.push(Discrepancy::new(
            "orbit-count",
            format!("{EXPECTED_ORBITS} orbits, {EXPECTED_TOTAL} surfaces"),
            format!("{} orbits, {total} surfaces", rows.len()),
        ));
    }
    for r in &rows {
        match r.matched_row {
            None => discrepancies.push(Discrepancy::new(
                "unmatched-orbit",
                "every orbit has a table row",
                format!("orbit of {} (size {}) has D = {}", r.orbit.rep, r.size(), r.disc.describe()),
            )),
            Some(id) if catalog.row(id).size != r.size() => discrepancies.push(Discrepancy::new(
                &format!("row{id}-size"),
                catalog.row(id).size.to_string(),
                r.size().to_string(),
            )),
            Some(_) => {}
        }
        if r.condition3.status == ConditionStatus::Fail {
            discrepancies.push(Discrepancy::new(
                "condition3-fails",
                "every subspace satisfies condition (3)",
                format!("orbit of {} fails", r.orbit.rep),
            ));
        }
    }
    let mut matched: Vec<usize> = rows.iter().filter_map(|r| r.matched_row).collect();
    matched.sort_unstable();
    matched.dedup();
    if matched.len() != catalog.rows().len() {
        discrepancies.push(Discrepancy::new(
            "row-coverage",
            "each table row matched by exactly one orbit",
            format!("{} distinct rows matched", matched.len()),
        ));
    }
    Ok(Classification {
        rows,
        subspace_count: subspaces.len(),
        group_order: group.order(),
        total,
        catalog_checks,
        discrepancies,
    })
}

/// Gram matrix of `E₈(-1)` with `e₁…e₇` along the long arm and `e₈`
/// attached to `e₃`.
pub fn e8_gram(scale: i64) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2 * scale;
    }
    for (i, j) in E8_EDGES {
        g[i][j] = scale;
        g[j][i] = scale;
    }
    g
}

pub const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];

/// Result of gluing `T_U` to `E₈(-2)` along `T_A/T_U`.
#[derive(Clone, Debug)]
pub struct GlueReport {
    pub glued: Lattice,
    pub signature: Signature,
    pub det: Int,
    pub form: FiniteQuadraticForm,
    /// `D_M ≅ q_{T_U} ⊕ u(2)^{4-α}`.
    pub form_matches: bool,
    pub verdict: EmbeddingVerdict,
}

/// Glues `T_U` and `S = E₈(-2)` along an embedding of `H = T_A/T_U` into
/// `(D_S, -q_S)` and runs the embedding criterion into signature (3,19).
pub fn glue_with_e8(t_u: &Lattice, alpha: usize) -> Result<GlueReport> {
    let s = Lattice::from_gram(&e8_gram(2))?;
    let dt = DiscriminantGroup::new(t_u)?;
    let ds = DiscriminantGroup::new(&s)?;
    let t_a_basis: RatMat = (0..DIM).map(|i| (0..DIM).map(|j| rat_int(&int((i == j) as i64))).collect()).collect();
    let h = dt.subgroup_of(&t_a_basis)?;
    if h.size() != 1 << alpha {
        return Err(Error::NotEmbedding(format!("T_A/T_U has order {} instead of 2^{alpha}", h.size())));
    }
    let target = ds.form().negated();
    let xi = form_embedding(&h.form(dt.form()), &target)?
        .ok_or_else(|| Error::NotEmbedding("H does not embed into (D_S, -q_S)".into()))?;
    let glued = glue(&dt, &ds, &h, &xi.images)?;
    let form = discriminant_form(&glued)?;
    let expected = dt.form().direct_sum(&FiniteQuadraticForm::u(1).power(4 - alpha));
    let form_matches = form_iso(&form, &expected)?.is_some();
    let sig = signature(&glued);
    let verdict = nikulin_embedding_exists(sig, &form, Signature::new(3, 19))?;
    Ok(GlueReport { det: determinant(&glued), glued, signature: sig, form, form_matches, verdict })
}
