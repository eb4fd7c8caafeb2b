//! Finite quadratic forms: discriminant forms of even lattices, their
//! subgroups, isomorphisms, p-adic determinant classes and the primitive
//! embedding criterion.

mod group;
mod iso;
mod lattice_link;
mod nikulin;
mod padic;
mod subgroup;

pub use group::{Element, FiniteQuadraticForm};
pub use iso::{form_embedding, form_iso, FormMap};
pub use lattice_link::{discriminant_form, glue, overlattice, DiscriminantGroup};
pub use nikulin::{
    nikulin_embedding_exists, technical_lemma_check, ConditionTrace, EmbeddingVerdict, LemmaReport,
};
pub use padic::{has_odd_order2_summand, kq_det, PadicDetClass};
pub use subgroup::{isotropic_subgroups, Subgroup};

/// Largest group handled by exhaustive element searches.
pub const ELEMENT_LIMIT: u64 = 1 << 16;
