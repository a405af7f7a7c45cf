//! Equivariant function spaces, tangent-space transversality of the Clifford
//! tori, and the second-order analysis at the Legendre character.

mod equivariant;
pub mod hessian;
mod transversality;

pub use equivariant::{EquivariantSpace, SubgroupChar};
pub use hessian::{
    certify_anisotropy, differential_at_zero, hessian_q, perturbation_split, AnisotropyCertificate, LadderRow,
    PerturbationReport, W0,
};
pub use transversality::{
    all_character_instances, alpha_discrepancy, classify_setup, criterion_offenders, criterion_transversal_at,
    excluded_configuration, family_reports, numeric_transversal_at, tangent_intersection, transversality_at_character,
    Setup, TransversalityReport, RANK_TOL,
};
