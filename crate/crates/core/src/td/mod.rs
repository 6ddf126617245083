//! Tridiagonal systems of q-Racah type: parameters, construction from a parameter array,
//! recovery of the parameter array, and verification of the structural claims.

mod array;
mod axioms;
mod params;
mod realization;
mod structure;

pub use array::{condition_ii, ConditionIICertificate, ParameterArray};
pub use axioms::{verify_td_axioms, AxiomReport, Irreducibility};
pub use params::{
    check_distinct, derived_constants, eigen_sequences, fit_qracah, q_from_sequences, DerivedConstants, QRacahParams,
};
pub use realization::{
    construct_realization, construct_realization_traced, irreducibility_certificate, parameter_array_of, shape_check,
    BuildOptions, ConstructionTrace, IrreducibilityCertificate, ShapeVerdict, TDRealization,
};
pub use structure::{build_a_astar, verify_module_structure, verify_recurrences, verify_tridiagonal_relations};
