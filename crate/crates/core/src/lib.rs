//! Homology triplets of pure free squarefree complexes and the numerical data
//! attached to them.

pub mod betti;
pub mod cli;
pub mod degree_set;
pub mod hilbert;
pub mod json;
pub mod linalg;
pub mod squarefree;
pub mod supernatural;
pub mod table;
pub mod triplet;

pub use betti::{BettiDiagram, BettiEntry};
pub use degree_set::{is_balanced, reflect, strands, DegreeSet, SetError, StrandDecomposition};
pub use triplet::{
    diagnose_triplet, dual, enumerate_triplets, enumerate_triplets_bounded, rotate, to_degree_triplet,
    validate_triplet, HomologyTriplet, TripletError, TripletRecord,
};
pub use hilbert::{
    betti, build_equations, chi_family, dual_alpha, solve_alpha, AlphaVector, ChiFamily, EquationSystem, SolveError,
};
pub use table::{
    corner_table, full_table, tate_terms, zip_complex, zip_terms, Cohomology, FnCohomology, HyperTable, TableError, ZipTerm,
};
pub use squarefree::{
    homological_data, hsq_from_series, hsq_of_reduction, hsq_series, rotated_betti_via_strands, sheaf_class_decompose,
    triplet_betti, HomologicalData, HsqVector, SquarefreeError,
};
pub use supernatural::{
    buchsbaum_rim, eagon_northcott, pure_zip, schur_roots, supernatural_poly, supernatural_table, tensor_roots,
    PureComplexReport, RootSequence, SupernaturalError,
};
