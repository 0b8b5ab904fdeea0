//! Heegaard Floer homology `HF^+` of 3-manifolds bounding
//! negative-definite plumbing trees, computed combinatorially, together
//! with the contact invariant of a Stein structure, the planar open
//! book obstruction, and the sigma invariant.
//!
//! The pipeline: parse a weighted tree, build its exact intersection
//! form, enumerate the characteristic covectors admitting good full
//! paths (the `Ker U` generators), close the `U^m ⊗ K` equivalence into
//! finite models of `Ker U^{N+1}`, and read off correction terms, the
//! tower/reduced decomposition, and relations between generators. All
//! arithmetic is exact.

pub mod contact;
pub mod error;
pub mod fixtures;
pub mod gf2;
pub mod graph;
pub mod lattice;
pub mod paths;
pub mod report;
pub mod umodel;

pub use contact::{
    chern_from_rotations, locate_invariant, planar_obstruction, sigma, LocatedInvariant,
    PlanarCheck, PlanarReason, PlanarVerdict, Sigma, SteinData,
};
pub use error::{Error, Result};
pub use graph::{
    intersection_form, validate, IntersectionForm, PlumbingGraph, Support, ValidationReport,
};
pub use lattice::{
    add_2pd, degree, enumerate_b_n, enumerate_initial, initial_candidate_count, is_initial,
    partition_spinc, same_spinc, square, CharVector, SpinCClass,
};
pub use paths::{
    correction_term, good_vectors, run_full_path, FullPath, GoodVectorSet, Tiebreak, Verdict,
    DEFAULT_STEP_BUDGET,
};
pub use report::{family_report, Analyzer};
pub use umodel::{
    assemble_hfplus, build_model, find_relations, move_targets, root_vectors, Chain, FiniteModel,
    HFPlusModule, ModelCache, ModelClass, ReducedSummand, Relation, RelationSearch, RootSet,
    UElement, DEFAULT_BRANCH_BUDGET,
};
