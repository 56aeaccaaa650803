//! Subgroup presentations of finitely presented groups.
//!
//! The pipeline: enumerate the cosets of a finite-index subgroup
//! ([`todd_coxeter`]), pick coset representatives ([`SchreierTransversal`]),
//! rewrite conjugated relators into subgroup generators
//! ([`subgroup_presentation`]), then clean up the result
//! ([`tietze::simplify`]) and compare it with a conjectured answer
//! ([`presentations_match`]).
//!
//! On top of that sit labelled-graph groups ([`graph`]), a catalog of
//! worked subgroup computations ([`catalog`]), membership-problem
//! classification ([`classify`]), and word-problem solvers ([`wordprob`]).

pub mod catalog;
pub mod classify;
pub mod coset;
pub mod graph;
pub mod matcher;
pub mod par;
pub mod parse;
pub mod present;
pub mod rewrite;
pub mod snf;
pub mod tietze;
pub mod wordprob;
pub mod words;

pub use catalog::{
    build_family, recipe, standard_grid, verify, verify_all, verify_recipe, BasisChange,
    CatalogError, Family, FamilySpec, RecipeId, SubgroupRecipe, VerificationReport,
    VerifyOptions,
};
pub use classify::{classify_membership, Certificate, ClassificationReport, Verdict};
pub use coset::{schreier_transversal, todd_coxeter, validate_transversal, CosetError, CosetTable, SchreierTransversal};
pub use matcher::{presentations_match, MatchReport};
pub use present::{AbelianInvariants, Presentation};
pub use rewrite::{
    rewrite_tau, schreier_generators, subgroup_presentation, RewriteError, RewriteOptions,
    SchreierGen, SchreierGens, SubgroupPresentation,
};
pub use wordprob::{monoid_words_equal, raag_is_identity, MonoidOptions, WordProblemError};
pub use words::{Alphabet, GeneratorId, Word};
