//! Cones, fans, refinements and lexicographic point location.

pub mod cone;
#[allow(clippy::module_inception)]
pub mod fan;
pub mod lex;

pub use cone::{cone_from_generators, Cone, PolyCone};
pub use fan::{
    common_refinement, is_fan, orthant_fan, refine, stellar_subdivision, support_contains, support_predicates, Fan,
    FanCheck, FanViolation, Refinement, SupportRelation,
};
pub use lex::{locate_lex, LexPoint};
