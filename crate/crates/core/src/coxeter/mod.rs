//! Coxeter systems: presentation data, classification, the geometric representation
//! and Cayley-graph enumeration.

pub mod classify;
pub mod element;
pub mod enumerate;
pub mod field;
pub mod matrix;
pub mod subset;
pub mod systems;

pub use classify::{
    class_index, classify_parabolic, diagram_components, generator_conjugacy_classes, is_affine_system,
    is_spherical, maximal_spherical_subsets, spherical_subsets, Component, ComponentClass, ParabolicKind,
    ParabolicType,
};
pub use element::{Backend, GroupElement, Representation};
pub use enumerate::{
    ball_enumerate, ball_enumerate_parabolic, length_profile, length_profile_grouped, length_profile_parabolic, BallEnumeration,
    EnumeratedElement, LengthProfile, Limits,
};
pub use field::{AlgebraicReal, NumberField};
pub use matrix::{parse_coxeter_matrix, CoxeterMatrix, Order};
pub use subset::GenSet;
