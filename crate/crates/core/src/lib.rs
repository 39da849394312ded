//! Acquisition of STRIPS action models from execution traces.

pub mod domains;
pub mod extraction;
pub mod model;
pub mod observation;
pub mod pddl;
pub mod recommender;
pub mod trace;
pub mod tracegen;

pub use model::LearnedModel;
