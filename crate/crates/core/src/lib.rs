//! Grounded truth predicate over a fully interpreted object language.
//!
//! [`syntax`] defines sentences, their text form and their numbering;
//! [`object`] supplies the object language; [`engine`] computes the stage
//! sets and their least fixed point and evaluates sentences on demand;
//! [`norms`] checks the truth rules against the engine.

pub mod engine;
pub mod norms;
pub mod object;
pub mod syntax;
