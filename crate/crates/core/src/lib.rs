//! S-adic subshifts built from ordered Bratteli diagrams, with finite-depth
//! verification of their asymptotic structure.

pub mod analysis;
pub mod bratteli;
pub mod cli;
pub mod constructions;
pub mod demos;
pub mod directive;
pub mod matrix;
pub mod words;
