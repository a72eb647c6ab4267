//! Finite-scale constructions around models of NFU.
#![allow(clippy::needless_range_loop)]

pub mod amodels;
pub mod cli;
pub mod formulae;
pub mod qmodel;
pub mod ramsey;
pub mod setcode;
pub mod termmodel;
