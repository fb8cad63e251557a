//! Symbolic graded Dirac structures of order `n` on coordinate charts.
//!
//! Layers, bottom up: [`scalar`] (exact rational functions), [`exterior`] and
//! [`chart`] (forms, multivectors and their calculus), [`linsolve`], [`dirac`]
//! (towers, sharp maps, brackets, morphisms), [`extensions`], [`dynamics`]
//! and [`scenarios`]. [`parse`] and [`cli`] provide the text interface.

pub mod chart;
pub mod cli;
pub mod dirac;
pub mod dynamics;
pub mod error;
pub mod exterior;
pub mod extensions;
pub mod linsolve;
pub mod maps;
pub mod parse;
pub mod render;
pub mod report;
pub mod sampler;
pub mod scenarios;
pub mod scalar;
pub mod span;
pub mod structure_file;

pub use chart::Chart;
pub use error::{Error, Result};
pub use exterior::{contract, Form, Idx, MultiVector, MvForm};
pub use scalar::Scalar;
