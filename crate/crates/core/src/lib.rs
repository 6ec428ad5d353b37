//! Categorical rewriting systems over finite graphs and termgraphs.
//!
//! A rewriting system pairs a span of categories (rules in the middle,
//! matches on either side) with a partial rewriting-process function per
//! rule. This crate provides concrete systems for pushout, single-pushout,
//! double-pushout, sesqui-pushout, heterogeneous-pushout and
//! garbage-removal rewriting, together with functoriality checkers and
//! brute-force oracles for the universal properties involved.

pub mod cli;
pub mod dot;
pub mod dpo;
pub mod error;
pub mod gc;
pub mod graph;
pub mod homs;
pub mod hpo;
pub mod io;
pub mod morphism;
pub mod oracle;
pub mod ops;
pub mod pushout;
pub mod sample;
pub mod span;
pub mod spo;
pub mod sqpo;
pub mod system;
pub mod termgraph;

pub use error::{Result, RewriteError};
pub use graph::{Edge, EdgeId, Graph, NodeId, PartialGraph};
pub use morphism::{Inclusion, PartialMorphism, TotalMorphism};
