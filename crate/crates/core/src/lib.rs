//! Finite-model workbench for bi-Gödel algebras and bi-intuitionistic
//! Gödel-Dummett logic: finite posets and co-trees, bi-Heyting algebras and
//! their finite duality, a bi-intuitionistic formula language, characteristic
//! (stable canonical / Jankov / subframe) formulas, morphism searches, and
//! bi-bisimulation machinery, each backed by brute-force verification suites.
//!
//! All structures are immutable after construction and safe to share across
//! threads; every search and sweep is deterministic for a fixed seed.

pub mod algebra;
pub mod bisim;
pub mod charform;
pub mod cli;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod io;
pub mod morphism;
pub mod poset;
pub mod semantics;
pub mod verify;

pub use error::{Error, Result};
