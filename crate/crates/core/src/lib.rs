//! Maneuver geometry of the flying saucer.
//!
//! The configuration space `ℝ³ × S²` of a rigid disc carries a contact
//! distribution; three further reductions of its structure group give the
//! attacking (Legendrean), landing (CR) and G₂ maneuver rules. This crate
//! implements those structures numerically together with the machinery that
//! checks them: an exact forward-mode forms engine, the GL(2,ℝ) calculus on
//! `ℝ⁴`, symmetry catalogs and their Lie-algebra diagnostics, the G₂ double
//! fibration pipeline and a bracket-generating path planner.

pub mod chart;
pub mod forms;
pub mod jet;
pub mod linalg;
pub mod ode;
pub mod par;
pub mod gl2;
pub mod maneuvers;
pub mod sampling;
pub mod tol;
pub mod structure;
pub mod symmetry;
pub mod fibration;
pub mod planner;
pub mod report;
pub mod suites;
