//! Energy-based Lie-algebra canonicalization for non-compact PDE symmetry groups.
//!
//! The crate provides exact arithmetic for the symmetry groups of the heat and viscous
//! Burgers equations and for the rigid motions used with the Allen–Cahn equation, their
//! actions on jet points and on discretized fields, domain-distance energies, three descent
//! algorithms over Lie-algebra coefficients, classical reference solvers and the
//! canonicalize → solve → decanonicalize pipeline.
//!
//! Conventions shared by every module:
//!
//! * Group products are left actions: `act(g1 · g2, p) = act(g1, act(g2, p))`.
//! * `exp_train(a) = exp(a_n v_n) · … · exp(a_1 v_1)`, so the flow of `v_1` acts first.
//! * A canonicalization returns `g_inv` with `canonical = g_inv · x` and `g = g_inv⁻¹`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod fields;
pub mod fourier;
pub mod jet;
pub mod lie;
pub mod optim;
pub mod pipeline;
pub mod solvers;
pub mod toy2d;

pub use error::{Error, Result};
