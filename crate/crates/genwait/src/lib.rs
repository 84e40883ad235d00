//! Exact and simulated waiting times for random generation of finite groups.
//!
//! Given a nontrivial finite group G, let τ be the number of uniformly random
//! elements drawn with replacement until the drawn set generates G, and e(G)
//! its expectation. This crate computes e(G) exactly for small groups by
//! mutually checking routes (subgroup-lattice Möbius sums, chief-factor
//! products for soluble groups, and Monte Carlo simulation), and evaluates the
//! universal bound constants attached to d-generated Sylow subgroups to high
//! precision from Riemann zeta products, with rigorous error bounds.

pub mod bounded;
pub mod bounds;
pub mod chief;
pub mod corpus;
pub mod error;
pub mod groupspec;
pub mod lattice;
pub mod montecarlo;
pub mod oracle;
pub mod perm;
pub mod series;
pub mod waiting;

pub use error::{Error, Result};
pub use perm::{FiniteGroup, Permutation};
