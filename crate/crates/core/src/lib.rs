//! # photon-pie
//!
//! Mutual information and photon information efficiency (PIE) of optical
//! receivers operating on coherent-state constellations.
//!
//! The crate has two layers that check each other:
//!
//! - **Exact receiver models** ([`receivers`]): closed-form or
//!   quadrature-exact mutual information for the Helstrom measurement,
//!   shot-noise-limited homodyne detection of a BPSK alphabet, the
//!   Shannon–Hartley quadrature benchmark, and collective two- and
//!   three-symbol schemes built from a linear optical circuit, one homodyne
//!   port and single-photon detectors (optionally displaced).
//! - **Low-cost asymptotics** ([`lowcost`]): a generic expansion engine that
//!   takes a second-order power-series model of the input states together
//!   with a POVM and produces the leading-order mutual information
//!   coefficient per unit cost squared, split into contributions from
//!   outcomes that do or do not respond to the zero-cost state, plus an
//!   upper bound derived from symmetric logarithmic derivatives.
//!
//! The [`oracle`] module provides brute-force mutual information from
//! explicit joint distributions and Born-rule probabilities in a truncated
//! Fock basis, used to validate the asymptotic engine at small but finite
//! cost. [`optimize`] hosts the scalar searches (input probabilities,
//! displacement, superadditivity threshold) and the Hadamard-word strategy
//! table. [`constellation`] defines the input ensembles.
//!
//! All information quantities are in nats. Cost is parameterized by a global
//! amplitude scale `zeta`; the mean photon number per symbol scales as
//! `zeta^2`.
//!
//! Core numerics are generic over the floating-point scalar via
//! [`Real`](scalar::Real); `f64` aliases for the main types are exported at
//! the crate root.
//!
//! ## Quick example
//!
//! ```rust
//! use photon_pie::receivers::{helstrom_mi, shannon_hartley};
//!
//! let nbar = 1e-4_f64;
//! let pie = helstrom_mi(nbar) / nbar;
//! assert!((pie - 2.0).abs() < 1e-3);
//! assert!(helstrom_mi(nbar) > shannon_hartley(nbar, 0.0));
//! ```

#![forbid(unsafe_code)]

pub mod constellation;
pub mod error;
pub mod linalg;
pub mod lowcost;
pub mod optimize;
pub mod oracle;
pub mod quad;
pub mod receivers;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases for the main domain types.
pub type CoherentEnsemble64 = constellation::CoherentEnsemble<f64>;
pub type WordEnsemble64 = constellation::WordEnsemble<f64>;
pub type Povm64 = lowcost::Povm<f64>;
pub type StateExpansion64 = lowcost::StateExpansion<f64>;
pub type ExpansionReport64 = lowcost::ExpansionReport<f64>;
pub type HybridChannel64 = receivers::HybridChannel<f64>;
pub type LinearCircuit64 = receivers::LinearCircuit<f64>;
pub type JointDistribution64 = oracle::JointDistribution<f64>;
pub type CMatrix64 = linalg::CMatrix<f64>;
