//! Spin-1/2 chains as quantum data buses.
//!
//! A qubit attached at site 0 of an open chain of `N` spins is carried to
//! site `N` by the chain dynamics. This crate computes the resulting
//! single-qubit channel and its figures of merit (optimal average fidelity
//! and transmitted concurrence) for
//!
//! * XY chains in a transverse field, exactly, through their free-fermion
//!   representation ([`freefermion`]), at any length;
//! * arbitrary XY/XXZ chains by brute-force exact diagonalization
//!   ([`exactdiag`]), which also serves as the oracle for the free-fermion
//!   engine at small sizes.
//!
//! [`experiment`] drives parameter sweeps and scaling studies on top of
//! either engine.

pub mod error;
pub mod exactdiag;
pub mod experiment;
pub mod freefermion;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod output;
pub mod par;
pub mod states;

pub use error::{Error, ErrorClass, Result};
pub use metrics::{ChoiMatrix, MMatrix};
pub use model::{BlochVector, ChainConfig, ChainSpec, Couplings, InitialState, ModelKind};
pub use par::Execution;
