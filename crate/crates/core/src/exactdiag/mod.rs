//! Brute-force engine on the full `2^M` Hilbert space. Works for every
//! coupling pattern, including the interacting XXZ chain, and doubles as
//! the reference for the free-fermion engine.

mod channel;
mod evolve;
mod ground;
mod operator;
mod state;

pub use channel::{
    ancilla_pair_state, channel_choi, pair_state, reduced_pair, EdChannel, EdOptions, EvolutionMode,
};
pub use evolve::{krylov_evolve, Evolver, Trajectory, DENSE_EVOLUTION_DIM, KRYLOV_TOL};
pub use ground::{ground_state, lanczos_ground, GroundState, Sector, DEGENERACY_TOL, DENSE_SECTOR_DIM};
pub use operator::{
    build_hamiltonian, build_hamiltonian_with, parity_sign, up_count, ManyBodyOperator, DEFAULT_SITE_CAP,
};
pub use state::{reduced_qubit, StateVector, NORM_TOL};
