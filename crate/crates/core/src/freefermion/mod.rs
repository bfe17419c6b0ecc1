//! Exact solution of XY chains through the Jordan–Wigner map: the chain is
//! a quadratic fermion problem, diagonalized by a Bogoliubov transformation
//! obtained from one real SVD.

mod channel;
mod diag;
mod propagator;
mod quadratic;
pub mod special;
mod xx;

pub use channel::{
    bloch_map, choi_xy, choi_xy_matrix, concurrence_xy, interference, oaf_xy, optimal_rotation_xy, snapshot,
    wrap_phase, ChannelSnapshot, FreeFermionChannel, A_IMAG_TOL,
};
pub use diag::{diagonalize, FermionDiag};
pub use propagator::{propagate, propagate_row, Propagator, PropagatorRow};
pub use quadratic::{build_quadratic, QuadraticForm};
pub use xx::{xx_airy_u, xx_asymptotic_u, xx_exact_modes, xx_peak_estimate, XI_OPT};
