use std::f64::consts::PI;

use super::diag::{diagonalize, FermionDiag};
use super::propagator::{propagate, propagate_row, Propagator, PropagatorRow};
use super::quadratic::build_quadratic;
use crate::error::{Error, Result};
use crate::linalg::{su2_rotation, Mat2, Mat4, C64};
use crate::metrics::ChoiMatrix;
use crate::model::{BlochVector, ChainSpec, InitialState};
use crate::states::{self, CorrelatorSet, ParityTag};

/// Largest imaginary part of `A(t)` silently discarded.
pub const A_IMAG_TOL: f64 = 1e-8;

/// The five channel parameters at one time, plus the channel parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSnapshot {
    pub t: f64,
    pub u: f64,
    pub w: f64,
    pub phi_u: f64,
    pub phi_w: f64,
    pub a: f64,
    pub parity: u8,
}

/// Wrap an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// `A(t) = ⟨c†_N(t) c_N(t)⟩` restricted to channel operators, from the
/// receiving-site row of the propagator. Channel site `j` is column `j` of
/// the row and index `j − 1` of the correlators.
pub fn interference(row: &PropagatorRow, corr: &CorrelatorSet) -> Result<f64> {
    let n = corr.n();
    if row.u.len() != n + 1 {
        return Err(Error::InvalidSpec(format!("propagator row of length {} for {n} channel sites", row.u.len())));
    }
    let mut acc = C64::from(0.0);
    for j in 0..n {
        let (uj, wj) = (row.u[j + 1].conj(), row.w[j + 1].conj());
        for l in 0..n {
            let (ul, wl) = (row.u[l + 1], row.w[l + 1]);
            acc += uj * ul * corr.cdag[(j, l)]
                + wj * wl * corr.cexc[(j, l)]
                + uj * wl * corr.fdag[(j, l)]
                + wj * ul * corr.fann[(j, l)];
        }
    }
    if acc.im.abs() > A_IMAG_TOL {
        return Err(Error::ImaginaryResidual(acc.im));
    }
    Ok(acc.re)
}

/// Channel parameters from the receiving-site propagator row.
///
/// `φ_u = arg U_N0 + pπ` and `φ_w = −arg W_N0 + (p+1)π`, so that the
/// Choi matrix of [`choi_xy`] is the one the spin dynamics produces.
pub fn snapshot(row: &PropagatorRow, corr: &CorrelatorSet, parity: ParityTag) -> Result<ChannelSnapshot> {
    let p = parity.require_definite()?;
    let (u0, w0) = (row.u[0], row.w[0]);
    let pp = f64::from(p) * PI;
    Ok(ChannelSnapshot {
        t: row.t,
        u: u0.norm(),
        w: w0.norm(),
        phi_u: wrap_phase(u0.arg() + pp),
        phi_w: wrap_phase(-w0.arg() + pp + PI),
        a: interference(row, corr)?,
        parity: p,
    })
}

/// `S_θ = [[sin θ/2, cos θ/2], [−cos θ/2, sin θ/2]]`.
fn s_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[s, c], [-c, s]]
}

/// Affine Bloch-sphere map `n(0) → n'(t)` of the channel.
pub fn bloch_map(n: &BlochVector, s: &ChannelSnapshot) -> BlochVector {
    let left = s_matrix(s.phi_w - s.phi_u);
    let right = s_matrix(s.phi_w + s.phi_u);
    let d = [s.u - s.w, s.u + s.w];
    // rᵀ n
    let v = [right[0][0] * n.x + right[1][0] * n.y, right[0][1] * n.x + right[1][1] * n.y];
    let v = [d[0] * v[0], d[1] * v[1]];
    BlochVector {
        x: left[0][0] * v[0] + left[0][1] * v[1],
        y: left[1][0] * v[0] + left[1][1] * v[1],
        z: n.z * (s.u * s.u - s.w * s.w) + s.u * s.u + s.w * s.w + 2.0 * s.a - 1.0,
    }
}

/// Choi matrix of the XY channel; fails if the snapshot is not CPTP.
pub fn choi_xy(s: &ChannelSnapshot) -> Result<ChoiMatrix> {
    ChoiMatrix::new(choi_xy_matrix(s))
}

pub fn choi_xy_matrix(s: &ChannelSnapshot) -> Mat4 {
    let (u2, w2, a) = (s.u * s.u, s.w * s.w, s.a);
    let eu = C64::from_polar(s.u, s.phi_u);
    let ew = C64::from_polar(s.w, s.phi_w);
    let mut m = Mat4::zeros();
    m[(0, 0)] = C64::from(u2 + a);
    m[(1, 1)] = C64::from(1.0 - u2 - a);
    m[(2, 2)] = C64::from(w2 + a);
    m[(3, 3)] = C64::from(1.0 - w2 - a);
    m[(0, 3)] = eu;
    m[(3, 0)] = eu.conj();
    m[(1, 2)] = ew;
    m[(2, 1)] = ew.conj();
    m
}

/// Optimal average fidelity of the XY channel; independent of `A`.
pub fn oaf_xy(s: &ChannelSnapshot) -> f64 {
    0.5 + (s.u * s.u - s.w * s.w).abs() / 6.0 + s.u.max(s.w) / 3.0
}

/// Correction `R` (applied as `R ρ R†` to the received qubit) achieving
/// [`oaf_xy`], with a flag set when `u = w` and the choice is a tie.
pub fn optimal_rotation_xy(s: &ChannelSnapshot) -> (Mat2, bool) {
    let degenerate = s.u == s.w;
    let r = if s.u >= s.w {
        su2_rotation([0.0, 0.0, 1.0], s.phi_u)
    } else {
        su2_rotation([1.0, 0.0, 0.0], -PI) * su2_rotation([0.0, 0.0, 1.0], -s.phi_w)
    };
    (r, degenerate)
}

/// Concurrence of the pair state `C/2`.
pub fn concurrence_xy(s: &ChannelSnapshot) -> f64 {
    let c_hat = |x: f64, y: f64| x - ((y * y + s.a) * (1.0 - x * x - s.a)).max(0.0).sqrt();
    c_hat(s.u, s.w).max(c_hat(s.w, s.u)).max(0.0)
}

/// The XY channel for one chain and initialization: the diagonalized
/// chain with the probe attached plus the pre-quench channel correlators.
#[derive(Debug, Clone)]
pub struct FreeFermionChannel {
    spec: ChainSpec,
    init: InitialState,
    diag: FermionDiag,
    corr: CorrelatorSet,
    parity: ParityTag,
}

impl FreeFermionChannel {
    pub fn new(spec: &ChainSpec, init: InitialState) -> Result<Self> {
        init.check(spec)?;
        let diag = diagonalize(&build_quadratic(spec, true)?)?;
        let (corr, parity) = states::fermionic_state(init, spec)?;
        parity.require_definite()?;
        Ok(Self { spec: *spec, init, diag, corr, parity })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn init(&self) -> InitialState {
        self.init
    }

    pub fn diag(&self) -> &FermionDiag {
        &self.diag
    }

    pub fn correlators(&self) -> &CorrelatorSet {
        &self.corr
    }

    pub fn parity(&self) -> ParityTag {
        self.parity
    }

    pub fn propagator(&self, t: f64) -> Propagator {
        propagate(&self.diag, t)
    }

    pub fn snapshot(&self, t: f64) -> Result<ChannelSnapshot> {
        let row = propagate_row(&self.diag, self.spec.n(), t);
        snapshot(&row, &self.corr, self.parity)
    }
}
