use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::{parity_sign, up_count, ManyBodyOperator};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Sectors up to this dimension are diagonalized densely.
pub const DENSE_SECTOR_DIM: usize = 512;

/// Relative energy window within which sector ground states count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

const LANCZOS_SEED: u64 = 0x5eed_1a2c;
const LANCZOS_TOL: f64 = 1e-12;
const LANCZOS_MAX: usize = 160;
const LANCZOS_RESTARTS: usize = 40;

/// Conserved quantity used to block-diagonalize the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `∏(−σz) = (−1)^p`.
    Parity(u8),
    /// Number of up spins.
    Ups(u32),
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub state: StateVector,
    pub energy: f64,
    pub sector: Sector,
    /// Number of symmetry sectors whose lowest level ties with the ground energy.
    pub degenerate_sectors: usize,
    /// Distance to the lowest level of any other sector.
    pub sector_gap: f64,
}

/// Lowest eigenvector of `H`, resolved by symmetry sector.
///
/// With `Jx = Jy` the total magnetization is conserved and the sectors
/// are fixed up-spin counts; otherwise they are the two parity classes.
/// Among degenerate sectors an even-parity one wins, then the one with
/// most up spins, so the result is reproducible.
pub fn ground_state(op: &ManyBodyOperator) -> Result<GroundState> {
    let m = op.sites();
    let c = op.couplings();
    let sectors: Vec<Sector> = if c.jx == c.jy {
        (0..=m as u32).rev().map(Sector::Ups).collect()
    } else {
        vec![Sector::Parity(0), Sector::Parity(1)]
    };
    let mut found: Vec<(Sector, f64, Vec<usize>, DVector<f64>)> = Vec::new();
    for sector in sectors {
        let basis: Vec<usize> = (0..op.dim()).filter(|&s| in_sector(s, m, sector)).collect();
        if basis.is_empty() {
            continue;
        }
        let (e, v) = sector_ground(op, &basis)?;
        found.push((sector, e, basis, v));
    }
    let e_min = found.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    let tol = DEGENERACY_TOL * e_min.abs().max(1.0);
    let ties = found.iter().filter(|f| f.1 - e_min <= tol).count();
    let pick = (0..found.len())
        .filter(|&i| found[i].1 - e_min <= tol)
        .min_by_key(|&i| (found[i].0.parity(), i))
        .expect("at least one sector");
    let sector_gap = found
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pick)
        .map(|(_, f)| f.1 - e_min)
        .fold(f64::INFINITY, f64::min);
    let (sector, energy, basis, v) = found.swap_remove(pick);
    let mut amps = vec![C64::from(0.0); op.dim()];
    for (k, &s) in basis.iter().enumerate() {
        amps[s] = C64::from(v[k]);
    }
    Ok(GroundState { state: StateVector::new(m, amps)?, energy, sector, degenerate_sectors: ties, sector_gap })
}

impl Sector {
    pub fn parity(self) -> u8 {
        match self {
            Sector::Parity(p) => p,
            Sector::Ups(k) => (k % 2) as u8,
        }
    }
}

fn in_sector(s: usize, sites: usize, sector: Sector) -> bool {
    match sector {
        Sector::Parity(p) => (parity_sign(s, sites) < 0.0) == (p == 1),
        Sector::Ups(k) => up_count(s, sites) == k,
    }
}

fn sector_ground(op: &ManyBodyOperator, basis: &[usize]) -> Result<(f64, DVector<f64>)> {
    let mut index = vec![u32::MAX; op.dim()];
    for (k, &s) in basis.iter().enumerate() {
        index[s] = k as u32;
    }
    let matvec = |x: &DVector<f64>| {
        let mut y = DVector::zeros(basis.len());
        for (k, &s) in basis.iter().enumerate() {
            let mut acc = op.diagonal(s) * x[k];
            for (t, amp) in op.flips(s) {
                let j = index[t];
                debug_assert!(j != u32::MAX, "Hamiltonian leaks out of its sector");
                acc += amp * x[j as usize];
            }
            y[k] = acc;
        }
        y
    };
    if basis.len() <= DENSE_SECTOR_DIM {
        let d = basis.len();
        let mut h = DMatrix::zeros(d, d);
        for k in 0..d {
            let mut e = DVector::zeros(d);
            e[k] = 1.0;
            h.set_column(k, &matvec(&e));
        }
        let eig = h.symmetric_eigen();
        let i = eig.eigenvalues.imin();
        return Ok((eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let start = DVector::from_fn(basis.len(), |_, _| rng.random::<f64>() - 0.5);
    lanczos_ground(matvec, start)
}

/// Lowest eigenpair of a real symmetric operator by restarted Lanczos with
/// full reorthogonalization.
pub fn lanczos_ground<F>(matvec: F, start: DVector<f64>) -> Result<(f64, DVector<f64>)>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let d = start.len();
    let mut v0 = start.normalize();
    let m_max = LANCZOS_MAX.min(d);
    for _ in 0..LANCZOS_RESTARTS {
        let mut q: Vec<DVector<f64>> = vec![v0.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz = None;
        for k in 0..m_max {
            let mut w = matvec(&q[k]);
            let a = q[k].dot(&w);
            alpha.push(a);
            for qi in &q {
                let c = qi.dot(&w);
                w.axpy(-c, qi, 1.0);
            }
            for qi in &q {
                let c = qi.dot(&w);
                w.axpy(-c, qi, 1.0);
            }
            let b = w.norm();
            let t = tridiagonal(&alpha, &beta);
            let eig = t.symmetric_eigen();
            let i = eig.eigenvalues.imin();
            let y = eig.eigenvectors.column(i).into_owned();
            let resid = b * y[k].abs();
            ritz = Some((eig.eigenvalues[i], y));
            if resid < LANCZOS_TOL * eig.eigenvalues[i].abs().max(1.0) || b < 1e-14 || k + 1 == m_max {
                break;
            }
            beta.push(b);
            q.push(w / b);
        }
        let (e, y) = ritz.expect("at least one Lanczos step");
        let mut v = DVector::zeros(d);
        for (yi, qi) in y.iter().zip(&q) {
            v.axpy(*yi, qi, 1.0);
        }
        let v = v.normalize();
        let r = (matvec(&v) - &v * e).norm();
        if r < 1e-9 * e.abs().max(1.0) {
            return Ok((e, v));
        }
        v0 = v;
    }
    Err(Error::NotConverged("Lanczos ground state"))
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let k = alpha.len();
    DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    })
}
