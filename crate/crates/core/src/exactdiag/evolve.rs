use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::operator::ManyBodyOperator;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Largest Hilbert-space dimension evolved by full eigendecomposition.
pub const DENSE_EVOLUTION_DIM: usize = 1 << 10;

/// Local error target of one Krylov step.
pub const KRYLOV_TOL: f64 = 1e-12;
const KRYLOV_MAX_DIM: usize = 40;
const MAX_HALVINGS: u32 = 30;

/// Propagator `e^{−iHt}` for one Hamiltonian.
#[derive(Debug, Clone)]
pub enum Evolver {
    /// `H = V diag(E) Vᵀ`, reusable at every time.
    Dense { op: ManyBodyOperator, energies: DVector<f64>, vectors: DMatrix<f64> },
    /// Short-iteration Lanczos exponential.
    Krylov { op: ManyBodyOperator },
}

impl Evolver {
    /// Dense below [`DENSE_EVOLUTION_DIM`], Krylov above.
    pub fn new(op: ManyBodyOperator) -> Self {
        if op.dim() <= DENSE_EVOLUTION_DIM {
            Self::dense(op)
        } else {
            Self::krylov(op)
        }
    }

    pub fn dense(op: ManyBodyOperator) -> Self {
        let eig = op.to_dense().symmetric_eigen();
        Self::Dense { op, energies: eig.eigenvalues, vectors: eig.eigenvectors }
    }

    pub fn krylov(op: ManyBodyOperator) -> Self {
        Self::Krylov { op }
    }

    pub fn operator(&self) -> &ManyBodyOperator {
        match self {
            Self::Dense { op, .. } | Self::Krylov { op } => op,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Self::Dense { .. })
    }

    /// `e^{−iHt} ψ`.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        match self {
            Self::Dense { energies, vectors, .. } => {
                let c = spectral_coefficients(vectors, psi.amplitudes());
                Ok(StateVector::new_unchecked(psi.sites(), spectral_state(energies, vectors, &c, t)))
            }
            Self::Krylov { op } => {
                let out = krylov_evolve(op, psi.amplitudes(), t)?;
                Ok(StateVector::new_unchecked(psi.sites(), out))
            }
        }
    }
}

/// `Vᵀ ψ` for real `V`.
fn spectral_coefficients(vectors: &DMatrix<f64>, psi: &[C64]) -> DVector<C64> {
    let re = DVector::from_iterator(psi.len(), psi.iter().map(|z| z.re));
    let im = DVector::from_iterator(psi.len(), psi.iter().map(|z| z.im));
    let (cr, ci) = (vectors.tr_mul(&re), vectors.tr_mul(&im));
    DVector::from_fn(cr.len(), |k, _| C64::new(cr[k], ci[k]))
}

fn spectral_state(energies: &DVector<f64>, vectors: &DMatrix<f64>, c: &DVector<C64>, t: f64) -> Vec<C64> {
    let ph = DVector::from_fn(c.len(), |k, _| c[k] * C64::from_polar(1.0, -energies[k] * t));
    let re = DVector::from_iterator(ph.len(), ph.iter().map(|z| z.re));
    let im = DVector::from_iterator(ph.len(), ph.iter().map(|z| z.im));
    let (r, i) = (vectors * re, vectors * im);
    r.iter().zip(i.iter()).map(|(a, b)| C64::new(*a, *b)).collect()
}

/// `e^{−iHt} ψ` by Krylov steps with adaptive step size.
pub fn krylov_evolve(op: &ManyBodyOperator, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    let mut state = psi.to_vec();
    let mut done = 0.0;
    let mut dt = t;
    let mut halvings = 0;
    while done < t {
        let step = dt.min(t - done);
        match krylov_step(op, &state, step)? {
            Some(next) => {
                state = next;
                done += step;
            }
            None => {
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::NotConverged("Krylov time step"));
                }
                dt = step / 2.0;
            }
        }
    }
    Ok(state)
}

/// One step of length `dt`, or `None` if the Krylov space is too small for it.
fn krylov_step(op: &ManyBodyOperator, psi: &[C64], dt: f64) -> Result<Option<Vec<C64>>> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || dt == 0.0 {
        return Ok(Some(psi.to_vec()));
    }
    let m_max = KRYLOV_MAX_DIM.min(psi.len());
    let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|z| z / norm).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![C64::from(0.0); psi.len()];
    for k in 0..m_max {
        op.apply(&basis[k], &mut w);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        // Two passes of full reorthogonalization.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let y = small_expm(&alpha, &beta, dt);
        let err = b * y[k].norm();
        let breakdown = b <= 1e-13 * (a.abs() + 1.0);
        if err <= KRYLOV_TOL || breakdown {
            let mut out = vec![C64::from(0.0); psi.len()];
            for (yk, v) in y.iter().zip(&basis) {
                let c = yk * norm;
                out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
            }
            return Ok(Some(out));
        }
        if k + 1 == m_max {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
    Ok(None)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `e^{−iTdt} e_1` for the Lanczos tridiagonal `T`.
fn small_expm(alpha: &[f64], beta: &[f64], dt: f64) -> Vec<C64> {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    (0..k)
        .map(|r| {
            (0..k)
                .map(|j| {
                    let s = eig.eigenvectors[(r, j)] * eig.eigenvectors[(0, j)];
                    C64::from_polar(s, -eig.eigenvalues[j] * dt)
                })
                .sum()
        })
        .collect()
}

/// A state followed in time under a fixed [`Evolver`].
///
/// The dense path projects once onto the eigenbasis. The Krylov path keeps
/// the last few evaluated times as restart points, so a sequence of calls
/// at increasing times (or inside a recently sampled interval) costs only
/// the increments.
#[derive(Debug, Clone)]
pub struct Trajectory {
    evolver: Arc<Evolver>,
    initial: StateVector,
    coefficients: Option<DVector<C64>>,
    checkpoints: Vec<(f64, Vec<C64>)>,
}

const CHECKPOINTS: usize = 3;

impl Trajectory {
    pub fn new(evolver: Arc<Evolver>, initial: StateVector) -> Self {
        let coefficients = match evolver.as_ref() {
            Evolver::Dense { vectors, .. } => Some(spectral_coefficients(vectors, initial.amplitudes())),
            Evolver::Krylov { .. } => None,
        };
        Self { evolver, initial, coefficients, checkpoints: Vec::new() }
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn at(&mut self, t: f64) -> Result<StateVector> {
        let sites = self.initial.sites();
        match (self.evolver.as_ref(), &self.coefficients) {
            (Evolver::Dense { energies, vectors, .. }, Some(c)) => {
                Ok(StateVector::new_unchecked(sites, spectral_state(energies, vectors, c, t)))
            }
            (evolver, _) => {
                let op = evolver.operator();
                let start = self
                    .checkpoints
                    .iter()
                    .filter(|(tc, _)| *tc <= t)
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(tc, v)| (*tc, v.as_slice()));
                let (t0, from) = start.unwrap_or((0.0, self.initial.amplitudes()));
                let out = krylov_evolve(op, from, t - t0)?;
                if !self.checkpoints.iter().any(|(tc, _)| *tc == t) {
                    self.checkpoints.push((t, out.clone()));
                    if self.checkpoints.len() > CHECKPOINTS {
                        let oldest = self
                            .checkpoints
                            .iter()
                            .enumerate()
                            .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
                            .map(|(i, _)| i)
                            .expect("nonempty");
                        self.checkpoints.swap_remove(oldest);
                    }
                }
                Ok(StateVector::new_unchecked(sites, out))
            }
        }
    }
}
