//! Channel initializations, as state vectors for the exact engine and as
//! two-point fermionic correlators for the free-fermion engine.
//!
//! Channel site `j` (1-based) is bit `j − 1` of a channel-only state and
//! row `j − 1` of a correlator matrix. Correlator strings are anchored at
//! site 1.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exactdiag::{build_hamiltonian_with, ground_state, parity_sign, up_count, StateVector, DEFAULT_SITE_CAP};
use crate::freefermion::{build_quadratic, diagonalize, FermionDiag};
use crate::linalg::C64;
use crate::model::{ChainSpec, InitialState, ModelKind};
use crate::par::Execution;

/// `|⟨∏(−σz)⟩|` must be this close to one for a parity to be definite.
pub const PARITY_TOL: f64 = 1e-10;

/// `⟨c†_j c_l⟩`, `⟨c_j c†_l⟩`, `⟨c†_j c†_l⟩` and `⟨c_j c_l⟩` over the channel.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSet {
    pub cdag: DMatrix<C64>,
    pub cexc: DMatrix<C64>,
    pub fdag: DMatrix<C64>,
    pub fann: DMatrix<C64>,
}

impl CorrelatorSet {
    /// Complete the set from `⟨c†c⟩` and `⟨c†c†⟩` using the anticommutators.
    pub fn from_normal_and_pairing(cdag: DMatrix<C64>, fdag: DMatrix<C64>) -> Self {
        let n = cdag.nrows();
        let cexc = DMatrix::identity(n, n) - cdag.transpose();
        let fann = -fdag.map(|z| z.conj());
        Self { cdag, cexc, fdag, fann }
    }

    pub fn n(&self) -> usize {
        self.cdag.nrows()
    }

    /// Largest violation of the structural identities, and of
    /// `0 ≤ eig(⟨c†c⟩) ≤ 1`.
    pub fn structure_residual(&self) -> f64 {
        let n = self.n();
        let amax = |m: DMatrix<C64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let herm = amax(&self.cdag - self.cdag.adjoint());
        let exc = amax(&self.cexc - (DMatrix::identity(n, n) - self.cdag.transpose()));
        let anti = amax(&self.fdag + self.fdag.transpose());
        let ann = amax(&self.fann + self.fdag.map(|z| z.conj()));
        let h = (&self.cdag + self.cdag.adjoint()) * C64::from(0.5);
        let ev = h.symmetric_eigenvalues();
        let lo = (-ev.min()).max(0.0);
        let hi = (ev.max() - 1.0).max(0.0);
        [herm, exc, anti, ann, lo, hi].into_iter().fold(0.0, f64::max)
    }
}

/// Fermion parity of the channel state: `∏(−σz)|ψ⟩ = (−1)^p |ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityTag {
    pub p: u8,
    pub definite: bool,
    /// `⟨∏(−σz)⟩`.
    pub expectation: f64,
}

impl ParityTag {
    pub fn definite(p: u8) -> Self {
        Self { p, definite: true, expectation: if p == 0 { 1.0 } else { -1.0 } }
    }

    pub fn from_expectation(e: f64) -> Self {
        Self { p: u8::from(e < 0.0), definite: (e.abs() - 1.0).abs() <= PARITY_TOL, expectation: e }
    }

    pub fn require_definite(self) -> Result<u8> {
        if self.definite {
            Ok(self.p)
        } else {
            Err(Error::IndefiniteParity(self.expectation))
        }
    }
}

/// Basis index of the Néel state `|0101…⟩` (site 1 up) on `n` sites.
pub fn neel_index(n: usize) -> usize {
    (0..n).filter(|b| b % 2 == 1).map(|b| 1usize << b).sum()
}

pub fn build_state_vector(init: InitialState, spec: &ChainSpec) -> Result<StateVector> {
    build_state_vector_with(init, spec, DEFAULT_SITE_CAP, Execution::default())
}

/// Normalized channel-only state on the `N` channel sites.
pub fn build_state_vector_with(init: InitialState, spec: &ChainSpec, cap: usize, exec: Execution) -> Result<StateVector> {
    init.check(spec)?;
    let n = spec.n();
    if n > cap {
        return Err(Error::DimensionCap { sites: n, cap });
    }
    Ok(match init {
        InitialState::FerroUp => StateVector::basis(n, 0),
        InitialState::FerroDown => StateVector::basis(n, (1 << n) - 1),
        InitialState::Neel => StateVector::basis(n, neel_index(n)),
        InitialState::SingletSeries => {
            // (|01⟩ − |10⟩)/√2 on each pair of sites (1,2), (3,4), ...
            let pair = StateVector::new(2, vec![C64::from(0.0), C64::from(-FRAC_1_SQRT_2), C64::from(FRAC_1_SQRT_2), C64::from(0.0)])?;
            let mut s = pair.clone();
            for _ in 1..n / 2 {
                s = StateVector::tensor(&s, &pair);
            }
            s
        }
        InitialState::GroundState => ground_state(&build_hamiltonian_with(spec, false, cap, exec)?)?.state,
    })
}

pub fn parity_of_state(state: &StateVector) -> ParityTag {
    let m = state.sites();
    ParityTag::from_expectation(state.diagonal_expectation(|s| parity_sign(s, m)))
}

/// Channel parity: counted for product and singlet states, from the
/// Bogoliubov vacuum for XY ground states and by expectation otherwise.
pub fn parity(init: InitialState, spec: &ChainSpec) -> Result<ParityTag> {
    init.check(spec)?;
    let n = spec.n();
    let ups = match init {
        InitialState::FerroDown => 0,
        InitialState::FerroUp => n,
        InitialState::Neel => n.div_ceil(2),
        InitialState::SingletSeries => n / 2,
        InitialState::GroundState => {
            return Ok(match spec.kind() {
                ModelKind::Xy => ParityTag::definite(ground_diag(spec)?.vacuum_parity()),
                ModelKind::Xxz => parity_of_state(&build_state_vector(init, spec)?),
            });
        }
    };
    Ok(ParityTag::definite((ups % 2) as u8))
}

/// Bogoliubov modes of the channel alone, with zero modes filled so the
/// ground state is the even one of a degenerate pair.
pub fn ground_diag(spec: &ChainSpec) -> Result<FermionDiag> {
    let form = build_quadratic(spec, false)?;
    let d = diagonalize(&form)?;
    let tol = crate::exactdiag::DEGENERACY_TOL * (d.vacuum_energy() + form.offset()).abs().max(1.0);
    Ok(d.prefer_even_vacuum(tol))
}

/// Correlators of an initialization on `n` channel sites. Ground states
/// need the channel-only diagonalization.
pub fn correlators(init: InitialState, n: usize, channel_diag: Option<&FermionDiag>) -> Result<CorrelatorSet> {
    let zero = DMatrix::<C64>::zeros(n, n);
    let normal = match init {
        InitialState::FerroDown => zero.clone(),
        InitialState::FerroUp => DMatrix::identity(n, n),
        InitialState::Neel => DMatrix::from_fn(n, n, |j, l| C64::from(if j == l && j % 2 == 0 { 1.0 } else { 0.0 })),
        InitialState::SingletSeries => {
            if n % 2 == 1 {
                return Err(Error::OddSingletChain(n));
            }
            DMatrix::from_fn(n, n, |j, l| {
                if j / 2 != l / 2 {
                    C64::from(0.0)
                } else if j == l {
                    C64::from(0.5)
                } else {
                    C64::from(-0.5)
                }
            })
        }
        InitialState::GroundState => {
            let d = channel_diag
                .ok_or_else(|| Error::Config("ground-state correlators need the channel diagonalization".into()))?;
            if d.dim() != n {
                return Err(Error::InvalidSpec(format!("channel diagonalization has {} modes, expected {n}", d.dim())));
            }
            let (p, q) = (d.p(), d.q());
            let cdag = (q.transpose() * q).map(C64::from);
            let fdag = (q.transpose() * p).map(C64::from);
            return Ok(CorrelatorSet::from_normal_and_pairing(cdag, fdag));
        }
    };
    Ok(CorrelatorSet::from_normal_and_pairing(normal, zero))
}

pub fn build_correlators(init: InitialState, spec: &ChainSpec) -> Result<CorrelatorSet> {
    init.check(spec)?;
    let diag = match init {
        InitialState::GroundState => Some(ground_diag(spec)?),
        _ => None,
    };
    correlators(init, spec.n(), diag.as_ref())
}

/// Correlators and parity for the free-fermion engine (XY only).
pub fn fermionic_state(init: InitialState, spec: &ChainSpec) -> Result<(CorrelatorSet, ParityTag)> {
    if spec.kind() != ModelKind::Xy {
        return Err(Error::WrongModel { expected: "xy" });
    }
    init.check(spec)?;
    if init == InitialState::GroundState {
        let d = ground_diag(spec)?;
        let p = ParityTag::definite(d.vacuum_parity());
        return Ok((correlators(init, spec.n(), Some(&d))?, p));
    }
    Ok((correlators(init, spec.n(), None)?, parity(init, spec)?))
}

/// `c_j |ψ⟩` or `c†_j |ψ⟩` with `c_j = ∏_{i<j}(−σz_i) σ−_j` and `σ− = |1⟩⟨0|`.
fn apply_fermion(amps: &[C64], j: usize, create: bool) -> Vec<C64> {
    let mut out = vec![C64::from(0.0); amps.len()];
    let bit = 1usize << j;
    for (s, &a) in amps.iter().enumerate() {
        let occupied = s & bit == 0;
        if occupied == create {
            continue;
        }
        let below = s & (bit - 1);
        let sign = if up_count(below, j).is_multiple_of(2) { 1.0 } else { -1.0 };
        out[s ^ bit] += a * sign;
    }
    out
}

/// Brute-force correlators of a channel state vector, including the
/// Jordan–Wigner strings.
pub fn correlators_from_state(state: &StateVector) -> CorrelatorSet {
    let n = state.sites();
    let amps = state.amplitudes();
    let ann: Vec<Vec<C64>> = (0..n).map(|j| apply_fermion(amps, j, false)).collect();
    let cre: Vec<Vec<C64>> = (0..n).map(|j| apply_fermion(amps, j, true)).collect();
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    CorrelatorSet {
        cdag: DMatrix::from_fn(n, n, |j, l| dot(&ann[j], &ann[l])),
        cexc: DMatrix::from_fn(n, n, |j, l| dot(&cre[j], &cre[l])),
        fdag: DMatrix::from_fn(n, n, |j, l| dot(&ann[j], &cre[l])),
        fann: DMatrix::from_fn(n, n, |j, l| dot(&cre[j], &ann[l])),
    }
}
