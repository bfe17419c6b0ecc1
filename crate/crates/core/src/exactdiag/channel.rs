use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use super::evolve::{Evolver, Trajectory};
use super::operator::{build_hamiltonian_with, DEFAULT_SITE_CAP};
use super::state::{reduced_qubit, StateVector};
use crate::error::Result;
use crate::linalg::{Mat2, Mat4, C64};
use crate::metrics::{ChoiMatrix, CHOI_TOL};
use crate::model::{ChainSpec, InitialState};
use crate::par::Execution;
use crate::states::{self, ParityTag};

/// How the exact engine evolves states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvolutionMode {
    #[default]
    Auto,
    Dense,
    Krylov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdOptions {
    pub site_cap: usize,
    pub exec: Execution,
    pub mode: EvolutionMode,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self { site_cap: DEFAULT_SITE_CAP, exec: Execution::default(), mode: EvolutionMode::Auto }
    }
}

/// The channel from probe site 0 to site `N`, obtained by evolving
/// `|k⟩_0 ⊗ |ψ_ch⟩` for `k = 0, 1` under the full Hamiltonian.
#[derive(Debug, Clone)]
pub struct EdChannel {
    spec: ChainSpec,
    init: InitialState,
    channel_state: StateVector,
    parity: ParityTag,
    trajectories: [Trajectory; 2],
}

impl EdChannel {
    pub fn new(spec: &ChainSpec, init: InitialState) -> Result<Self> {
        Self::with_options(spec, init, EdOptions::default())
    }

    pub fn with_options(spec: &ChainSpec, init: InitialState, opts: EdOptions) -> Result<Self> {
        init.check(spec)?;
        let op = build_hamiltonian_with(spec, true, opts.site_cap, opts.exec)?;
        let channel_state = states::build_state_vector_with(init, spec, opts.site_cap, opts.exec)?;
        let parity = states::parity_of_state(&channel_state);
        let evolver = Arc::new(match opts.mode {
            EvolutionMode::Auto => Evolver::new(op),
            EvolutionMode::Dense => Evolver::dense(op),
            EvolutionMode::Krylov => Evolver::krylov(op),
        });
        let trajectories = [0usize, 1].map(|k| {
            let probe = StateVector::basis(1, k);
            Trajectory::new(evolver.clone(), StateVector::tensor(&probe, &channel_state))
        });
        Ok(Self { spec: *spec, init, channel_state, parity, trajectories })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn init(&self) -> InitialState {
        self.init
    }

    pub fn channel_state(&self) -> &StateVector {
        &self.channel_state
    }

    pub fn parity(&self) -> ParityTag {
        self.parity
    }

    /// The two evolved states `e^{−iHt}(|k⟩ ⊗ |ψ_ch⟩)`.
    pub fn evolved(&mut self, t: f64) -> Result<[StateVector; 2]> {
        let a = self.trajectories[0].at(t)?;
        let b = self.trajectories[1].at(t)?;
        Ok([a, b])
    }

    /// Choi matrix at time `t`, checked to be CPTP.
    pub fn choi(&mut self, t: f64) -> Result<ChoiMatrix> {
        let choi = self.choi_unchecked(t)?;
        choi.validate(CHOI_TOL)?;
        Ok(choi)
    }

    pub fn choi_unchecked(&mut self, t: f64) -> Result<ChoiMatrix> {
        let psi = self.evolved(t)?;
        let n = self.spec.n();
        let images: [[Mat2; 2]; 2] = [0, 1].map(|k| [0, 1].map(|l| reduced_qubit(&psi[k], &psi[l], n)));
        Ok(ChoiMatrix::from_images(&images))
    }
}

pub fn channel_choi(spec: &ChainSpec, init: InitialState, t: f64) -> Result<ChoiMatrix> {
    EdChannel::new(spec, init)?.choi(t)
}

/// State of the pair 0'–N when 0' starts maximally entangled with the probe.
pub fn pair_state(choi: &ChoiMatrix) -> Mat4 {
    choi.pair_state()
}

/// Two-site reduced density matrix with `hi` on the high index bit.
pub fn reduced_pair(state: &StateVector, hi: usize, lo: usize) -> Mat4 {
    assert_ne!(hi, lo);
    let (bh, bl) = (1usize << hi, 1usize << lo);
    let amps = state.amplitudes();
    let mut m = Mat4::zeros();
    for s in 0..amps.len() {
        if s & (bh | bl) != 0 {
            continue;
        }
        let idx = [s, s | bl, s | bh, s | bh | bl];
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] += amps[idx[r]] * amps[idx[c]].conj();
            }
        }
    }
    m
}

/// `ρ_{0'N}(t)` by direct simulation of the ancilla, probe and channel.
///
/// The ancilla is an extra bit above the chain that the Hamiltonian does
/// not touch, so each ancilla branch evolves independently.
pub fn ancilla_pair_state(spec: &ChainSpec, init: InitialState, t: f64) -> Result<Mat4> {
    let mut ch = EdChannel::new(spec, init)?;
    let psi = ch.evolved(t)?;
    let m = psi[0].sites();
    let mut amps = vec![C64::from(0.0); 1 << (m + 1)];
    for (k, branch) in psi.iter().enumerate() {
        for (s, a) in branch.amplitudes().iter().enumerate() {
            amps[(k << m) | s] = a * FRAC_1_SQRT_2;
        }
    }
    let full = StateVector::new(m + 1, amps)?;
    Ok(reduced_pair(&full, m, spec.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{m_matrix, oaf};

    fn close(a: &Mat4, b: &Mat4, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    #[test]
    fn t0_channel_forgets_the_input() {
        let spec = ChainSpec::xxz(4, 0.5, 0.2).unwrap();
        for init in [InitialState::FerroDown, InitialState::Neel, InitialState::SingletSeries] {
            let mut ch = EdChannel::new(&spec, init).unwrap();
            let choi = ch.choi(0.0).unwrap();
            let rho_n = reduced_qubit(ch.channel_state(), ch.channel_state(), 3);
            for k in 0..2 {
                assert!((choi.image(k, k) - rho_n).norm() < 1e-14);
            }
            assert!(choi.image(0, 1).norm() < 1e-14);
            assert!((oaf(&m_matrix(&choi)) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ancilla_simulation_matches_choi() {
        for (spec, init) in [
            (ChainSpec::xy(4, 0.6, 0.3).unwrap(), InitialState::Neel),
            (ChainSpec::xxz(5, 1.3, 0.1).unwrap(), InitialState::GroundState),
            (ChainSpec::xxz(6, -0.4, 0.0).unwrap(), InitialState::SingletSeries),
        ] {
            for t in [0.8, 2.9] {
                let choi = channel_choi(&spec, init, t).unwrap();
                let direct = ancilla_pair_state(&spec, init, t).unwrap();
                assert!(close(&pair_state(&choi), &direct, 1e-12));
            }
        }
    }

    #[test]
    fn dense_and_krylov_channels_agree() {
        let spec = ChainSpec::xxz(6, 0.8, 0.3).unwrap();
        let opts = |mode| EdOptions { mode, ..EdOptions::default() };
        let mut d = EdChannel::with_options(&spec, InitialState::Neel, opts(EvolutionMode::Dense)).unwrap();
        let mut k = EdChannel::with_options(&spec, InitialState::Neel, opts(EvolutionMode::Krylov)).unwrap();
        for t in [0.4, 1.0, 3.3, 2.0] {
            assert!(close(d.choi(t).unwrap().matrix(), k.choi(t).unwrap().matrix(), 1e-9));
        }
    }

    #[test]
    fn channel_is_linear_in_the_input() {
        use rand::{Rng, SeedableRng};
        let spec = ChainSpec::xy(5, 0.4, 0.6).unwrap();
        let mut ch = EdChannel::new(&spec, InitialState::FerroUp).unwrap();
        let t = 1.9;
        let choi = ch.choi(t).unwrap();
        let psi = ch.evolved(t).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let b = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (a, b) = (a / norm, b / norm);
            let rho = Mat2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj());
            // Evolve the superposed input directly.
            let amps: Vec<C64> = psi[0].amplitudes().iter().zip(psi[1].amplitudes()).map(|(x, y)| a * x + b * y).collect();
            let direct = StateVector::new(psi[0].sites(), amps).unwrap();
            let want = reduced_qubit(&direct, &direct, 5);
            assert!((choi.apply(&rho) - want).norm() < 1e-12);
        }
    }
}
