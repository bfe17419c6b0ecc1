use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{total_sites, ChainSpec, Couplings};
use crate::par::{self, Execution};

/// Largest number of sites the exact engine accepts by default.
pub const DEFAULT_SITE_CAP: usize = 24;

const CHUNK: usize = 1 << 12;

/// Nearest-neighbour chain Hamiltonian
/// `Σ_bonds (Jx σxσx + Jy σyσy + Jz σzσz) + h Σ σz`, applied matrix-free.
///
/// Site `s` is bit `s` of the basis index and bit value 0 is spin up.
#[derive(Debug, Clone)]
pub struct ManyBodyOperator {
    sites: usize,
    couplings: Couplings,
    h: f64,
    diag: Vec<f64>,
    exec: Execution,
}

impl ManyBodyOperator {
    pub fn new(sites: usize, couplings: Couplings, h: f64, cap: usize, exec: Execution) -> Result<Self> {
        if sites > cap || sites >= usize::BITS as usize - 1 {
            return Err(Error::DimensionCap { sites, cap });
        }
        let dim = 1usize << sites;
        let jz = couplings.jz;
        let mut diag = vec![0.0; dim];
        par::for_each_chunk_mut(exec, &mut diag, CHUNK, |offset, chunk| {
            for (i, d) in chunk.iter_mut().enumerate() {
                let s = offset + i;
                let mut e = 0.0;
                for b in 0..sites {
                    let up = (s >> b) & 1 == 0;
                    e += if up { h } else { -h };
                    if b + 1 < sites {
                        let same = ((s >> b) ^ (s >> (b + 1))) & 1 == 0;
                        e += if same { jz } else { -jz };
                    }
                }
                *d = e;
            }
        });
        Ok(Self { sites, couplings, h, diag, exec })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    /// Diagonal element `⟨s|H|s⟩`.
    pub fn diagonal(&self, s: usize) -> f64 {
        self.diag[s]
    }

    /// Off-diagonal elements of row `s`: `(s', ⟨s'|H|s⟩)` for each bond
    /// with a nonzero flip amplitude.
    pub fn flips(&self, s: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (same_amp, diff_amp) = (self.couplings.jx - self.couplings.jy, self.couplings.jx + self.couplings.jy);
        (0..self.sites.saturating_sub(1)).filter_map(move |b| {
            let same = ((s >> b) ^ (s >> (b + 1))) & 1 == 0;
            let amp = if same { same_amp } else { diff_amp };
            (amp != 0.0).then(|| (s ^ (0b11 << b), amp))
        })
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        par::for_each_chunk_mut(self.exec, y, CHUNK, |offset, chunk| {
            for (i, out) in chunk.iter_mut().enumerate() {
                let s = offset + i;
                let mut acc = x[s] * self.diag[s];
                for (t, amp) in self.flips(s) {
                    acc += x[t] * amp;
                }
                *out = acc;
            }
        });
    }

    pub fn apply_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::from(0.0); x.len()];
        self.apply(x, &mut y);
        y
    }

    /// `⟨x|H|x⟩` for a normalized `x`.
    pub fn expectation(&self, x: &[C64]) -> f64 {
        let y = self.apply_vec(x);
        x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Dense real matrix; intended for small dimensions.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for s in 0..dim {
            m[(s, s)] = self.diag[s];
            for (t, amp) in self.flips(s) {
                m[(t, s)] += amp;
            }
        }
        m
    }
}

/// `H_ch (+ H_I)` for a chain, with the probe on bit 0 when attached.
pub fn build_hamiltonian(spec: &ChainSpec, with_probe: bool) -> Result<ManyBodyOperator> {
    build_hamiltonian_with(spec, with_probe, DEFAULT_SITE_CAP, Execution::default())
}

pub fn build_hamiltonian_with(spec: &ChainSpec, with_probe: bool, cap: usize, exec: Execution) -> Result<ManyBodyOperator> {
    ManyBodyOperator::new(total_sites(spec, with_probe), spec.couplings(), spec.h(), cap, exec)
}

/// Number of `|0⟩` (spin-up) sites among bits `0..sites`.
pub fn up_count(s: usize, sites: usize) -> u32 {
    sites as u32 - (s & ((1usize << sites) - 1)).count_ones()
}

/// Eigenvalue of `∏(−σz)` on a basis state: `(−1)^{#up}`.
pub fn parity_sign(s: usize, sites: usize) -> f64 {
    if up_count(s, sites).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
