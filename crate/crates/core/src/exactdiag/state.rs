use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64};

/// Amplitudes over `2^sites` basis states, site `s` on bit `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sites: usize,
    amps: Vec<C64>,
}

pub const NORM_TOL: f64 = 1e-10;

impl StateVector {
    /// Wrap amplitudes, checking the length and normalization.
    pub fn new(sites: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << sites {
            return Err(Error::InvalidState(format!("{} amplitudes for {sites} sites", amps.len())));
        }
        let s = Self { sites, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm}")));
        }
        Ok(s)
    }

    pub(crate) fn new_unchecked(sites: usize, amps: Vec<C64>) -> Self {
        Self { sites, amps }
    }

    pub fn basis(sites: usize, index: usize) -> Self {
        let mut amps = vec![C64::from(0.0); 1 << sites];
        amps[index] = C64::from(1.0);
        Self { sites, amps }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|lo⟩ ⊗ |hi⟩` with `lo` on the low bits.
    pub fn tensor(lo: &StateVector, hi: &StateVector) -> StateVector {
        let shift = lo.sites;
        let mut amps = vec![C64::from(0.0); lo.dim() * hi.dim()];
        for (h, &b) in hi.amps.iter().enumerate() {
            if b == C64::from(0.0) {
                continue;
            }
            for (l, &a) in lo.amps.iter().enumerate() {
                amps[(h << shift) | l] = a * b;
            }
        }
        StateVector { sites: lo.sites + hi.sites, amps }
    }

    /// Expectation of an operator diagonal in the computational basis.
    pub fn diagonal_expectation(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.amps.iter().enumerate().map(|(s, z)| z.norm_sqr() * f(s)).sum()
    }

    /// Debug dump: site count as `u64` followed by `(re, im)` pairs, all
    /// little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.sites as u64).to_le_bytes())?;
        for z in &self.amps {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// `Tr_{all but site}[|a⟩⟨b|]`.
pub fn reduced_qubit(a: &StateVector, b: &StateVector, site: usize) -> Mat2 {
    assert_eq!(a.dim(), b.dim());
    assert!(site < a.sites);
    let bit = 1usize << site;
    let mut m = Mat2::zeros();
    for s in 0..a.dim() {
        if s & bit != 0 {
            continue;
        }
        let s1 = s | bit;
        let (a0, a1) = (a.amps[s], a.amps[s1]);
        let (b0, b1) = (b.amps[s].conj(), b.amps[s1].conj());
        m[(0, 0)] += a0 * b0;
        m[(0, 1)] += a0 * b1;
        m[(1, 0)] += a1 * b0;
        m[(1, 1)] += a1 * b1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(sites: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<C64> = (0..1 << sites).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= n);
        StateVector::new(sites, amps).unwrap()
    }

    #[test]
    fn all_up_reduces_to_up() {
        let s = StateVector::basis(4, 0);
        for site in 0..4 {
            let r = reduced_qubit(&s, &s, site);
            assert_eq!(r, Mat2::new(C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::from(0.0)));
        }
    }

    #[test]
    fn product_state_factor() {
        let q = StateVector::new(1, vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rest = random_state(3, 3);
        let full = StateVector::tensor(&q, &rest);
        let r = reduced_qubit(&full, &full, 0);
        let want = Mat2::from_fn(|i, j| q.amplitudes()[i] * q.amplitudes()[j].conj());
        assert!((r - want).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_identity() {
        let (a, b) = (random_state(5, 1), random_state(5, 2));
        for site in 0..5 {
            let r = reduced_qubit(&a, &b, site);
            assert!((r.trace() - b.inner(&a)).norm() < 1e-14);
        }
        let r = reduced_qubit(&a, &a, 2);
        assert!((r - r.adjoint()).norm() < 1e-14 && (r.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_norm() {
        assert!(StateVector::new(1, vec![C64::from(1.0), C64::from(1.0)]).is_err());
        assert!(StateVector::new(2, vec![C64::from(1.0)]).is_err());
    }

    #[test]
    fn binary_dump_layout() {
        let s = StateVector::new(1, vec![C64::new(0.6, 0.0), C64::new(0.0, -0.8)]).unwrap();
        let mut buf = Vec::new();
        s.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 * 8);
        assert_eq!(u64::from_le_bytes(buf[..8].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(buf[32..40].try_into().unwrap()), -0.8);
    }
}
