use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{total_sites, ChainSpec, ModelKind};

/// `H = Σ c†_k A_kl c_l + ½ (c†_k B_kl c†_l − c_k B_kl c_l)` after the
/// Jordan–Wigner map of an XY chain.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    /// Constant dropped by the map: `H_spin = H_fermion + offset`.
    offset: f64,
}

impl QuadraticForm {
    /// Symmetrizes `a` and antisymmetrizes `b`.
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, offset: f64) -> Result<Self> {
        if !a.is_square() || a.shape() != b.shape() {
            return Err(Error::InvalidSpec(format!("shape mismatch {:?} vs {:?}", a.shape(), b.shape())));
        }
        let a = (&a + a.transpose()) * 0.5;
        let b = (&b - b.transpose()) * 0.5;
        Ok(Self { a, b, offset })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// Quadratic form of the XY chain, optionally with the probe on row 0.
///
/// With `|0⟩` occupied, `h σz = 2h n − h`, so the diagonal of `A` is `2h`
/// and the spin Hamiltonian exceeds the fermionic one by `−h M`.
pub fn build_quadratic(spec: &ChainSpec, with_probe: bool) -> Result<QuadraticForm> {
    if spec.kind() != ModelKind::Xy {
        return Err(Error::WrongModel { expected: "xy" });
    }
    let m = total_sites(spec, with_probe);
    let j = spec.j();
    let g = spec.gamma().unwrap_or(0.0);
    let mut a = DMatrix::zeros(m, m);
    let mut b = DMatrix::zeros(m, m);
    for k in 0..m {
        a[(k, k)] = 2.0 * spec.h();
        if k + 1 < m {
            a[(k, k + 1)] = j;
            a[(k + 1, k)] = j;
            b[(k, k + 1)] = j * g;
            b[(k + 1, k)] = -j * g;
        }
    }
    QuadraticForm::new(a, b, -spec.h() * m as f64)
}
