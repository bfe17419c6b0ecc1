use nalgebra::{DMatrix, DVector};

use super::quadratic::QuadraticForm;
use crate::error::{Error, Result};

/// Bogoliubov modes `d_k = Σ_l P_kl c_l + Q_kl c†_l` with `H = Σ E_k d†_k d_k + const`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionDiag {
    energies: DVector<f64>,
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    /// Ground-state energy of the quadratic form (without the JW offset).
    vacuum_energy: f64,
}

impl FermionDiag {
    /// Build from orthogonal `alpha = P + Q`, `beta = P − Q` and nonnegative energies.
    pub fn from_alpha_beta(energies: DVector<f64>, alpha: &DMatrix<f64>, beta: &DMatrix<f64>, trace_a: f64) -> Self {
        let p = (alpha + beta) * 0.5;
        let q = (alpha - beta) * 0.5;
        let vacuum_energy = 0.5 * (trace_a - energies.sum());
        Self { energies, p, q, vacuum_energy }
    }

    /// Mode energies, descending and nonnegative.
    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn alpha(&self) -> DMatrix<f64> {
        &self.p + &self.q
    }

    pub fn beta(&self) -> DMatrix<f64> {
        &self.p - &self.q
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Energy of the Bogoliubov vacuum for the fermionic form, i.e.
    /// `½ (Tr A − Σ E_k)`.
    pub fn vacuum_energy(&self) -> f64 {
        self.vacuum_energy
    }

    /// Fermion-number parity of the Bogoliubov vacuum, relative to the
    /// empty (all spins `|1⟩`) state: `0` if even.
    ///
    /// The Majorana transformation taking `c` to `d` is `diag(alpha, beta)`,
    /// and the vacuum parity is the Pfaffian of the covariance matrix, which
    /// picks up `det alpha · det beta`. The product is invariant under the
    /// SVD sign gauge, while either determinant alone is not.
    pub fn vacuum_parity(&self) -> u8 {
        let d = self.alpha().determinant() * self.beta().determinant();
        if d > 0.0 {
            0
        } else {
            1
        }
    }

    /// Modes with `E_k ≤ tol` are degenerate with their filled partner; if
    /// the vacuum is odd, fill the lowest such mode so the ground state
    /// chosen from a degenerate pair is the even one.
    pub fn prefer_even_vacuum(mut self, tol: f64) -> Self {
        let m = self.dim();
        if self.vacuum_parity() == 1 && m > 0 && self.energies[m - 1] <= tol {
            let k = m - 1;
            for l in 0..m {
                std::mem::swap(&mut self.p[(k, l)], &mut self.q[(k, l)]);
            }
        }
        self
    }

    /// `max(|PPᵀ + QQᵀ − I|, |PQᵀ + QPᵀ|)` entrywise.
    pub fn canonical_residual(&self) -> f64 {
        let m = self.dim();
        let r1 = &self.p * self.p.transpose() + &self.q * self.q.transpose() - DMatrix::identity(m, m);
        let r2 = &self.p * self.q.transpose() + &self.q * self.p.transpose();
        let r3 = self.p.transpose() * &self.p + self.q.transpose() * &self.q - DMatrix::identity(m, m);
        let r4 = self.p.transpose() * &self.q + self.q.transpose() * &self.p;
        [r1, r2, r3, r4].iter().map(|r| r.amax()).fold(0.0, f64::max)
    }

    /// `|A − B − αᵀ E β|` entrywise.
    pub fn reconstruction_residual(&self, form: &QuadraticForm) -> f64 {
        let e = DMatrix::from_diagonal(&self.energies);
        let rebuilt = self.alpha().transpose() * e * self.beta();
        (form.a() - form.b() - rebuilt).amax()
    }
}

/// Diagonalize a quadratic form through the SVD `A − B = αᵀ E β`.
pub fn diagonalize(form: &QuadraticForm) -> Result<FermionDiag> {
    let m = form.dim();
    let target = form.a() - form.b();
    let svd = target
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::NotConverged("singular value decomposition"))?;
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::NotConverged("singular value decomposition"));
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let energies = DVector::from_iterator(m, order.iter().map(|&k| svd.singular_values[k]));
    // Rows of alpha are columns of U, rows of beta are rows of Vᵀ.
    let alpha = DMatrix::from_fn(m, m, |k, l| u[(l, order[k])]);
    let beta = DMatrix::from_fn(m, m, |k, l| v_t[(order[k], l)]);
    Ok(FermionDiag::from_alpha_beta(energies, &alpha, &beta, form.a().trace()))
}
