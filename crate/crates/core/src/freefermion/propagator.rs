use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::diag::FermionDiag;
use crate::linalg::C64;

/// Heisenberg-picture evolution `c_l(t) = Σ_n U_ln(t) c_n + W_ln(t) c†_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub t: f64,
    pub u: DMatrix<C64>,
    pub w: DMatrix<C64>,
}

/// One row `l` of `U(t)` and `W(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorRow {
    pub t: f64,
    pub row: usize,
    pub u: DVector<C64>,
    pub w: DVector<C64>,
}

fn phases(d: &FermionDiag, t: f64) -> (DVector<C64>, DVector<C64>) {
    let minus = d.energies().map(|e| C64::from_polar(1.0, -e * t));
    let plus = minus.map(|z| z.conj());
    (minus, plus)
}

/// `U = Pᵀ e^{−itE} P + Qᵀ e^{itE} Q`, `W = Pᵀ e^{−itE} Q + Qᵀ e^{itE} P`.
pub fn propagate(d: &FermionDiag, t: f64) -> Propagator {
    let (minus, plus) = phases(d, t);
    let p = d.p().map(C64::from);
    let q = d.q().map(C64::from);
    let m = d.dim();
    let scale_rows = |x: &DMatrix<C64>, ph: &DVector<C64>| DMatrix::from_fn(m, m, |k, l| ph[k] * x[(k, l)]);
    let ep = scale_rows(&p, &minus);
    let eq = scale_rows(&q, &minus);
    let fp = scale_rows(&p, &plus);
    let fq = scale_rows(&q, &plus);
    let u = p.transpose() * ep + q.transpose() * fq;
    let w = p.transpose() * eq + q.transpose() * fp;
    Propagator { t, u, w }
}

/// Row `row` of [`propagate`] in `O(M²)`.
pub fn propagate_row(d: &FermionDiag, row: usize, t: f64) -> PropagatorRow {
    let (minus, plus) = phases(d, t);
    let m = d.dim();
    let (p, q) = (d.p(), d.q());
    let mut u = DVector::zeros(m);
    let mut w = DVector::zeros(m);
    for k in 0..m {
        let a = minus[k] * p[(k, row)];
        let b = plus[k] * q[(k, row)];
        for l in 0..m {
            u[l] += a * p[(k, l)] + b * q[(k, l)];
            w[l] += a * q[(k, l)] + b * p[(k, l)];
        }
    }
    PropagatorRow { t, row, u, w }
}

impl Propagator {
    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// `max(|UU† + WW† − I|, |UWᵀ + WUᵀ|)` entrywise.
    pub fn canonical_residual(&self) -> f64 {
        let m = self.dim();
        let r1 = &self.u * self.u.adjoint() + &self.w * self.w.adjoint() - DMatrix::<C64>::identity(m, m);
        let r2 = &self.u * self.w.transpose() + &self.w * self.u.transpose();
        r1.iter().chain(r2.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn row(&self, row: usize) -> PropagatorRow {
        PropagatorRow {
            t: self.t,
            row,
            u: self.u.row(row).transpose(),
            w: self.w.row(row).transpose(),
        }
    }

    /// JSON object `{t, u, w}` with matrices as nested arrays of `[re, im]`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump {
            t: f64,
            u: Vec<Vec<[f64; 2]>>,
            w: Vec<Vec<[f64; 2]>>,
        }
        let rows = |x: &DMatrix<C64>| {
            (0..x.nrows())
                .map(|r| (0..x.ncols()).map(|c| [x[(r, c)].re, x[(r, c)].im]).collect())
                .collect()
        };
        serde_json::to_value(Dump { t: self.t, u: rows(&self.u), w: rows(&self.w) }).expect("plain data serializes")
    }
}
