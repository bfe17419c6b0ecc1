#![allow(dead_code)]

use nalgebra::Matrix4;
use rand::Rng;
use rand_distr::StandardNormal;
use spinbus::linalg::{Mat2, Mat4, C64};

/// Haar-random element of SU(2).
pub fn random_unitary<R: Rng>(rng: &mut R) -> Mat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    quaternion_unitary(&q.map(|x| x / n))
}

/// `q0 I − i (q1 σx + q2 σy + q3 σz)`; unitary for unit `q`.
pub fn quaternion_unitary(q: &[f64; 4]) -> Mat2 {
    Mat2::new(
        C64::new(q[0], -q[3]),
        C64::new(-q[2], -q[1]),
        C64::new(q[2], -q[1]),
        C64::new(q[0], q[3]),
    )
}

/// Random two-qubit density matrix from a complex Ginibre matrix.
pub fn random_density4<R: Rng>(rng: &mut R) -> Mat4 {
    let g = Mat4::from_fn(|_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let rho = g * g.adjoint();
    rho / rho.trace()
}

/// `max ⟨Φ|ρ|Φ⟩` over maximally entangled `|Φ⟩ = (I ⊗ U)|Φ+⟩`, computed by
/// maximizing the overlap directly as a quadratic form on the unit
/// quaternions that parameterize `U`.
pub fn direct_singlet_fraction(rho: &Mat4) -> f64 {
    let overlap = |q: &[f64; 4]| {
        let u = quaternion_unitary(q);
        // (I ⊗ U)|Φ+⟩ with the first qubit on the high index bit.
        let mut phi = [C64::from(0.0); 4];
        for a in 0..2 {
            for b in 0..2 {
                phi[2 * a + b] = u[(b, a)] * std::f64::consts::FRAC_1_SQRT_2;
            }
        }
        let mut f = C64::from(0.0);
        for r in 0..4 {
            for c in 0..4 {
                f += phi[r].conj() * rho[(r, c)] * phi[c];
            }
        }
        f.re
    };
    let e = |k: usize| -> [f64; 4] { std::array::from_fn(|i| if i == k { 1.0 } else { 0.0 }) };
    let add = |a: [f64; 4], b: [f64; 4], s: f64| -> [f64; 4] { std::array::from_fn(|i| a[i] + s * b[i]) };
    let k = Matrix4::from_fn(|a, b| {
        if a == b {
            overlap(&e(a))
        } else {
            (overlap(&add(e(a), e(b), 1.0)) - overlap(&add(e(a), e(b), -1.0))) / 4.0
        }
    });
    k.symmetric_eigenvalues().max()
}
