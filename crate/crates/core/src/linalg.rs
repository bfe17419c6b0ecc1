//! Small fixed-size complex matrices for one- and two-qubit objects.

use nalgebra::{Matrix2, Matrix4};
pub use num_complex::Complex64 as C64;

pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// `[σx, σy, σz]`.
pub fn paulis() -> [Mat2; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// `a ⊗ b` with `a` on the high index bit: `(a⊗b)[2k+i, 2l+j] = a[k,l] b[i,j]`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `exp(-i θ/2 n·σ)` for a real unit axis `n`.
pub fn su2_rotation(axis: [f64; 3], angle: f64) -> Mat2 {
    let [x, y, z] = axis;
    let (s, c) = (angle / 2.0).sin_cos();
    let gen = sigma_x() * C64::from(x) + sigma_y() * C64::from(y) + sigma_z() * C64::from(z);
    Mat2::identity() * C64::from(c) - gen * (I * s)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_residual4(m: &Mat4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues4(m: &Mat4) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::from(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2], ev[3]]
}

/// `V` with `V V† = m` for Hermitian PSD `m`: eigenvectors scaled by the
/// square roots of the (clipped) eigenvalues.
pub fn psd_factor4(m: &Mat4) -> Mat4 {
    // Cholesky with diagonal pivoting: small pivots keep their relative
    // accuracy, so near-null directions stay near null.
    let mut s = (m + m.adjoint()) * C64::from(0.5);
    let mut v = Mat4::zeros();
    let mut perm = [0, 1, 2, 3];
    for k in 0..4 {
        let p = (k..4).max_by(|&a, &b| s[(a, a)].re.total_cmp(&s[(b, b)].re)).unwrap_or(k);
        s.swap_rows(k, p);
        s.swap_columns(k, p);
        v.swap_rows(k, p);
        perm.swap(k, p);
        let d = s[(k, k)].re;
        if d <= 0.0 {
            break;
        }
        let r = d.sqrt();
        v[(k, k)] = C64::from(r);
        for i in k + 1..4 {
            v[(i, k)] = s[(i, k)] / r;
        }
        for i in k + 1..4 {
            for j in k + 1..4 {
                s[(i, j)] -= v[(i, k)] * v[(j, k)].conj();
            }
        }
    }
    let mut out = Mat4::zeros();
    for (row, &orig) in perm.iter().enumerate() {
        out.set_row(orig, &v.row(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = paulis();
        assert!((x * y - z * I).norm() < 1e-15);
        assert!((x * x - Mat2::identity()).norm() < 1e-15);
    }

    #[test]
    fn kron_layout() {
        let k = kron(&sigma_z(), &sigma_x());
        // |k i⟩ = |0 0⟩ maps to |0 1⟩ with weight +1, |1 0⟩ to |1 1⟩ with -1.
        assert_eq!(k[(1, 0)], ONE);
        assert_eq!(k[(3, 2)], -ONE);
    }

    #[test]
    fn rotation_is_unitary() {
        let r = su2_rotation([0.0, 0.6, 0.8], 1.3);
        assert!((r * r.adjoint() - Mat2::identity()).norm() < 1e-14);
    }

    #[test]
    fn psd_factor_reproduces_the_matrix() {
        let a = Mat4::from_fn(|r, c| C64::new((r + 2 * c) as f64 * 0.1, (r as f64 - c as f64) * 0.2));
        let m = a * a.adjoint();
        let v = psd_factor4(&m);
        assert!((v * v.adjoint() - m).norm() < 1e-13);
        let rank_one = Mat4::from_fn(|r, c| C64::new((r + 1) as f64, 0.0) * C64::new((c + 1) as f64, 0.0));
        let v = psd_factor4(&rank_one);
        assert!((v * v.adjoint() - rank_one).norm() < 1e-13);
    }
}
