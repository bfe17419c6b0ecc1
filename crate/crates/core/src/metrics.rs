//! Model-independent channel quality measures.
//!
//! Everything here works from the 4×4 Choi matrix
//! `⟨k i|C|l j⟩ = ⟨i|E(|k⟩⟨l|)|j⟩` (input index `k` on the high bit), so the
//! same code scores channels from either engine.

use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, paulis, Mat2, Mat4, C64};
use crate::par::{self, Execution};

/// Tolerance used when checking that a Choi matrix describes a CPTP map.
pub const CHOI_TOL: f64 = 1e-9;

/// `|det M|` below this counts as zero when taking its sign.
pub const DET_SIGN_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiMatrix(Mat4);

impl ChoiMatrix {
    /// Wrap a matrix and check it is Hermitian, PSD and trace preserving.
    pub fn new(m: Mat4) -> Result<Self> {
        let c = Self(m);
        c.validate(CHOI_TOL)?;
        Ok(c)
    }

    pub fn new_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn identity_channel() -> Self {
        let mut m = Mat4::zeros();
        for &(r, c) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(r, c)] = linalg::ONE;
        }
        Self(m)
    }

    /// Channel that replaces every input by `I/2`.
    pub fn fully_depolarizing() -> Self {
        Self(Mat4::identity() * C64::from(0.5))
    }

    /// Assemble from the four images `E(|k⟩⟨l|)`, indexed `[k][l]`.
    pub fn from_images(images: &[[Mat2; 2]; 2]) -> Self {
        Self(Mat4::from_fn(|r, c| images[r / 2][c / 2][(r % 2, c % 2)]))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `E(|k⟩⟨l|)`.
    pub fn image(&self, k: usize, l: usize) -> Mat2 {
        Mat2::from_fn(|i, j| self.0[(2 * k + i, 2 * l + j)])
    }

    /// Apply the channel to a single-qubit operator.
    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for k in 0..2 {
            for l in 0..2 {
                out += self.image(k, l) * rho[(k, l)];
            }
        }
        out
    }

    /// `(I ⊗ E)[|Φ+⟩⟨Φ+|] = C/2`, the state of the pair 0'–N.
    pub fn pair_state(&self) -> Mat4 {
        self.0 * C64::from(0.5)
    }

    /// Largest violations of (Hermiticity, positivity, trace, partial trace).
    pub fn violations(&self) -> ChoiViolations {
        let m = &self.0;
        let hermitian = linalg::hermiticity_residual4(m);
        let min_ev = linalg::hermitian_eigenvalues4(m)[0];
        let trace = (m.trace() - C64::from(2.0)).norm();
        let mut partial = 0.0f64;
        for k in 0..2 {
            for l in 0..2 {
                let tr = m[(2 * k, 2 * l)] + m[(2 * k + 1, 2 * l + 1)];
                let target = if k == l { 1.0 } else { 0.0 };
                partial = partial.max((tr - C64::from(target)).norm());
            }
        }
        ChoiViolations { hermitian, negativity: (-min_ev).max(0.0), trace, partial_trace: partial }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let v = self.violations();
        for (property, violation) in [
            ("hermiticity", v.hermitian),
            ("positivity", v.negativity),
            ("trace", v.trace),
            ("trace preservation", v.partial_trace),
        ] {
            if violation.is_nan() || violation > tol {
                return Err(Error::ChoiViolation { property, violation });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiViolations {
    pub hermitian: f64,
    pub negativity: f64,
    pub trace: f64,
    pub partial_trace: f64,
}

/// `M_mn = Tr[σ_m E(σ_n)]`, normalized so the identity channel gives `2I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MMatrix(pub Matrix3<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetSign {
    pub sign: i8,
    /// `|det M|` fell below [`DET_SIGN_CUTOFF`] and `+1` was used.
    pub defaulted: bool,
}

impl MMatrix {
    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> [f64; 3] {
        let mut s: Vec<f64> = self.0.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        [s[0], s[1], s[2]]
    }

    pub fn det_sign(&self) -> DetSign {
        let det = self.0.determinant();
        if det.abs() < DET_SIGN_CUTOFF {
            DetSign { sign: 1, defaulted: true }
        } else {
            DetSign { sign: if det > 0.0 { 1 } else { -1 }, defaulted: false }
        }
    }
}

pub fn m_matrix(choi: &ChoiMatrix) -> MMatrix {
    let p = paulis();
    let c = choi.matrix();
    let mut m = Matrix3::zeros();
    for (row, sm) in p.iter().enumerate() {
        for (col, sn) in p.iter().enumerate() {
            // σ_nᵀ = ±σ_n: minus for σy.
            let sign = if col == 1 { -1.0 } else { 1.0 };
            m[(row, col)] = sign * (c * kron(sn, sm)).trace().re;
        }
    }
    MMatrix(m)
}

/// Optimal average fidelity: the Bloch-sphere averaged fidelity maximized
/// over a unitary correction at the receiving end.
pub fn oaf(m: &MMatrix) -> f64 {
    let [m1, m2, m3] = m.singular_values();
    0.5 + (m1 + m2 + f64::from(m.det_sign().sign) * m3) / 12.0
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

const MC_CHUNK: usize = 4096;

/// `∫dψ ⟨ψ|R E(|ψ⟩⟨ψ|) R†|ψ⟩` over Haar-random pure states, i.e. the
/// average fidelity of the channel followed by the correction `R`.
///
/// Samples are drawn in fixed chunks, each from its own ChaCha stream, so
/// the estimate depends only on `(samples, seed)` and not on the thread
/// count or execution mode.
pub fn haar_average_fidelity(
    choi: &ChoiMatrix,
    rotation: &Mat2,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if samples < 1000 {
        return Err(Error::Config(format!("need at least 1000 samples, got {samples}")));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial = par::map_range(exec, chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = MC_CHUNK.min(samples - c * MC_CHUNK);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..count {
            let psi = haar_qubit(&mut rng);
            let rho = Mat2::from_fn(|i, j| psi[i] * psi[j].conj());
            let out = choi.apply(&rho);
            // φ = R†ψ
            let phi = [
                rotation[(0, 0)].conj() * psi[0] + rotation[(1, 0)].conj() * psi[1],
                rotation[(0, 1)].conj() * psi[0] + rotation[(1, 1)].conj() * psi[1],
            ];
            let mut f = C64::from(0.0);
            for i in 0..2 {
                for j in 0..2 {
                    f += phi[i].conj() * out[(i, j)] * phi[j];
                }
            }
            sum += f.re;
            sum_sq += f.re * f.re;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = partial.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(Estimate { mean, stderr: (var / n).sqrt(), samples })
}

fn haar_qubit(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut g = [0.0f64; 4];
    for x in &mut g {
        *x = StandardNormal.sample(rng);
    }
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    [C64::new(g[0] / norm, g[1] / norm), C64::new(g[2] / norm, g[3] / norm)]
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &Mat4) -> Result<f64> {
    check_density(rho)?;
    let [_, sy, _] = paulis();
    let yy = kron(&sy, &sy);
    // With ρ = V V†, the square roots of eig(ρ ρ̃) are the singular values
    // of τ = V† (σy⊗σy) V*.
    let v = linalg::psd_factor4(rho);
    let tau = v.adjoint() * yy * v.conjugate();
    let mut l: Vec<f64> = tau.singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

fn check_density(rho: &Mat4) -> Result<()> {
    let herm = linalg::hermiticity_residual4(rho);
    let tr = (rho.trace() - C64::from(1.0)).norm();
    let min_ev = linalg::hermitian_eigenvalues4(rho)[0];
    if herm > 1e-9 || tr > 1e-9 || min_ev < -1e-9 {
        return Err(Error::InvalidState(format!(
            "hermiticity {herm:e}, trace error {tr:e}, min eigenvalue {min_ev:e}"
        )));
    }
    Ok(())
}

/// Correlation matrix `T_mn = Tr[ρ σ_m ⊗ σ_n]`.
pub fn correlation_matrix(rho: &Mat4) -> Matrix3<f64> {
    let p = paulis();
    Matrix3::from_fn(|m, n| (rho * kron(&p[m], &p[n])).trace().re)
}

/// Largest overlap of `ρ` with a maximally entangled state, from the
/// singular values of its correlation matrix.
pub fn max_entangled_fraction(rho: &Mat4) -> f64 {
    let t = MMatrix(correlation_matrix(rho));
    let [t1, t2, t3] = t.singular_values();
    0.25 * (1.0 + t1 + t2 - f64::from(t.det_sign().sign) * t3)
}

/// Sampling grid for arrival-time searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t_max: f64,
    pub dt: f64,
}

impl TimeWindow {
    /// `t_max = 1.5 (N+1) / (2J)`, `dt = 0.1 / J`.
    pub fn for_chain(spec: &crate::ChainSpec) -> Self {
        let j = spec.j().abs();
        Self { t_max: 1.5 * (spec.n() as f64 + 1.0) / (2.0 * j), dt: 0.1 / j }
    }

    pub fn samples(&self) -> usize {
        (self.t_max / self.dt + 1e-9).floor() as usize + 1
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }
}

/// Minimum rise above `f(0)` for a local maximum to count as arrival.
pub const PEAK_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub value: f64,
}

/// Locate the first peak of `merit` on the window and refine it by
/// golden-section search to `refine_tol`.
///
/// `merit` is called at the sample times in increasing order and then only
/// inside the bracketing interval.
pub fn arrival_time<F>(mut merit: F, window: TimeWindow, refine_tol: f64) -> Result<Peak>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = window.samples();
    let f0 = merit(0.0)?;
    let mut prev2 = f0;
    let mut prev = if n > 1 { merit(window.time(1))? } else { f0 };
    let mut bracket = None;
    for i in 2..n {
        let cur = merit(window.time(i))?;
        if prev >= prev2 && prev > cur && prev > f0 + PEAK_THRESHOLD {
            bracket = Some((i - 1, prev));
            break;
        }
        prev2 = prev;
        prev = cur;
    }
    let Some((i, fi)) = bracket else {
        return Err(Error::NoPeak { t_max: window.t_max });
    };
    golden_max(&mut merit, window.time(i - 1), window.time(i + 1), Peak { t: window.time(i), value: fi }, refine_tol)
}

/// Global maximum of the sampled series, refined like [`arrival_time`].
/// Used where a sweep must produce a row even without a first peak.
pub fn window_maximum<F>(mut merit: F, window: TimeWindow, refine_tol: f64) -> Result<Peak>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = window.samples();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        values.push(merit(window.time(i))?);
    }
    let i = (0..n).fold(0, |b, i| if values[i] > values[b] { i } else { b });
    let best = Peak { t: window.time(i), value: values[i] };
    if i == 0 || i + 1 == n {
        return Ok(best);
    }
    golden_max(&mut merit, window.time(i - 1), window.time(i + 1), best, refine_tol)
}

fn golden_max<F>(merit: &mut F, mut a: f64, mut b: f64, mut best: Peak, tol: f64) -> Result<Peak>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = merit(c)?;
    let mut fd = merit(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = merit(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = merit(d)?;
        }
        for (t, v) in [(c, fc), (d, fd)] {
            if v > best.value {
                best = Peak { t, value: v };
            }
        }
    }
    Ok(best)
}
