//! Hamiltonian family, probe attachment and the shared domain types.
//!
//! The channel is an open chain of `N` spins on sites `1..=N`:
//!
//! ```text
//! H_ch = Σ_{l=1}^{N-1} (Jx σx_l σx_{l+1} + Jy σy_l σy_{l+1} + Jz σz_l σz_{l+1}) + h Σ_l σz_l
//! ```
//!
//! The probe qubit sits on site 0 and couples to site 1 with the same
//! exchange integrals and field. `|0⟩` is spin up (σz = +1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|n| ≤ 1` for Bloch vectors.
pub const BLOCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Xy,
    Xxz,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Xy => "xy",
            ModelKind::Xxz => "xxz",
        }
    }
}

/// Exchange integrals `(Jx, Jy, Jz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

/// Channel geometry and Hamiltonian parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    kind: ModelKind,
    n: usize,
    j: f64,
    /// γ for XY, Δ for XXZ.
    anisotropy: f64,
    h: f64,
}

impl ChainSpec {
    /// XY chain with `J = 1`.
    pub fn xy(n: usize, gamma: f64, h: f64) -> Result<Self> {
        Self::new(ModelKind::Xy, n, 1.0, gamma, h)
    }

    /// XXZ chain with `J = 1`.
    pub fn xxz(n: usize, delta: f64, h: f64) -> Result<Self> {
        Self::new(ModelKind::Xxz, n, 1.0, delta, h)
    }

    pub fn new(kind: ModelKind, n: usize, j: f64, anisotropy: f64, h: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 channel spins, got {n}")));
        }
        for (name, v) in [("j", j), ("anisotropy", anisotropy), ("h", h)] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")));
            }
        }
        if j == 0.0 {
            return Err(Error::InvalidSpec("j must be nonzero".into()));
        }
        Ok(Self { kind, n, j, anisotropy, h })
    }

    pub fn with_j(self, j: f64) -> Result<Self> {
        Self::new(self.kind, self.n, j, self.anisotropy, self.h)
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        Self::new(self.kind, n, self.j, self.anisotropy, self.h)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Number of channel spins.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn gamma(&self) -> Option<f64> {
        (self.kind == ModelKind::Xy).then_some(self.anisotropy)
    }

    pub fn delta(&self) -> Option<f64> {
        (self.kind == ModelKind::Xxz).then_some(self.anisotropy)
    }

    /// The exchange integrals of the nearest-neighbour Hamiltonian.
    pub fn couplings(&self) -> Couplings {
        derived_couplings(self)
    }
}

pub fn derived_couplings(spec: &ChainSpec) -> Couplings {
    let j = spec.j;
    match spec.kind {
        ModelKind::Xy => {
            let g = spec.anisotropy;
            Couplings { jx: j * (1.0 + g) / 2.0, jy: j * (1.0 - g) / 2.0, jz: 0.0 }
        }
        ModelKind::Xxz => Couplings { jx: j / 2.0, jy: j / 2.0, jz: j * spec.anisotropy / 2.0 },
    }
}

/// Site count of the simulated system: the channel plus the probe at site 0.
pub fn total_sites(spec: &ChainSpec, with_probe: bool) -> usize {
    spec.n + usize::from(with_probe)
}

/// Channel initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// All spins `|1⟩`; the fermionic vacuum.
    FerroDown,
    /// All spins `|0⟩`.
    FerroUp,
    /// `|0,1,0,1,...⟩`, spin up on site 1.
    Neel,
    /// Singlets on the pairs (1,2), (3,4), ...
    #[serde(rename = "singlets")]
    SingletSeries,
    /// Ground state of the channel Hamiltonian.
    #[serde(rename = "ground")]
    GroundState,
}

impl InitialState {
    pub const ALL: [InitialState; 5] = [
        InitialState::FerroDown,
        InitialState::FerroUp,
        InitialState::Neel,
        InitialState::SingletSeries,
        InitialState::GroundState,
    ];

    /// The four initializations compared throughout: ferromagnetic (down),
    /// Néel, singlet series and ground state.
    pub const STANDARD: [InitialState; 4] = [
        InitialState::FerroDown,
        InitialState::Neel,
        InitialState::SingletSeries,
        InitialState::GroundState,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InitialState::FerroDown => "ferro_down",
            InitialState::FerroUp => "ferro_up",
            InitialState::Neel => "neel",
            InitialState::SingletSeries => "singlets",
            InitialState::GroundState => "ground",
        }
    }

    pub fn check(self, spec: &ChainSpec) -> Result<()> {
        if self == InitialState::SingletSeries && !spec.n().is_multiple_of(2) {
            return Err(Error::OddSingletChain(spec.n()));
        }
        Ok(())
    }
}

impl std::str::FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InitialState::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown initial state {s:?}")))
    }
}

/// Bloch vector of a single-qubit state `(I + n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if v.norm() > 1.0 + BLOCH_TOL || !v.norm().is_finite() {
            return Err(Error::InvalidState(format!("Bloch vector {v:?} outside the unit ball")));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// The flat JSON form of a chain plus its initialization:
/// `{"model", "n", "j", "gamma"?, "delta"?, "h", "init"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub model: ModelKind,
    pub n: usize,
    #[serde(default = "default_j")]
    pub j: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default)]
    pub h: f64,
    pub init: InitialState,
}

fn default_j() -> f64 {
    1.0
}

impl ChainConfig {
    pub fn from_spec(spec: &ChainSpec, init: InitialState) -> Self {
        Self {
            model: spec.kind(),
            n: spec.n(),
            j: spec.j(),
            gamma: spec.gamma(),
            delta: spec.delta(),
            h: spec.h(),
            init,
        }
    }

    pub fn spec(&self) -> Result<ChainSpec> {
        let anisotropy = match self.model {
            ModelKind::Xy => {
                if self.delta.is_some() {
                    return Err(Error::Config("delta given for an xy model".into()));
                }
                self.gamma.unwrap_or(0.0)
            }
            ModelKind::Xxz => {
                if self.gamma.is_some() {
                    return Err(Error::Config("gamma given for an xxz model".into()));
                }
                self.delta.unwrap_or(0.0)
            }
        };
        ChainSpec::new(self.model, self.n, self.j, anisotropy, self.h)
    }
}
