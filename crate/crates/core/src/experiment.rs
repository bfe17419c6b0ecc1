//! Parameter sweeps and studies built on either engine.
//!
//! Every runner evaluates its points through [`par::map`], so rows come
//! back in grid order whatever the execution mode.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactdiag::{EdChannel, EdOptions};
use crate::freefermion::{
    choi_xy_matrix, concurrence_xy, oaf_xy, wrap_phase, xx_peak_estimate, ChannelSnapshot, FreeFermionChannel,
};
use crate::metrics::{arrival_time, window_maximum, m_matrix, oaf, wootters_concurrence, ChoiMatrix, Peak, TimeWindow};
use crate::model::{ChainConfig, ChainSpec, InitialState, ModelKind};
use crate::par::{self, Execution};

/// Classical limit of the average fidelity.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Golden-section tolerance on `t*`, in units of `1/J`.
pub const PEAK_REFINE_TOL: f64 = 1e-4;

/// Largest channel the exact engine runs without `stretch`.
pub const ED_DESK_MAX_N: usize = 14;

/// Largest channel used for cross-engine validation.
pub const CROSS_VALIDATE_MAX_N: usize = 8;

/// Cross-engine agreement required on every quantity.
pub const CROSS_VALIDATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Auto,
    #[serde(rename = "ff", alias = "freefermion")]
    FreeFermion,
    #[serde(rename = "ed", alias = "exactdiag")]
    ExactDiag,
}

impl Engine {
    /// The engine actually used for a model.
    pub fn resolve(self, kind: ModelKind) -> Result<Engine> {
        match (self, kind) {
            (Engine::Auto, ModelKind::Xy) => Ok(Engine::FreeFermion),
            (Engine::Auto, ModelKind::Xxz) => Ok(Engine::ExactDiag),
            (Engine::FreeFermion, ModelKind::Xxz) => {
                Err(Error::Config("the free-fermion engine only handles the xy model".into()))
            }
            (e, _) => Ok(e),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::FreeFermion => "ff",
            Engine::ExactDiag => "ed",
        }
    }
}

/// Merit whose first peak defines the arrival time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakMetric {
    #[default]
    Oaf,
    Concurrence,
}

impl PeakMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            PeakMetric::Oaf => "oaf",
            PeakMetric::Concurrence => "concurrence",
        }
    }
}

/// Figures of merit at one time. `u`, `w` and `A` are only available from
/// the free-fermion engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelPoint {
    pub t: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub u: Option<f64>,
    pub w: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
}

impl ChannelPoint {
    fn metric(&self, m: PeakMetric) -> f64 {
        match m {
            PeakMetric::Oaf => self.f,
            PeakMetric::Concurrence => self.c,
        }
    }
}

/// A channel that can be probed at arbitrary times.
pub trait ChannelEvaluator: Send {
    fn engine(&self) -> Engine;
    fn point(&mut self, t: f64) -> Result<ChannelPoint>;
}

impl ChannelEvaluator for FreeFermionChannel {
    fn engine(&self) -> Engine {
        Engine::FreeFermion
    }

    fn point(&mut self, t: f64) -> Result<ChannelPoint> {
        let s = self.snapshot(t)?;
        Ok(ChannelPoint { t, f: oaf_xy(&s), c: concurrence_xy(&s), u: Some(s.u), w: Some(s.w), a: Some(s.a) })
    }
}

impl ChannelEvaluator for EdChannel {
    fn engine(&self) -> Engine {
        Engine::ExactDiag
    }

    fn point(&mut self, t: f64) -> Result<ChannelPoint> {
        let choi = self.choi(t)?;
        Ok(ChannelPoint {
            t,
            f: oaf(&m_matrix(&choi)),
            c: wootters_concurrence(&choi.pair_state())?,
            u: None,
            w: None,
            a: None,
        })
    }
}

pub fn evaluator(
    spec: &ChainSpec,
    init: InitialState,
    engine: Engine,
    ed: EdOptions,
) -> Result<Box<dyn ChannelEvaluator>> {
    Ok(match engine.resolve(spec.kind())? {
        Engine::FreeFermion => Box::new(FreeFermionChannel::new(spec, init)?),
        _ => Box::new(EdChannel::with_options(spec, init, ed)?),
    })
}

/// First peak of `metric` and the channel at that time. A series that never
/// rises above its starting value falls back to its window maximum.
pub fn find_arrival(
    eval: &mut dyn ChannelEvaluator,
    metric: PeakMetric,
    window: TimeWindow,
    refine_tol: f64,
) -> Result<(Peak, ChannelPoint)> {
    let mut merit = |t| eval.point(t).map(|p| p.metric(metric));
    let peak = match arrival_time(&mut merit, window, refine_tol) {
        Err(Error::NoPeak { .. }) => window_maximum(&mut merit, window, refine_tol)?,
        other => other?,
    };
    let point = eval.point(peak.t)?;
    Ok((peak, point))
}

/// Inclusive arithmetic range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !self.step.is_finite() || self.step <= 0.0 || !self.start.is_finite() || !self.stop.is_finite() || self.stop < self.start {
            return Err(Error::Config(format!("bad range {self:?}")));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    TimeSeries,
    GammaHGrid,
    DeltaSweep,
    NScaling,
    AsymptoticsCheck,
    CrossValidate,
}

fn default_inits() -> Vec<InitialState> {
    Vec::new()
}

fn default_samples() -> usize {
    10
}

/// A full experiment description, as read from a JSON config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Base chain; swept parameters override its fields.
    pub chain: ChainConfig,
    #[serde(default)]
    pub gamma_range: Option<Range>,
    #[serde(default)]
    pub h_range: Option<Range>,
    #[serde(default)]
    pub delta_range: Option<Range>,
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    /// Initializations to run; empty means the chain's own `init`.
    #[serde(default = "default_inits")]
    pub inits: Vec<InitialState>,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default)]
    pub metric: PeakMetric,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
    /// Random tuples drawn by cross-validation.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub stretch: bool,
    /// Record per-row wall time (makes output non-reproducible).
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, chain: ChainConfig) -> Self {
        Self {
            experiment,
            chain,
            gamma_range: None,
            h_range: None,
            delta_range: None,
            n_list: None,
            inits: Vec::new(),
            engine: Engine::Auto,
            metric: PeakMetric::Oaf,
            seed: 0,
            t_max: None,
            dt: None,
            samples: default_samples(),
            stretch: false,
            timing: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.chain.spec()?;
        Ok(cfg)
    }

    pub fn inits(&self) -> Vec<InitialState> {
        if self.inits.is_empty() {
            vec![self.chain.init]
        } else {
            self.inits.clone()
        }
    }

    pub fn window(&self, spec: &ChainSpec) -> Result<TimeWindow> {
        let mut w = TimeWindow::for_chain(spec);
        if let Some(t) = self.t_max {
            w.t_max = t;
        }
        if let Some(dt) = self.dt {
            w.dt = dt;
        }
        if !(w.dt > 0.0 && w.t_max > 2.0 * w.dt) {
            return Err(Error::Config(format!("bad time window {w:?}")));
        }
        Ok(w)
    }
}

/// One output line of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub model: ModelKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub h: f64,
    pub init: InitialState,
    pub engine: Engine,
    pub t_star: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub u: Option<f64>,
    pub w: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub peak_metric: PeakMetric,
    pub wall_time: Option<f64>,
}

pub const CSV_HEADER: [&str; 15] =
    ["model", "N", "gamma", "delta", "h", "init", "engine", "t_star", "F", "C", "u", "w", "A", "peak_metric", "wall_time"];

/// Range slack on `F` and `C`.
pub const ROW_TOL: f64 = 1e-9;

impl ResultRow {
    pub fn check(&self) -> Result<()> {
        let ok_f = self.f >= 0.5 - ROW_TOL && self.f <= 1.0 + ROW_TOL;
        let ok_c = self.c >= -ROW_TOL && self.c <= 1.0 + ROW_TOL;
        let ff_fields = self.u.is_some() && self.w.is_some() && self.a.is_some();
        let ok_fields = ff_fields == (self.engine == Engine::FreeFermion);
        if ok_f && ok_c && ok_fields {
            Ok(())
        } else {
            Err(Error::Validation(format!("row out of range: {self:?}")))
        }
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.model.as_str().into(),
            self.n.to_string(),
            opt(self.gamma),
            opt(self.delta),
            self.h.to_string(),
            self.init.as_str().into(),
            self.engine.as_str().into(),
            self.t_star.to_string(),
            self.f.to_string(),
            self.c.to_string(),
            opt(self.u),
            opt(self.w),
            opt(self.a),
            self.peak_metric.as_str().into(),
            opt(self.wall_time),
        ]
    }
}

/// Arrival-time row for one chain and initialization.
pub fn evaluate_point(
    spec: &ChainSpec,
    init: InitialState,
    cfg: &ExperimentConfig,
    ed: EdOptions,
) -> Result<ResultRow> {
    let start = Instant::now();
    let mut eval = evaluator(spec, init, cfg.engine, ed)?;
    let (_, p) = find_arrival(eval.as_mut(), cfg.metric, cfg.window(spec)?, PEAK_REFINE_TOL / spec.j().abs())?;
    let row = ResultRow {
        model: spec.kind(),
        n: spec.n(),
        gamma: spec.gamma(),
        delta: spec.delta(),
        h: spec.h(),
        init,
        engine: eval.engine(),
        t_star: p.t,
        f: p.f,
        c: p.c,
        u: p.u,
        w: p.w,
        a: p.a,
        peak_metric: cfg.metric,
        wall_time: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    };
    row.check()?;
    Ok(row)
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

fn ed_options(exec: Execution) -> EdOptions {
    EdOptions { exec, ..EdOptions::default() }
}

/// Uniformly sampled channel plus the detected arrival.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub points: Vec<ChannelPoint>,
    pub peak: Option<ResultRow>,
}

pub fn run_time_series(cfg: &ExperimentConfig, exec: Execution) -> Result<TimeSeries> {
    let spec = cfg.chain.spec()?;
    let init = cfg.inits()[0];
    let window = cfg.window(&spec)?;
    let mut eval = evaluator(&spec, init, cfg.engine, ed_options(exec))?;
    let mut points = Vec::with_capacity(window.samples());
    for i in 0..window.samples() {
        points.push(eval.point(window.time(i))?);
    }
    let peak = match evaluate_point(&spec, init, cfg, ed_options(exec)) {
        Ok(row) => Some(row),
        Err(Error::NoPeak { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TimeSeries { points, peak })
}

/// Grid rows in `(init, γ, h)` order with `h` fastest, and the grid point
/// maximizing `u(t*)` (or `F(t*)` without `u`) for the first initialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub rows: Vec<ResultRow>,
    pub argmax: Option<GridArgmax>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridArgmax {
    pub gamma_index: usize,
    pub h_index: usize,
    pub gamma: f64,
    pub h: f64,
    pub value: f64,
}

pub fn run_gamma_h_grid(cfg: &ExperimentConfig, exec: Execution) -> Result<GridResult> {
    let base = cfg.chain.spec()?;
    if base.kind() != ModelKind::Xy {
        return Err(Error::WrongModel { expected: "xy" });
    }
    let gammas = cfg.gamma_range.map(|r| r.values()).transpose()?.unwrap_or_else(|| vec![base.gamma().unwrap_or(0.0)]);
    let hs = cfg.h_range.map(|r| r.values()).transpose()?.unwrap_or_else(|| vec![base.h()]);
    let inits = cfg.inits();
    let mut points = Vec::new();
    for &init in &inits {
        for (gi, &g) in gammas.iter().enumerate() {
            for (hi, &h) in hs.iter().enumerate() {
                points.push((init, gi, hi, ChainSpec::new(ModelKind::Xy, base.n(), base.j(), g, h)?));
            }
        }
    }
    let rows = collect(par::map(exec, &points, |(init, _, _, spec)| {
        evaluate_point(spec, *init, cfg, ed_options(Execution::Sequential))
    }))?;
    let per_init = gammas.len() * hs.len();
    let argmax = rows[..per_init.min(rows.len())]
        .iter()
        .zip(&points)
        .map(|(r, p)| (r.u.unwrap_or(r.f), p))
        .fold(None::<(f64, &(InitialState, usize, usize, ChainSpec))>, |best, (v, p)| match best {
            Some((bv, _)) if bv >= v => best,
            _ => Some((v, p)),
        })
        .map(|(value, &(_, gi, hi, _))| GridArgmax { gamma_index: gi, h_index: hi, gamma: gammas[gi], h: hs[hi], value });
    Ok(GridResult { rows, argmax })
}

/// `F(t*)`, `C(t*)` against `Δ` for each initialization, rows in
/// `(Δ, init)` order.
pub fn run_delta_sweep(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<ResultRow>> {
    let base = cfg.chain.spec()?;
    if base.kind() != ModelKind::Xxz {
        return Err(Error::WrongModel { expected: "xxz" });
    }
    if base.n() > ED_DESK_MAX_N && !cfg.stretch {
        return Err(Error::Config(format!(
            "N = {} exceeds {ED_DESK_MAX_N} for the exact engine; pass --stretch to run it anyway",
            base.n()
        )));
    }
    let deltas = cfg.delta_range.map(|r| r.values()).transpose()?.unwrap_or_else(|| vec![base.delta().unwrap_or(0.0)]);
    let mut points = Vec::new();
    for &d in &deltas {
        for &init in &cfg.inits() {
            points.push((init, ChainSpec::new(ModelKind::Xxz, base.n(), base.j(), d, base.h())?));
        }
    }
    let ed = EdOptions { exec, ..EdOptions::default() };
    collect(par::map(exec, &points, |(init, spec)| evaluate_point(spec, *init, cfg, ed)))
}

/// Rows in `(N, init)` order.
pub fn run_n_scaling(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<ResultRow>> {
    let base = cfg.chain.spec()?;
    let ns = cfg.n_list.clone().unwrap_or_else(|| vec![base.n()]);
    let mut points = Vec::new();
    for &n in &ns {
        for &init in &cfg.inits() {
            points.push((init, base.with_n(n)?));
        }
    }
    if let Ok(Engine::ExactDiag) = cfg.engine.resolve(base.kind()) {
        if let Some(&big) = ns.iter().filter(|&&n| n > ED_DESK_MAX_N).max() {
            if !cfg.stretch {
                return Err(Error::Config(format!("N = {big} is beyond desk scale for the exact engine; use --stretch")));
            }
        }
    }
    collect(par::map(exec, &points, |(init, spec)| evaluate_point(spec, *init, cfg, ed_options(Execution::Sequential))))
}

/// First `N` of an increasing list at which `F(t*)` drops below 2/3 after
/// having been above it.
pub fn classical_crossing(rows: &[ResultRow]) -> Option<usize> {
    let mut above = false;
    for r in rows {
        if r.f > CLASSICAL_FIDELITY {
            above = true;
        } else if above {
            return Some(r.n);
        }
    }
    None
}

/// Exact XX arrival against the large-`N` formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub u_exact: f64,
    pub u_formula: f64,
    pub u_rel_err: f64,
    pub beta_exact: f64,
    pub beta_formula: f64,
    pub beta_rel_err: f64,
}

pub fn asymptotic_row(n: usize, j: f64) -> Result<AsymptoticRow> {
    let spec = ChainSpec::new(ModelKind::Xy, n, j, 0.0, 0.0)?;
    let mut ch = FreeFermionChannel::new(&spec, InitialState::FerroDown)?;
    let window = TimeWindow::for_chain(&spec);
    let peak = arrival_time(|t| ch.point(t).map(|p| p.u.unwrap_or(0.0)), window, PEAK_REFINE_TOL / j.abs())?;
    let (beta_formula, u_formula) = xx_peak_estimate(n);
    let beta_exact = 2.0 * j.abs() * peak.t;
    Ok(AsymptoticRow {
        n,
        u_exact: peak.value,
        u_formula,
        u_rel_err: (peak.value - u_formula).abs() / u_formula,
        beta_exact,
        beta_formula,
        beta_rel_err: (beta_exact - beta_formula).abs() / beta_formula,
    })
}

pub fn run_asymptotics(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<AsymptoticRow>> {
    let ns = cfg.n_list.clone().unwrap_or_else(|| vec![50, 100, 200]);
    let j = cfg.chain.j;
    collect(par::map(exec, &ns, |&n| asymptotic_row(n, j)))
}

/// Largest free-fermion vs exact deviation of each quantity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Deviations {
    pub choi: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub u: f64,
    pub w: f64,
    pub phi_u: f64,
    pub phi_w: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Deviations {
    pub fn max(&self) -> f64 {
        [self.choi, self.f, self.c, self.u, self.w, self.phi_u, self.phi_w, self.a].into_iter().fold(0.0, f64::max)
    }

    fn merge(&mut self, o: &Deviations) {
        self.choi = self.choi.max(o.choi);
        self.f = self.f.max(o.f);
        self.c = self.c.max(o.c);
        self.u = self.u.max(o.u);
        self.w = self.w.max(o.w);
        self.phi_u = self.phi_u.max(o.phi_u);
        self.phi_w = self.phi_w.max(o.phi_w);
        self.a = self.a.max(o.a);
    }
}

/// One random comparison point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationTuple {
    pub model: ModelKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub anisotropy: f64,
    pub h: f64,
    pub t: f64,
    pub init: InitialState,
    pub deviations: Deviations,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tuples: Vec<ValidationTuple>,
    pub max: Deviations,
    pub tolerance: f64,
    pub pass: bool,
}

/// Test-only sabotage of the free-fermion side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corruption {
    #[default]
    None,
    /// Add π to `φ_u`, i.e. use the other parity convention.
    FlipPhaseU,
}

/// Channel parameters read back from a Choi matrix of XY form.
pub fn snapshot_from_choi(choi: &ChoiMatrix, t: f64, parity: u8) -> ChannelSnapshot {
    let m = choi.matrix();
    let (eu, ew) = (m[(0, 3)], m[(1, 2)]);
    let u = eu.norm();
    ChannelSnapshot { t, u, w: ew.norm(), phi_u: eu.arg(), phi_w: ew.arg(), a: m[(0, 0)].re - u * u, parity }
}

fn phase_gap(a: f64, b: f64, weight: f64) -> f64 {
    // Phases are only meaningful where the amplitude is.
    if weight < 1e-6 {
        0.0
    } else {
        wrap_phase(a - b).abs()
    }
}

/// Compare both engines on one XY chain (or an XXZ chain at `Δ = 0`
/// against its XX counterpart) at one time.
pub fn compare_engines(spec: &ChainSpec, init: InitialState, t: f64, corruption: Corruption) -> Result<Deviations> {
    let ff_spec = match spec.kind() {
        ModelKind::Xy => *spec,
        ModelKind::Xxz => {
            if spec.delta() != Some(0.0) {
                return Err(Error::Config("only Δ = 0 has a free-fermion counterpart".into()));
            }
            ChainSpec::new(ModelKind::Xy, spec.n(), spec.j(), 0.0, spec.h())?
        }
    };
    let ff = FreeFermionChannel::new(&ff_spec, init)?;
    let mut s = ff.snapshot(t)?;
    if corruption == Corruption::FlipPhaseU {
        s.phi_u = wrap_phase(s.phi_u + PI);
    }
    let mut ed = EdChannel::new(spec, init)?;
    let choi_ed = ed.choi(t)?;
    let e = snapshot_from_choi(&choi_ed, t, s.parity);
    let choi_ff = ChoiMatrix::new_unchecked(choi_xy_matrix(&s));
    let choi_dev = (choi_ff.matrix() - choi_ed.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let f_ed = oaf(&m_matrix(&choi_ed));
    let c_ed = wootters_concurrence(&choi_ed.pair_state())?;
    Ok(Deviations {
        choi: choi_dev,
        f: (oaf_xy(&s) - f_ed).abs(),
        c: (concurrence_xy(&s) - c_ed).abs(),
        u: (s.u - e.u).abs(),
        w: (s.w - e.w).abs(),
        phi_u: phase_gap(s.phi_u, e.phi_u, s.u.min(e.u)),
        phi_w: phase_gap(s.phi_w, e.phi_w, s.w.min(e.w)),
        a: (s.a - e.a).abs(),
    })
}

/// Random `(γ, h, t, init)` tuples on the configured chain.
pub fn run_cross_validate(cfg: &ExperimentConfig, exec: Execution, corruption: Corruption) -> Result<ValidationReport> {
    let base = cfg.chain.spec()?;
    if base.n() > CROSS_VALIDATE_MAX_N {
        return Err(Error::Config(format!("cross-validation needs N ≤ {CROSS_VALIDATE_MAX_N}, got {}", base.n())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let allowed: Vec<InitialState> =
        if cfg.inits.is_empty() { InitialState::STANDARD.to_vec() } else { cfg.inits.clone() };
    let allowed: Vec<InitialState> = allowed.into_iter().filter(|i| i.check(&base).is_ok()).collect();
    if allowed.is_empty() {
        return Err(Error::Config("no initialization is valid for this chain".into()));
    }
    let window = cfg.window(&base)?;
    let mut draws = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let spec = match base.kind() {
            ModelKind::Xy => ChainSpec::new(
                ModelKind::Xy,
                base.n(),
                base.j(),
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..2.0),
            )?,
            ModelKind::Xxz => ChainSpec::new(ModelKind::Xxz, base.n(), base.j(), 0.0, rng.random_range(0.0..2.0))?,
        };
        let t = rng.random_range(0.0..window.t_max);
        let init = allowed[rng.random_range(0..allowed.len())];
        draws.push((spec, t, init));
    }
    let tuples = collect(par::map(exec, &draws, |&(spec, t, init)| {
        compare_engines(&spec, init, t, corruption).map(|deviations| ValidationTuple {
            model: spec.kind(),
            n: spec.n(),
            anisotropy: spec.gamma().or(spec.delta()).unwrap_or(0.0),
            h: spec.h(),
            t,
            init,
            deviations,
        })
    }))?;
    let mut max = Deviations::default();
    for t in &tuples {
        max.merge(&t.deviations);
    }
    Ok(ValidationReport { pass: max.max() < CROSS_VALIDATE_TOL, tuples, max, tolerance: CROSS_VALIDATE_TOL })
}
