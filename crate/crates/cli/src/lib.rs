//! Experiment harness for the equivariant Szegő kernel library: k-sweeps that
//! compare exact kernels with their leading-order predictions, emitted as
//! CSV tables with a `# key: value` header block.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use eqszego::asymptotics::{
    decay_fit, dimension_limit_integral, dimension_limit_integral_gauss, dominant_period,
    leading_diag, leading_diag_central, leading_near_diag, richardson_fit, Bracket,
};
use eqszego::geometry::{
    dist_to_orbit, hlc_chart, lambda_of, moment, stabilizer, transverse_directions, BundlePoint,
    FiberNorm, ModelSpace, StabilizerInfo, TangentVector,
};
use eqszego::kernels::{
    dimension, equivariant_kernel_quadrature, required_quadrature_degree, KernelEngine,
};
use eqszego::su2_rep::{haar_quadrature, IrrepLabel, Spinor};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub const VERSION: &str = concat!("szego-lab v", env!("CARGO_PKG_VERSION"));

/// Largest `kν` accepted by the quadrature oracle on products.
pub const ORACLE_MAX_KNU: u32 = 15;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] eqszego::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointSpec {
    Generic,
    /// `Z = (0, 1)`, `W = (1, 0)`.
    OrthonormalZW,
    /// `Z = W = (1, 0)`.
    ParallelZW,
    Explicit([Complex64; 4]),
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(Complex64::new(v, 0.0));
    }
    Complex64::from_str(s).ok()
}

impl FromStr for PointSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generic" => Ok(PointSpec::Generic),
            "orthonormal-ZW" => Ok(PointSpec::OrthonormalZW),
            "parallel-ZW" => Ok(PointSpec::ParallelZW),
            _ => {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() != 4 {
                    return Err(ConfigError::Invalid(format!(
                        "point must be generic, orthonormal-ZW, parallel-ZW or Z0,Z1,W0,W1; got {s:?}"
                    )));
                }
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for (o, p) in out.iter_mut().zip(parts) {
                    *o = parse_complex(p).ok_or_else(|| {
                        ConfigError::Invalid(format!("cannot parse complex number {p:?}"))
                    })?;
                }
                Ok(PointSpec::Explicit(out))
            }
        }
    }
}

impl PointSpec {
    pub fn label(&self) -> String {
        match self {
            PointSpec::Generic => "generic".into(),
            PointSpec::OrthonormalZW => "orthonormal-ZW".into(),
            PointSpec::ParallelZW => "parallel-ZW".into(),
            PointSpec::Explicit(c) => c
                .iter()
                .map(|z| z.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    pub fn resolve(&self, model: ModelSpace, seed: u64) -> Result<BundlePoint, ConfigError> {
        let c = |re: f64| Complex64::new(re, 0.0);
        let (z, w) = match self {
            PointSpec::Generic => {
                return Ok(BundlePoint::random(
                    model,
                    &mut ChaCha8Rng::seed_from_u64(seed),
                ))
            }
            PointSpec::OrthonormalZW => (Spinor::new(c(0.0), c(1.0)), Spinor::new(c(1.0), c(0.0))),
            PointSpec::ParallelZW => (Spinor::new(c(1.0), c(0.0)), Spinor::new(c(1.0), c(0.0))),
            PointSpec::Explicit(v) => (Spinor::new(v[0], v[1]), Spinor::new(v[2], v[3])),
        };
        if z.norm() == 0.0 || (w.norm() == 0.0 && matches!(model, ModelSpace::P1xP1 { .. })) {
            return Err(ConfigError::Invalid("spinors must be nonzero".into()));
        }
        let w = if w.norm() == 0.0 {
            Spinor::new(c(1.0), c(0.0))
        } else {
            w
        };
        Ok(BundlePoint::new(model, z, w))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: ModelSpace,
    pub nu: u32,
    pub kmin: u32,
    pub kmax: u32,
    pub kstep: u32,
    pub point: PointSpec,
    pub seed: u64,
    pub tol: Option<f64>,
    pub fiber: FiberNorm,
    pub bracket: Bracket,
    pub out: Option<PathBuf>,
    pub budget: Duration,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelSpace::P1xP1 { r: 2 },
            nu: 1,
            kmin: 10,
            kmax: 50,
            kstep: 1,
            point: PointSpec::Generic,
            seed: 20240601,
            tol: None,
            fiber: FiberNorm::Unit,
            bracket: Bracket::Theorem,
            out: None,
            budget: Duration::from_secs(60),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let ModelSpace::P1xP1 { r } = self.model {
            if r < 2 {
                return Err(ConfigError::Invalid(format!(
                    "--r must be at least 2, got {r}"
                )));
            }
        }
        if self.nu == 0 {
            return Err(ConfigError::Invalid("--nu must be at least 1".into()));
        }
        if self.kmin == 0 || self.kmin > self.kmax {
            return Err(ConfigError::Invalid(format!(
                "k range must satisfy 1 <= kmin <= kmax, got [{}, {}]",
                self.kmin, self.kmax
            )));
        }
        if self.kstep == 0 {
            return Err(ConfigError::Invalid("--kstep must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "--tol must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn ks(&self) -> Vec<u32> {
        (self.kmin..=self.kmax)
            .step_by(self.kstep as usize)
            .collect()
    }

    fn nu_label(&self) -> IrrepLabel {
        IrrepLabel::new(self.nu).expect("validated")
    }

    fn point(&self) -> Result<BundlePoint, ConfigError> {
        self.point.resolve(self.model, self.seed)
    }

    fn header(&self, experiment: &str) -> Vec<(String, String)> {
        let model = match self.model {
            ModelSpace::P1 => "p1".to_string(),
            ModelSpace::P1xP1 { r } => format!("p1xp1 (r = {r})"),
        };
        vec![
            ("experiment".into(), experiment.into()),
            ("version".into(), VERSION.into()),
            ("model".into(), model),
            ("nu".into(), self.nu.to_string()),
            (
                "k_range".into(),
                format!("{}..={} step {}", self.kmin, self.kmax, self.kstep),
            ),
            ("point".into(), self.point.label()),
            ("seed".into(), self.seed.to_string()),
            (
                "volume_normalization".into(),
                "area(P1) = pi, vol(X_r) = r*pi^2".into(),
            ),
            ("fiber_norm".into(), self.fiber.label().into()),
            ("bracket".into(), self.bracket.label().into()),
            (
                "branch_rule".into(),
                "principal sqrt(det B), k-independent".into(),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub k: u32,
    pub exact: f64,
    pub predicted: f64,
    /// `exact/predicted`, NaN when the prediction vanishes.
    pub ratio: f64,
    pub extra: Vec<f64>,
}

impl ResultRow {
    pub fn new(experiment: &str, k: u32, exact: f64, predicted: f64, extra: Vec<f64>) -> Self {
        let ratio = if predicted != 0.0 {
            exact / predicted
        } else {
            f64::NAN
        };
        Self {
            experiment: experiment.into(),
            k,
            exact,
            predicted,
            ratio,
            extra,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<(String, String)>,
    pub extra_columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    /// Derived quantities (fits, periods) appended to the header.
    pub summary: Vec<(String, f64)>,
    pub truncated: bool,
}

impl Table {
    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), ConfigError> {
        for (k, v) in &self.header {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "# truncated: {}", self.truncated)?;
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut cols = vec!["experiment", "k", "exact", "predicted", "ratio"];
        cols.extend(self.extra_columns.iter().map(String::as_str));
        w.write_record(&cols).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![
                row.experiment.clone(),
                row.k.to_string(),
                row.exact.to_string(),
                row.predicted.to_string(),
                row.ratio.to_string(),
            ];
            rec.extend(row.extra.iter().map(f64::to_string));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = vec![];
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

fn csv_err(e: csv::Error) -> ConfigError {
    ConfigError::Io(std::io::Error::other(e))
}

/// Evaluates `f` over `ks` in parallel chunks, stopping once `budget` is spent.
fn sweep<T, F>(ks: &[u32], budget: Duration, f: F) -> Result<(Vec<T>, bool), ConfigError>
where
    T: Send,
    F: Fn(u32) -> Result<T, ConfigError> + Sync,
{
    let start = Instant::now();
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut out = Vec::with_capacity(ks.len());
    for part in ks.chunks(chunk) {
        if start.elapsed() > budget {
            return Ok((out, true));
        }
        let rows: Result<Vec<T>, ConfigError> = part.par_iter().map(|&k| f(k)).collect();
        out.extend(rows?);
    }
    Ok((out, false))
}

/// Exact dimensions against the dimension-limit integral.
pub fn run_dim(cfg: &ExperimentConfig) -> Result<Table, ConfigError> {
    cfg.validate()?;
    let nu = cfg.nu_label();
    let d = cfg.model.dim() as i32;
    let (integral, se) = match cfg.model {
        // λ ≡ 1/2 on ℙ¹
        ModelSpace::P1 => (PI, 0.0),
        ModelSpace::P1xP1 { r } if r % 2 == 0 => {
            let est = dimension_limit_integral(cfg.model, 2_000_000, cfg.seed, false)?;
            (est.value, est.std_error)
        }
        ModelSpace::P1xP1 { .. } => (f64::NAN, f64::NAN),
    };
    let gauss = match cfg.model {
        ModelSpace::P1 => PI,
        ModelSpace::P1xP1 { r } if r % 2 == 0 => dimension_limit_integral_gauss(cfg.model, 32)?,
        ModelSpace::P1xP1 { .. } => f64::NAN,
    };
    let (rows, truncated) = sweep(&cfg.ks(), cfg.budget, |k| {
        let dim = dimension(k, nu, cfg.model) as f64;
        let kn = (k * cfg.nu) as f64;
        let scaled = (PI / kn).powi(d) * dim;
        Ok(ResultRow::new(
            "dim",
            k,
            scaled,
            integral,
            vec![dim, dim / kn.powi(d)],
        ))
    })?;
    let mut summary = vec![
        ("integral_mc".into(), integral),
        ("integral_mc_std_error".into(), se),
        ("integral_gauss".into(), gauss),
    ];
    if let ModelSpace::P1xP1 { r } = cfg.model {
        let rf = r as f64;
        let limit = if r % 2 == 0 { 1.0 } else { 2.0 } / (rf * rf - 1.0);
        summary.push(("dim_over_kn2_limit".into(), limit));
    }
    Ok(Table {
        header: cfg.header("dim"),
        extra_columns: vec!["dimension".into(), "dim_over_kn_pow_d".into()],
        rows,
        summary,
        truncated,
    })
}

/// Exact diagonal values against both leading terms.
pub fn run_diag(cfg: &ExperimentConfig) -> Result<Table, ConfigError> {
    cfg.validate()?;
    let nu = cfg.nu_label();
    let x = cfg.point()?;
    let lambda = lambda_of(&moment(&x))?;
    let d = cfg.model.dim() as i32;
    let engine = KernelEngine::default();
    let (rows, truncated) = sweep(&cfg.ks(), cfg.budget, |k| {
        let exact = engine.equivariant_kernel(k, nu, &x, &x)?.value.re;
        let pred = leading_diag(k, nu, &x, cfg.fiber, cfg.bracket)?;
        let central = pred.central_total();
        let noncentral = pred.noncentral_total();
        let scale = (2.0 * PI * lambda / (cfg.nu * k) as f64).powi(d);
        let residual = exact - central;
        Ok(ResultRow::new(
            "diag",
            k,
            exact,
            central,
            vec![noncentral, residual, residual * scale, noncentral * scale],
        ))
    })?;
    let mut summary = vec![
        ("lambda".into(), lambda),
        ("stabilizer_order".into(), stabilizer(&x).order() as f64),
    ];
    let usable: Vec<&ResultRow> = rows.iter().filter(|r| r.ratio.is_finite()).collect();
    if usable.len() >= 4 {
        let ks: Vec<f64> = usable.iter().map(|r| r.k as f64).collect();
        let ratios: Vec<f64> = usable.iter().map(|r| r.ratio).collect();
        let fit = richardson_fit(&ks, &ratios, 2)?;
        summary.push(("richardson_intercept".into(), fit[0]));
        summary.push(("richardson_c1".into(), fit[1]));
    }
    let scaled: Vec<f64> = rows.iter().map(|r| r.extra[2]).collect();
    if let Some(p) = dominant_period(&scaled) {
        summary.push(("residual_period".into(), p));
    }
    let pred: Vec<f64> = rows.iter().map(|r| r.extra[3]).collect();
    let pp: f64 = pred.iter().map(|p| p * p).sum();
    if pp > 0.0 {
        // best scalar c with residual ≈ c·prediction; c = 1 is exact agreement
        let c = scaled.iter().zip(&pred).map(|(a, b)| a * b).sum::<f64>() / pp;
        summary.push(("noncentral_amplitude_ratio".into(), c));
    }
    Ok(Table {
        header: cfg.header("diag"),
        extra_columns: vec![
            "noncentral".into(),
            "residual".into(),
            "scaled_residual".into(),
            "scaled_noncentral".into(),
        ],
        rows,
        summary,
        truncated,
    })
}

/// Offsets `t` (in units of `1/√k`) sampled by [`run_neardiag`].
pub const NEARDIAG_OFFSETS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// Transverse direction used by [`run_neardiag`]: the first SVD complement of the
/// orbit directions, or the unit vector on ℙ¹.
pub fn neardiag_direction(x: &BundlePoint) -> TangentVector {
    transverse_directions(x)
        .into_iter()
        .next()
        .unwrap_or_else(|| TangentVector(vec![Complex64::new(1.0, 0.0)]))
}

/// Gaussian decay across the orbit, one row per `(k, t)`.
pub fn run_neardiag(cfg: &ExperimentConfig) -> Result<Table, ConfigError> {
    cfg.validate()?;
    let nu = cfg.nu_label();
    let x = cfg.point()?;
    let stab = stabilizer(&x);
    if stab.angles.iter().any(|&t| !StabilizerInfo::is_central(t)) {
        return Err(ConfigError::Core(eqszego::Error::NonCentralStabilizer));
    }
    let lambda = lambda_of(&moment(&x))?;
    let u0 = cfg.nu as f64 / (2.0 * lambda);
    let dir = neardiag_direction(&x);
    let engine = KernelEngine::default();
    let zero = TangentVector::zero(cfg.model.dim());
    let (blocks, truncated) = sweep(&cfg.ks(), cfg.budget, |k| {
        let d0 = engine.equivariant_kernel(k, nu, &x, &x)?.value.re;
        let p0 = leading_near_diag(k, nu, &x, &zero, &zero)?.re;
        let mut rows = vec![ResultRow::new(
            "neardiag",
            k,
            1.0,
            1.0,
            vec![0.0, d0, p0, f64::NAN],
        )];
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for &t in &NEARDIAG_OFFSETS {
            // ±v cancels the first-order drift of Π(y, y) across orbits
            let mut sym = 0.0;
            for sign in [1.0, -1.0] {
                let v = dir.scale(sign * t);
                let y = hlc_chart(&x, &v, k)?;
                sym += -0.5 * (engine.equivariant_kernel(k, nu, &y, &x)?.value.norm() / d0).ln();
            }
            let pred = leading_near_diag(k, nu, &x, &dir.scale(t), &zero)?.norm() / p0;
            let half = t * t / 2.0;
            sxy += sym * half;
            sxx += half * half;
            rows.push(ResultRow::new(
                "neardiag",
                k,
                (-sym).exp(),
                pred,
                vec![t, d0, p0, sym / half],
            ));
        }
        let rate = sxy / sxx;
        for r in rows.iter_mut() {
            r.extra.push(rate);
        }
        Ok(rows)
    })?;
    let rows: Vec<ResultRow> = blocks.into_iter().flatten().collect();
    let last_rate = rows.last().map(|r| r.extra[4]).unwrap_or(f64::NAN);
    Ok(Table {
        header: cfg.header("neardiag"),
        extra_columns: vec![
            "t".into(),
            "exact_diag".into(),
            "predicted_diag".into(),
            "rate_at_t".into(),
            "fitted_rate".into(),
        ],
        rows,
        summary: vec![("u0".into(), u0), ("fitted_rate_last_k".into(), last_rate)],
        truncated,
    })
}

/// Minimum orbit distance demanded of the off-orbit pair in [`run_decay`].
pub const DECAY_MIN_DISTANCE: f64 = 0.3;

/// Second point of the decay experiment: first seeded draw with
/// `dist_to_orbit ≥ DECAY_MIN_DISTANCE`.
pub fn off_orbit_partner(x: &BundlePoint, seed: u64) -> Result<(BundlePoint, f64), ConfigError> {
    let grid = haar_quadrature(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0ff0);
    for _ in 0..200 {
        let y = BundlePoint::random(x.model(), &mut rng);
        let d = dist_to_orbit(x, &y, &grid);
        if d >= DECAY_MIN_DISTANCE {
            return Ok((y, d));
        }
    }
    Err(ConfigError::Invalid("no off-orbit partner found".into()))
}

/// Off-orbit decay with an on-diagonal growth control.
pub fn run_decay(cfg: &ExperimentConfig) -> Result<Table, ConfigError> {
    cfg.validate()?;
    if cfg.model == ModelSpace::P1 {
        return Err(ConfigError::Invalid(
            "decay needs a product model; P1 is a single orbit".into(),
        ));
    }
    let nu = cfg.nu_label();
    let x = cfg.point()?;
    let (y, dist) = off_orbit_partner(&x, cfg.seed)?;
    let engine = KernelEngine::default();
    let (rows, truncated) = sweep(&cfg.ks(), cfg.budget, |k| {
        let off = engine.equivariant_kernel(k, nu, &x, &y)?.value.norm();
        let control = engine.equivariant_kernel(k, nu, &x, &x)?.value.re;
        Ok(ResultRow::new(
            "decay",
            k,
            off,
            f64::NAN,
            vec![dist, control],
        ))
    })?;
    let fit = |lo: u32, hi: u32, col: Option<usize>| -> Result<f64, ConfigError> {
        let sel: Vec<&ResultRow> = rows.iter().filter(|r| r.k >= lo && r.k <= hi).collect();
        let ks: Vec<f64> = sel.iter().map(|r| r.k as f64).collect();
        let ys: Vec<f64> = sel
            .iter()
            .map(|r| col.map_or(r.exact, |c| r.extra[c]))
            .collect();
        Ok(decay_fit(&ks, &ys)?)
    };
    let span = cfg.kmax - cfg.kmin;
    let (lo_hi, hi_lo) = (cfg.kmin + span * 4 / 5, cfg.kmin + span / 5);
    let summary = vec![
        ("dist_to_orbit".into(), dist),
        ("slope_full".into(), fit(cfg.kmin, cfg.kmax, None)?),
        ("window_low_kmax".into(), lo_hi as f64),
        ("slope_window_low".into(), fit(cfg.kmin, lo_hi, None)?),
        ("window_high_kmin".into(), hi_lo as f64),
        ("slope_window_high".into(), fit(hi_lo, cfg.kmax, None)?),
        ("control_slope".into(), fit(cfg.kmin, cfg.kmax, Some(1))?),
        ("complex_dim".into(), cfg.model.dim() as f64),
    ];
    Ok(Table {
        header: cfg.header("decay"),
        extra_columns: vec!["dist_to_orbit".into(), "control_diag".into()],
        rows,
        summary,
        truncated,
    })
}

/// Random point pairs per `k` in [`run_oracle`].
pub const ORACLE_PAIRS: usize = 20;

/// Isotypic-basis kernel against the character quadrature.
pub fn run_oracle(cfg: &ExperimentConfig) -> Result<Table, ConfigError> {
    cfg.validate()?;
    let nu = cfg.nu_label();
    let limit = match cfg.model {
        ModelSpace::P1 => 4 * ORACLE_MAX_KNU,
        ModelSpace::P1xP1 { .. } => ORACLE_MAX_KNU,
    };
    if cfg.kmax * cfg.nu > limit {
        return Err(ConfigError::Invalid(format!(
            "oracle budget: k*nu must be at most {limit}, got {}",
            cfg.kmax * cfg.nu
        )));
    }
    let engine = KernelEngine::default();
    let (rows, truncated) = sweep(&cfg.ks(), cfg.budget, |k| {
        let q = haar_quadrature(required_quadrature_degree(k, nu, cfg.model))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
        let (mut rel, mut abs, mut scale) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..ORACLE_PAIRS {
            let x = BundlePoint::random(cfg.model, &mut rng);
            let y = BundlePoint::random(cfg.model, &mut rng);
            let a = engine.equivariant_kernel(k, nu, &x, &y)?.value;
            let b = equivariant_kernel_quadrature(k, nu, &x, &y, &q)?.value;
            let diff = (a - b).norm();
            abs = abs.max(diff);
            scale = scale.max(a.norm());
            if a.norm() > 0.0 {
                rel = rel.max(diff / a.norm());
            }
        }
        Ok(ResultRow::new(
            "oracle",
            k,
            rel,
            0.0,
            vec![abs, scale, q.len() as f64],
        ))
    })?;
    let max_rel = rows.iter().map(|r| r.exact).fold(0.0, f64::max);
    let max_abs = rows.iter().map(|r| r.extra[0]).fold(0.0, f64::max);
    Ok(Table {
        header: cfg.header("oracle"),
        extra_columns: vec![
            "max_abs_discrepancy".into(),
            "max_kernel_modulus".into(),
            "quadrature_nodes".into(),
        ],
        rows,
        summary: vec![
            ("max_relative_discrepancy".into(), max_rel),
            ("max_abs_discrepancy".into(), max_abs),
        ],
        truncated,
    })
}

/// Outcome of `--assert`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub message: String,
}

fn check(passed: bool, message: String) -> Check {
    Check { passed, message }
}

/// Acceptance check for a finished table; tolerances default per experiment.
pub fn assert_table(experiment: &str, cfg: &ExperimentConfig, table: &Table) -> Check {
    let nu = cfg.nu as f64;
    match experiment {
        "dim" => {
            let tol = cfg.tol.unwrap_or(0.02);
            let last = table.rows.iter().rev().find(|r| r.ratio.is_finite());
            match last {
                Some(r) => check(
                    (r.ratio - 1.0).abs() <= tol,
                    format!("dim: ratio at k = {} is {:.5} (tol {tol})", r.k, r.ratio),
                ),
                None => check(
                    false,
                    "dim: no finite ratio (odd r has no limit integral)".into(),
                ),
            }
        }
        "diag" => {
            if cfg.model == ModelSpace::P1 {
                let tol = cfg.tol.unwrap_or(1e-10);
                let worst = table
                    .rows
                    .iter()
                    .map(|r| (r.ratio - 1.0).abs())
                    .fold(0.0, f64::max);
                check(
                    worst <= tol,
                    format!("diag: max |exact/predicted - 1| = {worst:.3e} (tol {tol})"),
                )
            } else {
                let tol = cfg.tol.unwrap_or(0.02);
                match table.summary_value("richardson_intercept") {
                    Some(c) => check(
                        (c - 1.0).abs() <= tol,
                        format!("diag: Richardson intercept {c:.6} (tol {tol})"),
                    ),
                    None => check(false, "diag: no finite ratios to fit".into()),
                }
            }
        }
        "neardiag" => {
            let tol = cfg.tol.unwrap_or(0.05);
            let rate = table
                .summary_value("fitted_rate_last_k")
                .unwrap_or(f64::NAN);
            let u0 = table.summary_value("u0").unwrap_or(f64::NAN);
            check(
                (rate / u0 - 1.0).abs() <= tol,
                format!("neardiag: fitted rate {rate:.5} vs u0 {u0:.5} (tol {tol})"),
            )
        }
        "decay" => {
            let tol = cfg.tol.unwrap_or(-3.0);
            let low = table.summary_value("slope_window_low").unwrap_or(f64::NAN);
            let high = table.summary_value("slope_window_high").unwrap_or(f64::NAN);
            let control = table.summary_value("control_slope").unwrap_or(f64::NAN);
            let d = cfg.model.dim() as f64;
            let ok = low <= tol && high < low && (control - d).abs() <= 0.5;
            check(
                ok,
                format!("decay: slopes {low:.3} -> {high:.3} (need <= {tol}, decreasing), control {control:.3} vs d = {d}"),
            )
        }
        "oracle" => {
            let tol = cfg.tol.unwrap_or(1e-8);
            let rel = table
                .summary_value("max_relative_discrepancy")
                .unwrap_or(f64::NAN);
            let abs = table
                .summary_value("max_abs_discrepancy")
                .unwrap_or(f64::NAN);
            let ok = rel <= tol && abs.is_finite();
            check(ok, format!("oracle: max relative discrepancy {rel:.3e}, max abs {abs:.3e} (tol {tol}, nu {nu})"))
        }
        other => check(false, format!("unknown experiment {other}")),
    }
}

/// Central diagonal prediction at a preset point (convenience for scripts).
pub fn central_prediction(cfg: &ExperimentConfig, k: u32) -> Result<f64, ConfigError> {
    Ok(leading_diag_central(k, cfg.nu_label(), &cfg.point()?)?)
}
