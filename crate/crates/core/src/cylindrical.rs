//! Stochastic integration against the truncated cylindrical Wiener process.
//!
//! Two routes are provided for the integral of a `V_Q`-valued process `g`:
//!
//! - [`ito_series_integral`]: the classical series of per-mode Ito
//!   integrals, `sum_j int <g, v_j> dB(v_j)` with left-endpoint Riemann
//!   sums. Valid for adapted square-integrable integrands.
//! - [`rv_cylindrical_forward`]: the same series with each mode integral
//!   replaced by the regularized forward integral. No adaptedness is
//!   required; for adapted integrands the two routes agree.
//!
//! Integrands are represented by their coefficient paths
//! `c_j(t) = <g_t, v_j>_{V_Q}` over the `V_Q`-orthonormal sine basis; with
//! a diagonal covariance the coefficient of a spatial profile is
//! `sqrt(q_j) * int g(x) sqrt(2) sin(j pi x) dx` by trapezoidal quadrature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::paths::{simulate_cylindrical, CovarianceSpec, CylindricalWienerPath, SamplePath};
use crate::regularization::{estimate_ucp_limit, EpsilonLadder, IntegralKind, UcpOptions};
use crate::report::{BatchStats, CheckRow, DiagnosticReport};
use crate::rng::split_seed;

/// A `V_Q`-valued process given by its basis coefficient paths.
#[derive(Debug, Clone)]
pub struct VQProcess {
    grid: TimeGrid,
    covariance: CovarianceSpec,
    coefficients: Vec<SamplePath>,
}

impl VQProcess {
    /// Builds the process from explicit coefficient paths (mode-major).
    pub fn from_coefficients(
        grid: TimeGrid,
        covariance: CovarianceSpec,
        coefficients: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("coefficients", "need at least one mode"));
        }
        let coefficients = coefficients
            .into_iter()
            .map(|values| SamplePath::new(grid, values))
            .collect::<Result<Vec<_>>>()?;
        Ok(VQProcess {
            grid,
            covariance,
            coefficients,
        })
    }

    /// Time-constant process from a spatial profile sampled on a space
    /// grid: `c_j = sqrt(q_j) <profile, sqrt(2) sin(j pi .)>` for
    /// `j = 1..=modes`.
    pub fn from_space_profile(
        grid: TimeGrid,
        space: &SpaceGrid,
        covariance: &CovarianceSpec,
        profile: &[f64],
        modes: usize,
    ) -> Result<Self> {
        if profile.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} values, space grid has {} nodes",
                profile.len(),
                space.len()
            )));
        }
        if modes == 0 || modes > covariance.modes() {
            return Err(Error::invalid(
                "modes",
                format!("must lie in 1..={}, got {modes}", covariance.modes()),
            ));
        }
        let coefficients = (1..=modes)
            .map(|j| {
                let a = sine_coefficient(space, profile, j);
                let c = covariance.eigenvalue(j).sqrt() * a;
                vec![c; grid.len()]
            })
            .collect();
        Self::from_coefficients(grid, covariance.clone(), coefficients)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn covariance(&self) -> &CovarianceSpec {
        &self.covariance
    }

    pub fn modes(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient path of mode `j` (1-based).
    pub fn coefficient(&self, j: usize) -> &SamplePath {
        &self.coefficients[j - 1]
    }

    /// Quadrature of `int_0^T sum_j c_j(s)^2 ds` over the given mode range.
    pub fn squared_norm_integral(&self, mode_range: std::ops::RangeInclusive<usize>) -> f64 {
        let dt = self.grid.dt();
        let mut total = 0.0;
        for j in mode_range {
            let v = self.coefficients[j - 1].values();
            let mut acc = 0.0;
            for k in 1..v.len() {
                acc += 0.5 * dt * (v[k - 1] * v[k - 1] + v[k] * v[k]);
            }
            total += acc;
        }
        total
    }
}

/// Plain sine coefficient `<profile, sqrt(2) sin(j pi .)>` by trapezoidal
/// quadrature (the boundary nodes carry zero weight for Dirichlet data).
pub fn sine_coefficient(space: &SpaceGrid, profile: &[f64], j: usize) -> f64 {
    let p = space.points();
    let mut acc = 0.5 * (profile[0] * 0.0 + profile[p] * 0.0);
    for (i, value) in profile.iter().enumerate().take(p).skip(1) {
        acc += value * (j as f64 * std::f64::consts::PI * space.node(i)).sin();
    }
    acc * std::f64::consts::SQRT_2 / p as f64
}

/// Integrand generator: builds the coefficient representation of `g` for a
/// given noise draw, so integrands may depend on the noise (including its
/// terminal values).
pub trait IntegrandRule: Sync {
    fn name(&self) -> String;

    /// Coefficient paths of the integrand for this noise realization.
    fn build(&self, noise: &CylindricalWienerPath) -> VQProcess;

    /// Whether the rule only reads the noise up to the current time.
    fn is_adapted(&self) -> bool;
}

/// Mode-by-mode series evaluation of a cylindrical integral.
#[derive(Debug, Clone)]
pub struct SeriesIntegralResult {
    terms: Vec<f64>,
    partial_sums: Vec<f64>,
    tail_estimate: Option<f64>,
    converged: bool,
    oscillation: f64,
}

impl SeriesIntegralResult {
    fn assemble(terms: Vec<f64>, tail_estimate: Option<f64>, tolerance: f64) -> Self {
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = 0.0;
        for t in &terms {
            acc += t;
            partial_sums.push(acc);
        }
        // Stabilization: oscillation of the last four partial sums.
        let window = partial_sums.len().saturating_sub(4);
        let tail = &partial_sums[window..];
        let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(*s), hi.max(*s))
        });
        let oscillation = hi - lo;
        let scale = partial_sums.last().map_or(1.0, |s| s.abs().max(1.0));
        let converged = oscillation <= tolerance * scale;
        SeriesIntegralResult {
            terms,
            partial_sums,
            tail_estimate,
            converged,
            oscillation,
        }
    }

    /// Per-mode terms `c_j`.
    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    /// Partial sums `S_m = sum_{j<=m} c_j`.
    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// Value of the truncated series, `S_J`.
    pub fn value(&self) -> f64 {
        *self.partial_sums.last().unwrap()
    }

    /// Isometry proxy for the dropped tail, when extra coefficient paths
    /// beyond the noise truncation were available.
    pub fn tail_estimate(&self) -> Option<f64> {
        self.tail_estimate
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Oscillation of the last four partial sums.
    pub fn oscillation(&self) -> f64 {
        self.oscillation
    }
}

/// Options shared by the series integrals.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Per-mode ladder convergence options.
    pub ucp: UcpOptions,
    /// Relative tolerance on the partial-sum oscillation.
    pub series_tolerance: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            ucp: UcpOptions::default(),
            series_tolerance: 1e-2,
        }
    }
}

fn check_pairing(g: &VQProcess, noise: &CylindricalWienerPath) -> Result<()> {
    if g.grid() != noise.grid() {
        return Err(Error::GridMismatch(
            "integrand and noise live on different time grids".into(),
        ));
    }
    if g.modes() < noise.modes() {
        return Err(Error::DimensionMismatch(format!(
            "integrand carries {} coefficient paths but the noise has {} modes",
            g.modes(),
            noise.modes()
        )));
    }
    Ok(())
}

fn tail_estimate(g: &VQProcess, retained: usize) -> Option<f64> {
    if g.modes() > retained {
        Some(g.squared_norm_integral(retained + 1..=g.modes()))
    } else {
        None
    }
}

/// Classical series integral: mode `j` contributes the left-endpoint
/// Riemann sum `sum_k c_j(t_k) (B_{t_{k+1}}(v_j) - B_{t_k}(v_j))`.
///
/// The caller is responsible for the adaptedness of `g`; coefficients at
/// `t_k` must be computed from information available at `t_k`.
pub fn ito_series_integral(
    g: &VQProcess,
    noise: &CylindricalWienerPath,
) -> Result<SeriesIntegralResult> {
    ito_series_integral_with(g, noise, &SeriesOptions::default())
}

pub fn ito_series_integral_with(
    g: &VQProcess,
    noise: &CylindricalWienerPath,
    options: &SeriesOptions,
) -> Result<SeriesIntegralResult> {
    check_pairing(g, noise)?;
    let retained = noise.modes();
    let terms = (1..=retained)
        .map(|j| {
            let c = g.coefficient(j).values();
            let b = noise.component(j).values();
            let mut acc = 0.0;
            for k in 0..b.len() - 1 {
                acc += c[k] * (b[k + 1] - b[k]);
            }
            acc
        })
        .collect();
    Ok(SeriesIntegralResult::assemble(
        terms,
        tail_estimate(g, retained),
        options.series_tolerance,
    ))
}

/// Regularized forward series integral: mode `j` contributes the ladder
/// limit of the epsilon-forward integral of `c_j` against `B(v_j)`.
///
/// No adaptedness is required. A mode whose ladder fails the convergence
/// criterion raises [`Error::ModeDivergence`] naming the mode; a series
/// whose partial sums fail to stabilize is returned with the convergence
/// flag unset.
pub fn rv_cylindrical_forward(
    g: &VQProcess,
    noise: &CylindricalWienerPath,
    ladder: &EpsilonLadder,
    options: &SeriesOptions,
) -> Result<SeriesIntegralResult> {
    check_pairing(g, noise)?;
    ladder.validate_for(g.grid())?;
    let retained = noise.modes();
    let mut terms = Vec::with_capacity(retained);
    for j in 1..=retained {
        let c = g.coefficient(j);
        if c.values().iter().all(|v| *v == 0.0) {
            terms.push(0.0);
            continue;
        }
        let r = estimate_ucp_limit(
            IntegralKind::Forward,
            c,
            noise.component(j),
            ladder,
            options.ucp,
        )?;
        if !r.converged() {
            return Err(Error::ModeDivergence {
                mode: j,
                diff: r.max_successive_diff(),
                tol: r.scaled_tolerance(),
            });
        }
        terms.push(r.limit_at_horizon());
    }
    Ok(SeriesIntegralResult::assemble(
        terms,
        tail_estimate(g, retained),
        options.series_tolerance,
    ))
}

/// Monte-Carlo comparison of the two integral routes for an adapted
/// integrand rule: reports the mean and RMS of their difference.
///
/// Passes when the mean difference is within three standard errors of zero
/// and the RMS difference is below `rms_tolerance`.
pub fn check_proposition1(
    rule: &dyn IntegrandRule,
    grid: TimeGrid,
    covariance: &CovarianceSpec,
    ladder: &EpsilonLadder,
    n_mc: usize,
    seed: u64,
    options: &SeriesOptions,
    rms_tolerance: f64,
) -> Result<DiagnosticReport> {
    let diffs = (0..n_mc)
        .into_par_iter()
        .map(|r| {
            let noise = simulate_cylindrical(grid, covariance, split_seed(seed, r as u64))?;
            let g = rule.build(&noise);
            let ito = ito_series_integral_with(&g, &noise, options)?;
            let rv = rv_cylindrical_forward(&g, &noise, ladder, options)?;
            Ok(rv.value() - ito.value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let stats = BatchStats::from_samples(&diffs);
    let mut report = DiagnosticReport::default();
    let name = rule.name();
    report.push(CheckRow::new(
        format!("prop1_mean_diff[{name}]"),
        stats.mean,
        stats.std_error,
        3.0 * stats.std_error,
        stats.mean.abs() <= 3.0 * stats.std_error,
    ));
    report.push(CheckRow::new(
        format!("prop1_rms_diff[{name}]"),
        stats.rms,
        0.0,
        rms_tolerance,
        stats.rms <= rms_tolerance,
    ));
    Ok(report)
}

/// Monte-Carlo check of the isometry: the second moment of the series
/// integral against the expected time-integrated squared `V_Q` norm.
pub fn isometry_diagnostic(
    rule: &dyn IntegrandRule,
    grid: TimeGrid,
    covariance: &CovarianceSpec,
    n_mc: usize,
    seed: u64,
    relative_tolerance: f64,
) -> Result<DiagnosticReport> {
    let samples = (0..n_mc)
        .into_par_iter()
        .map(|r| {
            let noise = simulate_cylindrical(grid, covariance, split_seed(seed, r as u64))?;
            let g = rule.build(&noise);
            let value = ito_series_integral(&g, &noise)?.value();
            let norm = g.squared_norm_integral(1..=noise.modes());
            Ok((value * value, norm))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let lhs: Vec<f64> = samples.iter().map(|(v, _)| *v).collect();
    let rhs: Vec<f64> = samples.iter().map(|(_, n)| *n).collect();
    let lhs_stats = BatchStats::from_samples(&lhs);
    let rhs_stats = BatchStats::from_samples(&rhs);
    let rel_err = (lhs_stats.mean - rhs_stats.mean).abs() / rhs_stats.mean.abs().max(1e-12);
    let name = rule.name();
    let mut report = DiagnosticReport::default();
    report.push(CheckRow::new(
        format!("isometry_lhs[{name}]"),
        lhs_stats.mean,
        lhs_stats.std_error,
        f64::INFINITY,
        lhs_stats.mean.is_finite(),
    ));
    report.push(CheckRow::new(
        format!("isometry_rhs[{name}]"),
        rhs_stats.mean,
        rhs_stats.std_error,
        f64::INFINITY,
        rhs_stats.mean.is_finite(),
    ));
    report.push(CheckRow::new(
        format!("isometry_rel_error[{name}]"),
        rel_err,
        0.0,
        relative_tolerance,
        rel_err <= relative_tolerance,
    ));
    Ok(report)
}
