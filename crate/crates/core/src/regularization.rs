//! Pathwise epsilon-regularized integrals and covariation, with
//! limit estimation along a decreasing epsilon ladder.
//!
//! For a continuous integrator `X` and a locally integrable integrand `Y`
//! the four regularized quantities at time `t` are
//!
//! ```text
//! forward      I-(eps) = int_0^t Y_s (X_{s+eps} - X_s) / eps ds
//! backward     I+(eps) = int_0^t Y_s (X_s - X_{s-eps}) / eps ds
//! symmetric    I0(eps) = int_0^t Y_s (X_{s+eps} - X_{s-eps}) / (2 eps) ds
//! covariation  C(eps)  = int_0^t (Y_{s+eps} - Y_s)(X_{s+eps} - X_s) / eps ds
//! ```
//!
//! and the limit objects are their `eps -> 0` limits. Conventions:
//! paths are extended by `X_s = X_0` left of 0 and `X_s = X_T` right of `T`,
//! off-grid reads use linear interpolation, and the time quadrature is the
//! trapezoidal rule on the grid. The two limits `dt -> 0` and `eps -> 0`
//! must be taken in that order, which is why ladders are rejected below
//! `eps = 10 dt`: under that floor the difference quotient measures grid
//! discretization rather than the regularization limit.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::paths::SamplePath;

/// Which of the four regularized quantities to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    Forward,
    Backward,
    Symmetric,
    Covariation,
}

impl IntegralKind {
    pub const ALL: [IntegralKind; 4] = [
        IntegralKind::Forward,
        IntegralKind::Backward,
        IntegralKind::Symmetric,
        IntegralKind::Covariation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IntegralKind::Forward => "forward",
            IntegralKind::Backward => "backward",
            IntegralKind::Symmetric => "symmetric",
            IntegralKind::Covariation => "covariation",
        }
    }
}

/// Strictly decreasing ladder of regularization widths.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonLadder {
    values: Vec<f64>,
}

/// Admissibility floor: the smallest ladder entry must be at least
/// `LADDER_FLOOR_FACTOR * dt` of the working grid.
pub const LADDER_FLOOR_FACTOR: f64 = 10.0;

impl EpsilonLadder {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("ladder", "must have at least one entry"));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::invalid(
                    "ladder",
                    format!("entry {i} is not positive: {v}"),
                ));
            }
            if i > 0 && values[i - 1] <= *v {
                return Err(Error::invalid(
                    "ladder",
                    format!("entries must be strictly decreasing at index {i}"),
                ));
            }
        }
        Ok(EpsilonLadder { values })
    }

    /// Geometric ladder `start * ratio^l` for `l = 0..length`.
    pub fn geometric(start: f64, ratio: f64, length: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::invalid(
                "ladder.ratio",
                format!("ratio must lie in (0, 1), got {ratio}"),
            ));
        }
        if length == 0 {
            return Err(Error::invalid("ladder.length", "must be at least 1"));
        }
        let values = (0..length).map(|l| start * ratio.powi(l as i32)).collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn smallest(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Floor check against a grid: every entry must be `>= 10 dt`.
    pub fn validate_for(&self, grid: &TimeGrid) -> Result<()> {
        let floor = LADDER_FLOOR_FACTOR * grid.dt();
        let eps = self.smallest();
        // Tiny relative slack so exact multiples of dt are not rejected.
        if eps < floor * (1.0 - 1e-12) {
            return Err(Error::LadderTooFine { eps, floor });
        }
        Ok(())
    }
}

/// Options for ladder-limit estimation.
#[derive(Debug, Clone, Copy)]
pub struct UcpOptions {
    /// Convergence tolerance, in units of the pair's natural scale
    /// `sup|X| * sup|Y|`. The default is strict and appropriate for smooth
    /// data; stochastic integrands decay like `sqrt(eps)` and callers
    /// typically override this with a measured value.
    pub tolerance: f64,
}

impl Default for UcpOptions {
    fn default() -> Self {
        UcpOptions { tolerance: 1e-2 }
    }
}

/// Ladder evaluation of one regularized integral: one value curve per
/// epsilon, the limit estimate, and stabilization diagnostics.
#[derive(Debug, Clone)]
pub struct RegularizedIntegralResult {
    grid: TimeGrid,
    epsilons: Vec<f64>,
    curves: Vec<Vec<f64>>,
    sup_diffs: Vec<f64>,
    converged: bool,
    scaled_tolerance: f64,
}

impl RegularizedIntegralResult {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// Value curve for ladder entry `l`, indexed by grid node.
    pub fn curve(&self, l: usize) -> &[f64] {
        &self.curves[l]
    }

    /// Extrapolated limit curve: the curve at the smallest epsilon.
    pub fn limit_curve(&self) -> &[f64] {
        self.curves.last().unwrap()
    }

    /// Limit estimate at the final time `T`.
    pub fn limit_at_horizon(&self) -> f64 {
        *self.limit_curve().last().unwrap()
    }

    /// Limit estimate at grid node `k`.
    pub fn limit_at(&self, k: usize) -> f64 {
        self.limit_curve()[k]
    }

    /// Sup-norm differences between successive ladder curves.
    pub fn sup_diffs(&self) -> &[f64] {
        &self.sup_diffs
    }

    /// Final successive-difference diagnostic (0 for a one-rung ladder).
    pub fn max_successive_diff(&self) -> f64 {
        self.sup_diffs.last().copied().unwrap_or(0.0)
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Tolerance in absolute units that the final difference was held to.
    pub fn scaled_tolerance(&self) -> f64 {
        self.scaled_tolerance
    }
}

fn check_same_grid(y: &SamplePath, x: &SamplePath) -> Result<()> {
    if y.grid() != x.grid() {
        return Err(Error::GridMismatch(format!(
            "integrand grid (T = {}, N = {}) differs from integrator grid (T = {}, N = {})",
            y.grid().horizon(),
            y.grid().steps(),
            x.grid().horizon(),
            x.grid().steps()
        )));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid(
            "eps",
            format!("must be positive and finite, got {eps}"),
        ));
    }
    Ok(())
}

/// Integrand of the chosen regularized quantity at an arbitrary time `s`.
fn integrand_at(kind: IntegralKind, y: &SamplePath, x: &SamplePath, eps: f64, s: f64) -> f64 {
    match kind {
        IntegralKind::Forward => y.at(s) * (x.at(s + eps) - x.at(s)) / eps,
        IntegralKind::Backward => y.at(s) * (x.at(s) - x.at(s - eps)) / eps,
        IntegralKind::Symmetric => y.at(s) * (x.at(s + eps) - x.at(s - eps)) / (2.0 * eps),
        IntegralKind::Covariation => {
            (y.at(s + eps) - y.at(s)) * (x.at(s + eps) - x.at(s)) / eps
        }
    }
}

/// Integrand sampled at every grid node. Node reads use exact path values;
/// only the `s +- eps` reads interpolate.
fn integrand_nodes(kind: IntegralKind, y: &SamplePath, x: &SamplePath, eps: f64) -> Vec<f64> {
    let grid = *y.grid();
    let n = grid.steps();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = grid.node(k);
        let v = match kind {
            IntegralKind::Forward => y.value(k) * (x.at(s + eps) - x.value(k)) / eps,
            IntegralKind::Backward => y.value(k) * (x.value(k) - x.at(s - eps)) / eps,
            IntegralKind::Symmetric => {
                y.value(k) * (x.at(s + eps) - x.at(s - eps)) / (2.0 * eps)
            }
            IntegralKind::Covariation => {
                (y.at(s + eps) - y.value(k)) * (x.at(s + eps) - x.value(k)) / eps
            }
        };
        out.push(v);
    }
    out
}

/// Running trapezoidal prefix of a node-sampled integrand.
fn trapezoid_prefix(grid: &TimeGrid, f: &[f64]) -> Vec<f64> {
    let dt = grid.dt();
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..f.len() {
        acc += 0.5 * dt * (f[k - 1] + f[k]);
        out.push(acc);
    }
    out
}

fn eps_integral(
    kind: IntegralKind,
    y: &SamplePath,
    x: &SamplePath,
    eps: f64,
    t: f64,
) -> Result<f64> {
    check_same_grid(y, x)?;
    check_eps(eps)?;
    let grid = y.grid();
    if !t.is_finite() || t < 0.0 || t > grid.horizon() * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "t",
            format!("must lie in [0, {}], got {t}", grid.horizon()),
        ));
    }
    let k_full = grid.floor_index(t);
    let dt = grid.dt();
    let mut acc = 0.0;
    let mut prev = integrand_at(kind, y, x, eps, 0.0);
    for k in 1..=k_full {
        let cur = integrand_at(kind, y, x, eps, grid.node(k));
        acc += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    let rest = t - grid.node(k_full);
    if rest > 0.0 {
        let cur = integrand_at(kind, y, x, eps, t);
        acc += 0.5 * rest * (prev + cur);
    }
    Ok(acc)
}

/// Epsilon-forward integral `int_0^t Y_s (X_{s+eps} - X_s)/eps ds`.
pub fn eps_forward(y: &SamplePath, x: &SamplePath, eps: f64, t: f64) -> Result<f64> {
    eps_integral(IntegralKind::Forward, y, x, eps, t)
}

/// Epsilon-backward integral `int_0^t Y_s (X_s - X_{s-eps})/eps ds`.
pub fn eps_backward(y: &SamplePath, x: &SamplePath, eps: f64, t: f64) -> Result<f64> {
    eps_integral(IntegralKind::Backward, y, x, eps, t)
}

/// Epsilon-symmetric integral `int_0^t Y_s (X_{s+eps} - X_{s-eps})/(2 eps) ds`.
pub fn eps_symmetric(y: &SamplePath, x: &SamplePath, eps: f64, t: f64) -> Result<f64> {
    eps_integral(IntegralKind::Symmetric, y, x, eps, t)
}

/// Epsilon-covariation `int_0^t (Y_{s+eps} - Y_s)(X_{s+eps} - X_s)/eps ds`.
pub fn eps_covariation(y: &SamplePath, x: &SamplePath, eps: f64, t: f64) -> Result<f64> {
    eps_integral(IntegralKind::Covariation, y, x, eps, t)
}

/// Evaluates the chosen regularized integral at every ladder entry for all
/// grid times and estimates the `eps -> 0` limit.
///
/// The limit estimate is the curve at the smallest epsilon. The result is
/// flagged converged when the sup-norm differences between successive
/// curves are non-increasing over the last three rungs and the final
/// difference is within `tolerance * sup|X| * sup|Y|`.
pub fn estimate_ucp_limit(
    kind: IntegralKind,
    y: &SamplePath,
    x: &SamplePath,
    ladder: &EpsilonLadder,
    options: UcpOptions,
) -> Result<RegularizedIntegralResult> {
    check_same_grid(y, x)?;
    let grid = *y.grid();
    ladder.validate_for(&grid)?;

    let curves: Vec<Vec<f64>> = ladder
        .values()
        .iter()
        .map(|&eps| trapezoid_prefix(&grid, &integrand_nodes(kind, y, x, eps)))
        .collect();

    let sup_diffs: Vec<f64> = curves
        .windows(2)
        .map(|pair| {
            pair[0]
                .iter()
                .zip(&pair[1])
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
        })
        .collect();

    let scale = x.sup_norm() * y.sup_norm();
    let scaled_tolerance = options.tolerance * scale;
    let converged = if sup_diffs.is_empty() {
        false
    } else {
        let tail = sup_diffs.len().saturating_sub(3);
        let monotone = sup_diffs[tail..].windows(2).all(|w| w[0] >= w[1]);
        monotone && *sup_diffs.last().unwrap() <= scaled_tolerance
    };

    Ok(RegularizedIntegralResult {
        grid,
        epsilons: ladder.values().to_vec(),
        curves,
        sup_diffs,
        converged,
        scaled_tolerance,
    })
}
