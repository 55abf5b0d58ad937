//! Seeded generation of scalar Brownian paths and truncated cylindrical
//! Wiener processes.
//!
//! A cylindrical Wiener process `B` with covariance `Q` is represented by
//! its components over a `Q`-orthonormal sine basis: `B(v_j)` is a standard
//! Brownian motion for each retained mode `j`, and distinct modes are driven
//! by disjoint RNG streams, so they are independent by construction. The
//! basis is `v_j(x) = sqrt(2) sin(j pi x) / sqrt(q_j)`, the Dirichlet
//! eigenbasis of `[0, 1]` renormalized in `V_Q`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::rng::stream_rng;

/// Diagonal covariance operator: eigenvalue `q_j` per sine mode `j = 1..=J`.
///
/// The standard cylindrical Wiener process has `q_j = 1` for every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpec {
    eigenvalues: Vec<f64>,
}

impl CovarianceSpec {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid("eigenvalues", "need at least one mode"));
        }
        if let Some(q) = eigenvalues
            .iter()
            .find(|q| !q.is_finite() || **q < 0.0)
        {
            return Err(Error::invalid(
                "eigenvalues",
                format!("eigenvalues must be nonnegative and finite, got {q}"),
            ));
        }
        Ok(CovarianceSpec { eigenvalues })
    }

    /// Identity covariance truncated to `modes` sine modes.
    pub fn standard(modes: usize) -> Result<Self> {
        Self::new(vec![1.0; modes])
    }

    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalue of mode `j` (1-based).
    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenvalues[j - 1]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// A scalar path sampled on a time grid; `values[k]` lives at node `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "path has {} values but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SamplePath { grid, values })
    }

    /// Path that is constant in time.
    pub fn constant(grid: TimeGrid, value: f64) -> Self {
        SamplePath {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Path built from a function of time evaluated at the nodes.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        SamplePath { grid, values }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Linear interpolation with constant extension outside `[0, T]`:
    /// `X_s = X_0` for `s < 0` and `X_s = X_T` for `s > T`.
    pub fn at(&self, s: f64) -> f64 {
        let n = self.grid.steps();
        let dt = self.grid.dt();
        if s <= 0.0 {
            return self.values[0];
        }
        let u = s / dt;
        if u >= n as f64 {
            return self.values[n];
        }
        let k = u.floor() as usize;
        let k = k.min(n - 1);
        let theta = u - k as f64;
        (1.0 - theta) * self.values[k] + theta * self.values[k + 1]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Truncated cylindrical Wiener process: one standard Brownian component
/// per retained basis mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalWienerPath {
    grid: TimeGrid,
    covariance: CovarianceSpec,
    components: Vec<SamplePath>,
    seed: u64,
}

impl CylindricalWienerPath {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn covariance(&self) -> &CovarianceSpec {
        &self.covariance
    }

    pub fn modes(&self) -> usize {
        self.components.len()
    }

    /// Component `B(v_j)` for mode `j` (1-based).
    pub fn component(&self, j: usize) -> &SamplePath {
        &self.components[j - 1]
    }

    pub fn components(&self) -> &[SamplePath] {
        &self.components
    }

    /// Seed the process was generated from; provenance for derived draws.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Terminal value `B_T(v_j)` of mode `j` (1-based).
    pub fn terminal(&self, j: usize) -> f64 {
        self.components[j - 1].terminal()
    }
}

/// Standard Brownian path with increment variance `variance_rate * dt`,
/// reproducible for a fixed seed. Stream 0 of the seed is used, so the
/// result coincides with mode 1 of [`simulate_cylindrical`].
pub fn simulate_brownian(grid: TimeGrid, variance_rate: f64, seed: u64) -> Result<SamplePath> {
    if !variance_rate.is_finite() || variance_rate < 0.0 {
        return Err(Error::invalid(
            "variance_rate",
            format!("must be nonnegative, got {variance_rate}"),
        ));
    }
    Ok(brownian_component(grid, variance_rate, seed, 0))
}

fn brownian_component(grid: TimeGrid, variance_rate: f64, seed: u64, stream: u64) -> SamplePath {
    let mut rng = stream_rng(seed, stream);
    let step_sd = (variance_rate * grid.dt()).sqrt();
    let mut values = Vec::with_capacity(grid.len());
    let mut x = 0.0;
    values.push(x);
    for _ in 0..grid.steps() {
        let z: f64 = rng.sample(StandardNormal);
        x += step_sd * z;
        values.push(x);
    }
    SamplePath { grid, values }
}

/// Truncated cylindrical Wiener process: mode `j` is drawn from stream
/// `j - 1` of `seed`, so modes are independent and the truncation can grow
/// without perturbing earlier modes.
pub fn simulate_cylindrical(
    grid: TimeGrid,
    covariance: &CovarianceSpec,
    seed: u64,
) -> Result<CylindricalWienerPath> {
    let components = (0..covariance.modes())
        .map(|m| brownian_component(grid, 1.0, seed, m as u64))
        .collect();
    Ok(CylindricalWienerPath {
        grid,
        covariance: covariance.clone(),
        components,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;

    fn mean_and_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn zero_variance_gives_zero_path() {
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let path = simulate_brownian(grid, 0.0, 3).unwrap();
        assert!(path.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn negative_variance_is_rejected() {
        let grid = TimeGrid::new(1.0, 16).unwrap();
        assert!(matches!(
            simulate_brownian(grid, -1.0, 3),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn brownian_starts_at_zero_and_has_full_length() {
        let grid = TimeGrid::new(2.0, 64).unwrap();
        let path = simulate_brownian(grid, 1.0, 11).unwrap();
        assert_eq!(path.value(0), 0.0);
        assert_eq!(path.values().len(), 65);
    }

    #[test]
    fn endpoint_variance_matches_t_times_rate() {
        // Var(B_t) = t * variance_rate, checked at t = T/2 and t = T.
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let n = 10_000;
        let mut mid = Vec::with_capacity(n);
        let mut end = Vec::with_capacity(n);
        for seed in 0..n {
            let p = simulate_brownian(grid, 1.0, split_seed(100, seed as u64)).unwrap();
            mid.push(p.value(8));
            end.push(p.terminal());
        }
        let (_, var_mid) = mean_and_var(&mid);
        let (_, var_end) = mean_and_var(&end);
        assert!((var_mid - 0.5).abs() < 0.025, "var at T/2 = {var_mid}");
        assert!((var_end - 1.0).abs() < 0.05, "var at T = {var_end}");
    }

    #[test]
    fn orthogonal_modes_are_uncorrelated() {
        // E[B_1(h) B_1(g)] = <Qh, g> = 0 for distinct basis modes.
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let cov = CovarianceSpec::standard(2).unwrap();
        let n = 10_000;
        let mut prods = Vec::with_capacity(n);
        for seed in 0..n {
            let w = simulate_cylindrical(grid, &cov, split_seed(200, seed as u64)).unwrap();
            prods.push(w.terminal(1) * w.terminal(2));
        }
        let (mean, var) = mean_and_var(&prods);
        let se = (var / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "cov = {mean}, se = {se}");
    }

    #[test]
    fn increments_have_no_lag_one_autocorrelation() {
        let grid = TimeGrid::new(1.0, 4096).unwrap();
        let p = simulate_brownian(grid, 1.0, 5).unwrap();
        let inc: Vec<f64> = p.values().windows(2).map(|w| w[1] - w[0]).collect();
        let n = inc.len() - 1;
        let (mean, var) = mean_and_var(&inc);
        let acf: f64 = (0..n)
            .map(|k| (inc[k] - mean) * (inc[k + 1] - mean))
            .sum::<f64>()
            / (n as f64 * var);
        let se = 1.0 / (n as f64).sqrt();
        assert!(acf.abs() < 3.0 * se, "lag-1 acf = {acf}");
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let grid = TimeGrid::new(1.0, 128).unwrap();
        let cov = CovarianceSpec::standard(4).unwrap();
        let a = simulate_cylindrical(grid, &cov, 77).unwrap();
        let b = simulate_cylindrical(grid, &cov, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_mode_reduces_to_plain_brownian() {
        let grid = TimeGrid::new(1.0, 128).unwrap();
        let cov = CovarianceSpec::standard(1).unwrap();
        let w = simulate_cylindrical(grid, &cov, 9).unwrap();
        let b = simulate_brownian(grid, 1.0, 9).unwrap();
        assert_eq!(w.component(1), &b);
    }

    #[test]
    fn growing_the_truncation_keeps_earlier_modes() {
        let grid = TimeGrid::new(1.0, 64).unwrap();
        let small = simulate_cylindrical(grid, &CovarianceSpec::standard(2).unwrap(), 21).unwrap();
        let large = simulate_cylindrical(grid, &CovarianceSpec::standard(6).unwrap(), 21).unwrap();
        assert_eq!(small.component(1), large.component(1));
        assert_eq!(small.component(2), large.component(2));
    }

    #[test]
    fn component_endpoint_variance_is_t() {
        let grid = TimeGrid::new(2.0, 8).unwrap();
        let cov = CovarianceSpec::standard(8).unwrap();
        let n = 4000;
        for j in [1, 8] {
            let mut ends = Vec::with_capacity(n);
            for seed in 0..n {
                let w = simulate_cylindrical(grid, &cov, split_seed(300, seed as u64)).unwrap();
                ends.push(w.terminal(j));
            }
            let (_, var) = mean_and_var(&ends);
            assert!((var - 2.0).abs() < 0.1 * 2.0, "mode {j} var = {var}");
        }
    }

    #[test]
    fn interpolation_and_extension() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let p = SamplePath::new(grid, vec![0.0, 1.0, 0.0, 2.0, 4.0]).unwrap();
        assert_eq!(p.at(0.125), 0.5);
        assert_eq!(p.at(-3.0), 0.0);
        assert_eq!(p.at(7.0), 4.0);
        assert_eq!(p.at(0.75), 2.0);
    }
}
