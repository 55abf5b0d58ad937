//! Uniform time and space grids that every path and field lives on.

use crate::error::{Error, Result};

/// Uniform discretization of `[0, T]` into `steps` intervals.
///
/// Nodes are `t_k = k * T / steps` for `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    /// Builds a uniform grid on `[0, horizon]` with `steps >= 2` intervals.
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::invalid(
                "horizon",
                format!("must be positive and finite, got {horizon}"),
            ));
        }
        if steps < 2 {
            return Err(Error::invalid(
                "steps",
                format!("need at least 2 time steps, got {steps}"),
            ));
        }
        Ok(TimeGrid { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of nodes, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Node `t_k`.
    pub fn node(&self, k: usize) -> f64 {
        debug_assert!(k <= self.steps);
        self.horizon * k as f64 / self.steps as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.node(k))
    }

    /// Index of the last node `<= s`, clamped into range.
    pub fn floor_index(&self, s: f64) -> usize {
        if s <= 0.0 {
            return 0;
        }
        let k = (s / self.dt()).floor() as usize;
        k.min(self.steps)
    }

    /// Nearest node index to `s`, clamped into range.
    pub fn nearest_index(&self, s: f64) -> usize {
        if s <= 0.0 {
            return 0;
        }
        let k = (s / self.dt()).round() as usize;
        k.min(self.steps)
    }
}

/// Uniform discretization of `[0, 1]` into `points` intervals with
/// Dirichlet endpoints `x_0 = 0`, `x_P = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceGrid {
    points: usize,
}

impl SpaceGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points < 4 {
            return Err(Error::invalid(
                "points",
                format!("need at least 4 space intervals, got {points}"),
            ));
        }
        Ok(SpaceGrid { points })
    }

    /// Number of intervals `P`; the grid has `P + 1` nodes.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.points as f64
    }

    /// Node `x_i = i / P`.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.points);
        i as f64 / self.points as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.points).map(move |i| self.node(i))
    }

    pub fn nearest_index(&self, x: f64) -> usize {
        if x <= 0.0 {
            return 0;
        }
        let i = (x * self.points as f64).round() as usize;
        i.min(self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_nodes_match_arithmetic() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.dt(), 0.25);
    }

    #[test]
    fn time_grid_two_steps() {
        let g = TimeGrid::new(2.0, 2).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn time_grid_rejects_bad_parameters() {
        assert!(matches!(
            TimeGrid::new(0.0, 4),
            Err(Error::InvalidParameter { name: "horizon", .. })
        ));
        assert!(matches!(
            TimeGrid::new(-1.0, 4),
            Err(Error::InvalidParameter { name: "horizon", .. })
        ));
        assert!(matches!(
            TimeGrid::new(1.0, 1),
            Err(Error::InvalidParameter { name: "steps", .. })
        ));
    }

    #[test]
    fn time_grid_endpoints_are_exact() {
        let g = TimeGrid::new(std::f64::consts::PI, 7).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(7), std::f64::consts::PI);
    }

    #[test]
    fn space_grid_nodes() {
        let g = SpaceGrid::new(4).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(SpaceGrid::new(3).is_err());
    }

    #[test]
    fn floor_and_nearest_indices_clamp() {
        let g = TimeGrid::new(1.0, 10).unwrap();
        assert_eq!(g.floor_index(-0.3), 0);
        assert_eq!(g.floor_index(0.25), 2);
        assert_eq!(g.floor_index(5.0), 10);
        assert_eq!(g.nearest_index(0.26), 3);
        assert_eq!(g.nearest_index(2.0), 10);
    }
}
