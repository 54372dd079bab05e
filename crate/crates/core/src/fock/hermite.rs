//! Harmonic-oscillator eigenfunctions φ_n(x) and their overlap integrals
//! over half lines.
//!
//! The normalization matches the x̂ = (â† + â)/√2 convention: ∫ φ_n² dx = 1
//! and ⟨0|x̂²|0⟩ = 1/2. Values are generated by the stable three-term
//! recurrence φ_{n+1} = √(2/(n+1)) x φ_n − √(n/(n+1)) φ_{n−1}.
//!
//! Half-line integrals use composite Gauss-Legendre panels on [lo, x_max]
//! with x_max = √(2·max_n) + 6; beyond the classical turning point √(2n) the
//! integrand decays like a Gaussian, so the omitted tail is far below the
//! 1e-9 accuracy target.

use crate::error::{Error, Result};
use crate::math::panel_rule;
use ndarray::Array2;

const PANEL_WIDTH: f64 = 0.5;

fn x_max_for(max_n: usize) -> f64 {
    (2.0 * max_n as f64).sqrt() + 6.0
}

/// φ_n(x) tabulated on an evaluation grid, rows indexed by n.
#[derive(Debug, Clone)]
pub struct HermiteBasisCache {
    max_n: usize,
    grid: Vec<f64>,
    values: Array2<f64>,
}

impl HermiteBasisCache {
    /// Evaluates φ_0..φ_max_n on the supplied grid.
    pub fn on_grid(max_n: usize, grid: Vec<f64>) -> Self {
        let m = grid.len();
        let mut values = Array2::zeros((max_n + 1, m));
        for (i, &x) in grid.iter().enumerate() {
            values[[0, i]] = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
        }
        if max_n >= 1 {
            for (i, &x) in grid.iter().enumerate() {
                values[[1, i]] = std::f64::consts::SQRT_2 * x * values[[0, i]];
            }
        }
        for n in 1..max_n {
            let c1 = (2.0 / (n as f64 + 1.0)).sqrt();
            let c2 = (n as f64 / (n as f64 + 1.0)).sqrt();
            for (i, &x) in grid.iter().enumerate() {
                values[[n + 1, i]] = c1 * x * values[[n, i]] - c2 * values[[n - 1, i]];
            }
        }
        HermiteBasisCache {
            max_n,
            grid,
            values,
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Matrix of φ_n(x_i); row n, column i.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn value(&self, n: usize, i: usize) -> f64 {
        self.values[[n, i]]
    }
}

/// Table of partial overlaps ∫_lo^∞ φ_n(x) φ_m(x) dx for n, m ≤ max_n.
///
/// With lo = 0 these are the half-line overlaps G_{nm}; parity gives
/// G_{nm} = δ_{nm}/2 whenever n+m is even.
#[derive(Debug, Clone)]
pub struct HalfLineOverlaps {
    max_n: usize,
    lower: f64,
    table: Array2<f64>,
}

impl HalfLineOverlaps {
    /// Half-line overlaps from 0.
    pub fn new(max_n: usize) -> Self {
        HalfLineOverlaps::from_lower(max_n, 0.0)
    }

    /// Overlaps from a shifted lower bound lo ≥ 0 (used for region binning
    /// with middle half-width δ).
    pub fn from_lower(max_n: usize, lower: f64) -> Self {
        let hi = x_max_for(max_n);
        let (xs, ws) = panel_rule(lower, hi, PANEL_WIDTH);
        let table = if xs.is_empty() {
            Array2::zeros((max_n + 1, max_n + 1))
        } else {
            let cache = HermiteBasisCache::on_grid(max_n, xs);
            let mut weighted = cache.values().clone();
            for mut row in weighted.outer_iter_mut() {
                for (v, w) in row.iter_mut().zip(&ws) {
                    *v *= w;
                }
            }
            weighted.dot(&cache.values().t())
        };
        HalfLineOverlaps {
            max_n,
            lower,
            table,
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// G_{nm} = ∫_lo^∞ φ_n φ_m dx; symmetric in (n, m).
    pub fn overlap(&self, n: usize, m: usize) -> Result<f64> {
        if n > self.max_n || m > self.max_n {
            return Err(Error::invalid(format!(
                "overlap index ({n}, {m}) out of range for max_n = {}",
                self.max_n
            )));
        }
        Ok(self.table[[n, m]])
    }

    /// Borrowed table; entry [n][m].
    pub fn table(&self) -> &Array2<f64> {
        &self.table
    }
}

/// Convenience wrapper for a single half-line overlap G_{nm} from 0.
pub fn half_line_overlap(cache: &HalfLineOverlaps, n: usize, m: usize) -> Result<f64> {
    cache.overlap(n, m)
}
