//! Uniform one-dimensional spatial mesh.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Uniform grid on `[-L, L]` with `num_points` nodes, `x_0 = -L` and
/// `x_{num_points-1} = +L` exact. Lengths and energies are in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_length: f64,
    num_points: usize,
}

impl Grid {
    /// Default mesh for one-electron work: `[-15, 15]` at spacing 0.1.
    pub fn default_1e() -> Self {
        Self::new(15.0, 301).expect("static grid parameters are valid")
    }

    /// Default mesh for two-electron work: `[-15, 15]` at spacing 0.2,
    /// keeping the antisymmetric pair basis near 11k states.
    pub fn default_2e() -> Self {
        Self::new(15.0, 151).expect("static grid parameters are valid")
    }

    pub fn new(half_length: f64, num_points: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(invalid("grid half length must be finite and positive"));
        }
        if num_points < 3 {
            return Err(invalid("grid needs at least 3 points"));
        }
        Ok(Self {
            half_length,
            num_points,
        })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / (self.num_points - 1) as f64
    }

    /// Node `x_i = L (2i - (n-1)) / (n-1)`; the endpoints land on `-L` and
    /// `+L` without accumulated rounding.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.num_points);
        let m = (self.num_points - 1) as f64;
        self.half_length * (2.0 * i as f64 - m) / m
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_points).map(move |i| self.point(i))
    }

    pub fn points_vec(&self) -> Vec<f64> {
        self.points().collect()
    }
}
