//! Smoothed Weyl counting for the D-ball and its residual against the exact staircase.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// `Γ(twice/2)` for positive `twice`, exact up to rounding of the product.
pub fn gamma_half_integer(twice: u32) -> f64 {
    assert!(twice > 0, "Γ has a pole at 0");
    if twice % 2 == 0 {
        (1..twice / 2).map(f64::from).product()
    } else {
        (0..twice / 2).map(|k| f64::from(k) + 0.5).product::<f64>() * PI.sqrt()
    }
}

/// Volume `ω_d = π^{d/2}/Γ(d/2+1)` of the unit `d`-ball; `ω_0 = 1`.
pub fn unit_ball_volume(d: u32) -> f64 {
    PI.powf(f64::from(d) / 2.0) / gamma_half_integer(d + 2)
}

/// Volume of the `dim`-ball of the given radius.
pub fn ball_volume(dim: u32, radius: f64) -> f64 {
    unit_ball_volume(dim) * radius.powi(dim as i32)
}

/// Hypersurface area of the boundary of the `dim`-ball.
pub fn ball_surface(dim: u32, radius: f64) -> f64 {
    2.0 * PI.powf(f64::from(dim) / 2.0) / gamma_half_integer(dim) * radius.powi(dim as i32 - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeylGeometry {
    pub dim: u32,
    pub radius: f64,
    pub volume: f64,
    pub surface: f64,
}

impl WeylGeometry {
    pub fn new(dim: u32, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            dim,
            radius,
            volume: ball_volume(dim, radius),
            surface: ball_surface(dim, radius),
        })
    }

    /// The ball of unit radius, matching spectra in box units.
    pub fn unit(dim: u32) -> Result<Self> {
        Self::new(dim, 1.0)
    }
}

/// Two-term Dirichlet estimate of the number of states with wavenumber ≤ `k`.
pub fn weyl_count(geom: &WeylGeometry, k: f64) -> f64 {
    let d = geom.dim as i32;
    let two_pi = 2.0 * PI;
    let bulk = unit_ball_volume(geom.dim) * geom.volume * (k / two_pi).powi(d);
    let wall = 0.25 * unit_ball_volume(geom.dim - 1) * geom.surface * (k / two_pi).powi(d - 1);
    bulk - wall
}

/// Leading-order term alone, `ω_D · Vol · (k/2π)^D`.
pub fn weyl_leading(geom: &WeylGeometry, k: f64) -> f64 {
    unit_ball_volume(geom.dim) * geom.volume * (k / (2.0 * PI)).powi(geom.dim as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeylPoint {
    pub k: f64,
    pub exact: u64,
    pub weyl: f64,
    pub residual: f64,
}

/// Exact staircase against the two-term estimate at each wavenumber (`E = k²`).
pub fn weyl_residual(spec: &Spectrum, k_grid: &[f64]) -> Result<Vec<WeylPoint>> {
    let geom = WeylGeometry::unit(spec.dim())?;
    k_grid
        .iter()
        .map(|&k| {
            if !(k > 0.0) {
                return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
            }
            let exact = spec.counting_function(k * k)?;
            let weyl = weyl_count(&geom, k);
            Ok(WeylPoint { k, exact, weyl, residual: exact as f64 - weyl })
        })
        .collect()
}
