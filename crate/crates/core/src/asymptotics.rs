//! Closed-form thermodynamic-limit predictions used as oracles for finite-N results.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weyl::unit_ball_volume;

/// Terms in the Borwein η acceleration; error ≈ 3·(3+√8)^{−n}.
const BORWEIN_TERMS: usize = 40;

/// Riemann ζ(s) for real `s > 1`.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("ζ(s) needs finite s > 1, got {s}")));
    }
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!), built by term ratios
    let n = BORWEIN_TERMS;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        if i > 0 {
            let (nf, i_f) = (n as f64, i as f64);
            term *= 4.0 * (nf + i_f - 1.0) * (nf - i_f + 1.0) / ((2.0 * i_f - 1.0) * (2.0 * i_f));
        }
        acc += term;
        d.push(n as f64 * acc);
    }
    let dn = d[n];
    let eta = -(0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (d[k] - dn) / ((k + 1) as f64).powf(s)
        })
        .sum::<f64>()
        / dn;
    Ok(eta / -(((1.0 - s) * std::f64::consts::LN_2).exp_m1()))
}

fn bose_dim(dim: u32) -> Result<f64> {
    if dim <= 2 {
        return Err(Error::Domain(format!("no condensation limit in D = {dim}: ζ(D/2) diverges")));
    }
    Ok(f64::from(dim) / 2.0)
}

/// `C_v/(N k_B)` at `T_c`: `(D/2)(D/2+1) ζ(D/2+1)/ζ(D/2)`.
pub fn cv_at_tc_limit(dim: u32) -> Result<f64> {
    let a = bose_dim(dim)?;
    Ok(a * (a + 1.0) * riemann_zeta(a + 1.0)? / riemann_zeta(a)?)
}

/// `U/(N k_B T_c)`: `(D/2) ζ(D/2+1)/ζ(D/2)`.
pub fn energy_at_tc_limit(dim: u32) -> Result<f64> {
    let a = bose_dim(dim)?;
    Ok(a * riemann_zeta(a + 1.0)? / riemann_zeta(a)?)
}

/// Sommerfeld slope of `C_v/(N k_B)` against `T/T_F`: `π² D/6`.
pub fn cv_slope_low_t(dim: u32) -> f64 {
    PI * PI * f64::from(dim) / 6.0
}

/// Fermi energy from the leading Weyl term at unit radius: `4π² (n/ω_D²)^{2/D}`.
pub fn fermi_energy_weyl(dim: u32, n: f64) -> f64 {
    let omega = unit_ball_volume(dim);
    4.0 * PI * PI * (n / (omega * omega)).powf(2.0 / f64::from(dim))
}

/// Upper bounds on `T_c`: `(π²/2) n` in D = 2, `π^{5/3} n^{2/3}` in D = 3.
pub fn tc_upper_bound(dim: u32, n: f64) -> Result<f64> {
    match dim {
        2 => Ok(PI * PI / 2.0 * n),
        3 => Ok(PI.powf(5.0 / 3.0) * n.powf(2.0 / 3.0)),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// `1 − t^{D/2}` for `t ∈ [0, 1]`.
pub fn condensate_fraction_limit(dim: u32, t: f64) -> Result<f64> {
    let a = bose_dim(dim)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("reduced temperature must lie in [0, 1], got {t}")));
    }
    Ok(1.0 - t.powf(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LimitQuantity {
    CvAtTc,
    EnergyAtTc,
    CvSlopeLowT,
    /// `c` in `E_F ≈ c · N^{2/D}`.
    FermiEnergyCoefficient,
    TcUpperBound { n: f64 },
    CondensateFraction { t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitPrediction {
    pub dim: u32,
    pub quantity: LimitQuantity,
    pub value: f64,
}

impl LimitPrediction {
    pub fn new(dim: u32, quantity: LimitQuantity) -> Result<Self> {
        let value = match quantity {
            LimitQuantity::CvAtTc => cv_at_tc_limit(dim)?,
            LimitQuantity::EnergyAtTc => energy_at_tc_limit(dim)?,
            LimitQuantity::CvSlopeLowT => cv_slope_low_t(dim),
            LimitQuantity::FermiEnergyCoefficient => fermi_energy_weyl(dim, 1.0),
            LimitQuantity::TcUpperBound { n } => tc_upper_bound(dim, n)?,
            LimitQuantity::CondensateFraction { t } => condensate_fraction_limit(dim, t)?,
        };
        Ok(Self { dim, quantity, value })
    }
}
