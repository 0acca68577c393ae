//! Grand-canonical thermodynamics of an ideal gas in the box spectrum.
//!
//! Units: energies in `E_s`, temperatures in `T_s = E_s/k_B`, `k_B = 1`.
//! Sums run over levels in ascending energy, serially, so results are
//! bit-stable. Every sum is checked against a bound on the part of the
//! spectrum above the cutoff.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::weyl::unit_ball_volume;

/// Occupations beyond this reduced energy underflow to zero.
const X_UNDERFLOW: f64 = 745.0;
/// Largest allowed truncated tail relative to the computed sum.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Required particle-number accuracy of the chemical-potential solve.
pub const N_TOLERANCE: f64 = 1e-10;
/// Relative temperature step of the heat-capacity difference.
pub const CV_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub mu: f64,
    pub n_target: f64,
    pub n_achieved: f64,
    pub energy: f64,
    pub grand_potential: f64,
    pub entropy: f64,
    /// `−W / Vol_D` at unit radius.
    pub pressure: f64,
    pub heat_capacity: Option<f64>,
    /// `N_0/N`; bosons only.
    pub condensate_fraction: Option<f64>,
}

/// Mean occupation of one state.
pub fn occupancy(energy: f64, mu: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    check_temperature(temperature)?;
    let x = (energy - mu) / temperature;
    match stat {
        Statistics::Bose if !(x > 0.0) => Err(Error::Domain(format!(
            "Bose occupancy needs energy > mu, got E = {energy}, mu = {mu}"
        ))),
        _ => Ok(occupation(x, stat)),
    }
}

fn occupation(x: f64, stat: Statistics) -> f64 {
    match stat {
        Statistics::Bose => (-x).exp() / -(-x).exp_m1(),
        Statistics::Fermi if x > 0.0 => {
            let e = (-x).exp();
            e / (1.0 + e)
        }
        Statistics::Fermi => 1.0 / (1.0 + x.exp()),
    }
}

/// `ln(1 ∓ e^{−x})`: negative for bosons, positive for fermions.
fn log_term(x: f64, stat: Statistics) -> f64 {
    match stat {
        Statistics::Bose => (-(-x).exp_m1()).ln(),
        Statistics::Fermi if x > 0.0 => (-x).exp().ln_1p(),
        Statistics::Fermi => -x + x.exp().ln_1p(),
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("temperature must be positive and finite, got {t}")));
    }
    Ok(())
}

/// Reduced energies `x_i = (E_i − anchor)/T + offset`.
///
/// Bosons near condensation use `anchor = E_0` and a tiny positive offset,
/// which keeps `x_0` exact where `μ` itself would round onto `E_0`.
#[derive(Clone, Copy, Debug)]
struct Reduced {
    anchor: f64,
    offset: f64,
    temperature: f64,
}

impl Reduced {
    fn from_mu(mu: f64, temperature: f64) -> Self {
        Self { anchor: mu, offset: 0.0, temperature }
    }

    fn x(&self, energy: f64) -> f64 {
        (energy - self.anchor) / self.temperature + self.offset
    }

    fn mu(&self) -> f64 {
        self.anchor - self.temperature * self.offset
    }
}

#[derive(Clone, Copy, Debug)]
struct Totals {
    number: f64,
    energy: f64,
    /// `Σ g ln(1 ∓ e^{−x})`.
    log_sum: f64,
    /// `g_0 · n(E_0)`, zero when the ground level is skipped.
    ground: f64,
}

impl Totals {
    fn grand_potential(&self, t: f64, stat: Statistics) -> f64 {
        match stat {
            Statistics::Bose => t * self.log_sum,
            Statistics::Fermi => -t * self.log_sum,
        }
    }
}

fn totals(spec: &Spectrum, r: Reduced, stat: Statistics, skip_ground: bool) -> Result<Totals> {
    check_temperature(r.temperature)?;
    let levels = spec.levels();
    if skip_ground && levels.len() < 2 {
        return Err(Error::Cutoff("spectrum holds only the ground level".into()));
    }
    if stat == Statistics::Bose && !skip_ground && !(r.x(levels[0].energy) > 0.0) {
        return Err(Error::Domain(format!(
            "Bose chemical potential {} reaches the ground level {}",
            r.mu(),
            levels[0].energy
        )));
    }
    let mut sums = Totals { number: 0.0, energy: 0.0, log_sum: 0.0, ground: 0.0 };
    for (i, level) in levels.iter().enumerate() {
        if skip_ground && i == 0 {
            continue;
        }
        let x = r.x(level.energy);
        if x > X_UNDERFLOW {
            break;
        }
        let g = level.degeneracy as f64;
        let n = g * occupation(x, stat);
        if i == 0 {
            sums.ground = n;
        }
        sums.number += n;
        sums.energy += level.energy * n;
        sums.log_sum += g * log_term(x, stat);
    }
    check_tail(spec, r, stat, &sums, usize::from(skip_ground))?;
    Ok(sums)
}

/// Logarithms of upper bounds on `Σ_{E > e_max}` of the number and energy
/// summands, from the leading Weyl density and `Γ(b, z) ≤ z^{b−1} e^{−z} z/(z−b+1)`.
fn log_tail_bounds(spec: &Spectrum, r: Reduced, stat: Statistics) -> (f64, f64) {
    let d = spec.dim();
    let a = f64::from(d) / 2.0;
    let t = r.temperature;
    let z = spec.e_max() / t;
    let x_edge = r.x(spec.e_max());
    if !(x_edge > 0.0) || !(z > a) {
        return (f64::INFINITY, f64::INFINITY);
    }
    let omega = unit_ball_volume(d);
    let c = omega * omega / (2.0 * std::f64::consts::PI).powi(d as i32);
    let bose = match stat {
        Statistics::Bose => -(-(-x_edge).exp_m1()).ln(),
        Statistics::Fermi => 0.0,
    };
    let base = (c * a).ln() + bose - x_edge;
    let log_number = base + a * t.ln() + (a - 1.0) * z.ln() + (z / (z - a + 1.0)).ln();
    let log_energy = base + (a + 1.0) * t.ln() + a * z.ln() + (z / (z - a)).ln();
    (log_number, log_energy)
}

fn check_tail(spec: &Spectrum, r: Reduced, stat: Statistics, sums: &Totals, first: usize) -> Result<()> {
    let (log_number_tail, log_energy_tail) = log_tail_bounds(spec, r, stat);
    // the first summand bounds each sum from below even when the sums underflow:
    // n(x) and |ln(1 ∓ e^{−x})| both exceed e^{−x}/2 for x > 0
    let lead = &spec.levels()[first];
    let log_lead = (lead.degeneracy as f64).ln() - r.x(lead.energy).max(0.0) - std::f64::consts::LN_2;
    let floor = |sum: f64, extra: f64| sum.ln().max(log_lead + extra);
    // |ln(1 ∓ e^{−x})| is bounded by the occupation bound used for the number tail
    let checks = [
        ("particle number", log_number_tail, floor(sums.number, 0.0)),
        ("energy", log_energy_tail, floor(sums.energy, lead.energy.ln())),
        ("grand potential", log_number_tail, floor(sums.log_sum.abs(), 0.0)),
    ];
    for (what, log_tail, log_sum) in checks {
        if !(log_tail <= TAIL_TOLERANCE.ln() + log_sum) {
            return Err(Error::Cutoff(format!(
                "{what} tail {:.3e} above e_max = {} exceeds {TAIL_TOLERANCE:e} of the sum {:.6e} \
                 at T = {}, mu = {}",
                log_tail.exp(),
                spec.e_max(),
                log_sum.exp(),
                r.temperature,
                r.mu()
            )));
        }
    }
    Ok(())
}

/// `N = Σ g / (e^{(E−μ)/T} ∓ 1)`.
pub fn total_number(spec: &Spectrum, mu: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    Ok(totals(spec, Reduced::from_mu(mu, temperature), stat, false)?.number)
}

/// `E = Σ g E / (e^{(E−μ)/T} ∓ 1)`.
pub fn total_energy(spec: &Spectrum, mu: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    Ok(totals(spec, Reduced::from_mu(mu, temperature), stat, false)?.energy)
}

/// `W = −T ln Z`.
pub fn grand_potential(spec: &Spectrum, mu: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    let r = Reduced::from_mu(mu, temperature);
    Ok(totals(spec, r, stat, false)?.grand_potential(temperature, stat))
}

/// `S = (E − μN − W)/T`.
pub fn entropy_of(energy: f64, mu: f64, n: f64, grand_potential: f64, temperature: f64) -> f64 {
    (energy - mu * n - grand_potential) / temperature
}

fn check_target(spec: &Spectrum, n_target: f64, stat: Statistics) -> Result<()> {
    if !(n_target > 0.0) || !n_target.is_finite() {
        return Err(Error::Domain(format!("particle number must be positive, got {n_target}")));
    }
    if stat == Statistics::Fermi && n_target >= spec.total_states() as f64 {
        return Err(Error::Capacity(format!(
            "{n_target} fermions need more than the {} states below e_max = {}",
            spec.total_states(),
            spec.e_max()
        )));
    }
    Ok(())
}

/// Solve `N(μ) = n` and return the state in solver coordinates.
fn solve_reduced(spec: &Spectrum, n_target: f64, temperature: f64, stat: Statistics) -> Result<(Reduced, Totals)> {
    check_temperature(temperature)?;
    check_target(spec, n_target, stat)?;
    let e0 = spec.ground().energy;
    // both parametrizations make N increasing in the solver variable v
    let state = |v: f64| match stat {
        Statistics::Fermi => Reduced::from_mu(v, temperature),
        Statistics::Bose => Reduced { anchor: e0, offset: (-v).exp(), temperature },
    };
    let eval = |v: f64| totals(spec, state(v), stat, false);
    let excess = |v: f64| eval(v).map(|s| s.number - n_target);

    let (mut lo, mut hi) = match stat {
        Statistics::Fermi => {
            let guess = spec.fermi_energy((n_target.ceil() as u64).max(1))?;
            (guess - temperature, guess + temperature)
        }
        Statistics::Bose => (-1.0, 1.0),
    };
    let mut step = match stat {
        Statistics::Fermi => temperature.max(1.0),
        Statistics::Bose => 1.0,
    };
    let budget = 200;
    let mut f_lo = excess(lo)?;
    for _ in 0..budget {
        if f_lo <= 0.0 {
            break;
        }
        hi = lo;
        lo -= step;
        step *= 2.0;
        f_lo = excess(lo)?;
    }
    step = match stat {
        Statistics::Fermi => temperature.max(1.0),
        Statistics::Bose => 1.0,
    };
    let mut f_hi = excess(hi)?;
    for _ in 0..budget {
        if f_hi >= 0.0 {
            break;
        }
        lo = hi;
        f_lo = f_hi;
        hi += step;
        step *= 2.0;
        // y = ln((E_0 − μ)/T) below −700 leaves x_0 subnormal
        if stat == Statistics::Bose && hi > 700.0 {
            hi = 700.0;
        }
        f_hi = excess(hi)?;
    }
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(Error::NonConvergence(format!(
            "could not bracket N = {n_target} at T = {temperature}"
        )));
    }

    let tolerance = |a: f64, b: f64| match stat {
        Statistics::Fermi => 1e-13_f64.max(4.0 * f64::EPSILON * a.abs().max(b.abs())),
        Statistics::Bose => 1e-13,
    };
    for _ in 0..budget {
        if hi - lo <= tolerance(lo, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            f_lo = 0.0;
            f_hi = 0.0;
            break;
        }
        if f < 0.0 {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
            f_hi = f;
        }
    }

    let (mut best, mut best_f) = if f_hi.abs() < f_lo.abs() { (hi, f_hi) } else { (lo, f_lo) };
    if f_hi != f_lo {
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if secant > lo && secant < hi {
            let f = excess(secant)?;
            if f.abs() < best_f.abs() {
                best = secant;
                best_f = f;
            }
        }
    }
    if !(best_f.abs() <= N_TOLERANCE * n_target) {
        return Err(Error::NonConvergence(format!(
            "particle number off by {best_f:.3e} for N = {n_target} at T = {temperature}"
        )));
    }
    let r = state(best);
    Ok((r, eval(best)?))
}

/// Chemical potential at which the mean particle number equals `n_target`.
pub fn solve_mu(spec: &Spectrum, n_target: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    Ok(solve_reduced(spec, n_target, temperature, stat)?.0.mu())
}

/// Full thermodynamic state at fixed `N` and `T`.
pub fn thermo_point(
    spec: &Spectrum,
    n_target: f64,
    temperature: f64,
    stat: Statistics,
    with_cv: bool,
) -> Result<ThermoPoint> {
    let (r, sums) = solve_reduced(spec, n_target, temperature, stat)?;
    let mu = r.mu();
    let w = sums.grand_potential(temperature, stat);
    let heat_capacity = if with_cv {
        Some(heat_capacity(spec, n_target, temperature, stat)?)
    } else {
        None
    };
    Ok(ThermoPoint {
        temperature,
        mu,
        n_target,
        n_achieved: sums.number,
        energy: sums.energy,
        grand_potential: w,
        entropy: entropy_of(sums.energy, mu, sums.number, w, temperature),
        pressure: -w / unit_ball_volume(spec.dim()),
        heat_capacity,
        condensate_fraction: match stat {
            Statistics::Bose => Some(sums.ground / n_target),
            Statistics::Fermi => None,
        },
    })
}

/// `C_v = ∂E/∂T` at fixed `N`, by a central difference with relative step `CV_STEP`.
pub fn heat_capacity(spec: &Spectrum, n_target: f64, temperature: f64, stat: Statistics) -> Result<f64> {
    check_temperature(temperature)?;
    let (t_lo, t_hi) = (temperature * (1.0 - CV_STEP), temperature * (1.0 + CV_STEP));
    let e_lo = solve_reduced(spec, n_target, t_lo, stat)?.1.energy;
    let e_hi = solve_reduced(spec, n_target, t_hi, stat)?.1.energy;
    Ok((e_hi - e_lo) / (t_hi - t_lo))
}

/// Fermi temperature `T_F = E_F(n)` in units of `T_s`.
pub fn fermi_temperature(spec: &Spectrum, n: u64) -> Result<f64> {
    spec.fermi_energy(n)
}

/// Bose population of the excited levels with `μ` pinned at the ground level.
pub fn excited_population(spec: &Spectrum, temperature: f64) -> Result<f64> {
    let r = Reduced { anchor: spec.ground().energy, offset: 0.0, temperature };
    Ok(totals(spec, r, Statistics::Bose, true)?.number)
}

/// Temperature at which the excited levels hold `n` bosons with `μ = E_0`.
pub fn critical_temperature(spec: &Spectrum, n: f64) -> Result<f64> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("particle number must be positive, got {n}")));
    }
    let levels = spec.levels();
    let gap = levels
        .iter()
        .find(|level| level.energy > levels[0].energy)
        .map(|level| level.energy - levels[0].energy)
        .ok_or_else(|| Error::Cutoff("spectrum holds only the ground level".into()))?;
    let excess = |log_t: f64| excited_population(spec, log_t.exp()).map(|p| p - n);

    let mut lo = (gap / 50.0).ln();
    while excess(lo)? >= 0.0 {
        lo -= std::f64::consts::LN_2;
    }
    let mut hi = lo + std::f64::consts::LN_2;
    while excess(hi)? < 0.0 {
        lo = hi;
        hi += std::f64::consts::LN_2;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * hi.abs().max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Condensate fraction `N_0/N` at `T = t·T_c(n)` for each `t`; `t = 0` gives 1.
pub fn condensate_curve(spec: &Spectrum, n: f64, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let tc = critical_temperature(spec, n)?;
    t_grid
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok((t, 1.0));
            }
            if !(t > 0.0) {
                return Err(Error::Domain(format!("reduced temperature must be ≥ 0, got {t}")));
            }
            let point = thermo_point(spec, n, t * tc, Statistics::Bose, false)?;
            Ok((t, point.condensate_fraction.unwrap_or(0.0)))
        })
        .collect()
}
