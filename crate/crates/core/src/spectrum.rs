//! Single-particle spectrum of the D-dimensional spherical box.
//!
//! A level is one Bessel zero `j_{ν_l,s}` with `ν_l = l + (D−2)/2`; its
//! energy in box units `ħ²/(2MR²)` is `j²` and it carries the SO(D)
//! degeneracy `g_l`. Particles are spin-polarized throughout.

use rayon::prelude::*;

use crate::bessel::{self, BesselOrder, ZeroIndex};
use crate::error::{Error, Result};

/// Levels closer than this are treated as tied and ordered by `(l, s)`.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Quantum numbers `(l, s)` of one radial mode in dimension `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    dim: u32,
    l: u32,
    s: u32,
}

impl ModeIndex {
    pub fn new(dim: u32, l: u32, s: u32) -> Result<Self> {
        check_dim(dim)?;
        if s == 0 {
            return Err(Error::Domain("radial index s starts at 1".into()));
        }
        Ok(Self { dim, l, s })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Bessel order `ν_l = l + (D−2)/2`.
    pub fn order(&self) -> BesselOrder {
        bessel_order(self.dim, self.l)
    }

    /// The centrifugal index `L = l + (D−3)/2 = ν_l − 1/2` of the radial equation.
    pub fn radial_l(&self) -> f64 {
        self.order().nu() - 0.5
    }
}

/// One energy eigenvalue with its degeneracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub mode: ModeIndex,
    /// The Bessel zero `j_{ν_l,s}`.
    pub zero: f64,
    /// `zero²`, in units of `E_s`.
    pub energy: f64,
    pub degeneracy: u64,
}

/// A run of levels between consecutive returns of `l` to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shell {
    /// 1-based shell number.
    pub index: u32,
    /// Distinct `(l, s)` levels in the shell.
    pub level_count: u32,
    /// Degeneracy-weighted number of states in the shell.
    pub state_count: u64,
    /// First and last position (0-based, inclusive) in the
    /// degeneracy-expanded sorted state sequence.
    pub start_position: u64,
    pub end_position: u64,
}

fn check_dim(dim: u32) -> Result<()> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

fn bessel_order(dim: u32, l: u32) -> BesselOrder {
    BesselOrder::from_twice(2 * l + dim - 2)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// SO(D) degeneracy `g_l = (2l+D−2)/(l+D−2) · C(l+D−2, l)`, exact.
pub fn degeneracy(dim: u32, l: u32) -> Result<u64> {
    check_dim(dim)?;
    if dim == 2 {
        return Ok(if l == 0 { 1 } else { 2 });
    }
    // g_l = C(l+D−3, D−3) · (2l+D−2) / (D−2)
    let (d, l) = (u128::from(dim), u128::from(l));
    let overflow = || Error::Overflow(format!("degeneracy g_{l} in D={dim}"));
    let g = binomial(l + d - 3, d - 3)
        .and_then(|c| c.checked_mul(2 * l + d - 2))
        .ok_or_else(overflow)?
        / (d - 2);
    u64::try_from(g).map_err(|_| overflow())
}

/// Immutable, energy-sorted list of levels up to a cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    dim: u32,
    e_max: f64,
    levels: Vec<Level>,
    /// Inclusive prefix sums of degeneracies.
    cumulative: Vec<u64>,
}

/// Build the spectrum of dimension `dim` up to energy `e_max`.
pub fn build_spectrum(dim: u32, e_max: f64) -> Result<Spectrum> {
    Spectrum::build(dim, e_max)
}

impl Spectrum {
    pub fn build(dim: u32, e_max: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(e_max > 0.0) || !e_max.is_finite() {
            return Err(Error::Domain(format!("e_max must be positive and finite, got {e_max}")));
        }
        let first = ZeroIndex::new(1)?;
        let ground = bessel::zero(bessel_order(dim, 0), first)?;
        if ground * ground > e_max {
            return Err(Error::Cutoff(format!(
                "e_max = {e_max} lies below the ground level {} in D={dim}",
                ground * ground
            )));
        }
        let k_max = e_max.sqrt();
        let x_max = k_max * (1.0 + 4.0 * f64::EPSILON);
        // j_{ν,1} > ν, so orders with ν ≥ k_max contribute nothing
        let nu0 = f64::from(dim - 2) / 2.0;
        let l_bound = ((k_max - nu0).ceil().max(1.0)) as u32;

        let per_l: Vec<Vec<Level>> = (0..l_bound)
            .into_par_iter()
            .map(|l| -> Result<Vec<Level>> {
                let g = degeneracy(dim, l)?;
                let zeros = bessel::zeros_up_to(bessel_order(dim, l), x_max)?;
                Ok(zeros
                    .into_iter()
                    .zip(1..)
                    .map(|(zero, s)| Level {
                        mode: ModeIndex { dim, l, s },
                        zero,
                        energy: zero * zero,
                        degeneracy: g,
                    })
                    .filter(|level| level.energy <= e_max)
                    .collect())
            })
            .collect::<Result<_>>()?;

        let l_last = per_l.iter().rposition(|v| !v.is_empty()).unwrap_or(0) as u32;
        let guard = bessel::zero(bessel_order(dim, l_last + 1), first)?;
        if guard * guard <= e_max {
            return Err(Error::RootFailure(format!(
                "l = {} has a level {} below e_max = {e_max} but was not enumerated",
                l_last + 1,
                guard * guard
            )));
        }

        let mut levels: Vec<Level> = per_l.into_iter().flatten().collect();
        sort_levels(&mut levels);
        Ok(Self::assemble(dim, e_max, levels))
    }

    /// Rebuild a spectrum from stored levels, checking every invariant.
    pub fn from_levels(dim: u32, e_max: f64, levels: Vec<Level>) -> Result<Self> {
        check_dim(dim)?;
        if levels.is_empty() {
            return Err(Error::Format("spectrum has no levels".into()));
        }
        for pair in levels.windows(2) {
            if pair[1].energy < pair[0].energy {
                return Err(Error::Format("levels are not sorted by energy".into()));
            }
        }
        for level in &levels {
            let m = level.mode;
            if m.dim != dim || m.s == 0 {
                return Err(Error::Format(format!("bad mode {m:?} for D={dim}")));
            }
            if level.energy != level.zero * level.zero || level.energy > e_max {
                return Err(Error::Format(format!("inconsistent energy for mode {m:?}")));
            }
            if level.degeneracy != degeneracy(dim, m.l)? {
                return Err(Error::Format(format!("wrong degeneracy for mode {m:?}")));
            }
        }
        Ok(Self::assemble(dim, e_max, levels))
    }

    fn assemble(dim: u32, e_max: f64, levels: Vec<Level>) -> Self {
        let cumulative = levels
            .iter()
            .scan(0u64, |acc, level| {
                *acc += level.degeneracy;
                Some(*acc)
            })
            .collect();
        Self { dim, e_max, levels, cumulative }
    }

    /// The part of this spectrum at or below `e_max`.
    pub fn restrict(&self, e_max: f64) -> Result<Self> {
        if e_max > self.e_max {
            return Err(Error::Range(format!(
                "cannot extend a spectrum built to {} up to {e_max}",
                self.e_max
            )));
        }
        let keep = self.levels.partition_point(|level| level.energy <= e_max);
        if keep == 0 {
            return Err(Error::Cutoff(format!("e_max = {e_max} lies below the ground level")));
        }
        Ok(Self::assemble(self.dim, e_max, self.levels[..keep].to_vec()))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn ground(&self) -> &Level {
        &self.levels[0]
    }

    pub fn total_states(&self) -> u64 {
        *self.cumulative.last().unwrap_or(&0)
    }

    /// Number of states with energy ≤ `energy` (closed staircase).
    pub fn counting_function(&self, energy: f64) -> Result<u64> {
        if energy > self.e_max {
            return Err(Error::Range(format!(
                "staircase queried at {energy} beyond the cutoff {}",
                self.e_max
            )));
        }
        let below = self.levels.partition_point(|level| level.energy <= energy);
        Ok(if below == 0 { 0 } else { self.cumulative[below - 1] })
    }

    fn level_holding(&self, n: u64) -> Result<usize> {
        if n == 0 {
            return Err(Error::Domain("particle number must be positive".into()));
        }
        if n > self.total_states() {
            return Err(Error::Capacity(format!(
                "{n} particles requested but only {} states lie below e_max = {}",
                self.total_states(),
                self.e_max
            )));
        }
        Ok(self.cumulative.partition_point(|&c| c < n))
    }

    /// Energy of the level holding the `n`-th particle, one per state.
    pub fn fermi_energy(&self, n: u64) -> Result<f64> {
        Ok(self.levels[self.level_holding(n)?].energy)
    }

    /// Largest `l` among the lowest `n` states.
    pub fn max_angular_momentum(&self, n: u64) -> Result<u32> {
        let last = self.level_holding(n)?;
        Ok(self.levels[..=last].iter().map(|level| level.mode.l).max().unwrap_or(0))
    }

    /// Split the sorted levels into shells, each opening at an `l = 0` level.
    pub fn shell_decomposition(&self) -> Vec<Shell> {
        let mut shells: Vec<Shell> = Vec::new();
        let mut position = 0u64;
        for level in &self.levels {
            if level.mode.l == 0 || shells.is_empty() {
                shells.push(Shell {
                    index: shells.len() as u32 + 1,
                    level_count: 0,
                    state_count: 0,
                    start_position: position,
                    end_position: position,
                });
            }
            let shell = shells.last_mut().expect("pushed above");
            shell.level_count += 1;
            shell.state_count += level.degeneracy;
            position += level.degeneracy;
            shell.end_position = position - 1;
        }
        shells
    }
}

/// Ascending energy; near-ties resolved by `(l, s)`.
fn sort_levels(levels: &mut [Level]) {
    let key = |a: &Level| (a.mode.l, a.mode.s);
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(key(a).cmp(&key(b))));
    let mut start = 0;
    while start < levels.len() {
        let mut end = start + 1;
        while end < levels.len() && levels[end].energy - levels[end - 1].energy < TIE_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            levels[start..end].sort_by_key(key);
        }
        start = end;
    }
}
