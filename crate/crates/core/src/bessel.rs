//! Bessel functions of the first kind `J_ν(x)` for integer and half-integer
//! order, and their positive zeros `j_{ν,s}`.
//!
//! Evaluation picks one of five regimes:
//!
//! * `ν = 1/2`: the closed form `√(2/(πx)) sin x`.
//! * `x > 40 + ν²`: Hankel's asymptotic expansion (terminates exactly for
//!   half-integer orders).
//! * `x ≤ 2` or `x² < ν + 1`: the ascending power series, which converges
//!   without cancellation there.
//! * `ν ≤ x`: upward recurrence, seeded by the trigonometric forms for
//!   half-integer orders or by the Hankel values of `J_0`, `J_1` for
//!   integer orders once `x > 41`.
//! * otherwise: Miller's backward recurrence, normalized by
//!   `J_0² + 2ΣJ_k² = 1` (integer orders) or by a least-squares match to
//!   the exact `J_{±1/2}` (half-integer orders).
//!
//! Zeros are located by scanning sign changes on a probe grid of spacing
//! `π/2`, which is finer than the smallest gap between consecutive zeros,
//! and refined by Newton steps safeguarded to stay inside the bracket.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};

const HANKEL_OFFSET: f64 = 40.0;
const SERIES_LIMIT: f64 = 2.0;
const RESCALE_AT: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;

/// Probe spacing for the sign-change scan.
const PROBE_STEP: f64 = FRAC_PI_2;
const MAX_REFINE_ITER: usize = 100;
/// Largest residual `|J_ν(j)|` accepted at a refined zero.
const RESIDUAL_LIMIT: f64 = 1e-10;

/// Order `ν` of a Bessel function, restricted to integers and
/// half-integers. Stored as `2ν` so both kinds are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesselOrder {
    twice_nu: u32,
}

impl BesselOrder {
    pub const fn from_twice(twice_nu: u32) -> Self {
        Self { twice_nu }
    }

    /// Integer order `n`.
    pub const fn integer(n: u32) -> Self {
        Self { twice_nu: 2 * n }
    }

    /// Half-integer order `n + 1/2`.
    pub const fn half_integer(n: u32) -> Self {
        Self { twice_nu: 2 * n + 1 }
    }

    pub const fn twice_nu(self) -> u32 {
        self.twice_nu
    }

    pub fn nu(self) -> f64 {
        f64::from(self.twice_nu) / 2.0
    }

    pub const fn is_half_integer(self) -> bool {
        self.twice_nu % 2 == 1
    }
}

impl fmt::Display for BesselOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.twice_nu)
        } else {
            write!(f, "{}", self.twice_nu / 2)
        }
    }
}

/// 1-based index `s` of a positive zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroIndex(u32);

impl ZeroIndex {
    pub fn new(s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::Domain("zero index must be at least 1".into()));
        }
        Ok(Self(s))
    }

    pub const fn get(self) -> u32 {
        self.0
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel argument must be positive and finite, got {x}")))
    }
}

/// `J_ν(x)` for `x > 0`.
pub fn eval_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(j_pair(order.twice_nu, x).1)
}

/// `dJ_ν/dx`, from `J'_ν = J_{ν−1} − (ν/x) J_ν`.
pub fn eval_j_prime(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    let (lower, value) = j_pair(order.twice_nu, x);
    Ok(lower - order.nu() / x * value)
}

/// Returns `(J_{ν−1}(x), J_ν(x))`, using `J_{−1} = −J_1`.
fn j_pair(twice: u32, x: f64) -> (f64, f64) {
    let nu = f64::from(twice) / 2.0;
    if twice == 1 {
        let (s, c) = x.sin_cos();
        let amp = (2.0 / (PI * x)).sqrt();
        return (amp * c, amp * s);
    }
    if x > HANKEL_OFFSET + nu * nu {
        let t = i64::from(twice);
        return (hankel(t - 2, x), hankel(t, x));
    }
    if x <= SERIES_LIMIT || x * x < nu + 1.0 {
        let lower = if twice == 0 { -series(2, x) } else { series(twice - 2, x) };
        return (lower, series(twice, x));
    }
    if twice % 2 == 1 {
        if nu <= x {
            upward_half(twice, x)
        } else {
            miller_half(twice, x)
        }
    } else if nu <= x && x > HANKEL_OFFSET + 1.0 {
        upward_integer(twice, x)
    } else {
        miller_integer(twice, x)
    }
}

/// Ascending series `(x/2)^ν Σ (−x²/4)^k / (k! Γ(ν+k+1))`.
fn series(twice: u32, x: f64) -> f64 {
    let nu = f64::from(twice) / 2.0;
    let half = 0.5 * x;
    let (mut prefactor, offset) = if twice % 2 == 0 {
        (1.0, 0.0)
    } else {
        // Γ(3/2) = √π/2
        (half.sqrt() / (0.5 * PI.sqrt()), 0.5)
    };
    for i in 1..=twice / 2 {
        prefactor *= half / (f64::from(i) + offset);
    }
    if prefactor == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..300 {
        let k = f64::from(k);
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

/// Hankel expansion `√(2/(πx)) (P cos χ − Q sin χ)`, `χ = x − (2ν+1)π/4`.
/// Valid for negative orders as well (`twice` may be −1 or −2).
fn hankel(twice: i64, x: f64) -> f64 {
    let four_nu_sq = (twice * twice) as f64;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut previous = f64::INFINITY;
    for k in 1..200_i64 {
        let odd = (2 * k - 1) as f64;
        let next = term * (four_nu_sq - odd * odd) / (k as f64 * eight_x);
        if next == 0.0 || next.abs() >= previous {
            break;
        }
        term = next;
        previous = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * (p.abs() + q.abs()) {
            break;
        }
    }
    // (2ν+1)π/4 is a multiple of π/4, so its cosine and sine are exact.
    const COS: [f64; 8] = [1.0, FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2, -1.0, -FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2];
    const SIN: [f64; 8] = [0.0, FRAC_1_SQRT_2, 1.0, FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2, -1.0, -FRAC_1_SQRT_2];
    let m = (twice + 1).rem_euclid(8) as usize;
    let (s, c) = x.sin_cos();
    let cos_chi = c * COS[m] + s * SIN[m];
    let sin_chi = s * COS[m] - c * SIN[m];
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn upward_half(twice: u32, x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let mut lower = amp * c;
    let mut current = amp * s;
    for i in 0..(twice - 1) / 2 {
        let n = 0.5 + f64::from(i);
        let next = (2.0 * n / x) * current - lower;
        lower = current;
        current = next;
    }
    (lower, current)
}

fn upward_integer(twice: u32, x: f64) -> (f64, f64) {
    let j0 = hankel(0, x);
    let j1 = hankel(2, x);
    if twice == 0 {
        return (-j1, j0);
    }
    let mut lower = j0;
    let mut current = j1;
    for n in 1..twice / 2 {
        let next = (2.0 * f64::from(n) / x) * current - lower;
        lower = current;
        current = next;
    }
    (lower, current)
}

fn miller_start(nu: f64, x: f64) -> u32 {
    let top = nu.max(x);
    (top + 12.0 * top.cbrt() + 30.0).ceil() as u32
}

fn miller_integer(twice: u32, x: f64) -> (f64, f64) {
    let order = twice / 2;
    let start = miller_start(f64::from(order), x).max(order + 2);
    let mut above = 0.0;
    let mut current = 1.0;
    let mut sum_sq = 0.0;
    let (mut at_order, mut below_order, mut at_one) = (0.0, 0.0, 0.0);
    let mut n = start;
    loop {
        if n == order {
            at_order = current;
        }
        if n + 1 == order {
            below_order = current;
        }
        if n == 1 {
            at_one = current;
        }
        if n == 0 {
            sum_sq += current * current;
            break;
        }
        sum_sq += 2.0 * current * current;
        let next = (2.0 * f64::from(n) / x) * current - above;
        above = current;
        current = next;
        n -= 1;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            at_order *= RESCALE_BY;
            below_order *= RESCALE_BY;
            at_one *= RESCALE_BY;
            sum_sq *= RESCALE_BY * RESCALE_BY;
        }
    }
    let norm = sum_sq.sqrt();
    if order == 0 {
        (-at_one / norm, at_order / norm)
    } else {
        (below_order / norm, at_order / norm)
    }
}

fn miller_half(twice: u32, x: f64) -> (f64, f64) {
    // order of index i is i + 1/2
    let target = (twice - 1) / 2;
    let start = miller_start(f64::from(twice) / 2.0, x).max(target + 2);
    let mut above = 0.0;
    let mut current = 1.0;
    let (mut at_order, mut below_order) = (0.0, 0.0);
    let mut i = start;
    let (f_half, f_minus_half) = loop {
        if i == target {
            at_order = current;
        }
        if i + 1 == target {
            below_order = current;
        }
        let next = (2.0 * (f64::from(i) + 0.5) / x) * current - above;
        if i == 0 {
            break (current, next);
        }
        above = current;
        current = next;
        i -= 1;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            at_order *= RESCALE_BY;
            below_order *= RESCALE_BY;
        }
    };
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let scale = (amp * s * f_half + amp * c * f_minus_half)
        / (f_half * f_half + f_minus_half * f_minus_half);
    (below_order * scale, at_order * scale)
}

/// McMahon's leading estimate `(s + ν/2 − 1/4)π`. Only ever a seed.
pub fn mcmahon_guess(order: BesselOrder, index: ZeroIndex) -> f64 {
    (f64::from(index.get()) + 0.5 * order.nu() - 0.25) * PI
}

/// Walks the positive zeros of `J_ν` in increasing order.
struct ZeroScan {
    twice: u32,
    start: f64,
    probe: u64,
    x: f64,
    value: f64,
}

impl ZeroScan {
    fn new(order: BesselOrder) -> Self {
        // J_ν > 0 on (0, j_{ν,1}) and j_{ν,1} > max(ν, 2.4)
        let start = order.nu().max(1.0);
        let value = j_pair(order.twice_nu, start).1;
        Self { twice: order.twice_nu, start, probe: 0, x: start, value }
    }

    /// Next zero whose bracket starts at or below `limit`; `None` once the
    /// scan has passed `limit`.
    fn next_until(&mut self, limit: f64) -> Option<Result<f64>> {
        while self.x <= limit {
            self.probe += 1;
            let x_hi = self.start + self.probe as f64 * PROBE_STEP;
            let f_hi = j_pair(self.twice, x_hi).1;
            let (x_lo, f_lo) = (self.x, self.value);
            self.x = x_hi;
            if f_hi == 0.0 {
                // keep the sign the function takes just beyond the zero
                self.value = -f_lo;
                return Some(Ok(x_hi));
            }
            self.value = f_hi;
            if (f_hi > 0.0) != (f_lo > 0.0) {
                return Some(refine(self.twice, x_lo, f_lo, x_hi, f_hi));
            }
        }
        None
    }
}

/// Newton iteration kept inside the sign-change bracket `[a, b]`, falling
/// back to bisection whenever a step would leave it.
fn refine(twice: u32, mut a: f64, mut fa: f64, mut b: f64, fb: f64) -> Result<f64> {
    let nu = f64::from(twice) / 2.0;
    let mut x = a - fa * (b - a) / (fb - fa);
    if !(x > a && x < b) {
        x = 0.5 * (a + b);
    }
    for _ in 0..MAX_REFINE_ITER {
        let (lower, value) = j_pair(twice, x);
        if value == 0.0 {
            return Ok(x);
        }
        if (value > 0.0) == (fa > 0.0) {
            a = x;
            fa = value;
        } else {
            b = x;
        }
        let slope = lower - nu / x * value;
        let mut next = x - value / slope;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        let tol = 4.0 * f64::EPSILON * x;
        if (next - x).abs() <= tol || b - a <= tol {
            if value.abs() > RESIDUAL_LIMIT {
                return Err(Error::RootFailure(format!(
                    "|J_{}({x})| = {:e} after convergence",
                    BesselOrder::from_twice(twice),
                    value.abs()
                )));
            }
            return Ok(next);
        }
        x = next;
    }
    Err(Error::RootFailure(format!(
        "zero of J_{} in [{a}, {b}] not converged after {MAX_REFINE_ITER} steps",
        BesselOrder::from_twice(twice)
    )))
}

/// The `s`-th positive zero `j_{ν,s}`.
///
/// The bracket comes from counting sign changes along the probe grid, so the
/// index is exact even where the McMahon estimate is far off.
pub fn zero(order: BesselOrder, index: ZeroIndex) -> Result<f64> {
    let mut scan = ZeroScan::new(order);
    let mut found = 0;
    loop {
        match scan.next_until(f64::INFINITY) {
            Some(Ok(root)) => {
                found += 1;
                if found == index.get() {
                    return Ok(root);
                }
            }
            Some(Err(e)) => return Err(e),
            None => unreachable!("unbounded scan always yields"),
        }
    }
}

/// Every zero `j_{ν,s} ≤ x_max`, increasing.
pub fn zeros_up_to(order: BesselOrder, x_max: f64) -> Result<Vec<f64>> {
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::Domain(format!("x_max must be positive and finite, got {x_max}")));
    }
    let mut scan = ZeroScan::new(order);
    let mut zeros = Vec::new();
    while let Some(root) = scan.next_until(x_max) {
        let root = root?;
        if root > x_max {
            break;
        }
        zeros.push(root);
    }
    Ok(zeros)
}
