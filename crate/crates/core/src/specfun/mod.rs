//! Special functions on the critical line.
//!
//! The Hardy function `Z(t) = exp(i theta(t)) zeta(1/2 + it)` is evaluated
//! with an Euler-Maclaurin summation of `zeta` below [`RS_CROSSOVER`] and with
//! the Riemann-Siegel main sum plus the corrections `C0..C4` above it. Both
//! paths are exposed so they can be compared against each other.

mod euler_maclaurin;
mod primes;
#[allow(clippy::excessive_precision)]
mod rs_coeffs;

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use euler_maclaurin::{ln_gamma, zeta_critical_line};
pub use primes::{prime_count, SIEVE_LIMIT};

/// Euler's constant.
pub const EULER_C: f64 = 0.577_215_664_901_532_9;
/// `ln(2 pi)`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Smallest height accepted by the public evaluators.
pub const T_MIN: f64 = 1.0;
/// Heights at or above this use the Riemann-Siegel formula.
pub const RS_CROSSOVER: f64 = 250.0;
/// Heights at or above this use the asymptotic series for theta.
pub const THETA_ASYMPTOTIC_FROM: f64 = 20.0;

/// Named constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_c: f64,
    pub ln_2pi: f64,
    pub one_minus_c: f64,
    /// Additive constant of the ladder representation of the
    /// Hardy-Littlewood integral, fitted numerically (see
    /// [`crate::ladder::fit_c0`]).
    pub c0_estimate: f64,
}

pub const CONSTANTS: Constants = Constants {
    euler_c: EULER_C,
    ln_2pi: LN_2PI,
    one_minus_c: 1.0 - EULER_C,
    c0_estimate: crate::ladder::C0_ESTIMATE,
};

/// A height `t > 0` on the critical line.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CriticalHeight(f64);

impl CriticalHeight {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t > 0.0 {
            Ok(CriticalHeight(t))
        } else {
            Err(Error::domain("t", t, "finite and > 0"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn checked(self) -> Result<f64> {
        if self.0 < T_MIN {
            Err(Error::domain("t", self.0, format!("t >= t_min = {T_MIN}")))
        } else {
            Ok(self.0)
        }
    }
}

impl TryFrom<f64> for CriticalHeight {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        CriticalHeight::new(t)
    }
}

/// Riemann-Siegel theta function.
pub fn riemann_siegel_theta(t: CriticalHeight) -> Result<f64> {
    Ok(theta(t.checked()?))
}

/// Hardy's Z-function.
pub fn hardy_z(t: CriticalHeight) -> Result<f64> {
    Ok(hardy_z_raw(t.checked()?))
}

/// `|zeta(1/2 + it)|^2`, computed as `Z(t)^2`.
pub fn zeta_modulus_sq(t: CriticalHeight) -> Result<f64> {
    let z = hardy_z(t)?;
    Ok(z * z)
}

/// Theta without the domain check; valid for any `t >= 0`.
pub fn theta(t: f64) -> f64 {
    if t >= THETA_ASYMPTOTIC_FROM {
        let r = 1.0 / t;
        let r2 = r * r;
        let series = r
            * (1.0 / 48.0
                + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (381.0 / 1_290_240.0))));
        0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series
    } else {
        ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
    }
}

/// Z(t) without the domain check; valid for any `t >= 0`.
pub fn hardy_z_raw(t: f64) -> f64 {
    if t >= RS_CROSSOVER {
        hardy_z_riemann_siegel(t)
    } else {
        hardy_z_euler_maclaurin(t)
    }
}

/// Z(t) from the Euler-Maclaurin value of `zeta(1/2 + it)`.
pub fn hardy_z_euler_maclaurin(t: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, theta(t));
    (rot * zeta_critical_line(t)).re
}

/// Z(t) from the Riemann-Siegel formula with corrections `C0..C4`.
///
/// Accurate to about `1e-8` from `t = 200` on; below that the asymptotic
/// remainder degrades and [`hardy_z_euler_maclaurin`] should be used.
pub fn hardy_z_riemann_siegel(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta(t);
    let main = rs_main_sum(t, th, n);

    let w = 2.0 * p - 1.0;
    let inv_a = 1.0 / a;
    let corr = [
        &rs_coeffs::C0[..],
        &rs_coeffs::C1[..],
        &rs_coeffs::C2[..],
        &rs_coeffs::C3[..],
        &rs_coeffs::C4[..],
    ]
    .iter()
    .rev()
    .fold(0.0, |acc, c| acc * inv_a + horner(c, w));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * inv_a.sqrt() * corr
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

const SPF_LIMIT: usize = 1 << 16;

/// Smallest prime factor of every integer below `SPF_LIMIT`.
fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut spf = vec![0u32; SPF_LIMIT];
        for i in 2..SPF_LIMIT {
            if spf[i] == 0 {
                for j in (i..SPF_LIMIT).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        spf
    })
}

thread_local! {
    static PHASES: RefCell<Vec<(f64, f64)>> = const { RefCell::new(Vec::new()) };
}

/// `sum_{k<=n} k^{-1/2} cos(theta - t ln k)`.
///
/// `k^{-it}` is completely multiplicative, so only primes need a sin/cos.
fn rs_main_sum(t: f64, theta: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (s_th, c_th) = theta.sin_cos();
    if n >= SPF_LIMIT {
        return (1..=n)
            .map(|k| {
                let kf = k as f64;
                (theta - t * kf.ln()).cos() / kf.sqrt()
            })
            .sum();
    }
    let spf = spf_table();
    PHASES.with(|cell| {
        let mut ph = cell.borrow_mut();
        ph.clear();
        ph.resize(n + 1, (1.0, 0.0));
        let mut sum = c_th;
        for k in 2..=n {
            let p = spf[k] as usize;
            let (c, s) = if p == k {
                let (s, c) = (t * (k as f64).ln()).sin_cos();
                (c, s)
            } else {
                let (cp, sp) = ph[p];
                let (cm, sm) = ph[k / p];
                (cp * cm - sp * sm, sp * cm + cp * sm)
            };
            ph[k] = (c, s);
            sum += (c_th * c + s_th * s) / (k as f64).sqrt();
        }
        sum
    })
}
