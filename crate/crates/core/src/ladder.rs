//! The ladder `phi(T)`: the root in `x` of
//! `int_0^{mu_a(x)} Z^2(t) exp(-2t/x) dt = int_0^T Z^2(t) dt`,
//! together with `phi_1 = phi / 2`, its inverse and derivative.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlgrid::{mu_a, CumulativeZGrid};
use crate::specfun::{self, EULER_C, LN_2PI, T_MIN};

/// Fitted constant term of `F(T) - phi_1 ln phi_1 - (c - ln 2 pi) phi_1`.
///
/// Mean residual over 24 log-spaced `T` in `[2e4, 1e5]` (see [`fit_c0`]).
/// Below that range the residual still carries a transient of about
/// `3 / (T ln T)`, which is why the fit starts at `2e4`.
pub const C0_ESTIMATE: f64 = 3.1415849584692901;

/// Range of `T` over which [`C0_ESTIMATE`] was fitted.
pub const C0_FIT_RANGE: (f64, f64) = (2e4, 1e5);

const MAX_ITERATIONS: usize = 200;
const MAX_EXPANSIONS: u32 = 10;
const NEWTON_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Parameter of the upper limit `mu_a(x) = a x ln x`, in `[7, 8]`.
    pub a: f64,
    /// Smallest admissible `T`.
    pub t0: f64,
    pub root_rel_tol: f64,
    pub bracket_factor: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            a: 7.0,
            t0: 100.0,
            root_rel_tol: 1e-10,
            bracket_factor: 4.0,
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(7.0..=8.0).contains(&self.a) {
            return Err(Error::domain("a", self.a, "a in [7, 8]"));
        }
        if !(self.t0 >= T_MIN && self.t0.is_finite()) {
            return Err(Error::domain("T0", self.t0, format!("T0 >= {T_MIN}")));
        }
        if !(self.root_rel_tol > 0.0) {
            return Err(Error::domain("root_rel_tol", self.root_rel_tol, "> 0"));
        }
        if !(self.bracket_factor > 1.0 && self.bracket_factor.is_finite()) {
            return Err(Error::domain("bracket_factor", self.bracket_factor, "> 1"));
        }
        Ok(())
    }
}

/// Solver for the ladder on a fixed grid, memoizing solved points.
#[derive(Debug)]
pub struct Ladder<'g> {
    config: LadderConfig,
    grid: &'g CumulativeZGrid,
    memo: RwLock<HashMap<u64, f64>>,
}

/// Safeguarded Newton iteration on a bracketed increasing function.
///
/// `f` returns the value and derivative. `lo`/`hi` must satisfy
/// `f(lo) < 0 < f(hi)`.
fn newton_bisect<F>(what: &'static str, at: f64, f: &F, mut lo: f64, mut hi: f64, start: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let mut x = start.clamp(lo, hi);
    let mut dx_old = hi - lo;
    let (mut fx, mut dfx) = f(x)?;
    for _ in 0..MAX_ITERATIONS {
        if fx == 0.0 {
            return Ok((x, fx));
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi && (fx / dfx).abs() < 0.5 * dx_old {
            newton
        } else {
            0.5 * (lo + hi)
        };
        dx_old = (next - x).abs();
        let converged = dx_old <= 4.0 * f64::EPSILON * x.abs() || hi - lo <= 4.0 * f64::EPSILON * x.abs();
        x = next;
        (fx, dfx) = f(x)?;
        if converged {
            return Ok((x, fx));
        }
    }
    Err(Error::NoConvergence {
        what,
        at,
        iterations: MAX_ITERATIONS,
        residual: fx,
    })
}

/// Plain Newton from `x`, kept inside `(floor, ceiling)`. Returns `None` when
/// an iterate leaves the interval or the iteration stalls, so the caller can
/// fall back to bracketing.
fn newton_unbracketed<F>(f: &F, mut x: f64, floor: f64, ceiling: f64) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    for _ in 0..NEWTON_STEPS {
        let (fx, dfx) = f(x)?;
        if !(dfx > 0.0) {
            return Ok(None);
        }
        let dx = fx / dfx;
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(Some((x, fx)));
        }
        x -= dx;
        if !(x > floor && x < ceiling) {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Bracket the root of an increasing `f` by stepping geometrically outwards
/// from `guess`, staying inside `[floor, ceiling]`.
fn bracket_from<F>(what: &'static str, at: f64, f: &F, guess: f64, floor: f64, ceiling: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (fg, _) = f(guess)?;
    if fg == 0.0 {
        return Ok((guess, guess));
    }
    let mut step = 1e-3 * guess;
    let mut inner = guess;
    for _ in 0..64 {
        let outer = if fg < 0.0 {
            (inner + step).min(ceiling)
        } else {
            (inner - step).max(floor)
        };
        let (fo, _) = f(outer)?;
        if (fg < 0.0) == (fo >= 0.0) {
            return Ok(if fg < 0.0 { (inner, outer) } else { (outer, inner) });
        }
        if outer == ceiling || outer == floor {
            return Err(Error::Bracket {
                what,
                at,
                detail: format!("no sign change between {guess} and {outer}"),
            });
        }
        inner = outer;
        step *= 4.0;
    }
    Err(Error::Bracket {
        what,
        at,
        detail: "bracket expansion exhausted".into(),
    })
}

impl<'g> Ladder<'g> {
    pub fn new(grid: &'g CumulativeZGrid, config: LadderConfig) -> Result<Self> {
        config.validate()?;
        Ok(Ladder {
            config,
            grid,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &LadderConfig {
        &self.config
    }

    pub fn grid(&self) -> &'g CumulativeZGrid {
        self.grid
    }

    fn check_t(&self, what: &'static str, t: f64) -> Result<()> {
        if !(t >= self.config.t0 && t.is_finite()) {
            return Err(Error::domain(what, t, format!("T >= T0 = {}", self.config.t0)));
        }
        Ok(())
    }

    /// Memoized `(T, phi(T))` pairs in increasing `T`.
    pub fn memo_snapshot(&self) -> Vec<(f64, f64)> {
        let memo = self.memo.read().unwrap();
        let mut out: Vec<(f64, f64)> = memo.iter().map(|(k, v)| (f64::from_bits(*k), *v)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// `phi(T)`, the root `x` of `damped_integral(x) = F(T)`.
    pub fn solve_phi(&self, t: f64) -> Result<f64> {
        self.check_t("T", t)?;
        if let Some(x) = self.memo.read().unwrap().get(&t.to_bits()) {
            return Ok(*x);
        }
        let x = self.solve_uncached(t)?;
        self.memo.write().unwrap().insert(t.to_bits(), x);
        Ok(x)
    }

    fn solve_uncached(&self, t: f64) -> Result<f64> {
        let target = self.grid.hl_integral(t)?;
        let a = self.config.a;
        let f = |x: f64| -> Result<(f64, f64)> {
            let (v, d) = self.grid.damped_with_derivative(x, a)?;
            Ok((v - target, d))
        };
        let floor = t;
        let mut ceiling = self.config.bracket_factor * t;
        let guess = (2.0 * representation_inverse(target, t)).clamp(floor, ceiling);
        let (x, residual) = match newton_unbracketed(&f, guess, floor, ceiling)? {
            Some(root) => root,
            None => {
                let mut expansions = 0;
                let (lo, hi) = loop {
                    match bracket_from("phi", t, &f, guess, floor, ceiling) {
                        Ok(b) => break b,
                        Err(Error::Bracket { .. }) if f(guess)?.0 < 0.0 && expansions < MAX_EXPANSIONS => {
                            ceiling *= 2.0;
                            expansions += 1;
                        }
                        Err(e) => return Err(e),
                    }
                };
                if lo == hi {
                    (lo, 0.0)
                } else {
                    newton_bisect("phi", t, &f, lo, hi, 0.5 * (lo + hi))?
                }
            }
        };
        if residual.abs() > self.config.root_rel_tol * target {
            return Err(Error::NoConvergence {
                what: "phi",
                at: t,
                iterations: MAX_ITERATIONS,
                residual,
            });
        }
        Ok(x)
    }

    /// `phi_1(T) = phi(T) / 2`.
    pub fn phi1(&self, t: f64) -> Result<f64> {
        Ok(0.5 * self.solve_phi(t)?)
    }

    /// `T` with `phi_1(T) = y`, found from `F(T) = damped_integral(2y)`.
    pub fn phi1_inverse(&self, y: f64) -> Result<f64> {
        self.check_t("y", y)?;
        let target = self.grid.damped_integral(2.0 * y, self.config.a)?;
        let f = |t: f64| -> Result<(f64, f64)> {
            let z = specfun::hardy_z_raw(t);
            Ok((self.grid.hl_integral(t)? - target, z * z))
        };
        let guess = y + (1.0 - EULER_C) * y / y.ln();
        let ceiling = (self.config.bracket_factor * y).min(self.grid.t_max());
        let (lo, hi) = bracket_from("phi1_inverse", y, &f, guess.min(ceiling), y, ceiling)?;
        if lo == hi {
            return Ok(lo);
        }
        Ok(newton_bisect("phi1_inverse", y, &f, lo, hi, 0.5 * (lo + hi))?.0)
    }

    /// Derivative in `x` of the damped integral with upper limit `mu_a(x)`,
    /// evaluated at `x = phi_val`.
    pub fn phi_prime_potential(&self, phi_val: f64) -> Result<f64> {
        let (moment, boundary) = self.phi_prime_terms(phi_val)?;
        Ok(moment + boundary)
    }

    /// The two parts of [`Self::phi_prime_potential`]: the weighted first
    /// moment and the moving-boundary term.
    pub fn phi_prime_terms(&self, phi_val: f64) -> Result<(f64, f64)> {
        let a = self.config.a;
        let moment = self.grid.weighted_first_moment(phi_val, a)?;
        let mu = mu_a(a, phi_val);
        let z = specfun::hardy_z_raw(mu);
        let boundary = z * z * (-2.0 * mu / phi_val).exp() * a * (phi_val.ln() + 1.0);
        Ok((moment, boundary))
    }

    /// `omega(t) = 2 Phi'(phi(t))`.
    pub fn omega(&self, t: f64) -> Result<f64> {
        Ok(2.0 * self.phi_prime_potential(self.solve_phi(t)?)?)
    }

    /// `d phi_1 / dt = |zeta(1/2 + it)|^2 / omega(t)`.
    pub fn z_tilde_sq(&self, t: f64) -> Result<f64> {
        let z = specfun::hardy_z_raw(t);
        Ok(z * z / self.omega(t)?)
    }

    /// `(phi_1(t), d phi_1 / dt)` from a single solve.
    pub fn step(&self, t: f64) -> Result<(f64, f64)> {
        let phi = self.solve_phi(t)?;
        let omega = 2.0 * self.phi_prime_potential(phi)?;
        let z = specfun::hardy_z_raw(t);
        Ok((0.5 * phi, z * z / omega))
    }

    /// `F(T) - [phi_1 ln phi_1 + (c - ln 2 pi) phi_1 + C0_ESTIMATE]`.
    pub fn hl_representation_residual(&self, t: f64) -> Result<f64> {
        self.hl_representation_residual_with(t, C0_ESTIMATE)
    }

    pub fn hl_representation_residual_with(&self, t: f64, c0: f64) -> Result<f64> {
        Ok(self.representation_gap(t)? - c0)
    }

    fn representation_gap(&self, t: f64) -> Result<f64> {
        let f = self.grid.hl_integral(t)?;
        let p = self.phi1(t)?;
        Ok(f - p * p.ln() - (EULER_C - LN_2PI) * p)
    }
}

/// `p` with `p ln p + (c - ln 2 pi) p + C0_ESTIMATE = f`, starting from `t`;
/// the starting point for the ladder solve.
fn representation_inverse(f: f64, t: f64) -> f64 {
    let mut p = t;
    for _ in 0..8 {
        let g = p * p.ln() + (EULER_C - LN_2PI) * p + C0_ESTIMATE - f;
        p -= g / (p.ln() + 1.0 + EULER_C - LN_2PI);
    }
    p
}

/// Least-squares constant for the representation residual over `ts`, which is
/// the mean of `F - phi_1 ln phi_1 - (c - ln 2 pi) phi_1`.
pub fn fit_c0(ladder: &Ladder, ts: &[f64]) -> Result<f64> {
    if ts.is_empty() {
        return Err(Error::Invariant("fit_c0 needs at least one point".into()));
    }
    let mut sum = 0.0;
    for &t in ts {
        sum += ladder.representation_gap(t)?;
    }
    Ok(sum / ts.len() as f64)
}

/// `n` points spaced evenly in `ln T` over `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_grid::unit_grid;

    fn ladder() -> Ladder<'static> {
        Ladder::new(unit_grid(), LadderConfig::default()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(LadderConfig::default().validate().is_ok());
        for bad in [
            LadderConfig { a: 6.9, ..Default::default() },
            LadderConfig { t0: 0.5, ..Default::default() },
            LadderConfig { root_rel_tol: 0.0, ..Default::default() },
            LadderConfig { bracket_factor: 1.0, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn defining_equation_holds() {
        let l = ladder();
        for t in log_spaced(100.0, 2000.0, 8) {
            let x = l.solve_phi(t).unwrap();
            let lhs = unit_grid().damped_integral(x, 7.0).unwrap();
            let rhs = unit_grid().hl_integral(t).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs, "T = {t}");
            assert!(0.5 * x < t);
        }
        let memo = l.memo_snapshot();
        assert_eq!(memo.len(), 8);
        assert!(memo.windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn rejects_small_t() {
        let l = ladder();
        assert!(matches!(l.solve_phi(99.0), Err(Error::Domain { .. })));
        assert!(matches!(l.phi1_inverse(50.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn memo_is_idempotent() {
        let l = ladder();
        let a = l.solve_phi(777.0).unwrap();
        let b = l.solve_phi(777.0).unwrap();
        let fresh = ladder().solve_phi(777.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(a.to_bits(), fresh.to_bits());
    }

    #[test]
    fn inverse_round_trip() {
        let l = ladder();
        let mut prev = 0.0;
        for y in [150.0, 333.3, 800.0, 1500.0] {
            let t = l.phi1_inverse(y).unwrap();
            assert!(t > y && t > prev);
            prev = t;
            let back = l.phi1(t).unwrap();
            assert!((back - y).abs() <= 1e-10 * y, "y = {y}: {back}");
        }
    }

    #[test]
    fn boundary_term_is_negligible() {
        let l = ladder();
        for x in [200.0, 1000.0] {
            let (m, b) = l.phi_prime_terms(x).unwrap();
            assert!(m > 0.0 && b >= 0.0 && b <= 1e-20 * m);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let l = ladder();
        let h = 1e-3;
        let mut checked = 0;
        for i in 0..40 {
            let t = 500.0 + 31.7 * i as f64;
            if specfun::hardy_z_raw(t).abs() <= 0.1 {
                continue;
            }
            let d = (l.phi1(t + h).unwrap() - l.phi1(t - h).unwrap()) / (2.0 * h);
            let z = l.z_tilde_sq(t).unwrap();
            assert!(((d - z) / z).abs() < 1e-3, "t = {t}: {d} vs {z}");
            checked += 1;
        }
        assert!(checked > 25);
    }

    #[test]
    fn weight_vanishes_at_a_zero() {
        // first sign change of Z after 1000, refined by bisection
        let mut lo = 1000.0f64;
        let s = specfun::hardy_z_raw(lo).signum();
        while specfun::hardy_z_raw(lo + 0.05).signum() == s {
            lo += 0.05;
        }
        let mut hi = lo + 0.05;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if specfun::hardy_z_raw(mid).signum() == s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(ladder().z_tilde_sq(lo).unwrap() < 1e-8);
    }

    #[test]
    fn residual_is_affine_in_c0() {
        let l = ladder();
        let r = l.hl_representation_residual_with(1000.0, 0.25).unwrap();
        let s = l.hl_representation_residual_with(1000.0, 1.25).unwrap();
        assert!((r - s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_spacing() {
        let v = log_spaced(1e3, 1e4, 3);
        assert_eq!(v[0], 1e3);
        assert_eq!(v[2], 1e4);
        assert!((v[1] - 1e3 * 10f64.sqrt()).abs() < 1e-9);
    }
}
