//! Cumulative grid of `Z^2(t)` and the integrals built on it.
//!
//! The grid is a sequence of Gauss-Legendre panels starting at `t = 0`. Panel
//! widths follow the local oscillation length `2 pi / ln(t / 2 pi)` of `Z^2`,
//! so the same number of samples covers each oscillation at every height. The
//! running sum of panel integrals gives the Hardy-Littlewood integral
//! `F(T) = int_0^T Z^2`, and the stored samples are reused with exponential
//! damping weights for the integrals in `x`.

mod cache;
mod moments;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::{self, EULER_C, LN_2PI, T_MIN};

pub use cache::{cache_file_name, load_or_build, CacheOutcome, GRID_MAGIC};
use moments::MomentTable;

/// Version tag written into every cache file.
pub const GRID_FORMAT_VERSION: u32 = 1;
/// Gauss-Legendre order used on every grid panel.
pub const GL_ORDER: usize = 8;
/// Default cap on the number of `Z^2` samples in a grid.
pub const DEFAULT_NODE_CAP: usize = 40_000_000;

/// Accuracy settings of the grid and its damped integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub panels_per_oscillation: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            panels_per_oscillation: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain("rel_tol", self.rel_tol, "> 0"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::domain("abs_tol", self.abs_tol, "> 0"));
        }
        if self.panels_per_oscillation < 4 {
            return Err(Error::domain(
                "panels_per_oscillation",
                self.panels_per_oscillation as f64,
                ">= 4",
            ));
        }
        Ok(())
    }
}

/// Local oscillation length of `Z^2(t)`, floored for small `t` where
/// `ln(t / 2 pi)` degenerates.
pub fn oscillation_length(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln().max(2.0)
}

/// Upper-limit function `mu_a(x) = a x ln x`.
pub fn mu_a(a: f64, x: f64) -> f64 {
    a * x * x.ln()
}

/// Smallest `t` beyond which `exp(-2t/x) (t + 2)^2 < abs_tol`.
pub fn truncation_point(x: f64, abs_tol: f64) -> f64 {
    let target = -abs_tol.ln();
    let mut t = x * target;
    for _ in 0..200 {
        let next = 0.5 * x * (2.0 * (t + 2.0).ln() + target);
        if (next - t).abs() <= 1e-13 * next {
            return next;
        }
        t = next;
    }
    t
}

/// How far a damped integral extends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// `min(mu_a(x), t_trunc(x))`.
    Truncated,
    /// As [`Cutoff::Truncated`] with `t_trunc` multiplied by the factor.
    Scaled(f64),
    /// All the way to `mu_a(x)`.
    Full,
}

/// `F(T) ~ T ln T + (2c - 1 - ln 2 pi) T`.
pub fn hl_asymptotic(t: f64) -> Result<f64> {
    if !(t > std::f64::consts::E) {
        return Err(Error::domain("T", t, "T > e"));
    }
    Ok(t * t.ln() + (2.0 * EULER_C - 1.0 - LN_2PI) * t)
}

/// Sampled `Z^2(t)` on `[0, t_max]` with its cumulative integral.
#[derive(Debug, Clone)]
pub struct CumulativeZGrid {
    t_max: f64,
    spec: QuadratureSpec,
    bounds: Vec<f64>,
    cumulative: Vec<f64>,
    samples: Vec<f64>,
    rule: GaussLegendre,
    moments: MomentTable,
}

impl PartialEq for CumulativeZGrid {
    fn eq(&self, other: &Self) -> bool {
        self.t_max.to_bits() == other.t_max.to_bits()
            && self.spec == other.spec
            && self.bounds == other.bounds
            && self.cumulative == other.cumulative
            && self.samples == other.samples
    }
}

fn panel_bounds(t_max: f64, spec: &QuadratureSpec) -> Vec<f64> {
    let scale = GL_ORDER as f64 / spec.panels_per_oscillation as f64;
    let mut bounds = vec![0.0, T_MIN];
    let mut t = T_MIN;
    while t < t_max {
        // evaluated a little ahead so that the width never exceeds the
        // oscillation length anywhere inside the panel
        let width = scale * oscillation_length(t + 2.0 * PI);
        let next = t + width;
        if next >= t_max || t_max - next < 0.25 * width {
            bounds.push(t_max);
            break;
        }
        bounds.push(next);
        t = next;
    }
    bounds
}

/// Build the grid up to `t_max` with the default node cap.
pub fn build_grid(t_max: f64, spec: QuadratureSpec) -> Result<CumulativeZGrid> {
    build_grid_capped(t_max, spec, DEFAULT_NODE_CAP)
}

/// Build the grid up to `t_max`, failing if more than `node_cap` samples
/// would be needed.
pub fn build_grid_capped(t_max: f64, spec: QuadratureSpec, node_cap: usize) -> Result<CumulativeZGrid> {
    spec.validate()?;
    if !(t_max > T_MIN && t_max.is_finite()) {
        return Err(Error::domain("t_max", t_max, format!("finite and > t_min = {T_MIN}")));
    }
    let bounds = panel_bounds(t_max, &spec);
    let panels = bounds.len() - 1;
    if panels * GL_ORDER > node_cap {
        return Err(Error::Resource(format!(
            "grid to t_max = {t_max} needs {} nodes, cap is {node_cap}",
            panels * GL_ORDER
        )));
    }
    let rule = GaussLegendre::new(GL_ORDER);
    let samples: Vec<f64> = bounds
        .par_windows(2)
        .flat_map_iter(|w| {
            rule.mapped(w[0], w[1])
                .map(|(t, _)| {
                    let z = specfun::hardy_z_raw(t);
                    z * z
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let cumulative = accumulate(&bounds, &samples, &rule);
    Ok(CumulativeZGrid::assemble(t_max, spec, bounds, cumulative, samples))
}

fn accumulate(bounds: &[f64], samples: &[f64], rule: &GaussLegendre) -> Vec<f64> {
    let mut cumulative = Vec::with_capacity(bounds.len());
    cumulative.push(0.0);
    // Neumaier compensated running sum
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (j, w) in bounds.windows(2).enumerate() {
        let half = 0.5 * (w[1] - w[0]);
        let panel: f64 = samples[j * GL_ORDER..(j + 1) * GL_ORDER]
            .iter()
            .zip(&rule.weights)
            .map(|(z2, wt)| wt * z2)
            .sum::<f64>()
            * half;
        let t = sum + panel;
        if sum.abs() >= panel.abs() {
            comp += (sum - t) + panel;
        } else {
            comp += (panel - t) + sum;
        }
        sum = t;
        cumulative.push(sum + comp);
    }
    cumulative
}

impl CumulativeZGrid {
    fn assemble(
        t_max: f64,
        spec: QuadratureSpec,
        bounds: Vec<f64>,
        cumulative: Vec<f64>,
        samples: Vec<f64>,
    ) -> Self {
        let rule = GaussLegendre::new(GL_ORDER);
        let moments = MomentTable::build(&bounds, &samples, &rule);
        CumulativeZGrid {
            t_max,
            spec,
            bounds,
            cumulative,
            samples,
            rule,
            moments,
        }
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn spec(&self) -> QuadratureSpec {
        self.spec
    }

    pub fn version(&self) -> u32 {
        GRID_FORMAT_VERSION
    }

    pub fn panel_count(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.samples.len()
    }

    /// Panel boundaries; the first is `0`, the second `t_min`.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// `F` at each panel boundary.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `(t, Z^2(t))` at every quadrature node, in increasing `t`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bounds.windows(2).enumerate().flat_map(move |(j, w)| {
            self.rule
                .mapped(w[0], w[1])
                .zip(&self.samples[j * GL_ORDER..(j + 1) * GL_ORDER])
                .map(|((t, _), z2)| (t, *z2))
        })
    }

    /// Hardy-Littlewood integral `F(T) = int_0^T Z^2(t) dt`.
    ///
    /// The cumulative value at the enclosing panel's left boundary is
    /// completed by a fresh Gauss-Legendre pass over the partial panel.
    pub fn hl_integral(&self, t: f64) -> Result<f64> {
        if !(t >= T_MIN && t <= self.t_max) {
            return Err(Error::Range {
                what: "T",
                value: t,
                lo: T_MIN,
                hi: self.t_max,
            });
        }
        let j = self.bounds.partition_point(|b| *b <= t) - 1;
        let lo = self.bounds[j];
        if lo == t {
            return Ok(self.cumulative[j]);
        }
        let local = self.rule.integrate(lo, t, |s| {
            let z = specfun::hardy_z_raw(s);
            z * z
        });
        Ok(self.cumulative[j] + local)
    }

    fn cutoff(&self, x: f64, a: f64, cutoff: Cutoff) -> Result<f64> {
        if !(x > std::f64::consts::E && x.is_finite()) {
            return Err(Error::domain("x", x, "x > e"));
        }
        if !(7.0..=8.0).contains(&a) {
            return Err(Error::domain("a", a, "a in [7, 8]"));
        }
        let mu = mu_a(a, x);
        let u = match cutoff {
            Cutoff::Truncated => truncation_point(x, self.spec.abs_tol).min(mu),
            Cutoff::Scaled(f) => (f * truncation_point(x, self.spec.abs_tol)).min(mu),
            Cutoff::Full => mu,
        };
        if u > self.t_max {
            return Err(Error::Range {
                what: "damped integral cutoff",
                value: u,
                lo: 0.0,
                hi: self.t_max,
            });
        }
        Ok(u)
    }

    /// Number of leading panels whose left boundary lies below `u`.
    fn panels_below(&self, u: f64) -> usize {
        let p = self.panel_count();
        self.bounds[..p].partition_point(|b| *b < u)
    }

    /// `int_0^{u*} Z^2(t) exp(-2t/x) dt`.
    pub fn damped_integral(&self, x: f64, a: f64) -> Result<f64> {
        self.damped_integral_with(x, a, Cutoff::Truncated)
    }

    pub fn damped_integral_with(&self, x: f64, a: f64, cutoff: Cutoff) -> Result<f64> {
        let u = self.cutoff(x, a, cutoff)?;
        Ok(self.damped_sums(x, self.panels_below(u)).0)
    }

    /// `(2 / x^2) int_0^{u*} t exp(-2t/x) Z^2(t) dt`.
    pub fn weighted_first_moment(&self, x: f64, a: f64) -> Result<f64> {
        let u = self.cutoff(x, a, Cutoff::Truncated)?;
        Ok(2.0 / (x * x) * self.damped_sums(x, self.panels_below(u)).1)
    }

    /// Damped integral and its derivative in `x`, sharing one pass.
    pub fn damped_with_derivative(&self, x: f64, a: f64) -> Result<(f64, f64)> {
        let u = self.cutoff(x, a, Cutoff::Truncated)?;
        let (v, m) = self.damped_sums(x, self.panels_below(u));
        Ok((v, 2.0 / (x * x) * m))
    }

    /// Same sums as [`Self::damped_integral`] computed node by node, without
    /// the block-moment acceleration.
    pub fn damped_integral_direct(&self, x: f64, a: f64) -> Result<f64> {
        let u = self.cutoff(x, a, Cutoff::Truncated)?;
        Ok(self.direct_sums(x, 0, self.panels_below(u)).0)
    }

    /// `(sum w Z^2 e^{-2t/x}, sum w Z^2 t e^{-2t/x})` over the first
    /// `panels` panels.
    fn damped_sums(&self, x: f64, panels: usize) -> (f64, f64) {
        if !self.moments.accepts(x) {
            return self.direct_sums(x, 0, panels);
        }
        let (full_blocks, tail_start) = self.moments.blocks_within(panels);
        let (mut v, mut m) = self.moments.sums(x, full_blocks);
        let (tv, tm) = self.direct_sums(x, tail_start, panels);
        v += tv;
        m += tm;
        (v, m)
    }

    fn direct_sums(&self, x: f64, from: usize, to: usize) -> (f64, f64) {
        let k = -2.0 / x;
        let mut v = 0.0;
        let mut m = 0.0;
        for j in from..to {
            let (lo, hi) = (self.bounds[j], self.bounds[j + 1]);
            let samples = &self.samples[j * GL_ORDER..(j + 1) * GL_ORDER];
            for ((t, w), z2) in self.rule.mapped(lo, hi).zip(samples) {
                let e = w * z2 * (k * t).exp();
                v += e;
                m += e * t;
            }
        }
        (v, m)
    }
}

/// Free-function form of [`CumulativeZGrid::hl_integral`].
pub fn hl_integral(t: f64, grid: &CumulativeZGrid) -> Result<f64> {
    grid.hl_integral(t)
}

/// Free-function form of [`CumulativeZGrid::damped_integral`].
pub fn damped_integral(x: f64, a: f64, grid: &CumulativeZGrid) -> Result<f64> {
    grid.damped_integral(x, a)
}

/// Free-function form of [`CumulativeZGrid::weighted_first_moment`].
pub fn weighted_first_moment(x: f64, a: f64, grid: &CumulativeZGrid) -> Result<f64> {
    grid.weighted_first_moment(x, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn small_grid() -> &'static CumulativeZGrid {
        static G: OnceLock<CumulativeZGrid> = OnceLock::new();
        G.get_or_init(|| build_grid(16000.0, QuadratureSpec::default()).unwrap())
    }

    // independent oracle: composite Simpson on a fine uniform mesh
    fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
        }
        s * h / 3.0
    }

    fn z2(t: f64) -> f64 {
        let z = specfun::hardy_z_raw(t);
        z * z
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec {
            panels_per_oscillation: 3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn grid_structure() {
        let g = small_grid();
        assert_eq!(g.bounds()[0], 0.0);
        assert_eq!(g.bounds()[1], T_MIN);
        assert_eq!(g.cumulative()[0], 0.0);
        assert_eq!(*g.bounds().last().unwrap(), 16000.0);
        assert!(g.bounds().windows(2).all(|w| w[0] < w[1]));
        assert!(g.cumulative().windows(2).all(|w| w[0] <= w[1]));
        let mut prev = -1.0;
        for (t, z2) in g.nodes() {
            assert!(t > prev && z2 >= 0.0);
            prev = t;
        }
        // mean node spacing per panel stays below L(t) / ppo
        for w in g.bounds()[1..].windows(2) {
            let spacing = (w[1] - w[0]) / GL_ORDER as f64;
            assert!(spacing <= oscillation_length(w[1]) / 8.0 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn hl_integral_reference_values() {
        // 30-digit reference values of int_0^T Z^2
        let g = small_grid();
        let f20 = g.hl_integral(20.0).unwrap();
        assert!((f20 - 33.439_252_978_211_719).abs() < 1e-8 * 33.44);
        let f100 = g.hl_integral(100.0).unwrap();
        assert!((f100 - 295.635_099_054_719_13).abs() < 1e-8 * 295.6);
    }

    #[test]
    fn hl_integral_matches_simpson_oracle() {
        let g = small_grid();
        for (lo, hi) in [(100.0, 137.3), (2000.0, 2011.7), (8000.5, 8020.25)] {
            let want = simpson(z2, lo, hi, 40_000);
            let got = g.hl_integral(hi).unwrap() - g.hl_integral(lo).unwrap();
            assert!(((got - want) / want).abs() < 1e-9, "[{lo}, {hi}]: {got} vs {want}");
        }
    }

    #[test]
    fn hl_integral_edges() {
        let g = small_grid();
        assert_eq!(g.hl_integral(T_MIN).unwrap(), g.cumulative()[1]);
        assert_eq!(g.hl_integral(16000.0).unwrap(), *g.cumulative().last().unwrap());
        assert!(matches!(g.hl_integral(0.5), Err(Error::Range { .. })));
        assert!(matches!(g.hl_integral(16000.1), Err(Error::Range { .. })));
        let mut prev = 0.0;
        for i in 1..400 {
            let v = g.hl_integral(1.0 + 22.4 * i as f64).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn asymptotic_main_terms() {
        let v = hl_asymptotic(100.0).unwrap();
        assert!((v - 292.17).abs() < 0.01, "{v}");
        assert!(hl_asymptotic(std::f64::consts::E).is_err());
        let g = small_grid();
        for t in [100.0, 1000.0] {
            let r = g.hl_integral(t).unwrap() - hl_asymptotic(t).unwrap();
            assert!(r.abs() / (t.sqrt() * t.ln()) < 2.0);
        }
    }

    #[test]
    fn self_convergence_in_panel_density() {
        let coarse = build_grid(2000.0, QuadratureSpec::default()).unwrap();
        let fine = build_grid(
            2000.0,
            QuadratureSpec {
                panels_per_oscillation: 16,
                ..Default::default()
            },
        )
        .unwrap();
        let a = *coarse.cumulative().last().unwrap();
        let b = *fine.cumulative().last().unwrap();
        assert!((a - b).abs() < 1e-8 * b, "{a} vs {b}");
    }

    #[test]
    fn node_cap_is_enforced() {
        let r = build_grid_capped(5000.0, QuadratureSpec::default(), 1000);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn truncation_point_definition() {
        for x in [50.0, 200.0, 3000.0] {
            let t = truncation_point(x, 1e-10);
            let f = |t: f64| (-2.0 * t / x).exp() * (t + 2.0).powi(2);
            assert!(f(t) <= 1e-10 * (1.0 + 1e-9));
            assert!(f(t * (1.0 - 1e-6)) > 1e-10);
        }
    }

    #[test]
    fn damped_integral_matches_simpson_oracle() {
        let g = small_grid();
        let x = 200.0;
        let u = truncation_point(x, 1e-10);
        let want = simpson(|t| z2(t) * (-2.0 * t / x).exp(), 0.0, u, 400_000);
        let got = g.damped_integral(x, 7.0).unwrap();
        assert!(((got - want) / want).abs() < 1e-8, "{got} vs {want}");
        let m = g.weighted_first_moment(x, 7.0).unwrap();
        let want_m = 2.0 / (x * x) * simpson(|t| t * z2(t) * (-2.0 * t / x).exp(), 0.0, u, 400_000);
        assert!(((m - want_m) / want_m).abs() < 1e-8, "{m} vs {want_m}");
        assert!(m > 0.0);
    }

    #[test]
    fn moments_agree_with_direct_sum() {
        let g = small_grid();
        for x in [350.0, 401.0, 420.0, 555.5, 600.0] {
            let fast = g.damped_integral(x, 7.0).unwrap();
            let slow = g.damped_integral_direct(x, 7.0).unwrap();
            assert!(((fast - slow) / slow).abs() < 1e-12, "x = {x}: {fast} vs {slow}");
        }
    }

    #[test]
    fn derivative_is_consistent() {
        let g = small_grid();
        for x in [150.0, 500.0] {
            let h = 1e-3 * x;
            let d = (g.damped_integral(x + h, 7.0).unwrap() - g.damped_integral(x - h, 7.0).unwrap())
                / (2.0 * h);
            let (_, m) = g.damped_with_derivative(x, 7.0).unwrap();
            assert!(((d - m) / m).abs() < 1e-6, "x = {x}: {d} vs {m}");
        }
    }

    #[test]
    fn damped_integral_increasing_in_x() {
        let g = small_grid();
        let mut prev = 0.0;
        let mut x = 100.0;
        while x <= 400.0 {
            let v = g.damped_integral(x, 7.0).unwrap();
            assert!(v > prev);
            prev = v;
            x += 7.5;
        }
    }

    #[test]
    fn truncation_is_invisible() {
        let g = small_grid();
        for x in [100.0, 150.0] {
            let t = g.damped_integral(x, 7.0).unwrap();
            let doubled = g.damped_integral_with(x, 7.0, Cutoff::Scaled(2.0)).unwrap();
            let full = g.damped_integral_with(x, 7.0, Cutoff::Full).unwrap();
            assert!((doubled - t).abs() < 1e-10);
            assert!((full - t).abs() < 1e-10);
        }
    }

    #[test]
    fn damped_errors() {
        let g = small_grid();
        assert!(matches!(g.damped_integral(2.0, 7.0), Err(Error::Domain { .. })));
        assert!(matches!(g.damped_integral(200.0, 6.5), Err(Error::Domain { .. })));
        assert!(matches!(g.damped_integral(2000.0, 7.0), Err(Error::Range { .. })));
    }
}
