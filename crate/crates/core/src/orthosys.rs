//! Orthogonal systems carried through the ladder.
//!
//! A base system `{f_n}` orthogonal on `[a, a + 2l]` is turned into a new
//! orthogonal system by mapping `[a, a + 2l]` affinely onto the depth-`p`
//! reverse segment of `[T, T + 2l]`, pushing forward `p` times with `phi_1`,
//! and multiplying by the square roots of the accumulated weights.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlgrid::{oscillation_length, QuadratureSpec};
use crate::iterations::{build_chain, ReverseChain, CLAMP_REL_TOL};
use crate::ladder::Ladder;
use crate::quad::{integrate_vec, uniform_breaks, AdaptiveSpec};

/// Legendre polynomial `P_n(t)` by the three-term recurrence.
pub fn legendre_eval(n: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, t);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// User-supplied `f_n(t)`.
pub type ExternalFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum BaseKind {
    Legendre,
    /// `1, cos(pi m s / l), sin(pi m s / l), ...` with `s = t - a`.
    Trigonometric,
    External(ExternalFn),
}

impl fmt::Debug for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::Legendre => write!(f, "Legendre"),
            BaseKind::Trigonometric => write!(f, "Trigonometric"),
            BaseKind::External(_) => write!(f, "External"),
        }
    }
}

/// Base system on `[a, a + 2l]`.
#[derive(Debug, Clone)]
pub struct BaseSystem {
    kind: BaseKind,
    a: f64,
    l: f64,
}

/// Largest normalized off-diagonal Gram entry an external base may have.
pub const EXTERNAL_ORTHOGONALITY_TOL: f64 = 1e-8;

impl BaseSystem {
    pub fn legendre(a: f64, l: f64) -> Result<Self> {
        Self::checked(BaseKind::Legendre, a, l)
    }

    pub fn trigonometric(a: f64, l: f64) -> Result<Self> {
        Self::checked(BaseKind::Trigonometric, a, l)
    }

    /// External system; accepted only if its first `check_n` functions pass
    /// an orthogonality check on the interval.
    pub fn external(f: ExternalFn, a: f64, l: f64, check_n: usize) -> Result<Self> {
        let base = Self::checked(BaseKind::External(f), a, l)?;
        let report = gram_matrix(&base, check_n.max(2), QuadratureSpec::default())?;
        if report.max_offdiag_ratio > EXTERNAL_ORTHOGONALITY_TOL {
            return Err(Error::Invariant(format!(
                "external base is not orthogonal: off-diagonal ratio {:e}",
                report.max_offdiag_ratio
            )));
        }
        Ok(base)
    }

    fn checked(kind: BaseKind, a: f64, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::domain("l", l, "l > 0"));
        }
        if !a.is_finite() {
            return Err(Error::domain("a", a, "finite"));
        }
        Ok(BaseSystem { kind, a, l })
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn eval(&self, n: usize, t: f64) -> f64 {
        let s = t - self.a;
        match &self.kind {
            BaseKind::Legendre => legendre_eval(n, s / self.l - 1.0),
            BaseKind::Trigonometric => {
                let m = n.div_ceil(2) as f64;
                let arg = PI * m * s / self.l;
                if n == 0 {
                    1.0
                } else if n % 2 == 1 {
                    arg.cos()
                } else {
                    arg.sin()
                }
            }
            BaseKind::External(f) => f(n, t),
        }
    }

    /// `int f_n^2` over the interval, when known in closed form.
    pub fn norm_sq(&self, n: usize) -> Option<f64> {
        match self.kind {
            BaseKind::Legendre => Some(2.0 * self.l / (2 * n + 1) as f64),
            BaseKind::Trigonometric => Some(if n == 0 { 2.0 * self.l } else { self.l }),
            BaseKind::External(_) => None,
        }
    }
}

/// One ladder stage: base, depth `p`, anchor `T` and the chain over
/// `[T, T + 2l]`.
#[derive(Debug, Clone)]
pub struct IteratedSystemSpec {
    pub base: BaseSystem,
    pub p: usize,
    pub t: f64,
    pub chain: ReverseChain,
}

impl IteratedSystemSpec {
    pub fn new(ladder: &Ladder, base: BaseSystem, p: usize, t: f64) -> Result<Self> {
        let chain = build_chain(ladder, t, 2.0 * base.l, p)?;
        Ok(IteratedSystemSpec { base, p, t, chain })
    }

    fn segment(&self) -> (f64, f64) {
        let s = self.chain.segments[self.p];
        (s.lo, s.hi)
    }

    /// `2l / ((T+2l)^p - T^p)`, the factor by which norms shrink.
    pub fn diag_scale(&self) -> f64 {
        let (lo, hi) = self.segment();
        2.0 * self.base.l / (hi - lo)
    }
}

/// Affine map of `[a, a + 2l]` onto `[T^p, (T+2l)^p]`.
pub fn affine_to_segment(t: f64, spec: &IteratedSystemSpec) -> Result<f64> {
    let (a, l) = (spec.base.a, spec.base.l);
    let (lo, hi) = spec.segment();
    if !(t >= a && t <= a + 2.0 * l) {
        return Err(Error::Range {
            what: "t",
            value: t,
            lo: a,
            hi: a + 2.0 * l,
        });
    }
    if t == a {
        return Ok(lo);
    }
    if t == a + 2.0 * l {
        return Ok(hi);
    }
    Ok(lo + (hi - lo) / (2.0 * l) * (t - a))
}

/// Result of one stage at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageValue {
    /// `w(t) = phi_1^p(rho) - T + a`.
    pub w: f64,
    /// `prod |Z~(phi_1^r(rho))|`, `r < p`.
    pub sqrt_weight: f64,
    /// `sqrt_weight^2`.
    pub weight: f64,
}

pub fn stage_eval(t: f64, spec: &IteratedSystemSpec, ladder: &Ladder) -> Result<StageValue> {
    let mut x = affine_to_segment(t, spec)?;
    let mut sqrt_weight = 1.0;
    for _ in 0..spec.p {
        let (next, w) = ladder.step(x)?;
        sqrt_weight *= w.sqrt();
        x = next;
    }
    let (a, l) = (spec.base.a, spec.base.l);
    let w = x - spec.t + a;
    let tol = CLAMP_REL_TOL * spec.t;
    let (lo, hi) = (a, a + 2.0 * l);
    if w < lo - tol || w > hi + tol {
        return Err(Error::Clamp {
            value: w,
            lo,
            hi,
            excess: (lo - w).max(w - hi),
        });
    }
    Ok(StageValue {
        w: w.clamp(lo, hi),
        sqrt_weight,
        weight: sqrt_weight * sqrt_weight,
    })
}

/// `f_n^p(t) = f_n(w(t)) prod |Z~(phi_1^r(rho))|`.
pub fn iterated_eval(n: usize, t: f64, spec: &IteratedSystemSpec, ladder: &Ladder) -> Result<f64> {
    let s = stage_eval(t, spec, ladder)?;
    Ok(spec.base.eval(n, s.w) * s.sqrt_weight)
}

/// `prod Z~^2(phi_1^r(rho))`, the square of the factor in [`iterated_eval`].
pub fn weight_eval(t: f64, spec: &IteratedSystemSpec, ladder: &Ladder) -> Result<f64> {
    Ok(stage_eval(t, spec, ladder)?.weight)
}

/// The automorphism `w(t)` of `[a, a + 2l]`.
pub fn automorphism_w(t: f64, spec: &IteratedSystemSpec, ladder: &Ladder) -> Result<f64> {
    Ok(stage_eval(t, spec, ladder)?.w)
}

fn check_stages(specs: &[IteratedSystemSpec]) -> Result<()> {
    let first = specs
        .first()
        .ok_or_else(|| Error::Invariant("composition needs at least one stage".into()))?;
    for s in specs {
        if s.base.a != first.base.a || s.base.l != first.base.l {
            return Err(Error::Invariant("composed stages must share one interval".into()));
        }
    }
    Ok(())
}

/// Composition `f_n^{p_1, p_2, ...}`: the last stage acts on `t` first, its
/// automorphism feeds the next, and the base of the first stage is evaluated
/// at the end.
pub fn composed_eval(n: usize, t: f64, specs: &[IteratedSystemSpec], ladder: &Ladder) -> Result<f64> {
    check_stages(specs)?;
    let (x, factor) = compose(t, specs, ladder)?;
    Ok(specs[0].base.eval(n, x) * factor)
}

fn compose(t: f64, specs: &[IteratedSystemSpec], ladder: &Ladder) -> Result<(f64, f64)> {
    let mut x = t;
    let mut factor = 1.0;
    for spec in specs.iter().rev() {
        let s = stage_eval(x, spec, ladder)?;
        x = s.w;
        factor *= s.sqrt_weight;
    }
    Ok((x, factor))
}

/// A finite family `f_0 .. f_{N-1}` that can be evaluated all at once.
pub trait SystemEval: Sync {
    /// `(a, l)` of the interval `[a, a + 2l]`.
    fn interval(&self) -> (f64, f64);
    /// Fill `out[n]` with `f_n(t)`.
    fn eval_all(&self, t: f64, out: &mut [f64]) -> Result<()>;
    /// Predicted ratio of Gram diagonal to base norms.
    fn diag_scale(&self) -> f64 {
        1.0
    }
    /// Oscillations of the weight across the interval, used to seed panels.
    fn oscillations(&self) -> f64 {
        0.0
    }
}

impl SystemEval for BaseSystem {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.l)
    }

    fn eval_all(&self, t: f64, out: &mut [f64]) -> Result<()> {
        for (n, o) in out.iter_mut().enumerate() {
            *o = self.eval(n, t);
        }
        Ok(())
    }
}

/// Composition of one or more stages bound to a ladder.
pub struct IteratedSystem<'a, 'g> {
    pub specs: Vec<IteratedSystemSpec>,
    pub ladder: &'a Ladder<'g>,
}

impl<'a, 'g> IteratedSystem<'a, 'g> {
    pub fn new(specs: Vec<IteratedSystemSpec>, ladder: &'a Ladder<'g>) -> Result<Self> {
        check_stages(&specs)?;
        Ok(IteratedSystem { specs, ladder })
    }

    pub fn single(spec: IteratedSystemSpec, ladder: &'a Ladder<'g>) -> Self {
        IteratedSystem {
            specs: vec![spec],
            ladder,
        }
    }
}

impl SystemEval for IteratedSystem<'_, '_> {
    fn interval(&self) -> (f64, f64) {
        (self.specs[0].base.a, self.specs[0].base.l)
    }

    fn eval_all(&self, t: f64, out: &mut [f64]) -> Result<()> {
        let (x, factor) = compose(t, &self.specs, self.ladder)?;
        for (n, o) in out.iter_mut().enumerate() {
            *o = self.specs[0].base.eval(n, x) * factor;
        }
        Ok(())
    }

    fn diag_scale(&self) -> f64 {
        self.specs.iter().map(IteratedSystemSpec::diag_scale).product()
    }

    fn oscillations(&self) -> f64 {
        self.specs
            .iter()
            .map(|s| {
                let (lo, hi) = s.segment();
                s.p as f64 * (hi - lo) / oscillation_length(lo)
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub size: usize,
    pub entries: Vec<Vec<f64>>,
    pub max_offdiag_ratio: f64,
    pub diag_scale: f64,
    /// Estimated quadrature error of each entry.
    pub errors: Vec<Vec<f64>>,
}

impl GramReport {
    /// `G_nn / diag_scale`, to be compared with the base norms.
    pub fn transported_norms(&self) -> Vec<f64> {
        (0..self.size).map(|n| self.entries[n][n] / self.diag_scale).collect()
    }
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|m| (m..n).map(move |k| (m, k))).collect()
}

/// Gram matrix `G_mn = int f_m f_n` over the system's interval.
///
/// All entries share one adaptive pass; the tolerance for each entry is
/// `rel_tol` relative to the predicted size of the smallest diagonal entry.
pub fn gram_matrix<S: SystemEval + ?Sized>(system: &S, n: usize, quad: QuadratureSpec) -> Result<GramReport> {
    if n < 2 {
        return Err(Error::domain("N", n as f64, "N >= 2"));
    }
    quad.validate()?;
    let (a, l) = system.interval();
    let pairs = pair_index(n);
    let scale = system.diag_scale();
    let spec = AdaptiveSpec {
        rel_tol: quad.rel_tol,
        abs_tol: quad.rel_tol * scale * l / n as f64,
        max_panels: 20_000,
    };
    let panels = (system.oscillations() * quad.panels_per_oscillation as f64 / 4.0).ceil() as usize;
    let breaks = uniform_breaks(a, a + 2.0 * l, panels.max(n).max(4));
    let integrand = |t: f64, out: &mut [f64]| -> Result<()> {
        let mut f = vec![0.0; n];
        system.eval_all(t, &mut f)?;
        for (o, (m, k)) in out.iter_mut().zip(&pairs) {
            *o = f[*m] * f[*k];
        }
        Ok(())
    };
    let r = integrate_vec(integrand, &breaks, pairs.len(), spec).map_err(|e| match e {
        Error::Quadrature {
            component,
            error,
            tolerance,
            ..
        } => Error::Quadrature {
            entry: Some(pairs[component]),
            component,
            error,
            tolerance,
        },
        other => other,
    })?;
    let mut entries = vec![vec![0.0; n]; n];
    let mut errors = vec![vec![0.0; n]; n];
    for (i, &(m, k)) in pairs.iter().enumerate() {
        entries[m][k] = r.values[i];
        entries[k][m] = r.values[i];
        errors[m][k] = r.errors[i];
        errors[k][m] = r.errors[i];
    }
    let mut max_ratio = 0.0f64;
    for &(m, k) in &pairs {
        if m != k {
            let ratio = entries[m][k].abs() / (entries[m][m] * entries[k][k]).sqrt();
            max_ratio = max_ratio.max(ratio);
        }
    }
    Ok(GramReport {
        size: n,
        entries,
        max_offdiag_ratio: max_ratio,
        diag_scale: scale,
        errors,
    })
}
