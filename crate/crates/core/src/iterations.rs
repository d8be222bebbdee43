//! Forward iterates `phi_1^k(t)`, reverse iterates `phi_1^{-k}(T)`, the
//! chains of reverse segments they generate, and the change of variables
//! that carries an integral over `[T, T + U]` onto the `k`-th segment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlgrid::oscillation_length;
use crate::ladder::Ladder;
use crate::quad::{integrate_vec, uniform_breaks, AdaptiveSpec};

/// Relative noise (in units of `T`) tolerated when images land on segment
/// endpoints.
pub const CLAMP_REL_TOL: f64 = 1e-8;

/// Largest admissible `U` at height `T`: `T / (10 ln T)`.
pub fn max_admissible_u(t: f64) -> f64 {
    t / (10.0 * t.ln())
}

fn check_admissible(t: f64, u: f64) -> Result<()> {
    if !(u > 0.0 && u <= max_admissible_u(t)) {
        return Err(Error::domain(
            "U",
            u,
            format!("0 < U <= T/(10 ln T) = {} at T = {t}", max_admissible_u(t)),
        ));
    }
    Ok(())
}

/// `phi_1^k(t)`; `k = 0` returns `t`.
pub fn forward_iterate(ladder: &Ladder, t: f64, k: usize) -> Result<f64> {
    Ok(*forward_orbit(ladder, t, k)?.last().unwrap())
}

/// `[t, phi_1(t), ..., phi_1^k(t)]`.
pub fn forward_orbit(ladder: &Ladder, t: f64, k: usize) -> Result<Vec<f64>> {
    let t0 = ladder.config().t0;
    let mut out = Vec::with_capacity(k + 1);
    out.push(t);
    let mut x = t;
    for step in 0..k {
        if x < t0 {
            return Err(Error::Underflow { step, value: x, t0 });
        }
        x = ladder.phi1(x)?;
        out.push(x);
    }
    Ok(out)
}

/// `T^k = phi_1^{-k}(T)`; `k = 0` returns `T`.
pub fn reverse_point(ladder: &Ladder, t: f64, k: usize) -> Result<f64> {
    let mut x = t;
    for _ in 0..k {
        x = ladder.phi1_inverse(x)?;
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterSegment {
    pub k: usize,
    pub lo: f64,
    pub hi: f64,
}

impl IterSegment {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Segments `[T^k, (T+U)^k]` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseChain {
    pub t: f64,
    pub u: f64,
    pub k_max: usize,
    pub segments: Vec<IterSegment>,
}

impl ReverseChain {
    pub fn segment(&self, k: usize) -> Result<&IterSegment> {
        self.segments.get(k).ok_or_else(|| Error::Range {
            what: "segment depth",
            value: k as f64,
            lo: 0.0,
            hi: self.k_max as f64,
        })
    }

    /// Gaps `T^k - (T+U)^{k-1}` between consecutive segments, `k = 1..=k_max`.
    pub fn gaps(&self) -> Vec<f64> {
        self.segments.windows(2).map(|w| w[1].lo - w[0].hi).collect()
    }

    /// Clamping tolerance used for this chain.
    pub fn clamp_tol(&self) -> f64 {
        CLAMP_REL_TOL * self.t
    }
}

/// Build the chain with the admissibility gate `U <= T/(10 ln T)`.
pub fn build_chain(ladder: &Ladder, t: f64, u: f64, k_max: usize) -> Result<ReverseChain> {
    check_admissible(t, u)?;
    build_chain_ungated(ladder, t, u, k_max)
}

/// Build the chain without the admissibility gate on `U`.
pub fn build_chain_ungated(ladder: &Ladder, t: f64, u: f64, k_max: usize) -> Result<ReverseChain> {
    if !(u > 0.0) {
        return Err(Error::domain("U", u, "U > 0"));
    }
    let mut segments = vec![IterSegment { k: 0, lo: t, hi: t + u }];
    for k in 1..=k_max {
        let prev = segments[k - 1];
        segments.push(IterSegment {
            k,
            lo: ladder.phi1_inverse(prev.lo)?,
            hi: ladder.phi1_inverse(prev.hi)?,
        });
    }
    let chain = ReverseChain { t, u, k_max, segments };
    verify_chain(ladder, &chain)?;
    Ok(chain)
}

fn verify_chain(ladder: &Ladder, chain: &ReverseChain) -> Result<()> {
    let tol = chain.clamp_tol();
    for s in &chain.segments {
        if !(s.lo < s.hi) {
            return Err(Error::Invariant(format!("segment {} is empty: [{}, {}]", s.k, s.lo, s.hi)));
        }
    }
    for w in chain.segments.windows(2) {
        let (prev, seg) = (w[0], w[1]);
        if !(prev.hi < seg.lo) {
            return Err(Error::Invariant(format!(
                "segments {} and {} overlap: {} >= {}",
                prev.k, seg.k, prev.hi, seg.lo
            )));
        }
        for (end, target) in [(seg.lo, prev.lo), (seg.hi, prev.hi)] {
            let image = ladder.phi1(end)?;
            if (image - target).abs() > tol {
                return Err(Error::Invariant(format!(
                    "image of segment {} endpoint {end} is {image}, expected {target}",
                    seg.k
                )));
            }
        }
    }
    Ok(())
}

/// Union of the first `k + 1` segments of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSet<'c> {
    pub chain: &'c ReverseChain,
    pub k: usize,
}

impl<'c> DeltaSet<'c> {
    pub fn new(chain: &'c ReverseChain, k: usize) -> Result<Self> {
        chain.segment(k)?;
        let set = DeltaSet { chain, k };
        if set.gaps().iter().any(|g| !(*g > 0.0)) {
            return Err(Error::Invariant("delta set is not disconnected".into()));
        }
        Ok(set)
    }

    pub fn segments(&self) -> &'c [IterSegment] {
        &self.chain.segments[..=self.k]
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.segments().windows(2).map(|w| w[1].lo - w[0].hi).collect()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.segments().iter().any(|s| s.contains(t))
    }

    pub fn measure(&self) -> f64 {
        self.segments().iter().map(IterSegment::len).sum()
    }
}

/// Images `phi_1^r(t)` for `r = 0..=k`, checking that each lies in segment
/// `k - r`. Values within the clamping tolerance of an endpoint are clamped.
pub fn forward_membership(ladder: &Ladder, t: f64, chain: &ReverseChain, k: usize) -> Result<Vec<f64>> {
    let start = chain.segment(k)?;
    if !start.contains(t) {
        return Err(Error::Membership {
            r: 0,
            value: t,
            lo: start.lo,
            hi: start.hi,
        });
    }
    let tol = chain.clamp_tol();
    let mut out = vec![t];
    let mut x = t;
    for r in 1..=k {
        x = ladder.phi1(x)?;
        let seg = chain.segments[k - r];
        if x < seg.lo - tol || x > seg.hi + tol {
            return Err(Error::Membership {
                r,
                value: x,
                lo: seg.lo,
                hi: seg.hi,
            });
        }
        x = x.clamp(seg.lo, seg.hi);
        out.push(x);
    }
    Ok(out)
}

/// Forward segments `[phi_1^k(T), phi_1^k(T+U)]` for `k = 0..=n+1`, checked
/// to be disjoint and ordered right to left.
pub fn forward_set(ladder: &Ladder, t: f64, u: f64, n: usize) -> Result<Vec<IterSegment>> {
    let lo = forward_orbit(ladder, t, n + 1)?;
    let hi = forward_orbit(ladder, t + u, n + 1)?;
    let segments: Vec<IterSegment> = (0..=n + 1)
        .map(|k| IterSegment { k, lo: lo[k], hi: hi[k] })
        .collect();
    for w in segments.windows(2) {
        if !(w[1].hi < w[0].lo) {
            return Err(Error::Invariant(format!(
                "forward segments {} and {} are not ordered",
                w[0].k, w[1].k
            )));
        }
    }
    Ok(segments)
}

/// `(phi_1^k(t), prod_{r<k} Z~^2(phi_1^r(t)))`.
pub fn pushforward(ladder: &Ladder, t: f64, k: usize) -> Result<(f64, f64)> {
    let mut x = t;
    let mut weight = 1.0;
    for _ in 0..k {
        let (next, w) = ladder.step(x)?;
        weight *= w;
        x = next;
    }
    Ok((x, weight))
}

/// Error allowance for [`transform_integral`]: the quadrature tolerance plus
/// the root tolerance amplified by `ln T` once per iteration.
pub fn tolerance_budget(quad_rel_tol: f64, root_rel_tol: f64, t: f64, k: usize) -> f64 {
    quad_rel_tol + k as f64 * root_rel_tol * t.ln()
}

/// Integrand type accepted by the transform.
pub type TestFn<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

fn panel_breaks(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let n = ((hi - lo) / oscillation_length(lo)).ceil() as usize * k.max(1);
    uniform_breaks(lo, hi, n.max(1))
}

/// `(int_T^{T+U} g, int_{T^k}^{(T+U)^k} g(phi_1^k(t)) prod Z~^2(phi_1^r(t)) dt)`.
pub fn transform_integral(
    ladder: &Ladder,
    g: TestFn,
    t: f64,
    u: f64,
    k: usize,
    spec: AdaptiveSpec,
) -> Result<(f64, f64)> {
    Ok(transform_integral_many(ladder, &[g], t, u, k, spec)?[0])
}

/// [`transform_integral`] for several integrands sharing one pass over the
/// nodes.
pub fn transform_integral_many(
    ladder: &Ladder,
    gs: &[TestFn],
    t: f64,
    u: f64,
    k: usize,
    spec: AdaptiveSpec,
) -> Result<Vec<(f64, f64)>> {
    let chain = build_chain_ungated(ladder, t, u, k)?;
    let seg = *chain.segment(k)?;
    let tol = chain.clamp_tol();
    let base = chain.segments[0];

    let direct = |s: f64, out: &mut [f64]| -> Result<()> {
        for (o, g) in out.iter_mut().zip(gs) {
            *o = g(s);
        }
        Ok(())
    };
    let pulled = |s: f64, out: &mut [f64]| -> Result<()> {
        let (image, weight) = pushforward(ladder, s, k)?;
        if image < base.lo - tol || image > base.hi + tol {
            return Err(Error::Clamp {
                value: image,
                lo: base.lo,
                hi: base.hi,
                excess: (base.lo - image).max(image - base.hi),
            });
        }
        let image = image.clamp(base.lo, base.hi);
        for (o, g) in out.iter_mut().zip(gs) {
            *o = g(image) * weight;
        }
        Ok(())
    };
    let lhs = integrate_vec(direct, &panel_breaks(base.lo, base.hi, k), gs.len(), spec)?;
    let rhs = integrate_vec(pulled, &panel_breaks(seg.lo, seg.hi, k), gs.len(), spec)?;
    Ok(lhs.values.into_iter().zip(rhs.values).collect())
}

/// Gaps between consecutive segments divided by `(1 - c) T / ln T`.
pub fn gap_ratios(chain: &ReverseChain) -> Vec<f64> {
    let scale = (1.0 - crate::specfun::EULER_C) * chain.t / chain.t.ln();
    chain.gaps().into_iter().map(|g| g / scale).collect()
}

/// Evaluate [`forward_membership`] at the midpoints of every segment in
/// parallel; used to spot-check a chain.
pub fn check_midpoints(ladder: &Ladder, chain: &ReverseChain) -> Result<()> {
    chain
        .segments
        .par_iter()
        .map(|s| forward_membership(ladder, 0.5 * (s.lo + s.hi), chain, s.k).map(|_| ()))
        .collect()
}
