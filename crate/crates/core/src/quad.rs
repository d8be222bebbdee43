//! Quadrature rules shared by the grid, the transformation checks and the
//! Gram matrices.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, then Newton
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes mapped to `[lo, hi]` together with their scaled weights.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        self.mapped(lo, hi).map(|(t, w)| w * f(t)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = if n == 0 { 0.0 } else { n as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p, d)
}

// 15-point Kronrod extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate_vec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveSpec {
    fn default() -> Self {
        AdaptiveSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_panels: 20_000,
        }
    }
}

/// Result of a vector-valued adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct VecIntegral {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

fn gk15<F>(f: &F, lo: f64, hi: f64, dim: usize) -> Result<Panel>
where
    F: Fn(f64, &mut [f64]) -> Result<()>,
{
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    // slot 2j and 2j+1 hold -x_j and +x_j, slot 14 the centre
    let mut fv = vec![0.0; 15 * dim];
    for slot in 0..15 {
        let x = if slot == 14 {
            mid
        } else {
            let sign = if slot % 2 == 0 { -1.0 } else { 1.0 };
            mid + sign * half * XGK[slot / 2]
        };
        f(x, &mut fv[slot * dim..(slot + 1) * dim])?;
    }
    let weight = |slot: usize| WGK[if slot == 14 { 7 } else { slot / 2 }];

    let mut value = vec![0.0; dim];
    let mut error = vec![0.0; dim];
    for d in 0..dim {
        let at = |slot: usize| fv[slot * dim + d];
        let kron: f64 = (0..15).map(|s| weight(s) * at(s)).sum();
        let gauss: f64 = (0..15)
            .filter(|&s| s == 14 || (s / 2) % 2 == 1)
            .map(|s| WG[if s == 14 { 3 } else { s / 4 }] * at(s))
            .sum();
        let abs: f64 = (0..15).map(|s| weight(s) * at(s).abs()).sum();
        let mean = 0.5 * kron;
        let asc = half.abs() * (0..15).map(|s| weight(s) * (at(s) - mean).abs()).sum::<f64>();
        let raw = ((kron - gauss) * half).abs();
        let e = if asc != 0.0 && raw != 0.0 {
            asc * (200.0 * raw / asc).powf(1.5).min(1.0)
        } else {
            raw
        };
        error[d] = e.max(50.0 * f64::EPSILON * abs * half.abs());
        value[d] = kron * half;
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error,
    })
}

/// Adaptive Gauss-Kronrod (7/15) integration of a vector-valued integrand.
///
/// `breaks` holds the initial panel boundaries in increasing order. Every
/// component must satisfy `err <= max(abs_tol, rel_tol * |value|)`. Panels are
/// evaluated in parallel but always summed in left-to-right order, so the
/// result does not depend on the thread count.
pub fn integrate_vec<F>(f: F, breaks: &[f64], dim: usize, spec: AdaptiveSpec) -> Result<VecIntegral>
where
    F: Fn(f64, &mut [f64]) -> Result<()> + Sync,
{
    assert!(breaks.len() >= 2 && dim >= 1);
    let mut panels: Vec<Panel> = breaks
        .par_windows(2)
        .map(|w| gk15(&f, w[0], w[1], dim))
        .collect::<Result<_>>()?;
    let mut evaluations = 15 * panels.len();
    let total_width = breaks[breaks.len() - 1] - breaks[0];

    loop {
        let mut values = vec![0.0; dim];
        let mut errors = vec![0.0; dim];
        for p in &panels {
            for d in 0..dim {
                values[d] += p.value[d];
                errors[d] += p.error[d];
            }
        }
        let tol: Vec<f64> = values
            .iter()
            .map(|v| spec.abs_tol.max(spec.rel_tol * v.abs()))
            .collect();
        let failing: Vec<usize> = (0..dim).filter(|&d| errors[d] > tol[d]).collect();
        if failing.is_empty() {
            return Ok(VecIntegral {
                values,
                errors,
                panels: panels.len(),
                evaluations,
            });
        }
        if panels.len() >= spec.max_panels {
            let d = failing[0];
            return Err(Error::Quadrature {
                entry: None,
                component: d,
                error: errors[d],
                tolerance: tol[d],
            });
        }

        let mut split: Vec<bool> = panels
            .iter()
            .map(|p| {
                let share = (p.hi - p.lo) / total_width;
                failing.iter().any(|&d| p.error[d] > 0.5 * tol[d] * share)
            })
            .collect();
        if !split.iter().any(|s| *s) {
            let d = failing[0];
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.error[d].total_cmp(&b.1.error[d]))
                .map(|(i, _)| i)
                .unwrap_or(0);
            split[worst] = true;
        }

        let halves: Vec<(f64, f64)> = panels
            .iter()
            .zip(&split)
            .filter(|(_, s)| **s)
            .flat_map(|(p, _)| {
                let m = 0.5 * (p.lo + p.hi);
                [(p.lo, m), (m, p.hi)]
            })
            .collect();
        let fresh: Vec<Panel> = halves
            .par_iter()
            .map(|&(lo, hi)| gk15(&f, lo, hi, dim))
            .collect::<Result<_>>()?;
        evaluations += 15 * fresh.len();

        let mut fresh = fresh.into_iter();
        let mut next = Vec::with_capacity(panels.len() + halves.len() / 2);
        for (p, s) in panels.into_iter().zip(split) {
            if s {
                next.push(fresh.next().expect("left half"));
                next.push(fresh.next().expect("right half"));
            } else {
                next.push(p);
            }
        }
        panels = next;
    }
}

/// Scalar convenience wrapper over [`integrate_vec`].
pub fn integrate<F>(f: F, breaks: &[f64], spec: AdaptiveSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let r = integrate_vec(
        |t, out: &mut [f64]| {
            out[0] = f(t)?;
            Ok(())
        },
        breaks,
        1,
        spec,
    )?;
    Ok((r.values[0], r.errors[0]))
}

/// `n + 1` equally spaced break points covering `[lo, hi]`.
pub fn uniform_breaks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let mut b: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    b[n] = hi;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::new(8);
        for deg in 0..=15 {
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg));
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
        let w: f64 = rule.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_known_nodes() {
        let rule = GaussLegendre::new(2);
        assert!((rule.nodes[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let rule = GaussLegendre::new(3);
        assert_eq!(rule.nodes[1], 0.0);
        assert!((rule.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_oscillatory() {
        let spec = AdaptiveSpec::default();
        let (v, _) = integrate(|t| Ok((20.0 * t).cos()), &[0.0, 3.0], spec).unwrap();
        assert!((v - (60.0f64).sin() / 20.0).abs() < 1e-11);
    }

    #[test]
    fn adaptive_vector_components_have_own_tolerance() {
        let spec = AdaptiveSpec::default();
        let r = integrate_vec(
            |t, out: &mut [f64]| {
                out[0] = 1.0;
                out[1] = t * t;
                out[2] = t.cos();
                Ok(())
            },
            &uniform_breaks(1e4, 1e4 + 20.0, 4),
            3,
            spec,
        )
        .unwrap();
        assert!((r.values[0] - 20.0).abs() < 1e-10);
        let t2 = ((1e4f64 + 20.0).powi(3) - 1e12) / 3.0;
        assert!(((r.values[1] - t2) / t2).abs() < 1e-12);
        let c = (10_020f64).sin() - (10_000f64).sin();
        assert!((r.values[2] - c).abs() < 1e-9);
    }

    #[test]
    fn adaptive_reports_failure() {
        let spec = AdaptiveSpec {
            max_panels: 4,
            ..AdaptiveSpec::default()
        };
        let r = integrate(|t| Ok((500.0 * t * t).sin()), &[0.0, 10.0], spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
