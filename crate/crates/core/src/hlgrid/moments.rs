//! Block moments of the grid samples.
//!
//! Panels are grouped into blocks of [`BLOCK_PANELS`]. For a block with centre
//! `c` and half-width `h` the moments `M_m = sum w Z^2 ((t - c) / h)^m` turn a
//! damped sum over the block into a short Taylor series in `h / x`.

use rayon::prelude::*;

use super::GL_ORDER;
use crate::quad::GaussLegendre;

pub(super) const BLOCK_PANELS: usize = 32;
/// Taylor terms used for the damped sum.
const TERMS: usize = 14;
/// Stored moments; one more than `TERMS` for the first-moment sum.
const STORED: usize = TERMS + 1;
/// Below this `x` the series converges too slowly and sums are taken directly.
const MIN_X: f64 = 400.0;

#[derive(Debug, Clone, Default)]
pub(super) struct MomentTable {
    centres: Vec<f64>,
    half_widths: Vec<f64>,
    moments: Vec<[f64; STORED]>,
}

impl MomentTable {
    pub(super) fn build(bounds: &[f64], samples: &[f64], rule: &GaussLegendre) -> Self {
        let panels = bounds.len() - 1;
        let blocks = panels / BLOCK_PANELS;
        let rows: Vec<(f64, f64, [f64; STORED])> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let first = b * BLOCK_PANELS;
                let last = first + BLOCK_PANELS;
                let (lo, hi) = (bounds[first], bounds[last]);
                let c = 0.5 * (lo + hi);
                let h = 0.5 * (hi - lo);
                let mut m = [0.0; STORED];
                for j in first..last {
                    let zs = &samples[j * GL_ORDER..(j + 1) * GL_ORDER];
                    for ((t, w), z2) in rule.mapped(bounds[j], bounds[j + 1]).zip(zs) {
                        let s = (t - c) / h;
                        let mut p = w * z2;
                        for slot in m.iter_mut() {
                            *slot += p;
                            p *= s;
                        }
                    }
                }
                (c, h, m)
            })
            .collect();
        let mut table = MomentTable::default();
        for (c, h, m) in rows {
            table.centres.push(c);
            table.half_widths.push(h);
            table.moments.push(m);
        }
        table
    }

    pub(super) fn accepts(&self, x: f64) -> bool {
        x >= MIN_X && !self.centres.is_empty()
    }

    /// Full blocks covered by the first `panels` panels, and the panel index
    /// where the uncovered remainder starts.
    pub(super) fn blocks_within(&self, panels: usize) -> (usize, usize) {
        let blocks = (panels / BLOCK_PANELS).min(self.centres.len());
        (blocks, blocks * BLOCK_PANELS)
    }

    /// `(sum w Z^2 e^{-2t/x}, sum w Z^2 t e^{-2t/x})` over the first `blocks`
    /// blocks.
    pub(super) fn sums(&self, x: f64, blocks: usize) -> (f64, f64) {
        let mut v = 0.0;
        let mut first = 0.0;
        for b in 0..blocks {
            let c = self.centres[b];
            let h = self.half_widths[b];
            let m = &self.moments[b];
            let r = -2.0 * h / x;
            let mut coeff = 1.0;
            let mut s0 = 0.0;
            let mut s1 = 0.0;
            for k in 0..TERMS {
                s0 += coeff * m[k];
                s1 += coeff * m[k + 1];
                coeff *= r / (k + 1) as f64;
            }
            let e = (-2.0 * c / x).exp();
            v += e * s0;
            first += e * (c * s0 + h * s1);
        }
        (v, first)
    }
}
