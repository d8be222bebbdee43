//! Hardy's Z-function on a few heights, and the first zeros located by sign changes.

use jacobs_ladder::specfun::{hardy_z, riemann_siegel_theta, zeta_modulus_sq, CriticalHeight};

fn main() -> jacobs_ladder::Result<()> {
    println!("{:>10} {:>22} {:>22} {:>22}", "t", "theta(t)", "Z(t)", "|zeta(1/2+it)|^2");
    for t in [10.0, 100.0, 250.0, 1000.0, 1e4, 1e5] {
        let h = CriticalHeight::new(t)?;
        println!(
            "{t:>10} {:>22.15e} {:>22.15e} {:>22.15e}",
            riemann_siegel_theta(h)?,
            hardy_z(h)?,
            zeta_modulus_sq(h)?
        );
    }

    let z = |t: f64| hardy_z(CriticalHeight::new(t).unwrap()).unwrap();
    let mut zeros = Vec::new();
    let mut t = 10.0;
    while zeros.len() < 5 {
        let (a, b) = (t, t + 0.05);
        if z(a) * z(b) < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if z(lo) * z(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        t = b;
    }
    println!("first zeros: {zeros:.12?}");
    Ok(())
}
