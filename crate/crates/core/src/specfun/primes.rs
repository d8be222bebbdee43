use crate::error::{Error, Result};

/// Largest argument accepted by [`prime_count`].
pub const SIEVE_LIMIT: f64 = 1e8;

/// Exact prime-counting function `pi(T)` by an odd-only sieve of Eratosthenes.
pub fn prime_count(t: f64) -> Result<u64> {
    if !(t >= 2.0) {
        return Err(Error::domain("T", t, "T >= 2"));
    }
    if t > SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "prime_count({t}) exceeds the sieve limit {SIEVE_LIMIT:e}"
        )));
    }
    let n = t.floor() as usize;
    // index i stands for the odd number 2i + 1
    let half = (n + 1) / 2;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    Ok(1 + composite.iter().filter(|c| !**c).count() as u64)
}
