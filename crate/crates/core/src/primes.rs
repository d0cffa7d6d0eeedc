//! Small prime generation.

use alloc::vec;
use alloc::vec::Vec;

/// The first `n` primes in increasing order.
pub fn first_primes(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6
    let nf = n.max(6) as f64;
    let bound = (nf * (libm::log(nf) + libm::log(libm::log(nf)))) as usize + 10;
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::with_capacity(n);
    for i in 2..=bound {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        if out.len() == n {
            break;
        }
        let mut j = i * i;
        while j <= bound {
            composite[j] = true;
            j += i;
        }
    }
    out
}
