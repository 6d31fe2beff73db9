//! Parsers for values clap does not know about.

use num_bigint::BigUint;
use num_traits::{Num, Zero};

/// Largest exponent accepted in `<m>e<k>` shorthand.
const MAX_DECIMAL_EXPONENT: usize = 1_000_000;

/// A positive decimal integer, or `<m>e<k>` meaning `m * 10^k`.
pub fn big(s: &str) -> Result<BigUint, String> {
    let s = s.trim();
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, k)) => {
            let k: usize = k.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
            if k > MAX_DECIMAL_EXPONENT {
                return Err(format!("exponent {k} exceeds {MAX_DECIMAL_EXPONENT}"));
            }
            (m, k)
        }
        None => (s, 0),
    };
    if mantissa.is_empty() || !mantissa.bytes().all(|c| c.is_ascii_digit()) {
        return Err(format!("`{s}` is not a nonnegative integer or `<m>e<k>`"));
    }
    let m = BigUint::from_str_radix(mantissa, 10).map_err(|e| e.to_string())?;
    let value = m * num_traits::pow(BigUint::from(10u32), exponent);
    if value.is_zero() {
        return Err("value must be at least 1".into());
    }
    Ok(value)
}

/// `2^4,3^2,5` as prime-exponent pairs.
pub fn prime_powers(s: &str) -> Result<Vec<(u64, u32)>, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let (ell, e) = part.split_once('^').unwrap_or((part, "1"));
            let ell: u64 = ell.parse().map_err(|_| format!("bad prime `{ell}`"))?;
            let e: u32 = e.parse().map_err(|_| format!("bad exponent `{e}`"))?;
            if !lps_core::intarith::is_prime(ell) {
                return Err(format!("{ell} is not prime"));
            }
            Ok((ell, e))
        })
        .collect()
}

/// `2,3,5,7` as a list of primes.
pub fn prime_list(s: &str) -> Result<Vec<u64>, String> {
    prime_powers(s)?
        .into_iter()
        .map(|(ell, e)| {
            if e == 1 {
                Ok(ell)
            } else {
                Err(format!("`{ell}^{e}`: give primes only"))
            }
        })
        .collect()
}
