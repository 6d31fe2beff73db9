//! Integer utilities shared by every other module: factorization, radicals,
//! the 2-adic valuation, the Dedekind psi function, perfect-power tests and
//! the Chinese remainder theorem.

mod crt;
mod factor;
mod roots;

pub use crt::crt_combine;
pub use factor::{factor, is_prime, primes_up_to, Factorization};
pub(crate) use roots::auxiliary_primes;
pub use roots::{integer_root, is_pth_power_residue, perfect_power_split, primitive_root, pth_power_table};

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Product of the distinct primes dividing `|m|`.
pub fn radical(m: i64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(factor(m.unsigned_abs()).radical())
}

/// Product of the distinct odd primes dividing `|m|`.
pub fn odd_radical(m: i64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(factor(m.unsigned_abs()).odd_radical())
}

/// `n * prod_{p | n} (1 + 1/p)`, exact.
///
/// Panics if `n == 0`.
pub fn dedekind_psi(n: u64) -> BigUint {
    assert!(n >= 1, "dedekind_psi needs n >= 1");
    factor(n).psi()
}

/// Exact 2-adic valuation of `m`.
pub fn ord2(m: i64) -> Result<u32> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(m.trailing_zeros())
}

/// The squarefree `m'` with `m = m' s^2`, keeping the sign of `m`.
pub fn squarefree_part(m: i64) -> Result<i64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    let f = factor(m.unsigned_abs());
    let part: u64 = f.pairs().iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| *p).product();
    let part = part as i64;
    Ok(if m < 0 { -part } else { part })
}
