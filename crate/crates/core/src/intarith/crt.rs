use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Combines `x = r1 (mod m1)` and `x = r2 (mod m2)`.
///
/// Returns `(x mod lcm, lcm)`, or `None` when `r1` and `r2` disagree modulo
/// `gcd(m1, m2)`. Moduli must be positive.
pub fn crt_combine(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(*m1 > BigInt::zero() && *m2 > BigInt::zero(), "moduli must be positive");
    let egcd = m1.extended_gcd(m2);
    let g = egcd.gcd;
    let diff = r2 - r1;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let lcm = m1 / &g * m2;
    // m1 * x + m2 * y = g  =>  r1 + m1 * x * (diff / g) solves both.
    let step = (&diff / &g * &egcd.x).mod_floor(&(m2 / &g));
    let x = (r1 + m1 * step).mod_floor(&lcm);
    Some((x, lcm))
}
