//! Dimensions of weight-2 cusp forms on `Gamma_0(N)` and related windows.

use num_traits::ToPrimitive;

use crate::intarith::{dedekind_psi, factor, is_prime};

fn psi_u64(n: u64) -> u64 {
    dedekind_psi(n).to_u64().expect("psi(N) fits in 64 bits")
}

fn euler_phi(n: u64) -> u64 {
    factor(n).pairs().iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// Genus of `X_0(N)`, i.e. `dim S_2(Gamma_0(N))`:
/// `1 + psi/12 - nu2/4 - nu3/3 - nu_inf/2`.
pub fn genus_x0(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    let f = factor(n);
    let mu = psi_u64(n) as i64;
    let nu2: i64 = if n.is_multiple_of(4) {
        0
    } else {
        f.primes()
            .map(|p| match p % 4 {
                1 => 2,
                3 => 0,
                _ => 1,
            })
            .product()
    };
    let nu3: i64 = if n.is_multiple_of(9) {
        0
    } else {
        f.primes()
            .map(|p| match p % 3 {
                0 => 1,
                1 => 2,
                _ => 0,
            })
            .product()
    };
    let nu_inf: i64 = f
        .divisors()
        .into_iter()
        .map(|d| {
            let g = num_integer::gcd(d, n / d);
            euler_phi(g) as i64
        })
        .sum();
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0, "N = {n}: 12g = {twelve_g}");
    (twelve_g / 12) as u64
}

// Dirichlet inverse of the divisor-count function: multiplicative with
// beta(p) = -2, beta(p^2) = 1 and beta(p^e) = 0 for e >= 3.
fn sigma0_inverse(n: u64) -> i64 {
    factor(n)
        .pairs()
        .iter()
        .map(|&(_, e)| match e {
            1 => -2,
            2 => 1,
            _ => 0,
        })
        .product()
}

/// `dim S_2(Gamma_0(N))^new`, from `genus(M) = sum_{d | M} sigma0(M/d) new(d)`
/// inverted over the divisors of `N`.
pub fn dim_s2_new(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    let total: i64 = factor(n)
        .divisors()
        .into_iter()
        .map(|m| sigma0_inverse(n / m) * genus_x0(m) as i64)
        .sum();
    debug_assert!(total >= 0);
    total as u64
}

/// `floor(k psi(N) / 12)`.
pub fn sturm_bound(n: u64, k: u64) -> u64 {
    k * psi_u64(n) / 12
}

/// Largest prime `l <= psi(N) / 6`, or 0 when the window holds no prime.
pub fn irrational_coeff_prime_bound(n: u64) -> u64 {
    let top = psi_u64(n) / 6;
    (2..=top).rev().find(|&l| is_prime(l)).unwrap_or(0)
}
