//! Closed-form series for the extremal models: exact expectations for the
//! supersoluble and permutation extremal families, and the universal bound
//! constants evaluated from Riemann zeta products with certified error bounds.
//!
//! Every series here has terms decaying at least like 2^(−j); each evaluator
//! carries a proven geometric majorant for its tail and additionally asserts
//! the majorant against every term it actually computes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bounded::{ulp, ErrorBoundedReal, ZetaTable};
use crate::error::{Error, Result};
use crate::perm::is_prime;
use crate::waiting::{expected_wait_from_dirichlet, DirichletPolynomial};

/// Known Fermat primes.
pub const FERMAT_PRIMES: [u64; 5] = [3, 5, 17, 257, 65537];

/// Reference value from prior work, kept for report annotations only; never
/// computed and never asserted.
pub const PRIOR_ETA_REFERENCE: &str = "2.875065";

/// Reference value for the d-generated abelian supremum, annotation only.
pub const POMERANCE_SIGMA_REFERENCE: &str = "2.11846";

const MAX_DIGITS: u32 = 40;
const MAX_TERMS: u32 = 600;

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::BadArgument(format!(
            "target digits must be in 1..={MAX_DIGITS}"
        )));
    }
    Ok(())
}

fn pow_big(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// C_{p,α}(k) = Π_{0 <= i <= α−1} (1 − p^i/p^k), exactly.
pub fn c_poly(p: u64, alpha: u32, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..alpha {
        acc *= BigRational::one() - BigRational::new(pow_big(p, i), pow_big(p, k));
    }
    acc
}

/// D_{p,α}(k) = Π_{1 <= i <= α} (1 − p^i/p^k), exactly.
pub fn d_poly(p: u64, alpha: u32, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 1..=alpha {
        acc *= BigRational::one() - BigRational::new(pow_big(p, i), pow_big(p, k));
    }
    acc
}

/// C_{p,α} as a Dirichlet polynomial in k.
pub fn c_poly_dirichlet(p: u64, alpha: u32) -> Result<DirichletPolynomial> {
    let mut acc = DirichletPolynomial::one();
    for i in 0..alpha {
        acc = acc.mul(&DirichletPolynomial::one_minus(
            BigRational::from(pow_big(p, i)),
            p as u128,
        )?)?;
    }
    Ok(acc)
}

/// D_{p,α} as a Dirichlet polynomial in k.
pub fn d_poly_dirichlet(p: u64, alpha: u32) -> Result<DirichletPolynomial> {
    let mut acc = DirichletPolynomial::one();
    for i in 1..=alpha {
        acc = acc.mul(&DirichletPolynomial::one_minus(
            BigRational::from(pow_big(p, i)),
            p as u128,
        )?)?;
    }
    Ok(acc)
}

/// Exact e(H_{π,d}) from P(k) = C_{2,d}(k)·Π_{p∈π\{2}} D_{p,d}(k) by geometric
/// summation. Requires 2 ∈ π.
pub fn e_h_exact(pi: &[u64], d: u32) -> Result<BigRational> {
    if !pi.contains(&2) {
        return Err(Error::BadConstructor("the prime set must contain 2".into()));
    }
    if d < 1 {
        return Err(Error::BadConstructor("d must be >= 1".into()));
    }
    for &p in pi {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let mut poly = c_poly_dirichlet(2, d)?;
    let mut odd: Vec<u64> = pi.iter().copied().filter(|&p| p != 2).collect();
    odd.sort_unstable();
    odd.dedup();
    for p in odd {
        poly = poly.mul(&d_poly_dirichlet(p, d)?)?;
    }
    expected_wait_from_dirichlet(&poly)
}

/// Exact e(G_n) for the extremal permutation group of degree n, from
/// P(k) = Π_{0 <= i <= m−1}(1 − 2^i/2^k) · (1 − 3/3^k)^η with m = ⌊n/2⌋ and
/// η = n mod 2.
pub fn perm_extremal_e(n: u32) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::BadArgument("degree must be >= 2".into()));
    }
    let m = n / 2;
    let mut poly = c_poly_dirichlet(2, m)?;
    if n % 2 == 1 {
        poly = poly.mul(&d_poly_dirichlet(3, 1)?)?;
    }
    expected_wait_from_dirichlet(&poly)
}

/// Shared driver: sums term(j) for j in start.., where |term(j)| is bounded by
/// majorant·2^(−j), stopping once the remaining tail fits the target together
/// with the accumulated interval width. `nonnegative` tightens the tail to
/// [0, bound] when the terms are provably nonnegative.
fn sum_with_geometric_tail<F>(
    start: u32,
    digits: u32,
    majorant: BigRational,
    nonnegative: bool,
    mut term: F,
) -> Result<ErrorBoundedReal>
where
    F: FnMut(u32) -> Result<ErrorBoundedReal>,
{
    let work = 2 * digits + 10;
    let target = ulp(digits) * BigRational::new(BigInt::one(), BigInt::from(2));
    let mut acc = ErrorBoundedReal::exact(BigRational::zero());
    let mut j = start;
    loop {
        // tail bound Σ_{i >= j} majorant·2^(−i) = majorant·2^(1−j)
        let tail = &majorant * BigRational::new(BigInt::from(2), BigInt::from(2).pow(j));
        if acc.abs_err() + &tail <= target {
            let tail_interval = if nonnegative {
                ErrorBoundedReal::from_interval(BigRational::zero(), tail)
            } else {
                ErrorBoundedReal::from_interval(-&tail, tail)
            };
            return Ok(acc.add(&tail_interval).round(work));
        }
        let t = term(j)?;
        // the majorant must dominate every computed term, or the tail bound
        // would be unsound
        let cap = &majorant * BigRational::new(BigInt::one(), BigInt::from(2).pow(j));
        assert!(
            t.value().abs() <= &cap + t.abs_err(),
            "series term at j={j} exceeds its geometric majorant"
        );
        acc = acc.add(&t).round(work);
        j += 1;
        if j > start + MAX_TERMS {
            return Err(Error::PrecisionUnattainable);
        }
    }
}

fn table_for(digits: u32, extra: u32) -> Result<ZetaTable> {
    // terms decay like 2^(−j), so about 3.33 digits per term
    let j_max = (digits as f64 * 3.33).ceil() as u32 + 12;
    ZetaTable::build(j_max + extra, 2 * digits + 10)
}

/// e_d − d: the supremum over prime sets of e(H_{π,d}) − d, as the zeta-form
/// series 2 + Σ_{j≥1} (1 − (2^(j+1) − 2^(−d))/(2^(j+1) − 1) · Π ζ(j+l)^(−1)).
pub fn e_d_minus_d(d: u32, digits: u32) -> Result<ErrorBoundedReal> {
    check_digits(digits)?;
    if d < 1 {
        return Err(Error::BadArgument("d must be >= 1".into()));
    }
    let digits = digits + 2;
    let table = table_for(digits, d + 4)?;
    let work = 2 * digits + 10;
    let sum = sum_with_geometric_tail(1, digits, BigRational::from(BigInt::from(2)), false, |j| {
        let two_j1 = BigRational::from(BigInt::from(2).pow(j + 1));
        let ratio = (&two_j1 - BigRational::new(BigInt::one(), BigInt::from(2).pow(d)))
            / (&two_j1 - BigRational::one());
        let mut window = ErrorBoundedReal::exact(BigRational::one());
        for l in 1..=d {
            window = window.mul(&table.zeta(j + l).recip()?).round(work);
        }
        Ok(ErrorBoundedReal::exact(BigRational::one())
            .sub(&window.mul_rational(&ratio))
            .round(work))
    })?;
    Ok(ErrorBoundedReal::exact_int(2).add(&sum).round(work))
}

/// κ = lim_d (e_d − d), evaluated as
/// 2 + (1 − 4c/3) + Σ_{j≥2} (1 − (1 + 1/(2^(j+1)−1))·c·Π_{2<=n<=j} ζ(n)).
pub fn kappa(digits: u32) -> Result<ErrorBoundedReal> {
    check_digits(digits)?;
    let digits = digits + 2;
    let table = table_for(digits, 4)?;
    let work = 2 * digits + 10;
    let c = table.c();
    let head = ErrorBoundedReal::exact_int(1)
        .sub(&c.mul_rational(&BigRational::new(BigInt::from(4), BigInt::from(3))));
    let sum = sum_with_geometric_tail(2, digits, BigRational::from(BigInt::from(2)), false, |j| {
        let a = BigRational::new(BigInt::one(), BigInt::from(2).pow(j + 1) - BigInt::one());
        let factor = c
            .mul(table.prefix_product(j)?)
            .mul_rational(&(BigRational::one() + a));
        Ok(ErrorBoundedReal::exact(BigRational::one())
            .sub(&factor)
            .round(work))
    })?;
    Ok(ErrorBoundedReal::exact_int(2)
        .add(&head)
        .add(&sum)
        .round(work))
}

/// κ̃: the odd-order refinement with the known Fermat primes,
/// 3 − (bc/2)·Π p²/(p²−1) + Σ_{j≥2} (1 − b·Π(1−2^(−n))·Π(1+1/(p^(j+1)−1))·c·Πζ(n)).
pub fn kappa_tilde(digits: u32) -> Result<ErrorBoundedReal> {
    check_digits(digits)?;
    let digits = digits + 2;
    let table = table_for(digits, 4)?;
    let work = 2 * digits + 10;
    let b = table.b();
    let c = table.c();
    let fermat_product: BigRational = FERMAT_PRIMES
        .iter()
        .map(|&p| {
            let p2 = BigInt::from(p) * BigInt::from(p);
            BigRational::new(p2.clone(), p2 - BigInt::one())
        })
        .product();
    let head = b
        .mul(c)
        .mul_rational(&(&fermat_product / BigRational::from(BigInt::from(2))));

    // running finite product Π_{1<=n<=j}(1 − 2^(−n)), advanced inside the loop
    let mut two_product = BigRational::one();
    let mut two_product_upto = 0u32;
    let sum = sum_with_geometric_tail(2, digits, BigRational::from(BigInt::from(6)), false, |j| {
        while two_product_upto < j {
            two_product_upto += 1;
            two_product *= BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::from(2).pow(two_product_upto));
        }
        let mut fermat_factor = BigRational::one();
        for &p in &FERMAT_PRIMES {
            fermat_factor *= BigRational::one()
                + BigRational::new(BigInt::one(), BigInt::from(p).pow(j + 1) - BigInt::one());
        }
        let factor = b
            .mul(c)
            .mul(table.prefix_product(j)?)
            .mul_rational(&(&two_product * &fermat_factor));
        Ok(ErrorBoundedReal::exact(BigRational::one())
            .sub(&factor)
            .round(work))
    })?;
    Ok(ErrorBoundedReal::exact_int(3)
        .sub(&head)
        .add(&sum)
        .round(work))
}

/// ω_{m,η} = Σ_{j≥0} (1 − Π_{1<=l<=m}(1 − 2^(−(j+l)))·(1 − 3^(1−j−m))^η).
pub fn omega(m: u32, eta: u32, digits: u32) -> Result<ErrorBoundedReal> {
    check_digits(digits)?;
    if m < 1 {
        return Err(Error::BadArgument("m must be >= 1".into()));
    }
    if eta > 1 {
        return Err(Error::BadArgument("eta must be 0 or 1".into()));
    }
    let digits = digits + 2;
    let work = 2 * digits + 10;
    // |term_j| <= 2^(−j) + η·3^(1−m)·3^(−j) <= (1 + η·3^(1−m)·(2/3)^j)·2^(−j)
    let majorant = BigRational::one()
        + BigRational::from(BigInt::from(eta))
            * BigRational::new(BigInt::from(3), BigInt::from(3).pow(m));
    sum_with_geometric_tail(0, digits, majorant, true, |j| {
        let mut product = BigRational::one();
        for l in 1..=m {
            product *=
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2).pow(j + l));
        }
        if eta == 1 {
            product *=
                BigRational::one() - BigRational::new(BigInt::from(3), BigInt::from(3).pow(j + m));
        }
        Ok(ErrorBoundedReal::exact(BigRational::one() - product).round(work))
    })
}

/// lim_{m→∞} ω_{m,0} = Σ_{j≥0} (1 − Π_{n>j}(1 − 2^(−n))).
pub fn omega_limit(digits: u32) -> Result<ErrorBoundedReal> {
    check_digits(digits)?;
    let digits = digits + 2;
    let table = table_for(digits, 0)?;
    let work = 2 * digits + 10;
    // Π_{n>=1}(1 − 2^(−n)) = 1/b
    let full_product = table.b().recip()?;
    let mut partial = BigRational::one();
    let mut partial_upto = 0u32;
    sum_with_geometric_tail(0, digits, BigRational::one(), true, |j| {
        while partial_upto < j {
            partial_upto += 1;
            partial *= BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::from(2).pow(partial_upto));
        }
        // Π_{n>j}(1−2^(−n)) = full / partial_j
        let rest = full_product.mul_rational(&partial.recip());
        Ok(ErrorBoundedReal::exact(BigRational::one())
            .sub(&rest)
            .round(work))
    })
}
