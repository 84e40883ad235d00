//! Arbitrary-precision values carrying rigorous absolute error bounds.
//!
//! A value is a rational midpoint plus a rational error radius; the quantity
//! it stands for is guaranteed to lie in [value − abs_err, value + abs_err].
//! Every operation propagates bounds conservatively, and `round` trades
//! denominator growth for a tracked rounding error, so long summations stay
//! cheap without losing rigor.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBoundedReal {
    value: BigRational,
    abs_err: BigRational,
}

pub fn pow10(digits: u32) -> BigInt {
    BigInt::from(10).pow(digits)
}

/// 10^(−digits) as a rational.
pub fn ulp(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow10(digits))
}

impl ErrorBoundedReal {
    pub fn exact(value: BigRational) -> Self {
        ErrorBoundedReal {
            value,
            abs_err: BigRational::zero(),
        }
    }

    pub fn exact_int(value: i64) -> Self {
        Self::exact(BigRational::from(BigInt::from(value)))
    }

    pub fn new(value: BigRational, abs_err: BigRational) -> Self {
        debug_assert!(!abs_err.is_negative());
        ErrorBoundedReal { value, abs_err }
    }

    pub fn from_interval(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        ErrorBoundedReal {
            value: (&lo + &hi) * &half,
            abs_err: (&hi - &lo) * &half,
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn abs_err(&self) -> &BigRational {
        &self.abs_err
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.abs_err
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.abs_err
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn intersects(&self, other: &ErrorBoundedReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn add(&self, other: &ErrorBoundedReal) -> Self {
        ErrorBoundedReal {
            value: &self.value + &other.value,
            abs_err: &self.abs_err + &other.abs_err,
        }
    }

    pub fn sub(&self, other: &ErrorBoundedReal) -> Self {
        ErrorBoundedReal {
            value: &self.value - &other.value,
            abs_err: &self.abs_err + &other.abs_err,
        }
    }

    pub fn neg(&self) -> Self {
        ErrorBoundedReal {
            value: -&self.value,
            abs_err: self.abs_err.clone(),
        }
    }

    pub fn mul(&self, other: &ErrorBoundedReal) -> Self {
        let abs_err = self.value.abs() * &other.abs_err
            + other.value.abs() * &self.abs_err
            + &self.abs_err * &other.abs_err;
        ErrorBoundedReal {
            value: &self.value * &other.value,
            abs_err,
        }
    }

    pub fn mul_rational(&self, factor: &BigRational) -> Self {
        ErrorBoundedReal {
            value: &self.value * factor,
            abs_err: &self.abs_err * factor.abs(),
        }
    }

    /// Reciprocal; the interval must be strictly positive.
    pub fn recip(&self) -> Result<Self> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::BadArgument(
                "reciprocal of an interval touching zero".into(),
            ));
        }
        let value = self.value.recip();
        // max deviation of 1/x over [v-e, v+e] is e / (v (v-e))
        let abs_err = &self.abs_err / (&self.value * lo);
        Ok(ErrorBoundedReal { value, abs_err })
    }

    /// Rounds the midpoint to a multiple of 10^(−digits), folding the exact
    /// rounding offset into the error bound; the bound itself is rounded
    /// upward onto the same grid so denominators stay small along long
    /// computations.
    pub fn round(&self, digits: u32) -> Self {
        let scale_rat = BigRational::from(pow10(digits));
        let scaled = &self.value * &scale_rat;
        let rounded = BigRational::from(round_nearest(&scaled));
        let value = rounded / &scale_rat;
        let err_exact = &self.abs_err + (&value - &self.value).abs();
        // the radius gets six extra grid digits so the upward rounding stays
        // negligible next to the half-ulp the midpoint rounding just added
        let err_scale = BigRational::from(pow10(digits + 6));
        let abs_err = BigRational::from((err_exact * &err_scale).ceil().to_integer()) / err_scale;
        ErrorBoundedReal { value, abs_err }
    }

    /// Decimal rendering of the midpoint with the given fractional digits.
    pub fn decimal(&self, digits: u32) -> String {
        rational_decimal(&self.value, digits)
    }

    /// Conservative decimal rendering of the error bound (rounded up).
    pub fn abs_err_decimal(&self, digits: u32) -> String {
        if self.abs_err.is_zero() {
            return "0".into();
        }
        let scale = pow10(digits + 2);
        let scaled = &self.abs_err * BigRational::from(scale.clone());
        let up = scaled.ceil().to_integer();
        rational_decimal(&BigRational::new(up, scale), digits + 2)
    }
}

/// Round half away from zero.
fn round_nearest(x: &BigRational) -> BigInt {
    x.round().to_integer()
}

/// Fixed-point decimal string of a rational, rounded to nearest.
pub fn rational_decimal(x: &BigRational, digits: u32) -> String {
    let scale = pow10(digits);
    let scaled = (x * BigRational::from(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let mag = scaled.magnitude().to_string();
    let mut digits_str = mag;
    let d = digits as usize;
    if digits_str.len() <= d {
        digits_str = format!("{}{}", "0".repeat(d + 1 - digits_str.len()), digits_str);
    }
    let split = digits_str.len() - d;
    let (int_part, frac_part) = digits_str.split_at(split);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int_part);
    if d > 0 {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and zeta values
// ---------------------------------------------------------------------------

const BERNOULLI_MAX: usize = 160;

fn bernoulli_numbers() -> &'static Vec<BigRational> {
    static CELL: OnceLock<Vec<BigRational>> = OnceLock::new();
    CELL.get_or_init(|| {
        // B_m from sum_{j<=m} C(m+1, j) B_j = 0
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        b.push(BigRational::one());
        let mut binomial_row = vec![BigInt::one()];
        for m in 1..=BERNOULLI_MAX {
            // row of C(m+1, j) for j = 0..=m
            binomial_row = {
                let mut row = vec![BigInt::one(); m + 1];
                for j in 1..=m {
                    row[j] = binomial(m as u64 + 1, j as u64);
                }
                row
            };
            let mut acc = BigRational::zero();
            for j in 0..m {
                acc += BigRational::from(binomial_row[j].clone()) * &b[j];
            }
            let coeff = BigRational::new(BigInt::from(-1), BigInt::from(m as i64 + 1));
            b.push(coeff * acc);
        }
        b
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// ζ(n) for integer n ≥ 2 with a certified bound at roughly `digits` decimal
/// digits, by Euler–Maclaurin summation. The remainder after the last
/// correction term is bounded by twice the first omitted term, which is valid
/// because every derivative of x^(−n) keeps a constant sign on [M, ∞).
pub fn zeta(n: u32, digits: u32) -> Result<ErrorBoundedReal> {
    if n < 2 {
        return Err(Error::BadArgument("zeta is evaluated for n >= 2".into()));
    }
    let work = digits + 8;
    let target = ulp(digits + 2);
    let bernoulli = bernoulli_numbers();
    let mut m_points: u64 = 16;
    loop {
        // partial sum over 1..=M, rounded per term
        let mut sum = ErrorBoundedReal::exact(BigRational::zero());
        for m in 1..=m_points {
            let term = BigRational::new(BigInt::one(), BigInt::from(m).pow(n));
            sum = sum.add(&ErrorBoundedReal::exact(term)).round(work);
        }
        let m_big = BigInt::from(m_points);
        // integral tail M^(1-n)/(n-1) and the -f(M)/2 correction
        let integral = BigRational::new(BigInt::one(), m_big.pow(n - 1) * BigInt::from(n - 1));
        let half_f = BigRational::new(BigInt::one(), m_big.pow(n) * BigInt::from(2));
        sum = sum
            .add(&ErrorBoundedReal::exact(integral))
            .sub(&ErrorBoundedReal::exact(half_f))
            .round(work);

        let mut ok = false;
        let mut rising = BigInt::from(n); // n(n+1)...(n+2k-2)
        let mut factorial = BigInt::from(2); // (2k)!
        for k in 1..=60u32 {
            let b2k = &bernoulli[2 * k as usize];
            let term = b2k * BigRational::new(rising.clone(), factorial.clone())
                / BigRational::from(m_big.pow(n + 2 * k - 1));
            sum = sum.add(&ErrorBoundedReal::exact(term)).round(work);
            // first omitted term bounds the remainder; doubled for margin
            let next_rising = &rising * BigInt::from(n + 2 * k - 1) * BigInt::from(n + 2 * k);
            let next_factorial = &factorial * BigInt::from(2 * k + 1) * BigInt::from(2 * k + 2);
            let omitted = bernoulli[2 * k as usize + 2].abs()
                * BigRational::new(next_rising.clone(), next_factorial.clone())
                / BigRational::from(m_big.pow(n + 2 * k + 1));
            rising = next_rising;
            factorial = next_factorial;
            let remainder = omitted * BigRational::from(BigInt::from(2));
            if remainder < target {
                sum = ErrorBoundedReal::new(sum.value().clone(), sum.abs_err() + remainder);
                ok = true;
                break;
            }
        }
        if ok {
            return Ok(sum);
        }
        m_points *= 2;
        if m_points > 4096 {
            return Err(Error::PrecisionUnattainable);
        }
    }
}

/// Enclosure for ζ(n) valid for every n ≥ 3 without evaluation:
/// 1 < ζ(n) ≤ 1 + 2^(1−n).
pub fn zeta_coarse(n: u32) -> ErrorBoundedReal {
    debug_assert!(n >= 3);
    let hi = BigRational::one() + BigRational::new(BigInt::from(2), BigInt::from(2).pow(n));
    ErrorBoundedReal::from_interval(BigRational::one(), hi)
}

/// Precomputed ζ(2..=max_n) with running products and the two infinite-product
/// constants: b = Π (1−2^(−n))^(−1) over n ≥ 1 and c = Π ζ(n)^(−1) over n ≥ 2.
pub struct ZetaTable {
    pub max_n: u32,
    pub digits: u32,
    values: Vec<ErrorBoundedReal>,
    /// prefix[j] = Π_{2 <= n <= j} ζ(n); prefix[0] = prefix[1] = 1.
    prefix: Vec<ErrorBoundedReal>,
    b: ErrorBoundedReal,
    c: ErrorBoundedReal,
}

impl ZetaTable {
    pub fn build(max_n: u32, digits: u32) -> Result<ZetaTable> {
        let max_n = max_n.max(8);
        let work = digits + 8;
        let mut values = Vec::with_capacity(max_n as usize - 1);
        for n in 2..=max_n {
            values.push(zeta(n, digits + 4)?);
        }
        let mut prefix = vec![
            ErrorBoundedReal::exact(BigRational::one()),
            ErrorBoundedReal::exact(BigRational::one()),
        ];
        for n in 2..=max_n {
            let next = prefix
                .last()
                .unwrap()
                .mul(&values[(n - 2) as usize])
                .round(work);
            prefix.push(next);
        }

        // c: invert the full prefix and widen by the product tail,
        // Π_{n > N} ζ(n)^(-1) ∈ [1 − 2^(2−N), 1]
        let full = prefix.last().unwrap();
        let c_finite = full.recip()?;
        let tail_lo =
            BigRational::one() - BigRational::new(BigInt::from(4), BigInt::from(2).pow(max_n));
        let c_tail = ErrorBoundedReal::from_interval(tail_lo, BigRational::one());
        let c = c_finite.mul(&c_tail).round(work);

        // b: finite product of (1−2^(−n))^(−1), tail in [1, 1 + 2^(2−N)]
        let mut b = ErrorBoundedReal::exact(BigRational::one());
        for n in 1..=max_n {
            let factor =
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2).pow(n));
            b = b.mul(&ErrorBoundedReal::exact(factor).recip()?).round(work);
        }
        let b_tail_hi =
            BigRational::one() + BigRational::new(BigInt::from(4), BigInt::from(2).pow(max_n));
        let b_tail = ErrorBoundedReal::from_interval(BigRational::one(), b_tail_hi);
        let b = b.mul(&b_tail).round(work);

        Ok(ZetaTable {
            max_n,
            digits,
            values,
            prefix,
            b,
            c,
        })
    }

    /// ζ(n): tabulated below max_n, the coarse enclosure beyond it.
    pub fn zeta(&self, n: u32) -> ErrorBoundedReal {
        if n >= 2 && n <= self.max_n {
            self.values[(n - 2) as usize].clone()
        } else {
            zeta_coarse(n)
        }
    }

    /// Π_{2 <= n <= j} ζ(n) (1 when j < 2). Requires j ≤ max_n.
    pub fn prefix_product(&self, j: u32) -> Result<&ErrorBoundedReal> {
        self.prefix
            .get(j as usize)
            .ok_or_else(|| Error::BadArgument(format!("zeta table too small for prefix {j}")))
    }

    pub fn b(&self) -> &ErrorBoundedReal {
        &self.b
    }

    pub fn c(&self) -> &ErrorBoundedReal {
        &self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waiting::rat;

    fn parse_rat(s: &str) -> BigRational {
        // decimal literal to exact rational
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = frac.len() as u32;
        let joined: BigInt = format!("{int}{frac}").parse().unwrap();
        BigRational::new(joined, pow10(digits))
    }

    #[test]
    fn interval_arithmetic_is_conservative() {
        let a = ErrorBoundedReal::new(rat(1, 3), rat(1, 100));
        let b = ErrorBoundedReal::new(rat(2, 3), rat(1, 50));
        let sum = a.add(&b);
        assert!(sum.contains(&rat(1, 1)));
        let product = a.mul(&b);
        assert!(product.contains(&(rat(1, 3) * rat(2, 3))));
        let r = b.recip().unwrap();
        assert!(r.contains(&rat(3, 2)));
        assert!(ErrorBoundedReal::new(rat(0, 1), rat(1, 10))
            .recip()
            .is_err());
    }

    #[test]
    fn rounding_keeps_enclosure() {
        let x = ErrorBoundedReal::exact(rat(1, 3));
        let rounded = x.round(6);
        assert!(rounded.contains(&rat(1, 3)));
        assert!(rounded.abs_err() < &rat(1, 100_000));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_decimal(&rat(29, 10), 4), "2.9000");
        assert_eq!(rational_decimal(&rat(-1, 3), 5), "-0.33333");
        assert_eq!(rational_decimal(&rat(1, 2), 0), "1");
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers();
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[3].is_zero() && b[5].is_zero());
    }

    #[test]
    fn zeta_two_matches_reference() {
        let z = zeta(2, 30).unwrap();
        let reference = parse_rat("1.644934066848226436472415166646");
        assert!(z.abs_err() < &ulp(28));
        assert!((z.value() - &reference).abs() < ulp(25));
    }

    #[test]
    fn zeta_odd_matches_reference() {
        let z3 = zeta(3, 25).unwrap();
        let reference = parse_rat("1.2020569031595942853997381");
        assert!((z3.value() - &reference).abs() < ulp(20));
    }

    /// Independent route: direct summation with the integral-tail sandwich
    /// Σ_{m<=M} m^(−n) + [(M+1)^(1−n), M^(1−n)]/(n−1).
    fn zeta_direct(n: u32, m_points: u64) -> ErrorBoundedReal {
        let mut partial = BigRational::zero();
        for m in 1..=m_points {
            partial += BigRational::new(BigInt::one(), BigInt::from(m).pow(n));
        }
        let lo = &partial
            + BigRational::new(
                BigInt::one(),
                BigInt::from(m_points + 1).pow(n - 1) * BigInt::from(n - 1),
            );
        let hi = &partial
            + BigRational::new(
                BigInt::one(),
                BigInt::from(m_points).pow(n - 1) * BigInt::from(n - 1),
            );
        ErrorBoundedReal::from_interval(lo, hi)
    }

    /// Second independent route: the Euler product over primes with a
    /// rigorous tail factor.
    fn zeta_euler_product(n: u32, prime_limit: u64) -> ErrorBoundedReal {
        let mut finite = ErrorBoundedReal::exact(BigRational::one());
        for p in 2..=prime_limit {
            if crate::perm::is_prime(p) {
                let factor =
                    BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p).pow(n));
                finite = finite.mul(&ErrorBoundedReal::exact(factor).recip().unwrap());
            }
        }
        // log of the tail is at most 2·Σ_{m>P} m^(−n) <= 2·P^(1−n)/(n−1)
        let log_tail = BigRational::new(
            BigInt::from(4),
            BigInt::from(prime_limit).pow(n - 1) * BigInt::from(n - 1),
        );
        let tail =
            ErrorBoundedReal::from_interval(BigRational::one(), BigRational::one() + log_tail);
        finite.mul(&tail)
    }

    #[test]
    fn three_zeta_routes_agree() {
        for n in 2..=20 {
            let em = zeta(n, 15).unwrap();
            let direct = zeta_direct(n, 400);
            let euler = zeta_euler_product(n, 97);
            assert!(em.intersects(&direct), "direct route disagrees at n={n}");
            assert!(em.intersects(&euler), "euler route disagrees at n={n}");
        }
    }

    #[test]
    fn zeta_tail_inequality() {
        // ζ(n) − 1 <= 2^(1−n) for n >= 3, used by every product truncation
        for n in 3..=64 {
            let z = zeta(n, 12).unwrap();
            let bound =
                BigRational::one() + BigRational::new(BigInt::from(2), BigInt::from(2).pow(n));
            assert!(z.upper() <= bound, "tail bound fails at n={n}");
            assert!(z.lower() > BigRational::one());
        }
    }

    #[test]
    fn zeta_decreasing() {
        let mut prev = zeta(2, 12).unwrap().lower();
        for n in 3..=24 {
            let cur = zeta(n, 12).unwrap();
            assert!(cur.upper() < prev);
            prev = cur.lower();
        }
    }

    #[test]
    fn table_constants() {
        let table = ZetaTable::build(64, 12).unwrap();
        // c = Π ζ(n)^(−1) ~ 0.4357570767; b = Π (1−2^(−n))^(−1) ~ 3.4627466195
        let c_ref = parse_rat("0.4357570768");
        let b_ref = parse_rat("3.4627466195");
        assert!((table.c().value() - &c_ref).abs() < ulp(8));
        assert!((table.b().value() - &b_ref).abs() < ulp(8));
        // c < 1/ζ(2)
        assert!(table.c().upper() < zeta(2, 12).unwrap().recip().unwrap().upper());
        // prefix products multiply out
        let p5 = table.prefix_product(5).unwrap().clone();
        let direct = table
            .zeta(2)
            .mul(&table.zeta(3))
            .mul(&table.zeta(4))
            .mul(&table.zeta(5));
        assert!(p5.intersects(&direct));
    }
}
