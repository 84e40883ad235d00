//! Exact generation probabilities and exact expected waiting times.
//!
//! Two independent routes are provided: the Möbius sum over the subgroup
//! lattice, and geometric summation of the Dirichlet polynomial form of
//! P_G(k). All arithmetic on these paths is exact rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;
use crate::perm::FiniteGroup;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// A finite sum Σ cᵢ · bᵢ^(−k) with rational coefficients and integer bases,
/// normalized so bases are distinct, ascending, and zero coefficients are
/// dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletPolynomial {
    monomials: Vec<(BigRational, u128)>,
}

impl DirichletPolynomial {
    pub fn new(monomials: Vec<(BigRational, u128)>) -> Result<Self> {
        for &(_, base) in &monomials {
            if base == 0 {
                return Err(Error::BadArgument("Dirichlet base must be >= 1".into()));
            }
        }
        let mut p = DirichletPolynomial { monomials };
        p.normalize();
        Ok(p)
    }

    pub fn one() -> Self {
        DirichletPolynomial {
            monomials: vec![(BigRational::one(), 1)],
        }
    }

    /// The factor 1 − c·b^(−k).
    pub fn one_minus(c: BigRational, base: u128) -> Result<Self> {
        Self::new(vec![(BigRational::one(), 1), (-c, base)])
    }

    fn normalize(&mut self) {
        self.monomials.sort_by_key(|&(_, b)| b);
        let mut out: Vec<(BigRational, u128)> = Vec::with_capacity(self.monomials.len());
        for (c, b) in self.monomials.drain(..) {
            match out.last_mut() {
                Some((lc, lb)) if *lb == b => *lc += c,
                _ => out.push((c, b)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        self.monomials = out;
    }

    pub fn monomials(&self) -> &[(BigRational, u128)] {
        &self.monomials
    }

    pub fn mul(&self, other: &DirichletPolynomial) -> Result<DirichletPolynomial> {
        let mut monomials = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for (ca, ba) in &self.monomials {
            for (cb, bb) in &other.monomials {
                let base = ba
                    .checked_mul(*bb)
                    .ok_or_else(|| Error::BadArgument("Dirichlet base overflow".into()))?;
                monomials.push((ca * cb, base));
            }
        }
        DirichletPolynomial::new(monomials)
    }

    /// Value at a nonnegative integer argument.
    pub fn evaluate(&self, k: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (c, b) in &self.monomials {
            let den = BigInt::from(*b).pow(k);
            acc += c / BigRational::from(den);
        }
        acc
    }

    pub fn constant_term(&self) -> BigRational {
        self.monomials
            .iter()
            .find(|&&(_, b)| b == 1)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }
}

/// P_G(k): probability that k uniform elements generate G, via the Möbius
/// expansion Σ_H μ(H)(|H|/|G|)^k.
pub fn gen_probability(group: &FiniteGroup, lattice: &SubgroupLattice, k: u32) -> BigRational {
    let mut numerator = BigInt::zero();
    for (s, &mu) in lattice.subgroups.iter().zip(&lattice.mobius) {
        if mu == 0 {
            continue;
        }
        numerator += BigInt::from(mu) * BigInt::from(s.order()).pow(k);
    }
    BigRational::new(numerator, BigInt::from(group.order()).pow(k))
}

/// The same expansion packaged by subgroup index: monomials (Σ μ(H), |G|/|H|).
pub fn gen_probability_dirichlet(
    group: &FiniteGroup,
    lattice: &SubgroupLattice,
) -> DirichletPolynomial {
    let monomials: Vec<(BigRational, u128)> = lattice
        .subgroups
        .iter()
        .zip(&lattice.mobius)
        .map(|(s, &mu)| {
            (
                BigRational::from(BigInt::from(mu)),
                (group.order() / s.order()) as u128,
            )
        })
        .collect();
    DirichletPolynomial::new(monomials).expect("bases are positive")
}

/// Exact e(G) = −Σ_{H<G} μ(H)·|G|/(|G|−|H|).
pub fn expected_wait_exact(group: &FiniteGroup, lattice: &SubgroupLattice) -> Result<BigRational> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let order = BigInt::from(group.order());
    let mut acc = BigRational::zero();
    for (s, &mu) in lattice.subgroups.iter().zip(&lattice.mobius) {
        if s.order() == group.order() || mu == 0 {
            continue;
        }
        acc += BigRational::new(BigInt::from(mu) * &order, &order - BigInt::from(s.order()));
    }
    Ok(-acc)
}

/// Exact e(G) = Σ_{k≥0}(1 − P(k)) by geometric summation of a Dirichlet
/// polynomial with constant term 1: Σᵢ (−cᵢ)·bᵢ/(bᵢ−1) over non-constant
/// monomials.
pub fn expected_wait_from_dirichlet(p: &DirichletPolynomial) -> Result<BigRational> {
    if !p.constant_term().is_one() {
        return Err(Error::BadArgument(
            "expected constant term 1 in the generation Dirichlet polynomial".into(),
        ));
    }
    let mut acc = BigRational::zero();
    for (c, b) in p.monomials() {
        if *b == 1 {
            continue;
        }
        let b = BigInt::from(*b);
        acc += -c * BigRational::new(b.clone(), b - BigInt::one());
    }
    Ok(acc)
}

/// Partial sums of Σ_k (1 − P_G(k)) with a rigorous geometric tail bound:
/// past k*, 1 − P_G(k) ≤ m·2^(−k) with m the number of maximal subgroups.
/// Returns a bracket (lower, upper) containing the exact value.
pub fn expected_wait_series(
    group: &FiniteGroup,
    lattice: &SubgroupLattice,
    tolerance: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    if !tolerance.is_positive() {
        return Err(Error::BadArgument("tolerance must be positive".into()));
    }
    let p = gen_probability_dirichlet(group, lattice);
    let m = rat_int(lattice.maximal_indices().len() as i64);
    let mut partial = BigRational::zero();
    let mut k = 0u32;
    loop {
        // tail bound Σ_{j >= k} m·2^(−j) = m·2^(1−k)
        let tail = &m * BigRational::new(BigInt::from(2), BigInt::from(2).pow(k));
        if &tail < tolerance {
            return Ok((partial.clone(), partial + tail));
        }
        partial += BigRational::one() - p.evaluate(k);
        k += 1;
        if k > 100_000 {
            return Err(Error::PrecisionUnattainable);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group;
    use crate::oracle;
    use crate::perm::DEFAULT_ORDER_CAP;

    fn setup(spec: &str) -> (FiniteGroup, SubgroupLattice) {
        let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        (g, l)
    }

    #[test]
    fn s3_probabilities() {
        let (g, l) = setup("S(3)");
        assert_eq!(gen_probability(&g, &l, 2), rat(1, 2));
        assert_eq!(gen_probability(&g, &l, 0), rat_int(0));
        let p = gen_probability_dirichlet(&g, &l);
        assert_eq!(
            p.monomials(),
            &[
                (rat_int(1), 1),
                (rat_int(-1), 2),
                (rat_int(-3), 3),
                (rat_int(3), 6)
            ]
        );
    }

    #[test]
    fn c2_probability_formula() {
        let (g, l) = setup("C(2)");
        for k in 0..8 {
            let expected = rat_int(1) - BigRational::new(1.into(), BigInt::from(2).pow(k));
            assert_eq!(gen_probability(&g, &l, k), expected);
        }
    }

    #[test]
    fn trivial_group_dirichlet_is_one() {
        let (g, l) = setup("C(1)");
        let p = gen_probability_dirichlet(&g, &l);
        assert_eq!(p.monomials(), &[(rat_int(1), 1)]);
        assert!(expected_wait_exact(&g, &l).is_err());
    }

    #[test]
    fn expected_wait_small_groups() {
        let (g, l) = setup("S(3)");
        assert_eq!(expected_wait_exact(&g, &l).unwrap(), rat(29, 10));
        let (g, l) = setup("C(2)");
        assert_eq!(expected_wait_exact(&g, &l).unwrap(), rat_int(2));
        let (g, l) = setup("C(2) x C(2)");
        assert_eq!(expected_wait_exact(&g, &l).unwrap(), rat(10, 3));
    }

    #[test]
    fn dirichlet_route_matches_mobius_route() {
        for spec in ["S(3)", "S(4)", "D(8)", "Q8", "A(4)", "C(6)", "C(2) x S(3)"] {
            let (g, l) = setup(spec);
            let p = gen_probability_dirichlet(&g, &l);
            let via_dirichlet = expected_wait_from_dirichlet(&p).unwrap();
            let via_mobius = expected_wait_exact(&g, &l).unwrap();
            assert_eq!(via_dirichlet, via_mobius, "route mismatch for {spec}");
            for k in 0..5 {
                assert_eq!(p.evaluate(k), gen_probability(&g, &l, k));
            }
        }
    }

    #[test]
    fn dirichlet_sum_rejects_bad_input() {
        let p = DirichletPolynomial::new(vec![(rat_int(2), 1), (rat_int(-1), 2)]).unwrap();
        assert!(expected_wait_from_dirichlet(&p).is_err());
        let p = DirichletPolynomial::new(vec![(rat_int(-1), 2)]).unwrap();
        assert!(expected_wait_from_dirichlet(&p).is_err());
    }

    #[test]
    fn series_brackets_exact_value() {
        for (spec, tol_den) in [
            ("S(3)", 1_000_000i64),
            ("C(2)", 1000),
            ("D(8) x S(3)", 100_000_000),
        ] {
            let (g, l) = setup(spec);
            let tol = rat(1, tol_den);
            let (lo, hi) = expected_wait_series(&g, &l, &tol).unwrap();
            let exact = expected_wait_exact(&g, &l).unwrap();
            assert!(lo <= exact && exact <= hi, "bracket misses for {spec}");
            assert!(&hi - &lo < tol);
        }
        let (g, l) = setup("S(3)");
        assert!(expected_wait_series(&g, &l, &rat_int(0)).is_err());
    }

    #[test]
    fn d8_s3_exact_value() {
        let (g, l) = setup("D(8) x S(3)");
        assert_eq!(expected_wait_exact(&g, &l).unwrap(), rat(241789, 53130));
    }

    #[test]
    fn probability_monotone_in_k_and_bounded() {
        for spec in ["S(4)", "Q8", "A(5)"] {
            let (g, l) = setup(spec);
            let mut prev = gen_probability(&g, &l, 0);
            assert!(prev.is_zero());
            for k in 1..8 {
                let cur = gen_probability(&g, &l, k);
                assert!(cur >= prev && cur <= rat_int(1), "monotonicity in {spec}");
                prev = cur;
            }
        }
    }

    #[test]
    fn quotient_monotonicity() {
        // P_G(k) <= P_{G/N}(k), hence e(G) >= e(G/N)
        let (g, l) = setup("S(4)");
        let v4 = g
            .minimal_normal_subgroup_sets()
            .unwrap()
            .into_iter()
            .next()
            .unwrap();
        let (q, _) = g.quotient_with_map(&v4).unwrap();
        let lq = SubgroupLattice::build(&q).unwrap();
        for k in 0..6 {
            assert!(gen_probability(&g, &l, k) <= gen_probability(&q, &lq, k));
        }
        assert!(expected_wait_exact(&g, &l).unwrap() >= expected_wait_exact(&q, &lq).unwrap());
    }

    #[test]
    fn probability_matches_exhaustive_counting() {
        for spec in ["S(3)", "C(2) x C(2)", "D(8)", "A(4)"] {
            let (g, l) = setup(spec);
            for k in 0..=3 {
                let expected = oracle::generation_probability(&g, k);
                assert_eq!(gen_probability(&g, &l, k), expected, "{spec} at k={k}");
            }
        }
    }

    #[test]
    fn probability_zero_below_min_generators() {
        let (g, l) = setup("C(2) x C(2) x C(2)");
        assert!(gen_probability(&g, &l, 2).is_zero());
        assert!(gen_probability(&g, &l, 3).is_positive());
    }
}
