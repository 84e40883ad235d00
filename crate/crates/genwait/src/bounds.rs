//! Census-based bounds on e(G) and the theorem-level inequality suite.
//!
//! The census of maximal subgroups yields exact geometric tail sums (μ*, μ_p)
//! where the type-B rows with index at least 5 feed μ* and the type-A
//! prime-power rows feed μ_p; the closed-form bounds on those sums and the
//! top-level inequalities are then checked with exact rational arithmetic
//! against pinned decimal constants, always comparing on the conservative
//! side.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chief::{alpha_beta_stats, stime_clauses, AlphaBetaStats};
use crate::error::{Error, Result};
use crate::lattice::{maximal_census, MaximalSubgroupCensus, SubgroupLattice};
use crate::perm::{factor_primes, FiniteGroup};
use crate::series::e_h_exact;
use crate::waiting::{expected_wait_exact, rat};

/// Upper estimate for the unrestricted constant, rounded up at the 7th digit.
pub fn kappa_bound() -> BigRational {
    rat(27_523_950, 10_000_000)
}

/// Upper estimate for the odd-order constant, rounded up at the 7th digit.
pub fn kappa_tilde_bound() -> BigRational {
    rat(21_486_690, 10_000_000)
}

/// Upper estimate for the permutation-degree constant, rounded up. Distinct
/// from the unsoluble estimate below, which is a different quantity.
pub fn kappa_perm_bound() -> BigRational {
    rat(16_066_960, 10_000_000)
}

/// Upper estimate for unsoluble groups.
pub fn kappa_unsoluble_bound() -> BigRational {
    rat(27_501, 10_000)
}

/// Exact μ*(G,t) and μ_p(G,t) from the census: geometric column sums
/// Σ_{k≥t} m/n^k = m·n^(1−t)/(n−1).
#[derive(Clone, Debug)]
pub struct MuValues {
    pub t: u32,
    pub mu_star: BigRational,
    pub mu_p: BTreeMap<u64, BigRational>,
}

pub fn mu_exact(group: &FiniteGroup, census: &MaximalSubgroupCensus, t: u32) -> Result<MuValues> {
    if t < 1 {
        return Err(Error::BadArgument("t must be >= 1".into()));
    }
    let mut mu_star = BigRational::zero();
    let mut mu_p: BTreeMap<u64, BigRational> = BTreeMap::new();
    for p in group.primes() {
        mu_p.insert(p, BigRational::zero());
    }
    let geometric = |n: usize, m: usize| -> BigRational {
        // Σ_{k>=t} m/n^k
        BigRational::new(
            BigInt::from(m) * BigInt::from(n),
            BigInt::from(n).pow(t) * (BigInt::from(n) - BigInt::one()),
        )
    };
    for (&n, &m) in &census.m_n_b {
        if n < 5 {
            return Err(Error::BadArgument(format!(
                "type B maximal subgroup of index {n} < 5"
            )));
        }
        mu_star += geometric(n, m);
    }
    for (&n, &m) in &census.m_n_a {
        let primes = factor_primes(n as u64);
        debug_assert_eq!(primes.len(), 1, "type A index is a prime power");
        *mu_p.get_mut(&primes[0]).unwrap() += geometric(n, m);
    }
    Ok(MuValues { t, mu_star, mu_p })
}

/// The census bound e(G) ≤ t + μ*(G,t) + Σ_p μ_p(G,t).
pub fn e_upper_bound(
    group: &FiniteGroup,
    census: &MaximalSubgroupCensus,
    t: u32,
) -> Result<BigRational> {
    let mu = mu_exact(group, census, t)?;
    Ok(BigRational::from(BigInt::from(t)) + &mu.mu_star + mu.mu_p.values().sum::<BigRational>())
}

/// One closed-form bound versus the exact value it must dominate.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub applicable: bool,
    /// exact <= bound, when applicable.
    pub holds: Option<bool>,
    pub exact: String,
    pub bound: Option<String>,
}

/// Closed-form bounds on μ* and μ_p, each asserted against the exact value.
pub fn lemma_bounds(
    group: &FiniteGroup,
    census: &MaximalSubgroupCensus,
    stats: &AlphaBetaStats,
    t: u32,
) -> Result<Vec<LemmaCheck>> {
    let mu = mu_exact(group, census, t)?;
    let mut out = Vec::new();

    // soluble groups have no type-B maximal subgroups at all
    let beta = stats.beta;
    if beta == 0 {
        out.push(LemmaCheck {
            name: "mu_star = 0 when beta = 0".into(),
            applicable: true,
            holds: Some(mu.mu_star.is_zero()),
            exact: mu.mu_star.to_string(),
            bound: Some("0".into()),
        });
    }
    // μ*(G,t) <= β(β+1)/(2·5^(t−4))·(1/4) for t >= β+3
    if t >= beta + 3 {
        let numerator = BigInt::from(beta) * BigInt::from(beta + 1);
        // 5^(t-4) with t-4 possibly negative
        let bound = if t >= 4 {
            BigRational::new(
                numerator,
                BigInt::from(2) * BigInt::from(5).pow(t - 4) * BigInt::from(4),
            )
        } else {
            BigRational::new(numerator * BigInt::from(5).pow(4 - t), BigInt::from(8))
        };
        out.push(LemmaCheck {
            name: "mu_star closed form".into(),
            applicable: true,
            holds: Some(mu.mu_star <= bound),
            exact: mu.mu_star.to_string(),
            bound: Some(bound.to_string()),
        });
    }
    for (&p, exact) in &mu.mu_p {
        let alpha = stats.alpha(p);
        if alpha == 0 {
            out.push(LemmaCheck {
                name: format!("mu_{p} = 0 when alpha_{p} = 0"),
                applicable: true,
                holds: Some(exact.is_zero()),
                exact: exact.to_string(),
                bound: Some("0".into()),
            });
            continue;
        }
        if p == 2 {
            // needs alpha_2 <= t-1 and alpha_{2,u} <= t-2 for u > 1
            let deep_ok = stats
                .alpha_pt
                .iter()
                .filter(|&(&(q, u), _)| q == 2 && u > 1)
                .all(|(_, &count)| count <= t.saturating_sub(2));
            let applicable = alpha <= t.saturating_sub(1) && deep_ok;
            let bound = applicable
                .then(|| BigRational::new(BigInt::one(), BigInt::from(2).pow(t - alpha - 1)));
            out.push(LemmaCheck {
                name: "mu_2 <= 2^(alpha_2+1-t)".into(),
                applicable,
                holds: bound.as_ref().map(|b| exact <= b),
                exact: exact.to_string(),
                bound: bound.map(|b| b.to_string()),
            });
        } else {
            let applicable = alpha <= t.saturating_sub(2);
            let bound = applicable.then(|| {
                BigRational::new(
                    BigInt::one(),
                    BigInt::from(p).pow(t - alpha - 2) * (BigInt::from(p) - BigInt::one()).pow(2),
                )
            });
            out.push(LemmaCheck {
                name: format!("mu_{p} <= p^(alpha+2-t)/(p-1)^2"),
                applicable,
                holds: bound.as_ref().map(|b| exact <= b),
                exact: exact.to_string(),
                bound: bound.map(|b| b.to_string()),
            });
        }
    }
    Ok(out)
}

/// One theorem-level check on a group.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub applicable: bool,
    pub pass: Option<bool>,
    pub detail: String,
}

/// Everything the suite knows about one group.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub group: String,
    pub order: usize,
    pub degree: usize,
    pub soluble: bool,
    pub odd_order: bool,
    pub d: u32,
    pub t: u32,
    pub e_exact: String,
    pub census_bound: String,
    pub checks: Vec<TheoremCheck>,
    pub lemma_checks: Vec<LemmaCheck>,
    pub all_pass: bool,
}

/// Runs every applicable inequality on one group with exact rational
/// comparisons; decimal constants enter as their pinned rounded-up values.
pub fn theorem_check(group: &FiniteGroup, label: &str) -> Result<BoundReport> {
    let lattice = SubgroupLattice::build(group)?;
    let census = maximal_census(group, &lattice)?;
    let stats = alpha_beta_stats(group)?;
    let e = expected_wait_exact(group, &lattice)?;
    let d = stats.max_d();
    let t = d + 2;
    let soluble = stats.beta == 0;
    let odd = group.order() % 2 == 1;
    let degree = group.degree();
    let m_half = (degree / 2) as i64;

    let mut checks = Vec::new();
    let mut push = |name: &str, applicable: bool, pass: Option<bool>, detail: String| {
        checks.push(TheoremCheck {
            name: name.into(),
            applicable,
            pass,
            detail,
        });
    };

    let d_rat = BigRational::from(BigInt::from(d));
    let bound = &d_rat + kappa_bound();
    push(
        "e <= d + kappa",
        true,
        Some(e <= bound),
        format!("{e} <= {bound}"),
    );
    if odd {
        let bound = &d_rat + kappa_tilde_bound();
        push(
            "odd order: e <= d + kappa_tilde",
            true,
            Some(e <= bound),
            format!("{e} <= {bound}"),
        );
    }
    if !soluble {
        let bound = &d_rat + kappa_unsoluble_bound();
        push(
            "unsoluble: e <= d + kappa_unsoluble",
            true,
            Some(e <= bound),
            format!("{e} <= {bound}"),
        );
    }
    if soluble {
        let mut pi = group.primes();
        if !pi.contains(&2) {
            pi.push(2);
        }
        let e_h = e_h_exact(&pi, d)?;
        push(
            "soluble: e <= e(H_pi_d)",
            true,
            Some(e <= e_h),
            format!("{e} <= {e_h}"),
        );
    }
    // the degree bound applies to every permutation group except the
    // symmetric group on three points itself
    let is_sym3_natural = degree == 3 && group.order() == 6;
    if !is_sym3_natural {
        let bound = BigRational::from(BigInt::from(m_half)) + kappa_perm_bound();
        push(
            "degree: e <= floor(n/2) + kappa_perm",
            true,
            Some(e <= bound),
            format!("{e} <= {bound}"),
        );
    }
    // p-subgroups of degree-n groups are floor(n/p)-generated
    let kopr_ok = group
        .primes()
        .iter()
        .all(|&p| stats.d(p) as u64 <= degree as u64 / p);
    push(
        "d_p <= floor(n/p)",
        true,
        Some(kopr_ok),
        format!(
            "d_p = {:?} at degree {degree}",
            stats.d_p.values().collect::<Vec<_>>()
        ),
    );
    if degree >= 8 {
        let ok = i64::from(stats.beta) <= m_half - 3;
        push(
            "degree >= 8: beta <= floor(n/2) - 3",
            true,
            Some(ok),
            format!("beta = {}", stats.beta),
        );
    }
    for (clause, ok) in stime_clauses(&stats) {
        push(clause, true, Some(ok), String::new());
    }
    // census bound dominates e for a window of t values
    let mut census_bound = BigRational::zero();
    for tt in d + 1..=d + 4 {
        let b = e_upper_bound(group, &census, tt)?;
        push(
            "e <= t + mu_star + sum mu_p",
            true,
            Some(e <= b),
            format!("t = {tt}: {e} <= {b}"),
        );
        if tt == t {
            census_bound = b;
        }
    }
    let lemma_checks = lemma_bounds(group, &census, &stats, t)?;
    let all_pass = checks.iter().all(|c| !c.applicable || c.pass == Some(true))
        && lemma_checks
            .iter()
            .all(|c| !c.applicable || c.holds == Some(true));
    Ok(BoundReport {
        group: label.into(),
        order: group.order(),
        degree,
        soluble,
        odd_order: odd,
        d,
        t,
        e_exact: e.to_string(),
        census_bound: census_bound.to_string(),
        checks,
        lemma_checks,
        all_pass,
    })
}

/// One conjugacy class found by the degree scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub degree: u32,
    pub order: usize,
    /// Points moved by the subgroup; `support == degree` means no global
    /// fixed point.
    pub support: usize,
    pub class_size: usize,
    pub e_num: String,
    pub e_den: String,
    pub generators: String,
}

impl ScanEntry {
    pub fn e(&self) -> BigRational {
        BigRational::new(
            self.e_num.parse().expect("numerator"),
            self.e_den.parse().expect("denominator"),
        )
    }
}

pub const SCAN_DEGREE_CAP: u32 = 6;

/// Exhaustive scan of the subgroups of Sym(n) up to conjugacy: returns every
/// class whose expected waiting time exceeds ⌊n/2⌋ + 1.
pub fn degree_scan(n: u32) -> Result<Vec<ScanEntry>> {
    if n < 2 || n > SCAN_DEGREE_CAP {
        return Err(Error::BadArgument(format!(
            "degree scan supports 2..={SCAN_DEGREE_CAP}"
        )));
    }
    let sym = crate::perm::symmetric_group(n as usize, 10_000)?;
    let lattice = SubgroupLattice::build(&sym)?;
    let classes = lattice.conjugacy_classes(&sym);
    let threshold = BigRational::from(BigInt::from(n / 2)) + BigRational::one();
    let mut out = Vec::new();
    for class in &classes {
        let rep = class[0];
        if lattice.subgroups[rep].order() == 1 {
            continue;
        }
        let e = expected_wait_of_member(&lattice, rep)?;
        if e <= threshold {
            continue;
        }
        let members = &lattice.subgroups[rep].members;
        let mut moved = vec![false; sym.degree()];
        for &i in members.iter() {
            for x in sym.elem(i).support() {
                moved[x as usize] = true;
            }
        }
        let rep_group = sym.subgroup_as_group(members)?;
        let gens: Vec<String> = rep_group
            .generators()
            .iter()
            .map(|g| g.cycle_string())
            .collect();
        out.push(ScanEntry {
            degree: n,
            order: members.len(),
            support: moved.iter().filter(|&&m| m).count(),
            class_size: class.len(),
            e_num: e.numer().to_string(),
            e_den: e.denom().to_string(),
            generators: gens.join(", "),
        });
    }
    out.sort_by(|a, b| (a.order, a.e_num.clone()).cmp(&(b.order, b.e_num.clone())));
    Ok(out)
}

/// e(H) for a member of an ambient lattice, from the Möbius values of the
/// interval below it.
fn expected_wait_of_member(lattice: &SubgroupLattice, top: usize) -> Result<BigRational> {
    let order = lattice.subgroups[top].order();
    let mu = lattice.mobius_within(top);
    let mut acc = BigRational::zero();
    for (idx, m) in mu {
        let h = lattice.subgroups[idx].order();
        if h == order || m == 0 {
            continue;
        }
        acc += BigRational::new(
            BigInt::from(m) * BigInt::from(order),
            BigInt::from(order) - BigInt::from(h),
        );
    }
    Ok(-acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group;
    use crate::perm::DEFAULT_ORDER_CAP;

    fn census_of(spec: &str) -> (FiniteGroup, MaximalSubgroupCensus, AlphaBetaStats) {
        let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        let c = maximal_census(&g, &l).unwrap();
        let s = alpha_beta_stats(&g).unwrap();
        (g, c, s)
    }

    #[test]
    fn mu_values_s3() {
        let (g, c, _) = census_of("S(3)");
        let mu = mu_exact(&g, &c, 2).unwrap();
        assert_eq!(mu.mu_p[&2], rat(1, 2));
        assert_eq!(mu.mu_p[&3], rat(1, 2));
        assert!(mu.mu_star.is_zero());
        let bound = e_upper_bound(&g, &c, 2).unwrap();
        assert_eq!(bound, rat(3, 1));
    }

    #[test]
    fn mu_values_c2() {
        let (g, c, _) = census_of("C(2)");
        let mu = mu_exact(&g, &c, 3).unwrap();
        assert_eq!(mu.mu_p[&2], rat(1, 4));
        let bound = e_upper_bound(&g, &c, 1).unwrap();
        assert_eq!(bound, rat(2, 1));
    }

    #[test]
    fn klein_census_bound() {
        // three index-2 maximal subgroups: bound 2 + Σ_{k>=2} 3/2^k = 7/2
        let (g, c, _) = census_of("C(2) x C(2)");
        let bound = e_upper_bound(&g, &c, 2).unwrap();
        assert_eq!(bound, rat(7, 2));
        let l = SubgroupLattice::build(&g).unwrap();
        assert!(expected_wait_exact(&g, &l).unwrap() <= bound);
    }

    #[test]
    fn mu_star_zero_for_soluble() {
        for spec in ["S(4)", "D(8)", "C(12)", "S(3) x S(3)"] {
            let (g, c, _) = census_of(spec);
            let mu = mu_exact(&g, &c, 2).unwrap();
            assert!(mu.mu_star.is_zero(), "{spec}");
        }
    }

    #[test]
    fn mu_star_s5_bound() {
        let (g, c, s) = census_of("S(5)");
        assert_eq!(s.beta, 1);
        let mu = mu_exact(&g, &c, 4).unwrap();
        // indexes 5, 6, 10 are the nonabelian-socle rows
        assert!(mu.mu_star > BigRational::zero());
        assert!(mu.mu_star <= rat(1, 4));
        let checks = lemma_bounds(&g, &c, &s, 4).unwrap();
        let closed = checks
            .iter()
            .find(|c| c.name == "mu_star closed form")
            .unwrap();
        assert_eq!(closed.holds, Some(true));
        assert_eq!(closed.bound.as_deref(), Some("1/4"));
    }

    #[test]
    fn lemma_bounds_s3_t3() {
        let (g, c, s) = census_of("S(3)");
        let checks = lemma_bounds(&g, &c, &s, 3).unwrap();
        let mu3 = checks.iter().find(|c| c.name.starts_with("mu_3")).unwrap();
        assert_eq!(mu3.holds, Some(true));
        assert_eq!(mu3.bound.as_deref(), Some("1/4"));
        assert_eq!(mu3.exact, "1/6");
    }

    #[test]
    fn theorem_suite_small_groups() {
        for spec in ["S(3)", "C(2) x C(2) x C(2)", "C(3) x C(3)", "S(5)", "Q8"] {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            let report = theorem_check(&g, spec).unwrap();
            assert!(report.all_pass, "suite fails for {spec}: {report:?}");
        }
    }

    #[test]
    fn odd_order_check_applies() {
        let g = parse_group("C(3) x C(3)", DEFAULT_ORDER_CAP).unwrap();
        let report = theorem_check(&g, "C(3) x C(3)").unwrap();
        assert!(report.odd_order);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.contains("kappa_tilde") && c.pass == Some(true)));
    }

    #[test]
    fn scan_degree_three() {
        let entries = degree_scan(3).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].order, 6);
        assert_eq!(entries[0].e(), rat(29, 10));
        assert_eq!(entries[0].support, 3);
    }

    #[test]
    fn scan_degree_four_exceptions() {
        let entries = degree_scan(4).unwrap();
        // the full-support classes: two Klein four-groups, the dihedral
        // Sylow subgroup, and the whole symmetric group
        let full: Vec<_> = entries.iter().filter(|e| e.support == 4).collect();
        let orders: Vec<usize> = full.iter().map(|e| e.order).collect();
        assert_eq!(orders, vec![4, 4, 8, 24]);
        assert!(full[0].e() == rat(10, 3) && full[1].e() == rat(10, 3));
        assert_eq!(full[2].e(), rat(10, 3));
        // the symmetric group itself exceeds the threshold
        assert_eq!(full[3].e(), rat(164317, 53130));
    }

    #[test]
    fn scan_rejects_out_of_range() {
        assert!(degree_scan(1).is_err());
        assert!(degree_scan(7).is_err());
    }
}
