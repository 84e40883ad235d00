//! Cross-module identities: the same quantity computed along independent
//! routes must agree exactly.

use num_bigint::BigInt;
use num_rational::BigRational;

use genwait::chief::{confronti_check, gaschutz_dirichlet};
use genwait::groupspec::parse_group;
use genwait::lattice::SubgroupLattice;
use genwait::perm::{h_pi_d, DEFAULT_ORDER_CAP};
use genwait::series::{c_poly, d_poly, e_h_exact};
use genwait::waiting::{
    expected_wait_exact, expected_wait_from_dirichlet, gen_probability_dirichlet,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn h_group_equals_its_generator_presentation() {
    // the named construction on 5 points and the bare generator set on 3
    // points are distinct permutation groups with identical statistics
    let named = parse_group("H([2,3],1)", DEFAULT_ORDER_CAP).unwrap();
    let gens = parse_group("gens[(0 1 2),(0 1)]@3", DEFAULT_ORDER_CAP).unwrap();
    let l_named = SubgroupLattice::build(&named).unwrap();
    let l_gens = SubgroupLattice::build(&gens).unwrap();
    assert_eq!(
        expected_wait_exact(&named, &l_named).unwrap(),
        expected_wait_exact(&gens, &l_gens).unwrap()
    );
    assert_eq!(
        gen_probability_dirichlet(&named, &l_named),
        gen_probability_dirichlet(&gens, &l_gens)
    );
}

#[test]
fn e_h_closed_form_matches_constructed_groups() {
    // the series route never touches a permutation group; the lattice route
    // never touches a zeta product
    for (pi, d) in [
        (vec![2u64], 1u32),
        (vec![2, 3], 1),
        (vec![2, 3], 2),
        (vec![2, 5], 1),
        (vec![2, 3, 5], 1),
    ] {
        let series_route = e_h_exact(&pi, d).unwrap();
        let g = h_pi_d(&pi, d as usize, DEFAULT_ORDER_CAP).unwrap();
        let lattice = SubgroupLattice::build(&g).unwrap();
        let lattice_route = expected_wait_exact(&g, &lattice).unwrap();
        assert_eq!(series_route, lattice_route, "mismatch at pi={pi:?} d={d}");
    }
}

#[test]
fn e_h_monotone_in_d() {
    for pi in [vec![2u64], vec![2, 3], vec![2, 3, 5], vec![2, 3, 5, 7]] {
        let mut prev = BigRational::from(BigInt::from(0));
        for d in 1..=6u32 {
            let shifted = e_h_exact(&pi, d).unwrap() - BigRational::from(BigInt::from(d as i64));
            assert!(
                shifted >= prev,
                "e(H) - d not nondecreasing at pi={pi:?}, d={d}"
            );
            prev = shifted;
        }
    }
}

#[test]
fn e_h_monotone_in_primes() {
    let chains: [&[u64]; 5] = [&[2], &[2, 3], &[2, 3, 5], &[2, 3, 5, 7], &[2, 3, 5, 7, 11]];
    for d in 1..=3u32 {
        let mut prev = BigRational::from(BigInt::from(0));
        for pi in chains {
            let e = e_h_exact(pi, d).unwrap();
            assert!(e >= prev, "e(H) not nondecreasing in pi at d={d}");
            prev = e;
        }
    }
}

#[test]
fn h_group_probability_is_the_c_d_product() {
    // P(k) of the constructed supersoluble extremal group equals
    // C_{2,d}(k)·Π D_{p,d}(k) exactly
    let g = h_pi_d(&[2, 3], 2, DEFAULT_ORDER_CAP).unwrap();
    let poly = gaschutz_dirichlet(&g).unwrap();
    for k in 1..=8u32 {
        let expected = c_poly(2, 2, k) * d_poly(3, 2, k);
        assert_eq!(poly.evaluate(k), expected, "k={k}");
    }
}

#[test]
fn series_bracket_agrees_with_dirichlet_sum() {
    let g = parse_group("D(8) x S(3)", DEFAULT_ORDER_CAP).unwrap();
    let lattice = SubgroupLattice::build(&g).unwrap();
    let exact = expected_wait_exact(&g, &lattice).unwrap();
    assert_eq!(exact, rat(241_789, 53_130));
    let via_poly = expected_wait_from_dirichlet(&gen_probability_dirichlet(&g, &lattice)).unwrap();
    assert_eq!(via_poly, exact);
}

#[test]
fn simulation_tracks_exact_values_across_corpus() {
    use genwait::corpus::BUILTIN_CORPUS;
    use genwait::montecarlo::estimate_e;
    use num_traits::ToPrimitive;
    use rayon::prelude::*;
    // deterministic seeds, so a pass here is a pass forever
    let off: Vec<String> = BUILTIN_CORPUS
        .par_iter()
        .enumerate()
        .filter_map(|(i, spec)| {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            let lattice = SubgroupLattice::build(&g).unwrap();
            let exact = expected_wait_exact(&g, &lattice).unwrap().to_f64().unwrap();
            let r = estimate_e(&g, 20_000, 0xC0FFEE + i as u64).unwrap();
            ((r.mean - exact).abs() > 6.0 * r.std_error)
                .then(|| format!("{spec}: mean {} vs exact {exact}", r.mean))
        })
        .collect();
    assert!(off.is_empty(), "simulation off the exact values: {off:?}");
}

#[test]
fn comparison_clauses_hold_across_soluble_corpus() {
    for spec in [
        "S(3)",
        "S(4)",
        "D(8)",
        "C(2) x S(3)",
        "A(4)",
        "S(3) x S(3)",
        "Q8",
    ] {
        let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
        for p in g.primes() {
            let stats = genwait::chief::alpha_beta_stats(&g).unwrap();
            let d = stats.d(p).max(1);
            for k in 1..=5u32 {
                for report in confronti_check(&g, p, d, k).unwrap() {
                    if report.applicable {
                        assert_eq!(
                            report.holds,
                            Some(true),
                            "{spec}: clause {} fails at p={p}, k={k}",
                            report.clause
                        );
                    }
                }
            }
        }
    }
}
