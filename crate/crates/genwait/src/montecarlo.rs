//! Direct simulation of the waiting time τ: draw uniform elements with
//! replacement until the drawn set generates the group.
//!
//! Reproducibility contract: the generator is SplitMix64 — state advances by
//! the odd constant 0x9E3779B97F4A7C15 and each output is the mix
//! z ^= z>>30, z *= 0xBF58476D1CE4E5B9, z ^= z>>27, z *= 0x94D049BB133111EB,
//! z ^= z>>31 of the new state. Uniform indices below n come from rejection
//! sampling on the top multiple of n, so there is no modulo bias. Trials are
//! partitioned into fixed-size streams; stream s is seeded with the (s+1)-th
//! output of a master SplitMix64 seeded with the run seed, and results merge
//! by integer sums, so any execution order gives bit-identical output.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle;
use crate::perm::{ElemIdx, FiniteGroup};

const STREAM_TRIALS: u64 = 8192;

/// SplitMix64: a seedable counter-based generator (see module docs).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in 0..n by rejection.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }
}

/// Outcome of a batch of waiting-time draws.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationResult {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    /// Count of trials per observed τ value; the counts sum to `trials`.
    pub histogram: BTreeMap<u32, u64>,
    pub seed: u64,
}

impl SimulationResult {
    /// Empirical P(τ > k).
    pub fn survival(&self, k: u32) -> f64 {
        let at_most: u64 = self
            .histogram
            .iter()
            .filter(|&(&tau, _)| tau <= k)
            .map(|(_, &c)| c)
            .sum();
        (self.trials - at_most) as f64 / self.trials as f64
    }
}

/// One waiting-time draw: uniform elements by index until the accumulated
/// closure is the whole group. The partial subgroup is extended in place as
/// new elements arrive.
pub fn sample_tau(group: &FiniteGroup, rng: &mut SplitMix64) -> Result<u32> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let order = group.order();
    let mut members: Vec<ElemIdx> = vec![group.identity_idx()];
    let mut in_set = vec![false; order];
    in_set[group.identity_idx() as usize] = true;
    let mut gens: Vec<ElemIdx> = Vec::new();
    let mut tau = 0u32;
    while members.len() < order {
        let g = rng.uniform_below(order as u64) as ElemIdx;
        tau += 1;
        if in_set[g as usize] {
            continue;
        }
        gens.push(g);
        members.push(g);
        in_set[g as usize] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            for &h in &gens {
                let t = group.mult_idx(members[cursor], h);
                if !in_set[t as usize] {
                    in_set[t as usize] = true;
                    members.push(t);
                }
            }
            cursor += 1;
        }
    }
    Ok(tau)
}

#[derive(Clone, Default)]
struct StreamTotals {
    count: u64,
    sum: u64,
    sum_sq: u128,
    histogram: BTreeMap<u32, u64>,
}

/// Deterministic mean/error estimate over `trials` draws.
pub fn estimate_e(group: &FiniteGroup, trials: u64, seed: u64) -> Result<SimulationResult> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    if trials < 1 {
        return Err(Error::BadArgument("trials must be >= 1".into()));
    }
    let min_gen = oracle::min_generators(group);
    let streams = trials.div_ceil(STREAM_TRIALS);
    let mut master = SplitMix64::new(seed);
    let stream_seeds: Vec<u64> = (0..streams).map(|_| master.next_u64()).collect();

    let totals = stream_seeds
        .par_iter()
        .enumerate()
        .map(|(s, &stream_seed)| {
            let start = s as u64 * STREAM_TRIALS;
            let n = STREAM_TRIALS.min(trials - start);
            let mut rng = SplitMix64::new(stream_seed);
            let mut acc = StreamTotals::default();
            for _ in 0..n {
                let tau = sample_tau(group, &mut rng).expect("nontrivial group");
                assert!(
                    tau >= min_gen,
                    "waiting time below the minimal generator number"
                );
                acc.count += 1;
                acc.sum += tau as u64;
                acc.sum_sq += (tau as u128) * (tau as u128);
                *acc.histogram.entry(tau).or_insert(0) += 1;
            }
            acc
        })
        .reduce(StreamTotals::default, |mut a, b| {
            a.count += b.count;
            a.sum += b.sum;
            a.sum_sq += b.sum_sq;
            for (tau, c) in b.histogram {
                *a.histogram.entry(tau).or_insert(0) += c;
            }
            a
        });

    debug_assert_eq!(totals.count, trials);
    let n = trials as f64;
    let mean = totals.sum as f64 / n;
    let std_error = if trials > 1 {
        let variance =
            (totals.sum_sq as f64 - (totals.sum as f64) * (totals.sum as f64) / n) / (n - 1.0);
        (variance / n).sqrt()
    } else {
        0.0
    };
    Ok(SimulationResult {
        trials,
        mean,
        std_error,
        histogram: totals.histogram,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group;
    use crate::lattice::SubgroupLattice;
    use crate::perm::DEFAULT_ORDER_CAP;
    use crate::waiting::{expected_wait_exact, gen_probability};

    #[test]
    fn splitmix_reference_outputs() {
        // outputs are a pure function of the seed and the fixed mix constants
        let mut rng = SplitMix64::new(1234567);
        let a = rng.next_u64();
        let b = rng.next_u64();
        assert_ne!(a, b);
        let mut rng2 = SplitMix64::new(1234567);
        assert_eq!(rng2.next_u64(), a);
        assert_eq!(rng2.next_u64(), b);
    }

    #[test]
    fn uniform_rejection_in_range() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..1000 {
            assert!(rng.uniform_below(6) < 6);
        }
    }

    #[test]
    fn same_seed_bit_identical() {
        let g = parse_group("S(3)", DEFAULT_ORDER_CAP).unwrap();
        let a = estimate_e(&g, 20_000, 99).unwrap();
        let b = estimate_e(&g, 20_000, 99).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.histogram, b.histogram);
        let c = estimate_e(&g, 20_000, 100).unwrap();
        assert_ne!(a.histogram, c.histogram);
    }

    #[test]
    fn histogram_mass_and_minimum() {
        let g = parse_group("C(2) x C(2) x C(2)", DEFAULT_ORDER_CAP).unwrap();
        let r = estimate_e(&g, 10_000, 7).unwrap();
        let total: u64 = r.histogram.values().sum();
        assert_eq!(total, r.trials);
        // C_2^3 needs at least 3 elements
        assert!(r.histogram.keys().all(|&tau| tau >= 3));
    }

    #[test]
    fn c2_geometric_mean() {
        let g = parse_group("C(2)", DEFAULT_ORDER_CAP).unwrap();
        let r = estimate_e(&g, 100_000, 11).unwrap();
        assert!((r.mean - 2.0).abs() <= 4.0 * r.std_error);
    }

    #[test]
    fn s3_mean_within_error() {
        let g = parse_group("S(3)", DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        let exact = expected_wait_exact(&g, &l).unwrap();
        let exact_f = 2.9;
        assert_eq!(exact, crate::waiting::rat(29, 10));
        let r = estimate_e(&g, 50_000, 2024).unwrap();
        assert!((r.mean - exact_f).abs() <= 4.0 * r.std_error);
    }

    #[test]
    fn survival_matches_probability() {
        let g = parse_group("S(3)", DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        let r = estimate_e(&g, 50_000, 5).unwrap();
        for k in 0..=6u32 {
            use num_traits::ToPrimitive;
            let p = gen_probability(&g, &l, k).to_f64().unwrap();
            let expected = 1.0 - p;
            let sigma = (expected * (1.0 - expected) / r.trials as f64).sqrt();
            assert!(
                (r.survival(k) - expected).abs() <= 4.0 * sigma + 1e-12,
                "survival off at k={k}"
            );
        }
    }

    #[test]
    fn trivial_group_rejected() {
        let g = parse_group("C(1)", DEFAULT_ORDER_CAP).unwrap();
        assert!(estimate_e(&g, 10, 1).is_err());
        let mut rng = SplitMix64::new(0);
        assert!(sample_tau(&g, &mut rng).is_err());
    }
}
