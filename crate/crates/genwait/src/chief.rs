//! Chief series, complemented-factor statistics, chief-factor module
//! invariants, the exact product formula for generation probabilities of
//! soluble groups, and the supersoluble witness construction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;
use crate::perm::{
    cyclic_group, d_p, factor_primes, is_prime, ElemIdx, FiniteGroup, Permutation, Point,
};
use crate::waiting::{expected_wait_from_dirichlet, DirichletPolynomial};

/// Candidate linear maps for module classification are enumerated
/// exhaustively; p^(t²) beyond this cap is rejected.
const MAP_ENUM_CAP: u128 = 1 << 20;

/// One factor of a chief series, as a pair of normal subgroups of G given by
/// element-index sets.
#[derive(Clone, Debug)]
pub struct ChiefFactor {
    pub lower: Vec<ElemIdx>,
    pub upper: Vec<ElemIdx>,
    pub order: usize,
    /// p for an abelian factor of order p^t, None for a nonabelian factor.
    pub prime: Option<u64>,
    /// t for an abelian factor, 0 otherwise.
    pub exponent: u32,
    pub complemented: bool,
}

impl ChiefFactor {
    pub fn is_abelian(&self) -> bool {
        self.prime.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct ChiefSeries {
    pub factors: Vec<ChiefFactor>,
}

impl ChiefSeries {
    pub fn beta(&self) -> u32 {
        self.factors.iter().filter(|f| !f.is_abelian()).count() as u32
    }

    pub fn is_soluble(&self) -> bool {
        self.beta() == 0
    }
}

/// Governs which minimal normal subgroup is lifted at each step; both give a
/// chief series, and the derived counts must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesChoice {
    SmallestFirst,
    LargestFirst,
}

pub fn chief_series(group: &FiniteGroup) -> Result<ChiefSeries> {
    chief_series_with_choice(group, SeriesChoice::SmallestFirst)
}

/// Builds a chief series bottom-up: repeatedly lift a minimal normal subgroup
/// of the current quotient. The complement search runs in the quotient's
/// subgroup lattice.
pub fn chief_series_with_choice(group: &FiniteGroup, choice: SeriesChoice) -> Result<ChiefSeries> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let mut factors = Vec::new();
    let mut lower: Vec<ElemIdx> = vec![group.identity_idx()];
    while lower.len() < group.order() {
        let (quotient, proj) = group.quotient_with_map(&lower)?;
        let mut minimals = quotient.minimal_normal_subgroup_sets()?;
        minimals.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        let m = match choice {
            SeriesChoice::SmallestFirst => minimals.first().unwrap().clone(),
            SeriesChoice::LargestFirst => minimals.last().unwrap().clone(),
        };
        let complemented = has_complement(&quotient, &m)?;
        let mut m_bits = vec![false; quotient.order()];
        for &x in &m {
            m_bits[x as usize] = true;
        }
        let upper: Vec<ElemIdx> = (0..group.order() as ElemIdx)
            .filter(|&g| m_bits[proj[g as usize] as usize])
            .collect();
        debug_assert_eq!(upper.len(), lower.len() * m.len());
        let order = upper.len() / lower.len();
        let (prime, exponent, abelian) = factor_shape(group, &lower, &upper, order);
        factors.push(ChiefFactor {
            lower: lower.clone(),
            upper: upper.clone(),
            order,
            prime: if abelian { Some(prime) } else { None },
            exponent: if abelian { exponent } else { 0 },
            complemented,
        });
        lower = upper;
    }
    Ok(ChiefSeries { factors })
}

/// True iff the minimal normal subgroup `m` of `quotient` has a complement:
/// a subgroup K with K ∩ M = 1 and KM = Q.
fn has_complement(quotient: &FiniteGroup, m: &[ElemIdx]) -> Result<bool> {
    let needed = quotient.order() / m.len();
    if needed == 1 {
        // M = Q splits with the trivial complement
        return Ok(true);
    }
    let lattice = SubgroupLattice::build(quotient)?;
    let mut in_m = vec![false; quotient.order()];
    for &x in m {
        in_m[x as usize] = true;
    }
    Ok(lattice.subgroups.iter().any(|k| {
        k.order() == needed
            && k.members
                .iter()
                .all(|&x| x == quotient.identity_idx() || !in_m[x as usize])
    }))
}

/// (p, t, abelian) for the section upper/lower.
fn factor_shape(
    group: &FiniteGroup,
    lower: &[ElemIdx],
    upper: &[ElemIdx],
    order: usize,
) -> (u64, u32, bool) {
    let primes = factor_primes(order as u64);
    if primes.len() != 1 {
        return (0, 0, false);
    }
    let p = primes[0];
    // abelian iff all pairs commute mod `lower`
    for &a in upper {
        for &b in upper {
            let ab = group.mult_idx(a, b);
            let ba = group.mult_idx(b, a);
            if lower
                .binary_search(&group.mult_idx(group.inv_idx(ba), ab))
                .is_err()
            {
                return (0, 0, false);
            }
        }
    }
    let mut t = 0;
    let mut rest = order as u64;
    while rest % p == 0 {
        rest /= p;
        t += 1;
    }
    (p, t, true)
}

pub fn is_complemented(series: &ChiefSeries, position: usize) -> Result<bool> {
    series
        .factors
        .get(position)
        .map(|f| f.complemented)
        .ok_or_else(|| Error::BadArgument(format!("series has no factor {position}")))
}

/// Aggregated chief-series counts together with the Sylow generator numbers.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaBetaStats {
    /// Complemented factors of order p^t, keyed by (p, t).
    pub alpha_pt: BTreeMap<(u64, u32), u32>,
    /// α_p = Σ_t α_{p,t}.
    pub alpha_p: BTreeMap<u64, u32>,
    /// Number of nonabelian chief factors.
    pub beta: u32,
    /// d_p per prime dividing |G|.
    pub d_p: BTreeMap<u64, u32>,
}

impl AlphaBetaStats {
    pub fn alpha(&self, p: u64) -> u32 {
        self.alpha_p.get(&p).copied().unwrap_or(0)
    }

    pub fn alpha_pt(&self, p: u64, t: u32) -> u32 {
        self.alpha_pt.get(&(p, t)).copied().unwrap_or(0)
    }

    pub fn d(&self, p: u64) -> u32 {
        self.d_p.get(&p).copied().unwrap_or(0)
    }

    pub fn max_d(&self) -> u32 {
        self.d_p.values().copied().max().unwrap_or(0)
    }
}

pub fn alpha_beta_stats(group: &FiniteGroup) -> Result<AlphaBetaStats> {
    let series = chief_series(group)?;
    alpha_beta_from_series(group, &series)
}

pub fn alpha_beta_from_series(group: &FiniteGroup, series: &ChiefSeries) -> Result<AlphaBetaStats> {
    let mut alpha_pt: BTreeMap<(u64, u32), u32> = BTreeMap::new();
    let mut alpha_p: BTreeMap<u64, u32> = BTreeMap::new();
    for f in &series.factors {
        if f.complemented {
            if let Some(p) = f.prime {
                *alpha_pt.entry((p, f.exponent)).or_insert(0) += 1;
                *alpha_p.entry(p).or_insert(0) += 1;
            }
        }
    }
    let mut d_map = BTreeMap::new();
    for p in group.primes() {
        d_map.insert(p, d_p(group, p)?);
    }
    Ok(AlphaBetaStats {
        alpha_pt,
        alpha_p,
        beta: series.beta(),
        d_p: d_map,
    })
}

/// The five inequalities binding the complemented-factor counts to the Sylow
/// generator numbers. Clauses whose hypotheses are vacuous for the group
/// (empty counting sequence) are skipped rather than guessed.
pub fn stime_clauses(stats: &AlphaBetaStats) -> Vec<(&'static str, bool)> {
    let mut out = Vec::new();
    for (&p, &dp) in &stats.d_p {
        let alpha = stats.alpha(p);
        out.push(("alpha_p <= d_p", alpha <= dp));
        if stats.alpha_pt(p, 1) == 0 && alpha > 0 {
            out.push(("alpha_p <= d_p - 1 when alpha_{p,1} = 0", alpha + 1 <= dp));
        }
    }
    let d2 = stats.d(2);
    let a2 = stats.alpha(2);
    out.push(("alpha_2 + beta <= d_2", a2 + stats.beta <= d2));
    if stats.beta > 0 {
        out.push(("beta <= d_2 - 1 when beta > 0", stats.beta + 1 <= d2));
    }
    if stats.alpha_pt(2, 1) == 0 && a2 + stats.beta > 0 {
        out.push((
            "alpha_2 + beta <= d_2 - 1 when alpha_{2,1} = 0",
            a2 + stats.beta + 1 <= d2,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// chief-factor modules
// ---------------------------------------------------------------------------

/// An abelian chief factor as an explicit additive module: elements are the
/// cosets of `lower` in `upper`, with the conjugation action of the group's
/// generators.
#[derive(Clone, Debug)]
struct FactorModule {
    p: u64,
    t: u32,
    size: usize,
    add: Vec<Vec<u8>>,
    /// Action of each group generator as a map on module ids.
    acts: Vec<Vec<u8>>,
    /// coords[id] = coefficient vector over a greedily chosen basis.
    coords: Vec<Vec<u8>>,
}

impl FactorModule {
    fn build(group: &FiniteGroup, factor: &ChiefFactor) -> Result<FactorModule> {
        let p = factor.prime.expect("abelian factor");
        let t = factor.exponent;
        let size = factor.order;
        if size > 64 {
            return Err(Error::ModuleTooLarge(size as u128));
        }
        // coset ids by canonical (minimal-element) representatives
        let mut coset_of: std::collections::HashMap<ElemIdx, u8> = std::collections::HashMap::new();
        let mut reps: Vec<ElemIdx> = Vec::new();
        for &u in &factor.upper {
            if coset_of.contains_key(&u) {
                continue;
            }
            let id = reps.len() as u8;
            reps.push(u);
            for &n in &factor.lower {
                coset_of.insert(group.mult_idx(n, u), id);
            }
        }
        debug_assert_eq!(reps.len(), size);
        let add: Vec<Vec<u8>> = reps
            .iter()
            .map(|&a| {
                reps.iter()
                    .map(|&b| coset_of[&group.mult_idx(a, b)])
                    .collect()
            })
            .collect();
        let acts: Vec<Vec<u8>> = group
            .generator_indices()
            .iter()
            .map(|&g| {
                reps.iter()
                    .map(|&a| coset_of[&group.conj_idx(a, g)])
                    .collect()
            })
            .collect();

        // the identity's coset is id 0 (the identity is element index 0)
        debug_assert_eq!(coset_of[&group.identity_idx()], 0);
        let mut basis: Vec<u8> = Vec::new();
        let mut span: Vec<bool> = vec![false; size];
        span[0] = true;
        for v in 1..size as u8 {
            if span[v as usize] {
                continue;
            }
            basis.push(v);
            let mut new_span = vec![false; size];
            for (s, &in_old) in span.iter().enumerate() {
                if !in_old {
                    continue;
                }
                let mut cur = s as u8;
                for _ in 0..p {
                    new_span[cur as usize] = true;
                    cur = add[cur as usize][v as usize];
                }
            }
            span = new_span;
        }
        debug_assert_eq!(basis.len(), t as usize);

        // enumerate coefficient tuples to get coordinates for every id
        let mut coords = vec![Vec::new(); size];
        let mut coeffs = vec![0u8; t as usize];
        loop {
            let mut id = 0u8;
            for (i, &c) in coeffs.iter().enumerate() {
                for _ in 0..c {
                    id = add[id as usize][basis[i] as usize];
                }
            }
            coords[id as usize] = coeffs.clone();
            let mut pos = 0;
            loop {
                if pos == t as usize {
                    return Ok(FactorModule {
                        p,
                        t,
                        size,
                        add,
                        acts,
                        coords,
                    });
                }
                coeffs[pos] += 1;
                if coeffs[pos] < p as u8 {
                    break;
                }
                coeffs[pos] = 0;
                pos += 1;
            }
        }
    }

    fn is_trivial_action(&self) -> bool {
        self.acts
            .iter()
            .all(|a| a.iter().enumerate().all(|(i, &y)| i == y as usize))
    }

    /// Id-map of the linear map sending basis vector i to `images[i]` of
    /// `other`.
    fn linear_map_into(&self, other: &FactorModule, images: &[u8]) -> Vec<u8> {
        let mut map = vec![0u8; self.size];
        for (id, c) in self.coords.iter().enumerate() {
            let mut out = 0u8;
            for (i, &ci) in c.iter().enumerate() {
                for _ in 0..ci {
                    out = other.add[out as usize][images[i] as usize];
                }
            }
            map[id] = out;
        }
        map
    }

    /// Number of equivariant additive self-maps (the order of the
    /// endomorphism ring), by exhausting all linear self-maps.
    fn endomorphism_count(&self) -> Result<u64> {
        let candidates = (self.size as u128).pow(self.t);
        if candidates > MAP_ENUM_CAP {
            return Err(Error::ModuleTooLarge(candidates));
        }
        let mut count = 0u64;
        self.for_each_map(self, |module, other, map| {
            if equivariant(module, other, map) {
                count += 1;
            }
            false
        });
        Ok(count)
    }

    /// Is there a bijective equivariant linear map onto `other`?
    fn isomorphic_to(&self, other: &FactorModule) -> Result<bool> {
        if self.p != other.p || self.t != other.t {
            return Ok(false);
        }
        let candidates = (self.size as u128).pow(self.t);
        if candidates > MAP_ENUM_CAP {
            return Err(Error::ModuleTooLarge(candidates));
        }
        let mut found = false;
        self.for_each_map(other, |module, target, map| {
            if is_bijection(map) && equivariant(module, target, map) {
                found = true;
                return true;
            }
            false
        });
        Ok(found)
    }

    /// Runs `visit` over every linear map from `self` into `other`; stops when
    /// it returns true.
    fn for_each_map<F>(&self, other: &FactorModule, mut visit: F)
    where
        F: FnMut(&FactorModule, &FactorModule, &[u8]) -> bool,
    {
        let mut images = vec![0u8; self.t as usize];
        loop {
            let map = self.linear_map_into(other, &images);
            if visit(self, other, &map) {
                return;
            }
            let mut pos = 0;
            loop {
                if pos == self.t as usize {
                    return;
                }
                images[pos] += 1;
                if (images[pos] as usize) < other.size {
                    break;
                }
                images[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn is_bijection(map: &[u8]) -> bool {
    let mut seen = vec![false; map.len()];
    for &y in map {
        if seen[y as usize] {
            return false;
        }
        seen[y as usize] = true;
    }
    true
}

/// map ∘ act_g = act_g ∘ map for every generator action.
fn equivariant(a: &FactorModule, b: &FactorModule, map: &[u8]) -> bool {
    a.acts
        .iter()
        .zip(&b.acts)
        .all(|(act_a, act_b)| (0..a.size).all(|v| map[act_a[v] as usize] == act_b[map[v] as usize]))
}

/// One G-isomorphism class of complemented chief factors with its invariants.
#[derive(Clone, Debug, Serialize)]
pub struct ChiefFactorClass {
    pub p: u64,
    pub t: u32,
    /// Multiplicity among the complemented factors of a chief series.
    pub delta: u32,
    /// Order of the endomorphism ring, a power of p.
    pub q: u64,
    /// Dimension of the factor over its endomorphism ring.
    pub r: u32,
    /// 0 for a trivial module, 1 otherwise.
    pub zeta: u32,
}

/// Complemented abelian chief factors grouped by G-isomorphism.
/// Fails with `NonSolubleInput` unless every chief factor is abelian.
pub fn factor_classes(group: &FiniteGroup) -> Result<Vec<ChiefFactorClass>> {
    let series = chief_series(group)?;
    factor_classes_from_series(group, &series)
}

fn factor_classes_from_series(
    group: &FiniteGroup,
    series: &ChiefSeries,
) -> Result<Vec<ChiefFactorClass>> {
    if !series.is_soluble() {
        return Err(Error::NonSolubleInput);
    }
    let mut reps: Vec<FactorModule> = Vec::new();
    let mut classes: Vec<ChiefFactorClass> = Vec::new();
    for factor in &series.factors {
        if !factor.complemented {
            continue;
        }
        let module = FactorModule::build(group, factor)?;
        let mut matched = false;
        for (rep, class) in reps.iter().zip(classes.iter_mut()) {
            if module.isomorphic_to(rep)? {
                class.delta += 1;
                matched = true;
                break;
            }
        }
        if matched {
            continue;
        }
        let q = module.endomorphism_count()?;
        let p = module.p;
        let t = module.t;
        // q = p^s with s | t; r·s = t
        let mut s = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            s += 1;
        }
        if rest != 1 || s == 0 || t % s != 0 {
            return Err(Error::BadArgument(format!(
                "endomorphism ring order {q} is not a p-power dividing the module ({p}^{t})"
            )));
        }
        classes.push(ChiefFactorClass {
            p,
            t,
            delta: 1,
            q,
            r: t / s,
            zeta: if module.is_trivial_action() { 0 } else { 1 },
        });
        reps.push(module);
    }
    Ok(classes)
}

/// Exact P_G(k) for soluble G as the product over factor classes A and
/// 0 ≤ l < δ_A of (1 − q^(l+r·ζ)/q^(r·k)).
pub fn gaschutz_probability(group: &FiniteGroup, k: u32) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::BadArgument("k must be >= 1".into()));
    }
    Ok(gaschutz_dirichlet(group)?.evaluate(k))
}

/// The same product expanded into a Dirichlet polynomial in k.
pub fn gaschutz_dirichlet(group: &FiniteGroup) -> Result<DirichletPolynomial> {
    if group.is_trivial() {
        return Ok(DirichletPolynomial::one());
    }
    let classes = factor_classes(group)?;
    dirichlet_of_classes(&classes, None)
}

/// The product restricted to classes of p-power order; all classes when
/// `only_p` is None.
pub fn dirichlet_of_classes(
    classes: &[ChiefFactorClass],
    only_p: Option<u64>,
) -> Result<DirichletPolynomial> {
    let mut acc = DirichletPolynomial::one();
    for class in classes {
        if let Some(p) = only_p {
            if class.p != p {
                continue;
            }
        }
        let base = (class.q as u128).pow(class.r);
        for l in 0..class.delta {
            let coeff = BigInt::from(class.q).pow(l + class.r * class.zeta);
            let factor = DirichletPolynomial::one_minus(BigRational::from(coeff), base)?;
            acc = acc.mul(&factor)?;
        }
    }
    Ok(acc)
}

/// P_{G,p}(k): the factors of the product whose modules are p-groups.
pub fn partial_probability_p(group: &FiniteGroup, p: u64, k: u32) -> Result<BigRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let classes = factor_classes(group)?;
    Ok(dirichlet_of_classes(&classes, Some(p))?.evaluate(k))
}

// ---------------------------------------------------------------------------
// comparison clauses
// ---------------------------------------------------------------------------

/// One comparison clause between P_{G,p}(k) and a C/D product bound at level
/// d; `holds` is None when the clause hypotheses are unmet.
#[derive(Clone, Debug, Serialize)]
pub struct ClauseReport {
    pub clause: u8,
    pub applicable: bool,
    pub holds: Option<bool>,
}

pub fn confronti_check(group: &FiniteGroup, p: u64, d: u32, k: u32) -> Result<Vec<ClauseReport>> {
    use crate::series::{c_poly, d_poly};
    if k < 1 {
        return Err(Error::BadArgument("k must be >= 1".into()));
    }
    let stats = alpha_beta_stats(group)?;
    if stats.beta > 0 {
        return Err(Error::NonSolubleInput);
    }
    let p_gp = partial_probability_p(group, p, k)?;
    let dp = stats.d(p);
    let derived = group.derived_subgroup_set();
    let abelianization = group.order() / derived.len();
    let p_divides_ab = abelianization as u64 % p == 0;

    let mut out = Vec::new();
    // (1) d_p(G) <= d implies P_{G,p}(k) >= D_{p,d}(k)
    let applicable = dp <= d;
    out.push(ClauseReport {
        clause: 1,
        applicable,
        holds: applicable.then(|| p_gp >= d_poly(p, d, k)),
    });
    // (2) p | |G/G'| implies P_{G,p}(k) >= C_{p,d}(k)
    let applicable = p_divides_ab && dp <= d;
    out.push(ClauseReport {
        clause: 2,
        applicable,
        holds: applicable.then(|| p_gp >= c_poly(p, d, k)),
    });
    // (3) alpha_{p,1} = 0 implies P_{G,p}(k) >= C_{p,d}(k)
    let applicable = stats.alpha_pt(p, 1) == 0 && dp <= d;
    out.push(ClauseReport {
        clause: 3,
        applicable,
        holds: applicable.then(|| p_gp >= c_poly(p, d, k)),
    });
    // (4) for p = 2: d_2(G) <= d implies P_{G,2}(k) >= C_{2,d}(k)
    let applicable = p == 2 && dp <= d;
    out.push(ClauseReport {
        clause: 4,
        applicable,
        holds: applicable.then(|| p_gp >= c_poly(2, d, k)),
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// supersoluble witness
// ---------------------------------------------------------------------------

/// Trace of one prime in the witness construction.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessStep {
    pub prime: u64,
    pub d_p: u32,
    /// 1: direct factor C_p^d appended. 2: C_p^d adjoined with a nontrivial
    /// action through a prime-order quotient of the partial witness.
    pub case: u8,
    pub acting_prime: Option<u64>,
}

/// Certificate shipped with a witness: the per-prime trace and the verified
/// inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub group_order: usize,
    pub witness_order: usize,
    pub steps: Vec<WitnessStep>,
    pub k_max: u32,
    /// (k, P_G(k), P_H(k)) with P_G >= P_H verified exactly.
    pub probability_checks: Vec<(u32, String, String)>,
    /// (p, d_p(G), d_p(H)) with d_p(H) <= d_p(G) verified.
    pub d_p_checks: Vec<(u64, u32, u32)>,
    pub same_primes: bool,
    pub derived_primes_subset: bool,
    pub e_group: String,
    pub e_witness: String,
    pub supersoluble: bool,
}

/// Builds a supersoluble group H with π(H) = π(G), P_G(k) ≥ P_H(k),
/// d_p(H) ≤ d_p(G) and π(G/G') ⊆ π(H/H'), by the inductive construction over
/// the primes of |G| in increasing order.
pub fn supersoluble_witness(
    group: &FiniteGroup,
    cap: usize,
) -> Result<(FiniteGroup, WitnessCertificate)> {
    let series = chief_series(group)?;
    if !series.is_soluble() {
        return Err(Error::NonSolubleInput);
    }
    let stats = alpha_beta_from_series(group, &series)?;
    let derived = group.derived_subgroup_set();
    let abelianization = (group.order() / derived.len()) as u64;

    let mut witness: Option<FiniteGroup> = None;
    let mut steps = Vec::new();
    for p in group.primes() {
        let dp = stats.d(p);
        let case1 = abelianization % p == 0 || stats.alpha_pt(p, 1) == 0;
        if case1 {
            let base = elementary_abelian(p, dp, cap)?;
            witness = Some(match witness {
                None => base,
                Some(h) => h.direct_product(&base, cap)?,
            });
            steps.push(WitnessStep {
                prime: p,
                d_p: dp,
                case: 1,
                acting_prime: None,
            });
        } else {
            // a complemented order-p chief factor with nontrivial action
            // exists; its acting quotient must be reachable from the partial
            // witness, or the construction is broken
            let h = witness.as_ref().ok_or_else(|| {
                Error::WitnessFailure(format!(
                    "nontrivial action needed for the smallest prime {p}"
                ))
            })?;
            let q = acting_prime(h, p)?;
            let new = semidirect_elementary(p, dp, h, q, cap)?;
            witness = Some(new);
            steps.push(WitnessStep {
                prime: p,
                d_p: dp,
                case: 2,
                acting_prime: Some(q),
            });
        }
    }
    let witness = witness.ok_or(Error::TrivialGroup)?;

    // certificate checks, all exact
    let k_max = stats.max_d() + 6;
    let pg = gaschutz_dirichlet(group)?;
    let ph = gaschutz_dirichlet(&witness)?;
    let mut probability_checks = Vec::new();
    for k in 1..=k_max {
        let a = pg.evaluate(k);
        let b = ph.evaluate(k);
        if a < b {
            return Err(Error::WitnessFailure(format!(
                "P_G({k}) < P_H({k}) for the constructed witness"
            )));
        }
        probability_checks.push((k, a.to_string(), b.to_string()));
    }
    let mut d_p_checks = Vec::new();
    for p in group.primes() {
        let dg = stats.d(p);
        let dh = d_p(&witness, p)?;
        if dh > dg {
            return Err(Error::WitnessFailure(format!("d_{p}(H) > d_{p}(G)")));
        }
        d_p_checks.push((p, dg, dh));
    }
    let same_primes = group.primes() == witness.primes();
    let witness_derived = witness.derived_subgroup_set();
    let witness_ab = (witness.order() / witness_derived.len()) as u64;
    let derived_primes_subset = factor_primes(abelianization)
        .iter()
        .all(|&q| witness_ab % q == 0);
    let witness_series = chief_series(&witness)?;
    let supersoluble = witness_series
        .factors
        .iter()
        .all(|f| f.is_abelian() && f.exponent == 1);
    let e_group = expected_wait_from_dirichlet(&pg)?;
    let e_witness = expected_wait_from_dirichlet(&ph)?;
    if e_group > e_witness {
        return Err(Error::WitnessFailure("e(G) > e(H)".into()));
    }
    if !(same_primes && derived_primes_subset && supersoluble) {
        return Err(Error::WitnessFailure(
            "constructed witness fails a certificate invariant".into(),
        ));
    }
    let certificate = WitnessCertificate {
        group_order: group.order(),
        witness_order: witness.order(),
        steps,
        k_max,
        probability_checks,
        d_p_checks,
        same_primes,
        derived_primes_subset,
        e_group: e_group.to_string(),
        e_witness: e_witness.to_string(),
        supersoluble,
    };
    Ok((witness, certificate))
}

/// C_p^d as d disjoint p-cycles.
fn elementary_abelian(p: u64, d: u32, cap: usize) -> Result<FiniteGroup> {
    if d == 0 {
        return Ok(FiniteGroup::trivial(1));
    }
    let mut g = cyclic_group(p as usize, cap)?;
    for _ in 1..d {
        g = g.direct_product(&cyclic_group(p as usize, cap)?, cap)?;
    }
    Ok(g)
}

/// Smallest prime q dividing both |H/H'| and p−1.
fn acting_prime(h: &FiniteGroup, p: u64) -> Result<u64> {
    let derived = h.derived_subgroup_set();
    let ab = (h.order() / derived.len()) as u64;
    factor_primes(ab)
        .into_iter()
        .find(|&q| (p - 1) % q == 0)
        .ok_or_else(|| {
            Error::WitnessFailure(format!(
                "no prime-order quotient of the partial witness acts on C_{p}"
            ))
        })
}

/// C_p^d ⋊ H with H acting on every coordinate through its order-q quotient,
/// realized by the power map x → x·g for g of multiplicative order q mod p.
fn semidirect_elementary(
    p: u64,
    d: u32,
    h: &FiniteGroup,
    q: u64,
    cap: usize,
) -> Result<FiniteGroup> {
    let exponent_of = order_q_character(h, q)?;
    let g = multiplicative_element_of_order(p, q)?;
    let block_points = (p as usize) * d as usize;
    let degree = block_points + h.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    for j in 0..d as usize {
        let cycle: Vec<Point> = (0..p as usize)
            .map(|x| (j * p as usize + x) as Point)
            .collect();
        gens.push(Permutation::from_cycles(&[cycle], degree)?);
    }
    let h_gen_idx = h.generator_indices();
    for (gi, hg) in h.generators().iter().enumerate() {
        let a = exponent_of[h_gen_idx[gi] as usize];
        let mut m = 1u64;
        for _ in 0..a {
            m = m * g % p;
        }
        let mut images: Vec<Point> = Vec::with_capacity(degree);
        for j in 0..d as u64 {
            for x in 0..p {
                images.push((j * p + x * m % p) as Point);
            }
        }
        images.extend(hg.images().iter().map(|&y| y + block_points as Point));
        gens.push(Permutation::from_images(images)?);
    }
    let out = FiniteGroup::from_generators(gens, cap)?;
    let expected = (p as usize).pow(d) * h.order();
    if out.order() != expected {
        return Err(Error::WitnessFailure(format!(
            "semidirect construction has order {} instead of {expected}",
            out.order()
        )));
    }
    Ok(out)
}

/// Image of every element of H under a fixed epimorphism H → Z/q.
fn order_q_character(h: &FiniteGroup, q: u64) -> Result<Vec<u32>> {
    // M = <H', x^q> gives the elementary abelian q-quotient H/M
    let mut seed = h.derived_subgroup_set();
    for i in 0..h.order() as ElemIdx {
        let mut acc = h.identity_idx();
        for _ in 0..q {
            acc = h.mult_idx(acc, i);
        }
        seed.push(acc);
    }
    let m = h.subgroup_closure(&seed);
    if h.order() == m.len() {
        return Err(Error::WitnessFailure(format!(
            "partial witness has no C_{q} quotient"
        )));
    }
    let (quotient, proj) = h.quotient_with_map(&m)?;
    // split one C_q direct factor off the quotient and project onto it
    let first = (0..quotient.order() as ElemIdx)
        .find(|&i| quotient.order_of(i) == q)
        .ok_or_else(|| Error::WitnessFailure("quotient is not a q-group".into()))?;
    let b1 = quotient.subgroup_closure(&[first]);
    let mut complement = vec![quotient.identity_idx()];
    for i in 0..quotient.order() as ElemIdx {
        let mut seed = complement.clone();
        seed.push(i);
        let bigger = quotient.subgroup_closure(&seed);
        if bigger
            .iter()
            .all(|&x| x == quotient.identity_idx() || b1.binary_search(&x).is_err())
        {
            complement = bigger;
        }
    }
    if complement.len() * b1.len() != quotient.order() {
        return Err(Error::WitnessFailure(
            "no complement to the chosen C_q direct factor".into(),
        ));
    }
    // lambda(x) = a for x in (first^a)·complement
    let mut lambda_q = vec![u32::MAX; quotient.order()];
    let mut power = quotient.identity_idx();
    for a in 0..q as u32 {
        for &c in &complement {
            lambda_q[quotient.mult_idx(power, c) as usize] = a;
        }
        power = quotient.mult_idx(power, first);
    }
    debug_assert!(lambda_q.iter().all(|&a| a != u32::MAX));
    Ok((0..h.order()).map(|i| lambda_q[proj[i] as usize]).collect())
}

/// Smallest g with multiplicative order exactly q modulo p.
fn multiplicative_element_of_order(p: u64, q: u64) -> Result<u64> {
    for g in 2..p {
        let mut x = 1u64;
        let mut ord = 0u64;
        loop {
            x = x * g % p;
            ord += 1;
            if x == 1 {
                break;
            }
        }
        if ord == q {
            return Ok(g);
        }
    }
    Err(Error::WitnessFailure(format!(
        "no element of order {q} modulo {p}"
    )))
}
