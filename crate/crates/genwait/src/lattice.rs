//! Full subgroup lattice of a small group, the Möbius function on it, and the
//! maximal-subgroup census with the abelian/nonabelian socle split.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{ElemIdx, FiniteGroup};

pub const DEFAULT_SUBGROUP_CAP: usize = 200_000;

/// One subgroup as a sorted member-index list plus a bitset over the parent
/// group's element table.
#[derive(Clone, Debug)]
pub struct SubgroupSet {
    pub members: Vec<ElemIdx>,
    bits: Vec<u64>,
}

impl SubgroupSet {
    fn new(members: Vec<ElemIdx>, group_order: usize) -> Self {
        let mut bits = vec![0u64; group_order.div_ceil(64)];
        for &m in &members {
            bits[m as usize / 64] |= 1 << (m as usize % 64);
        }
        SubgroupSet { members, bits }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, i: ElemIdx) -> bool {
        self.bits[i as usize / 64] >> (i as usize % 64) & 1 == 1
    }

    /// True if `other` is contained in `self`.
    pub fn contains_all(&self, other: &SubgroupSet) -> bool {
        other
            .bits
            .iter()
            .zip(&self.bits)
            .all(|(&o, &s)| o & !s == 0)
    }

    pub fn intersect(&self, other: &SubgroupSet, group_order: usize) -> SubgroupSet {
        let members: Vec<ElemIdx> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        SubgroupSet::new(members, group_order)
    }
}

/// All subgroups of a group with their Möbius values.
///
/// Subgroups are sorted by (order, member list), so index 0 is the trivial
/// subgroup and the last index is the whole group; everything downstream is
/// reproducible.
pub struct SubgroupLattice {
    pub subgroups: Vec<SubgroupSet>,
    pub mobius: Vec<i64>,
    group_order: usize,
}

impl SubgroupLattice {
    /// Enumerates every subgroup by seeding with the cyclic subgroups and
    /// closing under joins with cyclic subgroups until stable.
    pub fn build(group: &FiniteGroup) -> Result<Self> {
        Self::build_with_cap(group, DEFAULT_SUBGROUP_CAP)
    }

    pub fn build_with_cap(group: &FiniteGroup, cap: usize) -> Result<Self> {
        let order = group.order();
        let mut by_members: HashMap<Vec<ElemIdx>, usize> = HashMap::new();
        let mut sets: Vec<SubgroupSet> = Vec::new();
        let mut gens: Vec<Vec<ElemIdx>> = Vec::new();

        let push = |members: Vec<ElemIdx>,
                    g: Vec<ElemIdx>,
                    sets: &mut Vec<SubgroupSet>,
                    gens: &mut Vec<Vec<ElemIdx>>,
                    by_members: &mut HashMap<Vec<ElemIdx>, usize>|
         -> Option<usize> {
            if by_members.contains_key(&members) {
                return None;
            }
            let idx = sets.len();
            by_members.insert(members.clone(), idx);
            sets.push(SubgroupSet::new(members, order));
            gens.push(g);
            Some(idx)
        };

        push(
            vec![group.identity_idx()],
            Vec::new(),
            &mut sets,
            &mut gens,
            &mut by_members,
        );
        // cyclic seeds: one canonical generator per distinct cyclic subgroup
        let mut cyclic_seeds: Vec<ElemIdx> = Vec::new();
        for x in 0..order as ElemIdx {
            let members = group.subgroup_closure(&[x]);
            if push(members, vec![x], &mut sets, &mut gens, &mut by_members).is_some() {
                cyclic_seeds.push(x);
            }
        }

        let mut cursor = 0;
        while cursor < sets.len() {
            for &x in &cyclic_seeds {
                if sets[cursor].contains(x) {
                    continue;
                }
                let mut seed = gens[cursor].clone();
                seed.push(x);
                let members = group.subgroup_closure(&seed);
                if sets.len() >= cap && !by_members.contains_key(&members) {
                    return Err(Error::SubgroupCapExceeded(cap));
                }
                push(members, seed, &mut sets, &mut gens, &mut by_members);
            }
            cursor += 1;
        }

        let mut order_key: Vec<usize> = (0..sets.len()).collect();
        order_key.sort_by(|&a, &b| {
            (sets[a].order(), &sets[a].members).cmp(&(sets[b].order(), &sets[b].members))
        });
        let subgroups: Vec<SubgroupSet> = order_key.iter().map(|&i| sets[i].clone()).collect();

        let mobius = compute_mobius(&subgroups);
        Ok(SubgroupLattice {
            subgroups,
            mobius,
            group_order: order,
        })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn index_of(&self, members: &[ElemIdx]) -> Option<usize> {
        self.subgroups
            .iter()
            .position(|s| s.members.as_slice() == members)
    }

    /// Indices of the maximal subgroups (no intermediate subgroup below G).
    pub fn maximal_indices(&self) -> Vec<usize> {
        let top = self.top();
        (0..top)
            .filter(|&i| {
                !(i + 1..top).any(|k| {
                    self.subgroups[k].order() > self.subgroups[i].order()
                        && self.subgroups[k].contains_all(&self.subgroups[i])
                })
            })
            .collect()
    }

    /// Möbius values of the interval below `top`, i.e. the lattice of the
    /// subgroup `subgroups[top]` itself. Returns (lattice index, value) pairs.
    pub fn mobius_within(&self, top: usize) -> Vec<(usize, i64)> {
        let inside: Vec<usize> = (0..self.subgroups.len())
            .filter(|&i| self.subgroups[top].contains_all(&self.subgroups[i]))
            .collect();
        let mut mu: HashMap<usize, i64> = HashMap::new();
        for &h in inside.iter().rev() {
            if h == top {
                mu.insert(h, 1);
                continue;
            }
            let mut acc = 0i64;
            for &k in inside.iter().rev() {
                if self.subgroups[k].order() > self.subgroups[h].order()
                    && self.subgroups[k].contains_all(&self.subgroups[h])
                {
                    acc += mu[&k];
                }
            }
            mu.insert(h, -acc);
        }
        inside.into_iter().map(|i| (i, mu[&i])).collect()
    }

    /// Orbits of subgroups under conjugation, as lists of lattice indices;
    /// each orbit is sorted so the first entry is the canonical representative.
    pub fn conjugacy_classes(&self, group: &FiniteGroup) -> Vec<Vec<usize>> {
        let by_members: HashMap<&[ElemIdx], usize> = self
            .subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.as_slice(), i))
            .collect();
        let gen_idx = group.generator_indices();
        let mut seen = vec![false; self.subgroups.len()];
        let mut classes = Vec::new();
        for start in 0..self.subgroups.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cursor = 0;
            while cursor < orbit.len() {
                let cur = orbit[cursor];
                for &g in &gen_idx {
                    let mut conj: Vec<ElemIdx> = self.subgroups[cur]
                        .members
                        .iter()
                        .map(|&m| group.conj_idx(m, g))
                        .collect();
                    conj.sort_unstable();
                    let idx = by_members[conj.as_slice()];
                    if !seen[idx] {
                        seen[idx] = true;
                        orbit.push(idx);
                    }
                }
                cursor += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        classes
    }
}

/// Top-down Möbius recursion: μ(G) = 1 and μ(H) = −Σ_{H < K ≤ G} μ(K).
pub fn compute_mobius(subgroups: &[SubgroupSet]) -> Vec<i64> {
    let n = subgroups.len();
    let mut mobius = vec![0i64; n];
    for h in (0..n).rev() {
        if h == n - 1 {
            mobius[h] = 1;
            continue;
        }
        let mut acc = 0i64;
        for k in h + 1..n {
            if subgroups[k].order() > subgroups[h].order()
                && subgroups[k].contains_all(&subgroups[h])
            {
                acc += mobius[k];
            }
        }
        mobius[h] = -acc;
    }
    mobius
}

/// One maximal subgroup in the census.
#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    /// Index of the subgroup within the lattice.
    pub lattice_index: usize,
    /// Index of the maximal subgroup in the group, |G : M|.
    pub subgroup_index: usize,
    /// True for type A (abelian socle of G over the core), false for type B.
    pub type_a: bool,
}

/// Counts of maximal subgroups by index, split by type.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MaximalSubgroupCensus {
    pub entries: Vec<CensusEntry>,
    /// m_n: number of maximal subgroups of index n.
    pub m_n: std::collections::BTreeMap<usize, usize>,
    pub m_n_a: std::collections::BTreeMap<usize, usize>,
    pub m_n_b: std::collections::BTreeMap<usize, usize>,
}

impl MaximalSubgroupCensus {
    pub fn total(&self) -> usize {
        self.entries.len()
    }
}

/// Classifies every maximal subgroup M: type A iff soc(G/core_G(M)) is
/// abelian, where core_G(M) is the intersection of the conjugates of M.
pub fn maximal_census(
    group: &FiniteGroup,
    lattice: &SubgroupLattice,
) -> Result<MaximalSubgroupCensus> {
    let maximals = lattice.maximal_indices();
    // every core-free maximal subgroup shares soc(G); compute it once
    let full_socle_abelian = {
        let soc = group.socle_set()?;
        soc.iter().all(|&a| {
            soc.iter()
                .all(|&b| group.mult_idx(a, b) == group.mult_idx(b, a))
        })
    };
    let entries: Vec<CensusEntry> = maximals
        .par_iter()
        .map(|&mi| -> Result<CensusEntry> {
            let m = &lattice.subgroups[mi];
            let index = group.order() / m.order();
            let type_a = socle_over_core_is_abelian(group, m, full_socle_abelian)?;
            if type_a {
                // a maximal subgroup with abelian socle section has
                // prime-power index
                let primes = crate::perm::factor_primes(index as u64);
                if primes.len() != 1 {
                    return Err(Error::BadArgument(format!(
                        "type A maximal subgroup with non-prime-power index {index}"
                    )));
                }
            }
            Ok(CensusEntry {
                lattice_index: mi,
                subgroup_index: index,
                type_a,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut census = MaximalSubgroupCensus {
        entries,
        ..Default::default()
    };
    for e in &census.entries {
        *census.m_n.entry(e.subgroup_index).or_insert(0) += 1;
        if e.type_a {
            *census.m_n_a.entry(e.subgroup_index).or_insert(0) += 1;
        } else {
            *census.m_n_b.entry(e.subgroup_index).or_insert(0) += 1;
        }
    }
    Ok(census)
}

fn socle_over_core_is_abelian(
    group: &FiniteGroup,
    m: &SubgroupSet,
    full_socle_abelian: bool,
) -> Result<bool> {
    let order = group.order();
    // orbit of M under conjugation
    let gen_idx = group.generator_indices();
    let mut conjugates: Vec<Vec<ElemIdx>> = vec![m.members.clone()];
    let mut seen: HashMap<Vec<ElemIdx>, ()> = HashMap::new();
    seen.insert(m.members.clone(), ());
    let mut cursor = 0;
    while cursor < conjugates.len() {
        let cur = conjugates[cursor].clone();
        for &g in &gen_idx {
            let mut conj: Vec<ElemIdx> = cur.iter().map(|&x| group.conj_idx(x, g)).collect();
            conj.sort_unstable();
            if !seen.contains_key(&conj) {
                seen.insert(conj.clone(), ());
                conjugates.push(conj);
            }
        }
        cursor += 1;
    }
    let mut core = SubgroupSet::new(m.members.clone(), order);
    for c in &conjugates[1..] {
        core = core.intersect(&SubgroupSet::new(c.clone(), order), order);
    }
    if core.order() == 1 {
        return Ok(full_socle_abelian);
    }
    let (quotient, _) = group.quotient_with_map(&core.members)?;
    let soc = quotient.socle_set()?;
    Ok(soc.iter().all(|&a| {
        soc.iter()
            .all(|&b| quotient.mult_idx(a, b) == quotient.mult_idx(b, a))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group;
    use crate::perm::DEFAULT_ORDER_CAP;

    fn lattice_of(spec: &str) -> (FiniteGroup, SubgroupLattice) {
        let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        (g, l)
    }

    /// Brute-force oracle: every subset closed under multiplication that
    /// contains the identity.
    fn brute_force_subgroups(group: &FiniteGroup) -> Vec<Vec<ElemIdx>> {
        let n = group.order();
        assert!(n <= 24, "oracle is exponential");
        let mut found = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & (1 << group.identity_idx()) == 0 {
                continue;
            }
            let members: Vec<ElemIdx> = (0..n as ElemIdx).filter(|&i| mask >> i & 1 == 1).collect();
            if group.is_subgroup_set(&members) {
                found.push(members);
            }
        }
        found
    }

    #[test]
    fn s3_lattice_and_mobius() {
        let (_, l) = lattice_of("S(3)");
        assert_eq!(l.len(), 6);
        let orders: Vec<usize> = l.subgroups.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(l.mobius[5], 1);
        assert_eq!(l.mobius[4], -1);
        assert_eq!(l.mobius[1], -1);
        assert_eq!(l.mobius[2], -1);
        assert_eq!(l.mobius[3], -1);
        assert_eq!(l.mobius[0], 3);
    }

    #[test]
    fn klein_lattice() {
        let (_, l) = lattice_of("C(2) x C(2)");
        assert_eq!(l.len(), 5);
        assert_eq!(l.mobius[l.top()], 1);
        assert_eq!(l.mobius[0], 2);
        let mid: Vec<i64> = (1..4).map(|i| l.mobius[i]).collect();
        assert_eq!(mid, vec![-1, -1, -1]);
    }

    #[test]
    fn cyclic_prime_mobius() {
        let (_, l) = lattice_of("C(5)");
        assert_eq!(l.len(), 2);
        assert_eq!(l.mobius, vec![-1, 1]);
    }

    #[test]
    fn s4_has_30_subgroups() {
        let (_, l) = lattice_of("S(4)");
        assert_eq!(l.len(), 30);
    }

    #[test]
    fn known_subgroup_counts_at_scale() {
        // reference counts: Sym(n) has 1, 2, 6, 30, 156 subgroups for
        // n = 1..=5, and Alt(5) has 59
        let (_, l) = lattice_of("S(5)");
        assert_eq!(l.len(), 156);
        let (_, l) = lattice_of("A(5)");
        assert_eq!(l.len(), 59);
    }

    #[test]
    fn subgroup_cap_respected() {
        let g = parse_group("S(4)", DEFAULT_ORDER_CAP).unwrap();
        assert!(matches!(
            SubgroupLattice::build_with_cap(&g, 10),
            Err(crate::error::Error::SubgroupCapExceeded(10))
        ));
    }

    #[test]
    fn lattice_matches_brute_force() {
        for spec in ["S(3)", "C(2) x C(2)", "C(12)", "A(4)", "D(8)", "Q8", "S(4)"] {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            let l = SubgroupLattice::build(&g).unwrap();
            let mut oracle = brute_force_subgroups(&g);
            oracle.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
            let got: Vec<Vec<ElemIdx>> = l.subgroups.iter().map(|s| s.members.clone()).collect();
            assert_eq!(got, oracle, "lattice mismatch for {spec}");
        }
    }

    #[test]
    fn mobius_defining_identity() {
        // Σ_{K >= H} μ(K) = [H = G] for every H
        for spec in ["S(4)", "C(2) x S(3)", "Q8", "C(2) x C(2) x C(2)"] {
            let (_, l) = lattice_of(spec);
            for h in 0..l.len() {
                let total: i64 = (0..l.len())
                    .filter(|&k| l.subgroups[k].contains_all(&l.subgroups[h]))
                    .map(|k| l.mobius[k])
                    .sum();
                assert_eq!(total, i64::from(h == l.top()), "identity fails in {spec}");
            }
        }
    }

    #[test]
    fn join_closure_is_stable() {
        let (g, l) = lattice_of("S(4)");
        // rerunning the join of any two subgroups lands inside the lattice
        for a in 0..l.len() {
            for b in 0..l.len() {
                let mut seed = l.subgroups[a].members.clone();
                seed.extend(&l.subgroups[b].members);
                let join = g.subgroup_closure(&seed);
                assert!(l.index_of(&join).is_some());
            }
        }
    }

    #[test]
    fn census_s3() {
        let (g, l) = lattice_of("S(3)");
        let c = maximal_census(&g, &l).unwrap();
        assert_eq!(c.m_n.get(&2), Some(&1));
        assert_eq!(c.m_n.get(&3), Some(&3));
        assert_eq!(c.total(), 4);
        assert!(c.entries.iter().all(|e| e.type_a));
    }

    #[test]
    fn census_a5_all_type_b() {
        let g = parse_group("A(5)", DEFAULT_ORDER_CAP).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        let c = maximal_census(&g, &l).unwrap();
        assert!(c.entries.iter().all(|e| !e.type_a));
        assert_eq!(c.m_n.get(&5), Some(&5));
        assert_eq!(c.m_n.get(&6), Some(&6));
        assert_eq!(c.m_n.get(&10), Some(&10));
    }

    #[test]
    fn census_c4() {
        let (g, l) = lattice_of("C(4)");
        let c = maximal_census(&g, &l).unwrap();
        assert_eq!(c.total(), 1);
        assert_eq!(c.m_n_a.get(&2), Some(&1));
    }

    #[test]
    fn index_two_maximals_match_two_rank() {
        // the number of index-2 maximal subgroups is 2^a - 1 where a is the
        // rank of G over the subgroup generated by G' and the squares
        for spec in [
            "S(4)",
            "D(8)",
            "C(2) x C(2) x C(2)",
            "C(4) x C(2)",
            "Q8",
            "C(2) x S(3)",
        ] {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            let l = SubgroupLattice::build(&g).unwrap();
            let c = maximal_census(&g, &l).unwrap();
            let mut seed = g.derived_subgroup_set();
            for i in 0..g.order() as ElemIdx {
                seed.push(g.mult_idx(i, i));
            }
            let k = g.subgroup_closure(&seed);
            let alpha = (g.order() / k.len()).trailing_zeros();
            assert_eq!(
                c.m_n.get(&2).copied().unwrap_or(0),
                (1usize << alpha) - 1,
                "index-2 count wrong for {spec}"
            );
        }
    }

    #[test]
    fn conjugacy_classes_s4() {
        let (g, l) = lattice_of("S(4)");
        let classes = l.conjugacy_classes(&g);
        assert_eq!(classes.len(), 11);
        assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), 30);
    }
}
