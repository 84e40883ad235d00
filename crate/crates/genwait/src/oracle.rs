//! Exhaustive tuple-counting oracle.
//!
//! Counts ordered k-tuples that generate the group by walking every tuple
//! through closure states. This path uses only group multiplication, never the
//! subgroup lattice, the Möbius function, or the chief-factor product, so it
//! can check all of them independently. Tuples with a common prefix share the
//! same generated subgroup, which is what makes exhaustive counting feasible
//! at order a few hundred.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::perm::{ElemIdx, FiniteGroup};

/// Number of ordered k-tuples (g_1, …, g_k) with ⟨g_1, …, g_k⟩ = G.
pub fn count_generating_tuples(group: &FiniteGroup, k: u32) -> BigInt {
    let order = group.order();
    // state = generated subgroup so far, keyed by its member list
    let mut state_of: HashMap<Vec<ElemIdx>, usize> = HashMap::new();
    let mut state_gens: Vec<Vec<ElemIdx>> = Vec::new();
    let mut state_members: Vec<Vec<ElemIdx>> = Vec::new();
    let trivial = vec![group.identity_idx()];
    state_of.insert(trivial.clone(), 0);
    state_gens.push(Vec::new());
    state_members.push(trivial);

    let full_order = order;
    let mut counts: HashMap<usize, BigInt> = HashMap::new();
    counts.insert(0, BigInt::from(1));
    // memoized transition (state, adjoined element) -> state
    let mut step: HashMap<(usize, ElemIdx), usize> = HashMap::new();

    for _ in 0..k {
        let mut next: HashMap<usize, BigInt> = HashMap::new();
        for (&state, count) in &counts {
            for g in 0..order as ElemIdx {
                let target = match step.get(&(state, g)) {
                    Some(&t) => t,
                    None => {
                        let t = if state_members[state].len() == full_order
                            || state_members[state].binary_search(&g).is_ok()
                        {
                            state
                        } else {
                            let mut seed = state_gens[state].clone();
                            seed.push(g);
                            let members = group.subgroup_closure(&seed);
                            match state_of.get(&members) {
                                Some(&t) => t,
                                None => {
                                    let t = state_members.len();
                                    state_of.insert(members.clone(), t);
                                    state_gens.push(seed);
                                    state_members.push(members);
                                    t
                                }
                            }
                        };
                        step.insert((state, g), t);
                        t
                    }
                };
                *next.entry(target).or_default() += count;
            }
        }
        counts = next;
    }

    let full_state = state_members.iter().position(|m| m.len() == full_order);
    match full_state {
        Some(s) => counts.remove(&s).unwrap_or_default(),
        None => BigInt::from(0),
    }
}

/// P_G(k) by exhaustive counting.
pub fn generation_probability(group: &FiniteGroup, k: u32) -> BigRational {
    BigRational::new(
        count_generating_tuples(group, k),
        BigInt::from(group.order()).pow(k),
    )
}

/// Minimal number of elements generating the group, by breadth-first search
/// over generated-subgroup states.
pub fn min_generators(group: &FiniteGroup) -> u32 {
    if group.order() == 1 {
        return 0;
    }
    let order = group.order();
    let mut state_of: HashMap<Vec<ElemIdx>, usize> = HashMap::new();
    let mut state_gens: Vec<Vec<ElemIdx>> = Vec::new();
    let mut state_members: Vec<Vec<ElemIdx>> = Vec::new();
    let trivial = vec![group.identity_idx()];
    state_of.insert(trivial.clone(), 0);
    state_gens.push(Vec::new());
    state_members.push(trivial);
    let mut frontier = vec![0usize];
    let mut visited = vec![true];
    for depth in 1..=64u32 {
        let mut next = Vec::new();
        for &state in &frontier {
            for g in 0..order as ElemIdx {
                if state_members[state].binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = state_gens[state].clone();
                seed.push(g);
                let members = group.subgroup_closure(&seed);
                if members.len() == order {
                    return depth;
                }
                let id = match state_of.get(&members) {
                    Some(&t) => t,
                    None => {
                        let t = state_members.len();
                        state_of.insert(members.clone(), t);
                        state_gens.push(seed);
                        state_members.push(members);
                        visited.push(false);
                        t
                    }
                };
                if !visited[id] {
                    visited[id] = true;
                    next.push(id);
                }
            }
        }
        frontier = next;
    }
    unreachable!("every finite group here is generated by at most 64 elements");
}

/// Literal tuple-by-tuple count, with no state sharing. Exponential; only for
/// cross-checking the shared-prefix walk on very small inputs.
pub fn count_generating_tuples_naive(group: &FiniteGroup, k: u32) -> BigInt {
    let order = group.order() as u64;
    let mut count = BigInt::from(0);
    let mut tuple = vec![0u64; k as usize];
    loop {
        let seed: Vec<ElemIdx> = tuple.iter().map(|&g| g as ElemIdx).collect();
        if group.subgroup_closure(&seed).len() == group.order() {
            count += 1;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k as usize {
                return count;
            }
            tuple[pos] += 1;
            if tuple[pos] < order {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}
