//! Permutations and explicit small finite groups.
//!
//! Groups are stored as full element tables in a fixed canonical order
//! (lexicographic on image arrays), so every downstream computation is
//! deterministic and reproducible. This is deliberate: all the groups this
//! crate works with are desk scale, and explicit tables keep the lattice and
//! Möbius machinery simple and exact.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A point of the permutation domain `{0, …, degree-1}`.
pub type Point = u16;

/// Index of an element within a group's canonical element table.
pub type ElemIdx = u16;

/// Default cap on explicit group orders. Override per call, or via the
/// `GENWAIT_ORDER_CAP` environment variable in the CLI.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Multiplication tables are only materialized below this order; larger
/// groups multiply through the element index map.
const MULT_TABLE_MAX: usize = 2048;

/// A permutation of `{0, …, degree-1}` given by its image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Box<[Point]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        debug_assert!(degree <= usize::from(Point::MAX) + 1);
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from an explicit image array, checking bijectivity.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if (y as usize) >= n {
                return Err(Error::PointOutOfRange(y as usize, n));
            }
            if seen[y as usize] {
                return Err(Error::RepeatedPoint(y as usize));
            }
            seen[y as usize] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Product of the given cycles acting on `{0, …, degree-1}`.
    ///
    /// Points must be in range and pairwise disjoint within the cycle list;
    /// the cycles of one list therefore commute and their order is irrelevant.
    pub fn from_cycles(cycles: &[Vec<Point>], degree: usize) -> Result<Self> {
        if degree > usize::from(Point::MAX) + 1 {
            return Err(Error::BadArgument(format!(
                "degree {degree} exceeds the supported point range"
            )));
        }
        let mut images: Vec<Point> = (0..degree as Point).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if (x as usize) >= degree {
                    return Err(Error::PointOutOfRange(x as usize, degree));
                }
                if seen[x as usize] {
                    return Err(Error::RepeatedPoint(x as usize));
                }
                seen[x as usize] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[x as usize] = next;
            }
        }
        // next pointers were validated above; the result is a bijection
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    /// `self` followed by `other` (left-to-right composition).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&y| other.images[y as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0 as Point; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as Point;
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| x == y as usize)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x != y as usize)
            .map(|(x, _)| x as Point)
    }

    /// Cycle notation, e.g. `(0 1 2)(3 4)`; the identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&x.to_string());
                first = false;
                x = self.images[x] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

/// An explicit finite permutation group with a full, canonically ordered
/// element table. Immutable after construction.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Box<[Point]>, ElemIdx>,
    inverse: Vec<ElemIdx>,
    mult: Option<Vec<ElemIdx>>,
    identity_idx: ElemIdx,
}

impl FiniteGroup {
    /// Full element table by closure under products, starting from the
    /// identity. Fails with `OrderCapExceeded` if the order would exceed `cap`.
    pub fn from_generators(gens: Vec<Permutation>, cap: usize) -> Result<Self> {
        if cap < 1 {
            return Err(Error::BadArgument("order cap must be >= 1".into()));
        }
        let degree = gens.first().map(|g| g.degree()).unwrap_or(1);
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut seen: HashMap<Box<[Point]>, ()> = HashMap::new();
        seen.insert(elements[0].images.clone(), ());
        let mut cursor = 0;
        while cursor < elements.len() {
            let cur = elements[cursor].clone();
            for g in &gens {
                let next = cur.compose(g);
                if !seen.contains_key(&next.images) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCapExceeded(cap));
                    }
                    seen.insert(next.images.clone(), ());
                    elements.push(next);
                }
            }
            cursor += 1;
        }
        Self::finish(degree, gens, elements)
    }

    /// Builds a group from an explicit element list, validating closure.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.is_empty() || !elements.iter().any(|e| e.is_identity()) {
            return Err(Error::NotASubgroup);
        }
        let index: HashMap<Box<[Point]>, ()> =
            elements.iter().map(|e| (e.images.clone(), ())).collect();
        for a in &elements {
            for b in &elements {
                if !index.contains_key(&a.compose(b).images) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        let gens = greedy_generators(&elements);
        Self::finish(degree, gens, elements)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::finish(degree, Vec::new(), vec![Permutation::identity(degree)])
            .expect("trivial group")
    }

    fn finish(
        degree: usize,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
    ) -> Result<Self> {
        elements.sort();
        let index: HashMap<Box<[Point]>, ElemIdx> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.images.clone(), i as ElemIdx))
            .collect();
        let inverse: Vec<ElemIdx> = elements
            .iter()
            .map(|e| index[&e.inverse().images])
            .collect();
        let identity_idx = index[&Permutation::identity(degree).images];
        let n = elements.len();
        let mult = if n <= MULT_TABLE_MAX {
            let mut table = vec![0 as ElemIdx; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    table[i * n + j] = index[&a.compose(b).images];
                }
            }
            Some(table)
        } else {
            None
        };
        Ok(FiniteGroup {
            degree,
            generators,
            elements,
            index,
            inverse,
            mult,
            identity_idx,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elem(&self, i: ElemIdx) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn identity_idx(&self) -> ElemIdx {
        self.identity_idx
    }

    pub fn idx_of(&self, p: &Permutation) -> Option<ElemIdx> {
        self.index.get(&p.images).copied()
    }

    /// Index of `elements[i] * elements[j]` (apply `i` first, then `j`).
    #[inline]
    pub fn mult_idx(&self, i: ElemIdx, j: ElemIdx) -> ElemIdx {
        match &self.mult {
            Some(table) => table[i as usize * self.elements.len() + j as usize],
            None => {
                let p = self.elements[i as usize].compose(&self.elements[j as usize]);
                self.index[&p.images]
            }
        }
    }

    #[inline]
    pub fn inv_idx(&self, i: ElemIdx) -> ElemIdx {
        self.inverse[i as usize]
    }

    /// `g^-1 * x * g` as indices.
    #[inline]
    pub fn conj_idx(&self, x: ElemIdx, g: ElemIdx) -> ElemIdx {
        self.mult_idx(self.mult_idx(self.inv_idx(g), x), g)
    }

    pub fn order_of(&self, i: ElemIdx) -> u64 {
        self.elements[i as usize].order()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Primes dividing the group order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        factor_primes(self.order() as u64)
    }

    /// Generator indices within the element table.
    pub fn generator_indices(&self) -> Vec<ElemIdx> {
        self.generators
            .iter()
            .map(|g| self.index[&g.images])
            .collect()
    }

    /// Subgroup generated by the given element indices, as a sorted index list.
    pub fn subgroup_closure(&self, seed: &[ElemIdx]) -> Vec<ElemIdx> {
        let mut in_set = vec![false; self.order()];
        let mut list = vec![self.identity_idx];
        in_set[self.identity_idx as usize] = true;
        let mut cursor = 0;
        while cursor < list.len() {
            let cur = list[cursor];
            for &g in seed {
                let next = self.mult_idx(cur, g);
                if !in_set[next as usize] {
                    in_set[next as usize] = true;
                    list.push(next);
                }
            }
            cursor += 1;
        }
        list.sort_unstable();
        list
    }

    /// Normal closure of the given elements: subgroup generated by all their
    /// conjugates.
    pub fn normal_closure(&self, seed: &[ElemIdx]) -> Vec<ElemIdx> {
        let gen_idx = self.generator_indices();
        let mut in_orbit = vec![false; self.order()];
        let mut orbit: Vec<ElemIdx> = Vec::new();
        for &s in seed {
            if !in_orbit[s as usize] {
                in_orbit[s as usize] = true;
                orbit.push(s);
            }
        }
        let mut cursor = 0;
        while cursor < orbit.len() {
            let cur = orbit[cursor];
            for &g in &gen_idx {
                let c = self.conj_idx(cur, g);
                if !in_orbit[c as usize] {
                    in_orbit[c as usize] = true;
                    orbit.push(c);
                }
            }
            cursor += 1;
        }
        self.subgroup_closure(&orbit)
    }

    /// Derived subgroup as a sorted index list.
    pub fn derived_subgroup_set(&self) -> Vec<ElemIdx> {
        // commutators of generators generate G' up to normal closure
        let gen_idx = self.generator_indices();
        let mut comms = Vec::new();
        for &a in &gen_idx {
            for &b in &gen_idx {
                let c = self.mult_idx(
                    self.mult_idx(self.inv_idx(a), self.inv_idx(b)),
                    self.mult_idx(a, b),
                );
                comms.push(c);
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_subgroup_set(&self, members: &[ElemIdx]) -> bool {
        if members.is_empty() {
            return false;
        }
        let mut in_set = vec![false; self.order()];
        for &m in members {
            in_set[m as usize] = true;
        }
        if !in_set[self.identity_idx as usize] {
            return false;
        }
        members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| in_set[self.mult_idx(a, b) as usize])
        })
    }

    pub fn is_normal_set(&self, members: &[ElemIdx]) -> bool {
        let mut in_set = vec![false; self.order()];
        for &m in members {
            in_set[m as usize] = true;
        }
        let gen_idx = self.generator_indices();
        members.iter().all(|&m| {
            gen_idx
                .iter()
                .all(|&g| in_set[self.conj_idx(m, g) as usize])
        })
    }

    /// The subgroup on the given member indices as a standalone group,
    /// acting on the same points.
    pub fn subgroup_as_group(&self, members: &[ElemIdx]) -> Result<FiniteGroup> {
        if !self.is_subgroup_set(members) {
            return Err(Error::NotASubgroup);
        }
        let elements: Vec<Permutation> = members
            .iter()
            .map(|&i| self.elements[i as usize].clone())
            .collect();
        let gens = greedy_generators(&elements);
        FiniteGroup::finish(self.degree, gens, elements)
    }

    /// Quotient by a normal subgroup: the (faithful) action of G on the right
    /// cosets of N, with the projection map from element indices to quotient
    /// element indices.
    pub fn quotient_with_map(&self, n_members: &[ElemIdx]) -> Result<(FiniteGroup, Vec<ElemIdx>)> {
        if !self.is_subgroup_set(n_members) {
            return Err(Error::NotASubgroup);
        }
        if !self.is_normal_set(n_members) {
            return Err(Error::NotNormal);
        }
        let order = self.order();
        // coset id = position of the coset's minimal element, compressed
        let mut coset_of = vec![u16::MAX; order];
        let mut coset_reps: Vec<ElemIdx> = Vec::new();
        for g in 0..order as ElemIdx {
            if coset_of[g as usize] != u16::MAX {
                continue;
            }
            let id = coset_reps.len() as u16;
            coset_reps.push(g);
            for &n in n_members {
                coset_of[self.mult_idx(n, g) as usize] = id;
            }
        }
        let num_cosets = coset_reps.len();
        debug_assert_eq!(num_cosets * n_members.len(), order);
        // image of each group element as a permutation of cosets
        let mut quotient_perms: Vec<Permutation> = Vec::new();
        let mut perm_id: HashMap<Box<[Point]>, ElemIdx> = HashMap::new();
        let mut projection = vec![0 as ElemIdx; order];
        for g in 0..order as ElemIdx {
            let images: Vec<Point> = coset_reps
                .iter()
                .map(|&rep| coset_of[self.mult_idx(rep, g) as usize])
                .collect();
            let p = Permutation::from_images(images)?;
            let id = match perm_id.get(&p.images) {
                Some(&id) => id,
                None => {
                    let id = quotient_perms.len() as ElemIdx;
                    perm_id.insert(p.images.clone(), id);
                    quotient_perms.push(p);
                    id
                }
            };
            projection[g as usize] = id;
        }
        let gens: Vec<Permutation> = self
            .generator_indices()
            .iter()
            .map(|&g| quotient_perms[projection[g as usize] as usize].clone())
            .collect();
        let q = FiniteGroup::finish(num_cosets, gens, quotient_perms.clone())?;
        // renumber the projection into the canonical (sorted) table
        let proj: Vec<ElemIdx> = projection
            .iter()
            .map(|&raw| {
                q.idx_of(&quotient_perms[raw as usize])
                    .expect("quotient element")
            })
            .collect();
        Ok((q, proj))
    }

    pub fn quotient(&self, n: &FiniteGroup) -> Result<FiniteGroup> {
        let members = self.member_indices_of(n)?;
        Ok(self.quotient_with_map(&members)?.0)
    }

    /// Indices in `self` of all elements of a subgroup given as a group on the
    /// same points.
    pub fn member_indices_of(&self, sub: &FiniteGroup) -> Result<Vec<ElemIdx>> {
        if sub.degree != self.degree {
            return Err(Error::DegreeMismatch(self.degree, sub.degree));
        }
        let mut idxs = Vec::with_capacity(sub.order());
        for e in sub.elements() {
            match self.idx_of(e) {
                Some(i) => idxs.push(i),
                None => return Err(Error::NotASubgroup),
            }
        }
        idxs.sort_unstable();
        Ok(idxs)
    }

    /// All minimal normal subgroups, as sorted index sets. Requires |G| > 1.
    pub fn minimal_normal_subgroup_sets(&self) -> Result<Vec<Vec<ElemIdx>>> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        // every minimal normal subgroup is the normal closure of any of its
        // prime-order elements
        let mut closures: Vec<Vec<ElemIdx>> = Vec::new();
        for i in 0..self.order() as ElemIdx {
            if i == self.identity_idx || !is_prime(self.order_of(i)) {
                continue;
            }
            let nc = self.normal_closure(&[i]);
            if !closures.contains(&nc) {
                closures.push(nc);
            }
        }
        let minimal: Vec<Vec<ElemIdx>> = closures
            .iter()
            .filter(|c| {
                !closures
                    .iter()
                    .any(|d| d.len() < c.len() && is_subset(d, c))
            })
            .cloned()
            .collect();
        Ok(minimal)
    }

    pub fn minimal_normal_subgroups(&self) -> Result<Vec<FiniteGroup>> {
        self.minimal_normal_subgroup_sets()?
            .iter()
            .map(|s| self.subgroup_as_group(s))
            .collect()
    }

    /// Socle: subgroup generated by all minimal normal subgroups.
    pub fn socle_set(&self) -> Result<Vec<ElemIdx>> {
        let mins = self.minimal_normal_subgroup_sets()?;
        let all: Vec<ElemIdx> = mins.into_iter().flatten().collect();
        Ok(self.subgroup_closure(&all))
    }

    /// A Sylow p-subgroup, grown through normalizers.
    pub fn sylow_subgroup(&self, p: u64) -> Result<FiniteGroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut p_part: usize = 1;
        let mut rest = self.order();
        while rest % p as usize == 0 {
            rest /= p as usize;
            p_part *= p as usize;
        }
        let mut members = vec![self.identity_idx];
        while members.len() < p_part {
            // a p-element of the normalizer outside the current subgroup
            // always exists while the subgroup is not yet Sylow
            let normalizer = self.normalizer_set(&members);
            let mut in_set = vec![false; self.order()];
            for &m in &members {
                in_set[m as usize] = true;
            }
            let next = normalizer
                .iter()
                .copied()
                .find(|&g| {
                    !in_set[g as usize]
                        && self.order_of(g).rem_euclid(p) == 0
                        && is_p_power(self.order_of(g), p)
                })
                .expect("p-element in normalizer");
            let mut seed = members.clone();
            seed.push(next);
            members = self.subgroup_closure(&seed);
        }
        self.subgroup_as_group(&members)
    }

    /// Elements normalizing the given subgroup set.
    pub fn normalizer_set(&self, members: &[ElemIdx]) -> Vec<ElemIdx> {
        let mut in_set = vec![false; self.order()];
        for &m in members {
            in_set[m as usize] = true;
        }
        (0..self.order() as ElemIdx)
            .filter(|&g| {
                members
                    .iter()
                    .all(|&m| in_set[self.conj_idx(m, g) as usize])
            })
            .collect()
    }

    /// Permutation group on disjoint point sets with order |G|·|H|.
    pub fn direct_product(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let order = self
            .order()
            .checked_mul(other.order())
            .ok_or(Error::OrderCapExceeded(cap))?;
        if order > cap {
            return Err(Error::OrderCapExceeded(cap));
        }
        let degree = self.degree + other.degree;
        let mut elements = Vec::with_capacity(order);
        for a in self.elements() {
            for b in other.elements() {
                let mut images: Vec<Point> = a.images.to_vec();
                images.extend(b.images.iter().map(|&y| y + self.degree as Point));
                elements.push(Permutation::from_images(images)?);
            }
        }
        let mut gens = Vec::new();
        for a in self.generators() {
            let mut images: Vec<Point> = a.images.to_vec();
            images.extend((0..other.degree).map(|y| (y + self.degree) as Point));
            gens.push(Permutation::from_images(images)?);
        }
        for b in other.generators() {
            let mut images: Vec<Point> = (0..self.degree as Point).collect();
            images.extend(b.images.iter().map(|&y| y + self.degree as Point));
            gens.push(Permutation::from_images(images)?);
        }
        FiniteGroup::finish(degree, gens, elements)
    }

    /// Number of points moved by at least one element.
    pub fn support_size(&self) -> usize {
        let mut moved = vec![false; self.degree];
        for e in &self.elements {
            for x in e.support() {
                moved[x as usize] = true;
            }
        }
        moved.iter().filter(|&&m| m).count()
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(degree={}, order={})",
            self.degree,
            self.order()
        )
    }
}

/// A small generating subset picked greedily from a closed element list.
fn greedy_generators(elements: &[Permutation]) -> Vec<Permutation> {
    if elements.len() <= 1 {
        return Vec::new();
    }
    let degree = elements[0].degree();
    let target: std::collections::HashSet<&[Point]> =
        elements.iter().map(|e| e.images.as_ref()).collect();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: std::collections::HashSet<Box<[Point]>> = std::collections::HashSet::new();
    closure.insert(Permutation::identity(degree).images.clone());
    for e in elements {
        if closure.contains(&e.images) {
            continue;
        }
        gens.push(e.clone());
        // re-close under the enlarged generating set
        let mut list: Vec<Permutation> = closure
            .iter()
            .map(|im| Permutation { images: im.clone() })
            .collect();
        let mut cursor = 0;
        while cursor < list.len() {
            let cur = list[cursor].clone();
            for g in &gens {
                let next = cur.compose(g);
                if !closure.contains(&next.images) {
                    closure.insert(next.images.clone());
                    list.push(next);
                }
            }
            cursor += 1;
        }
        if closure.len() == target.len() {
            break;
        }
    }
    gens
}

/// Sorted-slice subset test.
pub fn is_subset(smaller: &[ElemIdx], larger: &[ElemIdx]) -> bool {
    let mut it = larger.iter();
    'outer: for &x in smaller {
        for &y in it.by_ref() {
            match y.cmp(&x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Distinct prime factors, ascending.
pub fn factor_primes(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

/// p-part of n.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// Minimal generator number of a Sylow p-subgroup P, as log_p |P : Φ(P)|.
///
/// Φ(P) is taken as the intersection of the maximal subgroups of P, read off
/// the subgroup lattice of P. Returns 0 when P is trivial.
pub fn d_p(group: &FiniteGroup, p: u64) -> Result<u32> {
    let sylow = group.sylow_subgroup(p)?;
    if sylow.is_trivial() {
        return Ok(0);
    }
    let lattice = crate::lattice::SubgroupLattice::build(&sylow)?;
    let mut phi = lattice.subgroups[lattice.top()].clone();
    for mi in lattice.maximal_indices() {
        phi = phi.intersect(&lattice.subgroups[mi], sylow.order());
    }
    let index = (sylow.order() / phi.order()) as u64;
    let mut d = 0u32;
    let mut rest = index;
    while rest % p == 0 {
        rest /= p;
        d += 1;
    }
    debug_assert_eq!(rest, 1, "Frattini index of a p-group is a p-power");
    Ok(d)
}

// ---------------------------------------------------------------------------
// named constructors
// ---------------------------------------------------------------------------

pub fn cyclic_group(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::BadConstructor("C(n) requires n >= 1".into()));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial(1));
    }
    let cycle: Vec<Point> = (0..n as Point).collect();
    FiniteGroup::from_generators(vec![Permutation::from_cycles(&[cycle], n)?], cap)
}

pub fn symmetric_group(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::BadConstructor("S(n) requires n >= 1".into()));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial(1));
    }
    let cycle: Vec<Point> = (0..n as Point).collect();
    let gens = vec![
        Permutation::from_cycles(&[cycle], n)?,
        Permutation::from_cycles(&[vec![0, 1]], n)?,
    ];
    FiniteGroup::from_generators(gens, cap)
}

pub fn alternating_group(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::BadConstructor("A(n) requires n >= 1".into()));
    }
    if n <= 2 {
        return Ok(FiniteGroup::trivial(n));
    }
    let mut gens = Vec::new();
    // 3-cycles (0 1 k) generate Alt(n)
    for k in 2..n {
        gens.push(Permutation::from_cycles(&[vec![0, 1, k as Point]], n)?);
    }
    FiniteGroup::from_generators(gens, cap)
}

/// Dihedral group of order `2m` acting on `m` points (m >= 3).
pub fn dihedral_group(order: usize, cap: usize) -> Result<FiniteGroup> {
    if order < 6 || order % 2 != 0 {
        return Err(Error::BadConstructor(
            "D(n) requires even order n >= 6".into(),
        ));
    }
    let m = order / 2;
    let rotation: Vec<Point> = (0..m as Point).collect();
    let reflection: Vec<Point> = (0..m as Point)
        .map(|x| ((m as Point) - x) % m as Point)
        .collect();
    let gens = vec![
        Permutation::from_cycles(&[rotation], m)?,
        Permutation::from_images(reflection)?,
    ];
    let g = FiniteGroup::from_generators(gens, cap)?;
    debug_assert_eq!(g.order(), order);
    Ok(g)
}

/// Quaternion group of order 8 in its regular action.
pub fn quaternion_group(cap: usize) -> Result<FiniteGroup> {
    // points 0..8 stand for 1, i, -1, -i, j, k, -j, -k
    let i = Permutation::from_cycles(&[vec![0, 1, 2, 3], vec![4, 5, 6, 7]], 8)?;
    let j = Permutation::from_cycles(&[vec![0, 4, 2, 6], vec![1, 7, 3, 5]], 8)?;
    let g = FiniteGroup::from_generators(vec![i, j], cap)?;
    debug_assert_eq!(g.order(), 8);
    Ok(g)
}

/// The supersoluble extremal group `(Π_{p∈π\{2}} C_p^d ⋊ C_2) × C_2^(d-1)`,
/// with the involution inverting every odd coordinate. Each C_p acts on p
/// points and the involution reverses each p-cycle block.
pub fn h_pi_d(pi: &[u64], d: usize, cap: usize) -> Result<FiniteGroup> {
    if !pi.contains(&2) {
        return Err(Error::BadConstructor("H(pi, d) requires 2 in pi".into()));
    }
    if d < 1 {
        return Err(Error::BadConstructor("H(pi, d) requires d >= 1".into()));
    }
    for &p in pi {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let mut odd: Vec<u64> = pi.iter().copied().filter(|&p| p != 2).collect();
    odd.sort_unstable();
    odd.dedup();
    let block_points: usize = odd.iter().map(|&p| p as usize).sum::<usize>() * d;
    let degree = block_points + 2 + 2 * (d - 1);
    let mut gens = Vec::new();
    let mut offset = 0usize;
    for &p in &odd {
        for _ in 0..d {
            let cycle: Vec<Point> = (offset..offset + p as usize).map(|x| x as Point).collect();
            gens.push(Permutation::from_cycles(&[cycle], degree)?);
            offset += p as usize;
        }
    }
    // the inverting involution: x -> -x on every block, plus its own 2 points
    let mut images: Vec<Point> = (0..degree as Point).collect();
    let mut block_start = 0usize;
    for &p in &odd {
        for _ in 0..d {
            let p = p as usize;
            for x in 0..p {
                images[block_start + x] = (block_start + (p - x) % p) as Point;
            }
            block_start += p;
        }
    }
    images.swap(block_points, block_points + 1);
    gens.push(Permutation::from_images(images)?);
    for k in 0..d - 1 {
        let a = (block_points + 2 + 2 * k) as Point;
        gens.push(Permutation::from_cycles(&[vec![a, a + 1]], degree)?);
    }
    FiniteGroup::from_generators(gens, cap)
}

/// Extremal permutation group of degree n: C_2^m for n = 2m, and
/// C_2^(m-1) × Sym(3) for n = 2m+1.
pub fn extremal_gn(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::BadConstructor("Gn(n) requires n >= 2".into()));
    }
    let m = n / 2;
    let pairs = if n % 2 == 0 { m } else { m - 1 };
    let mut gens = Vec::new();
    for k in 0..pairs {
        gens.push(Permutation::from_cycles(
            &[vec![2 * k as Point, 2 * k as Point + 1]],
            n,
        )?);
    }
    if n % 2 == 1 {
        let base = 2 * pairs as Point;
        gens.push(Permutation::from_cycles(
            &[vec![base, base + 1, base + 2]],
            n,
        )?);
        gens.push(Permutation::from_cycles(&[vec![base, base + 1]], n)?);
    }
    FiniteGroup::from_generators(gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_identity_and_three_cycle() {
        let id = Permutation::from_cycles(&[], 3).unwrap();
        assert!(id.is_identity());
        let c = Permutation::from_cycles(&[vec![0, 1, 2]], 3).unwrap();
        assert_eq!(c.order(), 3);
        let inv = Permutation::from_cycles(&[vec![0, 1], vec![2, 3]], 4).unwrap();
        assert_eq!(inv.order(), 2);
        assert_eq!(inv.support().count(), 4);
    }

    #[test]
    fn cycle_errors() {
        assert!(Permutation::from_cycles(&[vec![0, 3]], 3).is_err());
        assert!(Permutation::from_cycles(&[vec![0, 1, 0]], 3).is_err());
        assert!(Permutation::from_cycles(&[vec![0, 1], vec![1, 2]], 3).is_err());
    }

    #[test]
    fn compose_inverse_roundtrip() {
        let a = Permutation::from_cycles(&[vec![0, 1, 2, 3]], 5).unwrap();
        let b = Permutation::from_cycles(&[vec![2, 4]], 5).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        let ab = a.compose(&b);
        assert_eq!(ab.apply(1), 4); // 1 -> 2 -> 4
    }

    #[test]
    fn closure_sym3_and_trivial() {
        let g = symmetric_group(3, 100).unwrap();
        assert_eq!(g.order(), 6);
        let t = FiniteGroup::from_generators(vec![], 10).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.degree(), 1);
        let s4 = symmetric_group(4, 100).unwrap();
        assert_eq!(s4.order(), 24);
    }

    #[test]
    fn closure_respects_cap() {
        assert!(matches!(
            symmetric_group(5, 100),
            Err(Error::OrderCapExceeded(100))
        ));
    }

    #[test]
    fn mixed_degrees_rejected() {
        let gens = vec![
            Permutation::from_cycles(&[vec![0, 1]], 2).unwrap(),
            Permutation::from_cycles(&[vec![0, 1, 2]], 3).unwrap(),
        ];
        assert!(matches!(
            FiniteGroup::from_generators(gens, 100),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn non_subgroup_sets_rejected() {
        let s3 = symmetric_group(3, 100).unwrap();
        // identity plus one 3-cycle is not closed
        let three_cycle = s3
            .idx_of(&Permutation::from_cycles(&[vec![0, 1, 2]], 3).unwrap())
            .unwrap();
        let members = vec![s3.identity_idx(), three_cycle];
        assert!(matches!(
            s3.quotient_with_map(&members),
            Err(Error::NotASubgroup)
        ));
        assert!(FiniteGroup::trivial(1)
            .minimal_normal_subgroup_sets()
            .is_err());
    }

    #[test]
    fn table_closure_identity_inverses() {
        for g in [
            symmetric_group(4, 1000).unwrap(),
            dihedral_group(8, 1000).unwrap(),
            quaternion_group(1000).unwrap(),
        ] {
            let n = g.order() as ElemIdx;
            for i in 0..n {
                assert_eq!(g.mult_idx(i, g.inv_idx(i)), g.identity_idx());
                for j in 0..n {
                    let _ = g.mult_idx(i, j);
                }
            }
        }
    }

    #[test]
    fn named_groups() {
        assert_eq!(dihedral_group(8, 100).unwrap().degree(), 4);
        assert_eq!(alternating_group(5, 100).unwrap().order(), 60);
        let q8 = quaternion_group(100).unwrap();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        // only one involution in Q8
        let involutions = (0..8).filter(|&i| q8.order_of(i) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn h_pi_d_small() {
        let h = h_pi_d(&[2, 3], 1, 100).unwrap();
        assert_eq!(h.order(), 6);
        assert!(!h.is_abelian());
        assert_eq!(h.degree(), 5);
        let c2 = h_pi_d(&[2], 1, 100).unwrap();
        assert_eq!(c2.order(), 2);
        assert!(h_pi_d(&[3], 1, 100).is_err());
        assert!(h_pi_d(&[2, 4], 1, 100).is_err());
        assert!(h_pi_d(&[2, 3], 0, 100).is_err());
        let h232 = h_pi_d(&[2, 3], 2, 1000).unwrap();
        assert_eq!(h232.order(), 36);
    }

    #[test]
    fn extremal_groups() {
        let g8 = extremal_gn(8, 100).unwrap();
        assert_eq!(g8.order(), 16);
        assert_eq!(g8.degree(), 8);
        assert!(g8.is_abelian());
        let g9 = extremal_gn(9, 100).unwrap();
        assert_eq!(g9.order(), 48);
        assert!(!g9.is_abelian());
        let g3 = extremal_gn(3, 100).unwrap();
        assert_eq!(g3.order(), 6);
    }

    #[test]
    fn direct_product_orders() {
        let c2 = cyclic_group(2, 100).unwrap();
        let v = c2.direct_product(&c2, 100).unwrap();
        assert_eq!(v.order(), 4);
        assert!(v.elements().iter().all(|e| e.order() <= 2));
        let s3 = symmetric_group(3, 100).unwrap();
        assert_eq!(s3.direct_product(&c2, 100).unwrap().order(), 12);
        let d8 = dihedral_group(8, 100).unwrap();
        assert_eq!(d8.direct_product(&s3, 100).unwrap().order(), 48);
    }

    #[test]
    fn quotient_basics() {
        let s3 = symmetric_group(3, 100).unwrap();
        let a3: Vec<ElemIdx> = (0..6).filter(|&i| s3.elem(i).order() != 2).collect();
        let (q, _) = s3.quotient_with_map(&a3).unwrap();
        assert_eq!(q.order(), 2);
        let whole: Vec<ElemIdx> = (0..6).collect();
        let (q2, _) = s3.quotient_with_map(&whole).unwrap();
        assert_eq!(q2.order(), 1);
        // C_2 generated by a transposition is not normal in S3
        let c2 = s3.subgroup_closure(&[s3
            .idx_of(&Permutation::from_cycles(&[vec![0, 1]], 3).unwrap())
            .unwrap()]);
        assert!(matches!(s3.quotient_with_map(&c2), Err(Error::NotNormal)));
    }

    #[test]
    fn quotient_s4_by_v4() {
        let s4 = symmetric_group(4, 100).unwrap();
        let v4: Vec<ElemIdx> = (0..24)
            .filter(|&i| {
                let e = s4.elem(i);
                e.is_identity() || (e.order() == 2 && e.support().count() == 4)
            })
            .collect();
        assert_eq!(v4.len(), 4);
        let (q, proj) = s4.quotient_with_map(&v4).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        // exponent 6: orders 1, 2, 3 present
        let orders: std::collections::HashSet<u64> = (0..6).map(|i| q.order_of(i)).collect();
        assert_eq!(orders, [1u64, 2, 3].into_iter().collect());
        // projection preserves products
        for i in 0..24u16 {
            for j in 0..24u16 {
                assert_eq!(
                    proj[s4.mult_idx(i, j) as usize],
                    q.mult_idx(proj[i as usize], proj[j as usize])
                );
            }
        }
    }

    #[test]
    fn minimal_normals() {
        let s4 = symmetric_group(4, 100).unwrap();
        let mins = s4.minimal_normal_subgroups().unwrap();
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 4);

        let c2 = cyclic_group(2, 10).unwrap();
        let v = c2.direct_product(&c2, 10).unwrap();
        let mins = v.minimal_normal_subgroups().unwrap();
        assert_eq!(mins.len(), 3);
        assert!(mins.iter().all(|m| m.order() == 2));

        let a5 = alternating_group(5, 100).unwrap();
        let mins = a5.minimal_normal_subgroups().unwrap();
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 60);
    }

    #[test]
    fn sylow_orders() {
        let s4 = symmetric_group(4, 100).unwrap();
        let p2 = s4.sylow_subgroup(2).unwrap();
        assert_eq!(p2.order(), 8);
        assert!(!p2.is_abelian()); // dihedral
        let s3 = symmetric_group(3, 100).unwrap();
        assert_eq!(s3.sylow_subgroup(3).unwrap().order(), 3);
        assert_eq!(s3.sylow_subgroup(5).unwrap().order(), 1);
        assert!(s3.sylow_subgroup(4).is_err());
    }

    #[test]
    fn sylow_generator_numbers() {
        let s4 = symmetric_group(4, 100).unwrap();
        assert_eq!(d_p(&s4, 2).unwrap(), 2);
        assert_eq!(d_p(&s4, 3).unwrap(), 1);
        assert_eq!(d_p(&s4, 5).unwrap(), 0);
        let c2 = cyclic_group(2, 10).unwrap();
        let c8 = c2
            .direct_product(&c2, 10)
            .unwrap()
            .direct_product(&c2, 10)
            .unwrap();
        assert_eq!(d_p(&c8, 2).unwrap(), 3);
        let s3 = symmetric_group(3, 10).unwrap();
        assert_eq!(d_p(&s3, 3).unwrap(), 1);
        let q8 = quaternion_group(10).unwrap();
        assert_eq!(d_p(&q8, 2).unwrap(), 2);
        let c4 = cyclic_group(4, 10).unwrap();
        assert_eq!(d_p(&c4, 2).unwrap(), 1);
    }

    /// Exhaustive subset-search oracle for the minimal generator number of a
    /// p-group, independent of the Frattini-quotient route.
    #[test]
    fn d_p_matches_subset_search() {
        let specs: [&dyn Fn() -> FiniteGroup; 4] = [
            &|| dihedral_group(8, 100).unwrap(),
            &|| quaternion_group(100).unwrap(),
            &|| cyclic_group(8, 100).unwrap(),
            &|| {
                let c2 = cyclic_group(2, 10).unwrap();
                let c4 = cyclic_group(4, 10).unwrap();
                c4.direct_product(&c2, 100).unwrap()
            },
        ];
        for make in specs {
            let p_group = make();
            let n = p_group.order();
            assert!(n <= 16);
            let mut min_k = u32::MAX;
            for mask in 1u32..(1 << n) {
                if mask.count_ones() >= min_k {
                    continue;
                }
                let seed: Vec<ElemIdx> =
                    (0..n as ElemIdx).filter(|&i| mask >> i & 1 == 1).collect();
                if p_group.subgroup_closure(&seed).len() == n {
                    min_k = mask.count_ones();
                }
            }
            let p = factor_primes(n as u64)[0];
            assert_eq!(d_p(&p_group, p).unwrap(), min_k);
        }
    }

    #[test]
    fn derived_subgroups() {
        let s4 = symmetric_group(4, 100).unwrap();
        assert_eq!(s4.derived_subgroup_set().len(), 12);
        let a4 = alternating_group(4, 100).unwrap();
        assert_eq!(a4.derived_subgroup_set().len(), 4);
        let c6 = cyclic_group(6, 100).unwrap();
        assert_eq!(c6.derived_subgroup_set().len(), 1);
    }
}
