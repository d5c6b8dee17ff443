//! Permutations with constrained inversion sets, reverse-edge digraphs `A_n(R)`,
//! their edge-induced transitive tournaments `C_n(R)`, and the poset `P_n(R)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::counting::{le_dp, next_permutation, Count};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Checks that `perm` is a permutation of `0..perm.len()`.
pub fn check_permutation(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &x in perm {
        if x >= n || seen[x] {
            return Err(Error::NotPermutation(n));
        }
        seen[x] = true;
    }
    Ok(())
}

/// All pairs `(perm[i], perm[j])` with `i < j` and `perm[i] > perm[j]`, sorted.
pub fn inversion_set(perm: &[usize]) -> Result<Vec<(usize, usize)>> {
    check_permutation(perm)?;
    let mut out = Vec::new();
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                out.push((perm[i], perm[j]));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// A set of descending pairs `(i, j)`, `i > j`, on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReverseEdgeSet {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl ReverseEdgeSet {
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<ReverseEdgeSet> {
        let mut set = BTreeSet::new();
        for &(i, j) in pairs {
            for x in [i, j] {
                if x >= n {
                    return Err(Error::Range { element: x + 1, n });
                }
            }
            if i <= j {
                return Err(Error::Parse(format!(
                    "reverse pair ({}, {}) is not descending",
                    i + 1,
                    j + 1
                )));
            }
            set.insert((i, j));
        }
        Ok(ReverseEdgeSet { n, pairs: set })
    }

    pub fn empty(n: usize) -> ReverseEdgeSet {
        ReverseEdgeSet {
            n,
            pairs: BTreeSet::new(),
        }
    }

    /// `R_n`, every descending pair.
    pub fn full(n: usize) -> ReverseEdgeSet {
        ReverseEdgeSet {
            n,
            pairs: all_reverse_pairs(n).into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn is_subset(&self, other: &ReverseEdgeSet) -> bool {
        self.n == other.n && self.pairs.is_subset(&other.pairs)
    }
}

/// `R_n` in lexicographic order.
pub fn all_reverse_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .collect()
}

/// A loop-free digraph on `0..n`; reciprocal pairs are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        let mut g = Digraph::empty(n);
        for &(a, b) in arcs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::Range { element: x + 1, n });
                }
            }
            if a == b {
                return Err(Error::Parse(format!("loop at vertex {}", a + 1)));
            }
            g.out[a].insert(b);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Digraph {
        Digraph {
            n,
            out: vec![BitSet::new(n); n],
        }
    }

    pub(crate) fn add_arc(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.out[a].insert(b);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(b)
    }

    pub fn out_neighbors(&self, a: usize) -> &BitSet {
        &self.out[a]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.out[a].iter().map(move |b| (a, b)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BitSet::len).sum()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// Sub-digraph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut g = Digraph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if self.has_arc(a, b) {
                    g.out[i].insert(j);
                }
            }
        }
        g
    }

    /// Exactly one arc between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.has_arc(a, b) != self.has_arc(b, a)))
    }

    /// Kahn's algorithm: repeatedly remove a vertex with no remaining in-arcs.
    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.n];
        for (_, b) in self.arcs() {
            indegree[b] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for w in self.out[v].iter() {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    stack.push(w);
                }
            }
        }
        removed == self.n
    }

    /// `a -> b -> c` always implies `a -> c`.
    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|a| {
            self.out[a]
                .iter()
                .all(|b| self.out[b].iter().all(|c| c == a || self.has_arc(a, c)))
        })
    }

    /// Same out- and in-neighbours for every vertex outside `set`.
    pub fn is_module(&self, set: &[usize]) -> bool {
        let Some(&first) = set.first() else {
            return false;
        };
        let inside = BitSet::from_iter_with_capacity(self.n, set.iter().copied());
        (0..self.n).filter(|v| !inside.contains(*v)).all(|v| {
            let to = self.has_arc(v, first);
            let from = self.has_arc(first, v);
            set.iter()
                .all(|&s| self.has_arc(v, s) == to && self.has_arc(s, v) == from)
        })
    }
}

/// `T_n`: arcs `i -> j` for all `i < j`.
pub fn transitive_tournament(n: usize) -> Digraph {
    let mut g = Digraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            g.add_arc(i, j);
        }
    }
    g
}

/// `A_n(R)`: `T_n` plus the reverse arcs of `R`.
pub fn reverse_edge_digraph(r: &ReverseEdgeSet) -> Digraph {
    let mut g = transitive_tournament(r.n());
    for (i, j) in r.pairs() {
        g.add_arc(i, j);
    }
    g
}

/// Permutations whose inversion set lies inside `R`, by filtering all `n!`.
pub fn count_inversion_constrained(r: &ReverseEdgeSet, limit: usize) -> Result<Count> {
    let n = r.n();
    if n > limit {
        return Err(Error::Size(format!(
            "permutation filtering is limited to {limit} elements, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: u64 = 0;
    loop {
        let ok = (0..n).all(|i| (i + 1..n).all(|j| perm[i] < perm[j] || r.contains(perm[i], perm[j])));
        if ok {
            total += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(BigUint::from(total))
}

/// Number of tournaments obtained by keeping exactly one arc of every pair that
/// are acyclic. Only reciprocal pairs offer a choice; a pair with no arc makes
/// the count 0.
pub fn count_transitive_subtournaments(g: &Digraph, limit: usize) -> Result<Count> {
    let n = g.n();
    let mut forced_in = vec![0u64; n];
    let mut reciprocal = Vec::new();
    if n > 64 {
        return Err(Error::Size(format!("tournament counting is limited to 64 vertices, got {n}")));
    }
    for a in 0..n {
        for b in a + 1..n {
            match (g.has_arc(a, b), g.has_arc(b, a)) {
                (false, false) => return Ok(BigUint::from(0u32)),
                (true, true) => reciprocal.push((a, b)),
                (true, false) => forced_in[b] |= 1 << a,
                (false, true) => forced_in[a] |= 1 << b,
            }
        }
    }
    let r = reciprocal.len();
    if r > limit {
        return Err(Error::Size(format!(
            "{r} reciprocal pairs exceed the limit of {limit}"
        )));
    }
    let total: u64 = 1u64 << r;
    let chunk = (total / 64).max(1);
    let count: u64 = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut inc = forced_in.clone();
            let mut hits = 0u64;
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                inc.copy_from_slice(&forced_in);
                for (k, &(a, b)) in reciprocal.iter().enumerate() {
                    if mask >> k & 1 == 0 {
                        inc[b] |= 1 << a;
                    } else {
                        inc[a] |= 1 << b;
                    }
                }
                if acyclic_by_masks(&inc) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Kahn's algorithm on in-neighbour masks.
fn acyclic_by_masks(incoming: &[u64]) -> bool {
    let n = incoming.len();
    let mut remaining: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    while remaining != 0 {
        let mut sources = 0u64;
        let mut rest = remaining;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if incoming[v] & remaining == 0 {
                sources |= 1 << v;
            }
        }
        if sources == 0 {
            return false;
        }
        remaining &= !sources;
    }
    true
}

/// `P_n(R)`: the closure of `i < j` for every `i < j` with `(j, i)` not in `R`.
pub fn poset_from_reverse_edges(r: &ReverseEdgeSet) -> Poset {
    let n = r.n();
    let gens: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !r.contains(j, i))
        .collect();
    Poset::from_relations(n, &gens).expect("increasing generators are acyclic")
}

/// The vertex sequence of the unique Hamiltonian path of an acyclic tournament.
pub fn hamiltonian_permutation(t: &Digraph) -> Result<Vec<usize>> {
    if !t.is_tournament() {
        return Err(Error::NotTournament(
            "every pair of vertices needs exactly one arc".into(),
        ));
    }
    if !t.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let mut order: Vec<usize> = (0..t.n()).collect();
    // In an acyclic tournament the out-degrees are n-1, n-2, ..., 0 along the path.
    order.sort_by_key(|&v| std::cmp::Reverse(t.out_degree(v)));
    Ok(order)
}

/// Inverse of [`hamiltonian_permutation`]: arcs `perm[i] -> perm[j]` for `i < j`.
pub fn tournament_from_permutation(perm: &[usize]) -> Result<Digraph> {
    check_permutation(perm)?;
    let mut g = Digraph::empty(perm.len());
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            g.add_arc(perm[i], perm[j]);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWay {
    pub linear_extensions: Count,
    pub tournaments: Count,
    pub permutations: Count,
}

impl ThreeWay {
    pub fn common(&self) -> &Count {
        &self.linear_extensions
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivLimits {
    pub dp: usize,
    pub permutations: usize,
    pub reciprocal: usize,
}

impl Default for EquivLimits {
    fn default() -> Self {
        EquivLimits {
            dp: 20,
            permutations: 10,
            reciprocal: 24,
        }
    }
}

/// Computes `LE(P_n(R))`, `C_n(R)` and the inversion-constrained permutation count
/// independently and checks that they agree.
pub fn verify_three_way(r: &ReverseEdgeSet, limits: EquivLimits) -> Result<ThreeWay> {
    let report = three_way_counts(r, limits)?;
    if report.linear_extensions != report.tournaments || report.tournaments != report.permutations {
        return Err(Error::Mismatch(format!(
            "LE = {}, C_n = {}, permutations = {}",
            report.linear_extensions, report.tournaments, report.permutations
        )));
    }
    Ok(report)
}

/// The three counts without the equality check.
pub fn three_way_counts(r: &ReverseEdgeSet, limits: EquivLimits) -> Result<ThreeWay> {
    Ok(ThreeWay {
        linear_extensions: le_dp(&poset_from_reverse_edges(r), limits.dp)?,
        tournaments: count_transitive_subtournaments(&reverse_edge_digraph(r), limits.reciprocal)?,
        permutations: count_inversion_constrained(r, limits.permutations)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rev(n: usize, pairs: &[(usize, usize)]) -> ReverseEdgeSet {
        let zero: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        ReverseEdgeSet::new(n, &zero).unwrap()
    }

    fn big(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn inversions() {
        // 13425
        assert_eq!(inversion_set(&[0, 2, 3, 1, 4]).unwrap(), vec![(2, 1), (3, 1)]);
        assert!(inversion_set(&[0, 1, 2]).unwrap().is_empty());
        assert_eq!(inversion_set(&[3, 2, 1, 0]).unwrap().len(), 6);
        assert_eq!(inversion_set(&[0, 0]), Err(Error::NotPermutation(2)));
    }

    #[test]
    fn reverse_set_validation() {
        assert!(matches!(ReverseEdgeSet::new(3, &[(0, 1)]), Err(Error::Parse(_))));
        assert!(matches!(ReverseEdgeSet::new(3, &[(3, 1)]), Err(Error::Range { .. })));
        assert_eq!(ReverseEdgeSet::full(4).len(), 6);
    }

    #[test]
    fn small_tournament_counts() {
        let c = |r: &ReverseEdgeSet| count_transitive_subtournaments(&reverse_edge_digraph(r), 24).unwrap();
        assert_eq!(c(&ReverseEdgeSet::empty(2)), big(1));
        assert_eq!(c(&rev(2, &[(2, 1)])), big(2));
        assert_eq!(c(&rev(3, &[(2, 1)])), big(2));
        assert_eq!(c(&rev(3, &[(3, 1)])), big(1));
        let missing = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(count_transitive_subtournaments(&missing, 24).unwrap(), big(0));
    }

    #[test]
    fn digraph_constructions() {
        assert_eq!(transitive_tournament(2).arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(transitive_tournament(0).arc_count(), 0);
        assert_eq!(transitive_tournament(4).arc_count(), 6);
        let a = reverse_edge_digraph(&rev(2, &[(2, 1)]));
        assert_eq!(a.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(reverse_edge_digraph(&ReverseEdgeSet::empty(5)), transitive_tournament(5));
    }

    #[test]
    fn reverse_posets() {
        assert_eq!(poset_from_reverse_edges(&ReverseEdgeSet::empty(4)), Poset::chain(4));
        let p = poset_from_reverse_edges(&rev(3, &[(2, 1)]));
        assert_eq!(p.relations().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        let fig6 = rev(5, &[(2, 1), (3, 1), (3, 2), (4, 3), (5, 3)]);
        let p = poset_from_reverse_edges(&fig6);
        assert_eq!(
            p.relations().collect::<Vec<_>>(),
            vec![(0, 3), (0, 4), (1, 3), (1, 4), (3, 4)]
        );
        let three = verify_three_way(&fig6, EquivLimits::default()).unwrap();
        assert_eq!(three.common(), &big(10));
    }

    #[test]
    fn hamiltonian_paths() {
        assert_eq!(hamiltonian_permutation(&transitive_tournament(4)).unwrap(), vec![0, 1, 2, 3]);
        let t = tournament_from_permutation(&[0, 2, 3, 1]).unwrap();
        assert_eq!(hamiltonian_permutation(&t).unwrap(), vec![0, 2, 3, 1]);
        let cyclic = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(hamiltonian_permutation(&cyclic), Err(Error::Cyclic));
        let partial = Digraph::new(3, &[(0, 1)]).unwrap();
        assert!(matches!(hamiltonian_permutation(&partial), Err(Error::NotTournament(_))));
    }

    #[test]
    fn permutation_filter_extremes() {
        assert_eq!(count_inversion_constrained(&ReverseEdgeSet::empty(6), 10).unwrap(), big(1));
        assert_eq!(count_inversion_constrained(&ReverseEdgeSet::full(5), 10).unwrap(), big(120));
        assert!(matches!(
            count_inversion_constrained(&ReverseEdgeSet::empty(11), 10),
            Err(Error::Size(_))
        ));
    }
}
