//! Finite posets, their associated undirected graphs, and the sum constructions.
//!
//! Elements are `0..n` throughout the library API; the JSON layer in [`crate::io`]
//! converts to and from the 1-based labels used in files.

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A strict partial order on `0..n`, stored transitively closed as dense rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// `up[a]` holds every `b` with `a < b`.
    up: Vec<BitSet>,
    /// `down[b]` holds every `a` with `a < b`.
    down: Vec<BitSet>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("lt", &self.relations().collect::<Vec<_>>())
            .finish()
    }
}

impl Poset {
    /// Transitive closure of `gens`; fails on a cycle or an out-of-range element.
    pub fn from_relations(n: usize, gens: &[(usize, usize)]) -> Result<Poset> {
        let mut up = vec![BitSet::new(n); n];
        for &(a, b) in gens {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::Range { element: x + 1, n });
                }
            }
            if a == b {
                return Err(Error::Cycle(a + 1));
            }
            up[a].insert(b);
        }
        // Warshall: after round k, up[i] contains every j reachable through 0..=k.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        if let Some(a) = (0..n).find(|&a| up[a].contains(a)) {
            return Err(Error::Cycle(a + 1));
        }
        Ok(Poset::from_closed_rows(up))
    }

    /// Builds from rows that are already irreflexive, antisymmetric and transitive.
    pub(crate) fn from_closed_rows(up: Vec<BitSet>) -> Poset {
        let n = up.len();
        let mut down = vec![BitSet::new(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }
        Poset { n, up, down }
    }

    pub fn chain(n: usize) -> Poset {
        let up = (0..n)
            .map(|a| BitSet::from_iter_with_capacity(n, a + 1..n))
            .collect();
        Poset::from_closed_rows(up)
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_closed_rows(vec![BitSet::new(n); n])
    }

    /// Cartesian product with the componentwise order; element `(i, j)` is `i * q.n() + j`.
    pub fn product(p: &Poset, q: &Poset) -> Poset {
        let n = p.n * q.n;
        let mut up = vec![BitSet::new(n); n];
        for i in 0..p.n {
            for j in 0..q.n {
                for k in 0..p.n {
                    for l in 0..q.n {
                        let le_first = i == k || p.lt(i, k);
                        let le_second = j == l || q.lt(j, l);
                        if le_first && le_second && (i, j) != (k, l) {
                            up[i * q.n + j].insert(k * q.n + l);
                        }
                    }
                }
            }
        }
        Poset::from_closed_rows(up)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    pub fn above(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    pub fn below(&self, b: usize) -> &BitSet {
        &self.down[b]
    }

    /// All pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    pub fn relation_count(&self) -> usize {
        self.up.iter().map(BitSet::len).sum()
    }

    pub fn is_chain(&self) -> bool {
        self.relation_count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_antichain(&self) -> bool {
        self.relation_count() == 0
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&b| self.down[b].is_empty()).collect()
    }

    pub fn comparability_graph(&self) -> UndirectedGraph {
        let adj = (0..self.n)
            .map(|a| {
                let mut row = self.up[a].clone();
                row.union_with(&self.down[a]);
                row
            })
            .collect();
        UndirectedGraph { n: self.n, adj }
    }

    pub fn incomparability_graph(&self) -> UndirectedGraph {
        self.comparability_graph().complement()
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn hasse_covers(&self) -> Vec<(usize, usize)> {
        self.relations()
            .filter(|&(a, b)| self.up[a].is_disjoint(&self.down[b]))
            .collect()
    }

    pub fn dual(&self) -> Poset {
        Poset::from_closed_rows(self.down.clone())
    }

    /// The induced subposet on `elements`, relabelled `0..elements.len()` in the given order.
    pub fn restrict(&self, elements: &[usize]) -> Poset {
        let k = elements.len();
        let up = elements
            .iter()
            .map(|&a| {
                BitSet::from_iter_with_capacity(
                    k,
                    elements
                        .iter()
                        .enumerate()
                        .filter(|&(_, &b)| self.lt(a, b))
                        .map(|(j, _)| j),
                )
            })
            .collect();
        Poset::from_closed_rows(up)
    }

    /// Renames element `a` to `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n);
        let mut up = vec![BitSet::new(self.n); self.n];
        for (a, b) in self.relations() {
            up[perm[a]].insert(perm[b]);
        }
        Poset::from_closed_rows(up)
    }

    pub fn disjoint_sum(p: &Poset, q: &Poset) -> Poset {
        Poset::lexicographic_sum(&Poset::antichain(2), &[p.clone(), q.clone()])
            .expect("two parts over a two-element skeleton")
    }

    pub fn ordinal_sum(p: &Poset, q: &Poset) -> Poset {
        Poset::lexicographic_sum(&Poset::chain(2), &[p.clone(), q.clone()])
            .expect("two parts over a two-element skeleton")
    }

    /// Substitutes `parts[s]` for element `s` of `skeleton`. The result is relabelled
    /// consecutively part by part in index order.
    pub fn lexicographic_sum(skeleton: &Poset, parts: &[Poset]) -> Result<Poset> {
        if parts.len() != skeleton.n {
            return Err(Error::Arity {
                expected: skeleton.n,
                got: parts.len(),
            });
        }
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.n;
                Some(start)
            })
            .collect();
        let n: usize = parts.iter().map(Poset::n).sum();
        let mut up = vec![BitSet::new(n); n];
        for (s, part) in parts.iter().enumerate() {
            for x in 0..part.n {
                let row = &mut up[offsets[s] + x];
                for y in part.up[x].iter() {
                    row.insert(offsets[s] + y);
                }
                for t in skeleton.up[s].iter() {
                    for y in 0..parts[t].n {
                        row.insert(offsets[t] + y);
                    }
                }
            }
        }
        Ok(Poset::from_closed_rows(up))
    }
}

/// A simple undirected graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<BitSet>,
}

impl std::fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UndirectedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<UndirectedGraph> {
        let mut g = UndirectedGraph::empty(n);
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::Range { element: x + 1, n });
                }
            }
            if a == b {
                return Err(Error::Parse(format!("loop at vertex {}", a + 1)));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> UndirectedGraph {
        UndirectedGraph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> UndirectedGraph {
        UndirectedGraph::empty(n).complement()
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as canonical pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::len).sum::<usize>() / 2
    }

    pub fn complement(&self) -> UndirectedGraph {
        let adj = (0..self.n)
            .map(|a| {
                let mut row = BitSet::full(self.n);
                row.difference_with(&self.adj[a]);
                row.remove(a);
                row
            })
            .collect();
        UndirectedGraph { n: self.n, adj }
    }

    /// Induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.adj[v].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(p: &Poset) -> Vec<(usize, usize)> {
        p.relations().map(|(a, b)| (a + 1, b + 1)).collect()
    }

    #[test]
    fn chain_closure() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(pairs(&p), vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(p, Poset::chain(3));
    }

    #[test]
    fn two_cycle_rejected() {
        assert_eq!(
            Poset::from_relations(3, &[(0, 1), (1, 0)]),
            Err(Error::Cycle(1))
        );
        assert!(matches!(
            Poset::from_relations(2, &[(1, 1)]),
            Err(Error::Cycle(2))
        ));
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Poset::from_relations(2, &[(0, 2)]),
            Err(Error::Range { element: 3, n: 2 })
        );
    }

    #[test]
    fn descending_chain_has_all_ten_pairs() {
        let p = Poset::from_relations(5, &[(4, 3), (3, 2), (2, 1), (1, 0)]).unwrap();
        assert_eq!(p.relation_count(), 10);
        assert!(p.relations().all(|(a, b)| a > b));
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(Poset::chain(0).n(), 0);
        assert!(Poset::antichain(4).is_antichain());
        assert_eq!(pairs(&Poset::chain(3)), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn associated_graphs_of_a_chain() {
        let c = Poset::chain(4);
        assert_eq!(c.comparability_graph(), UndirectedGraph::complete(4));
        assert_eq!(c.incomparability_graph().edge_count(), 0);
        assert_eq!(c.hasse_covers(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(Poset::antichain(5).hasse_covers().is_empty());
    }

    #[test]
    fn antichain_graphs() {
        let a = Poset::antichain(3);
        assert_eq!(a.comparability_graph().edge_count(), 0);
        assert_eq!(a.incomparability_graph(), UndirectedGraph::complete(3));
    }

    #[test]
    fn comparability_of_reverse_edge_example() {
        // gens {1<4, 2<4, 4<5}; 3 is isolated
        let p = Poset::from_relations(5, &[(0, 3), (1, 3), (3, 4)]).unwrap();
        let edges: Vec<_> = p
            .comparability_graph()
            .edges()
            .map(|(a, b)| (a + 1, b + 1))
            .collect();
        assert_eq!(edges, vec![(1, 4), (1, 5), (2, 4), (2, 5), (4, 5)]);
    }

    #[test]
    fn complement_small_cases() {
        assert_eq!(UndirectedGraph::complete(3).complement().edge_count(), 0);
        assert_eq!(UndirectedGraph::empty(2).complement().edge_count(), 1);
    }

    #[test]
    fn sums() {
        assert_eq!(
            Poset::disjoint_sum(&Poset::chain(1), &Poset::chain(1)),
            Poset::antichain(2)
        );
        assert_eq!(
            Poset::ordinal_sum(&Poset::chain(2), &Poset::chain(3)),
            Poset::chain(5)
        );
        assert!(matches!(
            Poset::lexicographic_sum(&Poset::chain(2), &[Poset::chain(1)]),
            Err(Error::Arity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn lexicographic_sum_over_antichain_of_chains() {
        let p = Poset::lexicographic_sum(&Poset::antichain(2), &[Poset::chain(2), Poset::chain(2)])
            .unwrap();
        assert_eq!(pairs(&p), vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn dual_reverses() {
        assert_eq!(pairs(&Poset::chain(3).dual()), vec![(2, 1), (3, 1), (3, 2)]);
        assert_eq!(Poset::antichain(4).dual(), Poset::antichain(4));
    }

    #[test]
    fn product_two_by_two() {
        let p = Poset::product(&Poset::chain(2), &Poset::chain(2));
        // (0,0) < (0,1),(1,0) < (1,1)
        assert_eq!(p.relation_count(), 5);
        assert!(!p.comparable(1, 2));
    }

    #[test]
    fn components_and_induced() {
        let g = UndirectedGraph::new(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        let h = g.induced(&[4, 3, 0]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
