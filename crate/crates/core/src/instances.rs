//! Generators for test and benchmark instances: random posets, posets with a
//! prescribed incomparability skeleton, and exhaustive small families.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::poset::{Poset, UndirectedGraph};

/// Random poset: each pair `i < j` of a hidden order is related with probability
/// `density` before closure; labels are then shuffled.
pub fn random_poset<R: Rng>(n: usize, density: f64, rng: &mut R) -> Poset {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                gens.push((i, j));
            }
        }
    }
    let p = Poset::from_relations(n, &gens).expect("increasing generators");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    p.relabel(&perm)
}

/// Positive parts summing to `total`, uniformly among compositions.
pub fn random_composition<R: Rng>(total: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    assert!(parts >= 1 && total >= parts);
    let mut cuts: Vec<usize> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// How the even position `M_{2d}` of a joined skeleton relates to its neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvenKind {
    Empty,
    Incomparable,
    Comparable,
}

impl EvenKind {
    pub const ALL: [EvenKind; 3] = [EvenKind::Empty, EvenKind::Incomparable, EvenKind::Comparable];
}

/// Incomparability skeleton of a joined structure. Returns the quotient graph on
/// the non-empty positions and, for each of the `2D + 1` positions, its vertex.
pub fn joined_skeleton(evens: &[EvenKind]) -> (UndirectedGraph, Vec<Option<usize>>) {
    let depth = evens.len();
    let mut slots: Vec<Option<usize>> = Vec::with_capacity(2 * depth + 1);
    let mut k = 0;
    for pos in 0..=2 * depth {
        let present = pos % 2 == 0 || evens[pos / 2] != EvenKind::Empty;
        slots.push(present.then(|| {
            k += 1;
            k - 1
        }));
    }
    let mut edges = Vec::new();
    for d in 1..=depth {
        let prev = slots[2 * d - 2].expect("odd");
        let next = slots[2 * d].expect("odd");
        edges.push((prev, next));
        if let Some(e) = slots[2 * d - 1] {
            edges.push((prev, e));
            if evens[d - 1] == EvenKind::Incomparable {
                edges.push((e, next));
            }
        }
    }
    (UndirectedGraph::new(k, &edges).expect("valid edges"), slots)
}

pub fn path_skeleton(k: usize) -> UndirectedGraph {
    let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    UndirectedGraph::new(k, &edges).expect("valid edges")
}

/// Centre 0 joined to `leaves` independent vertices.
pub fn star_skeleton(leaves: usize) -> UndirectedGraph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
    UndirectedGraph::new(leaves + 1, &edges).expect("valid edges")
}

/// Backtracking over orientations of `free` edges on top of the strict order
/// `fixed`, keeping every triple consistent with a strict partial order whose
/// comparability graph is exactly `fixed`'s pairs plus `free`.
struct Orienter {
    n: usize,
    /// `dir[a][b]`: 1 if `a < b`, -1 if `b < a`, 0 if undecided or incomparable.
    dir: Vec<Vec<i8>>,
    comparable: Vec<Vec<bool>>,
    free: Vec<(usize, usize)>,
}

impl Orienter {
    fn new(fixed: &Poset, free: &[(usize, usize)]) -> Orienter {
        let n = fixed.n();
        let mut dir = vec![vec![0i8; n]; n];
        let mut comparable = vec![vec![false; n]; n];
        for (a, b) in fixed.relations() {
            dir[a][b] = 1;
            dir[b][a] = -1;
            comparable[a][b] = true;
            comparable[b][a] = true;
        }
        for &(a, b) in free {
            comparable[a][b] = true;
            comparable[b][a] = true;
        }
        Orienter {
            n,
            dir,
            comparable,
            free: free.to_vec(),
        }
    }

    /// Whether `u < v` can be added without breaking a decided triple.
    fn allowed(&self, u: usize, v: usize) -> bool {
        (0..self.n).all(|w| {
            if w == u || w == v {
                return true;
            }
            // u < v < w needs u < w possible.
            if self.dir[v][w] == 1 && (!self.comparable[u][w] || self.dir[u][w] == -1) {
                return false;
            }
            // w < u < v needs w < v possible.
            if self.dir[w][u] == 1 && (!self.comparable[w][v] || self.dir[w][v] == -1) {
                return false;
            }
            true
        })
    }

    fn set(&mut self, u: usize, v: usize, value: i8) {
        self.dir[u][v] = value;
        self.dir[v][u] = -value;
    }

    fn poset(&self) -> Poset {
        let gens: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.dir[a][b] == 1)
            .collect();
        Poset::from_relations(self.n, &gens).expect("consistent orientation")
    }

    /// Visits every completion; `visit` returns false to stop. `choose` orders the
    /// two directions of each edge.
    fn run(&mut self, k: usize, choose: &mut dyn FnMut() -> bool, visit: &mut dyn FnMut(Poset) -> bool) -> bool {
        if k == self.free.len() {
            return visit(self.poset());
        }
        let (a, b) = self.free[k];
        let order = if choose() { [(a, b), (b, a)] } else { [(b, a), (a, b)] };
        for (u, v) in order {
            if self.allowed(u, v) {
                self.set(u, v, 1);
                let go_on = self.run(k + 1, choose, visit);
                self.set(u, v, 0);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

/// Every strict partial order that restricts to `fixed` on its relations and whose
/// remaining comparable pairs are exactly `free`.
pub fn for_each_orientation(fixed: &Poset, free: &[(usize, usize)], mut visit: impl FnMut(Poset)) {
    let mut o = Orienter::new(fixed, free);
    o.run(0, &mut || true, &mut |p| {
        visit(p);
        true
    });
}

/// A random transitive orientation of `g`, if one exists.
pub fn random_transitive_orientation<R: Rng>(g: &UndirectedGraph, rng: &mut R) -> Option<Poset> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.shuffle(rng);
    let mut o = Orienter::new(&Poset::antichain(g.n()), &edges);
    let mut found = None;
    o.run(0, &mut || rng.gen_bool(0.5), &mut |p| {
        found = Some(p);
        false
    });
    found
}

/// Orientation of `g` along vertex indices, if transitive.
pub fn index_orientation(g: &UndirectedGraph) -> Option<Poset> {
    let p = Poset::from_relations(g.n(), &g.edges().collect::<Vec<_>>()).ok()?;
    (p.comparability_graph() == *g).then_some(p)
}

/// A poset whose incomparability graph has `q` as the skeleton of the consecutive
/// blocks of the given sizes. Module posets are random; the cross-block order is a
/// transitive orientation of the complement of `q` (random, or by index).
#[derive(Clone, Debug)]
pub struct SkeletonInstance {
    pub poset: Poset,
    /// Blocks in quotient-vertex order.
    pub blocks: Vec<Vec<usize>>,
}

pub fn random_instance<R: Rng>(
    q: &UndirectedGraph,
    sizes: &[usize],
    by_index: bool,
    rng: &mut R,
) -> Option<SkeletonInstance> {
    assert_eq!(q.n(), sizes.len());
    let cg = q.complement();
    let skeleton = if by_index {
        index_orientation(&cg)?
    } else {
        random_transitive_orientation(&cg, rng)?
    };
    let parts: Vec<Poset> = sizes
        .iter()
        .map(|&m| {
            let density = rng.gen_range(0.0..1.0);
            random_poset(m, density, rng)
        })
        .collect();
    let p = Poset::lexicographic_sum(&skeleton, &parts).expect("arity matches");
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &m in sizes {
        blocks.push((offset..offset + m).collect::<Vec<usize>>());
        offset += m;
    }
    if by_index {
        return Some(SkeletonInstance { poset: p, blocks });
    }
    let mut perm: Vec<usize> = (0..offset).collect();
    perm.shuffle(rng);
    let blocks = blocks
        .into_iter()
        .map(|b| {
            let mut b: Vec<usize> = b.into_iter().map(|x| perm[x]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    Some(SkeletonInstance {
        poset: p.relabel(&perm),
        blocks,
    })
}

fn canonical_form(p: &Poset) -> Vec<(usize, usize)> {
    let n = p.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut rel: Vec<(usize, usize)> = p.relations().map(|(a, b)| (perm[a], perm[b])).collect();
        rel.sort_unstable();
        if best.as_ref().is_none_or(|b| rel < *b) {
            best = Some(rel);
        }
        if !crate::counting::next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

/// One representative of every isomorphism class of posets on `n` elements.
/// Intended for `n <= 6`.
pub fn posets_up_to_isomorphism(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut closed: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let gens: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let p = Poset::from_relations(n, &gens).expect("increasing generators");
        closed.insert(p.relations().collect());
    }
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut out = Vec::new();
    for rel in closed {
        let p = Poset::from_relations(n, &rel).expect("closed");
        if seen.insert(canonical_form(&p)) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn isomorphism_class_counts() {
        // Unlabelled posets on 0..=5 elements.
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn orientations_of_small_graphs() {
        let mut k3 = 0;
        for_each_orientation(&Poset::antichain(3), &UndirectedGraph::complete(3).edges().collect::<Vec<_>>(), |_| k3 += 1);
        assert_eq!(k3, 6);
        // Path a-b-c: orientations a<b>c, a>b<c, and never a chain (a, c incomparable).
        let mut path = 0;
        for_each_orientation(&Poset::antichain(3), &[(0, 1), (1, 2)], |p| {
            assert!(!p.comparable(0, 2));
            path += 1;
        });
        assert_eq!(path, 2);
        let c4 = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let p = random_transitive_orientation(&c4, &mut rng).unwrap();
        assert_eq!(p.comparability_graph(), c4);
        let c5 = UndirectedGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(random_transitive_orientation(&c5, &mut rng).is_none());
    }

    #[test]
    fn skeleton_instances_have_the_requested_quotient() {
        let mut rng = StdRng::seed_from_u64(7);
        let (q, _) = joined_skeleton(&[EvenKind::Incomparable, EvenKind::Empty, EvenKind::Comparable]);
        for by_index in [false, true] {
            let inst = random_instance(&q, &[1, 2, 1, 2, 1, 1], by_index, &mut rng).unwrap();
            let ig = inst.poset.incomparability_graph();
            let sk = crate::modular::skeleton_of(&ig, &inst.blocks).unwrap();
            assert_eq!(sk.quotient, q);
        }
        let parts = random_composition(9, 4, &mut rng);
        assert_eq!(parts.iter().sum::<usize>(), 9);
        assert!(parts.iter().all(|&m| m >= 1));
    }
}
