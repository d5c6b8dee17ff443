#![allow(dead_code)]

use std::collections::BTreeSet;

use linext::counting::Strategy;
use linext::instances::{
    joined_skeleton, path_skeleton, random_composition, random_instance,
    random_transitive_orientation, star_skeleton, EvenKind,
};
use linext::poset::{Poset, UndirectedGraph};
use rand::Rng;

/// Builds a poset from 1-based generating pairs `a < b`.
pub fn poset1(n: usize, rel: &[(usize, usize)]) -> Poset {
    let gens: Vec<(usize, usize)> = rel.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Poset::from_relations(n, &gens).unwrap()
}

pub fn blocks1(blocks: &[&[usize]]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|x| x - 1).collect())
        .collect()
}

/// A diamond on {11..14} beside a poset on {1..10}; star skeleton with centre
/// {11..14} and leaves {1..5}, {6..10}.
pub fn star_example() -> Poset {
    poset1(
        14,
        &[
            (1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8), (6, 9),
            (7, 10), (8, 10), (9, 10), (11, 12), (11, 13), (12, 14), (13, 14),
        ],
    )
}

pub fn path_example() -> (Poset, Vec<Vec<usize>>) {
    let p = poset1(
        10,
        &[
            (6, 4), (6, 5), (4, 2), (5, 2), (5, 3), (4, 3), (2, 1), (3, 1), (9, 8),
            (10, 8), (8, 7), (4, 8), (5, 8), (9, 1), (10, 1),
        ],
    );
    let blocks = blocks1(&[&[4, 5, 6], &[9, 10], &[2, 3], &[7, 8], &[1]]);
    (p, blocks)
}

pub fn necklace_example() -> (Poset, Vec<Vec<usize>>) {
    let mut rel = Vec::new();
    for a in 1..=3 {
        for b in 8..=11 {
            rel.push((a, b));
        }
    }
    for a in 4..=9 {
        for b in 12..=14 {
            rel.push((a, b));
        }
    }
    let p = poset1(14, &rel);
    let blocks = blocks1(&[&[1, 2], &[3], &[4, 5, 6, 7], &[8, 9], &[10, 11], &[12], &[13, 14]]);
    (p, blocks)
}

pub fn tree_example() -> (Poset, Vec<Vec<usize>>) {
    let p = poset1(
        10,
        &[(1, 2), (2, 4), (4, 5), (5, 9), (5, 10), (3, 4), (3, 6), (3, 7), (3, 8)],
    );
    let blocks = blocks1(&[&[1, 2], &[3], &[6, 7, 8], &[4, 5], &[9, 10]]);
    (p, blocks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeCase {
    Star,
    Path,
    Necklace,
    Tree,
    Joined,
}

impl ShapeCase {
    pub const ALL: [ShapeCase; 5] = [
        ShapeCase::Star,
        ShapeCase::Path,
        ShapeCase::Necklace,
        ShapeCase::Tree,
        ShapeCase::Joined,
    ];

    pub fn strategy(self) -> Strategy {
        match self {
            ShapeCase::Star => Strategy::Star,
            ShapeCase::Path => Strategy::Path,
            ShapeCase::Necklace => Strategy::Necklace,
            ShapeCase::Tree => Strategy::Tree,
            ShapeCase::Joined => Strategy::Joined,
        }
    }

    pub fn name(self) -> &'static str {
        self.strategy().name()
    }

    fn skeleton<R: Rng>(self, n_max: usize, rng: &mut R) -> UndirectedGraph {
        match self {
            ShapeCase::Star => star_skeleton(rng.gen_range(2..=4.min(n_max - 1))),
            ShapeCase::Path => path_skeleton(rng.gen_range(4..=6.min(n_max))),
            ShapeCase::Necklace | ShapeCase::Tree => {
                let kind = if self == ShapeCase::Necklace {
                    EvenKind::Incomparable
                } else {
                    EvenKind::Comparable
                };
                let depth = rng.gen_range(1..=3.min((n_max - 1) / 2));
                joined_skeleton(&vec![kind; depth]).0
            }
            ShapeCase::Joined => loop {
                let depth = rng.gen_range(2..=3);
                let evens: Vec<EvenKind> = (0..depth)
                    .map(|_| EvenKind::ALL[rng.gen_range(0..3)])
                    .collect();
                let kinds: BTreeSet<usize> = evens.iter().map(|&e| e as usize).collect();
                let (q, _) = joined_skeleton(&evens);
                if kinds.len() >= 2 && q.n() <= n_max {
                    break q;
                }
            },
        }
    }
}

/// A random poset whose incomparability graph has a modular partition with the
/// skeleton of `case`, with `n` in `n_min..=n_max` elements. Half of the time the
/// poset is re-drawn as a random transitive orientation of its comparability graph,
/// so the blocks are modules of the incomparability graph only.
pub fn shaped_instance<R: Rng>(
    case: ShapeCase,
    n_min: usize,
    n_max: usize,
    rng: &mut R,
) -> (Poset, Vec<Vec<usize>>) {
    let q = case.skeleton(n_max, rng);
    let n = rng.gen_range(n_min.max(q.n())..=n_max);
    let sizes = random_composition(n, q.n(), rng);
    let inst = random_instance(&q, &sizes, false, rng).expect("cocomparability skeleton");
    let poset = if rng.gen_bool(0.5) {
        random_transitive_orientation(&inst.poset.comparability_graph(), rng)
            .expect("comparability graph")
    } else {
        inst.poset
    };
    (poset, inst.blocks)
}
