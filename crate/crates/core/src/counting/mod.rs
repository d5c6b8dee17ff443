//! Counting linear extensions: oracles, closed formulas and the dispatcher that
//! picks among them.

mod binomial;
mod formulas;
mod oracle;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

pub use binomial::{binomial, BinomialTable};
pub use formulas::{
    chain_quotient_count, le_joined_shape, le_necklace, le_parallel, le_path, le_series, le_tree,
    star_formula, JoinedShape, PIVOT_SUM_LIMIT,
};
pub use oracle::{le_bruteforce, le_dp, le_dp_bounded};
#[doc(hidden)]
pub use oracle::next_permutation;

use crate::error::{Error, Result};
use crate::modular::{
    self, classify_skeleton, coarsen_by_inconsistency, find_modular_partition, is_poset_partition,
    quotient_graph, quotient_poset, reorient, CoarsenOutcome, EvenPolicy, JoinedStructure,
    ModularPartition, ShapeKind,
};
use crate::poset::Poset;

/// Exact number of linear extensions.
pub type Count = BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Auto,
    Path,
    Necklace,
    Tree,
    Joined,
    Star,
    Modular,
    Dp,
    Brute,
}

impl Strategy {
    /// Name used in reports; `Brute` reports as `bruteforce`.
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Path => "path",
            Strategy::Necklace => "necklace",
            Strategy::Tree => "tree",
            Strategy::Joined => "joined",
            Strategy::Star => "star",
            Strategy::Modular => "modular",
            Strategy::Dp => "dp",
            Strategy::Brute => "bruteforce",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "path" => Strategy::Path,
            "necklace" => Strategy::Necklace,
            "tree" => Strategy::Tree,
            "joined" => Strategy::Joined,
            "star" => Strategy::Star,
            "modular" => Strategy::Modular,
            "dp" => Strategy::Dp,
            "brute" | "bruteforce" => Strategy::Brute,
            other => return Err(Error::Parse(format!("unknown strategy {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CountOptions {
    pub strategy: Strategy,
    /// Partition to use at the top level instead of searching for one.
    pub partition: Option<Vec<Vec<usize>>>,
    pub brute_force_limit: usize,
    pub dp_limit: usize,
    /// Candidate partitions examined by [`find_modular_partition`].
    pub search_budget: usize,
    /// State limit for the quotient DP of the modular recursion.
    pub quotient_states: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            strategy: Strategy::Auto,
            partition: None,
            brute_force_limit: 10,
            dp_limit: 20,
            search_budget: 2000,
            quotient_states: 1 << 22,
        }
    }
}

impl CountOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        CountOptions {
            strategy,
            ..CountOptions::default()
        }
    }

    fn for_modules(&self) -> CountOptions {
        CountOptions {
            strategy: Strategy::Auto,
            partition: None,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: Count,
    /// Method applied at the top level (never `Auto`).
    pub strategy: Strategy,
    /// Top-level partition, blocks in the order used by the formula.
    pub partition: Option<Vec<Vec<usize>>>,
    pub skeleton_shape: Option<ShapeKind>,
}

impl CountReport {
    fn plain(count: Count, strategy: Strategy) -> CountReport {
        CountReport {
            count,
            strategy,
            partition: None,
            skeleton_shape: None,
        }
    }
}

/// Number of linear extensions of `p`.
pub fn count_le(p: &Poset) -> Result<Count> {
    Ok(count(p, &CountOptions::default())?.count)
}

/// Counts with the requested strategy, recording how the result was obtained.
pub fn count(p: &Poset, options: &CountOptions) -> Result<CountReport> {
    match options.strategy {
        Strategy::Brute => Ok(CountReport::plain(
            le_bruteforce(p, options.brute_force_limit)?,
            Strategy::Brute,
        )),
        Strategy::Dp => Ok(CountReport::plain(le_dp(p, options.dp_limit)?, Strategy::Dp)),
        Strategy::Auto => count_auto(p, options),
        Strategy::Modular => {
            let blocks = top_partition(p, options)?;
            let count = modular_count(p, &blocks, options)?;
            Ok(CountReport {
                count,
                strategy: Strategy::Modular,
                partition: Some(blocks),
                skeleton_shape: None,
            })
        }
        forced => {
            let blocks = top_partition(p, options)?;
            count_with_formula(p, &blocks, forced, options)
        }
    }
}

fn top_partition(p: &Poset, options: &CountOptions) -> Result<Vec<Vec<usize>>> {
    if let Some(blocks) = &options.partition {
        modular::block_index(p.n(), blocks)?;
        return Ok(blocks.clone());
    }
    let ig = p.incomparability_graph();
    Ok(find_modular_partition(&ig, options.search_budget)
        .map(ModularPartition::into_blocks)
        .unwrap_or_else(|| (0..p.n()).map(|x| vec![x]).collect()))
}

fn module_counts(p: &Poset, blocks: &[Vec<usize>], options: &CountOptions) -> Result<Vec<Count>> {
    let sub = options.for_modules();
    blocks
        .iter()
        .map(|b| Ok(count(&p.restrict(b), &sub)?.count))
        .collect()
}

/// Applies one closed formula; fails with a shape error when the skeleton of
/// `blocks` does not have the required form.
fn count_with_formula(
    p: &Poset,
    blocks: &[Vec<usize>],
    strategy: Strategy,
    options: &CountOptions,
) -> Result<CountReport> {
    let ig = p.incomparability_graph();
    ModularPartition::for_graph(&ig, blocks.to_vec())?;
    let q = quotient_graph(&ig, blocks);
    let shape = classify_skeleton(&q);
    let mismatch = || {
        Error::Shape(format!(
            "skeleton is {}, not applicable to the {} formula",
            shape.kind.name(),
            strategy.name()
        ))
    };
    if blocks.len() == 1 && p.n() > 1 && !p.is_chain() {
        return Err(Error::Shape("a single-block partition has a trivial skeleton".into()));
    }
    let (count, ordered, kind) = match strategy {
        Strategy::Star | Strategy::Path => {
            let order = if strategy == Strategy::Star {
                modular::star_order(&q)
            } else {
                modular::path_order(&q)
            };
            let order = order.ok_or_else(mismatch)?;
            let ordered: Vec<Vec<usize>> = order.iter().map(|&b| blocks[b].clone()).collect();
            let counts = module_counts(p, &ordered, options)?;
            if strategy == Strategy::Star {
                let count = star_formula(p.n(), ordered[0].len(), &counts)?;
                (count, ordered, ShapeKind::Star)
            } else {
                let sizes: Vec<usize> = ordered.iter().map(Vec::len).collect();
                (le_path(&counts, &sizes)?, ordered, ShapeKind::Path)
            }
        }
        Strategy::Necklace | Strategy::Tree | Strategy::Joined => {
            let (policy, kind) = match strategy {
                Strategy::Necklace => (EvenPolicy::Incomparable, ShapeKind::Necklace3),
                Strategy::Tree => (EvenPolicy::Comparable, ShapeKind::FullBinaryTree),
                _ => (EvenPolicy::Any, ShapeKind::Joined),
            };
            let numbering = modular::joined_numbering(&q, policy).ok_or_else(mismatch)?;
            let js = JoinedStructure::from_numbering(p, blocks, &numbering)?;
            let ordered = js.blocks();
            let counts = module_counts(p, &ordered, options)?;
            let sizes: Vec<usize> = ordered.iter().map(Vec::len).collect();
            let count = match strategy {
                Strategy::Necklace => le_necklace(&counts, &sizes)?,
                Strategy::Tree => le_tree(&counts, &sizes)?,
                _ => le_joined_shape(&js.shape(), &counts)?,
            };
            (count, ordered, kind)
        }
        _ => unreachable!("not a closed formula"),
    };
    Ok(CountReport {
        count,
        strategy,
        partition: Some(ordered),
        skeleton_shape: Some(kind),
    })
}

fn count_auto(p: &Poset, options: &CountOptions) -> Result<CountReport> {
    let n = p.n();
    let everything = || Some(vec![(0..n).collect::<Vec<usize>>()]);
    if n <= 1 || p.is_chain() {
        return Ok(CountReport {
            count: BigUint::one(),
            strategy: Strategy::Path,
            partition: everything(),
            skeleton_shape: Some(ShapeKind::Path),
        });
    }
    let ig = p.incomparability_graph();
    let blocks = match options.partition.as_ref().filter(|b| b.len() > 1) {
        Some(b) => {
            ModularPartition::for_graph(&ig, b.clone())?;
            Some(b.clone())
        }
        None => find_modular_partition(&ig, options.search_budget).map(|m| m.into_blocks()),
    };
    if let Some(blocks) = blocks {
        let kind = classify_skeleton(&quotient_graph(&ig, &blocks)).kind;
        let formula = match kind {
            ShapeKind::Star => Some(Strategy::Star),
            ShapeKind::Path => Some(Strategy::Path),
            ShapeKind::Necklace3 => Some(Strategy::Necklace),
            ShapeKind::FullBinaryTree => Some(Strategy::Tree),
            ShapeKind::Joined => Some(Strategy::Joined),
            ShapeKind::Other => None,
        };
        if let Some(strategy) = formula {
            // Singleton blocks would recurse into nothing smaller, which is fine:
            // each module count is then 1.
            return count_with_formula(p, &blocks, strategy, options);
        }
        if let Ok(count) = modular_count(p, &blocks, options) {
            return Ok(CountReport {
                count,
                strategy: Strategy::Modular,
                partition: Some(blocks),
                skeleton_shape: Some(ShapeKind::Other),
            });
        }
    }
    if n <= options.dp_limit {
        if let Ok(count) = le_dp_bounded(p, options.dp_limit, options.quotient_states) {
            return Ok(CountReport::plain(count, Strategy::Dp));
        }
    }
    if n <= options.brute_force_limit {
        return Ok(CountReport::plain(
            le_bruteforce(p, options.brute_force_limit)?,
            Strategy::Brute,
        ));
    }
    Err(Error::Size(format!(
        "no strategy applies to this {n}-element poset within the configured limits"
    )))
}

/// Modular recursion on a poset partition, coarsening or reorienting first when
/// `blocks` is only modular in a derived graph.
fn modular_count(p: &Poset, blocks: &[Vec<usize>], options: &CountOptions) -> Result<Count> {
    let usable: (Poset, Vec<Vec<usize>>) = if is_poset_partition(p, blocks)? {
        (p.clone(), blocks.to_vec())
    } else if let Ok(q) = reorient(p, blocks) {
        (q, blocks.to_vec())
    } else {
        let coarse = coarsen_by_inconsistency(p, blocks)
            .map_err(|_| Error::NotModular("partition is not modular in the poset".into()))?;
        if coarse.outcome == CoarsenOutcome::DominatingVertex {
            return Err(Error::NotModular(
                "coarsening collapsed the partition into one block".into(),
            ));
        }
        (p.clone(), coarse.partition.into_blocks())
    };
    let (q, blocks) = usable;
    if blocks.len() < 2 {
        return Err(Error::NotModular("a single block gives no recursion".into()));
    }
    let counts = module_counts(&q, &blocks, options)?;
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let quotient = quotient_poset(&q, &blocks);
    let chain_part = chain_quotient_count(&quotient, &sizes, options.quotient_states)
        .or_else(|_| le_dp(&chain_quotient(&q, &blocks)?, options.dp_limit))?;
    Ok(counts.into_iter().fold(chain_part, |acc, c| acc * c))
}

/// Star skeleton with centre `blocks[0]`: `binom(n, m_1) * prod LE(M_s)`.
pub fn le_star(p: &Poset, blocks: &[Vec<usize>]) -> Result<Count> {
    let ig = p.incomparability_graph();
    ModularPartition::for_graph(&ig, blocks.to_vec())?;
    let q = quotient_graph(&ig, blocks);
    let k = blocks.len();
    let centre_ok = (1..k).all(|i| q.has_edge(0, i));
    let leaves_ok = (1..k).all(|i| (i + 1..k).all(|j| !q.has_edge(i, j)));
    if !centre_ok || !leaves_ok {
        return Err(Error::Shape(
            "the first block must be incomparable to every other block, and the others pairwise comparable".into(),
        ));
    }
    let counts = module_counts(p, blocks, &CountOptions::default())?;
    star_formula(p.n(), blocks[0].len(), &counts)
}

/// `LE(P) = LE(P_M) * prod LE(M_i)` for a poset partition (or one that becomes
/// poset-modular after [`reorient`]).
pub fn le_modular(p: &Poset, blocks: &[Vec<usize>]) -> Result<Count> {
    let options = CountOptions::default();
    if !is_poset_partition(p, blocks)? && reorient(p, blocks).is_err() {
        return Err(Error::NotModular("partition is not modular in the poset".into()));
    }
    if blocks.len() == 1 {
        return Ok(count(p, &options)?.count);
    }
    modular_count(p, blocks, &options)
}

/// Joined formula with module counts supplied for the non-empty positions.
pub fn le_joined(js: &JoinedStructure, module_counts: &[Count]) -> Result<Count> {
    le_joined_shape(&js.shape(), module_counts)
}

/// The poset obtained by replacing every block with a chain, keeping the ground set:
/// inside a block, smaller elements come first.
pub fn chain_quotient(p: &Poset, blocks: &[Vec<usize>]) -> Result<Poset> {
    if !is_poset_partition(p, blocks)? {
        return Err(Error::NotModular("partition is not modular in the poset".into()));
    }
    let owner = modular::block_index(p.n(), blocks)?;
    let n = p.n();
    let up = (0..n)
        .map(|x| {
            crate::bitset::BitSet::from_iter_with_capacity(
                n,
                (0..n).filter(|&y| {
                    if owner[x] == owner[y] {
                        x < y
                    } else {
                        p.lt(x, y)
                    }
                }),
            )
        })
        .collect();
    Ok(Poset::from_closed_rows(up))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn dispatcher_basics() {
        let r = count(&Poset::chain(30), &CountOptions::default()).unwrap();
        assert_eq!(r.count, big(1));
        assert_eq!(r.strategy, Strategy::Path);
        let prod = Poset::product(&Poset::chain(2), &Poset::chain(5));
        assert_eq!(count_le(&prod).unwrap(), big(42));
        assert_eq!(count_le(&Poset::antichain(0)).unwrap(), big(1));
        assert_eq!(count_le(&Poset::antichain(12)).unwrap(), big(479001600));
    }

    #[test]
    fn wide_antichain_beyond_oracles() {
        // Complete incomparability graph: handled by formulas, no DP.
        let r = count(&Poset::antichain(30), &CountOptions::default()).unwrap();
        let fact: BigUint = (1..=30u32).map(BigUint::from).product();
        assert_eq!(r.count, fact);
        assert_ne!(r.strategy, Strategy::Dp);
    }

    #[test]
    fn forced_strategies_agree() {
        let p = Poset::from_relations(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let dp = count(&p, &CountOptions::with_strategy(Strategy::Dp)).unwrap().count;
        let brute = count(&p, &CountOptions::with_strategy(Strategy::Brute)).unwrap().count;
        assert_eq!(dp, brute);
        assert_eq!(count_le(&p).unwrap(), dp);
        let modular = count(&p, &CountOptions::with_strategy(Strategy::Modular)).unwrap();
        assert_eq!(modular.count, dp);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let p = Poset::antichain(3);
        let options = CountOptions {
            strategy: Strategy::Tree,
            partition: Some(vec![vec![0], vec![1], vec![2]]),
            ..CountOptions::default()
        };
        assert!(matches!(count(&p, &options), Err(Error::Shape(_))));
    }

    #[test]
    fn star_and_modular_helpers() {
        // Centre {0} incomparable to the chain 1 < 2.
        let p = Poset::from_relations(3, &[(1, 2)]).unwrap();
        assert_eq!(le_star(&p, &[vec![0], vec![1], vec![2]]).unwrap(), big(3));
        assert!(matches!(le_star(&p, &[vec![1], vec![0], vec![2]]), Err(Error::Shape(_))));
        assert_eq!(le_modular(&p, &[vec![0], vec![1, 2]]).unwrap(), big(3));
        let singletons: Vec<Vec<usize>> = (0..3).map(|x| vec![x]).collect();
        assert_eq!(le_modular(&p, &singletons).unwrap(), big(3));
        // Only modular after reorienting, which keeps the count.
        let c = Poset::chain(3);
        assert_eq!(le_modular(&c, &[vec![0, 2], vec![1]]).unwrap(), big(1));
        let q = Poset::from_relations(3, &[(0, 1)]).unwrap();
        assert!(matches!(le_modular(&q, &[vec![0, 2], vec![1]]), Err(Error::NotModular(_))));
    }

    #[test]
    fn chain_quotient_cases() {
        let p = Poset::from_relations(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(chain_quotient(&p, &[vec![0, 1, 2, 3]]).unwrap().is_chain());
        let singletons: Vec<Vec<usize>> = (0..4).map(|x| vec![x]).collect();
        assert_eq!(chain_quotient(&p, &singletons).unwrap(), p);
        let cq = chain_quotient(&p, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        assert!(cq.is_chain());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::Auto,
            Strategy::Path,
            Strategy::Necklace,
            Strategy::Tree,
            Strategy::Joined,
            Strategy::Star,
            Strategy::Modular,
            Strategy::Dp,
            Strategy::Brute,
        ] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("fast".parse::<Strategy>().is_err());
    }
}
