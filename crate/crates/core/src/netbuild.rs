//! Digraphs with prescribed module sizes and prescribed counts of edge-induced
//! transitive tournaments inside each module.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::counting::{le_dp, Count};
use crate::error::{Error, Result};
use crate::modular::block_index;
use crate::tournament::{
    all_reverse_pairs, count_transitive_subtournaments, poset_from_reverse_edges,
    reverse_edge_digraph, Digraph, ReverseEdgeSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSpec {
    /// Find some `R` on `size` vertices with `C_size(R) = target`.
    Target { size: usize, target: Count },
    /// Use this reverse-edge set as given.
    Explicit(ReverseEdgeSet),
}

impl ModuleSpec {
    pub fn size(&self) -> usize {
        match self {
            ModuleSpec::Target { size, .. } => *size,
            ModuleSpec::Explicit(r) => r.n(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    skeleton: Digraph,
    modules: Vec<ModuleSpec>,
}

impl NetworkSpec {
    pub fn new(skeleton: Digraph, modules: Vec<ModuleSpec>) -> Result<NetworkSpec> {
        if skeleton.n() != modules.len() {
            return Err(Error::Arity {
                expected: skeleton.n(),
                got: modules.len(),
            });
        }
        if let Some((a, b)) = skeleton.arcs().find(|&(a, b)| skeleton.has_arc(b, a)) {
            return Err(Error::Parse(format!(
                "skeleton has arcs in both directions between {} and {}",
                a + 1,
                b + 1
            )));
        }
        if let Some(i) = modules.iter().position(|m| m.size() == 0) {
            return Err(Error::Parse(format!("module {} is empty", i + 1)));
        }
        Ok(NetworkSpec { skeleton, modules })
    }

    pub fn skeleton(&self) -> &Digraph {
        &self.skeleton
    }

    pub fn modules(&self) -> &[ModuleSpec] {
        &self.modules
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest module size searched exhaustively.
    pub max_size: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_size: 6 }
    }
}

/// First `R` with `C_n(R) = target`, scanning subsets of `R_n` by size and then
/// lexicographically.
pub fn search_reverse_set(n: usize, target: &Count, limits: SearchLimits) -> Result<ReverseEdgeSet> {
    let factorial: BigUint = (1..=n as u64).product();
    let infeasible = |hint: String| Error::Infeasible {
        n,
        target: target.to_string(),
        hint,
    };
    if target.is_zero() {
        return Err(infeasible("1".into()));
    }
    if *target > factorial {
        return Err(infeasible(factorial.to_string()));
    }
    if n > limits.max_size {
        return Err(Error::Size(format!(
            "reverse-set search is limited to {} vertices, got {n}",
            limits.max_size
        )));
    }
    let pairs = all_reverse_pairs(n);
    let mut achieved: BTreeSet<Count> = BTreeSet::new();
    for k in 0..=pairs.len() {
        let candidates: Vec<Vec<(usize, usize)>> =
            pairs.iter().copied().combinations(k).collect();
        let counts: Vec<Count> = candidates
            .par_iter()
            .map(|c| {
                let r = ReverseEdgeSet::new(n, c).expect("pairs come from R_n");
                le_dp(&poset_from_reverse_edges(&r), 64).expect("within the DP limit")
            })
            .collect();
        if let Some(i) = counts.iter().position(|c| c == target) {
            return Ok(ReverseEdgeSet::new(n, &candidates[i]).expect("pairs come from R_n"));
        }
        achieved.extend(counts);
    }
    let below = achieved.range(..target.clone()).next_back();
    let above = achieved.range(target.clone()..).next();
    let hint = match (below, above) {
        (Some(b), Some(a)) => format!("{b} or {a}"),
        (Some(b), None) => b.to_string(),
        (None, Some(a)) => a.to_string(),
        (None, None) => "none".to_string(),
    };
    Err(infeasible(hint))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub digraph: Digraph,
    /// Vertex blocks, one per module, consecutive in module order.
    pub blocks: Vec<Vec<usize>>,
    pub reverse_sets: Vec<ReverseEdgeSet>,
}

/// Substitutes `A_{n_k}(R_k)` for every skeleton vertex and joins blocks `k -> l`
/// completely along each skeleton arc.
pub fn assemble_network(spec: &NetworkSpec, limits: SearchLimits) -> Result<Network> {
    let reverse_sets: Vec<ReverseEdgeSet> = spec
        .modules
        .iter()
        .map(|m| match m {
            ModuleSpec::Target { size, target } => search_reverse_set(*size, target, limits),
            ModuleSpec::Explicit(r) => Ok(r.clone()),
        })
        .collect::<Result<_>>()?;
    let mut blocks = Vec::with_capacity(reverse_sets.len());
    let mut offset = 0;
    for r in &reverse_sets {
        blocks.push((offset..offset + r.n()).collect::<Vec<usize>>());
        offset += r.n();
    }
    let mut arcs = Vec::new();
    for (r, block) in reverse_sets.iter().zip(&blocks) {
        arcs.extend(
            reverse_edge_digraph(r)
                .arcs()
                .map(|(a, b)| (block[a], block[b])),
        );
    }
    for (k, l) in spec.skeleton.arcs() {
        for &a in &blocks[k] {
            for &b in &blocks[l] {
                arcs.push((a, b));
            }
        }
    }
    Ok(Network {
        digraph: Digraph::new(offset, &arcs)?,
        blocks,
        reverse_sets,
    })
}

/// Edge-induced transitive tournaments inside every block.
pub fn verify_network(g: &Digraph, blocks: &[Vec<usize>]) -> Result<Vec<Count>> {
    block_index(g.n(), blocks)?;
    blocks
        .iter()
        .map(|b| count_transitive_subtournaments(&g.induced(b), 24))
        .collect()
}
