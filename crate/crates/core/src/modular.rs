//! Modular partitions of graphs and posets, skeleton quotients and their shapes,
//! and the repair of partitions that are modular in the comparability graph but not
//! in the poset.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::poset::{Poset, UndirectedGraph};

/// Checks that `blocks` partitions `0..n` into non-empty blocks and returns the
/// block index of every element.
pub fn block_index(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::Partition(format!("block {} is empty", i + 1)));
        }
        for &x in block {
            if x >= n {
                return Err(Error::Partition(format!("element {} is outside 1..={n}", x + 1)));
            }
            if owner[x] != usize::MAX {
                return Err(Error::Partition(format!("element {} appears twice", x + 1)));
            }
            owner[x] = i;
        }
    }
    if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::Partition(format!("element {} is not covered", x + 1)));
    }
    Ok(owner)
}

/// True iff every vertex outside `set` sees either all of `set` or none of it.
pub fn is_module(g: &UndirectedGraph, set: &[usize]) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let inside = BitSet::from_iter_with_capacity(g.n(), set.iter().copied());
    let first = set[0];
    Ok((0..g.n()).filter(|v| !inside.contains(*v)).all(|v| {
        let adj = g.has_edge(v, first);
        set.iter().all(|&s| g.has_edge(v, s) == adj)
    }))
}

/// Directed module: every outside element is above all, below all, or incomparable
/// to all of `set`.
pub fn is_poset_module(p: &Poset, set: &[usize]) -> bool {
    let Some(&first) = set.first() else {
        return false;
    };
    let inside = BitSet::from_iter_with_capacity(p.n(), set.iter().copied());
    (0..p.n()).filter(|v| !inside.contains(*v)).all(|v| {
        let below = p.lt(v, first);
        let above = p.lt(first, v);
        set.iter()
            .all(|&s| p.lt(v, s) == below && p.lt(s, v) == above)
    })
}

pub fn is_graph_partition(g: &UndirectedGraph, blocks: &[Vec<usize>]) -> Result<bool> {
    block_index(g.n(), blocks)?;
    for block in blocks {
        if !is_module(g, block)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_poset_partition(p: &Poset, blocks: &[Vec<usize>]) -> Result<bool> {
    block_index(p.n(), blocks)?;
    Ok(blocks.iter().all(|b| is_poset_module(p, b)))
}

/// A validated partition into modules of some context graph or poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModularPartition {
    blocks: Vec<Vec<usize>>,
}

impl ModularPartition {
    pub fn for_graph(g: &UndirectedGraph, blocks: Vec<Vec<usize>>) -> Result<ModularPartition> {
        if !is_graph_partition(g, &blocks)? {
            return Err(Error::NotModular(describe_failure(&blocks, |b| {
                is_module(g, b).unwrap_or(false)
            })));
        }
        Ok(ModularPartition { blocks })
    }

    pub fn for_poset(p: &Poset, blocks: Vec<Vec<usize>>) -> Result<ModularPartition> {
        if !is_poset_partition(p, &blocks)? {
            return Err(Error::NotModular(describe_failure(&blocks, |b| {
                is_poset_module(p, b)
            })));
        }
        Ok(ModularPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn describe_failure(blocks: &[Vec<usize>], ok: impl Fn(&[usize]) -> bool) -> String {
    match blocks.iter().position(|b| !ok(b)) {
        Some(i) => format!("block {} is not a module", i + 1),
        None => "partition rejected".to_string(),
    }
}

/// Quotient graph: blocks `i` and `j` adjacent iff their elements are. Assumes modularity.
pub fn quotient_graph(g: &UndirectedGraph, blocks: &[Vec<usize>]) -> UndirectedGraph {
    let mut q = UndirectedGraph::empty(blocks.len());
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if g.has_edge(blocks[i][0], blocks[j][0]) {
                q.add_edge(i, j);
            }
        }
    }
    q
}

/// Quotient of a poset partition: block `i` below block `j` iff their elements are.
pub fn quotient_poset(p: &Poset, blocks: &[Vec<usize>]) -> Poset {
    let k = blocks.len();
    let up = (0..k)
        .map(|i| {
            BitSet::from_iter_with_capacity(
                k,
                (0..k).filter(|&j| j != i && p.lt(blocks[i][0], blocks[j][0])),
            )
        })
        .collect();
    Poset::from_closed_rows(up)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Star,
    Path,
    #[serde(rename = "necklace")]
    Necklace3,
    #[serde(rename = "tree")]
    FullBinaryTree,
    Joined,
    Other,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Star => "star",
            ShapeKind::Path => "path",
            ShapeKind::Necklace3 => "necklace",
            ShapeKind::FullBinaryTree => "tree",
            ShapeKind::Joined => "joined",
            ShapeKind::Other => "other",
        }
    }
}

/// A classified skeleton together with the block numbering that witnesses it.
///
/// `numbering[k]` is the block placed at position `k + 1`:
/// * star: the centre first, then the leaves;
/// * path: the blocks in path order;
/// * necklace / tree / joined: the `2D + 1` positions `M_1..M_{2D+1}`, with `None`
///   for an empty even position;
/// * other: empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub kind: ShapeKind,
    pub numbering: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub quotient: UndirectedGraph,
    pub block_sizes: Vec<usize>,
    pub shape: Shape,
}

impl Skeleton {
    /// Re-runs the classification and checks it matches the stored shape.
    pub fn is_consistent(&self) -> bool {
        self.quotient.n() == self.block_sizes.len()
            && classify_skeleton(&self.quotient) == self.shape
    }
}

pub fn skeleton_of(g: &UndirectedGraph, blocks: &[Vec<usize>]) -> Result<Skeleton> {
    let partition = ModularPartition::for_graph(g, blocks.to_vec())?;
    let quotient = quotient_graph(g, partition.blocks());
    let shape = classify_skeleton(&quotient);
    Ok(Skeleton {
        block_sizes: partition.blocks().iter().map(Vec::len).collect(),
        quotient,
        shape,
    })
}

/// Most specific shape in the order star, path, necklace, tree, joined.
pub fn classify_skeleton(q: &UndirectedGraph) -> Shape {
    let k = q.n();
    let other = Shape {
        kind: ShapeKind::Other,
        numbering: Vec::new(),
    };
    if k == 0 || !q.is_connected() {
        return other;
    }
    if let Some(center) = star_center(q) {
        let mut numbering = vec![Some(center)];
        numbering.extend((0..k).filter(|&v| v != center).map(Some));
        return Shape {
            kind: ShapeKind::Star,
            numbering,
        };
    }
    if let Some(order) = path_order(q) {
        return Shape {
            kind: ShapeKind::Path,
            numbering: order.into_iter().map(Some).collect(),
        };
    }
    for (kind, policy) in [
        (ShapeKind::Necklace3, EvenPolicy::Incomparable),
        (ShapeKind::FullBinaryTree, EvenPolicy::Comparable),
        (ShapeKind::Joined, EvenPolicy::Any),
    ] {
        if let Some(numbering) = joined_numbering(q, policy) {
            return Shape { kind, numbering };
        }
    }
    other
}

/// Centre of a star with at least two leaves.
fn star_center(q: &UndirectedGraph) -> Option<usize> {
    if q.n() < 3 {
        return None;
    }
    star_order(q).map(|order| order[0])
}

/// Centre followed by the leaves, when one vertex is adjacent to all others and
/// the others are pairwise non-adjacent.
pub fn star_order(q: &UndirectedGraph) -> Option<Vec<usize>> {
    let k = q.n();
    if k == 0 || q.edge_count() != k - 1 {
        return None;
    }
    let center = (0..k).find(|&v| q.degree(v) == k - 1)?;
    let mut order = vec![center];
    order.extend((0..k).filter(|&v| v != center));
    Some(order)
}

/// Vertex order of a path graph, starting from the smaller endpoint.
pub fn path_order(q: &UndirectedGraph) -> Option<Vec<usize>> {
    let k = q.n();
    if k == 1 {
        return Some(vec![0]);
    }
    if q.edge_count() != k - 1 || (0..k).any(|v| q.degree(v) > 2) {
        return None;
    }
    let start = (0..k).find(|&v| q.degree(v) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < k {
        let next = q.neighbors(cur).iter().find(|&w| w != prev)?;
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Some(order)
}

/// Constraint on the even positions of a joined numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvenPolicy {
    /// Any even position may be empty, linked or unlinked to the next odd one.
    Any,
    /// Every even position occupied and adjacent (incomparable) to the next odd one.
    Incomparable,
    /// Every even position occupied and not adjacent to the next odd one.
    Comparable,
    /// Every even position empty.
    Empty,
}

/// Whether positions `a < b` (1-based) may, must, or must not be adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeRule {
    Required,
    Optional,
    Forbidden,
}

fn edge_rule(a: usize, b: usize) -> EdgeRule {
    debug_assert!(a < b);
    match (a % 2 == 1, b % 2 == 1) {
        (true, true) if b == a + 2 => EdgeRule::Required,
        (true, false) if b == a + 1 => EdgeRule::Required,
        (false, true) if b == a + 1 => EdgeRule::Optional,
        _ => EdgeRule::Forbidden,
    }
}

/// Lexicographically least numbering `M_1..M_{2D+1}` of the quotient vertices that
/// satisfies the joined-skeleton edge conditions, with empty even positions ordered
/// before occupied ones.
pub fn joined_numbering(q: &UndirectedGraph, policy: EvenPolicy) -> Option<Vec<Option<usize>>> {
    let k = q.n();
    if k == 0 || !q.is_connected() {
        return None;
    }
    let mut slots: Vec<Option<usize>> = Vec::with_capacity(2 * k);
    let mut used = vec![false; k];
    if search_numbering(q, policy, &mut slots, &mut used, 0) {
        Some(slots)
    } else {
        None
    }
}

fn search_numbering(
    q: &UndirectedGraph,
    policy: EvenPolicy,
    slots: &mut Vec<Option<usize>>,
    used: &mut [bool],
    placed: usize,
) -> bool {
    let k = q.n();
    let position = slots.len() + 1;
    let odd = position % 2 == 1;
    if !odd && placed == k {
        // Complete: the sequence ended on an odd position.
        return true;
    }
    let mut candidates: Vec<Option<usize>> = Vec::new();
    if !odd && matches!(policy, EvenPolicy::Any | EvenPolicy::Empty) {
        candidates.push(None);
    }
    if odd || policy != EvenPolicy::Empty {
        candidates.extend((0..k).filter(|&v| !used[v]).map(Some));
    }
    for candidate in candidates {
        if let Some(v) = candidate {
            if !fits(q, slots, position, v) {
                continue;
            }
            used[v] = true;
        }
        slots.push(candidate);
        let ok = even_policy_holds(q, policy, slots)
            && search_numbering(q, policy, slots, used, placed + usize::from(candidate.is_some()));
        if ok {
            return true;
        }
        slots.pop();
        if let Some(v) = candidate {
            used[v] = false;
        }
    }
    false
}

fn fits(q: &UndirectedGraph, slots: &[Option<usize>], position: usize, v: usize) -> bool {
    slots.iter().enumerate().all(|(i, slot)| {
        let Some(u) = *slot else {
            return true;
        };
        let adjacent = q.has_edge(u, v);
        match edge_rule(i + 1, position) {
            EdgeRule::Required => adjacent,
            EdgeRule::Optional => true,
            EdgeRule::Forbidden => !adjacent,
        }
    })
}

/// Checks the policy on the most recently completed (even, odd) pair.
fn even_policy_holds(q: &UndirectedGraph, policy: EvenPolicy, slots: &[Option<usize>]) -> bool {
    let len = slots.len();
    if len < 3 || len.is_multiple_of(2) {
        return true;
    }
    let even = slots[len - 2];
    let next_odd = slots[len - 1].expect("odd positions are occupied");
    match policy {
        EvenPolicy::Any => true,
        EvenPolicy::Empty => even.is_none(),
        EvenPolicy::Incomparable => even.is_some_and(|e| q.has_edge(e, next_odd)),
        EvenPolicy::Comparable => even.is_some_and(|e| !q.has_edge(e, next_odd)),
    }
}

/// A partition arranged as `M_1..M_{2D+1}` satisfying the joined-skeleton conditions
/// on the incomparability graph. Empty even positions are placeholder empty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinedStructure {
    slots: Vec<Vec<usize>>,
    even_incomparable: Vec<bool>,
}

impl JoinedStructure {
    /// Arranges `blocks` according to `numbering` (see [`Shape`]) and validates the
    /// conditions against the incomparability graph of `p`.
    pub fn from_numbering(
        p: &Poset,
        blocks: &[Vec<usize>],
        numbering: &[Option<usize>],
    ) -> Result<JoinedStructure> {
        let slots: Vec<Vec<usize>> = numbering
            .iter()
            .map(|slot| slot.map(|b| blocks[b].clone()).unwrap_or_default())
            .collect();
        let used: Vec<usize> = numbering.iter().flatten().copied().collect();
        if used.len() != blocks.len() || used.iter().collect::<HashSet<_>>().len() != blocks.len() {
            return Err(Error::Condition(
                "numbering must use every block exactly once".into(),
            ));
        }
        JoinedStructure::from_slots(p, slots)
    }

    /// Finds a joined numbering of the incomparability skeleton of `blocks`.
    pub fn from_partition(p: &Poset, blocks: &[Vec<usize>]) -> Result<JoinedStructure> {
        let ig = p.incomparability_graph();
        ModularPartition::for_graph(&ig, blocks.to_vec())?;
        let q = quotient_graph(&ig, blocks);
        let numbering = joined_numbering(&q, EvenPolicy::Any).ok_or_else(|| {
            Error::Condition("no numbering of the skeleton satisfies the joined conditions".into())
        })?;
        JoinedStructure::from_numbering(p, blocks, &numbering)
    }

    /// Validates explicit positions `M_1..M_{2D+1}` (empty vectors for absent evens).
    pub fn from_slots(p: &Poset, slots: Vec<Vec<usize>>) -> Result<JoinedStructure> {
        if slots.len().is_multiple_of(2) {
            return Err(Error::Condition(format!(
                "expected an odd number of positions, got {}",
                slots.len()
            )));
        }
        if let Some(i) = (0..slots.len()).step_by(2).find(|&i| slots[i].is_empty()) {
            return Err(Error::Condition(format!("odd position M_{} is empty", i + 1)));
        }
        let blocks: Vec<Vec<usize>> = slots.iter().filter(|s| !s.is_empty()).cloned().collect();
        let ig = p.incomparability_graph();
        ModularPartition::for_graph(&ig, blocks).map_err(|e| match e {
            Error::NotModular(msg) => Error::Condition(msg),
            other => other,
        })?;
        for a in 0..slots.len() {
            for b in a + 1..slots.len() {
                let (Some(&x), Some(&y)) = (slots[a].first(), slots[b].first()) else {
                    continue;
                };
                let adjacent = ig.has_edge(x, y);
                let ok = match edge_rule(a + 1, b + 1) {
                    EdgeRule::Required => adjacent,
                    EdgeRule::Optional => true,
                    EdgeRule::Forbidden => !adjacent,
                };
                if !ok {
                    return Err(Error::Condition(format!(
                        "M_{} and M_{} {} be incomparable",
                        a + 1,
                        b + 1,
                        if adjacent { "must not" } else { "must" }
                    )));
                }
            }
        }
        let even_incomparable = (1..slots.len())
            .step_by(2)
            .map(|i| !slots[i].is_empty() && ig.has_edge(slots[i][0], slots[i + 1][0]))
            .collect();
        Ok(JoinedStructure {
            slots,
            even_incomparable,
        })
    }

    /// `D`, the number of (even, odd) position pairs after `M_1`.
    pub fn depth(&self) -> usize {
        self.slots.len() / 2
    }

    pub fn slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    /// Whether `M_{2d}` is non-empty and incomparable to `M_{2d+1}`, for `d = 1..=D`.
    pub fn even_incomparable(&self) -> &[bool] {
        &self.even_incomparable
    }

    /// Non-empty positions in order; this is a modular partition of the incomparability graph.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.slots.iter().filter(|s| !s.is_empty()).cloned().collect()
    }

    pub fn shape(&self) -> crate::counting::JoinedShape {
        crate::counting::JoinedShape::new(
            self.slots.iter().map(Vec::len).collect(),
            self.even_incomparable.clone(),
        )
        .expect("validated structure")
    }
}

/// Block pairs `(i, j)`, `i < j`, with `x < a` and `y > b` for some `x, y` in block
/// `i` and `a, b` in block `j`.
pub fn find_inconsistent_pairs(p: &Poset, blocks: &[Vec<usize>]) -> Result<Vec<(usize, usize)>> {
    ModularPartition::for_graph(&p.comparability_graph(), blocks.to_vec())?;
    Ok(inconsistent_pairs_unchecked(p, blocks))
}

fn inconsistent_pairs_unchecked(p: &Poset, blocks: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let mut below = false;
            let mut above = false;
            for &x in &blocks[i] {
                for &a in &blocks[j] {
                    below |= p.lt(x, a);
                    above |= p.lt(a, x);
                }
            }
            if below && above {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarsenOutcome {
    /// The coarsened partition has more than one block and is a poset partition.
    PosetPartition,
    /// Everything collapsed into one block: some block was comparable to all others.
    DominatingVertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coarsening {
    pub partition: ModularPartition,
    pub outcome: CoarsenOutcome,
}

/// Unions blocks along the equivalence generated by inconsistent comparability,
/// repeating until no inconsistent pair remains.
pub fn coarsen_by_inconsistency(p: &Poset, blocks: &[Vec<usize>]) -> Result<Coarsening> {
    ModularPartition::for_graph(&p.comparability_graph(), blocks.to_vec())?;
    let mut current: Vec<Vec<usize>> = blocks.to_vec();
    loop {
        let pairs = inconsistent_pairs_unchecked(p, &current);
        if pairs.is_empty() {
            break;
        }
        let mut parent: Vec<usize> = (0..current.len()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j) in pairs {
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
        // Classes keyed by their smallest original block index keep the block order.
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, block) in current.iter().enumerate() {
            let r = root(&mut parent, i);
            classes.entry(r).or_default().extend(block);
        }
        current = classes
            .into_values()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
    }
    let outcome = if current.len() > 1 || blocks.len() <= 1 {
        CoarsenOutcome::PosetPartition
    } else {
        CoarsenOutcome::DominatingVertex
    };
    let partition = ModularPartition::for_poset(p, current)?;
    Ok(Coarsening { partition, outcome })
}

/// Which of the three partitions derived from a joined structure is poset-modular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Resolution {
    /// The joined partition itself.
    AsIs,
    /// `M_1, ..., M_{2D-1}, M_{2D} ∪ M_{2D+1}`.
    MergeLastTwo,
    /// `D = 2` and `M_1 ∪ M_2 ∪ M_4 ∪ M_5, M_3`.
    MergeAroundMiddle,
}

impl Resolution {
    /// The partition this case certifies.
    pub fn partition(self, js: &JoinedStructure) -> Vec<Vec<usize>> {
        let slots = js.slots();
        let nonempty = |v: Vec<Vec<usize>>| v.into_iter().filter(|b| !b.is_empty()).collect();
        match self {
            Resolution::AsIs => js.blocks(),
            Resolution::MergeLastTwo => {
                let d = js.depth();
                if d == 0 {
                    return js.blocks();
                }
                let mut out: Vec<Vec<usize>> = slots[..2 * d - 1].to_vec();
                let mut last = slots[2 * d].clone();
                last.extend(&slots[2 * d - 1]);
                last.sort_unstable();
                out.push(last);
                nonempty(out)
            }
            Resolution::MergeAroundMiddle => {
                let mut outer: Vec<usize> = [0, 1, 3, 4]
                    .iter()
                    .flat_map(|&i| slots.get(i).cloned().unwrap_or_default())
                    .collect();
                outer.sort_unstable();
                nonempty(vec![outer, slots.get(2).cloned().unwrap_or_default()])
            }
        }
    }
}

/// Reports the first of the three cases whose partition is poset-modular.
///
/// None of them need apply when `D >= 3`: for instance, if `M_2` is empty and `M_4` is
/// comparable to `M_5`, then `M_1` and `M_4` share the neighbourhood `{M_3}` and
/// may be inconsistently comparable. The result is then a `Mismatch` error, and
/// [`coarsen_by_inconsistency`] still yields a poset partition.
pub fn the_ones_resolution(p: &Poset, js: &JoinedStructure) -> Result<Resolution> {
    // Re-validate against this poset.
    JoinedStructure::from_slots(p, js.slots().to_vec())?;
    let mut cases = vec![Resolution::AsIs, Resolution::MergeLastTwo];
    if js.depth() == 2 {
        cases.push(Resolution::MergeAroundMiddle);
    }
    for case in cases {
        if is_poset_partition(p, &case.partition(js))? {
            return Ok(case);
        }
    }
    Err(Error::Mismatch(
        "no merged partition of the joined structure is poset-modular".into(),
    ))
}

/// The poset with the same incomparability graph in which `blocks` is a poset
/// partition and block `i` lies below block `j` whenever `i < j` and they are comparable.
pub fn reorient(p: &Poset, blocks: &[Vec<usize>]) -> Result<Poset> {
    let ig = p.incomparability_graph();
    ModularPartition::for_graph(&ig, blocks.to_vec())?;
    let owner = block_index(p.n(), blocks)?;
    let cq = quotient_graph(&p.comparability_graph(), blocks);
    let k = blocks.len();
    for i in 0..k {
        for j in i + 1..k {
            if !cq.has_edge(i, j) {
                continue;
            }
            for l in j + 1..k {
                if cq.has_edge(j, l) && !cq.has_edge(i, l) {
                    return Err(Error::NotTransitivelyOrientable(i + 1, j + 1, l + 1));
                }
            }
        }
    }
    let n = p.n();
    let up = (0..n)
        .map(|x| {
            BitSet::from_iter_with_capacity(
                n,
                (0..n).filter(|&y| {
                    let (bx, by) = (owner[x], owner[y]);
                    if bx == by {
                        p.lt(x, y)
                    } else {
                        bx < by && cq.has_edge(bx, by)
                    }
                }),
            )
        })
        .collect();
    Ok(Poset::from_closed_rows(up))
}

fn shape_rank(kind: ShapeKind) -> usize {
    match kind {
        ShapeKind::Star => 0,
        ShapeKind::Path => 1,
        ShapeKind::Necklace3 => 2,
        ShapeKind::FullBinaryTree => 3,
        ShapeKind::Joined => 4,
        ShapeKind::Other => 5,
    }
}

/// Naive search for a non-trivial modular partition of `g`, preferring one whose
/// skeleton has a closed-formula shape. At most `budget` candidate partitions are
/// examined in the merging phase.
pub fn find_modular_partition(g: &UndirectedGraph, budget: usize) -> Option<ModularPartition> {
    let n = g.n();
    if n <= 1 {
        return None;
    }
    let canonical = |blocks: Vec<Vec<usize>>| ModularPartition { blocks };
    if !g.is_connected() {
        return Some(canonical(g.components()));
    }
    let co = g.complement().components();
    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::new();
    if co.len() >= 2 {
        // g is the join of its co-components.
        let rest = |skip: usize| -> Vec<usize> {
            let mut r: Vec<usize> = co
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .flat_map(|(_, c)| c.iter().copied())
                .collect();
            r.sort_unstable();
            r
        };
        if co.len() == 2 {
            for (centre, other) in [(0, 1), (1, 0)] {
                let leaves: Vec<Vec<usize>> = g
                    .induced(&co[other])
                    .components()
                    .into_iter()
                    .map(|c| c.into_iter().map(|i| co[other][i]).collect())
                    .collect();
                if leaves.len() >= 2 {
                    let mut blocks = vec![co[centre].clone()];
                    blocks.extend(leaves);
                    candidates.push(blocks);
                }
            }
        }
        if co.len() == 3 {
            candidates.push(co.clone());
        }
        candidates.push(vec![co[0].clone(), rest(0)]);
    } else {
        let twins = twin_classes(g);
        let singletons: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        candidates.push(singletons);
        if twins.len() < n {
            candidates.push(twins.clone());
        }
        let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
        let mut queue = VecDeque::from([twins.clone()]);
        seen.insert(twins);
        while let Some(blocks) = queue.pop_front() {
            if seen.len() >= budget {
                break;
            }
            let q = quotient_graph(g, &blocks);
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    let twins_in_quotient = (0..blocks.len())
                        .filter(|&l| l != i && l != j)
                        .all(|l| q.has_edge(i, l) == q.has_edge(j, l));
                    if !twins_in_quotient || blocks.len() <= 2 {
                        continue;
                    }
                    let mut merged: Vec<Vec<usize>> = Vec::with_capacity(blocks.len() - 1);
                    for (l, b) in blocks.iter().enumerate() {
                        if l == j {
                            continue;
                        }
                        let mut b = b.clone();
                        if l == i {
                            b.extend(&blocks[j]);
                            b.sort_unstable();
                        }
                        merged.push(b);
                    }
                    merged.sort();
                    if seen.insert(merged.clone()) {
                        candidates.push(merged.clone());
                        queue.push_back(merged);
                    }
                }
            }
        }
    }
    let mut best: Option<(usize, usize, Vec<Vec<usize>>)> = None;
    for blocks in candidates {
        if blocks.len() < 2 {
            continue;
        }
        let kind = classify_skeleton(&quotient_graph(g, &blocks)).kind;
        let all_singletons = blocks.len() == n;
        if kind == ShapeKind::Other && all_singletons {
            continue;
        }
        let key = (shape_rank(kind), n - blocks.len());
        if best.as_ref().is_none_or(|(r, s, _)| key < (*r, *s)) {
            best = Some((key.0, key.1, blocks));
        }
    }
    best.map(|(_, _, blocks)| canonical(blocks))
}

/// Classes of vertices with identical neighbourhoods outside each other.
#[allow(clippy::needless_range_loop)]
fn twin_classes(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut class: Vec<usize> = (0..n).collect();
    for u in 0..n {
        if class[u] != u {
            continue;
        }
        for v in u + 1..n {
            if class[v] != v {
                continue;
            }
            let mut nu = g.neighbors(u).clone();
            nu.remove(v);
            let mut nv = g.neighbors(v).clone();
            nv.remove(u);
            if nu == nv {
                class[v] = u;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in class.iter().enumerate() {
        groups.entry(c).or_default().push(v);
    }
    groups.into_values().collect()
}
