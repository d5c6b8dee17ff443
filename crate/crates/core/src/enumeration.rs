//! Lazy generation of linear extensions.
//!
//! An extension is a `Vec<usize>` listing the elements in order: position `k` holds
//! the element mapped to `k`.

use std::rc::Rc;

use itertools::Itertools;

use crate::counting::chain_quotient;
use crate::error::{Error, Result};
use crate::modular::{is_poset_partition, reorient, JoinedStructure};
use crate::poset::Poset;

pub type LinearExtension = Vec<usize>;

/// True iff `order` lists every element once and respects every relation.
pub fn is_linear_extension(p: &Poset, order: &[usize]) -> Result<bool> {
    let n = p.n();
    let mut position = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::NotPermutation(n));
    }
    for (i, &x) in order.iter().enumerate() {
        if x >= n || position[x] != usize::MAX {
            return Err(Error::NotPermutation(n));
        }
        position[x] = i;
    }
    Ok(p.relations().all(|(a, b)| position[a] < position[b]))
}

/// Minimal-element recursion, yielding extensions in lexicographic order.
#[derive(Clone, Debug)]
pub struct Backtracking {
    up: Vec<Vec<usize>>,
    pending: Vec<usize>,
    placed: Vec<bool>,
    cursor: Vec<usize>,
    order: Vec<usize>,
    done: bool,
}

impl Backtracking {
    pub fn new(p: &Poset) -> Backtracking {
        let n = p.n();
        let covers = p.hasse_covers();
        let mut up = vec![Vec::new(); n];
        let mut pending = vec![0; n];
        for (a, b) in covers {
            up[a].push(b);
            pending[b] += 1;
        }
        Backtracking {
            up,
            pending,
            placed: vec![false; n],
            cursor: vec![0; n + 1],
            order: Vec::with_capacity(n),
            done: false,
        }
    }

    fn place(&mut self, x: usize) {
        self.placed[x] = true;
        for &y in &self.up[x] {
            self.pending[y] -= 1;
        }
        self.order.push(x);
    }

    fn unplace_last(&mut self) -> bool {
        let Some(x) = self.order.pop() else {
            self.done = true;
            return false;
        };
        self.placed[x] = false;
        for &y in &self.up[x] {
            self.pending[y] += 1;
        }
        true
    }
}

impl Iterator for Backtracking {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        let n = self.placed.len();
        while !self.done {
            let d = self.order.len();
            if d == n {
                let out = self.order.clone();
                self.unplace_last();
                return Some(out);
            }
            let found = (self.cursor[d]..n).find(|&x| !self.placed[x] && self.pending[x] == 0);
            match found {
                Some(x) => {
                    self.cursor[d] = x + 1;
                    self.cursor[d + 1] = 0;
                    self.place(x);
                }
                None => {
                    self.unplace_last();
                }
            }
        }
        None
    }
}

/// Backtracking enumeration, refusing posets above `limit` elements.
pub fn enumerate_backtracking(p: &Poset, limit: usize) -> Result<Backtracking> {
    if p.n() > limit {
        return Err(Error::Size(format!(
            "enumeration is limited to {limit} elements, poset has {}",
            p.n()
        )));
    }
    Ok(Backtracking::new(p))
}

type Factory = Rc<dyn Fn() -> Box<dyn Iterator<Item = Vec<usize>>>>;

/// Cartesian product of restartable streams, last stream varying fastest.
struct Odometer {
    factories: Vec<Factory>,
    live: Vec<Box<dyn Iterator<Item = Vec<usize>>>>,
    current: Vec<Vec<usize>>,
    started: bool,
    done: bool,
}

impl Odometer {
    fn new(factories: Vec<Factory>) -> Odometer {
        Odometer {
            factories,
            live: Vec::new(),
            current: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> Option<&[Vec<usize>]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            for f in &self.factories {
                let mut it = f();
                match it.next() {
                    Some(v) => {
                        self.current.push(v);
                        self.live.push(it);
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
            return Some(&self.current);
        }
        let mut k = self.live.len();
        loop {
            if k == 0 {
                self.done = true;
                return None;
            }
            k -= 1;
            if let Some(v) = self.live[k].next() {
                self.current[k] = v;
                break;
            }
        }
        for j in k + 1..self.live.len() {
            self.live[j] = (self.factories[j])();
            self.current[j] = self.live[j].next().expect("restarted stream is non-empty");
        }
        Some(&self.current)
    }
}

fn module_factory(p: &Poset, block: &[usize]) -> Factory {
    let sub = p.restrict(block);
    let block: Rc<[usize]> = block.into();
    Rc::new(move || {
        let block = Rc::clone(&block);
        Box::new(Backtracking::new(&sub).map(move |ext| ext.into_iter().map(|x| block[x]).collect()))
    })
}

/// Replaces the `k`-th occurrence of letter `s` in `word` by the `k`-th element of
/// `exts[s]`.
fn compose(word: &[usize], exts: &[Vec<usize>]) -> LinearExtension {
    let mut used = vec![0usize; exts.len()];
    word.iter()
        .map(|&s| {
            let x = exts[s][used[s]];
            used[s] += 1;
            x
        })
        .collect()
}

/// Extensions of a poset partition: one extension of the chain quotient (read as
/// an interleaving pattern of blocks) combined with one extension per block.
pub struct ModularEnumerator {
    words: Backtracking,
    owner: Vec<usize>,
    factories: Vec<Factory>,
    modules: Odometer,
    word: Option<Vec<usize>>,
}

pub fn enumerate_modular(p: &Poset, blocks: &[Vec<usize>]) -> Result<ModularEnumerator> {
    if !is_poset_partition(p, blocks)? {
        return Err(Error::NotModular("partition is not modular in the poset".into()));
    }
    let owner = crate::modular::block_index(p.n(), blocks)?;
    let factories: Vec<Factory> = blocks.iter().map(|b| module_factory(p, b)).collect();
    Ok(ModularEnumerator {
        words: Backtracking::new(&chain_quotient(p, blocks)?),
        owner,
        modules: Odometer::new(factories.clone()),
        factories,
        word: None,
    })
}

impl Iterator for ModularEnumerator {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        loop {
            if self.word.is_none() {
                let w = self.words.next()?;
                self.word = Some(w.into_iter().map(|x| self.owner[x]).collect());
                self.modules = Odometer::new(self.factories.clone());
            }
            if let Some(exts) = self.modules.advance() {
                let word = self.word.as_ref().expect("set above");
                return Some(compose(word, exts));
            }
            self.word = None;
        }
    }
}

/// Pivot counts `(i_1, i_3, ..., i_{2D+1})` of an extension: `i_r` is the number of
/// elements of `M_r` placed before every element of every later module.
pub fn pivots_of(js: &JoinedStructure, order: &[usize]) -> Vec<usize> {
    let slots = js.slots();
    let n = order.len();
    let mut slot_of = vec![usize::MAX; n];
    for (s, block) in slots.iter().enumerate() {
        for &x in block {
            slot_of[x] = s;
        }
    }
    (0..slots.len())
        .step_by(2)
        .map(|r| {
            let first_later = order
                .iter()
                .position(|&x| slot_of[x] != usize::MAX && slot_of[x] > r)
                .unwrap_or(n);
            order[..first_later].iter().filter(|&&x| slot_of[x] == r).count()
        })
        .collect()
}

/// Interleavings of one interval `I_{2d}`, as words over slot indices.
fn interval_factory(
    odd_slot: usize,
    rest_of_odd: usize,
    even: usize,
    incomparable: bool,
    next_first: usize,
) -> Factory {
    let len = rest_of_odd + even + next_first;
    Rc::new(move || {
        if len == 0 {
            return Box::new(std::iter::once(Vec::new()));
        }
        // The interval's first position never holds the previous odd module.
        Box::new((1..len).combinations(rest_of_odd).flat_map(move |odd_pos| {
            let free: Vec<usize> = (0..len).filter(|p| !odd_pos.contains(p)).collect();
            let even_choices: Box<dyn Iterator<Item = Vec<usize>>> = if incomparable {
                Box::new(free.clone().into_iter().combinations(even))
            } else {
                Box::new(std::iter::once(free[..even].to_vec()))
            };
            let odd_pos = odd_pos.clone();
            even_choices.map(move |even_pos| {
                let mut word = vec![odd_slot + 2; len];
                for &p in &odd_pos {
                    word[p] = odd_slot;
                }
                for &p in &even_pos {
                    word[p] = odd_slot + 1;
                }
                word
            })
        }))
    })
}

/// Constructive enumeration by pivot tuples: for each tuple the intervals between
/// consecutive pivots are filled independently, then combined with one extension
/// per module.
///
/// The non-empty positions of `js` must form a poset partition of `p` numbered
/// along a linear extension of the quotient, i.e. `reorient(p, js.blocks()) == p`.
pub struct PivotEnumerator {
    sizes: Vec<usize>,
    flags: Vec<bool>,
    /// Slot index -> index among non-empty modules.
    module_of_slot: Vec<usize>,
    module_factories: Vec<Factory>,
    pivots: Vec<usize>,
    tuples_done: bool,
    inner: Option<Odometer>,
}

pub fn enumerate_pivots(p: &Poset, js: &JoinedStructure) -> Result<PivotEnumerator> {
    let blocks = js.blocks();
    // Re-validate against this poset.
    let js = JoinedStructure::from_slots(p, js.slots().to_vec())?;
    if reorient(p, &blocks)? != *p {
        return Err(Error::Condition(
            "modules must be poset-modular and numbered along the quotient order; reorient first"
                .into(),
        ));
    }
    let mut module_of_slot = vec![usize::MAX; js.slots().len()];
    let mut module_factories = Vec::new();
    for (s, block) in js.slots().iter().enumerate() {
        if !block.is_empty() {
            module_of_slot[s] = module_factories.len();
            module_factories.push(module_factory(p, block));
        }
    }
    let sizes: Vec<usize> = js.slots().iter().map(Vec::len).collect();
    let depth = js.depth();
    let mut pivots = vec![0usize; depth + 1];
    pivots[depth] = sizes[2 * depth];
    Ok(PivotEnumerator {
        sizes,
        flags: js.even_incomparable().to_vec(),
        module_of_slot,
        module_factories,
        pivots,
        tuples_done: false,
        inner: None,
    })
}

impl PivotEnumerator {
    fn depth(&self) -> usize {
        self.sizes.len() / 2
    }

    fn advance_tuple(&mut self) -> bool {
        let depth = self.depth();
        let mut d = depth;
        loop {
            if d == 0 {
                self.tuples_done = true;
                return false;
            }
            d -= 1;
            if self.pivots[d] < self.sizes[2 * d] {
                self.pivots[d] += 1;
                return true;
            }
            self.pivots[d] = 0;
        }
    }

    fn tuple_is_possible(&self) -> bool {
        (1..=self.depth()).all(|d| {
            !(self.sizes[2 * d - 1] == 0 && self.pivots[d - 1] == 0 && self.pivots[d] == 0)
        })
    }

    fn build_inner(&self) -> Odometer {
        let mut factories: Vec<Factory> = (1..=self.depth())
            .map(|d| {
                interval_factory(
                    2 * d - 2,
                    self.sizes[2 * d - 2] - self.pivots[d - 1],
                    self.sizes[2 * d - 1],
                    self.flags[d - 1],
                    self.pivots[d],
                )
            })
            .collect();
        factories.extend(self.module_factories.iter().cloned());
        Odometer::new(factories)
    }

    fn compose_current(&self, parts: &[Vec<usize>]) -> LinearExtension {
        let depth = self.depth();
        let mut word: Vec<usize> = vec![0; self.pivots[0]];
        for interval in &parts[..depth] {
            word.extend(interval);
        }
        let letters: Vec<usize> = word.iter().map(|&s| self.module_of_slot[s]).collect();
        compose(&letters, &parts[depth..])
    }

    /// Yields each extension together with the pivot tuple that produced it.
    pub fn tagged(mut self) -> impl Iterator<Item = (Vec<usize>, LinearExtension)> {
        std::iter::from_fn(move || self.next_tagged())
    }

    fn next_tagged(&mut self) -> Option<(Vec<usize>, LinearExtension)> {
        while !self.tuples_done {
            if self.inner.is_none() {
                if !self.tuple_is_possible() {
                    self.advance_tuple();
                    continue;
                }
                self.inner = Some(self.build_inner());
            }
            let inner = self.inner.as_mut().expect("set above");
            if let Some(parts) = inner.advance() {
                let parts = parts.to_vec();
                return Some((self.pivots.clone(), self.compose_current(&parts)));
            }
            self.inner = None;
            self.advance_tuple();
        }
        None
    }
}

impl Iterator for PivotEnumerator {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        self.next_tagged().map(|(_, ext)| ext)
    }
}
