//! Reference counters: permutation filtering and the downset-lattice DP.

use std::collections::HashMap;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// Counts permutations of the ground set that respect every relation.
pub fn le_bruteforce(p: &Poset, limit: usize) -> Result<BigUint> {
    let n = p.n();
    if n > limit {
        return Err(Error::Size(format!(
            "brute force is limited to {limit} elements, poset has {n}"
        )));
    }
    let relations: Vec<(usize, usize)> = p.hasse_covers();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut position = vec![0usize; n];
    let mut total: u64 = 0;
    loop {
        for (i, &x) in perm.iter().enumerate() {
            position[x] = i;
        }
        if relations.iter().all(|&(a, b)| position[a] < position[b]) {
            total += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(BigUint::from(total))
}

/// Advances to the next permutation in lexicographic order; false after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Number of maximal chains in the lattice of downsets, computed layer by layer.
pub fn le_dp(p: &Poset, limit: usize) -> Result<BigUint> {
    le_dp_bounded(p, limit, usize::MAX)
}

/// [`le_dp`] that also gives up once a single layer holds more than `max_layer` downsets.
pub fn le_dp_bounded(p: &Poset, limit: usize, max_layer: usize) -> Result<BigUint> {
    let n = p.n();
    if n > limit || n > 64 {
        return Err(Error::Size(format!(
            "downset DP is limited to {} elements, poset has {n}",
            limit.min(64)
        )));
    }
    // 34! < 2^128, so narrower posets never overflow the fast path.
    if n <= 34 {
        let v: u128 = layered(p, max_layer)?;
        Ok(BigUint::from(v))
    } else {
        layered::<BigUint>(p, max_layer)
    }
}

fn layered<T>(p: &Poset, max_layer: usize) -> Result<T>
where
    T: Clone + Zero + One + for<'a> AddAssign<&'a T>,
{
    let n = p.n();
    let below: Vec<u64> = (0..n)
        .map(|x| p.below(x).iter().fold(0u64, |m, y| m | (1 << y)))
        .collect();
    let mut layer: HashMap<u64, T> = HashMap::from([(0u64, T::one())]);
    for _ in 0..n {
        let mut next: HashMap<u64, T> = HashMap::with_capacity(layer.len() * 2);
        for (mask, count) in &layer {
            for (x, &under) in below.iter().enumerate() {
                let bit = 1u64 << x;
                if mask & bit == 0 && under & !mask == 0 {
                    *next.entry(mask | bit).or_insert_with(T::zero) += count;
                }
            }
        }
        if next.len() > max_layer {
            return Err(Error::Size(format!(
                "downset lattice layer exceeds {max_layer} states"
            )));
        }
        layer = next;
    }
    Ok(layer.into_values().next().unwrap_or_else(T::one))
}
