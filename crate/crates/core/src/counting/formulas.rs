//! Closed formulas in terms of module sizes and module counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::binomial::{binomial, BinomialTable, Factor};
use super::Count;
use crate::error::{Error, Result};
use crate::poset::Poset;

fn check_arity(counts: &[Count], sizes: &[usize]) -> Result<()> {
    if counts.len() != sizes.len() {
        return Err(Error::Arity {
            expected: sizes.len(),
            got: counts.len(),
        });
    }
    Ok(())
}

fn product(counts: &[Count]) -> Count {
    counts.iter().fold(BigUint::one(), |acc, c| acc * c)
}

/// Ordinal sum: the extensions of the parts are simply concatenated.
pub fn le_series(counts: &[Count], sizes: &[usize]) -> Result<Count> {
    check_arity(counts, sizes)?;
    Ok(product(counts))
}

/// Disjoint sum: the parts interleave freely, giving a multinomial factor.
pub fn le_parallel(counts: &[Count], sizes: &[usize]) -> Result<Count> {
    check_arity(counts, sizes)?;
    let mut total = 0i64;
    let mut acc = product(counts);
    for &m in sizes {
        total += m as i64;
        acc *= binomial(total, m as i64)?;
    }
    Ok(acc)
}

/// Centre of size `m1` incomparable to everything else, which is totally ordered
/// between modules.
pub fn star_formula(n: usize, m1: usize, counts: &[Count]) -> Result<Count> {
    Ok(binomial(n as i64, m1 as i64)? * product(counts))
}

fn positive_sizes(sizes: &[usize], what: &str) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Shape(format!("{what} needs at least one module")));
    }
    if let Some(i) = sizes.iter().position(|&m| m == 0) {
        return Err(Error::Shape(format!("module {} of the {what} is empty", i + 1)));
    }
    Ok(())
}

/// Path skeleton `M_1 - M_2 - ... - M_N`, modules listed in path order.
pub fn le_path(counts: &[Count], sizes: &[usize]) -> Result<Count> {
    check_arity(counts, sizes)?;
    positive_sizes(sizes, "path")?;
    let n_mod = sizes.len();
    // m[0] = 0 and i[N+1] = 0 are the boundary conventions; m[N] = i[N] is fixed.
    let mut m = vec![0i64; n_mod + 2];
    for (d, &s) in sizes.iter().enumerate() {
        m[d + 1] = s as i64;
    }
    let mut i = vec![0i64; n_mod + 2];
    i[n_mod] = m[n_mod];
    let mut sum = BigUint::zero();
    loop {
        let mut term = BigUint::one();
        for d in 0..=n_mod {
            term *= binomial(m[d] - i[d] + i[d + 1] - 1, m[d] - i[d])?;
            if term.is_zero() {
                break;
            }
        }
        sum += term;
        // Odometer over i[1..N-1], last index fastest.
        let mut d = n_mod - 1;
        loop {
            if d == 0 {
                return Ok(sum * product(counts));
            }
            if i[d] < m[d] {
                i[d] += 1;
                break;
            }
            i[d] = 0;
            d -= 1;
        }
    }
}

fn odd_even_sizes(sizes: &[usize], what: &str) -> Result<usize> {
    if sizes.len() < 3 || sizes.len().is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "a {what} needs 2D+1 modules with D >= 1, got {}",
            sizes.len()
        )));
    }
    positive_sizes(sizes, what)?;
    Ok(sizes.len() / 2)
}

/// Shared sum for the necklace and tree formulas; `with_even_factor` selects the
/// necklace's second binomial.
fn necklace_like(sizes: &[usize], with_even_factor: bool) -> Result<Count> {
    let depth = sizes.len() / 2;
    // m[k] is the size of M_k, 1-based.
    let m: Vec<i64> = std::iter::once(0)
        .chain(sizes.iter().map(|&s| s as i64))
        .collect();
    fn go(
        m: &[i64],
        depth: usize,
        d: usize,
        prev: i64,
        with_even_factor: bool,
    ) -> Result<Count> {
        let lo = m[2 * d - 1];
        let even = m[2 * d];
        let next_range = if d == depth {
            m[2 * d + 1]..=m[2 * d + 1]
        } else {
            0..=m[2 * d + 1]
        };
        let mut sum = BigUint::zero();
        for next in next_range {
            let mut f = binomial(even + lo + next - prev - 1, lo - prev)?;
            if f.is_zero() {
                continue;
            }
            if with_even_factor {
                f *= binomial(even + next, even)?;
            }
            if d < depth {
                f *= go(m, depth, d + 1, next, with_even_factor)?;
            }
            sum += f;
        }
        Ok(sum)
    }
    let mut sum = BigUint::zero();
    for first in 0..=m[1] {
        sum += go(&m, depth, 1, first, with_even_factor)?;
    }
    Ok(sum)
}

/// Necklace of triangles `M_{2d-1}, M_{2d}, M_{2d+1}` glued along the odd modules.
pub fn le_necklace(counts: &[Count], sizes: &[usize]) -> Result<Count> {
    check_arity(counts, sizes)?;
    odd_even_sizes(sizes, "necklace")?;
    Ok(necklace_like(sizes, true)? * product(counts))
}

/// Full binary tree: spine of odd modules, each even module a leaf hanging off
/// the odd module before it.
pub fn le_tree(counts: &[Count], sizes: &[usize]) -> Result<Count> {
    check_arity(counts, sizes)?;
    odd_even_sizes(sizes, "tree")?;
    Ok(necklace_like(sizes, false)? * product(counts))
}

/// Sizes and even-module flags of a joined structure, independent of any poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JoinedShape {
    sizes: Vec<usize>,
    even_incomparable: Vec<bool>,
}

impl JoinedShape {
    /// `sizes` are `m_1..m_{2D+1}` (even entries may be 0); `even_incomparable[d-1]`
    /// says whether `M_{2d}` is non-empty and incomparable to `M_{2d+1}`.
    pub fn new(sizes: Vec<usize>, even_incomparable: Vec<bool>) -> Result<JoinedShape> {
        if sizes.len().is_multiple_of(2) {
            return Err(Error::Condition(format!(
                "expected 2D+1 module sizes, got {}",
                sizes.len()
            )));
        }
        let depth = sizes.len() / 2;
        if even_incomparable.len() != depth {
            return Err(Error::Arity {
                expected: depth,
                got: even_incomparable.len(),
            });
        }
        if let Some(k) = (0..sizes.len()).step_by(2).find(|&k| sizes[k] == 0) {
            return Err(Error::Condition(format!("odd module M_{} is empty", k + 1)));
        }
        if let Some(d) = (0..depth).find(|&d| even_incomparable[d] && sizes[2 * d + 1] == 0) {
            return Err(Error::Condition(format!(
                "M_{} is flagged incomparable but empty",
                2 * d + 2
            )));
        }
        Ok(JoinedShape {
            sizes,
            even_incomparable,
        })
    }

    pub fn depth(&self) -> usize {
        self.sizes.len() / 2
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn even_incomparable(&self) -> &[bool] {
        &self.even_incomparable
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of pivot tuples `(i_1, i_3, ..., i_{2D-1})`.
    pub fn tuple_count(&self) -> u128 {
        (0..self.depth())
            .map(|d| self.sizes[2 * d] as u128 + 1)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// Summand for one pivot tuple; `pivots[d-1] = i_{2d-1}` for `d = 1..=D`.
    pub fn summand(&self, pivots: &[usize]) -> Result<Count> {
        if pivots.len() != self.depth() {
            return Err(Error::Arity {
                expected: self.depth(),
                got: pivots.len(),
            });
        }
        let table = BinomialTable::new(self.total() + 1);
        self.summand_with(&table, pivots)
    }

    fn summand_with(&self, table: &BinomialTable, pivots: &[usize]) -> Result<Count> {
        let mut term = BigUint::one();
        for d in 1..=self.depth() {
            match self.interval_factor(table, d, pivots)? {
                None => return Ok(BigUint::zero()),
                Some(f) => term *= f,
            }
        }
        Ok(term)
    }

    /// Factor of interval `I_{2d}`; `None` when it vanishes.
    fn interval_factor(
        &self,
        table: &BinomialTable,
        d: usize,
        pivots: &[usize],
    ) -> Result<Option<Count>> {
        let prev = pivots[d - 1] as i64;
        let next = if d == self.depth() {
            self.sizes[2 * d] as i64
        } else {
            pivots[d] as i64
        };
        self.pair_factor(table, d, prev, next)
    }

    fn pair_factor(
        &self,
        table: &BinomialTable,
        d: usize,
        prev: i64,
        next: i64,
    ) -> Result<Option<Count>> {
        let odd = self.sizes[2 * d - 2] as i64;
        let even = self.sizes[2 * d - 1] as i64;
        let mut f = match table.factor(even + odd + next - prev - 1, odd - prev) {
            Factor::Zero => return Ok(None),
            Factor::One => BigUint::one(),
            Factor::Value(v) => v.clone(),
            Factor::Invalid(a, b) => return Err(Error::Domain(a, b)),
        };
        if self.even_incomparable[d - 1] {
            match table.factor(even + next, even) {
                Factor::Zero => return Ok(None),
                Factor::One => {}
                Factor::Value(v) => f *= v,
                Factor::Invalid(a, b) => return Err(Error::Domain(a, b)),
            }
        }
        Ok(Some(f))
    }

    /// Sum over all pivot tuples, one independent summand per tuple, split across
    /// threads by the first pivot.
    pub fn pivot_sum(&self) -> Result<Count> {
        let table = BinomialTable::new(self.total() + 1);
        let depth = self.depth();
        if depth == 0 {
            return Ok(BigUint::one());
        }
        let partials: Result<Vec<Count>> = (0..=self.sizes[0])
            .into_par_iter()
            .map(|first| {
                let mut pivots = vec![0usize; depth];
                pivots[0] = first;
                let mut sum = BigUint::zero();
                loop {
                    sum += self.summand_with(&table, &pivots)?;
                    let mut d = depth - 1;
                    loop {
                        if d == 0 {
                            return Ok(sum);
                        }
                        if pivots[d] < self.sizes[2 * d] {
                            pivots[d] += 1;
                            break;
                        }
                        pivots[d] = 0;
                        d -= 1;
                    }
                }
            })
            .collect();
        Ok(partials?.into_iter().sum())
    }

    /// The same sum evaluated as a product of transfer matrices over consecutive
    /// pivots; polynomial in the sizes.
    pub fn transfer_sum(&self) -> Result<Count> {
        let table = BinomialTable::new(self.total() + 1);
        let depth = self.depth();
        if depth == 0 {
            return Ok(BigUint::one());
        }
        let mut weights: Vec<Count> = vec![BigUint::one(); self.sizes[0] + 1];
        for d in 1..=depth {
            let range: Vec<usize> = if d == depth {
                vec![self.sizes[2 * d]]
            } else {
                (0..=self.sizes[2 * d]).collect()
            };
            let mut next_weights = Vec::with_capacity(range.len());
            for &next in &range {
                let mut acc = BigUint::zero();
                for (prev, w) in weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    if let Some(f) = self.pair_factor(&table, d, prev as i64, next as i64)? {
                        acc += w * f;
                    }
                }
                next_weights.push(acc);
            }
            weights = next_weights;
        }
        Ok(weights.pop().unwrap_or_default())
    }
}

/// Above this many pivot tuples the transfer-matrix evaluation is used.
pub const PIVOT_SUM_LIMIT: u128 = 1 << 20;

/// General joined skeleton; `counts` are for the non-empty modules in position order.
pub fn le_joined_shape(shape: &JoinedShape, counts: &[Count]) -> Result<Count> {
    let nonempty = shape.sizes.iter().filter(|&&m| m > 0).count();
    if counts.len() != nonempty {
        return Err(Error::Arity {
            expected: nonempty,
            got: counts.len(),
        });
    }
    let sum = if shape.tuple_count() > PIVOT_SUM_LIMIT {
        shape.transfer_sum()?
    } else {
        shape.pivot_sum()?
    };
    Ok(sum * product(counts))
}

/// Number of words containing `sizes[i]` copies of letter `i` in which no copy of
/// `i` precedes the last copy of any `j < i` in `quotient`. This is the count of
/// the lexicographic sum of chains over `quotient`.
pub fn chain_quotient_count(quotient: &Poset, sizes: &[usize], max_states: usize) -> Result<Count> {
    let k = quotient.n();
    if sizes.len() != k {
        return Err(Error::Arity {
            expected: k,
            got: sizes.len(),
        });
    }
    let mut strides = Vec::with_capacity(k);
    let mut states: usize = 1;
    for &m in sizes {
        strides.push(states);
        states = states
            .checked_mul(m + 1)
            .filter(|&s| s <= max_states)
            .ok_or_else(|| Error::Size(format!("quotient DP exceeds {max_states} states")))?;
    }
    let preds: Vec<Vec<usize>> = (0..k).map(|i| quotient.below(i).iter().collect()).collect();
    let mut table: Vec<Count> = vec![BigUint::zero(); states];
    table[0] = BigUint::one();
    let mut digits = vec![0usize; k];
    for s in 0..states {
        if s > 0 {
            // Increment the mixed-radix digits of s.
            for (i, digit) in digits.iter_mut().enumerate() {
                if *digit < sizes[i] {
                    *digit += 1;
                    break;
                }
                *digit = 0;
            }
        }
        if table[s].is_zero() {
            continue;
        }
        let value = table[s].clone();
        for i in 0..k {
            if digits[i] < sizes[i] && preds[i].iter().all(|&j| digits[j] == sizes[j]) {
                table[s + strides[i]] += &value;
            }
        }
    }
    Ok(table.pop().unwrap_or_else(BigUint::one))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(k: usize) -> Vec<Count> {
        vec![BigUint::one(); k]
    }

    fn big(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn series_and_parallel() {
        assert_eq!(le_series(&ones(2), &[2, 3]).unwrap(), big(1));
        assert_eq!(le_parallel(&ones(2), &[1, 1]).unwrap(), big(2));
        assert_eq!(le_parallel(&ones(3), &[1, 1, 1]).unwrap(), big(6));
        assert_eq!(le_parallel(&[big(2), big(3)], &[2, 3]).unwrap(), big(60));
        assert!(matches!(le_series(&ones(1), &[1, 2]), Err(Error::Arity { .. })));
    }

    #[test]
    fn path_small() {
        assert_eq!(le_path(&[big(7)], &[4]).unwrap(), big(7));
        assert_eq!(le_path(&ones(2), &[1, 1]).unwrap(), big(2));
        assert_eq!(le_path(&ones(2), &[2, 1]).unwrap(), big(3));
        assert!(matches!(le_path(&ones(2), &[2, 0]), Err(Error::Shape(_))));
    }

    #[test]
    fn necklace_and_tree_small() {
        assert_eq!(le_necklace(&ones(3), &[1, 1, 1]).unwrap(), big(6));
        // M_1 a 2-chain, everything incomparable: 4!/2.
        assert_eq!(le_necklace(&ones(3), &[2, 1, 1]).unwrap(), big(12));
        assert_eq!(le_tree(&ones(3), &[1, 1, 1]).unwrap(), big(3));
        assert_eq!(le_tree(&[big(2), big(1), big(1)], &[2, 1, 1]).unwrap(), big(12));
        assert!(matches!(le_tree(&ones(2), &[1, 1]), Err(Error::Shape(_))));
    }

    #[test]
    fn joined_reductions_small() {
        let path = JoinedShape::new(vec![2, 0, 1, 0, 3], vec![false, false]).unwrap();
        assert_eq!(
            le_joined_shape(&path, &ones(3)).unwrap(),
            le_path(&ones(3), &[2, 1, 3]).unwrap()
        );
        let neck = JoinedShape::new(vec![1, 2, 1, 1, 2], vec![true, true]).unwrap();
        assert_eq!(
            le_joined_shape(&neck, &ones(5)).unwrap(),
            le_necklace(&ones(5), &[1, 2, 1, 1, 2]).unwrap()
        );
        let tree = JoinedShape::new(vec![1, 2, 1, 1, 2], vec![false, false]).unwrap();
        assert_eq!(
            le_joined_shape(&tree, &ones(5)).unwrap(),
            le_tree(&ones(5), &[1, 2, 1, 1, 2]).unwrap()
        );
    }

    #[test]
    fn vanishing_summand() {
        // m_2 = 0 with i_1 = i_3 = 0 is impossible.
        let shape = JoinedShape::new(vec![2, 0, 3, 1, 1], vec![false, true]).unwrap();
        assert_eq!(shape.summand(&[0, 0]).unwrap(), BigUint::zero());
        assert_eq!(shape.summand(&[1, 0]).unwrap(), BigUint::zero());
        assert_eq!(shape.summand(&[1, 1]).unwrap(), big(6));
    }

    #[test]
    fn transfer_agrees_with_pivot_sum() {
        let shape = JoinedShape::new(vec![3, 2, 1, 0, 4, 1, 2], vec![true, false, false]).unwrap();
        assert_eq!(shape.pivot_sum().unwrap(), shape.transfer_sum().unwrap());
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(JoinedShape::new(vec![1, 1], vec![true]), Err(Error::Condition(_))));
        assert!(matches!(JoinedShape::new(vec![0, 1, 1], vec![true]), Err(Error::Condition(_))));
        assert!(matches!(JoinedShape::new(vec![1, 0, 1], vec![true]), Err(Error::Condition(_))));
        assert!(matches!(JoinedShape::new(vec![1, 0, 1], vec![]), Err(Error::Arity { .. })));
    }

    #[test]
    fn chain_quotient_words() {
        // Two incomparable letters: binom(5, 2).
        assert_eq!(chain_quotient_count(&Poset::antichain(2), &[2, 3], 1000).unwrap(), big(10));
        assert_eq!(chain_quotient_count(&Poset::chain(3), &[2, 3, 1], 1000).unwrap(), big(1));
        assert!(matches!(
            chain_quotient_count(&Poset::antichain(3), &[9, 9, 9], 100),
            Err(Error::Size(_))
        ));
    }
}
