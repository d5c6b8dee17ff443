use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient with the conventions `binom(-1, 0) = 1` and
/// `binom(a, b) = 0` for `0 <= a < b`.
pub fn binomial(a: i64, b: i64) -> Result<BigUint> {
    if b < 0 || a < -1 || (a == -1 && b != 0) {
        return Err(Error::Domain(a, b));
    }
    if a == -1 {
        return Ok(BigUint::one());
    }
    if b > a {
        return Ok(BigUint::zero());
    }
    let k = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Pascal's triangle up to a fixed top row, for formulas that evaluate many
/// coefficients with bounded arguments.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(max_a: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_a + 1);
        for a in 0..=max_a {
            let mut row = vec![BigUint::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomialTable { rows }
    }

    /// Same conventions as [`binomial`]; arguments beyond the table fall back to it.
    pub fn get(&self, a: i64, b: i64) -> Result<BigUint> {
        if a >= 0 && b >= 0 && (a as usize) < self.rows.len() {
            return Ok(if b > a {
                BigUint::zero()
            } else {
                self.rows[a as usize][b as usize].clone()
            });
        }
        binomial(a, b)
    }

    /// Like [`BinomialTable::get`] but borrowing; `None` means zero or one per the
    /// conventions, so callers can skip multiplications.
    pub(crate) fn factor(&self, a: i64, b: i64) -> Factor<'_> {
        if a == -1 && b == 0 {
            return Factor::One;
        }
        if a < 0 || b < 0 {
            return Factor::Invalid(a, b);
        }
        if b > a {
            return Factor::Zero;
        }
        if b == 0 || b == a {
            return Factor::One;
        }
        match self.rows.get(a as usize) {
            Some(row) => Factor::Value(&row[b as usize]),
            None => Factor::Invalid(a, b),
        }
    }
}

pub(crate) enum Factor<'a> {
    Zero,
    One,
    Value(&'a BigUint),
    Invalid(i64, i64),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        assert_eq!(binomial(-1, 0).unwrap(), BigUint::one());
        assert_eq!(binomial(3, 4).unwrap(), BigUint::zero());
        assert_eq!(binomial(5, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(binomial(0, 0).unwrap(), BigUint::one());
        assert_eq!(binomial(-2, 0), Err(Error::Domain(-2, 0)));
        assert_eq!(binomial(3, -1), Err(Error::Domain(3, -1)));
        assert_eq!(binomial(-1, 1), Err(Error::Domain(-1, 1)));
    }

    #[test]
    fn large_values_are_exact() {
        let v = binomial(100, 50).unwrap();
        assert_eq!(v.to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn table_matches_direct() {
        let t = BinomialTable::new(30);
        for a in -1..=35i64 {
            for b in 0..=36i64 {
                if a == -1 && b > 0 {
                    continue;
                }
                assert_eq!(t.get(a, b).unwrap(), binomial(a, b).unwrap(), "({a}, {b})");
            }
        }
    }
}
