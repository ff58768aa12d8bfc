//! Exact Stirling numbers backed by shared triangular tables.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest row kept in the process-wide table; larger requests build a
/// temporary table.
pub const STIRLING_CACHE_MAX: usize = 60;

/// Triangular tables of unsigned first-kind and second-kind Stirling numbers.
/// Row `n` holds `n + 1` entries, `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct StirlingCache {
    first_kind: Vec<Vec<BigUint>>,
    second_kind: Vec<Vec<BigUint>>,
}

impl StirlingCache {
    /// Builds rows `0..=max_n` from
    /// `s(n+1,k) = n s(n,k) + s(n,k-1)` and `S(n+1,k) = k S(n,k) + S(n,k-1)`.
    pub fn build(max_n: usize) -> Self {
        let mut first_kind: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        let mut second_kind: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        first_kind.push(vec![BigUint::one()]);
        second_kind.push(vec![BigUint::one()]);
        for n in 0..max_n {
            let (prev1, prev2) = (&first_kind[n], &second_kind[n]);
            let mut row1 = vec![BigUint::zero(); n + 2];
            let mut row2 = vec![BigUint::zero(); n + 2];
            for k in 1..=n + 1 {
                let here1 = prev1.get(k).cloned().unwrap_or_default();
                let here2 = prev2.get(k).cloned().unwrap_or_default();
                row1[k] = here1 * BigUint::from(n) + &prev1[k - 1];
                row2[k] = here2 * BigUint::from(k) + &prev2[k - 1];
            }
            first_kind.push(row1);
            second_kind.push(row2);
        }
        StirlingCache { first_kind, second_kind }
    }

    /// The shared table for rows up to [`STIRLING_CACHE_MAX`].
    pub fn global() -> &'static StirlingCache {
        static CACHE: OnceLock<StirlingCache> = OnceLock::new();
        CACHE.get_or_init(|| StirlingCache::build(STIRLING_CACHE_MAX))
    }

    pub fn max_n(&self) -> usize {
        self.first_kind.len() - 1
    }

    pub fn first(&self, n: usize, k: usize) -> BigUint {
        lookup(&self.first_kind, n, k)
    }

    pub fn second(&self, n: usize, k: usize) -> BigUint {
        lookup(&self.second_kind, n, k)
    }

    pub fn first_row(&self, n: usize) -> &[BigUint] {
        &self.first_kind[n]
    }

    pub fn second_row(&self, n: usize) -> &[BigUint] {
        &self.second_kind[n]
    }
}

fn lookup(table: &[Vec<BigUint>], n: usize, k: usize) -> BigUint {
    table.get(n).and_then(|row| row.get(k)).cloned().unwrap_or_default()
}

fn with_table<R>(n: usize, f: impl FnOnce(&StirlingCache) -> R) -> R {
    if n <= STIRLING_CACHE_MAX {
        f(StirlingCache::global())
    } else {
        f(&StirlingCache::build(n))
    }
}

/// Unsigned Stirling number of the first kind: permutations of `n` elements
/// with exactly `k` cycles. Out-of-range indices give 0.
pub fn stirling1_unsigned(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    with_table(n, |t| t.first(n, k))
}

/// Stirling number of the second kind: partitions of an `n`-set into `k`
/// nonempty blocks. Out-of-range indices give 0.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    with_table(n, |t| t.second(n, k))
}
