//! Integer partitions, cycle types and rim hooks.
//!
//! Partitions index both the irreducible characters and the conjugacy classes
//! of `S_n`. The canonical order everywhere in the crate is descending
//! lexicographic, so `(n)` comes first and `(1^n)` last; [`PartitionIndexer`]
//! ranks a partition in that order without a lookup table of partitions.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Validates `parts` (weakly decreasing, all positive).
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition("parts must be weakly decreasing".into()));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// Sorts `parts` into decreasing order first; zeros are dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n = parts.iter().sum();
        Self { parts, n }
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        let n = parts.iter().sum();
        Self { parts, n }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n], n }
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self { parts: vec![1; n], n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Self { parts, n: self.n }
    }

    /// Hook lengths row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &row)| (0..row).map(|j| row - j + conj.parts[j] - i - 1).collect())
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `(3,1,1)`, `3,1,1`, `3 1 1` and exponent shorthand such as
/// `(2^3,1)`. Parts may be given in any order.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('(')
            .map(|rest| rest.strip_suffix(')'))
            .unwrap_or(Some(trimmed))
            .ok_or_else(|| Error::Parse {
                position: trimmed.len(),
                expected: "')'".into(),
            })?;
        let mut parts = Vec::new();
        let mut offset = trimmed.len() - trimmed.trim_start_matches('(').len();
        for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            let here = offset;
            offset += token.len() + 1;
            if token.is_empty() {
                continue;
            }
            let (base, mult) = match token.split_once('^') {
                Some((b, m)) => (b, m),
                None => (token, "1"),
            };
            let bad = || Error::Parse {
                position: here,
                expected: "positive integer part".into(),
            };
            let base: usize = base.parse().map_err(|_| bad())?;
            let mult: usize = mult.parse().map_err(|_| bad())?;
            if base == 0 {
                return Err(bad());
            }
            parts.extend(core::iter::repeat(base).take(mult));
        }
        Ok(Self::from_unsorted(parts))
    }
}

/// A conjugacy class of `S_n`, recorded by its cycle lengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CycleType(Partition);

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        Self(cycles)
    }

    /// The identity class `(1^n)`.
    pub fn identity(n: usize) -> Self {
        Self(Partition::column(n))
    }

    /// The class `(m^a)`: `a` cycles of length `m`.
    pub fn uniform(m: usize, a: usize) -> Self {
        Self(Partition::from_parts_unchecked(vec![m; a]))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0.parts
    }

    pub fn as_partition(&self) -> &Partition {
        &self.0
    }

    /// `(length, multiplicity)` pairs, longest cycles first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &len in &self.0.parts {
            match out.last_mut() {
                Some((l, a)) if *l == len => *a += 1,
                _ => out.push((len, 1)),
            }
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.0.parts.len()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// True when every cycle length divides `m`, i.e. `pi^m = 1`.
    pub fn has_order_dividing(&self, m: usize) -> bool {
        self.0.parts.iter().all(|&len| m % len == 0)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(Self)
    }
}

/// Result of stripping one rim hook from a Young diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RimHookRemoval {
    pub remainder: Partition,
    pub leg_length: usize,
}

/// All partitions of `n` in descending lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition::empty());
        return out;
    }
    let mut current = vec![n];
    loop {
        out.push(Partition::from_parts_unchecked(current.clone()));
        let Some(k) = current.iter().rposition(|&p| p > 1) else {
            break;
        };
        let v = current[k] - 1;
        let mut rem = current.len() - k;
        current.truncate(k);
        current.push(v);
        while rem > 0 {
            let take = v.min(rem);
            current.push(take);
            rem -= take;
        }
    }
    out
}

/// Partitions of `n` whose parts all divide `m`, in canonical order.
pub fn partitions_with_parts_dividing(n: usize, m: usize) -> Vec<Partition> {
    let mut allowed: Vec<usize> = (1..=m.min(n.max(1))).filter(|d| m % d == 0).collect();
    allowed.reverse();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_restricted(n, &allowed, &mut current, &mut out);
    out
}

fn fill_restricted(rem: usize, allowed: &[usize], current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition::from_parts_unchecked(current.clone()));
        return;
    }
    for (i, &part) in allowed.iter().enumerate() {
        if part <= rem {
            current.push(part);
            fill_restricted(rem - part, &allowed[i..], current, out);
            current.pop();
        }
    }
}

/// `p(n)` by Euler's pentagonal-number recurrence.
pub fn partition_count(n: usize) -> BigUint {
    let mut table: Vec<BigInt> = Vec::with_capacity(n + 1);
    table.push(BigInt::one());
    for i in 1..=n {
        let mut sum = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let positive = k % 2 == 1;
            let mut term = table[i - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i {
                term += &table[i - g2];
            }
            if positive {
                sum += term;
            } else {
                sum -= term;
            }
        }
        table.push(sum);
    }
    table[n].to_biguint().expect("p(n) is positive")
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `chi_lambda(1)` by the hook-length formula.
pub fn hook_degree(lambda: &Partition) -> BigUint {
    let hooks = lambda
        .hook_lengths()
        .into_iter()
        .flatten()
        .fold(BigUint::one(), |acc, h| acc * h as u64);
    factorial(lambda.n) / hooks
}

/// Size of the conjugacy class `n! / prod m_i^{a_i} a_i!`.
pub fn class_size(cycles: &CycleType) -> BigUint {
    factorial(cycles.n()) / centralizer_order(cycles)
}

/// `prod m_i^{a_i} a_i!`, the order of the centralizer of any element of the class.
pub fn centralizer_order(cycles: &CycleType) -> BigUint {
    cycles
        .multiplicities()
        .into_iter()
        .fold(BigUint::one(), |acc, (len, mult)| {
            acc * BigUint::from(len).pow(mult as u32) * factorial(mult)
        })
}

/// `#{pi in S_n : pi^m = 1}` as a sum of class sizes.
pub fn elements_of_order_dividing(m: usize, n: usize) -> BigUint {
    partitions_with_parts_dividing(n, m)
        .into_iter()
        .map(|p| class_size(&CycleType::new(p)))
        .sum()
}

/// Every rim `r`-hook of `lambda`, in order of the row where the hook starts.
pub fn rim_hooks(lambda: &Partition, r: usize) -> Vec<RimHookRemoval> {
    let mut scratch = RimHookScratch::default();
    let mut out = Vec::new();
    for_each_rim_hook(lambda.parts(), r, &mut scratch, |rest, leg| {
        out.push(RimHookRemoval {
            remainder: Partition::from_parts_unchecked(rest.to_vec()),
            leg_length: leg,
        });
    });
    out
}

/// Reusable buffers for [`for_each_rim_hook`].
#[derive(Default, Debug)]
pub struct RimHookScratch {
    beta: Vec<usize>,
    rest: Vec<usize>,
}

/// Calls `f(remainder_parts, leg_length)` for every rim `r`-hook of the
/// partition with the given parts.
///
/// Works on the beta-set `beta_i = lambda_i + (l - 1 - i)`: a rim `r`-hook is a
/// bead at `x >= r` with `x - r` vacant, and its leg length is the number of
/// beads strictly between the two positions.
pub fn for_each_rim_hook(
    parts: &[usize],
    r: usize,
    scratch: &mut RimHookScratch,
    mut f: impl FnMut(&[usize], usize),
) {
    if r == 0 {
        return;
    }
    let len = parts.len();
    scratch.beta.clear();
    scratch
        .beta
        .extend(parts.iter().enumerate().map(|(i, &p)| p + (len - 1 - i)));
    for i in 0..len {
        let x = scratch.beta[i];
        if x < r {
            break;
        }
        let y = x - r;
        // beta is strictly decreasing: the beads after i that sit above y.
        let above = scratch.beta[i + 1..].iter().take_while(|&&b| b > y).count();
        if i + 1 + above < len && scratch.beta[i + 1 + above] == y {
            continue;
        }
        let leg = above;
        scratch.rest.clear();
        scratch.rest.extend_from_slice(&parts[..i]);
        for p in i..len {
            let value = if p < i + leg {
                parts[p + 1] - 1
            } else if p == i + leg {
                parts[i] + leg - r
            } else {
                parts[p]
            };
            if value == 0 {
                break;
            }
            scratch.rest.push(value);
        }
        f(&scratch.rest, leg);
    }
}

/// Ranks partitions of sizes up to `n_max` in descending lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionIndexer {
    /// `bounded[k][j]`: partitions of `k` with largest part at most `j`, `j <= k`.
    bounded: Vec<Vec<u64>>,
}

impl PartitionIndexer {
    pub fn new(n_max: usize) -> Self {
        let mut bounded: Vec<Vec<u64>> = Vec::with_capacity(n_max + 1);
        for k in 0..=n_max {
            let mut row = vec![0u64; k + 1];
            if k == 0 {
                row[0] = 1;
            }
            for j in 1..=k {
                let rest = k - j;
                let with_j = bounded[rest][j.min(rest)];
                row[j] = row[j - 1]
                    .checked_add(with_j)
                    .expect("partition index exceeds u64");
            }
            bounded.push(row);
        }
        Self { bounded }
    }

    pub fn n_max(&self) -> usize {
        self.bounded.len() - 1
    }

    /// `p(n)` for `n <= n_max`.
    pub fn count(&self, n: usize) -> usize {
        self.bounded[n][n] as usize
    }

    fn bounded_count(&self, k: usize, j: usize) -> u64 {
        self.bounded[k][j.min(k)]
    }

    /// Position of the partition with these parts among all partitions of
    /// their sum, in canonical order.
    pub fn rank(&self, parts: &[usize]) -> usize {
        let mut remaining: usize = parts.iter().sum();
        let mut bound = remaining;
        let mut rank = 0u64;
        for &p in parts {
            rank += self.bounded_count(remaining, bound) - self.bounded_count(remaining, p);
            remaining -= p;
            bound = p;
        }
        rank as usize
    }
}

/// Number of rim hooks, with the integerized bound `count^2 <= 2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RimHookCount(pub usize);

impl RimHookCount {
    pub fn of(lambda: &Partition, r: usize) -> Self {
        let mut scratch = RimHookScratch::default();
        let mut count = 0;
        for_each_rim_hook(lambda.parts(), r, &mut scratch, |_, _| count += 1);
        Self(count)
    }

    /// `count <= sqrt(2n)` checked as `count^2 <= 2n`.
    pub fn within_sqrt_2n(self, n: usize) -> bool {
        self.0 * self.0 <= 2 * n
    }
}

impl fmt::Display for RimHookCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn join_display<T: fmt::Display>(items: &[T], sep: &str) -> String {
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(&item.to_string());
    }
    out
}
