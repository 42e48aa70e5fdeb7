//! Irreducible characters of `S_n` by the Murnaghan–Nakayama rule.
//!
//! A *column* is the vector `lambda -> chi_lambda(c)` for one class `c`, stored
//! in canonical partition order. Columns are computed one rim-hook level at a
//! time: strip the longest cycle `r` of `c`, and for every `lambda` sum
//! `(-1)^leg * tail[lambda \ nu]` over rim `r`-hooks `nu`, where `tail` is the
//! column of `c` minus that cycle. The recursion bottoms out at `(1^k)`, whose
//! column is the hook-length degree.
//!
//! A column is a pure function of its class, so [`ColumnCache`] keys on the
//! class alone. Stripping the longest cycle first means short tails such as
//! `(2^k, 1^j)` are shared between classes and between different `n`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{Interval, RealContext};
use crate::partition::{
    class_size, enumerate_partitions, factorial, for_each_rim_hook, hook_degree,
    partitions_with_parts_dividing, CycleType, Partition, PartitionIndexer, RimHookScratch,
};

/// Character values of one class, indexed by canonical partition rank.
///
/// Values fit `i128` for `n <= 57` (`|chi| <= sqrt(n!)`); larger columns, or
/// any column whose evaluation overflows, fall back to big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnValues {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl ColumnValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Small(v) => v.len(),
            Self::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> BigInt {
        match self {
            Self::Small(v) => BigInt::from(v[index]),
            Self::Big(v) => v[index].clone(),
        }
    }

    pub fn is_zero_at(&self, index: usize) -> bool {
        match self {
            Self::Small(v) => v[index] == 0,
            Self::Big(v) => v[index].is_zero(),
        }
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        match self {
            Self::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Self::Big(v) => v.clone(),
        }
    }

    /// Packs into `i128` storage when every entry fits.
    pub fn from_bigints(values: Vec<BigInt>) -> Self {
        let small: Option<Vec<i128>> = values.iter().map(|v| v.to_i128()).collect();
        match small {
            Some(v) => Self::Small(v),
            None => Self::Big(values),
        }
    }
}

pub type Column = Arc<ColumnValues>;

/// Storage for computed columns.
///
/// Implementations must behave as write-once maps: `insert` keeps the first
/// value stored under a key and returns it.
pub trait ColumnCache: Send + Sync {
    fn get(&self, key: &CycleType) -> Option<Column>;
    fn insert(&self, key: CycleType, column: Column) -> Column;
}

/// Caches nothing; every column is recomputed from scratch.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCache;

impl ColumnCache for NoCache {
    fn get(&self, _key: &CycleType) -> Option<Column> {
        None
    }

    fn insert(&self, _key: CycleType, column: Column) -> Column {
        column
    }
}

/// Thread-safe write-once column cache.
#[cfg(feature = "std")]
#[derive(Debug, Default)]
pub struct SharedCache {
    map: std::sync::RwLock<std::collections::HashMap<CycleType, Column>>,
}

#[cfg(feature = "std")]
impl SharedCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries, sorted by class size then canonical order of the class.
    pub fn entries(&self) -> Vec<(CycleType, Column)> {
        let map = self.map.read().expect("cache lock poisoned");
        let mut out: Vec<_> = map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.0.n().cmp(&b.0.n()).then_with(|| b.0.cmp(&a.0)));
        out
    }
}

#[cfg(feature = "std")]
impl ColumnCache for SharedCache {
    fn get(&self, key: &CycleType) -> Option<Column> {
        self.map.read().expect("cache lock poisoned").get(key).cloned()
    }

    fn insert(&self, key: CycleType, column: Column) -> Column {
        let mut map = self.map.write().expect("cache lock poisoned");
        map.entry(key).or_insert(column).clone()
    }
}

/// One class column together with the partitions labelling its entries.
#[derive(Clone, Debug)]
pub struct CharacterColumn {
    pub class: CycleType,
    pub partitions: Vec<Partition>,
    pub values: Column,
}

impl CharacterColumn {
    pub fn get(&self, lambda: &Partition) -> Option<BigInt> {
        if lambda.n() != self.class.n() {
            return None;
        }
        let rank = PartitionIndexer::new(lambda.n()).rank(lambda.parts());
        Some(self.values.get(rank))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, BigInt)> + '_ {
        self.partitions.iter().enumerate().map(|(i, p)| (p, self.values.get(i)))
    }
}

/// Evaluates characters, memoizing whole columns in `C`.
#[derive(Debug, Default)]
pub struct CharacterEngine<C = NoCache> {
    cache: C,
}

impl<C: ColumnCache> CharacterEngine<C> {
    pub fn new(cache: C) -> Self {
        Self { cache }
    }

    pub fn cache(&self) -> &C {
        &self.cache
    }

    /// Column of class `c`, indexed by canonical rank of `lambda`.
    pub fn column(&self, c: &CycleType) -> Column {
        if let Some(col) = self.cache.get(c) {
            return col;
        }
        let col = Arc::new(self.compute_column(c));
        self.cache.insert(c.clone(), col)
    }

    pub fn character_column(&self, c: &CycleType) -> CharacterColumn {
        CharacterColumn {
            class: c.clone(),
            partitions: enumerate_partitions(c.n()),
            values: self.column(c),
        }
    }

    fn compute_column(&self, c: &CycleType) -> ColumnValues {
        let n = c.n();
        let partitions = enumerate_partitions(n);
        let longest = c.lengths().first().copied().unwrap_or(1);
        if longest == 1 {
            let degrees = map_partitions(&partitions, |_, p| BigInt::from(hook_degree(p)));
            return ColumnValues::from_bigints(degrees);
        }
        let tail = CycleType::new(Partition::from_parts_unchecked(c.lengths()[1..].to_vec()));
        let tail_col = self.column(&tail);
        let indexer = PartitionIndexer::new(n - longest);
        strip_level(&partitions, longest, &tail_col, &indexer)
    }

    /// `chi_lambda` on the class `cycles`.
    ///
    /// Uses a cached column when one exists; otherwise runs the
    /// Murnaghan–Nakayama recursion for this single entry, memoized on
    /// (remaining partition, remaining cycles).
    pub fn character(&self, lambda: &Partition, cycles: &CycleType) -> Result<BigInt> {
        if lambda.n() != cycles.n() {
            return Err(Error::SizeMismatch { lambda: lambda.n(), class: cycles.n() });
        }
        if let Some(col) = self.cache.get(cycles) {
            let rank = PartitionIndexer::new(lambda.n()).rank(lambda.parts());
            return Ok(col.get(rank));
        }
        let long: Vec<usize> = cycles.lengths().iter().copied().filter(|&l| l > 1).collect();
        let mut memo = BTreeMap::new();
        let mut scratch = Vec::new();
        Ok(mn_point(lambda.parts(), &long, 0, &mut memo, &mut scratch))
    }
}

fn mn_point(
    parts: &[usize],
    long: &[usize],
    depth: usize,
    memo: &mut BTreeMap<(usize, Vec<usize>), BigInt>,
    scratch: &mut Vec<RimHookScratch>,
) -> BigInt {
    if depth == long.len() {
        return BigInt::from(hook_degree(&Partition::from_parts_unchecked(parts.to_vec())));
    }
    let key = (depth, parts.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    if scratch.len() <= depth {
        scratch.resize_with(depth + 1, RimHookScratch::default);
    }
    let mut removals = Vec::new();
    let mut local = core::mem::take(&mut scratch[depth]);
    for_each_rim_hook(parts, long[depth], &mut local, |rest, leg| removals.push((rest.to_vec(), leg)));
    scratch[depth] = local;
    let mut total = BigInt::zero();
    for (rest, leg) in removals {
        let v = mn_point(&rest, long, depth + 1, memo, scratch);
        if leg % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(key, total.clone());
    total
}

fn strip_level(partitions: &[Partition], r: usize, tail: &ColumnValues, indexer: &PartitionIndexer) -> ColumnValues {
    if let ColumnValues::Small(tail_small) = tail {
        let small: Vec<Option<i128>> = map_partitions(partitions, |scratch, p| {
            let mut acc: Option<i128> = Some(0);
            for_each_rim_hook(p.parts(), r, scratch, |rest, leg| {
                let v = tail_small[indexer.rank(rest)];
                acc = acc.and_then(|a| if leg % 2 == 0 { a.checked_add(v) } else { a.checked_sub(v) });
            });
            acc
        });
        if let Some(values) = small.into_iter().collect::<Option<Vec<i128>>>() {
            return ColumnValues::Small(values);
        }
    }
    let big = map_partitions(partitions, |scratch, p| {
        let mut acc = BigInt::zero();
        for_each_rim_hook(p.parts(), r, scratch, |rest, leg| {
            let v = tail.get(indexer.rank(rest));
            if leg % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        });
        acc
    });
    ColumnValues::from_bigints(big)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_partitions<T: Send>(
    partitions: &[Partition],
    f: impl Fn(&mut RimHookScratch, &Partition) -> T + Sync,
) -> Vec<T> {
    use rayon::prelude::*;
    if partitions.len() < 256 {
        let mut scratch = RimHookScratch::default();
        return partitions.iter().map(|p| f(&mut scratch, p)).collect();
    }
    partitions
        .par_iter()
        .map_init(RimHookScratch::default, |scratch, p| f(scratch, p))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_partitions<T>(partitions: &[Partition], f: impl Fn(&mut RimHookScratch, &Partition) -> T) -> Vec<T> {
    let mut scratch = RimHookScratch::default();
    partitions.iter().map(|p| f(&mut scratch, p)).collect()
}

/// `sum_lambda chi_lambda(1)^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeSum {
    /// `s` is a positive integer.
    Exact(BigRational),
    /// Outward-rounded enclosure of width at most `1e-12`.
    Enclosure(Interval),
}

impl DegreeSum {
    pub fn enclosure(&self) -> Interval {
        match self {
            Self::Exact(q) => Interval::point(q.clone()),
            Self::Enclosure(i) => i.clone(),
        }
    }
}

/// Degrees of `S_n` with multiplicities, ascending.
pub fn degree_multiset(n: usize) -> Vec<(BigUint, usize)> {
    let mut counts: BTreeMap<BigUint, usize> = BTreeMap::new();
    for p in enumerate_partitions(n) {
        *counts.entry(hook_degree(&p)).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

pub fn degree_power_sum(n: usize, s: &BigRational, ctx: &RealContext) -> Result<DegreeSum> {
    if !s.is_positive() {
        return Err(Error::Precondition("degree_power_sum needs s > 0".into()));
    }
    let degrees = degree_multiset(n);
    if s.is_integer() {
        let exp = s.to_integer().to_u32().ok_or_else(|| Error::Precondition("exponent too large".into()))?;
        let sum = degrees.iter().fold(BigRational::zero(), |acc, (d, mult)| {
            acc + BigRational::new(BigInt::from(*mult), BigInt::from(d.pow(exp)))
        });
        return Ok(DegreeSum::Exact(sum));
    }
    let tolerance = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
    let mut bits = ctx.bits().max(64);
    loop {
        let neg_s = -s.clone();
        let mut sum = Interval::from_integer(0);
        for (d, mult) in &degrees {
            let term = if d.is_one() {
                Interval::from_integer(1)
            } else {
                let ln_d = Interval::point(BigRational::from_integer(BigInt::from(d.clone()))).ln(bits);
                ln_d.scale(&neg_s).exp(bits)
            };
            sum = sum.add(&term.scale(&BigRational::from_integer(BigInt::from(*mult))));
        }
        if sum.width() <= tolerance {
            return Ok(DegreeSum::Enclosure(sum));
        }
        bits *= 2;
    }
}

/// Per-character outcome of the integerized Fomin–Lulov inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FominLulovEntry {
    pub lambda: Partition,
    pub passed: bool,
    /// `|chi(pi)|^m n! / ((a! m^a)^m chi(1))`; at most one when the bound holds.
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FominLulovReport {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<FominLulovEntry>,
    pub maximizer: Partition,
    pub max_ratio: BigRational,
}

impl FominLulovReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Checks `|chi(pi)|^m * n! <= (a! m^a)^m * chi(1)` for every `lambda |- n`,
/// where `pi` has cycle shape `(m^a)`, `n = am`. Violations are returned as
/// report entries rather than errors.
pub fn fomin_lulov_entries<C: ColumnCache>(n: usize, m: usize, engine: &CharacterEngine<C>) -> Result<FominLulovReport> {
    if m < 2 || n == 0 || n % m != 0 {
        return Err(Error::Precondition("fomin_lulov needs m >= 2 and m | n, n >= 1".into()));
    }
    let a = n / m;
    let column = engine.character_column(&CycleType::uniform(m, a));
    let degrees = engine.column(&CycleType::identity(n));
    let n_fact = BigInt::from(factorial(n));
    let bound = (BigInt::from(factorial(a)) * BigInt::from(m).pow(a as u32)).pow(m as u32);
    let mut entries = Vec::with_capacity(column.partitions.len());
    let mut best: Option<(usize, BigRational)> = None;
    for (i, (lambda, value)) in column.iter().enumerate() {
        let lhs = value.abs().pow(m as u32) * &n_fact;
        let rhs = &bound * degrees.get(i);
        let ratio = BigRational::new(lhs.clone(), rhs.clone());
        if best.as_ref().map_or(true, |(_, r)| &ratio > r) {
            best = Some((i, ratio.clone()));
        }
        entries.push(FominLulovEntry { lambda: lambda.clone(), passed: lhs <= rhs, ratio });
    }
    let (best_index, max_ratio) = best.expect("S_n has at least one character");
    Ok(FominLulovReport { n, m, maximizer: entries[best_index].lambda.clone(), max_ratio, entries })
}

/// As [`fomin_lulov_entries`], but a violated inequality is an error naming
/// the offending character.
pub fn fomin_lulov_check<C: ColumnCache>(n: usize, m: usize, engine: &CharacterEngine<C>) -> Result<FominLulovReport> {
    let report = fomin_lulov_entries(n, m, engine)?;
    if let Some(bad) = report.entries.iter().find(|e| !e.passed) {
        return Err(Error::BoundViolated {
            bound: "fomin-lulov".into(),
            witness: alloc::format!("n={n} m={m} lambda={}", bad.lambda),
        });
    }
    Ok(report)
}

/// Empirical constant for `|pi^{S_n}| |chi(pi)| < b (n^n)^{1-1/m} chi(1)^{1/m} (2e)^n`.
#[derive(Clone, Debug)]
pub struct ClassCharReport {
    pub n: usize,
    pub m: usize,
    /// Maximizing class and character.
    pub class: CycleType,
    pub lambda: Partition,
    /// `b_hat^m (2e)^{nm}`, exact: `|C|^m |chi|^m / (n^{n(m-1)} chi(1))`.
    pub ratio_power: BigRational,
    /// Enclosure of `b_hat`, the maximum of the left side over the right side with `b = 1`.
    pub b_hat: Interval,
}

pub fn class_char_product_report<C: ColumnCache>(
    n: usize,
    m: usize,
    engine: &CharacterEngine<C>,
    ctx: &RealContext,
) -> Result<ClassCharReport> {
    if m < 2 || n < 2 {
        return Err(Error::Precondition("class_char_product_report needs n >= 2 and m >= 2".into()));
    }
    let degrees = engine.column(&CycleType::identity(n));
    let n_pow = BigInt::from(n).pow((n * (m - 1)) as u32);
    let mut best: Option<(CycleType, usize, BigRational)> = None;
    for cycles in partitions_with_parts_dividing(n, m) {
        let class = CycleType::new(cycles);
        let size = BigInt::from(class_size(&class));
        let column = engine.column(&class);
        for i in 0..column.len() {
            if column.is_zero_at(i) {
                continue;
            }
            let num = (&size * column.get(i).abs()).pow(m as u32);
            let ratio = BigRational::new(num, &n_pow * degrees.get(i));
            if best.as_ref().map_or(true, |(_, _, r)| &ratio > r) {
                best = Some((class.clone(), i, ratio));
            }
        }
    }
    let (class, index, ratio_power) = best.expect("identity class has nonzero values");
    let bits = ctx.bits();
    let ln_two_e = ctx.ln2().add(&Interval::from_integer(1));
    let exponent = Interval::point(ratio_power.clone())
        .ln(bits)
        .scale(&BigRational::new(BigInt::one(), BigInt::from(m)))
        .sub(&ln_two_e.scale(&BigRational::from_integer(BigInt::from(n))));
    let b_hat = exponent.exp(bits);
    let lambda = enumerate_partitions(n).swap_remove(index);
    Ok(ClassCharReport { n, m, class, lambda, ratio_power, b_hat })
}
