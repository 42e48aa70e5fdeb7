//! Character-column cache files.
//!
//! Line-based text, so there is no byte order to fix:
//!
//! ```text
//! #subgrowth-character-cache v1
//! (3,1)\t1,0,-1,0,1
//! ```
//!
//! Each line holds a class and its column, one value per partition of `n` in
//! descending lexicographic order, separated by a tab (`\t` above). Lines starting with `#`
//! after the version line are comments. Every column is checked on load
//! against the centralizer order and against the degree column, which is
//! recomputed from hook lengths.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use subgrowth_core::character::{ColumnCache, ColumnValues, SharedCache};
use subgrowth_core::partition::{class_size, enumerate_partitions, factorial, hook_degree};
use subgrowth_core::CycleType;
use thiserror::Error;

pub const CACHE_HEADER: &str = "#subgrowth-character-cache v1";

#[derive(Debug, Error)]
pub enum CacheFileError {
    #[error("cache line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cache file: {0}")]
    Io(#[from] io::Error),
}

fn bad(line: usize, message: impl Into<String>) -> CacheFileError {
    CacheFileError::Format { line, message: message.into() }
}

/// Writes every cached column.
pub fn save_cache<W: Write>(cache: &SharedCache, mut out: W) -> io::Result<()> {
    writeln!(out, "{CACHE_HEADER}")?;
    for (class, column) in cache.entries() {
        let values: Vec<String> = column.to_bigints().iter().map(ToString::to_string).collect();
        writeln!(out, "{class}\t{}", values.join(","))?;
    }
    out.flush()
}

/// Reads columns into `cache` and returns how many lines were loaded.
pub fn load_cache<R: Read>(input: R, cache: &SharedCache) -> Result<usize, CacheFileError> {
    let mut lines = BufReader::new(input).lines();
    match lines.next().transpose()? {
        Some(first) if first.trim_end() == CACHE_HEADER => {}
        _ => return Err(bad(1, format!("expected version line '{CACHE_HEADER}'"))),
    }
    let mut loaded = 0;
    let mut degrees: Option<(usize, Vec<BigInt>)> = None;
    for (i, line) in lines.enumerate() {
        let number = i + 2;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (class, values) = line.split_once('\t').ok_or_else(|| bad(number, "expected class<TAB>values"))?;
        let class: CycleType = class.parse().map_err(|e| bad(number, format!("class: {e}")))?;
        let values = values
            .split(',')
            .map(|v| v.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(number, "values must be integers"))?;
        let n = class.n();
        if degrees.as_ref().map_or(true, |(m, _)| *m != n) {
            let column = enumerate_partitions(n).iter().map(|p| BigInt::from(hook_degree(p))).collect();
            degrees = Some((n, column));
        }
        let (_, degree) = degrees.as_ref().expect("set above");
        check_column(&class, &values, degree).map_err(|m| bad(number, m))?;
        cache.insert(class, Arc::new(ColumnValues::from_bigints(values)));
        loaded += 1;
    }
    Ok(loaded)
}

fn check_column(class: &CycleType, values: &[BigInt], degree: &[BigInt]) -> Result<(), String> {
    let n = class.n();
    if values.len() != degree.len() {
        return Err(format!("{} values for {} partitions of {n}", values.len(), degree.len()));
    }
    if !values.first().is_some_and(One::is_one) {
        return Err("trivial character must be 1".into());
    }
    let squares: BigInt = values.iter().map(|v| v * v).sum();
    if squares * BigInt::from(class_size(class)) != BigInt::from(factorial(n)) {
        return Err("sum of squares is not the centralizer order".into());
    }
    let regular: BigInt = values.iter().zip(degree).map(|(v, d)| v * d).sum();
    let identity = class.lengths().iter().all(|&l| l == 1);
    if identity != !regular.is_zero() {
        return Err("column is not orthogonal to the degree column".into());
    }
    Ok(())
}
