//! Grid checks of the character and subgroup-growth inequalities.
//!
//! Inequalities that are theorems with explicit constants (Fomin–Lulov, the
//! class-size bound) are checked exactly and must pass. Those whose constant
//! is unspecified are reported as empirical constants only.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::character::{degree_power_sum, fomin_lulov_entries, CharacterEngine, ColumnCache, DegreeSum};
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSignature;
use crate::hom::{hom_series, transitive_sieve, SubgroupCounts};
use crate::interval::{Interval, RealContext};
use crate::partition::{
    class_size, enumerate_partitions, factorial, partitions_with_parts_dividing, CycleType, PartitionIndexer,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Data only; nothing is asserted.
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportPoint {
    pub params: Vec<(String, String)>,
    pub values: Vec<(String, String)>,
    pub status: Status,
    pub witness: Option<String>,
}

impl ReportPoint {
    fn new(params: &[(&str, String)], status: Status) -> Self {
        Self {
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            values: Vec::new(),
            status,
            witness: None,
        }
    }

    fn value(mut self, key: &str, value: impl ToString) -> Self {
        self.values.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub bound: String,
    pub points: Vec<ReportPoint>,
    /// Empirical constant over the grid, where one is defined.
    pub constant: Option<Interval>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(bound: &str) -> Self {
        Self { bound: bound.into(), points: Vec::new(), constant: None, notes: Vec::new() }
    }

    /// No point failed.
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportPoint> {
        self.points.iter().filter(|p| p.status == Status::Fail)
    }
}

const DIGITS: u32 = 12;

fn show(i: &Interval) -> String {
    format!("[{}, {}]", i.lo_decimal(DIGITS), i.hi_decimal(DIGITS))
}

#[cfg(feature = "parallel")]
fn grid_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn grid_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

/// `|chi(pi)|^m n! <= (a! m^a)^m chi(1)` for every `m` in `2..=6`, `m | n <= n_max`.
pub fn verify_fl<C: ColumnCache>(n_max: usize, engine: &CharacterEngine<C>) -> Result<BoundReport> {
    if n_max > 24 {
        return Err(Error::Precondition("verify_fl runs up to n = 24".into()));
    }
    let grid: Vec<(usize, usize)> =
        (1..=n_max).flat_map(|n| (2..=6).filter(move |m| n % m == 0).map(move |m| (n, m))).collect();
    let rows = grid_map(&grid, |&(n, m)| fomin_lulov_entries(n, m, engine));
    let mut report = BoundReport::new("fomin-lulov");
    for (&(n, m), row) in grid.iter().zip(rows) {
        let row = row?;
        let bad: Vec<String> = row.entries.iter().filter(|e| !e.passed).map(|e| e.lambda.to_string()).collect();
        let mut point = ReportPoint::new(&[("n", n.to_string()), ("m", m.to_string())], if bad.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        })
        .value("characters", row.entries.len())
        .value("max_ratio", &row.max_ratio)
        .value("maximizer", &row.maximizer);
        if !bad.is_empty() {
            point.witness = Some(bad.join(" "));
        }
        report.points.push(point);
    }
    Ok(report)
}

/// `|C|^m <= e^{nm} n^{n(m-1)}` for every class with `pi^m = 1`, `m <= 12`,
/// `n <= n_max`.
pub fn verify_class_size_bound(n_max: usize, ctx: &RealContext) -> Result<BoundReport> {
    if n_max > 30 {
        return Err(Error::Precondition("verify_class_size_bound runs up to n = 30".into()));
    }
    let grid: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (1..=12).map(move |m| (n, m))).collect();
    let rows = grid_map(&grid, |&(n, m)| {
        let e_pow = ctx.e().powi_rounded((n * m) as u64, ctx.bits());
        let n_pow = BigRational::from_integer(BigInt::from(n).pow((n * (m - 1)) as u32));
        let rhs = e_pow.scale(&n_pow);
        let mut worst: Option<(BigRational, String)> = None;
        let mut bad = Vec::new();
        let mut classes = 0usize;
        for cycles in partitions_with_parts_dividing(n, m) {
            classes += 1;
            let class = CycleType::new(cycles);
            let lhs = BigRational::from_integer(BigInt::from(class_size(&class).pow(m as u32)));
            if lhs > *rhs.lo() {
                bad.push(class.to_string());
            }
            let ratio = &lhs / rhs.lo();
            if worst.as_ref().map_or(true, |(r, _)| &ratio > r) {
                worst = Some((ratio, class.to_string()));
            }
        }
        (classes, worst, bad)
    });
    let mut report = BoundReport::new("class-size");
    for (&(n, m), (classes, worst, bad)) in grid.iter().zip(rows) {
        let (ratio, class) = worst.expect("identity class always present");
        let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
        let mut point = ReportPoint::new(&[("n", n.to_string()), ("m", m.to_string())], status)
            .value("classes", classes)
            .value("worst_class", class)
            .value("worst_ratio", show(&Interval::point(ratio).rounded(64)));
        if !bad.is_empty() {
            point.witness = Some(bad.join(" "));
        }
        report.points.push(point);
    }
    Ok(report)
}

fn require_fuchsian(sig: &FuchsianSignature) -> Result<BigRational> {
    let mu = sig.mu();
    if !mu.is_positive() {
        return Err(Error::NonFuchsian);
    }
    Ok(mu)
}

/// Subgroup counts `a_n, s_n` for `n <= n_max`.
pub fn subgroup_counts<C: ColumnCache>(sig: &FuchsianSignature, n_max: usize, engine: &CharacterEngine<C>) -> Result<SubgroupCounts> {
    transitive_sieve(&hom_series(sig, n_max, engine)?)
}

/// Empirical `c` in `s_n <= (c n)^{mu n}`: the maximum over `2 <= n <= n_max`
/// of `s_n^{1/(mu n)} / n`.
pub fn uniform_bound_constant<C: ColumnCache>(
    sig: &FuchsianSignature,
    n_max: usize,
    engine: &CharacterEngine<C>,
    ctx: &RealContext,
) -> Result<BoundReport> {
    let mu = require_fuchsian(sig)?;
    if n_max < 2 {
        return Err(Error::Precondition("uniform_bound_constant needs n_max >= 2".into()));
    }
    let counts = subgroup_counts(sig, n_max, engine)?;
    let mut report = BoundReport::new("uniform-constant");
    report.notes.push(format!("signature {sig}; constant is report-only"));
    let mut best: Option<Interval> = None;
    for n in 2..=n_max {
        let s = counts.s(n);
        let inv = BigRational::one() / (&mu * BigInt::from(n));
        let c_hat = ctx
            .ln_integer(s)
            .scale(&inv)
            .sub(&ctx.ln_integer(&BigUint::from(n)))
            .exp(ctx.bits());
        let status = if s >= &BigUint::one() { Status::Pass } else { Status::Fail };
        report.points.push(
            ReportPoint::new(&[("n", n.to_string())], status).value("s_n", s).value("c_hat", show(&c_hat)),
        );
        best = Some(match best {
            Some(b) => b.max(&c_hat),
            None => c_hat,
        });
    }
    report.constant = best;
    Ok(report)
}

/// `rho_n = ln s_n / (mu n ln n)` and the indicator `s_n >= (n!)^mu`.
pub fn growth_trend<C: ColumnCache>(
    sig: &FuchsianSignature,
    n_max: usize,
    engine: &CharacterEngine<C>,
    ctx: &RealContext,
) -> Result<BoundReport> {
    let mu = require_fuchsian(sig)?;
    if n_max < 2 {
        return Err(Error::Precondition("growth_trend needs n_max >= 2".into()));
    }
    let counts = subgroup_counts(sig, n_max, engine)?;
    let mut report = BoundReport::new("growth-trend");
    let mut indicators = Vec::new();
    for n in 2..=n_max {
        let s = counts.s(n);
        let ln_s = ctx.ln_integer(s);
        let scale = ctx.ln_integer(&BigUint::from(n)).scale(&(&mu * BigInt::from(n)));
        let rho = ln_s.div(&scale);
        let indicator = exceeds_factorial_power(s, n, &mu);
        indicators.push(indicator);
        let ok = s < &BigUint::from(2u32) || rho.lo().is_positive();
        report.points.push(
            ReportPoint::new(&[("n", n.to_string())], if ok { Status::Pass } else { Status::Fail })
                .value("s_n", s)
                .value("rho", show(&rho))
                .value("s_n>=(n!)^mu", indicator),
        );
    }
    let tail = indicators.iter().rev().take_while(|&&b| b).count();
    if tail == 0 {
        report.notes.push(format!("s_n >= (n!)^mu fails at n = {n_max}; no crossover observed"));
    } else {
        report.notes.push(format!("s_n >= (n!)^mu holds for n = {}..={n_max}", n_max + 1 - tail));
    }
    Ok(report)
}

/// First `n` from which the `s = 1` sums strictly decrease. The sum rises
/// once more from `n = 5` (46/15) to `n = 6` (473/144).
pub const DEGREE_SUM_DECREASE_FROM: usize = 6;

/// `sum chi(1)^{-s}` for `1 <= n <= n_max`. For `s = 1` the sums must strictly
/// decrease from [`DEGREE_SUM_DECREASE_FROM`] on and lie in `(2, 2.2)` at `n = 25`.
pub fn degree_sum_trend(n_max: usize, s: &BigRational, ctx: &RealContext) -> Result<BoundReport> {
    let mut report = BoundReport::new("degree-sum");
    let checked = s.is_one();
    if !checked {
        report.notes.push(format!("s = {s}: report only; the limit 2 is approached far beyond these n"));
    }
    let low = BigRational::from_integer(2.into());
    let high = BigRational::new(11.into(), 5.into());
    let ns: Vec<usize> = (1..=n_max).collect();
    let sums = grid_map(&ns, |&n| degree_power_sum(n, s, ctx));
    let mut previous: Option<DegreeSum> = None;
    for (&n, sum) in ns.iter().zip(sums) {
        let sum = sum?;
        let mut status = Status::Report;
        let mut witness = None;
        if let (true, DegreeSum::Exact(v)) = (checked, &sum) {
            status = Status::Pass;
            if n > DEGREE_SUM_DECREASE_FROM {
                if let Some(DegreeSum::Exact(p)) = &previous {
                    if v >= p {
                        status = Status::Fail;
                        witness = Some(format!("sum at n={n} is not below n={}", n - 1));
                    }
                }
            }
            if n == 25 && !(v > &low && v < &high) {
                status = Status::Fail;
                witness = Some("sum at n=25 outside (2, 2.2)".into());
            }
        }
        let text = match &sum {
            DegreeSum::Exact(v) => format!("{} ~ {}", v, Interval::point(v.clone()).lo_decimal(DIGITS)),
            DegreeSum::Enclosure(i) => show(i),
        };
        let mut point = ReportPoint::new(&[("n", n.to_string()), ("s", s.to_string())], status).value("sum", text);
        point.witness = witness;
        report.points.push(point);
        previous = Some(sum);
    }
    Ok(report)
}

/// Empirical constants for the character value bounds with unspecified `b`:
///
/// - `|chi(pi)| <= b (2n)^{C(sigma)/2} chi(1)^{1/m} n^{1/2}` for `pi^m = 1`,
///   where `sigma` is the part of `pi` outside its `m`-cycles and `C(sigma)`
///   its number of cycles;
/// - `|chi(pi)| <= b n^{1/2 - 1/(2m)} chi(1)^{1/m}` for `pi` of shape `(m^a)`.
///
/// Report only.
pub fn character_value_report<C: ColumnCache>(
    n_max: usize,
    engine: &CharacterEngine<C>,
    ctx: &RealContext,
) -> Result<BoundReport> {
    let mut report = BoundReport::new("character-value");
    report.notes.push("constants are empirical; nothing is asserted".into());
    let bits = ctx.bits();
    let mut overall: Option<Interval> = None;
    for n in 2..=n_max {
        let degrees = engine.column(&CycleType::identity(n));
        let ln_deg: Vec<Interval> = (0..degrees.len())
            .map(|i| ctx.ln_integer(&degrees.get(i).to_biguint().expect("positive")))
            .collect();
        let ln_n = ctx.ln_integer(&BigUint::from(n));
        let ln_2n = ctx.ln_integer(&BigUint::from(2 * n));
        for m in 2..=6usize.min(n) {
            let inv_m = BigRational::new(1.into(), BigInt::from(m));
            let half = BigRational::new(1.into(), 2.into());
            let mut general: Option<(Interval, String)> = None;
            let mut uniform: Option<Interval> = None;
            for cycles in partitions_with_parts_dividing(n, m) {
                let class = CycleType::new(cycles);
                let sigma_cycles = class.lengths().iter().filter(|&&l| l != m).count();
                let column = engine.column(&class);
                let is_uniform = sigma_cycles == 0;
                for (i, ln_d) in ln_deg.iter().enumerate() {
                    let value = column.get(i);
                    if value.is_zero() {
                        continue;
                    }
                    let ln_chi = ctx.ln_integer(&value.abs().to_biguint().expect("nonzero"));
                    let base = ln_chi.sub(&ln_d.scale(&inv_m));
                    let g = base
                        .sub(&ln_2n.scale(&BigRational::new(BigInt::from(sigma_cycles), 2.into())))
                        .sub(&ln_n.scale(&half))
                        .exp(bits);
                    if general.as_ref().map_or(true, |(b, _)| g.lo() > b.lo()) {
                        general = Some((g, class.to_string()));
                    }
                    if is_uniform {
                        let exponent = &half - &half * &inv_m;
                        let u = base.sub(&ln_n.scale(&exponent)).exp(bits);
                        uniform = Some(match uniform {
                            Some(b) => b.max(&u),
                            None => u,
                        });
                    }
                }
            }
            let (g, class) = general.expect("identity class present");
            let mut point = ReportPoint::new(&[("n", n.to_string()), ("m", m.to_string())], Status::Report)
                .value("b_hat_value_bound", show(&g))
                .value("argmax_class", class);
            if let Some(u) = uniform {
                point = point.value("b_hat_fl_refined", show(&u));
            }
            overall = Some(match overall {
                Some(b) => b.max(&g),
                None => g,
            });
            report.points.push(point);
        }
    }
    report.constant = overall;
    Ok(report)
}

/// `b_hat(n, m)` for `|C| |chi| < b (n^n)^{1-1/m} chi(1)^{1/m} (2e)^n`, report only.
pub fn class_char_product_trend<C: ColumnCache>(
    n_max: usize,
    engine: &CharacterEngine<C>,
    ctx: &RealContext,
) -> Result<BoundReport> {
    let mut report = BoundReport::new("class-char-product");
    report.notes.push("b_hat is empirical; nothing is asserted".into());
    let mut overall: Option<Interval> = None;
    for n in 2..=n_max {
        for m in 2..=6 {
            let r = crate::character::class_char_product_report(n, m, engine, ctx)?;
            report.points.push(
                ReportPoint::new(&[("n", n.to_string()), ("m", m.to_string())], Status::Report)
                    .value("b_hat", show(&r.b_hat))
                    .value("class", &r.class)
                    .value("lambda", &r.lambda),
            );
            overall = Some(match overall {
                Some(b) => b.max(&r.b_hat),
                None => r.b_hat,
            });
        }
    }
    report.constant = overall;
    Ok(report)
}

/// Checks `sum_lambda chi(1)^2 = n!` and `sum_C |C| = n!` for `n <= n_max`.
pub fn verify_degree_identities(n_max: usize) -> BoundReport {
    let mut report = BoundReport::new("degree-identities");
    for n in 0..=n_max {
        let parts = enumerate_partitions(n);
        let squares: BigUint = parts.iter().map(|p| crate::partition::hook_degree(p).pow(2)).sum();
        let classes: BigUint = parts.iter().map(|p| class_size(&CycleType::new(p.clone()))).sum();
        let f = factorial(n);
        let ok = squares == f && classes == f && parts.len() == PartitionIndexer::new(n).count(n);
        report
            .points
            .push(ReportPoint::new(&[("n", n.to_string())], if ok { Status::Pass } else { Status::Fail }));
    }
    report
}

/// `s_n^{den} >= (n!)^{num}` with `mu = num/den`, exactly.
pub fn exceeds_factorial_power(s_n: &BigUint, n: usize, mu: &BigRational) -> bool {
    let g = mu.numer().gcd(mu.denom());
    let num = (mu.numer() / &g).to_u32().unwrap_or(u32::MAX);
    let den = (mu.denom() / &g).to_u32().unwrap_or(u32::MAX);
    s_n.pow(den) >= factorial(n).pow(num)
}
