//! Minimal covolumes of maximal arithmetic lattices in `PGL_2(R)` and a
//! census of candidates under a covolume budget.
//!
//! A quaternion algebra `A` over a totally real field `k` of degree `d`,
//! split at exactly one real place, is fixed by its finite ramification
//! `Ram_f`; `(d - 1) + |Ram_f|` must be even. The smallest covolume in its
//! commensurability class is
//!
//! ```text
//! 8 pi D^{3/2} zeta_k(2) prod_{P in Ram_f} (N(P) - 1) / ((4 pi^2)^d * bracket)
//! ```
//!
//! where `D` is the absolute discriminant and `1 <= bracket <= 2^{d+|Ram_f|} h_k`.
//! When `zeta_k(2) = q pi^{2d} / sqrt(D)` with `q` rational, the covolume is the
//! exact multiple `8 D q prod(N-1) / (4^d bracket)` of pi. The other maximal
//! lattices `Gamma_S` in the class scale this by `2^{-m} prod_{P in S} (N(P)+1)`
//! for some `0 <= m <= |S|`.
//!
//! Field data is ingested, never computed: see [`NumberFieldInvariants`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fuchsian::PiMultiple;
use crate::interval::{Interval, RealContext};

/// `zeta_k(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Zeta2 {
    /// `q` with `zeta_k(2) = q pi^{2d} / sqrt(D)`.
    Exact(BigRational),
    Interval(Interval),
}

/// A prime ideal, known only by its norm and a display label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub label: String,
    pub norm: u64,
}

impl PrimeIdeal {
    pub fn new(label: impl Into<String>, norm: u64) -> Result<Self> {
        if !is_prime_power(norm) {
            return Err(Error::InvalidField(format!("prime norm {norm} is not a prime power")));
        }
        Ok(Self { label: label.into(), norm })
    }
}

pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldInvariants {
    pub label: String,
    pub degree: u32,
    /// Absolute value of the discriminant.
    pub disc: BigUint,
    pub zeta2: Zeta2,
    pub class_number: BigUint,
    /// Finite primes available for ramification and S-sets, ascending norm.
    pub primes: Vec<PrimeIdeal>,
}

impl NumberFieldInvariants {
    pub fn new(
        label: impl Into<String>,
        degree: u32,
        disc: BigUint,
        zeta2: Zeta2,
        class_number: BigUint,
        mut primes: Vec<PrimeIdeal>,
    ) -> Result<Self> {
        let label = label.into();
        if degree == 0 {
            return Err(Error::InvalidField(format!("{label}: degree must be positive")));
        }
        if disc.is_zero() {
            return Err(Error::InvalidField(format!("{label}: discriminant must be positive")));
        }
        if class_number.is_zero() {
            return Err(Error::InvalidField(format!("{label}: class number must be positive")));
        }
        if degree == 1 && (!disc.is_one() || !class_number.is_one()) {
            return Err(Error::InvalidField(format!("{label}: a degree-1 field is Q (disc 1, class number 1)")));
        }
        match &zeta2 {
            Zeta2::Exact(q) if !q.is_positive() => {
                return Err(Error::InvalidField(format!("{label}: zeta2 coefficient must be positive")));
            }
            Zeta2::Interval(i) if i.lo() <= &BigRational::one() => {
                return Err(Error::InvalidField(format!("{label}: zeta2 interval must lie above 1")));
            }
            _ => {}
        }
        primes.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.label.cmp(&b.label)));
        Ok(Self { label, degree, disc, zeta2, class_number, primes })
    }

    /// `Q`, with every prime up to `bound`.
    pub fn rationals(bound: u64) -> Self {
        let primes = (2..=bound)
            .filter(|&p| is_prime_power(p) && (2..p).all(|q| p % q != 0))
            .map(|p| PrimeIdeal { label: p.to_string(), norm: p })
            .collect();
        Self::new("Q", 1, BigUint::one(), Zeta2::Exact(BigRational::new(1.into(), 6.into())), BigUint::one(), primes)
            .expect("valid")
    }

    /// `Q(sqrt 5)`, primes of norm up to 50. `zeta(2) = 2 pi^4 / (75 sqrt 5)`.
    pub fn q_sqrt5() -> Self {
        let norms: [(&str, u64); 14] = [
            ("2", 4),
            ("sqrt5", 5),
            ("3", 9),
            ("11a", 11),
            ("11b", 11),
            ("19a", 19),
            ("19b", 19),
            ("29a", 29),
            ("29b", 29),
            ("31a", 31),
            ("31b", 31),
            ("41a", 41),
            ("41b", 41),
            ("7", 49),
        ];
        let primes = norms.iter().map(|&(l, n)| PrimeIdeal { label: l.into(), norm: n }).collect();
        Self::new(
            "Q(sqrt5)",
            2,
            BigUint::from(5u32),
            Zeta2::Exact(BigRational::new(2.into(), 75.into())),
            BigUint::one(),
            primes,
        )
        .expect("valid")
    }

    /// Enclosure of `zeta_k(2)`.
    pub fn zeta2_enclosure(&self, ctx: &RealContext) -> Interval {
        match &self.zeta2 {
            Zeta2::Exact(q) => {
                let root = ctx.sqrt(&Interval::point(BigRational::from_integer(self.disc.clone().into())));
                ctx.pi().powi(2 * self.degree).scale(q).div(&root)
            }
            Zeta2::Interval(i) => i.clone(),
        }
    }
}

/// Finite ramification of a quaternion algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RamificationData {
    pub finite: Vec<PrimeIdeal>,
}

impl RamificationData {
    pub fn new(finite: Vec<PrimeIdeal>) -> Self {
        Self { finite }
    }

    /// Unlabelled primes of the given norms.
    pub fn from_norms(norms: &[u64]) -> Result<Self> {
        Ok(Self { finite: norms.iter().map(|&n| PrimeIdeal::new(n.to_string(), n)).collect::<Result<_>>()? })
    }

    pub fn norms(&self) -> Vec<u64> {
        self.finite.iter().map(|p| p.norm).collect()
    }

    /// `|Ram(A)| = (d - 1) + |Ram_f|` must be even.
    pub fn check_parity(&self, degree: u32) -> Result<()> {
        let size = (degree as usize - 1) + self.finite.len();
        if size % 2 == 1 {
            return Err(Error::ParityViolation { size });
        }
        Ok(())
    }
}

/// The unit/ideal index bracket dividing the covolume formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketValue {
    Exact(BigUint),
    /// The whole certified range `[1, 2^{d+|Ram_f|} h_k]`.
    Range,
}

impl BracketValue {
    pub fn upper_limit(field: &NumberFieldInvariants, ram_count: usize) -> BigUint {
        (BigUint::one() << (field.degree as usize + ram_count)) * &field.class_number
    }

    /// `(low, high)` bracket values.
    pub fn range(&self, field: &NumberFieldInvariants, ram_count: usize) -> Result<(BigUint, BigUint)> {
        let limit = Self::upper_limit(field, ram_count);
        match self {
            Self::Exact(v) if v.is_zero() || v > &limit => {
                Err(Error::InvalidBracket(format!("{v} outside [1, {limit}]")))
            }
            Self::Exact(v) => Ok((v.clone(), v.clone())),
            Self::Range => Ok((BigUint::one(), limit)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Exact(v) => v.to_string(),
            Self::Range => "range".into(),
        }
    }
}

/// A covolume: exact pi-multiples `[lo, hi] * pi`, or a real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Covolume {
    Pi { lo: BigRational, hi: BigRational },
    Real(Interval),
}

impl Covolume {
    pub fn exact(value: &PiMultiple) -> Self {
        Self::Pi { lo: value.coefficient().clone(), hi: value.coefficient().clone() }
    }

    /// The single exact value, if there is one.
    pub fn as_pi_multiple(&self) -> Option<PiMultiple> {
        match self {
            Self::Pi { lo, hi } if lo == hi => Some(PiMultiple::new(lo.clone())),
            _ => None,
        }
    }

    pub fn enclosure(&self, ctx: &RealContext) -> Interval {
        match self {
            Self::Pi { lo, hi } => {
                let pi = ctx.pi();
                Interval::new(pi.lo() * lo, pi.hi() * hi)
            }
            Self::Real(i) => i.clone(),
        }
    }

    /// Multiplies both ends by positive rationals `lo_factor <= hi_factor`.
    pub fn scale(&self, lo_factor: &BigRational, hi_factor: &BigRational) -> Self {
        match self {
            Self::Pi { lo, hi } => Self::Pi { lo: lo * lo_factor, hi: hi * hi_factor },
            Self::Real(i) => Self::Real(Interval::new(i.lo() * lo_factor, i.hi() * hi_factor)),
        }
    }

    /// Raises the lower end to at least `floor * pi`.
    fn clamp_below(&self, floor: &BigRational, ctx: &RealContext) -> Self {
        match self {
            Self::Pi { lo, hi } => Self::Pi { lo: lo.max(floor).clone(), hi: hi.max(floor).clone() },
            Self::Real(i) => {
                let f = ctx.pi().lo() * floor;
                Self::Real(Interval::new(i.lo().max(&f).clone(), i.hi().max(&f).clone()))
            }
        }
    }

    /// Whether the lower end may be at most `budget`.
    pub fn lower_possibly_le(&self, budget: &Budget, ctx: &RealContext) -> bool {
        match (self, budget) {
            (Self::Pi { lo, .. }, Budget::Pi(q)) => lo <= q.coefficient(),
            _ => self.lower_enclosure(ctx).possibly_le(&budget.enclosure(ctx)),
        }
    }

    fn lower_enclosure(&self, ctx: &RealContext) -> Interval {
        match self {
            Self::Pi { lo, .. } => ctx.pi().scale(lo),
            Self::Real(i) => Interval::point(i.lo().clone()),
        }
    }

    /// Lower and upper end as decimal or `q*pi` strings.
    pub fn endpoints(&self, digits: u32) -> (String, String) {
        match self {
            Self::Pi { lo, hi } => (format!("{lo}*pi"), format!("{hi}*pi")),
            Self::Real(i) => (i.lo_decimal(digits), i.hi_decimal(digits)),
        }
    }
}

impl fmt::Display for Covolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pi { lo, hi } if lo == hi => write!(f, "{lo}*pi"),
            Self::Pi { lo, hi } => write!(f, "[{lo}*pi, {hi}*pi]"),
            Self::Real(i) => write!(f, "{i}"),
        }
    }
}

/// A covolume budget `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Budget {
    Pi(PiMultiple),
    Real(BigRational),
}

impl Budget {
    pub fn enclosure(&self, ctx: &RealContext) -> Interval {
        match self {
            Self::Pi(p) => p.enclosure(ctx),
            Self::Real(r) => Interval::point(r.clone()),
        }
    }

    /// Certainly below Siegel's floor `pi/42`.
    pub fn below_siegel_floor(&self, ctx: &RealContext) -> bool {
        match self {
            Self::Pi(p) => p.coefficient() < &siegel_floor(),
            Self::Real(r) => r < ctx.pi().scale(&siegel_floor()).lo(),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pi(p) => p.fmt(f),
            Self::Real(r) => r.fmt(f),
        }
    }
}

/// `q*pi` forms as for [`PiMultiple`], else an integer, fraction or decimal.
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.to_ascii_lowercase().contains("pi") {
            return Ok(Self::Pi(s.parse()?));
        }
        let value = crate::interval::parse_decimal(s)?;
        Ok(Self::Real(value))
    }
}

/// `1/42`: every lattice has covolume at least `pi/42`.
pub fn siegel_floor() -> BigRational {
    BigRational::new(1.into(), 42.into())
}

fn product_minus_one(norms: &[u64]) -> BigRational {
    norms.iter().fold(BigRational::one(), |acc, &n| acc * BigInt::from(n - 1))
}

/// `8 D q / 4^d` or the interval `8 pi D^{3/2} zeta / (4 pi^2)^d`, before
/// ramification and bracket.
fn base_covolume(field: &NumberFieldInvariants, ctx: &RealContext) -> Covolume {
    match &field.zeta2 {
        Zeta2::Exact(q) => {
            let c = BigRational::new(BigInt::from(8) * BigInt::from(field.disc.clone()), BigInt::from(4).pow(field.degree))
                * q;
            Covolume::Pi { lo: c.clone(), hi: c }
        }
        Zeta2::Interval(z) => {
            let disc = Interval::point(BigRational::from_integer(field.disc.clone().into()));
            let disc_32 = disc.mul(&ctx.sqrt(&disc));
            let four_pi2 = ctx.pi().powi(2).scale(&BigRational::from_integer(4.into()));
            let num = ctx.pi().scale(&BigRational::from_integer(8.into())).mul(&disc_32).mul(z);
            Covolume::Real(num.div(&four_pi2.powi(field.degree)))
        }
    }
}

/// Minimal covolume in the commensurability class of the algebra ramified at
/// `ram`, for the given bracket.
pub fn min_covolume(
    field: &NumberFieldInvariants,
    ram: &RamificationData,
    bracket: &BracketValue,
    ctx: &RealContext,
) -> Result<Covolume> {
    ram.check_parity(field.degree)?;
    if let Some(p) = ram.finite.iter().find(|p| p.norm < 2) {
        return Err(Error::InvalidField(format!("prime norm {} < 2", p.norm)));
    }
    let (b_lo, b_hi) = bracket.range(field, ram.finite.len())?;
    let prod = product_minus_one(&ram.norms());
    let lo = &prod / BigRational::from_integer(b_hi.into());
    let hi = &prod / BigRational::from_integer(b_lo.into());
    Ok(base_covolume(field, ctx).scale(&lo, &hi))
}

/// `2^{-m} prod_{P in S} (N(P) + 1)`.
pub fn covolume_ratio(s_norms: &[u64], m: usize) -> Result<BigRational> {
    if m > s_norms.len() {
        return Err(Error::InvalidM { m, s_len: s_norms.len() });
    }
    let prod = s_norms.iter().fold(BigInt::one(), |acc, &n| acc * BigInt::from(n + 1));
    Ok(BigRational::new(prod, BigInt::one() << m))
}

/// Covolume of `Gamma_S` from that of `Gamma_empty`.
pub fn gamma_s_covolume(base: &PiMultiple, s_norms: &[u64], m: usize) -> Result<PiMultiple> {
    Ok(base.scale(&covolume_ratio(s_norms, m)?))
}

/// `0.69 exp(0.37 d - 19.08 / h)`.
pub fn cf_lower_bound(degree: u32, h: &BigUint, ctx: &RealContext) -> Interval {
    let arg = BigRational::new(BigInt::from(37) * degree, 100.into())
        - BigRational::new(1908.into(), BigInt::from(h.clone()) * 100);
    ctx.exp(&Interval::point(arg)).scale(&BigRational::new(69.into(), 100.into()))
}

/// `floor(3 ln x + 21)`, taken at the upper end of the enclosure.
pub fn degree_bound(x: &Interval, ctx: &RealContext) -> Result<u64> {
    if x.lo() < &BigRational::one() && !x.possibly_le(&Interval::from_integer(1)) {
        return Err(Error::Precondition("degree_bound needs x >= 1".into()));
    }
    if x.hi() < &BigRational::one() {
        return Err(Error::Precondition("degree_bound needs x >= 1".into()));
    }
    let lo = x.lo().max(&BigRational::one()).clone();
    let x = Interval::new(lo, x.hi().clone());
    let value = ctx.ln(&x).scale(&BigRational::from_integer(3.into())).add(&Interval::from_integer(21));
    value.floor_hi().to_u64().ok_or_else(|| Error::Precondition("degree bound out of range".into()))
}

/// Largest `D` with `8 pi sqrt(D) / (100 (4 pi^3 / 3)^d) <= x`, rounded up.
pub fn discriminant_bound(x: &Interval, degree: u32, ctx: &RealContext) -> BigUint {
    let pi = ctx.pi();
    let denom_base = pi.powi(3).scale(&BigRational::new(4.into(), 3.into()));
    let root_bound = x
        .scale(&BigRational::from_integer(100.into()))
        .mul(&denom_base.powi(degree))
        .div(&pi.scale(&BigRational::from_integer(8.into())));
    let hi = root_bound.hi();
    (hi * hi).floor().to_integer().to_biguint().unwrap_or_default()
}

/// `floor(100 (pi/12)^d D)` at the upper end.
pub fn class_number_bound(degree: u32, disc: &BigUint, ctx: &RealContext) -> BigUint {
    let value = ctx
        .pi()
        .scale(&BigRational::new(1.into(), 12.into()))
        .powi(degree)
        .scale(&BigRational::from_integer(BigInt::from(disc.clone()) * 100));
    value.floor_hi().to_biguint().unwrap_or_default()
}

/// `ceil((pi^2/6)^d x^2)`.
pub fn ideal_count_bound(field: &NumberFieldInvariants, x: &BigRational, ctx: &RealContext) -> Result<BigUint> {
    if x < &BigRational::one() {
        return Err(Error::Precondition("ideal_count_bound needs x >= 1".into()));
    }
    let zeta_q = ctx.pi().powi(2).scale(&BigRational::new(1.into(), 6.into()));
    let value = zeta_q.powi(field.degree).scale(&(x * x));
    Ok(value.ceil_hi().to_biguint().unwrap_or_default())
}

/// One `(field, Ram_f, S)` row of a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusCandidate {
    pub field: String,
    pub ramification: Vec<PrimeIdeal>,
    pub s_set: Vec<PrimeIdeal>,
    /// `(m_min, |S|)`: values of `m` whose covolume may fit the budget.
    pub m_range: (usize, usize),
    pub bracket: BracketValue,
    /// Over every allowed `m` and bracket value, lower end clamped to `pi/42`.
    pub covolume: Covolume,
}

impl CensusCandidate {
    pub fn ram_norms(&self) -> Vec<u64> {
        self.ramification.iter().map(|p| p.norm).collect()
    }

    pub fn s_norms(&self) -> Vec<u64> {
        self.s_set.iter().map(|p| p.norm).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub bracket: BracketValue,
    /// Largest `|S|` considered; `None` lets the budget decide.
    pub max_s: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { bracket: BracketValue::Exact(BigUint::one()), max_s: None }
    }
}

/// Every `(field, Ram_f, S)` whose covolume, over the allowed `m` and bracket
/// values, may be at most `budget`.
///
/// Fields failing the Chinburg–Friedman bound (with `h = h_k`) or the degree
/// bound are skipped. Ramification sets and S-sets are explored by
/// branch-and-bound over primes in ascending norm: each prime multiplies the
/// lower end by `(N-1)/2` (bracket range) or `N-1` (fixed bracket), resp.
/// `(N+1)/2`, so the search stops as soon as no extension can fit.
pub fn census(
    fields: &[NumberFieldInvariants],
    budget: &Budget,
    options: &CensusOptions,
    ctx: &RealContext,
) -> Result<Vec<CensusCandidate>> {
    if budget.below_siegel_floor(ctx) {
        return Ok(Vec::new());
    }
    let x = budget.enclosure(ctx);
    let degree_limit = degree_bound(&x.max(&Interval::from_integer(1)), ctx)?;
    let per_field = |field: &NumberFieldInvariants| -> Result<Vec<CensusCandidate>> {
        if u64::from(field.degree) > degree_limit {
            return Ok(Vec::new());
        }
        if !cf_lower_bound(field.degree, &field.class_number, ctx).possibly_le(&x) {
            return Ok(Vec::new());
        }
        census_field(field, budget, options, ctx)
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Result<Vec<CensusCandidate>>> = {
        use rayon::prelude::*;
        fields.par_iter().map(per_field).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Vec<CensusCandidate>>> = fields.iter().map(per_field).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    sort_candidates(&mut out, ctx);
    Ok(out)
}

fn sort_candidates(rows: &mut [CensusCandidate], ctx: &RealContext) {
    let key = |c: &CensusCandidate| match &c.covolume {
        Covolume::Pi { lo, .. } => ctx.pi().scale(lo),
        Covolume::Real(i) => Interval::point(i.lo().clone()),
    };
    rows.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        let by_value = match (&a.covolume, &b.covolume) {
            (Covolume::Pi { lo: x, .. }, Covolume::Pi { lo: y, .. }) => x.cmp(y),
            _ => ka.lo().cmp(kb.lo()),
        };
        by_value
            .then_with(|| a.field.cmp(&b.field))
            .then_with(|| a.ram_norms().cmp(&b.ram_norms()))
            .then_with(|| a.s_norms().cmp(&b.s_norms()))
            .then_with(|| label_order(&a.ramification, &b.ramification))
            .then_with(|| label_order(&a.s_set, &b.s_set))
    });
}

fn label_order(a: &[PrimeIdeal], b: &[PrimeIdeal]) -> Ordering {
    a.iter().map(|p| &p.label).cmp(b.iter().map(|p| &p.label))
}

fn census_field(
    field: &NumberFieldInvariants,
    budget: &Budget,
    options: &CensusOptions,
    ctx: &RealContext,
) -> Result<Vec<CensusCandidate>> {
    let base = base_covolume(field, ctx);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    ram_search(field, &base, budget, options, ctx, 0, &mut chosen, &mut out)?;
    Ok(out)
}

/// Lower end of `Gamma_empty` for `Ram_f = chosen`, over the bracket range.
fn ram_lower(field: &NumberFieldInvariants, base: &Covolume, norms: &[u64], options: &CensusOptions) -> Result<Covolume> {
    let (_, b_hi) = options.bracket.range(field, norms.len())?;
    let f = product_minus_one(norms) / BigRational::from_integer(b_hi.into());
    Ok(base.scale(&f, &f))
}

#[allow(clippy::too_many_arguments)]
fn ram_search(
    field: &NumberFieldInvariants,
    base: &Covolume,
    budget: &Budget,
    options: &CensusOptions,
    ctx: &RealContext,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<CensusCandidate>,
) -> Result<()> {
    let norms: Vec<u64> = chosen.iter().map(|&i| field.primes[i].norm).collect();
    if (field.degree as usize - 1 + chosen.len()) % 2 == 0 {
        let ram = RamificationData::new(chosen.iter().map(|&i| field.primes[i].clone()).collect());
        let cov = min_covolume(field, &ram, &options.bracket, ctx)?;
        if cov.clamp_below(&siegel_floor(), ctx).lower_possibly_le(budget, ctx) {
            let mut s_chosen = Vec::new();
            s_search(field, &ram, &cov, budget, options, ctx, 0, &mut s_chosen, out);
        }
    }
    let range_mode = matches!(options.bracket, BracketValue::Range);
    for j in start..field.primes.len() {
        let mut next = norms.clone();
        next.push(field.primes[j].norm);
        // With a bracket range each later norm-2 prime can halve the lower end.
        let halvings = if range_mode { field.primes[j + 1..].iter().filter(|p| p.norm == 2).count() } else { 0 };
        let best = ram_lower(field, base, &next, options)?
            .scale(&BigRational::new(1.into(), BigInt::one() << halvings), &BigRational::one());
        if !best.clamp_below(&siegel_floor(), ctx).lower_possibly_le(budget, ctx) {
            break;
        }
        chosen.push(j);
        ram_search(field, base, budget, options, ctx, j + 1, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn s_search(
    field: &NumberFieldInvariants,
    ram: &RamificationData,
    cov: &Covolume,
    budget: &Budget,
    options: &CensusOptions,
    ctx: &RealContext,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<CensusCandidate>,
) {
    let s_norms: Vec<u64> = chosen.iter().map(|&i| field.primes[i].norm).collect();
    let k = s_norms.len();
    let ratio_hi = covolume_ratio(&s_norms, 0).expect("m = 0");
    let m_min = (0..=k)
        .rev()
        .take_while(|&m| {
            let r = covolume_ratio(&s_norms, m).expect("m <= |S|");
            cov.scale(&r, &r).clamp_below(&siegel_floor(), ctx).lower_possibly_le(budget, ctx)
        })
        .last()
        .expect("caller checked the smallest ratio");
    let ratio_lo = covolume_ratio(&s_norms, k).expect("m = |S|");
    out.push(CensusCandidate {
        field: field.label.clone(),
        ramification: ram.finite.clone(),
        s_set: chosen.iter().map(|&i| field.primes[i].clone()).collect(),
        m_range: (m_min, k),
        bracket: options.bracket.clone(),
        covolume: cov.scale(&ratio_lo, &ratio_hi).clamp_below(&siegel_floor(), ctx),
    });
    if options.max_s.is_some_and(|max| k >= max) {
        return;
    }
    for j in start..field.primes.len() {
        if ram.finite.contains(&field.primes[j]) {
            continue;
        }
        let mut next = s_norms.clone();
        next.push(field.primes[j].norm);
        let r = covolume_ratio(&next, next.len()).expect("m = |S|");
        if !cov.scale(&r, &r).clamp_below(&siegel_floor(), ctx).lower_possibly_le(budget, ctx) {
            break;
        }
        chosen.push(j);
        s_search(field, ram, cov, budget, options, ctx, j + 1, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn one() -> BracketValue {
        BracketValue::Exact(BigUint::one())
    }

    #[test]
    fn rationals_min_covolume() {
        let ctx = RealContext::default();
        let field = NumberFieldInvariants::rationals(50);
        let cov = min_covolume(&field, &RamificationData::default(), &one(), &ctx).unwrap();
        assert_eq!(cov.as_pi_multiple(), Some(PiMultiple::from_ratio(1, 3)));
        let ram = RamificationData::from_norms(&[2, 3]).unwrap();
        assert_eq!(
            min_covolume(&field, &ram, &one(), &ctx).unwrap().as_pi_multiple(),
            Some(PiMultiple::from_ratio(2, 3))
        );
        let odd = RamificationData::from_norms(&[2]).unwrap();
        assert_eq!(min_covolume(&field, &odd, &one(), &ctx), Err(Error::ParityViolation { size: 1 }));
        assert!(matches!(
            min_covolume(&field, &ram, &BracketValue::Exact(BigUint::from(9u32)), &ctx),
            Err(Error::InvalidBracket(_))
        ));
    }

    #[test]
    fn exact_and_interval_paths_agree() {
        let ctx = RealContext::default();
        for field in [NumberFieldInvariants::rationals(10), NumberFieldInvariants::q_sqrt5()] {
            let mut approx = field.clone();
            approx.zeta2 = Zeta2::Interval(field.zeta2_enclosure(&ctx));
            let ram = if field.degree == 1 { RamificationData::default() } else { RamificationData::from_norms(&[5]).unwrap() };
            let exact = min_covolume(&field, &ram, &one(), &ctx).unwrap();
            let real = min_covolume(&approx, &ram, &one(), &ctx).unwrap();
            let (a, b) = (exact.enclosure(&ctx), real.enclosure(&ctx));
            assert!(a.possibly_le(&b) && b.possibly_le(&a), "{a} vs {b}");
        }
    }

    #[test]
    fn ratios() {
        assert_eq!(covolume_ratio(&[5], 0).unwrap(), q(6, 1));
        assert_eq!(covolume_ratio(&[5], 1).unwrap(), q(3, 1));
        assert_eq!(covolume_ratio(&[], 0).unwrap(), q(1, 1));
        assert_eq!(covolume_ratio(&[5], 2), Err(Error::InvalidM { m: 2, s_len: 1 }));
    }

    #[test]
    fn number_theoretic_bounds() {
        let ctx = RealContext::default();
        assert!(cf_lower_bound(1, &BigUint::one(), &ctx).hi() < &q(1, 10_000_000));
        let d60 = cf_lower_bound(60, &BigUint::one(), &ctx);
        assert!(d60.lo() > &q(15, 1) && d60.hi() < &q(16, 1));
        assert!(cf_lower_bound(90, &BigUint::one(), &ctx).lo() > &q(1_000_000, 1));
        assert!(cf_lower_bound(60, &BigUint::from(3u32), &ctx).lo() > &q(1_000_000, 1));
        assert!(cf_lower_bound(3, &BigUint::one(), &ctx).certainly_lt(&cf_lower_bound(3, &BigUint::from(2u32), &ctx)));
        assert_eq!(degree_bound(&Interval::from_integer(1), &ctx).unwrap(), 21);
        let e7 = ctx.exp(&Interval::from_integer(7));
        assert_eq!(degree_bound(&e7, &ctx).unwrap(), 42);
        assert_eq!(degree_bound(&Interval::from_integer(1_000_000), &ctx).unwrap(), 62);
        assert_eq!(class_number_bound(1, &BigUint::one(), &ctx), BigUint::from(26u32));
        assert_eq!(class_number_bound(2, &BigUint::from(5u32), &ctx), BigUint::from(34u32));
        let pi3 = PiMultiple::from_ratio(1, 3).enclosure(&ctx);
        assert!(discriminant_bound(&pi3, 1, &ctx) >= BigUint::one());
        assert!(discriminant_bound(&Interval::from_integer(10), 2, &ctx) >= BigUint::from(5u32));
        let q_field = NumberFieldInvariants::rationals(10);
        let bound = ideal_count_bound(&q_field, &q(10, 1), &ctx).unwrap();
        assert_eq!(bound, BigUint::from(165u32));
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("pi/3".parse::<Budget>().unwrap(), Budget::Pi(PiMultiple::from_ratio(1, 3)));
        assert_eq!("1.25".parse::<Budget>().unwrap(), Budget::Real(q(5, 4)));
        assert_eq!("7/2".parse::<Budget>().unwrap(), Budget::Real(q(7, 2)));
        assert!("1.x".parse::<Budget>().is_err());
    }

    #[test]
    fn census_rationals() {
        let ctx = RealContext::default();
        let fields = [NumberFieldInvariants::rationals(50)];
        let rows = census(&fields, &Budget::Pi(PiMultiple::from_ratio(1, 3)), &CensusOptions::default(), &ctx).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].ramification.is_empty() && rows[0].s_set.is_empty());
        let below = census(&fields, &Budget::Pi(PiMultiple::from_ratio(1, 50)), &CensusOptions::default(), &ctx).unwrap();
        assert!(below.is_empty());
    }
}
