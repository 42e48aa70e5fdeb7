//! Fuchsian group signatures.
//!
//! A signature `(orientability; g; m_1..m_d; s; t)` describes the group
//!
//! ```text
//! oriented:     <a_i, b_i, x_j, e_k, f_l | x_j^{m_j}, prod [a_i,b_i] prod x_j prod e_k prod f_l>
//! non-oriented: <a_i, x_j, e_k, f_l     | x_j^{m_j}, prod a_i^2     prod x_j prod e_k prod f_l>
//! ```
//!
//! with `g` handles, `d` elliptic generators, `s` parabolic and `t`
//! hyperbolic boundary generators. `mu = -chi` decides whether the group is a
//! lattice, and the covolume is `2 pi mu`.
//!
//! Text forms accepted by [`FuchsianSignature::from_str`]:
//!
//! - `(2,3,7)`: oriented, genus 0, periods only; `inf` (or `∞`) adds a cusp
//! - `g=2`: closed oriented surface
//! - `o;0;2,3;1;0` / `n;2;;0;0`: full form, which is also what `Display` emits

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{Interval, RealContext};
use crate::partition::join_display;

/// The real number `coefficient * pi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiMultiple {
    coefficient: BigRational,
}

impl PiMultiple {
    pub fn new(coefficient: BigRational) -> Self {
        Self { coefficient }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.coefficient
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.coefficient * factor)
    }

    pub fn enclosure(&self, ctx: &RealContext) -> Interval {
        ctx.pi().scale(&self.coefficient)
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*pi", self.coefficient)
    }
}

/// Accepts `q*pi`, `q pi`, `pi`, `pi/k`, `q*pi/k` with `q` an integer or
/// fraction.
impl FromStr for PiMultiple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = text.to_ascii_lowercase();
        let at = lower.find("pi").ok_or(Error::Parse { position: 0, expected: "'pi'".into() })?;
        let head = lower[..at].trim_end_matches('*');
        let tail = &lower[at + 2..];
        let mut q = if head.is_empty() { BigRational::one() } else { parse_rational(head, 0)? };
        if let Some(den) = tail.strip_prefix('/') {
            let d = parse_rational(den, at + 3)?;
            if d.is_zero() {
                return Err(Error::Parse { position: at + 3, expected: "nonzero denominator".into() });
            }
            q /= d;
        } else if !tail.is_empty() {
            return Err(Error::Parse { position: at + 2, expected: "'/' or end of input".into() });
        }
        Ok(Self::new(q))
    }
}

/// Parses `a` or `a/b` with integers `a`, `b`.
pub(crate) fn parse_rational(text: &str, offset: usize) -> Result<BigRational> {
    let bad = || Error::Parse { position: offset, expected: "rational number".into() };
    match text.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuchsianSignature {
    oriented: bool,
    genus: u64,
    periods: Vec<u64>,
    cusps: u64,
    boundary: u64,
}

impl FuchsianSignature {
    /// Rejects periods below 2 and non-oriented signatures of genus 0.
    /// Signatures with `mu <= 0` are allowed; see [`is_fuchsian`](Self::is_fuchsian).
    pub fn new(oriented: bool, genus: u64, periods: Vec<u64>, cusps: u64, boundary: u64) -> Result<Self> {
        if let Some(&m) = periods.iter().find(|&&m| m < 2) {
            return Err(Error::SignatureMismatch(alloc::format!("period {m} < 2")));
        }
        if !oriented && genus == 0 {
            return Err(Error::SignatureMismatch("non-oriented signature needs genus >= 1".into()));
        }
        Ok(Self { oriented, genus, periods, cusps, boundary })
    }

    pub fn triangle(a: u64, b: u64, c: u64) -> Self {
        Self::new(true, 0, alloc::vec![a, b, c], 0, 0).expect("periods >= 2")
    }

    pub fn surface(genus: u64) -> Self {
        Self { oriented: true, genus, periods: Vec::new(), cusps: 0, boundary: 0 }
    }

    /// `PSL_2(Z)`, signature `(2,3,inf)`.
    pub fn modular() -> Self {
        Self { oriented: true, genus: 0, periods: alloc::vec![2, 3], cusps: 1, boundary: 0 }
    }

    /// The free group of rank 2 as a once-punctured torus group.
    pub fn free_rank_two() -> Self {
        Self { oriented: true, genus: 1, periods: Vec::new(), cusps: 1, boundary: 0 }
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn cusps(&self) -> u64 {
        self.cusps
    }

    pub fn boundary(&self) -> u64 {
        self.boundary
    }

    /// `-chi(Gamma)`.
    pub fn mu(&self) -> BigRational {
        let handles = if self.oriented { 2 * self.genus } else { self.genus };
        let mut mu = BigRational::from_integer(BigInt::from(handles) + self.cusps + self.boundary - 2u32);
        for &m in &self.periods {
            mu += BigRational::new(BigInt::from(m - 1), BigInt::from(m));
        }
        mu
    }

    pub fn is_fuchsian(&self) -> bool {
        self.mu().is_positive()
    }

    pub fn is_cocompact(&self) -> bool {
        self.cusps == 0 && self.boundary == 0
    }

    /// Hyperbolic area `2 pi mu`.
    pub fn covolume(&self) -> Result<PiMultiple> {
        let mu = self.mu();
        if !mu.is_positive() {
            return Err(Error::NonFuchsian);
        }
        Ok(PiMultiple::new(mu * BigInt::from(2)))
    }

    /// Rank `r` of the free factor when the group splits as
    /// `Z_{m_1} * ... * Z_{m_d} * F_r`.
    pub fn free_rank(&self) -> Result<u64> {
        if self.is_cocompact() {
            return Err(Error::Cocompact);
        }
        let handles = if self.oriented { 2 * self.genus } else { self.genus };
        Ok(handles + self.cusps + self.boundary - 1)
    }
}

impl fmt::Display for FuchsianSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{};{};{};{};{}",
            if self.oriented { 'o' } else { 'n' },
            self.genus,
            join_display(&self.periods, ","),
            self.cusps,
            self.boundary
        )
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, expected: &str) -> Error {
        Error::Parse { position: self.pos, expected: expected.to_owned() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(&alloc::format!("'{token}'")))
        }
    }

    fn peek_digit(&mut self) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit())
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..].find(|c: char| !c.is_ascii_digit()).unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(self.err(what));
        }
        let value = self.text[start..start + len].parse().map_err(|_| self.err(what))?;
        self.pos += len;
        Ok(value)
    }

    fn period(&mut self) -> Result<u64> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let m = self.number("period (integer >= 2)")?;
        if m < 2 {
            return Err(Error::Parse { position: start, expected: "period (integer >= 2)".into() });
        }
        Ok(m)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(self.err("end of input"))
        }
    }
}

impl FromStr for FuchsianSignature {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut c = Cursor { text, pos: 0 };
        if c.eat("(") {
            let mut periods = Vec::new();
            let mut cusps = 0;
            if !c.eat(")") {
                loop {
                    if c.eat("inf") || c.eat("∞") {
                        cusps += 1;
                    } else {
                        periods.push(c.period()?);
                    }
                    if c.eat(")") {
                        break;
                    }
                    if !c.eat(",") {
                        return Err(c.err("',' or ')'"));
                    }
                }
            }
            c.finish()?;
            return Ok(Self { oriented: true, genus: 0, periods, cusps, boundary: 0 });
        }
        if c.eat("g") {
            c.expect("=")?;
            let genus = c.number("genus")?;
            c.finish()?;
            return Ok(Self::surface(genus));
        }
        let oriented = if c.eat("o") {
            true
        } else if c.eat("n") {
            false
        } else {
            return Err(c.err("'(', 'g=', 'o' or 'n'"));
        };
        c.expect(";")?;
        let genus_at = {
            c.skip_ws();
            c.pos
        };
        let genus = c.number("genus")?;
        if !oriented && genus == 0 {
            return Err(Error::Parse { position: genus_at, expected: "genus >= 1 for a non-oriented signature".into() });
        }
        c.expect(";")?;
        let mut periods = Vec::new();
        if c.peek_digit() {
            periods.push(c.period()?);
            while c.eat(",") {
                periods.push(c.period()?);
            }
        }
        c.expect(";")?;
        let cusps = c.number("cusp count")?;
        c.expect(";")?;
        let boundary = c.number("boundary count")?;
        c.finish()?;
        Ok(Self { oriented, genus, periods, cusps, boundary })
    }
}

/// Result of [`siegel_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelScan {
    /// Every scanned signature with `0 < mu <= threshold`, periods ascending.
    pub hits: Vec<(FuchsianSignature, BigRational)>,
    /// Signatures whose `mu` was evaluated at a leaf.
    pub leaves: u64,
}

impl SiegelScan {
    pub fn minimum(&self) -> Option<&BigRational> {
        self.hits.iter().map(|(_, mu)| mu).min()
    }
}

/// All cocompact oriented signatures with `g <= max_genus`, at most
/// `max_periods` periods, each in `2..=max_period`, and `0 < mu <= threshold`.
///
/// Periods are scanned nondecreasing; since `mu` increases with every period,
/// a branch is cut as soon as its smallest completion exceeds `threshold`.
pub fn siegel_scan(max_genus: u64, max_periods: usize, max_period: u64, threshold: &BigRational) -> SiegelScan {
    let mut scan = SiegelScan { hits: Vec::new(), leaves: 0 };
    for genus in 0..=max_genus {
        for d in 0..=max_periods {
            let base = BigRational::from_integer(BigInt::from(2 * genus) - 2u32);
            let mut periods = Vec::with_capacity(d);
            scan_periods(genus, d, max_period, threshold, &base, 2, &mut periods, &mut scan);
        }
    }
    scan
}

#[allow(clippy::too_many_arguments)]
fn scan_periods(
    genus: u64,
    d: usize,
    max_period: u64,
    threshold: &BigRational,
    partial: &BigRational,
    min_period: u64,
    periods: &mut Vec<u64>,
    scan: &mut SiegelScan,
) {
    let remaining = d - periods.len();
    if remaining == 0 {
        scan.leaves += 1;
        if partial.is_positive() && partial <= threshold {
            let sig = FuchsianSignature::new(true, genus, periods.clone(), 0, 0).expect("periods >= 2");
            scan.hits.push((sig, partial.clone()));
        }
        return;
    }
    let term = |m: u64| BigRational::new(BigInt::from(m - 1), BigInt::from(m));
    for m in min_period..=max_period {
        let floor = partial + term(m) * BigInt::from(remaining);
        if &floor > threshold {
            break;
        }
        let ceiling = partial + term(max_period) * BigInt::from(remaining);
        if !ceiling.is_positive() {
            return;
        }
        periods.push(m);
        scan_periods(genus, d, max_period, threshold, &(partial + term(m)), m, periods, scan);
        periods.pop();
    }
}
