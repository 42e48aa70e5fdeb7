//! Closed intervals with rational endpoints.
//!
//! Arithmetic on [`Interval`] is exact; the transcendental functions return
//! enclosures whose endpoints are rounded outward to a relative precision of
//! `bits` significant bits. Any real number the crate compares against (pi, e,
//! fractional powers, logarithms) goes through here.

use alloc::string::String;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision. 2^-128 is about 3e-39, comfortably below the
/// 1e-30 width asked of constants.
pub const DEFAULT_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(value: BigRational) -> Self {
        Self { lo: value.clone(), hi: value }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::point(BigRational::from_integer(value.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::point(BigRational::new(num.into(), den.into()))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    /// Every point of `self` is `<` every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Some point of `self` is `<=` some point of `other`.
    pub fn possibly_le(&self, other: &Interval) -> bool {
        self.lo <= other.hi
    }

    /// Convex hull of the two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().expect("four products");
        let hi = products.iter().max().cloned().expect("four products");
        Interval { lo, hi }
    }

    pub fn scale(&self, factor: &BigRational) -> Interval {
        let a = &self.lo * factor;
        let b = &self.hi * factor;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval) -> Interval {
        self.mul(&other.recip())
    }

    /// Panics if `self` contains zero.
    pub fn recip(&self) -> Interval {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Interval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn powi(&self, exp: u32) -> Interval {
        let mut result = Interval::point(BigRational::one());
        for _ in 0..exp {
            result = result.mul(self);
        }
        if exp % 2 == 0 && self.lo.is_negative() && self.hi.is_positive() {
            result.lo = BigRational::zero();
        }
        result
    }

    /// `self^exp` for a positive interval, rounding after each squaring.
    pub fn powi_rounded(&self, exp: u64, bits: u32) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::point(BigRational::one());
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rounded(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rounded(bits);
            }
        }
        acc
    }

    /// Rounds `lo` down and `hi` up to `bits` significant bits.
    pub fn rounded(&self, bits: u32) -> Interval {
        Interval {
            lo: round_rel(&self.lo, bits, Direction::Down),
            hi: round_rel(&self.hi, bits, Direction::Up),
        }
    }

    /// Enclosure of `exp(x)` over the interval.
    pub fn exp(&self, bits: u32) -> Interval {
        Interval {
            lo: exp_rational(&self.lo, bits).lo,
            hi: exp_rational(&self.hi, bits).hi,
        }
    }

    /// Enclosure of `ln(x)`; panics unless the interval is positive.
    pub fn ln(&self, bits: u32) -> Interval {
        assert!(self.lo.is_positive(), "logarithm of a non-positive interval");
        Interval {
            lo: ln_rational(&self.lo, bits).lo,
            hi: ln_rational(&self.hi, bits).hi,
        }
    }

    /// Enclosure of `sqrt(x)`; panics if the interval has negative points.
    pub fn sqrt(&self, bits: u32) -> Interval {
        assert!(!self.lo.is_negative(), "square root of a negative interval");
        Interval {
            lo: sqrt_rational(&self.lo, bits).lo,
            hi: sqrt_rational(&self.hi, bits).hi,
        }
    }

    /// `x^s` for a positive interval and rational exponent, via `exp(s ln x)`.
    pub fn pow_rational(&self, s: &BigRational, bits: u32) -> Interval {
        if s.is_zero() {
            return Interval::point(BigRational::one());
        }
        let guard = bits + 16;
        self.ln(guard).scale(s).exp(guard).rounded(bits)
    }

    /// Largest integer `<= hi`; an upper bound for `floor(x)` on the interval.
    pub fn floor_hi(&self) -> BigInt {
        self.hi.floor().to_integer()
    }

    /// Smallest integer `>= hi`.
    pub fn ceil_hi(&self) -> BigInt {
        self.hi.ceil().to_integer()
    }

    /// Approximate midpoint as `f64`, for display only.
    pub fn approx_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// `lo` rounded down to `digits` decimals.
    pub fn lo_decimal(&self, digits: u32) -> String {
        decimal_string(&self.lo, digits, Direction::Down)
    }

    /// `hi` rounded up to `digits` decimals.
    pub fn hi_decimal(&self, digits: u32) -> String {
        decimal_string(&self.hi, digits, Direction::Up)
    }
}

/// Parses an integer, `a/b`, or a decimal with optional exponent (`-1.25`,
/// `3e-7`, `2.5E3`) into an exact rational.
pub fn parse_decimal(text: &str) -> crate::Result<BigRational> {
    let t = text.trim();
    let bad = || crate::Error::Parse { position: 0, expected: "integer, fraction or decimal number".into() };
    if t.contains('/') {
        return crate::fuchsian::parse_rational(t, 0);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(at) => (&t[..at], t[at + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = alloc::format!("{int}{frac}");
    let mut value = BigRational::from_integer(joined.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10u32));
    if shift >= 0 {
        value *= ten.pow(shift);
    } else {
        value /= ten.pow(-shift);
    }
    Ok(if negative { -value } else { value })
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12) as u32;
        write!(f, "[{}, {}]", self.lo_decimal(digits), self.hi_decimal(digits))
    }
}

/// Certified enclosures of the constants used throughout the crate.
#[derive(Clone, Debug)]
pub struct RealContext {
    bits: u32,
    pi: Interval,
    e: Interval,
    ln2: Interval,
}

impl RealContext {
    pub fn new(bits: u32) -> Self {
        let bits = bits.max(32);
        Self {
            bits,
            pi: pi_enclosure(bits),
            e: exp_rational(&BigRational::one(), bits),
            ln2: ln2_enclosure(bits),
        }
    }

    /// Precision whose constants have width at most `width`.
    pub fn for_width(width: &BigRational) -> Self {
        let mut bits = 64;
        loop {
            let ctx = Self::new(bits);
            if &ctx.pi.width() <= width && &ctx.e.width() <= width {
                return ctx;
            }
            bits += 32;
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn pi(&self) -> &Interval {
        &self.pi
    }

    pub fn e(&self) -> &Interval {
        &self.e
    }

    pub fn ln2(&self) -> &Interval {
        &self.ln2
    }

    pub fn exp(&self, x: &Interval) -> Interval {
        x.exp(self.bits)
    }

    pub fn ln(&self, x: &Interval) -> Interval {
        x.ln(self.bits)
    }

    pub fn sqrt(&self, x: &Interval) -> Interval {
        x.sqrt(self.bits)
    }

    /// `ln(q)` for a positive big integer; cheap for huge values.
    pub fn ln_integer(&self, q: &BigUint) -> Interval {
        Interval::point(BigRational::from_integer(BigInt::from(q.clone()))).ln(self.bits)
    }
}

impl Default for RealContext {
    fn default() -> Self {
        Self::new(DEFAULT_BITS)
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Down,
    Up,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn bit_len(value: &BigInt) -> i64 {
    value.bits() as i64
}

/// Approximate `floor(log2 |q|)`, exact to within one.
fn log2_estimate(q: &BigRational) -> i64 {
    bit_len(q.numer()) - bit_len(q.denom())
}

fn round_rel(q: &BigRational, bits: u32, dir: Direction) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let shift = bits as i64 - log2_estimate(q);
    round_to_dyadic(q, shift, dir)
}

/// Rounds to a multiple of `2^-shift` in the given direction.
fn round_to_dyadic(q: &BigRational, shift: i64, dir: Direction) -> BigRational {
    let (num, den) = if shift >= 0 {
        (q.numer() * pow2(shift as u64), q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() * pow2((-shift) as u64))
    };
    let scaled = match dir {
        Direction::Down => num.div_floor(&den),
        Direction::Up => -((-num).div_floor(&den)),
    };
    if shift >= 0 {
        BigRational::new(scaled, pow2(shift as u64))
    } else {
        BigRational::from_integer(scaled * pow2((-shift) as u64))
    }
}

fn decimal_string(q: &BigRational, digits: u32, dir: Direction) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let num = q.numer() * &scale;
    let den = q.denom();
    let scaled = match dir {
        Direction::Down => num.div_floor(den),
        Direction::Up => -((-num).div_floor(den)),
    };
    let negative = scaled.sign() == Sign::Minus;
    let magnitude = scaled.abs().to_str_radix(10);
    let digits = digits as usize;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&magnitude);
        return out;
    }
    let padded = if magnitude.len() <= digits {
        let mut s = String::new();
        for _ in 0..(digits + 1 - magnitude.len()) {
            s.push('0');
        }
        s.push_str(&magnitude);
        s
    } else {
        magnitude
    };
    let split = padded.len() - digits;
    out.push_str(&padded[..split]);
    out.push('.');
    out.push_str(&padded[split..]);
    out
}

/// Enclosure of `exp(q)` for rational `q`.
fn exp_rational(q: &BigRational, bits: u32) -> Interval {
    if q.is_zero() {
        return Interval::point(BigRational::one());
    }
    // Halve until |y| <= 1/2, then square back up.
    let k = (log2_estimate(q) + 2).max(0) as u64;
    let work = bits + k as u32 + 24;
    let y = Interval::point(q / BigRational::from_integer(pow2(k))).rounded(work + 8);
    let cutoff = BigRational::new(BigInt::one(), pow2(work as u64 + 8));
    let mut sum = Interval::point(BigRational::one());
    let mut term = Interval::point(BigRational::one());
    let mut j: u64 = 1;
    loop {
        term = term.mul(&y).scale(&BigRational::new(BigInt::one(), j.into())).rounded(work + 8);
        sum = sum.add(&term);
        let magnitude = term.lo.abs().max(term.hi.abs());
        if magnitude < cutoff {
            break;
        }
        j += 1;
    }
    // Remainder after the last term: |y|^{j+1}/(j+1)! * 1/(1-|y|) <= 2|term|.
    let slack = term.lo.abs().max(term.hi.abs()) * BigRational::from_integer(2.into());
    let mut result = Interval { lo: &sum.lo - &slack, hi: &sum.hi + &slack }.rounded(work);
    for _ in 0..k {
        result = result.mul(&result).rounded(work);
    }
    result.rounded(bits)
}

/// Enclosure of `2 atanh(z)` for rational `0 <= z <= 1/3`.
fn two_atanh(z: &BigRational, work: u32) -> Interval {
    let z_sq = Interval::point(z * z).rounded(work + 8);
    let cutoff = BigRational::new(BigInt::one(), pow2(work as u64 + 8));
    let mut power = Interval::point(z.clone());
    let mut sum = power.clone();
    let mut j: u64 = 1;
    loop {
        power = power.mul(&z_sq).rounded(work + 8);
        let term = power.scale(&BigRational::new(BigInt::one(), (2 * j + 1).into()));
        sum = sum.add(&term);
        if term.hi < cutoff {
            break;
        }
        j += 1;
    }
    // Geometric tail: z^{2j+3}/(2j+3) * 1/(1 - z^2) <= (9/8) * next power.
    let next = power.mul(&z_sq).hi.clone();
    let slack = next * BigRational::new(9.into(), 8.into());
    let two = BigRational::from_integer(2.into());
    Interval { lo: &sum.lo * &two, hi: (&sum.hi + slack) * two }.rounded(work)
}

fn ln2_enclosure(bits: u32) -> Interval {
    two_atanh(&BigRational::new(1.into(), 3.into()), bits + 16).rounded(bits)
}

/// Enclosure of `ln(q)` for rational `q > 0`.
fn ln_rational(q: &BigRational, bits: u32) -> Interval {
    assert!(q.is_positive());
    if q.is_one() {
        return Interval::point(BigRational::zero());
    }
    let mut k = log2_estimate(q);
    let scale = |k: i64| {
        if k >= 0 {
            q / BigRational::from_integer(pow2(k as u64))
        } else {
            q * BigRational::from_integer(pow2((-k) as u64))
        }
    };
    let mut y = scale(k);
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    while y < one {
        k -= 1;
        y = scale(k);
    }
    while y >= two {
        k += 1;
        y = scale(k);
    }
    let work = bits + 64 - (k.unsigned_abs().leading_zeros()) + 16;
    let y = round_rel(&y, work + 8, Direction::Down).max(one.clone());
    let y_hi = round_rel(&scale(k), work + 8, Direction::Up);
    let z_lo = (&y - &one) / (&y + &one);
    let z_hi = (&y_hi - &one) / (&y_hi + &one);
    let lo_part = two_atanh(&z_lo, work);
    let hi_part = two_atanh(&z_hi, work);
    let ln_y = Interval { lo: lo_part.lo, hi: hi_part.hi };
    let ln2 = ln2_enclosure(work);
    ln2.scale(&BigRational::from_integer(k.into())).add(&ln_y).rounded(bits)
}

/// Enclosure of `sqrt(q)` for rational `q >= 0`.
fn sqrt_rational(q: &BigRational, bits: u32) -> Interval {
    if q.is_zero() {
        return Interval::point(q.clone());
    }
    let prod = (q.numer() * q.denom()).to_biguint().expect("non-negative");
    let half_bits = prod.bits() as i64 / 2;
    let s = (bits as i64 + 4 - half_bits).max(0) as u64;
    let scaled: BigUint = prod << (2 * s);
    let root = scaled.sqrt();
    let den = q.denom() * pow2(s);
    let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
    let exact = &root * &root == scaled;
    let hi = if exact { lo.clone() } else { BigRational::new(BigInt::from(root + 1u32), den) };
    Interval { lo, hi }.rounded(bits)
}

/// Enclosure of `arctan(1/k)` by the alternating Gregory series.
fn atan_inv(k: u64, bits: u32) -> Interval {
    let k_big = BigInt::from(k);
    let k_sq = &k_big * &k_big;
    let cutoff = BigRational::new(BigInt::one(), pow2(bits as u64 + 8));
    let mut sum = BigRational::zero();
    let mut power = k_big.clone();
    let mut j: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * j + 1));
        if term < cutoff {
            // The next omitted term bounds the error with the sign it would add.
            let (lo, hi) = if j % 2 == 0 { (sum.clone(), &sum + &term) } else { (&sum - &term, sum.clone()) };
            return Interval { lo, hi };
        }
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &k_sq;
        j += 1;
    }
}

/// Machin: `pi = 16 arctan(1/5) - 4 arctan(1/239)`.
fn pi_enclosure(bits: u32) -> Interval {
    let a = atan_inv(5, bits + 8).scale(&BigRational::from_integer(16.into()));
    let b = atan_inv(239, bits + 8).scale(&BigRational::from_integer(4.into()));
    a.sub(&b).rounded(bits)
}
