//! Homomorphism counts `|Hom(Gamma, S_n)|` and subgroup counts.
//!
//! For a cocompact signature the count with elliptic images pinned to classes
//! `C_1..C_d` is the Frobenius character sum
//!
//! ```text
//! (n!)^E * prod |C_i| * sum_chi prod chi(C_i) / chi(1)^D
//! ```
//!
//! with `E = 2g-1, D = d-2+2g` (oriented) or `E = g-1, D = d-2+g`
//! (non-oriented; every Frobenius–Schur indicator of `S_n` is `+1`). Summed
//! over all admissible class vectors the sum factorizes: each period `m`
//! contributes `W_m(chi) = sum_{C : parts | m} |C| chi(C)`, so [`hom_series`]
//! never walks the cross product of classes.
//!
//! Groups with cusps or boundary are free products `Z_{m_1} * .. * F_r`, whose
//! counts are `(n!)^r prod e_{m_i}(n)`.
//!
//! The transitive sieve turns `h_n` into transitive counts `t_n` and subgroup
//! counts `a_n = t_n / (n-1)!`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::character::{CharacterEngine, ColumnCache, ColumnValues};
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSignature;
use crate::partition::{class_size, factorial, partitions_with_parts_dividing, CycleType, Partition};

/// One conjugacy class of `S_n` per period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    classes: Vec<CycleType>,
}

impl ClassVector {
    /// Checks that there is one class per period, all in the same `S_n`, and
    /// that `classes[i]` has order dividing `m_i`.
    pub fn new(sig: &FuchsianSignature, classes: Vec<CycleType>) -> Result<Self> {
        if classes.len() != sig.periods().len() {
            return Err(Error::SignatureMismatch(alloc::format!(
                "{} classes for {} periods",
                classes.len(),
                sig.periods().len()
            )));
        }
        if let Some(first) = classes.first() {
            if classes.iter().any(|c| c.n() != first.n()) {
                return Err(Error::SignatureMismatch("classes from different symmetric groups".into()));
            }
        }
        for (c, &m) in classes.iter().zip(sig.periods()) {
            if !c.has_order_dividing(m as usize) {
                return Err(Error::SignatureMismatch(alloc::format!("class {c} does not have order dividing {m}")));
            }
        }
        Ok(Self { classes })
    }

    /// Every period pinned to fixed-point-free classes `(m^{n/m})`.
    pub fn pinned(sig: &FuchsianSignature, n: usize) -> Result<Self> {
        let mut classes = Vec::with_capacity(sig.periods().len());
        for &m in sig.periods() {
            if n % m as usize != 0 {
                return Err(Error::IndivisibleIndex { period: m, n });
            }
            classes.push(CycleType::uniform(m as usize, n / m as usize));
        }
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }
}

/// Streams every admissible class vector for `sig` in `S_n`, odometer style
/// over canonical class order.
pub fn class_vectors(sig: &FuchsianSignature, n: usize) -> impl Iterator<Item = ClassVector> {
    let choices: Vec<Vec<Partition>> =
        sig.periods().iter().map(|&m| partitions_with_parts_dividing(n, m as usize)).collect();
    let mut digits = vec![0usize; choices.len()];
    let mut done = false;
    core::iter::from_fn(move || {
        if done {
            return None;
        }
        let cv = ClassVector {
            classes: digits.iter().zip(&choices).map(|(&i, c)| CycleType::new(c[i].clone())).collect(),
        };
        done = true;
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                done = false;
                break;
            }
            digits[pos] = 0;
        }
        Some(cv)
    })
}

/// `h_0..h_N`, with `h_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCountSeries {
    pub signature: FuchsianSignature,
    pub values: Vec<BigUint>,
}

impl HomCountSeries {
    pub fn new(signature: FuchsianSignature, values: Vec<BigUint>) -> Self {
        Self { signature, values }
    }

    /// Largest `n` covered.
    pub fn max_n(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// Transitive counts and subgroup counts; entry `k` is for index `n = k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupCounts {
    pub t: Vec<BigUint>,
    pub a: Vec<BigUint>,
    pub s: Vec<BigUint>,
}

impl SubgroupCounts {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, n: usize) -> &BigUint {
        &self.a[n - 1]
    }

    pub fn s(&self, n: usize) -> &BigUint {
        &self.s[n - 1]
    }

    pub fn t(&self, n: usize) -> &BigUint {
        &self.t[n - 1]
    }
}

#[derive(Clone, Copy, Debug)]
struct Exponents {
    /// Power of `chi(1)` in the denominator.
    d: i64,
    /// Power of `n!`.
    e: i64,
}

fn exponents(sig: &FuchsianSignature) -> Exponents {
    let d = sig.periods().len() as i64;
    let g = sig.genus() as i64;
    if sig.oriented() {
        Exponents { d: d - 2 + 2 * g, e: 2 * g - 1 }
    } else {
        Exponents { d: d - 2 + g, e: g - 1 }
    }
}

/// `(n!)^E * sum_lambda prod_j W_j(lambda)^{p_j} / chi_lambda(1)^D`, exactly.
fn frobenius_total(n: usize, weights: &[(Vec<BigInt>, u32)], degrees: &ColumnValues, ex: Exponents) -> Result<BigUint> {
    let n_fact = BigInt::from(factorial(n));
    let mut sum = BigInt::zero();
    'chars: for i in 0..degrees.len() {
        let mut term = BigInt::one();
        for (w, power) in weights {
            if w[i].is_zero() {
                continue 'chars;
            }
            term *= w[i].pow(*power);
        }
        let deg = degrees.get(i);
        if ex.d >= 0 {
            term *= (&n_fact / &deg).pow(ex.d as u32);
        } else {
            term *= deg.pow((-ex.d) as u32);
        }
        sum += term;
    }
    let k = if ex.d >= 0 { ex.e - ex.d } else { ex.e };
    let total = if k >= 0 {
        sum * n_fact.pow(k as u32)
    } else {
        let (q, r) = sum.div_rem(&n_fact.pow((-k) as u32));
        if !r.is_zero() {
            return Err(Error::IntegralityViolation { n });
        }
        q
    };
    if total.is_negative() {
        return Err(Error::IntegralityViolation { n });
    }
    Ok(total.to_biguint().expect("non-negative"))
}

fn fixed_count<C: ColumnCache>(sig: &FuchsianSignature, cv: &ClassVector, n: usize, engine: &CharacterEngine<C>) -> Result<BigUint> {
    if cv.classes.iter().any(|c| c.n() != n) {
        return Err(Error::SignatureMismatch(alloc::format!("class vector is not in S_{n}")));
    }
    if cv.classes.len() != sig.periods().len() {
        return Err(Error::SignatureMismatch("class vector length differs from the number of periods".into()));
    }
    let weights: Vec<(Vec<BigInt>, u32)> = cv
        .classes
        .iter()
        .map(|c| {
            let size = BigInt::from(class_size(c));
            let col = engine.column(c);
            ((0..col.len()).map(|i| &size * col.get(i)).collect(), 1)
        })
        .collect();
    let degrees = engine.column(&CycleType::identity(n));
    frobenius_total(n, &weights, &degrees, exponents(sig))
}

/// `|Hom_C(Gamma, S_n)|` for an oriented cocompact signature.
pub fn hom_count_fixed<C: ColumnCache>(
    sig: &FuchsianSignature,
    cv: &ClassVector,
    n: usize,
    engine: &CharacterEngine<C>,
) -> Result<BigUint> {
    if !sig.oriented() || !sig.is_cocompact() {
        return Err(Error::SignatureMismatch("hom_count_fixed needs an oriented cocompact signature".into()));
    }
    fixed_count(sig, cv, n, engine)
}

/// `|Hom_C(Gamma, S_n)|` for a non-oriented cocompact signature.
pub fn hom_count_nonoriented_fixed<C: ColumnCache>(
    sig: &FuchsianSignature,
    cv: &ClassVector,
    n: usize,
    engine: &CharacterEngine<C>,
) -> Result<BigUint> {
    if sig.oriented() || !sig.is_cocompact() {
        return Err(Error::SignatureMismatch(
            "hom_count_nonoriented_fixed needs a non-oriented cocompact signature".into(),
        ));
    }
    fixed_count(sig, cv, n, engine)
}

/// `e_m(n)` for `n = 0..=max_n`: solutions of `x^m = 1` in `S_n`, by
/// `e(n) = sum_{d | m, d <= n} (n-1)!/(n-d)! e(n-d)`.
pub fn order_dividing_series(m: usize, max_n: usize) -> Vec<BigUint> {
    let divisors: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
    let mut e = vec![BigUint::one()];
    for n in 1..=max_n {
        let mut total = BigUint::zero();
        for &d in divisors.iter().take_while(|&&d| d <= n) {
            let falling: BigUint = ((n - d + 1)..n).map(BigUint::from).product();
            total += falling * &e[n - d];
        }
        e.push(total);
    }
    e
}

/// `(n!)^r prod e_{m_i}(n)` for a signature with cusps or boundary.
pub fn hom_count_free_product(sig: &FuchsianSignature, n: usize) -> Result<BigUint> {
    let r = sig.free_rank()?;
    let mut total = factorial(n).pow(r as u32);
    for &m in sig.periods() {
        total *= &order_dividing_series(m as usize, n)[n];
    }
    Ok(total)
}

/// Sum of [`hom_count_fixed`] (or its non-oriented twin) over every streamed
/// class vector. Agrees with [`hom_series`] but costs a full character sum per
/// class vector.
pub fn hom_count_by_class_vectors<C: ColumnCache>(
    sig: &FuchsianSignature,
    n: usize,
    engine: &CharacterEngine<C>,
) -> Result<BigUint> {
    if !sig.is_cocompact() {
        return hom_count_free_product(sig, n);
    }
    let mut total = BigUint::zero();
    for cv in class_vectors(sig, n) {
        total += fixed_count(sig, &cv, n, engine)?;
    }
    Ok(total)
}

/// `|Hom(Gamma, S_n)|` for a single `n`.
pub fn hom_count<C: ColumnCache>(sig: &FuchsianSignature, n: usize, engine: &CharacterEngine<C>) -> Result<BigUint> {
    if n == 0 {
        return Ok(BigUint::one());
    }
    if !sig.is_cocompact() {
        return hom_count_free_product(sig, n);
    }
    let mut multiplicity: BTreeMap<u64, u32> = BTreeMap::new();
    for &m in sig.periods() {
        *multiplicity.entry(m).or_insert(0) += 1;
    }
    let mut weights = Vec::with_capacity(multiplicity.len());
    for (&m, &power) in &multiplicity {
        let mut w = vec![BigInt::zero(); crate::partition::PartitionIndexer::new(n).count(n)];
        for cycles in partitions_with_parts_dividing(n, m as usize) {
            let class = CycleType::new(cycles);
            let size = BigInt::from(class_size(&class));
            let col = engine.column(&class);
            for (i, slot) in w.iter_mut().enumerate() {
                if !col.is_zero_at(i) {
                    *slot += &size * col.get(i);
                }
            }
        }
        weights.push((w, power));
    }
    let degrees = engine.column(&CycleType::identity(n));
    frobenius_total(n, &weights, &degrees, exponents(sig))
}

/// `h_0..h_N`.
pub fn hom_series<C: ColumnCache>(sig: &FuchsianSignature, max_n: usize, engine: &CharacterEngine<C>) -> Result<HomCountSeries> {
    if max_n == 0 {
        return Err(Error::Precondition("hom_series needs N >= 1".into()));
    }
    let values = if sig.is_cocompact() {
        (0..=max_n).map(|n| hom_count(sig, n, engine)).collect::<Result<Vec<_>>>()?
    } else {
        free_product_series(sig, max_n)?
    };
    Ok(HomCountSeries::new(sig.clone(), values))
}

fn free_product_series(sig: &FuchsianSignature, max_n: usize) -> Result<Vec<BigUint>> {
    let r = sig.free_rank()? as u32;
    let e: Vec<Vec<BigUint>> = sig.periods().iter().map(|&m| order_dividing_series(m as usize, max_n)).collect();
    let mut fact = BigUint::one();
    let mut values = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        if n > 0 {
            fact *= BigUint::from(n);
        }
        let mut h = fact.pow(r);
        for series in &e {
            h *= &series[n];
        }
        values.push(h);
    }
    Ok(values)
}

/// Inverts `h_n = sum_k C(n-1, k-1) t_k h_{n-k}` for `t_n`, then
/// `a_n = t_n / (n-1)!` and `s_n = a_1 + .. + a_n`.
pub fn transitive_sieve(series: &HomCountSeries) -> Result<SubgroupCounts> {
    let h: Vec<BigInt> = series.values.iter().map(|v| BigInt::from(v.clone())).collect();
    if h.first().map_or(true, |h0| !h0.is_one()) {
        return Err(Error::Precondition("series must start with h_0 = 1".into()));
    }
    let max_n = series.max_n();
    let mut t: Vec<BigInt> = Vec::with_capacity(max_n);
    let mut a = Vec::with_capacity(max_n);
    let mut s = Vec::with_capacity(max_n);
    let mut running = BigUint::zero();
    let mut fact = BigInt::one();
    for n in 1..=max_n {
        let mut value = h[n].clone();
        let mut binom = BigInt::one();
        for k in 1..n {
            value -= &binom * &t[k - 1] * &h[n - k];
            binom = binom * (n - k) / k;
        }
        if value.is_negative() {
            return Err(Error::NegativeTransitiveCount { n });
        }
        if n > 1 {
            fact *= n - 1;
        }
        let (q, r) = value.div_rem(&fact);
        if !r.is_zero() {
            return Err(Error::DivisibilityViolation { n });
        }
        let q = q.to_biguint().expect("non-negative");
        running += &q;
        a.push(q);
        s.push(running.clone());
        t.push(value);
    }
    Ok(SubgroupCounts {
        t: t.into_iter().map(|v| v.to_biguint().expect("non-negative")).collect(),
        a,
        s,
    })
}

fn require_oriented_cocompact(sig: &FuchsianSignature) -> Result<()> {
    if !sig.oriented() || !sig.is_cocompact() {
        return Err(Error::SignatureMismatch("torsion-free counting needs an oriented cocompact signature".into()));
    }
    Ok(())
}

/// Homomorphisms with every elliptic generator acting fixed-point-freely,
/// `h_0..h_N`. Entries with some `m_i` not dividing `n` are zero.
pub fn pinned_series<C: ColumnCache>(sig: &FuchsianSignature, max_n: usize, engine: &CharacterEngine<C>) -> Result<HomCountSeries> {
    require_oriented_cocompact(sig)?;
    let mut values = vec![BigUint::one()];
    for n in 1..=max_n {
        values.push(match ClassVector::pinned(sig, n) {
            Ok(cv) => fixed_count(sig, &cv, n, engine)?,
            Err(_) => BigUint::zero(),
        });
    }
    Ok(HomCountSeries::new(sig.clone(), values))
}

/// Number of torsion-free subgroups of index `n`.
pub fn torsion_free_a_n<C: ColumnCache>(sig: &FuchsianSignature, n: usize, engine: &CharacterEngine<C>) -> Result<BigUint> {
    require_oriented_cocompact(sig)?;
    if n == 0 {
        return Err(Error::Precondition("index must be positive".into()));
    }
    if let Some(&m) = sig.periods().iter().find(|&&m| n % m as usize != 0) {
        return Err(Error::IndivisibleIndex { period: m, n });
    }
    let series = pinned_series(sig, n, engine)?;
    Ok(transitive_sieve(&series)?.a(n).clone())
}

/// Index `n = (2g'-2)/mu` at which torsion-free subgroups are genus-`g'`
/// surface groups.
pub fn surface_index(sig: &FuchsianSignature, genus: u64) -> Result<usize> {
    let no = |reason: &str| Error::NoAdmissibleIndex { genus, reason: reason.into() };
    let mu = sig.mu();
    if !mu.is_positive() {
        return Err(no("signature is not Fuchsian"));
    }
    if genus < 2 {
        return Err(no("surface genus must be at least 2"));
    }
    let n = num_rational::BigRational::from_integer(BigInt::from(2 * genus - 2)) / mu;
    if !n.is_integer() {
        return Err(no("(2g'-2)/mu is not an integer"));
    }
    let n = n.to_integer().to_usize().ok_or_else(|| no("index too large"))?;
    if let Some(&m) = sig.periods().iter().find(|&&m| n % m as usize != 0) {
        return Err(no(&alloc::format!("period {m} does not divide index {n}")));
    }
    Ok(n)
}

/// Torsion-free subgroups that are genus-`g'` surface groups.
pub fn surfaces_of_genus<C: ColumnCache>(sig: &FuchsianSignature, genus: u64, engine: &CharacterEngine<C>) -> Result<BigUint> {
    require_oriented_cocompact(sig)?;
    let n = surface_index(sig, genus)?;
    torsion_free_a_n(sig, n, engine)
}
