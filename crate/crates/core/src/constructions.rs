//! Base sequences with known limiting ratios, their closed-form limits, and
//! certified enclosures of the choice series
//! `Δ = 1 - 1/d_1 + 1/(d_1 d_2) - ...`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dk::dk;
use crate::error::{Error, Result};
use crate::mixed_radix::{pair_constraints, thm12_alphabet, BaseSequence, BaseSpec};
use crate::rational::{frac, two_over_one_plus, ExactRational};

fn int(v: u64) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

fn recip(v: u64) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::from(v))
}

/// `b_j = j + 1`: unbounded terms, so `1/b_j -> 0`.
pub fn thm11_base() -> BaseSpec {
    BaseSpec::Thm11
}

/// Blocks `d_j, ..., d_1, c` for `j = 1, 2, ...`.
pub fn thm12_base(d: &[u64], c: u64) -> Result<BaseSpec> {
    let spec = BaseSpec::Thm12 { d: d.to_vec(), c };
    spec.validate()?;
    Ok(spec)
}

/// 1-indexed positions of `c` in a thm12 base: `k_j = j(j+3)/2`.
pub fn c_positions(count: usize) -> Vec<usize> {
    (1..=count).map(|j| j * (j + 3) / 2).collect()
}

/// `l` copies of `a`, then `b`, repeated.
pub fn lemma22_base(a: u64, b: u64, l: u64) -> Result<BaseSpec> {
    let spec = BaseSpec::Lemma22 { a, b, l };
    spec.validate()?;
    Ok(spec)
}

/// A limiting value of `D` together with the ratio `2/(1 + D)` it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitValue {
    pub d_limit: ExactRational,
    pub ratio: ExactRational,
}

impl LimitValue {
    fn from_d(d_limit: ExactRational) -> Self {
        let ratio = two_over_one_plus(&d_limit);
        LimitValue { d_limit, ratio }
    }
}

/// `lim_k D_{(l+1)k} = (1 - a^{-(l+1)}) / (b (1 + 1/a) (1 - 1/(a^l b)))`.
pub fn lemma22_limit(a: u64, b: u64, l: u64) -> Result<LimitValue> {
    lemma22_base(a, b, l)?;
    let pow = |e: u64| BigRational::from_integer(BigInt::from(a).pow(e as u32));
    let one = BigRational::one();
    let numer = &one - pow(l + 1).recip();
    let denom = int(b) * (&one + recip(a)) * (&one - (pow(l) * int(b)).recip());
    Ok(LimitValue::from_d(numer / denom))
}

/// The known value `2 / ((a-1)/(ab-1) + 1)` for `2 <= a <= b`.
pub fn theorem_b_ratio(a: u64, b: u64) -> Result<ExactRational> {
    if a < 2 || b < a {
        return Err(Error::constraint(format!("requires 2 <= a <= b (a = {a}, b = {b})")));
    }
    let d = BigRational::new(BigInt::from(a - 1), BigInt::from(a * b - 1));
    Ok(two_over_one_plus(&d))
}

/// `2 / (1 + a/(b(a+1)))`, the `l -> infinity` limit of the lemma22 ratios.
pub fn thm13_limit(a: u64, b: u64) -> Result<LimitValue> {
    pair_constraints(a, b)?;
    Ok(LimitValue::from_d(BigRational::new(BigInt::from(a), BigInt::from(b * (a + 1)))))
}

/// What is assumed about the unseen terms after a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailAssumption {
    /// Every later term is at least `m` (`m >= 2`).
    AtLeast(u64),
}

impl TailAssumption {
    /// Range of the tail's own series value: `[1 - 1/m, 1]`.
    fn tail_range(self) -> (ExactRational, ExactRational) {
        match self {
            TailAssumption::AtLeast(m) => (BigRational::one() - recip(m), BigRational::one()),
        }
    }
}

/// Closed rational interval known to contain Δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaInterval {
    pub lo: ExactRational,
    pub hi: ExactRational,
    /// Number of prefix terms consumed.
    pub terms: usize,
}

impl DeltaInterval {
    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &ExactRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Strictly disjoint.
    pub fn separated_from(&self, other: &DeltaInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn hull(&self, other: &DeltaInterval) -> DeltaInterval {
        DeltaInterval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
            terms: self.terms.min(other.terms),
        }
    }

    /// Enclosure of `2/(1 + Δ/c)`, the limsup induced through the `c`
    /// positions of a thm12 base.
    pub fn induced_limsup(&self, c: u64) -> (ExactRational, ExactRational) {
        let c = int(c);
        (two_over_one_plus(&(&self.hi / &c)), two_over_one_plus(&(&self.lo / &c)))
    }
}

/// Certified enclosure of Δ for every infinite continuation of `prefix`
/// allowed by `tail`.
///
/// With `f_d(t) = 1 - t/d`, Δ is `f_{d_1}(f_{d_2}(... f_{d_n}(t)))` where `t`
/// is the series value of the continuation. Expanding the composition gives
/// `Δ = S + (-1)^n t / (d_1 ... d_n)` with `S` the alternating partial sum,
/// so the interval is the affine image of the tail range. Its width is at
/// most `1/(m d_1 ... d_n)`.
pub fn delta_interval(prefix: &[u64], tail: TailAssumption) -> Result<DeltaInterval> {
    if prefix.is_empty() {
        return Err(Error::constraint("delta_interval requires a non-empty prefix"));
    }
    let TailAssumption::AtLeast(m) = tail;
    if m < 2 {
        return Err(Error::constraint(format!("tail terms must be >= 2 (m = {m})")));
    }
    if let Some((i, &d)) = prefix.iter().enumerate().find(|(_, &d)| d < 2) {
        return Err(Error::InvalidTerm { index: i + 1, value: d });
    }

    let mut sum = BigRational::zero();
    let mut product = BigInt::one();
    for (i, &d) in prefix.iter().enumerate() {
        let term = BigRational::new(BigInt::one(), product.clone());
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        product *= BigInt::from(d);
    }
    let scale = BigRational::new(BigInt::one(), product);
    let (t_lo, t_hi) = tail.tail_range();
    let at = |t: &ExactRational| {
        if prefix.len().is_multiple_of(2) {
            &sum + &scale * t
        } else {
            &sum - &scale * t
        }
    };
    // odd n flips orientation: the larger tail value gives the smaller Δ
    let (lo, hi) = if prefix.len().is_multiple_of(2) {
        (at(&t_lo), at(&t_hi))
    } else {
        (at(&t_hi), at(&t_lo))
    };
    Ok(DeltaInterval { lo, hi, terms: prefix.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub a: u64,
    pub b: u64,
    pub prefix_len: usize,
    pub max_extension: usize,
    pub pairs: u64,
    pub separated: u64,
    /// Largest extension any pair needed before its enclosures separated.
    pub max_extension_needed: usize,
    /// Pairs still overlapping at `max_extension`.
    pub unseparated: Vec<(Vec<u64>, Vec<u64>)>,
    pub pass: bool,
}

/// For every pair of distinct length-`prefix_len` words over `{a, b}`,
/// find the smallest extension depth `e <= max_extension` at which the hulls
/// of all depth-`e` continuations are strictly disjoint. Tails beyond the
/// extension are only assumed to be `>= a`.
pub fn delta_injectivity(a: u64, b: u64, prefix_len: usize, max_extension: usize) -> Result<InjectivityReport> {
    pair_constraints(a, b)?;
    if prefix_len == 0 {
        return Err(Error::IndexTooSmall { what: "delta_injectivity", name: "prefix_len", min: 1, got: 0 });
    }
    let words = words_over(a, b, prefix_len);
    let tail = TailAssumption::AtLeast(a);

    // hulls[w][e]: hull over every continuation of depth e
    let hulls: Vec<Vec<DeltaInterval>> = words
        .par_iter()
        .map(|w| {
            (0..=max_extension)
                .map(|e| {
                    words_over(a, b, e)
                        .into_iter()
                        .map(|cont| {
                            let mut full = w.clone();
                            full.extend(cont);
                            delta_interval(&full, tail).expect("letters are >= 2")
                        })
                        .reduce(|x, y| x.hull(&y))
                        .expect("at least one continuation")
                })
                .collect()
        })
        .collect();

    let index_pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|i| (i + 1..words.len()).map(move |j| (i, j)))
        .collect();
    let needed: Vec<Option<usize>> = index_pairs
        .par_iter()
        .map(|&(i, j)| (0..=max_extension).find(|&e| hulls[i][e].separated_from(&hulls[j][e])))
        .collect();

    let mut report = InjectivityReport {
        a,
        b,
        prefix_len,
        max_extension,
        pairs: index_pairs.len() as u64,
        separated: 0,
        max_extension_needed: 0,
        unseparated: Vec::new(),
        pass: false,
    };
    for (&(i, j), need) in index_pairs.iter().zip(&needed) {
        match need {
            Some(e) => {
                report.separated += 1;
                report.max_extension_needed = report.max_extension_needed.max(*e);
            }
            None => report.unseparated.push((words[i].clone(), words[j].clone())),
        }
    }
    report.pass = report.unseparated.is_empty();
    Ok(report)
}

/// All words of length `n` over `{a, b}` in lexicographic order (a < b).
fn words_over(a: u64, b: u64, n: usize) -> Vec<Vec<u64>> {
    (0..1u64 << n)
        .map(|mask| (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 0 { a } else { b }).collect())
        .collect()
}

/// Extremes of `D_k` over the first `blocks` blocks of a thm12 base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm12Bounds {
    /// `max D_k` over the `c` positions.
    pub c_max: ExactRational,
    /// `min D_k` over every other position.
    pub other_min: ExactRational,
    pub c: u64,
    pub b: u64,
    pub pass: bool,
}

/// Check `D_k <= 1/c` at the `c` positions and `D_k >= 1/(2b) > 1/c`
/// elsewhere, over the first `blocks` blocks.
pub fn check_thm12_bounds(d: &[u64], c: u64, blocks: usize) -> Result<Thm12Bounds> {
    let spec = thm12_base(d, c)?;
    let (_, b) = thm12_alphabet(d)?;
    let base = BaseSequence::from_spec(spec)?;
    let last = blocks * (blocks + 3) / 2;
    let cs = c_positions(blocks);
    let mut c_max: Option<ExactRational> = None;
    let mut other_min: Option<ExactRational> = None;
    for k in 1..=last {
        let v = dk(&base, k)?;
        if cs.contains(&k) {
            if c_max.as_ref().is_none_or(|m| &v > m) {
                c_max = Some(v);
            }
        } else if other_min.as_ref().is_none_or(|m| &v < m) {
            other_min = Some(v);
        }
    }
    let c_max = c_max.unwrap_or_else(BigRational::zero);
    let other_min = other_min.unwrap_or_else(BigRational::one);
    let pass = c_max <= recip(c) && other_min >= recip(2 * b) && recip(2 * b) > recip(c);
    Ok(Thm12Bounds { c_max, other_min, c, b, pass })
}

/// Lemma22 pattern check over `periods` periods: `D_t >= 1/a - 1/a^2 >= 1/b`
/// off the `b` positions, `D_t < 1/b` on them. Equality holds at `t = 2`
/// whenever `b_1 = b_2 = a`.
pub fn check_lemma22_bounds(a: u64, b: u64, l: u64, periods: usize) -> Result<bool> {
    let base = BaseSequence::from_spec(lemma22_base(a, b, l)?)?;
    let floor = recip(a) - recip(a * a);
    if floor < recip(b) {
        return Ok(false);
    }
    let period = (l + 1) as usize;
    for t in 1..=periods * period {
        let v = dk(&base, t)?;
        let ok = if t % period == 0 { v < recip(b) } else { v >= floor };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D_{(l+1)k}` for `k = 1..=k_max`, the subsequence that converges to
/// [`lemma22_limit`].
pub fn lemma22_subsequence(a: u64, b: u64, l: u64, k_max: usize) -> Result<Vec<ExactRational>> {
    let base = BaseSequence::from_spec(lemma22_base(a, b, l)?)?;
    (1..=k_max).map(|k| dk(&base, (l as usize + 1) * k)).collect()
}

/// `1/2`, the lower end of the Δ window.
pub fn delta_floor() -> ExactRational {
    frac(1, 2)
}

/// `16/9`, the lower end of the thm12 ratio window.
pub fn thm12_ratio_floor() -> ExactRational {
    frac(16, 9)
}
