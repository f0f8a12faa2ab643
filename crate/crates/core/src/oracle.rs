//! Brute-force reference counts and exhaustive checks of the ratio
//! inequalities.
//!
//! Nothing here uses the digit DP: sets are built by expanding digit vectors
//! over machine words, with products recomputed from the raw terms.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixed_radix::BaseSequence;
use crate::report::{Counterexample, ReportBuilder, VerificationReport};

/// Default ceiling on enumerated values.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Ceiling for [`check_scan_reduction`].
pub const SCAN_REDUCTION_LIMIT: u64 = 1_000_000;

/// Both complements up to `bound`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSets {
    pub bound: u64,
    /// `a_0, a_1, ...` up to the first product above `bound`.
    pub products: Vec<u64>,
    /// `b_0, b_1, ...`, aligned with `products` plus one more term.
    pub terms: Vec<u64>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl OracleSets {
    pub fn enumerate(base: &BaseSequence, bound: u64) -> Result<Self> {
        Self::enumerate_with_limit(base, bound, ENUMERATION_LIMIT)
    }

    pub fn enumerate_with_limit(base: &BaseSequence, bound: u64, limit: u64) -> Result<Self> {
        if bound > limit {
            return Err(Error::EnumerationBound { requested: bound.to_string(), limit });
        }
        let mut terms = vec![1u64];
        let mut products = vec![1u64];
        loop {
            let j = terms.len();
            let bj = base.b_u64(j);
            terms.push(bj);
            let last = *products.last().unwrap();
            if last > bound {
                break;
            }
            products.push(last.saturating_mul(bj));
        }
        let a = expand(&products, &terms, 0, bound);
        let b = expand(&products, &terms, 1, bound);
        Ok(OracleSets { bound, products, terms, a, b })
    }

    /// `(A(x), B(x))` for `x <= bound`.
    pub fn counts(&self, x: u64) -> (u64, u64) {
        assert!(x <= self.bound, "x = {x} above enumerated bound {}", self.bound);
        let ca = self.a.partition_point(|&v| v <= x) as u64;
        let cb = self.b.partition_point(|&v| v <= x) as u64;
        (ca, cb)
    }

    pub fn in_a(&self, x: u64) -> bool {
        self.a.binary_search(&x).is_ok()
    }

    pub fn in_b(&self, x: u64) -> bool {
        self.b.binary_search(&x).is_ok()
    }

    /// Greedy digits of `x` against the oracle's own products.
    pub fn digits(&self, x: u64) -> Vec<u64> {
        let top = self.products.partition_point(|&p| p <= x);
        let mut rest = x;
        let mut out = vec![0u64; top];
        for j in (0..top).rev() {
            out[j] = rest / self.products[j];
            rest %= self.products[j];
        }
        out
    }

    /// `y_k` in machine words, if `a_{2k}` was reached.
    fn y(&self, k: usize) -> Option<u64> {
        let mut v = *self.products.get(2 * k)?;
        for i in 1..=k {
            v += (self.terms[2 * i - 1] - 1) * self.products[2 * i - 2];
        }
        Some(v)
    }

    fn z(&self, k: usize) -> Option<u64> {
        let mut v = *self.products.get(2 * k + 1)?;
        for i in 1..=k {
            v += (self.terms[2 * i] - 1) * self.products[2 * i - 1];
        }
        Some(v)
    }
}

/// Sums of `eps_j a_j` over positions of one parity, each value `<= bound`.
fn expand(products: &[u64], terms: &[u64], parity: usize, bound: u64) -> Vec<u64> {
    let mut values = vec![0u64];
    let mut j = parity;
    while j < products.len() && products[j] <= bound {
        let step = products[j];
        let max_digit = terms[j + 1] - 1;
        let mut next = Vec::with_capacity(values.len() * 2);
        for &v in &values {
            for e in 0..=max_digit {
                let w = v + e * step;
                if w > bound {
                    break;
                }
                next.push(w);
            }
        }
        values = next;
        j += 2;
    }
    values.sort_unstable();
    values
}

/// Counts by enumeration, for `x <= 10^7`.
pub fn oracle_counts(base: &BaseSequence, x: &BigUint) -> Result<(BigUint, BigUint)> {
    let bound = x
        .to_u64()
        .filter(|&v| v <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::EnumerationBound { requested: x.to_string(), limit: ENUMERATION_LIMIT })?;
    let sets = OracleSets::enumerate(base, bound)?;
    let (ca, cb) = sets.counts(bound);
    Ok((ca.into(), cb.into()))
}

/// A tuple for the monotone-fraction check:
/// `(a1 x + b1)/(a2 x + b2) <= (a1 u + b1)/(a2 u + b2)` on `0 <= x <= u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FractionSample {
    pub a1: i64,
    pub a2: i64,
    pub b1: i64,
    pub b2: i64,
    pub u: u64,
}

impl FractionSample {
    pub fn new(a1: i64, a2: i64, b1: i64, b2: i64, u: u64) -> Self {
        FractionSample { a1, a2, b1, b2, u }
    }

    /// `a1 b2 - a2 b1 >= 0` and a positive denominator on `[0, u]`.
    pub fn admissible(&self) -> bool {
        let det = self.a1 as i128 * self.b2 as i128 - self.a2 as i128 * self.b1 as i128;
        let end = self.a2 as i128 * self.u as i128 + self.b2 as i128;
        det >= 0 && self.b2 > 0 && end > 0
    }
}

/// Every tuple with coefficients in `[-r, r]`, paired with each `u` in `us`.
pub fn fraction_grid(r: i64, us: &[u64]) -> Vec<FractionSample> {
    let mut out = Vec::new();
    for a1 in -r..=r {
        for a2 in -r..=r {
            for b1 in -r..=r {
                for b2 in -r..=r {
                    for &u in us {
                        out.push(FractionSample::new(a1, a2, b1, b2, u));
                    }
                }
            }
        }
    }
    out
}

/// Exact check of the monotone-fraction inequality. Tuples outside the
/// hypotheses are counted as skipped.
pub fn check_lemma33(samples: &[FractionSample]) -> VerificationReport {
    let mut rep = ReportBuilder::start("lemma33", "n/a", samples.len());
    let results: Vec<(u64, Vec<Counterexample>)> = samples
        .par_iter()
        .filter(|s| s.admissible())
        .map(|s| {
            let (a1, a2, b1, b2) = (s.a1 as i128, s.a2 as i128, s.b1 as i128, s.b2 as i128);
            let u = s.u as i128;
            let rhs_num = a1 * u + b1;
            let rhs_den = a2 * u + b2;
            let mut bad = Vec::new();
            for x in 0..=u {
                let lhs_num = a1 * x + b1;
                let lhs_den = a2 * x + b2;
                if lhs_num * rhs_den > rhs_num * lhs_den {
                    bad.push(Counterexample::new(
                        x as u64,
                        format!("tuple ({}, {}, {}, {}, u = {}): {lhs_num}/{lhs_den} > {rhs_num}/{rhs_den}", s.a1, s.a2, s.b1, s.b2, s.u),
                    ));
                }
            }
            (s.u + 1, bad)
        })
        .collect();
    let admitted = results.len();
    for _ in admitted..samples.len() {
        rep.skip();
    }
    for (n, bad) in results {
        rep.add_checked(n);
        for c in bad {
            rep.fail(c);
        }
    }
    rep.finish()
}

/// Largest `k` with `a_{2k+2} <= limit`, or 0 if even `a_4` is too big.
pub fn max_k_within(base: &BaseSequence, limit: u64) -> usize {
    let limit = BigUint::from(limit);
    let mut k = 0;
    while base.a(2 * k + 4) <= limit {
        k += 1;
    }
    k
}

fn special_guard(base: &BaseSequence, k_max: usize) -> Result<u64> {
    if k_max == 0 {
        return Err(Error::IndexTooSmall { what: "maximality check", name: "k_max", min: 1, got: 0 });
    }
    let top = base.a(2 * k_max + 2);
    match top.to_u64().filter(|&v| v <= ENUMERATION_LIMIT) {
        Some(v) => Ok(v),
        None => Err(Error::EnumerationBound { requested: top.to_string(), limit: ENUMERATION_LIMIT }),
    }
}

fn fmt_digits(d: &[u64]) -> String {
    let parts: Vec<String> = d.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// For each `k <= k_max` and each `x` in the chosen side whose top digit
/// sits at `2k` (side A) or `2k+1` (side B), require
/// `A(x)B(x)/x <= A(p)B(p)/p` with `p = y_k` or `z_k`.
fn check_maximality(suite: &str, base: &BaseSequence, k_max: usize, side_b: bool) -> Result<VerificationReport> {
    let bound = special_guard(base, k_max)?;
    let mut rep = ReportBuilder::start(suite, base.describe(), format!("k_max = {k_max}"));
    let sets = OracleSets::enumerate(base, bound)?;
    let members = if side_b { &sets.b } else { &sets.a };
    for k in 1..=k_max {
        let (top, peak, name) = if side_b {
            (2 * k + 1, sets.z(k).expect("guarded"), "z")
        } else {
            (2 * k, sets.y(k).expect("guarded"), "y")
        };
        let lo = sets.products[top];
        let hi = sets.products[top + 1];
        let peak_in = if side_b { sets.in_b(peak) } else { sets.in_a(peak) };
        rep.check(peak_in, || Counterexample::new(peak, format!("{name}_{k} not in its complement")));
        let (pa, pb) = sets.counts(peak);
        let peak_prod = pa as u128 * pb as u128;
        let start = members.partition_point(|&v| v < lo);
        let end = members.partition_point(|&v| v < hi);
        let bad: Vec<Counterexample> = members[start..end]
            .par_iter()
            .filter_map(|&x| {
                let (ca, cb) = sets.counts(x);
                let lhs = ca as u128 * cb as u128 * peak as u128;
                let rhs = peak_prod * x as u128;
                (lhs > rhs).then(|| {
                    Counterexample::new(
                        x,
                        format!(
                            "digits {} k = {k}: {ca}*{cb}/{x} > {pa}*{pb}/{peak} at {name}_{k}",
                            fmt_digits(&sets.digits(x))
                        ),
                    )
                })
            })
            .collect();
        rep.add_checked((end - start) as u64);
        for c in bad {
            rep.fail(c);
        }
        rep.note(format!("k = {k}: {} members checked against {name}_{k} = {peak}", end - start));
    }
    Ok(rep.finish())
}

/// Maximality of `y_k` among members of A with top digit index `2k`.
pub fn check_lemma34(base: &BaseSequence, k_max: usize) -> Result<VerificationReport> {
    check_maximality("lemma34", base, k_max, false)
}

/// Maximality of `z_k` among members of B with top digit index `2k+1`.
pub fn check_lemma35(base: &BaseSequence, k_max: usize) -> Result<VerificationReport> {
    check_maximality("lemma35", base, k_max, true)
}

/// For every `2 <= x <= limit` outside `A ∪ B`, require
/// `A(x)B(x)/x < A(x-1)B(x-1)/(x-1)`.
pub fn check_scan_reduction(base: &BaseSequence, limit: u64) -> Result<VerificationReport> {
    if limit > SCAN_REDUCTION_LIMIT {
        return Err(Error::EnumerationBound { requested: limit.to_string(), limit: SCAN_REDUCTION_LIMIT });
    }
    let mut rep = ReportBuilder::start("scan-reduction", base.describe(), limit);
    let sets = OracleSets::enumerate(base, limit)?;
    let mut prev = sets.counts(1.min(limit));
    for x in 2..=limit {
        let cur = sets.counts(x);
        if sets.in_a(x) || sets.in_b(x) {
            rep.skip();
        } else {
            let lhs = cur.0 as u128 * cur.1 as u128 * (x - 1) as u128;
            let rhs = prev.0 as u128 * prev.1 as u128 * x as u128;
            rep.check(lhs < rhs, || {
                Counterexample::new(
                    x,
                    format!("digits {}: {}*{}/{x} >= {}*{}/{}", fmt_digits(&sets.digits(x)), cur.0, cur.1, prev.0, prev.1, x - 1),
                )
            });
        }
        prev = cur;
    }
    Ok(rep.finish())
}

/// Digit-DP counts against enumeration for every `x <= bound`.
pub fn check_dp_agreement(base: &BaseSequence, bound: u64) -> Result<VerificationReport> {
    let pair = crate::complement::ComplementPair::new(base.clone());
    let sets = OracleSets::enumerate(base, bound)?;
    let mut rep = ReportBuilder::start("dp-agreement", base.describe(), bound);
    pair.base().ensure_covers(&BigUint::from(bound));
    let bad: Vec<Counterexample> = (0..=bound)
        .into_par_iter()
        .filter_map(|x| {
            let (oa, ob) = sets.counts(x);
            let (da, db) = pair.counts(&BigUint::from(x));
            (da != BigUint::from(oa) || db != BigUint::from(ob))
                .then(|| Counterexample::new(x, format!("dp ({da}, {db}) vs oracle ({oa}, {ob})")))
        })
        .collect();
    rep.add_checked(bound + 1);
    for c in bad {
        rep.fail(c);
    }
    Ok(rep.finish())
}
