//! The alternating sums
//! `D_k = 1/b_k - 1/(b_k b_{k-1}) + ... + (-1)^{k-1}/(b_k ... b_1)`
//! and the ratio statistics `A(x) B(x) / x` they control.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::complement::ComplementPair;
use crate::error::{Error, Result};
use crate::mixed_radix::BaseSequence;
use crate::rational::{ratio_of, two_over_one_plus, ExactRational};

/// `D_k` for `k >= 1`.
///
/// Over the common denominator `a_k = b_k ... b_1` the `i`-th term is
/// `(-1)^i a_{k-1-i} / a_k`.
pub fn dk(base: &BaseSequence, k: usize) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::IndexTooSmall { what: "dk", name: "k", min: 1, got: 0 });
    }
    Ok(base.with_terms(k + 1, |t| {
        let mut num = BigInt::zero();
        for i in 0..k {
            let term = BigInt::from(t.a[k - 1 - i].clone());
            if i % 2 == 0 {
                num += term;
            } else {
                num -= term;
            }
        }
        BigRational::new(num, BigInt::from(t.a[k].clone()))
    }))
}

/// `D*_k`: equal to `D_k` for even `k`; for odd `k` the last term
/// `1/(b_k ... b_1)` is dropped. Defined for `k >= 2`.
pub fn dk_star(base: &BaseSequence, k: usize) -> Result<ExactRational> {
    if k < 2 {
        return Err(Error::IndexTooSmall { what: "dk_star", name: "k", min: 2, got: k as u64 });
    }
    let d = dk(base, k)?;
    if k.is_multiple_of(2) {
        Ok(d)
    } else {
        Ok(d - ratio_of(&BigUint::one(), &base.a(k)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkRow {
    pub k: usize,
    pub d: ExactRational,
    /// `None` for `k = 1`.
    pub d_star: Option<ExactRational>,
}

#[derive(Debug, Clone)]
pub struct DkSeries {
    pub base: String,
    pub rows: Vec<DkRow>,
}

impl DkSeries {
    pub fn compute(base: &BaseSequence, k_max: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::IndexTooSmall { what: "dk series", name: "k_max", min: 1, got: 0 });
        }
        let rows = (1..=k_max)
            .map(|k| {
                Ok(DkRow {
                    k,
                    d: dk(base, k)?,
                    d_star: if k >= 2 { Some(dk_star(base, k)?) } else { None },
                })
            })
            .collect::<Result<_>>()?;
        Ok(DkSeries { base: base.describe(), rows })
    }
}

/// Which special point: `y_k in A` or `z_k in B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    Y,
    Z,
}

/// Ratio at a special point, from the closed form `2/(1 + D*)` and from
/// counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialRatio {
    pub k: usize,
    pub kind: SpecialKind,
    pub x: BigUint,
    pub count_a: BigUint,
    pub count_b: BigUint,
    pub closed_form: ExactRational,
    pub counted: ExactRational,
}

impl SpecialRatio {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.counted
    }
}

/// `A(y_k)B(y_k)/y_k = 2/(1 + D*_{2k})` and `A(z_k)B(z_k)/z_k = 2/(1 + D*_{2k+1})`.
pub fn ratio_at_special(pair: &ComplementPair, k: usize, kind: SpecialKind) -> Result<SpecialRatio> {
    let sp = pair.special_points(k)?;
    let (x, index) = match kind {
        SpecialKind::Y => (sp.y, 2 * k),
        SpecialKind::Z => (sp.z, 2 * k + 1),
    };
    let closed_form = two_over_one_plus(&dk_star(pair.base(), index)?);
    let (count_a, count_b) = pair.counts(&x);
    let counted = ratio_of(&(&count_a * &count_b), &x);
    Ok(SpecialRatio { k, kind, x, count_a, count_b, closed_form, counted })
}

/// One row of a ratio scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRecord {
    pub x: BigUint,
    pub in_a: bool,
    pub in_b: bool,
    pub count_a: BigUint,
    pub count_b: BigUint,
    pub ratio: ExactRational,
    pub defect: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub limit: BigUint,
    pub records: u64,
    /// Start of the regime scanned for [`Self::max_ratio`]: `a_2`, the first
    /// member whose top digit index is at least 2.
    pub regime_start: BigUint,
    /// Largest ratio over members `x >= a_2`, with the first `x` attaining it.
    pub max_ratio: Option<(ExactRational, BigUint)>,
    /// Largest ratio over all members `x >= 1`.
    pub global_max_ratio: Option<(ExactRational, BigUint)>,
    /// Every `x` in `[1, limit]` (member or not) with `A(x)B(x) - x = 1`.
    pub defect_one: Vec<BigUint>,
    /// Non-members checked for `ratio(x) < ratio(x - 1)`.
    pub reduction_checks: u64,
    pub reduction_violations: Vec<BigUint>,
}

/// Walk `A ∪ B` up to `limit` in ascending order, emitting a [`RatioRecord`]
/// for every member `x >= 1`.
///
/// Between consecutive members both counts are constant, so the defect
/// `A B - x` falls by one per step; a defect-one point inside such a gap is
/// located directly at `x = A B - 1`. The first non-member after each member
/// is checked for the strict ratio decrease.
pub fn ratio_scan(
    pair: &ComplementPair,
    limit: &BigUint,
    mut sink: impl FnMut(&RatioRecord),
) -> Result<ScanSummary> {
    if limit.is_zero() {
        return Err(Error::IndexTooSmall { what: "ratio_scan", name: "limit", min: 1, got: 0 });
    }
    let regime_start = pair.base().a(2);
    let mut a_iter = pair.iter_a(limit).peekable();
    let mut b_iter = pair.iter_b(limit).peekable();
    // 0 is in both sets
    a_iter.next();
    b_iter.next();

    let mut count_a = BigUint::one();
    let mut count_b = BigUint::one();
    let mut prev = BigUint::zero();
    let mut summary = ScanSummary {
        limit: limit.clone(),
        records: 0,
        regime_start: regime_start.clone(),
        max_ratio: None,
        global_max_ratio: None,
        defect_one: Vec::new(),
        reduction_checks: 0,
        reduction_violations: Vec::new(),
    };

    loop {
        let next = match (a_iter.peek(), b_iter.peek()) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (Some(x), Some(y)) => Some(x.min(y).clone()),
        };
        // gap (prev, gap_end) of non-members
        let gap_end = next.clone().unwrap_or_else(|| limit + 1u32);
        scan_gap(&prev, &gap_end, &count_a, &count_b, &mut summary);

        let Some(x) = next else { break };
        let in_a = a_iter.peek() == Some(&x);
        let in_b = b_iter.peek() == Some(&x);
        if in_a {
            a_iter.next();
            count_a += 1u32;
        }
        if in_b {
            b_iter.next();
            count_b += 1u32;
        }
        let product = &count_a * &count_b;
        let ratio = ratio_of(&product, &x);
        let defect = BigInt::from(product) - BigInt::from(x.clone());
        if defect.is_one() {
            summary.defect_one.push(x.clone());
        }
        let improve = |best: &Option<(ExactRational, BigUint)>| {
            best.as_ref().is_none_or(|(r, _)| &ratio > r)
        };
        if improve(&summary.global_max_ratio) {
            summary.global_max_ratio = Some((ratio.clone(), x.clone()));
        }
        if x >= regime_start && improve(&summary.max_ratio) {
            summary.max_ratio = Some((ratio.clone(), x.clone()));
        }
        let record = RatioRecord {
            x: x.clone(),
            in_a,
            in_b,
            count_a: count_a.clone(),
            count_b: count_b.clone(),
            ratio,
            defect,
        };
        summary.records += 1;
        sink(&record);
        prev = x;
    }
    Ok(summary)
}

fn scan_gap(prev: &BigUint, end: &BigUint, ca: &BigUint, cb: &BigUint, summary: &mut ScanSummary) {
    let first = prev + 1u32;
    if &first >= end {
        return;
    }
    let product = ca * cb;
    // x = prev + 1 is not a member: A(x)B(x)/x < A(x-1)B(x-1)/(x-1) when prev >= 1
    if !prev.is_zero() {
        summary.reduction_checks += 1;
        let lhs = ratio_of(&product, &first);
        let rhs = ratio_of(&product, prev);
        if lhs >= rhs {
            summary.reduction_violations.push(first.clone());
        }
    }
    if product >= BigUint::one() {
        let candidate = &product - 1u32;
        if candidate >= first && &candidate < end && !candidate.is_zero() {
            summary.defect_one.push(candidate);
        }
    }
}

/// Bounded-k view of `limsup_k 2/(1 + D*_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimsupEstimate {
    pub k_max: usize,
    /// `max_{2 <= k <= k_max} 2/(1 + D*_k)`; non-decreasing in `k_max`.
    pub prefix_max: ExactRational,
    pub prefix_argmax: usize,
    /// First index of the trailing window `[max(2, ceil(k_max/2)), k_max]`.
    pub tail_from: usize,
    /// `max` over the trailing window; this is the value that settles onto
    /// the limsup as `k_max` grows.
    pub tail_max: ExactRational,
    pub tail_argmax: usize,
    /// `min D*_k` and `min D_k` over the trailing window, for comparing the
    /// two liminfs.
    pub tail_min_d_star: ExactRational,
    pub tail_min_d: ExactRational,
}

pub fn limsup_estimate(base: &BaseSequence, k_max: usize) -> Result<LimsupEstimate> {
    if k_max < 2 {
        return Err(Error::IndexTooSmall { what: "limsup_estimate", name: "k_max", min: 2, got: k_max as u64 });
    }
    let tail_from = k_max.div_ceil(2).max(2);
    let mut prefix: Option<(ExactRational, usize)> = None;
    let mut tail: Option<(ExactRational, usize)> = None;
    let mut min_star: Option<ExactRational> = None;
    let mut min_d: Option<ExactRational> = None;
    for k in 2..=k_max {
        let star = dk_star(base, k)?;
        let value = two_over_one_plus(&star);
        if prefix.as_ref().is_none_or(|(v, _)| &value > v) {
            prefix = Some((value.clone(), k));
        }
        if k >= tail_from {
            if tail.as_ref().is_none_or(|(v, _)| &value > v) {
                tail = Some((value, k));
            }
            let d = dk(base, k)?;
            if min_star.as_ref().is_none_or(|m| &star < m) {
                min_star = Some(star);
            }
            if min_d.as_ref().is_none_or(|m| &d < m) {
                min_d = Some(d);
            }
        }
    }
    let (prefix_max, prefix_argmax) = prefix.expect("k_max >= 2");
    let (tail_max, tail_argmax) = tail.expect("window is non-empty");
    Ok(LimsupEstimate {
        k_max,
        prefix_max,
        prefix_argmax,
        tail_from,
        tail_max,
        tail_argmax,
        tail_min_d_star: min_star.expect("window is non-empty"),
        tail_min_d: min_d.expect("window is non-empty"),
    })
}
