//! Verification suites over the production paths, reported uniformly.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use crate::complement::ComplementPair;
use crate::constructions::{lemma22_limit, theorem_b_ratio, thm13_limit};
use crate::dk::{ratio_at_special, SpecialKind};
use crate::error::Result;
use crate::mixed_radix::{verify_uniqueness, BaseSequence};
use crate::rational::{format_exact, to_decimal};
use crate::report::{Counterexample, ReportBuilder, VerificationReport};

/// Pairs used by [`theorem_b_crosscheck`] when none are given.
pub const THEOREM_B_PAIRS: [(u64, u64); 3] = [(2, 4), (2, 5), (3, 5)];

pub fn coverage(base: &BaseSequence, limit: u64) -> VerificationReport {
    let mut rep = ReportBuilder::start("coverage", base.describe(), limit);
    let cover = ComplementPair::new(base.clone()).verify_cover(limit);
    rep.add_checked(limit + 1);
    for &m in &cover.missing {
        rep.fail(Counterexample::new(m, "no decomposition"));
    }
    for &(m, n) in &cover.multiple {
        rep.fail(Counterexample::new(m, format!("{n} decompositions")));
    }
    rep.finish()
}

pub fn uniqueness(base: &BaseSequence, bound: u64) -> VerificationReport {
    let mut rep = ReportBuilder::start("uniqueness", base.describe(), bound);
    let u = verify_uniqueness(base, bound);
    rep.add_checked(u.vectors);
    for &m in &u.duplicates {
        rep.fail(Counterexample::new(m, "decoded from more than one digit vector"));
    }
    for &m in &u.missing {
        rep.fail(Counterexample::new(m, "no digit vector decodes to this value"));
    }
    rep.note(format!("{} digit vectors decoded", u.vectors));
    rep.finish()
}

/// `A(x_k)B(x_k) - x_k = 1` at `x_k = a_{2k} - 1` for `k = 1..=k_max`.
pub fn defect_one(base: &BaseSequence, k_max: usize) -> Result<VerificationReport> {
    let pair = ComplementPair::new(base.clone());
    let mut rep = ReportBuilder::start("defect", base.describe(), format!("k_max = {k_max}"));
    for k in 1..=k_max {
        let x = pair.special_points(k)?.x;
        let d = pair.defect(&x)?;
        rep.check(d.is_one(), || Counterexample::new(x.clone(), format!("k = {k}: defect {d}")));
    }
    Ok(rep.finish())
}

/// Product formulas for the counts at `y_k`, `z_k` and the ratios
/// `2/(1 + D*)` against the digit DP, `k = 1..=k_max`.
pub fn lemma32(base: &BaseSequence, k_max: usize) -> Result<VerificationReport> {
    let pair = ComplementPair::new(base.clone());
    let mut rep = ReportBuilder::start("lemma32", base.describe(), format!("k_max = {k_max}"));
    for k in 1..=k_max {
        let sp = pair.special_points(k)?;
        let cf = pair.closed_form_counts(k)?;
        let at_y = pair.counts(&sp.y);
        let at_z = pair.counts(&sp.z);
        rep.check(at_y == (cf.a_at_y.clone(), cf.b_at_y.clone()), || {
            Counterexample::new(sp.y.clone(), format!("k = {k}: counts {at_y:?} vs closed form ({}, {})", cf.a_at_y, cf.b_at_y))
        });
        rep.check(at_z == (cf.a_at_z.clone(), cf.b_at_z.clone()), || {
            Counterexample::new(sp.z.clone(), format!("k = {k}: counts {at_z:?} vs closed form ({}, {})", cf.a_at_z, cf.b_at_z))
        });
        for kind in [SpecialKind::Y, SpecialKind::Z] {
            let r = ratio_at_special(&pair, k, kind)?;
            rep.check(r.agrees(), || {
                Counterexample::new(
                    r.x.clone(),
                    format!("k = {k} {kind:?}: counted {} vs 2/(1+D*) = {}", format_exact(&r.counted), format_exact(&r.closed_form)),
                )
            });
        }
    }
    Ok(rep.finish())
}

/// `lemma22_limit(a, b, 1)` against `2/((a-1)/(ab-1) + 1)`.
pub fn theorem_b_crosscheck(pairs: &[(u64, u64)]) -> Result<VerificationReport> {
    let mut rep = ReportBuilder::start("theoremB-crosscheck", "lemma22(a, b, l = 1)", pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let lim = lemma22_limit(a, b, 1)?;
        let known = theorem_b_ratio(a, b)?;
        rep.check(lim.ratio == known, || {
            Counterexample::new(i as u64, format!("(a, b) = ({a}, {b}): {} vs {}", format_exact(&lim.ratio), format_exact(&known)))
        });
        rep.note(format!("(a, b) = ({a}, {b}): ratio {}", format_exact(&lim.ratio)));
    }
    Ok(rep.finish())
}

/// For odd `l = 1, 3, ..., l_max`, the D-limits of `lemma22_limit(a, b, l)`
/// must strictly approach `a/(b(a+1))`, and so must the ratios approach
/// `2/(1 + a/(b(a+1)))`.
pub fn thm13_convergence(a: u64, b: u64, l_max: u64) -> Result<VerificationReport> {
    let target = thm13_limit(a, b)?;
    let mut rep = ReportBuilder::start("thm13-convergence", format!("lemma22(a = {a}, b = {b})"), format!("l_max = {l_max}"));
    let mut prev: Option<(BigInt, num_rational::BigRational, num_rational::BigRational)> = None;
    let mut l = 1;
    while l <= l_max {
        let lim = lemma22_limit(a, b, l)?;
        let gap = (&lim.d_limit - &target.d_limit).abs();
        let ratio_gap = (&lim.ratio - &target.ratio).abs();
        if let Some((_, pg, prg)) = &prev {
            rep.check(&gap < pg && &ratio_gap < prg, || {
                Counterexample::new(
                    BigUint::from(l),
                    format!("l = {l}: gap {} not below previous {}", format_exact(&gap), format_exact(pg)),
                )
            });
        }
        rep.note(format!(
            "l = {l}: D = {} ({}), ratio = {}, gap = {}",
            format_exact(&lim.d_limit),
            to_decimal(&lim.d_limit, 12),
            format_exact(&lim.ratio),
            to_decimal(&gap, 6)
        ));
        prev = Some((BigInt::from(l), gap, ratio_gap));
        l += 2;
    }
    rep.note(format!("target D = {}, ratio = {}", format_exact(&target.d_limit), format_exact(&target.ratio)));
    Ok(rep.finish())
}
