//! The additive complements induced by a base sequence.
//!
//! `A` collects the values whose mixed-radix digits vanish at every odd index,
//! `B` those whose digits vanish at every even index. Every `m` splits uniquely
//! into its even-index part (in `A`) and odd-index part (in `B`), so `A + B`
//! covers all non-negative integers with exactly one decomposition each.
//!
//! Both sets contain 0 and the counting functions count it:
//! `A(x) = |{a in A : a <= x}|`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixed_radix::{encode, BaseSequence, DigitVector};

/// Which of the two complements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    /// Parity of the digit indices this side may use.
    pub fn parity(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub fn owns(self, index: usize) -> bool {
        index % 2 == self.parity()
    }
}

#[derive(Debug, Clone)]
pub struct ComplementPair {
    base: BaseSequence,
}

/// The points `y_k in A`, `z_k in B` and `x_k = a_{2k} - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPoints {
    pub k: usize,
    pub y: BigUint,
    pub z: BigUint,
    pub x: BigUint,
}

/// Expected counts at the special points, from the product formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormCounts {
    pub a_at_y: BigUint,
    pub b_at_y: BigUint,
    pub a_at_z: BigUint,
    pub b_at_z: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub base: String,
    pub limit: u64,
    /// Values with no decomposition `a + b`.
    pub missing: Vec<u64>,
    /// Values with more than one decomposition, with their count.
    pub multiple: Vec<(u64, u32)>,
    pub pass: bool,
}

impl ComplementPair {
    pub fn new(base: BaseSequence) -> Self {
        ComplementPair { base }
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn member(&self, side: Side, x: &BigUint) -> bool {
        let d = encode(x, &self.base);
        d.digits()
            .iter()
            .enumerate()
            .all(|(j, eps)| side.owns(j) || eps.is_zero())
    }

    pub fn member_a(&self, x: &BigUint) -> bool {
        self.member(Side::A, x)
    }

    pub fn member_b(&self, x: &BigUint) -> bool {
        self.member(Side::B, x)
    }

    /// Members of `side` that are `<= limit`, ascending from 0.
    pub fn iter(&self, side: Side, limit: &BigUint) -> MemberIter {
        MemberIter {
            base: self.base.clone(),
            side,
            limit: limit.clone(),
            digits: Vec::new(),
            value: BigUint::zero(),
            started: false,
            done: false,
        }
    }

    pub fn iter_a(&self, limit: &BigUint) -> MemberIter {
        self.iter(Side::A, limit)
    }

    pub fn iter_b(&self, limit: &BigUint) -> MemberIter {
        self.iter(Side::B, limit)
    }

    /// `|{v in side : v <= x}|` by digit DP over the representation of `x`.
    pub fn count(&self, side: Side, x: &BigUint) -> BigUint {
        let d = encode(x, &self.base);
        self.count_digits(side, &d)
    }

    pub fn count_a(&self, x: &BigUint) -> BigUint {
        self.count(Side::A, x)
    }

    pub fn count_b(&self, x: &BigUint) -> BigUint {
        self.count(Side::B, x)
    }

    /// `(A(x), B(x))` from a single encoding.
    pub fn counts(&self, x: &BigUint) -> (BigUint, BigUint) {
        let d = encode(x, &self.base);
        (self.count_digits(Side::A, &d), self.count_digits(Side::B, &d))
    }

    // Scan from the top digit. At an index the side owns, any smaller digit
    // leaves the lower positions free; at a foreign index only 0 is allowed,
    // so a non-zero digit there ends the prefix match.
    fn count_digits(&self, side: Side, d: &DigitVector) -> BigUint {
        let free_row = side.parity();
        self.base.with_terms(d.len() + 1, |t| {
            let free = &t.free[free_row];
            let mut total = BigUint::zero();
            for j in (0..d.len()).rev() {
                let eps = &d.digits()[j];
                if side.owns(j) {
                    total += eps * &free[j];
                } else if !eps.is_zero() {
                    return total + &free[j];
                }
            }
            total + 1u32
        })
    }

    pub fn special_points(&self, k: usize) -> Result<SpecialPoints> {
        if k == 0 {
            return Err(Error::IndexTooSmall { what: "special_points", name: "k", min: 1, got: 0 });
        }
        self.base.with_terms(2 * k + 2, |t| {
            let one = BigUint::one();
            let mut y = t.a[2 * k].clone();
            let mut z = t.a[2 * k + 1].clone();
            for i in 1..=k {
                y += (&t.b[2 * i - 1] - &one) * &t.a[2 * i - 2];
                z += (&t.b[2 * i] - &one) * &t.a[2 * i - 1];
            }
            let x = &t.a[2 * k] - &one;
            Ok(SpecialPoints { k, y, z, x })
        })
    }

    /// `A(y_k) = 2 b_1 b_3 ... b_{2k-1}`, `B(y_k) = b_2 b_4 ... b_{2k}`,
    /// `A(z_k) = b_1 b_3 ... b_{2k+1}`, `B(z_k) = 2 b_2 b_4 ... b_{2k}`.
    pub fn closed_form_counts(&self, k: usize) -> Result<ClosedFormCounts> {
        if k == 0 {
            return Err(Error::IndexTooSmall { what: "closed_form_counts", name: "k", min: 1, got: 0 });
        }
        self.base.with_terms(2 * k + 2, |t| {
            let odd: BigUint = (1..=k).map(|i| &t.b[2 * i - 1]).product();
            let even: BigUint = (1..=k).map(|i| &t.b[2 * i]).product();
            Ok(ClosedFormCounts {
                a_at_y: &odd * 2u32,
                b_at_y: even.clone(),
                a_at_z: &odd * &t.b[2 * k + 1],
                b_at_z: even * 2u32,
            })
        })
    }

    /// `A(x) B(x) - x`, defined for `x >= 1`.
    pub fn defect(&self, x: &BigUint) -> Result<BigInt> {
        if x.is_zero() {
            return Err(Error::IndexTooSmall { what: "defect", name: "x", min: 1, got: 0 });
        }
        let (ca, cb) = self.counts(x);
        Ok(BigInt::from(ca * cb) - BigInt::from(x.clone()))
    }

    /// Split `m` into its even-index part (in A) and odd-index part (in B).
    pub fn decompose(&self, m: &BigUint) -> (BigUint, BigUint) {
        let d = encode(m, &self.base);
        self.base.with_terms(d.len(), |t| {
            let mut parts = [BigUint::zero(), BigUint::zero()];
            for (j, eps) in d.digits().iter().enumerate() {
                parts[j % 2] += eps * &t.a[j];
            }
            let [a, b] = parts;
            (a, b)
        })
    }

    /// Count the decompositions `m = a + b` with `a in A`, `b in B` for every
    /// `m <= limit` by direct convolution of the enumerated members.
    pub fn verify_cover(&self, limit: u64) -> CoverReport {
        let bound = BigUint::from(limit);
        let to_u64 = |v: BigUint| v.to_u64().expect("member <= limit");
        let a: Vec<u64> = self.iter_a(&bound).map(to_u64).collect();
        let b: Vec<u64> = self.iter_b(&bound).map(to_u64).collect();
        let mut hits = vec![0u32; limit as usize + 1];
        for &x in &a {
            for &y in &b {
                let Some(s) = x.checked_add(y).filter(|&s| s <= limit) else {
                    break;
                };
                hits[s as usize] += 1;
            }
        }
        let missing: Vec<u64> = (0..=limit).filter(|&m| hits[m as usize] == 0).collect();
        let multiple: Vec<(u64, u32)> = (0..=limit)
            .filter(|&m| hits[m as usize] > 1)
            .map(|m| (m, hits[m as usize]))
            .collect();
        let pass = missing.is_empty() && multiple.is_empty();
        CoverReport { base: self.base.describe(), limit, missing, multiple, pass }
    }
}

/// Ascending members of one complement up to a limit. Walks the side's digit
/// positions like an odometer.
#[derive(Debug, Clone)]
pub struct MemberIter {
    base: BaseSequence,
    side: Side,
    limit: BigUint,
    /// digits at positions parity, parity + 2, ...
    digits: Vec<BigUint>,
    value: BigUint,
    started: bool,
    done: bool,
}

impl MemberIter {
    fn advance(&mut self) {
        let mut slot = 0usize;
        loop {
            let j = 2 * slot + self.side.parity();
            let (b_next, a_j) = self.base.with_terms(j + 2, |t| (t.b[j + 1].clone(), t.a[j].clone()));
            if slot == self.digits.len() {
                self.digits.push(BigUint::zero());
            }
            let digit = &mut self.digits[slot];
            *digit += 1u32;
            if *digit < b_next {
                self.value += a_j;
                return;
            }
            // carry: reset this position and move up
            *digit -= 1u32;
            self.value -= &*digit * &a_j;
            *digit = BigUint::zero();
            slot += 1;
        }
    }
}

impl Iterator for MemberIter {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.done {
            return None;
        }
        if self.started {
            self.advance();
        }
        self.started = true;
        if self.value > self.limit {
            self.done = true;
            return None;
        }
        Some(self.value.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed_radix::BaseSpec;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn pair(spec: BaseSpec) -> ComplementPair {
        ComplementPair::new(BaseSequence::from_spec(spec).unwrap())
    }

    fn uniform2() -> ComplementPair {
        pair(BaseSpec::Uniform { value: 2 })
    }

    fn alt23() -> ComplementPair {
        pair(BaseSpec::Explicit { b: vec![2, 3, 2, 3] })
    }

    /// Enumeration oracle: all parity-constrained digit vectors with value <= limit.
    fn brute_members(p: &ComplementPair, side: Side, limit: u64) -> Vec<u64> {
        let base = p.base();
        let mut out = vec![0u64];
        let mut j = side.parity();
        loop {
            let a_j = base.a(j).to_u64().unwrap();
            if a_j > limit {
                break;
            }
            let b_next = base.b(j + 1).to_u64().unwrap();
            let mut next = vec![];
            for &v in &out {
                for eps in 0..b_next {
                    let w = v + eps * a_j;
                    if w <= limit {
                        next.push(w);
                    }
                }
            }
            out = next;
            j += 2;
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn membership_examples() {
        let p = uniform2();
        assert!(p.member_a(&big(5)));
        assert!(p.member_b(&big(2)));
        assert!(!p.member_a(&big(2)));
        assert!(p.member_a(&big(0)) && p.member_b(&big(0)));
        assert!(alt23().member_a(&big(7)));
    }

    #[test]
    fn iteration_examples() {
        let p = uniform2();
        let a: Vec<u64> = p.iter_a(&big(20)).map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(a, [0, 1, 4, 5, 16, 17, 20]);
        assert_eq!(a, brute_members(&p, Side::A, 20));
        let b: Vec<u64> = p.iter_b(&big(10)).map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(b, [0, 2, 8, 10]);
        assert_eq!(b, brute_members(&p, Side::B, 10));
        assert_eq!(alt23().iter_a(&big(0)).count(), 1);
        assert_eq!(alt23().iter_b(&big(0)).collect::<Vec<_>>(), vec![big(0)]);
    }

    #[test]
    fn iteration_matches_brute_force_on_several_bases() {
        for spec in [
            BaseSpec::Uniform { value: 3 },
            BaseSpec::Explicit { b: vec![2, 3, 2, 3, 2, 3] },
            BaseSpec::Thm12 { d: vec![2, 4], c: 9 },
            BaseSpec::Thm11,
        ] {
            let p = pair(spec);
            for side in [Side::A, Side::B] {
                let got: Vec<u64> = p.iter(side, &big(50_000)).map(|v| v.to_u64().unwrap()).collect();
                assert_eq!(got, brute_members(&p, side, 50_000));
            }
        }
    }

    #[test]
    fn count_examples() {
        let p = uniform2();
        assert_eq!(p.count_a(&big(5)), big(4));
        assert_eq!(p.count_b(&big(5)), big(2));
        assert_eq!(p.count_a(&big(0)), big(1));
        assert_eq!(alt23().count_a(&big(0)), big(1));
    }

    #[test]
    fn counts_step_by_one_at_members() {
        for p in [uniform2(), alt23(), pair(BaseSpec::Thm11)] {
            let mut prev = (big(1), big(1));
            for x in 1..3000u64 {
                let x = big(x);
                let cur = p.counts(&x);
                let step_a = &cur.0 - &prev.0;
                let step_b = &cur.1 - &prev.1;
                assert_eq!(step_a, big(p.member_a(&x) as u64));
                assert_eq!(step_b, big(p.member_b(&x) as u64));
                prev = cur;
            }
        }
    }

    #[test]
    fn special_point_examples() {
        let sp = uniform2().special_points(1).unwrap();
        assert_eq!((sp.y, sp.z, sp.x), (big(5), big(10), big(3)));
        assert_eq!(alt23().special_points(1).unwrap().y, big(7));
        assert_eq!(uniform2().special_points(2).unwrap().x, big(15));
        assert!(uniform2().special_points(0).is_err());
    }

    #[test]
    fn special_points_land_in_their_sets() {
        for p in [uniform2(), alt23(), pair(BaseSpec::Thm12 { d: vec![2, 4], c: 9 })] {
            for k in 1..=6 {
                let sp = p.special_points(k).unwrap();
                assert!(p.member_a(&sp.y));
                assert!(p.member_b(&sp.z));
            }
        }
    }

    #[test]
    fn closed_forms_match_counts() {
        for p in [uniform2(), alt23(), pair(BaseSpec::Thm11), pair(BaseSpec::Thm12 { d: vec![2, 4], c: 9 })] {
            for k in 1..=10 {
                let sp = p.special_points(k).unwrap();
                let cf = p.closed_form_counts(k).unwrap();
                assert_eq!(p.counts(&sp.y), (cf.a_at_y, cf.b_at_y));
                assert_eq!(p.counts(&sp.z), (cf.a_at_z, cf.b_at_z));
            }
        }
    }

    #[test]
    fn defect_examples() {
        assert_eq!(uniform2().defect(&big(3)).unwrap(), BigInt::from(1));
        assert_eq!(uniform2().defect(&big(15)).unwrap(), BigInt::from(1));
        assert_eq!(alt23().defect(&big(5)).unwrap(), BigInt::from(1));
        assert!(uniform2().defect(&big(0)).is_err());
    }

    #[test]
    fn cover_examples() {
        let r = uniform2().verify_cover(10_000);
        assert!(r.pass, "{r:?}");
        assert!(pair(BaseSpec::Explicit { b: vec![2, 3, 2, 3, 2, 3] }).verify_cover(200).pass);
        let r = uniform2().verify_cover(0);
        assert!(r.pass);
        assert_eq!(uniform2().decompose(&big(0)), (big(0), big(0)));
    }

    #[test]
    fn decompose_splits_digits_by_parity() {
        let p = alt23();
        for m in 0..2000u64 {
            let (a, b) = p.decompose(&big(m));
            assert_eq!(&a + &b, big(m));
            assert!(p.member_a(&a));
            assert!(p.member_b(&b));
        }
    }
}
