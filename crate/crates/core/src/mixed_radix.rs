//! Base sequences and the unique mixed-radix representation
//! `m = sum_j eps_j * a_j`, `a_j = b_0 b_1 ... b_j`, `0 <= eps_j <= b_{j+1} - 1`.

use std::fmt;
use std::sync::{Arc, RwLock, RwLockReadGuard};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator rule for a base sequence `b_1, b_2, ...` (`b_0 = 1` is implicit).
///
/// Serialized as the tagged JSON object the CLI accepts, e.g.
/// `{"kind":"lemma22","a":2,"b":4,"l":1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaseSpec {
    /// `b_1, b_2, ...` listed explicitly; the list repeats once exhausted.
    Explicit { b: Vec<u64> },
    Uniform { value: u64 },
    /// `b_j = j + 1`.
    Thm11,
    /// Blocks `d_j, d_{j-1}, ..., d_1, c` for `j = 1, 2, ...`; `d` repeats once exhausted.
    Thm12 { d: Vec<u64>, c: u64 },
    /// `l` copies of `a` followed by one `b`, repeated.
    Lemma22 { a: u64, b: u64, l: u64 },
}

impl BaseSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            BaseSpec::Explicit { b } => {
                if b.is_empty() {
                    return Err(Error::constraint("explicit base requires at least one term"));
                }
                for (i, &v) in b.iter().enumerate() {
                    if v < 2 {
                        return Err(Error::InvalidTerm { index: i + 1, value: v });
                    }
                }
                Ok(())
            }
            BaseSpec::Uniform { value } => {
                if *value < 2 {
                    return Err(Error::InvalidTerm { index: 1, value: *value });
                }
                Ok(())
            }
            BaseSpec::Thm11 => Ok(()),
            BaseSpec::Thm12 { d, c } => {
                let (a, b) = thm12_alphabet(d)?;
                if a < 2 {
                    return Err(Error::constraint(format!("thm12 requires d_i >= 2, found {a}")));
                }
                if a != b {
                    pair_constraints(a, b)?;
                }
                if *c <= 2 * b {
                    return Err(Error::constraint(format!(
                        "thm12 requires c > 2b (c = {c}, b = {b})"
                    )));
                }
                Ok(())
            }
            BaseSpec::Lemma22 { a, b, l } => {
                pair_constraints(*a, *b)?;
                if *l == 0 || l % 2 == 0 {
                    return Err(Error::constraint(format!(
                        "lemma22 requires l to be a positive odd number (l = {l})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The term `b_j` for `j >= 1`. Assumes the spec has been validated.
    pub fn term(&self, j: usize) -> u64 {
        assert!(j >= 1, "b_0 = 1 is fixed");
        match self {
            BaseSpec::Explicit { b } => b[(j - 1) % b.len()],
            BaseSpec::Uniform { value } => *value,
            BaseSpec::Thm11 => j as u64 + 1,
            BaseSpec::Thm12 { d, c } => {
                // block m occupies positions m(m+1)/2 .. m(m+3)/2 (1-indexed), length m + 1
                let mut m = 1usize;
                while m * (m + 3) / 2 < j {
                    m += 1;
                }
                let start = (m - 1) * (m + 2) / 2 + 1;
                let offset = j - start;
                if offset == m {
                    *c
                } else {
                    d[(m - offset - 1) % d.len()]
                }
            }
            BaseSpec::Lemma22 { a, b, l } => {
                if (j as u64).is_multiple_of(l + 1) {
                    *b
                } else {
                    *a
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        let list = |v: &[u64]| {
            v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        };
        match self {
            BaseSpec::Explicit { b } => format!("explicit[{}]", list(b)),
            BaseSpec::Uniform { value } => format!("uniform({value})"),
            BaseSpec::Thm11 => "thm11(b_j=j+1)".to_string(),
            BaseSpec::Thm12 { d, c } => format!("thm12(d=[{}],c={c})", list(d)),
            BaseSpec::Lemma22 { a, b, l } => format!("lemma22(a={a},b={b},l={l})"),
        }
    }
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Smallest and largest letter of a thm12 choice list.
pub(crate) fn thm12_alphabet(d: &[u64]) -> Result<(u64, u64)> {
    let (Some(&a), Some(&b)) = (d.iter().min(), d.iter().max()) else {
        return Err(Error::constraint("thm12 requires a non-empty d list"));
    };
    if d.iter().any(|&x| x != a && x != b) {
        return Err(Error::constraint(
            "thm12 requires every d_i in {a, b}: found more than two distinct values",
        ));
    }
    Ok((a, b))
}

/// `b > a >= 2` and `b >= a + 2`.
pub(crate) fn pair_constraints(a: u64, b: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::constraint(format!("requires a >= 2 (a = {a})")));
    }
    if b < a + 2 {
        return Err(Error::constraint(format!(
            "requires b > a and b >= a + 2 (a = {a}, b = {b})"
        )));
    }
    Ok(())
}

#[derive(Debug)]
pub(crate) struct Terms {
    pub(crate) b: Vec<BigUint>,
    pub(crate) a: Vec<BigUint>,
    /// `free[0][j]`: members of A below `a_j`, i.e. the product of `b_{i+1}` over even `i < j`.
    /// `free[1][j]`: the same for B over odd `i < j`.
    pub(crate) free: [Vec<BigUint>; 2],
}

impl Terms {
    fn new() -> Self {
        Terms {
            b: vec![BigUint::one()],
            a: vec![BigUint::one()],
            free: [vec![BigUint::one()], vec![BigUint::one()]],
        }
    }

    fn push(&mut self, term: u64) {
        let j = self.b.len();
        let b = BigUint::from(term);
        let a = &self.a[j - 1] * &b;
        // b_j enters the free count of whichever side owns digit j - 1
        let side = (j - 1) % 2;
        let fa = if side == 0 { &self.free[0][j - 1] * &b } else { self.free[0][j - 1].clone() };
        let fb = if side == 1 { &self.free[1][j - 1] * &b } else { self.free[1][j - 1].clone() };
        self.b.push(b);
        self.a.push(a);
        self.free[0].push(fa);
        self.free[1].push(fb);
    }
}

/// A base sequence `b_0 = 1, b_1, b_2, ...` with its cumulative products
/// `a_j = b_0 ... b_j`.
///
/// Terms are materialized lazily from the [`BaseSpec`]. Clones share the same
/// cache; extension happens under a write lock and is idempotent, so the
/// sequence can be used from several threads.
#[derive(Debug, Clone)]
pub struct BaseSequence {
    spec: BaseSpec,
    terms: Arc<RwLock<Terms>>,
}

impl BaseSequence {
    /// Validate `spec` and materialize `b_0 .. b_{length-1}`.
    pub fn materialize(spec: BaseSpec, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::IndexTooSmall { what: "materialize", name: "length", min: 1, got: 0 });
        }
        spec.validate()?;
        let base = BaseSequence { spec, terms: Arc::new(RwLock::new(Terms::new())) };
        base.ensure_len(length);
        Ok(base)
    }

    pub fn from_spec(spec: BaseSpec) -> Result<Self> {
        Self::materialize(spec, 2)
    }

    pub fn spec(&self) -> &BaseSpec {
        &self.spec
    }

    pub fn describe(&self) -> String {
        self.spec.describe()
    }

    /// Number of materialized terms (including `b_0`).
    pub fn len(&self) -> usize {
        self.read().b.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn read(&self) -> RwLockReadGuard<'_, Terms> {
        self.terms.read().unwrap_or_else(|e| e.into_inner())
    }

    /// Make sure `b_0 .. b_{len-1}` are materialized.
    pub fn ensure_len(&self, len: usize) {
        if self.read().b.len() >= len {
            return;
        }
        let mut terms = self.terms.write().unwrap_or_else(|e| e.into_inner());
        while terms.b.len() < len {
            let j = terms.b.len();
            terms.push(self.spec.term(j));
        }
    }

    /// Extend until the last materialized `a_j` exceeds `m`.
    pub fn ensure_covers(&self, m: &BigUint) {
        if self.read().a.last().is_some_and(|top| top > m) {
            return;
        }
        let mut terms = self.terms.write().unwrap_or_else(|e| e.into_inner());
        while terms.a.last().is_some_and(|top| top <= m) {
            let j = terms.b.len();
            terms.push(self.spec.term(j));
        }
    }

    /// Run `f` against the materialized terms after ensuring at least `len` of them.
    pub(crate) fn with_terms<R>(&self, len: usize, f: impl FnOnce(&Terms) -> R) -> R {
        self.ensure_len(len);
        f(&self.read())
    }

    pub fn b(&self, j: usize) -> BigUint {
        self.with_terms(j + 1, |t| t.b[j].clone())
    }

    pub fn a(&self, j: usize) -> BigUint {
        self.with_terms(j + 1, |t| t.a[j].clone())
    }

    /// `b_0 .. b_{n-1}`.
    pub fn b_prefix(&self, n: usize) -> Vec<BigUint> {
        self.with_terms(n, |t| t.b[..n].to_vec())
    }

    /// `a_0 .. a_{n-1}`.
    pub fn a_prefix(&self, n: usize) -> Vec<BigUint> {
        self.with_terms(n, |t| t.a[..n].to_vec())
    }

    /// `b_j` as a machine integer; spec terms are `u64` by construction.
    pub fn b_u64(&self, j: usize) -> u64 {
        if j == 0 {
            1
        } else {
            self.spec.term(j)
        }
    }
}

/// Digits `eps_0 .. eps_n` of a mixed-radix representation, in canonical
/// form: empty for zero, otherwise the top digit is non-zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitVector {
    digits: Vec<BigUint>,
}

impl DigitVector {
    /// Build from raw digits, dropping trailing zeros.
    pub fn from_digits(mut digits: Vec<BigUint>) -> Self {
        while digits.last().is_some_and(Zero::is_zero) {
            digits.pop();
        }
        DigitVector { digits }
    }

    pub fn from_u64s(digits: &[u64]) -> Self {
        Self::from_digits(digits.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Index of the most significant non-zero digit.
    pub fn top_index(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    /// Digit `j`, zero beyond the top.
    pub fn digit(&self, j: usize) -> BigUint {
        self.digits.get(j).cloned().unwrap_or_default()
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.digits.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// Greedy division: take the largest `a_n <= m`, peel off `eps_n = m div a_n`,
/// and repeat on the remainder at every lower index.
pub fn encode(m: &BigUint, base: &BaseSequence) -> DigitVector {
    if m.is_zero() {
        return DigitVector::default();
    }
    base.ensure_covers(m);
    base.with_terms(0, |t| {
        // a_0 = 1 <= m, so n exists; a_{n+1} > m by ensure_covers
        let n = t.a.partition_point(|a| a <= m) - 1;
        let mut digits = vec![BigUint::zero(); n + 1];
        let mut rest = m.clone();
        for j in (0..=n).rev() {
            let (q, r) = rest.div_rem(&t.a[j]);
            digits[j] = q;
            rest = r;
        }
        debug_assert!(rest.is_zero());
        DigitVector::from_digits(digits)
    })
}

/// `sum_j eps_j * a_j`, rejecting any digit above `b_{j+1} - 1`.
pub fn decode(d: &DigitVector, base: &BaseSequence) -> Result<BigUint> {
    base.with_terms(d.len() + 1, |t| {
        let mut total = BigUint::zero();
        for (j, eps) in d.digits.iter().enumerate() {
            if eps >= &t.b[j + 1] {
                return Err(Error::DigitOutOfRange {
                    index: j,
                    digit: eps.to_string(),
                    max: (&t.b[j + 1] - 1u32).to_string(),
                });
            }
            total += eps * &t.a[j];
        }
        Ok(total)
    })
}

/// Outcome of an exhaustive uniqueness check over `[0, bound]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub base: String,
    pub bound: u64,
    /// Canonical digit vectors generated whose value is `<= bound`.
    pub vectors: u64,
    /// Values decoded from more than one vector.
    pub duplicates: Vec<u64>,
    /// Values in `[0, bound]` never produced.
    pub missing: Vec<u64>,
    pub pass: bool,
}

/// Generate every digit vector (within the digit bounds) whose value is at
/// most `bound`, decode each one, and confirm that `[0, bound]` is hit exactly
/// once per value.
pub fn verify_uniqueness(base: &BaseSequence, bound: u64) -> UniquenessReport {
    let bound_big = BigUint::from(bound);
    base.ensure_covers(&bound_big);
    let (b, a): (Vec<u64>, Vec<u64>) = base.with_terms(0, |t| {
        let top = t.a.partition_point(|x| x <= &bound_big);
        // a_j <= bound < 2^64 for every j < top; b_{j+1} is a spec term
        (
            (1..=top).map(|j| t.b[j].to_u64().expect("spec term")).collect(),
            t.a[..top].iter().map(|x| x.to_u64().expect("a_j <= bound")).collect(),
        )
    });

    let mut hits = vec![0u32; bound as usize + 1];
    let mut vectors = 0u64;
    let mut digits = vec![0u64; a.len()];

    // depth-first from the top digit, pruning partial sums above the bound
    fn walk(
        j: usize,
        partial: u64,
        bound: u64,
        a: &[u64],
        b: &[u64],
        digits: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]),
    ) {
        if j == 0 {
            visit(digits);
            return;
        }
        let idx = j - 1;
        let mut eps = 0u64;
        while eps < b[idx] {
            let value = partial + eps * a[idx];
            if value > bound {
                break;
            }
            digits[idx] = eps;
            walk(idx, value, bound, a, b, digits, visit);
            eps += 1;
        }
        digits[idx] = 0;
    }

    let mut visit = |ds: &[u64]| {
        vectors += 1;
        let value = decode(&DigitVector::from_u64s(ds), base)
            .expect("generated digits respect the bounds")
            .to_u64()
            .expect("value <= bound");
        hits[value as usize] += 1;
    };
    walk(a.len(), 0, bound, &a, &b, &mut digits, &mut visit);

    let duplicates: Vec<u64> =
        (0..=bound).filter(|&v| hits[v as usize] > 1).collect();
    let missing: Vec<u64> = (0..=bound).filter(|&v| hits[v as usize] == 0).collect();
    let pass = duplicates.is_empty() && missing.is_empty();
    UniquenessReport { base: base.describe(), bound, vectors, duplicates, missing, pass }
}
