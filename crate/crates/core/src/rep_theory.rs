//! SU(2) irreducible representations: labels, the Clebsch–Gordan series of
//! a tensor product, and Clebsch–Gordan coefficients.
//!
//! Coefficients follow the Condon–Shortley phase convention: the stretched
//! state `<j1 j1 j2 j2 | j1+j2 j1+j2>` is `+1` and `<j1 j1 j2 (J-j1) | J J>`
//! is positive.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half::{self, ParseHalfError};

/// Largest `2j` accepted by [`clebsch_gordan`].
pub const MAX_TWICE_J: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("EmptyProduct: cannot decompose an empty tensor product")]
    EmptyProduct,
    #[error("InvalidQuery: {0}")]
    InvalidQuery(String),
}

/// Spin-`j` irrep of SU(2), stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrrepLabel {
    pub twice_j: u32,
}

impl IrrepLabel {
    pub const fn new(twice_j: u32) -> Self {
        Self { twice_j }
    }

    pub fn dim(self) -> u64 {
        self.twice_j as u64 + 1
    }

    pub fn spin(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// Allowed `2m` values, highest first.
    pub fn weights(self) -> impl Iterator<Item = i32> {
        let tj = self.twice_j as i32;
        (0..=tj).map(move |k| tj - 2 * k)
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&half::format_twice(self.twice_j as i64))
    }
}

impl FromStr for IrrepLabel {
    type Err = ParseHalfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        half::parse_twice_unsigned(s).map(IrrepLabel::new)
    }
}

impl Serialize for IrrepLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IrrepLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Direct sum of irreps with exact multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IrrepSum {
    entries: BTreeMap<IrrepLabel, u64>,
}

impl IrrepSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(label: IrrepLabel) -> Self {
        let mut sum = Self::new();
        sum.add(label, 1);
        sum
    }

    /// Adds `mult` copies of `label`; zero multiplicities are ignored.
    pub fn add(&mut self, label: IrrepLabel, mult: u64) {
        if mult > 0 {
            *self.entries.entry(label).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, label: IrrepLabel) -> u64 {
        self.entries.get(&label).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> u64 {
        self.entries.iter().map(|(l, m)| l.dim() * m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending `j`.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (IrrepLabel, u64)> + '_ {
        self.entries.iter().map(|(l, m)| (*l, *m))
    }
}

impl FromIterator<(IrrepLabel, u64)> for IrrepSum {
    fn from_iter<I: IntoIterator<Item = (IrrepLabel, u64)>>(iter: I) -> Self {
        let mut sum = Self::new();
        for (l, m) in iter {
            sum.add(l, m);
        }
        sum
    }
}

impl fmt::Display for IrrepSum {
    /// One `J=<j> x<mult>` line per irrep, highest `J` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, mult)) in self.iter().rev().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "J={label} x{mult}")?;
        }
        Ok(())
    }
}

/// Clebsch–Gordan series of `j1 ⊗ j2`: every `J` from `|j1-j2|` to `j1+j2`
/// once.
pub fn couple_pair(j1: IrrepLabel, j2: IrrepLabel) -> IrrepSum {
    let lo = j1.twice_j.abs_diff(j2.twice_j);
    let hi = j1.twice_j + j2.twice_j;
    (lo..=hi)
        .step_by(2)
        .map(|tj| (IrrepLabel::new(tj), 1))
        .collect()
}

/// Decomposes `f1 ⊗ f2 ⊗ … ⊗ fn` into irreps by folding [`couple_pair`]
/// from the left.
pub fn decompose_product(factors: &[IrrepLabel]) -> Result<IrrepSum, RepError> {
    let (first, rest) = factors.split_first().ok_or(RepError::EmptyProduct)?;
    let mut acc = IrrepSum::single(*first);
    for factor in rest {
        let mut next = IrrepSum::new();
        for (label, mult) in acc.iter() {
            for (coupled, m) in couple_pair(label, *factor).iter() {
                next.add(coupled, mult * m);
            }
        }
        acc = next;
    }
    debug_assert_eq!(
        acc.total_dim(),
        factors.iter().map(|f| f.dim()).product::<u64>()
    );
    Ok(acc)
}

pub fn contains(sum: &IrrepSum, target: IrrepLabel) -> u64 {
    sum.multiplicity(target)
}

/// `<j1 m1 j2 m2 | J M>` with every entry stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CgQuery {
    pub twice_j1: u32,
    pub twice_m1: i32,
    pub twice_j2: u32,
    pub twice_m2: i32,
    pub twice_j: u32,
    pub twice_m: i32,
}

impl CgQuery {
    pub fn new(j1: u32, m1: i32, j2: u32, m2: i32, j: u32, m: i32) -> Self {
        Self {
            twice_j1: j1,
            twice_m1: m1,
            twice_j2: j2,
            twice_m2: m2,
            twice_j: j,
            twice_m: m,
        }
    }

    pub fn validate(&self) -> Result<(), RepError> {
        for (name, tj, tm) in [
            ("j1", self.twice_j1, self.twice_m1),
            ("j2", self.twice_j2, self.twice_m2),
            ("J", self.twice_j, self.twice_m),
        ] {
            if tj > MAX_TWICE_J {
                return Err(RepError::InvalidQuery(format!(
                    "2{name}={tj} exceeds the supported maximum {MAX_TWICE_J}"
                )));
            }
            if tm.unsigned_abs() > tj {
                return Err(RepError::InvalidQuery(format!(
                    "|m| > {name}: 2m={tm}, 2{name}={tj}"
                )));
            }
            if (tj as i64 - tm as i64) % 2 != 0 {
                return Err(RepError::InvalidQuery(format!(
                    "parity mismatch for {name}: 2m={tm}, 2{name}={tj}"
                )));
            }
        }
        Ok(())
    }

    fn selection_rules_hold(&self) -> bool {
        let (a, b, c) = (self.twice_j1, self.twice_j2, self.twice_j);
        self.twice_m == self.twice_m1 + self.twice_m2
            && c >= a.abs_diff(b)
            && c <= a + b
            && (a + b + c) % 2 == 0
    }
}

fn cg_cache() -> &'static RwLock<HashMap<CgQuery, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CgQuery, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Condon–Shortley Clebsch–Gordan coefficient, memoized.
pub fn clebsch_gordan(q: &CgQuery) -> Result<f64, RepError> {
    q.validate()?;
    if !q.selection_rules_hold() {
        return Ok(0.0);
    }
    if let Some(v) = cg_cache().read().unwrap().get(q) {
        return Ok(*v);
    }
    let v = racah_exact(q);
    cg_cache().write().unwrap().insert(*q, v);
    Ok(v)
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Racah's closed-form sum evaluated in exact rationals. The square of the
/// coefficient is formed exactly and the square root taken once in `f64`.
fn racah_exact(q: &CgQuery) -> f64 {
    // all of these are integers once the selection rules hold
    let h = |twice: i64| twice / 2;
    let (j1, j2, j) = (q.twice_j1 as i64, q.twice_j2 as i64, q.twice_j as i64);
    let (m1, m2, m) = (q.twice_m1 as i64, q.twice_m2 as i64, q.twice_m as i64);

    let num = BigInt::from(j + 1)
        * factorial(h(j + j1 - j2))
        * factorial(h(j - j1 + j2))
        * factorial(h(j1 + j2 - j))
        * factorial(h(j + m))
        * factorial(h(j - m))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2));
    let den = factorial(h(j1 + j2 + j) + 1);
    let prefactor = BigRational::new(num, den);

    let a = [h(j1 + j2 - j), h(j1 - m1), h(j2 + m2)];
    let b = [h(j - j2 + m1), h(j - j1 - m2)];
    let k_min = b.iter().map(|x| (-x).max(0)).max().unwrap();
    let k_max = *a.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let d = factorial(k)
            * factorial(a[0] - k)
            * factorial(a[1] - k)
            * factorial(a[2] - k)
            * factorial(b[0] + k)
            * factorial(b[1] + k);
        let term = BigRational::new(BigInt::one(), d);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let squared = prefactor * &sum * &sum;
    let magnitude = squared.to_f64().expect("finite rational").sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}
