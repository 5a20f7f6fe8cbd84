//! Elements of the countable atomless Boolean algebra, realized as finite
//! unions of half-open intervals of `[0,1)` with dyadic endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sorted, pairwise disjoint, non-adjacent intervals `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaElem {
    ivs: Vec<(BigRational, BigRational)>,
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    // Power of two iff d & (d - 1) == 0.
    let one = BigInt::one();
    (d & &(d - &one)).is_zero()
}

impl BaElem {
    pub fn zero() -> Self {
        BaElem { ivs: Vec::new() }
    }

    pub fn one() -> Self {
        BaElem {
            ivs: vec![(BigRational::zero(), BigRational::one())],
        }
    }

    /// Builds a canonical element from arbitrary (possibly overlapping) intervals.
    pub fn from_intervals(ivs: impl IntoIterator<Item = (BigRational, BigRational)>) -> Result<Self> {
        let mut v: Vec<_> = ivs.into_iter().collect();
        for (lo, hi) in &v {
            if lo < &BigRational::zero() || hi > &BigRational::one() || lo > hi {
                return Err(Error::MalformedElement(format!("interval [{lo},{hi}) not within [0,1)")));
            }
            if !is_dyadic(lo) || !is_dyadic(hi) {
                return Err(Error::MalformedElement(format!("interval [{lo},{hi}) has non-dyadic endpoints")));
            }
        }
        v.retain(|(lo, hi)| lo < hi);
        v.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        Ok(BaElem { ivs: out })
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.ivs
    }

    pub fn is_zero(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn contains_point(&self, p: &BigRational) -> bool {
        // Last interval starting at or before p.
        let idx = self.ivs.partition_point(|(lo, _)| lo <= p);
        idx > 0 && p < &self.ivs[idx - 1].1
    }

    pub(crate) fn endpoints(&self) -> impl Iterator<Item = &BigRational> {
        self.ivs.iter().flat_map(|(a, b)| [a, b])
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cur = BigRational::zero();
        for (lo, hi) in &self.ivs {
            if &cur < lo {
                out.push((cur.clone(), lo.clone()));
            }
            cur = hi.clone();
        }
        if cur < BigRational::one() {
            out.push((cur, BigRational::one()));
        }
        BaElem { ivs: out }
    }

    pub fn join(&self, other: &Self) -> Self {
        Self::from_intervals(self.ivs.iter().chain(other.ivs.iter()).cloned())
            .expect("join of canonical elements is canonical")
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.complement().join(&other.complement()).complement()
    }

    /// Left half of the leftmost interval; zero for the zero element.
    pub fn left_half_of_first(&self) -> Self {
        match self.ivs.first() {
            None => Self::zero(),
            Some((lo, hi)) => {
                let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
                BaElem {
                    ivs: vec![(lo.clone(), mid)],
                }
            }
        }
    }

    /// Parses `0`, `1`, or `a/b:c/d(,a/b:c/d)*`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "0" => return Ok(Self::zero()),
            "1" => return Ok(Self::one()),
            _ => {}
        }
        let mut ivs = Vec::new();
        for part in text.split(',') {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| Error::MalformedElement(format!("expected `lo:hi`, got `{part}`")))?;
            ivs.push((parse_rational(lo)?, parse_rational(hi)?));
        }
        Self::from_intervals(ivs)
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::MalformedElement(format!("bad rational `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for BaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ivs.is_empty() {
            return write!(f, "0");
        }
        if *self == Self::one() {
            return write!(f, "1");
        }
        for (i, (lo, hi)) in self.ivs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", fmt_rational(lo), fmt_rational(hi))?;
        }
        Ok(())
    }
}
