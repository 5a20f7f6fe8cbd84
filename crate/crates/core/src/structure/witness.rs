//! Deterministic witnesses for type extension.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{BaElem, CompleteType, Element, Kind, Structure};
use crate::error::{Error, Result};

type Segment = (BigRational, BigRational);

/// Cuts `[0,1)` at every endpoint of `es`; each elementary segment is tagged
/// with the minterm (bit `i` = membership in `es[i]`) it lies in.
pub(super) fn segments(es: &[&BaElem]) -> Vec<(Segment, u64)> {
    let mut cuts: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()];
    for e in es {
        cuts.extend(e.endpoints().cloned());
    }
    cuts.sort();
    cuts.dedup();
    let two = BigRational::from_integer(BigInt::from(2));
    cuts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            let m = es
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, e)| m | (u64::from(e.contains_point(&mid)) << i));
            ((w[0].clone(), w[1].clone()), m)
        })
        .collect()
}

impl Structure {
    /// Returns `b` with `type_of(ā ⧺ b) = τ`.
    pub fn extend_witness(&self, a: &[Element], t: &CompleteType) -> Result<Element> {
        let n = a.len();
        if t.arity() != n + 1 {
            return Err(Error::Arity(format!("extension type has arity {}, expected {}", t.arity(), n + 1)));
        }
        let prefix: Vec<usize> = (0..n).collect();
        if self.type_of(a)? != self.select(t, &prefix)? {
            return Err(Error::Precondition(format!(
                "tuple type {} does not match the restriction of {}",
                self.render_type(&self.type_of(a)?),
                self.render_type(t)
            )));
        }
        self.extend_unchecked(a, t)
    }

    fn extend_unchecked(&self, a: &[Element], t: &CompleteType) -> Result<Element> {
        let n = a.len();
        Ok(match (&self.kind, t) {
            (Kind::Eq, CompleteType::Eq(v)) => {
                if let Some(i) = (0..n).find(|&i| v[i] == v[n]) {
                    a[i].clone()
                } else {
                    let used: Vec<u64> = a
                        .iter()
                        .map(|e| match e {
                            Element::Nat(x) => *x,
                            _ => unreachable!(),
                        })
                        .collect();
                    Element::Nat((0..).find(|x| !used.contains(x)).expect("some natural is unused"))
                }
            }
            (Kind::Dlo, CompleteType::Dlo(v)) => {
                if let Some(i) = (0..n).find(|&i| v[i] == v[n]) {
                    return Ok(a[i].clone());
                }
                let q = |i: usize| match &a[i] {
                    Element::Rat(q) => q.clone(),
                    _ => unreachable!(),
                };
                let lower = (0..n).filter(|&i| v[i] < v[n]).map(q).max();
                let upper = (0..n).filter(|&i| v[i] > v[n]).map(q).min();
                let one = BigRational::one();
                Element::Rat(match (lower, upper) {
                    (Some(l), Some(u)) => (l + u) / BigRational::from_integer(BigInt::from(2)),
                    (Some(l), None) => l + one,
                    (None, Some(u)) => u - one,
                    (None, None) => BigRational::zero(),
                })
            }
            (Kind::Aba, CompleteType::Aba { bits, .. }) => {
                let es: Vec<&BaElem> = a
                    .iter()
                    .map(|e| match e {
                        Element::Ba(b) => b,
                        _ => unreachable!(),
                    })
                    .collect();
                let mut regions: BTreeMap<u64, Vec<Segment>> = BTreeMap::new();
                for (seg, m) in segments(&es) {
                    regions.entry(m).or_default().push(seg);
                }
                let mut chosen: Vec<Segment> = Vec::new();
                for (m, segs) in regions {
                    let pos = bits >> (m | 1 << n) & 1 == 1;
                    let neg = bits >> m & 1 == 1;
                    match (pos, neg) {
                        (true, false) => chosen.extend(segs),
                        (true, true) => {
                            let region = BaElem::from_intervals(segs)?;
                            chosen.extend(region.left_half_of_first().intervals().iter().cloned());
                        }
                        (false, true) => {}
                        (false, false) => {
                            return Err(Error::Precondition(format!("minterm region {m} cannot be empty")))
                        }
                    }
                }
                Element::Ba(BaElem::from_intervals(chosen)?)
            }
            (Kind::Product(cs), CompleteType::Product(ts)) => Element::Tuple(
                cs.iter()
                    .zip(ts)
                    .enumerate()
                    .map(|(i, (c, t))| c.extend_unchecked(&super::project(a, i), t))
                    .collect::<Result<_>>()?,
            ),
            (Kind::Constants { base, values, .. }, CompleteType::Expanded { base: bt, .. }) => {
                // Move the new coordinate behind the constants.
                let c = values.len();
                let mut order: Vec<usize> = (0..n).collect();
                order.extend(n + 1..n + 1 + c);
                order.push(n);
                let moved = base.select(bt, &order)?;
                let mut full = a.to_vec();
                full.extend(values.iter().cloned());
                base.extend_unchecked(&full, &moved)?
            }
            _ => return Err(Error::Precondition(format!("type does not belong to {self}"))),
        })
    }

    /// Extends `ā` coordinate by coordinate to realize `τ`.
    pub fn extend_witness_tuple(&self, a: &[Element], t: &CompleteType) -> Result<Vec<Element>> {
        self.extend_witness_pinned(a, t, &[])
    }

    /// As [`Structure::extend_witness_tuple`], but coordinates listed in
    /// `pinned` (offset into the new part, value) take the given value
    /// instead of a computed witness. Pinned values must realize the type.
    pub fn extend_witness_pinned(
        &self,
        a: &[Element],
        t: &CompleteType,
        pinned: &[(usize, Element)],
    ) -> Result<Vec<Element>> {
        let n = a.len();
        let k = t.arity();
        if k < n {
            return Err(Error::Arity(format!("type arity {k} below tuple length {n}")));
        }
        let prefix: Vec<usize> = (0..n).collect();
        if self.type_of(a)? != self.select(t, &prefix)? {
            return Err(Error::Precondition(format!(
                "tuple type {} does not match the restriction of {}",
                self.render_type(&self.type_of(a)?),
                self.render_type(t)
            )));
        }
        let mut cur = a.to_vec();
        for i in 0..k - n {
            let idx: Vec<usize> = (0..n + i + 1).collect();
            let ti = self.select(t, &idx)?;
            let b = match pinned.iter().find(|(j, _)| *j == i) {
                Some((_, v)) => {
                    let mut probe = cur.clone();
                    probe.push(v.clone());
                    if self.type_of(&probe)? != ti {
                        return Err(Error::Precondition(format!(
                            "pinned value {v} does not realize coordinate {}",
                            n + i + 1
                        )));
                    }
                    v.clone()
                }
                None => self.extend_unchecked(&cur, &ti)?,
            };
            cur.push(b);
        }
        Ok(cur.split_off(n))
    }
}
