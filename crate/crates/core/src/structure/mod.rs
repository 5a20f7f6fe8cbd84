//! ω-categorical structure backends and their complete-type algebra.

pub mod ba;
mod combinat;
mod iota;
mod witness;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use ba::BaElem;
pub use combinat::{bell, ordered_bell};
pub use iota::TypeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Nat(u64),
    Rat(BigRational),
    Ba(BaElem),
    Tuple(Vec<Element>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Rat(q) => write!(f, "{}", ba::fmt_rational(q)),
            Element::Ba(e) => write!(f, "{e}"),
            Element::Tuple(items) => {
                write!(f, "(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Canonical complete type. Equality types are restricted growth strings,
/// order types are dense rank vectors, Boolean-algebra types are bitmasks
/// over the `2^k` minterms (bit `m` set iff the minterm whose `i`-th literal
/// is positive exactly when bit `i` of `m` is set is nonzero).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompleteType {
    Eq(Vec<u8>),
    Dlo(Vec<u8>),
    Aba { arity: u8, bits: u64 },
    Product(Vec<CompleteType>),
    /// Type over the base structure with `consts` trailing constant coordinates.
    Expanded { consts: u8, base: Box<CompleteType> },
}

impl CompleteType {
    pub fn arity(&self) -> usize {
        match self {
            CompleteType::Eq(v) | CompleteType::Dlo(v) => v.len(),
            CompleteType::Aba { arity, .. } => *arity as usize,
            CompleteType::Product(cs) => cs[0].arity(),
            CompleteType::Expanded { consts, base } => base.arity() - *consts as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Eq,
    Dlo,
    Aba,
    Product(Vec<Structure>),
    Constants {
        base: Box<Structure>,
        names: Vec<String>,
        values: Vec<Element>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Overrides the per-kind default maximum arity of enumerated types.
    pub max_arity: Option<usize>,
    pub max_types: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_arity: None,
            max_types: 1 << 20,
        }
    }
}

pub struct TypeSpace {
    pub types: Vec<CompleteType>,
    index: HashMap<CompleteType, usize>,
}

impl TypeSpace {
    pub fn index_of(&self, t: &CompleteType) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

#[derive(Default)]
struct Cache {
    spaces: HashMap<usize, Arc<TypeSpace>>,
    prefix: HashMap<usize, Arc<Vec<usize>>>,
}

#[derive(Clone)]
pub struct Structure {
    kind: Kind,
    caps: Caps,
    cache: Arc<Mutex<Cache>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.caps == other.caps
    }
}

impl Eq for Structure {}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure({self})")
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Eq => write!(f, "eq"),
            Kind::Dlo => write!(f, "dlo"),
            Kind::Aba => write!(f, "aba"),
            Kind::Product(cs) => {
                write!(f, "product(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Kind::Constants { base, names, values } => {
                write!(f, "{base}[")?;
                for (i, (n, v)) in names.iter().zip(values).enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}={v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl Structure {
    fn new(kind: Kind) -> Self {
        Structure {
            kind,
            caps: Caps::default(),
            cache: Arc::default(),
        }
    }

    pub fn eq() -> Self {
        Self::new(Kind::Eq)
    }

    pub fn dlo() -> Self {
        Self::new(Kind::Dlo)
    }

    pub fn aba() -> Self {
        Self::new(Kind::Aba)
    }

    pub fn product(components: Vec<Structure>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Arity("product needs at least one component".into()));
        }
        Ok(Self::new(Kind::Product(components)))
    }

    /// Expands `self` by named constants. `None` values are uninterpreted and
    /// receive pairwise distinct canonical realizers.
    pub fn with_constants(&self, decls: Vec<(String, Option<Element>)>) -> Result<Self> {
        let (base, mut names, mut values) = match &self.kind {
            Kind::Constants { base, names, values } => ((**base).clone(), names.clone(), values.clone()),
            _ => (self.clone(), Vec::new(), Vec::new()),
        };
        for (n, v) in &decls {
            if names.contains(n) {
                return Err(Error::Precondition(format!("constant `{n}` declared twice")));
            }
            if let Some(v) = v {
                base.check_element(v)?;
            }
            names.push(n.clone());
            values.push(Element::Nat(0));
        }
        let start = values.len() - decls.len();
        let interpreted: Vec<Element> = values[..start]
            .iter()
            .cloned()
            .chain(decls.iter().filter_map(|(_, v)| v.clone()))
            .collect();
        let n_fresh = decls.iter().filter(|(_, v)| v.is_none()).count();
        let mut fresh = base.fresh_elements(&interpreted, n_fresh).into_iter();
        for (i, (_, v)) in decls.into_iter().enumerate() {
            values[start + i] = match v {
                Some(v) => v,
                None => fresh.next().expect("enough fresh elements"),
            };
        }
        let mut s = Self::new(Kind::Constants {
            base: Box::new(base),
            names,
            values,
        });
        s.caps = self.caps;
        Ok(s)
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self.cache = Arc::default();
        self
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn constant_names(&self) -> &[String] {
        match &self.kind {
            Kind::Constants { names, .. } => names,
            _ => &[],
        }
    }

    pub fn constant_value(&self, name: &str) -> Option<&Element> {
        match &self.kind {
            Kind::Constants { names, values, .. } => names.iter().position(|n| n == name).map(|i| &values[i]),
            _ => None,
        }
    }


    pub fn has_order(&self) -> bool {
        match &self.kind {
            Kind::Dlo => true,
            Kind::Eq | Kind::Aba => false,
            Kind::Product(cs) => cs.iter().any(|c| c.has_order()),
            Kind::Constants { base, .. } => base.has_order(),
        }
    }

    pub fn max_arity(&self) -> usize {
        if let Some(m) = self.caps.max_arity {
            return m;
        }
        match &self.kind {
            Kind::Eq | Kind::Dlo => 8,
            Kind::Aba => 4,
            Kind::Product(cs) => cs.iter().map(|c| c.max_arity()).min().unwrap_or(0),
            Kind::Constants { base, names, .. } => base.max_arity().saturating_sub(names.len()),
        }
    }

    /// Upper bound on |T_k| (exact except for constant expansions).
    pub fn type_count_bound(&self, k: usize) -> u128 {
        match &self.kind {
            Kind::Eq => bell(k),
            Kind::Dlo => ordered_bell(k),
            Kind::Aba => {
                if k >= 7 {
                    u128::MAX
                } else {
                    (1u128 << (1u32 << k)) - 1
                }
            }
            Kind::Product(cs) => cs
                .iter()
                .fold(1u128, |acc, c| acc.saturating_mul(c.type_count_bound(k))),
            Kind::Constants { base, names, .. } => base.type_count_bound(k + names.len()),
        }
    }

    fn check_cap(&self, k: usize) -> Result<()> {
        if k > self.max_arity() {
            return Err(Error::ResourceCap(format!(
                "arity {k} exceeds the cap {} for {self}",
                self.max_arity()
            )));
        }
        let bound = self.type_count_bound(k);
        if bound > self.caps.max_types as u128 {
            return Err(Error::ResourceCap(format!(
                "{bound} types of arity {k} exceed the cap {} for {self}",
                self.caps.max_types
            )));
        }
        Ok(())
    }

    /// The cached canonical enumeration of T_k.
    pub fn space(&self, k: usize) -> Result<Arc<TypeSpace>> {
        if let Some(s) = self.cache.lock().unwrap().spaces.get(&k) {
            return Ok(s.clone());
        }
        self.check_cap(k)?;
        let types = self.generate(k)?;
        let index = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let space = Arc::new(TypeSpace { types, index });
        self.cache.lock().unwrap().spaces.insert(k, space.clone());
        Ok(space)
    }

    pub fn enumerate_types(&self, k: usize) -> Result<Vec<CompleteType>> {
        Ok(self.space(k)?.types.clone())
    }

    pub fn type_index(&self, t: &CompleteType) -> Result<usize> {
        self.space(t.arity())?
            .index_of(t)
            .ok_or_else(|| Error::Precondition(format!("`{}` is not a type of {self}", self.render_type(t))))
    }

    /// For each type of arity k+1, the index of its restriction to the first k coordinates.
    pub(crate) fn prefix_map(&self, k: usize) -> Result<Arc<Vec<usize>>> {
        if let Some(m) = self.cache.lock().unwrap().prefix.get(&k) {
            return Ok(m.clone());
        }
        let upper = self.space(k + 1)?;
        let lower = self.space(k)?;
        let idx: Vec<usize> = (0..k).collect();
        let map = upper
            .types
            .iter()
            .map(|t| {
                let r = self.select(t, &idx)?;
                Ok(lower.index_of(&r).expect("restriction is a type"))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = Arc::new(map);
        self.cache.lock().unwrap().prefix.insert(k, map.clone());
        Ok(map)
    }

    fn generate(&self, k: usize) -> Result<Vec<CompleteType>> {
        Ok(match &self.kind {
            Kind::Eq => combinat::restricted_growth_strings(k)
                .into_iter()
                .map(CompleteType::Eq)
                .collect(),
            Kind::Dlo => combinat::weak_orders(k).into_iter().map(CompleteType::Dlo).collect(),
            Kind::Aba => (1..=((1u128 << (1u32 << k)) - 1) as u64)
                .map(|bits| CompleteType::Aba { arity: k as u8, bits })
                .collect(),
            Kind::Product(cs) => {
                let lists = cs.iter().map(|c| c.space(k)).collect::<Result<Vec<_>>>()?;
                let mut out = vec![Vec::new()];
                for l in &lists {
                    let mut next = Vec::with_capacity(out.len() * l.len());
                    for prefix in &out {
                        for t in &l.types {
                            let mut p = prefix.clone();
                            p.push(t.clone());
                            next.push(p);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(CompleteType::Product).collect()
            }
            Kind::Constants { base, values, .. } => {
                let c = values.len();
                let const_type = base.type_of(values)?;
                let const_idx: Vec<usize> = (k..k + c).collect();
                let mut out = Vec::new();
                for t in &base.space(k + c)?.types {
                    if base.select(t, &const_idx)? == const_type {
                        out.push(CompleteType::Expanded {
                            consts: c as u8,
                            base: Box::new(t.clone()),
                        });
                    }
                }
                out
            }
        })
    }

    fn check_element(&self, e: &Element) -> Result<()> {
        let ok = match (&self.kind, e) {
            (Kind::Eq, Element::Nat(_)) | (Kind::Dlo, Element::Rat(_)) | (Kind::Aba, Element::Ba(_)) => true,
            (Kind::Product(cs), Element::Tuple(items)) => {
                if cs.len() != items.len() {
                    false
                } else {
                    for (c, i) in cs.iter().zip(items) {
                        c.check_element(i)?;
                    }
                    true
                }
            }
            (Kind::Constants { base, .. }, e) => return base.check_element(e),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedElement(format!("`{e}` is not an element of {self}")))
        }
    }

    /// The complete type realized by a tuple of elements.
    pub fn type_of(&self, t: &[Element]) -> Result<CompleteType> {
        for e in t {
            self.check_element(e)?;
        }
        Ok(match &self.kind {
            Kind::Eq => CompleteType::Eq(combinat::normalize_rgs(t.iter().map(|e| match e {
                Element::Nat(n) => *n,
                _ => unreachable!(),
            }))),
            Kind::Dlo => {
                let qs: Vec<&BigRational> = t
                    .iter()
                    .map(|e| match e {
                        Element::Rat(q) => q,
                        _ => unreachable!(),
                    })
                    .collect();
                CompleteType::Dlo(combinat::dense_ranks(&qs))
            }
            Kind::Aba => {
                let es: Vec<&BaElem> = t
                    .iter()
                    .map(|e| match e {
                        Element::Ba(b) => b,
                        _ => unreachable!(),
                    })
                    .collect();
                if es.len() > 6 {
                    return Err(Error::ResourceCap("aba types above arity 6".into()));
                }
                let mut bits = 0u64;
                for (_, m) in witness::segments(&es) {
                    bits |= 1 << m;
                }
                CompleteType::Aba {
                    arity: es.len() as u8,
                    bits,
                }
            }
            Kind::Product(cs) => CompleteType::Product(
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| c.type_of(&project(t, i)))
                    .collect::<Result<_>>()?,
            ),
            Kind::Constants { base, values, .. } => {
                let mut full = t.to_vec();
                full.extend(values.iter().cloned());
                CompleteType::Expanded {
                    consts: values.len() as u8,
                    base: Box::new(base.type_of(&full)?),
                }
            }
        })
    }

    fn check_type(&self, t: &CompleteType) -> Result<()> {
        let ok = match (&self.kind, t) {
            (Kind::Eq, CompleteType::Eq(_)) | (Kind::Dlo, CompleteType::Dlo(_)) => true,
            (Kind::Aba, CompleteType::Aba { .. }) => true,
            (Kind::Product(cs), CompleteType::Product(ts)) => cs.len() == ts.len(),
            (Kind::Constants { names, .. }, CompleteType::Expanded { consts, .. }) => names.len() == *consts as usize,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("type does not belong to {self}")))
        }
    }

    /// The type of the sub-tuple picking coordinates `idx` (0-based, in the
    /// given order, no repeats).
    pub fn select(&self, t: &CompleteType, idx: &[usize]) -> Result<CompleteType> {
        self.check_type(t)?;
        let k = t.arity();
        if let Some(&bad) = idx.iter().find(|&&i| i >= k) {
            return Err(Error::Precondition(format!("index {} out of range for arity {k}", bad + 1)));
        }
        Ok(match t {
            CompleteType::Eq(v) => CompleteType::Eq(combinat::normalize_rgs(idx.iter().map(|&i| v[i] as u64))),
            CompleteType::Dlo(v) => {
                let keys: Vec<u8> = idx.iter().map(|&i| v[i]).collect();
                CompleteType::Dlo(combinat::dense_ranks(&keys))
            }
            CompleteType::Aba { bits, .. } => {
                let mut out = 0u64;
                for m in 0..(1u64 << k) {
                    if bits >> m & 1 == 1 {
                        let mut m2 = 0u64;
                        for (j, &i) in idx.iter().enumerate() {
                            m2 |= (m >> i & 1) << j;
                        }
                        out |= 1 << m2;
                    }
                }
                CompleteType::Aba {
                    arity: idx.len() as u8,
                    bits: out,
                }
            }
            CompleteType::Product(ts) => {
                let Kind::Product(cs) = &self.kind else { unreachable!() };
                CompleteType::Product(
                    cs.iter()
                        .zip(ts)
                        .map(|(c, t)| c.select(t, idx))
                        .collect::<Result<_>>()?,
                )
            }
            CompleteType::Expanded { consts, base } => {
                let Kind::Constants { base: bs, .. } = &self.kind else { unreachable!() };
                let mut full = idx.to_vec();
                full.extend(k..k + *consts as usize);
                CompleteType::Expanded {
                    consts: *consts,
                    base: Box::new(bs.select(base, &full)?),
                }
            }
        })
    }

    /// Restriction to an index subset, renumbered in increasing order.
    pub fn restrict(&self, t: &CompleteType, indices: &[usize]) -> Result<CompleteType> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        self.select(t, &idx)
    }

    /// Type of the last `w_y` coordinates of a full-state type, which becomes
    /// the memory type of the next step.
    pub fn memory_type(&self, t: &CompleteType, w_m: usize, w_x: usize, w_y: usize) -> Result<CompleteType> {
        let k = w_m + w_x + w_y;
        if t.arity() != k {
            return Err(Error::Arity(format!("full type has arity {} but widths sum to {k}", t.arity())));
        }
        let idx: Vec<usize> = (w_m + w_x..k).collect();
        self.select(t, &idx)
    }

    /// Canonical text of a type: eq `{1 3|2}`, dlo `1=2<3`, aba minterm bit
    /// string, product `[t1;t2]`. Boolean-algebra strings list minterms
    /// positive-first with `x1` varying fastest: for k=2 the positions are
    /// `x1&x2`, `~x1&x2`, `x1&~x2`, `~x1&~x2`.
    pub fn render_type(&self, t: &CompleteType) -> String {
        match t {
            CompleteType::Eq(v) => {
                let blocks = (0..v.iter().map(|&b| b as usize + 1).max().unwrap_or(0))
                    .map(|b| {
                        (0..v.len())
                            .filter(|&i| v[i] as usize == b)
                            .map(|i| (i + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect::<Vec<_>>();
                format!("{{{}}}", blocks.join("|"))
            }
            CompleteType::Dlo(v) => {
                if v.is_empty() {
                    return "()".into();
                }
                let r = v.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
                (0..r)
                    .map(|b| {
                        (0..v.len())
                            .filter(|&i| v[i] as usize == b)
                            .map(|i| (i + 1).to_string())
                            .collect::<Vec<_>>()
                            .join("=")
                    })
                    .collect::<Vec<_>>()
                    .join("<")
            }
            CompleteType::Aba { arity, bits } => {
                let n = 1u64 << arity;
                (0..n)
                    .map(|p| if bits >> (n - 1 - p) & 1 == 1 { '1' } else { '0' })
                    .collect()
            }
            CompleteType::Product(ts) => {
                let Kind::Product(cs) = &self.kind else {
                    return format!("{t:?}");
                };
                let parts: Vec<String> = cs.iter().zip(ts).map(|(c, t)| c.render_type(t)).collect();
                format!("[{}]", parts.join(";"))
            }
            CompleteType::Expanded { base, .. } => match &self.kind {
                Kind::Constants { base: bs, .. } => bs.render_type(base),
                _ => format!("{t:?}"),
            },
        }
    }

    pub fn parse_type(&self, k: usize, text: &str) -> Result<CompleteType> {
        let text = text.trim();
        self.space(k)?
            .types
            .iter()
            .find(|t| self.render_type(t) == text)
            .cloned()
            .ok_or_else(|| Error::Decode(format!("`{text}` is not a {k}-type of {self}")))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        match &self.kind {
            Kind::Eq => text
                .parse()
                .map(Element::Nat)
                .map_err(|_| Error::MalformedElement(format!("expected a natural number, got `{text}`"))),
            Kind::Dlo => ba::parse_rational(text).map(Element::Rat),
            Kind::Aba => BaElem::parse(text).map(Element::Ba),
            Kind::Product(cs) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::MalformedElement(format!("expected `(e1|e2|...)`, got `{text}`")))?;
                let parts = split_top(inner, '|');
                if parts.len() != cs.len() {
                    return Err(Error::MalformedElement(format!(
                        "expected {} components, got `{text}`",
                        cs.len()
                    )));
                }
                Ok(Element::Tuple(
                    cs.iter().zip(parts).map(|(c, p)| c.parse_element(p)).collect::<Result<_>>()?,
                ))
            }
            Kind::Constants { base, .. } => base.parse_element(text),
        }
    }

    /// Canonical element used when no context constrains a value.
    pub fn seed_element(&self) -> Element {
        match &self.kind {
            Kind::Eq => Element::Nat(0),
            Kind::Dlo => Element::Rat(BigRational::zero()),
            Kind::Aba => Element::Ba(BaElem::one().left_half_of_first()),
            Kind::Product(cs) => Element::Tuple(cs.iter().map(|c| c.seed_element()).collect()),
            Kind::Constants { base, .. } => base.seed_element(),
        }
    }

    fn fresh_elements(&self, avoid: &[Element], n: usize) -> Vec<Element> {
        match &self.kind {
            Kind::Eq => {
                let mut out = Vec::new();
                let mut next = 0u64;
                while out.len() < n {
                    let e = Element::Nat(next);
                    if !avoid.contains(&e) {
                        out.push(e);
                    }
                    next += 1;
                }
                out
            }
            Kind::Dlo => {
                let start = avoid
                    .iter()
                    .filter_map(|e| match e {
                        Element::Rat(q) => Some(q.floor() + BigRational::one()),
                        _ => None,
                    })
                    .max()
                    .unwrap_or_else(BigRational::zero);
                (0..n)
                    .map(|i| Element::Rat(&start + BigRational::from_integer(BigInt::from(i))))
                    .collect()
            }
            Kind::Aba => {
                // Independent family: the i-th member collects the cells of a
                // 2^n-cell grid whose index has bit i set.
                let cells = 1i64 << n;
                (0..n)
                    .map(|i| {
                        let ivs = (0..cells)
                            .filter(|j| j >> i & 1 == 1)
                            .map(|j| (ba::rat(j, cells), ba::rat(j + 1, cells)));
                        Element::Ba(BaElem::from_intervals(ivs).expect("dyadic cells"))
                    })
                    .collect()
            }
            Kind::Product(cs) => {
                let per: Vec<Vec<Element>> = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.fresh_elements(&project(avoid, i), n))
                    .collect();
                (0..n)
                    .map(|j| Element::Tuple(per.iter().map(|p| p[j].clone()).collect()))
                    .collect()
            }
            Kind::Constants { base, .. } => base.fresh_elements(avoid, n),
        }
    }
}

fn project(t: &[Element], i: usize) -> Vec<Element> {
    t.iter()
        .map(|e| match e {
            Element::Tuple(items) => items[i].clone(),
            other => other.clone(),
        })
        .collect()
}

/// Splits on `sep` outside parentheses.
pub(crate) fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

#[cfg(test)]
mod tests;
