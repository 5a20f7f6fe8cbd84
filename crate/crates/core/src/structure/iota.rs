//! Deciding first-order formulas on types: atom evaluation, the type-set
//! encoding ι by structural recursion with projection, and isolating formulas.

use super::{CompleteType, Kind, Structure};
use crate::error::{Error, Result};
use crate::fo::{Formula, Term};

/// A set of complete types of one arity, as a membership vector over the
/// canonical enumeration of that arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeSet {
    arity: usize,
    members: Vec<bool>,
}

impl TypeSet {
    pub fn empty(arity: usize, universe: usize) -> Self {
        TypeSet {
            arity,
            members: vec![false; universe],
        }
    }

    pub fn full(arity: usize, universe: usize) -> Self {
        TypeSet {
            arity,
            members: vec![true; universe],
        }
    }

    pub fn from_indices(arity: usize, universe: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(arity, universe);
        for i in idx {
            s.members[i] = true;
        }
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of member types.
    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.get(idx).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn is_subset(&self, other: &TypeSet) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }
}

#[derive(Debug, Clone)]
enum RTerm {
    Coord(usize),
    Zero,
    One,
    Meet(Box<RTerm>, Box<RTerm>),
    Join(Box<RTerm>, Box<RTerm>),
    Compl(Box<RTerm>),
    Proj(Box<RTerm>, usize),
}

#[derive(Debug, Clone)]
struct RAtom {
    is_eq: bool,
    l: RTerm,
    r: RTerm,
}

fn sig(msg: impl Into<String>) -> Error {
    Error::Signature(msg.into())
}

impl RTerm {
    /// The product component this term lives in, if it projects at all.
    fn component(&self) -> Result<Option<usize>> {
        Ok(match self {
            RTerm::Coord(_) | RTerm::Zero | RTerm::One => None,
            RTerm::Proj(_, c) => Some(*c),
            RTerm::Compl(a) => a.component()?,
            RTerm::Meet(a, b) | RTerm::Join(a, b) => match (a.component()?, b.component()?) {
                (Some(x), Some(y)) if x != y => return Err(sig("term mixes product components")),
                (x, y) => x.or(y),
            },
        })
    }

    fn has_bare_coord(&self) -> bool {
        match self {
            RTerm::Coord(_) => true,
            RTerm::Zero | RTerm::One | RTerm::Proj(..) => false,
            RTerm::Compl(a) => a.has_bare_coord(),
            RTerm::Meet(a, b) | RTerm::Join(a, b) => a.has_bare_coord() || b.has_bare_coord(),
        }
    }

    fn strip_proj(&self) -> Result<RTerm> {
        Ok(match self {
            RTerm::Proj(a, _) => match **a {
                RTerm::Coord(i) => RTerm::Coord(i),
                _ => return Err(sig("projection must apply to a variable or constant")),
            },
            RTerm::Coord(_) => return Err(sig("bare product variable inside a component term")),
            RTerm::Zero => RTerm::Zero,
            RTerm::One => RTerm::One,
            RTerm::Compl(a) => RTerm::Compl(Box::new(a.strip_proj()?)),
            RTerm::Meet(a, b) => RTerm::Meet(Box::new(a.strip_proj()?), Box::new(b.strip_proj()?)),
            RTerm::Join(a, b) => RTerm::Join(Box::new(a.strip_proj()?), Box::new(b.strip_proj()?)),
        })
    }

    fn coord(&self) -> Option<usize> {
        match self {
            RTerm::Coord(i) => Some(*i),
            _ => None,
        }
    }

    /// Value of a Boolean-algebra term on minterm `m`.
    fn ba_eval(&self, m: u64) -> Result<bool> {
        Ok(match self {
            RTerm::Coord(i) => m >> i & 1 == 1,
            RTerm::Zero => false,
            RTerm::One => true,
            RTerm::Meet(a, b) => a.ba_eval(m)? && b.ba_eval(m)?,
            RTerm::Join(a, b) => a.ba_eval(m)? || b.ba_eval(m)?,
            RTerm::Compl(a) => !a.ba_eval(m)?,
            RTerm::Proj(..) => return Err(sig("projection outside a product structure")),
        })
    }
}

impl Structure {
    fn resolve_term(&self, t: &Term, env: &[String]) -> Result<RTerm> {
        let go = |x: &Term| self.resolve_term(x, env).map(Box::new);
        Ok(match t {
            Term::Var(v) => match env.iter().rposition(|e| e == v) {
                Some(i) => RTerm::Coord(i),
                None => {
                    // Constants may be written without declaration marks.
                    match self.constant_names().iter().position(|c| c == v) {
                        Some(c) => RTerm::Coord(env.len() + c),
                        None => {
                            return Err(Error::Undeclared {
                                kind: "variable",
                                name: v.clone(),
                            })
                        }
                    }
                }
            },
            Term::Const(c) => match self.constant_names().iter().position(|n| n == c) {
                Some(i) => RTerm::Coord(env.len() + i),
                None => {
                    return Err(Error::Undeclared {
                        kind: "constant",
                        name: c.clone(),
                    })
                }
            },
            Term::Zero => RTerm::Zero,
            Term::One => RTerm::One,
            Term::Meet(a, b) => RTerm::Meet(go(a)?, go(b)?),
            Term::Join(a, b) => RTerm::Join(go(a)?, go(b)?),
            Term::Compl(a) => RTerm::Compl(go(a)?),
            Term::Proj(a, i) => RTerm::Proj(go(a)?, *i),
        })
    }

    fn resolve_atom(&self, f: &Formula, env: &[String]) -> Result<RAtom> {
        let (is_eq, l, r) = match f {
            Formula::Eq(l, r) => (true, l, r),
            Formula::Lt(l, r) => (false, l, r),
            _ => return Err(Error::Precondition(format!("`{f}` is not an atomic formula"))),
        };
        Ok(RAtom {
            is_eq,
            l: self.resolve_term(l, env)?,
            r: self.resolve_term(r, env)?,
        })
    }

    fn eval_atom(&self, t: &CompleteType, a: &RAtom) -> Result<bool> {
        match (&self.kind, t) {
            (Kind::Eq, CompleteType::Eq(v)) => {
                if !a.is_eq {
                    return Err(sig("`<` on a pure equality structure"));
                }
                match (a.l.coord(), a.r.coord()) {
                    (Some(i), Some(j)) => Ok(v[i] == v[j]),
                    _ => Err(sig("function symbols on a pure equality structure")),
                }
            }
            (Kind::Dlo, CompleteType::Dlo(v)) => match (a.l.coord(), a.r.coord()) {
                (Some(i), Some(j)) => Ok(if a.is_eq { v[i] == v[j] } else { v[i] < v[j] }),
                _ => Err(sig("function symbols on a dense order")),
            },
            (Kind::Aba, CompleteType::Aba { arity, bits }) => {
                if !a.is_eq {
                    return Err(sig("`<` on a Boolean algebra"));
                }
                for m in 0..(1u64 << arity) {
                    if bits >> m & 1 == 1 && a.l.ba_eval(m)? != a.r.ba_eval(m)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Kind::Product(cs), CompleteType::Product(ts)) => {
                let (cl, cr) = (a.l.component()?, a.r.component()?);
                match (cl, cr) {
                    (None, None) => {
                        // Whole-tuple equality between variables.
                        match (a.l.coord(), a.r.coord()) {
                            (Some(_), Some(_)) if a.is_eq => {
                                for (c, t) in cs.iter().zip(ts) {
                                    if !c.eval_atom(t, a)? {
                                        return Ok(false);
                                    }
                                }
                                Ok(true)
                            }
                            _ => Err(sig("product atoms must project onto a component")),
                        }
                    }
                    (Some(x), Some(y)) if x != y => Err(sig("atom compares different product components")),
                    (x, y) => {
                        let c = x.or(y).expect("one side projects");
                        if a.l.has_bare_coord() || a.r.has_bare_coord() {
                            return Err(sig("atom compares a tuple with a component"));
                        }
                        let comp = cs.get(c).ok_or_else(|| sig(format!("no product component {}", c + 1)))?;
                        let stripped = RAtom {
                            is_eq: a.is_eq,
                            l: a.l.strip_proj()?,
                            r: a.r.strip_proj()?,
                        };
                        comp.eval_atom(&ts[c], &stripped)
                    }
                }
            }
            (Kind::Constants { base, .. }, CompleteType::Expanded { base: bt, .. }) => base.eval_atom(bt, a),
            _ => Err(Error::Precondition(format!("type does not belong to {self}"))),
        }
    }

    /// Truth of an atomic formula in every realizer of `t`, reading
    /// `vars[i]` as coordinate `i`.
    pub fn atomic_holds(&self, t: &CompleteType, atom: &Formula, vars: &[String]) -> Result<bool> {
        if vars.len() != t.arity() {
            return Err(Error::Arity(format!("{} variables for a type of arity {}", vars.len(), t.arity())));
        }
        let a = self.resolve_atom(atom, vars)?;
        self.eval_atom(t, &a)
    }

    /// ι(φ): the types of arity `vars.len()` containing φ.
    pub fn iota(&self, phi: &Formula, vars: &[String]) -> Result<TypeSet> {
        if phi.has_fixpoints() {
            return Err(Error::Precondition("eliminate fixpoints before computing type sets".into()));
        }
        for v in phi.free_vars() {
            if !vars.contains(&v) && !self.constant_names().contains(&v) {
                return Err(Error::Undeclared { kind: "variable", name: v });
            }
        }
        let total = vars.len() + phi.quantifier_depth();
        if total > self.max_arity() {
            return Err(Error::ResourceCap(format!(
                "arity {} plus quantifier depth {} exceeds the cap {} for {self}",
                vars.len(),
                phi.quantifier_depth(),
                self.max_arity()
            )));
        }
        let mut env = vars.to_vec();
        let members = self.iota_rec(phi, &mut env)?;
        Ok(TypeSet {
            arity: vars.len(),
            members,
        })
    }

    /// ι over the default variable names `x1..xk`.
    pub fn iota_k(&self, phi: &Formula, k: usize) -> Result<TypeSet> {
        self.iota(phi, &default_vars(k))
    }

    fn iota_rec(&self, f: &Formula, env: &mut Vec<String>) -> Result<Vec<bool>> {
        let k = env.len();
        let space = self.space(k)?;
        let n = space.len();
        Ok(match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Eq(..) | Formula::Lt(..) => {
                let a = self.resolve_atom(f, env)?;
                space.types.iter().map(|t| self.eval_atom(t, &a)).collect::<Result<_>>()?
            }
            Formula::Not(a) => self.iota_rec(a, env)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let x = self.iota_rec(a, env)?;
                let y = self.iota_rec(b, env)?;
                x.into_iter()
                    .zip(y)
                    .map(|(p, q)| match f {
                        Formula::And(..) => p && q,
                        Formula::Or(..) => p || q,
                        _ => !p || q,
                    })
                    .collect()
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                env.push(v.clone());
                let inner = self.iota_rec(body, env);
                env.pop();
                let inner = inner?;
                let pm = self.prefix_map(k)?;
                let mut out = vec![universal; n];
                for (j, &p) in pm.iter().enumerate() {
                    if inner[j] != universal {
                        out[p] = !universal;
                    }
                }
                out
            }
            Formula::Rel(r, _) => {
                return Err(Error::Precondition(format!("free relation variable `{r}`")));
            }
            Formula::Fix(_) => return Err(Error::Precondition("fixpoint operator in ι".into())),
        })
    }

    /// Types in a set, in canonical order.
    pub fn members(&self, s: &TypeSet) -> Result<Vec<CompleteType>> {
        let space = self.space(s.arity())?;
        Ok(s.indices().map(|i| space.types[i].clone()).collect())
    }

    pub fn singleton(&self, t: &CompleteType) -> Result<TypeSet> {
        let space = self.space(t.arity())?;
        let i = self.type_index(t)?;
        Ok(TypeSet::from_indices(t.arity(), space.len(), [i]))
    }

    /// Quantifier-free formula over `x1..xk` whose ι is exactly `{t}`.
    pub fn isolating_formula(&self, t: &CompleteType) -> Formula {
        let terms: Vec<Term> = default_vars(t.arity()).into_iter().map(Term::Var).collect();
        self.isolating_formula_over(t, &terms)
    }

    pub fn isolating_formula_over(&self, t: &CompleteType, terms: &[Term]) -> Formula {
        Formula::conj(self.isolating_literals(t, terms))
    }

    fn isolating_literals(&self, t: &CompleteType, terms: &[Term]) -> Vec<Formula> {
        let mut out = Vec::new();
        match (&self.kind, t) {
            (Kind::Eq, CompleteType::Eq(v)) => {
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        let e = Formula::eq(terms[i].clone(), terms[j].clone());
                        out.push(if v[i] == v[j] { e } else { Formula::not(e) });
                    }
                }
            }
            (Kind::Dlo, CompleteType::Dlo(v)) => {
                let r = v.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
                let blocks: Vec<Vec<usize>> = (0..r)
                    .map(|b| (0..v.len()).filter(|&i| v[i] as usize == b).collect())
                    .collect();
                for (bi, block) in blocks.iter().enumerate() {
                    for w in block.windows(2) {
                        out.push(Formula::eq(terms[w[0]].clone(), terms[w[1]].clone()));
                    }
                    if let Some(next) = blocks.get(bi + 1) {
                        out.push(Formula::lt(terms[block[0]].clone(), terms[next[0]].clone()));
                    }
                }
            }
            (Kind::Aba, CompleteType::Aba { arity, bits }) => {
                let k = *arity as usize;
                if k > 0 {
                    let n = 1u64 << k;
                    for p in 0..n {
                        let m = n - 1 - p;
                        let term = (0..k)
                            .map(|i| {
                                if m >> i & 1 == 1 {
                                    terms[i].clone()
                                } else {
                                    Term::Compl(Box::new(terms[i].clone()))
                                }
                            })
                            .reduce(|a, b| Term::Meet(Box::new(a), Box::new(b)))
                            .expect("k > 0");
                        let e = Formula::eq(term, Term::Zero);
                        out.push(if bits >> m & 1 == 1 { Formula::not(e) } else { e });
                    }
                }
            }
            (Kind::Product(cs), CompleteType::Product(ts)) => {
                for (c, (comp, ct)) in cs.iter().zip(ts).enumerate() {
                    let proj: Vec<Term> = terms.iter().map(|t| Term::Proj(Box::new(t.clone()), c)).collect();
                    out.extend(comp.isolating_literals(ct, &proj));
                }
            }
            (Kind::Constants { base, names, .. }, CompleteType::Expanded { base: bt, .. }) => {
                let mut full = terms.to_vec();
                full.extend(names.iter().map(|n| Term::Const(n.clone())));
                // Literals about the constants alone hold by construction.
                out.extend(
                    base.isolating_literals(bt, &full)
                        .into_iter()
                        .filter(|l| !l.free_vars().is_empty()),
                );
            }
            _ => {}
        }
        out
    }

    /// Disjunction of isolating formulas of the members of `s`.
    pub fn set_formula(&self, s: &TypeSet, terms: &[Term]) -> Result<Formula> {
        if s.is_empty() {
            return Ok(Formula::False);
        }
        if s.len() == s.universe() {
            return Ok(Formula::True);
        }
        Ok(Formula::disj(
            self.members(s)?.iter().map(|t| self.isolating_formula_over(t, terms)),
        ))
    }
}

pub fn default_vars(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}
