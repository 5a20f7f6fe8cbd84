//! First-order data formulas, including relation-variable fixpoint operators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A declared constant symbol.
    Const(String),
    /// Boolean-algebra bottom.
    Zero,
    /// Boolean-algebra top.
    One,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Compl(Box<Term>),
    /// Projection onto a component of a product structure (0-based).
    Proj(Box<Term>, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixOp {
    Pfp,
    Lfp,
    Gfp,
}

impl FixOp {
    pub fn keyword(self) -> &'static str {
        match self {
            FixOp::Pfp => "pfp",
            FixOp::Lfp => "lfp",
            FixOp::Gfp => "gfp",
        }
    }
}

/// `(op_{rel, params} body)(args)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fixpoint {
    pub op: FixOp,
    pub rel: String,
    pub params: Vec<String>,
    pub body: Formula,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Lt(Term, Term),
    /// Application of a fixpoint-bound relation variable.
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Fix(Box<Fixpoint>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Term {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Zero | Term::One => {}
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Compl(a) | Term::Proj(a, _) => a.vars(out),
        }
    }

    pub fn constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Var(_) | Term::Zero | Term::One => {}
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Term::Compl(a) | Term::Proj(a, _) => a.constants(out),
        }
    }

    fn subst(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) | Term::Zero | Term::One => self.clone(),
            Term::Meet(a, b) => Term::Meet(Box::new(a.subst(map)), Box::new(b.subst(map))),
            Term::Join(a, b) => Term::Join(Box::new(a.subst(map)), Box::new(b.subst(map))),
            Term::Compl(a) => Term::Compl(Box::new(a.subst(map))),
            Term::Proj(a, i) => Term::Proj(Box::new(a.subst(map)), *i),
        }
    }
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Lt(a, b)
    }

    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Exact free-variable set; bound occurrences excluded.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|t| t.vars(out)),
            Formula::Not(a) => a.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let mut inner = body.free_vars();
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Fix(fx) => {
                let mut inner = fx.body.free_vars();
                for p in &fx.params {
                    inner.remove(p);
                }
                out.extend(inner);
                fx.args.iter().for_each(|t| t.vars(out));
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|t| t.vars(out)),
            Formula::Not(a) => a.collect_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                out.insert(v.clone());
                body.collect_names(out);
            }
            Formula::Fix(fx) => {
                out.extend(fx.params.iter().cloned());
                fx.body.collect_names(out);
                fx.args.iter().for_each(|t| t.vars(out));
            }
        }
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.constants(&mut out));
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                f(a);
                f(b);
            }
            Formula::Rel(_, args) => args.iter().for_each(f),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Fix(fx) => {
                fx.body.visit_terms(f);
                fx.args.iter().for_each(f);
            }
        }
    }

    pub fn has_fixpoints(&self) -> bool {
        match self {
            Formula::Fix(_) => true,
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Lt(..) | Formula::Rel(..) => false,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.has_fixpoints(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_fixpoints() || b.has_fixpoints()
            }
        }
    }

    /// Relation variables applied anywhere in the formula.
    pub fn relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_relations(&mut out);
        out
    }

    fn collect_relations(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Rel(r, _) => {
                out.insert(r.clone());
            }
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Lt(..) => {}
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.collect_relations(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_relations(out);
                b.collect_relations(out);
            }
            Formula::Fix(fx) => {
                let mut inner = fx.body.relations();
                inner.remove(&fx.rel);
                out.extend(inner);
            }
        }
    }

    /// Maximum nesting of quantifiers (fixpoint parameters count as one level).
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Lt(..) | Formula::Rel(..) => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.quantifier_depth(),
            Formula::Fix(fx) => fx.params.len() + fx.body.quantifier_depth(),
        }
    }

    /// Capture-avoiding simultaneous substitution of terms for free variables.
    pub fn subst_vars(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        let mut range_vars = BTreeSet::new();
        for t in map.values() {
            t.vars(&mut range_vars);
        }
        self.subst_inner(map, &range_vars)
    }

    fn subst_inner(&self, map: &BTreeMap<String, Term>, range_vars: &BTreeSet<String>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(a.subst(map), b.subst(map)),
            Formula::Lt(a, b) => Formula::Lt(a.subst(map), b.subst(map)),
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|t| t.subst(map)).collect()),
            Formula::Not(a) => Formula::not(a.subst_inner(map, range_vars)),
            Formula::And(a, b) => Formula::and(a.subst_inner(map, range_vars), b.subst_inner(map, range_vars)),
            Formula::Or(a, b) => Formula::or(a.subst_inner(map, range_vars), b.subst_inner(map, range_vars)),
            Formula::Implies(a, b) => {
                Formula::implies(a.subst_inner(map, range_vars), b.subst_inner(map, range_vars))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let (v2, body2) = self.rebind(v, body, map, range_vars);
                match self {
                    Formula::Exists(..) => Formula::Exists(v2, Box::new(body2)),
                    _ => Formula::Forall(v2, Box::new(body2)),
                }
            }
            Formula::Fix(fx) => {
                // Parameters are bound in the body; rename any that would capture.
                let mut inner_map = map.clone();
                for p in &fx.params {
                    inner_map.remove(p);
                }
                let mut params = fx.params.clone();
                let mut body = fx.body.clone();
                let mut taken = fx.body.all_names();
                taken.extend(range_vars.iter().cloned());
                taken.extend(map.keys().cloned());
                for p in params.iter_mut() {
                    if range_vars.contains(p) && !inner_map.is_empty() {
                        let fresh = fresh_name(p, &taken);
                        taken.insert(fresh.clone());
                        let ren = BTreeMap::from([(p.clone(), Term::Var(fresh.clone()))]);
                        body = body.subst_vars(&ren);
                        *p = fresh;
                    }
                }
                let mut inner_range = BTreeSet::new();
                for t in inner_map.values() {
                    t.vars(&mut inner_range);
                }
                Formula::Fix(Box::new(Fixpoint {
                    op: fx.op,
                    rel: fx.rel.clone(),
                    params,
                    body: body.subst_inner(&inner_map, &inner_range),
                    args: fx.args.iter().map(|t| t.subst(map)).collect(),
                }))
            }
        }
    }

    fn rebind(
        &self,
        v: &str,
        body: &Formula,
        map: &BTreeMap<String, Term>,
        range_vars: &BTreeSet<String>,
    ) -> (String, Formula) {
        let mut inner_map = map.clone();
        inner_map.remove(v);
        if inner_map.is_empty() {
            return (v.to_string(), body.clone());
        }
        let body_free = body.free_vars();
        let relevant = inner_map.keys().any(|k| body_free.contains(k));
        if relevant && range_vars.contains(v) {
            let mut taken = body.all_names();
            taken.extend(range_vars.iter().cloned());
            taken.extend(map.keys().cloned());
            let fresh = fresh_name(v, &taken);
            let renamed = body.subst_vars(&BTreeMap::from([(v.to_string(), Term::Var(fresh.clone()))]));
            let mut inner_range = BTreeSet::new();
            for t in inner_map.values() {
                t.vars(&mut inner_range);
            }
            (fresh, renamed.subst_inner(&inner_map, &inner_range))
        } else {
            let mut inner_range = BTreeSet::new();
            for t in inner_map.values() {
                t.vars(&mut inner_range);
            }
            (v.to_string(), body.subst_inner(&inner_map, &inner_range))
        }
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded supply of names")
}

/// Replaces every application `rel(t̄)` in `body` by `def[params ↦ t̄]`,
/// renaming binders of `body` that would capture free variables of `def`.
pub fn substitute_relation(body: &Formula, rel: &str, params: &[String], def: &Formula) -> Result<Formula> {
    let mut def_free = def.free_vars();
    for p in params {
        def_free.remove(p);
    }
    subst_rel(body, rel, params, def, &def_free)
}

fn subst_rel(
    f: &Formula,
    rel: &str,
    params: &[String],
    def: &Formula,
    def_free: &BTreeSet<String>,
) -> Result<Formula> {
    let go = |g: &Formula| subst_rel(g, rel, params, def, def_free);
    Ok(match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Lt(..) => f.clone(),
        Formula::Rel(r, args) if r == rel => {
            if args.len() != params.len() {
                return Err(Error::Arity(format!(
                    "relation {rel} has arity {} but is applied to {} terms",
                    params.len(),
                    args.len()
                )));
            }
            let map: BTreeMap<String, Term> = params.iter().cloned().zip(args.iter().cloned()).collect();
            def.subst_vars(&map)
        }
        Formula::Rel(..) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)?),
        Formula::And(a, b) => Formula::and(go(a)?, go(b)?),
        Formula::Or(a, b) => Formula::or(go(a)?, go(b)?),
        Formula::Implies(a, b) => Formula::implies(go(a)?, go(b)?),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let (v, body) = if def_free.contains(v) && body.relations().contains(rel) {
                let mut taken = body.all_names();
                taken.extend(def.all_names());
                taken.extend(params.iter().cloned());
                let fresh = fresh_name(v, &taken);
                let renamed = body.subst_vars(&BTreeMap::from([(v.clone(), Term::Var(fresh.clone()))]));
                (fresh, renamed)
            } else {
                (v.clone(), (**body).clone())
            };
            let inner = go(&body)?;
            match f {
                Formula::Exists(..) => Formula::Exists(v, Box::new(inner)),
                _ => Formula::Forall(v, Box::new(inner)),
            }
        }
        Formula::Fix(fx) if fx.rel == rel => {
            // Shadowed: only the arguments are in scope of the outer relation.
            f.clone()
        }
        Formula::Fix(fx) => {
            let mut params2 = fx.params.clone();
            let mut body = fx.body.clone();
            let mut taken = body.all_names();
            taken.extend(def.all_names());
            for p in params2.iter_mut() {
                if def_free.contains(p) {
                    let fresh = fresh_name(p, &taken);
                    taken.insert(fresh.clone());
                    body = body.subst_vars(&BTreeMap::from([(p.clone(), Term::Var(fresh.clone()))]));
                    *p = fresh;
                }
            }
            Formula::Fix(Box::new(Fixpoint {
                op: fx.op,
                rel: fx.rel.clone(),
                params: params2,
                body: go(&body)?,
                args: fx.args.clone(),
            }))
        }
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Meet(a, b) => write!(f, "({a} & {b})"),
            Term::Join(a, b) => write!(f, "({a} | {b})"),
            Term::Compl(a) => write!(f, "~{a}"),
            Term::Proj(a, i) => write!(f, "{a}.{}", i + 1),
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "TRUE"),
            Formula::False => write!(f, "FALSE"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::Rel(r, args) => {
                write!(f, "{r}(")?;
                write_args(f, args)?;
                write!(f, ")")
            }
            Formula::Not(a) => match **a {
                Formula::Eq(ref x, ref y) => write!(f, "{x} != {y}"),
                _ => write!(f, "!({a})"),
            },
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, b) => write!(f, "(exists {v}. {b})"),
            Formula::Forall(v, b) => write!(f, "(forall {v}. {b})"),
            Formula::Fix(fx) => {
                write!(f, "({} {}({}). {} @ (", fx.op.keyword(), fx.rel, fx.params.join(", "), fx.body)?;
                write_args(f, &fx.args)?;
                write!(f, "))")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        var(n)
    }

    #[test]
    fn free_vars_excludes_bound() {
        let f = Formula::exists("z", Formula::and(Formula::lt(v("x"), v("z")), Formula::lt(v("z"), v("y"))));
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string(), "y".to_string()]));
        assert_eq!(Formula::eq(v("x"), v("x")).free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn free_vars_of_fixpoint() {
        // (lfp R(u). R(u) | u = w)(x): frees are {w} ∪ {x}.
        let fx = Fixpoint {
            op: FixOp::Lfp,
            rel: "R".into(),
            params: vec!["u".into()],
            body: Formula::or(Formula::Rel("R".into(), vec![v("u")]), Formula::eq(v("u"), v("w"))),
            args: vec![v("x")],
        };
        let f = Formula::Fix(Box::new(fx));
        assert_eq!(f.free_vars(), BTreeSet::from(["w".to_string(), "x".to_string()]));
    }

    #[test]
    fn substitute_bottom() {
        let body = Formula::or(Formula::Rel("R".into(), vec![v("x")]), Formula::eq(v("x"), Term::Const("c".into())));
        let out = substitute_relation(&body, "R", &["X1".into()], &Formula::False).unwrap();
        assert_eq!(out, Formula::or(Formula::False, Formula::eq(v("x"), Term::Const("c".into()))));
    }

    #[test]
    fn substitute_under_binder() {
        let body = Formula::exists(
            "y",
            Formula::and(Formula::Rel("R".into(), vec![v("y")]), Formula::lt(v("y"), v("x"))),
        );
        let def = Formula::eq(v("X1"), Term::Const("a".into()));
        let out = substitute_relation(&body, "R", &["X1".into()], &def).unwrap();
        let want = Formula::exists(
            "y",
            Formula::and(Formula::eq(v("y"), Term::Const("a".into())), Formula::lt(v("y"), v("x"))),
        );
        assert_eq!(out, want);
    }

    #[test]
    fn substitute_avoids_capture() {
        // def mentions a free `y`; the body's ∃y must be renamed.
        let body = Formula::exists(
            "y",
            Formula::and(Formula::Rel("R".into(), vec![v("x")]), Formula::lt(v("y"), v("x"))),
        );
        let def = Formula::eq(v("X1"), v("y"));
        let out = substitute_relation(&body, "R", &["X1".into()], &def).unwrap();
        let Formula::Exists(bound, inner) = &out else { panic!("shape") };
        assert_ne!(bound, "y");
        assert!(out.free_vars().contains("y"));
        assert!(!out.free_vars().contains(bound.as_str()));
        assert_eq!(
            **inner,
            Formula::and(Formula::eq(v("x"), v("y")), Formula::lt(v(bound), v("x")))
        );
    }

    #[test]
    fn substitute_arity_mismatch() {
        let body = Formula::Rel("R".into(), vec![v("x"), v("y")]);
        assert!(matches!(
            substitute_relation(&body, "R", &["a".into()], &Formula::True),
            Err(Error::Arity(_))
        ));
    }

    #[test]
    fn subst_vars_renames_inner_binder() {
        // (∃y. x < y)[x ↦ y] must not capture.
        let f = Formula::exists("y", Formula::lt(v("x"), v("y")));
        let g = f.subst_vars(&BTreeMap::from([("x".to_string(), v("y"))]));
        let Formula::Exists(b, inner) = &g else { panic!() };
        assert_ne!(b, "y");
        assert_eq!(**inner, Formula::lt(v("y"), v(b)));
    }
}
