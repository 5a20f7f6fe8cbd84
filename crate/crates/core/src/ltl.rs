//! Temporal formulas (LTL with past operators), generic over the atom type.
//!
//! The same tree is used for data-level specifications (atoms are first-order
//! formulas) and for the propositional specifications handed to the
//! synthesis backend (atoms are proposition names).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl<A> {
    True,
    False,
    Atom(A),
    Not(Box<Ltl<A>>),
    And(Box<Ltl<A>>, Box<Ltl<A>>),
    Or(Box<Ltl<A>>, Box<Ltl<A>>),
    Implies(Box<Ltl<A>>, Box<Ltl<A>>),
    Iff(Box<Ltl<A>>, Box<Ltl<A>>),
    Next(Box<Ltl<A>>),
    Until(Box<Ltl<A>>, Box<Ltl<A>>),
    Yesterday(Box<Ltl<A>>),
    Since(Box<Ltl<A>>, Box<Ltl<A>>),
    Globally(Box<Ltl<A>>),
    Finally(Box<Ltl<A>>),
}

impl<A> Ltl<A> {
    pub fn atom(a: A) -> Self {
        Ltl::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Ltl::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Self) -> Self {
        Ltl::Next(Box::new(f))
    }

    pub fn until(a: Self, b: Self) -> Self {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn yesterday(f: Self) -> Self {
        Ltl::Yesterday(Box::new(f))
    }

    pub fn since(a: Self, b: Self) -> Self {
        Ltl::Since(Box::new(a), Box::new(b))
    }

    pub fn globally(f: Self) -> Self {
        Ltl::Globally(Box::new(f))
    }

    pub fn finally(f: Self) -> Self {
        Ltl::Finally(Box::new(f))
    }

    /// `Y^n TRUE`: true exactly from position `n` on.
    pub fn yesterday_n(n: usize) -> Self {
        (0..n).fold(Ltl::True, |f, _| Ltl::yesterday(f))
    }

    /// Conjunction of all items; `TRUE` when empty.
    pub fn conj(items: impl IntoIterator<Item = Self>) -> Self {
        balanced(items.into_iter().collect(), Ltl::True, &Ltl::and)
    }

    /// Disjunction of all items; `FALSE` when empty.
    pub fn disj(items: impl IntoIterator<Item = Self>) -> Self {
        balanced(items.into_iter().collect(), Ltl::False, &Ltl::or)
    }

    /// Rewrites `G` and `F` into their until-based definitions:
    /// `G p = !(TRUE U !p)` and `F p = TRUE U p`.
    pub fn desugar(self) -> Self {
        match self {
            Ltl::Globally(f) => Ltl::not(Ltl::until(Ltl::True, Ltl::not(f.desugar()))),
            Ltl::Finally(f) => Ltl::until(Ltl::True, f.desugar()),
            other => other.map_children(Ltl::desugar),
        }
    }

    fn map_children(self, f: impl Fn(Self) -> Self) -> Self {
        let b = |x: Box<Self>| Box::new(f(*x));
        match self {
            Ltl::Not(a) => Ltl::Not(b(a)),
            Ltl::And(x, y) => Ltl::And(b(x), b(y)),
            Ltl::Or(x, y) => Ltl::Or(b(x), b(y)),
            Ltl::Implies(x, y) => Ltl::Implies(b(x), b(y)),
            Ltl::Iff(x, y) => Ltl::Iff(b(x), b(y)),
            Ltl::Next(a) => Ltl::Next(b(a)),
            Ltl::Until(x, y) => Ltl::Until(b(x), b(y)),
            Ltl::Yesterday(a) => Ltl::Yesterday(b(a)),
            Ltl::Since(x, y) => Ltl::Since(b(x), b(y)),
            Ltl::Globally(a) => Ltl::Globally(b(a)),
            Ltl::Finally(a) => Ltl::Finally(b(a)),
            leaf => leaf,
        }
    }

    /// Replaces every atom, keeping the temporal skeleton.
    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Ltl<B>) -> Ltl<B> {
        let mut go = |x: &Self| Box::new(x.map_atoms(f));
        match self {
            Ltl::True => Ltl::True,
            Ltl::False => Ltl::False,
            Ltl::Atom(a) => f(a),
            Ltl::Not(a) => Ltl::Not(go(a)),
            Ltl::And(x, y) => {
                let x = go(x);
                Ltl::And(x, go(y))
            }
            Ltl::Or(x, y) => {
                let x = go(x);
                Ltl::Or(x, go(y))
            }
            Ltl::Implies(x, y) => {
                let x = go(x);
                Ltl::Implies(x, go(y))
            }
            Ltl::Iff(x, y) => {
                let x = go(x);
                Ltl::Iff(x, go(y))
            }
            Ltl::Next(a) => Ltl::Next(go(a)),
            Ltl::Until(x, y) => {
                let x = go(x);
                Ltl::Until(x, go(y))
            }
            Ltl::Yesterday(a) => Ltl::Yesterday(go(a)),
            Ltl::Since(x, y) => {
                let x = go(x);
                Ltl::Since(x, go(y))
            }
            Ltl::Globally(a) => Ltl::Globally(go(a)),
            Ltl::Finally(a) => Ltl::Finally(go(a)),
        }
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Ltl::True | Ltl::False => {}
            Ltl::Atom(a) => f(a),
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Yesterday(a) | Ltl::Globally(a) | Ltl::Finally(a) => {
                a.for_each_atom(f)
            }
            Ltl::And(x, y)
            | Ltl::Or(x, y)
            | Ltl::Implies(x, y)
            | Ltl::Iff(x, y)
            | Ltl::Until(x, y)
            | Ltl::Since(x, y) => {
                x.for_each_atom(f);
                y.for_each_atom(f);
            }
        }
    }

    /// First past-time subformula (`Y` or `S`), if any.
    pub fn find_past(&self) -> Option<&Self> {
        match self {
            Ltl::Yesterday(_) | Ltl::Since(..) => Some(self),
            Ltl::True | Ltl::False | Ltl::Atom(_) => None,
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Globally(a) | Ltl::Finally(a) => a.find_past(),
            Ltl::And(x, y) | Ltl::Or(x, y) | Ltl::Implies(x, y) | Ltl::Iff(x, y) | Ltl::Until(x, y) => {
                x.find_past().or_else(|| y.find_past())
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Self)) {
        f(self);
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => {}
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Yesterday(a) | Ltl::Globally(a) | Ltl::Finally(a) => {
                a.visit(f)
            }
            Ltl::And(x, y)
            | Ltl::Or(x, y)
            | Ltl::Implies(x, y)
            | Ltl::Iff(x, y)
            | Ltl::Until(x, y)
            | Ltl::Since(x, y) => {
                x.visit(f);
                y.visit(f);
            }
        }
    }
}

/// Fully parenthesized rendering in the surface temporal grammar. Atoms are
/// printed with their own `Display`.
impl<A: fmt::Display> fmt::Display for Ltl<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "TRUE"),
            Ltl::False => write!(f, "FALSE"),
            Ltl::Atom(a) => write!(f, "{a}"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::And(x, y) => write!(f, "({x} & {y})"),
            Ltl::Or(x, y) => write!(f, "({x} | {y})"),
            Ltl::Implies(x, y) => write!(f, "({x} -> {y})"),
            Ltl::Iff(x, y) => write!(f, "({x} <-> {y})"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Until(x, y) => write!(f, "({x} U {y})"),
            Ltl::Yesterday(a) => write!(f, "Y {a}"),
            Ltl::Since(x, y) => write!(f, "({x} S {y})"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::Finally(a) => write!(f, "F {a}"),
        }
    }
}

/// Folds `items` into a tree of logarithmic depth, keeping their order.
fn balanced<A>(mut items: Vec<Ltl<A>>, empty: Ltl<A>, op: &dyn Fn(Ltl<A>, Ltl<A>) -> Ltl<A>) -> Ltl<A> {
    fn go<A>(mut items: Vec<Ltl<A>>, op: &dyn Fn(Ltl<A>, Ltl<A>) -> Ltl<A>) -> Ltl<A> {
        if items.len() == 1 {
            return items.pop().expect("one item");
        }
        let right = items.split_off(items.len() / 2);
        let left = go(items, op);
        op(left, go(right, op))
    }
    if items.is_empty() {
        return empty;
    }
    go(std::mem::take(&mut items), op)
}

/// Evaluates `f` at position 0 of the ultimately periodic word `u v^ω`,
/// where `prefix` = |u| and `period` = |v| ≥ 1. `atom(a, t)` gives the truth
/// of atom `a` at absolute time `t`; it may be queried for times beyond
/// `prefix + period` because past operators are resolved by unrolling the
/// loop until all subformula values repeat with the period.
pub fn eval_lasso<A>(
    f: &Ltl<A>,
    prefix: usize,
    period: usize,
    mut atom: impl FnMut(&A, usize) -> bool,
) -> bool {
    assert!(period >= 1, "lasso period must be nonempty");
    // Enough copies for every past operator to settle.
    let max_copies = 2 + count_past(f) + 2;
    let mut copies = 2;
    loop {
        let n = prefix + copies * period;
        let loop_start = n - period;
        let vals = eval_positions(f, n, loop_start, &mut atom);
        let settled = copies >= max_copies
            || vals
                .iter()
                .all(|v| (0..period).all(|i| v[loop_start + i] == v[loop_start - period + i]));
        if settled {
            return vals.last().map(|v| v[0]).unwrap_or(true);
        }
        copies += 1;
    }
}

fn count_past<A>(f: &Ltl<A>) -> usize {
    let mut n = 0;
    f.visit(&mut |g| {
        if matches!(g, Ltl::Yesterday(_) | Ltl::Since(..)) {
            n += 1
        }
    });
    n
}

/// Value arrays for every subformula in post-order; the last is `f`.
fn eval_positions<A>(
    f: &Ltl<A>,
    n: usize,
    loop_start: usize,
    atom: &mut impl FnMut(&A, usize) -> bool,
) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = Vec::new();
    eval_node(f, n, loop_start, atom, &mut out);
    out
}

fn eval_node<A>(
    f: &Ltl<A>,
    n: usize,
    loop_start: usize,
    atom: &mut impl FnMut(&A, usize) -> bool,
    out: &mut Vec<Vec<bool>>,
) -> usize {
    let succ = |t: usize| if t + 1 == n { loop_start } else { t + 1 };
    let v: Vec<bool> = match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(a) => (0..n).map(|t| atom(a, t)).collect(),
        Ltl::Not(a) => {
            let i = eval_node(a, n, loop_start, atom, out);
            out[i].iter().map(|b| !b).collect()
        }
        Ltl::And(x, y) | Ltl::Or(x, y) | Ltl::Implies(x, y) | Ltl::Iff(x, y) => {
            let i = eval_node(x, n, loop_start, atom, out);
            let j = eval_node(y, n, loop_start, atom, out);
            (0..n)
                .map(|t| {
                    let (a, b) = (out[i][t], out[j][t]);
                    match f {
                        Ltl::And(..) => a && b,
                        Ltl::Or(..) => a || b,
                        Ltl::Implies(..) => !a || b,
                        _ => a == b,
                    }
                })
                .collect()
        }
        Ltl::Next(a) => {
            let i = eval_node(a, n, loop_start, atom, out);
            (0..n).map(|t| out[i][succ(t)]).collect()
        }
        Ltl::Until(x, y) => {
            let i = eval_node(x, n, loop_start, atom, out);
            let j = eval_node(y, n, loop_start, atom, out);
            let mut v = vec![false; n];
            // Least fixpoint over the folded lasso; two sweeps reach it.
            for _ in 0..2 {
                for t in (0..n).rev() {
                    v[t] = out[j][t] || (out[i][t] && v[succ(t)]);
                }
            }
            v
        }
        Ltl::Yesterday(a) => {
            let i = eval_node(a, n, loop_start, atom, out);
            (0..n).map(|t| t > 0 && out[i][t - 1]).collect()
        }
        Ltl::Since(x, y) => {
            let i = eval_node(x, n, loop_start, atom, out);
            let j = eval_node(y, n, loop_start, atom, out);
            let mut v = vec![false; n];
            for t in 0..n {
                let prev = t > 0 && v[t - 1];
                v[t] = out[j][t] || (out[i][t] && prev);
            }
            v
        }
        Ltl::Globally(a) => {
            let i = eval_node(a, n, loop_start, atom, out);
            let mut v = vec![true; n];
            for _ in 0..2 {
                for t in (0..n).rev() {
                    v[t] = out[i][t] && v[succ(t)];
                }
            }
            v
        }
        Ltl::Finally(a) => {
            let i = eval_node(a, n, loop_start, atom, out);
            let mut v = vec![false; n];
            for _ in 0..2 {
                for t in (0..n).rev() {
                    v[t] = out[i][t] || v[succ(t)];
                }
            }
            v
        }
    };
    out.push(v);
    out.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Ltl<usize> {
        Ltl::atom(0)
    }

    fn eval(f: &Ltl<usize>, word: &[bool], prefix: usize) -> bool {
        let period = word.len() - prefix;
        eval_lasso(f, prefix, period, |_, t| {
            if t < prefix {
                word[t]
            } else {
                word[prefix + (t - prefix) % period]
            }
        })
    }

    #[test]
    fn globally_and_finally() {
        assert!(eval(&Ltl::globally(p()), &[true], 0));
        assert!(!eval(&Ltl::globally(p()), &[true, false], 1));
        assert!(eval(&Ltl::finally(p()), &[false, true], 1));
        assert!(!eval(&Ltl::finally(p()), &[false], 0));
    }

    #[test]
    fn yesterday_true_is_false_only_at_start() {
        let f = Ltl::<usize>::yesterday(Ltl::True);
        assert!(!eval(&f, &[true], 0));
        assert!(eval(&Ltl::next(f.clone()), &[true], 0));
        assert!(eval(&Ltl::globally(Ltl::next(f)), &[true], 0));
    }

    #[test]
    fn since_in_loop() {
        // G (p S !p) on (!p p)^ω: at every p-position the previous !p anchors it.
        let f = Ltl::globally(Ltl::since(p(), Ltl::not(p())));
        assert!(eval(&f, &[false, true], 0));
        // Once `p` anchored at position 0 fails, but here !p never occurs.
        assert!(!eval(&Ltl::since(p(), Ltl::not(p())), &[true], 0));
    }

    #[test]
    fn desugared_matches_native() {
        let f = Ltl::globally(Ltl::finally(p()));
        let d = f.clone().desugar();
        for word in [&[true][..], &[false], &[false, true], &[true, false]] {
            for prefix in 0..word.len() {
                assert_eq!(eval(&f, word, prefix), eval(&d, word, prefix));
            }
        }
    }
}
