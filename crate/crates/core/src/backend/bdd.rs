//! Reduced ordered BDDs with a shared node table. Smaller variable indices
//! sit closer to the root.

use std::collections::HashMap;

pub type Ref = u32;

pub const FALSE: Ref = 0;
pub const TRUE: Ref = 1;

const LEAF: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    var: u32,
    lo: Ref,
    hi: Ref,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
}

pub struct Bdd {
    nodes: Vec<Node>,
    unique: HashMap<(u32, Ref, Ref), Ref>,
    cache: HashMap<(Op, Ref, Ref), Ref>,
    not_cache: HashMap<Ref, Ref>,
}

impl Default for Bdd {
    fn default() -> Self {
        Self::new()
    }
}

impl Bdd {
    pub fn new() -> Self {
        let leaf = Node {
            var: LEAF,
            lo: 0,
            hi: 0,
        };
        Bdd {
            nodes: vec![leaf, leaf],
            unique: HashMap::new(),
            cache: HashMap::new(),
            not_cache: HashMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn mk(&mut self, var: u32, lo: Ref, hi: Ref) -> Ref {
        if lo == hi {
            return lo;
        }
        if let Some(&r) = self.unique.get(&(var, lo, hi)) {
            return r;
        }
        let r = self.nodes.len() as Ref;
        self.nodes.push(Node { var, lo, hi });
        self.unique.insert((var, lo, hi), r);
        r
    }

    pub fn var(&mut self, v: u32) -> Ref {
        self.mk(v, FALSE, TRUE)
    }

    pub fn lit(&mut self, v: u32, positive: bool) -> Ref {
        if positive {
            self.mk(v, FALSE, TRUE)
        } else {
            self.mk(v, TRUE, FALSE)
        }
    }

    pub fn constant(b: bool) -> Ref {
        if b {
            TRUE
        } else {
            FALSE
        }
    }

    /// Top variable of `f`, `None` for constants.
    pub fn top(&self, f: Ref) -> Option<u32> {
        let v = self.nodes[f as usize].var;
        (v != LEAF).then_some(v)
    }

    pub fn low(&self, f: Ref) -> Ref {
        self.nodes[f as usize].lo
    }

    pub fn high(&self, f: Ref) -> Ref {
        self.nodes[f as usize].hi
    }

    pub fn not(&mut self, f: Ref) -> Ref {
        match f {
            FALSE => TRUE,
            TRUE => FALSE,
            _ => {
                if let Some(&r) = self.not_cache.get(&f) {
                    return r;
                }
                let n = self.nodes[f as usize];
                let lo = self.not(n.lo);
                let hi = self.not(n.hi);
                let r = self.mk(n.var, lo, hi);
                self.not_cache.insert(f, r);
                r
            }
        }
    }

    fn apply(&mut self, op: Op, a: Ref, b: Ref) -> Ref {
        match op {
            Op::And => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE {
                    return b;
                }
                if b == TRUE || a == b {
                    return a;
                }
            }
            Op::Or => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE || a == b {
                    return a;
                }
            }
            Op::Xor => {
                if a == b {
                    return FALSE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
                if a == TRUE {
                    return self.not(b);
                }
                if b == TRUE {
                    return self.not(a);
                }
            }
        }
        let key = if a <= b { (op, a, b) } else { (op, b, a) };
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let v = na.var.min(nb.var);
        let (a0, a1) = if na.var == v { (na.lo, na.hi) } else { (a, a) };
        let (b0, b1) = if nb.var == v { (nb.lo, nb.hi) } else { (b, b) };
        let lo = self.apply(op, a0, b0);
        let hi = self.apply(op, a1, b1);
        let r = self.mk(v, lo, hi);
        self.cache.insert(key, r);
        r
    }

    pub fn and(&mut self, a: Ref, b: Ref) -> Ref {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: Ref, b: Ref) -> Ref {
        self.apply(Op::Or, a, b)
    }

    pub fn xor(&mut self, a: Ref, b: Ref) -> Ref {
        self.apply(Op::Xor, a, b)
    }

    pub fn iff(&mut self, a: Ref, b: Ref) -> Ref {
        let x = self.xor(a, b);
        self.not(x)
    }

    pub fn implies(&mut self, a: Ref, b: Ref) -> Ref {
        let na = self.not(a);
        self.or(na, b)
    }

    /// Cofactor by a partial assignment.
    pub fn restrict(&mut self, f: Ref, assign: &dyn Fn(u32) -> Option<bool>) -> Ref {
        let mut memo = HashMap::new();
        self.restrict_rec(f, assign, &mut memo)
    }

    fn restrict_rec(&mut self, f: Ref, assign: &dyn Fn(u32) -> Option<bool>, memo: &mut HashMap<Ref, Ref>) -> Ref {
        if f <= TRUE {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let r = match assign(n.var) {
            Some(false) => self.restrict_rec(n.lo, assign, memo),
            Some(true) => self.restrict_rec(n.hi, assign, memo),
            None => {
                let lo = self.restrict_rec(n.lo, assign, memo);
                let hi = self.restrict_rec(n.hi, assign, memo);
                self.mk(n.var, lo, hi)
            }
        };
        memo.insert(f, r);
        r
    }

    /// Existential quantification of the variables selected by `pick`.
    pub fn exists(&mut self, f: Ref, pick: &dyn Fn(u32) -> bool) -> Ref {
        let mut memo = HashMap::new();
        self.exists_rec(f, pick, &mut memo)
    }

    fn exists_rec(&mut self, f: Ref, pick: &dyn Fn(u32) -> bool, memo: &mut HashMap<Ref, Ref>) -> Ref {
        if f <= TRUE {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let lo = self.exists_rec(n.lo, pick, memo);
        let hi = self.exists_rec(n.hi, pick, memo);
        let r = if pick(n.var) { self.or(lo, hi) } else { self.mk(n.var, lo, hi) };
        memo.insert(f, r);
        r
    }

    pub fn eval(&self, f: Ref, value: &dyn Fn(u32) -> bool) -> bool {
        let mut f = f;
        while f > TRUE {
            let n = self.nodes[f as usize];
            f = if value(n.var) { n.hi } else { n.lo };
        }
        f == TRUE
    }

    /// A satisfying path preferring the low branch; unlisted variables are free.
    pub fn sat_one(&self, f: Ref) -> Option<Vec<(u32, bool)>> {
        if f == FALSE {
            return None;
        }
        let mut path = Vec::new();
        let mut f = f;
        while f > TRUE {
            let n = self.nodes[f as usize];
            if n.lo != FALSE {
                path.push((n.var, false));
                f = n.lo;
            } else {
                path.push((n.var, true));
                f = n.hi;
            }
        }
        Some(path)
    }

    /// Disjoint cubes covering `f`, low branches first.
    pub fn cubes(&self, f: Ref) -> Vec<Vec<(u32, bool)>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.cubes_rec(f, &mut path, &mut out);
        out
    }

    fn cubes_rec(&self, f: Ref, path: &mut Vec<(u32, bool)>, out: &mut Vec<Vec<(u32, bool)>>) {
        if f == FALSE {
            return;
        }
        if f == TRUE {
            out.push(path.clone());
            return;
        }
        let n = self.nodes[f as usize];
        path.push((n.var, false));
        self.cubes_rec(n.lo, path, out);
        path.pop();
        path.push((n.var, true));
        self.cubes_rec(n.hi, path, out);
        path.pop();
    }

    pub fn cube(&mut self, lits: &[(u32, bool)]) -> Ref {
        let mut sorted = lits.to_vec();
        sorted.sort_unstable_by_key(|a| std::cmp::Reverse(a.0));
        let mut r = TRUE;
        for (v, b) in sorted {
            r = if b { self.mk(v, FALSE, r) } else { self.mk(v, r, FALSE) };
        }
        r
    }

    /// Splits `f` on the variables `< n_top`: every satisfiable assignment
    /// path of those variables with its residual function over the rest.
    /// A top variable the path does not test is reported as `None`.
    pub fn split_top(&self, f: Ref, n_top: u32) -> Vec<(Vec<Option<bool>>, Ref)> {
        let mut out = Vec::new();
        let mut cur = vec![None; n_top as usize];
        self.split_rec(f, n_top, &mut cur, &mut out);
        out
    }

    fn split_rec(&self, f: Ref, n_top: u32, cur: &mut Vec<Option<bool>>, out: &mut Vec<(Vec<Option<bool>>, Ref)>) {
        if f == FALSE {
            return;
        }
        let n = self.nodes[f as usize];
        if f == TRUE || n.var >= n_top {
            out.push((cur.clone(), f));
            return;
        }
        let v = n.var as usize;
        cur[v] = Some(false);
        self.split_rec(n.lo, n_top, cur, out);
        cur[v] = Some(true);
        self.split_rec(n.hi, n_top, cur, out);
        cur[v] = None;
    }

    pub fn support(&self, f: Ref) -> Vec<u32> {
        let mut seen = std::collections::HashSet::new();
        let mut vars = std::collections::BTreeSet::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if g <= TRUE || !seen.insert(g) {
                continue;
            }
            let n = self.nodes[g as usize];
            vars.insert(n.var);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        vars.into_iter().collect()
    }

    /// Drops the operation caches; node references stay valid.
    pub fn clear_caches(&mut self) {
        self.cache.clear();
        self.not_cache.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Debug, Clone)]
    enum E {
        V(u32),
        Not(Box<E>),
        And(Box<E>, Box<E>),
        Or(Box<E>, Box<E>),
        Xor(Box<E>, Box<E>),
    }

    fn expr() -> impl Strategy<Value = E> {
        let leaf = (0u32..4).prop_map(E::V);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| E::Not(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| E::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| E::Or(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| E::Xor(Box::new(a), Box::new(b))),
            ]
        })
    }

    fn truth(e: &E, m: u32) -> bool {
        match e {
            E::V(v) => m >> v & 1 == 1,
            E::Not(a) => !truth(a, m),
            E::And(a, b) => truth(a, m) && truth(b, m),
            E::Or(a, b) => truth(a, m) || truth(b, m),
            E::Xor(a, b) => truth(a, m) != truth(b, m),
        }
    }

    fn build(b: &mut Bdd, e: &E) -> Ref {
        match e {
            E::V(v) => b.var(*v),
            E::Not(a) => {
                let a = build(b, a);
                b.not(a)
            }
            E::And(x, y) => {
                let (x, y) = (build(b, x), build(b, y));
                b.and(x, y)
            }
            E::Or(x, y) => {
                let (x, y) = (build(b, x), build(b, y));
                b.or(x, y)
            }
            E::Xor(x, y) => {
                let (x, y) = (build(b, x), build(b, y));
                b.xor(x, y)
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_truth_tables(e in expr()) {
            let mut b = Bdd::new();
            let f = build(&mut b, &e);
            for m in 0..16u32 {
                prop_assert_eq!(b.eval(f, &|v| m >> v & 1 == 1), truth(&e, m));
            }
            // Canonicity: a function with the same table gets the same node.
            let tautology = (0..16u32).all(|m| truth(&e, m));
            prop_assert_eq!(f == TRUE, tautology);
            let q = b.exists(f, &|v| v == 0);
            for m in 0..16u32 {
                let expect = truth(&e, m & !1) || truth(&e, m | 1);
                prop_assert_eq!(b.eval(q, &|v| m >> v & 1 == 1), expect);
            }
            if let Some(path) = b.sat_one(f) {
                let m = path.iter().filter(|(_, b)| *b).fold(0u32, |acc, (v, _)| acc | 1 << v);
                prop_assert!(truth(&e, m));
            } else {
                prop_assert!((0..16u32).all(|m| !truth(&e, m)));
            }
        }
    }

    #[test]
    fn split_reports_untested_variables() {
        let mut b = Bdd::new();
        let x0 = b.var(0);
        let x2 = b.var(2);
        let f = b.and(x0, x2);
        let parts = b.split_top(f, 2);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, vec![Some(true), None]);
        assert_eq!(parts[0].1, x2);
    }

    #[test]
    fn cubes_cover_function() {
        let mut b = Bdd::new();
        let x0 = b.var(0);
        let x1 = b.var(1);
        let f = b.or(x0, x1);
        let cubes = b.cubes(f);
        assert_eq!(cubes, vec![vec![(0, false), (1, true)], vec![(0, true)]]);
        let c = b.cube(&[(1, true), (0, false)]);
        let expect = {
            let n0 = b.not(x0);
            b.and(n0, x1)
        };
        assert_eq!(c, expect);
    }
}
