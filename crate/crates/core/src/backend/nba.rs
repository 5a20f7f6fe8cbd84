//! Formula to nondeterministic Büchi automaton.
//!
//! A state fixes the values at the previous step of every past subformula
//! operand (deterministic bits) and the values required now of every
//! next-step target (`X a` targets `a`, an until formula targets itself).
//! Transitions carry a BDD guard over the propositions; acceptance is
//! transition-based generalized Büchi with one set per until formula.

use std::collections::{BTreeMap, HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::ltl::Ltl;

use super::bdd::{Bdd, Ref, FALSE, TRUE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub guard: Ref,
    pub to: usize,
    /// Bit j set iff the transition is in acceptance set j.
    pub acc: u64,
}

pub struct Nba {
    pub props: Vec<String>,
    /// BDD variable of `props[0]`; the others follow consecutively.
    pub base: u32,
    pub bdd: Bdd,
    pub labels: Vec<String>,
    pub init: Vec<usize>,
    pub edges: Vec<Vec<Edge>>,
    pub n_acc: usize,
}

/// Bounds on automaton construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NbaCaps {
    pub max_closure: usize,
    pub max_states: usize,
}

impl Default for NbaCaps {
    fn default() -> Self {
        NbaCaps {
            max_closure: 48,
            max_states: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum N {
    True,
    False,
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Next(usize),
    Until(usize, usize),
    Yest(usize),
    Since(usize, usize),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<N>,
    ids: HashMap<N, usize>,
}

impl Arena {
    fn add(&mut self, n: N) -> usize {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        self.nodes.push(n.clone());
        self.ids.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn build(&mut self, f: &Ltl<usize>) -> usize {
        let n = match f {
            Ltl::True => N::True,
            Ltl::False => N::False,
            Ltl::Atom(p) => N::Prop(*p),
            Ltl::Not(a) => N::Not(self.build(a)),
            Ltl::And(a, b) => N::And(self.build(a), self.build(b)),
            Ltl::Or(a, b) => N::Or(self.build(a), self.build(b)),
            Ltl::Implies(a, b) => N::Implies(self.build(a), self.build(b)),
            Ltl::Iff(a, b) => N::Iff(self.build(a), self.build(b)),
            Ltl::Next(a) => N::Next(self.build(a)),
            Ltl::Until(a, b) => N::Until(self.build(a), self.build(b)),
            Ltl::Yesterday(a) => N::Yest(self.build(a)),
            Ltl::Since(a, b) => N::Since(self.build(a), self.build(b)),
            Ltl::Globally(_) | Ltl::Finally(_) => unreachable!("desugared"),
        };
        self.add(n)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    root: bool,
    pv: Vec<bool>,
    req: Vec<Option<bool>>,
}

impl Key {
    fn label(&self) -> String {
        let pv: String = self.pv.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let req: String = self
            .req
            .iter()
            .map(|r| match r {
                None => '-',
                Some(true) => '1',
                Some(false) => '0',
            })
            .collect();
        format!("{}{pv}/{req}", if self.root { "*" } else { "" })
    }
}

struct Closure {
    arena: Arena,
    root: usize,
    /// Node → next-step target index.
    targets: BTreeMap<usize, usize>,
    /// Node whose previous value is tracked → past bit index.
    pasts: BTreeMap<usize, usize>,
    untils: Vec<usize>,
}

impl Closure {
    fn new(f: &Ltl<usize>) -> Closure {
        let mut arena = Arena::default();
        let root = arena.build(f);
        let mut targets = BTreeMap::new();
        let mut pasts = BTreeMap::new();
        let mut untils = Vec::new();
        for (i, n) in arena.nodes.iter().enumerate() {
            match *n {
                N::Next(a) => {
                    let k = targets.len();
                    targets.entry(a).or_insert(k);
                }
                N::Until(..) => {
                    let k = targets.len();
                    targets.entry(i).or_insert(k);
                    untils.push(i);
                }
                N::Yest(a) => {
                    let k = pasts.len();
                    pasts.entry(a).or_insert(k);
                }
                N::Since(..) => {
                    let k = pasts.len();
                    pasts.entry(i).or_insert(k);
                }
                _ => {}
            }
        }
        Closure {
            arena,
            root,
            targets,
            pasts,
            untils,
        }
    }

    fn n_top(&self) -> u32 {
        (self.targets.len() + self.pasts.len() + self.untils.len()) as u32
    }

    fn eval(&self, bdd: &mut Bdd, node: usize, pv: &[bool], base: u32, memo: &mut HashMap<usize, Ref>) -> Ref {
        if let Some(&r) = memo.get(&node) {
            return r;
        }
        let r = match self.arena.nodes[node] {
            N::True => TRUE,
            N::False => FALSE,
            N::Prop(p) => bdd.var(base + p as u32),
            N::Not(a) => {
                let a = self.eval(bdd, a, pv, base, memo);
                bdd.not(a)
            }
            N::And(a, b) | N::Or(a, b) | N::Implies(a, b) | N::Iff(a, b) => {
                let x = self.eval(bdd, a, pv, base, memo);
                let y = self.eval(bdd, b, pv, base, memo);
                match self.arena.nodes[node] {
                    N::And(..) => bdd.and(x, y),
                    N::Or(..) => bdd.or(x, y),
                    N::Implies(..) => bdd.implies(x, y),
                    _ => bdd.iff(x, y),
                }
            }
            N::Next(a) => bdd.var(self.targets[&a] as u32),
            N::Until(a, b) => {
                let x = self.eval(bdd, a, pv, base, memo);
                let y = self.eval(bdd, b, pv, base, memo);
                let nx = bdd.var(self.targets[&node] as u32);
                let keep = bdd.and(x, nx);
                bdd.or(y, keep)
            }
            N::Yest(a) => Bdd::constant(pv[self.pasts[&a]]),
            N::Since(a, b) => {
                let x = self.eval(bdd, a, pv, base, memo);
                let y = self.eval(bdd, b, pv, base, memo);
                let keep = if pv[self.pasts[&node]] { x } else { FALSE };
                bdd.or(y, keep)
            }
        };
        memo.insert(node, r);
        r
    }

    /// Transition relation of one state over (targets', pasts', acc, props).
    fn relation(&self, bdd: &mut Bdd, key: &Key, base: u32) -> Ref {
        let mut memo = HashMap::new();
        let nt = self.targets.len() as u32;
        let np = self.pasts.len() as u32;
        let mut r = TRUE;
        if key.root {
            let f = self.eval(bdd, self.root, &key.pv, base, &mut memo);
            r = bdd.and(r, f);
        }
        for (&node, &i) in &self.targets {
            if let Some(v) = key.req[i] {
                let f = self.eval(bdd, node, &key.pv, base, &mut memo);
                let c = if v { f } else { bdd.not(f) };
                r = bdd.and(r, c);
            }
        }
        for (&node, &j) in &self.pasts {
            let f = self.eval(bdd, node, &key.pv, base, &mut memo);
            let v = bdd.var(nt + j as u32);
            let c = bdd.iff(v, f);
            r = bdd.and(r, c);
        }
        for (k, &u) in self.untils.iter().enumerate() {
            let N::Until(_, b) = self.arena.nodes[u] else { unreachable!() };
            let uval = self.eval(bdd, u, &key.pv, base, &mut memo);
            let bval = self.eval(bdd, b, &key.pv, base, &mut memo);
            let nu = bdd.not(uval);
            let ok = bdd.or(nu, bval);
            let v = bdd.var(nt + np + k as u32);
            let c = bdd.iff(v, ok);
            r = bdd.and(r, c);
        }
        r
    }
}

fn expand(bits: &[Option<bool>]) -> Vec<Vec<bool>> {
    let mut out = vec![Vec::new()];
    for b in bits {
        out = out
            .into_iter()
            .flat_map(|v| {
                let opts: Vec<bool> = match b {
                    Some(x) => vec![*x],
                    None => vec![false, true],
                };
                opts.into_iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

impl Nba {
    /// Automaton for `f` over the given propositions (which must cover the
    /// formula's atoms). Dead states are removed.
    pub fn from_formula(f: &Ltl<String>, props: &[String], caps: NbaCaps) -> Result<Nba> {
        let index: HashMap<&str, usize> = props.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut missing = None;
        let g = f.clone().desugar().map_atoms(&mut |a: &String| match index.get(a.as_str()) {
            Some(&i) => Ltl::Atom(i),
            None => {
                missing.get_or_insert_with(|| a.clone());
                Ltl::False
            }
        });
        if let Some(p) = missing {
            return Err(Error::Undeclared {
                kind: "proposition",
                name: p,
            });
        }
        let cl = Closure::new(&g);
        if cl.untils.len() > 63 || cl.n_top() as usize > caps.max_closure {
            return Err(Error::ResourceCap(format!(
                "temporal closure of size {} exceeds the cap {}",
                cl.n_top(),
                caps.max_closure
            )));
        }
        let base = cl.n_top();
        let nt = cl.targets.len();
        let np = cl.pasts.len();
        let nu = cl.untils.len();
        let mut bdd = Bdd::new();
        let start = Key {
            root: true,
            pv: vec![false; np],
            req: vec![None; nt],
        };
        let mut keys = vec![start.clone()];
        let mut ids: HashMap<Key, usize> = HashMap::from([(start, 0)]);
        let mut edges: Vec<Vec<Edge>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let key = keys[s].clone();
            let rel = cl.relation(&mut bdd, &key, base);
            let mut merged: BTreeMap<(usize, u64), Ref> = BTreeMap::new();
            for (top, guard) in bdd.split_top(rel, base) {
                let req: Vec<Option<bool>> = top[..nt].to_vec();
                for pv in expand(&top[nt..nt + np]) {
                    for acc_bits in expand(&top[nt + np..]) {
                        let acc = acc_bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b as u64) << i);
                        let next = Key {
                            root: false,
                            pv: pv.clone(),
                            req: req.clone(),
                        };
                        let to = match ids.get(&next) {
                            Some(&i) => i,
                            None => {
                                if keys.len() >= caps.max_states {
                                    return Err(Error::ResourceCap(format!(
                                        "automaton exceeds {} states",
                                        caps.max_states
                                    )));
                                }
                                keys.push(next.clone());
                                ids.insert(next, keys.len() - 1);
                                queue.push_back(keys.len() - 1);
                                keys.len() - 1
                            }
                        };
                        let e = merged.entry((to, acc)).or_insert(FALSE);
                        *e = bdd.or(*e, guard);
                    }
                }
            }
            if edges.len() <= s {
                edges.resize_with(s + 1, Vec::new);
            }
            edges[s] = merged
                .into_iter()
                .map(|((to, acc), guard)| Edge { guard, to, acc })
                .collect();
        }
        edges.resize_with(keys.len(), Vec::new);
        let nba = Nba {
            props: props.to_vec(),
            base,
            bdd,
            labels: keys.iter().map(Key::label).collect(),
            init: vec![0],
            edges,
            n_acc: nu,
        };
        Ok(nba.without_trivial_sets().trimmed().quotient())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.init.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        if self.n_acc == 0 {
            0
        } else {
            u64::MAX >> (64 - self.n_acc)
        }
    }

    pub fn prop_var(&self, i: usize) -> u32 {
        self.base + i as u32
    }

    /// Truth of `guard` under a full valuation of the propositions.
    pub fn holds(&self, guard: Ref, letter: &[bool]) -> bool {
        let base = self.base;
        self.bdd.eval(guard, &|v| letter[(v - base) as usize])
    }

    /// A valuation satisfying `guard`, unconstrained propositions false.
    pub fn pick_letter(&self, guard: Ref) -> Option<Vec<bool>> {
        let path = self.bdd.sat_one(guard)?;
        let mut letter = vec![false; self.props.len()];
        for (v, b) in path {
            letter[(v - self.base) as usize] = b;
        }
        Some(letter)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        self.edges
            .iter()
            .map(|es| es.iter().map(|e| (e.to, e.acc)).collect())
            .collect()
    }

    /// Keeps the states from which an accepting cycle is reachable.
    fn trimmed(mut self) -> Nba {
        let adj = self.adjacency();
        let keep = live_nodes(&adj, self.n_acc);
        let mut map = vec![usize::MAX; adj.len()];
        let mut n = 0;
        for (i, k) in keep.iter().enumerate() {
            if *k {
                map[i] = n;
                n += 1;
            }
        }
        let mut edges = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (i, es) in self.edges.into_iter().enumerate() {
            if keep[i] {
                edges.push(
                    es.into_iter()
                        .filter(|e| keep[e.to])
                        .map(|e| Edge { to: map[e.to], ..e })
                        .collect(),
                );
                labels.push(std::mem::take(&mut self.labels[i]));
            }
        }
        self.init = self.init.iter().filter(|&&i| keep[i]).map(|&i| map[i]).collect();
        self.edges = edges;
        self.labels = labels;
        self
    }

    /// Removes acceptance sets that mark every edge.
    fn without_trivial_sets(mut self) -> Nba {
        let all = self.edges.iter().flatten().fold(self.full_mask(), |m, e| m & e.acc);
        if all == 0 {
            return self;
        }
        let keep: Vec<usize> = (0..self.n_acc).filter(|i| all >> i & 1 == 0).collect();
        for e in self.edges.iter_mut().flatten() {
            e.acc = keep.iter().enumerate().fold(0, |m, (j, &i)| m | (e.acc >> i & 1) << j);
        }
        self.n_acc = keep.len();
        self
    }

    /// Merges bisimilar states: equal outgoing guards and marks into equal
    /// classes.
    fn quotient(mut self) -> Nba {
        let n = self.len();
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sigs: HashMap<(usize, Vec<(usize, u64, Ref)>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let mut by: BTreeMap<(usize, u64), Ref> = BTreeMap::new();
                for e in &self.edges[q] {
                    let g = by.entry((class[e.to], e.acc)).or_insert(FALSE);
                    *g = self.bdd.or(*g, e.guard);
                }
                let sig = (class[q], by.into_iter().map(|((c, a), g)| (c, a, g)).collect());
                let k = sigs.len();
                next[q] = *sigs.entry(sig).or_insert(k);
            }
            let stable = sigs.len() == count;
            count = sigs.len();
            class = next;
            if stable {
                break;
            }
        }
        if count == n {
            return self;
        }
        let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); count];
        let mut labels = vec![String::new(); count];
        let mut done = vec![false; count];
        for q in 0..n {
            let c = class[q];
            if done[c] {
                continue;
            }
            done[c] = true;
            labels[c] = std::mem::take(&mut self.labels[q]);
            let mut by: BTreeMap<(usize, u64), Ref> = BTreeMap::new();
            for e in &self.edges[q] {
                let g = by.entry((class[e.to], e.acc)).or_insert(FALSE);
                *g = self.bdd.or(*g, e.guard);
            }
            edges[c] = by.into_iter().map(|((to, acc), guard)| Edge { guard, to, acc }).collect();
        }
        let mut init: Vec<usize> = self.init.iter().map(|&q| class[q]).collect();
        init.sort_unstable();
        init.dedup();
        self.init = init;
        self.edges = edges;
        self.labels = labels;
        self
    }

    /// Equivalent automaton with at most one acceptance set.
    pub fn degeneralize(self) -> Nba {
        if self.n_acc <= 1 {
            return self;
        }
        let n = self.n_acc;
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut keys: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        for &i in &self.init {
            ids.insert((i, 0), keys.len());
            keys.push((i, 0));
            queue.push_back(keys.len() - 1);
        }
        let init: Vec<usize> = (0..keys.len()).collect();
        let mut edges: Vec<Vec<Edge>> = Vec::new();
        while let Some(s) = queue.pop_front() {
            let (q, level) = keys[s];
            let mut out = Vec::new();
            for e in &self.edges[q] {
                let mut j = level;
                while j < n && e.acc >> j & 1 == 1 {
                    j += 1;
                }
                let (next_level, acc) = if j == n { (0, 1) } else { (j, 0) };
                let key = (e.to, next_level);
                let to = *ids.entry(key).or_insert_with(|| {
                    keys.push(key);
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                });
                out.push(Edge { guard: e.guard, to, acc });
            }
            if edges.len() <= s {
                edges.resize_with(s + 1, Vec::new);
            }
            edges[s] = out;
        }
        edges.resize_with(keys.len(), Vec::new);
        let labels = keys.iter().map(|&(q, l)| format!("{}#{l}", self.labels[q])).collect();
        Nba {
            props: self.props,
            base: self.base,
            bdd: self.bdd,
            labels,
            init,
            edges,
            n_acc: 1,
        }
        .trimmed()
        .quotient()
    }

    /// Whether the automaton accepts `prefix · period^ω`.
    pub fn accepts_lasso(&self, prefix: &[Vec<bool>], period: &[Vec<bool>]) -> bool {
        assert!(!period.is_empty(), "lasso period must be nonempty");
        let word: Vec<&Vec<bool>> = prefix.iter().chain(period.iter()).collect();
        let len = word.len();
        let succ = |p: usize| if p + 1 == len { prefix.len() } else { p + 1 };
        let n = self.len();
        let node = |q: usize, p: usize| q * len + p;
        let mut adj = vec![Vec::new(); n * len];
        for q in 0..n {
            for (p, letter) in word.iter().enumerate() {
                for e in &self.edges[q] {
                    if self.holds(e.guard, letter) {
                        adj[node(q, p)].push((node(e.to, succ(p)), e.acc));
                    }
                }
            }
        }
        let init: Vec<usize> = self.init.iter().map(|&q| node(q, 0)).collect();
        find_lasso(&adj, &init, self.n_acc).is_some()
    }
}

/// A path from an initial node and a cycle, as (node, edge index) steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoPath {
    pub prefix: Vec<(usize, usize)>,
    pub cycle: Vec<(usize, usize)>,
}

fn full(n_acc: usize) -> u64 {
    if n_acc == 0 {
        0
    } else {
        u64::MAX >> (64 - n_acc)
    }
}

/// Per SCC: whether it has an internal edge whose acceptance marks cover
/// every set.
fn accepting_sccs(adj: &[Vec<(usize, u64)>], n_acc: usize, nodes: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>, Vec<bool>) {
    let mut g: DiGraph<usize, ()> = DiGraph::new();
    let mut local = vec![usize::MAX; adj.len()];
    for &v in nodes {
        local[v] = g.add_node(v).index();
    }
    for &v in nodes {
        for &(w, _) in &adj[v] {
            if local[w] != usize::MAX {
                g.add_edge(NodeIndex::new(local[v]), NodeIndex::new(local[w]), ());
            }
        }
    }
    let sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|i| g[i]).collect())
        .collect();
    let mut comp = vec![usize::MAX; adj.len()];
    for (c, members) in sccs.iter().enumerate() {
        for &v in members {
            comp[v] = c;
        }
    }
    let good = sccs
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let mut any = false;
            let mut mask = 0u64;
            for &v in members {
                for &(w, m) in &adj[v] {
                    if comp[w] == c {
                        any = true;
                        mask |= m;
                    }
                }
            }
            any && mask & full(n_acc) == full(n_acc)
        })
        .collect();
    (comp, sccs, good)
}

/// Nodes from which an accepting cycle is reachable.
pub fn live_nodes(adj: &[Vec<(usize, u64)>], n_acc: usize) -> Vec<bool> {
    let all: Vec<usize> = (0..adj.len()).collect();
    let (_, sccs, good) = accepting_sccs(adj, n_acc, &all);
    let mut live = vec![false; adj.len()];
    let mut rev = vec![Vec::new(); adj.len()];
    for (v, es) in adj.iter().enumerate() {
        for &(w, _) in es {
            rev[w].push(v);
        }
    }
    let mut stack: Vec<usize> = Vec::new();
    for (c, members) in sccs.iter().enumerate() {
        if good[c] {
            stack.extend(members.iter().copied());
        }
    }
    while let Some(v) = stack.pop() {
        if live[v] {
            continue;
        }
        live[v] = true;
        stack.extend(rev[v].iter().copied().filter(|&u| !live[u]));
    }
    live
}

fn bfs_path(
    adj: &[Vec<(usize, u64)>],
    from: &[usize],
    allowed: &dyn Fn(usize) -> bool,
    goal: &dyn Fn(usize, usize) -> bool,
) -> Option<(Vec<(usize, usize)>, usize)> {
    let mut parent: HashMap<usize, Option<(usize, usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in from {
        if parent.insert(s, None).is_none() {
            queue.push_back(s);
        }
    }
    let rebuild = |parent: &HashMap<usize, Option<(usize, usize)>>, mut v: usize| {
        let mut path = Vec::new();
        while let Some(Some((u, e))) = parent.get(&v) {
            path.push((*u, *e));
            v = *u;
        }
        path.reverse();
        path
    };
    while let Some(v) = queue.pop_front() {
        for (i, &(w, _)) in adj[v].iter().enumerate() {
            if goal(v, i) {
                let mut path = rebuild(&parent, v);
                path.push((v, i));
                return Some((path, w));
            }
            if allowed(w) && !parent.contains_key(&w) {
                parent.insert(w, Some((v, i)));
                queue.push_back(w);
            }
        }
    }
    None
}

/// Reachable accepting lasso in an explicit graph with generalized Büchi
/// marks on edges.
pub fn find_lasso(adj: &[Vec<(usize, u64)>], init: &[usize], n_acc: usize) -> Option<LassoPath> {
    // Reachable part in BFS order.
    let mut order = Vec::new();
    let mut seen = vec![false; adj.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in init {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let (comp, _, good) = accepting_sccs(adj, n_acc, &order);
    let start = *order.iter().find(|&&v| good[comp[v]])?;
    let c = comp[start];
    let inside = |v: usize| comp[v] == c;
    let prefix = if init.contains(&start) {
        Vec::new()
    } else {
        bfs_path(adj, init, &|_| true, &|v, i| adj[v][i].0 == start)?.0
    };
    let mut cycle = Vec::new();
    let mut cur = start;
    let sets: Vec<Option<usize>> = if n_acc == 0 { vec![None] } else { (0..n_acc).map(Some).collect() };
    for j in sets {
        let (p, to) = bfs_path(adj, &[cur], &inside, &|v, i| {
            let (w, m) = adj[v][i];
            inside(w) && j.is_none_or(|j| m >> j & 1 == 1)
        })?;
        cycle.extend(p);
        cur = to;
    }
    if cur != start {
        let (p, _) = bfs_path(adj, &[cur], &inside, &|v, i| adj[v][i].0 == start)?;
        cycle.extend(p);
    }
    Some(LassoPath { prefix, cycle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::eval_lasso;
    use crate::parse::parse_prop_ltl;

    fn nba(text: &str, props: &[&str]) -> Nba {
        let props: Vec<String> = props.iter().map(|s| s.to_string()).collect();
        Nba::from_formula(&parse_prop_ltl(text).unwrap(), &props, NbaCaps::default()).unwrap()
    }

    fn word(bits: &[&str]) -> Vec<Vec<bool>> {
        bits.iter().map(|s| s.chars().map(|c| c == '1').collect()).collect()
    }

    #[test]
    fn globally_has_one_state() {
        let a = nba("G p", &["p"]);
        assert_eq!(a.len(), 1);
        assert!(a.accepts_lasso(&[], &word(&["1"])));
        assert!(!a.accepts_lasso(&word(&["1", "0"]), &word(&["1"])));
    }

    #[test]
    fn finally_examples() {
        let a = nba("F p", &["p"]);
        assert!(a.accepts_lasso(&word(&["0"]), &word(&["1"])));
        assert!(!a.accepts_lasso(&[], &word(&["0"])));
    }

    #[test]
    fn yesterday_true() {
        let a = nba("Y TRUE", &["p"]);
        // Y TRUE is false at position 0.
        assert!(!a.accepts_lasso(&[], &word(&["1"])));
        let g = nba("X Y TRUE & !Y TRUE", &["p"]);
        assert!(g.accepts_lasso(&[], &word(&["0"])));
    }

    #[test]
    fn empty_language_has_no_states() {
        let a = nba("p & !p", &["p"]);
        assert!(a.is_empty());
        let b = nba("G F p & F G !p", &["p"]);
        assert!(b.is_empty());
    }

    #[test]
    fn degeneralized_agrees() {
        let f = "G F p & G F q";
        let a = nba(f, &["p", "q"]);
        assert_eq!(a.n_acc, 2);
        let d = nba(f, &["p", "q"]).degeneralize();
        assert_eq!(d.n_acc, 1);
        for (u, v) in [
            (vec![], vec!["10", "01"]),
            (vec!["11"], vec!["10"]),
            (vec![], vec!["11"]),
            (vec!["00"], vec!["00", "01"]),
        ] {
            let (u, v) = (word(&u), word(&v));
            let f = parse_prop_ltl(f).unwrap();
            let expect = eval_lasso(&f, u.len(), v.len(), |a: &String, t| {
                let l = if t < u.len() { &u[t] } else { &v[(t - u.len()) % v.len()] };
                l[if a == "p" { 0 } else { 1 }]
            });
            assert_eq!(a.accepts_lasso(&u, &v), expect);
            assert_eq!(d.accepts_lasso(&u, &v), expect);
        }
    }

    #[test]
    fn lasso_search_covers_all_sets() {
        // 0 -> 1 -> 2 -> 1, marks 1 on 1->2 and 2 on 2->1.
        let adj = vec![vec![(1, 0)], vec![(2, 1)], vec![(1, 2)]];
        let l = find_lasso(&adj, &[0], 2).unwrap();
        assert_eq!(l.prefix, vec![(0, 0)]);
        assert_eq!(l.cycle, vec![(1, 0), (2, 0)]);
        let dead = vec![vec![(1, 1)], vec![]];
        assert!(find_lasso(&dead, &[0], 1).is_none());
    }

    fn arb_formula() -> impl proptest::strategy::Strategy<Value = Ltl<String>> {
        use proptest::prelude::*;
        let leaf = prop_oneof![
            Just(Ltl::True),
            Just(Ltl::False),
            prop::sample::select(vec!["a", "b", "c"]).prop_map(|p| Ltl::atom(p.to_string())),
        ];
        leaf.prop_recursive(3, 8, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Ltl::not),
                inner.clone().prop_map(Ltl::next),
                inner.clone().prop_map(Ltl::yesterday),
                inner.clone().prop_map(Ltl::globally),
                inner.clone().prop_map(Ltl::finally),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Ltl::and(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Ltl::or(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Ltl::iff(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Ltl::until(x, y)),
                (inner.clone(), inner).prop_map(|(x, y)| Ltl::since(x, y)),
            ]
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]
        #[test]
        fn automaton_matches_evaluator(
            f in arb_formula(),
            u in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 3), 0..3),
            v in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 3), 1..4),
        ) {
            let props: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let expect = eval_lasso(&f, u.len(), v.len(), |a: &String, t| {
                let l = if t < u.len() { &u[t] } else { &v[(t - u.len()) % v.len()] };
                l[props.iter().position(|p| p == a).unwrap()]
            });
            let a = Nba::from_formula(&f, &props, NbaCaps::default()).unwrap();
            proptest::prop_assert_eq!(a.accepts_lasso(&u, &v), expect, "{}", f);
            let d = a.degeneralize();
            proptest::prop_assert_eq!(d.accepts_lasso(&u, &v), expect, "{}", f);
        }
    }
}
