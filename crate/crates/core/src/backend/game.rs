//! Bounded realizability by counting safety games.
//!
//! A universal co-Büchi reading of an automaton for the opponent's goal is
//! turned into a safety game by counting, per automaton state, accepting
//! visits along runs; a count above the bound loses. The system plays on the
//! automaton of `¬f` and the environment on the automaton of `f`, with bounds
//! raised in turn until one side wins or the state cap is reached.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::ltl::Ltl;

use super::bdd::{Ref, FALSE, TRUE};
use super::machine::{valuation_of, verify_counter, verify_machine, MealyMachine, MooreMachine, MooreState};
use super::nba::{Nba, NbaCaps};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Realizable(MealyMachine),
    Unrealizable(MooreMachine),
    /// Neither side wins within the bounds; the reason says which bound.
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizeOptions {
    /// Largest machine size searched for either side.
    pub cap: usize,
    /// Game nodes explored per attempt before giving up on that attempt.
    pub max_nodes: usize,
    pub nba: NbaCaps,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            cap: 6,
            max_nodes: 200_000,
            nba: NbaCaps::default(),
        }
    }
}

/// Counts per automaton state, sorted by state.
type Counts = Vec<(usize, u32)>;

const DEAD: usize = 0;

struct Arena<'a> {
    nba: &'a mut Nba,
    n_in: usize,
    n_out: usize,
    bound: u32,
    restricted: HashMap<(Ref, usize), Ref>,
    ids: HashMap<Counts, usize>,
    nodes: Vec<Option<Counts>>,
    /// `moves[node][code]`: output regions with their successor node.
    moves: Vec<Vec<Vec<(Ref, usize)>>>,
}

impl<'a> Arena<'a> {
    fn new(nba: &'a mut Nba, n_in: usize, n_out: usize, bound: u32) -> Self {
        Arena {
            nba,
            n_in,
            n_out,
            bound,
            restricted: HashMap::new(),
            ids: HashMap::new(),
            nodes: vec![None],
            moves: vec![Vec::new()],
        }
    }

    fn accepting(&self, acc: u64) -> bool {
        self.nba.n_acc == 0 || acc & 1 == 1
    }

    fn restrict(&mut self, g: Ref, code: usize) -> Ref {
        if let Some(&r) = self.restricted.get(&(g, code)) {
            return r;
        }
        let (base, n_in) = (self.nba.base, self.n_in as u32);
        let r = self.nba.bdd.restrict(g, &|v| {
            let i = v.checked_sub(base)?;
            (i < n_in).then_some(code >> i & 1 == 1)
        });
        self.restricted.insert((g, code), r);
        r
    }

    fn intern(&mut self, c: Option<Counts>, queue: &mut VecDeque<usize>) -> usize {
        let Some(c) = c else { return DEAD };
        if let Some(&i) = self.ids.get(&c) {
            return i;
        }
        let i = self.nodes.len();
        self.ids.insert(c.clone(), i);
        self.nodes.push(Some(c));
        self.moves.push(Vec::new());
        queue.push_back(i);
        i
    }

    fn successors(&mut self, node: &Counts, code: usize) -> Vec<(Ref, Option<Counts>)> {
        let mut live: Vec<(u32, usize, u64, usize)> = Vec::new();
        let mut guards: Vec<Ref> = Vec::new();
        for &(q, c) in node {
            for k in 0..self.nba.edges[q].len() {
                let e = self.nba.edges[q][k];
                let g = self.restrict(e.guard, code);
                if g == FALSE {
                    continue;
                }
                let gi = guards.iter().position(|&x| x == g).unwrap_or_else(|| {
                    guards.push(g);
                    guards.len() - 1
                });
                live.push((c, e.to, e.acc, gi));
            }
        }
        // Output regions on which the same guards hold.
        let mut regions: Vec<(Ref, Vec<bool>)> = vec![(TRUE, Vec::new())];
        for &g in &guards {
            let ng = self.nba.bdd.not(g);
            let mut next = Vec::with_capacity(regions.len() * 2);
            for (r, flags) in regions {
                let off = self.nba.bdd.and(r, ng);
                let on = self.nba.bdd.and(r, g);
                if off != FALSE {
                    let mut f = flags.clone();
                    f.push(false);
                    next.push((off, f));
                }
                if on != FALSE {
                    let mut f = flags;
                    f.push(true);
                    next.push((on, f));
                }
            }
            regions = next;
        }
        let mut out: Vec<(Ref, Option<Counts>)> = Vec::new();
        for (r, flags) in regions {
            let mut succ: BTreeMap<usize, u32> = BTreeMap::new();
            let mut dead = false;
            for &(c, to, acc, gi) in &live {
                if !flags[gi] {
                    continue;
                }
                let c2 = c + self.accepting(acc) as u32;
                if c2 > self.bound {
                    dead = true;
                    break;
                }
                let e = succ.entry(to).or_insert(c2);
                *e = (*e).max(c2);
            }
            let succ = (!dead).then(|| succ.into_iter().collect::<Counts>());
            match out.iter_mut().find(|(_, s)| *s == succ) {
                Some((reg, _)) => *reg = self.nba.bdd.or(*reg, r),
                None => out.push((r, succ)),
            }
        }
        out
    }

    /// Explores the game from the initial node. `None` when the node budget
    /// runs out.
    fn explore(&mut self, max_nodes: usize) -> Option<usize> {
        let mut queue = VecDeque::new();
        let init: Counts = {
            let mut v: Vec<usize> = self.nba.init.clone();
            v.sort_unstable();
            v.dedup();
            v.into_iter().map(|q| (q, 0)).collect()
        };
        let root = self.intern(Some(init), &mut queue);
        while let Some(i) = queue.pop_front() {
            if self.nodes.len() > max_nodes {
                return None;
            }
            let node = self.nodes[i].clone().expect("live node");
            let mut per_code = Vec::with_capacity(1 << self.n_in);
            for code in 0..1usize << self.n_in {
                let succ = self.successors(&node, code);
                per_code.push(succ.into_iter().map(|(r, s)| (r, self.intern(s, &mut queue))).collect());
            }
            self.moves[i] = per_code;
        }
        Some(root)
    }

    /// Greatest fixpoint of the safe region. With `system` the protagonist
    /// picks the output region after every input, otherwise it picks the
    /// input and must survive every output region.
    fn solve(&self, system: bool) -> Vec<bool> {
        let mut win: Vec<bool> = (0..self.nodes.len()).map(|i| i != DEAD).collect();
        loop {
            let mut changed = false;
            for i in 1..self.nodes.len() {
                if !win[i] {
                    continue;
                }
                let ok = if system {
                    self.moves[i].iter().all(|opts| opts.iter().any(|&(_, s)| win[s]))
                } else {
                    self.moves[i].iter().any(|opts| opts.iter().all(|&(_, s)| win[s]))
                };
                if !ok {
                    win[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return win;
            }
        }
    }

    fn output_of(&self, region: Ref) -> Vec<bool> {
        let mut out = vec![false; self.n_out];
        let first = self.nba.base + self.n_in as u32;
        for (v, b) in self.nba.bdd.sat_one(region).expect("nonempty region") {
            if v >= first {
                out[(v - first) as usize] = b;
            }
        }
        out
    }

    fn mealy(&self, root: usize, win: &[bool], inputs: &[String], outputs: &[String]) -> MealyMachine {
        let mut order: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut rep = vec![root];
        let mut trans = Vec::new();
        let mut k = 0;
        while k < rep.len() {
            let node = rep[k];
            let mut row = Vec::new();
            for opts in &self.moves[node] {
                let &(r, s) = opts.iter().find(|&&(_, s)| win[s]).expect("winning node has a safe move");
                let next = *order.entry(s).or_insert_with(|| {
                    rep.push(s);
                    rep.len() - 1
                });
                row.push((self.output_of(r), next));
            }
            trans.push(row);
            k += 1;
        }
        MealyMachine {
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            init: 0,
            trans,
        }
    }

    fn moore(&self, root: usize, win: &[bool], inputs: &[String], outputs: &[String]) -> MooreMachine {
        let mut order: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut rep = vec![root];
        let mut states = Vec::new();
        let first = self.nba.base + self.n_in as u32;
        let mut k = 0;
        while k < rep.len() {
            let node = rep[k];
            let code = self.moves[node]
                .iter()
                .position(|opts| opts.iter().all(|&(_, s)| win[s]))
                .expect("winning node has a safe input");
            let mut trans = Vec::new();
            for &(r, s) in &self.moves[node][code] {
                let next = *order.entry(s).or_insert_with(|| {
                    rep.push(s);
                    rep.len() - 1
                });
                for cube in self.nba.bdd.cubes(r) {
                    let mut p = vec![None; self.n_out];
                    for (v, b) in cube {
                        if v >= first {
                            p[(v - first) as usize] = Some(b);
                        }
                    }
                    trans.push((p, next));
                }
            }
            states.push(MooreState {
                emit: valuation_of(code, self.n_in),
                trans,
            });
            k += 1;
        }
        MooreMachine {
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            init: 0,
            states,
        }
    }
}

enum Attempt<M> {
    Won(M),
    Lost,
    TooLarge,
    OutOfBudget,
}

fn attempt_system(nba: &mut Nba, inputs: &[String], outputs: &[String], bound: u32, opts: &RealizeOptions) -> Attempt<MealyMachine> {
    let mut arena = Arena::new(nba, inputs.len(), outputs.len(), bound);
    let Some(root) = arena.explore(opts.max_nodes) else {
        return Attempt::OutOfBudget;
    };
    let win = arena.solve(true);
    if !win[root] {
        return Attempt::Lost;
    }
    let m = arena.mealy(root, &win, inputs, outputs).minimize();
    if m.len() > opts.cap {
        Attempt::TooLarge
    } else {
        Attempt::Won(m)
    }
}

fn attempt_environment(nba: &mut Nba, inputs: &[String], outputs: &[String], bound: u32, opts: &RealizeOptions) -> Attempt<MooreMachine> {
    let mut arena = Arena::new(nba, inputs.len(), outputs.len(), bound);
    let Some(root) = arena.explore(opts.max_nodes) else {
        return Attempt::OutOfBudget;
    };
    let win = arena.solve(false);
    if !win[root] {
        return Attempt::Lost;
    }
    let m = arena.moore(root, &win, inputs, outputs).minimize();
    if m.len() > opts.cap {
        Attempt::TooLarge
    } else {
        Attempt::Won(m)
    }
}

const MAX_INPUTS: usize = 12;

/// Decides whether `f` is realizable with the given input/output partition,
/// searching machines of at most `opts.cap` states for both players. Returned
/// machines have been checked against `f`.
pub fn realize(f: &Ltl<String>, inputs: &[String], outputs: &[String], opts: &RealizeOptions) -> Result<Verdict> {
    if let Some(p) = inputs.iter().find(|p| outputs.contains(p)) {
        return Err(Error::Precondition(format!("proposition {p} is both input and output")));
    }
    if inputs.len() > MAX_INPUTS {
        return Err(Error::ResourceCap(format!("{} inputs are too many to enumerate", inputs.len())));
    }
    let props: Vec<String> = inputs.iter().chain(outputs).cloned().collect();
    let mut sys = Nba::from_formula(&Ltl::not(f.clone()), &props, opts.nba)?.degeneralize();
    let mut env: Option<Nba> = None;
    let mut budget_hit = false;
    for bound in 0..opts.cap.max(1) as u32 {
        match attempt_system(&mut sys, inputs, outputs, bound, opts) {
            Attempt::Won(m) => {
                let v = verify_machine(&m, f)?;
                if !v.holds {
                    return Err(Error::Unsupported("synthesized machine failed verification".into()));
                }
                return Ok(Verdict::Realizable(m));
            }
            Attempt::OutOfBudget => budget_hit = true,
            Attempt::Lost | Attempt::TooLarge => {}
        }
        if env.is_none() {
            env = Some(Nba::from_formula(f, &props, opts.nba)?.degeneralize());
        }
        let env_nba = env.as_mut().expect("built above");
        match attempt_environment(env_nba, inputs, outputs, bound, opts) {
            Attempt::Won(m) => {
                let v = verify_counter(&m, f)?;
                if !v.holds {
                    return Err(Error::Unsupported("counter-strategy failed verification".into()));
                }
                return Ok(Verdict::Unrealizable(m));
            }
            Attempt::OutOfBudget => budget_hit = true,
            Attempt::Lost | Attempt::TooLarge => {}
        }
    }
    Ok(Verdict::Unknown(if budget_hit {
        format!("game exceeded {} nodes", opts.max_nodes)
    } else {
        format!("no strategy within the cap of {} states for either player", opts.cap)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_prop_ltl;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn run(text: &str, i: &[&str], o: &[&str]) -> Verdict {
        let f = parse_prop_ltl(text).unwrap();
        realize(&f, &s(i), &s(o), &RealizeOptions::default()).unwrap()
    }

    #[test]
    fn copy_is_realizable_with_one_state() {
        match run("G (out <-> in)", &["in"], &["out"]) {
            Verdict::Realizable(m) => assert_eq!(m.len(), 1),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn delayed_copy_needs_memory() {
        match run("G (X out <-> in)", &["in"], &["out"]) {
            Verdict::Realizable(m) => assert_eq!(m.len(), 2),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn predicting_the_input_is_unrealizable() {
        assert!(matches!(run("G (out <-> X in)", &["in"], &["out"]), Verdict::Unrealizable(_)));
    }

    #[test]
    fn liveness_response() {
        assert!(matches!(run("G (r -> F g)", &["r"], &["g"]), Verdict::Realizable(_)));
        assert!(matches!(run("G F r -> G F g", &["r"], &["g"]), Verdict::Realizable(_)));
        assert!(matches!(run("F G r", &["r"], &["g"]), Verdict::Unrealizable(_)));
    }

    #[test]
    fn past_operators() {
        // Output whether the input held at the previous step.
        assert!(matches!(run("G (out <-> Y in)", &["in"], &["out"]), Verdict::Realizable(_)));
        assert!(matches!(run("G (out <-> (in S !in))", &["in"], &["out"]), Verdict::Realizable(_)));
    }

    #[test]
    fn no_inputs_or_outputs() {
        assert!(matches!(run("G F g & G F !g", &[], &["g"]), Verdict::Realizable(_)));
        assert!(matches!(run("G r", &["r"], &[]), Verdict::Unrealizable(_)));
    }
}
