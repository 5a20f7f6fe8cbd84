//! Finite-state strategies: Mealy machines for the system, Moore machines for
//! environment counter-strategies. Both verify against an automaton product.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::translate::Meta;

use super::bdd::{Bdd, Ref, FALSE, TRUE};
use super::nba::{find_lasso, Nba, NbaCaps};

pub type Valuation = Vec<bool>;

/// Deterministic, total over input valuations. Input code bit i is input i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub init: usize,
    /// `trans[state][input code] = (outputs, next)`.
    pub trans: Vec<Vec<(Valuation, usize)>>,
}

/// A pattern over outputs: `None` matches either value.
pub type Pattern = Vec<Option<bool>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreState {
    /// Input valuation emitted in this state.
    pub emit: Valuation,
    /// Disjoint patterns covering all output valuations.
    pub trans: Vec<(Pattern, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub init: usize,
    pub states: Vec<MooreState>,
}

pub fn code_of(v: &[bool]) -> usize {
    v.iter().enumerate().fold(0, |c, (i, &b)| c | (b as usize) << i)
}

pub fn valuation_of(code: usize, n: usize) -> Valuation {
    (0..n).map(|i| code >> i & 1 == 1).collect()
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn pattern_text(p: &[Option<bool>]) -> String {
    p.iter()
        .map(|b| match b {
            None => '-',
            Some(true) => '1',
            Some(false) => '0',
        })
        .collect()
}

fn matches(p: &[Option<bool>], v: &[bool]) -> bool {
    p.iter().zip(v).all(|(p, v)| p.is_none_or(|p| p == *v))
}

const MAX_EXPLICIT_INPUTS: usize = 16;

impl MealyMachine {
    pub fn len(&self) -> usize {
        self.trans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trans.is_empty()
    }

    pub fn step(&self, state: usize, input: &[bool]) -> (&Valuation, usize) {
        let (o, n) = &self.trans[state][code_of(input)];
        (o, *n)
    }

    /// Runs the machine on a finite input sequence from the initial state.
    pub fn run(&self, inputs: &[Valuation]) -> Vec<Valuation> {
        let mut s = self.init;
        inputs
            .iter()
            .map(|i| {
                let (o, n) = self.step(s, i);
                s = n;
                o.clone()
            })
            .collect()
    }

    /// Smallest equivalent machine, states numbered in breadth-first order.
    pub fn minimize(&self) -> MealyMachine {
        let n = self.len();
        let mut class: Vec<usize> = vec![0; n];
        loop {
            let mut sigs: BTreeMap<(usize, Vec<(&Valuation, usize)>), usize> = BTreeMap::new();
            let mut next_class = vec![0; n];
            for s in 0..n {
                let sig = (class[s], self.trans[s].iter().map(|(o, t)| (o, class[*t])).collect());
                let k = sigs.len();
                next_class[s] = *sigs.entry(sig).or_insert(k);
            }
            let stable = sigs.len() == class.iter().collect::<std::collections::BTreeSet<_>>().len();
            class = next_class;
            if stable {
                break;
            }
        }
        // Breadth-first renumbering of classes from the initial state.
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.init]);
        order.insert(class[self.init], 0);
        rep.push(self.init);
        while let Some(s) = queue.pop_front() {
            for (_, t) in &self.trans[s] {
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(class[*t]) {
                    e.insert(rep.len());
                    rep.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let trans = rep
            .iter()
            .map(|&s| {
                self.trans[s]
                    .iter()
                    .map(|(o, t)| (o.clone(), order[&class[*t]]))
                    .collect()
            })
            .collect();
        MealyMachine {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            init: 0,
            trans,
        }
    }
}

impl MooreMachine {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn next(&self, state: usize, output: &[bool]) -> usize {
        self.states[state]
            .trans
            .iter()
            .find(|(p, _)| matches(p, output))
            .map(|(_, t)| *t)
            .expect("patterns cover every output valuation")
    }

    fn regions(&self, bdd: &mut Bdd, s: usize, class: &[usize]) -> Vec<(usize, Ref)> {
        let mut by_class: BTreeMap<usize, Ref> = BTreeMap::new();
        for (p, t) in &self.states[s].trans {
            let lits: Vec<(u32, bool)> = p
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.map(|b| (i as u32, b)))
                .collect();
            let c = bdd.cube(&lits);
            let e = by_class.entry(class[*t]).or_insert(FALSE);
            *e = bdd.or(*e, c);
        }
        by_class.into_iter().collect()
    }

    /// Smallest equivalent machine, states numbered in breadth-first order.
    pub fn minimize(&self) -> MooreMachine {
        let n = self.len();
        let mut bdd = Bdd::new();
        let mut class: Vec<usize> = vec![0; n];
        loop {
            let mut sigs: BTreeMap<(usize, &Valuation, Vec<(usize, Ref)>), usize> = BTreeMap::new();
            let mut next_class = vec![0; n];
            for s in 0..n {
                let sig = (class[s], &self.states[s].emit, self.regions(&mut bdd, s, &class));
                let k = sigs.len();
                next_class[s] = *sigs.entry(sig).or_insert(k);
            }
            let stable = sigs.len() == class.iter().collect::<std::collections::BTreeSet<_>>().len();
            class = next_class;
            if stable {
                break;
            }
        }
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = vec![self.init];
        order.insert(class[self.init], 0);
        let mut i = 0;
        while i < rep.len() {
            let s = rep[i];
            for (_, t) in &self.states[s].trans {
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(class[*t]) {
                    e.insert(rep.len());
                    rep.push(*t);
                }
            }
            i += 1;
        }
        let states = rep
            .iter()
            .map(|&s| {
                let regions = self.regions(&mut bdd, s, &class);
                let mut trans = Vec::new();
                for (c, r) in regions {
                    let target = order[&c];
                    for cube in bdd.cubes(r) {
                        let mut p = vec![None; self.outputs.len()];
                        for (v, b) in cube {
                            p[v as usize] = Some(b);
                        }
                        trans.push((p, target));
                    }
                }
                MooreState {
                    emit: self.states[s].emit.clone(),
                    trans,
                }
            })
            .collect();
        MooreMachine {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            init: 0,
            states,
        }
    }
}

/// Result of checking a machine against a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// A violating run `prefix · period^ω` over inputs followed by outputs.
    pub counterexample: Option<(Vec<Valuation>, Vec<Valuation>)>,
}

fn all_props(inputs: &[String], outputs: &[String]) -> Result<Vec<String>> {
    if let Some(p) = inputs.iter().find(|p| outputs.contains(p)) {
        return Err(Error::Precondition(format!("proposition {p} is both input and output")));
    }
    Ok(inputs.iter().chain(outputs).cloned().collect())
}

/// Whether every run of `m` satisfies `f`.
pub fn verify_machine(m: &MealyMachine, f: &Ltl<String>) -> Result<Verification> {
    if m.inputs.len() > MAX_EXPLICIT_INPUTS {
        return Err(Error::ResourceCap(format!("{} inputs are too many to enumerate", m.inputs.len())));
    }
    let props = all_props(&m.inputs, &m.outputs)?;
    let nba = Nba::from_formula(&Ltl::not(f.clone()), &props, NbaCaps::default())?;
    let n_in = m.inputs.len();
    let mut out_edges = |s: usize, q: usize, nba: &Nba| {
        let mut v = Vec::new();
        for code in 0..1usize << n_in {
            let (o, t) = &m.trans[s][code];
            let mut letter = valuation_of(code, n_in);
            letter.extend(o.iter().copied());
            for e in &nba.edges[q] {
                if nba.holds(e.guard, &letter) {
                    v.push((*t, e.to, e.acc, letter.clone()));
                }
            }
        }
        v
    };
    Ok(product_search(&nba, m.init, &mut out_edges))
}

/// Whether the counter-strategy forces every run to violate `f`.
pub fn verify_counter(m: &MooreMachine, f: &Ltl<String>) -> Result<Verification> {
    let props = all_props(&m.inputs, &m.outputs)?;
    let mut nba = Nba::from_formula(f, &props, NbaCaps::default())?;
    let n_in = m.inputs.len();
    let base = nba.base;
    // Guards restricted to each state's emitted input and intersected with
    // each pattern.
    let mut table: HashMap<(usize, usize), Vec<(usize, usize, u64, Valuation)>> = HashMap::new();
    for (s, st) in m.states.iter().enumerate() {
        for q in 0..nba.len() {
            let mut v = Vec::new();
            for e in nba.edges[q].clone() {
                let emit = st.emit.clone();
                let g = nba.bdd.restrict(e.guard, &|var| {
                    let i = var.checked_sub(base)? as usize;
                    (i < n_in).then(|| emit[i])
                });
                if g == FALSE {
                    continue;
                }
                for (p, t) in &st.trans {
                    let lits: Vec<(u32, bool)> = p
                        .iter()
                        .enumerate()
                        .filter_map(|(j, b)| b.map(|b| (base + (n_in + j) as u32, b)))
                        .collect();
                    let c = nba.bdd.cube(&lits);
                    let h = nba.bdd.and(g, c);
                    if h != FALSE {
                        let mut letter = st.emit.clone();
                        let pick = nba.pick_letter(h).expect("nonempty guard");
                        letter.extend_from_slice(&pick[n_in..]);
                        v.push((*t, e.to, e.acc, letter));
                    }
                }
            }
            table.insert((s, q), v);
        }
    }
    let mut out_edges = |s: usize, q: usize, _: &Nba| table[&(s, q)].clone();
    let r = product_search(&nba, m.init, &mut out_edges);
    Ok(r)
}

fn product_search(
    nba: &Nba,
    init_state: usize,
    out_edges: &mut dyn FnMut(usize, usize, &Nba) -> Vec<(usize, usize, u64, Valuation)>,
) -> Verification {
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    for &q in &nba.init {
        let k = (init_state, q);
        if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(k) {
            e.insert(keys.len());
            keys.push(k);
            queue.push_back(keys.len() - 1);
        }
    }
    let init: Vec<usize> = (0..keys.len()).collect();
    let mut adj: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut letters: Vec<Vec<Valuation>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (s, q) = keys[i];
        let mut out = Vec::new();
        let mut labs = Vec::new();
        for (t, q2, acc, letter) in out_edges(s, q, nba) {
            let key = (t, q2);
            let j = match ids.get(&key) {
                Some(&j) => j,
                None => {
                    ids.insert(key, keys.len());
                    keys.push(key);
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                }
            };
            out.push((j, acc));
            labs.push(letter);
        }
        adj.resize_with(adj.len().max(i + 1), Vec::new);
        letters.resize_with(letters.len().max(i + 1), Vec::new);
        adj[i] = out;
        letters[i] = labs;
    }
    adj.resize_with(keys.len(), Vec::new);
    letters.resize_with(keys.len(), Vec::new);
    match find_lasso(&adj, &init, nba.n_acc) {
        None => Verification {
            holds: true,
            counterexample: None,
        },
        Some(l) => {
            let word = |steps: &[(usize, usize)]| steps.iter().map(|&(v, e)| letters[v][e].clone()).collect();
            Verification {
                holds: false,
                counterexample: Some((word(&l.prefix), word(&l.cycle))),
            }
        }
    }
}

/// A machine file: strategy plus the decode metadata of its PropSpec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Mealy(MealyMachine),
    Moore(MooreMachine),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineFile {
    pub strategy: Strategy,
    pub meta: Option<Meta>,
}

pub fn write_machine(file: &MachineFile) -> String {
    let (kind, inputs, outputs, init, n, trans): (&str, _, _, _, _, Vec<Value>) = match &file.strategy {
        Strategy::Mealy(m) => (
            "mealy",
            &m.inputs,
            &m.outputs,
            m.init,
            m.len(),
            m.trans
                .iter()
                .enumerate()
                .flat_map(|(s, row)| {
                    row.iter().enumerate().map(move |(code, (o, t))| {
                        json!([s, bits(&valuation_of(code, m.inputs.len())), bits(o), t])
                    })
                })
                .collect(),
        ),
        Strategy::Moore(m) => (
            "moore",
            &m.inputs,
            &m.outputs,
            m.init,
            m.len(),
            m.states
                .iter()
                .enumerate()
                .flat_map(|(s, st)| {
                    st.trans
                        .iter()
                        .map(move |(p, t)| json!([s, bits(&st.emit), pattern_text(p), t]))
                })
                .collect(),
        ),
    };
    let v = json!({
        "kind": kind,
        "inputs": inputs,
        "outputs": outputs,
        "states": n,
        "init": init,
        "trans": trans,
        "meta": file.meta,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("machine serializes");
    s.push('\n');
    s
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn parse_pattern(s: &str, n: usize, allow_dash: bool) -> Result<Pattern> {
    if s.chars().count() != n {
        return Err(malformed(format!("bit string `{s}` should have length {n}")));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(Some(false)),
            '1' => Ok(Some(true)),
            '-' if allow_dash => Ok(None),
            _ => Err(malformed(format!("bad character `{c}` in bit string `{s}`"))),
        })
        .collect()
}

fn expand_pattern(p: &[Option<bool>]) -> Vec<usize> {
    let mut codes = vec![0usize];
    for (i, b) in p.iter().enumerate() {
        codes = codes
            .into_iter()
            .flat_map(|c| match b {
                Some(true) => vec![c | 1 << i],
                Some(false) => vec![c],
                None => vec![c, c | 1 << i],
            })
            .collect();
    }
    codes
}

fn names(v: &Value, field: &str) -> Result<Vec<String>> {
    v.get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| malformed(format!("missing `{field}`")))?
        .iter()
        .map(|x| x.as_str().map(String::from).ok_or_else(|| malformed(format!("`{field}` must hold strings"))))
        .collect()
}

/// Parses a machine file, checking totality and determinism and dropping
/// states unreachable from the initial one.
pub fn read_machine(text: &str) -> Result<MachineFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or("mealy");
    let inputs = names(&v, "inputs")?;
    let outputs = names(&v, "outputs")?;
    all_props(&inputs, &outputs).map_err(|e| malformed(e.to_string()))?;
    let n = v.get("states").and_then(Value::as_u64).ok_or_else(|| malformed("missing `states`"))? as usize;
    let init = v.get("init").and_then(Value::as_u64).ok_or_else(|| malformed("missing `init`"))? as usize;
    if init >= n {
        return Err(malformed("initial state out of range"));
    }
    let meta = match v.get("meta") {
        None | Some(Value::Null) => None,
        Some(m) => Some(serde_json::from_value(m.clone()).map_err(|e| malformed(format!("bad meta: {e}")))?),
    };
    let rows = v
        .get("trans")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing `trans`"))?;
    let mut parsed = Vec::new();
    for r in rows {
        let a = r.as_array().filter(|a| a.len() == 4).ok_or_else(|| malformed("transition must be [state, in, out, next]"))?;
        let s = a[0].as_u64().ok_or_else(|| malformed("state must be a number"))? as usize;
        let t = a[3].as_u64().ok_or_else(|| malformed("next state must be a number"))? as usize;
        let i = a[1].as_str().ok_or_else(|| malformed("input bits must be a string"))?;
        let o = a[2].as_str().ok_or_else(|| malformed("output bits must be a string"))?;
        if s >= n || t >= n {
            return Err(malformed(format!("state out of range in transition {r}")));
        }
        parsed.push((s, i.to_string(), o.to_string(), t));
    }
    let strategy = match kind {
        "mealy" => {
            let mut trans: Vec<Vec<Option<(Valuation, usize)>>> = vec![vec![None; 1 << inputs.len()]; n];
            for (s, i, o, t) in parsed {
                let ip = parse_pattern(&i, inputs.len(), true)?;
                let ov: Valuation = parse_pattern(&o, outputs.len(), false)?.into_iter().map(|b| b == Some(true)).collect();
                for code in expand_pattern(&ip) {
                    match &trans[s][code] {
                        Some(prev) if prev != &(ov.clone(), t) => {
                            return Err(malformed(format!("state {s} has two transitions on input {}", bits(&valuation_of(code, inputs.len())))))
                        }
                        _ => trans[s][code] = Some((ov.clone(), t)),
                    }
                }
            }
            let m = MealyMachine {
                inputs: inputs.clone(),
                outputs: outputs.clone(),
                init,
                trans: Vec::new(),
            };
            // Totality is only required of reachable states.
            let mut order = vec![usize::MAX; n];
            let mut rep = vec![init];
            order[init] = 0;
            let mut k = 0;
            while k < rep.len() {
                let s = rep[k];
                for (code, e) in trans[s].iter().enumerate() {
                    let (_, t) = e.as_ref().ok_or_else(|| {
                        malformed(format!(
                            "totality: state {s} has no transition on input {}",
                            bits(&valuation_of(code, inputs.len()))
                        ))
                    })?;
                    if order[*t] == usize::MAX {
                        order[*t] = rep.len();
                        rep.push(*t);
                    }
                }
                k += 1;
            }
            let trans = rep
                .iter()
                .map(|&s| {
                    trans[s]
                        .iter()
                        .map(|e| {
                            let (o, t) = e.clone().expect("checked");
                            (o, order[t])
                        })
                        .collect()
                })
                .collect();
            Strategy::Mealy(MealyMachine { trans, init: 0, ..m })
        }
        "moore" => {
            let mut states: Vec<Option<MooreState>> = vec![None; n];
            for (s, i, o, t) in parsed {
                let emit: Valuation = parse_pattern(&i, inputs.len(), false)?.into_iter().map(|b| b == Some(true)).collect();
                let p = parse_pattern(&o, outputs.len(), true)?;
                let st = states[s].get_or_insert_with(|| MooreState {
                    emit: emit.clone(),
                    trans: Vec::new(),
                });
                if st.emit != emit {
                    return Err(malformed(format!("state {s} emits two different inputs")));
                }
                st.trans.push((p, t));
            }
            let mut bdd = Bdd::new();
            let mut order = vec![usize::MAX; n];
            let mut rep = vec![init];
            order[init] = 0;
            let mut k = 0;
            while k < rep.len() {
                let s = rep[k];
                let st = states[s]
                    .as_ref()
                    .ok_or_else(|| malformed(format!("totality: state {s} has no transitions")))?;
                let mut covered = FALSE;
                for (p, t) in &st.trans {
                    let lits: Vec<(u32, bool)> = p.iter().enumerate().filter_map(|(j, b)| b.map(|b| (j as u32, b))).collect();
                    let c = bdd.cube(&lits);
                    let overlap = bdd.and(covered, c);
                    if overlap != FALSE {
                        return Err(malformed(format!("state {s} has overlapping output patterns")));
                    }
                    covered = bdd.or(covered, c);
                    if order[*t] == usize::MAX {
                        order[*t] = rep.len();
                        rep.push(*t);
                    }
                }
                if covered != TRUE {
                    return Err(malformed(format!("totality: state {s} does not cover every output valuation")));
                }
                k += 1;
            }
            let states = rep
                .iter()
                .map(|&s| {
                    let st = states[s].clone().expect("checked");
                    MooreState {
                        emit: st.emit,
                        trans: st.trans.into_iter().map(|(p, t)| (p, order[t])).collect(),
                    }
                })
                .collect();
            Strategy::Moore(MooreMachine {
                inputs,
                outputs,
                init: 0,
                states,
            })
        }
        other => return Err(malformed(format!("unknown machine kind `{other}`"))),
    };
    Ok(MachineFile { strategy, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_prop_ltl;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    pub(crate) fn copy_machine() -> MealyMachine {
        MealyMachine {
            inputs: s(&["in"]),
            outputs: s(&["out"]),
            init: 0,
            trans: vec![vec![(vec![false], 0), (vec![true], 0)]],
        }
    }

    #[test]
    fn copy_machine_verifies() {
        let m = copy_machine();
        let f = parse_prop_ltl("G (out <-> in)").unwrap();
        assert!(verify_machine(&m, &f).unwrap().holds);
        let bad = parse_prop_ltl("G !out").unwrap();
        let v = verify_machine(&m, &bad).unwrap();
        assert!(!v.holds);
        let (u, c) = v.counterexample.unwrap();
        // The counterexample really violates G !out.
        assert!(u.iter().chain(c.iter()).any(|l| l[1]));
    }

    #[test]
    fn machine_round_trip() {
        let file = MachineFile {
            strategy: Strategy::Mealy(copy_machine()),
            meta: None,
        };
        let text = write_machine(&file);
        assert_eq!(read_machine(&text).unwrap(), file);
    }

    #[test]
    fn missing_transition_is_rejected() {
        let text = r#"{"kind":"mealy","inputs":["in"],"outputs":["out"],"states":1,"init":0,
            "trans":[[0,"0","0",0]]}"#;
        let err = read_machine(text).unwrap_err().to_string();
        assert!(err.contains("totality"), "{err}");
    }

    #[test]
    fn unreachable_states_are_pruned() {
        let text = r#"{"kind":"mealy","inputs":["in"],"outputs":["out"],"states":3,"init":1,
            "trans":[[0,"-","1",0],[1,"0","0",1],[1,"1","1",1],[2,"-","0",0]]}"#;
        let f = read_machine(text).unwrap();
        let Strategy::Mealy(m) = f.strategy else { panic!() };
        assert_eq!(m, copy_machine());
        let spec = parse_prop_ltl("G (out <-> in)").unwrap();
        assert!(verify_machine(&m, &spec).unwrap().holds);
    }

    #[test]
    fn minimize_merges_equal_states() {
        let mut m = copy_machine();
        m.trans = vec![
            vec![(vec![false], 1), (vec![true], 1)],
            vec![(vec![false], 0), (vec![true], 0)],
        ];
        assert_eq!(m.minimize(), copy_machine());
    }

    #[test]
    fn counter_strategy_checks() {
        // The environment announces `in` one step late; `out <-> X in` fails.
        let m = MooreMachine {
            inputs: s(&["in"]),
            outputs: s(&["out"]),
            init: 0,
            states: vec![
                MooreState {
                    emit: vec![false],
                    trans: vec![(vec![Some(false)], 1), (vec![Some(true)], 0)],
                },
                MooreState {
                    emit: vec![true],
                    trans: vec![(vec![Some(false)], 1), (vec![Some(true)], 0)],
                },
            ],
        };
        let f = parse_prop_ltl("G (out <-> X in)").unwrap();
        assert!(verify_counter(&m, &f).unwrap().holds);
        let g = parse_prop_ltl("G (out | !out)").unwrap();
        assert!(!verify_counter(&m, &g).unwrap().holds);
        let file = MachineFile {
            strategy: Strategy::Moore(m.clone()),
            meta: None,
        };
        assert_eq!(read_machine(&write_machine(&file)).unwrap(), file);
        assert_eq!(m.minimize().len(), 2);
    }
}
