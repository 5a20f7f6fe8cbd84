//! Propositional encodings of a kernel specification.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::structure::{TypeSet, TypeSpace};

use super::kernel::KernelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Naive,
    Binary,
    Minterm,
    /// Single-trace form for satisfiability; every proposition is an output.
    Sat,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Naive => "naive",
            Encoding::Binary => "binary",
            Encoding::Minterm => "minterm",
            Encoding::Sat => "sat",
        }
    }

    pub fn from_name(s: &str) -> Option<Encoding> {
        Some(match s {
            "naive" => Encoding::Naive,
            "binary" => Encoding::Binary,
            "minterm" => Encoding::Minterm,
            "sat" => Encoding::Sat,
            _ => return None,
        })
    }
}

/// How atoms are kept false during the first steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuardMode {
    /// `Y^g TRUE`.
    #[default]
    Past,
    /// One-hot step counter `c0..cL` driven by the system.
    Counter,
}

impl GuardMode {
    pub fn name(self) -> &'static str {
        match self {
            GuardMode::Past => "past",
            GuardMode::Counter => "counter",
        }
    }

    pub fn from_name(s: &str) -> Option<GuardMode> {
        match s {
            "past" => Some(GuardMode::Past),
            "counter" => Some(GuardMode::Counter),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntry {
    /// Proposition standing for this type, if the encoding has one.
    pub prop: Option<String>,
    pub render: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub prop: Option<String>,
    pub formula: String,
    pub guard: usize,
    pub copy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub sigma: usize,
    pub rho: usize,
    /// Bit i set iff atom i holds.
    pub atoms: u64,
    pub tau: usize,
}

/// Everything needed to move between types and valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub encoding: Encoding,
    pub guard: GuardMode,
    pub structure: String,
    pub widths: [usize; 3],
    pub partial: Vec<TypeEntry>,
    pub full: Vec<TypeEntry>,
    pub memory: Vec<TypeEntry>,
    /// Binary mode: environment code bits, least significant first.
    pub input_bits: Vec<String>,
    /// Binary mode: system code bits, least significant first.
    pub output_bits: Vec<String>,
    pub atoms: Vec<AtomEntry>,
    pub witness: Vec<WitnessEntry>,
    pub counters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropSpec {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub assumption: Ltl<String>,
    pub guarantee: Ltl<String>,
    pub meta: Meta,
}

impl PropSpec {
    pub fn encoding(&self) -> Encoding {
        self.meta.encoding
    }

    /// `assumption -> guarantee`, or just the guarantee when nothing is assumed.
    pub fn formula(&self) -> Ltl<String> {
        if self.assumption == Ltl::True {
            self.guarantee.clone()
        } else {
            Ltl::implies(self.assumption.clone(), self.guarantee.clone())
        }
    }
}

/// Type spaces and per-type data shared by every encoding.
pub struct Tables {
    pub partial: Arc<TypeSpace>,
    pub full: Arc<TypeSpace>,
    pub memory: Arc<TypeSpace>,
    /// Partial type of each full type.
    pub sigma_of: Vec<usize>,
    /// Memory type (last `w_y` coordinates) of each full type.
    pub rho_of: Vec<usize>,
    /// Memory part of each partial type; empty when there is no memory.
    pub mem_of_partial: Vec<usize>,
    pub atom_sets: Vec<TypeSet>,
}

impl Tables {
    pub fn build(k: &KernelSpec) -> Result<Tables> {
        let s = &k.structure;
        let p = k.partial_arity();
        let partial = s.space(p)?;
        let full = s.space(k.full_arity())?;
        let memory = s.space(k.w_y)?;
        let pidx: Vec<usize> = (0..p).collect();
        let mut sigma_of = Vec::with_capacity(full.len());
        let mut rho_of = Vec::with_capacity(full.len());
        for t in &full.types {
            let sg = s.select(t, &pidx)?;
            sigma_of.push(partial.index_of(&sg).expect("restriction is a partial type"));
            let r = s.memory_type(t, k.w_m, k.w_x, k.w_y)?;
            rho_of.push(memory.index_of(&r).expect("memory type enumerated"));
        }
        let mut mem_of_partial = Vec::new();
        if k.w_m > 0 {
            let midx: Vec<usize> = (0..k.w_m).collect();
            for t in &partial.types {
                let m = s.select(t, &midx)?;
                mem_of_partial.push(memory.index_of(&m).expect("memory type enumerated"));
            }
        }
        let vars = k.vars();
        let atom_sets = k
            .atoms
            .iter()
            .map(|a| s.iota(&a.formula, &vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tables {
            partial,
            full,
            memory,
            sigma_of,
            rho_of,
            mem_of_partial,
            atom_sets,
        })
    }

    /// Atom bit vector of a full type.
    pub fn atom_bits(&self, tau: usize) -> u64 {
        self.atom_sets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.contains(tau))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Witness full type for every feasible (σ, ρ, A), first in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityTable {
    pub n_atoms: usize,
    pub witness: BTreeMap<(usize, usize, u64), usize>,
}

impl FeasibilityTable {
    pub fn is_feasible(&self, sigma: usize, rho: usize, atoms: u64) -> bool {
        self.witness.contains_key(&(sigma, rho, atoms))
    }
}

const MAX_MINTERM_ATOMS: usize = 20;

pub fn feasible_combinations(k: &KernelSpec) -> Result<FeasibilityTable> {
    feasibility_from(&Tables::build(k)?)
}

fn feasibility_from(t: &Tables) -> Result<FeasibilityTable> {
    if t.atom_sets.len() > MAX_MINTERM_ATOMS {
        return Err(Error::ResourceCap(format!(
            "{} atoms exceed the minterm encoding limit of {MAX_MINTERM_ATOMS}",
            t.atom_sets.len()
        )));
    }
    let mut witness = BTreeMap::new();
    for tau in 0..t.full.len() {
        witness
            .entry((t.sigma_of[tau], t.rho_of[tau], t.atom_bits(tau)))
            .or_insert(tau);
    }
    Ok(FeasibilityTable {
        n_atoms: t.atom_sets.len(),
        witness,
    })
}

/// Proposition-safe form of a type rendering.
pub fn mangle(render: &str) -> String {
    render
        .chars()
        .filter_map(|c| match c {
            '=' => Some('e'),
            '<' => Some('l'),
            '|' => Some('p'),
            ' ' => Some('s'),
            '[' => Some('L'),
            ']' => Some('R'),
            ';' => Some('c'),
            '{' | '}' | '(' | ')' => None,
            c => Some(c),
        })
        .collect()
}

fn atom(name: &str) -> Ltl<String> {
    Ltl::Atom(name.to_string())
}

fn exactly_one(names: &[String]) -> Ltl<String> {
    let some = Ltl::disj(names.iter().map(|n| atom(n)));
    let mut excl = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            excl.push(Ltl::not(Ltl::and(atom(&names[i]), atom(&names[j]))));
        }
    }
    Ltl::and(some, Ltl::conj(excl))
}

fn code_bits(n: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

fn code_minterm(bits: &[String], code: usize) -> Ltl<String> {
    Ltl::conj(bits.iter().enumerate().map(|(i, b)| {
        if code >> i & 1 == 1 {
            atom(b)
        } else {
            Ltl::not(atom(b))
        }
    }))
}

/// The code carried by `bits` is below `n`.
fn code_below(bits: &[String], n: usize) -> Ltl<String> {
    if n >= 1 << bits.len() {
        return Ltl::True;
    }
    // Most significant bit first.
    let mut f = Ltl::False;
    for (i, b) in bits.iter().enumerate() {
        f = if n >> i & 1 == 1 {
            Ltl::or(Ltl::not(atom(b)), f)
        } else {
            Ltl::and(Ltl::not(atom(b)), f)
        };
    }
    simplify(f)
}

/// Removes TRUE/FALSE constants under boolean connectives.
pub fn simplify(f: Ltl<String>) -> Ltl<String> {
    match f {
        Ltl::Not(a) => match simplify(*a) {
            Ltl::True => Ltl::False,
            Ltl::False => Ltl::True,
            a => Ltl::not(a),
        },
        Ltl::And(a, b) => match (simplify(*a), simplify(*b)) {
            (Ltl::False, _) | (_, Ltl::False) => Ltl::False,
            (Ltl::True, x) | (x, Ltl::True) => x,
            (x, y) => Ltl::and(x, y),
        },
        Ltl::Or(a, b) => match (simplify(*a), simplify(*b)) {
            (Ltl::True, _) | (_, Ltl::True) => Ltl::True,
            (Ltl::False, x) | (x, Ltl::False) => x,
            (x, y) => Ltl::or(x, y),
        },
        Ltl::Implies(a, b) => match (simplify(*a), simplify(*b)) {
            (Ltl::False, _) | (_, Ltl::True) => Ltl::True,
            (Ltl::True, x) => x,
            (x, Ltl::False) => Ltl::not(x),
            (x, y) => Ltl::implies(x, y),
        },
        Ltl::Iff(a, b) => Ltl::iff(simplify(*a), simplify(*b)),
        Ltl::Next(a) => Ltl::next(simplify(*a)),
        Ltl::Yesterday(a) => Ltl::yesterday(simplify(*a)),
        Ltl::Globally(a) => match simplify(*a) {
            Ltl::True => Ltl::True,
            a => Ltl::globally(a),
        },
        Ltl::Finally(a) => Ltl::finally(simplify(*a)),
        Ltl::Until(a, b) => Ltl::until(simplify(*a), simplify(*b)),
        Ltl::Since(a, b) => Ltl::since(simplify(*a), simplify(*b)),
        leaf => leaf,
    }
}

struct Builder<'a> {
    k: &'a KernelSpec,
    t: Tables,
    mode: GuardMode,
    counters: Vec<String>,
}

impl Builder<'_> {
    fn guard(&self, g: usize) -> Ltl<String> {
        if g == 0 {
            return Ltl::True;
        }
        match self.mode {
            GuardMode::Past => Ltl::yesterday_n(g),
            GuardMode::Counter => Ltl::disj(self.counters[g..].iter().map(|c| atom(c))),
        }
    }

    /// Counter dynamics, conjoined to the guarantee in counter mode.
    fn counter_constraints(&self) -> Ltl<String> {
        let c = &self.counters;
        if c.is_empty() {
            return Ltl::True;
        }
        let last = c.len() - 1;
        let mut steps: Vec<Ltl<String>> = (0..last)
            .map(|i| Ltl::implies(atom(&c[i]), Ltl::next(atom(&c[i + 1]))))
            .collect();
        steps.push(Ltl::implies(atom(&c[last]), Ltl::next(atom(&c[last]))));
        steps.push(exactly_one(c));
        Ltl::and(atom(&c[0]), Ltl::globally(Ltl::conj(steps)))
    }

    /// φ*: atoms replaced by `guard ∧ enc(i)`.
    fn phi_star(&self, enc: impl Fn(usize) -> Ltl<String>) -> Ltl<String> {
        self.k.formula.map_atoms(&mut |&i: &usize| {
            let body = enc(i);
            match self.guard(self.k.atoms[i].guard) {
                Ltl::True => body,
                g => Ltl::and(g, body),
            }
        })
    }

    /// Ψ_I grouped by memory type: (some full type with memory ρ) → X (some σ extending ρ).
    fn psi_i(&self, full_with_rho: impl Fn(usize) -> Ltl<String>, p: impl Fn(usize) -> Ltl<String>) -> Ltl<String> {
        if self.k.w_m == 0 {
            return Ltl::True;
        }
        Ltl::conj((0..self.t.memory.len()).map(|rho| {
            let next = Ltl::disj((0..self.t.partial.len()).filter(|&s| self.t.mem_of_partial[s] == rho).map(&p));
            Ltl::implies(full_with_rho(rho), Ltl::next(next))
        }))
    }

    /// Ψ_O grouped by partial type.
    fn psi_o(&self, q: impl Fn(usize) -> Ltl<String>, p: impl Fn(usize) -> Ltl<String>) -> Ltl<String> {
        Ltl::conj((0..self.t.partial.len()).map(|s| {
            let qs = Ltl::disj((0..self.t.full.len()).filter(|&tau| self.t.sigma_of[tau] == s).map(&q));
            Ltl::implies(qs, p(s))
        }))
    }

    fn entries(&self, space: &TypeSpace, prefix: Option<&str>) -> Vec<TypeEntry> {
        space
            .types
            .iter()
            .map(|t| {
                let render = self.k.structure.render_type(t);
                TypeEntry {
                    prop: prefix.map(|p| format!("{p}_{}", mangle(&render))),
                    render,
                }
            })
            .collect()
    }

    fn meta(&self, encoding: Encoding) -> Meta {
        let named = matches!(encoding, Encoding::Naive | Encoding::Minterm | Encoding::Sat);
        Meta {
            encoding,
            guard: self.mode,
            structure: self.k.structure.to_string(),
            widths: [self.k.w_m, self.k.w_x, self.k.w_y],
            partial: self.entries(&self.t.partial, named.then_some("P")),
            full: self.entries(&self.t.full, matches!(encoding, Encoding::Naive | Encoding::Sat).then_some("Q")),
            memory: if encoding == Encoding::Minterm {
                self.entries(&self.t.memory, Some("R"))
            } else {
                Vec::new()
            },
            input_bits: Vec::new(),
            output_bits: Vec::new(),
            atoms: self
                .k
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| AtomEntry {
                    prop: (encoding == Encoding::Minterm).then(|| format!("D{}", i + 1)),
                    formula: a.formula.to_string(),
                    guard: a.guard,
                    copy: a.copy,
                })
                .collect(),
            witness: Vec::new(),
            counters: self.counters.clone(),
        }
    }
}

fn builder(k: &KernelSpec, mode: GuardMode) -> Result<Builder<'_>> {
    let t = Tables::build(k)?;
    let counters = match mode {
        GuardMode::Counter if k.max_guard() > 0 => (0..=k.max_guard()).map(|i| format!("c{i}")).collect(),
        _ => Vec::new(),
    };
    Ok(Builder { k, t, mode, counters })
}

fn props(entries: &[TypeEntry]) -> Vec<String> {
    entries.iter().filter_map(|e| e.prop.clone()).collect()
}

fn finish(
    b: &Builder<'_>,
    meta: Meta,
    inputs: Vec<String>,
    mut outputs: Vec<String>,
    assumption: Ltl<String>,
    guarantee: Ltl<String>,
) -> PropSpec {
    outputs.extend(b.counters.iter().cloned());
    let guarantee = Ltl::and(guarantee, b.counter_constraints());
    PropSpec {
        inputs,
        outputs,
        assumption: simplify(assumption),
        guarantee: simplify(guarantee),
        meta,
    }
}

pub fn translate_naive(k: &KernelSpec, mode: GuardMode) -> Result<PropSpec> {
    let b = builder(k, mode)?;
    let meta = b.meta(Encoding::Naive);
    let p_names = props(&meta.partial);
    let q_names = props(&meta.full);
    let p = |s: usize| atom(&p_names[s]);
    let q = |tau: usize| atom(&q_names[tau]);
    let phi = b.phi_star(|i| Ltl::disj(b.t.atom_sets[i].indices().map(q)));
    let q_rho = |rho: usize| Ltl::disj((0..b.t.full.len()).filter(|&tau| b.t.rho_of[tau] == rho).map(q));
    // Ψ_I binds only after a well-formed output, so the system cannot force
    // the environment into violating it by asserting two output types.
    let psi_i = Ltl::implies(exactly_one(&q_names), b.psi_i(q_rho, p));
    let assumption = Ltl::globally(Ltl::and(psi_i, exactly_one(&p_names)));
    let guarantee = Ltl::and(phi, Ltl::globally(Ltl::and(b.psi_o(q, p), exactly_one(&q_names))));
    Ok(finish(&b, meta, p_names.clone(), q_names.clone(), assumption, guarantee))
}

pub fn translate_binary(k: &KernelSpec, mode: GuardMode) -> Result<PropSpec> {
    let b = builder(k, mode)?;
    let mut meta = b.meta(Encoding::Binary);
    let (np, nf) = (b.t.partial.len(), b.t.full.len());
    meta.input_bits = (0..code_bits(np)).map(|i| format!("pb{i}")).collect();
    meta.output_bits = (0..code_bits(nf)).map(|i| format!("qb{i}")).collect();
    let (pb, qb) = (meta.input_bits.clone(), meta.output_bits.clone());
    let p = |s: usize| code_minterm(&pb, s);
    let q = |tau: usize| code_minterm(&qb, tau);
    let phi = b.phi_star(|i| Ltl::disj(b.t.atom_sets[i].indices().map(q)));
    let q_rho = |rho: usize| Ltl::disj((0..nf).filter(|&tau| b.t.rho_of[tau] == rho).map(q));
    let assumption = Ltl::globally(Ltl::and(b.psi_i(q_rho, p), code_below(&pb, np)));
    let guarantee = Ltl::and(phi, Ltl::globally(Ltl::and(b.psi_o(q, p), code_below(&qb, nf))));
    Ok(finish(&b, meta, pb.clone(), qb.clone(), assumption, guarantee))
}

pub fn translate_minterm(k: &KernelSpec, mode: GuardMode) -> Result<PropSpec> {
    let b = builder(k, mode)?;
    let table = feasibility_from(&b.t)?;
    let mut meta = b.meta(Encoding::Minterm);
    meta.witness = table
        .witness
        .iter()
        .map(|(&(sigma, rho, atoms), &tau)| WitnessEntry { sigma, rho, atoms, tau })
        .collect();
    let p_names = props(&meta.partial);
    let r_names = props(&meta.memory);
    let d_names: Vec<String> = meta.atoms.iter().filter_map(|a| a.prop.clone()).collect();
    let p = |s: usize| atom(&p_names[s]);
    let r = |rho: usize| atom(&r_names[rho]);
    let phi = b.phi_star(|i| atom(&d_names[i]));
    // Φ_δ: one clause per infeasible (σ, ρ, A).
    let n = d_names.len();
    let mut clauses = Vec::new();
    for s in 0..b.t.partial.len() {
        for rho in 0..b.t.memory.len() {
            for a in 0..1u64 << n {
                if !table.is_feasible(s, rho, a) {
                    let lits = (0..n).map(|i| {
                        if a >> i & 1 == 1 {
                            atom(&d_names[i])
                        } else {
                            Ltl::not(atom(&d_names[i]))
                        }
                    });
                    let pattern = Ltl::conj([p(s), r(rho)].into_iter().chain(lits));
                    clauses.push(Ltl::not(pattern));
                }
            }
        }
    }
    let psi_i = Ltl::implies(exactly_one(&r_names), b.psi_i(r, p));
    let assumption = Ltl::globally(Ltl::and(psi_i, exactly_one(&p_names)));
    let guarantee = Ltl::and(phi, Ltl::globally(Ltl::and(exactly_one(&r_names), Ltl::conj(clauses))));
    let mut outputs = d_names.clone();
    outputs.extend(r_names.iter().cloned());
    Ok(finish(&b, meta, p_names.clone(), outputs, assumption, guarantee))
}

/// Satisfiability form: φ* ∧ G(Φ_I ∧ Φ_O ∧ Ψ_O ∧ Ψ_I) over the naive propositions.
pub fn translate_sat(k: &KernelSpec, mode: GuardMode) -> Result<PropSpec> {
    let b = builder(k, mode)?;
    let meta = b.meta(Encoding::Sat);
    let p_names = props(&meta.partial);
    let q_names = props(&meta.full);
    let p = |s: usize| atom(&p_names[s]);
    let q = |tau: usize| atom(&q_names[tau]);
    let phi = b.phi_star(|i| Ltl::disj(b.t.atom_sets[i].indices().map(q)));
    let q_rho = |rho: usize| Ltl::disj((0..b.t.full.len()).filter(|&tau| b.t.rho_of[tau] == rho).map(q));
    let frame = Ltl::conj([exactly_one(&p_names), exactly_one(&q_names), b.psi_o(q, p), b.psi_i(q_rho, p)]);
    let guarantee = Ltl::and(phi, Ltl::globally(frame));
    let mut all = p_names.clone();
    all.extend(q_names.iter().cloned());
    Ok(finish(&b, meta, Vec::new(), all, Ltl::True, guarantee))
}

pub fn translate(k: &KernelSpec, encoding: Encoding, mode: GuardMode) -> Result<PropSpec> {
    match encoding {
        Encoding::Naive => translate_naive(k, mode),
        Encoding::Binary => translate_binary(k, mode),
        Encoding::Minterm => translate_minterm(k, mode),
        Encoding::Sat => translate_sat(k, mode),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;
    use crate::translate::kernel::{reduce_to_kernel, GuardDepth};

    fn kernel(src: &str) -> KernelSpec {
        reduce_to_kernel(&parse_spec(src).unwrap(), GuardDepth::AtomLag).unwrap()
    }

    const ECHO: &str = "structure eq; spec G { y = x }";
    const EQ_MEM: &str = "structure eq; lookback 1; spec G { x = y[-1] }";
    const DLO_MEM: &str = "structure dlo; lookback 1; spec G { y < y[-1] }";

    fn count(p: &PropSpec) -> (usize, usize) {
        (p.inputs.len(), p.outputs.len())
    }

    #[test]
    fn naive_counts() {
        let echo = translate_naive(&kernel(ECHO), GuardMode::Past).unwrap();
        assert_eq!(count(&echo), (1, 2));
        assert_eq!(echo.assumption, Ltl::globally(atom("P_1")));
        assert_eq!(count(&translate_naive(&kernel(EQ_MEM), GuardMode::Past).unwrap()), (2, 5));
        assert_eq!(count(&translate_naive(&kernel(DLO_MEM), GuardMode::Past).unwrap()), (3, 13));
    }

    #[test]
    fn binary_counts() {
        assert_eq!(count(&translate_binary(&kernel(EQ_MEM), GuardMode::Past).unwrap()), (1, 3));
        assert_eq!(count(&translate_binary(&kernel(DLO_MEM), GuardMode::Past).unwrap()), (2, 4));
        let echo = translate_binary(&kernel(ECHO), GuardMode::Past).unwrap();
        assert_eq!(count(&echo), (0, 1));
        assert_eq!(echo.assumption, Ltl::True);
    }

    #[test]
    fn minterm_counts() {
        let eq = translate_minterm(&kernel(EQ_MEM), GuardMode::Past).unwrap();
        assert_eq!(eq.inputs.len(), 2);
        assert_eq!(eq.inputs, ["P_1s2", "P_1p2"]);
        assert_eq!(eq.outputs, ["D1", "R_1"]);
        let dlo = translate_minterm(&kernel("structure dlo; lookback 1; spec G ({y < x} & { y = y[-1] | !(y = y[-1]) })"), GuardMode::Past);
        assert!(dlo.is_ok());
    }

    #[test]
    fn mangled_names() {
        assert_eq!(mangle("{1 3|2}"), "1s3p2");
        assert_eq!(mangle("1=2<3"), "1e2l3");
        assert_eq!(mangle("[{1 2};1<2]"), "L1s2c1l2R");
    }

    #[test]
    fn feasibility_examples() {
        // Memory m, input x, output y over eq.
        let k = kernel("structure eq; lookback 1; spec G ({ x = y } & { y[-1] = y })");
        let t = Tables::build(&k).unwrap();
        let table = feasibility_from(&t).unwrap();
        let s = &k.structure;
        let sigma = t.partial.index_of(&s.parse_type(2, "{1|2}").unwrap()).unwrap();
        // Atoms in order: x1 = y1, m1 = y1.
        assert!(!table.is_feasible(sigma, 0, 0b11));
        assert!(table.is_feasible(sigma, 0, 0b01));
        let w = table.witness[&(sigma, 0, 0b01)];
        assert_eq!(s.render_type(&t.full.types[w]), "{1|2 3}");
        // Every witness restricts to its σ.
        for (&(sg, rho, a), &tau) in &table.witness {
            assert_eq!(t.sigma_of[tau], sg);
            assert_eq!(t.rho_of[tau], rho);
            assert_eq!(t.atom_bits(tau), a);
        }
    }

    #[test]
    fn empty_delta_is_extension_relation() {
        let k = kernel("structure dlo; lookback 1; spec TRUE");
        let t = Tables::build(&k).unwrap();
        let table = feasibility_from(&t).unwrap();
        assert_eq!(table.n_atoms, 0);
        // Every partial type extends, and the memory type is always the single 1-type.
        assert_eq!(table.witness.len(), t.partial.len());
    }

    #[test]
    fn counter_guards() {
        let p = translate_naive(&kernel(EQ_MEM), GuardMode::Counter).unwrap();
        assert!(p.outputs.ends_with(&["c0".to_string(), "c1".to_string()]));
        assert!(p.formula().find_past().is_none());
        let past = translate_naive(&kernel(EQ_MEM), GuardMode::Past).unwrap();
        assert!(past.formula().find_past().is_some());
    }

    #[test]
    fn code_below_examples() {
        let bits: Vec<String> = (0..3).map(|i| format!("b{i}")).collect();
        let f = code_below(&bits, 5);
        for code in 0..8usize {
            let v = crate::ltl::eval_lasso(&f, 0, 1, |a: &String, _| {
                let i: usize = a[1..].parse().unwrap();
                code >> i & 1 == 1
            });
            assert_eq!(v, code < 5, "code {code}");
        }
        assert_eq!(code_below(&bits, 8), Ltl::True);
    }
}
