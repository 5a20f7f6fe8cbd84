//! A Mealy machine over type propositions run as a program on data values.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::backend::MealyMachine;
use crate::error::{Error, Result};
use crate::structure::{Element, TypeSpace};
use crate::translate::{CopySource, Encoding, KernelSpec, Meta, Tables};

#[cfg(test)]
use super::oracle::kernel_tuple;
use super::trace::{format_tuple, ConcreteTrace, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub t: usize,
    pub inputs: Vec<Element>,
    pub sigma: usize,
    /// Machine state before the step.
    pub state: usize,
    pub tau: usize,
    /// The full output window chosen by the witness rules.
    pub window: Vec<Element>,
    pub outputs: Vec<Element>,
}

pub struct Transducer {
    machine: MealyMachine,
    kernel: KernelSpec,
    meta: Meta,
    partial: Arc<TypeSpace>,
    full: Arc<TypeSpace>,
    witness: BTreeMap<(usize, usize, u64), usize>,
    state: usize,
    memory: Vec<Element>,
    t: usize,
}

fn expected_props(meta: &Meta) -> (BTreeSet<String>, BTreeSet<String>) {
    let named = |v: &[crate::translate::TypeEntry]| v.iter().filter_map(|e| e.prop.clone()).collect::<BTreeSet<_>>();
    let (i, mut o) = match meta.encoding {
        Encoding::Binary => (
            meta.input_bits.iter().cloned().collect(),
            meta.output_bits.iter().cloned().collect(),
        ),
        Encoding::Minterm => {
            let mut o = named(&meta.memory);
            o.extend(meta.atoms.iter().filter_map(|a| a.prop.clone()));
            (named(&meta.partial), o)
        }
        Encoding::Naive | Encoding::Sat => (named(&meta.partial), named(&meta.full)),
    };
    o.extend(meta.counters.iter().cloned());
    (i, o)
}

impl Transducer {
    /// Wraps a machine synthesized for the translation of `kernel` with the
    /// given metadata. The metadata must come from translating this kernel.
    pub fn new(machine: MealyMachine, meta: &Meta, kernel: &KernelSpec) -> Result<Transducer> {
        if meta.encoding == Encoding::Sat {
            return Err(Error::Precondition("satisfiability encodings have no strategies".into()));
        }
        let s = &kernel.structure;
        let mismatch = |what: &str| Error::Precondition(format!("machine metadata does not match the specification: {what}"));
        if meta.structure != s.to_string() {
            return Err(mismatch(&format!("structure {} vs {s}", meta.structure)));
        }
        if meta.widths != [kernel.w_m, kernel.w_x, kernel.w_y] {
            return Err(mismatch("widths"));
        }
        let tables = Tables::build(kernel)?;
        let agree = |entries: &[crate::translate::TypeEntry], space: &TypeSpace| {
            entries.len() == space.len() && entries.iter().zip(&space.types).all(|(e, t)| e.render == s.render_type(t))
        };
        if !agree(&meta.partial, &tables.partial) || !agree(&meta.full, &tables.full) {
            return Err(mismatch("type tables"));
        }
        if meta.atoms.len() != kernel.atoms.len()
            || meta.atoms.iter().zip(&kernel.atoms).any(|(a, b)| a.formula != b.formula.to_string())
        {
            return Err(mismatch("atoms"));
        }
        let (ins, outs) = expected_props(meta);
        let m_in: BTreeSet<String> = machine.inputs.iter().cloned().collect();
        let m_out: BTreeSet<String> = machine.outputs.iter().cloned().collect();
        if m_in != ins || m_out != outs {
            return Err(mismatch("proposition names"));
        }
        let witness = meta.witness.iter().map(|w| ((w.sigma, w.rho, w.atoms), w.tau)).collect();
        let memory = vec![s.seed_element(); kernel.w_m];
        Ok(Transducer {
            machine,
            kernel: kernel.clone(),
            meta: meta.clone(),
            partial: tables.partial.clone(),
            full: tables.full.clone(),
            witness,
            state: 0,
            memory,
            t: 0,
        }
        .reset())
    }

    fn reset(mut self) -> Self {
        self.state = self.machine.init;
        self.memory = vec![self.kernel.structure.seed_element(); self.kernel.w_m];
        self.t = 0;
        self
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn memory(&self) -> &[Element] {
        &self.memory
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn render_partial(&self, sigma: usize) -> String {
        self.kernel.structure.render_type(&self.partial.types[sigma])
    }

    pub fn render_full(&self, tau: usize) -> String {
        self.kernel.structure.render_type(&self.full.types[tau])
    }

    fn encode_sigma(&self, sigma: usize) -> Vec<bool> {
        let on = |name: &String| match self.meta.encoding {
            Encoding::Binary => {
                let b = self.meta.input_bits.iter().position(|x| x == name).expect("checked names");
                sigma >> b & 1 == 1
            }
            _ => self.meta.partial[sigma].prop.as_ref() == Some(name),
        };
        self.machine.inputs.iter().map(on).collect()
    }

    fn decode_tau(&self, sigma: usize, out: &[bool]) -> Result<usize> {
        let value: HashMap<&str, bool> = self.machine.outputs.iter().map(String::as_str).zip(out.iter().copied()).collect();
        let one_of = |entries: &[crate::translate::TypeEntry], what: &str| -> Result<usize> {
            let on: Vec<usize> = entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.prop.as_deref().is_some_and(|p| value[p]))
                .map(|(i, _)| i)
                .collect();
            match on[..] {
                [i] => Ok(i),
                _ => Err(Error::Decode(format!("{} {what} propositions hold at once", on.len()))),
            }
        };
        match self.meta.encoding {
            Encoding::Naive | Encoding::Sat => one_of(&self.meta.full, "output type"),
            Encoding::Binary => {
                let code = self
                    .meta
                    .output_bits
                    .iter()
                    .enumerate()
                    .fold(0usize, |c, (i, b)| c | (value[b.as_str()] as usize) << i);
                if code >= self.full.len() {
                    return Err(Error::Decode(format!("output code {code} names no type")));
                }
                Ok(code)
            }
            Encoding::Minterm => {
                let rho = one_of(&self.meta.memory, "memory type")?;
                let atoms = self
                    .meta
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.prop.as_deref().is_some_and(|p| value[p]))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                self.witness
                    .get(&(sigma, rho, atoms))
                    .copied()
                    .ok_or_else(|| Error::Decode(format!("no witness type for ({sigma}, {rho}, {atoms:b})")))
            }
        }
    }

    /// Consumes one input tuple and produces the output tuple.
    pub fn step(&mut self, inputs: &[Element]) -> Result<StepRecord> {
        let k = &self.kernel;
        let s = &k.structure;
        if inputs.len() != k.w_x {
            return Err(Error::Arity(format!("{} inputs for {} streams", inputs.len(), k.w_x)));
        }
        let mut mx = self.memory.clone();
        mx.extend(inputs.iter().cloned());
        let sigma = self.partial.index_of(&s.type_of(&mx)?).expect("partial types are enumerated");
        let letter = self.encode_sigma(sigma);
        let (out, next) = self.machine.step(self.state, &letter);
        let out = out.clone();
        let tau = self.decode_tau(sigma, &out)?;
        let t_full = &self.full.types[tau];
        let pinned: Vec<(usize, Element)> = k
            .copies
            .iter()
            .map(|c| {
                let v = match c.source {
                    CopySource::Input(i) => inputs[i].clone(),
                    CopySource::Memory(j) => self.memory[j].clone(),
                };
                (c.slot, v)
            })
            .collect();
        let window = s.extend_witness_pinned(&mx, t_full, &pinned)?;
        let mut all = mx;
        all.extend(window.iter().cloned());
        if &s.type_of(&all)? != t_full {
            return Err(Error::Decode(format!("witness does not realize {}", s.render_type(t_full))));
        }
        let rec = StepRecord {
            t: self.t,
            inputs: inputs.to_vec(),
            sigma,
            state: self.state,
            tau,
            outputs: k.output_slots.iter().map(|&i| window[i].clone()).collect(),
            window: window.clone(),
        };
        if k.w_m > 0 {
            self.memory = window;
        }
        self.state = next;
        self.t += 1;
        Ok(rec)
    }

    /// Tab-separated log line: step, inputs, σ, machine state, τ, outputs.
    pub fn log_line(&self, r: &StepRecord) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.t,
            format_tuple(&r.inputs),
            self.render_partial(r.sigma),
            r.state,
            self.render_full(r.tau),
            format_tuple(&r.outputs)
        )
    }
}

pub struct Simulation {
    pub records: Vec<StepRecord>,
    pub steps: Vec<Step>,
    /// The run as an exact lasso, when a configuration repeated.
    pub lasso: Option<ConcreteTrace>,
}

/// Runs the transducer from its initial configuration on the inputs
/// `prefix · period^ω`. At least `steps` steps are taken (fewer only when the
/// inputs run out). With a nonempty period the run continues, for at most
/// `search` further steps, until a configuration (machine state, memory,
/// input position) repeats, which closes the run into an exact lasso.
pub fn simulate(
    t: &mut Transducer,
    prefix: &[Vec<Element>],
    period: &[Vec<Element>],
    steps: usize,
    search: usize,
) -> Result<Simulation> {
    t.memory = vec![t.kernel.structure.seed_element(); t.kernel.w_m];
    t.state = t.machine.init;
    t.t = 0;
    let mut seen: HashMap<(usize, Vec<Element>, usize), usize> = HashMap::new();
    let mut records = Vec::new();
    let mut run = Vec::new();
    let mut lasso = None;
    let limit = steps.saturating_add(if period.is_empty() { 0 } else { search });
    for i in 0..limit {
        let pos = if i < prefix.len() {
            i
        } else if period.is_empty() {
            break;
        } else {
            prefix.len() + (i - prefix.len()) % period.len()
        };
        if i >= prefix.len() && lasso.is_none() {
            let key = (t.state, t.memory.clone(), pos);
            if let Some(&j) = seen.get(&key) {
                lasso = Some(ConcreteTrace::new(run[..j].to_vec(), run[j..].to_vec())?);
            } else {
                seen.insert(key, i);
            }
        }
        if lasso.is_some() && i >= steps {
            break;
        }
        let x = if pos < prefix.len() { &prefix[pos] } else { &period[pos - prefix.len()] };
        let r = t.step(x)?;
        run.push(Step {
            inputs: x.clone(),
            outputs: r.outputs.clone(),
        });
        records.push(r);
    }
    if lasso.is_none() && !period.is_empty() && run.len() >= prefix.len() {
        // The loop may close exactly at the last step taken.
        let i = run.len();
        let pos = prefix.len() + (i - prefix.len()) % period.len();
        if let Some(&j) = seen.get(&(t.state, t.memory.clone(), pos)) {
            lasso = Some(ConcreteTrace::new(run[..j].to_vec(), run[j..].to_vec())?);
        }
    }
    Ok(Simulation {
        records,
        steps: run,
        lasso,
    })
}

/// Concrete kernel tuple at step `t` of a run, as the transducer sees it.
#[cfg(test)]
pub(crate) fn tuple_at(k: &KernelSpec, run: &[Step], t: usize) -> Vec<Element> {
    kernel_tuple(k, &|i| run[i].clone(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{realize, RealizeOptions, Verdict};
    use crate::parse::parse_spec;
    use crate::runtime::check_trace;
    use crate::translate::{reduce_to_kernel, translate, GuardDepth, GuardMode};
    use num_rational::BigRational;

    fn transducer(src: &str, enc: Encoding) -> (crate::parse::SurfaceSpec, Transducer) {
        let spec = parse_spec(src).unwrap();
        let k = reduce_to_kernel(&spec, GuardDepth::AtomLag).unwrap();
        let p = translate(&k, enc, GuardMode::Past).unwrap();
        let Verdict::Realizable(m) = realize(&p.formula(), &p.inputs, &p.outputs, &RealizeOptions::default()).unwrap()
        else {
            panic!("{src} should be realizable")
        };
        let t = Transducer::new(m, &p.meta, &k).unwrap();
        (spec, t)
    }

    fn nats(v: &[u64]) -> Vec<Vec<Element>> {
        v.iter().map(|&n| vec![Element::Nat(n)]).collect()
    }

    #[test]
    fn echo_copies_inputs() {
        for enc in [Encoding::Naive, Encoding::Binary, Encoding::Minterm] {
            let (_, mut t) = transducer("structure eq; spec G { y = x }", enc);
            let sim = simulate(&mut t, &nats(&[3, 9, 3]), &[], 3, 0).unwrap();
            let outs: Vec<String> = sim.steps.iter().map(|s| format_tuple(&s.outputs)).collect();
            assert_eq!(outs, ["3", "9", "3"], "{enc:?}");
        }
    }

    #[test]
    fn fresh_value_for_inequality() {
        let (_, mut t) = transducer("structure eq; spec G { y != x }", Encoding::Naive);
        let r = t.step(&[Element::Nat(0)]).unwrap();
        assert_eq!(r.outputs, vec![Element::Nat(1)]);
    }

    #[test]
    fn dlo_below_input() {
        let (spec, mut t) = transducer("structure dlo; spec G { y < x }", Encoding::Naive);
        let zero = vec![Element::Rat(BigRational::from_integer(0.into()))];
        let sim = simulate(&mut t, &[], &[zero], 2, 50).unwrap();
        let outs: Vec<String> = sim.steps.iter().map(|s| format_tuple(&s.outputs)).collect();
        assert_eq!(outs[..2], ["-1/1", "-1/1"]);
        let lasso = sim.lasso.unwrap();
        assert!(check_trace(&spec, &lasso, GuardDepth::AtomLag).unwrap());
    }

    #[test]
    fn memory_threads_previous_window() {
        let (spec, mut t) = transducer("structure eq; lookback 1; spec G (YTRUE -> { y = x[-1] })", Encoding::Naive);
        let sim = simulate(&mut t, &nats(&[4, 7]), &nats(&[1, 2, 3]), 6, 100).unwrap();
        for w in sim.records.windows(2) {
            let k = t.kernel();
            assert_eq!(tuple_at(k, &sim.steps, w[1].t)[..k.w_m], w[0].window[..]);
        }
        let lasso = sim.lasso.unwrap();
        assert!(check_trace(&spec, &lasso, GuardDepth::AtomLag).unwrap());
    }
}
