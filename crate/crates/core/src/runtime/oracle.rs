//! Trace semantics evaluated directly on concrete values, and the bridge to
//! propositional traces.

use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::backend::Lasso;
use crate::error::{Error, Result};
use crate::fixpoint::eliminate_fixpoints;
use crate::fo::Formula;
use crate::ltl::{eval_lasso, Ltl};
use crate::parse::{StreamRef, SurfaceSpec};
use crate::structure::{Element, Structure, TypeSet};
use crate::translate::{Encoding, GuardDepth, KernelSpec, PropSpec, Tables};

use super::trace::{ConcreteTrace, Step};

struct AtomInfo {
    refs: Vec<StreamRef>,
    vars: Vec<String>,
    set: TypeSet,
    guard: usize,
}

/// Type sets of every atom of the specification, keyed by the atom.
fn atom_table(spec: &SurfaceSpec, depth: GuardDepth) -> Result<BTreeMap<Formula, AtomInfo>> {
    let mut atoms = Vec::new();
    spec.formula.for_each_atom(&mut |a: &Formula| atoms.push(a.clone()));
    let mut out = BTreeMap::new();
    for a in atoms {
        if out.contains_key(&a) {
            continue;
        }
        let body = if a.has_fixpoints() {
            eliminate_fixpoints(&spec.structure, &a)?.formula
        } else {
            a.clone()
        };
        let mut vars = Vec::new();
        let mut refs = Vec::new();
        for v in body.free_vars() {
            if let Some(r) = StreamRef::from_name(&v) {
                vars.push(v);
                refs.push(r);
            }
        }
        let guard = match depth {
            GuardDepth::AtomLag => refs.iter().map(|r| r.lag).max().unwrap_or(0),
            GuardDepth::Lookback => spec.lookback,
        };
        let set = spec.structure.iota(&body, &vars)?;
        out.insert(a, AtomInfo { refs, vars, set, guard });
    }
    Ok(out)
}

fn atom_truth(s: &Structure, info: &AtomInfo, t: usize, step: &dyn Fn(usize) -> Step) -> Result<bool> {
    if t < info.guard {
        return Ok(false);
    }
    if info.vars.is_empty() {
        return Ok(!info.set.is_empty());
    }
    let values: Vec<Element> = info
        .refs
        .iter()
        .map(|r| {
            let st = step(t - r.lag);
            if r.output {
                st.outputs[r.index - 1].clone()
            } else {
                st.inputs[r.index - 1].clone()
            }
        })
        .collect();
    let idx = s.type_index(&s.type_of(&values)?)?;
    Ok(info.set.contains(idx))
}

fn check_streams(spec: &SurfaceSpec, tr: &ConcreteTrace) -> Result<()> {
    for r in spec.stream_refs() {
        if r.index == 0 || r.index > spec.streams {
            return Err(Error::Undeclared { kind: "stream", name: r.name() });
        }
    }
    tr.check_widths(&spec.structure, spec.streams)
}

/// Truth of the specification at time 0 of the lasso trace. Atoms are false
/// before their guard depth.
pub fn check_trace(spec: &SurfaceSpec, tr: &ConcreteTrace, depth: GuardDepth) -> Result<bool> {
    check_streams(spec, tr)?;
    let table = atom_table(spec, depth)?;
    let err = RefCell::new(None);
    let step = |t: usize| tr.at(t).clone();
    let v = eval_lasso(&spec.formula, tr.prefix.len(), tr.period.len(), |a: &Formula, t| {
        match atom_truth(&spec.structure, &table[a], t, &step) {
            Ok(b) => b,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                false
            }
        }
    });
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

fn kand(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn kor(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    kand(a.map(|x| !x), b.map(|x| !x)).map(|x| !x)
}

fn eval3(f: &Ltl<Formula>, n: usize, atom: &mut dyn FnMut(&Formula, usize) -> bool) -> Vec<Option<bool>> {
    let un = |f: &Ltl<Formula>, atom: &mut dyn FnMut(&Formula, usize) -> bool| eval3(f, n, atom);
    match f {
        Ltl::True => vec![Some(true); n],
        Ltl::False => vec![Some(false); n],
        Ltl::Atom(a) => (0..n).map(|t| Some(atom(a, t))).collect(),
        Ltl::Not(a) => un(a, atom).into_iter().map(|v| v.map(|b| !b)).collect(),
        Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Iff(a, b) => {
            let (x, y) = (un(a, atom), un(b, atom));
            x.into_iter()
                .zip(y)
                .map(|(p, q)| match f {
                    Ltl::And(..) => kand(p, q),
                    Ltl::Or(..) => kor(p, q),
                    Ltl::Implies(..) => kor(p.map(|b| !b), q),
                    _ => p.zip(q).map(|(p, q)| p == q),
                })
                .collect()
        }
        Ltl::Next(a) => {
            let x = un(a, atom);
            (0..n).map(|t| x.get(t + 1).copied().flatten()).collect()
        }
        Ltl::Yesterday(a) => {
            let x = un(a, atom);
            (0..n).map(|t| if t == 0 { Some(false) } else { x[t - 1] }).collect()
        }
        Ltl::Globally(a) | Ltl::Finally(a) => {
            let x = un(a, atom);
            let mut out = vec![None; n];
            let mut next = None;
            for t in (0..n).rev() {
                next = if matches!(f, Ltl::Globally(_)) { kand(x[t], next) } else { kor(x[t], next) };
                out[t] = next;
            }
            out
        }
        Ltl::Until(a, b) => {
            let (x, y) = (un(a, atom), un(b, atom));
            let mut out = vec![None; n];
            let mut next = None;
            for t in (0..n).rev() {
                next = kor(y[t], kand(x[t], next));
                out[t] = next;
            }
            out
        }
        Ltl::Since(a, b) => {
            let (x, y) = (un(a, atom), un(b, atom));
            let mut out = vec![None; n];
            let mut prev = Some(false);
            for t in 0..n {
                prev = kor(y[t], kand(x[t], prev));
                out[t] = prev;
            }
            out
        }
    }
}

/// Three-valued verdict on a finite run: `Some(false)` when every
/// continuation violates the specification, `Some(true)` when every
/// continuation satisfies it, `None` otherwise.
pub fn check_prefix(spec: &SurfaceSpec, steps: &[Step], depth: GuardDepth) -> Result<Option<bool>> {
    if steps.is_empty() {
        return Ok(None);
    }
    let tr = ConcreteTrace::new(Vec::new(), steps.to_vec())?;
    check_streams(spec, &tr)?;
    let table = atom_table(spec, depth)?;
    let mut err = None;
    let step = |t: usize| steps[t].clone();
    let v = eval3(&spec.formula, steps.len(), &mut |a, t| {
        match atom_truth(&spec.structure, &table[a], t, &step) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v[0]),
    }
}

/// Kernel-level values at each step of a trace: memory, inputs, window.
pub(crate) fn kernel_tuple(k: &KernelSpec, tr: &dyn Fn(usize) -> Step, t: usize) -> Vec<Element> {
    let seed = k.structure.seed_element();
    let window = |t: Option<usize>| -> Vec<Element> {
        k.window
            .iter()
            .map(|r| match t {
                Some(t) if t >= r.lag => {
                    let st = tr(t - r.lag);
                    if r.output {
                        st.outputs[r.index - 1].clone()
                    } else {
                        st.inputs[r.index - 1].clone()
                    }
                }
                _ => seed.clone(),
            })
            .collect()
    };
    let mut out = if k.w_m == 0 { Vec::new() } else { window(t.checked_sub(1)) };
    out.extend(tr(t).inputs);
    out.extend(window(Some(t)));
    out
}

/// The propositional trace of `p` induced by a concrete trace: each step's
/// partial and full kernel types encoded per the metadata. The result is a
/// lasso over `p.inputs` followed by `p.outputs`.
pub fn encode_trace(k: &KernelSpec, p: &PropSpec, tr: &ConcreteTrace) -> Result<Lasso> {
    tr.check_widths(&k.structure, k.streams)?;
    let tables = Tables::build(k)?;
    let m = &p.meta;
    let s = &k.structure;
    let settle = k.lookback.max(m.counters.len());
    let prefix_len = tr.prefix.len() + settle;
    let n = prefix_len + tr.period.len();
    let props: Vec<String> = p.inputs.iter().chain(&p.outputs).cloned().collect();
    let step = |t: usize| tr.at(t).clone();
    let mut letters = Vec::with_capacity(n);
    let pa = k.partial_arity();
    for t in 0..n {
        let full = kernel_tuple(k, &step, t);
        let sigma = s.type_index(&s.type_of(&full[..pa])?)?;
        let tau = s.type_index(&s.type_of(&full)?)?;
        let mut on: Vec<&str> = Vec::new();
        let name = |e: &crate::translate::TypeEntry| e.prop.clone();
        let bits = |names: &[String], code: usize| -> Vec<String> {
            names.iter().enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, b)| b.clone()).collect()
        };
        let mut owned: Vec<String> = Vec::new();
        match m.encoding {
            Encoding::Naive | Encoding::Sat => {
                owned.extend(name(&m.partial[sigma]));
                owned.extend(name(&m.full[tau]));
            }
            Encoding::Binary => {
                owned.extend(bits(&m.input_bits, sigma));
                owned.extend(bits(&m.output_bits, tau));
            }
            Encoding::Minterm => {
                owned.extend(name(&m.partial[sigma]));
                owned.extend(name(&m.memory[tables.rho_of[tau]]));
                let a = tables.atom_bits(tau);
                for (i, e) in m.atoms.iter().enumerate() {
                    if a >> i & 1 == 1 {
                        owned.extend(e.prop.clone());
                    }
                }
            }
        }
        if !m.counters.is_empty() {
            owned.push(m.counters[t.min(m.counters.len() - 1)].clone());
        }
        on.extend(owned.iter().map(String::as_str));
        letters.push(props.iter().map(|q| on.contains(&q.as_str())).collect::<Vec<bool>>());
    }
    let period = letters.split_off(prefix_len);
    Ok(Lasso {
        props,
        prefix: letters,
        period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;
    use crate::translate::{reduce_to_kernel, translate, GuardMode};

    fn nat(v: &[(u64, u64)]) -> Vec<Step> {
        v.iter()
            .map(|&(x, y)| Step {
                inputs: vec![Element::Nat(x)],
                outputs: vec![Element::Nat(y)],
            })
            .collect()
    }

    #[test]
    fn echo_traces() {
        let spec = parse_spec("structure eq; spec G { y = x }").unwrap();
        let good = ConcreteTrace::new(vec![], nat(&[(1, 1)])).unwrap();
        assert!(check_trace(&spec, &good, GuardDepth::AtomLag).unwrap());
        let bad = ConcreteTrace::new(nat(&[(1, 2)]), nat(&[(1, 1)])).unwrap();
        assert!(!check_trace(&spec, &bad, GuardDepth::AtomLag).unwrap());
        assert_eq!(check_prefix(&spec, &nat(&[(1, 1), (2, 2)]), GuardDepth::AtomLag).unwrap(), None);
        assert_eq!(check_prefix(&spec, &nat(&[(1, 1), (2, 3)]), GuardDepth::AtomLag).unwrap(), Some(false));
    }

    #[test]
    fn early_positions_are_false() {
        let spec = parse_spec("structure eq; lookback 1; spec { y = y[-1] } | X { y = y[-1] }").unwrap();
        let tr = ConcreteTrace::new(vec![], nat(&[(0, 5)])).unwrap();
        // Position 0 has no predecessor; position 1 does.
        assert!(check_trace(&spec, &tr, GuardDepth::AtomLag).unwrap());
        let only_now = parse_spec("structure eq; lookback 1; spec { y = y[-1] }").unwrap();
        assert!(!check_trace(&only_now, &tr, GuardDepth::AtomLag).unwrap());
        let lag0 = parse_spec("structure eq; lookback 1; spec { y = x }").unwrap();
        let tr0 = ConcreteTrace::new(vec![], nat(&[(5, 5)])).unwrap();
        assert!(check_trace(&lag0, &tr0, GuardDepth::AtomLag).unwrap());
        assert!(!check_trace(&lag0, &tr0, GuardDepth::Lookback).unwrap());
    }

    #[test]
    fn descending_loop_is_rejected() {
        let spec = parse_spec("structure dlo; lookback 1; spec G (YTRUE -> { x < x[-1] })").unwrap();
        let q = |n: i64| Element::Rat(num_rational::BigRational::from_integer(n.into()));
        let st = |n| Step {
            inputs: vec![q(n)],
            outputs: vec![q(0)],
        };
        let tr = ConcreteTrace::new(vec![st(2)], vec![st(1), st(0)]).unwrap();
        assert!(!check_trace(&spec, &tr, GuardDepth::AtomLag).unwrap());
    }

    #[test]
    fn encoded_echo_trace() {
        let spec = parse_spec("structure eq; spec G { y = x }").unwrap();
        let k = reduce_to_kernel(&spec, GuardDepth::AtomLag).unwrap();
        let p = translate(&k, Encoding::Naive, GuardMode::Past).unwrap();
        let tr = ConcreteTrace::new(nat(&[(1, 2)]), nat(&[(1, 1)])).unwrap();
        let l = encode_trace(&k, &p, &tr).unwrap();
        let q_eq = l.props.iter().position(|p| p == "Q_1s2").unwrap();
        assert!(!l.letter(0)[q_eq]);
        assert!(l.letter(1)[q_eq] && l.letter(5)[q_eq]);
        assert!(l.satisfies(&p.assumption));
        assert_eq!(l.satisfies(&p.guarantee), check_trace(&spec, &tr, GuardDepth::AtomLag).unwrap());
    }
}
