//! Reduction of a surface specification to (memory, input, output) form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixpoint::eliminate_fixpoints;
use crate::fo::{var, Formula, Term};
use crate::ltl::Ltl;
use crate::parse::{StreamRef, SurfaceSpec};
use crate::structure::Structure;

/// How far into the run an original atom is forced false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuardDepth {
    /// The largest lag the atom refers to.
    #[default]
    AtomLag,
    /// The declared lookback, for every original atom.
    Lookback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelAtom {
    /// Formula over `m1.., x1.., y1..`.
    pub formula: Formula,
    /// The atom is false at steps `t < guard`.
    pub guard: usize,
    pub copy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopySource {
    /// Current input stream (0-based).
    Input(usize),
    /// Memory slot (0-based).
    Memory(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyConstraint {
    /// Output slot (0-based) that must equal `source`.
    pub slot: usize,
    pub source: CopySource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSpec {
    pub structure: Structure,
    pub streams: usize,
    pub lookback: usize,
    pub w_m: usize,
    pub w_x: usize,
    pub w_y: usize,
    /// Meaning of each output slot: which stream at which lag it holds.
    pub window: Vec<StreamRef>,
    pub atoms: Vec<KernelAtom>,
    /// Rewritten specification conjoined with `G(copies)`; atoms index `atoms`.
    pub formula: Ltl<usize>,
    pub copies: Vec<CopyConstraint>,
    /// Output slot of each original output stream at lag 0.
    pub output_slots: Vec<usize>,
}

impl KernelSpec {
    /// Names of the full-state coordinates in order: memory, inputs, outputs.
    pub fn vars(&self) -> Vec<String> {
        let m = (1..=self.w_m).map(|i| format!("m{i}"));
        let x = (1..=self.w_x).map(|i| format!("x{i}"));
        let y = (1..=self.w_y).map(|i| format!("y{i}"));
        m.chain(x).chain(y).collect()
    }

    pub fn partial_arity(&self) -> usize {
        self.w_m + self.w_x
    }

    pub fn full_arity(&self) -> usize {
        self.w_m + self.w_x + self.w_y
    }

    pub fn max_guard(&self) -> usize {
        self.atoms.iter().map(|a| a.guard).max().unwrap_or(0)
    }
}

fn slot_order(r: &StreamRef) -> (usize, bool, usize) {
    (r.lag, r.output, r.index)
}

/// Builds the kernel form. Fixpoints inside atoms are eliminated first.
pub fn reduce_to_kernel(spec: &SurfaceSpec, depth: GuardDepth) -> Result<KernelSpec> {
    let s = spec.streams;
    let ell = spec.lookback;
    let structure = spec.structure.clone();

    // Window of auxiliary outputs.
    let (window, w_m) = if ell == 0 {
        ((1..=s).map(|i| StreamRef { output: true, index: i, lag: 0 }).collect::<Vec<_>>(), 0)
    } else {
        let mut set: BTreeSet<(usize, bool, usize)> = BTreeSet::new();
        for i in 1..=s {
            set.insert((0, true, i));
        }
        for r in spec.stream_refs() {
            for lag in 0..r.lag {
                set.insert((lag, r.output, r.index));
            }
        }
        let w: Vec<StreamRef> = set
            .into_iter()
            .map(|(lag, output, index)| StreamRef { output, index, lag })
            .collect();
        let n = w.len();
        (w, n)
    };
    let w_y = window.len();
    let slot_of = |r: &StreamRef| window.iter().position(|w| slot_order(w) == slot_order(r));

    let rename = |r: &StreamRef| -> Result<String> {
        if r.lag == 0 {
            if r.output {
                let slot = slot_of(r).expect("lag-0 outputs are in the window");
                Ok(format!("y{}", slot + 1))
            } else {
                Ok(format!("x{}", r.index))
            }
        } else {
            let held = StreamRef { lag: r.lag - 1, ..*r };
            let slot = slot_of(&held).ok_or_else(|| Error::LagExceeded {
                stream: r.name(),
                lag: r.lag,
                lookback: ell,
            })?;
            Ok(format!("m{}", slot + 1))
        }
    };

    let mut atoms: Vec<KernelAtom> = Vec::new();
    let mut index: BTreeMap<(Formula, usize), usize> = BTreeMap::new();
    let mut intern = |a: KernelAtom, atoms: &mut Vec<KernelAtom>| -> usize {
        *index.entry((a.formula.clone(), a.guard)).or_insert_with(|| {
            atoms.push(a);
            atoms.len() - 1
        })
    };

    let mut err = None;
    let body = spec.formula.map_atoms(&mut |a: &Formula| {
        let res = (|| -> Result<KernelAtom> {
            let a = if a.has_fixpoints() {
                eliminate_fixpoints(&structure, a)?.formula
            } else {
                a.clone()
            };
            let mut map = BTreeMap::new();
            let mut max_lag = 0;
            for v in a.free_vars() {
                if let Some(r) = StreamRef::from_name(&v) {
                    max_lag = max_lag.max(r.lag);
                    map.insert(v, var(&rename(&r)?));
                }
            }
            let guard = match depth {
                GuardDepth::AtomLag => max_lag,
                GuardDepth::Lookback => ell,
            };
            Ok(KernelAtom {
                formula: a.subst_vars(&map),
                guard,
                copy: false,
            })
        })();
        match res {
            Ok(k) => Ltl::Atom(intern(k, &mut atoms)),
            Err(e) => {
                err.get_or_insert(e);
                Ltl::False
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }

    let mut copies = Vec::new();
    let mut copy_atoms = Vec::new();
    if ell > 0 {
        for (slot, r) in window.iter().enumerate() {
            let source = if r.lag == 0 {
                if r.output {
                    continue;
                }
                CopySource::Input(r.index - 1)
            } else {
                let held = StreamRef { lag: r.lag - 1, ..*r };
                CopySource::Memory(slot_of(&held).expect("window is closed under smaller lags"))
            };
            copies.push(CopyConstraint { slot, source });
            let src = match source {
                CopySource::Input(i) => var(&format!("x{}", i + 1)),
                CopySource::Memory(j) => var(&format!("m{}", j + 1)),
            };
            let f = Formula::eq(Term::Var(format!("y{}", slot + 1)), src);
            let i = intern(
                KernelAtom {
                    formula: f,
                    guard: 0,
                    copy: true,
                },
                &mut atoms,
            );
            copy_atoms.push(Ltl::Atom(i));
        }
    }
    let formula = if copy_atoms.is_empty() {
        body
    } else {
        Ltl::and(body, Ltl::globally(Ltl::conj(copy_atoms)))
    };
    let output_slots = (1..=s)
        .map(|i| slot_of(&StreamRef { output: true, index: i, lag: 0 }).expect("outputs in window"))
        .collect();
    Ok(KernelSpec {
        structure,
        streams: s,
        lookback: ell,
        w_m,
        w_x: s,
        w_y,
        window,
        atoms,
        formula,
        copies,
        output_slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;

    fn kernel(src: &str) -> KernelSpec {
        reduce_to_kernel(&parse_spec(src).unwrap(), GuardDepth::AtomLag).unwrap()
    }

    #[test]
    fn no_memory_without_lookback() {
        let k = kernel("structure eq; streams 1; lookback 0; spec G { y1 = x1 }");
        assert_eq!((k.w_m, k.w_x, k.w_y), (0, 1, 1));
        assert_eq!(k.atoms.len(), 1);
        assert_eq!(k.atoms[0].formula.to_string(), "y1 = x1");
        assert!(k.copies.is_empty());
    }

    #[test]
    fn previous_output_only() {
        let k = kernel("structure eq; streams 1; lookback 1; spec G { x = y[-1] }");
        assert_eq!((k.w_m, k.w_x, k.w_y), (1, 1, 1));
        assert_eq!(k.atoms[0].formula.to_string(), "x1 = m1");
        assert_eq!(k.atoms[0].guard, 1);
        assert!(k.copies.is_empty());
    }

    #[test]
    fn pruned_window_with_copies() {
        let k = kernel("structure eq; streams 1; lookback 2; spec G ({ x[-2] = y } & { y[-1] != x })");
        // Window (x lag 0, y lag 0, x lag 1).
        let w: Vec<String> = k.window.iter().map(|r| r.name()).collect();
        assert_eq!(w, ["x1", "y1", "x1[-1]"]);
        assert_eq!((k.w_m, k.w_x, k.w_y), (3, 1, 3));
        assert_eq!(
            k.copies,
            [
                CopyConstraint { slot: 0, source: CopySource::Input(0) },
                CopyConstraint { slot: 2, source: CopySource::Memory(0) },
            ]
        );
        let texts: Vec<String> = k.atoms.iter().map(|a| a.formula.to_string()).collect();
        assert_eq!(texts, ["m3 = y2", "m2 != x1", "y1 = x1", "y3 = m1"]);
        let guards: Vec<usize> = k.atoms.iter().map(|a| a.guard).collect();
        assert_eq!(guards, [2, 1, 0, 0]);
        assert_eq!(k.output_slots, [1]);
    }

    #[test]
    fn lookback_guard_depth() {
        let spec = parse_spec("structure dlo; lookback 1; spec G ({y < x} & (YTRUE -> {y < y[-1]}))").unwrap();
        let per_atom = reduce_to_kernel(&spec, GuardDepth::AtomLag).unwrap();
        assert_eq!(per_atom.atoms.iter().map(|a| a.guard).collect::<Vec<_>>(), [0, 1]);
        let global = reduce_to_kernel(&spec, GuardDepth::Lookback).unwrap();
        assert_eq!(global.atoms.iter().map(|a| a.guard).collect::<Vec<_>>(), [1, 1]);
    }

    #[test]
    fn fixpoints_are_eliminated() {
        let k = kernel("structure dlo; spec G { gfp R(u). R(u) @ (x) }");
        assert_eq!(k.atoms[0].formula, Formula::True);
    }
}
