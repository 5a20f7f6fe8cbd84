//! Elimination of pfp/lfp/gfp operators by iterating the body on type sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fo::{substitute_relation, var, FixOp, Fixpoint, Formula, Term};
use crate::structure::{Structure, TypeSet};

/// The iterates of one eliminated fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub op: FixOp,
    pub rel: String,
    /// Type coordinates: the fixpoint parameters followed by the body's other free variables.
    pub coords: Vec<String>,
    /// ψ₀, ψ₁, … as type sets, up to and including the first repeat.
    pub sets: Vec<TypeSet>,
    /// Index n of the iterate that is a fixed point (ψ_{n+1} ≡ ψ_n).
    pub fixed_at: Option<usize>,
    /// `(m, n)` when ψ_n ≡ ψ_m for some m < n − 1 without a fixed point.
    pub cycle: Option<(usize, usize)>,
}

impl IterationTrace {
    /// Whether the iterates grow (for lfp) or shrink (for gfp) along the sequence.
    pub fn is_monotone(&self) -> bool {
        self.sets.windows(2).all(|w| match self.op {
            FixOp::Gfp => w[1].is_subset(&w[0]),
            _ => w[0].is_subset(&w[1]),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub formula: Formula,
    pub traces: Vec<IterationTrace>,
    pub warnings: Vec<String>,
}

/// ι-equivalence of two fixpoint-free formulas over the given variables.
pub fn equivalent(s: &Structure, f: &Formula, g: &Formula, vars: &[String]) -> Result<bool> {
    Ok(s.iota(f, vars)? == s.iota(g, vars)?)
}

/// Rewrites every fixpoint application in `f` into an equivalent
/// fixpoint-free formula.
pub fn eliminate_fixpoints(s: &Structure, f: &Formula) -> Result<Elimination> {
    let mut traces = Vec::new();
    let mut warnings = Vec::new();
    let formula = elim(s, f, &mut traces, &mut warnings)?;
    Ok(Elimination {
        formula,
        traces,
        warnings,
    })
}

fn elim(s: &Structure, f: &Formula, traces: &mut Vec<IterationTrace>, warnings: &mut Vec<String>) -> Result<Formula> {
    let mut go = |g: &Formula| elim(s, g, traces, warnings);
    Ok(match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Lt(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)?),
        Formula::And(a, b) => {
            let a = go(a)?;
            Formula::and(a, go(b)?)
        }
        Formula::Or(a, b) => {
            let a = go(a)?;
            Formula::or(a, go(b)?)
        }
        Formula::Implies(a, b) => {
            let a = go(a)?;
            Formula::implies(a, go(b)?)
        }
        Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(go(b)?)),
        Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(go(b)?)),
        Formula::Fix(fx) => {
            let (psi, trace) = iterate(s, fx, traces, warnings)?;
            traces.push(trace);
            let map: BTreeMap<String, Term> = fx.params.iter().cloned().zip(fx.args.iter().cloned()).collect();
            psi.subst_vars(&map)
        }
    })
}

fn coords_of(s: &Structure, fx: &Fixpoint) -> Vec<String> {
    let consts: BTreeSet<&String> = s.constant_names().iter().collect();
    let mut coords = fx.params.clone();
    for v in fx.body.free_vars() {
        if !fx.params.contains(&v) && !consts.contains(&v) {
            coords.push(v);
        }
    }
    coords
}

/// Runs the iteration for one operator; returns the stabilized ψ over the
/// parameters (and the body's other free variables).
fn iterate(
    s: &Structure,
    fx: &Fixpoint,
    traces: &mut Vec<IterationTrace>,
    warnings: &mut Vec<String>,
) -> Result<(Formula, IterationTrace)> {
    let coords = coords_of(s, fx);
    let terms: Vec<Term> = coords.iter().map(|c| var(c)).collect();
    let universe = s.space(coords.len())?.len();
    let start = match fx.op {
        FixOp::Gfp => TypeSet::full(coords.len(), universe),
        _ => TypeSet::empty(coords.len(), universe),
    };
    let mut sets = vec![start];
    loop {
        let cur = sets.last().expect("nonempty");
        let psi = s.set_formula(cur, &terms)?;
        let applied = substitute_relation(&fx.body, &fx.rel, &fx.params, &psi)?;
        let free = elim(s, &applied, traces, warnings)?;
        let next = s.iota(&free, &coords)?;
        let n = sets.len() - 1;
        if &next == cur {
            let trace = IterationTrace {
                op: fx.op,
                rel: fx.rel.clone(),
                coords,
                sets,
                fixed_at: Some(n),
                cycle: None,
            };
            if fx.op != FixOp::Pfp && !trace.is_monotone() {
                warnings.push(format!(
                    "{} {}: iteration is not monotone; using the partial fixed point",
                    fx.op.keyword(),
                    fx.rel
                ));
            }
            return Ok((psi, trace));
        }
        if let Some(m) = sets.iter().position(|x| x == &next) {
            sets.push(next);
            let trace = IterationTrace {
                op: fx.op,
                rel: fx.rel.clone(),
                coords,
                sets,
                fixed_at: None,
                cycle: Some((m, n + 1)),
            };
            if fx.op != FixOp::Pfp {
                warnings.push(format!(
                    "{} {}: iteration cycles without a fixed point; result is FALSE",
                    fx.op.keyword(),
                    fx.rel
                ));
            }
            return Ok((Formula::False, trace));
        }
        sets.push(next);
        if sets.len() > 1 << 16 {
            return Err(Error::ResourceCap("fixpoint iteration too long".into()));
        }
    }
}

/// Whether the least-fixpoint iteration of `body` (ψ₀ = ⊥) grows
/// monotonically until it repeats.
pub fn check_monotone_iteration(s: &Structure, body: &Formula, rel: &str, params: &[String]) -> Result<bool> {
    let fx = Fixpoint {
        op: FixOp::Lfp,
        rel: rel.to_string(),
        params: params.to_vec(),
        body: body.clone(),
        args: params.iter().map(|p| var(p)).collect(),
    };
    let mut traces = Vec::new();
    let mut warnings = Vec::new();
    let (_, trace) = iterate(s, &fx, &mut traces, &mut warnings)?;
    Ok(trace.is_monotone())
}
