//! Propositional backend: satisfiability, realizability and verification of
//! LTL+P formulas over named propositions.

pub mod bdd;
pub mod game;
pub mod machine;
pub mod nba;
pub mod tlsf;

use std::collections::BTreeSet;

use crate::error::Result;
use crate::ltl::Ltl;

use nba::{find_lasso, Nba, NbaCaps};

pub use game::{realize, RealizeOptions, Verdict};
pub use machine::{
    read_machine, verify_counter, verify_machine, write_machine, MachineFile, MealyMachine, MooreMachine,
    MooreState, Strategy, Verification,
};
pub use tlsf::export_tlsf;

/// An ultimately periodic word `prefix · period^ω`; letters follow `props`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub props: Vec<String>,
    pub prefix: Vec<Vec<bool>>,
    pub period: Vec<Vec<bool>>,
}

impl Lasso {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter at absolute position `t`.
    pub fn letter(&self, t: usize) -> &[bool] {
        if t < self.prefix.len() {
            &self.prefix[t]
        } else {
            &self.period[(t - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn satisfies(&self, f: &Ltl<String>) -> bool {
        crate::ltl::eval_lasso(f, self.prefix.len(), self.period.len(), |a, t| {
            self.props.iter().position(|p| p == a).is_some_and(|i| self.letter(t)[i])
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Lasso),
    Unsat,
}

pub fn formula_props(f: &Ltl<String>) -> Vec<String> {
    let mut set = BTreeSet::new();
    f.for_each_atom(&mut |a| {
        set.insert(a.clone());
    });
    set.into_iter().collect()
}

/// Decides satisfiability; a model is returned as a lasso over the
/// formula's propositions in sorted order.
pub fn check_sat(f: &Ltl<String>) -> Result<SatResult> {
    check_sat_with(f, NbaCaps::default())
}

pub fn check_sat_with(f: &Ltl<String>, caps: NbaCaps) -> Result<SatResult> {
    let props = formula_props(f);
    let nba = Nba::from_formula(f, &props, caps)?;
    let adj: Vec<Vec<(usize, u64)>> = nba.edges.iter().map(|es| es.iter().map(|e| (e.to, e.acc)).collect()).collect();
    let Some(path) = find_lasso(&adj, &nba.init, nba.n_acc) else {
        return Ok(SatResult::Unsat);
    };
    let word = |steps: &[(usize, usize)]| -> Vec<Vec<bool>> {
        steps
            .iter()
            .map(|&(v, i)| nba.pick_letter(nba.edges[v][i].guard).expect("live edges have satisfiable guards"))
            .collect()
    };
    Ok(SatResult::Sat(Lasso {
        prefix: word(&path.prefix),
        period: word(&path.cycle),
        props,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_prop_ltl;

    #[test]
    fn sat_models_satisfy() {
        for text in ["G F a & G F !a", "a U (b & X !a)", "G (a -> Y b)", "F (a S b) & G !b"] {
            let f = parse_prop_ltl(text).unwrap();
            match check_sat(&f).unwrap() {
                SatResult::Sat(l) => assert!(l.satisfies(&f), "{text}"),
                SatResult::Unsat => assert!(text.starts_with("F (a S b)"), "{text}"),
            }
        }
    }

    #[test]
    fn unsat() {
        let f = parse_prop_ltl("G a & F !a").unwrap();
        assert_eq!(check_sat(&f).unwrap(), SatResult::Unsat);
    }
}
