//! From data-level specifications to propositional LTL+P.

mod encode;
mod kernel;
mod propspec;

pub use encode::{
    feasible_combinations, mangle, simplify, translate, translate_binary, translate_minterm, translate_naive,
    translate_sat, AtomEntry, Encoding, FeasibilityTable, GuardMode, Meta, PropSpec, Tables, TypeEntry,
    WitnessEntry,
};
pub use kernel::{reduce_to_kernel, CopyConstraint, CopySource, GuardDepth, KernelAtom, KernelSpec};
pub use propspec::{read_propspec, write_propspec};
