//! Data-level execution of propositional strategies and the trace oracle.

mod oracle;
mod trace;
mod transducer;

pub use oracle::{check_prefix, check_trace, encode_trace};
pub use trace::{format_tuple, read_inputs, ConcreteTrace, Step};
pub use transducer::{simulate, Simulation, StepRecord, Transducer};
