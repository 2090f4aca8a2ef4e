//! Command-line front end: the canonical expression parser, suite runners
//! for every verification family, and the machine-readable report.

pub mod parse;
pub mod report;
pub mod run;

pub use parse::{parse_expr, ParseError};
pub use report::{CheckRecord, Report, Status};
pub use run::{
    bialg_suite, casimir_suite, configure_threads, hopf_suite, lattice_suite, maps_suite,
    relations_suite, run_all, LatticeConfig, RChoice,
};
