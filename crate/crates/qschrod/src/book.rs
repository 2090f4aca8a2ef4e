//! Doc-test anchors for the guide in `book/`.
//!
//! Every fenced code block in the book chapters compiles and runs under
//! `cargo test --doc`, one module per chapter so a failure names its
//! chapter. This keeps the guide and the library in sync.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/scalars-and-operators.md")]
pub mod scalars_and_operators {}

#[doc = include_str!("../../../book/src/algebra-tables.md")]
pub mod algebra_tables {}

#[doc = include_str!("../../../book/src/hopf-structure.md")]
pub mod hopf_structure {}

#[doc = include_str!("../../../book/src/basis-maps.md")]
pub mod basis_maps {}

#[doc = include_str!("../../../book/src/r-matrices.md")]
pub mod r_matrices {}

#[doc = include_str!("../../../book/src/lattice-validation.md")]
pub mod lattice_validation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_guide {}
