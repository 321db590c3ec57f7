//! mdbook cannot run snippets that depend on an outside crate, so every
//! chapter is pulled in here as a module doc and `cargo test --doc` runs
//! them instead. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/units.md")]
pub mod units {}
#[doc = include_str!("../../../book/src/potentials.md")]
pub mod potentials {}
#[doc = include_str!("../../../book/src/integration.md")]
pub mod integration {}
#[doc = include_str!("../../../book/src/observables.md")]
pub mod observables {}
#[doc = include_str!("../../../book/src/phase-shifts.md")]
pub mod phase_shifts {}
#[doc = include_str!("../../../book/src/bound-states.md")]
pub mod bound_states {}
#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}
#[doc = include_str!("../../../book/src/tuning.md")]
pub mod tuning {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
