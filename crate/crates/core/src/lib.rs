//! Low-energy two-body scattering from the radial Schrödinger equation.
//!
//! Everything works in a dimensionless scheme: lengths in a chosen unit ℓ
//! and energies in `ħ²/(m_r ℓ²)`, so the s-wave equation at zero energy reads
//! `u'' = 2 V̄(r) u`. [`units`] converts to and from physical units.
//!
//! The usual path is
//!
//! 1. describe the interaction with a [`potentials::PotentialSpec`],
//! 2. integrate outwards with [`solver`] (Numerov or central differences),
//! 3. extract `a`, `r0`, phase shifts and bound-state estimates with
//!    [`observables`],
//!
//! with [`analytic`] providing closed forms to check against and [`tuner`]
//! searching for parameters that reproduce a target `(a, r0)`.
//!
//! ```
//! use lescat::observables::{compute, ComputeOptions, ScatteringLength};
//! use lescat::potentials::PotentialSpec;
//!
//! // the zero-energy bound state of the Pöschl-Teller well at v = 1
//! let spec = PotentialSpec::poschl_teller(1.0, 2.0)?;
//! let obs = compute(&spec, &ComputeOptions::default())?;
//! assert!(matches!(obs.a, ScatteringLength::Unitary { .. }));
//! assert!((obs.r0.unwrap() - 1.0).abs() < 1e-6);
//! # Ok::<(), lescat::Error>(())
//! ```

pub mod analytic;
pub mod error;
pub mod observables;
pub mod potentials;
pub mod reference;
pub mod solver;
pub mod tuner;
pub mod units;

pub use error::{Error, Result};
