//! Reference-frame twirls on N qubits and the private communication schemes
//! they enable.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, kets, density matrices, partial
//!   traces, trace distance and entropy.
//! - [`schurweyl`]: the Schur–Weyl basis of `(C^2)^{⊗N}` built by iterated
//!   spin-½ Clebsch–Gordan coupling, collective rotations and qubit
//!   permutations.
//! - [`twirl`]: the SU(2), S_N and combined group averages, computed exactly
//!   from the block structure and by sampling / enumeration.
//! - [`schemes`]: private quantum and classical encodings and their counting
//!   bounds.
//! - [`certify`]: privacy and decodability checks producing [`certify::CertReport`].
//! - [`adversary`]: Monte-Carlo protocol runs against an eavesdropper with a
//!   random frame.
//! - [`cli`]: the `rftwirl` command-line front end.

pub mod adversary;
pub mod certify;
pub mod cli;
pub mod error;
pub mod matcore;
pub mod schemes;
pub mod schurweyl;
pub mod twirl;

pub use error::{Error, Result};
