//! Swap-test fingerprint localization on a dense statevector simulator.
//!
//! The crate is layered bottom-up:
//!
//! - [`statevector`]: dense `2^n` amplitude simulator (H, X, `U(θ)`, controlled-SWAP,
//!   seeded shot sampling). Qubit 0 is the least-significant bit of the basis index.
//! - [`encoding`]: dBm readings to unit amplitude vectors, and amplitude vectors to
//!   registers, either by direct load or by a conditional-rotation tree.
//! - [`swaptest`]: the ancilla/H/controlled-SWAP/H circuit, exact and shot-sampled
//!   similarity `|⟨φ|ψ⟩|²`.
//! - [`fingerprint`]: fingerprint database, classical and quantum nearest-fingerprint
//!   localization, distance error and resource accounting.
//! - [`harness`]: synthetic testbed, CSV files, shot sweep / CDF experiments and the CLI.

pub mod encoding;
pub mod error;
pub mod fingerprint;
pub mod harness;
pub mod statevector;
pub mod swaptest;

pub use error::{Error, Result};
