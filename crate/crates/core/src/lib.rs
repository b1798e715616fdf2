//! Thermal entanglement of the two-qubit Heisenberg XYZ chain.
//!
//! * [`model`]: couplings, Bell-basis spectrum and the closed-form Gibbs state.
//! * [`concurrence`]: closed-form Wootters concurrence, general and special cases.
//! * [`oracle`]: brute-force numeric Gibbs state and Wootters procedure.
//! * [`analysis`]: critical temperatures, sweeps, zero-temperature limits and
//!   the `dC/d(kT)` sign scan.
//! * [`cli`]: the `xyzchain` command-line front end.

pub mod analysis;
pub mod cli;
pub mod concurrence;
pub mod error;
pub mod model;
pub mod oracle;

pub use concurrence::{concurrence, Branch, ConcurrenceResult};
pub use error::{Error, Result};
pub use model::{Couplings, DensityMatrix4};
