//! Simulation of Grover search, adiabatic evolution and phase estimation,
//! with the register's measurement distribution checked against the
//! majorization order at every step.
//!
//! Shared types are re-exported at the crate root.

pub mod adiabatic;
pub mod error;
pub mod grover;
pub mod io;
pub mod majorder;
pub mod phase_estimation;
pub mod statevec;

pub use error::{Error, Result};
pub use majorder::{
    compare, greatest_element, least_element, lorenz_points, prefix_sums, sort_desc,
    verify_trace, MajorizationVerdict, ProbVector, Relation, Snapshot, Trace, TraceReport,
    DEFAULT_TOL,
};
pub use statevec::{GateOp, StateVector};
