//! Dense statevector simulation of joint remote state preparation of
//! four-qubit chi-type states over GHZ channels, with an exhaustive
//! verification harness.

pub mod bases;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod qstate;

pub use error::{Error, Result};
