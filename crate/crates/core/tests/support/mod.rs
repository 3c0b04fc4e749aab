//! Checks shared by the test targets of this crate and the acceptance suite.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod invariants;
pub mod oracle;
