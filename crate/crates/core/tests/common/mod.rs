//! Shared by the integration tests of both crates.
#![allow(dead_code)]

pub mod criteria;
pub mod oracle;
