//! Proof kernel, rewrite normalizer and fixed-point validity certifier for
//! bilateral classical logic.

pub mod basicsys;
pub mod cli;
pub mod derivation;
pub mod oracle;
pub mod rewrite;
pub mod syntax;
pub mod validity;
