//! Command-line front end: figure-data emitters, validation suites, and a
//! parameter probe for every public operation.

mod commands;
mod config;
mod figures;
mod probe;
mod validate;

pub use commands::run;
pub use config::RunConfig;
