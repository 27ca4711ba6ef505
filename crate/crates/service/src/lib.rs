//! Catalog store, HTTP service and command line binding the affekt pipeline
//! together.

pub mod cli;
pub mod config;
pub mod engine;
pub mod http;
pub mod store;
pub mod views;
