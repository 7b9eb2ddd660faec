//! Support library for the `shearcst` binary: layered run configuration
//! and file formats for sampled slices.
//!
//! The binary itself stays a thin dispatcher; everything with behaviour
//! worth testing lives here so the integration suite can parse what the
//! binary emits and build the configurations it runs under.

pub mod config;
pub mod emit;
