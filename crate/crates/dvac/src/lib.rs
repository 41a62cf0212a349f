//! dvac — an exact symbolic–numeric engine for a deformed Virasoro algebra
//! realized by deformed free fermions on truncated Fock spaces.
//!
//! The library builds the deformed current from fermion mode operators,
//! expands the structure function and its companion q-series with exact
//! reliability windows, and verifies the algebra's commutation relations
//! coefficient-by-coefficient — both in the trigonometric regime and at the
//! elliptic free-field point.  A numeric backend with certified error bounds
//! mirrors every pipeline at a fixed evaluation point.
//!
//! The primary interface is the `examples/` directory — one runnable example
//! per capability:
//!
//! ```text
//! examples/
//!   structure_function.rs      cargo run --example structure_function
//!   eta_identities.rs          cargo run --example eta_identities
//!   fermion_algebra.rs         cargo run --example fermion_algebra
//!   trig_relation.rs           cargo run --example trig_relation
//!   elliptic_relation.rs       cargo run --example elliptic_relation
//!   vacuum_eigenvalues.rs      cargo run --example vacuum_eigenvalues
//!   spectra.rs                 cargo run --example spectra
//!   characters.rs              cargo run --example characters
//!   highest_weight_scan.rs     cargo run --example highest_weight_scan
//!   operator_cache.rs          cargo run --example operator_cache
//! ```
//!
//! A thin `dvac` binary exposes the same capabilities as subcommands
//! (`fseries`, `verify`, `spectrum`, `chars`, `scan`) with JSON/CSV/text
//! reports; see the README.

pub mod cache;
pub mod chars;
pub mod cli;
pub mod coeff;
pub mod config;
pub mod dva;
pub mod fock;
pub mod qseries;
pub mod report;
pub mod verify;

/// Library version stamped into every report and cache file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cache format version; bumped whenever serialized operator layout changes.
pub const CACHE_FORMAT_VERSION: u32 = 1;
