//! Parameter sweeps over detuning for Rabi, Ramsey and CPT interrogation, written as
//! CSV or JSON.
//!
//! ```
//! use clock_sweep::config::{Scheme, SweepSpec};
//!
//! let table = clock_sweep::sweep::run_sweep(&SweepSpec::defaults(Scheme::Rabi)).unwrap();
//! assert_eq!(table.rows.len(), 2001);
//! ```

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{load_config, ConfigError, SweepSpec};
pub use sweep::{run_sweep, SweepError, Table};
