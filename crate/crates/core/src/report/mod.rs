//! Configuration, verification records and the command-line driver.
//!
//! Records are emitted as JSON lines with a versioned schema id
//! ([`SCHEMA_ID`]). Every integer that can leave the 64-bit range is written
//! as a decimal string.

pub mod cli;
pub mod config;
pub mod persist;
pub mod record;

use num_bigint::BigInt;
use serde::Serializer;

pub use cli::{run, run_command, ExitStatus};
pub use config::{OutputFormat, RunConfig};
pub use persist::{load_kernel_cache, persist_records, sidecar_path};
pub use record::{Provenance, RecordStatus, VerificationRecord, SCHEMA_ID};

pub fn serialize_decimal<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Decimal string form used throughout the record payloads.
pub(crate) fn dec(v: &BigInt) -> serde_json::Value {
    serde_json::Value::String(v.to_string())
}
