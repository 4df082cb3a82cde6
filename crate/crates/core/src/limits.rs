//! Exhaustion caps for brute-force sweeps.
//!
//! Every checker in this crate enumerates configurations. The number of
//! Boolean variables a single sweep may range over defaults to 20 and can be
//! raised or lowered with the `BAN_MAX_BITS` environment variable.

use std::sync::OnceLock;

pub const DEFAULT_MAX_BITS: usize = 20;

/// Cap used for asynchronous state-transition graphs, whose edge count grows
/// as `|S| * 2^|S|`.
pub const DEFAULT_STG_BITS: usize = 16;

/// Hard ceiling: configurations are indexed by `u64`.
pub const ABSOLUTE_MAX_BITS: usize = 63;

fn env_override() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("BAN_MAX_BITS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(ABSOLUTE_MAX_BITS))
    })
}

pub fn max_bits() -> usize {
    env_override().unwrap_or(DEFAULT_MAX_BITS)
}

pub fn stg_bits() -> usize {
    env_override().unwrap_or(DEFAULT_STG_BITS)
}

pub(crate) fn check_bits(count: usize, cap: usize, what: &str) -> crate::Result<()> {
    if count > cap {
        Err(crate::Error::TooLarge(format!(
            "{what} needs {count} bits, cap is {cap} (set BAN_MAX_BITS to change)"
        )))
    } else {
        Ok(())
    }
}
