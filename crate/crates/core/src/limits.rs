//! Size caps for the factorial state space.

use std::env;

/// Default cap for interactive use: 9! = 362880 states.
pub const DEFAULT_MAX_N: usize = 9;

/// Cap used by the test suites: 8! = 40320 states.
pub const CI_MAX_N: usize = 8;

/// Environment variable overriding the default cap.
pub const MAX_N_ENV: &str = "GRIDUPS_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("grid size {n} exceeds the size cap of {cap} (raise it with --max-n or {MAX_N_ENV})")]
pub struct SizeLimitError {
    pub n: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCap {
    pub max_n: usize,
}

impl SizeCap {
    pub const fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    /// Reads [`MAX_N_ENV`], falling back to `default` when unset or unparsable.
    pub fn from_env_or(default: usize) -> Self {
        let max_n = env::var(MAX_N_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default);
        Self { max_n }
    }

    pub fn check(&self, n: usize) -> Result<(), SizeLimitError> {
        if n > self.max_n {
            Err(SizeLimitError { n, cap: self.max_n })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeCap {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_N)
    }
}
