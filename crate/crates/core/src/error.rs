use thiserror::Error;

/// Largest agent count a cohort or population total may hold.
pub const MAX_COUNT: u64 = i64::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParam { key: &'static str, reason: String },

    #[error("agent count overflow (limit {MAX_COUNT})")]
    CountOverflow,

    #[error("population of {total} agents exceeds the cap of {cap}")]
    PopulationCapExceeded { total: u64, cap: u64 },

    #[error("genome length {len} exceeds the maximum of {max}")]
    GenomeTooLong { len: usize, max: usize },
}

impl SimError {
    pub(crate) fn param(key: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidParam {
            key,
            reason: reason.into(),
        }
    }
}
