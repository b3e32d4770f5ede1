use serde::Serialize;

use crate::error::CliError;

/// Environment variable holding the default working precision in bits.
pub const PRECISION_ENV: &str = "NILOSC_PRECISION_BITS";

/// Fully resolved run configuration. Embedded in output headers when
/// `--dump-config` is set, so an artifact records exactly how it was made.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub precision_bits: u32,
    pub seed: u64,
    /// Canonical text of the resolved sequence spec.
    pub sequence: String,
    pub n_schedule: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub h_list: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform_size: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub injected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_slack: Option<f64>,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// Resolve the working precision: CLI flag > environment > default (192).
pub fn resolve_precision(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(bits) = flag {
        return Ok(bits);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(text) => text.trim().parse::<u32>().map_err(|_| {
            CliError::usage(format!("{PRECISION_ENV} must be an integer, got `{text}`"))
        }),
        Err(_) => Ok(nilosc_core::numeric::DEFAULT_PRECISION_BITS),
    }
}
