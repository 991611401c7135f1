use serde::Serialize;
use serde_json::Value;

pub const SEED_ENV: &str = "TOKENLAB_SEED";

/// Where a report came from. The timestamp is taken from `SOURCE_DATE_EPOCH`
/// when set and omitted otherwise, so identical runs print identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn new(seed: Option<u64>) -> Self {
        Provenance {
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: std::env::var("SOURCE_DATE_EPOCH")
                .ok()
                .and_then(|s| s.trim().parse().ok()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub config: Value,
    pub results: Value,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
