use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[serde(rename = "rel_L2")]
    RelL2,
    #[serde(rename = "TV_distance")]
    TvDistance,
    MaxAbs,
    AtomError,
    Ratio,
}

/// One named comparison against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub metric: Metric,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationReport {
    pub fn new(name: impl Into<String>, metric: Metric, value: f64, tolerance: f64) -> Self {
        ValidationReport {
            name: name.into(),
            metric,
            value,
            tolerance,
            // NaN never passes
            pass: value <= tolerance,
        }
    }
}
