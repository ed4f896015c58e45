use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Flat JSON run configuration. Command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub knot: Option<String>,
    pub n: Option<Vec<i64>>,
    #[serde(rename = "N")]
    pub big_n: Option<Vec<i64>>,
    /// Inclusive range `"a..b"` or a comma list.
    pub k: Option<String>,
    pub t0: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// `"p/q"`.
pub fn parse_knot(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("knot {s:?} is not of the form p/q"))?;
    let p = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    Ok((p, q))
}

/// `"a..b"` (inclusive) or `"x,y,z"`.
pub fn parse_int_range(s: &str) -> Result<Vec<i64>, String> {
    let bad = |_| format!("bad integer range {s:?}");
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(bad)?;
        let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(bad)?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(bad)).collect()
}
