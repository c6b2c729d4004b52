//! Run manifests and machine-readable reports. Reports are written to
//! append-only files named by a content hash of the manifest, so a run
//! leaves a reproducibility audit trail.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Error;
use crate::vectors::{AngleVector, CheckReport, FlagAngleVector};

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub workers: usize,
    pub samples: u64,
    pub library_version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl RunManifest {
    pub fn start(command: &str, config: serde_json::Value, seed: u64, workers: usize, samples: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            seed,
            workers,
            samples,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0,
        }
    }

    pub fn finish(&mut self) {
        self.finished_unix = unix_now();
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// The full output of one CLI invocation: what was run, which paper claim
/// each check verifies, and the outcomes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifest: RunManifest,
    /// Human-readable statement of the claim the command verifies.
    pub claim: String,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    pub pass: bool,
}

impl Report {
    pub fn new(manifest: RunManifest, claim: &str, checks: Vec<CheckReport>) -> Self {
        let pass = checks.iter().all(|c| c.pass());
        Report { manifest, claim: claim.to_string(), checks, data: serde_json::Value::Null, pass }
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = data;
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Writes `<hash>.json` under the output directory and returns the path.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf, Error> {
        std::fs::create_dir_all(out_dir)?;
        let json = serde_json::to_string_pretty(&self.to_json())?;
        let manifest_json = serde_json::to_string(&self.manifest)?;
        let path = out_dir.join(format!("{:016x}.json", fnv1a(manifest_json.as_bytes())));
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// CSV rows for angle vectors: fixture, spec, side, entry, value, stderr,
/// samples, exact.
pub fn angle_vectors_csv(fixture: &str, vectors: &[&AngleVector]) -> String {
    let mut out = String::from("fixture,spec,side,entry,value,stderr,samples,exact\n");
    for v in vectors {
        for (i, e) in v.entries.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:?},{},{},{},{},{}\n",
                fixture, v.spec_name, v.side, i, e.value, e.stderr, e.samples, e.exact
            ));
        }
    }
    out
}

/// CSV rows for flag-angle vectors, one row per index set.
pub fn flag_vectors_csv(fixture: &str, vectors: &[&FlagAngleVector]) -> String {
    let mut out = String::from("fixture,spec,side,set,value,stderr,samples,exact\n");
    for v in vectors {
        for (s, e) in &v.entries {
            let set = s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|");
            out.push_str(&format!(
                "{},{},{:?},\"{}\",{},{},{},{}\n",
                fixture, v.spec_name, v.side, set, e.value, e.stderr, e.samples, e.exact
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::CheckItem;

    #[test]
    fn report_written_under_content_hash() {
        let dir = std::env::temp_dir().join(format!("anglekit-report-{}", std::process::id()));
        let mut manifest = RunManifest::start("test", serde_json::json!({}), 1, 1, 10);
        manifest.finish();
        let report = Report::new(
            manifest,
            "test claim",
            vec![CheckReport {
                title: "t".into(),
                items: vec![CheckItem {
                    claim: "x".into(),
                    computed: 1.0,
                    expected: 1.0,
                    sigma: 0.0,
                    pass: true,
                }],
            }],
        );
        let path = report.write(&dir).unwrap();
        assert!(path.is_file());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("test claim"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
