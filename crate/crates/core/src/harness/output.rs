use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::sweep::{SweepResult, SweepRow};
use crate::error::Result;

pub const CSV_HEADER: [&str; 7] = [
    "sweep_var",
    "value",
    "method",
    "rate_mbps_mean",
    "rate_mbps_ci95",
    "trials",
    "master_seed",
];

/// `<out>.config.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

/// Writes the result rows as CSV and the resolved configuration as a JSON
/// sidecar next to it. Floats are written in shortest round-trip form.
pub fn write_results(result: &SweepResult, config: &ExperimentConfig, path: &Path) -> Result<()> {
    let mut rows = result.rows.clone();
    rows.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.method.cmp(&b.method)));

    let mut w = csv::Writer::from_path(path)?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;

    let mut sidecar = File::create(sidecar_path(path))?;
    serde_json::to_writer_pretty(&mut sidecar, &config.resolved())?;
    sidecar.write_all(b"\n")?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}
