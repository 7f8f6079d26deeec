//! Report files. Every command writes one JSON report embedding the tool
//! version and the configuration it ran with; curve-producing commands
//! also write a CSV. All serialization is deterministic — map keys are
//! ordered and the only wall-clock field is dropped by `--deterministic`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use matrix_tails::BoundCurve;
use serde::Serialize;

use crate::error::CliError;

#[derive(Serialize)]
pub struct Envelope<C: Serialize, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub command: &'static str,
    pub config: C,
    pub report: P,
}

pub fn write_json<C: Serialize, P: Serialize>(
    out_dir: &Path,
    command: &'static str,
    deterministic: bool,
    config: C,
    report: P,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir)?;
    let envelope = Envelope {
        tool: "matrix-tails",
        version: env!("CARGO_PKG_VERSION"),
        generated_unix: if deterministic {
            None
        } else {
            Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        },
        command,
        config,
        report,
    };
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    let path = out_dir.join(format!("{command}.json"));
    fs::write(&path, text)?;
    Ok(path)
}

/// CSV for evaluated bound curves sharing one grid: a `t` column followed
/// by `<label>_raw,<label>_clipped` per curve.
pub fn curves_csv(curves: &[BoundCurve]) -> String {
    let mut header = String::from("t");
    for c in curves {
        header.push_str(&format!(",{0}_raw,{0}_clipped", c.label));
    }
    let mut out = header;
    out.push('\n');
    let n = curves.first().map_or(0, |c| c.t_grid.len());
    for i in 0..n {
        out.push_str(&format!("{}", curves[0].t_grid[i]));
        for c in curves {
            out.push_str(&format!(",{},{}", c.values[i], c.clipped[i]));
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(out_dir: &Path, command: &str, text: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{command}.csv"));
    fs::write(&path, text)?;
    Ok(path)
}
