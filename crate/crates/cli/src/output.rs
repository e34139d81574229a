//! File outputs: run manifests, visit histograms, trajectory dumps, and
//! exact matrices serialized with rational entries as "num/den" strings.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use burnside::oracle::{fraction_string, FlagKernel, LumpedKernel};
use burnside::Trajectory;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Everything needed to reproduce a run bit for bit, written next to the
/// output files. Fields that do not apply to a subcommand are omitted.
#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retain_flags: Option<bool>,
    pub out: String,
    pub format: String,
    pub version: String,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str, out: &Path, format: Format) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            n: None,
            q: None,
            seed: None,
            steps: None,
            start: None,
            chains: None,
            retain_flags: None,
            out: out.display().to_string(),
            format: format.name().to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: 0.0,
        }
    }
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<PathBuf> {
    let path = dir.join("manifest.json");
    write_json(&path, manifest)?;
    Ok(path)
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    word: &'a str,
    count: u64,
}

/// Writes histogram.csv or histogram.json; rows arrive already ordered.
pub fn write_histogram(dir: &Path, format: Format, rows: &[(String, u64)]) -> Result<PathBuf> {
    match format {
        Format::Csv => {
            let path = dir.join("histogram.csv");
            let mut wtr = csv::Writer::from_path(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            wtr.write_record(["word", "count"])?;
            for (word, count) in rows {
                wtr.write_record([word.as_str(), &count.to_string()])?;
            }
            wtr.flush()?;
            Ok(path)
        }
        Format::Json => {
            let path = dir.join("histogram.json");
            let rows: Vec<HistogramRow> = rows
                .iter()
                .map(|(word, count)| HistogramRow { word, count: *count })
                .collect();
            write_json(&path, &rows)?;
            Ok(path)
        }
    }
}

/// One CSV per chain: step, word, move_type (Jordan type of the sampled
/// unipotent, blank on the start row), and the canonical flag.
pub fn write_trajectories(dir: &Path, trajectories: &[Trajectory]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (i, traj) in trajectories.iter().enumerate() {
        let name = if trajectories.len() == 1 {
            "trajectory.csv".to_string()
        } else {
            format!("trajectory-{i:03}.csv")
        };
        let path = dir.join(name);
        let mut wtr = csv::Writer::from_path(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        wtr.write_record(["step", "word", "move_type", "flag"])?;
        for (t, word) in traj.words.iter().enumerate() {
            let move_type = if t == 0 {
                String::new()
            } else {
                traj.jordan_types[t - 1].to_string()
            };
            let flag = match &traj.flags {
                Some(flags) => flags[t].to_string(),
                None => String::new(),
            };
            wtr.write_record([&t.to_string(), &word.to_string(), &move_type, &flag])?;
        }
        wtr.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// Exact matrix: state labels in row/column order, entries as reduced
/// "num/den" strings.
#[derive(Serialize)]
pub struct MatrixJson {
    pub n: usize,
    pub q: u64,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_flag_kernel(kernel: &FlagKernel, n: usize) -> Self {
        MatrixJson {
            n,
            q: kernel.field.order(),
            labels: kernel.flags.iter().map(|f| f.to_string()).collect(),
            entries: kernel
                .matrix
                .iter()
                .map(|row| row.iter().map(fraction_string).collect())
                .collect(),
        }
    }

    pub fn from_lumped_kernel(kernel: &LumpedKernel, n: usize) -> Self {
        MatrixJson {
            n,
            q: kernel.q,
            labels: kernel.words.iter().map(|w| w.to_string()).collect(),
            entries: kernel
                .matrix
                .iter()
                .map(|row| row.iter().map(fraction_string).collect())
                .collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
