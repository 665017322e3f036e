//! Artifact writers. Field order is fixed and numbers are formatted without
//! locale, so identical inputs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_complex::Complex;
use phase_ovm::fock::Operator;
use phase_ovm::phasespace::{Grid, PhaseDistribution};
use phase_ovm::verify::CheckReport;
use serde::Serialize;

use crate::schema::{self, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `{:.16e}`: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Creates `dir` if needed and proves it writable with a probe file.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let probe = dir.join(".phase-ovm-write-probe");
    fs::write(&probe, b"").with_context(|| format!("output directory {} is not writable", dir.display()))?;
    fs::remove_file(&probe).with_context(|| format!("cannot clean up {}", probe.display()))?;
    Ok(())
}

pub struct Sink {
    pub dir: PathBuf,
    pub format: Format,
}

impl Sink {
    pub fn path(&self, stem: &str) -> PathBuf {
        self.dir.join(format!("{stem}.{}", self.format.extension()))
    }

    fn write_csv(&self, stem: &str, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<PathBuf> {
        let path = self.path(stem);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush().with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    fn write_json<S: Serialize>(&self, stem: &str, value: &S) -> Result<PathBuf> {
        let path = self.path(stem);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    pub fn grid(&self, stem: &str, kind: &str, state: &str, grid: &Grid<f64>) -> Result<PathBuf> {
        let spec = grid.spec;
        match self.format {
            Format::Csv => self.write_csv(
                stem,
                &schema::GRID_CSV_HEADER,
                (0..spec.nx).flat_map(|i| {
                    (0..spec.np).map(move |j| vec![num(spec.x(i)), num(spec.p(j)), num(grid.values[[i, j]])])
                }),
            ),
            Format::Json => {
                #[derive(Serialize)]
                struct GridJson<'a> {
                    schema_version: u32,
                    kind: &'a str,
                    state: &'a str,
                    x_min: f64,
                    x_max: f64,
                    nx: usize,
                    p_min: f64,
                    p_max: f64,
                    np: usize,
                    values: Vec<f64>,
                }
                self.write_json(
                    stem,
                    &GridJson {
                        schema_version: SCHEMA_VERSION,
                        kind,
                        state,
                        x_min: spec.x(0),
                        x_max: spec.x(spec.nx - 1),
                        nx: spec.nx,
                        p_min: spec.p(0),
                        p_max: spec.p(spec.np - 1),
                        np: spec.np,
                        values: grid.values.iter().copied().collect(),
                    },
                )
            }
        }
    }

    pub fn phase(&self, stem: &str, kind: &str, state: &str, dist: &PhaseDistribution<f64>) -> Result<PathBuf> {
        match self.format {
            Format::Csv => self.write_csv(
                stem,
                &schema::PHASE_CSV_HEADER,
                dist.thetas.iter().zip(&dist.values).map(|(t, v)| vec![num(*t), num(*v)]),
            ),
            Format::Json => {
                #[derive(Serialize)]
                struct PhaseJson<'a> {
                    schema_version: u32,
                    kind: &'a str,
                    state: &'a str,
                    thetas: &'a [f64],
                    values: &'a [f64],
                }
                self.write_json(
                    stem,
                    &PhaseJson {
                        schema_version: SCHEMA_VERSION,
                        kind,
                        state,
                        thetas: &dist.thetas,
                        values: &dist.values,
                    },
                )
            }
        }
    }

    pub fn matrix(&self, stem: &str, kind: &str, theta: f64, op: &Operator<f64>) -> Result<PathBuf> {
        let d = op.dim();
        match self.format {
            Format::Csv => self.write_csv(
                stem,
                &schema::MATRIX_CSV_HEADER,
                (0..d).flat_map(|n| {
                    (0..d).map(move |m| {
                        let c = op.get(n, m);
                        vec![n.to_string(), m.to_string(), num(c.re), num(c.im)]
                    })
                }),
            ),
            Format::Json => {
                #[derive(Serialize)]
                struct MatrixJson<'a> {
                    schema_version: u32,
                    kind: &'a str,
                    dim: usize,
                    theta: f64,
                    entries: Vec<[f64; 2]>,
                }
                self.write_json(
                    stem,
                    &MatrixJson {
                        schema_version: SCHEMA_VERSION,
                        kind,
                        dim: d,
                        theta,
                        entries: op.entries().iter().map(|c: &Complex<f64>| [c.re, c.im]).collect(),
                    },
                )
            }
        }
    }

    /// Refuses an empty list.
    pub fn report(&self, stem: &str, checks: &[CheckReport]) -> Result<PathBuf> {
        if checks.is_empty() {
            bail!("refusing to write an empty check report");
        }
        match self.format {
            Format::Csv => self.write_csv(
                stem,
                &schema::REPORT_CSV_HEADER,
                checks.iter().map(|c| {
                    vec![
                        c.qualified_name(),
                        c.status.as_str().to_string(),
                        num(c.measured),
                        num(c.tolerance),
                        num(c.runtime_s),
                    ]
                }),
            ),
            Format::Json => {
                #[derive(Serialize)]
                struct Check {
                    name: String,
                    status: &'static str,
                    measured: Option<f64>,
                    tolerance: Option<f64>,
                    runtime_s: f64,
                }
                #[derive(Serialize)]
                struct ReportJson {
                    schema_version: u32,
                    checks: Vec<Check>,
                }
                // JSON has no NaN or infinity; those become null
                let finite = |v: f64| v.is_finite().then_some(v);
                self.write_json(
                    stem,
                    &ReportJson {
                        schema_version: SCHEMA_VERSION,
                        checks: checks
                            .iter()
                            .map(|c| Check {
                                name: c.qualified_name(),
                                status: c.status.as_str(),
                                measured: finite(c.measured),
                                tolerance: finite(c.tolerance),
                                runtime_s: c.runtime_s,
                            })
                            .collect(),
                    },
                )
            }
        }
    }

    /// Plain table with a fixed header; all cells preformatted.
    pub fn table(&self, stem: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf> {
        match self.format {
            Format::Csv => self.write_csv(stem, header, rows.into_iter()),
            Format::Json => {
                let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                    .into_iter()
                    .map(|row| {
                        header
                            .iter()
                            .zip(row)
                            .map(|(h, cell)| {
                                let value = cell
                                    .parse::<f64>()
                                    .ok()
                                    .and_then(|v| serde_json::Number::from_f64(v).map(serde_json::Value::Number))
                                    .unwrap_or(serde_json::Value::String(cell));
                                (h.to_string(), value)
                            })
                            .collect()
                    })
                    .collect();
                let mut doc = serde_json::Map::new();
                doc.insert("schema_version".into(), SCHEMA_VERSION.into());
                doc.insert("rows".into(), serde_json::Value::Array(objects.into_iter().map(Into::into).collect()));
                self.write_json(stem, &doc)
            }
        }
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
