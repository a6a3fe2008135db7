//! Artifact files: `resonances.csv`, its JSON mirror and `barrier.json`.

use std::fs;
use std::io::Write;
use std::path::Path;

use reslab::airy_model::{BcKind, BoundaryCondition};
use reslab::resonance::{BarrierReport, ResonanceEntry, ResonanceQuery, ResonanceSet, ZeroClass};
use reslab::C64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const RESONANCE_CSV: &str = "resonances.csv";
pub const RESONANCE_JSON: &str = "resonances.json";
pub const BARRIER_JSON: &str = "barrier.json";

/// One row of `resonances.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub l: usize,
    pub re_zeta: f64,
    pub im_zeta: f64,
    pub residual: f64,
    pub class: String,
    pub bc: String,
    pub gamma: f64,
    pub radius: f64,
}

pub fn bc_name(kind: BcKind) -> &'static str {
    match kind {
        BcKind::Dirichlet => "dirichlet",
        BcKind::Neumann => "neumann",
        BcKind::Robin => "robin",
    }
}

pub fn parse_bc(name: &str, gamma: f64) -> Result<BoundaryCondition<f64>, CliError> {
    match name {
        "dirichlet" => Ok(BoundaryCondition::dirichlet()),
        "neumann" => Ok(BoundaryCondition::neumann()),
        "robin" => Ok(BoundaryCondition::robin(gamma)),
        other => Err(CliError::Usage(format!(
            "unknown boundary condition '{other}' (expected dirichlet, neumann or robin)"
        ))),
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn resonance_csv(set: &ResonanceSet<f64>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let q = &set.query;
    for e in &set.entries {
        w.serialize(ResonanceRow {
            l: e.l,
            re_zeta: e.zeta.re,
            im_zeta: e.zeta.im,
            residual: e.residual,
            class: e.class.as_str().to_string(),
            bc: bc_name(q.bc.kind).to_string(),
            gamma: q.bc.gamma,
            radius: q.radius,
        })?;
    }
    if set.entries.is_empty() {
        w.write_record(["l", "re_zeta", "im_zeta", "residual", "class", "bc", "gamma", "radius"])?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn pretty_json<S: Serialize>(value: &S) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct BarrierJson<'a> {
    #[serde(rename = "S")]
    s: f64,
    #[serde(rename = "C_fit")]
    c_fit: f64,
    #[serde(rename = "S_fit")]
    s_fit: Option<f64>,
    stderr: Option<f64>,
    n_entries: usize,
    l_range: (usize, usize),
    violations: Vec<&'a ResonanceEntry<f64>>,
}

pub fn barrier_json(report: &BarrierReport<f64>) -> Result<Vec<u8>, CliError> {
    pretty_json(&BarrierJson {
        s: report.s,
        c_fit: report.c_fit,
        s_fit: report.s_fit,
        stderr: report.stderr,
        n_entries: report.n_entries,
        l_range: report.l_range,
        violations: report.violations.iter().collect(),
    })
}

/// Reads `resonances.csv` back into a set. All rows must share one boundary
/// condition and radius; the query echo is rebuilt from them.
pub fn read_resonance_csv(path: &Path) -> Result<ResonanceSet<f64>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut entries = Vec::new();
    let mut meta: Option<(String, f64, f64)> = None;
    for row in r.deserialize() {
        let row: ResonanceRow = row?;
        let key = (row.bc.clone(), row.gamma, row.radius);
        match &meta {
            None => meta = Some(key),
            Some(m) if *m != key => {
                return Err(CliError::Usage(format!(
                    "{}: rows mix boundary conditions or radii",
                    path.display()
                )))
            }
            Some(_) => {}
        }
        entries.push(ResonanceEntry {
            l: row.l,
            zeta: C64::new(row.re_zeta, row.im_zeta),
            residual: row.residual,
            class: ZeroClass::parse(&row.class)?,
        });
    }
    let Some((bc, gamma, radius)) = meta else {
        return Err(CliError::Core(reslab::Error::EmptySet));
    };
    let l_min = entries.iter().map(|e| e.l).min().unwrap_or(0);
    let l_max = entries.iter().map(|e| e.l).max().unwrap_or(0);
    let query = ResonanceQuery::new(radius, parse_bc(&bc, gamma)?, l_min, l_max);
    Ok(ResonanceSet { entries, query })
}
