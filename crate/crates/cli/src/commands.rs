//! Subcommand implementations. Each returns the full text to print.

use std::fmt::Write as _;
use std::path::Path;

use k3nodal::counting::{generating_function, CountingError, SignConvention};
use k3nodal::exactq::{delta, eisenstein, yau_zaslow, QSeries};
use k3nodal::fibration::{self, defect_balance, expected_dimensions, has_errors};
use k3nodal::lattice::Lattice;

use crate::config::{self, ConfigError};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("validation failed:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Invalid(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CountingError> for CliError {
    fn from(e: CountingError) -> Self {
        match e {
            CountingError::NonIntegral { .. } => CliError::Internal(e.to_string()),
            CountingError::Invalid(d) => CliError::Invalid(d.iter().map(|d| d.to_string()).collect()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesKind {
    E2,
    E4,
    E6,
    Delta,
    Yz,
}

fn coefficient_lines(s: &QSeries) -> String {
    let mut out = String::new();
    for (n, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{n}: {c}").unwrap();
    }
    out
}

pub fn series(kind: SeriesKind, trunc: usize) -> Result<String, CliError> {
    let s = match kind {
        SeriesKind::E2 => eisenstein(2, trunc),
        SeriesKind::E4 => eisenstein(4, trunc),
        SeriesKind::E6 => eisenstein(6, trunc),
        SeriesKind::Delta => Ok(delta(trunc)),
        SeriesKind::Yz => Ok(yau_zaslow(trunc)),
    }
    .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(coefficient_lines(&s))
}

pub fn lattice(expr: &str, theta: Option<usize>) -> Result<String, CliError> {
    let lat: Lattice = expr.parse().map_err(|e: k3nodal::lattice::LatticeError| CliError::Input(e.to_string()))?;
    match theta {
        None => Ok(format!("{}\n", lat.invariants())),
        Some(n) => {
            let t = lat.theta_series(n).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(coefficient_lines(&t))
        }
    }
}

pub struct CountOutput {
    pub table: String,
    pub report: Report,
}

pub fn count(config_path: &Path, trunc: usize, hm_sign: bool) -> Result<CountOutput, CliError> {
    let loaded = config::load(config_path)?;
    let spec = loaded.config.to_spec()?;
    let convention = if hm_sign { SignConvention::HarveyMoore } else { SignConvention::Standard };
    let r = generating_function(&spec, trunc)?.with_convention(convention);
    let report = Report::new(&r, &loaded.config.lattice_m, &loaded.digest);

    let mut t = String::new();
    writeln!(t, "spec {}", r.spec_name).unwrap();
    writeln!(t, "M = {}: {}", loaded.config.lattice_m, r.m_invariants).unwrap();
    writeln!(t, "M_perp = {}: {}", r.m_perp, r.m_perp_invariants).unwrap();
    writeln!(
        t,
        "weight {}, theta_reg = {}{}",
        r.weight,
        r.theta_reg,
        if r.theta_pinned { "" } else { " (fallback)" }
    )
    .unwrap();
    let wp = r.wp_degree.as_ref().map_or("n/a".to_string(), |w| w.to_string());
    writeln!(
        t,
        "wp_prefactor {} (c1(B)[B] {}, spec wp degree {wp}, defects {}, sign {})",
        r.prefactor, r.base_degree, r.defect_sum, r.convention
    )
    .unwrap();
    for (d, n) in r.n_values().iter().enumerate() {
        writeln!(t, "n_{d} = {n}").unwrap();
    }
    for w in &r.warnings {
        writeln!(t, "warning: {w}").unwrap();
    }
    Ok(CountOutput { table: t, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibrationCheck {
    Validate,
    Euler,
    Defect,
    Dims { c_squared: i64, genus: i64 },
}

pub fn fibration(config_path: &Path, check: FibrationCheck) -> Result<String, CliError> {
    let loaded = config::load(config_path)?;
    let spec = loaded.config.to_spec()?;
    let diags = fibration::validate(&spec);
    if has_errors(&diags) {
        return Err(CliError::Invalid(diags.iter().map(|d| d.to_string()).collect()));
    }
    let mut out = String::new();
    match check {
        FibrationCheck::Validate => {
            if diags.is_empty() {
                writeln!(out, "{}: no violations", spec.name).unwrap();
            }
            for d in &diags {
                writeln!(out, "{d}").unwrap();
            }
        }
        FibrationCheck::Euler => {
            writeln!(out, "singular fibers: {}", spec.singular_fiber_count()).unwrap();
        }
        FibrationCheck::Defect => {
            let b = defect_balance(&spec).map_err(|e| CliError::Input(e.to_string()))?;
            writeln!(out, "{b}").unwrap();
        }
        FibrationCheck::Dims { c_squared, genus } => {
            let r = expected_dimensions(c_squared, genus).map_err(|e| CliError::Input(e.to_string()))?;
            writeln!(out, "C^2 = {}, g = {}", r.c_squared, r.genus).unwrap();
            writeln!(out, "nodes l = {}", r.nodes).unwrap();
            writeln!(out, "family_dim = {}", r.family_dim).unwrap();
            writeln!(out, "eta_grade = {}", r.eta_grade).unwrap();
        }
    }
    Ok(out)
}
