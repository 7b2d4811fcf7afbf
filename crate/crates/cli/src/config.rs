//! TOML fibration configs.

use std::path::Path;
use std::str::FromStr;

use k3nodal::fibration::{
    solve_singular_fiber_count, K3FibrationSpec, SingularFiberSpec, SingularityKind, ODP_FIBER_EULER,
};
use k3nodal::lattice::Lattice;
use k3nodal::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("lattice_M: {0}")]
    Lattice(#[from] k3nodal::lattice::LatticeError),
    #[error("fiber record {index}: {message}")]
    Fiber { index: usize, message: String },
    #[error("{0}")]
    Count(#[from] k3nodal::fibration::FibrationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum FiberKind {
    #[serde(rename = "ADE")]
    Ade,
    #[serde(rename = "quasi_homogeneous")]
    QuasiHomogeneous,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub count: Option<u64>,
    pub euler: Option<i64>,
    pub monodromy_order: Option<u64>,
    pub defect: Option<String>,
    pub kind: FiberKind,
    pub exponents: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationConfig {
    pub name: String,
    pub base_genus: u32,
    pub euler_total: Option<i64>,
    pub calabi_yau: bool,
    pub iso_trivial: bool,
    #[serde(rename = "lattice_M")]
    pub lattice_m: String,
    pub b2: Option<u32>,
    #[serde(default)]
    pub fibers: Vec<FiberConfig>,
}

/// A parsed config together with the digest of its source bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: FibrationConfig,
    pub digest: String,
}

impl FromStr for FibrationConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(toml::from_str(s)?)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn load(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(LoadedConfig {
        config: text.parse()?,
        digest: digest(text.as_bytes()),
    })
}

fn parse_fraction(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!d.is_zero()).then(|| Rational::new(n, d))
}

impl FibrationConfig {
    /// Builds the library spec. A single fiber record may omit `count`; it
    /// is then solved from `euler_total`.
    pub fn to_spec(&self) -> Result<K3FibrationSpec, ConfigError> {
        let fiber_lattice: Lattice = self.lattice_m.parse()?;
        let mut fibers = Vec::with_capacity(self.fibers.len());
        let mut missing = Vec::new();
        for (index, f) in self.fibers.iter().enumerate() {
            let err = |message: &str| ConfigError::Fiber {
                index,
                message: message.to_string(),
            };
            let defect = match &f.defect {
                Some(s) => Some(parse_fraction(s).ok_or_else(|| err("defect must look like \"p/q\""))?),
                None => None,
            };
            let (defect, kind, euler) = match f.kind {
                FiberKind::Ade => {
                    if f.exponents.is_some() {
                        return Err(err("ADE fibers take no exponents"));
                    }
                    (defect.unwrap_or_else(Rational::zero), SingularityKind::Ade, Some(f.euler.unwrap_or(ODP_FIBER_EULER)))
                }
                FiberKind::QuasiHomogeneous => {
                    let defect = match (defect, f.monodromy_order) {
                        (Some(d), None) => d,
                        (None, Some(m)) if m > 0 => Rational::new(BigInt::one(), BigInt::from(m)),
                        (None, Some(_)) => return Err(err("monodromy_order must be positive")),
                        _ => return Err(err("give exactly one of defect and monodromy_order")),
                    };
                    let exponents = f.exponents.clone().ok_or_else(|| err("quasi_homogeneous fibers need exponents"))?;
                    (defect, SingularityKind::QuasiHomogeneous { exponents }, f.euler)
                }
            };
            if f.count.is_none() {
                missing.push(index);
            }
            fibers.push(SingularFiberSpec {
                count: f.count.unwrap_or(0),
                euler,
                monodromy_order: f.monodromy_order,
                defect,
                kind,
            });
        }
        match missing[..] {
            [] => {}
            [index] => {
                let err = |message: &str| ConfigError::Fiber {
                    index,
                    message: message.to_string(),
                };
                let chi = self.euler_total.ok_or_else(|| err("count omitted and no euler_total to solve it from"))?;
                let e = fibers[index].euler.ok_or_else(|| err("count omitted and the fiber Euler number is unknown"))?;
                let others: i64 = fibers
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != index)
                    .map(|(_, f)| f.euler.map(|e| f.count as i64 * (24 - e)).ok_or_else(|| err("other fiber Euler numbers are unknown")))
                    .sum::<Result<i64, _>>()?;
                fibers[index].count = solve_singular_fiber_count(chi + others, self.base_genus, e)?;
            }
            _ => {
                return Err(ConfigError::Fiber {
                    index: missing[1],
                    message: "only one fiber record may omit count".into(),
                })
            }
        }
        Ok(K3FibrationSpec {
            name: self.name.clone(),
            base_genus: self.base_genus,
            euler_total: self.euler_total,
            calabi_yau: self.calabi_yau,
            iso_trivial: self.iso_trivial,
            fibers,
            fiber_lattice,
            b2: self.b2,
        })
    }
}
