//! Machine-readable counting report. Field order is the serialization
//! order; all exact numbers are decimal strings.

use k3nodal::counting::CountingReport;
use k3nodal::exactq::QSeries;
use k3nodal::lattice::LatticeInvariants;
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "k3nodal";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub metadata: Metadata,
    pub lattices: Lattices,
    pub theta: Theta,
    pub degrees: Degrees,
    pub series: Series,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub config_digest: String,
    pub spec_name: String,
    pub truncation: usize,
    pub sign_convention: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeEntry {
    pub description: String,
    pub rank: usize,
    pub signature: [usize; 2],
    pub determinant: String,
    pub even: bool,
    pub unimodular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattices {
    #[serde(rename = "M")]
    pub m: LatticeEntry,
    #[serde(rename = "M_perp")]
    pub m_perp: LatticeEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theta {
    pub weight: u32,
    pub pinned: bool,
    pub theta_reg: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Degrees {
    pub base_degree: i64,
    pub wp_degree: Option<String>,
    pub defect_sum: String,
    pub prefactor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub yau_zaslow: Vec<String>,
    pub n: Vec<String>,
}

fn lattice_entry(description: String, inv: &LatticeInvariants) -> LatticeEntry {
    LatticeEntry {
        description,
        rank: inv.rank,
        signature: [inv.signature.positive, inv.signature.negative],
        determinant: inv.determinant.to_string(),
        even: inv.is_even,
        unimodular: inv.is_unimodular,
    }
}

fn decimal(s: &QSeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

impl Report {
    pub fn new(r: &CountingReport, m_label: &str, digest: &str) -> Self {
        Report {
            metadata: Metadata {
                tool: TOOL.into(),
                version: env!("CARGO_PKG_VERSION").into(),
                config_digest: digest.into(),
                spec_name: r.spec_name.clone(),
                truncation: r.f.trunc(),
                sign_convention: r.convention.to_string(),
            },
            lattices: Lattices {
                m: lattice_entry(m_label.into(), &r.m_invariants),
                m_perp: lattice_entry(r.m_perp.to_string(), &r.m_perp_invariants),
            },
            theta: Theta {
                weight: r.weight,
                pinned: r.theta_pinned,
                theta_reg: decimal(&r.theta_reg),
            },
            degrees: Degrees {
                base_degree: r.base_degree,
                wp_degree: r.wp_degree.as_ref().map(|w| w.to_string()),
                defect_sum: r.defect_sum.to_string(),
                prefactor: r.prefactor.to_string(),
            },
            series: Series {
                yau_zaslow: decimal(&r.yau_zaslow),
                n: decimal(&r.f),
            },
            warnings: r.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
