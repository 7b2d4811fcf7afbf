//! Declarative K3 fibrations over a curve and the numerical identities
//! that hold for them: Euler-number bookkeeping for singular fibers, the
//! Weil–Petersson degree and local defects, dimension counts for nodal
//! curves, and a few classical formulas (adjunction, Milnor numbers).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::Lattice;
use crate::Rational;

/// Euler number of a smooth K3 surface.
pub const K3_EULER: i64 = 24;

/// Euler number of a K3 fiber with a single ordinary double point.
pub const ODP_FIBER_EULER: i64 = 23;

/// Largest possible rank of the fiberwise lattice.
pub const MAX_FIBER_LATTICE_RANK: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error("Euler data gives a singular fiber count of {numerator}/{denominator}, not a non-negative integer")]
    NonIntegralCount { numerator: i64, denominator: i64 },
    #[error("a singular fiber cannot have the Euler number of a smooth K3 ({K3_EULER})")]
    SmoothFiberEuler,
    #[error("the Weil-Petersson identities need a Calabi-Yau total space")]
    NotCalabiYau,
    #[error("iso-trivial fibration has Weil-Petersson degree {0}, expected 0")]
    DefectMismatch(Rational),
    #[error("genus {genus} is outside 0..={max} for C^2 = {c_squared}")]
    GenusOutOfRange { c_squared: i64, genus: i64, max: i64 },
    #[error("self-intersection {0} must be even")]
    OddSelfIntersection(i64),
    #[error("adjunction needs C^2 >= -2, got {0}")]
    SquareTooNegative(i64),
    #[error("Brieskorn exponents must all be at least 2")]
    InvalidExponent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularityKind {
    /// Rational double point.
    Ade,
    /// `x_1^{a_1} + … + x_n^{a_n}` and its deformations.
    QuasiHomogeneous { exponents: Vec<u32> },
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityKind::Ade => write!(f, "ADE"),
            SingularityKind::QuasiHomogeneous { exponents } => {
                let e: Vec<String> = exponents.iter().map(u32::to_string).collect();
                write!(f, "quasi-homogeneous({})", e.join(","))
            }
        }
    }
}

/// `count` identical singular fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularFiberSpec {
    pub count: u64,
    /// Euler number of one such fiber, when known.
    pub euler: Option<i64>,
    pub monodromy_order: Option<u64>,
    /// Local defect `arg(λ)/2π` of the monodromy eigenvalue on holomorphic two-forms.
    pub defect: Rational,
    pub kind: SingularityKind,
}

impl SingularFiberSpec {
    /// ODP fibers: Euler number 23, defect 0.
    pub fn ordinary_double_points(count: u64) -> Self {
        SingularFiberSpec {
            count,
            euler: Some(ODP_FIBER_EULER),
            monodromy_order: None,
            defect: Rational::zero(),
            kind: SingularityKind::Ade,
        }
    }

    /// Quasi-homogeneous fibers whose defect is `1/monodromy_order`.
    pub fn quasi_homogeneous(count: u64, exponents: Vec<u32>, monodromy_order: u64) -> Self {
        SingularFiberSpec {
            count,
            euler: None,
            monodromy_order: Some(monodromy_order),
            defect: Rational::new(BigInt::one(), BigInt::from(monodromy_order)),
            kind: SingularityKind::QuasiHomogeneous { exponents },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K3FibrationSpec {
    pub name: String,
    pub base_genus: u32,
    pub euler_total: Option<i64>,
    pub calabi_yau: bool,
    pub iso_trivial: bool,
    pub fibers: Vec<SingularFiberSpec>,
    pub fiber_lattice: Lattice,
    pub b2: Option<u32>,
}

impl K3FibrationSpec {
    /// `c1(B)[B] = 2 - 2g`.
    pub fn base_degree(&self) -> i64 {
        2 - 2 * self.base_genus as i64
    }

    pub fn singular_fiber_count(&self) -> u64 {
        self.fibers.iter().map(|f| f.count).sum()
    }

    pub fn defect_sum(&self) -> Rational {
        self.fibers
            .iter()
            .map(|f| &f.defect * Rational::from_integer(BigInt::from(f.count)))
            .sum()
    }

    /// `χ(X) = 24·(2-2g) - Σ count·(24 - e)`, when every fiber Euler number is known.
    pub fn euler_from_fibers(&self) -> Option<i64> {
        let mut chi = K3_EULER * self.base_degree();
        for f in &self.fibers {
            chi -= f.count as i64 * (K3_EULER - f.euler?);
        }
        Some(chi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
        }
    }

    fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Checks a spec against the structural constraints of a tamed K3
/// fibration. Never fails; all findings are returned as diagnostics.
pub fn validate(spec: &K3FibrationSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let inv = spec.fiber_lattice.invariants();

    if inv.rank > MAX_FIBER_LATTICE_RANK {
        out.push(Diagnostic::error(
            "b2-bound",
            format!(
                "fiber lattice has rank {}, exceeding the bound {MAX_FIBER_LATTICE_RANK}",
                inv.rank
            ),
        ));
    }
    if inv.rank > 0 && (inv.is_degenerate() || inv.signature.positive != 1) {
        out.push(Diagnostic::error(
            "lattice-signature",
            format!(
                "fiber lattice must have signature (1, {}), found {}{}",
                inv.rank - 1,
                inv.signature,
                if inv.is_degenerate() { " (degenerate)" } else { "" }
            ),
        ));
    }
    if let Some(b2) = spec.b2 {
        if b2 as usize != inv.rank + 1 {
            out.push(Diagnostic::warning(
                "b2-rank",
                format!(
                    "b2 = {b2} but the fiber lattice has rank {} (expected b2 - 1)",
                    inv.rank
                ),
            ));
        }
    }

    for (i, f) in spec.fibers.iter().enumerate() {
        let tag = format!("fiber record {i}");
        if f.count == 0 {
            out.push(Diagnostic::error("fiber-count", format!("{tag}: count must be positive")));
        }
        if f.defect.is_negative() || f.defect >= Rational::one() {
            out.push(Diagnostic::error(
                "defect-range",
                format!("{tag}: defect {} outside [0, 1)", f.defect),
            ));
        }
        match &f.kind {
            SingularityKind::Ade => {
                if !f.defect.is_zero() {
                    out.push(Diagnostic::error(
                        "ade-defect",
                        format!("{tag}: ADE forces defect 0, found {}", f.defect),
                    ));
                }
            }
            SingularityKind::QuasiHomogeneous { exponents } => {
                if f.defect.is_zero() {
                    out.push(Diagnostic::error(
                        "ade-defect",
                        format!("{tag}: non-ADE singular fiber with defect 0"),
                    ));
                }
                if exponents.iter().any(|&a| a < 2) {
                    out.push(Diagnostic::error(
                        "exponents",
                        format!("{tag}: Brieskorn exponents must be at least 2"),
                    ));
                }
            }
        }
        if f.monodromy_order == Some(0) {
            out.push(Diagnostic::error(
                "not-tame",
                format!("{tag}: monodromy order must be finite and positive"),
            ));
        }
        if let Some(m) = f.monodromy_order.filter(|&m| m > 0) {
            // exp(2πi·defect) must be an m-th root of unity
            let scaled = &f.defect * Rational::from_integer(BigInt::from(m));
            if !scaled.is_integer() {
                out.push(Diagnostic::error(
                    "not-tame",
                    format!("{tag}: defect {} incompatible with monodromy order {m}", f.defect),
                ));
            }
        }
        if f.euler == Some(K3_EULER) {
            out.push(Diagnostic::error(
                "fiber-euler",
                format!("{tag}: a singular fiber cannot have Euler number {K3_EULER}"),
            ));
        }
    }

    if let (Some(chi), Some(from_fibers)) = (spec.euler_total, spec.euler_from_fibers()) {
        if chi != from_fibers {
            out.push(Diagnostic::error(
                "euler-mismatch",
                format!("euler_total {chi} but singular fibers account for {from_fibers}"),
            ));
        }
    }

    if spec.iso_trivial && !spec.calabi_yau {
        out.push(Diagnostic::warning(
            "iso-trivial",
            "iso-trivial flag has no consequence without the Calabi-Yau condition",
        ));
    }
    out
}

/// Number of singular fibers of Euler number `e` forced by the total
/// Euler number: `(24·(2-2g) - χ) / (24 - e)`.
pub fn solve_singular_fiber_count(
    chi_total: i64,
    base_genus: u32,
    singular_fiber_euler: i64,
) -> Result<u64, FibrationError> {
    let denominator = K3_EULER - singular_fiber_euler;
    if denominator == 0 {
        return Err(FibrationError::SmoothFiberEuler);
    }
    let numerator = K3_EULER * (2 - 2 * base_genus as i64) - chi_total;
    if numerator % denominator != 0 || numerator / denominator < 0 {
        return Err(FibrationError::NonIntegralCount {
            numerator,
            denominator,
        });
    }
    Ok((numerator / denominator) as u64)
}

/// Total Euler number of a fibration with `count` singular fibers of Euler number `e`.
pub fn euler_total_for(count: u64, base_genus: u32, singular_fiber_euler: i64) -> i64 {
    K3_EULER * (2 - 2 * base_genus as i64) - count as i64 * (K3_EULER - singular_fiber_euler)
}

/// Balance of the harmonic energy of a Calabi–Yau K3 fibration:
/// `wp_degree + defect_sum = c1(B)[B]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectBalance {
    pub wp_degree: Rational,
    pub defect_sum: Rational,
    pub base_degree: i64,
    pub iso_trivial: bool,
}

impl DefectBalance {
    pub fn holds(&self) -> bool {
        &self.wp_degree + &self.defect_sum == Rational::from_integer(BigInt::from(self.base_degree))
    }
}

impl fmt::Display for DefectBalance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "wp {} + defects {} = c1(B)[B] {} {}",
            self.wp_degree,
            self.defect_sum,
            self.base_degree,
            if self.holds() { "✓" } else { "✗" }
        )
    }
}

pub fn defect_balance(spec: &K3FibrationSpec) -> Result<DefectBalance, FibrationError> {
    if !spec.calabi_yau {
        return Err(FibrationError::NotCalabiYau);
    }
    let defect_sum = spec.defect_sum();
    let wp_degree = Rational::from_integer(BigInt::from(spec.base_degree())) - &defect_sum;
    if spec.iso_trivial && !wp_degree.is_zero() {
        return Err(FibrationError::DefectMismatch(wp_degree));
    }
    Ok(DefectBalance {
        wp_degree,
        defect_sum,
        base_degree: spec.base_degree(),
        iso_trivial: spec.iso_trivial,
    })
}

/// Weil–Petersson degree of the classifying map of a Calabi–Yau spec.
pub fn wp_degree(spec: &K3FibrationSpec) -> Result<Rational, FibrationError> {
    defect_balance(spec).map(|b| b.wp_degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub c_squared: i64,
    pub genus: i64,
    /// Number of nodes `C²/2 + 1 - g`.
    pub nodes: i64,
    /// Expected dimension `C²/2 + dim B` of the family of smooth curves.
    pub family_dim: i64,
    /// Grade `C² - 3g + 3` of the class cutting out genus-`g` nodal curves.
    pub eta_grade: i64,
}

/// Base dimension; only fibrations over curves are modeled.
pub const BASE_DIM: i64 = 1;

pub fn expected_dimensions(c_squared: i64, genus: i64) -> Result<DimensionReport, FibrationError> {
    if c_squared % 2 != 0 {
        return Err(FibrationError::OddSelfIntersection(c_squared));
    }
    let max = c_squared / 2 + 1;
    if genus < 0 || genus > max {
        return Err(FibrationError::GenusOutOfRange {
            c_squared,
            genus,
            max,
        });
    }
    Ok(DimensionReport {
        c_squared,
        genus,
        nodes: max - genus,
        family_dim: c_squared / 2 + BASE_DIM,
        eta_grade: c_squared - 3 * genus + 3,
    })
}

/// Expected dimension of the family moduli where a class of square `C²`
/// and exceptional classes of the given squares coexist, with the
/// canonical-class terms zero on K3 fibers.
pub fn coexistence_dimension(c_squared: i64, exceptional_squares: &[i64]) -> i64 {
    BASE_DIM + c_squared / 2 + exceptional_squares.iter().map(|e| e / 2).sum::<i64>()
}

/// Even values `t` with `-2 - x² ≤ t ≤ -2`: the squares `y²` that can
/// contribute alongside `x²`. The `y = 0` term is handled by the theta
/// constant term and is not listed.
pub fn admissible_y_squares(x_squared: i64) -> Vec<i64> {
    let lo = -2 - x_squared;
    let lo = if lo % 2 == 0 { lo } else { lo + 1 };
    (lo..=-2).step_by(2).collect()
}

/// Milnor number `∏(a_i - 1)` of `x_1^{a_1} + … + x_n^{a_n}`.
pub fn milnor_brieskorn(exponents: &[u32]) -> Result<u64, FibrationError> {
    if exponents.iter().any(|&a| a < 2) {
        return Err(FibrationError::InvalidExponent);
    }
    Ok(exponents.iter().map(|&a| (a - 1) as u64).product())
}

/// Genus `C²/2 + 1` of a smooth curve in a class on a K3 surface.
pub fn adjunction_genus(c_squared: i64) -> Result<i64, FibrationError> {
    if c_squared % 2 != 0 {
        return Err(FibrationError::OddSelfIntersection(c_squared));
    }
    if c_squared < -2 {
        return Err(FibrationError::SquareTooNegative(c_squared));
    }
    Ok(c_squared / 2 + 1)
}
