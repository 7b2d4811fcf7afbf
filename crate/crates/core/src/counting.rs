//! The factorized generating function of virtual nodal-curve counts:
//!
//! ```text
//! F(q) = prefactor · ∏(1 - q^i)^{-24} · Θ^reg_{M⊥}(q)
//! ```
//!
//! where `prefactor = -c1(B)[B]` and `Θ^reg` is the weight `rank(M⊥)/2`
//! modular form with constant term 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactq::{eisenstein, yau_zaslow, QSeries};
use crate::fibration::{self, has_errors, Diagnostic, FibrationError, K3FibrationSpec};
use crate::lattice::{
    classify_indefinite_even_unimodular, EvenUnimodularDecomposition, Lattice, LatticeError,
    LatticeInvariants,
};
use crate::modforms::{self, ModFormError};
use crate::Rational;

/// Rank of the K3 lattice `3H ⊕ 2(-E8)`.
pub const K3_LATTICE_RANK: usize = 22;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CountingError {
    #[error("fiber lattice has determinant {0}; only unimodular lattices are supported")]
    NonUnimodular(BigInt),
    #[error("fiber lattice is odd")]
    NotEven,
    #[error("fiber lattice has signature {0}, expected (1, rank - 1)")]
    BadSignature(String),
    #[error("fiber lattice rank {0} exceeds 20")]
    RankTooLarge(usize),
    #[error("spec fails validation:\n{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
    #[error("genus {0} universal factor is not available")]
    UnsupportedGenus(u32),
    #[error("coefficient of q^{index} is {value}, not an integer")]
    NonIntegral { index: usize, value: Rational },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    ModForm(#[from] ModFormError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// Overall sign `-c1(B)[B]`.
    Standard,
    /// Opposite orientation, for comparison with string-theory tables.
    HarveyMoore,
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::Standard => "standard",
            SignConvention::HarveyMoore => "harvey-moore",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReg {
    pub weight: u32,
    pub series: QSeries,
    pub m_perp: EvenUnimodularDecomposition,
    /// False when the weight space is not a line and `Θ^reg = 1` was substituted.
    pub pinned: bool,
    pub warnings: Vec<String>,
}

/// `M⊥` and its regularized theta function for an even unimodular `M` of
/// signature `(1, rank - 1)` inside the K3 lattice.
pub fn theta_reg_for(m: &Lattice, trunc: usize) -> Result<ThetaReg, CountingError> {
    let inv = m.invariants();
    if inv.rank > 20 {
        return Err(CountingError::RankTooLarge(inv.rank));
    }
    if !inv.is_even {
        return Err(CountingError::NotEven);
    }
    if !inv.is_unimodular {
        return Err(CountingError::NonUnimodular(inv.determinant));
    }
    if inv.signature.positive != 1 {
        return Err(CountingError::BadSignature(inv.signature.to_string()));
    }
    let perp_rank = K3_LATTICE_RANK - inv.rank;
    let m_perp = classify_indefinite_even_unimodular(2, perp_rank - 2)?;
    let weight = (perp_rank / 2) as u32;
    match modforms::pin_normalized(weight, trunc) {
        Ok(series) => Ok(ThetaReg {
            weight,
            series,
            m_perp,
            pinned: true,
            warnings: Vec::new(),
        }),
        Err(ModFormError::Underdetermined { dim, .. }) => Ok(ThetaReg {
            weight,
            series: QSeries::one(trunc),
            m_perp,
            pinned: false,
            warnings: vec![format!(
                "weight {weight} space has dimension {dim}; using Θ^reg = 1"
            )],
        }),
        Err(e) => Err(e.into()),
    }
}

/// `prefactor · q/Δ · theta`, truncated to the theta precision.
pub fn factorize(prefactor: &Rational, theta: &QSeries) -> QSeries {
    (&yau_zaslow(theta.trunc()) * theta).scale(prefactor)
}

fn check_integral(f: &QSeries) -> Result<(), CountingError> {
    for (index, c) in f.coeffs().iter().enumerate() {
        if !c.is_integer() {
            return Err(CountingError::NonIntegral {
                index,
                value: c.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountingReport {
    pub spec_name: String,
    pub m_invariants: LatticeInvariants,
    pub m_perp_invariants: LatticeInvariants,
    pub m_perp: EvenUnimodularDecomposition,
    pub weight: u32,
    pub theta_reg: QSeries,
    pub theta_pinned: bool,
    /// Weil–Petersson degree of the spec itself (0 for iso-trivial specs).
    pub wp_degree: Option<Rational>,
    pub defect_sum: Rational,
    pub base_degree: i64,
    pub prefactor: Rational,
    pub convention: SignConvention,
    pub yau_zaslow: QSeries,
    pub f: QSeries,
    pub warnings: Vec<String>,
}

impl CountingReport {
    /// `n_δ`, the coefficient of `q^δ` in `F`.
    pub fn n(&self, delta: usize) -> Result<BigInt, crate::exactq::SeriesError> {
        Ok(self.f.coeff(delta)?.to_integer())
    }

    pub fn n_values(&self) -> Vec<BigInt> {
        self.f.coeffs().iter().map(Rational::to_integer).collect()
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        if convention != self.convention {
            self.prefactor = -self.prefactor;
            self.f = -&self.f;
            self.convention = convention;
        }
        self
    }
}

/// Runs the whole pipeline on a spec. The prefactor is `-c1(B)[B]`, the
/// Weil–Petersson degree after deforming away non-ADE fibers, rather than
/// the spec's own degree.
pub fn generating_function(spec: &K3FibrationSpec, trunc: usize) -> Result<CountingReport, CountingError> {
    let diags = fibration::validate(spec);
    if has_errors(&diags) {
        return Err(CountingError::Invalid(diags));
    }
    let mut warnings: Vec<String> = diags.iter().map(|d| d.to_string()).collect();

    let theta = theta_reg_for(&spec.fiber_lattice, trunc)?;
    warnings.extend(theta.warnings.iter().cloned());

    let base_degree = spec.base_degree();
    let (wp_degree, prefactor) = if spec.calabi_yau {
        let wp = fibration::wp_degree(spec)?;
        (Some(wp), Rational::from_integer(BigInt::from(-base_degree)))
    } else {
        warnings.push("total space is not Calabi-Yau; prefactor set to 0".into());
        (None, Rational::zero())
    };

    let yz = yau_zaslow(trunc);
    let f = factorize(&prefactor, &theta.series);
    check_integral(&f)?;

    Ok(CountingReport {
        spec_name: spec.name.clone(),
        m_invariants: spec.fiber_lattice.invariants(),
        m_perp_invariants: theta.m_perp.build().invariants(),
        m_perp: theta.m_perp,
        weight: theta.weight,
        theta_reg: theta.series,
        theta_pinned: theta.pinned,
        wp_degree,
        defect_sum: spec.defect_sum(),
        base_degree,
        prefactor,
        convention: SignConvention::Standard,
        yau_zaslow: yz,
        f,
        warnings,
    })
}

/// Genus-`g` generating function. Genus 1 multiplies by `E2` and is
/// experimental.
pub fn genus_series(spec: &K3FibrationSpec, genus: u32, trunc: usize) -> Result<QSeries, CountingError> {
    let f = generating_function(spec, trunc)?.f;
    match genus {
        0 => Ok(f),
        1 => Ok(&f * &eisenstein(2, trunc).expect("weight 2 is supported")),
        g => Err(CountingError::UnsupportedGenus(g)),
    }
}

/// Theta series of a definite lattice standing in for `M⊥`, so that
/// [`factorize`] can be fed an enumerated series.
pub fn negative_definite_reference(m_perp: &Lattice, trunc: usize) -> Result<QSeries, LatticeError> {
    m_perp.theta_series(trunc)
}

/// Convenience: the value `-c1(B)[B]` for a base of genus `g`.
pub fn deformation_prefactor(base_genus: u32) -> Rational {
    Rational::from_integer(BigInt::from(2 * base_genus as i64 - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::fixtures::{w0, y0, z0};
    use crate::lattice::{block_embedding, complement_in};
    use num_traits::One;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> QSeries {
        QSeries::from_integers(v.iter().copied())
    }

    #[test]
    fn theta_examples() {
        let t = theta_reg_for(&"H + -E8".parse().unwrap(), 3).unwrap();
        assert_eq!(t.weight, 6);
        assert_eq!(t.series, eisenstein(6, 3).unwrap());
        assert!(t.pinned);
        assert_eq!(t.m_perp.to_string(), "2H + (-E8)");

        let t = theta_reg_for(&Lattice::hyperbolic(), 3).unwrap();
        assert_eq!(t.weight, 10);
        assert_eq!(t.series, modforms::expand(1, 1, 3));

        let t = theta_reg_for(&"H + -E8 + -E8".parse().unwrap(), 3).unwrap();
        assert_eq!(t.weight, 2);
        assert!(!t.pinned);
        assert_eq!(t.series, QSeries::one(3));
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn theta_rejections() {
        assert!(matches!(
            theta_reg_for(&Lattice::rank1(4), 2),
            Err(CountingError::NotEven) | Err(CountingError::NonUnimodular(_))
        ));
        assert!(matches!(
            theta_reg_for(&Lattice::rank1(2), 2),
            Err(CountingError::NonUnimodular(_))
        ));
        assert!(matches!(
            theta_reg_for(&Lattice::rank1(1), 2),
            Err(CountingError::NotEven)
        ));
        assert!(matches!(
            theta_reg_for(&Lattice::e8(), 2),
            Err(CountingError::BadSignature(_))
        ));
    }

    #[test]
    fn classification_matches_complement() {
        let k3 = Lattice::k3();
        for ranges in [vec![0..2], vec![0..2, 6..14]] {
            let emb = block_embedding(22, &ranges);
            let m = Lattice::new(emb.transpose().mul(k3.gram()).mul(&emb)).unwrap();
            let t = theta_reg_for(&m, 0).unwrap();
            let c = complement_in(&k3, &emb).unwrap();
            let built = t.m_perp.build().invariants();
            let direct = c.lattice.invariants();
            assert_eq!(built, direct);
        }
    }

    #[test]
    fn z0_pipeline() {
        let r = generating_function(&z0(), 5).unwrap();
        assert_eq!(r.weight, 6);
        assert_eq!(r.prefactor, Rational::from_integer((-2).into()));
        assert_eq!(r.wp_degree, Some(Rational::zero()));
        assert_eq!(r.n(0).unwrap(), BigInt::from(-2));
        assert_eq!(r.n(1).unwrap(), BigInt::from(960));
        assert!(r.n(6).is_err());
        let flipped = r.clone().with_convention(SignConvention::HarveyMoore);
        assert_eq!(flipped.n(1).unwrap(), BigInt::from(-960));
        assert_eq!(flipped.with_convention(SignConvention::Standard), r);
    }

    #[test]
    fn w0_pipeline() {
        let r = generating_function(&w0(), 1).unwrap();
        assert_eq!(r.weight, 10);
        assert_eq!(r.n_values(), vec![BigInt::from(-2), BigInt::from(480)]);
    }

    #[test]
    fn non_cy_has_zero_prefactor() {
        let toy = K3FibrationSpec {
            name: "toy".into(),
            calabi_yau: false,
            iso_trivial: false,
            fibers: vec![],
            ..z0()
        };
        let r = generating_function(&toy, 4).unwrap();
        assert!(r.f.is_zero());
        assert!(r.warnings.iter().any(|w| w.contains("Calabi-Yau")));
    }

    #[test]
    fn y0_is_not_unimodular() {
        assert!(matches!(
            generating_function(&y0(), 2),
            Err(CountingError::NonUnimodular(_))
        ));
    }

    #[test]
    fn invalid_spec_is_refused() {
        let mut s = z0();
        s.fibers[0].defect = Rational::zero();
        assert!(matches!(generating_function(&s, 2), Err(CountingError::Invalid(_))));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_series(&z0(), 0, 4).unwrap(), generating_function(&z0(), 4).unwrap().f);
        assert_eq!(genus_series(&z0(), 1, 1).unwrap(), ints(&[-2, 1008]));
        assert_eq!(genus_series(&z0(), 2, 1), Err(CountingError::UnsupportedGenus(2)));
    }

    #[test]
    fn mock_definite_complements() {
        let two = Rational::from_integer((-2).into());
        let theta = negative_definite_reference(&Lattice::e8().neg(), 4).unwrap();
        assert_eq!(theta, eisenstein(4, 4).unwrap());
        assert_eq!(factorize(&two, &theta), factorize(&two, &modforms::expand(1, 0, 4)));

        let rank0 = negative_definite_reference(&Lattice::zero(), 4).unwrap();
        assert_eq!(factorize(&two, &rank0), yau_zaslow(4).scale(&two));

        let e8e8 = Lattice::direct_sum(&[Lattice::e8().neg(), Lattice::e8().neg()]);
        assert_eq!(negative_definite_reference(&e8e8, 2).unwrap(), modforms::expand(2, 0, 2));

        assert_eq!(
            negative_definite_reference(&Lattice::hyperbolic(), 2),
            Err(LatticeError::IndefiniteLattice)
        );
    }

    #[test]
    fn prefactor_helper() {
        assert_eq!(deformation_prefactor(0), Rational::from_integer((-2).into()));
        assert!(deformation_prefactor(1).is_zero());
        assert!(Rational::one() + deformation_prefactor(0) < Rational::zero());
    }

    proptest! {
        #[test]
        fn depends_only_on_rank_and_prefactor(which in 0usize..3, swap in any::<bool>(), g in 0u32..3) {
            let m = match which {
                0 => Lattice::hyperbolic(),
                1 => "H + -E8".parse().unwrap(),
                _ => "H + -E8 + -E8".parse().unwrap(),
            };
            let reordered = if swap && m.rank() > 2 {
                let mut parts = vec![Lattice::e8().neg(); (m.rank() - 2) / 8];
                parts.push(Lattice::hyperbolic());
                Lattice::direct_sum(&parts)
            } else {
                m.clone()
            };
            let spec = |lat: Lattice| K3FibrationSpec {
                name: "p".into(),
                base_genus: g,
                euler_total: None,
                calabi_yau: true,
                iso_trivial: false,
                fibers: vec![],
                fiber_lattice: lat,
                b2: None,
            };
            let a = generating_function(&spec(m.clone()), 4).unwrap();
            let b = generating_function(&spec(reordered), 4).unwrap();
            prop_assert_eq!(&a.f, &b.f);
            prop_assert_eq!(a.weight as usize * 2 + m.rank(), K3_LATTICE_RANK);
            let expected = factorize(&deformation_prefactor(g), &a.theta_reg);
            prop_assert_eq!(a.f, expected);
        }
    }
}
