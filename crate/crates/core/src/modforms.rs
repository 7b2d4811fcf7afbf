//! Level-one modular forms in the monomial basis `E4^a E6^b`.
//!
//! The ring of holomorphic modular forms for `SL2(Z)` is the polynomial ring
//! in `E4` and `E6`, so the weight-`k` space has the monomials with
//! `4a + 6b = k` as a basis. When that space is one-dimensional a form is
//! determined by its constant term; [`pin_normalized`] returns the unique
//! form with constant term 1. This is how the regularized theta function of
//! a transcendental lattice is obtained once its weight is known.

use num_traits::Zero;

use crate::exactq::{eisenstein, QSeries};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModFormError {
    #[error("weight {0} is odd; level-one forms have even weight")]
    OddWeight(u32),
    #[error("weight {weight} space has dimension {dim}; normalization alone does not determine a form")]
    Underdetermined { weight: u32, dim: usize },
    #[error("series is not a weight {weight} modular form (first mismatch at q^{mismatch_at})")]
    NotInSpace { weight: u32, mismatch_at: usize },
    #[error("series known through q^{trunc} but weight {weight} needs at least q^{needed}")]
    InsufficientPrecision { weight: u32, trunc: usize, needed: usize },
}

/// The weight-`k` space, with monomial exponents `(a, b)` ordered by descending `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModFormSpace {
    weight: u32,
    monomials: Vec<(u32, u32)>,
}

impl ModFormSpace {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn monomials(&self) -> &[(u32, u32)] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// Odd weights give an empty space; use [`try_space`] to have that reported.
pub fn space(weight: u32) -> ModFormSpace {
    let monomials = (0..=weight / 4)
        .rev()
        .filter_map(|a| {
            let rest = weight - 4 * a;
            (rest % 6 == 0).then_some((a, rest / 6))
        })
        .collect();
    ModFormSpace { weight, monomials }
}

pub fn try_space(weight: u32) -> Result<ModFormSpace, ModFormError> {
    if weight % 2 == 1 {
        return Err(ModFormError::OddWeight(weight));
    }
    Ok(space(weight))
}

/// `E4^a · E6^b` through `q^trunc`.
pub fn expand(a: u32, b: u32, trunc: usize) -> QSeries {
    let e4 = eisenstein(4, trunc).expect("weight 4 is supported");
    let e6 = eisenstein(6, trunc).expect("weight 6 is supported");
    &e4.pow(a) * &e6.pow(b)
}

/// The unique weight-`k` form with constant term 1, when the space is a line.
pub fn pin_normalized(weight: u32, trunc: usize) -> Result<QSeries, ModFormError> {
    let sp = try_space(weight)?;
    match sp.monomials() {
        [(a, b)] => Ok(expand(*a, *b, trunc)),
        _ => Err(ModFormError::Underdetermined {
            weight,
            dim: sp.dim(),
        }),
    }
}

/// Coordinates of `f` in the monomial basis of weight `k`.
///
/// The first `dim` coefficients fix the coordinates; every further known
/// coefficient is then checked exactly.
pub fn express_in_basis(f: &QSeries, weight: u32) -> Result<Vec<Rational>, ModFormError> {
    let sp = try_space(weight)?;
    let dim = sp.dim();
    let trunc = f.trunc();
    if dim == 0 {
        return match f.coeffs().iter().position(|c| !c.is_zero()) {
            None => Ok(Vec::new()),
            Some(i) => Err(ModFormError::NotInSpace {
                weight,
                mismatch_at: i,
            }),
        };
    }
    if trunc + 1 < dim {
        return Err(ModFormError::InsufficientPrecision {
            weight,
            trunc,
            needed: dim - 1,
        });
    }
    let basis: Vec<QSeries> = sp
        .monomials()
        .iter()
        .map(|&(a, b)| expand(a, b, trunc))
        .collect();
    // rows: coefficient index n < dim; columns: basis elements
    let matrix: Vec<Vec<Rational>> = (0..dim)
        .map(|n| basis.iter().map(|s| s.coeffs()[n].clone()).collect())
        .collect();
    let rhs: Vec<Rational> = f.coeffs()[..dim].to_vec();
    let coords = solve(matrix, rhs).expect("leading coefficients of the monomial basis are independent");

    for n in dim..=trunc {
        let predicted: Rational = basis
            .iter()
            .zip(&coords)
            .map(|(s, c)| c * &s.coeffs()[n])
            .sum();
        if predicted != f.coeffs()[n] {
            return Err(ModFormError::NotInSpace {
                weight,
                mismatch_at: n,
            });
        }
    }
    Ok(coords)
}

/// Gaussian elimination over Q; `None` if singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}
