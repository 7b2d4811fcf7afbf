//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] knows its coefficients through `q^N` inclusive, where `N` is
//! the truncation order. Binary operations return a series truncated at the
//! smaller of the two orders, and asking for a coefficient past the
//! truncation order is an error rather than an implicit zero.
//!
//! The module also provides the classical level-one series: Eisenstein
//! series `E2`, `E4`, `E6`, the discriminant `Δ = q∏(1-q^n)^24` and the
//! Yau–Zaslow series `q/Δ = ∏(1-q^n)^-24`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,
    #[error("exponential needs a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("logarithm needs a series with constant term 1")]
    LogConstantTerm,
    #[error("no Eisenstein series of weight {0} is provided (supported: 2, 4, 6)")]
    UnsupportedWeight(u32),
    #[error("coefficient q^{index} requested but the series is only known through q^{trunc}")]
    BeyondTruncation { index: usize, trunc: usize },
}

/// A power series `Σ a_n q^n` known through `q^trunc`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from its coefficients `a_0..=a_N`; the truncation
    /// order is `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        QSeries { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(trunc: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c·q^k`, truncated at `trunc` (zero if `k > trunc`).
    pub fn monomial(c: Rational, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `q`.
    pub fn q(trunc: usize) -> Self {
        Self::monomial(Rational::one(), 1, trunc)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Result<&Rational, SeriesError> {
        self.coeffs.get(index).ok_or(SeriesError::BeyondTruncation {
            index,
            trunc: self.trunc(),
        })
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops all coefficients past `q^n`. Truncating to a higher order than
    /// the current one is a no-op: precision is never invented.
    pub fn truncate(&self, n: usize) -> Self {
        let keep = n.min(self.trunc()) + 1;
        QSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Coefficients as integers, or `None` if any coefficient has a
    /// nontrivial denominator.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    /// Cauchy product through the common truncation order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.trunc());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse through the same truncation order.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let a0_inv = a0.recip();
        let n = self.trunc();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(a0_inv.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            out.push(-acc * &a0_inv);
        }
        Ok(QSeries { coeffs: out })
    }

    /// `exp(self)` for a series without constant term, via `n g_n = Σ k f_k g_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.trunc();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                let f = &self.coeffs[k];
                if !f.is_zero() {
                    acc += f * &out[m - k] * Rational::from_integer(BigInt::from(k));
                }
            }
            out.push(acc / Rational::from_integer(BigInt::from(m)));
        }
        Ok(QSeries { coeffs: out })
    }

    /// Term-by-term logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let n = self.trunc();
        let mut out: Vec<Rational> = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * Rational::from_integer(BigInt::from(m));
            for k in 1..m {
                let g = &self.coeffs[m - k];
                if !g.is_zero() {
                    acc -= &out[k] * g * Rational::from_integer(BigInt::from(k));
                }
            }
            out[m] = acc / Rational::from_integer(BigInt::from(m));
        }
        Ok(QSeries { coeffs: out })
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

/// Renders as `1 + 240q + 2160q^2 + O(q^3)`.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = n == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match n {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Bernoulli numbers `B_0..=B_n` from `Σ_{j≤m} C(m+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // row of binomials C(m+1, j)
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(m+1, m)
        b.push(-acc / Rational::from_integer(binom));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// Divisor power sums `σ_k(n)` for `n = 0..=limit` (with `σ_k(0) = 0`), by sieving.
pub fn divisor_sums(k: u32, limit: usize) -> Vec<BigInt> {
    let mut sums = vec![BigInt::zero(); limit + 1];
    for d in 1..=limit {
        let dk: BigInt = Pow::pow(BigInt::from(d), k);
        let mut m = d;
        while m <= limit {
            sums[m] += &dk;
            m += d;
        }
    }
    sums
}

/// `E_k = 1 + (-2k/B_k) Σ σ_{k-1}(n) q^n` for `k ∈ {2, 4, 6}`.
pub fn eisenstein(k: u32, trunc: usize) -> Result<QSeries, SeriesError> {
    if !matches!(k, 2 | 4 | 6) {
        return Err(SeriesError::UnsupportedWeight(k));
    }
    let bk = bernoulli(k as usize);
    let factor = Rational::from_integer(BigInt::from(-2 * k as i64)) / bk;
    let sigma = divisor_sums(k - 1, trunc);
    let mut coeffs: Vec<Rational> = sigma
        .into_iter()
        .map(|s| &factor * Rational::from_integer(s))
        .collect();
    coeffs[0] = Rational::one();
    Ok(QSeries::from_coeffs(coeffs))
}

/// `∏_{i=1}^{N} (1 - q^i)^power` through `q^N`, by repeated shift-subtract.
fn euler_product_power(power: u32, trunc: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); trunc + 1];
    c[0] = BigInt::one();
    for i in 1..=trunc {
        for _ in 0..power {
            for n in (i..=trunc).rev() {
                let t = c[n - i].clone();
                c[n] -= t;
            }
        }
    }
    c
}

/// `Δ = q ∏_{i≥1} (1 - q^i)^24` through `q^N`.
pub fn delta(trunc: usize) -> QSeries {
    let prod = euler_product_power(24, trunc);
    let mut coeffs = vec![BigInt::zero(); trunc + 1];
    for n in 1..=trunc {
        coeffs[n] = prod[n - 1].clone();
    }
    QSeries::from_integers(coeffs)
}

/// The Yau–Zaslow series `q/Δ = ∏_{i≥1} (1 - q^i)^-24` through `q^N`.
///
/// Each factor `1/(1 - q^i)` is applied as a stepped prefix sum, so the
/// result is integral by construction and independent of [`QSeries::inv`].
pub fn yau_zaslow(trunc: usize) -> QSeries {
    let mut c = vec![BigInt::zero(); trunc + 1];
    c[0] = BigInt::one();
    for i in 1..=trunc {
        for _ in 0..24 {
            for n in i..=trunc {
                let t = c[n - i].clone();
                c[n] += t;
            }
        }
    }
    QSeries::from_integers(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_cancels_and_identity() {
        let a = QSeries::from_integers([1, 1]);
        let b = QSeries::from_integers([1, -1]);
        assert_eq!(ints(&(&a + &b)), vec![2, 0]);
        assert_eq!(&a + &QSeries::zero(1), a);
    }

    #[test]
    fn eisenstein_sum_first_coefficient() {
        let s = &eisenstein(4, 3).unwrap() + &eisenstein(6, 3).unwrap();
        assert_eq!(ints(&s)[1], -264);
    }

    #[test]
    fn mul_basic() {
        let a = QSeries::from_integers([1, 1, 0]);
        let b = QSeries::from_integers([1, -1, 0]);
        assert_eq!(ints(&(&a * &b)), vec![1, 0, -1]);
        assert_eq!(&a * &QSeries::one(2), a);
        let geo = QSeries::from_integers([1, 1, 1, 1]);
        assert_eq!(ints(&(&geo * &geo))[3], 4);
    }

    #[test]
    fn truncation_is_min_and_strict() {
        let a = QSeries::from_integers([1, 2, 3, 4]);
        let b = QSeries::from_integers([1, 1]);
        assert_eq!((&a * &b).trunc(), 1);
        assert_eq!((&a + &b).trunc(), 1);
        assert_eq!(
            b.coeff(2),
            Err(SeriesError::BeyondTruncation { index: 2, trunc: 1 })
        );
        assert_eq!(a.truncate(10), a);
    }

    #[test]
    fn inverse_cases() {
        let one_minus_q = QSeries::from_integers([1, -1, 0, 0, 0]);
        assert_eq!(ints(&one_minus_q.inv().unwrap()), vec![1, 1, 1, 1, 1]);
        assert_eq!(QSeries::one(3).inv().unwrap(), QSeries::one(3));
        assert_eq!(
            QSeries::from_integers([0, 1]).inv(),
            Err(SeriesError::ZeroConstantTerm)
        );
        let e4 = eisenstein(4, 8).unwrap();
        assert_eq!(e4.inv().unwrap().inv().unwrap(), e4);
    }

    #[test]
    fn exp_and_log() {
        assert_eq!(QSeries::zero(4).exp().unwrap(), QSeries::one(4));
        let e = QSeries::q(3).exp().unwrap();
        assert_eq!(e.coeffs()[2], rat(1, 2));
        assert_eq!(e.coeffs()[3], rat(1, 6));
        let one_minus_q = QSeries::from_integers([1, -1, 0, 0, 0, 0]);
        assert_eq!(one_minus_q.log().unwrap().exp().unwrap(), one_minus_q);
        assert_eq!(
            QSeries::one(2).exp(),
            Err(SeriesError::NonzeroConstantTerm)
        );
        assert_eq!(
            QSeries::from_integers([2, 1]).log(),
            Err(SeriesError::LogConstantTerm)
        );
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert!(b.iter().all(|r| r.numer().gcd(r.denom()).is_one()));
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(ints(&eisenstein(4, 2).unwrap()), vec![1, 240, 2160]);
        assert_eq!(ints(&eisenstein(6, 1).unwrap()), vec![1, -504]);
        assert_eq!(ints(&eisenstein(2, 2).unwrap()), vec![1, -24, -72]);
        assert_eq!(eisenstein(8, 2), Err(SeriesError::UnsupportedWeight(8)));
        assert_eq!(eisenstein(4, 0).unwrap(), QSeries::one(0));
    }

    #[test]
    fn delta_and_yau_zaslow_examples() {
        assert_eq!(ints(&yau_zaslow(3)), vec![1, 24, 324, 3200]);
        assert_eq!(yau_zaslow(0), QSeries::one(0));
        assert_eq!(ints(&delta(2)), vec![0, 1, -24]);
        // Ramanujan tau: 1, -24, 252, -1472, 4830
        assert_eq!(ints(&delta(5)), vec![0, 1, -24, 252, -1472, 4830]);
    }

    #[test]
    fn display_format() {
        assert_eq!(
            eisenstein(6, 2).unwrap().to_string(),
            "1 - 504q - 16632q^2 + O(q^3)"
        );
        assert_eq!(QSeries::zero(1).to_string(), "0 + O(q^2)");
        let half = QSeries::from_coeffs(vec![rat(0, 1), rat(-1, 2)]);
        assert_eq!(half.to_string(), "-(1/2)q + O(q^2)");
    }
}
