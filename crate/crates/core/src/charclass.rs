//! Characteristic-class calculus for families of surfaces.
//!
//! Classes live in a graded ring generated by the relative Chern classes
//! `c1` (degree 1) and `c2` (degree 2) of a surface fibration and a line
//! bundle class `C` (degree 1), truncated at a maximal total degree. The
//! module computes the relative Todd class, the Chern character `e^C`, the
//! formal fiber integration that turns monomials `c1^a c2^b C^c` into
//! opaque base classes `x_{a,b,c}`, and the Segre series of a virtual bundle
//! from its Chern character.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactq::{bernoulli_numbers, QSeries};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharClassError {
    #[error("self-intersection {0} is odd; classes on a K3 surface have even square")]
    OddSelfIntersection(i64),
    #[error("push-forward symbol {0} has base degree {1}; only base degree 0 can be evaluated")]
    NotBaseDegreeZero(PushforwardSymbol, i64),
}

/// `c1^a c2^b C^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub c1: u32,
    pub c2: u32,
    pub line: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { c1: 0, c2: 0, line: 0 };

    pub fn new(c1: u32, c2: u32, line: u32) -> Self {
        Monomial { c1, c2, line }
    }

    pub fn degree(&self) -> u32 {
        self.c1 + 2 * self.c2 + self.line
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            c1: self.c1 + other.c1,
            c2: self.c2 + other.c2,
            line: self.line + other.line,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("c1", self.c1), ("c2", self.c2), ("C", self.line)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial in `c1, c2, C` truncated at total degree `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    max_degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(max_degree: u32) -> Self {
        GradedPoly {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(max_degree: u32) -> Self {
        Self::term(Monomial::ONE, Rational::one(), max_degree)
    }

    /// `coeff · m`, or zero when `m` lies beyond the truncation degree.
    pub fn term(m: Monomial, coeff: Rational, max_degree: u32) -> Self {
        let mut p = Self::zero(max_degree);
        p.add_term(m, coeff);
        p
    }

    pub fn c1(max_degree: u32) -> Self {
        Self::term(Monomial::new(1, 0, 0), Rational::one(), max_degree)
    }

    pub fn c2(max_degree: u32) -> Self {
        Self::term(Monomial::new(0, 1, 0), Rational::one(), max_degree)
    }

    pub fn line(max_degree: u32) -> Self {
        Self::term(Monomial::new(0, 0, 1), Rational::one(), max_degree)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, coeff: Rational) {
        if m.degree() > self.max_degree || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// The homogeneous component of total degree `d`.
    pub fn degree_part(&self, d: u32) -> GradedPoly {
        GradedPoly {
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.max_degree.min(other.max_degree));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> GradedPoly {
        let mut out = GradedPoly::zero(self.max_degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.max_degree.min(other.max_degree));
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                out.add_term(m1.times(m2), a * b);
            }
        }
        out
    }

    /// `exp(self)` for a polynomial without constant term (nilpotent under truncation).
    ///
    /// # Panics
    ///
    /// Panics if the constant term is nonzero.
    pub fn exp(&self) -> GradedPoly {
        assert!(
            self.coeff(&Monomial::ONE).is_zero(),
            "exp of a class with nonzero degree-0 part"
        );
        let d = self.max_degree;
        let mut result = GradedPoly::one(d);
        let mut power = GradedPoly::one(d);
        for k in 1..=d {
            power = power.mul(self).scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if power.is_zero() {
                break;
            }
            result = result.add(&power);
        }
        result
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (name, c) in terms {
        let neg = c.is_negative();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let abs = c.abs();
        if name == "1" {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{abs}*{name}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Coefficients of `log(x / (1 - e^-x))` through `x^d`.
fn todd_log_coefficients(d: u32) -> Vec<Rational> {
    let b = bernoulli_numbers(d as usize);
    let mut factorial = BigInt::one();
    let mut per_root = Vec::with_capacity(d as usize + 1);
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            factorial *= BigInt::from(k);
        }
        // x/(1 - e^-x) = Σ (-1)^k B_k x^k / k!
        let sign = if k % 2 == 1 { -Rational::one() } else { Rational::one() };
        per_root.push(sign * bk / Rational::from_integer(factorial.clone()));
    }
    QSeries::from_coeffs(per_root)
        .log()
        .expect("Todd series starts with 1")
        .into_coeffs()
}

/// Power sums `p_k = x^k + y^k` of two Chern roots in terms of `c1 = x + y`,
/// `c2 = xy`, through `k = d`.
fn power_sums(d: u32) -> Vec<GradedPoly> {
    let c1 = GradedPoly::c1(d);
    let c2 = GradedPoly::c2(d);
    let mut p = vec![GradedPoly::one(d).scale(&Rational::from_integer(BigInt::from(2)))];
    if d >= 1 {
        p.push(c1.clone());
    }
    for k in 1..d as usize {
        let next = c1.mul(&p[k]).add(&c2.mul(&p[k - 1]).scale(&-Rational::one()));
        p.push(next);
    }
    p
}

/// The relative Todd class of a rank-two bundle, `Σ_{i≤D} Todd_i(c1, c2)`.
///
/// Assembled symmetrically: `log Todd = Σ_k λ_k p_k` where `λ_k` are the
/// coefficients of `log(x/(1-e^-x))` and `p_k` the Newton power sums.
pub fn todd(max_degree: u32) -> GradedPoly {
    let d = max_degree;
    let lambda = todd_log_coefficients(d);
    let p = power_sums(d);
    let mut log_td = GradedPoly::zero(d);
    for k in 1..=d as usize {
        log_td = log_td.add(&p[k].scale(&lambda[k]));
    }
    log_td.exp()
}

/// `ch(O(C)) = e^C` through degree `D`.
pub fn ch_line(max_degree: u32) -> GradedPoly {
    GradedPoly::line(max_degree).exp()
}

/// Base class `x_{a,b,c} = π_*(c1^a c2^b C^c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PushforwardSymbol {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl PushforwardSymbol {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        PushforwardSymbol { a, b, c }
    }

    /// Degree on the base after integrating over a fiber of complex dimension `fiber_dim`.
    pub fn base_degree(&self, fiber_dim: u32) -> i64 {
        (self.a + 2 * self.b + self.c) as i64 - fiber_dim as i64
    }
}

impl fmt::Display for PushforwardSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{{{},{},{}}}", self.a, self.b, self.c)
    }
}

/// Linear combination of push-forward symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pushforward {
    fiber_dim: u32,
    terms: BTreeMap<PushforwardSymbol, Rational>,
}

impl Pushforward {
    pub fn fiber_dim(&self) -> u32 {
        self.fiber_dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PushforwardSymbol, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &PushforwardSymbol) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn base_degree_part(&self, d: i64) -> Pushforward {
        Pushforward {
            fiber_dim: self.fiber_dim,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.base_degree(self.fiber_dim) == d)
                .map(|(s, c)| (*s, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Pushforward {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(s, c)| (s.to_string(), c)))
    }
}

/// Formal integration over the fiber: each monomial of total degree `d`
/// becomes a base class of degree `d - fiber_dim`; lower degrees vanish.
pub fn fiber_integrate(p: &GradedPoly, fiber_dim: u32) -> Pushforward {
    let terms = p
        .terms()
        .filter(|(m, _)| m.degree() >= fiber_dim)
        .map(|(m, c)| (PushforwardSymbol::new(m.c1, m.c2, m.line), c.clone()))
        .collect();
    Pushforward { fiber_dim, terms }
}

/// `π_*(Todd · e^C)` over a surface fiber, i.e. the Chern character of the
/// direct image, through total degree `D` upstairs.
pub fn grr_pushforward(max_degree: u32) -> Pushforward {
    fiber_integrate(&todd(max_degree).mul(&ch_line(max_degree)), 2)
}

/// Evaluation of base-degree-0 push-forwards along a K3 fibration: the
/// fiber has vanishing `c1`, `∫ c2 = 24`, and `∫ C^2` equal to the given
/// self-intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct K3Specialization {
    pub c_squared: i64,
}

impl K3Specialization {
    pub const EULER_NUMBER: i64 = 24;

    pub fn new(c_squared: i64) -> Self {
        K3Specialization { c_squared }
    }

    pub fn value(&self, s: &PushforwardSymbol) -> Result<Rational, CharClassError> {
        let deg = s.base_degree(2);
        if deg != 0 {
            return Err(CharClassError::NotBaseDegreeZero(*s, deg));
        }
        let v = match (s.a, s.b, s.c) {
            (a, _, _) if a > 0 => 0,
            (0, 1, 0) => Self::EULER_NUMBER,
            (0, 0, 2) => self.c_squared,
            _ => unreachable!("base degree 0 symbols are exhausted above"),
        };
        Ok(Rational::from_integer(BigInt::from(v)))
    }

    /// Base-degree-0 symbols of `p` that the specialization does not kill.
    pub fn survivors(&self, p: &Pushforward) -> Vec<PushforwardSymbol> {
        p.base_degree_part(0)
            .terms()
            .map(|(s, _)| *s)
            .filter(|s| s.a == 0)
            .collect()
    }

    pub fn evaluate(&self, p: &Pushforward) -> Result<Rational, CharClassError> {
        p.terms()
            .map(|(s, c)| self.value(s).map(|v| v * c))
            .sum()
    }
}

/// Segre coefficients `s_1..s_D` of a virtual bundle with Chern character
/// components `ch_1..ch_D`, from `S(t) = exp(Σ (-1)^i (i-1)! ch_i t^i)`.
/// Missing components are taken to be zero.
pub fn segre_from_characters(ch: &[Rational], max_degree: usize) -> Vec<Rational> {
    let mut log = vec![Rational::zero(); max_degree + 1];
    let mut factorial = BigInt::one(); // (i-1)!
    for i in 1..=max_degree {
        if i > 1 {
            factorial *= BigInt::from(i - 1);
        }
        if let Some(c) = ch.get(i - 1) {
            let sign = if i % 2 == 1 { -Rational::one() } else { Rational::one() };
            log[i] = sign * Rational::from_integer(factorial.clone()) * c;
        }
    }
    let s = QSeries::from_coeffs(log).exp().expect("no constant term");
    s.into_coeffs().into_iter().skip(1).collect()
}

/// Virtual rank `χ(O(C)) = 2 + C²/2` of a class on a K3 surface.
pub fn surface_rr_virtual_rank(c_squared: i64) -> Result<i64, CharClassError> {
    if c_squared % 2 != 0 {
        return Err(CharClassError::OddSelfIntersection(c_squared));
    }
    Ok(2 + c_squared / 2)
}
