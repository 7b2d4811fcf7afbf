//! Integral quadratic forms.
//!
//! A [`Lattice`] is a symmetric integer Gram matrix. This module builds the
//! named forms that occur for K3 surfaces (the hyperbolic plane `H`, the
//! root lattice `E8`, rank-one forms `(d)`, negations and orthogonal sums),
//! computes exact invariants, classifies indefinite even unimodular forms by
//! signature, takes orthogonal complements inside an ambient lattice, and
//! counts vectors of definite forms by exhaustive enumeration.

mod enumerate;
pub mod intmat;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use intmat::IntMatrix;

use crate::exactq::QSeries;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("no even unimodular lattice of signature ({0}, {1}) is indefinite with p - q divisible by 8")]
    NoSuchLattice(usize, usize),
    #[error("theta series and vector counts need a definite lattice")]
    IndefiniteLattice,
    #[error("theta series in integral powers of q needs an even lattice")]
    OddLattice,
    #[error("embedding columns are linearly dependent")]
    RankDeficient,
    #[error("embedding has {found} rows but the ambient lattice has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient lattice is degenerate")]
    DegenerateAmbient,
    #[error("cannot parse lattice expression {0:?}")]
    Parse(String),
}

/// Signature `(p, n)` of a real quadratic form: counts of positive and
/// negative diagonal entries after congruence diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub determinant: BigInt,
    pub signature: Signature,
    /// Number of zero diagonal entries left by diagonalization; nonzero
    /// means the form is degenerate.
    pub nullity: usize,
    pub is_even: bool,
    pub is_unimodular: bool,
}

impl LatticeInvariants {
    pub fn is_degenerate(&self) -> bool {
        self.nullity > 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.nullity == 0 && self.signature.negative == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.nullity == 0 && self.signature.positive == 0
    }

    pub fn is_definite(&self) -> bool {
        self.is_positive_definite() || self.is_negative_definite()
    }
}

impl fmt::Display for LatticeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {}, signature {}, det {}, {}, {}",
            self.rank,
            self.signature,
            self.determinant,
            if self.is_even { "even" } else { "odd" },
            if self.is_unimodular {
                "unimodular"
            } else {
                "not unimodular"
            }
        )?;
        if self.is_degenerate() {
            write!(f, ", degenerate (nullity {})", self.nullity)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

const E8_CARTAN: [[i64; 8]; 8] = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
];

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The rank-zero lattice.
    pub fn zero() -> Self {
        Lattice {
            gram: IntMatrix::zeros(0, 0),
            label: Some("0".into()),
        }
    }

    /// The hyperbolic plane, Gram `[[0,1],[1,0]]`.
    pub fn hyperbolic() -> Self {
        Lattice {
            gram: IntMatrix::from_rows([[0, 1], [1, 0]]),
            label: Some("H".into()),
        }
    }

    /// Positive-definite `E8`, as the Cartan matrix of its Dynkin diagram.
    pub fn e8() -> Self {
        Lattice {
            gram: IntMatrix::from_rows(E8_CARTAN),
            label: Some("E8".into()),
        }
    }

    /// The rank-one lattice `(d)`.
    pub fn rank1(d: i64) -> Self {
        Lattice {
            gram: IntMatrix::from_rows([[d]]),
            label: Some(format!("rank1({d})")),
        }
    }

    pub fn neg(&self) -> Self {
        let mut g = self.gram.clone();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                g[(i, j)] = -&g[(i, j)];
            }
        }
        Lattice {
            gram: g,
            label: self.label.as_ref().map(|l| match l.strip_prefix('-') {
                Some(inner) => inner.to_string(),
                None => format!("-{l}"),
            }),
        }
    }

    /// Orthogonal direct sum, block diagonal in the given order.
    pub fn direct_sum(parts: &[Lattice]) -> Self {
        let n: usize = parts.iter().map(Lattice::rank).sum();
        let mut g = IntMatrix::zeros(n, n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[(off + i, off + j)] = p.gram[(i, j)].clone();
                }
            }
            off += p.rank();
        }
        let label = if parts.is_empty() {
            Some("0".to_string())
        } else {
            parts
                .iter()
                .map(|p| p.label.clone())
                .collect::<Option<Vec<_>>>()
                .map(|ls| ls.join(" + "))
        };
        Lattice { gram: g, label }
    }

    /// The K3 lattice `3H ⊕ 2(-E8)`, blocks in that order.
    pub fn k3() -> Self {
        let h = Self::hyperbolic();
        let ne8 = Self::e8().neg();
        Self::direct_sum(&[h.clone(), h.clone(), h, ne8.clone(), ne8]).with_label("3H + 2(-E8)")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut total = BigInt::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !v[j].is_zero() {
                    total += &u[i] * &self.gram[(i, j)] * &v[j];
                }
            }
        }
        total
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    /// Signature and nullity by symmetric congruence diagonalization over Q.
    pub fn signature(&self) -> (Signature, usize) {
        let diag = congruence_diagonal(&self.gram);
        let positive = diag.iter().filter(|d| d.is_positive()).count();
        let negative = diag.iter().filter(|d| d.is_negative()).count();
        let nullity = diag.len() - positive - negative;
        (Signature::new(positive, negative), nullity)
    }

    pub fn invariants(&self) -> LatticeInvariants {
        let determinant = self.determinant();
        let (signature, nullity) = self.signature();
        LatticeInvariants {
            rank: self.rank(),
            is_unimodular: determinant.abs().is_one(),
            determinant,
            signature,
            nullity,
            is_even: self.is_even(),
        }
    }

    /// Invariant factors of the discriminant group `Z^n / Gram·Z^n`, with
    /// trivial factors dropped. Empty exactly when the lattice is unimodular.
    pub fn discriminant_invariants(&self) -> Vec<BigInt> {
        self.gram
            .elementary_divisors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    /// Gram matrix with the sign flipped if needed to make it positive
    /// definite.
    fn positive_gram(&self) -> Result<IntMatrix, LatticeError> {
        let inv = self.invariants();
        if inv.is_positive_definite() {
            Ok(self.gram.clone())
        } else if inv.is_negative_definite() {
            Ok(self.neg().gram)
        } else {
            Err(LatticeError::IndefiniteLattice)
        }
    }

    /// Number of vectors with `|⟨v, v⟩| = norm` in a definite lattice.
    pub fn count_vectors_of_norm(&self, norm: u64) -> Result<u64, LatticeError> {
        let g = self.positive_gram()?;
        Ok(enumerate::norm_counts(&g, norm)[norm as usize])
    }

    /// Theta series `Σ_v q^{|v|^2/2}` of an even definite lattice through `q^trunc`.
    pub fn theta_series(&self, trunc: usize) -> Result<QSeries, LatticeError> {
        let g = self.positive_gram()?;
        if !self.is_even() {
            return Err(LatticeError::OddLattice);
        }
        let counts = enumerate::norm_counts(&g, 2 * trunc as u64);
        Ok(QSeries::from_integers(
            (0..=trunc).map(|r| BigInt::from(counts[2 * r])),
        ))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "<rank {} form>", self.rank()),
        }
    }
}

/// Parses `+`-joined tokens: `H`, `E8`, `rank1(d)`, each optionally
/// prefixed by `-` for negation, e.g. `"H + -E8 + -E8"`.
impl FromStr for Lattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LatticeError::Parse(s.to_string());
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err());
        }
        if trimmed == "0" {
            return Ok(Lattice::zero());
        }
        let mut parts = Vec::new();
        for token in trimmed.split('+') {
            let token = token.trim();
            let digits = token.len() - token.trim_start_matches(|c: char| c.is_ascii_digit()).len();
            let times: usize = match digits {
                0 => 1,
                _ => token[..digits].parse().map_err(|_| err())?,
            };
            if times == 0 {
                return Err(err());
            }
            let token = token[digits..].trim();
            let token = token
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .map_or(token, str::trim);
            let (negate, body) = match token.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, token),
            };
            let base = match body {
                "H" => Lattice::hyperbolic(),
                "E8" => Lattice::e8(),
                _ => {
                    let inner = body
                        .strip_prefix("rank1(")
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(err)?;
                    let d: i64 = inner.trim().parse().map_err(|_| err())?;
                    Lattice::rank1(d)
                }
            };
            let base = if negate { base.neg() } else { base };
            parts.extend(std::iter::repeat(base).take(times));
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        Ok(Lattice::direct_sum(&parts))
    }
}

/// Diagonal entries of a rational congruence diagonalization `P^T G P`.
fn congruence_diagonal(gram: &IntMatrix) -> Vec<Rational> {
    let n = gram.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::from_integer(gram[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                // all active diagonals vanish: make one nonzero with e_i + e_j
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    Some((i, j)) => {
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                    None => {
                        // remaining block is identically zero
                        diag.extend(active.iter().map(|_| Rational::zero()));
                        break;
                    }
                }
            }
        };
        let p = a[pivot][pivot].clone();
        let row = a[pivot].clone();
        let others: Vec<usize> = active.iter().copied().filter(|&i| i != pivot).collect();
        for &i in &others {
            if row[i].is_zero() {
                continue;
            }
            let f = &row[i] / &p;
            for &k in &others {
                let v = &f * &row[k];
                a[i][k] -= v;
            }
            a[i][pivot] = Rational::zero();
            a[pivot][i] = Rational::zero();
        }
        diag.push(p);
        active.retain(|&i| i != pivot);
    }
    diag
}

/// `aH ⊕ b·(sign E8)`: the even unimodular indefinite lattice of a given signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvenUnimodularDecomposition {
    pub hyperbolic_planes: usize,
    /// Number of `E8` summands, signed: negative means copies of `-E8`.
    pub e8_copies: i64,
}

impl EvenUnimodularDecomposition {
    pub fn build(&self) -> Lattice {
        let mut parts = vec![Lattice::hyperbolic(); self.hyperbolic_planes];
        let e8 = if self.e8_copies < 0 {
            Lattice::e8().neg()
        } else {
            Lattice::e8()
        };
        parts.extend(std::iter::repeat_n(e8, self.e8_copies.unsigned_abs() as usize));
        Lattice::direct_sum(&parts)
    }
}

impl fmt::Display for EvenUnimodularDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.hyperbolic_planes {
            0 => {}
            1 => parts.push("H".to_string()),
            a => parts.push(format!("{a}H")),
        }
        let sign = if self.e8_copies < 0 { "-" } else { "" };
        match self.e8_copies.unsigned_abs() {
            0 => {}
            1 => parts.push(format!("({sign}E8)")),
            b => parts.push(format!("{b}({sign}E8)")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Classifies the even unimodular indefinite lattice of signature `(p, q)`
/// as `min(p,q)·H ⊕ ((p-q)/8)·E8`, checking the rebuilt form.
pub fn classify_indefinite_even_unimodular(
    positive: usize,
    negative: usize,
) -> Result<EvenUnimodularDecomposition, LatticeError> {
    let diff = positive as i64 - negative as i64;
    if positive == 0 || negative == 0 || diff % 8 != 0 {
        return Err(LatticeError::NoSuchLattice(positive, negative));
    }
    let dec = EvenUnimodularDecomposition {
        hyperbolic_planes: positive.min(negative),
        e8_copies: diff / 8,
    };
    let inv = dec.build().invariants();
    debug_assert_eq!(inv.signature, Signature::new(positive, negative));
    debug_assert!(inv.is_unimodular && inv.is_even);
    Ok(dec)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplementWarning {
    /// The sublattice is not saturated in the ambient lattice; the
    /// elementary divisors of the embedding exceed 1.
    NotPrimitive { elementary_divisors: Vec<BigInt> },
}

#[derive(Debug, Clone)]
pub struct Complement {
    pub lattice: Lattice,
    /// Basis of the complement as columns in ambient coordinates.
    pub basis: Vec<Vec<BigInt>>,
    pub warnings: Vec<ComplementWarning>,
}

/// Orthogonal complement `{v : ⟨v, m⟩ = 0 for all m in the sublattice}`,
/// where `embedding` has one column per sublattice basis vector.
pub fn complement_in(ambient: &Lattice, embedding: &IntMatrix) -> Result<Complement, LatticeError> {
    let n = ambient.rank();
    if embedding.rows() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: embedding.rows(),
        });
    }
    if ambient.determinant().is_zero() {
        return Err(LatticeError::DegenerateAmbient);
    }
    if embedding.rank() != embedding.cols() {
        return Err(LatticeError::RankDeficient);
    }
    let pairing = embedding.transpose().mul(ambient.gram());
    let basis = pairing.integer_kernel();
    let k = IntMatrix::from_columns(n, &basis);
    let gram = k.transpose().mul(ambient.gram()).mul(&k);

    let mut warnings = Vec::new();
    let divisors = embedding.elementary_divisors();
    if divisors.iter().any(|d| !d.is_one()) {
        warnings.push(ComplementWarning::NotPrimitive {
            elementary_divisors: divisors,
        });
    }

    let sub = Lattice::new(embedding.transpose().mul(ambient.gram()).mul(embedding))?;
    let lattice = Lattice::new(gram)?;
    if sub.determinant().abs().is_one() {
        debug_assert_eq!(sub.rank() + lattice.rank(), n);
        debug_assert!(lattice.determinant().abs().is_one() || !ambient.determinant().abs().is_one());
    }
    Ok(Complement {
        lattice,
        basis,
        warnings,
    })
}

/// The three conditions whose equivalence holds for sublattices of an
/// even unimodular lattice: `M` unimodular, `M⊥` unimodular, and
/// `M ⊕ M⊥` equal to the whole ambient lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplittingCheck {
    pub sub_unimodular: bool,
    pub complement_unimodular: bool,
    pub spans_ambient: bool,
}

impl SplittingCheck {
    pub fn conditions_agree(&self) -> bool {
        self.sub_unimodular == self.complement_unimodular
            && self.complement_unimodular == self.spans_ambient
    }
}

pub fn splitting_check(ambient: &Lattice, embedding: &IntMatrix) -> Result<SplittingCheck, LatticeError> {
    let comp = complement_in(ambient, embedding)?;
    let sub = Lattice::new(embedding.transpose().mul(ambient.gram()).mul(embedding))?;
    let mut cols: Vec<Vec<BigInt>> = (0..embedding.cols()).map(|j| embedding.column(j)).collect();
    cols.extend(comp.basis.iter().cloned());
    let n = ambient.rank();
    let spans_ambient = cols.len() == n && IntMatrix::from_columns(n, &cols).determinant().abs().is_one();
    Ok(SplittingCheck {
        sub_unimodular: sub.determinant().abs().is_one(),
        complement_unimodular: comp.lattice.determinant().abs().is_one(),
        spans_ambient,
    })
}

/// Embedding matrix picking out coordinate blocks `ranges` of the ambient
/// lattice (each a half-open index range), as used for block sublattices
/// of `3H ⊕ 2(-E8)`.
pub fn block_embedding(ambient_rank: usize, ranges: &[std::ops::Range<usize>]) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = ranges
        .iter()
        .flat_map(|r| r.clone())
        .map(|idx| {
            let mut v = vec![BigInt::zero(); ambient_rank];
            v[idx] = BigInt::one();
            v
        })
        .collect();
    IntMatrix::from_columns(ambient_rank, &cols)
}
