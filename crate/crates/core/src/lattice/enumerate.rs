//! Exhaustive enumeration of lattice vectors of bounded norm in a
//! positive-definite form, by recursive completing of squares.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive, Zero};

use super::intmat::IntMatrix;

/// Integer types the enumeration can run over. Every operation is checked,
/// so a narrow type either gives the exact answer or reports overflow.
trait Exact: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + FromPrimitive + ToPrimitive {}
impl<T> Exact for T where T: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + FromPrimitive + ToPrimitive {}

type Q<T> = Ratio<T>;

fn sub<T: Exact>(a: &Q<T>, b: &Q<T>) -> Option<Q<T>> {
    a.checked_sub(b)
}

fn mul<T: Exact>(a: &Q<T>, b: &Q<T>) -> Option<Q<T>> {
    a.checked_mul(b)
}

fn div<T: Exact>(a: &Q<T>, b: &Q<T>) -> Option<Q<T>> {
    a.checked_div(b)
}

/// `Q(x) = Σ_i diag[i] · (x_i + Σ_{j>i} mu[i][j] x_j)^2` for a positive-definite Gram.
struct SquareCompletion<T: Exact> {
    diag: Vec<Q<T>>,
    mu: Vec<Vec<Q<T>>>,
}

impl<T: Exact> SquareCompletion<T> {
    fn new(gram: &[Vec<T>]) -> Option<Self> {
        let n = gram.len();
        let mut q: Vec<Vec<Q<T>>> = gram
            .iter()
            .map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = div(&q[i][j], &q[i][i])?;
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = mul(&q[k][i], &q[i][l])?;
                    q[k][l] = sub(&q[k][l], &t)?;
                }
            }
        }
        let diag = (0..n).map(|i| q[i][i].clone()).collect();
        Some(SquareCompletion { diag, mu: q })
    }
}

/// Is `(x - c)^2 <= r`?
fn inside<T: Exact>(x: &T, center: &Q<T>, radius_sq: &Q<T>) -> Option<bool> {
    let d = sub(&Q::from_integer(x.clone()), center)?;
    Some(mul(&d, &d)? <= *radius_sq)
}

/// Integer range `{x : (x - c)^2 <= r}` with exact endpoints; `Some(None)` when empty.
fn integer_window<T: Exact>(center: &Q<T>, radius_sq: &Q<T>) -> Option<Option<(T, T)>> {
    if radius_sq.is_negative() {
        return Some(None);
    }
    let floor_c = center.numer().div_floor(center.denom());
    let above = floor_c.checked_add(&T::one())?;
    let anchor = if inside(&floor_c, center, radius_sq)? {
        floor_c
    } else if inside(&above, center, radius_sq)? {
        above
    } else {
        return Some(None);
    };
    let lo = edge(&anchor, center, radius_sq, false)?;
    let hi = edge(&anchor, center, radius_sq, true)?;
    Some(Some((lo, hi)))
}

/// Farthest integer from `anchor` (upwards or downwards) still inside the
/// window: gallop until outside, then bisect.
fn edge<T: Exact>(anchor: &T, center: &Q<T>, radius_sq: &Q<T>, up: bool) -> Option<T> {
    let step = |k: &T| if up { anchor.checked_add(k) } else { anchor.checked_sub(k) };
    let two = T::one() + T::one();
    let mut good = T::zero();
    let mut bad = T::one();
    while inside(&step(&bad)?, center, radius_sq)? {
        good = bad.clone();
        bad = bad.checked_mul(&two)?;
    }
    while bad.clone() - good.clone() > T::one() {
        let mid = good.clone() + (bad.clone() - good.clone()) / two.clone();
        if inside(&step(&mid)?, center, radius_sq)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    step(&good)
}

/// Counts vectors `v` with `⟨v, v⟩ = k` for every `k` in `0..=max_norm`.
///
/// `gram` must be positive definite; callers normalize the sign first.
pub(crate) fn norm_counts(gram: &IntMatrix, max_norm: u64) -> Vec<u64> {
    let n = gram.rows();
    if n == 0 {
        let mut counts = vec![0u64; max_norm as usize + 1];
        counts[0] = 1;
        return counts;
    }
    let narrow: Option<Vec<Vec<i128>>> = (0..n)
        .map(|i| (0..n).map(|j| gram[(i, j)].to_i128()).collect())
        .collect();
    if let Some(counts) = narrow.and_then(|g| norm_counts_in(&g, max_norm)) {
        return counts;
    }
    let wide: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| gram[(i, j)].clone()).collect())
        .collect();
    norm_counts_in(&wide, max_norm).expect("big integers do not overflow")
}

fn norm_counts_in<T: Exact>(gram: &[Vec<T>], max_norm: u64) -> Option<Vec<u64>> {
    let n = gram.len();
    let sc = SquareCompletion::new(gram)?;
    let bound = Q::from_integer(T::from_u64(max_norm)?);
    let mut x = vec![T::zero(); n];
    let mut counts = vec![0u64; max_norm as usize + 1];
    recurse(&sc, gram, n - 1, &bound, &mut x, &mut counts)?;
    Some(counts)
}

fn recurse<T: Exact>(
    sc: &SquareCompletion<T>,
    gram: &[Vec<T>],
    level: usize,
    remaining: &Q<T>,
    x: &mut Vec<T>,
    counts: &mut [u64],
) -> Option<()> {
    let n = x.len();
    let mut center = Q::<T>::zero();
    for j in level + 1..n {
        if !x[j].is_zero() {
            let t = mul(&sc.mu[level][j], &Q::from_integer(x[j].clone()))?;
            center = sub(&center, &t)?;
        }
    }
    let radius_sq = div(remaining, &sc.diag[level])?;
    let Some((lo, hi)) = integer_window(&center, &radius_sq)? else {
        return Some(());
    };
    let mut xi = lo;
    while xi <= hi {
        x[level] = xi.clone();
        if level == 0 {
            let norm = exact_norm(gram, x)?;
            let idx = norm.to_usize().expect("norm within bound");
            counts[idx] += 1;
        } else {
            let d = sub(&Q::from_integer(xi.clone()), &center)?;
            let used = mul(&mul(&sc.diag[level], &d)?, &d)?;
            let rest = sub(remaining, &used)?;
            recurse(sc, gram, level - 1, &rest, x, counts)?;
        }
        xi = xi.checked_add(&T::one())?;
    }
    x[level] = T::zero();
    Some(())
}

fn exact_norm<T: Exact>(gram: &[Vec<T>], x: &[T]) -> Option<T> {
    let n = x.len();
    let mut total = T::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let mut row = T::zero();
        for j in 0..n {
            if !x[j].is_zero() {
                row = row.checked_add(&gram[i][j].checked_mul(&x[j])?)?;
            }
        }
        total = total.checked_add(&x[i].checked_mul(&row)?)?;
    }
    Some(total)
}
