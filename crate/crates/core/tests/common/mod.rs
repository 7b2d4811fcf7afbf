//! Independent reference implementations shared by the integration tests.
//! None of these call into the series or lattice code they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use k3nodal::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `σ_k(n)` by trial division.
pub fn sigma(k: u32, n: u64) -> BigInt {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

/// `1 + c·Σ σ_{k-1}(n) q^n` with the normalizing constant written out.
pub fn eisenstein_oracle(k: u32, trunc: usize) -> Vec<BigInt> {
    let c: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => panic!("no oracle for weight {k}"),
    };
    (0..=trunc as u64)
        .map(|n| if n == 0 { BigInt::one() } else { c * sigma(k - 1, n) })
        .collect()
}

/// Cauchy product truncated at `trunc`.
pub fn convolve(a: &[BigInt], b: &[BigInt], trunc: usize) -> Vec<BigInt> {
    (0..=trunc)
        .map(|n| (0..=n).map(|i| &a[i] * &b[n - i]).sum())
        .collect()
}

/// `∏_{i≥1} (1 + q^i + q^{2i} + …)^24`, multiplying in one geometric factor at a time.
pub fn yau_zaslow_oracle(trunc: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); trunc + 1];
    acc[0] = BigInt::one();
    for i in 1..=trunc {
        let geometric: Vec<BigInt> = (0..=trunc)
            .map(|n| if n % i == 0 { BigInt::one() } else { BigInt::zero() })
            .collect();
        for _ in 0..24 {
            acc = convolve(&acc, &geometric, trunc);
        }
    }
    acc
}

/// `c · a · b · d` in one pass over all index triples.
pub fn triple_product(c: i64, a: &[BigInt], b: &[BigInt], d: &[BigInt], trunc: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); trunc + 1];
    for i in 0..=trunc {
        for j in 0..=trunc - i {
            for k in 0..=trunc - i - j {
                out[i + j + k] += &a[i] * &b[j] * &d[k];
            }
        }
    }
    out.into_iter().map(|x| x * c).collect()
}

/// Bivariate polynomial in two Chern roots `x, y`.
pub type Bivariate = BTreeMap<(u32, u32), Rational>;

pub fn bi_mul(a: &Bivariate, b: &Bivariate, max_degree: u32) -> Bivariate {
    let mut out = Bivariate::new();
    for ((i, j), u) in a {
        for ((k, l), v) in b {
            if i + j + k + l <= max_degree {
                *out.entry((i + k, j + l)).or_insert_with(Rational::zero) += u * v;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn bi_pow(a: &Bivariate, e: u32, max_degree: u32) -> Bivariate {
    let mut out = Bivariate::from([((0, 0), Rational::one())]);
    for _ in 0..e {
        out = bi_mul(&out, a, max_degree);
    }
    out
}

/// Coefficients of `x / (1 - e^{-x})` through `x^d`, by inverting
/// `(1 - e^{-x})/x = Σ (-1)^k x^k / (k+1)!` term by term.
pub fn todd_root_series(d: usize) -> Vec<Rational> {
    let mut fact = BigInt::one();
    let mut g = Vec::new();
    for k in 0..=d {
        fact *= BigInt::from(k + 1);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        g.push(Rational::new(BigInt::from(sign), fact.clone()));
    }
    let mut inv = vec![Rational::zero(); d + 1];
    inv[0] = Rational::one();
    for n in 1..=d {
        let s: Rational = (1..=n).map(|k| &g[k] * &inv[n - k]).sum();
        inv[n] = -s;
    }
    inv
}

/// `td(x)·td(y)` through total degree `d`.
pub fn two_root_todd(d: u32) -> Bivariate {
    let t = todd_root_series(d as usize);
    let mut out = Bivariate::new();
    for i in 0..=d {
        for j in 0..=d - i {
            let c = &t[i as usize] * &t[j as usize];
            if !c.is_zero() {
                out.insert((i, j), c);
            }
        }
    }
    out
}

/// Coefficients of `1/∏(1 + x_j t)` through `t^d` from the elementary
/// symmetric functions of the roots.
pub fn inverse_total_chern(roots: &[i64], d: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for &x in roots {
        let mut next = vec![BigInt::zero(); e.len() + 1];
        for (i, c) in e.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * x;
        }
        e = next;
    }
    let mut s = vec![BigInt::one()];
    for n in 1..=d {
        let v: BigInt = (1..=n.min(e.len() - 1)).map(|k| &e[k] * &s[n - k]).sum();
        s.push(-v);
    }
    s
}

/// Characteristic polynomial coefficients `[a_0, …, a_n]` (monic, `a_n = 1`)
/// by cofactor expansion of `det(tI - A)` over polynomial entries.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let entry = |i: usize, j: usize| -> Vec<BigInt> {
        if i == j {
            vec![BigInt::from(-a[i][j]), BigInt::one()]
        } else {
            vec![BigInt::from(-a[i][j])]
        }
    };
    let m: Vec<Vec<Vec<BigInt>>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    poly_det(&m)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &mut Vec<BigInt>, b: &[BigInt], sign: i64) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (i, y) in b.iter().enumerate() {
        a[i] += y * sign;
    }
}

fn poly_det(m: &[Vec<Vec<BigInt>>]) -> Vec<BigInt> {
    let n = m.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut total = vec![BigInt::zero()];
    for col in 0..n {
        let minor: Vec<Vec<Vec<BigInt>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = poly_mul(&m[0][col], &poly_det(&minor));
        poly_add(&mut total, &term, if col % 2 == 0 { 1 } else { -1 });
    }
    total
}

fn eval(p: &[BigInt], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

/// Eigenvalue signs `(positive, negative, zero)` of a symmetric integer
/// matrix, with multiplicity. Repeated factors of the characteristic
/// polynomial are split off with `gcd(p, p')`; the roots of each
/// square-free part are located by sign changes on a grid over the
/// Gershgorin interval, refined until every eigenvalue is accounted for.
pub fn eigenvalue_signs(a: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = a.len();
    let p = characteristic_polynomial(a);
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    let nonzero: Vec<BigInt> = p[zeros..].to_vec();
    let r: i64 = a.iter().map(|row| row.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(0) + 1;
    let mut factors = Vec::new();
    let mut cur = nonzero;
    while cur.len() > 1 {
        let g = poly_gcd(&cur, &derivative(&cur));
        factors.push(poly_div_exact(&cur, &g));
        cur = g;
    }
    let mut steps = 64;
    loop {
        let (mut pos, mut neg) = (0, 0);
        for f in &factors {
            pos += sign_changes(f, &rat(0, 1), &rat(r, 1), steps);
            neg += sign_changes(f, &rat(-r, 1), &rat(0, 1), steps);
        }
        if zeros + pos + neg == n {
            return (pos, neg, zeros);
        }
        assert!(steps < 1 << 16, "failed to isolate eigenvalues");
        steps *= 2;
    }
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Sign changes of a square-free polynomial on a uniform grid of the open
/// interval `(lo, hi)`; exact grid hits count as roots.
fn sign_changes(p: &[BigInt], lo: &Rational, hi: &Rational, steps: usize) -> usize {
    let width = (hi - lo) / Rational::from_integer(BigInt::from(steps));
    let mut count = 0;
    let mut prev = sign_at(p, lo);
    for k in 1..=steps {
        let x = lo + &width * Rational::from_integer(BigInt::from(k));
        let sg = sign_at(p, &x);
        if sg == 0 {
            if k < steps {
                count += 1;
            }
            prev = 0;
            continue;
        }
        if prev != 0 && sg != prev {
            count += 1;
        }
        prev = sg;
    }
    count
}

fn sign_at(p: &[BigInt], x: &Rational) -> i32 {
    let v = eval(p, x);
    if v.is_zero() { 0 } else if v > Rational::zero() { 1 } else { -1 }
}

fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let to_q = |p: &[BigInt]| -> Vec<Rational> { p.iter().map(|c| Rational::from_integer(c.clone())).collect() };
    let mut x = trim(to_q(a));
    let mut y = trim(to_q(b));
    while !(y.len() == 1 && y[0].is_zero()) && !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    // make primitive with integer coefficients, positive leading
    let lead = x.last().cloned().unwrap_or_else(Rational::one);
    let monic: Vec<Rational> = x.iter().map(|c| c / &lead).collect();
    let den = monic.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    monic.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect()
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r.pop();
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    if r.is_empty() { vec![Rational::zero()] } else { r }
}

fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<Rational> = a.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let b: Vec<Rational> = b.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let db = b.len() - 1;
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let f = &r[k + db] / &b[db];
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        q[k] = f;
    }
    assert!(r.iter().all(|c| c.is_zero()), "exact division");
    let den = q.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    q.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect()
}
