mod common;

use common::*;
use k3nodal::charclass::{segre_from_characters, todd, GradedPoly, Monomial};
use k3nodal::counting::generating_function;
use k3nodal::exactq::{delta, divisor_sums, eisenstein, yau_zaslow, QSeries};
use k3nodal::lattice::{IntMatrix, Lattice};
use k3nodal::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ints(s: &QSeries) -> Vec<BigInt> {
    s.integer_coeffs().expect("integral series")
}

/// `c1 ↦ x + y`, `c2 ↦ xy`.
fn substitute_roots(p: &GradedPoly) -> Bivariate {
    let d = p.max_degree();
    let c1 = Bivariate::from([((1, 0), Rational::one()), ((0, 1), Rational::one())]);
    let c2 = Bivariate::from([((1, 1), Rational::one())]);
    let mut out = Bivariate::new();
    for (m, c) in p.terms() {
        assert_eq!(m.line, 0);
        let term = bi_mul(&bi_pow(&c1, m.c1, d), &bi_pow(&c2, m.c2, d), d);
        for (k, v) in term {
            *out.entry(k).or_insert_with(Rational::zero) += v * c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[test]
fn divisor_sums_match_trial_division() {
    for k in 0..8 {
        let sieve = divisor_sums(k, 60);
        for n in 1..=60u64 {
            assert_eq!(sieve[n as usize], sigma(k, n), "sigma_{k}({n})");
        }
    }
}

#[test]
fn eisenstein_matches_divisor_oracle() {
    for k in [2, 4, 6] {
        assert_eq!(ints(&eisenstein(k, 20).unwrap()), eisenstein_oracle(k, 20));
    }
}

#[test]
fn yau_zaslow_matches_geometric_product() {
    assert_eq!(ints(&yau_zaslow(14)), yau_zaslow_oracle(14));
}

#[test]
fn delta_is_reciprocal() {
    let one_shift = convolve(&ints(&delta(12)), &yau_zaslow_oracle(12), 12);
    let mut q = vec![BigInt::zero(); 13];
    q[1] = BigInt::one();
    assert_eq!(one_shift, q);
}

#[test]
fn todd_matches_two_root_expansion() {
    for d in 0..=6 {
        assert_eq!(substitute_roots(&todd(d)), two_root_todd(d), "degree {d}");
    }
}

#[test]
fn todd_degree_two_part() {
    let t = todd(4);
    let expect = [
        (Monomial::ONE, rat(1, 1)),
        (Monomial::new(1, 0, 0), rat(1, 2)),
        (Monomial::new(2, 0, 0), rat(1, 12)),
        (Monomial::new(0, 1, 0), rat(1, 12)),
    ];
    let low: Vec<_> = t.terms().filter(|(m, _)| m.degree() <= 2).map(|(m, c)| (*m, c.clone())).collect();
    assert_eq!(low.len(), expect.len());
    for (m, c) in expect {
        assert_eq!(t.coeff(&m), c, "{m}");
    }
}

#[test]
fn segre_inverts_total_chern() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9e);
    for _ in 0..100 {
        let rank = rng.gen_range(1..=3);
        let roots: Vec<i64> = (0..rank).map(|_| rng.gen_range(-4..=4)).collect();
        let d = 4;
        let mut fact = BigInt::one();
        let ch: Vec<Rational> = (1..=d)
            .map(|i| {
                fact *= BigInt::from(i);
                let p: BigInt = roots.iter().map(|&x| BigInt::from(x).pow(i as u32)).sum();
                Rational::new(p, fact.clone())
            })
            .collect();
        let s = segre_from_characters(&ch, d);
        let oracle = inverse_total_chern(&roots, d);
        for i in 0..d {
            assert_eq!(s[i], Rational::from_integer(oracle[i + 1].clone()), "roots {roots:?}, s_{}", i + 1);
        }
    }
}

#[test]
fn signature_matches_eigenvalue_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x519);
    for _ in 0..120 {
        let n = rng.gen_range(1..=4);
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-3..=3);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let lat = Lattice::new(IntMatrix::from_rows(a.clone())).unwrap();
        let (sig, nullity) = lat.signature();
        let (pos, neg, zero) = eigenvalue_signs(&a);
        assert_eq!((sig.positive, sig.negative, nullity), (pos, neg, zero), "{a:?}");
    }
}

#[test]
fn pipeline_matches_triple_convolution() {
    use k3nodal::fibration::{K3FibrationSpec, SingularFiberSpec};
    let z0 = K3FibrationSpec {
        name: "Z0".into(),
        base_genus: 0,
        euler_total: None,
        calabi_yau: true,
        iso_trivial: true,
        fibers: vec![SingularFiberSpec::quasi_homogeneous(24, vec![12, 3, 2], 12)],
        fiber_lattice: "H + -E8".parse().unwrap(),
        b2: None,
    };
    let w0 = K3FibrationSpec {
        name: "W0".into(),
        fibers: vec![SingularFiberSpec::quasi_homogeneous(84, vec![7, 3, 2], 42)],
        fiber_lattice: Lattice::hyperbolic(),
        ..z0.clone()
    };
    let n = 8;
    let yz = yau_zaslow_oracle(n);
    let one: Vec<BigInt> = (0..=n).map(|i| BigInt::from((i == 0) as i64)).collect();
    let e4 = eisenstein_oracle(4, n);
    let e6 = eisenstein_oracle(6, n);

    let f = generating_function(&z0, n).unwrap();
    assert_eq!(f.n_values(), triple_product(-2, &yz, &e6, &one, n));
    let f = generating_function(&w0, n).unwrap();
    assert_eq!(f.n_values(), triple_product(-2, &yz, &e4, &e6, n));
}
