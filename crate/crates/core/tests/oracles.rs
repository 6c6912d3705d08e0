//! Independent floating-point brute force for the frozen values used in the
//! unit tests.

use std::f64::consts::TAU;

use signfourier::theorem2::{class_sum, sigma_shift, ShiftQuery};
use signfourier::{sigma_exact, Modulus, SignVector};

/// `sign(cos(theta))` with values within `1e-9` of zero treated as zero,
/// i.e. `+1`.
fn float_sign(theta: f64) -> i64 {
    if theta.cos() >= -1e-9 {
        1
    } else {
        -1
    }
}

fn brute_sigma(a: i64, b: i64, n: u64) -> i64 {
    (1..=n as i64)
        .map(|k| {
            float_sign(TAU * (a * k) as f64 / n as f64) * float_sign(TAU * (b * k) as f64 / n as f64)
        })
        .sum()
}

fn m(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

#[test]
fn pinned_prime_value() {
    assert_eq!(brute_sigma(1, 3, 101), -35);
    assert_eq!(sigma_exact(1, 3, &m(101)).t, -35);
    assert_eq!(brute_sigma(3, 9, 101), -35);
}

#[test]
fn pinned_shift_values() {
    for (n, p, a, c, expected) in [(300u64, 5u64, 1i64, 1i64, 12i64), (105, 5, 2, 3, 5), (300, 3, 7, 2, 32)] {
        let b = a + c * (n / p) as i64;
        assert_eq!(brute_sigma(a, b, n), expected);
        assert_eq!(sigma_shift(&ShiftQuery::new(&m(n), p, a, c).unwrap()).t, expected);
    }
}

#[test]
fn pinned_class_value() {
    let (n, p, i) = (105u64, 5u64, 1u64);
    let brute: i64 = (1..=n)
        .filter(|j| j % p == i)
        .map(|j| {
            let x = TAU * j as f64 / n as f64;
            float_sign(x) * float_sign(x + TAU * i as f64 / p as f64)
        })
        .sum();
    assert_eq!(brute, 3);
    let q = ShiftQuery::new(&m(n), p, 1, 1).unwrap();
    assert_eq!(class_sum(&q, i).unwrap().sigma_i, brute);
}

#[test]
fn rows_match_unreduced_cosines() {
    // direct evaluation of cos(2 pi a k / n) without reducing a k mod n
    for n in 2..=300u64 {
        let modulus = m(n);
        for a in 1..=n as i64 {
            let v = SignVector::new(a, &modulus);
            for k in 1..=n as i64 {
                let exact_zero = n % 4 == 0 && {
                    let r = (a * k) as u64 % n;
                    4 * r == n || 4 * r == 3 * n
                };
                if exact_zero {
                    assert_eq!(v.sign(k as usize), 1);
                    continue;
                }
                let c = (TAU * (a * k) as f64 / n as f64).cos();
                let s = if c >= 0.0 { 1 } else { -1 };
                assert_eq!(v.sign(k as usize), s, "n = {n}, a = {a}, k = {k}");
            }
        }
    }
}
