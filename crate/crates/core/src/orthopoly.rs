//! Sign-Gram matrices of Legendre and Chebyshev polynomials,
//!
//! ```text
//! Q_mn = | int_{-1}^{1} sign(P_m) sign(P_n) dx |
//! R_mn = | int_{-1}^{1} sign(T_m) sign(T_n) dx / sqrt(1 - x^2) |
//! ```
//!
//! Both integrands are piecewise constant between the merged root sets.
//! With `x = cos(theta)`, `R_mn = |int_0^pi sign(cos m theta) sign(cos n theta) d theta|`
//! and the breakpoints are rational multiples of `pi`, so `R` is exact.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::BreakpointPartition;
use crate::report::fmt_real;
use crate::theorem1::turn_cos_sign;

const MAX_NEWTON_STEPS: usize = 100;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    let nf = n as f64;
    let deriv = if (x * x - 1.0).abs() < f64::EPSILON {
        // P_n'(+-1) = (+-1)^(n-1) n(n+1)/2
        let end = nf * (nf + 1.0) / 2.0;
        if x < 0.0 && n % 2 == 0 {
            -end
        } else {
            end
        }
    } else {
        nf * (x * cur - prev) / (x * x - 1.0)
    };
    (cur, deriv)
}

/// Roots of `P_n`, ascending. Positive roots come from Newton's method
/// started at `cos(pi (4k - 1) / (4n + 2))`, falling back to bisection on the
/// bracket `theta_k in ((k - 1/2) pi/(n + 1/2), k pi/(n + 1/2))`; the negative
/// roots are their mirror images.
pub fn legendre_roots(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let mut positive = Vec::with_capacity(n / 2);
    for k in 1..=n / 2 {
        let kf = k as f64;
        let lo = (kf * PI / (nf + 0.5)).cos();
        let hi = ((kf - 0.5) * PI / (nf + 0.5)).cos();
        let guess = (PI * (4.0 * kf - 1.0) / (4.0 * nf + 2.0)).cos();
        let root = newton(n, guess, lo, hi).or_else(|| bisect(n, lo, hi)).ok_or(
            Error::ConvergenceFailure {
                degree: n,
                lo,
                hi,
            },
        )?;
        positive.push(root);
    }
    let mut roots: Vec<f64> = positive.iter().map(|x| -x).collect();
    if n % 2 == 1 {
        roots.push(0.0);
    }
    roots.extend(positive.iter().rev());
    Ok(roots)
}

fn newton(n: usize, mut x: f64, lo: f64, hi: f64) -> Option<f64> {
    for _ in 0..MAX_NEWTON_STEPS {
        let (p, dp) = legendre_eval(n, x);
        let step = p / dp;
        let next = x - step;
        if !(next > lo && next < hi) {
            return None;
        }
        x = next;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
            return Some(x);
        }
    }
    None
}

fn bisect(n: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = legendre_eval(n, lo).0;
    if f_lo * legendre_eval(n, hi).0 > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = legendre_eval(n, mid).0;
        if f_mid == 0.0 {
            return Some(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramKind {
    Legendre,
    Chebyshev,
}

impl GramKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GramKind::Legendre => "legendre",
            GramKind::Chebyshev => "chebyshev",
        }
    }

    /// Diagonal value, the largest possible entry.
    pub fn ceiling(&self) -> f64 {
        match self {
            GramKind::Legendre => 2.0,
            GramKind::Chebyshev => PI,
        }
    }
}

impl std::str::FromStr for GramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "legendre" => Ok(GramKind::Legendre),
            "chebyshev" => Ok(GramKind::Chebyshev),
            _ => Err(Error::InvalidArgument(format!("unknown polynomial family `{s}`"))),
        }
    }
}

/// Symmetric `N x N` sign-Gram matrix, indices `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignGram {
    kind: GramKind,
    size: usize,
    values: Vec<f64>,
    /// Exact `R_mn / pi` for Chebyshev matrices.
    pi_coeffs: Option<Vec<Rational64>>,
}

impl SignGram {
    pub fn kind(&self) -> GramKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.size + n]
    }

    /// `R_mn / pi` as an exact fraction (Chebyshev only).
    pub fn pi_coeff(&self, m: usize, n: usize) -> Option<Rational64> {
        self.pi_coeffs.as_ref().map(|c| c[m * self.size + n])
    }

    /// `kind,N` line followed by `m,n,value` rows; Chebyshev rows carry an
    /// extra exact `p/q` coefficient of `pi`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.kind.as_str(), self.size);
        for m in 0..self.size {
            for n in 0..self.size {
                write!(out, "{},{},{}", m, n, fmt_real(self.get(m, n))).unwrap();
                if let Some(c) = self.pi_coeff(m, n) {
                    write!(out, ",{}/{}", c.numer(), c.denom()).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let (kind, size) = header
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
        let kind: GramKind = kind.parse()?;
        let size: usize = size
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad size in `{header}`")))?;
        if size == 0 {
            return Err(Error::EmptyTable);
        }
        let mut values = vec![f64::NAN; size * size];
        let mut coeffs = vec![Rational64::from_integer(0); size * size];
        let bad = |line: &str| Error::Parse(format!("bad row `{line}`"));
        for line in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let (m, n, v) = match fields.as_slice() {
                [m, n, v] | [m, n, v, _] => (
                    m.parse::<usize>().map_err(|_| bad(line))?,
                    n.parse::<usize>().map_err(|_| bad(line))?,
                    v.parse::<f64>().map_err(|_| bad(line))?,
                ),
                _ => return Err(bad(line)),
            };
            if m >= size || n >= size {
                return Err(bad(line));
            }
            values[m * size + n] = v;
            if let [_, _, _, c] = fields.as_slice() {
                let (p, q) = c.split_once('/').ok_or_else(|| bad(line))?;
                let p: i64 = p.parse().map_err(|_| bad(line))?;
                let q: i64 = q.parse().map_err(|_| bad(line))?;
                if q == 0 {
                    return Err(bad(line));
                }
                coeffs[m * size + n] = Rational64::new(p, q);
            }
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Parse("matrix has missing entries".into()));
        }
        Ok(Self {
            kind,
            size,
            values,
            pi_coeffs: (kind == GramKind::Chebyshev).then_some(coeffs),
        })
    }
}

fn upper_pairs(size: usize) -> Vec<(usize, usize)> {
    (0..size)
        .flat_map(|m| (m..size).map(move |n| (m, n)))
        .collect()
}

fn mirror<T: Copy + Default>(size: usize, upper: &[((usize, usize), T)]) -> Vec<T> {
    let mut out = vec![T::default(); size * size];
    for &((m, n), v) in upper {
        out[m * size + n] = v;
        out[n * size + m] = v;
    }
    out
}

/// Signed integral of `sign(P_m) sign(P_n)` over `[-1, 1]`, given both root
/// sets; piece signs come from evaluating both polynomials at the midpoint.
/// An odd integrand (`m + n` odd) gives exactly zero.
pub fn legendre_sign_integral(m: usize, n: usize, roots_m: &[f64], roots_n: &[f64]) -> Result<f64> {
    if (m + n) % 2 == 1 {
        return Ok(0.0);
    }
    let points = roots_m.iter().chain(roots_n).copied();
    let part = BreakpointPartition::from_points(-1.0, 1.0, points, |x| {
        let s = legendre_eval(m, x).0 * legendre_eval(n, x).0;
        if s >= 0.0 {
            1
        } else {
            -1
        }
    })?;
    Ok(part.signed_measure())
}

pub fn sign_gram_legendre(size: usize) -> Result<SignGram> {
    if size == 0 {
        return Err(Error::InvalidArgument("Gram size must be positive".into()));
    }
    let roots = (0..size)
        .into_par_iter()
        .map(legendre_roots)
        .collect::<Result<Vec<_>>>()?;
    let upper = upper_pairs(size)
        .into_par_iter()
        .map(|(m, n)| {
            legendre_sign_integral(m, n, &roots[m], &roots[n]).map(|v| ((m, n), v.abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignGram {
        kind: GramKind::Legendre,
        size,
        values: mirror(size, &upper),
        pi_coeffs: None,
    })
}

/// Exact `(1/pi) int_0^pi sign(cos m theta) sign(cos n theta) d theta`.
pub fn chebyshev_sign_integral(m: usize, n: usize) -> Rational64 {
    let q = |a: i64, b: i64| Rational64::new(a, b);
    // theta = pi t; sign changes where k t is an odd multiple of 1/2
    let cuts = |k: usize| (0..k as i64).map(move |j| q(2 * j + 1, 2 * k as i64));
    let part = BreakpointPartition::from_points(q(0, 1), q(1, 1), cuts(m).chain(cuts(n)), |t| {
        turn_cos_sign(t * m as i64 / 2) * turn_cos_sign(t * n as i64 / 2)
    })
    .expect("non-empty domain");
    part.signed_measure()
}

pub fn sign_gram_chebyshev(size: usize) -> Result<SignGram> {
    if size == 0 {
        return Err(Error::InvalidArgument("Gram size must be positive".into()));
    }
    let upper: Vec<_> = upper_pairs(size)
        .into_par_iter()
        .map(|(m, n)| ((m, n), chebyshev_sign_integral(m, n).abs()))
        .collect();
    let coeffs = mirror(size, &upper);
    Ok(SignGram {
        kind: GramKind::Chebyshev,
        size,
        values: coeffs
            .iter()
            .map(|c| *c.numer() as f64 / *c.denom() as f64 * PI)
            .collect(),
        pi_coeffs: Some(coeffs),
    })
}

pub fn sign_gram(kind: GramKind, size: usize) -> Result<SignGram> {
    match kind {
        GramKind::Legendre => sign_gram_legendre(size),
        GramKind::Chebyshev => sign_gram_chebyshev(size),
    }
}

/// `T_0..=T_max` at `x` by `T_{k+1} = 2x T_k - T_{k-1}`.
fn chebyshev_values(max_degree: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if max_degree >= 1 {
        out.push(x);
    }
    for k in 2..=max_degree {
        let next = 2.0 * x * out[k - 1] - out[k - 2];
        out.push(next);
    }
}

/// Midpoint-rule value of `|int sign(f_m) sign(f_n) w|` for cross-checks.
/// Chebyshev uses the substitution `x = cos(theta)`, which absorbs the weight.
pub fn quadrature_oracle(kind: GramKind, m: usize, n: usize, samples: usize) -> Result<f64> {
    if samples < 1000 {
        return Err(Error::InvalidArgument(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    let sgn = |v: f64| if v >= 0.0 { 1.0 } else { -1.0 };
    let mut buf = Vec::new();
    let sum: f64 = match kind {
        GramKind::Legendre => {
            let h = 2.0 / samples as f64;
            (0..samples)
                .map(|j| {
                    let x = -1.0 + (j as f64 + 0.5) * h;
                    sgn(legendre_eval(m, x).0) * sgn(legendre_eval(n, x).0)
                })
                .sum::<f64>()
                * h
        }
        GramKind::Chebyshev => {
            let h = PI / samples as f64;
            let top = m.max(n);
            (0..samples)
                .map(|j| {
                    chebyshev_values(top, ((j as f64 + 0.5) * h).cos(), &mut buf);
                    sgn(buf[m]) * sgn(buf[n])
                })
                .sum::<f64>()
                * h
        }
    };
    Ok(sum.abs())
}

/// Midpoint-rule Chebyshev sign matrix for all degrees `0..=max_degree` at
/// once: the sign of every `T_k` at every node is packed into a bitset and
/// pairs are correlated by popcount.
pub struct ChebyshevQuadrature {
    samples: usize,
    bits: Vec<Vec<u64>>,
}

impl ChebyshevQuadrature {
    pub fn new(max_degree: usize, samples: usize) -> Result<Self> {
        if samples < 1000 {
            return Err(Error::InvalidArgument(format!(
                "need at least 1000 samples, got {samples}"
            )));
        }
        let words = samples.div_ceil(64);
        let h = PI / samples as f64;
        let chunks: Vec<Vec<Vec<u64>>> = (0..words)
            .into_par_iter()
            .map(|w| {
                let mut local = vec![vec![0u64]; max_degree + 1];
                let mut buf = Vec::new();
                for bit in 0..64 {
                    let j = w * 64 + bit;
                    if j >= samples {
                        break;
                    }
                    chebyshev_values(max_degree, ((j as f64 + 0.5) * h).cos(), &mut buf);
                    for (k, v) in buf.iter().enumerate() {
                        if *v < 0.0 {
                            local[k][0] |= 1 << bit;
                        }
                    }
                }
                local
            })
            .collect();
        let bits = (0..=max_degree)
            .map(|k| chunks.iter().map(|c| c[k][0]).collect())
            .collect();
        Ok(Self { samples, bits })
    }

    pub fn value(&self, m: usize, n: usize) -> f64 {
        let differ = crate::sign::xor_popcount(&self.bits[m], &self.bits[n]) as f64;
        ((self.samples as f64 - 2.0 * differ) * PI / self.samples as f64).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_eval(0, 0.7).0, 1.0);
        assert_eq!(legendre_eval(1, 0.3).0, 0.3);
        assert!((legendre_eval(2, 0.5).0 + 0.125).abs() < 1e-16);
        // P_3 = (5x^3 - 3x)/2, P_3' = (15x^2 - 3)/2
        let (p, dp) = legendre_eval(3, 0.4);
        assert!((p - (5.0 * 0.064 - 1.2) / 2.0).abs() < 1e-15);
        assert!((dp - (15.0 * 0.16 - 3.0) / 2.0).abs() < 1e-14);
        assert_eq!(legendre_eval(4, 1.0), (1.0, 10.0));
        assert_eq!(legendre_eval(4, -1.0), (1.0, -10.0));
        assert_eq!(legendre_eval(3, -1.0), (-1.0, 6.0));
    }

    #[test]
    fn small_root_sets() {
        assert_eq!(legendre_roots(1).unwrap(), vec![0.0]);
        let r = legendre_roots(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0] + s).abs() < 1e-15 && (r[1] - s).abs() < 1e-15);
        assert!(legendre_roots(0).unwrap().is_empty());
    }

    #[test]
    fn roots_validated_by_bracketing_scan() {
        // oracle: sign changes of P_64 on a fine grid, refined by bisection
        let n = 64;
        let roots = legendre_roots(n).unwrap();
        let grid = 200_000;
        let mut scan = Vec::new();
        let mut prev_x = -1.0;
        let mut prev = legendre_eval(n, prev_x).0;
        for j in 1..=grid {
            let x = -1.0 + 2.0 * j as f64 / grid as f64;
            let v = legendre_eval(n, x).0;
            if v.signum() != prev.signum() {
                let (mut lo, mut hi) = (prev_x, x);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if legendre_eval(n, mid).0.signum() == legendre_eval(n, lo).0.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                scan.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev = v;
        }
        assert_eq!(scan.len(), n);
        for (a, b) in roots.iter().zip(&scan) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn chebyshev_examples() {
        let q = |a: i64, b: i64| Rational64::new(a, b);
        assert_eq!(chebyshev_sign_integral(4, 4), q(1, 1));
        assert_eq!(chebyshev_sign_integral(0, 0), q(1, 1));
        assert_eq!(chebyshev_sign_integral(1, 2), q(0, 1));
        assert_eq!(chebyshev_sign_integral(1, 3), q(-1, 3));
        let g = sign_gram_chebyshev(6).unwrap();
        assert_eq!(g.pi_coeff(1, 3), Some(q(1, 3)));
        assert!((g.get(3, 1) - PI / 3.0).abs() < 1e-15);
        assert_eq!(g.get(2, 2), PI);
    }

    #[test]
    fn legendre_examples() {
        let g = sign_gram_legendre(8).unwrap();
        for n in 0..8 {
            assert!((g.get(n, n) - 2.0).abs() < 1e-10);
        }
        assert!(g.get(0, 1).abs() < 1e-10);
        assert!(g.get(1, 2).abs() < 1e-10);
        for m in 0..8 {
            for n in 0..8 {
                assert_eq!(g.get(m, n), g.get(n, m));
                if (m + n) % 2 == 1 {
                    assert_eq!(g.get(m, n), 0.0);
                }
            }
        }
        // Q_{0,2}: sign(P_2) is -1 on (-1/sqrt3, 1/sqrt3)
        assert!((g.get(0, 2) - (2.0 - 4.0 / 3f64.sqrt()).abs()).abs() < 1e-14);
    }

    #[test]
    fn quadrature_examples() {
        assert!((quadrature_oracle(GramKind::Chebyshev, 1, 3, 1_000_000).unwrap() - PI / 3.0).abs() < 1e-4);
        assert!((quadrature_oracle(GramKind::Legendre, 5, 5, 100_000).unwrap() - 2.0).abs() < 1e-3);
        assert!(quadrature_oracle(GramKind::Legendre, 1, 2, 1_000_000).unwrap() < 1e-4);
        assert!(quadrature_oracle(GramKind::Legendre, 1, 2, 999).is_err());
        let batch = ChebyshevQuadrature::new(8, 100_000).unwrap();
        for m in 0..=8 {
            for n in 0..=8 {
                let single = quadrature_oracle(GramKind::Chebyshev, m, n, 100_000).unwrap();
                assert!((batch.value(m, n) - single).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_round_trip_keeps_exact_coefficients() {
        let g = sign_gram_chebyshev(5).unwrap();
        let csv = g.to_csv();
        assert!(csv.starts_with("chebyshev,5\n0,0,3.14159265359,1/1\n"));
        assert_eq!(csv.lines().count(), 26);
        let back = SignGram::from_csv(&csv).unwrap();
        assert_eq!(back.pi_coeff(1, 3), g.pi_coeff(1, 3));
        let l = sign_gram_legendre(3).unwrap();
        let back = SignGram::from_csv(&l.to_csv()).unwrap();
        assert_eq!(back.kind(), GramKind::Legendre);
        assert!(SignGram::from_csv("legendre,2\n0,0,2\n").is_err());
        assert!(SignGram::from_csv("hermite,2\n").is_err());
    }
}
