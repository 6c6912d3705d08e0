//! Prime-modulus estimates for `Sigma_{a,b}`.
//!
//! Everything here is keyed by the class ratio `r = a^{-1} b mod n` and its
//! toroidal norm `d = ||r||`:
//!
//! * the line-integral main term `(n/d) [d odd]`,
//! * the count `A = #{k in N : r k mod n in N}` with `Sigma = |4A - n| + O(1)`,
//! * the atomic measure `mu` on the torus at the points `r k / n`, `k in N`,
//!   its Fourier coefficients in direct and closed (geometric series) form,
//! * the Erdos-Turan upper bound and the Fourier reconstruction of `Sigma`.

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::envelopes::*;
use crate::error::{Error, Result};
use crate::partition::BreakpointPartition;
use crate::residue::{class_ratio, norm_of_residue, Modulus};
use crate::sign::{negative_set, sigma_exact, NegativeRun};

/// `(n/d) [d odd]` with `d = ||a^{-1} b||`.
pub fn estimate1_main_term(n: &Modulus, a: i64, b: i64) -> Result<Rational64> {
    let d = norm_of_residue(class_ratio(a, b, n)?, n.get());
    Ok(if d % 2 == 1 {
        Rational64::new(n.get() as i64, d as i64)
    } else {
        Rational64::from_integer(0)
    })
}

/// Sign of `cos(2*pi*x)` for a rational number of turns, `sign(0) = +1`.
pub(crate) fn turn_cos_sign(x: Rational64) -> i8 {
    let f = x - x.floor();
    if f > Rational64::new(1, 4) && f < Rational64::new(3, 4) {
        -1
    } else {
        1
    }
}

/// Sign-change partition of `t -> sign(cos 2 pi t) sign(cos 2 pi s t)` on
/// `[0, 1]`.
pub fn line_partition(s: u64) -> Result<BreakpointPartition<Rational64>> {
    if s == 0 {
        return Err(Error::InvalidArgument("slope must be positive".into()));
    }
    let s = s as i64;
    let q = |num: i64, den: i64| Rational64::new(num, den);
    // x-crossings at 1/4, 3/4; y-crossings where s t is an odd multiple of 1/4
    let points = [q(1, 4), q(3, 4)]
        .into_iter()
        .chain((0..2 * s).map(|j| q(2 * j + 1, 4 * s)));
    BreakpointPartition::from_points(q(0, 1), q(1, 1), points, |t| {
        turn_cos_sign(t) * turn_cos_sign(t * s)
    })
}

/// Exact `int_0^1 sign(cos 2 pi t) sign(cos 2 pi s t) dt`, by summing signed
/// piece lengths. Equals `(-1)^((s-1)/2) / s` for odd `s` and `0` for even `s`.
pub fn line_integral_signed(s: u64) -> Result<Rational64> {
    Ok(line_partition(s)?.signed_measure())
}

/// Magnitude of the line integral: `1/s` for odd `s`, `0` for even `s`.
pub fn phi_line_integral(s: u64) -> Result<Rational64> {
    line_integral_signed(s).map(|v| num_traits::Signed::abs(&v))
}

/// `A = #{k in N : a^{-1} b k mod n in N}`.
pub fn count_a(n: &Modulus, a: i64, b: i64) -> Result<u64> {
    let r = class_ratio(a, b, n)?;
    let run = negative_set(n);
    Ok(count_in_run(r, n.get(), &run))
}

fn count_in_run(r: u64, n: u64, run: &NegativeRun) -> u64 {
    let mut x = ((r as u128 * run.first as u128) % n as u128) as u64;
    let mut count = 0;
    for _ in 0..run.count {
        if run.contains(x) {
            count += 1;
        }
        x += r;
        if x >= n {
            x -= n;
        }
    }
    count
}

/// `e^{-2 pi i x / n}`.
#[inline]
fn phase(x: u64, n: u64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x as f64 / n as f64).sin_cos();
    Complex64::new(c, -s)
}

/// Uniform probability measure on the torus points `r k / n` for `k` in the
/// negative run `N = {k0 + 1, ..., k0 + m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuMeasure {
    n: Modulus,
    r: u64,
    run: NegativeRun,
}

impl MuMeasure {
    pub fn new(n: &Modulus, a: i64, b: i64) -> Result<Self> {
        Ok(Self {
            n: *n,
            r: class_ratio(a, b, n)?,
            run: negative_set(n),
        })
    }

    pub fn from_ratio(n: &Modulus, r: i64) -> Result<Self> {
        Self::new(n, 1, r)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.n
    }

    pub fn ratio(&self) -> u64 {
        self.r
    }

    pub fn offset(&self) -> u64 {
        self.run.first - 1
    }

    pub fn atom_count(&self) -> u64 {
        self.run.count
    }

    /// Atom numerators `r k mod n` (the atom itself is this over `n`).
    pub fn atoms(&self) -> impl Iterator<Item = u64> + '_ {
        let n = self.n;
        (self.run.first..=self.run.last).map(move |k| n.mul(self.r, k))
    }

    /// Exact `mu((1/4, 3/4))`.
    pub fn negative_arc_mass(&self) -> Rational64 {
        let hits = count_in_run(self.r, self.n.get(), &self.run);
        Rational64::new(hits as i64, self.run.count as i64)
    }

    /// `(l r) mod n` as the phase index of frequency `l`.
    fn frequency_index(&self, l: i64) -> u64 {
        self.n.mul(self.n.reduce(l), self.r)
    }

    /// `mu_hat(l) = (1/m) sum_k e^{-2 pi i l r k / n}`, summed term by term
    /// with compensated accumulation.
    pub fn mu_hat_direct(&self, l: i64) -> Complex64 {
        let g = self.frequency_index(l);
        let n = self.n.get();
        let (mut re, mut im) = (Kahan::default(), Kahan::default());
        for k in self.run.first..=self.run.last {
            let z = phase(self.n.mul(g, k), n);
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.sum, im.sum) / self.run.count as f64
    }

    /// Closed form of the geometric series,
    /// `(1/m) e^{-i t (k0+1)} (1 - e^{-i t m}) / (1 - e^{-i t})` with
    /// `t = 2 pi l r / n`. Fails when `n | l r`.
    pub fn try_mu_hat_closed(&self, l: i64) -> Result<Complex64> {
        let g = self.frequency_index(l);
        let n = self.n.get();
        if g == 0 {
            return Err(Error::DegenerateFrequency { l, r: self.r, n });
        }
        let m = self.run.count;
        let lead = phase(self.n.mul(g, self.run.first), n);
        let num = Complex64::new(1.0, 0.0) - phase(self.n.mul(g, m), n);
        let den = Complex64::new(1.0, 0.0) - phase(g, n);
        Ok(lead * num / den / m as f64)
    }

    /// Closed form with the degenerate frequencies mapped to the all-ones sum.
    pub fn mu_hat_closed(&self, l: i64) -> Complex64 {
        self.try_mu_hat_closed(l)
            .unwrap_or(Complex64::new(1.0, 0.0))
    }

    /// `2 / ||l r||`, the bound on `|mu_hat(l)|`; infinite when `n | l r`.
    pub fn coefficient_bound(&self, l: i64) -> f64 {
        match norm_of_residue(self.frequency_index(l), self.n.get()) {
            0 => f64::INFINITY,
            d => 2.0 / d as f64,
        }
    }

    pub fn spectrum(&self, max_l: u64) -> Spectrum {
        Spectrum {
            entries: (0..=max_l as i64)
                .map(|l| SpectrumEntry {
                    l,
                    value: self.mu_hat_closed(l),
                    bound: self.coefficient_bound(l),
                })
                .collect(),
        }
    }
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub l: i64,
    pub value: Complex64,
    pub bound: f64,
}

/// Fourier data of a [`MuMeasure`] for `l = 0..=max_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Entries whose modulus exceeds the `2/||l r||` bound.
    pub fn bound_violations(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| e.value.norm() > e.bound)
    }
}

/// `n (2/(m+2) + sum_{l=1}^m 12 / (l ||l r||))`.
pub fn erdos_turan_bound(n: &Modulus, a: i64, b: i64, m: u64) -> Result<f64> {
    if m == 0 || m >= n.get() {
        return Err(Error::InvalidArgument(format!(
            "truncation m = {m} must satisfy 1 <= m < n"
        )));
    }
    let curve = erdos_turan_curve(n, a, b, m)?;
    Ok(curve[m as usize - 1].1)
}

/// `(m, bound)` for `m = 1..=max_m`, sharing the partial sums.
pub fn erdos_turan_curve(n: &Modulus, a: i64, b: i64, max_m: u64) -> Result<Vec<(u64, f64)>> {
    let r = class_ratio(a, b, n)?;
    let max_m = max_m.min(n.get() - 1);
    let size = n.get() as f64;
    let mut partial = 0.0;
    Ok((1..=max_m)
        .map(|m| {
            let d = norm_of_residue(n.mul(m, r), n.get());
            partial += 12.0 / (m as f64 * d as f64);
            (m, size * (2.0 / (m as f64 + 2.0) + partial))
        })
        .collect())
}

/// `int_{1/4}^{3/4} e^{2 pi i l x} dx`, which is real: `1/2` at `l = 0`,
/// `0` for even `l`, and `-(-1)^((l-1)/2) / (l pi)` for odd `l`.
pub fn interval_fourier_coeff(l: i64) -> f64 {
    if l == 0 {
        return 0.5;
    }
    if l % 2 == 0 {
        return 0.0;
    }
    -alternating_sign(l) / (l as f64 * std::f64::consts::PI)
}

/// `(-1)^((l-1)/2)` for odd `l`.
#[inline]
fn alternating_sign(l: i64) -> f64 {
    if (l - 1).div_euclid(2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    Raw,
    Fejer,
}

impl Smoothing {
    fn weight(self, l: u64, order: u64) -> f64 {
        match self {
            Smoothing::Raw => 1.0,
            Smoothing::Fejer => 1.0 - l as f64 / (order as f64 + 1.0),
        }
    }
}

/// `(4n/pi) |sum_{l odd, l <= order} w_l (-1)^((l-1)/2) / l * Re mu_hat(l)|`.
pub fn estimate3_reconstruct(mu: &MuMeasure, order: u64, smoothing: Smoothing) -> f64 {
    let n = mu.n.get();
    // mu_hat(l) depends on l only through l mod n
    let period: Vec<f64> = (0..n as i64).map(|l| mu.mu_hat_closed(l).re).collect();
    let mut acc = Kahan::default();
    for l in (1..=order).step_by(2) {
        let term = alternating_sign(l as i64) / l as f64 * period[(l % n) as usize];
        acc.add(smoothing.weight(l, order) * term);
    }
    4.0 * n as f64 / std::f64::consts::PI * acc.sum.abs()
}

fn serialize_ratio<S: Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::report::serialize_real(&(*q.numer() as f64 / *q.denom() as f64), s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtBest {
    pub m: u64,
    #[serde(serialize_with = "crate::report::serialize_real")]
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Est3Point {
    #[serde(rename = "L")]
    pub order: u64,
    pub smoothing: Smoothing,
    #[serde(serialize_with = "crate::report::serialize_real")]
    pub value: f64,
}

/// All three estimates for one pair `(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub d: u64,
    pub sigma: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub est1_main: Rational64,
    #[serde(serialize_with = "serialize_ratio")]
    pub est1_residual: Rational64,
    #[serde(rename = "A")]
    pub count_a: u64,
    #[serde(skip)]
    pub est2_curve: Vec<(u64, f64)>,
    pub et_best: EtBest,
    pub est3: Vec<Est3Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    pub max_m: u64,
    /// Truncation orders for the Fourier reconstruction.
    pub orders: Vec<u64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            max_m: ERDOS_TURAN_MAX_M,
            orders: vec![10, 100, 1000, 10_000],
        }
    }
}

impl ReportOptions {
    /// Powers of ten up to `max_order`.
    pub fn with_max_order(max_order: u64) -> Self {
        let mut orders = Vec::new();
        let mut l = 10;
        while l <= max_order {
            orders.push(l);
            l *= 10;
        }
        if orders.last() != Some(&max_order) && max_order > 0 {
            orders.push(max_order);
        }
        Self {
            orders,
            ..Self::default()
        }
    }
}

pub fn theorem1_report(n: &Modulus, a: i64, b: i64, opts: &ReportOptions) -> Result<Theorem1Report> {
    let mu = MuMeasure::new(n, a, b)?;
    let record = sigma_exact(a, b, n);
    let d = norm_of_residue(mu.r, n.get());
    let est1_main = estimate1_main_term(n, a, b)?;
    let est2_curve = erdos_turan_curve(n, a, b, opts.max_m)?;
    let et_best = est2_curve
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(m, bound)| EtBest { m, bound })
        .ok_or_else(|| Error::InvalidArgument("empty Erdos-Turan range".into()))?;
    let est3 = opts
        .orders
        .iter()
        .flat_map(|&order| {
            [Smoothing::Raw, Smoothing::Fejer].map(|smoothing| Est3Point {
                order,
                smoothing,
                value: estimate3_reconstruct(&mu, order, smoothing),
            })
        })
        .collect();
    Ok(Theorem1Report {
        n: n.get(),
        a: record.a,
        b: record.b,
        d,
        sigma: record.sigma,
        est1_main,
        est1_residual: Rational64::from_integer(record.sigma as i64) - est1_main,
        count_a: count_in_run(mu.r, n.get(), &mu.run),
        est2_curve,
        et_best,
        est3,
    })
}

/// A failed check from [`verify_classes`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub c: u64,
    pub check: &'static str,
    pub detail: String,
}

/// Checks the pinned envelopes on every class `c = 1..n-1`; by the class
/// identity this covers every pair `(a, b)`.
pub fn verify_classes(n: &Modulus, max_d: u64) -> Result<Vec<Violation>> {
    n.require_prime()?;
    let size = n.get();
    let run = negative_set(n);
    let out = (1..size)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut v = Vec::new();
            let rec = sigma_exact(1, c as i64, n);
            let sigma = rec.sigma as i64;
            let d = norm_of_residue(c, size);
            let a = count_in_run(c, size, &run) as i64;
            let gap = (sigma - (4 * a - size as i64).abs()).unsigned_abs();
            if gap > COUNT_A_SLACK {
                v.push(Violation {
                    c,
                    check: "count_a",
                    detail: format!("|Sigma - |4A - n|| = {gap}"),
                });
            }
            if d <= max_d {
                let main = if d % 2 == 1 { size as f64 / d as f64 } else { 0.0 };
                let residual = (sigma as f64 - main).abs();
                if residual > (EST1_SLOPE * d + EST1_OFFSET) as f64 {
                    v.push(Violation {
                        c,
                        check: "estimate1",
                        detail: format!("d = {d}, residual {residual:.3}"),
                    });
                }
            }
            let best = erdos_turan_curve(n, 1, c as i64, ERDOS_TURAN_MAX_M)
                .expect("prime modulus")
                .into_iter()
                .map(|(_, b)| b)
                .fold(f64::INFINITY, f64::min);
            if best + ERDOS_TURAN_SLACK < sigma as f64 {
                v.push(Violation {
                    c,
                    check: "erdos_turan",
                    detail: format!("bound {best:.3} < Sigma {sigma}"),
                });
            }
            v
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::mod_inverse;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn main_term_examples() {
        let n = m(1009);
        assert_eq!(estimate1_main_term(&n, 5, 5).unwrap(), q(1009, 1));
        assert_eq!(estimate1_main_term(&n, 1, 2).unwrap(), q(0, 1));
        assert_eq!(estimate1_main_term(&n, 1, 3).unwrap(), q(1009, 3));
        assert_eq!(estimate1_main_term(&n, 1, -3).unwrap(), q(1009, 3));
        let s = sigma_exact(1, 3, &n).sigma as f64;
        assert!((s - 1009.0 / 3.0).abs() <= 6.0 * 3.0 + 4.0);
        assert!(matches!(
            estimate1_main_term(&m(1000), 1, 3),
            Err(Error::CompositeModulus(1000))
        ));
        assert!(matches!(
            estimate1_main_term(&n, 1009, 3),
            Err(Error::ZeroFrequency(1009))
        ));
    }

    #[test]
    fn line_integral_values() {
        assert_eq!(phi_line_integral(1).unwrap(), q(1, 1));
        assert_eq!(phi_line_integral(2).unwrap(), q(0, 1));
        assert_eq!(phi_line_integral(3).unwrap(), q(1, 3));
        assert_eq!(line_integral_signed(3).unwrap(), q(-1, 3));
        assert!(phi_line_integral(0).is_err());
        for s in 1..=200u64 {
            let sign = if (s / 2) % 2 == 0 { 1 } else { -1 };
            let expected = if s % 2 == 1 { q(sign, s as i64) } else { q(0, 1) };
            assert_eq!(line_integral_signed(s).unwrap(), expected, "s = {s}");
        }
    }

    #[test]
    fn line_integral_scales_to_main_term() {
        let n = m(499);
        for d in (1..250u64).step_by(2) {
            let main = estimate1_main_term(&n, 1, d as i64).unwrap();
            assert_eq!(phi_line_integral(d).unwrap() * 499, main);
        }
    }

    #[test]
    fn count_a_examples() {
        let n = m(101);
        assert_eq!(count_a(&n, 4, 4).unwrap(), negative_set(&n).count);
        let a = count_a(&n, 1, 3).unwrap();
        // direct count: k in 26..=75 with 3k mod 101 in 26..=75
        let oracle = (26..=75u64)
            .filter(|k| (26..=75).contains(&(3 * k % 101)))
            .count() as u64;
        assert_eq!(a, oracle);
        assert_eq!(a, 16);
        let s = sigma_exact(1, 3, &n).sigma as i64;
        assert!((s - (4 * a as i64 - 101).abs()).abs() <= 4);
    }

    #[test]
    fn count_a_stays_in_range() {
        let n = m(499);
        let quarter = 499.0 / 4.0;
        for c in 1..499i64 {
            let a = count_a(&n, 1, c).unwrap() as f64;
            let d = norm_of_residue(c as u64, 499);
            // the extremes A = |N| = (n+1)/2 occur only on the diagonals
            if d == 1 {
                assert_eq!(a as u64, negative_set(&n).count);
            } else {
                assert!((a - quarter).abs() < quarter, "c = {c}: A = {a}");
            }
        }
    }

    #[test]
    fn count_matches_measure() {
        let n = m(211);
        for c in 1..211 {
            let mu = MuMeasure::from_ratio(&n, c).unwrap();
            let a = count_a(&n, 1, c).unwrap() as i64;
            assert_eq!(mu.negative_arc_mass() * mu.atom_count() as i64, q(a, 1));
        }
    }

    #[test]
    fn measure_atoms_are_distinct() {
        let n = m(101);
        let run = negative_set(&n);
        for c in 1..101 {
            let mu = MuMeasure::from_ratio(&n, c).unwrap();
            assert_eq!(mu.offset(), run.first - 1);
            assert_eq!(mu.atom_count(), run.count);
            let mut atoms: Vec<u64> = mu.atoms().collect();
            atoms.sort_unstable();
            atoms.dedup();
            assert_eq!(atoms.len() as u64, run.count);
        }
    }

    #[test]
    fn direct_coefficients() {
        let n = m(101);
        let mu = MuMeasure::new(&n, 2, 7).unwrap();
        assert!((mu.mu_hat_direct(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((mu.mu_hat_direct(101) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for l in 1..300 {
            let z = mu.mu_hat_direct(l);
            assert!((mu.mu_hat_direct(-l) - z.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_direct() {
        let n = m(101);
        for r in 1..101 {
            let mu = MuMeasure::from_ratio(&n, r).unwrap();
            for l in 1..101 {
                let closed = mu.try_mu_hat_closed(l).unwrap();
                assert!((closed - mu.mu_hat_direct(l)).norm() < 1e-10);
                assert!(closed.norm() <= mu.coefficient_bound(l));
            }
            assert!(matches!(
                mu.try_mu_hat_closed(0),
                Err(Error::DegenerateFrequency { .. })
            ));
            assert_eq!(mu.mu_hat_closed(0), Complex64::new(1.0, 0.0));
            assert_eq!(mu.mu_hat_closed(202), Complex64::new(1.0, 0.0));
            assert_eq!(mu.spectrum(100).bound_violations().count(), 0);
        }
    }

    #[test]
    fn ratio_from_pair() {
        let n = m(101);
        let mu = MuMeasure::new(&n, 3, 9).unwrap();
        assert_eq!(mu.ratio(), 3);
        let inv = mod_inverse(5, &n).unwrap();
        assert_eq!(MuMeasure::new(&n, 5, 1).unwrap().ratio(), inv);
    }

    #[test]
    fn erdos_turan_first_term() {
        let n = m(499);
        for c in [1i64, 3, 100, 250] {
            let d = norm_of_residue(c as u64, 499) as f64;
            let b = erdos_turan_bound(&n, 1, c, 1).unwrap();
            assert!((b - (2.0 * 499.0 / 3.0 + 12.0 * 499.0 / d)).abs() < 1e-9);
        }
        assert!(erdos_turan_bound(&n, 1, 3, 0).is_err());
        assert!(erdos_turan_bound(&n, 1, 3, 499).is_err());
        assert!(matches!(
            erdos_turan_bound(&m(500), 1, 3, 2),
            Err(Error::CompositeModulus(500))
        ));
    }

    #[test]
    fn erdos_turan_well_spread_ratio() {
        // scan for the ratio whose first 10 multiples stay furthest from 0
        let n = m(499);
        let mm = 10u64;
        let (r, spread) = (1..499u64)
            .map(|r| {
                let s = (1..=mm).map(|l| norm_of_residue(l * r % 499, 499)).min().unwrap();
                (r, s)
            })
            .max_by_key(|&(r, s)| (s, std::cmp::Reverse(r)))
            .unwrap();
        assert_eq!((r, spread), (45, 45));
        let bound = erdos_turan_bound(&n, 1, r as i64, mm).unwrap();
        let oracle: f64 = 499.0 * 2.0 / 12.0
            + (1..=mm)
                .map(|l| 12.0 * 499.0 / (l as f64 * norm_of_residue(l * r % 499, 499) as f64))
                .sum::<f64>();
        assert!((bound - oracle).abs() < 1e-9);
        let harmonic: f64 = (1..=mm).map(|l| 1.0 / l as f64).sum();
        assert!(bound <= 2.0 * 499.0 / 12.0 + 12.0 * 499.0 * harmonic / spread as f64);
    }

    #[test]
    fn interval_coefficients() {
        use std::f64::consts::PI;
        assert_eq!(interval_fourier_coeff(0), 0.5);
        assert!((interval_fourier_coeff(1) + 1.0 / PI).abs() < 1e-15);
        assert!((interval_fourier_coeff(3) - 1.0 / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(interval_fourier_coeff(2), 0.0);
        assert_eq!(interval_fourier_coeff(-1), interval_fourier_coeff(1));
        // midpoint-rule oracle for the real and imaginary parts
        let samples = 200_000;
        for l in -9i64..=9 {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..samples {
                let x = 0.25 + 0.5 * (j as f64 + 0.5) / samples as f64;
                re += (2.0 * PI * l as f64 * x).cos();
                im += (2.0 * PI * l as f64 * x).sin();
            }
            let h = 0.5 / samples as f64;
            assert!((re * h - interval_fourier_coeff(l)).abs() < 1e-9, "l = {l}");
            assert!((im * h).abs() < 1e-9);
        }
    }

    #[test]
    fn reconstruction_near_diagonal() {
        let n = m(101);
        let mu = MuMeasure::from_ratio(&n, 1).unwrap();
        let v = estimate3_reconstruct(&mu, 100_000, Smoothing::Fejer);
        assert!((v - 101.0).abs() <= 2.0, "{v}");
    }

    #[test]
    fn raw_and_fejer_share_a_limit() {
        let n = m(101);
        let mu = MuMeasure::from_ratio(&n, 7).unwrap();
        let target = (4 * count_a(&n, 1, 7).unwrap() as i64 - 101).abs() as f64;
        let raw = estimate3_reconstruct(&mu, 1000, Smoothing::Raw);
        let fejer = estimate3_reconstruct(&mu, 1000, Smoothing::Fejer);
        assert!(raw != fejer);
        let raw_far = estimate3_reconstruct(&mu, 200_001, Smoothing::Raw);
        let fejer_far = estimate3_reconstruct(&mu, 200_001, Smoothing::Fejer);
        assert!((raw_far - fejer_far).abs() < 0.05, "{raw_far} vs {fejer_far}");
        assert!((fejer_far - target).abs() <= 2.0);
    }

    #[test]
    fn report_fields() {
        let n = m(101);
        let r = theorem1_report(&n, 1, 3, &ReportOptions::with_max_order(1000)).unwrap();
        assert_eq!((r.d, r.sigma, r.count_a), (3, 35, 16));
        assert_eq!(r.est1_main, q(101, 3));
        assert_eq!(r.est1_residual, q(35 * 3 - 101, 3));
        assert_eq!(r.est2_curve.len(), 50);
        assert!(r.et_best.bound + 4.0 >= 35.0);
        assert_eq!(r.est3.len(), 2 * 3);
        assert!((r.sigma as i64 - (4 * r.count_a as i64 - 101).abs()).abs() <= 4);
        let even = theorem1_report(&n, 1, 2, &ReportOptions::default()).unwrap();
        assert_eq!(even.est1_main, q(0, 1));
    }

    #[test]
    fn small_primes_satisfy_all_envelopes() {
        for p in [101u64, 211] {
            assert!(verify_classes(&m(p), EST1_MAX_D).unwrap().is_empty());
        }
        assert!(verify_classes(&m(100), 25).is_err());
    }
}
