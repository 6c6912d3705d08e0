//! Composite moduli: sums `S = sum_j s_{aj} s_{bj}` with `b = a + c n/p` for a
//! prime divisor `p | n`.
//!
//! Splitting `j = 1..n` by the residue `i = c j mod p` turns the second factor
//! into the first shifted by `i/p` of a turn. Within a class the points
//! `a j / n mod 1` are equispaced with gap `p/n`, so each class sum is the
//! signed arc measure `1 - 4i/p` (or `4i/p - 3`) times `n/p`, up to `O(1)`.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::envelopes::{CLASS_RESIDUAL, SHIFT_ENVELOPE};
use crate::error::{Error, Result};
use crate::partition::BreakpointPartition;
use crate::residue::{gcd, is_prime, prime_divisors, Modulus};
use crate::sign::{residue_is_negative, sigma_exact, SigmaRecord};
use crate::theorem1::turn_cos_sign;

fn as_f64(q: &Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn serialize_ratio<S: Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::report::serialize_real(&as_f64(q), s)
}

fn serialize_opt_ratio<S: Serializer>(
    q: &Option<Rational64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_ratio(q, s),
        None => s.serialize_none(),
    }
}

/// A validated `(n, p, a, c)` with the derived frequency `b = a + c n/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftQuery {
    n: Modulus,
    p: u64,
    a: u64,
    c: i64,
    b: u64,
}

impl ShiftQuery {
    pub fn new(n: &Modulus, p: u64, a: i64, c: i64) -> Result<Self> {
        let size = n.get();
        let fail = |why: String| Err(Error::InvalidQuery(why));
        if n.is_prime() {
            return fail(format!("n = {size} must be composite"));
        }
        if p < 2 || !is_prime(p)? {
            return fail(format!("p = {p} is not prime"));
        }
        if size % p != 0 {
            return fail(format!("p = {p} does not divide n = {size}"));
        }
        let ra = n.reduce(a);
        if gcd(ra, size) != 1 {
            return fail(format!("gcd(a = {a}, n = {size}) != 1"));
        }
        if c == 0 || c.unsigned_abs() > p - 1 {
            return fail(format!("c = {c} must satisfy 0 < |c| <= p - 1 = {}", p - 1));
        }
        let b = n.reduce(ra as i64 + c * (size / p) as i64);
        Ok(Self { n: *n, p, a: ra, c, b })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn b(&self) -> u64 {
        self.b
    }

    /// `n / p^2`.
    pub fn main_term(&self) -> Rational64 {
        Rational64::new(self.n.get() as i64, (self.p * self.p) as i64)
    }

    fn class_of(&self, j: u64) -> u64 {
        (self.c.rem_euclid(self.p as i64) as u64 * (j % self.p)) % self.p
    }
}

/// `S` for the query.
pub fn sigma_shift(q: &ShiftQuery) -> SigmaRecord {
    sigma_exact(q.a as i64, q.b as i64, &q.n)
}

/// `S_i = {j in 1..=n : c j = i mod p}` for `i = 0..p`.
pub fn class_partition(n: &Modulus, p: u64, c: i64) -> Result<Vec<Vec<u64>>> {
    if p < 2 || n.get() % p != 0 {
        return Err(Error::InvalidArgument(format!("p = {p} must divide n = {n}")));
    }
    let cr = c.rem_euclid(p as i64) as u64;
    if gcd(cr, p) != 1 {
        return Err(Error::InvalidArgument(format!("c = {c} is not a unit mod {p}")));
    }
    let mut classes = vec![Vec::with_capacity((n.get() / p) as usize); p as usize];
    for j in 1..=n.get() {
        classes[(cr * (j % p) % p) as usize].push(j);
    }
    Ok(classes)
}

/// Claim prediction `(1 - 4i/p) n/p` for `2i <= p`, `(4i/p - 3) n/p` otherwise.
pub fn predicted_class_sum(n: u64, p: u64, i: u64) -> Rational64 {
    let (n, p, i) = (n as i64, p as i64, i as i64);
    let numer = if 2 * i <= p { p - 4 * i } else { 4 * i - 3 * p };
    Rational64::new(numer * n, p * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueClassReport {
    pub i: u64,
    pub class_size: u64,
    pub sigma_i: i64,
    #[serde(serialize_with = "serialize_ratio")]
    pub predicted: Rational64,
    #[serde(serialize_with = "serialize_ratio")]
    pub residual: Rational64,
}

impl ResidueClassReport {
    pub fn predicted_f64(&self) -> f64 {
        as_f64(&self.predicted)
    }
    pub fn residual_f64(&self) -> f64 {
        as_f64(&self.residual)
    }
}

fn check_class(q: &ShiftQuery, i: u64) -> Result<()> {
    if q.p == 2 {
        return Err(Error::EvenPrimeUnsupported);
    }
    if i >= q.p {
        return Err(Error::InvalidArgument(format!("residue {i} >= p = {}", q.p)));
    }
    Ok(())
}

/// `Sigma_i = sum_{j in S_i} sign(cos(2 pi a j/n)) sign(cos(2 pi a j/n + 2 pi i/p))`.
pub fn class_sum(q: &ShiftQuery, i: u64) -> Result<ResidueClassReport> {
    check_class(q, i)?;
    let n = q.n.get();
    let shift = i * (n / q.p);
    let mut size = 0u64;
    let mut sum = 0i64;
    for j in (1..=n).filter(|&j| q.class_of(j) == i) {
        let x = q.n.mul(q.a, j);
        let y = (x + shift) % n;
        size += 1;
        sum += if residue_is_negative(x, n) == residue_is_negative(y, n) {
            1
        } else {
            -1
        };
    }
    let predicted = predicted_class_sum(n, q.p, i);
    Ok(ResidueClassReport {
        i,
        class_size: size,
        sigma_i: sum,
        predicted,
        residual: Rational64::from_integer(sum) - predicted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquispacedReport {
    pub size: u64,
    /// Every consecutive gap (numerator over `n`) equals `p`.
    pub equispaced: bool,
    /// Smallest and largest gap numerators observed.
    pub gap_range: (u64, u64),
    /// `d_i = min S_i`, in `1..=p`.
    pub d: u64,
    /// Numerator of the offset `a d_i / n mod 1`.
    pub offset: u64,
}

/// Checks that `M_i = {a j / n mod 1 : j in S_i}` is an arithmetic
/// progression on the torus with gap exactly `p/n`.
pub fn equispaced_check(q: &ShiftQuery, i: u64) -> Result<EquispacedReport> {
    check_class(q, i)?;
    let n = q.n.get();
    let members: Vec<u64> = (1..=n).filter(|&j| q.class_of(j) == i).collect();
    let d = members[0];
    let mut points: Vec<u64> = members.iter().map(|&j| q.n.mul(q.a, j)).collect();
    points.sort_unstable();
    let gaps = points
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(points[0] + n - points[points.len() - 1]));
    let (lo, hi) = gaps.fold((u64::MAX, 0), |(lo, hi), g| (lo.min(g), hi.max(g)));
    Ok(EquispacedReport {
        size: members.len() as u64,
        equispaced: lo == q.p && hi == q.p,
        gap_range: (lo, hi),
        d,
        offset: q.n.mul(q.a, d),
    })
}

/// The open arcs of the circle (in turns) on which `cos(2 pi x)` and
/// `cos(2 pi (x + i/p))` have the same sign, with the induced partition of
/// `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SameSignArcs {
    pub arcs: Vec<(Rational64, Rational64)>,
    pub partition: BreakpointPartition<Rational64>,
}

impl SameSignArcs {
    /// Total length of the same-sign arcs.
    pub fn same_sign_length(&self) -> Rational64 {
        self.partition.positive_measure()
    }

    /// Same-sign length minus opposite-sign length; the per-point average of
    /// the sign product, `1 - 4i/p` or `4i/p - 3`.
    pub fn signed_measure(&self) -> Rational64 {
        self.partition.signed_measure()
    }
}

pub fn same_sign_intervals(i: u64, p: u64) -> Result<SameSignArcs> {
    if p == 0 || i >= p {
        return Err(Error::InvalidArgument(format!("need 0 <= i < p, got i = {i}, p = {p}")));
    }
    let q = |a: i64, b: i64| Rational64::new(a, b);
    let s = q(i as i64, p as i64);
    let zero = q(0, 1);
    let one = q(1, 1);
    let arcs = if i == 0 {
        vec![(zero, one)]
    } else if s <= q(1, 2) {
        vec![(q(-1, 4), q(1, 4) - s), (q(1, 4), q(3, 4) - s)]
    } else {
        vec![(q(3, 4) - s, q(1, 4)), (q(5, 4) - s, q(3, 4))]
    };
    let wrap = |x: Rational64| x - x.floor();
    let inside = |x: Rational64| {
        arcs.iter().any(|&(lo, hi)| {
            let len = hi - lo;
            let off = wrap(x - lo);
            len >= one || (off > zero && off < len)
        })
    };
    let points = arcs.iter().flat_map(|&(lo, hi)| [wrap(lo), wrap(hi)]);
    let partition =
        BreakpointPartition::from_points(zero, one, points, |x| if inside(x) { 1 } else { -1 })?;
    Ok(SameSignArcs { arcs, partition })
}

/// Direct midpoint evaluation of the sign product on a partition; the oracle
/// for [`same_sign_intervals`].
pub fn sign_product_at(x: Rational64, i: u64, p: u64) -> i8 {
    turn_cos_sign(x) * turn_cos_sign(x + Rational64::new(i as i64, p as i64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub n: u64,
    pub p: u64,
    pub a: u64,
    pub c: i64,
    #[serde(rename = "S")]
    pub s: i64,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub main_term: Option<Rational64>,
    /// `|S| - n/p^2`.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub residual: Option<Rational64>,
    pub classes: Vec<ResidueClassReport>,
}

/// Full per-class breakdown. For `p = 2` only `S` is reported.
pub fn shift_report(q: &ShiftQuery) -> Result<ShiftReport> {
    let s = sigma_shift(q).t;
    let (main_term, residual, classes) = if q.p == 2 {
        (None, None, Vec::new())
    } else {
        let main = q.main_term();
        let classes = (0..q.p).map(|i| class_sum(q, i)).collect::<Result<Vec<_>>>()?;
        (
            Some(main),
            Some(Rational64::from_integer(s.abs()) - main),
            classes,
        )
    };
    Ok(ShiftReport {
        n: q.n.get(),
        p: q.p,
        a: q.a,
        c: q.c,
        s,
        main_term,
        residual,
        classes,
    })
}

/// Outcome of checking one query against the pinned constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCheck {
    pub query: ShiftQuery,
    pub partition_exact: bool,
    pub equispaced: bool,
    pub max_class_residual: f64,
    /// `||S| - n/p^2| / p`.
    pub envelope_ratio: f64,
}

impl ShiftCheck {
    pub fn passes(&self) -> bool {
        self.partition_exact
            && self.equispaced
            && self.max_class_residual <= CLASS_RESIDUAL
            && self.envelope_ratio <= SHIFT_ENVELOPE
    }
}

pub fn check_query(q: &ShiftQuery) -> Result<ShiftCheck> {
    if q.p == 2 {
        return Err(Error::EvenPrimeUnsupported);
    }
    let report = shift_report(q)?;
    let total: i64 = report.classes.iter().map(|c| c.sigma_i).sum();
    let equispaced = (0..q.p)
        .map(|i| equispaced_check(q, i).map(|r| r.equispaced && r.size == q.n.get() / q.p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    let max_class_residual = report
        .classes
        .iter()
        .map(|c| c.residual_f64().abs())
        .fold(0.0, f64::max);
    Ok(ShiftCheck {
        query: *q,
        partition_exact: total == report.s,
        equispaced,
        max_class_residual,
        envelope_ratio: report.residual.map(|r| as_f64(&r).abs()).unwrap_or(0.0) / q.p as f64,
    })
}

/// Moduli of the fixed verification grid.
pub const GRID_MODULI: [u64; 4] = [105, 300, 500, 1001];

/// Eight units of `n`, evenly spread through the sorted unit group.
pub fn sample_units(n: u64, count: usize) -> Vec<u64> {
    let units: Vec<u64> = (1..n).filter(|&a| gcd(a, n) == 1).collect();
    let count = count.min(units.len());
    (0..count).map(|k| units[k * units.len() / count]).collect()
}

/// Every query of the grid: odd prime `p | n`, 8 units `a`, all admissible `c`.
pub fn grid_queries(moduli: &[u64]) -> Result<Vec<ShiftQuery>> {
    let mut out = Vec::new();
    for &size in moduli {
        let n = Modulus::new(size)?;
        for p in prime_divisors(size).into_iter().filter(|&p| p > 2) {
            for a in sample_units(size, 8) {
                for c in (1 - p as i64..p as i64).filter(|&c| c != 0) {
                    out.push(ShiftQuery::new(&n, p, a as i64, c)?);
                }
            }
        }
    }
    Ok(out)
}

pub fn check_grid(queries: &[ShiftQuery]) -> Result<Vec<ShiftCheck>> {
    queries.par_iter().map(check_query).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn query_validation() {
        let n = m(300);
        let ok = ShiftQuery::new(&n, 5, 7, 2).unwrap();
        assert_eq!(ok.b(), 7 + 120);
        assert_eq!(ShiftQuery::new(&n, 5, 7, -2).unwrap().b(), 300 + 7 - 120);
        for (nn, p, a, c) in [
            (101u64, 101u64, 1i64, 1i64),
            (300, 4, 1, 1),
            (300, 7, 1, 1),
            (300, 5, 10, 1),
            (300, 5, 7, 0),
            (300, 5, 7, 5),
            (300, 5, 7, -5),
        ] {
            assert!(
                matches!(ShiftQuery::new(&m(nn), p, a, c), Err(Error::InvalidQuery(_))),
                "{nn} {p} {a} {c}"
            );
        }
    }

    #[test]
    fn shift_sums_are_pinned() {
        // frozen from the floating-point brute force in tests/oracles.rs
        let s = sigma_shift(&ShiftQuery::new(&m(300), 5, 1, 1).unwrap());
        assert_eq!(s.t, S_300_5_1_1);
        let s = sigma_shift(&ShiftQuery::new(&m(105), 5, 2, 3).unwrap());
        assert_eq!(s.t, S_105_5_2_3);
        let s = sigma_shift(&ShiftQuery::new(&m(300), 3, 7, 2).unwrap());
        assert_eq!(s.t, S_300_3_7_2);
    }

    const S_300_5_1_1: i64 = 12;
    const S_105_5_2_3: i64 = 5;
    const S_300_3_7_2: i64 = 32;

    #[test]
    fn partition_shape() {
        let n = m(300);
        for (p, c) in [(5u64, 1i64), (5, 3), (3, -1), (2, 1)] {
            let classes = class_partition(&n, p, c).unwrap();
            assert_eq!(classes.len() as u64, p);
            let mut all: Vec<u64> = classes.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (1..=300).collect::<Vec<_>>());
            for class in &classes {
                assert_eq!(class.len() as u64, 300 / p);
                assert!(class.windows(2).all(|w| w[1] - w[0] == p));
            }
        }
        let c1 = class_partition(&n, 5, 1).unwrap();
        assert!(c1[2].iter().all(|j| j % 5 == 2));
        assert!(class_partition(&n, 7, 1).is_err());
        assert!(class_partition(&n, 5, 10).is_err());
    }

    #[test]
    fn zero_class_is_exact() {
        for (nn, p, a) in [(105u64, 5u64, 2i64), (1001, 7, 3), (300, 5, 7)] {
            let query = ShiftQuery::new(&m(nn), p, a, 1).unwrap();
            let r = class_sum(&query, 0).unwrap();
            assert_eq!(r.sigma_i, (nn / p) as i64);
            assert_eq!(r.class_size, nn / p);
        }
    }

    #[test]
    fn class_example() {
        let query = ShiftQuery::new(&m(105), 5, 1, 1).unwrap();
        let r = class_sum(&query, 1).unwrap();
        assert_eq!(r.predicted, q(21, 5));
        assert_eq!(r.sigma_i, SIGMA_105_5_1_1_CLASS1);
        assert!(r.residual_f64().abs() <= CLASS_RESIDUAL);
        assert!(matches!(class_sum(&query, 5), Err(Error::InvalidArgument(_))));
        let even = ShiftQuery::new(&m(300), 2, 1, 1).unwrap();
        assert!(matches!(class_sum(&even, 0), Err(Error::EvenPrimeUnsupported)));
        let report = shift_report(&even).unwrap();
        assert!(report.classes.is_empty() && report.main_term.is_none());
    }

    const SIGMA_105_5_1_1_CLASS1: i64 = 3;

    #[test]
    fn predictions_are_symmetric() {
        for p in [3u64, 5, 7, 11, 13] {
            for i in 1..p {
                assert_eq!(predicted_class_sum(1001, p, i), predicted_class_sum(1001, p, p - i));
            }
            let total: Rational64 = (0..p).map(|i| predicted_class_sum(1001, p, i)).sum();
            assert_eq!(total, q(1001, (p * p) as i64));
        }
    }

    #[test]
    fn equispaced_examples() {
        let query = ShiftQuery::new(&m(300), 5, 7, 1).unwrap();
        for i in 0..5 {
            let r = equispaced_check(&query, i).unwrap();
            assert!(r.equispaced);
            assert_eq!(r.size, 60);
            assert!((1..=5).contains(&r.d));
        }
        let unit = ShiftQuery::new(&m(300), 5, 1, 1).unwrap();
        let r = equispaced_check(&unit, 0).unwrap();
        assert_eq!((r.d, r.offset), (5, 5));
    }

    #[test]
    fn arc_lengths() {
        let full = same_sign_intervals(0, 7).unwrap();
        assert_eq!(full.same_sign_length(), q(1, 1));
        assert_eq!(full.signed_measure(), q(1, 1));
        for p in [3u64, 5, 7, 11, 13] {
            for i in 0..p {
                let arcs = same_sign_intervals(i, p).unwrap();
                assert_eq!(arcs.signed_measure(), predicted_class_sum(p, p, i));
                let s = q(i as i64, p as i64);
                let expect = if s <= q(1, 2) { q(1, 1) - s * 2 } else { s * 2 - 1 };
                assert_eq!(arcs.same_sign_length(), expect);
                if i > 0 {
                    assert_eq!(
                        arcs.same_sign_length(),
                        same_sign_intervals(p - i, p).unwrap().same_sign_length()
                    );
                }
                // oracle: direct sign evaluation at every piece midpoint
                for (lo, hi, sign) in arcs.partition.pieces() {
                    assert_eq!(sign, sign_product_at((lo + hi) / 2, i, p));
                }
            }
        }
        let half = same_sign_intervals(2, 4).unwrap();
        assert_eq!(half.same_sign_length(), q(0, 1));
        assert_eq!(half.signed_measure(), q(-1, 1));
        assert!(same_sign_intervals(5, 5).is_err());
    }

    #[test]
    fn grid_shape() {
        let queries = grid_queries(&GRID_MODULI).unwrap();
        // 105: p = 3,5,7; 300: 3,5; 500: 5; 1001: 7,11,13; each 8 units, 2(p-1) shifts
        let expected: u64 = [3u64, 5, 7, 3, 5, 5, 7, 11, 13].iter().map(|p| 8 * 2 * (p - 1)).sum();
        assert_eq!(queries.len() as u64, expected);
        assert_eq!(sample_units(105, 8).len(), 8);
    }
}
