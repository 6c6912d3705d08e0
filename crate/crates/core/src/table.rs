//! Whole-matrix tables of `Sigma_{a,b}` for `1 <= a, b <= n-1`.
//!
//! For prime `n` the signed correlation depends only on the class
//! `c = a^{-1} b`: multiplication by `a^{-1}` permutes `k = 1..n-1` and the
//! `k = n` term is `+1` on both sides, so `T_{a,b} = T_{1,c}` exactly. The class
//! table stores `n - 1` values; composite moduli fall back to the dense matrix.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::residue::{mod_inverse, Modulus};
use crate::sign::{xor_popcount, SignVector};

/// Worker count for table construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    #[default]
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Threads {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(Error::InvalidArgument(format!(
                "thread count must be a positive integer or `auto`, got `{s}`"
            ))),
            Ok(k) => Ok(Threads::Fixed(k)),
        }
    }
}

impl Threads {
    /// Runs `f` inside a pool of the requested size.
    pub fn install<R: Send>(self, f: impl FnOnce() -> R + Send) -> R {
        let k = match self {
            Threads::Auto => 0,
            Threads::Fixed(k) => k,
        };
        match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMode {
    Class,
    Dense,
}

impl TableMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableMode::Class => "class",
            TableMode::Dense => "dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Values {
    /// `T_{1,c}` at index `c - 1`.
    Class(Vec<i64>),
    /// `T_{a,b}` at `(a - 1) * (n - 1) + (b - 1)`.
    Dense(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTable {
    n: Modulus,
    values: Values,
}

impl SigmaTable {
    pub fn modulus(&self) -> &Modulus {
        &self.n
    }

    pub fn mode(&self) -> TableMode {
        match self.values {
            Values::Class(_) => TableMode::Class,
            Values::Dense(_) => TableMode::Dense,
        }
    }

    /// Side length of the `(n-1) x (n-1)` matrix this table describes.
    pub fn side(&self) -> usize {
        self.n.get() as usize - 1
    }

    /// Signed correlation `T_{a,b}`.
    pub fn raw(&self, a: i64, b: i64) -> Result<i64> {
        let n = &self.n;
        let ra = n.nonzero(a)? as usize;
        let rb = n.nonzero(b)? as usize;
        match &self.values {
            Values::Class(v) => {
                let c = n.mul(mod_inverse(a, n)?, rb as u64);
                Ok(v[c as usize - 1])
            }
            Values::Dense(v) => Ok(v[(ra - 1) * self.side() + rb - 1]),
        }
    }

    pub fn sigma(&self, a: i64, b: i64) -> Result<u64> {
        self.raw(a, b).map(i64::unsigned_abs)
    }

    /// `Sigma_{1,c}` for `c = 1..n-1`; class mode only.
    pub fn class_values(&self) -> Option<impl Iterator<Item = (u64, u64)> + '_> {
        match &self.values {
            Values::Class(v) => Some(
                v.iter()
                    .enumerate()
                    .map(|(i, t)| (i as u64 + 1, t.unsigned_abs())),
            ),
            Values::Dense(_) => None,
        }
    }

    /// Row-major `Sigma_{a,b}` for `a, b = 1..n-1`.
    pub fn sigma_matrix(&self) -> Vec<u64> {
        let side = self.side();
        match &self.values {
            Values::Dense(v) => v.iter().map(|t| t.unsigned_abs()).collect(),
            Values::Class(v) => {
                let mut out = Vec::with_capacity(side * side);
                for a in 1..=side as u64 {
                    let inv = mod_inverse(a as i64, &self.n).expect("prime modulus");
                    let mut c = 0u64;
                    for _ in 0..side {
                        c += inv;
                        if c >= self.n.get() {
                            c -= self.n.get();
                        }
                        out.push(v[c as usize - 1].unsigned_abs());
                    }
                }
                out
            }
        }
    }

    /// Serialized form: a `n,mode` line, then `c,sigma` (class) or
    /// `a,b,sigma` (dense) rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let n = self.n.get();
        writeln!(out, "{},{}", n, self.mode().as_str()).unwrap();
        match &self.values {
            Values::Class(v) => {
                for (i, t) in v.iter().enumerate() {
                    writeln!(out, "{},{}", i + 1, t.unsigned_abs()).unwrap();
                }
            }
            Values::Dense(v) => {
                let side = self.side();
                for (i, t) in v.iter().enumerate() {
                    writeln!(out, "{},{},{}", i / side + 1, i % side + 1, t.unsigned_abs())
                        .unwrap();
                }
            }
        }
        out
    }

    /// Reads a table written by [`SigmaTable::to_csv`]. Signs are not
    /// serialized, so the parsed table stores `Sigma` values as non-negative
    /// correlations.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let (n, mode) = header
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
        let n = Modulus::new(parse_int(n)?)?;
        let side = n.get() as usize - 1;
        let mut values = match mode.trim() {
            "class" => {
                n.require_prime()?;
                vec![None; side]
            }
            "dense" => vec![None; side * side],
            other => return Err(Error::Parse(format!("unknown table mode `{other}`"))),
        };
        let dense = mode.trim() == "dense";
        for line in lines {
            let fields: Vec<u64> = line.split(',').map(parse_int).collect::<Result<_>>()?;
            let (idx, sigma) = match (dense, fields.as_slice()) {
                (false, &[c, s]) if (1..=side as u64).contains(&c) => (c as usize - 1, s),
                (true, &[a, b, s])
                    if (1..=side as u64).contains(&a) && (1..=side as u64).contains(&b) =>
                {
                    ((a as usize - 1) * side + b as usize - 1, s)
                }
                _ => return Err(Error::Parse(format!("bad row `{line}`"))),
            };
            if sigma > n.get() {
                return Err(Error::Parse(format!("sigma {sigma} exceeds n in `{line}`")));
            }
            values[idx] = Some(sigma as i64);
        }
        let values: Vec<i64> = values
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("table has missing rows".into()))?;
        Ok(Self {
            n,
            values: if dense {
                Values::Dense(values)
            } else {
                Values::Class(values)
            },
        })
    }
}

fn parse_int(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got `{s}`")))
}

/// Class table `T_{1,c}` for prime `n`: one cached reference row and `n - 1`
/// independent rows XOR-popcounted against it.
pub fn build_class_table(n: &Modulus, threads: Threads) -> Result<SigmaTable> {
    n.require_prime()?;
    let reference = SignVector::new(1, n);
    let len = n.get() as i64;
    let values = threads.install(|| {
        (1..n.get() as i64)
            .into_par_iter()
            .map(|c| {
                let v = SignVector::new(c, n);
                len - 2 * xor_popcount(reference.words(), v.words()) as i64
            })
            .collect()
    });
    Ok(SigmaTable {
        n: *n,
        values: Values::Class(values),
    })
}

/// Dense `(n-1) x (n-1)` table, valid for every modulus.
pub fn build_dense_table(n: &Modulus, threads: Threads) -> SigmaTable {
    let side = n.get() as usize - 1;
    let len = n.get() as i64;
    let values = threads.install(|| {
        let rows: Vec<SignVector> = (1..=side as i64)
            .into_par_iter()
            .map(|a| SignVector::new(a, n))
            .collect();
        let mut values = vec![0i64; side * side];
        values
            .par_chunks_mut(side)
            .zip(rows.par_iter())
            .for_each(|(out, u)| {
                for (slot, v) in out.iter_mut().zip(&rows) {
                    *slot = len - 2 * xor_popcount(u.words(), v.words()) as i64;
                }
            });
        values
    });
    SigmaTable {
        n: *n,
        values: Values::Dense(values),
    }
}

/// Class table for prime moduli, dense otherwise.
pub fn build_table(n: &Modulus, threads: Threads) -> SigmaTable {
    if n.is_prime() {
        build_class_table(n, threads).expect("prime modulus")
    } else {
        build_dense_table(n, threads)
    }
}

/// `Sigma_{a,b}` read from a class table at `c = a^{-1} b`.
pub fn sigma_via_class(a: i64, b: i64, n: &Modulus, table: &SigmaTable) -> Result<u64> {
    n.require_prime()?;
    n.nonzero(a)?;
    n.nonzero(b)?;
    if table.mode() != TableMode::Class || table.modulus() != n {
        return Err(Error::InvalidArgument(format!(
            "expected a class table for n = {n}"
        )));
    }
    table.sigma(a, b)
}

/// Every `(a, b, sigma)` with `sigma >= tau * n`, sorted lexicographically.
pub fn threshold_pattern(table: &SigmaTable, tau: f64) -> Result<Vec<(u64, u64, u64)>> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidArgument(format!("tau must lie in (0, 1], got {tau}")));
    }
    let side = table.side();
    let cut = tau * table.modulus().get() as f64;
    Ok(table
        .sigma_matrix()
        .into_iter()
        .enumerate()
        .filter(|&(_, s)| s as f64 >= cut)
        .map(|(i, s)| ((i / side) as u64 + 1, (i % side) as u64 + 1, s))
        .collect())
}
