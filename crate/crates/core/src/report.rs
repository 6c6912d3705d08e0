//! Report serialization: JSON and CSV with a fixed field order, integers
//! written exactly and reals rounded to 12 significant digits.

use std::path::Path;

use serde::Serializer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

impl Format {
    /// Picks the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Decimal text of [`round_sig12`].
pub fn fmt_real(x: f64) -> String {
    let r = round_sig12(x);
    if r == 0.0 {
        // avoid "-0"
        "0".to_string()
    } else {
        r.to_string()
    }
}

pub fn serialize_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*x))
}

/// Anything that can be written by [`write_report`].
pub trait Report {
    fn to_json(&self) -> Result<String>;
    fn to_csv(&self) -> String;

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => Ok(self.to_csv()),
        }
    }
}

pub(crate) fn json_of<T: serde::Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidArgument(format!("report is not serializable: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_report<R: Report + ?Sized>(report: &R, format: Format, destination: &Path) -> Result<()> {
    let text = report.render(format)?;
    std::fs::write(destination, text).map_err(|source| Error::Io {
        path: destination.to_path_buf(),
        source,
    })
}

/// Writes raw bytes with the same error mapping as [`write_report`].
pub fn write_bytes(bytes: &[u8], destination: &Path) -> Result<()> {
    std::fs::write(destination, bytes).map_err(|source| Error::Io {
        path: destination.to_path_buf(),
        source,
    })
}

mod impls {
    use std::fmt::Write as _;

    use serde::Serialize;

    use super::*;
    use crate::orthopoly::SignGram;
    use crate::table::SigmaTable;
    use crate::theorem1::Theorem1Report;
    use crate::theorem2::ShiftReport;

    const T1_HEADER: &str = "n,a,b,d,sigma,est1_main,est1_residual,A,et_m,et_bound";

    fn t1_row(r: &Theorem1Report, out: &mut String) {
        let ratio = |q: &num_rational::Rational64| *q.numer() as f64 / *q.denom() as f64;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.a,
            r.b,
            r.d,
            r.sigma,
            fmt_real(ratio(&r.est1_main)),
            fmt_real(ratio(&r.est1_residual)),
            r.count_a,
            r.et_best.m,
            fmt_real(r.et_best.bound)
        )
        .unwrap();
    }

    impl Report for Theorem1Report {
        fn to_json(&self) -> Result<String> {
            json_of(self)
        }
        fn to_csv(&self) -> String {
            let mut out = format!("{T1_HEADER}\n");
            t1_row(self, &mut out);
            out
        }
    }

    impl Report for [Theorem1Report] {
        fn to_json(&self) -> Result<String> {
            json_of(self)
        }
        fn to_csv(&self) -> String {
            let mut out = format!("{T1_HEADER}\n");
            for r in self {
                t1_row(r, &mut out);
            }
            out
        }
    }

    const T2_HEADER: &str = "n,p,a,c,i,class_size,sigma_i,predicted,residual";

    fn t2_rows(r: &ShiftReport, out: &mut String) {
        for cl in &r.classes {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                r.p,
                r.a,
                r.c,
                cl.i,
                cl.class_size,
                cl.sigma_i,
                fmt_real(cl.predicted_f64()),
                fmt_real(cl.residual_f64())
            )
            .unwrap();
        }
    }

    impl Report for ShiftReport {
        fn to_json(&self) -> Result<String> {
            json_of(self)
        }
        fn to_csv(&self) -> String {
            let mut out = format!("{T2_HEADER}\n");
            t2_rows(self, &mut out);
            out
        }
    }

    impl Report for [ShiftReport] {
        fn to_json(&self) -> Result<String> {
            json_of(self)
        }
        fn to_csv(&self) -> String {
            let mut out = format!("{T2_HEADER}\n");
            for r in self {
                t2_rows(r, &mut out);
            }
            out
        }
    }

    impl Report for SigmaTable {
        fn to_json(&self) -> Result<String> {
            #[derive(Serialize)]
            struct View<'a> {
                n: u64,
                mode: &'a str,
                sigma: Vec<u64>,
            }
            let sigma = match self.class_values() {
                Some(values) => values.map(|(_, s)| s).collect(),
                None => self.sigma_matrix(),
            };
            json_of(&View {
                n: self.modulus().get(),
                mode: self.mode().as_str(),
                sigma,
            })
        }
        fn to_csv(&self) -> String {
            SigmaTable::to_csv(self)
        }
    }

    impl Report for SignGram {
        fn to_json(&self) -> Result<String> {
            #[derive(Serialize)]
            struct View<'a> {
                kind: &'a str,
                size: usize,
                #[serde(serialize_with = "rounded_matrix")]
                values: &'a [f64],
            }
            fn rounded_matrix<S: serde::Serializer>(
                v: &&[f64],
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.collect_seq(v.iter().map(|x| round_sig12(*x)))
            }
            json_of(&View {
                kind: self.kind().as_str(),
                size: self.size(),
                values: self.values(),
            })
        }
        fn to_csv(&self) -> String {
            SignGram::to_csv(self)
        }
    }
}
