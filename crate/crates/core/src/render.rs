//! Binary PGM (`P5`) rendering of Sigma tables and sign-Gram matrices.

use crate::error::{Error, Result};
use crate::orthopoly::SignGram;
use crate::table::SigmaTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Binary,
    Grayscale,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" => Ok(RenderMode::Binary),
            "grayscale" | "greyscale" => Ok(RenderMode::Grayscale),
            _ => Err(Error::InvalidArgument(format!("unknown render mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    /// Binary threshold as a fraction of the ceiling.
    pub tau: f64,
    pub gamma: f64,
    pub mode: RenderMode,
    /// Large entries dark.
    pub invert: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            tau: 0.05,
            gamma: 1.0,
            mode: RenderMode::Grayscale,
            invert: true,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidArgument(format!("tau must lie in (0, 1], got {}", self.tau)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    fn pixel(&self, v: f64, ceiling: f64) -> u8 {
        let level = match self.mode {
            RenderMode::Binary => {
                if v >= self.tau * ceiling {
                    255
                } else {
                    0
                }
            }
            RenderMode::Grayscale => {
                // f64::round is half-away-from-zero
                (255.0 * (v / ceiling).powf(self.gamma).min(1.0)).round() as u8
            }
        };
        if self.invert {
            255 - level
        } else {
            level
        }
    }
}

/// A non-negative matrix with a known maximum entry.
pub trait Heatmap {
    fn dimensions(&self) -> (usize, usize);
    /// Row-major entries.
    fn entries(&self) -> Vec<f64>;
    fn ceiling(&self) -> f64;
}

impl Heatmap for SigmaTable {
    fn dimensions(&self) -> (usize, usize) {
        (self.side(), self.side())
    }
    fn entries(&self) -> Vec<f64> {
        self.sigma_matrix().into_iter().map(|s| s as f64).collect()
    }
    fn ceiling(&self) -> f64 {
        self.modulus().get() as f64
    }
}

impl Heatmap for SignGram {
    fn dimensions(&self) -> (usize, usize) {
        (self.size(), self.size())
    }
    fn entries(&self) -> Vec<f64> {
        self.values().to_vec()
    }
    fn ceiling(&self) -> f64 {
        self.kind().ceiling()
    }
}

pub fn render_pgm<H: Heatmap + ?Sized>(table: &H, spec: &RenderSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    let (width, height) = table.dimensions();
    if width == 0 || height == 0 {
        return Err(Error::EmptyTable);
    }
    let ceiling = table.ceiling();
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(table.entries().into_iter().map(|v| spec.pixel(v, ceiling)));
    Ok(out)
}
