//! Sign-correlation sums of the rounded discrete cosine basis.
//!
//! The matrix `A = (sign(cos(2 pi i j / n)))` has Gram entries
//! `Sigma_{a,b} = |sum_k s_{ak} s_{bk}|`. This crate computes them exactly
//! (integer sign decisions, bit-packed correlations), generates whole
//! tables, checks the prime-modulus estimates and the composite shift
//! formula against measured envelopes, and computes the analogous sign-Gram
//! matrices of Legendre and Chebyshev polynomials.
//!
//! - [`residue`]: modular arithmetic over `Z/nZ`
//! - [`sign`]: sign rows and their correlation
//! - [`table`]: full `Sigma` tables with the prime class reduction
//! - [`theorem1`]: main term, count `A`, Fourier data, Erdos-Turan bound
//! - [`theorem2`]: shifts by multiples of `n/p` for composite `n`
//! - [`orthopoly`]: Legendre/Chebyshev sign-Gram matrices
//! - [`render`], [`report`]: PGM output and JSON/CSV reports

pub mod envelopes;
pub mod error;
pub mod orthopoly;
pub mod partition;
pub mod render;
pub mod report;
pub mod residue;
pub mod sign;
pub mod table;
pub mod theorem1;
pub mod theorem2;

pub use error::{Error, Result};
pub use orthopoly::{GramKind, SignGram};
pub use partition::BreakpointPartition;
pub use render::{render_pgm, RenderMode, RenderSpec};
pub use report::{write_report, Format, Report};
pub use residue::{is_prime, mod_inverse, toroidal_norm, Modulus};
pub use sign::{correlation, cos_sign_exact, negative_set, sigma_exact, SigmaRecord, SignVector};
pub use table::{SigmaTable, TableMode, Threads};
pub use theorem1::{MuMeasure, Smoothing, Theorem1Report};
pub use theorem2::{ResidueClassReport, ShiftQuery, ShiftReport};
