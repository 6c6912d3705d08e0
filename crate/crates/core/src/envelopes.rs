//! Measured slack constants for the asymptotic statements that carry an
//! unspecified `O(.)` term. Each value was fixed by exhaustive measurement on
//! small moduli and is asserted, never tuned, afterwards.

/// `|Sigma - (n/d)[d odd]| <= EST1_SLOPE * d + EST1_OFFSET`. Each crossing of a
/// sign boundary along the line changes the sum by at most 2, and there are at
/// most `3d` crossings.
pub const EST1_SLOPE: u64 = 6;
pub const EST1_OFFSET: u64 = 4;

/// Largest class `d` on which the first estimate is checked.
pub const EST1_MAX_D: u64 = 25;

/// `|Sigma - |4A - n|| <= COUNT_A_SLACK`. Measured maximum for
/// `n in {101, 211, 499}` is 2.
pub const COUNT_A_SLACK: u64 = 4;

/// Additive slack on the Erdos-Turan bound.
pub const ERDOS_TURAN_SLACK: f64 = 4.0;

/// Truncation range `1..=ERDOS_TURAN_MAX_M` searched for the best bound.
pub const ERDOS_TURAN_MAX_M: u64 = 50;

/// Fejer-smoothed reconstruction vs `|4A - n|`.
pub const EST3_TOLERANCE: f64 = 2.0;

/// Per-class residual `|Sigma_i - predicted_i| <= CLASS_RESIDUAL` for the
/// composite shift sums. Largest value on the verification grid: 24/13.
pub const CLASS_RESIDUAL: f64 = 2.0;

/// `||S| - n/p^2| <= SHIFT_ENVELOPE * p`. Largest ratio on the verification
/// grid: 48/49.
pub const SHIFT_ENVELOPE: f64 = 1.0;
