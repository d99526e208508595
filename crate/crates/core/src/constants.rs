//! Exact constants and the integer radius arithmetic derived from them.

use num_rational::Ratio;

/// Farness margin `δ₀ = 1/400`.
pub const DELTA0_NUM: u64 = 1;
pub const DELTA0_DEN: u64 = 400;

/// Smallest `n` for which random codeword paths are guaranteed to exist.
pub const PATH_MIN_N: u32 = 9;

pub fn delta0() -> Ratio<u64> {
    Ratio::new(DELTA0_NUM, DELTA0_DEN)
}

/// Largest Hamming distance that is `1/4`-close on `2^n` positions.
pub fn close_radius(n: u32) -> u32 {
    ((1u64 << n) / 4) as u32
}

/// Largest Hamming distance that is `(1/4 + δ₀/2)`-close on `2^n` positions:
/// `⌊(201/800)·2^n⌋`.
pub fn wide_radius(n: u32) -> u32 {
    ((201u64 << n) / 800) as u32
}

/// Whether `distance` positions out of `2^n` is strictly more than `1/4 + δ₀`.
pub fn is_far_beyond_margin(distance: u32, n: u32) -> bool {
    // distance / 2^n > 101/400
    400 * distance as u64 > 101u64 << n
}

/// Constants of the full construction with the constant-alphabet inner tester. They are
/// reported alongside desk-scale results but are not reproduced by this crate, whose
/// reference tester has a non-constant alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoreticalConstants {
    /// Inner tester alphabet size.
    pub inner_alphabet: u64,
    /// Inner tester rejection rate.
    pub rejection_rate: Ratio<u128>,
    /// Soundness factor of the 4-ary composition, `δ₀²ρ²/64`.
    pub kappa_composed: Ratio<u128>,
    /// Soundness factor after arity reduction, `κ̃/4`.
    pub kappa: Ratio<u128>,
    /// Final alphabet size, `(W̃₀(W̃₀+1)/2)^4`.
    pub final_alphabet: u64,
}

pub fn theoretical() -> TheoreticalConstants {
    let inner_alphabet = 8u64;
    let rho = Ratio::new(1u128, 10_000);
    let delta = Ratio::new(DELTA0_NUM as u128, DELTA0_DEN as u128);
    let kappa_composed = delta * delta * rho * rho / Ratio::from_integer(64);
    let kappa = kappa_composed / Ratio::from_integer(4);
    let pairs = inner_alphabet * (inner_alphabet + 1) / 2;
    TheoreticalConstants {
        inner_alphabet,
        rejection_rate: rho,
        kappa_composed,
        kappa,
        final_alphabet: pairs.pow(4),
    }
}
