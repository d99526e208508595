//! Hadamard codewords and reconfiguration between them.
//!
//! Position `x` of a length-`2^n` function stands for the vector of F₂ⁿ whose `j`-th
//! coordinate is bit `j` of `x`, so `Had(α)(x)` is the parity of `α & x`.
//!
//! The central object is a [`CodewordPath`]: starting from `Had(α)`, flip every position
//! of the disagreement set `D(α, β)` once, in some order, ending at `Had(β)`. Every
//! intermediate function stays within `2^{n-2}` positions of one endpoint. When the order
//! is a uniformly random permutation and `n ≥ 9`, it is also, with overwhelming
//! probability, more than `(1/4 + δ₀)·2^n` positions away from every other codeword;
//! [`verify_codeword_path`] checks this exhaustively.

use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::constants;
use crate::error::{Error, Result};
use crate::seeds;

/// Largest `n` accepted by the exhaustive routines in this module.
pub const MAX_N: u32 = 16;

/// A function F₂ⁿ → F₂ stored as a packed bit vector of length `2^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitFunction {
    n: u32,
    words: Vec<u64>,
}

impl fmt::Debug for BitFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitFunction(n={}, {})", self.n, self.to_hex())
    }
}

fn check_n(n: u32) -> Result<()> {
    if n > MAX_N {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the supported maximum {MAX_N}"
        )));
    }
    Ok(())
}

impl BitFunction {
    pub fn zeros(n: u32) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << n;
        Ok(Self {
            n,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, bit: bool) {
        if self.get(x) != bit {
            self.flip(x);
        }
    }

    #[inline]
    pub fn flip(&mut self, x: usize) {
        self.words[x >> 6] ^= 1 << (x & 63);
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn tail_mask(&self) -> u64 {
        let len = self.len();
        if len.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (len % 64)) - 1
        }
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let mask = self.tail_mask();
        if let Some(last) = words.last_mut() {
            *last &= mask;
        }
        Self { n: self.n, words }
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(Self {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    fn same_len(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Number of positions on which the two functions differ.
    pub fn hamming(&self, other: &Self) -> Result<u32> {
        self.same_len(other)?;
        Ok(hamming_words(&self.words, &other.words))
    }

    /// Low `2^n` bits as an integer; only for `n ≤ 6`.
    pub fn to_u64(&self) -> u64 {
        debug_assert!(self.n <= 6);
        self.words[0]
    }

    pub fn from_u64(n: u32, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::InvalidArgument(format!(
                "n = {n} does not fit in a word"
            )));
        }
        let mut f = Self::zeros(n)?;
        f.words[0] = bits & f.tail_mask();
        Ok(f)
    }

    /// Hex encoding: byte `i` holds positions `8i..8i+8`, least significant bit first.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len().div_ceil(8);
        let mut s = String::with_capacity(nbytes * 2);
        for i in 0..nbytes {
            let byte = (self.words[i / 8] >> ((i % 8) * 8)) as u8;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        let nbytes = f.len().div_ceil(8);
        if hex.len() != nbytes * 2 || !hex.is_ascii() {
            return Err(Error::InvalidArgument(format!(
                "expected {} hex digits for n = {n}, got {}",
                nbytes * 2,
                hex.len()
            )));
        }
        for i in 0..nbytes {
            let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::InvalidArgument(format!("invalid hex digits at byte {i}")))?;
            f.words[i / 8] |= (byte as u64) << ((i % 8) * 8);
        }
        if f.words.last().copied().unwrap_or(0) & !f.tail_mask() != 0 {
            return Err(Error::InvalidArgument(
                "hex string sets bits beyond the function length".into(),
            ));
        }
        Ok(f)
    }
}

#[inline]
pub(crate) fn hamming_words(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// `Had(α)(x) = ⟨α, x⟩`.
#[inline]
pub fn inner(alpha: u64, x: u64) -> bool {
    (alpha & x).count_ones() & 1 == 1
}

pub fn had_encode(alpha: u64, n: u32) -> Result<BitFunction> {
    check_n(n)?;
    if alpha >> n != 0 {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} out of range for n = {n}"
        )));
    }
    let mut f = BitFunction::zeros(n)?;
    for x in 0..f.len() {
        if inner(alpha, x as u64) {
            f.flip(x);
        }
    }
    Ok(f)
}

/// All `2^n` codewords, indexed by message.
pub struct Codebook {
    n: u32,
    words: Vec<BitFunction>,
}

impl Codebook {
    /// Shared codebook for `n ≤ 12`, built on first use.
    pub fn get(n: u32) -> &'static Codebook {
        const CACHED: usize = 13;
        static BOOKS: [OnceLock<Codebook>; CACHED] = [const { OnceLock::new() }; CACHED];
        assert!((n as usize) < CACHED, "codebook cache covers n < {CACHED}");
        BOOKS[n as usize].get_or_init(|| Codebook {
            n,
            words: (0..1u64 << n).map(|a| had_encode(a, n).unwrap()).collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn codeword(&self, alpha: u64) -> &BitFunction {
        &self.words[alpha as usize]
    }

    /// Hamming distance from `f` to every codeword.
    pub fn distances(&self, f: &BitFunction) -> Result<Vec<u32>> {
        if f.n != self.n {
            return Err(Error::LengthMismatch {
                left: f.len(),
                right: 1 << self.n,
            });
        }
        Ok(self
            .words
            .iter()
            .map(|c| hamming_words(&c.words, &f.words))
            .collect())
    }
}

pub fn rel_distance(f: &BitFunction, g: &BitFunction) -> Result<Ratio<u64>> {
    Ok(Ratio::new(f.hamming(g)? as u64, f.len() as u64))
}

/// `D(α, β) = {x : ⟨α, x⟩ ≠ ⟨β, x⟩}` in ascending order.
pub fn disagreement_set(alpha: u64, beta: u64, n: u32) -> Result<Vec<usize>> {
    check_pair(alpha, beta, n)?;
    let diff = alpha ^ beta;
    Ok((0..1usize << n)
        .filter(|&x| inner(diff, x as u64))
        .collect())
}

fn check_pair(alpha: u64, beta: u64, n: u32) -> Result<()> {
    check_n(n)?;
    if alpha >> n != 0 || beta >> n != 0 {
        return Err(Error::InvalidArgument(format!(
            "message out of range for n = {n}"
        )));
    }
    if alpha == beta {
        return Err(Error::InvalidArgument("alpha and beta must differ".into()));
    }
    Ok(())
}

/// The four agreement classes of a triple of distinct messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    /// `⟨α,x⟩ ≠ ⟨β,x⟩ = ⟨γ,x⟩`
    pub p_alpha: Vec<usize>,
    /// `⟨β,x⟩ ≠ ⟨γ,x⟩ = ⟨α,x⟩`
    pub p_beta: Vec<usize>,
    /// `⟨γ,x⟩ ≠ ⟨α,x⟩ = ⟨β,x⟩`
    pub p_gamma: Vec<usize>,
    /// all three agree
    pub p_equal: Vec<usize>,
}

impl PartitionReport {
    pub fn sizes(&self) -> [usize; 4] {
        [
            self.p_alpha.len(),
            self.p_beta.len(),
            self.p_gamma.len(),
            self.p_equal.len(),
        ]
    }
}

pub fn partition_triple(alpha: u64, beta: u64, gamma: u64, n: u32) -> Result<PartitionReport> {
    check_pair(alpha, beta, n)?;
    check_pair(beta, gamma, n)?;
    check_pair(alpha, gamma, n)?;
    let mut r = PartitionReport {
        p_alpha: Vec::new(),
        p_beta: Vec::new(),
        p_gamma: Vec::new(),
        p_equal: Vec::new(),
    };
    for x in 0..1usize << n {
        let (a, b, c) = (
            inner(alpha, x as u64),
            inner(beta, x as u64),
            inner(gamma, x as u64),
        );
        // one of the three always agrees with the other two's common value
        let class = if a == b && b == c {
            &mut r.p_equal
        } else if b == c {
            &mut r.p_alpha
        } else if a == c {
            &mut r.p_beta
        } else {
            &mut r.p_gamma
        };
        class.push(x);
    }
    Ok(r)
}

/// A walk from `Had(alpha)` to `Had(beta)` flipping one position per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordPath {
    pub n: u32,
    pub alpha: u64,
    pub beta: u64,
    /// Flipped positions, in order. A well-formed path uses each position of `D` once.
    pub flips: Vec<usize>,
}

impl CodewordPath {
    /// Number of functions on the path (flips + 1).
    pub fn len(&self) -> usize {
        self.flips.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Result<BitFunction> {
        had_encode(self.alpha, self.n)
    }

    /// The `t`-th function on the path (`t = 0` is `Had(α)`).
    pub fn step(&self, t: usize) -> Result<BitFunction> {
        let mut f = self.start()?;
        for &x in &self.flips[..t] {
            f.flip(x);
        }
        Ok(f)
    }

    pub fn steps(&self) -> Result<Vec<BitFunction>> {
        let mut f = self.start()?;
        let mut out = Vec::with_capacity(self.len());
        out.push(f.clone());
        for &x in &self.flips {
            f.flip(x);
            out.push(f.clone());
        }
        Ok(out)
    }
}

/// One row of a path's distance profile. Distances are Hamming counts out of `2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub step: usize,
    pub dist_alpha: u32,
    pub dist_beta: u32,
    /// Minimum over `γ ∉ {α, β}`; `u32::MAX` when `n = 1` (no third codeword).
    pub min_dist_other: u32,
    pub argmin_other: u64,
}

/// Distance profile of a path. Tracks the distance to every codeword incrementally: a
/// flip at `x` moves the distance to `Had(γ)` by `+1` if the current bit already equals
/// `Had(γ)(x)` and by `-1` otherwise.
pub fn distance_profile(path: &CodewordPath) -> Result<Vec<ProfileRow>> {
    check_pair(path.alpha, path.beta, path.n)?;
    let n = path.n;
    let count = 1u64 << n;
    let mut f = path.start()?;
    let mut dist: Vec<u32> = if n < 13 {
        Codebook::get(n).distances(&f)?
    } else {
        (0..count)
            .map(|g| had_encode(g, n).and_then(|c| c.hamming(&f)))
            .collect::<Result<_>>()?
    };
    let row = |t: usize, dist: &[u32]| {
        let mut best = (u32::MAX, 0u64);
        for (g, &d) in dist.iter().enumerate() {
            let g = g as u64;
            if g != path.alpha && g != path.beta && d < best.0 {
                best = (d, g);
            }
        }
        ProfileRow {
            step: t,
            dist_alpha: dist[path.alpha as usize],
            dist_beta: dist[path.beta as usize],
            min_dist_other: best.0,
            argmin_other: best.1,
        }
    };
    let mut rows = Vec::with_capacity(path.len());
    rows.push(row(0, &dist));
    for (t, &x) in path.flips.iter().enumerate() {
        if x >= f.len() {
            return Err(Error::InvalidArgument(format!(
                "flip position {x} out of range"
            )));
        }
        let bit = f.get(x);
        for (g, d) in dist.iter_mut().enumerate() {
            if inner(g as u64, x as u64) == bit {
                *d += 1;
            } else {
                *d -= 1;
            }
        }
        f.flip(x);
        rows.push(row(t + 1, &dist));
    }
    Ok(rows)
}

/// Outcome of [`verify_codeword_path`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathVerdict {
    Pass,
    /// The flip sequence is not a permutation of `D(α, β)`.
    Structural(String),
    /// Step is more than `2^{n-2}` away from both endpoints.
    NotClose {
        step: usize,
        dist_alpha: u32,
        dist_beta: u32,
    },
    /// Step is within `(1/4 + δ₀)·2^n` positions of a third codeword.
    TooClose {
        step: usize,
        gamma: u64,
        distance: u32,
    },
}

impl PathVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, PathVerdict::Pass)
    }
}

/// Exhaustively checks both conditions at every step against every third codeword.
/// Reports the earliest failing step (smallest `γ` among ties).
pub fn verify_codeword_path(path: &CodewordPath) -> Result<PathVerdict> {
    let d = disagreement_set(path.alpha, path.beta, path.n)?;
    if path.flips.len() != d.len() {
        return Ok(PathVerdict::Structural(format!(
            "{} flips, disagreement set has {} positions",
            path.flips.len(),
            d.len()
        )));
    }
    let mut seen = vec![false; 1 << path.n];
    for &x in &path.flips {
        if x >= seen.len() || d.binary_search(&x).is_err() {
            return Ok(PathVerdict::Structural(format!(
                "position {x} lies outside the disagreement set"
            )));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Ok(PathVerdict::Structural(format!(
                "position {x} flipped twice"
            )));
        }
    }
    let close = constants::close_radius(path.n);
    for row in distance_profile(path)? {
        if row.dist_alpha.min(row.dist_beta) > close {
            return Ok(PathVerdict::NotClose {
                step: row.step,
                dist_alpha: row.dist_alpha,
                dist_beta: row.dist_beta,
            });
        }
        if row.min_dist_other != u32::MAX
            && !constants::is_far_beyond_margin(row.min_dist_other, path.n)
        {
            return Ok(PathVerdict::TooClose {
                step: row.step,
                gamma: row.argmin_other,
                distance: row.min_dist_other,
            });
        }
    }
    Ok(PathVerdict::Pass)
}

/// Samples a uniformly random flip order of `D(α, β)`. For `n ≥ 9` each sample is
/// verified and resampled up to `max_retries` times; smaller `n` returns the first
/// sample unverified.
pub fn generate_codeword_path(
    alpha: u64,
    beta: u64,
    n: u32,
    seed: u64,
    max_retries: u32,
) -> Result<CodewordPath> {
    sample_path(
        alpha,
        beta,
        n,
        seed,
        max_retries,
        n >= constants::PATH_MIN_N,
    )
}

/// Like [`generate_codeword_path`] but insists on a verified path for every `n`.
pub fn generate_verified_path(
    alpha: u64,
    beta: u64,
    n: u32,
    seed: u64,
    max_retries: u32,
) -> Result<CodewordPath> {
    sample_path(alpha, beta, n, seed, max_retries, true)
}

fn sample_path(
    alpha: u64,
    beta: u64,
    n: u32,
    seed: u64,
    max_retries: u32,
    verify: bool,
) -> Result<CodewordPath> {
    if n < 2 {
        return Err(Error::InvalidArgument("codeword paths need n >= 2".into()));
    }
    let d = disagreement_set(alpha, beta, n)?;
    let mut rng = seeds::rng(seed, "codeword-path", alpha.wrapping_mul(1 << 32) ^ beta);
    let mut last = None;
    for _ in 0..=max_retries {
        let mut flips = d.clone();
        flips.shuffle(&mut rng);
        let path = CodewordPath {
            n,
            alpha,
            beta,
            flips,
        };
        if !verify {
            return Ok(path);
        }
        match verify_codeword_path(&path)? {
            PathVerdict::Pass => return Ok(path),
            other => last = Some(other),
        }
    }
    let (gamma, step, distance) = match last {
        Some(PathVerdict::TooClose {
            step,
            gamma,
            distance,
        }) => (gamma, step, distance),
        Some(PathVerdict::NotClose {
            step, dist_alpha, ..
        }) => (alpha, step, dist_alpha),
        _ => (alpha, 0, 0),
    };
    Err(Error::RetriesExhausted {
        attempts: max_retries + 1,
        gamma,
        step,
        distance,
    })
}

/// Minimum over `k ≥ 1` of the sum of the first `k` entries; `0` for an empty slice.
pub fn min_partial_sum(seq: &[i8]) -> i64 {
    seq.iter()
        .scan(0i64, |acc, &a| {
            *acc += a as i64;
            Some(*acc)
        })
        .min()
        .unwrap_or(0)
}

/// Monte Carlo estimate for shuffled sequences of `N` plus ones and `N` minus ones.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumReport {
    pub half_len: usize,
    pub trials: u64,
    /// `⌈0.99·N⌉`; a trial hits when its minimum partial sum is `≤ -threshold`.
    pub threshold: i64,
    pub hits: u64,
    /// Upper bound `0.9^N` on the hit probability (valid for `N > 100`).
    pub bound: f64,
}

impl PartialSumReport {
    pub fn frequency(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.trials.max(1))
    }
}

/// `⌈(1 - η₀)·N⌉` with `η₀ = 1/100`, in integers.
pub fn deep_dip_threshold(half_len: usize) -> i64 {
    (99 * half_len as i64 + 99) / 100
}

pub fn partial_sum_experiment(half_len: usize, trials: u64, seed: u64) -> PartialSumReport {
    let threshold = deep_dip_threshold(half_len);
    let mut base: Vec<i8> = vec![1; half_len];
    base.extend(std::iter::repeat_n(-1, half_len));
    let mut hits = 0;
    let mut seq = base.clone();
    for trial in 0..trials {
        let mut rng = seeds::rng(seed, "partial-sum", trial);
        seq.copy_from_slice(&base);
        seq.shuffle(&mut rng);
        if min_partial_sum(&seq) <= -threshold {
            hits += 1;
        }
    }
    PartialSumReport {
        half_len,
        trials,
        threshold,
        hits,
        bound: 0.9f64.powi(half_len as i32),
    }
}

/// Draws a message uniformly from `0..2^n`.
pub fn random_message<R: Rng>(rng: &mut R, n: u32) -> u64 {
    rng.gen_range(0..1u64 << n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Column order of the n = 3 codeword table, as bit strings `x₁x₂x₃`.
    const TABLE_ORDER: [&str; 8] = ["000", "001", "010", "100", "110", "101", "011", "111"];

    fn from_bits(s: &str) -> u64 {
        u64::from_str_radix(s, 2).unwrap()
    }

    #[test]
    fn table_rows_for_n3() {
        let row = |alpha: &str| -> Vec<u8> {
            let f = had_encode(from_bits(alpha), 3).unwrap();
            TABLE_ORDER
                .iter()
                .map(|x| f.get(from_bits(x) as usize) as u8)
                .collect()
        };
        assert_eq!(row("011"), vec![0, 1, 1, 0, 1, 1, 0, 0]);
        assert_eq!(row("111"), vec![0, 1, 1, 1, 0, 0, 0, 1]);
        assert_eq!(row("000"), vec![0; 8]);
        // the remaining rows of the table
        assert_eq!(row("001"), vec![0, 1, 0, 0, 0, 1, 1, 1]);
        assert_eq!(row("010"), vec![0, 0, 1, 0, 1, 0, 1, 1]);
        assert_eq!(row("100"), vec![0, 0, 0, 1, 1, 1, 0, 1]);
        assert_eq!(row("110"), vec![0, 0, 1, 1, 0, 1, 1, 0]);
        assert_eq!(row("101"), vec![0, 1, 0, 1, 1, 0, 1, 0]);
    }

    #[test]
    fn encode_rejects_out_of_range() {
        assert!(had_encode(8, 3).is_err());
    }

    #[test]
    fn distances() {
        let f = had_encode(5, 4).unwrap();
        assert_eq!(rel_distance(&f, &f).unwrap(), Ratio::new(0, 1));
        assert_eq!(rel_distance(&f, &f.complement()).unwrap(), Ratio::new(1, 1));
        for a in 0..16 {
            for b in 0..16 {
                if a != b {
                    let d = rel_distance(&had_encode(a, 4).unwrap(), &had_encode(b, 4).unwrap());
                    assert_eq!(d.unwrap(), Ratio::new(1, 2));
                }
            }
        }
        let g = had_encode(1, 3).unwrap();
        assert!(rel_distance(&f, &g).is_err());
    }

    #[test]
    fn disagreement_examples() {
        let d = disagreement_set(0b000, 0b001, 3).unwrap();
        let want: Vec<usize> = ["001", "101", "011", "111"]
            .iter()
            .map(|s| from_bits(s) as usize)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(d, want);
        assert!(disagreement_set(3, 3, 3).is_err());
        for a in 0..16 {
            for b in 0..16 {
                if a != b {
                    let d = disagreement_set(a, b, 4).unwrap();
                    assert_eq!(d.len(), 8);
                    assert_eq!(d, disagreement_set(b, a, 4).unwrap());
                }
            }
        }
    }

    #[test]
    fn partition_symmetry_and_errors() {
        let r = partition_triple(3, 5, 6, 4).unwrap();
        let s = partition_triple(5, 3, 6, 4).unwrap();
        assert_eq!(r.p_alpha, s.p_beta);
        assert_eq!(r.p_beta, s.p_alpha);
        assert_eq!(r.p_gamma, s.p_gamma);
        assert!(partition_triple(1, 1, 2, 4).is_err());
        assert!(partition_triple(1, 2, 1, 4).is_err());
    }

    #[test]
    fn min_partial_sum_examples() {
        assert_eq!(min_partial_sum(&[1, -1, 1, -1]), 0);
        assert_eq!(min_partial_sum(&[-1, 1, -1, -1, 1, 1]), -2);
        let n = 7;
        let mut s = vec![-1i8; n];
        s.extend(vec![1i8; n]);
        assert_eq!(min_partial_sum(&s), -(n as i64));
    }

    #[test]
    fn thresholds() {
        assert_eq!(deep_dip_threshold(128), 127);
        assert_eq!(deep_dip_threshold(2), 2);
        assert_eq!(deep_dip_threshold(100), 99);
    }

    #[test]
    fn partial_sum_reproducible() {
        let a = partial_sum_experiment(16, 200, 3);
        let b = partial_sum_experiment(16, 200, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn hex_round_trip_small_and_large() {
        for n in [0u32, 1, 2, 3, 6, 9] {
            let mut f = BitFunction::zeros(n).unwrap();
            for x in (0..f.len()).step_by(3) {
                f.flip(x);
            }
            assert_eq!(BitFunction::from_hex(n, &f.to_hex()).unwrap(), f);
        }
        assert!(BitFunction::from_hex(2, "1f").is_err());
        assert!(BitFunction::from_hex(3, "zz").is_err());
    }

    #[test]
    fn path_structural_rejection() {
        let mut p = generate_codeword_path(0, 1, 3, 1, 0).unwrap();
        p.flips[0] = 0; // position 0 is never in D
        assert!(matches!(
            verify_codeword_path(&p).unwrap(),
            PathVerdict::Structural(_)
        ));
        let mut q = generate_codeword_path(0, 1, 3, 1, 0).unwrap();
        q.flips.pop();
        assert!(matches!(
            verify_codeword_path(&q).unwrap(),
            PathVerdict::Structural(_)
        ));
    }

    #[test]
    fn path_endpoints_and_length() {
        let p = generate_codeword_path(6, 9, 5, 11, 0).unwrap();
        let steps = p.steps().unwrap();
        assert_eq!(steps.len(), (1 << 4) + 1);
        assert_eq!(steps[0], had_encode(6, 5).unwrap());
        assert_eq!(steps[steps.len() - 1], had_encode(9, 5).unwrap());
    }
}
