//! Supernatural cohomology tables and the pure complexes obtained by zipping
//! them, including the classical Eagon–Northcott and Buchsbaum–Rim families.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::betti::{BettiDiagram, BettiEntry};
use crate::linalg::{binomial, rat, RatPoly, Rational};
use crate::table::HyperTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupernaturalError {
    #[error("roots must be strictly decreasing: {0:?}")]
    NotDecreasing(Vec<i64>),
    #[error("scale must be positive, got {0}")]
    Scale(Rational),
    #[error("partition must be weakly decreasing with last part >= -1: {0:?}")]
    Partition(Vec<i64>),
    #[error("{dims} dimensions but {weights} weights")]
    Lengths { dims: usize, weights: usize },
    #[error("dimension {0} must be at least 1")]
    Dimension(i64),
    #[error("pinching fails at position {index}: u + w - 1 = {reach} > {next}")]
    Pinching { index: usize, reach: i64, next: i64 },
    #[error("w = {w} must satisfy 1 <= w <= n = {n}")]
    Width { w: usize, n: usize },
    #[error("value {value} at twist {t} is not an integer")]
    NonIntegral { t: i64, value: Rational },
}

/// Roots `r_1 > … > r_delta` and the scale `c` of `c/delta! * prod (t - r_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSequence {
    roots: Vec<i64>,
    scale: Rational,
    /// Set when the scale was not determined by the input.
    pub scale_assumed: bool,
}

impl RootSequence {
    pub fn new(roots: Vec<i64>, scale: Rational) -> Result<Self, SupernaturalError> {
        if roots.windows(2).any(|w| w[0] <= w[1]) {
            return Err(SupernaturalError::NotDecreasing(roots));
        }
        if !scale.is_positive() {
            return Err(SupernaturalError::Scale(scale));
        }
        Ok(RootSequence { roots, scale, scale_assumed: false })
    }

    pub fn unit(roots: Vec<i64>) -> Result<Self, SupernaturalError> {
        RootSequence::new(roots, Rational::one())
    }

    /// Roots with the smallest scale making `P` integer-valued; flagged as assumed.
    pub fn with_integral_scale(roots: Vec<i64>) -> Result<Self, SupernaturalError> {
        let mut seq = RootSequence::unit(roots)?;
        seq.scale = minimal_integral_scale(&supernatural_poly(&seq), seq.dimension());
        seq.scale_assumed = true;
        Ok(seq)
    }

    pub fn roots(&self) -> &[i64] {
        &self.roots
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn dimension(&self) -> usize {
        self.roots.len()
    }

    /// Cohomological degree carrying twist `t`: the number of roots above `t`.
    pub fn row_of(&self, t: i64) -> usize {
        self.roots.iter().filter(|&&r| r > t).count()
    }
}

/// `(c / delta!) * prod (t - r_k)`.
pub fn supernatural_poly(r: &RootSequence) -> RatPoly {
    let mut p = RatPoly::constant(r.scale.clone());
    for (k, &root) in r.roots.iter().enumerate() {
        p = (&p * &RatPoly::linear(&rat(root))).scale(&Rational::new(BigInt::one(), BigInt::from(k + 1)));
    }
    p
}

/// Smallest `c > 0` with `c * p` integer-valued; `delta + 1` consecutive values decide it.
pub fn minimal_integral_scale(p: &RatPoly, delta: usize) -> Rational {
    let values: Vec<Rational> = (0..=delta as i64).map(|t| p.eval_int(t)).collect();
    let l = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(&(v.numer() * (&l / v.denom()))));
    if g.is_zero() {
        return Rational::one();
    }
    Rational::new(l, g.abs())
}

fn integral(t: i64, v: Rational) -> Result<BigInt, SupernaturalError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(SupernaturalError::NonIntegral { t, value: v })
    }
}

/// Row `i` holds `|P(t)|` for `r_{i+1} < t < r_i`; twists at roots vanish.
pub fn supernatural_table(r: &RootSequence, window: (i64, i64)) -> Result<HyperTable, SupernaturalError> {
    let p = supernatural_poly(r);
    let delta = r.dimension() as i64;
    let mut cells = Vec::new();
    for col in window.0..=window.1 {
        for i in 0..=delta {
            let t = col - i;
            if r.roots.contains(&t) || r.row_of(t) as i64 != i {
                continue;
            }
            let v = integral(t, p.eval_int(t))?;
            let sign_ok = if i % 2 == 0 { v.is_positive() } else { v.is_negative() };
            assert!(sign_ok, "P({t}) = {v} has the wrong sign for row {i}");
            cells.push((i, col, v.abs()));
        }
    }
    Ok(HyperTable::from_cells(r.dimension(), window, cells))
}

/// Degree sequence, ranks and flags of the zip complex of a supernatural table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureComplexReport {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub ranks: Vec<BigInt>,
    /// `r_1 <= 0`.
    pub is_resolution: bool,
    /// `-n <= r_delta` and `r_1 <= 0`.
    pub is_cm: bool,
    /// `n < delta`.
    pub short_space: bool,
}

impl PureComplexReport {
    pub fn diagram(&self) -> BettiDiagram {
        BettiDiagram::pure(&self.degrees, &self.ranks)
    }
}

/// Degrees `[0, n] \ {-r_k}` with ranks `C(n, d) |P(-d)|`.
pub fn pure_zip(r: &RootSequence, n: usize) -> Result<PureComplexReport, SupernaturalError> {
    let p = supernatural_poly(r);
    let mut degrees = Vec::new();
    let mut ranks = Vec::new();
    for d in 0..=n as i64 {
        if r.roots.contains(&-d) {
            continue;
        }
        let v = integral(-d, p.eval_int(-d))?;
        degrees.push(d);
        ranks.push(binomial(n as i64, d as usize) * v.abs());
    }
    let first = r.roots.first().copied();
    let last = r.roots.last().copied();
    let is_resolution = first.is_none_or(|r1| r1 <= 0);
    let is_cm = is_resolution && last.is_none_or(|rd| -(n as i64) <= rd);
    Ok(PureComplexReport { n, degrees, ranks, is_resolution, is_cm, short_space: n < r.dimension() })
}

/// Eagon–Northcott: roots `-1, …, -(w-1)`.
pub fn eagon_northcott(w: usize) -> RootSequence {
    RootSequence::unit((1..w as i64).map(|k| -k).collect()).expect("decreasing")
}

/// `C(n, m+1+j) C(m+j, j)` at homological index `j+1`, with `1` at index `0`.
pub fn eagon_northcott_closed_form(n: usize, w: usize) -> Result<BettiDiagram, SupernaturalError> {
    if w == 0 || w > n {
        return Err(SupernaturalError::Width { w, n });
    }
    let m = w - 1;
    let mut entries = vec![BettiEntry { index: 0, twist: 0, rank: BigInt::one() }];
    for j in 0..n - m {
        entries.push(BettiEntry {
            index: j + 1,
            twist: (m + 1 + j) as i64,
            rank: binomial(n as i64, m + 1 + j) * binomial((m + j) as i64, j),
        });
    }
    Ok(BettiDiagram::new(entries))
}

/// Buchsbaum–Rim family from `O(r)` on a space of dimension `m`: roots `-r-1, …, -r-m`.
pub fn buchsbaum_rim(r: i64, m: usize) -> RootSequence {
    RootSequence::unit((1..=m as i64).map(|k| -r - k).collect()).expect("decreasing")
}

/// `r_i = -lambda_i - m + i - 1`, stored decreasing.
pub fn schur_roots(lambda: &[i64]) -> Result<RootSequence, SupernaturalError> {
    if lambda.windows(2).any(|w| w[0] < w[1]) || lambda.last().is_some_and(|&l| l < -1) {
        return Err(SupernaturalError::Partition(lambda.to_vec()));
    }
    let m = lambda.len() as i64;
    let mut roots: Vec<i64> = lambda.iter().enumerate().map(|(i, &l)| -l - m + i as i64).collect();
    roots.reverse();
    RootSequence::unit(roots)
}

/// Union of `[-u_i - w_i + 1, -u_i - 1]` with the smallest integral scale.
pub fn tensor_roots(dims: &[i64], weights: &[i64]) -> Result<RootSequence, SupernaturalError> {
    if dims.len() != weights.len() {
        return Err(SupernaturalError::Lengths { dims: dims.len(), weights: weights.len() });
    }
    if let Some(&w) = dims.iter().find(|&&w| w < 1) {
        return Err(SupernaturalError::Dimension(w));
    }
    for i in 1..dims.len() {
        let reach = weights[i - 1] + dims[i - 1] - 1;
        if reach > weights[i] {
            return Err(SupernaturalError::Pinching { index: i - 1, reach, next: weights[i] });
        }
    }
    let mut roots: Vec<i64> = dims
        .iter()
        .zip(weights)
        .flat_map(|(&w, &u)| (-u - w + 1)..=(-u - 1))
        .collect();
    roots.sort_unstable_by(|a, b| b.cmp(a));
    RootSequence::with_integral_scale(roots)
}
