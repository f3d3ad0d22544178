//! The linear system for the Hilbert polynomial coefficients `alpha` of a
//! homology triplet, its dual, the homology and cohomology polynomials, and
//! Betti numbers.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::betti::{BettiDiagram, BettiEntry};
use crate::degree_set::StrandDecomposition;
use crate::json::BigNums;
use crate::linalg::{basis_combination, binomial, primitive_normalize, rat, LinalgError, RatMatrix, RatPoly, Rational};
use crate::triplet::{dual, HomologyTriplet, TripletRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("nullspace is trivial for {0}")]
    Overdetermined(TripletRecord),
    #[error("nullspace has dimension {dim} for {triplet}")]
    Underdetermined { triplet: TripletRecord, dim: usize },
    #[error("sign convention fails at degree {degree} for {triplet}")]
    SignConvention { triplet: TripletRecord, degree: i64 },
    #[error("{got} equations, expected |B|-1 = {expected}")]
    RowCount { expected: usize, got: usize },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl SolveError {
    /// Over- or underdetermined systems.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, SolveError::Overdetermined(_) | SolveError::Underdetermined { .. })
    }
}

/// Which family an equation row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `r ∈ [h, n-b] \ H`.
    Homology,
    /// `r ∈ (n-b, n]`, where both families coincide.
    Shared,
    /// `r ∈ [c, n-b] \ C`.
    Cohomology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EquationLabel {
    pub family: Family,
    pub r: i64,
}

/// Equations restricted to the columns indexed by `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    pub support: Vec<i64>,
    pub labels: Vec<EquationLabel>,
    pub matrix: RatMatrix,
}

fn homology_row(r: i64, cols: &[i64]) -> Vec<Rational> {
    cols.iter()
        .map(|&i| if i <= r { Rational::from_integer(binomial(r, i as usize)) } else { Rational::zero() })
        .collect()
}

fn cohomology_row(n: i64, r: i64, cols: &[i64]) -> Vec<Rational> {
    cols.iter()
        .map(|&i| if n - i <= r { Rational::from_integer(binomial(r, (n - i) as usize)) } else { Rational::zero() })
        .collect()
}

pub fn build_equations(t: &HomologyTriplet) -> Result<EquationSystem, SolveError> {
    let n = t.n() as i64;
    let top = n - t.codim() as i64;
    let support = t.betti_degrees().members().to_vec();
    let hs = t.homology_degrees();
    let cs = t.cohomology_degrees();

    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for r in t.h() as i64..=n {
        if !hs.contains(r) {
            let family = if r > top { Family::Shared } else { Family::Homology };
            labels.push(EquationLabel { family, r });
            rows.push(homology_row(r, &support));
        }
    }
    for r in t.c() as i64..=top {
        if !cs.contains(r) {
            labels.push(EquationLabel { family: Family::Cohomology, r });
            rows.push(cohomology_row(n, r, &support));
        }
    }

    // The shared rows written in the cohomology form span the same space.
    let full: Vec<i64> = (0..=n).collect();
    let shared_h: Vec<_> = (top + 1..=n).map(|r| homology_row(r, &full)).collect();
    let shared_c: Vec<_> = (top + 1..=n).map(|r| cohomology_row(n, r, &full)).collect();
    let width = full.len();
    if RatMatrix::from_rows(shared_h, width)?.rref() != RatMatrix::from_rows(shared_c, width)?.rref() {
        return Err(SolveError::Consistency("shared equations differ between the two families".into()));
    }

    let expected = support.len() - 1;
    if rows.len() != expected {
        return Err(SolveError::RowCount { expected, got: rows.len() });
    }
    let matrix = RatMatrix::from_rows(rows, support.len())?;
    Ok(EquationSystem { support, labels, matrix })
}

/// Integer coefficients `alpha_i` on the support `B`; zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphaVector {
    n: usize,
    support: Vec<i64>,
    values: Vec<BigInt>,
}

impl AlphaVector {
    pub fn new(n: usize, support: Vec<i64>, values: Vec<BigInt>) -> Self {
        assert_eq!(support.len(), values.len());
        assert!(support.windows(2).all(|w| w[0] < w[1]));
        AlphaVector { n, support, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    /// Values aligned with [`Self::support`].
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, i: i64) -> BigInt {
        match self.support.binary_search(&i) {
            Ok(k) => self.values[k].clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Dense `alpha_0..alpha_n`.
    pub fn full(&self) -> Vec<Rational> {
        (0..=self.n as i64).map(|i| Rational::from_integer(self.get(i))).collect()
    }

    /// `P(d) = sum alpha_i P_{n,i}(d)`.
    pub fn polynomial(&self) -> RatPoly {
        let terms = self.support.iter().zip(&self.values).map(|(&i, v)| (i as usize, v));
        basis_combination(self.n, terms).expect("support within [0,n]")
    }

    /// Positive rational `s` with `other = s * self`, if any.
    pub fn positive_ratio(&self, other: &AlphaVector) -> Option<Rational> {
        if self.n != other.n || self.support != other.support || self.values.is_empty() {
            return None;
        }
        let s = Rational::new(other.values[0].clone(), self.values[0].clone());
        let ok = s.is_positive()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| Rational::from_integer(a.clone()) * &s == Rational::from_integer(b.clone()));
        ok.then_some(s)
    }

    /// `(·,3,-3,2)`-style listing over `0..=n`, `·` marking indices outside the support.
    pub fn render(&self) -> String {
        let cells: Vec<String> = (0..=self.n as i64)
            .map(|i| if self.support.contains(&i) { self.get(i).to_string() } else { "·".into() })
            .collect();
        format!("({})", cells.join(","))
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for AlphaVector {
    /// `{"n":…, "support":[…], "alpha":[…]}` with `alpha` aligned to `support`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlphaVector", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("alpha", &BigNums(&self.values))?;
        st.end()
    }
}

fn check_signs(support: &[i64], values: &[BigInt]) -> Option<i64> {
    support
        .iter()
        .zip(values)
        .enumerate()
        .find(|(q, (_, v))| !(if q % 2 == 0 { v.is_positive() } else { v.is_negative() }))
        .map(|(_, (&d, _))| d)
}

pub fn solve_alpha(t: &HomologyTriplet) -> Result<AlphaVector, SolveError> {
    let sys = build_equations(t)?;
    let ns = sys.matrix.nullspace();
    match ns.len() {
        0 => return Err(SolveError::Overdetermined(t.record())),
        1 => {}
        dim => return Err(SolveError::Underdetermined { triplet: t.record(), dim }),
    }
    let values = match primitive_normalize(&ns[0], 0) {
        Ok(v) => v,
        Err(LinalgError::AmbiguousSign { .. }) => {
            return Err(SolveError::SignConvention { triplet: t.record(), degree: sys.support[0] })
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(degree) = check_signs(&sys.support, &values) {
        return Err(SolveError::SignConvention { triplet: t.record(), degree });
    }
    let alpha = AlphaVector::new(t.n(), sys.support, values);
    let expected = t.n() - t.codim();
    if alpha.polynomial().degree() != Some(expected) {
        return Err(SolveError::Consistency(format!(
            "Hilbert polynomial of {} has degree {:?}, expected {expected}",
            t.record(),
            alpha.polynomial().degree()
        )));
    }
    Ok(alpha)
}

/// `alpha*_i = (-1)^{|B|-1} alpha_{n-i}`, supported on `refl B`.
pub fn dual_alpha(alpha: &AlphaVector) -> Result<AlphaVector, SolveError> {
    let n = alpha.n as i64;
    let sign = if (alpha.support.len() - 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut pairs: Vec<(i64, BigInt)> = alpha.support.iter().zip(&alpha.values).map(|(&i, v)| (n - i, v * &sign)).collect();
    pairs.sort_by_key(|p| p.0);
    let (support, values): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    if let Some(degree) = check_signs(&support, &values) {
        return Err(SolveError::Consistency(format!("dual coefficients change sign convention at degree {degree}")));
    }
    Ok(AlphaVector::new(alpha.n, support, values))
}

/// Which side of the triplet a polynomial belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Homology,
    Cohomology,
}

/// `chi_0..chi_{s(H)}` and `psi_0..psi_{s(C)}` with diagnostic flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiFamily {
    pub chi: Vec<RatPoly>,
    pub psi: Vec<RatPoly>,
    /// Nonempty strands whose polynomial has degree below `h_{q+1} - 2`.
    pub strict_drops: Vec<(Side, usize)>,
    /// `(side, q, t)` with `1 <= t <= 20` where a nonzero polynomial is not positive.
    pub nonpositive: Vec<(Side, usize, i64)>,
}

/// Telescoping differences of the truncated sums over strand bounds.
fn strand_polys(
    strands: &StrandDecomposition,
    alpha: &AlphaVector,
    side: Side,
    drops: &mut Vec<(Side, usize)>,
) -> Result<Vec<RatPoly>, SolveError> {
    let truncated = |bound: i64| -> RatPoly {
        if bound < 0 {
            return RatPoly::zero();
        }
        let terms = alpha.support.iter().zip(&alpha.values).filter(|(&i, _)| i <= bound).map(|(&i, v)| (i as usize, v));
        basis_combination(bound as usize, terms).expect("indices bounded")
    };
    let s = strands.span();
    let mut prev = RatPoly::zero();
    let mut out = Vec::with_capacity(s + 1);
    for p in 1..=s + 1 {
        let bound = strands.bound(p) - 2;
        let cur = truncated(bound);
        let diff = &cur - &prev;
        let chi = if (p - 1) % 2 == 0 { diff } else { -&diff };
        let q = p - 1;
        let start = strands.bound(q);
        let nonempty = bound >= start;
        match chi.degree() {
            Some(d) if !nonempty => {
                return Err(SolveError::Consistency(format!("{side:?} polynomial {q} has degree {d} on an empty strand")))
            }
            Some(d) if d as i64 > bound => {
                return Err(SolveError::Consistency(format!(
                    "{side:?} polynomial {q} has degree {d} above the strand bound {bound}"
                )))
            }
            Some(d) if (d as i64) < bound => drops.push((side, q)),
            None if nonempty => drops.push((side, q)),
            _ => {}
        }
        out.push(chi);
        prev = cur;
    }
    Ok(out)
}

fn alternating_sum(polys: &[RatPoly]) -> RatPoly {
    polys.iter().enumerate().fold(RatPoly::zero(), |acc, (q, p)| if q % 2 == 0 { &acc + p } else { &acc - p })
}

pub fn chi_family(t: &HomologyTriplet, alpha: &AlphaVector) -> Result<ChiFamily, SolveError> {
    let mut strict_drops = Vec::new();
    let chi = strand_polys(&t.homology_strands(), alpha, Side::Homology, &mut strict_drops)?;
    let td = dual(t).map_err(|e| SolveError::Consistency(e.to_string()))?;
    let alpha_star = dual_alpha(alpha)?;
    let psi = strand_polys(&td.homology_strands(), &alpha_star, Side::Cohomology, &mut strict_drops)?;

    let p = alpha.polynomial();
    if alternating_sum(&chi) != p {
        return Err(SolveError::Consistency("alternating sum of homology polynomials differs from P".into()));
    }
    let n = t.n() as i64;
    let sign = if (alpha.support.len() as i64 - 1 - n).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    let reflected = p.compose_affine(&rat(-1), &rat(-n)).scale(&sign);
    if alternating_sum(&psi) != reflected || alpha_star.polynomial() != reflected {
        return Err(SolveError::Consistency("alternating sum of cohomology polynomials differs from P*".into()));
    }

    let mut nonpositive = Vec::new();
    for (side, family) in [(Side::Homology, &chi), (Side::Cohomology, &psi)] {
        for (q, poly) in family.iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            for (x, sign) in (1..=20).zip(poly.signs_at(1..=20)) {
                if sign != Sign::Plus {
                    nonpositive.push((side, q, x));
                }
            }
        }
    }
    Ok(ChiFamily { chi, psi, strict_drops, nonpositive })
}

/// `beta_i = C(n, d_i) (-1)^i alpha_{d_i}` at twist `d_i`.
pub fn betti(t: &HomologyTriplet, alpha: &AlphaVector) -> Result<BettiDiagram, SolveError> {
    let n = t.n() as i64;
    let mut entries = Vec::new();
    for (i, (&d, a)) in alpha.support.iter().zip(&alpha.values).enumerate() {
        let signed = if i % 2 == 0 { a.clone() } else { -a };
        let rank = binomial(n, d as usize) * signed;
        if !rank.is_positive() {
            return Err(SolveError::SignConvention { triplet: t.record(), degree: d });
        }
        entries.push(BettiEntry { index: i, twist: d, rank });
    }
    Ok(BettiDiagram::new(entries))
}
