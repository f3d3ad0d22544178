//! Squarefree Hilbert functions and the Betti diagrams of the three rotated
//! complexes of a triplet.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, Serializer};
use thiserror::Error;

use crate::betti::{BettiDiagram, BettiEntry};
use crate::hilbert::{betti, chi_family, solve_alpha, AlphaVector, SolveError};
use crate::linalg::{binomial, RatPoly, Rational};
use crate::json::BigNums;
use crate::triplet::{rotate, to_degree_triplet, HomologyTriplet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquarefreeError {
    #[error("polynomial of degree {degree} exceeds the bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("K-polynomial of degree {degree} exceeds n = {n}")]
    SeriesTooLong { degree: usize, n: usize },
    #[error("class coefficients of {chi} are not integral")]
    NonIntegral { chi: String },
    #[error("negative squarefree dimension {value} at degree {k} for {chi}")]
    Negative { chi: String, k: usize, value: BigInt },
    #[error("rotation {rotation}: {source}")]
    Rotation {
        rotation: usize,
        #[source]
        source: Box<SolveError>,
    },
    #[error("rotation {rotation} has degree sequence {got:?}, expected {expected:?}")]
    DegreeSequence { rotation: usize, expected: Vec<i64>, got: Vec<i64> },
    #[error("strand assembly gives {strands:?}, rotation solve gives {solved:?}")]
    CrossCheck { strands: Vec<(i64, BigInt)>, solved: Vec<(i64, BigInt)> },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// `h^sq(0..=n)`: total dimension of the squarefree multidegrees of each total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HsqVector {
    values: Vec<BigInt>,
}

impl HsqVector {
    pub fn new(values: Vec<BigInt>) -> Self {
        assert!(!values.is_empty(), "h^sq has n+1 entries");
        HsqVector { values }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        HsqVector::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, k: usize) -> BigInt {
        self.values.get(k).cloned().unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|x| !x.is_negative())
    }
}

impl fmt::Display for HsqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", cells.join(","))
    }
}

impl Serialize for HsqVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BigNums(&self.values).serialize(s)
    }
}

/// Integer polynomial in `t`, index = power, trailing zeros trimmed.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn add_into(acc: &mut IntPoly, p: &[BigInt], sign: i64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += x * sign;
    }
}

/// `t^k (1-t)^{n-k}` expanded.
fn monomial_times_power(k: usize, n: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); n + 1];
    for j in 0..=n - k {
        let c = binomial((n - k) as i64, j);
        p[k + j] = if j % 2 == 0 { c } else { -c };
    }
    p
}

/// Numerator `K(t) = sum_k h(k) t^k (1-t)^{n-k}` of the Hilbert series over `(1-t)^n`.
pub fn hsq_series(h: &HsqVector) -> IntPoly {
    let n = h.n();
    let mut acc = vec![BigInt::zero(); n + 1];
    for (k, v) in h.values.iter().enumerate() {
        if !v.is_zero() {
            let term: IntPoly = monomial_times_power(k, n).into_iter().map(|c| c * v).collect();
            add_into(&mut acc, &term, 1);
        }
    }
    trim(acc)
}

/// Inverse of [`hsq_series`]: forward substitution in the triangular system.
pub fn hsq_from_series(k: &[BigInt], n: usize) -> Result<HsqVector, SquarefreeError> {
    let k = trim(k.to_vec());
    if k.len() > n + 1 {
        return Err(SquarefreeError::SeriesTooLong { degree: k.len() - 1, n });
    }
    let mut h: Vec<BigInt> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut v = k.get(s).cloned().unwrap_or_default();
        for (j, hj) in h.iter().enumerate() {
            let c = binomial((n - j) as i64, s - j);
            if (s - j) % 2 == 0 {
                v -= hj * c;
            } else {
                v += hj * c;
            }
        }
        h.push(v);
    }
    Ok(HsqVector::new(h))
}

/// Coefficients of `chi` in the basis `C(d+i-1, i)`, `i = 0..=delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub a: Vec<Rational>,
    /// Some `a_i < 0`: the input is not 1-regular.
    pub has_negative: bool,
}

/// `a_i = sum_{k<=i} (-1)^k C(i,k) chi(-k)`.
pub fn sheaf_class_decompose(chi: &RatPoly, delta: usize) -> Result<ClassDecomposition, SquarefreeError> {
    if let Some(degree) = chi.degree() {
        if degree > delta {
            return Err(SquarefreeError::DegreeTooLarge { degree, bound: delta });
        }
    }
    let values = chi.values_at((0..=delta as i64).map(|k| -k));
    let a: Vec<Rational> = (0..=delta)
        .map(|i| {
            (0..=i).fold(Rational::zero(), |acc, k| {
                let term = &values[k] * Rational::from_integer(binomial(i as i64, k));
                if k % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    let has_negative = a.iter().any(Signed::is_negative);
    Ok(ClassDecomposition { a, has_negative })
}

/// `K_i(t) = sum_k (-1)^k C(n, i+k) C(i+k, k) t^{i+k}`.
pub fn k_polynomial_of_class(i: usize, n: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); n + 1];
    for k in 0..=n.saturating_sub(i) {
        if i + k > n {
            break;
        }
        let c = binomial(n as i64, i + k) * binomial((i + k) as i64, k);
        p[i + k] = if k % 2 == 0 { c } else { -c };
    }
    trim(p)
}

/// `h^sq` of the squarefree module whose sheaf has Hilbert polynomial `chi`.
pub fn hsq_of_reduction(chi: &RatPoly, delta: usize, n: usize) -> Result<HsqVector, SquarefreeError> {
    let label = || chi.pretty();
    let dec = sheaf_class_decompose(chi, delta)?;
    if delta > n && dec.a[n + 1..].iter().any(|x| !x.is_zero()) {
        return Err(SquarefreeError::DegreeTooLarge { degree: delta, bound: n });
    }
    let mut k: IntPoly = vec![BigInt::zero(); n + 1];
    for (i, a) in dec.a.iter().enumerate().take(n + 1) {
        if a.is_zero() {
            continue;
        }
        if !a.is_integer() {
            return Err(SquarefreeError::NonIntegral { chi: label() });
        }
        let ai = a.to_integer();
        let ki: IntPoly = k_polynomial_of_class(i, n).into_iter().map(|c| c * &ai).collect();
        add_into(&mut k, &ki, 1);
    }
    let h = hsq_from_series(&k, n)?;
    if let Some((k, v)) = h.values.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(SquarefreeError::Negative { chi: label(), k, value: v.clone() });
    }
    Ok(h)
}

fn reduce_family(polys: &[RatPoly], n: usize) -> Result<Vec<HsqVector>, SquarefreeError> {
    polys
        .iter()
        .map(|p| hsq_of_reduction(p, p.degree().unwrap_or(0), n))
        .collect()
}

/// Betti diagram assembled from strands: each `h_q(k)` contributes at twist `n - k`.
/// Homological indices follow the increasing order of the twists.
pub fn strand_betti(h: &[HsqVector], n: usize) -> BettiDiagram {
    let mut by_twist: std::collections::BTreeMap<i64, BigInt> = Default::default();
    for hq in h {
        for (k, v) in hq.values.iter().enumerate() {
            if !v.is_zero() {
                *by_twist.entry(n as i64 - k as i64).or_default() += v;
            }
        }
    }
    BettiDiagram::new(
        by_twist
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .enumerate()
            .map(|(index, (twist, rank))| BettiEntry { index, twist, rank }),
    )
}

/// Diagram of the rotated complex built from the homology polynomials of `t`,
/// checked against the diagram obtained by solving `rotate(t)` directly.
pub fn rotated_betti_via_strands(t: &HomologyTriplet, alpha: &AlphaVector) -> Result<BettiDiagram, SquarefreeError> {
    let family = chi_family(t, alpha)?;
    let h = reduce_family(&family.chi, t.n())?;
    let strands = strand_betti(&h, t.n());
    let r = rotate(t).map_err(|e| SolveError::Consistency(e.to_string()))?;
    let solved = betti(&r, &solve_alpha(&r)?)?;
    if strands.twist_ranks() != solved.twist_ranks() {
        return Err(SquarefreeError::CrossCheck { strands: strands.twist_ranks(), solved: solved.twist_ranks() });
    }
    Ok(strands)
}

/// The Betti diagram of `t` with the `h^sq` vectors of its homology and
/// cohomology modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologicalData {
    pub betti: BettiDiagram,
    pub homology: Vec<HsqVector>,
    pub cohomology: Vec<HsqVector>,
}

pub fn homological_data(t: &HomologyTriplet, alpha: &AlphaVector) -> Result<HomologicalData, SquarefreeError> {
    let family = chi_family(t, alpha)?;
    Ok(HomologicalData {
        betti: betti(t, alpha)?,
        homology: reduce_family(&family.chi, t.n())?,
        cohomology: reduce_family(&family.psi, t.n())?,
    })
}

/// `sum_i (-1)^i beta_i t^{d_i}`.
pub fn betti_k_polynomial(b: &BettiDiagram) -> IntPoly {
    let top = b.entries().iter().map(|e| e.twist).max().unwrap_or(0).max(0) as usize;
    let mut p = vec![BigInt::zero(); top + 1];
    for e in b.entries() {
        assert!(e.twist >= 0, "negative twist in a squarefree diagram");
        let v = if e.index % 2 == 0 { e.rank.clone() } else { -&e.rank };
        p[e.twist as usize] += v;
    }
    trim(p)
}

/// `sum_q (-1)^q K(h_q)`.
pub fn alternating_k_polynomial(h: &[HsqVector]) -> IntPoly {
    let mut acc = Vec::new();
    for (q, hq) in h.iter().enumerate() {
        add_into(&mut acc, &hsq_series(hq), if q % 2 == 0 { 1 } else { -1 });
    }
    trim(acc)
}

/// Betti diagrams of `t`, `rotate(t)` and `rotate^2(t)`, each solved and
/// normalized on its own.
pub fn triplet_betti(t: &HomologyTriplet) -> Result<[BettiDiagram; 3], SquarefreeError> {
    let (b, refl_h, c) = to_degree_triplet(t);
    let expected = [b.members().to_vec(), refl_h.members().to_vec(), c.members().to_vec()];
    let mut current = t.clone();
    let mut out: Vec<BettiDiagram> = Vec::with_capacity(3);
    for (rotation, want) in expected.into_iter().enumerate() {
        if rotation > 0 {
            current = rotate(&current).map_err(|e| SquarefreeError::Rotation {
                rotation,
                source: Box::new(SolveError::Consistency(e.to_string())),
            })?;
        }
        let wrap = |e: SolveError| SquarefreeError::Rotation { rotation, source: Box::new(e) };
        let alpha = solve_alpha(&current).map_err(wrap)?;
        let d = betti(&current, &alpha).map_err(wrap)?;
        if d.twists() != want {
            return Err(SquarefreeError::DegreeSequence { rotation, expected: want, got: d.twists() });
        }
        out.push(d);
    }
    Ok(out.try_into().expect("three rotations"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{binomial_poly, rat};
    use crate::triplet::{dual, validate_triplet};
    use proptest::prelude::*;

    fn t(n: usize, b: &[i64], h: &[i64], c: &[i64]) -> HomologyTriplet {
        validate_triplet(n, b, h, c).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Peels off leading terms against `C(d+i-1, i)`, whose leading coefficient is `1/i!`.
    fn decompose_by_leading_terms(chi: &RatPoly, delta: usize) -> Vec<Rational> {
        let mut rest = chi.clone();
        let mut a = vec![Rational::zero(); delta + 1];
        for i in (0..=delta).rev() {
            let basis = binomial_poly(i as i64 - 1, i);
            let c = rest.coeff(i) / basis.leading();
            rest = &rest - &basis.scale(&c);
            a[i] = c;
        }
        assert!(rest.is_zero());
        a
    }

    #[test]
    fn series_examples() {
        // A field in degree 0 has series 1, so its numerator is (1-t)^2.
        assert_eq!(hsq_series(&HsqVector::from_ints(&[1, 0, 0])), big(&[1, -2, 1]));
        for n in 0..7 {
            let free = HsqVector::new((0..=n).map(|k| binomial(n as i64, k)).collect());
            assert_eq!(hsq_series(&free), big(&[1]));
        }
    }

    #[test]
    fn class_decomposition_examples() {
        let three = RatPoly::from_ints(&[3]);
        assert_eq!(sheaf_class_decompose(&three, 0).unwrap().a, vec![rat(3)]);
        let c = binomial_poly(1, 2);
        assert_eq!(sheaf_class_decompose(&c, 2).unwrap().a, vec![rat(0), rat(0), rat(1)]);
        let c4 = binomial_poly(3, 4).scale(&rat(3));
        assert_eq!(sheaf_class_decompose(&c4, 4).unwrap().a, vec![rat(0), rat(0), rat(0), rat(0), rat(3)]);
        assert!(matches!(sheaf_class_decompose(&c4, 3), Err(SquarefreeError::DegreeTooLarge { .. })));
        let neg = sheaf_class_decompose(&RatPoly::from_ints(&[-1]), 0).unwrap();
        assert!(neg.has_negative);
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(hsq_of_reduction(&RatPoly::from_ints(&[3]), 0, 4).unwrap(), HsqVector::from_ints(&[3, 0, 0, 0, 0]));
        assert_eq!(
            hsq_of_reduction(&binomial_poly(1, 2), 2, 4).unwrap(),
            HsqVector::from_ints(&[0, 0, 6, 0, 0])
        );
        assert_eq!(
            hsq_of_reduction(&binomial_poly(3, 4).scale(&rat(3)), 4, 4).unwrap(),
            HsqVector::from_ints(&[0, 0, 0, 0, 3])
        );
        assert!(matches!(
            hsq_of_reduction(&RatPoly::from_ints(&[-2]), 0, 3),
            Err(SquarefreeError::Negative { .. })
        ));
    }

    #[test]
    fn class_k_polynomials_factor() {
        for n in 0..8usize {
            for i in 0..=n {
                let direct: IntPoly = monomial_times_power(i, n).into_iter().map(|c| c * binomial(n as i64, i)).collect();
                assert_eq!(k_polynomial_of_class(i, n), trim(direct));
            }
        }
    }

    #[test]
    fn rotated_diagrams() {
        let six = t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4]);
        let a = solve_alpha(&six).unwrap();
        assert_eq!(rotated_betti_via_strands(&six, &a).unwrap(), BettiDiagram::from_ints(&[0, 2, 4], &[3, 6, 3]));
        let small = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let a = solve_alpha(&small).unwrap();
        assert_eq!(rotated_betti_via_strands(&small, &a).unwrap(), BettiDiagram::from_ints(&[1, 2, 3], &[3, 6, 2]));
    }

    #[test]
    fn three_diagrams() {
        let [b0, b1, b2] = triplet_betti(&t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4])).unwrap();
        assert_eq!(b0, BettiDiagram::from_ints(&[0, 1, 2], &[3, 12, 12]));
        assert_eq!(b1, BettiDiagram::from_ints(&[0, 2, 4], &[3, 6, 3]));
        assert_eq!(b2, BettiDiagram::from_ints(&[2, 3, 4], &[12, 12, 3]));
        let [b0, b1, b2] = triplet_betti(&t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2])).unwrap();
        assert_eq!(b0.complex_string(), "S(-3) -> S(-2)^3 -> S^2");
        assert_eq!(b1.complex_string(), "S(-3)^2 -> S(-2)^6 -> S(-1)^3");
        assert_eq!(b2.complex_string(), "S(-2)^3 -> S");
    }

    #[test]
    fn homological_data_of_the_four_dimensional_example() {
        let six = t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4]);
        let a = solve_alpha(&six).unwrap();
        let d = homological_data(&six, &a).unwrap();
        assert_eq!(d.betti, BettiDiagram::from_ints(&[0, 1, 2], &[3, 12, 12]));
        assert_eq!(
            d.homology,
            vec![
                HsqVector::from_ints(&[3, 0, 0, 0, 0]),
                HsqVector::from_ints(&[0, 0, 6, 0, 0]),
                HsqVector::from_ints(&[0, 0, 0, 0, 3])
            ]
        );
        assert_eq!(d.cohomology.len(), 1);
        assert_eq!(betti_k_polynomial(&d.betti), alternating_k_polynomial(&d.homology));

        let dd = homological_data(&dual(&six).unwrap(), &solve_alpha(&dual(&six).unwrap()).unwrap()).unwrap();
        assert_eq!(dd.homology, d.cohomology);
        assert_eq!(dd.cohomology, d.homology);
    }

    #[test]
    fn class_decomposition_matches_leading_term_oracle() {
        for (chi, delta) in [
            (binomial_poly(2, 2), 2),
            (binomial_poly(3, 4).scale(&rat(3)), 4),
            (RatPoly::from_ints(&[1, 2, 3]), 3),
            (RatPoly::from_ints(&[7]), 2),
        ] {
            assert_eq!(sheaf_class_decompose(&chi, delta).unwrap().a, decompose_by_leading_terms(&chi, delta));
        }
    }

    proptest! {
        #[test]
        fn series_roundtrip(v in proptest::collection::vec(0i64..50, 1..9)) {
            let h = HsqVector::from_ints(&v);
            prop_assert_eq!(hsq_from_series(&hsq_series(&h), h.n()).unwrap(), h);
        }

        #[test]
        fn decompose_against_oracle(c in proptest::collection::vec(-30i64..30, 1..7)) {
            let chi = RatPoly::from_ints(&c);
            let delta = c.len() - 1;
            prop_assert_eq!(sheaf_class_decompose(&chi, delta).unwrap().a, decompose_by_leading_terms(&chi, delta));
        }
    }
}
