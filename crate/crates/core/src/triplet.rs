//! Homology triplets `(B, H, C)` of degree sets over `[0, n]`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degree_set::{is_balanced, reflect, DegreeSet, SetError, StrandDecomposition};

/// Default ceiling for [`enumerate_triplets`].
pub const DEFAULT_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    B,
    H,
    C,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::B => "B",
            Part::H => "H",
            Part::C => "C",
        })
    }
}

/// The three pairs that must be balanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalancedPair {
    /// `(B, H)` over `[h, n]`.
    BH,
    /// `(refl B, C)` over `[c, n]`.
    ReflBC,
    /// `(refl H, refl C)` over `[b, n]`.
    ReflHReflC,
}

impl fmt::Display for BalancedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BalancedPair::BH => "(B, H) over [h, n]",
            BalancedPair::ReflBC => "(refl B, C) over [c, n]",
            BalancedPair::ReflHReflC => "(refl H, refl C) over [b, n]",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripletError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("{0} is empty")]
    Empty(Part),
    #[error("{part}: {source}")]
    Set {
        part: Part,
        #[source]
        source: SetError,
    },
    #[error("{part} is not contained in [{lo},{hi}]")]
    NotContained { part: Part, lo: i64, hi: i64 },
    #[error("{part} does not contain the endpoint {endpoint} of [{lo},{hi}]")]
    MissingEndpoint { part: Part, endpoint: i64, lo: i64, hi: i64 },
    #[error("count equation fails: b+h+c+i(B)+s(H)+s(C) = {sum}, expected n = {n}")]
    CountEquation { n: usize, sum: i64 },
    #[error("{0} is not balanced")]
    Unbalanced(BalancedPair),
    #[error("{op} produced an invalid triplet: {source}")]
    Derived {
        op: &'static str,
        #[source]
        source: Box<TripletError>,
    },
    #[error("refusing to enumerate n = {n}: bound is {max}")]
    TooLarge { n: usize, max: usize },
}

/// A validated homology triplet together with its derived invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyTriplet {
    n: usize,
    b_set: DegreeSet,
    h_set: DegreeSet,
    c_set: DegreeSet,
    codim: usize,
    h: usize,
    c: usize,
    internal_nondegrees: usize,
    homology_span: usize,
    cohomology_span: usize,
}

fn part_set(part: Part, n: i64, members: &[i64]) -> Result<DegreeSet, TripletError> {
    if members.is_empty() {
        return Err(TripletError::Empty(part));
    }
    DegreeSet::new(0, n, members.iter().copied()).map_err(|source| TripletError::Set { part, source })
}

fn check_interval(part: Part, set: &DegreeSet, lo: i64, hi: i64, errors: &mut Vec<TripletError>) {
    let (min, max) = (set.first().unwrap(), set.last().unwrap());
    if lo > hi || min < lo || max > hi {
        errors.push(TripletError::NotContained { part, lo, hi });
    }
    for endpoint in [lo, hi] {
        if !set.contains(endpoint) {
            errors.push(TripletError::MissingEndpoint { part, endpoint, lo, hi });
        }
    }
}

fn check_balanced(pair: BalancedPair, x: &DegreeSet, y: &DegreeSet, lo: i64, n: i64, errors: &mut Vec<TripletError>) {
    // Only meaningful when both sets sit inside [lo, n]; containment failures
    // are reported separately.
    if let (Ok(x), Ok(y)) = (x.over(lo, n), y.over(lo, n)) {
        if !is_balanced(&x, &y).expect("same interval") {
            errors.push(TripletError::Unbalanced(pair));
        }
    }
}

/// `#([lo, hi] \ set)`, zero for an empty interval.
fn missing_in(set: &DegreeSet, lo: i64, hi: i64) -> usize {
    (lo..=hi).filter(|&x| !set.contains(x)).count()
}

/// Evaluates every clause of the homology-triplet definition and returns all
/// failures. An empty result means the triplet is valid.
pub fn diagnose_triplet(n: usize, b: &[i64], h: &[i64], c: &[i64]) -> Vec<TripletError> {
    if n == 0 {
        return vec![TripletError::ZeroN];
    }
    let ni = n as i64;
    let sets: Vec<_> = [(Part::B, b), (Part::H, h), (Part::C, c)]
        .into_iter()
        .map(|(part, m)| part_set(part, ni, m))
        .collect();
    let errors: Vec<_> = sets.iter().filter_map(|s| s.as_ref().err().cloned()).collect();
    if !errors.is_empty() {
        return errors;
    }
    let [b_set, h_set, c_set] = <[_; 3]>::try_from(sets.into_iter().map(Result::unwrap).collect::<Vec<_>>())
        .expect("three parts");
    let mut errors = Vec::new();

    let h_min = h_set.first().unwrap();
    let c_min = c_set.first().unwrap();
    let codim = ni - h_set.last().unwrap();

    check_interval(Part::B, &b_set, h_min, ni - c_min, &mut errors);
    check_interval(Part::H, &h_set, h_min, ni - codim, &mut errors);
    check_interval(Part::C, &c_set, c_min, ni - codim, &mut errors);

    let i_b = missing_in(&b_set, h_min, ni - c_min);
    let s_h = missing_in(&h_set, h_min, ni - codim);
    let s_c = missing_in(&c_set, c_min, ni - codim);
    let sum = codim + h_min + c_min + (i_b + s_h + s_c) as i64;
    if sum != ni {
        errors.push(TripletError::CountEquation { n, sum });
    }

    let refl_b = reflect(&b_set, ni).expect("B inside [0,n]");
    let refl_h = reflect(&h_set, ni).expect("H inside [0,n]");
    let refl_c = reflect(&c_set, ni).expect("C inside [0,n]");
    check_balanced(BalancedPair::BH, &b_set, &h_set, h_min, ni, &mut errors);
    check_balanced(BalancedPair::ReflBC, &refl_b, &c_set, c_min, ni, &mut errors);
    check_balanced(BalancedPair::ReflHReflC, &refl_h, &refl_c, codim, ni, &mut errors);
    errors
}

/// Checks every clause of the homology-triplet definition and returns the
/// triplet with its derived invariants, or the first failing clause.
pub fn validate_triplet(n: usize, b: &[i64], h: &[i64], c: &[i64]) -> Result<HomologyTriplet, TripletError> {
    if let Some(e) = diagnose_triplet(n, b, h, c).into_iter().next() {
        return Err(e);
    }
    let ni = n as i64;
    let b_set = part_set(Part::B, ni, b)?;
    let h_set = part_set(Part::H, ni, h)?;
    let c_set = part_set(Part::C, ni, c)?;
    let h_min = h_set.first().unwrap();
    let c_min = c_set.first().unwrap();
    let codim = ni - h_set.last().unwrap();
    let t = HomologyTriplet {
        n,
        internal_nondegrees: missing_in(&b_set, h_min, ni - c_min),
        homology_span: missing_in(&h_set, h_min, ni - codim),
        cohomology_span: missing_in(&c_set, c_min, ni - codim),
        b_set,
        h_set,
        c_set,
        codim: codim as usize,
        h: h_min as usize,
        c: c_min as usize,
    };
    assert_eq!(
        t.homology_span + t.cohomology_span + t.codim,
        t.b_set.len() - 1,
        "s(H) + s(C) + b = |B| - 1 violated for {t}"
    );
    assert_eq!(t.n - t.c + 1 - t.h, t.codim + t.nondegree_number() + 1);
    Ok(t)
}

impl HomologyTriplet {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Betti degrees `B`.
    pub fn betti_degrees(&self) -> &DegreeSet {
        &self.b_set
    }

    /// Homology degrees `H`.
    pub fn homology_degrees(&self) -> &DegreeSet {
        &self.h_set
    }

    /// Cohomology degrees `C`.
    pub fn cohomology_degrees(&self) -> &DegreeSet {
        &self.c_set
    }

    /// `b = n - max H`, the common codimension of `H` and `C`.
    pub fn codim(&self) -> usize {
        self.codim
    }

    /// `h = min H = min B`.
    pub fn h(&self) -> usize {
        self.h
    }

    /// `c = min C`.
    pub fn c(&self) -> usize {
        self.c
    }

    /// `i(B)`: nondegrees of `B` inside `[h, n - c]`.
    pub fn internal_nondegrees(&self) -> usize {
        self.internal_nondegrees
    }

    /// `s(H)`: nondegrees of `H` inside `[h, n - b]`.
    pub fn homology_span(&self) -> usize {
        self.homology_span
    }

    /// `s(C)`: nondegrees of `C` inside `[c, n - b]`.
    pub fn cohomology_span(&self) -> usize {
        self.cohomology_span
    }

    /// `e = i(B) + s(H) + s(C)`.
    pub fn nondegree_number(&self) -> usize {
        self.internal_nondegrees + self.homology_span + self.cohomology_span
    }

    /// Strands of `H` inside `[h, n - b]`.
    pub fn homology_strands(&self) -> StrandDecomposition {
        self.h_set
            .over(self.h as i64, (self.n - self.codim) as i64)
            .expect("validated")
            .strands()
    }

    /// Strands of `C` inside `[c, n - b]`.
    pub fn cohomology_strands(&self) -> StrandDecomposition {
        self.c_set
            .over(self.c as i64, (self.n - self.codim) as i64)
            .expect("validated")
            .strands()
    }

    fn parts(&self) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
        (self.b_set.members().to_vec(), self.h_set.members().to_vec(), self.c_set.members().to_vec())
    }

    fn refl(&self, set: &DegreeSet) -> Vec<i64> {
        reflect(set, self.n as i64).expect("inside [0,n]").members().to_vec()
    }

    pub fn record(&self) -> TripletRecord {
        let (b, h, c) = self.parts();
        TripletRecord { n: self.n, b, h, c }
    }
}

impl fmt::Display for HomologyTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} B={} H={} C={}", self.n, self.b_set, self.h_set, self.c_set)
    }
}

fn derived(op: &'static str, n: usize, b: &[i64], h: &[i64], c: &[i64]) -> Result<HomologyTriplet, TripletError> {
    validate_triplet(n, b, h, c).map_err(|e| TripletError::Derived { op, source: Box::new(e) })
}

/// `(refl H, refl C, B)`: the degree triplet rotates from `(B, refl H, C)` to
/// `(refl H, C, B)`.
pub fn rotate(t: &HomologyTriplet) -> Result<HomologyTriplet, TripletError> {
    derived("rotate", t.n, &t.refl(&t.h_set), &t.refl(&t.c_set), t.b_set.members())
}

/// The dual homology triplet `(refl B, C, H)`.
pub fn dual(t: &HomologyTriplet) -> Result<HomologyTriplet, TripletError> {
    derived("dual", t.n, &t.refl(&t.b_set), t.c_set.members(), t.h_set.members())
}

/// `(B, refl H, C)`: degree sequences of the three pure squarefree complexes.
pub fn to_degree_triplet(t: &HomologyTriplet) -> (DegreeSet, DegreeSet, DegreeSet) {
    let ni = t.n as i64;
    (
        t.b_set.clone(),
        reflect(&t.h_set, ni).expect("inside [0,n]"),
        t.c_set.clone(),
    )
}

/// All homology triplets for `n`, bounded by [`DEFAULT_MAX_N`].
pub fn enumerate_triplets(n: usize) -> Result<Vec<HomologyTriplet>, TripletError> {
    enumerate_triplets_bounded(n, DEFAULT_MAX_N)
}

/// Subsets of `[lo, hi]` containing both endpoints, as sorted vectors, with
/// their number of nondegrees.
fn anchored_subsets(lo: i64, hi: i64) -> Vec<(Vec<i64>, usize)> {
    if lo == hi {
        return vec![(vec![lo], 0)];
    }
    let inner = (hi - lo - 1) as u32;
    (0u64..1 << inner)
        .map(|mask| {
            let mut v = vec![lo];
            v.extend((0..inner).filter(|k| mask >> k & 1 == 1).map(|k| lo + 1 + k as i64));
            v.push(hi);
            (v, (inner - mask.count_ones()) as usize)
        })
        .collect()
}

/// All homology triplets for `n`, refusing `n > max`. Output is sorted
/// lexicographically by `(B, H, C)`.
pub fn enumerate_triplets_bounded(n: usize, max: usize) -> Result<Vec<HomologyTriplet>, TripletError> {
    if n == 0 {
        return Err(TripletError::ZeroN);
    }
    if n > max {
        return Err(TripletError::TooLarge { n, max });
    }
    let ni = n as i64;
    let mut shapes = Vec::new();
    for h in 0..=ni {
        for c in 0..=ni - h {
            for b in 0..=(ni - h).min(ni - c) {
                shapes.push((h, c, b));
            }
        }
    }
    let mut found: Vec<HomologyTriplet> = shapes
        .into_par_iter()
        .flat_map_iter(|(h, c, b)| {
            let e = (ni - h - c - b) as usize;
            let bs = anchored_subsets(h, ni - c);
            let hs = anchored_subsets(h, ni - b);
            let cs = anchored_subsets(c, ni - b);
            let mut out = Vec::new();
            for (bv, ib) in &bs {
                for (hv, sh) in &hs {
                    if ib + sh > e {
                        continue;
                    }
                    let bset = DegreeSet::new(h, ni, bv.iter().copied()).unwrap();
                    let hset = DegreeSet::new(h, ni, hv.iter().copied()).unwrap();
                    if !is_balanced(&bset, &hset).unwrap() {
                        continue;
                    }
                    for (cv, sc) in &cs {
                        if ib + sh + sc != e {
                            continue;
                        }
                        if let Ok(t) = validate_triplet(n, bv, hv, cv) {
                            out.push(t);
                        }
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by(|x, y| x.record().key().cmp(&y.record().key()));
    found.dedup();
    Ok(found)
}

/// Line-oriented JSON form `{"n":…, "B":[…], "H":[…], "C":[…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletRecord {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<i64>,
    #[serde(rename = "H")]
    pub h: Vec<i64>,
    #[serde(rename = "C")]
    pub c: Vec<i64>,
}

impl TripletRecord {
    pub fn validate(&self) -> Result<HomologyTriplet, TripletError> {
        validate_triplet(self.n, &self.b, &self.h, &self.c)
    }

    fn key(&self) -> (&[i64], &[i64], &[i64]) {
        (&self.b, &self.h, &self.c)
    }
}

impl fmt::Display for TripletRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).expect("serializable"))
    }
}
