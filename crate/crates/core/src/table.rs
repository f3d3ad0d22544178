//! Hypercohomology tables. Cell `(j, p)` holds `dim H^j(E(p - j))`: rows are
//! cohomological degrees, columns are Tate positions.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::betti::{BettiDiagram, BettiEntry};
use crate::hilbert::{chi_family, AlphaVector, ChiFamily, SolveError};
use crate::json::BigNum;
use crate::linalg::{binomial, Rational};
use crate::triplet::HomologyTriplet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("window [{lo},{hi}] must contain [{need_lo},0]")]
    Window { lo: i64, hi: i64, need_lo: i64 },
    #[error("negative entry {value} at row {row}, column {col}")]
    Negative { row: i64, col: i64, value: BigInt },
    #[error("non-integral entry {value} at row {row}, column {col}")]
    NonIntegral { row: i64, col: i64, value: Rational },
    #[error("two regions write row {row}, column {col}")]
    Overlap { row: i64, col: i64 },
    #[error("Euler characteristic at twist {t} is {got}, expected {expected}")]
    Euler { t: i64, got: BigInt, expected: Rational },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Any source of cohomology dimensions `dim H^j(F(t))`.
pub trait Cohomology {
    fn dim(&self, j: i64, t: i64) -> BigInt;
    /// Rows that may be nonzero.
    fn rows(&self) -> RangeInclusive<i64>;
}

/// Adapts a closure `(j, t) -> dim` with a known row range.
pub struct FnCohomology<F> {
    pub rows: RangeInclusive<i64>,
    pub f: F,
}

impl<F: Fn(i64, i64) -> BigInt> Cohomology for FnCohomology<F> {
    fn dim(&self, j: i64, t: i64) -> BigInt {
        (self.f)(j, t)
    }

    fn rows(&self) -> RangeInclusive<i64> {
        self.rows.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HyperTable {
    n: usize,
    window: (i64, i64),
    entries: BTreeMap<(i64, i64), BigInt>,
}

impl HyperTable {
    pub fn new(n: usize, window: (i64, i64)) -> Self {
        HyperTable { n, window, entries: BTreeMap::new() }
    }

    /// Builds a table from `(row, col, dim)` cells; zero cells are dropped.
    pub fn from_cells(n: usize, window: (i64, i64), cells: impl IntoIterator<Item = (i64, i64, BigInt)>) -> Self {
        let mut t = HyperTable::new(n, window);
        for (j, p, v) in cells {
            if !v.is_zero() {
                t.entries.insert((j, p), v);
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn get(&self, j: i64, p: i64) -> BigInt {
        self.entries.get(&(j, p)).cloned().unwrap_or_default()
    }

    /// Nonzero cells as `((row, col), dim)`, sorted by row then column.
    pub fn entries(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row `j` across the window.
    pub fn row(&self, j: i64) -> Vec<BigInt> {
        (self.window.0..=self.window.1).map(|p| self.get(j, p)).collect()
    }

    fn insert(&mut self, j: i64, p: i64, v: BigInt) -> Result<(), TableError> {
        if v.is_negative() {
            return Err(TableError::Negative { row: j, col: p, value: v });
        }
        if v.is_zero() {
            return Ok(());
        }
        if self.entries.insert((j, p), v).is_some() {
            return Err(TableError::Overlap { row: j, col: p });
        }
        Ok(())
    }

    /// Restriction to columns `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> HyperTable {
        HyperTable::from_cells(
            self.n,
            (lo, hi),
            self.entries.iter().filter(|((_, p), _)| lo <= *p && *p <= hi).map(|(&(j, p), v)| (j, p, v.clone())),
        )
    }

    /// Relabels `(j, p) ↦ (row_shift - j, col_shift - p)`, sending twist `t` to
    /// `col_shift - row_shift - t`.
    pub fn point_reflect(&self, row_shift: i64, col_shift: i64) -> HyperTable {
        HyperTable::from_cells(
            self.n,
            (col_shift - self.window.1, col_shift - self.window.0),
            self.entries.iter().map(|(&(j, p), v)| (row_shift - j, col_shift - p, v.clone())),
        )
    }

    /// Text grid: rows descending with `| j` labels, `·` for zero, column labels `| d\i`.
    pub fn render(&self) -> String {
        let cols: Vec<i64> = (self.window.0..=self.window.1).collect();
        let rows: Vec<i64> = match (self.entries.keys().map(|k| k.0).min(), self.entries.keys().map(|k| k.0).max()) {
            (Some(lo), Some(hi)) => (lo..=hi).rev().collect(),
            _ => Vec::new(),
        };
        let cell = |j: i64, p: i64| match self.entries.get(&(j, p)) {
            Some(v) => v.to_string(),
            None => "·".to_string(),
        };
        let mut w = cols.iter().map(|p| p.to_string().chars().count()).max().unwrap_or(1);
        for ((_, _), v) in &self.entries {
            w = w.max(v.to_string().len());
        }
        let mut out = String::new();
        let mut width = 0;
        for &j in &rows {
            let mut line = String::new();
            for &p in &cols {
                let _ = write!(line, " {:>w$}", cell(j, p));
            }
            let _ = write!(line, " | {j}");
            width = width.max(line.chars().count());
            out.push_str(&line);
            out.push('\n');
        }
        let mut footer = String::new();
        for &p in &cols {
            let _ = write!(footer, " {p:>w$}");
        }
        footer.push_str(" | d\\i");
        width = width.max(footer.chars().count());
        out.push_str(&"-".repeat(width));
        out.push('\n');
        out.push_str(&footer);
        out.push('\n');
        out
    }
}

impl fmt::Display for HyperTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Cohomology for HyperTable {
    fn dim(&self, j: i64, t: i64) -> BigInt {
        self.get(j, j + t)
    }

    fn rows(&self) -> RangeInclusive<i64> {
        let lo = self.entries.keys().map(|k| k.0).min().unwrap_or(0);
        let hi = self.entries.keys().map(|k| k.0).max().unwrap_or(-1);
        lo..=hi
    }
}

struct Cell<'a> {
    row: i64,
    col: i64,
    dim: &'a BigInt,
}

impl Serialize for Cell<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cell", 3)?;
        st.serialize_field("row", &self.row)?;
        st.serialize_field("col", &self.col)?;
        st.serialize_field("dim", &BigNum(self.dim))?;
        st.end()
    }
}

impl Serialize for HyperTable {
    /// `{"window":[lo,hi],"entries":[{"row":j,"col":p,"dim":v}]}`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<Cell> = self.entries.iter().map(|(&(row, col), dim)| Cell { row, col, dim }).collect();
        let mut st = s.serialize_struct("HyperTable", 2)?;
        st.serialize_field("window", &[self.window.0, self.window.1])?;
        st.serialize_field("entries", &cells)?;
        st.end()
    }
}

/// `[-n-6, 5]`.
pub fn default_window(n: usize) -> (i64, i64) {
    (-(n as i64) - 6, 5)
}

fn integral(row: i64, col: i64, v: Rational) -> Result<BigInt, TableError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(TableError::NonIntegral { row, col, value: v })
    }
}

/// Column `-q` carries `(-1)^q alpha_{d_q}` at row `d_q - q`.
pub fn corner_table(t: &HomologyTriplet, alpha: &AlphaVector) -> HyperTable {
    let len = alpha.support().len() as i64;
    let mut table = HyperTable::new(t.n(), (1 - len, 0));
    for (q, (&d, a)) in alpha.support().iter().zip(alpha.values()).enumerate() {
        let v = if q % 2 == 0 { a.clone() } else { -a };
        let q = q as i64;
        table.entries.insert((d - q, -q), v);
    }
    table
}

/// Rows `-s(H) ..= n + 1 - |B| + s(C)`.
pub fn table_rows(t: &HomologyTriplet) -> RangeInclusive<i64> {
    let len = t.betti_degrees().len() as i64;
    -(t.homology_span() as i64)..=t.n() as i64 + 1 - len + t.cohomology_span() as i64
}

/// Assembles the corner, the positive twists from `chi` and the twists
/// `t <= -n-1` from `psi`, then checks the Euler characteristic on every twist
/// whose cells all lie in the window.
pub fn full_table_with(
    t: &HomologyTriplet,
    alpha: &AlphaVector,
    family: &ChiFamily,
    window: (i64, i64),
) -> Result<HyperTable, TableError> {
    let (lo, hi) = window;
    let n = t.n() as i64;
    let len = alpha.support().len() as i64;
    if lo > 1 - len || hi < 0 {
        return Err(TableError::Window { lo, hi, need_lo: 1 - len });
    }
    let mut table = HyperTable::new(t.n(), window);

    for ((j, p), v) in corner_table(t, alpha).entries {
        table.insert(j, p, v)?;
    }
    for (q, chi) in family.chi.iter().enumerate() {
        let q = q as i64;
        let twists = (1.max(lo + q))..=(hi + q);
        for (tw, v) in twists.clone().zip(chi.values_at(twists)) {
            let (j, p) = (-q, tw - q);
            table.insert(j, p, integral(j, p, v)?)?;
        }
    }
    for (q, psi) in family.psi.iter().enumerate() {
        let j = n + 1 - len + q as i64;
        let twists = (lo - j)..=(-n - 1).min(hi - j);
        for (tw, v) in twists.clone().zip(psi.values_at(twists.map(|tw| -n - tw))) {
            let p = j + tw;
            table.insert(j, p, integral(j, p, v)?)?;
        }
    }

    let poly = alpha.polynomial();
    let rows = table_rows(t);
    let twists = (lo - rows.start())..=(hi - rows.end());
    for (tw, expected) in twists.clone().zip(poly.values_at(twists)) {
        euler_check(&table, expected, tw, rows.clone())?;
    }
    Ok(table)
}

fn euler_check(table: &HyperTable, expected: Rational, tw: i64, rows: RangeInclusive<i64>) -> Result<(), TableError> {
    let got: BigInt = rows.map(|j| if j.rem_euclid(2) == 0 { table.dim(j, tw) } else { -table.dim(j, tw) }).sum();
    if Rational::from_integer(got.clone()) != expected {
        return Err(TableError::Euler { t: tw, got, expected });
    }
    Ok(())
}

pub fn full_table(t: &HomologyTriplet, alpha: &AlphaVector, window: (i64, i64)) -> Result<HyperTable, TableError> {
    let family = chi_family(t, alpha)?;
    full_table_with(t, alpha, &family, window)
}

/// One summand `∧^a V ⊗ S(-a)^mult` of a zip term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZipSummand {
    pub a: usize,
    pub twist: i64,
    pub mult: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZipTerm {
    pub p: i64,
    pub n: usize,
    pub summands: Vec<ZipSummand>,
}

impl ZipTerm {
    /// Rank of `∧^a V ⊗ S^mult` is `C(n, a) * mult`.
    pub fn ranks(&self) -> Vec<(i64, BigInt)> {
        self.summands
            .iter()
            .map(|s| (s.twist, binomial(self.n as i64, s.a) * &s.mult))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

/// `F_p = ⊕_a ∧^a V ⊗ S(-a) ⊗ H^{a-p}(F(-a))`, `0 <= a <= n`.
pub fn zip_terms(h: &dyn Cohomology, n: usize, p: i64) -> ZipTerm {
    let summands = (0..=n)
        .filter_map(|a| {
            let mult = h.dim(a as i64 - p, -(a as i64));
            (!mult.is_zero()).then_some(ZipSummand { a, twist: -(a as i64), mult })
        })
        .collect();
    ZipTerm { p, n, summands }
}

/// The zip complex over homological indices `0..=n` as a Betti diagram.
pub fn zip_complex(h: &dyn Cohomology, n: usize) -> BettiDiagram {
    BettiDiagram::new((0..=n as i64).flat_map(|p| {
        zip_terms(h, n, p)
            .ranks()
            .into_iter()
            .map(move |(twist, rank)| BettiEntry { index: p as usize, twist: -twist, rank })
    }))
}

/// Column `p` of the Tate resolution: `ê(j - p)^{dim H^j(F(p - j))}`, twists descending.
pub fn tate_terms(h: &dyn Cohomology, p: i64) -> Vec<(i64, BigInt)> {
    h.rows()
        .rev()
        .filter_map(|j| {
            let m = h.dim(j, p - j);
            (!m.is_zero()).then_some((j - p, m))
        })
        .collect()
}

/// `ê(4) ⊕ ê(3)^2`.
pub fn render_tate(terms: &[(i64, BigInt)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(tw, m)| if *m == BigInt::from(1) { format!("ê({tw})") } else { format!("ê({tw})^{m}") })
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{betti, solve_alpha};
    use crate::triplet::{dual, validate_triplet};

    fn t(n: usize, b: &[i64], h: &[i64], c: &[i64]) -> HomologyTriplet {
        validate_triplet(n, b, h, c).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sec64_table() -> HyperTable {
        let tr = t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4]);
        let a = solve_alpha(&tr).unwrap();
        full_table(&tr, &a, (-5, 3)).unwrap()
    }

    #[test]
    fn four_dimensional_example_rows() {
        let tab = sec64_table();
        assert_eq!(tab.row(2), big(&[87, 33, 8, 0, 0, 0, 0, 0, 0]));
        assert_eq!(tab.row(1), big(&[0; 9]));
        assert_eq!(tab.row(0), big(&[0, 0, 0, 2, 3, 3, 3, 3, 3]));
        assert_eq!(tab.row(-1), big(&[0, 0, 0, 0, 0, 1, 3, 6, 10]));
        assert_eq!(tab.row(-2), big(&[0, 0, 0, 0, 3, 15, 45, 105, 210]));
    }

    #[test]
    fn corner() {
        let tr = t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4]);
        let c = corner_table(&tr, &solve_alpha(&tr).unwrap());
        let cells: Vec<_> = c.entries().map(|(&k, v)| (k, v.clone())).collect();
        assert_eq!(cells, vec![((0, -2), 2.into()), ((0, -1), 3.into()), ((0, 0), 3.into())]);

        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let c = corner_table(&tr, &solve_alpha(&tr).unwrap());
        let cells: Vec<_> = c.entries().map(|(&k, v)| (k, v.clone())).collect();
        assert_eq!(cells, vec![((0, 0), 2.into()), ((1, -2), 1.into()), ((1, -1), 1.into())]);
    }

    #[test]
    fn three_dimensional_example_table() {
        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let a = solve_alpha(&tr).unwrap();
        let tab = full_table(&tr, &a, (-5, 3)).unwrap();
        assert_eq!(tab.row(2), big(&[10, 6, 3, 1, 0, 0, 0, 0, 0]));
        assert_eq!(tab.row(1), big(&[1, 1, 1, 1, 1, 0, 0, 0, 0]));
        assert_eq!(tab.row(0), big(&[0, 0, 0, 0, 0, 2, 5, 9, 14]));
        assert_eq!(tab.len(), 13);
    }

    #[test]
    fn dual_table_is_point_reflection() {
        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let td = dual(&tr).unwrap();
        let a = solve_alpha(&tr).unwrap();
        let ad = solve_alpha(&td).unwrap();
        let tab = full_table(&tr, &a, (-5, 3)).unwrap();
        let dtab = full_table(&td, &ad, (-5, 3)).unwrap();
        // Row 1 of the dual table is 14,9,5,2 on columns -5..-2.
        assert_eq!(dtab.row(1), big(&[14, 9, 5, 2, 0, 0, 0, 0, 0]));
        assert_eq!(dtab.row(0), big(&[0, 0, 0, 0, 1, 1, 1, 1, 1]));
        assert_eq!(dtab.row(-1), big(&[0, 0, 0, 0, 0, 1, 3, 6, 10]));
        assert_eq!(tab.point_reflect(1, -2), dtab);
    }

    #[test]
    fn zip_of_the_ideal_sheaf_table() {
        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let a = solve_alpha(&tr).unwrap();
        let tab = full_table(&tr, &a, (-8, 4)).unwrap();
        let z0 = zip_terms(&tab, 3, 0);
        assert_eq!(z0.summands, vec![ZipSummand { a: 0, twist: 0, mult: 2.into() }]);
        let z1 = zip_terms(&tab, 3, 1);
        assert_eq!(z1.summands, vec![ZipSummand { a: 2, twist: -2, mult: 1.into() }]);
        assert_eq!(zip_complex(&tab, 3).complex_string(), "S(-3) -> S(-2)^3 -> S^2");
        assert_eq!(zip_complex(&tab, 3), betti(&tr, &a).unwrap());
    }

    #[test]
    fn tate_columns() {
        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let a = solve_alpha(&tr).unwrap();
        let tab = full_table(&tr, &a, (-8, 4)).unwrap();
        assert_eq!(tate_terms(&tab, -2), vec![(4, 1.into()), (3, 1.into())]);
        assert_eq!(render_tate(&tate_terms(&tab, -2)), "ê(4) ⊕ ê(3)");
        let six = sec64_table();
        assert_eq!(tate_terms(&six, -3), vec![(5, 8.into())]);
        assert!(tate_terms(&HyperTable::new(2, (0, 0)), 0).is_empty());
    }

    #[test]
    fn point_source_zip() {
        let h = FnCohomology { rows: 0..=0, f: |j: i64, t: i64| BigInt::from((j == 0 && t == 0) as i64) };
        assert_eq!(zip_terms(&h, 3, 0).summands, vec![ZipSummand { a: 0, twist: 0, mult: 1.into() }]);
        for p in 1..=3 {
            assert!(zip_terms(&h, 3, p).is_zero());
        }
    }

    #[test]
    fn render_layout() {
        let tr = t(3, &[0, 2, 3], &[0, 1, 2], &[0, 2]);
        let a = solve_alpha(&tr).unwrap();
        let tab = full_table(&tr, &a, (-5, 3)).unwrap();
        let want = concat!(
            " 10  6  3  1  ·  ·  ·  ·  · | 2\n",
            "  1  1  1  1  1  ·  ·  ·  · | 1\n",
            "  ·  ·  ·  ·  ·  2  5  9 14 | 0\n",
            "---------------------------------\n",
            " -5 -4 -3 -2 -1  0  1  2  3 | d\\i\n",
        );
        assert_eq!(tab.render(), want);
        let empty = HyperTable::new(2, (-1, 1));
        assert_eq!(empty.render(), "---------------\n -1  0  1 | d\\i\n");
    }

    #[test]
    fn json_shape() {
        let tab = HyperTable::from_cells(2, (-1, 0), [(0, 0, BigInt::from(3))]);
        assert_eq!(serde_json::to_string(&tab).unwrap(), r#"{"window":[-1,0],"entries":[{"row":0,"col":0,"dim":3}]}"#);
    }

    #[test]
    fn narrow_window_rejected() {
        let tr = t(4, &[0, 1, 2], &[0, 2, 4], &[2, 3, 4]);
        let a = solve_alpha(&tr).unwrap();
        assert!(matches!(full_table(&tr, &a, (-1, 3)), Err(TableError::Window { .. })));
    }
}
