//! Betti diagrams of graded free complexes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::json::BigNums;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BettiEntry {
    pub index: usize,
    pub twist: i64,
    pub rank: BigInt,
}

/// Nonzero ranks `F_i = ⊕ S(-twist)^rank`, sorted by `(index, twist)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BettiDiagram {
    entries: Vec<BettiEntry>,
}

impl BettiDiagram {
    /// Merges repeated `(index, twist)` cells and drops zero ranks.
    pub fn new(entries: impl IntoIterator<Item = BettiEntry>) -> Self {
        let mut cells: BTreeMap<(usize, i64), BigInt> = BTreeMap::new();
        for e in entries {
            *cells.entry((e.index, e.twist)).or_default() += e.rank;
        }
        let entries = cells
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|((index, twist), rank)| BettiEntry { index, twist, rank })
            .collect();
        BettiDiagram { entries }
    }

    /// Pure diagram with `F_i = S(-twists[i])^ranks[i]`.
    pub fn pure(twists: &[i64], ranks: &[BigInt]) -> Self {
        assert_eq!(twists.len(), ranks.len());
        BettiDiagram::new(
            twists
                .iter()
                .zip(ranks)
                .enumerate()
                .map(|(index, (&twist, rank))| BettiEntry { index, twist, rank: rank.clone() }),
        )
    }

    pub fn from_ints(twists: &[i64], ranks: &[i64]) -> Self {
        let ranks: Vec<BigInt> = ranks.iter().map(|&r| BigInt::from(r)).collect();
        BettiDiagram::pure(twists, &ranks)
    }

    pub fn entries(&self) -> &[BettiEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One twist per homological index, twists strictly increasing with the index.
    pub fn is_pure(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].index < w[1].index && w[0].twist < w[1].twist)
    }

    /// Twists in entry order; for a pure diagram this is the degree sequence.
    pub fn twists(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.twist).collect()
    }

    pub fn ranks(&self) -> Vec<BigInt> {
        self.entries.iter().map(|e| e.rank.clone()).collect()
    }

    pub fn all_positive(&self) -> bool {
        self.entries.iter().all(|e| e.rank.is_positive())
    }

    /// `(twist, rank)` summed over homological indices, sorted by twist.
    pub fn twist_ranks(&self) -> Vec<(i64, BigInt)> {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.twist).or_default() += &e.rank;
        }
        m.into_iter().filter(|(_, r)| !r.is_zero()).collect()
    }

    /// Diagram of the complex with twists `d ↦ n - d`, homological order reversed.
    pub fn reversed(&self, n: i64) -> Self {
        let top = self.entries.iter().map(|e| e.index).max().unwrap_or(0);
        BettiDiagram::new(self.entries.iter().map(|e| BettiEntry {
            index: top - e.index,
            twist: n - e.twist,
            rank: e.rank.clone(),
        }))
    }

    /// `S(-3) -> S(-2)^3 -> S^2`, highest homological index first.
    pub fn complex_string(&self) -> String {
        let mut by_index: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for e in &self.entries {
            let module = match e.twist {
                0 => "S".to_string(),
                t => format!("S({})", -t),
            };
            let term = if e.rank == BigInt::from(1) { module } else { format!("{module}^{}", e.rank) };
            by_index.entry(e.index).or_default().push(term);
        }
        let terms: Vec<String> = by_index.into_values().rev().map(|v| v.join(" + ")).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" -> ")
        }
    }

    /// Grid with columns = homological index and rows = twist - index, `.` for zero.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "total:\n".into();
        }
        let cols = self.entries.iter().map(|e| e.index).max().unwrap() + 1;
        let rows: Vec<i64> = {
            let lo = self.entries.iter().map(|e| e.twist - e.index as i64).min().unwrap();
            let hi = self.entries.iter().map(|e| e.twist - e.index as i64).max().unwrap();
            (lo..=hi).collect()
        };
        let cell = |i: usize, r: i64| -> String {
            let v: BigInt = self
                .entries
                .iter()
                .filter(|e| e.index == i && e.twist - e.index as i64 == r)
                .map(|e| e.rank.clone())
                .sum();
            if v.is_zero() {
                ".".into()
            } else {
                v.to_string()
            }
        };
        let totals: Vec<String> = (0..cols)
            .map(|i| self.entries.iter().filter(|e| e.index == i).map(|e| e.rank.clone()).sum::<BigInt>().to_string())
            .collect();
        let grid: Vec<Vec<String>> = rows.iter().map(|&r| (0..cols).map(|i| cell(i, r)).collect()).collect();
        let widths: Vec<usize> = (0..cols)
            .map(|i| {
                let mut w = i.to_string().len().max(totals[i].len());
                for row in &grid {
                    w = w.max(row[i].len());
                }
                w
            })
            .collect();
        let labels: Vec<String> = rows.iter().map(|r| format!("{r}:")).collect();
        let lw = labels.iter().map(String::len).max().unwrap().max("total:".len());
        let mut out = String::new();
        let line = |out: &mut String, label: &str, cells: &[String]| {
            let _ = write!(out, "{label:>lw$}");
            for (c, w) in cells.iter().zip(&widths) {
                let _ = write!(out, " {c:>w$}");
            }
            out.push('\n');
        };
        let header: Vec<String> = (0..cols).map(|i| i.to_string()).collect();
        line(&mut out, "", &header);
        line(&mut out, "total:", &totals);
        for (label, row) in labels.iter().zip(&grid) {
            line(&mut out, label, row);
        }
        out
    }
}

impl fmt::Display for BettiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for BettiDiagram {
    /// `{"twists":[…],"ranks":[…]}` in entry order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let ranks = self.ranks();
        let mut st = s.serialize_struct("BettiDiagram", 2)?;
        st.serialize_field("twists", &self.twists())?;
        st.serialize_field("ranks", &BigNums(&ranks))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_grid() {
        let d = BettiDiagram::from_ints(&[0, 2, 3], &[2, 3, 1]);
        assert_eq!(d.render(), "       0 1 2\ntotal: 2 3 1\n    0: 2 . .\n    1: . 3 1\n");
        let wide = BettiDiagram::from_ints(&[0, 1, 2], &[3, 12, 12]);
        assert_eq!(wide.render(), "       0  1  2\ntotal: 3 12 12\n    0: 3 12 12\n");
    }

    #[test]
    fn complex_strings() {
        assert_eq!(BettiDiagram::from_ints(&[0, 2, 3], &[2, 3, 1]).complex_string(), "S(-3) -> S(-2)^3 -> S^2");
        assert_eq!(BettiDiagram::default().complex_string(), "0");
    }

    #[test]
    fn json_shape() {
        let d = BettiDiagram::from_ints(&[0, 1, 2], &[3, 12, 12]);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"twists":[0,1,2],"ranks":[3,12,12]}"#);
    }

    #[test]
    fn reversal() {
        let d = BettiDiagram::from_ints(&[0, 2, 4], &[3, 6, 3]);
        assert_eq!(d.reversed(4), d);
        let e = BettiDiagram::from_ints(&[0, 1, 2], &[3, 12, 12]);
        assert_eq!(e.reversed(4), BettiDiagram::from_ints(&[2, 3, 4], &[12, 12, 3]));
        assert!(e.is_pure());
    }

    #[test]
    fn merging_and_zero_ranks() {
        let d = BettiDiagram::new([
            BettiEntry { index: 0, twist: 1, rank: 2.into() },
            BettiEntry { index: 0, twist: 1, rank: 3.into() },
            BettiEntry { index: 1, twist: 2, rank: 0.into() },
        ]);
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.twist_ranks(), vec![(1, BigInt::from(5))]);
    }
}
