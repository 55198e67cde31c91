//! Sparse fraction-free Gaussian elimination over the integers.
//!
//! Rows are scaled to primitive integer vectors, reduced to echelon form
//! with cross-multiplication (`p * r_j - a * r_i`, then divided by the row
//! content) and back-substituted over the rationals. Columns are eliminated
//! in increasing index order; free variables are set to zero, so the
//! particular solution is deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::polyring::{denominator_lcm, Rational};

#[derive(Clone, Debug)]
struct Row {
    /// Sorted by column, no zeros.
    entries: Vec<(usize, BigInt)>,
    rhs: BigInt,
}

impl Row {
    fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    fn make_primitive(&mut self) {
        let mut g = self.rhs.abs();
        for (_, v) in &self.entries {
            g = g.gcd(v);
        }
        if !g.is_zero() && g != BigInt::from(1) {
            for (_, v) in &mut self.entries {
                *v /= &g;
            }
            self.rhs /= &g;
        }
    }

    /// `pivot_coef * self - self_coef * pivot`, eliminating the shared lead column.
    fn eliminate(&self, pivot: &Row) -> Row {
        let a = &pivot.entries[0].1;
        let b = &self.entries[0].1;
        let mut out = Vec::with_capacity(self.entries.len() + pivot.entries.len());
        let (mut i, mut j) = (1, 1);
        while i < self.entries.len() || j < pivot.entries.len() {
            let ci = self.entries.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let cj = pivot.entries.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            let (col, val) = if ci < cj {
                i += 1;
                (ci, a * &self.entries[i - 1].1)
            } else if cj < ci {
                j += 1;
                (cj, -(b * &pivot.entries[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (ci, a * &self.entries[i - 1].1 - b * &pivot.entries[j - 1].1)
            };
            if !val.is_zero() {
                out.push((col, val));
            }
        }
        let mut row = Row {
            entries: out,
            rhs: a * &self.rhs - b * &pivot.rhs,
        };
        row.make_primitive();
        row
    }
}

/// An inconsistent row was found during elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent;

/// Sparse linear system `A x = b` with rational entries.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    ncols: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        LinearSystem {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Adds the equation `sum coeffs[c] x_c = rhs`. Repeated columns are summed.
    pub fn push_row(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in coeffs {
            assert!(c < self.ncols, "column out of range");
            *merged.entry(c).or_insert_with(Rational::zero) += v;
        }
        merged.retain(|_, v| !v.is_zero());
        let scale = Rational::from_integer(denominator_lcm(merged.values().chain(std::iter::once(&rhs))));
        let entries = merged
            .into_iter()
            .map(|(c, v)| (c, (v * &scale).to_integer()))
            .collect();
        let mut row = Row {
            entries,
            rhs: (rhs * &scale).to_integer(),
        };
        row.make_primitive();
        self.rows.push(row);
    }

    /// Particular solution with free variables zero, or [`Inconsistent`].
    pub fn solve(&self) -> Result<Vec<Rational>, Inconsistent> {
        // bucket rows by leading column
        let mut buckets: BTreeMap<usize, Vec<Row>> = BTreeMap::new();
        for row in &self.rows {
            match row.lead() {
                Some(c) => buckets.entry(c).or_default().push(row.clone()),
                None if row.rhs.is_zero() => {}
                None => return Err(Inconsistent),
            }
        }
        let mut pivots: Vec<Row> = Vec::new();
        while let Some((_, mut bucket)) = buckets.pop_first() {
            // sparsest row as pivot; ties keep insertion order
            let best = (0..bucket.len())
                .min_by_key(|&i| bucket[i].entries.len())
                .expect("non-empty bucket");
            let pivot = bucket.swap_remove(best);
            for row in bucket {
                let reduced = row.eliminate(&pivot);
                match reduced.lead() {
                    Some(c) => buckets.entry(c).or_default().push(reduced),
                    None if reduced.rhs.is_zero() => {}
                    None => return Err(Inconsistent),
                }
            }
            pivots.push(pivot);
        }

        let mut x = vec![Rational::zero(); self.ncols];
        for row in pivots.iter().rev() {
            let (col, coef) = &row.entries[0];
            let mut acc = Rational::from_integer(row.rhs.clone());
            for (c, v) in &row.entries[1..] {
                if !x[*c].is_zero() {
                    acc -= &x[*c] * Rational::from_integer(v.clone());
                }
            }
            x[*col] = acc / Rational::from_integer(coef.clone());
        }
        Ok(x)
    }
}
