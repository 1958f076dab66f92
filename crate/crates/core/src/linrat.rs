//! Exact rational scalars, dense rational matrices and nullspace extraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `p / q` as a canonical rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor from small integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `self * y`.
    pub fn mul_vec(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                y.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(y)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the ordered pivot columns.
///
/// Elimination runs fraction-free on integer rows (each row is cleared of
/// denominators first and kept primitive), and only the final normalisation
/// divides through by the pivot. The result is identical to textbook
/// rational Gauss-Jordan since the RREF of a matrix is unique.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let cols = m.cols;
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|r| integer_row(m.row(r))).collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows.len() {
            break;
        }
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let pivot_row = rows[lead].clone();
        let pv = &pivot_row[c];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[c].is_zero() {
                continue;
            }
            // row := pv*row - row[c]*pivot_row, scaled by the gcd of the two multipliers
            let g = pv.gcd(&row[c]);
            let mul_row = pv / &g;
            let mul_piv = &row[c] / &g;
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if p.is_zero() {
                    if !x.is_zero() {
                        *x *= &mul_row;
                    }
                } else {
                    *x = &*x * &mul_row - &mul_piv * p;
                }
            }
            make_primitive(row);
        }
        pivots.push(c);
        lead += 1;
    }

    let mut out = RatMatrix::zeros(m.rows, cols);
    for (r, row) in rows.iter().enumerate() {
        match pivots.get(r) {
            Some(&pc) => {
                let pv = &row[pc];
                for (c, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out.set(r, c, Rational::new(x.clone(), pv.clone()));
                    }
                }
            }
            None => debug_assert!(row.iter().all(Zero::is_zero)),
        }
    }
    (out, pivots)
}

/// Plain rational Gauss-Jordan. Kept as an independent route for tests.
pub fn rref_rational(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..a.cols {
        if lead == a.rows {
            break;
        }
        let Some(p) = (lead..a.rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        a.swap_rows(lead, p);
        let inv = a.get(lead, c).recip();
        for cc in 0..a.cols {
            let v = a.get(lead, cc) * &inv;
            a.set(lead, cc, v);
        }
        for r in 0..a.rows {
            if r == lead || a.get(r, c).is_zero() {
                continue;
            }
            let factor = a.get(r, c).clone();
            for cc in 0..a.cols {
                let v = a.get(r, cc) - &factor * a.get(lead, cc);
                a.set(r, cc, v);
            }
        }
        pivots.push(c);
        lead += 1;
    }
    (a, pivots)
}

/// A nonzero vector in the kernel of `m`, or `None` when the kernel is trivial.
///
/// The lowest-indexed free column is set to 1, the other free columns to 0,
/// and pivot entries are read off the RREF. The vector is then scaled by
/// -1 if needed so that its first nonzero entry is positive.
pub fn kernel_vector(m: &RatMatrix) -> Option<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let free = (0..m.cols).find(|c| !pivots.contains(c))?;
    let mut y = vec![Rational::zero(); m.cols];
    y[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        y[pc] = -r.get(row, free);
    }
    if y.iter()
        .find(|v| !v.is_zero())
        .is_some_and(Signed::is_negative)
    {
        for v in &mut y {
            *v = -&*v;
        }
    }
    Some(y)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g > BigInt::one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v /= &g;
            }
        }
    }
}
