//! Dense matrices over exact rationals: elimination, rank, linear solves,
//! row/column multiplication, and the Ryser permanent.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{BigRational, One, Signed, Zero};

use crate::error::{check_guard, Error, Result};

pub type Rat = BigRational;

pub use num::bigint::BigInt as Int;

pub fn rat_int(i: i64) -> Rat {
    Rat::from_integer(BigInt::from(i))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a plain decimal like `-0.25` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |s: &str| Error::Parse(format!("cannot parse rational from {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| bad(s))?;
        let den: BigInt = q.trim().parse().map_err(|_| bad(s))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') {
            -1
        } else {
            1
        };
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad(s))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(s));
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad(s))?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = int_part.abs() * &den + frac_num;
        return Ok(Rat::new(magnitude * BigInt::from(sign), den));
    }
    let num: BigInt = s.parse().map_err(|_| bad(s))?;
    Ok(Rat::from_integer(num))
}

pub fn factorial(k: usize) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= BigInt::from(i);
    }
    f
}

/// Ryser permanents past this size are impractical with exact arithmetic.
pub const PERMANENT_GUARD: u64 = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, y) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc += a * y;
                    }
                }
                acc
            })
            .collect())
    }

    /// The multiplied matrix: row `i` repeated `alpha[i]` times, then column
    /// `j` repeated `beta[j]` times. Zero multiplicities drop the line.
    pub fn multiplied(&self, alpha: &[usize], beta: &[usize]) -> Result<ExactMatrix> {
        if alpha.len() != self.rows || beta.len() != self.cols {
            return Err(Error::Dimension(format!(
                "multiplicities ({}, {}) against a {}x{} matrix",
                alpha.len(),
                beta.len(),
                self.rows,
                self.cols
            )));
        }
        let out_rows: usize = alpha.iter().sum();
        let out_cols: usize = beta.iter().sum();
        let mut out = ExactMatrix::zero(out_rows, out_cols);
        let mut oi = 0;
        for (i, &ai) in alpha.iter().enumerate() {
            for _ in 0..ai {
                let mut oj = 0;
                for (j, &bj) in beta.iter().enumerate() {
                    for _ in 0..bj {
                        out.set(oi, oj, self.get(i, j).clone());
                        oj += 1;
                    }
                }
                oi += 1;
            }
        }
        Ok(out)
    }

    /// Rank over the rationals by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..c {
            let pivot = (rank..r).find(|&i| !a[i * c + col].is_zero());
            let Some(p) = pivot else { continue };
            a.swap_chunks(p, rank, c);
            let inv = a[rank * c + col].clone();
            for i in (rank + 1)..r {
                let factor = &a[i * c + col] / &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..c {
                    let t = &a[rank * c + j] * &factor;
                    a[i * c + j] -= t;
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    /// Solves `A x = rhs` for square `A`; `None` when singular.
    pub fn solve(&self, rhs: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if self.rows != self.cols {
            return Err(Error::InvalidMatrix(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if rhs.len() != self.rows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i * n + col].is_zero()) else {
                return Ok(None);
            };
            a.swap_chunks(p, col, n);
            b.swap(p, col);
            let inv = a[col * n + col].clone();
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = &a[i * n + col] / &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let t = &a[col * n + j] * &factor;
                    a[i * n + j] -= t;
                }
                let t = &b[col] * &factor;
                b[i] -= t;
            }
        }
        Ok(Some((0..n).map(|i| &b[i] / &a[i * n + i]).collect()))
    }

    /// A deterministic nonzero kernel vector, or `None` for full column rank.
    /// The first free column gets value 1, the remaining free columns 0.
    pub fn nullspace_vector(&self) -> Option<Vec<Rat>> {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; c];
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !a[i * c + col].is_zero()) else {
                continue;
            };
            a.swap_chunks(p, rank, c);
            let inv = a[rank * c + col].clone();
            for i in 0..r {
                if i == rank {
                    continue;
                }
                let factor = &a[i * c + col] / &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..c {
                    let t = &a[rank * c + j] * &factor;
                    a[i * c + j] -= t;
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
            if rank == r {
                break;
            }
        }
        let free = (0..c).find(|&j| pivot_of_col[j].is_none())?;
        let mut x = vec![Rat::zero(); c];
        x[free] = Rat::one();
        for j in 0..c {
            if let Some(pr) = pivot_of_col[j] {
                let coeff = &a[pr * c + free] / &a[pr * c + j];
                x[j] = -coeff;
            }
        }
        Some(x)
    }

    /// The permanent by Ryser's formula with Gray-code row-sum updates.
    /// Columns are rescaled to integers first so the inner loop stays in
    /// machine or big integers; the exact rational value is restored at the
    /// end. Guarded at 22 rows.
    pub fn permanent(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::InvalidMatrix(format!(
                "permanent needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        check_guard("permanent size", n as u64, PERMANENT_GUARD)?;
        if n == 0 {
            return Ok(Rat::one());
        }
        let mut col_scale = vec![BigInt::one(); n];
        for (j, scale) in col_scale.iter_mut().enumerate() {
            for i in 0..n {
                *scale = scale.lcm(self.get(i, j).denom());
            }
        }
        let scaled: Vec<BigInt> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let v = self.get(i, j);
                v.numer() * &col_scale[j] / v.denom()
            })
            .collect();
        let perm_int = match ryser_i128(&scaled, n) {
            Some(v) => BigInt::from(v),
            None => ryser_bigint(&scaled, n),
        };
        let denom: BigInt = col_scale.into_iter().product();
        Ok(Rat::new(perm_int, denom))
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<Rat> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for j in 0..width {
            self.swap(a * width + j, b * width + j);
        }
    }
}

/// Machine-integer Ryser; bails out on any overflow.
fn ryser_i128(a: &[BigInt], n: usize) -> Option<i128> {
    let small: Option<Vec<i128>> = a
        .iter()
        .map(|x| i64::try_from(x).ok().map(i128::from))
        .collect();
    let small = small?;
    let mut sums = vec![0i128; n];
    let mut total: i128 = 0;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let g = k ^ (k >> 1);
        let bit = g ^ gray;
        let j = bit.trailing_zeros() as usize;
        if g & bit != 0 {
            for i in 0..n {
                sums[i] = sums[i].checked_add(small[i * n + j])?;
            }
        } else {
            for i in 0..n {
                sums[i] = sums[i].checked_sub(small[i * n + j])?;
            }
        }
        gray = g;
        let mut prod: i128 = 1;
        for &s in &sums {
            prod = prod.checked_mul(s)?;
        }
        if (n as u32).wrapping_sub(g.count_ones()) % 2 == 0 {
            total = total.checked_add(prod)?;
        } else {
            total = total.checked_sub(prod)?;
        }
    }
    Some(total)
}

fn ryser_bigint(a: &[BigInt], n: usize) -> BigInt {
    let mut sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let g = k ^ (k >> 1);
        let bit = g ^ gray;
        let j = bit.trailing_zeros() as usize;
        if g & bit != 0 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += &a[i * n + j];
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= &a[i * n + j];
            }
        }
        gray = g;
        let mut prod = BigInt::one();
        for s in &sums {
            prod *= s;
        }
        if (n as u32).wrapping_sub(g.count_ones()) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3", "-7", "2/4", "-9/6", "0.25", "-1.5"] {
            let r = parse_rat(s).unwrap();
            let r2 = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, r2);
        }
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("0.1").unwrap(), rat(1, 10));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn permanent_of_small_matrices() {
        let id =
            ExactMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(id.permanent().unwrap(), rat_int(1));
        let ones =
            ExactMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(ones.permanent().unwrap(), rat_int(6));
        let m = ExactMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.permanent().unwrap(), rat_int(10));
    }

    #[test]
    fn permanent_of_empty_matrix_is_one() {
        let empty = ExactMatrix::zero(0, 0);
        assert_eq!(empty.permanent().unwrap(), rat_int(1));
    }

    #[test]
    fn permanent_vanishes_on_zero_row() {
        let m = ExactMatrix::from_i64_rows(&[vec![0, 0], vec![5, -3]]).unwrap();
        assert_eq!(m.permanent().unwrap(), rat_int(0));
    }

    #[test]
    fn permanent_matches_naive_expansion_on_rationals() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(2, 1), rat(-1, 6)],
        ])
        .unwrap();
        // 1/2 * -1/6 + 1/3 * 2 = -1/12 + 2/3 = 7/12
        assert_eq!(m.permanent().unwrap(), rat(7, 12));
    }

    #[test]
    fn rank_and_solve() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let inv = ExactMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let sol = inv.solve(&[rat_int(3), rat_int(2)]).unwrap().unwrap();
        assert_eq!(sol, vec![rat_int(1), rat_int(1)]);
        let singular = ExactMatrix::from_i64_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(singular.solve(&[rat_int(0), rat_int(1)]).unwrap().is_none());
    }

    #[test]
    fn nullspace_vector_is_in_the_kernel() {
        let m =
            ExactMatrix::from_i64_rows(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).unwrap();
        let k = m.nullspace_vector().unwrap();
        assert!(k.iter().any(|x| !x.is_zero()));
        let prod = m.mul_vec(&k).unwrap();
        assert!(prod.iter().all(|x| x.is_zero()));
        let full = ExactMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(full.nullspace_vector().is_none());
    }

    #[test]
    fn multiplied_matrix_identity_and_duplication() {
        let a = ExactMatrix::from_i64_rows(&[vec![1, 2]]).unwrap();
        assert_eq!(a.multiplied(&[1], &[1, 1]).unwrap(), a);
        let dup = a.multiplied(&[2], &[1, 1]).unwrap();
        assert_eq!(
            dup,
            ExactMatrix::from_i64_rows(&[vec![1, 2], vec![1, 2]]).unwrap()
        );
        let wide = a.multiplied(&[1], &[2, 0]).unwrap();
        assert_eq!(wide, ExactMatrix::from_i64_rows(&[vec![1, 1]]).unwrap());
    }

    proptest! {
        #[test]
        fn transpose_of_multiplied_commutes(
            entries in proptest::collection::vec(-3i64..=3, 6),
            alpha in proptest::collection::vec(0usize..3, 2),
            beta in proptest::collection::vec(0usize..3, 3),
        ) {
            let a = ExactMatrix::from_i64_rows(&[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
            ]).unwrap();
            let lhs = a.multiplied(&alpha, &beta).unwrap().transpose();
            let rhs = a.transpose().multiplied(&beta, &alpha).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn permanent_is_permutation_invariant(
            entries in proptest::collection::vec(-3i64..=3, 9),
            swap_rows in 0usize..3,
            swap_cols in 0usize..3,
        ) {
            let mut rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let base = ExactMatrix::from_i64_rows(&rows).unwrap();
            rows.swap(0, swap_rows);
            for row in rows.iter_mut() {
                row.swap(0, swap_cols);
            }
            let permuted = ExactMatrix::from_i64_rows(&rows).unwrap();
            prop_assert_eq!(base.permanent().unwrap(), permuted.permanent().unwrap());
        }
    }
}
