use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::complex::{ComplexMatrix, C64};
use super::svd::singular_values;
use crate::error::{Error, Result};
use crate::tol;

/// Dense real matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let c = rows[0].len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self {
            rows: rows.len(),
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix whose column `j` is `cols[j]`.
    pub fn from_columns(cols: &[Vec<f64>]) -> Self {
        let rows = cols[0].len();
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn minor_matrix(&self, i: usize, j: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                data.push(self[(r, c)]);
            }
        }
        Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| C64::new(self[(i, j)], 0.0))
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    /// First column at which no nonzero pivot was available.
    singular_at: Option<usize>,
}

fn lu_decompose(m: &RealMatrix) -> Lu {
    let n = m.rows;
    let mut lu = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut singular_at = None;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|r| (r, lu[r * n + k].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pmax == 0.0 {
            singular_at.get_or_insert(k);
            continue;
        }
        if p != k {
            for c in 0..n {
                lu.swap(k * n + c, p * n + c);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[k * n + k];
        for r in (k + 1)..n {
            let f = lu[r * n + k] / pivot;
            lu[r * n + k] = f;
            if f != 0.0 {
                for c in (k + 1)..n {
                    lu[r * n + c] -= f * lu[k * n + c];
                }
            }
        }
    }
    Lu {
        n,
        lu,
        perm,
        sign,
        singular_at,
    }
}

impl Lu {
    fn det(&self) -> f64 {
        if self.singular_at.is_some() {
            return 0.0;
        }
        (0..self.n).map(|i| self.lu[i * self.n + i]).product::<f64>() * self.sign
    }
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &RealMatrix) -> Result<f64> {
    m.require_square("determinant")?;
    Ok(lu_decompose(m).det())
}

/// Determinant together with the cofactor matrix
/// `cof[i,j] = (−1)^{i+j}·minor(i,j)`. Singular input gives `det = 0` and
/// still yields valid cofactors.
pub fn det_and_cofactors(m: &RealMatrix) -> Result<(f64, RealMatrix)> {
    m.require_square("determinant")?;
    let n = m.rows;
    let d = lu_decompose(m).det();
    if n == 1 {
        return Ok((d, RealMatrix::identity(1)));
    }
    let cof = RealMatrix::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * lu_decompose(&m.minor_matrix(i, j)).det()
    });
    Ok((d, cof))
}

/// Solves `a·x = b` by LU with partial pivoting.
pub fn solve(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    a.require_square("solve")?;
    let n = a.rows;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a {n}x{n} system",
            b.len()
        )));
    }
    let lu = lu_decompose(a);
    let floor = f64::EPSILON * n as f64 * a.max_abs();
    let tiny_pivot = (0..n).find(|&i| lu.lu[i * n + i].abs() <= floor);
    if let Some(k) = lu.singular_at.or(tiny_pivot) {
        return Err(Error::SingularMatrix(format!("no usable pivot in column {k}")));
    }
    let mut y: Vec<f64> = lu.perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for k in 0..i {
            y[i] -= lu.lu[i * n + k] * y[k];
        }
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] -= lu.lu[i * n + k] * y[k];
        }
        y[i] /= lu.lu[i * n + i];
    }
    Ok(y)
}

/// Spectral condition number `s_max / s_min`; `+∞` when `s_min < 1e-300`.
pub fn cond2(a: &RealMatrix) -> Result<f64> {
    a.require_square("condition number")?;
    let s = singular_values(&a.to_complex())?;
    let smax = s[0];
    let smin = *s.last().expect("nonempty");
    if smin < tol::COND_ZERO {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{leibniz_det, random_real};

    #[test]
    fn identity_det_and_cofactors() {
        let (d, c) = det_and_cofactors(&RealMatrix::identity(3)).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(c, RealMatrix::identity(3));
    }

    #[test]
    fn zero_row_gives_zero_det() {
        let m = RealMatrix::from_rows(&[&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0], &[4.0, 5.0, 7.0]]);
        let (d, c) = det_and_cofactors(&m).unwrap();
        assert_eq!(d, 0.0);
        // cofactors along the zero row are the only nonvanishing ones
        assert!((c[(1, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn det_matches_leibniz_seed_3() {
        let m = random_real(3, 3, 3);
        let (d, cof) = det_and_cofactors(&m).unwrap();
        assert!((d - leibniz_det(&m)).abs() < 1e-12);
        for i in 0..3 {
            let row: f64 = (0..3).map(|j| m[(i, j)] * cof[(i, j)]).sum();
            let col: f64 = (0..3).map(|j| m[(j, i)] * cof[(j, i)]).sum();
            assert!((row - d).abs() < 1e-12 && (col - d).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_examples() {
        let x = solve(&RealMatrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
        let x = solve(&RealMatrix::diag(&[2.0, 4.0]), &[2.0, 4.0]).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
    }

    #[test]
    fn solve_forward_multiply_seed_11() {
        let a = &random_real(3, 3, 11);
        assert!(cond2(a).unwrap() < 1e3);
        let x0 = [0.3, -1.2, 0.7];
        let b = a.mul_vec(&x0);
        let x = solve(a, &b).unwrap();
        for (u, v) in x.iter().zip(&x0) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn solve_singular() {
        let m = RealMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(solve(&m, &[1.0, 1.0]), Err(Error::SingularMatrix(_))));
        assert!(matches!(
            solve(&RealMatrix::zeros(2, 2), &[1.0, 1.0]),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn condition_numbers() {
        assert!((cond2(&RealMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        assert!((cond2(&RealMatrix::diag(&[10.0, 1.0])).unwrap() - 10.0).abs() < 1e-13);
        assert_eq!(cond2(&RealMatrix::diag(&[1.0, 0.0])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn shape_errors() {
        let m = RealMatrix::zeros(2, 3);
        assert!(det(&m).is_err());
        assert!(solve(&RealMatrix::identity(2), &[1.0]).is_err());
    }
}
