use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Square banded matrix in row-major band storage.
///
/// Row `i` stores columns `i - lower ..= i + upper`; slots that fall outside
/// the matrix are kept at zero and never read back.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("banded matrix needs n >= 1".into()));
        }
        // bandwidths are clipped so that the storage invariant lower, upper < n holds
        let lower = lower.min(n - 1);
        let upper = upper.min(n - 1);
        Ok(Self {
            n,
            lower,
            upper,
            data: vec![0.0; n * (lower + upper + 1)],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, 0, 0)?;
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), 0, 0)?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    /// Tridiagonal matrix from its sub-, main and super-diagonal.
    pub fn tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::DimensionMismatch(format!(
                "tridiagonal with diag {}, sub {}, super {}",
                n,
                sub.len(),
                sup.len()
            )));
        }
        let mut m = Self::zeros(n, 1, 1)?;
        for i in 0..n {
            m.set(i, i, diag[i]);
            if i + 1 < n {
                m.set(i + 1, i, sub[i]);
                m.set(i, i + 1, sup[i]);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.lower >= i && j <= i + self.upper
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + (j + self.lower - i)]
        } else {
            0.0
        }
    }

    /// Panics when `(i, j)` lies outside the band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            self.in_band(i, j),
            "({i}, {j}) outside band ({}, {})",
            self.lower,
            self.upper
        );
        let w = self.width();
        self.data[i * w + (j + self.lower - i)] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    /// Column range stored for row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.lower)..(i + self.upper + 1).min(self.n)
    }

    pub fn diagonal(&self, offset: isize) -> Vec<f64> {
        let n = self.n as isize;
        let len = (n - offset.abs()).max(0) as usize;
        (0..len)
            .map(|k| {
                if offset >= 0 {
                    self.get(k, k + offset as usize)
                } else {
                    self.get(k + (-offset) as usize, k)
                }
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.row_range(i) {
                d[(i, j)] = self.get(i, j);
            }
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n, self.upper, self.lower).expect("n >= 1");
        for i in 0..self.n {
            for j in self.row_range(i) {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            data: self.data.iter().map(|v| alpha * v).collect(),
            ..self.clone()
        }
    }

    /// Sum of two banded matrices; the band of the result is the union of both bands.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.n, other.n
            )));
        }
        let mut out = Self::zeros(
            self.n,
            self.lower.max(other.lower),
            self.upper.max(other.upper),
        )?;
        for m in [self, other] {
            for i in 0..m.n {
                for j in m.row_range(i) {
                    out.add_to(i, j, m.get(i, j));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Product `diag(d) * self`.
    pub fn scale_rows(&self, d: &[f64]) -> Result<Self> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} row scales for n = {}",
                d.len(),
                self.n
            )));
        }
        let mut out = self.clone();
        for (i, &di) in d.iter().enumerate() {
            for j in self.row_range(i) {
                out.set(i, j, di * self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Product `diag(d) * self * diag(d)`.
    pub fn scale_symmetric(&self, d: &[f64]) -> Result<Self> {
        let mut out = self.scale_rows(d)?;
        for i in 0..self.n {
            for j in self.row_range(i) {
                out.set(i, j, out.get(i, j) * d[j]);
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for n = {}",
                x.len(),
                self.n
            )));
        }
        Ok((0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    /// Product with a dense matrix, `self * b`.
    pub fn matmul_dense(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "banded {} times dense {}x{}",
                self.n,
                b.rows(),
                b.cols()
            )));
        }
        let mut out = DenseMatrix::zeros(self.n, b.cols());
        for i in 0..self.n {
            for k in self.row_range(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let src = b.row(k).to_vec();
                for (o, v) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * v;
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn asymmetry(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in self.row_range(i) {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }

    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        let dev = self.asymmetry();
        let tol = rel_tol * self.max_abs();
        if dev > tol {
            return Err(Error::NotSymmetric {
                deviation: dev,
                tolerance: tol,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_1(&self) -> f64 {
        let mut col = vec![0.0; self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                col[j] += self.get(i, j).abs();
            }
        }
        col.into_iter().fold(0.0, f64::max)
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_outside_band_read_as_zero() {
        let m = BandedMatrix::tridiagonal(&[-1.0; 3], &[2.0; 4], &[-1.0; 3]).unwrap();
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.get(3, 0), 0.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.trace(), 8.0);
        assert_eq!(m.norm_inf(), 4.0);
    }

    #[test]
    fn bandwidth_clipped_to_size() {
        let m = BandedMatrix::zeros(2, 5, 5).unwrap();
        assert_eq!((m.lower(), m.upper()), (1, 1));
        assert!(BandedMatrix::zeros(0, 0, 0).is_err());
    }

    #[test]
    fn add_unions_bands() {
        let a = BandedMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let b = BandedMatrix::tridiagonal(&[1.0; 2], &[0.0; 3], &[5.0; 2]).unwrap();
        let c = a.add(&b).unwrap();
        assert_eq!(c.to_dense(), a.to_dense().add(&b.to_dense()).unwrap());
    }

    #[test]
    fn dense_product_matches() {
        let a = BandedMatrix::tridiagonal(&[1.0, 2.0], &[3.0, 4.0, 5.0], &[6.0, 7.0]).unwrap();
        let b = DenseMatrix::from_fn(3, 2, |i, j| (i + j) as f64);
        assert_eq!(
            a.matmul_dense(&b).unwrap(),
            a.to_dense().matmul(&b).unwrap()
        );
    }
}
