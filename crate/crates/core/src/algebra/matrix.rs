use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    /// `scale * |u><u|`
    pub fn outer(u: &[C64], scale: f64) -> Self {
        let n = u.len();
        Self::from_fn(n, n, |r, c| u[r] * u[c].conj() * scale)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Option<C64> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: C64) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return invalid(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            ));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt product `tr(A^dagger B)`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        if self.cols != other.rows || self.rows != other.cols {
            return invalid("trace_product shape mismatch");
        }
        let mut acc = ZERO;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[r * self.cols + k] * other.data[k * other.cols + r];
            }
        }
        Ok(acc)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return invalid(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        &mut self.data[r * self.cols + c]
    }
}

/// JSON form: `{"rows": r, "cols": c, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = crate::error::Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        ComplexMatrix::from_row_major(
            r.rows,
            r.cols,
            r.entries
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

// Vector helpers. Inner products are conjugate-linear in the first slot.

pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

pub fn normalized(x: &[C64]) -> Vec<C64> {
    let n = norm_sqr(x).sqrt();
    x.iter().map(|z| z / n).collect()
}

/// Entrywise max distance between the rank-one projectors onto `x` and `y`.
/// Phases cancel, so this compares lines rather than vectors.
pub fn projector_distance(x: &[C64], y: &[C64]) -> f64 {
    let x = normalized(x);
    let y = normalized(y);
    let mut worst = 0.0f64;
    for r in 0..x.len() {
        for c in 0..x.len() {
            let a = x[r] * x[c].conj();
            let b = y[r] * y[c].conj();
            worst = worst.max((a - b).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_is_involution() {
        let m = ComplexMatrix::from_fn(2, 3, |r, c| C64::new(r as f64, c as f64 - 1.0));
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.adjoint().rows(), 3);
    }

    #[test]
    fn mul_rejects_bad_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.mul(&a.adjoint()).is_ok());
    }

    #[test]
    fn get_is_bounds_checked() {
        let a = ComplexMatrix::identity(2);
        assert_eq!(a.get(1, 1), Some(ONE));
        assert_eq!(a.get(2, 0), None);
    }

    #[test]
    #[should_panic]
    fn index_panics_out_of_bounds() {
        let a = ComplexMatrix::identity(2);
        let _ = a[(0, 2)];
    }

    #[test]
    fn projector_distance_ignores_phase() {
        let x = vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let y: Vec<C64> = x.iter().map(|z| z * C64::from_polar(3.0, 0.7)).collect();
        assert!(projector_distance(&x, &y) < 1e-15);
        let z = vec![ONE, ZERO];
        assert!(projector_distance(&x, &z) > 0.1);
    }

    #[test]
    fn json_shape() {
        let m = ComplexMatrix::identity(2);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"rows":2,"cols":2,"entries":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[1.0,0.0]]}"#
        );
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(
            serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"entries":[]}"#).is_err()
        );
    }
}
