use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::binary::bit_dot;
use super::matrix::{ComplexMatrix, MatrixRepr, C64, ONE};
use crate::error::{invalid, Error, Result};

/// Default tolerance for matrix identity checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest supported Sylvester exponent (order 16).
pub const MAX_SYLVESTER_EXPONENT: u32 = 4;

/// A complex Hadamard matrix: unimodular entries and `H H^dagger = d I`.
///
/// Real Hadamards keep their `±1` signs as integers next to the float
/// view, so that combinatorial counts never touch floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HadamardRepr", into = "HadamardRepr")]
pub struct HadamardMatrix {
    matrix: ComplexMatrix,
    signs: Option<Vec<i8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardReport {
    pub is_hadamard: bool,
    /// Worst of the unimodularity and orthogonality deviations.
    pub max_deviation: f64,
}

impl HadamardMatrix {
    /// Validates `matrix` against the Hadamard conditions at `tol`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let report = is_hadamard(&matrix, tol)?;
        if !report.is_hadamard {
            return invalid(format!(
                "matrix is not Hadamard (deviation {:e})",
                report.max_deviation
            ));
        }
        Ok(Self::new_unchecked(matrix))
    }

    /// Builds a real Hadamard from row-major `±1` signs.
    pub fn from_signs(d: usize, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != d * d || signs.iter().any(|&s| s != 1 && s != -1) {
            return invalid("real Hadamard signs must be d*d entries in {-1, 1}");
        }
        let matrix = ComplexMatrix::from_fn(d, d, |r, c| C64::new(signs[r * d + c] as f64, 0.0));
        let report = is_hadamard(&matrix, 0.0)?;
        if !report.is_hadamard {
            return invalid("sign matrix rows are not orthogonal");
        }
        Ok(Self {
            matrix,
            signs: Some(signs),
        })
    }

    fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let signs = real_signs(&matrix, 0.0);
        Self { matrix, signs }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_real(&self) -> bool {
        self.signs.is_some()
    }

    pub fn signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    /// Exact sign of entry `(j, k)` for real matrices.
    pub fn sign(&self, j: usize, k: usize) -> Option<i8> {
        self.signs.as_ref().map(|s| s[j * self.dim() + k])
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        self.matrix[(j, k)]
    }

    pub fn is_sylvester(&self) -> bool {
        let d = self.dim();
        d.is_power_of_two()
            && d >= 2
            && self.signs.as_ref().is_some_and(|s| {
                (0..d).all(|j| (0..d).all(|k| s[j * d + k] == sylvester_sign(j, k)))
            })
    }
}

fn sylvester_sign(j: usize, k: usize) -> i8 {
    if bit_dot(j, k) == 0 {
        1
    } else {
        -1
    }
}

/// Returns exact signs if every entry lies within `tol` of `±1`.
fn real_signs(m: &ComplexMatrix, tol: f64) -> Option<Vec<i8>> {
    m.entries()
        .iter()
        .map(|z| {
            if (z - ONE).norm() <= tol {
                Some(1)
            } else if (z + ONE).norm() <= tol {
                Some(-1)
            } else {
                None
            }
        })
        .collect()
}

/// The `2^n x 2^n` Sylvester matrix with entry `(-1)^<j,k>`.
pub fn sylvester_hadamard(n: u32) -> Result<HadamardMatrix> {
    if n == 0 {
        return invalid("Sylvester exponent must be at least 1");
    }
    if n > MAX_SYLVESTER_EXPONENT {
        return Err(Error::Unsupported(format!(
            "Sylvester matrices above order {} are not supported",
            1usize << MAX_SYLVESTER_EXPONENT
        )));
    }
    let d = 1usize << n;
    let signs: Vec<i8> = (0..d * d)
        .map(|idx| sylvester_sign(idx / d, idx % d))
        .collect();
    HadamardMatrix::from_signs(d, signs)
}

/// The unnormalized DFT matrix, entry `exp(2 pi i jk / d)`.
pub fn fourier_matrix(d: usize) -> Result<HadamardMatrix> {
    if d < 2 {
        return invalid("Fourier matrix needs d >= 2");
    }
    let m = ComplexMatrix::from_fn(d, d, |j, k| {
        let e = (j * k) % d;
        // exact values at the real points keep d = 2 and d = 4 real
        match (4 * e).is_multiple_of(d) {
            true => match 4 * e / d {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, 1.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, -1.0),
            },
            false => C64::from_polar(1.0, 2.0 * PI * e as f64 / d as f64),
        }
    });
    Ok(HadamardMatrix::new_unchecked(m))
}

/// Checks unimodularity and `M M^dagger = d I` entrywise at `tol`.
pub fn is_hadamard(m: &ComplexMatrix, tol: f64) -> Result<HadamardReport> {
    if !m.is_square() {
        return invalid(format!(
            "Hadamard check needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        ));
    }
    let d = m.rows();
    let unimodular = m
        .entries()
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let gram = m.mul(&m.adjoint())?;
    let target = ComplexMatrix::identity(d).scale(C64::new(d as f64, 0.0));
    let orth = gram.max_abs_diff(&target)?;
    let max_deviation = unimodular.max(orth);
    Ok(HadamardReport {
        is_hadamard: max_deviation <= tol,
        max_deviation,
    })
}

/// Diagonal-equivalent form with first row and column all ones.
pub fn dephase(h: &HadamardMatrix) -> HadamardMatrix {
    let d = h.dim();
    let m = h.matrix();
    let left: Vec<C64> = (0..d).map(|j| m[(j, 0)].conj()).collect();
    let right: Vec<C64> = (0..d).map(|k| (left[0] * m[(0, k)]).conj()).collect();
    let mut out = ComplexMatrix::from_fn(d, d, |j, k| left[j] * m[(j, k)] * right[k]);
    // renormalize rounding so repeated dephasing is a fixed point
    for j in 0..d {
        for k in 0..d {
            let z = out[(j, k)];
            out[(j, k)] = if j == 0 || k == 0 { ONE } else { z / z.norm() };
        }
    }
    match real_signs(&out, DEFAULT_TOL) {
        Some(signs) => {
            let exact = ComplexMatrix::from_fn(d, d, |j, k| C64::new(signs[j * d + k] as f64, 0.0));
            HadamardMatrix {
                matrix: exact,
                signs: Some(signs),
            }
        }
        None => HadamardMatrix {
            matrix: out,
            signs: None,
        },
    }
}

#[derive(Serialize, Deserialize)]
struct HadamardRepr {
    #[serde(flatten)]
    matrix: MatrixRepr,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    signs: Option<Vec<i8>>,
}

impl From<HadamardMatrix> for HadamardRepr {
    fn from(h: HadamardMatrix) -> Self {
        Self {
            matrix: h.matrix.into(),
            signs: h.signs,
        }
    }
}

impl TryFrom<HadamardRepr> for HadamardMatrix {
    type Error = Error;

    fn try_from(r: HadamardRepr) -> Result<Self> {
        let matrix = ComplexMatrix::try_from(r.matrix)?;
        match r.signs {
            Some(signs) => {
                let h = HadamardMatrix::from_signs(matrix.rows(), signs)?;
                if h.matrix.max_abs_diff(&matrix)? > DEFAULT_TOL {
                    return invalid("Hadamard signs disagree with entries");
                }
                Ok(h)
            }
            None => HadamardMatrix::new(matrix, 1e-9),
        }
    }
}
