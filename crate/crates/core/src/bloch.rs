//! Generalized Bloch vectors in the real space of traceless Hermitian
//! matrices.
//!
//! Coordinates are `sqrt(d/(d-1)) tr(rho A_a)` over an orthonormal
//! generalized Gell-Mann basis, which puts pure states on the unit sphere.
//! Transposition fixes the real symmetric basis elements and negates the
//! antisymmetric ones, so on coordinates it is a reflection.

use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexMatrix, C64};
use crate::designs::StateSet;
use crate::error::{invalid, Error, Result};
use crate::sic::SicFamily;

#[derive(Clone, Debug)]
pub struct HermitianBasis {
    d: usize,
    elements: Vec<ComplexMatrix>,
    symmetric: Vec<bool>,
    names: Vec<String>,
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn symmetry_mask(&self) -> &[bool] {
        &self.symmetric
    }

    pub fn symmetric_count(&self) -> usize {
        self.symmetric.iter().filter(|&&s| s).count()
    }

    /// Labels such as `S_0_3`, `A_0_3`, `D_2` (0-based indices).
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Generalized Gell-Mann basis: symmetric pairs `i < j` in lexicographic
/// order, then antisymmetric pairs, then the `d - 1` diagonal elements.
pub fn hermitian_basis(d: usize) -> Result<HermitianBasis> {
    if d < 2 {
        return invalid("Bloch basis needs d >= 2");
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let mut elements = Vec::with_capacity(d * d - 1);
    let mut symmetric = Vec::with_capacity(d * d - 1);
    let mut names = Vec::with_capacity(d * d - 1);
    for &(i, j) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, j)] = C64::new(s, 0.0);
        m[(j, i)] = C64::new(s, 0.0);
        elements.push(m);
        symmetric.push(true);
        names.push(format!("S_{i}_{j}"));
    }
    for &(i, j) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, j)] = C64::new(0.0, -s);
        m[(j, i)] = C64::new(0.0, s);
        elements.push(m);
        symmetric.push(false);
        names.push(format!("A_{i}_{j}"));
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for r in 0..l {
            m[(r, r)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        elements.push(m);
        symmetric.push(true);
        names.push(format!("D_{l}"));
    }
    Ok(HermitianBasis {
        d,
        elements,
        symmetric,
        names,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub coords: Vec<f64>,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Negates the antisymmetric coordinates.
    pub fn reflect(&self, basis: &HermitianBasis) -> BlochVector {
        let coords = self
            .coords
            .iter()
            .zip(&basis.symmetric)
            .map(|(&c, &sym)| if sym { c } else { -c })
            .collect();
        BlochVector { coords }
    }
}

pub fn bloch_vector(rho: &ComplexMatrix, basis: &HermitianBasis) -> Result<BlochVector> {
    if !rho.is_square() || rho.rows() != basis.d {
        return invalid(format!(
            "density matrix is {}x{}, basis has d = {}",
            rho.rows(),
            rho.cols(),
            basis.d
        ));
    }
    let scale = (basis.d as f64 / (basis.d - 1) as f64).sqrt();
    let coords = basis
        .elements
        .iter()
        .map(|a| Ok(scale * rho.trace_product(a)?.re))
        .collect::<Result<_>>()?;
    Ok(BlochVector { coords })
}

/// Bloch vector of the pure state `psi` (assumed normalized).
pub fn pure_bloch_vector(psi: &[C64], basis: &HermitianBasis) -> Result<BlochVector> {
    bloch_vector(&ComplexMatrix::outer(psi, 1.0), basis)
}

fn set_vectors(set: &StateSet, basis: &HermitianBasis) -> Result<Vec<BlochVector>> {
    set.vectors()
        .iter()
        .map(|v| pure_bloch_vector(v, basis))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexReport {
    pub pass: bool,
    pub count: usize,
    pub expected_inner: f64,
    pub max_norm_deviation: f64,
    pub max_inner_deviation: f64,
    pub centroid_norm: f64,
}

/// Checks that `d^2` states form a regular simplex inscribed in the unit sphere.
pub fn simplex_check(set: &StateSet, basis: &HermitianBasis, tol: f64) -> Result<SimplexReport> {
    let d = basis.d;
    if set.dim() != d {
        return invalid("state set and basis dimensions differ");
    }
    if set.len() != d * d {
        return invalid(format!(
            "simplex check needs {} states, got {}",
            d * d,
            set.len()
        ));
    }
    let vecs = set_vectors(set, basis)?;
    let expected_inner = -1.0 / (d * d - 1) as f64;
    let max_norm_deviation = vecs
        .iter()
        .map(|b| (b.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut max_inner_deviation: f64 = 0.0;
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            max_inner_deviation =
                max_inner_deviation.max((vecs[i].dot(&vecs[j]) - expected_inner).abs());
        }
    }
    let mut sum = vec![0.0; basis.len()];
    for b in &vecs {
        for (s, c) in sum.iter_mut().zip(&b.coords) {
            *s += c;
        }
    }
    let centroid_norm = sum.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(SimplexReport {
        pass: max_norm_deviation <= tol && max_inner_deviation <= tol && centroid_norm <= tol,
        count: vecs.len(),
        expected_inner,
        max_norm_deviation,
        max_inner_deviation,
        centroid_norm,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub pass: bool,
    pub symmetric_count: usize,
    pub max_deviation: f64,
    /// Index with the largest coordinate mismatch.
    pub worst_index: usize,
}

/// Checks that each twin Bloch vector is the reflection of the original.
/// Assumes the canonical basis is the conjugation basis.
pub fn transpose_reflection_check(
    set_v: &StateSet,
    set_vbar: &StateSet,
    basis: &HermitianBasis,
    tol: f64,
) -> Result<ReflectionReport> {
    if set_v.dim() != basis.d || set_vbar.dim() != basis.d {
        return invalid("state set and basis dimensions differ");
    }
    if set_v.len() != set_vbar.len() {
        return invalid("twin sets have different sizes");
    }
    let a = set_vectors(set_v, basis)?;
    let b = set_vectors(set_vbar, basis)?;
    let mut worst = (0.0f64, 0usize);
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        let r = x.reflect(basis);
        let dev = r
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        if dev > worst.0 {
            worst = (dev, i);
        }
    }
    Ok(ReflectionReport {
        pass: worst.0 <= tol,
        symmetric_count: basis.symmetric_count(),
        max_deviation: worst.0,
        worst_index: worst.1,
    })
}

/// [`transpose_reflection_check`] on two families; only real Hadamard
/// sources are accepted, since for those the conjugation basis is canonical.
pub fn family_reflection_check(
    fam_v: &SicFamily,
    fam_vbar: &SicFamily,
    basis: &HermitianBasis,
    tol: f64,
) -> Result<ReflectionReport> {
    if !fam_v.hadamard().is_real() || !fam_vbar.hadamard().is_real() {
        return Err(Error::Unsupported(
            "transpose reflection needs a real Hadamard source".into(),
        ));
    }
    transpose_reflection_check(
        &StateSet::from_family(fam_v),
        &StateSet::from_family(fam_vbar),
        basis,
        tol,
    )
}

/// One CSV row per state, with a header of basis element names.
pub fn bloch_csv(vectors: &[BlochVector], basis: &HermitianBasis) -> String {
    let mut out = basis.names.join(",");
    out.push('\n');
    for b in vectors {
        let row: Vec<String> = b.coords.iter().map(|&x| crate::io::csv_float(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Gram matrix of Bloch inner products as headerless CSV.
pub fn gram_csv(vectors: &[BlochVector]) -> String {
    let mut out = String::new();
    for a in vectors {
        let row: Vec<String> = vectors
            .iter()
            .map(|b| crate::io::csv_float(a.dot(b)))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Bloch vectors of all states in a set.
pub fn set_bloch_vectors(set: &StateSet, basis: &HermitianBasis) -> Result<Vec<BlochVector>> {
    set_vectors(set, basis)
}

/// Real-linear reconstruction `I/d + sqrt((d-1)/d) sum_a b_a A_a`.
pub fn density_from_bloch(b: &BlochVector, basis: &HermitianBasis) -> Result<ComplexMatrix> {
    let d = basis.d;
    let scale = ((d - 1) as f64 / d as f64).sqrt();
    let mut rho = ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
    for (a, &c) in basis.elements.iter().zip(&b.coords) {
        rho.add_assign_scaled(a, C64::new(scale * c, 0.0))?;
    }
    Ok(rho)
}
