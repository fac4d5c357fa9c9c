//! SIC-POVMs from complex Hadamard matrices.
//!
//! `H_jk(v)` is row `j` of a Hadamard matrix `H` with coordinate `k`
//! multiplied by `v`. For the admissible pairs `(d, v)` the `d^2` lines
//! spanned by these vectors are equiangular, giving a SIC-POVM with
//! effects `|phi_jk><phi_jk| / d`. At `d = 8` over a real Hadamard these
//! are the Hoggar lines, and `H(v)` and `H(conj v)` are twin sets related by
//! complex conjugation in the canonical basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    bit_dot, inner, norm_sqr, normalized, projector_distance, BinaryTriple, ComplexMatrix,
    HadamardMatrix, C64, ONE, ZERO,
};
use crate::error::{invalid, Error, Result};
use crate::povm::{Povm, RankOne};

/// Tolerance used when matching `v` against the admissible list.
const ADMISSIBLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionVector {
    pub j: usize,
    pub k: usize,
    /// Unnormalized coordinates.
    pub coords: Vec<C64>,
    pub squared_norm: f64,
}

impl ConstructionVector {
    pub fn normalized(&self) -> Vec<C64> {
        normalized(&self.coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// `(d, v)` is on the known list of equiangular parameters.
    Admissible,
    /// Constructed anyway; the string explains why it is not on the list.
    Warning(String),
}

/// The `d^2` construction vectors `H_jk(v)` and their POVM effects.
#[derive(Clone, Debug)]
pub struct SicFamily {
    d: usize,
    v: C64,
    hadamard: HadamardMatrix,
    vectors: Vec<ConstructionVector>,
    effects: Vec<ComplexMatrix>,
    admissibility: Admissibility,
}

impl SicFamily {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn parameter(&self) -> C64 {
        self.v
    }

    pub fn hadamard(&self) -> &HadamardMatrix {
        &self.hadamard
    }

    pub fn vectors(&self) -> &[ConstructionVector] {
        &self.vectors
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn admissibility(&self) -> &Admissibility {
        &self.admissibility
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility == Admissibility::Admissible
    }

    /// Flat index of `(j, k)`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.d + k
    }

    pub fn vector(&self, j: usize, k: usize) -> &ConstructionVector {
        &self.vectors[self.index(j, k)]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Normalized vectors in `(j, k)` order.
    pub fn unit_vectors(&self) -> Vec<Vec<C64>> {
        self.vectors
            .iter()
            .map(ConstructionVector::normalized)
            .collect()
    }

    /// The family as a rank-one POVM with weights `1/d`.
    pub fn povm(&self) -> Result<Povm> {
        let w = 1.0 / self.d as f64;
        Povm::from_rank_one(
            self.vectors
                .iter()
                .map(|cv| RankOne {
                    vector: cv.normalized(),
                    weight: w,
                })
                .collect(),
        )
    }
}

/// Builds `H(v)`. Any `d >= 2` is accepted; parameters off the
/// equiangular list only produce a warning.
pub fn jw_vectors(h: &HadamardMatrix, v: C64) -> SicFamily {
    let d = h.dim();
    let mut vectors = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let mut coords: Vec<C64> = h.matrix().row(j).to_vec();
            coords[k] *= v;
            let squared_norm = norm_sqr(&coords);
            vectors.push(ConstructionVector {
                j,
                k,
                coords,
                squared_norm,
            });
        }
    }
    let w = 1.0 / d as f64;
    let effects = vectors
        .iter()
        .map(|cv| ComplexMatrix::outer(&cv.normalized(), w))
        .collect();
    SicFamily {
        d,
        v,
        hadamard: h.clone(),
        vectors,
        effects,
        admissibility: admissibility(h, v),
    }
}

/// The equiangular parameter list for dimension `d`, if any.
pub fn admissible_parameters(d: usize) -> Vec<C64> {
    let s3 = 3f64.sqrt();
    match d {
        2 => {
            let mut out = Vec::new();
            for outer in [1.0, -1.0] {
                for a in [1.0, -1.0] {
                    for b in [1.0, -1.0] {
                        out.push(C64::new(1.0 + a * s3, 0.0) * C64::new(1.0, b) * (outer / 2.0));
                    }
                }
            }
            out
        }
        3 => vec![
            ZERO,
            C64::new(-2.0, 0.0),
            C64::new(1.0, s3),
            C64::new(1.0, -s3),
        ],
        8 => vec![C64::new(-1.0, 2.0), C64::new(-1.0, -2.0)],
        _ => Vec::new(),
    }
}

fn admissibility(h: &HadamardMatrix, v: C64) -> Admissibility {
    let d = h.dim();
    let listed = admissible_parameters(d)
        .iter()
        .any(|a| (a - v).norm() < ADMISSIBLE_TOL);
    if !listed {
        return Admissibility::Warning(format!(
            "v = {v} is not an equiangular parameter for d = {d}"
        ));
    }
    if d == 8 && !h.is_real() {
        // the d = 8 case needs H equivalent to a real Hadamard; only the real case is recognized here
        return Admissibility::Warning("d = 8 needs a real Hadamard source".into());
    }
    Admissibility::Admissible
}

/// Builds the family from a JSON exchange record, checking the stored
/// vectors against the definition.
pub fn family_from_record(rec: &FamilyRecord) -> Result<SicFamily> {
    if rec.hadamard.dim() != rec.d {
        return invalid(format!(
            "record says d={} but Hadamard is {}x{}",
            rec.d,
            rec.hadamard.dim(),
            rec.hadamard.dim()
        ));
    }
    let fam = jw_vectors(&rec.hadamard, rec.v);
    if !rec.vectors.is_empty() {
        if rec.vectors.len() != fam.len() {
            return invalid(format!(
                "record has {} vectors, expected {}",
                rec.vectors.len(),
                fam.len()
            ));
        }
        for rv in &rec.vectors {
            if rv.j >= rec.d || rv.k >= rec.d {
                return invalid(format!("vector label ({}, {}) out of range", rv.j, rv.k));
            }
            let ours = &fam.vector(rv.j, rv.k).coords;
            let worst = ours
                .iter()
                .zip(&rv.coords)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if rv.coords.len() != ours.len() || worst > 1e-9 {
                return invalid(format!(
                    "stored vector ({}, {}) disagrees with H_jk(v)",
                    rv.j, rv.k
                ));
            }
        }
    }
    Ok(fam)
}

/// JSON form of a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub d: usize,
    #[serde(with = "crate::io::complex")]
    pub v: C64,
    pub hadamard: HadamardMatrix,
    #[serde(default)]
    pub vectors: Vec<VectorRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorRecord {
    pub j: usize,
    pub k: usize,
    #[serde(with = "crate::io::complex_vec")]
    pub coords: Vec<C64>,
}

impl From<&SicFamily> for FamilyRecord {
    fn from(f: &SicFamily) -> Self {
        Self {
            d: f.d,
            v: f.v,
            hadamard: f.hadamard.clone(),
            vectors: f
                .vectors
                .iter()
                .map(|cv| VectorRecord {
                    j: cv.j,
                    k: cv.k,
                    coords: cv.coords.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SicReport {
    pub is_sic: bool,
    /// Mean of `tr(Pi_i Pi_j)` over distinct pairs.
    pub overlap_value: f64,
    pub expected_overlap: f64,
    /// Worst of the pair-overlap and identity-resolution deviations.
    pub max_deviation: f64,
    pub identity_deviation: f64,
    pub pairs_checked: usize,
}

/// Checks identity resolution and equal pairwise Hilbert-Schmidt products
/// `1 / (d^2 (d + 1))`.
pub fn verify_sic(fam: &SicFamily, tol: f64) -> Result<SicReport> {
    if fam.is_empty() {
        return invalid("empty family");
    }
    let d = fam.d as f64;
    let expected = 1.0 / (d * d * (d + 1.0));
    let units = fam.unit_vectors();
    let n = units.len();
    let mut sum = 0.0;
    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            // tr(Pi_a Pi_b) = |<phi_a|phi_b>|^2 / d^2
            let hs = inner(&units[a], &units[b]).norm_sqr() / (d * d);
            sum += hs;
            worst = worst.max((hs - expected).abs());
            pairs += 1;
        }
    }
    let mut total = ComplexMatrix::zeros(fam.d, fam.d);
    for e in &fam.effects {
        total.add_assign_scaled(e, ONE)?;
    }
    let identity_deviation = total.max_abs_diff(&ComplexMatrix::identity(fam.d))?;
    let max_deviation = worst.max(identity_deviation);
    Ok(SicReport {
        is_sic: n == fam.d * fam.d && max_deviation <= tol,
        overlap_value: if pairs > 0 {
            sum / pairs as f64
        } else {
            f64::NAN
        },
        expected_overlap: expected,
        max_deviation,
        identity_deviation,
        pairs_checked: pairs,
    })
}

/// `T_(m,n)`: squared moduli of raw inner products between every
/// `H_jk(v)` and the fixed `H_mn(conj v)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapTable {
    pub m: usize,
    pub n: usize,
    /// Indexed by `j * d + k`.
    pub values: Vec<f64>,
}

impl OverlapTable {
    /// Distinct values, merged at relative tolerance `tol`, with counts.
    pub fn value_classes(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let mut classes: Vec<(f64, usize)> = Vec::new();
        for x in sorted {
            match classes.last_mut() {
                Some((rep, count)) if (x - *rep).abs() <= tol * rep.abs().max(1.0) => *count += 1,
                _ => classes.push((x, 1)),
            }
        }
        classes
    }
}

pub fn overlap_table(
    fam_v: &SicFamily,
    fam_vbar: &SicFamily,
    m: usize,
    n: usize,
) -> Result<OverlapTable> {
    check_twins(fam_v, fam_vbar)?;
    let d = fam_v.d;
    if m >= d || n >= d {
        return invalid(format!("label ({m}, {n}) out of range for d = {d}"));
    }
    let target = &fam_vbar.vector(m, n).coords;
    let values = fam_v
        .vectors
        .iter()
        .map(|cv| inner(target, &cv.coords).norm_sqr())
        .collect();
    Ok(OverlapTable { m, n, values })
}

fn check_twins(fam_v: &SicFamily, fam_vbar: &SicFamily) -> Result<()> {
    if fam_v.d != fam_vbar.d {
        return invalid(format!("dimension mismatch: {} vs {}", fam_v.d, fam_vbar.d));
    }
    if (fam_v.v.conj() - fam_vbar.v).norm() > 1e-12 {
        return invalid(format!(
            "parameters {} and {} are not conjugate",
            fam_v.v, fam_vbar.v
        ));
    }
    let hv = fam_v.hadamard.matrix();
    let hw = fam_vbar.hadamard.matrix();
    // a conjugated complex source is also a valid twin
    let same = hv.max_abs_diff(hw)? <= 1e-12 || hv.conj().max_abs_diff(hw)? <= 1e-12;
    if !same {
        return invalid("families are built from different Hadamard matrices");
    }
    Ok(())
}

/// Label `(alpha, beta)` of the operator `Z^alpha X^beta` on three qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliLabel {
    pub alpha: BinaryTriple,
    pub beta: BinaryTriple,
}

impl PauliLabel {
    pub fn new(alpha: BinaryTriple, beta: BinaryTriple) -> Self {
        Self { alpha, beta }
    }

    pub fn identity() -> Self {
        Self::new(BinaryTriple::ZERO, BinaryTriple::ZERO)
    }

    /// All 64 labels, ordered by `8 * alpha + beta`.
    pub fn all() -> impl Iterator<Item = Self> {
        BinaryTriple::all().flat_map(|a| BinaryTriple::all().map(move |b| Self::new(a, b)))
    }

    pub fn compose(self, other: Self) -> Self {
        Self::new(self.alpha + other.alpha, self.beta + other.beta)
    }
}

/// `Z^a1 X^b1 (x) Z^a2 X^b2 (x) Z^a3 X^b3`, first qubit most significant.
pub fn pauli_operator(label: PauliLabel, d: usize) -> Result<ComplexMatrix> {
    if d != 8 {
        return Err(Error::Unsupported(format!(
            "three-qubit Pauli operators need d = 8, got {d}"
        )));
    }
    let a = label.alpha.index();
    let b = label.beta.index();
    // (Z^a X^b x)_l = (-1)^{a.l} x_{l xor b}
    Ok(ComplexMatrix::from_fn(8, 8, |r, c| {
        if c == r ^ b {
            if bit_dot(a, r) == 0 {
                ONE
            } else {
                -ONE
            }
        } else {
            ZERO
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub covariant: bool,
    pub worst_deviation: f64,
    pub labels_checked: usize,
}

/// Checks that every Pauli label maps the line of `H_(iota,kappa)` onto the
/// line of `H_(iota+alpha, kappa+beta)`.
pub fn verify_covariance(fam: &SicFamily, tol: f64) -> Result<CovarianceReport> {
    if fam.d != 8 {
        return Err(Error::Unsupported(format!(
            "covariance check needs d = 8, got {}",
            fam.d
        )));
    }
    if !fam.hadamard.is_sylvester() {
        return Err(Error::Unsupported(
            "covariance labelling assumes the Sylvester source".into(),
        ));
    }
    let labels: Vec<PauliLabel> = PauliLabel::all().collect();
    let worst = labels
        .par_iter()
        .map(|&label| label_deviation(fam, label))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CovarianceReport {
        covariant: worst <= tol,
        worst_deviation: worst,
        labels_checked: labels.len(),
    })
}

/// Worst projector distance for one label over all 64 vectors.
pub fn label_deviation(fam: &SicFamily, label: PauliLabel) -> Result<f64> {
    let p = pauli_operator(label, fam.d)?;
    let mut worst = 0.0f64;
    for cv in &fam.vectors {
        let moved = p.apply(&cv.coords)?;
        let target = fam.vector(cv.j ^ label.alpha.index(), cv.k ^ label.beta.index());
        worst = worst.max(projector_distance(&moved, &target.coords));
    }
    Ok(worst)
}

/// Conjugates every coordinate in the canonical basis: `C(H_jk(v))`.
pub fn conjugate_set(fam: &SicFamily) -> SicFamily {
    let hadamard = if fam.hadamard.is_real() {
        fam.hadamard.clone()
    } else {
        HadamardMatrix::new(fam.hadamard.matrix().conj(), 1e-9)
            .expect("conjugate of a Hadamard is Hadamard")
    };
    let vectors: Vec<ConstructionVector> = fam
        .vectors
        .iter()
        .map(|cv| ConstructionVector {
            j: cv.j,
            k: cv.k,
            coords: cv.coords.iter().map(|z| z.conj()).collect(),
            squared_norm: cv.squared_norm,
        })
        .collect();
    let effects = fam.effects.iter().map(ComplexMatrix::conj).collect();
    let v = fam.v.conj();
    SicFamily {
        d: fam.d,
        v,
        admissibility: admissibility(&hadamard, v),
        hadamard,
        vectors,
        effects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fourier_matrix, sylvester_hadamard};

    fn hoggar() -> SicFamily {
        jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(-1.0, 2.0))
    }

    #[test]
    fn first_vector_and_norm() {
        let f = hoggar();
        let cv = f.vector(0, 0);
        assert_eq!(cv.coords[0], C64::new(-1.0, 2.0));
        assert!(cv.coords[1..].iter().all(|&z| z == ONE));
        assert_eq!(cv.squared_norm, 12.0);
        assert!(f.vectors().iter().all(|cv| cv.squared_norm == 12.0));
        assert!(f.is_admissible());
    }

    #[test]
    fn v_one_collapses_to_rows() {
        let h = sylvester_hadamard(3).unwrap();
        let f = jw_vectors(&h, ONE);
        assert!(!f.is_admissible());
        for cv in f.vectors() {
            assert_eq!(cv.coords, h.matrix().row(cv.j));
        }
        assert!(!verify_sic(&f, 1e-12).unwrap().is_sic);
    }

    #[test]
    fn d2_admissible_parameter() {
        let h = sylvester_hadamard(1).unwrap();
        let v = C64::new(1.0 + 3f64.sqrt(), 0.0) * C64::new(1.0, 1.0) / 2.0;
        let f = jw_vectors(&h, v);
        assert!(f.is_admissible());
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn hoggar_is_sic() {
        let r = verify_sic(&hoggar(), 1e-12).unwrap();
        assert!(r.is_sic, "{r:?}");
        assert!((r.overlap_value - 1.0 / 576.0).abs() < 1e-15);
        assert_eq!(r.pairs_checked, 2016);
    }

    #[test]
    fn tetrahedral_overlaps_are_one_third() {
        let h = sylvester_hadamard(1).unwrap();
        let f = jw_vectors(&h, admissible_parameters(2)[0]);
        let u = f.unit_vectors();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert!((inner(&u[a], &u[b]).norm_sqr() - 1.0 / 3.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn inadmissible_v_two_fails_loudly() {
        let f = jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(2.0, 0.0));
        let r = verify_sic(&f, 1e-12).unwrap();
        assert!(!r.is_sic);
        assert!(r.max_deviation > 0.01, "{}", r.max_deviation);
    }

    #[test]
    fn verify_rejects_empty() {
        let mut f = hoggar();
        f.vectors.clear();
        f.effects.clear();
        assert!(verify_sic(&f, 1e-12).is_err());
    }

    #[test]
    fn overlap_table_two_values() {
        let f = hoggar();
        let g = conjugate_set(&f);
        let t = overlap_table(&f, &g, 3, 5).unwrap();
        let classes = t.value_classes(1e-12);
        assert_eq!(classes.len(), 2);
        assert!(classes[0].0.abs() < 1e-20 && classes[0].1 == 28);
        assert!((classes[1].0 - 32.0).abs() < 1e-12 && classes[1].1 == 36);
        // j = m, k = n entry
        assert!((t.values[f.index(3, 5)] - 32.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_table_rejects_non_twins() {
        let f = hoggar();
        assert!(overlap_table(&f, &f, 0, 0).is_err());
        let h1 = sylvester_hadamard(1).unwrap();
        let small = jw_vectors(&h1, admissible_parameters(2)[0]);
        assert!(overlap_table(&f, &small, 0, 0).is_err());
        assert!(overlap_table(&f, &conjugate_set(&f), 8, 0).is_err());
    }

    #[test]
    fn tetrahedral_overlap_table() {
        let h = sylvester_hadamard(1).unwrap();
        let f = jw_vectors(&h, admissible_parameters(2)[0]);
        let g = conjugate_set(&f);
        for m in 0..2 {
            for n in 0..2 {
                let classes = overlap_table(&f, &g, m, n).unwrap().value_classes(1e-12);
                assert_eq!(classes.len(), 2, "{classes:?}");
                assert!(classes[0].0.abs() < 1e-12);
                assert_eq!((classes[0].1, classes[1].1), (1, 3));
            }
        }
    }

    #[test]
    fn pauli_examples() {
        assert_eq!(
            pauli_operator(PauliLabel::identity(), 8).unwrap(),
            ComplexMatrix::identity(8)
        );
        let x3 = pauli_operator(
            PauliLabel::new(BinaryTriple::ZERO, BinaryTriple::new(0, 0, 1)),
            8,
        )
        .unwrap();
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(x3[(r, c)], if c == r ^ 1 { ONE } else { ZERO });
            }
        }
        assert!(matches!(
            pauli_operator(PauliLabel::identity(), 4),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn pauli_squares_are_signed_identity() {
        for label in PauliLabel::all() {
            let p = pauli_operator(label, 8).unwrap();
            let sq = p.mul(&p).unwrap();
            let sign = if label.alpha.dot(label.beta) == 0 {
                1.0
            } else {
                -1.0
            };
            assert_eq!(sq, ComplexMatrix::identity(8).scale(C64::new(sign, 0.0)));
            let u = p.mul(&p.adjoint()).unwrap();
            assert!(u.max_abs_diff(&ComplexMatrix::identity(8)).unwrap() < 1e-14);
        }
    }

    #[test]
    fn covariance_on_twins() {
        let f = hoggar();
        assert!(verify_covariance(&f, 1e-12).unwrap().covariant);
        assert!(
            verify_covariance(&conjugate_set(&f), 1e-12)
                .unwrap()
                .covariant
        );
        assert_eq!(label_deviation(&f, PauliLabel::identity()).unwrap(), 0.0);
        let small = jw_vectors(&sylvester_hadamard(1).unwrap(), admissible_parameters(2)[0]);
        assert!(verify_covariance(&small, 1e-12).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let f = hoggar();
        let g = conjugate_set(&f);
        let direct = jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(-1.0, -2.0));
        for (a, b) in g.vectors().iter().zip(direct.vectors()) {
            assert_eq!(a.coords, b.coords);
        }
        let back = conjugate_set(&g);
        for (a, b) in back.vectors().iter().zip(f.vectors()) {
            assert_eq!(a.coords, b.coords);
        }
        assert_eq!(back.parameter(), f.parameter());
        // real parameter gives a real family, fixed by conjugation
        let real = jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(-3.0, 0.0));
        let fixed = conjugate_set(&real);
        for (a, b) in fixed.vectors().iter().zip(real.vectors()) {
            assert_eq!(a.coords, b.coords);
        }
    }

    #[test]
    fn d3_fourier_is_equiangular() {
        let h = fourier_matrix(3).unwrap();
        for v in admissible_parameters(3) {
            let f = jw_vectors(&h, v);
            assert!(f.is_admissible());
            let r = verify_sic(&f, 1e-12).unwrap();
            assert!(r.is_sic, "v={v}: {r:?}");
        }
    }

    #[test]
    fn record_round_trip_and_tamper_detection() {
        let f = hoggar();
        let rec = FamilyRecord::from(&f);
        let json = serde_json::to_string(&rec).unwrap();
        let back: FamilyRecord = serde_json::from_str(&json).unwrap();
        let g = family_from_record(&back).unwrap();
        assert_eq!(g.vectors(), f.vectors());
        let mut bad = back.clone();
        bad.vectors[5].coords[0] += C64::new(0.1, 0.0);
        assert!(family_from_record(&bad).is_err());
    }
}
