//! Finite POVMs and the states they measure.

use serde::{Deserialize, Serialize};

use crate::algebra::{inner, normalized, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Error, Result};

/// Identity-resolution deviation above which a POVM is rejected.
pub const POVM_IDENTITY_TOL: f64 = 1e-8;

/// Quantum state, pure (vector) or mixed (density matrix).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum State {
    Pure {
        #[serde(with = "crate::io::complex_vec")]
        coords: Vec<C64>,
    },
    Mixed {
        matrix: ComplexMatrix,
    },
}

impl State {
    /// Normalizes `coords`; rejects the zero vector.
    pub fn pure(coords: Vec<C64>) -> Result<Self> {
        let n = crate::algebra::norm_sqr(&coords);
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return invalid("pure state needs a nonzero finite vector");
        }
        Ok(State::Pure {
            coords: normalized(&coords),
        })
    }

    pub fn mixed(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix, 1e-10)?;
        Ok(State::Mixed { matrix })
    }

    pub fn dim(&self) -> usize {
        match self {
            State::Pure { coords } => coords.len(),
            State::Mixed { matrix } => matrix.rows(),
        }
    }

    pub fn density(&self) -> ComplexMatrix {
        match self {
            State::Pure { coords } => ComplexMatrix::outer(coords, 1.0),
            State::Mixed { matrix } => matrix.clone(),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        State::Mixed {
            matrix: ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
        }
    }
}

/// Checks Hermiticity, unit trace and positivity of `rho` at `tol`.
pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return invalid("density matrix must be square");
    }
    let herm = rho.hermitian_deviation();
    if herm > tol {
        return invalid(format!("density matrix not Hermitian (deviation {herm:e})"));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > tol {
        return invalid(format!("density matrix trace is {tr}, expected 1"));
    }
    let n = rho.rows();
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| rho[(r, c)]);
    let min_eig = m
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -tol {
        return invalid(format!(
            "density matrix not positive (eigenvalue {min_eig:e})"
        ));
    }
    Ok(())
}

/// Rank-one effect `weight * |vector><vector|` with a unit `vector`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOne {
    pub vector: Vec<C64>,
    pub weight: f64,
}

/// A POVM on C^d. Rank-one POVMs keep their vectors so pure-state
/// probabilities are computed as `weight * |<psi|u>|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    d: usize,
    effects: Vec<ComplexMatrix>,
    rank_one: Option<Vec<RankOne>>,
    identity_deviation: f64,
}

impl Povm {
    pub fn from_effects(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return invalid("POVM needs at least one effect");
        };
        let d = first.rows();
        if effects.iter().any(|e| e.rows() != d || e.cols() != d) {
            return invalid("POVM effects must all be d x d");
        }
        let identity_deviation = identity_deviation(&effects)?;
        if identity_deviation > POVM_IDENTITY_TOL {
            return Err(Error::InvalidPovm {
                deviation: identity_deviation,
            });
        }
        Ok(Self {
            d,
            effects,
            rank_one: None,
            identity_deviation,
        })
    }

    pub fn from_rank_one(elements: Vec<RankOne>) -> Result<Self> {
        let effects = elements
            .iter()
            .map(|e| ComplexMatrix::outer(&e.vector, e.weight))
            .collect();
        let mut povm = Self::from_effects(effects)?;
        povm.rank_one = Some(elements);
        Ok(povm)
    }

    pub fn computational_basis(d: usize) -> Self {
        let elements = (0..d)
            .map(|j| {
                let mut e = vec![ZERO; d];
                e[j] = ONE;
                RankOne {
                    vector: e,
                    weight: 1.0,
                }
            })
            .collect();
        Self::from_rank_one(elements).expect("basis projectors resolve the identity")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn rank_one(&self) -> Option<&[RankOne]> {
        self.rank_one.as_deref()
    }

    pub fn identity_deviation(&self) -> f64 {
        self.identity_deviation
    }

    /// Raw (unclamped) outcome probabilities `tr(rho Pi_j)`.
    pub fn probabilities(&self, state: &State) -> Result<Vec<f64>> {
        if state.dim() != self.d {
            return invalid(format!(
                "state dimension {} does not match POVM dimension {}",
                state.dim(),
                self.d
            ));
        }
        Ok(match (state, &self.rank_one) {
            (State::Pure { coords }, Some(r1)) => self.pure_probabilities_rank_one(coords, r1),
            (State::Pure { coords }, None) => self
                .effects
                .iter()
                .map(|e| inner(coords, &e.apply(coords).expect("dims checked")).re)
                .collect(),
            (State::Mixed { matrix }, _) => self
                .effects
                .iter()
                .map(|e| matrix.trace_product(e).expect("dims checked").re)
                .collect(),
        })
    }

    /// Probabilities for a unit vector; assumes `psi.len() == dim()`.
    pub fn pure_probabilities(&self, psi: &[C64]) -> Vec<f64> {
        match &self.rank_one {
            Some(r1) => self.pure_probabilities_rank_one(psi, r1),
            None => self
                .effects
                .iter()
                .map(|e| inner(psi, &e.apply(psi).expect("dims")).re)
                .collect(),
        }
    }

    fn pure_probabilities_rank_one(&self, psi: &[C64], r1: &[RankOne]) -> Vec<f64> {
        r1.iter()
            .map(|e| e.weight * inner(&e.vector, psi).norm_sqr())
            .collect()
    }

    /// `Pi_j psi` for every effect, used by gradient computations.
    pub(crate) fn effect_action(&self, j: usize, psi: &[C64]) -> Vec<C64> {
        match &self.rank_one {
            Some(r1) => {
                let e = &r1[j];
                let a = inner(&e.vector, psi) * e.weight;
                e.vector.iter().map(|u| u * a).collect()
            }
            None => self.effects[j].apply(psi).expect("dims"),
        }
    }
}

fn identity_deviation(effects: &[ComplexMatrix]) -> Result<f64> {
    let d = effects[0].rows();
    let mut sum = ComplexMatrix::zeros(d, d);
    for e in effects {
        sum.add_assign_scaled(e, ONE)?;
    }
    sum.max_abs_diff(&ComplexMatrix::identity(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computational_basis_probabilities() {
        let p = Povm::computational_basis(3);
        let s = State::pure(vec![ONE, C64::new(0.0, 1.0), ZERO]).unwrap();
        let probs = p.probabilities(&s).unwrap();
        assert!(
            (probs[0] - 0.5).abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15 && probs[2] == 0.0
        );
        assert!(p.probabilities(&State::maximally_mixed(2)).is_err());
    }

    #[test]
    fn rejects_incomplete_povm() {
        let e = vec![ComplexMatrix::outer(&[ONE, ZERO], 1.0)];
        assert!(matches!(
            Povm::from_effects(e),
            Err(Error::InvalidPovm { .. })
        ));
        assert!(Povm::from_effects(vec![]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(State::mixed(ComplexMatrix::identity(2)).is_err());
        let bad = ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(State::mixed(bad).is_err());
        assert!(State::mixed(State::maximally_mixed(4).density()).is_ok());
    }

    #[test]
    fn pure_and_mixed_views_agree() {
        let p = Povm::computational_basis(2);
        let coords = normalized(&[C64::new(0.3, 0.1), C64::new(-0.2, 0.9)]);
        let pure = State::pure(coords.clone()).unwrap();
        let mixed = State::Mixed {
            matrix: pure.density(),
        };
        let a = p.probabilities(&pure).unwrap();
        let b = p.probabilities(&mixed).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
