//! Outcome statistics and information quantities of a measurement.
//!
//! All logarithms are natural, so entropies and capacities are in nats.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::povm::{validate_density, Povm, State};

/// Probabilities below this count as zeros in `zero_count`.
pub const ZERO_THRESHOLD: f64 = 1e-10;
/// Negative rounding noise down to this value is clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-14;
/// Tolerance on `sum p = 1` and on ensemble weights.
pub const SUM_TOL: f64 = 1e-12;

/// `eta(t) = -t ln t`, with `eta(0) = 0`.
pub fn eta(t: f64) -> f64 {
    if t > 0.0 {
        -t * t.ln()
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr")]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
    zero_count: usize,
}

#[derive(Deserialize)]
struct DistributionRepr {
    probs: Vec<f64>,
}

impl TryFrom<DistributionRepr> for OutcomeDistribution {
    type Error = Error;

    fn try_from(r: DistributionRepr) -> Result<Self> {
        Self::new(r.probs)
    }
}

impl OutcomeDistribution {
    /// Clamps tiny negatives and checks normalization.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("distribution needs at least one outcome");
        }
        let probs = clamp_probabilities(probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Self::from_clamped(probs))
    }

    fn from_clamped(probs: Vec<f64>) -> Self {
        let zero_count = probs.iter().filter(|&&p| p < ZERO_THRESHOLD).count();
        Self { probs, zero_count }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }
}

fn clamp_probabilities(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    for p in probs.iter_mut() {
        if !p.is_finite() || *p < -NEGATIVE_CLAMP {
            return invalid(format!("probability {p} is not in [0, 1]"));
        }
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    Ok(probs)
}

/// `p_j = tr(rho Pi_j)`.
pub fn outcome_distribution(state: &State, povm: &Povm) -> Result<OutcomeDistribution> {
    let probs = clamp_probabilities(povm.probabilities(state)?)?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        // only reachable for POVMs accepted with identity error above SUM_TOL
        return Ok(OutcomeDistribution::from_clamped(
            probs.into_iter().map(|p| p / total).collect(),
        ));
    }
    Ok(OutcomeDistribution::from_clamped(probs))
}

pub fn shannon_entropy(p: &OutcomeDistribution) -> f64 {
    p.probs.iter().copied().map(eta).sum()
}

/// Entropy of the measurement in the given state.
pub fn measurement_entropy(state: &State, povm: &Povm) -> Result<f64> {
    Ok(shannon_entropy(&outcome_distribution(state, povm)?))
}

/// Sum of squared probabilities.
pub fn index_of_coincidence(p: &OutcomeDistribution) -> f64 {
    p.probs.iter().map(|x| x * x).sum()
}

/// Weighted list of states with weights on the simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr")]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<State>,
}

#[derive(Deserialize)]
struct EnsembleRepr {
    weights: Vec<f64>,
    states: Vec<State>,
}

impl TryFrom<EnsembleRepr> for Ensemble {
    type Error = Error;

    fn try_from(r: EnsembleRepr) -> Result<Self> {
        Self::new(r.states, r.weights)
    }
}

impl Ensemble {
    pub fn new(states: Vec<State>, weights: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return invalid(format!(
                "{} states but {} weights",
                states.len(),
                weights.len()
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return invalid("weights must be nonnegative");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return invalid(format!("weights sum to {total}, not 1"));
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return invalid("ensemble states have different dimensions");
            }
            match s {
                State::Pure { coords } => {
                    let n = crate::algebra::norm_sqr(coords);
                    if (n - 1.0).abs() > 1e-10 {
                        return invalid(format!("pure state has squared norm {n}"));
                    }
                }
                State::Mixed { matrix } => validate_density(matrix, 1e-10)?,
            }
        }
        Ok(Self { weights, states })
    }

    /// Equal weights over `states`.
    pub fn uniform(states: Vec<State>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        let n = states.len();
        Self::new(states, vec![w; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// The average state `sum_i p_i tau_i`.
    pub fn average(&self) -> crate::algebra::ComplexMatrix {
        let d = self.dim();
        let mut rho = crate::algebra::ComplexMatrix::zeros(d, d);
        for (s, &w) in self.states.iter().zip(&self.weights) {
            rho.add_assign_scaled(&s.density(), crate::algebra::C64::new(w, 0.0))
                .expect("same dims");
        }
        rho
    }
}

/// `P_ij = p_i tr(tau_i Pi_j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl JointTable {
    pub fn new(ensemble: &Ensemble, povm: &Povm) -> Result<Self> {
        let mut entries = Vec::with_capacity(ensemble.len() * povm.len());
        for (s, &w) in ensemble.states.iter().zip(&ensemble.weights) {
            let p = outcome_distribution(s, povm)?;
            entries.extend(p.probs.iter().map(|x| w * x));
        }
        Ok(Self {
            rows: ensemble.len(),
            cols: povm.len(),
            entries,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.entries.chunks(self.cols) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += x;
            }
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }
}

/// `I(E, Pi)` from the three-term joint-table formula.
pub fn mutual_information(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    let table = JointTable::new(ensemble, povm)?;
    let inputs: f64 = table.row_sums().into_iter().map(eta).sum();
    let outputs: f64 = table.col_sums().into_iter().map(eta).sum();
    let joint: f64 = table.entries.iter().copied().map(eta).sum();
    Ok((inputs + outputs - joint).max(0.0))
}

/// Holevo quantity of the quantum-classical channel at a fixed ensemble:
/// `S(sum p_i Phi(tau_i)) - sum p_i S(Phi(tau_i))`. The channel output is
/// diagonal, so von Neumann entropies are Shannon entropies.
pub fn holevo_quantity(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    let mut average = vec![0.0; povm.len()];
    let mut conditional = 0.0;
    for (s, &w) in ensemble.states.iter().zip(&ensemble.weights) {
        let p = outcome_distribution(s, povm)?;
        conditional += w * shannon_entropy(&p);
        for (a, x) in average.iter_mut().zip(&p.probs) {
            *a += w * x;
        }
    }
    let output: f64 = average.into_iter().map(eta).sum();
    Ok((output - conditional).max(0.0))
}

/// Lower bound `ln(d(d+1)/2)` on the entropy of a SIC-POVM.
pub fn sic_min_entropy_bound(d: usize) -> f64 {
    let d = d as f64;
    (d * (d + 1.0) / 2.0).ln()
}

/// Largest entropy of a SIC-POVM on a pure state,
/// `ln d + ((d-1)/d) ln(d+1)`, attained at the SIC states themselves.
pub fn sic_max_entropy_bound(d: usize) -> f64 {
    let d = d as f64;
    d.ln() + (d - 1.0) / d * (d + 1.0).ln()
}

/// Upper bound `ln(2d/(d+1))` on the informational power of a SIC-POVM,
/// computed as `ln(d^2) - sic_min_entropy_bound(d)`.
pub fn sic_power_bound(d: usize) -> f64 {
    power_from_min_entropy(d * d, sic_min_entropy_bound(d))
}

/// `ln k - min H`: the bound on informational power from the minimum entropy.
pub fn power_from_min_entropy(k: usize, min_entropy: f64) -> f64 {
    (k as f64).ln() - min_entropy
}

/// Entropy-minimizing distribution of length `len` with index of
/// coincidence `r`: `1/r` entries equal to `r`, the rest zero.
pub fn ht_minimizer(r: f64, len: usize) -> Result<OutcomeDistribution> {
    if !(r > 0.0 && r <= 1.0) {
        return invalid(format!("coincidence index {r} outside (0, 1]"));
    }
    let inv = 1.0 / r;
    let n = inv.round();
    if (inv - n).abs() > 1e-9 {
        return Err(Error::Unsupported(format!("1/r = {inv} is not an integer")));
    }
    let n = n as usize;
    if n > len {
        return invalid(format!("need {n} outcomes, only {len} available"));
    }
    let mut probs = vec![0.0; len];
    for p in probs.iter_mut().take(n) {
        *p = 1.0 / n as f64;
    }
    OutcomeDistribution::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sylvester_hadamard, C64, ONE, ZERO};
    use crate::sic::{admissible_parameters, conjugate_set, jw_vectors};

    fn hoggar_povm() -> (crate::sic::SicFamily, Povm) {
        let f = jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(-1.0, 2.0));
        let p = f.povm().unwrap();
        (f, p)
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let (_, povm) = hoggar_povm();
        let p = outcome_distribution(&State::maximally_mixed(8), &povm).unwrap();
        assert!(p.probs().iter().all(|x| (x - 1.0 / 64.0).abs() < 1e-15));
        assert_eq!(p.zero_count(), 0);
        assert!((shannon_entropy(&p) - 64f64.ln()).abs() < 1e-13);
        assert!((index_of_coincidence(&p) - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn twin_state_has_28_zeros() {
        let (f, povm) = hoggar_povm();
        let g = conjugate_set(&f);
        let s = State::pure(g.vector(2, 6).coords.clone()).unwrap();
        let p = outcome_distribution(&s, &povm).unwrap();
        assert_eq!(p.zero_count(), 28);
        assert!(p
            .probs()
            .iter()
            .filter(|&&x| x > ZERO_THRESHOLD)
            .all(|x| (x - 1.0 / 36.0).abs() < 1e-13));
        assert!((shannon_entropy(&p) - 36f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn own_vector_distribution() {
        let (f, povm) = hoggar_povm();
        let s = State::pure(f.vector(0, 0).coords.clone()).unwrap();
        let p = outcome_distribution(&s, &povm).unwrap();
        assert!((p.probs()[0] - 1.0 / 8.0).abs() < 1e-15);
        assert!(p.probs()[1..]
            .iter()
            .all(|x| (x - 1.0 / 72.0).abs() < 1e-15));
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_examples() {
        let point = OutcomeDistribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&point), 0.0);
        assert_eq!(index_of_coincidence(&point), 1.0);
        let mut v = vec![1.0 / 36.0; 36];
        v.extend([0.0; 28]);
        let p = OutcomeDistribution::new(v).unwrap();
        assert_eq!(p.zero_count(), 28);
        assert!((shannon_entropy(&p) - 3.58351893845611).abs() < 1e-14);
    }

    #[test]
    fn distribution_validation() {
        assert!(OutcomeDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(OutcomeDistribution::new(vec![1.0, -1e-3]).is_err());
        let p = OutcomeDistribution::new(vec![1.0, -1e-15]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        let parsed: OutcomeDistribution =
            serde_json::from_str(r#"{"probs":[0.25,0.75],"zero_count":0}"#).unwrap();
        assert_eq!(parsed.len(), 2);
    }

    #[test]
    fn single_state_ensemble_carries_no_information() {
        let (f, povm) = hoggar_povm();
        let e =
            Ensemble::uniform(vec![State::pure(f.vector(1, 1).coords.clone()).unwrap()]).unwrap();
        assert_eq!(mutual_information(&e, &povm).unwrap(), 0.0);
        assert!(holevo_quantity(&e, &povm).unwrap().abs() < 1e-15);
    }

    #[test]
    fn hoggar_twin_ensemble() {
        let (f, povm) = hoggar_povm();
        let g = conjugate_set(&f);
        let e = Ensemble::uniform(
            g.unit_vectors()
                .into_iter()
                .map(|v| State::pure(v).unwrap())
                .collect(),
        )
        .unwrap();
        let target = 2.0 * (4.0f64 / 3.0).ln();
        let mi = mutual_information(&e, &povm).unwrap();
        let chi = holevo_quantity(&e, &povm).unwrap();
        assert!((mi - target).abs() < 1e-12, "{mi}");
        assert!((mi - chi).abs() < 1e-12);
    }

    #[test]
    fn tetrahedral_twin_ensemble() {
        let f = jw_vectors(&sylvester_hadamard(1).unwrap(), admissible_parameters(2)[0]);
        let povm = f.povm().unwrap();
        let g = conjugate_set(&f);
        let e = Ensemble::uniform(
            g.unit_vectors()
                .into_iter()
                .map(|v| State::pure(v).unwrap())
                .collect(),
        )
        .unwrap();
        assert!((mutual_information(&e, &povm).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn bounds() {
        assert!((sic_min_entropy_bound(8) - 36f64.ln()).abs() < 1e-15);
        assert!((sic_power_bound(8) - (16.0f64 / 9.0).ln()).abs() < 1e-15);
        assert!((sic_min_entropy_bound(2) - 3f64.ln()).abs() < 1e-15);
        assert!((sic_power_bound(2) - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        for d in 2..=16 {
            assert_eq!(
                sic_power_bound(d),
                ((d * d) as f64).ln() - sic_min_entropy_bound(d)
            );
        }
        assert!((power_from_min_entropy(64, 36f64.ln()) - (16.0f64 / 9.0).ln()).abs() < 1e-15);
        assert!((power_from_min_entropy(4, 3f64.ln()) - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(power_from_min_entropy(7, 7f64.ln()), 0.0);
    }

    #[test]
    fn ht_minimizer_cases() {
        let p = ht_minimizer(1.0 / 36.0, 64).unwrap();
        assert_eq!(p.zero_count(), 28);
        assert!((shannon_entropy(&p) - 36f64.ln()).abs() < 1e-14);
        let p = ht_minimizer(1.0, 5).unwrap();
        assert_eq!(shannon_entropy(&p), 0.0);
        let p = ht_minimizer(1.0 / 3.0, 4).unwrap();
        assert_eq!(p.probs()[3], 0.0);
        assert!((shannon_entropy(&p) - 3f64.ln()).abs() < 1e-15);
        assert!(matches!(ht_minimizer(0.3, 10), Err(Error::Unsupported(_))));
        assert!(ht_minimizer(0.1, 5).is_err());
    }

    #[test]
    fn ensemble_validation() {
        let s = State::pure(vec![ONE, ZERO]).unwrap();
        assert!(Ensemble::new(vec![s.clone()], vec![0.5]).is_err());
        assert!(Ensemble::new(vec![s.clone(), s.clone()], vec![1.5, -0.5]).is_err());
        let json = r#"{"weights":[1.0],"states":[{"kind":"pure","coords":[[2.0,0.0],[0.0,0.0]]}]}"#;
        assert!(serde_json::from_str::<Ensemble>(json).is_err());
        let json = r#"{"weights":[0.5,0.5],"states":[{"kind":"pure","coords":[[1.0,0.0],[0.0,0.0]]},
            {"kind":"mixed","matrix":{"rows":2,"cols":2,"entries":[[0.5,0],[0,0],[0,0],[0.5,0]]}}]}"#;
        let e: Ensemble = serde_json::from_str(json).unwrap();
        assert_eq!(e.len(), 2);
    }
}
