use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::blahut::blahut_arimoto_from;
use super::entropy::{
    descent_params, min_entropy_search, weighted_gradient, EntropySearchResult, LOG_FLOOR,
};
use super::sphere::{descend, random_pure_state};
use super::{restart_stream, OptimizerConfig};
use crate::algebra::{inner, normalized, C64};
use crate::error::Result;
use crate::infotheory::{mutual_information, power_from_min_entropy, Ensemble};
use crate::povm::{Povm, State};

/// Weights below this are pruned from the pool after each weight pass.
const PRUNE_WEIGHT: f64 = 1e-9;
/// Pool states closer than this in fidelity are merged.
const DUPLICATE_FIDELITY: f64 = 1.0 - 1e-10;
/// Scale of the noise added to entropy minimizers seeding the pool.
const PERTURBATION: f64 = 1e-3;
/// Iteration cap for each state-ascent step.
const ASCENT_ITERS: usize = 1000;
/// Stream ids past the restart range, for pool seeding and fresh starts.
const POOL_STREAM: u64 = 1 << 40;
const ROUND_STREAM: u64 = 1 << 41;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapacityResult {
    /// Mutual information of `ensemble`, re-evaluated from scratch.
    pub best_value: f64,
    pub ensemble: Ensemble,
    /// Minimum entropy found by the manifold search.
    pub min_entropy: f64,
    /// `ln k - min_entropy`.
    pub certificate_upper: f64,
    /// `certificate_upper - best_value`.
    pub certificate_gap: f64,
    pub rounds: usize,
    /// True when the certificate gap closed to `value_tol`, or no ascent
    /// produced an improving state.
    pub converged: bool,
    pub round_values: Vec<f64>,
    pub entropy_search: EntropySearchResult,
}

fn divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&x, _)| x > 0.0)
        .map(|(&x, &qj)| x * (x / qj.max(f64::MIN_POSITIVE)).ln())
        .sum()
}

/// Gradient ascent of `D(p(psi) || q)` over the sphere. With the other
/// pool states and weights held fixed this is ascent of the mutual
/// information in one state.
fn ascend(start: Vec<C64>, q: &[f64], povm: &Povm, cfg: &OptimizerConfig) -> (Vec<C64>, f64) {
    let mut params = descent_params(cfg);
    params.max_iters = params.max_iters.min(ASCENT_ITERS);
    let log_q: Vec<f64> = q.iter().map(|x| x.max(f64::MIN_POSITIVE).ln()).collect();
    let out = descend(
        start,
        &params,
        |x| -divergence(&clamped(povm.pure_probabilities(x)), q),
        |x| {
            let p = povm.pure_probabilities(x);
            weighted_gradient(x, povm, |j| -(p[j].max(LOG_FLOOR).ln() + 1.0 - log_q[j]))
        },
    );
    (out.state, -out.value)
}

fn clamped(mut p: Vec<f64>) -> Vec<f64> {
    p.iter_mut().for_each(|x| *x = x.max(0.0));
    p
}

fn perturb<R: Rng + ?Sized>(psi: &[C64], rng: &mut R) -> Vec<C64> {
    let x: Vec<C64> = psi
        .iter()
        .map(|z| {
            z + C64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * PERTURBATION
        })
        .collect();
    normalized(&x)
}

fn dedupe(states: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(states.len());
    for s in states {
        if out
            .iter()
            .all(|u| inner(u, &s).norm_sqr() < DUPLICATE_FIDELITY)
        {
            out.push(s);
        }
    }
    out
}

/// Searches for a maximally informative ensemble of pure states.
///
/// Each round optimizes the weights of the current pool by Blahut-Arimoto,
/// prunes states with negligible weight, then ascends the remaining
/// states and a batch of fresh random states against the current output
/// distribution. The pool is seeded with perturbed entropy minimizers and
/// `4 d^2` random states.
pub fn capacity_search(povm: &Povm, cfg: &OptimizerConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    let entropy_search = min_entropy_search(povm, cfg)?;
    let d = povm.dim();
    let k = povm.len();
    let certificate_upper = power_from_min_entropy(k, entropy_search.best_value);

    let mut rng = restart_stream(cfg.seed, POOL_STREAM);
    let mut pool: Vec<Vec<C64>> = entropy_search
        .restarts
        .iter()
        .map(|r| perturb(&r.state, &mut rng))
        .collect();
    pool.extend((0..4 * d * d).map(|_| random_pure_state(d, &mut rng)));
    let mut pool = dedupe(pool);
    let mut prior = vec![1.0 / pool.len() as f64; pool.len()];

    let fresh_per_round = (d * d).max(16);
    let mut best: Option<(f64, Vec<Vec<C64>>, Vec<f64>)> = None;
    let mut round_values = Vec::new();
    let mut converged = false;
    let mut rounds = 0;
    while rounds < cfg.outer_rounds {
        rounds += 1;
        let rows: Vec<Vec<f64>> = pool
            .iter()
            .map(|s| clamped(povm.pure_probabilities(s)))
            .collect();
        let rows: Vec<Vec<f64>> = rows
            .into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let ba = blahut_arimoto_from(&rows, prior, cfg.ba_tol, cfg.ba_max_iters)?;
        round_values.push(ba.capacity);
        if best.as_ref().is_none_or(|(v, _, _)| ba.capacity > *v) {
            best = Some((ba.capacity, pool.clone(), ba.prior.clone()));
        }
        if certificate_upper - ba.capacity <= cfg.value_tol {
            converged = true;
            break;
        }
        let q: Vec<f64> = {
            let mut q = vec![0.0; k];
            for (row, &w) in rows.iter().zip(&ba.prior) {
                for (o, x) in q.iter_mut().zip(row) {
                    *o += w * x;
                }
            }
            q
        };

        let mut starts: Vec<Vec<C64>> = pool
            .iter()
            .zip(&ba.prior)
            .filter(|(_, &w)| w >= PRUNE_WEIGHT)
            .map(|(s, _)| s.clone())
            .collect();
        let retained = starts.len();
        let mut fresh_rng = restart_stream(cfg.seed, ROUND_STREAM + rounds as u64);
        starts.extend((0..fresh_per_round).map(|_| random_pure_state(d, &mut fresh_rng)));
        let ascended: Vec<(Vec<C64>, f64)> = starts
            .into_par_iter()
            .map(|s| ascend(s, &q, povm, cfg))
            .collect();

        let improving = ascended
            .iter()
            .any(|(_, dv)| *dv > ba.capacity + cfg.value_tol);
        if !improving {
            converged = true;
            break;
        }
        // keep retained states even if their ascent stalled; keep fresh
        // ones only when they could carry weight
        let next: Vec<Vec<C64>> = ascended
            .into_iter()
            .enumerate()
            .filter(|(i, (_, dv))| *i < retained || *dv > ba.capacity - 1e-9)
            .map(|(_, (s, _))| s)
            .collect();
        pool = dedupe(next);
        prior = vec![1.0 / pool.len() as f64; pool.len()];
    }

    let (_, states, weights) = best.expect("at least one round ran");
    let (states, weights): (Vec<_>, Vec<_>) = states
        .into_iter()
        .zip(weights)
        .filter(|(_, w)| *w > 0.0)
        .unzip();
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
    let ensemble = Ensemble::new(
        states
            .into_iter()
            .map(|s| State::Pure { coords: s })
            .collect(),
        weights,
    )?;
    let best_value = mutual_information(&ensemble, povm)?;
    Ok(CapacityResult {
        best_value,
        ensemble,
        min_entropy: entropy_search.best_value,
        certificate_upper,
        certificate_gap: certificate_upper - best_value,
        rounds,
        converged,
        round_values,
        entropy_search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sylvester_hadamard;
    use crate::sic::{admissible_parameters, jw_vectors};

    #[test]
    fn basis_measurement_capacity_is_ln2() {
        let povm = Povm::computational_basis(2);
        let cfg = OptimizerConfig {
            restarts: 4,
            ..Default::default()
        };
        let r = capacity_search(&povm, &cfg).unwrap();
        assert!((r.best_value - 2f64.ln()).abs() < 1e-8, "{}", r.best_value);
        assert!(r.certificate_gap.abs() < 1e-8);
    }

    #[test]
    fn tetrahedral_capacity() {
        let f = jw_vectors(&sylvester_hadamard(1).unwrap(), admissible_parameters(2)[0]);
        let povm = f.povm().unwrap();
        let cfg = OptimizerConfig {
            restarts: 16,
            ..Default::default()
        };
        let r = capacity_search(&povm, &cfg).unwrap();
        let target = (4.0f64 / 3.0).ln();
        assert!((r.best_value - target).abs() < 1e-6, "{}", r.best_value);
        assert!(
            r.certificate_gap <= 1e-6 && r.certificate_gap >= -1e-9,
            "{}",
            r.certificate_gap
        );
    }
}
