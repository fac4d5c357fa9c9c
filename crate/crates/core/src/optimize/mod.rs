//! Numerical certification of minimum entropy and informational power.
//!
//! Neither search assumes the closed-form answers. The entropy minimum is
//! found by projected gradient descent on the unit sphere from many random
//! starts; the informational power by alternating Blahut-Arimoto weight
//! updates with gradient ascent on the pool of input states. The gap
//! between the achieved mutual information and `ln k - min H` is reported
//! as a certificate.

mod blahut;
mod capacity;
mod entropy;
mod sphere;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use blahut::{blahut_arimoto, BlahutArimotoResult};
pub use capacity::{capacity_search, CapacityResult};
pub use entropy::{
    entropy_gradient, entropy_value, min_entropy_search, EntropySearchResult, RestartOutcome,
};
pub use sphere::{random_pure_state, DescentOutcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub grad_tol: f64,
    pub value_tol: f64,
    pub seed: u64,
    /// Alternation rounds in the capacity search.
    pub outer_rounds: usize,
    /// Bound gap at which a Blahut-Arimoto pass stops.
    pub ba_tol: f64,
    pub ba_max_iters: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 5000,
            step_init: 0.1,
            grad_tol: 1e-9,
            value_tol: 1e-14,
            seed: 1,
            outer_rounds: 60,
            ba_tol: 1e-12,
            ba_max_iters: 50_000,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0
            || self.max_iters == 0
            || self.outer_rounds == 0
            || self.ba_max_iters == 0
        {
            return invalid("optimizer counts must be at least 1");
        }
        let positive = [self.step_init, self.grad_tol, self.value_tol, self.ba_tol];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return invalid("optimizer step and tolerances must be positive");
        }
        Ok(())
    }
}

/// Private pseudorandom stream for restart `index` under `seed`.
pub fn restart_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            grad_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
