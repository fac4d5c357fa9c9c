use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{inner, norm_sqr, normalized, C64};

/// Haar-random unit vector: i.i.d. standard complex Gaussians, normalized.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if norm_sqr(&v) > 1e-300 {
            return normalized(&v);
        }
    }
}

/// Removes the component of `g` along `psi` (both the radial and the
/// phase directions).
pub(crate) fn project_tangent(psi: &[C64], g: &mut [C64]) {
    let c = inner(psi, g);
    for (gi, pi) in g.iter_mut().zip(psi) {
        *gi -= pi * c;
    }
}

/// Real inner product `Re <a, b>` on C^d viewed as R^{2d}.
#[cfg(test)]
pub(crate) fn real_inner(a: &[C64], b: &[C64]) -> f64 {
    inner(a, b).re
}

fn retract(psi: &[C64], dir: &[C64], t: f64) -> Vec<C64> {
    let x: Vec<C64> = psi.iter().zip(dir).map(|(p, g)| p + g * t).collect();
    normalized(&x)
}

#[derive(Clone, Debug)]
pub struct DescentOutcome {
    pub state: Vec<C64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
}

pub(crate) struct DescentParams {
    pub max_iters: usize,
    pub step_init: f64,
    pub grad_tol: f64,
    pub value_tol: f64,
}

const ARMIJO_C: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-16;

/// Projected gradient descent with Armijo backtracking on the unit sphere.
/// `grad` must return the tangent (Riemannian) gradient.
pub(crate) fn descend(
    start: Vec<C64>,
    params: &DescentParams,
    value: impl Fn(&[C64]) -> f64,
    grad: impl Fn(&[C64]) -> Vec<C64>,
) -> DescentOutcome {
    let mut psi = start;
    let mut f = value(&psi);
    let mut step = params.step_init;
    let mut grad_norm = f64::INFINITY;
    for it in 0..params.max_iters {
        let g = grad(&psi);
        let gn2 = norm_sqr(&g);
        grad_norm = gn2.sqrt();
        if grad_norm < params.grad_tol {
            return DescentOutcome {
                state: psi,
                value: f,
                iterations: it,
                converged: true,
                grad_norm,
            };
        }
        let dir: Vec<C64> = g.iter().map(|z| -z).collect();
        // try a longer step first, then backtrack
        let mut t = 2.0 * step;
        let (next, fnext) = loop {
            let x = retract(&psi, &dir, t);
            let fx = value(&x);
            if fx <= f - ARMIJO_C * t * gn2 || t < MIN_STEP {
                break (x, fx);
            }
            t *= BACKTRACK;
        };
        step = t.max(MIN_STEP);
        let change = f - fnext;
        if fnext <= f {
            psi = next;
            f = fnext;
        }
        if change.abs() < params.value_tol {
            return DescentOutcome {
                state: psi,
                value: f,
                iterations: it + 1,
                converged: true,
                grad_norm,
            };
        }
    }
    DescentOutcome {
        state: psi,
        value: f,
        iterations: params.max_iters,
        converged: false,
        grad_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::restart_stream;

    #[test]
    fn random_states_are_unit_and_reproducible() {
        let a = random_pure_state(8, &mut restart_stream(7, 3));
        let b = random_pure_state(8, &mut restart_stream(7, 3));
        let c = random_pure_state(8, &mut restart_stream(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((norm_sqr(&a) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = restart_stream(11, 0);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| random_pure_state(8, &mut rng)[0].norm_sqr())
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.125).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn descent_finds_rayleigh_minimum() {
        // minimize <psi|A|psi> for diagonal A: optimum is the smallest entry
        let a = [3.0, 1.0, 2.0, 5.0];
        let value = |x: &[C64]| x.iter().zip(&a).map(|(z, w)| z.norm_sqr() * w).sum::<f64>();
        let grad = |x: &[C64]| {
            let mut g: Vec<C64> = x.iter().zip(&a).map(|(z, w)| z * (2.0 * w)).collect();
            project_tangent(x, &mut g);
            g
        };
        let start = random_pure_state(4, &mut restart_stream(1, 0));
        let params = DescentParams {
            max_iters: 5000,
            step_init: 0.1,
            grad_tol: 1e-10,
            value_tol: 1e-16,
        };
        let out = descend(start, &params, value, grad);
        assert!((out.value - 1.0).abs() < 1e-12, "{}", out.value);
        assert!(out.state[1].norm_sqr() > 1.0 - 1e-10);
    }
}
