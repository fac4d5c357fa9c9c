use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlahutArimotoResult {
    pub prior: Vec<f64>,
    /// Mutual information achieved by `prior`.
    pub capacity: f64,
    /// `max_i D(Q_i || q)`, an upper bound on the channel capacity.
    pub upper_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Mutual information after each update, starting from the uniform prior.
    pub history: Vec<f64>,
}

/// Divergences `D(Q_i || q)` for every input row.
fn divergences(q_rows: &[Vec<f64>], q: &[f64]) -> Vec<f64> {
    q_rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(q)
                .filter(|(&x, _)| x > 0.0)
                .map(|(&x, &qj)| {
                    if qj > 0.0 {
                        x * (x / qj).ln()
                    } else {
                        f64::INFINITY
                    }
                })
                .sum()
        })
        .collect()
}

fn output(q_rows: &[Vec<f64>], prior: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; q_rows[0].len()];
    for (row, &p) in q_rows.iter().zip(prior) {
        for (o, x) in q.iter_mut().zip(row) {
            *o += p * x;
        }
    }
    q
}

/// Capacity of the discrete channel with row-stochastic matrix `q_rows`
/// (inputs by outputs), by the alternating Blahut-Arimoto iteration.
/// Stops once the certified gap `upper - achieved` is at most `tol`.
pub fn blahut_arimoto(
    q_rows: &[Vec<f64>],
    tol: f64,
    max_iters: usize,
) -> Result<BlahutArimotoResult> {
    let m = q_rows.len();
    blahut_arimoto_from(q_rows, vec![1.0 / m.max(1) as f64; m], tol, max_iters)
}

/// As [`blahut_arimoto`], starting from `prior` (must be positive and sum to 1).
pub(crate) fn blahut_arimoto_from(
    q_rows: &[Vec<f64>],
    mut prior: Vec<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<BlahutArimotoResult> {
    let Some(first) = q_rows.first() else {
        return invalid("channel needs at least one input");
    };
    let k = first.len();
    if k == 0 {
        return invalid("channel needs at least one output");
    }
    for (i, row) in q_rows.iter().enumerate() {
        if row.len() != k {
            return invalid(format!("row {i} has {} outputs, expected {k}", row.len()));
        }
        if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return invalid(format!("row {i} has a negative or non-finite entry"));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return invalid(format!("row {i} sums to {s}, not 1"));
        }
    }
    if prior.len() != q_rows.len() {
        return invalid("prior length does not match the number of inputs");
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let q = output(q_rows, &prior);
        let div = divergences(q_rows, &q);
        let achieved: f64 = prior
            .iter()
            .zip(&div)
            .filter(|(&p, _)| p > 0.0)
            .map(|(p, dv)| p * dv)
            .sum();
        let upper = div.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        history.push(achieved);
        let converged = upper - achieved <= tol;
        if converged || iterations >= max_iters {
            return Ok(BlahutArimotoResult {
                prior,
                capacity: achieved.max(0.0),
                upper_bound: upper,
                iterations,
                converged,
                history,
            });
        }
        // p_i <- p_i exp(D_i) / Z, shifted by the max for stability
        let shift = upper;
        let mut z = 0.0;
        for (p, dv) in prior.iter_mut().zip(&div) {
            *p *= (dv - shift).exp();
            z += *p;
        }
        for p in prior.iter_mut() {
            *p /= z;
        }
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::eta;

    #[test]
    fn identity_channel() {
        let r = blahut_arimoto(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-12, 1000).unwrap();
        assert!((r.capacity - 2f64.ln()).abs() < 1e-12);
        assert!((r.prior[0] - 0.5).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn identical_rows_have_zero_capacity() {
        let r = blahut_arimoto(
            &[vec![0.3, 0.7], vec![0.3, 0.7], vec![0.3, 0.7]],
            1e-12,
            1000,
        )
        .unwrap();
        assert!(r.capacity.abs() < 1e-15);
    }

    #[test]
    fn binary_symmetric_channel() {
        let closed_form = 2f64.ln() - eta(0.1) - eta(0.9);
        let r = blahut_arimoto(&[vec![0.9, 0.1], vec![0.1, 0.9]], 1e-13, 10_000).unwrap();
        assert!(
            (r.capacity - closed_form).abs() < 1e-9,
            "{} vs {closed_form}",
            r.capacity
        );
        assert!((closed_form - 0.368_064_207_168_497).abs() < 1e-12);
    }

    #[test]
    fn iterates_do_not_decrease() {
        let q = vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.1, 0.8],
            vec![0.3, 0.4, 0.3],
            vec![0.25, 0.25, 0.5],
        ];
        let r = blahut_arimoto(&q, 1e-14, 500).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-14, "{} then {}", w[0], w[1]);
        }
        assert!(r.upper_bound >= r.capacity);
    }

    #[test]
    fn rejects_bad_channels() {
        assert!(blahut_arimoto(&[], 1e-9, 10).is_err());
        assert!(blahut_arimoto(&[vec![0.5, 0.4]], 1e-9, 10).is_err());
        assert!(blahut_arimoto(&[vec![1.0], vec![0.5, 0.5]], 1e-9, 10).is_err());
        assert!(blahut_arimoto(&[vec![1.5, -0.5]], 1e-9, 10).is_err());
    }

    #[test]
    fn gap_flag_when_iterations_run_out() {
        let q = vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.1, 0.8],
            vec![0.3, 0.4, 0.3],
        ];
        let r = blahut_arimoto(&q, 1e-15, 1).unwrap();
        assert!(!r.converged);
    }
}
