//! Named verification checks over a twin pair of SIC families.
//!
//! Every check reads a shared [`CheckContext`] and returns one or more
//! [`CheckOutcome`] rows. The [`CheckRegistry`] keeps them in a fixed order
//! so aggregate reports are reproducible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{inner, projector_distance, sylvester_hadamard, HadamardMatrix, C64};
use crate::bloch::{family_reflection_check, hermitian_basis, simplex_check};
use crate::designs::{
    block_translation_check, difference_set_check, frame_potential, haar_moment,
    membership_mismatches, verify_symmetric_design, zero_blocks, StateSet, ZeroBlockDesign,
    MENON_PARAMS,
};
use crate::error::{Error, Result};
use crate::infotheory::{
    eta, index_of_coincidence, measurement_entropy, mutual_information, sic_max_entropy_bound,
    sic_min_entropy_bound, sic_power_bound, Ensemble, OutcomeDistribution, ZERO_THRESHOLD,
};
use crate::optimize::{
    blahut_arimoto, capacity_search, entropy_gradient, entropy_value, min_entropy_search,
    random_pure_state, restart_stream, CapacityResult, EntropySearchResult, OptimizerConfig,
};
use crate::povm::{Povm, State};
use crate::sic::{verify_covariance, verify_sic, SicFamily};

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    /// Passes when `|value - expected| <= tolerance`.
    pub fn close(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (value - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            pass,
            value,
            expected,
            tolerance,
        }
    }

    /// Exact integer comparison.
    pub fn count(name: impl Into<String>, value: usize, expected: usize) -> Self {
        Self {
            name: name.into(),
            pass: value == expected,
            value: value as f64,
            expected: expected as f64,
            tolerance: 0.0,
        }
    }

    /// A deviation that should vanish: passes when `value <= bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass: value <= bound,
            value,
            expected: 0.0,
            tolerance: bound,
        }
    }
}

/// Inputs shared by all checks.
#[derive(Clone, Debug)]
pub struct CheckContext {
    pub family: SicFamily,
    pub twin: SicFamily,
    pub optimizer: OptimizerConfig,
    /// Overrides the per-check tolerance when set.
    pub tol: Option<f64>,
    pub haar_samples: usize,
    pub monte_carlo_pairs: usize,
}

impl CheckContext {
    pub fn new(family: SicFamily, twin: SicFamily) -> Self {
        Self {
            family,
            twin,
            optimizer: OptimizerConfig::default(),
            tol: None,
            haar_samples: 100_000,
            monte_carlo_pairs: 1_000_000,
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn d(&self) -> usize {
        self.family.dim()
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Returns [`Error::Unsupported`] when the context does not apply.
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>>;
}

/// Checks in registration order.
#[derive(Default)]
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

/// Outcome of running a set of checks.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CheckRun {
    pub outcomes: Vec<CheckOutcome>,
    /// Checks that did not apply, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl CheckRun {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

impl CheckRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::new();
        r.register(Box::new(SicCheck));
        r.register(Box::new(TwinEntropyCheck));
        r.register(Box::new(TwinPowerCheck));
        r.register(Box::new(MinEntropyCheck));
        r.register(Box::new(CapacityCheck));
        r.register(Box::new(HaarSamplingCheck));
        r.register(Box::new(ZeroDesignCheck));
        r.register(Box::new(FramePotentialCheck));
        r.register(Box::new(CovarianceCheck));
        r.register(Box::new(BlochCheck));
        r.register(Box::new(OracleCheck));
        r
    }

    /// Replaces any check with the same name.
    pub fn register(&mut self, check: Box<dyn Check>) {
        if let Some(slot) = self.checks.iter_mut().find(|c| c.name() == check.name()) {
            *slot = check;
        } else {
            self.checks.push(check);
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.iter().map(|c| c.name())
    }

    /// Runs the named checks, or all of them when `names` is empty.
    pub fn run(&self, names: &[&str], ctx: &CheckContext) -> Result<CheckRun> {
        let selected: Vec<&dyn Check> = if names.is_empty() {
            self.checks.iter().map(|c| c.as_ref()).collect()
        } else {
            names
                .iter()
                .map(|n| {
                    self.get(n)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown check '{n}'")))
                })
                .collect::<Result<_>>()?
        };
        let mut run = CheckRun::default();
        for check in selected {
            match check.run(ctx) {
                Ok(rows) => run.outcomes.extend(rows),
                Err(Error::Unsupported(why)) => run.skipped.push((check.name().to_string(), why)),
                Err(e) => return Err(e),
            }
        }
        Ok(run)
    }
}

fn require_hoggar_shape(fam: &SicFamily) -> Result<()> {
    if fam.dim() != 8 || !fam.hadamard().is_sylvester() {
        return Err(Error::Unsupported(
            "needs d = 8 over the Sylvester matrix".into(),
        ));
    }
    Ok(())
}

fn require_real(fam: &SicFamily) -> Result<()> {
    if !fam.hadamard().is_real() {
        return Err(Error::Unsupported("needs a real Hadamard source".into()));
    }
    Ok(())
}

pub struct SicCheck;

impl Check for SicCheck {
    fn name(&self) -> &'static str {
        "sic"
    }
    fn description(&self) -> &'static str {
        "equal pairwise overlaps and identity resolution, for the family and its twin"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let tol = ctx.tol(1e-12);
        let mut rows = Vec::new();
        for (label, fam) in [("sic", &ctx.family), ("sic.twin", &ctx.twin)] {
            let r = verify_sic(fam, tol)?;
            let worst_pair = r.max_deviation;
            rows.push(CheckOutcome {
                pass: r.is_sic,
                ..CheckOutcome::at_most(format!("{label}.max_deviation"), worst_pair, tol)
            });
            rows.push(CheckOutcome::at_most(
                format!("{label}.identity_deviation"),
                r.identity_deviation,
                tol,
            ));
        }
        Ok(rows)
    }
}

/// Entropy and outcome profile of every twin state measured by the family.
pub struct TwinEntropyCheck;

impl Check for TwinEntropyCheck {
    fn name(&self) -> &'static str {
        "twin-entropy"
    }
    fn description(&self) -> &'static str {
        "each twin state has d(d-1)/2 zero outcomes, the rest 2/(d(d+1)), entropy ln(d(d+1)/2)"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        require_real(&ctx.family)?;
        let d = ctx.d();
        let povm = ctx.family.povm()?;
        let flat = 2.0 / (d * (d + 1)) as f64;
        let zeros = d * (d - 1) / 2;
        let tol = ctx.tol(1e-12);
        let mut good = 0;
        let mut worst_entropy = 0.0f64;
        for psi in ctx.twin.unit_vectors() {
            let p = povm.pure_probabilities(&psi);
            let z = p.iter().filter(|x| **x < ZERO_THRESHOLD).count();
            let flat_ok = p
                .iter()
                .filter(|x| **x >= ZERO_THRESHOLD)
                .all(|x| (x - flat).abs() <= tol);
            if z == zeros && flat_ok {
                good += 1;
            }
            let h = measurement_entropy(&State::Pure { coords: psi }, &povm)?;
            worst_entropy = worst_entropy.max((h - sic_min_entropy_bound(d)).abs());
        }
        Ok(vec![
            CheckOutcome::count("twin-entropy.profiles", good, d * d),
            CheckOutcome::at_most("twin-entropy.max_deviation", worst_entropy, ctx.tol(1e-10)),
        ])
    }
}

/// Mutual information of the uniform twin ensemble and the flat-average
/// condition.
pub struct TwinPowerCheck;

impl Check for TwinPowerCheck {
    fn name(&self) -> &'static str {
        "twin-power"
    }
    fn description(&self) -> &'static str {
        "uniform twin ensemble reaches ln(2d/(d+1)) with tr(rho_avg Pi_j) = 1/d^2"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        require_real(&ctx.family)?;
        let d = ctx.d();
        let povm = ctx.family.povm()?;
        let ensemble = twin_ensemble(&ctx.twin)?;
        let mi = mutual_information(&ensemble, &povm)?;
        let avg = State::Mixed {
            matrix: ensemble.average(),
        };
        let flat = 1.0 / (d * d) as f64;
        let dev = povm
            .probabilities(&avg)?
            .iter()
            .map(|p| (p - flat).abs())
            .fold(0.0, f64::max);
        Ok(vec![
            CheckOutcome::close(
                "twin-power.mutual_information",
                mi,
                sic_power_bound(d),
                ctx.tol(1e-10),
            ),
            CheckOutcome::at_most("twin-power.average_deviation", dev, ctx.tol(1e-12)),
        ])
    }
}

/// Equiprobable ensemble of the states of `fam`.
pub fn twin_ensemble(fam: &SicFamily) -> Result<Ensemble> {
    Ensemble::uniform(
        fam.unit_vectors()
            .into_iter()
            .map(|coords| State::Pure { coords })
            .collect(),
    )
}

pub struct MinEntropyCheck;

impl Check for MinEntropyCheck {
    fn name(&self) -> &'static str {
        "min-entropy"
    }
    fn description(&self) -> &'static str {
        "multi-restart manifold search reaches ln(d(d+1)/2); global minimizers are twin states"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let r = min_entropy_search(&ctx.family.povm()?, &ctx.optimizer)?;
        Ok(min_entropy_outcomes(ctx, &r))
    }
}

/// Value of the best restart, and the worst projector distance from a
/// global-minimum restart to the nearest twin state. Restarts stuck in
/// local minima are counted but not compared.
pub fn min_entropy_outcomes(ctx: &CheckContext, r: &EntropySearchResult) -> Vec<CheckOutcome> {
    let tol = ctx.tol(1e-8);
    let twins = ctx.twin.unit_vectors();
    let distances: Vec<f64> = r
        .global_minimizers(tol)
        .map(|m| {
            twins
                .iter()
                .map(|u| projector_distance(&m.state, u))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let worst = distances.iter().copied().fold(0.0, f64::max);
    vec![
        CheckOutcome::close(
            "min-entropy.value",
            r.best_value,
            sic_min_entropy_bound(ctx.d()),
            tol,
        ),
        CheckOutcome::at_most("min-entropy.minimizer_distance", worst, 1e-6),
        CheckOutcome {
            pass: !distances.is_empty(),
            ..CheckOutcome::count(
                "min-entropy.global_restarts",
                distances.len(),
                r.restarts.len(),
            )
        },
    ]
}

pub struct CapacityCheck;

impl Check for CapacityCheck {
    fn name(&self) -> &'static str {
        "info-power"
    }
    fn description(&self) -> &'static str {
        "ensemble search reaches ln(2d/(d+1)) and closes the gap to ln k - min H"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let r = capacity_search(&ctx.family.povm()?, &ctx.optimizer)?;
        Ok(capacity_outcomes(ctx, &r))
    }
}

pub fn capacity_outcomes(ctx: &CheckContext, r: &CapacityResult) -> Vec<CheckOutcome> {
    let tol = ctx.tol(1e-6);
    vec![
        CheckOutcome::close(
            "info-power.value",
            r.best_value,
            sic_power_bound(ctx.d()),
            tol,
        ),
        CheckOutcome::close("info-power.certificate_gap", r.certificate_gap, 0.0, tol),
    ]
}

/// Entropy range and coincidence index over Haar-random pure states,
/// sampled in parallel chunks with fixed streams.
pub struct HaarSamplingCheck;

const SAMPLE_CHUNK: usize = 1000;
const SAMPLE_STREAM: u64 = 1 << 42;

/// `(min H, max H, max |IC - 2/(d(d+1))|)` over `samples` random states.
pub fn haar_entropy_range(povm: &Povm, samples: usize, seed: u64) -> Result<(f64, f64, f64)> {
    let d = povm.dim();
    let ic = 2.0 / (d * (d + 1)) as f64;
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<(f64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = restart_stream(seed, SAMPLE_STREAM + c as u64);
            let n = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            let mut acc = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
            for _ in 0..n {
                let psi = random_pure_state(d, &mut rng);
                let dist = OutcomeDistribution::new(povm.pure_probabilities(&psi))?;
                let h: f64 = dist.probs().iter().copied().map(eta).sum();
                acc = (
                    acc.0.min(h),
                    acc.1.max(h),
                    acc.2.max((index_of_coincidence(&dist) - ic).abs()),
                );
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |a, b| {
            (a.0.min(b.0), a.1.max(b.1), a.2.max(b.2))
        }))
}

impl Check for HaarSamplingCheck {
    fn name(&self) -> &'static str {
        "haar-sampling"
    }
    fn description(&self) -> &'static str {
        "random pure states stay within the SIC entropy floor and ceiling with constant coincidence index"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let d = ctx.d();
        let povm = ctx.family.povm()?;
        let (lo, hi, ic_dev) = haar_entropy_range(&povm, ctx.haar_samples, ctx.optimizer.seed)?;
        let slack = 1e-9;
        let floor = sic_min_entropy_bound(d);
        let ceiling = sic_max_entropy_bound(d);
        Ok(vec![
            CheckOutcome {
                pass: lo >= floor - slack,
                value: lo,
                expected: floor,
                tolerance: slack,
                name: "haar.entropy_min".into(),
            },
            CheckOutcome {
                pass: hi <= ceiling + slack,
                value: hi,
                expected: ceiling,
                tolerance: slack,
                name: "haar.entropy_max".into(),
            },
            CheckOutcome::at_most("haar.coincidence_deviation", ic_dev, ctx.tol(1e-12)),
        ])
    }
}

pub struct ZeroDesignCheck;

impl Check for ZeroDesignCheck {
    fn name(&self) -> &'static str {
        "zero-design"
    }
    fn description(&self) -> &'static str {
        "zero blocks form a symmetric (64,28,12) design developed from a difference set"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        require_hoggar_shape(&ctx.family)?;
        let design = zero_blocks(&ctx.family, &ctx.twin, ZERO_THRESHOLD)?;
        zero_design_outcomes(&design, ctx.family.hadamard())
    }
}

/// Exact combinatorial checks on an extracted zero-block design.
pub fn zero_design_outcomes(
    design: &ZeroBlockDesign,
    h: &HadamardMatrix,
) -> Result<Vec<CheckOutcome>> {
    let (v, k, lambda) = design.params();
    let report = verify_symmetric_design(design);
    let diff = difference_set_check(design.blocks()[0]);
    let good_diffs = diff.counts[1..]
        .iter()
        .filter(|&&c| c == MENON_PARAMS.2)
        .count();
    let mismatches = membership_mismatches(design, h)?;
    Ok(vec![
        CheckOutcome::count("zero-design.points", v, MENON_PARAMS.0),
        CheckOutcome::count("zero-design.block_size", k, MENON_PARAMS.1),
        CheckOutcome::count("zero-design.lambda", lambda, MENON_PARAMS.2),
        CheckOutcome::count("zero-design.symmetric_axioms", report.pass as usize, 1),
        CheckOutcome::count("zero-design.difference_counts", good_diffs, 63),
        CheckOutcome::count(
            "zero-design.translation",
            block_translation_check(design) as usize,
            1,
        ),
        CheckOutcome::count("zero-design.membership_mismatches", mismatches, 0),
    ])
}

pub struct FramePotentialCheck;

impl Check for FramePotentialCheck {
    fn name(&self) -> &'static str {
        "design-check"
    }
    fn description(&self) -> &'static str {
        "frame potentials match Haar moments for t = 1, 2 and exceed them for t = 3"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let d = ctx.d();
        let set = StateSet::from_family(&ctx.family);
        let tol = ctx.tol(1e-12);
        let mut rows: Vec<CheckOutcome> = (1..=2)
            .map(|t| {
                CheckOutcome::close(
                    format!("design.t{t}"),
                    frame_potential(&set, t),
                    haar_moment(d, t),
                    tol,
                )
            })
            .collect();
        let excess = frame_potential(&set, 3) - haar_moment(d, 3);
        rows.push(CheckOutcome {
            pass: excess > 1e-3,
            value: excess,
            expected: 1e-3,
            tolerance: 0.0,
            name: "design.t3_excess".into(),
        });
        Ok(rows)
    }
}

pub struct CovarianceCheck;

impl Check for CovarianceCheck {
    fn name(&self) -> &'static str {
        "covariance"
    }
    fn description(&self) -> &'static str {
        "three-qubit Pauli operators permute the lines of both twins"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        require_hoggar_shape(&ctx.family)?;
        let tol = ctx.tol(1e-12);
        let mut rows = Vec::new();
        for (label, fam) in [("covariance", &ctx.family), ("covariance.twin", &ctx.twin)] {
            let r = verify_covariance(fam, tol)?;
            rows.push(CheckOutcome::at_most(
                format!("{label}.worst_deviation"),
                r.worst_deviation,
                tol,
            ));
            rows.push(CheckOutcome::count(
                format!("{label}.labels"),
                r.labels_checked,
                64,
            ));
        }
        Ok(rows)
    }
}

pub struct BlochCheck;

impl Check for BlochCheck {
    fn name(&self) -> &'static str {
        "bloch"
    }
    fn description(&self) -> &'static str {
        "twin Bloch simplices, related by the transpose reflection"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let d = ctx.d();
        let basis = hermitian_basis(d)?;
        let tol = ctx.tol(1e-12);
        let mut rows = Vec::new();
        for (label, fam) in [
            ("bloch.simplex", &ctx.family),
            ("bloch.simplex_twin", &ctx.twin),
        ] {
            let r = simplex_check(&StateSet::from_family(fam), &basis, tol)?;
            let worst = r
                .max_norm_deviation
                .max(r.max_inner_deviation)
                .max(r.centroid_norm);
            rows.push(CheckOutcome::at_most(label, worst, tol));
        }
        let r = family_reflection_check(&ctx.family, &ctx.twin, &basis, tol)?;
        rows.push(CheckOutcome::at_most(
            "bloch.reflection",
            r.max_deviation,
            tol,
        ));
        rows.push(CheckOutcome::count(
            "bloch.symmetric_count",
            r.symmetric_count,
            (d + 2) * (d - 1) / 2,
        ));
        Ok(rows)
    }
}

/// Cross-checks against independent references: finite differences, the
/// binary symmetric channel, and Monte Carlo Haar moments.
pub struct OracleCheck;

/// Worst relative error of the entropy gradient against central
/// differences, over `samples` random states and directions.
pub fn gradient_oracle(povm: &Povm, samples: usize, seed: u64) -> f64 {
    let d = povm.dim();
    let mut rng = restart_stream(seed, SAMPLE_STREAM - 1);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let psi = random_pure_state(d, &mut rng);
        let g = entropy_gradient(&psi, povm);
        let mut dir = random_pure_state(d, &mut rng);
        let along = inner(&psi, &dir);
        for (x, p) in dir.iter_mut().zip(&psi) {
            *x -= p * along;
        }
        let at = |t: f64| {
            let x: Vec<C64> = psi.iter().zip(&dir).map(|(p, v)| p + v * t).collect();
            entropy_value(&crate::algebra::normalized(&x), povm)
        };
        let numeric = (at(h) - at(-h)) / (2.0 * h);
        let analytic: f64 = g.iter().zip(&dir).map(|(a, b)| (a.conj() * b).re).sum();
        worst = worst.max((analytic - numeric).abs() / analytic.abs().max(1e-3));
    }
    worst
}

/// Sample mean and standard error of `|<psi|phi>|^(2t)` over `pairs`
/// independent Haar-random pairs.
pub fn monte_carlo_moment(d: usize, t: u32, pairs: usize, seed: u64) -> (f64, f64) {
    let chunks = pairs.div_ceil(SAMPLE_CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = restart_stream(seed, SAMPLE_STREAM + (1 << 20) + c as u64);
            let n = SAMPLE_CHUNK.min(pairs - c * SAMPLE_CHUNK);
            let mut s = (0.0, 0.0);
            for _ in 0..n {
                let a = random_pure_state(d, &mut rng);
                let b = random_pure_state(d, &mut rng);
                let x = inner(&a, &b).norm_sqr().powi(t as i32);
                s.0 += x;
                s.1 += x * x;
            }
            s
        })
        .collect();
    let (s1, s2) = sums
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = pairs as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Capacity of the binary symmetric channel with crossover `p`, by
/// Blahut-Arimoto.
pub fn bsc_capacity(p: f64) -> Result<f64> {
    Ok(blahut_arimoto(&[vec![1.0 - p, p], vec![p, 1.0 - p]], 1e-13, 100_000)?.capacity)
}

impl Check for OracleCheck {
    fn name(&self) -> &'static str {
        "oracles"
    }
    fn description(&self) -> &'static str {
        "gradient vs finite differences, BSC capacity, Monte Carlo Haar moment"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
        let povm = ctx.family.povm()?;
        let seed = ctx.optimizer.seed;
        let grad = gradient_oracle(&povm, 100, seed);
        let closed = 2f64.ln() - eta(0.1) - eta(0.9);
        let bsc = bsc_capacity(0.1)?;
        let d = ctx.d();
        let (mean, se) = monte_carlo_moment(d, 2, ctx.monte_carlo_pairs, seed);
        Ok(vec![
            CheckOutcome::at_most("oracle.gradient_relative_error", grad, 1e-6),
            CheckOutcome::close("oracle.bsc_capacity", bsc, closed, 1e-9),
            CheckOutcome::close("oracle.haar_moment_t2", mean, haar_moment(d, 2), 3.0 * se),
        ])
    }
}

/// Hoggar twins `H(-1 + 2i)` and `H(-1 - 2i)` over the Sylvester matrix.
pub fn hoggar_twins() -> (SicFamily, SicFamily) {
    let h = sylvester_hadamard(3).expect("order 8 is supported");
    let f = crate::sic::jw_vectors(&h, C64::new(-1.0, 2.0));
    let g = crate::sic::conjugate_set(&f);
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_ctx() -> CheckContext {
        let (f, g) = hoggar_twins();
        let mut ctx = CheckContext::new(f, g);
        ctx.haar_samples = 2000;
        ctx.monte_carlo_pairs = 20_000;
        ctx
    }

    #[test]
    fn registry_order_and_lookup() {
        let r = CheckRegistry::with_defaults();
        let names: Vec<_> = r.names().collect();
        assert_eq!(names[0], "sic");
        assert_eq!(names.len(), 11);
        assert!(r.get("bloch").is_some());
        assert!(r.get("nope").is_none());
        assert!(r.run(&["nope"], &fast_ctx()).is_err());
    }

    #[test]
    fn cheap_checks_pass_on_hoggar() {
        let r = CheckRegistry::with_defaults();
        let ctx = fast_ctx();
        let run = r
            .run(
                &[
                    "sic",
                    "twin-entropy",
                    "twin-power",
                    "haar-sampling",
                    "zero-design",
                    "design-check",
                    "covariance",
                    "bloch",
                    "oracles",
                ],
                &ctx,
            )
            .unwrap();
        for o in &run.outcomes {
            assert!(o.pass, "{o:?}");
        }
        assert!(run.skipped.is_empty());
    }

    #[test]
    fn d8_only_checks_skip_elsewhere() {
        let h = sylvester_hadamard(1).unwrap();
        let f = crate::sic::jw_vectors(&h, crate::sic::admissible_parameters(2)[0]);
        let g = crate::sic::conjugate_set(&f);
        let mut ctx = CheckContext::new(f, g);
        ctx.optimizer.restarts = 8;
        ctx.haar_samples = 1000;
        ctx.monte_carlo_pairs = 10_000;
        let run = CheckRegistry::with_defaults().run(&[], &ctx).unwrap();
        let skipped: Vec<_> = run.skipped.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(skipped, ["zero-design", "covariance"]);
        for o in &run.outcomes {
            assert!(o.pass, "{o:?}");
        }
    }

    #[test]
    fn replacing_a_check() {
        struct AlwaysFails;
        impl Check for AlwaysFails {
            fn name(&self) -> &'static str {
                "sic"
            }
            fn description(&self) -> &'static str {
                "stub"
            }
            fn run(&self, _: &CheckContext) -> Result<Vec<CheckOutcome>> {
                Ok(vec![CheckOutcome::count("stub", 0, 1)])
            }
        }
        let mut r = CheckRegistry::with_defaults();
        r.register(Box::new(AlwaysFails));
        assert_eq!(r.names().count(), 11);
        assert!(!r.run(&["sic"], &fast_ctx()).unwrap().all_pass());
    }
}
