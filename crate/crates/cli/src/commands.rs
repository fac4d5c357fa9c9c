use std::fs;
use std::path::{Path, PathBuf};

use hoggar::algebra::source::{FileSource, HadamardRegistry};
use hoggar::bloch::{bloch_csv, gram_csv, hermitian_basis, set_bloch_vectors, BlochVector};
use hoggar::checks::{
    capacity_outcomes, min_entropy_outcomes, twin_ensemble, zero_design_outcomes, CheckContext,
    CheckOutcome, CheckRegistry,
};
use hoggar::designs::{frame_potential, haar_moment, zero_blocks, StateSet};
use hoggar::infotheory::{
    holevo_quantity, index_of_coincidence, mutual_information, outcome_distribution,
    shannon_entropy, Ensemble, OutcomeDistribution, ZERO_THRESHOLD,
};
use hoggar::io::{csv_float, to_fixed_json};
use hoggar::optimize::{capacity_search, min_entropy_search, OptimizerConfig};
use hoggar::povm::State;
use hoggar::sic::{
    conjugate_set, family_from_record, jw_vectors, verify_covariance, verify_sic, FamilyRecord,
    SicFamily,
};
use hoggar::{Error, Result};
use serde::Serialize;

use crate::complex::parse_complex;
use crate::manifest::{manifest_path, resolve, RunManifest};
use crate::{Cli, Command, Format, HadamardKind, Options};

/// Runs one subcommand. `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let opts = &cli.opts;
    configure_threads(opts.jobs)?;
    let mut manifest = RunManifest::new(cli.command.name());
    record_parameters(&mut manifest, cli.command, opts);
    let out = opts.out.as_deref().map(resolve);

    dispatch(cli.command, opts, out.as_deref(), &mut manifest)?;

    for c in &manifest.checks {
        eprintln!("{}", summary_line(c, opts.bits));
    }
    let mpath = manifest_path(out.as_deref(), cli.command.name());
    write_text(&mpath, &to_fixed_json(&manifest)?)?;
    eprintln!("manifest: {}", mpath.display());
    Ok(manifest.all_pass())
}

fn configure_threads(jobs: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

fn record_parameters(m: &mut RunManifest, cmd: Command, o: &Options) {
    match &o.family {
        Some(path) => m.param("family", path.display()),
        None => {
            m.param("d", o.d);
            m.param("v", &o.v);
            m.param("hadamard", o.hadamard.name());
            if let Some(p) = &o.hadamard_file {
                m.param("hadamard_file", p.display());
            }
        }
    }
    let uses_twin = matches!(
        cmd,
        Command::ZeroDesign
            | Command::Bloch
            | Command::Entropy
            | Command::MinEntropy
            | Command::InfoPower
            | Command::Report
    );
    if uses_twin {
        m.param("twin", &o.twin);
    }
    if matches!(
        cmd,
        Command::MinEntropy | Command::InfoPower | Command::Report
    ) {
        m.param("seed", o.seed);
        m.param("restarts", o.restarts);
    }
    if matches!(cmd, Command::Report) {
        m.param("samples", o.samples);
        m.param("pairs", o.pairs);
        if !o.checks.is_empty() {
            m.param("checks", o.checks.join(","));
        }
    }
    if let Some(t) = o.tol {
        m.param("tol", format!("{t:e}"));
    }
    if let Some(p) = &o.ensemble {
        m.param("ensemble", p.display());
    }
    if let Some(p) = &o.state {
        m.param("state", p.display());
    }
    if matches!(cmd, Command::DesignCheck) {
        m.param("t", o.t);
    }
    m.param(
        "format",
        match o.format {
            Format::Json => "json",
            Format::Csv => "csv",
        },
    );
}

fn dispatch(cmd: Command, o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    match cmd {
        Command::Construct => construct(o, out, m),
        Command::VerifySic => {
            let fam = load_family(o)?;
            let r = verify_sic(&fam, o.tol.unwrap_or(1e-12))?;
            m.checks.push(CheckOutcome {
                pass: r.is_sic,
                ..CheckOutcome::at_most(
                    "sic.max_deviation",
                    r.max_deviation,
                    o.tol.unwrap_or(1e-12),
                )
            });
            m.checks.push(CheckOutcome::close(
                "sic.overlap_mean",
                r.overlap_value,
                r.expected_overlap,
                o.tol.unwrap_or(1e-12),
            ));
            emit_json(out, &r, m)
        }
        Command::Covariance => {
            let fam = load_family(o)?;
            let tol = o.tol.unwrap_or(1e-12);
            let r = verify_covariance(&fam, tol)?;
            m.checks.push(CheckOutcome::at_most(
                "covariance.worst_deviation",
                r.worst_deviation,
                tol,
            ));
            m.checks.push(CheckOutcome::count(
                "covariance.labels",
                r.labels_checked,
                64,
            ));
            emit_json(out, &r, m)
        }
        Command::Entropy => entropy(o, out, m),
        Command::MinEntropy => {
            let ctx = context(o)?;
            let r = min_entropy_search(&ctx.family.povm()?, &ctx.optimizer)?;
            m.checks.extend(min_entropy_outcomes(&ctx, &r));
            emit_json(out, &r, m)
        }
        Command::InfoPower => {
            let ctx = context(o)?;
            let r = capacity_search(&ctx.family.povm()?, &ctx.optimizer)?;
            m.checks
                .extend(min_entropy_outcomes(&ctx, &r.entropy_search));
            m.checks.extend(capacity_outcomes(&ctx, &r));
            emit_json(out, &r, m)
        }
        Command::MutualInfo => mutual_info(o, out, m),
        Command::DesignCheck => design_check(o, out, m),
        Command::ZeroDesign => {
            let ctx = context(o)?;
            let design = zero_blocks(&ctx.family, &ctx.twin, ZERO_THRESHOLD)?;
            m.checks
                .extend(zero_design_outcomes(&design, ctx.family.hadamard())?);
            match o.format {
                Format::Json => emit_json(out, &design, m),
                Format::Csv => emit_text(out, &design.incidence_csv(), m),
            }
        }
        Command::Bloch => bloch(o, out, m),
        Command::Report => {
            let ctx = context(o)?;
            let names: Vec<&str> = o.checks.iter().map(String::as_str).collect();
            let run = CheckRegistry::with_defaults().run(&names, &ctx)?;
            for (name, why) in &run.skipped {
                eprintln!("skipped {name}: {why}");
            }
            m.checks.extend(run.outcomes.iter().cloned());
            emit_json(out, &run, m)
        }
    }
}

pub fn load_family(o: &Options) -> Result<SicFamily> {
    if let Some(path) = &o.family {
        let rec: FamilyRecord = serde_json::from_str(&fs::read_to_string(resolve(path))?)?;
        return family_from_record(&rec);
    }
    let v = parse_complex(&o.v).map_err(|e| Error::InvalidArgument(format!("--v: {e}")))?;
    let mut registry = HadamardRegistry::with_defaults();
    if o.hadamard == HadamardKind::File {
        let path = o.hadamard_file.clone().ok_or_else(|| {
            Error::InvalidArgument("--hadamard file needs --hadamard-file".into())
        })?;
        registry.register(Box::new(FileSource {
            path: resolve(&path),
        }));
    }
    let h = registry.build(o.hadamard.name(), o.d)?;
    let fam = jw_vectors(&h, v);
    if let hoggar::sic::Admissibility::Warning(w) = fam.admissibility() {
        eprintln!("warning: {w}");
    }
    Ok(fam)
}

fn load_twin(o: &Options, fam: &SicFamily) -> Result<SicFamily> {
    if o.twin == "auto" {
        return Ok(conjugate_set(fam));
    }
    let rec: FamilyRecord =
        serde_json::from_str(&fs::read_to_string(resolve(Path::new(&o.twin)))?)?;
    let twin = family_from_record(&rec)?;
    if (twin.parameter() - fam.parameter().conj()).norm() > 1e-12 || twin.dim() != fam.dim() {
        return Err(Error::InvalidArgument(format!(
            "twin parameter {} is not the conjugate of {}",
            twin.parameter(),
            fam.parameter()
        )));
    }
    Ok(twin)
}

fn context(o: &Options) -> Result<CheckContext> {
    let fam = load_family(o)?;
    let twin = load_twin(o, &fam)?;
    let mut ctx = CheckContext::new(fam, twin);
    ctx.optimizer = OptimizerConfig {
        restarts: o.restarts,
        seed: o.seed,
        ..Default::default()
    };
    ctx.tol = o.tol;
    ctx.haar_samples = o.samples;
    ctx.monte_carlo_pairs = o.pairs;
    Ok(ctx)
}

fn construct(o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    let fam = load_family(o)?;
    m.param("admissible", fam.is_admissible());
    match o.format {
        Format::Json => emit_json(out, &FamilyRecord::from(&fam), m),
        Format::Csv => {
            let mut text = String::from("j,k");
            for l in 0..fam.dim() {
                text.push_str(&format!(",re{l},im{l}"));
            }
            text.push('\n');
            for cv in fam.vectors() {
                text.push_str(&format!("{},{}", cv.j, cv.k));
                for z in &cv.coords {
                    text.push_str(&format!(",{},{}", csv_float(z.re), csv_float(z.im)));
                }
                text.push('\n');
            }
            emit_text(out, &text, m)
        }
    }
}

#[derive(Serialize)]
struct EntropyRow {
    index: usize,
    entropy: f64,
    index_of_coincidence: f64,
    distribution: OutcomeDistribution,
}

fn entropy(o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    let fam = load_family(o)?;
    let povm = fam.povm()?;
    let states: Vec<State> = match &o.state {
        Some(path) => vec![serde_json::from_str(&fs::read_to_string(resolve(path))?)?],
        None => {
            // default: every state of the twin family
            let twin = load_twin(o, &fam)?;
            let rows = hoggar::checks::CheckRegistry::with_defaults().run(
                &["twin-entropy"],
                &CheckContext {
                    tol: o.tol,
                    ..CheckContext::new(fam.clone(), twin.clone())
                },
            )?;
            m.checks.extend(rows.outcomes);
            twin.unit_vectors()
                .into_iter()
                .map(|coords| State::Pure { coords })
                .collect()
        }
    };
    let mut rows = Vec::with_capacity(states.len());
    for (index, s) in states.iter().enumerate() {
        if s.dim() != fam.dim() {
            return Err(Error::InvalidArgument(format!(
                "state has dimension {}, family has {}",
                s.dim(),
                fam.dim()
            )));
        }
        let dist = outcome_distribution(s, &povm)?;
        rows.push(EntropyRow {
            index,
            entropy: shannon_entropy(&dist),
            index_of_coincidence: index_of_coincidence(&dist),
            distribution: dist,
        });
    }
    match o.format {
        Format::Json => emit_json(out, &rows, m),
        Format::Csv => {
            let k = povm.len();
            let mut text = String::from("index,entropy,index_of_coincidence,zero_count");
            for j in 0..k {
                text.push_str(&format!(",p{j}"));
            }
            text.push('\n');
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{}",
                    r.index,
                    csv_float(r.entropy),
                    csv_float(r.index_of_coincidence),
                    r.distribution.zero_count()
                ));
                for p in r.distribution.probs() {
                    text.push_str(&format!(",{}", csv_float(*p)));
                }
                text.push('\n');
            }
            emit_text(out, &text, m)
        }
    }
}

#[derive(Serialize)]
struct MutualInfoReport {
    mutual_information: f64,
    holevo_quantity: f64,
    ensemble_size: usize,
}

fn mutual_info(o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    let fam = load_family(o)?;
    let povm = fam.povm()?;
    let ensemble: Ensemble = match &o.ensemble {
        Some(path) => serde_json::from_str(&fs::read_to_string(resolve(path))?)?,
        None => {
            m.param("ensemble", "twin");
            twin_ensemble(&load_twin(o, &fam)?)?
        }
    };
    if ensemble.dim() != fam.dim() {
        return Err(Error::InvalidArgument(format!(
            "ensemble has dimension {}, family has {}",
            ensemble.dim(),
            fam.dim()
        )));
    }
    let mi = mutual_information(&ensemble, &povm)?;
    let hq = holevo_quantity(&ensemble, &povm)?;
    m.checks.push(CheckOutcome::close(
        "mutual-info.formula_agreement",
        mi,
        hq,
        o.tol.unwrap_or(1e-12),
    ));
    let report = MutualInfoReport {
        mutual_information: mi,
        holevo_quantity: hq,
        ensemble_size: ensemble.len(),
    };
    emit_json(out, &report, m)
}

#[derive(Serialize)]
struct PotentialRow {
    t: u32,
    frame_potential: f64,
    haar_moment: f64,
}

fn design_check(o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    let fam = load_family(o)?;
    let ctx = CheckContext {
        tol: o.tol,
        ..CheckContext::new(fam.clone(), conjugate_set(&fam))
    };
    let run = CheckRegistry::with_defaults().run(&["design-check"], &ctx)?;
    m.checks.extend(run.outcomes);
    let set = StateSet::from_family(&fam);
    let rows: Vec<PotentialRow> = (1..=o.t.max(1))
        .map(|t| PotentialRow {
            t,
            frame_potential: frame_potential(&set, t),
            haar_moment: haar_moment(fam.dim(), t),
        })
        .collect();
    match o.format {
        Format::Json => emit_json(out, &rows, m),
        Format::Csv => {
            let mut text = String::from("t,frame_potential,haar_moment\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{}\n",
                    r.t,
                    csv_float(r.frame_potential),
                    csv_float(r.haar_moment)
                ));
            }
            emit_text(out, &text, m)
        }
    }
}

#[derive(Serialize)]
struct BlochExport {
    names: Vec<String>,
    symmetry_mask: Vec<bool>,
    family: Vec<BlochVector>,
    twin: Vec<BlochVector>,
}

fn bloch(o: &Options, out: Option<&Path>, m: &mut RunManifest) -> Result<()> {
    let ctx = context(o)?;
    let run = CheckRegistry::with_defaults().run(&["bloch"], &ctx)?;
    if let Some((name, why)) = run.skipped.first() {
        return Err(Error::Unsupported(format!("{name}: {why}")));
    }
    m.checks.extend(run.outcomes);
    let basis = hermitian_basis(ctx.family.dim())?;
    let fam_vecs = set_bloch_vectors(&StateSet::from_family(&ctx.family), &basis)?;
    let twin_vecs = set_bloch_vectors(&StateSet::from_family(&ctx.twin), &basis)?;
    match o.format {
        Format::Json => {
            let export = BlochExport {
                names: basis.names().to_vec(),
                symmetry_mask: basis.symmetry_mask().to_vec(),
                family: fam_vecs,
                twin: twin_vecs,
            };
            emit_json(out, &export, m)
        }
        Format::Csv => {
            emit_text(out, &bloch_csv(&fam_vecs, &basis), m)?;
            if let Some(path) = out {
                write_artifact(
                    &sibling(path, "twin.csv"),
                    &bloch_csv(&twin_vecs, &basis),
                    m,
                )?;
                write_artifact(&sibling(path, "gram.csv"), &gram_csv(&fam_vecs), m)?;
            }
            Ok(())
        }
    }
}

/// `dir/x.csv` -> `dir/x.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn emit_json<T: Serialize + ?Sized>(
    out: Option<&Path>,
    value: &T,
    m: &mut RunManifest,
) -> Result<()> {
    let text = to_fixed_json(value)?;
    emit_text(out, &text, m)
}

/// Writes to `out` and records it, or prints to stdout.
fn emit_text(out: Option<&Path>, text: &str, m: &mut RunManifest) -> Result<()> {
    match out {
        Some(path) => write_artifact(path, text, m),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn write_artifact(path: &Path, text: &str, m: &mut RunManifest) -> Result<()> {
    write_text(path, text)?;
    m.artifacts.push(path.display().to_string());
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

/// Checks whose values are information quantities in nats.
fn is_information(name: &str) -> bool {
    [
        "min-entropy.value",
        "info-power.value",
        "twin-power.mutual_information",
        "mutual-info.",
        "haar.entropy",
    ]
    .iter()
    .any(|p| name.starts_with(p))
}

fn summary_line(c: &CheckOutcome, bits: bool) -> String {
    let (value, expected, unit) = if bits && is_information(&c.name) {
        let l2 = std::f64::consts::LN_2;
        (c.value / l2, c.expected / l2, " bits")
    } else {
        (c.value, c.expected, "")
    };
    format!(
        "{} {}: {value:.12e}{unit} (expected {expected:.12e}, tolerance {:e})",
        if c.pass { "PASS" } else { "FAIL" },
        c.name,
        c.tolerance
    )
}
