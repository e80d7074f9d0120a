//! `lorentzlattice`: simulate walks, apply discrete boosts, and run the
//! covariance and norm checks from the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use lorentzlattice::analysis::{
    encoding_uniqueness_search, kg_decoupling_residual, kg_mass_check, order_fit, second_order_counterexample,
    OrderOutcome,
};
use lorentzlattice::descriptors::{ModelDescriptor, TransformDescriptor};
use lorentzlattice::lorentz::nonhomog::GateNetwork;
use lorentzlattice::lorentz::{
    covariance_residual, gluing_mismatch, lorentz_transform_field, nonhomog_transform, EncodingPair, LorentzParams,
    MassMap, NonHomogParams,
};
use lorentzlattice::models::evolve::{evolve_model, InitialLayer};
use lorentzlattice::models::{clock_qca_scattering, qca_step, ClockWalkSpec, Model, QCAState, QcaBasis};
use lorentzlattice::observables::{
    surface_norm, swap_move, transform_surface, velocity_addition_check, CauchySurface, Step,
};
use lorentzlattice::report::{Report, Status};
use lorentzlattice::{LatticeError, LightCoord, SpacetimeField, Window};

const THREADS_ENV: &str = "LORENTZLATTICE_THREADS";
const NORM_DRIFT_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;
const SWEEP: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

#[derive(Parser)]
#[command(name = "lorentzlattice", version, about = "Discrete Lorentz transforms of quantum walks and automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a model and write the field as JSON and CSV.
    Simulate(SimulateArgs),
    /// Apply a discrete Lorentz transform to a field file.
    Transform(TransformArgs),
    /// Run a check and write its report.
    Verify(VerifyArgs),
    /// Run one of the analysis studies and write its report.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// dirac, fd_dirac, clock_qw or clock_qca.
    #[arg(long)]
    model: Option<String>,
    /// Mass, default 1.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    /// Lattice spacing, default 0.1.
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
}

impl ModelArgs {
    fn descriptor(&self, default_model: &str) -> ModelDescriptor {
        ModelDescriptor {
            model: self.model.clone().unwrap_or_else(|| default_model.into()),
            m: Some(self.m.unwrap_or(1.0)),
            eps: self.eps.unwrap_or(0.1),
            p: self.p,
            q: self.q,
            coin: None,
        }
    }

    fn build(&self, default_model: &str) -> Result<Model, Failure> {
        Ok(self.descriptor(default_model).to_model()?)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Random normalized initial layer; without it a single unit amplitude
    /// enters on the right-moving wire at the origin.
    #[arg(long)]
    seed: Option<u64>,
    /// Sites of the random initial layer (wires for clock_qca).
    #[arg(long, default_value_t = 16)]
    sites: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    /// Field JSON to transform.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    /// Non-homogeneous parameters `{"alpha": {...}, "beta": {...}}`; the
    /// network comes from the model flags.
    #[arg(long)]
    nonhomog: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    /// Side of the source network for non-homogeneous transforms.
    #[arg(long, default_value_t = 6)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyCheck {
    Covariance,
    Norm,
    Kg,
    Velocity,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: VerifyCheck,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    /// Fit the residual order over eps = 1e-1 ... 1e-4.
    #[arg(long)]
    sweep_eps: bool,
    #[arg(long, default_value_t = 10)]
    surfaces: usize,
    #[arg(long, default_value_t = 20)]
    swaps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    sites: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Study {
    Uniqueness,
    Counterexample,
    KgMass,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(value_enum)]
    study: Study,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 2)]
    alpha: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    /// Bad flags, descriptors or input files.
    Config(String),
    /// A check, gluing or documented rejection.
    Check(String),
    /// Norm drift beyond tolerance.
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Check(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match &e {
            LatticeError::InvalidArgument(msg) if msg.starts_with('`') => Failure::Config(e.to_string()),
            LatticeError::UnknownModel(_)
            | LatticeError::UnknownEncoding(_)
            | LatticeError::Json(_)
            | LatticeError::Io(_) => Failure::Config(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_threads().and_then(|()| match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Transform(a) => transform(&a),
        Command::Verify(a) => verify(&a),
        Command::Analyze(a) => analyze(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config(format!("`{THREADS_ENV}`: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| config(format!("`{THREADS_ENV}`: {e}")))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| config(format!("`out`: cannot write {}: {e}", path.display())))
}

fn emit_report(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    let v = report.to_json();
    match out {
        Some(p) => write_json(p, &v)?,
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not a failure of the check
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("check `{}` failed", report.check)))
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn random_layer(rng: &mut ChaCha8Rng, sites: usize, dp: usize, dm: usize) -> InitialLayer {
    let mut gen = |d: usize| -> Vec<Vec<C64>> {
        (0..sites)
            .map(|_| (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect()
    };
    let mut plus = gen(dp);
    let mut minus = gen(dm);
    let n = plus.iter().chain(&minus).flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for v in plus.iter_mut().chain(minus.iter_mut()).flatten() {
        *v /= n;
    }
    InitialLayer { t0: 0, r_start: 0, plus, minus }
}

fn delta_layer(dp: usize, dm: usize) -> InitialLayer {
    let mut plus = vec![C64::new(0.0, 0.0); dp];
    plus[0] = C64::new(1.0, 0.0);
    InitialLayer { t0: 0, r_start: 0, plus: vec![plus], minus: vec![vec![C64::new(0.0, 0.0); dm]] }
}

// ---------------------------------------------------------------- simulate

fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let model = a.model.build("dirac")?;
    if a.seed.is_some() && a.sites == 0 {
        return Err(config("`sites`: must be positive"));
    }
    let mut prov = Map::new();
    prov.insert("command".into(), json!("simulate"));
    prov.insert("model".into(), serde_json::to_value(ModelDescriptor::from_model(&model)).expect("serializable"));
    prov.insert("steps".into(), json!(a.steps));
    prov.insert("seed".into(), json!(a.seed));
    if let Model::ClockQca { .. } = model {
        return simulate_qca(a, &model, prov);
    }
    let (dp, dm) = model.wire_dims();
    let init = match a.seed {
        Some(s) => random_layer(&mut ChaCha8Rng::seed_from_u64(s), a.sites, dp, dm),
        None => delta_layer(dp, dm),
    };
    prov.insert("input".into(), json!(if a.seed.is_some() { "random" } else { "delta" }));
    let field = evolve_model(&model, &init, a.steps)?;
    let norms: Vec<(i64, f64)> = (0..=a.steps as i64).map(|t| (t, field.layer_norm(t))).collect();

    let mut doc = field.to_json();
    doc["provenance"] = Value::Object(prov);
    write_json(&a.out, &doc)?;
    let mut csv = Vec::new();
    field.write_csv(&mut csv)?;
    fs::write(sibling(&a.out, ".csv"), csv).map_err(LatticeError::from)?;
    let mut table = String::from("t,norm\n");
    for (t, n) in &norms {
        table.push_str(&format!("{t},{n:.17e}\n"));
    }
    fs::write(sibling(&a.out, ".norms.csv"), table).map_err(LatticeError::from)?;
    check_drift(&norms)
}

fn check_drift(norms: &[(i64, f64)]) -> Result<(), Failure> {
    let n0 = norms.first().map_or(0.0, |x| x.1);
    let (t, worst) =
        norms.iter().map(|&(t, n)| (t, (n - n0).abs())).fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if worst > NORM_DRIFT_TOL {
        return Err(Failure::Numerical(format!(
            "layer norm drifted by {worst:.3e} at t={t} (tolerance {NORM_DRIFT_TOL:e})"
        )));
    }
    Ok(())
}

/// Many-body run on `sites` wires; records the occupation of each wire.
fn simulate_qca(a: &SimulateArgs, model: &Model, mut prov: Map<String, Value>) -> Result<(), Failure> {
    let Model::ClockQca { coin, .. } = model else { unreachable!() };
    let u = clock_qca_scattering(*coin)?;
    let n = a.sites;
    let mut state = match a.seed {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let config: Vec<QcaBasis> = (0..n)
                .map(|_| match rng.gen_range(0..3) {
                    0 => QcaBasis::Q,
                    1 => QcaBasis::Zero,
                    _ => QcaBasis::One,
                })
                .collect();
            QCAState::product(&config)?
        }
        None => {
            let mut config = vec![QcaBasis::Q; n];
            if let Some(w) = config.get_mut(n / 2) {
                *w = QcaBasis::One;
            }
            QCAState::product(&config)?
        }
    };
    prov.insert("wires".into(), json!(n));
    let mut norms = Vec::with_capacity(a.steps + 1);
    let mut occupation = Vec::with_capacity(a.steps + 1);
    let mut csv = String::from("t,wire,one,zero\n");
    for t in 0..=a.steps {
        if t > 0 {
            state = qca_step(&state, &u)?;
        }
        norms.push((t as i64, state.norm_sqr()));
        let row: Vec<[f64; 2]> =
            (0..n).map(|w| [state.occupation(w, QcaBasis::One), state.occupation(w, QcaBasis::Zero)]).collect();
        for (w, [one, zero]) in row.iter().enumerate() {
            csv.push_str(&format!("{t},{w},{one:.17e},{zero:.17e}\n"));
        }
        occupation.push(row);
    }
    let doc = json!({
        "meta": {"model": model.name(), "eps": model.eps(), "params": model.params_json(), "wires": n},
        "norms": norms.iter().map(|x| x.1).collect::<Vec<_>>(),
        "occupation": occupation,
        "provenance": prov,
    });
    write_json(&a.out, &doc)?;
    fs::write(sibling(&a.out, ".csv"), csv).map_err(LatticeError::from)?;
    let mut table = String::from("t,norm\n");
    for (t, v) in &norms {
        table.push_str(&format!("{t},{v:.17e}\n"));
    }
    fs::write(sibling(&a.out, ".norms.csv"), table).map_err(LatticeError::from)?;
    check_drift(&norms)
}

// --------------------------------------------------------------- transform

fn read_json(path: &Path, field: &str) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| config(format!("`{field}`: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config(format!("`{field}`: {}: {e}", path.display())))
}

fn transform(a: &TransformArgs) -> Result<(), Failure> {
    if let Some(nh_path) = &a.nonhomog {
        return transform_nonhomog(a, nh_path);
    }
    let input = a.input.as_ref().ok_or_else(|| config("`in`: an input field is required"))?;
    let doc = read_json(input, "in")?;
    let field = SpacetimeField::from_json(&doc).map_err(|e| config(format!("`in`: {e}")))?;
    let model =
        Model::from_field_meta(&field.model, field.eps, &field.params).map_err(|e| config(format!("`in`: {e}")))?;
    let desc = TransformDescriptor::homogeneous(a.alpha, a.beta, &model);
    desc.validate(&model)?;
    let params = LorentzParams::for_model(&model, a.alpha, a.beta)?;
    let mapped = params.mapped_model(&model)?;
    let out = lorentz_transform_field(&field, &model, &params)?;
    let gluing = gluing_mismatch(&out, &mapped, a.alpha, a.beta, field.layers)?;

    let mut v = out.to_json();
    v["provenance"] = json!({
        "command": "transform",
        "source": input.display().to_string(),
        "transform": desc,
        "mass_map": params.mass_map()?.as_str(),
        "source_model": ModelDescriptor::from_model(&model),
        "mapped_model": ModelDescriptor::from_model(&mapped),
        "gluing_mismatch": gluing,
    });
    write_json(&a.out, &v)?;
    if gluing > EXACT_TOL {
        return Err(Failure::Check(format!("gluing check failed for `{}`: max mismatch {gluing:.3e}", model.name())));
    }
    Ok(())
}

fn transform_nonhomog(a: &TransformArgs, path: &Path) -> Result<(), Failure> {
    let nh: NonHomogParams =
        serde_json::from_value(read_json(path, "nonhomog")?).map_err(|e| config(format!("`nonhomog`: {e}")))?;
    let model = a.model.build("clock_qca")?;
    let side = a.steps as i64;
    let network = GateNetwork { window: Window::new(-side / 2, -side / 2, a.steps, a.steps)?, model };
    let stretched = nonhomog_transform(&network, &nh)?;
    let cells: Vec<Value> = stretched
        .cells
        .iter()
        .map(|c| json!({"source": [c.source.r, c.source.l], "origin": [c.origin.r, c.origin.l], "alpha": c.alpha, "beta": c.beta}))
        .collect();
    let v = json!({
        "cells": cells,
        "gluing": stretched.gluing,
        "provenance": {
            "command": "transform",
            "nonhomog": nh,
            "mass_map": MassMap::for_model(&network.model).as_str(),
            "model": ModelDescriptor::from_model(&network.model),
            "window": network.window,
        },
    });
    write_json(&a.out, &v)?;
    if stretched.gluing > EXACT_TOL {
        return Err(Failure::Check(format!("gluing check failed: max mismatch {:.3e}", stretched.gluing)));
    }
    Ok(())
}

// ------------------------------------------------------------------ verify

fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let report = match a.check {
        VerifyCheck::Covariance => verify_covariance(a)?,
        VerifyCheck::Norm => verify_norm(a)?,
        VerifyCheck::Kg => verify_kg(a)?,
        VerifyCheck::Velocity => verify_velocity(a),
    };
    emit_report(&report, a.out.as_deref())
}

fn verify_covariance(a: &VerifyArgs) -> Result<Report, Failure> {
    let base = a.model.descriptor("dirac");
    let model = base.to_model()?;
    TransformDescriptor::homogeneous(a.alpha, a.beta, &model).validate(&model)?;
    let residual = |eps: f64| {
        let model = ModelDescriptor { eps, ..base.clone() }.to_model()?;
        let params = LorentzParams::for_model(&model, a.alpha, a.beta)?;
        let pair = EncodingPair::for_model(&model, a.alpha, a.beta)?;
        covariance_residual(&model, &params, &pair)
    };
    let mut report = if a.sweep_eps {
        Report::from_order("covariance", &order_fit(residual, &SWEEP)?, 0.1)
    } else {
        let r = residual(base.eps)?;
        let mut rep = Report::new("covariance", if r < EXACT_TOL { Status::Exact } else { Status::Fail });
        rep.detail("eps", json!(base.eps)).detail("residual", json!(r));
        rep
    };
    report
        .detail("model", json!(model.name()))
        .detail("alpha", json!(a.alpha))
        .detail("beta", json!(a.beta))
        .detail("mass_map", json!(MassMap::for_model(&model).as_str()));
    Ok(report)
}

/// Alternating surface through `t = 0` wide enough to cover the field.
fn initial_surface(f: &SpacetimeField) -> CauchySurface {
    let (xmin, xmax) = f.window().x_range();
    CauchySurface::alternating(LightCoord::new(0, 0), xmin - 2, (xmax - xmin + 4) as usize)
}

fn deform(s: &CauchySurface, rng: &mut ChaCha8Rng, count: usize, lo: i64, hi: i64) -> Result<CauchySurface, Failure> {
    let mut cur = s.clone();
    for _ in 0..count {
        let candidates: Vec<i64> =
            (lo..hi).filter(|&n| cur.label(n) == Step::R && cur.label(n + 1) == Step::L).collect();
        if candidates.is_empty() {
            return Err(Failure::Check("no swappable R/L pair left in the band".into()));
        }
        let n = candidates[rng.gen_range(0..candidates.len())];
        cur = swap_move(&cur, n)?;
    }
    Ok(cur)
}

fn verify_norm(a: &VerifyArgs) -> Result<Report, Failure> {
    let model = a.model.build("dirac")?;
    TransformDescriptor::homogeneous(a.alpha, a.beta, &model).validate(&model)?;
    let (dp, dm) = model.wire_dims();
    let sites = a.sites.unwrap_or(64);
    let steps = a.steps.unwrap_or(24);
    if sites == 0 {
        return Err(config("`sites`: must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let f = evolve_model(&model, &random_layer(&mut rng, sites, dp, dm), steps)?;
    let base = initial_surface(&f);
    let n0 = surface_norm(&f, &base)?.value;
    let (xmin, xmax) = f.window().x_range();

    let params = LorentzParams::for_model(&model, a.alpha, a.beta)?;
    let boosted = lorentz_transform_field(&f, &model, &params)?;
    let (mut swap_dev, mut boost_dev) = (0.0f64, 0.0f64);
    let mut norms = Vec::with_capacity(a.surfaces);
    for _ in 0..a.surfaces {
        let s = deform(&base, &mut rng, a.swaps, xmin, xmax)?;
        let v = surface_norm(&f, &s)?.value;
        swap_dev = swap_dev.max((v - n0).abs());
        let w = surface_norm(&boosted, &transform_surface(&s, a.alpha, a.beta))?.value;
        boost_dev = boost_dev.max((w - v).abs());
        norms.push(v);
    }
    let mut report = Report::pass_if("norm", swap_dev < EXACT_TOL && boost_dev < EXACT_TOL);
    report
        .detail("model", json!(model.name()))
        .detail("initial_norm", json!(n0))
        .detail("surface_norms", json!(norms))
        .detail("swap_deviation", json!(swap_dev))
        .detail("boost_deviation", json!(boost_dev))
        .detail("alpha", json!(a.alpha))
        .detail("beta", json!(a.beta))
        .detail("tolerance", json!(EXACT_TOL));
    Ok(report)
}

fn verify_kg(a: &VerifyArgs) -> Result<Report, Failure> {
    let desc = ModelDescriptor { model: "clock_qw".into(), ..a.model.descriptor("clock_qw") };
    if a.model.model.as_deref().is_some_and(|m| m != "clock_qw") {
        return Err(config("`model`: the stencil check needs clock_qw"));
    }
    let model = desc.to_model()?;
    let Model::ClockQw { p, q, coin, .. } = model else { unreachable!() };
    let spec = ClockWalkSpec::new(p, q, coin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let init = random_layer(&mut rng, a.sites.unwrap_or(8), p, q);
    let f = evolve_model(&model, &init, a.steps.unwrap_or(200))?;
    let residual = kg_decoupling_residual(&f, &spec)?;
    let mut report = Report::pass_if("kg", residual < 1e-10);
    report.detail("p", json!(p)).detail("q", json!(q)).detail("residual", json!(residual));
    if let Some(m) = desc.m.filter(|&m| m > 0.0) {
        let mc = kg_mass_check(&spec, m)?;
        report.detail("predicted_mass", json!(mc.predicted_mass));
    }
    Ok(report)
}

fn verify_velocity(a: &VerifyArgs) -> Report {
    let mut worst = 0.0f64;
    for k in 0..37 {
        let v = -0.9 + 1.8 * k as f64 / 36.0;
        let (measured, predicted) = velocity_addition_check(v, a.alpha, a.beta);
        worst = worst.max((measured - predicted).abs());
    }
    let mut report = Report::pass_if("velocity", worst < EXACT_TOL);
    report.detail("alpha", json!(a.alpha)).detail("beta", json!(a.beta)).detail("max_deviation", json!(worst));
    report
}

// ----------------------------------------------------------------- analyze

fn analyze(a: &AnalyzeArgs) -> Result<(), Failure> {
    if a.alpha == 0 || a.beta == 0 {
        return Err(config("`alpha/beta`: must be positive"));
    }
    let m = a.model.m.unwrap_or(1.0);
    let report = match a.study {
        Study::Uniqueness => {
            let r = encoding_uniqueness_search(a.alpha, a.beta, m, a.model.eps.unwrap_or(1e-3), a.seed)?;
            let ok = r.flat_residual < 1e-10 && r.floor >= 10.0 * r.flat_residual && r.floor > 0.0;
            let mut rep = Report::pass_if("uniqueness", ok);
            let pair = |v: &[C64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
            rep.detail("alpha", json!(r.alpha))
                .detail("beta", json!(r.beta))
                .detail("flat_residual", json!(r.flat_residual))
                .detail("floor", json!(r.floor))
                .detail("best_residual", json!(r.best.first_order_residual))
                .detail("best_distance", json!(r.best_distance))
                .detail("best_v_plus", json!(pair(&r.best.v_plus)))
                .detail("best_v_minus", json!(pair(&r.best.v_minus)))
                .detail("candidates_tested", json!(r.candidates_tested))
                .detail("converged", json!(r.converged))
                .detail("covariance_flat", json!(r.covariance_flat))
                .detail("covariance_best", json!(r.covariance_best));
            rep
        }
        Study::Counterexample => {
            let outcome = order_fit(|e| Ok(second_order_counterexample(m, e)?.gap), &SWEEP)?;
            let mut rep = Report::from_order("counterexample", &outcome, 0.1);
            let ratios: Vec<f64> = SWEEP
                .iter()
                .map(|&e| second_order_counterexample(m, e).map(|c| c.gap_over_eps2))
                .collect::<Result<_, _>>()?;
            rep.detail("m", json!(m)).detail("gap_over_eps2", json!(ratios));
            if let OrderOutcome::Exact { .. } = outcome {
                rep.detail("note", json!("gap vanishes at every eps"));
            }
            rep
        }
        Study::KgMass => {
            let (p, q) = (a.model.p.unwrap_or(1), a.model.q.unwrap_or(1));
            let eps = a.model.eps.unwrap_or(0.1);
            let model =
                ModelDescriptor { model: "clock_qw".into(), m: Some(m), eps, p: Some(p), q: Some(q), coin: None }
                    .to_model()?;
            let Model::ClockQw { coin, .. } = model else { unreachable!() };
            let mc = kg_mass_check(&ClockWalkSpec::new(p, q, coin)?, m)?;
            let mut rep = Report::new("kg_mass", Status::Pass);
            rep.detail("p", json!(p))
                .detail("q", json!(q))
                .detail("m", json!(m))
                .detail("predicted_mass", json!(mc.predicted_mass))
                .detail("coeff_a", json!([mc.coeff_a.re, mc.coeff_a.im]))
                .detail("coeff_d", json!([mc.coeff_d.re, mc.coeff_d.im]))
                .detail("expected", json!(mc.expected));
            rep
        }
    };
    emit_report(&report, a.out.as_deref())
}
