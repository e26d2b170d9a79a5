//! Command-line front end: load a material or function description from a
//! JSON config, run attenuation curves, class verdicts, bound checks,
//! pulse synthesis or power-law fits, and write CSV/JSON artifacts.
//!
//! Exit codes: 0 success (bound holds), 1 bound violated, 2 config or IO
//! error, 3 fit impossible. Errors are emitted as JSON on stderr.
//! VISCOWAVE_THREADS caps internal parallelism.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use viscowave::acoustics::{
    bound_constants, curve, fit_powerlaw, front_report, greens_function, lin_grid, log_grid,
    verify_bound_with, AttenuationCurve, GaussianWindow, Material, SynthesisGrid,
};
use viscowave::matfun::{
    cbf_power, cbf_product, check_cm_differences, classify_crf, eval_cbf, nevanlinna_check, CbfFn,
    DiffVerdict, StieltjesRepr,
};
use viscowave::quad::{self, QuadOptions};
use viscowave::Error as CoreError;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "viscowave", version, about = "Wave attenuation toolkit for creep-compliance materials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration (see docs/schema.md)
    #[arg(long)]
    config: PathBuf,
    /// Override the output path from the config
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the frequency grid, as lo:hi:n:log|lin
    #[arg(long)]
    grid: Option<String>,
    /// Override the fit band, as lo:hi
    #[arg(long)]
    band: Option<String>,
    /// Override the verification/verdict tolerance
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the complex wave number and write an attenuation CSV
    Curves(Common),
    /// Run the function-class verdict suite and emit JSON verdicts
    Classify(Common),
    /// Compute and verify the linear attenuation bound
    Bound {
        #[command(flatten)]
        common: Common,
        /// Scale the certified constants (negative control)
        #[arg(long)]
        scale_constants: Option<f64>,
    },
    /// Synthesize a band-limited pulse and report the wavefront
    Green(Common),
    /// Fit a power law to an attenuation curve
    Fit(Common),
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Default)]
#[serde(rename_all = "lowercase")]
enum Spacing {
    #[default]
    Log,
    Lin,
}

#[derive(Debug, Deserialize, Clone, Copy)]
struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
    #[serde(default)]
    spacing: Spacing,
}

impl GridSpec {
    fn build(&self) -> Result<Vec<f64>, CoreError> {
        match self.spacing {
            Spacing::Log => log_grid(self.lo, self.hi, self.n),
            Spacing::Lin => lin_grid(self.lo, self.hi, self.n),
        }
    }

    fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("grid must be lo:hi:n:log|lin, got {text}"));
        }
        let lo = parts[0].parse().map_err(|e| format!("bad grid lo: {e}"))?;
        let hi = parts[1].parse().map_err(|e| format!("bad grid hi: {e}"))?;
        let n = parts[2].parse().map_err(|e| format!("bad grid n: {e}"))?;
        let spacing = match parts[3] {
            "log" => Spacing::Log,
            "lin" => Spacing::Lin,
            other => return Err(format!("grid spacing must be log or lin, got {other}")),
        };
        Ok(GridSpec { lo, hi, n, spacing })
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MaterialSource {
    Path(String),
    Inline(Material),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FunctionSpec {
    /// f(t) = integral of exp(-y^alpha) over [0, t]
    ExpPowerIntegral { alpha: f64 },
    /// f(t) = t^exponent
    Power { exponent: f64 },
    /// f(t) = offset + slope t + coeff t^alpha
    PolyPower { offset: f64, slope: f64, coeff: f64, alpha: f64 },
    /// complete Bernstein function in Stieltjes form
    Stieltjes(StieltjesRepr),
}

#[derive(Debug, Deserialize)]
struct RunConfig {
    version: u32,
    #[serde(default)]
    material: Option<MaterialSource>,
    #[serde(default)]
    function: Option<FunctionSpec>,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    band: Option<(f64, f64)>,
    #[serde(default)]
    tolerance: Option<f64>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    report_out: Option<PathBuf>,
    // pulse synthesis
    #[serde(default)]
    x: Option<f64>,
    #[serde(default)]
    time_grid: Option<GridSpec>,
    #[serde(default)]
    window: Option<GaussianWindow>,
    #[serde(default)]
    synthesis: Option<SynthesisGrid>,
    #[serde(default)]
    arrival_threshold: Option<f64>,
    // classifier parameters
    #[serde(default)]
    orders: Option<usize>,
    #[serde(default)]
    step: Option<f64>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    // bound negative control
    #[serde(default)]
    scale_constants: Option<f64>,
    // fit input
    #[serde(default)]
    curve_csv: Option<PathBuf>,
}

/// CLI failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::CannotFit(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("VISCOWAVE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Curves(c) => cmd_curves(&c),
        Command::Classify(c) => cmd_classify(&c),
        Command::Bound { common, scale_constants } => cmd_bound(&common, scale_constants),
        Command::Green(c) => cmd_green(&c),
        Command::Fit(c) => cmd_fit(&c),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let payload = json!({ "error": { "code": f.code, "message": f.message } });
            eprintln!("{payload}");
            ExitCode::from(f.code)
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Failure::config(format!("cannot read config {}: {e}", common.config.display())))?;
    let mut config: RunConfig =
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("bad config: {e}")))?;
    if config.version != SCHEMA_VERSION {
        return Err(Failure::config(format!(
            "unsupported config version {} (expected {SCHEMA_VERSION})",
            config.version
        )));
    }
    if let Some(grid) = &common.grid {
        config.grid = Some(GridSpec::parse(grid).map_err(Failure::config)?);
    }
    if let Some(band) = &common.band {
        let parts: Vec<&str> = band.split(':').collect();
        if parts.len() != 2 {
            return Err(Failure::config(format!("band must be lo:hi, got {band}")));
        }
        let lo = parts[0].parse().map_err(|e| Failure::config(format!("bad band lo: {e}")))?;
        let hi = parts[1].parse().map_err(|e| Failure::config(format!("bad band hi: {e}")))?;
        config.band = Some((lo, hi));
    }
    if let Some(t) = common.tolerance {
        config.tolerance = Some(t);
    }
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    Ok(config)
}

fn load_material(config: &RunConfig, config_dir: &Path) -> Result<Material, Failure> {
    let source = config
        .material
        .as_ref()
        .ok_or_else(|| Failure::config("config has no material"))?;
    let material = match source {
        MaterialSource::Inline(m) => m.clone(),
        MaterialSource::Path(p) => {
            let path = config_dir.join(p);
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::config(format!("cannot read material {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::config(format!("bad material: {e}")))?
        }
    };
    Ok(material.validated()?)
}

fn write_json(path: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), Failure> {
    let text = format!("{}\n", serde_json::to_string_pretty(value).expect("serializable"));
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_curves(common: &Common) -> Result<ExitCode, Failure> {
    let config = load_config(common)?;
    let dir = common.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let material = load_material(&config, &dir)?;
    let grid = config
        .grid
        .ok_or_else(|| Failure::config("curves needs a frequency grid"))?
        .build()?;
    let table = curve(&material, &grid)?;
    let out = config.out.ok_or_else(|| Failure::config("curves needs an output path"))?;
    let file = File::create(&out).map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
    table
        .write_csv(BufWriter::new(file))
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;
    Ok(ExitCode::SUCCESS)
}

/// Sample count for quadrature-backed function sampling.
fn classify_grid(config: &RunConfig) -> Result<Vec<f64>, Failure> {
    match config.grid {
        Some(g) => Ok(g.build()?),
        None => Ok(lin_grid(0.05, 3.0, 60)?),
    }
}

fn verdict_json(class: &str, verdict: &Result<DiffVerdict, CoreError>, tol: f64) -> serde_json::Value {
    match verdict {
        Ok(v) => json!({
            "class": class,
            "pass": v.pass,
            "witness": v.first_violation.as_ref().map(|w| json!({
                "order": w.order,
                "location": w.location,
                "value": w.value,
                "sign_change": v.sign_change,
            })),
            "tolerances": { "verdict": tol, "max_order": v.max_order },
        }),
        Err(CoreError::Precision { order, noise, signal }) => json!({
            "class": class,
            "pass": null,
            "error": format!("precision: order {order} unresolvable (noise {noise:.3e}, signal {signal:.3e})"),
            "tolerances": { "verdict": tol },
        }),
        Err(e) => json!({ "class": class, "pass": null, "error": e.to_string() }),
    }
}

fn cmd_classify(common: &Common) -> Result<ExitCode, Failure> {
    let config = load_config(common)?;
    let function = config
        .function
        .as_ref()
        .ok_or_else(|| Failure::config("classify needs a function"))?;
    let grid = classify_grid(&config)?;
    let orders = config.orders.unwrap_or(8);
    let h = config.step.unwrap_or(0.1);
    let tol = config.tolerance.unwrap_or(viscowave::matfun::VERDICT_TOL);

    let mut verdicts = Vec::new();
    match function {
        FunctionSpec::Stieltjes(s) => {
            let s = s.clone();
            let n = config.samples.unwrap_or(200);
            let seed = config.seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<Complex64> = (0..n)
                .map(|_| {
                    let radius = 10f64.powf(rng.gen_range(-3.0..3.0));
                    let angle = rng.gen_range(0.02..std::f64::consts::PI - 0.02);
                    Complex64::from_polar(radius, angle)
                })
                .collect();
            let verdict = nevanlinna_check(|z| eval_cbf(&s, z), &samples)?;
            verdicts.push(json!({
                "class": "nevanlinna",
                "pass": verdict.pass,
                "witness": verdict.witness.map(|(z, v)| json!({
                    "z": [z.re, z.im],
                    "value": [v.re, v.im],
                })),
                "tolerances": { "verdict": tol, "samples": n, "seed": seed },
            }));
            // closure spot-checks: sqrt of the function and sqrt(z) * sqrt(f)
            let base = CbfFn::from(s);
            let half = cbf_power(base.clone(), 0.5)?;
            let product = cbf_product(CbfFn::Var, base, 0.5)?;
            for (name, f) in [("nevanlinna_sqrt", &half), ("nevanlinna_sqrtz_product", &product)] {
                let verdict = nevanlinna_check(|z| f.eval(z), &samples)?;
                verdicts.push(json!({
                    "class": name,
                    "pass": verdict.pass,
                    "witness": verdict.witness.map(|(z, v)| json!({
                        "z": [z.re, z.im],
                        "value": [v.re, v.im],
                    })),
                    "tolerances": { "verdict": tol, "samples": n, "seed": seed },
                }));
            }
        }
        spec => {
            let opts = QuadOptions::default();
            let value: Box<dyn Fn(f64) -> f64> = match spec {
                FunctionSpec::ExpPowerIntegral { alpha } => {
                    let alpha = *alpha;
                    Box::new(move |t: f64| {
                        if t == 0.0 {
                            0.0
                        } else {
                            quad::integrate_interval(&|y: f64| (-y.powf(alpha)).exp(), 0.0, t, &opts)
                                .unwrap_or(f64::NAN)
                        }
                    })
                }
                FunctionSpec::Power { exponent } => {
                    let e = *exponent;
                    Box::new(move |t: f64| t.powf(e))
                }
                FunctionSpec::PolyPower { offset, slope, coeff, alpha } => {
                    let (a, b, c, al) = (*offset, *slope, *coeff, *alpha);
                    Box::new(move |t: f64| a + b * t + c * t.powf(al))
                }
                FunctionSpec::Stieltjes(_) => unreachable!(),
            };
            let derivative: Box<dyn Fn(f64) -> f64> = match spec {
                FunctionSpec::ExpPowerIntegral { alpha } => {
                    let al = *alpha;
                    Box::new(move |t: f64| (-t.powf(al)).exp())
                }
                FunctionSpec::Power { exponent } => {
                    let e = *exponent;
                    Box::new(move |t: f64| e * t.powf(e - 1.0))
                }
                FunctionSpec::PolyPower { slope, coeff, alpha, .. } => {
                    let (b, c, al) = (*slope, *coeff, *alpha);
                    Box::new(move |t: f64| b + c * al * t.powf(al - 1.0))
                }
                FunctionSpec::Stieltjes(_) => unreachable!(),
            };

            let samples: Vec<(f64, f64)> = grid.iter().map(|&t| (t, value(t))).collect();
            let crf = classify_crf(&samples)?;
            verdicts.push(json!({
                "class": "crf",
                "pass": crf.is_crf,
                "witness": crf.witness.map(|w| json!({
                    "location": w.location,
                    "index": w.index,
                    "kind": w.kind,
                })),
                "tolerances": { "verdict": tol, "samples": samples.len() },
            }));
            // a function is Bernstein iff its derivative is completely
            // monotonic; run the difference sweep on the derivative
            let positive_grid: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0).collect();
            let bernstein = check_cm_differences(&derivative, orders, &positive_grid, h);
            verdicts.push(verdict_json("bernstein", &bernstein, tol));
        }
    }

    let payload = json!({ "version": SCHEMA_VERSION, "verdicts": verdicts });
    write_json(config.out.as_ref(), &payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(common: &Common, scale_flag: Option<f64>) -> Result<ExitCode, Failure> {
    let config = load_config(common)?;
    let dir = common.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let material = load_material(&config, &dir)?;
    let grid = match config.grid {
        Some(g) => g.build()?,
        None => log_grid(1e-3, 1e6, 300)?,
    };
    let rel_tol = config.tolerance.unwrap_or(1e-9);
    let constants = bound_constants(&material)?;
    let scale = scale_flag.or(config.scale_constants);
    let effective = match scale {
        Some(s) => constants.scaled(s),
        None => constants,
    };
    let report = verify_bound_with(&material, &effective, &grid, rel_tol)?;
    let payload = json!({
        "version": SCHEMA_VERSION,
        "constants": effective,
        "scale_constants": scale,
        "report": report,
    });
    write_json(config.out.as_ref(), &payload)?;
    Ok(if report.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_green(common: &Common) -> Result<ExitCode, Failure> {
    let config = load_config(common)?;
    let dir = common.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let material = load_material(&config, &dir)?;
    let x = config.x.ok_or_else(|| Failure::config("green needs an observation distance x"))?;
    let t_spec = config
        .time_grid
        .ok_or_else(|| Failure::config("green needs a time grid"))?;
    let t_grid = lin_grid(t_spec.lo, t_spec.hi, t_spec.n)?;
    let window = config.window.ok_or_else(|| Failure::config("green needs a window"))?;
    let synthesis = config
        .synthesis
        .ok_or_else(|| Failure::config("green needs a synthesis grid"))?;
    let threshold = config.arrival_threshold.unwrap_or(0.5);

    let signal = greens_function(&material, x, &t_grid, &window, &synthesis)?;
    let report = front_report(&material, x, &t_grid, &signal, &window, threshold)?;

    if let Some(out) = &config.out {
        let file = File::create(out).map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
        let mut w = BufWriter::new(file);
        (|| -> std::io::Result<()> {
            writeln!(w, "t,u")?;
            for (t, u) in t_grid.iter().zip(&signal) {
                writeln!(w, "{t},{u}")?;
            }
            Ok(())
        })()
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;
    }
    let payload = json!({ "version": SCHEMA_VERSION, "report": report });
    write_json(config.report_out.as_ref(), &payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(common: &Common) -> Result<ExitCode, Failure> {
    let config = load_config(common)?;
    let band = config.band.ok_or_else(|| Failure::config("fit needs a band"))?;
    let table = match &config.curve_csv {
        Some(path) => {
            let dir = common.config.parent().unwrap_or(Path::new("."));
            let full = dir.join(path);
            let file = File::open(&full)
                .map_err(|e| Failure::config(format!("cannot open {}: {e}", full.display())))?;
            AttenuationCurve::read_csv(BufReader::new(file))?
        }
        None => {
            let dir = common.config.parent().unwrap_or(Path::new(".")).to_path_buf();
            let material = load_material(&config, &dir)?;
            let grid = config
                .grid
                .ok_or_else(|| Failure::config("fit needs a grid or a curve_csv"))?
                .build()?;
            curve(&material, &grid)?
        }
    };
    let fit = fit_powerlaw(&table, band)?;
    let payload = json!({ "version": SCHEMA_VERSION, "fit": fit });
    write_json(config.out.as_ref(), &payload)?;
    Ok(ExitCode::SUCCESS)
}
