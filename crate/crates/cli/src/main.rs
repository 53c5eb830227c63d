use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aarhus_core::diagrams::{closed_weight, theta_values, JacobiDiagram};
use aarhus_core::exact::HbarSeries;
use aarhus_core::laplace::{lens_normalizer, lens_tau};
use aarhus_core::liealg::parse_algebra;
use aarhus_core::rootsys::{parse_root_system, RootSystem};
use aarhus_core::suite::{run_suite, Suite, SuiteConfig};
use clap::{Args, Parser, Subcommand};

const CONFIG_ENV: &str = "AARHUS_CONFIG";

#[derive(Parser)]
#[command(name = "aarhus", version, about = "Exact checks of Gaussian evaluation identities on sl2/sl3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Print the lens space series for L(p,1), scaled to constant term 1.
    TauLens {
        #[arg(short = 'p', allow_negative_numbers = true)]
        p: i64,
        /// sl2, sl3 or a root system name (A1, A2, A3, B2, G2).
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value_t = 8)]
        order: i64,
        /// Print I2(p)/I2(sign p) without the |p|^{phi+} normalization.
        #[arg(long)]
        raw: bool,
    },
    /// Print the theta weight next to 24|rho|^2.
    Theta {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        /// Reverse the cyclic order at one vertex (negative control).
        #[arg(long)]
        flip: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; repeatable. `all` selects every suite.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// TOML config file. Falls back to $AARHUS_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path. Without it the report goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "algebra", value_name = "NAME")]
    algebras: Vec<String>,
    #[arg(long = "root-system", value_name = "NAME")]
    root_systems: Vec<String>,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    series_order: Option<i64>,
    #[arg(long = "framing", value_name = "F", allow_negative_numbers = true)]
    framings: Vec<i64>,
    #[arg(long)]
    mc_samples: Option<u64>,
    #[arg(long)]
    mc_seed: Option<u64>,
    /// Double the reduction constant; the run must then fail.
    #[arg(long)]
    debug_tamper_constant: bool,
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<SuiteConfig, Failure> {
    let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let Some(path) = path.map(Path::to_path_buf).or(env_path) else {
        return Ok(SuiteConfig::default());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

fn build_config(args: &VerifyArgs) -> Result<SuiteConfig, Failure> {
    let mut cfg = load_config(args.config.as_deref())?;
    if !args.suites.is_empty() {
        let mut suites = Vec::new();
        for s in &args.suites {
            if s == "all" {
                suites.extend(Suite::ALL);
            } else {
                suites.push(s.parse::<Suite>()?);
            }
        }
        cfg.suites = suites;
    }
    if !args.algebras.is_empty() {
        cfg.algebras = args.algebras.clone();
    }
    if !args.root_systems.is_empty() {
        cfg.root_systems = args.root_systems.clone();
    }
    if !args.framings.is_empty() {
        cfg.framings = args.framings.clone();
    }
    if let Some(v) = args.max_degree {
        cfg.max_degree = v;
    }
    if let Some(v) = args.series_order {
        cfg.series_order = v;
    }
    if let Some(v) = args.mc_samples {
        cfg.mc_samples = v;
    }
    if let Some(v) = args.mc_seed {
        cfg.mc_seed = v;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    cfg.tamper_constant |= args.debug_tamper_constant;
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = build_config(args)?;
    let report = run_suite(&cfg)?;
    for (suite, total, passed) in report.summary() {
        eprintln!("{suite:<12} {passed}/{total}");
    }
    match &cfg.output {
        Some(path) => report
            .write_atomic(path)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{}", report.to_json()),
    }
    if let Some(r) = report.first_failure() {
        eprintln!("FAIL: first failing record: {} {} ({}) {}", r.suite, r.identity, r.algebra, r.inputs);
        return Err(Failure::Verification);
    }
    eprintln!("PASS");
    Ok(())
}

fn root_system_for(name: &str) -> Result<RootSystem, Failure> {
    if name.starts_with("sl") {
        Ok(parse_algebra(name)?.root_system().clone())
    } else {
        Ok(parse_root_system(name)?)
    }
}

fn tau_lens(p: i64, algebra: &str, order: i64, raw: bool) -> Result<(), Failure> {
    if order < 0 {
        return Err(Failure::Usage(format!("order must be non-negative, got {order}")));
    }
    let rs = root_system_for(algebra)?;
    let mut tau = lens_tau(&rs, p, order)?;
    if !raw {
        tau = tau.scale(&lens_normalizer(&rs, p));
    }
    // the requested order is implicit, so print the known terms only
    let terms = HbarSeries::from_coeffs(tau.ring(), tau.coeffs().map(|(k, c)| (k, c.clone())), None);
    println!("{terms}");
    Ok(())
}

fn theta(algebra: &str, flip: bool) -> Result<(), Failure> {
    let l = parse_algebra(algebra)?;
    let (w, _, reference) = theta_values(&l)?;
    let w = if flip {
        closed_weight(&JacobiDiagram::theta().flip_vertex(0)?, &l)?
    } else {
        w
    };
    println!("{w} {reference}");
    if w != reference {
        eprintln!("mismatch: weight {w} vs 24|rho|^2 {reference}");
        return Err(Failure::Verification);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::TauLens { p, algebra, order, raw } => tau_lens(*p, algebra, *order, *raw),
        Command::Theta { algebra, flip } => theta(algebra, *flip),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
