use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use complab::carleson::{dyadic_measures, h_grid, luecking_partial_sums, rho_profile, sample_boundary, RhoOptions};
use complab::experiment::{run_experiment, ExperimentConfig, ExperimentId};
use complab::orlicz::{check_condition, default_grid, log_grid};
use complab::spec::{parse_condition, parse_psi, parse_symbol};
use complab::symbols::Symbol;
use serde_json::json;

#[derive(Parser)]
#[command(name = "complab", version, about = "Composition operators on Hardy and Hardy-Orlicz spaces, numerically")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orlicz function utilities.
    Orlicz {
        #[command(subcommand)]
        cmd: OrliczCmd,
    },
    /// Symbol utilities.
    Symbol {
        #[command(subcommand)]
        cmd: SymbolCmd,
    },
    /// Estimate the Carleson function; CSV `h,rho,stderr,n_points`.
    Rho {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 1e-4)]
        hmin: f64,
        #[arg(long, default_value_t = 0.5)]
        hmax: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long, default_value_t = 16)]
        bootstrap: usize,
        /// Angular half-width of the windows, in units of h.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dyadic window masses; CSV `n,j,mass`.
    Dyadic {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Luecking partial sums and tail ratios, as JSON.
    Luecking {
        #[command(flatten)]
        src: Source,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Run one of the reference experiments and write its report bundle.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum OrliczCmd {
    /// Decide a growth condition; prints the verdict as JSON.
    Check {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        cond: String,
        /// Grid as `lo,hi,n` in x; defaults to the function's own grid.
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Build a symbol and write its diagnostics and boundary values as JSON.
    Build {
        spec: String,
        #[arg(long)]
        psi: Option<String>,
        /// Number of boundary samples to record.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long)]
    symbol: String,
    /// Needed for `outer:` symbols.
    #[arg(long)]
    psi: Option<String>,
    #[arg(long, default_value_t = 1 << 20)]
    n: usize,
    /// `grid` or an integer seed.
    #[arg(long, default_value = "grid")]
    seed: String,
}

#[derive(Args)]
struct ExperimentArgs {
    /// thm-noncompact, lens, phi-theta, corollary or custom.
    id: Option<String>,
    /// Flat `key = value` file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seed(s: &str) -> Result<Option<u64>> {
    if s == "grid" {
        Ok(None)
    } else {
        Ok(Some(s.parse().with_context(|| format!("seed {s:?} is neither grid nor an integer"))?))
    }
}

fn build_symbol(spec: &str, psi: Option<&str>) -> Result<Symbol> {
    let psi = psi.map(parse_psi).transpose()?;
    Ok(parse_symbol(spec, psi.as_ref())?)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout(text),
    }
}

fn sample(src: &Source) -> Result<complab::carleson::BoundarySample> {
    let sym = build_symbol(&src.symbol, src.psi.as_deref())?;
    Ok(sample_boundary(&sym, src.n, parse_seed(&src.seed)?, 1.0)?)
}

fn experiment(args: ExperimentArgs) -> Result<bool> {
    let mut cfg = match (&args.config, &args.id) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let c = ExperimentConfig::from_kv(&text)?;
            if let Some(id) = &args.id {
                let id = ExperimentId::parse(id)?;
                if id != c.id {
                    bail!("config is for {} but {} was requested", c.id.name(), id.name());
                }
            }
            c
        }
        (None, Some(id)) => ExperimentConfig::defaults(ExperimentId::parse(id)?),
        (None, None) => bail!("give an experiment id or --config"),
    };
    if let Some(v) = args.symbol {
        cfg.symbol = Some(v);
    }
    if let Some(v) = args.psi {
        cfg.psi = Some(v);
    }
    if let Some(v) = args.theta {
        cfg.theta = Some(v);
    }
    if let Some(v) = args.n {
        cfg.n_points = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = parse_seed(&v)?;
    }
    if let Some(v) = args.out {
        cfg.out = Some(v);
    }
    let out = cfg.out.clone().context("--out is required")?;
    let bundle = run_experiment(&cfg)?;
    bundle.write(&out)?;
    stdout(&bundle.summary)?;
    Ok(bundle.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Orlicz { cmd: OrliczCmd::Check { psi, cond, grid } } => {
            let f = parse_psi(&psi)?;
            let c = parse_condition(&cond)?;
            let g = match grid {
                None => default_grid(&f),
                Some(s) => {
                    let v: Vec<&str> = s.split(',').collect();
                    let [lo, hi, n] = v.as_slice() else { bail!("--grid expects lo,hi,n") };
                    log_grid(lo.trim().parse()?, hi.trim().parse()?, n.trim().parse()?)
                }
            };
            let v = check_condition(&f, &c, &g)?;
            stdout(&(serde_json::to_string_pretty(&v)? + "\n"))?;
        }
        Cmd::Symbol { cmd: SymbolCmd::Build { spec, psi, samples, out } } => {
            let sym = build_symbol(&spec, psi.as_deref())?;
            let mut diag = json!({});
            match &sym {
                Symbol::General(g) => {
                    diag = json!({
                        "k": g.coeffs.k(),
                        "tail_bound": g.coeffs.tail_bound,
                        "decay_const": g.coeffs.decay_const,
                        "hf_derivative_diagnostic": g.hf_derivative_diagnostic(),
                    })
                }
                Symbol::Outer(o) => diag = json!({ "sup_modulus": o.sup_modulus, "warnings": o.warnings }),
                _ => {}
            }
            let boundary: Vec<[f64; 3]> = (0..samples)
                .filter_map(|i| {
                    let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / samples as f64;
                    sym.boundary(t).map(|z| [t, z.re, z.im])
                })
                .collect();
            let doc = json!({ "symbol": sym.label(), "diagnostics": diag, "boundary": boundary });
            emit(&(serde_json::to_string_pretty(&doc)? + "\n"), out.as_deref())?;
        }
        Cmd::Rho { src, hmin, hmax, points, bootstrap, width, out } => {
            let s = sample(&src)?;
            let opts = RhoOptions { bootstrap, seed: parse_seed(&src.seed)?.unwrap_or(0), width };
            let p = rho_profile(&s, &h_grid(hmin, hmax, points), &opts)?;
            emit(&p.to_csv(), out.as_deref())?;
        }
        Cmd::Dyadic { src, depth, out } => {
            let dm = dyadic_measures(&sample(&src)?, depth)?;
            emit(&dm.to_csv(), out.as_deref())?;
        }
        Cmd::Luecking { src, p, depth } => {
            let dm = dyadic_measures(&sample(&src)?, depth)?;
            let sums = p.iter().map(|q| luecking_partial_sums(&dm, *q)).collect::<complab::Result<Vec<_>>>()?;
            stdout(&(serde_json::to_string_pretty(&sums)? + "\n"))?;
        }
        Cmd::Experiment(args) => return experiment(args),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("complab: at least one assertion failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("complab: {e:#}");
            ExitCode::from(2)
        }
    }
}
