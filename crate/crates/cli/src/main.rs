use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dihedral_core::algebra::AlgebraTable;
use dihedral_core::deformation::{classify_defring, find_certificate, DefReport, ModuleOrigin};
use dihedral_core::homological::{ext1_dim, hom_space, omega_orbit, stable_end_dim, stable_hom};
use dihedral_core::quiver::CATALOG_NAMES;
use dihedral_core::rep::Rep;
use dihedral_core::strings::band_of;
use dihedral_core::workbench::{
    build_module, census, census_csv, load_algebra, load_algebra_file, prime_for, reproduce, ModuleDesc,
    ReproduceOptions, DEFAULT_CAP,
};

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    () => { emit(format_args!("\n")) };
    ($($t:tt)*) => {{ out!($($t)*); emit(format_args!("\n")) }};
}

#[derive(Parser)]
#[command(name = "dihedral", version, about = "Stable endomorphisms and deformation rings over dihedral-type algebras")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = 5)]
    p: u32,
    /// Highest lifting order tried without a certificate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Longest string enumerated by the census.
    #[arg(long = "max-len", global = true, default_value_t = 6)]
    max_len: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (census and reproduce).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Catalog algebra name, e.g. `D(3B)_{2,1}` or `d3b21`.
    #[arg(short, long, global = true)]
    algebra: Option<String>,
    /// Presentation file used instead of a catalog algebra.
    #[arg(long = "algebra-file", global = true, conflicts_with = "algebra")]
    algebra_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog listing and presentations.
    Algebras {
        #[command(subcommand)]
        cmd: AlgebrasCmd,
    },
    /// Prints the arrow matrices of a module.
    Module {
        #[command(subcommand)]
        kind: ModuleKind,
    },
    /// Dimension of Hom(M, N) and of its stable quotient.
    Hom { m: String, n: String },
    /// Dimension of the stable endomorphism ring.
    Stend { module: String },
    /// Iterated syzygies.
    Omega {
        module: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Dimension of Ext^1(M, N); N defaults to M.
    Ext { m: String, n: Option<String> },
    /// Deformation ring of a module.
    Classify { module: String },
    /// Strings up to --max-len and band boundary modules, one row each.
    Census,
    /// Runs every acceptance scenario and compares with the expectation table.
    Reproduce,
}

#[derive(Subcommand)]
enum AlgebrasCmd {
    List,
    Show { name: Option<String> },
}

#[derive(Subcommand)]
enum ModuleKind {
    String { word: String },
    Band {
        mu: String,
        #[arg(default_value_t = 1)]
        m: usize,
    },
    Simple { vertex: String },
    Proj { vertex: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn algebra(opts: &Opts) -> Result<Arc<AlgebraTable>> {
    if let Some(path) = &opts.algebra_file {
        return load_algebra_file(path, opts.p).with_context(|| format!("loading {}", path.display()));
    }
    let Some(name) = &opts.algebra else {
        bail!("give --algebra NAME or --algebra-file PATH")
    };
    Ok(load_algebra(name, opts.p)?)
}

/// A descriptor, or `file:<path>` holding a module in JSON.
fn module(alg: &Arc<AlgebraTable>, text: &str) -> Result<(Rep, ModuleOrigin)> {
    if let Some(path) = text.strip_prefix("file:") {
        let data = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let value: serde_json::Value = serde_json::from_str(&data)?;
        return Ok((Rep::from_json(alg.clone(), &value)?, ModuleOrigin::Other));
    }
    let desc: ModuleDesc = text.parse()?;
    Ok(build_module(alg, &desc)?)
}

fn dims_text(r: &Rep) -> String {
    format!("{:?}", r.dims())
}

fn print_json(v: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = cli.opts;
    match cli.cmd {
        Cmd::Algebras { cmd: AlgebrasCmd::List } => {
            let mut rows = Vec::new();
            for name in CATALOG_NAMES {
                let p = prime_for(name, opts.p);
                let a = load_algebra(name, p)?;
                rows.push(json!({
                    "name": name,
                    "p": p,
                    "vertices": a.num_vertices(),
                    "dim": a.dim(),
                    "loewy_length": a.loewy_length(),
                }));
            }
            if opts.json {
                print_json(&json!(rows));
            } else {
                for r in rows {
                    outln!("{:<12} p={:<3} vertices={} dim={:<3} loewy={}", r["name"].as_str().unwrap(), r["p"], r["vertices"], r["dim"], r["loewy_length"]);
                }
            }
        }
        Cmd::Algebras { cmd: AlgebrasCmd::Show { name } } => {
            let mut o = opts.clone();
            if name.is_some() {
                o.algebra = name;
            }
            let a = algebra(&o)?;
            let n = a.num_vertices();
            let cartan: Vec<Vec<usize>> = (0..n).map(|u| (0..n).map(|v| a.peirce_dim(u, v)).collect()).collect();
            let band = band_of(&a).ok().map(|b| (b.word.display(a.quiver()), b.domain.to_string()));
            if opts.json {
                print_json(&json!({
                    "name": a.name(),
                    "p": a.field().p(),
                    "presentation": a.presentation().serialize(),
                    "dim": a.dim(),
                    "dims_by_length": a.dims_by_length(),
                    "loewy_length": a.loewy_length(),
                    "cartan": cartan,
                    "symmetric": a.symmetric_form().is_some(),
                    "band": band.as_ref().map(|b| &b.0),
                }));
            } else {
                out!("{}", a.presentation().serialize());
                outln!("# p = {}, dim = {}, Loewy length = {}", a.field().p(), a.dim(), a.loewy_length());
                outln!("# dims by path length: {:?}", a.dims_by_length());
                outln!("# Cartan matrix: {cartan:?}");
                outln!("# symmetric: {}", a.symmetric_form().is_some());
                if let Some((w, d)) = band {
                    outln!("# band: {w}, mu in {d}");
                }
            }
        }
        Cmd::Module { kind } => {
            let a = algebra(&opts)?;
            let desc = match kind {
                ModuleKind::String { word } => ModuleDesc::String(word),
                ModuleKind::Band { mu, m } => ModuleDesc::Band {
                    mu: mu.parse().map_err(anyhow::Error::msg)?,
                    m,
                },
                ModuleKind::Simple { vertex } => ModuleDesc::Simple(vertex),
                ModuleKind::Proj { vertex } => ModuleDesc::Projective(vertex),
            };
            let (r, _) = build_module(&a, &desc)?;
            if opts.json {
                print_json(&r.to_json());
            } else {
                outln!("{desc}: dims {}", dims_text(&r));
                for (i, x) in r.arrows().iter().enumerate() {
                    outln!("{} = {:?}", a.quiver().arrow(i).name, x.to_rows());
                }
            }
        }
        Cmd::Hom { m, n } => {
            let a = algebra(&opts)?;
            let (rm, _) = module(&a, &m)?;
            let (rn, _) = module(&a, &n)?;
            let h = hom_space(&rm, &rn)?.dim();
            let s = stable_hom(&rm, &rn)?.stable_dim();
            if opts.json {
                print_json(&json!({"hom": h, "stable_hom": s}));
            } else {
                outln!("dim Hom = {h}, dim stable Hom = {s}");
            }
        }
        Cmd::Stend { module: m } => {
            let a = algebra(&opts)?;
            let (r, _) = module(&a, &m)?;
            let d = stable_end_dim(&r)?;
            if opts.json {
                print_json(&json!({"module": m, "dims": r.dims(), "stable_end_dim": d}));
            } else {
                outln!("{d}");
            }
        }
        Cmd::Omega { module: m, steps } => {
            let a = algebra(&opts)?;
            let (r, _) = module(&a, &m)?;
            let orbit = omega_orbit(&r, steps)?;
            if opts.json {
                let mods: Vec<_> = orbit.modules.iter().map(|x| x.to_json()).collect();
                print_json(&json!({"modules": mods, "period": orbit.period, "reached_zero": orbit.reached_zero}));
            } else {
                for (i, x) in orbit.modules.iter().enumerate() {
                    outln!("Omega^{i}: dims {}", dims_text(x));
                }
                if let Some(k) = orbit.period {
                    outln!("period {k}");
                }
                if orbit.reached_zero {
                    outln!("projective: reached zero");
                }
            }
        }
        Cmd::Ext { m, n } => {
            let a = algebra(&opts)?;
            let (rm, _) = module(&a, &m)?;
            let rn = match &n {
                Some(n) => module(&a, n)?.0,
                None => rm.clone(),
            };
            let e = ext1_dim(&rm, &rn)?;
            if opts.json {
                print_json(&json!({"ext1": e}));
            } else {
                outln!("{e}");
            }
        }
        Cmd::Classify { module: m } => {
            let a = algebra(&opts)?;
            let (r, origin) = module(&a, &m)?;
            let cert = find_certificate(&a, &origin);
            let report = classify_defring(&r, opts.cap, cert.as_ref().map(|(id, l)| (id.as_str(), l)))?;
            if opts.json {
                print_json(&json!({
                    "algebra": a.name(),
                    "p": a.field().p(),
                    "module": m,
                    "dims": r.dims(),
                    "report": report,
                }));
            } else {
                print_report(&m, &r, &report);
            }
        }
        Cmd::Census => {
            let a = algebra(&opts)?;
            let rows = census(&a, opts.max_len, opts.cap)?;
            if opts.json {
                print_json(&json!({
                    "algebra": a.name(),
                    "p": a.field().p(),
                    "max_len": opts.max_len,
                    "rows": rows,
                }));
            } else {
                out!("{}", census_csv(&rows));
            }
        }
        Cmd::Reproduce => {
            let report = reproduce(
                opts.p,
                &ReproduceOptions {
                    cap: opts.cap,
                    census_max_len: opts.max_len,
                },
            )?;
            if opts.json {
                print_json(&serde_json::to_value(&report)?);
            } else if opts.csv {
                out!("{}", report.checks_csv());
            } else {
                for s in &report.scenarios {
                    let status = if s.passed { "PASS" } else { "FAIL" };
                    outln!("[{status}] {} {} ({} checks)", s.criterion, s.title, s.checks.len());
                    for n in &s.notes {
                        outln!("       note: {n}");
                    }
                }
            }
            if !report.passed {
                eprintln!("mismatched rows:");
                for s in &report.scenarios {
                    for c in s.failures() {
                        eprintln!("- {} p={} {} {}: expected {}", c.algebra, c.p, c.clause, c.module, c.expected);
                        eprintln!("+ {} p={} {} {}: observed {}", c.algebra, c.p, c.clause, c.module, c.observed);
                    }
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(m: &str, r: &Rep, rep: &DefReport) {
    outln!("module: {m}");
    outln!("dims: {}", dims_text(r));
    outln!("stable End dim: {}", rep.stable_end_dim);
    if let Some(e) = rep.ext1 {
        outln!("Ext^1 dim: {e}");
    }
    outln!("R = {}", rep.verdict_label());
    if let Some(o) = rep.obstruction_order {
        outln!("obstruction at order: {o}");
    }
    if let Some(dihedral_core::deformation::PowerSeriesEvidence::Certified { certificate }) = &rep.power_series {
        outln!("certificate: {certificate}");
    }
    if let Some(j) = rep.regular_orbit_step {
        outln!("Omega step to the simple top: {j}");
    }
    for n in &rep.notes {
        outln!("note: {n}");
    }
}
