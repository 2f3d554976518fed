use std::path::PathBuf;
use std::process::ExitCode;

use acat_core::acat1d::{LowOrderKind, SchemeKind, SchemeSpec};
use acat_core::diffops::{centered_coeffs, conservative_midpoint_coeffs, interpolatory_coeffs, DiffFormula, Rational};
use acat_core::harness::{
    convergence_study, error_entry, fmt_f64, run_config, timing_table, OutputOptions, Preset, RunConfig,
};
use acat_core::{harness, Execution};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Adaptive compact approximate Taylor solvers for hyperbolic conservation laws.
#[derive(Parser, Debug)]
#[command(name = "acat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one preset and write CSV output.
    Run(RunArgs),
    /// Errors and observed orders over a list of meshes.
    Convergence(ConvergenceArgs),
    /// Print finite-difference weights as exact rationals and decimals.
    Coeffs(CoeffsArgs),
    /// Wall-time table of several schemes, normalized to ACAT2.
    Bench(BenchArgs),
}

/// Options shared by every command that builds a [`RunConfig`].
#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Preset name (see `--list-presets`).
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["acat", "cat", "flcat2", "lo", "lat"])]
    scheme: Option<String>,
    /// Largest stencil half-width (order 2P).
    #[arg(long = "P", short = 'P')]
    max_p: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// Boundary override: periodic, outflow.
    #[arg(long)]
    bc: Option<String>,
    /// Low-order flux: rusanov, lf, hll.
    #[arg(long)]
    low_order: Option<String>,
    /// Raw `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Compute fluxes on one thread.
    #[arg(long)]
    serial: bool,
    /// List the preset names and exit.
    #[arg(long)]
    list_presets: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    cells: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the indicator values of the last step.
    #[arg(long)]
    psi: bool,
    /// Keep every n-th step in diagnostics.csv.
    #[arg(long)]
    history: Option<usize>,
    /// Also write a gnuplot `.dat` file and script.
    #[arg(long)]
    gnuplot: bool,
    /// Extract a cut of a 2D field; only `y=x` is supported.
    #[arg(long)]
    cut: Option<String>,
    /// Skip the comparison against the reference solution.
    #[arg(long)]
    no_error: bool,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Comma-separated meshes.
    #[arg(long, value_delimiter = ',', default_value = "40,80,160,320")]
    cells: Vec<usize>,
    /// Write `convergence.csv` into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormulaChoice {
    Centered,
    Interpolatory,
    Conservative,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    /// Stencil half-width.
    #[arg(long)]
    p: usize,
    /// Derivative order.
    #[arg(long)]
    k: usize,
    /// Evaluation offset such as `1/2` or `0`; implies `--kind interpolatory`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<FormulaChoice>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    cells: Option<usize>,
    /// Comma-separated scheme labels, e.g. `acat2,acat4,acat6,cat4,lo`.
    #[arg(long, value_delimiter = ',', default_value = "acat2,acat4,acat6")]
    schemes: Vec<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

/// Parses labels such as `acat4`, `cat6`, `flcat2`, `lat4`, `lo`.
fn parse_scheme_label(label: &str) -> Result<SchemeSpec> {
    let l = label.trim().to_ascii_lowercase();
    let split = l.find(|c: char| c.is_ascii_digit()).unwrap_or(l.len());
    let (name, digits) = l.split_at(split);
    let order: Option<usize> = if digits.is_empty() { None } else { Some(digits.parse()?) };
    let spec = match (name, order) {
        ("lo", None) => SchemeSpec::first_order(LowOrderKind::Rusanov),
        ("flcat", Some(2)) | ("flcat2", None) => SchemeSpec::flcat2(),
        ("acat", Some(o)) => SchemeSpec::acat_order(o)?,
        ("cat", Some(o)) if o % 2 == 0 => SchemeSpec::cat(o / 2),
        ("lat", Some(o)) if o % 2 == 0 => SchemeSpec::lat(o / 2),
        _ => bail!("unknown scheme label '{label}'"),
    };
    Ok(spec)
}

fn build_config(args: &ConfigArgs) -> Result<RunConfig> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| acat_core::Error::Io(format!("{}: {e}", path.display())))?;
            let cfg = RunConfig::from_kv_str(&text)?;
            if let Some(p) = &args.preset {
                let preset: Preset = p.parse()?;
                if preset != cfg.preset {
                    bail!(acat_core::Error::Config(format!(
                        "--preset {preset} conflicts with preset {} in {}",
                        cfg.preset,
                        path.display()
                    )));
                }
            }
            cfg
        }
        (None, Some(p)) => harness::preset(p)?,
        (None, None) => bail!(acat_core::Error::InvalidArgument("either --preset or --config is required".into())),
    };
    if let Some(s) = &args.scheme {
        cfg.scheme.kind = s.parse::<SchemeKind>()?;
        if cfg.scheme.kind == SchemeKind::FlCat2 || cfg.scheme.kind == SchemeKind::FirstOrder {
            cfg.scheme.max_p = 1;
        }
    }
    let overrides = [
        ("P", args.max_p.map(|v| v.to_string())),
        ("cfl", args.cfl.map(|v| v.to_string())),
        ("t_final", args.tfinal.map(|v| v.to_string())),
        ("bc", args.bc.clone()),
        ("low_order", args.low_order.clone()),
    ];
    for (k, v) in overrides {
        if let Some(v) = v {
            cfg.apply_override(k, &v)?;
        }
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| acat_core::Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.apply_override(k.trim(), v)?;
    }
    if args.serial {
        cfg.exec = Execution::Serial;
    }
    Ok(cfg)
}

fn list_presets() {
    for p in Preset::ALL {
        println!(
            "{:<18} {}D cells={} cfl={} t_final={} bc={}",
            p.name(),
            if p.is_2d() { 2 } else { 1 },
            p.default_cells(),
            p.default_cfl(),
            p.default_t_final(),
            p.default_bc().name()
        );
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    if args.cfg.list_presets {
        list_presets();
        return Ok(());
    }
    let mut cfg = build_config(&args.cfg)?;
    if let Some(n) = args.cells {
        cfg.cells = n;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(h) = args.history {
        cfg.history_every = h;
    }
    cfg.dump_psi |= args.psi;
    let cut_diagonal = match args.cut.as_deref() {
        None => false,
        Some("y=x") => {
            if !cfg.preset.is_2d() {
                bail!(acat_core::Error::InvalidArgument("--cut applies to 2D presets only".into()));
            }
            true
        }
        Some(other) => bail!(acat_core::Error::InvalidArgument(format!("unsupported cut '{other}' (only y=x)"))),
    };
    let outcome = run_config(&cfg)?;
    let files = harness::write_outputs(&outcome, &cfg.out_dir, OutputOptions { gnuplot: args.gnuplot, cut_diagonal })?;
    let d = &outcome.diagnostics;
    println!(
        "preset={} scheme={} cells={} steps={} t={} wall={:.3}s drift={:.3e}",
        cfg.preset,
        cfg.scheme.label(),
        cfg.cells,
        d.step_count(),
        outcome.solution.t(),
        d.wall_time.as_secs_f64(),
        d.conservation_drift()
    );
    let rungs: Vec<String> = d.histogram.iter().enumerate().map(|(p, n)| format!("p{p}:{n}")).collect();
    println!("selected rungs {}", rungs.join(" "));
    if !args.no_error {
        if let Some(e) = error_entry(&outcome)? {
            println!("error L1={} Linf={}", fmt_f64(e.norms.l1), fmt_f64(e.norms.linf));
        }
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<()> {
    if args.cfg.list_presets {
        list_presets();
        return Ok(());
    }
    let cfg = build_config(&args.cfg)?;
    let report = convergence_study(&cfg, &args.cells)?;
    let mut lines = vec!["cells,l1,linf,order_l1,order_linf,steps,seconds".to_string()];
    for e in &report.entries {
        let order = report.orders.iter().find(|o| o.fine == e.cells);
        let (ol1, olinf) = order.map_or((String::new(), String::new()), |o| (fmt_f64(o.l1), fmt_f64(o.linf)));
        lines.push(format!(
            "{},{},{},{ol1},{olinf},{},{}",
            e.cells,
            fmt_f64(e.norms.l1),
            fmt_f64(e.norms.linf),
            e.steps,
            fmt_f64(e.wall_time.as_secs_f64())
        ));
    }
    println!("# {} {} cfl={} t_final={}", cfg.preset, report.scheme, cfg.cfl, cfg.t_final);
    for l in &lines {
        println!("{l}");
    }
    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir).map_err(acat_core::Error::from)?;
        let path = dir.join("convergence.csv");
        std::fs::write(&path, lines.join("\n") + "\n").map_err(acat_core::Error::from)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn print_formula(f: &DiffFormula) {
    let q = f.eval_offset.map_or("0".to_string(), |q| q.to_string());
    println!("# kind={:?} p={} k={} q={} scale=h^-{}", f.kind, f.half_width, f.deriv_order, q, f.scale_power);
    println!("node,exact,decimal");
    for (j, (r, c)) in f.exact.iter().zip(&f.coeffs).enumerate() {
        println!("{},{},{}", f.first_node() + j as i64, r, fmt_f64(*c));
    }
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<()> {
    let kind = match (args.kind, &args.q) {
        (Some(k), _) => k,
        (None, Some(_)) => FormulaChoice::Interpolatory,
        (None, None) => FormulaChoice::Centered,
    };
    let formula = match kind {
        FormulaChoice::Centered => centered_coeffs(args.p, args.k)?,
        FormulaChoice::Conservative => conservative_midpoint_coeffs(args.p, args.k)?,
        FormulaChoice::Interpolatory => {
            let q = args.q.as_deref().unwrap_or("1/2");
            let q: Rational = q
                .parse()
                .map_err(|_| acat_core::Error::InvalidArgument(format!("offset '{q}' is not a rational number")))?;
            interpolatory_coeffs(args.p, args.k, q)?
        }
    };
    print_formula(&formula);
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.cfg.list_presets {
        list_presets();
        return Ok(());
    }
    let mut base = if args.cfg.preset.is_none() && args.cfg.config.is_none() {
        let mut a = args.cfg.clone();
        a.preset = Some("blast_right".into());
        build_config(&a)?
    } else {
        build_config(&args.cfg)?
    };
    if let Some(n) = args.cells {
        base.cells = n;
    }
    let configs = args
        .schemes
        .iter()
        .map(|s| Ok(base.clone().with_scheme(parse_scheme_label(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let rows = timing_table(&configs, args.repeats)?;
    let exec = if base.exec.is_parallel() { "parallel" } else { "serial" };
    println!("# {} cells={} t_final={} exec={exec} best of {}", base.preset, base.cells, base.t_final, args.repeats);
    println!("scheme,seconds,ratio");
    for r in rows {
        println!("{},{},{:.2}", r.label, fmt_f64(r.seconds), r.ratio);
    }
    Ok(())
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// One JSON line on stderr: `{"error":"<kind>","message":"..."}`.
fn report_error(kind: &str, message: &str) {
    eprintln!("{{\"error\":\"{}\",\"message\":\"{}\"}}", json_escape(kind), json_escape(message));
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    e.chain()
        .find_map(|c| c.downcast_ref::<acat_core::Error>().map(|e| e.kind()))
        .or_else(|| e.chain().find_map(|c| c.downcast_ref::<std::num::ParseIntError>().map(|_| "invalid_argument")))
        .unwrap_or("internal")
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli).context("acat") {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.chain().skip(1).map(|c| c.to_string()).collect::<Vec<_>>().join(": ");
            report_error(error_kind(&e), &msg);
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_labels() {
        assert_eq!(parse_scheme_label("acat2").unwrap(), SchemeSpec::flcat2());
        assert_eq!(parse_scheme_label("ACAT6").unwrap(), SchemeSpec::acat(3));
        assert_eq!(parse_scheme_label("cat4").unwrap(), SchemeSpec::cat(2));
        assert_eq!(parse_scheme_label("lat4").unwrap(), SchemeSpec::lat(2));
        assert_eq!(parse_scheme_label("lo").unwrap().kind, SchemeKind::FirstOrder);
        assert!(parse_scheme_label("cat3").is_err());
        assert!(parse_scheme_label("weno5").is_err());
    }

    #[test]
    fn escaping() {
        assert_eq!(json_escape("a \"b\"\n"), "a \\\"b\\\"\\n");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
