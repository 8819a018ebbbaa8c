//! `bernlab`: command-line front end to the polynomial inequality lab.
//!
//! Polynomials are read as `{"n": int, "coeffs": [[re, im], ...]}` from
//! `--in` or stdin. Every JSON artifact carries a `"manifest"` member; CSV
//! output gets a sidecar `<out>.manifest.json` (or the manifest on stderr
//! when writing to stdout).
//!
//! Exit codes: 0 success or HOLDS, 2 VIOLATED, 3 INCONCLUSIVE, 64 usage.

mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bernlab_core::explore::{
    alpha_map, extremal_search, fuzz, gen_poly, parse_complex, stream_rng, AlphaGrid, AlphaPolicy,
    ExtremalConfig, FuzzConfig, GeneratorKind,
};
use bernlab_core::inequalities::{check, CheckParams};
use bernlab_core::norms::{norm_with_tol, DEFAULT_REL_TOL};
use bernlab_core::operators::{apply, conj_side};
use bernlab_core::roots::find_roots;
use bernlab_core::{InequalityId, LabError, NormExponent, Poly, Verdict};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use output::{
    exit_for, finish, manifest_path, read_input, with_manifest, write_output, CliResult, Failure,
    Run, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED,
};

#[derive(Parser, Debug)]
#[command(name = "bernlab", version, about = "Numerical lab for Bernstein-type polynomial inequalities")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "BERNLAB_THREADS")]
    threads: Option<usize>,
    /// Human-readable summary instead of JSON/CSV.
    #[arg(long, global = true)]
    pretty: bool,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L_p norm, sup norm (p = inf) or Mahler measure (p = 0).
    Norm(NormArgs),
    /// Roots with residuals.
    Roots(InputArgs),
    /// Apply zP' - αP (and optionally the second-order operator).
    Op(OpArgs),
    /// Evaluate one inequality on one polynomial.
    Check(CheckArgs),
    /// Randomized falsification run.
    Fuzz(FuzzArgs),
    /// Scan the α-plane; emits CSV.
    AlphaMap(AlphaMapArgs),
    /// Search for the largest ratio at fixed degree.
    Extremal(ExtremalArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Poly JSON file (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long, value_parser = parse_exponent)]
    p: NormExponent,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct OpArgs {
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    alpha: Complex64,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    gamma: Option<Complex64>,
    /// Apply to the conjugate reciprocal instead.
    #[arg(long)]
    conjugate: bool,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Inequality id, e.g. thm1-first, jain-sup, debruijn.
    #[arg(long, value_parser = parse_ineq)]
    ineq: InequalityId,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    gamma: Option<Complex64>,
    #[arg(long, value_parser = parse_exponent)]
    p: NormExponent,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    /// FuzzConfig JSON; flags given explicitly override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_ineq)]
    ineq: Option<InequalityId>,
    #[arg(long)]
    count: Option<usize>,
    /// Degree range "lo,hi".
    #[arg(long, value_parser = parse_pair_usize)]
    degrees: Option<[usize; 2]>,
    /// Comma-separated exponents, e.g. "0,0.5,1,2,3,inf".
    #[arg(long, value_parser = parse_exponent, value_delimiter = ',')]
    p_grid: Option<Vec<NormExponent>>,
    /// unrestricted, zero-free, boundary, zeros-in-disk:<r>, self-inversive, ...
    #[arg(long, value_parser = parse_generator)]
    generator: Option<GeneratorKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// admissible or full-plane.
    #[arg(long, value_parser = parse_policy)]
    alpha_policy: Option<AlphaPolicy>,
}

#[derive(Args, Debug)]
struct AlphaMapArgs {
    #[arg(long, value_parser = parse_ineq, default_value = "thm1-first")]
    ineq: InequalityId,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: NormExponent,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    gamma: Option<Complex64>,
    /// Real range "r0,r1".
    #[arg(long, value_parser = parse_pair_f64, allow_hyphen_values = true)]
    re: [f64; 2],
    /// Imaginary range "i0,i1".
    #[arg(long, value_parser = parse_pair_f64, allow_hyphen_values = true, default_value = "0,0")]
    im: [f64; 2],
    /// Grid points "re_steps,im_steps".
    #[arg(long, value_parser = parse_pair_usize)]
    steps: [usize; 2],
    /// Draw the family from a generator instead of reading Poly JSON.
    #[arg(long, value_parser = parse_generator)]
    generator: Option<GeneratorKind>,
    /// Family size when using --generator.
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Degree of generated family members.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Poly JSON, or an array of them (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    #[arg(long, value_parser = parse_ineq)]
    ineq: InequalityId,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    gamma: Option<Complex64>,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: NormExponent,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_exponent(s: &str) -> Result<NormExponent, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn parse_ineq(s: &str) -> Result<InequalityId, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn parse_generator(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn parse_policy(s: &str) -> Result<AlphaPolicy, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn parse_pair_f64(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"a,b\", got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number in {s:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number in {s:?}"))?;
    Ok([a, b])
}

fn parse_pair_usize(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"a,b\", got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    Ok([a, b])
}

fn read_poly(path: Option<&Path>) -> CliResult<Poly> {
    Ok(Poly::from_json_str(&read_input(path)?)?)
}

fn read_family(path: Option<&Path>) -> CliResult<Vec<Poly>> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("$: {e}")))?;
    match &value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(k, v)| {
                Poly::from_json_value(v).map_err(|e| match e {
                    LabError::Parse { path, message } => {
                        Failure::Usage(format!("$[{k}]{}: {message}", &path[1..]))
                    }
                    other => other.into(),
                })
            })
            .collect(),
        _ => Ok(vec![Poly::from_json_value(&value)?]),
    }
}

fn c_json(z: Option<Complex64>) -> Value {
    z.map_or(Value::Null, |z| json!([z.re, z.im]))
}

struct Emit {
    text: String,
    code: u8,
}

fn cmd_norm(a: &NormArgs, pretty: bool) -> CliResult<Emit> {
    let mut run = Run::start("norm", json!({"p": a.p, "rel_tol": a.rel_tol, "in": a.input.input}), None);
    let p = read_poly(a.input.input.as_deref())?;
    let v = norm_with_tol(&p, a.p, a.rel_tol)?;
    run.warnings.extend(v.warnings.iter().cloned());
    let text = if pretty {
        let mut s = format!("norm p={}  value={}  achieved_tol={:.3e}", a.p, v.value, v.achieved_tol);
        for w in &v.warnings {
            let _ = write!(s, "\nwarning: {w}");
        }
        s
    } else {
        with_manifest(&v, &run.manifest())?
    };
    Ok(Emit { text, code: EXIT_OK })
}

fn cmd_roots(a: &InputArgs, pretty: bool) -> CliResult<Emit> {
    let mut run = Run::start("roots", json!({"in": a.input}), None);
    let p = read_poly(a.input.as_deref())?;
    let r = find_roots(&p)?;
    if !r.converged {
        run.warnings.push("root iteration did not converge".to_string());
    }
    let code = if r.converged { EXIT_OK } else { EXIT_INCONCLUSIVE };
    let text = if pretty {
        let mut s = format!(
            "{} roots  |z| in [{}, {}]  converged={}\n{:>24} {:>24} {:>12} {:>10}",
            r.roots.len(),
            r.min_modulus,
            r.max_modulus,
            r.converged,
            "re",
            "im",
            "|z|",
            "residual"
        );
        for (z, res) in r.roots.iter().zip(&r.residuals) {
            let _ = write!(s, "\n{:>24} {:>24} {:>12.9} {:>10.2e}", z.re, z.im, z.norm(), res);
        }
        s
    } else {
        with_manifest(&r, &run.manifest())?
    };
    Ok(Emit { text, code })
}

fn cmd_op(a: &OpArgs, pretty: bool) -> CliResult<Emit> {
    let run = Run::start(
        "op",
        json!({"alpha": c_json(Some(a.alpha)), "gamma": c_json(a.gamma), "conjugate": a.conjugate, "in": a.input.input}),
        None,
    );
    let p = read_poly(a.input.input.as_deref())?;
    let q = if a.conjugate {
        conj_side(&p, a.alpha, a.gamma)
    } else {
        apply(&p, a.alpha, a.gamma)
    };
    let text = if pretty { q.to_string() } else { with_manifest(&q, &run.manifest())? };
    Ok(Emit { text, code: EXIT_OK })
}

fn cmd_check(a: &CheckArgs, pretty: bool) -> CliResult<Emit> {
    let mut run = Run::start(
        "check",
        json!({"ineq": a.ineq, "alpha": c_json(a.alpha), "gamma": c_json(a.gamma), "p": a.p, "in": a.input.input}),
        None,
    );
    let p = read_poly(a.input.input.as_deref())?;
    let r = check(a.ineq, &p, &CheckParams::new(a.alpha, a.gamma, a.p))?;
    run.warnings.extend(r.notes.iter().cloned());
    let text = if pretty {
        let mut s = format!(
            "{} n={} p={}  lhs={}  rhs={}  ratio={}  verdict={:?}  margin={:.2e}",
            r.inequality_id, r.n, r.p, r.lhs, r.rhs, r.ratio, r.verdict, r.numeric_margin
        );
        for g in &r.hypothesis {
            let _ = write!(s, "\n  gate {:<22} {:?}  {}", g.gate, g.status, g.detail);
        }
        for n in &r.notes {
            let _ = write!(s, "\n  note {n}");
        }
        s
    } else {
        with_manifest(&r, &run.manifest())?
    };
    Ok(Emit { text, code: exit_for(r.verdict) })
}

fn fuzz_config(a: &FuzzArgs) -> CliResult<FuzzConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str::<FuzzConfig>(&text)
                .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?
        }
        None => {
            let id = a
                .ineq
                .ok_or_else(|| Failure::Usage("fuzz needs --config or --ineq".to_string()))?;
            FuzzConfig::new(id, 1000, 0)
        }
    };
    if let Some(id) = a.ineq {
        cfg.inequality_id = id;
    }
    if let Some(c) = a.count {
        cfg.count = c;
    }
    if let Some(d) = a.degrees {
        cfg.degree_range = d;
    }
    if let Some(g) = &a.p_grid {
        cfg.p_grid = g.clone();
    }
    if let Some(k) = a.generator {
        cfg.generator_kind = Some(k);
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(p) = a.alpha_policy {
        cfg.alpha_policy = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_fuzz(a: &FuzzArgs, pretty: bool) -> CliResult<Emit> {
    let cfg = fuzz_config(a)?;
    let mut run = Run::start("fuzz", serde_json::to_value(&cfg).expect("config serializes"), Some(cfg.seed));
    let report = fuzz(&cfg)?;
    if report.counts.errors > 0 {
        run.warnings.push(format!("{} evaluations failed", report.counts.errors));
    }
    let code = if report.counts.violated > 0 {
        EXIT_VIOLATED
    } else if report.counts.inconclusive + report.counts.errors > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let text = if pretty {
        let c = &report.counts;
        let mut s = format!(
            "{} over {} ({} instances, seed {}): holds {}  violated {}  inconclusive {}  errors {}",
            cfg.inequality_id, report.generator_kind, cfg.count, cfg.seed, c.holds, c.violated, c.inconclusive, c.errors
        );
        for t in &report.by_exponent {
            let _ = write!(
                s,
                "\n  p={:<6} holds {:>7} violated {:>5} inconclusive {:>5} errors {:>4}  max ratio {:.12}",
                t.p.to_string(),
                t.counts.holds,
                t.counts.violated,
                t.counts.inconclusive,
                t.counts.errors,
                t.max_ratio
            );
        }
        if let Some(m) = &report.max_ratio {
            let _ = write!(s, "\n  max ratio {} at index {} (p={}, n={})", m.ratio, m.index, m.p, m.n);
        }
        s
    } else {
        with_manifest(&report, &run.manifest())?
    };
    Ok(Emit { text, code })
}

fn cmd_alpha_map(a: &AlphaMapArgs, pretty: bool, out: Option<&Path>) -> CliResult<Emit> {
    let mut run = Run::start(
        "alpha-map",
        json!({
            "ineq": a.ineq, "p": a.p, "gamma": c_json(a.gamma), "re": a.re, "im": a.im,
            "steps": a.steps, "generator": a.generator.map(|g| g.to_string()),
            "count": a.count, "degree": a.degree, "in": a.input,
        }),
        a.generator.map(|_| a.seed),
    );
    let grid = AlphaGrid::new(a.re, a.im, a.steps[0], a.steps[1])?;
    let family = match a.generator {
        Some(kind) => {
            kind.validate()?;
            let n = a
                .degree
                .ok_or_else(|| Failure::Usage("--generator needs --degree".to_string()))?;
            if a.count == 0 {
                return Err(Failure::Usage("--count must be at least 1".to_string()));
            }
            (0..a.count as u64)
                .map(|k| gen_poly(&kind, n, &mut stream_rng(a.seed, k)))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => read_family(a.input.as_deref())?,
    };
    let m = alpha_map(a.ineq, &family, a.p, a.gamma, grid)?;
    if m.errors > 0 {
        run.warnings.push(format!("{} cell evaluations failed", m.errors));
    }
    let any = |v: Verdict| m.cells.iter().any(|c| c.verdict == v);
    let code = if any(Verdict::Violated) {
        EXIT_VIOLATED
    } else if any(Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let manifest = json!({
        "manifest": run.manifest(),
        "boundary_estimate": m.boundary_estimate(),
        "rows": m.rows,
    });
    let text = if pretty {
        let mut s = format!(
            "{} p={} family {}  grid {}x{}  boundary estimate Re = {:?}",
            m.inequality_id,
            m.p,
            m.family_size,
            grid.re_steps,
            grid.im_steps,
            m.boundary_estimate()
        );
        for r in &m.rows {
            let _ = write!(s, "\n  Im={:<10} first violation at Re={:?}", r.im, r.first_violation_re);
        }
        s
    } else {
        let side = serde_json::to_string(&manifest).expect("manifest serializes");
        match out {
            Some(path) => {
                let mp = manifest_path(path);
                std::fs::write(&mp, side + "\n")
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", mp.display())))?;
            }
            None => eprintln!("{side}"),
        }
        m.to_csv()
    };
    Ok(Emit { text, code })
}

fn cmd_extremal(a: &ExtremalArgs, pretty: bool) -> CliResult<Emit> {
    let mut run = Run::start(
        "extremal",
        json!({
            "ineq": a.ineq, "n": a.n, "alpha": c_json(a.alpha), "gamma": c_json(a.gamma),
            "p": a.p, "restarts": a.restarts,
        }),
        Some(a.seed),
    );
    let mut cfg = ExtremalConfig::new(a.ineq, a.n, a.alpha, a.p);
    cfg.gamma = a.gamma;
    cfg.restarts = a.restarts;
    cfg.seed = a.seed;
    let r = extremal_search(&cfg)?;
    run.warnings.extend(r.report.notes.iter().cloned());
    let text = if pretty {
        format!(
            "{} n={} p={}  ratio_best={}  verdict={:?}  from {}\n  witness {}",
            r.inequality_id, r.n, r.p, r.ratio_best, r.report.verdict, r.best_start, r.witness
        )
    } else {
        with_manifest(&r, &run.manifest())?
    };
    Ok(Emit { text, code: exit_for(r.report.verdict) })
}

fn dispatch(cli: &Cli) -> CliResult<Emit> {
    if let Some(t) = cli.threads {
        if t > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| Failure::Usage(format!("cannot configure threads: {e}")))?;
        }
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Norm(a) => cmd_norm(a, cli.pretty),
        Command::Roots(a) => cmd_roots(a, cli.pretty),
        Command::Op(a) => cmd_op(a, cli.pretty),
        Command::Check(a) => cmd_check(a, cli.pretty),
        Command::Fuzz(a) => cmd_fuzz(a, cli.pretty),
        Command::AlphaMap(a) => cmd_alpha_map(a, cli.pretty, out),
        Command::Extremal(a) => cmd_extremal(a, cli.pretty),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return finish(code);
        }
    };
    match dispatch(&cli).and_then(|emit| {
        write_output(cli.out.as_deref(), &emit.text)?;
        Ok(emit.code)
    }) {
        Ok(code) => finish(code),
        Err(f) => {
            eprintln!("bernlab: {}", f.message());
            finish(f.exit_code())
        }
    }
}
