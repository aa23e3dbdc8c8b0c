use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use multiseg_core::{
    comm_dual_rdli, comm_ldri, comm_rdli, dualize_certificate, epsilon, eta, factors, find_certificates, hd,
    jacquet_layers, level, mx, parse_expr, parse_half, parse_multisegment, parse_segment, parse_value, run_sweep,
    strong_multi, verify_certificate, Error, LineTable, Outcome, Property, RepParam, SearchBound, Side, SweepConfig,
    TraceStep,
};

/// Derivatives, integrals and commutativity checks on multisegments.
#[derive(Parser)]
#[command(name = "multiseg", version)]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Line declarations, one `line <id> [weight n] [dual id]` per line.
    #[arg(long, global = true, value_name = "FILE")]
    lines: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression, optionally followed by an invariant.
    Eval {
        expr: String,
        #[arg(long, value_enum)]
        invariant: Option<Invariant>,
        /// Segment for eps, eta and mx.
        #[arg(long)]
        seg: Option<String>,
        #[arg(long, default_value = "R")]
        side: Side,
    },
    /// Decide a commutativity triple.
    CheckTriple {
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
        #[arg(long)]
        pi: String,
        #[arg(long, value_enum, default_value = "rdli")]
        kind: TripleKind,
    },
    /// Search for relevance certificates of a pair.
    Relevant {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        pi2: String,
        #[arg(long)]
        max_labs: Option<u32>,
    },
    /// Verify a certificate and transport it to the dual pair.
    Dualize {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        pi2: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
    },
    /// List the layers of a restriction, trivial layer first.
    Jacquet {
        expr: String,
        /// Size of the second block in l_abs units.
        #[arg(long)]
        k: u32,
    },
    /// Check properties exhaustively over a window.
    Sweep {
        /// Lower end of the window (exponent, e.g. `0` or `-1/2`).
        #[arg(long, default_value = "0")]
        lo: String,
        #[arg(long, default_value = "5")]
        hi: String,
        #[arg(long, default_value_t = 6)]
        max_labs: u32,
        /// Comma-separated property ids; all by default.
        #[arg(long, value_delimiter = ',')]
        properties: Vec<Property>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "generic,zsegment")]
        backends: Vec<Backend>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value_t = 3)]
        small_labs: u32,
        #[arg(long, default_value_t = 5)]
        max_counterexamples: usize,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    Eps,
    Eta,
    Mx,
    Hd,
    Level,
}

#[derive(Clone, Copy, ValueEnum)]
enum TripleKind {
    Rdli,
    Ldri,
    DualRdli,
    Multi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Generic,
    Zsegment,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: BTreeMap<&'static str, String>,
    result: Value,
    reason: Option<String>,
    trace: Vec<TraceStep>,
    #[serde(skip)]
    text: String,
    #[serde(skip)]
    code: u8,
}

impl Report {
    fn new(command: &'static str, inputs: &[(&'static str, &str)]) -> Self {
        Report {
            command,
            inputs: inputs.iter().map(|&(k, v)| (k, v.to_string())).collect(),
            result: Value::Null,
            reason: None,
            trace: Vec::new(),
            text: String::new(),
            code: 0,
        }
    }
}

const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedDomain(_) | Error::AmbiguousIntegral(_) => EXIT_UNSUPPORTED,
        Error::DualVerificationFailed(_) | Error::NegativeMultiplicity(_) => EXIT_COUNTEREXAMPLE,
        _ => EXIT_INPUT,
    }
}

struct Ctx {
    lines: LineTable,
}

impl Ctx {
    fn rep(&self, text: &str, trace: &mut Vec<TraceStep>) -> Result<RepParam, Error> {
        parse_expr(text, &self.lines)?.eval_traced(trace)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let lines = match &cli.lines {
        None => Ok(LineTable::new()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse { pos: 0, msg: format!("{}: {e}", path.display()) })
            .and_then(|t| LineTable::parse_header(&t)),
    };
    let ctx = match lines {
        Ok(lines) => Ctx { lines },
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let (name, mut report) = match &cli.command {
        Command::Eval { expr, invariant, seg, side } => ("eval", eval(&ctx, expr, *invariant, seg.as_deref(), *side)),
        Command::CheckTriple { d1, d2, pi, kind } => ("check-triple", check_triple(&ctx, d1, d2, pi, *kind)),
        Command::Relevant { pi, pi2, max_labs } => ("relevant", relevant(&ctx, pi, pi2, *max_labs)),
        Command::Dualize { pi, pi2, m, n } => ("dualize", dualize(&ctx, pi, pi2, m, n)),
        Command::Jacquet { expr, k } => ("jacquet", jacquet(&ctx, expr, *k)),
        Command::Sweep { lo, hi, max_labs, properties, backends, threads, small_labs, max_counterexamples, out } => {
            let cfg = sweep_config(lo, hi, *max_labs, properties, backends, *threads, *small_labs, *max_counterexamples);
            ("sweep", cfg.and_then(|cfg| sweep(cfg, out.as_ref())))
        }
    };
    let report = match report.as_mut() {
        Ok(r) => r,
        Err((inputs, e)) => {
            let mut r = Report::new(name, &[]);
            r.inputs = std::mem::take(inputs);
            r.reason = Some(e.to_string());
            r.code = exit_code(e);
            eprintln!("error: {e}");
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            }
            return ExitCode::from(r.code);
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.text);
        for step in &report.trace {
            println!("  {}: {} -> {}", step.op, step.input, step.output);
        }
    }
    ExitCode::from(report.code)
}

type CmdResult = Result<Report, (BTreeMap<&'static str, String>, Error)>;

fn with_inputs(inputs: &[(&'static str, &str)], f: impl FnOnce(&mut Report) -> Result<(), Error>) -> CmdResult {
    let mut r = Report::new("", inputs);
    match f(&mut r) {
        Ok(()) => Ok(r),
        Err(e) => Err((r.inputs, e)),
    }
}

fn eval(ctx: &Ctx, expr: &str, inv: Option<Invariant>, seg: Option<&str>, side: Side) -> CmdResult {
    let side_s = side.to_string();
    let mut inputs = vec![("expr", expr)];
    if let Some(s) = seg {
        inputs.push(("seg", s));
        inputs.push(("side", side_s.as_str()));
    }
    with_inputs(&inputs, |r| {
        r.command = "eval";
        let Some(inv) = inv else {
            let shown = match parse_value(expr, &ctx.lines)? {
                multiseg_core::Value::Segment(s) => s.to_string(),
                multiseg_core::Value::Multi(m) => m.to_string(),
                multiseg_core::Value::Expr(e) => e.eval_traced(&mut r.trace)?.to_string(),
            };
            r.text = format!("{shown}\n");
            r.result = json!(shown);
            return Ok(());
        };
        let pi = ctx.rep(expr, &mut r.trace)?;
        let need_seg = || -> Result<_, Error> {
            let s = seg.ok_or_else(|| Error::Parse { pos: 0, msg: "--seg is required for this invariant".into() })?;
            parse_segment(s, &ctx.lines)
        };
        let (shown, value) = match inv {
            Invariant::Eps => {
                let v = epsilon(&pi, &need_seg()?, side)?;
                (v.to_string(), json!(v))
            }
            Invariant::Eta => {
                let v = eta(&pi, &need_seg()?, side)?;
                (v.to_string(), json!(v.values))
            }
            Invariant::Mx => {
                let v = mx(&pi, &need_seg()?, side)?;
                (v.to_string(), json!(v))
            }
            Invariant::Hd => {
                let v = hd(&pi)?;
                (v.to_string(), json!(v))
            }
            Invariant::Level => {
                let v = level(&pi)?;
                (v.to_string(), json!(v))
            }
        };
        r.text = format!("{shown}\n");
        r.result = value;
        Ok(())
    })
}

fn check_triple(ctx: &Ctx, d1: &str, d2: &str, pi: &str, kind: TripleKind) -> CmdResult {
    with_inputs(&[("d1", d1), ("d2", d2), ("pi", pi)], |r| {
        r.command = "check-triple";
        let p = ctx.rep(pi, &mut r.trace)?;
        let v = match kind {
            TripleKind::Multi => {
                strong_multi(&parse_multisegment(d1, &ctx.lines)?, &parse_multisegment(d2, &ctx.lines)?, &p)?
            }
            _ => {
                let (a, b) = (parse_segment(d1, &ctx.lines)?, parse_segment(d2, &ctx.lines)?);
                match kind {
                    TripleKind::Rdli => comm_rdli(&a, &b, &p)?,
                    TripleKind::Ldri => comm_ldri(&a, &b, &p)?,
                    _ => comm_dual_rdli(&a, &b, &p)?,
                }
            }
        };
        r.text = format!("{v}\n");
        r.result = json!({ "outcome": v.outcome, "witness": v.witness });
        r.reason = Some(format!("{:?}", v.reason));
        Ok(())
    })
}

fn relevant(ctx: &Ctx, pi: &str, pi2: &str, max_labs: Option<u32>) -> CmdResult {
    with_inputs(&[("pi", pi), ("pi2", pi2)], |r| {
        r.command = "relevant";
        let (p, p2) = (ctx.rep(pi, &mut r.trace)?, ctx.rep(pi2, &mut r.trace)?);
        let found = find_certificates(&p, &p2, SearchBound { max_labs })?;
        let mut text = String::new();
        for c in &found.certificates {
            text.push_str(&format!("certificate m = {}, n = {}, common = {}\n", c.m, c.n, c.common));
        }
        for c in &found.unknown {
            text.push_str(&format!("undecided   m = {}, n = {}, common = {}\n", c.m, c.n, c.common));
        }
        if found.certificates.is_empty() {
            text.push_str("no certificate found\n");
        }
        r.reason = Some(if found.certificates.is_empty() { "NoCertificate" } else { "CertificateFound" }.into());
        r.result = json!(found);
        r.text = text;
        Ok(())
    })
}

fn dualize(ctx: &Ctx, pi: &str, pi2: &str, m: &str, n: &str) -> CmdResult {
    with_inputs(&[("pi", pi), ("pi2", pi2), ("m", m), ("n", n)], |r| {
        r.command = "dualize";
        let (p, p2) = (ctx.rep(pi, &mut r.trace)?, ctx.rep(pi2, &mut r.trace)?);
        let (m, n) = (parse_multisegment(m, &ctx.lines)?, parse_multisegment(n, &ctx.lines)?);
        let c = verify_certificate(&m, &n, &p, &p2)?;
        if c.verdict.outcome != Outcome::True {
            r.text = format!("not a certificate: {}\n", c.verdict);
            r.reason = Some(format!("{:?}", c.verdict.reason));
            r.result = json!({ "original": c });
            r.code = EXIT_COUNTEREXAMPLE;
            return Ok(());
        }
        let d = dualize_certificate(&c, &p, &p2)?;
        r.text = format!(
            "pair ({}, {}): m = {}, n = {}, common = {}, {}\n",
            p2.dual(),
            p.dual(),
            d.m,
            d.n,
            d.common,
            d.verdict
        );
        r.reason = Some(format!("{:?}", d.verdict.reason));
        r.result = json!({ "original": c, "dual": d, "pi": p2.dual(), "pi2": p.dual() });
        Ok(())
    })
}

fn jacquet(ctx: &Ctx, expr: &str, k: u32) -> CmdResult {
    let ks = k.to_string();
    with_inputs(&[("expr", expr), ("k", &ks)], |r| {
        r.command = "jacquet";
        let p = ctx.rep(expr, &mut r.trace)?;
        let layers = jacquet_layers(&factors(&p)?, k)?;
        r.text = layers.iter().map(|l| format!("{}  {l}\n", l.index)).collect();
        r.result = json!(layers);
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep_config(
    lo: &str,
    hi: &str,
    max_labs: u32,
    properties: &[Property],
    backends: &[Backend],
    threads: usize,
    small_labs: u32,
    max_counterexamples: usize,
) -> ConfigResult {
    let inputs: BTreeMap<&'static str, String> = [("lo", lo.to_string()), ("hi", hi.to_string())].into_iter().collect();
    let parsed = parse_half(lo).and_then(|l| Ok((l, parse_half(hi)?)));
    let (lo, hi) = parsed.map_err(|e| (inputs.clone(), e))?;
    let cfg = SweepConfig {
        lo,
        hi,
        max_labs,
        generic: backends.contains(&Backend::Generic),
        zsegment: backends.contains(&Backend::Zsegment),
        properties: if properties.is_empty() { Property::ALL.to_vec() } else { properties.to_vec() },
        threads,
        max_counterexamples,
        small_labs,
    };
    cfg.validate().map_err(|e| (inputs, e))?;
    Ok(cfg)
}

type ConfigResult = Result<SweepConfig, (BTreeMap<&'static str, String>, Error)>;

fn sweep(cfg: SweepConfig, out: Option<&PathBuf>) -> CmdResult {
    let lo = multiseg_core::fmt_half(cfg.lo);
    let hi = multiseg_core::fmt_half(cfg.hi);
    let labs = cfg.max_labs.to_string();
    with_inputs(&[("lo", &lo), ("hi", &hi), ("max_labs", &labs)], |r| {
        r.command = "sweep";
        let report = run_sweep(&cfg)?;
        r.text = report.to_string();
        r.result = json!(report);
        r.reason = Some(if report.is_clean() { "Clean" } else { "Counterexample" }.into());
        if !report.is_clean() {
            r.code = EXIT_COUNTEREXAMPLE;
        }
        if let Some(path) = out {
            let body = serde_json::to_string_pretty(&report).expect("report serializes");
            std::fs::write(path, body + "\n")
                .map_err(|e| Error::OutOfRange(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    })
}
