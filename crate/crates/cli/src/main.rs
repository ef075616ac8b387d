//! Command-line front end for the germ-invariant engine.
//!
//! Every command takes a germ expression such as `"(x, y^4 + x*y)"`,
//! computes exact (rational-arithmetic) invariants, and prints either a
//! human-readable text block or a JSON document with stable field names.
//!
//! Exit codes: 0 = success, 2 = the escalation schedule hit its degree cap
//! without settling (inconclusive), 1 = any hard error (syntax, validation,
//! unsupported input, internal failure).

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use germcalc::{
    ae_codim, extract_pq, ge_codim, ke_codim, mather_unfolding, minimal_stable_unfolding,
    multiplicity, nf_space, opsu, opsu_normal_form, parse_germ, render_germ, scan, CodimReport,
    Config, Error, GeneratorMode, GermExpression, GermVector, NfReport, Unfolding,
};

#[derive(Parser)]
#[command(
    name = "germcalc",
    version,
    about = "Exact invariants, stable unfoldings, and one-parameter versality for polynomial map-germs",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full panel: multiplicity, corank, contact and right-left codimension,
    /// unfolding quotient, one-parameter verdict
    Analyze(GermArgs),
    /// Local multiplicity (dimension of the local algebra)
    Multiplicity(GermArgs),
    /// Corank of the differential at the origin
    Corank(GermArgs),
    /// Contact codimension with escalation certificate
    KeCodim(GermArgs),
    /// Number of independent constant classes in the contact quotient
    C(GermArgs),
    /// Stable-unfolding quotient: dimension and basis
    Nf(GermArgs),
    /// Right-left codimension by plateau stabilization
    AeCodim(GermArgs),
    /// Decide whether a one-parameter stable unfolding exists
    Opsu(GermArgs),
    /// Stable unfolding with the fewest parameters
    MinimalUnfolding(GermArgs),
    /// Stable unfolding read off the rank-zero core
    Mather(GermArgs),
    /// One-direction versal normal form with target-multiplier parameters
    OpsuNormalForm(GermArgs),
    /// Six-generator pair codimension for quartic preform germs
    MararTari(GermArgs),
    /// Seeded random family screen over quartic-plus-homogeneous germs
    FamilyScan(ScanArgs),
}

#[derive(Args)]
struct GermArgs {
    /// Germ expression, e.g. "(x, y^4 + x*y)"
    germ: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ScanArgs {
    /// Homogeneous degrees to sample, e.g. --p 5,6,7
    #[arg(long = "p", value_delimiter = ',', required = true)]
    p: Vec<u32>,
    /// Samples per degree
    #[arg(long, default_value_t = 5)]
    samples: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Comma-separated source variable names (inferred from the expression
    /// in first-appearance order when omitted)
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Degree cap for every escalation schedule
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Consecutive equal values required before the right-left codimension
    /// is reported as settled
    #[arg(long, global = true)]
    ae_plateau: Option<usize>,
    /// Coefficient rule for the pair-codimension recipe
    #[arg(long, global = true, value_enum)]
    mt_mode: Option<ModeArg>,
    /// Master seed for the family screen
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "auto")]
    Auto,
    #[value(name = "all_module", alias = "all-module")]
    AllModule,
    #[value(name = "mixed", alias = "mixed_euler")]
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl Common {
    fn config(&self) -> Config {
        let mut cfg = Config::default();
        if let Some(d) = self.max_degree {
            cfg.max_degree = d;
        }
        if let Some(p) = self.ae_plateau {
            cfg.ae_plateau = p;
        }
        if let Some(m) = self.mt_mode {
            cfg.generator_mode = match m {
                ModeArg::Auto => GeneratorMode::Auto,
                ModeArg::AllModule => GeneratorMode::AllModule,
                ModeArg::Mixed => GeneratorMode::MixedEuler,
            };
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg
    }
}

/// A finished report: the JSON payload, its text rendering, and the exit
/// code (0 settled, 2 inconclusive).
struct Output {
    payload: Value,
    text: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses exit code 2 for usage errors; here 2 is reserved for
            // inconclusive computations, so usage problems exit 1.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let (common, result) = dispatch(&cli.cmd);
    match result {
        Ok(out) => {
            let rendered = match common.format {
                FormatArg::Text => out.text,
                FormatArg::Json => {
                    let mut s = serde_json::to_string_pretty(&out.payload)
                        .expect("JSON serialization cannot fail");
                    s.push('\n');
                    s
                }
            };
            if let Some(path) = &common.out {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(1);
                }
            } else {
                print!("{rendered}");
                let _ = std::io::stdout().flush();
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            let exit: u8 = if e.is_inconclusive() { 2 } else { 1 };
            eprintln!("error: {e}");
            if common.format == FormatArg::Json {
                let doc = json!({
                    "schema": 1,
                    "error": { "kind": error_kind(&e), "message": e.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("JSON"));
            }
            ExitCode::from(exit)
        }
    }
}

fn dispatch(cmd: &Cmd) -> (&Common, Result<Output, Error>) {
    match cmd {
        Cmd::Analyze(a) => (&a.common, with_germ(a, "analyze", cmd_analyze)),
        Cmd::Multiplicity(a) => (&a.common, with_germ(a, "multiplicity", cmd_multiplicity)),
        Cmd::Corank(a) => (&a.common, with_germ(a, "corank", cmd_corank)),
        Cmd::KeCodim(a) => (&a.common, with_germ(a, "ke-codim", cmd_ke)),
        Cmd::C(a) => (&a.common, with_germ(a, "c", cmd_c)),
        Cmd::Nf(a) => (&a.common, with_germ(a, "nf", cmd_nf)),
        Cmd::AeCodim(a) => (&a.common, with_germ(a, "ae-codim", cmd_ae)),
        Cmd::Opsu(a) => (&a.common, with_germ(a, "opsu", cmd_opsu)),
        Cmd::MinimalUnfolding(a) => {
            (&a.common, with_germ(a, "minimal-unfolding", cmd_minimal))
        }
        Cmd::Mather(a) => (&a.common, with_germ(a, "mather", cmd_mather)),
        Cmd::OpsuNormalForm(a) => (&a.common, with_germ(a, "opsu-normal-form", cmd_opsu_nf)),
        Cmd::MararTari(a) => (&a.common, with_germ(a, "marar-tari", cmd_marar_tari)),
        Cmd::FamilyScan(a) => (&a.common, cmd_scan(a)),
    }
}

fn with_germ(
    args: &GermArgs,
    name: &'static str,
    body: fn(&GermExpression, &Config, &mut Value, &mut String) -> Result<u8, Error>,
) -> Result<Output, Error> {
    let declared = args.common.vars.as_deref();
    let expr = parse_germ(&args.germ, declared)?;
    let cfg = args.common.config();
    let mut payload = json!({
        "schema": 1,
        "command": name,
        "germ": render_germ(expr.germ(), expr.variables())?,
        "variables": expr.variables(),
    });
    let mut text = format!(
        "command: {name}\ngerm: {}\nvariables: {}\n",
        payload["germ"].as_str().unwrap_or_default(),
        expr.variables().join(", ")
    );
    let exit = body(&expr, &cfg, &mut payload, &mut text)?;
    Ok(Output { payload, text, exit })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::Inconclusive { .. } => "inconclusive",
        Error::NoOpsu { .. } => "no_opsu",
        Error::PreformViolation(_) => "preform",
        Error::BadConfig(_) => "config",
        Error::NoMultiplierSolution { .. } => "no_multiplier",
        Error::Internal(_) => "internal",
        _ => "invalid_input",
    }
}

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

/// Renders a vector along the germ: a bare polynomial when the target is a
/// line, otherwise a parenthesized tuple.
fn show_vector(v: &GermVector, names: &[String]) -> String {
    let comps: Vec<String> = v.comps().iter().map(|c| c.display(names).to_string()).collect();
    if comps.len() == 1 {
        comps.into_iter().next().unwrap()
    } else {
        format!("({})", comps.join(", "))
    }
}

fn show_vectors(vs: &[GermVector], names: &[String]) -> Vec<String> {
    vs.iter().map(|v| show_vector(v, names)).collect()
}

/// Source names extended with parameter names `prefix1..prefixk`, renamed
/// until they clash with nothing already present.
fn with_params(names: &[String], prefix: &str, k: usize) -> Vec<String> {
    let mut out = names.to_vec();
    for i in 1..=k {
        let mut candidate = format!("{prefix}{i}");
        while out.contains(&candidate) {
            candidate.insert(0, '_');
        }
        out.push(candidate);
    }
    out
}

/// Names for the target coordinates: X, Y, Z, W when they fit, X1..Xp
/// otherwise, skipping any clash with the source names.
fn target_names(p: usize, source: &[String]) -> Vec<String> {
    let short = ["X", "Y", "Z", "W"];
    let mut out: Vec<String> = if p <= short.len() {
        short[..p].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=p).map(|i| format!("X{i}")).collect()
    };
    for name in &mut out {
        while source.contains(name) {
            name.insert(0, '_');
        }
    }
    out
}

fn unfolding_json(u: &Unfolding, names: &[String], prefix: &str) -> Result<Value, Error> {
    let k = u.base_dim();
    let all = with_params(names, prefix, k);
    Ok(json!({
        "parameters": all[names.len()..].to_vec(),
        "witness": render_germ(u.total(), &all)?,
    }))
}

fn history_json(h: &[(u32, usize)]) -> Value {
    Value::Array(h.iter().map(|(d, v)| json!([d, v])).collect())
}

fn history_text(h: &[(u32, usize)]) -> String {
    h.iter().map(|(d, v)| format!("({d}, {v})")).collect::<Vec<_>>().join(" ")
}

fn codim_json(r: &CodimReport, names: &[String]) -> Value {
    json!({
        "value": r.value,
        "status": r.status.to_string(),
        "degree": r.degree,
        "history": history_json(&r.history),
        "basis": show_vectors(&r.complement, names),
    })
}

fn codim_text(out: &mut String, r: &CodimReport, names: &[String]) {
    out.push_str(&format!(
        "value: {}\nstatus: {}\ndegree: {}\nhistory: {}\n",
        r.value,
        r.status,
        r.degree,
        history_text(&r.history)
    ));
    if !r.complement.is_empty() {
        out.push_str("basis:\n");
        for v in &r.complement {
            out.push_str(&format!("  {}\n", show_vector(v, names)));
        }
    }
}

fn nf_json(nf: &NfReport, names: &[String]) -> Value {
    json!({
        "dimension": nf.dimension,
        "basis": show_vectors(&nf.basis, names),
        "contact_codim": nf.contact_codim,
        "constant_span": nf.constant_span,
        "nonzero_constants": nf.nonzero_constants,
        "degree": nf.degree,
        "status": "certified",
    })
}

fn exit_for(r: &CodimReport) -> u8 {
    if r.status == germcalc::Status::Inconclusive {
        2
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_multiplicity(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = multiplicity(expr.germ(), cfg)?;
    merge(payload, codim_json(&r, expr.variables()));
    codim_text(text, &r, expr.variables());
    Ok(exit_for(&r))
}

fn cmd_corank(
    expr: &GermExpression,
    _cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let f = expr.germ();
    let rank = f.differential_rank();
    merge(
        payload,
        json!({
            "value": f.corank(),
            "rank": rank,
            "source_dim": f.nvars(),
            "target_dim": f.target_dim(),
        }),
    );
    text.push_str(&format!(
        "value: {}\nrank: {}\nsource_dim: {}\ntarget_dim: {}\n",
        f.corank(),
        rank,
        f.nvars(),
        f.target_dim()
    ));
    Ok(0)
}

fn cmd_ke(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = ke_codim(expr.germ(), cfg)?;
    merge(payload, codim_json(&r, expr.variables()));
    codim_text(text, &r, expr.variables());
    Ok(exit_for(&r))
}

fn cmd_c(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let nf = nf_space(expr.germ(), cfg)?;
    merge(
        payload,
        json!({
            "value": nf.constant_span,
            "contact_codim": nf.contact_codim,
            "nf_dimension": nf.dimension,
            "degree": nf.degree,
            "status": "certified",
        }),
    );
    text.push_str(&format!(
        "value: {}\ncontact_codim: {}\nnf_dimension: {}\ndegree: {}\nstatus: certified\n",
        nf.constant_span, nf.contact_codim, nf.dimension, nf.degree
    ));
    Ok(0)
}

fn cmd_nf(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let nf = nf_space(expr.germ(), cfg)?;
    merge(payload, nf_json(&nf, expr.variables()));
    text.push_str(&format!(
        "dimension: {}\ncontact_codim: {}\nconstant_span: {}\nnonzero_constants: {}\ndegree: {}\nstatus: certified\n",
        nf.dimension, nf.contact_codim, nf.constant_span, nf.nonzero_constants, nf.degree
    ));
    if !nf.basis.is_empty() {
        text.push_str("basis:\n");
        for v in &nf.basis {
            text.push_str(&format!("  {}\n", show_vector(v, expr.variables())));
        }
    }
    Ok(0)
}

fn cmd_ae(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = ae_codim(expr.germ(), cfg)?;
    merge(payload, codim_json(&r, expr.variables()));
    codim_text(text, &r, expr.variables());
    Ok(exit_for(&r))
}

fn cmd_opsu(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let v = opsu(expr.germ(), cfg)?;
    let witness = match &v.witness {
        Some(u) => unfolding_json(u, expr.variables(), "u")?,
        None => Value::Null,
    };
    merge(
        payload,
        json!({
            "admits": v.admits.to_string(),
            "nf_dimension": v.nf.dimension,
            "nf": nf_json(&v.nf, expr.variables()),
            "witness": witness["witness"].clone(),
            "parameters": witness["parameters"].clone(),
        }),
    );
    text.push_str(&format!("admits: {}\nnf_dimension: {}\n", v.admits, v.nf.dimension));
    if let Some(w) = witness["witness"].as_str() {
        text.push_str(&format!("witness: {w}\n"));
    }
    Ok(0)
}

fn cmd_minimal(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = minimal_stable_unfolding(expr.germ(), cfg)?;
    let u = unfolding_json(&r.unfolding, expr.variables(), "u")?;
    merge(
        payload,
        json!({
            "parameter_count": r.nf.dimension,
            "parameters": u["parameters"].clone(),
            "directions": show_vectors(&r.nf.basis, expr.variables()),
            "witness": u["witness"].clone(),
            "nf": nf_json(&r.nf, expr.variables()),
        }),
    );
    text.push_str(&format!("parameter_count: {}\n", r.nf.dimension));
    if !r.nf.basis.is_empty() {
        text.push_str("directions:\n");
        for v in &r.nf.basis {
            text.push_str(&format!("  {}\n", show_vector(v, expr.variables())));
        }
    }
    text.push_str(&format!("witness: {}\n", u["witness"].as_str().unwrap_or_default()));
    Ok(0)
}

fn cmd_mather(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = mather_unfolding(expr.germ(), cfg)?;
    let u = unfolding_json(&r.unfolding, expr.variables(), "u")?;
    let core = match &r.core {
        Some(c) => {
            let names: Vec<String> = (1..=c.nvars()).map(|i| format!("t{i}")).collect();
            Value::String(render_germ(c, &names)?)
        }
        None => Value::Null,
    };
    merge(
        payload,
        json!({
            "rank": r.rank,
            "parameter_count": r.unfolding.base_dim(),
            "parameters": u["parameters"].clone(),
            "core": core,
            "core_directions_count": r.core_directions.len(),
            "witness": u["witness"].clone(),
        }),
    );
    text.push_str(&format!(
        "rank: {}\nparameter_count: {}\n",
        r.rank,
        r.unfolding.base_dim()
    ));
    if let Some(c) = core.as_str() {
        text.push_str(&format!("core: {c}\n"));
    }
    text.push_str(&format!("witness: {}\n", u["witness"].as_str().unwrap_or_default()));
    Ok(0)
}

fn cmd_opsu_nf(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let r = opsu_normal_form(expr.germ(), cfg)?;
    let u = unfolding_json(&r.unfolding, expr.variables(), "l")?;
    let tnames = target_names(expr.germ().target_dim(), expr.variables());
    let multipliers: Vec<String> =
        r.multipliers.iter().map(|m| m.display(&tnames).to_string()).collect();
    merge(
        payload,
        json!({
            "direction": show_vector(&r.direction, expr.variables()),
            "multipliers": multipliers,
            "target_variables": tnames,
            "parameter_count": r.unfolding.base_dim(),
            "parameters": u["parameters"].clone(),
            "ae": codim_json(&r.ae, expr.variables()),
            "witness": u["witness"].clone(),
        }),
    );
    text.push_str(&format!(
        "direction: {}\nparameter_count: {}\n",
        show_vector(&r.direction, expr.variables()),
        r.unfolding.base_dim()
    ));
    if !multipliers.is_empty() {
        text.push_str("multipliers:\n");
        for (i, m) in multipliers.iter().enumerate() {
            text.push_str(&format!("  p{}: {}\n", i + 2, m));
        }
    }
    text.push_str(&format!(
        "ae_value: {}\nae_status: {}\nwitness: {}\n",
        r.ae.value,
        r.ae.status,
        u["witness"].as_str().unwrap_or_default()
    ));
    Ok(0)
}

fn cmd_marar_tari(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let pq = extract_pq(expr.germ())?;
    let r = ge_codim(&pq, cfg)?;
    let plane: Vec<String> = expr.variables()[..2].to_vec();
    merge(
        payload,
        json!({
            "mode": r.mode.to_string(),
            "p": pq.p().display(&plane).to_string(),
            "q": pq.q().display(&plane).to_string(),
        }),
    );
    merge(payload, codim_json(&r.report, &plane));
    text.push_str(&format!(
        "mode: {}\np: {}\nq: {}\n",
        r.mode,
        pq.p().display(&plane),
        pq.q().display(&plane)
    ));
    codim_text(text, &r.report, &plane);
    Ok(exit_for(&r.report))
}

fn cmd_analyze(
    expr: &GermExpression,
    cfg: &Config,
    payload: &mut Value,
    text: &mut String,
) -> Result<u8, Error> {
    let f = expr.germ();
    let names = expr.variables();
    let mut exit = 0u8;

    let mult = multiplicity(f, cfg)?;
    let ke = ke_codim(f, cfg)?;
    exit = exit.max(exit_for(&mult)).max(exit_for(&ke));

    // The certified quotient and everything built on it degrade to null when
    // the contact gate hits the degree cap.
    let nf = soften(nf_space(f, cfg))?;
    let ae = soften(ae_codim(f, cfg))?;
    let verdict = soften(opsu(f, cfg))?;
    if nf.is_none() || verdict.is_none() {
        exit = 2;
    }
    if ae.as_ref().map(exit_for).unwrap_or(2) == 2 {
        exit = 2;
    }

    merge(
        payload,
        json!({
            "multiplicity": codim_json(&mult, names),
            "corank": f.corank(),
            "ke": codim_json(&ke, names),
            "nf": nf.as_ref().map(|r| nf_json(r, names)).unwrap_or(Value::Null),
            "c": nf.as_ref().map(|r| json!(r.constant_span)).unwrap_or(Value::Null),
            "ae": ae.as_ref().map(|r| codim_json(r, names)).unwrap_or(Value::Null),
            "opsu": verdict
                .as_ref()
                .map(|v| json!(v.admits.to_string()))
                .unwrap_or(Value::Null),
        }),
    );

    text.push_str(&format!(
        "multiplicity: {} ({})\ncorank: {}\nke_codim: {} ({})\n",
        mult.value, mult.status, f.corank(), ke.value, ke.status
    ));
    match &nf {
        Some(r) => text.push_str(&format!("nf_dimension: {}\nc: {}\n", r.dimension, r.constant_span)),
        None => text.push_str("nf_dimension: inconclusive\nc: inconclusive\n"),
    }
    match &ae {
        Some(r) => text.push_str(&format!("ae_codim: {} ({})\n", r.value, r.status)),
        None => text.push_str("ae_codim: inconclusive\n"),
    }
    match &verdict {
        Some(v) => text.push_str(&format!("opsu: {}\n", v.admits)),
        None => text.push_str("opsu: inconclusive\n"),
    }
    Ok(exit)
}

fn cmd_scan(args: &ScanArgs) -> Result<Output, Error> {
    let cfg = args.common.config();
    let report = scan(&args.p, args.samples, &cfg)?;
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();

    let mut rows = Vec::new();
    let mut text = format!(
        "command: family-scan\nmaster_seed: {}\nsamples_per_degree: {}\n",
        cfg.seed, args.samples
    );
    for s in &report.samples {
        let opsu_str = s.opsu.as_ref().map(|v| v.admits.to_string());
        rows.push(json!({
            "p": s.p,
            "index": s.index,
            "seed": s.seed.to_string(),
            "phi": s.phi.display(&names).to_string(),
            "germ": render_germ(&s.germ, &names)?,
            "multiplicity": { "value": s.multiplicity.value, "status": s.multiplicity.status.to_string() },
            "ke": { "value": s.ke.value, "status": s.ke.status.to_string() },
            "nf_dimension": s.nf_dimension,
            "ae": s.ae.as_ref().map(|r| json!({ "value": r.value, "status": r.status.to_string() })),
            "opsu": opsu_str,
            "passes": s.passes,
        }));
        text.push_str(&format!(
            "p={} index={} mult={}({}) ke={}({}) nf={} ae={} opsu={} {}\n",
            s.p,
            s.index,
            s.multiplicity.value,
            s.multiplicity.status,
            s.ke.value,
            s.ke.status,
            s.nf_dimension.map(|d| d.to_string()).unwrap_or_else(|| "?".into()),
            s.ae
                .as_ref()
                .map(|r| format!("{}({})", r.value, r.status))
                .unwrap_or_else(|| "?".into()),
            s.opsu.as_ref().map(|v| v.admits.to_string()).unwrap_or_else(|| "?".into()),
            if s.passes { "PASS" } else { "fail" }
        ));
    }
    let mut summary = Vec::new();
    for s in &report.summaries {
        summary.push(json!({ "p": s.p, "samples": s.samples, "passing": s.passing }));
        text.push_str(&format!(
            "degree {}: {}/{} samples pass every screen\n",
            s.p, s.passing, s.samples
        ));
    }
    let payload = json!({
        "schema": 1,
        "command": "family-scan",
        "master_seed": cfg.seed.to_string(),
        "samples_per_degree": args.samples,
        "samples": rows,
        "summary": summary,
    });
    Ok(Output { payload, text, exit: 0 })
}

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

/// Maps an inconclusive escalation to None so a panel can report the rest.
fn soften<T>(r: Result<T, Error>) -> Result<Option<T>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_inconclusive() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Merges the fields of `extra` (an object) into `payload` (an object).
fn merge(payload: &mut Value, extra: Value) {
    if let (Value::Object(dst), Value::Object(src)) = (payload, extra) {
        for (k, v) in src {
            dst.insert(k, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_names_avoid_the_source_names() {
        let names: Vec<String> = vec!["x".into(), "u1".into()];
        let ext = with_params(&names, "u", 2);
        assert_eq!(ext, vec!["x", "u1", "_u1", "u2"]);
    }

    #[test]
    fn target_names_avoid_the_source_names() {
        let src: Vec<String> = vec!["X".into(), "y".into()];
        assert_eq!(target_names(2, &src), vec!["_X", "Y"]);
        let many = target_names(5, &src);
        assert_eq!(many, vec!["X1", "X2", "X3", "X4", "X5"]);
    }
}
