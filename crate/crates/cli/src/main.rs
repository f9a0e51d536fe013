use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gridtorsion::families::{
    sample_grid_curves, secant_jacobian_rank, sigma_family_g4, survey_fp_with, SamplerConfig,
    SigmaFamilySpec, SurveySampler, DEFAULT_HEIGHT,
};
use gridtorsion::parse::parse_biform;
use gridtorsion::smooth::SmoothVerdict;
use gridtorsion::symprod::intersection_table;
use gridtorsion::torsion::{
    finite_generation_verdict, grid_rank, is_grilled, is_n_torsion, torsion_order,
};
use gridtorsion::{BiForm, CurveContext, Error, FieldSpec, Scalar};

#[derive(Parser)]
#[command(
    name = "gridtorsion",
    version,
    about = "Torsion, grid and grilled tests for (k,k) curves on P1xP1"
)]
struct Cli {
    /// Base field: Q, Q(zM) or Fp:P
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bound on random integer coefficients
    #[arg(long, global = true, default_value_t = DEFAULT_HEIGHT)]
    height: u64,
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CurveArg {
    /// Bihomogeneous form, or @path to read it from a file
    #[arg(long)]
    curve: String,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothness, grid membership, torsion order and finite-generation verdict
    Analyze {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Rank of the coefficient matrix and a rank-2 factorization
    GridTest {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Least n <= nmax with n(D1 - D2) = 0
    Torsion {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Whether the two ruling subspaces meet inside |nD1|
    Grilled {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        n: u32,
    },
    /// Intersection numbers on the second symmetric product
    Symprod {
        #[arg(long)]
        k: i64,
    },
    /// Random curves f1*g2 + g1*f2
    SampleGrid {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// The order-5 invariant genus 4 family over Q(z5)
    SigmaFamily {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        /// Run the grilled test at this n
        #[arg(long)]
        grilled: Option<u32>,
    },
    /// Rank of the differential of (u,v,w,z) -> u v^T + w z^T
    SecantRank {
        #[arg(long)]
        k: u32,
    },
    /// Torsion orders of random curves over F_p
    SurveyFp {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        nmax: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Sample from the grid family instead
        #[arg(long)]
        grid: bool,
        /// Emit CSV instead of a report
        #[arg(long)]
        csv: bool,
    },
}

struct Output {
    json: Value,
    text: String,
    exit: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotSmooth => 3,
        Error::InternalConsistency(_) => 4,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::FieldMismatch { .. } => "field_mismatch",
        Error::DivisionByZero => "division_by_zero",
        Error::InvalidField(_) => "invalid_field",
        Error::InvalidPrime(_) => "invalid_prime",
        Error::DegreeError(_) => "degree_error",
        Error::DegenerateInput(_) => "degenerate_input",
        Error::NotSmooth => "not_smooth",
        Error::DegenerateRange(_) => "degenerate_range",
        Error::NoTorsionSection { .. } => "no_torsion_section",
        Error::RangeError(_) => "range_error",
        Error::Reducible(_) => "reducible",
        Error::Parse { .. } => "parse_error",
        Error::NotBihomogeneous { .. } => "not_bihomogeneous",
        Error::InternalConsistency(_) => "internal_consistency",
    }
}

fn read_curve(arg: &CurveArg, field: FieldSpec) -> Result<CurveContext, Error> {
    let text = match arg.curve.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::DegenerateInput(format!("cannot read {path}: {e}")))?,
        None => arg.curve.clone(),
    };
    let h = parse_biform(text.trim(), field)?;
    CurveContext::certified(h)
}

fn smooth_or_exit(ctx: &CurveContext) -> Result<(), Error> {
    match &ctx.smooth {
        SmoothVerdict::Smooth => Ok(()),
        _ => Err(Error::NotSmooth),
    }
}

fn verdict_text(v: &SmoothVerdict) -> String {
    match v {
        SmoothVerdict::Smooth => "smooth".into(),
        SmoothVerdict::Unchecked => "unchecked".into(),
        SmoothVerdict::Singular(ws) => {
            let mut s = String::from("singular");
            for w in ws {
                let _ = write!(s, "\n  {w}");
            }
            s
        }
    }
}

fn curve_json(ctx: &CurveContext) -> Value {
    json!({
        "form": ctx.h,
        "text": ctx.h.to_string(),
        "k": ctx.k,
        "genus": ctx.genus,
        "smoothness": ctx.smooth,
    })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let field: FieldSpec = cli.field.parse()?;
    let ok = |json: Value, text: String| {
        Ok(Output {
            json,
            text,
            exit: 0,
        })
    };
    match &cli.command {
        Command::Analyze { curve, nmax } => {
            let ctx = read_curve(curve, field)?;
            let grid = grid_rank(&ctx.h)?;
            let mut text = format!(
                "curve: {}\nk = {}, genus = {}\nsmoothness: {}\ngrid rank: {} ({})\n",
                ctx.h,
                ctx.k,
                ctx.genus,
                verdict_text(&ctx.smooth),
                grid.rank,
                if grid.is_grid { "grid" } else { "not grid" }
            );
            let mut json = json!({ "curve": curve_json(&ctx), "grid": grid });
            if !ctx.smooth.is_smooth() {
                return Ok(Output {
                    json,
                    text,
                    exit: 3,
                });
            }
            let nmax = nmax.unwrap_or(4 * ctx.k);
            let torsion = torsion_order(&ctx, nmax)?;
            let verdict = finite_generation_verdict(&ctx, nmax)?;
            let _ = writeln!(
                text,
                "torsion order: {}\nkernel dims: {}\nverdict: {}",
                torsion
                    .order
                    .map_or_else(|| format!("none up to {nmax}"), |n| n.to_string()),
                dims_text(&torsion.tested),
                serde_json::to_value(&verdict).unwrap()["verdict"]
                    .as_str()
                    .unwrap_or("")
            );
            json["torsion"] = serde_json::to_value(&torsion).unwrap();
            json["finite_generation"] = serde_json::to_value(&verdict).unwrap();
            ok(json, text)
        }
        Command::GridTest { curve } => {
            let h = read_form(curve, field)?;
            let grid = grid_rank(&h)?;
            let mut text = format!("rank {}\nis_grid {}\n", grid.rank, grid.is_grid);
            if let Some(f) = &grid.factorization {
                let _ = writeln!(
                    text,
                    "f1 = {}\ng2 = {}\ng1 = {}\nf2 = {}",
                    f.f1_form(),
                    f.g2_form(),
                    f.g1_form(),
                    f.f2_form()
                );
            }
            ok(json!({ "form": h, "grid": grid }), text)
        }
        Command::Torsion { curve, nmax } => {
            let ctx = read_curve(curve, field)?;
            smooth_or_exit(&ctx)?;
            let nmax = nmax.unwrap_or(4 * ctx.k);
            let report = torsion_order(&ctx, nmax)?;
            let text = format!(
                "order {}\nkernel dims {}\n{}\n",
                report
                    .order
                    .map_or_else(|| format!("none up to {nmax}"), |n| n.to_string()),
                dims_text(&report.tested),
                report.lower_bound_certificate
            );
            ok(
                json!({ "curve": curve_json(&ctx), "torsion": report }),
                text,
            )
        }
        Command::Grilled { curve, n } => {
            let ctx = read_curve(curve, field)?;
            smooth_or_exit(&ctx)?;
            let (torsion, _) = is_n_torsion(&ctx, *n)?;
            if !torsion {
                let tried = if *n < ctx.k {
                    vec![*n]
                } else {
                    torsion_order(&ctx, *n)?
                        .tested
                        .iter()
                        .map(|t| t.0)
                        .collect()
                };
                return Err(Error::NoTorsionSection { n: *n, tried });
            }
            let report = is_grilled(&ctx, *n)?;
            let mut text = format!(
                "n {}\ndim W1 {}\ndim W2 {}\ndim W1∩W2 {}\nambient {}\ngrilled {}\n",
                report.n,
                report.dim_w1,
                report.dim_w2,
                report.dim_intersection,
                report.ambient_dim,
                report.is_grilled
            );
            if let Some(c) = &report.certificate {
                let _ = writeln!(text, "f = {}\nc = {}", c.f, c.c);
            }
            ok(
                json!({ "curve": curve_json(&ctx), "grilled": report }),
                text,
            )
        }
        Command::Symprod { k } => {
            let table = intersection_table(*k)?;
            let text = table.to_text();
            ok(json!({ "table": table }), text)
        }
        Command::SampleGrid { k, count } => {
            let cfg = SamplerConfig {
                k: *k,
                field,
                seed: cli.seed,
                height: cli.height,
                count: *count,
            };
            let forms = sample_grid_curves(&cfg);
            let text = forms.iter().map(|f| format!("{f}\n")).collect();
            ok(json!({ "config": cfg, "forms": forms }), text)
        }
        Command::SigmaFamily {
            alpha,
            beta,
            gamma,
            nmax,
            grilled,
        } => {
            let z5 = FieldSpec::Cyclotomic(5);
            let spec = SigmaFamilySpec {
                alpha: Scalar::parse(alpha, z5)?,
                beta: Scalar::parse(beta, z5)?,
                gamma: Scalar::parse(gamma, z5)?,
            };
            let member = sigma_family_g4(&spec)?;
            let ctx = &member.ctx;
            let mut text = format!(
                "curve: {}\nsmoothness: {}\ncharacter: {}\nnote: {}\n",
                ctx.h,
                verdict_text(&ctx.smooth),
                member.character,
                member.note
            );
            let mut json = json!({
                "curve": curve_json(ctx),
                "sigma": member.sigma,
                "character": member.character,
                "note": member.note,
            });
            if !ctx.smooth.is_smooth() {
                return Ok(Output {
                    json,
                    text,
                    exit: 3,
                });
            }
            let torsion = torsion_order(ctx, *nmax)?;
            let _ = writeln!(
                text,
                "torsion order: {}\nkernel dims: {}",
                torsion
                    .order
                    .map_or_else(|| format!("none up to {nmax}"), |n| n.to_string()),
                dims_text(&torsion.tested)
            );
            json["torsion"] = serde_json::to_value(&torsion).unwrap();
            if let Some(n) = grilled {
                let report = is_grilled(ctx, *n)?;
                let _ = writeln!(
                    text,
                    "grilled at n={}: {} (dim W1 {}, dim W2 {}, intersection {}, ambient {})",
                    n,
                    report.is_grilled,
                    report.dim_w1,
                    report.dim_w2,
                    report.dim_intersection,
                    report.ambient_dim
                );
                json["grilled"] = serde_json::to_value(&report).unwrap();
            }
            ok(json, text)
        }
        Command::SecantRank { k } => {
            let rank = secant_jacobian_rank(*k, cli.seed)?;
            ok(
                json!({ "k": k, "rank": rank, "expected": 4 * k.max(&2) }),
                format!("rank {rank}\n"),
            )
        }
        Command::SurveyFp {
            k,
            p,
            nmax,
            trials,
            grid,
            csv,
        } => {
            let sampler = if *grid {
                SurveySampler::Grid
            } else {
                SurveySampler::Random
            };
            let hist = survey_fp_with(sampler, *k, *p, *nmax, *trials, cli.seed)?;
            let text = if *csv {
                hist.to_csv()
            } else {
                let mut t = format!("p {p} k {k} nmax {nmax} trials {trials}\n");
                for (order, c) in &hist.counts {
                    let _ = writeln!(t, "order {order}: {c}");
                }
                let _ = writeln!(
                    t,
                    "singular: {}\nnot found: {}",
                    hist.singular, hist.not_found
                );
                t
            };
            ok(json!({ "histogram": hist }), text)
        }
    }
}

fn read_form(arg: &CurveArg, field: FieldSpec) -> Result<BiForm, Error> {
    let text = match arg.curve.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::DegenerateInput(format!("cannot read {path}: {e}")))?,
        None => arg.curve.clone(),
    };
    parse_biform(text.trim(), field)
}

fn dims_text(tested: &[(u32, usize)]) -> String {
    tested
        .iter()
        .map(|(n, d)| format!("n={n}:{d}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let csv = matches!(cli.command, Command::SurveyFp { csv: true, .. });
    match run(&cli) {
        Ok(out) => {
            if cli.text || csv {
                let _ = write!(std::io::stdout(), "{}", out.text);
            } else {
                let mut doc = json!({ "schema": 1 });
                if let (Value::Object(d), Value::Object(r)) = (&mut doc, out.json) {
                    d.extend(r);
                }
                let _ = writeln!(
                    std::io::stdout(),
                    "{}",
                    serde_json::to_string_pretty(&doc).unwrap()
                );
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            if cli.text {
                eprintln!("error: {e}");
            } else {
                let mut err = json!({ "kind": error_kind(&e), "message": e.to_string() });
                match &e {
                    Error::Parse { position, .. } => err["position"] = json!(position),
                    Error::NoTorsionSection { tried, .. } => err["tried"] = json!(tried),
                    _ => {}
                }
                let doc = json!({ "schema": 1, "error": err });
                let _ = writeln!(
                    std::io::stdout(),
                    "{}",
                    serde_json::to_string_pretty(&doc).unwrap()
                );
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
