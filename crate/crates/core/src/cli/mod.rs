//! Command-line front-end: `pairbench --config FILE <command> …`.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use crate::conditions::{self, HnnVerdict, SemidirectOutcome, VerdictLevel};
use crate::config;
use crate::error::{PairError, Result};
use crate::fourier::{self, GroupOperator};
use crate::pair::{enumerate_ball, enumerate_box, AmalgamGamma0, BallSide, Element, Family, PairContext};
use crate::report::{self, CertStatus, CertificateEntry, Payload, ReportEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;

/// Thread count used when neither `--threads` nor this variable is set is rayon's default.
pub const THREADS_ENV: &str = "PAIRBENCH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pairbench", version, about = "Exact checks of mixing conditions for group pairs")]
pub struct Cli {
    /// Pair-definition JSON file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Emit defect curves as CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads (advisory; results never depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Whole,
    Gamma0,
    Complement,
}

impl From<SideArg> for BallSide {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Whole => BallSide::WholeGroup,
            SideArg::Gamma0 => BallSide::Gamma0Only,
            SideArg::Complement => BallSide::ComplementOfGamma0,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical form of a word.
    Reduce { word: String },
    /// Enumerate a ball, or a `V,K` box in a semidirect family.
    Ball {
        #[arg(long, value_enum, default_value = "whole")]
        side: SideArg,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long = "box", value_name = "V,K")]
        box_bounds: Option<String>,
    },
    /// E(g,h) over the Γ₀-ball.
    ExcSet {
        g: String,
        h: String,
        #[arg(long, default_value_t = 10)]
        radius: usize,
    },
    /// Search for an (SS) witness; `--set` is a comma-separated word list.
    CheckSs {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        exclude_identity: bool,
    },
    /// Exceptional sets for every ordered pair of the set.
    CheckSt {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    CheckMalnormal {
        #[arg(long, default_value_t = 4)]
        g_radius: usize,
        #[arg(long, default_value_t = 10)]
        gamma_radius: usize,
    },
    /// Run every structural certificate that applies to the family.
    Certify {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 6)]
        jmax: usize,
        #[arg(long, default_value_t = 20)]
        ball_radius: i64,
        #[arg(long, default_value_t = 12)]
        kmax: i64,
    },
    /// ‖E(xvy) − E(x)vE(y)‖₂²; operators are `coef*word; word; …`.
    Defect {
        #[arg(long)]
        x: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        y: String,
    },
    SmCurve {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 5)]
        radius: usize,
    },
    AhCurve {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 10)]
        kmax: i64,
    },
    /// |x(s⁻¹)|² along a ball.
    Decay {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum, default_value = "gamma0")]
        side: SideArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Ball { .. } => "ball",
            Command::ExcSet { .. } => "exc-set",
            Command::CheckSs { .. } => "check-ss",
            Command::CheckSt { .. } => "check-st",
            Command::CheckMalnormal { .. } => "check-malnormal",
            Command::Certify { .. } => "certify",
            Command::Defect { .. } => "defect",
            Command::SmCurve { .. } => "sm-curve",
            Command::AhCurve { .. } => "ah-curve",
            Command::Decay { .. } => "decay",
        }
    }
}

/// Exit code and the text written to each stream.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub envelope: Option<ReportEnvelope>,
}

fn fail(code: i32, msg: String) -> Outcome {
    Outcome { code, stdout: String::new(), stderr: msg, envelope: None }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            return Outcome { code, stdout: e.to_string(), stderr: String::new(), envelope: None };
        }
    };
    let Some(path) = cli.config.clone() else {
        return fail(EXIT_CONFIG, "error: --config is required".into());
    };
    let (ctx, digest) = match config::load(&path) {
        Ok(x) => x,
        Err(e) => return fail(EXIT_CONFIG, format!("error: {}: {e}", path.display())),
    };
    let threads = cli.threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(EXIT_CONFIG, format!("error: thread pool: {e}")),
    };
    let result = pool.install(|| execute(&ctx, &cli.command));
    let (code, payload) = match result {
        Ok(x) => x,
        Err(e) => return fail(EXIT_CONFIG, format!("error: {}: {e}", cli.command.name())),
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let envelope =
        ReportEnvelope { command: cli.command.name().into(), config_digest: digest, timestamp, result: payload };
    let stdout = match (&envelope.result, cli.csv) {
        (Payload::Curve(c), true) => report::csv(&c.points),
        (Payload::Decay { points, .. }, true) => report::csv(points),
        _ => envelope.to_json() + "\n",
    };
    Outcome { code, stdout, stderr: String::new(), envelope: Some(envelope) }
}

fn words(ctx: &PairContext, list: &str) -> Result<Vec<Element>> {
    list.split(',').map(str::trim).filter(|w| !w.is_empty()).map(|w| ctx.parse(w)).collect()
}

fn names(ctx: &PairContext, xs: &[Element]) -> Vec<String> {
    xs.iter().map(|x| ctx.render(x)).collect()
}

fn level_code(l: VerdictLevel) -> i32 {
    match l {
        VerdictLevel::CertifiedFinite => EXIT_OK,
        VerdictLevel::BoundedVerified => EXIT_INCONCLUSIVE,
        VerdictLevel::RefutedInfinite => EXIT_REFUTED,
    }
}

fn execute(ctx: &PairContext, command: &Command) -> Result<(i32, Payload)> {
    Ok(match command {
        Command::Reduce { word } => {
            let x = ctx.parse(word)?;
            (EXIT_OK, Payload::Reduce { input: word.clone(), canonical: ctx.render(&x), in_gamma0: ctx.is_in_gamma0(&x) })
        }
        Command::Ball { side, radius, box_bounds } => {
            let members = match box_bounds {
                Some(b) => {
                    let (v, k) = b
                        .split_once(',')
                        .and_then(|(v, k)| Some((v.trim().parse().ok()?, k.trim().parse().ok()?)))
                        .ok_or_else(|| PairError::Parse(format!("box bounds `{b}` are not V,K")))?;
                    enumerate_box(ctx, v, k)?
                }
                None => enumerate_ball(ctx, (*side).into(), *radius)?.members,
            };
            let side = format!("{:?}", BallSide::from(*side));
            (EXIT_OK, Payload::Ball { side, radius: *radius, size: members.len(), members: names(ctx, &members) })
        }
        Command::ExcSet { g, h, radius } => {
            let r = conditions::exceptional_set(ctx, &ctx.parse(g)?, &ctx.parse(h)?, *radius)?;
            (level_code(r.verdict.level()), Payload::ExceptionalSet(report::exceptional_set(ctx, &r)))
        }
        Command::CheckSs { set, radius, exclude_identity } => {
            let c = words(ctx, set)?;
            let w = conditions::ss_witness(ctx, &c, *radius, !exclude_identity)?;
            let code = if w.is_some() { EXIT_OK } else { EXIT_INCONCLUSIVE };
            (
                code,
                Payload::CheckSs {
                    set: names(ctx, &c),
                    radius: *radius,
                    include_identity: !exclude_identity,
                    witness: w.map(|x| ctx.render(&x)),
                },
            )
        }
        Command::CheckSt { set, radius } => {
            let c = words(ctx, set)?;
            let r = conditions::st_check(ctx, &c, *radius)?;
            (level_code(r.overall), report::st(ctx, names(ctx, &c), &r))
        }
        Command::CheckMalnormal { g_radius, gamma_radius } => {
            let r = conditions::malnormal_scan(ctx, *g_radius, *gamma_radius)?;
            let code = if r.violations.is_empty() { EXIT_OK } else { EXIT_REFUTED };
            (code, Payload::CheckMalnormal(report::malnormal(ctx, &r)))
        }
        Command::Certify { radius, jmax, ball_radius, kmax } => {
            let certificates = certify(ctx, *radius, *jmax, *ball_radius, *kmax)?;
            let code = if certificates.iter().any(|c| c.status == CertStatus::Violated) {
                EXIT_REFUTED
            } else if certificates.iter().all(|c| matches!(c.status, CertStatus::Certified | CertStatus::NotApplicable)) {
                EXIT_OK
            } else {
                EXIT_INCONCLUSIVE
            };
            (code, Payload::Certify { certificates })
        }
        Command::Defect { x, v, y } => {
            let (xo, vo, yo) = (GroupOperator::parse(ctx, x)?, GroupOperator::parse(ctx, v)?, GroupOperator::parse(ctx, y)?);
            let d = fourier::mixing_defect(ctx, &xo, &vo, &yo)?;
            let p = report::point(String::new(), &d);
            (
                EXIT_OK,
                Payload::Defect { x: xo.render(ctx), v: vo.render(ctx), y: yo.render(ctx), defect_sq: p.defect_sq, decimal: p.decimal },
            )
        }
        Command::SmCurve { x, y, radius } => {
            let c = fourier::strong_mixing_curve(ctx, &GroupOperator::parse(ctx, x)?, &GroupOperator::parse(ctx, y)?, *radius)?;
            (EXIT_OK, Payload::Curve(report::curve(&c)))
        }
        Command::AhCurve { x, y, t, kmax } => {
            let c = fourier::ah_curve(
                ctx,
                &GroupOperator::parse(ctx, x)?,
                &ctx.parse(t)?,
                &GroupOperator::parse(ctx, y)?,
                *kmax,
            )?;
            (EXIT_OK, Payload::Curve(report::curve(&c)))
        }
        Command::Decay { x, radius, side } => {
            let xo = GroupOperator::parse(ctx, x)?;
            let s = enumerate_ball(ctx, (*side).into(), *radius)?.members;
            let values = fourier::coefficient_decay(ctx, &xo, &s)?;
            let points = s.iter().zip(&values).map(|(g, q)| report::point(ctx.render(g), q)).collect();
            (EXIT_OK, Payload::Decay { x: xo.render(ctx), points })
        }
    })
}

fn entry(name: &str, status: CertStatus, details: Vec<(&str, String)>) -> CertificateEntry {
    CertificateEntry {
        name: name.into(),
        status,
        details: details.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn certify(ctx: &PairContext, radius: usize, jmax: usize, ball_radius: i64, kmax: i64) -> Result<Vec<CertificateEntry>> {
    let mut out = Vec::new();
    let family = match ctx.family() {
        Family::FreeProduct { base, .. } => base.as_ref(),
        f => f,
    };
    match conditions::malnormal_source(ctx.family()) {
        Some(s) => out.push(entry("malnormality", CertStatus::Certified, vec![("source", report::source_name(s).into())])),
        None => out.push(entry("malnormality", CertStatus::NotApplicable, vec![])),
    }
    match family {
        Family::Amalgam { gamma0: AmalgamGamma0::LeftFactor, .. } => {
            out.push(entry("amalgam_formula", CertStatus::Certified, vec![("e", "Z ∪ u₁⁻¹Z or Z ∪ (r_l u₁)⁻¹Z".into())]));
        }
        Family::Hnn(_) if !matches!(ctx.family(), Family::FreeProduct { .. }) => {
            let r = conditions::hnn_malnormal_certificate(ctx, ball_radius, jmax)?;
            let mut details = vec![("strictly_descending", r.strictly_descending.to_string())];
            if let Some(m) = &r.moduli {
                details.push(("dom_moduli", list(m)));
            }
            let status = match &r.verdict {
                HnnVerdict::Certified { inverted } => {
                    details.push(("stable_letter_inverted", inverted.to_string()));
                    CertStatus::Certified
                }
                HnnVerdict::Inconclusive { reason } => {
                    details.push(("reason", reason.clone()));
                    CertStatus::Inconclusive
                }
            };
            out.push(entry("dom_chain_escape", status, details));
            let fp = conditions::hnn_fixed_point_check(ctx, jmax.max(8), ball_radius.max(100))?;
            let status = if fp.violations.is_empty() { CertStatus::Certified } else { CertStatus::Violated };
            let shown = fp.violations.iter().take(8).map(|(j, v)| format!("j={j}:{}", list(v)));
            out.push(entry(
                "phi_fixed_points",
                status,
                vec![("violations", fp.violations.len().to_string()), ("first", list(shown))],
            ));
        }
        Family::Semidirect(spec) => {
            let dets = conditions::fixed_point_determinants(spec, kmax);
            let zero = dets.iter().filter(|(_, d)| d == &num_bigint::BigInt::from(0)).map(|(k, _)| *k);
            let zero: Vec<i64> = zero.collect();
            let status = if zero.is_empty() { CertStatus::Certified } else { CertStatus::Violated };
            out.push(entry(
                "fixed_point_free",
                status,
                vec![("determinants", list(dets.iter().map(|(k, d)| format!("{k}:{d}")))), ("vanishing_at", list(zero))],
            ));
            let c: Vec<Element> = ctx.gamma_generators().iter().filter(|g| !ctx.is_in_gamma0(g)).cloned().collect();
            let entry_for = match conditions::semidirect_st_certificate(ctx, &c, kmax) {
                Ok(cert) => match cert.outcome {
                    SemidirectOutcome::Certified { e, burn_in } => entry(
                        "semidirect_construction",
                        CertStatus::Certified,
                        vec![("e1", list(&cert.e1)), ("e", list(e)), ("burn_in", format!("{},{}", burn_in.0, burn_in.1))],
                    ),
                    SemidirectOutcome::Inconclusive { reason } => entry(
                        "semidirect_construction",
                        CertStatus::Inconclusive,
                        vec![("reason", reason), ("scanned_e1", list(&cert.e1))],
                    ),
                },
                Err(PairError::FixedPointExists { k, vector }) => {
                    entry("semidirect_construction", CertStatus::Violated, vec![("k", k.to_string()), ("vector", vector)])
                }
                Err(e) => return Err(e),
            };
            out.push(entry_for);
        }
        _ => {}
    }
    let mut c: Vec<Element> = Vec::new();
    for g in ctx.gamma_generators().iter().filter(|g| !ctx.is_in_gamma0(g)) {
        for x in [g.clone(), ctx.inv(g)?] {
            if !c.contains(&x) {
                c.push(x);
            }
        }
    }
    if !c.is_empty() {
        let r = conditions::st_check(ctx, &c, radius)?;
        let status = match r.overall {
            VerdictLevel::CertifiedFinite => CertStatus::Certified,
            VerdictLevel::BoundedVerified => CertStatus::Inconclusive,
            VerdictLevel::RefutedInfinite => CertStatus::Violated,
        };
        out.push(entry(
            "st_on_generators",
            status,
            vec![
                ("set", list(names(ctx, &c))),
                ("radius", radius.to_string()),
                ("overall", report::level_name(r.overall).into()),
                ("aggregated", list(names(ctx, &r.aggregated))),
            ],
        ));
    }
    Ok(out)
}
