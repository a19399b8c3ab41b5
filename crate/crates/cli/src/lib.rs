//! Command-line front end for `eulerlp`.
//!
//! [`run`] parses arguments, dispatches one subcommand and returns the exit
//! code with the text destined for stdout and stderr, so the binary and the
//! tests share one path.

pub mod integrand;
pub mod output;
pub mod verify;

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eulerlp::arith::{format_rational, parse_rational};
use eulerlp::euler::{euler_number, euler_polynomial, euler_polynomial_at};
use eulerlp::fermionic::{integrate_by_partial_sums_upto, integrate_units, integrate_zp, Integral, Integrand, Route};
use eulerlp::generalized::{gen_euler_number, gen_euler_poly};
use eulerlp::zeta::{
    chi_euler_limit_term, chi_euler_number, h_series, h_sum, hurwitz_euler_zeta, lp_eval, lp_neg_closed,
    lp_pos_limit, LRoute,
};
use eulerlp::{CZpPoint, DirichletCharacter, Error, PadicContext, PadicNumber};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::output::Format;
use crate::verify::SuiteId;

const CHAR_HELP: &str = "Character: \"quad:f\" (Jacobi symbol mod odd f), \"f:i\" (i-th character mod f, \
enumerated lexicographically on generator exponents) or \"omega^k\" (Teichmüller power, needs --p)";

#[derive(Parser, Debug)]
#[command(name = "eulerlp", version, about = "Euler numbers, fermionic p-adic integrals and p-adic Euler L-functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report elapsed times (output is then no longer byte-stable).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PadicArgs {
    /// Odd prime p.
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Target precision M: results are certified modulo p^M.
    #[arg(long, default_value_t = 6)]
    pub precision: u32,
    /// Extra working digits carried internally.
    #[arg(long)]
    pub guard: Option<u32>,
}

impl PadicArgs {
    fn context(&self) -> eulerlp::Result<PadicContext> {
        match self.guard {
            Some(g) => PadicContext::new(self.p, self.precision, g),
            None => PadicContext::with_default_guard(self.p, self.precision),
        }
    }

    fn inputs(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("p".into(), json!(self.p));
        m.insert("precision".into(), json!(self.precision));
        if let Some(g) = self.guard {
            m.insert("guard".into(), json!(g));
        }
        m
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FerintRoute {
    Auto,
    Exact,
    PartialSums,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpRoute {
    Series,
    Limit,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiEulerRoute {
    Auto,
    Closed,
    Series,
    Limit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classical Euler number E_n, or E_n(x) with --x, or the polynomial with --poly.
    Euler {
        #[arg(long)]
        n: usize,
        /// Rational point for E_n(x).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "poly")]
        x: Option<String>,
        #[arg(long)]
        poly: bool,
    },
    /// Generalized Euler number E_{n,χ}, or E_{n,χ}(x) with --x.
    #[command(after_help = CHAR_HELP)]
    GenEuler {
        #[arg(long = "char")]
        character: String,
        #[arg(long)]
        n: usize,
        /// Period N (odd multiple of the modulus); defaults to the modulus.
        #[arg(long = "big-n")]
        big_n: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Also embed the value into Q_p.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 6, requires = "p")]
        precision: u32,
    },
    /// Fermionic p-adic integral over Z_p (or Z_p^× with --units).
    #[command(after_help = "Integrand: a polynomial in x such as \"3*x^2 - x + 1/2\", a power \"(x+1/2)^4\", \
\"x^-k\" (with --units), or a twist \"chi(x)*x^k\" / \"chi(x)*(x+c)^k\" (needs --char).")]
    Ferint {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, allow_hyphen_values = true)]
        integrand: String,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long)]
        units: bool,
        #[arg(long, value_enum, default_value_t = FerintRoute::Auto)]
        route: FerintRoute,
        /// Deepest partial-sum level N before giving up (default M + c + 4).
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// p-adic Hurwitz-type Euler zeta function at s, x = a/m with p | m; without --x, ζ_{p,E}(s).
    Zeta {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// p-adic Euler L-function L_{p,E}(χ, s) at a rational s in Z_p.
    #[command(after_help = CHAR_HELP)]
    LpEval {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long = "char")]
        character: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// `limit` sums χω^k(n)(-1)^n n^{-k} over units mod m p^N until it
        /// stabilizes; needs an integer s = k + 1 with k ≠ 0.
        #[arg(long, value_enum, default_value_t = LpRoute::Series)]
        route: LpRoute,
        /// Deepest level N for the limit route.
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// Compare L_{p,E}(χ, 1-k) with its closed form for k = 1..k-max.
    #[command(after_help = CHAR_HELP)]
    LpInterpCheck {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long = "char")]
        character: String,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
    },
    /// p-adic χ-Euler number E_{k,p,χ}.
    #[command(after_help = CHAR_HELP)]
    ChiEuler {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long = "char")]
        character: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = ChiEulerRoute::Auto)]
        route: ChiEulerRoute,
        /// Deepest level r for the limit route.
        #[arg(long, default_value_t = 3)]
        r_max: u32,
    },
    /// H_n = Σ' χ(a)(-1)^a a^{-n} over the units mod lcm(f, p).
    #[command(after_help = CHAR_HELP)]
    HSum {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long = "char")]
        character: String,
        #[arg(long)]
        n: u32,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, required_unless_present = "all")]
        suite: Vec<SuiteId>,
        #[arg(long, conflicts_with = "suite")]
        all: bool,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        precision: u32,
        #[arg(long)]
        guard: Option<u32>,
    },
}

/// Exit code, stdout and stderr of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
        Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok((mut value, ok)) => {
            if cli.timings {
                if let Value::Object(m) = &mut value {
                    m.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
                }
            }
            finish(&value, ok, cli.format)
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Renders a result; `ok = false` (a failed check) exits with 1.
pub fn finish(value: &Value, ok: bool, format: Format) -> Outcome {
    Outcome {
        code: if ok { 0 } else { EXIT_VERIFY_FAILED },
        stdout: output::emit(value, format),
        stderr: if ok { String::new() } else { "verification failed\n".into() },
    }
}

fn rational(s: &str) -> eulerlp::Result<BigRational> {
    parse_rational(s.trim())
}

fn character(spec: &str, p: Option<u64>) -> eulerlp::Result<DirichletCharacter> {
    DirichletCharacter::from_spec(spec, p)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("domain values serialize")
}

/// Result JSON plus whether the command's checks passed.
fn dispatch(cli: &Cli) -> eulerlp::Result<(Value, bool)> {
    let value = match &cli.command {
        Command::Euler { n, x, poly } => {
            if *poly {
                json!({"n": n, "polynomial": euler_polynomial(*n).to_string()})
            } else if let Some(x) = x {
                let x = rational(x)?;
                json!({"n": n, "x": format_rational(&x), "value": format_rational(&euler_polynomial_at(*n, &x))})
            } else {
                json!({"n": n, "value": format_rational(&euler_number(*n))})
            }
        }
        Command::GenEuler { character: spec, n, big_n, x, p, precision } => {
            let chi = character(spec, *p)?;
            let big_n = big_n.unwrap_or(chi.modulus());
            let value = match x {
                Some(x) => gen_euler_poly(&chi, *n, &rational(x)?, big_n)?,
                None => gen_euler_number(&chi, *n, big_n)?,
            };
            let mut out = json!({
                "character": to_json(&chi),
                "n": n,
                "N": big_n,
                "value": to_json(&value),
                "display": value.to_string(),
            });
            if let Some(x) = x {
                out["x"] = json!(format_rational(&rational(x)?));
            }
            if let Some(p) = p {
                let ctx = PadicContext::with_default_guard(*p, *precision)?;
                out["padic"] = to_json(&value.embed(&ctx)?.to_target());
            }
            out
        }
        Command::Ferint { padic, integrand, character: spec, units, route, max_level } => {
            let ctx = padic.context()?;
            let chi = spec.as_deref().map(|s| character(s, Some(padic.p))).transpose()?;
            let f = integrand::parse_integrand(integrand, chi.as_ref())?;
            let result = ferint(&f, &ctx, *units, *route, *max_level)?;
            let mut inputs = padic.inputs();
            inputs.insert("integrand".into(), json!(integrand));
            inputs.insert("units".into(), json!(units));
            if let Some(s) = spec {
                inputs.insert("character".into(), json!(s));
            }
            integral_json(inputs, &result, to_json(&result.route))
        }
        Command::Zeta { padic, s, x } => {
            let ctx = padic.context()?;
            let s_val = PadicNumber::from_rational(&rational(s)?, &ctx);
            let mut inputs = padic.inputs();
            inputs.insert("s".into(), json!(s));
            let value = match x {
                Some(x) => {
                    let q = rational(x)?;
                    let a: i64 = q.numer().try_into().map_err(|_| Error::Parse(format!("numerator of {x} too large")))?;
                    let m: u64 = q.denom().try_into().map_err(|_| Error::Parse(format!("denominator of {x} too large")))?;
                    inputs.insert("x".into(), json!(format_rational(&q)));
                    hurwitz_euler_zeta(&s_val, &CZpPoint::new(a, m, padic.p)?)?
                }
                None => lp_eval(&DirichletCharacter::principal(1), &s_val)?,
            };
            json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Series)})
        }
        Command::LpEval { padic, character: spec, s, route, max_level } => {
            let ctx = padic.context()?;
            let chi = character(spec, Some(padic.p))?;
            let s_val = rational(s)?;
            let mut inputs = padic.inputs();
            inputs.insert("character".into(), json!(spec));
            inputs.insert("s".into(), json!(s));
            match route {
                LpRoute::Series => {
                    let value = lp_eval(&chi, &PadicNumber::from_rational(&s_val, &ctx))?;
                    json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Series)})
                }
                LpRoute::Limit => {
                    let k = (s_val.is_integer())
                        .then(|| i64::try_from(s_val.numer()).ok())
                        .flatten()
                        .map(|s| s - 1)
                        .filter(|k| *k != 0)
                        .ok_or_else(|| Error::Domain(format!("the limit route needs an integer s ≠ 1, got {s}")))?;
                    let result = lp_pos_limit(&chi, k, *max_level, &ctx)?;
                    integral_json(inputs, &result, to_json(&LRoute::Limit))
                }
            }
        }
        Command::LpInterpCheck { padic, character: spec, k_max } => {
            let ctx = padic.context()?;
            let chi = character(spec, Some(padic.p))?;
            let tolerance = padic.precision.saturating_sub(1) as i64;
            let mut checks = Vec::new();
            let mut all = true;
            for k in 1..=*k_max {
                let series = lp_eval(&chi, &PadicNumber::from_i64(1 - k as i64, &ctx))?;
                let closed = lp_neg_closed(&chi, k, &ctx)?;
                let agree = series.is_congruent(&closed, tolerance);
                all &= agree;
                checks.push(json!({
                    "k": k,
                    "series": to_json(&series),
                    "closed": to_json(&closed),
                    "agree": agree,
                }));
            }
            let mut inputs = padic.inputs();
            inputs.insert("character".into(), json!(spec));
            inputs.insert("k_max".into(), json!(k_max));
            let out = json!({"inputs": inputs, "modulus_exponent": tolerance, "checks": checks, "all_agree": all});
            return Ok((out, all));
        }
        Command::ChiEuler { padic, character: spec, k, route, r_max } => {
            let ctx = padic.context()?;
            let chi = character(spec, Some(padic.p))?;
            let mut inputs = padic.inputs();
            inputs.insert("character".into(), json!(spec));
            inputs.insert("k".into(), json!(k));
            match route {
                ChiEulerRoute::Auto => {
                    let (value, r) = chi_euler_number(*k, &chi, &ctx)?;
                    json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&r)})
                }
                ChiEulerRoute::Closed => {
                    if *k < 1 {
                        return Err(Error::Domain("the closed route needs k ≥ 1".into()));
                    }
                    let twisted = chi.times_omega(*k, padic.p)?;
                    let value = lp_neg_closed(&twisted, *k as u32, &ctx)?;
                    json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Closed)})
                }
                ChiEulerRoute::Series => {
                    let value = if *k <= -1 {
                        h_series(k.unsigned_abs() as u32, &chi, &ctx)?
                    } else {
                        let twisted = chi.times_omega(*k, padic.p)?;
                        lp_eval(&twisted, &PadicNumber::from_i64(1 - k, &ctx))?
                    };
                    json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Series)})
                }
                ChiEulerRoute::Limit => {
                    let mut trace = Vec::new();
                    let mut last = None;
                    for r in 1..=*r_max {
                        let v = chi_euler_limit_term(*k, r, &chi, &ctx)?;
                        trace.push(json!({"r": r, "value": to_json(&v.truncate(r as i64))}));
                        last = Some(v.truncate(*r_max as i64));
                    }
                    let value = last.ok_or_else(|| Error::Domain("--r-max must be at least 1".into()))?;
                    inputs.insert("r_max".into(), json!(r_max));
                    json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Limit), "trace": trace})
                }
            }
        }
        Command::HSum { padic, character: spec, n } => {
            let ctx = padic.context()?;
            let chi = character(spec, Some(padic.p))?;
            let value = h_sum(*n, &chi, &ctx)?.to_target();
            let mut inputs = padic.inputs();
            inputs.insert("character".into(), json!(spec));
            inputs.insert("n".into(), json!(n));
            json!({"inputs": inputs, "value": to_json(&value.to_target()), "route": to_json(&LRoute::Closed)})
        }
        Command::Verify { suite, all, p, precision, guard } => {
            let ids = if *all { SuiteId::all().to_vec() } else { suite.clone() };
            let cfg = verify::Config { p: *p, precision: *precision, guard: *guard, timings: cli.timings };
            let report = verify::run(&ids, &cfg)?;
            let ok = report.passed();
            return Ok((to_json(&report), ok));
        }
    };
    Ok((value, true))
}

/// Value, route and the `(N, S_N)` trace, all cut to the target precision.
fn integral_json(inputs: Map<String, Value>, result: &Integral, route: Value) -> Value {
    let mut out = json!({"inputs": inputs, "value": to_json(&result.value.to_target()), "route": route});
    if !result.trace.is_empty() {
        let trace: Vec<Value> = result
            .trace
            .iter()
            .map(|s| json!({"level": s.level, "value": to_json(&s.value.to_target())}))
            .collect();
        out["trace"] = Value::Array(trace);
    }
    out
}

fn ferint(
    f: &Integrand,
    ctx: &PadicContext,
    units: bool,
    route: FerintRoute,
    max_level: Option<u32>,
) -> eulerlp::Result<Integral> {
    match (route, units) {
        (FerintRoute::PartialSums, _) => integrate_by_partial_sums_upto(f, ctx, units, max_level),
        (_, true) => require_exact(integrate_units(f, ctx)?, route),
        (_, false) => require_exact(integrate_zp(f, ctx)?, route),
    }
}

fn require_exact(i: Integral, route: FerintRoute) -> eulerlp::Result<Integral> {
    if route == FerintRoute::Exact && i.route != Route::Exact {
        return Err(Error::Domain("no exact route for this integrand; use --route partial-sums".into()));
    }
    Ok(i)
}
