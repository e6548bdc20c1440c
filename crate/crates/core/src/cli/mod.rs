//! The `addforms` command line: argument definitions, dispatch, and JSON
//! reports.
//!
//! Every report is a JSON object with `"schema": "addforms/1"` and the
//! command name; keys are sorted and rationals are `{num, den, decimal}`, so
//! identical invocations produce identical bytes. Exit codes: 0 when all checks
//! pass, 1 when an inequality or verification fails, 2 for usage and parse
//! errors, 3 when a resource cap is hit.

mod args;

use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{
    CheckArgs, Cli, Command, DensityArgs, EstimateArgs, ReduceCommand, SetArgs, SumsetArgs,
    VerifyCommand, WitnessArgs,
};

use crate::abelian::{
    format_subset_file, parse_subset_file, parse_subset_literal, FiniteAbelianGroup, GroupSubset,
};
use crate::bounds::{self, InequalityCheck};
use crate::json::rational;
use crate::linform::{
    estimate_density, eval_density, eval_quantum, EvalConfig, LinearSystem, QuantumSystem,
};
use crate::polynomial::{transform_p_from_q, transform_q_from_p, transform_qstar, IntPolynomial};
use crate::reduction::{self, ReductionBundle};
use crate::{fourier, Error, Rational, Result};

pub const SCHEMA: &str = "addforms/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub fn parse_group(text: &str, max_order: u64) -> Result<FiniteAbelianGroup> {
    crate::abelian::parse_group(text, max_order)
}

/// An inline literal `{...}`, or the contents of a subset file.
pub fn parse_subset(group: &FiniteAbelianGroup, text: &str) -> Result<GroupSubset> {
    if text.trim_start().starts_with('{') {
        parse_subset_literal(group, text)
    } else {
        parse_subset_file(group, text)
    }
}

pub fn parse_system(text: &str) -> Result<LinearSystem> {
    text.parse()
}

pub fn parse_poly(text: &str) -> Result<IntPolynomial> {
    text.parse()
}

/// A finished command: its report and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

struct Ctx {
    max_order: u64,
    config: EvalConfig,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn residues(set: &GroupSubset) -> Vec<Vec<u64>> {
    set.elements().iter().map(|x| x.residues().to_vec()).collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a rational number: `{text}`")))
}

impl Ctx {
    fn group(&self, text: &str) -> Result<FiniteAbelianGroup> {
        parse_group(text, self.max_order)
    }

    fn set(&self, args: &SetArgs) -> Result<(FiniteAbelianGroup, GroupSubset)> {
        let group = self.group(&args.group)?;
        let set = match (&args.set, &args.set_file) {
            (Some(s), _) => parse_subset(&group, s)?,
            (None, Some(path)) => parse_subset_file(&group, &read_file(path)?)?,
            (None, None) => return Err(Error::InvalidArgument("give --set or --set-file".into())),
        };
        Ok((group, set))
    }

    fn optional_set(&self, args: &SetArgs) -> Result<(FiniteAbelianGroup, Option<GroupSubset>)> {
        if args.set.is_none() && args.set_file.is_none() {
            return Ok((self.group(&args.group)?, None));
        }
        let (g, s) = self.set(args)?;
        Ok((g, Some(s)))
    }
}

fn pass(report: Value) -> Result<Outcome> {
    Ok(Outcome {
        report,
        passed: true,
    })
}

fn density(ctx: &Ctx, a: &DensityArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(&a.set)?;
    let mut report = json!({ "group": group.to_string(), "set_size": set.size() });
    let value = if let Some(s) = &a.system {
        let system = parse_system(s)?;
        report["system"] = json!(system.to_string());
        eval_density(&system, &set, &ctx.config)?
    } else {
        let q: QuantumSystem = a.quantum.as_deref().unwrap_or_default().parse()?;
        report["quantum"] = json!(q.to_string());
        eval_quantum(&q, &set, &ctx.config)?
    };
    report["density"] = rational(&value);
    pass(report)
}

fn energy(ctx: &Ctx, a: &SetArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(a)?;
    let exact = set.additive_energy();
    let spectral = fourier::energy_fourier(&set);
    let exact_f = crate::json::decimal(&exact).parse::<f64>().unwrap_or(f64::NAN);
    pass(json!({
        "group": group.to_string(),
        "set_size": set.size(),
        "density": rational(&set.density()),
        "raw": set.additive_energy_raw().to_string(),
        "energy": rational(&exact),
        "fourier": { "value": spectral, "approximate": true, "agrees": (spectral - exact_f).abs() <= 1e-9 },
    }))
}

fn sumset(ctx: &Ctx, a: &SumsetArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(&a.set)?;
    let (label, result) = match (a.r, a.s) {
        (Some(r), Some(s)) => (format!("{r}A - {s}A"), set.signed_iterated_sumset(r, s)?),
        _ => {
            let other = match &a.other {
                Some(text) => parse_subset(&group, text)?,
                None => set.clone(),
            };
            ("A + B".to_string(), set.sumset(&other)?)
        }
    };
    pass(json!({
        "group": group.to_string(),
        "operation": label,
        "size": result.size(),
        "density": rational(&result.density()),
        "elements": residues(&result),
    }))
}

fn doubling(ctx: &Ctx, a: &SetArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(a)?;
    let sigma = set.doubling_constant()?;
    pass(json!({
        "group": group.to_string(),
        "set_size": set.size(),
        "sumset_size": set.sumset(&set)?.size(),
        "doubling": rational(&sigma),
    }))
}

fn stabilizer(ctx: &Ctx, a: &SetArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(a)?;
    let h = set.stabilizer();
    pass(json!({
        "group": group.to_string(),
        "set_size": set.size(),
        "size": h.size(),
        "elements": residues(&h),
    }))
}

fn single_check(check: &InequalityCheck, instance: &str, sets: &[&GroupSubset]) -> Outcome {
    let witnesses: Vec<Vec<Vec<u64>>> = if check.holds {
        vec![]
    } else {
        sets.iter().map(|s| residues(s)).collect()
    };
    Outcome {
        passed: check.holds,
        report: json!({
            "check": check.check,
            "instance": instance,
            "lhs": rational(&check.lhs),
            "holds": check.holds,
            "witnesses": witnesses,
        }),
    }
}

fn check(ctx: &Ctx, a: &CheckArgs) -> Result<Outcome> {
    let (group, set) = ctx.optional_set(&a.set)?;
    let quantum: Option<QuantumSystem> = a.quantum.as_deref().map(str::parse).transpose()?;
    let cfg = ctx.config;
    let quantum_check = |s: &GroupSubset| -> Result<InequalityCheck> {
        let q = quantum.as_ref().expect("quantum check");
        let v = eval_quantum(q, s, &cfg)?;
        Ok(InequalityCheck {
            check: "quantum",
            holds: v >= Rational::from_integer(0.into()),
            lhs: v,
        })
    };

    if a.exhaustive {
        let report = if a.energy_bound {
            bounds::sweep_subsets("energy_bound", &group, |s| {
                if s.is_empty() {
                    return Ok(None);
                }
                bounds::check_energy_bound(s).map(Some)
            })?
        } else if a.energy_doubling {
            bounds::sweep_subsets("energy_doubling", &group, |s| bounds::check_energy_doubling(s).map(Some))?
        } else if a.kneser {
            bounds::sweep_pairs("kneser", &group, |x, y| bounds::check_kneser(x, y).map(Some))?
        } else if a.plunnecke {
            bounds::sweep_pairs("plunnecke_ruzsa", &group, |x, y| {
                if x.is_empty() {
                    return Ok(None);
                }
                bounds::check_plunnecke_ruzsa(x, y, a.r, a.s).map(Some)
            })?
        } else {
            bounds::sweep_subsets("quantum", &group, |s| quantum_check(s).map(Some))?
        };
        let mut value = to_value(&report);
        if a.plunnecke {
            value["r"] = json!(a.r);
            value["s"] = json!(a.s);
        }
        if let Some(q) = &quantum {
            value["quantum"] = json!(q.to_string());
        }
        return Ok(Outcome {
            passed: report.passes(),
            report: value,
        });
    }

    let set = set.ok_or_else(|| Error::InvalidArgument("give --set, --set-file or --exhaustive".into()))?;
    let other = match &a.other {
        Some(text) => parse_subset(&group, text)?,
        None => set.clone(),
    };
    let instance = group.to_string();
    let outcome = if a.energy_bound {
        single_check(&bounds::check_energy_bound(&set)?, &instance, &[&set])
    } else if a.energy_doubling {
        single_check(&bounds::check_energy_doubling(&set)?, &instance, &[&set])
    } else if a.kneser {
        single_check(&bounds::check_kneser(&set, &other)?, &instance, &[&set, &other])
    } else if a.plunnecke {
        let mut o = single_check(
            &bounds::check_plunnecke_ruzsa(&set, &other, a.r, a.s)?,
            &instance,
            &[&set, &other],
        );
        o.report["r"] = json!(a.r);
        o.report["s"] = json!(a.s);
        o
    } else {
        let mut o = single_check(&quantum_check(&set)?, &instance, &[&set]);
        o.report["quantum"] = json!(quantum.as_ref().map(ToString::to_string));
        o
    };
    Ok(outcome)
}

fn reduce(ctx: &Ctx, cmd: &ReduceCommand) -> Result<Outcome> {
    match cmd {
        ReduceCommand::Bundle { q, k } => {
            let bundle = reduction::build_psi(&parse_poly(q)?, *k)?;
            pass(bundle.to_json())
        }
        ReduceCommand::Qstar { q, k } => {
            let q = parse_poly(q)?;
            let qs = transform_qstar(&q, *k)?;
            pass(json!({ "q": q.to_string(), "k": k, "qstar": qs.to_string() }))
        }
        ReduceCommand::PFromQ { q } => {
            let q = parse_poly(q)?;
            pass(json!({ "q": q.to_string(), "p": transform_p_from_q(&q).to_string() }))
        }
        ReduceCommand::QFromP { p } => {
            let p = parse_poly(p)?;
            let r = transform_q_from_p(&p)?;
            pass(json!({
                "p": p.to_string(),
                "q": r.q.to_string(),
                "m": r.m.to_string(),
                "first_derivative_bound": r.first_derivative_bound.to_string(),
                "second_derivative_bound": r.second_derivative_bound.to_string(),
                "m_grid_estimate": rational(&r.m_grid_estimate),
            }))
        }
        ReduceCommand::Eval { q, k, bundle, set } => {
            let bundle = match bundle {
                Some(path) => {
                    let text = read_file(path)?;
                    let value: Value = serde_json::from_str(&text)
                        .map_err(|e| Error::InvalidArgument(format!("bundle JSON: {e}")))?;
                    ReductionBundle::from_json(&value)?
                }
                None => {
                    let q = parse_poly(q.as_deref().unwrap_or_default())?;
                    reduction::build_psi(&q, k.unwrap_or_default())?
                }
            };
            let (group, a) = ctx.set(set)?;
            let independent = bundle.eval(&a, &ctx.config)?;
            let shared = bundle.eval_shared_g(&a, &ctx.config)?;
            pass(json!({
                "group": group.to_string(),
                "set_size": a.size(),
                "k": bundle.k,
                "q": bundle.q.to_string(),
                "qstar": bundle.qstar.to_string(),
                "independent": rational(&independent),
                "shared_g": to_value(&shared),
            }))
        }
    }
}

fn witness(ctx: &Ctx, a: &WitnessArgs) -> Result<Outcome> {
    let spec = reduction::build_witness(a.k, &a.n, ctx.max_order)?;
    if let Some(path) = &a.subset_out {
        write_file(path, &format_subset_file(&spec.subset))?;
    }
    let mut report = spec.to_json();
    report["order"] = json!(spec.group.order());
    report["subset_size"] = json!(spec.subset.size());
    pass(report)
}

fn verify(ctx: &Ctx, cmd: &VerifyCommand) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Pinpoint { k, max_k } => {
            let r = reduction::verify_pinpoint(*k, *max_k)?;
            Ok(Outcome {
                passed: r.passes(),
                report: to_value(&r),
            })
        }
        VerifyCommand::Witness { k, n, cross_check } => {
            let spec = reduction::build_witness(*k, n, ctx.max_order)?;
            let r = reduction::verify_witness(&spec, *cross_check, &ctx.config)?;
            Ok(Outcome {
                passed: r.passes(),
                report: to_value(&r),
            })
        }
        VerifyCommand::Homdensity { group, k, pairs, seed } => {
            let g = ctx.group(group)?;
            let r = reduction::verify_homdensity_random(&g, *k, *pairs, *seed, &ctx.config)?;
            Ok(Outcome {
                passed: r.passes(),
                report: to_value(&r),
            })
        }
        VerifyCommand::Delta { step, max_t } => {
            let step = parse_rational(step)?;
            let claims = bounds::verify_delta_derivative_claims(&step, *max_t)?;
            let zeros: Vec<u64> = (1..=50u64)
                .filter(|&n| {
                    bounds::delta(&crate::ratio(1, n as i64)).map(|d| d != Rational::from_integer(0.into())).unwrap_or(true)
                })
                .collect();
            let mut report = to_value(&claims);
            report["delta_zero_at_reciprocals"] = json!({ "checked": 50, "failures": zeros });
            Ok(Outcome {
                passed: claims.holds && zeros.is_empty(),
                report,
            })
        }
        VerifyCommand::Bollobas { t_max } => {
            let mut value_failures = Vec::new();
            let mut continuity_failures = Vec::new();
            for t in 1..=*t_max {
                let x = crate::ratio(1, 1) - crate::ratio(1, t as i64);
                if bounds::bollobas_h(&x)? != bounds::bollobas_breakpoint_value(t) {
                    value_failures.push(t);
                }
                if !bounds::BOLLOBAS_H.continuity_at(t).2 {
                    continuity_failures.push(t);
                }
            }
            Ok(Outcome {
                passed: value_failures.is_empty() && continuity_failures.is_empty(),
                report: json!({
                    "checked": t_max,
                    "breakpoint_value_failures": value_failures,
                    "continuity_failures": continuity_failures,
                }),
            })
        }
    }
}

fn estimate(ctx: &Ctx, a: &EstimateArgs) -> Result<Outcome> {
    let (group, set) = ctx.set(&a.set)?;
    let system = parse_system(&a.system)?;
    let e = estimate_density(&system, &set, a.samples, a.seed)?;
    let mut report = json!({
        "group": group.to_string(),
        "system": system.to_string(),
        "samples": e.samples,
        "seed": a.seed,
        "hits": e.hits,
        "estimate": e.estimate,
        "radius": e.radius,
        "approximate": true,
    });
    if a.exact {
        let exact = eval_density(&system, &set, &ctx.config)?;
        let exact_f: f64 = crate::json::decimal(&exact).parse().unwrap_or(f64::NAN);
        report["exact"] = rational(&exact);
        report["within_radius"] = json!((e.estimate - exact_f).abs() <= e.radius);
    }
    pass(report)
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Density(_) => "density".into(),
        Command::Energy(_) => "energy".into(),
        Command::Sumset(_) => "sumset".into(),
        Command::Doubling(_) => "doubling".into(),
        Command::Stabilizer(_) => "stabilizer".into(),
        Command::Check(_) => "check".into(),
        Command::Reduce(r) => format!(
            "reduce {}",
            match r {
                ReduceCommand::Bundle { .. } => "bundle",
                ReduceCommand::Qstar { .. } => "qstar",
                ReduceCommand::PFromQ { .. } => "p-from-q",
                ReduceCommand::QFromP { .. } => "q-from-p",
                ReduceCommand::Eval { .. } => "eval",
            }
        ),
        Command::Witness(_) => "witness".into(),
        Command::Verify(v) => format!(
            "verify {}",
            match v {
                VerifyCommand::Pinpoint { .. } => "pinpoint",
                VerifyCommand::Witness { .. } => "witness",
                VerifyCommand::Homdensity { .. } => "homdensity",
                VerifyCommand::Delta { .. } => "delta",
                VerifyCommand::Bollobas { .. } => "bollobas",
            }
        ),
        Command::Estimate(_) => "estimate".into(),
    }
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Density(a) => density(ctx, a),
        Command::Energy(a) => energy(ctx, a),
        Command::Sumset(a) => sumset(ctx, a),
        Command::Doubling(a) => doubling(ctx, a),
        Command::Stabilizer(a) => stabilizer(ctx, a),
        Command::Check(a) => check(ctx, a),
        Command::Reduce(r) => reduce(ctx, r),
        Command::Witness(a) => witness(ctx, a),
        Command::Verify(v) => verify(ctx, v),
        Command::Estimate(a) => estimate(ctx, a),
    }
}

/// Runs a parsed command. Errors become an `error` report; the exit code is
/// returned alongside.
pub fn run(cli: &Cli) -> (Value, i32) {
    let ctx = Ctx {
        max_order: cli.max_order,
        config: EvalConfig {
            work_budget: cli.work_budget,
        },
    };
    let name = command_name(&cli.command);
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(&ctx, &cli.command))),
        None => dispatch(&ctx, &cli.command),
    };
    let (mut report, code) = match result {
        Ok(o) => {
            let code = if o.passed { EXIT_OK } else { EXIT_VIOLATION };
            let mut r = o.report;
            if r.is_object() {
                r["passed"] = json!(o.passed);
            }
            (r, code)
        }
        Err(e) => {
            let code = if e.is_resource_cap() { EXIT_RESOURCE } else { EXIT_USAGE };
            (json!({ "error": { "code": e.code(), "message": e.to_string() } }), code)
        }
    };
    report["schema"] = json!(SCHEMA);
    report["command"] = json!(name);
    (report, code)
}

/// Entry point for the binary: parses `args`, runs, writes the report, and
/// returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = run(&cli);
    let mut text = serde_json::to_string_pretty(&report).expect("json");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(e.to_string())),
    };
    if let Err(e) = written {
        eprintln!("addforms: {e}");
        return EXIT_USAGE;
    }
    if let Some(err) = report.get("error") {
        eprintln!("addforms: {}", err["message"].as_str().unwrap_or("error"));
    }
    code
}
