use std::io::Write;
use std::path::Path;

use netgame_core::closed_form::{verify_closed_forms_with, AlphaChoice, CheckStatus, ClosedForms};
use netgame_core::dynamics::{is_pairwise_stable, run_to_stability, RunSummary, SimulationTrace};
use netgame_core::katz::scaled_component_katz;
use netgame_core::payoff::payoff_vector;
use rayon::prelude::*;

use crate::cli::{SimulateArgs, StabilityArgs, SweepArgs, VerifyArgs};
use crate::config::{EventLog, FlagOverrides, GraphFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{write_atomic, Table};
use crate::{edgelist, export, ranges};

/// What a successful command reports through its exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Converged, stable, or all checks passed.
    Success,
    /// Non-convergence, an unstable graph, or a failed check.
    Negative,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::Negative
        }
    }
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| CliError::io("<stdout>", e))
}

const METRICS_HEADER: [&str; 15] = [
    "seed",
    "n",
    "alpha",
    "converged",
    "stable",
    "proposals",
    "accepted",
    "edges",
    "average_degree",
    "total_payoff",
    "giant_fraction",
    "max_degree",
    "component_sizes",
    "incentivized_mean_degree",
    "incentivized_mean_payoff",
];

fn metrics_row(cfg: &RunConfig, summary: &RunSummary, stable: bool) -> Vec<String> {
    let hubs = cfg.incentivized_players();
    let (hub_degree, hub_payoff) = if hubs.is_empty() {
        (String::new(), String::new())
    } else {
        (
            summary.mean_degree_of(&hubs).to_string(),
            summary.mean_payoff_of(&hubs).to_string(),
        )
    };
    let sizes: Vec<String> = summary.component_sizes.iter().map(usize::to_string).collect();
    vec![
        summary.seed.to_string(),
        cfg.n.to_string(),
        cfg.alpha.to_string(),
        summary.converged.to_string(),
        stable.to_string(),
        summary.proposals.to_string(),
        summary.accepted.to_string(),
        summary.edges.to_string(),
        summary.average_degree.to_string(),
        summary.total_payoff.to_string(),
        summary.giant_fraction.to_string(),
        summary.max_degree.to_string(),
        sizes.join(";"),
        hub_degree,
        hub_payoff,
    ]
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<Outcome> {
    let flags = FlagOverrides {
        out_dir: args.out.out_dir.clone(),
        formats: args.format.clone(),
        event_log: args.event_log,
        ..args.game.flags()
    };
    let cfg = RunConfig::resolve(args.game.base.experiment, args.game.base.config.as_deref(), &flags)?;
    if args.seeds == 0 {
        return Err(CliError::config("seeds", "must be at least 1"));
    }
    for note in cfg.notes() {
        say(out, format_args!("{note}"))?;
    }
    let root = cfg.output_dir();
    let seeds: Vec<u64> = (0..args.seeds).map(|k| cfg.seed.wrapping_add(k)).collect();
    let mut all_converged = true;
    let mut rows = Vec::new();
    for &seed in &seeds {
        let dir = if seeds.len() == 1 { root.clone() } else { root.join(format!("seed-{seed}")) };
        let (summary, stable) = simulate_one(&cfg, seed, &dir)?;
        all_converged &= summary.converged;
        say(
            out,
            format_args!(
                "seed {seed}: {} after {} proposals, {} edges, average degree {:.4}, total payoff {:.4}, components {:?} -> {}",
                if summary.converged { "converged" } else { "not converged" },
                summary.proposals,
                summary.edges,
                summary.average_degree,
                summary.total_payoff,
                summary.component_sizes,
                dir.display()
            ),
        )?;
        rows.push(metrics_row(&cfg, &summary, stable));
    }
    if seeds.len() > 1 {
        let mut table = Table::new(&cfg.echo(cfg.seed), &METRICS_HEADER);
        for row in rows {
            table.row(row);
        }
        write_atomic(&root, "metrics.csv", &table.into_bytes())?;
    }
    Ok(Outcome::from_bool(all_converged))
}

fn simulate_one(cfg: &RunConfig, seed: u64, dir: &Path) -> Result<(RunSummary, bool)> {
    let game = cfg.game()?;
    let trace = run_to_stability(&game, &cfg.dynamics_for_seed(seed)?)?;
    let summary = trace.summary()?;
    let comments = cfg.echo(seed);
    let g = &trace.final_graph;

    for format in &cfg.formats {
        let (name, text) = match format {
            GraphFormat::Edgelist => ("graph.edgelist", edgelist::render(g, &comments)),
            GraphFormat::Dot => ("graph.dot", export::dot(g, &comments)),
            GraphFormat::Graphml => ("graph.graphml", export::graphml(g, &comments)),
        };
        write_atomic(dir, name, text.as_bytes())?;
    }

    let centrality = scaled_component_katz(g, game.alpha())?;
    let payoffs = payoff_vector(g, &game)?;
    let mut table = Table::new(
        &comments,
        &[
            "player",
            "reward",
            "cost",
            "degree",
            "component_size",
            "raw_katz",
            "scaled_katz",
            "benefit",
            "link_cost",
            "payoff",
        ],
    );
    for v in 1..=g.order() {
        table.row([
            v.to_string(),
            game.reward(v).to_string(),
            game.cost(v).to_string(),
            g.degrees()[v - 1].to_string(),
            centrality.components.size_of(v).to_string(),
            centrality.raw_of(v).to_string(),
            centrality.scaled_of(v).to_string(),
            payoffs.benefit[v - 1].to_string(),
            payoffs.cost[v - 1].to_string(),
            payoffs.payoff[v - 1].to_string(),
        ]);
    }
    write_atomic(dir, "payoffs.csv", &table.into_bytes())?;

    let stable = trace.certificate.stable;
    let mut metrics = Table::new(&comments, &METRICS_HEADER);
    metrics.row(metrics_row(cfg, &summary, stable));
    write_atomic(dir, "metrics.csv", &metrics.into_bytes())?;

    if cfg.event_log != EventLog::None {
        write_atomic(dir, "events.log", event_log(&trace, &summary, &comments, cfg.event_log).as_bytes())?;
    }

    let hubs = cfg.incentivized_players();
    if !hubs.is_empty() {
        let mut comments = comments.clone();
        comments.push(format!("population_mean_degree = {}", summary.average_degree));
        comments.push(format!("incentivized_mean_degree = {}", summary.mean_degree_of(&hubs)));
        let mut table = Table::new(&comments, &["player", "cost", "degree", "payoff"]);
        for &v in &hubs {
            table.row([
                v.to_string(),
                game.cost(v).to_string(),
                summary.degrees[v - 1].to_string(),
                summary.payoffs[v - 1].to_string(),
            ]);
        }
        write_atomic(dir, "hubs.csv", &table.into_bytes())?;
    }
    Ok((summary, stable))
}

/// One whitespace-separated line per proposal, then a `summary` record.
fn event_log(trace: &SimulationTrace, summary: &RunSummary, comments: &[String], which: EventLog) -> String {
    use std::fmt::Write as _;
    let mut text = String::new();
    for c in comments {
        let _ = writeln!(text, "# {c}");
    }
    let _ = writeln!(text, "# events = {}", which.name());
    text.push_str("index i j action delta_i delta_j\n");
    for e in &trace.events {
        if which == EventLog::Accepted && !e.action.is_accepted() {
            continue;
        }
        let _ = writeln!(
            text,
            "{} {} {} {} {} {}",
            e.index,
            e.pair.0,
            e.pair.1,
            e.action.as_str(),
            e.deltas.0,
            e.deltas.1
        );
    }
    let _ = writeln!(
        text,
        "summary converged={} stable={} proposals={} accepted={} checks={} edges={} average_degree={} total_payoff={}",
        trace.converged,
        trace.certificate.stable,
        summary.proposals,
        summary.accepted,
        trace.checks,
        summary.edges,
        summary.average_degree,
        summary.total_payoff
    );
    text
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    verify_with(args, &ClosedForms::default(), out)
}

/// [`verify`] against an explicit formula set, so a broken formula can be
/// shown to fail the audit.
pub fn verify_with(args: &VerifyArgs, forms: &ClosedForms, out: &mut dyn Write) -> Result<Outcome> {
    let ns = ranges::int_list("n", &args.n)?;
    let mut alphas: Vec<AlphaChoice> = ranges::float_list("alpha-scale", &args.alpha_scale)?
        .into_iter()
        .map(AlphaChoice::PerDegree)
        .collect();
    if let Some(fixed) = &args.alpha {
        alphas.extend(ranges::float_list("alpha", fixed)?.into_iter().map(AlphaChoice::Fixed));
    }
    let mut report = netgame_core::VerificationReport::default();
    for n in ns {
        let n = n as usize;
        let part = verify_closed_forms_with(forms, n..=n, &alphas);
        report.rows.extend(part.rows);
        report.skipped.extend(part.skipped);
    }
    if report.rows.is_empty() {
        return Err(CliError::config("grid", "no feasible (n, alpha) point"));
    }

    let mut table = Table::new(
        &[format!("tolerance = {}", netgame_core::closed_form::VERIFY_TOLERANCE)],
        &["check", "n", "alpha", "closed_form", "numerical", "abs_error", "status", "reason"],
    );
    for r in &report.rows {
        let status = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Informational => "info",
        };
        table.row([
            r.check.to_string(),
            r.n.to_string(),
            r.alpha.to_string(),
            r.closed_form.to_string(),
            r.numerical.to_string(),
            r.abs_error.to_string(),
            status.to_string(),
            String::new(),
        ]);
    }
    for s in &report.skipped {
        table.row([
            s.check.to_string(),
            s.n.to_string(),
            s.alpha.to_string(),
            String::new(),
            String::new(),
            String::new(),
            "skipped".to_string(),
            s.reason.to_string(),
        ]);
    }
    let path = write_atomic(&RunConfig::default_output_dir(args.out.out_dir.clone()), "verification.csv", &table.into_bytes())?;

    let count = |status| report.rows.iter().filter(|r| r.status == status).count();
    say(
        out,
        format_args!(
            "{} pass, {} fail, {} informational, {} skipped -> {}",
            count(CheckStatus::Pass),
            count(CheckStatus::Fail),
            count(CheckStatus::Informational),
            report.skipped.len(),
            path.display()
        ),
    )?;
    for r in report.failures() {
        say(
            out,
            format_args!(
                "FAIL {} n={} alpha={}: closed form {} vs numerical {} (error {:e})",
                r.check, r.n, r.alpha, r.closed_form, r.numerical, r.abs_error
            ),
        )?;
    }
    Ok(Outcome::from_bool(report.all_passed()))
}

pub fn stability_check(args: &StabilityArgs, out: &mut dyn Write) -> Result<Outcome> {
    let g = edgelist::read(&args.graph)?;
    let mut cfg = RunConfig::layered(args.game.base.experiment, args.game.base.config.as_deref(), &args.game.flags())?;
    if args.game.n.is_some_and(|n| n != g.order()) {
        return Err(CliError::config(
            "n",
            format!("--n {} disagrees with the {} players in {}", cfg.n, g.order(), args.graph.display()),
        ));
    }
    cfg.n = g.order();
    let game = cfg.game()?;
    let cert = is_pairwise_stable(&g, &game)?;
    match cert.witness {
        None => say(out, format_args!("stable"))?,
        Some(w) => say(
            out,
            format_args!(
                "unstable: {} ({}, {}) with deltas ({}, {})",
                w.mv.as_str(),
                w.pair.0,
                w.pair.1,
                w.deltas.0,
                w.deltas.1
            ),
        )?,
    }
    for note in cfg.notes() {
        say(out, format_args!("{note}"))?;
    }
    Ok(Outcome::from_bool(cert.stable))
}

#[derive(Clone, Debug)]
struct SweepPoint {
    cfg: RunConfig,
    seed: u64,
}

const SWEEP_HEADER: [&str; 14] = [
    "n",
    "alpha",
    "cost",
    "zeta",
    "incentivized_count",
    "seed",
    "converged",
    "proposals",
    "average_degree",
    "total_payoff",
    "giant_fraction",
    "max_degree",
    "incentivized_mean_degree",
    "incentivized_mean_payoff",
];

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

pub fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<Outcome> {
    let base = RunConfig::layered(
        args.base.experiment,
        args.base.config.as_deref(),
        &FlagOverrides {
            out_dir: args.out.out_dir.clone(),
            ..args.base.flags()
        },
    )?;
    if args.seeds == 0 {
        return Err(CliError::config("seeds", "must be at least 1"));
    }
    let ns: Vec<usize> = match &args.n {
        Some(text) => ranges::int_list("n", text)?.into_iter().map(|n| n as usize).collect(),
        None => vec![base.n],
    };
    let floats = |flag: &str, text: &Option<String>, default: f64| -> Result<Vec<f64>> {
        text.as_deref().map_or(Ok(vec![default]), |t| ranges::float_list(flag, t))
    };
    let alphas = floats("alpha", &args.alpha, base.alpha)?;
    let costs = floats("gamma", &args.gamma.clone().or(args.delta.clone()), base.cost)?;
    let zetas: Vec<Option<f64>> = match &args.zeta {
        Some(text) => {
            if base.incentivized_count == 0 {
                return Err(CliError::config("zeta", "a zeta sweep needs --incentivized-count > 0"));
            }
            ranges::float_list("zeta", text)?.into_iter().map(Some).collect()
        }
        None => vec![base.incentivized_cost],
    };

    let mut points = Vec::new();
    for &n in &ns {
        for &alpha in &alphas {
            for &cost in &costs {
                for &zeta in &zetas {
                    let cfg = RunConfig {
                        n,
                        alpha,
                        cost,
                        incentivized_cost: zeta,
                        ..base.clone()
                    };
                    cfg.validate()?;
                    points.push(cfg);
                }
            }
        }
    }
    let jobs: Vec<SweepPoint> = points
        .iter()
        .flat_map(|cfg| {
            (0..args.seeds).map(|k| SweepPoint {
                cfg: cfg.clone(),
                seed: cfg.seed.wrapping_add(k),
            })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    let results: Vec<RunSummary> = pool.install(|| {
        jobs.par_iter()
            .map(|job| -> Result<RunSummary> {
                let trace = run_to_stability(&job.cfg.game()?, &job.cfg.dynamics_for_seed(job.seed)?)?;
                Ok(trace.summary()?)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut table = Table::new(&base.echo(base.seed), &SWEEP_HEADER);
    for (job, s) in jobs.iter().zip(&results) {
        let hubs = job.cfg.incentivized_players();
        let opt = |f: f64| if hubs.is_empty() { String::new() } else { f.to_string() };
        table.row([
            job.cfg.n.to_string(),
            job.cfg.alpha.to_string(),
            job.cfg.cost.to_string(),
            job.cfg.incentivized_cost.map(|z| z.to_string()).unwrap_or_default(),
            job.cfg.incentivized_count.to_string(),
            s.seed.to_string(),
            s.converged.to_string(),
            s.proposals.to_string(),
            s.average_degree.to_string(),
            s.total_payoff.to_string(),
            s.giant_fraction.to_string(),
            s.max_degree.to_string(),
            opt(s.mean_degree_of(&hubs)),
            opt(s.mean_payoff_of(&hubs)),
        ]);
    }
    let root = base.output_dir();
    let sweep_path = write_atomic(&root, "sweep.csv", &table.into_bytes())?;

    // Medians per parameter point; jobs are grouped by point in order.
    let per_point = args.seeds as usize;
    let mut trend_rows = Vec::new();
    for (cfg, chunk) in points.iter().zip(results.chunks(per_point)) {
        let hubs = cfg.incentivized_players();
        let mut totals: Vec<f64> = chunk.iter().map(|s| s.total_payoff).collect();
        let mut degrees: Vec<f64> = chunk.iter().map(|s| s.average_degree).collect();
        let mut hub_payoffs: Vec<f64> = chunk.iter().map(|s| s.mean_payoff_of(&hubs)).collect();
        let mut hub_degrees: Vec<f64> = chunk.iter().map(|s| s.mean_degree_of(&hubs)).collect();
        let converged = chunk.iter().filter(|s| s.converged).count();
        trend_rows.push((
            cfg,
            converged,
            median(&mut totals),
            median(&mut degrees),
            (!hubs.is_empty()).then(|| (median(&mut hub_payoffs), median(&mut hub_degrees))),
        ));
    }

    let mut trend_notes = Vec::new();
    if zetas.len() > 1 {
        for group in trend_rows.chunks(zetas.len()) {
            let payoffs: Vec<f64> = group.iter().filter_map(|r| r.4.map(|h| h.0)).collect();
            let direction = if payoffs.windows(2).all(|w| w[1] < w[0]) {
                "decreasing"
            } else if payoffs.windows(2).all(|w| w[1] > w[0]) {
                "increasing"
            } else {
                "not monotone"
            };
            let c = group[0].0;
            let note = format!(
                "trend n={} alpha={} cost={}: incentivized median payoff {direction} in zeta ({})",
                c.n,
                c.alpha,
                c.cost,
                payoffs.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>().join(", ")
            );
            say(out, format_args!("{note}"))?;
            trend_notes.push(note);
        }
    }

    let mut comments = base.echo(base.seed);
    comments.extend(trend_notes);
    let mut trend = Table::new(
        &comments,
        &[
            "n",
            "alpha",
            "cost",
            "zeta",
            "runs",
            "converged",
            "median_total_payoff",
            "median_average_degree",
            "median_incentivized_payoff",
            "median_incentivized_degree",
        ],
    );
    for (cfg, converged, total, degree, hubs) in &trend_rows {
        trend.row([
            cfg.n.to_string(),
            cfg.alpha.to_string(),
            cfg.cost.to_string(),
            cfg.incentivized_cost.map(|z| z.to_string()).unwrap_or_default(),
            per_point.to_string(),
            converged.to_string(),
            total.to_string(),
            degree.to_string(),
            hubs.map(|h| h.0.to_string()).unwrap_or_default(),
            hubs.map(|h| h.1.to_string()).unwrap_or_default(),
        ]);
    }
    write_atomic(&root, "trend.csv", &trend.into_bytes())?;
    let all_converged = results.iter().all(|s| s.converged);
    say(
        out,
        format_args!(
            "{} runs over {} points, {} converged -> {}",
            results.len(),
            points.len(),
            results.iter().filter(|s| s.converged).count(),
            sweep_path.display()
        ),
    )?;
    Ok(Outcome::from_bool(all_converged))
}
