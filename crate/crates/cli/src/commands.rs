use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use pulseforge::grape::{self, io as pulse_io, Ensemble, GrapeConfig};
use pulseforge::quantum::NV_13C;
use pulseforge::scan::{
    self, export_csv, plot_script, ErrorGrid, ScanResult, Scheme, GOOD_FIDELITY,
};
use pulseforge::sequences::{bb1_sequence, corpse_sequence, sequential_gate, sequential_segments};
use pulseforge::ErrorKind;

use crate::args::{CompareArgs, GrapeArgs, InfoArgs, OutputArgs, ScanArgs};
use crate::error::{CliError, CliResult};

/// Trained-range minimum fidelity below which `grape` reports failure.
pub const CONVERGENCE_FIDELITY: f64 = 0.9;

/// A scheme plus its total duration in units of 1/Λ.
struct Entry {
    scheme: Scheme,
    duration: f64,
}

fn builtin(name: &str) -> Option<Entry> {
    let seq = match name {
        "sequential" => sequential_segments(),
        "bb1" => bb1_sequence(),
        "corpse" => corpse_sequence(),
        _ => return None,
    };
    let duration = seq.duration();
    Some(Entry {
        scheme: Scheme::from_sequence(seq),
        duration,
    })
}

fn grape_entry(label: &str, path: &Path) -> CliResult<Entry> {
    let cp = pulse_io::read_checkpoint(path).map_err(|e| {
        CliError::io(format!("cannot load pulse file {}: {e}", path.display()))
    })?;
    Ok(Entry {
        duration: cp.schedule.duration(),
        scheme: grape::scheme(label, cp.schedule),
    })
}

fn parse_schemes(list: &str) -> CliResult<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let entry = match item.split_once(':') {
            Some(("grape", file)) if !file.is_empty() => grape_entry("grape", Path::new(file))?,
            _ => builtin(item).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown scheme `{item}` (expected sequential, bb1, corpse or grape:<file>)"
                ))
            })?,
        };
        if entries.iter().any(|e| e.scheme.label() == entry.scheme.label()) {
            return Err(CliError::usage(format!("scheme `{}` listed twice", entry.scheme.label())));
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(CliError::usage("no schemes given"));
    }
    Ok(entries)
}

fn out_dir(o: &OutputArgs) -> CliResult<&Path> {
    std::fs::create_dir_all(&o.out).map_err(|e| {
        CliError::io(format!("cannot create output directory {}: {e}", o.out.display()))
    })?;
    Ok(&o.out)
}

fn out_path(o: &OutputArgs, default_prefix: &str, suffix: &str) -> CliResult<PathBuf> {
    let prefix = o.prefix.as_deref().unwrap_or(default_prefix);
    Ok(out_dir(o)?.join(format!("{prefix}_{suffix}")))
}

fn write_scan(result: &ScanResult, csv: &Path, kind: ErrorKind) -> CliResult<PathBuf> {
    export_csv(result, csv)?;
    let labels: Vec<&str> = result.labels().collect();
    let gp = csv.with_extension("gp");
    let script = plot_script(&csv.display().to_string(), &labels, kind);
    pulse_io::write_text(&gp, &script)?;
    Ok(gp)
}

fn fmt_window(w: Option<f64>) -> String {
    match w {
        Some(w) => format!("[{:.4}, {:.4}]", -w, w),
        None => "none".to_string(),
    }
}

/// Reports where each scheme falls below the sequential gate for ε > 0.
fn below_sequential_summary(out: &mut dyn Write, result: &ScanResult) -> CliResult<()> {
    if result.get("sequential").is_none() {
        return Ok(());
    }
    for label in result.labels().filter(|l| *l != "sequential") {
        let below: Vec<f64> = result
            .points_below(label, "sequential")
            .into_iter()
            .filter(|&e| e > 0.0)
            .collect();
        if let Some(first) = below.first() {
            writeln!(
                out,
                "{label} below sequential at {} grid points with eps > 0 (first at eps = {first:.4})",
                below.len()
            )?;
        }
    }
    Ok(())
}

pub fn scan(args: &ScanArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind: ErrorKind = args.error.into();
    let entries = parse_schemes(&args.schemes)?;
    let grid = ErrorGrid::uniform(kind, args.grid.grid_min, args.grid.grid_max, args.grid.grid_points)?;
    let schemes: Vec<Scheme> = entries.into_iter().map(|e| e.scheme).collect();
    let result = scan::scan(&schemes, &grid)?;
    let csv = out_path(&args.output, kind.name(), "scan.csv")?;
    let gp = write_scan(&result, &csv, kind)?;

    writeln!(out, "wrote {}", csv.display())?;
    writeln!(out, "wrote {}", gp.display())?;
    writeln!(out, "F >= {GOOD_FIDELITY} window ({kind}):")?;
    for label in result.labels() {
        writeln!(out, "  {label:<12} {}", fmt_window(result.window(label, GOOD_FIDELITY)))?;
    }
    below_sequential_summary(out, &result)
}

fn grape_config(args: &GrapeArgs) -> CliResult<GrapeConfig> {
    let ensemble = match args.error.kind() {
        Some(kind) => Ensemble::uniform(kind, args.train_min, args.train_max, args.train_points)?,
        None => Ensemble::ideal(),
    };
    let defaults = GrapeConfig::default();
    Ok(GrapeConfig {
        duration: args.time,
        bins: args.bins,
        target: sequential_gate(),
        ensemble,
        penalty: args.penalty,
        step_size: args.step_size.unwrap_or(defaults.step_size),
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        seed: args.seed,
        init_scale: args.init_scale.unwrap_or(defaults.init_scale),
        restarts: args.restarts,
        ..defaults
    })
}

pub fn grape(args: &GrapeArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = grape_config(args)?;
    cfg.validate()?;
    let prefix = args.error.name();
    let pulse_path = out_path(&args.output, prefix, "pulse.csv")?;
    let trace_path = out_path(&args.output, prefix, "trace.csv")?;
    let pulse = grape::ascend(&cfg)?;
    pulse_io::write_text(&pulse_path, &pulse_io::checkpoint_csv(&pulse))?;
    pulse_io::write_text(&trace_path, &pulse_io::trace_csv(&pulse.trace))?;

    writeln!(out, "wrote {}", pulse_path.display())?;
    writeln!(out, "wrote {}", trace_path.display())?;
    writeln!(
        out,
        "restart {} of {}: {} iterations, stop {:?}",
        pulse.restart + 1,
        cfg.restarts,
        pulse.iterations,
        pulse.stop
    )?;
    writeln!(out, "performance {:.9} (max 9), objective {:.9}", pulse.performance, pulse.objective)?;
    writeln!(out, "max amplitude {:.6} Λ", pulse.schedule.max_amplitude())?;
    let range = match cfg.ensemble.kind() {
        Some(_) => format!("[{}, {}]", args.train_min, args.train_max),
        None => "no error".to_string(),
    };
    writeln!(
        out,
        "trained-range minimum fidelity {:.6} over {range}",
        pulse.range_min_fidelity
    )?;
    if pulse.range_min_fidelity < CONVERGENCE_FIDELITY {
        return Err(CliError::optimization(format!(
            "optimization did not converge: trained-range minimum fidelity {:.6} < {CONVERGENCE_FIDELITY} \
             after {} restart(s); final performance {:.6}, last restart stopped by {:?}",
            pulse.range_min_fidelity, cfg.restarts, pulse.performance, pulse.stop
        )));
    }
    Ok(())
}

pub fn compare(args: &CompareArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind: ErrorKind = args.error.into();
    let mut entries: Vec<Entry> = ["sequential", "bb1", "corpse"]
        .iter()
        .filter_map(|n| builtin(n))
        .collect();
    if let Some(p) = &args.grape_pulse {
        entries.push(grape_entry("grape", p)?);
    }
    let grid = ErrorGrid::uniform(kind, args.grid_min, args.grid_max, args.grid_points)?;
    let durations: Vec<(String, f64)> = entries
        .iter()
        .map(|e| (e.scheme.label().to_string(), e.duration))
        .collect();
    let schemes: Vec<Scheme> = entries.into_iter().map(|e| e.scheme).collect();
    let result = scan::scan(&schemes, &grid)?;
    let csv = out_path(&args.output, kind.name(), "compare.csv")?;
    let gp = write_scan(&result, &csv, kind)?;

    writeln!(out, "wrote {}", csv.display())?;
    writeln!(out, "wrote {}", gp.display())?;
    writeln!(
        out,
        "mean fidelity ({kind}, {} points on [{}, {}]):",
        grid.len(),
        args.grid_min,
        args.grid_max
    )?;
    let mut means: Vec<(&str, f64)> = result
        .labels()
        .map(|l| (l, result.mean(l).unwrap_or(f64::NAN)))
        .collect();
    for (label, m) in &means {
        writeln!(out, "  {label:<12} {m:.6}")?;
    }
    means.sort_by(|a, b| b.1.total_cmp(&a.1));
    let ranking: Vec<&str> = means.iter().map(|m| m.0).collect();
    writeln!(out, "ranking: {}", ranking.join(" > "))?;

    let t_sq = sequential_segments().duration();
    writeln!(out, "durations:")?;
    writeln!(out, "  {:<12} {:>10} {:>12} {:>10}", "scheme", "T/pi", "T (us)", "T/t_sq")?;
    for (label, t) in &durations {
        writeln!(
            out,
            "  {label:<12} {:>10.3} {:>12.3} {:>10.3}",
            t / PI,
            t / args.lambda * 1e6,
            t / t_sq
        )?;
    }
    below_sequential_summary(out, &result)
}

pub fn info(args: &InfoArgs, out: &mut dyn Write) -> CliResult<()> {
    let c = NV_13C;
    writeln!(out, "basis: |0> = |0>e|0>n, |2> = |1>e|0>n, |3> = |1>e|1>n (index order 0, 2, 3)")?;
    writeln!(out, "transitions: MW |0> <-> |2>, RF |2> <-> |3>")?;
    writeln!(out, "target gate U_sq = U_r U_m:")?;
    writeln!(out, "{}", sequential_gate())?;
    writeln!(out, "U_sq |0> = (|0> - |3>)/sqrt(2)")?;
    writeln!(out, "constants:")?;
    writeln!(out, "  omega_02 = {:.3e} Hz", c.omega_02)?;
    writeln!(out, "  omega_03 = {:.3e} Hz", c.omega_03)?;
    writeln!(out, "  omega_01 = {:.3e} Hz", c.omega_01)?;
    writeln!(out, "units:")?;
    writeln!(out, "  amplitudes in units of Lambda = {:.3e} s^-1", args.lambda)?;
    writeln!(out, "  times in units of 1/Lambda = {:.3e} s", 1.0 / args.lambda)?;
    writeln!(out, "  error fractions: ple eps_f = (T' - T)/T, ore eps_g = delta/Lambda")?;
    writeln!(out, "  fidelity F = |Tr(Ua^dag Ui) / Tr(Ui^dag Ui)|^(1/2)")?;
    Ok(())
}
