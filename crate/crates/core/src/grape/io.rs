//! Pulse, checkpoint and convergence-trace files.
//!
//! The pulse table carries nine significant digits. A checkpoint appends a
//! `#`-prefixed `key=value` block holding the configuration snapshot and the
//! raw controls in shortest round-trip form, so importing one restores the
//! schedule bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::ascent::{GrapeConfig, OptimizedPulse};
use super::controls::{schedule_to_pulses, BinPulse, ControlSchedule};
use super::objective::Ensemble;
use crate::numfmt::sig9;
use crate::quantum::{Matrix3, Unitary, C64};
use crate::sequences::ErrorKind;
use crate::{Error, Result};

pub const PULSE_HEADER: &str = "bin,t_start,u_m,theta_m_over_pi,u_r,theta_r_over_pi";
pub const TRACE_HEADER: &str = "iteration,objective";

const CONTROL_KEY: &str = "u";

pub fn pulse_csv(s: &ControlSchedule) -> String {
    let dt = s.dt();
    let mut out = String::with_capacity(64 * (s.bins() + 1));
    out.push_str(PULSE_HEADER);
    out.push('\n');
    for (j, p) in schedule_to_pulses(s).iter().enumerate() {
        let _ = writeln!(
            out,
            "{j},{},{},{},{},{}",
            sig9(j as f64 * dt),
            sig9(p.mw_amplitude),
            sig9(p.mw_phase / std::f64::consts::PI),
            sig9(p.rf_amplitude),
            sig9(p.rf_phase / std::f64::consts::PI),
        );
    }
    out
}

/// Configuration snapshot as ordered `key=value` pairs.
pub fn config_entries(cfg: &GrapeConfig) -> Vec<(String, String)> {
    let error = cfg.ensemble.kind().map_or("none", ErrorKind::name);
    let train = cfg
        .ensemble
        .fractions()
        .iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",");
    let target = cfg
        .target
        .matrix()
        .0
        .iter()
        .flatten()
        .flat_map(|z| [z.re, z.im])
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",");
    [
        ("duration", format!("{:?}", cfg.duration)),
        ("bins", cfg.bins.to_string()),
        ("error", error.to_string()),
        ("train", train),
        ("penalty", format!("{:?}", cfg.penalty)),
        ("step_size", format!("{:?}", cfg.step_size)),
        ("max_iterations", cfg.max_iterations.to_string()),
        ("tolerance", format!("{:?}", cfg.tolerance)),
        ("stall_window", cfg.stall_window.to_string()),
        ("seed", cfg.seed.to_string()),
        ("init_scale", format!("{:?}", cfg.init_scale)),
        ("restarts", cfg.restarts.to_string()),
        ("target", target),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Rebuilds a configuration from a snapshot; missing keys keep their
/// defaults.
pub fn config_from_entries(entries: &BTreeMap<String, String>) -> Result<GrapeConfig> {
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
        v.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
    }
    let mut cfg = GrapeConfig::default();
    for (k, v) in entries {
        match k.as_str() {
            "duration" => cfg.duration = num(k, v)?,
            "bins" => cfg.bins = num(k, v)?,
            "penalty" => cfg.penalty = num(k, v)?,
            "step_size" => cfg.step_size = num(k, v)?,
            "max_iterations" => cfg.max_iterations = num(k, v)?,
            "tolerance" => cfg.tolerance = num(k, v)?,
            "stall_window" => cfg.stall_window = num(k, v)?,
            "seed" => cfg.seed = num(k, v)?,
            "init_scale" => cfg.init_scale = num(k, v)?,
            "restarts" => cfg.restarts = num(k, v)?,
            "target" => {
                let xs = v
                    .split(',')
                    .map(|x| num::<f64>(k, x))
                    .collect::<Result<Vec<_>>>()?;
                if xs.len() != 18 {
                    return Err(Error::Parse("target needs 18 numbers".into()));
                }
                let mut m = Matrix3::zeros();
                for (i, pair) in xs.chunks(2).enumerate() {
                    m.0[i / 3][i % 3] = C64::new(pair[0], pair[1]);
                }
                cfg.target = Unitary::new(m)?;
            }
            _ => {}
        }
    }
    let error = entries.get("error").map(String::as_str).unwrap_or("none");
    cfg.ensemble = if error == "none" {
        Ensemble::ideal()
    } else {
        let kind: ErrorKind = error.parse()?;
        let fractions = match entries.get("train") {
            Some(t) => t
                .split(',')
                .map(|x| num::<f64>("train", x))
                .collect::<Result<Vec<_>>>()?,
            None => cfg.ensemble.fractions().to_vec(),
        };
        Ensemble::new(kind, fractions)?
    };
    Ok(cfg)
}

/// Pulse table followed by the configuration, run summary and raw
/// controls.
pub fn checkpoint_csv(pulse: &OptimizedPulse) -> String {
    let mut out = pulse_csv(&pulse.schedule);
    for (k, v) in config_entries(&pulse.config) {
        let _ = writeln!(out, "# {k}={v}");
    }
    let _ = writeln!(out, "# performance={:?}", pulse.performance);
    let _ = writeln!(out, "# objective={:?}", pulse.objective);
    let _ = writeln!(out, "# iterations={}", pulse.iterations);
    let _ = writeln!(out, "# restart={}", pulse.restart);
    let _ = writeln!(out, "# range_min_fidelity={:?}", pulse.range_min_fidelity);
    write_controls(&mut out, &pulse.schedule);
    out
}

/// Pulse table with only the schedule's duration and raw controls attached.
pub fn schedule_checkpoint_csv(s: &ControlSchedule) -> String {
    let mut out = pulse_csv(s);
    let _ = writeln!(out, "# duration={:?}", s.duration());
    let _ = writeln!(out, "# bins={}", s.bins());
    write_controls(&mut out, s);
    out
}

fn write_controls(out: &mut String, s: &ControlSchedule) {
    for (j, u) in s.controls().iter().enumerate() {
        let _ = writeln!(
            out,
            "# {CONTROL_KEY}[{j}]={:?},{:?},{:?},{:?}",
            u[0], u[1], u[2], u[3]
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub schedule: ControlSchedule,
    /// Every `# key=value` entry other than raw controls.
    pub entries: BTreeMap<String, String>,
}

impl Checkpoint {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn config(&self) -> Result<GrapeConfig> {
        config_from_entries(&self.entries)
    }
}

/// Parses a pulse table or checkpoint. Raw controls, when present for every
/// bin, take precedence over the rounded table columns.
pub fn parse_pulse_csv(text: &str) -> Result<Checkpoint> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty pulse file".into()))?;
    if header.trim() != PULSE_HEADER {
        return Err(Error::Parse(format!("unexpected pulse header {header:?}")));
    }
    let mut rows: Vec<(f64, BinPulse)> = Vec::new();
    let mut entries = BTreeMap::new();
    let mut raw: BTreeMap<usize, [f64; 4]> = BTreeMap::new();
    for (n, line) in lines.enumerate() {
        if let Some(comment) = line.trim().strip_prefix('#') {
            let Some((k, v)) = comment.split_once('=') else {
                continue;
            };
            let (k, v) = (k.trim(), v.trim());
            if let Some(idx) = k
                .strip_prefix(CONTROL_KEY)
                .and_then(|r| r.strip_prefix('['))
                .and_then(|r| r.strip_suffix(']'))
            {
                let j: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad control index {idx:?}")))?;
                raw.insert(j, parse_four(v)?);
            } else {
                entries.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("pulse row {}: expected 6 fields", n + 1)));
        }
        let f = |i: usize| -> Result<f64> {
            fields[i]
                .parse()
                .map_err(|_| Error::Parse(format!("pulse row {}: bad number {:?}", n + 1, fields[i])))
        };
        let bin: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("pulse row {}: bad bin {:?}", n + 1, fields[0])))?;
        if bin != rows.len() {
            return Err(Error::Parse(format!("pulse row {}: bins out of order", n + 1)));
        }
        let pi = std::f64::consts::PI;
        rows.push((
            f(1)?,
            BinPulse {
                mw_amplitude: f(2)?,
                mw_phase: f(3)? * pi,
                rf_amplitude: f(4)?,
                rf_phase: f(5)? * pi,
            },
        ));
    }
    if rows.is_empty() {
        return Err(Error::Parse("pulse file has no bins".into()));
    }
    let duration = match entries.get("duration") {
        Some(d) => d
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad duration {d:?}")))?,
        None if rows.len() >= 2 => (rows[1].0 - rows[0].0) * rows.len() as f64,
        None => {
            return Err(Error::Parse(
                "single-bin pulse file needs a duration entry".into(),
            ))
        }
    };
    let controls: Vec<[f64; 4]> = if raw.len() == rows.len() && raw.keys().copied().eq(0..rows.len())
    {
        raw.into_values().collect()
    } else {
        rows.iter().map(|(_, p)| p.to_controls()).collect()
    };
    Ok(Checkpoint {
        schedule: ControlSchedule::new(duration, controls)?,
        entries,
    })
}

fn parse_four(v: &str) -> Result<[f64; 4]> {
    let xs: Vec<f64> = v
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad control values {v:?}")))?;
    xs.try_into()
        .map_err(|_| Error::Parse(format!("expected four control values in {v:?}")))
}

pub fn trace_csv(trace: &[f64]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for (i, x) in trace.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", sig9(*x));
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == TRACE_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected trace header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let (idx, v) = l
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("trace row {i}: expected 2 fields")))?;
            if idx.trim().parse::<usize>() != Ok(i) {
                return Err(Error::Parse(format!("trace row {i}: bad iteration {idx:?}")));
            }
            v.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("trace row {i}: bad value {v:?}")))
        })
        .collect()
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pulse_csv(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grape::ascent::ascend;

    fn sample_schedule() -> ControlSchedule {
        let controls = (0..7)
            .map(|j| {
                let x = j as f64;
                [0.1 * x.sin(), -0.31 * x.cos(), 0.0, 0.4 / (1.0 + x)]
            })
            .collect();
        ControlSchedule::new(2.5, controls).unwrap()
    }

    #[test]
    fn pulse_table_shape() {
        let csv = pulse_csv(&sample_schedule());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], PULSE_HEADER);
        assert_eq!(lines.len(), 8);
        assert!(lines[1].starts_with("0,0.00000000,"));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 6));
    }

    #[test]
    fn table_alone_round_trips_to_nine_digits() {
        let s = sample_schedule();
        let back = parse_pulse_csv(&pulse_csv(&s)).unwrap().schedule;
        assert!((back.duration() - s.duration()).abs() < 1e-8);
        for (a, b) in s.controls().iter().zip(back.controls()) {
            for k in 0..4 {
                assert!((a[k] - b[k]).abs() < 1e-8, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn schedule_checkpoint_is_exact() {
        let s = sample_schedule();
        let back = parse_pulse_csv(&schedule_checkpoint_csv(&s)).unwrap();
        assert_eq!(back.schedule, s);
    }

    #[test]
    fn optimized_checkpoint_restores_schedule_and_config() {
        let cfg = GrapeConfig {
            duration: 3.0,
            bins: 6,
            max_iterations: 5,
            restarts: 1,
            seed: 42,
            ensemble: Ensemble::uniform(ErrorKind::OffResonance, -0.1, 0.1, 3).unwrap(),
            ..GrapeConfig::default()
        };
        let pulse = ascend(&cfg).unwrap();
        let cp = parse_pulse_csv(&checkpoint_csv(&pulse)).unwrap();
        assert_eq!(cp.schedule, pulse.schedule);
        let restored = cp.config().unwrap();
        assert_eq!(restored.ensemble, cfg.ensemble);
        assert_eq!(restored.seed, 42);
        assert_eq!(restored.duration, 3.0);
        assert_eq!(restored.target, cfg.target);
        assert_eq!(cp.get("iterations"), Some(pulse.iterations.to_string().as_str()));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse_pulse_csv("").is_err());
        assert!(parse_pulse_csv("bin,u\n0,1\n").is_err());
        assert!(parse_pulse_csv(&format!("{PULSE_HEADER}\n")).is_err());
        assert!(parse_pulse_csv(&format!("{PULSE_HEADER}\n0,0,1,0,1,0\n")).is_err());
        assert!(parse_pulse_csv(&format!("{PULSE_HEADER}\n1,0,1,0,1,0\n2,1,1,0,1,0\n")).is_err());
    }

    #[test]
    fn trace_round_trip() {
        let t = vec![0.5, 1.25, 3.0, 8.999];
        assert_eq!(parse_trace_csv(&trace_csv(&t)).unwrap(), t);
        assert!(parse_trace_csv("x,y\n").is_err());
    }
}
