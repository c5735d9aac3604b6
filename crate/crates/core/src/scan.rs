//! Fidelity sweeps over systematic error fractions.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::numfmt::sig9;
use crate::par::Execution;
use crate::quantum::{gate_fidelity, Unitary};
use crate::sequences::{sequential_gate, ErrorKind, ErrorModel, PulseSequence};
use crate::{Error, Result};

/// Fidelity threshold that defines the "good fidelity" window.
pub const GOOD_FIDELITY: f64 = 0.9;

/// Half-width of the fit window used by [`quadratic_loss_coefficient`].
pub const QUADRATIC_FIT_HALF_WIDTH: f64 = 0.05;

type Factory = dyn Fn(ErrorModel) -> Result<Unitary> + Send + Sync;

/// A named gate construction evaluated under an error model.
#[derive(Clone)]
pub struct Scheme {
    label: String,
    factory: Arc<Factory>,
}

impl Scheme {
    pub fn new<F>(label: impl Into<String>, factory: F) -> Self
    where
        F: Fn(ErrorModel) -> Result<Unitary> + Send + Sync + 'static,
    {
        Scheme {
            label: label.into(),
            factory: Arc::new(factory),
        }
    }

    pub fn from_sequence(seq: PulseSequence) -> Self {
        let label = seq.label.clone();
        Scheme::new(label, move |err| seq.propagator(err))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gate(&self, err: ErrorModel) -> Result<Unitary> {
        (self.factory)(err)
    }
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme").field("label", &self.label).finish()
    }
}

/// Ordered error fractions of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGrid {
    kind: ErrorKind,
    points: Vec<f64>,
}

impl ErrorGrid {
    pub fn new(kind: ErrorKind, points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("error grid is empty"));
        }
        if let Some(bad) = points.iter().find(|e| !(e.abs() <= 1.0)) {
            return Err(Error::invalid(format!(
                "grid point {bad} outside [-1, 1]"
            )));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid points must be strictly increasing"));
        }
        Ok(ErrorGrid { kind, points })
    }

    /// `n` evenly spaced points from `min` to `max` inclusive.
    pub fn uniform(kind: ErrorKind, min: f64, max: f64, n: usize) -> Result<Self> {
        let points = linspace(min, max, n)?;
        Self::new(kind, points)
    }

    /// 81 points on [−1, 1].
    pub fn default_for(kind: ErrorKind) -> Self {
        Self::uniform(kind, -1.0, 1.0, 81).expect("default grid is valid")
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evenly spaced values; `n == 1` requires `min == max`.
pub fn linspace(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::invalid("range bounds must be finite"));
    }
    match n {
        0 => Err(Error::invalid("at least one point is required")),
        1 if min == max => Ok(vec![min]),
        1 => Err(Error::invalid(format!(
            "a single point needs min == max (got {min}, {max})"
        ))),
        _ if min >= max => Err(Error::invalid(format!(
            "range min {min} must be below max {max}"
        ))),
        _ => {
            let step = (max - min) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| min + step * i as f64).collect();
            v[n - 1] = max;
            Ok(v)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub fidelities: Vec<f64>,
}

/// Fidelity of every scheme at every grid point, in registration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub grid: ErrorGrid,
    pub series: Vec<Series>,
}

impl ScanResult {
    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.fidelities.as_slice())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.series.iter().map(|s| s.label.as_str())
    }

    pub fn mean(&self, label: &str) -> Option<f64> {
        self.get(label)
            .map(|f| f.iter().sum::<f64>() / f.len() as f64)
    }

    /// Half-width of the largest interval [−w, w] on which every sampled
    /// fidelity is at least `threshold`; `None` when no sampled point
    /// qualifies.
    pub fn window(&self, label: &str, threshold: f64) -> Option<f64> {
        let fid = self.get(label)?;
        good_window(self.grid.points(), fid, threshold)
    }

    /// Grid points where `a` is strictly below `b`.
    pub fn points_below(&self, a: &str, b: &str) -> Vec<f64> {
        match (self.get(a), self.get(b)) {
            (Some(fa), Some(fb)) => self
                .grid
                .points()
                .iter()
                .zip(fa.iter().zip(fb))
                .filter(|(_, (x, y))| x < y)
                .map(|(e, _)| *e)
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// `epsilon,<label1>,<label2>,...` header, then one row per grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "epsilon")?;
        for s in &self.series {
            write!(w, ",{}", s.label)?;
        }
        writeln!(w)?;
        for (i, e) in self.grid.points().iter().enumerate() {
            write!(w, "{}", sig9(*e))?;
            for s in &self.series {
                write!(w, ",{}", sig9(s.fidelities[i]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Writes the scan as CSV to `path`.
pub fn export_csv(result: &ScanResult, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    result.write_csv(&mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parsed form of an exported scan CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub epsilons: Vec<f64>,
    pub series: Vec<Series>,
}

pub fn parse_scan_csv(text: &str) -> Result<ScanTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty scan CSV".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("epsilon") {
        return Err(Error::Parse(format!("unexpected scan header `{header}`")));
    }
    let mut series: Vec<Series> = cols
        .map(|l| Series {
            label: l.to_string(),
            fidelities: Vec::new(),
        })
        .collect();
    let mut epsilons = Vec::new();
    for (n, line) in lines.enumerate() {
        let values = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", n + 1)))?;
        if values.len() != series.len() + 1 {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                n + 1,
                values.len(),
                series.len() + 1
            )));
        }
        epsilons.push(values[0]);
        for (s, v) in series.iter_mut().zip(&values[1..]) {
            s.fidelities.push(*v);
        }
    }
    Ok(ScanTable { epsilons, series })
}

/// gnuplot commands plotting every series of the CSV at `csv_path`.
pub fn plot_script(csv_path: &str, labels: &[&str], kind: ErrorKind) -> String {
    let xlabel = match kind {
        ErrorKind::PulseLength => "pulse-length error fraction",
        ErrorKind::OffResonance => "off-resonance error fraction",
    };
    let mut s = format!(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel '{xlabel}'\nset ylabel 'F'\nset yrange [0:1.02]\n"
    );
    let plots: Vec<String> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| format!("'{csv_path}' using 1:{} with lines title '{l}'", i + 2))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}

/// Evaluates every scheme at every grid point against the sequential gate.
pub fn scan(schemes: &[Scheme], grid: &ErrorGrid) -> Result<ScanResult> {
    scan_with(Execution::default(), schemes, grid)
}

pub fn scan_with(exec: Execution, schemes: &[Scheme], grid: &ErrorGrid) -> Result<ScanResult> {
    scan_against(exec, schemes, grid, &sequential_gate())
}

/// As [`scan_with`] with an explicit target gate.
pub fn scan_against(
    exec: Execution,
    schemes: &[Scheme],
    grid: &ErrorGrid,
    target: &Unitary,
) -> Result<ScanResult> {
    if schemes.is_empty() {
        return Err(Error::invalid("no schemes to scan"));
    }
    let kind = grid.kind();
    let rows: Vec<Result<Vec<f64>>> = exec.map(grid.points(), |&eps| {
        schemes
            .iter()
            .map(|s| {
                s.gate(kind.model(eps))
                    .map(|u| gate_fidelity(&u, target))
                    .map_err(|e| Error::Scheme {
                        label: s.label.clone(),
                        epsilon: eps,
                        source: Box::new(e),
                    })
            })
            .collect()
    });
    let mut series: Vec<Series> = schemes
        .iter()
        .map(|s| Series {
            label: s.label.clone(),
            fidelities: Vec::with_capacity(grid.len()),
        })
        .collect();
    for row in rows {
        for (s, f) in series.iter_mut().zip(row?) {
            s.fidelities.push(f);
        }
    }
    Ok(ScanResult {
        grid: grid.clone(),
        series,
    })
}

/// Truncated small-error expansion of the sequential gate's pulse-length
/// fidelity: 1 − (5π²/96)ε² + (π⁴/4608)ε⁴.
pub fn ple_series_fidelity(eps: f64) -> f64 {
    let e2 = eps * eps;
    1.0 - 5.0 * PI * PI / 96.0 * e2 + PI.powi(4) / 4608.0 * e2 * e2
}

/// Least-squares slope of (1 − F) against ε² over |ε| ≤ 0.05, with an
/// intercept term. Requires the samples to reach ±0.05 and at least five
/// points inside the window.
pub fn quadratic_loss_coefficient(eps: &[f64], fidelity: &[f64]) -> Result<f64> {
    if eps.len() != fidelity.len() {
        return Err(Error::invalid("epsilon and fidelity lengths differ"));
    }
    let w = QUADRATIC_FIT_HALF_WIDTH;
    let tol = 1e-12;
    let lo = eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo > -w + tol || hi < w - tol {
        return Err(Error::invalid(format!(
            "fit samples must span ±{w} (got [{lo}, {hi}])"
        )));
    }
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(fidelity)
        .filter(|(e, _)| e.abs() <= w + tol)
        .map(|(e, f)| (e * e, 1.0 - f))
        .collect();
    if pts.len() < 5 {
        return Err(Error::invalid(format!(
            "need at least 5 points with |ε| ≤ {w}, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit points have no spread in ε²"));
    }
    Ok(sxy / sxx)
}

/// Largest symmetric half-width w (one of the sampled |ε|) such that all
/// samples with |ε| ≤ w have F ≥ threshold.
pub fn good_window(eps: &[f64], fidelity: &[f64], threshold: f64) -> Option<f64> {
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&a, &b| eps[a].abs().total_cmp(&eps[b].abs()));
    // `width` only advances once every sample at that |ε| has passed
    let mut width = None;
    let mut pending = None;
    for &i in &order {
        let r = eps[i].abs();
        if pending.is_some_and(|p| p < r) {
            width = pending;
        }
        if fidelity[i] < threshold {
            return width;
        }
        pending = Some(r);
    }
    pending
}
