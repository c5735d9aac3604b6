//! Trains a robust pulse and compares it against the composite sequences.
//!
//! Usage: `cargo run --release --example train -- [ple|ore] [seed] [step] [init_scale] [penalty]`

use std::time::Instant;

use pulseforge::grape::{self, Ensemble, GrapeConfig};
use pulseforge::scan::{self, ErrorGrid, Scheme};
use pulseforge::sequences::{bb1_sequence, corpse_sequence, sequential_segments};
use pulseforge::ErrorKind;

fn main() -> pulseforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: ErrorKind = args.next().as_deref().unwrap_or("ple").parse()?;
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut cfg = GrapeConfig {
        ensemble: Ensemble::uniform(kind, -0.2, 0.2, 5)?,
        seed,
        ..GrapeConfig::default()
    };
    if let Some(step) = args.next().and_then(|s| s.parse().ok()) {
        cfg.step_size = step;
    }
    if let Some(scale) = args.next().and_then(|s| s.parse().ok()) {
        cfg.init_scale = scale;
    }
    if let Some(penalty) = args.next().and_then(|s| s.parse().ok()) {
        cfg.penalty = penalty;
    }
    let t0 = Instant::now();
    let pulse = grape::ascend(&cfg)?;
    println!(
        "{kind}: restart {} iterations {} stop {:?} P {:.6} min F {:.6} in {:.1?}",
        pulse.restart,
        pulse.iterations,
        pulse.stop,
        pulse.performance,
        pulse.range_min_fidelity,
        t0.elapsed()
    );
    let grid = ErrorGrid::uniform(kind, -0.5, 0.5, 41)?;
    let schemes = [
        Scheme::from_sequence(sequential_segments()),
        Scheme::from_sequence(bb1_sequence()),
        Scheme::from_sequence(corpse_sequence()),
        grape::scheme("grape", pulse.schedule),
    ];
    let result = scan::scan(&schemes, &grid)?;
    for label in result.labels() {
        println!("  mean {label:>10} {:.5}", result.mean(label).unwrap());
    }
    Ok(())
}
