//! Scaling runs over the generated expression families.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use eqtree::corpus::Family;
use eqtree::derive::build_equation_automaton_naive;
use eqtree::treeauto::{run_fast_pipeline, run_front_end, FastOptions};
use eqtree::Result;

pub const CSV_HEADER: &str = "family,size,states,stage,micros";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Fast,
    Naive,
    Both,
    /// Only the linear stages up to ∼e.
    Front,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub family: &'static str,
    pub size: usize,
    pub states: usize,
    /// Per stage; the naive construction is a single `naive` stage.
    pub stages: Vec<(&'static str, Duration)>,
    pub transitions: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Best of `repeat` runs per stage.
fn best(runs: Vec<Vec<(&'static str, Duration)>>) -> Vec<(&'static str, Duration)> {
    let mut out = runs[0].clone();
    for run in &runs[1..] {
        for (slot, (_, d)) in out.iter_mut().zip(run) {
            slot.1 = slot.1.min(*d);
        }
    }
    out
}

pub fn run_bench(
    family: Family,
    sizes: &[usize],
    algo: Algo,
    repeat: usize,
) -> Result<BenchReport> {
    let alphabet = family.alphabet();
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    let mut report = BenchReport::default();
    for &n in &sizes {
        let expr = family.generate(&alphabet, n);
        let size = expr.size();
        if matches!(algo, Algo::Fast | Algo::Both) {
            let mut runs = Vec::new();
            let mut last = None;
            for _ in 0..repeat.max(1) {
                let build = run_fast_pipeline(
                    &expr,
                    &alphabet,
                    FastOptions {
                        render_names: false,
                    },
                )?;
                runs.push(build.timings.clone());
                last = Some(build);
            }
            let build = last.expect("at least one run");
            let mut stages = best(runs);
            let total = stages.iter().map(|s| s.1).sum();
            stages.push(("total", total));
            report.rows.push(BenchRow {
                family: family.name(),
                size,
                states: build.automaton.state_count(),
                stages,
                transitions: build.automaton.transition_count(),
            });
        }
        if algo == Algo::Front {
            let mut runs = Vec::new();
            let mut last = None;
            for _ in 0..repeat.max(1) {
                let front = run_front_end(&expr)?;
                runs.push(front.timings.clone());
                last = Some(front);
            }
            let front = last.expect("at least one run");
            let mut stages = best(runs);
            let total = stages.iter().map(|s| s.1).sum();
            stages.push(("total", total));
            report.rows.push(BenchRow {
                family: family.name(),
                size,
                states: front.partition.classes,
                stages,
                transitions: 0,
            });
        }
        if matches!(algo, Algo::Naive | Algo::Both) {
            let mut runs = Vec::new();
            let mut last = None;
            for _ in 0..repeat.max(1) {
                let start = Instant::now();
                let aut = build_equation_automaton_naive(&expr, &alphabet);
                runs.push(vec![("naive", start.elapsed())]);
                last = Some(aut);
            }
            let aut = last.expect("at least one run");
            report.rows.push(BenchRow {
                family: family.name(),
                size,
                states: aut.state_count(),
                stages: best(runs),
                transitions: aut.transition_count(),
            });
        }
    }
    Ok(report)
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for row in &self.rows {
            for (stage, d) in &row.stages {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.family,
                    row.size,
                    row.states,
                    stage,
                    d.as_micros()
                );
            }
        }
        out
    }

    /// Time of `stage` per size, in row order.
    pub fn stage_series(&self, stage: &str) -> Vec<(usize, Duration)> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.stages
                    .iter()
                    .find(|s| s.0 == stage)
                    .map(|s| (r.size, s.1))
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>8} {:>8} {:>12} {:>12}",
            "family", "size", "states", "transitions", "total_us"
        );
        for row in &self.rows {
            let total = row
                .stages
                .iter()
                .find(|s| s.0 == "total" || s.0 == "naive")
                .map_or(0, |s| s.1.as_micros());
            let _ = writeln!(
                out,
                "{:<14} {:>8} {:>8} {:>12} {:>12}",
                row.family, row.size, row.states, row.transitions, total
            );
        }
        let series = self.stage_series("sim_e");
        for pair in series.windows(2) {
            let ((n0, t0), (n1, t1)) = (pair[0], pair[1]);
            let ratio = t1.as_secs_f64() / t0.as_secs_f64().max(1e-9);
            let verdict = if ratio <= 3.0 { "ok" } else { "slow" };
            let _ = writeln!(out, "sim_e {n0} -> {n1}: ratio {ratio:.2} {verdict}");
        }
        out
    }
}
