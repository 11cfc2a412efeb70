//! Simulation-versus-bound sweeps and their CSV/JSON reports.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{theorem1_bound, BoundParameters};
use crate::config::Experiment;
use crate::dynamics::run_protocol;
use crate::error::{Error, Result};
use crate::measurement::{Protocol, Strength};

pub const CSV_HEADER: [&str; 10] = [
    "variant",
    "Q",
    "tau",
    "M",
    "epsilon",
    "D_sim",
    "D_bound",
    "D_strong_limit",
    "B1_over_M",
    "bound_satisfied",
];

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub variant: Protocol,
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub tau: f64,
    #[serde(rename = "M")]
    pub cycles: u64,
    pub epsilon: Strength,
    #[serde(rename = "D_sim")]
    pub d_sim: f64,
    #[serde(rename = "D_bound")]
    pub d_bound: f64,
    #[serde(rename = "D_strong_limit")]
    pub d_strong_limit: f64,
    #[serde(rename = "B1_over_M")]
    pub b1_over_m: Option<f64>,
    pub bound_satisfied: bool,
    /// Pure encoded initial state, as the bound assumes.
    pub within_hypothesis: bool,
    #[serde(rename = "J0")]
    pub j0: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub violations: usize,
    pub max_d_sim: f64,
    /// Largest `D_sim / D_bound` over rows with a positive bound.
    pub max_ratio: f64,
    pub all_satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
}

impl Provenance {
    pub fn new(config_sha256: String) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config_sha256,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub provenance: Provenance,
    pub summary: Summary,
    pub rows: Vec<SweepRow>,
}

/// One grid point: simulate, evaluate the bound with the measured `J₀`, `J₁`.
pub fn evaluate_point(exp: &Experiment, protocol: Protocol, tau: f64, cycles: u64, eps: Strength) -> Result<SweepRow> {
    let sim = run_protocol(
        &exp.code,
        &exp.hamiltonian,
        &exp.initial_state,
        tau,
        cycles,
        eps,
        protocol,
    )?;
    let params = BoundParameters::new(exp.code.big_q(), protocol, sim.j0, sim.j1, tau, cycles, eps)?;
    let bound = theorem1_bound(&params)?;
    let tol = exp.tolerances.bound;
    Ok(SweepRow {
        variant: protocol,
        big_q: exp.code.big_q(),
        tau,
        cycles,
        epsilon: eps,
        d_sim: sim.distance,
        d_bound: bound.full_bound,
        d_strong_limit: bound.strong_limit,
        b1_over_m: bound.asymptotic_bound,
        bound_satisfied: sim.distance <= bound.full_bound + tol,
        within_hypothesis: sim.pure_initial_state,
        j0: sim.j0,
        j1: sim.j1,
    })
}

/// Evaluates the product grid `protocols × τ × M × ε` in parallel; row order is
/// the nested loop order regardless of scheduling.
pub fn run_sweep(exp: &Experiment, protocols: &[Protocol], config_sha256: String) -> Result<SweepReport> {
    let mut points = Vec::new();
    for &p in protocols {
        for &tau in &exp.taus {
            for &m in &exp.cycles {
                for &eps in &exp.strengths {
                    points.push((p, tau, m, eps));
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Domain("empty sweep".into()));
    }
    let rows = points
        .par_iter()
        .map(|&(p, tau, m, eps)| {
            log::debug!("sweep point {} tau={tau} M={m} eps={eps}", p.name());
            evaluate_point(exp, p, tau, m, eps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        provenance: Provenance::new(config_sha256),
        summary: summarize(&rows),
        rows,
    })
}

pub fn summarize(rows: &[SweepRow]) -> Summary {
    // Rows outside the pure-state hypothesis are reported but never counted as violations.
    let violations = rows
        .iter()
        .filter(|r| r.within_hypothesis && !r.bound_satisfied)
        .count();
    Summary {
        rows: rows.len(),
        violations,
        max_d_sim: rows.iter().map(|r| r.d_sim).fold(0.0, f64::max),
        max_ratio: rows
            .iter()
            .filter(|r| r.d_bound > 0.0)
            .map(|r| r.d_sim / r.d_bound)
            .fold(0.0, f64::max),
        all_satisfied: violations == 0,
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let eps = match r.epsilon {
                Strength::Finite(e) => float(e),
                Strength::Infinite => "inf".to_string(),
            };
            w.write_record([
                r.variant.name().to_string(),
                r.big_q.to_string(),
                float(r.tau),
                r.cycles.to_string(),
                eps,
                float(r.d_sim),
                float(r.d_bound),
                float(r.d_strong_limit),
                r.b1_over_m.map(float).unwrap_or_default(),
                r.bound_satisfied.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
