//! One function per experiment, each turning a [`RunConfig`] into a table and
//! a JSON summary.

use entscale_core::fermion::{fh_scaling_fit, finite_ring_crosscheck, CouplingSequence};
use entscale_core::spin::{
    entropy_envelope_fit, entropy_profile, k_hamiltonian_check, lightcone_probe, quasilocality_decay, w_hierarchy,
    CutPartition, DecayFit, Pauli,
};
use entscale_core::stats::fit_line;
use entscale_core::Result;
use serde_json::{json, Value};

use crate::settings::RunConfig;
use crate::{suite, Experiment};

/// Tolerance on the hierarchy inequality and reassembly.
pub const HIERARCHY_SLACK: f64 = 1e-12;
pub const REASSEMBLY_TOL: f64 = 1e-8;
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const FIDELITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) if s.contains([',', '"', '\n', '\r']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub table: Table,
    pub summary: Value,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(cfg.experiment.columns());
    let summary = match cfg.experiment {
        Experiment::Quench => quench(cfg, &mut table)?,
        Experiment::WHierarchy => hierarchy(cfg, &mut table)?,
        Experiment::Lightcone => lightcone(cfg, &mut table)?,
        Experiment::KCheck => kcheck(cfg, &mut table)?,
        Experiment::Quasilocal => quasilocal(cfg, &mut table)?,
        Experiment::FermionScaling => scaling(cfg, &mut table)?,
        Experiment::RingCheck => ring(cfg, &mut table)?,
        Experiment::PropertySuite => suite::run_suite(cfg, &mut table)?,
    };
    Ok(Outcome { table, summary })
}

fn quench(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let h = cfg.hamiltonian().expect("spin model");
    let curve = entropy_profile(h, &cfg.t_grid, &cfg.m_list)?;
    for r in &curve.rows {
        table.push(vec![r.t.into(), r.m.into(), r.entropy.into(), r.s_max.into(), r.eff_rank.into()]);
    }
    let mut ms: Vec<usize> = curve.rows.iter().map(|r| r.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let envelopes: Vec<Value> = ms
        .iter()
        .map(|&m| match entropy_envelope_fit(&curve, m) {
            Ok(f) => json!({"m": m, "c0": f.c0, "c1": f.c1, "r_squared": f.r_squared, "max_excess": f.max_excess, "points": f.points}),
            Err(e) => json!({"m": m, "skipped": e.to_string()}),
        })
        .collect();
    let max_entropy = curve.rows.iter().map(|r| r.entropy).fold(0.0, f64::max);
    Ok(json!({"h_norm": curve.h_norm, "max_entropy": max_entropy, "envelopes": envelopes}))
}

fn hierarchy(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let h = cfg.hamiltonian().expect("spin model");
    let cut = CutPartition::new(cfg.n, cfg.cut)?;
    let rep = w_hierarchy(h, cut, cfg.t_grid[0], cfg.l_max)?;
    for r in &rep.rows {
        table.push(vec![r.l.into(), r.w_deviation.into(), r.lr_bound.into()]);
    }
    let violations = rep.violations(HIERARCHY_SLACK);
    Ok(json!({
        "t": rep.t,
        "cut": rep.m,
        "h_norm": rep.h_norm,
        "m_norm": rep.m_norm,
        "reassembly_error": rep.reassembly_error,
        "violations": violations,
        "inequality_holds": violations.is_empty(),
        "reassembly_ok": rep.reassembly_error <= REASSEMBLY_TOL,
    }))
}

fn lightcone(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let h = cfg.hamiltonian().expect("spin model");
    let rows = lightcone_probe(h, cfg.site, &cfg.t_grid, Pauli::Z, Pauli::Z)?;
    for r in &rows {
        table.push(vec![r.t.into(), r.d.into(), r.comm_norm.into()]);
    }
    // Slope of ln commNorm against d beyond the first three distances.
    let mut tails = Vec::new();
    for &t in &cfg.t_grid {
        let (ds, logs): (Vec<f64>, Vec<f64>) =
            rows.iter().filter(|r| r.t == t && r.d >= 3 && r.comm_norm > 1e-14).map(|r| (r.d as f64, r.comm_norm.ln())).unzip();
        if let Ok(fit) = fit_line(&ds, &logs) {
            tails.push(json!({"t": t, "slope": fit.slope, "r_squared": fit.r_squared}));
        }
    }
    let zero_time_max = rows.iter().filter(|r| r.t == 0.0 && r.d >= 1).map(|r| r.comm_norm).fold(0.0, f64::max);
    Ok(json!({"site": cfg.site, "observable": "Z", "probe": "Z", "tail_slopes": tails, "zero_time_max": zero_time_max}))
}

fn kcheck(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let h = cfg.hamiltonian().expect("spin model");
    let mut worst_spectrum: f64 = 0.0;
    let mut worst_fidelity: f64 = 1.0;
    let mut degenerate = Vec::new();
    for &t in &cfg.t_grid {
        let rep = k_hamiltonian_check(h, t)?;
        table.push(vec![t.into(), rep.spectrum_max_diff.into(), rep.ground_fidelity.into(), rep.first_order_residual.into()]);
        worst_spectrum = worst_spectrum.max(rep.spectrum_max_diff);
        worst_fidelity = worst_fidelity.min(rep.ground_fidelity);
        if rep.degenerate() {
            degenerate.push(t);
        }
    }
    Ok(json!({
        "max_spectrum_diff": worst_spectrum,
        "min_ground_fidelity": worst_fidelity,
        "degenerate_times": degenerate,
        "spectrum_ok": worst_spectrum <= SPECTRUM_TOL,
        "fidelity_ok": worst_fidelity >= 1.0 - FIDELITY_TOL,
    }))
}

fn decay_json(fit: &DecayFit<f64>) -> Value {
    json!({"c": fit.c, "kappa": fit.kappa, "v": fit.v, "r_squared": fit.r_squared, "points": fit.points})
}

fn quasilocal(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let h = cfg.hamiltonian().expect("spin model");
    let rep = quasilocality_decay(h, cfg.site, &cfg.t_grid, &cfg.k_list)?;
    for r in &rep.rows {
        table.push(vec![r.t.into(), r.k.into(), r.trunc_norm.into()]);
    }
    let per_time: Vec<Value> = rep.per_time.iter().map(|(t, f)| json!({"t": t, "fit": decay_json(f)})).collect();
    Ok(json!({"site": rep.site, "pooled": rep.pooled.as_ref().map(decay_json), "per_time": per_time}))
}

fn scaling(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let symbol = cfg.symbol().expect("symbol model");
    let rep = fh_scaling_fit(symbol, &cfg.m_list)?;
    for r in &rep.rows {
        table.push(vec![r.m.into(), r.s_exact.into(), r.d_det.into(), r.log_abs_det.into()]);
    }
    let singular: Vec<usize> = rep.rows.iter().filter(|r| r.singular).map(|r| r.m).collect();
    Ok(json!({
        "a": rep.a(),
        "a_r_squared": rep.entropy_fit.r_squared,
        "d": rep.d(),
        "d_r_squared": rep.determinant_fit.r_squared,
        "singular_m": singular,
        "bound_violations": rep.bound_violations(),
        "jumps": symbol.jump_points(),
    }))
}

fn ring(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let symbol = cfg.symbol().expect("symbol model");
    let mut zero_modes = Vec::new();
    for &n in &cfg.n_list {
        let couplings = CouplingSequence::from_symbol(symbol, n / 2)?;
        for &m in &cfg.m_list {
            let check = finite_ring_crosscheck(symbol, &couplings, n, m)?;
            table.push(vec![n.into(), m.into(), check.max_deviation.into()]);
            if m == cfg.m_list[0] {
                zero_modes.push(json!({"n": n, "zero_modes": check.zero_modes}));
            }
        }
    }
    Ok(json!({"zero_modes": zero_modes}))
}
