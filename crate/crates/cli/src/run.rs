//! Experiment drivers behind the command verbs.

use std::time::Instant;

use compact_helmholtz::krylov::{psi_from_ratios, solve_sks};
use compact_helmholtz::spectra::{bound_table, TABLE_H1_INTERVALS, TABLE_INTERVALS, TABLE_KS};
use compact_helmholtz::{
    eig_1d, solve, spectrum_summary, Discretization, Discretization1d, Error, Family, IterationConfig,
    ManufacturedProblem, Method, SolveReport, SolveStatus, System, Which, C64,
};

use crate::format::{sig6, wavenumber, Table};
use crate::spec::ExperimentSpec;

pub const TABLE_HEADER: [&str; 11] = [
    "problem", "k", "h", "method", "iterations", "status", "err6", "order6", "err2", "order2", "psi",
];
pub const TIMING_HEADER: [&str; 6] = ["problem", "k", "h", "method", "wall_time_s", "threads"];

/// Fields held at once by the cheapest iteration, used by the memory guard.
const BASE_FIELDS: u64 = 8;

/// One grid of either dimension.
pub enum Grid {
    One(Discretization1d),
    Three(Box<Discretization>),
}

impl Grid {
    pub fn build(problem: &ManufacturedProblem, m: usize) -> Result<Grid, Error> {
        Ok(match problem.family.dimension() {
            1 => Grid::One(problem.discretize_1d(m)?),
            _ => Grid::Three(Box::new(problem.discretize(m)?)),
        })
    }

    pub fn system(&self) -> &dyn System {
        match self {
            Grid::One(d) => d,
            Grid::Three(d) => &**d,
        }
    }

    pub fn rhs(&self) -> Vec<C64> {
        match self {
            Grid::One(d) => d.assemble_rhs(),
            Grid::Three(d) => d.assemble_rhs().data,
        }
    }

    fn rhs_second_order(&self) -> Vec<C64> {
        match self {
            Grid::One(d) => d.assemble_rhs_a2(),
            Grid::Three(d) => d.assemble_rhs_a2().data,
        }
    }

    pub fn error(&self, problem: &ManufacturedProblem, u: &[C64]) -> f64 {
        match self {
            Grid::One(d) => problem.exact_error_1d(d, u),
            Grid::Three(d) => problem.exact_error(d, u),
        }
    }
}

/// Unknowns of the grid with `m` intervals, before building it.
pub fn unknowns(family: Family, m: usize) -> u64 {
    let per_axis = (m + 1) as u64;
    match family.dimension() {
        1 => per_axis,
        _ => per_axis.pow(3),
    }
}

/// Eigenvalue interval of the preconditioned operator where a closed form
/// exists: all-Dirichlet families with real `k`.
pub fn chebyshev_interval(family: Family, k: C64, m: usize) -> Option<(f64, f64)> {
    if k.im != 0.0 {
        return None;
    }
    let h = 1.0 / m as f64;
    let n = m - 1;
    match family {
        Family::Dirichlet3d => {
            let s = spectrum_summary(n, k.re, h);
            Some((s.d_min, s.d_max))
        }
        Family::Dirichlet1d => {
            let d = (1..=n).map(|j| (eig_1d(j, n, k, h, Which::A) / eig_1d(j, n, k, h, Which::Ap)).re - 1.0);
            Some(d.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))))
        }
        _ => None,
    }
}

pub fn iteration_config(spec: &ExperimentSpec, method: Method) -> IterationConfig {
    IterationConfig {
        tol: spec.tol,
        max_iter: spec.max_iter,
        method,
        gmres_restart: spec.restart,
        ..IterationConfig::default()
    }
}

/// Iteration cell: the count for converged runs, a flag otherwise.
pub fn iteration_cell(report: &SolveReport) -> String {
    match report.status {
        SolveStatus::Converged => report.iterations.to_string(),
        SolveStatus::Diverged => "div".into(),
        SolveStatus::MaxIterations => ">max".into(),
        SolveStatus::MemoryLimit => "mem".into(),
        SolveStatus::Breakdown => "breakdown".into(),
    }
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Converged => "converged",
        SolveStatus::MaxIterations => "max-iterations",
        SolveStatus::Diverged => "diverged",
        SolveStatus::Breakdown => "breakdown",
        SolveStatus::MemoryLimit => "memory-limit",
    }
}

fn order(prev: Option<(usize, f64)>, m: usize, err: Option<f64>) -> String {
    match (prev, err) {
        (Some((pm, pe)), Some(e)) if pe > 0.0 && e > 0.0 => sig6((pe / e).ln() / (m as f64 / pm as f64).ln()),
        _ => String::new(),
    }
}

/// `||r_2|| / ||r_1||` after two SKS steps.
pub fn sks_ratio(sys: &dyn System, f: &[C64]) -> Result<f64, Error> {
    let cfg = IterationConfig {
        method: Method::Sks,
        max_iter: 2,
        tol: f64::MIN_POSITIVE,
        ..Default::default()
    };
    let (_, rep) = solve_sks(sys, f, &cfg)?;
    let h = &rep.residual_history;
    if h.len() < 3 || h[1] == 0.0 {
        return Err(Error::InvalidParameter("zero first SKS residual; psi is undefined".into()));
    }
    Ok(h[2] / h[1])
}

pub struct TableRun {
    pub table: Table,
    pub timing: Table,
}

fn threads() -> String {
    std::env::var("RAYON_NUM_THREADS")
        .ok()
        .filter(|v| v.parse::<usize>().is_ok_and(|n| n > 0))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()).to_string())
}

/// Runs every `(k, h, method)` cell of the spec sequentially.
pub fn run_table(spec: &ExperimentSpec) -> Result<TableRun, Error> {
    spec.validate()?;
    let mut table = Table::new(&TABLE_HEADER);
    let mut timing = Table::new(&TIMING_HEADER);
    if spec.methods.is_empty() {
        return Ok(TableRun { table, timing });
    }
    let threads = threads();
    for &k in &spec.k {
        let problem = ManufacturedProblem::new(spec.problem, k);
        let mut prev_err6: Vec<Option<(usize, f64)>> = vec![None; spec.methods.len()];
        let mut prev_err2: Option<(usize, f64)> = None;
        let mut prev_ratio: Option<(usize, f64)> = None;
        for &m in &spec.grids {
            let h = format!("1/{m}");
            let common = |method: &str| vec![spec.problem.name().to_string(), wavenumber(k), h.clone(), method.to_string()];
            let needed = BASE_FIELDS * 16 * unknowns(spec.problem, m);
            if needed > spec.mem_budget {
                for method in &spec.methods {
                    let mut row = common(method.name());
                    row.extend(["mem".into(), "memory-limit".into()]);
                    row.extend(std::iter::repeat_n(String::new(), 5));
                    table.push(row);
                }
                prev_err6.fill(None);
                prev_err2 = None;
                prev_ratio = None;
                continue;
            }
            let grid = Grid::build(&problem, m)?;
            let f = grid.rhs();

            let f2 = grid.rhs_second_order();
            let mut u2 = vec![C64::new(0.0, 0.0); f2.len()];
            grid.system().precondition(&f2, &mut u2)?;
            let err2 = grid.error(&problem, &u2);
            drop((f2, u2));
            let order2 = order(prev_err2, m, Some(err2));
            prev_err2 = Some((m, err2));

            let ratio = sks_ratio(grid.system(), &f).ok();
            let psi = match (prev_ratio, ratio) {
                (Some((pm, pr)), Some(r)) => psi_from_ratios(r, pr, m as f64 / pm as f64)
                    .map(|p| sig6(p.psi))
                    .unwrap_or_default(),
                _ => String::new(),
            };
            prev_ratio = ratio.map(|r| (m, r));

            for (slot, &method) in spec.methods.iter().enumerate() {
                let mut cfg = iteration_config(spec, method);
                cfg.mem_budget = Some(spec.mem_budget.saturating_sub(needed) as usize);
                let mut row = common(method.name());
                if method == Method::Chebyshev {
                    cfg.chebyshev_interval = chebyshev_interval(spec.problem, k, m);
                    if cfg.chebyshev_interval.is_none() {
                        row.extend(["n/a".into(), "no-interval".into(), String::new(), String::new()]);
                        row.extend([sig6(err2), order2.clone(), psi.clone()]);
                        table.push(row);
                        prev_err6[slot] = None;
                        continue;
                    }
                }
                let start = Instant::now();
                let (u, report) = solve(grid.system(), &f, &cfg)?;
                let wall = start.elapsed().as_secs_f64();
                let err6 = report.converged().then(|| grid.error(&problem, &u));
                row.extend([
                    iteration_cell(&report),
                    status_name(report.status).into(),
                    err6.map(sig6).unwrap_or_default(),
                    order(prev_err6[slot], m, err6),
                    sig6(err2),
                    order2.clone(),
                    psi.clone(),
                ]);
                prev_err6[slot] = err6.map(|e| (m, e));
                table.push(row);
                let mut t = common(method.name());
                t.extend([format!("{wall:.3}"), threads.clone()]);
                timing.push(t);
            }
        }
    }
    Ok(TableRun { table, timing })
}

/// Bound-table layout: pairs `(m, M)` of `1 - lambda / lambda_p` per
/// `(k, h)` and one `delta0` row per `k` on its coarsest grid.
pub fn run_spectrum(ks: Option<&[f64]>, intervals: Option<&[usize]>) -> Table {
    let ks = ks.unwrap_or(&TABLE_KS);
    let intervals = intervals.unwrap_or(&TABLE_INTERVALS);
    let mut table = Table::new(&["kind", "k", "h", "lower", "upper", "delta0"]);
    for cell in bound_table(ks, intervals) {
        let (lo, hi) = cell.summary.table_bounds();
        table.push(vec![
            "bounds".into(),
            sig6(cell.k),
            format!("1/{}", cell.intervals),
            sig6(lo),
            sig6(hi),
            String::new(),
        ]);
    }
    for &k in ks {
        let h1 = TABLE_KS
            .iter()
            .position(|&t| t == k)
            .map(|i| TABLE_H1_INTERVALS[i])
            .or_else(|| intervals.iter().copied().min());
        if let Some(m) = h1 {
            let s = spectrum_summary(m - 1, k, 1.0 / m as f64);
            table.push(vec![
                "delta0".into(),
                sig6(k),
                format!("1/{m}"),
                String::new(),
                String::new(),
                sig6(s.delta0),
            ]);
        }
    }
    table
}

pub fn run_psi(problem: Family, k: C64, fine: usize, gamma: f64) -> Result<Table, Error> {
    let coarse_f = fine as f64 / gamma;
    let coarse = coarse_f.round() as usize;
    if !(gamma > 1.0) || (coarse_f - coarse as f64).abs() > 1e-9 * coarse_f || coarse < 2 {
        return Err(Error::Config(format!(
            "gamma = {gamma} must exceed 1 and make gamma h a step of the unit interval"
        )));
    }
    let p = ManufacturedProblem::new(problem, k);
    let eps_gamma_h = {
        let g = Grid::build(&p, coarse)?;
        sks_ratio(g.system(), &g.rhs())?
    };
    let eps_h = {
        let g = Grid::build(&p, fine)?;
        sks_ratio(g.system(), &g.rhs())?
    };
    let est = psi_from_ratios(eps_h, eps_gamma_h, gamma)?;
    let mut table = Table::new(&["problem", "k", "h", "gamma", "eps_h", "eps_gamma_h", "psi"]);
    table.push(vec![
        problem.name().into(),
        wavenumber(k),
        format!("1/{fine}"),
        sig6(gamma),
        sig6(est.eps_h),
        sig6(est.eps_gamma_h),
        sig6(est.psi),
    ]);
    Ok(table)
}

pub struct SolveRun {
    pub table: Table,
    pub report: SolveReport,
}

pub fn run_solve(spec: &ExperimentSpec, method: Method) -> Result<SolveRun, Error> {
    spec.validate()?;
    let (k, m) = (spec.k[0], spec.grids[0]);
    let needed = BASE_FIELDS * 16 * unknowns(spec.problem, m);
    if needed > spec.mem_budget {
        return Err(Error::Config(format!(
            "grid 1/{m} needs about {needed} bytes, above the memory budget of {} bytes",
            spec.mem_budget
        )));
    }
    let problem = ManufacturedProblem::new(spec.problem, k);
    let grid = Grid::build(&problem, m)?;
    let f = grid.rhs();
    let mut cfg = iteration_config(spec, method);
    cfg.mem_budget = Some((spec.mem_budget - needed) as usize);
    if method == Method::Chebyshev {
        cfg.chebyshev_interval = chebyshev_interval(spec.problem, k, m);
    }
    let (u, report) = solve(grid.system(), &f, &cfg)?;
    let err6 = grid.error(&problem, &u);
    let mut table = Table::new(&[
        "problem", "k", "h", "method", "iterations", "status", "true_residual", "err6",
    ]);
    table.push(vec![
        spec.problem.name().into(),
        wavenumber(k),
        format!("1/{m}"),
        method.name().into(),
        report.iterations.to_string(),
        status_name(report.status).into(),
        sig6(report.true_residual),
        sig6(err6),
    ]);
    Ok(SolveRun { table, report })
}
