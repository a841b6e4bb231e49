//! Subcommand bodies. Each returns the text to print on stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use entassist_core::assistance::{ncopy_deficit_scan, EoaConfig, EoaProblem, EoaResult, SpanScanConfig};
use entassist_core::ensembles::canonical_vectors;
use entassist_core::locc::{average_final_entanglement, leaf_cut_state, run_protocol, SystemState};
use entassist_core::measures::{cut_label, measure_by_name, Bipartition, RootMeasure};
use entassist_core::states::PureState;

use crate::files::{builtin_protocol, catalog_state, load_protocol, load_state, write_protocol, write_state};
use crate::parallel;
use crate::report::{reproduce, ReportDocument, ReproduceConfig};

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.11}");
    }
    if !(1e-4..1e12).contains(&x.abs()) {
        return format!("{x:.11e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `re ± |im|i` with 12 significant digits per part.
pub fn sig12_complex(z: entassist_core::C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", sig12(z.re), sig12(z.im.abs()))
}

/// The pure state on the cut's parties, tracing out the rest.
fn pure_on_cut(state: &SystemState, cut: &Bipartition) -> Result<(PureState, Bipartition)> {
    match state {
        SystemState::Pure(p) if cut.covers(p.space()) => Ok((p.clone(), cut.clone())),
        _ => {
            let reduced = state.reduced(&cut.parties())?;
            let psi = reduced
                .as_pure(1e-9)
                .context("the measure needs a pure state on the cut")?;
            Ok((psi, cut.restricted()))
        }
    }
}

pub fn measure(state: &str, cut: &str, measure: &str, renormalize: bool) -> Result<String> {
    let state = load_state(state, renormalize)?;
    let cut = Bipartition::parse(state.space(), cut)?;
    let m = measure_by_name(measure)?;
    let (psi, c) = pure_on_cut(&state, &cut)?;
    Ok(format!("{}\n", sig12(m.evaluate(&psi, &c)?)))
}

pub struct EoaArgs<'a> {
    pub state: &'a str,
    pub restarts: usize,
    pub seed: u64,
    pub max_ensemble: Option<usize>,
    pub measure: &'a str,
    pub threads: usize,
    pub renormalize: bool,
}

pub fn eoa(args: &EoaArgs<'_>) -> Result<String> {
    let state = load_state(args.state, args.renormalize)?;
    let m = measure_by_name(args.measure)?;
    let cfg = EoaConfig {
        restarts: args.restarts,
        max_ensemble_size: args.max_ensemble,
        seed: args.seed,
        ..Default::default()
    };
    let (res, space) = match &state {
        SystemState::Pure(psi) => {
            let problem = EoaProblem::from_pure(psi, m.as_ref(), cfg)?;
            (
                parallel::solve_eoa(&problem, args.threads)?,
                problem.target().space().clone(),
            )
        }
        SystemState::Mixed(rho) => {
            let cut = Bipartition::first_vs_rest(rho.space())?;
            let family = canonical_vectors(rho)?;
            let problem = EoaProblem::new(rho.clone(), family, cut, m.as_ref(), cfg)?;
            (parallel::solve_eoa(&problem, args.threads)?, rho.space().clone())
        }
    };
    Ok(eoa_summary(&res, &space, m.as_ref()))
}

fn eoa_summary(res: &EoaResult, space: &entassist_core::states::PartySpace, m: &dyn RootMeasure) -> String {
    let cut = Bipartition::first_vs_rest(space).expect("at least two parties");
    let mut out = String::new();
    let _ = writeln!(out, "cut          {}", cut_label(space, &cut));
    let _ = writeln!(out, "value        {}", sig12(res.value));
    let _ = writeln!(out, "upper_bound  {}", sig12(res.upper_bound));
    let _ = writeln!(out, "restarts     {}", res.restarts_used);
    let _ = writeln!(out, "members      {}", res.certificate.len());
    let _ = writeln!(out, "recon_error  {:.3e}", res.certificate.reconstruction_error());
    for (i, e) in res.certificate.entries().iter().enumerate() {
        let v = m
            .evaluate(&e.state, &cut)
            .map(sig12)
            .unwrap_or_else(|e| format!("error: {e}"));
        let _ = writeln!(out, "  member {i:>2}  weight {}  {} {v}", sig12(e.weight), m.name());
    }
    out
}

pub fn simulate(state: &str, protocol: &str, cut: &str, measure: &str, renormalize: bool) -> Result<String> {
    let state = load_state(state, renormalize)?;
    let protocol = load_protocol(protocol)?;
    let cut = Bipartition::parse(state.space(), cut)?;
    let m = measure_by_name(measure)?;
    let leaves = run_protocol(&state, &protocol)?;
    let mut out = String::new();
    let _ = writeln!(out, "{:<16} {:>16} {:>16}", "transcript", "probability", m.name());
    for leaf in &leaves {
        let (psi, c) = leaf_cut_state(leaf, &cut)?;
        let _ = writeln!(
            out,
            "{:<16} {:>16} {:>16}",
            leaf.transcript.join("/"),
            sig12(leaf.probability),
            sig12(m.evaluate(&psi, &c)?)
        );
    }
    let avg = average_final_entanglement(&leaves, &cut, m.as_ref())?;
    let _ = writeln!(out, "leaves   {}", leaves.len());
    let _ = writeln!(out, "average  {}", sig12(avg));
    Ok(out)
}

pub enum ScanArgs {
    Span { grid: usize, refine: usize, threads: usize },
    NCopy { copies: usize, samples: usize, seed: u64 },
}

pub fn scan(args: &ScanArgs) -> Result<String> {
    let mut out = String::new();
    match *args {
        ScanArgs::Span { grid, refine, threads } => {
            let cfg = SpanScanConfig {
                grid_points: grid,
                refine_iters: refine,
            };
            let r = parallel::span_scan(&cfg, threads)?;
            let (x, y) = r.argmin;
            let _ = writeln!(out, "min_deficit       {}", sig12(r.min_deficit));
            let _ = writeln!(out, "grid_min_deficit  {}", sig12(r.grid_min_deficit));
            let _ = writeln!(out, "argmin_x          {}", sig12_complex(x));
            let _ = writeln!(out, "argmin_y          {}", sig12_complex(y));
            let _ = writeln!(out, "samples           {}", r.samples);
        }
        ScanArgs::NCopy { copies, samples, seed } => {
            let r = ncopy_deficit_scan(copies, samples, seed)?;
            let _ = writeln!(out, "copies       {copies}");
            let _ = writeln!(out, "samples      {}", r.samples);
            let _ = writeln!(out, "min_deficit  {}", sig12(r.min_deficit));
            for (i, z) in r.argmin.iter().enumerate() {
                let _ = writeln!(out, "  coeff {i}  {}", sig12_complex(*z));
            }
        }
    }
    Ok(out)
}

/// Runs every claim and writes the report. The flag is `true` when all pass.
pub fn reproduce_to(out: Option<&Path>, cfg: &ReproduceConfig) -> Result<(String, ReportDocument)> {
    let doc = reproduce(cfg)?;
    let json = serde_json::to_string_pretty(&doc)? + "\n";
    let mut text = String::new();
    for c in &doc.claims {
        let _ = writeln!(
            text,
            "{:<28} {}  computed {}",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            sig12(c.computed)
        );
    }
    let _ = writeln!(text, "all_pass {}", doc.all_pass);
    match out {
        Some(path) => fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => text.push_str(&json),
    }
    Ok((text, doc))
}

pub enum ExportTarget<'a> {
    State(&'a str),
    Protocol(&'a str),
}

pub fn export(target: &ExportTarget<'_>, out: &Path) -> Result<String> {
    match *target {
        ExportTarget::State(name) => write_state(out, &catalog_state(name)?)?,
        ExportTarget::Protocol(name) => match builtin_protocol(name) {
            Some(p) => write_protocol(out, &p)?,
            None => bail!("unknown protocol `{name}`"),
        },
    }
    Ok(format!("wrote {}\n", out.display()))
}
