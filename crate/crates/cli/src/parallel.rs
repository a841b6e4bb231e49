//! Thread fan-out for restarts and scan rows. Every unit of work is a pure
//! function of its index and results are merged by order-independent
//! reductions, so any thread count gives the single-threaded result.

use std::thread;

use anyhow::Result;
use entassist_core::assistance::{
    select_best, span_refine, span_scan_rows, EoaProblem, EoaResult, GridBest, RestartOutcome, SpanScanConfig,
    SpanScanResult,
};

/// All restarts of `problem` spread over `threads` workers.
pub fn solve_eoa(problem: &EoaProblem<'_>, threads: usize) -> Result<EoaResult> {
    let n = problem.config().restarts;
    let threads = threads.clamp(1, n.max(1));
    let outcomes: Vec<RestartOutcome> = if threads == 1 {
        (0..n).map(|k| problem.run_restart(k)).collect()
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    s.spawn(move || {
                        (t..n)
                            .step_by(threads)
                            .map(|k| problem.run_restart(k))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("restart worker panicked"))
                .collect()
        })
    };
    let best = select_best(outcomes).ok_or_else(|| anyhow::anyhow!("no restarts requested"))?;
    Ok(problem.finish(best, n)?)
}

/// Grid rows split into contiguous blocks, merged, then refined.
pub fn span_scan(cfg: &SpanScanConfig, threads: usize) -> Result<SpanScanResult> {
    let g = cfg.grid_points;
    let threads = threads.clamp(1, g.max(1));
    let chunk = g.div_ceil(threads);
    let parts: Vec<Result<GridBest, _>> = if threads == 1 {
        vec![span_scan_rows(cfg, 0..g)]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| s.spawn(move || span_scan_rows(cfg, t * chunk..((t + 1) * chunk).min(g))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };
    let mut best: Option<GridBest> = None;
    for p in parts {
        let p = p?;
        best = Some(match best {
            Some(b) => b.merge(p),
            None => p,
        });
    }
    Ok(span_refine(cfg, best.expect("at least one block"))?)
}
