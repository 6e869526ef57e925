//! Multi-threaded ensembles.
//!
//! Members advance in windows of [`WINDOW`] steps, each writing its own row of
//! a member-major buffer; quantiles are then taken column by column. The
//! per-member random streams make the output independent of thread count.

use rayon::prelude::*;
use thermoecon_core::dynamics::{Band, EnsemblePlan, EnsembleResult, Member, ScenarioParams};

pub const WINDOW: usize = 200;

pub fn run_ensemble(params: &ScenarioParams, threads: Option<usize>) -> thermoecon_core::Result<EnsembleResult> {
    let plan = EnsemblePlan::new(params)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().expect("thread pool");
    Ok(pool.install(|| run_with(&plan)))
}

fn run_with(plan: &EnsemblePlan) -> EnsembleResult {
    let n = plan.members();
    let steps = plan.steps();
    let mut members: Vec<Member> = (0..n).into_par_iter().map(|i| plan.member(i)).collect();
    let (e0, w0) = plan.initial_bands();
    let mut eta_bands = Vec::with_capacity(steps + 1);
    let mut wealth_bands = Vec::with_capacity(steps + 1);
    eta_bands.push(e0);
    wealth_bands.push(w0);

    let width = WINDOW.min(steps);
    let mut eta_buf = vec![0.0; n * width];
    let mut wealth_buf = vec![0.0; n * width];
    let mut done = 0;
    while done < steps {
        let len = width.min(steps - done);
        let eta_rows = &mut eta_buf[..n * len];
        let wealth_rows = &mut wealth_buf[..n * len];
        members
            .par_iter_mut()
            .zip(eta_rows.par_chunks_mut(len))
            .zip(wealth_rows.par_chunks_mut(len))
            .for_each(|((m, e), w)| plan.advance(m, e, w));

        let (eta_rows, wealth_rows) = (&*eta_rows, &*wealth_rows);
        let window: Vec<(Band, Band)> = (0..len)
            .into_par_iter()
            .map_init(
                || (vec![0.0; n], vec![0.0; n]),
                |(ec, wc), s| {
                    for j in 0..n {
                        ec[j] = eta_rows[j * len + s];
                        wc[j] = wealth_rows[j * len + s];
                    }
                    (Band::from_values(ec), Band::from_values(wc))
                },
            )
            .collect();
        for (e, w) in window {
            eta_bands.push(e);
            wealth_bands.push(w);
        }
        done += len;
    }
    let collapsed = members.iter().filter(|m| m.is_collapsed()).count();
    plan.finish(eta_bands, wealth_bands, collapsed)
}
