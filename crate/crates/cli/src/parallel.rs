//! Multi-threaded branch and bound. Workers share one search state behind a
//! mutex and solve subproblems outside it. The returned maximizer equals the
//! sequential one; node counts may differ between runs.

use std::sync::{Condvar, Mutex};
use std::thread;

use setmax_core::bb::{bb_prepare, BbState, Prepared, Relaxation, Unconstrained};
use setmax_core::{BbConfig, BbOutcome, Decomposition, Error, SetFunction};

struct Shared {
    state: BbState,
    in_flight: usize,
    error: Option<Error>,
}

pub fn parallel_bb<F>(dec: &Decomposition<F>, cfg: &BbConfig, threads: usize) -> Result<BbOutcome, Error>
where
    F: SetFunction + Sync,
{
    let state = match bb_prepare(dec, cfg)? {
        Prepared::Solved(out) => return Ok(out),
        Prepared::Search(state) => state,
    };
    let relax = Unconstrained::new(dec, cfg);
    let shared = Mutex::new(Shared { state, in_flight: 0, error: None });
    let wake = Condvar::new();
    thread::scope(|scope| {
        for _ in 0..threads.max(1) {
            scope.spawn(|| worker(&shared, &wake, &relax, cfg));
        }
    });
    let shared = shared.into_inner().expect("worker panicked");
    match shared.error {
        Some(e) => Err(e),
        None => Ok(shared.state.outcome()),
    }
}

fn worker<R: Relaxation + ?Sized>(shared: &Mutex<Shared>, wake: &Condvar, relax: &R, cfg: &BbConfig) {
    let mut guard = shared.lock().expect("poisoned");
    loop {
        if guard.error.is_some() {
            return;
        }
        let capped = cfg.node_cap.is_some_and(|cap| guard.state.stats().nodes_visited + guard.in_flight >= cap);
        let node = if capped { None } else { guard.state.pop(cfg.depth_limit) };
        let Some(node) = node else {
            if guard.in_flight == 0 {
                wake.notify_all();
                return;
            }
            guard = wake.wait(guard).expect("poisoned");
            continue;
        };
        guard.in_flight += 1;
        drop(guard);
        let result = relax.solve(&node);
        guard = shared.lock().expect("poisoned");
        guard.in_flight -= 1;
        match result {
            Ok(r) => {
                guard.state.record(node, &r, cfg.disable_pruning);
            }
            Err(e) => {
                guard.state.reopen(node);
                guard.error.get_or_insert(e);
            }
        }
        wake.notify_all();
    }
}
