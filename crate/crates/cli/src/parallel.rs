//! Scoped worker pool for coarse per-system jobs.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

/// Apply `f` to every item on up to `threads` workers, preserving input
/// order in the output. Jobs are pulled from a shared counter, so uneven
/// per-item cost balances itself; a single worker degenerates to a plain
/// loop.
pub fn parallel_map<T, U, F>(items: Vec<T>, threads: usize, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync,
{
    let n = items.len();
    let workers = threads.max(1).min(n);
    if workers <= 1 {
        return items.into_iter().map(&f).collect();
    }
    let slots: Vec<Mutex<Option<T>>> = items.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let next = AtomicUsize::new(0);
    let partials: Vec<Vec<(usize, U)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= n {
                            break;
                        }
                        let item = slots[i]
                            .lock()
                            .expect("job slot poisoned")
                            .take()
                            .expect("each job slot is taken once");
                        local.push((i, f(item)));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out: Vec<Option<U>> = (0..n).map(|_| None).collect();
    for (i, u) in partials.into_iter().flatten() {
        out[i] = Some(u);
    }
    out.into_iter()
        .map(|u| u.expect("every index was processed"))
        .collect()
}
