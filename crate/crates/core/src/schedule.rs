//! Exhaustive schedule exploration for the lock-pair protocol.
//!
//! Every worker runs `try_lock_pair` on its pair, and on success enters a
//! critical section and releases. Each shared-memory access is one step of a
//! [`LockAttempt`]; entering and leaving the critical section are one step
//! each. The explorer replays every interleaving of those steps against a
//! real [`ComponentForest`] and counts schedules in which two workers sit in
//! their critical sections on overlapping components at the same time.
//!
//! [`shadow_stress`] is the randomized counterpart on real threads.

use std::sync::atomic::{AtomicI32, AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::union_find::{ComponentForest, LockAttempt, LockProtocol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Exploration {
    /// Complete interleavings executed.
    pub schedules: usize,
    /// Interleavings in which mutual exclusion was broken.
    pub violating_schedules: usize,
    /// Interleavings that ended with a lock entry still held.
    pub leaked_schedules: usize,
    /// Interleavings in which no worker acquired its pair.
    pub all_failed_schedules: usize,
}

#[derive(Clone)]
enum Phase {
    Locking(LockAttempt),
    Enter,
    Leave,
    Done,
}

struct Run {
    forest: ComponentForest,
    phases: Vec<Phase>,
    in_cs: Vec<bool>,
    acquired: usize,
    violated: bool,
}

impl Run {
    fn new(protocol: LockProtocol, n: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        Self {
            forest: ComponentForest::new(n, pairs.len()),
            phases: pairs
                .iter()
                .enumerate()
                .map(|(t, &(a, b))| Phase::Locking(LockAttempt::new(protocol, a, b, t)))
                .collect(),
            in_cs: vec![false; pairs.len()],
            acquired: 0,
            violated: false,
        }
    }

    fn enabled(&self) -> Vec<usize> {
        (0..self.phases.len())
            .filter(|&w| !matches!(self.phases[w], Phase::Done))
            .collect()
    }

    fn step(&mut self, w: usize, protocol: LockProtocol, pairs: &[(VertexId, VertexId)]) {
        let (a, b) = pairs[w];
        self.phases[w] = match std::mem::replace(&mut self.phases[w], Phase::Done) {
            Phase::Locking(mut attempt) => match attempt.step(&self.forest) {
                None => Phase::Locking(attempt),
                Some(true) => Phase::Enter,
                Some(false) => Phase::Done,
            },
            Phase::Enter => {
                let clash = (0..pairs.len()).any(|o| {
                    o != w && self.in_cs[o] && {
                        let (c, d) = pairs[o];
                        a == c || a == d || b == c || b == d
                    }
                });
                self.violated |= clash;
                self.in_cs[w] = true;
                self.acquired += 1;
                Phase::Leave
            }
            Phase::Leave => {
                self.in_cs[w] = false;
                match protocol {
                    LockProtocol::Hardened => self
                        .forest
                        .unlock_pair(a, b, w)
                        .expect("hardened holder must own both entries"),
                    LockProtocol::Literal => self.forest.unlock_pair_literal(a, b),
                }
                Phase::Done
            }
            Phase::Done => unreachable!("stepped a finished worker"),
        };
    }
}

/// Explores every interleaving of `pairs.len()` workers, worker `t` locking
/// `pairs[t]` on a forest of `n` vertices.
pub fn explore_lock_pairs(
    protocol: LockProtocol,
    n: usize,
    pairs: &[(VertexId, VertexId)],
) -> Exploration {
    let mut out = Exploration::default();
    let mut prefix = Vec::new();
    dfs(protocol, n, pairs, &mut prefix, &mut out);
    out
}

fn dfs(
    protocol: LockProtocol,
    n: usize,
    pairs: &[(VertexId, VertexId)],
    prefix: &mut Vec<usize>,
    out: &mut Exploration,
) {
    let mut run = Run::new(protocol, n, pairs);
    for &w in prefix.iter() {
        run.step(w, protocol, pairs);
    }
    let enabled = run.enabled();
    if enabled.is_empty() {
        out.schedules += 1;
        out.violating_schedules += usize::from(run.violated);
        out.leaked_schedules += usize::from(!run.forest.all_unlocked());
        out.all_failed_schedules += usize::from(run.acquired == 0);
        return;
    }
    for w in enabled {
        prefix.push(w);
        dfs(protocol, n, pairs, prefix, out);
        prefix.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StressReport {
    /// Successful `try_lock_pair` calls over all workers.
    pub acquired: usize,
    /// Shadow cells found taken on entry or changed before exit.
    pub violations: usize,
    /// Whether every lock entry was free once all workers finished.
    pub unlocked_after: bool,
}

/// Runs `workers` threads for `iterations` lock attempts each on random
/// distinct pairs out of `components`. Inside the critical section each
/// holder claims a shadow cell per component; finding one already claimed
/// means two workers hold the same component at once.
pub fn shadow_stress(
    protocol: LockProtocol,
    components: usize,
    workers: usize,
    iterations: usize,
    seed: u64,
) -> StressReport {
    assert!(components >= 2, "need two components to form a pair");
    let forest = ComponentForest::new(components, workers);
    let shadow: Vec<AtomicI32> = (0..components).map(|_| AtomicI32::new(-1)).collect();
    let violations = AtomicUsize::new(0);
    let acquired = AtomicUsize::new(0);
    let k = components as u32;

    std::thread::scope(|s| {
        for tid in 0..workers {
            let (forest, shadow, violations, acquired) = (&forest, &shadow, &violations, &acquired);
            s.spawn(move || {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ (tid as u64).wrapping_mul(0x9e37_79b9));
                for _ in 0..iterations {
                    let a = rng.random_range(0..k);
                    let b = (a + rng.random_range(1..k)) % k;
                    if !forest.try_lock_pair_with(protocol, a, b, tid) {
                        continue;
                    }
                    acquired.fetch_add(1, Ordering::Relaxed);
                    for c in [a, b] {
                        if shadow[c as usize].swap(tid as i32, Ordering::SeqCst) != -1 {
                            violations.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                    std::hint::spin_loop();
                    for c in [a, b] {
                        if shadow[c as usize]
                            .compare_exchange(tid as i32, -1, Ordering::SeqCst, Ordering::SeqCst)
                            .is_err()
                        {
                            violations.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                    match protocol {
                        LockProtocol::Hardened => forest
                            .unlock_pair(a, b, tid)
                            .expect("holder releases its own pair"),
                        LockProtocol::Literal => forest.unlock_pair_literal(a, b),
                    }
                }
            });
        }
    });
    StressReport {
        acquired: acquired.into_inner(),
        violations: violations.into_inner(),
        unlocked_after: forest.all_unlocked(),
    }
}
