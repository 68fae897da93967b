//! Multi-threaded Boruvka.
//!
//! Every worker runs the same round loop over the whole edge list. Worker
//! `t` starts its scan at edge `⌊t·m/T⌋` and wraps around, so concurrent
//! scans touch different parts of the array. A worker only records minimum
//! edges for component roots it owns, and only merges along the minimum
//! edges of roots it still owns.
//!
//! Within a round the scan and merge phases of different workers overlap
//! freely. One barrier closes each round; its last arrival decides whether
//! the run is finished. Between that barrier and a second one the forest is
//! quiescent: each worker clears the minimum entries it owns and flattens a
//! fixed block of parent links.
//!
//! Two merge mechanisms are available:
//!
//! * [`Variant::Lock`]: take the permission entries of both roots, re-find
//!   both endpoints, and link only if the locked roots are still the roots.
//!   If another merge moved one of them, retry on the new roots; give up for
//!   this round as soon as an acquisition fails.
//! * [`Variant::Cas`]: swing the child root's parent link with one
//!   compare-exchange; the edge is recorded only if the swing succeeded.

use std::ops::Range;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use thiserror::Error;

use crate::barrier::RoundBarrier;
use crate::graph::{EdgeId, Graph, VertexId, NO_EDGE};
use crate::result::MstResult;
use crate::union_find::{block_range, ComponentForest, LockProtocol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MstError {
    #[error("at least one worker is required")]
    NoWorkers,
    #[error("worker {worker} panicked: {message}")]
    WorkerPanic { worker: usize, message: String },
    #[error("round {round} merged nothing with {components} components left")]
    NoProgress { round: usize, components: usize },
    #[error("worker {worker} found a cycle in the parent links")]
    CorruptForest { worker: usize },
    #[error("run aborted by another worker")]
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Lock(LockProtocol),
    Cas,
}

/// Static work assignment for `num_workers` workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerPlan {
    pub num_workers: usize,
    /// First edge scanned by each worker.
    pub edge_start: Vec<usize>,
    /// Initial vertex ownership and the block each worker flattens.
    pub owned: Vec<Range<usize>>,
}

impl WorkerPlan {
    /// Edge ids in the order worker `t` scans them: from its start offset to
    /// the end, then from 0.
    pub fn scan_order(&self, t: usize, m: usize) -> impl Iterator<Item = usize> {
        let start = self.edge_start[t];
        (start..m).chain(0..start)
    }
}

pub fn plan_workers(m: usize, n: usize, num_workers: usize) -> WorkerPlan {
    assert!(num_workers >= 1);
    WorkerPlan {
        num_workers,
        edge_start: (0..num_workers).map(|t| t * m / num_workers).collect(),
        owned: (0..num_workers)
            .map(|t| block_range(n, num_workers, t))
            .collect(),
    }
}

/// A finished parallel run together with the forest it left behind.
#[derive(Debug)]
pub struct ParallelRun {
    pub result: MstResult,
    pub forest: ComponentForest,
}

pub fn boruvka_lock(graph: &Graph, num_workers: usize) -> Result<MstResult, MstError> {
    run_parallel(graph, Variant::Lock(LockProtocol::Hardened), num_workers).map(|r| r.result)
}

pub fn boruvka_cas(graph: &Graph, num_workers: usize) -> Result<MstResult, MstError> {
    run_parallel(graph, Variant::Cas, num_workers).map(|r| r.result)
}

static YIELD_INJECTION: AtomicBool = AtomicBool::new(false);

/// Makes workers yield at random points inside the protocol so that
/// interleavings show up even on a single hardware thread. Testing aid.
#[doc(hidden)]
pub fn set_yield_injection(on: bool) {
    YIELD_INJECTION.store(on, Ordering::Relaxed);
}

#[inline(always)]
fn yield_point() {
    if YIELD_INJECTION.load(Ordering::Relaxed) {
        random_yield();
    }
}

#[cold]
fn random_yield() {
    use std::cell::Cell;
    thread_local!(static STATE: Cell<u64> = const { Cell::new(0x9E37_79B9_7F4A_7C15) });
    STATE.with(|s| {
        let mut x = s.get();
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        s.set(x);
        if x % 7 == 0 {
            std::thread::yield_now();
        }
    });
}

/// Roots a worker took over from another worker during the current round.
///
/// Their minimum entries were written by the previous owner, which may
/// still be scanning, so the new owner must not act on them until the next
/// round recomputes them.
struct Inherited {
    mark: Vec<bool>,
    list: Vec<VertexId>,
}

impl Inherited {
    fn new(n: usize) -> Self {
        Self {
            mark: vec![false; n],
            list: Vec::new(),
        }
    }

    /// Records `survivor` unless `tid` already owned it before the merge.
    fn note(&mut self, survivor: VertexId, previous: Option<usize>, tid: usize) {
        if previous != Some(tid) && !std::mem::replace(&mut self.mark[survivor as usize], true) {
            self.list.push(survivor);
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        self.mark[v as usize]
    }

    fn clear(&mut self) {
        for v in self.list.drain(..) {
            self.mark[v as usize] = false;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Verdict {
    Continue,
    Done,
    Stalled { components: usize },
}

struct Shared<'g> {
    graph: &'g Graph,
    forest: ComponentForest,
    minimum: Vec<AtomicU32>,
    /// Weight of the edge in `minimum`, written by the same owner.
    min_weight: Vec<AtomicU64>,
    plan: WorkerPlan,
    barrier: RoundBarrier<Verdict>,
    variant: Variant,
    last_live: AtomicUsize,
}

/// Runs one of the parallel variants with `num_workers` threads. Covered
/// flags are reset before the clock starts.
pub fn run_parallel(
    graph: &Graph,
    variant: Variant,
    num_workers: usize,
) -> Result<ParallelRun, MstError> {
    if num_workers == 0 {
        return Err(MstError::NoWorkers);
    }
    graph.reset_covered();
    let n = graph.n();
    let shared = Shared {
        graph,
        forest: ComponentForest::new(n, num_workers),
        minimum: (0..n).map(|_| AtomicU32::new(NO_EDGE)).collect(),
        min_weight: (0..n).map(|_| AtomicU64::new(0)).collect(),
        plan: plan_workers(graph.m(), n, num_workers),
        barrier: RoundBarrier::new(num_workers),
        variant,
        last_live: AtomicUsize::new(n),
    };

    let start = Instant::now();
    let outcomes: Vec<Result<(Vec<EdgeId>, usize), MstError>> = if n == 1 {
        vec![Ok((Vec::new(), 0))]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..num_workers)
                .map(|tid| {
                    let shared = &shared;
                    s.spawn(move || shared.run_worker(tid))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panics are caught"))
                .collect()
        })
    };
    let elapsed = start.elapsed();

    let mut mst = Vec::with_capacity(n - 1);
    let mut rounds = 0;
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok((edges, r)) => {
                mst.extend(edges);
                rounds = rounds.max(r);
            }
            Err(MstError::Aborted) => first_error = first_error.or(Some(MstError::Aborted)),
            Err(e) => {
                if matches!(first_error, None | Some(MstError::Aborted)) {
                    first_error = Some(e);
                }
            }
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    Ok(ParallelRun {
        result: MstResult::new(graph, mst, rounds, elapsed),
        forest: shared.forest,
    })
}

impl Shared<'_> {
    fn run_worker(&self, tid: usize) -> Result<(Vec<EdgeId>, usize), MstError> {
        let outcome = catch_unwind(AssertUnwindSafe(|| match self.variant {
            Variant::Lock(LockProtocol::Literal) => self.worker_loop(tid, |v| {
                self.forest
                    .find_bounded(v)
                    .ok_or(MstError::CorruptForest { worker: tid })
            }),
            _ => self.worker_loop(tid, |v| Ok(self.forest.find(v))),
        }));
        match outcome {
            Ok(Ok(out)) => Ok(out),
            Ok(Err(e)) => {
                self.barrier.abort();
                Err(e)
            }
            Err(payload) => {
                self.barrier.abort();
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_default();
                Err(MstError::WorkerPanic {
                    worker: tid,
                    message,
                })
            }
        }
    }

    fn worker_loop<F>(&self, tid: usize, find: F) -> Result<(Vec<EdgeId>, usize), MstError>
    where
        F: Fn(VertexId) -> Result<VertexId, MstError>,
    {
        let tid_cell = tid as i32;
        let mut mst = Vec::new();
        let mut rounds = 0;
        let mut inherited = Inherited::new(self.graph.n());
        loop {
            rounds += 1;
            self.scan(tid, tid_cell, &find)?;
            self.merge(tid, tid_cell, &find, &mut mst, &mut inherited)?;
            inherited.clear();

            let verdict = self
                .barrier
                .wait(|| self.decide())
                .map_err(|_| MstError::Aborted)?;
            match verdict {
                Verdict::Done => return Ok((mst, rounds)),
                Verdict::Stalled { components } => {
                    return Err(MstError::NoProgress {
                        round: rounds,
                        components,
                    })
                }
                Verdict::Continue => {}
            }

            for (v, slot) in self.minimum.iter().enumerate() {
                if self.forest.is_owned_by(v as VertexId, tid_cell) {
                    slot.store(NO_EDGE, Ordering::Release);
                }
            }
            self.forest.flatten(self.plan.owned[tid].clone());
            self.barrier
                .wait(|| Verdict::Continue)
                .map_err(|_| MstError::Aborted)?;
        }
    }

    /// Runs on the last worker to reach the end-of-round barrier.
    fn decide(&self) -> Verdict {
        let live = self.forest.component_count();
        if live <= 1 {
            return Verdict::Done;
        }
        if self.last_live.swap(live, Ordering::Relaxed) == live {
            Verdict::Stalled { components: live }
        } else {
            Verdict::Continue
        }
    }

    #[inline]
    fn offer(&self, root: VertexId, id: EdgeId, weight: u64, tid_cell: i32) {
        if !self.forest.is_owned_by(root, tid_cell) {
            return;
        }
        let slot = &self.minimum[root as usize];
        let best = &self.min_weight[root as usize];
        if slot.load(Ordering::Acquire) == NO_EDGE || best.load(Ordering::Relaxed) > weight {
            best.store(weight, Ordering::Relaxed);
            slot.store(id, Ordering::Release);
        }
    }

    fn scan<F>(&self, tid: usize, tid_cell: i32, find: &F) -> Result<(), MstError>
    where
        F: Fn(VertexId) -> Result<VertexId, MstError>,
    {
        let edges = self.graph.edges();
        for idx in self.plan.scan_order(tid, edges.len()) {
            let e = &edges[idx];
            if e.is_covered() {
                continue;
            }
            let c1 = find(e.src)?;
            yield_point();
            let c2 = find(e.dest)?;
            if c1 == c2 {
                e.set_covered();
                continue;
            }
            self.offer(c1, idx as EdgeId, e.weight, tid_cell);
            yield_point();
            self.offer(c2, idx as EdgeId, e.weight, tid_cell);
        }
        Ok(())
    }

    fn merge<F>(
        &self,
        tid: usize,
        tid_cell: i32,
        find: &F,
        mst: &mut Vec<EdgeId>,
        inherited: &mut Inherited,
    ) -> Result<(), MstError>
    where
        F: Fn(VertexId) -> Result<VertexId, MstError>,
    {
        let forest = &self.forest;
        for v in 0..self.graph.n() as VertexId {
            if !forest.is_owned_by(v, tid_cell) || !forest.is_root(v) || inherited.contains(v) {
                continue;
            }
            let chosen = self.minimum[v as usize].load(Ordering::Acquire);
            if chosen == NO_EDGE {
                continue;
            }
            let e = self.graph.edge(chosen);
            let c1 = find(e.src)?;
            let c2 = find(e.dest)?;
            if c1 == c2 {
                e.set_covered();
                continue;
            }
            yield_point();
            match self.variant {
                Variant::Cas => {
                    if let Some((survivor, previous)) = forest.union_cas(c1, c2, tid) {
                        inherited.note(survivor, previous, tid);
                        mst.push(chosen);
                        e.set_covered();
                    }
                }
                Variant::Lock(LockProtocol::Hardened) => {
                    let (mut a, mut b) = (c1, c2);
                    while forest.try_lock_pair(a, b, tid) {
                        // a and b cannot stop being roots while we hold them.
                        yield_point();
                        let (av, bv) = (forest.find(e.src), forest.find(e.dest));
                        let settled = if av == bv {
                            e.set_covered();
                            true
                        } else if (av, bv) == (a, b) {
                            mst.push(chosen);
                            inherited.note(av, forest.link_locked(av, bv, tid), tid);
                            e.set_covered();
                            true
                        } else {
                            false
                        };
                        forest
                            .unlock_pair(a, b, tid)
                            .expect("lock entries held by this worker");
                        if settled {
                            break;
                        }
                        (a, b) = (av, bv);
                    }
                }
                Variant::Lock(LockProtocol::Literal) => {
                    if forest.try_lock_pair_with(LockProtocol::Literal, c1, c2, tid) {
                        let ends = find(e.src).and_then(|a| Ok((a, find(e.dest)?)));
                        if let Ok((av, bv)) = ends {
                            if av != bv {
                                mst.push(chosen);
                                inherited.note(av, forest.link_locked(av, bv, tid), tid);
                                e.set_covered();
                            }
                        }
                        forest.unlock_pair_literal(c1, c2);
                        ends?;
                    }
                }
            }
        }
        Ok(())
    }
}
