//! The component forest shared by every Boruvka variant.
//!
//! Each vertex carries four single-word cells: its parent link, the size of
//! the component it roots, the worker that owns it and the worker that holds
//! its merge permission. All cells are atomics so one forest can be shared by
//! every worker of a parallel run. Sequential callers pay only for relaxed
//! loads and stores.

use std::ops::Range;
use std::sync::atomic::{AtomicI32, AtomicU32, AtomicUsize, Ordering};

use thiserror::Error;

use crate::graph::VertexId;

const FREE: i32 = -1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("vertex {0} is not a component root")]
    NotARoot(VertexId),
    #[error("cannot merge component {0} with itself")]
    SameRoot(VertexId),
    #[error("worker {caller} does not hold the lock on {vertex} (holder: {holder:?})")]
    NotHeld {
        vertex: VertexId,
        holder: Option<usize>,
        caller: usize,
    },
}

/// How merge permissions are acquired by the lock-based variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LockProtocol {
    /// Per-entry compare-exchange, lower vertex id first. At most one
    /// worker can hold any entry, and a failed attempt releases whatever it
    /// acquired.
    #[default]
    Hardened,
    /// Check both entries, store with plain writes, then re-check. Two
    /// workers can both pass the re-check on a shared entry, so this mode
    /// does not provide mutual exclusion. Kept for experiments only.
    Literal,
}

#[derive(Debug)]
pub struct ComponentForest {
    parent: Vec<AtomicU32>,
    size: Vec<AtomicU32>,
    owner: Vec<AtomicI32>,
    lock: Vec<AtomicI32>,
    live: AtomicUsize,
}

/// Vertex range owned by `worker` under the block partition of `n`
/// vertices among `workers`.
pub fn block_range(n: usize, workers: usize, worker: usize) -> Range<usize> {
    let chunk = n.div_ceil(workers);
    let start = (worker * chunk).min(n);
    start..((worker + 1) * chunk).min(n)
}

fn tid_cell(tid: usize) -> i32 {
    i32::try_from(tid).expect("worker id exceeds i32")
}

fn decode(cell: i32) -> Option<usize> {
    (cell >= 0).then_some(cell as usize)
}

impl ComponentForest {
    /// A forest of `n` singleton trees. Worker `t` owns the block
    /// `[t·⌈n/T⌉, (t+1)·⌈n/T⌉)`.
    pub fn new(n: usize, num_workers: usize) -> Self {
        assert!(n >= 1, "forest needs at least one vertex");
        assert!(num_workers >= 1, "forest needs at least one worker");
        assert!(n <= VertexId::MAX as usize);
        let owner = (0..num_workers)
            .flat_map(|t| block_range(n, num_workers, t).map(move |_| AtomicI32::new(tid_cell(t))))
            .collect();
        Self {
            parent: (0..n as VertexId).map(AtomicU32::new).collect(),
            size: (0..n).map(|_| AtomicU32::new(1)).collect(),
            owner,
            lock: (0..n).map(|_| AtomicI32::new(FREE)).collect(),
            live: AtomicUsize::new(n),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn parent(&self, v: VertexId) -> VertexId {
        self.parent[v as usize].load(Ordering::Acquire)
    }

    #[inline]
    pub fn is_root(&self, v: VertexId) -> bool {
        self.parent(v) == v
    }

    /// Root of `v`'s tree. Read-only, so it is safe to call while other
    /// workers merge components; the answer was `v`'s root at some instant
    /// during the call.
    #[inline]
    pub fn find(&self, mut v: VertexId) -> VertexId {
        loop {
            let p = self.parent(v);
            if p == v {
                return v;
            }
            v = p;
        }
    }

    /// Like [`find`](Self::find) but gives up after `len()` steps, which
    /// only happens if the parent links contain a cycle.
    pub fn find_bounded(&self, mut v: VertexId) -> Option<VertexId> {
        for _ in 0..=self.len() {
            let p = self.parent(v);
            if p == v {
                return Some(v);
            }
            v = p;
        }
        None
    }

    /// Find with path halving. Only valid without concurrent mutation.
    #[inline]
    pub fn find_halving(&self, mut v: VertexId) -> VertexId {
        loop {
            let p = self.parent[v as usize].load(Ordering::Relaxed);
            if p == v {
                return v;
            }
            let gp = self.parent[p as usize].load(Ordering::Relaxed);
            self.parent[v as usize].store(gp, Ordering::Relaxed);
            v = gp;
        }
    }

    /// Points every non-root vertex in `range` directly at its root.
    ///
    /// Roots are never written, so this may overlap with finds and with
    /// parent swings on roots: every stored value is an ancestor of the
    /// vertex it is stored into.
    pub fn flatten(&self, range: Range<usize>) {
        for v in range {
            let v = v as VertexId;
            let p = self.parent(v);
            if p != v {
                let root = self.find(p);
                if root != p {
                    self.parent[v as usize].store(root, Ordering::Release);
                }
            }
        }
    }

    pub fn size(&self, v: VertexId) -> u32 {
        self.size[v as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn owner(&self, v: VertexId) -> Option<usize> {
        decode(self.owner[v as usize].load(Ordering::Acquire))
    }

    #[inline]
    pub(crate) fn is_owned_by(&self, v: VertexId, tid: i32) -> bool {
        self.owner[v as usize].load(Ordering::Acquire) == tid
    }

    pub fn set_owner(&self, v: VertexId, tid: usize) {
        self.owner[v as usize].store(tid_cell(tid), Ordering::Release);
    }

    pub fn lock_holder(&self, v: VertexId) -> Option<usize> {
        decode(self.lock[v as usize].load(Ordering::SeqCst))
    }

    /// Number of components, decremented on every successful union.
    pub fn component_count(&self) -> usize {
        self.live.load(Ordering::SeqCst)
    }

    fn drop_component(&self) {
        // Saturating: under the literal lock protocol two workers can merge
        // the same child.
        let _ = self
            .live
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |c| c.checked_sub(1));
    }

    /// Merges two roots, keeping the root of the larger component (ties go
    /// to `r1`). Requires exclusive access to both trees.
    pub fn union_by_size(&self, r1: VertexId, r2: VertexId) -> Result<VertexId, ForestError> {
        if r1 == r2 {
            return Err(ForestError::SameRoot(r1));
        }
        for r in [r1, r2] {
            if !self.is_root(r) {
                return Err(ForestError::NotARoot(r));
            }
        }
        let (s1, s2) = (self.size(r1), self.size(r2));
        let (survivor, child) = if s2 > s1 { (r2, r1) } else { (r1, r2) };
        self.parent[child as usize].store(survivor, Ordering::Relaxed);
        self.size[survivor as usize].store(s1 + s2, Ordering::Relaxed);
        self.drop_component();
        Ok(survivor)
    }

    /// Hangs root `child` under `survivor` while the caller holds both
    /// lock entries, then hands `survivor` to `tid`. Returns the previous
    /// owner of `survivor`.
    pub(crate) fn link_locked(
        &self,
        survivor: VertexId,
        child: VertexId,
        tid: usize,
    ) -> Option<usize> {
        self.parent[child as usize].store(survivor, Ordering::Release);
        self.size[survivor as usize].fetch_add(self.size(child), Ordering::Relaxed);
        let previous = self.take_ownership(survivor, tid);
        self.drop_component();
        previous
    }

    fn take_ownership(&self, v: VertexId, tid: usize) -> Option<usize> {
        decode(self.owner[v as usize].swap(tid_cell(tid), Ordering::AcqRel))
    }

    /// Non-blocking attempt to hold the lock entries of `c1` and `c2`.
    pub fn try_lock_pair(&self, c1: VertexId, c2: VertexId, tid: usize) -> bool {
        self.try_lock_pair_with(LockProtocol::Hardened, c1, c2, tid)
    }

    pub fn try_lock_pair_with(
        &self,
        protocol: LockProtocol,
        c1: VertexId,
        c2: VertexId,
        tid: usize,
    ) -> bool {
        let mut attempt = LockAttempt::new(protocol, c1, c2, tid);
        loop {
            if let Some(done) = attempt.step(self) {
                return done;
            }
        }
    }

    /// Releases both entries. Fails without touching anything if either
    /// entry is not held by `tid`.
    pub fn unlock_pair(&self, c1: VertexId, c2: VertexId, tid: usize) -> Result<(), ForestError> {
        let cell = tid_cell(tid);
        for v in [c1, c2] {
            let holder = self.lock[v as usize].load(Ordering::SeqCst);
            if holder != cell {
                return Err(ForestError::NotHeld {
                    vertex: v,
                    holder: decode(holder),
                    caller: tid,
                });
            }
        }
        for v in [c1, c2] {
            let _ = self.lock[v as usize].compare_exchange(
                cell,
                FREE,
                Ordering::SeqCst,
                Ordering::SeqCst,
            );
        }
        Ok(())
    }

    /// Unconditional plain release used with [`LockProtocol::Literal`].
    pub(crate) fn unlock_pair_literal(&self, c1: VertexId, c2: VertexId) {
        self.lock[c1 as usize].store(FREE, Ordering::SeqCst);
        self.lock[c2 as usize].store(FREE, Ordering::SeqCst);
    }

    /// Merges the components rooted at `c1` and `c2` with one
    /// compare-exchange on the child's parent cell.
    ///
    /// The larger vertex id always becomes the child, so parent links only
    /// ever point to smaller ids and no interleaving of swings can close a
    /// cycle. Returns `false`, leaving the forest untouched, if the child
    /// stopped being a root before the swing.
    pub fn try_union_cas(&self, c1: VertexId, c2: VertexId, tid: usize) -> bool {
        self.union_cas(c1, c2, tid).is_some()
    }

    /// [`try_union_cas`](Self::try_union_cas) returning the survivor and its
    /// previous owner on success.
    pub(crate) fn union_cas(
        &self,
        c1: VertexId,
        c2: VertexId,
        tid: usize,
    ) -> Option<(VertexId, Option<usize>)> {
        if c1 == c2 {
            return None;
        }
        let (survivor, child) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
        self.parent[child as usize]
            .compare_exchange(child, survivor, Ordering::AcqRel, Ordering::Acquire)
            .ok()?;
        let previous = self.take_ownership(survivor, tid);
        self.size[survivor as usize].fetch_add(self.size(child), Ordering::Relaxed);
        self.drop_component();
        Some((survivor, previous))
    }

    /// True if no lock entry is held.
    pub fn all_unlocked(&self) -> bool {
        self.lock.iter().all(|l| l.load(Ordering::SeqCst) == FREE)
    }

    /// Roots reachable by following parent links; `None` if some walk does
    /// not terminate within `len()` steps.
    pub fn count_roots(&self) -> Option<usize> {
        let mut roots = 0;
        for v in 0..self.len() as VertexId {
            self.find_bounded(v)?;
            roots += usize::from(self.is_root(v));
        }
        Some(roots)
    }
}

/// A single lock-pair acquisition, advanced one atomic access at a time.
///
/// [`ComponentForest::try_lock_pair`] drives it to completion in a loop;
/// [`crate::schedule`] interleaves several attempts step by step to explore
/// every schedule.
#[derive(Debug, Clone)]
pub struct LockAttempt {
    protocol: LockProtocol,
    c1: VertexId,
    c2: VertexId,
    tid: i32,
    pc: u8,
}

impl LockAttempt {
    pub fn new(protocol: LockProtocol, c1: VertexId, c2: VertexId, tid: usize) -> Self {
        debug_assert_ne!(c1, c2);
        Self {
            protocol,
            c1,
            c2,
            tid: tid_cell(tid),
            pc: 0,
        }
    }

    fn load(&self, f: &ComponentForest, v: VertexId) -> i32 {
        f.lock[v as usize].load(Ordering::SeqCst)
    }

    fn cas(&self, f: &ComponentForest, v: VertexId, from: i32, to: i32) -> bool {
        f.lock[v as usize]
            .compare_exchange(from, to, Ordering::SeqCst, Ordering::SeqCst)
            .is_ok()
    }

    /// Performs one shared-memory access. Returns the outcome once the
    /// attempt is finished.
    pub fn step(&mut self, f: &ComponentForest) -> Option<bool> {
        match self.protocol {
            LockProtocol::Hardened => self.step_hardened(f),
            LockProtocol::Literal => self.step_literal(f),
        }
    }

    fn step_hardened(&mut self, f: &ComponentForest) -> Option<bool> {
        let (lo, hi) = (self.c1.min(self.c2), self.c1.max(self.c2));
        match self.pc {
            0 | 1 => {
                let v = if self.pc == 0 { self.c1 } else { self.c2 };
                if self.load(f, v) != FREE {
                    return Some(false);
                }
                self.pc += 1;
                None
            }
            2 => {
                if !self.cas(f, lo, FREE, self.tid) {
                    return Some(false);
                }
                self.pc = 3;
                None
            }
            3 => {
                if self.cas(f, hi, FREE, self.tid) {
                    return Some(true);
                }
                self.pc = 4;
                None
            }
            _ => {
                self.cas(f, lo, self.tid, FREE);
                Some(false)
            }
        }
    }

    fn step_literal(&mut self, f: &ComponentForest) -> Option<bool> {
        match self.pc {
            0 | 1 => {
                let v = if self.pc == 0 { self.c1 } else { self.c2 };
                self.pc = if self.load(f, v) == FREE {
                    self.pc + 1
                } else {
                    4
                };
                None
            }
            2 | 3 => {
                let v = if self.pc == 2 { self.c1 } else { self.c2 };
                f.lock[v as usize].store(self.tid, Ordering::SeqCst);
                self.pc += 1;
                None
            }
            4 | 5 => {
                let v = if self.pc == 4 { self.c1 } else { self.c2 };
                if self.load(f, v) != self.tid {
                    self.pc = 6;
                    return None;
                }
                if self.pc == 5 {
                    return Some(true);
                }
                self.pc = 5;
                None
            }
            // Failed re-check: release whatever still carries our id.
            6 => {
                self.cas(f, self.c1, self.tid, FREE);
                self.pc = 7;
                None
            }
            _ => {
                self.cas(f, self.c2, self.tid, FREE);
                Some(false)
            }
        }
    }
}
