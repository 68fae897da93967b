//! Reusable round barrier whose last arrival decides a value for everyone.

use std::sync::{Condvar, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Aborted;

struct State<T> {
    arrived: usize,
    generation: u64,
    decision: Option<T>,
    aborted: bool,
}

pub(crate) struct RoundBarrier<T> {
    parties: usize,
    state: Mutex<State<T>>,
    cv: Condvar,
}

impl<T: Copy> RoundBarrier<T> {
    pub(crate) fn new(parties: usize) -> Self {
        Self {
            parties,
            state: Mutex::new(State {
                arrived: 0,
                generation: 0,
                decision: None,
                aborted: false,
            }),
            cv: Condvar::new(),
        }
    }

    /// Blocks until all parties arrive. The last one runs `decide` while the
    /// others are parked, and every party returns its result. All parties
    /// therefore see the same value even if shared state changes right
    /// after the barrier opens.
    pub(crate) fn wait<F: FnOnce() -> T>(&self, decide: F) -> Result<T, Aborted> {
        let mut st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        if st.aborted {
            return Err(Aborted);
        }
        st.arrived += 1;
        if st.arrived == self.parties {
            let value = decide();
            st.arrived = 0;
            st.generation += 1;
            st.decision = Some(value);
            self.cv.notify_all();
            return Ok(value);
        }
        let generation = st.generation;
        while st.generation == generation && !st.aborted {
            st = self.cv.wait(st).unwrap_or_else(|e| e.into_inner());
        }
        if st.generation == generation {
            return Err(Aborted);
        }
        Ok(st.decision.expect("decision published with generation"))
    }

    /// Releases every current and future waiter with [`Aborted`].
    pub(crate) fn abort(&self) {
        let mut st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        st.aborted = true;
        self.cv.notify_all();
    }
}
