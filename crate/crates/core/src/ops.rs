//! Per-thread counters of algebra operations, used to check the cubic and
//! quartic operation bounds of the decision procedures.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub join: u64,
    pub compose: u64,
    pub star: u64,
    pub omega: u64,
    pub act: u64,
    pub join_pred: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.join + self.compose + self.star + self.omega + self.act + self.join_pred
    }
}

#[derive(Clone, Copy)]
pub(crate) enum Op {
    Join,
    Compose,
    Star,
    Omega,
    Act,
    JoinPred,
}

thread_local! {
    static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts {
        join: 0, compose: 0, star: 0, omega: 0, act: 0, join_pred: 0,
    }) };
}

pub(crate) fn record(op: Op) {
    COUNTS.with(|c| {
        let mut v = c.get();
        match op {
            Op::Join => v.join += 1,
            Op::Compose => v.compose += 1,
            Op::Star => v.star += 1,
            Op::Omega => v.omega += 1,
            Op::Act => v.act += 1,
            Op::JoinPred => v.join_pred += 1,
        }
        c.set(v);
    });
}

pub fn snapshot() -> OpCounts {
    COUNTS.with(|c| c.get())
}

/// Runs `f` and returns its result with the operations it performed on this thread.
pub fn counting<R>(f: impl FnOnce() -> R) -> (R, OpCounts) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    let delta = OpCounts {
        join: after.join - before.join,
        compose: after.compose - before.compose,
        star: after.star - before.star,
        omega: after.omega - before.omega,
        act: after.act - before.act,
        join_pred: after.join_pred - before.join_pred,
    };
    (out, delta)
}
