use std::time::Instant;

use crate::interval::{Time, EPS};
use crate::search_core::{successors_into, CopyKind, NodeArena, NodeKey, StateAt, SuccessorScratch, TimedGraph};

use super::{finish, start_interval, ExpansionRecord, OpenList, Outcome, ProblemInstance, Solution, Stats};

#[derive(Clone, Copy, Debug)]
pub(super) enum Scheme {
    /// `g + w·h` with reopening (`w = 1` is plain SIPP).
    Weighted { weight: f64 },
    /// Optimal/suboptimal copies, never reopened.
    Duplicate { weight: f64 },
}

impl Scheme {
    fn priority(self, copy: CopyKind, g: Time, h: Time) -> Time {
        match (self, copy) {
            (Scheme::Weighted { weight }, _) => g + weight * h,
            (Scheme::Duplicate { weight }, CopyKind::Optimal) => weight * (g + h),
            (Scheme::Duplicate { weight }, _) => g + weight * h,
        }
    }

    fn start_copy(self) -> CopyKind {
        match self {
            Scheme::Weighted { .. } => CopyKind::Plain,
            Scheme::Duplicate { .. } => CopyKind::Optimal,
        }
    }

    /// Copies generated for the successors of an expanded `copy`.
    fn child_copies(self, copy: CopyKind) -> &'static [CopyKind] {
        match copy {
            CopyKind::Plain => &[CopyKind::Plain],
            CopyKind::Optimal => &[CopyKind::Optimal, CopyKind::Suboptimal],
            CopyKind::Suboptimal => &[CopyKind::Suboptimal],
        }
    }
}

const DEADLINE_CHECK_EVERY: u64 = 256;

pub(super) fn run<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>, scheme: Scheme) -> Solution {
    let started = Instant::now();
    let mut arena = NodeArena::new();
    let mut stats = Stats::default();
    let mut trace = Vec::new();
    let Some(start_iv) = start_interval(p) else {
        return finish(Outcome::Failure, &arena, None, stats, trace, started);
    };
    let reopen = matches!(scheme, Scheme::Weighted { .. }) && p.options.allow_reexpansion;

    let mut open = OpenList::new();
    let start_key = NodeKey {
        vertex: p.start,
        interval: start_iv,
        heading: p.start_heading,
        copy: scheme.start_copy(),
    };
    let (root, _) = arena.get_or_insert(start_key, p.heuristic.value(p.start));
    arena[root].g = 0.0;
    stats.generated = 1;
    open.push(root, scheme.priority(start_key.copy, 0.0, arena[root].h), 0.0);

    let mut scratch = SuccessorScratch::default();
    let mut succ = Vec::new();
    while let Some(entry) = open.pop() {
        let id = entry.node;
        if arena[id].closed || entry.g != arena[id].g {
            continue;
        }
        if let Some(deadline) = p.options.deadline {
            if stats.expansions % DEADLINE_CHECK_EVERY == 0 && Instant::now() >= deadline {
                return finish(Outcome::Timeout, &arena, None, stats, trace, started);
            }
        }

        let node = &mut arena[id];
        node.closed = true;
        node.expansions += 1;
        let (key, g, h) = (node.key, node.g, node.h);
        stats.expansions += 1;
        match key.copy {
            CopyKind::Plain if node.expansions > 1 => stats.reexpansions += 1,
            CopyKind::Optimal | CopyKind::Suboptimal => {
                let twin = NodeKey {
                    copy: if key.copy == CopyKind::Optimal { CopyKind::Suboptimal } else { CopyKind::Optimal },
                    ..key
                };
                if arena.find(&twin).is_some_and(|t| arena[t].expansions > 0) {
                    stats.reexpansions += 1;
                }
            }
            _ => {}
        }
        if p.options.trace {
            trace.push(ExpansionRecord {
                vertex: key.vertex,
                interval: key.interval,
                heading: key.heading,
                copy: key.copy,
                g,
                h,
                priority: entry.priority,
                f_min: None,
            });
        }
        if p.is_goal(key.vertex, key.interval) {
            return finish(Outcome::Found, &arena, Some(id), stats, trace, started);
        }

        succ.clear();
        let state = StateAt {
            vertex: key.vertex,
            interval: key.interval,
            heading: key.heading,
            g,
        };
        successors_into(p.graph, state, &mut scratch, &mut succ);
        for s in &succ {
            for &copy in scheme.child_copies(key.copy) {
                let child_key = NodeKey {
                    vertex: s.vertex,
                    interval: s.interval,
                    heading: s.heading,
                    copy,
                };
                let (cid, fresh) = arena.get_or_insert(child_key, p.heuristic.value(s.vertex));
                if fresh {
                    stats.generated += 1;
                }
                let child = &mut arena[cid];
                if s.arrive >= child.g - EPS {
                    continue;
                }
                if child.closed {
                    if !reopen {
                        continue;
                    }
                    child.closed = false;
                }
                child.g = s.arrive;
                child.parent = Some(id);
                child.depart = s.depart;
                child.rotation = s.rotation;
                open.push(cid, scheme.priority(copy, child.g, child.h), child.g);
            }
        }
        stats.open_max = stats.open_max.max(open.len());
    }
    finish(Outcome::Failure, &arena, None, stats, trace, started)
}
