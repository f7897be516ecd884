use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;
use std::time::Instant;

use crate::interval::{Time, EPS};
use crate::search_core::{successors_into, CopyKind, NodeArena, NodeId, NodeKey, StateAt, SuccessorScratch, TimedGraph};

use super::{finish, start_interval, ExpansionRecord, Outcome, ProblemInstance, Solution, Stats};

#[derive(Clone, Copy, Debug, PartialEq)]
struct Ft(Time);

impl Eq for Ft {}

impl PartialOrd for Ft {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ft {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

type OpenKey = (Ft, u64, NodeId);
type FocalKey = (u32, Ft, Reverse<Ft>, u64, NodeId);

#[derive(Clone, Copy, Debug, Default)]
struct Slot {
    seq: u64,
    in_open: bool,
    in_focal: bool,
}

/// OPEN ordered by `f`, with FOCAL holding every OPEN node whose `f` is
/// within `w·f_min`, ordered by (hops, f, larger g, insertion).
struct FocalLists {
    weight: f64,
    open: BTreeSet<OpenKey>,
    focal: BTreeSet<FocalKey>,
    slots: Vec<Slot>,
    /// `w·f_min` that FOCAL currently reflects.
    bound: Time,
    seq: u64,
}

impl FocalLists {
    fn new(weight: f64) -> Self {
        FocalLists {
            weight,
            open: BTreeSet::new(),
            focal: BTreeSet::new(),
            slots: Vec::new(),
            bound: f64::NEG_INFINITY,
            seq: 0,
        }
    }

    fn f_min(&self) -> Option<Time> {
        self.open.first().map(|k| k.0 .0)
    }

    fn focal_key(arena: &NodeArena, hops: &dyn Fn(usize) -> u32, id: NodeId, seq: u64) -> FocalKey {
        let n = &arena[id];
        (hops(n.key.vertex), Ft(n.g + n.h), Reverse(Ft(n.g)), seq, id)
    }

    fn insert(&mut self, arena: &NodeArena, hops: &dyn Fn(usize) -> u32, id: NodeId) {
        if self.slots.len() <= id {
            self.slots.resize(id + 1, Slot::default());
        }
        let f = arena[id].g + arena[id].h;
        let seq = self.seq;
        self.seq += 1;
        self.open.insert((Ft(f), seq, id));
        let mut slot = Slot {
            seq,
            in_open: true,
            in_focal: false,
        };
        if f <= self.bound + EPS {
            self.focal.insert(Self::focal_key(arena, hops, id, seq));
            slot.in_focal = true;
        }
        self.slots[id] = slot;
        self.sync(arena, hops);
    }

    /// Removes `id` using the keys it was inserted with.
    fn remove(&mut self, arena: &NodeArena, hops: &dyn Fn(usize) -> u32, id: NodeId, f: Time, g: Time) {
        let slot = self.slots[id];
        if !slot.in_open {
            return;
        }
        self.open.remove(&(Ft(f), slot.seq, id));
        if slot.in_focal {
            self.focal
                .remove(&(hops(arena[id].key.vertex), Ft(f), Reverse(Ft(g)), slot.seq, id));
        }
        self.slots[id].in_open = false;
        self.slots[id].in_focal = false;
    }

    /// Re-establishes FOCAL = { n in OPEN : f(n) <= w·f_min } after f_min
    /// moved.
    fn sync(&mut self, arena: &NodeArena, hops: &dyn Fn(usize) -> u32) {
        let new_bound = match self.f_min() {
            Some(f) => self.weight * f,
            None => f64::NEG_INFINITY,
        };
        if new_bound > self.bound {
            let lo = (Ft(self.bound - EPS), 0, 0);
            let add: Vec<OpenKey> = self
                .open
                .range(lo..)
                .take_while(|k| k.0 .0 <= new_bound + EPS)
                .filter(|k| !self.slots[k.2].in_focal)
                .copied()
                .collect();
            for (_, seq, id) in add {
                self.focal.insert(Self::focal_key(arena, hops, id, seq));
                self.slots[id].in_focal = true;
            }
        } else if new_bound < self.bound {
            let lo = (Ft(new_bound), 0, 0);
            let evict: Vec<OpenKey> = self
                .open
                .range(lo..)
                .take_while(|k| k.0 .0 <= self.bound + EPS)
                .filter(|k| k.0 .0 > new_bound + EPS && self.slots[k.2].in_focal)
                .copied()
                .collect();
            for (f, seq, id) in evict {
                self.focal
                    .remove(&(hops(arena[id].key.vertex), f, Reverse(Ft(arena[id].g)), seq, id));
                self.slots[id].in_focal = false;
            }
        }
        self.bound = new_bound;
    }

    fn pop_focal(&mut self) -> Option<NodeId> {
        self.focal.first().map(|k| k.4)
    }
}

const DEADLINE_CHECK_EVERY: u64 = 256;

pub(super) fn run<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    let started = Instant::now();
    let mut arena = NodeArena::new();
    let mut stats = Stats::default();
    let mut trace = Vec::new();
    let Some(start_iv) = start_interval(p) else {
        return finish(Outcome::Failure, &arena, None, stats, trace, started);
    };
    let hop_table = p.hops;
    let hops = move |v: usize| hop_table.map_or(0, |h| h.hops(v));
    let reopen = p.options.allow_reexpansion;

    let mut lists = FocalLists::new(p.weight);
    let start_key = NodeKey {
        vertex: p.start,
        interval: start_iv,
        heading: p.start_heading,
        copy: CopyKind::Plain,
    };
    let (root, _) = arena.get_or_insert(start_key, p.heuristic.value(p.start));
    arena[root].g = 0.0;
    stats.generated = 1;
    lists.insert(&arena, &hops, root);

    let mut scratch = SuccessorScratch::default();
    let mut succ = Vec::new();
    while let Some(id) = lists.pop_focal() {
        if let Some(deadline) = p.options.deadline {
            if stats.expansions % DEADLINE_CHECK_EVERY == 0 && Instant::now() >= deadline {
                return finish(Outcome::Timeout, &arena, None, stats, trace, started);
            }
        }
        let f_min = lists.f_min().expect("FOCAL is a subset of OPEN");
        let (key, g, h) = (arena[id].key, arena[id].g, arena[id].h);
        if g + h > p.weight * f_min + EPS {
            stats.focal_violations += 1;
            debug_assert!(false, "focal extraction outside the bound: f = {} > {} * {}", g + h, p.weight, f_min);
        }
        lists.remove(&arena, &hops, id, g + h, g);
        lists.sync(&arena, &hops);

        let node = &mut arena[id];
        node.closed = true;
        node.expansions += 1;
        stats.expansions += 1;
        if node.expansions > 1 {
            stats.reexpansions += 1;
        }
        if p.options.trace {
            trace.push(ExpansionRecord {
                vertex: key.vertex,
                interval: key.interval,
                heading: key.heading,
                copy: key.copy,
                g,
                h,
                priority: g + h,
                f_min: Some(f_min),
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
            let child_key = NodeKey {
                vertex: s.vertex,
                interval: s.interval,
                heading: s.heading,
                copy: CopyKind::Plain,
            };
            let (cid, fresh) = arena.get_or_insert(child_key, p.heuristic.value(s.vertex));
            if fresh {
                stats.generated += 1;
            }
            let (old_g, h, closed) = (arena[cid].g, arena[cid].h, arena[cid].closed);
            if s.arrive >= old_g - EPS {
                continue;
            }
            if closed {
                if !reopen {
                    continue;
                }
                arena[cid].closed = false;
            } else if old_g.is_finite() {
                lists.remove(&arena, &hops, cid, old_g + h, old_g);
            }
            let child = &mut arena[cid];
            child.g = s.arrive;
            child.parent = Some(id);
            child.depart = s.depart;
            child.rotation = s.rotation;
            lists.insert(&arena, &hops, cid);
        }
        stats.open_max = stats.open_max.max(lists.open.len());
    }
    finish(Outcome::Failure, &arena, None, stats, trace, started)
}
