use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::interval::Time;
use crate::search_core::NodeId;

#[derive(Clone, Copy, Debug)]
pub struct OpenEntry {
    pub priority: Time,
    pub g: Time,
    pub seq: u64,
    pub node: NodeId,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap is a max-heap: the "greatest" entry has the lowest priority,
    // then the largest g, then the earliest insertion.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then(self.g.total_cmp(&other.g))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Binary-heap OPEN list with lazy deletion: a decrease-key pushes a fresh
/// entry and the caller drops entries whose `g` no longer matches the node.
#[derive(Debug, Default)]
pub struct OpenList {
    heap: BinaryHeap<OpenEntry>,
    seq: u64,
}

impl OpenList {
    pub fn new() -> Self {
        OpenList::default()
    }

    pub fn push(&mut self, node: NodeId, priority: Time, g: Time) {
        self.heap.push(OpenEntry {
            priority,
            g,
            seq: self.seq,
            node,
        });
        self.seq += 1;
    }

    pub fn pop(&mut self) -> Option<OpenEntry> {
        self.heap.pop()
    }

    pub fn peek(&self) -> Option<&OpenEntry> {
        self.heap.peek()
    }

    /// Entries including stale ones.
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
