use std::fmt;

use thiserror::Error;

use crate::interval::{Time, EPS};

use super::{Heading, NodeArena, NodeId, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    Wait {
        vertex: VertexId,
        start: Time,
        duration: Time,
    },
    Rotate {
        vertex: VertexId,
        start: Time,
        from: Heading,
        to: Heading,
        duration: Time,
    },
    Move {
        from: VertexId,
        to: VertexId,
        depart: Time,
        arrive: Time,
    },
}

impl Action {
    pub fn start(&self) -> Time {
        match *self {
            Action::Wait { start, .. } | Action::Rotate { start, .. } => start,
            Action::Move { depart, .. } => depart,
        }
    }

    pub fn end(&self) -> Time {
        match *self {
            Action::Wait { start, duration, .. } | Action::Rotate { start, duration, .. } => start + duration,
            Action::Move { arrive, .. } => arrive,
        }
    }
}

/// A timed action sequence. `cost` is the final arrival time minus
/// `start_time`.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub start_time: Time,
    pub actions: Vec<Action>,
    pub cost: Time,
}

impl Plan {
    pub fn empty(start_time: Time) -> Self {
        Plan {
            start_time,
            actions: Vec::new(),
            cost: 0.0,
        }
    }

    /// Vertices visited, in order, starting with `start`.
    pub fn vertices(&self, start: VertexId) -> Vec<VertexId> {
        let mut out = vec![start];
        out.extend(self.actions.iter().filter_map(|a| match a {
            Action::Move { to, .. } => Some(*to),
            _ => None,
        }));
        out
    }

    pub fn total_wait(&self) -> Time {
        self.actions
            .iter()
            .map(|a| match a {
                Action::Wait { duration, .. } => *duration,
                _ => 0.0,
            })
            .sum()
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plan cost {}", self.cost)?;
        for a in &self.actions {
            match a {
                Action::Wait { vertex, start, duration } => writeln!(f, "  {start:>10.4} wait {duration:.4} at {vertex}")?,
                Action::Rotate { vertex, start, from, to, duration } => {
                    writeln!(f, "  {start:>10.4} rotate {from}->{to} ({duration:.4}) at {vertex}")?
                }
                Action::Move { from, to, depart, arrive } => writeln!(f, "  {depart:>10.4} move {from}->{to} arriving {arrive:.4}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("parent chain of node {0} is cyclic")]
    Cycle(NodeId),
    #[error("node {0} departs before its parent is reached")]
    Inconsistent(NodeId),
    #[error("node {0} rotates without a heading")]
    MissingHeading(NodeId),
}

/// Walks parent links back from `goal` and lays out waits, rotations and
/// moves on the timeline.
pub fn reconstruct_plan(arena: &NodeArena, goal: NodeId) -> Result<Plan, PlanError> {
    let mut chain = vec![goal];
    let mut cur = goal;
    while let Some(p) = arena[cur].parent {
        if chain.len() > arena.len() {
            return Err(PlanError::Cycle(goal));
        }
        chain.push(p);
        cur = p;
    }
    chain.reverse();
    let root = &arena[chain[0]];
    let mut actions = Vec::new();
    for pair in chain.windows(2) {
        let (parent, child) = (&arena[pair[0]], &arena[pair[1]]);
        let turn_start = child.depart - child.rotation;
        if turn_start < parent.g - EPS {
            return Err(PlanError::Inconsistent(pair[1]));
        }
        let vertex = parent.key.vertex;
        if turn_start > parent.g + EPS {
            actions.push(Action::Wait {
                vertex,
                start: parent.g,
                duration: turn_start - parent.g,
            });
        }
        if child.rotation > EPS {
            let (Some(from), Some(to)) = (parent.key.heading, child.key.heading) else {
                return Err(PlanError::MissingHeading(pair[1]));
            };
            actions.push(Action::Rotate {
                vertex,
                start: turn_start,
                from,
                to,
                duration: child.rotation,
            });
        }
        actions.push(Action::Move {
            from: vertex,
            to: child.key.vertex,
            depart: child.depart,
            arrive: child.g,
        });
    }
    Ok(Plan {
        start_time: root.g,
        actions,
        cost: arena[goal].g - root.g,
    })
}
