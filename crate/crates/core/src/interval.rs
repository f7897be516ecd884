//! Time values and closed time intervals.
//!
//! All times are `f64` time units starting at 0. Integer and dyadic times are
//! exact; irrational move costs (√2, √5, ...) accumulate rounding error, so
//! every comparison that decides feasibility goes through [`EPS`].

use std::fmt;

/// Comparison tolerance for times.
pub const EPS: f64 = 1e-9;

/// Time units. `f64::INFINITY` stands for "forever".
pub type Time = f64;

/// `a <= b` up to [`EPS`].
#[inline]
pub fn le(a: Time, b: Time) -> bool {
    a <= b + EPS
}

/// `a < b` by more than [`EPS`].
#[inline]
pub fn lt(a: Time, b: Time) -> bool {
    a < b - EPS
}

/// `|a - b| <= EPS`, with infinities equal to themselves.
#[inline]
pub fn approx_eq(a: Time, b: Time) -> bool {
    a == b || (a - b).abs() <= EPS
}

/// A closed interval `[start, end]`; `end` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub start: Time,
    pub end: Time,
}

impl Interval {
    pub const FOREVER: Interval = Interval {
        start: 0.0,
        end: f64::INFINITY,
    };

    pub fn new(start: Time, end: Time) -> Self {
        debug_assert!(start <= end, "interval start {start} > end {end}");
        Interval { start, end }
    }

    pub fn is_unbounded(&self) -> bool {
        self.end == f64::INFINITY
    }

    pub fn contains(&self, t: Time) -> bool {
        le(self.start, t) && le(t, self.end)
    }

    /// True iff `[a, b]` lies inside this interval.
    pub fn covers(&self, a: Time, b: Time) -> bool {
        le(self.start, a) && le(b, self.end)
    }

    /// Overlap with positive measure, or `[a, b]` strictly containing a
    /// degenerate interval. Intervals that only touch at an endpoint do not
    /// overlap.
    pub fn overlaps_window(&self, a: Time, b: Time) -> bool {
        lt(self.start, b) && lt(a, self.end)
    }

    pub fn len(&self) -> Time {
        self.end - self.start
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            write!(f, "[{}, +inf)", self.start)
        } else {
            write!(f, "[{}, {}]", self.start, self.end)
        }
    }
}

/// Sorts by start and merges intervals that overlap or touch.
pub fn merge_intervals(mut intervals: Vec<Interval>) -> Vec<Interval> {
    intervals.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
    let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if le(iv.start, last.end) => {
                if iv.end > last.end {
                    last.end = iv.end;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Closed complement of sorted, merged occupied intervals inside `[0, +∞)`.
///
/// A degenerate occupied interval `[p, p]` splits the surrounding safe time
/// into two safe intervals touching at `p`.
pub fn complement(occupied: &[Interval]) -> Vec<Interval> {
    let mut safe = Vec::with_capacity(occupied.len() + 1);
    let mut cursor = 0.0;
    for occ in occupied {
        if occ.start > cursor + EPS {
            safe.push(Interval::new(cursor, occ.start));
        }
        cursor = f64::max(cursor, occ.end);
    }
    if cursor < f64::INFINITY {
        safe.push(Interval::new(cursor, f64::INFINITY));
    }
    safe
}
