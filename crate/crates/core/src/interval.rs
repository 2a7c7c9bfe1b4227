//! Intervals of the real line with open or closed ends.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("lower end {lo} exceeds upper end {hi}")]
    Reversed {
        lo: ExtendedRational,
        hi: ExtendedRational,
    },
    #[error("an infinite end cannot be closed")]
    ClosedInfinity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Empty,
    Span {
        lo: ExtendedRational,
        hi: ExtendedRational,
        lo_closed: bool,
        hi_closed: bool,
    },
}

/// A possibly empty interval. Non-empty intervals satisfy `lo ≤ hi`, a
/// degenerate interval `[a, a]` is closed at both ends, and infinite ends are
/// open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval(Repr);

/// Lower ends ordered by how far down they reach: `-inf < [a < (a < [b`.
pub type LowerEnd = (ExtendedRational, bool);
/// Upper ends ordered by how far up they reach: `a) < a] < b) < inf`.
pub type UpperEnd = (ExtendedRational, bool);

/// How an interval sits relative to the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    Empty,
    Bounded,
    /// `(-inf, b)` or `(-inf, b]`.
    LowerRay,
    /// `[a, inf)` or `(a, inf)`.
    UpperRay,
    Line,
}

impl Interval {
    /// Builds `lo..hi` with the given end types. Returns the empty interval
    /// when the ends meet without both being closed.
    pub fn new(
        lo: ExtendedRational,
        hi: ExtendedRational,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self, IntervalError> {
        if (lo.is_infinite() && lo_closed) || (hi.is_infinite() && hi_closed) {
            return Err(IntervalError::ClosedInfinity);
        }
        match lo.cmp(&hi) {
            Ordering::Greater => Err(IntervalError::Reversed { lo, hi }),
            Ordering::Equal if !(lo_closed && hi_closed) => Ok(Self::empty()),
            _ => Ok(Self(Repr::Span {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })),
        }
    }

    pub fn empty() -> Self {
        Self(Repr::Empty)
    }

    pub fn real_line() -> Self {
        Self::open(ExtendedRational::NegInfinity, ExtendedRational::PosInfinity)
    }

    /// `[a, b]`. Panics if `a > b` or either end is infinite.
    pub fn closed(a: ExtendedRational, b: ExtendedRational) -> Self {
        Self::new(a, b, true, true).expect("valid closed interval")
    }

    /// `(a, b)`; empty when `a = b`.
    pub fn open(a: ExtendedRational, b: ExtendedRational) -> Self {
        Self::new(a, b, false, false).expect("valid open interval")
    }

    /// `[a, b)`; `b` may be `inf`.
    pub fn closed_open(a: ExtendedRational, b: ExtendedRational) -> Self {
        Self::new(a, b, true, false).expect("valid half-open interval")
    }

    /// `(a, b]`; `a` may be `-inf`.
    pub fn open_closed(a: ExtendedRational, b: ExtendedRational) -> Self {
        Self::new(a, b, false, true).expect("valid half-open interval")
    }

    pub fn point(a: ExtendedRational) -> Self {
        Self::closed(a.clone(), a)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.0, Repr::Empty)
    }

    pub fn lo(&self) -> Option<&ExtendedRational> {
        match &self.0 {
            Repr::Span { lo, .. } => Some(lo),
            Repr::Empty => None,
        }
    }

    pub fn hi(&self) -> Option<&ExtendedRational> {
        match &self.0 {
            Repr::Span { hi, .. } => Some(hi),
            Repr::Empty => None,
        }
    }

    pub fn lo_closed(&self) -> bool {
        matches!(self.0, Repr::Span { lo_closed: true, .. })
    }

    pub fn hi_closed(&self) -> bool {
        matches!(self.0, Repr::Span { hi_closed: true, .. })
    }

    /// Lower end as `(value, open)`, ordered so that smaller reaches lower.
    pub fn lower_end(&self) -> Option<LowerEnd> {
        match &self.0 {
            Repr::Span { lo, lo_closed, .. } => Some((lo.clone(), !lo_closed)),
            Repr::Empty => None,
        }
    }

    /// Upper end as `(value, closed)`, ordered so that larger reaches higher.
    pub fn upper_end(&self) -> Option<UpperEnd> {
        match &self.0 {
            Repr::Span { hi, hi_closed, .. } => Some((hi.clone(), *hi_closed)),
            Repr::Empty => None,
        }
    }

    /// The interval with the given ends, empty if they do not enclose a point.
    pub fn from_ends(lower: LowerEnd, upper: UpperEnd) -> Self {
        let (lo, lo_open) = lower;
        let (hi, hi_closed) = upper;
        match lo.cmp(&hi) {
            Ordering::Less => Self(Repr::Span {
                lo_closed: !lo_open && lo.is_finite(),
                hi_closed: hi_closed && hi.is_finite(),
                lo,
                hi,
            }),
            Ordering::Equal if !lo_open && hi_closed && lo.is_finite() => Self::point(lo),
            _ => Self::empty(),
        }
    }

    pub fn extent(&self) -> Extent {
        match &self.0 {
            Repr::Empty => Extent::Empty,
            Repr::Span { lo, hi, .. } => match (lo.is_finite(), hi.is_finite()) {
                (true, true) => Extent::Bounded,
                (false, true) => Extent::LowerRay,
                (true, false) => Extent::UpperRay,
                (false, false) => Extent::Line,
            },
        }
    }

    pub fn contains(&self, x: &ExtendedRational) -> bool {
        match &self.0 {
            Repr::Empty => false,
            Repr::Span {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                x.is_finite()
                    && (lo < x || (*lo_closed && lo == x))
                    && (x < hi || (*hi_closed && hi == x))
            }
        }
    }

    /// `(hi - lo) / 2`, zero for the empty interval.
    pub fn half_length(&self) -> ExtendedRational {
        match &self.0 {
            Repr::Empty => ExtendedRational::zero(),
            Repr::Span { lo, hi, .. } => {
                if lo.is_infinite() || hi.is_infinite() {
                    ExtendedRational::PosInfinity
                } else {
                    (hi - lo).half()
                }
            }
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        match (self.lower_end(), self.upper_end(), other.lower_end(), other.upper_end()) {
            (Some(l1), Some(u1), Some(l2), Some(u2)) => {
                Self::from_ends(l1.max(l2), u1.min(u2))
            }
            _ => Self::empty(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        match (self.lower_end(), self.upper_end(), other.lower_end(), other.upper_end()) {
            (None, ..) => true,
            (Some(l1), Some(u1), Some(l2), Some(u2)) => l2 <= l1 && u1 <= u2,
            _ => false,
        }
    }

    /// `{x + t : x ∈ self}` for finite `t`.
    pub fn translate(&self, t: &ExtendedRational) -> Self {
        assert!(t.is_finite(), "translation must be finite");
        match &self.0 {
            Repr::Empty => Self::empty(),
            Repr::Span {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => Self(Repr::Span {
                lo: lo + t,
                hi: hi + t,
                lo_closed: *lo_closed,
                hi_closed: *hi_closed,
            }),
        }
    }

    /// `{x : [x - ε, x + ε] ⊆ self}` for finite `ε ≥ 0`: both ends move
    /// inward by `ε` and keep their type.
    pub fn shrink(&self, eps: &ExtendedRational) -> Self {
        assert!(eps.is_finite() && !eps.is_negative(), "shrink by a finite ε ≥ 0");
        match (self.lower_end(), self.upper_end()) {
            (Some((lo, lo_open)), Some((hi, hi_closed))) => {
                Self::from_ends((&lo + eps, lo_open), (&hi - eps, hi_closed))
            }
            _ => Self::empty(),
        }
    }

    fn sort_key(&self) -> Option<(LowerEnd, UpperEnd)> {
        Some((self.lower_end()?, self.upper_end()?))
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Empty first, then by lower end and upper end.
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Empty => f.write_str("∅"),
            Repr::Span {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => write!(
                f,
                "{}{lo}, {hi}{}",
                if *lo_closed { '[' } else { '(' },
                if *hi_closed { ']' } else { ')' }
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    #[test]
    fn degenerate_ends_collapse_to_empty() {
        assert!(Interval::closed_open(q("1"), q("1")).is_empty());
        assert!(!Interval::closed(q("1"), q("1")).is_empty());
        assert!(Interval::new(q("2"), q("1"), true, true).is_err());
        assert!(Interval::new(q("-inf"), q("1"), true, true).is_err());
    }

    #[test]
    fn membership_respects_flags() {
        let i = Interval::closed_open(q("0"), q("1"));
        assert!(i.contains(&q("0")));
        assert!(i.contains(&q("1/2")));
        assert!(!i.contains(&q("1")));
        assert!(!Interval::real_line().contains(&q("inf")));
        assert!(Interval::real_line().contains(&q("-100")));
    }

    #[test]
    fn half_lengths() {
        assert_eq!(Interval::closed(q("0"), q("10")).half_length(), q("5"));
        assert_eq!(Interval::empty().half_length(), q("0"));
        assert_eq!(Interval::closed_open(q("0"), q("inf")).half_length(), q("inf"));
    }

    #[test]
    fn shrink_keeps_end_types() {
        let i = Interval::closed_open(q("0"), q("10"));
        assert_eq!(i.shrink(&q("1")), Interval::closed_open(q("1"), q("9")));
        assert!(i.shrink(&q("5")).is_empty());
        assert_eq!(
            Interval::closed(q("0"), q("10")).shrink(&q("5")),
            Interval::point(q("5"))
        );
        let ray = Interval::open(q("-inf"), q("3"));
        assert_eq!(ray.shrink(&q("1")), Interval::open(q("-inf"), q("2")));
    }

    #[test]
    fn subsets_and_intersections() {
        let a = Interval::closed(q("0"), q("2"));
        let b = Interval::open(q("0"), q("2"));
        assert!(b.is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        assert!(Interval::empty().is_subset_of(&b));
        assert_eq!(
            a.intersect(&Interval::closed_open(q("2"), q("inf"))),
            Interval::point(q("2"))
        );
        assert!(b.intersect(&Interval::closed(q("2"), q("3"))).is_empty());
    }

    #[test]
    fn canonical_order() {
        let mut v = [Interval::open(q("0"), q("1")),
            Interval::closed(q("0"), q("1")),
            Interval::empty(),
            Interval::closed_open(q("0"), q("1"))];
        v.sort();
        let shown: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        assert_eq!(shown, ["∅", "[0, 1)", "[0, 1]", "(0, 1)"]);
    }
}
