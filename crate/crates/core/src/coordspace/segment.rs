//! Exact tests of a straight segment against axis-aligned half-open sets.
//!
//! A condition like `a < x(u) <= b` on the affine coordinate
//! `x(u) = x0 + u (x1 - x0)` is an interval of parameters `u`, so a box
//! condition on a segment reduces to intersecting parameter intervals.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Limit<T> {
    pub value: T,
    pub closed: bool,
}

/// Set of values with optional lower and upper limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Span<T> {
    pub lo: Option<Limit<T>>,
    pub hi: Option<Limit<T>>,
}

impl<T: Scalar> Span<T> {
    pub fn open(lo: T, hi: T) -> Self {
        Span {
            lo: Some(Limit { value: lo, closed: false }),
            hi: Some(Limit { value: hi, closed: false }),
        }
    }

    pub fn at_most(hi: T) -> Self {
        Span { lo: None, hi: Some(Limit { value: hi, closed: true }) }
    }

    pub fn contains(&self, v: T) -> bool {
        let above = self.lo.is_none_or(|l| if l.closed { v >= l.value } else { v > l.value });
        let below = self.hi.is_none_or(|h| if h.closed { v <= h.value } else { v < h.value });
        above && below
    }
}

/// Non-empty interval of segment parameters inside `[0,1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ParamSet<T> {
    pub lo: Limit<T>,
    pub hi: Limit<T>,
}

impl<T: Scalar> ParamSet<T> {
    fn unit() -> Self {
        ParamSet {
            lo: Limit { value: T::zero(), closed: true },
            hi: Limit { value: T::one(), closed: true },
        }
    }

    fn raise_lo(&mut self, b: Limit<T>) {
        if b.value > self.lo.value || (b.value == self.lo.value && !b.closed) {
            self.lo = b;
        }
    }

    fn lower_hi(&mut self, b: Limit<T>) {
        if b.value < self.hi.value || (b.value == self.hi.value && !b.closed) {
            self.hi = b;
        }
    }

    fn is_empty(&self) -> bool {
        self.lo.value > self.hi.value
            || (self.lo.value == self.hi.value && !(self.lo.closed && self.hi.closed))
    }

    pub fn intersect(mut self, other: &Self) -> Option<Self> {
        self.raise_lo(other.lo);
        self.lower_hi(other.hi);
        (!self.is_empty()).then_some(self)
    }

    pub fn midpoint(&self) -> T {
        (self.lo.value + self.hi.value) * T::half()
    }
}

/// Parameters `u ∈ [0,1]` with `x0 + u (x1 - x0)` in `span`.
pub(crate) fn param_set<T: Scalar>(x0: T, x1: T, span: &Span<T>) -> Option<ParamSet<T>> {
    let mut set = ParamSet::unit();
    let dx = x1 - x0;
    if dx == T::zero() {
        return span.contains(x0).then_some(set);
    }
    let rising = dx > T::zero();
    if let Some(lo) = span.lo {
        let bound = Limit { value: (lo.value - x0) / dx, closed: lo.closed };
        if rising {
            set.raise_lo(bound)
        } else {
            set.lower_hi(bound)
        }
    }
    if let Some(hi) = span.hi {
        let bound = Limit { value: (hi.value - x0) / dx, closed: hi.closed };
        if rising {
            set.lower_hi(bound)
        } else {
            set.raise_lo(bound)
        }
    }
    (!set.is_empty()).then_some(set)
}

/// Parameters where the planar segment `p0 -> p1` lies in `xs × ys`.
pub(crate) fn segment_hits<T: Scalar>(
    p0: (T, T),
    p1: (T, T),
    xs: &Span<T>,
    ys: &Span<T>,
) -> Option<ParamSet<T>> {
    let a = param_set(p0.0, p1.0, xs)?;
    let b = param_set(p0.1, p1.1, ys)?;
    a.intersect(&b)
}
