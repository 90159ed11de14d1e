use std::marker::PhantomData;

use super::{CrossSection, Point2};
use crate::scalar::Scalar;

/// Which vehicle of the plane goes first. `FirstOverSecond` means the
/// x-axis vehicle passes the conflict before the y-axis vehicle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precedence {
    FirstOverSecond,
    SecondOverFirst,
}

impl Precedence {
    pub fn reversed(self) -> Self {
        match self {
            Precedence::FirstOverSecond => Precedence::SecondOverFirst,
            Precedence::SecondOverFirst => Precedence::FirstOverSecond,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    /// The cross-section itself.
    Section,
    /// Swept down along the y axis.
    South,
    /// Swept left along the x axis.
    West,
    /// South ∩ West: states that can only end in a two-vehicle deadlock.
    SouthWest,
    /// `Gate(FirstOverSecond)` is South \ SouthWest.
    Gate(Precedence),
    /// States a trajectory crossing the gate of the same precedence can
    /// never visit.
    Swept(Precedence),
}

/// A planar set derived from one cross-section, clipped to `[0,1]²`.
pub struct Region2D<'a, T, C: ?Sized> {
    section: &'a C,
    kind: RegionKind,
    _scalar: PhantomData<T>,
}

impl<T, C: ?Sized> Clone for Region2D<'_, T, C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T, C: ?Sized> Copy for Region2D<'_, T, C> {}

impl<'a, T: Scalar, C: CrossSection<T> + ?Sized> Region2D<'a, T, C> {
    pub fn new(section: &'a C, kind: RegionKind) -> Self {
        Region2D { section, kind, _scalar: PhantomData }
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        let unit = |v: T| T::zero() <= v && v <= T::one();
        if !unit(p.x) || !unit(p.y) {
            return false;
        }
        match self.kind {
            RegionKind::Section => self.section.contains(p),
            RegionKind::South => self.in_south(p),
            RegionKind::West => self.in_west(p),
            RegionKind::SouthWest => self.in_south(p) && self.in_west(p),
            RegionKind::Gate(Precedence::FirstOverSecond) => self.in_south(p) && !self.in_west(p),
            RegionKind::Gate(Precedence::SecondOverFirst) => self.in_west(p) && !self.in_south(p),
            RegionKind::Swept(prec) => self.in_swept(p, prec),
        }
    }

    fn in_south(&self, p: Point2<T>) -> bool {
        self.section.vertical_chord(p.x).is_some_and(|c| p.y < c.hi)
    }

    fn in_west(&self, p: Point2<T>) -> bool {
        self.section.horizontal_chord(p.y).is_some_and(|c| p.x < c.hi)
    }

    fn in_swept(&self, p: Point2<T>, prec: Precedence) -> bool {
        match prec {
            // Exists q in the section with q.x >= p.x and q.y <= p.y.
            Precedence::FirstOverSecond => {
                let span = self.section.x_span();
                if p.x >= span.hi {
                    return false;
                }
                let floor = if p.x <= self.section.lowest_x() {
                    self.section.y_span().lo
                } else {
                    match self.section.vertical_chord(p.x) {
                        Some(c) => c.lo,
                        None => return false,
                    }
                };
                p.y > floor
            }
            // Exists q with q.y >= p.y and q.x <= p.x.
            Precedence::SecondOverFirst => {
                let span = self.section.y_span();
                if p.y >= span.hi {
                    return false;
                }
                let floor = if p.y <= self.section.leftmost_y() {
                    self.section.x_span().lo
                } else {
                    match self.section.horizontal_chord(p.y) {
                        Some(c) => c.lo,
                        None => return false,
                    }
                };
                p.x > floor
            }
        }
    }

    /// Boundary polyline traced column by column on a `resolution` grid.
    /// Every derived set is vertically convex, so the outline is the lower
    /// envelope left to right followed by the upper envelope back.
    pub fn outline(&self, resolution: usize) -> Vec<Point2<T>> {
        let res = resolution.max(2);
        let at = |k: usize| T::from_count(k) / T::from_count(res);
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for kx in 0..=res {
            let x = at(kx);
            let mut lo = None;
            let mut hi = None;
            for ky in 0..=res {
                let y = at(ky);
                if self.contains(Point2::new(x, y)) {
                    lo.get_or_insert(y);
                    hi = Some(y);
                }
            }
            if let (Some(lo), Some(hi)) = (lo, hi) {
                lower.push(Point2::new(x, lo));
                upper.push(Point2::new(x, hi));
            }
        }
        upper.reverse();
        lower.extend(upper);
        lower
    }
}

/// `c − ℝ₊e_y`: the cross-section swept downward.
pub fn south<T: Scalar, C: CrossSection<T> + ?Sized>(c: &C) -> Region2D<'_, T, C> {
    Region2D::new(c, RegionKind::South)
}

/// `c − ℝ₊e_x`: the cross-section swept leftward.
pub fn west<T: Scalar, C: CrossSection<T> + ?Sized>(c: &C) -> Region2D<'_, T, C> {
    Region2D::new(c, RegionKind::West)
}

pub fn sw_completion<T: Scalar, C: CrossSection<T> + ?Sized>(c: &C) -> Region2D<'_, T, C> {
    Region2D::new(c, RegionKind::SouthWest)
}

pub fn gate<T: Scalar, C: CrossSection<T> + ?Sized>(c: &C, prec: Precedence) -> Region2D<'_, T, C> {
    Region2D::new(c, RegionKind::Gate(prec))
}

/// For `FirstOverSecond`: `c − ℝ₊e_x + ℝ₊e_y`.
pub fn swept_obstacle<T: Scalar, C: CrossSection<T> + ?Sized>(
    c: &C,
    prec: Precedence,
) -> Region2D<'_, T, C> {
    Region2D::new(c, RegionKind::Swept(prec))
}
