use num_traits::Float;

use super::{CollisionRect, Interval, Point2, ScenarioError};
use crate::scalar::Scalar;

/// An open bounded convex set in one pair plane.
///
/// Everything the derived regions need can be phrased through chords: the
/// open vertical segment of the set above a given `x`, and the open
/// horizontal segment at a given `y`.
pub trait CrossSection<T: Scalar> {
    /// Open projection onto the x axis.
    fn x_span(&self) -> Interval<T>;
    fn y_span(&self) -> Interval<T>;
    /// `None` when `x` is outside the open x projection.
    fn vertical_chord(&self, x: T) -> Option<Interval<T>>;
    fn horizontal_chord(&self, y: T) -> Option<Interval<T>>;
    /// x of the rightmost lowest point of the closure.
    fn lowest_x(&self) -> T;
    /// y of the topmost leftmost point of the closure.
    fn leftmost_y(&self) -> T;

    fn contains(&self, p: Point2<T>) -> bool {
        self.vertical_chord(p.x).is_some_and(|c| c.contains(p.y))
    }
}

impl<T: Scalar> CrossSection<T> for CollisionRect<T> {
    fn x_span(&self) -> Interval<T> {
        self.first
    }

    fn y_span(&self) -> Interval<T> {
        self.second
    }

    fn vertical_chord(&self, x: T) -> Option<Interval<T>> {
        self.first.contains(x).then_some(self.second)
    }

    fn horizontal_chord(&self, y: T) -> Option<Interval<T>> {
        self.second.contains(y).then_some(self.first)
    }

    fn lowest_x(&self) -> T {
        self.first.hi
    }

    fn leftmost_y(&self) -> T {
        self.second.hi
    }
}

/// Strictly convex polygon, vertices counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> ConvexPolygon<T> {
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self, ScenarioError> {
        if vertices.len() < 3 {
            return Err(ScenarioError::NotConvex);
        }
        let m = vertices.len();
        for k in 0..m {
            let (a, b, c) = (vertices[k], vertices[(k + 1) % m], vertices[(k + 2) % m]);
            let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            if cross <= T::zero() {
                return Err(ScenarioError::NotConvex);
            }
        }
        // A locally convex CCW loop can still wind twice; total turning
        // must be one revolution, i.e. x-extremes visited once each way.
        let mut direction_changes = 0;
        for k in 0..m {
            let d0 = vertices[(k + 1) % m].x - vertices[k].x;
            let d1 = vertices[(k + 2) % m].x - vertices[(k + 1) % m].x;
            if (d0 > T::zero() && d1 < T::zero()) || (d0 < T::zero() && d1 > T::zero()) {
                direction_changes += 1;
            }
        }
        if direction_changes > 2 {
            return Err(ScenarioError::NotConvex);
        }
        if vertices
            .iter()
            .any(|p| p.x <= T::zero() || p.x >= T::one() || p.y <= T::zero() || p.y >= T::one())
        {
            return Err(ScenarioError::OutsideUnitSquare);
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |k| (self.vertices[k], self.vertices[(k + 1) % m]))
    }
}

impl<T: Scalar> CrossSection<T> for ConvexPolygon<T> {
    fn x_span(&self) -> Interval<T> {
        let mut span = Interval::new(self.vertices[0].x, self.vertices[0].x);
        for p in &self.vertices {
            span.lo = span.lo.min_of(p.x);
            span.hi = span.hi.max_of(p.x);
        }
        span
    }

    fn y_span(&self) -> Interval<T> {
        let mut span = Interval::new(self.vertices[0].y, self.vertices[0].y);
        for p in &self.vertices {
            span.lo = span.lo.min_of(p.y);
            span.hi = span.hi.max_of(p.y);
        }
        span
    }

    fn vertical_chord(&self, x: T) -> Option<Interval<T>> {
        if !self.x_span().contains(x) {
            return None;
        }
        let mut chord: Option<Interval<T>> = None;
        for (p, q) in self.edges() {
            if p.x == q.x || x < p.x.min_of(q.x) || x > p.x.max_of(q.x) {
                continue;
            }
            let y = p.y + (x - p.x) * (q.y - p.y) / (q.x - p.x);
            chord = Some(match chord {
                None => Interval::new(y, y),
                Some(c) => Interval::new(c.lo.min_of(y), c.hi.max_of(y)),
            });
        }
        chord
    }

    fn horizontal_chord(&self, y: T) -> Option<Interval<T>> {
        if !self.y_span().contains(y) {
            return None;
        }
        let mut chord: Option<Interval<T>> = None;
        for (p, q) in self.edges() {
            if p.y == q.y || y < p.y.min_of(q.y) || y > p.y.max_of(q.y) {
                continue;
            }
            let x = p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
            chord = Some(match chord {
                None => Interval::new(x, x),
                Some(c) => Interval::new(c.lo.min_of(x), c.hi.max_of(x)),
            });
        }
        chord
    }

    fn lowest_x(&self) -> T {
        let ymin = self.y_span().lo;
        self.vertices
            .iter()
            .filter(|p| p.y == ymin)
            .map(|p| p.x)
            .fold(None, |acc: Option<T>, x| Some(acc.map_or(x, |a| a.max_of(x))))
            .expect("polygon has a lowest vertex")
    }

    fn leftmost_y(&self) -> T {
        let xmin = self.x_span().lo;
        self.vertices
            .iter()
            .filter(|p| p.x == xmin)
            .map(|p| p.y)
            .fold(None, |acc: Option<T>, y| Some(acc.map_or(y, |a| a.max_of(y))))
            .expect("polygon has a leftmost vertex")
    }
}

/// Open disc, the exact cross-section of two disc vehicles on crossing
/// straight paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc<T> {
    pub center: Point2<T>,
    pub radius: T,
}

impl<T: Scalar + Float> Disc<T> {
    pub fn new(center: Point2<T>, radius: T) -> Result<Self, ScenarioError> {
        let zero = <T as num_traits::Zero>::zero();
        let one = <T as num_traits::One>::one();
        if radius <= zero
            || center.x - radius <= zero
            || center.y - radius <= zero
            || center.x + radius >= one
            || center.y + radius >= one
        {
            return Err(ScenarioError::OutsideUnitSquare);
        }
        Ok(Disc { center, radius })
    }

    fn half_chord(&self, offset: T) -> Option<T> {
        let rem = self.radius * self.radius - offset * offset;
        (rem > <T as num_traits::Zero>::zero()).then(|| rem.sqrt())
    }
}

impl<T: Scalar + Float> CrossSection<T> for Disc<T> {
    fn x_span(&self) -> Interval<T> {
        Interval::new(self.center.x - self.radius, self.center.x + self.radius)
    }

    fn y_span(&self) -> Interval<T> {
        Interval::new(self.center.y - self.radius, self.center.y + self.radius)
    }

    fn vertical_chord(&self, x: T) -> Option<Interval<T>> {
        self.half_chord(x - self.center.x)
            .map(|h| Interval::new(self.center.y - h, self.center.y + h))
    }

    fn horizontal_chord(&self, y: T) -> Option<Interval<T>> {
        self.half_chord(y - self.center.y)
            .map(|h| Interval::new(self.center.x - h, self.center.x + h))
    }

    fn lowest_x(&self) -> T {
        self.center.x
    }

    fn leftmost_y(&self) -> T {
        self.center.y
    }
}
