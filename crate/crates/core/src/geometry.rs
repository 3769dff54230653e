//! Exact lattice-polygon arithmetic: convex hulls, canonical forms,
//! containment, hull chains with respect to direction (1,1), and the region
//! assembly between an upper and a lower monotone chain.
//!
//! Everything here is integer arithmetic; intermediate products use i128 so
//! exponent coordinates up to ~2^62 are safe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the exponent lattice, `(e0, e1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// Mirror across the main diagonal (swap exponent roles).
    pub fn transpose(self) -> Self {
        LatticePoint { x: self.y, y: self.x }
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint { x, y }
    }
}

/// Cross product of (a - o) and (b - o); positive for a counter-clockwise turn.
pub fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// Convex lattice polygon in canonical form: vertices counter-clockwise,
/// starting at the lexicographically smallest, no three consecutive collinear.
/// Segments and single points are first-class degenerate polygons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn transpose(&self) -> LatticePolygon {
        convex_hull(self.vertices.iter().map(|p| p.transpose()))
    }

    pub fn max_x(&self) -> i64 {
        self.vertices.iter().map(|p| p.x).max().unwrap()
    }

    pub fn max_y(&self) -> i64 {
        self.vertices.iter().map(|p| p.y).max().unwrap()
    }

    pub fn min_x(&self) -> i64 {
        self.vertices.iter().map(|p| p.x).min().unwrap()
    }

    pub fn min_y(&self) -> i64 {
        self.vertices.iter().map(|p| p.y).min().unwrap()
    }

    /// True iff `p` lies in the polygon (boundary included).
    pub fn contains_point(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
            }
            n => (0..n).all(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                cross(a, b, p) >= 0
            }),
        }
    }

    /// All lattice points inside the polygon (boundary included).
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (x0, x1) = (self.min_x(), self.max_x());
        let (y0, y1) = (self.min_y(), self.max_y());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = LatticePoint::new(x, y);
                if self.contains_point(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Upper hull chain of this polygon with respect to direction (1,1).
    pub fn upper_chain(&self) -> MonotoneChain {
        upper_chain(self.vertices.iter().copied())
    }

    /// Lower hull chain of this polygon with respect to direction (1,1).
    pub fn lower_chain(&self) -> MonotoneChain {
        lower_chain(self.vertices.iter().copied())
    }
}

/// Canonical convex hull of a non-empty point set.
///
/// Collinear boundary points are dropped; collinear input degenerates to a
/// segment or point polygon.
pub fn convex_hull<I: IntoIterator<Item = LatticePoint>>(points: I) -> LatticePolygon {
    let mut pts: Vec<LatticePoint> = points.into_iter().collect();
    assert!(!pts.is_empty(), "convex hull of empty point set");
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return LatticePolygon { vertices: pts };
    }
    // Andrew's monotone chain, strict turns only.
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] > lower[1] {
        lower.swap(0, 1);
    }
    LatticePolygon { vertices: lower }
}

/// True iff `inner` lies entirely inside `outer` (boundaries included).
pub fn contains(outer: &LatticePolygon, inner: &LatticePolygon) -> bool {
    inner.vertices().iter().all(|&p| outer.contains_point(p))
}

/// Which side of the polygon's (1,1)-split a chain describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainRole {
    UpperHull,
    LowerHull,
}

/// An x-monotone convex chain: the upper or lower hull of a point set with
/// respect to direction (1,1). Stored in increasing x - y order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneChain {
    pub points: Vec<LatticePoint>,
    pub role: ChainRole,
}

// Chains are computed in sheared coordinates (u, h) = (x - y, x + y), where
// both hulls become graphs of functions of u.
fn chain(points: impl IntoIterator<Item = LatticePoint>, role: ChainRole) -> MonotoneChain {
    let mut pts: Vec<(i64, i64, LatticePoint)> = points
        .into_iter()
        .map(|p| (p.x - p.y, p.x + p.y, p))
        .collect();
    assert!(!pts.is_empty(), "chain of empty point set");
    // For the same u keep only the extreme h.
    pts.sort_unstable_by_key(|&(u, h, _)| match role {
        ChainRole::UpperHull => (u, -h),
        ChainRole::LowerHull => (u, h),
    });
    pts.dedup_by_key(|&mut (u, _, _)| u);
    let keep = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| -> bool {
        let t = (b.0 - a.0) as i128 * (c.1 - a.1) as i128
            - (b.1 - a.1) as i128 * (c.0 - a.0) as i128;
        // t = cross(a, b, c); left turn keeps a point on the lower hull,
        // right turn on the upper hull.
        match role {
            ChainRole::UpperHull => t < 0,
            ChainRole::LowerHull => t > 0,
        }
    };
    let mut out: Vec<(i64, i64, LatticePoint)> = Vec::new();
    for &(u, h, p) in &pts {
        while out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if keep((a.0, a.1), (b.0, b.1), (u, h)) {
                break;
            }
            out.pop();
        }
        out.push((u, h, p));
    }
    MonotoneChain {
        points: out.into_iter().map(|(_, _, p)| p).collect(),
        role,
    }
}

/// Upper hull of a point set with respect to direction (1,1).
pub fn upper_chain(points: impl IntoIterator<Item = LatticePoint>) -> MonotoneChain {
    chain(points, ChainRole::UpperHull)
}

/// Lower hull of a point set with respect to direction (1,1).
pub fn lower_chain(points: impl IntoIterator<Item = LatticePoint>) -> MonotoneChain {
    chain(points, ChainRole::LowerHull)
}

impl MonotoneChain {
    fn height_at(&self, u: i64) -> Option<(i128, i128)> {
        // Piecewise-linear height h(u) as a fraction (num, den), den > 0.
        let uh: Vec<(i64, i64)> = self.points.iter().map(|p| (p.x - p.y, p.x + p.y)).collect();
        if u < uh[0].0 || u > uh[uh.len() - 1].0 {
            return None;
        }
        for w in uh.windows(2) {
            let (u0, h0) = w[0];
            let (u1, h1) = w[1];
            if u0 <= u && u <= u1 {
                let den = (u1 - u0) as i128;
                let num = h0 as i128 * den + (h1 - h0) as i128 * (u - u0) as i128;
                return Some((num, den));
            }
        }
        let last = uh[uh.len() - 1];
        Some((last.1 as i128, 1))
    }
}

/// Convex region bounded above by `upper`, below by `lower`, closed by
/// vertical segments at the extreme x values.
pub fn region_between(upper: &MonotoneChain, lower: &MonotoneChain) -> Result<LatticePolygon> {
    // Where the sheared ranges overlap, lower must not exceed upper.
    let us: Vec<i64> = upper
        .points
        .iter()
        .chain(&lower.points)
        .map(|p| p.x - p.y)
        .collect();
    for &u in &us {
        if let (Some((un, ud)), Some((ln, ld))) = (upper.height_at(u), lower.height_at(u)) {
            if ln * ud > un * ld {
                return Err(Error::InconsistentChains);
            }
        }
    }
    let all = || upper.points.iter().chain(&lower.points).copied();
    let x_min = all().map(|p| p.x).min().unwrap();
    let x_max = all().map(|p| p.x).max().unwrap();
    let top_left = LatticePoint::new(x_min, upper.points.iter().map(|p| p.y).max().unwrap());
    let bottom_right = LatticePoint::new(x_max, lower.points.iter().map(|p| p.y).min().unwrap());
    Ok(convex_hull(all().chain([top_left, bottom_right])))
}

/// Shape taxonomy report: an initial polygon (right triangle or
/// axis-aligned quadrilateral) with a bounded number of corner cuts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeReport {
    pub pass: bool,
    pub cuts: usize,
    pub violated_clause: Option<String>,
}

/// Curve class as far as the shape taxonomy is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeClass {
    Polynomial,
    SameDenominator,
    DifferentDenominators,
}

fn on_line(a: LatticePoint, b: LatticePoint, f: impl Fn(LatticePoint) -> i64) -> bool {
    f(a) == 0 && f(b) == 0
}

/// Validate the corner-cut taxonomy of an implicit polygon for its class.
pub fn shape_check(poly: &LatticePolygon, class: ShapeClass) -> ShapeReport {
    let pass = ShapeReport {
        pass: true,
        cuts: 0,
        violated_clause: None,
    };
    let fail = |cuts: usize, clause: &str| ShapeReport {
        pass: false,
        cuts,
        violated_clause: Some(clause.to_string()),
    };
    if poly.vertices().len() <= 2 {
        // Monomial-style parameterizations give segments or points.
        return pass;
    }
    if poly.min_x() != 0 || poly.min_y() != 0 {
        return fail(0, "polygon does not touch both axes");
    }
    let (xm, ym) = (poly.max_x(), poly.max_y());
    let n = poly.vertices().len();
    let edges: Vec<(LatticePoint, LatticePoint)> = (0..n)
        .map(|i| (poly.vertices()[i], poly.vertices()[(i + 1) % n]))
        .collect();
    let count_cuts = |lines: &[Box<dyn Fn(LatticePoint) -> i64>]| -> usize {
        edges
            .iter()
            .filter(|&&(a, b)| !lines.iter().any(|f| on_line(a, b, f)))
            .count()
    };
    match class {
        ShapeClass::Polynomial => {
            if !poly.vertices().contains(&LatticePoint::new(xm, 0))
                || !poly.vertices().contains(&LatticePoint::new(0, ym))
            {
                return fail(0, "missing the vertex on one of the axes");
            }
            // Hypotenuse through (xm,0) and (0,ym).
            let lines: Vec<Box<dyn Fn(LatticePoint) -> i64>> = vec![
                Box::new(|p: LatticePoint| p.y),
                Box::new(|p: LatticePoint| p.x),
                Box::new(move |p: LatticePoint| ym * p.x + xm * p.y - xm * ym),
            ];
            let cuts = count_cuts(&lines);
            if cuts > 1 {
                return fail(cuts, "more than one corner cut");
            }
            let origin = LatticePoint::new(0, 0);
            if cuts == 0 && !poly.vertices().contains(&origin) {
                return fail(cuts, "uncut triangle must have its origin vertex");
            }
            if cuts == 1 && poly.contains_point(origin) {
                return fail(cuts, "the single cut must exclude the origin");
            }
            ShapeReport { cuts, ..pass }
        }
        ShapeClass::SameDenominator => {
            let u = poly.vertices().iter().map(|p| p.x + p.y).max().unwrap();
            let lines: Vec<Box<dyn Fn(LatticePoint) -> i64>> = vec![
                Box::new(|p: LatticePoint| p.y),
                Box::new(|p: LatticePoint| p.x),
                Box::new(move |p: LatticePoint| p.x + p.y - u),
            ];
            let cuts = count_cuts(&lines);
            if cuts > 2 {
                return fail(cuts, "more than two corner cuts");
            }
            ShapeReport { cuts, ..pass }
        }
        ShapeClass::DifferentDenominators => {
            let lines: Vec<Box<dyn Fn(LatticePoint) -> i64>> = vec![
                Box::new(|p: LatticePoint| p.y),
                Box::new(|p: LatticePoint| p.x),
                Box::new(move |p: LatticePoint| p.x - xm),
                Box::new(move |p: LatticePoint| p.y - ym),
            ];
            let cuts = count_cuts(&lines);
            if cuts > 2 {
                return fail(cuts, "more than two corner cuts");
            }
            ShapeReport { cuts, ..pass }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn hull_drops_edge_midpoint() {
        let h = convex_hull(pts(&[(0, 0), (2, 0), (0, 2), (1, 1)]));
        assert_eq!(h.vertices(), pts(&[(0, 0), (2, 0), (0, 2)]).as_slice());
    }

    #[test]
    fn hull_folium_triangle() {
        let h = convex_hull(pts(&[(3, 0), (0, 3), (1, 1)]));
        assert_eq!(h.vertices().len(), 3);
        assert!(h.vertices().contains(&LatticePoint::new(1, 1)));
    }

    #[test]
    fn hull_five_vertex_pentagon() {
        let h = convex_hull(pts(&[(7, 0), (0, 7), (0, 3), (3, 1), (6, 0)]));
        assert_eq!(h.vertices().len(), 5);
        assert_eq!(h.vertices()[0], LatticePoint::new(0, 3));
    }

    #[test]
    fn hull_degenerate_segment_and_point() {
        let s = convex_hull(pts(&[(0, 0), (1, 1), (2, 2)]));
        assert_eq!(s.vertices(), pts(&[(0, 0), (2, 2)]).as_slice());
        let p = convex_hull(pts(&[(5, 5), (5, 5)]));
        assert!(p.is_point());
    }

    #[test]
    fn containment_examples() {
        let pentagon = convex_hull(pts(&[(7, 0), (0, 7), (0, 3), (3, 1), (6, 0)]));
        let hexagon = convex_hull(pts(&[(1, 3), (0, 4), (0, 6), (2, 5), (7, 0), (4, 1)]));
        assert!(contains(&pentagon, &hexagon));
        assert!(!contains(&hexagon, &pentagon));
        assert!(contains(&pentagon, &pentagon));
        let tri = convex_hull(pts(&[(0, 0), (2, 0), (0, 2)]));
        assert!(!tri.contains_point(LatticePoint::new(3, 0)));
    }

    #[test]
    fn region_between_box() {
        let upper = upper_chain(pts(&[(0, 2), (2, 2)]));
        let lower = lower_chain(pts(&[(0, 0), (2, 0)]));
        let r = region_between(&upper, &lower).unwrap();
        assert_eq!(
            r.vertices(),
            pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]).as_slice()
        );
    }

    #[test]
    fn region_between_equal_chains_degenerates() {
        let upper = upper_chain(pts(&[(0, 0), (2, 0)]));
        let lower = lower_chain(pts(&[(0, 0), (2, 0)]));
        let r = region_between(&upper, &lower).unwrap();
        assert!(r.is_segment());
    }

    #[test]
    fn region_between_pentagon() {
        let upper = upper_chain(pts(&[(0, 7), (5, 7)]));
        let lower = lower_chain(pts(&[(0, 2), (1, 0), (5, 0)]));
        let r = region_between(&upper, &lower).unwrap();
        let expect = convex_hull(pts(&[(0, 2), (1, 0), (5, 0), (5, 7), (0, 7)]));
        assert_eq!(r, expect);
    }

    #[test]
    fn region_between_rejects_crossed_chains() {
        let upper = upper_chain(pts(&[(0, 0), (2, 0)]));
        let lower = lower_chain(pts(&[(0, 2), (2, 2)]));
        assert!(matches!(
            region_between(&upper, &lower),
            Err(Error::InconsistentChains)
        ));
    }

    #[test]
    fn shape_check_examples() {
        let pentagon = convex_hull(pts(&[(7, 0), (0, 7), (0, 3), (3, 1), (6, 0)]));
        let r = shape_check(&pentagon, ShapeClass::SameDenominator);
        assert!(r.pass, "{:?}", r);
        assert_eq!(r.cuts, 2);

        let tri = convex_hull(pts(&[(0, 0), (4, 0), (0, 3)]));
        let r = shape_check(&tri, ShapeClass::Polynomial);
        assert!(r.pass);
        assert_eq!(r.cuts, 0);

        let quad = convex_hull(pts(&[(1, 0), (2, 0), (0, 2), (0, 1)]));
        let r = shape_check(&quad, ShapeClass::Polynomial);
        assert!(r.pass, "{:?}", r);
        assert_eq!(r.cuts, 1);

        let hexagon = convex_hull(pts(&[(0, 1), (0, 3), (3, 0), (1, 3), (2, 0), (3, 2)]));
        let r = shape_check(&hexagon, ShapeClass::DifferentDenominators);
        assert!(r.pass, "{:?}", r);
        assert_eq!(r.cuts, 2);
    }

    #[test]
    fn polygon_chains_share_endpoints() {
        let p = convex_hull(pts(&[(0, 2), (1, 0), (5, 0), (5, 7), (0, 7)]));
        let up = p.upper_chain();
        let lo = p.lower_chain();
        assert_eq!(up.points.first(), lo.points.first());
        assert_eq!(up.points.last(), lo.points.last());
        let r = region_between(&up, &lo).unwrap();
        assert_eq!(r, p);
    }
}
