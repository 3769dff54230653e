//! Closed-form prediction of the implicit polygon for all three
//! parameterization classes, plus degree bounds and extreme coefficients.
//!
//! For different denominators the staircase enumeration is authoritative; the
//! closed-form corner formulas are evaluated per selection chain and each must
//! agree with the directed extreme of the chain it describes, otherwise
//! prediction fails loudly with ChainMismatch.

use num_traits::One;
use serde::Serialize;

use crate::curves::{
    derive_diff_denom, derive_same_denom, make_selection, CaseTag, CurveClass, DiffDenomData,
    ParametricCurve, SameDenomData, Selection, SelectionKind, Support,
};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, LatticePoint, LatticePolygon};
use crate::subdivisions::exponent_points;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub point: LatticePoint,
    pub label: String,
}

/// A two-edge corner: the extra vertex p and its discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerBreakpoint {
    pub corner: String,
    pub point: LatticePoint,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedPolygon {
    pub polygon: LatticePolygon,
    pub candidates: Vec<Candidate>,
    pub case_tag: Option<CaseTag>,
    pub breakpoints: Vec<CornerBreakpoint>,
}

impl PredictedPolygon {
    fn from_candidates(
        candidates: Vec<Candidate>,
        case_tag: Option<CaseTag>,
        breakpoints: Vec<CornerBreakpoint>,
    ) -> Self {
        let polygon = convex_hull(candidates.iter().map(|c| c.point));
        PredictedPolygon {
            polygon,
            candidates,
            case_tag,
            breakpoints,
        }
    }
}

fn cand(point: LatticePoint, label: &str) -> Candidate {
    Candidate {
        point,
        label: label.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Polynomial parameterizations
// ---------------------------------------------------------------------------

fn min_nonzero(s: &Support) -> Result<i64> {
    s.exponents()
        .iter()
        .copied()
        .find(|&e| e != 0)
        .ok_or_else(|| Error::InternalInvariant("constant parameterization".into()))
}

/// Implicit polygon of x = P0(t), y = P1(t), from the supports of P0, P1:
/// a triangle when either has a constant term, otherwise a quadrilateral.
pub fn predict_polynomial(p0: &Support, p1: &Support) -> Result<PredictedPolygon> {
    let a0n = p0.right();
    let a1m = p1.right();
    let mut candidates = vec![
        cand(LatticePoint::new(a1m, 0), "x-degree corner"),
        cand(LatticePoint::new(0, a0n), "y-degree corner"),
    ];
    if p0.left() == 0 || p1.left() == 0 {
        candidates.push(cand(LatticePoint::new(0, 0), "origin (constant term)"));
    } else {
        candidates.push(cand(
            LatticePoint::new(min_nonzero(p1)?, 0),
            "minimal x-exponent",
        ));
        candidates.push(cand(
            LatticePoint::new(0, min_nonzero(p0)?),
            "minimal y-exponent",
        ));
    }
    Ok(PredictedPolygon::from_candidates(candidates, None, vec![]))
}

/// Coefficients of x^{a_{1m}} and y^{a_{0n}} in the implicit equation, up to
/// one shared sign: ((-1)^{a_{0n} a_{1m}} (-c_{1m})^{a_{0n}}, (-c_{0n})^{a_{1m}}).
pub fn extreme_coefficients(
    a0n: i64,
    c0n: &Rational,
    a1m: i64,
    c1m: &Rational,
) -> (Rational, Rational) {
    let pow = |b: &Rational, e: i64| -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= b;
        }
        acc
    };
    let sign = if (a0n * a1m) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    (sign * pow(&(-c1m.clone()), a0n), pow(&(-c0n.clone()), a1m))
}

// ---------------------------------------------------------------------------
// Shared denominator
// ---------------------------------------------------------------------------

fn project(e: [i64; 3]) -> LatticePoint {
    LatticePoint::new(e[0], e[1])
}

/// The corner construction shared by the vertex formula and its coefficient variants:
/// e_lambda = b_mR - b_tL, plus b_tL on the side opposite t and u - b_mR on
/// the side opposite m.
fn corner_point(data: &SameDenomData, i: usize, j: usize, t: usize, m: usize) -> LatticePoint {
    let lambda = 3 - i - j;
    let (btl, bmr) = (data.left(t), data.right(m));
    let mut e = [0i64; 3];
    e[lambda] = bmr - btl;
    let tau = i + j - t;
    e[tau] += btl;
    let mu = i + j - m;
    e[mu] += data.u - bmr;
    project(e)
}

/// Vertex of the implicit polygon from the extreme endpoints of B_i and B_j.
pub fn same_corners_vertex(data: &SameDenomData, i: usize, j: usize) -> LatticePoint {
    let t = if data.left(i) <= data.left(j) { i } else { j };
    let m = if data.right(i) >= data.right(j) { i } else { j };
    corner_point(data, i, j, t, m)
}

/// Member points of the implicit polygon from the other min/max endpoint
/// combinations; the mixed (max-left, min-right) variant exists only when the
/// segments overlap.
pub fn c0_points(data: &SameDenomData, i: usize, j: usize) -> Vec<LatticePoint> {
    let tmin = if data.left(i) <= data.left(j) { i } else { j };
    let tmax = i + j - tmin;
    let mmax = if data.right(i) >= data.right(j) { i } else { j };
    let mmin = i + j - mmax;
    let mut out = vec![
        corner_point(data, i, j, tmin, mmin),
        corner_point(data, i, j, tmax, mmax),
    ];
    if data.left(tmax) <= data.right(mmin) {
        out.push(corner_point(data, i, j, tmax, mmin));
    }
    out
}

/// Implicit polygon of a shared-denominator parameterization, by the case
/// taxonomy of the segment classification.
pub fn predict_same_denom(data: &SameDenomData) -> PredictedPolygon {
    let u = data.u;
    let [i, j, k] = data.roles;
    // Candidate (e_i, e_j) vectors; e_k closes the homogeneous degree u.
    let to_point = |ei: i64, ej: i64| -> LatticePoint {
        let mut e = [0i64; 3];
        e[i] = ei;
        e[j] = ej;
        e[k] = u - ei - ej;
        project(e)
    };
    let raw: Vec<(i64, i64, &str)> = match data.case_tag {
        CaseTag::OneA => vec![(u, 0, "full corner"), (0, u, "full corner"), (0, 0, "origin")],
        CaseTag::TwoA => vec![
            (u, 0, "B_j,B_k corner"),
            (0, u, "B_i,B_k corner"),
            (0, u - data.right(i) + data.left(i), "B_i sweep"),
            (data.left(j), u - data.right(i), "interior vertex"),
            (u - data.right(j) + data.left(j), 0, "B_j sweep"),
        ],
        CaseTag::TwoB => vec![
            (data.right(j), 0, "B_j right endpoint"),
            (data.right(k), u - data.right(k), "B_k right endpoint"),
            (0, u, "B_i,B_k corner"),
            (0, 0, "origin"),
        ],
        CaseTag::ThreeB => vec![
            (data.right(j), 0, "B_j right endpoint"),
            (data.right(k), u - data.right(k), "B_k right endpoint"),
            (data.left(k), u - data.left(k), "B_k left endpoint"),
            (0, u - data.left(i), "B_i left endpoint"),
            (0, 0, "origin"),
        ],
    };
    let candidates = raw
        .into_iter()
        .map(|(ei, ej, label)| cand(to_point(ei, ej), label))
        .collect();
    PredictedPolygon::from_candidates(candidates, Some(data.case_tag), vec![])
}

// ---------------------------------------------------------------------------
// Different denominators
// ---------------------------------------------------------------------------

/// Conditioned extreme exponent of the focus side, given that the other side
/// attains its own extreme. `marked_nonselected` reads the leftmost and
/// rightmost non-selected points instead of the selected ones (the lower-hull
/// variants); `want_max` toggles between the max and min forms.
fn cond_exponent(sel: &Selection, marked_nonselected: bool, want_max: bool) -> i64 {
    let (l, r) = if marked_nonselected {
        (sel.left_non(0).unwrap(), sel.right_non(0).unwrap())
    } else {
        (sel.left_sel(0).unwrap(), sel.right_sel(0).unwrap())
    };
    let (a_min, a_max) = (sel.min(0), sel.max(0));
    let chi_min = sel.chi(1, sel.min(1));
    let chi_max = sel.chi(1, sel.max(1));
    let base = chi_min * (l - a_min) + chi_max * (a_max - r);
    if want_max {
        (r - l) + base
    } else if sel.has_nonselected(1) {
        base
    } else {
        base + (r - l)
    }
}

/// Upper-left corner under Selection2: the two endpoint vertices and, when
/// both A_0 endpoints are selected and both A_1 endpoints are not, the
/// breakpoint p with its discriminant.
fn upper_left_corner(
    sel2: &Selection,
) -> (LatticePoint, LatticePoint, Option<(LatticePoint, i64)>) {
    let e1max = sel2.max(0) - sel2.min(0);
    let q1 = LatticePoint::new(0, cond_exponent(sel2, true, true));
    let q2 = LatticePoint::new(cond_exponent(&sel2.swapped(), false, false), e1max);
    let two_edge = sel2.chi(0, sel2.min(0)) == 1
        && sel2.chi(0, sel2.max(0)) == 1
        && sel2.chi(1, sel2.min(1)) == 0
        && sel2.chi(1, sel2.max(1)) == 0;
    let bp = if two_edge {
        let (a00, a0n) = (sel2.min(0), sel2.max(0));
        let (a10, a1m) = (sel2.min(1), sel2.max(1));
        let (a0l, a0r) = (sel2.left_non(0).unwrap(), sel2.right_non(0).unwrap());
        let (a1l, a1r) = (sel2.left_sel(1).unwrap(), sel2.right_sel(1).unwrap());
        let delta = (a0n - a0r) * (a1l - a10) - (a0l - a00) * (a1m - a1r);
        if delta < 0 {
            Some((LatticePoint::new(a1l - a10, a0r - a00), delta))
        } else if delta > 0 {
            Some((LatticePoint::new(a1m - a1r, a0n - a0l), delta))
        } else {
            None
        }
    } else {
        None
    };
    (q1, q2, bp)
}

/// Lower-left corner under Selection2; breakpoint when all four endpoints of
/// A_0 and A_1 are selected.
fn lower_left_corner(
    sel2: &Selection,
) -> (LatticePoint, LatticePoint, Option<(LatticePoint, i64)>) {
    let q1 = LatticePoint::new(0, cond_exponent(sel2, true, false));
    let q2 = LatticePoint::new(cond_exponent(&sel2.swapped(), true, false), 0);
    let two_edge = sel2.chi(0, sel2.min(0)) == 1
        && sel2.chi(0, sel2.max(0)) == 1
        && sel2.chi(1, sel2.min(1)) == 1
        && sel2.chi(1, sel2.max(1)) == 1;
    let bp = if two_edge && sel2.has_nonselected(1) {
        let (a00, a0n) = (sel2.min(0), sel2.max(0));
        let (a10, a1m) = (sel2.min(1), sel2.max(1));
        let (a0l, a0r) = (sel2.left_non(0).unwrap(), sel2.right_non(0).unwrap());
        let (a1l, a1r) = (sel2.left_non(1).unwrap(), sel2.right_non(1).unwrap());
        let delta = (a0n - a0r) * (a1l - a10) - (a0l - a00) * (a1m - a1r);
        if delta < 0 {
            Some((LatticePoint::new(a1l - a10, a0n - a0r), delta))
        } else if delta > 0 {
            Some((LatticePoint::new(a1m - a1r, a0l - a00), delta))
        } else {
            None
        }
    } else {
        None
    };
    (q1, q2, bp)
}

/// Upper-right corner under Selection1; breakpoint when none of the four
/// endpoints is selected.
fn upper_right_breakpoint(sel1: &Selection) -> Option<(LatticePoint, i64)> {
    let two_edge = sel1.chi(0, sel1.min(0)) == 0
        && sel1.chi(0, sel1.max(0)) == 0
        && sel1.chi(1, sel1.min(1)) == 0
        && sel1.chi(1, sel1.max(1)) == 0;
    if !two_edge {
        return None;
    }
    let (a00, a0n) = (sel1.min(0), sel1.max(0));
    let (a10, a1m) = (sel1.min(1), sel1.max(1));
    let (a0l, a0r) = (sel1.left_sel(0).unwrap(), sel1.right_sel(0).unwrap());
    let (a1l, a1r) = (sel1.left_sel(1).unwrap(), sel1.right_sel(1).unwrap());
    let delta = (a0n - a0r) * (a1l - a10) - (a0l - a00) * (a1m - a1r);
    if delta < 0 {
        Some((LatticePoint::new(a1m - a1l, a0r - a00), delta))
    } else if delta > 0 {
        Some((LatticePoint::new(a1r - a10, a0n - a0l), delta))
    } else {
        None
    }
}

/// Flags of one side from `a`, the other from `b`: tracks one coordinate of
/// the exponent rectangle a staircase spans between its two selections.
fn mixed_selection(a: &Selection, b: &Selection) -> Selection {
    Selection {
        kind: a.kind,
        flags: [a.flags[0].clone(), b.flags[1].clone()],
    }
}

/// Extreme points of the monomial rectangles: the largest e_0 combinable with
/// a zero Selection2 contribution in y, and symmetrically for e_1. Both are
/// exponent vectors of genuine resultant monomials for any selection data.
fn mixed_extremes(sel1: &Selection, sel2: &Selection) -> (LatticePoint, LatticePoint) {
    let m_v = Selection {
        kind: sel2.kind,
        flags: [sel2.flags[1].clone(), sel1.flags[0].clone()],
    };
    let m_w = Selection {
        kind: sel2.kind,
        flags: [sel2.flags[0].clone(), sel1.flags[1].clone()],
    };
    let v = cond_exponent(&m_v, true, true);
    let w = cond_exponent(&m_w, true, true);
    (LatticePoint::new(v, 0), LatticePoint::new(0, w))
}

fn fast_path(
    sel1: &Selection,
    sel2: &Selection,
) -> (Vec<Candidate>, Vec<CornerBreakpoint>) {
    let mut cands = Vec::new();
    let mut bps = Vec::new();
    let e0max = sel1.max(1) - sel1.min(1);
    let e1max = sel1.max(0) - sel1.min(0);

    let (bottom_right, top_left) = mixed_extremes(sel1, sel2);
    cands.push(cand(bottom_right, "mixed corner, bottom"));
    cands.push(cand(top_left, "mixed corner, left"));

    // Upper hull corners, Selection1.
    cands.push(cand(
        LatticePoint::new(e0max, cond_exponent(sel1, false, true)),
        "right edge, top",
    ));
    cands.push(cand(
        LatticePoint::new(cond_exponent(&sel1.swapped(), false, true), e1max),
        "top edge, right",
    ));
    if let Some((p, delta)) = upper_right_breakpoint(sel1) {
        cands.push(cand(p, "upper-right breakpoint"));
        bps.push(CornerBreakpoint {
            corner: "upper-right".into(),
            point: p,
            delta,
        });
    }

    if sel2.has_selected(0) && sel2.has_selected(1) {
        let (q1, q2, bp) = upper_left_corner(sel2);
        cands.push(cand(q1, "left edge, top"));
        cands.push(cand(q2, "top edge, left"));
        if let Some((p, delta)) = bp {
            cands.push(cand(p, "upper-left breakpoint"));
            bps.push(CornerBreakpoint {
                corner: "upper-left".into(),
                point: p,
                delta,
            });
        }
        let (q1, q2, bp) = lower_left_corner(sel2);
        cands.push(cand(q1, "left edge, bottom"));
        cands.push(cand(q2, "bottom edge, left"));
        if let Some((p, delta)) = bp {
            cands.push(cand(p, "lower-left breakpoint"));
            bps.push(CornerBreakpoint {
                corner: "lower-left".into(),
                point: p,
                delta,
            });
        }
        // Lower-right corner: the upper-left corner of the transposed data.
        let (q1, q2, bp) = upper_left_corner(&sel2.swapped());
        cands.push(cand(q1.transpose(), "bottom edge, right"));
        cands.push(cand(q2.transpose(), "right edge, bottom"));
        if let Some((p, delta)) = bp {
            cands.push(cand(p.transpose(), "lower-right breakpoint"));
            bps.push(CornerBreakpoint {
                corner: "lower-right".into(),
                point: p.transpose(),
                delta,
            });
        }
    } else {
        // Degenerate lower hull: one side of Selection2 selects nothing, so
        // the bottom boundary reaches the origin.
        cands.push(cand(LatticePoint::new(0, 0), "origin"));
        cands.push(cand(
            LatticePoint::new(cond_exponent(&sel1.swapped(), false, false), e1max),
            "top edge, left",
        ));
        cands.push(cand(
            LatticePoint::new(e0max, cond_exponent(sel1, false, false)),
            "right edge, bottom",
        ));
        match (sel2.has_selected(0), sel2.has_selected(1)) {
            (false, true) => cands.push(cand(LatticePoint::new(0, e1max), "left edge, top")),
            (true, false) => cands.push(cand(LatticePoint::new(e0max, 0), "bottom edge, right")),
            _ => {}
        }
    }
    (cands, bps)
}

/// Directed lexicographic extreme of a point cloud.
fn extreme_by(pts: &[LatticePoint], key: impl Fn(&LatticePoint) -> (i64, i64)) -> LatticePoint {
    *pts.iter().max_by_key(|p| key(p)).unwrap()
}

/// Implicit polygon for different denominators. Each staircase contributes a
/// resultant term whose monomials fill the rectangle between the term's
/// Selection2 exponents (forced monomial factors) and Selection1 exponents
/// (all non-constant factors); the polygon is the hull of all rectangle
/// corners: the two pure selections plus the two mixed ones that pair one
/// side's flags from each. The closed-form corner formulas describe single
/// selection chains, so each is cross-checked against the directed extreme of
/// the chain it belongs to; a union vertex may come from a mixed chain that
/// no closed form covers, which is why the hull itself is enumerated.
pub fn predict_diff_denom(data: &DiffDenomData) -> Result<PredictedPolygon> {
    let sel1 = make_selection(data, SelectionKind::Selection1)?;
    let sel2 = make_selection(data, SelectionKind::Selection2)?;
    let pts1 = exponent_points(&sel1);
    let pts2 = exponent_points(&sel2);
    let pm1 = exponent_points(&mixed_selection(&sel1, &sel2));
    let pm2 = exponent_points(&mixed_selection(&sel2, &sel1));
    let mut pts = pts1.clone();
    pts.extend(pts2.iter().copied());
    pts.extend(pm1.iter().copied());
    pts.extend(pm2.iter().copied());
    let enumerated = convex_hull(pts);

    let (candidates, breakpoints) = fast_path(&sel1, &sel2);
    let mut formula = Vec::new();
    let mut expected = Vec::new();
    for c in &candidates {
        // Breakpoints are chain vertices between two corner regions: membership
        // in the chain's point set is the right check for them.
        if c.label.ends_with("breakpoint") {
            let chain = if c.label.starts_with("upper-right") { &pts1 } else { &pts2 };
            if !chain.contains(&c.point) {
                formula.push((c.point.x, c.point.y));
                expected.push((i64::MIN, i64::MIN));
            }
            continue;
        }
        let degenerate = !(sel2.has_selected(0) && sel2.has_selected(1));
        let (chain, key): (&[LatticePoint], fn(&LatticePoint) -> (i64, i64)) =
            match (c.label.as_str(), degenerate) {
                ("mixed corner, bottom", _) => (&pm1, |p| (-p.y, p.x)),
                ("mixed corner, left", _) => (&pm2, |p| (-p.x, p.y)),
                ("right edge, top", _) => (&pts1, |p| (p.x, p.y)),
                ("top edge, right", _) => (&pts1, |p| (p.y, p.x)),
                ("left edge, top", false) => (&pts2, |p| (-p.x, p.y)),
                ("top edge, left", false) => (&pts2, |p| (p.y, -p.x)),
                ("left edge, bottom", false) => (&pts2, |p| (-p.x, -p.y)),
                ("bottom edge, left", false) => (&pts2, |p| (-p.y, -p.x)),
                ("bottom edge, right", false) => (&pts2, |p| (-p.y, p.x)),
                ("right edge, bottom", false) => (&pts2, |p| (p.x, -p.y)),
                ("origin", true) => (&pts2, |p| (-p.x, -p.y)),
                ("top edge, left", true) => (&pts1, |p| (p.y, -p.x)),
                ("right edge, bottom", true) => (&pts1, |p| (p.x, -p.y)),
                ("left edge, top", true) => (&pm2, |p| (-p.x, p.y)),
                ("bottom edge, right", true) => (&pm1, |p| (-p.y, p.x)),
                _ => continue,
            };
        let want = extreme_by(chain, key);
        if want != c.point {
            formula.push((c.point.x, c.point.y));
            expected.push((want.x, want.y));
        }
    }
    if !formula.is_empty() {
        return Err(Error::ChainMismatch {
            fast: formula,
            enumerated: expected,
        });
    }
    Ok(PredictedPolygon {
        polygon: enumerated,
        candidates,
        case_tag: None,
        breakpoints,
    })
}

// ---------------------------------------------------------------------------
// Degree bounds and dispatch
// ---------------------------------------------------------------------------

/// Total-degree and per-variable degree bounds from the support data alone.
pub fn degree_bounds(curve: &ParametricCurve) -> Result<(i64, i64, i64)> {
    match curve.class {
        CurveClass::Polynomial | CurveClass::SameDenominator => {
            let b = [
                Support::new(crate::curves::support_of(&curve.num[0])),
                Support::new(crate::curves::support_of(&curve.num[1])),
                Support::new(crate::curves::support_of(&curve.den[0])),
            ];
            let span = |s: &[&Support]| -> i64 {
                let lo = s.iter().map(|x| x.left()).min().unwrap();
                let hi = s.iter().map(|x| x.right()).max().unwrap();
                hi - lo
            };
            let total = span(&[&b[0], &b[1], &b[2]]);
            let deg_x = span(&[&b[1], &b[2]]);
            let deg_y = span(&[&b[0], &b[2]]);
            Ok((total, deg_x, deg_y))
        }
        CurveClass::DifferentDenominators => {
            let data = derive_diff_denom(curve)?;
            let iv = |v: &[i64]| (*v.iter().min().unwrap(), *v.iter().max().unwrap());
            let (p0, q0, p1, q1) = (
                iv(&data.p_supp[0]),
                iv(&data.q_supp[0]),
                iv(&data.p_supp[1]),
                iv(&data.q_supp[1]),
            );
            // S = (A(P0)+A(Q1)) u (A(P1)+A(Q0)) u (A(Q0)+A(Q1)), intervals.
            let lo = (p0.0 + q1.0).min(p1.0 + q0.0).min(q0.0 + q1.0);
            let hi = (p0.1 + q1.1).max(p1.1 + q0.1).max(q0.1 + q1.1);
            let deg_x = data.a[1].right() - data.a[1].left();
            let deg_y = data.a[0].right() - data.a[0].left();
            Ok((hi - lo, deg_x, deg_y))
        }
    }
}

/// The polygon cut out by the degree bounds:
/// x, y >= 0, x <= degInX, y <= degInY, x + y <= total.
pub fn degree_bound_polygon(total: i64, deg_x: i64, deg_y: i64) -> LatticePolygon {
    let x1 = deg_x.min(total);
    let y1 = deg_y.min(total);
    convex_hull([
        LatticePoint::new(0, 0),
        LatticePoint::new(x1, 0),
        LatticePoint::new(0, y1),
        LatticePoint::new(x1, deg_y.min(total - x1)),
        LatticePoint::new(deg_x.min(total - y1), y1),
    ])
}

/// Predict the implicit polygon of a normalized curve, dispatching on class.
pub fn predict(curve: &ParametricCurve) -> Result<PredictedPolygon> {
    match curve.class {
        CurveClass::Polynomial => {
            let p0 = Support::new(crate::curves::support_of(&curve.num[0]));
            let p1 = Support::new(crate::curves::support_of(&curve.num[1]));
            predict_polynomial(&p0, &p1)
        }
        CurveClass::SameDenominator => Ok(predict_same_denom(&derive_same_denom(curve)?)),
        CurveClass::DifferentDenominators => predict_diff_denom(&derive_diff_denom(curve)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{normalize, parse_curve};
    use crate::geometry::{contains, shape_check, ShapeClass};

    fn hull(pts: &[(i64, i64)]) -> LatticePolygon {
        convex_hull(pts.iter().map(|&(x, y)| LatticePoint::new(x, y)))
    }

    fn prepared(text: &str) -> ParametricCurve {
        normalize(&parse_curve(text).unwrap()).unwrap()
    }

    #[test]
    fn polynomial_triangle() {
        let p = predict(&prepared("x=2t^3-t+1; y=t^4-2t^2+3")).unwrap();
        assert_eq!(p.polygon, hull(&[(0, 0), (4, 0), (0, 3)]));
    }

    #[test]
    fn polynomial_quadrilateral() {
        let p = predict(&prepared("x=t+t^2; y=2t-t^2")).unwrap();
        assert_eq!(p.polygon, hull(&[(1, 0), (2, 0), (0, 2), (0, 1)]));
    }

    #[test]
    fn polynomial_degenerate_quadrilateral() {
        let p = predict(&prepared("x=t^48-t^56-t^60-t^62-t^63; y=t^32")).unwrap();
        assert_eq!(p.polygon, hull(&[(32, 0), (0, 48), (0, 63)]));
    }

    fn rat(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn extreme_coefficient_fixtures() {
        // Pairs compare up to one shared sign.
        let same = |got: (Rational, Rational), want: (i64, i64)| {
            let w = (rat(want.0), rat(want.1));
            assert!(
                got == w || (-got.0.clone(), -got.1.clone()) == (w.0.clone(), w.1.clone()),
                "{got:?} vs {w:?}"
            );
        };
        same(extreme_coefficients(3, &rat(2), 4, &rat(1)), (1, -16));
        same(extreme_coefficients(2, &rat(1), 2, &rat(-1)), (1, 1));
        same(extreme_coefficients(1, &rat(1), 1, &rat(1)), (1, -1));
    }

    fn circle_data() -> SameDenomData {
        derive_same_denom(&prepared("x=(2t)/(t^2+1); y=(1-t^2)/(t^2+1)")).unwrap()
    }

    #[test]
    fn circle_corner_vertices() {
        let d = circle_data();
        assert_eq!(same_corners_vertex(&d, 1, 2), LatticePoint::new(2, 0));
        assert_eq!(same_corners_vertex(&d, 0, 2), LatticePoint::new(0, 2));
        assert_eq!(same_corners_vertex(&d, 0, 1), LatticePoint::new(0, 0));
    }

    #[test]
    fn c0_point_fixtures() {
        let circle = circle_data();
        // Every variant stays inside the predicted polygon.
        let poly = predict_same_denom(&circle).polygon;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for p in c0_points(&circle, i, j) {
                    assert!(poly.contains_point(p), "({i},{j}) gave {p:?}");
                }
            }
        }
        // Equal segments collapse all variants onto the corner vertex.
        assert_eq!(
            c0_points(&circle, 1, 2),
            vec![LatticePoint::new(2, 0); 3],
        );
        let case_b = derive_same_denom(
            &parse_curve(
                r#"{"class":"same_denominator",
                    "x":{"num":{"1":"1","4":"1"},"den":{"0":"1","3":"1"}},
                    "y":{"num":{"0":"1","2":"1"},"den":{"0":"1","3":"1"}},
                    "supports_only":true}"#,
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(case_b.case_tag, CaseTag::TwoB);
        let (i, j) = (1, 2);
        let v1 = corner_point(&case_b, i, j, 1, 1);
        assert_eq!(v1.x, 2);
        assert_eq!(c0_points(&case_b, i, j)[0], v1);
    }

    #[test]
    fn same_denom_fixtures() {
        let folium = predict(&prepared("x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)")).unwrap();
        assert_eq!(folium.polygon, hull(&[(3, 0), (0, 3), (1, 1)]));
        assert_eq!(folium.case_tag, Some(CaseTag::TwoA));

        let five = predict(&prepared("x=(t^6+2t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)")).unwrap();
        assert_eq!(
            five.polygon,
            hull(&[(7, 0), (0, 7), (0, 3), (3, 1), (6, 0)])
        );

        let rational = predict(&prepared(
            "x=(2t^3+t+1)/(t^2+1); y=(t^4+t^3-1)/(t^2+1)",
        ))
        .unwrap();
        assert_eq!(rational.polygon, hull(&[(4, 0), (0, 0), (0, 3), (2, 2)]));
    }

    #[test]
    fn same_denom_swap_transposes() {
        for text in [
            "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)",
            "x=(t^6+2t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)",
            "x=(2t^3+t+1)/(t^2+1); y=(t^4+t^3-1)/(t^2+1)",
        ] {
            let (xs, ys) = text.split_once("; ").unwrap();
            let swapped = format!(
                "x={}; y={}",
                ys.trim_start_matches("y="),
                xs.trim_start_matches("x=")
            );
            let a = predict(&prepared(text)).unwrap();
            let b = predict(&prepared(&swapped)).unwrap();
            assert_eq!(a.polygon.transpose(), b.polygon);
        }
    }

    #[test]
    fn diff_denom_fixtures() {
        let big = predict(
            &parse_curve(
                r#"{"class":"different_denominators",
                    "x":{"num":{"2":"1","3":"1","4":"1","7":"1"},"den":{"0":"1","3":"1"}},
                    "y":{"num":{"1":"1","4":"1","5":"1"},"den":{"0":"1","2":"1","5":"1"}},
                    "supports_only":true}"#,
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            big.polygon,
            hull(&[(0, 2), (0, 7), (1, 0), (5, 0), (5, 7)])
        );

        let hexagon = predict(&prepared(
            "x=(t^3+2t^2+t)/(t^2+3t-2); y=(t^3-t^2)/(t-2)",
        ))
        .unwrap();
        assert_eq!(
            hexagon.polygon,
            hull(&[(0, 1), (0, 3), (3, 0), (1, 3), (2, 0), (3, 2)])
        );

        let laurent = predict(
            &parse_curve(
                r#"{"class":"different_denominators",
                    "x":{"num":{"0":"1","2":"1"},"den":{"1":"1"}},
                    "y":{"num":{"0":"1"},"den":{"1":"1"}},
                    "supports_only":true}"#,
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(laurent.polygon, hull(&[(0, 0), (1, 1), (0, 2)]));

        let circle = predict_diff_denom(
            &derive_diff_denom(&parse_curve(
                r#"{"class":"different_denominators",
                    "x":{"num":{"1":"2"},"den":{"0":"1","2":"1"}},
                    "y":{"num":{"0":"1","2":"-1"},"den":{"0":"1","2":"1"}}}"#,
            )
            .unwrap())
            .unwrap(),
        )
        .unwrap();
        assert_eq!(circle.polygon, hull(&[(0, 0), (2, 0), (2, 2), (0, 2)]));

        // Degenerate Selection2 on the x side (constant term shared by P0, Q0).
        let boxy = predict(&prepared("x=3+2t; y=(5t)/(7+11t)")).unwrap();
        assert_eq!(boxy.polygon, hull(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
        // Same, but with the bottom edge stopping short of the x-degree bound:
        // y(7b^3 + 11(x-3)^3) = 5b(x-3)^2 has no x^3 term without y.
        let cut = predict(&prepared("x=3+2t; y=(5t^2)/(7+11t^3)")).unwrap();
        assert_eq!(cut.polygon, hull(&[(0, 0), (2, 0), (3, 1), (0, 1)]));
    }

    #[test]
    fn diff_denom_on_polynomial_encoding_matches_polynomial_formula() {
        for (num0, num1) in [
            (r#"{"1":"1","2":"1"}"#, r#"{"1":"2","2":"-1"}"#),
            (r#"{"1":"-1","3":"2","0":"1"}"#, r#"{"2":"-2","4":"1","0":"3"}"#),
        ] {
            let json = format!(
                r#"{{"class":"different_denominators",
                    "x":{{"num":{num0},"den":{{"0":"1"}}}},
                    "y":{{"num":{num1},"den":{{"0":"1"}}}}}}"#
            );
            let curve = parse_curve(&json).unwrap();
            let diff = predict_diff_denom(&derive_diff_denom(&curve).unwrap()).unwrap();
            let p0 = Support::new(crate::curves::support_of(&curve.num[0]));
            let p1 = Support::new(crate::curves::support_of(&curve.num[1]));
            let poly = predict_polynomial(&p0, &p1).unwrap();
            assert_eq!(diff.polygon, poly.polygon);
        }
    }

    #[test]
    fn predictions_pass_shape_check() {
        let cases: [(&str, ShapeClass); 6] = [
            ("x=2t^3-t+1; y=t^4-2t^2+3", ShapeClass::Polynomial),
            ("x=t+t^2; y=2t-t^2", ShapeClass::Polynomial),
            ("x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)", ShapeClass::SameDenominator),
            (
                "x=(t^6+2t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)",
                ShapeClass::SameDenominator,
            ),
            (
                "x=(t^7+t^4+t^3+t^2)/(t^3+1); y=(t^5+t^4+t)/(t^5+t^2+1)",
                ShapeClass::DifferentDenominators,
            ),
            (
                "x=(t^3+2t^2+t)/(t^2+3t-2); y=(t^3-t^2)/(t-2)",
                ShapeClass::DifferentDenominators,
            ),
        ];
        for (text, class) in cases {
            let p = predict(&prepared(text)).unwrap();
            let report = shape_check(&p.polygon, class);
            assert!(report.pass, "{text}: {report:?}");
            for c in &p.candidates {
                assert!(p.polygon.contains_point(c.point), "{text}: {}", c.label);
            }
        }
    }

    #[test]
    fn pentagon_contains_flipped_coefficient_hexagon() {
        let five = predict(&prepared("x=(t^6+2t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)")).unwrap();
        let hexagon = hull(&[(1, 3), (0, 4), (0, 6), (2, 5), (7, 0), (4, 1)]);
        assert!(contains(&five.polygon, &hexagon));
    }

    #[test]
    fn degree_bound_fixtures() {
        assert_eq!(
            degree_bounds(&prepared("x=(2t)/(t^2+1); y=(1-t^2)/(t^2+1)")).unwrap(),
            (2, 2, 2)
        );
        assert_eq!(
            degree_bounds(&prepared("x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)"))
                .unwrap()
                .0,
            3
        );
        let (t, dx, dy) = degree_bounds(&prepared("x=2t^3-t+1; y=t^4-2t^2+3")).unwrap();
        assert_eq!(
            degree_bound_polygon(t, dx, dy),
            hull(&[(0, 0), (4, 0), (1, 3), (0, 3)])
        );
    }

    #[test]
    fn prediction_contained_in_degree_bound_polygon() {
        for text in [
            "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)",
            "x=(t^3+2t^2+t)/(t^2+3t-2); y=(t^3-t^2)/(t-2)",
        ] {
            let c = prepared(text);
            let p = predict(&c).unwrap();
            let (t, dx, dy) = degree_bounds(&c).unwrap();
            // Different denominators may overestimate; the bound polygon need
            // not contain the prediction there, so only check same-denom.
            if c.class == CurveClass::SameDenominator {
                assert!(contains(&degree_bound_polygon(t, dx, dy), &p.polygon));
            }
        }
    }
}
