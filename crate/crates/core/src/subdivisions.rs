//! Combinatorial certificate engines.
//!
//! Two machines live here. For two one-dimensional supports, staircase
//! triangulations of the Cayley configuration (equivalently monotone
//! non-crossing edge families) are enumerated exhaustively and an exponent
//! point is read from each. For the three planar supports of the
//! shared-denominator system, regular tight mixed subdivisions are induced by
//! liftings and certified cell by cell; the extreme-monomial exponents are
//! read from the mixed cells.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::{SameDenomData, Selection, Support};
use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, lower_chain, upper_chain, ChainRole, LatticePoint, LatticePolygon, MonotoneChain,
};
use crate::{rat_int, Rational};

/// Default cap on the combined index-grid size for exhaustive enumeration.
pub const STAIRCASE_CAP: usize = 24;

/// One triangle of a staircase triangulation: an edge of one support plus an
/// apex point of the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StairTriangle {
    /// Support index (0 or 1) providing the base edge.
    pub base_support: usize,
    /// Base edge endpoints, as exponents.
    pub base: (i64, i64),
    /// Apex exponent in the other support.
    pub apex: i64,
    /// Normalized volume: the base exponent difference.
    pub volume: i64,
}

/// A generalized monotone path on the index grid of all points of A0 x A1.
/// Each step advances one coordinate by an arbitrary positive amount, so
/// interior support points may be skipped; the paths are in bijection with
/// the triangulations of the Cayley configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Staircase {
    pub path: Vec<(usize, usize)>,
    pub triangles: Vec<StairTriangle>,
}

fn staircase_count(n: usize, m: usize) -> u128 {
    let mut d = vec![vec![0u128; m + 1]; n + 1];
    d[0][0] = 1;
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let mut s: u128 = 0;
            for i2 in 0..i {
                s = s.saturating_add(d[i2][j]);
            }
            for j2 in 0..j {
                s = s.saturating_add(d[i][j2]);
            }
            d[i][j] = s;
        }
    }
    d[n][m]
}

fn triangles_of(path: &[(usize, usize)], a0: &[i64], a1: &[i64]) -> Vec<StairTriangle> {
    path.windows(2)
        .map(|w| {
            let ((i, j), (i2, j2)) = (w[0], w[1]);
            if j == j2 {
                StairTriangle {
                    base_support: 0,
                    base: (a0[i], a0[i2]),
                    apex: a1[j],
                    volume: a0[i2] - a0[i],
                }
            } else {
                StairTriangle {
                    base_support: 1,
                    base: (a1[j], a1[j2]),
                    apex: a0[i],
                    volume: a1[j2] - a1[j],
                }
            }
        })
        .collect()
}

/// All staircase triangulations of the Cayley configuration of A0 and A1,
/// lexicographic in the path sequence. `force` lifts the size cap.
pub fn enumerate_staircases(a0: &Support, a1: &Support, force: bool) -> Result<Vec<Staircase>> {
    let (n, m) = (a0.len() - 1, a1.len() - 1);
    if n + m > STAIRCASE_CAP && !force {
        return Err(Error::CapExceeded {
            count: staircase_count(n, m),
        });
    }
    let mut out = Vec::new();
    let mut path = vec![(0usize, 0usize)];
    fn go(
        path: &mut Vec<(usize, usize)>,
        n: usize,
        m: usize,
        a0: &[i64],
        a1: &[i64],
        out: &mut Vec<Staircase>,
    ) {
        let &(i, j) = path.last().unwrap();
        if i == n && j == m {
            out.push(Staircase {
                path: path.clone(),
                triangles: triangles_of(path, a0, a1),
            });
            return;
        }
        for i2 in i + 1..=n {
            path.push((i2, j));
            go(path, n, m, a0, a1, out);
            path.pop();
        }
        for j2 in j + 1..=m {
            path.push((i, j2));
            go(path, n, m, a0, a1, out);
            path.pop();
        }
    }
    go(&mut path, n, m, a0.exponents(), a1.exponents(), &mut out);
    Ok(out)
}

/// Exponent point of one staircase under a selection: e_0 sums the volumes of
/// triangles whose single A0 point is selected, e_1 those whose single A1
/// point is selected.
pub fn exponents_from_staircase(s: &Staircase, sel: &Selection) -> LatticePoint {
    let mut e = [0i64; 2];
    for t in &s.triangles {
        let apex_support = 1 - t.base_support;
        // The apex is the cell's single point from its support; it
        // contributes to e_0 when it lies in A0, to e_1 when in A1.
        if sel.chi(apex_support, t.apex) == 1 {
            e[apex_support] += t.volume;
        }
    }
    LatticePoint::new(e[0], e[1])
}

/// The exact set of exponent points over all staircases, computed by dynamic
/// programming over the index grid (same set as enumerating every staircase,
/// without materializing the paths).
pub fn exponent_points(sel: &Selection) -> Vec<LatticePoint> {
    let a0 = sel.exponents(0);
    let a1 = sel.exponents(1);
    let (n, m) = (a0.len(), a1.len());
    let mut reach: Vec<Vec<HashSet<(i64, i64)>>> = vec![vec![HashSet::new(); m]; n];
    reach[0][0].insert((0, 0));
    for i in 0..n {
        for j in 0..m {
            if reach[i][j].is_empty() {
                continue;
            }
            let cur: Vec<(i64, i64)> = reach[i][j].iter().copied().collect();
            for i2 in i + 1..n {
                // Right-step: base (a0[i], a0[i2]), apex a1[j].
                let d = (a0[i2] - a0[i]) * sel.chi(1, a1[j]);
                for &(e0, e1) in &cur {
                    reach[i2][j].insert((e0, e1 + d));
                }
            }
            for j2 in j + 1..m {
                // Up-step: base (a1[j], a1[j2]), apex a0[i].
                let d = (a1[j2] - a1[j]) * sel.chi(0, a0[i]);
                for &(e0, e1) in &cur {
                    reach[i][j2].insert((e0 + d, e1));
                }
            }
        }
    }
    let mut pts: Vec<LatticePoint> = reach[n - 1][m - 1]
        .iter()
        .map(|&(x, y)| LatticePoint::new(x, y))
        .collect();
    pts.sort_unstable();
    pts
}

/// Upper or lower hull (direction (1,1)) of the exponent points of all
/// staircases under the selection, with the degenerate short-circuits when a
/// selection has no selected point on one side.
pub fn hull_of_exponents(sel: &Selection, role: ChainRole) -> MonotoneChain {
    let mk = |pts: Vec<LatticePoint>| match role {
        ChainRole::UpperHull => upper_chain(pts),
        ChainRole::LowerHull => lower_chain(pts),
    };
    if role == ChainRole::LowerHull {
        let origin = LatticePoint::new(0, 0);
        match (sel.has_selected(0), sel.has_selected(1)) {
            (false, false) => {
                return MonotoneChain {
                    points: vec![origin],
                    role,
                };
            }
            (false, true) => {
                // e_0 is identically 0; e_1 sweeps [0, a_{0n} - a_{00}].
                let reach = sel.max(0) - sel.min(0);
                return mk(vec![origin, LatticePoint::new(0, reach)]);
            }
            (true, false) => {
                let reach = sel.max(1) - sel.min(1);
                return mk(vec![origin, LatticePoint::new(reach, 0)]);
            }
            _ => {}
        }
    }
    mk(exponent_points(sel))
}

// ---------------------------------------------------------------------------
// Lifting-induced mixed subdivisions of the three planar supports
// ---------------------------------------------------------------------------

/// Planar supports of the auxiliary system: A_i = {(0,1)} u {(b,0): b in B_i},
/// the r-point first.
pub fn planar_supports(data: &SameDenomData) -> [Vec<LatticePoint>; 3] {
    let mk = |s: &Support| {
        let mut v = vec![LatticePoint::new(0, 1)];
        v.extend(s.exponents().iter().map(|&b| LatticePoint::new(b, 0)));
        v
    };
    [mk(&data.b[0]), mk(&data.b[1]), mk(&data.b[2])]
}

/// Heights over the three planar supports, parallel to `planar_supports`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub values: [Vec<Rational>; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CellKind {
    /// Mixed, both edge summands slanted (through an r-point).
    MixedTypeI,
    /// Mixed, one edge summand horizontal.
    MixedTypeII,
    Unmixed,
}

/// A cell of the induced subdivision, recorded by its face summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub kind: CellKind,
    /// For mixed cells, the support contributing the vertex summand.
    pub vertex_support: Option<usize>,
    pub faces: [Vec<LatticePoint>; 3],
    /// Twice the Euclidean cell area (so it stays integral).
    pub volume_x2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedSubdivision {
    pub cells: Vec<Cell>,
    pub u: i64,
}

fn dot(g: &(Rational, Rational), p: LatticePoint) -> Rational {
    &g.0 * rat_int(p.x) + &g.1 * rat_int(p.y)
}

fn cross2(a: LatticePoint, b: LatticePoint) -> i64 {
    a.x * b.y - a.y * b.x
}

fn sub(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    LatticePoint::new(a.x - b.x, a.y - b.y)
}

/// Indices minimizing the lifted value under direction g, per support.
fn argmins(
    pts: &[Vec<LatticePoint>; 3],
    w: &Lifting,
    g: &(Rational, Rational),
) -> [Vec<usize>; 3] {
    let mut out: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for l in 0..3 {
        let vals: Vec<Rational> = pts[l]
            .iter()
            .zip(&w.values[l])
            .map(|(&p, h)| dot(g, p) + h)
            .collect();
        let m = vals.iter().min().unwrap().clone();
        out[l] = (0..vals.len()).filter(|&t| vals[t] == m).collect();
    }
    out
}

fn is_slanted(e: &[LatticePoint]) -> bool {
    e.iter().any(|p| p.y == 1)
}

/// The regular mixed subdivision induced by a lifting, by candidate-cell
/// certification. Mixed candidates are a vertex plus two edges; for each, the
/// supporting direction is solved from the two lifted-edge equalities and
/// every lifted point is checked against the supporting plane. Unmixed cells
/// are triangle faces within one support. A tie off the chosen faces, or a
/// failure of the cells to fill the Minkowski sum, rejects the lifting.
pub fn subdivision_from_lifting(data: &SameDenomData, w: &Lifting) -> Result<MixedSubdivision> {
    let pts = planar_supports(data);
    let mut cells: Vec<Cell> = Vec::new();

    let solve = |d1: LatticePoint, r1: Rational, d2: LatticePoint, r2: Rational| -> Option<(Rational, Rational)> {
        let det = cross2(d1, d2);
        if det == 0 {
            return None;
        }
        let det = rat_int(det);
        let g0 = (&r1 * rat_int(d2.y) - &r2 * rat_int(d1.y)) / &det;
        let g1 = (&r2 * rat_int(d1.x) - &r1 * rat_int(d2.x)) / &det;
        Some((g0, g1))
    };

    // Mixed candidates: vertex from A_i, one edge from each other support.
    for i in 0..3 {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for (pj, qj) in pairs(pts[j].len()) {
            for (pk, qk) in pairs(pts[k].len()) {
                let d1 = sub(pts[j][pj], pts[j][qj]);
                let r1 = &w.values[j][qj] - &w.values[j][pj];
                let d2 = sub(pts[k][pk], pts[k][qk]);
                let r2 = &w.values[k][qk] - &w.values[k][pk];
                let Some(g) = solve(d1, r1, d2, r2) else { continue };
                let mins = argmins(&pts, w, &g);
                if !(mins[j].contains(&pj) && mins[j].contains(&qj) && mins[k].contains(&pk) && mins[k].contains(&qk)) {
                    continue;
                }
                if mins[i].len() != 1 || mins[j].len() != 2 || mins[k].len() != 2 {
                    return Err(Error::NonGenericLifting);
                }
                let ej = [pts[j][pj], pts[j][qj]];
                let ek = [pts[k][pk], pts[k][qk]];
                let kind = if is_slanted(&ej) && is_slanted(&ek) {
                    CellKind::MixedTypeI
                } else {
                    CellKind::MixedTypeII
                };
                let mut faces: [Vec<LatticePoint>; 3] = Default::default();
                faces[i] = vec![pts[i][mins[i][0]]];
                faces[j] = ej.to_vec();
                faces[k] = ek.to_vec();
                cells.push(Cell {
                    kind,
                    vertex_support: Some(i),
                    faces,
                    volume_x2: 2 * cross2(sub(ej[1], ej[0]), sub(ek[1], ek[0])).abs(),
                });
            }
        }
    }

    // Unmixed candidates: a triangle face within one support, vertices in the
    // other two. The non-degenerate triangles of A_i are r-point + two
    // horizontal points.
    for i in 0..3 {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for s in 1..pts[i].len() {
            for t in s + 1..pts[i].len() {
                let (a, b, c) = (pts[i][0], pts[i][s], pts[i][t]);
                let d1 = sub(b, a);
                let r1 = &w.values[i][0] - &w.values[i][s];
                let d2 = sub(c, a);
                let r2 = &w.values[i][0] - &w.values[i][t];
                let Some(g) = solve(d1, r1, d2, r2) else { continue };
                let mins = argmins(&pts, w, &g);
                if !(mins[i].contains(&0) && mins[i].contains(&s) && mins[i].contains(&t)) {
                    continue;
                }
                if mins[i].len() != 3 || mins[j].len() != 1 || mins[k].len() != 1 {
                    return Err(Error::NonGenericLifting);
                }
                let mut faces: [Vec<LatticePoint>; 3] = Default::default();
                faces[i] = vec![a, b, c];
                faces[j] = vec![pts[j][mins[j][0]]];
                faces[k] = vec![pts[k][mins[k][0]]];
                cells.push(Cell {
                    kind: CellKind::Unmixed,
                    vertex_support: None,
                    faces,
                    volume_x2: cross2(sub(b, a), sub(c, a)).abs(),
                });
            }
        }
    }

    // Partition check: the certified cells must exactly fill C0 + C1 + C2.
    let mut sums = Vec::new();
    for &p0 in &pts[0] {
        for &p1 in &pts[1] {
            for &p2 in &pts[2] {
                sums.push(LatticePoint::new(p0.x + p1.x + p2.x, p0.y + p1.y + p2.y));
            }
        }
    }
    let total: i64 = cells.iter().map(|c| c.volume_x2).sum();
    if total != polygon_area_x2(&convex_hull(sums)) {
        return Err(Error::NonGenericLifting);
    }
    Ok(MixedSubdivision {
        cells,
        u: data.u,
    })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

fn polygon_area_x2(p: &LatticePolygon) -> i64 {
    let v = p.vertices();
    if v.len() < 3 {
        return 0;
    }
    let mut s: i64 = 0;
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        s += a.x * b.y - a.y * b.x;
    }
    s.abs()
}

/// Exponents of the lifting's extreme monomial: e_i sums the volumes of the
/// i-mixed cells whose vertex summand is the r-point a_{i0} = (0,1).
pub fn exponent_from_subdivision(s: &MixedSubdivision) -> Result<(i64, i64, i64)> {
    let mut e = [0i64; 3];
    for c in &s.cells {
        if let Some(i) = c.vertex_support {
            if c.faces[i] == [LatticePoint::new(0, 1)] {
                e[i] += c.volume_x2 / 2;
            }
        }
    }
    if e[0] + e[1] + e[2] != s.u {
        return Err(Error::DegreeInvariantViolated);
    }
    Ok((e[0], e[1], e[2]))
}

/// One sampled lifting together with its certificate.
#[derive(Debug, Clone)]
pub struct LiftingRun {
    pub lifting: Lifting,
    pub subdivision: MixedSubdivision,
    pub exponents: (i64, i64, i64),
}

fn perturbed(w: &Lifting, attempt: u32) -> Lifting {
    // Nudge each height by a distinct multiple of eps to break ties.
    let eps = Rational::new(attempt.into(), 1_000_000.into());
    let mut out = w.clone();
    let mut idx: i64 = 1;
    for side in &mut out.values {
        for v in side.iter_mut() {
            *v += rat_int(idx) * &eps;
            idx += 1;
        }
    }
    out
}

fn run_lifting(data: &SameDenomData, w: &Lifting) -> Option<LiftingRun> {
    let mut cur = w.clone();
    for attempt in 0..5u32 {
        if attempt > 0 {
            cur = perturbed(w, attempt);
        }
        match subdivision_from_lifting(data, &cur) {
            Ok(sub) => {
                let exponents = exponent_from_subdivision(&sub).ok()?;
                return Some(LiftingRun {
                    lifting: cur,
                    subdivision: sub,
                    exponents,
                });
            }
            Err(Error::NonGenericLifting) => continue,
            Err(_) => return None,
        }
    }
    None
}

/// Structured liftings: linear on each B_i with slopes and r-offsets from a
/// small grid. A common affine shift never changes the subdivision, so the
/// third support's parameters are pinned to 0.
fn structured_liftings(data: &SameDenomData) -> Vec<Lifting> {
    const GRID: std::ops::RangeInclusive<i64> = -3..=3;
    let mut out = Vec::new();
    for s0 in GRID {
        for r0 in GRID {
            for s1 in GRID {
                for r1 in GRID {
                    let mk = |s: i64, r: i64, b: &Support| {
                        let mut v = vec![rat_int(r)];
                        v.extend(b.exponents().iter().map(|&e| rat_int(s * e)));
                        v
                    };
                    out.push(Lifting {
                        values: [
                            mk(s0, r0, &data.b[0]),
                            mk(s1, r1, &data.b[1]),
                            mk(0, 0, &data.b[2]),
                        ],
                    });
                }
            }
        }
    }
    out
}

fn random_lifting(data: &SameDenomData, rng: &mut ChaCha8Rng) -> Lifting {
    let mk = |n: usize, rng: &mut ChaCha8Rng| {
        (0..n)
            .map(|_| {
                let mut v: i64 = 0;
                while v == 0 {
                    v = rng.gen_range(-10_000..=10_000);
                }
                rat_int(v)
            })
            .collect()
    };
    Lifting {
        values: [
            mk(data.b[0].len() + 1, rng),
            mk(data.b[1].len() + 1, rng),
            mk(data.b[2].len() + 1, rng),
        ],
    }
}

/// All sampled lifting certificates: the structured family plus `trials`
/// random liftings.
pub fn sample_lifting_runs(data: &SameDenomData, trials: u32, seed: u64) -> Vec<LiftingRun> {
    let mut out = Vec::new();
    for w in structured_liftings(data) {
        if let Some(run) = run_lifting(data, &w) {
            out.push(run);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let w = random_lifting(data, &mut rng);
        if let Some(run) = run_lifting(data, &w) {
            out.push(run);
        }
    }
    out
}

/// Hull of the projected exponent points over all sampled liftings: an inner
/// approximation of the projected resultant polytope.
pub fn sample_lifting_hull(data: &SameDenomData, trials: u32, seed: u64) -> LatticePolygon {
    let pts: Vec<LatticePoint> = sample_lifting_runs(data, trials, seed)
        .into_iter()
        .map(|r| LatticePoint::new(r.exponents.0, r.exponents.1))
        .collect();
    assert!(!pts.is_empty(), "no lifting produced a tight subdivision");
    convex_hull(pts)
}
