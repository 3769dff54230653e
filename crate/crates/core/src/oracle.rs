//! Ground-truth implicitization over exact rationals.
//!
//! Two independent oracles recover the implicit equation of a curve with
//! concrete coefficients: nullspace interpolation over sampled curve points,
//! and the Sylvester resultant in t expanded by fraction-free elimination.
//! Their Newton polygons are the reference every prediction is checked
//! against.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curves::{poly_of, CurveClass, ParametricCurve, SparseUni};
use crate::error::{Error, Result};
use crate::geometry::{LatticePoint, LatticePolygon};
use crate::poly::{squarefree_part, Poly1, Poly2};
use crate::{rat_int, Integer, Rational};

/// The implicit equation, content-free up to one global sign.
pub type ImplicitPolynomial = Poly2;

pub fn newton_polygon(p: &ImplicitPolynomial) -> Result<LatticePolygon> {
    p.newton_polygon()
}

// ---------------------------------------------------------------------------
// Exact linear algebra
// ---------------------------------------------------------------------------

fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Dense matrix of exact rationals; only the kernel computation is needed.
pub struct RationalMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub cols: usize,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        RationalMatrix { rows, cols }
    }

    /// Basis of the right nullspace, by Gauss-Jordan elimination. The pivot
    /// in each column is the candidate with the smallest bit size, which
    /// keeps intermediate fractions from snowballing.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.rows.clone();
        let nrows = m.len();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.cols];
        let mut rank = 0usize;
        for col in 0..self.cols {
            let pivot = (rank..nrows)
                .filter(|&r| !m[r][col].is_zero())
                .min_by_key(|&r| bit_size(&m[r][col]));
            let Some(p) = pivot else { continue };
            m.swap(rank, p);
            let inv = m[rank][col].clone().recip();
            for v in &mut m[rank] {
                *v *= &inv;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..self.cols {
                        let sub = &m[rank][c] * &f;
                        m[r][c] -= sub;
                    }
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for col in 0..self.cols {
                if let Some(r) = pivot_of_col[col] {
                    v[col] = -m[r][free].clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return rat_int(v);
        }
    }
}

fn redraw(m: &SparseUni, rng: &mut ChaCha8Rng, bound: i64) -> SparseUni {
    m.keys().map(|&e| (e, nonzero_int(rng, bound))).collect()
}

fn coprime(a: &SparseUni, b: &SparseUni) -> bool {
    poly_of(a).gcd(&poly_of(b)).degree() == Some(0)
}

/// Fresh nonzero integer coefficients in [-bound, bound] on the curve's
/// supports, rejection-sampled until the class gcd side conditions hold.
pub fn random_generic_coefficients(
    curve: &ParametricCurve,
    bound: i64,
    seed: u64,
) -> Result<ParametricCurve> {
    assert!(bound >= 1, "bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut c = curve.clone();
        c.supports_only = false;
        c.num[0] = redraw(&curve.num[0], &mut rng, bound);
        c.num[1] = redraw(&curve.num[1], &mut rng, bound);
        match c.class {
            CurveClass::Polynomial => {}
            CurveClass::SameDenominator => {
                let q = redraw(&curve.den[0], &mut rng, bound);
                c.den = [q.clone(), q];
                if !coprime(&c.num[0], &c.den[0]) || !coprime(&c.num[1], &c.den[1]) {
                    continue;
                }
            }
            CurveClass::DifferentDenominators => {
                c.den[0] = redraw(&curve.den[0], &mut rng, bound);
                c.den[1] = redraw(&curve.den[1], &mut rng, bound);
                if !coprime(&c.num[0], &c.den[0]) || !coprime(&c.num[1], &c.den[1]) {
                    continue;
                }
            }
        }
        return Ok(c);
    }
    Err(Error::ResamplingExhausted)
}

/// Exact points on the curve at distinct random rational parameter values,
/// skipping zeros of the denominators.
pub fn sample_curve_points(
    curve: &ParametricCurve,
    count: usize,
    seed: u64,
) -> Result<Vec<(Rational, Rational)>> {
    if curve.supports_only {
        return Err(Error::InternalInvariant(
            "sampling a supports-only curve".into(),
        ));
    }
    let polys: Vec<Poly1> = curve
        .num
        .iter()
        .chain(curve.den.iter())
        .map(poly_of)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(-1000i64..=1000);
        let q = rng.gen_range(1i64..=1000);
        let t = Rational::new(Integer::from(p), Integer::from(q));
        if !seen.insert(t.clone()) {
            continue;
        }
        let d0 = polys[2].eval(&t);
        let d1 = polys[3].eval(&t);
        if d0.is_zero() || d1.is_zero() {
            continue;
        }
        out.push((polys[0].eval(&t) / d0, polys[1].eval(&t) / d1));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Interpolation oracle
// ---------------------------------------------------------------------------

fn monomial_row(support: &[LatticePoint], x: &Rational, y: &Rational) -> Vec<Rational> {
    let pow = |b: &Rational, e: i64| -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= b;
        }
        acc
    };
    support.iter().map(|p| pow(x, p.x) * pow(y, p.y)).collect()
}

/// Recover the implicit equation as the kernel of the evaluation matrix over
/// `candidate_support` (which must contain the true support). The kernel must
/// be one-dimensional, and the result is re-checked on 20 held-out samples.
pub fn implicitize_interpolation(
    curve: &ParametricCurve,
    candidate_support: &[LatticePoint],
    seed: u64,
) -> Result<ImplicitPolynomial> {
    let cols = candidate_support.len();
    let samples = sample_curve_points(curve, cols + 5 + 20, seed)?;
    let rows: Vec<Vec<Rational>> = samples[..cols + 5]
        .iter()
        .map(|(x, y)| monomial_row(candidate_support, x, y))
        .collect();
    let kernel = RationalMatrix::new(rows, cols).nullspace();
    if kernel.len() != 1 {
        return Err(Error::KernelDimensionNotOne(kernel.len()));
    }
    let mut phi = Poly2::zero();
    for (p, c) in candidate_support.iter().zip(&kernel[0]) {
        phi = phi.add(&Poly2::monomial(p.x, p.y, c.clone()));
    }
    let phi = phi.primitive_integer();
    for (x, y) in &samples[cols + 5..] {
        if !phi.eval(x, y).is_zero() {
            return Err(Error::InternalInvariant(
                "interpolated polynomial fails a held-out sample".into(),
            ));
        }
    }
    Ok(phi)
}

// ---------------------------------------------------------------------------
// Sylvester oracle
// ---------------------------------------------------------------------------

/// Exact determinant of a rational matrix by Gaussian elimination, picking
/// the smallest-bit-size pivot in each column.
fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .min_by_key(|&r| bit_size(&m[r][k]));
        let Some(p) = pivot else {
            return Rational::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = &m[r][k] / &piv;
            for c in k..n {
                let sub = &m[k][c] * &f;
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Newton-form interpolation through (xs[i], ys[i]); nodes must be distinct.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly1 {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut acc = Poly1::zero();
    let mut basis = Poly1::constant(Rational::one());
    for i in 0..n {
        acc = acc.add(&basis.scale(&dd[i]));
        basis = basis.mul(&Poly1::from_terms([
            (1, Rational::one()),
            (0, -xs[i].clone()),
        ]));
    }
    acc
}

/// Determinant of the Sylvester matrix as a polynomial in x and y. The x
/// degree is at most the number of f0 rows and likewise for y, so the exact
/// determinant is recovered from numeric determinants on a rational grid.
fn sylvester_determinant(f0: &[Poly2], f1: &[Poly2]) -> Poly2 {
    let m = sylvester_matrix(f0, f1);
    let degx = f1.len() - 1;
    let degy = f0.len() - 1;
    let xs: Vec<Rational> = (0..=degx as i64).map(rat_int).collect();
    let ys: Vec<Rational> = (0..=degy as i64).map(rat_int).collect();
    let per_x: Vec<Poly1> = xs
        .iter()
        .map(|x0| {
            let vals: Vec<Rational> = ys
                .iter()
                .map(|y0| {
                    let numeric = m
                        .iter()
                        .map(|row| row.iter().map(|e| e.eval(x0, y0)).collect())
                        .collect();
                    rational_det(numeric)
                })
                .collect();
            interpolate(&ys, &vals)
        })
        .collect();
    let mut out = Poly2::zero();
    for k in 0..=degy {
        let vals: Vec<Rational> = per_x
            .iter()
            .map(|p| p.coeffs().get(k).cloned().unwrap_or_else(Rational::zero))
            .collect();
        for (e, c) in interpolate(&xs, &vals).coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Poly2::monomial(e as i64, k as i64, c.clone()));
            }
        }
    }
    out
}

/// Coefficient vector of x*Q - P (var_index 0) or y*Q - P (var_index 1) in t,
/// ascending.
fn aux_coeffs(p: &SparseUni, q: &SparseUni, var_index: usize) -> Vec<Poly2> {
    let deg = p.keys().chain(q.keys()).copied().max().unwrap() as usize;
    let mut out = vec![Poly2::zero(); deg + 1];
    let (ex, ey) = if var_index == 0 { (1, 0) } else { (0, 1) };
    for (&e, c) in q {
        out[e as usize] = out[e as usize].add(&Poly2::monomial(ex, ey, c.clone()));
    }
    for (&e, c) in p {
        out[e as usize] = out[e as usize].sub(&Poly2::monomial(0, 0, c.clone()));
    }
    out
}

fn sylvester_matrix(f0: &[Poly2], f1: &[Poly2]) -> Vec<Vec<Poly2>> {
    let d0 = f0.len() - 1;
    let d1 = f1.len() - 1;
    let n = d0 + d1;
    let mut m = vec![vec![Poly2::zero(); n]; n];
    for shift in 0..d1 {
        for (i, c) in f0.iter().rev().enumerate() {
            m[shift][shift + i] = c.clone();
        }
    }
    for shift in 0..d0 {
        for (i, c) in f1.iter().rev().enumerate() {
            m[d1 + shift][shift + i] = c.clone();
        }
    }
    m
}

/// y-content: the polynomial in x dividing every coefficient of a power of y.
fn content_in_x(p: &Poly2) -> Poly2 {
    let mut rows: std::collections::BTreeMap<i64, Poly1> = std::collections::BTreeMap::new();
    for (&(e0, e1), c) in p.terms() {
        let entry = rows.entry(e1).or_insert_with(Poly1::zero);
        *entry = entry.add(&Poly1::from_terms([(e0 as u32, c.clone())]));
    }
    let mut g = Poly1::zero();
    for p1 in rows.values() {
        g = if g.is_zero() { p1.monic() } else { g.gcd(p1) };
    }
    let mut out = Poly2::zero();
    for (e, c) in g.coeffs().iter().enumerate() {
        out = out.add(&Poly2::monomial(e as i64, 0, c.clone()));
    }
    out
}

fn vanishes_on(p: &Poly2, samples: &[(Rational, Rational)]) -> bool {
    samples.iter().all(|(x, y)| p.eval(x, y).is_zero())
}

/// Recover the implicit equation as the Sylvester resultant in t of
/// x*Q0 - P0 and y*Q1 - P1, with extraneous univariate factors removed by
/// checking which factors vanish on sampled curve points.
pub fn implicitize_sylvester(curve: &ParametricCurve, seed: u64) -> Result<ImplicitPolynomial> {
    if curve.supports_only {
        return Err(Error::InternalInvariant(
            "implicitizing a supports-only curve".into(),
        ));
    }
    let f0 = aux_coeffs(&curve.num[0], &curve.den[0], 0);
    let f1 = aux_coeffs(&curve.num[1], &curve.den[1], 1);
    let det = sylvester_determinant(&f0, &f1);
    if det.is_zero() {
        return Err(Error::ZeroResultant);
    }
    let reduced = squarefree_part(&det.strip_monomial_content())?;

    // Factor candidates: the univariate contents in x and in y, and the
    // remaining primitive core. Exactly one must vanish on the curve.
    let samples = sample_curve_points(curve, 10, seed)?;
    let cx = content_in_x(&reduced);
    let cy = content_in_x(&reduced.transpose()).transpose();
    let mut core = reduced.clone();
    let mut pieces = Vec::new();
    for c in [cx, cy] {
        if c.num_terms() > 1 {
            core = core.exact_div(&c)?;
            pieces.push(c);
        }
    }
    if core.num_terms() > 1 {
        pieces.push(core);
    }
    let vanishing: Vec<Poly2> = pieces
        .into_iter()
        .filter(|p| vanishes_on(p, &samples))
        .collect();
    if vanishing.len() == 1 {
        Ok(vanishing[0].primitive_integer())
    } else {
        Err(Error::FactorSelectionAmbiguous)
    }
}
