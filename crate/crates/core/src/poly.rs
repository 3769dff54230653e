//! Exact polynomial arithmetic over the rationals.
//!
//! `Poly1` is a dense univariate polynomial, `Poly2` a sparse bivariate one.
//! Both exist to serve the implicitization oracles, so the operation set is
//! deliberately small: ring arithmetic, evaluation, derivatives, exact
//! division, gcd, content extraction and squarefree parts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, LatticePoint, LatticePolygon};
use crate::{Integer, Rational};

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense univariate polynomial over Q, highest kept coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly1 {
    coeffs: Vec<Rational>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Poly1::new(vec![c])
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(terms: I) -> Self {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in terms {
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] += c;
        }
        Poly1::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly1::new(out)
    }

    pub fn sub(&self, rhs: &Poly1) -> Poly1 {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &Poly1) -> (Poly1, Poly1) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        if r.len() <= dd {
            return (Poly1::zero(), Poly1::new(r));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let c = r.last().unwrap() / &lead;
            if c.is_zero() {
                r.pop();
                continue;
            }
            let k = r.len() - 1 - dd;
            q[k] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let v = dc * &c;
                r[k + i] -= v;
            }
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly1::new(q), Poly1::new(r))
    }

    pub fn monic(&self) -> Poly1 {
        if self.is_zero() {
            return Poly1::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, rhs: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn exponents(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i as i64)
            .collect()
    }
}

/// Sparse bivariate polynomial over Q with nonnegative integer exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(e0: i64, e1: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((e0, e1), c);
        }
        Poly2 { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Poly2::monomial(0, 0, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e0: i64, e1: i64) -> Rational {
        self.terms
            .get(&(e0, e1))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, key: (i64, i64), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a0, a1), ca) in &self.terms {
            for (&(b0, b1), cb) in &rhs.terms {
                out.insert((a0 + b0, a1 + b1), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        // Supports are tiny; plain power evaluation is fine.
        let mut acc = Rational::zero();
        for (&(e0, e1), c) in &self.terms {
            acc += c * pow_rat(x, e0) * pow_rat(y, e1);
        }
        acc
    }

    pub fn deriv_x(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(e0, e1), c) in &self.terms {
            if e0 > 0 {
                out.insert((e0 - 1, e1), c * rat(e0));
            }
        }
        out
    }

    pub fn deriv_y(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(e0, e1), c) in &self.terms {
            if e1 > 0 {
                out.insert((e0, e1 - 1), c * rat(e1));
            }
        }
        out
    }

    pub fn transpose(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect(),
        }
    }

    /// Leading term in lex order (x before y).
    fn leading(&self) -> Option<((i64, i64), Rational)> {
        self.terms.iter().next_back().map(|(k, v)| (*k, v.clone()))
    }

    /// Exact division; errors if the divisor does not divide self.
    pub fn exact_div(&self, d: &Poly2) -> Result<Poly2> {
        if d.is_zero() {
            return Err(Error::InternalInvariant("division by zero polynomial".into()));
        }
        let mut r = self.clone();
        let mut q = Poly2::zero();
        let (dk, dc) = d.leading().unwrap();
        while let Some((rk, rc)) = r.leading() {
            let (e0, e1) = (rk.0 - dk.0, rk.1 - dk.1);
            if e0 < 0 || e1 < 0 {
                return Err(Error::InternalInvariant("inexact polynomial division".into()));
            }
            let m = Poly2::monomial(e0, e1, rc / &dc);
            q = q.add(&m);
            r = r.sub(&m.mul(d));
        }
        Ok(q)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().map(|&(a, b)| LatticePoint::new(a, b)).collect()
    }

    pub fn newton_polygon(&self) -> Result<LatticePolygon> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(convex_hull(self.support()))
    }

    /// Divide out x^a y^b with a, b maximal.
    pub fn strip_monomial_content(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let a = self.terms.keys().map(|k| k.0).min().unwrap();
        let b = self.terms.keys().map(|k| k.1).min().unwrap();
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(e0, e1), c)| ((e0 - a, e1 - b), c.clone()))
                .collect(),
        }
    }

    /// Normalize to coprime integer coefficients with positive leading sign.
    pub fn primitive_integer(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let mut den = Integer::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let scaled: Vec<((i64, i64), Integer)> = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c.numer() * &den / c.denom()))
            .collect();
        let mut g = Integer::zero();
        for (_, n) in &scaled {
            g = g.gcd(n);
        }
        let lead_neg = scaled.last().map_or(false, |(_, n)| n.is_negative());
        if lead_neg {
            g = -g;
        }
        Poly2 {
            terms: scaled
                .into_iter()
                .map(|(k, n)| (k, Rational::from_integer(n / &g)))
                .collect(),
        }
    }

    /// Coefficients as a polynomial in y over Q[x], index = power of y.
    fn y_coeffs(&self) -> Vec<Poly1> {
        let dy = self.terms.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let mut out = vec![Poly1::zero(); dy + 1];
        for (&(e0, e1), c) in &self.terms {
            out[e1 as usize] = out[e1 as usize].add(&Poly1::from_terms([(e0 as u32, c.clone())]));
        }
        out
    }

    fn from_y_coeffs(coeffs: &[Poly1]) -> Poly2 {
        let mut out = Poly2::zero();
        for (e1, p) in coeffs.iter().enumerate() {
            for (e0, c) in p.coeffs().iter().enumerate() {
                out.insert((e0 as i64, e1 as i64), c.clone());
            }
        }
        out
    }
}

fn pow_rat(x: &Rational, e: i64) -> Rational {
    assert!(e >= 0);
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn trim(v: &mut Vec<Poly1>) {
    while v.last().map_or(false, |p| p.is_zero()) {
        v.pop();
    }
}

/// y-content: gcd in Q[x] of the coefficients of the powers of y.
fn content_y(coeffs: &[Poly1]) -> Poly1 {
    let mut g = Poly1::zero();
    for p in coeffs {
        if !p.is_zero() {
            if g.is_zero() {
                g = p.monic();
            } else {
                g = g.gcd(p);
            }
        }
    }
    g
}

/// Pseudo-remainder of a by b, both as y-coefficient vectors over Q[x].
fn pseudo_rem_y(a: &[Poly1], b: &[Poly1]) -> Vec<Poly1> {
    let mut r: Vec<Poly1> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // lb * r - lr * y^(dr-db) * b kills the leading term.
        for p in r.iter_mut() {
            *p = p.mul(&lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let sub = bc.mul(&lr);
            r[dr - db + i] = r[dr - db + i].sub(&sub);
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Gcd of two bivariate polynomials, treated as univariate in y over Q[x],
/// via the primitive polynomial remainder sequence. Result is primitive in y
/// times the gcd of the y-contents.
pub fn gcd_bivariate_y(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (mut ac, mut bc) = (a.y_coeffs(), b.y_coeffs());
    trim(&mut ac);
    trim(&mut bc);
    let cont = content_y(&ac).gcd(&content_y(&bc));
    let strip = |v: &[Poly1]| -> Vec<Poly1> {
        let c = content_y(v);
        v.iter().map(|p| p.divrem(&c).0).collect()
    };
    let mut u = strip(&ac);
    let mut v = strip(&bc);
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_empty() {
        let r = pseudo_rem_y(&u, &v);
        u = v;
        v = if r.is_empty() { r } else { strip(&r) };
    }
    let g = Poly2::from_y_coeffs(&u);
    let c = Poly2::from_y_coeffs(&[cont]);
    g.mul(&c).primitive_integer()
}

fn squarefree_uni(p: &Poly1) -> Poly1 {
    if p.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    p.divrem(&p.gcd(&p.derivative())).0
}

/// Substitute a rational for x, leaving a univariate polynomial in y.
fn eval_x_at(p: &Poly2, x0: &Rational) -> Poly1 {
    let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
    for (&(e0, e1), c) in p.terms() {
        let mut v = c.clone();
        for _ in 0..e0 {
            v *= x0;
        }
        *acc.entry(e1 as u32).or_insert_with(Rational::zero) += v;
    }
    Poly1::from_terms(acc)
}

/// Certifies that a and b share no common factor of positive y-degree. A
/// hypothetical common factor h has x-degree at most min(deg_x a, deg_x b)
/// and stays nonconstant in y at all but deg_x(h) values of x, so finding
/// deg_x + 1 points with constant univariate gcd rules it out. Points with a
/// nonconstant gcd may be flukes and are skipped, up to a budget.
fn certainly_coprime_in_y(a: &Poly2, b: &Poly2) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let deg_x = |p: &Poly2| p.terms().map(|(&(e0, _), _)| e0).max().unwrap();
    let dx = deg_x(a).min(deg_x(b));
    let mut constant = 0;
    for i in 0..=4 * dx + 8 {
        let ga = eval_x_at(a, &crate::rat_int(i));
        let gb = eval_x_at(b, &crate::rat_int(i));
        if ga.is_zero() || gb.is_zero() {
            continue;
        }
        if ga.gcd(&gb).degree() == Some(0) {
            constant += 1;
            if constant > dx {
                return true;
            }
        }
    }
    false
}

/// Squarefree part: repeated factors are removed from the univariate
/// contents in x and y and from the content-free core separately. The core
/// is usually already squarefree, which a cheap evaluation certificate
/// detects; only when that fails does the full remainder-sequence gcd run.
pub fn squarefree_part(p: &Poly2) -> Result<Poly2> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = p.primitive_integer();
    let cx = content_y(&q.y_coeffs());
    let q1 = q.exact_div(&Poly2::from_y_coeffs(&[cx.clone()]))?;
    let cy = content_y(&q1.transpose().y_coeffs());
    let core = q1.exact_div(&Poly2::from_y_coeffs(&[cy.clone()]).transpose())?;
    let core_sf = if core.num_terms() == 1 || certainly_coprime_in_y(&core, &core.deriv_y()) {
        core
    } else {
        let g = gcd_bivariate_y(&gcd_bivariate_y(&core, &core.deriv_x()), &core.deriv_y());
        core.exact_div(&g)?
    };
    let out = Poly2::from_y_coeffs(&[squarefree_uni(&cx)])
        .mul(&Poly2::from_y_coeffs(&[squarefree_uni(&cy)]).transpose())
        .mul(&core_sf);
    Ok(out.primitive_integer())
}

/// Sparse multivariate polynomial with integer coefficients, exponent
/// vectors of fixed length. Only what the symbolic determinant needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub terms: BTreeMap<Vec<u16>, Integer>,
    pub nvars: usize,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Integer::one());
        MPoly { terms, nvars }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(Integer::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let k: Vec<u16> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                let e = out.terms.entry(k.clone()).or_insert_with(Integer::zero);
                *e += va * vb;
                if e.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }
}
