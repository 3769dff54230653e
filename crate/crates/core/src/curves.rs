//! Parametric curve inputs: parsing, normalization, classification, and the
//! support/selection data consumed by the predictor and the combinatorial
//! engines.
//!
//! A curve is a pair x = P0/Q0, y = P1/Q1 of univariate rational functions
//! in the parameter t, in one of three classes: polynomial (no denominators),
//! shared denominator Q, or independent denominators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly1;
use crate::{Integer, Rational};

/// Sparse univariate polynomial, exponent -> nonzero coefficient.
/// Exponents may be negative before normalization.
pub type SparseUni = BTreeMap<i64, Rational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveClass {
    Polynomial,
    SameDenominator,
    DifferentDenominators,
}

/// Strictly increasing exponent list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support(Vec<i64>);

impl Support {
    pub fn new(mut exps: Vec<i64>) -> Self {
        exps.sort_unstable();
        exps.dedup();
        assert!(!exps.is_empty(), "empty support");
        Support(exps)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn left(&self) -> i64 {
        self.0[0]
    }

    pub fn right(&self) -> i64 {
        *self.0.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: i64) -> bool {
        self.0.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricCurve {
    pub class: CurveClass,
    /// Numerators P0 (for x) and P1 (for y).
    pub num: [SparseUni; 2],
    /// Denominators; {0: 1} for the polynomial class.
    pub den: [SparseUni; 2],
    /// Coefficients are placeholders; only supports carry meaning.
    pub supports_only: bool,
}

fn one_map() -> SparseUni {
    let mut m = SparseUni::new();
    m.insert(0, Rational::one());
    m
}

fn is_constant(m: &SparseUni) -> bool {
    m.len() == 1 && m.contains_key(&0)
}

pub(crate) fn support_of(m: &SparseUni) -> Vec<i64> {
    m.keys().copied().collect()
}

pub(crate) fn poly_of(m: &SparseUni) -> Poly1 {
    Poly1::from_terms(m.iter().map(|(&e, c)| {
        assert!(e >= 0, "negative exponent reached polynomial conversion");
        (e as u32, c.clone())
    }))
}

fn map_of(p: &Poly1) -> SparseUni {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as i64, c.clone()))
        .collect()
}

impl ParametricCurve {
    pub fn validate(&self) -> Result<()> {
        for side in 0..2 {
            if self.num[side].is_empty() || self.den[side].is_empty() {
                return Err(Error::ZeroPolynomial);
            }
        }
        if self.class == CurveClass::Polynomial && (!is_constant(&self.den[0]) || !is_constant(&self.den[1])) {
            return Err(Error::Syntax("polynomial class with a denominator".into()));
        }
        if self.class == CurveClass::SameDenominator && self.den[0] != self.den[1] {
            return Err(Error::Syntax("same-denominator class with differing denominators".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(Integer),
    Letter(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' => {
                it.next();
            }
            '0'..='9' => {
                let mut lit = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        lit.push(d);
                        it.next();
                    } else if d == '.' {
                        return Err(Error::NonRationalCoefficient(format!("{lit}.")));
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(lit.parse::<BigInt>().map_err(|_| Error::Syntax(lit.clone()))?));
            }
            'a'..='z' => {
                out.push(Tok::Letter(c));
                it.next();
            }
            '+' => {
                out.push(Tok::Plus);
                it.next();
            }
            '-' => {
                out.push(Tok::Minus);
                it.next();
            }
            '*' => {
                out.push(Tok::Star);
                it.next();
            }
            '^' => {
                out.push(Tok::Caret);
                it.next();
            }
            '/' => {
                out.push(Tok::Slash);
                it.next();
            }
            '(' => {
                out.push(Tok::LParen);
                it.next();
            }
            ')' => {
                out.push(Tok::RParen);
                it.next();
            }
            _ => return Err(Error::Syntax(format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    symbolic: bool,
}

fn mul_maps(a: &SparseUni, b: &SparseUni) -> SparseUni {
    let mut out = SparseUni::new();
    for (&ea, ca) in a {
        for (&eb, cb) in b {
            let e = out.entry(ea + eb).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_maps(a: &mut SparseUni, b: SparseUni, sign: i64) {
    let s = Rational::from_integer(BigInt::from(sign));
    for (e, c) in b {
        let entry = a.entry(e).or_insert_with(Rational::zero);
        *entry += c * &s;
        if entry.is_zero() {
            a.remove(&e);
        }
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Whole side: numerator, optionally "/ denominator". The denominator's
    /// token slice is kept so class inference can compare the literal
    /// denominators, not just their parsed values.
    fn rational(&mut self) -> Result<(SparseUni, Option<(SparseUni, Vec<Tok>)>)> {
        let num = self.sum()?;
        let den = if self.eat(&Tok::Slash) {
            let start = self.pos;
            let d = self.sum()?;
            Some((d, self.toks[start..self.pos].to_vec()))
        } else {
            None
        };
        if self.pos != self.toks.len() {
            return Err(Error::Syntax("trailing tokens in expression".into()));
        }
        Ok((num, den))
    }

    fn sum(&mut self) -> Result<SparseUni> {
        let mut acc = SparseUni::new();
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        loop {
            let t = self.term()?;
            add_maps(&mut acc, t, sign);
            match self.peek() {
                Some(Tok::Plus) => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(Tok::Minus) => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparseUni> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let a = self.atom()?;
                    acc = mul_maps(&acc, &a);
                }
                Some(Tok::Int(_)) | Some(Tok::Letter(_)) | Some(Tok::LParen) => {
                    let a = self.atom()?;
                    acc = mul_maps(&acc, &a);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.next() {
            Some(Tok::Int(n)) => {
                let v: i64 = n
                    .try_into()
                    .map_err(|_| Error::Syntax("exponent too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Syntax("expected integer exponent after '^'".into())),
        }
    }

    fn atom(&mut self) -> Result<SparseUni> {
        match self.next() {
            Some(Tok::Int(n)) => {
                // Int '/' Int is a fraction literal; any other '/' is the
                // numerator/denominator separator.
                let mut c = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    if let Some(Tok::Int(d)) = self.toks.get(self.pos + 1).cloned() {
                        if d.is_zero() {
                            return Err(Error::NonRationalCoefficient("division by zero".into()));
                        }
                        self.pos += 2;
                        c /= Rational::from_integer(d);
                    }
                }
                let mut m = SparseUni::new();
                m.insert(0, c);
                Ok(m)
            }
            Some(Tok::Letter('t')) => {
                let e = if self.eat(&Tok::Caret) { self.int_exponent()? } else { 1 };
                let mut m = SparseUni::new();
                m.insert(e, Rational::one());
                Ok(m)
            }
            Some(Tok::Letter(_)) => {
                // Symbolic coefficient: value irrelevant, supports-only mode.
                self.symbolic = true;
                Ok(one_map())
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::Syntax("expected ')'".into()));
                }
                if self.eat(&Tok::Caret) {
                    let e = self.int_exponent()?;
                    if e < 0 {
                        return Err(Error::Syntax("negative power of a sum".into()));
                    }
                    let mut acc = one_map();
                    for _ in 0..e {
                        acc = mul_maps(&acc, &inner);
                    }
                    return Ok(acc);
                }
                Ok(inner)
            }
            other => Err(Error::Syntax(format!("unexpected token {other:?}"))),
        }
    }
}

fn split_sides(text: &str) -> Result<(String, String)> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' | ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur);
    if parts.len() != 2 {
        return Err(Error::Syntax("expected exactly two assignments".into()));
    }
    let mut x = None;
    let mut y = None;
    for p in parts {
        let p = p.trim();
        let (lhs, rhs) = p
            .split_once('=')
            .ok_or_else(|| Error::Syntax("missing '=' in assignment".into()))?;
        match lhs.trim() {
            "x" => x = Some(rhs.to_string()),
            "y" => y = Some(rhs.to_string()),
            other => return Err(Error::Syntax(format!("unknown variable '{other}'"))),
        }
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Error::Syntax("need both x= and y= assignments".into())),
    }
}

fn parse_shorthand(text: &str) -> Result<ParametricCurve> {
    let (xs, ys) = split_sides(text)?;
    let mut symbolic = false;
    let mut parse_side = |s: &str| -> Result<(SparseUni, Option<(SparseUni, Vec<Tok>)>)> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
            symbolic: false,
        };
        let r = p.rational()?;
        symbolic |= p.symbolic;
        if r.0.is_empty() || r.1.as_ref().map_or(false, |(d, _)| d.is_empty()) {
            return Err(Error::ZeroPolynomial);
        }
        Ok(r)
    };
    let (p0, q0) = parse_side(&xs)?;
    let (p1, q1) = parse_side(&ys)?;
    let class = match (&q0, &q1) {
        (None, None) => CurveClass::Polynomial,
        (Some((_, ta)), Some((_, tb))) if ta == tb => CurveClass::SameDenominator,
        _ => CurveClass::DifferentDenominators,
    };
    let curve = ParametricCurve {
        class,
        num: [p0, p1],
        den: [
            q0.map(|(d, _)| d).unwrap_or_else(one_map),
            q1.map(|(d, _)| d).unwrap_or_else(one_map),
        ],
        supports_only: symbolic,
    };
    curve.validate()?;
    Ok(curve)
}

fn parse_rational_literal(s: &str) -> Result<Rational> {
    let bad = || Error::NonRationalCoefficient(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn parse_json_poly(v: &serde_json::Value) -> Result<SparseUni> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Syntax("polynomial must be an object of exponent: coefficient".into()))?;
    let mut m = SparseUni::new();
    for (k, val) in obj {
        let e: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::Syntax(format!("bad exponent key '{k}'")))?;
        let c = match val {
            serde_json::Value::String(s) => parse_rational_literal(s)?,
            serde_json::Value::Number(n) if n.is_i64() => {
                Rational::from_integer(BigInt::from(n.as_i64().unwrap()))
            }
            _ => return Err(Error::NonRationalCoefficient(val.to_string())),
        };
        if !c.is_zero() {
            m.insert(e, c);
        }
    }
    if m.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(m)
}

fn parse_json(text: &str) -> Result<ParametricCurve> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Syntax(format!("bad JSON: {e}")))?;
    let class = match v.get("class").and_then(|c| c.as_str()) {
        Some("polynomial") => CurveClass::Polynomial,
        Some("same_denominator") => CurveClass::SameDenominator,
        Some("different_denominators") => CurveClass::DifferentDenominators,
        other => return Err(Error::Syntax(format!("bad class {other:?}"))),
    };
    let mut num: [SparseUni; 2] = [SparseUni::new(), SparseUni::new()];
    let mut den: [SparseUni; 2] = [one_map(), one_map()];
    for (side, key) in ["x", "y"].iter().enumerate() {
        let f = v
            .get(*key)
            .ok_or_else(|| Error::Syntax(format!("missing \"{key}\"")))?;
        num[side] = parse_json_poly(
            f.get("num")
                .ok_or_else(|| Error::Syntax(format!("missing \"{key}.num\"")))?,
        )?;
        if let Some(d) = f.get("den") {
            den[side] = parse_json_poly(d)?;
        }
    }
    let curve = ParametricCurve {
        class,
        num,
        den,
        supports_only: v.get("supports_only").and_then(|b| b.as_bool()).unwrap_or(false),
    };
    curve.validate()?;
    Ok(curve)
}

/// Parse a curve from JSON or from shorthand like
/// "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)".
pub fn parse_curve(text: &str) -> Result<ParametricCurve> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_shorthand(text)
    }
}

/// Serialize back into the JSON document schema accepted by `parse_curve`.
pub fn curve_to_json(curve: &ParametricCurve) -> serde_json::Value {
    let rational = |c: &Rational| {
        if c.denom().is_one() {
            c.numer().to_string()
        } else {
            format!("{}/{}", c.numer(), c.denom())
        }
    };
    let poly = |m: &SparseUni| {
        serde_json::Value::Object(
            m.iter()
                .map(|(e, c)| (e.to_string(), serde_json::Value::String(rational(c))))
                .collect(),
        )
    };
    serde_json::json!({
        "class": curve.class,
        "x": {"num": poly(&curve.num[0]), "den": poly(&curve.den[0])},
        "y": {"num": poly(&curve.num[1]), "den": poly(&curve.den[1])},
        "supports_only": curve.supports_only,
    })
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

fn shift_map(m: &SparseUni, d: i64) -> SparseUni {
    m.iter().map(|(&e, c)| (e + d, c.clone())).collect()
}

fn divide_out(m: &SparseUni, g: &Poly1) -> Result<SparseUni> {
    let (q, r) = poly_of(m).divrem(g);
    if !r.is_zero() {
        return Err(Error::InternalInvariant("inexact gcd division".into()));
    }
    let out = map_of(&q);
    if out.is_empty() {
        return Err(Error::EmptyAfterReduction);
    }
    Ok(out)
}

/// Shift Laurent supports to base 0, divide out common polynomial factors
/// (rerouting the class when that breaks a shared denominator), reject
/// parameterizations that factor through t^a, and fold constant
/// denominators back into the polynomial class. Idempotent.
pub fn normalize(curve: &ParametricCurve) -> Result<ParametricCurve> {
    curve.validate()?;
    let mut c = curve.clone();

    // Shift each side's numerator/denominator pair to joint minimum 0.
    for side in 0..2 {
        let m = c.num[side]
            .keys()
            .chain(c.den[side].keys())
            .copied()
            .min()
            .unwrap();
        if m != 0 {
            c.num[side] = shift_map(&c.num[side], -m);
            c.den[side] = shift_map(&c.den[side], -m);
        }
    }
    if c.class == CurveClass::Polynomial && (!is_constant(&c.den[0]) || !is_constant(&c.den[1])) {
        // A polynomial side with negative exponents became P/t^k.
        c.class = CurveClass::DifferentDenominators;
    }
    if c.class == CurveClass::SameDenominator && c.den[0] != c.den[1] {
        // Unequal shifts broke the shared denominator.
        c.class = CurveClass::DifferentDenominators;
    }

    // Common-factor division. Skipped in supports-only mode: generic
    // coefficients admit no common factor once supports are based at 0.
    if !c.supports_only {
        match c.class {
            CurveClass::Polynomial => {}
            CurveClass::SameDenominator => {
                let g = poly_of(&c.num[0]).gcd(&poly_of(&c.num[1])).gcd(&poly_of(&c.den[0]));
                if g.degree().unwrap_or(0) >= 1 {
                    c.num[0] = divide_out(&c.num[0], &g)?;
                    c.num[1] = divide_out(&c.num[1], &g)?;
                    let d = divide_out(&c.den[0], &g)?;
                    c.den = [d.clone(), d];
                }
                let mut rerouted = false;
                for side in 0..2 {
                    let g = poly_of(&c.num[side]).gcd(&poly_of(&c.den[side]));
                    if g.degree().unwrap_or(0) >= 1 {
                        c.num[side] = divide_out(&c.num[side], &g)?;
                        c.den[side] = divide_out(&c.den[side], &g)?;
                        rerouted = true;
                    }
                }
                if rerouted {
                    c.class = CurveClass::DifferentDenominators;
                }
            }
            CurveClass::DifferentDenominators => {
                for side in 0..2 {
                    let g = poly_of(&c.num[side]).gcd(&poly_of(&c.den[side]));
                    if g.degree().unwrap_or(0) >= 1 {
                        c.num[side] = divide_out(&c.num[side], &g)?;
                        c.den[side] = divide_out(&c.den[side], &g)?;
                    }
                }
            }
        }
    }

    // Constant denominators fold into the numerators.
    for side in 0..2 {
        if is_constant(&c.den[side]) {
            let d = c.den[side][&0].clone();
            if !d.is_one() {
                for v in c.num[side].values_mut() {
                    *v /= &d;
                }
                c.den[side] = one_map();
            }
        }
    }
    if is_constant(&c.den[0]) && is_constant(&c.den[1]) {
        c.class = CurveClass::Polynomial;
    }

    // Degree-of-parameterization check: if on each side every exponent of
    // num and den is a multiple of a > 1 (they include 0 after shifting),
    // the curve factors through t -> t^a.
    let mut a: i64 = 0;
    for side in 0..2 {
        for &e in c.num[side].keys().chain(c.den[side].keys()) {
            a = a.gcd(&e);
        }
    }
    if a > 1 {
        return Err(Error::DegreeSubstitutionDetected(a as u64));
    }

    c.validate()?;
    Ok(c)
}

// ---------------------------------------------------------------------------
// Same-denominator data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "1A")]
    OneA,
    #[serde(rename = "2A")]
    TwoA,
    #[serde(rename = "2B")]
    TwoB,
    #[serde(rename = "3B")]
    ThreeB,
}

/// Newton segments B0 = supp(P0), B1 = supp(P1), B2 = supp(Q) of the
/// auxiliary system f0 = x r - P0, f1 = y r - P1, f2 = r - Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SameDenomData {
    pub b: [Support; 3],
    pub u: i64,
    pub case_tag: CaseTag,
    /// Role permutation (i, j, k) realizing the matched case's normal form.
    pub roles: [usize; 3],
    /// True when the segments are the e -> u - e reflection of the curve's
    /// own supports (the t -> 1/t reparameterization, same implicit curve).
    pub mirrored: bool,
}

impl SameDenomData {
    pub fn left(&self, i: usize) -> i64 {
        self.b[i].left()
    }

    pub fn right(&self, i: usize) -> i64 {
        self.b[i].right()
    }
}

/// Classify the relative positions of the three segments; returns the case
/// tag and the role permutation satisfying its normal form literally.
pub fn classify_same_denom(b: &[Support; 3], u: i64) -> Result<(CaseTag, [usize; 3])> {
    let left = |i: usize| b[i].left();
    let right = |i: usize| b[i].right();
    let pair_full =
        |i: usize, j: usize| left(i).min(left(j)) == 0 && right(i).max(right(j)) == u;

    if pair_full(0, 1) && pair_full(0, 2) && pair_full(1, 2) {
        return Ok((CaseTag::OneA, [0, 1, 2]));
    }
    for k in 0..3 {
        if left(k) == 0 && right(k) == u {
            let (mut i, mut j) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            // Case-A assumption b_iL (u - b_jR) >= b_jL (u - b_iR); on a tie
            // keep index order.
            if left(i) * (u - right(j)) < left(j) * (u - right(i)) {
                std::mem::swap(&mut i, &mut j);
            }
            return Ok((CaseTag::TwoA, [i, j, k]));
        }
    }
    for &(i, j, k) in &[
        (0usize, 1usize, 2usize),
        (0, 2, 1),
        (1, 0, 2),
        (1, 2, 0),
        (2, 0, 1),
        (2, 1, 0),
    ] {
        let normal = left(i) > 0
            && right(i) == u
            && left(j) == 0
            && right(j) < u
            && right(k) < u;
        if !normal {
            continue;
        }
        if left(k) == 0 {
            if right(j) <= right(k) {
                return Ok((CaseTag::TwoB, [i, j, k]));
            }
        } else {
            return Ok((CaseTag::ThreeB, [i, j, k]));
        }
    }
    Err(Error::UnclassifiableConfiguration)
}

/// Extract and classify the segment data of a normalized shared-denominator
/// curve.
pub fn derive_same_denom(curve: &ParametricCurve) -> Result<SameDenomData> {
    if curve.class != CurveClass::SameDenominator {
        return Err(Error::InternalInvariant(
            "derive_same_denom on a curve without shared denominator".into(),
        ));
    }
    let b = [
        Support::new(support_of(&curve.num[0])),
        Support::new(support_of(&curve.num[1])),
        Support::new(support_of(&curve.den[0])),
    ];
    let u = b.iter().map(|s| s.right()).max().unwrap();
    match classify_same_denom(&b, u) {
        Ok((case_tag, roles)) => Ok(SameDenomData {
            b,
            u,
            case_tag,
            roles,
            mirrored: false,
        }),
        // Some valid configurations (both numerator segments anchored on the
        // right with positive left ends) match no normal form directly, but
        // t -> 1/t reflects every segment to u minus itself without changing
        // the implicit curve, and the reflection always classifies.
        Err(Error::UnclassifiableConfiguration) => {
            let b = [mirror_support(&b[0], u), mirror_support(&b[1], u), mirror_support(&b[2], u)];
            let (case_tag, roles) = classify_same_denom(&b, u)?;
            Ok(SameDenomData {
                b,
                u,
                case_tag,
                roles,
                mirrored: true,
            })
        }
        Err(e) => Err(e),
    }
}

fn mirror_support(s: &Support, u: i64) -> Support {
    Support::new(s.exponents().iter().map(|&e| u - e).collect())
}

// ---------------------------------------------------------------------------
// Different-denominator data and selections
// ---------------------------------------------------------------------------

/// Supports of f0 = x Q0 - P0 and f1 = y Q1 - P1 with the originating
/// numerator/denominator membership kept for selections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffDenomData {
    pub a: [Support; 2],
    pub p_supp: [Vec<i64>; 2],
    pub q_supp: [Vec<i64>; 2],
}

pub fn derive_diff_denom(curve: &ParametricCurve) -> Result<DiffDenomData> {
    if curve.class == CurveClass::SameDenominator {
        return Err(Error::InternalInvariant(
            "derive_diff_denom on a shared-denominator curve".into(),
        ));
    }
    let mut a = Vec::new();
    let mut p_supp = Vec::new();
    let mut q_supp = Vec::new();
    for side in 0..2 {
        let p = support_of(&curve.num[side]);
        let q = support_of(&curve.den[side]);
        let mut union = p.clone();
        union.extend(&q);
        a.push(Support::new(union));
        p_supp.push(p);
        q_supp.push(q);
    }
    let data = DiffDenomData {
        a: [a.remove(0), a.remove(0)],
        p_supp: [p_supp.remove(0), p_supp.remove(0)],
        q_supp: [q_supp.remove(0), q_supp.remove(0)],
    };
    for side in 0..2 {
        if data.a[side].left() != 0 {
            return Err(Error::InternalInvariant(
                "different-denominator supports must start at 0".into(),
            ));
        }
    }
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionKind {
    Selection1,
    Selection2,
}

/// Per-support selected/non-selected marking: selected points are those whose
/// coefficient involves the implicit variable — all of supp(Q_i) under
/// Selection1, only the pure-monomial ones supp(Q_i) \ supp(P_i) under
/// Selection2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub kind: SelectionKind,
    /// (exponent, selected) in increasing exponent order, per support.
    pub flags: [Vec<(i64, bool)>; 2],
}

pub fn make_selection(data: &DiffDenomData, kind: SelectionKind) -> Result<Selection> {
    let mut flags: [Vec<(i64, bool)>; 2] = [Vec::new(), Vec::new()];
    for side in 0..2 {
        for &e in data.a[side].exponents() {
            let in_q = data.q_supp[side].contains(&e);
            let in_p = data.p_supp[side].contains(&e);
            let sel = match kind {
                SelectionKind::Selection1 => in_q,
                SelectionKind::Selection2 => in_q && !in_p,
            };
            flags[side].push((e, sel));
        }
    }
    if kind == SelectionKind::Selection1 && flags.iter().any(|f| !f.iter().any(|&(_, s)| s)) {
        return Err(Error::InternalInvariant(
            "Selection1 with an empty selected set".into(),
        ));
    }
    Ok(Selection { kind, flags })
}

impl Selection {
    pub fn exponents(&self, i: usize) -> Vec<i64> {
        self.flags[i].iter().map(|&(e, _)| e).collect()
    }

    pub fn max(&self, i: usize) -> i64 {
        self.flags[i].last().unwrap().0
    }

    pub fn min(&self, i: usize) -> i64 {
        self.flags[i][0].0
    }

    /// X(p^+): 1 if exponent e of support i is present and selected.
    pub fn chi(&self, i: usize, e: i64) -> i64 {
        self.flags[i]
            .iter()
            .any(|&(x, s)| x == e && s)
            .into()
    }

    pub fn is_selected(&self, i: usize, e: i64) -> Option<bool> {
        self.flags[i].iter().find(|&&(x, _)| x == e).map(|&(_, s)| s)
    }

    /// a_{iL}^+: leftmost selected exponent.
    pub fn left_sel(&self, i: usize) -> Option<i64> {
        self.flags[i].iter().find(|&&(_, s)| s).map(|&(e, _)| e)
    }

    /// a_{iR}^+: rightmost selected exponent.
    pub fn right_sel(&self, i: usize) -> Option<i64> {
        self.flags[i].iter().rev().find(|&&(_, s)| s).map(|&(e, _)| e)
    }

    /// a_{iL}^-: leftmost non-selected exponent.
    pub fn left_non(&self, i: usize) -> Option<i64> {
        self.flags[i].iter().find(|&&(_, s)| !s).map(|&(e, _)| e)
    }

    /// a_{iR}^-: rightmost non-selected exponent.
    pub fn right_non(&self, i: usize) -> Option<i64> {
        self.flags[i].iter().rev().find(|&&(_, s)| !s).map(|&(e, _)| e)
    }

    pub fn has_selected(&self, i: usize) -> bool {
        self.flags[i].iter().any(|&(_, s)| s)
    }

    pub fn has_nonselected(&self, i: usize) -> bool {
        self.flags[i].iter().any(|&(_, s)| !s)
    }

    /// Mirror: swap the roles of the two supports.
    pub fn swapped(&self) -> Selection {
        Selection {
            kind: self.kind,
            flags: [self.flags[1].clone(), self.flags[0].clone()],
        }
    }
}
