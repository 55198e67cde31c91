//! Exact multivariate polynomials over the rationals.
//!
//! Every polynomial is stored in coordinates centered at the chart center
//! `x0`, i.e. in the variables `y_i = x_i - x0_i`. The homotopy operator has
//! a closed monomial form only in these coordinates. Conversion to and from
//! absolute coordinates happens at the I/O boundary through [`Poly::translate`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::NonRationalLiteral(s.to_string());
    if s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `p/q`, including integers (`3/1`).
pub fn format_rational_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exponent vector of a monomial; lexicographic `Ord`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multidegree(SmallVec<[u16; 4]>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[axis] = 1;
        m
    }

    pub fn from_slice(exps: &[u16]) -> Self {
        Multidegree(SmallVec::from_slice(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, axis: usize) -> u16 {
        self.0[axis]
    }

    pub fn mul(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn bump(&self, axis: usize) -> Multidegree {
        let mut m = self.clone();
        m.0[axis] += 1;
        m
    }

    /// All exponent vectors in `n` variables with total degree at most `max`,
    /// in lexicographic order.
    pub fn all_up_to(n: usize, max: u32) -> Vec<Multidegree> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Multidegree>) {
            if cur.len() == n {
                out.push(Multidegree::from_slice(cur));
                return;
            }
            for e in 0..=left {
                cur.push(e as u16);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

/// Sparse polynomial in centered coordinates. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Multidegree, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, Multidegree::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The centered coordinate `y_axis` (0-based axis).
    pub fn var(nvars: usize, axis: usize) -> Self {
        Self::monomial(nvars, Multidegree::unit(nvars, axis), Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Multidegree, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "multidegree length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Multidegree, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "multidegree length must equal nvars");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Multidegree, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Multidegree) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Multidegree::zero(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Multidegree::total).max()
    }

    pub(crate) fn add_term(&mut self, m: Multidegree, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// `self * c * y^m`.
    pub fn mul_monomial(&self, m: &Multidegree, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Partial derivative along the 0-based `axis`.
    pub fn partial(&self, axis: usize) -> Result<Poly> {
        if axis >= self.nvars {
            return Err(Error::AxisOutOfRange {
                axis: axis + 1,
                dim: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(axis);
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[axis] -= 1;
            out.add_term(d, c * int(e as i64));
        }
        Ok(out)
    }

    /// Value at a point given in centered coordinates.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Floating-point evaluation at a centered point (test/diagnostic use).
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    v *= x.powi(e as i32);
                }
                v
            })
            .sum()
    }

    /// Substitutes `y -> y + shift`: the same function expressed in
    /// coordinates whose origin is moved by `-shift`.
    pub fn translate(&self, shift: &[Rational]) -> Poly {
        assert_eq!(shift.len(), self.nvars, "shift length must equal nvars");
        if shift.iter().all(Zero::is_zero) {
            return self.clone();
        }
        // (y_i + s_i)^e expanded once per (axis, exponent)
        let mut cache: BTreeMap<(usize, u16), Vec<(u16, Rational)>> = BTreeMap::new();
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut acc: Vec<(Multidegree, Rational)> = vec![(Multidegree::zero(self.nvars), c.clone())];
            for axis in 0..self.nvars {
                let e = m.get(axis);
                if e == 0 {
                    continue;
                }
                let expansion = cache
                    .entry((axis, e))
                    .or_insert_with(|| binomial_expansion(&shift[axis], e));
                let mut next = Vec::with_capacity(acc.len() * expansion.len());
                for (mm, cc) in &acc {
                    for (k, coef) in expansion.iter() {
                        let mut nm = mm.clone();
                        nm.0[axis] += *k;
                        next.push((nm, cc * coef));
                    }
                }
                acc = next;
            }
            for (mm, cc) in acc {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Re-expresses a polynomial centered at `from` in coordinates centered at `to`.
    pub fn rebase(&self, from: &[Rational], to: &[Rational]) -> Poly {
        let shift: Vec<Rational> = to.iter().zip(from).map(|(t, f)| t - f).collect();
        self.translate(&shift)
    }
}

/// Coefficients of `(y + s)^e` as `(power of y, coefficient)`.
fn binomial_expansion(s: &Rational, e: u16) -> Vec<(u16, Rational)> {
    let mut out = Vec::with_capacity(e as usize + 1);
    let mut binom = BigInt::one();
    for k in 0..=e {
        // y^k * s^(e-k) * C(e, k)
        let coef = Rational::from_integer(binom.clone()) * num_traits::pow(s.clone(), (e - k) as usize);
        if !coef.is_zero() {
            out.push((k, coef));
        }
        binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
    }
    out
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Renders in the variable names `x1..xn`, highest monomial first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = m.total() == 0;
            if is_const || !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (axis, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", axis + 1)),
                    _ => factors.push(format!("x{}^{}", axis + 1, e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics on a variable-count mismatch; use the `try_` methods to recover.
            fn $method(self, rhs: &Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Result<Poly> = $body;
                f(self, rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a, b| a.try_add(b));
poly_binop!(Mul, mul, |a, b| a.try_mul(b));
poly_binop!(Sub, sub, |a, b| a.try_add(&b.scale(&-Rational::one())));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Chart descriptor: dimension, star center, diagonal `±1` metric.
///
/// Orientation is fixed as `dx1^...^dxn` positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    dim: usize,
    center: Vec<Rational>,
    signature: Vec<i8>,
}

/// Largest supported dimension; index sets are packed in a `u32`.
pub const MAX_DIM: usize = 16;

impl Context {
    pub fn new(center: Vec<Rational>, signature: Vec<i8>) -> Result<Self> {
        let dim = signature.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidContext(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        if center.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: center.len(),
            });
        }
        if signature.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidContext("signature entries must be +1 or -1".into()));
        }
        Ok(Context {
            dim,
            center,
            signature,
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim], vec![1; dim]).expect("valid euclidean context")
    }

    /// `+` followed by `-` entries; for `dim == 1` the single entry is `-`
    /// so that `sig(g) = -1` is exercised.
    pub fn lorentzian(dim: usize) -> Self {
        let sig = (0..dim).map(|i| if i == 0 && dim > 1 { 1 } else { -1 }).collect();
        Self::new(vec![Rational::zero(); dim], sig).expect("valid lorentzian context")
    }

    /// Parses a metric string such as `"+---"`.
    pub fn parse_metric(metric: &str) -> Result<Vec<i8>> {
        metric
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidContext(format!("metric character `{other}` is not + or -"))),
            })
            .collect()
    }

    pub fn with_center(mut self, center: Vec<Rational>) -> Result<Self> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: center.len(),
            });
        }
        self.center = center;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn metric_string(&self) -> String {
        self.signature.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }

    /// Product of the signature entries, `det(g)/|det(g)|`.
    pub fn sig(&self) -> i8 {
        self.signature.iter().product()
    }

    pub fn is_euclidean(&self) -> bool {
        self.signature.iter().all(|&s| s == 1)
    }

    /// Converts a point to centered coordinates when `absolute` is set.
    pub fn centered_point(&self, point: &[Rational], absolute: bool) -> Result<Vec<Rational>> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(if absolute {
            point.iter().zip(&self.center).map(|(p, c)| p - c).collect()
        } else {
            point.to_vec()
        })
    }

    pub fn eval_poly(&self, p: &Poly, point: &[Rational], absolute: bool) -> Result<Rational> {
        if p.nvars() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.nvars(),
            });
        }
        p.eval(&self.centered_point(point, absolute)?)
    }

    /// Absolute coordinate `x_axis` as a centered polynomial `y_axis + x0_axis`.
    pub fn absolute_var(&self, axis: usize) -> Poly {
        &Poly::var(self.dim, axis) + &Poly::constant(self.dim, self.center[axis].clone())
    }

    /// Centered polynomial to absolute coordinates (origin-centered).
    pub fn to_absolute(&self, p: &Poly) -> Poly {
        p.translate(&self.center.iter().map(|c| -c).collect::<Vec<_>>())
    }

    /// Absolute-coordinate polynomial to centered coordinates.
    pub fn from_absolute(&self, p: &Poly) -> Poly {
        p.translate(&self.center)
    }
}

/// Least common multiple of the denominators of an iterator of rationals.
pub(crate) fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
