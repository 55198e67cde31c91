//! Inhomogeneous differential forms with polynomial coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::polyring::{Context, Poly, Rational, MAX_DIM};

/// A basis element `dx^I`, the index set `I` packed as a bit mask
/// (bit `i` is the 0-based axis `i`).
///
/// Ordered by grade, then lexicographically by the sorted index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u32) -> Self {
        Blade(mask)
    }

    pub fn single(axis: usize) -> Self {
        Blade(1 << axis)
    }

    pub fn full(dim: usize) -> Self {
        Blade(((1u64 << dim) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 & (1 << axis) != 0
    }

    /// 0-based axes in increasing order.
    pub fn axes(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn complement(self, dim: usize) -> Blade {
        Blade(!self.0 & Blade::full(dim).0)
    }

    pub fn without(self, axis: usize) -> Blade {
        Blade(self.0 & !(1 << axis))
    }

    pub fn with(self, axis: usize) -> Blade {
        Blade(self.0 | (1 << axis))
    }

    /// Sign of `dx^self ^ dx^other` relative to the sorted basis element,
    /// or `None` if the index sets overlap.
    pub fn wedge_sign(self, other: Blade) -> Option<i8> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other.axes().map(|j| (self.0 >> (j + 1)).count_ones()).sum();
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Builds a blade from an arbitrary list of 0-based axes, returning the
    /// permutation sign, or `None` if an axis repeats.
    pub fn from_axes(axes: &[usize]) -> Option<(Blade, i8)> {
        let mut blade = Blade::SCALAR;
        let mut sign = 1i8;
        for &a in axes {
            sign *= blade.wedge_sign(Blade::single(a))?;
            blade = blade.with(a);
        }
        Some((blade, sign))
    }

    /// All blades of a given grade in `dim` dimensions, canonical order.
    pub fn of_grade(dim: usize, grade: usize) -> Vec<Blade> {
        let mut v: Vec<Blade> = (0u32..(1u32 << dim))
            .map(Blade)
            .filter(|b| b.grade() == grade)
            .collect();
        v.sort();
        v
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // lowest differing axis belongs to self: its sorted list is smaller
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes: Vec<String> = self.axes().map(|a| (a + 1).to_string()).collect();
        write!(f, "[{}]", axes.join(","))
    }
}

/// A differential form `sum_I f_I dx^I`, possibly mixing grades.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<Blade, Poly>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension out of range");
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(p: Poly) -> Self {
        Self::term(Blade::SCALAR, p)
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::scalar(Poly::constant(dim, c))
    }

    pub fn term(blade: Blade, p: Poly) -> Self {
        let mut f = Form::zero(p.nvars());
        f.add_component(blade, p);
        f
    }

    /// `dx^{a1} ^ dx^{a2} ^ ...` for 0-based axes in any order.
    pub fn basis(dim: usize, axes: &[usize]) -> Result<Self> {
        if let Some(&a) = axes.iter().find(|&&a| a >= dim) {
            return Err(Error::AxisOutOfRange { axis: a + 1, dim });
        }
        Ok(match Blade::from_axes(axes) {
            Some((b, s)) => Form::term(b, Poly::constant(dim, Rational::from_integer(s.into()))),
            None => Form::zero(dim),
        })
    }

    /// `dx^axis` for a 0-based axis.
    pub fn dx(dim: usize, axis: usize) -> Self {
        Form::term(Blade::single(axis), Poly::one(dim))
    }

    /// Volume form `dx1^...^dxn`.
    pub fn volume(dim: usize) -> Self {
        Form::term(Blade::full(dim), Poly::one(dim))
    }

    pub fn from_components(dim: usize, comps: impl IntoIterator<Item = (Blade, Poly)>) -> Self {
        let mut f = Form::zero(dim);
        for (b, p) in comps {
            f.add_component(b, p);
        }
        f
    }

    pub(crate) fn add_component(&mut self, blade: Blade, p: Poly) {
        assert_eq!(p.nvars(), self.dim, "coefficient dimension mismatch");
        assert!(blade.mask() >> self.dim == 0, "blade outside dimension");
        if p.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Components in canonical order (grade, then index list).
    pub fn components(&self) -> impl Iterator<Item = (Blade, &Poly)> {
        self.terms.iter().map(|(b, p)| (*b, p))
    }

    pub fn component(&self, blade: Blade) -> Option<&Poly> {
        self.terms.get(&blade)
    }

    /// Grades with a nonzero component, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.dedup();
        g
    }

    /// `true` if every component has grade `k` (the zero form is homogeneous of every grade).
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    /// Maximum total degree of the coefficients.
    pub fn degree(&self) -> Option<u32> {
        self.terms.values().filter_map(Poly::degree).max()
    }

    fn check(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Form {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Form {
        self.map_coeffs(|p| p * f)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Poly) -> Poly) -> Form {
        Form::from_components(self.dim, self.terms.iter().map(|(b, p)| (*b, f(p))))
    }

    /// `a * self + b * other`.
    pub fn linear(a: &Rational, lhs: &Form, b: &Rational, rhs: &Form) -> Result<Form> {
        lhs.check(rhs)?;
        let mut out = lhs.scale(a);
        for (blade, p) in &rhs.terms {
            out.add_component(*blade, p.scale(b));
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        Form::linear(&Rational::one(), self, &Rational::one(), other)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        Form::linear(&Rational::one(), self, &-Rational::one(), other)
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check(other)?;
        let mut out = Form::zero(self.dim);
        for (ba, pa) in &self.terms {
            for (bb, pb) in &other.terms {
                if let Some(sign) = ba.wedge_sign(*bb) {
                    let prod = pa * pb;
                    let prod = if sign < 0 { -prod } else { prod };
                    out.add_component(Blade(ba.0 | bb.0), prod);
                }
            }
        }
        Ok(out)
    }

    /// Interior product `i_v`, a grade-lowering antiderivation.
    pub fn interior(&self, v: &VectorField) -> Result<Form> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let mut out = Form::zero(self.dim);
        for (blade, p) in &self.terms {
            for (pos, axis) in blade.axes().enumerate() {
                let vi = &v.components()[axis];
                if vi.is_zero() {
                    continue;
                }
                let prod = p * vi;
                let prod = if pos % 2 == 1 { -prod } else { prod };
                out.add_component(blade.without(axis), prod);
            }
        }
        Ok(out)
    }

    /// Exterior derivative (coordinate `d`, flat chart).
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim);
        for (blade, p) in &self.terms {
            for axis in 0..self.dim {
                if blade.contains(axis) {
                    continue;
                }
                let dp = p.partial(axis).expect("axis < dim");
                if dp.is_zero() {
                    continue;
                }
                let below = (blade.0 & ((1u32 << axis) - 1)).count_ones();
                let dp = if below % 2 == 1 { -dp } else { dp };
                out.add_component(blade.with(axis), dp);
            }
        }
        out
    }

    /// Homogeneous grade-`k` part.
    pub fn grade(&self, k: usize) -> Result<Form> {
        if k > self.dim {
            return Err(Error::grade(k, format!("exceeds dimension {}", self.dim)));
        }
        Ok(self.grade_part(k))
    }

    pub(crate) fn grade_part(&self, k: usize) -> Form {
        Form::from_components(
            self.dim,
            self.terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, p)| (*b, p.clone())),
        )
    }

    /// The grade involution: `(-1)^p` on grade `p`.
    pub fn eta(&self) -> Form {
        Form::from_components(
            self.dim,
            self.terms.iter().map(|(b, p)| (*b, if b.grade() % 2 == 1 { -p } else { p.clone() })),
        )
    }

    /// Replaces every coefficient by its value at a centered point.
    pub fn eval_centered(&self, point: &[Rational]) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        for (b, p) in &self.terms {
            out.add_component(*b, Poly::constant(self.dim, p.eval(point)?));
        }
        Ok(out)
    }

    /// Constant-coefficient form obtained by evaluating at `point`
    /// (absolute coordinates when `absolute` is set).
    pub fn eval_at(&self, ctx: &Context, point: &[Rational], absolute: bool) -> Result<Form> {
        self.check_ctx(ctx)?;
        self.eval_centered(&ctx.centered_point(point, absolute)?)
    }

    /// Value at the chart center.
    pub fn at_center(&self) -> Form {
        Form::from_components(
            self.dim,
            self.terms
                .iter()
                .map(|(b, p)| (*b, Poly::constant(self.dim, p.constant_term()))),
        )
    }

    pub(crate) fn check_ctx(&self, ctx: &Context) -> Result<()> {
        if self.dim != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: self.dim,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("Form(0)");
        }
        f.write_str("Form(")?;
        for (i, (b, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({p}){b:?}")?;
        }
        f.write_str(")")
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    /// Panics on a dimension mismatch; see [`Form::try_add`].
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("form dimension mismatch")
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    /// Panics on a dimension mismatch; see [`Form::try_sub`].
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).expect("form dimension mismatch")
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coeffs(|p| -p)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

/// A vector field `v^i d/dx^i` with polynomial components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidContext("vector field needs at least one component".into()));
        }
        if let Some(p) = components.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.nvars(),
            });
        }
        Ok(VectorField { components })
    }

    /// Constant coordinate frame vector `d/dx^axis`.
    pub fn frame(dim: usize, axis: usize) -> Self {
        let components = (0..dim)
            .map(|i| if i == axis { Poly::one(dim) } else { Poly::zero(dim) })
            .collect();
        VectorField { components }
    }

    pub fn constant(values: &[Rational]) -> Self {
        let n = values.len();
        VectorField {
            components: values.iter().map(|v| Poly::constant(n, v.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn eval_centered(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }
}
