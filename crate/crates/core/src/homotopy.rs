//! Linear homotopy operator `H`, cohomotopy operator `h`, and the two
//! direct-sum decompositions they induce on a star-shaped chart.
//!
//! With the radial field `K = y^i d/dy^i`, the homotopy operator on a
//! monomial `y^m dx^I` of grade `k >= 1` is
//!
//! ```text
//! H(y^m dx^I) = y^m i_K(dx^I) / (|m| + k)
//! ```
//!
//! The cohomotopy operator is the composite `h = eta *^{-1} H *`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Form, VectorField};
use crate::polyring::{int, Context, Poly, Rational};

/// Subspaces of forms recognised by [`Context::is_member`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceTag {
    /// Kernel of `d`.
    Exact,
    /// `i_K w = 0` and `w(x0) = 0`.
    Antiexact,
    /// Kernel of `delta`.
    Coexact,
    /// `K_flat ^ w = 0` and `w(x0) = 0`.
    Anticoexact,
    HodgeHarmonic,
    HodgeAntiharmonic,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 6] = [
        SpaceTag::Exact,
        SpaceTag::Antiexact,
        SpaceTag::Coexact,
        SpaceTag::Anticoexact,
        SpaceTag::HodgeHarmonic,
        SpaceTag::HodgeAntiharmonic,
    ];
}

impl FromStr for SpaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "E" | "exact" => SpaceTag::Exact,
            "A" | "antiexact" => SpaceTag::Antiexact,
            "C" | "coexact" => SpaceTag::Coexact,
            "Y" | "anticoexact" => SpaceTag::Anticoexact,
            "harmonic" => SpaceTag::HodgeHarmonic,
            "antiharmonic" => SpaceTag::HodgeAntiharmonic,
            other => return Err(Error::InvalidContext(format!("unknown space `{other}`"))),
        })
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceTag::Exact => "E",
            SpaceTag::Antiexact => "A",
            SpaceTag::Coexact => "C",
            SpaceTag::Anticoexact => "Y",
            SpaceTag::HodgeHarmonic => "harmonic",
            SpaceTag::HodgeAntiharmonic => "antiharmonic",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionMode {
    /// `w = (dH w + s* w) + H d w`
    ExactAntiexact,
    /// `w = (delta h w + S w) + h delta w`
    CoexactAnticoexact,
}

impl FromStr for DecompositionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DecompositionMode::ExactAntiexact),
            "coexact" => Ok(DecompositionMode::CoexactAnticoexact),
            other => Err(Error::InvalidContext(format!("unknown decomposition mode `{other}`"))),
        }
    }
}

/// `first + second` reproduces the input exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Exact (resp. coexact) part, including the center-evaluation term.
    pub first: Form,
    /// Antiexact (resp. anticoexact) part.
    pub second: Form,
    pub mode: DecompositionMode,
}

impl Context {
    /// Radial field `K = (x - x0)^i d/dx^i`; in centered coordinates `y^i d/dy^i`.
    pub fn k_field(&self) -> VectorField {
        let n = self.dim();
        VectorField::new((0..n).map(|i| Poly::var(n, i)).collect()).expect("valid K field")
    }

    /// `K_flat`, the 1-form `sum eps_i y_i dx^i`.
    pub fn k_flat(&self) -> Form {
        self.flat(&self.k_field())
    }

    /// Homotopy operator `H` (closed monomial form).
    pub fn homotopy(&self, omega: &Form) -> Form {
        assert_eq!(omega.dim(), self.dim(), "form dimension mismatch");
        let n = self.dim();
        let mut out = Form::zero(n);
        for (blade, p) in omega.components() {
            let k = blade.grade();
            if k == 0 {
                continue;
            }
            for (pos, axis) in blade.axes().enumerate() {
                let target = blade.without(axis);
                let mut coeff = Poly::zero(n);
                for (m, c) in p.terms() {
                    let weight = Rational::new(1.into(), ((m.total() as usize + k) as i64).into());
                    let c = if pos % 2 == 1 { -(c * weight) } else { c * weight };
                    coeff.add_term(m.bump(axis), c);
                }
                out.add_component(target, coeff);
            }
        }
        out
    }

    /// Cohomotopy operator `h = eta *^{-1} H *`, grade-raising.
    pub fn cohomotopy(&self, omega: &Form) -> Form {
        self.star_inv(&self.homotopy(&self.star(omega))).eta()
    }

    /// Pullback along the constant map: grade-0 part evaluated at the center.
    pub fn center_pullback(&self, omega: &Form) -> Form {
        omega.grade_part(0).at_center()
    }

    /// `*^{-1} s* *`: grade-`n` part evaluated at the center.
    pub fn center_top_eval(&self, omega: &Form) -> Form {
        omega.grade_part(self.dim()).at_center()
    }

    pub fn decompose(&self, omega: &Form, mode: DecompositionMode) -> Decomposition {
        assert_eq!(omega.dim(), self.dim(), "form dimension mismatch");
        let (first, second) = match mode {
            DecompositionMode::ExactAntiexact => (
                &self.homotopy(omega).d() + &self.center_pullback(omega),
                self.homotopy(&omega.d()),
            ),
            DecompositionMode::CoexactAnticoexact => (
                &self.delta(&self.cohomotopy(omega)) + &self.center_top_eval(omega),
                self.cohomotopy(&self.delta(omega)),
            ),
        };
        Decomposition { first, second, mode }
    }

    /// Exact membership predicate. The zero form belongs to every space.
    pub fn is_member(&self, omega: &Form, tag: SpaceTag) -> bool {
        assert_eq!(omega.dim(), self.dim(), "form dimension mismatch");
        match tag {
            SpaceTag::Exact => omega.d().is_zero(),
            SpaceTag::Coexact => self.delta(omega).is_zero(),
            SpaceTag::Antiexact => {
                omega.at_center().is_zero()
                    && omega.interior(&self.k_field()).expect("same dimension").is_zero()
            }
            SpaceTag::Anticoexact => {
                omega.at_center().is_zero()
                    && self.k_flat().wedge(omega).expect("same dimension").is_zero()
            }
            SpaceTag::HodgeHarmonic => {
                self.is_member(omega, SpaceTag::Exact) && self.is_member(omega, SpaceTag::Coexact)
            }
            SpaceTag::HodgeAntiharmonic => {
                self.is_member(omega, SpaceTag::Antiexact) && self.is_member(omega, SpaceTag::Anticoexact)
            }
        }
    }

    /// Antiexact potential `H w` of a closed form without a grade-0 part.
    pub fn potential(&self, omega: &Form) -> Result<Form> {
        omega.check_ctx(self)?;
        if !omega.grade_part(0).is_zero() {
            return Err(Error::grade(0, "closed 0-forms are constants and have no potential"));
        }
        if !omega.d().is_zero() {
            return Err(Error::NotClosed);
        }
        Ok(self.homotopy(omega))
    }

    /// Anticoexact copotential `h w` of a coclosed form below top grade.
    pub fn copotential(&self, omega: &Form) -> Result<Form> {
        omega.check_ctx(self)?;
        let n = self.dim();
        if !omega.grade_part(n).is_zero() {
            return Err(Error::NoCopotential { grade: n });
        }
        if !self.delta(omega).is_zero() {
            return Err(Error::NotCoclosed);
        }
        Ok(self.cohomotopy(omega))
    }

    /// For `w` anticoexact, returns `a` with `w = K_flat ^ a`.
    ///
    /// Uses `w = h(delta w)` and `h b = -K_flat ^ A(b)`, where `A` divides the
    /// coefficient `y^m` of a grade-`q` component by `|m| + n - q`.
    pub fn anticoexact_factor(&self, omega: &Form) -> Form {
        let n = self.dim();
        self.delta(omega).map_coeffs_by_blade(|b, p| {
            let q = b.grade();
            let mut out = Poly::zero(n);
            for (m, c) in p.terms() {
                out.add_term(m.clone(), -(c / int((m.total() as usize + n - q) as i64)));
            }
            out
        })
    }

    /// `i_K`.
    pub fn k_interior(&self, omega: &Form) -> Form {
        omega.interior(&self.k_field()).expect("same dimension")
    }

    /// `K_flat ^`.
    pub fn k_wedge(&self, omega: &Form) -> Form {
        self.k_flat().wedge(omega).expect("same dimension")
    }
}

/// `sum_I (coefficient averaged along the ray) dx^I`; the integrand of `H`
/// before contraction, used for cross-checks.
pub fn ray_average(omega: &Form) -> Form {
    let n = omega.dim();
    Form::from_components(
        n,
        omega.components().map(|(b, p)| {
            let k = b.grade().max(1);
            let mut out = Poly::zero(n);
            for (m, c) in p.terms() {
                out.add_term(m.clone(), c / int((m.total() as usize + k) as i64));
            }
            (b, out)
        }),
    )
}
