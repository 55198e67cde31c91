//! Clifford action of vectors on forms and the Dirac-type operators built
//! from `d`, `delta`, `H` and `h`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Form, VectorField};
use crate::polyring::Context;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorTag {
    /// `D = d - delta`
    Dirac,
    /// `h - H`
    AntiDirac,
    /// `-(delta d + d delta) = D^2`
    LaplaceBeltrami,
    /// `-(hH + Hh)`
    AntiLaplace,
    /// `h delta - delta h`
    OscillatorHbar,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 5] = [
        OperatorTag::Dirac,
        OperatorTag::AntiDirac,
        OperatorTag::LaplaceBeltrami,
        OperatorTag::AntiLaplace,
        OperatorTag::OscillatorHbar,
    ];

    /// Output grades for a homogeneous grade-`k` input in dimension `n`.
    pub fn image_grades(self, k: usize, n: usize) -> BTreeSet<usize> {
        match self {
            OperatorTag::Dirac | OperatorTag::AntiDirac => {
                let mut s = BTreeSet::new();
                if k > 0 {
                    s.insert(k - 1);
                }
                if k < n {
                    s.insert(k + 1);
                }
                s
            }
            _ => BTreeSet::from([k]),
        }
    }
}

impl FromStr for OperatorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dirac" => OperatorTag::Dirac,
            "antidirac" => OperatorTag::AntiDirac,
            "laplace" => OperatorTag::LaplaceBeltrami,
            "antilaplace" => OperatorTag::AntiLaplace,
            "hbar" => OperatorTag::OscillatorHbar,
            other => return Err(Error::InvalidContext(format!("unknown operator `{other}`"))),
        })
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorTag::Dirac => "dirac",
            OperatorTag::AntiDirac => "antidirac",
            OperatorTag::LaplaceBeltrami => "laplace",
            OperatorTag::AntiLaplace => "antilaplace",
            OperatorTag::OscillatorHbar => "hbar",
        })
    }
}

/// Outcome of splitting a form into eigenvectors of `h delta - delta h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscillatorReport {
    pub grade: usize,
    /// `delta h w`, eigenvalue `-1`.
    pub coexact: Form,
    /// `h delta w`, eigenvalue `+1`.
    pub anticoexact: Form,
    pub coexact_verified: bool,
    pub anticoexact_verified: bool,
    /// `Some(+1)` or `Some(-1)` when the input is itself an eigenvector.
    pub eigenvalue: Option<i8>,
}

impl Context {
    /// `v psi = v_flat ^ psi + i_v psi`.
    pub fn clifford_vec_mul(&self, v: &VectorField, psi: &Form) -> Result<Form> {
        psi.check_ctx(self)?;
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(&self.flat(v).wedge(psi)? + &psi.interior(v)?)
    }

    pub fn dirac(&self, psi: &Form) -> Form {
        &psi.d() - &self.delta(psi)
    }

    pub fn anti_dirac(&self, psi: &Form) -> Form {
        &self.cohomotopy(psi) - &self.homotopy(psi)
    }

    pub fn laplace_beltrami(&self, psi: &Form) -> Form {
        -(&self.delta(&psi.d()) + &self.delta(psi).d())
    }

    pub fn anti_laplace(&self, psi: &Form) -> Form {
        -(&self.cohomotopy(&self.homotopy(psi)) + &self.homotopy(&self.cohomotopy(psi)))
    }

    pub fn oscillator_hbar(&self, psi: &Form) -> Form {
        &self.cohomotopy(&self.delta(psi)) - &self.delta(&self.cohomotopy(psi))
    }

    pub fn apply_operator(&self, tag: OperatorTag, psi: &Form) -> Form {
        match tag {
            OperatorTag::Dirac => self.dirac(psi),
            OperatorTag::AntiDirac => self.anti_dirac(psi),
            OperatorTag::LaplaceBeltrami => self.laplace_beltrami(psi),
            OperatorTag::AntiLaplace => self.anti_laplace(psi),
            OperatorTag::OscillatorHbar => self.oscillator_hbar(psi),
        }
    }

    /// `D` assembled from the orthonormal coframe: `sum_a e^a . d_a psi`.
    pub fn frame_dirac(&self, psi: &Form) -> Form {
        let n = self.dim();
        let mut out = Form::zero(n);
        for a in 0..n {
            let partial = psi.map_coeffs(|p| p.partial(a).expect("axis < dim"));
            let sharp = self.sharp(&Form::dx(n, a)).expect("1-form");
            out = &out + &self.clifford_vec_mul(&sharp, &partial).expect("same dimension");
        }
        out
    }

    /// `-sum_a i_{(e^a)#} d_a psi`, the coframe expression of `delta`.
    pub fn frame_codifferential(&self, psi: &Form) -> Form {
        let n = self.dim();
        let mut out = Form::zero(n);
        for a in 0..n {
            let partial = psi.map_coeffs(|p| p.partial(a).expect("axis < dim"));
            let sharp = self.sharp(&Form::dx(n, a)).expect("1-form");
            out = &out - &partial.interior(&sharp).expect("same dimension");
        }
        out
    }

    /// Checks that `tag` maps a homogeneous grade-`k` form into the grades
    /// of its block pattern (`D`, anti-Dirac: `k +- 1`; the rest: `k`).
    pub fn grade_block_check(&self, tag: OperatorTag, omega: &Form) -> bool {
        let grades = omega.grades();
        let k = match grades.as_slice() {
            [] => return true,
            [k] => *k,
            _ => return false,
        };
        let allowed = tag.image_grades(k, self.dim());
        self.apply_operator(tag, omega)
            .grades()
            .iter()
            .all(|g| allowed.contains(g))
    }

    pub fn oscillator_eigencheck(&self, omega: &Form) -> Result<OscillatorReport> {
        omega.check_ctx(self)?;
        let n = self.dim();
        let grades = omega.grades();
        let r = match grades.as_slice() {
            [r] => *r,
            [] => {
                return Err(Error::grade(0, "the zero form has no grade to test"));
            }
            _ => {
                return Err(Error::grade(grades[0], "input must be homogeneous"));
            }
        };
        if r == 0 || r == n {
            return Err(Error::grade(r, format!("oscillator needs 0 < r < {n}")));
        }
        let coexact = self.delta(&self.cohomotopy(omega));
        let anticoexact = self.cohomotopy(&self.delta(omega));
        let coexact_verified = self.oscillator_hbar(&coexact) == -&coexact;
        let anticoexact_verified = self.oscillator_hbar(&anticoexact) == anticoexact;
        let eigenvalue = match (coexact.is_zero(), anticoexact.is_zero()) {
            (true, false) => Some(1),
            (false, true) => Some(-1),
            _ => None,
        };
        Ok(OscillatorReport {
            grade: r,
            coexact,
            anticoexact,
            coexact_verified,
            anticoexact_verified,
            eigenvalue,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat, Poly};

    fn y(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn clifford_examples() {
        let c = Context::euclidean(2);
        let e1 = VectorField::frame(2, 0);
        assert_eq!(c.clifford_vec_mul(&e1, &Form::constant(2, int(1))).unwrap(), Form::dx(2, 0));
        assert_eq!(c.clifford_vec_mul(&e1, &Form::dx(2, 0)).unwrap(), Form::constant(2, int(1)));

        let m = Context::lorentzian(3);
        let v = VectorField::constant(&[int(2), rat(1, 2), int(-1)]);
        let psi = &Form::basis(3, &[0, 2]).unwrap().mul_poly(&Poly::var(3, 1)) + &Form::dx(3, 1);
        let vv = m.clifford_vec_mul(&v, &m.clifford_vec_mul(&v, &psi).unwrap()).unwrap();
        // g(v, v) = 4 - 1/4 - 1
        assert_eq!(vv, psi.scale(&rat(11, 4)));
        assert!(c.clifford_vec_mul(&VectorField::frame(3, 0), &Form::dx(2, 0)).is_err());
    }

    #[test]
    fn operator_examples() {
        let c = Context::euclidean(2);
        assert_eq!(c.dirac(&Form::scalar(y(0))), Form::dx(2, 0));
        let psi = &Form::scalar(&(&y(0) * &y(0)) * &y(1)) + &Form::basis(2, &[0, 1]).unwrap().mul_poly(&y(1));
        assert_eq!(c.dirac(&c.dirac(&psi)), c.laplace_beltrami(&psi));
        let y_form = (&Form::dx(2, 0).mul_poly(&y(0)) + &Form::dx(2, 1).mul_poly(&y(1))).scale(&rat(1, 2));
        assert_eq!(c.oscillator_hbar(&y_form), y_form);
    }

    #[test]
    fn grade_blocks() {
        let c = Context::euclidean(3);
        let w = Form::dx(3, 1).mul_poly(&(&Poly::var(3, 0) * &Poly::var(3, 2)));
        let dw = c.dirac(&w);
        assert!(dw.grades().iter().all(|g| *g == 0 || *g == 2));
        for tag in OperatorTag::ALL {
            assert!(c.grade_block_check(tag, &w), "{tag}");
        }
        assert!(c.grade_block_check(OperatorTag::LaplaceBeltrami, &Form::zero(3)));
    }

    #[test]
    fn eigencheck_examples() {
        let c = Context::euclidean(2);
        let y_form = (&Form::dx(2, 0).mul_poly(&y(0)) + &Form::dx(2, 1).mul_poly(&y(1))).scale(&rat(1, 2));
        let r = c.oscillator_eigencheck(&y_form).unwrap();
        assert_eq!(r.eigenvalue, Some(1));
        assert!(r.anticoexact_verified && r.coexact_verified);

        let co = &Form::dx(2, 0).mul_poly(&y(0)) - &Form::dx(2, 1).mul_poly(&y(1));
        assert_eq!(c.oscillator_eigencheck(&co).unwrap().eigenvalue, Some(-1));

        let mixed = c.oscillator_eigencheck(&Form::dx(2, 0).mul_poly(&y(0))).unwrap();
        assert_eq!(mixed.eigenvalue, None);
        assert_eq!(&mixed.coexact + &mixed.anticoexact, Form::dx(2, 0).mul_poly(&y(0)));

        assert!(matches!(
            c.oscillator_eigencheck(&Form::scalar(y(0))),
            Err(Error::GradeOutOfRange { grade: 0, .. })
        ));
        assert!(matches!(
            c.oscillator_eigencheck(&Form::volume(2)),
            Err(Error::GradeOutOfRange { grade: 2, .. })
        ));
    }

    #[test]
    fn frame_formulas_match() {
        for c in [Context::euclidean(3), Context::lorentzian(3)] {
            let psi = &Form::basis(3, &[1, 2]).unwrap().mul_poly(&(&Poly::var(3, 0) * &Poly::var(3, 1)))
                + &Form::dx(3, 0).mul_poly(&(&Poly::var(3, 2) * &Poly::var(3, 2)));
            assert_eq!(c.frame_codifferential(&psi), c.delta(&psi));
            assert_eq!(c.frame_dirac(&psi), c.dirac(&psi));
        }
    }
}
