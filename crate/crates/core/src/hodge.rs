//! Metric operators for a constant diagonal `±1` metric.
//!
//! Star convention: `*dx^I = (prod_{i in I} eps_i) sgn(I, I^c) dx^{I^c}`
//! with orientation `dx1^...^dxn`. This gives `a ^ *b = <a, b> vol` and
//! `** = (-1)^{r(n-r)} sig(g)` on grade `r`.

use crate::error::{Error, Result};
use crate::forms::{Blade, Form, VectorField};
use crate::polyring::{Context, Poly};

impl Context {
    /// Product of the signature entries over the axes of `blade`.
    pub fn blade_metric(&self, blade: Blade) -> i8 {
        blade.axes().map(|a| self.signature()[a]).product()
    }

    /// Index lowering: component `i` is multiplied by `eps_i`.
    pub fn flat(&self, v: &VectorField) -> Form {
        assert_eq!(v.dim(), self.dim(), "vector field dimension mismatch");
        Form::from_components(
            self.dim(),
            v.components().iter().enumerate().map(|(i, p)| {
                let p = if self.signature()[i] < 0 { -p } else { p.clone() };
                (Blade::single(i), p)
            }),
        )
    }

    /// Index raising; inverse of [`Context::flat`]. Only defined on 1-forms.
    pub fn sharp(&self, alpha: &Form) -> Result<VectorField> {
        alpha.check_ctx(self)?;
        if let Some(k) = alpha.grades().into_iter().find(|&k| k != 1) {
            return Err(Error::grade(k, "sharp is defined on 1-forms only"));
        }
        let n = self.dim();
        let comps = (0..n)
            .map(|i| {
                let p = alpha.component(Blade::single(i)).cloned().unwrap_or_else(|| Poly::zero(n));
                if self.signature()[i] < 0 {
                    -p
                } else {
                    p
                }
            })
            .collect();
        VectorField::new(comps)
    }

    /// Hodge star.
    pub fn star(&self, omega: &Form) -> Form {
        assert_eq!(omega.dim(), self.dim(), "form dimension mismatch");
        let n = self.dim();
        Form::from_components(
            n,
            omega.components().map(|(b, p)| {
                let comp = b.complement(n);
                let sign = self.blade_metric(b) * b.wedge_sign(comp).expect("disjoint");
                (comp, if sign < 0 { -p } else { p.clone() })
            }),
        )
    }

    /// Inverse Hodge star, `(-1)^{r(n-r)} sig(g) *` gradewise.
    pub fn star_inv(&self, omega: &Form) -> Form {
        assert_eq!(omega.dim(), self.dim(), "form dimension mismatch");
        let n = self.dim();
        let starred = self.star(omega);
        // r(n - r) is symmetric under r -> n - r, so the output grade may be used
        starred.map_coeffs_by_blade(|b, p| {
            let r = b.grade();
            let sign = if (r * (n - r)) % 2 == 1 { -self.sig() } else { self.sig() };
            if sign < 0 {
                -p
            } else {
                p.clone()
            }
        })
    }

    /// Codifferential, the literal composite `*^{-1} d * eta`.
    pub fn codifferential(&self, omega: &Form) -> Form {
        self.star_inv(&self.star(&omega.eta()).d())
    }

    /// Shorthand for [`Context::codifferential`].
    pub fn delta(&self, omega: &Form) -> Form {
        self.codifferential(omega)
    }
}

impl Form {
    pub(crate) fn map_coeffs_by_blade(&self, mut f: impl FnMut(Blade, &Poly) -> Poly) -> Form {
        Form::from_components(self.dim(), self.components().map(|(b, p)| (b, f(b, p))))
    }
}
