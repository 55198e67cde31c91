//! Field-equation pipelines built on the homotopy decompositions.
//!
//! Every solver returns a [`SolveReport`] whose residuals are recomputed
//! from the produced forms with the operator kernel; `success` means all of
//! them are exactly zero. Gauge freedom is always fixed to the zero choice
//! unless a side condition forces otherwise, and each choice is recorded in
//! `gauge_notes`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{Blade, Form};
use crate::homotopy::SpaceTag;
use crate::linsolve::LinearSystem;
use crate::polyring::{Context, Multidegree, Poly, Rational};

/// Extra linear constraint imposed jointly with a Laplace-type equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    /// `d beta = 0`
    Closed,
    /// `delta beta = 0`
    Coclosed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Lower bound on the coefficient degree of the unknowns; the default
    /// bound is `deg(rhs) + 2`.
    pub min_degree_bound: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub problem: String,
    pub outputs: Vec<(String, Form)>,
    pub residuals: Vec<(String, Form)>,
    pub gauge_notes: Vec<String>,
}

impl SolveReport {
    fn new(problem: &str) -> Self {
        SolveReport {
            problem: problem.to_string(),
            outputs: Vec::new(),
            residuals: Vec::new(),
            gauge_notes: Vec::new(),
        }
    }

    fn output_form(&mut self, name: &str, f: &Form) {
        self.outputs.push((name.to_string(), f.clone()));
    }

    fn residual_form(&mut self, name: &str, f: Form) {
        self.residuals.push((name.to_string(), f));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.gauge_notes.push(s.into());
    }

    pub fn success(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Names of nonzero residuals.
    pub fn failing(&self) -> Vec<String> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn output(&self, name: &str) -> Option<&Form> {
        self.outputs.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn residual(&self, name: &str) -> Option<&Form> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VacuumDiracClass {
    /// `alpha` and `beta` are both Hodge harmonic.
    GaugeCase,
    /// `d alpha` and `delta beta` are nonzero Hodge harmonic forms.
    NonGaugeCase,
    NotASolution,
}

impl fmt::Display for VacuumDiracClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VacuumDiracClass::GaugeCase => "gauge",
            VacuumDiracClass::NonGaugeCase => "non-gauge",
            VacuumDiracClass::NotASolution => "not-a-solution",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacuumDiracResult {
    pub class: VacuumDiracClass,
    pub residuals: Vec<(String, Form)>,
    /// Harmonicity checks backing the classification.
    pub checks: Vec<(String, bool)>,
}

impl VacuumDiracResult {
    pub fn failing(&self) -> Vec<String> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(n, _)| n.clone())
            .collect()
    }
}

type FormOp<'a> = Box<dyn Fn(&Form) -> Form + 'a>;

fn require_grade(omega: &Form, k: usize, what: &str) -> Result<()> {
    if omega.is_homogeneous_of(k) {
        Ok(())
    } else {
        Err(Error::GradeMismatch(format!(
            "{what} must be homogeneous of grade {k}, found grades {:?}",
            omega.grades()
        )))
    }
}

/// Solves the joint linear system `{ op_i(beta) = rhs_i }` for a grade-`grade`
/// form whose coefficients have total degree at most `bound`.
fn solve_form_system(ctx: &Context, grade: usize, bound: u32, equations: &[(FormOp<'_>, Form)]) -> Option<Form> {
    let n = ctx.dim();
    let monomials = Multidegree::all_up_to(n, bound);
    let columns: Vec<(Blade, Multidegree)> = Blade::of_grade(n, grade)
        .into_iter()
        .flat_map(|b| monomials.iter().map(move |m| (b, m.clone())))
        .collect();

    type RowKey = (usize, Blade, Multidegree);
    let mut rows: BTreeMap<RowKey, Vec<(usize, Rational)>> = BTreeMap::new();
    for (col, (blade, mono)) in columns.iter().enumerate() {
        let basis = Form::term(*blade, Poly::monomial(n, mono.clone(), Rational::from_integer(1.into())));
        for (eq, (op, _)) in equations.iter().enumerate() {
            for (b, p) in op(&basis).components() {
                for (m, c) in p.terms() {
                    rows.entry((eq, b, m.clone())).or_default().push((col, c.clone()));
                }
            }
        }
    }
    let mut rhs_map: BTreeMap<RowKey, Rational> = BTreeMap::new();
    for (eq, (_, rhs)) in equations.iter().enumerate() {
        for (b, p) in rhs.components() {
            for (m, c) in p.terms() {
                rhs_map.insert((eq, b, m.clone()), c.clone());
                rows.entry((eq, b, m.clone())).or_default();
            }
        }
    }

    let mut sys = LinearSystem::new(columns.len());
    for (key, coeffs) in rows {
        let rhs = rhs_map.remove(&key).unwrap_or_else(Rational::zero);
        sys.push_row(coeffs, rhs);
    }
    let x = sys.solve().ok()?;
    Some(Form::from_components(
        n,
        columns
            .into_iter()
            .zip(x)
            .map(|((b, m), c)| (b, Poly::monomial(n, m, c))),
    ))
}

fn side_op<'a>(ctx: &'a Context, cond: SideCondition) -> FormOp<'a> {
    match cond {
        SideCondition::Closed => Box::new(|f: &Form| f.d()),
        SideCondition::Coclosed => Box::new(move |f: &Form| ctx.delta(f)),
    }
}

fn degree_bound(rhs: &Form, opts: &SolveOptions) -> u32 {
    let base = rhs.degree().map_or(2, |d| d + 2);
    opts.min_degree_bound.map_or(base, |m| m.max(base))
}

fn side_label(side: &[SideCondition]) -> String {
    side.iter()
        .map(|s| match s {
            SideCondition::Closed => "d beta = 0",
            SideCondition::Coclosed => "delta beta = 0",
        })
        .collect::<Vec<_>>()
        .join(", ")
}

impl Context {
    /// Finds a grade-`grade` form `beta` with `laplace(beta) = rhs` and the
    /// requested side conditions, coefficient degree at most `deg(rhs) + 2`.
    pub fn laplace_solve(&self, rhs: &Form, grade: usize, side: &[SideCondition], opts: &SolveOptions) -> Result<Form> {
        rhs.check_ctx(self)?;
        if grade > self.dim() {
            return Err(Error::grade(grade, format!("exceeds dimension {}", self.dim())));
        }
        require_grade(rhs, grade, "laplace right-hand side")?;
        if rhs.is_zero() {
            return Ok(Form::zero(self.dim()));
        }
        let bound = degree_bound(rhs, opts);
        let mut eqs: Vec<(FormOp<'_>, Form)> = vec![(Box::new(|f: &Form| self.laplace_beltrami(f)), rhs.clone())];
        for &s in side {
            eqs.push((side_op(self, s), Form::zero(self.dim())));
        }
        solve_form_system(self, grade, bound, &eqs).ok_or_else(|| Error::InconsistentSystem {
            bound,
            what: format!("laplace(beta) = rhs at grade {grade} with [{}]", side_label(side)),
        })
    }

    /// Electric Maxwell system `dF = 0, delta F = j` for a conserved 1-form current.
    pub fn maxwell_solve(&self, j: &Form, opts: &SolveOptions) -> Result<SolveReport> {
        j.check_ctx(self)?;
        require_grade(j, 1, "current j")?;
        if !self.delta(j).is_zero() {
            return Err(Error::NotConserved("delta j != 0".into()));
        }
        let n = self.dim();
        let mut report = SolveReport::new("maxwell");
        let hj = self.cohomotopy(j);
        let alpha = if n >= 3 {
            report.note("alpha: exact part removed (d alpha = 0); free coefficients set to zero");
            self.laplace_solve(&hj.d(), 3, &[SideCondition::Closed], opts)?
        } else {
            report.note("alpha = 0: no 3-forms in this dimension");
            Form::zero(n)
        };
        let f = &self.delta(&alpha) + &hj;
        let a = self.homotopy(&f);
        report.note("f = 0 chosen in A = df + H(delta alpha + hj)");
        report.output_form("alpha", &alpha);
        report.output_form("F", &f);
        report.output_form("A", &a);
        report.residual_form("dF", f.d());
        report.residual_form("delta F - j", &self.delta(&f) - j);
        report.residual_form("dA - F", &a.d() - &f);
        Ok(report)
    }

    /// Magnetic-monopole variant `dF = j, delta F = 0` for a closed 3-form current.
    pub fn maxwell_solve_magnetic(&self, j: &Form, opts: &SolveOptions) -> Result<SolveReport> {
        j.check_ctx(self)?;
        require_grade(j, 3, "magnetic current j")?;
        if !j.d().is_zero() {
            return Err(Error::NotConserved("d j != 0".into()));
        }
        let mut report = SolveReport::new("maxwell-magnetic");
        let hj = self.homotopy(j);
        report.note("alpha: coexact gauge (delta alpha = 0); free coefficients set to zero");
        let alpha = self.laplace_solve(&self.delta(&hj), 1, &[SideCondition::Coclosed], opts)?;
        let f = &alpha.d() + &hj;
        let a = self.cohomotopy(&f);
        report.note("beta = 0 chosen in A = delta beta + h(d alpha + Hj)");
        report.output_form("alpha", &alpha);
        report.output_form("F", &f);
        report.output_form("A", &a);
        report.residual_form("delta F", self.delta(&f));
        report.residual_form("dF - j", &f.d() - j);
        report.residual_form("delta A - F", &self.delta(&a) - &f);
        Ok(report)
    }

    /// Kalb-Ramond system `dK = 0, delta K = J` for a conserved 2-form current,
    /// with field `B = HK`.
    ///
    /// Among the admissible `beta`, one making `B` coclosed is preferred when
    /// it exists within the degree bound (needed for the Maxwell coupling).
    pub fn kalb_ramond_solve(&self, big_j: &Form, opts: &SolveOptions) -> Result<SolveReport> {
        big_j.check_ctx(self)?;
        require_grade(big_j, 2, "current J")?;
        if !self.delta(big_j).is_zero() {
            return Err(Error::NotConserved("delta J != 0".into()));
        }
        let n = self.dim();
        let mut report = SolveReport::new("kalb-ramond");
        let hj = self.cohomotopy(big_j);
        let beta = if n >= 4 && !hj.d().is_zero() {
            let rhs = hj.d();
            let bound = degree_bound(&rhs, opts).max(hj.degree().map_or(0, |d| d + 1));
            let coupled: Vec<(FormOp<'_>, Form)> = vec![
                (Box::new(|f: &Form| self.laplace_beltrami(f)), rhs.clone()),
                (side_op(self, SideCondition::Closed), Form::zero(n)),
                (
                    Box::new(|f: &Form| self.delta(&self.homotopy(&self.delta(f)))),
                    -&self.delta(&self.homotopy(&hj)),
                ),
            ];
            match solve_form_system(self, 4, bound, &coupled) {
                Some(beta) => {
                    report.note("beta chosen so that B = HK is coclosed (Maxwell-coupling gauge); remaining free coefficients zero");
                    beta
                }
                None => {
                    report.note("no beta within the degree bound makes B coclosed; exact part removed (d beta = 0), free coefficients zero");
                    self.laplace_solve(&rhs, 4, &[SideCondition::Closed], opts)?
                }
            }
        } else {
            report.note("beta = 0: right-hand side dhJ vanishes or no 4-forms in this dimension");
            Form::zero(n)
        };
        let k = &self.delta(&beta) + &hj;
        let b = self.homotopy(&k);
        report.note("B = HK: antiexact representative, closed gauge forms set to zero");
        report.output_form("beta", &beta);
        report.output_form("K", &k);
        report.output_form("B", &b);
        report.residual_form("dK", k.d());
        report.residual_form("delta K - J", &self.delta(&k) - big_j);
        report.residual_form("dB - K", &b.d() - &k);
        Ok(report)
    }

    /// Checks the coupled system `R = B + F`, `DR = K - j`, `DK = -J` with
    /// `K = dR`, and `B` antiexact and coclosed.
    pub fn kr_maxwell_couple(&self, b: &Form, f: &Form, j: &Form, big_j: &Form) -> Result<SolveReport> {
        for x in [b, f, j, big_j] {
            x.check_ctx(self)?;
        }
        require_grade(b, 2, "B")?;
        require_grade(f, 2, "F")?;
        require_grade(j, 1, "j")?;
        require_grade(big_j, 2, "J")?;
        let r = b + f;
        let k = r.d();
        let mut report = SolveReport::new("kr-maxwell-couple");
        report.output_form("R", &r);
        report.output_form("K", &k);
        report.residual_form("DR - (K - j)", &self.dirac(&r) - &(&k - j));
        report.residual_form("DK + J", &self.dirac(&k) + big_j);
        report.residual_form("delta B", self.delta(b));
        report.residual_form("i_K B", self.k_interior(b));
        report.residual_form("B(x0)", b.at_center());
        let failing = report.failing();
        if failing.is_empty() {
            Ok(report)
        } else {
            Err(Error::NotASolution { failing })
        }
    }

    /// Massless Dirac equation with source: `delta alpha = 0`,
    /// `d alpha - delta beta = B`, `d beta = 0` for `B` of grade `0 < k < n`.
    pub fn dirac_source_solve(&self, source: &Form, approach: u8, opts: &SolveOptions) -> Result<SolveReport> {
        source.check_ctx(self)?;
        let n = self.dim();
        let k = match source.grades().as_slice() {
            [] => {
                let mut report = SolveReport::new("dirac-source");
                report.note("B = 0: alpha = 0, beta = 0");
                report.output_form("alpha", &Form::zero(n));
                report.output_form("beta", &Form::zero(n));
                self.dirac_source_residuals(&mut report, &Form::zero(n), &Form::zero(n), source);
                return Ok(report);
            }
            [k] => *k,
            gs => return Err(Error::GradeMismatch(format!("source must be homogeneous, found grades {gs:?}"))),
        };
        if k == 0 || k >= n {
            return Err(Error::grade(k, format!("source grade must satisfy 0 < k < {n}")));
        }
        let mut report = SolveReport::new("dirac-source");
        let (alpha, beta) = match approach {
            1 => {
                let beta = self.laplace_solve(&source.d(), k + 1, &[SideCondition::Closed], opts)?;
                let alpha0 = self.homotopy(&(&self.delta(&beta) + source));
                let rhs = self.delta(&alpha0);
                let alpha = if k >= 2 && !rhs.is_zero() {
                    let v = self.laplace_solve(&rhs, k - 2, &[SideCondition::Coclosed], opts)?;
                    report.note("v solves laplace(v) = delta H(delta beta + B), delta v = 0, so that delta alpha = 0");
                    report.output_form("v", &v);
                    &alpha0 + &v.d()
                } else {
                    report.note("v = 0 chosen in alpha = H(delta beta + B) + dv");
                    alpha0
                };
                (alpha, beta)
            }
            2 => {
                let alpha = self.laplace_solve(&-&self.delta(source), k - 1, &[SideCondition::Coclosed], opts)?;
                let beta0 = self.cohomotopy(&(&alpha.d() - source));
                let rhs = beta0.d();
                let beta = if k + 2 <= n && !rhs.is_zero() {
                    let w = self.laplace_solve(&rhs, k + 2, &[SideCondition::Closed], opts)?;
                    report.note("w solves laplace(w) = d h(d alpha - B), d w = 0, so that d beta = 0");
                    report.output_form("w", &w);
                    &beta0 + &self.delta(&w)
                } else {
                    report.note("w = 0 chosen in beta = h(d alpha - B) + delta w");
                    beta0
                };
                (alpha, beta)
            }
            other => {
                return Err(Error::InvalidContext(format!("approach must be 1 or 2, got {other}")));
            }
        };
        report.output_form("alpha", &alpha);
        report.output_form("beta", &beta);
        self.dirac_source_residuals(&mut report, &alpha, &beta, source);
        Ok(report)
    }

    fn dirac_source_residuals(&self, report: &mut SolveReport, alpha: &Form, beta: &Form, source: &Form) {
        report.residual_form("delta alpha", self.delta(alpha));
        report.residual_form("d beta", beta.d());
        report.residual_form("d alpha - delta beta - B", &(&alpha.d() - &self.delta(beta)) - source);
    }

    /// Classifies a candidate `psi = alpha + beta` of the vacuum Dirac system
    /// (`alpha` of grade `k - 1`, `beta` of grade `k + 1`).
    pub fn vacuum_dirac_classify(&self, alpha: &Form, beta: &Form, k: usize) -> Result<VacuumDiracResult> {
        alpha.check_ctx(self)?;
        beta.check_ctx(self)?;
        let n = self.dim();
        if k == 0 || k >= n {
            return Err(Error::GradeMismatch(format!("middle grade must satisfy 0 < k < {n}, got {k}")));
        }
        require_grade(alpha, k - 1, "alpha")?;
        require_grade(beta, k + 1, "beta")?;
        let d_alpha = alpha.d();
        let delta_beta = self.delta(beta);
        let residuals = vec![
            ("delta alpha".to_string(), self.delta(alpha)),
            ("d alpha - delta beta".to_string(), &d_alpha - &delta_beta),
            ("d beta".to_string(), beta.d()),
        ];
        let solves = residuals.iter().all(|(_, r)| r.is_zero());
        let (class, checks) = if !solves {
            (VacuumDiracClass::NotASolution, Vec::new())
        } else if d_alpha.is_zero() && delta_beta.is_zero() {
            let checks = vec![
                ("alpha harmonic".to_string(), self.is_member(alpha, SpaceTag::HodgeHarmonic)),
                ("beta harmonic".to_string(), self.is_member(beta, SpaceTag::HodgeHarmonic)),
            ];
            (VacuumDiracClass::GaugeCase, checks)
        } else {
            let checks = vec![
                ("d alpha harmonic".to_string(), self.is_member(&d_alpha, SpaceTag::HodgeHarmonic)),
                ("delta beta harmonic".to_string(), self.is_member(&delta_beta, SpaceTag::HodgeHarmonic)),
            ];
            (VacuumDiracClass::NonGaugeCase, checks)
        };
        Ok(VacuumDiracResult {
            class,
            residuals,
            checks,
        })
    }

    /// Residual check of the massive Dirac two-grade system and its integral
    /// form. Polynomial coefficients admit no nonzero solutions, so this is a
    /// verifier only.
    pub fn massive_dirac_check(&self, alpha: &Form, beta: &Form, v: &Form, w: &Form) -> Result<SolveReport> {
        for x in [alpha, beta, v, w] {
            x.check_ctx(self)?;
        }
        let n = self.dim();
        let k = match (alpha.grades().as_slice(), beta.grades().as_slice()) {
            ([k], _) => *k,
            ([], [kb]) if *kb > 0 => kb - 1,
            ([], []) => 1.min(n.saturating_sub(1)).max(1),
            _ => return Err(Error::GradeMismatch("alpha and beta must be homogeneous".into())),
        };
        if k == 0 || k + 1 > n {
            return Err(Error::GradeMismatch(format!("need 0 < k and k + 1 <= {n}, got k = {k}")));
        }
        require_grade(alpha, k, "alpha")?;
        require_grade(beta, k + 1, "beta")?;
        if !v.is_zero() {
            require_grade(v, k - 1, "v")?;
        }
        if !w.is_zero() {
            require_grade(w, k + 2, "w")?;
        }
        let mut report = SolveReport::new("massive-dirac");
        report.output_form("alpha", alpha);
        report.output_form("beta", beta);
        report.residual_form("delta alpha", self.delta(alpha));
        report.residual_form("delta beta - alpha", &self.delta(beta) - alpha);
        report.residual_form("d alpha + beta", &alpha.d() + beta);
        report.residual_form("d beta", beta.d());
        report.residual_form("alpha + H beta - dv", &(alpha + &self.homotopy(beta)) - &v.d());
        report.residual_form("beta - h alpha - delta w", &(beta - &self.cohomotopy(alpha)) - &self.delta(w));
        report.residual_form("laplace alpha - alpha", &self.laplace_beltrami(alpha) - alpha);
        report.residual_form("laplace beta - beta", &self.laplace_beltrami(beta) - beta);
        Ok(report)
    }
}
