//! Randomized exact identity suite.
//!
//! For every dimension, signature and grade, seeded random forms are pushed
//! through the operator identities and each identity is checked with exact
//! equality. The rendered report depends only on the configuration.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exec::{map_indexed, Execution};
use crate::forms::Form;
use crate::homotopy::{DecompositionMode, SpaceTag};
use crate::polyring::Context;
use crate::sampling::{random_constant_vector, random_form, random_poly, sample_rng, SampleRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MetricKind {
    Euclidean,
    Lorentzian,
}

impl MetricKind {
    pub fn context(self, n: usize) -> Context {
        match self {
            MetricKind::Euclidean => Context::euclidean(n),
            MetricKind::Lorentzian => Context::lorentzian(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub metrics: Vec<MetricKind>,
    /// Samples per (dimension, metric, grade).
    pub samples: usize,
    pub max_degree: u32,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            dims: vec![1, 2, 3, 4],
            metrics: vec![MetricKind::Euclidean, MetricKind::Lorentzian],
            samples: 100,
            max_degree: 3,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// Outcome of one identity over all grades of one (dimension, metric).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityTally {
    pub identity: &'static str,
    pub dim: usize,
    pub metric: String,
    pub checked: usize,
    /// `(grade, sample index)` of each failing sample.
    pub failures: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: u32,
    pub tallies: Vec<IdentityTally>,
}

impl SuiteReport {
    pub fn total_checks(&self) -> usize {
        self.tallies.iter().map(|t| t.checked).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.tallies.iter().map(|t| t.failures.len()).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn tally(&self, identity: &str, dim: usize, metric: &str) -> Option<&IdentityTally> {
        self.tallies
            .iter()
            .find(|t| t.identity == identity && t.dim == dim && t.metric == metric)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "identity suite: seed={} samples={} max-degree={}",
            self.seed, self.samples, self.max_degree
        );
        let mut current = None;
        for t in &self.tallies {
            if current != Some((t.dim, &t.metric)) {
                let _ = writeln!(out, "n={} metric={}", t.dim, t.metric);
                current = Some((t.dim, &t.metric));
            }
            let status = if t.failures.is_empty() { "ok  " } else { "FAIL" };
            let _ = write!(out, "  {status} {:<34} {}/{}", t.identity, t.checked - t.failures.len(), t.checked);
            if let Some((g, i)) = t.failures.first() {
                let _ = write!(out, "  first failure: grade {g} sample {i}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "summary: {} checks, {} failed", self.total_checks(), self.total_failures());
        out
    }
}

/// Names of all identities, in report order.
pub const IDENTITIES: &[&str] = &[
    "d d = 0",
    "delta delta = 0",
    "H H = 0",
    "H d H = H",
    "d H d = d",
    "i_K H = 0",
    "H i_K = 0",
    "dH + Hd = I - s*",
    "h h = 0",
    "delta h delta = delta",
    "h delta h = h",
    "delta h + h delta = I - S",
    "K_flat ^ h = 0",
    "h (K_flat ^) = 0",
    "h = (-1)^(r+1) *^-1 H *",
    "i_(a#) *phi = *(phi ^ a)",
    "** = (-1)^(r(n-r)) sig",
    "*^-1 * = * *^-1 = I",
    "*^-1 = sig eta^(n-1) * = sig * eta^(n-1)",
    "(dH)^2 = dH, (Hd)^2 = Hd",
    "(delta h)^2 = delta h, (h delta)^2 = h delta",
    "exact/antiexact split",
    "coexact/anticoexact split",
    "E cap A = 0, C cap Y = 0",
    "closed -> * coclosed",
    "antiexact -> * anticoexact",
    "anticoexact = K_flat ^ alpha",
    "Y is a module",
    "K_flat ^ w in Y, i_K w in A",
    "v v psi = g(v,v) psi",
    "D D = laplace",
    "hbar eigenvalues -1, +1",
];

fn eta_pow(w: &Form, p: usize) -> Form {
    if p % 2 == 0 {
        w.clone()
    } else {
        w.eta()
    }
}

fn sign_scale(w: &Form, negative: bool) -> Form {
    if negative {
        -w
    } else {
        w.clone()
    }
}

/// Evaluates every identity on one homogeneous sample, in [`IDENTITIES`] order.
fn check_sample(ctx: &Context, w: &Form, r: usize, rng: &mut SampleRng, max_degree: u32) -> Vec<bool> {
    let n = ctx.dim();
    let d = |f: &Form| f.d();
    let delta = |f: &Form| ctx.delta(f);
    let big_h = |f: &Form| ctx.homotopy(f);
    let h = |f: &Form| ctx.cohomotopy(f);
    let zero = |f: Form| f.is_zero();

    let hw = big_h(w);
    let dw = d(w);
    let coh = h(w);
    let delw = delta(w);
    let s_star = ctx.center_pullback(w);
    let s_top = ctx.center_top_eval(w);

    let alpha = random_form(rng, n, 1, max_degree.min(2));
    let f0 = random_poly(rng, n, 1, 2);
    let v = random_constant_vector(rng, n);

    let star = |f: &Form| ctx.star(f);
    let star_inv = |f: &Form| ctx.star_inv(f);
    let sig_neg = ctx.sig() < 0;

    let ex = ctx.decompose(w, DecompositionMode::ExactAntiexact);
    let co = ctx.decompose(w, DecompositionMode::CoexactAnticoexact);
    let member = |f: &Form, t| ctx.is_member(f, t);

    let clifford_ok = {
        let g: crate::polyring::Rational = v
            .components()
            .iter()
            .zip(ctx.signature())
            .map(|(c, &s)| {
                let c = c.constant_term();
                if s < 0 {
                    -(&c * &c)
                } else {
                    &c * &c
                }
            })
            .sum();
        let once = ctx.clifford_vec_mul(&v, w).expect("same dimension");
        ctx.clifford_vec_mul(&v, &once).expect("same dimension") == w.scale(&g)
    };

    let osc_ok = {
        let c_part = delta(&coh);
        let y_part = h(&delw);
        ctx.oscillator_hbar(&c_part) == -&c_part && ctx.oscillator_hbar(&y_part) == y_part
    };

    vec![
        zero(d(&dw)),
        zero(delta(&delw)),
        zero(big_h(&hw)),
        big_h(&d(&hw)) == hw,
        d(&big_h(&dw)) == dw,
        zero(ctx.k_interior(&hw)),
        zero(big_h(&ctx.k_interior(w))),
        &d(&hw) + &big_h(&dw) == w - &s_star,
        zero(h(&coh)),
        delta(&h(&delw)) == delw,
        h(&delta(&coh)) == coh,
        &delta(&coh) + &h(&delw) == w - &s_top,
        zero(ctx.k_wedge(&coh)),
        zero(h(&ctx.k_wedge(w))),
        coh == sign_scale(&star_inv(&big_h(&star(w))), r % 2 == 0),
        {
            let a_sharp = ctx.sharp(&alpha).expect("1-form");
            star(w).interior(&a_sharp).expect("same dimension") == star(&w.wedge(&alpha).expect("same dimension"))
        },
        star(&star(w)) == sign_scale(w, ((r * (n - r)) % 2 == 1) != sig_neg),
        star_inv(&star(w)) == *w && star(&star_inv(w)) == *w,
        {
            let si = star_inv(w);
            si == sign_scale(&eta_pow(&star(w), n - 1), sig_neg) && si == sign_scale(&star(&eta_pow(w, n - 1)), sig_neg)
        },
        {
            let dh = d(&hw);
            let hd = big_h(&dw);
            d(&big_h(&dh)) == dh && big_h(&d(&hd)) == hd
        },
        {
            let dh = delta(&coh);
            let hd = h(&delw);
            delta(&h(&dh)) == dh && h(&delta(&hd)) == hd
        },
        &ex.first + &ex.second == *w && member(&ex.first, SpaceTag::Exact) && member(&ex.second, SpaceTag::Antiexact),
        &co.first + &co.second == *w
            && member(&co.first, SpaceTag::Coexact)
            && member(&co.second, SpaceTag::Anticoexact),
        [(SpaceTag::Exact, SpaceTag::Antiexact), (SpaceTag::Coexact, SpaceTag::Anticoexact)]
            .iter()
            .all(|&(a, b)| [w, &ex.first, &ex.second, &co.first, &co.second].iter().all(|f| !(member(f, a) && member(f, b)) || f.is_zero())),
        member(&star(&dw), SpaceTag::Coexact) && (!member(w, SpaceTag::Exact) || member(&star(w), SpaceTag::Coexact)),
        member(&star(&hw), SpaceTag::Anticoexact)
            && (!member(w, SpaceTag::Antiexact) || member(&star(w), SpaceTag::Anticoexact)),
        ctx.k_wedge(&ctx.anticoexact_factor(&co.second)) == co.second,
        {
            let y_part = &co.second;
            let y2 = &h(&delta(&alpha));
            member(&y_part.mul_poly(&f0), SpaceTag::Anticoexact)
                && member(&y_part.wedge(y2).expect("same dimension"), SpaceTag::Anticoexact)
        },
        member(&ctx.k_wedge(w), SpaceTag::Anticoexact) && member(&ctx.k_interior(w), SpaceTag::Antiexact),
        clifford_ok,
        ctx.dirac(&ctx.dirac(w)) == ctx.laplace_beltrami(w),
        osc_ok,
    ]
}

fn stream_id(dim_idx: usize, metric_idx: usize, grade: usize, sample: usize) -> u64 {
    ((((dim_idx as u64) * 4 + metric_idx as u64) * 32 + grade as u64) << 32) | sample as u64
}

pub fn run_identity_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut tallies = Vec::new();
    for (di, &n) in cfg.dims.iter().enumerate() {
        for (mi, &kind) in cfg.metrics.iter().enumerate() {
            let ctx = kind.context(n);
            let jobs: Vec<(usize, usize)> = (0..=n).flat_map(|r| (0..cfg.samples).map(move |i| (r, i))).collect();
            let results = map_indexed(jobs.len(), cfg.exec, |j| {
                let (r, i) = jobs[j];
                let mut rng = sample_rng(cfg.seed, stream_id(di, mi, r, i));
                let w = random_form(&mut rng, n, r, cfg.max_degree);
                check_sample(&ctx, &w, r, &mut rng, cfg.max_degree)
            });
            for (k, name) in IDENTITIES.iter().enumerate() {
                let failures = jobs
                    .iter()
                    .zip(&results)
                    .filter(|(_, res)| !res[k])
                    .map(|(&(r, i), _)| (r, i))
                    .collect();
                tallies.push(IdentityTally {
                    identity: name,
                    dim: n,
                    metric: ctx.metric_string(),
                    checked: jobs.len(),
                    failures,
                });
            }
        }
    }
    SuiteReport {
        seed: cfg.seed,
        samples: cfg.samples,
        max_degree: cfg.max_degree,
        tallies,
    }
}
