//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary so the summary is always printed; exits nonzero
//! if any criterion fails.

mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use axc_core::io::{form_from_json, form_to_json, format_form, parse_form};
use axc_core::polyring::{int, rat};
use axc_core::sampling::{random_form, random_mixed_form, random_point, random_poly, random_rational, sample_rng};
use axc_core::suite::{run_identity_suite, SuiteConfig};
use axc_core::{
    Blade, Context, DecompositionMode, Form, Poly, SideCondition, SolveOptions, SpaceTag, VacuumDiracClass,
};

use oracle::{frame_delta, frame_wave, gauss_legendre_unit, harmonic_pair_poly, homotopy_by_quadrature};

const IDENTITY_SEED: u64 = 42;
const IDENTITY_TIME_LIMIT: Duration = Duration::from_secs(60);
const SAMPLES: usize = 100;
const QUADRATURE_NODES: usize = 64;
const QUADRATURE_REL_TOL: f64 = 1e-9;
/// Allowed absolute deviation when the exact value is zero.
const QUADRATURE_ZERO_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn contexts(dims: std::ops::RangeInclusive<usize>) -> Vec<Context> {
    dims.flat_map(|n| [Context::euclidean(n), Context::lorentzian(n)]).collect()
}

fn label(ctx: &Context) -> String {
    format!("n={} metric={}", ctx.dim(), ctx.metric_string())
}

fn criterion_1() -> Outcome {
    let cfg = SuiteConfig {
        seed: IDENTITY_SEED,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let report = run_identity_suite(&cfg);
    let elapsed = start.elapsed();
    ensure!(report.all_passed(), "{} failures\n{}", report.total_failures(), report.render());
    ensure!(elapsed < IDENTITY_TIME_LIMIT, "took {elapsed:?}");
    let min_per_grade = report.tallies.iter().map(|t| t.checked / (t.dim + 1)).min().unwrap_or(0);
    ensure!(min_per_grade >= SAMPLES, "only {min_per_grade} samples per grade");
    Ok(format!(
        "{} exact checks, {} identities, {:.1}s",
        report.total_checks(),
        axc_core::suite::IDENTITIES.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for (ci, ctx) in contexts(1..=4).iter().enumerate() {
        let n = ctx.dim();
        for k in 0..=n {
            for i in 0..SAMPLES {
                let mut rng = sample_rng(2, ((ci * 8 + k) as u64) << 32 | i as u64);
                let w = random_form(&mut rng, n, k, 3);
                let ex = ctx.decompose(&w, DecompositionMode::ExactAntiexact);
                let co = ctx.decompose(&w, DecompositionMode::CoexactAnticoexact);
                let tag = || format!("{} grade {k} sample {i}", label(ctx));
                ensure!(&ex.first + &ex.second == w, "exact split does not reassemble: {}", tag());
                ensure!(&co.first + &co.second == w, "coexact split does not reassemble: {}", tag());
                // membership through independent formulas: d, frame delta, i_K, K_flat ^
                ensure!(ex.first.d().is_zero(), "exact part not closed: {}", tag());
                ensure!(ctx.is_member(&ex.second, SpaceTag::Antiexact), "antiexact part fails: {}", tag());
                ensure!(frame_delta(ctx, &co.first).is_zero(), "coexact part not coclosed: {}", tag());
                ensure!(ctx.is_member(&co.second, SpaceTag::Anticoexact), "anticoexact part fails: {}", tag());
                let dh = ctx.delta(&ctx.cohomotopy(&w));
                let hd = ctx.cohomotopy(&ctx.delta(&w));
                ensure!(ctx.delta(&ctx.cohomotopy(&dh)) == dh, "(delta h)^2 != delta h: {}", tag());
                ensure!(ctx.cohomotopy(&ctx.delta(&hd)) == hd, "(h delta)^2 != h delta: {}", tag());
                for f in [&w, &ex.first, &ex.second, &co.first, &co.second] {
                    let both_ea = ctx.is_member(f, SpaceTag::Exact) && ctx.is_member(f, SpaceTag::Antiexact);
                    let both_cy = ctx.is_member(f, SpaceTag::Coexact) && ctx.is_member(f, SpaceTag::Anticoexact);
                    ensure!(!(both_ea || both_cy) || f.is_zero(), "nonzero form in an intersection: {}", tag());
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} forms, both splits, projectors, intersections"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (ci, ctx) in contexts(1..=4).iter().enumerate() {
        let n = ctx.dim();
        for k in 0..=n {
            for i in 0..SAMPLES {
                let mut rng = sample_rng(3, ((ci * 8 + k) as u64) << 32 | i as u64);
                let closed = if k == 0 {
                    Form::constant(n, random_rational(&mut rng))
                } else {
                    random_form(&mut rng, n, k - 1, 3).d()
                };
                ensure!(closed.d().is_zero(), "generator bug");
                let s = ctx.star(&closed);
                ensure!(s.is_homogeneous_of(n - k) || s.is_zero(), "star changed grade wrongly");
                ensure!(frame_delta(ctx, &s).is_zero(), "*closed not coclosed: {} k={k} sample {i}", label(ctx));
                if k < n {
                    let anti = ctx.homotopy(&random_form(&mut rng, n, k + 1, 3));
                    ensure!(ctx.is_member(&anti, SpaceTag::Antiexact), "generator bug");
                    ensure!(
                        ctx.is_member(&ctx.star(&anti), SpaceTag::Anticoexact),
                        "*antiexact not anticoexact: {} k={k} sample {i}",
                        label(ctx)
                    );
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, k, sample) cases; antiexact top forms are only 0"))
}

fn check_maxwell_residuals(ctx: &Context, j: &Form, f: &Form, a: &Form) -> Result<(), String> {
    ensure!(f.d().is_zero(), "dF != 0");
    ensure!(&frame_delta(ctx, f) - j == Form::zero(ctx.dim()), "delta F != j");
    ensure!(a.d() == *f, "dA != F");
    Ok(())
}

fn criterion_4() -> Outcome {
    let ctx = Context::euclidean(2);
    let y1 = Poly::var(2, 0);
    let y2 = Poly::var(2, 1);
    let j = Form::dx(2, 1);
    let report = ctx.maxwell_solve(&j, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let f_expected = -&Form::basis(2, &[0, 1]).unwrap().mul_poly(&y1);
    let a_expected = (&Form::dx(2, 0).mul_poly(&(&y1 * &y2)) - &Form::dx(2, 1).mul_poly(&(&y1 * &y1))).scale(&rat(1, 3));
    let f = report.output("F").unwrap();
    let a = report.output("A").unwrap();
    ensure!(*f == f_expected, "F = {f:?}");
    ensure!(*a == a_expected, "A = {a:?}");
    check_maxwell_residuals(&ctx, &j, f, a)?;
    ensure!(report.success(), "report residuals {:?}", report.failing());

    let mink = Context::lorentzian(4);
    for i in 0..SAMPLES {
        let mut rng = sample_rng(4, i as u64);
        let j = mink.delta(&random_form(&mut rng, 4, 2, 3));
        let report = mink
            .maxwell_solve(&j, &SolveOptions::default())
            .map_err(|e| format!("sample {i}: {e}"))?;
        check_maxwell_residuals(&mink, &j, report.output("F").unwrap(), report.output("A").unwrap())
            .map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(report.success(), "sample {i}: {:?}", report.failing());
    }
    Ok(format!("desk example exact; {SAMPLES} Minkowski currents with zero residuals"))
}

fn criterion_5() -> Outcome {
    let mink = Context::lorentzian(4);
    for i in 0..SAMPLES {
        let mut rng = sample_rng(5, i as u64);
        let big_j = mink.delta(&random_form(&mut rng, 4, 3, 3));
        let r = mink
            .kalb_ramond_solve(&big_j, &SolveOptions::default())
            .map_err(|e| format!("sample {i}: {e}"))?;
        let (k, b) = (r.output("K").unwrap(), r.output("B").unwrap());
        ensure!(k.d().is_zero(), "sample {i}: dK != 0");
        ensure!(frame_delta(&mink, k) == big_j, "sample {i}: delta K != J");
        ensure!(b.d() == *k, "sample {i}: dB != K");
        ensure!(r.success(), "sample {i}: {:?}", r.failing());
    }

    // coupled instances: J = delta d B0 with B0 = *(K_flat ^ df) antiexact and coclosed
    let couplings = 20;
    for i in 0..couplings {
        let mut rng = sample_rng(55, i as u64);
        let f0 = Form::scalar(random_poly(&mut rng, 4, 3, 3));
        let b0 = mink.star(&mink.k_wedge(&f0.d()));
        ensure!(mink.is_member(&b0, SpaceTag::Antiexact), "coupling {i}: B0 not antiexact");
        ensure!(frame_delta(&mink, &b0).is_zero(), "coupling {i}: B0 not coclosed");
        let big_j = frame_delta(&mink, &b0.d());
        let kr = mink
            .kalb_ramond_solve(&big_j, &SolveOptions::default())
            .map_err(|e| format!("coupling {i}: {e}"))?;
        let b = kr.output("B").unwrap();
        let j = mink.delta(&random_form(&mut rng, 4, 2, 3));
        let mx = mink
            .maxwell_solve(&j, &SolveOptions::default())
            .map_err(|e| format!("coupling {i}: {e}"))?;
        let f = mx.output("F").unwrap();
        let coupled = mink
            .kr_maxwell_couple(b, f, &j, &big_j)
            .map_err(|e| format!("coupling {i}: {e}"))?;
        // recompute D R = K - j and D K = -J with the frame codifferential
        let r_form = b + f;
        let k = r_form.d();
        let dirac = |x: &Form| &x.d() - &frame_delta(&mink, x);
        ensure!(dirac(&r_form) == &k - &j, "coupling {i}: DR != K - j");
        ensure!(dirac(&k) == -&big_j, "coupling {i}: DK != -J");
        ensure!(coupled.success(), "coupling {i}");
    }
    Ok(format!("{SAMPLES} Minkowski currents; {couplings} coupled KR-Maxwell instances"))
}

/// A Hodge-harmonic form of grade `p`: constant part plus `du ^ dx^J` with
/// `u(y_a, y_b)` a wave polynomial and `J` disjoint from `{a, b}`.
fn harmonic_form(ctx: &Context, p: usize, rng: &mut axc_core::sampling::SampleRng) -> Form {
    use rand::Rng;
    let n = ctx.dim();
    let blades = Blade::of_grade(n, p);
    let mut out = Form::zero(n);
    for b in &blades {
        if rng.random_bool(0.5) {
            out = &out + &Form::term(*b, Poly::constant(n, random_rational(rng)));
        }
    }
    if p >= 1 && p + 1 <= n {
        let a = rng.random_range(0..n);
        let b = (a + 1 + rng.random_range(0..n - 1)) % n;
        let rest: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
        let mut chosen: Vec<usize> = rand::seq::index::sample(rng, rest.len(), p - 1)
            .into_iter()
            .map(|i| rest[i])
            .collect();
        chosen.sort_unstable();
        let u = harmonic_pair_poly(ctx, a, b, rng.random_range(1..=3)).scale(&random_rational(rng));
        assert!(frame_wave(ctx, &u).is_zero(), "wave polynomial generator");
        let basis = Form::basis(n, &chosen).unwrap();
        out = &out + &Form::scalar(u).d().wedge(&basis).unwrap();
    }
    out
}

fn criterion_6() -> Outcome {
    let opts = SolveOptions::default();
    let mut counts = [0usize; 4];
    for (ci, ctx) in contexts(2..=4).iter().enumerate() {
        let n = ctx.dim();
        for k in 1..n {
            for i in 0..20u64 {
                let mut rng = sample_rng(6, ((ci * 8 + k) as u64) << 32 | i);
                let tag = format!("{} k={k} sample {i}", label(ctx));

                // gauge case: harmonic alpha, beta
                let alpha = harmonic_form(ctx, k - 1, &mut rng);
                let beta = harmonic_form(ctx, k + 1, &mut rng);
                for x in [&alpha, &beta] {
                    ensure!(x.d().is_zero() && frame_delta(ctx, x).is_zero(), "generator not harmonic: {tag}");
                }
                let res = ctx.vacuum_dirac_classify(&alpha, &beta, k).map_err(|e| e.to_string())?;
                ensure!(res.class == VacuumDiracClass::GaugeCase, "expected gauge case: {tag}");
                counts[0] += 1;

                // non-gauge case: d alpha = delta beta = gamma, gamma harmonic and nonzero
                let mut gamma = harmonic_form(ctx, k, &mut rng);
                if gamma.is_zero() {
                    gamma = Form::term(Blade::of_grade(n, k)[0], Poly::one(n));
                }
                let h_gamma = ctx.homotopy(&gamma);
                let alpha = if k >= 2 {
                    let v = ctx
                        .laplace_solve(&ctx.delta(&h_gamma), k - 2, &[SideCondition::Coclosed], &opts)
                        .map_err(|e| format!("{tag}: {e}"))?;
                    &h_gamma + &v.d()
                } else {
                    h_gamma
                };
                let c_gamma = ctx.cohomotopy(&gamma);
                let beta = if k + 2 <= n {
                    let w = ctx
                        .laplace_solve(&c_gamma.d(), k + 2, &[SideCondition::Closed], &opts)
                        .map_err(|e| format!("{tag}: {e}"))?;
                    &c_gamma + &ctx.delta(&w)
                } else {
                    c_gamma
                };
                ensure!(frame_delta(ctx, &alpha).is_zero(), "construction: delta alpha != 0: {tag}");
                ensure!(beta.d().is_zero(), "construction: d beta != 0: {tag}");
                ensure!(alpha.d() == gamma && frame_delta(ctx, &beta) == gamma, "construction: {tag}");
                let res = ctx.vacuum_dirac_classify(&alpha, &beta, k).map_err(|e| e.to_string())?;
                ensure!(res.class == VacuumDiracClass::NonGaugeCase, "expected non-gauge case: {tag}");
                ensure!(res.checks.iter().all(|(_, ok)| *ok), "harmonicity not verified: {tag}");
                counts[1] += 1;

                // massless source, solvable by construction: B = d a0 - delta b0
                let a0 = ctx.delta(&random_form(&mut rng, n, k, 2));
                let b0 = random_form(&mut rng, n, k, 2).d();
                let source = &a0.d() - &ctx.delta(&b0);
                let mut psi = Vec::new();
                for approach in [1u8, 2] {
                    let r = ctx
                        .dirac_source_solve(&source, approach, &opts)
                        .map_err(|e| format!("{tag} approach {approach}: {e}"))?;
                    let (a, b) = (r.output("alpha").unwrap().clone(), r.output("beta").unwrap().clone());
                    ensure!(frame_delta(ctx, &a).is_zero(), "approach {approach}: delta alpha != 0: {tag}");
                    ensure!(b.d().is_zero(), "approach {approach}: d beta != 0: {tag}");
                    ensure!(&a.d() - &frame_delta(ctx, &b) == source, "approach {approach}: source: {tag}");
                    psi.push((a, b));
                }
                let (da, db) = (&psi[0].0 - &psi[1].0, &psi[0].1 - &psi[1].1);
                ensure!(
                    frame_delta(ctx, &da).is_zero() && db.d().is_zero() && da.d() == frame_delta(ctx, &db),
                    "difference of approaches is not a vacuum solution: {tag}"
                );
                let diff = ctx.vacuum_dirac_classify(&da, &db, k).map_err(|e| e.to_string())?;
                ensure!(diff.class != VacuumDiracClass::NotASolution, "classifier rejects difference: {tag}");
                counts[2] += 1;

                // massive verifier
                let z = Form::zero(n);
                ensure!(ctx.massive_dirac_check(&z, &z, &z, &z).map_err(|e| e.to_string())?.success(), "zero rejected");
                let a = random_form(&mut rng, n, k, 3);
                let r = ctx.massive_dirac_check(&a, &z, &z, &z).map_err(|e| e.to_string())?;
                ensure!(!r.success() && r.residual("delta beta - alpha") == Some(&-&a), "single grade: {tag}");
                ensure!(r.failing().iter().any(|f| f == "laplace alpha - alpha"), "eigen-equation not reported: {tag}");
                let b = random_form(&mut rng, n, k + 1, 3);
                let r = ctx.massive_dirac_check(&a, &b, &z, &z).map_err(|e| e.to_string())?;
                ensure!(!r.success(), "nonzero pair accepted: {tag}");
                ensure!(
                    r.failing().iter().any(|f| f.starts_with("laplace")),
                    "eigen-equation not reported: {tag}"
                );
                counts[3] += 1;
            }
        }
    }
    Ok(format!(
        "gauge {}, non-gauge {}, source (both approaches) {}, massive {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for (ci, ctx) in contexts(2..=4).iter().enumerate() {
        let n = ctx.dim();
        for r in 1..n {
            for i in 0..SAMPLES {
                let mut rng = sample_rng(7, ((ci * 8 + r) as u64) << 32 | i as u64);
                let w = random_form(&mut rng, n, r, 3);
                let rep = ctx.oscillator_eigencheck(&w).map_err(|e| e.to_string())?;
                // hbar rebuilt from the frame codifferential
                let hbar = |x: &Form| &ctx.cohomotopy(&frame_delta(ctx, x)) - &frame_delta(ctx, &ctx.cohomotopy(x));
                let tag = format!("{} r={r} sample {i}", label(ctx));
                ensure!(hbar(&rep.anticoexact) == rep.anticoexact, "hbar w_ac != +w_ac: {tag}");
                ensure!(hbar(&rep.coexact) == -&rep.coexact, "hbar w_c != -w_c: {tag}");
                ensure!(&rep.coexact + &rep.anticoexact == w, "parts do not reassemble: {tag}");
                ensure!(rep.coexact_verified && rep.anticoexact_verified, "report not verified: {tag}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} forms, eigenvalues +1 and -1 exact"))
}

fn criterion_8() -> Outcome {
    use num_traits::ToPrimitive;
    let rule = gauss_legendre_unit(QUADRATURE_NODES);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for i in 0..20u64 {
        let mut rng = sample_rng(8, i);
        let center = random_point(&mut rng, 3);
        let ctx = Context::euclidean(3).with_center(center.clone()).map_err(|e| e.to_string())?;
        let w = random_mixed_form(&mut rng, 3, 3);
        let exact = ctx.homotopy(&w);
        for _ in 0..10 {
            let y = random_point(&mut rng, 3);
            let x: Vec<_> = y.iter().zip(&center).map(|(a, b)| a + b).collect();
            let at_x = exact.eval_at(&ctx, &x, true).map_err(|e| e.to_string())?;
            let yf: Vec<f64> = y.iter().map(|v| v.to_f64().unwrap()).collect();
            let quad = homotopy_by_quadrature(&w, &yf, &rule);
            let mut blades: Vec<Blade> = quad.iter().map(|(b, _)| *b).collect();
            blades.extend(at_x.components().map(|(b, _)| b));
            blades.sort();
            blades.dedup();
            for b in blades {
                let e = at_x.component(b).map_or(0.0, |p| p.constant_term().to_f64().unwrap());
                let q = quad.iter().find(|(qb, _)| *qb == b).map_or(0.0, |(_, v)| *v);
                if e == 0.0 {
                    ensure!(q.abs() <= QUADRATURE_ZERO_TOL, "form {i}: exact 0, quadrature {q}");
                } else {
                    let rel = (q - e).abs() / e.abs();
                    worst = worst.max(rel);
                    ensure!(rel <= QUADRATURE_REL_TOL, "form {i}: exact {e}, quadrature {q}, rel {rel:e}");
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} coefficients, worst relative error {worst:.1e}"))
}

fn no_floats(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_i64() || n.is_u64(),
        serde_json::Value::Array(a) => a.iter().all(no_floats),
        serde_json::Value::Object(o) => o.values().all(no_floats),
        _ => true,
    }
}

fn criterion_9() -> Outcome {
    for i in 0..500u64 {
        let mut rng = sample_rng(9, i);
        use rand::Rng;
        let n = rng.random_range(1..=4);
        let signature = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        let center = if rng.random_bool(0.5) {
            vec![int(0); n]
        } else {
            random_point(&mut rng, n)
        };
        let ctx = Context::new(center, signature).map_err(|e| e.to_string())?;
        let w = random_mixed_form(&mut rng, n, 3);
        let text = format_form(&w, &ctx);
        let back = parse_form(&text, &ctx).map_err(|e| format!("sample {i}: {e} in `{text}`"))?;
        ensure!(back == w, "sample {i}: text round trip changed the form: `{text}`");
        ensure!(format_form(&back, &ctx) == text, "sample {i}: print is not a fixed point");
        let json = form_to_json(&w, &ctx);
        let (ctx2, back) = form_from_json(&json).map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(ctx2 == ctx && back == w, "sample {i}: JSON round trip changed the form");
        ensure!(form_to_json(&back, &ctx2) == json, "sample {i}: JSON print is not a fixed point");
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        ensure!(no_floats(&value), "sample {i}: floating-point token in JSON");
    }
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_axc"))
            .args(["identities", "--seed", "42"])
            .output()
            .expect("spawn axc")
    };
    let (a, b) = (run(), run());
    ensure!(a.status.success() && b.status.success(), "identities exited with {:?}", a.status);
    ensure!(a.stdout == b.stdout, "identities output differs between runs");
    ensure!(!a.stdout.is_empty(), "identities printed nothing");
    Ok(format!("500 forms round-trip in text and JSON; identities --seed 42 stable ({} bytes)", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("identity suite", criterion_1),
        ("direct sums", criterion_2),
        ("duality", criterion_3),
        ("maxwell", criterion_4),
        ("kalb-ramond", criterion_5),
        ("dirac", criterion_6),
        ("oscillator", criterion_7),
        ("quadrature", criterion_8),
        ("cli contract", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
