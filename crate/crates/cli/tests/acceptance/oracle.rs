//! Independent reference computations used by the acceptance checks.

use axc_core::{Blade, Context, Form, Poly};

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[0, 1]`.
pub fn gauss_legendre_unit(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_m
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// `(H w)(y)` by quadrature of `int_0^1 i_K w(t y) t^(k-1) dt`, with `K = y`
/// contracted at the evaluation point. Returns `(blade, value)` pairs.
pub fn homotopy_by_quadrature(w: &Form, y: &[f64], rule: &[(f64, f64)]) -> Vec<(Blade, f64)> {
    let mut acc: std::collections::BTreeMap<Blade, f64> = std::collections::BTreeMap::new();
    for (blade, p) in w.components() {
        let k = blade.grade();
        if k == 0 {
            continue;
        }
        let integral: f64 = rule
            .iter()
            .map(|&(t, wt)| {
                let ty: Vec<f64> = y.iter().map(|v| t * v).collect();
                wt * p.eval_f64(&ty) * t.powi(k as i32 - 1)
            })
            .sum();
        for (pos, a) in blade.axes().enumerate() {
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            *acc.entry(blade.without(a)).or_insert(0.0) += sign * y[a] * integral;
        }
    }
    acc.into_iter().collect()
}

fn partial(w: &Form, a: usize) -> Form {
    w.map_coeffs(|p| p.partial(a).expect("axis in range"))
}

/// `-sum_a eps_a i_(d_a) d_a w`: the codifferential written in the flat frame.
pub fn frame_delta(ctx: &Context, w: &Form) -> Form {
    let n = ctx.dim();
    let mut out = Form::zero(n);
    for a in 0..n {
        let mut unit = vec![Poly::zero(n); n];
        unit[a] = Poly::one(n);
        let e = axc_core::VectorField::new(unit).expect("dimension");
        let term = partial(w, a).interior(&e).expect("dimension");
        out = if ctx.signature()[a] > 0 { &out - &term } else { &out + &term };
    }
    out
}

/// `sum_a eps_a d_a^2 u`.
pub fn frame_wave(ctx: &Context, u: &Poly) -> Poly {
    let n = ctx.dim();
    let mut out = Poly::zero(n);
    for a in 0..n {
        let dd = u.partial(a).unwrap().partial(a).unwrap();
        out = if ctx.signature()[a] > 0 { &out + &dd } else { &out - &dd };
    }
    out
}

/// A polynomial in `y_a, y_b` annihilated by the flat wave operator:
/// `Re (y_a + i y_b)^m` for equal signs, `(y_a + y_b)^m` otherwise.
pub fn harmonic_pair_poly(ctx: &Context, a: usize, b: usize, m: u32) -> Poly {
    let n = ctx.dim();
    let (ya, yb) = (Poly::var(n, a), Poly::var(n, b));
    if ctx.signature()[a] != ctx.signature()[b] {
        let s = &ya + &yb;
        return (0..m).fold(Poly::one(n), |acc, _| &acc * &s);
    }
    // real part of (ya + i yb)^m by the recurrence on (re, im)
    let (mut re, mut im) = (Poly::one(n), Poly::zero(n));
    for _ in 0..m {
        let nre = &(&re * &ya) - &(&im * &yb);
        let nim = &(&re * &yb) + &(&im * &ya);
        re = nre;
        im = nim;
    }
    re
}
