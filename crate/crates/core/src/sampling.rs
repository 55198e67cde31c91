//! Seeded random polynomials and forms.
//!
//! Every sample is drawn from its own ChaCha stream `(seed, index)`, so a
//! sample never depends on how many samples were drawn before it or on
//! which thread draws it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{Blade, Form, VectorField};
use crate::polyring::{rat, Multidegree, Poly, Rational};

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Small nonzero rational `p/q` with `|p| <= 6`, `1 <= q <= 4`.
pub fn random_rational(rng: &mut SampleRng) -> Rational {
    let mut p = rng.random_range(-6i64..=5);
    if p >= 0 {
        p += 1;
    }
    rat(p, rng.random_range(1i64..=4))
}

pub fn random_point(rng: &mut SampleRng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            if rng.random_bool(0.2) {
                rat(0, 1)
            } else {
                random_rational(rng)
            }
        })
        .collect()
}

/// Random polynomial with up to `max_terms` monomials of total degree `<= max_degree`.
pub fn random_poly(rng: &mut SampleRng, n: usize, max_degree: u32, max_terms: usize) -> Poly {
    let count = rng.random_range(1..=max_terms.max(1));
    let mut p = Poly::zero(n);
    for _ in 0..count {
        let target = rng.random_range(0..=max_degree);
        let mut m = Multidegree::zero(n);
        for _ in 0..target {
            if n > 0 {
                m = m.bump(rng.random_range(0..n));
            }
        }
        p = &p + &Poly::monomial(n, m, random_rational(rng));
    }
    p
}

/// Random homogeneous form of the given grade; each basis element is
/// present with probability one half (at least one is kept).
pub fn random_form(rng: &mut SampleRng, n: usize, grade: usize, max_degree: u32) -> Form {
    let blades = Blade::of_grade(n, grade);
    let forced = rng.random_range(0..blades.len());
    let mut comps = Vec::new();
    for (i, b) in blades.into_iter().enumerate() {
        if i == forced || rng.random_bool(0.5) {
            comps.push((b, random_poly(rng, n, max_degree, 3)));
        }
    }
    Form::from_components(n, comps)
}

/// Random inhomogeneous form touching a random nonempty set of grades.
pub fn random_mixed_form(rng: &mut SampleRng, n: usize, max_degree: u32) -> Form {
    let forced = rng.random_range(0..=n);
    let mut out = Form::zero(n);
    for k in 0..=n {
        if k == forced || rng.random_bool(0.4) {
            out = &out + &random_form(rng, n, k, max_degree);
        }
    }
    out
}

pub fn random_constant_vector(rng: &mut SampleRng, n: usize) -> VectorField {
    VectorField::constant(&random_point(rng, n))
}
