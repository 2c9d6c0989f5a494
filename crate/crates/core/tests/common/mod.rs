//! Shared helpers for the integration tests.
//!
//! Each `check_*` function returns the largest deviation it saw, so the
//! granular tests and the acceptance runner can apply the same tolerance.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use qaoa_girth::algebra::{f_weight, gamma_dot, t_level_config, t_level_size, FWeights};
use qaoa_girth::finite_d::{h_init, h_step, HTable};
use qaoa_girth::infinite_d::{g_levels_naive, g_step_naive, h_infinite, GMatrix};
use qaoa_girth::xorsat;
use qaoa_girth::{gamma_vec, QaoaParams, SpinConfig};

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Random angles: `γ ∈ [−1.5, 1.5]`, `β ∈ [−π/2, π/2]`.
pub fn random_params(rng: &mut Xoshiro256PlusPlus, p: usize, q: usize) -> QaoaParams {
    let h = std::f64::consts::FRAC_PI_2;
    let gamma = (0..p).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let beta = (0..p).map(|_| rng.gen_range(-h..h)).collect();
    QaoaParams::new(q, gamma, beta).unwrap()
}

pub fn random_betas(rng: &mut Xoshiro256PlusPlus, p: usize) -> QaoaParams {
    let pi = std::f64::consts::PI;
    let beta = (0..p).map(|_| rng.gen_range(-pi..pi)).collect();
    QaoaParams::maxcut(vec![0.0; p], beta).unwrap()
}

fn dev(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

/// f-identities at depth `p`: sign flip under prime, conjugation under
/// reversal, invariance under global negation, and table-vs-literal
/// agreement. The sign flip is returned separately.
pub fn check_f_identities(p: usize, params: &QaoaParams) -> (f64, f64) {
    let table = FWeights::new(params);
    let mut flip: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for a in SpinConfig::all(p) {
        let fa = f_weight(a, params);
        if !a.in_b0() {
            flip = flip.max(dev(f_weight(a.prime().unwrap(), params), -fa));
        }
        worst = worst.max(dev(f_weight(a.reverse(), params), fa.conj()));
        worst = worst.max(dev(f_weight(a.negate(), params), fa));
        worst = worst.max(dev(table.get(a.bits()), fa));
    }
    (flip, worst)
}

/// `|Σ_a f(a) − 1|` and `|Σ_{a∈B₀} f(a) − 1|`.
pub fn check_f_normalization(params: &QaoaParams) -> f64 {
    let p = params.p;
    let mut all = Complex64::new(0.0, 0.0);
    let mut b0 = Complex64::new(0.0, 0.0);
    for a in SpinConfig::all(p) {
        let f = f_weight(a, params);
        all += f;
        if a.in_b0() {
            b0 += f;
        }
    }
    dev(all, 1.0.into()).max(dev(b0, 1.0.into()))
}

/// Count of configurations per `T` level against `2^{p+1}` and `2^{p+ℓ}`,
/// and that the level enumeration is a bijection onto each level.
pub fn check_t_census(p: usize) -> bool {
    let mut counts = vec![0usize; p + 1];
    for a in SpinConfig::all(p) {
        counts[a.t_index()] += 1;
    }
    let mut ok = counts[0] == 1 << (p + 1);
    for (level, &c) in counts.iter().enumerate().skip(1) {
        ok &= c == 1 << (p + level);
    }
    for (level, &count) in counts.iter().enumerate() {
        let size = t_level_size(p, level);
        ok &= size == count;
        let mut seen = std::collections::HashSet::new();
        for x in 0..size as u64 {
            let bits = t_level_config(p, level, x);
            let a = SpinConfig::new(bits, p).unwrap();
            ok &= a.t_index() == level && seen.insert(bits);
        }
    }
    ok
}

/// `Γ·(āb̄) = −Γ·(ab)` and `Γ·(aa) = 0`.
pub fn check_gamma_dot(params: &QaoaParams) -> f64 {
    let g = gamma_vec(params);
    let p = params.p;
    let mut worst: f64 = 0.0;
    for a in SpinConfig::all(p) {
        worst = worst.max(gamma_dot(&g, a, a).abs());
        for b in SpinConfig::all(p).step_by(7) {
            let x = gamma_dot(&g, a, b) + gamma_dot(&g, a.reverse(), b.reverse());
            worst = worst.max(x.abs());
        }
    }
    worst
}

/// The five table invariants: unit entries on `B₀`, prime invariance,
/// conjugation under reversal, negation invariance, `Σ f H = 1`.
pub fn check_h_invariants(h: &HTable, params: &QaoaParams) -> f64 {
    let p = params.p;
    let f = FWeights::new(params);
    let mut worst: f64 = 0.0;
    let mut norm = Complex64::new(0.0, 0.0);
    for a in SpinConfig::all(p) {
        let v = h.get(a.bits());
        norm += f.get(a.bits()) * v;
        if a.in_b0() {
            worst = worst.max(dev(v, 1.0.into()));
        } else {
            worst = worst.max(dev(h.get(a.prime().unwrap().bits()), v));
        }
        worst = worst.max(dev(h.get(a.reverse().bits()), v.conj()));
        worst = worst.max(dev(h.get(a.negate().bits()), v));
    }
    worst.max(dev(norm, 1.0.into()))
}

/// Table invariants after every step.
pub fn check_h_all_levels(branching: u64, params: &QaoaParams) -> f64 {
    let g = gamma_vec(params);
    let mut h = h_init(params.p, branching);
    let mut worst = check_h_invariants(&h, params);
    for _ in 0..params.p {
        h = h_step(&h, params, &g).unwrap();
        worst = worst.max(check_h_invariants(&h, params));
    }
    worst
}

/// Symmetry violations over every level of the naive iteration for arity `q`.
pub fn check_g_symmetries(q: usize, params: &QaoaParams) -> f64 {
    g_levels_naive(q, params)
        .unwrap()
        .iter()
        .map(GMatrix::symmetry_violation)
        .fold(0.0, f64::max)
}

/// Largest distance of the diagonal and anti-diagonal from exactly one.
pub fn check_unit_cross(q: usize, params: &QaoaParams) -> f64 {
    let p = params.p as isize;
    let mut worst: f64 = 0.0;
    for g in g_levels_naive(q, params).unwrap() {
        for j in -p..=p {
            worst = worst.max(dev(g.get(j, j), 1.0.into()));
            worst = worst.max(dev(g.get(j, -j), 1.0.into()));
        }
    }
    worst
}

/// Perturb every `G_{r',s'}` with `s' ≥ s` (keeping the structural
/// identities) and measure how much the next level's `G_{r,s}`, `r < s`,
/// moves.
pub fn check_dependence(params: &QaoaParams, rng: &mut Xoshiro256PlusPlus) -> f64 {
    let p = params.p;
    let g = gamma_vec(params);
    let levels = g_levels_naive(2, params).unwrap();
    let mut worst: f64 = 0.0;
    for prev in &levels[..p] {
        let base = g_step_naive(prev, params, &g).unwrap();
        for s in 2..=p {
            let mut bent = prev.clone();
            for s2 in s..=p {
                for r2 in 1..s2 {
                    let z = prev.get(r2 as isize, s2 as isize)
                        + Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                    let (r2, s2) = (r2 as isize, s2 as isize);
                    for (j, k, v) in [
                        (r2, s2, z),
                        (r2, -s2, z),
                        (-r2, -s2, z.conj()),
                        (-r2, s2, z.conj()),
                    ] {
                        bent.set(j, k, v);
                        bent.set(k, j, v);
                    }
                }
            }
            let moved = g_step_naive(&bent, params, &g).unwrap();
            for s_hi in 2..=s {
                for r in 1..s_hi {
                    let (r, s_hi) = (r as isize, s_hi as isize);
                    worst = worst.max(dev(moved.get(r, s_hi), base.get(r, s_hi)));
                }
            }
        }
    }
    worst
}

/// One more naive step from the final level changes nothing.
pub fn check_fixed_point(params: &QaoaParams) -> f64 {
    let g = gamma_vec(params);
    let levels = g_levels_naive(2, params).unwrap();
    let mut last = levels[params.p].clone();
    last.level = params.p - 1;
    let again = g_step_naive(&last, params, &g).unwrap();
    let mut reference = levels[params.p].clone();
    reference.level = again.level;
    again.max_abs_diff(&reference)
}

/// The four `(m+1)×(m+1)` corner blocks of `G^(m)` equal those of `G^(p)`.
pub fn check_corner_blocks(params: &QaoaParams) -> f64 {
    let p = params.p;
    let levels = g_levels_naive(2, params).unwrap();
    let last = &levels[p];
    let mut worst: f64 = 0.0;
    for (m, g) in levels.iter().enumerate().take(p) {
        let idx: Vec<isize> = (1..=(m + 1) as isize).collect();
        for &j in &idx {
            for &k in &idx {
                for (sj, sk) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    worst = worst.max(dev(g.get(sj * j, sk * k), last.get(sj * j, sk * k)));
                }
            }
        }
    }
    worst
}

/// Properties of the restricted D → ∞ exponent on every configuration.
pub fn check_h_infinite(params: &QaoaParams) -> f64 {
    let p = params.p;
    let levels = g_levels_naive(2, params).unwrap();
    let mut worst: f64 = 0.0;
    for prev in &levels[..p] {
        for a in SpinConfig::all(p) {
            let t = a.t_index();
            let v = h_infinite(a, prev, params, t).unwrap();
            for cap in t..=p {
                worst = worst.max(dev(h_infinite(a, prev, params, cap).unwrap(), v));
            }
            if t == 0 {
                worst = worst.max(dev(v, 1.0.into()));
            } else {
                let vp = h_infinite(a.prime().unwrap(), prev, params, t).unwrap();
                worst = worst.max(dev(vp, v));
            }
            let vr = h_infinite(a.reverse(), prev, params, a.reverse().t_index()).unwrap();
            worst = worst.max(dev(vr, v.conj()));
        }
    }
    worst
}

/// `ν₁^[q]` closed form for the q=3 grid test.
pub fn q3_closed_form(gamma: f64, beta: f64) -> f64 {
    let (c, s) = ((2.0 * beta).cos(), (2.0 * beta).sin());
    let e = (-2.0 * gamma * gamma).exp();
    2.0 / 6f64.sqrt() * gamma * (3.0 * c * c * s * e - s.powi(3) * e.powi(3))
}

pub fn closed_form_p1(gamma: f64, beta: f64) -> f64 {
    gamma * (4.0 * beta).sin() * (-2.0 * gamma * gamma).exp()
}

/// `xorsat::nu_q_p1_closed_form` against the hand expansion above.
pub fn q3_closed_form_consistent() -> bool {
    [(0.3, 0.2), (0.9, -1.1), (-0.4, 0.7)]
        .iter()
        .all(|&(g, b)| (xorsat::nu_q_p1_closed_form(3, g, b) - q3_closed_form(g, b)).abs() < 1e-14)
}

/// Run `f` inside a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}
