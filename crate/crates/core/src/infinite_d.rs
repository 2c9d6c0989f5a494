//! The `D → ∞` iteration on the `(2p+1)×(2p+1)` correlation matrix `G`.
//!
//! Two routes compute the same number:
//!
//! * [`nu_infinite_naive`] runs the full recursion for every entry and every
//!   configuration, `O(p³·4^p)`. It stays in the crate as the differential
//!   oracle for the fast route.
//! * [`nu_infinite_fast`] places only the entries that become final at each
//!   step and restricts each sum to the configurations that contribute,
//!   `O(p²·4^p)`.
//!
//! Both accept any clause arity `q ≥ 2`; entries of the previous matrix enter
//! the exponent raised to the power `q − 1` and the final contraction uses
//! `(G_{0,j})^q`. MaxCut is `q = 2`.

use num_complex::Complex64;

use crate::algebra::{
    config_count, gamma_vec, position, t_index_bits, t_level_config, t_level_size, width, FWeights,
    GammaVec, QaoaParams, SpinConfig,
};
use crate::error::{QaoaError, Result};
use crate::finite_d::real_part;
use crate::par;

/// `G^(m)` stored densely in bit-position order.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    pub level: usize,
    p: usize,
    entries: Vec<Complex64>,
}

impl GMatrix {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        width(self.p)
    }

    /// Entry at signed indices `(j, k)`.
    pub fn get(&self, j: isize, k: isize) -> Complex64 {
        self.at(position(j, self.p), position(k, self.p))
    }

    pub fn set(&mut self, j: isize, k: isize, value: Complex64) {
        let (a, b) = (position(j, self.p), position(k, self.p));
        let n = self.dim();
        self.entries[a * n + b] = value;
    }

    /// Entry at bit positions `(a, b)`.
    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Complex64 {
        self.entries[a * self.dim() + b]
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &GMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Largest violation of the four structural identities: symmetry,
    /// unit diagonal and anti-diagonal, `G_{0,r} = G_{0,-r}*`, and
    /// `G_{r,s} = G_{r,-s} = G_{-r,-s}* = G_{-r,s}*` for `r < s`.
    pub fn symmetry_violation(&self) -> f64 {
        let p = self.p as isize;
        let one = Complex64::new(1.0, 0.0);
        let mut worst: f64 = 0.0;
        for j in -p..=p {
            for k in -p..=p {
                worst = worst.max((self.get(j, k) - self.get(k, j)).norm());
            }
            worst = worst.max((self.get(j, j) - one).norm());
            worst = worst.max((self.get(j, -j) - one).norm());
        }
        for r in 1..=p {
            worst = worst.max((self.get(0, r) - self.get(0, -r).conj()).norm());
            for s in r + 1..=p {
                let g = self.get(r, s);
                worst = worst.max((g - self.get(r, -s)).norm());
                worst = worst.max((g - self.get(-r, -s).conj()).norm());
                worst = worst.max((g - self.get(-r, s).conj()).norm());
            }
        }
        worst
    }
}

/// `(z)^k` for small non-negative `k`.
#[inline]
fn powi(z: Complex64, k: usize) -> Complex64 {
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => z,
        2 => z * z,
        _ => z.powu(k as u32),
    }
}

fn check_arity(q: usize) -> Result<()> {
    if q < 2 {
        return Err(QaoaError::InvalidParams(format!(
            "clause arity q = {q} < 2"
        )));
    }
    Ok(())
}

/// `G^(0)_{j,k} = Σ_a f(a) a_j a_k`.
pub fn g_init(params: &QaoaParams) -> GMatrix {
    let p = params.p;
    let f = FWeights::new(params);
    let n = width(p);
    let mut sums = par::sum_complex_vec(config_count(p), n * n, |a, acc| {
        accumulate_outer(a as u64, f.get(a as u64), n, acc);
    });
    mirror_lower(n, &mut sums);
    GMatrix {
        level: 0,
        p,
        entries: sums,
    }
}

/// `acc[j][k] += w · a_j a_k` on the upper triangle `j ≤ k`.
#[inline]
fn accumulate_outer(bits: u64, w: Complex64, n: usize, acc: &mut [Complex64]) {
    for j in 0..n {
        let wj = if bits >> j & 1 == 1 { -w } else { w };
        for k in j..n {
            let v = if bits >> k & 1 == 1 { -wj } else { wj };
            acc[j * n + k] += v;
        }
    }
}

fn mirror_lower(n: usize, entries: &mut [Complex64]) {
    for j in 0..n {
        for k in 0..j {
            entries[j * n + k] = entries[k * n + j];
        }
    }
}

/// One literal step of the recursion for arity `q`:
/// `G^(m)_{j,k} = Σ_a f(a) a_j a_k exp(−½ Σ_{j',k'} (G^(m-1)_{j',k'})^{q-1} Γ_{j'} Γ_{k'} a_{j'} a_{k'})`.
pub fn g_step_naive_q(
    prev: &GMatrix,
    q: usize,
    params: &QaoaParams,
    gamma: &GammaVec,
) -> Result<GMatrix> {
    check_arity(q)?;
    let p = params.p;
    if prev.p != p {
        return Err(QaoaError::InvalidArgument(format!(
            "matrix depth {} does not match params depth {p}",
            prev.p
        )));
    }
    let n = width(p);
    // coupling[j'][k'] = (G_{j',k'})^{q-1} Γ_{j'} Γ_{k'}
    let gs = gamma.as_slice();
    let coupling: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (j, k) = (idx / n, idx % n);
            powi(prev.entries[idx], q - 1) * (gs[j] * gs[k])
        })
        .collect();
    let f = FWeights::new(params);
    let mut sums = par::sum_complex_vec(config_count(p), n * n, |a, acc| {
        let bits = a as u64;
        let mut exponent = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let sj = bits >> j & 1;
            for k in 0..n {
                let c = coupling[j * n + k];
                if (sj ^ (bits >> k & 1)) == 1 {
                    exponent -= c;
                } else {
                    exponent += c;
                }
            }
        }
        let w = f.get(bits) * (-0.5 * exponent).exp();
        accumulate_outer(bits, w, n, acc);
    });
    mirror_lower(n, &mut sums);
    Ok(GMatrix {
        level: prev.level + 1,
        p,
        entries: sums,
    })
}

/// MaxCut step (`q = 2`).
pub fn g_step_naive(prev: &GMatrix, params: &QaoaParams, gamma: &GammaVec) -> Result<GMatrix> {
    g_step_naive_q(prev, 2, params, gamma)
}

/// Every level `G^(0), …, G^(p)` of the literal recursion.
pub fn g_levels_naive(q: usize, params: &QaoaParams) -> Result<Vec<GMatrix>> {
    check_arity(q)?;
    let gamma = gamma_vec(params);
    let mut levels = Vec::with_capacity(params.p + 1);
    let mut g = g_init(params);
    levels.push(g.clone());
    for _ in 0..params.p {
        g = g_step_naive_q(&g, q, params, &gamma)?;
        levels.push(g.clone());
    }
    Ok(levels)
}

/// `(i / sqrt(2q)) Σ_j Γ_j (G_{0,j})^q` using the full sum over `j`.
pub fn contract_literal(g: &GMatrix, q: usize, gamma: &GammaVec) -> Complex64 {
    let p = g.p as isize;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in -p..=p {
        acc += gamma.get(j) * powi(g.get(0, j), q);
    }
    Complex64::new(0.0, 1.0 / (2.0 * q as f64).sqrt()) * acc
}

/// `ν_p^[q](γ, β)` in the `D → ∞` limit via the literal recursion.
pub fn nu_q_infinite_naive(q: usize, params: &QaoaParams) -> Result<f64> {
    let levels = g_levels_naive(q, params)?;
    let g = levels.last().expect("at least one level");
    real_part(contract_literal(g, q, &gamma_vec(params)))
}

/// MaxCut `ν_p(γ, β)` via the literal recursion.
pub fn nu_infinite_naive(params: &QaoaParams) -> Result<f64> {
    check_maxcut(params)?;
    nu_q_infinite_naive(2, params)
}

fn check_maxcut(params: &QaoaParams) -> Result<()> {
    if params.q != 2 {
        return Err(QaoaError::InvalidParams(format!(
            "MaxCut iteration needs q = 2, got {}",
            params.q
        )));
    }
    Ok(())
}

/// Upper-triangle couplings `W_{r',s'} = γ_{r'} γ_{s'} (G_{r',s'})^{q-1}`
/// for `1 ≤ r' < s' ≤ p`, the only entries the exponent needs.
#[derive(Debug, Clone)]
pub struct Couplings {
    p: usize,
    gamma_sq: Vec<f64>,
    // w[(s'-1) * p + (r'-1)]
    w: Vec<Complex64>,
}

impl Couplings {
    fn new(p: usize, gamma: &[f64]) -> Self {
        Self {
            p,
            gamma_sq: gamma.iter().map(|g| g * g).collect(),
            w: vec![Complex64::new(0.0, 0.0); p * p],
        }
    }

    fn set(&mut self, r: usize, s: usize, gamma: &[f64], g_rs: Complex64, q: usize) {
        self.w[(s - 1) * self.p + (r - 1)] = gamma[r - 1] * gamma[s - 1] * powi(g_rs, q - 1);
    }

    pub fn from_matrix(g: &GMatrix, q: usize, params: &QaoaParams) -> Self {
        let p = params.p;
        let mut c = Self::new(p, &params.gamma);
        for s in 2..=p {
            for r in 1..s {
                c.set(r, s, &params.gamma, g.get(r as isize, s as isize), q);
            }
        }
        c
    }

    /// `H(a)` from the simplified exponent, summing only `s' ≤ t_cap`.
    ///
    /// The terms with `s' > T(a)` vanish, so any `t_cap ≥ T(a)` gives the
    /// full value.
    #[inline]
    pub fn h_value(&self, bits: u64, t_cap: usize) -> Complex64 {
        let p = self.p;
        let mut exponent = Complex64::new(0.0, 0.0);
        for s in 1..=t_cap {
            let a_s = spin_f(bits, s - 1);
            let a_ms = spin_f(bits, 2 * p + 1 - s);
            if a_s == a_ms {
                continue;
            }
            // (a_s − a_{-s}) = 2 a_s and (1 − a_s a_{-s}) = 2
            let mut inner = Complex64::new(0.0, 0.0);
            let row = &self.w[(s - 1) * p..(s - 1) * p + (s - 1)];
            for (r0, w) in row.iter().enumerate() {
                let a_r = spin_f(bits, r0);
                let a_mr = spin_f(bits, 2 * p - r0);
                inner += Complex64::new(w.re * (a_r - a_mr), w.im * (a_r + a_mr));
            }
            exponent += 2.0 * self.gamma_sq[s - 1] + 2.0 * a_s * inner;
        }
        (-exponent).exp()
    }
}

#[inline]
fn spin_f(bits: u64, pos: usize) -> f64 {
    if bits >> pos & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `H^(m)(a)` in the `D → ∞` limit from the previous matrix, with the
/// exponent restricted to `s' ≤ t_cap`. Requires `t_cap ≥ T(a)`.
pub fn h_infinite(
    a: SpinConfig,
    prev: &GMatrix,
    params: &QaoaParams,
    t_cap: usize,
) -> Result<Complex64> {
    h_infinite_q(a, prev, 2, params, t_cap)
}

/// Arity-`q` version of [`h_infinite`].
pub fn h_infinite_q(
    a: SpinConfig,
    prev: &GMatrix,
    q: usize,
    params: &QaoaParams,
    t_cap: usize,
) -> Result<Complex64> {
    check_arity(q)?;
    let t = a.t_index();
    if t_cap < t || t_cap > params.p {
        return Err(QaoaError::InvalidArgument(format!(
            "t_cap {t_cap} must lie in [T(a) = {t}, p = {}]",
            params.p
        )));
    }
    let c = Couplings::from_matrix(prev, q, params);
    Ok(c.h_value(a.bits(), t_cap))
}

/// Output of the fast route: the placed upper-triangle entries and the
/// final `G^(p)_{0,r}` column.
#[derive(Debug, Clone)]
pub struct FastResult {
    pub p: usize,
    pub q: usize,
    /// `upper[(s-1)*p + (r-1)] = G_{r,s}` for `1 ≤ r < s ≤ p`.
    upper: Vec<Complex64>,
    /// `zero_col[r-1] = G^(p)_{0,r}`.
    pub zero_col: Vec<Complex64>,
    pub nu: f64,
}

impl FastResult {
    pub fn upper(&self, r: usize, s: usize) -> Complex64 {
        assert!(1 <= r && r < s && s <= self.p);
        self.upper[(s - 1) * self.p + (r - 1)]
    }
}

/// The fast placement route for arity `q`.
pub fn fast_iteration(q: usize, params: &QaoaParams) -> Result<FastResult> {
    check_arity(q)?;
    let p = params.p;
    let f = FWeights::new(params);
    let gamma = &params.gamma;
    let mut couplings = Couplings::new(p, gamma);
    let mut upper = vec![Complex64::new(0.0, 0.0); p * p];
    let mut placed = vec![false; p * p];

    for m in 1..p {
        // reads of step m: G_{r',s'} with r' < s' ≤ m
        for s in 2..=m {
            for r in 1..s {
                if !placed[(s - 1) * p + (r - 1)] {
                    return Err(QaoaError::UnplacedRead {
                        row: r,
                        col: s,
                        step: m,
                    });
                }
            }
        }
        let s = m + 1;
        // column G_{r,s}, r = 1..m; the B0 sum contributes to every r, level ℓ to r ≤ ℓ
        let mut column = vec![Complex64::new(0.0, 0.0); m];
        for level in 0..=m {
            let size = t_level_size(p, level);
            let coup = &couplings;
            let part = par::sum_complex_vec(size, m, |x, acc| {
                let bits = t_level_config(p, level, x as u64);
                let fh = if level == 0 {
                    f.get(bits)
                } else {
                    f.get(bits) * coup.h_value(bits, level)
                };
                let w = if bits >> (s - 1) & 1 == 1 { -fh } else { fh };
                let r_max = if level == 0 { m } else { level };
                for r in 1..=r_max {
                    acc[r - 1] += if bits >> (r - 1) & 1 == 1 { -w } else { w };
                }
            });
            for (c, v) in column.iter_mut().zip(part) {
                *c += v;
            }
        }
        for (r0, value) in column.into_iter().enumerate() {
            let r = r0 + 1;
            upper[(s - 1) * p + r0] = value;
            placed[(s - 1) * p + r0] = true;
            couplings.set(r, s, gamma, value, q);
        }
    }

    for s in 2..=p {
        for r in 1..s {
            if !placed[(s - 1) * p + (r - 1)] {
                return Err(QaoaError::UnplacedRead {
                    row: r,
                    col: s,
                    step: p,
                });
            }
        }
    }
    // final step: G^(p)_{0,r} over every configuration
    let mut zero_col = vec![Complex64::new(0.0, 0.0); p];
    for level in 0..=p {
        let size = t_level_size(p, level);
        let coup = &couplings;
        let part = par::sum_complex_vec(size, p, |x, acc| {
            let bits = t_level_config(p, level, x as u64);
            let fh = if level == 0 {
                f.get(bits)
            } else {
                f.get(bits) * coup.h_value(bits, level)
            };
            let w = if bits >> p & 1 == 1 { -fh } else { fh };
            for r in 1..=p {
                acc[r - 1] += if bits >> (r - 1) & 1 == 1 { -w } else { w };
            }
        });
        for (c, v) in zero_col.iter_mut().zip(part) {
            *c += v;
        }
    }

    // (i/sqrt(2q)) Σ_r γ_r [(G_{0,r})^q − (G_{0,r}*)^q]
    let mut acc = Complex64::new(0.0, 0.0);
    for (r0, g0r) in zero_col.iter().enumerate() {
        acc += gamma[r0] * (powi(*g0r, q) - powi(g0r.conj(), q));
    }
    let nu = real_part(Complex64::new(0.0, 1.0 / (2.0 * q as f64).sqrt()) * acc)?;
    Ok(FastResult {
        p,
        q,
        upper,
        zero_col,
        nu,
    })
}

/// `ν_p^[q](γ, β)` in the `D → ∞` limit via the fast route.
pub fn nu_q_infinite_fast(q: usize, params: &QaoaParams) -> Result<f64> {
    Ok(fast_iteration(q, params)?.nu)
}

/// MaxCut `ν_p(γ, β)` via the fast route.
pub fn nu_infinite_fast(params: &QaoaParams) -> Result<f64> {
    check_maxcut(params)?;
    nu_q_infinite_fast(2, params)
}

/// Default MaxCut entry point.
pub fn nu_infinite(params: &QaoaParams) -> Result<f64> {
    nu_infinite_fast(params)
}

/// `T(a)` helper re-exported for callers holding raw bits.
pub fn t_index_of(bits: u64, p: usize) -> usize {
    t_index_bits(bits, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn closed_form_p1(gamma: f64, beta: f64) -> f64 {
        gamma * (4.0 * beta).sin() * (-2.0 * gamma * gamma).exp()
    }

    #[test]
    fn init_has_unit_diagonals() {
        let params = QaoaParams::maxcut(vec![0.2, 0.5, 0.1], vec![0.3, -0.7, 1.1]).unwrap();
        let g = g_init(&params);
        for j in -3isize..=3 {
            assert!((g.get(j, j) - 1.0).norm() < 1e-14);
            assert!((g.get(j, -j) - 1.0).norm() < 1e-14);
        }
        assert!(g.symmetry_violation() < 1e-14);
    }

    #[test]
    fn init_p1_matches_hand_sum() {
        // G^(0)_{0,1} = e^{-2iβ} from the 8-term sum
        let beta = PI / 8.0;
        let params = QaoaParams::maxcut(vec![0.5], vec![beta]).unwrap();
        let g = g_init(&params);
        let expected = Complex64::new(0.0, -2.0 * beta).exp();
        assert!((g.get(0, 1) - expected).norm() < 1e-15);
        assert!((g.get(0, 1) - Complex64::new(0.5f64.sqrt(), -0.5f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn p1_values() {
        let params = QaoaParams::maxcut(vec![0.5], vec![PI / 8.0]).unwrap();
        let expected = 0.5 * (-0.5f64).exp();
        assert!((nu_infinite_naive(&params).unwrap() - expected).abs() < 1e-14);
        assert!((nu_infinite_fast(&params).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.30327).abs() < 1e-5);
    }

    #[test]
    fn p1_grid_against_closed_form() {
        for i in 0..7 {
            for k in 0..7 {
                let g = -2.0 + 4.0 * i as f64 / 6.0;
                let b = -PI + 2.0 * PI * k as f64 / 6.0;
                let params = QaoaParams::maxcut(vec![g], vec![b]).unwrap();
                let nu = nu_infinite_fast(&params).unwrap();
                assert!((nu - closed_form_p1(g, b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_gamma_keeps_g_fixed_and_nu_zero() {
        let params = QaoaParams::maxcut(vec![0.0; 3], vec![0.4, 0.2, 0.9]).unwrap();
        let levels = g_levels_naive(2, &params).unwrap();
        for g in &levels[1..] {
            assert!(g.max_abs_diff(&levels[0]) < 1e-14);
        }
        assert_eq!(nu_infinite_fast(&params).unwrap(), 0.0);
    }

    #[test]
    fn zero_beta_gives_zero() {
        let params = QaoaParams::maxcut(vec![0.3, 0.8], vec![0.0, 0.0]).unwrap();
        assert!(nu_infinite_naive(&params).unwrap().abs() < 1e-15);
        assert!(nu_infinite_fast(&params).unwrap().abs() < 1e-15);
    }

    #[test]
    fn p2_published_value() {
        let params = QaoaParams::maxcut(vec![0.3817, 0.6655], vec![0.4960, 0.2690]).unwrap();
        let nu = nu_infinite_fast(&params).unwrap();
        assert!((nu - 0.4075).abs() < 1e-4, "{nu}");
        assert!((nu - nu_infinite_naive(&params).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn h_infinite_properties() {
        let params = QaoaParams::maxcut(vec![0.3, 0.6, 0.55], vec![0.5, 0.35, 0.2]).unwrap();
        let levels = g_levels_naive(2, &params).unwrap();
        let prev = &levels[2];
        for a in SpinConfig::all(3) {
            let t = a.t_index();
            let h = h_infinite(a, prev, &params, t).unwrap();
            let full = h_infinite(a, prev, &params, 3).unwrap();
            assert!((h - full).norm() < 1e-14);
            if t == 0 {
                assert_eq!(h, Complex64::new(1.0, 0.0));
            } else {
                let hp = h_infinite(a.prime().unwrap(), prev, &params, t).unwrap();
                assert!((hp - h).norm() < 1e-14);
            }
            let hr = h_infinite(a.reverse(), prev, &params, 3).unwrap();
            assert!((hr - h.conj()).norm() < 1e-14);
        }
        let a = SpinConfig::from_spins(&[1, 1, 1, 1, -1, 1, 1]).unwrap();
        assert!(h_infinite(a, prev, &params, 2).is_err());
    }

    #[test]
    fn rejects_non_maxcut_params() {
        let params = QaoaParams::new(3, vec![0.1], vec![0.2]).unwrap();
        assert!(nu_infinite_fast(&params).is_err());
        assert!(nu_infinite_naive(&params).is_err());
    }
}
