//! Finite-D MaxCut iteration on the H tables.
//!
//! `D` is always the branching factor of the tree: every node has `D`
//! children and the underlying graph is `(D+1)`-regular.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{config_count, gamma_vec, FWeights, GammaVec, QaoaParams};
use crate::error::{QaoaError, Result};
use crate::par;

/// Tolerance on the imaginary residual of every real-valued result.
pub const IMAG_TOLERANCE: f64 = 1e-9;

/// `H_D^(m)` as a dense table over all `2^(2p+1)` configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct HTable {
    pub level: usize,
    pub p: usize,
    pub branching: u64,
    pub entries: Vec<Complex64>,
}

impl HTable {
    pub fn get(&self, bits: u64) -> Complex64 {
        self.entries[bits as usize]
    }
}

/// Level-0 table: every entry is exactly one.
pub fn h_init(p: usize, branching: u64) -> HTable {
    HTable {
        level: 0,
        p,
        branching,
        entries: vec![Complex64::new(1.0, 0.0); config_count(p)],
    }
}

/// Integer power by repeated squaring.
pub fn complex_powu(base: Complex64, exp: u64) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        b *= b;
        e >>= 1;
    }
    result
}

/// `(1 − e)^d`, accurate when `e` is small and `d` is large.
///
/// Every step's base is `Σ_b f(b) H(b) cos(·) = 1 − Σ_b f(b) H(b) (1 − cos(·))`
/// because `Σ_b f(b) H(b) = 1` at every level. Forming the `1 − …` first
/// and raising it to the `D`th power would multiply rounding errors by `D`
/// per level.
pub(crate) fn one_minus_pow(e: Complex64, d: u64) -> Complex64 {
    if e.norm() >= 0.5 {
        return complex_powu(Complex64::new(1.0, 0.0) - e, d);
    }
    // ln(1 − e) with both parts computed without cancellation
    let (x, y) = (-e.re, -e.im);
    let log = Complex64::new(0.5 * (2.0 * x + x * x + y * y).ln_1p(), y.atan2(1.0 + x));
    (log * d as f64).exp()
}

/// `1 − cos(x) = 2 sin²(x/2)` for every dot-product value.
pub(crate) fn versines(gamma: &GammaVec, scale: f64) -> Vec<f64> {
    gamma
        .dot_table()
        .iter()
        .map(|d| 2.0 * (0.5 * d * scale).sin().powi(2))
        .collect()
}

pub(crate) fn check_branching(branching: u64) -> Result<()> {
    if branching == 0 {
        return Err(QaoaError::InvalidArgument(
            "branching D must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `Σ_b f(b) H(b)` for every `b`, the weights shared by both steps.
pub(crate) fn weighted(f: &[Complex64], h: &HTable) -> Vec<Complex64> {
    f.iter().zip(&h.entries).map(|(x, y)| x * y).collect()
}

/// One step `H^(m-1) → H^(m)`.
pub fn h_step(prev: &HTable, params: &QaoaParams, gamma: &GammaVec) -> Result<HTable> {
    let p = params.p;
    if prev.p != p {
        return Err(QaoaError::InvalidArgument(format!(
            "table depth {} does not match params depth {p}",
            prev.p
        )));
    }
    if prev.level >= p {
        return Err(QaoaError::InvalidArgument(format!(
            "table is already at the final level {}",
            prev.level
        )));
    }
    check_branching(prev.branching)?;
    let scale = 1.0 / (prev.branching as f64).sqrt();
    let f = FWeights::new(params).table();
    let w = weighted(&f, prev);
    let kernel = versines(gamma, scale);
    let n = config_count(p);
    let entries: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut e = Complex64::new(0.0, 0.0);
            for (b, wb) in w.iter().enumerate() {
                e += wb * kernel[a ^ b];
            }
            one_minus_pow(e, prev.branching)
        })
        .collect();
    if let Some(bad) = entries
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(QaoaError::NumericFailure(format!(
            "non-finite H entry at configuration {bad}"
        )));
    }
    Ok(HTable {
        level: prev.level + 1,
        p,
        branching: prev.branching,
        entries,
    })
}

/// Run all `p` steps from `H^(0)`.
pub fn h_final(branching: u64, params: &QaoaParams) -> Result<HTable> {
    check_branching(branching)?;
    let gamma = gamma_vec(params);
    let mut h = h_init(params.p, branching);
    for _ in 0..params.p {
        h = h_step(&h, params, &gamma)?;
    }
    Ok(h)
}

/// Take the real part after checking the imaginary residual.
pub fn real_part(z: Complex64) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(QaoaError::NumericFailure(format!("non-finite result {z}")));
    }
    if z.im.abs() >= IMAG_TOLERANCE {
        return Err(QaoaError::ImaginaryResidual {
            real: z.re,
            imag: z.im,
            tolerance: IMAG_TOLERANCE,
        });
    }
    Ok(z.re)
}

/// `ν_p(D, γ, β)` for MaxCut on `(D+1)`-regular graphs of girth `> 2p+1`.
pub fn nu_finite(branching: u64, params: &QaoaParams) -> Result<f64> {
    if params.q != 2 {
        return Err(QaoaError::InvalidParams(format!(
            "MaxCut iteration needs q = 2, got {}",
            params.q
        )));
    }
    let p = params.p;
    let h = h_final(branching, params)?;
    let gamma = gamma_vec(params);
    let scale = 1.0 / (branching as f64).sqrt();
    let f = FWeights::new(params).table();
    // fold a_0 into the weight
    let a0 = 1u64 << p;
    let w: Vec<Complex64> = weighted(&f, &h)
        .into_iter()
        .enumerate()
        .map(|(a, v)| if a as u64 & a0 != 0 { -v } else { v })
        .collect();
    let sines: Vec<f64> = gamma
        .dot_table()
        .iter()
        .map(|d| (d * scale).sin())
        .collect();
    let n = config_count(p);
    let total = par::sum_complex(n, |a| {
        let mut inner = Complex64::new(0.0, 0.0);
        for (b, wb) in w.iter().enumerate() {
            inner += wb * sines[a ^ b];
        }
        w[a] * inner
    });
    let prefactor = Complex64::new(0.0, (branching as f64).sqrt() / 2.0);
    real_part(prefactor * total)
}
