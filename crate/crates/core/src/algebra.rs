//! Spin-configuration algebra shared by every iteration.
//!
//! A configuration `a = (a_1, …, a_p, a_0, a_{-p}, …, a_{-1})` is packed into
//! the low `2p+1` bits of a `u64`, least significant bit first, in exactly
//! that order. A set bit is spin −1. With this layout the entry-wise product
//! of two configurations is XOR, global negation is XOR with the full mask,
//! and the chain of transfer amplitudes in `f` runs over adjacent bits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QaoaError, Result};

/// Largest supported depth; `2p + 1` bits must fit in a `u64`.
pub const MAX_DEPTH: usize = 31;

/// The `2p` variational angles together with the depth and clause arity.
///
/// Angles follow the scaled convention: `gamma` multiplies the cost operator
/// normalized by `1/sqrt(D)`, so good values are of order one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct QaoaParams {
    pub p: usize,
    pub q: usize,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    #[serde(default)]
    p: Option<usize>,
    #[serde(default = "default_q")]
    q: usize,
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

fn default_q() -> usize {
    2
}

impl TryFrom<RawParams> for QaoaParams {
    type Error = QaoaError;

    fn try_from(raw: RawParams) -> Result<Self> {
        let params = QaoaParams::new(raw.q, raw.gamma, raw.beta)?;
        if let Some(p) = raw.p.filter(|&p| p != params.p) {
            return Err(QaoaError::InvalidParams(format!(
                "declared p = {p} but gamma/beta have length {}",
                params.p
            )));
        }
        Ok(params)
    }
}

impl QaoaParams {
    pub fn new(q: usize, gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(QaoaError::InvalidParams(format!(
                "gamma has {} entries, beta has {}",
                gamma.len(),
                beta.len()
            )));
        }
        let p = gamma.len();
        if p == 0 {
            return Err(QaoaError::InvalidParams(
                "depth p must be at least 1".into(),
            ));
        }
        if p > MAX_DEPTH {
            return Err(QaoaError::InvalidParams(format!(
                "depth {p} exceeds the supported maximum {MAX_DEPTH}"
            )));
        }
        if q < 2 {
            return Err(QaoaError::InvalidParams(format!(
                "clause arity q = {q} < 2"
            )));
        }
        if let Some(x) = gamma.iter().chain(&beta).find(|x| !x.is_finite()) {
            return Err(QaoaError::InvalidParams(format!("non-finite angle {x}")));
        }
        Ok(Self { p, q, gamma, beta })
    }

    /// MaxCut parameters (`q = 2`).
    pub fn maxcut(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        Self::new(2, gamma, beta)
    }

    pub fn with_q(&self, q: usize) -> Result<Self> {
        Self::new(q, self.gamma.clone(), self.beta.clone())
    }

    /// Flattened `(γ_1, …, γ_p, β_1, …, β_p)`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn from_vec(q: usize, x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(QaoaError::InvalidParams(format!(
                "flattened parameter vector has odd length {}",
                x.len()
            )));
        }
        let p = x.len() / 2;
        Self::new(q, x[..p].to_vec(), x[p..].to_vec())
    }

    /// Joint negation `(γ, β) → (−γ, −β)`, which conjugates the state.
    pub fn negated(&self) -> Self {
        Self {
            p: self.p,
            q: self.q,
            gamma: self.gamma.iter().map(|g| -g).collect(),
            beta: self.beta.iter().map(|b| -b).collect(),
        }
    }

    pub fn gamma_vec(&self) -> GammaVec {
        gamma_vec(self)
    }
}

/// Bit position of signed index `j ∈ {1..p, 0, -p..-1}`.
#[inline]
pub fn position(j: isize, p: usize) -> usize {
    let p = p as isize;
    debug_assert!(j.abs() <= p);
    if j > 0 {
        (j - 1) as usize
    } else if j == 0 {
        p as usize
    } else {
        (2 * p + 1 + j) as usize
    }
}

/// Signed index stored at bit position `pos`.
#[inline]
pub fn index_at(pos: usize, p: usize) -> isize {
    debug_assert!(pos <= 2 * p);
    if pos < p {
        pos as isize + 1
    } else if pos == p {
        0
    } else {
        pos as isize - 2 * p as isize - 1
    }
}

/// Number of spins in a configuration of depth `p`.
#[inline]
pub fn width(p: usize) -> usize {
    2 * p + 1
}

/// Number of configurations of depth `p`.
#[inline]
pub fn config_count(p: usize) -> usize {
    1usize << width(p)
}

#[inline]
fn full_mask(p: usize) -> u64 {
    (1u64 << width(p)) - 1
}

/// `Γ = (γ_1, …, γ_p, 0, −γ_p, …, −γ_1)` stored by bit position.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVec {
    p: usize,
    values: Vec<f64>,
}

pub fn gamma_vec(params: &QaoaParams) -> GammaVec {
    let p = params.p;
    let mut values = vec![0.0; width(p)];
    for r in 1..=p {
        values[position(r as isize, p)] = params.gamma[r - 1];
        values[position(-(r as isize), p)] = -params.gamma[r - 1];
    }
    GammaVec { p, values }
}

impl GammaVec {
    pub fn p(&self) -> usize {
        self.p
    }

    /// Value at signed index `j`.
    pub fn get(&self, j: isize) -> f64 {
        self.values[position(j, self.p)]
    }

    /// Values in bit-position order.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `Σ_j Γ_j c_j` for a packed configuration `c`.
    #[inline]
    pub fn dot_bits(&self, bits: u64) -> f64 {
        let mut acc = 0.0;
        for (k, &g) in self.values.iter().enumerate() {
            if bits >> k & 1 == 1 {
                acc -= g;
            } else {
                acc += g;
            }
        }
        acc
    }

    /// `Γ·c` for every configuration `c`, indexed by its packed bits.
    pub fn dot_table(&self) -> Vec<f64> {
        (0..config_count(self.p) as u64)
            .map(|c| self.dot_bits(c))
            .collect()
    }
}

/// `Γ·(ab) = Σ_j Γ_j a_j b_j`.
pub fn gamma_dot(gamma: &GammaVec, a: SpinConfig, b: SpinConfig) -> f64 {
    debug_assert_eq!(a.p, b.p);
    gamma.dot_bits(a.bits ^ b.bits)
}

/// A packed `(2p+1)`-spin configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    bits: u64,
    p: usize,
}

impl SpinConfig {
    pub fn new(bits: u64, p: usize) -> Result<Self> {
        if p == 0 || p > MAX_DEPTH {
            return Err(QaoaError::InvalidArgument(format!("unsupported depth {p}")));
        }
        if bits & !full_mask(p) != 0 {
            return Err(QaoaError::InvalidArgument(format!(
                "bits {bits:#b} exceed width {} for p = {p}",
                width(p)
            )));
        }
        Ok(Self { bits, p })
    }

    /// Build from spins listed in signed order `(a_1, …, a_p, a_0, a_{-p}, …, a_{-1})`.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        if spins.len().is_multiple_of(2) {
            return Err(QaoaError::InvalidArgument(format!(
                "expected an odd number of spins, got {}",
                spins.len()
            )));
        }
        let p = spins.len() / 2;
        let mut bits = 0u64;
        for (k, &s) in spins.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << k,
                other => {
                    return Err(QaoaError::InvalidArgument(format!("spin value {other}")));
                }
            }
        }
        Self::new(bits, p)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Spin `a_j` as ±1.
    #[inline]
    pub fn spin(&self, j: isize) -> i8 {
        spin_at(self.bits, position(j, self.p))
    }

    /// Spins in signed order.
    pub fn spins(&self) -> Vec<i8> {
        (0..width(self.p)).map(|k| spin_at(self.bits, k)).collect()
    }

    pub fn t_index(&self) -> usize {
        t_index_bits(self.bits, self.p)
    }

    pub fn in_b0(&self) -> bool {
        self.t_index() == 0
    }

    /// `a'`: flip `a_{±r}` for `1 ≤ r ≤ T(a)`. Undefined on `B₀`.
    pub fn prime(&self) -> Result<Self> {
        let t = self.t_index();
        if t == 0 {
            return Err(QaoaError::InvalidArgument(
                "prime is undefined on mirror-symmetric configurations".into(),
            ));
        }
        Ok(Self {
            bits: prime_bits(self.bits, self.p, t),
            p: self.p,
        })
    }

    /// `ā` with `ā_j = a_{-j}`.
    pub fn reverse(&self) -> Self {
        Self {
            bits: reverse_bits(self.bits, self.p),
            p: self.p,
        }
    }

    /// `−a`.
    pub fn negate(&self) -> Self {
        Self {
            bits: self.bits ^ full_mask(self.p),
            p: self.p,
        }
    }

    /// Entry-wise product `ab`.
    pub fn product(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            bits: self.bits ^ other.bits,
            p: self.p,
        }
    }

    /// Every configuration of depth `p`.
    pub fn all(p: usize) -> impl Iterator<Item = SpinConfig> {
        (0..config_count(p) as u64).map(move |bits| SpinConfig { bits, p })
    }
}

#[inline]
pub(crate) fn spin_at(bits: u64, pos: usize) -> i8 {
    1 - 2 * ((bits >> pos) & 1) as i8
}

/// Bits of the negative-index half, mirrored onto positions `0..p`.
#[inline]
fn mirrored_negative_half(bits: u64, p: usize) -> u64 {
    // a_{-r} sits at position 2p+1-r; move it to position r-1.
    let neg = (bits >> (p + 1)) & ((1u64 << p) - 1);
    neg.reverse_bits() >> (64 - p)
}

#[inline]
pub(crate) fn t_index_bits(bits: u64, p: usize) -> usize {
    let diff = (bits & ((1u64 << p) - 1)) ^ mirrored_negative_half(bits, p);
    (64 - diff.leading_zeros()) as usize
}

/// Mask with positions of `a_{±r}`, `1 ≤ r ≤ t`.
#[inline]
pub(crate) fn pm_mask(p: usize, t: usize) -> u64 {
    let pos = (1u64 << t) - 1;
    let neg = (pos.reverse_bits() >> (64 - p)) << (p + 1);
    pos | neg
}

#[inline]
pub(crate) fn prime_bits(bits: u64, p: usize, t: usize) -> u64 {
    bits ^ pm_mask(p, t)
}

#[inline]
pub(crate) fn reverse_bits(bits: u64, p: usize) -> u64 {
    // Reversing the whole (2p+1)-bit word maps position k to 2p-k, which sends
    // a_r (k = r-1) to a_{-r} (k = 2p+1-r) and fixes a_0 (k = p).
    bits.reverse_bits() >> (64 - width(p))
}

/// Number of configurations with `T(a) = level`.
pub fn t_level_size(p: usize, level: usize) -> usize {
    if level == 0 {
        1 << (p + 1)
    } else {
        1 << (p + level)
    }
}

/// The `x`-th configuration with `T(a) = level`, `x < t_level_size(p, level)`.
///
/// Free bits: `a_1..a_p, a_0` take the low `p+1` bits of `x`, and
/// `a_{-1}..a_{-(level-1)}` take the next `level-1` bits. Then
/// `a_{-level} = -a_level` and `a_{-r} = a_r` for `r > level`.
#[inline]
pub fn t_level_config(p: usize, level: usize, x: u64) -> u64 {
    let low = x & ((1u64 << (p + 1)) - 1);
    let positive = low & ((1u64 << p) - 1);
    // mirror of the positive half onto the negative half
    let mirror = (positive.reverse_bits() >> (64 - p)) << (p + 1);
    if level == 0 {
        return low | mirror;
    }
    let keep_mirror = mirror & !pm_mask(p, level);
    let mut bits = low | keep_mirror;
    // a_{-level} = -a_level
    let a_level = (positive >> (level - 1)) & 1;
    bits |= (a_level ^ 1) << (2 * p + 1 - level);
    // free a_{-1} .. a_{-(level-1)}
    let free = x >> (p + 1);
    for r in 1..level {
        bits |= ((free >> (r - 1)) & 1) << (2 * p + 1 - r);
    }
    bits
}

/// `⟨x| e^{i·sign·βX} |y⟩`.
#[inline]
pub fn transfer_amp(x: i8, y: i8, beta: f64, sign: i8) -> Complex64 {
    if x == y {
        Complex64::new(beta.cos(), 0.0)
    } else {
        Complex64::new(0.0, f64::from(sign) * beta.sin())
    }
}

/// `f(a)` evaluated literally as the product of the `2p` transfer amplitudes.
pub fn f_weight(a: SpinConfig, params: &QaoaParams) -> Complex64 {
    let p = params.p;
    debug_assert_eq!(a.p, p);
    let mut acc = Complex64::new(0.5, 0.0);
    // forward chain a_1 → a_2 → … → a_p → a_0 with +β_r
    for r in 1..=p {
        let next = if r < p {
            a.spin(r as isize + 1)
        } else {
            a.spin(0)
        };
        acc *= transfer_amp(a.spin(r as isize), next, params.beta[r - 1], 1);
    }
    // backward chain a_0 → a_{-p} → … → a_{-1} with −β_r
    let mut prev = a.spin(0);
    for r in (1..=p).rev() {
        let cur = a.spin(-(r as isize));
        acc *= transfer_amp(prev, cur, params.beta[r - 1], -1);
        prev = cur;
    }
    acc
}

/// Table-driven `f(a)`.
///
/// `f` depends only on which adjacent bits differ; the `2p` difference bits
/// are split into a forward and a backward half with `2^p` products each.
#[derive(Debug, Clone)]
pub struct FWeights {
    p: usize,
    forward: Vec<Complex64>,
    backward: Vec<Complex64>,
}

impl FWeights {
    pub fn new(params: &QaoaParams) -> Self {
        let p = params.p;
        let size = 1usize << p;
        let mut forward = vec![Complex64::new(0.0, 0.0); size];
        let mut backward = vec![Complex64::new(0.0, 0.0); size];
        // forward difference bit k (0 ≤ k < p) pairs positions k, k+1 with β_{k+1}
        // backward difference bit k (0 ≤ k < p) is global bit p+k with β_{p-k}
        for d in 0..size {
            let mut fw = Complex64::new(0.5, 0.0);
            let mut bw = Complex64::new(1.0, 0.0);
            for k in 0..p {
                let differ = (d >> k) & 1 == 1;
                let bf = params.beta[k];
                let bb = params.beta[p - 1 - k];
                fw *= if differ {
                    Complex64::new(0.0, bf.sin())
                } else {
                    Complex64::new(bf.cos(), 0.0)
                };
                bw *= if differ {
                    Complex64::new(0.0, -bb.sin())
                } else {
                    Complex64::new(bb.cos(), 0.0)
                };
            }
            forward[d] = fw;
            backward[d] = bw;
        }
        Self {
            p,
            forward,
            backward,
        }
    }

    #[inline]
    pub fn get(&self, bits: u64) -> Complex64 {
        let p = self.p;
        let diff = (bits ^ (bits >> 1)) & ((1u64 << (2 * p)) - 1);
        let lo = (diff & ((1u64 << p) - 1)) as usize;
        let hi = (diff >> p) as usize;
        self.forward[lo] * self.backward[hi]
    }

    /// `f` for every configuration, indexed by packed bits.
    pub fn table(&self) -> Vec<Complex64> {
        (0..config_count(self.p) as u64)
            .map(|b| self.get(b))
            .collect()
    }
}
