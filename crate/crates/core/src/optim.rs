//! Maximization of `ν` over `(γ, β)`.
//!
//! L-BFGS ascent (memory 10, strong Wolfe line search) on finite-difference
//! gradients, multistart plus a warm start interpolated from the previous
//! depth.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::QaoaParams;
use crate::error::{QaoaError, Result};
use crate::infinite_d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientMode {
    /// `2p + 1` evaluations.
    Forward,
    /// `4p` evaluations.
    Central,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub gradient_mode: GradientMode,
    pub fd_step: f64,
    /// Sup-norm of the gradient at which the ascent stops.
    pub grad_tolerance: f64,
    pub max_iterations: usize,
    pub multistart_count: usize,
    pub seed: u64,
    pub memory: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            gradient_mode: GradientMode::Forward,
            fd_step: 1e-6,
            grad_tolerance: 1e-7,
            max_iterations: 500,
            multistart_count: 8,
            seed: 0,
            memory: 10,
            c1: 1e-4,
            c2: 0.9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(QaoaError::InvalidArgument(format!(
                "fd_step {} must be positive",
                self.fd_step
            )));
        }
        if self.grad_tolerance.is_nan() || self.grad_tolerance <= 0.0 {
            return Err(QaoaError::InvalidArgument(format!(
                "grad_tolerance {} must be positive",
                self.grad_tolerance
            )));
        }
        if self.memory == 0 {
            return Err(QaoaError::InvalidArgument(
                "L-BFGS memory must be positive".into(),
            ));
        }
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(QaoaError::InvalidArgument(format!(
                "need 0 < c1 < c2 < 1, got c1 = {}, c2 = {}",
                self.c1, self.c2
            )));
        }
        Ok(())
    }
}

/// A (local) optimum found by [`maximize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub params: QaoaParams,
    pub value: f64,
    /// Sup-norm of the last gradient estimate.
    pub grad_norm: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// The infinite-D objective `ν_p^[q](γ, β)` on the fast path.
pub fn infinite_objective(params: &QaoaParams) -> Result<f64> {
    infinite_d::nu_q_infinite_fast(params.q, params)
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Objective over flattened `(γ, β)` vectors, counting calls.
struct Counted<'a, F> {
    objective: &'a F,
    q: usize,
    evals: usize,
}

impl<F> Counted<'_, F>
where
    F: Fn(&QaoaParams) -> Result<f64>,
{
    fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.evals += 1;
        let params = QaoaParams::from_vec(self.q, x)?;
        let v = (self.objective)(&params)?;
        if !v.is_finite() {
            return Err(QaoaError::EvaluationFailure(format!(
                "objective returned {v} at {x:?}"
            )));
        }
        Ok(v)
    }

    fn gradient_at(
        &mut self,
        x: &[f64],
        base: f64,
        mode: GradientMode,
        h: f64,
    ) -> Result<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        let mut y = x.to_vec();
        for i in 0..x.len() {
            y[i] = x[i] + h;
            let up = self.value(&y)?;
            g[i] = match mode {
                GradientMode::Forward => (up - base) / h,
                GradientMode::Central => {
                    y[i] = x[i] - h;
                    let down = self.value(&y)?;
                    (up - down) / (2.0 * h)
                }
            };
            y[i] = x[i];
        }
        Ok(g)
    }
}

/// Finite-difference gradient of `objective` in the order
/// `(∂γ_1, …, ∂γ_p, ∂β_1, …, ∂β_p)`.
pub fn gradient<F>(objective: &F, params: &QaoaParams, config: &OptimizerConfig) -> Result<Vec<f64>>
where
    F: Fn(&QaoaParams) -> Result<f64>,
{
    config.validate()?;
    let mut c = Counted {
        objective,
        q: params.q,
        evals: 0,
    };
    let x = params.to_vec();
    let base = match config.gradient_mode {
        GradientMode::Forward => c.value(&x)?,
        GradientMode::Central => 0.0,
    };
    c.gradient_at(&x, base, config.gradient_mode, config.fd_step)
}

/// Sup-norm of the central-difference gradient, used to certify optima.
pub fn certify<F>(objective: &F, params: &QaoaParams, fd_step: f64) -> Result<f64>
where
    F: Fn(&QaoaParams) -> Result<f64>,
{
    let config = OptimizerConfig {
        gradient_mode: GradientMode::Central,
        fd_step,
        ..OptimizerConfig::default()
    };
    Ok(sup_norm(&gradient(objective, params, &config)?))
}

/// Iterate of the minimization of `−ν`.
#[derive(Debug, Clone)]
struct Point {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

struct Ascent<'a, F> {
    counted: Counted<'a, F>,
    config: &'a OptimizerConfig,
    mode: GradientMode,
}

impl<F> Ascent<'_, F>
where
    F: Fn(&QaoaParams) -> Result<f64>,
{
    fn point(&mut self, x: Vec<f64>) -> Result<Point> {
        let v = self.counted.value(&x)?;
        let g = self
            .counted
            .gradient_at(&x, v, self.mode, self.config.fd_step)?;
        Ok(Point {
            f: -v,
            g: g.into_iter().map(|d| -d).collect(),
            x,
        })
    }

    fn along(&mut self, start: &Point, d: &[f64], alpha: f64) -> Result<Point> {
        let x = start.x.iter().zip(d).map(|(x, d)| x + alpha * d).collect();
        self.point(x)
    }

    /// Strong Wolfe line search. Returns `Err(best)` on failure, where
    /// `best` is the lowest trial point seen, if any improved on `start`.
    fn line_search(
        &mut self,
        start: &Point,
        d: &[f64],
        alpha0: f64,
    ) -> Result<std::result::Result<(f64, Point), Option<Point>>> {
        let (c1, c2) = (self.config.c1, self.config.c2);
        let dphi0 = dot(&start.g, d);
        let mut best: Option<Point> = None;
        let (mut a_prev, mut f_prev, mut d_prev) = (0.0, start.f, dphi0);
        let mut alpha = alpha0;
        for i in 0..25 {
            let trial = self.along(start, d, alpha)?;
            keep_best(start, &trial, &mut best);
            let dphi = dot(&trial.g, d);
            if trial.f > start.f + c1 * alpha * dphi0 || (i > 0 && trial.f >= f_prev) {
                return self.zoom(
                    start,
                    d,
                    (a_prev, f_prev, d_prev),
                    (alpha, trial.f, dphi),
                    best,
                );
            }
            if dphi.abs() <= -c2 * dphi0 {
                return Ok(Ok((alpha, trial)));
            }
            if dphi >= 0.0 {
                return self.zoom(
                    start,
                    d,
                    (alpha, trial.f, dphi),
                    (a_prev, f_prev, d_prev),
                    best,
                );
            }
            (a_prev, f_prev, d_prev) = (alpha, trial.f, dphi);
            alpha *= 2.0;
        }
        Ok(Err(best))
    }

    #[allow(clippy::type_complexity)]
    fn zoom(
        &mut self,
        start: &Point,
        d: &[f64],
        mut lo: (f64, f64, f64),
        mut hi: (f64, f64, f64),
        mut best: Option<Point>,
    ) -> Result<std::result::Result<(f64, Point), Option<Point>>> {
        let (c1, c2) = (self.config.c1, self.config.c2);
        let dphi0 = dot(&start.g, d);
        for _ in 0..30 {
            let width = (hi.0 - lo.0).abs();
            if width < 1e-14 * lo.0.abs().max(1.0) {
                break;
            }
            let alpha = interpolate_step(lo, hi);
            let trial = self.along(start, d, alpha)?;
            keep_best(start, &trial, &mut best);
            let dphi = dot(&trial.g, d);
            if trial.f > start.f + c1 * alpha * dphi0 || trial.f >= lo.1 {
                hi = (alpha, trial.f, dphi);
            } else {
                if dphi.abs() <= -c2 * dphi0 {
                    return Ok(Ok((alpha, trial)));
                }
                if dphi * (hi.0 - lo.0) >= 0.0 {
                    hi = lo;
                }
                lo = (alpha, trial.f, dphi);
            }
        }
        Ok(Err(best))
    }
}

fn keep_best(start: &Point, trial: &Point, best: &mut Option<Point>) {
    if trial.f < start.f && best.as_ref().is_none_or(|b| trial.f < b.f) {
        *best = Some(trial.clone());
    }
}

/// Cubic interpolation minimizer inside `[lo, hi]`, safeguarded away from
/// the ends and falling back to bisection.
fn interpolate_step(lo: (f64, f64, f64), hi: (f64, f64, f64)) -> f64 {
    let (a, fa, da) = lo;
    let (b, fb, db) = hi;
    let (left, right) = (a.min(b), a.max(b));
    let margin = 0.1 * (right - left);
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    if disc >= 0.0 {
        let d2 = (b - a).signum() * disc.sqrt();
        let t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
        if t.is_finite() && t >= left + margin && t <= right - margin {
            return t;
        }
    }
    0.5 * (a + b)
}

/// L-BFGS ascent on `objective` from `init`.
///
/// Stops when the sup-norm of the gradient estimate is at most
/// `grad_tolerance` (converged) or after `max_iterations`, or when the
/// line search can make no further progress (not converged). The best
/// iterate is returned either way. A forward-difference run switches to
/// central differences after its first line-search failure.
pub fn maximize<F>(
    objective: &F,
    init: &QaoaParams,
    config: &OptimizerConfig,
) -> Result<OptimumRecord>
where
    F: Fn(&QaoaParams) -> Result<f64>,
{
    config.validate()?;
    let q = init.q;
    let mut ascent = Ascent {
        counted: Counted {
            objective,
            q,
            evals: 0,
        },
        config,
        mode: config.gradient_mode,
    };
    let mut cur = ascent.point(init.to_vec())?;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut converged = false;
    for _ in 0..config.max_iterations {
        if sup_norm(&cur.g) <= config.grad_tolerance {
            converged = true;
            break;
        }
        let mut d = two_loop(&cur.g, &memory);
        if dot(&d, &cur.g) >= 0.0 {
            memory.clear();
            d = cur.g.iter().map(|g| -g).collect();
        }
        let alpha0 = if memory.is_empty() {
            (0.1 / sup_norm(&d)).min(1.0)
        } else {
            1.0
        };
        let next = match ascent.line_search(&cur, &d, alpha0)? {
            Ok((_, p)) => p,
            Err(best) => {
                // The forward-difference bias of order h·f'' stops the line
                // search short of the tolerance; polish with central differences.
                memory.clear();
                if let Some(p) = best {
                    cur = p;
                } else if ascent.mode == GradientMode::Central {
                    break;
                }
                if ascent.mode == GradientMode::Forward {
                    ascent.mode = GradientMode::Central;
                    cur = ascent.point(cur.x)?;
                }
                continue;
            }
        };
        let s: Vec<f64> = next.x.iter().zip(&cur.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&cur.g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if memory.len() == config.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        cur = next;
    }
    if !converged && sup_norm(&cur.g) <= config.grad_tolerance {
        converged = true;
    }
    Ok(OptimumRecord {
        params: QaoaParams::from_vec(q, &cur.x)?,
        value: -cur.f,
        grad_norm: sup_norm(&cur.g),
        n_evals: ascent.counted.evals,
        converged,
    })
}

/// `−H g` by the L-BFGS two-loop recursion.
fn two_loop(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut r = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &r);
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let scale = dot(s, y) / dot(y, y);
        r.iter_mut().for_each(|v| *v *= scale);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &r);
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += (a - b) * si;
        }
    }
    r.into_iter().map(|v| -v).collect()
}

/// Resample the curve `values` (taken at `(r−1)/(n−1)`) onto `len` equally
/// spaced points by piecewise-linear interpolation.
fn resample(values: &[f64], len: usize) -> Vec<f64> {
    let n = values.len();
    if n == 1 || len == 1 {
        return vec![values[0]; len];
    }
    (0..len)
        .map(|r| {
            let x = r as f64 / (len - 1) as f64 * (n - 1) as f64;
            let k = (x.floor() as usize).min(n - 2);
            let t = x - k as f64;
            values[k] + t * (values[k + 1] - values[k])
        })
        .collect()
}

/// Depth-`p` starting point from a depth-`(p−1)` optimum: both angle
/// curves are linearly interpolated onto the abscissa `(r−1)/(p−1)`.
pub fn warm_start(prev: &OptimumRecord) -> Result<QaoaParams> {
    let p = prev.params.p + 1;
    QaoaParams::new(
        prev.params.q,
        resample(&prev.params.gamma, p),
        resample(&prev.params.beta, p),
    )
}

/// Random start in `γ_r ∈ (0, 1.2]`, `β_r ∈ (0, π/4]`.
pub fn random_start(rng: &mut Xoshiro256PlusPlus, p: usize, q: usize) -> Result<QaoaParams> {
    let mut draw = |hi: f64| hi * (1.0 - rng.gen::<f64>());
    let gamma = (0..p).map(|_| draw(1.2)).collect();
    let beta = (0..p).map(|_| draw(FRAC_PI_4)).collect();
    QaoaParams::new(q, gamma, beta)
}

/// Run `maximize` from every start concurrently and keep the best, ties
/// broken by start index.
pub fn best_of<F>(
    objective: &F,
    starts: &[QaoaParams],
    config: &OptimizerConfig,
) -> Result<OptimumRecord>
where
    F: Fn(&QaoaParams) -> Result<f64> + Sync,
{
    let records: Vec<Result<OptimumRecord>> = starts
        .par_iter()
        .map(|s| maximize(objective, s, config))
        .collect();
    let mut best: Option<OptimumRecord> = None;
    let mut first_err = None;
    let mut total_evals = 0;
    for r in records {
        match r {
            Ok(rec) => {
                total_evals += rec.n_evals;
                if best.as_ref().is_none_or(|b| rec.value > b.value) {
                    best = Some(rec);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match best {
        Some(mut rec) => {
            rec.n_evals = total_evals;
            Ok(rec)
        }
        None => {
            Err(first_err
                .unwrap_or_else(|| QaoaError::InvalidArgument("no starting points".into())))
        }
    }
}

/// Optimize depths `1..=p_max` with `objective`, each from the configured
/// number of random starts plus the warm start from the previous depth.
///
/// Entries of `extra` join the starts of their own depth. `on_record` sees
/// every record as soon as its depth is done.
pub fn sweep_with<F, G>(
    objective: &F,
    p_max: usize,
    q: usize,
    config: &OptimizerConfig,
    extra: &[QaoaParams],
    mut on_record: G,
) -> Result<Vec<OptimumRecord>>
where
    F: Fn(&QaoaParams) -> Result<f64> + Sync,
    G: FnMut(&OptimumRecord) -> Result<()>,
{
    config.validate()?;
    if p_max == 0 {
        return Err(QaoaError::InvalidArgument(
            "p_max must be at least 1".into(),
        ));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed);
    let mut out: Vec<OptimumRecord> = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let mut starts = Vec::new();
        if let Some(prev) = out.last() {
            starts.push(warm_start(prev)?);
        }
        for e in extra.iter().filter(|e| e.p == p) {
            starts.push(e.with_q(q)?);
        }
        for _ in 0..config.multistart_count {
            starts.push(random_start(&mut rng, p, q)?);
        }
        let rec = best_of(objective, &starts, config)?;
        on_record(&rec)?;
        out.push(rec);
    }
    Ok(out)
}

/// [`sweep_with`] on the infinite-D objective.
pub fn sweep(p_max: usize, q: usize, config: &OptimizerConfig) -> Result<Vec<OptimumRecord>> {
    sweep_with(&infinite_objective, p_max, q, config, &[], |_| Ok(()))
}
