//! Max-q-XORSAT generalizations.
//!
//! The satisfied fraction on `(D+1)`-regular `q`-uniform hypergraphs of
//! girth `> 2p+1` is `1/2 + ν_p^[q](D, γ, β)·sqrt(q/(2D))`, independent of
//! the clause signs. MaxCut is `q = 2`, where `ν_p^[2] = ν_p`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{config_count, gamma_vec, FWeights, GammaVec, QaoaParams};
use crate::error::{QaoaError, Result};
use crate::finite_d::{
    check_branching, h_init, one_minus_pow, real_part, versines, weighted, HTable,
};
use crate::infinite_d::{self, GMatrix};
use crate::oracle::TreeSpec;
use crate::par;

fn check_arity(q: usize) -> Result<()> {
    if q < 2 {
        return Err(QaoaError::InvalidParams(format!(
            "clause arity q = {q} < 2"
        )));
    }
    Ok(())
}

/// Add `Π_i w[b^i] · kernel[x ⊕ b^1 ⊕ … ⊕ b^k]` over all `k`-tuples.
fn tuple_sum(w: &[Complex64], kernel: &[f64], x: usize, k: usize) -> Complex64 {
    if k == 0 {
        return Complex64::new(kernel[x], 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, wb) in w.iter().enumerate() {
        if *wb == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += wb * tuple_sum(w, kernel, x ^ b, k - 1);
    }
    acc
}

/// One finite-D step over `(q−1)`-tuples:
/// `H^(m)(a) = (Σ_{b^1..b^{q-1}} cos(Γ·(a b^1 ⋯ b^{q-1})/√D) Π_i f(b^i) H^(m-1)(b^i))^D`.
pub fn h_step_q(prev: &HTable, q: usize, params: &QaoaParams, gamma: &GammaVec) -> Result<HTable> {
    check_arity(q)?;
    let p = params.p;
    if prev.p != p || prev.level >= p {
        return Err(QaoaError::InvalidArgument(format!(
            "table at level {} (depth {}) cannot step for p = {p}",
            prev.level, prev.p
        )));
    }
    check_branching(prev.branching)?;
    let scale = 1.0 / (prev.branching as f64).sqrt();
    let f = FWeights::new(params).table();
    let w = weighted(&f, prev);
    // the tuple weights sum to one, so the base is 1 minus the versine sum
    let kernel = versines(gamma, scale);
    let entries: Vec<Complex64> = (0..config_count(p))
        .into_par_iter()
        .map(|a| one_minus_pow(tuple_sum(&w, &kernel, a, q - 1), prev.branching))
        .collect();
    if entries
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(QaoaError::NumericFailure("non-finite H entry".into()));
    }
    Ok(HTable {
        level: prev.level + 1,
        p,
        branching: prev.branching,
        entries,
    })
}

/// All `p` steps of the q-body finite-D iteration.
pub fn h_final_q(branching: u64, q: usize, params: &QaoaParams) -> Result<HTable> {
    check_branching(branching)?;
    let gamma = gamma_vec(params);
    let mut h = h_init(params.p, branching);
    for _ in 0..params.p {
        h = h_step_q(&h, q, params, &gamma)?;
    }
    Ok(h)
}

/// `ν_p^[q](D, γ, β) = i sqrt(D/(2q)) Σ_{a^1..a^q} sin(Γ·(a^1⋯a^q)/√D) Π_i a^i_0 f(a^i) H^(p)(a^i)`.
///
/// The sum has `2^{(2p+1)q}` terms; keep `p` and `q` small.
pub fn nu_q_finite(branching: u64, q: usize, params: &QaoaParams) -> Result<f64> {
    check_arity(q)?;
    let p = params.p;
    let h = h_final_q(branching, q, params)?;
    let gamma = gamma_vec(params);
    let scale = 1.0 / (branching as f64).sqrt();
    let f = FWeights::new(params).table();
    let a0 = 1usize << p;
    let w: Vec<Complex64> = weighted(&f, &h)
        .into_iter()
        .enumerate()
        .map(|(a, v)| if a & a0 != 0 { -v } else { v })
        .collect();
    let sines: Vec<f64> = gamma
        .dot_table()
        .iter()
        .map(|d| (d * scale).sin())
        .collect();
    let total = par::sum_complex(config_count(p), |a| w[a] * tuple_sum(&w, &sines, a, q - 1));
    let prefactor = Complex64::new(0.0, (branching as f64 / (2.0 * q as f64)).sqrt());
    real_part(prefactor * total)
}

/// Literal q-body `G` step.
pub fn g_step_q(
    prev: &GMatrix,
    q: usize,
    params: &QaoaParams,
    gamma: &GammaVec,
) -> Result<GMatrix> {
    infinite_d::g_step_naive_q(prev, q, params, gamma)
}

/// Path used to evaluate the `D → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Naive,
    Fast,
}

/// `ν_p^[q](γ, β) = (i/sqrt(2q)) Σ_j Γ_j (G^(p)_{0,j})^q`.
pub fn nu_q_infinite(q: usize, params: &QaoaParams, method: Method) -> Result<f64> {
    match method {
        Method::Naive => infinite_d::nu_q_infinite_naive(q, params),
        Method::Fast => infinite_d::nu_q_infinite_fast(q, params),
    }
}

/// `ν_1^[q](γ, β)` in closed form.
///
/// At depth one `G^(1)_{0,1} = cos 2β − i sin 2β · e^{−2γ²}` for every `q`,
/// and `ν = −(2/sqrt(2q)) γ Im[(G_{0,1})^q]`.
pub fn nu_q_p1_closed_form(q: usize, gamma: f64, beta: f64) -> f64 {
    let g01 = Complex64::new(
        (2.0 * beta).cos(),
        -(2.0 * beta).sin() * (-2.0 * gamma * gamma).exp(),
    );
    -2.0 / (2.0 * q as f64).sqrt() * gamma * g01.powu(q as u32).im
}

/// Outcome of the sign-absorbing walk over a hypertree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauge {
    /// Vertices whose spin was redefined `Z → −Z`.
    pub flipped: Vec<usize>,
    /// Couplings after the redefinitions; all −1 on a tree.
    pub normalized: Vec<i8>,
}

/// Walk the hypertree from the central hyperedge outwards and absorb each
/// coupling's sign into a vertex not yet fixed, so that every coupling
/// becomes −1. Errors on a Berge cycle.
pub fn gauge_to_negative(tree: &TreeSpec, couplings: &[i8]) -> Result<Gauge> {
    let edges = &tree.hyperedges;
    if couplings.len() != edges.len() {
        return Err(QaoaError::InvalidArgument(format!(
            "{} couplings for {} hyperedges",
            couplings.len(),
            edges.len()
        )));
    }
    if let Some(bad) = couplings.iter().find(|&&j| j != 1 && j != -1) {
        return Err(QaoaError::InvalidArgument(format!(
            "coupling {bad} is not ±1"
        )));
    }
    let n = tree.num_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in edges.iter().enumerate() {
        for &v in edge {
            incident[v].push(e);
        }
    }
    let mut sign = vec![1i8; n];
    let mut fixed = vec![false; n];
    let mut done = vec![false; edges.len()];
    let mut flipped = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    // every connected component gets its own root edge
    for root in 0..edges.len() {
        if done[root] {
            continue;
        }
        queue.push_back(root);
        done[root] = true;
        while let Some(e) = queue.pop_front() {
            let edge = &edges[e];
            let free: Vec<usize> = edge.iter().copied().filter(|&v| !fixed[v]).collect();
            if edge.len() - free.len() > 1 {
                return Err(QaoaError::Cycle { edge: e });
            }
            let Some(&pivot) = free.first() else {
                return Err(QaoaError::Cycle { edge: e });
            };
            let effective: i8 = couplings[e] * edge.iter().map(|&v| sign[v]).product::<i8>();
            if effective == 1 {
                sign[pivot] = -1;
                flipped.push(pivot);
            }
            for &v in &free {
                fixed[v] = true;
            }
            for &v in edge {
                for &next in &incident[v] {
                    if !done[next] {
                        done[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let normalized = edges
        .iter()
        .zip(couplings)
        .map(|(edge, &j)| j * edge.iter().map(|&v| sign[v]).product::<i8>())
        .collect();
    Ok(Gauge {
        flipped,
        normalized,
    })
}

/// True iff every coupling can be reset to −1 by spin redefinitions.
pub fn j_resign_check(tree: &TreeSpec, couplings: &[i8]) -> Result<bool> {
    let gauge = gauge_to_negative(tree, couplings)?;
    Ok(gauge.normalized.iter().all(|&j| j == -1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_d::{h_step, nu_finite};
    use crate::oracle::build_tree;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    #[test]
    fn q2_step_matches_maxcut_step() {
        let params = QaoaParams::maxcut(vec![0.4, 0.7], vec![0.5, 0.2]).unwrap();
        let gamma = gamma_vec(&params);
        let h0 = h_init(2, 3);
        let a = h_step(&h0, &params, &gamma).unwrap();
        let b = h_step_q(&h0, 2, &params, &gamma).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert!((x - y).norm() < 1e-12);
        }
        let nu2 = nu_q_finite(3, 2, &params).unwrap();
        assert!((nu2 - nu_finite(3, &params).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zero_gamma_is_trivial() {
        let params = QaoaParams::new(3, vec![0.0], vec![0.6]).unwrap();
        let h = h_final_q(2, 3, &params).unwrap();
        assert!(h.entries.iter().all(|z| (z - 1.0).norm() < 1e-13));
        assert_eq!(nu_q_finite(2, 3, &params).unwrap(), 0.0);
    }

    #[test]
    fn b0_entries_are_one_for_q3() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        for p in 1..=2 {
            let params = QaoaParams::new(
                3,
                (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )
            .unwrap();
            let gamma = gamma_vec(&params);
            let mut h = h_init(p, 2);
            for _ in 0..p {
                h = h_step_q(&h, 3, &params, &gamma).unwrap();
                for a in crate::SpinConfig::all(p).filter(|a| a.in_b0()) {
                    assert!((h.get(a.bits()) - 1.0).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_reduces_to_maxcut() {
        for &(g, b) in &[(0.5, 0.41), (0.3, 0.2), (-1.1, 2.0)] {
            let expected = g * (4.0f64 * b).sin() * (-2.0 * g * g).exp();
            assert!((nu_q_p1_closed_form(2, g, b) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_iteration_for_q3() {
        for &(g, b) in &[(0.4, 0.3), (0.9, -0.7), (0.1, 1.2)] {
            let params = QaoaParams::new(3, vec![g], vec![b]).unwrap();
            let fast = nu_q_infinite(3, &params, Method::Fast).unwrap();
            let naive = nu_q_infinite(3, &params, Method::Naive).unwrap();
            let cf = nu_q_p1_closed_form(3, g, b);
            assert!((fast - cf).abs() < 1e-13);
            assert!((naive - cf).abs() < 1e-13);
        }
    }

    #[test]
    fn gauge_walk_normalizes_trees() {
        let tree = build_tree(3, 2, 1).unwrap();
        let m = tree.hyperedges.len();
        let all_neg = vec![-1i8; m];
        let g = gauge_to_negative(&tree, &all_neg).unwrap();
        assert!(g.flipped.is_empty());
        assert!(j_resign_check(&tree, &vec![1i8; m]).unwrap());
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        for _ in 0..20 {
            let j: Vec<i8> = (0..m).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            assert!(j_resign_check(&tree, &j).unwrap());
        }
    }

    #[test]
    fn gauge_walk_detects_cycles() {
        let mut tree = build_tree(2, 2, 1).unwrap();
        // close a triangle between the two children of the left root
        let kids: Vec<usize> = tree
            .hyperedges
            .iter()
            .filter(|e| e.contains(&0) && !e.contains(&1))
            .map(|e| *e.iter().find(|&&v| v != 0).unwrap())
            .collect();
        tree.hyperedges.push(vec![kids[0], kids[1]]);
        let j = vec![-1i8; tree.hyperedges.len()];
        assert!(matches!(
            gauge_to_negative(&tree, &j),
            Err(QaoaError::Cycle { .. })
        ));
    }
}
