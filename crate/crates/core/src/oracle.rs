//! Brute-force statevector oracle on the explicit light-cone tree.
//!
//! The depth-p QAOA on a graph of girth `> 2p+1` only sees the distance-p
//! neighbourhood of an edge, which is a pair of glued `D`-ary trees (or the
//! corresponding hypertree for `q ≥ 3`). This module builds that tree,
//! simulates the circuit on it amplitude by amplitude, and reads off the
//! central-edge expectation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::QaoaParams;
use crate::error::{QaoaError, Result};
use crate::par;

/// Largest tree simulated (`2^26` amplitudes, 1 GiB).
pub const QUBIT_CAP: usize = 26;
/// Allowed drift of the state norm after any layer.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Allowed spread of satisfied fractions across coupling draws.
pub const J_SPREAD_TOLERANCE: f64 = 1e-12;

/// An explicit (hyper)tree. Hyperedge 0 is the central edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub q: usize,
    #[serde(rename = "D")]
    pub branching: u64,
    /// Number of levels hanging off each central vertex.
    pub p: usize,
    pub hyperedges: Vec<Vec<usize>>,
    pub couplings: Vec<i8>,
}

impl TreeSpec {
    pub fn num_vertices(&self) -> usize {
        self.hyperedges
            .iter()
            .flat_map(|e| e.iter())
            .max()
            .map_or(0, |&v| v + 1)
    }

    pub fn central_edge(&self) -> &[usize] {
        &self.hyperedges[0]
    }

    /// Copy with new couplings.
    pub fn with_couplings(&self, couplings: Vec<i8>) -> Result<TreeSpec> {
        if couplings.len() != self.hyperedges.len() {
            return Err(QaoaError::InvalidArgument(format!(
                "{} couplings for {} hyperedges",
                couplings.len(),
                self.hyperedges.len()
            )));
        }
        Ok(TreeSpec {
            couplings,
            ..self.clone()
        })
    }

    fn edge_masks(&self) -> Vec<u64> {
        self.hyperedges
            .iter()
            .map(|e| e.iter().fold(0u64, |m, &v| m | 1u64 << v))
            .collect()
    }

    fn validate(&self) -> Result<usize> {
        if self.hyperedges.is_empty() {
            return Err(QaoaError::InvalidArgument("tree has no hyperedges".into()));
        }
        let n = self.num_vertices();
        if n > QUBIT_CAP {
            return Err(QaoaError::SizeCap {
                qubits: n,
                cap: QUBIT_CAP,
            });
        }
        if self.couplings.len() != self.hyperedges.len() {
            return Err(QaoaError::InvalidArgument(format!(
                "{} couplings for {} hyperedges",
                self.couplings.len(),
                self.hyperedges.len()
            )));
        }
        if self.couplings.iter().any(|&j| j != 1 && j != -1) {
            return Err(QaoaError::InvalidArgument("couplings must be ±1".into()));
        }
        for e in &self.hyperedges {
            let mut sorted = e.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if e.len() != self.q || sorted.len() != self.q {
                return Err(QaoaError::InvalidArgument(format!(
                    "hyperedge {e:?} is not a set of {} vertices",
                    self.q
                )));
            }
        }
        Ok(n)
    }
}

/// Vertex count of the tree `build_tree(q, D, depth)` would return.
pub fn tree_vertex_count(q: usize, branching: u64, depth: usize) -> Option<usize> {
    let fan = (branching as usize).checked_mul(q.checked_sub(1)?)?;
    let mut layer = q;
    let mut total = q;
    for _ in 0..depth {
        layer = layer.checked_mul(fan)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// Build the light-cone tree: a central `q`-edge, and below every vertex
/// at distance `< depth` from it, `D` fresh hyperedges with `q − 1` new
/// vertices each. All couplings are −1.
pub fn build_tree(q: usize, branching: u64, depth: usize) -> Result<TreeSpec> {
    if q < 2 {
        return Err(QaoaError::InvalidArgument(format!(
            "clause arity q = {q} < 2"
        )));
    }
    if branching == 0 {
        return Err(QaoaError::InvalidArgument(
            "branching D must be at least 1".into(),
        ));
    }
    let n = tree_vertex_count(q, branching, depth).unwrap_or(usize::MAX);
    if n > QUBIT_CAP {
        return Err(QaoaError::SizeCap {
            qubits: n,
            cap: QUBIT_CAP,
        });
    }
    let mut hyperedges = vec![(0..q).collect::<Vec<_>>()];
    let mut frontier: Vec<usize> = (0..q).collect();
    let mut next_vertex = q;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &v in &frontier {
            for _ in 0..branching {
                let mut edge = vec![v];
                for _ in 1..q {
                    edge.push(next_vertex);
                    next.push(next_vertex);
                    next_vertex += 1;
                }
                hyperedges.push(edge);
            }
        }
        frontier = next;
    }
    let couplings = vec![-1; hyperedges.len()];
    Ok(TreeSpec {
        q,
        branching,
        p: depth,
        hyperedges,
        couplings,
    })
}

/// Dense `2^n` amplitude vector. Bit `v` of the index is qubit `v`, set
/// meaning `Z = −1`.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

fn parity_sign(idx: usize, mask: u64) -> f64 {
    if (idx as u64 & mask).count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

impl StateVector {
    /// `|+⟩^n`.
    pub fn plus(n: usize) -> Result<StateVector> {
        if n > QUBIT_CAP {
            return Err(QaoaError::SizeCap {
                qubits: n,
                cap: QUBIT_CAP,
            });
        }
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector {
            n,
            amps: vec![amp; dim],
        })
    }

    pub fn norm(&self) -> f64 {
        par::sum_real(self.amps.len(), |i| self.amps[i].norm_sqr()).sqrt()
    }

    fn check_norm(&self, layer: impl FnOnce() -> String) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QaoaError::NormDrift {
                norm,
                layer: layer(),
            });
        }
        Ok(())
    }

    /// `exp(−i γ C)` with `C = (1/√D) Σ_e J_e Π_{v∈e} Z_v`.
    pub fn apply_cost(&mut self, masks: &[u64], couplings: &[i8], scale: f64, gamma: f64) {
        self.amps.par_iter_mut().enumerate().for_each(|(idx, a)| {
            let c: f64 = masks
                .iter()
                .zip(couplings)
                .map(|(&m, &j)| j as f64 * parity_sign(idx, m))
                .sum();
            *a *= Complex64::from_polar(1.0, -gamma * scale * c);
        });
    }

    /// `exp(−i β X)` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let c = beta.cos();
        let s = Complex64::new(0.0, -beta.sin());
        for k in 0..self.n {
            let half = 1usize << k;
            self.amps.par_chunks_mut(2 * half).for_each(|block| {
                let (lo, hi) = block.split_at_mut(half);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = a * c + b * s;
                    *y = a * s + b * c;
                }
            });
        }
    }

    /// `⟨Π_{v∈mask} Z_v⟩`.
    pub fn expect_parity(&self, mask: u64) -> f64 {
        par::sum_real(self.amps.len(), |i| {
            self.amps[i].norm_sqr() * parity_sign(i, mask)
        })
    }
}

/// Prepare the QAOA state on `tree`, checking the norm after every layer.
pub fn qaoa_state(tree: &TreeSpec, params: &QaoaParams) -> Result<StateVector> {
    let n = tree.validate()?;
    if params.q != tree.q {
        return Err(QaoaError::InvalidArgument(format!(
            "params have q = {}, tree has q = {}",
            params.q, tree.q
        )));
    }
    let masks = tree.edge_masks();
    let scale = 1.0 / (tree.branching as f64).sqrt();
    let mut psi = StateVector::plus(n)?;
    for (layer, (&g, &b)) in params.gamma.iter().zip(&params.beta).enumerate() {
        psi.apply_cost(&masks, &tree.couplings, scale, g);
        psi.check_norm(|| format!("cost layer {}", layer + 1))?;
        psi.apply_mixer(b);
        psi.check_norm(|| format!("mixer layer {}", layer + 1))?;
    }
    Ok(psi)
}

fn central_nu(tree: &TreeSpec, psi: &StateVector) -> f64 {
    let mask = tree.edge_masks()[0];
    let j = tree.couplings[0] as f64;
    // satisfied fraction (1 + J⟨ΠZ⟩)/2 = 1/2 + ν sqrt(q/(2D))
    j * (tree.branching as f64 / (2.0 * tree.q as f64)).sqrt() * psi.expect_parity(mask)
}

/// `ν` read off the central hyperedge of `tree`.
///
/// With all couplings −1 this is `−sqrt(D/(2q)) ⟨Z_1⋯Z_q⟩`, which for
/// MaxCut is `−(√D/2)⟨Z_L Z_R⟩`.
pub fn statevector_nu(tree: &TreeSpec, params: &QaoaParams) -> Result<f64> {
    let psi = qaoa_state(tree, params)?;
    Ok(central_nu(tree, &psi))
}

/// Satisfied fractions for one coupling assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingDraw {
    pub couplings: Vec<i8>,
    /// `⟨C_J^XOR⟩/|E|` over all hyperedges of the tree.
    pub tree_fraction: f64,
    /// Satisfied probability of the central hyperedge alone.
    pub central_fraction: f64,
}

/// Outcome of [`j_independence_test`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JReport {
    pub seed: u64,
    /// Draw 0 is the all-(−1) reference; the rest are random.
    pub draws: Vec<CouplingDraw>,
    pub max_tree_deviation: f64,
    pub max_central_deviation: f64,
    pub passed: bool,
}

fn spread(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Simulate the QAOA with `draws` random ±1 coupling assignments, each
/// state prepared with its own `C_J`, and compare the satisfied fractions
/// with the all-(−1) reference. Passes iff every spread is below 1e-12.
pub fn j_independence_test(
    tree: &TreeSpec,
    params: &QaoaParams,
    draws: usize,
    seed: u64,
) -> Result<JReport> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let m = tree.hyperedges.len();
    let mut assignments = vec![vec![-1i8; m]];
    for _ in 0..draws {
        assignments.push(
            (0..m)
                .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                .collect(),
        );
    }
    let masks = tree.edge_masks();
    let mut results = Vec::with_capacity(assignments.len());
    for couplings in assignments {
        let t = tree.with_couplings(couplings)?;
        let psi = qaoa_state(&t, params)?;
        let per_edge: Vec<f64> = masks
            .iter()
            .zip(&t.couplings)
            .map(|(&mask, &j)| 0.5 * (1.0 + j as f64 * psi.expect_parity(mask)))
            .collect();
        results.push(CouplingDraw {
            tree_fraction: per_edge.iter().sum::<f64>() / m as f64,
            central_fraction: per_edge[0],
            couplings: t.couplings,
        });
    }
    let max_tree_deviation = spread(results.iter().map(|d| d.tree_fraction));
    let max_central_deviation = spread(results.iter().map(|d| d.central_fraction));
    Ok(JReport {
        seed,
        passed: max_tree_deviation < J_SPREAD_TOLERANCE
            && max_central_deviation < J_SPREAD_TOLERANCE,
        draws: results,
        max_tree_deviation,
        max_central_deviation,
    })
}
