//! Exact large-size performance of the depth-p QAOA on large-girth regular
//! graphs and hypergraphs.
//!
//! The graph is `(D+1)`-regular with girth above `2p+1`, so every depth-p
//! light cone is a `D`-ary (hyper)tree. The cut fraction is
//! `1/2 + ν_p(D, γ, β)/sqrt(D)` for MaxCut and the satisfied fraction is
//! `1/2 + ν_p^[q](D, γ, β)·sqrt(q/(2D))` for Max-q-XORSAT.
//!
//! * [`finite_d`]: dense H-table iteration at finite `D`, `O(p·16^p)`.
//! * [`infinite_d`]: the `D → ∞` G-matrix iteration, naive and fast paths.
//! * [`xorsat`]: the q-body generalizations of both.
//! * [`oracle`]: brute-force statevector simulation on the explicit tree.
//! * [`optim`]: L-BFGS parameter optimization with finite-difference gradients.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod finite_d;
pub mod infinite_d;
pub mod optim;
pub mod oracle;
mod par;
pub mod published;
pub mod xorsat;

pub use algebra::{gamma_vec, GammaVec, QaoaParams, SpinConfig};
pub use error::{QaoaError, Result};
