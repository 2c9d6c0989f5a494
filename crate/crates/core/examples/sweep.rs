//! Optimize depths 1..=p_max on the infinite-D objective and certify each optimum.

use std::time::Instant;

use qaoa_girth::optim::{certify, infinite_objective, sweep, OptimizerConfig};

fn main() {
    let p_max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let seed: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let config = OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    };
    let t = Instant::now();
    let recs = sweep(p_max, 2, &config).expect("sweep failed");
    for r in &recs {
        let cert = certify(&infinite_objective, &r.params, 1e-6).expect("certify failed");
        println!(
            "p={:2} nu={:.6} conv={} grad={:.1e} cert={:.1e} evals={} gamma={:.4?} beta={:.4?}",
            r.params.p,
            r.value,
            r.converged,
            r.grad_norm,
            cert,
            r.n_evals,
            r.params.gamma,
            r.params.beta
        );
    }
    println!("{:.1}s", t.elapsed().as_secs_f64());
}
