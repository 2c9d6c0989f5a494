//! Evaluate the fast `D → ∞` iteration at the published optimal angles.
//!
//! `cargo run --release --example optimal_values -- 12`

use std::time::Instant;

use qaoa_girth::infinite_d::nu_infinite_fast;
use qaoa_girth::published;

fn main() {
    let p_max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    for p in 1..=p_max {
        let angles = published::angles(p).expect("published angles");
        let start = Instant::now();
        let nu = nu_infinite_fast(&angles.params()).expect("evaluation");
        println!(
            "p={p:2}  nu={nu:.6}  published={:.4}  {:.3}s",
            published::nu_bar(p).unwrap(),
            start.elapsed().as_secs_f64()
        );
    }
}
