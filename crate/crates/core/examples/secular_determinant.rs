//! The vertex-sized secular determinant against the arc-sized one, and its
//! behaviour across a pole of the edge factors.

use num_complex::Complex64;
use qgwalk::coins::{AlphaWeights, Lambda, QuantumGraphParams};
use qgwalk::graph::{ArcSpace, Graph};
use qgwalk::quantum_graph::{direct_determinant, secular_normalized, secular_reduced};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qgwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Graph::complete(4)?;
    let space = ArcSpace::new(&g);
    let q = QuantumGraphParams::uniform(&g, 1.0, Lambda::Finite(1.5));
    let w = AlphaWeights::random(&space, &mut rng);
    let t = Complex64::from_polar(0.8, 0.4);
    for k in [0.7, 2.2, 5.9] {
        let direct = direct_determinant(&space, &q, &w, k, t)?;
        let reduced = secular_reduced(&space, &q, &w, k, t)?;
        println!("k = {k}: direct {direct:.6}, reduced {reduced:.6}");
    }

    let one = Complex64::new(1.0, 0.0);
    let uniform = AlphaWeights::uniform(&space);
    println!("t = 1 near the pole k = pi:");
    for dk in [-1e-2, -1e-6, 0.0, 1e-6, 1e-2] {
        let k = std::f64::consts::PI + dk;
        let plain = secular_reduced(&space, &q, &uniform, k, one).map(|z| format!("{:.3e}", z.norm()));
        let normalized = secular_normalized(&space, &q, &uniform, k, one)?;
        println!("  k = pi{dk:+e}: reduced {}, normalized {:.3e}", plain.unwrap_or_else(|e| e.to_string()), normalized.norm());
    }
    Ok(())
}
