//! The two-component walk on a ring, its transfer-matrix and Klein-Gordon
//! forms, and the same walk run through the general graph engine.

use num_complex::Complex64;
use qgwalk::dynamics::{cycle_embedding, one_dim_walk};

fn main() -> qgwalk::Result<()> {
    let sites = 31;
    let mut right = vec![Complex64::new(0.0, 0.0); sites];
    let left = right.clone();
    right[sites / 2] = Complex64::new(1.0, 0.0);
    let (a, b) = (0.6, 0.8);
    let w = one_dim_walk(a, b, sites, 12, &right, &left)?;
    println!("a = {a}, b = {b}");
    println!("transfer-matrix residual {:.1e}", w.matrix_form_residual);
    println!("Klein-Gordon residual {:.1e}", w.klein_gordon_residual);
    let e = cycle_embedding(&w)?;
    println!("engine on C{sites}: G-type {:.1e}, A-type {:.1e}", e.g_type, e.a_type);
    let last = w.right.len() - 1;
    let density: Vec<String> = (0..sites)
        .map(|j| format!("{:.3}", w.right[last][j].norm_sqr() + w.left[last][j].norm_sqr()))
        .collect();
    println!("density after {last} steps: {}", density.join(" "));
    Ok(())
}
