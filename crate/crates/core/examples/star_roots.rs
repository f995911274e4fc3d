//! Eigenvalues of quantum graphs found as wavenumbers where the walk has a
//! stationary state: the Neumann star and a magnetic graph with a tail.

use qgwalk::coins::{Lambda, QuantumGraphParams};
use qgwalk::graph::{ArcSpace, Graph};
use qgwalk::quantum_graph::{scan_roots, ScanOptions};

fn main() -> qgwalk::Result<()> {
    let star = Graph::star(3)?;
    let q = QuantumGraphParams::uniform(&star, 1.0, Lambda::NEUMANN);
    let scan = scan_roots(&ArcSpace::new(&star), &q, &ScanOptions::new(0.1, 10.0))?;
    println!("S3 Neumann, L = 1 (k in units of pi):");
    for r in &scan.roots {
        println!("  {:.10}  x{}", r.k / std::f64::consts::PI, r.multiplicity);
    }

    let paw = Graph::new(4, &[(1, 2), (2, 3), (3, 1), (3, 4)])?;
    let q = QuantumGraphParams::new(
        &paw,
        vec![0.5, 2.0, 1.2, 0.3],
        vec![Lambda::NEUMANN, Lambda::Finite(2.0), Lambda::Finite(0.4), Lambda::Dirichlet],
        vec![0.3, 0.0, -1.0, 1.5],
    )?;
    let scan = scan_roots(&ArcSpace::new(&paw), &q, &ScanOptions::new(0.5, 6.0))?;
    println!("triangle with tail, Robin and Dirichlet vertices, magnetic potential:");
    for r in &scan.roots {
        println!("  k = {:.12}  x{}  residual {:.1e}", r.k, r.multiplicity, r.residual);
    }
    Ok(())
}
