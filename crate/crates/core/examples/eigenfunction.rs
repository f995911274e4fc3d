//! Reconstruct the eigenfunction from a stationary walk state and check the
//! vertex conditions and the four equivalent stationarity statements.

use qgwalk::coins::{Lambda, QuantumGraphParams};
use qgwalk::graph::{ArcSpace, Graph};
use qgwalk::quantum_graph::{
    proposition_equivalences, scan_roots, stationary_vector, verify_boundary_conditions, wavefunction, ScanOptions,
};

fn main() -> qgwalk::Result<()> {
    let g = Graph::new(4, &[(1, 2), (2, 3), (3, 1), (3, 4)])?;
    let space = ArcSpace::new(&g);
    let q = QuantumGraphParams::new(
        &g,
        vec![0.5, 2.0, 1.2, 0.3],
        vec![Lambda::NEUMANN, Lambda::Finite(2.0), Lambda::Finite(0.4), Lambda::Dirichlet],
        vec![0.3, 0.0, -1.0, 1.5],
    )?;
    let root = scan_roots(&space, &q, &ScanOptions::new(0.5, 3.0))?.roots[0].clone();
    let v = stationary_vector(&space, &q, root.k)?;
    let e = wavefunction(&space, &q, &v, 9)?;
    println!("k = {:.12}, indicator {:.1e}", v.k, v.residual);
    for arc in &e.arcs {
        let mid = arc.values[arc.values.len() / 2];
        println!("  arc {:?}: psi(L/2) = {:+.5}{:+.5}i", arc.arc, mid.re, mid.im);
    }
    let report = verify_boundary_conditions(&space, &q, &v, &e);
    for r in &report.vertices {
        println!("  vertex {}: I {:.1e}  II {:.1e}  III {:.1e}", r.vertex, r.symmetry, r.continuity, r.flux);
    }
    let p = proposition_equivalences(&space, &q, &v)?;
    println!("stationarity statements: {:?}", p.residuals);
    Ok(())
}
