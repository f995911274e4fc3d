//! Szegedy walk spectrum predicted from the symmetric J matrix, compared
//! with a direct Schur decomposition, on a tree, a cycle and K4.

use qgwalk::coins::TransitionMatrix;
use qgwalk::graph::{ArcSpace, Graph};
use qgwalk::szegedy::{compare_spectra, direct_spectrum, szegedy_spectrum, szegedy_walk};

fn main() -> qgwalk::Result<()> {
    let graphs = [
        ("S3", Graph::star(3)?),
        ("C5", Graph::cycle(5)?),
        ("K4", Graph::complete(4)?),
    ];
    for (name, g) in graphs {
        let space = ArcSpace::new(&g);
        let p = TransitionMatrix::uniform(&space);
        let predicted = szegedy_spectrum(&space, &p)?;
        let direct = direct_spectrum(&szegedy_walk(&space, &p))?;
        let report = compare_spectra(&predicted.predicted(), &direct, 1e-8)?;
        println!(
            "{name}: {:?}, {} mapped + {} leftover, mismatch {:.1e}, lift residual {:.1e}",
            predicted.case,
            predicted.mapped.len(),
            predicted.leftover.len(),
            report.max_mismatch,
            predicted.max_lift_residual()
        );
        for m in &predicted.mapped {
            println!("  nu = {:+.6} -> {:+.6}{:+.6}i", m.nu, m.value.re, m.value.im);
        }
    }
    Ok(())
}
