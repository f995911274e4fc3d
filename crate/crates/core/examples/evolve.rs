//! Grover walk on C4 and K4: finding probabilities over time from a
//! localized start, for both walk types.

use qgwalk::coins::grover_coins;
use qgwalk::dynamics::{evolve, finding_probability, WalkState};
use qgwalk::graph::{ArcSpace, Graph, Partition};
use qgwalk::operator::{evolution, WalkKind};

fn main() -> qgwalk::Result<()> {
    for (name, g) in [("C4", Graph::cycle(4)?), ("K4", Graph::complete(4)?)] {
        let space = ArcSpace::new(&g);
        let p = Partition::flip_flop(&space);
        let coins = grover_coins(&space);
        for kind in [WalkKind::G, WalkKind::A] {
            let u = evolution(kind, &space, &p, &coins)?;
            let start = WalkState::basis(&space, (1, 2))?;
            println!("{name}, {kind:?}-type, start |1,2>");
            for t in 0..=6 {
                let d = finding_probability(&space, &evolve(&u, &start, t)?);
                let row: Vec<String> = d.0.iter().map(|p| format!("{p:.4}")).collect();
                println!("  t={t}: {}", row.join(" "));
            }
        }
    }
    Ok(())
}
