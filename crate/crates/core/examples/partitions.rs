//! Partitions of the C4 line digraph: how many there are, and the cycles
//! traced by the straight, flip-flop and mixed reference partitions.

use std::collections::BTreeMap;

use qgwalk::graph::{enumerate_partitions, partition_count, ArcSpace, Graph, Partition, DEFAULT_PARTITION_CAP};

fn show(space: &ArcSpace, name: &str, p: &Partition) {
    println!("{name}: flip-flop = {}", p.is_flip_flop(space));
    for cycle in p.cycles() {
        let arcs: Vec<String> = cycle.iter().map(|&a| format!("{:?}", space.arc(a))).collect();
        println!("  cycle {}", arcs.join(" -> "));
    }
}

fn main() -> qgwalk::Result<()> {
    let g = Graph::cycle(4)?;
    let space = ArcSpace::new(&g);
    println!("C4 has {} partitions", partition_count(&g).unwrap());
    println!("enumerated {}", enumerate_partitions(&space, DEFAULT_PARTITION_CAP)?.len());

    let straight = |(i, j): (usize, usize)| if j % 4 + 1 == i { (j + 2) % 4 + 1 } else { j % 4 + 1 };
    let mut pi1 = BTreeMap::new();
    let mut pi3 = BTreeMap::new();
    for &(i, j) in space.arcs() {
        pi1.insert((i, j), straight((i, j)));
        pi3.insert((i, j), if j == 2 { straight((i, j)) } else { i });
    }
    show(&space, "pi1 (straight)", &Partition::from_map(&space, &pi1)?);
    show(&space, "pi2 (flip-flop)", &Partition::flip_flop(&space));
    show(&space, "pi3", &Partition::from_map(&space, &pi3)?);

    for (name, g) in [("K4", Graph::complete(4)?), ("star S5", Graph::star(5)?)] {
        println!("{name}: {} partitions", partition_count(&g).unwrap());
    }
    Ok(())
}
