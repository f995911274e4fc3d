//! Residuals of the operator identities for a random walk on a random graph.

use qgwalk::graph::{ArcSpace, Graph, Partition};
use qgwalk::operator::{
    verify_a_to_a, verify_change_partition, verify_dual, verify_inverse, verify_severini, verify_thm1, CoinSet,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qgwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g = Graph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 3), (2, 4)])?;
    let space = ArcSpace::new(&g);
    let p = Partition::random(&space, &mut rng);
    let other = Partition::random(&space, &mut rng);
    let coins = CoinSet::random(&space, &mut rng);

    for n in 1..=4 {
        println!("dual, n = {n}: {:.2e}", verify_dual(&space, &p, &coins, n));
    }
    println!("inverse (flip-flop): {:.2e}", verify_inverse(&space, &coins));
    println!("change of partition: {:.2e}", verify_change_partition(&space, &p, &other, &coins));
    println!("G-type via flip-flop: {:.2e}", verify_thm1(&space, &p, &coins));
    println!("A-type via flip-flop: {:.2e}", verify_a_to_a(&space, &p, &coins));
    println!("support check: {:?}", verify_severini(&space, &p, &coins));
    Ok(())
}
