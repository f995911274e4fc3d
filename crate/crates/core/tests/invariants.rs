mod common;

use proptest::prelude::*;
use qgwalk::coins::{generalized_coins, quantum_graph_coins, szegedy_coins, AlphaWeights};
use qgwalk::dynamics::{evolve, finding_probability, WalkState};
use qgwalk::graph::{reverse_partition, ArcSpace, Graph, Partition};
use qgwalk::linalg::distance;
use qgwalk::operator::{evolution, CoinSet, WalkKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, n: usize) -> (ChaCha8Rng, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = common::random_graph(n, 0.4, &mut rng);
    (rng, g)
}

fn unitary_residual(m: &qgwalk::linalg::ComplexMatrix) -> f64 {
    let n = m.nrows();
    distance(&(m.adjoint() * m), &qgwalk::linalg::ComplexMatrix::identity(n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(seed in any::<u64>(), n in 2usize..7, g_type in any::<bool>()) {
        let (mut rng, g) = instance(seed, n);
        let space = ArcSpace::new(&g);
        let p = Partition::random(&space, &mut rng);
        let coins = CoinSet::random(&space, &mut rng);
        let kind = if g_type { WalkKind::G } else { WalkKind::A };
        let u = evolution(kind, &space, &p, &coins).unwrap();
        prop_assert!(u.unitarity_residual() <= 1e-12);
    }

    #[test]
    fn random_partitions_are_permutations(seed in any::<u64>(), n in 2usize..8) {
        let (mut rng, g) = instance(seed, n);
        let space = ArcSpace::new(&g);
        let p = Partition::random(&space, &mut rng);
        let mut seen = vec![false; space.len()];
        for (idx, &(i, j)) in space.arcs().iter().enumerate() {
            let f = p.successors()[idx];
            prop_assert!(g.neighbors(j).contains(&f));
            let next = space.index_of((j, f)).unwrap();
            prop_assert!(!seen[next]);
            seen[next] = true;
            prop_assert_eq!(p.successor(&space, (i, j)).unwrap(), f);
        }
        let covered: usize = p.cycles().iter().map(Vec::len).sum();
        prop_assert_eq!(covered, space.len());
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>(), n in 2usize..8) {
        let (mut rng, g) = instance(seed, n);
        let space = ArcSpace::new(&g);
        let p = Partition::random(&space, &mut rng);
        let twice = reverse_partition(&space, &reverse_partition(&space, &p));
        prop_assert_eq!(twice.successors(), p.successors());
    }

    #[test]
    fn distributions_sum_to_one(seed in any::<u64>(), n in 2usize..7, steps in 0usize..25) {
        let (mut rng, g) = instance(seed, n);
        let space = ArcSpace::new(&g);
        let p = Partition::random(&space, &mut rng);
        let coins = CoinSet::random(&space, &mut rng);
        let u = evolution(WalkKind::G, &space, &p, &coins).unwrap();
        let start = WalkState::basis(&space, space.arcs()[0]).unwrap();
        let d = finding_probability(&space, &evolve(&u, &start, steps).unwrap());
        prop_assert!((d.0.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(d.0.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn physical_coins_are_unitary(seed in any::<u64>(), n in 2usize..7, k in 0.05f64..20.0) {
        let (mut rng, g) = instance(seed, n);
        let space = ArcSpace::new(&g);
        let q = common::random_params(&g, &mut rng);
        let w = AlphaWeights::random(&space, &mut rng);
        let p = common::random_transition(&space, &mut rng);
        let sets = [
            quantum_graph_coins(&space, &q, k).unwrap(),
            generalized_coins(&space, &q, &w, k).unwrap(),
            szegedy_coins(&space, &p),
        ];
        for set in &sets {
            for j in g.vertices() {
                prop_assert!(unitary_residual(set.coin(j)) <= 1e-12);
            }
        }
    }
}
