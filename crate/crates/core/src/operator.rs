//! Shift, coin and evolution operators on `ℓ²(D(G))`, plus residual checks
//! for the identities relating G-type, A-type and flip-flop walks.

use crate::error::{Error, Result};
use crate::graph::{partition_permutation, ArcSpace, LineDigraph, Partition};
use crate::linalg::{distance, is_finite, op_norm, unitarity_residual, ComplexMatrix, ONE, ZERO};

/// Tolerance for unitarity of individual coins and constructed operators.
pub const UNITARY_TOL: f64 = 1e-12;

/// Local coins `{H_j}`, one square matrix per vertex in the basis fixed by
/// [`ArcSpace::neighbor_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSet {
    coins: Vec<ComplexMatrix>,
}

impl CoinSet {
    /// Checks dimensions and unitarity of every block.
    pub fn new(space: &ArcSpace, coins: Vec<ComplexMatrix>) -> Result<Self> {
        let g = space.graph();
        if coins.len() != g.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} coins for {} vertices",
                coins.len(),
                g.vertex_count()
            )));
        }
        for (j, h) in g.vertices().zip(&coins) {
            let d = g.degree(j);
            if h.nrows() != d || h.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "coin at vertex {j} is {}x{}, degree is {d}",
                    h.nrows(),
                    h.ncols()
                )));
            }
            if !is_finite(h) {
                return Err(Error::InvalidParameter(format!("coin at vertex {j} has non-finite entries")));
            }
            let residual = unitarity_residual(h);
            if residual > UNITARY_TOL {
                return Err(Error::NonUnitaryCoin { vertex: j, residual });
            }
        }
        Ok(CoinSet { coins })
    }

    pub fn identity(space: &ArcSpace) -> Self {
        let g = space.graph();
        let coins = g.vertices().map(|j| ComplexMatrix::identity(g.degree(j), g.degree(j))).collect();
        CoinSet { coins }
    }

    pub fn random<R: rand::Rng + ?Sized>(space: &ArcSpace, rng: &mut R) -> Self {
        let g = space.graph();
        let coins = g.vertices().map(|j| crate::linalg::random_unitary(g.degree(j), rng)).collect();
        CoinSet { coins }
    }

    /// Coin at vertex `j` (1-based).
    pub fn coin(&self, j: usize) -> &ComplexMatrix {
        &self.coins[j - 1]
    }

    pub fn coins(&self) -> &[ComplexMatrix] {
        &self.coins
    }

    /// Applies `f` to every block. The result is trusted to stay unitary.
    pub fn map(&self, f: impl Fn(usize, &ComplexMatrix) -> ComplexMatrix) -> Self {
        let coins = self.coins.iter().enumerate().map(|(i, h)| f(i + 1, h)).collect();
        CoinSet { coins }
    }

    /// `{H_j†}`
    pub fn adjoint(&self) -> Self {
        self.map(|_, h| h.adjoint())
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.coins.iter().all(|h| op_norm(&(h - h.adjoint())) <= tol)
    }

    pub(crate) fn from_trusted(coins: Vec<ComplexMatrix>) -> Self {
        CoinSet { coins }
    }
}

/// Order of coin and shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkKind {
    /// `U = C S_π`
    G,
    /// `U = S_π C`
    A,
}

impl WalkKind {
    pub fn other(self) -> Self {
        match self {
            WalkKind::G => WalkKind::A,
            WalkKind::A => WalkKind::G,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    pub matrix: ComplexMatrix,
    pub kind: WalkKind,
    pub partition: Partition,
    pub coins: CoinSet,
}

impl EvolutionOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }
}

/// `S_π|i,j⟩ = |j, f_π(i,j)⟩`
pub fn shift_operator(space: &ArcSpace, p: &Partition) -> ComplexMatrix {
    let n = space.len();
    let mut s = ComplexMatrix::from_element(n, n, ZERO);
    for col in 0..n {
        s[(p.next_arc(space, col), col)] = ONE;
    }
    s
}

/// `C = ⊕_j H_j`, block diagonal over arcs grouped by origin.
pub fn coin_operator(space: &ArcSpace, coins: &CoinSet) -> ComplexMatrix {
    let n = space.len();
    let mut c = ComplexMatrix::from_element(n, n, ZERO);
    for j in space.graph().vertices() {
        let block = space.block(j);
        c.view_mut((block.start, block.start), (block.len(), block.len()))
            .copy_from(coins.coin(j));
    }
    c
}

pub fn evolution(kind: WalkKind, space: &ArcSpace, p: &Partition, coins: &CoinSet) -> Result<EvolutionOperator> {
    if p.successors().len() != space.len() || coins.coins().len() != space.graph().vertex_count() {
        return Err(Error::DimensionMismatch("partition or coins built for a different graph".into()));
    }
    let s = shift_operator(space, p);
    let c = coin_operator(space, coins);
    let matrix = match kind {
        WalkKind::G => &c * &s,
        WalkKind::A => &s * &c,
    };
    Ok(EvolutionOperator { matrix, kind, partition: p.clone(), coins: coins.clone() })
}

fn evolve_matrix(kind: WalkKind, space: &ArcSpace, p: &Partition, coins: &CoinSet) -> ComplexMatrix {
    evolution(kind, space, p, coins).expect("inputs share one arc space").matrix
}

/// `‖(U^(G))ⁿ − S_π† (U^(A))ⁿ S_π‖`
pub fn verify_dual(space: &ArcSpace, p: &Partition, coins: &CoinSet, n: u32) -> f64 {
    let s = shift_operator(space, p);
    let ug = evolve_matrix(WalkKind::G, space, p, coins);
    let ua = evolve_matrix(WalkKind::A, space, p, coins);
    let mut lhs = ComplexMatrix::identity(space.len(), space.len());
    let mut rhs = lhs.clone();
    for _ in 0..n {
        lhs = &ug * lhs;
        rhs = &ua * rhs;
    }
    distance(&lhs, &(s.adjoint() * rhs * &s))
}

/// Max over `J ∈ {A, G}` of `‖(U^(J)_ff[H])⁻¹ − U^(¬J)_ff[H⁻¹]‖`; when every
/// coin is self-adjoint, also includes `‖(U^(J)_ff[H])⁻¹ − U^(¬J)_ff[H]‖`.
pub fn verify_inverse(space: &ArcSpace, coins: &CoinSet) -> f64 {
    let ff = Partition::flip_flop(space);
    let inv = coins.map(|_, h| h.clone().try_inverse().expect("unitary coin is invertible"));
    let self_adjoint = coins.is_self_adjoint(UNITARY_TOL);
    [WalkKind::A, WalkKind::G]
        .into_iter()
        .map(|kind| {
            let u = evolve_matrix(kind, space, &ff, coins);
            let u_inv = u.clone().try_inverse().expect("unitary operator is invertible");
            let mut r = distance(&u_inv, &evolve_matrix(kind.other(), space, &ff, &inv));
            if self_adjoint {
                r = r.max(distance(&u_inv, &evolve_matrix(kind.other(), space, &ff, coins)));
            }
            r
        })
        .fold(0.0, f64::max)
}

/// `H̃_j = H_j P^(j)_{π,π′}`
pub fn permuted_coins(space: &ArcSpace, p: &Partition, p_prime: &Partition, coins: &CoinSet) -> CoinSet {
    coins.map(|j, h| h * partition_permutation(space, p, p_prime, j).matrix(space))
}

/// `‖U^(G)_{π′}[H] − U^(G)_π[H P_{π,π′}]‖`
pub fn verify_change_partition(space: &ArcSpace, p: &Partition, p_prime: &Partition, coins: &CoinSet) -> f64 {
    let lhs = evolve_matrix(WalkKind::G, space, p_prime, coins);
    let rhs = evolve_matrix(WalkKind::G, space, p, &permuted_coins(space, p, p_prime, coins));
    distance(&lhs, &rhs)
}

/// `‖U^(G)_π[H] − (U^(A)_ff[H̃†])†‖` with `H̃_j = H_j P^(j)_{ff,π}`.
pub fn verify_thm1(space: &ArcSpace, p: &Partition, coins: &CoinSet) -> f64 {
    let ff = Partition::flip_flop(space);
    let tilde = permuted_coins(space, &ff, p, coins);
    let lhs = evolve_matrix(WalkKind::G, space, p, coins);
    let rhs = evolve_matrix(WalkKind::A, space, &ff, &tilde.adjoint()).adjoint();
    distance(&lhs, &rhs)
}

/// `‖U^(A)_π[H] − S_π (U^(A)_ff[H̃†])† S_π†‖` with `H̃_j = H_j P^(j)_{ff,π}`.
pub fn verify_a_to_a(space: &ArcSpace, p: &Partition, coins: &CoinSet) -> f64 {
    let ff = Partition::flip_flop(space);
    let tilde = permuted_coins(space, &ff, p, coins);
    let s = shift_operator(space, p);
    let lhs = evolve_matrix(WalkKind::A, space, p, coins);
    let inner = evolve_matrix(WalkKind::A, space, &ff, &tilde.adjoint()).adjoint();
    distance(&lhs, &(&s * inner * s.adjoint()))
}

/// Support-pattern checks against the line digraph adjacency matrix `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeveriniReport {
    /// `supp U^(G)_π ⊆ supp M`
    pub g_type_in_adjacency: bool,
    /// `supp S_π† U^(A)_π S_π ⊆ supp M`
    pub a_type_conjugated_in_adjacency: bool,
    /// `supp Q† U^(A)_π Q ⊆ supp Mᵀ` with the permutation `Q = S_π S_ff`
    pub a_type_isomorphic_to_transpose: bool,
    /// `supp U^(A)_ff ⊆ supp Mᵀ`, checked with the same coins on the
    /// flip-flop shift
    pub a_type_flip_flop_in_transpose: bool,
}

impl SeveriniReport {
    pub fn passed(&self) -> bool {
        self.g_type_in_adjacency
            && self.a_type_conjugated_in_adjacency
            && self.a_type_isomorphic_to_transpose
            && self.a_type_flip_flop_in_transpose
    }
}

/// Entries below this magnitude count as structural zeros.
const SUPPORT_EPS: f64 = 1e-14;

fn support_within(m: &ComplexMatrix, mask: &ComplexMatrix) -> bool {
    m.iter().zip(mask.iter()).all(|(z, k)| z.norm() <= SUPPORT_EPS || k.norm() > 0.0)
}

pub fn verify_severini(space: &ArcSpace, p: &Partition, coins: &CoinSet) -> SeveriniReport {
    let adjacency = LineDigraph::new(space).adjacency_matrix();
    let transpose = adjacency.transpose();
    let ff = Partition::flip_flop(space);
    let s = shift_operator(space, p);
    let q = &s * shift_operator(space, &ff);
    let ug = evolve_matrix(WalkKind::G, space, p, coins);
    let ua = evolve_matrix(WalkKind::A, space, p, coins);
    let ua_ff = evolve_matrix(WalkKind::A, space, &ff, coins);
    SeveriniReport {
        g_type_in_adjacency: support_within(&ug, &adjacency),
        a_type_conjugated_in_adjacency: support_within(&(s.adjoint() * &ua * &s), &adjacency),
        a_type_isomorphic_to_transpose: support_within(&(q.adjoint() * &ua * &q), &transpose),
        a_type_flip_flop_in_transpose: support_within(&ua_ff, &transpose),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::grover_coin;
    use crate::graph::{enumerate_partitions, Graph, DEFAULT_PARTITION_CAP};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn grover(space: &ArcSpace) -> CoinSet {
        let g = space.graph();
        CoinSet::new(space, g.vertices().map(|j| grover_coin(g.degree(j)).unwrap()).collect()).unwrap()
    }

    fn straight_c4(space: &ArcSpace) -> Partition {
        let map: BTreeMap<_, _> = space
            .arcs()
            .iter()
            .map(|&(i, j)| ((i, j), *space.neighbor_order(j).iter().find(|&&m| m != i).unwrap()))
            .collect();
        Partition::from_map(space, &map).unwrap()
    }

    #[test]
    fn shift_examples() {
        let k2 = ArcSpace::new(&Graph::path(2).unwrap());
        let s = shift_operator(&k2, &Partition::flip_flop(&k2));
        assert_eq!(s, ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]));

        let space = ArcSpace::new(&Graph::complete(4).unwrap());
        let s = shift_operator(&space, &Partition::flip_flop(&space));
        assert_eq!(&s * &s, ComplexMatrix::identity(12, 12));
    }

    #[test]
    fn straight_c4_shift_has_two_four_cycles() {
        let space = ArcSpace::new(&Graph::cycle(4).unwrap());
        let p = straight_c4(&space);
        let s = shift_operator(&space, &p);
        let mut lengths: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
        lengths.sort();
        assert_eq!(lengths, vec![4, 4]);
        let mut power = ComplexMatrix::identity(8, 8);
        for k in 1..=4 {
            power = &s * power;
            let is_identity = power == ComplexMatrix::identity(8, 8);
            assert_eq!(is_identity, k == 4);
        }
    }

    #[test]
    fn coin_operator_examples() {
        let space = ArcSpace::new(&Graph::cycle(4).unwrap());
        assert_eq!(coin_operator(&space, &CoinSet::identity(&space)), ComplexMatrix::identity(8, 8));
        let c = coin_operator(&space, &grover(&space));
        for j in 1..=4 {
            let b = space.block(j);
            let block = c.view((b.start, b.start), (2, 2)).clone_owned();
            assert_eq!(block, ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]));
        }
        let k2 = ArcSpace::new(&Graph::path(2).unwrap());
        assert_eq!(coin_operator(&k2, &grover(&k2)), ComplexMatrix::identity(2, 2));
    }

    #[test]
    fn coin_set_rejects_bad_blocks() {
        let space = ArcSpace::new(&Graph::path(3).unwrap());
        let mut coins: Vec<ComplexMatrix> = CoinSet::identity(&space).coins().to_vec();
        coins[1][(0, 0)] = ONE * 2.0;
        match CoinSet::new(&space, coins.clone()) {
            Err(Error::NonUnitaryCoin { vertex, .. }) => assert_eq!(vertex, 2),
            other => panic!("{other:?}"),
        }
        coins[1] = ComplexMatrix::identity(3, 3);
        assert!(matches!(CoinSet::new(&space, coins), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn k2_identity_a_type_is_swap() {
        let k2 = ArcSpace::new(&Graph::path(2).unwrap());
        let u = evolution(WalkKind::A, &k2, &Partition::flip_flop(&k2), &CoinSet::identity(&k2)).unwrap();
        assert_eq!(u.matrix, ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]));
    }

    #[test]
    fn gm_matrix_elements() {
        // ⟨l,m|U^(G)|i,j⟩ = 1_{l∈N(i)} δ_{j,l} ⟨e_m|H_j|e_{f(i,j)}⟩ and the A-type line below it
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let space = ArcSpace::new(&Graph::new(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (2, 5)]).unwrap());
        let p = Partition::random(&space, &mut rng);
        let coins = CoinSet::random(&space, &mut rng);
        let ug = evolution(WalkKind::G, &space, &p, &coins).unwrap().matrix;
        let ua = evolution(WalkKind::A, &space, &p, &coins).unwrap().matrix;
        let g = space.graph();
        for (col, &(i, j)) in space.arcs().iter().enumerate() {
            for (row, &(l, m)) in space.arcs().iter().enumerate() {
                let l_adj = g.neighbors(i).contains(&l);
                let f_ij = p.successor(&space, (i, j)).unwrap();
                let expect_g = if l_adj && j == l {
                    coins.coin(j)[(space.local_position(j, m).unwrap(), space.local_position(j, f_ij).unwrap())]
                } else {
                    ZERO
                };
                assert!((ug[(row, col)] - expect_g).norm() < 1e-15);
                let expect_a = if l_adj && m == p.successor(&space, (i, l)).unwrap() {
                    coins.coin(i)[(space.local_position(i, l).unwrap(), space.local_position(i, j).unwrap())]
                } else {
                    ZERO
                };
                assert!((ua[(row, col)] - expect_a).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn identities_on_c4_partitions() {
        let space = ArcSpace::new(&Graph::cycle(4).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let coins = CoinSet::random(&space, &mut rng);
        let all = enumerate_partitions(&space, DEFAULT_PARTITION_CAP).unwrap();
        for p in &all {
            assert_eq!(verify_dual(&space, p, &coins, 0), 0.0);
            assert!(verify_dual(&space, p, &coins, 1) <= 1e-12);
            assert!(verify_dual(&space, p, &coins, 5) <= 1e-10);
            assert!(verify_change_partition(&space, p, p, &coins) == 0.0);
            assert!(verify_change_partition(&space, &all[3], p, &coins) <= 1e-10);
            assert!(verify_thm1(&space, p, &coins) <= 1e-10);
            assert!(verify_a_to_a(&space, p, &coins) <= 1e-10);
            assert!(verify_severini(&space, p, &coins).passed());
        }
        assert!(verify_inverse(&space, &coins) <= 1e-10);
        assert_eq!(verify_inverse(&space, &CoinSet::identity(&space)), 0.0);
        assert!(verify_inverse(&space, &grover(&space)) <= 1e-12);
    }

    #[test]
    fn literal_transpose_check_fails_for_grover_coins() {
        // supp(S† U^(A) S) is the support of U^(G), which sits inside M, not Mᵀ
        let space = ArcSpace::new(&Graph::cycle(4).unwrap());
        let ff = Partition::flip_flop(&space);
        let coins = grover(&space);
        let ua = evolve_matrix(WalkKind::A, &space, &ff, &coins);
        let s = shift_operator(&space, &ff);
        let mt = LineDigraph::new(&space).adjacency_matrix().transpose();
        assert!(!support_within(&(s.adjoint() * ua * &s), &mt));
    }
}
