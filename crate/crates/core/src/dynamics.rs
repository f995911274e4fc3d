//! Time evolution, finding probabilities, the brute-force path-sum measure,
//! and the two-chirality walk on a cycle.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{ArcSpace, Graph, Partition};
use crate::linalg::{ComplexMatrix, ComplexVector, I, ZERO};
use crate::operator::{evolution, shift_operator, CoinSet, EvolutionOperator, WalkKind};

pub const NORM_TOL: f64 = 1e-12;

/// Largest number of steps accepted by [`path_measure_oracle`].
pub const PATH_ORACLE_MAX_STEPS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub amplitudes: ComplexVector,
    pub time: usize,
}

impl WalkState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("initial state has norm {norm}")));
        }
        Ok(WalkState { amplitudes, time: 0 })
    }

    /// `|u,v⟩`
    pub fn basis(space: &ArcSpace, arc: (usize, usize)) -> Result<Self> {
        let mut v = ComplexVector::from_element(space.len(), ZERO);
        v[space.try_index(arc)?] = Complex64::new(1.0, 0.0);
        Ok(WalkState { amplitudes: v, time: 0 })
    }

    /// A local vector `φ ∈ H_u` embedded into the total space.
    pub fn local(space: &ArcSpace, vertex: usize, phi: &[Complex64]) -> Result<Self> {
        if vertex == 0 || vertex > space.graph().vertex_count() {
            return Err(Error::InvalidParameter(format!("vertex {vertex} not in graph")));
        }
        let block = space.block(vertex);
        if phi.len() != block.len() {
            return Err(Error::DimensionMismatch(format!(
                "local vector has {} entries, vertex {vertex} has degree {}",
                phi.len(),
                block.len()
            )));
        }
        let mut v = ComplexVector::from_element(space.len(), ZERO);
        v.rows_mut(block.start, block.len()).copy_from_slice(phi);
        WalkState::new(v)
    }
}

/// `U^steps Ψ`
pub fn evolve(u: &EvolutionOperator, s: &WalkState, steps: usize) -> Result<WalkState> {
    if u.dim() != s.amplitudes.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}-dimensional, state has {} amplitudes",
            u.dim(),
            s.amplitudes.len()
        )));
    }
    let mut amps = s.amplitudes.clone();
    for _ in 0..steps {
        amps = &u.matrix * amps;
    }
    Ok(WalkState { amplitudes: amps, time: s.time + steps })
}

/// Per-vertex probabilities, index `u - 1` for vertex `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(pub Vec<f64>);

impl Distribution {
    pub fn at(&self, u: usize) -> f64 {
        self.0[u - 1]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `μ(A_u) = Σ_{v∈N(u)} |⟨u,v|Ψ⟩|²`
pub fn finding_probability(space: &ArcSpace, s: &WalkState) -> Distribution {
    Distribution(
        space
            .graph()
            .vertices()
            .map(|u| space.block(u).map(|i| s.amplitudes[i].norm_sqr()).sum())
            .collect(),
    )
}

/// The weight `W_(u,v): H_u → H_v` of a coined walk.
fn step_weight(
    space: &ArcSpace,
    p: &Partition,
    coins: &CoinSet,
    kind: WalkKind,
    u: usize,
    v: usize,
) -> ComplexMatrix {
    let g = space.graph();
    let (du, dv) = (g.degree(u), g.degree(v));
    let f = p.successor(space, (u, v)).unwrap();
    let row = space.local_position(v, f).unwrap();
    let col = space.local_position(u, v).unwrap();
    // |e^(v)_{f(u,v)}⟩⟨e^(u)_v|
    let mut elem = ComplexMatrix::from_element(dv, du, ZERO);
    elem[(row, col)] = Complex64::new(1.0, 0.0);
    match kind {
        WalkKind::G => coins.coin(v) * elem,
        WalkKind::A => elem * coins.coin(u),
    }
}

/// `μ_n^φ(A)` for the vertex event `A = {ξ : ξ_n ∈ event}`, summing the weight
/// products over every `n`-step vertex path from `origin`.
#[allow(clippy::too_many_arguments)]
pub fn path_measure_oracle(
    space: &ArcSpace,
    p: &Partition,
    coins: &CoinSet,
    kind: WalkKind,
    origin: usize,
    phi: &[Complex64],
    n: usize,
    event: &[usize],
) -> Result<f64> {
    if n > PATH_ORACLE_MAX_STEPS {
        return Err(Error::InvalidParameter(format!(
            "path oracle is exponential; n = {n} exceeds {PATH_ORACLE_MAX_STEPS}"
        )));
    }
    let g = space.graph();
    if phi.len() != g.degree(origin) {
        return Err(Error::DimensionMismatch("φ must live in H_origin".into()));
    }
    let phi = DVector::from_column_slice(phi);
    // sums of path amplitudes, grouped by end vertex
    let mut totals: Vec<Option<ComplexVector>> = vec![None; g.vertex_count()];
    let mut stack = vec![(origin, phi, 0usize)];
    while let Some((u, amp, depth)) = stack.pop() {
        if depth == n {
            let slot = &mut totals[u - 1];
            *slot = Some(match slot.take() {
                Some(acc) => acc + amp,
                None => amp,
            });
            continue;
        }
        for &v in g.neighbors(u) {
            let next = step_weight(space, p, coins, kind, u, v) * &amp;
            stack.push((v, next, depth + 1));
        }
    }
    Ok(event
        .iter()
        .filter_map(|&u| totals.get(u.wrapping_sub(1)).and_then(|t| t.as_ref()))
        .map(|t| t.norm_squared())
        .sum())
}

/// Amplitudes of the two-chirality walk on the cycle `Z_N`.
#[derive(Debug, Clone)]
pub struct OneDimWalk {
    pub a: f64,
    pub b: f64,
    /// `right[n][j] = ψ_n^(R)(j)`
    pub right: Vec<Vec<Complex64>>,
    /// `left[n][j] = ψ_n^(L)(j)`
    pub left: Vec<Vec<Complex64>>,
    /// Max defect of `ψ_n(j) = Qψ_{n−1}(j−1) + Pψ_{n−1}(j+1)` over all steps.
    pub matrix_form_residual: f64,
    /// Max defect of `ψ_{n+1}(j) + ψ_{n−1}(j) = a(ψ_n(j−1) + ψ_n(j+1))`.
    pub klein_gordon_residual: f64,
}

impl OneDimWalk {
    /// `P = [[0, ib], [0, a]]`
    pub fn p_matrix(&self) -> [[Complex64; 2]; 2] {
        [[ZERO, I * self.b], [ZERO, Complex64::new(self.a, 0.0)]]
    }

    /// `Q = [[a, 0], [ib, 0]]`
    pub fn q_matrix(&self) -> [[Complex64; 2]; 2] {
        [[Complex64::new(self.a, 0.0), ZERO], [I * self.b, ZERO]]
    }
}

/// Iterates
/// `ψ^R_n(j) = a ψ^R_{n−1}(j−1) + ib ψ^L_{n−1}(j+1)`,
/// `ψ^L_n(j) = ib ψ^R_{n−1}(j−1) + a ψ^L_{n−1}(j+1)` on `Z_N`.
pub fn one_dim_walk(
    a: f64,
    b: f64,
    sites: usize,
    steps: usize,
    initial_right: &[Complex64],
    initial_left: &[Complex64],
) -> Result<OneDimWalk> {
    if ((a * a + b * b) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("a² + b² = {} ≠ 1", a * a + b * b)));
    }
    if sites < 3 || initial_right.len() != sites || initial_left.len() != sites {
        return Err(Error::DimensionMismatch("need N >= 3 sites and N amplitudes per chirality".into()));
    }
    let ca = Complex64::new(a, 0.0);
    let ib = I * b;
    let prev = |j: usize| (j + sites - 1) % sites;
    let next = |j: usize| (j + 1) % sites;
    let mut right = vec![initial_right.to_vec()];
    let mut left = vec![initial_left.to_vec()];
    for n in 1..=steps {
        let (r0, l0) = (&right[n - 1], &left[n - 1]);
        let r: Vec<_> = (0..sites).map(|j| ca * r0[prev(j)] + ib * l0[next(j)]).collect();
        let l: Vec<_> = (0..sites).map(|j| ib * r0[prev(j)] + ca * l0[next(j)]).collect();
        right.push(r);
        left.push(l);
    }
    let mut walk = OneDimWalk {
        a,
        b,
        right,
        left,
        matrix_form_residual: 0.0,
        klein_gordon_residual: 0.0,
    };

    let (p, q) = (walk.p_matrix(), walk.q_matrix());
    let apply = |m: &[[Complex64; 2]; 2], v: [Complex64; 2]| {
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    };
    let mut mf: f64 = 0.0;
    for n in 1..=steps {
        for j in 0..sites {
            let from_left = apply(&q, [walk.right[n - 1][prev(j)], walk.left[n - 1][prev(j)]]);
            let from_right = apply(&p, [walk.right[n - 1][next(j)], walk.left[n - 1][next(j)]]);
            mf = mf
                .max((walk.right[n][j] - from_left[0] - from_right[0]).norm())
                .max((walk.left[n][j] - from_left[1] - from_right[1]).norm());
        }
    }
    let mut kg: f64 = 0.0;
    for n in 1..steps {
        for psi in [&walk.right, &walk.left] {
            for j in 0..sites {
                let lhs = psi[n + 1][j] + psi[n - 1][j];
                let rhs = ca * (psi[n][prev(j)] + psi[n][next(j)]);
                kg = kg.max((lhs - rhs).norm());
            }
        }
    }
    walk.matrix_form_residual = mf;
    walk.klein_gordon_residual = kg;
    Ok(walk)
}

/// Residuals of running a [`OneDimWalk`] through the general engine on the
/// cycle graph `C_N`, site `j` being vertex `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleEmbedding {
    /// `max_n ‖U^n Ψ_0 − Ψ_n‖` for the G-type flip-flop walk, where
    /// `Ψ(j, j+1) = ψ^R(j)` and `Ψ(j, j−1) = ψ^L(j)`.
    pub g_type: f64,
    /// `max_n ‖U^n SΨ_0 − SΨ_n‖` for the A-type flip-flop walk with the same coins.
    pub a_type: f64,
}

/// The coins realizing the 1-D walk: at each vertex the right-going arc
/// receives `a` from the left neighbor and `ib` from the right one, the
/// left-going arc `ib` and `a`.
pub fn cycle_coins(space: &ArcSpace, a: f64, b: f64) -> CoinSet {
    let g = space.graph();
    let n = g.vertex_count();
    let coins = g
        .vertices()
        .map(|v| {
            let prev = space.local_position(v, if v == 1 { n } else { v - 1 }).unwrap();
            let next = space.local_position(v, if v == n { 1 } else { v + 1 }).unwrap();
            let mut h = ComplexMatrix::from_element(2, 2, ZERO);
            h[(next, prev)] = Complex64::new(a, 0.0);
            h[(next, next)] = I * b;
            h[(prev, prev)] = I * b;
            h[(prev, next)] = Complex64::new(a, 0.0);
            h
        })
        .collect();
    CoinSet::from_trusted(coins)
}

pub fn cycle_embedding(walk: &OneDimWalk) -> Result<CycleEmbedding> {
    let sites = walk.right[0].len();
    let space = ArcSpace::new(&Graph::cycle(sites)?);
    let coins = cycle_coins(&space, walk.a, walk.b);
    let ff = Partition::flip_flop(&space);
    let s = shift_operator(&space, &ff);
    let embed = |n: usize| {
        let mut v = ComplexVector::from_element(space.len(), ZERO);
        for j in 0..sites {
            let (here, right, left) = (j + 1, (j + 1) % sites + 1, (j + sites - 1) % sites + 1);
            v[space.index_of((here, right)).unwrap()] = walk.right[n][j];
            v[space.index_of((here, left)).unwrap()] = walk.left[n][j];
        }
        v
    };
    let ug = evolution(WalkKind::G, &space, &ff, &coins)?.matrix;
    let ua = evolution(WalkKind::A, &space, &ff, &coins)?.matrix;
    let (mut g_state, mut a_state) = (embed(0), &s * embed(0));
    let (mut g_type, mut a_type): (f64, f64) = (0.0, 0.0);
    for n in 1..walk.right.len() {
        g_state = &ug * g_state;
        a_state = &ua * a_state;
        let target = embed(n);
        g_type = g_type.max((&g_state - &target).norm());
        a_type = a_type.max((&a_state - &s * target).norm());
    }
    Ok(CycleEmbedding { g_type, a_type })
}
