//! Coin families: Grover, Szegedy (from a transition matrix), the
//! quantum-graph coins `H_j(k)`, and their generalization with arbitrary unit
//! vectors `|α_j⟩`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Arc, ArcSpace, Graph};
use crate::linalg::{cis, ComplexMatrix, I, ONE, ZERO};
use crate::operator::CoinSet;

/// `(2/d) J_d − I_d`
pub fn grover_coin(d: usize) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("Grover coin needs d >= 1".into()));
    }
    let off = Complex64::new(2.0 / d as f64, 0.0);
    Ok(ComplexMatrix::from_fn(d, d, |r, c| if r == c { off - ONE } else { off }))
}

pub fn grover_coins(space: &ArcSpace) -> CoinSet {
    let g = space.graph();
    CoinSet::from_trusted(g.vertices().map(|j| grover_coin(g.degree(j)).unwrap()).collect())
}

/// Row-stochastic transition probabilities supported on the arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    /// `p_{u,v}` per arc index.
    probs: Vec<f64>,
}

impl TransitionMatrix {
    pub const ROW_TOL: f64 = 1e-12;

    pub fn new(space: &ArcSpace, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for {} arcs",
                probs.len(),
                space.len()
            )));
        }
        if let Some(idx) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            let (u, v) = space.arc(idx);
            return Err(Error::InvalidParameter(format!("p({u},{v}) = {} outside [0,1]", probs[idx])));
        }
        for u in space.graph().vertices() {
            let sum: f64 = probs[space.block(u)].iter().sum();
            if (sum - 1.0).abs() > Self::ROW_TOL {
                return Err(Error::RowSum { vertex: u, sum });
            }
        }
        Ok(TransitionMatrix { probs })
    }

    /// `p_{u,v} = 1/d_u`
    pub fn uniform(space: &ArcSpace) -> Self {
        let g = space.graph();
        let probs = space.arcs().iter().map(|&(u, _)| 1.0 / g.degree(u) as f64).collect();
        TransitionMatrix { probs }
    }

    pub fn from_map(space: &ArcSpace, map: &BTreeMap<Arc, f64>) -> Result<Self> {
        let mut probs = vec![f64::NAN; space.len()];
        for (&arc, &p) in map {
            probs[space.try_index(arc)?] = p;
        }
        if let Some(idx) = probs.iter().position(|p| p.is_nan()) {
            let (u, v) = space.arc(idx);
            return Err(Error::InvalidParameter(format!("no probability given for arc ({u},{v})")));
        }
        TransitionMatrix::new(space, probs)
    }

    /// Reversible chain from symmetric positive edge weights:
    /// `p_{ij} = w_{ij} / Σ_l w_{il}`.
    pub fn random_reversible<R: Rng + ?Sized>(space: &ArcSpace, rng: &mut R) -> Self {
        let g = space.graph();
        let weights: Vec<f64> = (0..g.edge_count()).map(|_| rng.random_range(0.1..1.0)).collect();
        let w = |u: usize, v: usize| weights[g.edge_index(u, v).unwrap()];
        let probs = space
            .arcs()
            .iter()
            .map(|&(u, v)| w(u, v) / g.neighbors(u).iter().map(|&l| w(u, l)).sum::<f64>())
            .collect();
        TransitionMatrix { probs }
    }

    pub fn prob(&self, space: &ArcSpace, arc: Arc) -> Result<f64> {
        Ok(self.probs[space.try_index(arc)?])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// `⟨e_m|H_j|e_l⟩ = 2√(p_{j,l} p_{j,m}) − δ_{lm}`
pub fn szegedy_coins(space: &ArcSpace, p: &TransitionMatrix) -> CoinSet {
    let g = space.graph();
    let coins = g
        .vertices()
        .map(|j| {
            let block = &p.probs[space.block(j)];
            let d = block.len();
            ComplexMatrix::from_fn(d, d, |m, l| {
                let v = 2.0 * (block[l] * block[m]).sqrt() - if l == m { 1.0 } else { 0.0 };
                Complex64::new(v, 0.0)
            })
        })
        .collect();
    CoinSet::from_trusted(coins)
}

/// Vertex coupling constant `λ_j ∈ [0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Finite(f64),
    /// `λ = ∞`
    Dirichlet,
}

impl Lambda {
    pub const NEUMANN: Lambda = Lambda::Finite(0.0);

    pub fn is_dirichlet(self) -> bool {
        matches!(self, Lambda::Dirichlet)
    }
}

/// Metric-graph parameters `(L, λ, A)`.
///
/// Lengths and potentials are indexed like [`Graph::edges`]; `A_{ij}` is
/// stored for the orientation `i < j`, and the arc value is
/// `A_(i,j) = sgn(j − i) A_{ij}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraphParams {
    pub lengths: Vec<f64>,
    pub lambdas: Vec<Lambda>,
    pub potentials: Vec<f64>,
}

impl QuantumGraphParams {
    pub fn new(g: &Graph, lengths: Vec<f64>, lambdas: Vec<Lambda>, potentials: Vec<f64>) -> Result<Self> {
        if lengths.len() != g.edge_count() || potentials.len() != g.edge_count() {
            return Err(Error::DimensionMismatch("lengths and potentials need one value per edge".into()));
        }
        if lambdas.len() != g.vertex_count() {
            return Err(Error::DimensionMismatch("lambdas need one value per vertex".into()));
        }
        for (e, &l) in lengths.iter().enumerate() {
            if !l.is_finite() || l < 0.0 {
                return Err(Error::InvalidParameter(format!("length of edge {:?} is {l}", g.edges()[e])));
            }
        }
        for (e, &a) in potentials.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!("potential on edge {:?} is {a}", g.edges()[e])));
            }
        }
        for (j, lam) in lambdas.iter().enumerate() {
            if let Lambda::Finite(x) = lam {
                if !x.is_finite() || *x < 0.0 {
                    return Err(Error::InvalidParameter(format!("lambda at vertex {} is {x}", j + 1)));
                }
            }
        }
        Ok(QuantumGraphParams { lengths, lambdas, potentials })
    }

    /// Every edge of length `length`, the same `λ` everywhere, no potential.
    pub fn uniform(g: &Graph, length: f64, lambda: Lambda) -> Self {
        QuantumGraphParams {
            lengths: vec![length; g.edge_count()],
            lambdas: vec![lambda; g.vertex_count()],
            potentials: vec![0.0; g.edge_count()],
        }
    }

    pub fn length(&self, g: &Graph, (i, j): Arc) -> f64 {
        self.lengths[g.edge_index(i, j).expect("arc of the graph")]
    }

    /// `A_(i,j) = sgn(j − i) A_{ij}`
    pub fn arc_potential(&self, g: &Graph, (i, j): Arc) -> f64 {
        let a = self.potentials[g.edge_index(i, j).expect("arc of the graph")];
        if j > i {
            a
        } else {
            -a
        }
    }

    pub fn lambda(&self, j: usize) -> Lambda {
        self.lambdas[j - 1]
    }

    pub fn has_zero_length(&self) -> bool {
        self.lengths.iter().any(|&l| l == 0.0)
    }

    /// `e^{i L_{ij}(k − A_(i,j))}` per arc index: the diagonal `D̃_D`.
    pub fn arc_phases(&self, space: &ArcSpace, k: f64) -> Vec<Complex64> {
        let g = space.graph();
        space
            .arcs()
            .iter()
            .map(|&a| cis(self.length(g, a) * (k - self.arc_potential(g, a))))
            .collect()
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("wavenumber k must be positive and finite, got {k}")));
    }
    Ok(())
}

/// `ρ_j(k) ∈ (−π, π]` with `e^{iρ} = (1 + iλ/(kd)) / (1 − iλ/(kd))`.
pub fn rho(lambda: Lambda, d: usize, k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(match lambda {
        Lambda::Finite(l) => 2.0 * (l / (k * d as f64)).atan(),
        Lambda::Dirichlet => PI,
    })
}

/// `2 / (d + iλ/k)`, which is `0` for `λ = ∞`.
pub fn vertex_scattering_weight(lambda: Lambda, d: usize, k: f64) -> Complex64 {
    match lambda {
        Lambda::Finite(l) => Complex64::new(2.0, 0.0) / Complex64::new(d as f64, l / k),
        Lambda::Dirichlet => ZERO,
    }
}

/// `σ_j = (2/(d_j + iλ_j/k)) J − I`, the coin without edge phases.
pub fn vertex_scattering(lambda: Lambda, d: usize, k: f64) -> ComplexMatrix {
    let w = vertex_scattering_weight(lambda, d, k);
    ComplexMatrix::from_fn(d, d, |r, c| if r == c { w - ONE } else { w })
}

/// `H_j(k) = D_j(k) σ_j(k)`: entry `(m, l)` is
/// `(2/(d_j + iλ_j/k) − δ_{lm}) e^{iL_{jm}(k − A_(j,m))}`.
pub fn quantum_graph_coins(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<CoinSet> {
    check_k(k)?;
    let g = space.graph();
    let phases = q.arc_phases(space, k);
    let coins = g
        .vertices()
        .map(|j| {
            let d = g.degree(j);
            let block = space.block(j);
            let mut h = vertex_scattering(q.lambda(j), d, k);
            for m in 0..d {
                let ph = phases[block.start + m];
                h.row_mut(m).iter_mut().for_each(|z| *z *= ph);
            }
            h
        })
        .collect();
    Ok(CoinSet::from_trusted(coins))
}

/// Unit vectors `|α_j⟩ = Σ_l α_{jl} |e_l^(j)⟩`, one per vertex in neighbor order.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaWeights {
    weights: Vec<Vec<Complex64>>,
}

impl AlphaWeights {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(space: &ArcSpace, weights: Vec<Vec<Complex64>>) -> Result<Self> {
        let g = space.graph();
        if weights.len() != g.vertex_count() {
            return Err(Error::DimensionMismatch("one alpha vector per vertex required".into()));
        }
        for (j, w) in g.vertices().zip(&weights) {
            if w.len() != g.degree(j) {
                return Err(Error::DimensionMismatch(format!("alpha at vertex {j} has wrong length")));
            }
            let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > Self::NORM_TOL {
                return Err(Error::InvalidParameter(format!("alpha at vertex {j} has squared norm {norm}")));
            }
        }
        Ok(AlphaWeights { weights })
    }

    /// `α_{jl} = 1/√d_j`
    pub fn uniform(space: &ArcSpace) -> Self {
        let g = space.graph();
        let weights = g
            .vertices()
            .map(|j| {
                let d = g.degree(j);
                vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d]
            })
            .collect();
        AlphaWeights { weights }
    }

    /// `α_{jl} = √p_{jl}`
    pub fn from_transition(space: &ArcSpace, p: &TransitionMatrix) -> Self {
        let weights = space
            .graph()
            .vertices()
            .map(|j| p.probs()[space.block(j)].iter().map(|&x| Complex64::new(x.sqrt(), 0.0)).collect())
            .collect();
        AlphaWeights { weights }
    }

    pub fn random<R: Rng + ?Sized>(space: &ArcSpace, rng: &mut R) -> Self {
        let weights = space
            .graph()
            .vertices()
            .map(|j| {
                let v: Vec<Complex64> = (0..space.graph().degree(j))
                    .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.into_iter().map(|z| z / n).collect()
            })
            .collect();
        AlphaWeights { weights }
    }

    /// `α_{jl}` for the arc `(j, l)`.
    pub fn get(&self, space: &ArcSpace, (j, l): Arc) -> Complex64 {
        self.weights[j - 1][space.local_position(j, l).expect("arc of the graph")]
    }

    pub fn at(&self, j: usize) -> &[Complex64] {
        &self.weights[j - 1]
    }
}

/// `H_j(k) = D_j(k) {(1 + e^{−iρ_j(k)}) Π_j − I}` with `Π_j = |α_j⟩⟨α_j|`.
pub fn generalized_coins(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
) -> Result<CoinSet> {
    check_k(k)?;
    let g = space.graph();
    let phases = q.arc_phases(space, k);
    let mut coins = Vec::with_capacity(g.vertex_count());
    for j in g.vertices() {
        let d = g.degree(j);
        let factor = ONE + cis(-rho(q.lambda(j), d, k)?);
        let alpha = w.at(j);
        let block = space.block(j);
        let h = ComplexMatrix::from_fn(d, d, |m, l| {
            let proj = alpha[m] * alpha[l].conj();
            let delta = if m == l { ONE } else { ZERO };
            phases[block.start + m] * (factor * proj - delta)
        });
        coins.push(h);
    }
    Ok(CoinSet::from_trusted(coins))
}

/// `1 + e^{−iρ}` evaluated as `2/(1 + iλ/(kd))`, exact at `λ = ∞`.
pub fn one_plus_cis_minus_rho(lambda: Lambda, d: usize, k: f64) -> Complex64 {
    match lambda {
        Lambda::Finite(l) => Complex64::new(2.0, 0.0) / (ONE + I * (l / (k * d as f64))),
        Lambda::Dirichlet => ZERO,
    }
}
