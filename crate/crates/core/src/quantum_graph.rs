//! Quantum graphs through their walk `U(k) = U^(A)_ff[H_j(k)]`: root scanning,
//! stationary states, eigenfunction reconstruction, vertex conditions and the
//! reduced secular determinant.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::coins::{
    generalized_coins, one_plus_cis_minus_rho, quantum_graph_coins, vertex_scattering, AlphaWeights, Lambda,
    QuantumGraphParams,
};
use crate::error::{Error, Result};
use crate::graph::{Arc, ArcSpace, Partition};
use crate::linalg::{cis, fix_global_phase, op_norm, smallest_singular, ComplexMatrix, ComplexVector, I, ONE, ZERO};
use crate::operator::{coin_operator, evolution, shift_operator, CoinSet, EvolutionOperator, WalkKind};

/// Indicator threshold for accepting a root.
pub const ROOT_TOL: f64 = 1e-9;
/// Vertex-condition pass threshold.
pub const CONDITION_TOL: f64 = 1e-8;
/// `|1 − t² e^{2ikL}|` below this is a pole of the reduced form.
pub const POLE_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 33;

pub fn build_walk(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<EvolutionOperator> {
    let coins = quantum_graph_coins(space, q, k)?;
    evolution(WalkKind::A, space, &Partition::flip_flop(space), &coins)
}

fn identity_minus(u: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(u.nrows(), u.ncols()) - u
}

/// Smallest singular value of `I − U(k)`.
pub fn stationarity_indicator(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<f64> {
    let u = build_walk(space, q, k)?;
    Ok(smallest_singular(&identity_minus(&u.matrix)).0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub k_min: f64,
    pub k_max: f64,
    pub points_per_unit: usize,
    pub refine_tol: f64,
    pub root_tol: f64,
    /// Grid minima above this are not refined.
    pub bracket: f64,
}

impl ScanOptions {
    pub fn new(k_min: f64, k_max: f64) -> Self {
        ScanOptions { k_min, k_max, points_per_unit: 2000, refine_tol: 1e-10, root_tol: ROOT_TOL, bracket: 1e-2 }
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = (((self.k_max - self.k_min) * self.points_per_unit as f64).ceil() as usize).max(1);
        (0..=n).map(|i| self.k_min + (self.k_max - self.k_min) * i as f64 / n as f64).collect()
    }

    pub fn spacing(&self) -> f64 {
        let g = self.grid();
        g[1] - g[0]
    }

    fn validate(&self) -> Result<()> {
        if !(self.k_min > 0.0 && self.k_max.is_finite() && self.k_min < self.k_max) {
            return Err(Error::InvalidParameter(format!(
                "empty or invalid k range ({}, {})",
                self.k_min, self.k_max
            )));
        }
        if self.points_per_unit == 0 || !(self.refine_tol > 0.0) {
            return Err(Error::InvalidParameter("grid density and refine_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub k: f64,
    pub multiplicity: usize,
    /// Indicator at `k`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SecularScan {
    pub grid: Vec<f64>,
    pub indicator: Vec<f64>,
    /// Reduced secular determinant at `t = 1`, poles filled in by [`secular_normalized`].
    pub det: Vec<Complex64>,
    pub roots: Vec<Root>,
}

fn golden_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

pub fn scan_roots(space: &ArcSpace, q: &QuantumGraphParams, opts: &ScanOptions) -> Result<SecularScan> {
    opts.validate()?;
    if q.has_zero_length() {
        return Err(Error::InvalidParameter("scanning needs every edge length positive".into()));
    }
    let grid = opts.grid();
    let uniform = AlphaWeights::uniform(space);
    let evaluated: Vec<(f64, Complex64)> = grid
        .par_iter()
        .map(|&k| {
            let ind = stationarity_indicator(space, q, k)?;
            let det = secular_normalized(space, q, &uniform, k, ONE)?;
            Ok((ind, det))
        })
        .collect::<Result<_>>()?;
    let (indicator, det): (Vec<f64>, Vec<Complex64>) = evaluated.into_iter().unzip();

    let f = |k: f64| stationarity_indicator(space, q, k).unwrap_or(f64::INFINITY);
    let n = grid.len();
    let mut roots: Vec<Root> = Vec::new();
    for i in 0..n {
        let left = if i == 0 { f64::INFINITY } else { indicator[i - 1] };
        let right = if i + 1 == n { f64::INFINITY } else { indicator[i + 1] };
        if indicator[i] > opts.bracket || indicator[i] > left || indicator[i] > right {
            continue;
        }
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(n - 1)];
        let k = golden_minimize(f, a, b, opts.refine_tol);
        if roots.last().is_some_and(|r| (r.k - k).abs() < 1e3 * opts.refine_tol) {
            continue;
        }
        let u = build_walk(space, q, k)?;
        let (residual, _, singular) = smallest_singular(&identity_minus(&u.matrix));
        if residual > opts.root_tol {
            continue;
        }
        let multiplicity = singular.iter().filter(|&&s| s < 10.0 * opts.root_tol).count();
        roots.push(Root { k, multiplicity, residual });
    }
    Ok(SecularScan { grid, indicator, det, roots })
}

#[derive(Debug, Clone)]
pub struct StationaryVector {
    pub k: f64,
    /// `a_{(ij)}` per arc index, unit norm, largest entry real positive.
    pub a: ComplexVector,
    /// `‖U(k) a − a‖`
    pub residual: f64,
}

/// Right singular vector of the smallest singular value of `I − U(k)`,
/// with no threshold applied.
pub fn least_singular_state(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<StationaryVector> {
    let u = build_walk(space, q, k)?;
    let (_, mut a, _) = smallest_singular(&identity_minus(&u.matrix));
    fix_global_phase(&mut a);
    let residual = (&u.matrix * &a - &a).norm();
    Ok(StationaryVector { k, a, residual })
}

pub fn stationary_vector(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<StationaryVector> {
    let v = least_singular_state(space, q, k)?;
    if v.residual > ROOT_TOL {
        return Err(Error::NotARoot { k, indicator: v.residual, threshold: ROOT_TOL });
    }
    Ok(v)
}

/// `b_{(i,j)} = a_{(j,i)} e^{−iL_{ij}(k − A_(i,j))}`
pub fn b_from_a(space: &ArcSpace, q: &QuantumGraphParams, v: &StationaryVector) -> ComplexVector {
    let phases = q.arc_phases(space, v.k);
    ComplexVector::from_fn(space.len(), |f, _| v.a[space.reverse_index(f)] / phases[f])
}

/// `a_{(i,j)} = b_{(j,i)} e^{iL_{ij}(k + A_(i,j))}`
pub fn a_from_b(space: &ArcSpace, q: &QuantumGraphParams, k: f64, b: &ComplexVector) -> ComplexVector {
    let g = space.graph();
    ComplexVector::from_fn(space.len(), |f, _| {
        let arc = space.arc(f);
        b[space.reverse_index(f)] * cis(q.length(g, arc) * (k + q.arc_potential(g, arc)))
    })
}

#[derive(Debug, Clone)]
pub struct ArcSamples {
    pub arc: Arc,
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct EigenfunctionSample {
    pub k: f64,
    pub arcs: Vec<ArcSamples>,
    /// `φ_i`, the mean of `Ψ_{(i,j)}(0)` over `j`.
    pub vertex_values: Vec<Complex64>,
    /// Largest pointwise gap between the coefficient and matrix evaluations.
    pub form_discrepancy: f64,
    /// `max |Ψ_{(i,j)}(x) − Ψ_{(j,i)}(L − x)|` over the grid.
    pub symmetry_residual: f64,
}

/// `Ψ_{(ij)}(x) = a_{(ij)} e^{−i(k+A_(ij))x} + a_{(ji)} e^{−i(k+A_(ji))(L−x)}` and
/// its derivative.
fn psi(k: f64, a_ij: Complex64, a_ji: Complex64, pot: f64, len: f64, x: f64) -> (Complex64, Complex64) {
    let out = cis(-(k + pot) * x);
    let back = cis(-(k - pot) * (len - x));
    let value = a_ij * out + a_ji * back;
    let deriv = -I * (k + pot) * a_ij * out + I * (k - pot) * a_ji * back;
    (value, deriv)
}

pub fn wavefunction(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    v: &StationaryVector,
    samples: usize,
) -> Result<EigenfunctionSample> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples per arc".into()));
    }
    let g = space.graph();
    let k = v.k;
    let m = space.len();
    let xs: Vec<Vec<f64>> = space
        .arcs()
        .iter()
        .map(|&arc| {
            let len = q.length(g, arc);
            (0..samples).map(|s| len * s as f64 / (samples - 1) as f64).collect()
        })
        .collect();

    let arcs: Vec<ArcSamples> = space
        .arcs()
        .iter()
        .enumerate()
        .map(|(f, &arc)| {
            let (pot, len) = (q.arc_potential(g, arc), q.length(g, arc));
            let a_rev = v.a[space.reverse_index(f)];
            let values = xs[f].iter().map(|&x| psi(k, v.a[f], a_rev, pot, len, x).0).collect();
            ArcSamples { arc, x: xs[f].clone(), values }
        })
        .collect();

    // Ψ(x) = {D₁(x) + D₂(x) S} a, one sample index at a time
    let shift = shift_operator(space, &Partition::flip_flop(space));
    let sa = &shift * &v.a;
    let mut form_discrepancy: f64 = 0.0;
    for s in 0..samples {
        for f in 0..m {
            let arc = space.arc(f);
            let (pot, len) = (q.arc_potential(g, arc), q.length(g, arc));
            let x = xs[f][s];
            let d1 = cis(-(k + pot) * x);
            let d2 = cis(-(k - pot) * (len - x));
            let w = d1 * v.a[f] + d2 * sa[f];
            form_discrepancy = form_discrepancy.max((w - arcs[f].values[s]).norm());
        }
    }

    let mut symmetry_residual: f64 = 0.0;
    for (f, arc) in arcs.iter().enumerate() {
        let rev = space.reverse_index(f);
        let len = q.length(g, arc.arc);
        let pot = q.arc_potential(g, space.arc(rev));
        for (s, &x) in arc.x.iter().enumerate() {
            let mirrored = psi(k, v.a[rev], v.a[f], pot, len, len - x).0;
            symmetry_residual = symmetry_residual.max((arc.values[s] - mirrored).norm());
        }
    }

    let vertex_values = g
        .vertices()
        .map(|i| {
            let block = space.block(i);
            let n = block.len() as f64;
            block.map(|f| arcs[f].values[0]).sum::<Complex64>() / n
        })
        .collect();
    Ok(EigenfunctionSample { k, arcs, vertex_values, form_discrepancy, symmetry_residual })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexResiduals {
    pub vertex: usize,
    /// `max |Ψ_{(i,j)}(x) − Ψ_{(j,i)}(L − x)|` over arcs leaving the vertex.
    pub symmetry: f64,
    /// `max_{j,l} |Ψ_{(i,j)}(0) − Ψ_{(i,l)}(0)|`
    pub continuity: f64,
    /// Flux defect `|Σ_j (−i d/dx + A_(ij)) Ψ_{(i,j)}(0) + iλ_i φ_i|`, or
    /// `max_j |Ψ_{(i,j)}(0)|` at a Dirichlet vertex.
    pub flux: f64,
}

impl VertexResiduals {
    pub fn max(&self) -> f64 {
        self.symmetry.max(self.continuity).max(self.flux)
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub vertices: Vec<VertexResiduals>,
    pub tol: f64,
}

impl BoundaryReport {
    pub fn max_residual(&self) -> f64 {
        self.vertices.iter().map(VertexResiduals::max).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tol
    }
}

pub fn verify_boundary_conditions(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    v: &StationaryVector,
    e: &EigenfunctionSample,
) -> BoundaryReport {
    let g = space.graph();
    let k = v.k;
    let mut rows = Vec::with_capacity(g.vertex_count());
    for i in g.vertices() {
        let block = space.block(i);
        let mut symmetry: f64 = 0.0;
        let mut starts = Vec::with_capacity(block.len());
        let mut flux = ZERO;
        for f in block.clone() {
            let arc = space.arc(f);
            let rev = space.reverse_index(f);
            let (pot, len) = (q.arc_potential(g, arc), q.length(g, arc));
            for (s, &x) in e.arcs[f].x.iter().enumerate() {
                let mirrored = psi(k, v.a[rev], v.a[f], -pot, len, len - x).0;
                symmetry = symmetry.max((e.arcs[f].values[s] - mirrored).norm());
            }
            let (value, deriv) = psi(k, v.a[f], v.a[rev], pot, len, 0.0);
            starts.push(value);
            flux += -I * deriv + pot * value;
        }
        let continuity = starts
            .iter()
            .flat_map(|a| starts.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        let phi = e.vertex_values[i - 1];
        let flux = match q.lambda(i) {
            Lambda::Finite(lam) => (flux + I * lam * phi).norm(),
            Lambda::Dirichlet => starts.iter().map(|z| z.norm()).fold(0.0, f64::max),
        };
        rows.push(VertexResiduals { vertex: i, symmetry, continuity, flux });
    }
    BoundaryReport { vertices: rows, tol: CONDITION_TOL }
}

/// `det(I − t U)` for the walk with generalized coins, computed on the full
/// arc space.
pub fn direct_determinant(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
    t: Complex64,
) -> Result<Complex64> {
    let coins = generalized_coins(space, q, w, k)?;
    let u = evolution(WalkKind::A, space, &Partition::flip_flop(space), &coins)?;
    Ok((ComplexMatrix::identity(u.dim(), u.dim()) - u.matrix * t).determinant())
}

/// `Δ_{ij}(t) = 1 − t² e^{2ikL_{ij}}` per edge.
fn edge_factors(q: &QuantumGraphParams, k: f64, t: Complex64) -> Vec<Complex64> {
    q.lengths.iter().map(|&l| ONE - t * t * cis(2.0 * k * l)).collect()
}

/// Row `i` of `I − tT(t) + t²D(t)` multiplied by `scale(i, l)` for each
/// neighbor `l`, where `scale` stands in for `1/Δ_{il}`.
fn reduced_matrix(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
    t: Complex64,
    row_scale: impl Fn(usize) -> Complex64,
    inv_delta: impl Fn(usize, usize) -> Complex64,
) -> DMatrix<Complex64> {
    let g = space.graph();
    let n = g.vertex_count();
    let mut m = DMatrix::from_element(n, n, ZERO);
    for i in g.vertices() {
        let f = one_plus_cis_minus_rho(q.lambda(i), g.degree(i), k);
        let scale = row_scale(i);
        m[(i - 1, i - 1)] = scale;
        let mut diag = ZERO;
        for &l in g.neighbors(i) {
            let arc = (i, l);
            let len = q.length(g, arc);
            let a_il = w.get(space, arc);
            let a_li = w.get(space, (l, i));
            let t_il = cis(len * (k + q.arc_potential(g, arc))) * f * a_il.conj() * a_li * inv_delta(i, l);
            m[(i - 1, l - 1)] -= t * t_il;
            diag += f * a_il.norm_sqr() * cis(2.0 * k * len) * inv_delta(i, l);
        }
        m[(i - 1, i - 1)] += t * t * diag;
    }
    m
}

/// `det(I − tT(t) + t²D(t)) ∏_E Δ_e(t)` with
/// `T_{il} = (1 + e^{−iρ_i}) conj(α_{il}) α_{li} e^{iL_{il}(k + A_(il))} / Δ_{il}` and
/// `D_{ii} = (1 + e^{−iρ_i}) Σ_l |α_{il}|² e^{2ikL_{il}} / Δ_{il}`.
pub fn secular_reduced(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
    t: Complex64,
) -> Result<Complex64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("wavenumber k must be positive and finite, got {k}")));
    }
    let g = space.graph();
    let delta = edge_factors(q, k, t);
    if let Some(e) = delta.iter().position(|d| d.norm() < POLE_TOL) {
        let (u, v) = g.edges()[e];
        return Err(Error::PoleProximity(u, v, delta[e].norm()));
    }
    let m = reduced_matrix(space, q, w, k, t, |_| ONE, |i, l| ONE / delta[g.edge_index(i, l).unwrap()]);
    Ok(m.determinant() * delta.iter().product::<Complex64>())
}

/// Pole-free variant: row `i` is multiplied by `∏_{l∈N(i)} Δ_{il}`, so the
/// result equals `det(I − tU) ∏_E Δ_e(t)` and stays finite at the poles.
pub fn secular_reduced_cleared(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
    t: Complex64,
) -> Result<Complex64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("wavenumber k must be positive and finite, got {k}")));
    }
    let g = space.graph();
    let delta = edge_factors(q, k, t);
    let d = |i: usize, l: usize| delta[g.edge_index(i, l).unwrap()];
    let row = |i: usize| g.neighbors(i).iter().map(|&l| d(i, l)).product::<Complex64>();
    let others = |i: usize, l: usize| {
        g.neighbors(i).iter().filter(|&&x| x != l).map(|&x| d(i, x)).product::<Complex64>()
    };
    Ok(reduced_matrix(space, q, w, k, t, row, others).determinant())
}

/// Below this `|Δ_e|` the product `det(I − tT + t²D) ∏ Δ_e` is taken as a limit.
const NEAR_POLE: f64 = 1e-4;

/// [`secular_reduced`] with its removable singularities filled in.
///
/// Away from the poles this is the plain product. Within [`NEAR_POLE`] of one
/// the value is extrapolated from `k ± δ`, `k ± 2δ` (symmetric Richardson,
/// error `O(δ⁴)`), so the result is finite and vanishes only where
/// `det(I − tU) = 0`.
pub fn secular_normalized(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    w: &AlphaWeights,
    k: f64,
    t: Complex64,
) -> Result<Complex64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("wavenumber k must be positive and finite, got {k}")));
    }
    let clear = |x: f64| x > 0.0 && edge_factors(q, x, t).iter().all(|d| d.norm() >= NEAR_POLE);
    if clear(k) {
        return secular_reduced(space, q, w, k, t);
    }
    for delta in [2e-4, 3e-4, 5e-4, 1e-3, 1.7e-3] {
        let points = [k - 2.0 * delta, k - delta, k + delta, k + 2.0 * delta];
        if points.iter().all(|&x| clear(x)) {
            let f = |x: f64| secular_reduced(space, q, w, x, t);
            let near = (f(points[1])? + f(points[2])?) * 0.5;
            let far = (f(points[0])? + f(points[3])?) * 0.5;
            return Ok((near * 4.0 - far) / 3.0);
        }
    }
    let delta = edge_factors(q, k, t);
    let e = (0..delta.len()).min_by(|&a, &b| delta[a].norm().total_cmp(&delta[b].norm())).unwrap_or(0);
    let (u, v) = space.graph().edges()[e];
    Err(Error::PoleProximity(u, v, delta[e].norm()))
}

#[derive(Debug, Clone)]
pub struct PropositionResiduals {
    /// `‖U^(A)_ff[H] a − a‖`, `‖U^(G)_ff[H†] a − a‖`, `‖U^(A)_ff[H†] b − b‖`,
    /// `‖U^(G)_ff[H] b − b‖` with `b = S a`.
    pub residuals: [f64; 4],
    pub b: ComplexVector,
}

impl PropositionResiduals {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// All four within `factor` of each other, treating values below `floor`
    /// as equal.
    pub fn agree(&self, factor: f64, floor: f64) -> bool {
        self.max() <= floor || self.max() <= factor * self.min()
    }
}

pub fn proposition_equivalences(
    space: &ArcSpace,
    q: &QuantumGraphParams,
    v: &StationaryVector,
) -> Result<PropositionResiduals> {
    let ff = Partition::flip_flop(space);
    let h = quantum_graph_coins(space, q, v.k)?;
    let h_dag = h.adjoint();
    let b = shift_operator(space, &ff) * &v.a;
    let res = |kind: WalkKind, coins: &CoinSet, x: &ComplexVector| -> Result<f64> {
        let u = evolution(kind, space, &ff, coins)?;
        Ok((&u.matrix * x - x).norm())
    };
    let residuals = [
        res(WalkKind::A, &h, &v.a)?,
        res(WalkKind::G, &h_dag, &v.a)?,
        res(WalkKind::A, &h_dag, &b)?,
        res(WalkKind::G, &h, &b)?,
    ];
    Ok(PropositionResiduals { residuals, b })
}

#[derive(Debug, Clone)]
pub struct SmilanskyFactorization {
    /// `T(k) = C[σ_j] S_ff`
    pub t_matrix: ComplexMatrix,
    /// `S(k) = D̃_D`, the arc phases `e^{iL_{ij}(k − A_(ij))}`.
    pub s_matrix: ComplexMatrix,
    /// `‖U^(G)_ff[H(k)] − S(k) T(k)‖`
    pub residual: f64,
    /// `‖U^(G)_ff[H(k)] − T(k) S(k)‖`, zero only when the phases commute
    /// with the scattering blocks.
    pub reversed_residual: f64,
    /// `‖U^(G) − S(k) (T(k) S(k)) S(k)†‖`: the product `T S` is the same map
    /// up to the unitary change of basis `S(k)`.
    pub similarity_residual: f64,
}

pub fn smilansky_factorization(space: &ArcSpace, q: &QuantumGraphParams, k: f64) -> Result<SmilanskyFactorization> {
    let g = space.graph();
    let coins = quantum_graph_coins(space, q, k)?;
    let ff = Partition::flip_flop(space);
    let u = evolution(WalkKind::G, space, &ff, &coins)?.matrix;
    let sigma = CoinSet::from_trusted(
        g.vertices().map(|j| vertex_scattering(q.lambda(j), g.degree(j), k)).collect(),
    );
    let t_matrix = coin_operator(space, &sigma) * shift_operator(space, &ff);
    let s_matrix = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(q.arc_phases(space, k)));
    let ts = &t_matrix * &s_matrix;
    let residual = op_norm(&(&u - &s_matrix * &t_matrix));
    let reversed_residual = op_norm(&(&u - &ts));
    let similarity_residual = op_norm(&(&u - &s_matrix * ts * s_matrix.adjoint()));
    Ok(SmilanskyFactorization { t_matrix, s_matrix, residual, reversed_residual, similarity_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::grover_coins;
    use crate::graph::Graph;
    use crate::linalg::distance;
    use std::f64::consts::PI;

    fn k2(lambda: Lambda) -> (ArcSpace, QuantumGraphParams) {
        let g = Graph::path(2).unwrap();
        let q = QuantumGraphParams::uniform(&g, 1.0, lambda);
        (ArcSpace::new(&g), q)
    }

    #[test]
    fn build_walk_examples() {
        let s3 = ArcSpace::new(&Graph::star(3).unwrap());
        let q = QuantumGraphParams::uniform(s3.graph(), 0.0, Lambda::NEUMANN);
        let u = build_walk(&s3, &q, 1.3).unwrap();
        let grover = evolution(WalkKind::A, &s3, &Partition::flip_flop(&s3), &grover_coins(&s3)).unwrap();
        assert_eq!(u.matrix, grover.matrix);

        let (space, q) = k2(Lambda::NEUMANN);
        let k = 0.7;
        let u = build_walk(&space, &q, k).unwrap();
        let e = cis(k);
        assert!(distance(&u.matrix, &ComplexMatrix::from_row_slice(2, 2, &[ZERO, e, e, ZERO])) < 1e-15);
        assert!(u.unitarity_residual() <= 1e-12);
    }

    #[test]
    fn indicator_examples() {
        let (space, q) = k2(Lambda::NEUMANN);
        assert!(stationarity_indicator(&space, &q, PI).unwrap() < 1e-10);
        assert!(stationarity_indicator(&space, &q, PI / 2.0).unwrap() > 0.5);
        let c4 = ArcSpace::new(&Graph::cycle(4).unwrap());
        let q = QuantumGraphParams::uniform(c4.graph(), 0.0, Lambda::NEUMANN);
        assert!(stationarity_indicator(&c4, &q, 2.3).unwrap() < 1e-12);
    }

    #[test]
    fn k2_roots() {
        for lambda in [Lambda::NEUMANN, Lambda::Dirichlet] {
            let (space, q) = k2(lambda);
            let scan = scan_roots(&space, &q, &ScanOptions::new(0.1, 10.0)).unwrap();
            let ks: Vec<f64> = scan.roots.iter().map(|r| r.k).collect();
            assert_eq!(ks.len(), 3, "{ks:?}");
            for (n, k) in ks.iter().enumerate() {
                assert!((k - (n + 1) as f64 * PI).abs() < 1e-8);
            }
        }
        let (space, q) = k2(Lambda::NEUMANN);
        assert!(scan_roots(&space, &q, &ScanOptions::new(0.1, 1.0)).unwrap().roots.is_empty());
        assert!(scan_roots(&space, &q, &ScanOptions::new(2.0, 1.0)).is_err());
        let zero = QuantumGraphParams::uniform(space.graph(), 0.0, Lambda::NEUMANN);
        assert!(scan_roots(&space, &zero, &ScanOptions::new(0.1, 1.0)).is_err());
    }

    #[test]
    fn stationary_vector_examples() {
        let (space, q) = k2(Lambda::NEUMANN);
        let v = stationary_vector(&space, &q, PI).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((v.a[0] - Complex64::new(s, 0.0)).norm() < 1e-12 || (v.a[1] - Complex64::new(s, 0.0)).norm() < 1e-12);
        assert!((v.a[0] + v.a[1]).norm() < 1e-12);
        assert!(v.residual <= ROOT_TOL);
        assert!(matches!(stationary_vector(&space, &q, 2.0), Err(Error::NotARoot { .. })));

        let b = b_from_a(&space, &q, &v);
        assert!((b[0] + v.a[1]).norm() < 1e-12);
        assert!((a_from_b(&space, &q, PI, &b) - &v.a).norm() < 1e-12);
    }

    #[test]
    fn wavefunction_k2_cosine() {
        let (space, q) = k2(Lambda::NEUMANN);
        let v = stationary_vector(&space, &q, PI).unwrap();
        let e = wavefunction(&space, &q, &v, DEFAULT_SAMPLES).unwrap();
        let b = b_from_a(&space, &q, &v);
        assert!((e.arcs[0].values[0] - (v.a[0] + b[0])).norm() < 1e-14);
        assert!(e.form_discrepancy <= 1e-12);
        assert!(e.symmetry_residual <= 1e-10);
        let scale = e.arcs[0].values[0].norm();
        for (x, z) in e.arcs[0].x.iter().zip(&e.arcs[0].values) {
            assert!((z.norm() - scale * (PI * x).cos().abs()).abs() < 1e-8);
        }
        let report = verify_boundary_conditions(&space, &q, &v, &e);
        assert!(report.passed(), "{report:?}");
        assert!(wavefunction(&space, &q, &v, 1).is_err());
    }

    #[test]
    fn boundary_conditions_on_a_robin_tree() {
        let g = Graph::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        let space = ArcSpace::new(&g);
        let q = QuantumGraphParams::new(
            &g,
            vec![1.0, 1.3, 0.7],
            vec![Lambda::Finite(0.5), Lambda::Finite(2.0), Lambda::Dirichlet, Lambda::NEUMANN],
            vec![0.4, -0.2, 0.9],
        )
        .unwrap();
        let scan = scan_roots(&space, &q, &ScanOptions::new(0.5, 6.0)).unwrap();
        assert!(!scan.roots.is_empty());
        for root in &scan.roots {
            let v = stationary_vector(&space, &q, root.k).unwrap();
            let e = wavefunction(&space, &q, &v, DEFAULT_SAMPLES).unwrap();
            let report = verify_boundary_conditions(&space, &q, &v, &e);
            assert!(report.passed(), "k = {}: {report:?}", root.k);
            let off = least_singular_state(&space, &q, root.k + 1e-2).unwrap();
            let e = wavefunction(&space, &q, &off, DEFAULT_SAMPLES).unwrap();
            assert!(!verify_boundary_conditions(&space, &q, &off, &e).passed());
        }
    }

    #[test]
    fn secular_examples() {
        let (space, q) = k2(Lambda::NEUMANN);
        let w = AlphaWeights::uniform(&space);
        assert!((secular_reduced(&space, &q, &w, 1.1, ZERO).unwrap() - ONE).norm() < 1e-15);
        let v = secular_reduced(&space, &q, &w, PI / 2.0, ONE).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(matches!(secular_reduced(&space, &q, &w, PI, ONE), Err(Error::PoleProximity(1, 2, _))));
        assert!(secular_reduced_cleared(&space, &q, &w, PI, ONE).unwrap().norm() < 1e-12);
        assert!(secular_normalized(&space, &q, &w, PI, ONE).unwrap().norm() < 1e-10);
        // K2 Neumann: det(I − U) = 1 − e^{2ik}
        for k in [PI - 5e-4, PI + 2e-5, 2.0 * PI + 1e-6, 1.1] {
            let v = secular_normalized(&space, &q, &w, k, ONE).unwrap();
            assert!((v - (ONE - cis(2.0 * k))).norm() < 1e-10, "{k}: {v}");
        }
    }

    #[test]
    fn secular_matches_direct_determinant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let g = Graph::new(4, &[(1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        let space = ArcSpace::new(&g);
        let q = QuantumGraphParams::new(
            &g,
            vec![0.5, 1.2, 2.0, 0.3],
            vec![Lambda::NEUMANN, Lambda::Finite(2.0), Lambda::Dirichlet, Lambda::Finite(0.4)],
            vec![0.3, -1.0, 0.0, 1.5],
        )
        .unwrap();
        for _ in 0..20 {
            let w = AlphaWeights::random(&space, &mut rng);
            let k = rng.random_range(0.2..8.0);
            let t = Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(-PI..PI));
            let direct = direct_determinant(&space, &q, &w, k, t).unwrap();
            let reduced = secular_reduced(&space, &q, &w, k, t).unwrap();
            assert!((direct - reduced).norm() <= 1e-8 * direct.norm(), "{direct} vs {reduced}");
            let delta: Complex64 = q.lengths.iter().map(|&l| ONE - t * t * cis(2.0 * k * l)).product();
            let cleared = secular_reduced_cleared(&space, &q, &w, k, t).unwrap();
            assert!((cleared - direct * delta).norm() <= 1e-8 * (direct * delta).norm());
        }
    }

    #[test]
    fn proposition_examples() {
        let (space, q) = k2(Lambda::NEUMANN);
        let v = stationary_vector(&space, &q, PI).unwrap();
        let p = proposition_equivalences(&space, &q, &v).unwrap();
        assert!(p.max() <= 1e-9);
        assert_eq!(p.b[0], v.a[1]);
        let off = least_singular_state(&space, &q, 2.0).unwrap();
        let p = proposition_equivalences(&space, &q, &off).unwrap();
        assert!(p.min() > 0.1 && p.agree(1.0 + 1e-9, 0.0));
    }

    #[test]
    fn smilansky_examples() {
        let s3 = ArcSpace::new(&Graph::star(3).unwrap());
        let q = QuantumGraphParams::uniform(s3.graph(), 0.0, Lambda::NEUMANN);
        let f = smilansky_factorization(&s3, &q, 1.0).unwrap();
        let n = s3.len();
        assert!(distance(&f.s_matrix, &ComplexMatrix::identity(n, n)) < 1e-15);
        let grover = coin_operator(&s3, &grover_coins(&s3)) * shift_operator(&s3, &Partition::flip_flop(&s3));
        assert!(distance(&f.t_matrix, &grover) < 1e-15);

        let (space, q) = k2(Lambda::NEUMANN);
        let f = smilansky_factorization(&space, &q, 0.8).unwrap();
        assert!(f.residual <= 1e-12 && f.reversed_residual <= 1e-12);

        let g = Graph::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let q = QuantumGraphParams::new(&g, vec![1.0, 2.0, 0.5], vec![Lambda::Finite(1.0); 3], vec![0.3, 0.0, -0.7])
            .unwrap();
        let f = smilansky_factorization(&ArcSpace::new(&g), &q, 1.7).unwrap();
        assert!(f.residual <= 1e-12 && f.similarity_residual <= 1e-12);
        assert!(f.reversed_residual > 1e-3);
    }
}
