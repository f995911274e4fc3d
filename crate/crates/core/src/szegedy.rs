//! Spectrum of the Szegedy walk predicted from the symmetric matrix
//! `J_{ij} = √(p_{ij} p_{ji})`, checked against direct diagonalization.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::coins::{szegedy_coins, TransitionMatrix};
use crate::error::{Error, Result};
use crate::graph::{ArcSpace, Partition};
use crate::linalg::{cis, ComplexVector, ONE, ZERO};
use crate::operator::{evolution, shift_operator, EvolutionOperator, WalkKind};

/// Lifts with norm below this are reported as degenerate.
pub const DEGENERATE_LIFT: f64 = 1e-10;
/// `|ν ∓ 1|` below this counts as `ν = ±1`.
const UNIT_EIGENVALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct JMatrix(pub DMatrix<f64>);

pub fn j_matrix(space: &ArcSpace, p: &TransitionMatrix) -> JMatrix {
    let n = space.graph().vertex_count();
    let mut j = DMatrix::zeros(n, n);
    for (idx, &(u, v)) in space.arcs().iter().enumerate() {
        let back = p.probs()[space.reverse_index(idx)];
        j[(u - 1, v - 1)] = (p.probs()[idx] * back).sqrt();
    }
    JMatrix(j)
}

impl JMatrix {
    /// Eigenvalues in ascending order with matching eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
        (values, vectors)
    }
}

/// Which of the two lifts `(I − e^{±iθ_ν} S) A 𝔭_ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// A predicted eigenvalue inherited from `ν ∈ spec(J)`.
#[derive(Debug, Clone)]
pub struct MappedEigenvalue {
    pub nu: f64,
    pub branch: Branch,
    pub value: Complex64,
    /// `‖(I − e^{±iθ} S) A 𝔭_ν‖`
    pub lift_norm: f64,
    /// `‖Uv − e^{±iθ}v‖ / ‖v‖`, `None` for degenerate lifts.
    pub lift_residual: Option<f64>,
}

impl MappedEigenvalue {
    pub fn is_degenerate(&self) -> bool {
        self.lift_residual.is_none()
    }
}

/// Which case of the `|E|`-vs-`|V|` split applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralCase {
    Tree,
    Unicyclic,
    Otherwise,
}

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub case: SpectralCase,
    pub mapped: Vec<MappedEigenvalue>,
    /// Extra `1` and `−1`, `|E| − |V|` of each, in the last case only.
    pub leftover: Vec<Complex64>,
}

impl SpectralResult {
    pub fn predicted(&self) -> Vec<Complex64> {
        self.mapped.iter().map(|m| m.value).chain(self.leftover.iter().copied()).collect()
    }

    pub fn max_lift_residual(&self) -> f64 {
        self.mapped.iter().filter_map(|m| m.lift_residual).fold(0.0, f64::max)
    }

    pub fn degenerate_count(&self) -> usize {
        self.mapped.iter().filter(|m| m.is_degenerate()).count()
    }
}

/// `θ_ν` with `cos θ = ν` and `sgn(sin θ) = sgn(ν)`.
pub fn theta(nu: f64) -> f64 {
    let t = nu.clamp(-1.0, 1.0).acos();
    if nu < 0.0 {
        -t
    } else {
        t
    }
}

/// The Szegedy walk `U^(P) = S_ff C` with `C` from [`szegedy_coins`].
pub fn szegedy_walk(space: &ArcSpace, p: &TransitionMatrix) -> EvolutionOperator {
    evolution(WalkKind::A, space, &Partition::flip_flop(space), &szegedy_coins(space, p))
        .expect("consistent inputs")
}

pub fn szegedy_spectrum(space: &ArcSpace, p: &TransitionMatrix) -> Result<SpectralResult> {
    let g = space.graph();
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    let case = match ne.cmp(&nv) {
        std::cmp::Ordering::Less => SpectralCase::Tree,
        std::cmp::Ordering::Equal => SpectralCase::Unicyclic,
        std::cmp::Ordering::Greater => SpectralCase::Otherwise,
    };
    let u = szegedy_walk(space, p).matrix;
    let s = shift_operator(space, &Partition::flip_flop(space));
    let (values, vectors) = j_matrix(space, p).eigen();

    // A|j⟩ = Σ_l √p_{j,l} |j,l⟩
    let lift_base = |col: usize| -> ComplexVector {
        let mut v = ComplexVector::from_element(space.len(), ZERO);
        for (idx, &(j, _)) in space.arcs().iter().enumerate() {
            v[idx] = Complex64::new(p.probs()[idx].sqrt() * vectors[(j - 1, col)], 0.0);
        }
        v
    };

    let mut mapped = Vec::with_capacity(2 * nv);
    for (col, &nu) in values.iter().enumerate() {
        let is_unit = (nu.abs() - 1.0).abs() < UNIT_EIGENVALUE_TOL;
        let th = if is_unit { theta(nu.signum()) } else { theta(nu) };
        let base = lift_base(col);
        let s_base = &s * &base;
        let mut branches = vec![(Branch::Plus, th)];
        if !(case == SpectralCase::Tree && is_unit) {
            branches.push((Branch::Minus, -th));
        }
        for (branch, angle) in branches {
            let value = cis(angle);
            let v = &base - &s_base * value;
            let lift_norm = v.norm();
            let lift_residual = if lift_norm < DEGENERATE_LIFT {
                None
            } else {
                Some((&u * &v - &v * value).norm() / lift_norm)
            };
            mapped.push(MappedEigenvalue { nu, branch, value, lift_norm, lift_residual });
        }
    }
    let leftover = if case == SpectralCase::Otherwise {
        let extra = ne - nv;
        std::iter::repeat_n(ONE, extra).chain(std::iter::repeat_n(-ONE, extra)).collect()
    } else {
        Vec::new()
    };
    let result = SpectralResult { case, mapped, leftover };
    let total = result.predicted().len();
    if total != 2 * ne {
        return Err(Error::Eigensolver(format!(
            "predicted {total} eigenvalues for {} arcs; J has {} eigenvalues at ±1",
            2 * ne,
            values.iter().filter(|n| (n.abs() - 1.0).abs() < UNIT_EIGENVALUE_TOL).count()
        )));
    }
    Ok(result)
}

/// Eigenvalues of a unitary operator via complex Schur decomposition.
pub fn direct_spectrum(u: &EvolutionOperator) -> Result<Vec<Complex64>> {
    let n = u.dim();
    let schur = u
        .matrix
        .clone()
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    if let Some(bad) = values.iter().find(|z| (z.norm() - 1.0).abs() > 1e-10) {
        return Err(Error::Eigensolver(format!("eigenvalue {bad} is off the unit circle")));
    }
    Ok(values)
}

#[derive(Debug, Clone)]
pub struct MatchReport {
    /// `(predicted, direct, angular distance)`, sorted by predicted phase.
    pub pairs: Vec<(Complex64, Complex64, f64)>,
    pub max_mismatch: f64,
    /// Pairs whose angular distance exceeds the tolerance.
    pub unmatched: usize,
    pub tol: f64,
}

impl MatchReport {
    pub fn passed(&self) -> bool {
        self.max_mismatch <= self.tol
    }
}

fn phase01(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn angular_distance(a: Complex64, b: Complex64) -> f64 {
    let d = (phase01(a) - phase01(b)).abs();
    d.min(2.0 * PI - d)
}

/// Bottleneck matching of two multisets on the unit circle: both sides are
/// sorted by phase and every cyclic alignment is tried, which is optimal for
/// points on a circle.
pub fn compare_spectra(predicted: &[Complex64], direct: &[Complex64], tol: f64) -> Result<MatchReport> {
    if predicted.len() != direct.len() {
        return Err(Error::SizeMismatch(predicted.len(), direct.len()));
    }
    let n = predicted.len();
    let mut p = predicted.to_vec();
    let mut d = direct.to_vec();
    p.sort_by(|a, b| phase01(*a).total_cmp(&phase01(*b)));
    d.sort_by(|a, b| phase01(*a).total_cmp(&phase01(*b)));
    let mut best = (f64::INFINITY, 0);
    for shift in 0..n.max(1) {
        let worst = (0..n).map(|i| angular_distance(p[i], d[(i + shift) % n])).fold(0.0, f64::max);
        if worst < best.0 {
            best = (worst, shift);
        }
    }
    let (max_mismatch, shift) = if n == 0 { (0.0, 0) } else { best };
    let pairs: Vec<_> = (0..n)
        .map(|i| {
            let q = d[(i + shift) % n];
            (p[i], q, angular_distance(p[i], q))
        })
        .collect();
    let unmatched = pairs.iter().filter(|x| x.2 > tol).count();
    Ok(MatchReport { pairs, max_mismatch, unmatched, tol })
}

/// Eigenvector of `J` for a given column, exposed for diagnostics.
pub fn j_eigenvector(j: &JMatrix, col: usize) -> DVector<f64> {
    j.eigen().1.column(col).into_owned()
}
