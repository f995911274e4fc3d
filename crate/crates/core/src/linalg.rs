//! Dense complex matrix helpers shared by the operator, spectral and
//! quantum-graph modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Dense complex matrix, column-major as stored by nalgebra.
pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^{i phase}`
pub fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `‖M†M − I‖` in operator norm.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    if n != m.ncols() {
        return f64::INFINITY;
    }
    op_norm(&(m.adjoint() * m - ComplexMatrix::identity(n, n)))
}

pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    op_norm(&(a - b))
}

/// Haar-like random unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Singular values (unordered as returned) together with the right singular
/// vector belonging to the smallest one.
pub fn smallest_singular(m: &ComplexMatrix) -> (f64, ComplexVector, Vec<f64>) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (idx, &smin) = sv
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty matrix");
    let v = v_t.row(idx).adjoint();
    (smin, v, sv)
}

pub fn min_singular_value(m: &ComplexMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Multiply the vector by a unit phase so that its largest-magnitude entry is
/// real and positive.
pub fn fix_global_phase(v: &mut ComplexVector) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        // ties resolved towards the lower index; small slack keeps the choice
        // stable under rounding
        if z.norm() > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..7 {
            let u = random_unitary(n, &mut rng);
            assert!(unitarity_residual(&u) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn op_norm_of_diagonal() {
        let m = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -3.0),
        ]));
        assert!((op_norm(&m) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn phase_fix_makes_peak_real() {
        let mut v = ComplexVector::from_vec(vec![Complex64::new(0.1, 0.1), Complex64::new(0.0, -2.0)]);
        fix_global_phase(&mut v);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((v[0].norm() - 0.1 * 2f64.sqrt()).abs() < 1e-15);
    }
}
