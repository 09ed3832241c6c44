//! Small dense complex matrices: just enough for operator norms and spectrum
//! bounds of the finite-dimensional models (dimensions ≤ a few hundred).

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zero(n: usize) -> Self {
        DenseMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zero(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, via the Hermitian eigenvalues of M*M.
    pub fn op_norm(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let eigs = hermitian_eigenvalues(&gram);
        eigs.into_iter().fold(0.0f64, f64::max).max(0.0).sqrt()
    }

    /// How far the matrix is from being self-adjoint.
    pub fn self_adjoint_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut a = m.clone();
    // symmetrize rounding noise away
    for i in 0..n {
        for j in 0..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
        }
    }
    let scale = a.frobenius_norm().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= tol / (n as f64) {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s·phase], [−s, c·phase]] on coordinates (p, q);
                // A ← J^H A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase.conj() * s;
                    a[(k, q)] = akp * phase * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * phase.conj() * s + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = DenseMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn known_two_by_two_spectrum() {
        // [[2, 1+i], [1−i, 1]] has eigenvalues 3 and 0
        let mut m = DenseMatrix::zero(2);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        m[(0, 1)] = Complex64::new(1.0, 1.0);
        m[(1, 0)] = Complex64::new(1.0, -1.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        let mut eigs = hermitian_eigenvalues(&m);
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 0.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
        assert!((m.op_norm() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_match_trace_and_frobenius() {
        for seed in 0..8 {
            let x = random_matrix(7, seed);
            let h = x.adjoint().mul(&x); // Hermitian PSD
            let eigs = hermitian_eigenvalues(&h);
            let trace: f64 = (0..7).map(|i| h[(i, i)].re).sum();
            assert!((eigs.iter().sum::<f64>() - trace).abs() < 1e-10);
            let frob_sq: f64 = h.frobenius_norm().powi(2);
            assert!((eigs.iter().map(|l| l * l).sum::<f64>() - frob_sq).abs() < 1e-9);
            assert!(eigs.iter().all(|&l| l > -1e-11), "PSD spectrum {eigs:?}");
        }
    }

    #[test]
    fn op_norm_bounds() {
        for seed in 20..26 {
            let x = random_matrix(6, seed);
            let op = x.op_norm();
            // ‖x‖₂ ≤ ‖x‖_F ≤ √n·‖x‖₂
            assert!(op <= x.frobenius_norm() + 1e-10);
            assert!(x.frobenius_norm() <= 6f64.sqrt() * op + 1e-10);
            // and ‖x·y‖ ≤ ‖x‖‖y‖
            let y = random_matrix(6, seed + 100);
            assert!(x.mul(&y).op_norm() <= op * y.op_norm() + 1e-9);
        }
    }

    #[test]
    fn unitary_has_norm_one() {
        // permutation matrix
        let n = 5;
        let mut m = DenseMatrix::zero(n);
        for j in 0..n {
            m[((j + n - 1) % n, j)] = Complex64::new(1.0, 0.0);
        }
        assert!((m.op_norm() - 1.0).abs() < 1e-12);
    }
}
