use nalgebra::{DMatrix, SymmetricEigen};

use crate::{DenseOperator, Result, SpinError, C64, HERMITIAN_TOL};

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns.
    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `f(A) = V diag(f(lambda)) V^dag`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> DenseOperator {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (c, lam) in self.values.iter().enumerate() {
            let z = f(*lam);
            for r in 0..n {
                scaled[(r, c)] *= z;
            }
        }
        DenseOperator::from_matrix(scaled * self.vectors.adjoint()).expect("square")
    }

    /// `exp(-i A t)`.
    pub fn evolve(&self, t: f64) -> DenseOperator {
        self.apply_fn(|lam| C64::from_polar(1.0, -lam * t))
    }

    /// `max |A V - V diag(lambda)|`.
    pub fn residual(&self, op: &DenseOperator) -> f64 {
        let av = op.matrix() * &self.vectors;
        let mut dev: f64 = 0.0;
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                dev = dev.max((av[(r, c)] - self.vectors[(r, c)] * self.values[c]).norm());
            }
        }
        dev
    }

    /// Eigenvalues grouped within `tol`, as `(mean value, multiplicity)`.
    pub fn degeneracies(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] > tol {
                let group = &self.values[start..k];
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
                start = k;
            }
        }
        out
    }
}

/// Diagonalize a Hermitian operator. Purely real input takes the real symmetric solver.
pub fn eig_hermitian(op: &DenseOperator) -> Result<Spectrum> {
    let scale = op.norm_max().max(1.0);
    let dev = op.hermiticity_deviation();
    if dev > HERMITIAN_TOL * scale {
        return Err(SpinError::NotHermitian(dev));
    }
    let n = op.dim();
    if n == 0 {
        return Ok(Spectrum { values: Vec::new(), vectors: DMatrix::zeros(0, 0) });
    }
    let (values, vectors) = if op.is_real() {
        let m = op.matrix();
        let sym = DMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)].re + m[(c, r)].re));
        let eig = SymmetricEigen::new(sym);
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let herm = op.hermitian_part().into_matrix();
        let eig = SymmetricEigen::new(herm);
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| values[*a].total_cmp(&values[*b]));
    let sorted_vals = order.iter().map(|k| values[*k]).collect();
    let sorted_vecs = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(Spectrum { values: sorted_vals, vectors: sorted_vecs })
}

/// `exp(-i H t)` through the eigen-decomposition of `H`.
pub fn unitary_evolve(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(eig_hermitian(h)?.evolve(t))
}
