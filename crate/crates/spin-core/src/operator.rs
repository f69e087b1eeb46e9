use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Result, SpinError, StateVector, C64};

/// Square complex matrix. `hermitian_hint` records that the constructor
/// guarantees Hermiticity; it is not trusted by the eigensolver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Packed", try_from = "Packed")]
pub struct DenseOperator {
    mat: DMatrix<C64>,
    hermitian_hint: bool,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim), hermitian_hint: true }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim), hermitian_hint: true }
    }

    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(SpinError::Dimension { expected: mat.nrows(), got: mat.ncols() });
        }
        Ok(Self { mat, hermitian_hint: false })
    }

    pub fn from_real(mat: &DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(mat.map(|x| C64::new(x, 0.0)))
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut mat = DMatrix::zeros(n, n);
        for (k, v) in values.iter().enumerate() {
            mat[(k, k)] = C64::new(*v, 0.0);
        }
        Self { mat, hermitian_hint: true }
    }

    /// `|ket><bra|`.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Self {
        let mat = ket.amplitudes() * bra.amplitudes().adjoint();
        Self { mat, hermitian_hint: false }
    }

    pub fn with_hermitian_hint(mut self, hint: bool) -> Self {
        self.hermitian_hint = hint;
        self
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint(), hermitian_hint: self.hermitian_hint }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { mat: &self.mat * s, hermitian_hint: self.hermitian_hint && s.im == 0.0 }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self { mat: &self.mat * C64::new(s, 0.0), hermitian_hint: self.hermitian_hint }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self { mat: &self.mat * &other.mat - &other.mat * &self.mat, hermitian_hint: false }
    }

    /// Operator acting as `self` on the low bits and `high` on the bits above them.
    pub fn tensor(&self, high: &Self) -> Self {
        Self {
            mat: high.mat.kronecker(&self.mat),
            hermitian_hint: self.hermitian_hint && high.hermitian_hint,
        }
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        StateVector::from_vector(&self.mat * v.amplitudes())
    }

    /// `<v| A |v>`.
    pub fn expectation(&self, v: &StateVector) -> C64 {
        v.amplitudes().dotc(&(&self.mat * v.amplitudes()))
    }

    /// `<u| A |v>`.
    pub fn matrix_element(&self, u: &StateVector, v: &StateVector) -> C64 {
        u.amplitudes().dotc(&(&self.mat * v.amplitudes()))
    }

    pub fn norm_max(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.iter().zip(other.mat.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dag|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self.mat[(r, c)] - self.mat[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `max |U^dag U - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.mat.adjoint() * &self.mat;
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        dev
    }

    pub fn is_real(&self) -> bool {
        self.mat.iter().all(|z| z.im == 0.0)
    }

    /// Hermitian part `(A + A^dag)/2`, flagged Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let mat = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        Self { mat, hermitian_hint: true }
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt, $hint:expr) => {
        impl $tr<&DenseOperator> for &DenseOperator {
            type Output = DenseOperator;
            fn $f(self, rhs: &DenseOperator) -> DenseOperator {
                DenseOperator {
                    mat: &self.mat $op &rhs.mat,
                    hermitian_hint: $hint(self.hermitian_hint, rhs.hermitian_hint),
                }
            }
        }
        impl $tr<DenseOperator> for DenseOperator {
            type Output = DenseOperator;
            fn $f(self, rhs: DenseOperator) -> DenseOperator {
                (&self).$f(&rhs)
            }
        }
    };
}

binop!(Add, add, +, |a: bool, b: bool| a && b);
binop!(Sub, sub, -, |a: bool, b: bool| a && b);
binop!(Mul, mul, *, |_: bool, _: bool| false);

impl Neg for &DenseOperator {
    type Output = DenseOperator;
    fn neg(self) -> DenseOperator {
        DenseOperator { mat: -&self.mat, hermitian_hint: self.hermitian_hint }
    }
}

#[derive(Serialize, Deserialize)]
struct Packed {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<DenseOperator> for Packed {
    fn from(op: DenseOperator) -> Self {
        let dim = op.dim();
        let mut re = Vec::with_capacity(dim * dim);
        let mut im = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                re.push(op.mat[(r, c)].re);
                im.push(op.mat[(r, c)].im);
            }
        }
        Packed { dim, re, im }
    }
}

impl TryFrom<Packed> for DenseOperator {
    type Error = SpinError;
    fn try_from(p: Packed) -> Result<Self> {
        let n = p.dim * p.dim;
        if p.re.len() != n || p.im.len() != n {
            return Err(SpinError::Malformed(format!(
                "expected {n} entries, got re={} im={}",
                p.re.len(),
                p.im.len()
            )));
        }
        let mat = DMatrix::from_fn(p.dim, p.dim, |r, c| C64::new(p.re[r * p.dim + c], p.im[r * p.dim + c]));
        let hint = false;
        Ok(Self { mat, hermitian_hint: hint })
    }
}
