use nalgebra::DMatrix;
use spin_core::{DenseOperator, C64};

use crate::{ControlError, Result};

/// Real span of Hermitian generators closed under `i[A, B]`, identity included.
#[derive(Debug, Clone)]
pub struct LieClosure {
    /// Numerical rank of the accepted generators (singular values above `tol` times the largest).
    pub dimension: usize,
    /// Span dimension after the seed and after each commutator round.
    pub round_dimensions: Vec<usize>,
    orthonormal: Vec<DMatrix<C64>>,
    raw: Vec<DMatrix<C64>>,
    tol: f64,
}

fn inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

impl LieClosure {
    fn residual(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        let mut r = m.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &self.orthonormal {
                let c = inner(q, &r);
                r -= q * C64::new(c, 0.0);
            }
        }
        r
    }

    fn try_add(&mut self, m: DMatrix<C64>) -> bool {
        let norm = m.norm();
        if norm == 0.0 {
            return false;
        }
        let m = m / C64::new(norm, 0.0);
        let r = self.residual(&m);
        let rn = r.norm();
        if rn <= self.tol.max(1e-12) {
            return false;
        }
        self.orthonormal.push(r / C64::new(rn, 0.0));
        self.raw.push(m);
        true
    }

    /// `|op - proj(op)| / |op|` against the closed span.
    pub fn membership_residual(&self, op: &DenseOperator) -> f64 {
        let m = op.matrix();
        let n = m.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.residual(m).norm() / n
    }

    /// Rank added by one further round of all pairwise commutators.
    pub fn extra_round_rank(&self) -> usize {
        let mut probe = self.clone();
        let elems = self.raw.clone();
        let mut added = 0;
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                if probe.try_add(commutator(a, b)) {
                    added += 1;
                }
            }
        }
        added
    }

    fn numerical_rank(&self) -> usize {
        if self.raw.is_empty() {
            return 0;
        }
        let d = self.raw[0].len();
        let mut cols = DMatrix::<f64>::zeros(2 * d, self.raw.len());
        for (c, m) in self.raw.iter().enumerate() {
            for (i, z) in m.iter().enumerate() {
                cols[(i, c)] = z.re;
                cols[(d + i, c)] = z.im;
            }
        }
        let sv = cols.singular_values();
        let top = sv.max();
        sv.iter().filter(|s| **s > self.tol * top).count()
    }
}

fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    (a * b - b * a) * C64::new(0.0, 1.0)
}

/// Saturated dimension of the Lie algebra generated by `ops` and the identity.
pub fn lie_closure(ops: &[DenseOperator], tol: f64, max_rounds: usize) -> Result<LieClosure> {
    let dim = ops.first().map_or(1, |o| o.dim());
    let mut closure =
        LieClosure { dimension: 0, round_dimensions: Vec::new(), orthonormal: Vec::new(), raw: Vec::new(), tol };
    closure.try_add(DMatrix::identity(dim, dim));
    let mut frontier = Vec::new();
    for op in ops {
        if op.hermiticity_deviation() > spin_core::HERMITIAN_TOL {
            return Err(ControlError::Spin(spin_core::SpinError::NotHermitian(op.hermiticity_deviation())));
        }
        if closure.try_add(op.matrix().clone()) {
            frontier.push(closure.raw.last().expect("just added").clone());
        }
    }
    closure.round_dimensions.push(closure.raw.len());
    for _ in 0..max_rounds {
        let current = closure.raw.clone();
        let mut fresh = Vec::new();
        for a in &current {
            for b in &frontier {
                let c = commutator(a, b);
                if closure.try_add(c) {
                    fresh.push(closure.raw.last().expect("just added").clone());
                }
            }
        }
        if fresh.is_empty() {
            closure.dimension = closure.numerical_rank();
            return Ok(closure);
        }
        closure.round_dimensions.push(closure.raw.len());
        frontier = fresh;
    }
    Err(ControlError::ClosureCap(max_rounds))
}
