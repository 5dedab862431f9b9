//! Symmetric Lanczos iteration with full reorthogonalization.
//!
//! Every new Krylov vector is orthogonalized twice against all stored
//! vectors, so loss-of-orthogonality ghosts cannot appear among the Ritz
//! values; any remaining non-eigenstates of the full operator come from the
//! projection itself.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eigh_tridiagonal, RitzPair};
use crate::error::{invalid, Error, Result};

/// Matrix-free symmetric operator.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &DVector<f64>) -> DVector<f64>;
}

impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        self * x
    }
}

/// Wraps a closure as a [`SymmetricOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&DVector<f64>) -> DVector<f64>> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&DVector<f64>) -> DVector<f64>> SymmetricOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.f)(x)
    }
}

/// Probe `<u, A v> = <A u, v>` with seeded random vectors.
pub fn check_symmetry(op: &impl SymmetricOperator, probes: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = op.dim();
    for _ in 0..probes {
        let u = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let au = op.apply(&u);
        let av = op.apply(&v);
        let gap = (u.dot(&av) - au.dot(&v)).abs();
        let scale = 1.0 + au.norm() * v.norm() + u.norm() * av.norm();
        if gap > 1e-10 * scale {
            return Err(Error::NotSymmetric(gap));
        }
    }
    Ok(())
}

/// Choice of the first Krylov vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartVector {
    /// Normalized all-ones vector.
    Ones,
    /// Uniform entries in `[-1, 1)` from a seeded ChaCha stream.
    Random { seed: u64 },
}

impl StartVector {
    pub fn build(&self, dim: usize) -> DVector<f64> {
        match *self {
            Self::Ones => DVector::from_element(dim, 1.0),
            Self::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0))
            }
        }
    }
}

/// Relative size below which a new off-diagonal signals an invariant
/// subspace.
pub const BREAKDOWN_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// A new Krylov vector was added.
    Extended,
    /// The Krylov space became invariant (or reached full dimension); the
    /// tridiagonal matrix is final.
    Breakdown,
}

/// Krylov basis and tridiagonal coefficients after `iteration` steps.
#[derive(Debug, Clone)]
pub struct LanczosState {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub krylov: Vec<DVector<f64>>,
    pub iteration: usize,
    terminated: bool,
    scale: f64,
}

impl LanczosState {
    pub fn new(start: DVector<f64>) -> Result<Self> {
        let norm = start.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid("Lanczos start vector must be nonzero and finite"));
        }
        Ok(Self {
            alpha: Vec::new(),
            beta: Vec::new(),
            krylov: vec![start / norm],
            iteration: 0,
            terminated: false,
            scale: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.krylov[0].len()
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// One Lanczos step with two passes of classical Gram-Schmidt against
    /// the whole Krylov basis.
    pub fn step(&mut self, op: &impl SymmetricOperator) -> Result<StepOutcome> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op.dim() });
        }
        if self.terminated {
            return Ok(StepOutcome::Breakdown);
        }
        let j = self.alpha.len();
        let q = &self.krylov[j];
        let mut w = op.apply(q);
        self.scale = self.scale.max(w.norm());
        let alpha = q.dot(&w);
        w.axpy(-alpha, q, 1.0);
        if j > 0 {
            w.axpy(-self.beta[j - 1], &self.krylov[j - 1], 1.0);
        }
        for _ in 0..2 {
            for v in &self.krylov {
                let overlap = v.dot(&w);
                w.axpy(-overlap, v, 1.0);
            }
        }
        self.alpha.push(alpha);
        self.iteration += 1;

        let beta = w.norm();
        if self.krylov.len() == self.dim() || beta <= BREAKDOWN_TOL * self.scale {
            self.terminated = true;
            return Ok(StepOutcome::Breakdown);
        }
        self.beta.push(beta);
        self.krylov.push(w / beta);
        Ok(StepOutcome::Extended)
    }

    /// The `l×l` tridiagonal matrix, `l = iteration`.
    pub fn tridiagonal(&self) -> DMatrix<f64> {
        let l = self.alpha.len();
        let mut t = DMatrix::zeros(l, l);
        for i in 0..l {
            t[(i, i)] = self.alpha[i];
            if i + 1 < l {
                t[(i, i + 1)] = self.beta[i];
                t[(i + 1, i)] = self.beta[i];
            }
        }
        t
    }

    /// Ritz pairs of the current tridiagonal matrix, lifted to the full
    /// space and normalized, ascending in value.
    pub fn ritz_pairs(&self) -> Result<Vec<RitzPair>> {
        let l = self.alpha.len();
        if l == 0 {
            return Err(invalid("no Lanczos step has been taken"));
        }
        let eig = eigh_tridiagonal(&self.alpha, &self.beta[..l - 1])?;
        let mut pairs = Vec::with_capacity(l);
        for k in 0..l {
            let coeffs = eig.vectors.column(k);
            let mut vector = DVector::zeros(self.dim());
            for (c, q) in coeffs.iter().zip(&self.krylov[..l]) {
                vector.axpy(*c, q, 1.0);
            }
            let norm = vector.norm();
            vector /= norm;
            pairs.push(RitzPair { value: eig.values[k], vector, iteration: l, track_id: None });
        }
        Ok(pairs)
    }

    /// Largest `|<q_i, q_j>|` over `i != j`.
    pub fn orthogonality_loss(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.krylov.iter().enumerate() {
            for b in &self.krylov[i + 1..] {
                worst = worst.max(a.dot(b).abs());
            }
        }
        worst
    }
}

/// Free-function form of [`LanczosState::ritz_pairs`].
pub fn ritz_pairs(state: &LanczosState) -> Result<Vec<RitzPair>> {
    state.ritz_pairs()
}
