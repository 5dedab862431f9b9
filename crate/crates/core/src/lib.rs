//! Finite-basis spectral solver for Hamiltonians with both bound and
//! continuum spectra.
//!
//! A Hamiltonian is projected onto a finite sine basis, giving the matrix
//! `h` of the projected operator together with the matrix `h2` of the
//! projected square. Each eigenpair `(e, v)` of `h` is then tested for being
//! an eigenpair of the square as well:
//!
//! ```text
//! delta = | e^2 - <v| H^2 |v> |
//! ```
//!
//! Genuine eigenstates of the full operator drive `delta` to zero as the
//! basis (or Krylov space) grows; states that only exist because of the
//! projection do not.
//!
//! Modules:
//! - [`basis`]: sine bases, coordinate maps, Gauss-Legendre quadrature.
//! - [`hamiltonians`]: model potentials, Schrödinger and radial Dirac
//!   assembly, analytic spectra.
//! - [`eigensolve`]: dense symmetric eigensolver, Lanczos with full
//!   reorthogonalization, Ritz-pair tracking.
//! - [`diagnostics`]: the delta test, trend classification, forbidden-region
//!   fraction and the Thomas-Reiche-Kuhn sum rule.

pub mod basis;
pub mod diagnostics;
pub mod eigensolve;
mod error;
pub mod hamiltonians;

pub use error::{Error, Result};
