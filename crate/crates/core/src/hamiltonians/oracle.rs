//! Closed-form bound-state energies used as references.

use std::f64::consts::FRAC_PI_2;

use super::{DiracParams, Potential};
use crate::error::{Error, Result};

/// Analytic bound-state energy of a catalog potential.
///
/// `n` counts from zero for the one-dimensional wells. For the Coulomb
/// potential `n` is the principal quantum number, `n > l`.
pub fn schrodinger_energy_oracle(potential: &Potential, n: usize) -> Result<f64> {
    let nf = n as f64;
    match *potential {
        Potential::Free => Err(Error::NoSuchBoundState { n }),
        Potential::HarmonicOscillator { omega, .. } => Ok(omega * (nf + 0.5)),
        Potential::CoulombRadial { z, ell, soft_core } => {
            if soft_core != 0.0 {
                return Err(Error::NoClosedForm("a soft-core Coulomb potential".into()));
            }
            if n <= ell as usize {
                return Err(Error::NoSuchBoundState { n });
            }
            Ok(-z * z / (2.0 * nf * nf))
        }
        Potential::PoschlTeller { lambda, a, .. } => {
            let depth = lambda - 1.0 - nf;
            if depth <= 0.0 {
                return Err(Error::NoSuchBoundState { n });
            }
            Ok(-a * a * depth * depth / 2.0)
        }
        Potential::SquareWell { depth, width, .. } => square_well_level(depth, width, n),
    }
}

/// Finite square well of depth `depth` and full width `width` on the whole
/// line. With `z = k width / 2` the levels solve `z tan z = sqrt(z0² - z²)`
/// (even) and `-z cot z = sqrt(z0² - z²)` (odd), one root per quarter
/// period below `z0`.
fn square_well_level(depth: f64, width: f64, n: usize) -> Result<f64> {
    let half = 0.5 * width;
    let z0 = half * (2.0 * depth).sqrt();
    let lo = n as f64 * FRAC_PI_2;
    if lo >= z0 {
        return Err(Error::NoSuchBoundState { n });
    }
    let hi = ((n + 1) as f64 * FRAC_PI_2).min(z0);
    let mismatch = |z: f64| {
        let decay = (z0 * z0 - z * z).max(0.0).sqrt();
        if n % 2 == 0 {
            z * z.tan() - decay
        } else {
            -z / z.tan() - decay
        }
    };
    // monotone increasing on (lo, hi); only interior points are evaluated
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if mismatch(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let z = 0.5 * (a + b);
    let k = z / half;
    Ok(0.5 * k * k - depth)
}

/// Sommerfeld energy (rest energy included) of the hydrogenic Dirac level
/// with radial quantum number `n_r`.
pub fn dirac_energy_oracle(params: &DiracParams, n_r: usize) -> Result<f64> {
    let params = params.validated()?;
    if params.kappa > 0 && n_r == 0 {
        return Err(Error::NoSuchBoundState { n: n_r });
    }
    let za = params.z / params.c;
    let kappa = f64::from(params.kappa);
    let gamma = (kappa * kappa - za * za).sqrt();
    let ratio = za / (n_r as f64 + gamma);
    Ok(params.rest_energy() / (1.0 + ratio * ratio).sqrt())
}
