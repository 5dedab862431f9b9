use crate::error::{invalid, Result};

/// Model potentials. One-dimensional wells are centred at `center`; the
/// Coulomb potential is radial and includes the centrifugal barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Free,
    HarmonicOscillator { omega: f64, center: f64 },
    /// `-Z / sqrt(r² + a²) + l(l+1) / (2 r²)`; `a = soft_core`, zero for the
    /// point nucleus.
    CoulombRadial { z: f64, ell: u32, soft_core: f64 },
    /// `-lambda (lambda - 1) a² / (2 cosh²(a (x - center)))`.
    PoschlTeller { lambda: f64, a: f64, center: f64 },
    /// Depth `-depth` for `|x - center| < width / 2`, zero outside.
    SquareWell { depth: f64, width: f64, center: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

impl Potential {
    pub fn harmonic(omega: f64, center: f64) -> Result<Self> {
        Self::HarmonicOscillator { omega, center }.validated()
    }

    pub fn coulomb(z: f64, ell: u32) -> Result<Self> {
        Self::CoulombRadial { z, ell, soft_core: 0.0 }.validated()
    }

    pub fn soft_coulomb(z: f64, ell: u32, soft_core: f64) -> Result<Self> {
        Self::CoulombRadial { z, ell, soft_core }.validated()
    }

    pub fn poschl_teller(lambda: f64, a: f64, center: f64) -> Result<Self> {
        Self::PoschlTeller { lambda, a, center }.validated()
    }

    pub fn square_well(depth: f64, width: f64, center: f64) -> Result<Self> {
        Self::SquareWell { depth, width, center }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Self::Free => {}
            Self::HarmonicOscillator { omega, .. } => positive("omega", omega)?,
            Self::CoulombRadial { z, soft_core, .. } => {
                positive("Z", z)?;
                if !(soft_core >= 0.0 && soft_core.is_finite()) {
                    return Err(invalid(format!("soft-core radius must be nonnegative, got {soft_core}")));
                }
            }
            Self::PoschlTeller { lambda, a, .. } => {
                if !(lambda > 1.0 && lambda.is_finite()) {
                    return Err(invalid(format!("lambda must exceed 1, got {lambda}")));
                }
                positive("a", a)?;
            }
            Self::SquareWell { depth, width, .. } => {
                positive("depth", depth)?;
                positive("width", width)?;
            }
        }
        Ok(self)
    }

    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Self::Free => 0.0,
            Self::HarmonicOscillator { omega, center } => {
                let x = r - center;
                0.5 * omega * omega * x * x
            }
            Self::CoulombRadial { z, ell, soft_core } => {
                let attraction = if soft_core == 0.0 {
                    -z / r
                } else {
                    -z / (r * r + soft_core * soft_core).sqrt()
                };
                let l = f64::from(ell);
                attraction + l * (l + 1.0) / (2.0 * r * r)
            }
            Self::PoschlTeller { lambda, a, center } => {
                let ch = (a * (r - center)).cosh();
                -lambda * (lambda - 1.0) * a * a / (2.0 * ch * ch)
            }
            Self::SquareWell { depth, width, center } => {
                if (r - center).abs() < 0.5 * width {
                    -depth
                } else {
                    0.0
                }
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::HarmonicOscillator { .. } => "harmonic",
            Self::CoulombRadial { .. } => "hydrogen",
            Self::PoschlTeller { .. } => "poschl_teller",
            Self::SquareWell { .. } => "square_well",
        }
    }
}

/// Parameters of the radial Dirac-Coulomb problem in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParams {
    pub z: f64,
    pub kappa: i32,
    pub c: f64,
}

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT: f64 = 137.035999;

impl DiracParams {
    pub fn new(z: f64, kappa: i32, c: f64) -> Result<Self> {
        Self { z, kappa, c }.validated()
    }

    pub fn hydrogenic(z: f64, kappa: i32) -> Result<Self> {
        Self::new(z, kappa, SPEED_OF_LIGHT)
    }

    pub fn validated(self) -> Result<Self> {
        positive("Z", self.z)?;
        positive("c", self.c)?;
        if self.kappa == 0 {
            return Err(invalid("kappa must be nonzero"));
        }
        let coupling = self.z / self.c;
        if coupling >= f64::from(self.kappa.abs()) {
            return Err(crate::Error::SupercriticalCoupling { coupling, kappa: self.kappa });
        }
        Ok(self)
    }

    pub fn rest_energy(&self) -> f64 {
        self.c * self.c
    }
}
