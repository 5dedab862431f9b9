use crate::error::{invalid, Result};

/// Family of coordinate maps `u -> r` on `(0, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    /// `r(u) = u (1 + g) / (1 + g u / L)`, which keeps both endpoints fixed.
    Rational,
}

/// Strictly increasing map from the basis coordinate `u` to the physical
/// coordinate `r`, with analytic Jacobian and Jacobian derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateMap {
    kind: MapKind,
    box_length: f64,
    strength: f64,
}

pub fn build_coordinate_map(kind: MapKind, box_length: f64, map_strength: f64) -> Result<CoordinateMap> {
    CoordinateMap::new(kind, box_length, map_strength)
}

impl CoordinateMap {
    pub fn new(kind: MapKind, box_length: f64, map_strength: f64) -> Result<Self> {
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(invalid(format!("box length must be positive, got {box_length}")));
        }
        if !(map_strength >= 0.0 && map_strength.is_finite()) {
            return Err(invalid(format!("map strength must be nonnegative, got {map_strength}")));
        }
        let strength = match kind {
            MapKind::Identity => 0.0,
            MapKind::Rational => map_strength,
        };
        Ok(Self { kind, box_length, strength })
    }

    pub fn identity(box_length: f64) -> Result<Self> {
        Self::new(MapKind::Identity, box_length, 0.0)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn is_identity(&self) -> bool {
        self.strength == 0.0
    }

    fn slope(&self) -> f64 {
        self.strength / self.box_length
    }

    pub fn forward(&self, u: f64) -> f64 {
        if self.is_identity() {
            return u;
        }
        u * (1.0 + self.strength) / (1.0 + self.slope() * u)
    }

    pub fn inverse(&self, r: f64) -> f64 {
        if self.is_identity() {
            return r;
        }
        r / (1.0 + self.strength - self.slope() * r)
    }

    /// `dr/du`.
    pub fn jacobian(&self, u: f64) -> f64 {
        if self.is_identity() {
            return 1.0;
        }
        let q = 1.0 + self.slope() * u;
        (1.0 + self.strength) / (q * q)
    }

    /// `d(dr/du)/du`.
    pub fn jacobian_d1(&self, u: f64) -> f64 {
        if self.is_identity() {
            return 0.0;
        }
        let s = self.slope();
        let q = 1.0 + s * u;
        -2.0 * s * (1.0 + self.strength) / (q * q * q)
    }

    /// `d²(dr/du)/du²`.
    pub fn jacobian_d2(&self, u: f64) -> f64 {
        if self.is_identity() {
            return 0.0;
        }
        let s = self.slope();
        let q = 1.0 + s * u;
        6.0 * s * s * (1.0 + self.strength) / (q * q * q * q)
    }
}
