//! Rational points on the unit sphere.

use num_traits::{One, Zero};

use crate::rational::Rat;
use crate::ring::Coord;
use crate::{Error, Result};

/// A point `(x, y, z)` with `x^2 + y^2 + z^2 = 1`, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpherePoint {
    x: Rat,
    y: Rat,
    z: Rat,
}

impl SpherePoint {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Result<Self> {
        if &x * &x + &y * &y + &z * &z != Rat::one() {
            return Err(Error::NotOnSphere);
        }
        Ok(Self { x, y, z })
    }

    /// North pole `(0, 0, 1)`.
    pub fn north_pole() -> Self {
        Self {
            x: Rat::zero(),
            y: Rat::zero(),
            z: Rat::one(),
        }
    }

    /// Rational point from stereographic parameters:
    /// `(2u, 2v, 1 - u^2 - v^2) / (1 + u^2 + v^2)`.
    pub fn from_stereographic(u: &Rat, v: &Rat) -> Self {
        let uu = u * u;
        let vv = v * v;
        let d = Rat::one() + &uu + &vv;
        Self {
            x: (Rat::from_integer(2.into()) * u) / &d,
            y: (Rat::from_integer(2.into()) * v) / &d,
            z: (Rat::one() - &uu - &vv) / &d,
        }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn z(&self) -> &Rat {
        &self.z
    }

    pub fn coord(&self, c: Coord) -> &Rat {
        match c {
            Coord::X => &self.x,
            Coord::Y => &self.y,
            Coord::Z => &self.z,
        }
    }
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            crate::rational::format_rat(&self.x),
            crate::rational::format_rat(&self.y),
            crate::rational::format_rat(&self.z)
        )
    }
}
