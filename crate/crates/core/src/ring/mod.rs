//! Exact arithmetic in the coordinate ring of the unit sphere and its
//! localizations at coordinate monomials.

mod calculus;
mod localized;
mod parse;
mod point;
pub(crate) mod poly;
mod sphere;

pub use calculus::{partial, partial_sphere, valuation, DEFAULT_VALUATION_CAP};
pub use localized::{DenomExps, LocalizedFun};
pub use parse::{parse_localized, parse_sphere};
pub use point::SpherePoint;
pub use poly::PolyXY;
pub use sphere::SphereFun;

/// Ambient coordinate of the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    /// Denominator-exponent triple with this coordinate raised to `e`.
    pub fn exps(self, e: u32) -> DenomExps {
        match self {
            Coord::X => (e, 0, 0),
            Coord::Y => (0, e, 0),
            Coord::Z => (0, 0, e),
        }
    }

    /// 1-based ambient index (x = 1, y = 2, z = 3).
    pub fn index(self) -> usize {
        match self {
            Coord::X => 1,
            Coord::Y => 2,
            Coord::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Coord> {
        match i {
            1 => Some(Coord::X),
            2 => Some(Coord::Y),
            3 => Some(Coord::Z),
            _ => None,
        }
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coord::X => write!(f, "x"),
            Coord::Y => write!(f, "y"),
            Coord::Z => write!(f, "z"),
        }
    }
}

/// One of the sphere's three charts, named by the inverted coordinate.
///
/// The parameter pair is cyclic: the chart at z has parameters (x, y), the
/// chart at x has (y, z), the chart at y has (z, x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    X,
    Y,
    Z,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::X, Chart::Y, Chart::Z];

    /// The coordinate inverted in this chart.
    pub fn inverted(self) -> Coord {
        match self {
            Chart::X => Coord::X,
            Chart::Y => Coord::Y,
            Chart::Z => Coord::Z,
        }
    }

    /// The ordered parameter pair of the chart.
    pub fn parameters(self) -> (Coord, Coord) {
        match self {
            Chart::Z => (Coord::X, Coord::Y),
            Chart::X => (Coord::Y, Coord::Z),
            Chart::Y => (Coord::Z, Coord::X),
        }
    }

    pub fn at(c: Coord) -> Chart {
        match c {
            Coord::X => Chart::X,
            Coord::Y => Chart::Y,
            Coord::Z => Chart::Z,
        }
    }
}

impl std::fmt::Display for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N({})", self.inverted())
    }
}
