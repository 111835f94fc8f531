//! Canonical elements of the coordinate ring of the unit sphere,
//! `A = Q[x,y,z] / (x^2 + y^2 + z^2 - 1)`.
//!
//! Every element is stored as `p(x,y) + q(x,y)*z`: iterated rewriting of
//! `z^2 -> 1 - x^2 - y^2` makes this form unique, so equality is plain
//! coefficient comparison.

use crate::rational::{rat_i, Rat};
use crate::ring::poly::{monomial_string, write_term, PolyXY};
use crate::ring::{Coord, SpherePoint};
use crate::{Error, Result};

/// An element `p + q*z` of the sphere ring in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SphereFun {
    p: PolyXY,
    q: PolyXY,
}

/// `1 - x^2 - y^2`, the canonical image of `z^2`.
pub(crate) fn z_squared() -> PolyXY {
    let mut s = PolyXY::constant(rat_i(1));
    s.add_term(&rat_i(-1), 2, 0);
    s.add_term(&rat_i(-1), 0, 2);
    s
}

impl SphereFun {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(rat_i(1))
    }

    pub fn constant(c: Rat) -> Self {
        Self {
            p: PolyXY::constant(c),
            q: PolyXY::zero(),
        }
    }

    pub fn from_parts(p: PolyXY, q: PolyXY) -> Self {
        Self { p, q }
    }

    pub fn coordinate(c: Coord) -> Self {
        match c {
            Coord::X => Self {
                p: PolyXY::monomial(rat_i(1), 1, 0),
                q: PolyXY::zero(),
            },
            Coord::Y => Self {
                p: PolyXY::monomial(rat_i(1), 0, 1),
                q: PolyXY::zero(),
            },
            Coord::Z => Self {
                p: PolyXY::zero(),
                q: PolyXY::one(),
            },
        }
    }

    /// Canonical form of a single formal monomial `c * x^a * y^b * z^e`.
    pub fn monomial(c: Rat, a: u32, b: u32, e: u32) -> Self {
        let base = PolyXY::monomial(c, a, b);
        let mut reduced = base;
        for _ in 0..e / 2 {
            reduced = reduced.mul(&z_squared());
        }
        if e.is_multiple_of(2) {
            Self {
                p: reduced,
                q: PolyXY::zero(),
            }
        } else {
            Self {
                p: PolyXY::zero(),
                q: reduced,
            }
        }
    }

    /// Normalizes a formal polynomial in x, y, z given as a term list.
    pub fn from_terms<I: IntoIterator<Item = (Rat, u32, u32, u32)>>(terms: I) -> Self {
        let mut acc = Self::zero();
        for (c, a, b, e) in terms {
            acc = acc.add(&Self::monomial(c, a, b, e));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn parts(&self) -> (&PolyXY, &PolyXY) {
        (&self.p, &self.q)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.q.is_zero() {
            self.p.as_constant()
        } else {
            None
        }
    }

    /// The element as a single canonical term `(c, a, b, z-exponent in {0,1})`.
    pub fn as_single_term(&self) -> Option<(Rat, u32, u32, u32)> {
        match (self.p.is_zero(), self.q.is_zero()) {
            (false, true) => self.p.as_single_term().map(|(c, a, b)| (c, a, b, 0)),
            (true, false) => self.q.as_single_term().map(|(c, a, b)| (c, a, b, 1)),
            _ => None,
        }
    }

    /// Total degree of the canonical representative (z counts as 1).
    pub fn degree(&self) -> Option<u32> {
        let dp = self.p.degree();
        let dq = self.q.degree().map(|d| d + 1);
        match (dp, dq) {
            (None, d) | (d, None) => d,
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            p: self.p.add(&other.p),
            q: self.q.add(&other.q),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p.neg(),
            q: self.q.neg(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            p: self.p.sub(&other.p),
            q: self.q.sub(&other.q),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // (p1 + q1 z)(p2 + q2 z) = p1p2 + q1q2(1-x^2-y^2) + (p1q2 + q1p2) z
        let p = self
            .p
            .mul(&other.p)
            .add(&self.q.mul(&other.q).mul(&z_squared()));
        let q = self.p.mul(&other.q).add(&self.q.mul(&other.p));
        Self { p, q }
    }

    pub fn mul_coord(&self, c: Coord) -> Self {
        self.mul(&Self::coordinate(c))
    }

    /// Multiplication by `z^k` for `k >= 0`.
    pub fn mul_z_power(&self, k: u32) -> Self {
        let mut reduced = self.clone();
        let z = Self::coordinate(Coord::Z);
        // z^2 steps in one multiplication each
        let zz = Self {
            p: z_squared(),
            q: PolyXY::zero(),
        };
        for _ in 0..k / 2 {
            reduced = reduced.mul(&zz);
        }
        if k % 2 == 1 {
            reduced = reduced.mul(&z);
        }
        reduced
    }

    /// Exact division by a coordinate. For x and y this is monomial-wise;
    /// `p + q*z` is divisible by z exactly when `1 - x^2 - y^2` divides `p`,
    /// with quotient `q + (p / (1 - x^2 - y^2))*z`.
    pub fn divide_by_coordinate(&self, c: Coord) -> Result<Self> {
        match c {
            Coord::X | Coord::Y => {
                let by_x = c == Coord::X;
                if self.p.divisible_by_var(by_x) && self.q.divisible_by_var(by_x) {
                    Ok(Self {
                        p: self.p.divide_by_var(by_x),
                        q: self.q.divide_by_var(by_x),
                    })
                } else {
                    Err(Error::NotDivisible(c))
                }
            }
            Coord::Z => match self.p.exact_div(&z_squared()) {
                Some(quot) => Ok(Self {
                    p: self.q.clone(),
                    q: quot,
                }),
                None => Err(Error::NotDivisible(c)),
            },
        }
    }

    pub fn divisible_by(&self, c: Coord) -> bool {
        self.divide_by_coordinate(c).is_ok()
    }

    /// Largest k with `c^k` dividing the element; 0 for zero input is not
    /// meaningful, so zero is the caller's concern.
    pub fn multiplicity(&self, c: Coord) -> u32 {
        let mut k = 0;
        let mut cur = self.clone();
        while let Ok(next) = cur.divide_by_coordinate(c) {
            cur = next;
            k += 1;
        }
        k
    }

    /// Formal partial derivative of the canonical representative with
    /// respect to an ambient coordinate (no chart relation applied).
    pub fn formal_partial(&self, c: Coord) -> Self {
        match c {
            Coord::X => Self {
                p: self.p.dx(),
                q: self.q.dx(),
            },
            Coord::Y => Self {
                p: self.p.dy(),
                q: self.q.dy(),
            },
            Coord::Z => Self {
                p: self.q.clone(),
                q: PolyXY::zero(),
            },
        }
    }

    pub fn eval(&self, pt: &SpherePoint) -> Rat {
        self.p.eval(pt.x(), pt.y()) + self.q.eval(pt.x(), pt.y()) * pt.z()
    }

    /// Canonical monomials with coefficients, as `(coef, a, b, z-exp)`.
    pub fn terms(&self) -> Vec<(Rat, u32, u32, u32)> {
        let mut out: Vec<(Rat, u32, u32, u32)> = Vec::new();
        for (&(a, b), c) in self.p.terms() {
            out.push((c.clone(), a, b, 0));
        }
        for (&(a, b), c) in self.q.terms() {
            out.push((c.clone(), a, b, 1));
        }
        out
    }
}

impl std::fmt::Display for SphereFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = self.terms();
        terms.sort_by_key(|&(_, a, b, e)| (a + b + e, std::cmp::Reverse(a), std::cmp::Reverse(b)));
        for (idx, (c, a, b, e)) in terms.iter().enumerate() {
            write_term(f, idx == 0, c, &monomial_string(*a, *b, *e == 1))?;
        }
        Ok(())
    }
}
