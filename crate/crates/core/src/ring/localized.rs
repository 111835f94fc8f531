//! Elements of the sphere ring localized at a coordinate monomial:
//! `num / (x^a y^b z^c)`.
//!
//! The normalized representative never has a numerator divisible by a
//! coordinate that appears in the denominator, and zero always carries the
//! trivial denominator. With that convention, equality is structural.

use num_traits::Zero;

use crate::rational::Rat;
use crate::ring::poly::pow_rat;
use crate::ring::{Coord, SphereFun, SpherePoint};
use crate::{Error, Result};

/// Denominator exponents `(a, b, c)` for `x^a y^b z^c`.
pub type DenomExps = (u32, u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalizedFun {
    num: SphereFun,
    denom: DenomExps,
}

impl LocalizedFun {
    /// Builds and normalizes `num / (x^a y^b z^c)`.
    pub fn new(num: SphereFun, denom: DenomExps) -> Self {
        let mut out = Self { num, denom };
        out.normalize();
        out
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_sphere(SphereFun::one())
    }

    pub fn from_sphere(num: SphereFun) -> Self {
        Self {
            num,
            denom: (0, 0, 0),
        }
    }

    pub fn coordinate(c: Coord) -> Self {
        Self::from_sphere(SphereFun::coordinate(c))
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_sphere(SphereFun::constant(c))
    }

    /// `z^k` for any integer k.
    pub fn z_power(k: i64) -> Self {
        if k >= 0 {
            Self::from_sphere(SphereFun::monomial(
                crate::rational::rat_i(1),
                0,
                0,
                k as u32,
            ))
        } else {
            Self::new(SphereFun::one(), (0, 0, (-k) as u32))
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.denom = (0, 0, 0);
            return;
        }
        for (coord, exp) in [
            (Coord::X, &mut self.denom.0),
            (Coord::Y, &mut self.denom.1),
            (Coord::Z, &mut self.denom.2),
        ] {
            while *exp > 0 {
                match self.num.divide_by_coordinate(coord) {
                    Ok(q) => {
                        self.num = q;
                        *exp -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &SphereFun {
        &self.num
    }

    pub fn denom(&self) -> DenomExps {
        self.denom
    }

    /// True when the element lies in the plain ring A.
    pub fn is_polynomial(&self) -> bool {
        self.denom == (0, 0, 0)
    }

    /// The coordinates that must be inverted for this element to make
    /// sense — the localization the element requires.
    pub fn required_localization(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        if self.denom.0 > 0 {
            out.push(Coord::X);
        }
        if self.denom.1 > 0 {
            out.push(Coord::Y);
        }
        if self.denom.2 > 0 {
            out.push(Coord::Z);
        }
        out
    }

    /// True when only z appears in the denominator.
    pub fn is_z_local(&self) -> bool {
        self.denom.0 == 0 && self.denom.1 == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a1, b1, c1) = self.denom;
        let (a2, b2, c2) = other.denom;
        let common = (a1.max(a2), b1.max(b2), c1.max(c2));
        let lift = |f: &SphereFun, d: DenomExps| -> SphereFun {
            f.mul(&SphereFun::monomial(
                crate::rational::rat_i(1),
                common.0 - d.0,
                common.1 - d.1,
                0,
            ))
            .mul_z_power(common.2 - d.2)
        };
        Self::new(
            lift(&self.num, self.denom).add(&lift(&other.num, other.denom)),
            common,
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            denom: self.denom,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            denom: self.denom,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.num),
            (
                self.denom.0 + other.denom.0,
                self.denom.1 + other.denom.1,
                self.denom.2 + other.denom.2,
            ),
        )
    }

    pub fn mul_sphere(&self, a: &SphereFun) -> Self {
        Self::new(self.num.mul(a), self.denom)
    }

    pub fn mul_coord(&self, c: Coord) -> Self {
        self.mul_sphere(&SphereFun::coordinate(c))
    }

    /// Division by the scaled coordinate monomial `coef * x^a y^b z^c`.
    pub fn div_monomial(&self, coef: &Rat, exps: DenomExps) -> Result<Self> {
        if coef.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = Rat::from_integer(1.into()) / coef;
        Ok(Self::new(
            self.num.scale(&inv),
            (
                self.denom.0 + exps.0,
                self.denom.1 + exps.1,
                self.denom.2 + exps.2,
            ),
        ))
    }

    /// Multiplication by `z^k`, any sign of k.
    pub fn z_shift(&self, k: i64) -> Self {
        if k >= 0 {
            Self::new(self.num.mul_z_power(k as u32), self.denom)
        } else {
            Self::new(
                self.num.clone(),
                (self.denom.0, self.denom.1, self.denom.2 + (-k) as u32),
            )
        }
    }

    /// Inverse, when the element is a unit of the fully localized ring,
    /// i.e. a scaled coordinate monomial.
    pub fn inverse(&self) -> Result<Self> {
        let (c, a, b, e) = self.as_term().ok_or(Error::NotInvertible)?;
        if c.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv_c = Rat::from_integer(1.into()) / c;
        let pos = |v: i64| if v > 0 { v as u32 } else { 0 };
        let neg = |v: i64| if v < 0 { (-v) as u32 } else { 0 };
        Ok(Self::new(
            SphereFun::monomial(inv_c, neg(a), neg(b), neg(e)),
            (pos(a), pos(b), pos(e)),
        ))
    }

    /// The element as a single term `c * x^i y^j z^k` with integer
    /// exponents, when it has that shape. Fully extracts coordinate factors
    /// first, so e.g. `1 - x^2 - y^2` is recognized as `z^2`.
    pub fn as_term(&self) -> Option<(Rat, i64, i64, i64)> {
        if self.is_zero() {
            return Some((Rat::zero(), 0, 0, 0));
        }
        let mut core = self.num.clone();
        let mut mult = [0i64; 3];
        for (idx, coord) in [Coord::X, Coord::Y, Coord::Z].into_iter().enumerate() {
            while let Ok(next) = core.divide_by_coordinate(coord) {
                core = next;
                mult[idx] += 1;
            }
        }
        let c = core.as_constant()?;
        Some((
            c,
            mult[0] - self.denom.0 as i64,
            mult[1] - self.denom.1 as i64,
            mult[2] - self.denom.2 as i64,
        ))
    }

    /// Degree in the z-filtration: the largest k with the element in
    /// `z^k A`. Undefined on zero.
    pub fn degree_z(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.num.multiplicity(Coord::Z) as i64 - self.denom.2 as i64)
    }

    /// Degree in the filtration by an arbitrary coordinate.
    pub fn degree_coord(&self, c: Coord) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let denom_exp = match c {
            Coord::X => self.denom.0,
            Coord::Y => self.denom.1,
            Coord::Z => self.denom.2,
        };
        Ok(self.num.multiplicity(c) as i64 - denom_exp as i64)
    }

    pub fn eval(&self, pt: &SpherePoint) -> Result<Rat> {
        let (a, b, c) = self.denom;
        let den = pow_rat(pt.x(), a) * pow_rat(pt.y(), b) * pow_rat(pt.z(), c);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(pt) / den)
    }
}

impl From<SphereFun> for LocalizedFun {
    fn from(f: SphereFun) -> Self {
        Self::from_sphere(f)
    }
}

impl std::fmt::Display for LocalizedFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.denom == (0, 0, 0) {
            return write!(f, "{}", self.num);
        }
        let num_terms = self.num.terms().len();
        if num_terms > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let (a, b, c) = self.denom;
        let mut parts = Vec::new();
        for (exp, name) in [(a, "x"), (b, "y"), (c, "z")] {
            if exp == 1 {
                parts.push(name.to_string());
            } else if exp > 1 {
                parts.push(format!("{name}^{exp}"));
            }
        }
        if parts.len() > 1 {
            write!(f, "/({})", parts.join("*"))
        } else {
            write!(f, "/{}", parts[0])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_i;

    fn x() -> LocalizedFun {
        LocalizedFun::coordinate(Coord::X)
    }
    fn z() -> LocalizedFun {
        LocalizedFun::coordinate(Coord::Z)
    }

    #[test]
    fn cancellation_on_multiply() {
        // (x/z) * z = x
        let x_over_z = LocalizedFun::new(SphereFun::coordinate(Coord::X), (0, 0, 1));
        assert_eq!(x_over_z.mul(&z()), x());
    }

    #[test]
    fn hidden_z_power_cancels() {
        // (1 - x^2 - y^2)/z = z
        let s = SphereFun::monomial(rat_i(1), 0, 0, 2);
        assert_eq!(LocalizedFun::new(s, (0, 0, 1)), z());
    }

    #[test]
    fn addition_over_common_denominator() {
        // x/z + y/z^2 = (xz + y)/z^2
        let a = LocalizedFun::new(SphereFun::coordinate(Coord::X), (0, 0, 1));
        let b = LocalizedFun::new(SphereFun::coordinate(Coord::Y), (0, 0, 2));
        let sum = a.add(&b);
        assert_eq!(sum.denom(), (0, 0, 2));
        let expected_num = SphereFun::coordinate(Coord::X)
            .mul(&SphereFun::coordinate(Coord::Z))
            .add(&SphereFun::coordinate(Coord::Y));
        assert_eq!(sum.num(), &expected_num);
    }

    #[test]
    fn degrees() {
        // z^3 * x has degree 3
        let f = LocalizedFun::from_sphere(SphereFun::monomial(rat_i(1), 1, 0, 3));
        assert_eq!(f.degree_z().unwrap(), 3);
        // 1 - x^2 - y^2 = z^2 has degree 2
        let s = LocalizedFun::from_sphere(SphereFun::monomial(rat_i(1), 0, 0, 2));
        assert_eq!(s.degree_z().unwrap(), 2);
        // x/z^2 has degree -2
        let g = LocalizedFun::new(SphereFun::coordinate(Coord::X), (0, 0, 2));
        assert_eq!(g.degree_z().unwrap(), -2);
        assert_eq!(LocalizedFun::zero().degree_z(), Err(Error::ZeroInput));
        // the same filtration works for the other coordinates
        let h = LocalizedFun::new(SphereFun::monomial(rat_i(1), 2, 0, 1), (0, 1, 0));
        assert_eq!(h.degree_coord(Coord::X).unwrap(), 2);
        assert_eq!(h.degree_coord(Coord::Y).unwrap(), -1);
        assert_eq!(h.degree_coord(Coord::Z).unwrap(), 1);
    }

    #[test]
    fn inversion_of_monomial_units() {
        let f = LocalizedFun::new(SphereFun::monomial(rat_i(3), 2, 0, 1), (0, 1, 0));
        let inv = f.inverse().unwrap();
        assert_eq!(f.mul(&inv), LocalizedFun::one());
        // z^2 in disguise
        let s = LocalizedFun::from_sphere(SphereFun::monomial(rat_i(1), 0, 0, 2));
        let s_inv = s.inverse().unwrap();
        assert_eq!(s.mul(&s_inv), LocalizedFun::one());
        // x + y is not a unit
        let bad = x().add(&LocalizedFun::coordinate(Coord::Y));
        assert!(bad.inverse().is_err());
    }

    #[test]
    fn z_shift_round_trip() {
        let f = LocalizedFun::new(SphereFun::coordinate(Coord::X), (0, 0, 2));
        assert_eq!(f.z_shift(3).z_shift(-3), f);
        assert_eq!(f.z_shift(2).degree_z().unwrap(), 0);
    }

    #[test]
    fn evaluation_outside_chart_fails() {
        let pt = SpherePoint::new(rat_i(1), rat_i(0), rat_i(0)).unwrap();
        let f = LocalizedFun::new(SphereFun::one(), (0, 0, 1));
        assert_eq!(f.eval(&pt), Err(Error::DivisionByZero));
        let g = LocalizedFun::new(SphereFun::one(), (1, 0, 0));
        assert_eq!(g.eval(&pt).unwrap(), rat_i(1));
    }
}
