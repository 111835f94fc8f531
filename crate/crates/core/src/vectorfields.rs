//! The Lie algebra of polynomial vector fields on the sphere.
//!
//! A field is a constrained ambient triple `f1 d/dx + f2 d/dy + f3 d/dz`
//! with `x f1 + y f2 + z f3 = 0` (tangency to the sphere). The three
//! rotation fields `Δ12 = y d/dx - x d/dy`, `Δ23 = z d/dy - y d/dz`,
//! `Δ31 = x d/dz - z d/dx` generate everything over the ring, subject to
//! the single relation `x Δ23 + y Δ31 + z Δ12 = 0`.

use crate::rational::rat_i;
use crate::ring::{parse_sphere, Chart, Coord, LocalizedFun, SphereFun};
use crate::{Error, Result};

/// A tangent vector field as a constrained ambient triple.
///
/// The canonical representation is the triple itself: unlike combinations
/// of the rotation fields it is unique, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VField {
    components: [SphereFun; 3],
}

/// Coefficients `(a, b, c)` of `a Δ23 + b Δ31 + c Δ12`.
///
/// Not a unique representation: adding any multiple of `(x, y, z)` gives
/// the same field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCombination {
    pub a: SphereFun,
    pub b: SphereFun,
    pub c: SphereFun,
}

impl VField {
    /// Builds a field from its ambient components, checking tangency.
    pub fn new(f1: SphereFun, f2: SphereFun, f3: SphereFun) -> Result<Self> {
        let constraint = SphereFun::coordinate(Coord::X)
            .mul(&f1)
            .add(&SphereFun::coordinate(Coord::Y).mul(&f2))
            .add(&SphereFun::coordinate(Coord::Z).mul(&f3));
        if !constraint.is_zero() {
            return Err(Error::NotTangent);
        }
        Ok(Self {
            components: [f1, f2, f3],
        })
    }

    pub fn zero() -> Self {
        Self {
            components: [SphereFun::zero(), SphereFun::zero(), SphereFun::zero()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SphereFun::is_zero)
    }

    pub fn components(&self) -> &[SphereFun; 3] {
        &self.components
    }

    pub fn component(&self, c: Coord) -> &SphereFun {
        &self.components[c.index() - 1]
    }

    /// The rotation field `Δ_ij = x_j d/dx_i - x_i d/dx_j`.
    pub fn delta(i: usize, j: usize) -> Result<Self> {
        if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(Error::BadDeltaIndices(i, j));
        }
        let xi = SphereFun::coordinate(Coord::from_index(i).unwrap());
        let xj = SphereFun::coordinate(Coord::from_index(j).unwrap());
        let mut comps = [SphereFun::zero(), SphereFun::zero(), SphereFun::zero()];
        comps[i - 1] = xj;
        comps[j - 1] = xi.neg();
        // tangency: x_i x_j - x_j x_i = 0
        Ok(Self { components: comps })
    }

    /// `Δ12`, `Δ23`, `Δ31` in the order used throughout.
    pub fn deltas() -> [Self; 3] {
        [
            Self::delta(1, 2).unwrap(),
            Self::delta(2, 3).unwrap(),
            Self::delta(3, 1).unwrap(),
        ]
    }

    /// `a Δ23 + b Δ31 + c Δ12`.
    pub fn from_deltas(d: &DeltaCombination) -> Self {
        let [d12, d23, d31] = Self::deltas();
        d23.scale_fun(&d.a)
            .add(&d31.scale_fun(&d.b))
            .add(&d12.scale_fun(&d.c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: [
                self.components[0].add(&other.components[0]),
                self.components[1].add(&other.components[1]),
                self.components[2].add(&other.components[2]),
            ],
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            components: [
                self.components[0].neg(),
                self.components[1].neg(),
                self.components[2].neg(),
            ],
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by a ring element (the module structure over A).
    pub fn scale_fun(&self, a: &SphereFun) -> Self {
        Self {
            components: [
                self.components[0].mul(a),
                self.components[1].mul(a),
                self.components[2].mul(a),
            ],
        }
    }

    /// Derivation action on a ring element.
    pub fn apply(&self, f: &SphereFun) -> SphereFun {
        let mut acc = SphereFun::zero();
        for (comp, coord) in self.components.iter().zip(Coord::ALL) {
            acc = acc.add(&comp.mul(&f.formal_partial(coord)));
        }
        acc
    }

    /// Lie bracket of derivations, as a constrained triple.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut comps = [SphereFun::zero(), SphereFun::zero(), SphereFun::zero()];
        for k in 0..3 {
            comps[k] = self
                .apply(&other.components[k])
                .sub(&other.apply(&self.components[k]));
        }
        // brackets of tangent fields are tangent
        debug_assert!({
            let c = SphereFun::coordinate(Coord::X)
                .mul(&comps[0])
                .add(&SphereFun::coordinate(Coord::Y).mul(&comps[1]))
                .add(&SphereFun::coordinate(Coord::Z).mul(&comps[2]));
            c.is_zero()
        });
        Self { components: comps }
    }

    /// The unique expression `f d/dt1 + g d/dt2` of the field in a chart;
    /// the coefficients are just the values on the chart parameters.
    pub fn to_chart(&self, chart: Chart) -> (LocalizedFun, LocalizedFun) {
        let (t1, t2) = chart.parameters();
        (
            LocalizedFun::from_sphere(self.component(t1).clone()),
            LocalizedFun::from_sphere(self.component(t2).clone()),
        )
    }

    /// Writes the field as `a Δ23 + b Δ31 + c Δ12` with the c-coefficient
    /// free of z (the relation `x Δ23 + y Δ31 + z Δ12 = 0` removes it).
    pub fn to_deltas(&self) -> DeltaCombination {
        // (a, b, c) = f × (x, y, z) solves P × (a,b,c) = f for tangent f
        let [f1, f2, f3] = &self.components;
        let x = SphereFun::coordinate(Coord::X);
        let y = SphereFun::coordinate(Coord::Y);
        let z = SphereFun::coordinate(Coord::Z);
        let a = f2.mul(&z).sub(&f3.mul(&y));
        let b = f3.mul(&x).sub(&f1.mul(&z));
        let c = f1.mul(&y).sub(&f2.mul(&x));
        // replace c_q z Δ12 by -c_q x Δ23 - c_q y Δ31
        let (c_p, c_q) = c.parts();
        let c_q = c_q.clone();
        let c_lin = SphereFun::from_parts(c_p.clone(), crate::ring::PolyXY::zero());
        let cq_fun = SphereFun::from_parts(c_q, crate::ring::PolyXY::zero());
        DeltaCombination {
            a: a.sub(&cq_fun.mul(&x)),
            b: b.sub(&cq_fun.mul(&y)),
            c: c_lin,
        }
    }
}

impl std::fmt::Display for VField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}) d/dx + ({}) d/dy + ({}) d/dz",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

impl std::fmt::Display for DeltaCombination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})*D23 + ({})*D31 + ({})*D12", self.a, self.b, self.c)
    }
}

/// Parses `a*D23 + b*D31 + c*D12` where a, b, c follow the ring grammar.
///
/// Each summand is `[expr *] D23|D31|D12` or a bare generator, combined
/// with `+` and `-`.
pub fn parse_field(src: &str) -> Result<VField> {
    let mut acc = VField::zero();
    let mut rest = src.trim();
    let mut sign = rat_i(1);
    let mut offset = 0usize;
    if rest.is_empty() {
        return Err(Error::parse(0, "empty field expression"));
    }
    if rest == "0" {
        return Ok(acc);
    }
    loop {
        // split off one summand at the next top-level + or -
        let mut depth = 0usize;
        let mut split = rest.len();
        for (i, ch) in rest.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                '+' | '-' if depth == 0 && i > 0 => {
                    // not a leading sign and not inside an exponent like ^-
                    split = i;
                    break;
                }
                _ => {}
            }
        }
        let (summand, tail) = rest.split_at(split);
        let summand_trim = summand.trim();
        let (coef_src, gen) = match summand_trim.rfind('D') {
            Some(dpos) => {
                let gen = summand_trim[dpos..].trim();
                let mut coef = summand_trim[..dpos].trim();
                if let Some(stripped) = coef.strip_suffix('*') {
                    coef = stripped.trim();
                }
                (coef, gen)
            }
            None => {
                return Err(Error::parse(
                    offset,
                    "each summand needs a generator D12, D23 or D31",
                ))
            }
        };
        let delta = match gen {
            "D12" => VField::delta(1, 2).unwrap(),
            "D23" => VField::delta(2, 3).unwrap(),
            "D31" => VField::delta(3, 1).unwrap(),
            "D21" => VField::delta(2, 1).unwrap(),
            "D32" => VField::delta(3, 2).unwrap(),
            "D13" => VField::delta(1, 3).unwrap(),
            other => return Err(Error::parse(offset, format!("unknown generator {other:?}"))),
        };
        let coef = if coef_src.is_empty() {
            SphereFun::one()
        } else if coef_src == "-" {
            SphereFun::one().neg()
        } else {
            parse_sphere(coef_src).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?
        };
        acc = acc.add(&delta.scale_fun(&coef.scale(&sign)));
        if tail.is_empty() {
            return Ok(acc);
        }
        let op = tail.chars().next().unwrap();
        sign = if op == '-' { rat_i(-1) } else { rat_i(1) };
        offset += split + 1;
        rest = &tail[1..];
        if rest.trim().is_empty() {
            return Err(Error::parse(offset, "dangling operator"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> SphereFun {
        SphereFun::coordinate(Coord::X)
    }
    fn y() -> SphereFun {
        SphereFun::coordinate(Coord::Y)
    }
    fn z() -> SphereFun {
        SphereFun::coordinate(Coord::Z)
    }

    #[test]
    fn delta_components() {
        let d12 = VField::delta(1, 2).unwrap();
        assert_eq!(d12.components(), &[y(), x().neg(), SphereFun::zero()]);
        let d23 = VField::delta(2, 3).unwrap();
        assert_eq!(d23.components(), &[SphereFun::zero(), z(), y().neg()]);
        assert_eq!(
            VField::delta(1, 2).unwrap(),
            VField::delta(2, 1).unwrap().neg()
        );
        assert!(VField::delta(2, 2).is_err());
    }

    #[test]
    fn module_relation() {
        // x Δ23 + y Δ31 + z Δ12 = 0
        let rel = VField::from_deltas(&DeltaCombination {
            a: x(),
            b: y(),
            c: z(),
        });
        assert!(rel.is_zero());
        let d23 = VField::from_deltas(&DeltaCombination {
            a: SphereFun::one(),
            b: SphereFun::zero(),
            c: SphereFun::zero(),
        });
        assert_eq!(d23, VField::delta(2, 3).unwrap());
    }

    #[test]
    fn derivation_action() {
        let [d12, d23, _] = VField::deltas();
        assert_eq!(d12.apply(&x()), y());
        assert_eq!(d23.apply(&x()), SphereFun::zero());
        // tangency kills the defining relation
        let rel = x()
            .mul(&x())
            .add(&y().mul(&y()))
            .add(&z().mul(&z()))
            .sub(&SphereFun::one());
        assert!(d12.apply(&rel).is_zero());
        assert!(d23.apply(&rel).is_zero());
    }

    #[test]
    fn bracket_table() {
        let [d12, d23, d31] = VField::deltas();
        assert_eq!(d12.bracket(&d23), d31);
        assert_eq!(d23.bracket(&d31), d12);
        assert_eq!(d31.bracket(&d12), d23);
        assert!(d12.bracket(&d12).is_zero());
    }

    #[test]
    fn chart_table() {
        let [d12, d23, d31] = VField::deltas();
        let lf = |f: SphereFun| LocalizedFun::from_sphere(f);
        assert_eq!(d23.to_chart(Chart::Z), (lf(SphereFun::zero()), lf(z())));
        assert_eq!(
            d31.to_chart(Chart::Z),
            (lf(z().neg()), lf(SphereFun::zero()))
        );
        assert_eq!(d12.to_chart(Chart::Z), (lf(y()), lf(x().neg())));
    }

    #[test]
    fn chart_consistency() {
        // f*(-x/z) + g*(-y/z) = f3 for the chart at z
        for field in VField::deltas() {
            let (f, g) = field.to_chart(Chart::Z);
            let dzdx = crate::ring::partial_sphere(&z(), Coord::X, Chart::Z);
            let dzdy = crate::ring::partial_sphere(&z(), Coord::Y, Chart::Z);
            let lhs = f.mul(&dzdx).add(&g.mul(&dzdy));
            assert_eq!(
                lhs,
                LocalizedFun::from_sphere(field.component(Coord::Z).clone())
            );
        }
    }

    #[test]
    fn delta_combination_round_trip() {
        let field = VField::deltas()[0]
            .scale_fun(&x().mul(&z()))
            .add(&VField::deltas()[1].scale_fun(&y()));
        let combo = field.to_deltas();
        assert_eq!(VField::from_deltas(&combo), field);
        // the c-coefficient carries no z
        assert!(combo.c.parts().1.is_zero());
    }

    #[test]
    fn parse_field_expressions() {
        let f = parse_field("x*D23 + y*D31 + z*D12").unwrap();
        assert!(f.is_zero());
        assert_eq!(parse_field("D23").unwrap(), VField::delta(2, 3).unwrap());
        assert_eq!(
            parse_field("-D12").unwrap(),
            VField::delta(1, 2).unwrap().neg()
        );
        let g = parse_field("(x + y)*D23 - z^2*D31").unwrap();
        let expected = VField::deltas()[1]
            .scale_fun(&x().add(&y()))
            .sub(&VField::deltas()[2].scale_fun(&z().mul(&z())));
        assert_eq!(g, expected);
        assert!(parse_field("x*D99").is_err());
        assert!(parse_field("x + y").is_err());
    }
}
