//! Chart partial derivatives and the vanishing-order valuation.
//!
//! In the chart where the coordinate `h` is invertible, the other two
//! coordinates are independent parameters and `h` satisfies
//! `dh/dt = -t/h` for each parameter t (differentiate the sphere
//! relation). That single rule extends every `d/dt` uniquely from the
//! polynomial subring to the localization, and the extension below is the
//! one used throughout the crate.

use num_traits::Zero;

use crate::rational::rat_i;
use crate::ring::{Chart, Coord, LocalizedFun, SphereFun, SpherePoint};
use crate::{Error, Result};

/// Default cap on the total derivative order explored by [`valuation`].
pub const DEFAULT_VALUATION_CAP: usize = 64;

/// Partial derivative of a ring element with respect to a chart parameter.
///
/// `t` must be one of the two parameters of `chart`; the result lives in
/// the localization at the chart coordinate.
pub fn partial_sphere(f: &SphereFun, t: Coord, chart: Chart) -> LocalizedFun {
    let h = chart.inverted();
    assert!(t != h, "d/d{t} is not a parameter of the chart at {h}");
    // df/dt = formal_t(f) + formal_h(f) * (-t/h)
    let formal_t = LocalizedFun::from_sphere(f.formal_partial(t));
    let formal_h = f.formal_partial(h);
    let correction = LocalizedFun::new(
        formal_h.mul(&SphereFun::coordinate(t)).scale(&rat_i(-1)),
        h.exps(1),
    );
    formal_t.add(&correction)
}

/// Partial derivative of a localized element with respect to a chart
/// parameter, by the quotient rule.
///
/// The output may require inverting more coordinates than the input did
/// (its denominator reports which); callers working in a single chart can
/// inspect [`LocalizedFun::required_localization`] on the result.
pub fn partial(f: &LocalizedFun, t: Coord, chart: Chart) -> LocalizedFun {
    let (a, b, c) = f.denom();
    let d_num = partial_sphere(f.num(), t, chart);
    if (a, b, c) == (0, 0, 0) {
        return d_num;
    }
    // f = n/m  =>  df = dn/m - n dm/m^2   with m = x^a y^b z^c
    let m = SphereFun::monomial(rat_i(1), a, b, 0).mul_z_power(c);
    let dm = partial_sphere(&m, t, chart);
    let inv_m = LocalizedFun::new(SphereFun::one(), (a, b, c));
    let inv_m2 = LocalizedFun::new(SphereFun::one(), (2 * a, 2 * b, 2 * c));
    d_num.mul(&inv_m).sub(
        &LocalizedFun::from_sphere(f.num().clone())
            .mul(&dm)
            .mul(&inv_m2),
    )
}

/// Least total order of chart partials whose value at `p` is nonzero.
///
/// Terminates for every nonzero input (the order is finite in
/// characteristic zero); `cap` guards against implementation bugs.
pub fn valuation(f: &LocalizedFun, p: &SpherePoint, chart: Chart, cap: usize) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p.coord(chart.inverted()).is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (t1, t2) = chart.parameters();
    // level[i] = (d/dt1)^i (d/dt2)^(n-i) f  at total order n
    let mut level = vec![f.clone()];
    for order in 0..=cap {
        for g in &level {
            if !g.eval(p)?.is_zero() {
                return Ok(order);
            }
        }
        let mut next = Vec::with_capacity(level.len() + 1);
        next.push(partial(&level[0], t2, chart));
        for g in &level {
            next.push(partial(g, t1, chart));
        }
        level = next;
    }
    Err(Error::ValuationCapExceeded(cap))
}
