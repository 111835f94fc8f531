//! Chart transitions and their action on the module side.
//!
//! For charts at `h` and `h̃` the matrix `C` has entries `dt_i/dt̃_j`
//! (source parameters differentiated in the target chart), and a weight
//! `(m, alpha)` transforms by `ρ(C) = det(C)^{(alpha-m)/2} · Sym^m(C)`.
//! The commuting-diagram check below verifies that one geometric object
//! expressed in two charts is matched by `ρ(C)`.

use num_traits::One;

use crate::avmod::TMElement;
use crate::glmod::GLWeight;
use crate::rational::{binomial, format_rat, half_integer, rat_i, Rat};
use crate::ring::{partial_sphere, Chart, Coord, LocalizedFun, SphereFun};
use crate::vectorfields::VField;
use crate::{Error, Result};

/// 2x2 chart-transition data with its exact determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub from: Chart,
    pub to: Chart,
    /// `entries[i][j] = dt_i / dt̃_j`.
    pub entries: [[LocalizedFun; 2]; 2],
    pub det: LocalizedFun,
}

/// Builds the transition matrix between two charts; the same chart gives
/// the identity.
pub fn transition_matrix(from: Chart, to: Chart) -> TransitionMatrix {
    if from == to {
        return TransitionMatrix {
            from,
            to,
            entries: [
                [LocalizedFun::one(), LocalizedFun::zero()],
                [LocalizedFun::zero(), LocalizedFun::one()],
            ],
            det: LocalizedFun::one(),
        };
    }
    let (s1, s2) = from.parameters();
    let (t1, t2) = to.parameters();
    let entry = |s: Coord, t: Coord| {
        if s == t {
            LocalizedFun::one()
        } else if s != to.inverted() {
            // an independent parameter of the target chart
            LocalizedFun::zero()
        } else {
            partial_sphere(&SphereFun::coordinate(s), t, to)
        }
    };
    let entries = [
        [entry(s1, t1), entry(s1, t2)],
        [entry(s2, t1), entry(s2, t2)],
    ];
    let det = entries[0][0]
        .mul(&entries[1][1])
        .sub(&entries[0][1].mul(&entries[1][0]));
    TransitionMatrix {
        from,
        to,
        entries,
        det,
    }
}

impl TransitionMatrix {
    /// Inverse via the adjugate; the determinant of a sphere transition is
    /// a monomial unit, so this always succeeds for chart matrices.
    pub fn inverse(&self) -> Result<TransitionMatrix> {
        let det_inv = self.det.inverse()?;
        let e = &self.entries;
        Ok(TransitionMatrix {
            from: self.to,
            to: self.from,
            entries: [
                [e[1][1].mul(&det_inv), e[0][1].neg().mul(&det_inv)],
                [e[1][0].neg().mul(&det_inv), e[0][0].mul(&det_inv)],
            ],
            det: det_inv,
        })
    }

    /// Matrix product implementing the chain rule: `self` then `other`
    /// composes a transition `from -> to -> other.to`.
    pub fn compose(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let mut entries = [
            [LocalizedFun::zero(), LocalizedFun::zero()],
            [LocalizedFun::zero(), LocalizedFun::zero()],
        ];
        for i in 0..2 {
            for k in 0..2 {
                let mut acc = LocalizedFun::zero();
                for j in 0..2 {
                    acc = acc.add(&self.entries[i][j].mul(&other.entries[j][k]));
                }
                entries[i][k] = acc;
            }
        }
        TransitionMatrix {
            from: self.from,
            to: other.to,
            det: self.det.mul(&other.det),
            entries,
        }
    }
}

/// An element of `A_(h,h̃,...) ⊗ U_m^alpha` attached to a chart, with no
/// restriction on which coordinates its denominators invert.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartElement {
    pub chart: Chart,
    pub weight: GLWeight,
    pub coeffs: Vec<LocalizedFun>,
}

impl ChartElement {
    pub fn new(chart: Chart, weight: GLWeight, coeffs: Vec<LocalizedFun>) -> Result<Self> {
        if coeffs.len() != weight.dim() {
            return Err(Error::WeightMismatch(
                weight.to_string(),
                format!("{} coefficients", coeffs.len()),
            ));
        }
        Ok(Self {
            chart,
            weight,
            coeffs,
        })
    }

    pub fn from_tm(v: &TMElement) -> Self {
        Self {
            chart: Chart::Z,
            weight: v.weight().clone(),
            coeffs: v.coeffs().to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LocalizedFun::is_zero)
    }

    pub fn neg(&self) -> Self {
        Self {
            chart: self.chart,
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(LocalizedFun::neg).collect(),
        }
    }
}

/// The `(m+1) x (m+1)` matrix of `ρ(C)` on `U_m^alpha` in the `v`-basis,
/// i.e. `det(C)^{(alpha-m)/2}` times the m-th symmetric power.
///
/// Requires the integrality condition `(alpha - m)/2 ∈ ℤ` of tensor
/// modules.
pub fn rho_matrix(weight: &GLWeight, c: &TransitionMatrix) -> Result<Vec<Vec<LocalizedFun>>> {
    let m = weight.m;
    let twist_exp = {
        let diff = &weight.alpha - rat_i(m as i64);
        let Some(half) = half_integer(&diff) else {
            return Err(Error::NonIntegralExponent {
                m,
                alpha: format_rat(&weight.alpha),
                sign: '-',
            });
        };
        let e: i64 = half.try_into().expect("twist exponent fits i64");
        e
    };
    let twist = localized_power(&c.det, twist_exp)?;

    // v_i = C(m,i) X^{m-i} Y^i with X = e_1, Y = e_2; the image of v_i is
    // C(m,i) (CX)^{m-i} (CY)^i expanded back into that basis.
    let cx = [c.entries[0][0].clone(), c.entries[0][1].clone()];
    let cy = [c.entries[1][0].clone(), c.entries[1][1].clone()];
    let mut cols: Vec<Vec<LocalizedFun>> = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let mut form = vec![LocalizedFun::one()];
        for _ in 0..m - i {
            form = linear_mul(&form, &cx);
        }
        for _ in 0..i {
            form = linear_mul(&form, &cy);
        }
        let ci = binomial(m, i);
        let col: Vec<LocalizedFun> = form
            .iter()
            .enumerate()
            .map(|(j, coef)| {
                let scale = &ci / binomial(m, j);
                coef.mul(&twist).scale(&scale)
            })
            .collect();
        cols.push(col);
    }
    // transpose columns into row-major action
    let mut rows = vec![vec![LocalizedFun::zero(); m + 1]; m + 1];
    for (i, col) in cols.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            rows[j][i] = v.clone();
        }
    }
    Ok(rows)
}

/// Multiplies a binary form (coefficients over `X^{d-j} Y^j`) by the
/// linear form `l[0] X + l[1] Y`.
fn linear_mul(form: &[LocalizedFun], l: &[LocalizedFun; 2]) -> Vec<LocalizedFun> {
    let mut out = vec![LocalizedFun::zero(); form.len() + 1];
    for (j, coef) in form.iter().enumerate() {
        out[j] = out[j].add(&coef.mul(&l[0]));
        out[j + 1] = out[j + 1].add(&coef.mul(&l[1]));
    }
    out
}

fn localized_power(base: &LocalizedFun, e: i64) -> Result<LocalizedFun> {
    let positive = if e >= 0 {
        base.clone()
    } else {
        base.inverse()?
    };
    let mut acc = LocalizedFun::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&positive);
    }
    Ok(acc)
}

/// Applies `ρ(C)` to a chart element (the source-chart image of a module
/// element), producing coordinates in the target chart's basis.
pub fn rho_apply(c: &TransitionMatrix, v: &ChartElement) -> Result<ChartElement> {
    if v.chart != c.from {
        return Err(Error::WeightMismatch(
            format!("element in {}", v.chart),
            format!("matrix from {}", c.from),
        ));
    }
    let rho = rho_matrix(&v.weight, c)?;
    let coeffs = rho
        .iter()
        .map(|row| {
            row.iter()
                .zip(&v.coeffs)
                .fold(LocalizedFun::zero(), |acc, (r, g)| acc.add(&r.mul(g)))
        })
        .collect();
    ChartElement::new(c.to, v.weight.clone(), coeffs)
}

/// Cocycle identity `ρ(C_{b→c}) ∘ ρ(C_{a→b}) = ρ(C_{a→c})` as an exact
/// matrix identity over the triply localized ring.
///
/// The matrices here act on coefficient columns, so the composite applies
/// `ρ(C_{a→b})` first; written in the substitution convention this is the
/// product `ρ(C_{a→b}) ρ(C_{b→c})`.
pub fn cocycle_holds(weight: &GLWeight, a: Chart, b: Chart, c: Chart) -> Result<bool> {
    let first = rho_matrix(weight, &transition_matrix(a, b))?;
    let second = rho_matrix(weight, &transition_matrix(b, c))?;
    let direct = rho_matrix(weight, &transition_matrix(a, c))?;
    let n = weight.dim();
    for i in 0..n {
        for j in 0..n {
            let mut acc = LocalizedFun::zero();
            for k in 0..n {
                acc = acc.add(&second[i][k].mul(&first[k][j]));
            }
            if acc != direct[i][j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact commutation of the two-chart diagram on one element: `ρ(C)`
/// applied to the source-chart image must equal the target-chart image.
pub fn check_diagram(img_from: &ChartElement, img_to: &ChartElement) -> Result<bool> {
    if img_from.weight != img_to.weight {
        return Err(Error::WeightMismatch(
            img_from.weight.to_string(),
            img_to.weight.to_string(),
        ));
    }
    if img_from.chart == img_to.chart {
        return Ok(img_from.coeffs == img_to.coeffs);
    }
    let c = transition_matrix(img_from.chart, img_to.chart);
    let moved = rho_apply(&c, img_from)?;
    Ok(moved.coeffs == img_to.coeffs)
}

/// The modules whose chart images the engine can construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    /// `A^alpha` for even integer alpha.
    RankOne(i64),
    /// 1-forms, tracked through the generator `dz`.
    Omega,
    /// Vector fields, tracked through the generator `Δ12`.
    Vect,
    /// The bounded-submodule generator of `U_m^alpha`, realized as the
    /// product of rank-one and 1-form generators so that the per-chart
    /// images all describe one geometric object.
    W(usize, i64),
}

impl std::fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleSpec::RankOne(a) => write!(f, "A^{a}"),
            ModuleSpec::Omega => write!(f, "Omega"),
            ModuleSpec::Vect => write!(f, "Vect"),
            ModuleSpec::W(m, a) => write!(f, "w:{m},{a}"),
        }
    }
}

impl ModuleSpec {
    pub fn weight(&self) -> Result<GLWeight> {
        match self {
            ModuleSpec::RankOne(a) => {
                if a % 2 != 0 {
                    return Err(Error::NonIntegralExponent {
                        m: 0,
                        alpha: a.to_string(),
                        sign: '-',
                    });
                }
                Ok(GLWeight::new(0, rat_i(*a)))
            }
            ModuleSpec::Omega => Ok(GLWeight::new(1, rat_i(1))),
            ModuleSpec::Vect => Ok(GLWeight::new(1, rat_i(-1))),
            ModuleSpec::W(m, a) => {
                if (*m as i64 - a).rem_euclid(2) != 0 {
                    return Err(Error::NonIntegralExponent {
                        m: *m,
                        alpha: a.to_string(),
                        sign: '-',
                    });
                }
                Ok(GLWeight::new(*m, rat_i(*a)))
            }
        }
    }

    /// The image of the module's reference generator in the given chart.
    pub fn generator_image(&self, chart: Chart) -> Result<ChartElement> {
        let weight = self.weight()?;
        match self {
            ModuleSpec::RankOne(a) => {
                let h = chart.inverted();
                let coeff = coordinate_power(h, -a / 2);
                ChartElement::new(chart, weight, vec![coeff])
            }
            ModuleSpec::Omega => Ok(dz_image(chart)),
            ModuleSpec::Vect => Ok(delta12_image(chart)),
            ModuleSpec::W(m, a) => {
                // det twist A^{a-m} times m copies of -dz, multiplied out
                let twist_spec = ModuleSpec::RankOne(a - *m as i64);
                let twist = twist_spec.generator_image(chart)?.coeffs[0].clone();
                let minus_dz = dz_image(chart).neg();
                let mut form = vec![twist];
                for _ in 0..*m {
                    let l = [minus_dz.coeffs[0].clone(), minus_dz.coeffs[1].clone()];
                    form = linear_mul(&form, &l);
                }
                let coeffs: Vec<LocalizedFun> = form
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.scale(&(Rat::one() / binomial(*m, j))))
                    .collect();
                ChartElement::new(chart, weight, coeffs)
            }
        }
    }
}

fn coordinate_power(h: Coord, e: i64) -> LocalizedFun {
    if e >= 0 {
        let mut acc = LocalizedFun::one();
        for _ in 0..e {
            acc = acc.mul_coord(h);
        }
        acc
    } else {
        LocalizedFun::new(SphereFun::one(), h.exps((-e) as u32))
    }
}

/// `dz` expressed in a chart: coefficients `dz/dt_j` over `dt_1, dt_2`.
fn dz_image(chart: Chart) -> ChartElement {
    let (t1, t2) = chart.parameters();
    let z = SphereFun::coordinate(Coord::Z);
    let d = |t: Coord| {
        if t == Coord::Z {
            LocalizedFun::one()
        } else if chart.inverted() == Coord::Z {
            partial_sphere(&z, t, chart)
        } else {
            LocalizedFun::zero()
        }
    };
    ChartElement::new(chart, GLWeight::new(1, rat_i(1)), vec![d(t1), d(t2)])
        .expect("two coefficients")
}

/// `Δ12` embedded in `A ⊗ U_1^{-1}` in a chart: with chart components
/// `(g1, g2)` the image is `-g2 ⊗ v_0 + g1 ⊗ v_1`.
fn delta12_image(chart: Chart) -> ChartElement {
    let d12 = VField::delta(1, 2).unwrap();
    let (g1, g2) = d12.to_chart(chart);
    ChartElement::new(chart, GLWeight::new(1, rat_i(-1)), vec![g2.neg(), g1])
        .expect("two coefficients")
}
