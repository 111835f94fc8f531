//! Modules `A_(z) ⊗ U_m^alpha` with compatible actions of the ring and of
//! the vector fields.
//!
//! A vector field written in chart coordinates as `f1 d/dt1 + f2 d/dt2`
//! acts on `g ⊗ u` by
//!
//! ```text
//! Σ_i f_i (dg/dt_i) ⊗ u  +  Σ_{p,i} g (df_i/dt_p) ⊗ (E_{p,i} u)
//! ```
//!
//! and the ring acts by multiplication on the function factor. Storage is
//! fixed to the chart at z, where a single canonical form keeps equality
//! cheap; the other charts only enter through the `transition` module.

use num_traits::Zero;

use crate::glmod::{cg_embed, cg_project, e_entries, phi_multiply, GLTensorElement, GLWeight};
use crate::rational::{binomial, format_rat, half_integer, rat_i, Rat};
use crate::ring::{
    parse_localized, partial, partial_sphere, Chart, Coord, LocalizedFun, SphereFun,
};
use crate::vectorfields::VField;
use crate::{Error, Result};

/// An element `Σ g_i ⊗ v_i` of `A_(z) ⊗ U_m^alpha`.
///
/// Coefficients are required to have pure z-power denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMElement {
    weight: GLWeight,
    coeffs: Vec<LocalizedFun>,
}

impl TMElement {
    pub fn new(weight: GLWeight, coeffs: Vec<LocalizedFun>) -> Result<Self> {
        if coeffs.len() != weight.dim() {
            return Err(Error::WeightMismatch(
                weight.to_string(),
                format!("{} coefficients", coeffs.len()),
            ));
        }
        if coeffs.iter().any(|c| !c.is_z_local()) {
            return Err(Error::NotZLocal);
        }
        Ok(Self { weight, coeffs })
    }

    pub fn zero(weight: GLWeight) -> Self {
        let coeffs = vec![LocalizedFun::zero(); weight.dim()];
        Self { weight, coeffs }
    }

    /// `g ⊗ v_i`.
    pub fn single(weight: GLWeight, i: usize, g: LocalizedFun) -> Result<Self> {
        let mut out = Self::zero(weight);
        if i >= out.coeffs.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: out.coeffs.len() - 1,
            });
        }
        if !g.is_z_local() {
            return Err(Error::NotZLocal);
        }
        out.coeffs[i] = g;
        Ok(out)
    }

    pub fn weight(&self) -> &GLWeight {
        &self.weight
    }

    pub fn coeffs(&self) -> &[LocalizedFun] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LocalizedFun::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.weight, other.weight);
        Self {
            weight: self.weight.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(|g| g.scale(c)).collect(),
        }
    }

    /// The ring action: componentwise multiplication.
    pub fn a_mult(&self, a: &SphereFun) -> Self {
        Self {
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(|g| g.mul_sphere(a)).collect(),
        }
    }

    /// Multiplication by `z^k`, any sign.
    pub fn z_shift(&self, k: i64) -> Self {
        Self {
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(|g| g.z_shift(k)).collect(),
        }
    }

    /// Filtration degree: minimum z-degree over the nonzero coefficients.
    pub fn deg(&self) -> Result<i64> {
        let mut best: Option<i64> = None;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let d = c.degree_z()?;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
        best.ok_or(Error::ZeroInput)
    }

    /// Vector-field action in the storage chart.
    pub fn vf_act(&self, field: &VField) -> Self {
        let coeffs = vf_act_in_chart(Chart::Z, field, &self.weight, &self.coeffs);
        Self {
            weight: self.weight.clone(),
            coeffs,
        }
    }

    /// Serializes as `{"m": .., "alpha": "p/q", "coeffs": [..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.weight.m,
            "alpha": format_rat(&self.weight.alpha),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for TMElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 [{}]", self.weight);
        }
        let mut first = true;
        for (i, g) in self.coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({g}) ⊗ v{i}")?;
            first = false;
        }
        write!(f, " [{}]", self.weight)
    }
}

/// The action formula in an arbitrary chart, on a raw coefficient vector.
///
/// Exposed at this generality so the transition checks can act in charts
/// other than the storage chart; coefficients may then require more
/// inverted coordinates than z.
pub fn vf_act_in_chart(
    chart: Chart,
    field: &VField,
    weight: &GLWeight,
    coeffs: &[LocalizedFun],
) -> Vec<LocalizedFun> {
    let (t1, t2) = chart.parameters();
    let f = [field.component(t1).clone(), field.component(t2).clone()];
    // df[i][p] = df_i/dt_p
    let df = [
        [
            partial_sphere(&f[0], t1, chart),
            partial_sphere(&f[0], t2, chart),
        ],
        [
            partial_sphere(&f[1], t1, chart),
            partial_sphere(&f[1], t2, chart),
        ],
    ];
    let mut out = vec![LocalizedFun::zero(); weight.dim()];
    for (j, g) in coeffs.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        // transport term: Σ_i f_i dg/dt_i
        for (fi, ti) in f.iter().zip([t1, t2]) {
            if !fi.is_zero() {
                out[j] = out[j].add(&partial(g, ti, chart).mul_sphere(fi));
            }
        }
        // gl2 term: Σ_{p,i} g (df_i/dt_p) ⊗ E_{p,i} v_j
        for p in 1..=2usize {
            for i in 1..=2usize {
                let dfi = &df[i - 1][p - 1];
                if dfi.is_zero() {
                    continue;
                }
                for (to, from, c) in e_entries(p, i, weight) {
                    if from == j {
                        out[to] = out[to].add(&g.mul(dfi).scale(&c));
                    }
                }
            }
        }
    }
    out
}

/// Derivation action of a field on a localized scalar, in the chart at z.
pub fn field_apply_localized(field: &VField, g: &LocalizedFun) -> LocalizedFun {
    let (f1, f2) = field.to_chart(Chart::Z);
    partial(g, Coord::X, Chart::Z)
        .mul(&f1)
        .add(&partial(g, Coord::Y, Chart::Z).mul(&f2))
}

/// Exactness of the compatibility law `η(a·v) = η(a)·v + a·(η·v)`.
pub fn compatibility_check(field: &VField, a: &SphereFun, v: &TMElement) -> bool {
    let lhs = v.a_mult(a).vf_act(field);
    let rhs = v.a_mult(&field.apply(a)).add(&v.vf_act(field).a_mult(a));
    lhs == rhs
}

/// The bounded-submodule generator
/// `w_m = Σ_i z^{-(alpha+m)/2} x^{m-i} y^i ⊗ v_i`.
///
/// Exists exactly when `(m - alpha)/2` is an integer; otherwise the module
/// has no bounded submodule at all and the exponent is the obstruction.
pub fn w_generator(m: usize, alpha: &Rat) -> Result<TMElement> {
    let sum = alpha + rat_i(m as i64);
    let Some(half) = half_integer(&sum) else {
        return Err(Error::NonIntegralExponent {
            m,
            alpha: format_rat(alpha),
            sign: '+',
        });
    };
    let e: i64 = (-half).try_into().expect("exponent fits i64");
    let weight = GLWeight::new(m, alpha.clone());
    let mut coeffs = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let mono = SphereFun::monomial(rat_i(1), (m - i) as u32, i as u32, 0);
        coeffs.push(LocalizedFun::z_power(e).mul_sphere(&mono));
    }
    TMElement::new(weight, coeffs)
}

/// Embedding of a 1-form `gx dx + gy dy` into `A_(z) ⊗ U_1^1`
/// (`dx -> 1 ⊗ v_0`, `dy -> 1 ⊗ v_1`).
pub fn omega_embed(gx: LocalizedFun, gy: LocalizedFun) -> Result<TMElement> {
    TMElement::new(GLWeight::new(1, rat_i(1)), vec![gx, gy])
}

/// The differential of a ring element as a 1-form in the chart at z.
pub fn omega_d(f: &SphereFun) -> TMElement {
    let gx = partial_sphere(f, Coord::X, Chart::Z);
    let gy = partial_sphere(f, Coord::Y, Chart::Z);
    omega_embed(gx, gy).expect("differentials are z-local")
}

/// Embedding of a vector field into `A_(z) ⊗ U_1^{-1}`.
///
/// With `η = f1 d/dx + f2 d/dy` the image is `-f2 ⊗ v_0 + f1 ⊗ v_1`: this
/// is the unique (up to scale) assignment making the module action agree
/// with the adjoint action, and it sends `Δ12` to `w_1` for `(m, alpha) =
/// (1, -1)`. Matching weights under `E11 - E22` forces `d/dx` into the
/// `v_1` line, not `v_0`.
pub fn vf_embed(field: &VField) -> TMElement {
    let (f1, f2) = field.to_chart(Chart::Z);
    TMElement::new(GLWeight::new(1, rat_i(-1)), vec![f2.neg(), f1])
        .expect("chart components are polynomial")
}

/// `z ⊗ E_pq` applied directly: `Σ z g_k ⊗ E_pq v_k`.
pub fn derived_ze_direct(p: usize, q: usize, v: &TMElement) -> TMElement {
    let mut out = TMElement::zero(v.weight.clone());
    for (to, from, c) in e_entries(p, q, &v.weight) {
        out.coeffs[to] = out.coeffs[to].add(&v.coeffs[from].z_shift(1).scale(&c));
    }
    out
}

/// `z ⊗ E_pq` realized inside the module: the combination
/// `s ((f μ)·v - f (μ·v))` with
///
/// ```text
/// E12: (Δ23, x, +)    E22: (Δ23, y, +)
/// E11: (Δ31, x, -)    E21: (Δ31, y, -)
/// ```
///
/// Both routes must agree; their agreement is the closure property of
/// submodules under `z ⊗ E_pq`.
pub fn derived_ze_witness(p: usize, q: usize, v: &TMElement) -> TMElement {
    let d23 = VField::delta(2, 3).unwrap();
    let d31 = VField::delta(3, 1).unwrap();
    let (mu, f, sign) = match (p, q) {
        (1, 2) => (d23, Coord::X, 1),
        (2, 2) => (d23, Coord::Y, 1),
        (1, 1) => (d31, Coord::X, -1),
        (2, 1) => (d31, Coord::Y, -1),
        _ => panic!("gl2 indices"),
    };
    let f = SphereFun::coordinate(f);
    let scaled_field = mu.scale_fun(&f);
    let lhs = v.vf_act(&scaled_field);
    let rhs = v.vf_act(&mu).a_mult(&f);
    lhs.sub(&rhs).scale(&rat_i(sign))
}

/// Invariant pairing `A_(z)⊗U_m^alpha × A_(z)⊗U_m^{-alpha} -> A_(z)`.
///
/// On coefficients: `Σ_k (-1)^{m-k} C(m,k) g_k h_{m-k}`, the A-bilinear
/// extension of the equivariant identification of `U_m^{-alpha}` with the
/// dual; it satisfies `η<v,w> = <η v, w> + <v, η w>` and pairs the field
/// and 1-form realizations to the evaluation of forms on fields.
pub fn dual_pair(v: &TMElement, w: &TMElement) -> Result<LocalizedFun> {
    if v.weight.m != w.weight.m || v.weight.alpha != -w.weight.alpha.clone() {
        return Err(Error::WeightMismatch(
            v.weight.to_string(),
            w.weight.to_string(),
        ));
    }
    let m = v.weight.m;
    let mut acc = LocalizedFun::zero();
    for k in 0..=m {
        let sign = if (m - k).is_multiple_of(2) {
            rat_i(1)
        } else {
            rat_i(-1)
        };
        let c = sign * binomial(m, k);
        acc = acc.add(&v.coeffs[k].mul(&w.coeffs[m - k]).scale(&c));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Tensor products over the ring
// ---------------------------------------------------------------------------

/// Element of `A_(z) ⊗ (U_m^alpha ⊗ U_n^beta)`; the ring acts diagonally,
/// so one function coefficient per tensor basis vector suffices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMTensorElement {
    left: GLWeight,
    right: GLWeight,
    mat: Vec<Vec<LocalizedFun>>,
}

impl TMTensorElement {
    pub fn zero(left: GLWeight, right: GLWeight) -> Self {
        let mat = vec![vec![LocalizedFun::zero(); right.dim()]; left.dim()];
        Self { left, right, mat }
    }

    pub fn weights(&self) -> (&GLWeight, &GLWeight) {
        (&self.left, &self.right)
    }

    pub fn entry(&self, i: usize, j: usize) -> &LocalizedFun {
        &self.mat[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.mat
            .iter()
            .all(|row| row.iter().all(LocalizedFun::is_zero))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((&self.left, &self.right), (&other.left, &other.right));
        let mut out = self.clone();
        for (r, row) in other.mat.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out.mat[r][c] = out.mat[r][c].add(v);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, row) in other.mat.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out.mat[r][c] = out.mat[r][c].sub(v);
            }
        }
        out
    }

    pub fn a_mult(&self, a: &SphereFun) -> Self {
        let mut out = self.clone();
        for row in &mut out.mat {
            for v in row.iter_mut() {
                *v = v.mul_sphere(a);
            }
        }
        out
    }

    /// The action formula with the coproduct on the gl2 factor.
    pub fn vf_act(&self, field: &VField) -> Self {
        let chart = Chart::Z;
        let (t1, t2) = chart.parameters();
        let f = [field.component(t1).clone(), field.component(t2).clone()];
        let df = [
            [
                partial_sphere(&f[0], t1, chart),
                partial_sphere(&f[0], t2, chart),
            ],
            [
                partial_sphere(&f[1], t1, chart),
                partial_sphere(&f[1], t2, chart),
            ],
        ];
        let mut out = Self::zero(self.left.clone(), self.right.clone());
        for r in 0..self.left.dim() {
            for c in 0..self.right.dim() {
                let g = &self.mat[r][c];
                if g.is_zero() {
                    continue;
                }
                for (fi, ti) in f.iter().zip([t1, t2]) {
                    if !fi.is_zero() {
                        out.mat[r][c] = out.mat[r][c].add(&partial(g, ti, chart).mul_sphere(fi));
                    }
                }
                for p in 1..=2usize {
                    for i in 1..=2usize {
                        let dfi = &df[i - 1][p - 1];
                        if dfi.is_zero() {
                            continue;
                        }
                        let g_dfi = g.mul(dfi);
                        for (to, from, coef) in e_entries(p, i, &self.left) {
                            if from == r {
                                out.mat[to][c] = out.mat[to][c].add(&g_dfi.scale(&coef));
                            }
                        }
                        for (to, from, coef) in e_entries(p, i, &self.right) {
                            if from == c {
                                out.mat[r][to] = out.mat[r][to].add(&g_dfi.scale(&coef));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A-balanced tensor of two elements: coefficients multiply in `A_(z)`.
pub fn tensor(v: &TMElement, w: &TMElement) -> TMTensorElement {
    let mut out = TMTensorElement::zero(v.weight.clone(), w.weight.clone());
    for (i, a) in v.coeffs.iter().enumerate() {
        for (j, b) in w.coeffs.iter().enumerate() {
            out.mat[i][j] = a.mul(b);
        }
    }
    out
}

/// Projection onto the k-th summand, coefficientwise over the ring.
pub fn project(k: usize, t: &TMTensorElement) -> Result<TMElement> {
    let weight = t.left.tensor_summand(&t.right, k)?;
    let dim_r = t.right.dim();
    let mut out = TMElement::zero(weight.clone());
    for i in 0..t.left.dim() {
        for j in 0..dim_r {
            let g = &t.mat[i][j];
            if g.is_zero() {
                continue;
            }
            let basis = GLTensorElement::basis(t.left.clone(), t.right.clone(), i, j);
            let coords = cg_project(k, &basis)?;
            for (r, c) in coords.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.coeffs[r] = out.coeffs[r].add(&g.scale(c));
                }
            }
        }
    }
    Ok(out)
}

/// Inclusion of the k-th summand into the tensor square, over the ring.
pub fn embed(
    k: usize,
    u: &TMElement,
    left: &GLWeight,
    right: &GLWeight,
) -> Result<TMTensorElement> {
    let mut out = TMTensorElement::zero(left.clone(), right.clone());
    for (r, g) in u.coeffs.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut unit = crate::glmod::GLElement::zero(u.weight.clone());
        unit.coeffs[r] = rat_i(1);
        let cols = cg_embed(k, &unit, left, right)?;
        for i in 0..left.dim() {
            for j in 0..right.dim() {
                if !cols.mat[i][j].is_zero() {
                    out.mat[i][j] = out.mat[i][j].add(&g.scale(&cols.mat[i][j]));
                }
            }
        }
    }
    Ok(out)
}

/// The multiplication morphism on function-coefficient tensors.
pub fn phi_multiply_tm(t: &TMTensorElement) -> TMElement {
    let weight = GLWeight::new(t.left.m + t.right.m, &t.left.alpha + &t.right.alpha);
    let mut out = TMElement::zero(weight.clone());
    for i in 0..t.left.dim() {
        for j in 0..t.right.dim() {
            let g = &t.mat[i][j];
            if g.is_zero() {
                continue;
            }
            let basis = GLTensorElement::basis(t.left.clone(), t.right.clone(), i, j);
            let image = phi_multiply(&basis);
            for (r, c) in image.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.coeffs[r] = out.coeffs[r].add(&g.scale(c));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Element parsing for the command line
// ---------------------------------------------------------------------------

/// Parses `g1 (x) v0 + g2 (x) v1 + ...` (also `⊗` for `(x)`) into an
/// element of the module with the given weight; `0` is the zero element.
pub fn parse_element(src: &str, weight: &GLWeight) -> Result<TMElement> {
    let trimmed = src.trim();
    if trimmed == "0" {
        return Ok(TMElement::zero(weight.clone()));
    }
    let mut out = TMElement::zero(weight.clone());
    let mut rest = trimmed;
    let mut sign = rat_i(1);
    let mut offset = 0usize;
    loop {
        let mut depth = 0usize;
        let mut split = rest.len();
        for (i, ch) in rest.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                '+' | '-' if depth == 0 && i > 0 => {
                    split = i;
                    break;
                }
                _ => {}
            }
        }
        let (summand, tail) = rest.split_at(split);
        let summand = summand.trim();
        let elem = parse_summand(summand, weight, offset)?;
        out = out.add(&elem.scale(&sign));
        if tail.is_empty() {
            return Ok(out);
        }
        sign = if tail.starts_with('-') {
            rat_i(-1)
        } else {
            rat_i(1)
        };
        offset += split + 1;
        rest = &tail[1..];
        if rest.trim().is_empty() {
            return Err(Error::parse(offset, "dangling operator"));
        }
    }
}

fn parse_summand(summand: &str, weight: &GLWeight, offset: usize) -> Result<TMElement> {
    let vpos = summand
        .rfind('v')
        .ok_or_else(|| Error::parse(offset, "summand must end in a basis vector v<i>"))?;
    let idx: usize = summand[vpos + 1..]
        .trim()
        .parse()
        .map_err(|_| Error::parse(offset + vpos, "expected v<i> with an index"))?;
    if idx >= weight.dim() {
        return Err(Error::IndexOutOfRange {
            index: idx,
            max: weight.dim() - 1,
        });
    }
    let before = summand[..vpos].trim_end();
    let coef_src = if let Some(stripped) = before.strip_suffix("(x)") {
        stripped.trim()
    } else if let Some(stripped) = before.strip_suffix('⊗') {
        stripped.trim()
    } else if before.is_empty() {
        ""
    } else {
        return Err(Error::parse(
            offset,
            "expected `(x)` or `⊗` before the basis vector",
        ));
    };
    let g = if coef_src.is_empty() {
        LocalizedFun::one()
    } else {
        parse_localized(coef_src).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + offset,
                msg,
            },
            other => other,
        })?
    };
    if !g.is_z_local() {
        return Err(Error::NotZLocal);
    }
    TMElement::single(weight.clone(), idx, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn u(m: usize, alpha: i64) -> GLWeight {
        GLWeight::new(m, rat_i(alpha))
    }

    fn x() -> SphereFun {
        SphereFun::coordinate(Coord::X)
    }
    fn y() -> SphereFun {
        SphereFun::coordinate(Coord::Y)
    }
    fn z() -> SphereFun {
        SphereFun::coordinate(Coord::Z)
    }

    /// Closed-form oracle for the rotation field on a pure z-power:
    /// `Δ23 (z^N ⊗ v_0) = -(N + (alpha - m)/2) z^{N-1} y ⊗ v_0`.
    #[test]
    fn delta23_on_z_power() {
        let d23 = VField::delta(2, 3).unwrap();
        for m in 0..=3usize {
            for alpha in -4..=4i64 {
                for n in -3..=5i64 {
                    let w = u(m, alpha);
                    let v = TMElement::single(w.clone(), 0, LocalizedFun::z_power(n)).unwrap();
                    let acted = v.vf_act(&d23);
                    let coef = -(rat_i(n) + (rat_i(alpha) - rat_i(m as i64)) * rat(1, 2));
                    let expected = TMElement::single(
                        w,
                        0,
                        LocalizedFun::z_power(n - 1).mul_sphere(&y()).scale(&coef),
                    )
                    .unwrap();
                    assert_eq!(acted, expected, "m={m} alpha={alpha} N={n}");
                }
            }
        }
    }

    #[test]
    fn delta12_kills_constants_in_rank_one() {
        let d12 = VField::delta(1, 2).unwrap();
        let v = TMElement::single(u(0, 5), 0, LocalizedFun::one()).unwrap();
        assert!(v.vf_act(&d12).is_zero());
    }

    /// Rank-1 reduction: `Δ23 (z^k a ⊗ v_0) = -(k + alpha/2) a y z^{k-1} ⊗ v_0`
    /// modulo `z^k A ⊗ U`.
    #[test]
    fn rank_one_reduction_mod_filtration() {
        let d23 = VField::delta(2, 3).unwrap();
        let a = x().mul(&x()).add(&y().scale(&rat_i(2)));
        for alpha in [-4i64, -2, 0, 2] {
            for k in [-2i64, 0, 1, 3] {
                let w = u(0, alpha);
                let v = TMElement::single(w.clone(), 0, LocalizedFun::z_power(k).mul_sphere(&a))
                    .unwrap();
                let acted = v.vf_act(&d23);
                let coef = -(rat_i(k) + rat(alpha, 2));
                let principal = TMElement::single(
                    w,
                    0,
                    LocalizedFun::z_power(k - 1)
                        .mul_sphere(&a.mul(&y()))
                        .scale(&coef),
                )
                .unwrap();
                let difference = acted.sub(&principal);
                if !difference.is_zero() {
                    assert!(
                        difference.deg().unwrap() >= k,
                        "remainder must stay in z^k A"
                    );
                }
            }
        }
    }

    #[test]
    fn ring_action_basics() {
        let w = u(1, 1);
        let v = TMElement::new(
            w,
            vec![LocalizedFun::z_power(-1), LocalizedFun::from_sphere(x())],
        )
        .unwrap();
        // 1·v = v and z·(z^{-1} ⊗ v0) = 1 ⊗ v0
        assert_eq!(v.a_mult(&SphereFun::one()), v);
        assert_eq!(
            TMElement::single(u(0, 0), 0, LocalizedFun::z_power(-1))
                .unwrap()
                .a_mult(&z()),
            TMElement::single(u(0, 0), 0, LocalizedFun::one()).unwrap()
        );
        // (ab)·v = a·(b·v)
        let a = x().add(&z());
        let b = y().mul(&y()).sub(&SphereFun::one());
        assert_eq!(v.a_mult(&a.mul(&b)), v.a_mult(&b).a_mult(&a));
    }

    #[test]
    fn compatibility_on_a_sample() {
        let d23 = VField::delta(2, 3).unwrap();
        let v = TMElement::single(u(0, 3), 0, LocalizedFun::one()).unwrap();
        assert!(compatibility_check(&d23, &x(), &v));
    }

    #[test]
    fn degrees_of_elements() {
        let w = u(1, 1);
        // z^3 ⊗ v0 + z ⊗ v1 has degree 1
        let v = TMElement::new(
            w.clone(),
            vec![LocalizedFun::z_power(3), LocalizedFun::z_power(1)],
        )
        .unwrap();
        assert_eq!(v.deg().unwrap(), 1);
        let w1 = w_generator(1, &rat_i(1)).unwrap();
        assert_eq!(w1.deg().unwrap(), -1);
        assert_eq!(w1.a_mult(&z()).deg().unwrap(), 0);
        assert!(TMElement::zero(w).deg().is_err());
    }

    #[test]
    fn w_generator_formula() {
        // (0, -2): z ⊗ v0
        let w0 = w_generator(0, &rat_i(-2)).unwrap();
        assert_eq!(
            w0,
            TMElement::single(u(0, -2), 0, LocalizedFun::z_power(1)).unwrap()
        );
        // (1, 1): z^{-1} x ⊗ v0 + z^{-1} y ⊗ v1
        let w1 = w_generator(1, &rat_i(1)).unwrap();
        let expected = TMElement::new(
            u(1, 1),
            vec![
                LocalizedFun::z_power(-1).mul_sphere(&x()),
                LocalizedFun::z_power(-1).mul_sphere(&y()),
            ],
        )
        .unwrap();
        assert_eq!(w1, expected);
        // (1, 0): obstruction
        assert!(matches!(
            w_generator(1, &rat_i(0)),
            Err(Error::NonIntegralExponent { .. })
        ));
    }

    #[test]
    fn omega_generator_is_minus_w1() {
        // dz = -z^{-1} x dx - z^{-1} y dy
        let dz = omega_d(&z());
        assert_eq!(dz, w_generator(1, &rat_i(1)).unwrap().neg());
    }

    #[test]
    fn vf_embed_sends_delta12_to_w1() {
        let d12 = VField::delta(1, 2).unwrap();
        assert_eq!(vf_embed(&d12), w_generator(1, &rat_i(-1)).unwrap());
    }

    #[test]
    fn vf_embed_intertwines_adjoint_action() {
        let [d12, d23, d31] = VField::deltas();
        for eta in [&d12, &d23, &d31] {
            for mu in [&d12, &d23, &d31] {
                let lhs = vf_embed(mu).vf_act(eta);
                let rhs = vf_embed(&eta.bracket(mu));
                assert_eq!(lhs, rhs, "adjoint action mismatch");
            }
        }
        // and on an A-multiple
        let mu = d23.scale_fun(&x());
        let lhs = vf_embed(&mu).vf_act(&d12);
        let rhs = vf_embed(&d12.bracket(&mu));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_action_matches_lie_derivative() {
        // L_eta (g1 dx + g2 dy) computed directly from the 1-form formula
        let [d12, d23, d31] = VField::deltas();
        let g1 = LocalizedFun::z_power(-1).mul_sphere(&x());
        let g2 = LocalizedFun::from_sphere(y().mul(&y()));
        for eta in [&d12, &d23, &d31] {
            let form = omega_embed(g1.clone(), g2.clone()).unwrap();
            let acted = form.vf_act(eta);
            let (f1, f2) = eta.to_chart(Chart::Z);
            let d = |g: &LocalizedFun, t: Coord| partial(g, t, Chart::Z);
            let transport =
                |g: &LocalizedFun| d(g, Coord::X).mul(&f1).add(&d(g, Coord::Y).mul(&f2));
            let expected_dx = transport(&g1)
                .add(&g1.mul(&d(&f1, Coord::X)))
                .add(&g2.mul(&d(&f2, Coord::X)));
            let expected_dy = transport(&g2)
                .add(&g1.mul(&d(&f1, Coord::Y)))
                .add(&g2.mul(&d(&f2, Coord::Y)));
            assert_eq!(acted, omega_embed(expected_dx, expected_dy).unwrap());
        }
    }

    #[test]
    fn derived_ze_examples() {
        // direct z E12 on 1 ⊗ v1 in U_1 is z ⊗ v0
        let v = TMElement::single(u(1, 2), 1, LocalizedFun::one()).unwrap();
        let direct = derived_ze_direct(1, 2, &v);
        assert_eq!(
            direct,
            TMElement::single(u(1, 2), 0, LocalizedFun::z_power(1)).unwrap()
        );
        // witness route agrees
        assert_eq!(derived_ze_witness(1, 2, &v), direct);
        // zero stays zero
        for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(derived_ze_direct(p, q, &TMElement::zero(u(2, 0))).is_zero());
        }
    }

    #[test]
    fn dual_pair_examples() {
        // <1 ⊗ v0, 1 ⊗ v0> = 1 in rank one
        let v = TMElement::single(u(0, 2), 0, LocalizedFun::one()).unwrap();
        let w = TMElement::single(u(0, -2), 0, LocalizedFun::one()).unwrap();
        assert_eq!(dual_pair(&v, &w).unwrap(), LocalizedFun::one());
        // <vf_embed(Δ12), omega_embed(dx)> = y: the form dx evaluated on Δ12
        let d12 = VField::delta(1, 2).unwrap();
        let dx = omega_embed(LocalizedFun::one(), LocalizedFun::zero()).unwrap();
        assert_eq!(
            dual_pair(&vf_embed(&d12), &dx).unwrap(),
            LocalizedFun::from_sphere(y())
        );
        // weight mismatch is rejected
        assert!(dual_pair(&v, &v).is_err());
    }

    #[test]
    fn dual_pair_invariance() {
        let [d12, d23, d31] = VField::deltas();
        let v = TMElement::new(
            u(1, -1),
            vec![LocalizedFun::from_sphere(x()), LocalizedFun::z_power(-1)],
        )
        .unwrap();
        let w = TMElement::new(
            u(1, 1),
            vec![
                LocalizedFun::from_sphere(z()),
                LocalizedFun::from_sphere(y().mul(&y())),
            ],
        )
        .unwrap();
        for eta in [&d12, &d23, &d31] {
            let lhs = field_apply_localized(eta, &dual_pair(&v, &w).unwrap());
            let rhs = dual_pair(&v.vf_act(eta), &w)
                .unwrap()
                .add(&dual_pair(&v, &w.vf_act(eta)).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tensor_and_projection_are_a_linear() {
        let wm = w_generator(1, &rat_i(1)).unwrap();
        let wn = w_generator(1, &rat_i(-1)).unwrap();
        let t = tensor(&wm, &wn);
        let a = x().add(&z());
        for k in 0..=1 {
            let lhs = project(k, &t.a_mult(&a)).unwrap();
            let rhs = project(k, &t).unwrap().a_mult(&a);
            assert_eq!(lhs, rhs);
        }
        // reconstruction
        let (l, r) = t.weights();
        let rebuilt = embed(0, &project(0, &t).unwrap(), l, r)
            .unwrap()
            .add(&embed(1, &project(1, &t).unwrap(), l, r).unwrap());
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn projection_commutes_with_the_field_action() {
        // the summand projections are morphisms for the full module
        // structure, not just for the ring action
        let wm = w_generator(2, &rat_i(0)).unwrap();
        let other = w_generator(1, &rat_i(1))
            .unwrap()
            .vf_act(&VField::delta(2, 3).unwrap());
        let t = tensor(&wm, &other);
        for eta in VField::deltas() {
            let acted = t.vf_act(&eta);
            for k in 0..=1 {
                assert_eq!(
                    project(k, &acted).unwrap(),
                    project(k, &t).unwrap().vf_act(&eta),
                    "projection {k} fails to intertwine the action of {eta}"
                );
            }
        }
    }

    #[test]
    fn phi_of_w_generators() {
        for (m, n) in [(0usize, 0usize), (1, 0), (1, 1), (2, 1), (3, 2)] {
            let alpha = rat_i(m as i64);
            let beta = rat_i(-(n as i64));
            let wm = w_generator(m, &alpha).unwrap();
            let wn = w_generator(n, &beta).unwrap();
            let image = phi_multiply_tm(&tensor(&wm, &wn));
            assert_eq!(image, w_generator(m + n, &(alpha + beta)).unwrap());
        }
    }

    #[test]
    fn w_tensor_w_lives_in_the_top_summand() {
        // the coefficient matrix of w_m ⊗ w_n is an outer product, so every
        // lower Clebsch-Gordan component vanishes
        let wm = w_generator(2, &rat_i(0)).unwrap();
        let wn = w_generator(1, &rat_i(1)).unwrap();
        let t = tensor(&wm, &wn);
        assert!(project(1, &t).unwrap().is_zero());
        assert!(!project(0, &t).unwrap().is_zero());
    }

    #[test]
    fn first_layer_boundedness_of_w() {
        for (m, alpha) in [(0, -2i64), (0, 2), (1, 1), (1, -1), (2, 0), (2, 2), (3, 1)] {
            let w = w_generator(m, &rat_i(alpha)).unwrap();
            let d = w.deg().unwrap();
            for delta in VField::deltas() {
                let acted = w.vf_act(&delta);
                if !acted.is_zero() {
                    assert!(
                        acted.deg().unwrap() >= d,
                        "degree dropped for ({m},{alpha})"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_and_print_elements() {
        let w = u(1, 1);
        let v = parse_element("z^2 (x) v0 - x/z (x) v1", &w).unwrap();
        let expected = TMElement::new(
            w.clone(),
            vec![
                LocalizedFun::from_sphere(SphereFun::monomial(rat_i(1), 0, 0, 2)),
                LocalizedFun::new(x().neg(), (0, 0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(v, expected);
        assert!(parse_element("0", &w).unwrap().is_zero());
        // display round trip
        let printed = v.to_string();
        let stripped = printed.rsplit_once(" [").unwrap().0;
        assert_eq!(parse_element(stripped, &w).unwrap(), v);
        // rejects foreign denominators and bad indices
        assert!(parse_element("1/x (x) v0", &w).is_err());
        assert!(parse_element("z (x) v5", &w).is_err());
    }

    #[test]
    fn json_form() {
        let v = w_generator(1, &rat_i(1)).unwrap();
        let json = v.to_json();
        assert_eq!(json["m"], 1);
        assert_eq!(json["alpha"], "1");
        assert_eq!(json["coeffs"][0], "x/z");
    }
}
